#include <atomic>
#include <thread>

#include "doctest.h"
#include "httplib.h"
#include "json.hpp"
#include "taskworld/evolve.hpp"
#include "taskworld/taskgen.hpp"
#include "test_util.hpp"

using namespace taskworld;
using nlohmann::json;

namespace {

// Minimal in-process endpoint stub.
class StubServer {
 public:
  explicit StubServer(std::function<void(const httplib::Request&, httplib::Response&)> handler) {
    server_.Post("/api", [handler = std::move(handler)](const httplib::Request& req,
                                                        httplib::Response& res) {
      handler(req, res);
    });
    port_ = server_.bind_to_any_port("127.0.0.1");
    thread_ = std::thread([this] { server_.listen_after_bind(); });
    server_.wait_until_ready();
  }

  ~StubServer() {
    server_.stop();
    thread_.join();
  }

  RemoteEndpoint endpoint() const {
    RemoteEndpoint ep;
    ep.url = "http://127.0.0.1:" + std::to_string(port_) + "/api";
    ep.timeout_seconds = 2.0;
    ep.max_retries = 1;
    return ep;
  }

 private:
  httplib::Server server_;
  int port_ = 0;
  std::thread thread_;
};

}  // namespace

TEST_CASE("remote planner round-trips expand and decompose over the wire") {
  const SceneConfig scene = twtest::load_fixture("t3.json");
  std::atomic<int> hits{0};

  StubServer server([&](const httplib::Request& req, httplib::Response& res) {
    ++hits;
    const json body = json::parse(req.body);
    CHECK(body.contains("scene"));
    CHECK(body.at("scene").at("objects").size() == scene.objects.size());
    if (body.at("stage") == "expand") {
      CHECK(body.at("keyword") == "transfer apple into bowl");
      res.set_content(json{{"task_activity_name", "pick_up_apple_and_put_into_bowl"},
                           {"task_detail_message", "pick the apple, drop it in the bowl"}}
                          .dump(),
                      "application/json");
    } else {
      CHECK(body.at("stage") == "decompose");
      CHECK(body.at("prior").at("task_activity_name") == "pick_up_apple_and_put_into_bowl");
      res.set_content(
          json{{"subtasks",
                json::array(
                    {{{"name", "pick_up_apple"},
                      {"description", "grab it"},
                      {"target_id", "apple_0"},
                      {"support_init_id", "cabinet_0"},
                      {"support_goal_id", "cabinet_0"},
                      {"bddl_category", "apple"}},
                     {{"name", "put_apple_into_bowl"},
                      {"description", "drop it"},
                      {"target_id", "apple_0"},
                      {"support_init_id", "gripper"},
                      {"support_goal_id", "bowl_0"},
                      {"bddl_category", "apple"}}})}}
              .dump(),
          "application/json");
    }
  });

  RemotePlanner planner(server.endpoint());
  const GenerationBundle bundle =
      generate(TaskKeyword{"transfer apple into bowl", scene.scene_id}, scene, planner);
  CHECK(bundle.plan.subtasks.size() == 2);
  CHECK(bundle.plan.subtasks[1].support_goal == "bowl_0");
  CHECK(bundle.scales.at("apple_0") == doctest::Approx(0.42));
  CHECK(hits.load() == 2);
}

TEST_CASE("remote planner rejects invalid decompositions instead of repairing them") {
  const SceneConfig scene = twtest::load_fixture("t3.json");
  StubServer server([&](const httplib::Request& req, httplib::Response& res) {
    const json body = json::parse(req.body);
    if (body.at("stage") == "expand") {
      res.set_content(json{{"task_activity_name", "pick_up_apple"},
                           {"task_detail_message", "d"}}
                          .dump(),
                      "application/json");
    } else {
      res.set_content(json{{"subtasks", json::array({{{"name", "pick_up_apple"},
                                                      {"description", "grab"},
                                                      {"target_id", "unicorn_7"},
                                                      {"bddl_category", "apple"}}})}}
                          .dump(),
                      "application/json");
    }
  });

  RemotePlanner planner(server.endpoint());
  try {
    generate(TaskKeyword{"pick up apple", scene.scene_id}, scene, planner);
    FAIL("expected InvalidDecomposition");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::InvalidDecomposition);
  }
}

TEST_CASE("an unreachable planner endpoint surfaces as unavailable after retries") {
  RemoteEndpoint dead;
  dead.url = "http://127.0.0.1:9/api";  // discard port, nothing listens
  dead.timeout_seconds = 0.5;
  dead.max_retries = 1;
  RemotePlanner planner(dead);
  const SceneConfig scene = twtest::load_fixture("t3.json");
  try {
    planner.expand(TaskKeyword{"pick up apple", scene.scene_id}, scene);
    FAIL("expected PlannerUnavailable");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::PlannerUnavailable);
  }
}

TEST_CASE("5xx replies are retried until the endpoint recovers") {
  std::atomic<int> hits{0};
  StubServer server([&](const httplib::Request&, httplib::Response& res) {
    if (++hits == 1) {
      res.status = 503;
      return;
    }
    res.set_content(json{{"task_activity_name", "pick_up_apple"},
                         {"task_detail_message", "d"}}
                        .dump(),
                    "application/json");
  });
  RemotePlanner planner(server.endpoint());
  const SceneConfig scene = twtest::load_fixture("t3.json");
  const ExpandResult result = planner.expand(TaskKeyword{"x", scene.scene_id}, scene);
  CHECK(result.name == "pick_up_apple");
  CHECK(hits.load() == 2);
}

TEST_CASE("remote critic parses step observations and supervised sequences") {
  const SceneConfig raw = twtest::load_fixture("t1.json");
  const GenerationBundle bundle = twtest::make_bundle(raw, "put glass into fridge");
  WorldState world = twtest::make_episode_world(raw, bundle);
  const ExecutionTrace trace = execute_flow(world, bundle.flows[0], bundle.plan.subtasks[0]);
  const ObservationSet obs = capture(trace, EvolutionConfig{});

  StubServer server([&](const httplib::Request& req, httplib::Response& res) {
    const json body = json::parse(req.body);
    if (body.at("role") == "inspector") {
      CHECK(body.at("observations").size() == trace.steps.size());
      CHECK(body.at("observations")[0].contains("views"));
      json observations = json::object();
      observations["Step 0 observation"] = "The robot moved without incident.";
      observations["Step 1 observation"] =
          "The arm collides with the open refrigerator door while advancing.";
      res.set_content(json{{"observations", observations}}.dump(), "application/json");
    } else {
      CHECK(body.at("role") == "supervisor");
      CHECK(body.at("history").is_array());
      res.set_content(json{{"reason", "side-step before advancing"},
                           {"new_sequence", json::parse(R"([18, {"15": 0.3}, {"13": 0.45}, 5])")}}
                          .dump(),
                      "application/json");
    }
  });

  RemoteCritic critic(server.endpoint());
  const auto critiques = inspect_steps(trace, obs, bundle.plan.subtasks[0], critic);
  REQUIRE(critiques.size() == trace.steps.size());
  CHECK(critiques[0].ok());
  CHECK(critiques[1].flags.count(CritiqueFlag::Collision) == 1);
  CHECK(critiques[1].flags.count(CritiqueFlag::DoorDisturbed) == 1);

  EvolutionHistory history;
  const SupervisorProposal proposal =
      supervise(trace, critiques, bundle.plan.subtasks[0], history, critic);
  REQUIRE(proposal.flow.size() == 4);
  CHECK(proposal.flow[0].kind == PrimitiveKind::NavigateToSupport);
  CHECK(proposal.reason == "side-step before advancing");
}

TEST_CASE("critic endpoints that never answer become CriticUnavailable") {
  RemoteEndpoint dead;
  dead.url = "http://127.0.0.1:9/api";
  dead.timeout_seconds = 0.5;
  dead.max_retries = 0;
  RemoteCritic critic(dead);

  const SceneConfig raw = twtest::load_fixture("t1.json");
  const GenerationBundle bundle = twtest::make_bundle(raw, "put glass into fridge");
  WorldState world = twtest::make_episode_world(raw, bundle);
  const ExecutionTrace trace = execute_flow(world, bundle.flows[0], bundle.plan.subtasks[0]);
  const ObservationSet obs = capture(trace, EvolutionConfig{});
  try {
    critic.inspect(trace, obs, bundle.plan.subtasks[0]);
    FAIL("expected CriticUnavailable");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::CriticUnavailable);
  }
}

TEST_CASE("endpoint configuration comes from the environment") {
  ::unsetenv("TW_TEST_URL");
  CHECK_THROWS_AS(endpoint_from_env("TW_TEST_URL", "TW_TEST_TOKEN"), Error);
  ::setenv("TW_TEST_URL", "http://127.0.0.1:8080/plan", 1);
  ::setenv("TW_TEST_TOKEN", "sekrit", 1);
  const RemoteEndpoint ep = endpoint_from_env("TW_TEST_URL", "TW_TEST_TOKEN");
  CHECK(ep.url == "http://127.0.0.1:8080/plan");
  CHECK(ep.token == "sekrit");
  ::unsetenv("TW_TEST_URL");
  ::unsetenv("TW_TEST_TOKEN");
}
