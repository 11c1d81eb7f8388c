#include "taskworld/bddl.hpp"

#include <cctype>
#include <vector>

namespace taskworld {

std::string emit_bddl(const SimpleTask& subtask) {
  subtask.validate();
  std::string out = "(:init\n";
  for (const auto& p : subtask.init) out += "  " + p.to_sexpr() + "\n";
  out += ")\n(:goal\n";
  for (const auto& p : subtask.goal) out += "  " + p.to_sexpr() + "\n";
  out += ")\n";
  return out;
}

namespace {

struct Token {
  enum class Kind { LParen, RParen, Atom } kind;
  std::string text;
  int line;
  int column;
};

class Lexer {
 public:
  explicit Lexer(const std::string& text) : text_(text) {}

  std::vector<Token> run() {
    std::vector<Token> tokens;
    while (pos_ < text_.size()) {
      const char c = text_[pos_];
      if (c == '\n') {
        ++line_;
        column_ = 1;
        ++pos_;
      } else if (std::isspace(static_cast<unsigned char>(c))) {
        advance();
      } else if (c == '(') {
        tokens.push_back({Token::Kind::LParen, "(", line_, column_});
        advance();
      } else if (c == ')') {
        tokens.push_back({Token::Kind::RParen, ")", line_, column_});
        advance();
      } else {
        const int line = line_, column = column_;
        std::string atom;
        while (pos_ < text_.size() && !std::isspace(static_cast<unsigned char>(text_[pos_])) &&
               text_[pos_] != '(' && text_[pos_] != ')') {
          atom += text_[pos_];
          advance();
        }
        tokens.push_back({Token::Kind::Atom, atom, line, column});
      }
    }
    return tokens;
  }

 private:
  void advance() {
    ++pos_;
    ++column_;
  }

  const std::string& text_;
  size_t pos_ = 0;
  int line_ = 1;
  int column_ = 1;
};

[[noreturn]] void fail(const Token* at, const std::string& message) {
  std::string where =
      at ? " at line " + std::to_string(at->line) + ", column " + std::to_string(at->column)
         : " at end of input";
  throw Error(ErrorCode::BddlParseError, message + where);
}

class Parser {
 public:
  explicit Parser(std::vector<Token> tokens) : tokens_(std::move(tokens)) {}

  BddlDocument run() {
    BddlDocument doc;
    bool saw_init = false, saw_goal = false;
    while (!at_end()) {
      expect(Token::Kind::LParen, "expected '('");
      const Token& section = expect(Token::Kind::Atom, "expected :init or :goal");
      Conjunction* dst = nullptr;
      if (section.text == ":init") {
        dst = &doc.init;
        saw_init = true;
      } else if (section.text == ":goal") {
        dst = &doc.goal;
        saw_goal = true;
      } else {
        fail(&section, "unknown section '" + section.text + "'");
      }
      while (!at_end() && peek().kind == Token::Kind::LParen) {
        dst->push_back(parse_literal());
      }
      expect(Token::Kind::RParen, "expected ')' closing the section");
    }
    if (!saw_init || !saw_goal) {
      fail(nullptr, "document must contain both (:init ...) and (:goal ...)");
    }
    return doc;
  }

 private:
  Predicate parse_literal() {
    expect(Token::Kind::LParen, "expected '(' opening a predicate");
    const Token& head = expect(Token::Kind::Atom, "expected a predicate name");
    if (head.text == "not") {
      Predicate inner = parse_literal();
      expect(Token::Kind::RParen, "expected ')' closing (not ...)");
      return inner.negate();
    }
    std::vector<std::string> args;
    while (!at_end() && peek().kind == Token::Kind::Atom) {
      args.push_back(next().text);
    }
    expect(Token::Kind::RParen, "expected ')' closing the predicate");
    return make_predicate(head, args);
  }

  Predicate make_predicate(const Token& head, const std::vector<std::string>& args) {
    auto need_arity = [&](size_t n) {
      if (args.size() != n) {
        fail(&head, "'" + head.text + "' expects " + std::to_string(n) + " argument(s)");
      }
    };
    if (head.text == "ontop") {
      need_arity(2);
      return Predicate::on_top(args[0], args[1]);
    }
    if (head.text == "inside") {
      need_arity(2);
      return Predicate::inside(args[0], args[1]);  // (inside x gripper) normalizes
    }
    if (head.text == "open") {
      need_arity(1);
      return Predicate::open(args[0]);
    }
    if (head.text == "inroom") {
      need_arity(2);
      return Predicate::in_room(args[0], args[1]);
    }
    fail(&head, "unknown predicate '" + head.text + "'");
  }

  bool at_end() const { return pos_ >= tokens_.size(); }

  const Token& peek() const {
    if (at_end()) fail(nullptr, "unexpected end of input");
    return tokens_[pos_];
  }

  const Token& next() { return tokens_[pos_++]; }

  const Token& expect(Token::Kind kind, const std::string& message) {
    if (at_end()) fail(nullptr, message);
    const Token& t = tokens_[pos_];
    if (t.kind != kind) fail(&t, message + ", got '" + t.text + "'");
    ++pos_;
    return t;
  }

  std::vector<Token> tokens_;
  size_t pos_ = 0;
};

}  // namespace

BddlDocument parse_bddl(const std::string& text) {
  Lexer lexer(text);
  Parser parser(lexer.run());
  return parser.run();
}

}  // namespace taskworld
