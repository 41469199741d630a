#include <cctype>
#include <string>
#include <unordered_set>

#include "enforcekit/dsl.hpp"

namespace enforcekit::dsl {

namespace {

enum class Tok {
  Ident,
  String,
  Dot,
  Colon,
  Comma,
  LBrace,
  RBrace,
  LBracket,
  RBracket,
  LParen,
  RParen,
  Arrow,
  End,
};

struct Token {
  Tok kind = Tok::End;
  std::string text;
  SourceLocation loc;
};

std::string describe(const Token& t) {
  switch (t.kind) {
    case Tok::Ident: return "'" + t.text + "'";
    case Tok::String: return "string literal";
    case Tok::End: return "end of input";
    default: return "'" + t.text + "'";
  }
}

struct LexError {
  std::string code;
  std::string message;
  SourceLocation loc;
};

class Lexer {
 public:
  explicit Lexer(std::string_view text) : text_(text) {}

  // Tokenizes the whole input; on failure returns false and fills `error`.
  bool run(std::vector<Token>& out, LexError& error) {
    for (;;) {
      skip_blanks();
      SourceLocation loc{line_, col_};
      if (pos_ >= text_.size()) {
        out.push_back({Tok::End, "", loc});
        return true;
      }
      char c = text_[pos_];
      if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
        std::size_t start = pos_;
        while (pos_ < text_.size() &&
               (std::isalnum(static_cast<unsigned char>(text_[pos_])) ||
                text_[pos_] == '_')) {
          advance();
        }
        out.push_back({Tok::Ident, std::string(text_.substr(start, pos_ - start)), loc});
        continue;
      }
      if (c == '"') {
        std::string value;
        if (!lex_string(value)) {
          error = {"E001", "unterminated string literal", loc};
          return false;
        }
        out.push_back({Tok::String, std::move(value), loc});
        continue;
      }
      if (c == '-' && pos_ + 1 < text_.size() && text_[pos_ + 1] == '>') {
        advance();
        advance();
        out.push_back({Tok::Arrow, "->", loc});
        continue;
      }
      Tok kind;
      switch (c) {
        case '.': kind = Tok::Dot; break;
        case ':': kind = Tok::Colon; break;
        case ',': kind = Tok::Comma; break;
        case '{': kind = Tok::LBrace; break;
        case '}': kind = Tok::RBrace; break;
        case '[': kind = Tok::LBracket; break;
        case ']': kind = Tok::RBracket; break;
        case '(': kind = Tok::LParen; break;
        case ')': kind = Tok::RParen; break;
        default:
          error = {"E003", "unknown token '" + std::string(1, c) + "'", loc};
          return false;
      }
      advance();
      out.push_back({kind, std::string(1, c), loc});
    }
  }

 private:
  void advance() {
    if (text_[pos_] == '\n') {
      ++line_;
      col_ = 1;
    } else {
      ++col_;
    }
    ++pos_;
  }

  void skip_blanks() {
    while (pos_ < text_.size()) {
      char c = text_[pos_];
      if (c == ' ' || c == '\t' || c == '\r' || c == '\n') {
        advance();
      } else if (c == '/' && pos_ + 1 < text_.size() && text_[pos_ + 1] == '/') {
        while (pos_ < text_.size() && text_[pos_] != '\n') advance();
      } else {
        break;
      }
    }
  }

  bool lex_string(std::string& value) {
    advance();  // opening quote
    while (pos_ < text_.size()) {
      char c = text_[pos_];
      if (c == '\n') return false;
      advance();
      if (c == '"') return true;
      if (c == '\\') {
        if (pos_ >= text_.size()) return false;
        char e = text_[pos_];
        advance();
        switch (e) {
          case 'n': value += '\n'; break;
          case 't': value += '\t'; break;
          case '"': value += '"'; break;
          case '\\': value += '\\'; break;
          default: return false;
        }
        continue;
      }
      value += c;
    }
    return false;
  }

  std::string_view text_;
  std::size_t pos_ = 0;
  int line_ = 1;
  int col_ = 1;
};

// Thrown internally to unwind on the first syntax error.
struct SyntaxError {
  Diagnostic diagnostic;
};

class Parser {
 public:
  explicit Parser(std::vector<Token> tokens) : tokens_(std::move(tokens)) {}

  EnforcementModel parse_model(SourceMap& map,
                               std::vector<Diagnostic>& diagnostics) {
    EnforcementModel model;
    map.model = peek().loc;
    expect_keyword("enforcer");
    model.name = expect(Tok::Ident, "model name").text;
    expect(Tok::LBrace, "'{'");

    if (at_keyword("policy")) {
      next();
      model.policy_text = expect(Tok::String, "policy string").text;
    }

    std::unordered_set<std::string> prefixes;
    do {
      const Token& kw = peek();
      BindingKind kind;
      if (at_keyword("component")) {
        kind = BindingKind::Component;
      } else if (at_keyword("api")) {
        kind = BindingKind::Api;
      } else {
        fail(kw, "expected 'component' or 'api'");
      }
      next();
      const Token& prefix = expect(Tok::Ident, "prefix");
      expect(Tok::Colon, "':'");
      std::string qualified = expect(Tok::Ident, "qualified name").text;
      while (peek().kind == Tok::Dot) {
        next();
        qualified += '.';
        qualified += expect(Tok::Ident, "qualified name segment").text;
      }
      if (!prefixes.insert(prefix.text).second) {
        diagnostics.push_back({"E002", Severity::Error,
                               "duplicate prefix '" + prefix.text + "'",
                               prefix.loc});
        continue;
      }
      model.bindings.push_back({prefix.text, std::move(qualified), kind});
      map.bindings.push_back(kw.loc);
    } while (at_keyword("component") || at_keyword("api"));

    map.initial = peek().loc;
    expect_keyword("initial");
    model.initial = expect(Tok::Ident, "initial state").text;

    do {
      parse_state(model, map);
    } while (at_keyword("state"));

    expect(Tok::RBrace, "'}'");
    expect(Tok::End, "end of input");
    return model;
  }

 private:
  void parse_state(EnforcementModel& model, SourceMap& map) {
    const Token& kw = peek();
    expect_keyword("state");
    const Token& id = expect(Tok::Ident, "state name");
    if (model.has_state(id.text)) {
      fail(id, "duplicate state block '" + id.text + "'");
    }
    model.states.push_back(id.text);
    map.states.push_back(kw.loc);
    expect(Tok::LBrace, "'{'");
    while (at_keyword("on")) {
      map.transitions.push_back(peek().loc);
      model.transitions.push_back(parse_transition(id.text));
    }
    expect(Tok::RBrace, "'}' or 'on'");
  }

  Transition parse_transition(const std::string& from) {
    Transition t;
    t.from = from;
    expect_keyword("on");
    const Token& phase = expect(Tok::Ident, "'before' or 'after'");
    if (!parse_phase(phase.text, t.on.phase)) {
      fail(phase, "expected 'before' or 'after', got " + describe(phase));
    }
    t.on.prefix = expect(Tok::Ident, "prefix").text;
    expect(Tok::Dot, "'.'");
    t.on.method = expect(Tok::Ident, "method name").text;
    expect(Tok::LParen, "'('");
    expect(Tok::RParen, "')'");
    expect_keyword("emit");
    expect(Tok::LBracket, "'['");
    if (peek().kind != Tok::RBracket) {
      t.actions.push_back(parse_action());
      while (peek().kind == Tok::Comma) {
        next();
        t.actions.push_back(parse_action());
      }
    }
    expect(Tok::RBracket, "',' or ']'");
    expect(Tok::Arrow, "'->'");
    t.to = expect(Tok::Ident, "target state").text;
    return t;
  }

  Action parse_action() {
    if (at_keyword("pass")) {
      next();
      return PassAction{};
    }
    if (!at_keyword("call")) fail(peek(), "expected 'pass' or 'call'");
    next();
    CallAction call;
    call.prefix = expect(Tok::Ident, "prefix").text;
    expect(Tok::Dot, "'.'");
    call.method = expect(Tok::Ident, "method name").text;
    expect(Tok::LParen, "'('");
    expect(Tok::RParen, "')'");
    return call;
  }

  const Token& peek() const { return tokens_[pos_]; }

  const Token& next() {
    const Token& t = tokens_[pos_];
    if (pos_ + 1 < tokens_.size()) ++pos_;
    return t;
  }

  bool at_keyword(std::string_view kw) const {
    return peek().kind == Tok::Ident && peek().text == kw;
  }

  void expect_keyword(std::string_view kw) {
    if (!at_keyword(kw)) {
      fail(peek(), "expected '" + std::string(kw) + "', got " + describe(peek()));
    }
    next();
  }

  const Token& expect(Tok kind, std::string_view what) {
    if (peek().kind != kind) {
      fail(peek(), "expected " + std::string(what) + ", got " + describe(peek()));
    }
    return next();
  }

  [[noreturn]] void fail(const Token& at, std::string message) {
    throw SyntaxError{{"E001", Severity::Error, std::move(message), at.loc}};
  }

  std::vector<Token> tokens_;
  std::size_t pos_ = 0;
};

}  // namespace

bool has_errors(const std::vector<Diagnostic>& diagnostics) {
  for (const auto& d : diagnostics) {
    if (d.severity == Severity::Error) return true;
  }
  return false;
}

ParseResult parse(std::string_view text) {
  ParseResult result;
  std::vector<Token> tokens;
  LexError lex_error;
  if (!Lexer(text).run(tokens, lex_error)) {
    result.diagnostics.push_back(
        {lex_error.code, Severity::Error, lex_error.message, lex_error.loc});
    return result;
  }
  Parser parser(std::move(tokens));
  std::vector<Diagnostic> diagnostics;
  try {
    EnforcementModel model = parser.parse_model(result.source_map, diagnostics);
    if (diagnostics.empty()) {
      result.model = std::move(model);
    }
  } catch (const SyntaxError& e) {
    diagnostics.push_back(e.diagnostic);
  }
  result.diagnostics = std::move(diagnostics);
  if (!result.ok()) result.source_map = {};
  return result;
}

}  // namespace enforcekit::dsl
