#pragma once

#include <cctype>
#include <optional>
#include <string>
#include <vector>

#include "asda/core/error.hpp"
#include "asda/core/value.hpp"

namespace asda::dsl {

enum class Target { PreProcessing, PostProcessing, Bare };

struct ActionPrompt {
  Target target = Target::Bare;
  std::string method;
  std::vector<Value> positional;
  std::vector<std::pair<std::string, Value>> kwargs;  // insertion order kept
  int source_line = 0;

  const Value* kwarg(const std::string& key) const {
    for (const auto& [k, v] : kwargs)
      if (k == key) return &v;
    return nullptr;
  }

  // Tables use both conventions: a leading numeric positional or an explicit
  // probability= kwarg; the kwarg wins when both appear.
  std::optional<double> probability() const {
    if (const Value* v = kwarg("probability"); v && v->is_number()) return v->num;
    for (const Value& v : positional)
      if (v.is_number()) return v.num;
    return std::nullopt;
  }

  bool operator==(const ActionPrompt& o) const {
    return target == o.target && method == o.method && positional == o.positional &&
           kwargs == o.kwargs;
  }
};

class ParseError : public Error {
 public:
  ParseError(Errc code, const std::string& what, int column)
      : Error(code, what + " (column " + std::to_string(column) + ")"), column_(column) {}
  int column() const { return column_; }

 private:
  int column_;
};

namespace detail {

struct Token {
  enum class Kind { Ident, Number, String, Punct, End };
  Kind kind = Kind::End;
  std::string text;
  double number = 0.0;
  char punct = 0;
  int column = 0;  // 1-based start
};

class Lexer {
 public:
  explicit Lexer(const std::string& src) : src_(src) {}

  Token next() {
    while (pos_ < src_.size() && std::isspace(static_cast<unsigned char>(src_[pos_]))) ++pos_;
    Token t;
    t.column = int(pos_) + 1;
    if (pos_ >= src_.size()) {
      t.kind = Token::Kind::End;
      return t;
    }
    char c = src_[pos_];
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      std::size_t start = pos_;
      while (pos_ < src_.size() &&
             (std::isalnum(static_cast<unsigned char>(src_[pos_])) || src_[pos_] == '_'))
        ++pos_;
      t.kind = Token::Kind::Ident;
      t.text = src_.substr(start, pos_ - start);
      return t;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '-' || c == '+' ||
        (c == '.' && pos_ + 1 < src_.size() &&
         std::isdigit(static_cast<unsigned char>(src_[pos_ + 1])))) {
      std::size_t start = pos_;
      if (c == '-' || c == '+') ++pos_;
      bool any_digit = false;
      while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) {
        ++pos_;
        any_digit = true;
      }
      if (pos_ < src_.size() && src_[pos_] == '.') {
        ++pos_;
        while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) {
          ++pos_;
          any_digit = true;
        }
      }
      if (!any_digit)
        throw ParseError(Errc::SyntaxError, "malformed number", t.column);
      if (pos_ < src_.size() && (src_[pos_] == 'e' || src_[pos_] == 'E')) {
        std::size_t mark = pos_++;
        if (pos_ < src_.size() && (src_[pos_] == '-' || src_[pos_] == '+')) ++pos_;
        bool exp_digit = false;
        while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) {
          ++pos_;
          exp_digit = true;
        }
        if (!exp_digit) pos_ = mark;  // 'e' belongs to something else
      }
      t.kind = Token::Kind::Number;
      t.text = src_.substr(start, pos_ - start);
      t.number = std::strtod(t.text.c_str(), nullptr);
      return t;
    }
    if (c == '"') {
      std::size_t start = ++pos_;
      while (pos_ < src_.size() && src_[pos_] != '"') ++pos_;
      if (pos_ >= src_.size())
        throw ParseError(Errc::UnterminatedString, "unterminated string", t.column);
      t.kind = Token::Kind::String;
      t.text = src_.substr(start, pos_ - start);
      ++pos_;
      return t;
    }
    if (std::string("()[],=.").find(c) != std::string::npos) {
      t.kind = Token::Kind::Punct;
      t.punct = c;
      ++pos_;
      return t;
    }
    throw ParseError(Errc::SyntaxError, std::string("unexpected character '") + c + "'",
                     t.column);
  }

 private:
  const std::string& src_;
  std::size_t pos_ = 0;
};

class Parser {
 public:
  explicit Parser(const std::string& src) : lex_(src) { advance(); }

  ActionPrompt parse_prompt() {
    ActionPrompt prompt;
    Token first = expect(Token::Kind::Ident, "target or method name");
    if (cur_.kind == Token::Kind::Punct && cur_.punct == '.') {
      if (first.text == "pre_processing_pipeline") prompt.target = Target::PreProcessing;
      else if (first.text == "post_processing_pipeline") prompt.target = Target::PostProcessing;
      else
        throw ParseError(Errc::UnknownTarget, "unknown target '" + first.text + "'",
                         first.column);
      advance();
      prompt.method = expect(Token::Kind::Ident, "method name").text;
    } else {
      prompt.target = Target::Bare;
      prompt.method = first.text;
      if (prompt.method != "collect_data")
        throw ParseError(Errc::UnknownTarget,
                         "bare calls are reserved for collect_data, got '" + prompt.method + "'",
                         first.column);
    }

    expect_punct('(');
    if (!at_call_end()) {
      parse_arg(prompt);
      while (cur_.kind == Token::Kind::Punct && cur_.punct == ',') {
        advance();
        parse_arg(prompt);
      }
    }
    // a closing ']' is tolerated here: scripts in circulation carry that typo
    if (!at_call_end())
      throw ParseError(Errc::SyntaxError, "expected ')'", cur_.column);
    advance();
    if (cur_.kind != Token::Kind::End)
      throw ParseError(Errc::SyntaxError, "trailing input after prompt", cur_.column);
    return prompt;
  }

 private:
  bool at_call_end() const {
    return cur_.kind == Token::Kind::Punct && (cur_.punct == ')' || cur_.punct == ']');
  }

  void parse_arg(ActionPrompt& prompt) {
    if (cur_.kind == Token::Kind::Ident) {
      Token name = cur_;
      advance();
      if (cur_.kind == Token::Kind::Punct && cur_.punct == '=') {
        advance();
        prompt.kwargs.emplace_back(name.text, parse_value());
        return;
      }
      // bare identifier used as a value
      prompt.positional.push_back(Value(name.text));
      return;
    }
    prompt.positional.push_back(parse_value());
  }

  Value parse_value() {
    if (cur_.kind == Token::Kind::Number) {
      Value v(cur_.number);
      advance();
      return v;
    }
    if (cur_.kind == Token::Kind::String) {
      Value v(cur_.text);
      advance();
      return v;
    }
    if (cur_.kind == Token::Kind::Ident) {
      Value v(cur_.text);
      if (cur_.text == "true") v = Value(true);
      else if (cur_.text == "false") v = Value(false);
      advance();
      return v;
    }
    if (cur_.kind == Token::Kind::Punct && cur_.punct == '[') {
      advance();
      std::vector<Value> items;
      if (!(cur_.kind == Token::Kind::Punct && cur_.punct == ']')) {
        items.push_back(parse_value());
        while (cur_.kind == Token::Kind::Punct && cur_.punct == ',') {
          advance();
          items.push_back(parse_value());
        }
      }
      if (!(cur_.kind == Token::Kind::Punct && cur_.punct == ']'))
        throw ParseError(Errc::SyntaxError, "expected ']'", cur_.column);
      advance();
      return Value(std::move(items));
    }
    throw ParseError(Errc::SyntaxError, "expected a value", cur_.column);
  }

  Token expect(Token::Kind kind, const char* what) {
    if (cur_.kind != kind)
      throw ParseError(Errc::SyntaxError, std::string("expected ") + what, cur_.column);
    Token t = cur_;
    advance();
    return t;
  }
  void expect_punct(char c) {
    if (!(cur_.kind == Token::Kind::Punct && cur_.punct == c))
      throw ParseError(Errc::SyntaxError, std::string("expected '") + c + "'", cur_.column);
    advance();
  }
  void advance() { cur_ = lex_.next(); }

  Lexer lex_;
  Token cur_;
};

}  // namespace detail

inline ActionPrompt parse_prompt(const std::string& line) {
  detail::Parser parser(line);
  return parser.parse_prompt();
}

inline std::string target_prefix(Target t) {
  switch (t) {
    case Target::PreProcessing: return "pre_processing_pipeline.";
    case Target::PostProcessing: return "post_processing_pipeline.";
    case Target::Bare: return "";
  }
  return "";
}

// Canonical single-line form; parse(print(ast)) == ast.
inline std::string print_prompt(const ActionPrompt& prompt) {
  std::string out = target_prefix(prompt.target) + prompt.method + "(";
  bool first = true;
  for (const Value& v : prompt.positional) {
    if (!first) out += ", ";
    out += to_text(v);
    first = false;
  }
  for (const auto& [k, v] : prompt.kwargs) {
    if (!first) out += ", ";
    out += k + "=" + to_text(v);
    first = false;
  }
  return out + ")";
}

struct StrategyScript {
  std::vector<ActionPrompt> prompts;
  std::optional<std::size_t> collect_index;  // phase boundary
};

// Lines outside strings are joined while brackets are unbalanced, so prompts
// may wrap. '#' starts a comment.
inline StrategyScript parse_strategy_script(const std::string& text) {
  StrategyScript script;
  std::vector<std::pair<std::string, int>> logical;  // (joined line, first line no)

  std::string pending;
  int pending_line = 0, line_no = 0, depth = 0;
  std::size_t start = 0;
  while (start <= text.size()) {
    std::size_t end = text.find('\n', start);
    std::string line = text.substr(start, end == std::string::npos ? std::string::npos
                                                                   : end - start);
    ++line_no;
    bool in_string = false;
    std::string cleaned;
    for (char c : line) {
      if (c == '"') in_string = !in_string;
      if (c == '#' && !in_string) break;
      cleaned += c;
    }
    for (char c : cleaned) {
      if (c == '"') in_string = !in_string;
      if (in_string) continue;
      if (c == '(' || c == '[') ++depth;
      if (c == ')' || c == ']') --depth;
    }
    if (pending.empty()) pending_line = line_no;
    pending += cleaned;
    bool blank = pending.find_first_not_of(" \t\r") == std::string::npos;
    if (depth <= 0) {
      if (!blank) logical.emplace_back(pending, pending_line);
      pending.clear();
      depth = 0;
    } else {
      pending += ' ';
    }
    if (end == std::string::npos) break;
    start = end + 1;
  }
  if (!pending.empty() && pending.find_first_not_of(" \t\r") != std::string::npos)
    logical.emplace_back(pending, pending_line);

  for (const auto& [line, lineno] : logical) {
    ActionPrompt prompt = parse_prompt(line);
    prompt.source_line = lineno;
    if (prompt.method == "collect_data" && prompt.target == Target::Bare) {
      if (script.collect_index)
        throw Error(Errc::DuplicateCollect,
                    "collect_data appears twice (line " + std::to_string(lineno) + ")");
      script.collect_index = script.prompts.size();
    } else if (prompt.target == Target::PostProcessing) {
      if (!script.collect_index)
        throw Error(Errc::PhaseViolation,
                    "post-processing prompt before collect_data (line " +
                        std::to_string(lineno) + ")");
    } else if (prompt.target == Target::PreProcessing) {
      if (script.collect_index)
        throw Error(Errc::PhaseViolation,
                    "pre-processing prompt after collect_data (line " +
                        std::to_string(lineno) + ")");
    }
    script.prompts.push_back(std::move(prompt));
  }
  return script;
}

}  // namespace asda::dsl
