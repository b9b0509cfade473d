#include <cctype>
#include <cstdlib>

#include "mfr/errors.hpp"
#include "mfr/io_util.hpp"
#include "mfr/step.hpp"

namespace mfr {

namespace {

enum class Tok { Keyword, Ref, Int, Real, String, Enum, LParen, RParen, Comma, Semi, Equals, Dollar, Star, End };

struct Token {
  Tok kind = Tok::End;
  std::string text;
  int line = 1, col = 1;
};

class Lexer {
 public:
  explicit Lexer(std::string_view s) : s_(s) {}

  Token next() {
    skip_space();
    Token t;
    t.line = line_;
    t.col = col_;
    if (i_ >= s_.size()) return t;
    const char c = s_[i_];
    switch (c) {
      case '(': advance(); t.kind = Tok::LParen; return t;
      case ')': advance(); t.kind = Tok::RParen; return t;
      case ',': advance(); t.kind = Tok::Comma; return t;
      case ';': advance(); t.kind = Tok::Semi; return t;
      case '=': advance(); t.kind = Tok::Equals; return t;
      case '$': advance(); t.kind = Tok::Dollar; return t;
      case '*': advance(); t.kind = Tok::Star; return t;
      default: break;
    }
    if (c == '\'') return string_token(t);
    if (c == '#') {
      advance();
      t.kind = Tok::Ref;
      t.text = take_while([](char ch) { return std::isdigit(static_cast<unsigned char>(ch)) != 0; });
      if (t.text.empty()) fail("expected digits after '#'", t);
      return t;
    }
    if (c == '.' && i_ + 1 < s_.size() && std::isalpha(static_cast<unsigned char>(s_[i_ + 1]))) {
      advance();
      t.kind = Tok::Enum;
      t.text = take_while([](char ch) { return std::isalnum(static_cast<unsigned char>(ch)) || ch == '_'; });
      if (i_ >= s_.size() || s_[i_] != '.') fail("unterminated enumeration", t);
      advance();
      return t;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '-' || c == '+' || c == '.') return number_token(t);
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      t.kind = Tok::Keyword;
      t.text = take_while([](char ch) { return std::isalnum(static_cast<unsigned char>(ch)) || ch == '_' || ch == '-'; });
      return t;
    }
    fail(std::string("unexpected character '") + c + "'", t);
  }

  [[noreturn]] static void fail(const std::string& what, const Token& at) { throw StepSyntaxError(what, at.line, at.col); }

 private:
  void advance() {
    if (s_[i_] == '\n') {
      ++line_;
      col_ = 1;
    } else {
      ++col_;
    }
    ++i_;
  }

  template <class Pred>
  std::string take_while(Pred p) {
    std::string out;
    while (i_ < s_.size() && p(s_[i_])) {
      out += s_[i_];
      advance();
    }
    return out;
  }

  void skip_space() {
    while (i_ < s_.size()) {
      if (std::isspace(static_cast<unsigned char>(s_[i_]))) {
        advance();
      } else if (s_.substr(i_, 2) == "/*") {
        Token at{Tok::End, {}, line_, col_};
        const std::size_t end = s_.find("*/", i_ + 2);
        if (end == std::string_view::npos) fail("unterminated comment", at);
        while (i_ < end + 2) advance();
      } else {
        break;
      }
    }
  }

  Token string_token(Token t) {
    advance();
    t.kind = Tok::String;
    while (true) {
      if (i_ >= s_.size()) fail("unterminated string", t);
      if (s_[i_] == '\'') {
        advance();
        if (i_ < s_.size() && s_[i_] == '\'') {
          t.text += '\'';
          advance();
          continue;
        }
        return t;
      }
      t.text += s_[i_];
      advance();
    }
  }

  Token number_token(Token t) {
    t.text = take_while([](char ch) {
      return std::isdigit(static_cast<unsigned char>(ch)) || ch == '-' || ch == '+' || ch == '.' || ch == 'E' || ch == 'e';
    });
    const bool real = t.text.find_first_of(".Ee") != std::string::npos;
    t.kind = real ? Tok::Real : Tok::Int;
    char* end = nullptr;
    std::strtod(t.text.c_str(), &end);
    if (end != t.text.c_str() + t.text.size()) fail("malformed number '" + t.text + "'", t);
    return t;
  }

  std::string_view s_;
  std::size_t i_ = 0;
  int line_ = 1, col_ = 1;
};

class Parser {
 public:
  explicit Parser(std::string_view text) : lex_(text) { bump(); }

  StepFile parse() {
    StepFile f;
    expect_keyword("ISO-10303-21");
    expect(Tok::Semi, "';'");
    expect_keyword("HEADER");
    expect(Tok::Semi, "';'");
    while (!is_keyword("ENDSEC")) {
      f.header.push_back(record());
      expect(Tok::Semi, "';'");
    }
    bump();
    expect(Tok::Semi, "';'");
    while (is_keyword("DATA")) {
      bump();
      if (tok_.kind == Tok::LParen) list("");
      expect(Tok::Semi, "';'");
      while (tok_.kind == Tok::Ref) instance(f);
      expect_keyword("ENDSEC");
      expect(Tok::Semi, "';'");
    }
    expect_keyword("END-ISO-10303-21");
    expect(Tok::Semi, "';'");
    if (tok_.kind != Tok::End) Lexer::fail("content after END-ISO-10303-21", tok_);
    return f;
  }

 private:
  void bump() { tok_ = lex_.next(); }

  bool is_keyword(std::string_view k) const { return tok_.kind == Tok::Keyword && tok_.text == k; }

  void expect(Tok kind, const char* what) {
    if (tok_.kind != kind) Lexer::fail(std::string("expected ") + what, tok_);
    bump();
  }

  void expect_keyword(std::string_view k) {
    if (!is_keyword(k)) Lexer::fail("expected " + std::string(k), tok_);
    bump();
  }

  void instance(StepFile& f) {
    StepEntity e;
    e.line = tok_.line;
    e.id = std::stoi(tok_.text);
    const Token at = tok_;
    bump();
    expect(Tok::Equals, "'='");
    if (tok_.kind == Tok::LParen) {
      bump();
      while (tok_.kind == Tok::Keyword) e.records.push_back(record());
      expect(Tok::RParen, "')'");
      if (e.records.empty()) Lexer::fail("empty complex instance", at);
      e.keyword = e.records.front().keyword;
    } else {
      StepList r = record();
      e.keyword = r.keyword;
      e.args = std::move(r.items);
    }
    expect(Tok::Semi, "';'");
    if (f.entities.count(e.id)) Lexer::fail("duplicate instance #" + std::to_string(e.id), at);
    f.entities.emplace(e.id, std::move(e));
  }

  StepList record() {
    if (tok_.kind != Tok::Keyword) Lexer::fail("expected entity keyword", tok_);
    const std::string kw = tok_.text;
    bump();
    if (tok_.kind != Tok::LParen) Lexer::fail("expected '(' after " + kw, tok_);
    return list(kw);
  }

  StepList list(const std::string& keyword) {
    StepList l{keyword, {}};
    expect(Tok::LParen, "'('");
    if (tok_.kind == Tok::RParen) {
      bump();
      return l;
    }
    while (true) {
      l.items.push_back(value());
      if (tok_.kind == Tok::Comma) {
        bump();
        continue;
      }
      expect(Tok::RParen, "',' or ')'");
      return l;
    }
  }

  StepValue value() {
    StepValue v;
    const Token t = tok_;
    switch (t.kind) {
      case Tok::Dollar: v.v = StepUnset{}; break;
      case Tok::Star: v.v = StepDerived{}; break;
      case Tok::String: v.v = t.text; break;
      case Tok::Real: v.v = std::strtod(t.text.c_str(), nullptr); break;
      case Tok::Int: v.v = std::strtoll(t.text.c_str(), nullptr, 10); break;
      case Tok::Ref: v.v = StepRef{std::stoi(t.text)}; break;
      case Tok::Enum: v.v = StepEnum{t.text}; break;
      case Tok::LParen: v.v = list(""); return v;
      case Tok::Keyword: bump(); v.v = list(t.text); return v;
      default: Lexer::fail("expected a parameter", t);
    }
    bump();
    return v;
  }

  Lexer lex_;
  Token tok_;
};

void collect_refs(const StepValue& v, std::vector<int>& out) {
  if (const auto* r = std::get_if<StepRef>(&v.v)) out.push_back(r->id);
  if (const auto* l = std::get_if<StepList>(&v.v)) {
    for (const StepValue& x : l->items) collect_refs(x, out);
  }
}

}  // namespace

std::vector<int> step_references(const StepEntity& e) {
  std::vector<int> out;
  for (const StepValue& v : e.args) collect_refs(v, out);
  for (const StepList& r : e.records) {
    for (const StepValue& v : r.items) collect_refs(v, out);
  }
  return out;
}

StepFile parse_step(std::string_view text) {
  StepFile f = Parser(text).parse();
  for (const auto& [id, e] : f.entities) {
    for (int ref : step_references(e)) {
      if (!f.entities.count(ref)) {
        throw DanglingReference("#" + std::to_string(id) + " (" + e.keyword + ", line " + std::to_string(e.line) +
                                ") refers to missing #" + std::to_string(ref));
      }
    }
  }
  return f;
}

StepFile read_step(const std::filesystem::path& path) { return parse_step(read_text_file(path)); }

}  // namespace mfr
