#pragma once

// Shared recursive-descent machinery for the SPARQL subset and for SWSL,
// which embeds SPARQL's GroupGraphPattern and ConstructTemplate productions.

#include <cctype>
#include <map>
#include <string>

#include "swt/sparql.hpp"
#include "swt/turtle.hpp"

namespace swt::sparql::detail {

class QueryCursor {
 public:
  QueryCursor(const std::string& text, rdf::Iri base) : text_(text), base_(std::move(base)) {}

  [[noreturn]] void fail(const std::string& msg) const {
    throw rdf::SyntaxError(msg, line_, col_);
  }

  bool eof() {
    skip_ws();
    return pos_ >= text_.size();
  }

  void skip_ws() {
    while (pos_ < text_.size()) {
      char c = text_[pos_];
      if (c == '#') {
        while (pos_ < text_.size() && text_[pos_] != '\n') step();
      } else if (std::isspace(static_cast<unsigned char>(c))) {
        step();
      } else {
        break;
      }
    }
  }

  char peek() {
    skip_ws();
    return pos_ < text_.size() ? text_[pos_] : '\0';
  }

  char peek_raw(std::size_t off = 0) const {
    return pos_ + off < text_.size() ? text_[pos_ + off] : '\0';
  }

  void expect(char c) {
    if (peek() != c) fail(std::string("expected '") + c + "'");
    step();
  }

  bool try_punct(char c) {
    if (peek() != c) return false;
    step();
    return true;
  }

  // Case-insensitive keyword match with a word boundary.
  bool try_keyword(const std::string& kw) {
    skip_ws();
    if (pos_ + kw.size() > text_.size()) return false;
    for (std::size_t i = 0; i < kw.size(); ++i)
      if (std::toupper(static_cast<unsigned char>(text_[pos_ + i])) != std::toupper(static_cast<unsigned char>(kw[i])))
        return false;
    std::size_t end = pos_ + kw.size();
    if (end < text_.size()) {
      char c = text_[end];
      if (std::isalnum(static_cast<unsigned char>(c)) || c == '_') return false;
    }
    for (std::size_t i = 0; i < kw.size(); ++i) step();
    return true;
  }

  bool peek_keyword(const std::string& kw) {
    std::size_t save_pos = pos_;
    int save_line = line_, save_col = col_;
    bool ok = try_keyword(kw);
    pos_ = save_pos;
    line_ = save_line;
    col_ = save_col;
    return ok;
  }

  void parse_prologue() {
    for (;;) {
      if (try_keyword("PREFIX")) {
        skip_ws();
        std::string name;
        while (pos_ < text_.size() && text_[pos_] != ':') name += step();
        expect(':');
        prefixes_[name] = read_iriref();
      } else if (try_keyword("BASE")) {
        base_ = read_iriref();
      } else {
        break;
      }
    }
  }

  rdf::Iri read_iriref() {
    expect('<');
    std::string raw;
    while (pos_ < text_.size() && text_[pos_] != '>') {
      if (text_[pos_] == '\n') fail("newline inside IRI");
      raw += step();
    }
    expect('>');
    return rdf::resolve_iri(raw, base_);
  }

  int read_integer() {
    skip_ws();
    if (!std::isdigit(static_cast<unsigned char>(peek_raw()))) fail("expected integer");
    int n = 0;
    while (std::isdigit(static_cast<unsigned char>(peek_raw()))) n = n * 10 + (step() - '0');
    return n;
  }

  Variable read_variable() {
    expect('?');
    std::string name;
    while (pos_ < text_.size()) {
      char c = text_[pos_];
      if (std::isalnum(static_cast<unsigned char>(c)) || c == '_') {
        name += step();
      } else {
        break;
      }
    }
    if (name.empty()) fail("empty variable name");
    return Variable{name};
  }

  Term read_pname_or_a() {
    std::string prefix;
    while (pos_ < text_.size()) {
      char c = text_[pos_];
      if (std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '-') {
        prefix += step();
      } else {
        break;
      }
    }
    if (peek_raw() != ':') {
      if (prefix == "a") return Term::iri("http://www.w3.org/1999/02/22-rdf-syntax-ns#type");
      fail("unexpected token '" + prefix + "'");
    }
    step();  // ':'
    std::string local;
    while (pos_ < text_.size()) {
      char c = text_[pos_];
      if (std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '-' || c == '#' || c == '/') {
        local += step();
      } else {
        break;
      }
    }
    auto it = prefixes_.find(prefix);
    if (it == prefixes_.end()) fail("undeclared prefix '" + prefix + ":'");
    return Term::iri(it->second + local);
  }

  Term read_literal() {
    expect('"');
    std::string lex;
    while (pos_ < text_.size() && text_[pos_] != '"') {
      char c = step();
      if (c == '\\' && pos_ < text_.size()) {
        char e = step();
        switch (e) {
          case 'n': c = '\n'; break;
          case 't': c = '\t'; break;
          case '"': c = '"'; break;
          case '\\': c = '\\'; break;
          default: fail("unsupported escape");
        }
      }
      lex += c;
    }
    expect('"');
    if (peek_raw() == '@') {
      step();
      std::string lang;
      while (pos_ < text_.size() && (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '-'))
        lang += step();
      return Term::literal(lex, lang);
    }
    if (peek_raw() == '^' && peek_raw(1) == '^') {
      step();
      step();
      Term dt = peek_raw() == '<' ? Term::iri(read_iriref()) : read_pname_or_a();
      return Term::literal(lex, {}, dt.value);
    }
    return Term::literal(lex);
  }

  Term read_numeric() {
    std::string lex;
    if (peek_raw() == '+' || peek_raw() == '-') lex += step();
    bool decimal = false;
    while (pos_ < text_.size() && (std::isdigit(static_cast<unsigned char>(text_[pos_])) || (text_[pos_] == '.' && !decimal))) {
      if (text_[pos_] == '.') decimal = true;
      lex += step();
    }
    return Term::literal(lex, {},
                         decimal ? "http://www.w3.org/2001/XMLSchema#decimal"
                                 : "http://www.w3.org/2001/XMLSchema#integer");
  }

  PatTerm read_pat_term(bool object_position) {
    char c = peek();
    if (c == '?') return read_variable();
    if (c == '<') return Term::iri(read_iriref());
    if (c == '_') {
      step();
      expect(':');
      std::string label;
      while (pos_ < text_.size() && (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_'))
        label += step();
      return Term::blank(label);
    }
    if (object_position) {
      if (c == '"') return read_literal();
      if (std::isdigit(static_cast<unsigned char>(c)) || ((c == '+' || c == '-') && std::isdigit(static_cast<unsigned char>(peek_raw(1)))))
        return read_numeric();
    }
    return read_pname_or_a();
  }

  // Triple block with ';' and ',' shorthand; appends patterns.
  void parse_triples_block(std::vector<TriplePattern>& out) {
    PatTerm subject = read_pat_term(false);
    for (;;) {
      PatTerm predicate = read_pat_term(false);
      for (;;) {
        PatTerm object = read_pat_term(true);
        out.push_back({subject, predicate, object});
        if (try_punct(',')) continue;
        break;
      }
      if (try_punct(';')) {
        char c = peek();
        if (c == '.' || c == '}') break;  // dangling ';'
        continue;
      }
      break;
    }
    try_punct('.');
  }

  std::shared_ptr<Ggp> parse_ggp() {
    expect('{');
    auto group = std::make_shared<Ggp>();
    for (;;) {
      char c = peek();
      if (c == '}') {
        step();
        break;
      }
      if (c == '\0') fail("unterminated group");
      if (try_keyword("OPTIONAL")) {
        group->elements.push_back(OptionalElem{parse_ggp()});
        try_punct('.');
        continue;
      }
      if (try_keyword("FILTER")) {
        group->elements.push_back(FilterElem{parse_bracketed_expr()});
        try_punct('.');
        continue;
      }
      for (const char* bad : {"GRAPH", "SERVICE", "BIND", "VALUES", "MINUS", "ORDER", "GROUP", "LIMIT"})
        if (peek_keyword(bad)) throw UnsupportedFeature(bad);
      if (c == '{') {
        auto left = parse_ggp();
        if (try_keyword("UNION")) {
          auto right = parse_ggp();
          group->elements.push_back(UnionElem{left, right});
        } else {
          // plain nested group: splice its elements
          for (auto& e : left->elements) group->elements.push_back(std::move(e));
        }
        try_punct('.');
        continue;
      }
      if (peek_keyword("SELECT")) {
        group->elements.push_back(SubSelectElem{parse_select_body()});
        continue;
      }
      BgpElem bgp;
      parse_triples_block(bgp.patterns);
      group->elements.push_back(std::move(bgp));
    }
    return group;
  }

  // SELECT clause plus its braced WHERE group; prologue handled by caller.
  SelectQuery parse_select_body() {
    if (!try_keyword("SELECT")) fail("expected SELECT");
    SelectQuery q;
    if (try_punct('*')) {
      q.star = true;
    } else {
      while (peek() == '?') q.projection.push_back(read_variable());
      if (q.projection.empty()) fail("SELECT needs at least one variable");
    }
    if (!try_keyword("WHERE")) fail("expected WHERE");
    q.where = parse_ggp();
    return q;
  }

  ConstructTemplate parse_construct_template() {
    expect('{');
    ConstructTemplate tmpl;
    while (peek() != '}') {
      if (peek() == '\0') fail("unterminated template");
      parse_triples_block(tmpl);
    }
    expect('}');
    return tmpl;
  }

  std::shared_ptr<Expr> parse_bracketed_expr() {
    if (peek() == '(') {
      expect('(');
      auto e = parse_or_expr();
      expect(')');
      return e;
    }
    // FILTER NOT EXISTS { ... } / FILTER EXISTS { ... }
    return parse_primary_expr();
  }

  std::shared_ptr<Expr> parse_or_expr() {
    auto lhs = parse_and_expr();
    while (true) {
      skip_ws();
      if (peek_raw() == '|' && peek_raw(1) == '|') {
        step();
        step();
        auto rhs = parse_and_expr();
        auto e = std::make_shared<Expr>();
        e->kind = Expr::Kind::Or;
        e->args = {lhs, rhs};
        lhs = e;
      } else {
        break;
      }
    }
    return lhs;
  }

  std::shared_ptr<Expr> parse_and_expr() {
    auto lhs = parse_unary_expr();
    while (true) {
      skip_ws();
      if (peek_raw() == '&' && peek_raw(1) == '&') {
        step();
        step();
        auto rhs = parse_unary_expr();
        auto e = std::make_shared<Expr>();
        e->kind = Expr::Kind::And;
        e->args = {lhs, rhs};
        lhs = e;
      } else {
        break;
      }
    }
    return lhs;
  }

  std::shared_ptr<Expr> parse_unary_expr() {
    if (peek() == '!' && peek_raw(1) != '=') {
      step();
      auto e = std::make_shared<Expr>();
      e->kind = Expr::Kind::Not;
      e->args = {parse_unary_expr()};
      return e;
    }
    if (peek() == '(') {
      expect('(');
      auto e = parse_or_expr();
      expect(')');
      return e;
    }
    return parse_primary_expr();
  }

  std::shared_ptr<Expr> parse_primary_expr() {
    auto e = std::make_shared<Expr>();
    if (try_keyword("NOT")) {
      if (!try_keyword("EXISTS")) fail("expected EXISTS after NOT");
      e->kind = Expr::Kind::NotExists;
      e->group = parse_exists_group();
      return e;
    }
    if (try_keyword("EXISTS")) {
      e->kind = Expr::Kind::Exists;
      e->group = parse_exists_group();
      return e;
    }
    if (try_keyword("BOUND")) {
      expect('(');
      e->kind = Expr::Kind::Bound;
      e->var = read_variable();
      expect(')');
      return e;
    }
    PatTerm lhs = read_pat_term(true);
    skip_ws();
    std::string op;
    char c = peek_raw();
    if (c == '=' ) {
      op = "=";
      step();
    } else if (c == '!' && peek_raw(1) == '=') {
      op = "!=";
      step();
      step();
    } else if (c == '<' || c == '>') {
      op += step();
    } else {
      fail("expected comparison operator");
    }
    e->kind = Expr::Kind::Compare;
    e->op = op;
    e->lhs = lhs;
    e->rhs = read_pat_term(true);
    return e;
  }

  std::shared_ptr<Ggp> parse_exists_group() {
    // the body may be a plain group or a sub-select in braces
    expect('{');
    auto group = std::make_shared<Ggp>();
    if (peek_keyword("SELECT")) {
      group->elements.push_back(SubSelectElem{parse_select_body()});
      expect('}');
      return group;
    }
    // rewind-free: treat as a normal group body
    for (;;) {
      char c = peek();
      if (c == '}') {
        step();
        break;
      }
      if (c == '\0') fail("unterminated group");
      if (try_keyword("FILTER")) {
        group->elements.push_back(FilterElem{parse_bracketed_expr()});
        try_punct('.');
        continue;
      }
      BgpElem bgp;
      parse_triples_block(bgp.patterns);
      group->elements.push_back(std::move(bgp));
    }
    return group;
  }

  const std::map<std::string, rdf::Iri>& prefixes() const { return prefixes_; }
  void set_prefix(const std::string& name, rdf::Iri iri) { prefixes_[name] = std::move(iri); }
  const rdf::Iri& base() const { return base_; }

 private:
  char step() {
    char c = text_[pos_++];
    if (c == '\n') {
      ++line_;
      col_ = 1;
    } else {
      ++col_;
    }
    return c;
  }

  const std::string& text_;
  rdf::Iri base_;
  std::size_t pos_ = 0;
  int line_ = 1, col_ = 1;
  std::map<std::string, rdf::Iri> prefixes_;
};

}  // namespace swt::sparql::detail
