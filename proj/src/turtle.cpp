#include "swt/turtle.hpp"

#include <cctype>
#include <cstdint>
#include <cstdio>
#include <sstream>

namespace swt::rdf {

namespace {

struct IriParts {
  std::string scheme, authority, path, query, fragment;
  bool has_scheme = false, has_authority = false, has_query = false, has_fragment = false;
};

IriParts split_iri(const std::string& s) {
  IriParts p;
  std::size_t i = 0;
  // scheme
  if (!s.empty() && std::isalpha(static_cast<unsigned char>(s[0]))) {
    std::size_t j = 1;
    while (j < s.size() && (std::isalnum(static_cast<unsigned char>(s[j])) || s[j] == '+' || s[j] == '-' || s[j] == '.'))
      ++j;
    if (j < s.size() && s[j] == ':') {
      p.scheme = s.substr(0, j);
      p.has_scheme = true;
      i = j + 1;
    }
  }
  if (s.compare(i, 2, "//") == 0) {
    p.has_authority = true;
    std::size_t j = i + 2;
    while (j < s.size() && s[j] != '/' && s[j] != '?' && s[j] != '#') ++j;
    p.authority = s.substr(i + 2, j - i - 2);
    i = j;
  }
  std::size_t j = i;
  while (j < s.size() && s[j] != '?' && s[j] != '#') ++j;
  p.path = s.substr(i, j - i);
  i = j;
  if (i < s.size() && s[i] == '?') {
    p.has_query = true;
    j = i + 1;
    while (j < s.size() && s[j] != '#') ++j;
    p.query = s.substr(i + 1, j - i - 1);
    i = j;
  }
  if (i < s.size() && s[i] == '#') {
    p.has_fragment = true;
    p.fragment = s.substr(i + 1);
  }
  return p;
}

std::string remove_dot_segments(std::string input) {
  std::string out;
  while (!input.empty()) {
    if (input.rfind("../", 0) == 0) {
      input.erase(0, 3);
    } else if (input.rfind("./", 0) == 0) {
      input.erase(0, 2);
    } else if (input.rfind("/./", 0) == 0) {
      input.erase(0, 2);
    } else if (input == "/.") {
      input = "/";
    } else if (input.rfind("/../", 0) == 0 || input == "/..") {
      input = input == "/.." ? "/" : "/" + input.substr(4);
      auto pos = out.find_last_of('/');
      out.erase(pos == std::string::npos ? 0 : pos);
    } else if (input == "." || input == "..") {
      input.clear();
    } else {
      std::size_t j = input.find('/', 1);
      out += input.substr(0, j == std::string::npos ? input.size() : j);
      input.erase(0, j == std::string::npos ? input.size() : j);
    }
  }
  return out;
}

std::string merge_paths(const IriParts& base, const std::string& ref_path) {
  if (base.has_authority && base.path.empty()) return "/" + ref_path;
  auto pos = base.path.find_last_of('/');
  if (pos == std::string::npos) return ref_path;
  return base.path.substr(0, pos + 1) + ref_path;
}

std::string recompose(const IriParts& p) {
  std::string s;
  if (p.has_scheme) s += p.scheme + ":";
  if (p.has_authority) s += "//" + p.authority;
  s += p.path;
  if (p.has_query) s += "?" + p.query;
  if (p.has_fragment) s += "#" + p.fragment;
  return s;
}

}  // namespace

bool is_absolute_iri(const std::string& iri) { return split_iri(iri).has_scheme; }

Iri resolve_iri(const std::string& ref, const Iri& base) {
  IriParts r = split_iri(ref);
  if (r.has_scheme) {
    r.path = remove_dot_segments(r.path);
    return recompose(r);
  }
  IriParts b = split_iri(base);
  if (!b.has_scheme) throw UnresolvableIri(base);
  IriParts t;
  t.scheme = b.scheme;
  t.has_scheme = true;
  if (r.has_authority) {
    t.has_authority = true;
    t.authority = r.authority;
    t.path = remove_dot_segments(r.path);
    t.has_query = r.has_query;
    t.query = r.query;
  } else {
    t.has_authority = b.has_authority;
    t.authority = b.authority;
    if (r.path.empty()) {
      t.path = b.path;
      t.has_query = r.has_query ? true : b.has_query;
      t.query = r.has_query ? r.query : b.query;
    } else {
      t.path = r.path[0] == '/' ? remove_dot_segments(r.path) : remove_dot_segments(merge_paths(b, r.path));
      t.has_query = r.has_query;
      t.query = r.query;
    }
  }
  t.has_fragment = r.has_fragment;
  t.fragment = r.fragment;
  return recompose(t);
}

namespace {

// Hand-rolled lexer/parser for the Turtle subset.
class TurtleParser {
 public:
  TurtleParser(const std::string& text, Iri base) : text_(text), base_(std::move(base)) {}

  Graph run() {
    skip_ws();
    while (!eof()) {
      if (try_directive()) {
        skip_ws();
        continue;
      }
      parse_triples();
      skip_ws();
    }
    return graph_;
  }

 private:
  const std::string& text_;
  Iri base_;
  std::size_t pos_ = 0;
  int line_ = 1, col_ = 1;
  Graph graph_;
  std::map<std::string, Iri> prefixes_;

  [[noreturn]] void fail(const std::string& msg) const { throw SyntaxError(msg, line_, col_); }

  bool eof() const { return pos_ >= text_.size(); }
  char peek() const { return eof() ? '\0' : text_[pos_]; }
  char peek2() const { return pos_ + 1 < text_.size() ? text_[pos_ + 1] : '\0'; }

  char advance() {
    char c = text_[pos_++];
    if (c == '\n') {
      ++line_;
      col_ = 1;
    } else {
      ++col_;
    }
    return c;
  }

  void skip_ws() {
    while (!eof()) {
      char c = peek();
      if (c == '#') {
        while (!eof() && peek() != '\n') advance();
      } else if (std::isspace(static_cast<unsigned char>(c))) {
        advance();
      } else {
        break;
      }
    }
  }

  bool match_keyword(const std::string& kw) {
    if (text_.compare(pos_, kw.size(), kw) != 0) return false;
    std::size_t end = pos_ + kw.size();
    if (end < text_.size()) {
      char c = text_[end];
      if (std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == ':') return false;
    }
    for (std::size_t i = 0; i < kw.size(); ++i) advance();
    return true;
  }

  void expect(char c) {
    if (peek() != c) fail(std::string("expected '") + c + "'");
    advance();
  }

  bool try_directive() {
    if (match_keyword("@prefix") || match_keyword("PREFIX")) {
      bool sparql_style = text_[pos_ - 1] == 'X';
      skip_ws();
      std::string name = read_prefix_name();
      skip_ws();
      Iri iri = read_iriref();
      skip_ws();
      if (!sparql_style) expect('.');
      prefixes_[name] = iri;
      return true;
    }
    if (match_keyword("@base") || match_keyword("BASE")) {
      bool sparql_style = text_[pos_ - 1] == 'E';
      skip_ws();
      base_ = read_iriref();
      skip_ws();
      if (!sparql_style) expect('.');
      return true;
    }
    return false;
  }

  std::string read_prefix_name() {
    std::string name;
    while (!eof() && peek() != ':') {
      char c = peek();
      if (!(std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '-' || c == '.')) break;
      name += advance();
    }
    expect(':');
    return name;
  }

  Iri read_iriref() {
    expect('<');
    std::string raw;
    while (!eof() && peek() != '>') {
      char c = advance();
      if (c == '\n') fail("newline inside IRI");
      raw += c;
    }
    expect('>');
    Iri resolved = resolve_iri(raw, base_);
    if (!is_absolute_iri(resolved)) throw UnresolvableIri(raw);
    return resolved;
  }

  Term read_pname_or_keyword() {
    std::string prefix;
    while (!eof()) {
      char c = peek();
      if (std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '-') {
        prefix += advance();
      } else {
        break;
      }
    }
    if (peek() != ':') {
      if (prefix == "a") return Term::iri("http://www.w3.org/1999/02/22-rdf-syntax-ns#type");
      fail("unexpected token '" + prefix + "'");
    }
    advance();  // ':'
    std::string local;
    while (!eof()) {
      char c = peek();
      if (std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '-' || c == '.' || c == '#' || c == '/') {
        if (c == '.') {
          // trailing dot belongs to the statement terminator
          char n = peek2();
          if (!(std::isalnum(static_cast<unsigned char>(n)) || n == '_' || n == '-')) break;
        }
        local += advance();
      } else {
        break;
      }
    }
    auto it = prefixes_.find(prefix);
    if (it == prefixes_.end()) fail("undeclared prefix '" + prefix + ":'");
    return Term::iri(it->second + local);
  }

  Term read_blank() {
    advance();  // '_'
    expect(':');
    std::string label;
    while (!eof()) {
      char c = peek();
      if (std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '-') {
        label += advance();
      } else {
        break;
      }
    }
    if (label.empty()) fail("empty blank node label");
    // Fresh scope per document: suffix the label with a hash of the base IRI
    // so equal labels in different documents never join.
    return Term::blank(label + "_" + scope_suffix());
  }

  std::string scope_suffix() const {
    std::uint64_t h = 1469598103934665603ull;
    for (char c : base_) {
      h ^= static_cast<unsigned char>(c);
      h *= 1099511628211ull;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%08llx", static_cast<unsigned long long>(h & 0xffffffffull));
    return buf;
  }

  std::string read_string_body() {
    bool long_form = text_.compare(pos_, 3, "\"\"\"") == 0;
    std::string lex;
    if (long_form) {
      advance();
      advance();
      advance();
      while (!eof()) {
        if (text_.compare(pos_, 3, "\"\"\"") == 0) {
          advance();
          advance();
          advance();
          return lex;
        }
        lex += read_string_char();
      }
      fail("unterminated long string");
    }
    expect('"');
    while (!eof() && peek() != '"') {
      if (peek() == '\n') fail("newline in short string");
      lex += read_string_char();
    }
    expect('"');
    return lex;
  }

  char read_string_char() {
    char c = advance();
    if (c != '\\') return c;
    char e = advance();
    switch (e) {
      case 'n': return '\n';
      case 't': return '\t';
      case 'r': return '\r';
      case '"': return '"';
      case '\\': return '\\';
      default: fail(std::string("unsupported escape \\") + e);
    }
  }

  Term read_literal() {
    std::string lex = read_string_body();
    if (peek() == '@') {
      advance();
      std::string lang;
      while (!eof()) {
        char c = peek();
        if (std::isalnum(static_cast<unsigned char>(c)) || c == '-') {
          lang += advance();
        } else {
          break;
        }
      }
      if (lang.empty()) fail("empty language tag");
      return Term::literal(lex, lang);
    }
    if (peek() == '^' && peek2() == '^') {
      advance();
      advance();
      Term dt = peek() == '<' ? Term::iri(read_iriref()) : read_pname_or_keyword();
      return Term::literal(lex, {}, dt.value);
    }
    return Term::literal(lex);
  }

  Term read_numeric() {
    std::string lex;
    if (peek() == '+' || peek() == '-') lex += advance();
    bool decimal = false;
    while (!eof() && (std::isdigit(static_cast<unsigned char>(peek())) || (peek() == '.' && !decimal && std::isdigit(static_cast<unsigned char>(peek2()))))) {
      if (peek() == '.') decimal = true;
      lex += advance();
    }
    return Term::literal(lex, {},
                         decimal ? "http://www.w3.org/2001/XMLSchema#decimal"
                                 : "http://www.w3.org/2001/XMLSchema#integer");
  }

  Term read_term(bool object_position) {
    char c = peek();
    if (c == '<') return Term::iri(read_iriref());
    if (c == '_') return read_blank();
    if (object_position) {
      if (c == '"') return read_literal();
      if (std::isdigit(static_cast<unsigned char>(c)) || ((c == '+' || c == '-') && std::isdigit(static_cast<unsigned char>(peek2()))))
        return read_numeric();
    }
    return read_pname_or_keyword();
  }

  void parse_triples() {
    Term subject = read_term(false);
    if (subject.is_literal()) fail("literal in subject position");
    for (;;) {
      skip_ws();
      Term predicate = read_term(false);
      if (!predicate.is_iri()) fail("predicate must be an IRI");
      for (;;) {
        skip_ws();
        Term object = read_term(true);
        graph_.insert({subject, predicate, object});
        skip_ws();
        if (peek() == ',') {
          advance();
          continue;
        }
        break;
      }
      if (peek() == ';') {
        advance();
        skip_ws();
        if (peek() == '.') break;  // dangling ';'
        continue;
      }
      break;
    }
    skip_ws();
    expect('.');
  }
};

std::string escape_literal(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '\n': out += "\\n"; break;
      case '\t': out += "\\t"; break;
      case '\r': out += "\\r"; break;
      case '"': out += "\\\""; break;
      case '\\': out += "\\\\"; break;
      default: out += c;
    }
  }
  return out;
}

}  // namespace

Graph parse_document(const std::string& text, const Iri& base) {
  if (!is_absolute_iri(base)) throw UnresolvableIri(base);
  return TurtleParser(text, base).run();
}

std::string term_to_ntriples(const Term& t) {
  switch (t.kind) {
    case TermKind::Iri: return "<" + t.value + ">";
    case TermKind::Blank: return "_:" + t.value;
    case TermKind::Literal: {
      std::string s = "\"" + escape_literal(t.value) + "\"";
      if (!t.lang.empty()) s += "@" + t.lang;
      else if (!t.datatype.empty()) s += "^^<" + t.datatype + ">";
      return s;
    }
  }
  return {};
}

std::string to_ntriples(const Graph& g) {
  std::ostringstream out;
  for (const auto& t : g)
    out << term_to_ntriples(t.s) << " " << term_to_ntriples(t.p) << " " << term_to_ntriples(t.o) << " .\n";
  return out.str();
}

}  // namespace swt::rdf
