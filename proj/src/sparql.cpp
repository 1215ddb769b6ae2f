#include "swt/sparql.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "sparql_parser.hpp"
#include "swt/turtle.hpp"

namespace swt::sparql {

bool operator==(const TriplePattern& a, const TriplePattern& b) {
  return a.s == b.s && a.p == b.p && a.o == b.o;
}

namespace {

const Term* bound_term(const PatTerm& pt, const SolutionMapping& mu) {
  if (const Term* t = std::get_if<Term>(&pt)) return t;
  const auto& v = std::get<Variable>(pt);
  auto it = mu.find(v.name);
  return it == mu.end() ? nullptr : &it->second;
}

bool unify_slot(const PatTerm& pt, const Term& actual, SolutionMapping& mu) {
  if (const Term* t = std::get_if<Term>(&pt)) return *t == actual;
  const auto& v = std::get<Variable>(pt);
  auto [it, inserted] = mu.emplace(v.name, actual);
  return inserted || it->second == actual;
}

bool compatible(const SolutionMapping& a, const SolutionMapping& b) {
  for (const auto& [k, v] : a) {
    auto it = b.find(k);
    if (it != b.end() && it->second != v) return false;
  }
  return true;
}

SolutionMapping merge(const SolutionMapping& a, const SolutionMapping& b) {
  SolutionMapping m = a;
  m.insert(b.begin(), b.end());
  return m;
}

Bindings join(const Bindings& a, const Bindings& b) {
  Bindings out;
  for (const auto& x : a)
    for (const auto& y : b)
      if (compatible(x, y)) out.push_back(merge(x, y));
  return out;
}

Bindings left_join(const Bindings& a, const Bindings& b) {
  Bindings out;
  for (const auto& x : a) {
    bool any = false;
    for (const auto& y : b) {
      if (compatible(x, y)) {
        out.push_back(merge(x, y));
        any = true;
      }
    }
    if (!any) out.push_back(x);
  }
  return out;
}

Bindings extend_with_pattern(const Bindings& acc, const TriplePattern& p, const Graph& g) {
  Bindings out;
  for (const auto& mu : acc) {
    for (const auto& t : g) {
      SolutionMapping m = mu;
      if (unify_slot(p.s, t.s, m) && unify_slot(p.p, t.p, m) && unify_slot(p.o, t.o, m)) out.push_back(std::move(m));
    }
  }
  return out;
}

bool is_numeric(const Term& t, double& out) {
  if (!t.is_literal()) return false;
  static const char* kNum[] = {
      "http://www.w3.org/2001/XMLSchema#integer", "http://www.w3.org/2001/XMLSchema#decimal",
      "http://www.w3.org/2001/XMLSchema#double", "http://www.w3.org/2001/XMLSchema#float",
      "http://www.w3.org/2001/XMLSchema#int", "http://www.w3.org/2001/XMLSchema#long"};
  bool numeric = false;
  for (const char* n : kNum) numeric |= t.datatype == n;
  if (!numeric) return false;
  try {
    out = std::stod(t.value);
  } catch (...) {
    return false;
  }
  return true;
}

bool plain_string(const Term& t) {
  return t.is_literal() && (t.datatype.empty() || t.datatype == "http://www.w3.org/2001/XMLSchema#string");
}

std::optional<bool> compare_terms(const std::string& op, const Term& a, const Term& b) {
  double x, y;
  if (is_numeric(a, x) && is_numeric(b, y)) {
    if (op == "=") return x == y;
    if (op == "!=") return x != y;
    if (op == "<") return x < y;
    return x > y;
  }
  if (op == "=" || op == "!=") {
    bool eq;
    if (a.kind != b.kind) {
      eq = false;
    } else if (a.is_literal()) {
      // plain/string literals by lexical form + language tag
      if (plain_string(a) && plain_string(b)) eq = a.value == b.value && a.lang == b.lang;
      else eq = a == b;
    } else {
      eq = a.value == b.value;
    }
    return op == "=" ? eq : !eq;
  }
  if (plain_string(a) && plain_string(b)) {
    if (op == "<") return a.value < b.value;
    return a.value > b.value;
  }
  return std::nullopt;  // type error, absorbed by the caller
}

PatTerm subst_pat(const PatTerm& pt, const SolutionMapping& mu) {
  if (const Term* t = bound_term(pt, mu)) return *t;
  return pt;
}

std::shared_ptr<Expr> substitute_expr(const Expr& e, const SolutionMapping& mu);
std::shared_ptr<Ggp> substitute_ggp(const Ggp& g, const SolutionMapping& mu);

std::shared_ptr<Expr> substitute_expr(const Expr& e, const SolutionMapping& mu) {
  auto out = std::make_shared<Expr>(e);
  switch (e.kind) {
    case Expr::Kind::Compare:
      out->lhs = subst_pat(e.lhs, mu);
      out->rhs = subst_pat(e.rhs, mu);
      break;
    case Expr::Kind::Bound:
      if (mu.count(e.var.name)) {
        out->kind = Expr::Kind::BoolConst;
        out->value = true;
      }
      break;
    case Expr::Kind::And:
    case Expr::Kind::Or:
    case Expr::Kind::Not:
      out->args.clear();
      for (const auto& a : e.args) out->args.push_back(substitute_expr(*a, mu));
      break;
    case Expr::Kind::Exists:
    case Expr::Kind::NotExists:
      out->group = substitute_ggp(*e.group, mu);
      break;
    case Expr::Kind::BoolConst:
      break;
  }
  return out;
}

std::shared_ptr<Ggp> substitute_ggp(const Ggp& g, const SolutionMapping& mu) {
  auto out = std::make_shared<Ggp>();
  for (const auto& elem : g.elements) {
    if (const auto* bgp = std::get_if<BgpElem>(&elem)) {
      BgpElem b;
      for (const auto& p : bgp->patterns) b.patterns.push_back({subst_pat(p.s, mu), subst_pat(p.p, mu), subst_pat(p.o, mu)});
      out->elements.push_back(std::move(b));
    } else if (const auto* opt = std::get_if<OptionalElem>(&elem)) {
      out->elements.push_back(OptionalElem{substitute_ggp(*opt->group, mu)});
    } else if (const auto* un = std::get_if<UnionElem>(&elem)) {
      out->elements.push_back(UnionElem{substitute_ggp(*un->left, mu), substitute_ggp(*un->right, mu)});
    } else if (const auto* f = std::get_if<FilterElem>(&elem)) {
      out->elements.push_back(FilterElem{substitute_expr(*f->expr, mu)});
    } else if (const auto* sub = std::get_if<SubSelectElem>(&elem)) {
      SelectQuery q = sub->query;
      q.where = substitute_ggp(*q.where, mu);
      out->elements.push_back(SubSelectElem{std::move(q)});
    }
  }
  return out;
}

std::optional<bool> eval_expr(const Expr& e, const SolutionMapping& mu, const Graph& g) {
  switch (e.kind) {
    case Expr::Kind::BoolConst:
      return e.value;
    case Expr::Kind::Bound:
      return mu.count(e.var.name) != 0;
    case Expr::Kind::Not: {
      auto v = eval_expr(*e.args[0], mu, g);
      if (!v) return std::nullopt;
      return !*v;
    }
    case Expr::Kind::And: {
      auto l = eval_expr(*e.args[0], mu, g);
      auto r = eval_expr(*e.args[1], mu, g);
      if ((l && !*l) || (r && !*r)) return false;
      if (!l || !r) return std::nullopt;
      return true;
    }
    case Expr::Kind::Or: {
      auto l = eval_expr(*e.args[0], mu, g);
      auto r = eval_expr(*e.args[1], mu, g);
      if ((l && *l) || (r && *r)) return true;
      if (!l || !r) return std::nullopt;
      return false;
    }
    case Expr::Kind::Compare: {
      const Term* a = bound_term(e.lhs, mu);
      const Term* b = bound_term(e.rhs, mu);
      if (!a || !b) return std::nullopt;
      return compare_terms(e.op, *a, *b);
    }
    case Expr::Kind::Exists:
    case Expr::Kind::NotExists: {
      auto substituted = substitute_ggp(*e.group, mu);
      bool nonempty = !eval_ggp(*substituted, g).empty();
      return e.kind == Expr::Kind::Exists ? nonempty : !nonempty;
    }
  }
  return std::nullopt;
}

}  // namespace

std::shared_ptr<Ggp> substitute(const Ggp& g, const SolutionMapping& mu) { return substitute_ggp(g, mu); }

namespace {

Bindings project(const Bindings& rows, const std::vector<Variable>& projection) {
  Bindings out;
  for (const auto& mu : rows) {
    SolutionMapping m;
    for (const auto& v : projection) {
      auto it = mu.find(v.name);
      if (it != mu.end()) m.emplace(*it);
    }
    out.push_back(std::move(m));
  }
  return out;
}

}  // namespace

Bindings eval_ggp(const Ggp& g, const Graph& graph) {
  Bindings acc = {SolutionMapping{}};
  std::vector<const Expr*> filters;
  for (const auto& elem : g.elements) {
    if (const auto* bgp = std::get_if<BgpElem>(&elem)) {
      for (const auto& p : bgp->patterns) acc = extend_with_pattern(acc, p, graph);
    } else if (const auto* opt = std::get_if<OptionalElem>(&elem)) {
      acc = left_join(acc, eval_ggp(*opt->group, graph));
    } else if (const auto* un = std::get_if<UnionElem>(&elem)) {
      Bindings u = eval_ggp(*un->left, graph);
      Bindings r = eval_ggp(*un->right, graph);
      u.insert(u.end(), r.begin(), r.end());
      acc = join(acc, u);
    } else if (const auto* f = std::get_if<FilterElem>(&elem)) {
      filters.push_back(f->expr.get());
    } else if (const auto* sub = std::get_if<SubSelectElem>(&elem)) {
      Bindings rows = eval_ggp(*sub->query.where, graph);
      if (!sub->query.star) rows = project(rows, sub->query.projection);
      acc = join(acc, rows);
    }
  }
  if (!filters.empty()) {
    Bindings kept;
    for (const auto& mu : acc) {
      bool ok = true;
      for (const Expr* f : filters) {
        auto v = eval_expr(*f, mu, graph);
        if (!v || !*v) {  // errors reject the row
          ok = false;
          break;
        }
      }
      if (ok) kept.push_back(mu);
    }
    acc = std::move(kept);
  }
  return acc;
}

ResultTable eval_select_on_graph(const SelectQuery& q, const Graph& g) {
  ResultTable t;
  t.rows = eval_ggp(*q.where, g);
  if (q.star) {
    std::set<std::string> names;
    for (const auto& mu : t.rows)
      for (const auto& [k, _] : mu) names.insert(k);
    for (const auto& n : names) t.projection.push_back({n});
  } else {
    t.projection = q.projection;
    t.rows = project(t.rows, q.projection);
  }
  return t;
}

ResultTable eval_select(const SelectQuery& q, const rdf::Subweb& s) {
  return eval_select_on_graph(q, rdf::dataset_of(s).default_graph);
}

ConstructTemplate instantiate_template(const ConstructTemplate& c, const SolutionMapping& mu) {
  ConstructTemplate out;
  for (const auto& p : c) out.push_back({subst_pat(p.s, mu), subst_pat(p.p, mu), subst_pat(p.o, mu)});
  return out;
}

bool matches_pattern(const TriplePattern& p, const rdf::Triple& t) {
  SolutionMapping mu;
  return unify_slot(p.s, t.s, mu) && unify_slot(p.p, t.p, mu) && unify_slot(p.o, t.o, mu);
}

SelectQuery parse_select(const std::string& text, const Iri& base) {
  detail::QueryCursor cur(text, base);
  cur.parse_prologue();
  SelectQuery q = cur.parse_select_body();
  for (const char* mod : {"ORDER", "GROUP", "LIMIT", "OFFSET", "HAVING", "VALUES"})
    if (cur.peek_keyword(mod)) throw UnsupportedFeature(mod);
  if (!cur.eof()) cur.fail("trailing input after query");
  return q;
}

std::set<std::vector<std::optional<Term>>> ResultTable::as_set() const {
  std::set<std::vector<std::optional<Term>>> out;
  for (const auto& mu : rows) {
    std::vector<std::optional<Term>> row;
    for (const auto& v : projection) {
      auto it = mu.find(v.name);
      row.push_back(it == mu.end() ? std::nullopt : std::optional<Term>(it->second));
    }
    out.insert(std::move(row));
  }
  return out;
}

namespace {

std::string csv_escape(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += "\"\"";
    else out += c;
  }
  out += "\"";
  return out;
}

std::string render_cell(const SolutionMapping& mu, const Variable& v) {
  auto it = mu.find(v.name);
  if (it == mu.end()) return "NULL";
  return rdf::term_to_ntriples(it->second);
}

}  // namespace

std::string to_csv(const ResultTable& t) {
  std::ostringstream out;
  for (std::size_t i = 0; i < t.projection.size(); ++i) out << (i ? "," : "") << t.projection[i].name;
  out << "\n";
  for (const auto& mu : t.rows) {
    for (std::size_t i = 0; i < t.projection.size(); ++i) out << (i ? "," : "") << csv_escape(render_cell(mu, t.projection[i]));
    out << "\n";
  }
  return out.str();
}

std::string to_text_table(const ResultTable& t) {
  std::vector<std::string> lines;
  for (const auto& mu : t.rows) {
    std::string line;
    for (std::size_t i = 0; i < t.projection.size(); ++i) line += (i ? "\t" : "") + render_cell(mu, t.projection[i]);
    lines.push_back(std::move(line));
  }
  std::sort(lines.begin(), lines.end());
  std::ostringstream out;
  for (std::size_t i = 0; i < t.projection.size(); ++i) out << (i ? "\t" : "") << "?" << t.projection[i].name;
  out << "\n";
  for (const auto& l : lines) out << l << "\n";
  return out.str();
}

}  // namespace swt::sparql
