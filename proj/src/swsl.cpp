#include "swt/swsl.hpp"

#include <limits>
#include <sstream>

#include "sparql_parser.hpp"
#include "swt/turtle.hpp"

namespace swt::swsl {

using sparql::Bindings;
using sparql::Ggp;
using sparql::SolutionMapping;
using sparql::Variable;

namespace {

void collect_scope_vars(const Ggp& g, std::set<std::string>& out);

void collect_pattern_vars(const std::vector<sparql::TriplePattern>& ps, std::set<std::string>& out) {
  for (const auto& p : ps)
    for (const auto* t : {&p.s, &p.p, &p.o})
      if (const auto* v = std::get_if<Variable>(t)) out.insert(v->name);
}

void collect_scope_vars(const Ggp& g, std::set<std::string>& out) {
  for (const auto& elem : g.elements) {
    if (const auto* bgp = std::get_if<sparql::BgpElem>(&elem)) {
      collect_pattern_vars(bgp->patterns, out);
    } else if (const auto* opt = std::get_if<sparql::OptionalElem>(&elem)) {
      collect_scope_vars(*opt->group, out);
    } else if (const auto* un = std::get_if<sparql::UnionElem>(&elem)) {
      collect_scope_vars(*un->left, out);
      collect_scope_vars(*un->right, out);
    } else if (const auto* sub = std::get_if<sparql::SubSelectElem>(&elem)) {
      for (const auto& v : sub->query.projection) out.insert(v.name);
    }
  }
}

// Re-resolve the statement's relative IRIs against a new current document.
SwslSpec resolved_at(const SwslSpec& spec, const Iri& ctx) {
  if (ctx == spec.base) return spec;
  return parse_swsl(spec.source, ctx);
}

struct SelectorRun {
  std::set<Iri> out;
  std::map<Iri, std::set<Iri>> producers;  // output iri -> seed iris whose document produced it
};

SelectorRun run_selector(const SwslSpec& spec, const std::set<Iri>& seeds, const Wold& w) {
  SelectorRun r;
  long long max_levels;  // number of re-seeding rounds after the first application
  switch (spec.recurse) {
    case Recurse::None: max_levels = 0; break;
    case Recurse::Depth: max_levels = spec.depth; break;
    case Recurse::Unbounded: max_levels = std::numeric_limits<long long>::max(); break;
  }
  std::set<Iri> frontier = seeds, seen_seeds = seeds;
  for (long long level = 0; !frontier.empty(); ++level) {
    std::set<Iri> produced;
    for (const Iri& u : frontier) {
      auto d = w.deref(u);
      if (!d) continue;  // non-dereferenceable seeds contribute nothing
      SwslSpec sp = resolved_at(spec, rdf::doc_iri_of(u));
      for (const SolutionMapping& mu : sparql::eval_ggp(*sp.pattern, w.data(*d))) {
        for (const Variable& v : sp.variables) {
          auto it = mu.find(v.name);
          if (it == mu.end() || !it->second.is_iri()) continue;  // non-IRI bindings dropped
          produced.insert(it->second.value);
          r.producers[it->second.value].insert(u);
        }
      }
    }
    r.out.insert(produced.begin(), produced.end());
    if (level >= max_levels) break;
    frontier.clear();
    for (const Iri& u : produced)
      if (seen_seeds.insert(u).second) frontier.insert(u);
  }
  return r;
}

}  // namespace

SwslSpec parse_swsl(const std::string& text, const Iri& base) {
  sparql::detail::QueryCursor cur(text, base);
  cur.parse_prologue();
  if (!cur.try_keyword("FOLLOW")) cur.fail("expected FOLLOW");
  SwslSpec spec;
  spec.source = text;
  spec.base = base;
  while (cur.peek() == '?') spec.variables.push_back(cur.read_variable());
  if (spec.variables.empty()) cur.fail("FOLLOW needs at least one variable");
  // WITH SUBWEBS is accepted both before and after the sources pattern
  if (cur.try_keyword("WITH")) {
    if (!cur.try_keyword("SUBWEBS")) cur.fail("expected SUBWEBS after WITH");
    spec.with_subwebs = true;
  }
  spec.pattern = cur.parse_ggp();
  if (cur.try_keyword("WITH")) {
    if (!cur.try_keyword("SUBWEBS")) cur.fail("expected SUBWEBS after WITH");
    spec.with_subwebs = true;
  }
  if (cur.try_keyword("RECURSE")) {
    spec.recurse = Recurse::Unbounded;
    if (std::isdigit(static_cast<unsigned char>(cur.peek()))) {
      int n = cur.read_integer();
      spec.recurse = n == 0 ? Recurse::None : Recurse::Depth;  // depth 0 is equivalent to no RECURSE
      spec.depth = n;
    }
  }
  if (cur.try_keyword("INCLUDE")) {
    spec.has_filter = true;
    spec.filter_template = cur.parse_construct_template();
    if (cur.try_keyword("WHERE")) {
      spec.filter_where = cur.parse_ggp();
    } else {
      spec.filter_where = std::make_shared<Ggp>();  // INCLUDE alone is sugar for WHERE { }
    }
  }
  if (!cur.eof()) cur.fail("trailing input after FOLLOW statement");

  std::set<std::string> scope;
  collect_scope_vars(*spec.pattern, scope);
  // an all-empty pattern ("FOLLOW ?v { }") is legal and selects nothing
  if (!scope.empty())
    for (const auto& v : spec.variables)
      if (!scope.count(v.name)) cur.fail("FOLLOW variable ?" + v.name + " does not occur in the sources pattern");
  return spec;
}

std::set<Iri> eval_source_selector(const SwslSpec& spec, const std::set<Iri>& seeds, const Wold& w) {
  return run_selector(spec, seeds, w).out;
}

Graph eval_filter(const SwslSpec& spec, const std::set<Iri>& seeds, const Wold& w, const Graph& s, const Iri& v) {
  if (!spec.has_filter) return s;
  SelectorRun run = run_selector(spec, seeds, w);
  auto prod = run.producers.find(v);
  Graph kept;
  if (prod == run.producers.end()) return kept;  // no mu1 produced v: empty union
  for (const Iri& u : prod->second) {
    auto d = w.deref(u);
    if (!d) continue;
    SwslSpec sp = resolved_at(spec, rdf::doc_iri_of(u));
    for (const SolutionMapping& mu1 : sparql::eval_ggp(*sp.pattern, w.data(*d))) {
      bool produced_v = false;
      for (const Variable& var : sp.variables) {
        auto it = mu1.find(var.name);
        produced_v |= it != mu1.end() && it->second == rdf::Term::iri(v);
      }
      if (!produced_v) continue;
      auto c1 = sparql::instantiate_template(sp.filter_template, mu1);
      for (const SolutionMapping& mu2 : sparql::eval_ggp(*sparql::substitute(*sp.filter_where, mu1), s)) {
        auto c2 = sparql::instantiate_template(c1, mu2);
        for (const rdf::Triple& t : s)
          if (!kept.count(t))
            for (const auto& p : c2)
              if (sparql::matches_pattern(p, t)) {
                kept.insert(t);
                break;
              }
      }
    }
  }
  return kept;
}

engine::SubwebSpecTuple swsl_to_tuple(const SwslSpec& spec, const std::set<Iri>& seeds, const Iri& context) {
  engine::SubwebSpecTuple t;
  t.sigma = std::make_shared<SwslSelector>(spec, seeds);
  t.b = spec.with_subwebs;
  if (spec.has_filter)
    t.f = std::make_shared<SwslFilter>(spec, seeds);
  else
    t.f = std::make_shared<engine::IdentityFilter>();
  t.id = "swsl:" + context;
  return t;
}

namespace {

std::string pat_term_str(const sparql::PatTerm& pt) {
  if (const auto* v = std::get_if<Variable>(&pt)) return "?" + v->name;
  return rdf::term_to_ntriples(std::get<rdf::Term>(pt));
}

std::string triples_str(const std::vector<sparql::TriplePattern>& ps) {
  std::string out;
  for (const auto& p : ps) out += " " + pat_term_str(p.s) + " " + pat_term_str(p.p) + " " + pat_term_str(p.o) + ".";
  return out;
}

std::string ggp_str(const Ggp& g) {
  std::string out = "{";
  for (const auto& elem : g.elements) {
    if (const auto* bgp = std::get_if<sparql::BgpElem>(&elem)) out += triples_str(bgp->patterns);
    else if (const auto* opt = std::get_if<sparql::OptionalElem>(&elem)) out += " OPTIONAL " + ggp_str(*opt->group);
    else if (const auto* un = std::get_if<sparql::UnionElem>(&elem))
      out += " " + ggp_str(*un->left) + " UNION " + ggp_str(*un->right);
    else out += " ...";
  }
  return out + " }";
}

}  // namespace

std::string to_string(const SwslSpec& spec) {
  std::ostringstream out;
  out << "FOLLOW";
  for (const auto& v : spec.variables) out << " ?" << v.name;
  if (spec.with_subwebs) out << " WITH SUBWEBS";
  out << " " << ggp_str(*spec.pattern);
  if (spec.recurse == Recurse::Unbounded) out << " RECURSE";
  if (spec.recurse == Recurse::Depth) out << " RECURSE " << spec.depth;
  if (spec.has_filter) {
    out << " INCLUDE {" << triples_str(spec.filter_template) << " } WHERE " << ggp_str(*spec.filter_where);
  }
  return out.str();
}

std::string SwslSelector::describe() const { return to_string(spec); }
std::string SwslFilter::describe() const { return "filter of: " + to_string(spec); }

}  // namespace swt::swsl
