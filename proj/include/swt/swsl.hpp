#pragma once

#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "swt/engine.hpp"
#include "swt/rdf.hpp"
#include "swt/sparql.hpp"

namespace swt::swsl {

using rdf::Graph;
using rdf::Iri;
using rdf::Wold;

enum class Recurse { None, Unbounded, Depth };

// One FOLLOW statement. `source` keeps the original text so the statement can
// be re-resolved against another base IRI when recursion reaches a new
// document (relative IRIs are interpreted relative to the current document).
struct SwslSpec {
  std::vector<sparql::Variable> variables;
  std::shared_ptr<sparql::Ggp> pattern;
  Recurse recurse = Recurse::None;
  int depth = 0;  // meaningful for Recurse::Depth only
  bool with_subwebs = false;
  bool has_filter = false;
  sparql::ConstructTemplate filter_template;
  std::shared_ptr<sparql::Ggp> filter_where;  // INCLUDE without WHERE => empty group

  std::string source;
  Iri base;
};

SwslSpec parse_swsl(const std::string& text, const Iri& base = "swt:spec");

// sigma(W): evaluate the sources pattern over each seed's own document and
// collect IRI bindings of the FOLLOW variables; RECURSE re-seeds with the
// outputs (new document = new context) up to the depth bound.
std::set<Iri> eval_source_selector(const SwslSpec& spec, const std::set<Iri>& seeds, const Wold& w);

// f(S,v) under the given spec: keeps the triples of S matching some
// instantiation of the INCLUDE template under a sources binding mu1 that
// produced v and a WHERE binding mu2 evaluated over S itself.
Graph eval_filter(const SwslSpec& spec, const std::set<Iri>& seeds, const Wold& w, const Graph& s, const Iri& v);

struct SwslSelector : engine::SourceSelector {
  SwslSpec spec;
  std::set<Iri> seeds;
  SwslSelector(SwslSpec sp, std::set<Iri> sd) : spec(std::move(sp)), seeds(std::move(sd)) {}
  std::set<Iri> select(const Wold& w) const override { return eval_source_selector(spec, seeds, w); }
  std::string describe() const override;
};

struct SwslFilter : engine::Filter {
  SwslSpec spec;
  std::set<Iri> seeds;
  SwslFilter(SwslSpec sp, std::set<Iri> sd) : spec(std::move(sp)), seeds(std::move(sd)) {}
  Graph apply(const Graph& s, const Iri& v, const Wold& w) const override {
    return eval_filter(spec, seeds, w, s, v);
  }
  std::string describe() const override;
};

// The (sigma, b, f) tuple denoted by one FOLLOW statement published in the
// document `context` (used as base IRI) with the given seed set.
engine::SubwebSpecTuple swsl_to_tuple(const SwslSpec& spec, const std::set<Iri>& seeds, const Iri& context);

// Normalized textual form, for tooling output.
std::string to_string(const SwslSpec& spec);

}  // namespace swt::swsl
