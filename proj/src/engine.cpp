#include "swt/engine.hpp"

#include <sstream>

#include "swt/swsl.hpp"

namespace swt::engine {

std::string ConstantSelector::describe() const {
  std::string out = "const{";
  bool first = true;
  for (const auto& u : iris) {
    if (!first) out += ", ";
    out += u;
    first = false;
  }
  return out + "}";
}

const SubwebSpecification& SpecAnnotatedWold::spec_of(const DocId& d) const {
  static const SubwebSpecification kEmpty;
  auto it = specs.find(d);
  return it == specs.end() ? kEmpty : it->second;
}

SpecAnnotatedWold extract_annotations(const Wold& w, std::vector<AnnotationError>* errors) {
  SpecAnnotatedWold aw;
  aw.wold = w;
  for (const auto& [d, g] : w.docs) {
    SubwebSpecification theta;
    for (const auto& link : g) {
      if (!(link.p == rdf::Term::iri(kSpecPredicate))) continue;
      for (const auto& scope : g) {
        if (scope.s != link.o || !(scope.p == rdf::Term::iri(kScopePredicate))) continue;
        if (!scope.o.is_literal() || scope.o.datatype != kSwslDatatype) continue;
        try {
          swsl::SwslSpec spec = swsl::parse_swsl(scope.o.value, d);
          theta.tuples.push_back(swsl::swsl_to_tuple(spec, {d}, d));
        } catch (const std::exception& e) {
          if (errors) errors->push_back({d, e.what()});
        }
      }
    }
    aw.specs[d] = std::move(theta);
  }
  return aw;
}

namespace {

using SelectorCache = std::map<const SourceSelector*, std::set<Iri>>;

const std::set<Iri>& selected(const SubwebSpecTuple& t, const Wold& w, SelectorCache& cache) {
  auto it = cache.find(t.sigma.get());
  if (it == cache.end()) it = cache.emplace(t.sigma.get(), t.sigma->select(w)).first;
  return it->second;
}

// One application of the defining equation of [[theta]], reading the values of
// the documents' specifications from `approx`.
Subweb apply_equation(const SubwebSpecification& theta, const SpecAnnotatedWold& aw,
                      const std::map<DocId, Subweb>& approx, SelectorCache& cache, std::ostream* trace) {
  const Wold& w = aw.wold;
  Subweb acc = rdf::empty_subweb(w);
  for (const auto& tuple : theta.tuples) {
    for (const Iri& u : selected(tuple, w, cache)) {
      auto d = w.deref(u);
      if (!d) continue;
      Subweb s = rdf::simpl(*d, w);
      if (tuple.b) s = rdf::subweb_union(s, approx.at(*d));
      Subweb filtered;
      filtered.parent = &w;
      for (const auto& [doc, g] : s.docs) {
        Graph kept = tuple.f->is_identity() ? g : tuple.f->apply(g, u, w);
        if (trace)
          *trace << tuple.id << "\t" << u << "\t" << doc << "\tkept=" << kept.size()
                 << "\tdropped=" << (g.size() - kept.size()) << "\n";
        filtered.docs[doc] = std::move(kept);
      }
      acc = rdf::subweb_union(acc, filtered);
    }
  }
  return acc;
}

}  // namespace

Subweb eval_specification(const SubwebSpecification& theta, const SpecAnnotatedWold& aw, std::ostream* trace,
                          int iteration_cap) {
  const Wold& w = aw.wold;
  if (iteration_cap <= 0) iteration_cap = 2 * static_cast<int>(w.docs.size()) + 2;
  SelectorCache cache;
  std::map<DocId, Subweb> approx;
  for (const auto& [d, _] : w.docs) approx.emplace(d, rdf::empty_subweb(w));

  for (int iter = 0;; ++iter) {
    if (iter > iteration_cap) throw NonConvergence(iteration_cap);
    std::map<DocId, Subweb> next;
    bool changed = false;
    for (const auto& [d, _] : w.docs) {
      Subweb v = apply_equation(aw.spec_of(d), aw, approx, cache, nullptr);
      changed |= !rdf::subweb_equal(v, approx.at(d));
      next.emplace(d, std::move(v));
    }
    approx = std::move(next);
    if (!changed) break;
  }
  return apply_equation(theta, aw, approx, cache, trace);
}

Subweb soi(const DocId& d, const SpecAnnotatedWold& aw) {
  if (!aw.wold.has_doc(d)) throw rdf::UnknownDocument(d);
  return rdf::subweb_union(rdf::simpl(d, aw.wold), eval_specification(aw.spec_of(d), aw));
}

sparql::ResultTable eval_annotated_query(const SpecAnnotatedQuery& q, const SpecAnnotatedWold& aw) {
  return sparql::eval_select(q.query, eval_specification(q.spec, aw));
}

SubwebSpecification seed_adopting_spec(const std::set<Iri>& seeds) {
  SubwebSpecification theta;
  SubwebSpecTuple t;
  t.sigma = std::make_shared<ConstantSelector>(seeds);
  t.b = true;
  t.f = std::make_shared<IdentityFilter>();
  t.id = "seed-adopt";
  theta.tuples.push_back(std::move(t));
  return theta;
}

}  // namespace swt::engine
