#include "swt/rdf.hpp"

namespace swt::rdf {

const Graph& Wold::data(const DocId& d) const {
  auto it = docs.find(d);
  if (it == docs.end()) throw UnknownDocument(d);
  return it->second;
}

std::optional<DocId> Wold::deref(const Iri& u) const {
  auto it = adoc.find(u);
  if (it != adoc.end()) return it->second;
  // hosted convention: a document keyed by its canonical IRI is named by every
  // IRI that fragment-strips to that key
  Iri d = doc_iri_of(u);
  if (d != u && docs.count(d)) return d;
  return std::nullopt;
}

std::optional<DocId> Subweb::deref(const Iri& u) const {
  if (!parent) return std::nullopt;
  auto d = parent->deref(u);
  if (d && docs.count(*d)) return d;
  return std::nullopt;
}

std::size_t Subweb::triple_count() const {
  std::size_t n = 0;
  for (const auto& [d, g] : docs) n += g.size();
  return n;
}

Iri doc_iri_of(const Iri& u) {
  auto pos = u.find('#');
  return pos == std::string::npos ? u : u.substr(0, pos);
}

Subweb simpl(const DocId& d, const Wold& w) {
  if (!w.has_doc(d)) throw UnknownDocument(d);
  Subweb s;
  s.parent = &w;
  s.docs[d] = w.data(d);
  return s;
}

Subweb empty_subweb(const Wold& w) {
  Subweb s;
  s.parent = &w;
  return s;
}

Subweb subweb_union(const Subweb& a, const Subweb& b) {
  if (a.parent != b.parent) throw ParentMismatch();
  Subweb s;
  s.parent = a.parent;
  s.docs = a.docs;
  for (const auto& [d, g] : b.docs) s.docs[d].insert(g.begin(), g.end());
  return s;
}

bool is_subweb(const Subweb& candidate, const Wold& w) {
  if (candidate.parent != &w) return false;
  for (const auto& [d, g] : candidate.docs) {
    auto it = w.docs.find(d);
    if (it == w.docs.end()) return false;  // condition 1
    for (const auto& t : g)
      if (!it->second.count(t)) return false;  // condition 2
  }
  // Condition 3 holds by construction: Subweb derives adoc from the parent.
  return true;
}

bool subweb_equal(const Subweb& a, const Subweb& b) {
  return a.parent == b.parent && a.docs == b.docs;
}

Dataset dataset_of(const Subweb& s) {
  Dataset ds;
  for (const auto& [d, g] : s.docs) ds.default_graph.insert(g.begin(), g.end());
  if (s.parent) {
    for (const auto& [u, d] : s.parent->adoc) {
      auto it = s.docs.find(d);
      if (it != s.docs.end()) ds.named[u] = it->second;
    }
  }
  return ds;
}

}  // namespace swt::rdf
