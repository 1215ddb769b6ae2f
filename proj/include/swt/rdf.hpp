#pragma once

#include <compare>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

namespace swt::rdf {

using Iri = std::string;

enum class TermKind { Iri, Blank, Literal };

// An RDF term: IRI, blank node (label scoped to one document), or literal.
// A literal carries at most one of {language tag, non-string datatype}.
struct Term {
  TermKind kind = TermKind::Iri;
  std::string value;     // IRI text, blank label, or lexical form
  std::string lang;      // literals only
  std::string datatype;  // literals only

  static Term iri(std::string v) { return {TermKind::Iri, std::move(v), {}, {}}; }
  static Term blank(std::string label) { return {TermKind::Blank, std::move(label), {}, {}}; }
  static Term literal(std::string lex, std::string lang = {}, std::string dt = {}) {
    return {TermKind::Literal, std::move(lex), std::move(lang), std::move(dt)};
  }

  bool is_iri() const { return kind == TermKind::Iri; }
  bool is_blank() const { return kind == TermKind::Blank; }
  bool is_literal() const { return kind == TermKind::Literal; }

  auto operator<=>(const Term&) const = default;
};

struct Triple {
  Term s, p, o;
  auto operator<=>(const Triple&) const = default;
};

// Set semantics: no duplicate triples.
using Graph = std::set<Triple>;

// Opaque document identity, distinct from any IRI. In hosted mode a document
// is keyed by its canonical (fragmentless) IRI; abstract WOLDs may use any id.
using DocId = std::string;

// A Web of Linked Data: documents, per-document data, and a partial
// dereference map adoc from IRIs to documents.
struct Wold {
  std::map<DocId, Graph> docs;      // data defined exactly on docs
  std::map<Iri, DocId> adoc;        // partial; range(adoc) must be subset of docs

  bool has_doc(const DocId& d) const { return docs.count(d) != 0; }
  const Graph& data(const DocId& d) const;
  std::optional<DocId> deref(const Iri& u) const;
};

// A restriction of a Wold that may keep only parts of documents' data.
// adoc is derived from the parent: defined exactly where the parent's adoc
// lands inside docs.
struct Subweb {
  const Wold* parent = nullptr;
  std::map<DocId, Graph> docs;

  std::optional<DocId> deref(const Iri& u) const;
  std::size_t triple_count() const;
};

struct Dataset {
  Graph default_graph;
  std::map<Iri, Graph> named;
};

struct UnknownDocument : std::runtime_error {
  explicit UnknownDocument(const DocId& d) : std::runtime_error("unknown document: " + d) {}
};
struct ParentMismatch : std::runtime_error {
  ParentMismatch() : std::runtime_error("subweb union: operands restrict different WOLDs") {}
};

// Strips the fragment component per RFC 3986; idempotent.
Iri doc_iri_of(const Iri& u);

// The single-document subweb of d in w.
Subweb simpl(const DocId& d, const Wold& w);

Subweb empty_subweb(const Wold& w);

// Per-document union of two subwebs of the same parent.
Subweb subweb_union(const Subweb& a, const Subweb& b);

// Checks the three defining conditions of the subweb relation.
bool is_subweb(const Subweb& candidate, const Wold& w);

bool subweb_equal(const Subweb& a, const Subweb& b);

// Default graph = union of all document data; one named graph per IRI u with
// adoc(u) defined inside the subweb.
Dataset dataset_of(const Subweb& s);

}  // namespace swt::rdf
