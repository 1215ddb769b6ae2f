#pragma once

#include <stdexcept>
#include <string>

#include "swt/rdf.hpp"

namespace swt::rdf {

struct SyntaxError : std::runtime_error {
  int line = 0, column = 0;
  SyntaxError(const std::string& msg, int line, int column)
      : std::runtime_error(msg + " at " + std::to_string(line) + ":" + std::to_string(column)),
        line(line),
        column(column) {}
};

struct UnresolvableIri : std::runtime_error {
  explicit UnresolvableIri(const std::string& iri) : std::runtime_error("unresolvable IRI: " + iri) {}
};

// RFC 3986 reference resolution of `ref` against absolute `base`.
Iri resolve_iri(const std::string& ref, const Iri& base);

bool is_absolute_iri(const std::string& iri);

// Parses the supported Turtle subset (prefix declarations, a/;/, shorthand,
// relative IRIs, language-tagged/datatyped/long-string literals). N-Triples
// input is covered by the same grammar. Blank nodes are scoped to this parse.
Graph parse_document(const std::string& text, const Iri& base);

// Canonical N-Triples: one triple per line, sorted; blank labels kept verbatim.
std::string to_ntriples(const Graph& g);

std::string term_to_ntriples(const Term& t);

}  // namespace swt::rdf
