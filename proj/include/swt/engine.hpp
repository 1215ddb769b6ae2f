#pragma once

#include <map>
#include <memory>
#include <ostream>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "swt/rdf.hpp"
#include "swt/sparql.hpp"

namespace swt::engine {

using rdf::DocId;
using rdf::Graph;
using rdf::Iri;
using rdf::Subweb;
using rdf::Wold;

// A source selector: WOLD -> set of IRIs naming documents to include.
struct SourceSelector {
  virtual ~SourceSelector() = default;
  virtual std::set<Iri> select(const Wold& w) const = 0;
  virtual std::string describe() const = 0;
};

// A filter shrinking a triple set relative to a context IRI. The underlying
// WOLD is passed through because language-defined filters may consult the
// context document's data; f(s, v, w) must be a subset of s for every input.
struct Filter {
  virtual ~Filter() = default;
  virtual Graph apply(const Graph& s, const Iri& v, const Wold& w) const = 0;
  virtual bool is_identity() const { return false; }
  virtual std::string describe() const = 0;
};

struct ConstantSelector : SourceSelector {
  std::set<Iri> iris;
  explicit ConstantSelector(std::set<Iri> is) : iris(std::move(is)) {}
  std::set<Iri> select(const Wold&) const override { return iris; }
  std::string describe() const override;
};

struct IdentityFilter : Filter {
  Graph apply(const Graph& s, const Iri&, const Wold&) const override { return s; }
  bool is_identity() const override { return true; }
  std::string describe() const override { return "identity"; }
};

struct SubwebSpecTuple {
  std::shared_ptr<const SourceSelector> sigma;
  bool b = false;
  std::shared_ptr<const Filter> f;
  std::string id;  // stable label for traces
};

struct SubwebSpecification {
  std::vector<SubwebSpecTuple> tuples;
  bool empty() const { return tuples.empty(); }
};

// A WOLD where every document carries a (possibly empty) subweb specification.
struct SpecAnnotatedWold {
  Wold wold;
  std::map<DocId, SubwebSpecification> specs;

  const SubwebSpecification& spec_of(const DocId& d) const;
};

struct SpecAnnotatedQuery {
  sparql::SelectQuery query;
  SubwebSpecification spec;
};

struct AnnotationError {
  DocId doc;
  std::string message;
};

struct NonConvergence : std::runtime_error {
  explicit NonConvergence(int cap)
      : std::runtime_error("specification evaluation did not converge within " + std::to_string(cap) +
                           " iterations") {}
};

// Vocabulary linking documents to their published specifications.
inline const char* kSpecPredicate = "https://example.org/specs#hasSpecification";
inline const char* kScopePredicate = "https://example.org/specs#scope";
inline const char* kSwslDatatype = "https://example.org/specs#SWSL";

// Parses published SWSL annotations out of every document. Malformed scopes
// leave the document with an empty spec and append to `errors`.
SpecAnnotatedWold extract_annotations(const Wold& w, std::vector<AnnotationError>* errors = nullptr);

// Least-fixpoint evaluation of a specification over the annotated WOLD.
// iteration_cap <= 0 means the default 2*|docs|+2.
Subweb eval_specification(const SubwebSpecification& theta, const SpecAnnotatedWold& aw,
                          std::ostream* trace = nullptr, int iteration_cap = 0);

// Subweb of interest: the document's own data plus its specification's value.
Subweb soi(const DocId& d, const SpecAnnotatedWold& aw);

sparql::ResultTable eval_annotated_query(const SpecAnnotatedQuery& q, const SpecAnnotatedWold& aw);

// The querying agent's delegation spec: include each seed's document together
// with the subweb its publisher declared (constant sigma, b=true, identity f).
SubwebSpecification seed_adopting_spec(const std::set<Iri>& seeds);

}  // namespace swt::engine
