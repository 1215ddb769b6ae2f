#pragma once

#include <map>
#include <memory>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "swt/rdf.hpp"

namespace swt::sparql {

using rdf::Graph;
using rdf::Iri;
using rdf::Term;

struct Variable {
  std::string name;  // without the '?'
  auto operator<=>(const Variable&) const = default;
};

using PatTerm = std::variant<Term, Variable>;

struct TriplePattern {
  PatTerm s, p, o;
};

bool operator==(const TriplePattern& a, const TriplePattern& b);

struct Ggp;

struct SelectQuery {
  std::vector<Variable> projection;
  bool star = false;  // SELECT *: project every in-scope variable
  std::shared_ptr<Ggp> where;
};

// Filter expressions with SPARQL's error-absorbing three-valued semantics.
struct Expr {
  enum class Kind { And, Or, Not, Compare, Bound, Exists, NotExists, BoolConst };
  Kind kind;
  std::string op;  // Compare: one of = != < >
  PatTerm lhs, rhs;
  Variable var;  // Bound
  bool value = false;
  std::vector<std::shared_ptr<Expr>> args;
  std::shared_ptr<Ggp> group;  // Exists / NotExists
};

struct BgpElem {
  std::vector<TriplePattern> patterns;
};
struct OptionalElem {
  std::shared_ptr<Ggp> group;
};
struct UnionElem {
  std::shared_ptr<Ggp> left, right;
};
struct FilterElem {
  std::shared_ptr<Expr> expr;
};
struct SubSelectElem {
  SelectQuery query;
};

using GgpElement = std::variant<BgpElem, OptionalElem, UnionElem, FilterElem, SubSelectElem>;

struct Ggp {
  std::vector<GgpElement> elements;
};

using ConstructTemplate = std::vector<TriplePattern>;

// Partial map Variable -> Term; join defined only when shared variables agree.
using SolutionMapping = std::map<std::string, Term>;
using Bindings = std::vector<SolutionMapping>;  // bag semantics

struct ResultTable {
  std::vector<Variable> projection;
  Bindings rows;

  // Set projection of the bag, for acceptance-style comparisons.
  std::set<std::vector<std::optional<Term>>> as_set() const;
  std::size_t size() const { return rows.size(); }
};

struct UnsupportedFeature : std::runtime_error {
  explicit UnsupportedFeature(const std::string& name) : std::runtime_error("unsupported SPARQL feature: " + name) {}
};
struct EvaluationError : std::runtime_error {
  explicit EvaluationError(const std::string& msg) : std::runtime_error(msg) {}
};

SelectQuery parse_select(const std::string& text, const Iri& base = "swt:query");

Bindings eval_ggp(const Ggp& g, const Graph& default_graph);

ResultTable eval_select(const SelectQuery& q, const rdf::Subweb& s);
ResultTable eval_select_on_graph(const SelectQuery& q, const Graph& g);

// Substitutes every variable bound in mu; unbound variables remain variables.
ConstructTemplate instantiate_template(const ConstructTemplate& c, const SolutionMapping& mu);

// Deep-copy substitution of mu into a group pattern (bound(?v) on a
// substituted variable becomes constant true, as in EXISTS evaluation).
std::shared_ptr<Ggp> substitute(const Ggp& g, const SolutionMapping& mu);

// True iff t matches p with some consistent binding of p's free variables.
bool matches_pattern(const TriplePattern& p, const rdf::Triple& t);

std::string to_csv(const ResultTable& t);
std::string to_text_table(const ResultTable& t);  // deterministic sorted form

// Shared-grammar hooks used by the SWSL parser.
namespace detail {
struct ParserCursor;
}

}  // namespace swt::sparql
