#pragma once

#include <cstdint>
#include <memory>
#include <random>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "swt/engine.hpp"
#include "swt/rdf.hpp"
#include "swt/sparql.hpp"

namespace swt::ldql {

using rdf::Iri;
using rdf::Term;
using rdf::Wold;

// One slot of a link pattern: a fixed term, the wildcard '_' (captures the
// matched IRI), or '+' (must equal the context IRI).
struct LpSlot {
  enum class Kind { Fixed, Underscore, Plus };
  Kind kind = Kind::Underscore;
  Term value;  // Fixed only; literals allowed in the object slot

  static LpSlot fixed(Term t) { return {Kind::Fixed, std::move(t)}; }
  static LpSlot wild() { return {Kind::Underscore, {}}; }
  static LpSlot ctx() { return {Kind::Plus, {}}; }
  auto operator<=>(const LpSlot&) const = default;
};

struct LinkPattern {
  LpSlot s, p, o;
  auto operator<=>(const LinkPattern&) const = default;
};

enum class LpeKind { Epsilon, Pattern, Seq, Alt, Star, Test };

struct Lpe {
  LpeKind kind = LpeKind::Epsilon;
  LinkPattern pattern;           // Pattern only
  std::shared_ptr<Lpe> a, b;    // children (Seq/Alt: both; Star/Test: a)
};

std::shared_ptr<Lpe> eps();
std::shared_ptr<Lpe> pat(LinkPattern lp);
std::shared_ptr<Lpe> seq(std::shared_ptr<Lpe> a, std::shared_ptr<Lpe> b);
std::shared_ptr<Lpe> alt(std::shared_ptr<Lpe> a, std::shared_ptr<Lpe> b);
std::shared_ptr<Lpe> star(std::shared_ptr<Lpe> a);
std::shared_ptr<Lpe> test(std::shared_ptr<Lpe> a);

std::string to_string(const Lpe& e);

// All IRIs u such that lp matches t with result u in context ctx: every slot
// must agree (fixed value / context IRI / wildcard) and u is the value of a
// wildcard slot holding an IRI.
std::set<Iri> match_link_pattern(const LinkPattern& lp, const rdf::Triple& t, const Iri& ctx);

std::set<Iri> eval_lpe(const Lpe& e, const Wold& w, const Iri& u);

struct LdqlQuery {
  std::shared_ptr<Lpe> lpe;
  sparql::SelectQuery query;
};

sparql::ResultTable eval_ldql_query(const LdqlQuery& q, const Wold& w, const std::set<Iri>& seeds);

// The source selector all_{p*,u}: W -> [[ <+,p,_>* ]]_W(u).
struct AllPstarSelector : engine::SourceSelector {
  Iri p, u;
  AllPstarSelector(Iri p_, Iri u_) : p(std::move(p_)), u(std::move(u_)) {}
  std::set<Iri> select(const Wold& w) const override;
  std::string describe() const override { return "all{" + p + "*, " + u + "}"; }
};

std::shared_ptr<engine::SourceSelector> all_pstar_selector(const Iri& p, const Iri& u);

// --- encoding / capture machinery ------------------------------------------

// Reserved namespace for fresh encoding IRIs; must not occur in input WOLDs.
inline const char* kEncA = "urn:swt:enc#a";

struct UnsupportedSpecShape : std::runtime_error {
  explicit UnsupportedSpecShape(const std::string& msg) : std::runtime_error(msg) {}
};

struct Encoding {
  virtual ~Encoding() = default;
  virtual rdf::Graph encode(const engine::SourceSelector& sigma) const = 0;
  virtual std::string name() const = 0;
};

// enc(sigma_U) = {(a,a,v) | v in U} for constant selectors.
struct ConstEncoding : Encoding {
  rdf::Graph encode(const engine::SourceSelector& sigma) const override;
  std::string name() const override { return "const"; }
};

// enc(all_{p*,u}) = {(a,a,u)} for the fixed predicate p.
struct PstarEncoding : Encoding {
  Iri p;
  explicit PstarEncoding(Iri p_) : p(std::move(p_)) {}
  rdf::Graph encode(const engine::SourceSelector& sigma) const override;
  std::string name() const override { return "pstar(" + p + ")"; }
};

// Meta link path expressions of the two capture theorems.
std::shared_ptr<Lpe> const_meta_lpe();          // (a,a,_)*
std::shared_ptr<Lpe> pstar_meta_lpe(const Iri& p);  // ((a,a,_)/(+,p,_)*)*

// data'(d) = data(d) + enc(sigma) for every tuple of Theta_d. Requires every
// tuple to have b=true and an identity filter, and kEncA fresh in w.
Wold encode_cawold(const engine::SpecAnnotatedWold& aw, const Encoding& enc);

struct CaptureResult {
  bool ok = false;
  std::vector<rdf::DocId> missing;  // in soi but not reached by the meta-lpe
  std::vector<rdf::DocId> extra;    // reached but not in soi
};

// Does docs([[e_meta]]_{enc(aw)}(u)) equal soi(adoc(u), aw) as a subweb?
CaptureResult check_capture(const Encoding& enc, const Lpe& e_meta, const engine::SpecAnnotatedWold& aw,
                            const Iri& u);

// The WOLD of the inexpressivity argument: d1 = {(u1,p,u2),(u1,q,u3)} with
// spec {(all_{p*,u1}, true, id)}; d2, d3 empty with empty specs.
engine::SpecAnnotatedWold counterexample_wold();

// --- bounded enumeration -----------------------------------------------------

// Flat arena of every LPE AST up to max_nodes nodes over the given pattern
// alphabet, grouped by node count. Expression ids index `nodes`.
struct LpeArena {
  struct Node {
    LpeKind kind;
    std::int32_t atom = -1;  // Pattern: index into alphabet
    std::int32_t a = -1, b = -1;
  };
  std::vector<LinkPattern> alphabet;
  std::vector<Node> nodes;
  std::vector<std::vector<std::int32_t>> by_size;  // by_size[k]: ids with k nodes (k >= 1)

  std::size_t size() const { return nodes.size(); }
  std::shared_ptr<Lpe> to_lpe(std::int32_t id) const;
};

LpeArena enumerate_lpes(std::vector<LinkPattern> alphabet, int max_nodes);

// Random annotated webs of the two supported selector classes, for capture
// trials (capture-check tooling and property tests).
engine::SpecAnnotatedWold random_const_cawold(std::mt19937_64& rng);
engine::SpecAnnotatedWold random_pstar_cawold(std::mt19937_64& rng, const Iri& p);

// The 27 link patterns over the slot alphabet {a, +, _}: everything a meta
// expression over an encoded caWOLD may mention.
std::vector<LinkPattern> encoding_alphabet();

struct RefutationResult {
  std::size_t expressions_checked = 0;
  bool capture_found = false;
  bool symmetry_ok = true;  // renaming the two predicates never tells u2 from u3
  std::string witness;      // a capturing expression, if one was found
};

// Exhaustively evaluates every meta expression up to max_nodes over
// encoding_alphabet() against the two-predicate counterexample web and
// reports whether any of them captures its subweb of interest.
RefutationResult refute_counterexample(int max_nodes);

// Bottom-up evaluation of every arena expression at one start IRI. The IRI
// universe (all IRIs in the web's triples plus the start) must fit in 64
// entries; results are bitmasks over `universe`.
struct BulkEval {
  std::vector<Iri> universe;
  std::vector<std::uint64_t> result_at_start;  // indexed by expression id

  std::set<Iri> decode(std::uint64_t mask) const;
};

BulkEval eval_all(const LpeArena& arena, const Wold& w, const Iri& start);

}  // namespace swt::ldql
