#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <random>

#include "doctest.h"
#include "fixture_web.hpp"
#include "swt/engine.hpp"
#include "swt/swsl.hpp"

using namespace swt;
using namespace swt::engine;
using rdf::Term;

namespace {

std::set<rdf::DocId> doc_set(const rdf::Subweb& s) {
  std::set<rdf::DocId> out;
  for (const auto& [d, _] : s.docs) out.insert(d);
  return out;
}

// Filter keeping triples whose subject is in a fixed allow set; trivially
// satisfies the subset contract and is monotone.
struct SubjectFilter : Filter {
  std::set<std::string> allowed;
  explicit SubjectFilter(std::set<std::string> a) : allowed(std::move(a)) {}
  rdf::Graph apply(const rdf::Graph& s, const rdf::Iri&, const rdf::Wold&) const override {
    rdf::Graph out;
    for (const auto& t : s)
      if (allowed.count(t.s.value)) out.insert(t);
    return out;
  }
  std::string describe() const override { return "subject-allowlist"; }
};

// Random caWOLD whose constant selectors only point "forward" in document
// order, so the defining recursion is well-founded and a direct structural
// recursion can serve as oracle.
SpecAnnotatedWold random_acyclic_web(std::mt19937_64& rng) {
  SpecAnnotatedWold aw;
  int n = 2 + static_cast<int>(rng() % 7);
  std::vector<rdf::Iri> iris;
  for (int i = 0; i < n; ++i) iris.push_back("https://r.ex/d" + std::to_string(i));
  for (int i = 0; i < n; ++i) {
    rdf::Graph g;
    int triples = static_cast<int>(rng() % 4);
    for (int t = 0; t < triples; ++t)
      g.insert({Term::iri(iris[rng() % n]), Term::iri("https://r.ex/p" + std::to_string(rng() % 2)),
                Term::iri(iris[rng() % n])});
    aw.wold.docs[iris[i]] = g;
    aw.wold.adoc[iris[i]] = iris[i];
  }
  for (int i = 0; i < n; ++i) {
    SubwebSpecification theta;
    int tuples = static_cast<int>(rng() % 3);
    for (int t = 0; t < tuples && i + 1 < n; ++t) {
      SubwebSpecTuple tup;
      std::set<rdf::Iri> targets;
      for (int k = 0; k < 2; ++k) targets.insert(iris[i + 1 + rng() % (n - i - 1)]);
      tup.sigma = std::make_shared<ConstantSelector>(targets);
      tup.b = rng() % 2;
      if (rng() % 2) {
        tup.f = std::make_shared<IdentityFilter>();
      } else {
        std::set<std::string> allow;
        for (const auto& u : iris)
          if (rng() % 2) allow.insert(u);
        tup.f = std::make_shared<SubjectFilter>(allow);
      }
      tup.id = "t" + std::to_string(i) + "." + std::to_string(t);
      theta.tuples.push_back(std::move(tup));
    }
    aw.specs[iris[i]] = std::move(theta);
  }
  return aw;
}

// Direct structural recursion, valid on acyclic annotation graphs only.
rdf::Subweb oracle_eval(const SubwebSpecification& theta, const SpecAnnotatedWold& aw) {
  rdf::Subweb acc = rdf::empty_subweb(aw.wold);
  for (const auto& tup : theta.tuples) {
    for (const rdf::Iri& u : tup.sigma->select(aw.wold)) {
      auto d = aw.wold.deref(u);
      if (!d) continue;
      rdf::Subweb s = rdf::simpl(*d, aw.wold);
      if (tup.b) s = rdf::subweb_union(s, oracle_eval(aw.spec_of(*d), aw));
      rdf::Subweb filtered;
      filtered.parent = &aw.wold;
      for (const auto& [doc, g] : s.docs) filtered.docs[doc] = tup.f->apply(g, u, aw.wold);
      acc = rdf::subweb_union(acc, filtered);
    }
  }
  return acc;
}

}  // namespace

TEST_CASE("annotation extraction on the use-case web") {
  SpecAnnotatedWold aw = extract_annotations(usecase_wold());
  CHECK(aw.spec_of("https://uma.ex/").tuples.size() == 1);
  CHECK(aw.spec_of("https://uma.ex/").tuples[0].b);
  CHECK(aw.spec_of("https://ann.ex/").tuples.size() == 1);
  CHECK_FALSE(aw.spec_of("https://ann.ex/").tuples[0].b);
  for (const char* d : {"https://bob.ex/", "https://corp.ex/ann/", "https://ann.ex/blog/", "https://photos.ex/ann/",
                        "http://dbpedia.org/resource/Mickey_Mouse"})
    CHECK(aw.spec_of(d).empty());
}

TEST_CASE("web without annotations and malformed scope strings") {
  rdf::Wold w;
  w.docs["https://a.ex/"] = {{Term::iri("https://a.ex/#x"), Term::iri("https://a.ex/p"), Term::iri("https://a.ex/#y")}};
  w.adoc["https://a.ex/"] = "https://a.ex/";
  std::vector<AnnotationError> errs;
  SpecAnnotatedWold aw = extract_annotations(w, &errs);
  CHECK(aw.spec_of("https://a.ex/").empty());
  CHECK(errs.empty());

  rdf::Wold bad = w;
  bad.docs["https://a.ex/"].insert(
      {Term::iri("https://a.ex/#x"), Term::iri(kSpecPredicate), Term::iri("https://a.ex/#spec")});
  bad.docs["https://a.ex/"].insert(
      {Term::iri("https://a.ex/#spec"), Term::iri(kScopePredicate), Term::literal("FOLLOW garbage", {}, kSwslDatatype)});
  errs.clear();
  SpecAnnotatedWold aw2 = extract_annotations(bad, &errs);
  CHECK(aw2.spec_of("https://a.ex/").empty());
  REQUIRE(errs.size() == 1);
  CHECK(errs[0].doc == "https://a.ex/");
  // the document's own data is untouched
  CHECK(aw2.wold.data("https://a.ex/").size() == 3);
}

TEST_CASE("Uma's specification evaluates to her friends' filtered subwebs") {
  SpecAnnotatedWold aw = extract_annotations(usecase_wold());
  rdf::Subweb sub = eval_specification(aw.spec_of("https://uma.ex/"), aw);
  CHECK(doc_set(sub) == std::set<rdf::DocId>{"https://ann.ex/", "https://bob.ex/", "https://corp.ex/ann/"});

  // Bob's document shrinks to his own three triples
  CHECK(sub.docs.at("https://bob.ex/").size() == 3);
  for (const auto& t : sub.docs.at("https://bob.ex/")) CHECK(t.s == Term::iri("https://bob.ex/#me"));
  // Ann's corporate page survives via b=true and Ann's own spec
  CHECK(sub.docs.at("https://corp.ex/ann/").size() == 3);
  // Ann's document keeps only ann-subject triples (the spec bookkeeping triples go)
  for (const auto& t : sub.docs.at("https://ann.ex/")) CHECK(t.s == Term::iri("https://ann.ex/#me"));
  CHECK(rdf::is_subweb(sub, aw.wold));
}

TEST_CASE("empty specification evaluates to the empty subweb") {
  SpecAnnotatedWold aw = extract_annotations(usecase_wold());
  CHECK(eval_specification(SubwebSpecification{}, aw).docs.empty());
}

TEST_CASE("mutual WITH-SUBWEBS inclusion converges to the union") {
  SpecAnnotatedWold aw;
  for (const char* d : {"https://m.ex/a", "https://m.ex/b"}) {
    aw.wold.docs[d] = {{Term::iri(d), Term::iri("https://m.ex/p"), Term::literal("x")}};
    aw.wold.adoc[d] = d;
  }
  auto include = [](const rdf::Iri& target) {
    SubwebSpecification theta;
    SubwebSpecTuple t;
    t.sigma = std::make_shared<ConstantSelector>(std::set<rdf::Iri>{target});
    t.b = true;
    t.f = std::make_shared<IdentityFilter>();
    t.id = "inc";
    theta.tuples.push_back(std::move(t));
    return theta;
  };
  aw.specs["https://m.ex/a"] = include("https://m.ex/b");
  aw.specs["https://m.ex/b"] = include("https://m.ex/a");
  rdf::Subweb v = eval_specification(aw.spec_of("https://m.ex/a"), aw);
  CHECK(doc_set(v) == std::set<rdf::DocId>{"https://m.ex/a", "https://m.ex/b"});
  CHECK(v.triple_count() == 2);
}

TEST_CASE("soi adds the document's own data") {
  SpecAnnotatedWold aw = extract_annotations(usecase_wold());
  rdf::Subweb s = soi("https://uma.ex/", aw);
  CHECK(doc_set(s) ==
        std::set<rdf::DocId>{"https://uma.ex/", "https://ann.ex/", "https://bob.ex/", "https://corp.ex/ann/"});
  CHECK(s.docs.at("https://uma.ex/") == aw.wold.data("https://uma.ex/"));

  CHECK(rdf::subweb_equal(soi("https://bob.ex/", aw), rdf::simpl("https://bob.ex/", aw.wold)));
  CHECK_THROWS_AS(soi("https://nope.ex/", aw), rdf::UnknownDocument);
}

TEST_CASE("annotated query reproduces rows 1-3 of the use case") {
  SpecAnnotatedWold aw = extract_annotations(usecase_wold());
  SpecAnnotatedQuery q;
  q.query = sparql::parse_select(read_file(fixture_path("usecase/listing5.rq")));
  q.spec = seed_adopting_spec({"https://uma.ex/"});
  auto rows = eval_annotated_query(q, aw).as_set();

  std::set<std::vector<std::optional<Term>>> expected = {
      {Term::iri("https://ann.ex/#me"), Term::literal("Ann"), Term::iri("mailto:ann@corp.ex"),
       Term::iri("https://corp.ex/ann/me.jpg")},
      {Term::iri("https://bob.ex/#me"), Term::literal("Bob"), Term::iri("mailto:me@bob.ex"),
       Term::iri("https://uma.ex/bob.jpg")},
      {Term::iri("https://bob.ex/#me"), Term::literal("Bob"), Term::iri("mailto:me@bob.ex"),
       Term::iri("https://bob.ex/funny-fish.jpg")},
  };
  CHECK(rows == expected);

  SpecAnnotatedQuery empty{q.query, SubwebSpecification{}};
  CHECK(eval_annotated_query(empty, aw).size() == 0);
}

TEST_CASE("evaluation is monotone in the specification") {
  std::mt19937_64 rng(17);
  for (int iter = 0; iter < 30; ++iter) {
    SpecAnnotatedWold aw = random_acyclic_web(rng);
    SubwebSpecification theta;
    for (const auto& [d, sp] : aw.specs)
      for (const auto& t : sp.tuples) theta.tuples.push_back(t);
    SubwebSpecification smaller;
    for (const auto& t : theta.tuples)
      if (rng() % 2) smaller.tuples.push_back(t);
    rdf::Subweb big = eval_specification(theta, aw);
    rdf::Subweb small = eval_specification(smaller, aw);
    CHECK(rdf::subweb_equal(rdf::subweb_union(small, big), big));
  }
}

TEST_CASE("identity filters with b=false reduce to a union of documents") {
  SpecAnnotatedWold aw = extract_annotations(usecase_wold());
  SubwebSpecification theta;
  SubwebSpecTuple t;
  t.sigma = std::make_shared<ConstantSelector>(std::set<rdf::Iri>{"https://ann.ex/#me", "https://bob.ex/"});
  t.b = false;
  t.f = std::make_shared<IdentityFilter>();
  theta.tuples.push_back(t);
  rdf::Subweb v = eval_specification(theta, aw);
  CHECK(rdf::subweb_equal(
      v, rdf::subweb_union(rdf::simpl("https://ann.ex/", aw.wold), rdf::simpl("https://bob.ex/", aw.wold))));
}

TEST_CASE("fixpoint equals structural recursion on random acyclic webs") {
  std::mt19937_64 rng(23);
  for (int iter = 0; iter < 100; ++iter) {
    SpecAnnotatedWold aw = random_acyclic_web(rng);
    for (const auto& [d, theta] : aw.specs) {
      rdf::Subweb got = eval_specification(theta, aw);
      rdf::Subweb want = oracle_eval(theta, aw);
      REQUIRE(rdf::subweb_equal(got, want));
      REQUIRE(rdf::is_subweb(got, aw.wold));
    }
  }
}

TEST_CASE("re-evaluating on its own output is idempotent for identity filters") {
  SpecAnnotatedWold aw = extract_annotations(usecase_wold());
  SubwebSpecification theta = seed_adopting_spec({"https://uma.ex/", "https://bob.ex/"});
  rdf::Subweb once = eval_specification(theta, aw);
  rdf::Subweb twice = eval_specification(theta, aw);
  CHECK(rdf::subweb_equal(once, twice));
}

TEST_CASE("trace output is stable and labelled") {
  SpecAnnotatedWold aw = extract_annotations(usecase_wold());
  std::ostringstream trace;
  eval_specification(seed_adopting_spec({"https://uma.ex/"}), aw, &trace);
  std::string t = trace.str();
  CHECK(t.find("seed-adopt\thttps://uma.ex/\thttps://uma.ex/\tkept=") != std::string::npos);
  std::ostringstream again;
  eval_specification(seed_adopting_spec({"https://uma.ex/"}), aw, &again);
  CHECK(t == again.str());
}
