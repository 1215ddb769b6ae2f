#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <random>

#include "doctest.h"
#include "fixture_web.hpp"
#include "swt/ldql.hpp"

using namespace swt;
using namespace swt::ldql;
using rdf::Term;

namespace {

const std::string kFoafKnows = "http://xmlns.com/foaf/0.1/knows";
const std::string kFoafName = "http://xmlns.com/foaf/0.1/name";

LinkPattern lp_ctx_p_wild(const std::string& p) {
  return {LpSlot::ctx(), LpSlot::fixed(Term::iri(p)), LpSlot::wild()};
}

// friend chain: pN knows pN+1, each person documents their own name
rdf::Wold person_chain(int n) {
  rdf::Wold w;
  for (int i = 1; i <= n; ++i) {
    std::string doc = "https://pc.ex/p" + std::to_string(i);
    std::string me = doc + "#me";
    rdf::Graph g = {{Term::iri(me), Term::iri(kFoafName), Term::literal("P" + std::to_string(i))}};
    if (i < n)
      g.insert({Term::iri(me), Term::iri(kFoafKnows), Term::iri("https://pc.ex/p" + std::to_string(i + 1) + "#me")});
    w.docs[doc] = g;
    w.adoc[doc] = doc;
  }
  return w;
}

rdf::Wold random_wold(std::mt19937_64& rng, int max_docs = 5, int max_triples = 5) {
  rdf::Wold w;
  int n = 1 + static_cast<int>(rng() % max_docs);
  auto iri = [&](int i) { return "https://rw.ex/d" + std::to_string(i); };
  for (int i = 0; i < n; ++i) {
    rdf::Graph g;
    int t = static_cast<int>(rng() % (max_triples + 1));
    for (int k = 0; k < t; ++k)
      g.insert({Term::iri(iri(rng() % n)), Term::iri("https://rw.ex/p" + std::to_string(rng() % 2)),
                Term::iri(iri(rng() % n))});
    w.docs[iri(i)] = g;
    w.adoc[iri(i)] = iri(i);
  }
  return w;
}

std::shared_ptr<Lpe> random_lpe(std::mt19937_64& rng, int depth) {
  if (depth <= 0 || rng() % 3 == 0) {
    if (rng() % 4 == 0) return eps();
    auto slot = [&]() -> LpSlot {
      switch (rng() % 3) {
        case 0: return LpSlot::wild();
        case 1: return LpSlot::ctx();
        default: return LpSlot::fixed(Term::iri("https://rw.ex/" + std::string(rng() % 2 ? "p0" : "p1")));
      }
    };
    return pat({slot(), slot(), slot()});
  }
  switch (rng() % 4) {
    case 0: return seq(random_lpe(rng, depth - 1), random_lpe(rng, depth - 1));
    case 1: return alt(random_lpe(rng, depth - 1), random_lpe(rng, depth - 1));
    case 2: return star(random_lpe(rng, depth - 1));
    default: return test(random_lpe(rng, depth - 1));
  }
}

// Reference closure oracle: repeated relational-image computation over the
// whole universe, no worklist.
std::set<rdf::Iri> star_oracle(const Lpe& inner, const rdf::Wold& w, const rdf::Iri& u) {
  std::set<rdf::Iri> acc = {u};
  for (;;) {
    std::set<rdf::Iri> next = acc;
    for (const auto& v : acc) {
      auto r = eval_lpe(inner, w, v);
      next.insert(r.begin(), r.end());
    }
    if (next == acc) return acc;
    acc = std::move(next);
  }
}

std::vector<LinkPattern> enc_alphabet() {
  std::vector<LpSlot> slots = {LpSlot::fixed(Term::iri(kEncA)), LpSlot::ctx(), LpSlot::wild()};
  std::vector<LinkPattern> out;
  for (const auto& s : slots)
    for (const auto& p : slots)
      for (const auto& o : slots) out.push_back({s, p, o});
  return out;
}

}  // namespace

TEST_CASE("link pattern matching") {
  rdf::Triple t{Term::iri("https://uma.ex/#me"), Term::iri(kFoafKnows), Term::iri("https://ann.ex/#me")};
  CHECK(match_link_pattern(lp_ctx_p_wild(kFoafKnows), t, "https://uma.ex/#me") ==
        std::set<rdf::Iri>{"https://ann.ex/#me"});
  CHECK(match_link_pattern(lp_ctx_p_wild(kFoafKnows), t, "https://bob.ex/#me").empty());

  rdf::Triple tt{Term::iri("https://x.ex/a"), Term::iri("https://x.ex/p"), Term::iri("https://x.ex/b")};
  LinkPattern wild_p_wild{LpSlot::wild(), LpSlot::fixed(Term::iri("https://x.ex/p")), LpSlot::wild()};
  CHECK(match_link_pattern(wild_p_wild, tt, "https://x.ex/c") ==
        std::set<rdf::Iri>{"https://x.ex/a", "https://x.ex/b"});

  // results only come from wildcard slots, and only IRIs qualify
  LinkPattern fixed_all{LpSlot::fixed(tt.s), LpSlot::fixed(tt.p), LpSlot::fixed(tt.o)};
  CHECK(match_link_pattern(fixed_all, tt, "https://x.ex/a").empty());
  rdf::Triple lit{Term::iri("https://x.ex/a"), Term::iri("https://x.ex/p"), Term::literal("v")};
  CHECK(match_link_pattern(wild_p_wild, lit, "https://x.ex/c") == std::set<rdf::Iri>{"https://x.ex/a"});
}

TEST_CASE("lpe evaluation basics") {
  rdf::Wold w = person_chain(4);
  CHECK(eval_lpe(*eps(), w, "https://pc.ex/anything") == std::set<rdf::Iri>{"https://pc.ex/anything"});

  auto hop = pat(lp_ctx_p_wild(kFoafKnows));
  // a pattern at the friend IRI matches in the friend's own document: the
  // context for p2#me is document p2
  CHECK(eval_lpe(*hop, w, "https://pc.ex/p1#me") == std::set<rdf::Iri>{"https://pc.ex/p2#me"});
  CHECK(eval_lpe(*seq(hop, hop), w, "https://pc.ex/p1#me") == std::set<rdf::Iri>{"https://pc.ex/p3#me"});

  CHECK(eval_lpe(*star(hop), w, "https://pc.ex/p1#me") ==
        std::set<rdf::Iri>{"https://pc.ex/p1#me", "https://pc.ex/p2#me", "https://pc.ex/p3#me",
                           "https://pc.ex/p4#me"});

  CHECK(eval_lpe(*test(hop), w, "https://pc.ex/p1#me") == std::set<rdf::Iri>{"https://pc.ex/p1#me"});
  CHECK(eval_lpe(*test(hop), w, "https://pc.ex/p4#me").empty());  // p4 knows nobody
}

TEST_CASE("ldql query evaluation") {
  rdf::Wold w = usecase_wold();
  LdqlQuery q;
  q.lpe = eps();
  q.query = sparql::parse_select(read_file(fixture_path("usecase/listing5.rq")));
  // epsilon reaches the seed document only; no friend has a name there
  CHECK(eval_ldql_query(q, w, {"https://uma.ex/"}).size() == 0);

  rdf::Wold chain = person_chain(4);
  LdqlQuery names;
  auto hop = pat(lp_ctx_p_wild(kFoafKnows));
  names.lpe = seq(hop, hop);
  names.query = sparql::parse_select("SELECT ?n WHERE { ?x <" + kFoafName + "> ?n. }");
  CHECK(eval_ldql_query(names, chain, {"https://pc.ex/p1#me"}).as_set() ==
        std::set<std::vector<std::optional<Term>>>{{Term::literal("P3")}});
}

TEST_CASE("algebraic properties on random instances") {
  std::mt19937_64 rng(41);
  for (int iter = 0; iter < 150; ++iter) {
    rdf::Wold w = random_wold(rng);
    rdf::Iri u = "https://rw.ex/d" + std::to_string(rng() % w.docs.size());
    auto e1 = random_lpe(rng, 2), e2 = random_lpe(rng, 2);

    auto alt_v = eval_lpe(*alt(e1, e2), w, u);
    auto union_v = eval_lpe(*e1, w, u);
    auto r2 = eval_lpe(*e2, w, u);
    union_v.insert(r2.begin(), r2.end());
    REQUIRE(alt_v == union_v);

    auto seq_v = eval_lpe(*seq(e1, e2), w, u);
    std::set<rdf::Iri> comp;
    for (const auto& v : eval_lpe(*e1, w, u)) {
      auto r = eval_lpe(*e2, w, v);
      comp.insert(r.begin(), r.end());
    }
    REQUIRE(seq_v == comp);

    // Star fixpoint: [[e*]](u) = {u} union [[e/e*]](u)
    auto star_v = eval_lpe(*star(e1), w, u);
    auto unfold = eval_lpe(*seq(e1, star(e1)), w, u);
    unfold.insert(u);
    REQUIRE(star_v == unfold);
    REQUIRE(star_v == star_oracle(*e1, w, u));

    auto test_v = eval_lpe(*test(e1), w, u);
    REQUIRE((test_v.empty() || test_v == std::set<rdf::Iri>{u}));
  }
}

TEST_CASE("empty documents only ever yield the context itself") {
  rdf::Wold w;
  w.docs["https://e.ex/d"] = {};
  w.adoc["https://e.ex/d"] = "https://e.ex/d";
  LpeArena arena = enumerate_lpes(enc_alphabet(), 3);
  for (std::int32_t size = 1; size < static_cast<std::int32_t>(arena.by_size.size()); ++size)
    for (std::int32_t id : arena.by_size[size]) {
      auto r = eval_lpe(*arena.to_lpe(id), w, "https://e.ex/d");
      REQUIRE(r.size() <= 1);
      if (!r.empty()) REQUIRE(*r.begin() == "https://e.ex/d");
    }
}

TEST_CASE("all_pstar_selector walks predicate chains") {
  rdf::Wold w;
  const std::string p = "https://c.ex/f";
  for (int i = 1; i <= 3; ++i) {
    std::string u = "https://c.ex/u" + std::to_string(i);
    w.docs[u] = {};
    w.adoc[u] = u;
    if (i < 3) w.docs[u].insert({Term::iri(u), Term::iri(p), Term::iri("https://c.ex/u" + std::to_string(i + 1))});
  }
  CHECK(all_pstar_selector(p, "https://c.ex/u1")->select(w) ==
        std::set<rdf::Iri>{"https://c.ex/u1", "https://c.ex/u2", "https://c.ex/u3"});
  CHECK(all_pstar_selector(p, "https://c.ex/u3")->select(w) == std::set<rdf::Iri>{"https://c.ex/u3"});
  CHECK(engine::ConstantSelector({"https://a.ex/", "https://b.ex/"}).select(w) ==
        std::set<rdf::Iri>{"https://a.ex/", "https://b.ex/"});
}

TEST_CASE("counterexample web: subwebs of interest") {
  auto aw = counterexample_wold();
  auto docs_of = [&](const char* d) {
    std::set<rdf::DocId> out;
    for (const auto& [doc, _] : engine::soi(d, aw).docs) out.insert(doc);
    return out;
  };
  CHECK(docs_of("https://cx.ex/u1") == std::set<rdf::DocId>{"https://cx.ex/u1", "https://cx.ex/u2"});
  CHECK(docs_of("https://cx.ex/u2") == std::set<rdf::DocId>{"https://cx.ex/u2"});
  CHECK(docs_of("https://cx.ex/u3") == std::set<rdf::DocId>{"https://cx.ex/u3"});
}

TEST_CASE("encoding the counterexample and shape checks") {
  auto aw = counterexample_wold();
  PstarEncoding enc("https://cx.ex/p");
  rdf::Wold e = encode_cawold(aw, enc);
  CHECK(e.data("https://cx.ex/u1").size() == 3);  // one fresh (a,a,u1) triple
  CHECK(e.data("https://cx.ex/u1").count({Term::iri(kEncA), Term::iri(kEncA), Term::iri("https://cx.ex/u1")}));
  CHECK(e.data("https://cx.ex/u2").empty());

  // all-empty specs: unchanged
  engine::SpecAnnotatedWold plain;
  plain.wold = aw.wold;
  CHECK(encode_cawold(plain, enc).docs == aw.wold.docs);

  // shape violations
  auto bad_b = aw;
  bad_b.specs["https://cx.ex/u1"].tuples[0].b = false;
  CHECK_THROWS_AS(encode_cawold(bad_b, enc), UnsupportedSpecShape);
  auto bad_enc = aw;
  bad_enc.specs["https://cx.ex/u1"].tuples[0].sigma = std::make_shared<engine::ConstantSelector>(std::set<rdf::Iri>{});
  CHECK_THROWS_AS(encode_cawold(bad_enc, enc), UnsupportedSpecShape);

  // freshness of the reserved IRI
  auto stale = aw;
  stale.wold.docs["https://cx.ex/u2"].insert({Term::iri(kEncA), Term::iri("https://cx.ex/p"), Term::iri(kEncA)});
  CHECK_THROWS_AS(encode_cawold(stale, PstarEncoding("https://cx.ex/p")), UnsupportedSpecShape);
}

namespace {

engine::SpecAnnotatedWold random_const_caw(std::mt19937_64& rng) {
  engine::SpecAnnotatedWold aw;
  int n = 2 + static_cast<int>(rng() % 7);
  auto iri = [](int i) { return "https://rc.ex/d" + std::to_string(i); };
  for (int i = 0; i < n; ++i) {
    rdf::Graph g;
    int t = static_cast<int>(rng() % 3);
    for (int k = 0; k < t; ++k)
      g.insert({Term::iri(iri(rng() % n)), Term::iri("https://rc.ex/p" + std::to_string(rng() % 2)),
                Term::iri(iri(rng() % n))});
    aw.wold.docs[iri(i)] = g;
    aw.wold.adoc[iri(i)] = iri(i);
  }
  for (int i = 0; i < n; ++i) {
    engine::SubwebSpecification theta;
    int tuples = static_cast<int>(rng() % 3);
    for (int t = 0; t < tuples; ++t) {
      std::set<rdf::Iri> targets;
      int k = 1 + static_cast<int>(rng() % 3);
      for (int j = 0; j < k; ++j) {
        if (rng() % 5 == 0) targets.insert("https://rc.ex/dangling" + std::to_string(rng() % 2));
        else targets.insert(iri(rng() % n));
      }
      theta.tuples.push_back({std::make_shared<engine::ConstantSelector>(targets), true,
                              std::make_shared<engine::IdentityFilter>(), "c"});
    }
    aw.specs[iri(i)] = std::move(theta);
  }
  return aw;
}

engine::SpecAnnotatedWold random_pstar_caw(std::mt19937_64& rng, const rdf::Iri& p) {
  engine::SpecAnnotatedWold aw;
  int n = 2 + static_cast<int>(rng() % 7);
  auto iri = [](int i) { return "https://rp.ex/d" + std::to_string(i); };
  for (int i = 0; i < n; ++i) {
    rdf::Graph g;
    int t = static_cast<int>(rng() % 4);
    for (int k = 0; k < t; ++k) {
      rdf::Iri pred = rng() % 2 ? p : "https://rp.ex/other";
      g.insert({Term::iri(iri(rng() % n)), Term::iri(pred), Term::iri(iri(rng() % n))});
    }
    aw.wold.docs[iri(i)] = g;
    aw.wold.adoc[iri(i)] = iri(i);
  }
  for (int i = 0; i < n; ++i) {
    engine::SubwebSpecification theta;
    if (rng() % 2)
      theta.tuples.push_back(
          {all_pstar_selector(p, iri(rng() % n)), true, std::make_shared<engine::IdentityFilter>(), "p*"});
    aw.specs[iri(i)] = std::move(theta);
  }
  return aw;
}

}  // namespace

TEST_CASE("constant-selector capture holds on random webs") {
  std::mt19937_64 rng(51);
  ConstEncoding enc;
  auto meta = const_meta_lpe();
  for (int iter = 0; iter < 50; ++iter) {
    auto aw = random_const_caw(rng);
    for (const auto& [d, _] : aw.wold.docs) {
      auto r = check_capture(enc, *meta, aw, d);
      REQUIRE(r.ok);
    }
  }
}

TEST_CASE("p-star capture holds on random webs") {
  std::mt19937_64 rng(53);
  const rdf::Iri p = "https://rp.ex/link";
  PstarEncoding enc(p);
  auto meta = pstar_meta_lpe(p);
  for (int iter = 0; iter < 50; ++iter) {
    auto aw = random_pstar_caw(rng, p);
    for (const auto& [d, _] : aw.wold.docs) {
      auto r = check_capture(enc, *meta, aw, d);
      REQUIRE(r.ok);
    }
  }
}

TEST_CASE("the fixed-predicate pair fails on the mixed-predicate figure") {
  auto aw = counterexample_wold();
  // pretend the class predicate were q: the encoding still writes (a,a,u1),
  // but the meta expression then walks q-links and lands on the wrong document
  PstarEncoding enc_q("https://cx.ex/q");
  auto r = check_capture(enc_q, *pstar_meta_lpe("https://cx.ex/q"), aw, "https://cx.ex/u1");
  CHECK_FALSE(r.ok);
  CHECK(r.missing == std::vector<rdf::DocId>{"https://cx.ex/u2"});
  CHECK(r.extra == std::vector<rdf::DocId>{"https://cx.ex/u3"});

  // with the right predicate the pair does capture this particular web
  CHECK(check_capture(PstarEncoding("https://cx.ex/p"), *pstar_meta_lpe("https://cx.ex/p"), aw,
                      "https://cx.ex/u1")
            .ok);
}

TEST_CASE("enumeration counts") {
  LpeArena one = enumerate_lpes({lp_ctx_p_wild("https://x.ex/p")}, 1);
  CHECK(one.size() == 2);  // eps + the one pattern

  LpeArena two = enumerate_lpes({lp_ctx_p_wild("https://x.ex/p")}, 2);
  CHECK(two.by_size[1].size() == 2);
  CHECK(two.by_size[2].size() == 4);  // star/test of each size-1 expression
  CHECK(two.size() == 6);

  LpeArena three = enumerate_lpes({lp_ctx_p_wild("https://x.ex/p")}, 3);
  // size 3: star/test of the 4 size-2 exprs (8) + seq/alt of size-1 pairs (2*2*2)
  CHECK(three.by_size[3].size() == 16);
}

TEST_CASE("bulk evaluation agrees with direct evaluation") {
  std::mt19937_64 rng(61);
  std::vector<LinkPattern> alphabet = {
      {LpSlot::wild(), LpSlot::fixed(Term::iri("https://rw.ex/p0")), LpSlot::wild()},
      {LpSlot::ctx(), LpSlot::fixed(Term::iri("https://rw.ex/p1")), LpSlot::wild()},
      {LpSlot::wild(), LpSlot::wild(), LpSlot::wild()},
  };
  LpeArena arena = enumerate_lpes(alphabet, 4);
  for (int iter = 0; iter < 10; ++iter) {
    rdf::Wold w = random_wold(rng);
    rdf::Iri start = "https://rw.ex/d0";
    BulkEval be = eval_all(arena, w, start);
    for (std::size_t id = 0; id < arena.size(); ++id) {
      auto direct = eval_lpe(*arena.to_lpe(static_cast<std::int32_t>(id)), w, start);
      REQUIRE(be.decode(be.result_at_start[id]) == direct);
    }
  }
}

TEST_CASE("no small meta-expression over the encoding alphabet captures the counterexample") {
  auto aw = counterexample_wold();
  rdf::Wold enc_w = encode_cawold(aw, PstarEncoding("https://cx.ex/p"));
  LpeArena arena = enumerate_lpes(enc_alphabet(), 4);  // smoke depth; the full bound runs in acceptance
  BulkEval be = eval_all(arena, enc_w, "https://cx.ex/u1");
  std::uint64_t bu1 = 0, bu2 = 0, bu3 = 0;
  for (std::size_t i = 0; i < be.universe.size(); ++i) {
    if (be.universe[i] == "https://cx.ex/u1") bu1 = 1ull << i;
    if (be.universe[i] == "https://cx.ex/u2") bu2 = 1ull << i;
    if (be.universe[i] == "https://cx.ex/u3") bu3 = 1ull << i;
  }
  REQUIRE(bool(bu1 && bu2 && bu3));
  for (std::uint64_t r : be.result_at_start) {
    // the symmetry of p/q renaming makes u2 and u3 indistinguishable
    REQUIRE(static_cast<bool>(r & bu2) == static_cast<bool>(r & bu3));
    bool captures = (r & bu1) && (r & bu2) && !(r & bu3);
    REQUIRE_FALSE(captures);
  }
}
