#include "swt/bench.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include "swt/turtle.hpp"

namespace swt::bench {

namespace {

const std::string kVoc = "https://bench.ex/voc#";
const std::string kFoaf = "http://xmlns.com/foaf/0.1/";
const std::string kPrologue =
    "PREFIX voc: <https://bench.ex/voc#>\nPREFIX foaf: <http://xmlns.com/foaf/0.1/>\n";

using rdf::Graph;
using rdf::Term;

Term voc(const std::string& local) { return Term::iri(kVoc + local); }
Term foaf(const std::string& local) { return Term::iri(kFoaf + local); }

Iri ent(const std::string& type, int i) {
  return "https://bench.ex/" + type + "/" + std::to_string(i) + "/";
}

struct DocBuilder {
  Graph g;
  int next_spec = 0;

  void triple(Term s, Term p, Term o) { g.insert({std::move(s), std::move(p), std::move(o)}); }

  void spec(const Iri& doc, const std::string& statement) {
    Term node = Term::blank("spec" + std::to_string(next_spec++));
    triple(Term::iri(doc), Term::iri(engine::kSpecPredicate), node);
    triple(node, Term::iri(engine::kScopePredicate),
           Term::literal(kPrologue + statement, "", engine::kSwslDatatype));
  }
};

std::vector<std::string> person_statements(Profile profile) {
  std::vector<std::string> out = {
      "FOLLOW ?f WITH SUBWEBS { <> voc:knows ?f. } INCLUDE { ?f ?pp ?oo. }",
      "FOLLOW ?c WITH SUBWEBS { <> voc:isLocatedIn ?c. } INCLUDE { ?c ?pp ?oo. }",
      "FOLLOW ?u WITH SUBWEBS { <> voc:studyAt ?u. } INCLUDE { ?u ?pp ?oo. }",
      "FOLLOW ?w { <> voc:workAt ?b. ?b voc:hasOrganisation ?w. } INCLUDE { ?w ?pp ?oo. }",
      "FOLLOW ?m WITH SUBWEBS { <> voc:likes ?m. }",
  };
  if (profile == Profile::PlusLocation) {
    out.push_back("FOLLOW ?c WITH SUBWEBS { <> voc:isLocatedIn ?c. } INCLUDE { ?s voc:isPartOf ?o. }");
    out.push_back("FOLLOW ?f WITH SUBWEBS { <> voc:knows ?f. } INCLUDE { ?s voc:isPartOf ?o. }");
  } else if (profile == Profile::PlusOrganisation) {
    out.push_back("FOLLOW ?f WITH SUBWEBS { <> voc:knows ?f. } INCLUDE { ?s voc:hasOrganisation ?o. }");
    out.push_back("FOLLOW ?f WITH SUBWEBS { <> voc:knows ?f. } INCLUDE { ?s foaf:name ?o. }");
  }
  return out;
}

}  // namespace

std::string to_string(Profile p) {
  switch (p) {
    case Profile::Strict: return "strict";
    case Profile::PlusLocation: return "plus-location";
    case Profile::PlusOrganisation: return "plus-organisation";
  }
  return {};
}

GeneratedWeb generate_web(const WebGenConfig& cfg, Profile profile) {
  for (int c : {cfg.persons, cfg.cities, cfg.countries, cfg.continents, cfg.companies, cfg.universities,
                cfg.forums, cfg.tags, cfg.posts, cfg.comments, cfg.mean_friends, cfg.likes_per_person})
    if (c < 0) throw ConfigError("negative entity count");
  if (cfg.countries > 0 && cfg.continents < 1) throw ConfigError("countries need at least one continent");
  if (cfg.cities > 0 && cfg.countries < 1) throw ConfigError("cities need at least one country");

  std::mt19937_64 rng(cfg.rng_seed);
  auto pick = [&rng](int n) { return static_cast<int>(rng() % static_cast<std::uint64_t>(n)); };

  int likers = cfg.persons / 2;
  int commenters = cfg.persons - likers;
  std::map<Iri, DocBuilder> docs;

  for (int i = 0; i < cfg.continents; ++i)
    docs[ent("continent", i)].triple(Term::iri(ent("continent", i)), foaf("name"),
                                     Term::literal("Continent " + std::to_string(i)));
  for (int i = 0; i < cfg.countries; ++i) {
    Iri d = ent("country", i);
    auto& b = docs[d];
    b.triple(Term::iri(d), foaf("name"), Term::literal("Country " + std::to_string(i)));
    b.triple(Term::iri(d), voc("isPartOf"), Term::iri(ent("continent", i % cfg.continents)));
    b.spec(d, "FOLLOW ?c WITH SUBWEBS { <> voc:isPartOf ?c. } INCLUDE { ?c ?pp ?oo. }");
  }
  for (int i = 0; i < cfg.cities; ++i) {
    Iri d = ent("city", i);
    auto& b = docs[d];
    b.triple(Term::iri(d), foaf("name"), Term::literal("City " + std::to_string(i)));
    b.triple(Term::iri(d), voc("isPartOf"), Term::iri(ent("country", i % cfg.countries)));
    b.spec(d, "FOLLOW ?c WITH SUBWEBS { <> voc:isPartOf ?c. } INCLUDE { ?c ?pp ?oo. }");
  }
  for (int i = 0; i < cfg.companies; ++i)
    docs[ent("company", i)].triple(Term::iri(ent("company", i)), foaf("name"),
                                   Term::literal("Company " + std::to_string(i)));
  for (int i = 0; i < cfg.universities; ++i)
    docs[ent("university", i)].triple(Term::iri(ent("university", i)), foaf("name"),
                                      Term::literal("University " + std::to_string(i)));
  for (int i = 0; i < cfg.tags; ++i)
    docs[ent("tag", i)].triple(Term::iri(ent("tag", i)), foaf("name"),
                               Term::literal("Tag " + std::to_string(i)));

  GeneratedWeb out;
  for (int i = 0; i < cfg.persons; ++i) {
    Iri d = ent("person", i);
    bool liker = i < likers;
    auto& b = docs[d];
    Term me = Term::iri(d);
    b.triple(me, foaf("name"), Term::literal("Person " + std::to_string(i)));
    if (cfg.cities > 0) b.triple(me, voc("isLocatedIn"), Term::iri(ent("city", i % cfg.cities)));
    if (cfg.companies > 0) {
      // likers come in same-company mutual-friend pairs so the shared-company
      // query has answers among direct friends
      int company = liker ? (i / 2) % cfg.companies : i % cfg.companies;
      Term work = Term::blank("w" + std::to_string(i));
      b.triple(me, voc("workAt"), work);
      b.triple(work, voc("hasOrganisation"), Term::iri(ent("company", company)));
    }
    if (cfg.universities > 0) b.triple(me, voc("studyAt"), Term::iri(ent("university", i % cfg.universities)));
    if (liker) {
      if ((i ^ 1) < likers) b.triple(me, voc("knows"), Term::iri(ent("person", i ^ 1)));
      int extra = cfg.mean_friends > 0 ? pick(cfg.mean_friends + 1) : 0;
      for (int j = 0; j < extra; ++j) {
        int f = pick(likers);
        if (f != i) b.triple(me, voc("knows"), Term::iri(ent("person", f)));
      }
      // likers get pairwise-disjoint liked posts: a liked post reached through
      // one person's subweb then never completes another person's chain
      for (int j = 0; j < cfg.likes_per_person; ++j) {
        int post = i * cfg.likes_per_person + j;
        if (post < cfg.posts) b.triple(me, voc("likes"), Term::iri(ent("post", post)));
      }
    }
    if (cfg.tags > 0) {
      int n = 1 + pick(3);
      for (int j = 0; j < n; ++j) b.triple(me, voc("hasInterest"), Term::iri(ent("tag", pick(cfg.tags))));
    }
    for (const auto& st : person_statements(profile)) b.spec(d, st);
    out.person_docs.push_back(d);
    if (liker) out.liker_docs.push_back(d);
  }

  for (int i = 0; i < cfg.posts; ++i) {
    Iri d = ent("post", i);
    auto& b = docs[d];
    if (commenters > 0)
      b.triple(Term::iri(d), voc("hasCreator"), Term::iri(ent("person", likers + i % commenters)));
    b.spec(d, "FOLLOW ?c WITH SUBWEBS { <> voc:hasComment ?c. }");
  }
  for (int i = 0; i < cfg.comments; ++i) {
    Iri d = ent("comment", i);
    auto& b = docs[d];
    if (commenters > 0)
      b.triple(Term::iri(d), voc("hasCreator"), Term::iri(ent("person", likers + i % commenters)));
    if (cfg.posts > 0)
      docs[ent("post", i % cfg.posts)].triple(Term::iri(ent("post", i % cfg.posts)), voc("hasComment"),
                                              Term::iri(d));
  }

  for (int i = 0; i < cfg.forums; ++i) {
    Iri d = ent("forum", i);
    auto& b = docs[d];
    Term f = Term::iri(d);
    b.triple(f, foaf("name"), Term::literal("Forum " + std::to_string(i)));
    if (cfg.persons > 0) {
      b.triple(f, voc("hasModerator"), Term::iri(ent("person", pick(cfg.persons))));
      int members = 2 + pick(4);
      for (int j = 0; j < members; ++j) {
        Term m = Term::blank("m" + std::to_string(j));
        b.triple(f, voc("hasMember"), m);
        b.triple(m, voc("hasPerson"), Term::iri(ent("person", pick(cfg.persons))));
      }
    }
    if (cfg.tags > 0) {
      int n = 1 + pick(2);
      for (int j = 0; j < n; ++j) b.triple(f, voc("hasTag"), Term::iri(ent("tag", pick(cfg.tags))));
    }
    b.spec(d, "FOLLOW ?m { <> voc:hasModerator ?m. } INCLUDE { ?m ?pp ?oo. }");
    b.spec(d, "FOLLOW ?m { <> voc:hasMember ?b. ?b voc:hasPerson ?m. } INCLUDE { ?m ?pp ?oo. }");
    out.forum_docs.push_back(d);
  }

  // serialize then reparse: the stored body is the single source of truth,
  // and the reparse applies the same blank-node scoping as a real fetch
  for (const auto& [d, b] : docs) {
    std::string body = rdf::to_ntriples(b.g);
    out.store.add(d, webhost::Resource{"turtle", body, rdf::parse_document(body, d), true});
  }
  out.web = std::make_shared<engine::SpecAnnotatedWold>(engine::extract_annotations(out.store.to_wold()));
  return out;
}

std::string write_manifest(const GeneratedWeb& web, const std::string& dir) {
  std::filesystem::create_directories(dir);
  std::string manifest_path = dir + "/web.manifest";
  std::ofstream manifest(manifest_path, std::ios::binary);
  manifest << "# generated benchmark web\n";
  int i = 0;
  for (const auto& [iri, r] : web.store.resources()) {
    std::string file = "doc" + std::to_string(i++) + ".ttl";
    std::ofstream body(dir + "/" + file, std::ios::binary);
    body << r.body;
    manifest << iri << "\t" << file << "\t" << r.format << "\n";
  }
  return manifest_path;
}

const std::vector<QueryFixture>& query_fixtures() {
  static const std::vector<QueryFixture> kQueries = {
      {"q1", kPrologue +
                 "SELECT ?person ?country ?cont\n"
                 "WHERE {\n"
                 "  ?person voc:isLocatedIn ?city.\n"
                 "  ?city voc:isPartOf ?country.\n"
                 "  ?country voc:isPartOf ?cont.\n"
                 "}\n"},
      {"q2", kPrologue +
                 "SELECT ?person1 ?person2 ?namecomp\n"
                 "WHERE {\n"
                 "  ?person1 voc:workAt ?c1.\n"
                 "  ?c1 voc:hasOrganisation ?comp1.\n"
                 "  ?person2 voc:workAt ?c2.\n"
                 "  ?c2 voc:hasOrganisation ?comp2.\n"
                 "  FILTER(?person1 != ?person2)\n"
                 "  ?comp1 foaf:name ?namecomp.\n"
                 "  ?comp2 foaf:name ?namecomp.\n"
                 "}\n"},
      {"q3", kPrologue +
                 "SELECT ?forum ?creator\n"
                 "WHERE {\n"
                 "  {?forum voc:hasModerator ?creator.}\n"
                 "  UNION\n"
                 "  {?forum voc:hasMember ?creatorB.\n"
                 "   ?creatorB voc:hasPerson ?creator.}\n"
                 "  ?creator voc:hasInterest ?interest.\n"
                 "  FILTER (NOT EXISTS {\n"
                 "    SELECT ?tagForum WHERE {\n"
                 "      ?forum voc:hasTag ?tagForum.\n"
                 "      FILTER (\n"
                 "        bound(?interest) &&\n"
                 "        ?tagForum = ?interest )}})\n"
                 "}\n"},
      {"q4", kPrologue +
                 "SELECT ?person ?creator ?city\n"
                 "WHERE {\n"
                 "  ?person voc:isLocatedIn ?city.\n"
                 "  ?person voc:likes ?message.\n"
                 "  ?message voc:hasComment ?comm.\n"
                 "  ?comm voc:hasCreator ?creator.\n"
                 "}\n"},
  };
  return kQueries;
}

BenchRow bench_row(const GeneratedWeb& gw, const std::string& qname, const sparql::SelectQuery& q,
                   traversal::Strategy s, const std::string& label, const std::vector<Iri>& seeds) {
  BenchRow row;
  row.query = qname;
  row.strategy = label;
  for (const auto& seed : seeds) {
    try {
      webhost::StoreFetcher f(gw.store);
      traversal::StrategyOutcome out = traversal::run_strategy(f, q, {seed}, s);
      row.links += static_cast<double>(out.stats.links_followed);
      row.traversal_ms += out.stats.traversal_ms;
      row.triples += static_cast<double>(out.stats.triples_collected);
      row.eval_ms += out.stats.eval_ms;
      row.results += static_cast<double>(out.results.size());
      ++row.runs_ok;
    } catch (const std::exception&) {
      ++row.runs_failed;
    }
  }
  if (row.runs_ok > 0) {
    double n = row.runs_ok;
    row.links /= n;
    row.traversal_ms /= n;
    row.triples /= n;
    row.eval_ms /= n;
    row.results /= n;
  }
  return row;
}

BenchReport run_benchmark(const WebGenConfig& cfg, int n_seeds, std::uint64_t bench_seed) {
  GeneratedWeb strict = generate_web(cfg, Profile::Strict);
  GeneratedWeb loc = generate_web(cfg, Profile::PlusLocation);
  GeneratedWeb org = generate_web(cfg, Profile::PlusOrganisation);

  std::mt19937_64 rng(bench_seed);
  auto sample = [&rng, n_seeds](std::vector<Iri> pool) {
    std::shuffle(pool.begin(), pool.end(), rng);
    if (static_cast<int>(pool.size()) > n_seeds) pool.resize(n_seeds);
    return pool;
  };

  std::vector<Iri> person_seeds = sample(strict.liker_docs);
  std::vector<Iri> forum_seeds = sample(strict.forum_docs);

  BenchReport report;
  for (const auto& fixture : query_fixtures()) {
    sparql::SelectQuery q = sparql::parse_select(fixture.text);
    const std::vector<Iri>& seeds = fixture.name == "q3" ? forum_seeds : person_seeds;
    report.rows.push_back(bench_row(strict, fixture.name, q, traversal::Strategy::Swsl, "swsl", seeds));
    if (fixture.name == "q1")
      report.rows.push_back(bench_row(loc, fixture.name, q, traversal::Strategy::Swsl, "swsl+loc", seeds));
    if (fixture.name == "q2")
      report.rows.push_back(bench_row(org, fixture.name, q, traversal::Strategy::Swsl, "swsl+org", seeds));
    report.rows.push_back(bench_row(strict, fixture.name, q, traversal::Strategy::Match, "match", seeds));
    report.rows.push_back(bench_row(strict, fixture.name, q, traversal::Strategy::All, "all", seeds));
    report.rows.push_back(bench_row(strict, fixture.name, q, traversal::Strategy::None, "none", seeds));
  }
  return report;
}

std::string to_csv(const BenchReport& r) {
  std::ostringstream out;
  out << "query,strategy,links,traversal_ms,triples,eval_ms,results,runs_ok,runs_failed\n";
  for (const auto& row : r.rows) {
    out << row.query << "," << row.strategy << "," << row.links << "," << row.traversal_ms << ","
        << row.triples << "," << row.eval_ms << "," << row.results << "," << row.runs_ok << ","
        << row.runs_failed << "\n";
  }
  return out.str();
}

std::string to_text_table(const BenchReport& r) {
  std::ostringstream out;
  out << "query  strategy   links  triples  results  ok  failed\n";
  for (const auto& row : r.rows) {
    out << row.query << "  ";
    out.width(9);
    out << std::left << row.strategy << "  " << row.links << "  " << row.triples << "  " << row.results
        << "  " << row.runs_ok << "  " << row.runs_failed << "\n";
  }
  return out.str();
}

}  // namespace swt::bench
