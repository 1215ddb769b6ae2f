#pragma once

#include <cstdint>
#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

#include "swt/engine.hpp"
#include "swt/sparql.hpp"
#include "swt/traversal.hpp"
#include "swt/webhost.hpp"

namespace swt::bench {

using rdf::Iri;

struct ConfigError : std::runtime_error {
  explicit ConfigError(const std::string& msg) : std::runtime_error(msg) {}
};

// Desk-scale defaults: ~200 documents. Persons split half/half into "likers"
// (who like posts; queries are seeded there) and "commenters" (who author
// posts and comments but like nothing, keeping the interaction graph shallow).
struct WebGenConfig {
  std::uint64_t rng_seed = 1;
  int persons = 40;
  int cities = 10;
  int countries = 5;
  int continents = 2;
  int companies = 8;
  int universities = 5;
  int forums = 6;
  int tags = 12;
  int posts = 40;
  int comments = 60;
  int mean_friends = 2;
  int likes_per_person = 2;
};

// Person-document annotation profiles. Strict only admits triples whose
// subject is the followed entity itself; the relaxations additionally admit
// location-chain triples (PlusLocation) or organisation/name triples
// (PlusOrganisation) from followed subwebs.
enum class Profile { Strict, PlusLocation, PlusOrganisation };

std::string to_string(Profile p);

struct GeneratedWeb {
  webhost::DocumentStore store;
  std::shared_ptr<engine::SpecAnnotatedWold> web;
  std::vector<Iri> person_docs;
  std::vector<Iri> liker_docs;  // persons with likes; query seed pool
  std::vector<Iri> forum_docs;
};

// Deterministic given cfg.rng_seed; the profile changes person annotations
// only, never the data triples.
GeneratedWeb generate_web(const WebGenConfig& cfg, Profile profile);

// Writes <dir>/web.manifest plus one file per document; returns the manifest
// path. Output is byte-identical for equal configs.
std::string write_manifest(const GeneratedWeb& web, const std::string& dir);

struct QueryFixture {
  std::string name;
  std::string text;
};

// The four benchmark queries: person location chain, shared company, forum
// member interests, and like interactions.
const std::vector<QueryFixture>& query_fixtures();

struct BenchRow {
  std::string query, strategy;
  double links = 0, traversal_ms = 0, triples = 0, eval_ms = 0, results = 0;  // averages over ok runs
  int runs_ok = 0, runs_failed = 0;
};

struct BenchReport {
  std::vector<BenchRow> rows;
};

// One (query, strategy) aggregate over the given seed IRIs; failed runs are
// counted and excluded from the averages.
BenchRow bench_row(const GeneratedWeb& gw, const std::string& qname, const sparql::SelectQuery& q,
                   traversal::Strategy s, const std::string& label, const std::vector<Iri>& seeds);

// Full suite: all four queries under guided, relaxed-guided (first two
// queries), match, all, and none, with the same n_seeds seeds per query
// across strategies.
BenchReport run_benchmark(const WebGenConfig& cfg, int n_seeds, std::uint64_t bench_seed);

std::string to_csv(const BenchReport& r);
std::string to_text_table(const BenchReport& r);

}  // namespace swt::bench
