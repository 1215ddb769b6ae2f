#include <chrono>
#include <fstream>
#include <iostream>
#include <random>
#include <sstream>
#include <thread>

#include "CLI11.hpp"
#include "swt/bench.hpp"
#include "swt/ldql.hpp"
#include "swt/swsl.hpp"
#include "swt/traversal.hpp"
#include "swt/webhost.hpp"

namespace {

using namespace swt;

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::ostringstream out;
  out << in.rdbuf();
  return out.str();
}

traversal::Strategy strategy_of(const std::string& name) {
  if (name == "none") return traversal::Strategy::None;
  if (name == "match") return traversal::Strategy::Match;
  if (name == "all") return traversal::Strategy::All;
  if (name == "swsl") return traversal::Strategy::Swsl;
  throw CLI::ValidationError("strategy", "unknown strategy: " + name);
}

int cmd_query(const std::string& manifest, const std::string& query_path, std::vector<std::string> seeds,
              const std::string& strategy, bool http, const std::string& format) {
  webhost::DocumentStore store = webhost::load_manifest(manifest);
  std::cerr << "loaded " << store.size() << " resources from " << manifest << "\n";
  sparql::SelectQuery q = sparql::parse_select(read_file(query_path));

  std::unique_ptr<webhost::WebServer> server;
  std::unique_ptr<webhost::Fetcher> fetcher;
  if (http) {
    server = std::make_unique<webhost::WebServer>(store);
    int port = server->start();
    std::cerr << "serving on 127.0.0.1:" << port << "\n";
    fetcher = std::make_unique<webhost::HttpFetcher>(port);
  } else {
    fetcher = std::make_unique<webhost::StoreFetcher>(store);
  }

  traversal::StrategyOutcome out =
      traversal::run_strategy(*fetcher, q, {seeds.begin(), seeds.end()}, strategy_of(strategy));
  std::cerr << "links=" << out.stats.links_followed << " attempts=" << out.stats.fetch_attempts
            << " docs=" << out.stats.docs_fetched << " triples=" << out.stats.triples_collected
            << " traversal_ms=" << out.stats.traversal_ms << " eval_ms=" << out.stats.eval_ms << "\n";
  std::cout << (format == "csv" ? sparql::to_csv(out.results) : sparql::to_text_table(out.results));
  return 0;
}

int cmd_swsl_check(const std::string& path, const std::string& base) {
  swsl::SwslSpec spec = swsl::parse_swsl(read_file(path), base);
  std::cout << swsl::to_string(spec) << "\n";
  std::cerr << "ok\n";
  return 0;
}

int cmd_capture_check(const std::string& cls, int trials, std::uint64_t seed, const std::string& predicate,
                      bool counterexample, int max_nodes) {
  if (counterexample) {
    ldql::RefutationResult r = ldql::refute_counterexample(max_nodes);
    if (r.capture_found || !r.symmetry_ok) {
      std::cout << "UNEXPECTED: capture witness " << r.witness << "\n";
      return 1;
    }
    auto aw = ldql::counterexample_wold();
    ldql::PstarEncoding enc("https://cx.ex/q");
    auto attempt = ldql::check_capture(enc, *ldql::pstar_meta_lpe("https://cx.ex/q"), aw, "https://cx.ex/u1");
    std::cout << "FAIL: no expression up to " << max_nodes << " nodes captures the two-predicate web ("
              << r.expressions_checked << " checked); fixed-predicate attempt misses";
    for (const auto& d : attempt.missing) std::cout << " " << d;
    std::cout << " and overreaches";
    for (const auto& d : attempt.extra) std::cout << " " << d;
    std::cout << "\n";
    return 0;
  }

  std::mt19937_64 rng(seed);
  int failures = 0;
  for (int i = 0; i < trials; ++i) {
    engine::SpecAnnotatedWold aw;
    std::unique_ptr<ldql::Encoding> enc;
    std::shared_ptr<ldql::Lpe> meta;
    if (cls == "const") {
      aw = ldql::random_const_cawold(rng);
      enc = std::make_unique<ldql::ConstEncoding>();
      meta = ldql::const_meta_lpe();
    } else if (cls == "pstar") {
      aw = ldql::random_pstar_cawold(rng, predicate);
      enc = std::make_unique<ldql::PstarEncoding>(predicate);
      meta = ldql::pstar_meta_lpe(predicate);
    } else {
      throw CLI::ValidationError("class", "unknown selector class: " + cls);
    }
    for (const auto& [d, g] : aw.wold.docs) {
      auto r = ldql::check_capture(*enc, *meta, aw, d);
      if (!r.ok) {
        ++failures;
        std::cout << "FAIL trial=" << i << " start=" << d << "\n";
      }
    }
  }
  std::cout << (failures == 0 ? "PASS" : "FAIL") << ": " << trials << " trials, " << failures
            << " capture failures\n";
  return failures == 0 ? 0 : 1;
}

void add_gen_flags(CLI::App* app, bench::WebGenConfig& cfg) {
  app->add_option("--rng", cfg.rng_seed, "web generator seed");
  app->add_option("--persons", cfg.persons);
  app->add_option("--cities", cfg.cities);
  app->add_option("--countries", cfg.countries);
  app->add_option("--continents", cfg.continents);
  app->add_option("--companies", cfg.companies);
  app->add_option("--universities", cfg.universities);
  app->add_option("--forums", cfg.forums);
  app->add_option("--tags", cfg.tags);
  app->add_option("--posts", cfg.posts);
  app->add_option("--comments", cfg.comments);
  app->add_option("--mean-friends", cfg.mean_friends);
  app->add_option("--likes", cfg.likes_per_person);
}

bench::Profile profile_of(const std::string& name) {
  if (name == "strict") return bench::Profile::Strict;
  if (name == "plus-location") return bench::Profile::PlusLocation;
  if (name == "plus-organisation") return bench::Profile::PlusOrganisation;
  throw CLI::ValidationError("profile", "unknown profile: " + name);
}

int cmd_gen_web(const bench::WebGenConfig& cfg, const std::string& profile, const std::string& out_dir) {
  bench::GeneratedWeb web = bench::generate_web(cfg, profile_of(profile));
  std::string manifest = bench::write_manifest(web, out_dir);
  std::cerr << "generated " << web.store.size() << " documents (" << profile << ")\n";
  std::cout << manifest << "\n";
  return 0;
}

int cmd_bench(const bench::WebGenConfig& cfg, int n_seeds, std::uint64_t bench_seed,
              const std::string& format) {
  std::cerr << "running benchmark: " << n_seeds << " seeds per query\n";
  bench::BenchReport report = bench::run_benchmark(cfg, n_seeds, bench_seed);
  std::cout << (format == "csv" ? bench::to_csv(report) : bench::to_text_table(report));
  return 0;
}

int cmd_serve(const std::string& manifest) {
  webhost::DocumentStore store = webhost::load_manifest(manifest);
  webhost::WebServer server(store);
  int port = server.start();
  std::cout << "http://127.0.0.1:" << port << "/\n" << std::flush;
  std::cerr << "serving " << store.size() << " resources; interrupt to stop\n";
  for (;;) std::this_thread::sleep_for(std::chrono::seconds(3600));
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"link-traversal query engine over publisher-annotated webs"};
  app.require_subcommand(1);

  std::string manifest, query_path, strategy = "swsl", format = "table", base = "swt:spec";
  std::string cls = "const", predicate = "https://rp.ex/link", profile = "strict", out_dir, spec_path;
  std::vector<std::string> seeds;
  bool http = false, counterexample = false;
  int trials = 200, max_nodes = 4, n_seeds = 12;
  std::uint64_t rng_seed = 7, bench_seed = 2;
  bench::WebGenConfig cfg;

  auto* query = app.add_subcommand("query", "run a query over a hosted web");
  query->add_option("--manifest", manifest, "web manifest")->required();
  query->add_option("--query", query_path, "SPARQL file")->required();
  query->add_option("--seed", seeds, "seed IRIs")->required();
  query->add_option("--strategy", strategy, "none|match|all|swsl");
  query->add_flag("--http", http, "fetch via a local HTTP server instead of in-process");
  query->add_option("--format", format, "csv|table");

  auto* swsl_check = app.add_subcommand("swsl-check", "parse a spec and print its normal form");
  swsl_check->add_option("spec", spec_path, "spec file")->required();
  swsl_check->add_option("--base", base, "base IRI");

  auto* capture = app.add_subcommand("capture-check", "meta-expression capture checks");
  capture->add_option("--class", cls, "const|pstar");
  capture->add_option("--trials", trials, "random webs to test");
  capture->add_option("--rng", rng_seed, "trial seed");
  capture->add_option("--predicate", predicate, "link predicate for the pstar class");
  capture->add_flag("--counterexample", counterexample, "exhaustive bounded search on the two-predicate web");
  capture->add_option("--max-nodes", max_nodes, "expression size bound for --counterexample");

  auto* gen = app.add_subcommand("gen-web", "generate an annotated benchmark web");
  gen->add_option("--out", out_dir, "output directory")->required();
  gen->add_option("--profile", profile, "strict|plus-location|plus-organisation");
  add_gen_flags(gen, cfg);

  auto* bench_cmd = app.add_subcommand("bench", "run the full benchmark suite");
  bench_cmd->add_option("--seeds", n_seeds, "seeds per query");
  bench_cmd->add_option("--bench-rng", bench_seed, "seed-sampling rng");
  bench_cmd->add_option("--format", format, "csv|table");
  add_gen_flags(bench_cmd, cfg);

  auto* serve = app.add_subcommand("serve", "host a manifest over local HTTP");
  serve->add_option("--manifest", manifest, "web manifest")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (query->parsed()) return cmd_query(manifest, query_path, seeds, strategy, http, format);
    if (swsl_check->parsed()) return cmd_swsl_check(spec_path, base);
    if (capture->parsed())
      return cmd_capture_check(cls, trials, rng_seed, predicate, counterexample, max_nodes);
    if (gen->parsed()) return cmd_gen_web(cfg, profile, out_dir);
    if (bench_cmd->parsed()) return cmd_bench(cfg, n_seeds, bench_seed, format);
    if (serve->parsed()) return cmd_serve(manifest);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
