#include "swt/traversal.hpp"

#include <chrono>

namespace swt::traversal {

namespace {

using Clock = std::chrono::steady_clock;

double ms_since(Clock::time_point t0) {
  return std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
}

bool is_web_iri(const std::string& u) {
  return u.rfind("http://", 0) == 0 || u.rfind("https://", 0) == 0;
}

void collect_patterns(const sparql::Ggp& g, std::vector<sparql::TriplePattern>& out);

void collect_patterns(const sparql::Expr& e, std::vector<sparql::TriplePattern>& out) {
  if (e.group) collect_patterns(*e.group, out);
  for (const auto& arg : e.args) collect_patterns(*arg, out);
}

void collect_patterns(const sparql::Ggp& g, std::vector<sparql::TriplePattern>& out) {
  for (const auto& el : g.elements) {
    if (auto* bgp = std::get_if<sparql::BgpElem>(&el)) {
      out.insert(out.end(), bgp->patterns.begin(), bgp->patterns.end());
    } else if (auto* opt = std::get_if<sparql::OptionalElem>(&el)) {
      collect_patterns(*opt->group, out);
    } else if (auto* un = std::get_if<sparql::UnionElem>(&el)) {
      collect_patterns(*un->left, out);
      collect_patterns(*un->right, out);
    } else if (auto* fil = std::get_if<sparql::FilterElem>(&el)) {
      collect_patterns(*fil->expr, out);
    } else if (auto* sub = std::get_if<sparql::SubSelectElem>(&el)) {
      collect_patterns(*sub->query.where, out);
    }
  }
}

// New canonical link targets in one document's data, per the criterion.
std::set<Iri> link_targets(const rdf::Graph& g, Strategy s, const std::vector<sparql::TriplePattern>& patterns) {
  std::set<Iri> out;
  if (s == Strategy::None) return out;
  for (const auto& t : g) {
    if (s == Strategy::Match) {
      bool relevant = false;
      for (const auto& p : patterns)
        if (sparql::matches_pattern(p, t)) {
          relevant = true;
          break;
        }
      if (!relevant) continue;
    }
    for (const rdf::Term* term : {&t.s, &t.p, &t.o})
      if (term->is_iri() && is_web_iri(term->value)) out.insert(rdf::doc_iri_of(term->value));
  }
  return out;
}

struct FetchLoop {
  webhost::Fetcher& fetcher;
  rdf::Wold wold;
  std::set<Iri> attempted;
  std::set<Iri> seed_docs;
  TraversalStats stats;

  explicit FetchLoop(webhost::Fetcher& f, const std::set<Iri>& seeds) : fetcher(f) {
    for (const auto& u : seeds) seed_docs.insert(rdf::doc_iri_of(u));
  }

  // Fetches one canonical IRI unless already attempted; true if new RDF data arrived.
  bool fetch(const Iri& canonical) {
    if (!attempted.insert(canonical).second) return false;
    ++stats.fetch_attempts;
    if (!seed_docs.count(canonical)) ++stats.links_followed;
    webhost::FetchResult r = fetcher.dereference(canonical);
    if (r.status != webhost::FetchStatus::Ok) return false;
    ++stats.docs_fetched;
    stats.triples_collected += r.graph.size();
    wold.docs[r.doc] = std::move(r.graph);
    wold.adoc[r.doc] = r.doc;
    return true;
  }

  TraversedWeb finish(Clock::time_point t0) {
    stats.traversal_ms = ms_since(t0);
    auto web = std::make_shared<engine::SpecAnnotatedWold>(engine::extract_annotations(wold));
    return {std::move(web), stats};
  }
};

}  // namespace

TraversedWeb reachable_subweb(webhost::Fetcher& f, const std::set<Iri>& seeds, Strategy s,
                              const sparql::SelectQuery* query) {
  if (s == Strategy::Swsl) throw std::invalid_argument("Swsl retrieval is guided_subweb");
  std::vector<sparql::TriplePattern> patterns;
  if (s == Strategy::Match) {
    if (!query) throw std::invalid_argument("Match traversal needs the query");
    collect_patterns(*query->where, patterns);
  }

  auto t0 = Clock::now();
  FetchLoop loop(f, seeds);
  std::set<Iri> level = loop.seed_docs;
  while (!level.empty()) {
    std::set<Iri> next;
    for (const auto& u : level) {  // std::set iterates in lexicographic order
      if (!loop.fetch(u)) continue;
      for (const auto& v : link_targets(loop.wold.docs.at(u), s, patterns))
        if (!loop.attempted.count(v)) next.insert(v);
    }
    level = std::move(next);
  }
  return loop.finish(t0);
}

TraversedWeb guided_subweb(webhost::Fetcher& f, const std::set<Iri>& seeds) {
  auto t0 = Clock::now();
  FetchLoop loop(f, seeds);
  std::set<Iri> demand = loop.seed_docs;
  while (!demand.empty()) {
    for (const auto& u : demand) loop.fetch(u);

    engine::SpecAnnotatedWold aw = engine::extract_annotations(loop.wold);

    // Activate the specs of the seed documents, then of every fetched
    // document selected through a b=true tuple.
    std::set<rdf::DocId> active;
    std::vector<rdf::DocId> work;
    for (const auto& d : loop.seed_docs)
      if (aw.wold.has_doc(d)) {
        active.insert(d);
        work.push_back(d);
      }
    demand.clear();
    while (!work.empty()) {
      rdf::DocId d = work.back();
      work.pop_back();
      for (const auto& tuple : aw.spec_of(d).tuples) {
        for (const auto& v : tuple.sigma->select(aw.wold)) {
          Iri c = rdf::doc_iri_of(v);
          if (!loop.attempted.count(c)) demand.insert(c);
          if (tuple.b && aw.wold.has_doc(c) && active.insert(c).second) work.push_back(c);
        }
      }
    }
  }
  return loop.finish(t0);
}

StrategyOutcome run_strategy(webhost::Fetcher& f, const sparql::SelectQuery& q, const std::set<Iri>& seeds,
                             Strategy s) {
  TraversedWeb tw = s == Strategy::Swsl ? guided_subweb(f, seeds) : reachable_subweb(f, seeds, s, &q);
  auto t0 = Clock::now();
  sparql::ResultTable results;
  if (s == Strategy::Swsl) {
    results = engine::eval_annotated_query({q, engine::seed_adopting_spec(seeds)}, *tw.web);
  } else {
    rdf::Subweb whole{&tw.web->wold, tw.web->wold.docs};
    results = sparql::eval_select(q, whole);
  }
  tw.stats.eval_ms = ms_since(t0);
  return {std::move(results), tw.stats, std::move(tw.web)};
}

}  // namespace swt::traversal
