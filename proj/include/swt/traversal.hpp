#pragma once

#include <memory>
#include <set>
#include <string>

#include "swt/engine.hpp"
#include "swt/rdf.hpp"
#include "swt/sparql.hpp"
#include "swt/webhost.hpp"

namespace swt::traversal {

using rdf::Iri;

// How a live query execution chooses which links to follow.
enum class Strategy {
  None,   // seed documents only
  All,    // every IRI mentioned in retrieved data
  Match,  // IRIs in triples that match some query pattern
  Swsl,   // documents demanded by the publishers' specifications
};

struct TraversalStats {
  std::size_t fetch_attempts = 0;     // distinct documents dereferenced
  std::size_t links_followed = 0;     // dereferences beyond the seeds
  std::size_t docs_fetched = 0;       // successful RDF retrievals
  std::size_t triples_collected = 0;  // across all fetched documents
  double traversal_ms = 0;
  double eval_ms = 0;
};

struct TraversedWeb {
  std::shared_ptr<engine::SpecAnnotatedWold> web;  // fetched docs + their published specs
  TraversalStats stats;
};

// Breadth-first retrieval of the reachable subweb under a classical criterion
// (Strategy::None / All / Match). Every document is fetched at most once;
// only http/https IRIs are link candidates. Match needs the query.
TraversedWeb reachable_subweb(webhost::Fetcher& f, const std::set<Iri>& seeds, Strategy s,
                              const sparql::SelectQuery* query = nullptr);

// Publisher-guided retrieval: repeatedly fetches exactly the documents
// demanded by the specifications reachable (through b=true tuples) from the
// seed documents, until no new demand appears.
TraversedWeb guided_subweb(webhost::Fetcher& f, const std::set<Iri>& seeds);

struct StrategyOutcome {
  sparql::ResultTable results;
  TraversalStats stats;
  std::shared_ptr<engine::SpecAnnotatedWold> web;
};

// Retrieves per the strategy and evaluates the query: classical strategies
// query the whole retrieved web, Swsl queries the seed-adopted subweb.
StrategyOutcome run_strategy(webhost::Fetcher& f, const sparql::SelectQuery& q, const std::set<Iri>& seeds,
                             Strategy s);

}  // namespace swt::traversal
