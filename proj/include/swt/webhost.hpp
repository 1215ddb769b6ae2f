#pragma once

#include <map>
#include <memory>
#include <mutex>
#include <set>
#include <stdexcept>
#include <string>

#include "swt/rdf.hpp"

namespace swt::webhost {

using rdf::Iri;

struct ManifestError : std::runtime_error {
  ManifestError(const std::string& entry, const std::string& cause)
      : std::runtime_error("manifest entry '" + entry + "': " + cause) {}
};

struct BindError : std::runtime_error {
  explicit BindError(const std::string& msg) : std::runtime_error(msg) {}
};

// One hosted resource, keyed by its canonical (fragment-stripped) IRI.
struct Resource {
  std::string format;  // "turtle" or "binary"
  std::string body;
  rdf::Graph graph;  // parsed content for RDF formats
  bool is_rdf = false;
};

class DocumentStore {
 public:
  void add(const Iri& iri, Resource r);
  const Resource* find(const Iri& canonical) const;
  std::size_t size() const { return resources_.size(); }
  const std::map<Iri, Resource>& resources() const { return resources_; }

  // The WOLD of the store's RDF documents (adoc maps each canonical IRI to
  // its own document).
  rdf::Wold to_wold() const;

 private:
  std::map<Iri, Resource> resources_;
};

// Loads a line-oriented manifest: "<iri> TAB <relative path> TAB <format>",
// '#' starts a comment. Paths are relative to the manifest file.
DocumentStore load_manifest(const std::string& manifest_path);

enum class FetchStatus { Ok, NotFound, NotRdf };

struct FetchResult {
  FetchStatus status = FetchStatus::NotFound;
  rdf::DocId doc;  // canonical IRI on success
  rdf::Graph graph;
  std::string error;
};

// Dereference with a thread-safe at-most-once cache per canonical IRI.
class Fetcher {
 public:
  virtual ~Fetcher() = default;

  FetchResult dereference(const Iri& u);
  void set_cache_enabled(bool on) { cache_enabled_ = on; }
  std::size_t transport_fetches() const { return transport_fetches_; }

 protected:
  virtual FetchResult fetch(const Iri& canonical) = 0;

 private:
  std::mutex mu_;
  std::map<Iri, FetchResult> cache_;
  bool cache_enabled_ = true;
  std::size_t transport_fetches_ = 0;
};

// In-process fetcher over a loaded store.
class StoreFetcher : public Fetcher {
 public:
  explicit StoreFetcher(const DocumentStore& store) : store_(store) {}

 protected:
  FetchResult fetch(const Iri& canonical) override;

 private:
  const DocumentStore& store_;
};

// Minimal HTTP host for a store: GET /<host><path> serves the resource whose
// IRI has that host and path, with text/turtle for RDF bodies.
class WebServer {
 public:
  explicit WebServer(const DocumentStore& store);
  ~WebServer();

  // Binds 127.0.0.1 on a free port and serves in a background thread;
  // returns the port. Throws BindError on failure.
  int start();
  void stop();
  int port() const { return port_; }

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
  int port_ = 0;
};

// Fetcher issuing HTTP GETs against a local WebServer, remapping every IRI
// host to 127.0.0.1:port as http://127.0.0.1:port/<host><path>.
class HttpFetcher : public Fetcher {
 public:
  explicit HttpFetcher(int port) : port_(port) {}

 protected:
  FetchResult fetch(const Iri& canonical) override;

 private:
  int port_;
};

}  // namespace swt::webhost
