#include "swt/webhost.hpp"

#include <fstream>
#include <sstream>
#include <thread>

#include "httplib.h"
#include "swt/turtle.hpp"

namespace swt::webhost {

void DocumentStore::add(const Iri& iri, Resource r) {
  Iri canonical = rdf::doc_iri_of(iri);
  if (resources_.count(canonical)) throw ManifestError(iri, "duplicate IRI after fragment stripping");
  resources_.emplace(std::move(canonical), std::move(r));
}

const Resource* DocumentStore::find(const Iri& canonical) const {
  auto it = resources_.find(canonical);
  return it == resources_.end() ? nullptr : &it->second;
}

rdf::Wold DocumentStore::to_wold() const {
  rdf::Wold w;
  for (const auto& [iri, r] : resources_) {
    if (!r.is_rdf) continue;
    w.docs[iri] = r.graph;
    w.adoc[iri] = iri;
  }
  return w;
}

DocumentStore load_manifest(const std::string& manifest_path) {
  std::ifstream in(manifest_path);
  if (!in) throw ManifestError(manifest_path, "cannot open manifest");
  std::string dir = manifest_path;
  auto slash = dir.find_last_of('/');
  dir = slash == std::string::npos ? "." : dir.substr(0, slash);

  DocumentStore store;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    std::string trimmed = line;
    trimmed.erase(0, trimmed.find_first_not_of(" \t"));
    if (trimmed.empty() || trimmed[0] == '#') continue;

    std::istringstream fields(line);
    std::string iri, path, format;
    if (!std::getline(fields, iri, '\t') || !std::getline(fields, path, '\t') || !std::getline(fields, format))
      throw ManifestError(line, "expected three tab-separated fields");

    std::ifstream file(dir + "/" + path, std::ios::binary);
    if (!file) throw ManifestError(iri, "cannot read " + path);
    std::ostringstream body;
    body << file.rdbuf();

    Resource r;
    r.format = format;
    r.body = body.str();
    if (format == "turtle") {
      try {
        r.graph = rdf::parse_document(r.body, rdf::doc_iri_of(iri));
      } catch (const std::exception& e) {
        throw ManifestError(iri, e.what());
      }
      r.is_rdf = true;
    }
    store.add(iri, std::move(r));
  }
  return store;
}

FetchResult Fetcher::dereference(const Iri& u) {
  Iri canonical = rdf::doc_iri_of(u);
  std::lock_guard<std::mutex> lock(mu_);
  if (cache_enabled_) {
    auto it = cache_.find(canonical);
    if (it != cache_.end()) return it->second;
  }
  ++transport_fetches_;
  FetchResult r = fetch(canonical);
  if (cache_enabled_) cache_[canonical] = r;
  return r;
}

FetchResult StoreFetcher::fetch(const Iri& canonical) {
  const Resource* r = store_.find(canonical);
  if (!r) return {FetchStatus::NotFound, {}, {}, "no such resource"};
  if (!r->is_rdf) return {FetchStatus::NotRdf, {}, {}, "not an RDF format: " + r->format};
  return {FetchStatus::Ok, canonical, r->graph, {}};
}

namespace {

// https://uma.ex/foo -> /uma.ex/foo (scheme dropped, host folded into path)
std::string server_path(const Iri& canonical) {
  std::string rest = canonical;
  auto scheme = rest.find("://");
  if (scheme != std::string::npos) rest = rest.substr(scheme + 3);
  auto slash = rest.find('/');
  if (slash == std::string::npos) rest += '/';
  return "/" + rest;
}

}  // namespace

struct WebServer::Impl {
  httplib::Server server;
  std::thread thread;
  std::map<std::string, const Resource*> routes;
};

WebServer::WebServer(const DocumentStore& store) : impl_(std::make_unique<Impl>()) {
  for (const auto& [iri, r] : store.resources()) impl_->routes[server_path(iri)] = &r;
  impl_->server.Get(".*", [this](const httplib::Request& req, httplib::Response& res) {
    auto it = impl_->routes.find(req.path);
    if (it == impl_->routes.end()) {
      res.status = 404;
      return;
    }
    res.set_content(it->second->body, it->second->is_rdf ? "text/turtle" : "application/octet-stream");
  });
}

WebServer::~WebServer() { stop(); }

int WebServer::start() {
  port_ = impl_->server.bind_to_any_port("127.0.0.1");
  if (port_ <= 0) throw BindError("cannot bind a local port");
  impl_->thread = std::thread([this] { impl_->server.listen_after_bind(); });
  impl_->server.wait_until_ready();
  return port_;
}

void WebServer::stop() {
  if (impl_->thread.joinable()) {
    impl_->server.stop();
    impl_->thread.join();
  }
}

FetchResult HttpFetcher::fetch(const Iri& canonical) {
  httplib::Client client("127.0.0.1", port_);
  auto res = client.Get(server_path(canonical));
  if (!res) return {FetchStatus::NotFound, {}, {}, "transport error: " + httplib::to_string(res.error())};
  if (res->status != 200) return {FetchStatus::NotFound, {}, {}, "HTTP " + std::to_string(res->status)};
  if (res->get_header_value("Content-Type").find("text/turtle") == std::string::npos)
    return {FetchStatus::NotRdf, {}, {}, "not an RDF content type"};
  try {
    return {FetchStatus::Ok, canonical, rdf::parse_document(res->body, canonical), {}};
  } catch (const std::exception& e) {
    return {FetchStatus::NotRdf, {}, {}, e.what()};
  }
}

}  // namespace swt::webhost
