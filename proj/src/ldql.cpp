#include "swt/ldql.hpp"

#include <algorithm>
#include <map>

namespace swt::ldql {

std::shared_ptr<Lpe> eps() { return std::make_shared<Lpe>(); }

std::shared_ptr<Lpe> pat(LinkPattern lp) {
  auto e = std::make_shared<Lpe>();
  e->kind = LpeKind::Pattern;
  e->pattern = std::move(lp);
  return e;
}

namespace {
std::shared_ptr<Lpe> node(LpeKind k, std::shared_ptr<Lpe> a, std::shared_ptr<Lpe> b = nullptr) {
  auto e = std::make_shared<Lpe>();
  e->kind = k;
  e->a = std::move(a);
  e->b = std::move(b);
  return e;
}
}  // namespace

std::shared_ptr<Lpe> seq(std::shared_ptr<Lpe> a, std::shared_ptr<Lpe> b) { return node(LpeKind::Seq, std::move(a), std::move(b)); }
std::shared_ptr<Lpe> alt(std::shared_ptr<Lpe> a, std::shared_ptr<Lpe> b) { return node(LpeKind::Alt, std::move(a), std::move(b)); }
std::shared_ptr<Lpe> star(std::shared_ptr<Lpe> a) { return node(LpeKind::Star, std::move(a)); }
std::shared_ptr<Lpe> test(std::shared_ptr<Lpe> a) { return node(LpeKind::Test, std::move(a)); }

namespace {

std::string slot_str(const LpSlot& s) {
  switch (s.kind) {
    case LpSlot::Kind::Underscore: return "_";
    case LpSlot::Kind::Plus: return "+";
    case LpSlot::Kind::Fixed: return s.value.value;
  }
  return "?";
}

}  // namespace

std::string to_string(const Lpe& e) {
  switch (e.kind) {
    case LpeKind::Epsilon: return "eps";
    case LpeKind::Pattern:
      return "<" + slot_str(e.pattern.s) + "," + slot_str(e.pattern.p) + "," + slot_str(e.pattern.o) + ">";
    case LpeKind::Seq: return "(" + to_string(*e.a) + "/" + to_string(*e.b) + ")";
    case LpeKind::Alt: return "(" + to_string(*e.a) + "|" + to_string(*e.b) + ")";
    case LpeKind::Star: return to_string(*e.a) + "*";
    case LpeKind::Test: return "[" + to_string(*e.a) + "]";
  }
  return "?";
}

namespace {

bool slot_matches(const LpSlot& s, const Term& x, const Iri& ctx) {
  switch (s.kind) {
    case LpSlot::Kind::Underscore: return true;
    case LpSlot::Kind::Plus: return x == Term::iri(ctx);
    case LpSlot::Kind::Fixed: return x == s.value;
  }
  return false;
}

}  // namespace

std::set<Iri> match_link_pattern(const LinkPattern& lp, const rdf::Triple& t, const Iri& ctx) {
  std::set<Iri> out;
  if (!slot_matches(lp.s, t.s, ctx) || !slot_matches(lp.p, t.p, ctx) || !slot_matches(lp.o, t.o, ctx)) return out;
  // results come from wildcard slots holding IRIs
  if (lp.s.kind == LpSlot::Kind::Underscore && t.s.is_iri()) out.insert(t.s.value);
  if (lp.p.kind == LpSlot::Kind::Underscore && t.p.is_iri()) out.insert(t.p.value);
  if (lp.o.kind == LpSlot::Kind::Underscore && t.o.is_iri()) out.insert(t.o.value);
  return out;
}

std::set<Iri> eval_lpe(const Lpe& e, const Wold& w, const Iri& u) {
  switch (e.kind) {
    case LpeKind::Epsilon:
      return {u};
    case LpeKind::Pattern: {
      std::set<Iri> out;
      if (auto d = w.deref(u))
        for (const auto& t : w.data(*d)) {
          auto m = match_link_pattern(e.pattern, t, u);
          out.insert(m.begin(), m.end());
        }
      return out;
    }
    case LpeKind::Seq: {
      std::set<Iri> out;
      for (const Iri& v : eval_lpe(*e.a, w, u)) {
        auto r = eval_lpe(*e.b, w, v);
        out.insert(r.begin(), r.end());
      }
      return out;
    }
    case LpeKind::Alt: {
      std::set<Iri> out = eval_lpe(*e.a, w, u);
      auto r = eval_lpe(*e.b, w, u);
      out.insert(r.begin(), r.end());
      return out;
    }
    case LpeKind::Star: {
      std::set<Iri> visited = {u};
      std::vector<Iri> frontier = {u};
      while (!frontier.empty()) {
        Iri v = frontier.back();
        frontier.pop_back();
        for (const Iri& x : eval_lpe(*e.a, w, v))
          if (visited.insert(x).second) frontier.push_back(x);
      }
      return visited;
    }
    case LpeKind::Test:
      return eval_lpe(*e.a, w, u).empty() ? std::set<Iri>{} : std::set<Iri>{u};
  }
  return {};
}

sparql::ResultTable eval_ldql_query(const LdqlQuery& q, const Wold& w, const std::set<Iri>& seeds) {
  rdf::Subweb acc = rdf::empty_subweb(w);
  for (const Iri& s : seeds)
    for (const Iri& u : eval_lpe(*q.lpe, w, s))
      if (auto d = w.deref(u)) acc = rdf::subweb_union(acc, rdf::simpl(*d, w));
  return sparql::eval_select(q.query, acc);
}

std::set<Iri> AllPstarSelector::select(const Wold& w) const {
  return eval_lpe(*star(pat({LpSlot::ctx(), LpSlot::fixed(Term::iri(p)), LpSlot::wild()})), w, u);
}

std::shared_ptr<engine::SourceSelector> all_pstar_selector(const Iri& p, const Iri& u) {
  return std::make_shared<AllPstarSelector>(p, u);
}

rdf::Graph ConstEncoding::encode(const engine::SourceSelector& sigma) const {
  const auto* c = dynamic_cast<const engine::ConstantSelector*>(&sigma);
  if (!c) throw UnsupportedSpecShape("const encoding requires a constant selector, got: " + sigma.describe());
  rdf::Graph g;
  for (const Iri& v : c->iris) g.insert({Term::iri(kEncA), Term::iri(kEncA), Term::iri(v)});
  return g;
}

rdf::Graph PstarEncoding::encode(const engine::SourceSelector& sigma) const {
  const auto* s = dynamic_cast<const AllPstarSelector*>(&sigma);
  if (!s) throw UnsupportedSpecShape("p* encoding requires an all_{p*,u} selector, got: " + sigma.describe());
  return {{Term::iri(kEncA), Term::iri(kEncA), Term::iri(s->u)}};
}

std::shared_ptr<Lpe> const_meta_lpe() {
  return star(pat({LpSlot::fixed(Term::iri(kEncA)), LpSlot::fixed(Term::iri(kEncA)), LpSlot::wild()}));
}

std::shared_ptr<Lpe> pstar_meta_lpe(const Iri& p) {
  auto hop = pat({LpSlot::fixed(Term::iri(kEncA)), LpSlot::fixed(Term::iri(kEncA)), LpSlot::wild()});
  auto walk = star(pat({LpSlot::ctx(), LpSlot::fixed(Term::iri(p)), LpSlot::wild()}));
  return star(seq(hop, walk));
}

Wold encode_cawold(const engine::SpecAnnotatedWold& aw, const Encoding& enc) {
  for (const auto& [d, g] : aw.wold.docs)
    for (const auto& t : g)
      for (const Term* x : {&t.s, &t.p, &t.o})
        if (x->is_iri() && x->value == kEncA)
          throw UnsupportedSpecShape("encoding IRI is not fresh: occurs in " + d);
  Wold out = aw.wold;
  for (const auto& [d, theta] : aw.specs) {
    for (const auto& tup : theta.tuples) {
      if (!tup.b) throw UnsupportedSpecShape("encoding requires b=true on every tuple");
      if (!tup.f->is_identity()) throw UnsupportedSpecShape("encoding requires identity filters");
      rdf::Graph g = enc.encode(*tup.sigma);
      out.docs[d].insert(g.begin(), g.end());
    }
  }
  return out;
}

CaptureResult check_capture(const Encoding& enc, const Lpe& e_meta, const engine::SpecAnnotatedWold& aw,
                            const Iri& u) {
  Wold enc_w = encode_cawold(aw, enc);
  std::set<rdf::DocId> reached;
  for (const Iri& v : eval_lpe(e_meta, enc_w, u))
    if (auto d = enc_w.deref(v)) reached.insert(*d);

  auto d0 = aw.wold.deref(u);
  if (!d0) throw rdf::UnknownDocument(u);
  std::set<rdf::DocId> wanted;
  for (const auto& [d, _] : engine::soi(*d0, aw).docs) wanted.insert(d);

  CaptureResult r;
  std::set_difference(wanted.begin(), wanted.end(), reached.begin(), reached.end(), std::back_inserter(r.missing));
  std::set_difference(reached.begin(), reached.end(), wanted.begin(), wanted.end(), std::back_inserter(r.extra));
  r.ok = r.missing.empty() && r.extra.empty();
  return r;
}

engine::SpecAnnotatedWold counterexample_wold() {
  engine::SpecAnnotatedWold aw;
  const Iri u1 = "https://cx.ex/u1", u2 = "https://cx.ex/u2", u3 = "https://cx.ex/u3";
  const Iri p = "https://cx.ex/p", q = "https://cx.ex/q";
  aw.wold.docs[u1] = {{Term::iri(u1), Term::iri(p), Term::iri(u2)}, {Term::iri(u1), Term::iri(q), Term::iri(u3)}};
  aw.wold.docs[u2] = {};
  aw.wold.docs[u3] = {};
  for (const Iri& u : {u1, u2, u3}) aw.wold.adoc[u] = u;
  engine::SubwebSpecTuple t;
  t.sigma = all_pstar_selector(p, u1);
  t.b = true;
  t.f = std::make_shared<engine::IdentityFilter>();
  t.id = "cx";
  aw.specs[u1].tuples.push_back(std::move(t));
  aw.specs[u2] = {};
  aw.specs[u3] = {};
  return aw;
}

std::shared_ptr<Lpe> LpeArena::to_lpe(std::int32_t id) const {
  const Node& n = nodes[id];
  switch (n.kind) {
    case LpeKind::Epsilon: return eps();
    case LpeKind::Pattern: return pat(alphabet[n.atom]);
    case LpeKind::Seq: return seq(to_lpe(n.a), to_lpe(n.b));
    case LpeKind::Alt: return alt(to_lpe(n.a), to_lpe(n.b));
    case LpeKind::Star: return star(to_lpe(n.a));
    case LpeKind::Test: return test(to_lpe(n.a));
  }
  return nullptr;
}

LpeArena enumerate_lpes(std::vector<LinkPattern> alphabet, int max_nodes) {
  LpeArena arena;
  arena.alphabet = std::move(alphabet);
  arena.by_size.resize(static_cast<std::size_t>(max_nodes) + 1);
  auto add = [&](LpeArena::Node n, int size) {
    arena.nodes.push_back(n);
    arena.by_size[size].push_back(static_cast<std::int32_t>(arena.nodes.size() - 1));
  };
  if (max_nodes >= 1) {
    add({LpeKind::Epsilon}, 1);
    for (std::size_t i = 0; i < arena.alphabet.size(); ++i)
      add({LpeKind::Pattern, static_cast<std::int32_t>(i)}, 1);
  }
  for (int n = 2; n <= max_nodes; ++n) {
    for (std::int32_t a : arena.by_size[n - 1]) {
      add({LpeKind::Star, -1, a}, n);
      add({LpeKind::Test, -1, a}, n);
    }
    for (int i = 1; i <= n - 2; ++i)
      for (std::int32_t a : arena.by_size[i])
        for (std::int32_t b : arena.by_size[n - 1 - i]) {
          add({LpeKind::Seq, -1, a, b}, n);
          add({LpeKind::Alt, -1, a, b}, n);
        }
  }
  return arena;
}

std::set<Iri> BulkEval::decode(std::uint64_t mask) const {
  std::set<Iri> out;
  for (std::size_t i = 0; i < universe.size(); ++i)
    if (mask & (1ull << i)) out.insert(universe[i]);
  return out;
}

BulkEval eval_all(const LpeArena& arena, const Wold& w, const Iri& start) {
  BulkEval be;
  std::set<Iri> uni = {start};
  for (const auto& [d, g] : w.docs)
    for (const auto& t : g)
      for (const Term* x : {&t.s, &t.p, &t.o})
        if (x->is_iri()) uni.insert(x->value);
  be.universe.assign(uni.begin(), uni.end());
  const std::size_t n = be.universe.size();
  if (n > 64) throw std::runtime_error("IRI universe too large for bulk evaluation");
  std::map<Iri, std::size_t> idx;
  for (std::size_t i = 0; i < n; ++i) idx[be.universe[i]] = i;

  // per-atom, per-context match masks
  std::vector<std::vector<std::uint64_t>> atom_mask(arena.alphabet.size(), std::vector<std::uint64_t>(n, 0));
  for (std::size_t c = 0; c < n; ++c) {
    auto d = w.deref(be.universe[c]);
    if (!d) continue;
    for (const auto& t : w.data(*d))
      for (std::size_t k = 0; k < arena.alphabet.size(); ++k)
        for (const Iri& v : match_link_pattern(arena.alphabet[k], t, be.universe[c]))
          atom_mask[k][c] |= 1ull << idx.at(v);
  }

  std::vector<std::uint64_t> r(arena.nodes.size() * n, 0);
  auto row = [&](std::int32_t id) { return r.data() + static_cast<std::size_t>(id) * n; };
  for (std::size_t id = 0; id < arena.nodes.size(); ++id) {
    const auto& nd = arena.nodes[id];
    std::uint64_t* out = row(static_cast<std::int32_t>(id));
    switch (nd.kind) {
      case LpeKind::Epsilon:
        for (std::size_t c = 0; c < n; ++c) out[c] = 1ull << c;
        break;
      case LpeKind::Pattern:
        for (std::size_t c = 0; c < n; ++c) out[c] = atom_mask[nd.atom][c];
        break;
      case LpeKind::Alt: {
        const std::uint64_t *a = row(nd.a), *b = row(nd.b);
        for (std::size_t c = 0; c < n; ++c) out[c] = a[c] | b[c];
        break;
      }
      case LpeKind::Seq: {
        const std::uint64_t *a = row(nd.a), *b = row(nd.b);
        for (std::size_t c = 0; c < n; ++c) {
          std::uint64_t m = a[c], acc = 0;
          while (m) {
            unsigned v = static_cast<unsigned>(__builtin_ctzll(m));
            m &= m - 1;
            acc |= b[v];
          }
          out[c] = acc;
        }
        break;
      }
      case LpeKind::Star: {
        const std::uint64_t* a = row(nd.a);
        for (std::size_t c = 0; c < n; ++c) {
          std::uint64_t visited = 1ull << c, frontier = visited;
          while (frontier) {
            unsigned v = static_cast<unsigned>(__builtin_ctzll(frontier));
            frontier &= frontier - 1;
            std::uint64_t add = a[v] & ~visited;
            visited |= add;
            frontier |= add;
          }
          out[c] = visited;
        }
        break;
      }
      case LpeKind::Test: {
        const std::uint64_t* a = row(nd.a);
        for (std::size_t c = 0; c < n; ++c) out[c] = a[c] ? (1ull << c) : 0;
        break;
      }
    }
  }
  std::size_t s = idx.at(start);
  be.result_at_start.resize(arena.nodes.size());
  for (std::size_t id = 0; id < arena.nodes.size(); ++id) be.result_at_start[id] = row(static_cast<std::int32_t>(id))[s];
  return be;
}

engine::SpecAnnotatedWold random_const_cawold(std::mt19937_64& rng) {
  engine::SpecAnnotatedWold aw;
  int n = 2 + static_cast<int>(rng() % 7);
  auto iri = [](std::uint64_t i) { return "https://rc.ex/d" + std::to_string(i); };
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
      std::set<Iri> targets;
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

engine::SpecAnnotatedWold random_pstar_cawold(std::mt19937_64& rng, const Iri& p) {
  engine::SpecAnnotatedWold aw;
  int n = 2 + static_cast<int>(rng() % 7);
  auto iri = [](std::uint64_t i) { return "https://rp.ex/d" + std::to_string(i); };
  for (int i = 0; i < n; ++i) {
    rdf::Graph g;
    int t = static_cast<int>(rng() % 4);
    for (int k = 0; k < t; ++k) {
      Iri pred = rng() % 2 ? p : "https://rp.ex/other";
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

std::vector<LinkPattern> encoding_alphabet() {
  std::vector<LpSlot> slots = {LpSlot::fixed(Term::iri(kEncA)), LpSlot::ctx(), LpSlot::wild()};
  std::vector<LinkPattern> out;
  for (const auto& s : slots)
    for (const auto& p : slots)
      for (const auto& o : slots) out.push_back({s, p, o});
  return out;
}

RefutationResult refute_counterexample(int max_nodes) {
  engine::SpecAnnotatedWold aw = counterexample_wold();
  Wold enc_w = encode_cawold(aw, PstarEncoding("https://cx.ex/p"));
  LpeArena arena = enumerate_lpes(encoding_alphabet(), max_nodes);
  BulkEval be = eval_all(arena, enc_w, "https://cx.ex/u1");

  std::uint64_t bu1 = 0, bu2 = 0, bu3 = 0;
  for (std::size_t i = 0; i < be.universe.size(); ++i) {
    if (be.universe[i] == "https://cx.ex/u1") bu1 = 1ull << i;
    if (be.universe[i] == "https://cx.ex/u2") bu2 = 1ull << i;
    if (be.universe[i] == "https://cx.ex/u3") bu3 = 1ull << i;
  }

  RefutationResult out;
  out.expressions_checked = arena.size();
  for (std::size_t id = 0; id < be.result_at_start.size(); ++id) {
    std::uint64_t r = be.result_at_start[id];
    if (static_cast<bool>(r & bu2) != static_cast<bool>(r & bu3)) out.symmetry_ok = false;
    // capture would mean: reach exactly the documents of soi(u1) = {d1, d2}
    if ((r & bu1) && (r & bu2) && !(r & bu3)) {
      out.capture_found = true;
      if (out.witness.empty()) out.witness = to_string(*arena.to_lpe(static_cast<std::int32_t>(id)));
    }
  }
  return out;
}

}  // namespace swt::ldql
