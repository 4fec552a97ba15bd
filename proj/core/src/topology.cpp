#include "hmlbn/topology.hpp"

#include <algorithm>
#include <deque>
#include <limits>
#include <queue>
#include <set>

namespace hmlbn {

namespace {

constexpr double kUnreachable = std::numeric_limits<double>::infinity();

[[noreturn]] void fail(Errc code, const std::string& msg) { throw Error(code, msg); }

}  // namespace

NetworkGraph NetworkGraph::build(const TopologySpec& spec) {
  NetworkGraph g;
  std::set<RouterId> seen_rids;
  for (const auto& n : spec.nodes) {
    if (n.name.empty()) fail(Errc::InvalidTopology, "node with empty name");
    if (!seen_rids.insert(n.rid).second) {
      fail(Errc::DuplicateRouterId, "duplicate router id " + n.rid.to_string() + " (" + n.name + ")");
    }
    if (g.by_name_.count(n.name)) fail(Errc::DuplicateRouterId, "duplicate node name " + n.name);
    g.by_name_.emplace(n.name, g.nodes_.size());
    g.by_rid_.emplace(n.rid, g.nodes_.size());
    g.nodes_.push_back(Node{n.name, n.rid, n.role, n.area});
  }

  // Area membership rules.
  std::set<AreaId> areas_with_aler, areas_with_amrr, areas;
  for (const auto& n : g.nodes_) {
    if (n.role == NodeRole::Aler) areas_with_aler.insert(n.area);
    if (n.role == NodeRole::Amrr) areas_with_amrr.insert(n.area);
    if (n.role != NodeRole::Lsr && !n.area.is_unknown()) areas.insert(n.area);
  }
  for (const auto& n : g.nodes_) {
    if (n.role == NodeRole::Lsr) continue;
    if (n.area.is_unknown()) {
      fail(n.role == NodeRole::Amrr ? Errc::AreaWithoutAmrr : Errc::AreaWithoutAler,
           std::string(to_string(n.role)) + " " + n.name + " is not assigned to a mobility area");
    }
  }
  for (AreaId a : areas) {
    if (!areas_with_aler.count(a)) fail(Errc::AreaWithoutAler, "area " + std::to_string(a.value()) + " has no ALER");
    if (!areas_with_amrr.count(a)) fail(Errc::AreaWithoutAmrr, "area " + std::to_string(a.value()) + " has no AMRR");
  }

  const std::size_t n = g.nodes_.size();
  g.fwd_neighbors_.assign(n, {});
  g.fwd_latency_.assign(n, {});
  std::vector<std::vector<std::pair<std::size_t, double>>> full_adj(n);
  for (const auto& e : spec.edges) {
    const Node* a = g.find(e.a);
    const Node* b = g.find(e.b);
    if (!a || !b) fail(Errc::InvalidTopology, "edge references unknown node " + (a ? e.b : e.a));
    if (a == b) fail(Errc::InvalidTopology, "self-loop on " + e.a);
    if (!(e.latency_ms > 0.0)) fail(Errc::InvalidTopology, "edge " + e.a + "-" + e.b + " needs positive latency");
    const std::size_t ia = g.by_rid_.at(a->rid);
    const std::size_t ib = g.by_rid_.at(b->rid);
    full_adj[ia].emplace_back(ib, e.latency_ms);
    full_adj[ib].emplace_back(ia, e.latency_ms);
    if (a->role != NodeRole::Amrr && b->role != NodeRole::Amrr) {
      if (g.fwd_latency_[ia].count(b->rid)) fail(Errc::InvalidTopology, "duplicate edge " + e.a + "-" + e.b);
      g.fwd_latency_[ia][b->rid] = e.latency_ms;
      g.fwd_latency_[ib][a->rid] = e.latency_ms;
      g.fwd_neighbors_[ia].push_back(b->rid);
      g.fwd_neighbors_[ib].push_back(a->rid);
    }
  }
  for (auto& v : g.fwd_neighbors_) std::sort(v.begin(), v.end());

  for (const auto& node : g.nodes_) {
    if (node.role != NodeRole::Amrr) g.forwarding_.push_back(node.rid);
  }
  std::sort(g.forwarding_.begin(), g.forwarding_.end());

  // Forwarding connectivity.
  if (!g.forwarding_.empty()) {
    std::set<RouterId> reached{g.forwarding_.front()};
    std::deque<RouterId> frontier{g.forwarding_.front()};
    while (!frontier.empty()) {
      RouterId cur = frontier.front();
      frontier.pop_front();
      for (RouterId nb : g.forwarding_neighbors(cur)) {
        if (reached.insert(nb).second) frontier.push_back(nb);
      }
    }
    if (reached.size() != g.forwarding_.size()) {
      for (RouterId r : g.forwarding_) {
        if (!reached.count(r)) {
          fail(Errc::DisconnectedForwardingGraph, "forwarding node " + g.name_of(r) + " is unreachable");
        }
      }
    }
  }

  // All-pairs minimum-latency control paths (Dijkstra from every node).
  g.control_latency_.assign(n * n, kUnreachable);
  for (std::size_t s = 0; s < n; ++s) {
    auto* dist = &g.control_latency_[s * n];
    using Item = std::pair<double, std::size_t>;
    std::priority_queue<Item, std::vector<Item>, std::greater<>> pq;
    dist[s] = 0.0;
    pq.emplace(0.0, s);
    while (!pq.empty()) {
      auto [d, u] = pq.top();
      pq.pop();
      if (d > dist[u]) continue;
      for (auto [v, w] : full_adj[u]) {
        if (d + w < dist[v]) {
          dist[v] = d + w;
          pq.emplace(dist[v], v);
        }
      }
    }
    for (std::size_t t = 0; t < n; ++t) {
      if (dist[t] == kUnreachable) {
        fail(Errc::DisconnectedControlGraph,
             "no control path between " + g.nodes_[s].name + " and " + g.nodes_[t].name);
      }
      dist[t] /= 1000.0;
    }
  }

  for (const auto& r : spec.regions) {
    const Node* ler = g.find(r.ler);
    if (!ler || ler->role != NodeRole::Ler) fail(Errc::InvalidTopology, "region " + r.id + " is not served by an LER");
    if (g.regions_.count(r.id)) fail(Errc::InvalidTopology, "duplicate region " + r.id);
    if (r.cells.empty()) fail(Errc::InvalidTopology, "region " + r.id + " has no RAN cells");
    for (const auto& c : r.cells) {
      if (!g.cell_region_.emplace(c, r.id).second) fail(Errc::InvalidTopology, "cell " + c + " listed twice");
    }
    g.regions_.emplace(r.id, Region{r.id, ler->rid, r.cells});
  }
  return g;
}

std::size_t NetworkGraph::index(RouterId rid) const {
  auto it = by_rid_.find(rid);
  if (it == by_rid_.end()) throw Error(Errc::UnknownNode, "unknown router id " + rid.to_string());
  return it->second;
}

const Node& NetworkGraph::node(RouterId rid) const { return nodes_[index(rid)]; }

const Node& NetworkGraph::node(std::string_view name) const {
  const Node* n = find(name);
  if (!n) throw Error(Errc::UnknownNode, "unknown node " + std::string(name));
  return *n;
}

const Node* NetworkGraph::find(RouterId rid) const {
  auto it = by_rid_.find(rid);
  return it == by_rid_.end() ? nullptr : &nodes_[it->second];
}

const Node* NetworkGraph::find(std::string_view name) const {
  auto it = by_name_.find(name);
  return it == by_name_.end() ? nullptr : &nodes_[it->second];
}

bool NetworkGraph::is_forwarding(RouterId rid) const {
  const Node* n = find(rid);
  return n && n->role != NodeRole::Amrr;
}

const std::vector<RouterId>& NetworkGraph::forwarding_neighbors(RouterId rid) const {
  return fwd_neighbors_[index(rid)];
}

double NetworkGraph::edge_latency_ms(RouterId a, RouterId b) const {
  const auto& m = fwd_latency_[index(a)];
  auto it = m.find(b);
  if (it == m.end()) throw Error(Errc::InvalidTopology, "no edge " + name_of(a) + "-" + name_of(b));
  return it->second;
}

SimTime NetworkGraph::control_latency(RouterId a, RouterId b) const {
  return control_latency_[index(a) * nodes_.size() + index(b)];
}

std::vector<AreaId> NetworkGraph::areas() const {
  std::set<AreaId> s;
  for (const auto& n : nodes_) {
    if (n.role != NodeRole::Lsr && !n.area.is_unknown()) s.insert(n.area);
  }
  return {s.begin(), s.end()};
}

std::vector<RouterId> NetworkGraph::members(AreaId area, NodeRole role) const {
  std::vector<RouterId> out;
  for (const auto& n : nodes_) {
    if (n.role == role && n.area == area) out.push_back(n.rid);
  }
  std::sort(out.begin(), out.end());
  return out;
}

const Region* NetworkGraph::region_of_cell(std::string_view cell) const {
  auto it = cell_region_.find(cell);
  if (it == cell_region_.end()) return nullptr;
  return &regions_.at(it->second);
}

std::vector<std::string> NetworkGraph::cells_of(RouterId ler) const {
  std::vector<std::string> out;
  for (const auto& [id, r] : regions_) {
    if (r.ler == ler) out.insert(out.end(), r.cells.begin(), r.cells.end());
  }
  return out;
}

std::string NetworkGraph::interface_name(RouterId node, RouterId neighbor) const {
  const auto& nbs = forwarding_neighbors(node);
  auto it = std::lower_bound(nbs.begin(), nbs.end(), neighbor);
  if (it == nbs.end() || *it != neighbor) return "none";
  return "GIG1/0/" + std::to_string(1 + (it - nbs.begin()));
}

// ---------------------------------------------------------------------------

LspTable LspTable::compute(const NetworkGraph& graph) {
  LspTable t;
  t.nodes_ = graph.forwarding_nodes();
  const std::size_t n = t.nodes_.size();
  for (std::size_t i = 0; i < n; ++i) t.index_.emplace(t.nodes_[i], i);
  t.next_.assign(n * n, -1);
  t.dist_.assign(n * n, std::numeric_limits<std::uint32_t>::max());

  for (std::size_t fec = 0; fec < n; ++fec) {
    // BFS from the FEC owner gives every node its hop distance to it.
    std::vector<std::uint32_t> dist(n, std::numeric_limits<std::uint32_t>::max());
    std::deque<std::size_t> q{fec};
    dist[fec] = 0;
    while (!q.empty()) {
      std::size_t u = q.front();
      q.pop_front();
      for (RouterId nb : graph.forwarding_neighbors(t.nodes_[u])) {
        std::size_t v = t.index_.at(nb);
        if (dist[v] == std::numeric_limits<std::uint32_t>::max()) {
          dist[v] = dist[u] + 1;
          q.push_back(v);
        }
      }
    }
    for (std::size_t node = 0; node < n; ++node) {
      t.dist_[node * n + fec] = dist[node];
      if (node == fec) continue;
      // Neighbors are sorted by RouterId, so the first closer one is the lowest.
      for (RouterId nb : graph.forwarding_neighbors(t.nodes_[node])) {
        std::size_t v = t.index_.at(nb);
        if (dist[v] + 1 == dist[node]) {
          t.next_[node * n + fec] = static_cast<int>(v);
          break;
        }
      }
    }
  }
  return t;
}

std::size_t LspTable::idx(RouterId rid) const {
  auto it = index_.find(rid);
  if (it == index_.end()) throw Error(Errc::UnknownNode, "no LSP entry for " + rid.to_string());
  return it->second;
}

std::optional<LspHop> LspTable::toward(RouterId node, RouterId fec) const {
  auto in = index_.find(node);
  auto f = index_.find(fec);
  if (in == index_.end() || f == index_.end() || node == fec) return std::nullopt;
  const int next = next_[in->second * nodes_.size() + f->second];
  if (next < 0) return std::nullopt;
  RouterId nh = nodes_[static_cast<std::size_t>(next)];
  return LspHop{in_label(nh, fec), nh};
}

InfraLabel LspTable::in_label(RouterId node, RouterId fec) const {
  idx(node);
  return InfraLabel(Label::kFirstUnreserved + static_cast<std::uint32_t>(idx(fec)));
}

std::optional<LabelAction> LspTable::action(RouterId node, InfraLabel in) const {
  auto it = index_.find(node);
  if (it == index_.end() || in.value() < Label::kFirstUnreserved) return std::nullopt;
  const std::size_t fec = in.value() - Label::kFirstUnreserved;
  if (fec >= nodes_.size()) return std::nullopt;
  if (fec == it->second) return LabelAction{LabelAction::Kind::Pop, nodes_[fec], {}, {}};
  auto hop = toward(node, nodes_[fec]);
  if (!hop) return std::nullopt;
  return LabelAction{LabelAction::Kind::Swap, nodes_[fec], hop->out_label, hop->next_hop};
}

std::vector<RouterId> LspTable::trail(RouterId src, RouterId dst) const {
  std::vector<RouterId> out{src};
  RouterId cur = src;
  while (cur != dst) {
    auto hop = toward(cur, dst);
    if (!hop || out.size() > nodes_.size()) {
      throw Error(Errc::NoRouteToOrigin, "no LSP trail " + src.to_string() + " -> " + dst.to_string());
    }
    cur = hop->next_hop;
    out.push_back(cur);
  }
  return out;
}

std::size_t LspTable::hop_count(RouterId src, RouterId dst) const { return dist_[idx(src) * nodes_.size() + idx(dst)]; }

}  // namespace hmlbn
