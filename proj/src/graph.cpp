#include "gigmine/graph.hpp"

#include <algorithm>
#include <numeric>

#include "gigmine/error.hpp"

namespace gigmine {

namespace {

std::uint64_t pair_key(std::uint32_t a, std::uint32_t v) {
  return (static_cast<std::uint64_t>(a) << 32) | v;
}

void build_csr(std::size_t n, const std::vector<Edge>& edges, bool by_artist,
               std::vector<std::uint32_t>& offsets, std::vector<std::uint32_t>& adj,
               std::vector<std::uint32_t>& adj_edge) {
  offsets.assign(n + 1, 0);
  for (const auto& e : edges) ++offsets[(by_artist ? e.artist : e.venue) + 1];
  std::partial_sum(offsets.begin(), offsets.end(), offsets.begin());
  adj.resize(edges.size());
  adj_edge.resize(edges.size());
  std::vector<std::uint32_t> cursor(offsets.begin(), offsets.end() - 1);
  // edges are sorted by (artist, venue), so both sides come out sorted.
  for (std::uint32_t i = 0; i < edges.size(); ++i) {
    const auto& e = edges[i];
    const std::uint32_t owner = by_artist ? e.artist : e.venue;
    const std::uint32_t slot = cursor[owner]++;
    adj[slot] = by_artist ? e.venue : e.artist;
    adj_edge[slot] = i;
  }
}

}  // namespace

bool NeighborSet::contains(std::uint32_t i) const {
  return std::binary_search(members.begin(), members.end(), i);
}

const ArtistId& BipartiteGraph::artist_id(std::uint32_t a) const {
  if (a >= artist_ids_.size()) throw UnknownNodeError("unknown artist index " + std::to_string(a));
  return artist_ids_[a];
}

const VenueId& BipartiteGraph::venue_id(std::uint32_t v) const {
  if (v >= venue_ids_.size()) throw UnknownNodeError("unknown venue index " + std::to_string(v));
  return venue_ids_[v];
}

std::string BipartiteGraph::node_name(NodeRef n) const {
  return n.side == Side::artist ? artist_id(n.index).value : venue_id(n.index).value;
}

std::optional<std::uint32_t> BipartiteGraph::find_artist(const ArtistId& id) const {
  auto it = artist_index_.find(id);
  if (it == artist_index_.end()) return std::nullopt;
  return it->second;
}

std::optional<std::uint32_t> BipartiteGraph::find_venue(const VenueId& id) const {
  auto it = venue_index_.find(id);
  if (it == venue_index_.end()) return std::nullopt;
  return it->second;
}

NodeRef BipartiteGraph::node(const ArtistId& id) const {
  auto i = find_artist(id);
  if (!i) throw UnknownNodeError("unknown artist '" + id.value + "'");
  return artist_node(*i);
}

NodeRef BipartiteGraph::node(const VenueId& id) const {
  auto i = find_venue(id);
  if (!i) throw UnknownNodeError("unknown venue '" + id.value + "'");
  return venue_node(*i);
}

std::span<const std::uint32_t> BipartiteGraph::neighbors(NodeRef n) const {
  if (!contains(n)) {
    throw UnknownNodeError(std::string("unknown ") + (n.side == Side::artist ? "artist" : "venue") +
                           " index " + std::to_string(n.index));
  }
  const auto& off = n.side == Side::artist ? artist_offsets_ : venue_offsets_;
  const auto& adj = n.side == Side::artist ? artist_adj_ : venue_adj_;
  return std::span<const std::uint32_t>(adj).subspan(off[n.index], off[n.index + 1] - off[n.index]);
}

std::span<const std::uint32_t> BipartiteGraph::incident_edges(NodeRef n) const {
  if (!contains(n)) throw UnknownNodeError("unknown node index " + std::to_string(n.index));
  const auto& off = n.side == Side::artist ? artist_offsets_ : venue_offsets_;
  const auto& adj = n.side == Side::artist ? artist_adj_edge_ : venue_adj_edge_;
  return std::span<const std::uint32_t>(adj).subspan(off[n.index], off[n.index + 1] - off[n.index]);
}

NeighborSet BipartiteGraph::neighbor_set(NodeRef n) const {
  auto nb = neighbors(n);
  return NeighborSet{opposite(n.side), {nb.begin(), nb.end()}};
}

NeighborSet BipartiteGraph::two_hop_neighbors(NodeRef n) const {
  std::vector<std::uint32_t> out;
  for (std::uint32_t mid : neighbors(n)) {
    auto nb = neighbors(NodeRef{opposite(n.side), mid});
    out.insert(out.end(), nb.begin(), nb.end());
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return NeighborSet{n.side, std::move(out)};
}

std::size_t BipartiteGraph::degree(NodeRef n) const { return neighbors(n).size(); }

std::uint64_t BipartiteGraph::event_count(NodeRef n) const {
  std::uint64_t total = 0;
  for (std::uint32_t e : incident_edges(n)) total += edges_[e].info.count;
  return total;
}

std::optional<std::uint32_t> BipartiteGraph::find_edge(std::uint32_t artist, std::uint32_t venue) const {
  if (artist >= artist_count() || venue >= venue_count()) return std::nullopt;
  auto nb = neighbors(artist_node(artist));
  auto it = std::lower_bound(nb.begin(), nb.end(), venue);
  if (it == nb.end() || *it != venue) return std::nullopt;
  return incident_edges(artist_node(artist))[static_cast<std::size_t>(it - nb.begin())];
}

void BipartiteGraph::finalize() {
  std::sort(edges_.begin(), edges_.end(), [](const Edge& x, const Edge& y) {
    return pair_key(x.artist, x.venue) < pair_key(y.artist, y.venue);
  });
  build_csr(artist_count(), edges_, true, artist_offsets_, artist_adj_, artist_adj_edge_);
  build_csr(venue_count(), edges_, false, venue_offsets_, venue_adj_, venue_adj_edge_);
}

BipartiteGraph BipartiteGraph::induced(const std::vector<bool>& keep_artists,
                                       const std::vector<bool>& keep_venues) const {
  if (keep_artists.size() != artist_count() || keep_venues.size() != venue_count()) {
    throw InvalidArgument("induced: mask sizes do not match the graph");
  }
  GraphBuilder b;
  std::vector<std::uint32_t> amap(artist_count(), UINT32_MAX), vmap(venue_count(), UINT32_MAX);
  for (std::uint32_t a = 0; a < artist_count(); ++a)
    if (keep_artists[a]) amap[a] = b.add_artist(artist_ids_[a]);
  for (std::uint32_t v = 0; v < venue_count(); ++v)
    if (keep_venues[v]) vmap[v] = b.add_venue(venue_ids_[v]);
  for (const auto& e : edges_) {
    if (amap[e.artist] == UINT32_MAX || vmap[e.venue] == UINT32_MAX) continue;
    b.add_edge(amap[e.artist], vmap[e.venue], e.info.count, e.info.first_year, e.info.weight);
  }
  return std::move(b).build();
}

BipartiteGraph BipartiteGraph::without_edges(const std::vector<bool>& drop_edge) const {
  if (drop_edge.size() != edge_count()) throw InvalidArgument("without_edges: mask size mismatch");
  GraphBuilder b;
  for (const auto& id : artist_ids_) b.add_artist(id);
  for (const auto& id : venue_ids_) b.add_venue(id);
  for (std::size_t i = 0; i < edges_.size(); ++i) {
    if (drop_edge[i]) continue;
    const auto& e = edges_[i];
    b.add_edge(e.artist, e.venue, e.info.count, e.info.first_year, e.info.weight);
  }
  return std::move(b).build();
}

std::uint32_t GraphBuilder::add_artist(const ArtistId& id) {
  auto [it, inserted] = g_.artist_index_.try_emplace(id, static_cast<std::uint32_t>(g_.artist_ids_.size()));
  if (inserted) g_.artist_ids_.push_back(id);
  return it->second;
}

std::uint32_t GraphBuilder::add_venue(const VenueId& id) {
  auto [it, inserted] = g_.venue_index_.try_emplace(id, static_cast<std::uint32_t>(g_.venue_ids_.size()));
  if (inserted) g_.venue_ids_.push_back(id);
  return it->second;
}

void GraphBuilder::add_edge(std::uint32_t artist, std::uint32_t venue, std::uint32_t count, int year,
                            double weight) {
  if (artist >= g_.artist_ids_.size() || venue >= g_.venue_ids_.size()) {
    throw InvalidArgument("add_edge: endpoint not registered");
  }
  if (count == 0) throw InvalidArgument("add_edge: count must be positive");
  auto [it, inserted] = edge_slot_.try_emplace(pair_key(artist, venue), static_cast<std::uint32_t>(g_.edges_.size()));
  if (inserted) {
    g_.edges_.push_back(Edge{artist, venue, EdgeInfo{count, year, weight}});
  } else {
    auto& info = g_.edges_[it->second].info;
    info.count += count;
    info.first_year = std::min(info.first_year, year);
  }
}

void GraphBuilder::add_event(const ArtistId& artist, const VenueId& venue, int year) {
  add_edge(add_artist(artist), add_venue(venue), 1, year);
}

BipartiteGraph GraphBuilder::build() && {
  g_.finalize();
  edge_slot_.clear();
  return std::move(g_);
}

BipartiteGraph build_graph(std::span<const Event> events) {
  GraphBuilder b;
  for (const auto& ev : events) {
    if (ev.artist.empty() || ev.venue.empty()) {
      throw InvalidArgument("event '" + ev.event_id + "' is missing its " +
                            (ev.artist.empty() ? "artist" : "venue") + " id");
    }
    b.add_event(ev.artist, ev.venue, year_of(ev.date));
  }
  return std::move(b).build();
}

BipartiteGraph graph_from_pairs(std::size_t n_artists, std::size_t n_venues,
                                std::span<const std::pair<std::uint32_t, std::uint32_t>> pairs, int year) {
  GraphBuilder b;
  for (std::size_t a = 0; a < n_artists; ++a) b.add_artist(ArtistId{"a" + std::to_string(a)});
  for (std::size_t v = 0; v < n_venues; ++v) b.add_venue(VenueId{"v" + std::to_string(v)});
  for (auto [a, v] : pairs) b.add_edge(a, v, 1, year);
  return std::move(b).build();
}

}  // namespace gigmine
