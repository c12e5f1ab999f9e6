#pragma once

#include <compare>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "gigmine/event.hpp"
#include "gigmine/ids.hpp"

namespace gigmine {

enum class Side : std::uint8_t { artist, venue };

constexpr Side opposite(Side s) noexcept { return s == Side::artist ? Side::venue : Side::artist; }

/// Dense handle to a node: its side plus the interned index on that side.
struct NodeRef {
  Side side = Side::artist;
  std::uint32_t index = 0;

  friend auto operator<=>(const NodeRef&, const NodeRef&) = default;
  friend bool operator==(const NodeRef&, const NodeRef&) = default;
};

inline NodeRef artist_node(std::uint32_t i) { return {Side::artist, i}; }
inline NodeRef venue_node(std::uint32_t i) { return {Side::venue, i}; }

struct EdgeInfo {
  std::uint32_t count = 0;  // number of events on this (artist, venue) pair
  int first_year = 0;       // earliest event year on the pair
  double weight = 1.0;
};

struct Edge {
  std::uint32_t artist = 0;
  std::uint32_t venue = 0;
  EdgeInfo info;
};

/// Nodes on one side of the graph, given as sorted dense indices.
struct NeighborSet {
  Side side = Side::venue;
  std::vector<std::uint32_t> members;

  std::size_t size() const noexcept { return members.size(); }
  bool contains(std::uint32_t i) const;
};

/// Immutable artist-venue graph. External ids are interned to dense indices
/// in insertion order; adjacency lists are sorted so set operations over
/// neighborhoods are linear merges.
///
/// Safe for concurrent reads once constructed.
class BipartiteGraph {
 public:
  BipartiteGraph() = default;

  std::size_t artist_count() const noexcept { return artist_ids_.size(); }
  std::size_t venue_count() const noexcept { return venue_ids_.size(); }
  std::size_t node_count(Side s) const noexcept {
    return s == Side::artist ? artist_count() : venue_count();
  }
  std::size_t edge_count() const noexcept { return edges_.size(); }

  const ArtistId& artist_id(std::uint32_t a) const;
  const VenueId& venue_id(std::uint32_t v) const;
  std::string node_name(NodeRef n) const;

  std::optional<std::uint32_t> find_artist(const ArtistId& id) const;
  std::optional<std::uint32_t> find_venue(const VenueId& id) const;
  /// Throws UnknownNodeError naming the id.
  NodeRef node(const ArtistId& id) const;
  NodeRef node(const VenueId& id) const;

  bool contains(NodeRef n) const noexcept { return n.index < node_count(n.side); }

  /// Sorted opposite-side indices adjacent to `n`.
  std::span<const std::uint32_t> neighbors(NodeRef n) const;
  NeighborSet neighbor_set(NodeRef n) const;
  /// Union of the neighborhoods of every neighbor of `n`; includes `n`
  /// itself whenever it has at least one neighbor.
  NeighborSet two_hop_neighbors(NodeRef n) const;
  /// Number of distinct opposite-side neighbors.
  std::size_t degree(NodeRef n) const;
  /// Sum of event counts over incident edges.
  std::uint64_t event_count(NodeRef n) const;

  std::span<const Edge> edges() const noexcept { return edges_; }
  /// Edge ids incident to `n`, aligned with neighbors(n).
  std::span<const std::uint32_t> incident_edges(NodeRef n) const;
  std::optional<std::uint32_t> find_edge(std::uint32_t artist, std::uint32_t venue) const;
  const Edge& edge(std::uint32_t e) const { return edges_.at(e); }

  std::span<const ArtistId> artist_ids() const noexcept { return artist_ids_; }
  std::span<const VenueId> venue_ids() const noexcept { return venue_ids_; }

  /// Subgraph on the kept nodes, re-interned in original order. Edges
  /// survive only when both endpoints are kept.
  BipartiteGraph induced(const std::vector<bool>& keep_artists,
                         const std::vector<bool>& keep_venues) const;
  /// Same node set, minus the listed edges.
  BipartiteGraph without_edges(const std::vector<bool>& drop_edge) const;

 private:
  friend class GraphBuilder;
  void finalize();

  std::vector<ArtistId> artist_ids_;
  std::vector<VenueId> venue_ids_;
  std::unordered_map<ArtistId, std::uint32_t> artist_index_;
  std::unordered_map<VenueId, std::uint32_t> venue_index_;
  std::vector<Edge> edges_;  // sorted by (artist, venue)

  // CSR adjacency for both sides.
  std::vector<std::uint32_t> artist_offsets_, artist_adj_, artist_adj_edge_;
  std::vector<std::uint32_t> venue_offsets_, venue_adj_, venue_adj_edge_;
};

/// Single-writer accumulator for BipartiteGraph. Repeated edges merge:
/// counts add and the first year is the minimum.
class GraphBuilder {
 public:
  std::uint32_t add_artist(const ArtistId& id);
  std::uint32_t add_venue(const VenueId& id);
  void add_edge(std::uint32_t artist, std::uint32_t venue, std::uint32_t count, int year,
                double weight = 1.0);
  void add_event(const ArtistId& artist, const VenueId& venue, int year);

  BipartiteGraph build() &&;

 private:
  BipartiteGraph g_;
  std::unordered_map<std::uint64_t, std::uint32_t> edge_slot_;
};

/// Graph over the events; an event lacking either endpoint id is rejected
/// with an InvalidArgument naming its event id.
BipartiteGraph build_graph(std::span<const Event> events);

/// Graph with nodes named "a<i>" / "v<j>" and one event per listed
/// (artist, venue) index pair. Nodes without pairs stay isolated.
BipartiteGraph graph_from_pairs(std::size_t n_artists, std::size_t n_venues,
                                std::span<const std::pair<std::uint32_t, std::uint32_t>> pairs,
                                int year = 2017);

}  // namespace gigmine
