#pragma once

#include <span>
#include <string_view>

#include "icspread/graph.hpp"

namespace icspread {

// Bags of an alleged path decomposition of the underlying undirected graph.
struct PathDecomposition {
    std::vector<std::vector<Vertex>> bags;

    int width() const;  // max bag size - 1, or -1 when empty
};

PathDecomposition parse_path_decomposition(std::string_view text, Vertex n);

// Throws std::invalid_argument naming the violated condition.
void validate_path_decomposition(const UncertainDigraph& g, const PathDecomposition& pd);

// An edge processing order e_1..e_m together with the frontier bookkeeping
// both dynamic programs run on. Level i refers to the state between edge
// i-1 and edge i, so levels run from 1 to m+1. The frontier W_i holds the
// vertices incident to both an already processed and a still pending edge.
class EdgeOrdering {
public:
    EdgeOrdering() = default;
    EdgeOrdering(const UncertainDigraph& g, std::vector<int> order);

    int edge_count() const { return static_cast<int>(order_.size()); }
    const std::vector<int>& order() const { return order_; }
    int edge_at(int level) const { return order_[static_cast<size_t>(level - 1)]; }

    std::span<const Vertex> frontier(int level) const;
    int omega() const { return omega_; }

    // First/last level at which v is a frontier member; first > last means
    // v never enters the frontier (degree <= 1).
    int introduced_at(Vertex v) const { return first_touch_[static_cast<size_t>(v)] + 1; }
    int retired_at(Vertex v) const { return last_touch_[static_cast<size_t>(v)]; }

    // Largest i such that e_i is incident to v (1-based), or 0 for isolated v.
    int last_touch(Vertex v) const { return last_touch_[static_cast<size_t>(v)]; }
    int first_touch(Vertex v) const { return first_touch_[static_cast<size_t>(v)]; }

    int seed_last_touch(const SeedSet& s) const;

private:
    std::vector<int> order_;        // positions 0..m-1 hold edge indices
    std::vector<int> first_touch_;  // per vertex, 1-based edge position, 0 if none
    std::vector<int> last_touch_;
    std::vector<uint32_t> frontier_offsets_;  // level 1..m+1 -> range in frontier_verts_
    std::vector<Vertex> frontier_verts_;      // each level's frontier, ascending
    int omega_ = 0;
};

// Assigns each edge to the first bag containing both endpoints and sorts by
// bag index (ties broken by input order). Frontier width is at most the
// decomposition width plus one.
EdgeOrdering ordering_from_decomposition(const UncertainDigraph& g, const PathDecomposition& pd);

// BFS over the underlying undirected graph from a minimum-degree vertex,
// emitting each visited vertex's incident edges consecutively. No width
// guarantee.
EdgeOrdering heuristic_ordering(const UncertainDigraph& g);

EdgeOrdering compute_frontiers(const UncertainDigraph& g, std::vector<int> order);

}  // namespace icspread
