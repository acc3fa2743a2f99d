#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace icspread {

using Vertex = int32_t;

struct Edge {
    Vertex tail = 0;
    Vertex head = 0;
    double prob = 0.0;
};

class ParseError : public std::runtime_error {
public:
    ParseError(const std::string& msg, int line)
        : std::runtime_error("line " + std::to_string(line) + ": " + msg), line_(line) {}
    int line() const { return line_; }

private:
    int line_;
};

// Directed graph where each edge is independently present with its own
// probability. Self-loops are removed on construction; parallel edges are
// kept as distinct edges.
class UncertainDigraph {
public:
    UncertainDigraph() = default;
    UncertainDigraph(Vertex n, std::vector<Edge> edges);

    Vertex vertex_count() const { return n_; }
    int edge_count() const { return static_cast<int>(edges_.size()); }
    const std::vector<Edge>& edges() const { return edges_; }
    const Edge& edge(int i) const { return edges_[static_cast<size_t>(i)]; }
    int self_loops_dropped() const { return self_loops_dropped_; }

    // Number of distinct edges incident to v (in + out; parallel edges counted).
    int degree(Vertex v) const { return degree_[static_cast<size_t>(v)]; }

    std::string to_text() const;

private:
    Vertex n_ = 0;
    std::vector<Edge> edges_;
    std::vector<int> degree_;
    int self_loops_dropped_ = 0;
};

struct SeedSet {
    std::vector<Vertex> members;  // sorted, unique

    bool contains(Vertex v) const;
};

SeedSet make_seed_set(const UncertainDigraph& g, std::vector<Vertex> members);

// Graph file format: first non-comment line is the vertex count, every
// following non-comment line is "tail head p". '#' starts a comment.
UncertainDigraph parse_graph(std::string_view text);

struct Component {
    UncertainDigraph graph;            // locally re-indexed
    std::vector<Vertex> to_global;     // local id -> original id
    std::vector<Vertex> seeds;         // local ids
};

// Partition by weak connectivity of the underlying undirected graph.
// Isolated vertices become singleton components.
std::vector<Component> split_components(const UncertainDigraph& g, const SeedSet& s);

struct SpreadResult {
    std::vector<Vertex> vertices;   // non-seed vertices, ascending
    std::vector<double> probs;      // parallel to vertices
    double sigma = 0.0;             // sum of probs
    double sigma_with_seeds = 0.0;  // sigma + |S|
};

// per_vertex must hold one probability for every non-seed vertex of a graph
// with n vertices; anything missing or duplicated is an internal error.
SpreadResult assemble_spread(Vertex n,
                             const std::vector<std::pair<Vertex, double>>& per_vertex,
                             const SeedSet& s);

}  // namespace icspread
