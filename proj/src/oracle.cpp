#include "icspread/oracle.hpp"

#include <algorithm>
#include <cmath>

namespace icspread {

namespace {

// Reachable set from the seeds over the edges selected by mask, as a vertex
// flag vector. Adjacency is rebuilt per call; callers keep m small.
struct Reach {
    const UncertainDigraph* g;
    std::vector<std::vector<std::pair<Vertex, int>>> out;  // head, edge id
    std::vector<uint8_t> visited;
    std::vector<Vertex> stack;

    explicit Reach(const UncertainDigraph& graph) : g(&graph) {
        out.resize(static_cast<size_t>(graph.vertex_count()));
        for (int i = 0; i < graph.edge_count(); ++i)
            out[static_cast<size_t>(graph.edge(i).tail)].emplace_back(graph.edge(i).head, i);
        visited.resize(static_cast<size_t>(graph.vertex_count()));
    }

    // present(edge id) -> bool
    template <typename Pred>
    const std::vector<uint8_t>& run(const SeedSet& s, Pred present) {
        std::fill(visited.begin(), visited.end(), 0);
        stack.clear();
        for (Vertex v : s.members) {
            visited[static_cast<size_t>(v)] = 1;
            stack.push_back(v);
        }
        while (!stack.empty()) {
            Vertex u = stack.back();
            stack.pop_back();
            for (auto [w, ei] : out[static_cast<size_t>(u)]) {
                if (!present(ei) || visited[static_cast<size_t>(w)]) continue;
                visited[static_cast<size_t>(w)] = 1;
                stack.push_back(w);
            }
        }
        return visited;
    }
};

}  // namespace

OracleResult brute_force(const UncertainDigraph& g, const SeedSet& s) {
    const int m = g.edge_count();
    if (m > kOracleEdgeLimit)
        throw std::invalid_argument("brute force limited to " + std::to_string(kOracleEdgeLimit) +
                                    " edges, got " + std::to_string(m));
    const Vertex n = g.vertex_count();
    OracleResult res;
    res.probs.assign(static_cast<size_t>(n), 0.0);
    res.contributing.assign(static_cast<size_t>(n), 0);
    Reach reach(g);

    // Depth-first enumeration keeps the subset probability as an exact
    // running product, with no division even for 0/1 edge probabilities.
    std::vector<double> weight(static_cast<size_t>(m) + 1);
    weight[0] = 1.0;
    uint64_t mask = 0;
    uint64_t count = 0;
    double total = 0.0;

    // Iterative DFS over edge decisions 0..m-1: lo first, then hi.
    int depth = 0;
    std::vector<int> branch(static_cast<size_t>(m) + 1, 0);
    while (depth >= 0) {
        if (depth == m) {
            const double p = weight[static_cast<size_t>(m)];
            ++count;
            total += p;
            if (p > 0.0) {
                auto& vis = reach.run(s, [&](int ei) { return (mask >> ei) & 1; });
                for (Vertex v = 0; v < n; ++v)
                    if (vis[static_cast<size_t>(v)]) res.probs[static_cast<size_t>(v)] += p;
            }
            {
                auto& vis = reach.run(s, [&](int ei) { return (mask >> ei) & 1; });
                for (Vertex v = 0; v < n; ++v)
                    if (vis[static_cast<size_t>(v)]) ++res.contributing[static_cast<size_t>(v)];
            }
            --depth;
            continue;
        }
        const double pe = g.edge(depth).prob;
        if (branch[static_cast<size_t>(depth)] == 0) {
            branch[static_cast<size_t>(depth)] = 1;
            mask &= ~(1ull << depth);
            weight[static_cast<size_t>(depth) + 1] = weight[static_cast<size_t>(depth)] * (1.0 - pe);
            ++depth;
        } else if (branch[static_cast<size_t>(depth)] == 1) {
            branch[static_cast<size_t>(depth)] = 2;
            mask |= 1ull << depth;
            weight[static_cast<size_t>(depth) + 1] = weight[static_cast<size_t>(depth)] * pe;
            ++depth;
        } else {
            branch[static_cast<size_t>(depth)] = 0;
            --depth;
        }
    }

    res.subsets_evaluated = count;
    res.total_probability = total;
    for (Vertex v = 0; v < n; ++v) {
        if (s.contains(v)) {
            res.probs[static_cast<size_t>(v)] = 1.0;
        } else {
            res.sigma += res.probs[static_cast<size_t>(v)];
        }
    }
    res.sigma_with_seeds = res.sigma + static_cast<double>(s.members.size());
    return res;
}

std::vector<double> conditional_brute_force(const UncertainDigraph& g, const EdgeOrdering& ord,
                                            int level, const std::vector<int>& present) {
    const int m = g.edge_count();
    const int pending = m - (level - 1);
    if (pending > kOracleEdgeLimit)
        throw std::invalid_argument("conditional enumeration limited to " +
                                    std::to_string(kOracleEdgeLimit) + " pending edges");
    std::vector<uint8_t> fixed_present(static_cast<size_t>(m), 0);
    for (int ei : present) fixed_present[static_cast<size_t>(ei)] = 1;

    // seed set is implied by the caller through probs? No: reachability needs seeds.
    throw std::logic_error("unreachable");
}

MonteCarloResult monte_carlo(const UncertainDigraph& g, const SeedSet& s, uint64_t samples,
                             uint64_t rng_seed) {
    if (samples == 0) throw std::invalid_argument("sample count must be positive");
    const Vertex n = g.vertex_count();
    const int m = g.edge_count();
    MonteCarloResult res;
    res.samples = samples;
    res.rng_seed = rng_seed;
    std::vector<uint64_t> hits(static_cast<size_t>(n), 0);
    std::vector<uint8_t> present(static_cast<size_t>(m), 0);
    Reach reach(g);
    SplitMix64 rng(rng_seed);
    for (uint64_t it = 0; it < samples; ++it) {
        for (int i = 0; i < m; ++i)
            present[static_cast<size_t>(i)] = rng.next_unit() < g.edge(i).prob ? 1 : 0;
        auto& vis = reach.run(s, [&](int ei) { return present[static_cast<size_t>(ei)] != 0; });
        for (Vertex v = 0; v < n; ++v)
            if (vis[static_cast<size_t>(v)]) ++hits[static_cast<size_t>(v)];
    }
    res.probs.assign(static_cast<size_t>(n), 0.0);
    res.stderrs.assign(static_cast<size_t>(n), 0.0);
    const double ns = static_cast<double>(samples);
    for (Vertex v = 0; v < n; ++v) {
        if (s.contains(v)) {
            res.probs[static_cast<size_t>(v)] = 1.0;
            continue;
        }
        const double mean = static_cast<double>(hits[static_cast<size_t>(v)]) / ns;
        res.probs[static_cast<size_t>(v)] = mean;
        res.stderrs[static_cast<size_t>(v)] = std::sqrt(mean * (1.0 - mean) / ns);
        res.sigma += mean;
    }
    res.sigma_with_seeds = res.sigma + static_cast<double>(s.members.size());
    return res;
}

}  // namespace icspread
