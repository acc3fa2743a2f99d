#include "icspread/ordering.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <queue>
#include <sstream>

namespace icspread {

int PathDecomposition::width() const {
    size_t w = 0;
    for (const auto& b : bags) w = std::max(w, b.size());
    return static_cast<int>(w) - 1;
}

PathDecomposition parse_path_decomposition(std::string_view text, Vertex n) {
    PathDecomposition pd;
    int line_no = 0;
    size_t pos = 0;
    while (pos < text.size()) {
        size_t end = text.find('\n', pos);
        if (end == std::string_view::npos) end = text.size();
        std::string line(text.substr(pos, end - pos));
        pos = end + 1;
        ++line_no;
        if (size_t hash = line.find('#'); hash != std::string::npos) line.resize(hash);
        std::istringstream in(line);
        std::vector<Vertex> bag;
        long long v;
        while (in >> v) {
            if (v < 0 || v >= n) throw ParseError("vertex id overflow", line_no);
            bag.push_back(static_cast<Vertex>(v));
        }
        if (!in.eof()) throw ParseError("malformed bag", line_no);
        if (!bag.empty()) {
            std::sort(bag.begin(), bag.end());
            bag.erase(std::unique(bag.begin(), bag.end()), bag.end());
            pd.bags.push_back(std::move(bag));
        }
    }
    return pd;
}

void validate_path_decomposition(const UncertainDigraph& g, const PathDecomposition& pd) {
    const Vertex n = g.vertex_count();
    std::vector<int> first(static_cast<size_t>(n), -1), last(static_cast<size_t>(n), -1);
    std::vector<int> count(static_cast<size_t>(n), 0);
    for (size_t b = 0; b < pd.bags.size(); ++b) {
        for (Vertex v : pd.bags[b]) {
            if (first[static_cast<size_t>(v)] < 0) first[static_cast<size_t>(v)] = static_cast<int>(b);
            last[static_cast<size_t>(v)] = static_cast<int>(b);
            ++count[static_cast<size_t>(v)];
        }
    }
    for (Vertex v = 0; v < n; ++v) {
        if (first[static_cast<size_t>(v)] < 0)
            throw std::invalid_argument("path decomposition misses vertex " + std::to_string(v));
        if (count[static_cast<size_t>(v)] != last[static_cast<size_t>(v)] - first[static_cast<size_t>(v)] + 1)
            throw std::invalid_argument("vertex " + std::to_string(v) +
                                        " does not appear in a contiguous run of bags");
    }
    for (int i = 0; i < g.edge_count(); ++i) {
        const Edge& e = g.edge(i);
        bool covered = false;
        for (const auto& bag : pd.bags) {
            if (std::binary_search(bag.begin(), bag.end(), e.tail) &&
                std::binary_search(bag.begin(), bag.end(), e.head)) {
                covered = true;
                break;
            }
        }
        if (!covered)
            throw std::invalid_argument("edge " + std::to_string(e.tail) + "->" +
                                        std::to_string(e.head) + " is not covered by any bag");
    }
}

EdgeOrdering::EdgeOrdering(const UncertainDigraph& g, std::vector<int> order)
    : order_(std::move(order)) {
    const int m = g.edge_count();
    {
        std::vector<char> seen(static_cast<size_t>(m), 0);
        if (static_cast<int>(order_.size()) != m) throw std::invalid_argument("ordering size mismatch");
        for (int e : order_) {
            if (e < 0 || e >= m || seen[static_cast<size_t>(e)])
                throw std::invalid_argument("ordering is not a permutation of the edges");
            seen[static_cast<size_t>(e)] = 1;
        }
    }

    const Vertex n = g.vertex_count();
    first_touch_.assign(static_cast<size_t>(n), 0);
    last_touch_.assign(static_cast<size_t>(n), 0);
    for (int pos = 0; pos < m; ++pos) {
        const Edge& e = g.edge(order_[static_cast<size_t>(pos)]);
        for (Vertex v : {e.tail, e.head}) {
            if (first_touch_[static_cast<size_t>(v)] == 0) first_touch_[static_cast<size_t>(v)] = pos + 1;
            last_touch_[static_cast<size_t>(v)] = pos + 1;
        }
    }

    // v is in W_i exactly for first_touch < i <= last_touch
    frontier_offsets_.assign(static_cast<size_t>(m) + 3, 0);
    frontier_verts_.clear();
    std::vector<Vertex> active;
    frontier_offsets_[1] = 0;  // W_1 empty
    for (int i = 2; i <= m + 1; ++i) {
        const Edge& e = g.edge(order_[static_cast<size_t>(i - 2)]);
        for (Vertex v : {e.tail, e.head}) {
            if (first_touch_[static_cast<size_t>(v)] == i - 1 && last_touch_[static_cast<size_t>(v)] >= i)
                active.insert(std::lower_bound(active.begin(), active.end(), v), v);
        }
        std::erase_if(active, [&](Vertex v) { return last_touch_[static_cast<size_t>(v)] < i; });
        frontier_offsets_[static_cast<size_t>(i)] = static_cast<uint32_t>(frontier_verts_.size());
        frontier_verts_.insert(frontier_verts_.end(), active.begin(), active.end());
        omega_ = std::max(omega_, static_cast<int>(active.size()));
    }
    frontier_offsets_[static_cast<size_t>(m) + 2] = static_cast<uint32_t>(frontier_verts_.size());
}

std::span<const Vertex> EdgeOrdering::frontier(int level) const {
    if (level < 1 || level > static_cast<int>(frontier_offsets_.size()) - 2) return {};
    uint32_t lo = frontier_offsets_[static_cast<size_t>(level)];
    uint32_t hi = frontier_offsets_[static_cast<size_t>(level) + 1];
    return {frontier_verts_.data() + lo, frontier_verts_.data() + hi};
}

int EdgeOrdering::seed_last_touch(const SeedSet& s) const {
    int i = 0;
    for (Vertex v : s.members) i = std::max(i, last_touch(v));
    return i;
}

EdgeOrdering compute_frontiers(const UncertainDigraph& g, std::vector<int> order) {
    return EdgeOrdering(g, std::move(order));
}

EdgeOrdering ordering_from_decomposition(const UncertainDigraph& g, const PathDecomposition& pd) {
    validate_path_decomposition(g, pd);
    const int m = g.edge_count();
    std::vector<std::pair<int, int>> keyed;  // (bag, edge index)
    keyed.reserve(static_cast<size_t>(m));
    for (int i = 0; i < m; ++i) {
        const Edge& e = g.edge(i);
        int bag = -1;
        for (size_t b = 0; b < pd.bags.size(); ++b) {
            if (std::binary_search(pd.bags[b].begin(), pd.bags[b].end(), e.tail) &&
                std::binary_search(pd.bags[b].begin(), pd.bags[b].end(), e.head)) {
                bag = static_cast<int>(b);
                break;
            }
        }
        keyed.emplace_back(bag, i);
    }
    std::stable_sort(keyed.begin(), keyed.end(),
                     [](const auto& a, const auto& b) { return a.first < b.first; });
    std::vector<int> order;
    order.reserve(keyed.size());
    for (auto& [bag, idx] : keyed) order.push_back(idx);
    return EdgeOrdering(g, std::move(order));
}

EdgeOrdering heuristic_ordering(const UncertainDigraph& g) {
    const Vertex n = g.vertex_count();
    const int m = g.edge_count();

    std::vector<std::vector<int>> incident(static_cast<size_t>(n));
    for (int i = 0; i < m; ++i) {
        const Edge& e = g.edge(i);
        incident[static_cast<size_t>(e.tail)].push_back(i);
        incident[static_cast<size_t>(e.head)].push_back(i);
    }

    std::vector<char> visited(static_cast<size_t>(n), 0);
    std::vector<char> emitted(static_cast<size_t>(m), 0);
    std::vector<int> order;
    order.reserve(static_cast<size_t>(m));

    auto bfs_from = [&](Vertex start) {
        std::queue<Vertex> q;
        q.push(start);
        visited[static_cast<size_t>(start)] = 1;
        while (!q.empty()) {
            Vertex u = q.front();
            q.pop();
            for (int ei : incident[static_cast<size_t>(u)]) {
                if (emitted[static_cast<size_t>(ei)]) continue;
                emitted[static_cast<size_t>(ei)] = 1;
                order.push_back(ei);
                const Edge& e = g.edge(ei);
                Vertex other = (e.tail == u) ? e.head : e.tail;
                if (!visited[static_cast<size_t>(other)]) {
                    visited[static_cast<size_t>(other)] = 1;
                    q.push(other);
                }
            }
        }
    };

    while (true) {
        Vertex start = -1;
        int best_deg = -1;
        for (Vertex v = 0; v < n; ++v) {
            if (visited[static_cast<size_t>(v)] || g.degree(v) == 0) continue;
            if (best_deg < 0 || g.degree(v) < best_deg) {
                best_deg = g.degree(v);
                start = v;
            }
        }
        if (start < 0) break;
        bfs_from(start);
    }
    return EdgeOrdering(g, std::move(order));
}

}  // namespace icspread
