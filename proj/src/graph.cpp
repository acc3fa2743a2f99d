#include "icspread/graph.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <numeric>
#include <sstream>

namespace icspread {

UncertainDigraph::UncertainDigraph(Vertex n, std::vector<Edge> edges) : n_(n) {
    if (n < 0) throw std::invalid_argument("negative vertex count");
    edges_.reserve(edges.size());
    degree_.assign(static_cast<size_t>(n), 0);
    for (const Edge& e : edges) {
        if (e.tail < 0 || e.tail >= n || e.head < 0 || e.head >= n)
            throw std::invalid_argument("edge endpoint out of range");
        if (e.prob < 0.0 || e.prob > 1.0)
            throw std::invalid_argument("edge probability out of range");
        if (e.tail == e.head) {
            ++self_loops_dropped_;  // never affects reachability
            continue;
        }
        edges_.push_back(e);
        ++degree_[static_cast<size_t>(e.tail)];
        ++degree_[static_cast<size_t>(e.head)];
    }
}

std::string UncertainDigraph::to_text() const {
    std::ostringstream out;
    out.precision(17);
    out << n_ << "\n";
    for (const Edge& e : edges_) out << e.tail << " " << e.head << " " << e.prob << "\n";
    return out.str();
}

bool SeedSet::contains(Vertex v) const {
    return std::binary_search(members.begin(), members.end(), v);
}

SeedSet make_seed_set(const UncertainDigraph& g, std::vector<Vertex> members) {
    std::sort(members.begin(), members.end());
    members.erase(std::unique(members.begin(), members.end()), members.end());
    if (members.empty()) throw std::invalid_argument("seed set is empty");
    for (Vertex v : members)
        if (v < 0 || v >= g.vertex_count()) throw std::invalid_argument("seed vertex out of range");
    return SeedSet{std::move(members)};
}

namespace {

struct LineScanner {
    std::string_view text;
    size_t pos = 0;
    int line_no = 0;

    // Next non-comment, non-blank line; comment text after '#' is stripped.
    bool next(std::string_view& out) {
        while (pos < text.size()) {
            size_t end = text.find('\n', pos);
            if (end == std::string_view::npos) end = text.size();
            std::string_view line = text.substr(pos, end - pos);
            pos = end + 1;
            ++line_no;
            if (size_t hash = line.find('#'); hash != std::string_view::npos)
                line = line.substr(0, hash);
            while (!line.empty() && (line.back() == '\r' || std::isspace((unsigned char)line.back())))
                line.remove_suffix(1);
            size_t first = 0;
            while (first < line.size() && std::isspace((unsigned char)line[first])) ++first;
            line = line.substr(first);
            if (!line.empty()) {
                out = line;
                return true;
            }
        }
        return false;
    }
};

std::vector<std::string_view> split_fields(std::string_view line) {
    std::vector<std::string_view> fields;
    size_t i = 0;
    while (i < line.size()) {
        while (i < line.size() && std::isspace((unsigned char)line[i])) ++i;
        size_t start = i;
        while (i < line.size() && !std::isspace((unsigned char)line[i])) ++i;
        if (i > start) fields.push_back(line.substr(start, i - start));
    }
    return fields;
}

bool parse_int(std::string_view s, long long& out) {
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
    return ec == std::errc() && ptr == s.data() + s.size();
}

bool parse_double(std::string_view s, double& out) {
    // from_chars<double> is available with gcc; fall back through strtod otherwise
    std::string buf(s);
    char* end = nullptr;
    out = std::strtod(buf.c_str(), &end);
    return end == buf.c_str() + buf.size() && !buf.empty();
}

}  // namespace

UncertainDigraph parse_graph(std::string_view text) {
    LineScanner scan{text};
    std::string_view line;
    if (!scan.next(line)) throw ParseError("missing vertex count", 1);

    long long n = 0;
    if (!parse_int(line, n) || n < 0) throw ParseError("malformed vertex count", scan.line_no);
    if (n > (1ll << 30)) throw ParseError("vertex count too large", scan.line_no);

    std::vector<Edge> edges;
    while (scan.next(line)) {
        auto fields = split_fields(line);
        if (fields.size() != 3) throw ParseError("malformed line (expected \"tail head p\")", scan.line_no);
        long long tail = 0, head = 0;
        double p = 0.0;
        if (!parse_int(fields[0], tail) || !parse_int(fields[1], head))
            throw ParseError("malformed vertex id", scan.line_no);
        if (tail < 0 || tail >= n || head < 0 || head >= n)
            throw ParseError("vertex id overflow", scan.line_no);
        if (!parse_double(fields[2], p)) throw ParseError("malformed probability", scan.line_no);
        if (p < 0.0 || p > 1.0) throw ParseError("probability out of range", scan.line_no);
        edges.push_back(Edge{static_cast<Vertex>(tail), static_cast<Vertex>(head), p});
    }
    return UncertainDigraph(static_cast<Vertex>(n), std::move(edges));
}

namespace {

struct UnionFind {
    std::vector<int> parent;
    explicit UnionFind(int n) : parent(static_cast<size_t>(n)) {
        std::iota(parent.begin(), parent.end(), 0);
    }
    int find(int x) {
        while (parent[static_cast<size_t>(x)] != x) {
            parent[static_cast<size_t>(x)] = parent[static_cast<size_t>(parent[static_cast<size_t>(x)])];
            x = parent[static_cast<size_t>(x)];
        }
        return x;
    }
    void unite(int a, int b) {
        a = find(a);
        b = find(b);
        if (a != b) parent[static_cast<size_t>(b)] = a;
    }
};

}  // namespace

std::vector<Component> split_components(const UncertainDigraph& g, const SeedSet& s) {
    const Vertex n = g.vertex_count();
    UnionFind uf(n);
    for (const Edge& e : g.edges()) uf.unite(e.tail, e.head);

    std::vector<int> root_to_comp(static_cast<size_t>(n), -1);
    std::vector<Component> comps;
    std::vector<std::vector<Vertex>> comp_vertices;
    for (Vertex v = 0; v < n; ++v) {
        int r = uf.find(v);
        if (root_to_comp[static_cast<size_t>(r)] < 0) {
            root_to_comp[static_cast<size_t>(r)] = static_cast<int>(comp_vertices.size());
            comp_vertices.emplace_back();
        }
        comp_vertices[static_cast<size_t>(root_to_comp[static_cast<size_t>(r)])].push_back(v);
    }

    std::vector<Vertex> local_id(static_cast<size_t>(n), -1);
    comps.reserve(comp_vertices.size());
    for (auto& verts : comp_vertices) {
        Component c;
        c.to_global = verts;
        for (size_t i = 0; i < verts.size(); ++i) local_id[static_cast<size_t>(verts[i])] = static_cast<Vertex>(i);
        std::vector<Edge> edges;
        for (const Edge& e : g.edges())
            if (uf.find(e.tail) == uf.find(verts[0]))
                edges.push_back(Edge{local_id[static_cast<size_t>(e.tail)], local_id[static_cast<size_t>(e.head)], e.prob});
        c.graph = UncertainDigraph(static_cast<Vertex>(verts.size()), std::move(edges));
        for (Vertex v : s.members)
            if (uf.find(v) == uf.find(verts[0])) c.seeds.push_back(local_id[static_cast<size_t>(v)]);
        comps.push_back(std::move(c));
    }
    return comps;
}

SpreadResult assemble_spread(Vertex n,
                             const std::vector<std::pair<Vertex, double>>& per_vertex,
                             const SeedSet& s) {
    SpreadResult r;
    std::vector<std::pair<Vertex, double>> entries = per_vertex;
    std::sort(entries.begin(), entries.end());
    for (auto& [v, p] : entries) {
        if (s.contains(v)) throw std::logic_error("seed vertex in spread map");
        r.vertices.push_back(v);
        r.probs.push_back(p);
        r.sigma += p;
    }
    for (size_t i = 1; i < r.vertices.size(); ++i)
        if (r.vertices[i] == r.vertices[i - 1]) throw std::logic_error("duplicate vertex in spread map");
    if (r.vertices.size() + s.members.size() != static_cast<size_t>(n))
        throw std::logic_error("spread map does not cover every non-seed vertex");
    r.sigma_with_seeds = r.sigma + static_cast<double>(s.members.size());
    return r;
}

}  // namespace icspread
