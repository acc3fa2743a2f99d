#include "icspread/state.hpp"

#include <algorithm>
#include <bit>

namespace icspread {

namespace {

struct Workspace {
    std::array<Vertex, kMaxWidth + 2> verts;  // sorted vertex space of the auxiliary graph
    int count = 0;
    std::array<uint16_t, kMaxWidth + 3> adj;  // rows: vertices then the seed row

    int index_of(Vertex v) const {
        for (int i = 0; i < count; ++i)
            if (verts[static_cast<size_t>(i)] == v) return i;
        return -1;
    }
};

void build_vertex_space(Workspace& ws, std::span<const Vertex> cur, std::span<const Vertex> nxt,
                        Vertex a, Vertex b) {
    ws.count = 0;
    size_t i = 0, j = 0;
    auto push = [&](Vertex v) { ws.verts[static_cast<size_t>(ws.count++)] = v; };
    while (i < cur.size() || j < nxt.size()) {
        if (j >= nxt.size() || (i < cur.size() && cur[i] < nxt[j]))
            push(cur[i++]);
        else if (i >= cur.size() || nxt[j] < cur[i])
            push(nxt[j++]);
        else {
            push(cur[i]);
            ++i, ++j;
        }
    }
    for (Vertex v : {std::min(a, b), std::max(a, b)}) {
        int pos = ws.count;
        while (pos > 0 && ws.verts[static_cast<size_t>(pos - 1)] > v) --pos;
        if (pos > 0 && ws.verts[static_cast<size_t>(pos - 1)] == v) continue;
        for (int k = ws.count; k > pos; --k) ws.verts[static_cast<size_t>(k)] = ws.verts[static_cast<size_t>(k - 1)];
        ws.verts[static_cast<size_t>(pos)] = v;
        ++ws.count;
    }
}

}  // namespace

StateBits initial_shared_state() { return StateBits{}; }
StateBits initial_target_state() { return StateBits{}; }

TransitionResult transition(const StateBits& st, int level, bool hi,
                            const TransitionContext& ctx, TargetMode target_mode,
                            Vertex target) {
    const EdgeOrdering& ord = *ctx.ordering;
    const std::span<const Vertex> cur = ord.frontier(level);
    const std::span<const Vertex> nxt = ord.frontier(level + 1);
    const Edge& e = ctx.graph->edge(ord.edge_at(level));

    Workspace ws;
    build_vertex_space(ws, cur, nxt, e.tail, e.head);
    const int nu = ws.count;
    const int seed_row = nu;

    // Local target column: the target's own column while it lives in the
    // vertex space, the spare bit otherwise.
    const int tloc = (target_mode != TargetMode::None && target >= 0) ? ws.index_of(target) : -1;
    const uint16_t tcol = (tloc >= 0) ? static_cast<uint16_t>(1u << tloc)
                                      : static_cast<uint16_t>(1u << kTargetBit);

    for (int r = 0; r <= nu; ++r) ws.adj[static_cast<size_t>(r)] = 0;
    for (int r = 0; r < nu; ++r) ws.adj[static_cast<size_t>(r)] = static_cast<uint16_t>(1u << r);

    // Expand the packed rows into the vertex space.
    auto expand_row = [&](uint16_t packed) {
        uint16_t out = 0;
        int pos = 0;
        for (size_t c = 0; c < cur.size(); ++c) {
            if (!st.col_present(static_cast<int>(c))) continue;
            if ((packed >> pos) & 1) out |= static_cast<uint16_t>(1u << ws.index_of(cur[c]));
            ++pos;
        }
        if ((packed >> kTargetBit) & 1) out |= tcol;
        return out;
    };
    for (size_t r = 0; r < cur.size(); ++r) {
        if (!st.row_present(static_cast<int>(r))) continue;
        int u = ws.index_of(cur[r]);
        ws.adj[static_cast<size_t>(u)] |= expand_row(st.rows[static_cast<size_t>(st.row_pos(static_cast<int>(r)))]);
    }
    ws.adj[static_cast<size_t>(seed_row)] = expand_row(st.seed_row());

    // Vertices entering the space: isolated, with a seed edge when seeded.
    for (int u = 0; u < nu; ++u) {
        Vertex v = ws.verts[static_cast<size_t>(u)];
        bool in_cur = std::binary_search(cur.begin(), cur.end(), v);
        if (!in_cur && (*ctx.is_seed)[static_cast<size_t>(v)])
            ws.adj[static_cast<size_t>(seed_row)] |= static_cast<uint16_t>(1u << u);
    }

    if (hi) ws.adj[static_cast<size_t>(ws.index_of(e.tail))] |= static_cast<uint16_t>(1u << ws.index_of(e.head));

    // Transitive closure over the vertex space.
    for (int k = 0; k < nu; ++k) {
        const uint16_t kb = static_cast<uint16_t>(1u << k);
        const uint16_t krow = ws.adj[static_cast<size_t>(k)];
        for (int r = 0; r <= nu; ++r)
            if (ws.adj[static_cast<size_t>(r)] & kb) ws.adj[static_cast<size_t>(r)] |= krow;
    }

    if (target_mode != TargetMode::None && (ws.adj[static_cast<size_t>(seed_row)] & tcol))
        return {StateKind::Top, {}};

    // Restrict to the next frontier.
    uint16_t reached = 0, reach_t = 0;
    for (size_t r = 0; r < nxt.size(); ++r) {
        int u = ws.index_of(nxt[r]);
        if (ws.adj[static_cast<size_t>(seed_row)] & (1u << u)) reached |= static_cast<uint16_t>(1u << r);
        if (ws.adj[static_cast<size_t>(u)] & tcol) reach_t |= static_cast<uint16_t>(1u << r);
    }

    if (target_mode == TargetMode::None) {
        if (level >= ctx.seed_last && reached == 0) return {StateKind::Bottom, {}};
    } else {
        if (level >= ctx.seed_last && reached == 0) return {StateKind::Bottom, {}};
        const bool target_settled =
            target_mode == TargetMode::Retired || (target >= 0 && ord.last_touch(target) <= level);
        if (target_settled && reach_t == 0) return {StateKind::Bottom, {}};
    }

    TransitionResult res;
    res.bits.row_mask = static_cast<uint16_t>(~reached & ((1u << nxt.size()) - 1u));
    res.bits.col_mask = (target_mode == TargetMode::None)
                            ? static_cast<uint16_t>((1u << nxt.size()) - 1u)
                            : static_cast<uint16_t>(~reach_t & ((1u << nxt.size()) - 1u));

    auto pack_row = [&](uint16_t wide) {
        uint16_t packed = 0;
        int pos = 0;
        for (size_t c = 0; c < nxt.size(); ++c) {
            if (!((res.bits.col_mask >> c) & 1)) continue;
            if (wide & (1u << ws.index_of(nxt[c]))) packed |= static_cast<uint16_t>(1u << pos);
            ++pos;
        }
        if (target_mode != TargetMode::None && (wide & tcol))
            packed |= static_cast<uint16_t>(1u << kTargetBit);
        return packed;
    };
    int out_pos = 0;
    for (size_t r = 0; r < nxt.size(); ++r) {
        if (!((res.bits.row_mask >> r) & 1)) continue;
        res.bits.rows[static_cast<size_t>(out_pos++)] = pack_row(ws.adj[static_cast<size_t>(ws.index_of(nxt[r]))]);
    }
    res.bits.rows[static_cast<size_t>(out_pos)] = pack_row(ws.adj[static_cast<size_t>(seed_row)]);
    return res;
}

SccPartition shared_state_sccs(const StateBits& st, int width) {
    SccPartition part;
    part.scc_of.fill(0xFF);
    for (int r = 0; r < width; ++r) {
        if (!st.row_present(r) || part.scc_of[static_cast<size_t>(r)] != 0xFF) continue;
        const uint8_t id = static_cast<uint8_t>(part.count++);
        part.scc_of[static_cast<size_t>(r)] = id;
        for (int x = r + 1; x < width; ++x) {
            if (!st.row_present(x) || part.scc_of[static_cast<size_t>(x)] != 0xFF) continue;
            // The stored matrix is transitively closed, so mutual bits
            // characterize the components.
            if (st.bit(r, x) && st.bit(x, r)) part.scc_of[static_cast<size_t>(x)] = id;
        }
    }
    return part;
}

StateBits extract_target_state(const StateBits& st, std::span<const Vertex> frontier, Vertex u) {
    const int width = static_cast<int>(frontier.size());
    int rank_u = -1;
    for (int r = 0; r < width; ++r)
        if (frontier[static_cast<size_t>(r)] == u) rank_u = r;
    if (rank_u < 0 || !st.row_present(rank_u))
        throw std::logic_error("target extraction requires an unreached frontier vertex");
    if (st.seed_bit(rank_u))
        throw std::logic_error("target extraction on a seed-reached vertex");

    StateBits out;
    out.row_mask = st.row_mask;
    out.col_mask = st.col_mask;
    for (int x = 0; x < width; ++x)
        if (st.col_present(x) && st.row_present(x) && st.bit(x, rank_u))
            out.col_mask &= static_cast<uint16_t>(~(1u << x));

    auto repack = [&](int row_rank, bool seed) {
        uint16_t packed = 0;
        int pos = 0;
        for (int c = 0; c < width; ++c) {
            if (!((out.col_mask >> c) & 1)) continue;
            bool v = seed ? st.seed_bit(c) : st.bit(row_rank, c);
            if (v) packed |= static_cast<uint16_t>(1u << pos);
            ++pos;
        }
        bool into_u = seed ? st.seed_bit(rank_u) : st.bit(row_rank, rank_u);
        if (into_u) packed |= static_cast<uint16_t>(1u << kTargetBit);
        return packed;
    };
    int out_pos = 0;
    for (int r = 0; r < width; ++r) {
        if (!st.row_present(r)) continue;
        out.rows[static_cast<size_t>(out_pos++)] = repack(r, false);
    }
    out.rows[static_cast<size_t>(out_pos)] = repack(0, true);
    return out;
}

std::string canonical_encode(StateKind kind, const StateBits& bits) {
    if (kind == StateKind::Top) return std::string(1, '\x01');
    if (kind == StateKind::Bottom) return std::string(1, '\x02');
    std::string out(1, '\x00');
    out.append(reinterpret_cast<const char*>(&bits), sizeof(StateBits));
    return out;
}

}  // namespace icspread
