#include "icspread/all_targets.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <sstream>

namespace icspread {

namespace {

int rank_of(std::span<const Vertex> frontier, Vertex v) {
    auto it = std::lower_bound(frontier.begin(), frontier.end(), v);
    if (it == frontier.end() || *it != v) return -1;
    return static_cast<int>(it - frontier.begin());
}

double now_ms() {
    using namespace std::chrono;
    return duration<double, std::milli>(steady_clock::now().time_since_epoch()).count();
}

}  // namespace

SpreadSolver::SpreadSolver(const UncertainDigraph& g, const EdgeOrdering& ord,
                           const SeedSet& seeds)
    : g_(&g), ord_(&ord), seeds_(seeds) {
    if (ord.omega() > kMaxWidth)
        throw WidthGuardError(ord.omega(), kMaxWidth);
    is_seed_.assign(static_cast<size_t>(g.vertex_count()), 0);
    for (Vertex v : seeds_.members) is_seed_[static_cast<size_t>(v)] = 1;
    ctx_.graph = g_;
    ctx_.ordering = ord_;
    ctx_.is_seed = &is_seed_;
    ctx_.seed_last = ord.seed_last_touch(seeds_);
    shared_.resize(static_cast<size_t>(g.edge_count()) + 2);
    target_.resize(static_cast<size_t>(g.edge_count()) + 2);
    stats_.omega = ord.omega();
}

SccLink SpreadSolver::successive_link(int level, uint32_t state, const SccPartition& part,
                                      uint8_t comp, bool hi_branch, Link succ_link) {
    const SharedLevel& lvl = shared_[static_cast<size_t>(level)];
    const StateBits& bits = lvl.pool.states[state];
    const auto cur = ord_->frontier(level);
    const auto nxt = ord_->frontier(level + 1);
    const Edge& e = g_->edge(ord_->edge_at(level));

    if (hi_branch) {
        bool tail_seed_side = is_seed_[static_cast<size_t>(e.tail)] != 0;
        if (!tail_seed_side) {
            int tr = rank_of(cur, e.tail);
            tail_seed_side = tr >= 0 && !bits.row_present(tr);
        }
        if (tail_seed_side) {
            int hr = rank_of(cur, e.head);
            if (hr >= 0 && bits.row_present(hr) && part.scc_of[static_cast<size_t>(hr)] == comp)
                return {SccLink::kTop, 0};
        }
    }
    if (succ_link.kind == Link::kBottom) return {SccLink::kBottom, 0};

    const SharedLevel& next = shared_[static_cast<size_t>(level) + 1];
    // A member that stays in the frontier identifies the successor component.
    for (size_t r = 0; r < cur.size(); ++r) {
        if (part.scc_of[r] != comp) continue;
        int rn = rank_of(nxt, cur[r]);
        if (rn < 0) continue;
        const StateBits& succ = next.pool.states[succ_link.idx];
        if (!succ.row_present(rn)) return {SccLink::kTop, 0};  // reached under this branch
        return {SccLink::kScc, next.sccs[succ_link.idx].scc_of[static_cast<size_t>(rn)]};
    }

    // Every member retires with this edge: rebuild the member's own target
    // state, advance it one step, and continue in the anonymous-target lane.
    Vertex u = -1;
    for (size_t r = 0; r < cur.size(); ++r) {
        if (part.scc_of[r] == comp) {
            u = cur[r];
            break;
        }
    }
    StateBits phi = extract_target_state(bits, cur, u);
    TransitionResult tr = transition(phi, level, hi_branch, ctx_, TargetMode::Live, u);
    if (tr.kind == StateKind::Top) return {SccLink::kTop, 0};
    if (tr.kind == StateKind::Bottom) return {SccLink::kBottom, 0};
    TargetLevel& tlvl = target_[static_cast<size_t>(level) + 1];
    bool fresh = false;
    uint32_t idx = tlvl.pool.find_or_insert(anonymize_target(tr.bits), fresh);
    if (fresh) {
        tlvl.lo.emplace_back();
        tlvl.hi.emplace_back();
    }
    return {SccLink::kTc, idx};
}

void SpreadSolver::build_diagrams() {
    const int m = g_->edge_count();
    const double t0 = now_ms();

    bool fresh = false;
    SharedLevel& root = shared_[1];
    root.pool.find_or_insert(initial_shared_state(), fresh);
    root.lo.resize(1);
    root.hi.resize(1);
    root.sccs.push_back(shared_state_sccs(root.pool.states[0], 0));

    stats_.levels = m + 1;
    stats_.shared_per_level.assign(static_cast<size_t>(m) + 2, 0);
    stats_.target_per_level.assign(static_cast<size_t>(m) + 2, 0);
    stats_.shared_per_level[1] = 1;

    for (int i = 1; i <= m; ++i) {
        SharedLevel& lvl = shared_[static_cast<size_t>(i)];
        SharedLevel& nxtlvl = shared_[static_cast<size_t>(i) + 1];
        TargetLevel& tlvl = target_[static_cast<size_t>(i)];
        TargetLevel& tnxt = target_[static_cast<size_t>(i) + 1];
        const int next_width = static_cast<int>(ord_->frontier(i + 1).size());

        lvl.scc_offset.assign(lvl.pool.size() + 1, 0);
        for (uint32_t s = 0; s < lvl.pool.size(); ++s) {
            for (int branch = 0; branch < 2; ++branch) {
                TransitionResult tr =
                    transition(lvl.pool.states[s], i, branch == 1, ctx_, TargetMode::None, -1);
                Link link;
                if (tr.kind == StateKind::Bottom) {
                    link = {Link::kBottom, 0};
                } else {
                    link = {Link::kState, nxtlvl.pool.find_or_insert(tr.bits, fresh)};
                    if (fresh) {
                        nxtlvl.lo.emplace_back();
                        nxtlvl.hi.emplace_back();
                        nxtlvl.sccs.push_back(
                            shared_state_sccs(tr.bits, next_width));
                    }
                }
                (branch ? lvl.hi : lvl.lo)[s] = link;
            }
            const SccPartition& part = lvl.sccs[s];
            lvl.scc_offset[s + 1] = lvl.scc_offset[s] + static_cast<uint32_t>(part.count);
            for (uint8_t c = 0; c < part.count; ++c) {
                lvl.scc_lo.push_back(successive_link(i, s, part, c, false, lvl.lo[s]));
                lvl.scc_hi.push_back(successive_link(i, s, part, c, true, lvl.hi[s]));
            }
        }

        for (uint32_t s = 0; s < tlvl.pool.size(); ++s) {
            for (int branch = 0; branch < 2; ++branch) {
                TransitionResult tr =
                    transition(tlvl.pool.states[s], i, branch == 1, ctx_, TargetMode::Retired, -1);
                Link link;
                if (tr.kind == StateKind::Top) {
                    link = {Link::kTop, 0};
                } else if (tr.kind == StateKind::Bottom) {
                    link = {Link::kBottom, 0};
                } else {
                    link = {Link::kState, tnxt.pool.find_or_insert(tr.bits, fresh)};
                    if (fresh) {
                        tnxt.lo.emplace_back();
                        tnxt.hi.emplace_back();
                    }
                }
                (branch ? tlvl.hi : tlvl.lo)[s] = link;
            }
        }

        stats_.shared_per_level[static_cast<size_t>(i) + 1] = nxtlvl.pool.size();
        stats_.target_per_level[static_cast<size_t>(i) + 1] = tnxt.pool.size();
        stats_.peak_shared_states = std::max(stats_.peak_shared_states, nxtlvl.pool.size());
        stats_.peak_target_states = std::max(stats_.peak_target_states, tnxt.pool.size());
    }
    // shared_per_level carries both lanes' bound check
    for (int i = 1; i <= m + 1; ++i) {
        const double denom = std::ldexp(1.0, static_cast<int>(ord_->frontier(i).size()) *
                                                 static_cast<int>(ord_->frontier(i).size()));
        const double ratio =
            static_cast<double>(std::max(stats_.shared_per_level[static_cast<size_t>(i)],
                                         stats_.target_per_level[static_cast<size_t>(i)])) /
            denom;
        stats_.max_state_ratio = std::max(stats_.max_state_ratio, ratio);
    }
    stats_.build_ms = now_ms() - t0;
}

void SpreadSolver::run_p_dp() {
    const int m = g_->edge_count();
    const double t0 = now_ms();
    absorbed_ = 0.0;
    double mass_error = 0.0;
    shared_[1].p.assign(1, 1.0);
    for (int i = 1; i <= m; ++i) {
        SharedLevel& lvl = shared_[static_cast<size_t>(i)];
        SharedLevel& nxtlvl = shared_[static_cast<size_t>(i) + 1];
        nxtlvl.p.assign(nxtlvl.pool.size(), 0.0);
        double live = 0.0;
        for (double p : lvl.p) live += p;
        mass_error = std::max(mass_error, std::fabs(1.0 - (live + absorbed_)));

        const double pe = g_->edge(ord_->edge_at(i)).prob;
        for (uint32_t s = 0; s < lvl.pool.size(); ++s) {
            const double mass = lvl.p[s];
            const double shares[2] = {(1.0 - pe) * mass, pe * mass};
            const Link links[2] = {lvl.lo[s], lvl.hi[s]};
            for (int branch = 0; branch < 2; ++branch) {
                if (links[branch].kind == Link::kState)
                    nxtlvl.p[links[branch].idx] += shares[branch];
                else
                    absorbed_ += shares[branch];
            }
        }
    }
    {
        double live = 0.0;
        for (double p : shared_[static_cast<size_t>(m) + 1].p) live += p;
        mass_error = std::max(mass_error, std::fabs(1.0 - (live + absorbed_)));
    }
    stats_.mass_error = mass_error;
    stats_.pdp_ms = now_ms() - t0;
}

void SpreadSolver::run_q_dp() {
    const int m = g_->edge_count();
    const double t0 = now_ms();
    target_[static_cast<size_t>(m) + 1].q.assign(target_[static_cast<size_t>(m) + 1].pool.size(), 0.0);
    for (int i = m; i >= 1; --i) {
        TargetLevel& lvl = target_[static_cast<size_t>(i)];
        const TargetLevel& nxtlvl = target_[static_cast<size_t>(i) + 1];
        lvl.q.assign(lvl.pool.size(), 0.0);
        const double pe = g_->edge(ord_->edge_at(i)).prob;
        for (uint32_t s = 0; s < lvl.pool.size(); ++s) {
            auto value = [&](Link l) -> double {
                if (l.kind == Link::kTop) return 1.0;
                if (l.kind == Link::kBottom) return 0.0;
                return nxtlvl.q[l.idx];
            };
            lvl.q[s] = (1.0 - pe) * value(lvl.lo[s]) + pe * value(lvl.hi[s]);
        }
    }
    stats_.qdp_ms = now_ms() - t0;
}

void SpreadSolver::run_r_dp() {
    const int m = g_->edge_count();
    const double t0 = now_ms();
    for (int i = m; i >= 1; --i) {
        SharedLevel& lvl = shared_[static_cast<size_t>(i)];
        const SharedLevel& nxtshared = shared_[static_cast<size_t>(i) + 1];
        const TargetLevel& nxttarget = target_[static_cast<size_t>(i) + 1];
        lvl.r.assign(lvl.scc_lo.size(), 0.0);
        const double pe = g_->edge(ord_->edge_at(i)).prob;
        for (uint32_t s = 0; s < lvl.pool.size(); ++s) {
            for (uint32_t k = lvl.scc_offset[s]; k < lvl.scc_offset[s + 1]; ++k) {
                auto value = [&](const SccLink& l, Link succ) -> double {
                    switch (l.kind) {
                        case SccLink::kTop:
                            return 1.0;
                        case SccLink::kBottom:
                            return 0.0;
                        case SccLink::kTc:
                            return nxttarget.q[l.idx];
                        default: {  // successor component of the successor state
                            uint32_t succ_state = succ.idx;
                            return nxtshared.r[nxtshared.scc_offset[succ_state] + l.idx];
                        }
                    }
                };
                lvl.r[k] = (1.0 - pe) * value(lvl.scc_lo[k], lvl.lo[s]) +
                           pe * value(lvl.scc_hi[k], lvl.hi[s]);
            }
        }
    }
    stats_.rdp_ms = now_ms() - t0;
}

std::vector<std::pair<Vertex, double>> SpreadSolver::assemble() const {
    std::vector<std::pair<Vertex, double>> res;
    const Vertex n = g_->vertex_count();
    for (Vertex v = 0; v < n; ++v) {
        if (is_seed_[static_cast<size_t>(v)]) continue;
        const int first = ord_->introduced_at(v);
        const int last = ord_->retired_at(v);
        if (first > last) continue;  // never a frontier member; degree <= 1
        const SharedLevel& lvl = shared_[static_cast<size_t>(first)];
        const int rank = rank_of(ord_->frontier(first), v);
        double total = 0.0;
        for (uint32_t s = 0; s < lvl.pool.size(); ++s) {
            const StateBits& bits = lvl.pool.states[s];
            if (!bits.row_present(rank)) {
                total += lvl.p[s];  // already reached under this state
            } else {
                const uint8_t comp = lvl.sccs[s].scc_of[static_cast<size_t>(rank)];
                total += lvl.p[s] * lvl.r[lvl.scc_offset[s] + comp];
            }
        }
        res.emplace_back(v, total);
    }
    return res;
}

std::vector<std::pair<Vertex, double>> SpreadSolver::fix_degree_one(
    std::vector<std::pair<Vertex, double>> res) const {
    const Vertex n = g_->vertex_count();
    std::vector<int> only_edge(static_cast<size_t>(n), -1);
    for (int i = 0; i < g_->edge_count(); ++i) {
        const Edge& e = g_->edge(i);
        only_edge[static_cast<size_t>(e.tail)] = i;
        only_edge[static_cast<size_t>(e.head)] = i;
    }
    std::vector<double> known(static_cast<size_t>(n), -1.0);
    for (auto& [v, p] : res) known[static_cast<size_t>(v)] = p;

    for (Vertex v = 0; v < n; ++v) {
        if (is_seed_[static_cast<size_t>(v)] || g_->degree(v) != 1) continue;
        const Edge& e = g_->edge(only_edge[static_cast<size_t>(v)]);
        double p = 0.0;
        if (e.head == v) {
            const Vertex w = e.tail;
            double pw;
            if (is_seed_[static_cast<size_t>(w)])
                pw = 1.0;
            else if (known[static_cast<size_t>(w)] >= 0.0)
                pw = known[static_cast<size_t>(w)];
            else
                pw = 0.0;  // w itself is a degree-1 tail: nothing reaches it
            p = e.prob * pw;
        }
        res.emplace_back(v, p);
    }
    // isolated non-seed vertices are unreachable
    for (Vertex v = 0; v < n; ++v)
        if (!is_seed_[static_cast<size_t>(v)] && g_->degree(v) == 0) res.emplace_back(v, 0.0);
    return res;
}

std::vector<std::pair<Vertex, double>> SpreadSolver::solve() {
    build_diagrams();
    run_p_dp();
    run_q_dp();
    run_r_dp();
    const double t0 = now_ms();
    auto res = fix_degree_one(assemble());
    std::sort(res.begin(), res.end());
    stats_.assemble_ms = now_ms() - t0;
    return res;
}

std::string SpreadSolver::dump() const {
    std::ostringstream out;
    auto link_name = [](Link l) -> std::string {
        if (l.kind == Link::kTop) return "T";
        if (l.kind == Link::kBottom) return "B";
        return std::to_string(l.idx);
    };
    auto scc_link_name = [](const SccLink& l) -> std::string {
        switch (l.kind) {
            case SccLink::kTop:
                return "T";
            case SccLink::kBottom:
                return "B";
            case SccLink::kTc:
                return "t" + std::to_string(l.idx);
            default:
                return "s" + std::to_string(l.idx);
        }
    };
    auto hex = [](const std::string& raw) {
        static const char* digits = "0123456789abcdef";
        std::string out;
        for (unsigned char c : raw) {
            out.push_back(digits[c >> 4]);
            out.push_back(digits[c & 15]);
        }
        return out;
    };
    for (int i = 1; i <= level_count(); ++i) {
        const SharedLevel& lvl = shared_[static_cast<size_t>(i)];
        for (uint32_t s = 0; s < lvl.pool.size(); ++s) {
            out << i << " stc " << hex(canonical_encode(lvl.pool.states[s]));
            if (s < lvl.lo.size() && i <= g_->edge_count())
                out << " " << link_name(lvl.lo[s]) << " " << link_name(lvl.hi[s]);
            out << "\n";
            if (i <= g_->edge_count() && s + 1 < lvl.scc_offset.size()) {
                for (uint32_t k = lvl.scc_offset[s]; k < lvl.scc_offset[s + 1]; ++k)
                    out << i << " scc " << s << "." << (k - lvl.scc_offset[s]) << " "
                        << scc_link_name(lvl.scc_lo[k]) << " " << scc_link_name(lvl.scc_hi[k])
                        << "\n";
            }
        }
        const TargetLevel& tlvl = target_[static_cast<size_t>(i)];
        for (uint32_t s = 0; s < tlvl.pool.size(); ++s) {
            out << i << " tc " << hex(canonical_encode(tlvl.pool.states[s]));
            if (i <= g_->edge_count())
                out << " " << link_name(tlvl.lo[s]) << " " << link_name(tlvl.hi[s]);
            out << "\n";
        }
    }
    return out.str();
}

SpreadOutcome compute_spread(const UncertainDigraph& g, const SeedSet& s,
                             const SpreadOptions& opt) {
    SpreadOutcome outcome;
    if (opt.max_width > kMaxWidth)
        throw std::invalid_argument("max width above compiled limit " + std::to_string(kMaxWidth));

    std::vector<std::pair<Vertex, double>> all;
    auto comps = split_components(g, s);
    for (auto& comp : comps) {
        if (comp.seeds.empty()) {
            for (Vertex v = 0; v < comp.graph.vertex_count(); ++v)
                all.emplace_back(comp.to_global[static_cast<size_t>(v)], 0.0);
            continue;
        }
        SeedSet local_seeds = make_seed_set(comp.graph, comp.seeds);

        const double t0 = std::chrono::duration<double, std::milli>(
                              std::chrono::steady_clock::now().time_since_epoch())
                              .count();
        std::vector<Vertex> local_id(static_cast<size_t>(g.vertex_count()), -1);
        for (Vertex lv = 0; lv < comp.graph.vertex_count(); ++lv)
            local_id[static_cast<size_t>(comp.to_global[static_cast<size_t>(lv)])] = lv;

        EdgeOrdering ord;
        if (opt.ordering != nullptr) {
            // Restrict the global ordering to this component's edges; local
            // edge indices count the component's edges in global order, the
            // same order split_components emitted them.
            std::vector<int> local_of_global(static_cast<size_t>(g.edge_count()), -1);
            int li = 0;
            for (int gi = 0; gi < g.edge_count(); ++gi)
                if (local_id[static_cast<size_t>(g.edge(gi).tail)] >= 0)
                    local_of_global[static_cast<size_t>(gi)] = li++;
            std::vector<int> order;
            for (int gi : opt.ordering->order())
                if (local_of_global[static_cast<size_t>(gi)] >= 0)
                    order.push_back(local_of_global[static_cast<size_t>(gi)]);
            ord = EdgeOrdering(comp.graph, std::move(order));
        } else if (opt.decomposition != nullptr) {
            PathDecomposition local;
            for (const auto& bag : opt.decomposition->bags) {
                std::vector<Vertex> b;
                for (Vertex v : bag)
                    if (local_id[static_cast<size_t>(v)] >= 0) b.push_back(local_id[static_cast<size_t>(v)]);
                if (!b.empty()) {
                    std::sort(b.begin(), b.end());
                    local.bags.push_back(std::move(b));
                }
            }
            ord = ordering_from_decomposition(comp.graph, local);
        } else {
            ord = heuristic_ordering(comp.graph);
        }
        outcome.ordering_ms += std::chrono::duration<double, std::milli>(
                                   std::chrono::steady_clock::now().time_since_epoch())
                                   .count() -
                               t0;

        if (ord.omega() > opt.max_width) throw WidthGuardError(ord.omega(), opt.max_width);

        SpreadSolver solver(comp.graph, ord, local_seeds);
        auto probs = solver.solve();
        for (auto& [lv, p] : probs) all.emplace_back(comp.to_global[static_cast<size_t>(lv)], p);

        const SpreadStats& st = solver.stats();
        outcome.stats.omega = std::max(outcome.stats.omega, st.omega);
        outcome.stats.levels = std::max(outcome.stats.levels, st.levels);
        outcome.stats.peak_shared_states =
            std::max(outcome.stats.peak_shared_states, st.peak_shared_states);
        outcome.stats.peak_target_states =
            std::max(outcome.stats.peak_target_states, st.peak_target_states);
        outcome.stats.mass_error = std::max(outcome.stats.mass_error, st.mass_error);
        outcome.stats.max_state_ratio = std::max(outcome.stats.max_state_ratio, st.max_state_ratio);
        outcome.stats.build_ms += st.build_ms;
        outcome.stats.pdp_ms += st.pdp_ms;
        outcome.stats.qdp_ms += st.qdp_ms;
        outcome.stats.rdp_ms += st.rdp_ms;
        outcome.stats.assemble_ms += st.assemble_ms;
    }
    outcome.result = assemble_spread(g.vertex_count(), all, s);
    return outcome;
}

}  // namespace icspread
