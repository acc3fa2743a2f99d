#include "icspread/single_target.hpp"

#include <cmath>
#include <sstream>

namespace icspread {

TcDiagram::TcDiagram(const UncertainDigraph& g, const EdgeOrdering& ord, const SeedSet& seeds)
    : g_(&g), ord_(&ord), seeds_(seeds) {
    is_seed_.assign(static_cast<size_t>(g.vertex_count()), 0);
    for (Vertex v : seeds_.members) is_seed_[static_cast<size_t>(v)] = 1;
    ctx_.graph = g_;
    ctx_.ordering = ord_;
    ctx_.is_seed = &is_seed_;
    ctx_.seed_last = ord.seed_last_touch(seeds_);
    levels_.resize(static_cast<size_t>(g.edge_count()) + 2);
}

void TcDiagram::build(Vertex target) {
    if (seeds_.contains(target)) throw std::invalid_argument("target is a seed vertex");
    const int m = g_->edge_count();
    for (int i = 1; i <= built_levels_; ++i) levels_[static_cast<size_t>(i)].reset();
    target_ = target;
    stats_ = {};
    stats_.omega = ord_->omega();

    bool fresh = false;
    levels_[1].pool.find_or_insert(initial_target_state(), fresh);
    levels_[1].lo.resize(1);
    levels_[1].hi.resize(1);
    built_levels_ = 1;
    stats_.peak_states = 1;
    for (int i = 1; i <= m; ++i) {
        Level& curlvl = levels_[static_cast<size_t>(i)];
        if (curlvl.pool.size() == 0) break;
        Level& nxtlvl = levels_[static_cast<size_t>(i) + 1];
        built_levels_ = i + 1;
        for (uint32_t s = 0; s < curlvl.pool.size(); ++s) {
            for (int branch = 0; branch < 2; ++branch) {
                TransitionResult tr =
                    transition(curlvl.pool.states[s], i, branch == 1, ctx_, TargetMode::Live, target);
                Link link;
                if (tr.kind == StateKind::Top) {
                    link = {Link::kTop, 0};
                } else if (tr.kind == StateKind::Bottom) {
                    link = {Link::kBottom, 0};
                } else {
                    link = {Link::kState, nxtlvl.pool.find_or_insert(tr.bits, fresh)};
                    if (fresh) {
                        nxtlvl.lo.emplace_back();
                        nxtlvl.hi.emplace_back();
                    }
                }
                (branch ? curlvl.hi : curlvl.lo)[s] = link;
            }
        }
        stats_.peak_states = std::max(stats_.peak_states, nxtlvl.pool.size());
    }
    stats_.levels = built_levels_;
}

double TcDiagram::top_down() {
    double p_top = 0.0, p_bottom = 0.0, mass_error = 0.0;
    levels_[1].prob.assign(1, 1.0);
    for (int i = 1; i < built_levels_; ++i) {
        Level& curlvl = levels_[static_cast<size_t>(i)];
        Level& nxtlvl = levels_[static_cast<size_t>(i) + 1];
        nxtlvl.prob.assign(nxtlvl.pool.size(), 0.0);
        double live = 0.0;
        for (double p : curlvl.prob) live += p;
        mass_error = std::max(mass_error, std::fabs(1.0 - (live + p_top + p_bottom)));

        const double pe = g_->edge(ord_->edge_at(i)).prob;
        for (uint32_t s = 0; s < curlvl.pool.size(); ++s) {
            const double mass = curlvl.prob[s];
            const double shares[2] = {(1.0 - pe) * mass, pe * mass};
            const Link links[2] = {curlvl.lo[s], curlvl.hi[s]};
            for (int branch = 0; branch < 2; ++branch) {
                switch (links[branch].kind) {
                    case Link::kState:
                        nxtlvl.prob[links[branch].idx] += shares[branch];
                        break;
                    case Link::kTop:
                        p_top += shares[branch];
                        break;
                    case Link::kBottom:
                        p_bottom += shares[branch];
                        break;
                }
            }
        }
    }
    {
        double live = 0.0;
        for (double p : levels_[static_cast<size_t>(built_levels_)].prob) live += p;
        mass_error = std::max(mass_error, std::fabs(1.0 - (live + p_top + p_bottom)));
    }
    stats_.mass_error = mass_error;
    stats_.p_top = p_top;
    stats_.p_bottom = p_bottom;
    return p_top;
}

std::string TcDiagram::dump() const {
    std::ostringstream out;
    auto link_name = [](Link l) -> std::string {
        if (l.kind == Link::kTop) return "T";
        if (l.kind == Link::kBottom) return "B";
        return std::to_string(l.idx);
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
    for (int i = 1; i <= built_levels_; ++i) {
        const Level& lvl = levels_[static_cast<size_t>(i)];
        for (uint32_t s = 0; s < lvl.pool.size(); ++s) {
            out << i << " tc " << hex(canonical_encode(lvl.pool.states[s])) << " "
                << link_name(lvl.lo[s]) << " " << link_name(lvl.hi[s]) << "\n";
        }
    }
    return out.str();
}

double single_target_probability(const UncertainDigraph& g, const EdgeOrdering& ord,
                                 const SeedSet& seeds, Vertex target,
                                 SingleTargetStats* stats) {
    if (seeds.contains(target)) throw std::invalid_argument("target is a seed vertex");
    if (g.edge_count() == 0) return 0.0;
    TcDiagram diagram(g, ord, seeds);
    double p = diagram.run(target);
    if (stats) *stats = diagram.stats();
    return p;
}

}  // namespace icspread
