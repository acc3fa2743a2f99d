#pragma once

#include "icspread/state_pool.hpp"

namespace icspread {

struct Link {
    enum Kind : uint8_t { kState = 0, kTop = 1, kBottom = 2 };
    uint8_t kind = kBottom;
    uint32_t idx = 0;
};

struct SingleTargetStats {
    int levels = 0;
    size_t peak_states = 0;
    int omega = 0;
    double mass_error = 0.0;
    double p_top = 0.0;
    double p_bottom = 0.0;
};

// Per-target diagram and its top-down sweep. The object owns reusable
// per-level storage so a caller can evaluate many targets on one graph and
// ordering without reallocating.
class TcDiagram {
public:
    TcDiagram(const UncertainDigraph& g, const EdgeOrdering& ord, const SeedSet& seeds);

    void build(Vertex target);
    double top_down();
    double run(Vertex target) {
        build(target);
        return top_down();
    }

    int level_count() const { return built_levels_; }
    size_t states_at(int level) const {
        return levels_[static_cast<size_t>(level)].pool.size();
    }
    const StateBits& state(int level, uint32_t idx) const {
        return levels_[static_cast<size_t>(level)].pool.states[idx];
    }
    Link lo(int level, uint32_t idx) const { return levels_[static_cast<size_t>(level)].lo[idx]; }
    Link hi(int level, uint32_t idx) const { return levels_[static_cast<size_t>(level)].hi[idx]; }
    double prob(int level, uint32_t idx) const { return levels_[static_cast<size_t>(level)].prob[idx]; }
    const SingleTargetStats& stats() const { return stats_; }

    std::string dump() const;

private:
    struct Level {
        StatePool pool;
        std::vector<Link> lo, hi;
        std::vector<double> prob;

        void reset() {
            pool.clear();
            lo.clear();
            hi.clear();
            prob.clear();
        }
    };

    const UncertainDigraph* g_;
    const EdgeOrdering* ord_;
    SeedSet seeds_;
    std::vector<uint8_t> is_seed_;
    TransitionContext ctx_;
    std::vector<Level> levels_;  // index 1..m+1
    int built_levels_ = 0;
    Vertex target_ = -1;
    SingleTargetStats stats_;
};

// Convenience wrapper for one-off queries.
double single_target_probability(const UncertainDigraph& g, const EdgeOrdering& ord,
                                 const SeedSet& seeds, Vertex target,
                                 SingleTargetStats* stats = nullptr);

}  // namespace icspread
