#pragma once

#include "icspread/single_target.hpp"

namespace icspread {

struct SccLink {
    enum Kind : uint8_t { kScc = 0, kTc = 1, kTop = 2, kBottom = 3 };
    uint8_t kind = kBottom;
    uint32_t idx = 0;  // component id in the successor shared state, or target state index
};

struct SpreadStats {
    int omega = 0;
    int levels = 0;
    size_t peak_shared_states = 0;
    size_t peak_target_states = 0;
    double mass_error = 0.0;
    // States per level relative to 2^(w_i^2), maximized over levels; the
    // shared and target lanes each stay below a small constant.
    double max_state_ratio = 0.0;
    std::vector<size_t> shared_per_level;
    std::vector<size_t> target_per_level;
    double build_ms = 0.0, pdp_ms = 0.0, qdp_ms = 0.0, rdp_ms = 0.0, assemble_ms = 0.0;
};

// Computes P(S~>v) for every non-seed vertex in one pass over the edge
// ordering: a diagram of shared (targetless) states drives everything, each
// state's unreached-frontier components carry successor links, components
// whose vertices retire are rewritten as anonymous-target states, and three
// sweeps (state mass top-down, target reachability bottom-up, component
// reachability bottom-up) feed the final per-vertex sums. Degree-1 vertices
// never enter the frontier and are resolved from their neighbor afterwards.
class SpreadSolver {
public:
    SpreadSolver(const UncertainDigraph& g, const EdgeOrdering& ord, const SeedSet& seeds);

    std::vector<std::pair<Vertex, double>> solve();

    void build_diagrams();
    void run_p_dp();
    void run_q_dp();
    void run_r_dp();
    std::vector<std::pair<Vertex, double>> assemble() const;
    std::vector<std::pair<Vertex, double>> fix_degree_one(
        std::vector<std::pair<Vertex, double>> res) const;

    const SpreadStats& stats() const { return stats_; }
    std::string dump() const;

    struct SharedLevel {
        StatePool pool;
        std::vector<Link> lo, hi;
        std::vector<SccPartition> sccs;
        std::vector<uint32_t> scc_offset;  // per state; sized states+1 once linked
        std::vector<SccLink> scc_lo, scc_hi;
        std::vector<double> p;  // state mass
        std::vector<double> r;  // per component, parallel to scc_offset
    };
    struct TargetLevel {
        StatePool pool;
        std::vector<Link> lo, hi;
        std::vector<double> q;  // conditional target reachability
    };

    int level_count() const { return static_cast<int>(shared_.size()) - 1; }
    const SharedLevel& shared_level(int i) const { return shared_[static_cast<size_t>(i)]; }
    const TargetLevel& target_level(int i) const { return target_[static_cast<size_t>(i)]; }
    double absorbed_mass() const { return absorbed_; }

private:
    SccLink successive_link(int level, uint32_t state, const SccPartition& part, uint8_t comp,
                            bool hi_branch, Link succ_link);

    const UncertainDigraph* g_;
    const EdgeOrdering* ord_;
    SeedSet seeds_;
    std::vector<uint8_t> is_seed_;
    TransitionContext ctx_;
    std::vector<SharedLevel> shared_;  // index 1..m+1
    std::vector<TargetLevel> target_;
    double absorbed_ = 0.0;
    SpreadStats stats_;
};

struct WidthGuardError : std::runtime_error {
    WidthGuardError(int omega, int max_width)
        : std::runtime_error("frontier width " + std::to_string(omega) +
                             " exceeds the configured maximum " + std::to_string(max_width) +
                             "; state counts grow like 2^(w^2)"),
          omega(omega),
          max_width(max_width) {}
    int omega;
    int max_width;
};

struct SpreadOptions {
    int max_width = 8;
    const EdgeOrdering* ordering = nullptr;          // over the whole graph
    const PathDecomposition* decomposition = nullptr;  // over the whole graph
};

struct SpreadOutcome {
    SpreadResult result;
    SpreadStats stats;
    double ordering_ms = 0.0;
};

// Full pipeline: weak-component split, per-component ordering (restricted
// from the provided one when given, heuristic otherwise), width guard, the
// all-targets solver per seeded component, zero fill for seedless
// components, and the final aggregation.
SpreadOutcome compute_spread(const UncertainDigraph& g, const SeedSet& s,
                             const SpreadOptions& opt = {});

}  // namespace icspread
