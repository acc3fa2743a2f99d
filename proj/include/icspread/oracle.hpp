#pragma once

#include "icspread/ordering.hpp"

namespace icspread {

struct OracleResult {
    std::vector<double> probs;        // per vertex; seeds hold 1
    std::vector<uint64_t> contributing;  // subsets in which the vertex is reachable
    double sigma = 0.0;               // over non-seed vertices
    double sigma_with_seeds = 0.0;
    uint64_t subsets_evaluated = 0;
    double total_probability = 0.0;   // sums to 1 over all subsets
};

inline constexpr int kOracleEdgeLimit = 24;

// Exhaustive enumeration of every edge subset. Guarded to kOracleEdgeLimit
// edges.
OracleResult brute_force(const UncertainDigraph& g, const SeedSet& s);

// P(S~>v | the processed-edge prefix is fixed to `present`), enumerating all
// completions of the pending edges e_i..e_m. `present` holds edge ids from
// the first i-1 positions of the ordering.
std::vector<double> conditional_brute_force(const UncertainDigraph& g, const EdgeOrdering& ord,
                                            int level, const std::vector<int>& present);

struct MonteCarloResult {
    std::vector<double> probs;    // estimates; seeds hold 1
    std::vector<double> stderrs;  // per-vertex standard errors; seeds hold 0
    double sigma = 0.0;
    double sigma_with_seeds = 0.0;
    uint64_t samples = 0;
    uint64_t rng_seed = 0;
    const char* rng_name = "splitmix64";
};

MonteCarloResult monte_carlo(const UncertainDigraph& g, const SeedSet& s, uint64_t samples,
                             uint64_t rng_seed);

// Deterministic counter-style generator used by the estimator.
struct SplitMix64 {
    uint64_t state;
    explicit SplitMix64(uint64_t seed) : state(seed) {}
    uint64_t next() {
        uint64_t z = (state += 0x9e3779b97f4a7c15ull);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
        return z ^ (z >> 31);
    }
    double next_unit() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }
};

}  // namespace icspread
