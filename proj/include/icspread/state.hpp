#pragma once

#include <array>
#include <cstring>
#include <span>
#include <string>

#include "icspread/graph.hpp"
#include "icspread/ordering.hpp"

namespace icspread {

// Hard cap on frontier width. Rows and columns of a state fit in 16-bit
// words: up to kMaxWidth frontier columns plus the target column.
inline constexpr int kMaxWidth = 12;
inline constexpr int kTargetBit = 15;

enum class StateKind : uint8_t { Matrix = 0, Top = 1, Bottom = 2 };

// Reachability matrix over one level's frontier. Row r is present for every
// frontier vertex not yet reached from the seeds, plus a virtual seed row
// stored last. Columns cover the frontier vertices in col_mask (for target
// states those that cannot yet reach the target) in rank order; bit 15 of a
// row is the reachability into the target column. The matrix is transitively
// closed and reflexive on its diagonal, so byte equality is state equality.
struct StateBits {
    uint16_t row_mask = 0;
    uint16_t col_mask = 0;
    std::array<uint16_t, kMaxWidth + 1> rows{};  // present rows in rank order, then seed row

    int row_pos(int rank) const {
        return std::popcount(static_cast<unsigned>(row_mask & ((1u << rank) - 1u)));
    }
    int col_pos(int rank) const {
        return std::popcount(static_cast<unsigned>(col_mask & ((1u << rank) - 1u)));
    }
    int row_count() const { return std::popcount(static_cast<unsigned>(row_mask)); }
    uint16_t seed_row() const { return rows[static_cast<size_t>(row_count())]; }
    bool row_present(int rank) const { return (row_mask >> rank) & 1; }
    bool col_present(int rank) const { return (col_mask >> rank) & 1; }
    bool bit(int row_rank, int col_rank) const {
        return (rows[static_cast<size_t>(row_pos(row_rank))] >> col_pos(col_rank)) & 1;
    }
    bool seed_bit(int col_rank) const { return (seed_row() >> col_pos(col_rank)) & 1; }
    bool target_bit(int row_rank) const {
        return (rows[static_cast<size_t>(row_pos(row_rank))] >> kTargetBit) & 1;
    }
    bool seed_target_bit() const { return (seed_row() >> kTargetBit) & 1; }

    friend bool operator==(const StateBits& a, const StateBits& b) {
        return std::memcmp(&a, &b, sizeof(StateBits)) == 0;
    }
};
static_assert(sizeof(StateBits) == 2 * sizeof(uint16_t) + (kMaxWidth + 1) * sizeof(uint16_t));

struct StateHash {
    size_t operator()(const StateBits& s) const {
        uint64_t h = 0x9e3779b97f4a7c15ull;
        const auto* p = reinterpret_cast<const unsigned char*>(&s);
        for (size_t i = 0; i < sizeof(StateBits); i += 8) {
            uint64_t w = 0;
            std::memcpy(&w, p + i, std::min<size_t>(8, sizeof(StateBits) - i));
            h ^= w;
            h *= 0xff51afd7ed558ccdull;
            h ^= h >> 33;
        }
        return static_cast<size_t>(h);
    }
};

// What the target column of a state refers to.
//   None      - shared (targetless) states
//   Live      - a real vertex that may still gain incoming edges
//   Retired   - a real vertex with no pending incident edges, or the
//               anonymous standardized target; never prunable by new edges
enum class TargetMode : uint8_t { None, Live, Retired };

struct TransitionResult {
    StateKind kind = StateKind::Matrix;
    StateBits bits;
};

struct TransitionContext {
    const UncertainDigraph* graph = nullptr;
    const EdgeOrdering* ordering = nullptr;
    const std::vector<uint8_t>* is_seed = nullptr;  // per vertex
    int seed_last = 0;                              // i_S
};

// One step of the frontier DP: given the state before edge e_i, produce the
// state after deciding e_i's presence (hi) or absence (lo). Builds the small
// auxiliary reachability graph, closes it transitively, restricts it to the
// next frontier, and applies the terminal prunings.
//
// target:      the tracked vertex for target states, -1 for shared states or
//              the anonymous target
// target_mode: see TargetMode; Live requires target >= 0
TransitionResult transition(const StateBits& st, int level, bool hi,
                            const TransitionContext& ctx, TargetMode target_mode,
                            Vertex target);

// Initial states at level 1 (empty frontier): the seed row only.
StateBits initial_shared_state();
StateBits initial_target_state();

// Strongly connected components of the unreached-frontier graph of a shared
// state. scc_of[rank] is the component id for present rows (components are
// numbered by ascending minimum member rank) and 0xFF elsewhere.
struct SccPartition {
    std::array<uint8_t, kMaxWidth> scc_of{};
    int count = 0;
};
SccPartition shared_state_sccs(const StateBits& st, int width);

// Rebuild the target state for frontier vertex u from a shared state:
// columns whose vertex can already reach u are dropped and u becomes the
// target column. u must be an unreached frontier member.
StateBits extract_target_state(const StateBits& st, std::span<const Vertex> frontier, Vertex u);

// Forget which vertex the target column belonged to so structurally
// identical states collide. The packed form never stores the target id, so
// this is the identity; it exists to make the standardization step explicit.
inline StateBits anonymize_target(const StateBits& st) { return st; }

// Deterministic byte encoding; equal states encode equally and the terminal
// kinds encode as a single byte.
std::string canonical_encode(StateKind kind, const StateBits& bits);
inline std::string canonical_encode(const StateBits& bits) {
    return canonical_encode(StateKind::Matrix, bits);
}

}  // namespace icspread
