#pragma once

#include <unordered_map>

#include "icspread/state.hpp"

namespace icspread {

// Hash-consed set of states for one diagram level. Small levels are scanned
// linearly; the map is built lazily once a level grows past the threshold.
struct StatePool {
    static constexpr size_t kLinearScanLimit = 32;

    std::vector<StateBits> states;
    std::unordered_map<StateBits, uint32_t, StateHash> index;
    bool indexed = false;

    void clear() {
        states.clear();
        if (indexed) {
            index.clear();
            indexed = false;
        }
    }

    size_t size() const { return states.size(); }

    uint32_t find_or_insert(const StateBits& bits, bool& inserted) {
        if (!indexed) {
            if (states.size() < kLinearScanLimit) {
                for (size_t i = 0; i < states.size(); ++i) {
                    if (states[i] == bits) {
                        inserted = false;
                        return static_cast<uint32_t>(i);
                    }
                }
            } else {
                for (size_t i = 0; i < states.size(); ++i)
                    index.emplace(states[i], static_cast<uint32_t>(i));
                indexed = true;
            }
        }
        if (indexed) {
            auto [it, fresh] = index.emplace(bits, static_cast<uint32_t>(states.size()));
            if (!fresh) {
                inserted = false;
                return it->second;
            }
        }
        inserted = true;
        states.push_back(bits);
        return static_cast<uint32_t>(states.size() - 1);
    }
};

}  // namespace icspread
