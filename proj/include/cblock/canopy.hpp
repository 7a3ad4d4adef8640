#pragma once

#include "cblock/record.hpp"

#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace cblock {

using CanopyIdx = uint32_t;

// One disjoint round: every record maps to exactly one canopy. Canopy ids
// are interned; names[canopy_of[r]] is record r's canopy id.
struct RoundAssignment {
    std::vector<std::string> names;
    std::vector<CanopyIdx> canopy_of;  // indexed by RecordIdx

    size_t canopy_count() const { return names.size(); }

    // Canopy sizes, indexed like names.
    std::vector<size_t> sizes() const {
        std::vector<size_t> s(names.size(), 0);
        for (CanopyIdx c : canopy_of) s[c]++;
        return s;
    }
};

struct CanopyAssignment {
    std::vector<RoundAssignment> rounds;
};

// Per-round canopy sizes keyed by canopy id (the external view).
struct CanopyStats {
    std::map<std::string, size_t> sizes;

    size_t total() const {
        size_t t = 0;
        for (const auto& [_, n] : sizes) t += n;
        return t;
    }
};

CanopyStats stats_of(const RoundAssignment& round);

// Fraction of pairs co-blocked in at least one round (union over rounds).
// Throws if pairs is empty: recall is undefined.
double recall(const CanopyAssignment& assign, const TrainingSet& pairs);

// True for each pair index i iff pair i is co-blocked in some round.
std::vector<bool> covered_pairs(const CanopyAssignment& assign, const TrainingSet& pairs);

// Throws unless every round covers every record exactly once.
void check_covering(const CanopyAssignment& assign, const Dataset& dataset);

}  // namespace cblock
