#include "cblock/canopy.hpp"

#include "cblock/error.hpp"

namespace cblock {

CanopyStats stats_of(const RoundAssignment& round) {
    CanopyStats stats;
    auto sizes = round.sizes();
    for (size_t c = 0; c < round.names.size(); ++c) {
        stats.sizes[round.names[c]] = sizes[c];
    }
    return stats;
}

std::vector<bool> covered_pairs(const CanopyAssignment& assign, const TrainingSet& pairs) {
    std::vector<bool> covered(pairs.size(), false);
    for (const auto& round : assign.rounds) {
        for (size_t i = 0; i < pairs.size(); ++i) {
            if (covered[i]) continue;
            const auto& [a, b] = pairs.pairs[i];
            if (round.canopy_of[a] == round.canopy_of[b]) covered[i] = true;
        }
    }
    return covered;
}

double recall(const CanopyAssignment& assign, const TrainingSet& pairs) {
    if (pairs.empty()) {
        throw validation_error("recall undefined on an empty training set");
    }
    auto covered = covered_pairs(assign, pairs);
    size_t hit = 0;
    for (bool c : covered) hit += c;
    return static_cast<double>(hit) / static_cast<double>(pairs.size());
}

void check_covering(const CanopyAssignment& assign, const Dataset& dataset) {
    for (size_t r = 0; r < assign.rounds.size(); ++r) {
        const auto& round = assign.rounds[r];
        if (round.canopy_of.size() != dataset.size()) {
            throw validation_error("round " + std::to_string(r) +
                                   " does not cover every record");
        }
        for (CanopyIdx c : round.canopy_of) {
            if (c >= round.names.size()) {
                throw validation_error("round " + std::to_string(r) +
                                       " references an unnamed canopy");
            }
        }
    }
}

}  // namespace cblock
