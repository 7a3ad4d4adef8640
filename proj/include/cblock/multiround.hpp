#pragma once

#include "cblock/blktree.hpp"
#include "cblock/canopy.hpp"
#include "cblock/record.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace cblock {

// Non-disjoint blocking as rounds of disjoint blocking, each round trained
// on the pairs the earlier rounds did not cover.
struct MultiRoundModel {
    std::vector<BlockingModel> rounds;
    // pair indices (into the training set) first covered by each round
    std::vector<std::vector<size_t>> covered_per_round;

    std::string to_json() const;
    static MultiRoundModel from_json(const std::string& text);
};

// Loop: train on the residual, evaluate the round's assignment on the
// training dataset, subtract the covered pairs; stop when the residual is
// empty, a round covers nothing new, or max_rounds is reached. Round r's
// random-split fallback uses seed + r.
MultiRoundModel train_multi_round(const Dataset& dataset, const TrainingSet& pairs,
                                  const std::vector<HashSpec>& space, size_t max_size,
                                  Language language, int max_rounds, Strategy strategy,
                                  uint64_t seed, const BuildLimits& limits = {});

// One round per model, round r applied with seed + r.
CanopyAssignment assign_multi_round(const MultiRoundModel& model, const Dataset& dataset,
                                    uint64_t seed, int threads = 1);

// Communication + computation cost of a canopy multiset (all rounds pooled):
// max |C_i|^2 + sum |C_i|. Throws on an empty canopy set.
unsigned long long nondisjoint_cost(const std::vector<size_t>& canopy_sizes);
unsigned long long nondisjoint_cost(const std::vector<CanopyStats>& per_round);

}  // namespace cblock
