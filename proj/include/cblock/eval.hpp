#pragma once

#include "cblock/blktree.hpp"
#include "cblock/record.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace cblock {

struct CvConfig {
    size_t max_size = 1000;
    Language language = Language::BlkTree;
    Strategy strategy = Strategy::Optimistic;
    int rounds = 1;
    int folds = 5;
    uint64_t seed = 42;
    BuildLimits limits{};
};

struct CvReport {
    struct Fold {
        double train_recall = 0.0;
        double test_recall = 0.0;
    };
    std::vector<Fold> per_fold;
    double mean_test_recall = 0.0;
    CvConfig config;

    std::string to_json() const;
};

// Seeded k-way split of the pairs; each fold trains on the rest, blocks the
// full dataset, and measures recall on the held-out pairs. Throws when
// |pairs| < folds.
CvReport cross_validate(const Dataset& dataset, const TrainingSet& pairs,
                        const std::vector<HashSpec>& space, const CvConfig& config);

struct ExperimentConfig {
    std::vector<size_t> max_sizes;
    std::vector<Language> languages;
    std::vector<Strategy> strategies;  // applies to chain/chaintree/blktree
    int rounds = 5;                    // non-disjoint rounds per cell
    int folds = 0;                     // 0 = train and measure on all pairs
    uint64_t seed = 42;
    bool measure_time = false;         // timing breaks byte-determinism; opt-in
    BuildLimits limits{};
};

// One row per (cell, fold, cumulative round): recall after rounds 1..r, so
// rounds=1 is the disjoint result and the last row the non-disjoint one.
struct ExperimentRow {
    size_t max_size = 0;
    Language language = Language::Random;
    std::optional<Strategy> strategy;  // empty for random/single
    int rounds = 1;
    int fold = -1;  // -1 = trained and measured on all pairs
    double recall = 0.0;
    std::optional<double> apply_us_per_record;
};

struct ExperimentReport {
    std::vector<ExperimentRow> rows;

    // Columns: S,language,strategy,rounds,fold,recall,apply_us_per_record.
    std::string to_csv() const;
};

ExperimentReport run_experiment(const Dataset& dataset, const TrainingSet& pairs,
                                const std::vector<HashSpec>& space,
                                const ExperimentConfig& config);

}  // namespace cblock
