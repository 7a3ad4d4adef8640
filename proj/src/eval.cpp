#include "cblock/eval.hpp"

#include "cblock/error.hpp"
#include "cblock/multiround.hpp"
#include "cblock/rng.hpp"

#include <json.hpp>

#include <chrono>
#include <cstdio>

namespace cblock {

namespace {

using nlohmann::json;

// seeded k-way split of pair positions; fold sizes differ by at most one
std::vector<std::vector<size_t>> split_folds(size_t n, int folds, uint64_t seed) {
    std::vector<size_t> order(n);
    for (size_t i = 0; i < n; ++i) order[i] = i;
    Rng rng(seed);
    rng.shuffle(order);

    std::vector<std::vector<size_t>> out(static_cast<size_t>(folds));
    const size_t k = static_cast<size_t>(folds);
    for (size_t f = 0; f < k; ++f) {
        const size_t lo = f * n / k;
        const size_t hi = (f + 1) * n / k;
        out[f].assign(order.begin() + static_cast<long>(lo),
                      order.begin() + static_cast<long>(hi));
    }
    return out;
}

TrainingSet subset(const TrainingSet& pairs, const std::vector<size_t>& positions) {
    TrainingSet out;
    out.pairs.reserve(positions.size());
    for (size_t i : positions) out.pairs.push_back(pairs.pairs[i]);
    return out;
}

std::string format_double(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.6f", v);
    return buf;
}

}  // namespace

CvReport cross_validate(const Dataset& dataset, const TrainingSet& pairs,
                        const std::vector<HashSpec>& space, const CvConfig& config) {
    if (config.folds < 2) throw validation_error("cross-validation needs >= 2 folds");
    if (pairs.size() < static_cast<size_t>(config.folds)) {
        throw validation_error("not enough pairs for " + std::to_string(config.folds) +
                               "-fold cross-validation");
    }

    auto folds = split_folds(pairs.size(), config.folds, config.seed);

    CvReport report;
    report.config = config;
    double sum = 0.0;
    for (size_t f = 0; f < folds.size(); ++f) {
        std::vector<size_t> train_pos;
        for (size_t g = 0; g < folds.size(); ++g) {
            if (g == f) continue;
            train_pos.insert(train_pos.end(), folds[g].begin(), folds[g].end());
        }
        std::sort(train_pos.begin(), train_pos.end());
        TrainingSet train = subset(pairs, train_pos);
        TrainingSet test = subset(pairs, folds[f]);

        MultiRoundModel model =
            train_multi_round(dataset, train, space, config.max_size, config.language,
                              config.rounds, config.strategy, config.seed, config.limits);
        CanopyAssignment assign = assign_multi_round(model, dataset, config.seed);

        CvReport::Fold fold;
        fold.train_recall = recall(assign, train);
        fold.test_recall = recall(assign, test);
        sum += fold.test_recall;
        report.per_fold.push_back(fold);
    }
    report.mean_test_recall = sum / static_cast<double>(folds.size());
    return report;
}

std::string CvReport::to_json() const {
    json folds = json::array();
    for (const auto& f : per_fold) {
        folds.push_back({{"train_recall", f.train_recall}, {"test_recall", f.test_recall}});
    }
    json j{{"folds", folds},
           {"mean_test_recall", mean_test_recall},
           {"config",
            {{"max_size", config.max_size},
             {"language", language_name(config.language)},
             {"strategy", strategy_name(config.strategy)},
             {"rounds", config.rounds},
             {"folds", config.folds},
             {"seed", config.seed}}}};
    return j.dump(2) + "\n";
}

ExperimentReport run_experiment(const Dataset& dataset, const TrainingSet& pairs,
                                const std::vector<HashSpec>& space,
                                const ExperimentConfig& config) {
    ExperimentReport report;

    std::vector<std::vector<size_t>> folds;
    if (config.folds > 0) {
        if (pairs.size() < static_cast<size_t>(config.folds)) {
            throw validation_error("not enough pairs for the requested folds");
        }
        folds = split_folds(pairs.size(), config.folds, config.seed);
    }

    for (size_t max_size : config.max_sizes) {
        for (Language language : config.languages) {
            const bool uses_strategy = language == Language::Chain ||
                                       language == Language::ChainTree ||
                                       language == Language::BlkTree;
            std::vector<std::optional<Strategy>> strategies;
            if (uses_strategy) {
                for (Strategy s : config.strategies) strategies.emplace_back(s);
            } else {
                strategies.emplace_back(std::nullopt);
            }

            for (const auto& strategy : strategies) {
                const int n_folds = config.folds > 0 ? config.folds : 1;
                for (int f = 0; f < n_folds; ++f) {
                    TrainingSet train;
                    TrainingSet measured;
                    int fold_tag = -1;
                    if (config.folds > 0) {
                        std::vector<size_t> train_pos;
                        for (int g = 0; g < config.folds; ++g) {
                            if (g == f) continue;
                            train_pos.insert(train_pos.end(),
                                             folds[static_cast<size_t>(g)].begin(),
                                             folds[static_cast<size_t>(g)].end());
                        }
                        std::sort(train_pos.begin(), train_pos.end());
                        train = subset(pairs, train_pos);
                        measured = subset(pairs, folds[static_cast<size_t>(f)]);
                        fold_tag = f;
                    } else {
                        train = pairs;
                        measured = pairs;
                    }

                    MultiRoundModel model = train_multi_round(
                        dataset, train, space, max_size, language, config.rounds,
                        strategy.value_or(Strategy::Optimistic), config.seed,
                        config.limits);
                    CanopyAssignment assign = assign_multi_round(model, dataset, config.seed);

                    std::optional<double> us_per_record;
                    if (config.measure_time && dataset.size() > 0 && !model.rounds.empty()) {
                        const auto t0 = std::chrono::steady_clock::now();
                        CanopyAssignment timed = assign_multi_round(model, dataset, config.seed);
                        const auto t1 = std::chrono::steady_clock::now();
                        const double us =
                            std::chrono::duration<double, std::micro>(t1 - t0).count();
                        us_per_record = us / static_cast<double>(dataset.size() *
                                                                 timed.rounds.size());
                    }

                    CanopyAssignment partial;
                    for (size_t r = 0; r < assign.rounds.size(); ++r) {
                        partial.rounds.push_back(assign.rounds[r]);
                        ExperimentRow row;
                        row.max_size = max_size;
                        row.language = language;
                        row.strategy = strategy;
                        row.rounds = static_cast<int>(r + 1);
                        row.fold = fold_tag;
                        row.recall = recall(partial, measured);
                        row.apply_us_per_record = us_per_record;
                        report.rows.push_back(row);
                    }
                }
            }
        }
    }
    return report;
}

std::string ExperimentReport::to_csv() const {
    std::string out = "S,language,strategy,rounds,fold,recall,apply_us_per_record\n";
    for (const ExperimentRow& row : rows) {
        out += std::to_string(row.max_size);
        out += ',';
        out += language_name(row.language);
        out += ',';
        out += row.strategy ? strategy_name(*row.strategy) : "-";
        out += ',';
        out += std::to_string(row.rounds);
        out += ',';
        out += std::to_string(row.fold);
        out += ',';
        out += format_double(row.recall);
        out += ',';
        if (row.apply_us_per_record) out += format_double(*row.apply_us_per_record);
        out += '\n';
    }
    return out;
}

}  // namespace cblock
