#include "cblock/multiround.hpp"

#include "cblock/error.hpp"
#include "model_json.hpp"

#include <json.hpp>

#include <algorithm>

namespace cblock {

using nlohmann::json;

MultiRoundModel train_multi_round(const Dataset& dataset, const TrainingSet& pairs,
                                  const std::vector<HashSpec>& space, size_t max_size,
                                  Language language, int max_rounds, Strategy strategy,
                                  uint64_t seed, const BuildLimits& limits) {
    if (max_rounds < 1) throw validation_error("max_rounds must be >= 1");

    MultiRoundModel model;
    // residual: positions into pairs.pairs not yet covered
    std::vector<size_t> residual(pairs.size());
    for (size_t i = 0; i < residual.size(); ++i) residual[i] = i;

    for (int round = 0; round < max_rounds && !residual.empty(); ++round) {
        TrainingSet round_pairs;
        for (size_t i : residual) round_pairs.pairs.push_back(pairs.pairs[i]);

        BlockingModel round_model = build_model(language, dataset, round_pairs, space,
                                                max_size, strategy, limits, seed);
        auto [assign, _] =
            assign_canopies(round_model, dataset, seed + static_cast<uint64_t>(round));

        std::vector<size_t> covered;
        std::vector<size_t> next;
        for (size_t i : residual) {
            const auto& [a, b] = pairs.pairs[i];
            if (assign.canopy_of[a] == assign.canopy_of[b]) {
                covered.push_back(i);
            } else {
                next.push_back(i);
            }
        }
        model.rounds.push_back(std::move(round_model));
        model.covered_per_round.push_back(std::move(covered));
        if (model.covered_per_round.back().empty()) break;  // change = false
        residual = std::move(next);
    }
    return model;
}

CanopyAssignment assign_multi_round(const MultiRoundModel& model, const Dataset& dataset,
                                    uint64_t seed, int threads) {
    CanopyAssignment assign;
    for (size_t r = 0; r < model.rounds.size(); ++r) {
        auto [round, _] = assign_canopies(model.rounds[r], dataset,
                                          seed + static_cast<uint64_t>(r), threads);
        assign.rounds.push_back(std::move(round));
    }
    return assign;
}

unsigned long long nondisjoint_cost(const std::vector<size_t>& canopy_sizes) {
    if (canopy_sizes.empty()) throw validation_error("cost undefined on an empty canopy set");
    unsigned long long max_sq = 0;
    unsigned long long total = 0;
    for (size_t s : canopy_sizes) {
        const unsigned long long sq =
            static_cast<unsigned long long>(s) * static_cast<unsigned long long>(s);
        max_sq = std::max(max_sq, sq);
        total += s;
    }
    return max_sq + total;
}

unsigned long long nondisjoint_cost(const std::vector<CanopyStats>& per_round) {
    std::vector<size_t> sizes;
    for (const auto& stats : per_round) {
        for (const auto& [_, s] : stats.sizes) sizes.push_back(s);
    }
    return nondisjoint_cost(sizes);
}

std::string MultiRoundModel::to_json() const {
    json rounds_json = json::array();
    for (const auto& round : rounds) rounds_json.push_back(detail::model_to_json(round));
    json covered = json::array();
    for (const auto& c : covered_per_round) covered.push_back(c);
    return json{{"rounds", rounds_json}, {"covered_per_round", covered}}.dump(2) + "\n";
}

MultiRoundModel MultiRoundModel::from_json(const std::string& text) {
    try {
        json j = json::parse(text);
        MultiRoundModel model;
        for (const json& round : j.at("rounds")) {
            model.rounds.push_back(detail::model_from_json(round));
        }
        if (j.contains("covered_per_round")) {
            for (const json& c : j["covered_per_round"]) {
                model.covered_per_round.push_back(c.get<std::vector<size_t>>());
            }
        }
        return model;
    } catch (const json::exception& e) {
        throw validation_error(std::string("bad multi-round model JSON: ") + e.what());
    }
}

}  // namespace cblock
