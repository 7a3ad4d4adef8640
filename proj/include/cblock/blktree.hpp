#pragma once

#include "cblock/canopy.hpp"
#include "cblock/hash.hpp"
#include "cblock/rational.hpp"
#include "cblock/record.hpp"

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace cblock {

enum class Language { Random, Single, Chain, ChainTree, BlkTree };
enum class Strategy { Optimistic, Pessimistic, Expected };

const char* language_name(Language l);
Language language_from_name(const std::string& name);
const char* strategy_name(Strategy s);
Strategy strategy_from_name(const std::string& name);

// Key under which a chain node sends every hash key to the same child
// (a width-1 tree level). Never a legal hash key: real keys are value-derived.
inline constexpr const char* kAnyKey = "*";

// A node hashes its canopy; children exist only for keys whose canopy was
// oversized at build time and was split further. An empty hash id marks a
// node that was oversized but unsplittable: records stop here and the
// apply-time random split bounds the canopy.
struct BlkNode {
    std::string hash_id;
    size_t size_at_build = 0;
    std::map<std::string, BlkNode> children;

    bool fallback() const { return hash_id.empty(); }
};

struct BuildLimits {
    int max_depth = 16;
    // A spec is rejected at a node if it leaves more than this many
    // oversized children.
    int max_oversized_children = 8;
    // Adaptive over-building: the tree is grown against bound S/build_factor
    // and walked only down to nodes still oversized under S at apply time.
    int build_factor = 1;
};

struct BlockingModel {
    Language language = Language::BlkTree;
    size_t max_size = 1;  // S, the apply-time bound
    uint64_t seed = 0;
    std::optional<BlkNode> root;
    std::vector<HashSpec> specs;  // every spec referenced by the tree

    const HashSpec& spec_by_id(const std::string& id) const;

    std::string to_json() const;
    static BlockingModel from_json(const std::string& text);
};

// ---- Greedy scoring ----

// Duplicate pairs estimated lost by hashing `canopy` with `spec` under size
// bound S. Let P_h be the pairs split across keys and C_1..C_k the child
// canopies larger than S with P(C_i) pairs inside and n_i = ceil(|C_i|/S):
//   optimistic  = P_h
//   pessimistic = P_h + sum P(C_i)
//   expected    = P_h + sum P(C_i)*(n_i-1)/n_i
Rational elim_count(const Dataset& dataset,
                    std::span<const RecordIdx> canopy,
                    std::span<const std::pair<RecordIdx, RecordIdx>> pairs,
                    const HashSpec& spec, size_t max_size, Strategy strategy);

// ---- Builders ----

BlockingModel build_blktree(const Dataset& dataset, const TrainingSet& pairs,
                            const std::vector<HashSpec>& space, size_t max_size,
                            Strategy strategy, const BuildLimits& limits = {},
                            uint64_t seed = 0);

// Best single hash by covered pairs; only pairs in canopies of size <= S
// count as covered (oversized canopies lose their pairs to the random split).
BlockingModel build_single_hash(const Dataset& dataset, const TrainingSet& pairs,
                                const std::vector<HashSpec>& space, size_t max_size,
                                uint64_t seed = 0);

// Greedy conjunction h1 ^ ... ^ hl; every step applies the chosen hash to
// every canopy, oversized or not.
BlockingModel build_chain(const Dataset& dataset, const TrainingSet& pairs,
                          const std::vector<HashSpec>& space, size_t max_size,
                          Strategy strategy, const BuildLimits& limits = {},
                          uint64_t seed = 0);

// One hash per level, applied only to canopies still oversized.
BlockingModel build_chain_tree(const Dataset& dataset, const TrainingSet& pairs,
                               const std::vector<HashSpec>& space, size_t max_size,
                               Strategy strategy, const BuildLimits& limits = {},
                               uint64_t seed = 0);

BlockingModel make_random_model(size_t max_size, uint64_t seed);

// Dispatch on language; strategy is ignored by random/single.
BlockingModel build_model(Language language, const Dataset& dataset,
                          const TrainingSet& pairs, const std::vector<HashSpec>& space,
                          size_t max_size, Strategy strategy,
                          const BuildLimits& limits = {}, uint64_t seed = 0);

// ---- Application ----

// Walks every record through the model and splits any canopy larger than
// max_size into ceil(|C|/max_size) seeded random parts ("#i" suffix), so the
// output is always feasible. Deterministic for a fixed seed and independent
// of the number of worker threads.
std::pair<RoundAssignment, CanopyStats> assign_canopies(const BlockingModel& model,
                                                        const Dataset& dataset,
                                                        uint64_t seed,
                                                        int threads = 1);

// Baseline R: each record drawn uniformly into one of ceil(|U|/S) canopies.
// A pure draw; canopy sizes may be unequal.
CanopyAssignment random_baseline(const Dataset& dataset, size_t max_size, uint64_t seed);

}  // namespace cblock
