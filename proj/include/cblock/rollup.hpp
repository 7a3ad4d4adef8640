#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <utility>
#include <vector>

namespace cblock {

// Roll-up is defined on one disjoint round of canopies; record ids are
// opaque strings here so the CLI can run it straight off an assignment TSV.
using IdPair = std::pair<std::string, std::string>;

struct InputCanopy {
    std::string id;
    std::vector<std::string> members;
};

struct RollupPlan {
    // final canopy id -> input canopy ids (sorted); singleton groups keep
    // their original id, merged groups are named "roll(a+b+...)".
    std::map<std::string, std::vector<std::string>> groups;
    size_t merged_pairs_gained = 0;

    // input canopy id -> final canopy id
    std::map<std::string, std::string> remap() const;
};

// Number of pairs with one endpoint in each canopy. Throws if they overlap.
size_t benefit(const std::vector<std::string>& d1, const std::vector<std::string>& d2,
               const std::vector<IdPair>& pairs);

// Greedy roll-up: repeatedly merge the feasible pair (|D1|+|D2| <= S)
// maximizing benefit/min(|D1|,|D2|), ratio ties broken by lexicographically
// smallest (id1,id2). min_benefit = 0 merges even zero-benefit pairs; a
// positive threshold also stops once the best pair's benefit drops below it.
// Implemented incrementally with one merge candidate per canopy.
RollupPlan rollup(const std::vector<InputCanopy>& canopies, const std::vector<IdPair>& pairs,
                  size_t max_size, size_t min_benefit = 0);

}  // namespace cblock
