#pragma once

// Exhaustive oracles over tiny blocking instances. Coverage is measured
// pessimistically: a pair counts only when its final canopy fits the size
// bound, so oversized leaves contribute nothing and the comparison with the
// greedy builder is deterministic.

#include "cblock/blktree.hpp"
#include "cblock/hash.hpp"
#include "cblock/record.hpp"

#include <map>
#include <string>
#include <vector>

namespace oracles {

struct TinyInstance {
    cblock::Dataset dataset;
    cblock::TrainingSet pairs;
    std::vector<cblock::HashSpec> specs;
    size_t max_size = 1;
};

namespace tree_detail {

struct Canopy {
    std::vector<cblock::RecordIdx> records;
    std::vector<std::pair<cblock::RecordIdx, cblock::RecordIdx>> pairs;
};

inline std::vector<Canopy> split(const TinyInstance& inst, const Canopy& canopy,
                                 const cblock::HashSpec& spec) {
    std::map<std::string, Canopy> by_key;
    std::map<cblock::RecordIdx, std::string> key_of;
    for (cblock::RecordIdx r : canopy.records) {
        std::string key = cblock::apply_hash(spec, inst.dataset.records[r],
                                             inst.dataset.schema);
        key_of[r] = key;
        by_key[key].records.push_back(r);
    }
    for (const auto& p : canopy.pairs) {
        if (key_of[p.first] == key_of[p.second]) {
            by_key[key_of[p.first]].pairs.push_back(p);
        }
    }
    std::vector<Canopy> out;
    for (auto& [_, c] : by_key) out.push_back(std::move(c));
    return out;
}

// Best pessimistic coverage over every BlkTree of the given depth whose
// specs never repeat on a path. Small children always stop (recursing into
// a fitting canopy can only lose pairs).
inline size_t best_tree(const TinyInstance& inst, const Canopy& canopy,
                        std::vector<bool>& used, int depth) {
    size_t best = canopy.records.size() <= inst.max_size ? canopy.pairs.size() : 0;
    if (depth == 0) return best;
    for (size_t s = 0; s < inst.specs.size(); ++s) {
        if (used[s]) continue;
        used[s] = true;
        size_t value = 0;
        for (const Canopy& child : split(inst, canopy, inst.specs[s])) {
            if (child.records.size() <= inst.max_size) {
                value += child.pairs.size();
            } else {
                value += best_tree(inst, child, used, depth - 1);
            }
        }
        used[s] = false;
        best = std::max(best, value);
    }
    return best;
}

inline Canopy whole(const TinyInstance& inst) {
    Canopy c;
    for (cblock::RecordIdx r = 0; r < inst.dataset.size(); ++r) c.records.push_back(r);
    for (const auto& p : inst.pairs.pairs) c.pairs.push_back(p);
    return c;
}

}  // namespace tree_detail

inline size_t best_tree_covered(const TinyInstance& inst, int max_depth) {
    std::vector<bool> used(inst.specs.size(), false);
    return tree_detail::best_tree(inst, tree_detail::whole(inst), used, max_depth);
}

// Best pessimistic coverage over every conjunction of at most max_len
// distinct specs, applied to every canopy. The cell partition of a
// conjunction depends only on the chosen set, so subsets suffice.
inline size_t best_chain_covered(const TinyInstance& inst, size_t max_len) {
    const size_t n = inst.specs.size();
    size_t best = 0;
    for (size_t mask = 0; mask < (size_t{1} << n); ++mask) {
        if (static_cast<size_t>(__builtin_popcountll(mask)) > max_len) continue;
        std::map<std::string, tree_detail::Canopy> cells;
        std::map<cblock::RecordIdx, std::string> key_of;
        for (cblock::RecordIdx r = 0; r < inst.dataset.size(); ++r) {
            std::string key;
            for (size_t s = 0; s < n; ++s) {
                if (!((mask >> s) & 1)) continue;
                key += cblock::apply_hash(inst.specs[s], inst.dataset.records[r],
                                          inst.dataset.schema);
                key += '\x1f';
            }
            key_of[r] = key;
            cells[key].records.push_back(r);
        }
        size_t value = 0;
        std::map<std::string, size_t> pairs_in;
        for (const auto& p : inst.pairs.pairs) {
            if (key_of[p.first] == key_of[p.second]) pairs_in[key_of[p.first]]++;
        }
        for (const auto& [key, cell] : cells) {
            if (cell.records.size() <= inst.max_size) {
                auto it = pairs_in.find(key);
                if (it != pairs_in.end()) value += it->second;
            }
        }
        best = std::max(best, value);
    }
    return best;
}

// Pessimistic coverage of a built model: records walk the tree, a pair
// counts when it shares a leaf canopy that fits the bound.
inline size_t model_covered(const TinyInstance& inst, const cblock::BlockingModel& model) {
    std::map<std::string, size_t> cell_size;
    std::map<cblock::RecordIdx, std::string> cell_of;
    for (cblock::RecordIdx r = 0; r < inst.dataset.size(); ++r) {
        std::string path;
        const cblock::BlkNode* node = model.root ? &*model.root : nullptr;
        while (node && !node->fallback()) {
            const cblock::HashSpec& spec = model.spec_by_id(node->hash_id);
            std::string key =
                cblock::apply_hash(spec, inst.dataset.records[r], inst.dataset.schema);
            path += key;
            path += '\x1f';
            auto any = node->children.find(cblock::kAnyKey);
            if (any != node->children.end()) {
                node = &any->second;
                continue;
            }
            auto it = node->children.find(key);
            node = it == node->children.end() ? nullptr : &it->second;
        }
        cell_of[r] = path;
        cell_size[path]++;
    }
    size_t covered = 0;
    for (const auto& p : inst.pairs.pairs) {
        if (cell_of[p.first] == cell_of[p.second] &&
            cell_size[cell_of[p.first]] <= inst.max_size) {
            covered++;
        }
    }
    return covered;
}

}  // namespace oracles
