#include "cblock/rollup.hpp"

#include "cblock/error.hpp"

#include <algorithm>
#include <unordered_map>
#include <unordered_set>

namespace cblock {

namespace {

IdPair normalized(const std::string& a, const std::string& b) {
    return a <= b ? IdPair{a, b} : IdPair{b, a};
}

// live canopy during the greedy loop
struct Group {
    std::vector<std::string> input_ids;  // sorted original canopy ids
    size_t size = 0;
    bool alive = true;
    std::unordered_map<size_t, size_t> cross;  // other group -> crossing pairs

    std::string final_id() const {
        if (input_ids.size() == 1) return input_ids.front();
        std::string id = "roll(";
        for (size_t i = 0; i < input_ids.size(); ++i) {
            if (i) id += '+';
            id += input_ids[i];
        }
        id += ')';
        return id;
    }
};

struct Candidate {
    bool valid = false;
    size_t partner = 0;
    size_t benefit = 0;
    IdPair pair_ids;  // normalized, for tie-breaking
};

// exact ratio comparison: b1/s1 vs b2/s2
int compare_ratio(size_t b1, size_t s1, size_t b2, size_t s2) {
    const unsigned __int128 lhs = static_cast<unsigned __int128>(b1) * s2;
    const unsigned __int128 rhs = static_cast<unsigned __int128>(b2) * s1;
    if (lhs < rhs) return -1;
    if (lhs > rhs) return 1;
    return 0;
}

size_t benefit_between(const Group& a, size_t bi, const Group&) {
    auto it = a.cross.find(bi);
    return it == a.cross.end() ? 0 : it->second;
}

}  // namespace

size_t benefit(const std::vector<std::string>& d1, const std::vector<std::string>& d2,
               const std::vector<IdPair>& pairs) {
    std::unordered_set<std::string> s1(d1.begin(), d1.end());
    std::unordered_set<std::string> s2(d2.begin(), d2.end());
    for (const auto& id : s1) {
        if (s2.count(id)) throw validation_error("benefit: canopies overlap on '" + id + "'");
    }
    std::unordered_set<std::string> seen;
    size_t count = 0;
    for (const auto& [a, b] : pairs) {
        auto [lo, hi] = normalized(a, b);
        if (!seen.insert(lo + "\x1f" + hi).second) continue;
        if ((s1.count(a) && s2.count(b)) || (s1.count(b) && s2.count(a))) count++;
    }
    return count;
}

std::map<std::string, std::string> RollupPlan::remap() const {
    std::map<std::string, std::string> out;
    for (const auto& [final_id, inputs] : groups) {
        for (const auto& in : inputs) out.emplace(in, final_id);
    }
    return out;
}

RollupPlan rollup(const std::vector<InputCanopy>& canopies, const std::vector<IdPair>& pairs,
                  size_t max_size, size_t min_benefit) {
    if (max_size < 1) throw validation_error("max_size must be >= 1");

    std::vector<Group> groups(canopies.size());
    std::unordered_map<std::string, size_t> canopy_of;  // record id -> group
    std::unordered_set<std::string> canopy_ids;
    for (size_t c = 0; c < canopies.size(); ++c) {
        if (!canopy_ids.insert(canopies[c].id).second) {
            throw validation_error("rollup: duplicate canopy id '" + canopies[c].id + "'");
        }
        if (canopies[c].members.empty()) {
            throw validation_error("rollup: canopy '" + canopies[c].id + "' is empty");
        }
        groups[c].input_ids = {canopies[c].id};
        groups[c].size = canopies[c].members.size();
        for (const auto& rec : canopies[c].members) {
            if (!canopy_of.emplace(rec, c).second) {
                throw validation_error("rollup: record '" + rec +
                                       "' appears in more than one canopy");
            }
        }
    }

    // dedup pairs, drop pairs with an endpoint outside the input, and build
    // the cross-benefit adjacency
    std::vector<std::pair<size_t, size_t>> cross_pairs;
    {
        std::unordered_set<std::string> seen;
        for (const auto& [a, b] : pairs) {
            auto [lo, hi] = normalized(a, b);
            if (!seen.insert(lo + "\x1f" + hi).second) continue;
            auto ia = canopy_of.find(a);
            auto ib = canopy_of.find(b);
            if (ia == canopy_of.end() || ib == canopy_of.end()) continue;
            if (ia->second == ib->second) continue;
            cross_pairs.emplace_back(ia->second, ib->second);
            groups[ia->second].cross[ib->second]++;
            groups[ib->second].cross[ia->second]++;
        }
    }

    // `prefer` orders candidate pairs: higher benefit first, then the
    // lexicographically smallest (id1,id2). The same rule drives both the
    // per-group candidate and the global pick, matching a naive full scan.
    auto prefer = [](size_t b1, const IdPair& p1, size_t b2, const IdPair& p2) {
        if (b1 != b2) return b1 > b2;
        return p1 < p2;
    };

    auto feasible = [&](size_t a, size_t b) {
        return groups[a].size + groups[b].size <= max_size;
    };

    std::vector<Candidate> cand(groups.size());
    // merge candidate of g: the partner no smaller than g that fits under S
    // and maximizes benefit
    auto rescan = [&](size_t g) {
        Candidate best;
        for (size_t o = 0; o < groups.size(); ++o) {
            if (o == g || !groups[o].alive) continue;
            if (groups[o].size < groups[g].size) continue;
            if (!feasible(g, o)) continue;
            const size_t b = benefit_between(groups[g], o, groups[o]);
            IdPair ids = normalized(groups[g].final_id(), groups[o].final_id());
            if (!best.valid || prefer(b, ids, best.benefit, best.pair_ids)) {
                best = {true, o, b, std::move(ids)};
            }
        }
        cand[g] = std::move(best);
    };
    for (size_t g = 0; g < groups.size(); ++g) rescan(g);

    RollupPlan plan;
    while (true) {
        // global pick: max benefit/size ratio, ties by (id1,id2)
        int pick = -1;
        for (size_t g = 0; g < groups.size(); ++g) {
            if (!groups[g].alive || !cand[g].valid) continue;
            if (pick < 0) {
                pick = static_cast<int>(g);
                continue;
            }
            const auto& a = cand[g];
            const auto& b = cand[static_cast<size_t>(pick)];
            int c = compare_ratio(a.benefit, groups[g].size, b.benefit,
                                  groups[static_cast<size_t>(pick)].size);
            if (c > 0 || (c == 0 && a.pair_ids < b.pair_ids)) {
                pick = static_cast<int>(g);
            }
        }
        if (pick < 0) break;
        const size_t g1 = static_cast<size_t>(pick);
        const size_t g2 = cand[g1].partner;
        if (min_benefit > 0 && cand[g1].benefit < min_benefit) break;

        // merge g1 and g2 into a new group
        Group merged;
        merged.input_ids = groups[g1].input_ids;
        merged.input_ids.insert(merged.input_ids.end(), groups[g2].input_ids.begin(),
                                groups[g2].input_ids.end());
        std::sort(merged.input_ids.begin(), merged.input_ids.end());
        merged.size = groups[g1].size + groups[g2].size;
        for (const auto& [o, b] : groups[g1].cross) {
            if (o != g2 && groups[o].alive) merged.cross[o] += b;
        }
        for (const auto& [o, b] : groups[g2].cross) {
            if (o != g1 && groups[o].alive) merged.cross[o] += b;
        }
        groups[g1].alive = false;
        groups[g2].alive = false;
        const size_t m = groups.size();
        groups.push_back(std::move(merged));
        cand.emplace_back();
        for (const auto& [o, b] : groups[m].cross) groups[o].cross[m] = b;

        // candidate upkeep: groups pointing at a dead canopy rescan; everyone
        // else keeps their candidate unless the merged group beats it
        const std::string m_id = groups[m].final_id();
        for (size_t g = 0; g < m; ++g) {
            if (!groups[g].alive) continue;
            if (cand[g].valid && (cand[g].partner == g1 || cand[g].partner == g2)) {
                rescan(g);
                continue;
            }
            if (groups[m].size >= groups[g].size && feasible(g, m)) {
                const size_t b = benefit_between(groups[g], m, groups[m]);
                IdPair ids = normalized(groups[g].final_id(), m_id);
                if (!cand[g].valid || prefer(b, ids, cand[g].benefit, cand[g].pair_ids)) {
                    cand[g] = {true, m, b, std::move(ids)};
                }
            }
        }
        rescan(m);
    }

    for (const auto& g : groups) {
        if (g.alive) plan.groups.emplace(g.final_id(), g.input_ids);
    }
    // recall gained: cross-input pairs now inside one final group
    std::unordered_map<size_t, size_t> final_of;  // original group idx -> alive group idx
    {
        // walk merge history by membership: map each input canopy id to its
        // alive group via input_ids
        std::unordered_map<std::string, size_t> alive_of_input;
        for (size_t g = 0; g < groups.size(); ++g) {
            if (!groups[g].alive) continue;
            for (const auto& id : groups[g].input_ids) alive_of_input.emplace(id, g);
        }
        for (size_t c = 0; c < canopies.size(); ++c) {
            final_of[c] = alive_of_input.at(canopies[c].id);
        }
    }
    for (const auto& [c1, c2] : cross_pairs) {
        if (final_of[c1] == final_of[c2]) plan.merged_pairs_gained++;
    }
    return plan;
}

}  // namespace cblock
