#include "cblock/blktree.hpp"

#include "cblock/error.hpp"
#include "cblock/rng.hpp"
#include "model_json.hpp"

#include <json.hpp>

#include <algorithm>
#include <thread>
#include <unordered_map>

namespace cblock {

namespace {

using nlohmann::json;

// Local view of one tree node's canopy: record indices plus the training
// pairs whose endpoints both lie inside, as positions into `records`.
struct NodeState {
    std::vector<RecordIdx> records;
    std::vector<std::pair<uint32_t, uint32_t>> pairs;
};

NodeState root_state(const Dataset& dataset, const TrainingSet& pairs) {
    NodeState state;
    state.records.resize(dataset.size());
    for (RecordIdx r = 0; r < dataset.size(); ++r) state.records[r] = r;
    state.pairs.reserve(pairs.size());
    for (const auto& [a, b] : pairs.pairs) state.pairs.emplace_back(a, b);
    return state;
}

// Partition of a node's canopy by one hash. Groups in first-seen order;
// pair positions are re-localized into each group.
struct Split {
    std::vector<std::string> keys;
    std::vector<std::vector<RecordIdx>> groups;
    std::vector<std::vector<std::pair<uint32_t, uint32_t>>> group_pairs;
    size_t broken = 0;  // P_h

    size_t oversized_count(size_t max_size) const {
        size_t n = 0;
        for (const auto& g : groups) n += g.size() > max_size;
        return n;
    }
};

Split split_canopy(const Dataset& dataset, const NodeState& state, const CompiledHash& hash) {
    Split split;
    std::unordered_map<std::string, uint32_t> key_index;
    std::vector<uint32_t> group_of(state.records.size());
    std::vector<uint32_t> pos_in_group(state.records.size());

    for (size_t i = 0; i < state.records.size(); ++i) {
        std::string key = apply_hash(hash, dataset, state.records[i]);
        auto [it, inserted] =
            key_index.emplace(std::move(key), static_cast<uint32_t>(split.groups.size()));
        if (inserted) {
            split.keys.push_back(it->first);
            split.groups.emplace_back();
            split.group_pairs.emplace_back();
        }
        uint32_t g = it->second;
        group_of[i] = g;
        pos_in_group[i] = static_cast<uint32_t>(split.groups[g].size());
        split.groups[g].push_back(state.records[i]);
    }
    for (const auto& [a, b] : state.pairs) {
        if (group_of[a] != group_of[b]) {
            split.broken++;
        } else {
            split.group_pairs[group_of[a]].emplace_back(pos_in_group[a], pos_in_group[b]);
        }
    }
    return split;
}

size_t ceil_div(size_t a, size_t b) { return (a + b - 1) / b; }

Rational split_score(const Split& split, size_t max_size, Strategy strategy) {
    Rational score(split.broken);
    if (strategy == Strategy::Optimistic) return score;
    for (size_t g = 0; g < split.groups.size(); ++g) {
        if (split.groups[g].size() <= max_size) continue;
        const size_t inside = split.group_pairs[g].size();
        if (strategy == Strategy::Pessimistic) {
            score += inside;
        } else {
            const size_t n = ceil_div(split.groups[g].size(), max_size);
            score += Rational(inside) * Rational(n - 1, n);
        }
    }
    return score;
}

NodeState child_state(const Split& split, size_t g) {
    NodeState state;
    state.records = split.groups[g];
    state.pairs = split.group_pairs[g];
    return state;
}

// ---- Greedy BlkTree construction ----

struct TreeBuilder {
    const Dataset& dataset;
    std::vector<CompiledHash> space;
    size_t build_size;
    Strategy strategy;
    BuildLimits limits;
    std::vector<bool> used;

    // Best eligible spec for this node, or -1. Eligible: unused on the path,
    // actually splits the canopy, and leaves at most max_oversized_children
    // oversized children. Score ties go to the first spec in space order.
    int pick_spec(const NodeState& state, Split& best_split) const {
        int best = -1;
        Rational best_score;
        for (size_t si = 0; si < space.size(); ++si) {
            if (used[si]) continue;
            Split split = split_canopy(dataset, state, space[si]);
            if (split.keys.size() < 2) continue;
            if (split.oversized_count(build_size) >
                static_cast<size_t>(limits.max_oversized_children)) {
                continue;
            }
            Rational score = split_score(split, build_size, strategy);
            if (best < 0 || score < best_score) {
                best = static_cast<int>(si);
                best_score = std::move(score);
                best_split = std::move(split);
            }
        }
        return best;
    }

    // Precondition: the node is oversized. Returns nullopt when no eligible
    // spec splits it (the apply-time random split takes over).
    std::optional<BlkNode> build(const NodeState& state, int depth) {
        if (depth >= limits.max_depth) return std::nullopt;

        Split split;
        int si = pick_spec(state, split);
        if (si < 0) return std::nullopt;

        BlkNode node;
        node.hash_id = space[static_cast<size_t>(si)].spec->id;
        node.size_at_build = state.records.size();

        used[static_cast<size_t>(si)] = true;
        for (size_t g = 0; g < split.groups.size(); ++g) {
            if (split.groups[g].size() <= build_size) continue;
            auto child = build(child_state(split, g), depth + 1);
            if (child) {
                node.children.emplace(split.keys[g], std::move(*child));
            }
        }
        used[static_cast<size_t>(si)] = false;
        return node;
    }
};

std::vector<CompiledHash> compile_space(const std::vector<HashSpec>& space,
                                        const Schema& schema) {
    if (space.empty()) throw validation_error("empty hash space");
    std::vector<CompiledHash> compiled;
    compiled.reserve(space.size());
    for (const HashSpec& spec : space) compiled.push_back(compile_hash(spec, schema));
    return compiled;
}

size_t effective_build_size(size_t max_size, const BuildLimits& limits) {
    if (limits.build_factor <= 1) return max_size;
    return std::max<size_t>(1, max_size / static_cast<size_t>(limits.build_factor));
}

// Specs referenced by the tree, sorted by id.
void collect_specs(const BlkNode& node, const std::vector<HashSpec>& space,
                   std::vector<HashSpec>& out) {
    if (!node.fallback()) {
        auto it = std::find_if(space.begin(), space.end(),
                               [&](const HashSpec& s) { return s.id == node.hash_id; });
        if (it == space.end()) {
            throw validation_error("tree references hash '" + node.hash_id +
                                   "' outside the space");
        }
        if (std::none_of(out.begin(), out.end(),
                         [&](const HashSpec& s) { return s.id == node.hash_id; })) {
            out.push_back(*it);
        }
    }
    for (const auto& [_, child] : node.children) collect_specs(child, space, out);
}

BlockingModel finish_model(Language language, size_t max_size, uint64_t seed,
                           std::optional<BlkNode> root, const std::vector<HashSpec>& space) {
    BlockingModel model;
    model.language = language;
    model.max_size = max_size;
    model.seed = seed;
    model.root = std::move(root);
    if (model.root) collect_specs(*model.root, space, model.specs);
    std::sort(model.specs.begin(), model.specs.end(),
              [](const HashSpec& a, const HashSpec& b) { return a.id < b.id; });
    return model;
}

}  // namespace

const char* language_name(Language l) {
    switch (l) {
        case Language::Random: return "random";
        case Language::Single: return "single";
        case Language::Chain: return "chain";
        case Language::ChainTree: return "chaintree";
        case Language::BlkTree: return "blktree";
    }
    return "?";
}

Language language_from_name(const std::string& name) {
    for (Language l : {Language::Random, Language::Single, Language::Chain,
                       Language::ChainTree, Language::BlkTree}) {
        if (name == language_name(l)) return l;
    }
    throw validation_error("unknown language '" + name + "'");
}

const char* strategy_name(Strategy s) {
    switch (s) {
        case Strategy::Optimistic: return "optimistic";
        case Strategy::Pessimistic: return "pessimistic";
        case Strategy::Expected: return "expected";
    }
    return "?";
}

Strategy strategy_from_name(const std::string& name) {
    for (Strategy s : {Strategy::Optimistic, Strategy::Pessimistic, Strategy::Expected}) {
        if (name == strategy_name(s)) return s;
    }
    throw validation_error("unknown strategy '" + name + "'");
}

const HashSpec& BlockingModel::spec_by_id(const std::string& id) const {
    auto it = std::lower_bound(specs.begin(), specs.end(), id,
                               [](const HashSpec& s, const std::string& key) {
                                   return s.id < key;
                               });
    if (it == specs.end() || it->id != id) {
        throw validation_error("model references unknown hash '" + id + "'");
    }
    return *it;
}

Rational elim_count(const Dataset& dataset, std::span<const RecordIdx> canopy,
                    std::span<const std::pair<RecordIdx, RecordIdx>> pairs,
                    const HashSpec& spec, size_t max_size, Strategy strategy) {
    if (max_size < 1) throw validation_error("max_size must be >= 1");
    NodeState state;
    state.records.assign(canopy.begin(), canopy.end());
    std::unordered_map<RecordIdx, uint32_t> pos;
    pos.reserve(state.records.size());
    for (size_t i = 0; i < state.records.size(); ++i) {
        pos.emplace(state.records[i], static_cast<uint32_t>(i));
    }
    state.pairs.reserve(pairs.size());
    for (const auto& [a, b] : pairs) {
        auto ia = pos.find(a);
        auto ib = pos.find(b);
        if (ia == pos.end() || ib == pos.end()) {
            throw validation_error("elim_count: pair endpoint outside the canopy");
        }
        state.pairs.emplace_back(ia->second, ib->second);
    }
    CompiledHash hash = compile_hash(spec, dataset.schema);
    return split_score(split_canopy(dataset, state, hash), max_size, strategy);
}

BlockingModel build_blktree(const Dataset& dataset, const TrainingSet& pairs,
                            const std::vector<HashSpec>& space, size_t max_size,
                            Strategy strategy, const BuildLimits& limits, uint64_t seed) {
    if (max_size < 1) throw validation_error("max_size must be >= 1");
    TreeBuilder builder{dataset, compile_space(space, dataset.schema),
                        effective_build_size(max_size, limits), strategy, limits,
                        std::vector<bool>(space.size(), false)};

    std::optional<BlkNode> root;
    if (dataset.size() > builder.build_size) {
        root = builder.build(root_state(dataset, pairs), 0);
        if (!root) {
            // oversized but unsplittable: fallback-marked root
            root = BlkNode{"", dataset.size(), {}};
        }
    }
    return finish_model(Language::BlkTree, max_size, seed, std::move(root), space);
}

BlockingModel build_single_hash(const Dataset& dataset, const TrainingSet& pairs,
                                const std::vector<HashSpec>& space, size_t max_size,
                                uint64_t seed) {
    if (max_size < 1) throw validation_error("max_size must be >= 1");
    auto compiled = compile_space(space, dataset.schema);
    NodeState state = root_state(dataset, pairs);

    // Covered = pairs in canopies of size <= S; pairs in larger canopies are
    // written off to the random split.
    size_t best = 0;
    size_t best_covered = 0;
    bool have_best = false;
    for (size_t si = 0; si < compiled.size(); ++si) {
        Split split = split_canopy(dataset, state, compiled[si]);
        size_t covered = 0;
        for (size_t g = 0; g < split.groups.size(); ++g) {
            if (split.groups[g].size() <= max_size) covered += split.group_pairs[g].size();
        }
        if (!have_best || covered > best_covered) {
            have_best = true;
            best = si;
            best_covered = covered;
        }
    }
    BlkNode root{space[best].id, dataset.size(), {}};
    return finish_model(Language::Single, max_size, seed, root, space);
}

BlockingModel build_chain(const Dataset& dataset, const TrainingSet& pairs,
                          const std::vector<HashSpec>& space, size_t max_size,
                          Strategy strategy, const BuildLimits& limits, uint64_t seed) {
    if (max_size < 1) throw validation_error("max_size must be >= 1");
    auto compiled = compile_space(space, dataset.schema);
    const size_t build_size = effective_build_size(max_size, limits);

    std::vector<NodeState> canopies;
    canopies.push_back(root_state(dataset, pairs));
    std::vector<bool> used(space.size(), false);
    std::vector<size_t> chain;

    for (int depth = 0; depth < limits.max_depth; ++depth) {
        size_t oversized_mass = 0;
        for (const auto& c : canopies) {
            if (c.records.size() > build_size) oversized_mass += c.records.size();
        }
        if (oversized_mass == 0) break;

        int best = -1;
        Rational best_score;
        size_t min_mass = oversized_mass;
        for (size_t si = 0; si < compiled.size(); ++si) {
            if (used[si]) continue;
            Rational score(0);
            size_t new_mass = 0;
            bool refines = false;
            for (const auto& c : canopies) {
                Split split = split_canopy(dataset, c, compiled[si]);
                if (split.keys.size() > 1) refines = true;
                score += split_score(split, build_size, strategy);
                for (const auto& g : split.groups) {
                    if (g.size() > build_size) new_mass += g.size();
                }
            }
            if (!refines) continue;
            min_mass = std::min(min_mass, new_mass);
            if (best < 0 || score < best_score) {
                best = static_cast<int>(si);
                best_score = std::move(score);
            }
        }
        if (best < 0) break;
        if (min_mass >= oversized_mass) break;  // no spec reduces the oversized mass

        used[static_cast<size_t>(best)] = true;
        chain.push_back(static_cast<size_t>(best));
        std::vector<NodeState> next;
        for (const auto& c : canopies) {
            Split split = split_canopy(dataset, c, compiled[static_cast<size_t>(best)]);
            for (size_t g = 0; g < split.groups.size(); ++g) {
                next.push_back(child_state(split, g));
            }
        }
        canopies = std::move(next);
    }

    // Width-1 tree: every key of level i descends into the same level-(i+1)
    // node, expressed with the wildcard child.
    std::optional<BlkNode> root;
    BlkNode* tail = nullptr;
    for (size_t si : chain) {
        BlkNode node{space[si].id, dataset.size(), {}};
        if (!tail) {
            root = std::move(node);
            tail = &*root;
        } else {
            tail = &tail->children.emplace(kAnyKey, std::move(node)).first->second;
        }
    }
    return finish_model(Language::Chain, max_size, seed, std::move(root), space);
}

BlockingModel build_chain_tree(const Dataset& dataset, const TrainingSet& pairs,
                               const std::vector<HashSpec>& space, size_t max_size,
                               Strategy strategy, const BuildLimits& limits, uint64_t seed) {
    if (max_size < 1) throw validation_error("max_size must be >= 1");
    auto compiled = compile_space(space, dataset.schema);
    const size_t build_size = effective_build_size(max_size, limits);

    std::optional<BlkNode> root;
    // Oversized canopies at the current level, each with its attach point.
    struct Frontier {
        NodeState state;
        BlkNode* parent;      // null = attach as root
        std::string key;
    };
    std::vector<Frontier> frontier;
    {
        NodeState state = root_state(dataset, pairs);
        if (state.records.size() > build_size) {
            frontier.push_back({std::move(state), nullptr, ""});
        }
    }
    std::vector<bool> used(space.size(), false);

    for (int depth = 0; depth < limits.max_depth && !frontier.empty(); ++depth) {
        int best = -1;
        Rational best_score;
        for (size_t si = 0; si < compiled.size(); ++si) {
            if (used[si]) continue;
            Rational score(0);
            bool refines = false;
            bool rejected = false;
            for (const auto& f : frontier) {
                Split split = split_canopy(dataset, f.state, compiled[si]);
                if (split.keys.size() > 1) refines = true;
                if (split.oversized_count(build_size) >
                    static_cast<size_t>(limits.max_oversized_children)) {
                    rejected = true;
                    break;
                }
                score += split_score(split, build_size, strategy);
            }
            if (rejected || !refines) continue;
            if (best < 0 || score < best_score) {
                best = static_cast<int>(si);
                best_score = std::move(score);
            }
        }
        if (best < 0) break;
        used[static_cast<size_t>(best)] = true;

        std::vector<Frontier> next;
        for (auto& f : frontier) {
            BlkNode node{compiled[static_cast<size_t>(best)].spec->id,
                         f.state.records.size(), {}};
            BlkNode* attached;
            if (!f.parent) {
                root = std::move(node);
                attached = &*root;
            } else {
                attached = &f.parent->children.emplace(f.key, std::move(node)).first->second;
            }
            Split split = split_canopy(dataset, f.state, compiled[static_cast<size_t>(best)]);
            for (size_t g = 0; g < split.groups.size(); ++g) {
                if (split.groups[g].size() <= build_size) continue;
                next.push_back({child_state(split, g), attached, split.keys[g]});
            }
        }
        frontier = std::move(next);
    }
    return finish_model(Language::ChainTree, max_size, seed, std::move(root), space);
}

BlockingModel make_random_model(size_t max_size, uint64_t seed) {
    if (max_size < 1) throw validation_error("max_size must be >= 1");
    BlockingModel model;
    model.language = Language::Random;
    model.max_size = max_size;
    model.seed = seed;
    return model;
}

BlockingModel build_model(Language language, const Dataset& dataset,
                          const TrainingSet& pairs, const std::vector<HashSpec>& space,
                          size_t max_size, Strategy strategy, const BuildLimits& limits,
                          uint64_t seed) {
    switch (language) {
        case Language::Random:
            return make_random_model(max_size, seed);
        case Language::Single:
            return build_single_hash(dataset, pairs, space, max_size, seed);
        case Language::Chain:
            return build_chain(dataset, pairs, space, max_size, strategy, limits, seed);
        case Language::ChainTree:
            return build_chain_tree(dataset, pairs, space, max_size, strategy, limits, seed);
        case Language::BlkTree:
            return build_blktree(dataset, pairs, space, max_size, strategy, limits, seed);
    }
    throw validation_error("unknown language");
}

// ---- Application ----

namespace {

std::string walk_record(const BlockingModel& model, const Dataset& dataset, RecordIdx r,
                        const std::unordered_map<std::string, CompiledHash>& hashes) {
    std::string path;
    const BlkNode* node = model.root ? &*model.root : nullptr;
    while (node && !node->fallback()) {
        const CompiledHash& hash = hashes.at(node->hash_id);
        std::string key = apply_hash(hash, dataset, r);
        if (!path.empty()) path += '/';
        path += node->hash_id;
        path += '=';
        path += key;

        // Literal keys win over the chain wildcard, in case a hash value is
        // itself "*". Over-built subtrees (build_factor > 1) are walked only
        // while the child was still oversized under the apply-time bound.
        auto it = node->children.find(key);
        if (it != node->children.end() && it->second.size_at_build > model.max_size) {
            node = &it->second;
            continue;
        }
        auto any = node->children.find(kAnyKey);
        if (any != node->children.end()) {
            node = &any->second;
            continue;
        }
        break;
    }
    return path;
}

}  // namespace

std::pair<RoundAssignment, CanopyStats> assign_canopies(const BlockingModel& model,
                                                        const Dataset& dataset,
                                                        uint64_t seed, int threads) {
    const size_t n = dataset.size();
    std::vector<std::string> raw(n);

    if (model.language == Language::Random) {
        const size_t k = n == 0 ? 1 : ceil_div(n, model.max_size);
        Rng rng(seed);
        for (size_t i = 0; i < n; ++i) {
            raw[i] = "rand#" + std::to_string(rng.below(k));
        }
    } else {
        std::unordered_map<std::string, CompiledHash> hashes;
        for (const HashSpec& spec : model.specs) {
            hashes.emplace(spec.id, compile_hash(spec, dataset.schema));
        }
        const int workers = std::max(1, threads);
        if (workers == 1 || n < 1024) {
            for (RecordIdx r = 0; r < n; ++r) {
                raw[r] = walk_record(model, dataset, r, hashes);
            }
        } else {
            std::vector<std::thread> pool;
            const size_t chunk = ceil_div(n, static_cast<size_t>(workers));
            for (int w = 0; w < workers; ++w) {
                const size_t lo = static_cast<size_t>(w) * chunk;
                const size_t hi = std::min(n, lo + chunk);
                if (lo >= hi) break;
                pool.emplace_back([&, lo, hi] {
                    for (size_t r = lo; r < hi; ++r) {
                        raw[r] = walk_record(model, dataset, static_cast<RecordIdx>(r), hashes);
                    }
                });
            }
            for (auto& t : pool) t.join();
        }
    }

    // Gather members per raw canopy in record order, then bound every canopy
    // by a seeded shuffle-and-slice split. Split seeds derive from the canopy
    // name, so the result does not depend on processing order.
    std::vector<std::string> raw_names;
    std::vector<std::vector<RecordIdx>> members;
    {
        std::unordered_map<std::string, uint32_t> index;
        for (RecordIdx r = 0; r < n; ++r) {
            auto [it, inserted] =
                index.emplace(std::move(raw[r]), static_cast<uint32_t>(raw_names.size()));
            if (inserted) {
                raw_names.push_back(it->first);
                members.emplace_back();
            }
            members[it->second].push_back(r);
        }
    }
    if (model.language == Language::Random && n > 0) {
        // every allocated canopy id exists, drawn or not
        const size_t k = ceil_div(n, model.max_size);
        std::unordered_map<std::string, bool> have;
        for (const auto& name : raw_names) have.emplace(name, true);
        for (size_t c = 0; c < k; ++c) {
            std::string name = "rand#" + std::to_string(c);
            if (!have.count(name)) {
                raw_names.push_back(name);
                members.emplace_back();
            }
        }
    }

    RoundAssignment round;
    round.canopy_of.resize(n);
    for (size_t c = 0; c < raw_names.size(); ++c) {
        const auto& group = members[c];
        if (group.size() <= model.max_size) {
            CanopyIdx idx = static_cast<CanopyIdx>(round.names.size());
            round.names.push_back(raw_names[c]);
            for (RecordIdx r : group) round.canopy_of[r] = idx;
            continue;
        }
        const size_t parts = ceil_div(group.size(), model.max_size);
        const size_t base = group.size() / parts;
        const size_t rem = group.size() % parts;
        std::vector<RecordIdx> shuffled = group;
        Rng rng(seed ^ fnv1a64(raw_names[c]));
        rng.shuffle(shuffled);

        size_t at = 0;
        for (size_t p = 0; p < parts; ++p) {
            const size_t len = base + (p < rem ? 1 : 0);
            CanopyIdx idx = static_cast<CanopyIdx>(round.names.size());
            round.names.push_back(raw_names[c] + "#" + std::to_string(p));
            for (size_t i = 0; i < len; ++i) round.canopy_of[shuffled[at++]] = idx;
        }
    }
    return {std::move(round), stats_of(round)};
}

CanopyAssignment random_baseline(const Dataset& dataset, size_t max_size, uint64_t seed) {
    if (max_size < 1) throw validation_error("max_size must be >= 1");
    const size_t n = dataset.size();
    const size_t k = n == 0 ? 1 : ceil_div(n, max_size);

    RoundAssignment round;
    for (size_t c = 0; c < k; ++c) round.names.push_back("rand#" + std::to_string(c));
    round.canopy_of.resize(n);
    Rng rng(seed);
    for (size_t r = 0; r < n; ++r) {
        round.canopy_of[r] = static_cast<CanopyIdx>(rng.below(k));
    }
    CanopyAssignment assign;
    assign.rounds.push_back(std::move(round));
    return assign;
}

// ---- Serialization ----

namespace {

json spec_to_json(const HashSpec& spec) {
    json params = json::object();
    switch (spec.kind) {
        case HashKind::Prefix:
        case HashKind::Suffix:
        case HashKind::FreqChars:
        case HashKind::Round:
            params["k"] = spec.param;
            break;
        case HashKind::IntervalPartition:
            params["ordering"] = ordering_name(spec.ordering);
            params["boundaries"] = spec.boundaries;
            break;
        default:
            break;
    }
    return json{{"id", spec.id},
                {"attribute", spec.attribute},
                {"kind", kind_name(spec.kind)},
                {"params", params}};
}

HashSpec spec_from_json(const json& j) {
    HashSpec spec;
    spec.id = j.at("id").get<std::string>();
    spec.attribute = j.at("attribute").get<std::string>();
    spec.kind = kind_from_name(j.at("kind").get<std::string>());
    const json& params = j.at("params");
    if (params.contains("k")) spec.param = params["k"].get<int>();
    if (spec.kind == HashKind::IntervalPartition) {
        spec.ordering = ordering_from_name(params.at("ordering").get<std::string>());
        spec.boundaries = params.at("boundaries").get<std::vector<std::string>>();
    }
    return spec;
}

json node_to_json(const BlkNode& node) {
    json children = json::object();
    for (const auto& [key, child] : node.children) {
        children[key] = node_to_json(child);
    }
    return json{{"hash", node.hash_id}, {"size", node.size_at_build}, {"children", children}};
}

BlkNode node_from_json(const json& j) {
    BlkNode node;
    node.hash_id = j.at("hash").get<std::string>();
    node.size_at_build = j.at("size").get<size_t>();
    for (const auto& [key, child] : j.at("children").items()) {
        node.children.emplace(key, node_from_json(child));
    }
    return node;
}

json model_to_json_obj(const BlockingModel& model) {
    json specs = json::array();
    for (const HashSpec& spec : model.specs) specs.push_back(spec_to_json(spec));
    json j{{"language", language_name(model.language)},
           {"max_size", model.max_size},
           {"seed", model.seed},
           {"root", nullptr},
           {"specs", specs}};
    if (model.root) j["root"] = node_to_json(*model.root);
    return j;
}

BlockingModel model_from_json_obj(const json& j) {
    BlockingModel model;
    model.language = language_from_name(j.at("language").get<std::string>());
    model.max_size = j.at("max_size").get<size_t>();
    model.seed = j.at("seed").get<uint64_t>();
    for (const json& spec : j.at("specs")) model.specs.push_back(spec_from_json(spec));
    std::sort(model.specs.begin(), model.specs.end(),
              [](const HashSpec& a, const HashSpec& b) { return a.id < b.id; });
    if (!j.at("root").is_null()) model.root = node_from_json(j.at("root"));
    return model;
}

}  // namespace

std::string BlockingModel::to_json() const {
    return model_to_json_obj(*this).dump(2) + "\n";
}

BlockingModel BlockingModel::from_json(const std::string& text) {
    try {
        return model_from_json_obj(json::parse(text));
    } catch (const json::exception& e) {
        throw validation_error(std::string("bad model JSON: ") + e.what());
    }
}

// internal hooks shared with multiround.cpp
namespace detail {
json model_to_json(const BlockingModel& model) { return model_to_json_obj(model); }
BlockingModel model_from_json(const json& j) { return model_from_json_obj(j); }
}  // namespace detail

}  // namespace cblock
