// Acceptance suite: one check per shipped guarantee, one verdict line each.
//
//   1  drill-down optimality vs cut-pattern brute force (exact)
//   2  rollup feasibility/monotonicity/optimum bound + incremental == naive
//   3  greedy BlkTree sanity vs exhaustive enumeration + chain containment
//   4  elim-count unit vectors
//   5  greedy machine assignment inside the X..2X envelope
//   6  qualitative recall trends on the skewed synthetic dataset
//   7  every emitted canopy fits the bound, on every model in the grid
//   8  apply throughput on 100K records
//   9  byte-identical experiment reports for a fixed seed

#include "cblock/blktree.hpp"
#include "cblock/drilldown.hpp"
#include "cblock/eval.hpp"
#include "cblock/machines.hpp"
#include "cblock/multiround.hpp"
#include "cblock/rng.hpp"
#include "cblock/rollup.hpp"
#include "cblock/synth.hpp"

#include "oracles.hpp"
#include "tree_oracle.hpp"

#include <sys/wait.h>

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <string>

namespace {

using namespace cblock;
namespace fs = std::filesystem;

struct Verdict {
    int number;
    std::string title;
    bool pass;
    std::string detail;
};

std::vector<Verdict> g_verdicts;

void report(int number, const std::string& title, bool pass, const std::string& detail = "") {
    g_verdicts.push_back({number, title, pass, detail});
    std::printf("[%s] criterion %d: %s%s%s\n", pass ? "PASS" : "FAIL", number, title.c_str(),
                detail.empty() ? "" : " — ", detail.c_str());
    std::fflush(stdout);
}

struct Stopwatch {
    std::chrono::steady_clock::time_point start = std::chrono::steady_clock::now();
    double seconds() const {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
            .count();
    }
    std::string text() const {
        char buf[32];
        std::snprintf(buf, sizeof(buf), "%.1f s", seconds());
        return buf;
    }
};

// ---- criterion 1 ----

void criterion_drilldown() {
    Stopwatch watch;
    Rng rng(101);
    size_t failures = 0;
    for (int trial = 0; trial < 200; ++trial) {
        const size_t m = 2 + rng.below(13);  // |domain| <= 14
        OrderedDomain d;
        d.ordering = Ordering::Numeric;
        for (size_t i = 0; i < m; ++i) {
            d.values.push_back(std::to_string(10 * i));
            d.weights.push_back(1 + rng.below(4));
        }
        std::vector<ValuePair> pairs;
        const size_t n_pairs = rng.below(11);  // <= 10
        for (size_t p = 0; p < n_pairs; ++p) {
            const size_t a = rng.below(m);
            const size_t b = rng.below(m);
            pairs.push_back({std::min(a, b), std::max(a, b)});
        }
        size_t max_weight = 0;
        size_t total = 0;
        for (size_t w : d.weights) {
            max_weight = std::max(max_weight, w);
            total += w;
        }
        const double max_cost =
            static_cast<double>(max_weight + rng.below(std::max<size_t>(1, total)));

        CostFn cost = weight_cost(d);
        const auto result = drill_down(d, pairs, cost, max_cost);
        const size_t brute = oracles::drilldown_brute(m, pairs, cost, max_cost);
        if (result.violations != brute) failures++;
    }
    report(1, "drill-down violations equal the brute-force minimum (200 instances, < 10 s)",
           failures == 0 && watch.seconds() < 10.0,
           failures ? std::to_string(failures) + " mismatches" : watch.text());
}

// ---- criterion 2 ----

void criterion_rollup() {
    Stopwatch watch;
    Rng rng(202);
    size_t failures = 0;
    for (int trial = 0; trial < 100; ++trial) {
        const size_t count = 1 + rng.below(8);
        std::vector<InputCanopy> canopies;
        std::vector<std::string> records;
        for (size_t c = 0; c < count; ++c) {
            InputCanopy canopy;
            canopy.id = "c" + std::to_string(c);
            const size_t members = 1 + rng.below(4);
            for (size_t m = 0; m < members; ++m) {
                canopy.members.push_back(canopy.id + "_" + std::to_string(m));
                records.push_back(canopy.members.back());
            }
            canopies.push_back(std::move(canopy));
        }
        std::vector<IdPair> pairs;
        for (size_t p = rng.below(8); p > 0; --p) {
            const std::string& a = records[rng.below(records.size())];
            const std::string& b = records[rng.below(records.size())];
            if (a != b) pairs.emplace_back(a, b);
        }
        const size_t S = 2 + rng.below(9);

        RollupPlan fast = rollup(canopies, pairs, S);
        RollupPlan slow = oracles::rollup_naive(canopies, pairs, S);
        if (!(fast.groups == slow.groups &&
              fast.merged_pairs_gained == slow.merged_pairs_gained)) {
            failures++;
            continue;
        }

        std::map<std::string, size_t> size_of;
        for (const auto& c : canopies) size_of[c.id] = c.members.size();
        for (const auto& [_, inputs] : fast.groups) {
            size_t total = 0;
            for (const auto& in : inputs) total += size_of[in];
            if (inputs.size() > 1 && total > S) failures++;
        }

        const size_t before = oracles::rollup_input_covered(canopies, pairs);
        const size_t after = before + fast.merged_pairs_gained;
        if (after < before) failures++;
        if (after > oracles::rollup_optimal_covered(canopies, pairs, S)) failures++;
    }
    report(2, "rollup is feasible, never loses recall, stays under the optimum,"
              " and matches the naive re-scan (100 instances, < 20 s)",
           failures == 0 && watch.seconds() < 20.0,
           failures ? std::to_string(failures) + " violations" : watch.text());
}

// ---- criterion 3 ----

Dataset int_dataset(const std::vector<std::string>& attrs,
                    const std::vector<std::vector<int64_t>>& rows) {
    Dataset ds;
    for (const auto& a : attrs) ds.schema.add(a, AttrType::Integer);
    for (size_t i = 0; i < rows.size(); ++i) {
        Record rec;
        rec.id = "r" + std::to_string(i);
        for (int64_t v : rows[i]) rec.attrs.push_back(AttrValue{v});
        ds.add(std::move(rec));
    }
    return ds;
}

HashSpec identity_of(const std::string& attr) {
    HashSpec spec;
    spec.attribute = attr;
    spec.kind = HashKind::Identity;
    spec.id = spec_id(attr, HashKind::Identity, 0);
    return spec;
}

void criterion_blktree_greedy() {
    Rng rng(303);
    size_t failures = 0;
    BuildLimits limits;
    limits.max_depth = 2;
    limits.max_oversized_children = 1000000;

    for (int trial = 0; trial < 100; ++trial) {
        oracles::TinyInstance inst;
        const size_t n = 6 + rng.below(15);  // <= 20 records
        const size_t n_specs = 2 + rng.below(3);  // <= 4 specs
        std::vector<std::string> attrs;
        for (size_t s = 0; s < n_specs; ++s) attrs.push_back("a" + std::to_string(s));
        std::vector<std::vector<int64_t>> rows;
        for (size_t i = 0; i < n; ++i) {
            std::vector<int64_t> row;
            for (size_t s = 0; s < n_specs; ++s) {
                row.push_back(static_cast<int64_t>(rng.below(2 + s)));
            }
            rows.push_back(std::move(row));
        }
        inst.dataset = int_dataset(attrs, rows);
        for (int p = 0; p < 8; ++p) {
            const RecordIdx a = static_cast<RecordIdx>(rng.below(n));
            const RecordIdx b = static_cast<RecordIdx>(rng.below(n));
            if (a != b) inst.pairs.add(a, b);
        }
        inst.pairs.dedup();
        if (inst.pairs.empty()) continue;
        for (const auto& a : attrs) inst.specs.push_back(identity_of(a));
        inst.max_size = 2 + rng.below(8);

        const size_t best_tree = oracles::best_tree_covered(inst, limits.max_depth);
        const size_t best_chain =
            oracles::best_chain_covered(inst, static_cast<size_t>(limits.max_depth));
        if (best_chain > best_tree) failures++;  // language containment

        for (Strategy s :
             {Strategy::Optimistic, Strategy::Pessimistic, Strategy::Expected}) {
            BlockingModel greedy =
                build_blktree(inst.dataset, inst.pairs, inst.specs, inst.max_size, s, limits);
            if (oracles::model_covered(inst, greedy) > best_tree) failures++;
        }
    }

    // the hand-built 6-record instance: greedy reaches the enumerated optimum
    oracles::TinyInstance hand;
    hand.dataset = int_dataset({"a", "b"},
                               {{1, 0}, {1, 1}, {1, 2}, {2, 3}, {2, 4}, {2, 5}});
    hand.pairs.add(0, 1);
    hand.pairs.add(3, 4);
    hand.specs = {identity_of("a"), identity_of("b")};
    hand.max_size = 3;
    BlockingModel greedy = build_blktree(hand.dataset, hand.pairs, hand.specs,
                                         hand.max_size, Strategy::Optimistic);
    auto [round, stats] = assign_canopies(greedy, hand.dataset, 1);
    CanopyAssignment assign;
    assign.rounds.push_back(round);
    const bool hand_ok = recall(assign, hand.pairs) == 1.0 &&
                         oracles::model_covered(hand, greedy) ==
                             oracles::best_tree_covered(hand, 2);
    if (!hand_ok) failures++;

    report(3, "greedy BlkTree never beats the enumerated optimum; optimal chain <="
              " optimal tree (100 instances + hand instance)",
           failures == 0, failures ? std::to_string(failures) + " violations" : "");
}

// ---- criterion 4 ----

void criterion_elim_count() {
    std::vector<std::vector<int64_t>> rows;
    for (int i = 0; i < 10; ++i) rows.push_back({1});
    rows.push_back({2});
    rows.push_back({2});
    rows.push_back({3});
    rows.push_back({3});
    Dataset ds = int_dataset({"g"}, rows);
    std::vector<RecordIdx> canopy;
    for (RecordIdx r = 0; r < 14; ++r) canopy.push_back(r);
    const std::vector<std::pair<RecordIdx, RecordIdx>> pairs = {
        {0, 1}, {2, 3}, {10, 12}, {10, 11}};
    const HashSpec spec = identity_of("g");

    const bool ok =
        elim_count(ds, canopy, pairs, spec, 5, Strategy::Optimistic) == Rational(1) &&
        elim_count(ds, canopy, pairs, spec, 5, Strategy::Pessimistic) == Rational(3) &&
        elim_count(ds, canopy, pairs, spec, 5, Strategy::Expected) == Rational(2);
    report(4, "elim-count unit vectors (P_h=1, |C1|=10, P(C1)=2, S=5 -> 1 / 3 / 2)", ok);
}

// ---- criterion 5 ----

void criterion_envelope() {
    Rng rng(505);
    size_t violations = 0;
    for (int trial = 0; trial < 500; ++trial) {
        const size_t canopies = 1 + rng.below(50);
        CanopyStats stats;
        for (size_t c = 0; c < canopies; ++c) {
            stats.sizes["c" + std::to_string(c)] = 1 + rng.below(2000);
        }
        const size_t m = 1 + rng.below(16);
        const CostReport cost = assignment_cost(assign_to_machines(stats, m));
        if (!cost.bound_ok) violations++;
    }
    report(5, "greedy machine assignment satisfies X <= cost <= 2X (500 instances)",
           violations == 0, violations ? std::to_string(violations) + " violations" : "");
}

// ---- criteria 6 + 7 ----

void criterion_trends_and_feasibility() {
    Stopwatch watch;
    const std::vector<size_t> sizes = {50, 200, 1000};
    const std::vector<Language> languages = {Language::Random, Language::Single,
                                             Language::Chain, Language::ChainTree,
                                             Language::BlkTree};
    const int rounds = 5;

    // seed-averaged disjoint (round 1) and non-disjoint (all rounds) recall
    std::map<std::pair<size_t, Language>, double> disjoint_sum;
    std::map<std::pair<size_t, Language>, double> nondisjoint_sum;
    bool rounds_monotone = true;
    bool feasible = true;

    for (uint64_t seed = 1; seed <= 5; ++seed) {
        SynthConfig config;
        config.n_base = 9000;
        config.dup_rate = 1000.0 / 9000.0;
        config.skew = 0.3;
        config.seed = seed;
        auto [dataset, pairs] = gen_synthetic(config);
        auto space = enumerate_hash_space(dataset.schema, {1, 3, 5}, {5, 10});

        for (size_t S : sizes) {
            for (Language language : languages) {
                MultiRoundModel model =
                    train_multi_round(dataset, pairs, space, S, language, rounds,
                                      Strategy::Optimistic, seed);
                CanopyAssignment assign = assign_multi_round(model, dataset, seed);

                for (const auto& round : assign.rounds) {
                    for (size_t sz : round.sizes()) {
                        if (sz > S) feasible = false;
                    }
                }

                double last = 0.0;
                CanopyAssignment partial;
                for (size_t r = 0; r < assign.rounds.size(); ++r) {
                    partial.rounds.push_back(assign.rounds[r]);
                    const double now = recall(partial, pairs);
                    if (now + 1e-12 < last) rounds_monotone = false;
                    last = now;
                    if (r == 0) disjoint_sum[{S, language}] += now;
                }
                nondisjoint_sum[{S, language}] += last;
            }
        }
    }

    bool ordering_ok = true;
    bool nd_ok = true;
    std::string detail;
    for (size_t S : sizes) {
        const double blktree = disjoint_sum[{S, Language::BlkTree}];
        const double chain = disjoint_sum[{S, Language::Chain}];
        const double single = disjoint_sum[{S, Language::Single}];
        const double random = disjoint_sum[{S, Language::Random}];
        if (!(blktree >= chain && chain >= single && single >= random)) {
            ordering_ok = false;
        }
        char buf[160];
        std::snprintf(buf, sizeof(buf), " S=%zu: hbt=%.3f c=%.3f sh=%.3f r=%.3f;",
                      S, blktree / 5, chain / 5, single / 5, random / 5);
        detail += buf;
        for (Language language : languages) {
            if (nondisjoint_sum[{S, language}] + 1e-12 < disjoint_sum[{S, language}]) {
                nd_ok = false;
            }
        }
    }

    report(6, "seed-averaged recall ordering blktree >= chain >= single >= random,"
              " non-disjoint >= disjoint, recall non-decreasing in rounds (< 2 min)",
           ordering_ok && nd_ok && rounds_monotone && watch.seconds() < 120.0,
           detail + " " + watch.text());
    report(7, "every emitted canopy fits the bound, for every model in the grid", feasible);
}

// ---- criterion 8 ----

void criterion_throughput() {
    SynthConfig config;
    config.n_base = 91000;
    config.dup_rate = 0.099;
    config.skew = 0.3;
    config.seed = 12;
    auto [dataset, pairs] = gen_synthetic(config);
    auto space = enumerate_hash_space(dataset.schema, {1, 3, 5}, {5, 10});

    BlockingModel model =
        build_blktree(dataset, pairs, space, 1000, Strategy::Optimistic, {}, 12);

    const auto t0 = std::chrono::steady_clock::now();
    auto [round, stats] = assign_canopies(model, dataset, 12);
    const auto t1 = std::chrono::steady_clock::now();
    const double us = std::chrono::duration<double, std::micro>(t1 - t0).count();
    const double per_record = us / static_cast<double>(dataset.size());

    char buf[96];
    std::snprintf(buf, sizeof(buf), "%.2f us/record over %zu records", per_record,
                  dataset.size());
    report(8, "blktree apply under 50 us/record on 100K records", per_record < 50.0, buf);
}

// ---- criterion 9 ----

void criterion_determinism() {
    const fs::path dir = fs::temp_directory_path() / "cblock_acceptance";
    fs::create_directories(dir);
    const std::string data = (dir / "d.jsonl").string();
    const std::string schema = (dir / "s.json").string();
    const std::string pairs = (dir / "p.csv").string();

    auto run = [](const std::string& args) {
        const std::string cmd =
            std::string(CBLOCK_CLI_PATH) + " " + args + " >/dev/null 2>&1";
        const int status = std::system(cmd.c_str());
        return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    };
    auto slurp = [](const fs::path& p) {
        std::ifstream in(p, std::ios::binary);
        std::ostringstream buf;
        buf << in.rdbuf();
        return buf.str();
    };

    bool ok = run("synth --n-base 2000 --dup-rate 0.1 --skew 0.3 --seed 21 --out-data " +
                  data + " --out-schema " + schema + " --out-pairs " + pairs) == 0;
    const std::string args = "experiment --data " + data + " --schema " + schema +
                             " --pairs " + pairs +
                             " --max-sizes 50,200 --languages random,single,blktree"
                             " --rounds 3 --seed 33 --out ";
    ok = ok && run(args + (dir / "r1.csv").string()) == 0;
    ok = ok && run(args + (dir / "r2.csv").string()) == 0;
    const std::string r1 = slurp(dir / "r1.csv");
    ok = ok && !r1.empty() && r1 == slurp(dir / "r2.csv");
    report(9, "two experiment runs with one seed produce byte-identical CSVs", ok);
}

}  // namespace

int main() {
    criterion_drilldown();
    criterion_rollup();
    criterion_blktree_greedy();
    criterion_elim_count();
    criterion_envelope();
    criterion_trends_and_feasibility();
    criterion_throughput();
    criterion_determinism();

    int fails = 0;
    for (const auto& v : g_verdicts) fails += !v.pass;
    if (fails == 0) {
        std::cout << "[OK] acceptance: all " << g_verdicts.size() << " criteria pass\n";
        return 0;
    }
    std::cerr << "[FAILED] acceptance: " << fails << " criteria failing\n";
    return 1;
}
