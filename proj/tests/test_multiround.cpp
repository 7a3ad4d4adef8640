// Non-disjoint blocking as rounds of disjoint blocking, plus its cost metric.

#include "cblock/multiround.hpp"
#include "cblock/rng.hpp"

#include "test_util.hpp"

#include <string>

namespace {

using namespace cblock;
using testutil::TestContext;

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

void test_round_counts(TestContext& t) {
    // round 1 covers everything: one round regardless of R
    Dataset ds = int_dataset({"a"}, {{1}, {1}, {2}, {2}});
    TrainingSet pairs;
    pairs.add(0, 1);
    pairs.add(2, 3);
    auto space = std::vector<HashSpec>{identity_of("a")};

    MultiRoundModel m = train_multi_round(ds, pairs, space, 2, Language::BlkTree, 5,
                                          Strategy::Optimistic, 42);
    CHECK_EQ(t, m.rounds.size(), 1u);
    CHECK_EQ(t, m.covered_per_round[0].size(), 2u);

    // a residual pair no spec can cover stops the loop before R
    Dataset ds2 = int_dataset({"a"}, {{1}, {2}, {3}, {4}});
    TrainingSet hard;
    hard.add(0, 1);
    MultiRoundModel m2 = train_multi_round(ds2, hard, space, 1, Language::BlkTree, 5,
                                           Strategy::Optimistic, 42);
    CHECK(t, m2.rounds.size() < 5u);
    CHECK(t, m2.covered_per_round.back().empty());
}

void test_two_round_union(TestContext& t) {
    // spec A co-keys p1 only, spec B co-keys p2 only; S forces single-hash
    // rounds; the union reaches both pairs
    Dataset ds = int_dataset({"a", "b"},
                             {{1, 5}, {1, 6}, {2, 7}, {3, 7}, {4, 8}, {5, 9}});
    TrainingSet pairs;
    pairs.add(0, 1);  // same a, different b
    pairs.add(2, 3);  // same b, different a
    auto space = std::vector<HashSpec>{identity_of("a"), identity_of("b")};

    MultiRoundModel m = train_multi_round(ds, pairs, space, 2, Language::Single, 5,
                                          Strategy::Optimistic, 42);
    CHECK_EQ(t, m.rounds.size(), 2u);
    CanopyAssignment assign = assign_multi_round(m, ds, 42);
    CHECK_EQ(t, recall(assign, pairs), 1.0);

    // union recall equals recall of the concatenated assignment, and the
    // per-round residual shrinks strictly while the loop continues
    size_t covered_so_far = 0;
    for (const auto& covered : m.covered_per_round) {
        CHECK(t, !covered.empty());
        covered_so_far += covered.size();
    }
    CHECK_EQ(t, covered_so_far, pairs.size());
}

void test_multiround_model_json(TestContext& t) {
    Dataset ds = int_dataset({"a"}, {{1}, {1}, {2}, {2}, {3}, {3}});
    TrainingSet pairs;
    pairs.add(0, 1);
    pairs.add(2, 3);
    auto space = std::vector<HashSpec>{identity_of("a")};
    MultiRoundModel m = train_multi_round(ds, pairs, space, 2, Language::BlkTree, 3,
                                          Strategy::Optimistic, 7);
    MultiRoundModel reloaded = MultiRoundModel::from_json(m.to_json());
    CHECK_EQ(t, reloaded.to_json(), m.to_json());
    CHECK_EQ(t, reloaded.rounds.size(), m.rounds.size());
}

void test_nondisjoint_cost(TestContext& t) {
    CHECK_EQ(t, nondisjoint_cost(std::vector<size_t>{3, 2}), 14ull);  // 9 + 5

    // k singletons: 1 + k
    CHECK_EQ(t, nondisjoint_cost(std::vector<size_t>{1, 1, 1, 1, 1}), 6ull);

    // all-pairs canopies over |U| = 4: six canopies of size 2 -> 4 + 12
    CHECK_EQ(t, nondisjoint_cost(std::vector<size_t>(6, 2)), 16ull);

    CHECK_THROWS(t, nondisjoint_cost(std::vector<size_t>{}));

    // the CanopyStats overload pools rounds
    CanopyStats r1;
    r1.sizes = {{"a", 3}};
    CanopyStats r2;
    r2.sizes = {{"b", 2}};
    CHECK_EQ(t, nondisjoint_cost(std::vector<CanopyStats>{r1, r2}), 14ull);
}

void test_round_cap_and_feasibility(TestContext& t) {
    Rng rng(31337);
    for (int trial = 0; trial < 15; ++trial) {
        const size_t n = 10 + rng.below(20);
        std::vector<std::vector<int64_t>> rows;
        for (size_t i = 0; i < n; ++i) {
            rows.push_back({static_cast<int64_t>(rng.below(4)),
                            static_cast<int64_t>(rng.below(5))});
        }
        Dataset ds = int_dataset({"a", "b"}, rows);
        TrainingSet pairs;
        for (int p = 0; p < 8; ++p) {
            RecordIdx x = static_cast<RecordIdx>(rng.below(n));
            RecordIdx y = static_cast<RecordIdx>(rng.below(n));
            if (x != y) pairs.add(x, y);
        }
        pairs.dedup();
        if (pairs.empty()) continue;
        auto space = std::vector<HashSpec>{identity_of("a"), identity_of("b")};
        const int R = 1 + static_cast<int>(rng.below(4));
        const size_t S = 2 + rng.below(6);

        MultiRoundModel m = train_multi_round(ds, pairs, space, S, Language::BlkTree, R,
                                              Strategy::Optimistic, trial);
        CHECK(t, m.rounds.size() <= static_cast<size_t>(R));

        CanopyAssignment assign = assign_multi_round(m, ds, trial);
        for (const auto& round : assign.rounds) {
            for (size_t sz : round.sizes()) CHECK(t, sz <= S);
        }

        // recall is non-decreasing in the number of rounds applied
        double last = 0.0;
        CanopyAssignment partial;
        for (const auto& round : assign.rounds) {
            partial.rounds.push_back(round);
            const double now = recall(partial, pairs);
            CHECK(t, now >= last);
            last = now;
        }
    }
}

}  // namespace

int main() {
    TestContext t;
    test_round_counts(t);
    test_two_round_union(t);
    test_multiround_model_json(t);
    test_nondisjoint_cost(t);
    test_round_cap_and_feasibility(t);
    return t.finish("test_multiround");
}
