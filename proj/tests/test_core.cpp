// Data model, loaders, and the recall metric.

#include "cblock/canopy.hpp"
#include "cblock/error.hpp"
#include "cblock/io.hpp"
#include "cblock/rng.hpp"

#include "oracles.hpp"
#include "test_util.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>

namespace {

using namespace cblock;
using testutil::TestContext;

std::filesystem::path g_dir;

std::string write_temp(const std::string& name, const std::string& content) {
    auto path = g_dir / name;
    std::ofstream out(path, std::ios::binary);
    out << content;
    return path.string();
}

const char* kSchema = R"({"title":"string","year":"integer"})";

void test_load_dataset(TestContext& t) {
    std::string schema = write_temp("s.json", kSchema);
    std::string data = write_temp("d.jsonl",
        "{\"id\":\"r1\",\"attrs\":{\"title\":\"Titanic\",\"year\":1997}}\n"
        "{\"id\":\"r2\",\"attrs\":{\"title\":\"Heat\"}}\n"
        "{\"id\":\"r3\",\"attrs\":{\"year\":null}}\n");

    Dataset ds = load_dataset(data, schema);
    CHECK_EQ(t, ds.size(), 3u);
    CHECK_EQ(t, ds.records[0].id, "r1");
    // missing and explicit-null attributes are both null
    const size_t year = ds.schema.require("year");
    CHECK(t, is_null(ds.value(1, year)));
    CHECK(t, is_null(ds.value(2, year)));
    CHECK_EQ(t, std::get<int64_t>(ds.value(0, year)), 1997);

    // duplicate id
    std::string dup = write_temp("dup.jsonl",
        "{\"id\":\"r1\",\"attrs\":{}}\n{\"id\":\"r1\",\"attrs\":{}}\n");
    CHECK_THROWS(t, load_dataset(dup, schema));

    // malformed line reports its number
    std::string bad = write_temp("bad.jsonl",
        "{\"id\":\"r1\",\"attrs\":{}}\nnot json\n");
    try {
        load_dataset(bad, schema);
        CHECK(t, false);
    } catch (const Error& e) {
        CHECK(t, std::string(e.what()).find("line 2") != std::string::npos);
    }

    // schema type enforcement
    std::string wrong = write_temp("wrong.jsonl",
        "{\"id\":\"r1\",\"attrs\":{\"year\":\"1997\"}}\n");
    CHECK_THROWS(t, load_dataset(wrong, schema));
    std::string unknown = write_temp("unknown.jsonl",
        "{\"id\":\"r1\",\"attrs\":{\"genre\":\"x\"}}\n");
    CHECK_THROWS(t, load_dataset(unknown, schema));
}

void test_load_pairs(TestContext& t) {
    std::string schema = write_temp("s.json", kSchema);
    std::string data = write_temp("p_d.jsonl",
        "{\"id\":\"a\",\"attrs\":{}}\n{\"id\":\"b\",\"attrs\":{}}\n{\"id\":\"c\",\"attrs\":{}}\n");
    Dataset ds = load_dataset(data, schema);

    std::string pairs_csv = write_temp("p.csv", "a,b\nb,a\na,b\n");
    TrainingSet pairs = load_pairs(pairs_csv, ds);
    CHECK_EQ(t, pairs.size(), 1u);  // unordered dedup

    CHECK_THROWS(t, load_pairs(write_temp("self.csv", "a,a\n"), ds));
    CHECK_THROWS(t, load_pairs(write_temp("unk.csv", "a,zzz\n"), ds));
}

CanopyAssignment one_round(std::vector<CanopyIdx> canopy_of, std::vector<std::string> names) {
    RoundAssignment round;
    round.names = std::move(names);
    round.canopy_of = std::move(canopy_of);
    CanopyAssignment assign;
    assign.rounds.push_back(std::move(round));
    return assign;
}

void test_recall(TestContext& t) {
    // 6 records, T+ of 5 pairs, everything in one canopy
    TrainingSet five;
    five.add(0, 1);
    five.add(1, 2);
    five.add(2, 3);
    five.add(3, 4);
    five.add(4, 5);

    auto all_one = one_round({0, 0, 0, 0, 0, 0}, {"c"});
    CHECK_EQ(t, recall(all_one, five), 1.0);

    auto singletons = one_round({0, 1, 2, 3, 4, 5}, {"a", "b", "c", "d", "e", "f"});
    CHECK_EQ(t, recall(singletons, five), 0.0);

    // two rounds: round 1 co-blocks p1={0,1}, round 2 co-blocks p2={2,3};
    // p3={4,5} never co-blocked -> 2/3
    TrainingSet three;
    three.add(0, 1);
    three.add(2, 3);
    three.add(4, 5);
    CanopyAssignment assign;
    assign.rounds.push_back(
        one_round({0, 0, 1, 2, 3, 4}, {"x", "y", "z", "w", "v"}).rounds[0]);
    assign.rounds.push_back(
        one_round({0, 1, 2, 2, 3, 4}, {"x", "y", "z", "w", "v"}).rounds[0]);
    const double expect = 2.0 / 3.0;  // frozen from hand enumeration
    CHECK_EQ(t, recall(assign, three), expect);
    CHECK_EQ(t, oracles::recall_brute(assign, three), expect);

    TrainingSet empty;
    CHECK_THROWS(t, recall(assign, empty));
}

void test_recall_properties(TestContext& t) {
    // random assignments: recall == brute force, and appending rounds never
    // lowers it
    Rng rng(7);
    for (int trial = 0; trial < 50; ++trial) {
        const size_t n = 4 + rng.below(12);
        TrainingSet pairs;
        for (size_t i = 0; i + 1 < n && pairs.size() < 6; i += 2) {
            pairs.add(static_cast<RecordIdx>(i), static_cast<RecordIdx>(i + 1));
        }
        CanopyAssignment assign;
        double last = 0.0;
        for (int r = 0; r < 3; ++r) {
            const size_t canopies = 1 + rng.below(4);
            RoundAssignment round;
            for (size_t c = 0; c < canopies; ++c) {
                round.names.push_back("c" + std::to_string(r) + "_" + std::to_string(c));
            }
            for (size_t i = 0; i < n; ++i) {
                round.canopy_of.push_back(static_cast<CanopyIdx>(rng.below(canopies)));
            }
            assign.rounds.push_back(std::move(round));

            const double now = recall(assign, pairs);
            CHECK_EQ(t, now, oracles::recall_brute(assign, pairs));
            CHECK(t, now >= last);
            last = now;
        }
    }
}

void test_assignment_tsv(TestContext& t) {
    std::string schema = write_temp("s.json", kSchema);
    std::string data = write_temp("t_d.jsonl",
        "{\"id\":\"a\",\"attrs\":{}}\n{\"id\":\"b\",\"attrs\":{}}\n");
    Dataset ds = load_dataset(data, schema);

    auto assign = one_round({0, 1}, {"c0", "c1"});
    std::string path = (g_dir / "assign.tsv").string();
    write_assignment_file(path, assign, ds);

    auto rounds = load_assignment_tsv(path);
    CHECK_EQ(t, rounds.size(), 1u);
    CHECK_EQ(t, rounds[0].canopies.size(), 2u);
    CHECK_EQ(t, rounds[0].canopies[0].first, "c0");
    CHECK_EQ(t, rounds[0].canopies[0].second.size(), 1u);

    check_covering(assign, ds);  // covering + named canopies hold
    CanopyAssignment broken = assign;
    broken.rounds[0].canopy_of.pop_back();
    CHECK_THROWS(t, check_covering(broken, ds));
}

}  // namespace

int main() {
    g_dir = std::filesystem::temp_directory_path() / "cblock_test_core";
    std::filesystem::create_directories(g_dir);

    TestContext t;
    test_load_dataset(t);
    test_load_pairs(t);
    test_recall(t);
    test_recall_properties(t);
    test_assignment_tsv(t);
    return t.finish("test_core");
}
