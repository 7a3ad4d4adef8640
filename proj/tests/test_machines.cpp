// Canopy-to-machine assignment and the cost envelope.

#include "cblock/machines.hpp"
#include "cblock/rng.hpp"

#include "test_util.hpp"

#include <string>

namespace {

using namespace cblock;
using testutil::TestContext;

CanopyStats stats_from(const std::vector<size_t>& sizes) {
    CanopyStats stats;
    for (size_t i = 0; i < sizes.size(); ++i) {
        stats.sizes["c" + std::to_string(i)] = sizes[i];
    }
    return stats;
}

void test_greedy_trace(TestContext& t) {
    // sizes [4,3,3,2], m=2: longest-first gives loads {16+4, 9+9} -> cost 20
    MachineAssignment a = assign_to_machines(stats_from({4, 3, 3, 2}), 2);
    CHECK_EQ(t, a.cost(), 20ull);
    const unsigned long long lo = std::min(a.loads[0], a.loads[1]);
    const unsigned long long hi = std::max(a.loads[0], a.loads[1]);
    CHECK_EQ(t, hi, 20ull);
    CHECK_EQ(t, lo, 18ull);

    // X = max(16, 38/2) = 19, envelope holds
    CostReport report = assignment_cost(a);
    CHECK_EQ(t, report.cost, 20ull);
    CHECK_EQ(t, report.x, 19.0);
    CHECK(t, report.bound_ok);

    // one machine per canopy: cost is the largest squared size
    MachineAssignment spread = assign_to_machines(stats_from({4, 3, 3, 2}), 8);
    CHECK_EQ(t, spread.cost(), 16ull);
    CHECK(t, assignment_cost(spread).bound_ok);

    // single machine: cost is the total
    MachineAssignment one = assign_to_machines(stats_from({4, 3, 3, 2}), 1);
    CHECK_EQ(t, one.cost(), 16ull + 9 + 9 + 4);
    CHECK(t, assignment_cost(one).bound_ok);

    // one canopy: cost = X = |C|^2
    MachineAssignment solo = assign_to_machines(stats_from({5}), 3);
    CHECK_EQ(t, solo.cost(), 25ull);
    CHECK_EQ(t, assignment_cost(solo).x, 25.0);
    CHECK(t, assignment_cost(solo).bound_ok);

    CHECK_THROWS(t, assign_to_machines(stats_from({}), 2));
    CHECK_THROWS(t, assign_to_machines(stats_from({1}), 0));
}

void test_determinism(TestContext& t) {
    CanopyStats stats = stats_from({7, 7, 3, 3, 3, 1});
    MachineAssignment a = assign_to_machines(stats, 3);
    MachineAssignment b = assign_to_machines(stats, 3);
    CHECK(t, a.machine_of == b.machine_of);
    CHECK(t, a.loads == b.loads);
}

void test_envelope_property(TestContext& t) {
    // X <= cost <= 2X over randomized size vectors and machine counts
    Rng rng(2024);
    for (int trial = 0; trial < 500; ++trial) {
        const size_t canopies = 1 + rng.below(40);
        std::vector<size_t> sizes;
        for (size_t c = 0; c < canopies; ++c) sizes.push_back(1 + rng.below(1000));
        const size_t m = 1 + rng.below(12);

        MachineAssignment a = assign_to_machines(stats_from(sizes), m);
        CostReport report = assignment_cost(a);
        CHECK(t, report.bound_ok);
        CHECK(t, report.cost >= a.max_canopy_sq);  // the largest canopy runs somewhere
    }
}

}  // namespace

int main() {
    TestContext t;
    test_greedy_trace(t);
    test_determinism(t);
    test_envelope_property(t);
    return t.finish("test_machines");
}
