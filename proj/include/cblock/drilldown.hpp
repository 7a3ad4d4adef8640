#pragma once

#include "cblock/hash.hpp"
#include "cblock/record.hpp"

#include <cstddef>
#include <functional>
#include <string>
#include <vector>

namespace cblock {

// Sorted distinct attribute values under a chosen total ordering, with
// per-value record counts. Drill-down runs on value indices; on a finite
// ordered value set, the open/closed interval variants collapse to cut
// positions between adjacent values.
struct OrderedDomain {
    std::vector<std::string> values;  // strictly increasing under `ordering`
    std::vector<size_t> weights;      // per-value record counts, >= 1
    Ordering ordering = Ordering::Lexicographic;

    size_t size() const { return values.size(); }
    size_t index_of(const std::string& value) const;  // throws if absent

    // Throws if values are not strictly increasing under `ordering` or a
    // weight is zero.
    void validate() const;
};

// Non-null values of one attribute, ordered and counted. String values are
// uppercased first, matching the hash functions.
OrderedDomain domain_of_attribute(const Dataset& dataset, const std::string& attribute,
                                  Ordering ordering);

// A duplicate pair projected onto the domain: value indices, lo <= hi.
struct ValuePair {
    size_t lo = 0;
    size_t hi = 0;
};

// Training pairs whose endpoints both have a non-null value for the
// attribute; pairs with equal values collapse to lo == hi.
std::vector<ValuePair> project_pairs(const Dataset& dataset, const TrainingSet& pairs,
                                     const std::string& attribute, const OrderedDomain& domain);

// Contiguous runs over the domain: run i is [cuts[i-1]+1 .. cuts[i]], with a
// final run ending at the last value. `cuts` lists the last index of every
// run except the final one.
struct DccPartition {
    std::vector<size_t> cuts;

    size_t run_count() const { return cuts.size() + 1; }
    std::vector<std::pair<size_t, size_t>> runs(size_t domain_size) const;
};

// Monotone cost of an inclusive index run [lo..hi].
using CostFn = std::function<double(size_t lo, size_t hi)>;

// Default cost: total record weight inside the run.
CostFn weight_cost(const OrderedDomain& domain);

// Pairs whose lo lies inside the run but hi lies beyond it.
size_t broken_count(size_t run_lo, size_t run_hi, const std::vector<ValuePair>& pairs);

struct DrilldownResult {
    DccPartition partition;
    size_t violations = 0;
};

// Minimum-violation DCC partition with every run's cost <= max_cost, by
// memoized recursion over suffixes at interesting endpoints. Pairs with
// lo == hi are always covered and ignored. Throws if any single value
// already exceeds max_cost (no feasible partition exists).
DrilldownResult drill_down(const OrderedDomain& domain, const std::vector<ValuePair>& pairs,
                           const CostFn& cost, double max_cost);

// The partition as an interval_partition hash: boundaries are run-start
// values; out-of-domain values clamp to the first/last run.
HashSpec partition_to_hash(const std::string& attribute, const OrderedDomain& domain,
                           const DccPartition& partition);

// Non-disjoint variant: one interval per pair, kept iff its own cost fits.
struct PairInterval {
    size_t lo = 0;
    size_t hi = 0;
    bool covered = false;
};
std::vector<PairInterval> nondisjoint_drilldown(const std::vector<ValuePair>& pairs,
                                                const CostFn& cost, double max_cost);

}  // namespace cblock
