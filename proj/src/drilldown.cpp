#include "cblock/drilldown.hpp"

#include "cblock/error.hpp"

#include <algorithm>
#include <memory>
#include <unordered_map>

namespace cblock {

size_t OrderedDomain::index_of(const std::string& value) const {
    auto it = std::lower_bound(values.begin(), values.end(), value,
                               [this](const std::string& a, const std::string& b) {
                                   return ordered_less(ordering, a, b);
                               });
    if (it == values.end() || *it != value) {
        throw validation_error("value '" + value + "' not in the domain");
    }
    return static_cast<size_t>(it - values.begin());
}

void OrderedDomain::validate() const {
    if (values.size() != weights.size()) {
        throw validation_error("domain values and weights differ in length");
    }
    for (size_t i = 1; i < values.size(); ++i) {
        if (!ordered_less(ordering, values[i - 1], values[i])) {
            throw validation_error("domain values must be strictly increasing");
        }
    }
    for (size_t w : weights) {
        if (w == 0) throw validation_error("domain weights must be >= 1");
    }
}

OrderedDomain domain_of_attribute(const Dataset& dataset, const std::string& attribute,
                                  Ordering ordering) {
    size_t idx = dataset.schema.require(attribute);
    AttrType type = dataset.schema.types[idx];
    if (type == AttrType::Integer && ordering != Ordering::Numeric) {
        throw validation_error("integer attribute '" + attribute + "' needs numeric ordering");
    }
    if (type == AttrType::String && ordering == Ordering::Numeric) {
        throw validation_error("string attribute '" + attribute + "' needs a string ordering");
    }

    std::unordered_map<std::string, size_t> counts;
    for (const Record& rec : dataset.records) {
        const AttrValue& v = rec.attrs[idx];
        if (is_null(v)) continue;
        if (const std::string* s = std::get_if<std::string>(&v)) {
            counts[uppercased(*s)]++;
        } else {
            counts[std::to_string(std::get<int64_t>(v))]++;
        }
    }

    OrderedDomain domain;
    domain.ordering = ordering;
    domain.values.reserve(counts.size());
    for (const auto& [v, _] : counts) domain.values.push_back(v);
    std::sort(domain.values.begin(), domain.values.end(),
              [&](const std::string& a, const std::string& b) {
                  return ordered_less(ordering, a, b);
              });
    domain.weights.reserve(domain.values.size());
    for (const auto& v : domain.values) domain.weights.push_back(counts[v]);
    return domain;
}

std::vector<ValuePair> project_pairs(const Dataset& dataset, const TrainingSet& pairs,
                                     const std::string& attribute,
                                     const OrderedDomain& domain) {
    size_t idx = dataset.schema.require(attribute);
    auto value_index = [&](RecordIdx r) -> std::optional<size_t> {
        const AttrValue& v = dataset.value(r, idx);
        if (is_null(v)) return std::nullopt;
        if (const std::string* s = std::get_if<std::string>(&v)) {
            return domain.index_of(uppercased(*s));
        }
        return domain.index_of(std::to_string(std::get<int64_t>(v)));
    };

    std::vector<ValuePair> out;
    for (const auto& [a, b] : pairs.pairs) {
        auto ia = value_index(a);
        auto ib = value_index(b);
        if (!ia || !ib) continue;
        out.push_back({std::min(*ia, *ib), std::max(*ia, *ib)});
    }
    return out;
}

std::vector<std::pair<size_t, size_t>> DccPartition::runs(size_t domain_size) const {
    std::vector<std::pair<size_t, size_t>> out;
    size_t start = 0;
    for (size_t cut : cuts) {
        out.emplace_back(start, cut);
        start = cut + 1;
    }
    if (domain_size > 0) out.emplace_back(start, domain_size - 1);
    return out;
}

CostFn weight_cost(const OrderedDomain& domain) {
    auto prefix = std::make_shared<std::vector<size_t>>();
    prefix->push_back(0);
    for (size_t w : domain.weights) prefix->push_back(prefix->back() + w);
    return [prefix](size_t lo, size_t hi) {
        return static_cast<double>((*prefix)[hi + 1] - (*prefix)[lo]);
    };
}

size_t broken_count(size_t run_lo, size_t run_hi, const std::vector<ValuePair>& pairs) {
    size_t broken = 0;
    for (const auto& p : pairs) {
        if (run_lo <= p.lo && p.lo <= run_hi && p.hi > run_hi) broken++;
    }
    return broken;
}

namespace {

// Memoized suffix solver. One entry per visited suffix start; a suffix with
// no remaining pairs short-circuits to greedy cost-maximal runs.
struct Solver {
    const std::vector<ValuePair>& pairs;  // lo-sorted, lo < hi only
    const CostFn& cost;
    double max_cost;
    size_t domain_size;
    std::vector<size_t> endpoints;  // sorted distinct pair endpoints

    enum class Kind { Cut, Greedy };
    struct Entry {
        size_t violations = 0;
        Kind kind = Kind::Greedy;
        size_t chosen = 0;  // last index of the first run (Kind::Cut)
    };
    std::unordered_map<size_t, Entry> memo;

    // greatest y with cost([a..y]) <= max_cost; cost([a..a]) fits by the
    // upfront feasibility check
    size_t max_end(size_t a) const {
        size_t lo = a;
        size_t hi = domain_size - 1;
        while (lo < hi) {
            size_t mid = lo + (hi - lo + 1) / 2;
            if (cost(a, mid) <= max_cost) {
                lo = mid;
            } else {
                hi = mid - 1;
            }
        }
        return lo;
    }

    size_t first_pair_at_or_after(size_t a) const {
        auto it = std::lower_bound(pairs.begin(), pairs.end(), a,
                                   [](const ValuePair& p, size_t v) { return p.lo < v; });
        return static_cast<size_t>(it - pairs.begin());
    }

    const Entry& solve(size_t a) {
        auto found = memo.find(a);
        if (found != memo.end()) return found->second;

        Entry entry;
        const size_t from = first_pair_at_or_after(a);
        if (from == pairs.size()) {
            entry = Entry{0, Kind::Greedy, 0};
            return memo.emplace(a, entry).first->second;
        }

        const size_t y = max_end(a);
        // interesting endpoints: Y, every pair endpoint in [a, Y], and the
        // position just before every pair endpoint in [a+1, Y+1]
        std::vector<size_t> cands{y};
        for (size_t e : endpoints) {
            if (e >= a && e <= y) cands.push_back(e);
            if (e >= a + 1 && e <= y + 1) cands.push_back(e - 1);
        }
        std::sort(cands.begin(), cands.end());
        cands.erase(std::unique(cands.begin(), cands.end()), cands.end());

        // suffix pairs sorted by hi, for O(log) broken counts
        std::vector<size_t> his;
        his.reserve(pairs.size() - from);
        for (size_t i = from; i < pairs.size(); ++i) his.push_back(pairs[i].hi);
        std::sort(his.begin(), his.end());

        bool have = false;
        size_t best_viol = 0;
        size_t best_p = 0;
        for (size_t p : cands) {  // ascending
            // B([a,p]) = #{a <= lo <= p < hi}
            auto lo_end = std::upper_bound(pairs.begin() + static_cast<long>(from),
                                           pairs.end(), p,
                                           [](size_t v, const ValuePair& q) {
                                               return v < q.lo;
                                           });
            const size_t lo_in = static_cast<size_t>(lo_end - pairs.begin()) - from;
            const size_t hi_in = static_cast<size_t>(
                std::upper_bound(his.begin(), his.end(), p) - his.begin());
            const size_t broken = lo_in - hi_in;

            const size_t tail = p + 1 < domain_size ? solve(p + 1).violations : 0;
            const size_t total = broken + tail;
            if (!have || total < best_viol) {
                have = true;
                best_viol = total;
                best_p = p;
            } else if (total == best_viol && p + 1 == domain_size) {
                // lexicographically smallest cut list: a run to the very end
                // contributes no cut at all, beating any earlier tie
                best_p = p;
            }
        }
        entry = Entry{best_viol, Kind::Cut, best_p};
        return memo.emplace(a, entry).first->second;
    }
};

}  // namespace

DrilldownResult drill_down(const OrderedDomain& domain, const std::vector<ValuePair>& pairs,
                           const CostFn& cost, double max_cost) {
    domain.validate();
    DrilldownResult result;
    if (domain.size() == 0) return result;

    for (size_t v = 0; v < domain.size(); ++v) {
        if (cost(v, v) > max_cost) {
            throw validation_error("no feasible partition: value '" + domain.values[v] +
                                   "' alone exceeds the cost bound");
        }
    }

    std::vector<ValuePair> active;
    for (const ValuePair& p : pairs) {
        if (p.lo >= domain.size() || p.hi >= domain.size()) {
            throw validation_error("pair endpoint outside the domain");
        }
        if (p.lo < p.hi) active.push_back(p);  // lo == hi is always covered
    }
    std::sort(active.begin(), active.end(), [](const ValuePair& a, const ValuePair& b) {
        if (a.lo != b.lo) return a.lo < b.lo;
        return a.hi < b.hi;
    });

    Solver solver{active, cost, max_cost, domain.size(), {}, {}};
    for (const ValuePair& p : active) {
        solver.endpoints.push_back(p.lo);
        solver.endpoints.push_back(p.hi);
    }
    std::sort(solver.endpoints.begin(), solver.endpoints.end());
    solver.endpoints.erase(std::unique(solver.endpoints.begin(), solver.endpoints.end()),
                           solver.endpoints.end());

    result.violations = solver.solve(0).violations;

    // reconstruct the canonical partition
    size_t at = 0;
    while (at < domain.size()) {
        const Solver::Entry& entry = solver.solve(at);
        size_t end;
        if (entry.kind == Solver::Kind::Greedy) {
            end = solver.max_end(at);  // largest feasible run, left to right
        } else {
            end = entry.chosen;
        }
        if (end + 1 < domain.size()) result.partition.cuts.push_back(end);
        at = end + 1;
    }
    return result;
}

HashSpec partition_to_hash(const std::string& attribute, const OrderedDomain& domain,
                           const DccPartition& partition) {
    if (domain.size() == 0) throw validation_error("empty partition");
    HashSpec spec;
    spec.attribute = attribute;
    spec.kind = HashKind::IntervalPartition;
    spec.ordering = domain.ordering;
    for (const auto& [lo, hi] : partition.runs(domain.size())) {
        (void)hi;
        spec.boundaries.push_back(domain.values[lo]);
    }
    spec.param = static_cast<int>(spec.boundaries.size());
    spec.id = spec_id(attribute, HashKind::IntervalPartition, spec.param);
    return spec;
}

std::vector<PairInterval> nondisjoint_drilldown(const std::vector<ValuePair>& pairs,
                                                const CostFn& cost, double max_cost) {
    std::vector<PairInterval> out;
    out.reserve(pairs.size());
    for (const ValuePair& p : pairs) {
        out.push_back({p.lo, p.hi, cost(p.lo, p.hi) <= max_cost});
    }
    return out;
}

}  // namespace cblock
