#include "cblock/machines.hpp"

#include "cblock/error.hpp"

#include <algorithm>

namespace cblock {

unsigned long long MachineAssignment::cost() const {
    unsigned long long c = 0;
    for (unsigned long long load : loads) c = std::max(c, load);
    return c;
}

MachineAssignment assign_to_machines(const CanopyStats& stats, size_t machines) {
    if (machines < 1) throw validation_error("machine count must be >= 1");
    if (stats.sizes.empty()) throw validation_error("no canopies to assign");

    // canopies by squared size descending, ties by id
    std::vector<std::pair<std::string, unsigned long long>> items;
    items.reserve(stats.sizes.size());
    for (const auto& [id, s] : stats.sizes) {
        items.emplace_back(id, static_cast<unsigned long long>(s) *
                                   static_cast<unsigned long long>(s));
    }
    std::sort(items.begin(), items.end(), [](const auto& a, const auto& b) {
        if (a.second != b.second) return a.second > b.second;
        return a.first < b.first;
    });

    MachineAssignment out;
    out.loads.assign(machines, 0);
    for (const auto& [id, sq] : items) {
        size_t target = 0;
        for (size_t m = 1; m < machines; ++m) {
            if (out.loads[m] < out.loads[target]) target = m;
        }
        out.machine_of[id] = target;
        out.loads[target] += sq;
        out.max_canopy_sq = std::max(out.max_canopy_sq, sq);
        out.total_sq += sq;
    }
    return out;
}

CostReport assignment_cost(const MachineAssignment& assign) {
    CostReport report;
    report.cost = assign.cost();
    const size_t m = assign.loads.size();

    // X = max(max |C|^2, sum |C|^2 / m) without leaving the integers:
    // X <= cost  <=>  max_sq <= cost and total <= m*cost
    // cost <= 2X <=>  cost <= 2*max_sq or m*cost <= 2*total
    const unsigned __int128 m_cost =
        static_cast<unsigned __int128>(m) * assign.cost();
    const bool lower_ok =
        assign.max_canopy_sq <= report.cost && assign.total_sq <= m_cost;
    const bool upper_ok = report.cost <= 2 * assign.max_canopy_sq ||
                          m_cost <= static_cast<unsigned __int128>(2) * assign.total_sq;
    report.bound_ok = lower_ok && upper_ok;
    report.x = std::max(static_cast<double>(assign.max_canopy_sq),
                        static_cast<double>(assign.total_sq) / static_cast<double>(m));
    return report;
}

}  // namespace cblock
