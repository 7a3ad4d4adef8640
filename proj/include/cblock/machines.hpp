#pragma once

#include "cblock/canopy.hpp"

#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace cblock {

// Canopy-to-machine assignment under the pairwise-comparison load model:
// a canopy of size s costs s^2 on its machine.
struct MachineAssignment {
    std::map<std::string, size_t> machine_of;     // canopy id -> machine
    std::vector<unsigned long long> loads;        // per machine, sum of s^2
    unsigned long long max_canopy_sq = 0;         // max |C_i|^2
    unsigned long long total_sq = 0;              // sum |C_i|^2

    unsigned long long cost() const;  // max load
};

// Longest-first greedy: canopies by |C|^2 descending (ties by id), each to
// the currently least-loaded machine. Throws on empty stats or m < 1.
MachineAssignment assign_to_machines(const CanopyStats& stats, size_t machines);

// cost = max load, X = max(max |C|^2, sum |C|^2 / m), bound_ok = X <= cost <= 2X.
// Comparisons are exact (integer cross-multiplication); x is the double view.
struct CostReport {
    unsigned long long cost = 0;
    double x = 0.0;
    bool bound_ok = false;
};
CostReport assignment_cost(const MachineAssignment& assign);

}  // namespace cblock
