#pragma once

#include "cblock/record.hpp"

#include <cstdint>
#include <string>
#include <utility>

namespace cblock {

// Per-attribute perturbation probabilities. `missing` applies when the base
// record is generated (the attribute is simply absent from the feed); the
// rest apply to the duplicated copy.
struct Perturbation {
    double null_out = 0.0;
    double truncate = 0.0;       // strings: keep a prefix
    double numeric_delta = 0.0;  // integers: +/-1
    double missing = 0.0;        // base records without the attribute
};

// Skewed movie-style generator: attributes title, director (strings) and
// year, runtime (integers). `skew` is the fraction of base records with a
// null title; the other attributes are partially populated per their
// `missing` rates. Each duplicated record gets a perturbed copy and one
// labeled pair. Deterministic per seed.
struct SynthConfig {
    size_t n_base = 1000;
    double dup_rate = 0.1;
    double skew = 0.0;
    uint64_t seed = 42;
    Perturbation title{0.02, 0.15, 0.0, 0.0};
    Perturbation director{0.06, 0.0, 0.0, 0.25};
    Perturbation year{0.03, 0.0, 0.05, 0.25};
    Perturbation runtime{0.03, 0.0, 0.06, 0.25};

    void validate() const;  // throws on probabilities outside [0,1]
};

std::pair<Dataset, TrainingSet> gen_synthetic(const SynthConfig& config);

}  // namespace cblock
