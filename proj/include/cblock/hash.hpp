#pragma once

#include "cblock/record.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace cblock {

// Reserved key for null attribute values; every hash function is total.
inline constexpr const char* kNullKey = "\xE2\x9F\x82NULL";  // U+27C2 + "NULL"

enum class HashKind {
    Identity,
    Prefix,
    Suffix,
    FreqChars,
    LongestToken,
    Round,
    FirstName,
    LastName,
    IntervalPartition,
};

const char* kind_name(HashKind kind);
HashKind kind_from_name(const std::string& name);

// Total orderings for interval-partition boundaries. Strings are compared
// after the same uppercasing the hash functions apply.
enum class Ordering { Lexicographic, Numeric, LastNameFirst };

const char* ordering_name(Ordering o);
Ordering ordering_from_name(const std::string& name);

// Strict comparison of two values under an ordering. Numeric ordering parses
// both sides as integers; the string orderings compare bytes.
bool ordered_less(Ordering ordering, const std::string& a, const std::string& b);

// One atomic hash function over a single attribute.
struct HashSpec {
    std::string id;
    std::string attribute;
    HashKind kind = HashKind::Identity;
    int param = 0;  // K for prefix/suffix/freq_chars, k for round, else 0

    // interval_partition only: run-start boundaries, strictly increasing
    // under `ordering` (integer boundaries rendered as decimal strings).
    std::vector<std::string> boundaries;
    Ordering ordering = Ordering::Lexicographic;
};

// Stable id "attr:kind:param" (interval specs use the run count as param).
std::string spec_id(const std::string& attribute, HashKind kind, int param);

// Throws if the spec is malformed or type-incompatible with the schema.
void validate_spec(const HashSpec& spec, const Schema& schema);

// ASCII uppercase, other bytes untouched. Applied to every string value
// before hashing.
std::string uppercased(std::string_view s);

// Hash key for one attribute value (already schema-typed). Deterministic and
// total: null maps to kNullKey.
std::string apply_hash_value(const HashSpec& spec, const AttrValue& value);

// Hash key for a record. Throws on kind/attribute-type mismatch.
std::string apply_hash(const HashSpec& spec, const Record& record, const Schema& schema);

// Attribute index resolved once; the form the learners use on hot paths.
struct CompiledHash {
    const HashSpec* spec = nullptr;
    size_t attr_idx = 0;
};
CompiledHash compile_hash(const HashSpec& spec, const Schema& schema);

inline std::string apply_hash(const CompiledHash& h, const Dataset& dataset, RecordIdx r) {
    return apply_hash_value(*h.spec, dataset.value(r, h.attr_idx));
}

// The generated space H: for each string attribute identity, prefix(K),
// suffix(K), freq_chars(K) for every K, longest_token, first_name,
// last_name; for each integer attribute identity and round(k) for every k.
// Ordered by attribute name, then kind, then parameter.
std::vector<HashSpec> enumerate_hash_space(const Schema& schema,
                                           const std::vector<int>& prefix_lengths,
                                           const std::vector<int>& round_widths);

}  // namespace cblock
