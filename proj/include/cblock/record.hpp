#pragma once

#include "cblock/error.hpp"

#include <algorithm>
#include <cstdint>
#include <optional>
#include <string>
#include <unordered_map>
#include <utility>
#include <variant>
#include <vector>

namespace cblock {

using RecordIdx = uint32_t;

enum class AttrType { String, Integer };

// Null is first-class (monostate), distinct from the empty string.
using AttrValue = std::variant<std::monostate, std::string, int64_t>;

inline bool is_null(const AttrValue& v) {
    return std::holds_alternative<std::monostate>(v);
}

struct Schema {
    std::vector<std::string> names;  // file order
    std::vector<AttrType> types;
    std::unordered_map<std::string, size_t> index;

    size_t size() const { return names.size(); }

    void add(std::string name, AttrType type) {
        if (index.count(name)) {
            throw validation_error("schema: duplicate attribute '" + name + "'");
        }
        index.emplace(name, names.size());
        names.push_back(std::move(name));
        types.push_back(type);
    }

    std::optional<size_t> find(const std::string& name) const {
        auto it = index.find(name);
        if (it == index.end()) return std::nullopt;
        return it->second;
    }

    size_t require(const std::string& name) const {
        auto idx = find(name);
        if (!idx) throw validation_error("unknown attribute '" + name + "'");
        return *idx;
    }
};

// attrs is aligned to the schema: attrs[i] is the value of schema.names[i].
struct Record {
    std::string id;
    std::vector<AttrValue> attrs;
};

// Record iteration order is file order; all algorithms enumerate records in
// this order so runs are reproducible.
struct Dataset {
    Schema schema;
    std::vector<Record> records;
    std::unordered_map<std::string, RecordIdx> id_index;

    size_t size() const { return records.size(); }

    void add(Record rec) {
        if (rec.id.empty()) throw validation_error("record with empty id");
        if (id_index.count(rec.id)) {
            throw validation_error("duplicate record id '" + rec.id + "'");
        }
        rec.attrs.resize(schema.size());
        id_index.emplace(rec.id, static_cast<RecordIdx>(records.size()));
        records.push_back(std::move(rec));
    }

    RecordIdx require_id(const std::string& id) const {
        auto it = id_index.find(id);
        if (it == id_index.end()) {
            throw validation_error("unknown record id '" + id + "'");
        }
        return it->second;
    }

    const AttrValue& value(RecordIdx r, size_t attr_idx) const {
        return records[r].attrs[attr_idx];
    }
};

// Labeled duplicate pairs, held as record indices with lo < hi, deduplicated.
struct TrainingSet {
    std::vector<std::pair<RecordIdx, RecordIdx>> pairs;

    size_t size() const { return pairs.size(); }
    bool empty() const { return pairs.empty(); }

    // Normalizes, rejects self-pairs, drops unordered duplicates.
    void add(RecordIdx a, RecordIdx b) {
        if (a == b) throw validation_error("self-pair in training set");
        if (a > b) std::swap(a, b);
        pairs.emplace_back(a, b);
    }

    void dedup() {
        std::sort(pairs.begin(), pairs.end());
        pairs.erase(std::unique(pairs.begin(), pairs.end()), pairs.end());
    }
};

}  // namespace cblock
