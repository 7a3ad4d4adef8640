#include "cblock/io.hpp"

#include "cblock/error.hpp"

#include <json.hpp>

#include <fstream>
#include <sstream>

namespace cblock {

namespace {

using nlohmann::json;

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw io_error("cannot open '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

std::string strip_cr(std::string line) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    return line;
}

std::string trim(const std::string& s) {
    size_t b = s.find_first_not_of(" \t");
    if (b == std::string::npos) return "";
    size_t e = s.find_last_not_of(" \t");
    return s.substr(b, e - b + 1);
}

AttrValue parse_value(const json& v, AttrType type, const std::string& attr, size_t line_no) {
    if (v.is_null()) return std::monostate{};
    if (type == AttrType::String) {
        if (!v.is_string()) {
            throw validation_error("line " + std::to_string(line_no) + ": attribute '" +
                                   attr + "' must be a string or null");
        }
        return v.get<std::string>();
    }
    if (!v.is_number_integer()) {
        throw validation_error("line " + std::to_string(line_no) + ": attribute '" +
                               attr + "' must be an integer or null");
    }
    return v.get<int64_t>();
}

}  // namespace

Schema load_schema(const std::string& path) {
    json doc;
    try {
        doc = json::parse(read_file(path));
    } catch (const json::exception& e) {
        throw io_error("schema '" + path + "': " + e.what());
    }
    if (!doc.is_object()) throw validation_error("schema must be a JSON object");
    Schema schema;
    for (const auto& [name, type] : doc.items()) {
        if (!type.is_string()) {
            throw validation_error("schema: type of '" + name + "' must be a string");
        }
        const std::string t = type.get<std::string>();
        if (t == "string") {
            schema.add(name, AttrType::String);
        } else if (t == "integer") {
            schema.add(name, AttrType::Integer);
        } else {
            throw validation_error("schema: unknown type '" + t + "' for '" + name + "'");
        }
    }
    return schema;
}

Dataset load_dataset(const std::string& path, const std::string& schema_path) {
    Dataset dataset;
    dataset.schema = load_schema(schema_path);

    std::ifstream in(path, std::ios::binary);
    if (!in) throw io_error("cannot open '" + path + "'");

    std::string line;
    size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        line = strip_cr(line);
        if (line.empty()) continue;

        json doc;
        try {
            doc = json::parse(line);
        } catch (const json::exception& e) {
            throw io_error("line " + std::to_string(line_no) + ": " + e.what());
        }
        if (!doc.is_object() || !doc.contains("id") || !doc["id"].is_string()) {
            throw validation_error("line " + std::to_string(line_no) +
                                   ": expected {\"id\": ..., \"attrs\": {...}}");
        }

        Record rec;
        rec.id = doc["id"].get<std::string>();
        rec.attrs.assign(dataset.schema.size(), std::monostate{});
        if (doc.contains("attrs")) {
            const json& attrs = doc["attrs"];
            if (!attrs.is_object()) {
                throw validation_error("line " + std::to_string(line_no) +
                                       ": attrs must be an object");
            }
            for (const auto& [name, value] : attrs.items()) {
                auto idx = dataset.schema.find(name);
                if (!idx) {
                    throw validation_error("line " + std::to_string(line_no) +
                                           ": attribute '" + name + "' not in schema");
                }
                rec.attrs[*idx] =
                    parse_value(value, dataset.schema.types[*idx], name, line_no);
            }
        }
        try {
            dataset.add(std::move(rec));
        } catch (const Error& e) {
            throw validation_error("line " + std::to_string(line_no) + ": " + e.what());
        }
    }
    return dataset;
}

TrainingSet load_pairs(const std::string& path, const Dataset& dataset) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw io_error("cannot open '" + path + "'");

    TrainingSet pairs;
    std::string line;
    size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        line = strip_cr(line);
        if (line.empty()) continue;
        size_t comma = line.find(',');
        if (comma == std::string::npos || line.find(',', comma + 1) != std::string::npos) {
            throw validation_error("line " + std::to_string(line_no) +
                                   ": expected exactly two comma-separated ids");
        }
        const std::string a = trim(line.substr(0, comma));
        const std::string b = trim(line.substr(comma + 1));
        try {
            pairs.add(dataset.require_id(a), dataset.require_id(b));
        } catch (const Error& e) {
            throw validation_error("line " + std::to_string(line_no) + ": " + e.what());
        }
    }
    pairs.dedup();
    return pairs;
}

void write_assignment(std::ostream& out, const CanopyAssignment& assign,
                      const Dataset& dataset) {
    for (size_t r = 0; r < assign.rounds.size(); ++r) {
        const auto& round = assign.rounds[r];
        for (size_t i = 0; i < dataset.size(); ++i) {
            out << dataset.records[i].id << '\t' << r << '\t'
                << round.names[round.canopy_of[i]] << '\n';
        }
    }
}

void write_assignment_file(const std::string& path, const CanopyAssignment& assign,
                           const Dataset& dataset) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw io_error("cannot write '" + path + "'");
    write_assignment(out, assign, dataset);
}

std::vector<LoadedRound> load_assignment_tsv(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw io_error("cannot open '" + path + "'");

    std::vector<LoadedRound> rounds;
    // per round: canopy id -> position in LoadedRound::canopies
    std::vector<std::unordered_map<std::string, size_t>> index;

    std::string line;
    size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        line = strip_cr(line);
        if (line.empty()) continue;
        size_t t1 = line.find('\t');
        size_t t2 = t1 == std::string::npos ? std::string::npos : line.find('\t', t1 + 1);
        if (t2 == std::string::npos) {
            throw validation_error("line " + std::to_string(line_no) +
                                   ": expected record_id<TAB>round<TAB>canopy_id");
        }
        const std::string rec_id = line.substr(0, t1);
        const std::string round_str = line.substr(t1 + 1, t2 - t1 - 1);
        const std::string canopy_id = line.substr(t2 + 1);
        size_t round = 0;
        try {
            round = std::stoul(round_str);
        } catch (const std::exception&) {
            throw validation_error("line " + std::to_string(line_no) +
                                   ": bad round index '" + round_str + "'");
        }
        if (round >= rounds.size()) {
            rounds.resize(round + 1);
            index.resize(round + 1);
        }
        auto& canopies = rounds[round].canopies;
        auto [it, inserted] = index[round].emplace(canopy_id, canopies.size());
        if (inserted) canopies.push_back({canopy_id, {}});
        canopies[it->second].second.push_back(rec_id);
    }
    return rounds;
}

}  // namespace cblock
