#include "cblock/hash.hpp"

#include "cblock/error.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <charconv>
#include <string_view>

namespace cblock {

namespace {

bool is_string_kind(HashKind kind) {
    switch (kind) {
        case HashKind::Prefix:
        case HashKind::Suffix:
        case HashKind::FreqChars:
        case HashKind::LongestToken:
        case HashKind::FirstName:
        case HashKind::LastName:
            return true;
        default:
            return false;
    }
}

bool is_space(char c) { return c == ' ' || c == '\t' || c == '\n' || c == '\r'; }

std::vector<std::string_view> tokens(std::string_view s) {
    std::vector<std::string_view> out;
    size_t i = 0;
    while (i < s.size()) {
        while (i < s.size() && is_space(s[i])) ++i;
        size_t b = i;
        while (i < s.size() && !is_space(s[i])) ++i;
        if (i > b) out.push_back(s.substr(b, i - b));
    }
    return out;
}

int64_t parse_int(const std::string& s, const char* what) {
    int64_t v = 0;
    auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || p != s.data() + s.size()) {
        throw validation_error(std::string(what) + ": not an integer: '" + s + "'");
    }
    return v;
}

// Floored modulo, so round(k) keys are the floor multiples for negatives too.
int64_t floor_multiple(int64_t x, int64_t k) {
    int64_t m = x % k;
    if (m < 0) m += k;
    return x - m;
}

// last-name-first: compare by last whitespace token, ties by the full string.
bool lastname_less(std::string_view a, std::string_view b) {
    auto ta = tokens(a);
    auto tb = tokens(b);
    std::string_view la = ta.empty() ? std::string_view{} : ta.back();
    std::string_view lb = tb.empty() ? std::string_view{} : tb.back();
    if (la != lb) return la < lb;
    return a < b;
}

// Index of the run whose start is the greatest boundary <= value; clamps
// below the first boundary to run 0.
size_t interval_index(const HashSpec& spec, const std::string& value) {
    size_t run = 0;
    for (size_t i = 1; i < spec.boundaries.size(); ++i) {
        if (ordered_less(spec.ordering, value, spec.boundaries[i])) break;
        run = i;
    }
    return run;
}

const std::string& string_value(const HashSpec& spec, const AttrValue& value) {
    const std::string* s = std::get_if<std::string>(&value);
    if (!s) {
        throw validation_error("hash '" + spec.id + "' needs a string attribute");
    }
    return *s;
}

int64_t int_value(const HashSpec& spec, const AttrValue& value) {
    const int64_t* x = std::get_if<int64_t>(&value);
    if (!x) {
        throw validation_error("hash '" + spec.id + "' needs an integer attribute");
    }
    return *x;
}

}  // namespace

bool ordered_less(Ordering ordering, const std::string& a, const std::string& b) {
    switch (ordering) {
        case Ordering::Numeric:
            return parse_int(a, "numeric ordering") < parse_int(b, "numeric ordering");
        case Ordering::LastNameFirst:
            return lastname_less(a, b);
        case Ordering::Lexicographic:
        default:
            return a < b;
    }
}

const char* kind_name(HashKind kind) {
    switch (kind) {
        case HashKind::Identity: return "identity";
        case HashKind::Prefix: return "prefix";
        case HashKind::Suffix: return "suffix";
        case HashKind::FreqChars: return "freq_chars";
        case HashKind::LongestToken: return "longest_token";
        case HashKind::Round: return "round";
        case HashKind::FirstName: return "first_name";
        case HashKind::LastName: return "last_name";
        case HashKind::IntervalPartition: return "interval_partition";
    }
    return "?";
}

HashKind kind_from_name(const std::string& name) {
    static const std::array<HashKind, 9> kinds = {
        HashKind::Identity,   HashKind::Prefix,    HashKind::Suffix,
        HashKind::FreqChars,  HashKind::LongestToken, HashKind::Round,
        HashKind::FirstName,  HashKind::LastName,  HashKind::IntervalPartition,
    };
    for (HashKind k : kinds) {
        if (name == kind_name(k)) return k;
    }
    throw validation_error("unknown hash kind '" + name + "'");
}

const char* ordering_name(Ordering o) {
    switch (o) {
        case Ordering::Lexicographic: return "lexicographic";
        case Ordering::Numeric: return "numeric";
        case Ordering::LastNameFirst: return "last_name_first";
    }
    return "?";
}

Ordering ordering_from_name(const std::string& name) {
    if (name == "lexicographic") return Ordering::Lexicographic;
    if (name == "numeric") return Ordering::Numeric;
    if (name == "last_name_first") return Ordering::LastNameFirst;
    throw validation_error("unknown ordering '" + name + "'");
}

std::string spec_id(const std::string& attribute, HashKind kind, int param) {
    return attribute + ":" + kind_name(kind) + ":" + std::to_string(param);
}

std::string uppercased(std::string_view s) {
    std::string out(s);
    for (char& c : out) {
        if (c >= 'a' && c <= 'z') c = static_cast<char>(c - 'a' + 'A');
    }
    return out;
}

void validate_spec(const HashSpec& spec, const Schema& schema) {
    size_t idx = schema.require(spec.attribute);
    AttrType type = schema.types[idx];

    if (is_string_kind(spec.kind) && type != AttrType::String) {
        throw validation_error("hash '" + spec.id + "': " +
                               std::string(kind_name(spec.kind)) +
                               " applies only to string attributes");
    }
    if (spec.kind == HashKind::Round && type != AttrType::Integer) {
        throw validation_error("hash '" + spec.id + "': round applies only to integer attributes");
    }

    switch (spec.kind) {
        case HashKind::Prefix:
        case HashKind::Suffix:
        case HashKind::FreqChars:
        case HashKind::Round:
            if (spec.param < 1) {
                throw validation_error("hash '" + spec.id + "': parameter must be >= 1");
            }
            break;
        case HashKind::IntervalPartition: {
            if (spec.boundaries.empty()) {
                throw validation_error("hash '" + spec.id + "': no boundaries");
            }
            if (type == AttrType::Integer && spec.ordering != Ordering::Numeric) {
                throw validation_error("hash '" + spec.id +
                                       "': integer attributes need numeric ordering");
            }
            if (type == AttrType::String && spec.ordering == Ordering::Numeric) {
                throw validation_error("hash '" + spec.id +
                                       "': string attributes need a string ordering");
            }
            for (size_t i = 1; i < spec.boundaries.size(); ++i) {
                if (!ordered_less(spec.ordering, spec.boundaries[i - 1], spec.boundaries[i])) {
                    throw validation_error("hash '" + spec.id +
                                           "': boundaries must be strictly increasing");
                }
            }
            break;
        }
        default:
            break;
    }
}

std::string apply_hash_value(const HashSpec& spec, const AttrValue& value) {
    if (is_null(value)) return kNullKey;

    switch (spec.kind) {
        case HashKind::Identity:
            if (const std::string* s = std::get_if<std::string>(&value)) {
                return uppercased(*s);
            }
            return std::to_string(std::get<int64_t>(value));

        case HashKind::Prefix: {
            std::string up = uppercased(string_value(spec, value));
            const size_t k = static_cast<size_t>(spec.param);
            return up.size() <= k ? up : up.substr(0, k);
        }
        case HashKind::Suffix: {
            std::string up = uppercased(string_value(spec, value));
            const size_t k = static_cast<size_t>(spec.param);
            return up.size() <= k ? up : up.substr(up.size() - k);
        }
        case HashKind::FreqChars: {
            std::string up = uppercased(string_value(spec, value));
            // alphanumeric census: '0'-'9' then 'A'-'Z' is the char order
            std::array<int, 36> count{};
            auto slot = [](char c) -> int {
                if (c >= '0' && c <= '9') return c - '0';
                if (c >= 'A' && c <= 'Z') return 10 + (c - 'A');
                return -1;
            };
            for (char c : up) {
                int i = slot(c);
                if (i >= 0) count[static_cast<size_t>(i)]++;
            }
            auto char_of = [](size_t i) -> char {
                return i < 10 ? static_cast<char>('0' + i) : static_cast<char>('A' + (i - 10));
            };
            std::vector<size_t> present;
            for (size_t i = 0; i < count.size(); ++i) {
                if (count[i] > 0) present.push_back(i);
            }
            // most frequent first, frequency ties by char order
            std::stable_sort(present.begin(), present.end(), [&](size_t a, size_t b) {
                if (count[a] != count[b]) return count[a] > count[b];
                return a < b;
            });
            if (present.size() > static_cast<size_t>(spec.param)) {
                present.resize(static_cast<size_t>(spec.param));
            }
            std::sort(present.begin(), present.end());
            std::string key;
            for (size_t i : present) key.push_back(char_of(i));
            return key;
        }
        case HashKind::LongestToken: {
            std::string up = uppercased(string_value(spec, value));
            std::string_view best;
            for (std::string_view t : tokens(up)) {
                if (t.size() > best.size()) best = t;  // ties keep the leftmost
            }
            return std::string(best);
        }
        case HashKind::FirstName: {
            std::string up = uppercased(string_value(spec, value));
            auto toks = tokens(up);
            return toks.empty() ? std::string() : std::string(toks.front());
        }
        case HashKind::LastName: {
            std::string up = uppercased(string_value(spec, value));
            auto toks = tokens(up);
            return toks.empty() ? std::string() : std::string(toks.back());
        }
        case HashKind::Round: {
            int64_t x = int_value(spec, value);
            return std::to_string(floor_multiple(x, spec.param));
        }
        case HashKind::IntervalPartition: {
            std::string v;
            if (const std::string* s = std::get_if<std::string>(&value)) {
                if (spec.ordering == Ordering::Numeric) {
                    throw validation_error("hash '" + spec.id + "' needs an integer attribute");
                }
                v = uppercased(*s);
            } else {
                if (spec.ordering != Ordering::Numeric) {
                    throw validation_error("hash '" + spec.id + "' needs a string attribute");
                }
                v = std::to_string(std::get<int64_t>(value));
            }
            return std::to_string(interval_index(spec, v));
        }
    }
    throw validation_error("hash '" + spec.id + "': unhandled kind");
}

std::string apply_hash(const HashSpec& spec, const Record& record, const Schema& schema) {
    validate_spec(spec, schema);
    size_t idx = schema.require(spec.attribute);
    return apply_hash_value(spec, record.attrs[idx]);
}

CompiledHash compile_hash(const HashSpec& spec, const Schema& schema) {
    validate_spec(spec, schema);
    return CompiledHash{&spec, schema.require(spec.attribute)};
}

std::vector<HashSpec> enumerate_hash_space(const Schema& schema,
                                           const std::vector<int>& prefix_lengths,
                                           const std::vector<int>& round_widths) {
    auto sorted_params = [](std::vector<int> v) {
        std::sort(v.begin(), v.end());
        v.erase(std::unique(v.begin(), v.end()), v.end());
        return v;
    };
    const std::vector<int> ks = sorted_params(prefix_lengths);
    const std::vector<int> ws = sorted_params(round_widths);

    std::vector<std::string> attrs = schema.names;
    std::sort(attrs.begin(), attrs.end());

    std::vector<HashSpec> space;
    auto emit = [&](const std::string& attr, HashKind kind, int param) {
        HashSpec spec;
        spec.attribute = attr;
        spec.kind = kind;
        spec.param = param;
        spec.id = spec_id(attr, kind, param);
        validate_spec(spec, schema);
        space.push_back(std::move(spec));
    };

    for (const std::string& attr : attrs) {
        AttrType type = schema.types[schema.require(attr)];
        if (type == AttrType::String) {
            emit(attr, HashKind::Identity, 0);
            for (int k : ks) emit(attr, HashKind::Prefix, k);
            for (int k : ks) emit(attr, HashKind::Suffix, k);
            for (int k : ks) emit(attr, HashKind::FreqChars, k);
            emit(attr, HashKind::LongestToken, 0);
            emit(attr, HashKind::FirstName, 0);
            emit(attr, HashKind::LastName, 0);
        } else {
            emit(attr, HashKind::Identity, 0);
            for (int w : ws) emit(attr, HashKind::Round, w);
        }
    }
    return space;
}

}  // namespace cblock
