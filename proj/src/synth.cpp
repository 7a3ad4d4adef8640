#include "cblock/synth.hpp"

#include "cblock/error.hpp"
#include "cblock/rng.hpp"

#include <array>
#include <cmath>
#include <string_view>

namespace cblock {

namespace {

// Fixed catalogs keep generated datasets reproducible across builds.
constexpr std::array<std::string_view, 96> kTitleWords = {
    "Midnight", "Crimson",  "Silent",   "Golden",   "Broken",   "Hidden",
    "Eternal",  "Savage",   "Frozen",   "Burning",  "Lost",     "Final",
    "Dark",     "Bright",   "Empty",    "Sacred",   "Wild",     "Quiet",
    "Iron",     "Glass",    "Paper",    "Stone",    "Velvet",   "Hollow",
    "River",    "Mountain", "Harbor",   "Desert",   "Island",   "Forest",
    "City",     "Garden",   "Bridge",   "Tower",    "Castle",   "Station",
    "Shadow",   "Mirror",   "Whisper",  "Thunder",  "Lantern",  "Compass",
    "Anchor",   "Arrow",    "Crown",    "Ember",    "Feather",  "Harvest",
    "Journey",  "Kingdom",  "Legacy",   "Memory",   "Horizon",  "Odyssey",
    "Promise",  "Reckoning", "Secret",  "Tempest",  "Voyage",   "Winter",
    "Autumn",   "Summer",   "Spring",   "Dawn",     "Dusk",     "Night",
    "Morning",  "Storm",    "Rain",     "Snow",     "Fire",     "Water",
    "Earth",    "Wind",     "Star",     "Moon",     "Sun",      "Sky",
    "Ocean",    "Valley",   "Canyon",   "Meadow",   "Prairie",  "Tundra",
    "Jungle",   "Lagoon",   "Reef",     "Summit",   "Ridge",    "Holloway",
    "Serpent",  "Falcon",   "Raven",    "Wolf",     "Tiger",    "Dragon",
};

constexpr std::array<std::string_view, 40> kFirstNames = {
    "James",   "Mary",    "Robert",  "Patricia", "John",    "Jennifer",
    "Michael", "Linda",   "David",   "Elizabeth", "William", "Barbara",
    "Richard", "Susan",   "Joseph",  "Jessica",  "Thomas",  "Sarah",
    "Carlos",  "Karen",   "Daniel",  "Nancy",    "Matthew", "Lisa",
    "Anthony", "Betty",   "Mark",    "Margaret", "Donald",  "Sandra",
    "Steven",  "Ashley",  "Paul",    "Kimberly", "Andrew",  "Emily",
    "Joshua",  "Donna",   "Kenneth", "Michelle",
};

constexpr std::array<std::string_view, 48> kLastNames = {
    "Smith",    "Johnson",  "Williams", "Brown",   "Jones",    "Garcia",
    "Miller",   "Davis",    "Rodriguez", "Martinez", "Hernandez", "Lopez",
    "Gonzalez", "Wilson",   "Anderson", "Thomas",  "Taylor",   "Moore",
    "Jackson",  "Martin",   "Lee",      "Perez",   "Thompson", "White",
    "Harris",   "Sanchez",  "Clark",    "Ramirez", "Lewis",    "Robinson",
    "Walker",   "Young",    "Allen",    "King",    "Wright",   "Scott",
    "Torres",   "Nguyen",   "Hill",     "Flores",  "Green",    "Adams",
    "Nelson",   "Baker",    "Hall",     "Rivera",  "Campbell", "Mitchell",
};

std::string make_title(Rng& rng) {
    const size_t words = 2 + rng.below(2);  // 2 or 3
    std::string title;
    for (size_t w = 0; w < words; ++w) {
        if (w) title += ' ';
        title += kTitleWords[rng.below(kTitleWords.size())];
    }
    return title;
}

std::string make_director(Rng& rng) {
    std::string name(kFirstNames[rng.below(kFirstNames.size())]);
    name += ' ';
    name += kLastNames[rng.below(kLastNames.size())];
    return name;
}

void check_probs(const Perturbation& p, const char* attr) {
    for (double v : {p.null_out, p.truncate, p.numeric_delta, p.missing}) {
        if (v < 0.0 || v > 1.0) {
            throw validation_error(std::string("synth: probability out of [0,1] for ") + attr);
        }
    }
}

AttrValue perturb_string(Rng& rng, const AttrValue& base, const Perturbation& p) {
    if (rng.chance(p.null_out)) return std::monostate{};
    if (is_null(base)) return base;
    const std::string& s = std::get<std::string>(base);
    if (rng.chance(p.truncate) && s.size() > 1) {
        return s.substr(0, (s.size() + 1) / 2);
    }
    return base;
}

AttrValue perturb_int(Rng& rng, const AttrValue& base, const Perturbation& p) {
    if (rng.chance(p.null_out)) return std::monostate{};
    if (is_null(base)) return base;
    int64_t x = std::get<int64_t>(base);
    if (rng.chance(p.numeric_delta)) {
        x += rng.chance(0.5) ? 1 : -1;
    }
    return x;
}

}  // namespace

void SynthConfig::validate() const {
    if (dup_rate < 0.0 || dup_rate > 1.0) {
        throw validation_error("synth: dup_rate out of [0,1]");
    }
    if (skew < 0.0 || skew > 1.0) throw validation_error("synth: skew out of [0,1]");
    check_probs(title, "title");
    check_probs(director, "director");
    check_probs(year, "year");
    check_probs(runtime, "runtime");
}

std::pair<Dataset, TrainingSet> gen_synthetic(const SynthConfig& config) {
    config.validate();
    Rng rng(config.seed);

    Dataset dataset;
    dataset.schema.add("title", AttrType::String);
    dataset.schema.add("director", AttrType::String);
    dataset.schema.add("year", AttrType::Integer);
    dataset.schema.add("runtime", AttrType::Integer);

    for (size_t i = 0; i < config.n_base; ++i) {
        Record rec;
        rec.id = "b" + std::to_string(i);
        rec.attrs.resize(4);
        rec.attrs[0] = rng.chance(config.skew) ? AttrValue{std::monostate{}}
                                               : AttrValue{make_title(rng)};
        rec.attrs[1] = rng.chance(config.director.missing) ? AttrValue{std::monostate{}}
                                                           : AttrValue{make_director(rng)};
        rec.attrs[2] = rng.chance(config.year.missing) ? AttrValue{std::monostate{}}
                                                       : AttrValue{rng.range(1920, 2015)};
        rec.attrs[3] = rng.chance(config.runtime.missing) ? AttrValue{std::monostate{}}
                                                          : AttrValue{rng.range(60, 180)};
        dataset.add(std::move(rec));
    }

    const size_t n_dup =
        static_cast<size_t>(std::llround(config.dup_rate * static_cast<double>(config.n_base)));
    std::vector<size_t> order(config.n_base);
    for (size_t i = 0; i < order.size(); ++i) order[i] = i;
    rng.shuffle(order);

    TrainingSet pairs;
    for (size_t d = 0; d < n_dup; ++d) {
        const Record& base = dataset.records[order[d]];
        Record dup;
        dup.id = "d" + std::to_string(d);
        dup.attrs.resize(4);
        dup.attrs[0] = perturb_string(rng, base.attrs[0], config.title);
        dup.attrs[1] = perturb_string(rng, base.attrs[1], config.director);
        dup.attrs[2] = perturb_int(rng, base.attrs[2], config.year);
        dup.attrs[3] = perturb_int(rng, base.attrs[3], config.runtime);
        const RecordIdx base_idx = static_cast<RecordIdx>(order[d]);
        dataset.add(std::move(dup));
        pairs.add(base_idx, static_cast<RecordIdx>(dataset.size() - 1));
    }
    pairs.dedup();
    return {std::move(dataset), std::move(pairs)};
}

}  // namespace cblock
