// cblock: learn size-bounded disjoint blocking functions from labeled
// duplicate pairs, post-process them, and evaluate recall and assignment
// cost. Subcommands: train, apply, rollup, drilldown, eval, assign-machines,
// synth, experiment.

#include "cblock/blktree.hpp"
#include "cblock/drilldown.hpp"
#include "cblock/error.hpp"
#include "cblock/eval.hpp"
#include "cblock/io.hpp"
#include "cblock/machines.hpp"
#include "cblock/multiround.hpp"
#include "cblock/rollup.hpp"
#include "cblock/synth.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

namespace {

using namespace cblock;
using nlohmann::json;

int thread_count() {
    const char* env = std::getenv("CBLOCK_THREADS");
    if (!env) return 1;
    const int n = std::atoi(env);
    return n >= 1 ? n : 1;
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw io_error("cannot open '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw io_error("cannot write '" + path + "'");
    out << content;
}

// pairs CSV as raw id pairs, for subcommands that work without a dataset
std::vector<IdPair> read_id_pairs(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw io_error("cannot open '" + path + "'");
    std::vector<IdPair> pairs;
    std::string line;
    size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        size_t comma = line.find(',');
        if (comma == std::string::npos) {
            throw validation_error("line " + std::to_string(line_no) +
                                   ": expected id1,id2");
        }
        pairs.emplace_back(line.substr(0, comma), line.substr(comma + 1));
    }
    return pairs;
}

json record_to_json(const Dataset& ds, const Record& rec) {
    json attrs = json::object();
    for (size_t i = 0; i < ds.schema.size(); ++i) {
        const AttrValue& v = rec.attrs[i];
        if (is_null(v)) {
            attrs[ds.schema.names[i]] = nullptr;
        } else if (const std::string* s = std::get_if<std::string>(&v)) {
            attrs[ds.schema.names[i]] = *s;
        } else {
            attrs[ds.schema.names[i]] = std::get<int64_t>(v);
        }
    }
    return json{{"id", rec.id}, {"attrs", attrs}};
}

void write_dataset_files(const Dataset& ds, const std::string& data_path,
                         const std::string& schema_path) {
    json schema = json::object();
    for (size_t i = 0; i < ds.schema.size(); ++i) {
        schema[ds.schema.names[i]] =
            ds.schema.types[i] == AttrType::String ? "string" : "integer";
    }
    write_file(schema_path, schema.dump() + "\n");

    std::ofstream out(data_path, std::ios::binary);
    if (!out) throw io_error("cannot write '" + data_path + "'");
    for (const Record& rec : ds.records) {
        out << record_to_json(ds, rec).dump() << '\n';
    }
}

struct CommonTrainArgs {
    std::string data, schema, pairs_path, out = "model.json";
    size_t max_size = 1000;
    std::string language = "blktree";
    std::string strategy = "optimistic";
    int rounds = 1;
    uint64_t seed = 42;
    std::vector<int> prefix_lengths{1, 3, 5};
    std::vector<int> round_widths{5, 10};
    BuildLimits limits{};
};

void add_train_options(CLI::App* cmd, CommonTrainArgs& args) {
    cmd->add_option("--data", args.data, "dataset JSON-lines file")->required();
    cmd->add_option("--schema", args.schema, "schema JSON file")->required();
    cmd->add_option("--pairs", args.pairs_path, "labeled pairs CSV")->required();
    cmd->add_option("--max-size", args.max_size, "maximum canopy size S")->required();
    cmd->add_option("--language", args.language,
                    "random | single | chain | chaintree | blktree");
    cmd->add_option("--strategy", args.strategy, "optimistic | pessimistic | expected");
    cmd->add_option("--rounds", args.rounds, "non-disjoint rounds (1 = disjoint)");
    cmd->add_option("--seed", args.seed, "seed for all randomness");
    cmd->add_option("--prefix-lengths", args.prefix_lengths, "K values for prefix/suffix/freq")
        ->delimiter(',');
    cmd->add_option("--round-widths", args.round_widths, "k values for numeric rounding")
        ->delimiter(',');
    cmd->add_option("--max-depth", args.limits.max_depth, "tree depth cap");
    cmd->add_option("--max-oversized-children", args.limits.max_oversized_children,
                    "reject hashes leaving more oversized children than this");
    cmd->add_option("--build-factor", args.limits.build_factor,
                    "over-build against bound S/f and truncate at apply time");
}

int cmd_train(const CommonTrainArgs& args) {
    Dataset dataset = load_dataset(args.data, args.schema);
    TrainingSet pairs = load_pairs(args.pairs_path, dataset);
    auto space = enumerate_hash_space(dataset.schema, args.prefix_lengths, args.round_widths);
    const Language language = language_from_name(args.language);
    const Strategy strategy = strategy_from_name(args.strategy);

    if (args.rounds <= 1) {
        BlockingModel model = build_model(language, dataset, pairs, space, args.max_size,
                                          strategy, args.limits, args.seed);
        write_file(args.out, model.to_json());
    } else {
        MultiRoundModel model =
            train_multi_round(dataset, pairs, space, args.max_size, language, args.rounds,
                              strategy, args.seed, args.limits);
        write_file(args.out, model.to_json());
    }
    std::cout << "wrote " << args.out << "\n";
    return 0;
}

int cmd_apply(const std::string& model_path, const std::string& data,
              const std::string& schema, const std::string& out,
              const std::string& stats_out, int64_t seed_override) {
    Dataset dataset = load_dataset(data, schema);
    const std::string text = read_file(model_path);

    CanopyAssignment assign;
    std::vector<CanopyStats> stats;
    const json probe = json::parse(text, nullptr, false);
    const bool multi = probe.is_object() && probe.contains("rounds");
    const int threads = thread_count();

    if (multi) {
        MultiRoundModel model = MultiRoundModel::from_json(text);
        const uint64_t seed = seed_override >= 0 ? static_cast<uint64_t>(seed_override)
                              : model.rounds.empty() ? 0
                                                     : model.rounds.front().seed;
        for (size_t r = 0; r < model.rounds.size(); ++r) {
            auto [round, round_stats] = assign_canopies(
                model.rounds[r], dataset, seed + static_cast<uint64_t>(r), threads);
            assign.rounds.push_back(std::move(round));
            stats.push_back(std::move(round_stats));
        }
    } else {
        BlockingModel model = BlockingModel::from_json(text);
        const uint64_t seed =
            seed_override >= 0 ? static_cast<uint64_t>(seed_override) : model.seed;
        auto [round, round_stats] = assign_canopies(model, dataset, seed, threads);
        assign.rounds.push_back(std::move(round));
        stats.push_back(std::move(round_stats));
    }

    write_assignment_file(out, assign, dataset);
    if (!stats_out.empty()) {
        json report = json::array();
        for (const auto& round_stats : stats) {
            json sizes = json::object();
            for (const auto& [id, n] : round_stats.sizes) sizes[id] = n;
            report.push_back(sizes);
        }
        write_file(stats_out, report.dump(2) + "\n");
    }
    std::cout << "wrote " << out << "\n";
    return 0;
}

int cmd_rollup(const std::string& assignment, const std::string& pairs_path,
               size_t max_size, size_t min_benefit, size_t round, const std::string& out) {
    auto rounds = load_assignment_tsv(assignment);
    if (round >= rounds.size()) {
        throw validation_error("assignment has no round " + std::to_string(round));
    }
    std::vector<InputCanopy> canopies;
    for (const auto& [id, members] : rounds[round].canopies) {
        canopies.push_back({id, members});
    }
    RollupPlan plan = rollup(canopies, read_id_pairs(pairs_path), max_size, min_benefit);

    std::string remap_tsv;
    for (const auto& [old_id, new_id] : plan.remap()) {
        remap_tsv += old_id;
        remap_tsv += '\t';
        remap_tsv += new_id;
        remap_tsv += '\n';
    }
    write_file(out, remap_tsv);
    std::cout << "wrote " << out << " (" << plan.groups.size() << " canopies, +"
              << plan.merged_pairs_gained << " pairs)\n";
    return 0;
}

int cmd_drilldown(const std::string& data, const std::string& schema,
                  const std::string& attr, const std::string& pairs_path, double max_cost,
                  std::string ordering_name_opt, const std::string& out) {
    Dataset dataset = load_dataset(data, schema);
    TrainingSet pairs = load_pairs(pairs_path, dataset);

    Ordering ordering;
    if (!ordering_name_opt.empty()) {
        ordering = ordering_from_name(ordering_name_opt);
    } else {
        const AttrType type = dataset.schema.types[dataset.schema.require(attr)];
        ordering = type == AttrType::Integer ? Ordering::Numeric : Ordering::Lexicographic;
    }

    OrderedDomain domain = domain_of_attribute(dataset, attr, ordering);
    auto value_pairs = project_pairs(dataset, pairs, attr, domain);
    auto result = drill_down(domain, value_pairs, weight_cost(domain), max_cost);
    HashSpec spec = partition_to_hash(attr, domain, result.partition);

    json fragment{{"id", spec.id},
                  {"attribute", spec.attribute},
                  {"kind", kind_name(spec.kind)},
                  {"params",
                   {{"ordering", cblock::ordering_name(spec.ordering)},
                    {"boundaries", spec.boundaries}}},
                  {"violations", result.violations}};
    const std::string text = fragment.dump(2) + "\n";
    if (out.empty()) {
        std::cout << text;
    } else {
        write_file(out, text);
        std::cout << "wrote " << out << " (" << result.partition.run_count() << " runs, "
                  << result.violations << " violations)\n";
    }
    return 0;
}

int cmd_eval(const CommonTrainArgs& args, int folds, const std::string& out) {
    Dataset dataset = load_dataset(args.data, args.schema);
    TrainingSet pairs = load_pairs(args.pairs_path, dataset);
    auto space = enumerate_hash_space(dataset.schema, args.prefix_lengths, args.round_widths);

    CvConfig config;
    config.max_size = args.max_size;
    config.language = language_from_name(args.language);
    config.strategy = strategy_from_name(args.strategy);
    config.rounds = args.rounds;
    config.folds = folds;
    config.seed = args.seed;
    config.limits = args.limits;

    CvReport report = cross_validate(dataset, pairs, space, config);
    if (out.empty()) {
        std::cout << report.to_json();
    } else {
        write_file(out, report.to_json());
        std::cout << "wrote " << out << "\n";
    }
    return 0;
}

int cmd_assign_machines(const std::string& assignment, size_t machines,
                        const std::string& out) {
    auto rounds = load_assignment_tsv(assignment);
    CanopyStats pooled;
    for (size_t r = 0; r < rounds.size(); ++r) {
        for (const auto& [id, members] : rounds[r].canopies) {
            pooled.sizes["r" + std::to_string(r) + "/" + id] = members.size();
        }
    }
    MachineAssignment machine_assign = assign_to_machines(pooled, machines);
    CostReport cost = assignment_cost(machine_assign);

    json report{{"cost", cost.cost},
                {"X", cost.x},
                {"ratio", cost.x > 0 ? static_cast<double>(cost.cost) / cost.x : 0.0},
                {"bound_ok", cost.bound_ok},
                {"per_machine_loads", machine_assign.loads}};
    const std::string text = report.dump(2) + "\n";
    if (out.empty()) {
        std::cout << text;
    } else {
        write_file(out, text);
        std::cout << "wrote " << out << "\n";
    }
    return 0;
}

int cmd_synth(const SynthConfig& config, const std::string& out_data,
              const std::string& out_schema, const std::string& out_pairs) {
    auto [dataset, pairs] = gen_synthetic(config);
    write_dataset_files(dataset, out_data, out_schema);

    std::string csv;
    for (const auto& [a, b] : pairs.pairs) {
        csv += dataset.records[a].id;
        csv += ',';
        csv += dataset.records[b].id;
        csv += '\n';
    }
    write_file(out_pairs, csv);
    std::cout << "wrote " << out_data << " (" << dataset.size() << " records), "
              << out_pairs << " (" << pairs.size() << " pairs)\n";
    return 0;
}

int cmd_experiment(const CommonTrainArgs& args, const std::vector<size_t>& max_sizes,
                   const std::vector<std::string>& languages,
                   const std::vector<std::string>& strategies, int folds,
                   bool measure_time, const std::string& out) {
    Dataset dataset = load_dataset(args.data, args.schema);
    TrainingSet pairs = load_pairs(args.pairs_path, dataset);
    auto space = enumerate_hash_space(dataset.schema, args.prefix_lengths, args.round_widths);

    ExperimentConfig config;
    config.max_sizes = max_sizes;
    for (const auto& l : languages) config.languages.push_back(language_from_name(l));
    for (const auto& s : strategies) config.strategies.push_back(strategy_from_name(s));
    config.rounds = args.rounds;
    config.folds = folds;
    config.seed = args.seed;
    config.measure_time = measure_time;
    config.limits = args.limits;

    ExperimentReport report = run_experiment(dataset, pairs, space, config);
    write_file(out, report.to_csv());
    std::cout << "wrote " << out << " (" << report.rows.size() << " rows)\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"cblock: size-bounded blocking functions for de-duplication"};
    app.require_subcommand(1);

    CommonTrainArgs train_args;
    CLI::App* train = app.add_subcommand("train", "learn a blocking model");
    add_train_options(train, train_args);
    train->add_option("--out", train_args.out, "model JSON output path");

    std::string apply_model, apply_data, apply_schema, apply_out = "assignment.tsv";
    std::string apply_stats;
    int64_t apply_seed = -1;
    CLI::App* apply = app.add_subcommand("apply", "block a dataset with a trained model");
    apply->add_option("--model", apply_model, "model JSON")->required();
    apply->add_option("--data", apply_data, "dataset JSON-lines file")->required();
    apply->add_option("--schema", apply_schema, "schema JSON file")->required();
    apply->add_option("--out", apply_out, "assignment TSV output path");
    apply->add_option("--stats", apply_stats, "canopy-size JSON output path");
    apply->add_option("--seed", apply_seed, "override the model's seed");

    std::string ru_assignment, ru_pairs, ru_out = "remap.tsv";
    size_t ru_max_size = 0;
    size_t ru_min_benefit = 0;
    size_t ru_round = 0;
    CLI::App* ru = app.add_subcommand("rollup", "merge small canopies under the bound");
    ru->add_option("--assignment", ru_assignment, "assignment TSV")->required();
    ru->add_option("--pairs", ru_pairs, "labeled pairs CSV")->required();
    ru->add_option("--max-size", ru_max_size, "maximum canopy size S")->required();
    ru->add_option("--min-benefit", ru_min_benefit, "stop when the best merge gains less");
    ru->add_option("--round", ru_round, "which disjoint round to roll up");
    ru->add_option("--out", ru_out, "remap TSV output path");

    std::string dd_data, dd_schema, dd_attr, dd_pairs, dd_ordering, dd_out;
    double dd_max_cost = 0;
    CLI::App* dd = app.add_subcommand("drilldown",
                                      "optimal interval partition of one attribute");
    dd->add_option("--data", dd_data, "dataset JSON-lines file")->required();
    dd->add_option("--schema", dd_schema, "schema JSON file")->required();
    dd->add_option("--attr", dd_attr, "attribute to partition")->required();
    dd->add_option("--pairs", dd_pairs, "labeled pairs CSV")->required();
    dd->add_option("--max-cost", dd_max_cost, "cost bound per run")->required();
    dd->add_option("--ordering", dd_ordering,
                   "lexicographic | numeric | last_name_first");
    dd->add_option("--out", dd_out, "hash JSON output path (default stdout)");

    CommonTrainArgs eval_args;
    int eval_folds = 5;
    std::string eval_out;
    CLI::App* ev = app.add_subcommand("eval", "cross-validated recall");
    add_train_options(ev, eval_args);
    ev->add_option("--folds", eval_folds, "cross-validation folds");
    ev->add_option("--out", eval_out, "report JSON output path (default stdout)");

    std::string am_assignment, am_out;
    size_t am_machines = 0;
    CLI::App* am = app.add_subcommand("assign-machines",
                                      "greedy canopy-to-machine assignment cost");
    am->add_option("--assignment", am_assignment, "assignment TSV")->required();
    am->add_option("--machines", am_machines, "machine count")->required();
    am->add_option("--out", am_out, "report JSON output path (default stdout)");

    SynthConfig synth_config;
    std::string sy_data = "synth.jsonl", sy_schema = "synth_schema.json",
                sy_pairs = "synth_pairs.csv";
    CLI::App* sy = app.add_subcommand("synth", "generate a synthetic labeled dataset");
    sy->add_option("--n-base", synth_config.n_base, "base record count");
    sy->add_option("--dup-rate", synth_config.dup_rate, "fraction duplicated");
    sy->add_option("--skew", synth_config.skew, "fraction of base records with null title");
    sy->add_option("--seed", synth_config.seed, "generator seed");
    sy->add_option("--title-null", synth_config.title.null_out, "duplicate title null rate");
    sy->add_option("--title-truncate", synth_config.title.truncate,
                   "duplicate title truncation rate");
    sy->add_option("--year-delta", synth_config.year.numeric_delta,
                   "duplicate year +/-1 rate");
    sy->add_option("--director-missing", synth_config.director.missing,
                   "base records without a director");
    sy->add_option("--year-missing", synth_config.year.missing,
                   "base records without a year");
    sy->add_option("--runtime-missing", synth_config.runtime.missing,
                   "base records without a runtime");
    sy->add_option("--out-data", sy_data, "dataset output path");
    sy->add_option("--out-schema", sy_schema, "schema output path");
    sy->add_option("--out-pairs", sy_pairs, "pairs output path");

    CommonTrainArgs exp_args;
    std::vector<size_t> exp_sizes{1000};
    std::vector<std::string> exp_languages{"random", "single", "chain", "chaintree",
                                           "blktree"};
    std::vector<std::string> exp_strategies{"optimistic"};
    int exp_folds = 0;
    bool exp_measure_time = false;
    std::string exp_out = "report.csv";
    CLI::App* ex = app.add_subcommand("experiment", "recall grid over S and languages");
    ex->add_option("--data", exp_args.data, "dataset JSON-lines file")->required();
    ex->add_option("--schema", exp_args.schema, "schema JSON file")->required();
    ex->add_option("--pairs", exp_args.pairs_path, "labeled pairs CSV")->required();
    ex->add_option("--max-sizes", exp_sizes, "S grid")->delimiter(',')->required();
    ex->add_option("--languages", exp_languages, "language grid")->delimiter(',');
    ex->add_option("--strategies", exp_strategies, "strategy grid")->delimiter(',');
    ex->add_option("--rounds", exp_args.rounds, "non-disjoint rounds per cell");
    ex->add_option("--folds", exp_folds, "cross-validation folds (0 = none)");
    ex->add_option("--seed", exp_args.seed, "seed for all randomness");
    ex->add_option("--prefix-lengths", exp_args.prefix_lengths, "K values")->delimiter(',');
    ex->add_option("--round-widths", exp_args.round_widths, "k values")->delimiter(',');
    ex->add_flag("--measure-time", exp_measure_time,
                 "fill apply_us_per_record (breaks byte-for-byte determinism)");
    ex->add_option("--out", exp_out, "report CSV output path");

    exp_args.rounds = 5;

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    try {
        if (*train) return cmd_train(train_args);
        if (*apply) {
            return cmd_apply(apply_model, apply_data, apply_schema, apply_out, apply_stats,
                             apply_seed);
        }
        if (*ru) {
            return cmd_rollup(ru_assignment, ru_pairs, ru_max_size, ru_min_benefit, ru_round,
                              ru_out);
        }
        if (*dd) {
            return cmd_drilldown(dd_data, dd_schema, dd_attr, dd_pairs, dd_max_cost,
                                 dd_ordering, dd_out);
        }
        if (*ev) return cmd_eval(eval_args, eval_folds, eval_out);
        if (*am) return cmd_assign_machines(am_assignment, am_machines, am_out);
        if (*sy) return cmd_synth(synth_config, sy_data, sy_schema, sy_pairs);
        if (*ex) {
            return cmd_experiment(exp_args, exp_sizes, exp_languages, exp_strategies,
                                  exp_folds, exp_measure_time, exp_out);
        }
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return e.kind() == Error::Kind::Io ? 2 : 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
