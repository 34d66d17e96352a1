// Command-line entry point: inspect, train, evaluate, export-embeddings.
//
// Exit codes: 0 success, 1 usage error, 2 data error, 3 numeric failure.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>

#include <CLI11.hpp>

#include "tkge/checkpoint.hpp"
#include "tkge/config.hpp"
#include "tkge/dataset.hpp"
#include "tkge/errors.hpp"
#include "tkge/evaluation.hpp"
#include "tkge/export.hpp"
#include "tkge/training.hpp"

namespace {

namespace fs = std::filesystem;

struct DatasetArgs {
    std::string data_dir;
    std::string train_path, valid_path, test_path;
    std::string dialect = "plain";
    CLI::Option* dialect_opt = nullptr;

    void add_to(CLI::App* cmd) {
        cmd->add_option("--data-dir", data_dir,
                        "Directory containing train.txt, valid.txt and test.txt "
                        "(default: $TKGE_DATA_ROOT)");
        cmd->add_option("--train", train_path, "Training fact file");
        cmd->add_option("--valid", valid_path, "Validation fact file");
        cmd->add_option("--test", test_path, "Test fact file");
        dialect_opt = cmd->add_option("--dialect", dialect,
                                      "Input dialect: plain, icews, yago or wikidata")
                          ->check(CLI::IsMember({"plain", "icews", "yago", "wikidata"}));
    }

    bool dialect_given() const { return dialect_opt && dialect_opt->count() > 0; }

    // Explicit paths win; otherwise --data-dir (or $TKGE_DATA_ROOT) must hold
    // the three canonical filenames.
    void resolve() {
        if (!train_path.empty() && !valid_path.empty() && !test_path.empty()) return;
        std::string dir = data_dir;
        if (dir.empty()) {
            if (const char* env = std::getenv("TKGE_DATA_ROOT")) dir = env;
        }
        if (dir.empty()) {
            throw tkge::DataError(
                "no dataset given: pass --train/--valid/--test, or --data-dir, or set TKGE_DATA_ROOT");
        }
        const char* names[3] = {"train.txt", "valid.txt", "test.txt"};
        std::string* out[3] = {&train_path, &valid_path, &test_path};
        std::string missing;
        for (int i = 0; i < 3; ++i) {
            if (!out[i]->empty()) continue;
            const fs::path p = fs::path(dir) / names[i];
            if (!fs::exists(p)) missing += std::string(missing.empty() ? "" : ", ") + p.string();
            *out[i] = p.string();
        }
        if (!missing.empty()) {
            throw tkge::DataError("expected fact files not found: " + missing);
        }
    }

    tkge::DatasetBundle load() {
        resolve();
        return tkge::load_dataset(train_path, valid_path, test_path, tkge::dialect_from_string(dialect));
    }
};

void apply_dataset_args_to_config(const DatasetArgs& args, tkge::RunConfig& cfg) {
    if (!args.train_path.empty()) cfg.train_path = args.train_path;
    if (!args.valid_path.empty()) cfg.valid_path = args.valid_path;
    if (!args.test_path.empty()) cfg.test_path = args.test_path;
    if (args.dialect_given()) cfg.dialect = tkge::dialect_from_string(args.dialect);
}

int cmd_inspect(DatasetArgs& args) {
    const tkge::DatasetBundle bundle = args.load();
    std::cout << "dialect               " << tkge::to_string(bundle.dialect) << "\n"
              << bundle.stats_report();
    return 0;
}

struct TrainArgs {
    DatasetArgs dataset;
    std::string config_path;
    std::string out_dir = "run";
    std::optional<std::string> scorer;
    std::optional<int> d, batch_size, num_negatives, max_epochs, validate_every, eval_workers;
    std::optional<double> lr, dropout;
    std::optional<std::uint64_t> seed;
    bool lstm_biases = false;
    bool time_agnostic_filter = false;
};

int cmd_train(TrainArgs& args) {
    tkge::RunConfig cfg;
    if (!args.config_path.empty()) cfg = tkge::RunConfig::from_json_file(args.config_path);

    // Flags override config-file values.
    if (!args.dataset.train_path.empty() || !cfg.train_path.empty()) {
        if (args.dataset.train_path.empty()) args.dataset.train_path = cfg.train_path;
        if (args.dataset.valid_path.empty()) args.dataset.valid_path = cfg.valid_path;
        if (args.dataset.test_path.empty()) args.dataset.test_path = cfg.test_path;
    }
    args.dataset.resolve();
    apply_dataset_args_to_config(args.dataset, cfg);
    if (args.scorer) cfg.train.scorer = tkge::scorer_from_string(*args.scorer);
    if (args.d) cfg.train.d = *args.d;
    if (args.lr) cfg.train.lr = *args.lr;
    if (args.batch_size) cfg.train.batch_size = *args.batch_size;
    if (args.num_negatives) cfg.train.num_negatives = *args.num_negatives;
    if (args.max_epochs) cfg.train.max_epochs = *args.max_epochs;
    if (args.validate_every) cfg.train.validate_every = *args.validate_every;
    if (args.dropout) cfg.train.dropout = *args.dropout;
    if (args.seed) cfg.train.seed = *args.seed;
    if (args.lstm_biases) cfg.train.lstm_biases = true;
    if (args.eval_workers) cfg.train.eval_workers = *args.eval_workers;
    if (args.time_agnostic_filter) cfg.train.time_agnostic_filter = true;
    cfg.output_dir = args.out_dir;

    fs::create_directories(cfg.output_dir);
    {
        std::ofstream cfg_out(fs::path(cfg.output_dir) / "config.json");
        cfg_out << cfg.to_json();
    }

    const tkge::DatasetBundle bundle =
        tkge::load_dataset(cfg.train_path, cfg.valid_path, cfg.test_path, cfg.dialect);
    std::cerr << bundle.stats_report();

    std::ofstream log_out(fs::path(cfg.output_dir) / "train_log.jsonl");
    const auto logger = [&log_out](const std::string& line) {
        log_out << line << "\n";
        log_out.flush();
        std::cerr << line << "\n";
    };

    tkge::TrainResult result = tkge::train(bundle, cfg.train, logger);
    const std::string ckpt_path = (fs::path(cfg.output_dir) / "checkpoint.bin").string();
    tkge::save_checkpoint(ckpt_path, result.params);
    std::cerr << "checkpoint written: " << ckpt_path << "\n";
    if (result.aborted_numeric) {
        std::cerr << "training aborted on numeric failure: " << result.abort_message << "\n";
        return 3;
    }
    return 0;
}

struct EvaluateArgs {
    DatasetArgs dataset;
    std::string checkpoint_path;
    std::string split = "test";
    std::string setting = "both";
    std::string out_dir;
    int workers = 1;
    bool no_cache = false;
    bool time_agnostic_filter = false;
};

void check_checkpoint_matches(const tkge::ModelParameters& params, const tkge::DatasetBundle& bundle) {
    const auto mismatch = [](const std::string& what, int ckpt, int data) {
        throw tkge::DataError("checkpoint/dataset mismatch: checkpoint has " + std::to_string(ckpt) + " " +
                              what + " but the dataset has " + std::to_string(data));
    };
    if (params.entity_table.rows() != bundle.num_entities()) {
        mismatch("entities", params.entity_table.rows(), bundle.num_entities());
    }
    if (tkge::uses_static_relations(params.scorer) &&
        params.relation_table.rows() != bundle.num_relations()) {
        mismatch("relations", params.relation_table.rows(), bundle.num_relations());
    }
    if (tkge::uses_encoder(params.scorer) && params.token_table.rows() != bundle.tokens.size()) {
        mismatch("tokens", params.token_table.rows(), bundle.tokens.size());
    }
    if (tkge::uses_timestamp_table(params.scorer) &&
        params.timestamp_table.rows() != static_cast<int>(bundle.timestamp_keys.size())) {
        mismatch("timestamps", params.timestamp_table.rows(),
                 static_cast<int>(bundle.timestamp_keys.size()));
    }
}

const std::vector<tkge::TemporalFact>& pick_split(const tkge::DatasetBundle& bundle,
                                                  const std::string& name) {
    if (name == "train") return bundle.train;
    if (name == "valid") return bundle.valid;
    return bundle.test;
}

int cmd_evaluate(EvaluateArgs& args) {
    const tkge::DatasetBundle bundle = args.dataset.load();
    const tkge::ModelParameters params = tkge::load_checkpoint(args.checkpoint_path);
    check_checkpoint_matches(params, bundle);

    tkge::EvalOptions opts;
    opts.cache_sequences = !args.no_cache;
    opts.time_agnostic_filter = args.time_agnostic_filter;
    opts.workers = args.workers;
    const auto& split = pick_split(bundle, args.split);
    const tkge::RankingReport report = tkge::evaluate_split(params, bundle, split, opts);

    if (args.setting == "raw" || args.setting == "both") {
        const tkge::MetricBlock m = report.averaged(tkge::Setting::Raw);
        std::printf("raw       MR %.1f  MRR %.1f  Hits@10 %.1f  Hits@1 %.1f\n", m.mean_rank, m.mrr * 100.0,
                    m.hits10 * 100.0, m.hits1 * 100.0);
    }
    if (args.setting == "filtered" || args.setting == "both") {
        const tkge::MetricBlock m = report.averaged(tkge::Setting::Filtered);
        std::printf("filtered  MR %.1f  MRR %.1f  Hits@10 %.1f  Hits@1 %.1f\n", m.mean_rank, m.mrr * 100.0,
                    m.hits10 * 100.0, m.hits1 * 100.0);
    }
    std::cout << report.table();

    if (!args.out_dir.empty()) {
        fs::create_directories(args.out_dir);
        std::ofstream tsv(fs::path(args.out_dir) / "metrics.tsv");
        tsv << report.tsv();
        std::ofstream ranks(fs::path(args.out_dir) / "ranks.tsv");
        ranks << "query\tside\tsetting\trank\n";
        for (tkge::Side side : {tkge::Side::Subject, tkge::Side::Object}) {
            for (tkge::Setting setting : {tkge::Setting::Raw, tkge::Setting::Filtered}) {
                const auto& rs =
                    report.ranks[tkge::RankingReport::index(side)][tkge::RankingReport::index(setting)];
                for (std::size_t q = 0; q < rs.size(); ++q) {
                    ranks << q << "\t" << (side == tkge::Side::Subject ? "subject" : "object") << "\t"
                          << (setting == tkge::Setting::Raw ? "raw" : "filtered") << "\t" << rs[q] << "\n";
                }
            }
        }
        std::ofstream table(fs::path(args.out_dir) / "report.txt");
        table << report.table();
    }
    return 0;
}

struct ExportArgs {
    DatasetArgs dataset;
    std::string checkpoint_path;
    std::string what = "entities";
    std::string split = "test";
    std::string out_path;
};

int cmd_export(ExportArgs& args) {
    const tkge::DatasetBundle bundle = args.dataset.load();
    const tkge::ModelParameters params = tkge::load_checkpoint(args.checkpoint_path);
    check_checkpoint_matches(params, bundle);

    std::ofstream file;
    std::ostream* out = &std::cout;
    if (!args.out_path.empty()) {
        file.open(args.out_path);
        if (!file) throw tkge::DataError("cannot write " + args.out_path);
        out = &file;
    }
    if (args.what == "entities") {
        tkge::export_entity_embeddings(*out, params, bundle.entities);
    } else {
        tkge::export_sequence_embeddings(*out, params, bundle, pick_split(bundle, args.split));
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Temporal knowledge-graph embeddings: LSTM-encoded predicate sequences with "
                 "translation and bilinear scoring"};
    app.require_subcommand(1);

    DatasetArgs inspect_args;
    CLI::App* inspect = app.add_subcommand("inspect", "Load a dataset and print its statistics");
    inspect_args.add_to(inspect);

    TrainArgs train_args;
    CLI::App* train = app.add_subcommand("train", "Train a scorer and write a checkpoint");
    train_args.dataset.add_to(train);
    train->add_option("--config", train_args.config_path, "JSON run configuration (flags override it)");
    train->add_option("--out", train_args.out_dir, "Output directory for checkpoint, config and logs");
    train->add_option("--scorer", train_args.scorer,
                      "Scorer: transe, distmult, ttranse, ta_transe, ta_distmult")
        ->check(CLI::IsMember({"transe", "distmult", "ttranse", "ta_transe", "ta_distmult"}));
    train->add_option("--d", train_args.d, "Embedding dimension");
    train->add_option("--lr", train_args.lr, "Learning rate");
    train->add_option("--batch-size", train_args.batch_size, "Facts per batch");
    train->add_option("--negatives", train_args.num_negatives, "Negative samples per direction");
    train->add_option("--epochs", train_args.max_epochs, "Maximum training epochs");
    train->add_option("--validate-every", train_args.validate_every, "Epochs between validations");
    train->add_option("--dropout", train_args.dropout, "Embedding dropout probability");
    train->add_option("--seed", train_args.seed, "Random seed");
    train->add_flag("--lstm-biases", train_args.lstm_biases, "Enable LSTM gate biases");
    train->add_option("--workers", train_args.eval_workers, "Validation ranking threads");
    train->add_flag("--time-agnostic-filter", train_args.time_agnostic_filter,
                    "Filter on (s, relation, o) instead of the full predicate sequence");

    EvaluateArgs eval_args;
    CLI::App* evaluate = app.add_subcommand("evaluate", "Rank entities for a checkpoint and report metrics");
    eval_args.dataset.add_to(evaluate);
    evaluate->add_option("--checkpoint", eval_args.checkpoint_path, "Checkpoint file")->required();
    evaluate->add_option("--split", eval_args.split, "Split to evaluate: train, valid or test")
        ->check(CLI::IsMember({"train", "valid", "test"}));
    evaluate->add_option("--setting", eval_args.setting, "raw, filtered or both")
        ->check(CLI::IsMember({"raw", "filtered", "both"}));
    evaluate->add_option("--out", eval_args.out_dir, "Directory for metrics.tsv, ranks.tsv and report.txt");
    evaluate->add_option("--workers", eval_args.workers, "Ranking threads");
    evaluate->add_flag("--no-cache", eval_args.no_cache, "Re-encode predicate sequences per query");
    evaluate->add_flag("--time-agnostic-filter", eval_args.time_agnostic_filter,
                       "Filter on (s, relation, o) instead of the full predicate sequence");

    ExportArgs export_args;
    CLI::App* exp = app.add_subcommand("export-embeddings", "Dump embeddings as CSV");
    export_args.dataset.add_to(exp);
    exp->add_option("--checkpoint", export_args.checkpoint_path, "Checkpoint file")->required();
    exp->add_option("--what", export_args.what, "entities or sequences")
        ->check(CLI::IsMember({"entities", "sequences"}));
    exp->add_option("--split", export_args.split, "Split for sequence export")
        ->check(CLI::IsMember({"train", "valid", "test"}));
    exp->add_option("--out", export_args.out_path, "Output CSV path (default: stdout)");

    try {
        app.parse(argc, argv);
        if (inspect->parsed()) return cmd_inspect(inspect_args);
        if (train->parsed()) return cmd_train(train_args);
        if (evaluate->parsed()) return cmd_evaluate(eval_args);
        if (exp->parsed()) return cmd_export(export_args);
        return 1;
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;
    } catch (const tkge::NumericError& e) {
        std::cerr << "numeric failure: " << e.what() << "\n";
        return 3;
    } catch (const tkge::DataError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
