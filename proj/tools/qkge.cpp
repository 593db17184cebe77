// Copyright 2026 The qkge Authors.

// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at

//     http://www.apache.org/licenses/LICENSE-2.0

// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
/**
 * @file
 * Command-line entry point.
 *
 * Subcommands: train, eval, score, resources. Option precedence is
 * command-line flags over --config file over built-in defaults; the
 * effective configuration is echoed into every file the tool writes.
 *
 * Exit codes: 0 success, 1 usage or configuration, 2 data or checkpoint,
 * 3 numeric or training failure.
 */

#include <algorithm>
#include <bit>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iomanip>
#include <iostream>
#include <numeric>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include <qkge/qkge.hpp>

namespace {

namespace fs = std::filesystem;
using nlohmann::json;

struct Splits {
    qkge::Vocabulary vocab;
    std::vector<qkge::LabeledTriple> train;
    std::vector<qkge::LabeledTriple> valid;
    std::vector<qkge::LabeledTriple> test;
};

fs::path require_file(const fs::path &path) {
    if (!fs::exists(path)) {
        throw qkge::DataError("missing file: " + path.string());
    }
    return path;
}

/// Loads train/valid (required) and test (optional unless `need_test`).
/// The vocabulary spans every split so checkpoints can score all names.
Splits load_splits(const fs::path &dir, bool need_test) {
    if (!fs::is_directory(dir)) {
        throw qkge::DataError("dataset directory not found: " + dir.string());
    }
    Splits splits;
    splits.train = qkge::load_triples(require_file(dir / "train.txt"),
                                      splits.vocab);
    splits.valid = qkge::load_triples(require_file(dir / "valid.txt"),
                                      splits.vocab);
    const fs::path test_path = dir / "test.txt";
    if (need_test || fs::exists(test_path)) {
        splits.test = qkge::load_triples(require_file(test_path),
                                         splits.vocab);
    }
    return splits;
}

std::size_t edit_distance(const std::string &a, const std::string &b) {
    std::vector<std::size_t> prev(b.size() + 1);
    std::iota(prev.begin(), prev.end(), std::size_t{0});
    std::vector<std::size_t> cur(b.size() + 1, 0);
    for (std::size_t i = 1; i <= a.size(); ++i) {
        cur[0] = i;
        for (std::size_t j = 1; j <= b.size(); ++j) {
            const std::size_t sub =
                prev[j - 1] + (a[i - 1] == b[j - 1] ? 0 : 1);
            cur[j] = std::min({prev[j] + 1, cur[j - 1] + 1, sub});
        }
        std::swap(prev, cur);
    }
    return prev[b.size()];
}

std::string nearest_names(const std::string &name,
                          const std::vector<std::string> &names) {
    std::vector<std::pair<std::size_t, std::string>> scored;
    scored.reserve(names.size());
    for (const std::string &candidate : names) {
        scored.emplace_back(edit_distance(name, candidate), candidate);
    }
    std::sort(scored.begin(), scored.end());
    std::string out;
    const std::size_t limit = std::min<std::size_t>(3, scored.size());
    for (std::size_t i = 0; i < limit; ++i) {
        if (i > 0) {
            out += ", ";
        }
        out += scored[i].second;
    }
    return out;
}

std::int32_t entity_id_or_throw(const qkge::Vocabulary &vocab,
                                const std::string &name) {
    const auto id = vocab.entity_id(name);
    if (!id.has_value()) {
        throw qkge::LookupError("unknown entity name \"" + name +
                                "\"; nearest: " +
                                nearest_names(name, vocab.entity_names));
    }
    return *id;
}

std::int32_t relation_id_or_throw(const qkge::Vocabulary &vocab,
                                  const std::string &name) {
    const auto id = vocab.relation_id(name);
    if (!id.has_value()) {
        throw qkge::LookupError("unknown relation name \"" + name +
                                "\"; nearest: " +
                                nearest_names(name, vocab.relation_names));
    }
    return *id;
}

void write_json_file(const fs::path &path, const json &doc) {
    std::ofstream out(path);
    if (!out) {
        throw qkge::DataError("cannot write file: " + path.string());
    }
    out << doc.dump(1) << "\n";
}

json epoch_to_json(const qkge::EpochLog &entry) {
    return json{
        {"epoch", entry.epoch},
        {"mean_loss", entry.mean_loss},
        {"valid_mrr", entry.valid_mrr},
        {"wall_seconds", entry.wall_seconds},
        {"circuit_executions", entry.circuit_executions},
    };
}

struct TrainCliOptions {
    qkge::TrainConfig config;
    std::string batched = "on";
    std::string gradient_mode = "exact";
    std::string data_dir;
    std::string out_dir;
};

int run_train(TrainCliOptions &opts) {
    opts.config.batched_scoring = opts.batched == "on";
    opts.config.gradient_mode = qkge::parse_gradient_mode(opts.gradient_mode);
    qkge::validate(opts.config);

    const Splits splits = load_splits(opts.data_dir, /*need_test=*/false);
    const fs::path out_dir(opts.out_dir);
    fs::create_directories(out_dir);

    json config_echo;
    config_echo["command"] = "train";
    config_echo["config"] = opts.config;
    config_echo["data"] = opts.data_dir;
    config_echo["out"] = opts.out_dir;
    write_json_file(out_dir / "config.json", config_echo);

    std::ofstream log_file(out_dir / "log.jsonl");
    if (!log_file) {
        throw qkge::DataError("cannot write file: " +
                              (out_dir / "log.jsonl").string());
    }
    log_file << json{{"config", config_echo}}.dump() << "\n";

    std::string last_rng_state;
    const auto on_epoch = [&](const qkge::EpochLog &entry,
                              const qkge::ParameterStore &store,
                              const std::string &rng_state) {
        last_rng_state = rng_state;
        qkge::Checkpoint checkpoint{opts.config, splits.vocab, store,
                                    rng_state};
        qkge::save_checkpoint(out_dir / "latest.ckpt", checkpoint);
        log_file << epoch_to_json(entry).dump() << "\n";
        log_file.flush();
        std::cout << "epoch " << entry.epoch << "/" << opts.config.epochs
                  << "  loss " << std::setprecision(6) << entry.mean_loss
                  << "  valid MRR " << entry.valid_mrr << "  "
                  << entry.circuit_executions << " executions  "
                  << std::setprecision(3) << entry.wall_seconds << "s\n";
    };

    qkge::TrainResult result = qkge::train(opts.config, splits.train,
                                           splits.valid, splits.vocab,
                                           on_epoch);

    if (opts.config.epochs == 0) {
        // reproduce the post-init stream position for an untrained store
        std::mt19937_64 replay(opts.config.seed);
        qkge::init_params(splits.vocab.n_entities(),
                          splits.vocab.n_relations(),
                          qkge::shapes_of(opts.config), replay);
        last_rng_state = qkge::rng_state_string(replay);
    }
    qkge::Checkpoint final_checkpoint{opts.config, splits.vocab,
                                      result.store, last_rng_state};
    if (opts.config.epochs == 0) {
        qkge::save_checkpoint(out_dir / "latest.ckpt", final_checkpoint);
    }
    qkge::save_checkpoint(out_dir / "final.ckpt", final_checkpoint);

    std::cout << "wrote " << (out_dir / "final.ckpt").string() << "\n";
    return 0;
}

struct EvalCliOptions {
    std::string data_dir;
    std::string ckpt;
    std::string split = "test";
    std::string ties = "pessimistic";
    std::string out_file;
    unsigned threads = 1;
    bool rank_heads = false;
};

int run_eval(EvalCliOptions &opts) {
    const qkge::Checkpoint checkpoint =
        qkge::load_checkpoint(require_file(opts.ckpt));

    Splits splits;
    splits.vocab = checkpoint.vocab;
    const std::int32_t known_entities = splits.vocab.n_entities();
    const std::int32_t known_relations = splits.vocab.n_relations();
    const fs::path dir(opts.data_dir);
    if (!fs::is_directory(dir)) {
        throw qkge::DataError("dataset directory not found: " + dir.string());
    }
    splits.train =
        qkge::load_triples(require_file(dir / "train.txt"), splits.vocab);
    splits.valid =
        qkge::load_triples(require_file(dir / "valid.txt"), splits.vocab);
    splits.test =
        qkge::load_triples(require_file(dir / "test.txt"), splits.vocab);
    if (splits.vocab.n_entities() != known_entities ||
        splits.vocab.n_relations() != known_relations) {
        throw qkge::DataError("dataset names absent from the checkpoint "
                              "vocabulary; evaluate with the data the "
                              "checkpoint was trained on");
    }

    qkge::TripleSet known = qkge::make_triple_set(splits.train);
    qkge::insert_triples(known, splits.valid);
    qkge::insert_triples(known, splits.test);

    const std::vector<qkge::LabeledTriple> &split =
        opts.split == "train"
            ? splits.train
            : (opts.split == "valid" ? splits.valid : splits.test);

    qkge::EvalOptions options;
    options.tie_policy = qkge::parse_tie_policy(opts.ties);
    options.threads = opts.threads;
    options.include_head_ranks = opts.rank_heads;
    const qkge::EvalResult result =
        qkge::evaluate(split, checkpoint.store, known, options);

    json report = qkge::metrics_report(result, splits.vocab);
    report["split"] = opts.split;
    report["config"] = checkpoint.config;
    if (!opts.out_file.empty()) {
        write_json_file(opts.out_file, report);
    }

    const qkge::Metrics &m = result.tail_metrics;
    std::cout << "split = " << opts.split << ", n = " << m.n_evaluated
              << ", ties = " << qkge::tie_policy_name(options.tie_policy)
              << "\n"
              << std::fixed << std::setprecision(4) << "MRR = " << m.mrr
              << "  Hits@1 = " << m.hits1 << "  Hits@10 = " << m.hits10
              << "\n";
    return 0;
}

struct ScoreCliOptions {
    std::string ckpt;
    std::string head;
    std::string relation;
    std::string tail;
};

int run_score(ScoreCliOptions &opts) {
    const qkge::Checkpoint checkpoint =
        qkge::load_checkpoint(require_file(opts.ckpt));
    qkge::LabeledTriple triple;
    triple.h = entity_id_or_throw(checkpoint.vocab, opts.head);
    triple.r = relation_id_or_throw(checkpoint.vocab, opts.relation);
    triple.t = entity_id_or_throw(checkpoint.vocab, opts.tail);
    const double delta = qkge::score_single(triple, checkpoint.store);
    std::cout << "delta = " << std::setprecision(12) << delta << "\n";
    return 0;
}

struct ResourcesCliOptions {
    std::uint32_t batch = 4;
    std::uint32_t qubits = 4;
    std::uint32_t layers = 2;
    std::uint32_t relation_layers = 1;
    std::size_t elements = 0;
    std::uint32_t epochs = 0;
    std::string out_file;
};

int run_resources(ResourcesCliOptions &opts) {
    if (opts.batch == 0 || !std::has_single_bit(opts.batch)) {
        throw qkge::ConfigError("batch size must be a power of two, got " +
                                std::to_string(opts.batch));
    }
    qkge::ResourceEstimate estimate = qkge::resource_estimate(
        opts.batch, opts.qubits, opts.layers, opts.relation_layers);
    estimate.element_count = opts.elements;
    estimate.epochs = opts.epochs;

    std::cout << "batch size (B)          " << estimate.batch_size << "\n"
              << "data qubits (n)         " << estimate.n_data_qubits << "\n"
              << "address qubits          " << estimate.n_address_qubits
              << "\n"
              << "total qubits            " << estimate.qubits_total << "\n"
              << "gate count              " << estimate.gate_count << "\n"
              << "executions per batch    " << estimate.executions_batched
              << " batched vs " << estimate.executions_sequential
              << " sequential\n"
              << "parameters touched      " << estimate.parameters_touched
              << "\n"
              << "feature count (M = 2^n) " << estimate.feature_count << "\n";
    if (estimate.element_count != 0) {
        std::cout << "elements (N)            " << estimate.element_count
                  << "\n";
    }
    if (estimate.epochs != 0) {
        std::cout << "epochs (m)              " << estimate.epochs << "\n";
    }

    if (!opts.out_file.empty()) {
        json doc;
        doc["command"] = "resources";
        doc["batch_size"] = estimate.batch_size;
        doc["n_data_qubits"] = estimate.n_data_qubits;
        doc["n_address_qubits"] = estimate.n_address_qubits;
        doc["qubits_total"] = estimate.qubits_total;
        doc["gate_count"] = estimate.gate_count;
        doc["executions_batched"] = estimate.executions_batched;
        doc["executions_sequential"] = estimate.executions_sequential;
        doc["parameters_touched"] = estimate.parameters_touched;
        doc["feature_count"] = estimate.feature_count;
        doc["element_count"] = estimate.element_count;
        doc["epochs"] = estimate.epochs;
        write_json_file(opts.out_file, doc);
    }
    return 0;
}

int run_guarded(const std::function<int()> &body) {
    try {
        return body();
    } catch (const qkge::ConfigError &e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 1;
    } catch (const qkge::DataError &e) {
        std::cerr << "data error: " << e.what() << "\n";
        return 2;
    } catch (const qkge::CheckpointError &e) {
        std::cerr << "checkpoint error: " << e.what() << "\n";
        return 2;
    } catch (const qkge::LookupError &e) {
        std::cerr << "lookup error: " << e.what() << "\n";
        return 2;
    } catch (const qkge::Error &e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    } catch (const std::exception &e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    }
}

} // namespace

int main(int argc, char **argv) {
    CLI::App app{"quantum knowledge-graph embeddings: entities as "
                 "parametrized states, relations as parametrized unitaries, "
                 "fidelity scoring"};
    app.require_subcommand(1);
    // one config option on the root; sections name the subcommand, e.g.
    // [train] epochs=40. Subcommands pass the flag up via fallthrough.
    app.set_config("--config", "",
                   "read options from an INI file, one section per "
                   "subcommand (command-line flags win)");

    TrainCliOptions train_opts;
    CLI::App *train_cmd =
        app.add_subcommand("train", "train embeddings on a dataset");
    train_cmd->fallthrough();
    train_cmd->add_option("--data", train_opts.data_dir,
                          "dataset directory with train.txt and valid.txt")
        ->required();
    train_cmd->add_option("--out", train_opts.out_dir,
                          "output directory for checkpoints and logs")
        ->required();
    train_cmd->add_option("--qubits", train_opts.config.n_qubits,
                          "data-register width")
        ->capture_default_str();
    train_cmd->add_option("--layers", train_opts.config.entity_layers,
                          "entangling layers per entity circuit")
        ->capture_default_str();
    train_cmd
        ->add_option("--relation-layers", train_opts.config.relation_layers,
                     "entangling layers per relation circuit")
        ->capture_default_str();
    train_cmd->add_option("--epochs", train_opts.config.epochs, "epochs")
        ->capture_default_str();
    train_cmd->add_option("--lr", train_opts.config.learning_rate,
                          "Adam learning rate")
        ->capture_default_str();
    train_cmd->add_option("--batch-size", train_opts.config.batch_size,
                          "triples per batch (power of two when batched)")
        ->capture_default_str();
    train_cmd
        ->add_option("--negatives", train_opts.config.negatives_per_positive,
                     "negatives sampled per positive")
        ->capture_default_str();
    train_cmd->add_option("--seed", train_opts.config.seed, "RNG seed")
        ->capture_default_str();
    train_cmd->add_option("--threads", train_opts.config.threads,
                          "validation-metric threads (0 = hardware)")
        ->capture_default_str();
    train_cmd->add_option("--batched", train_opts.batched,
                          "score batches in one superposed circuit")
        ->check(CLI::IsMember({"on", "off"}))
        ->capture_default_str();
    train_cmd
        ->add_option("--gradient-mode", train_opts.gradient_mode,
                     "exact, parameter_shift_single, or finite_diff_debug")
        ->check(CLI::IsMember(
            {"exact", "parameter_shift_single", "finite_diff_debug"}))
        ->capture_default_str();
    train_cmd->add_flag("--corrupt-heads", train_opts.config.corrupt_heads,
                        "corrupt heads as well as tails when sampling "
                        "negatives");

    EvalCliOptions eval_opts;
    CLI::App *eval_cmd =
        app.add_subcommand("eval", "filtered link-prediction metrics");
    eval_cmd->fallthrough();
    eval_cmd->add_option("--data", eval_opts.data_dir,
                         "dataset directory with train/valid/test files")
        ->required();
    eval_cmd->add_option("--ckpt", eval_opts.ckpt, "checkpoint file")
        ->required();
    eval_cmd->add_option("--split", eval_opts.split, "split to evaluate")
        ->check(CLI::IsMember({"train", "valid", "test"}))
        ->capture_default_str();
    eval_cmd->add_option("--ties", eval_opts.ties, "tie-breaking policy")
        ->check(CLI::IsMember({"pessimistic", "optimistic"}))
        ->capture_default_str();
    eval_cmd->add_option("--threads", eval_opts.threads,
                         "ranking threads (0 = hardware)")
        ->capture_default_str();
    eval_cmd->add_option("--out", eval_opts.out_file,
                         "write the full JSON report here");
    eval_cmd->add_flag("--rank-heads", eval_opts.rank_heads,
                       "add diagnostic head ranks to the report dump");

    ScoreCliOptions score_opts;
    CLI::App *score_cmd =
        app.add_subcommand("score", "score one (head, relation, tail)");
    score_cmd->fallthrough();
    score_cmd->add_option("--ckpt", score_opts.ckpt, "checkpoint file")
        ->required();
    score_cmd->add_option("head", score_opts.head, "head entity name")
        ->required();
    score_cmd->add_option("relation", score_opts.relation, "relation name")
        ->required();
    score_cmd->add_option("tail", score_opts.tail, "tail entity name")
        ->required();

    ResourcesCliOptions res_opts;
    CLI::App *res_cmd = app.add_subcommand(
        "resources", "batched vs sequential circuit resource report");
    res_cmd->fallthrough();
    res_cmd->add_option("--batch-size,--batch", res_opts.batch, "batch size B")
        ->capture_default_str();
    res_cmd->add_option("--qubits", res_opts.qubits, "data-register width")
        ->capture_default_str();
    res_cmd->add_option("--layers", res_opts.layers,
                        "entangling layers per entity circuit")
        ->capture_default_str();
    res_cmd->add_option("--relation-layers", res_opts.relation_layers,
                        "entangling layers per relation circuit")
        ->capture_default_str();
    res_cmd->add_option("--elements", res_opts.elements,
                        "dataset element count N (report field)")
        ->capture_default_str();
    res_cmd->add_option("--epochs", res_opts.epochs,
                        "epoch count m (report field)")
        ->capture_default_str();
    res_cmd->add_option("--out", res_opts.out_file,
                        "write the JSON report here");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp &e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp &e) {
        return app.exit(e);
    } catch (const CLI::ParseError &e) {
        app.exit(e);
        return 1;
    }

    if (train_cmd->parsed()) {
        return run_guarded([&] { return run_train(train_opts); });
    }
    if (eval_cmd->parsed()) {
        return run_guarded([&] { return run_eval(eval_opts); });
    }
    if (score_cmd->parsed()) {
        return run_guarded([&] { return run_score(score_opts); });
    }
    return run_guarded([&] { return run_resources(res_opts); });
}
