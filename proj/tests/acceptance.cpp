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
 * Acceptance gate. Each numbered criterion prints exactly one line,
 * [PASS] or [FAIL], with the measured evidence. The process exit code is
 * the number of failed criteria.
 *
 * Usage: acceptance [umls-data-dir] [criterion-number]
 * (defaults: data/umls, all criteria)
 */
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <qkge/adam.hpp>
#include <qkge/checkpoint.hpp>
#include <qkge/circuit.hpp>
#include <qkge/data.hpp>
#include <qkge/eval.hpp>
#include <qkge/gradient.hpp>
#include <qkge/scoring.hpp>
#include <qkge/statevector.hpp>
#include <qkge/train.hpp>

#include "test_helpers.hpp"

using namespace qkge;

namespace {

struct Criterion {
    bool pass = false;
    std::string detail;
};

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() -
                                         t0)
        .count();
}

std::string fmt(double value) {
    std::ostringstream out;
    out.precision(3);
    out << value;
    return out.str();
}

/// Criterion 1: batched and sequential scores agree to 1e-10 across 200
/// randomized batches spanning B x n x entity-layers.
Criterion batched_equivalence() {
    const auto t0 = std::chrono::steady_clock::now();
    const std::uint32_t batch_sizes[] = {1, 2, 4, 8};
    const std::uint32_t qubit_counts[] = {2, 4};
    const std::uint32_t layer_counts[] = {1, 2, 4};

    double max_diff = 0.0;
    std::mt19937_64 rng(20260401);
    for (int trial = 0; trial < 200; ++trial) {
        const std::uint32_t b = batch_sizes[trial % 4];
        const std::uint32_t n = qubit_counts[(trial / 4) % 2];
        const std::uint32_t layers = layer_counts[(trial / 8) % 3];

        const std::int32_t n_entities =
            static_cast<std::int32_t>(2 * b + 3);
        const std::int32_t n_relations = 2;
        ParamShapes shapes;
        shapes.entity = {n, layers};
        shapes.relation = {n, 1};
        const ParameterStore store =
            init_params(n_entities, n_relations, shapes, rng);

        std::vector<LabeledTriple> batch;
        for (std::uint32_t i = 0; i < b; ++i) {
            batch.push_back(
                {static_cast<std::int32_t>(uniform_index(rng, n_entities)),
                 static_cast<std::int32_t>(uniform_index(rng, n_relations)),
                 static_cast<std::int32_t>(uniform_index(rng, n_entities)),
                 1});
        }
        const BatchLayout layout = make_batch_layout(batch, n);
        const std::vector<double> batched = score_batched(layout, store);
        for (std::uint32_t i = 0; i < b; ++i) {
            const double single = score_single(batch[i], store);
            max_diff = std::max(max_diff, std::abs(batched[i] - single));
        }
    }
    const double elapsed = seconds_since(t0);
    const bool pass = max_diff <= 1e-10 && elapsed < 60.0;
    return {pass, "max |delta_batched - delta_single| = " + fmt(max_diff) +
                      " over 200 batches, B in {1,2,4,8}, n in {2,4}, "
                      "layers in {1,2,4} (bound 1e-10), " +
                      fmt(elapsed) + " s (bound 60 s)"};
}

/// Criterion 2: one circuit execution per 4-triple batch against 4
/// sequential, with exactly 2 address qubits; checked in the resource
/// estimator and in the training log counters.
Criterion execution_reduction() {
    const ResourceEstimate estimate = resource_estimate(4, 4, 2, 1);
    const bool estimator_ok = estimate.executions_batched == 1 &&
                              estimate.executions_sequential == 4 &&
                              estimate.n_address_qubits == 2;

    Vocabulary vocab;
    vocab.add_entity("a");
    vocab.add_entity("b");
    vocab.add_entity("c");
    vocab.add_relation("r");
    const std::vector<LabeledTriple> triples{{0, 0, 1, 1}, {1, 0, 2, 1}};

    TrainConfig config;
    config.n_qubits = 2;
    config.entity_layers = 1;
    config.relation_layers = 1;
    config.epochs = 1;
    config.batch_size = 4;
    config.negatives_per_positive = 1;
    config.seed = 3;
    config.batched_scoring = true;
    const TrainResult batched = train(config, triples, {}, vocab);

    config.batched_scoring = false;
    const TrainResult sequential = train(config, triples, {}, vocab);

    const std::uint64_t batched_runs = batched.log.at(0).circuit_executions;
    const std::uint64_t sequential_runs =
        sequential.log.at(0).circuit_executions;
    const bool log_ok = batched_runs == 1 && sequential_runs == 4;

    return {estimator_ok && log_ok,
            "estimator: " + std::to_string(estimate.executions_batched) +
                " batched vs " +
                std::to_string(estimate.executions_sequential) +
                " sequential runs, " +
                std::to_string(estimate.n_address_qubits) +
                " address qubits; training log: " +
                std::to_string(batched_runs) + " vs " +
                std::to_string(sequential_runs) +
                " executions per 4-triple epoch (want 1 vs 4, 2 address "
                "qubits)"};
}

/// Criterion 3: adjoint gradients match central finite differences
/// (step 1e-5) within 1e-6 on 50 randomized circuits with conditioned
/// gates.
Criterion gradient_correctness() {
    const auto t0 = std::chrono::steady_clock::now();
    std::mt19937_64 rng(8121);
    double max_err = 0.0;
    std::size_t total_angles = 0;
    for (int trial = 0; trial < 50; ++trial) {
        const std::uint32_t n_qubits = 2 + trial % 5; // 2..6
        const std::size_t n_conditioned =
            n_qubits >= 3 ? trial % 4 : 0;
        CircuitSpec circuit = qkge_test::random_circuit(
            rng, n_qubits, 14, n_conditioned);
        // keep the angle count within the 40-angle acceptance envelope
        auto angle_count = [&circuit]() {
            std::size_t count = 0;
            for (const GateOp &gate : circuit.gates) {
                count += gate.kind == GateKind::Rot ? 3 : 0;
            }
            return count;
        };
        while (angle_count() > 40) {
            circuit.gates.pop_back();
        }
        total_angles += angle_count();

        Pattern pattern = Pattern::all_zero(n_qubits);
        for (std::uint32_t q = 0; q < n_qubits; ++q) {
            const std::size_t kind = uniform_index(rng, 3);
            pattern.bits[q] = kind == 0   ? PatternBit::Zero
                              : kind == 1 ? PatternBit::One
                                          : PatternBit::Any;
        }

        const GradientResult exact =
            gradient_exact(circuit, AngleLookup{}, pattern);
        const std::vector<double> fd =
            qkge_test::fd_gradients(circuit, pattern);
        for (std::size_t a = 0; a < fd.size(); ++a) {
            max_err =
                std::max(max_err, std::abs(exact.angle_grads[a] - fd[a]));
        }
    }
    const double elapsed = seconds_since(t0);
    const bool pass = max_err <= 1e-6 && elapsed < 120.0;
    return {pass, "max |exact - finite_difference| = " + fmt(max_err) +
                      " over 50 circuits / " + std::to_string(total_angles) +
                      " angles with conditioned gates (bound 1e-6), " +
                      fmt(elapsed) + " s (bound 120 s)"};
}

/// Criterion 4: norm preservation and run/inverse round-trip identity on
/// randomized circuits.
Criterion simulator_invariants() {
    std::mt19937_64 rng(5150);
    double max_norm_drift = 0.0;
    double max_round_trip = 0.0;
    for (int trial = 0; trial < 60; ++trial) {
        const std::uint32_t n_qubits = 1 + trial % 5; // 1..5
        const std::size_t n_conditioned =
            n_qubits >= 3 ? trial % 3 : 0;
        const CircuitSpec circuit = qkge_test::random_circuit(
            rng, n_qubits, 16, n_conditioned);

        Statevector start = zero_state(n_qubits);
        double norm2 = 0.0;
        for (Complex &amp : start.amps) {
            amp = Complex(2.0 * uniform_unit(rng) - 1.0,
                          2.0 * uniform_unit(rng) - 1.0);
            norm2 += std::norm(amp);
        }
        for (Complex &amp : start.amps) {
            amp /= std::sqrt(norm2);
        }

        Statevector state = start;
        run_circuit(state, circuit);
        double out_norm2 = 0.0;
        for (const Complex &amp : state.amps) {
            out_norm2 += std::norm(amp);
        }
        max_norm_drift =
            std::max(max_norm_drift, std::abs(std::sqrt(out_norm2) - 1.0));

        run_circuit(state, inverse(circuit));
        for (std::size_t k = 0; k < state.amps.size(); ++k) {
            max_round_trip = std::max(
                max_round_trip, std::abs(state.amps[k] - start.amps[k]));
        }
    }
    const bool pass = max_norm_drift <= 1e-10 && max_round_trip <= 1e-9;
    return {pass, "norm drift " + fmt(max_norm_drift) +
                      " (bound 1e-10), round-trip deviation " +
                      fmt(max_round_trip) +
                      " (bound 1e-9) over 60 randomized circuits"};
}

/// Criterion 5: metric arithmetic matches closed forms and filtered ranks
/// match a brute-force reimplementation on a synthetic 10-entity KG.
Criterion metrics_oracle() {
    const Metrics m = metrics({1, 2, 4});
    const bool closed_form_ok =
        m.mrr == (1.0 + 0.5 + 0.25) / 3.0 && m.hits1 == 1.0 / 3.0 &&
        m.hits10 == 1.0 && metrics({1, 1}).mrr == 1.0 &&
        metrics({100}).mrr == 0.01 && metrics({100}).hits10 == 0.0;

    ParamShapes shapes;
    shapes.entity = {2, 2};
    shapes.relation = {2, 1};
    const ParameterStore store = init_params(10, 2, shapes, 77);
    const EntityStateCache cache = build_entity_cache(store);

    std::mt19937_64 rng(4242);
    std::vector<LabeledTriple> positives;
    for (int i = 0; i < 18; ++i) {
        positives.push_back(
            {static_cast<std::int32_t>(uniform_index(rng, 10)),
             static_cast<std::int32_t>(uniform_index(rng, 2)),
             static_cast<std::int32_t>(uniform_index(rng, 10)), 1});
    }
    const TripleSet known = make_triple_set(positives);

    std::size_t mismatches = 0;
    for (const LabeledTriple &triple : positives) {
        const std::vector<double> scores =
            candidate_scores(triple.h, triple.r, store, cache);
        const RankCounts counts = rank_counts(scores, triple, known, false);
        for (const TiePolicy policy :
             {TiePolicy::Pessimistic, TiePolicy::Optimistic}) {
            // brute force: score every unfiltered candidate independently,
            // sort, count competitors ahead of the truth
            std::vector<double> kept;
            for (std::int32_t e = 0; e < 10; ++e) {
                if (e != triple.t &&
                    known.count(triple_key(triple.h, triple.r, e)) != 0) {
                    continue;
                }
                kept.push_back(score_single(triple.h, triple.r, e, store));
            }
            const double truth =
                score_single(triple.h, triple.r, triple.t, store);
            std::uint32_t rank = 1;
            for (const double s : kept) {
                if (s > truth ||
                    (policy == TiePolicy::Pessimistic && s == truth)) {
                    ++rank;
                }
            }
            if (policy == TiePolicy::Pessimistic) {
                --rank; // undo the truth's self-tie
            }
            mismatches += counts.rank(policy) == rank ? 0 : 1;
        }
    }
    return {closed_form_ok && mismatches == 0,
            std::string("closed forms ") +
                (closed_form_ok ? "exact" : "WRONG") + "; " +
                std::to_string(mismatches) +
                " rank mismatches against brute force over 18 triples x 2 "
                "tie policies on a 10-entity KG"};
}

TrainConfig toy_config() {
    TrainConfig config;
    config.n_qubits = 2;
    config.entity_layers = 2;
    config.relation_layers = 1;
    config.learning_rate = 0.1;
    config.epochs = 50;
    config.batch_size = 4;
    config.negatives_per_positive = 1;
    config.seed = 11;
    config.gradient_mode = GradientMode::Exact;
    config.batched_scoring = true;
    return config;
}

struct ToyData {
    Vocabulary vocab;
    std::vector<LabeledTriple> train;
};

ToyData toy_data() {
    ToyData data;
    data.vocab.add_entity("a");
    data.vocab.add_entity("b");
    data.vocab.add_entity("c");
    data.vocab.add_relation("r");
    data.train = {{0, 0, 1, 1}, {1, 0, 2, 1}};
    return data;
}

/// Criterion 6: the 3-entity toy KG converges to mean loss <= 0.05 and
/// training-split MRR >= 0.9 within 50 epochs, the same way every run.
Criterion toy_convergence() {
    const auto t0 = std::chrono::steady_clock::now();
    const ToyData data = toy_data();
    const TrainConfig config = toy_config();

    const TrainResult first = train(config, data.train, {}, data.vocab);
    const TrainResult second = train(config, data.train, {}, data.vocab);

    const double final_loss = first.log.back().mean_loss;
    const TripleSet filter = make_triple_set(data.train);
    const double train_mrr =
        evaluate(data.train, first.store, filter).tail_metrics.mrr;
    const bool deterministic =
        first.store.entity_angles == second.store.entity_angles &&
        first.store.relation_angles == second.store.relation_angles &&
        first.log.back().mean_loss == second.log.back().mean_loss;
    const double elapsed = seconds_since(t0);

    const bool pass = final_loss <= 0.05 && train_mrr >= 0.9 &&
                      deterministic && elapsed < 60.0;
    return {pass, "final mean loss " + fmt(final_loss) +
                      " (bound 0.05), train MRR " + fmt(train_mrr) +
                      " (bound 0.9) after " +
                      std::to_string(config.epochs) + " epochs, reruns " +
                      (deterministic ? "bit-identical" : "DIVERGED") + ", " +
                      fmt(elapsed) + " s (bound 60 s)"};
}

/// Criterion 7: UMLS link prediction reaches MRR >= 0.70 and
/// Hits@10 >= 0.88 on the filtered test split for at least one of three
/// seeds, with 4 data qubits and batched 4-triple training.
Criterion umls_reproduction(const std::filesystem::path &data_dir) {
    const std::filesystem::path train_path = data_dir / "train.txt";
    const std::filesystem::path valid_path = data_dir / "valid.txt";
    const std::filesystem::path test_path = data_dir / "test.txt";
    if (!std::filesystem::exists(train_path) ||
        !std::filesystem::exists(valid_path) ||
        !std::filesystem::exists(test_path)) {
        return {false,
                "dataset not present under " + data_dir.string() +
                    " (need train.txt, valid.txt, test.txt; see "
                    "data/umls/README.md for expected contents); criterion "
                    "cannot be exercised in this environment and is "
                    "reported as a failure rather than skipped"};
    }

    Vocabulary vocab;
    const std::vector<LabeledTriple> train_split =
        load_triples(train_path, vocab);
    const std::vector<LabeledTriple> valid_split =
        load_triples(valid_path, vocab);
    const std::vector<LabeledTriple> test_split =
        load_triples(test_path, vocab);

    TripleSet filter = make_triple_set(train_split);
    insert_triples(filter, valid_split);
    insert_triples(filter, test_split);

    TrainConfig config;
    config.n_qubits = 4;
    config.entity_layers = 4;
    config.relation_layers = 1;
    config.learning_rate = 0.001;
    config.epochs = 20;
    config.batch_size = 4;
    config.negatives_per_positive = 1;
    config.batched_scoring = true;

    std::string per_seed;
    bool any_pass = false;
    for (const std::uint64_t seed : {1ull, 2ull, 3ull}) {
        config.seed = seed;
        const TrainResult result =
            train(config, train_split, {}, vocab);
        const Metrics m =
            evaluate(test_split, result.store, filter).tail_metrics;
        per_seed += " seed " + std::to_string(seed) + ": MRR " +
                    fmt(m.mrr) + ", Hits@10 " + fmt(m.hits10) + ";";
        any_pass = any_pass || (m.mrr >= 0.70 && m.hits10 >= 0.88);
    }
    return {any_pass, "filtered test metrics over 3 seeds (need MRR >= "
                      "0.70 and Hits@10 >= 0.88 for at least one):" +
                          per_seed};
}

/// Criterion 8: identical seed/config/data give bit-identical checkpoints
/// and logs (wall_seconds excluded: it measures the host, not the run).
Criterion determinism() {
    const ToyData data = toy_data();
    TrainConfig config = toy_config();
    config.epochs = 6;

    struct Capture {
        std::vector<EpochLog> log;
        std::string rng_state;
    };
    const auto run = [&](Capture &capture) {
        return train(config, data.train, data.train, data.vocab,
                     [&capture](const EpochLog &entry,
                                const ParameterStore &,
                                const std::string &rng_state) {
                         capture.log.push_back(entry);
                         capture.rng_state = rng_state;
                     });
    };
    Capture capture_a;
    Capture capture_b;
    const TrainResult run_a = run(capture_a);
    const TrainResult run_b = run(capture_b);

    const auto checkpoint_bytes = [&](const TrainResult &result,
                                      const std::string &rng_state) {
        Checkpoint checkpoint;
        checkpoint.config = config;
        checkpoint.vocab = data.vocab;
        checkpoint.store = result.store;
        checkpoint.rng_state = rng_state;
        return checkpoint_to_json(checkpoint).dump(1);
    };
    const std::string bytes_a = checkpoint_bytes(run_a, capture_a.rng_state);
    const std::string bytes_b = checkpoint_bytes(run_b, capture_b.rng_state);

    bool logs_equal = capture_a.log.size() == capture_b.log.size();
    for (std::size_t i = 0; logs_equal && i < capture_a.log.size(); ++i) {
        const EpochLog &a = capture_a.log[i];
        const EpochLog &b = capture_b.log[i];
        logs_equal = a.epoch == b.epoch && a.mean_loss == b.mean_loss &&
                     a.valid_mrr == b.valid_mrr &&
                     a.circuit_executions == b.circuit_executions;
    }

    const bool pass = bytes_a == bytes_b && logs_equal;
    return {pass, std::string("checkpoints ") +
                      (bytes_a == bytes_b ? "byte-identical ("
                                          : "DIFFER (") +
                      std::to_string(bytes_a.size()) + " bytes), logs " +
                      (logs_equal ? "identical" : "DIFFER") +
                      " across 2 runs x " + std::to_string(config.epochs) +
                      " epochs (wall_seconds excluded: host timing, not "
                      "run output)"};
}

} // namespace

int main(int argc, char **argv) {
    const std::filesystem::path umls_dir =
        argc > 1 ? std::filesystem::path(argv[1])
                 : std::filesystem::path("data/umls");

    struct Entry {
        const char *name;
        std::function<Criterion()> run;
    };
    const std::vector<Entry> entries = {
        {"batched/sequential score equivalence", batched_equivalence},
        {"circuit-execution reduction", execution_reduction},
        {"gradient correctness vs finite differences", gradient_correctness},
        {"simulator norm and round-trip invariants", simulator_invariants},
        {"metrics and filtered-rank oracle", metrics_oracle},
        {"toy knowledge-graph convergence", toy_convergence},
        {"UMLS link-prediction reproduction",
         [&umls_dir]() { return umls_reproduction(umls_dir); }},
        {"bit-identical reruns", determinism},
    };

    std::size_t first = 0;
    std::size_t last = entries.size();
    if (argc > 2) {
        const int selected = std::stoi(argv[2]);
        if (selected < 1 || static_cast<std::size_t>(selected) > entries.size()) {
            std::cerr << "criterion number must be 1.."
                      << entries.size() << "\n";
            return static_cast<int>(entries.size());
        }
        first = static_cast<std::size_t>(selected - 1);
        last = first + 1;
    }

    int failures = 0;
    for (std::size_t i = first; i < last; ++i) {
        Criterion result;
        try {
            result = entries[i].run();
        } catch (const std::exception &e) {
            result = {false, std::string("unhandled exception: ") + e.what()};
        }
        failures += result.pass ? 0 : 1;
        std::cout << (result.pass ? "[PASS] " : "[FAIL] ") << (i + 1) << ". "
                  << entries[i].name << ": " << result.detail << "\n";
    }
    std::cout << (failures == 0 ? "acceptance: all criteria passed"
                                : "acceptance: " +
                                      std::to_string(failures) +
                                      " criterion(s) failed")
              << "\n";
    return failures;
}
