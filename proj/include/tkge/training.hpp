#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "tkge/evaluation.hpp"
#include "tkge/scoring.hpp"

namespace tkge {

struct TrainConfig {
    ScorerKind scorer = ScorerKind::TATransE;
    int d = 100;
    double lr = 0.001;
    double beta1 = 0.9;
    double beta2 = 0.999;
    double adam_eps = 1e-8;
    int batch_size = 512;
    int num_negatives = 500;
    int max_epochs = 500;
    int validate_every = 20;
    double dropout = 0.0;  // validated over {0, 0.4}
    std::uint64_t seed = 1;
    bool lstm_biases = false;
    int eval_workers = 1;
    bool time_agnostic_filter = false;
};

// k entity ids uniform with replacement, excluding the true entity on the
// corrupted side; no filtering against known true facts. Requires at least
// two entities.
std::vector<int> sample_negatives(int true_id, int k, int entity_count, Rng& rng);

// Two (k+1)-way cross-entropy terms per fact: one over the true object plus
// k corrupted objects, one over the true subject plus k corrupted subjects.
// Distance scores are negated before the softmax so that higher always
// means more plausible inside the loss.
ValueRef fact_loss(ModelParameters& params, const DatasetBundle& data, const TemporalFact& fact,
                   const TrainConfig& cfg, Rng& rng);

struct EpochRecord {
    int epoch = 0;
    double mean_loss = 0.0;
    double wall_ms = 0.0;
};

struct ValidationRecord {
    int epoch = 0;
    double filtered_mrr = 0.0;
    bool stopped_here = false;
};

struct TrainResult {
    ModelParameters params;
    int epochs_run = 0;
    double best_valid_mrr = -1.0;  // -1 when validation never ran
    bool aborted_numeric = false;
    std::string abort_message;
    std::vector<EpochRecord> epochs;
    std::vector<ValidationRecord> validations;
};

// One line-delimited structured record per epoch and per validation.
using TrainLogger = std::function<void(const std::string& jsonl_line)>;

// Shuffles per epoch (seeded), validates the filtered MRR every
// validate_every epochs, stops when it drops below the best seen and
// restores the best parameters. A numeric failure aborts the epoch and
// returns the best parameters seen so far with aborted_numeric set.
TrainResult train(const DatasetBundle& data, const TrainConfig& cfg, const TrainLogger& log = nullptr);

}  // namespace tkge
