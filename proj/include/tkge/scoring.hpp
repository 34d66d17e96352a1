#pragma once

#include <optional>
#include <vector>

#include "tkge/dataset.hpp"
#include "tkge/model.hpp"

namespace tkge {

// Differentiable single-triple scores. Orientation: TransE family returns
// || . ||_2 distances, DistMult family similarity sums. Dropout (training
// mode) applies to every embedding row that enters a score.

ValueRef transe_score(ModelParameters& params, int s, int p, int o, bool training = false,
                      double dropout_p = 0.0, Rng* rng = nullptr);
ValueRef distmult_score(ModelParameters& params, int s, int p, int o, bool training = false,
                        double dropout_p = 0.0, Rng* rng = nullptr);
ValueRef ta_transe_score(ModelParameters& params, int s, const PredicateSequence& seq, int o,
                         bool training = false, double dropout_p = 0.0, Rng* rng = nullptr);
ValueRef ta_distmult_score(ModelParameters& params, int s, const PredicateSequence& seq, int o,
                           bool training = false, double dropout_p = 0.0, Rng* rng = nullptr);
// ts_key < 0 means no timestamp or unseen in training: the translation
// defaults to the null vector.
ValueRef ttranse_score(ModelParameters& params, int s, int p, int o, int ts_key, bool training = false,
                       double dropout_p = 0.0, Rng* rng = nullptr);

// The predicate-side representation of one fact, built once and shared by
// both completion directions and all candidate lists.
struct PredicateRep {
    ValueRef e_p;  // 1 x d: static relation row or encoded sequence
    ValueRef e_t;  // TTransE timestamp row; null when absent/unseen
};

PredicateRep predicate_rep(ModelParameters& params, const DatasetBundle& data, const TemporalFact& fact,
                           bool training, double dropout_p, Rng& rng);

// Scores of each candidate substituted on `side`, native orientation,
// returned as a (num candidates) x 1 value.
ValueRef candidate_scores(ModelParameters& params, const PredicateRep& rep, Side side, int fixed_entity,
                          const std::vector<int>& candidates, bool training, double dropout_p, Rng& rng);

// Dispatch on the configured scorer for one fact (graph path).
ValueRef fact_score(ModelParameters& params, const DatasetBundle& data, const TemporalFact& fact,
                    bool training = false, double dropout_p = 0.0, Rng* rng = nullptr);

// Evaluation-mode scorer over a read-only parameter snapshot: no graphs,
// no dropout, deterministic. With caching on, each distinct predicate
// sequence is encoded once; caching off recomputes per call with identical
// results.
class FlatScorer {
public:
    FlatScorer(const ModelParameters& params, const DatasetBundle& data, bool cache_sequences = true);

    // Scores all |E| candidate completions of `fact` on `side` into `out`.
    void score_all(const TemporalFact& fact, Side side, std::vector<double>& out) const;

    // Score of one concrete triple (candidate substituted on `side`).
    double score_one(const TemporalFact& fact, Side side, int candidate) const;

    ScoreOrientation score_orientation() const { return orientation(params_.scorer); }

    const std::vector<double>& sequence_embedding(int seq_id) const;

private:
    std::vector<double> predicate_vector(const TemporalFact& fact) const;

    const ModelParameters& params_;
    const DatasetBundle& data_;
    bool cache_;
    mutable std::vector<std::vector<double>> seq_cache_;  // by seq_id, filled eagerly when caching
    std::vector<double> zero_;
};

}  // namespace tkge
