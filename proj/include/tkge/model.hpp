#pragma once

#include <string>
#include <vector>

#include "tkge/autodiff.hpp"
#include "tkge/lstm.hpp"

namespace tkge {

enum class ScorerKind { TransE, DistMult, TTransE, TATransE, TADistMult };

ScorerKind scorer_from_string(const std::string& s);
const char* to_string(ScorerKind k);

// TransE-family scores are distances (lower is more plausible); the
// DistMult family returns similarities (higher is more plausible).
enum class ScoreOrientation { DistanceLower, SimilarityHigher };

ScoreOrientation orientation(ScorerKind k);
bool uses_encoder(ScorerKind k);          // TA models
bool uses_static_relations(ScorerKind k); // TransE, DistMult, TTransE
bool uses_timestamp_table(ScorerKind k);  // TTransE

enum class Side { Subject, Object };

// All trainable arrays. Exactly the tables required by the scorer are
// allocated; the others stay empty.
struct ModelParameters {
    ScorerKind scorer = ScorerKind::TransE;
    int d = 0;

    Parameter entity_table;     // |E| x d
    Parameter relation_table;   // |R| x d, static scorers
    Parameter token_table;      // |V_tok| x d, TA scorers
    LstmWeights lstm;           // TA scorers
    Parameter timestamp_table;  // |T_train| x d, TTransE

    std::vector<Parameter*> trainable();
    std::vector<const Parameter*> trainable() const;

    // Embeddings and gate matrices start uniform in [-6/sqrt(d), 6/sqrt(d)];
    // biases (when enabled) start at zero.
    static ModelParameters create(ScorerKind scorer, int d, int num_entities, int num_relations,
                                  int num_tokens, int num_timestamps, bool lstm_biases, Rng& rng);
};

}  // namespace tkge
