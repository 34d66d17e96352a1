#include "tkge/model.hpp"

#include <cmath>

#include "tkge/errors.hpp"

namespace tkge {

ScorerKind scorer_from_string(const std::string& s) {
    if (s == "transe") return ScorerKind::TransE;
    if (s == "distmult") return ScorerKind::DistMult;
    if (s == "ttranse") return ScorerKind::TTransE;
    if (s == "ta_transe") return ScorerKind::TATransE;
    if (s == "ta_distmult") return ScorerKind::TADistMult;
    throw DataError("unknown scorer '" + s +
                    "' (expected transe, distmult, ttranse, ta_transe or ta_distmult)");
}

const char* to_string(ScorerKind k) {
    switch (k) {
        case ScorerKind::TransE:
            return "transe";
        case ScorerKind::DistMult:
            return "distmult";
        case ScorerKind::TTransE:
            return "ttranse";
        case ScorerKind::TATransE:
            return "ta_transe";
        case ScorerKind::TADistMult:
            return "ta_distmult";
    }
    return "?";
}

ScoreOrientation orientation(ScorerKind k) {
    switch (k) {
        case ScorerKind::TransE:
        case ScorerKind::TTransE:
        case ScorerKind::TATransE:
            return ScoreOrientation::DistanceLower;
        case ScorerKind::DistMult:
        case ScorerKind::TADistMult:
            return ScoreOrientation::SimilarityHigher;
    }
    return ScoreOrientation::DistanceLower;
}

bool uses_encoder(ScorerKind k) { return k == ScorerKind::TATransE || k == ScorerKind::TADistMult; }

bool uses_static_relations(ScorerKind k) { return !uses_encoder(k); }

bool uses_timestamp_table(ScorerKind k) { return k == ScorerKind::TTransE; }

std::vector<Parameter*> ModelParameters::trainable() {
    std::vector<Parameter*> out = {&entity_table};
    if (uses_static_relations(scorer)) out.push_back(&relation_table);
    if (uses_timestamp_table(scorer)) out.push_back(&timestamp_table);
    if (uses_encoder(scorer)) {
        out.push_back(&token_table);
        for (Parameter* p : lstm.parameters()) out.push_back(p);
    }
    return out;
}

std::vector<const Parameter*> ModelParameters::trainable() const {
    auto list = const_cast<ModelParameters*>(this)->trainable();
    return {list.begin(), list.end()};
}

ModelParameters ModelParameters::create(ScorerKind scorer, int d, int num_entities, int num_relations,
                                        int num_tokens, int num_timestamps, bool lstm_biases, Rng& rng) {
    ModelParameters p;
    p.scorer = scorer;
    p.d = d;
    const double bound = 6.0 / std::sqrt(static_cast<double>(d));
    p.entity_table = Parameter("entity_table", num_entities, d);
    p.entity_table.init_uniform(rng, -bound, bound);
    if (uses_static_relations(scorer)) {
        p.relation_table = Parameter("relation_table", num_relations, d);
        p.relation_table.init_uniform(rng, -bound, bound);
    }
    if (uses_timestamp_table(scorer)) {
        p.timestamp_table = Parameter("timestamp_table", num_timestamps, d);
        p.timestamp_table.init_uniform(rng, -bound, bound);
    }
    if (uses_encoder(scorer)) {
        p.token_table = Parameter("token_table", num_tokens, d);
        p.token_table.init_uniform(rng, -bound, bound);
        p.lstm.init(d, lstm_biases, rng);
    }
    return p;
}

}  // namespace tkge
