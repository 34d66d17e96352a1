#include "tkge/scoring.hpp"

#include <cmath>
#include <stdexcept>

#include "tkge/errors.hpp"

namespace tkge {

namespace {

ValueRef embed(Parameter& table, int id, bool training, double dropout_p, Rng* rng) {
    ValueRef row = lookup(table, {id});
    if (training && dropout_p > 0.0) {
        if (!rng) throw std::invalid_argument("training-mode dropout needs an rng");
        return dropout(row, dropout_p, true, *rng);
    }
    return row;
}

ValueRef norm_of_translation(const ValueRef& e_s, const ValueRef& e_p, const ValueRef& e_t,
                             const ValueRef& e_o) {
    ValueRef shifted = add(e_s, e_p);
    if (e_t) shifted = add(shifted, e_t);
    return l2_norm(sub(shifted, e_o));
}

}  // namespace

ValueRef transe_score(ModelParameters& params, int s, int p, int o, bool training, double dropout_p,
                      Rng* rng) {
    ValueRef e_s = embed(params.entity_table, s, training, dropout_p, rng);
    ValueRef e_p = embed(params.relation_table, p, training, dropout_p, rng);
    ValueRef e_o = embed(params.entity_table, o, training, dropout_p, rng);
    return norm_of_translation(e_s, e_p, nullptr, e_o);
}

ValueRef distmult_score(ModelParameters& params, int s, int p, int o, bool training, double dropout_p,
                        Rng* rng) {
    ValueRef e_s = embed(params.entity_table, s, training, dropout_p, rng);
    ValueRef e_p = embed(params.relation_table, p, training, dropout_p, rng);
    ValueRef e_o = embed(params.entity_table, o, training, dropout_p, rng);
    return sum(mul(mul(e_s, e_o), e_p));
}

ValueRef ta_transe_score(ModelParameters& params, int s, const PredicateSequence& seq, int o, bool training,
                         double dropout_p, Rng* rng) {
    if (training && dropout_p > 0.0 && !rng) throw std::invalid_argument("training-mode dropout needs an rng");
    Rng fallback(0);
    Rng& r = rng ? *rng : fallback;
    ValueRef e_p = encode_sequence(seq.token_ids, params.token_table, params.lstm, training, dropout_p, r);
    ValueRef e_s = embed(params.entity_table, s, training, dropout_p, rng);
    ValueRef e_o = embed(params.entity_table, o, training, dropout_p, rng);
    return norm_of_translation(e_s, e_p, nullptr, e_o);
}

ValueRef ta_distmult_score(ModelParameters& params, int s, const PredicateSequence& seq, int o,
                           bool training, double dropout_p, Rng* rng) {
    if (training && dropout_p > 0.0 && !rng) throw std::invalid_argument("training-mode dropout needs an rng");
    Rng fallback(0);
    Rng& r = rng ? *rng : fallback;
    ValueRef e_p = encode_sequence(seq.token_ids, params.token_table, params.lstm, training, dropout_p, r);
    ValueRef e_s = embed(params.entity_table, s, training, dropout_p, rng);
    ValueRef e_o = embed(params.entity_table, o, training, dropout_p, rng);
    return sum(mul(mul(e_s, e_o), e_p));
}

ValueRef ttranse_score(ModelParameters& params, int s, int p, int o, int ts_key, bool training,
                       double dropout_p, Rng* rng) {
    ValueRef e_s = embed(params.entity_table, s, training, dropout_p, rng);
    ValueRef e_p = embed(params.relation_table, p, training, dropout_p, rng);
    ValueRef e_t = ts_key >= 0 ? embed(params.timestamp_table, ts_key, training, dropout_p, rng) : nullptr;
    ValueRef e_o = embed(params.entity_table, o, training, dropout_p, rng);
    return norm_of_translation(e_s, e_p, e_t, e_o);
}

PredicateRep predicate_rep(ModelParameters& params, const DatasetBundle& data, const TemporalFact& fact,
                           bool training, double dropout_p, Rng& rng) {
    PredicateRep rep;
    if (uses_encoder(params.scorer)) {
        const PredicateSequence& seq = data.sequences.sequence(fact.seq_id);
        rep.e_p = encode_sequence(seq.token_ids, params.token_table, params.lstm, training, dropout_p, rng);
    } else {
        rep.e_p = embed(params.relation_table, fact.relation, training, dropout_p, &rng);
    }
    if (uses_timestamp_table(params.scorer) && fact.ts_key >= 0) {
        rep.e_t = embed(params.timestamp_table, fact.ts_key, training, dropout_p, &rng);
    }
    return rep;
}

ValueRef candidate_scores(ModelParameters& params, const PredicateRep& rep, Side side, int fixed_entity,
                          const std::vector<int>& candidates, bool training, double dropout_p, Rng& rng) {
    ValueRef c = lookup(params.entity_table, candidates);
    if (training && dropout_p > 0.0) c = dropout(c, dropout_p, true, rng);
    ValueRef fixed = embed(params.entity_table, fixed_entity, training, dropout_p, &rng);

    if (orientation(params.scorer) == ScoreOrientation::DistanceLower) {
        // || e_s + e_p (+ e_t) - e_o ||: candidates minus the fixed remainder.
        ValueRef base;
        if (side == Side::Object) {
            base = add(fixed, rep.e_p);
            if (rep.e_t) base = add(base, rep.e_t);
        } else {
            base = sub(fixed, rep.e_p);
            if (rep.e_t) base = sub(base, rep.e_t);
        }
        return row_l2_norms(rows_sub_vec(c, base));
    }
    return matvec(c, mul(fixed, rep.e_p));
}

ValueRef fact_score(ModelParameters& params, const DatasetBundle& data, const TemporalFact& fact,
                    bool training, double dropout_p, Rng* rng) {
    switch (params.scorer) {
        case ScorerKind::TransE:
            return transe_score(params, fact.subject, fact.relation, fact.object, training, dropout_p, rng);
        case ScorerKind::DistMult:
            return distmult_score(params, fact.subject, fact.relation, fact.object, training, dropout_p,
                                  rng);
        case ScorerKind::TTransE:
            return ttranse_score(params, fact.subject, fact.relation, fact.object, fact.ts_key, training,
                                 dropout_p, rng);
        case ScorerKind::TATransE:
            return ta_transe_score(params, fact.subject, data.sequences.sequence(fact.seq_id), fact.object,
                                   training, dropout_p, rng);
        case ScorerKind::TADistMult:
            return ta_distmult_score(params, fact.subject, data.sequences.sequence(fact.seq_id),
                                     fact.object, training, dropout_p, rng);
    }
    throw std::logic_error("fact_score: unreachable");
}

FlatScorer::FlatScorer(const ModelParameters& params, const DatasetBundle& data, bool cache_sequences)
    : params_(params), data_(data), cache_(cache_sequences), zero_(params.d, 0.0) {
    if (cache_ && uses_encoder(params_.scorer)) {
        seq_cache_.resize(data_.sequences.size());
        for (int i = 0; i < data_.sequences.size(); ++i) {
            seq_cache_[i] =
                encode_sequence_flat(data_.sequences.sequence(i).token_ids, params_.token_table.value,
                                     params_.lstm);
        }
    }
}

const std::vector<double>& FlatScorer::sequence_embedding(int seq_id) const {
    if (!cache_ || seq_cache_.empty()) {
        throw std::logic_error("sequence_embedding: cache disabled");
    }
    return seq_cache_.at(seq_id);
}

std::vector<double> FlatScorer::predicate_vector(const TemporalFact& fact) const {
    if (uses_encoder(params_.scorer)) {
        if (cache_) return seq_cache_.at(fact.seq_id);
        return encode_sequence_flat(data_.sequences.sequence(fact.seq_id).token_ids,
                                    params_.token_table.value, params_.lstm);
    }
    const double* row = params_.relation_table.value.row(fact.relation);
    return {row, row + params_.d};
}

void FlatScorer::score_all(const TemporalFact& fact, Side side, std::vector<double>& out) const {
    const int num_entities = params_.entity_table.rows();
    const int d = params_.d;
    out.resize(num_entities);
    const std::vector<double> e_p = predicate_vector(fact);
    const double* e_t = nullptr;
    if (uses_timestamp_table(params_.scorer)) {
        e_t = fact.ts_key >= 0 ? params_.timestamp_table.value.row(fact.ts_key) : zero_.data();
    }
    const double* fixed =
        params_.entity_table.value.row(side == Side::Object ? fact.subject : fact.object);

    if (orientation(params_.scorer) == ScoreOrientation::DistanceLower) {
        for (int c = 0; c < num_entities; ++c) {
            const double* e_c = params_.entity_table.value.row(c);
            const double* e_s = side == Side::Object ? fixed : e_c;
            const double* e_o = side == Side::Object ? e_c : fixed;
            double acc = 0.0;
            for (int j = 0; j < d; ++j) {
                double shifted = e_s[j] + e_p[j];
                if (e_t) shifted += e_t[j];
                const double diff = shifted - e_o[j];
                acc += diff * diff;
            }
            out[c] = std::sqrt(acc);
        }
    } else {
        for (int c = 0; c < num_entities; ++c) {
            const double* e_c = params_.entity_table.value.row(c);
            const double* e_s = side == Side::Object ? fixed : e_c;
            const double* e_o = side == Side::Object ? e_c : fixed;
            double acc = 0.0;
            for (int j = 0; j < d; ++j) acc += (e_s[j] * e_o[j]) * e_p[j];
            out[c] = acc;
        }
    }
}

double FlatScorer::score_one(const TemporalFact& fact, Side side, int candidate) const {
    const int d = params_.d;
    const std::vector<double> e_p = predicate_vector(fact);
    const double* e_t = nullptr;
    if (uses_timestamp_table(params_.scorer)) {
        e_t = fact.ts_key >= 0 ? params_.timestamp_table.value.row(fact.ts_key) : zero_.data();
    }
    const double* fixed =
        params_.entity_table.value.row(side == Side::Object ? fact.subject : fact.object);
    const double* e_c = params_.entity_table.value.row(candidate);
    const double* e_s = side == Side::Object ? fixed : e_c;
    const double* e_o = side == Side::Object ? e_c : fixed;
    if (orientation(params_.scorer) == ScoreOrientation::DistanceLower) {
        double acc = 0.0;
        for (int j = 0; j < d; ++j) {
            double shifted = e_s[j] + e_p[j];
            if (e_t) shifted += e_t[j];
            const double diff = shifted - e_o[j];
            acc += diff * diff;
        }
        return std::sqrt(acc);
    }
    double acc = 0.0;
    for (int j = 0; j < d; ++j) acc += (e_s[j] * e_o[j]) * e_p[j];
    return acc;
}

}  // namespace tkge
