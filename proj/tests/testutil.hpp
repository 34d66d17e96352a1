#pragma once

// Shared test helpers: the finite-difference gradient oracle, toy dataset
// builders, and an independent brute-force ranking oracle. Everything here
// recomputes from first principles so the tests stay independent of the
// implementation paths they check.

#include <cmath>
#include <functional>
#include <string>
#include <vector>

#include "tkge/dataset.hpp"
#include "tkge/evaluation.hpp"
#include "tkge/model.hpp"
#include "tkge/rng.hpp"

namespace tkge::test {

// ---------------------------------------------------------------------------
// Finite differences

// Central finite differences over every entry of every parameter:
// analytic gradients come from one backward() pass, numeric ones from
// re-running `build` with the entry perturbed by +-h. Returns the largest
// relative error, |a - n| / max(1e-3, |a| + |n|).
inline double max_grad_error_vs_fd(const std::function<ValueRef()>& build,
                                   const std::vector<Parameter*>& params, double h = 1e-5) {
    zero_grads(params);
    ValueRef loss = build();
    backward(loss);
    std::vector<Tensor> analytic;
    analytic.reserve(params.size());
    for (Parameter* p : params) analytic.push_back(p->grad);
    zero_grads(params);

    double worst = 0.0;
    for (std::size_t pi = 0; pi < params.size(); ++pi) {
        Parameter* p = params[pi];
        for (int i = 0; i < p->value.size(); ++i) {
            const double saved = p->value.v[i];
            p->value.v[i] = saved + h;
            const double up = build()->data.v[0];
            p->value.v[i] = saved - h;
            const double down = build()->data.v[0];
            p->value.v[i] = saved;
            const double numeric = (up - down) / (2.0 * h);
            const double a = analytic[pi].v[i];
            const double err = std::abs(a - numeric) / std::max(1e-3, std::abs(a) + std::abs(numeric));
            worst = std::max(worst, err);
        }
    }
    return worst;
}

// ---------------------------------------------------------------------------
// Toy datasets

inline ParsedFact make_fact(const std::string& s, const std::string& p, const std::string& o,
                            TemporalModifier m = TemporalModifier::None,
                            std::optional<Timestamp> ts = std::nullopt) {
    ParsedFact f;
    f.subject = s;
    f.relation = p;
    f.object = o;
    f.modifier = m;
    f.timestamp = ts;
    return f;
}

// Facts with distinct (s, r, o) triples and full dates in one year; suited
// for memorization by every scorer.
inline std::vector<ParsedFact> toy_facts(int num_entities, int num_relations, int num_facts,
                                         std::uint64_t seed) {
    Rng rng(seed);
    std::vector<ParsedFact> facts;
    std::unordered_set<std::string> seen;
    while (static_cast<int>(facts.size()) < num_facts) {
        const int s = rng.uniform_int(num_entities);
        const int r = rng.uniform_int(num_relations);
        const int o = rng.uniform_int(num_entities);
        if (o == s) continue;
        const std::string key = std::to_string(s) + "/" + std::to_string(r) + "/" + std::to_string(o);
        if (!seen.insert(key).second) continue;
        Timestamp ts;
        ts.year = 2014;
        ts.month = 1 + rng.uniform_int(12);
        ts.day = 1 + rng.uniform_int(28);
        facts.push_back(make_fact("e" + std::to_string(s), "r" + std::to_string(r), "e" + std::to_string(o),
                                  TemporalModifier::None, ts));
    }
    return facts;
}

// Same-split bundle: train == valid == test, for overfit checks.
inline DatasetBundle toy_bundle(const std::vector<ParsedFact>& facts) {
    return build_dataset(facts, facts, facts, Dialect::Plain);
}

// Facts whose (s, r, o) patterns collide and only the year disambiguates:
// each subject links to two objects under the same relation, at two years.
inline std::vector<ParsedFact> time_only_facts(int num_subjects) {
    std::vector<ParsedFact> facts;
    for (int i = 0; i < num_subjects; ++i) {
        const std::string s = "s" + std::to_string(i);
        Timestamp t1;
        t1.year = 1990 + i % 5;
        Timestamp t2;
        t2.year = 2000 + i % 7;
        facts.push_back(make_fact(s, "r", "a" + std::to_string(i % 3), TemporalModifier::None, t1));
        facts.push_back(make_fact(s, "r", "b" + std::to_string(i % 3), TemporalModifier::None, t2));
    }
    return facts;
}

// ---------------------------------------------------------------------------
// Brute-force ranking oracle

// Direct transcription of the recurrence: row-vector states, sigmoid gates,
// identity cell/hidden activations.
inline std::vector<double> oracle_encode(const std::vector<int>& tokens, const ModelParameters& params) {
    const int d = params.d;
    std::vector<double> h(d, 0.0), c(d, 0.0);
    for (int t : tokens) {
        const double* x = params.token_table.value.row(t);
        std::vector<double> pre[4] = {std::vector<double>(d, 0.0), std::vector<double>(d, 0.0),
                                      std::vector<double>(d, 0.0), std::vector<double>(d, 0.0)};
        const Parameter* us[4] = {&params.lstm.u_i, &params.lstm.u_f, &params.lstm.u_o, &params.lstm.u_g};
        const Parameter* ws[4] = {&params.lstm.w_i, &params.lstm.w_f, &params.lstm.w_o, &params.lstm.w_g};
        const Parameter* bs[4] = {&params.lstm.b_i, &params.lstm.b_f, &params.lstm.b_o, &params.lstm.b_g};
        for (int g = 0; g < 4; ++g) {
            for (int k = 0; k < d; ++k) {
                if (h[k] == 0.0) continue;
                for (int j = 0; j < d; ++j) pre[g][j] += h[k] * us[g]->value.at(k, j);
            }
            std::vector<double> xw(d, 0.0);
            for (int k = 0; k < d; ++k) {
                if (x[k] == 0.0) continue;
                for (int j = 0; j < d; ++j) xw[j] += x[k] * ws[g]->value.at(k, j);
            }
            for (int j = 0; j < d; ++j) pre[g][j] += xw[j];
            if (params.lstm.use_biases) {
                for (int j = 0; j < d; ++j) pre[g][j] += bs[g]->value.v[j];
            }
        }
        auto sig = [](double v) {
            return v >= 0.0 ? 1.0 / (1.0 + std::exp(-v)) : std::exp(v) / (1.0 + std::exp(v));
        };
        for (int j = 0; j < d; ++j) {
            const double i_g = sig(pre[0][j]);
            const double f_g = sig(pre[1][j]);
            const double o_g = sig(pre[2][j]);
            c[j] = f_g * c[j] + i_g * pre[3][j];
            h[j] = o_g * c[j];
        }
    }
    return h;
}

// Score of one triple with `candidate` substituted on `side`, straight from
// the scoring formulas.
inline double oracle_score(const ModelParameters& params, const DatasetBundle& data,
                           const TemporalFact& fact, Side side, int candidate) {
    const int d = params.d;
    const int s_id = side == Side::Subject ? candidate : fact.subject;
    const int o_id = side == Side::Object ? candidate : fact.object;
    const double* e_s = params.entity_table.value.row(s_id);
    const double* e_o = params.entity_table.value.row(o_id);

    std::vector<double> p_vec;
    if (uses_encoder(params.scorer)) {
        p_vec = oracle_encode(data.sequences.sequence(fact.seq_id).token_ids, params);
    } else {
        const double* r = params.relation_table.value.row(fact.relation);
        p_vec.assign(r, r + d);
    }
    std::vector<double> t_vec(d, 0.0);
    if (params.scorer == ScorerKind::TTransE && fact.ts_key >= 0) {
        const double* t = params.timestamp_table.value.row(fact.ts_key);
        t_vec.assign(t, t + d);
    }

    if (orientation(params.scorer) == ScoreOrientation::DistanceLower) {
        double acc = 0.0;
        for (int j = 0; j < d; ++j) {
            double shifted = e_s[j] + p_vec[j];
            if (params.scorer == ScorerKind::TTransE) shifted += t_vec[j];
            const double diff = shifted - e_o[j];
            acc += diff * diff;
        }
        return std::sqrt(acc);
    }
    double acc = 0.0;
    for (int j = 0; j < d; ++j) acc += (e_s[j] * e_o[j]) * p_vec[j];
    return acc;
}

// Filtering by scanning every fact of every split, no index involved.
inline bool oracle_filtered_out(const DatasetBundle& data, const TemporalFact& query, Side side,
                                int candidate) {
    const int true_entity = side == Side::Object ? query.object : query.subject;
    if (candidate == true_entity) return false;
    const int s = side == Side::Object ? query.subject : candidate;
    const int o = side == Side::Object ? candidate : query.object;
    const auto& seq = data.sequences.sequence(query.seq_id).token_ids;
    for (const auto* split : {&data.train, &data.valid, &data.test}) {
        for (const TemporalFact& g : *split) {
            if (g.subject == s && g.object == o &&
                data.sequences.sequence(g.seq_id).token_ids == seq) {
                return true;
            }
        }
    }
    return false;
}

inline double oracle_rank(const ModelParameters& params, const DatasetBundle& data,
                          const TemporalFact& query, Side side, Setting setting) {
    const int true_entity = side == Side::Object ? query.object : query.subject;
    const double true_score = oracle_score(params, data, query, side, true_entity);
    const bool lower = orientation(params.scorer) == ScoreOrientation::DistanceLower;
    int better = 0, tied = 0;
    for (int c = 0; c < data.num_entities(); ++c) {
        if (setting == Setting::Filtered && oracle_filtered_out(data, query, side, c)) continue;
        const double s = oracle_score(params, data, query, side, c);
        if (lower ? s < true_score : s > true_score) ++better;
        if (s == true_score) ++tied;
    }
    return better + (tied + 1) / 2.0;
}

inline bool tensors_equal(const Tensor& a, const Tensor& b) {
    return a.rows == b.rows && a.cols == b.cols && a.v == b.v;
}

inline bool params_equal(const ModelParameters& a, const ModelParameters& b) {
    const auto la = a.trainable();
    const auto lb = b.trainable();
    if (la.size() != lb.size()) return false;
    for (std::size_t i = 0; i < la.size(); ++i) {
        if (la[i]->name != lb[i]->name) return false;
        if (!tensors_equal(la[i]->value, lb[i]->value)) return false;
        if (!tensors_equal(la[i]->adam_m, lb[i]->adam_m)) return false;
        if (!tensors_equal(la[i]->adam_v, lb[i]->adam_v)) return false;
        if (la[i]->adam_step != lb[i]->adam_step) return false;
    }
    return true;
}

}  // namespace tkge::test
