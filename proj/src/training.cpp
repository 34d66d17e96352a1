#include "tkge/training.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <stdexcept>

#include "tkge/errors.hpp"

namespace tkge {

std::vector<int> sample_negatives(int true_id, int k, int entity_count, Rng& rng) {
    if (entity_count < 2) throw std::invalid_argument("sample_negatives: need at least two entities");
    if (k < 1) throw std::invalid_argument("sample_negatives: k must be positive");
    std::vector<int> out;
    out.reserve(k);
    while (static_cast<int>(out.size()) < k) {
        const int id = rng.uniform_int(entity_count);
        if (id == true_id) continue;
        out.push_back(id);
    }
    return out;
}

namespace {

ValueRef direction_loss(ModelParameters& params, const PredicateRep& rep, const TemporalFact& fact,
                        Side corrupted, const TrainConfig& cfg, int entity_count, Rng& rng) {
    const int true_id = corrupted == Side::Object ? fact.object : fact.subject;
    const int fixed_id = corrupted == Side::Object ? fact.subject : fact.object;
    std::vector<int> candidates;
    candidates.reserve(cfg.num_negatives + 1);
    candidates.push_back(true_id);
    for (int id : sample_negatives(true_id, cfg.num_negatives, entity_count, rng)) {
        candidates.push_back(id);
    }
    ValueRef scores =
        candidate_scores(params, rep, corrupted, fixed_id, candidates, true, cfg.dropout, rng);
    if (orientation(params.scorer) == ScoreOrientation::DistanceLower) scores = scale(scores, -1.0);
    return softmax_cross_entropy(scores, 0);
}

}  // namespace

ValueRef fact_loss(ModelParameters& params, const DatasetBundle& data, const TemporalFact& fact,
                   const TrainConfig& cfg, Rng& rng) {
    const PredicateRep rep = predicate_rep(params, data, fact, true, cfg.dropout, rng);
    const int entity_count = data.num_entities();
    ValueRef object_term = direction_loss(params, rep, fact, Side::Object, cfg, entity_count, rng);
    ValueRef subject_term = direction_loss(params, rep, fact, Side::Subject, cfg, entity_count, rng);
    return add(object_term, subject_term);
}

namespace {

std::string epoch_json(const EpochRecord& r) {
    char buf[160];
    std::snprintf(buf, sizeof(buf), "{\"type\":\"epoch\",\"epoch\":%d,\"mean_loss\":%.10g,\"wall_ms\":%.3f}",
                  r.epoch, r.mean_loss, r.wall_ms);
    return buf;
}

std::string validation_json(const ValidationRecord& r) {
    char buf[160];
    std::snprintf(buf, sizeof(buf),
                  "{\"type\":\"validation\",\"epoch\":%d,\"filtered_mrr\":%.10g,\"stop\":%s}", r.epoch,
                  r.filtered_mrr, r.stopped_here ? "true" : "false");
    return buf;
}

struct Snapshot {
    std::vector<Tensor> values;
    std::vector<Tensor> adam_m;
    std::vector<Tensor> adam_v;
    std::vector<std::int64_t> steps;

    static Snapshot take(ModelParameters& params) {
        Snapshot s;
        for (Parameter* p : params.trainable()) {
            s.values.push_back(p->value);
            s.adam_m.push_back(p->adam_m);
            s.adam_v.push_back(p->adam_v);
            s.steps.push_back(p->adam_step);
        }
        return s;
    }

    void restore(ModelParameters& params) const {
        std::size_t i = 0;
        for (Parameter* p : params.trainable()) {
            p->value = values[i];
            p->adam_m = adam_m[i];
            p->adam_v = adam_v[i];
            p->adam_step = steps[i];
            ++i;
        }
    }
};

}  // namespace

TrainResult train(const DatasetBundle& data, const TrainConfig& cfg, const TrainLogger& log) {
    Rng rng(cfg.seed);
    TrainResult result;
    result.params = ModelParameters::create(cfg.scorer, cfg.d, data.num_entities(), data.num_relations(),
                                            data.tokens.size(),
                                            static_cast<int>(data.timestamp_keys.size()), cfg.lstm_biases,
                                            rng);
    ModelParameters& params = result.params;
    const std::vector<Parameter*> trainable = params.trainable();
    const AdamConfig adam{cfg.lr, cfg.beta1, cfg.beta2, cfg.adam_eps};
    const EvalOptions eval_opts{true, cfg.time_agnostic_filter, cfg.eval_workers};

    std::vector<int> order(data.train.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = static_cast<int>(i);

    Snapshot best;
    bool have_best = false;

    for (int epoch = 1; epoch <= cfg.max_epochs; ++epoch) {
        const auto t0 = std::chrono::steady_clock::now();
        // Seeded Fisher-Yates shuffle.
        for (int i = static_cast<int>(order.size()) - 1; i > 0; --i) {
            std::swap(order[i], order[rng.uniform_int(i + 1)]);
        }
        double loss_sum = 0.0;
        try {
            for (std::size_t start = 0; start < order.size(); start += cfg.batch_size) {
                const std::size_t end = std::min(order.size(), start + cfg.batch_size);
                const double inv_batch = 1.0 / static_cast<double>(end - start);
                // Gradients are linear in the loss: running backward per fact
                // (scaled by 1/batch) and stepping once per batch equals a
                // batch-mean backward, but the graph memory stays per-fact.
                for (std::size_t i = start; i < end; ++i) {
                    ValueRef loss = fact_loss(params, data, data.train[order[i]], cfg, rng);
                    if (!std::isfinite(loss->data.v[0])) {
                        throw NumericError("non-finite loss in epoch " + std::to_string(epoch) +
                                           ", fact " + std::to_string(order[i]));
                    }
                    loss_sum += loss->data.v[0];
                    backward(scale(loss, inv_batch));
                }
                adam_step(trainable, adam);
            }
        } catch (const NumericError& e) {
            zero_grads(trainable);
            if (have_best) best.restore(params);
            result.aborted_numeric = true;
            result.abort_message = e.what();
            result.epochs_run = epoch;
            return result;
        }
        const auto t1 = std::chrono::steady_clock::now();
        EpochRecord record{epoch, loss_sum / static_cast<double>(data.train.size()),
                           std::chrono::duration<double, std::milli>(t1 - t0).count()};
        result.epochs.push_back(record);
        if (log) log(epoch_json(record));
        result.epochs_run = epoch;

        if (cfg.validate_every > 0 && epoch % cfg.validate_every == 0 && !data.valid.empty()) {
            const double mrr = filtered_mrr(params, data, data.valid, eval_opts);
            const bool decreased = result.best_valid_mrr >= 0.0 && mrr < result.best_valid_mrr;
            ValidationRecord vr{epoch, mrr, decreased};
            result.validations.push_back(vr);
            if (log) log(validation_json(vr));
            if (decreased) {
                best.restore(params);
                return result;
            }
            if (mrr > result.best_valid_mrr) {
                result.best_valid_mrr = mrr;
                best = Snapshot::take(params);
                have_best = true;
            }
        }
    }
    if (have_best) best.restore(params);
    return result;
}

}  // namespace tkge
