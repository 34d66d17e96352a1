#include "tkge/evaluation.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>
#include <stdexcept>
#include <thread>

namespace tkge {

namespace {

struct RankPair {
    double raw = 0.0;
    double filtered = 0.0;
};

bool filtered_out(const DatasetBundle& data, const TemporalFact& query, Side side, int candidate,
                  bool time_agnostic) {
    const int true_entity = side == Side::Object ? query.object : query.subject;
    if (candidate == true_entity) return false;  // the query's own answer is never filtered
    const int s = side == Side::Object ? query.subject : candidate;
    const int o = side == Side::Object ? candidate : query.object;
    return time_agnostic ? data.known_relation_fact(s, query.relation, o)
                         : data.known_fact(s, query.seq_id, o);
}

// One scoring pass yields both settings.
RankPair rank_both_settings(const FlatScorer& scorer, const DatasetBundle& data, const TemporalFact& query,
                            Side side, const EvalOptions& opts, std::vector<double>& scratch) {
    scorer.score_all(query, side, scratch);
    const int true_entity = side == Side::Object ? query.object : query.subject;
    if (true_entity < 0 || true_entity >= static_cast<int>(scratch.size())) {
        throw std::logic_error("rank: true entity missing from vocabulary");
    }
    const double true_score = scratch[true_entity];
    const bool lower_better = scorer.score_orientation() == ScoreOrientation::DistanceLower;
    int better_raw = 0, tied_raw = 0, better_flt = 0, tied_flt = 0;
    for (int c = 0; c < static_cast<int>(scratch.size()); ++c) {
        const double s = scratch[c];
        const bool better = lower_better ? s < true_score : s > true_score;
        const bool tied = s == true_score;
        if (!better && !tied) continue;
        if (better) ++better_raw;
        if (tied) ++tied_raw;
        if (!filtered_out(data, query, side, c, opts.time_agnostic_filter)) {
            if (better) ++better_flt;
            if (tied) ++tied_flt;
        }
    }
    RankPair out;
    out.raw = better_raw + (tied_raw + 1) / 2.0;
    out.filtered = better_flt + (tied_flt + 1) / 2.0;
    return out;
}

}  // namespace

double rank_entity(const FlatScorer& scorer, const DatasetBundle& data, const TemporalFact& query, Side side,
                   Setting setting, const EvalOptions& opts) {
    std::vector<double> scratch;
    const RankPair pair = rank_both_settings(scorer, data, query, side, opts, scratch);
    return setting == Setting::Raw ? pair.raw : pair.filtered;
}

RankingReport evaluate_split(const ModelParameters& params, const DatasetBundle& data,
                             const std::vector<TemporalFact>& split, const EvalOptions& opts) {
    if (split.empty()) throw std::invalid_argument("evaluate_split: empty split");
    const FlatScorer scorer(params, data, opts.cache_sequences);
    RankingReport report;
    for (auto& per_side : report.ranks) {
        for (auto& per_setting : per_side) per_setting.resize(split.size());
    }

    const auto run_range = [&](std::size_t begin, std::size_t end) {
        std::vector<double> scratch;
        for (std::size_t q = begin; q < end; ++q) {
            for (Side side : {Side::Subject, Side::Object}) {
                const RankPair pair = rank_both_settings(scorer, data, split[q], side, opts, scratch);
                report.ranks[RankingReport::index(side)][RankingReport::index(Setting::Raw)][q] = pair.raw;
                report.ranks[RankingReport::index(side)][RankingReport::index(Setting::Filtered)][q] =
                    pair.filtered;
            }
        }
    };

    const int workers = std::max(1, opts.workers);
    if (workers == 1 || split.size() < 2) {
        run_range(0, split.size());
    } else {
        std::vector<std::thread> threads;
        const std::size_t chunk = (split.size() + workers - 1) / workers;
        for (int w = 0; w < workers; ++w) {
            const std::size_t begin = w * chunk;
            const std::size_t end = std::min(split.size(), begin + chunk);
            if (begin >= end) break;
            threads.emplace_back(run_range, begin, end);
        }
        for (auto& t : threads) t.join();
    }
    return report;
}

MetricBlock RankingReport::metrics(Side side, Setting setting) const {
    const std::vector<double>& r = ranks[index(side)][index(setting)];
    MetricBlock m;
    if (r.empty()) return m;
    for (double rank : r) {
        m.mean_rank += rank;
        m.mrr += 1.0 / rank;
        if (rank <= 1.0) m.hits1 += 1.0;
        if (rank <= 10.0) m.hits10 += 1.0;
    }
    const double n = static_cast<double>(r.size());
    m.mean_rank /= n;
    m.mrr /= n;
    m.hits1 /= n;
    m.hits10 /= n;
    return m;
}

MetricBlock RankingReport::averaged(Setting setting) const {
    const MetricBlock s = metrics(Side::Subject, setting);
    const MetricBlock o = metrics(Side::Object, setting);
    return {(s.mean_rank + o.mean_rank) / 2.0, (s.mrr + o.mrr) / 2.0, (s.hits1 + o.hits1) / 2.0,
            (s.hits10 + o.hits10) / 2.0};
}

namespace {

void append_metric_row(std::ostringstream& os, const char* label, const MetricBlock& m) {
    char buf[160];
    std::snprintf(buf, sizeof(buf), "%-18s %8.1f %6.1f %8.1f %7.1f\n", label, m.mean_rank, m.mrr * 100.0,
                  m.hits10 * 100.0, m.hits1 * 100.0);
    os << buf;
}

}  // namespace

std::string RankingReport::table() const {
    std::ostringstream os;
    os << "direction/setting        MR    MRR  Hits@10  Hits@1\n";
    append_metric_row(os, "subject raw", metrics(Side::Subject, Setting::Raw));
    append_metric_row(os, "subject filtered", metrics(Side::Subject, Setting::Filtered));
    append_metric_row(os, "object raw", metrics(Side::Object, Setting::Raw));
    append_metric_row(os, "object filtered", metrics(Side::Object, Setting::Filtered));
    append_metric_row(os, "average raw", averaged(Setting::Raw));
    append_metric_row(os, "average filtered", averaged(Setting::Filtered));
    return os.str();
}

std::string RankingReport::tsv() const {
    std::ostringstream os;
    const auto emit = [&os](const char* direction, const char* setting, const MetricBlock& m) {
        char buf[128];
        std::snprintf(buf, sizeof(buf), "mr\t%s\t%s\t%.6f\n", direction, setting, m.mean_rank);
        os << buf;
        std::snprintf(buf, sizeof(buf), "mrr\t%s\t%s\t%.6f\n", direction, setting, m.mrr * 100.0);
        os << buf;
        std::snprintf(buf, sizeof(buf), "hits@1\t%s\t%s\t%.6f\n", direction, setting, m.hits1 * 100.0);
        os << buf;
        std::snprintf(buf, sizeof(buf), "hits@10\t%s\t%s\t%.6f\n", direction, setting, m.hits10 * 100.0);
        os << buf;
    };
    emit("subject", "raw", metrics(Side::Subject, Setting::Raw));
    emit("subject", "filtered", metrics(Side::Subject, Setting::Filtered));
    emit("object", "raw", metrics(Side::Object, Setting::Raw));
    emit("object", "filtered", metrics(Side::Object, Setting::Filtered));
    emit("average", "raw", averaged(Setting::Raw));
    emit("average", "filtered", averaged(Setting::Filtered));
    return os.str();
}

double filtered_mrr(const ModelParameters& params, const DatasetBundle& data,
                    const std::vector<TemporalFact>& split, const EvalOptions& opts) {
    return evaluate_split(params, data, split, opts).averaged(Setting::Filtered).mrr;
}

}  // namespace tkge
