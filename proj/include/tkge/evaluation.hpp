#pragma once

#include <array>
#include <string>
#include <vector>

#include "tkge/scoring.hpp"

namespace tkge {

enum class Setting { Raw, Filtered };

struct MetricBlock {
    double mean_rank = 0.0;
    double mrr = 0.0;     // fraction in (0, 1]
    double hits1 = 0.0;   // fraction
    double hits10 = 0.0;  // fraction
};

// Per-query ranks for both completion directions and both settings, plus
// the aggregates derived from them. Tied candidates receive the mean rank
// of their tie group, so ranks may be half-integral.
struct RankingReport {
    // ranks[side][setting], indexed by query position in the split.
    std::array<std::array<std::vector<double>, 2>, 2> ranks;

    static int index(Side s) { return s == Side::Subject ? 0 : 1; }
    static int index(Setting s) { return s == Setting::Raw ? 0 : 1; }

    MetricBlock metrics(Side side, Setting setting) const;
    MetricBlock averaged(Setting setting) const;

    // Human-readable table; MRR and Hits are scaled x100 with one decimal.
    std::string table() const;
    // Machine-readable lines: metric<TAB>direction<TAB>setting<TAB>value.
    std::string tsv() const;
};

struct EvalOptions {
    bool cache_sequences = true;
    bool time_agnostic_filter = false;  // filter on (s, relation, o) instead of the full sequence key
    int workers = 1;
};

// 1-based rank of the true entity among all candidate completions. In the
// filtered setting, candidates forming a known true fact (other than the
// query's own answer) are removed before ranking.
double rank_entity(const FlatScorer& scorer, const DatasetBundle& data, const TemporalFact& query, Side side,
                   Setting setting, const EvalOptions& opts = {});

RankingReport evaluate_split(const ModelParameters& params, const DatasetBundle& data,
                             const std::vector<TemporalFact>& split, const EvalOptions& opts = {});

// Averaged filtered MRR, the early-stopping criterion.
double filtered_mrr(const ModelParameters& params, const DatasetBundle& data,
                    const std::vector<TemporalFact>& split, const EvalOptions& opts = {});

}  // namespace tkge
