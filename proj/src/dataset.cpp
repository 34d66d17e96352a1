#include "tkge/dataset.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include "tkge/errors.hpp"

namespace tkge {

std::size_t SequenceInterner::VecHash::operator()(const std::vector<int>& v) const {
    std::uint64_t h = 1469598103934665603ull;
    for (int x : v) {
        h = (h ^ static_cast<std::uint64_t>(static_cast<std::uint32_t>(x))) * 1099511628211ull;
    }
    return static_cast<std::size_t>(h);
}

int SequenceInterner::intern(const PredicateSequence& seq) {
    auto [it, inserted] = ids_.try_emplace(seq.token_ids, static_cast<int>(sequences_.size()));
    if (inserted) sequences_.push_back(seq);
    return it->second;
}

std::string timestamp_key(TemporalModifier modifier, const std::optional<Timestamp>& ts) {
    if (!ts) return "";
    std::string key;
    if (modifier != TemporalModifier::None) key = modifier_token_name(modifier);
    key += "@";
    key += ts->canonical();
    return key;
}

namespace {

struct PendingSplit {
    const std::vector<ParsedFact>* parsed;
    std::vector<TemporalFact>* out;
    SplitStats* stats;
};

}  // namespace

DatasetBundle build_dataset(const std::vector<ParsedFact>& train, const std::vector<ParsedFact>& valid,
                            const std::vector<ParsedFact>& test, Dialect dialect) {
    if (train.empty()) throw DataError("training split is empty");

    DatasetBundle bundle;
    bundle.dialect = dialect;

    // Shared id space over all splits, first-appearance order train -> valid -> test.
    Vocabulary relations;
    for (const auto* split : {&train, &valid, &test}) {
        for (const ParsedFact& f : *split) {
            bundle.entities.intern(f.subject);
            bundle.entities.intern(f.object);
            relations.intern(f.relation);
        }
    }
    bundle.tokens = TokenVocabulary(std::move(relations));

    std::unordered_set<std::string> distinct_ts;
    PendingSplit splits[3] = {{&train, &bundle.train, &bundle.train_stats},
                              {&valid, &bundle.valid, &bundle.valid_stats},
                              {&test, &bundle.test, &bundle.test_stats}};
    for (auto& [parsed, out, stats] : splits) {
        const bool is_train = parsed == &train;
        out->reserve(parsed->size());
        for (const ParsedFact& f : *parsed) {
            TemporalFact fact;
            fact.subject = *bundle.entities.find(f.subject);
            fact.object = *bundle.entities.find(f.object);
            fact.relation = *bundle.tokens.relations.find(f.relation);
            fact.modifier = f.modifier;
            fact.timestamp = f.timestamp;
            if (fact.timestamp) {
                fact.timestamp->validate();
                if (*fact.timestamp->year < 0 || *fact.timestamp->year > 9999) {
                    throw DataError("timestamp year " + std::to_string(*fact.timestamp->year) +
                                    " outside the supported range 0..9999");
                }
            }
            const PredicateSequence seq =
                build_predicate_sequence(fact.relation, fact.modifier, fact.timestamp, bundle.tokens);
            fact.seq_id = bundle.sequences.intern(seq);

            if (fact.timestamp) {
                distinct_ts.insert(fact.timestamp->canonical());
                const std::string key = timestamp_key(fact.modifier, fact.timestamp);
                if (is_train) {
                    auto [it, inserted] =
                        bundle.timestamp_key_ids.try_emplace(key, static_cast<int>(bundle.timestamp_keys.size()));
                    if (inserted) bundle.timestamp_keys.push_back(key);
                    fact.ts_key = it->second;
                } else {
                    const auto it = bundle.timestamp_key_ids.find(key);
                    fact.ts_key = it == bundle.timestamp_key_ids.end() ? -1 : it->second;
                }
                stats->with_time += 1;
            }
            stats->facts += 1;

            bundle.filter_index.insert({fact.subject, fact.seq_id, fact.object});
            bundle.relation_filter_index.insert({fact.subject, fact.relation, fact.object});
            out->push_back(std::move(fact));
        }
    }
    bundle.distinct_timestamps = static_cast<int>(distinct_ts.size());
    return bundle;
}

std::vector<ParsedFact> parse_fact_file(const std::string& path, Dialect dialect) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open fact file: " + path);
    std::vector<ParsedFact> facts;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty() || line == "\r") continue;
        facts.push_back(parse_fact_line(line, dialect, path, line_no));
    }
    return facts;
}

DatasetBundle load_dataset(const std::string& train_path, const std::string& valid_path,
                           const std::string& test_path, Dialect dialect) {
    const std::vector<ParsedFact> train = parse_fact_file(train_path, dialect);
    if (train.empty()) throw DataError("training split is empty: " + train_path);
    return build_dataset(train, parse_fact_file(valid_path, dialect), parse_fact_file(test_path, dialect),
                         dialect);
}

std::string DatasetBundle::stats_report() const {
    std::ostringstream os;
    os << "entities              " << num_entities() << "\n";
    os << "relations             " << num_relations() << "\n";
    os << "distinct timestamps   " << distinct_timestamps << "\n";
    os << "distinct sequences    " << sequences.size() << "\n";
    char buf[96];
    std::snprintf(buf, sizeof(buf), "%-7s %9s %10s\n", "split", "facts", "with-time");
    os << buf;
    int total = 0;
    int total_time = 0;
    for (const SplitStats* s : {&train_stats, &valid_stats, &test_stats}) {
        std::snprintf(buf, sizeof(buf), "%-7s %9d %10d\n", s->name.c_str(), s->facts, s->with_time);
        os << buf;
        total += s->facts;
        total_time += s->with_time;
    }
    std::snprintf(buf, sizeof(buf), "%-7s %9d %10d\n", "total", total, total_time);
    os << buf;
    return os.str();
}

}  // namespace tkge
