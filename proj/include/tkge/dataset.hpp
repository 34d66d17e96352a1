#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "tkge/fact.hpp"
#include "tkge/vocab.hpp"

namespace tkge {

// One fact with interned ids. seq_id names its predicate sequence in the
// bundle's interner; ts_key is the TTransE timestamp-embedding row (-1 when
// the fact has no timestamp or the key never appears in training).
struct TemporalFact {
    int subject = -1;
    int relation = -1;
    int object = -1;
    TemporalModifier modifier = TemporalModifier::None;
    std::optional<Timestamp> timestamp;
    int seq_id = -1;
    int ts_key = -1;
};

// Dense ids for distinct predicate sequences.
class SequenceInterner {
public:
    int intern(const PredicateSequence& seq);
    const PredicateSequence& sequence(int id) const { return sequences_.at(id); }
    int size() const { return static_cast<int>(sequences_.size()); }

private:
    struct VecHash {
        std::size_t operator()(const std::vector<int>& v) const;
    };
    std::unordered_map<std::vector<int>, int, VecHash> ids_;
    std::vector<PredicateSequence> sequences_;
};

// (subject, predicate-key, object); predicate-key is a sequence id for the
// full filter index and a relation id for the time-agnostic variant.
struct TripleKey {
    int s = -1;
    int p = -1;
    int o = -1;
    bool operator==(const TripleKey&) const = default;
};

struct TripleKeyHash {
    std::size_t operator()(const TripleKey& k) const {
        std::uint64_t h = 1469598103934665603ull;
        for (std::uint64_t x : {static_cast<std::uint64_t>(k.s), static_cast<std::uint64_t>(k.p),
                                static_cast<std::uint64_t>(k.o)}) {
            h = (h ^ x) * 1099511628211ull;
        }
        return static_cast<std::size_t>(h);
    }
};

struct SplitStats {
    std::string name;
    int facts = 0;
    int with_time = 0;
};

// Immutable after construction; safe for unrestricted concurrent reads.
struct DatasetBundle {
    Dialect dialect = Dialect::Plain;
    std::vector<TemporalFact> train;
    std::vector<TemporalFact> valid;
    std::vector<TemporalFact> test;

    Vocabulary entities;
    TokenVocabulary tokens{Vocabulary{}};
    SequenceInterner sequences;

    // Every fact of every split exactly once (duplicates collapse).
    std::unordered_set<TripleKey, TripleKeyHash> filter_index;
    // Same facts keyed by bare relation id, for time-agnostic filtering.
    std::unordered_set<TripleKey, TripleKeyHash> relation_filter_index;

    // TTransE timestamp-embedding keys, training split only, first-appearance
    // order. Keys fold the modifier in ("since@2009-##-##") so interval
    // endpoints get distinct embeddings.
    std::vector<std::string> timestamp_keys;
    std::unordered_map<std::string, int> timestamp_key_ids;

    int distinct_timestamps = 0;  // across all splits, granularity-sensitive
    SplitStats train_stats{"train"}, valid_stats{"valid"}, test_stats{"test"};

    int num_entities() const { return entities.size(); }
    int num_relations() const { return tokens.num_relations(); }

    bool known_fact(int s, int seq_id, int o) const { return filter_index.count({s, seq_id, o}) > 0; }
    bool known_relation_fact(int s, int relation, int o) const {
        return relation_filter_index.count({s, relation, o}) > 0;
    }

    std::string stats_report() const;
};

// Timestamp-embedding key for a fact ("" when it has no timestamp).
std::string timestamp_key(TemporalModifier modifier, const std::optional<Timestamp>& ts);

// Builds vocabularies (shared across splits), predicate sequences, the
// filter indexes and the statistics. Throws DataError on an empty training
// split or a timestamp year outside 0..9999.
DatasetBundle build_dataset(const std::vector<ParsedFact>& train, const std::vector<ParsedFact>& valid,
                            const std::vector<ParsedFact>& test, Dialect dialect = Dialect::Plain);

// Parses the three files then builds the bundle. Parse errors abort with
// file and line diagnostics.
DatasetBundle load_dataset(const std::string& train_path, const std::string& valid_path,
                           const std::string& test_path, Dialect dialect);

std::vector<ParsedFact> parse_fact_file(const std::string& path, Dialect dialect);

}  // namespace tkge
