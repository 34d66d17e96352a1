#pragma once

#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "tkge/fact.hpp"
#include "tkge/timestamp.hpp"

namespace tkge {

// Dense name <-> id mapping in first-appearance order.
class Vocabulary {
public:
    int intern(const std::string& name);
    std::optional<int> find(const std::string& name) const;
    const std::string& name(int id) const { return names_.at(id); }
    int size() const { return static_cast<int>(names_.size()); }

private:
    std::unordered_map<std::string, int> ids_;
    std::vector<std::string> names_;
};

// Token id space of the sequence encoder. Three disjoint dense groups:
//   [0, R)            relation tokens (one per relation name)
//   [R, R+2)          modifier tokens: since, until
//   [R+2, R+2+32)     the temporal alphabet
struct TokenVocabulary {
    static constexpr int kNumModifierTokens = 2;

    explicit TokenVocabulary(Vocabulary relations) : relations(std::move(relations)) {}

    Vocabulary relations;

    int num_relations() const { return relations.size(); }
    int size() const { return num_relations() + kNumModifierTokens + kTemporalAlphabetSize; }

    int relation_token_id(int relation_id) const { return relation_id; }
    int modifier_token_id(TemporalModifier m) const;
    int temporal_token_id(const std::string& name) const;

    // Inverse mapping; valid for any id in [0, size()).
    std::string token_name(int token_id) const;

    bool is_relation_token(int token_id) const { return token_id >= 0 && token_id < num_relations(); }
    bool is_modifier_token(int token_id) const {
        return token_id >= num_relations() && token_id < num_relations() + kNumModifierTokens;
    }
    bool is_temporal_token(int token_id) const {
        return token_id >= num_relations() + kNumModifierTokens && token_id < size();
    }
};

// Ordered token ids fed to the encoder: relation token, optional modifier
// token, then temporal tokens in year -> month -> day order. Length 1..9.
struct PredicateSequence {
    std::vector<int> token_ids;

    int length() const { return static_cast<int>(token_ids.size()); }
    bool operator==(const PredicateSequence&) const = default;
};

// Throws DataError when the relation is not in the vocabulary or the
// timestamp cannot be tokenized.
PredicateSequence build_predicate_sequence(int relation_id, TemporalModifier modifier,
                                           const std::optional<Timestamp>& ts, const TokenVocabulary& vocab);

struct DecodedSequence {
    std::string relation;
    TemporalModifier modifier = TemporalModifier::None;
    std::optional<Timestamp> timestamp;
};

// Inverse of build_predicate_sequence; throws DataError on malformed input.
DecodedSequence decode_predicate_sequence(const PredicateSequence& seq, const TokenVocabulary& vocab);

}  // namespace tkge
