#include "tkge/vocab.hpp"

#include "tkge/errors.hpp"

namespace tkge {

int Vocabulary::intern(const std::string& name) {
    auto [it, inserted] = ids_.try_emplace(name, static_cast<int>(names_.size()));
    if (inserted) names_.push_back(name);
    return it->second;
}

std::optional<int> Vocabulary::find(const std::string& name) const {
    const auto it = ids_.find(name);
    if (it == ids_.end()) return std::nullopt;
    return it->second;
}

int TokenVocabulary::modifier_token_id(TemporalModifier m) const {
    switch (m) {
        case TemporalModifier::OccursSince:
            return num_relations();
        case TemporalModifier::OccursUntil:
            return num_relations() + 1;
        case TemporalModifier::None:
            break;
    }
    throw DataError("no modifier token for TemporalModifier::None");
}

int TokenVocabulary::temporal_token_id(const std::string& name) const {
    const int idx = temporal_token_index(name);
    if (idx < 0) throw DataError("unknown temporal token '" + name + "'");
    return num_relations() + kNumModifierTokens + idx;
}

std::string TokenVocabulary::token_name(int token_id) const {
    if (is_relation_token(token_id)) return relations.name(token_id);
    if (is_modifier_token(token_id)) {
        return token_id == num_relations() ? "since" : "until";
    }
    if (is_temporal_token(token_id)) {
        return temporal_alphabet()[token_id - num_relations() - kNumModifierTokens];
    }
    throw DataError("token id " + std::to_string(token_id) + " out of range");
}

PredicateSequence build_predicate_sequence(int relation_id, TemporalModifier modifier,
                                           const std::optional<Timestamp>& ts, const TokenVocabulary& vocab) {
    if (relation_id < 0 || relation_id >= vocab.num_relations()) {
        throw DataError("relation id " + std::to_string(relation_id) + " not in vocabulary");
    }
    PredicateSequence seq;
    seq.token_ids.push_back(vocab.relation_token_id(relation_id));
    if (modifier != TemporalModifier::None) {
        seq.token_ids.push_back(vocab.modifier_token_id(modifier));
    }
    if (ts) {
        for (const std::string& name : tokenize_timestamp(*ts)) {
            seq.token_ids.push_back(vocab.temporal_token_id(name));
        }
    }
    return seq;
}

DecodedSequence decode_predicate_sequence(const PredicateSequence& seq, const TokenVocabulary& vocab) {
    if (seq.token_ids.empty()) throw DataError("empty predicate sequence");
    if (!vocab.is_relation_token(seq.token_ids[0])) {
        throw DataError("predicate sequence does not start with a relation token");
    }
    DecodedSequence out;
    out.relation = vocab.relations.name(seq.token_ids[0]);
    std::size_t i = 1;
    if (i < seq.token_ids.size() && vocab.is_modifier_token(seq.token_ids[i])) {
        out.modifier = seq.token_ids[i] == vocab.num_relations() ? TemporalModifier::OccursSince
                                                                 : TemporalModifier::OccursUntil;
        ++i;
    }
    if (i < seq.token_ids.size()) {
        std::vector<std::string> names;
        for (; i < seq.token_ids.size(); ++i) {
            if (!vocab.is_temporal_token(seq.token_ids[i])) {
                throw DataError("unexpected non-temporal token inside timestamp portion");
            }
            names.push_back(vocab.token_name(seq.token_ids[i]));
        }
        // Year digits (4) then optional month token then optional day digits (2).
        Timestamp ts;
        std::size_t j = 0;
        if (names.size() < 4) throw DataError("timestamp portion shorter than four year digits");
        int year = 0;
        for (; j < 4; ++j) {
            if (names[j].size() != 2 || names[j][1] != 'y') throw DataError("expected year digit token");
            year = year * 10 + (names[j][0] - '0');
        }
        ts.year = year;
        if (j < names.size() && names[j].back() == 'm') {
            ts.month = (names[j][0] - '0') * 10 + (names[j][1] - '0');
            ++j;
        }
        if (j < names.size()) {
            if (names.size() - j != 2 || names[j].back() != 'd' || names[j + 1].back() != 'd') {
                throw DataError("malformed day digit tokens");
            }
            ts.day = (names[j][0] - '0') * 10 + (names[j + 1][0] - '0');
            j += 2;
        }
        ts.validate();
        out.timestamp = ts;
    }
    return out;
}

}  // namespace tkge
