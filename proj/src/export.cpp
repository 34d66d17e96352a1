#include "tkge/export.hpp"

#include <cstdio>
#include <set>

#include "tkge/errors.hpp"
#include "tkge/lstm.hpp"

namespace tkge {

namespace {

std::string csv_quote(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    out += '"';
    return out;
}

void write_header(std::ostream& out, int d) {
    out << "id,label";
    for (int j = 0; j < d; ++j) out << ",v_" << j;
    out << "\n";
}

void write_row(std::ostream& out, int id, const std::string& label, const double* v, int d) {
    out << id << "," << csv_quote(label);
    char buf[40];
    for (int j = 0; j < d; ++j) {
        std::snprintf(buf, sizeof(buf), ",%.17g", v[j]);
        out << buf;
    }
    out << "\n";
}

}  // namespace

void export_entity_embeddings(std::ostream& out, const ModelParameters& params, const Vocabulary& entities) {
    if (entities.size() != params.entity_table.rows()) {
        throw DataError("entity vocabulary size does not match the checkpoint's entity table");
    }
    write_header(out, params.d);
    for (int id = 0; id < entities.size(); ++id) {
        write_row(out, id, entities.name(id), params.entity_table.value.row(id), params.d);
    }
}

void export_sequence_embeddings(std::ostream& out, const ModelParameters& params, const DatasetBundle& data,
                                const std::vector<TemporalFact>& split) {
    if (!uses_encoder(params.scorer)) {
        throw DataError("sequence export needs a TA scorer; '" + std::string(to_string(params.scorer)) +
                        "' has no sequence encoder");
    }
    write_header(out, params.d);
    std::set<int> seen;
    for (const TemporalFact& fact : split) seen.insert(fact.seq_id);
    for (int seq_id : seen) {
        const PredicateSequence& seq = data.sequences.sequence(seq_id);
        std::string label;
        for (std::size_t i = 0; i < seq.token_ids.size(); ++i) {
            if (i) label += ' ';
            label += data.tokens.token_name(seq.token_ids[i]);
        }
        const std::vector<double> vec =
            encode_sequence_flat(seq.token_ids, params.token_table.value, params.lstm);
        write_row(out, seq_id, label, vec.data(), params.d);
    }
}

}  // namespace tkge
