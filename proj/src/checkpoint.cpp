#include "tkge/checkpoint.hpp"

#include <cstdint>
#include <cstring>
#include <fstream>
#include <map>

#include "tkge/errors.hpp"

namespace tkge {

namespace {

constexpr char kMagic[8] = {'T', 'K', 'G', 'E', 'C', 'K', 'P', 'T'};
constexpr std::uint32_t kVersion = 1;

void write_bytes(std::ofstream& out, const void* data, std::size_t n) {
    out.write(static_cast<const char*>(data), static_cast<std::streamsize>(n));
}

template <typename T>
void write_pod(std::ofstream& out, T value) {
    write_bytes(out, &value, sizeof(T));
}

void read_bytes(std::ifstream& in, void* data, std::size_t n, const std::string& path) {
    in.read(static_cast<char*>(data), static_cast<std::streamsize>(n));
    if (!in) throw DataError("truncated checkpoint file: " + path);
}

template <typename T>
T read_pod(std::ifstream& in, const std::string& path) {
    T value;
    read_bytes(in, &value, sizeof(T), path);
    return value;
}

void write_tensor_data(std::ofstream& out, const Tensor& t) {
    write_bytes(out, t.v.data(), t.v.size() * sizeof(double));
}

void write_parameter(std::ofstream& out, const Parameter& p) {
    const std::uint32_t name_len = static_cast<std::uint32_t>(p.name.size());
    write_pod(out, name_len);
    write_bytes(out, p.name.data(), p.name.size());
    write_pod(out, static_cast<std::int32_t>(p.value.rows));
    write_pod(out, static_cast<std::int32_t>(p.value.cols));
    write_tensor_data(out, p.value);
    write_tensor_data(out, p.adam_m);
    write_tensor_data(out, p.adam_v);
    write_pod(out, p.adam_step);
}

Parameter read_parameter(std::ifstream& in, const std::string& path) {
    const std::uint32_t name_len = read_pod<std::uint32_t>(in, path);
    if (name_len > 4096) throw DataError("corrupt checkpoint (parameter name too long): " + path);
    std::string name(name_len, '\0');
    read_bytes(in, name.data(), name_len, path);
    const std::int32_t rows = read_pod<std::int32_t>(in, path);
    const std::int32_t cols = read_pod<std::int32_t>(in, path);
    if (rows < 0 || cols < 0) throw DataError("corrupt checkpoint (negative shape): " + path);
    Parameter p(name, rows, cols);
    read_bytes(in, p.value.v.data(), p.value.v.size() * sizeof(double), path);
    read_bytes(in, p.adam_m.v.data(), p.adam_m.v.size() * sizeof(double), path);
    read_bytes(in, p.adam_v.v.data(), p.adam_v.v.size() * sizeof(double), path);
    p.adam_step = read_pod<std::int64_t>(in, path);
    return p;
}

}  // namespace

void save_checkpoint(const std::string& path, const ModelParameters& params) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw DataError("cannot write checkpoint: " + path);
    write_bytes(out, kMagic, sizeof(kMagic));
    write_pod(out, kVersion);
    write_pod(out, static_cast<std::uint8_t>(params.scorer));
    write_pod(out, static_cast<std::int32_t>(params.d));
    write_pod(out, static_cast<std::uint8_t>(params.lstm.use_biases ? 1 : 0));
    const auto list = params.trainable();
    write_pod(out, static_cast<std::uint32_t>(list.size()));
    for (const Parameter* p : list) write_parameter(out, *p);
    if (!out) throw DataError("failed writing checkpoint: " + path);
}

ModelParameters load_checkpoint(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError("cannot open checkpoint: " + path);
    char magic[8];
    read_bytes(in, magic, sizeof(magic), path);
    if (std::memcmp(magic, kMagic, sizeof(kMagic)) != 0) {
        throw DataError("not a checkpoint file (bad magic): " + path);
    }
    const std::uint32_t version = read_pod<std::uint32_t>(in, path);
    if (version != kVersion) {
        throw DataError("unsupported checkpoint version " + std::to_string(version) + ": " + path);
    }
    const std::uint8_t scorer_byte = read_pod<std::uint8_t>(in, path);
    if (scorer_byte > static_cast<std::uint8_t>(ScorerKind::TADistMult)) {
        throw DataError("corrupt checkpoint (unknown scorer): " + path);
    }
    ModelParameters params;
    params.scorer = static_cast<ScorerKind>(scorer_byte);
    params.d = read_pod<std::int32_t>(in, path);
    const bool lstm_biases = read_pod<std::uint8_t>(in, path) != 0;
    const std::uint32_t count = read_pod<std::uint32_t>(in, path);

    std::map<std::string, Parameter> blocks;
    for (std::uint32_t i = 0; i < count; ++i) {
        Parameter p = read_parameter(in, path);
        const std::string name = p.name;
        blocks.emplace(name, std::move(p));
    }

    const auto take = [&blocks, &path](const std::string& name) {
        auto it = blocks.find(name);
        if (it == blocks.end()) {
            throw DataError("checkpoint missing parameter '" + name + "': " + path);
        }
        Parameter p = std::move(it->second);
        blocks.erase(it);
        return p;
    };

    params.entity_table = take("entity_table");
    if (uses_static_relations(params.scorer)) params.relation_table = take("relation_table");
    if (uses_timestamp_table(params.scorer)) params.timestamp_table = take("timestamp_table");
    if (uses_encoder(params.scorer)) {
        params.token_table = take("token_table");
        params.lstm.d = params.d;
        params.lstm.use_biases = lstm_biases;
        params.lstm.u_i = take("lstm.u_i");
        params.lstm.u_f = take("lstm.u_f");
        params.lstm.u_o = take("lstm.u_o");
        params.lstm.u_g = take("lstm.u_g");
        params.lstm.w_i = take("lstm.w_i");
        params.lstm.w_f = take("lstm.w_f");
        params.lstm.w_o = take("lstm.w_o");
        params.lstm.w_g = take("lstm.w_g");
        if (lstm_biases) {
            params.lstm.b_i = take("lstm.b_i");
            params.lstm.b_f = take("lstm.b_f");
            params.lstm.b_o = take("lstm.b_o");
            params.lstm.b_g = take("lstm.b_g");
        }
    }
    if (!blocks.empty()) {
        throw DataError("checkpoint has unexpected parameter '" + blocks.begin()->first + "': " + path);
    }
    return params;
}

}  // namespace tkge
