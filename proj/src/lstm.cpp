#include "tkge/lstm.hpp"

#include <cmath>
#include <stdexcept>

namespace tkge {

void LstmWeights::init(int dim, bool biases, Rng& rng) {
    d = dim;
    use_biases = biases;
    // 1/sqrt(d) keeps the identity-activation cell state near unit scale;
    // larger bounds blow up h_N over date-length sequences.
    const double bound = 1.0 / std::sqrt(static_cast<double>(dim));
    for (auto [p, name] : {std::pair{&u_i, "lstm.u_i"}, {&u_f, "lstm.u_f"}, {&u_o, "lstm.u_o"},
                           {&u_g, "lstm.u_g"}, {&w_i, "lstm.w_i"}, {&w_f, "lstm.w_f"},
                           {&w_o, "lstm.w_o"}, {&w_g, "lstm.w_g"}}) {
        *p = Parameter(name, dim, dim);
        p->init_uniform(rng, -bound, bound);
    }
    if (use_biases) {
        b_i = Parameter("lstm.b_i", 1, dim);
        b_f = Parameter("lstm.b_f", 1, dim);
        b_o = Parameter("lstm.b_o", 1, dim);
        b_g = Parameter("lstm.b_g", 1, dim);
    }
}

std::vector<Parameter*> LstmWeights::parameters() {
    std::vector<Parameter*> out = {&u_i, &u_f, &u_o, &u_g, &w_i, &w_f, &w_o, &w_g};
    if (use_biases) {
        out.push_back(&b_i);
        out.push_back(&b_f);
        out.push_back(&b_o);
        out.push_back(&b_g);
    }
    return out;
}

namespace {

ValueRef gate_preactivation(const ValueRef& h_prev, const ValueRef& x, Parameter& u, Parameter& w,
                            Parameter& b, bool use_bias) {
    ValueRef pre = h_prev ? add(matmul(h_prev, u), matmul(x, w)) : matmul(x, w);
    if (use_bias) pre = add(pre, leaf(b));
    return pre;
}

}  // namespace

ValueRef encode_sequence(const std::vector<int>& token_ids, Parameter& token_table, LstmWeights& weights,
                         bool training, double dropout_p, Rng& rng) {
    if (token_ids.empty()) throw std::invalid_argument("encode_sequence: empty sequence");
    ValueRef h;  // null until the first step; h_0 = c_0 = 0
    ValueRef c;
    for (int id : token_ids) {
        ValueRef x = dropout(lookup(token_table, {id}), dropout_p, training, rng);
        ValueRef i = sigmoid(gate_preactivation(h, x, weights.u_i, weights.w_i, weights.b_i, weights.use_biases));
        ValueRef f = sigmoid(gate_preactivation(h, x, weights.u_f, weights.w_f, weights.b_f, weights.use_biases));
        ValueRef o = sigmoid(gate_preactivation(h, x, weights.u_o, weights.w_o, weights.b_o, weights.use_biases));
        ValueRef g = gate_preactivation(h, x, weights.u_g, weights.w_g, weights.b_g, weights.use_biases);
        c = c ? add(mul(f, c), mul(i, g)) : mul(i, g);
        h = mul(o, c);
    }
    return h;
}

std::vector<ValueRef> encode_batch(const std::vector<std::vector<int>>& seqs, Parameter& token_table,
                                   LstmWeights& weights, bool training, double dropout_p, Rng& rng) {
    std::vector<ValueRef> out;
    out.reserve(seqs.size());
    for (const auto& seq : seqs) {
        out.push_back(encode_sequence(seq, token_table, weights, training, dropout_p, rng));
    }
    return out;
}

std::vector<double> encode_sequence_flat(const std::vector<int>& token_ids, const Tensor& token_table,
                                         const LstmWeights& weights) {
    if (token_ids.empty()) throw std::invalid_argument("encode_sequence_flat: empty sequence");
    const int d = weights.d;
    std::vector<double> h(d, 0.0), c(d, 0.0);
    std::vector<double> pre_i(d), pre_f(d), pre_o(d), pre_g(d);
    auto rowvec_matmul = [d](const double* x, const Tensor& m, std::vector<double>& out) {
        std::fill(out.begin(), out.end(), 0.0);
        for (int k = 0; k < d; ++k) {
            const double xv = x[k];
            if (xv == 0.0) continue;
            const double* mrow = m.row(k);
            for (int j = 0; j < d; ++j) out[j] += xv * mrow[j];
        }
    };
    std::vector<double> tmp(d);
    bool first = true;
    for (int id : token_ids) {
        const double* x = token_table.row(id);
        for (auto [pre, u, w, b] :
             {std::tuple{&pre_i, &weights.u_i, &weights.w_i, &weights.b_i},
              {&pre_f, &weights.u_f, &weights.w_f, &weights.b_f},
              {&pre_o, &weights.u_o, &weights.w_o, &weights.b_o},
              {&pre_g, &weights.u_g, &weights.w_g, &weights.b_g}}) {
            if (first) {
                rowvec_matmul(x, w->value, *pre);
            } else {
                rowvec_matmul(h.data(), u->value, *pre);
                rowvec_matmul(x, w->value, tmp);
                for (int j = 0; j < d; ++j) (*pre)[j] += tmp[j];
            }
            if (weights.use_biases) {
                for (int j = 0; j < d; ++j) (*pre)[j] += b->value.v[j];
            }
        }
        for (int j = 0; j < d; ++j) {
            const double i_g = pre_i[j] >= 0.0 ? 1.0 / (1.0 + std::exp(-pre_i[j]))
                                               : std::exp(pre_i[j]) / (1.0 + std::exp(pre_i[j]));
            const double f_g = pre_f[j] >= 0.0 ? 1.0 / (1.0 + std::exp(-pre_f[j]))
                                               : std::exp(pre_f[j]) / (1.0 + std::exp(pre_f[j]));
            const double o_g = pre_o[j] >= 0.0 ? 1.0 / (1.0 + std::exp(-pre_o[j]))
                                               : std::exp(pre_o[j]) / (1.0 + std::exp(pre_o[j]));
            c[j] = first ? i_g * pre_g[j] : f_g * c[j] + i_g * pre_g[j];
            h[j] = o_g * c[j];
        }
        first = false;
    }
    return h;
}

}  // namespace tkge
