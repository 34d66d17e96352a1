#pragma once

#include <vector>

#include "tkge/autodiff.hpp"

namespace tkge {

// LSTM with row-vector states: gate = sigma(h_{n-1} U + x_n W [+ b]).
// Gate activation is the sigmoid; cell and hidden activations are the
// identity. Hidden size equals the embedding size d. Biases are off by
// default so the recurrence matches the four-gate equations verbatim.
struct LstmWeights {
    int d = 0;
    bool use_biases = false;

    Parameter u_i, u_f, u_o, u_g;  // d x d recurrent
    Parameter w_i, w_f, w_o, w_g;  // d x d input
    Parameter b_i, b_f, b_o, b_g;  // 1 x d, active only with use_biases

    void init(int dim, bool biases, Rng& rng);
    std::vector<Parameter*> parameters();
};

// Encodes a token-id sequence and returns the last hidden state h_N (1 x d),
// differentiable to the token table and all gate weights. Dropout applies to
// the token embeddings (training mode only), never inside the recurrence.
// Throws std::invalid_argument on an empty sequence.
ValueRef encode_sequence(const std::vector<int>& token_ids, Parameter& token_table, LstmWeights& weights,
                         bool training, double dropout_p, Rng& rng);

// Equivalent to mapping encode_sequence over seqs.
std::vector<ValueRef> encode_batch(const std::vector<std::vector<int>>& seqs, Parameter& token_table,
                                   LstmWeights& weights, bool training, double dropout_p, Rng& rng);

// Evaluation-mode forward pass without graph construction.
std::vector<double> encode_sequence_flat(const std::vector<int>& token_ids, const Tensor& token_table,
                                         const LstmWeights& weights);

}  // namespace tkge
