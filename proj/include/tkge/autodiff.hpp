#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "tkge/rng.hpp"
#include "tkge/tensor.hpp"

namespace tkge {

// Reverse-mode autodiff over dense tensors, define-by-run. A graph is built
// per batch and dropped after backward(); it is confined to one thread.
//
// Parameters referenced by a graph (via lookup/matmul/leaf) must outlive it;
// their gradients accumulate across backward() calls until adam_step() or
// zero_grads() clears them.

struct Value;
using ValueRef = std::shared_ptr<Value>;

struct Value {
    Tensor data;
    Tensor grad;  // same shape as data, starts at zero
    std::vector<ValueRef> parents;
    std::function<void(Value&)> backprop;  // scatter this->grad into parents

    explicit Value(Tensor d) : data(std::move(d)), grad(data.rows, data.cols) {}
};

// Trainable array plus its Adam accumulators.
struct Parameter {
    std::string name;
    Tensor value;
    Tensor grad;
    Tensor adam_m;
    Tensor adam_v;
    std::int64_t adam_step = 0;

    Parameter() = default;
    Parameter(std::string n, int rows, int cols)
        : name(std::move(n)), value(rows, cols), grad(rows, cols), adam_m(rows, cols), adam_v(rows, cols) {}

    int rows() const { return value.rows; }
    int cols() const { return value.cols; }

    void init_uniform(Rng& rng, double lo, double hi) {
        for (double& x : value.v) x = rng.uniform(lo, hi);
    }
};

struct AdamConfig {
    double lr = 0.001;
    double beta1 = 0.9;
    double beta2 = 0.999;
    double eps = 1e-8;
};

// Leaves.
ValueRef constant(Tensor t);
ValueRef leaf(Parameter& p);  // gradient flows into p.grad

// Stacks table rows ids[0..n) into an n x d Value; backward scatters row
// gradients back, accumulating on repeated ids.
ValueRef lookup(Parameter& table, const std::vector<int>& ids);

ValueRef matmul(const ValueRef& x, Parameter& w);  // (n x d) * (d x m)
ValueRef add(const ValueRef& a, const ValueRef& b);
ValueRef sub(const ValueRef& a, const ValueRef& b);
ValueRef mul(const ValueRef& a, const ValueRef& b);  // elementwise
ValueRef sigmoid(const ValueRef& x);
ValueRef scale(const ValueRef& x, double c);
ValueRef sum(const ValueRef& x);      // 1x1
ValueRef l2_norm(const ValueRef& x);  // 1x1, Euclidean norm of all entries

inline ValueRef identity(const ValueRef& x) { return x; }

// Row-wise helpers used to score a whole candidate list at once.
ValueRef row_l2_norms(const ValueRef& m);                      // n x d -> n x 1
ValueRef rows_sub_vec(const ValueRef& m, const ValueRef& v);   // rows minus a 1 x d vector
ValueRef matvec(const ValueRef& m, const ValueRef& v);         // row dot products, n x 1

// Inverted dropout: keeps entries with probability 1-p and scales them by
// 1/(1-p). Identity when training is false or p == 0.
ValueRef dropout(const ValueRef& x, double p, bool training, Rng& rng);

// -log softmax(scores)[target], max-subtracted. scores must be a vector
// (one dimension of extent 1) of length K >= 2.
ValueRef softmax_cross_entropy(const ValueRef& scores, int target);

// Reverse pass from a scalar loss; each reachable node's backprop runs once
// in reverse topological order.
void backward(const ValueRef& loss);

void zero_grads(const std::vector<Parameter*>& params);

// Bias-corrected Adam update; zeroes gradients and bumps step counters.
void adam_step(const std::vector<Parameter*>& params, const AdamConfig& cfg);

}  // namespace tkge
