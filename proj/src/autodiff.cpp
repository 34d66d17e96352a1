#include "tkge/autodiff.hpp"

#include <cmath>
#include <stdexcept>
#include <unordered_set>

#include "tkge/errors.hpp"

namespace tkge {

namespace {

ValueRef make_value(Tensor data) { return std::make_shared<Value>(std::move(data)); }

void check_same_shape(const ValueRef& a, const ValueRef& b, const char* op) {
    if (!a->data.same_shape(b->data)) {
        throw ShapeError(std::string(op) + ": shape mismatch (" + std::to_string(a->data.rows) + "x" +
                         std::to_string(a->data.cols) + " vs " + std::to_string(b->data.rows) + "x" +
                         std::to_string(b->data.cols) + ")");
    }
}

double stable_sigmoid(double x) {
    if (x >= 0.0) {
        return 1.0 / (1.0 + std::exp(-x));
    }
    const double e = std::exp(x);
    return e / (1.0 + e);
}

}  // namespace

ValueRef constant(Tensor t) { return make_value(std::move(t)); }

ValueRef leaf(Parameter& p) {
    auto out = make_value(p.value);
    Parameter* pp = &p;
    out->backprop = [pp](Value& self) {
        for (int i = 0; i < self.grad.size(); ++i) pp->grad.v[i] += self.grad.v[i];
    };
    return out;
}

ValueRef lookup(Parameter& table, const std::vector<int>& ids) {
    const int d = table.cols();
    for (int id : ids) {
        if (id < 0 || id >= table.rows()) {
            throw std::out_of_range("lookup: id " + std::to_string(id) + " out of range [0, " +
                                    std::to_string(table.rows()) + ")");
        }
    }
    Tensor out(static_cast<int>(ids.size()), d);
    for (std::size_t i = 0; i < ids.size(); ++i) {
        const double* src = table.value.row(ids[i]);
        std::copy(src, src + d, out.row(static_cast<int>(i)));
    }
    auto node = make_value(std::move(out));
    Parameter* tp = &table;
    std::vector<int> ids_copy = ids;
    node->backprop = [tp, ids_copy, d](Value& self) {
        for (std::size_t i = 0; i < ids_copy.size(); ++i) {
            double* dst = tp->grad.row(ids_copy[i]);
            const double* g = self.grad.row(static_cast<int>(i));
            for (int j = 0; j < d; ++j) dst[j] += g[j];
        }
    };
    return node;
}

ValueRef matmul(const ValueRef& x, Parameter& w) {
    const int n = x->data.rows;
    const int d = x->data.cols;
    if (d != w.rows()) {
        throw ShapeError("matmul: inner extents differ (" + std::to_string(d) + " vs " + std::to_string(w.rows()) +
                         ")");
    }
    const int m = w.cols();
    Tensor out(n, m);
    for (int i = 0; i < n; ++i) {
        const double* xi = x->data.row(i);
        double* oi = out.row(i);
        for (int k = 0; k < d; ++k) {
            const double xv = xi[k];
            if (xv == 0.0) continue;
            const double* wk = w.value.row(k);
            for (int j = 0; j < m; ++j) oi[j] += xv * wk[j];
        }
    }
    auto node = make_value(std::move(out));
    node->parents = {x};
    Parameter* wp = &w;
    node->backprop = [wp, n, d, m](Value& self) {
        Value& xv = *self.parents[0];
        // dL/dx = g * W^T ; dL/dW = x^T * g
        for (int i = 0; i < n; ++i) {
            const double* g = self.grad.row(i);
            double* xg = xv.grad.row(i);
            const double* xrow = xv.data.row(i);
            for (int k = 0; k < d; ++k) {
                const double* wk = wp->value.row(k);
                double acc = 0.0;
                for (int j = 0; j < m; ++j) acc += g[j] * wk[j];
                xg[k] += acc;
                if (xrow[k] != 0.0) {
                    double* wg = wp->grad.row(k);
                    for (int j = 0; j < m; ++j) wg[j] += xrow[k] * g[j];
                }
            }
        }
    };
    return node;
}

ValueRef add(const ValueRef& a, const ValueRef& b) {
    check_same_shape(a, b, "add");
    Tensor out = a->data;
    for (int i = 0; i < out.size(); ++i) out.v[i] += b->data.v[i];
    auto node = make_value(std::move(out));
    node->parents = {a, b};
    node->backprop = [](Value& self) {
        for (int i = 0; i < self.grad.size(); ++i) {
            self.parents[0]->grad.v[i] += self.grad.v[i];
            self.parents[1]->grad.v[i] += self.grad.v[i];
        }
    };
    return node;
}

ValueRef sub(const ValueRef& a, const ValueRef& b) {
    check_same_shape(a, b, "sub");
    Tensor out = a->data;
    for (int i = 0; i < out.size(); ++i) out.v[i] -= b->data.v[i];
    auto node = make_value(std::move(out));
    node->parents = {a, b};
    node->backprop = [](Value& self) {
        for (int i = 0; i < self.grad.size(); ++i) {
            self.parents[0]->grad.v[i] += self.grad.v[i];
            self.parents[1]->grad.v[i] -= self.grad.v[i];
        }
    };
    return node;
}

ValueRef mul(const ValueRef& a, const ValueRef& b) {
    check_same_shape(a, b, "mul");
    Tensor out = a->data;
    for (int i = 0; i < out.size(); ++i) out.v[i] *= b->data.v[i];
    auto node = make_value(std::move(out));
    node->parents = {a, b};
    node->backprop = [](Value& self) {
        Value& av = *self.parents[0];
        Value& bv = *self.parents[1];
        for (int i = 0; i < self.grad.size(); ++i) {
            av.grad.v[i] += self.grad.v[i] * bv.data.v[i];
            bv.grad.v[i] += self.grad.v[i] * av.data.v[i];
        }
    };
    return node;
}

ValueRef sigmoid(const ValueRef& x) {
    Tensor out = x->data;
    for (double& v : out.v) v = stable_sigmoid(v);
    auto node = make_value(std::move(out));
    node->parents = {x};
    node->backprop = [](Value& self) {
        for (int i = 0; i < self.grad.size(); ++i) {
            const double s = self.data.v[i];
            self.parents[0]->grad.v[i] += self.grad.v[i] * s * (1.0 - s);
        }
    };
    return node;
}

ValueRef scale(const ValueRef& x, double c) {
    Tensor out = x->data;
    for (double& v : out.v) v *= c;
    auto node = make_value(std::move(out));
    node->parents = {x};
    node->backprop = [c](Value& self) {
        for (int i = 0; i < self.grad.size(); ++i) self.parents[0]->grad.v[i] += c * self.grad.v[i];
    };
    return node;
}

ValueRef sum(const ValueRef& x) {
    double acc = 0.0;
    for (double v : x->data.v) acc += v;
    auto node = make_value(Tensor::scalar(acc));
    node->parents = {x};
    node->backprop = [](Value& self) {
        const double g = self.grad.v[0];
        for (double& pg : self.parents[0]->grad.v) pg += g;
    };
    return node;
}

ValueRef l2_norm(const ValueRef& x) {
    double acc = 0.0;
    for (double v : x->data.v) acc += v * v;
    const double norm = std::sqrt(acc);
    auto node = make_value(Tensor::scalar(norm));
    node->parents = {x};
    node->backprop = [norm](Value& self) {
        if (norm == 0.0) return;  // subgradient 0 at the kink
        const double g = self.grad.v[0] / norm;
        Value& xv = *self.parents[0];
        for (int i = 0; i < xv.grad.size(); ++i) xv.grad.v[i] += g * xv.data.v[i];
    };
    return node;
}

ValueRef row_l2_norms(const ValueRef& m) {
    const int n = m->data.rows;
    const int d = m->data.cols;
    Tensor out(n, 1);
    for (int i = 0; i < n; ++i) {
        const double* r = m->data.row(i);
        double acc = 0.0;
        for (int j = 0; j < d; ++j) acc += r[j] * r[j];
        out.v[i] = std::sqrt(acc);
    }
    auto node = make_value(std::move(out));
    node->parents = {m};
    node->backprop = [n, d](Value& self) {
        Value& mv = *self.parents[0];
        for (int i = 0; i < n; ++i) {
            const double norm = self.data.v[i];
            if (norm == 0.0) continue;
            const double g = self.grad.v[i] / norm;
            const double* r = mv.data.row(i);
            double* rg = mv.grad.row(i);
            for (int j = 0; j < d; ++j) rg[j] += g * r[j];
        }
    };
    return node;
}

ValueRef rows_sub_vec(const ValueRef& m, const ValueRef& v) {
    const int n = m->data.rows;
    const int d = m->data.cols;
    if (v->data.rows != 1 || v->data.cols != d) {
        throw ShapeError("rows_sub_vec: vector must be 1x" + std::to_string(d));
    }
    Tensor out = m->data;
    for (int i = 0; i < n; ++i) {
        double* r = out.row(i);
        for (int j = 0; j < d; ++j) r[j] -= v->data.v[j];
    }
    auto node = make_value(std::move(out));
    node->parents = {m, v};
    node->backprop = [n, d](Value& self) {
        Value& mv = *self.parents[0];
        Value& vv = *self.parents[1];
        for (int i = 0; i < n; ++i) {
            const double* g = self.grad.row(i);
            double* mg = mv.grad.row(i);
            for (int j = 0; j < d; ++j) {
                mg[j] += g[j];
                vv.grad.v[j] -= g[j];
            }
        }
    };
    return node;
}

ValueRef matvec(const ValueRef& m, const ValueRef& v) {
    const int n = m->data.rows;
    const int d = m->data.cols;
    if (v->data.rows != 1 || v->data.cols != d) {
        throw ShapeError("matvec: vector must be 1x" + std::to_string(d));
    }
    Tensor out(n, 1);
    for (int i = 0; i < n; ++i) {
        const double* r = m->data.row(i);
        double acc = 0.0;
        for (int j = 0; j < d; ++j) acc += r[j] * v->data.v[j];
        out.v[i] = acc;
    }
    auto node = make_value(std::move(out));
    node->parents = {m, v};
    node->backprop = [n, d](Value& self) {
        Value& mv = *self.parents[0];
        Value& vv = *self.parents[1];
        for (int i = 0; i < n; ++i) {
            const double g = self.grad.v[i];
            if (g == 0.0) continue;
            double* mg = mv.grad.row(i);
            const double* r = mv.data.row(i);
            for (int j = 0; j < d; ++j) {
                mg[j] += g * vv.data.v[j];
                vv.grad.v[j] += g * r[j];
            }
        }
    };
    return node;
}

ValueRef dropout(const ValueRef& x, double p, bool training, Rng& rng) {
    if (p < 0.0 || p >= 1.0) {
        throw std::invalid_argument("dropout: p must be in [0, 1)");
    }
    if (!training || p == 0.0) return x;
    const double keep_scale = 1.0 / (1.0 - p);
    Tensor mask(x->data.rows, x->data.cols);
    for (double& m : mask.v) m = (rng.uniform() < p) ? 0.0 : keep_scale;
    Tensor out = x->data;
    for (int i = 0; i < out.size(); ++i) out.v[i] *= mask.v[i];
    auto node = make_value(std::move(out));
    node->parents = {x};
    node->backprop = [mask = std::move(mask)](Value& self) {
        for (int i = 0; i < self.grad.size(); ++i) self.parents[0]->grad.v[i] += self.grad.v[i] * mask.v[i];
    };
    return node;
}

ValueRef softmax_cross_entropy(const ValueRef& scores, int target) {
    const int k = scores->data.size();
    if (scores->data.rows != 1 && scores->data.cols != 1) {
        throw ShapeError("softmax_cross_entropy: scores must be a vector");
    }
    if (k < 2) throw std::invalid_argument("softmax_cross_entropy: need at least two scores");
    if (target < 0 || target >= k) throw std::out_of_range("softmax_cross_entropy: target out of range");
    for (double s : scores->data.v) {
        if (!std::isfinite(s)) throw NumericError("softmax_cross_entropy: non-finite score");
    }
    double mx = scores->data.v[0];
    for (double s : scores->data.v) mx = std::max(mx, s);
    double z = 0.0;
    for (double s : scores->data.v) z += std::exp(s - mx);
    const double log_z = std::log(z);
    const double loss = log_z - (scores->data.v[target] - mx);
    auto node = make_value(Tensor::scalar(loss));
    node->parents = {scores};
    node->backprop = [mx, z, target](Value& self) {
        const double g = self.grad.v[0];
        Value& sv = *self.parents[0];
        for (int i = 0; i < sv.grad.size(); ++i) {
            const double soft = std::exp(sv.data.v[i] - mx) / z;
            sv.grad.v[i] += g * (soft - (i == target ? 1.0 : 0.0));
        }
    };
    return node;
}

void backward(const ValueRef& loss) {
    if (loss->data.size() != 1) {
        throw std::invalid_argument("backward: loss must be scalar");
    }
    // Iterative post-order DFS for the reverse topological order.
    std::vector<Value*> order;
    std::unordered_set<Value*> visited;
    std::vector<std::pair<Value*, std::size_t>> stack;
    stack.emplace_back(loss.get(), 0);
    visited.insert(loss.get());
    while (!stack.empty()) {
        auto& [node, next_child] = stack.back();
        if (next_child < node->parents.size()) {
            Value* child = node->parents[next_child].get();
            ++next_child;
            if (visited.insert(child).second) stack.emplace_back(child, 0);
        } else {
            order.push_back(node);
            stack.pop_back();
        }
    }
    loss->grad.v[0] = 1.0;
    for (auto it = order.rbegin(); it != order.rend(); ++it) {
        if ((*it)->backprop) (*it)->backprop(**it);
    }
}

void zero_grads(const std::vector<Parameter*>& params) {
    for (Parameter* p : params) p->grad.fill(0.0);
}

void adam_step(const std::vector<Parameter*>& params, const AdamConfig& cfg) {
    for (Parameter* p : params) {
        p->adam_step += 1;
        const double bc1 = 1.0 - std::pow(cfg.beta1, static_cast<double>(p->adam_step));
        const double bc2 = 1.0 - std::pow(cfg.beta2, static_cast<double>(p->adam_step));
        for (int i = 0; i < p->value.size(); ++i) {
            const double g = p->grad.v[i];
            p->adam_m.v[i] = cfg.beta1 * p->adam_m.v[i] + (1.0 - cfg.beta1) * g;
            p->adam_v.v[i] = cfg.beta2 * p->adam_v.v[i] + (1.0 - cfg.beta2) * g * g;
            const double m_hat = p->adam_m.v[i] / bc1;
            const double v_hat = p->adam_v.v[i] / bc2;
            p->value.v[i] -= cfg.lr * m_hat / (std::sqrt(v_hat) + cfg.eps);
        }
        p->grad.fill(0.0);
    }
}

}  // namespace tkge
