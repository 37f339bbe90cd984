#pragma once

// HiGCN: per-petal learnable polynomial filters over the flower-petal adjacencies,
//
//   Y_p = f_p( sum_k gamma[p][k] A_p^k X ),   Z = [Y_1 | ... | Y_P],   logits = Z W,
//
// where f_p is a linear map (one layer) or linear-ReLU-linear (two layers). The
// gradients below are written out by hand for this fixed chain.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "higcn/dense.hpp"
#include "higcn/errors.hpp"
#include "higcn/fp_operator.hpp"
#include "higcn/random.hpp"

namespace higcn {

enum class OutputHead { kLogSoftmax, kIdentity };

struct ModelConfig {
  std::size_t max_order = 2;   // P
  std::size_t max_power = 10;  // K
  std::size_t input_dim = 1;   // d
  std::size_t hidden = 32;     // h
  std::size_t outputs = 2;     // C
  int layers = 2;              // depth of each petal transform: 1 or 2
  double alpha = 0.1;
  OutputHead head = OutputHead::kLogSoftmax;

  bool operator==(const ModelConfig&) const = default;
};

struct HigcnParams {
  ModelConfig config;
  DenseMatrix gamma;                       // P x (K+1)
  std::vector<DenseMatrix> theta_in;       // P blocks of d x h
  std::vector<DenseMatrix> theta_hidden;   // P blocks of h x h, empty for one layer
  DenseMatrix w;                           // (P h) x C

  // Visits every parameter block in a fixed order: gamma, theta_in, theta_hidden, w.
  // The flag tells whether the block is a filter weight (true) or a transform.
  template <typename F>
  void for_each_block(F&& f) {
    f(gamma, true);
    for (auto& t : theta_in) f(t, false);
    for (auto& t : theta_hidden) f(t, false);
    f(w, false);
  }
  template <typename F>
  void for_each_block(F&& f) const {
    f(gamma, true);
    for (const auto& t : theta_in) f(t, false);
    for (const auto& t : theta_hidden) f(t, false);
    f(w, false);
  }

  std::size_t parameter_count() const {
    std::size_t n = 0;
    for_each_block([&](const DenseMatrix& m, bool) { n += m.size(); });
    return n;
  }

  std::vector<double> flatten() const {
    std::vector<double> out;
    out.reserve(parameter_count());
    for_each_block([&](const DenseMatrix& m, bool) {
      out.insert(out.end(), m.values().begin(), m.values().end());
    });
    return out;
  }

  void assign_flat(std::span<const double> flat) {
    if (flat.size() != parameter_count()) throw UsageError("assign_flat: parameter count mismatch");
    std::size_t offset = 0;
    for_each_block([&](DenseMatrix& m, bool) {
      std::copy_n(flat.begin() + static_cast<std::ptrdiff_t>(offset), m.size(), m.values().begin());
      offset += m.size();
    });
  }

  bool operator==(const HigcnParams&) const = default;
};

inline void validate_config(const ModelConfig& c) {
  if (!(c.alpha > 0.0 && c.alpha <= 1.0)) {
    throw UsageError("alpha must lie in (0, 1], got " + std::to_string(c.alpha));
  }
  if (c.max_order < 1 || c.input_dim < 1 || c.hidden < 1 || c.outputs < 1) {
    throw UsageError("model dimensions must all be >= 1");
  }
  if (c.layers != 1 && c.layers != 2) throw UsageError("layers must be 1 or 2");
}

// Shapes only, all zero.
inline HigcnParams zero_params(const ModelConfig& c) {
  validate_config(c);
  HigcnParams p;
  p.config = c;
  p.gamma = DenseMatrix(c.max_order, c.max_power + 1);
  for (std::size_t i = 0; i < c.max_order; ++i) {
    p.theta_in.emplace_back(c.input_dim, c.hidden);
    if (c.layers == 2) p.theta_hidden.emplace_back(c.hidden, c.hidden);
  }
  p.w = DenseMatrix(c.max_order * c.hidden, c.outputs);
  return p;
}

// gamma[p][k] = alpha (1-alpha)^k for k < K and (1-alpha)^K for k = K; transforms are
// Glorot-uniform from the seed.
inline HigcnParams init_params(const ModelConfig& c, std::uint64_t seed) {
  HigcnParams p = zero_params(c);
  for (std::size_t r = 0; r < c.max_order; ++r) {
    double decay = 1.0;
    for (std::size_t k = 0; k < c.max_power; ++k) {
      p.gamma(r, k) = c.alpha * decay;
      decay *= 1.0 - c.alpha;
    }
    p.gamma(r, c.max_power) = decay;
  }
  Rng rng = make_rng(seed, 0x6869676e);
  auto glorot = [&](DenseMatrix& m) {
    const double s = std::sqrt(6.0 / static_cast<double>(m.rows() + m.cols()));
    for (double& v : m.values()) v = uniform(rng, -s, s);
  };
  for (auto& t : p.theta_in) glorot(t);
  for (auto& t : p.theta_hidden) glorot(t);
  glorot(p.w);
  return p;
}

// S_p = sum_k |gamma[p][k]|
inline std::vector<double> strength(const HigcnParams& params) {
  std::vector<double> s(params.gamma.rows(), 0.0);
  for (std::size_t p = 0; p < params.gamma.rows(); ++p)
    for (std::size_t k = 0; k < params.gamma.cols(); ++k) s[p] += std::abs(params.gamma(p, k));
  return s;
}

struct ForwardTape {
  std::vector<DenseMatrix> filtered;        // sum_k gamma A^k X, per petal (n x d)
  std::vector<DenseMatrix> pre_activation;  // filtered * theta_in (two-layer only)
  std::vector<DenseMatrix> petal_outputs;   // Y_p (n x h)
  DenseMatrix embedding;                    // Z (n x P h)
  DenseMatrix logits;                       // n x C
  DenseMatrix output;                       // log-probabilities, or logits for kIdentity
};

inline void check_compatible(const HigcnParams& params, const PropagatedFeatures& feats) {
  const auto& c = params.config;
  if (feats.max_order != c.max_order || feats.max_power != c.max_power ||
      feats.feature_dim() != c.input_dim) {
    throw UsageError("features (P=" + std::to_string(feats.max_order) +
                     ", K=" + std::to_string(feats.max_power) +
                     ", d=" + std::to_string(feats.feature_dim()) +
                     ") do not match model (P=" + std::to_string(c.max_order) +
                     ", K=" + std::to_string(c.max_power) + ", d=" + std::to_string(c.input_dim) +
                     ")");
  }
}

inline DenseMatrix log_softmax_rows(const DenseMatrix& logits) {
  DenseMatrix out(logits.rows(), logits.cols());
  for (std::size_t i = 0; i < logits.rows(); ++i) {
    auto in = logits.row(i);
    const double m = *std::max_element(in.begin(), in.end());
    double s = 0.0;
    for (double v : in) s += std::exp(v - m);
    const double lse = m + std::log(s);
    auto o = out.row(i);
    for (std::size_t j = 0; j < in.size(); ++j) o[j] = in[j] - lse;
  }
  return out;
}

// Embedding Z only; logits/output are left empty.
inline ForwardTape embed(const HigcnParams& params, const PropagatedFeatures& feats) {
  check_compatible(params, feats);
  const auto& c = params.config;
  const std::size_t n = feats.num_nodes();
  ForwardTape tape;
  tape.filtered.reserve(c.max_order);
  tape.petal_outputs.reserve(c.max_order);
  for (std::size_t p = 0; p < c.max_order; ++p) {
    DenseMatrix s(n, c.input_dim);
    for (std::size_t k = 0; k <= c.max_power; ++k) {
      const double g = params.gamma(p, k);
      if (g != 0.0) axpy(g, feats.block(p, k), s);
    }
    if (c.layers == 2) {
      DenseMatrix pre = matmul(s, params.theta_in[p]);
      DenseMatrix act = pre;
      for (double& v : act.values()) v = std::max(v, 0.0);
      tape.petal_outputs.push_back(matmul(act, params.theta_hidden[p]));
      tape.pre_activation.push_back(std::move(pre));
    } else {
      tape.petal_outputs.push_back(matmul(s, params.theta_in[p]));
    }
    tape.filtered.push_back(std::move(s));
  }
  tape.embedding = hconcat(tape.petal_outputs);
  return tape;
}

inline ForwardTape forward(const HigcnParams& params, const PropagatedFeatures& feats) {
  ForwardTape tape = embed(params, feats);
  tape.logits = matmul(tape.embedding, params.w);
  tape.output = params.config.head == OutputHead::kLogSoftmax ? log_softmax_rows(tape.logits)
                                                              : tape.logits;
  return tape;
}

// Accumulates d(loss)/d(gamma, theta) into grads given d(loss)/dZ.
inline void backward_embedding(const HigcnParams& params, const PropagatedFeatures& feats,
                               const ForwardTape& tape, const DenseMatrix& d_embedding,
                               HigcnParams& grads) {
  const auto& c = params.config;
  const std::size_t n = feats.num_nodes();
  for (std::size_t p = 0; p < c.max_order; ++p) {
    DenseMatrix d_y(n, c.hidden);
    for (std::size_t i = 0; i < n; ++i) {
      auto src = d_embedding.row(i).subspan(p * c.hidden, c.hidden);
      std::copy(src.begin(), src.end(), d_y.row(i).begin());
    }
    DenseMatrix d_filtered;
    if (c.layers == 2) {
      const DenseMatrix& pre = tape.pre_activation[p];
      DenseMatrix act = pre;
      for (double& v : act.values()) v = std::max(v, 0.0);
      axpy(1.0, matmul_tn(act, d_y), grads.theta_hidden[p]);
      DenseMatrix d_pre = matmul_nt(d_y, params.theta_hidden[p]);
      auto dv = d_pre.values();
      auto pv = pre.values();
      for (std::size_t i = 0; i < dv.size(); ++i)
        if (pv[i] <= 0.0) dv[i] = 0.0;
      axpy(1.0, matmul_tn(tape.filtered[p], d_pre), grads.theta_in[p]);
      d_filtered = matmul_nt(d_pre, params.theta_in[p]);
    } else {
      axpy(1.0, matmul_tn(tape.filtered[p], d_y), grads.theta_in[p]);
      d_filtered = matmul_nt(d_y, params.theta_in[p]);
    }
    for (std::size_t k = 0; k <= c.max_power; ++k) {
      grads.gamma(p, k) += frobenius_dot(d_filtered, feats.block(p, k));
    }
  }
}

// Adds weight_decay/2 * ||theta, w||^2 (and gamma when decay_gamma) to loss and grads.
inline double apply_weight_decay(const HigcnParams& params, HigcnParams& grads, double weight_decay,
                                 bool decay_gamma) {
  if (weight_decay == 0.0) return 0.0;
  double penalty = 0.0;
  std::vector<const DenseMatrix*> values;
  params.for_each_block([&](const DenseMatrix& m, bool filter) {
    values.push_back(filter && !decay_gamma ? nullptr : &m);
  });
  std::size_t i = 0;
  grads.for_each_block([&](DenseMatrix& g, bool) {
    if (const DenseMatrix* m = values[i++]) {
      penalty += 0.5 * weight_decay * frobenius_dot(*m, *m);
      axpy(weight_decay, *m, g);
    }
  });
  return penalty;
}

struct LossAndGrad {
  double loss = 0.0;
  HigcnParams grads;
};

inline void check_mask(std::span<const std::size_t> mask, std::size_t n) {
  if (mask.empty()) throw UsageError("loss: mask is empty");
  for (auto i : mask)
    if (i >= n) throw UsageError("loss: mask index out of range");
}

// Mean negative log-likelihood over mask plus weight decay.
inline LossAndGrad loss_and_grad(const HigcnParams& params, const PropagatedFeatures& feats,
                                 std::span<const int> labels, std::span<const std::size_t> mask,
                                 double weight_decay, bool decay_gamma = false) {
  if (params.config.head != OutputHead::kLogSoftmax) {
    throw UsageError("loss_and_grad: model head is not log-softmax");
  }
  const std::size_t n = feats.num_nodes();
  check_mask(mask, n);
  if (labels.size() != n) throw UsageError("loss_and_grad: label count mismatch");
  const ForwardTape tape = forward(params, feats);
  const std::size_t classes = params.config.outputs;
  const double inv = 1.0 / static_cast<double>(mask.size());

  LossAndGrad out{0.0, zero_params(params.config)};
  DenseMatrix d_logits(n, classes);
  for (auto i : mask) {
    const int y = labels[i];
    if (y < 0 || static_cast<std::size_t>(y) >= classes) {
      throw UsageError("loss_and_grad: label " + std::to_string(y) + " outside class range");
    }
    out.loss -= inv * tape.output(i, static_cast<std::size_t>(y));
    for (std::size_t c = 0; c < classes; ++c) {
      d_logits(i, c) += inv * std::exp(tape.output(i, c));
    }
    d_logits(i, static_cast<std::size_t>(y)) -= inv;
  }
  out.grads.w = matmul_tn(tape.embedding, d_logits);
  backward_embedding(params, feats, tape, matmul_nt(d_logits, params.w), out.grads);
  out.loss += apply_weight_decay(params, out.grads, weight_decay, decay_gamma);
  return out;
}

// Mean absolute error over mask for a single-output identity head, plus weight decay.
inline LossAndGrad l1_loss_and_grad(const HigcnParams& params, const PropagatedFeatures& feats,
                                    std::span<const double> targets,
                                    std::span<const std::size_t> mask, double weight_decay,
                                    bool decay_gamma = false) {
  if (params.config.head != OutputHead::kIdentity || params.config.outputs != 1) {
    throw UsageError("l1_loss_and_grad: model must have a single identity output");
  }
  const std::size_t n = feats.num_nodes();
  check_mask(mask, n);
  if (targets.size() != n) throw UsageError("l1_loss_and_grad: target count mismatch");
  const ForwardTape tape = forward(params, feats);
  const double inv = 1.0 / static_cast<double>(mask.size());
  LossAndGrad out{0.0, zero_params(params.config)};
  DenseMatrix d_out(n, 1);
  for (auto i : mask) {
    const double r = tape.output(i, 0) - targets[i];
    out.loss += inv * std::abs(r);
    d_out(i, 0) = r > 0.0 ? inv : (r < 0.0 ? -inv : 0.0);
  }
  out.grads.w = matmul_tn(tape.embedding, d_out);
  backward_embedding(params, feats, tape, matmul_nt(d_out, params.w), out.grads);
  out.loss += apply_weight_decay(params, out.grads, weight_decay, decay_gamma);
  return out;
}

enum class Readout { kMean, kSum };

// Graph-level readout of the node embedding (1 x P h).
inline DenseMatrix readout_rows(const DenseMatrix& z, Readout r) {
  DenseMatrix out(1, z.cols());
  for (std::size_t i = 0; i < z.rows(); ++i) {
    auto row = z.row(i);
    for (std::size_t j = 0; j < z.cols(); ++j) out(0, j) += row[j];
  }
  if (r == Readout::kMean && z.rows() > 0) {
    for (double& v : out.values()) v /= static_cast<double>(z.rows());
  }
  return out;
}

// Log-probabilities of one graph under readout + linear head.
inline std::vector<double> graph_log_probs(const HigcnParams& params, const PropagatedFeatures& feats,
                                           Readout readout) {
  const ForwardTape tape = embed(params, feats);
  const DenseMatrix logits = log_softmax_rows(matmul(readout_rows(tape.embedding, readout), params.w));
  return {logits.values().begin(), logits.values().end()};
}

// Mean graph-level NLL over the selected graphs plus weight decay.
inline LossAndGrad graph_loss_and_grad(const HigcnParams& params,
                                       std::span<const PropagatedFeatures> graphs,
                                       std::span<const int> labels,
                                       std::span<const std::size_t> selected, Readout readout,
                                       double weight_decay, bool decay_gamma = false) {
  if (selected.empty()) throw UsageError("graph_loss_and_grad: no graphs selected");
  const std::size_t classes = params.config.outputs;
  const double inv = 1.0 / static_cast<double>(selected.size());
  LossAndGrad out{0.0, zero_params(params.config)};
  for (auto gi : selected) {
    const PropagatedFeatures& feats = graphs[gi];
    const ForwardTape tape = embed(params, feats);
    const DenseMatrix pooled = readout_rows(tape.embedding, readout);
    const DenseMatrix logp = log_softmax_rows(matmul(pooled, params.w));
    const int y = labels[gi];
    if (y < 0 || static_cast<std::size_t>(y) >= classes) {
      throw UsageError("graph_loss_and_grad: label outside class range");
    }
    out.loss -= inv * logp(0, static_cast<std::size_t>(y));
    DenseMatrix d_logits(1, classes);
    for (std::size_t c = 0; c < classes; ++c) d_logits(0, c) = inv * std::exp(logp(0, c));
    d_logits(0, static_cast<std::size_t>(y)) -= inv;
    axpy(1.0, matmul_tn(pooled, d_logits), out.grads.w);
    const DenseMatrix d_pooled = matmul_nt(d_logits, params.w);
    const std::size_t n = feats.num_nodes();
    const double share = readout == Readout::kMean && n > 0 ? 1.0 / static_cast<double>(n) : 1.0;
    DenseMatrix d_embedding(n, d_pooled.cols());
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < d_pooled.cols(); ++j) d_embedding(i, j) = share * d_pooled(0, j);
    backward_embedding(params, feats, tape, d_embedding, out.grads);
  }
  out.loss += apply_weight_decay(params, out.grads, weight_decay, decay_gamma);
  return out;
}

struct AdamConfig {
  double lr = 0.01;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double eps = 1e-8;
};

struct AdamState {
  std::vector<double> m;
  std::vector<double> v;
  std::size_t step = 0;
};

// One bias-corrected Adam update over a flat parameter vector.
inline void adam_update(std::span<double> x, std::span<const double> g, AdamState& state,
                        const AdamConfig& cfg) {
  if (state.m.empty()) {
    state.m.assign(x.size(), 0.0);
    state.v.assign(x.size(), 0.0);
  }
  if (state.m.size() != x.size() || g.size() != x.size()) {
    throw UsageError("adam_update: state does not match parameter shape");
  }
  ++state.step;
  const double c1 = 1.0 - std::pow(cfg.beta1, static_cast<double>(state.step));
  const double c2 = 1.0 - std::pow(cfg.beta2, static_cast<double>(state.step));
  for (std::size_t i = 0; i < x.size(); ++i) {
    state.m[i] = cfg.beta1 * state.m[i] + (1.0 - cfg.beta1) * g[i];
    state.v[i] = cfg.beta2 * state.v[i] + (1.0 - cfg.beta2) * g[i] * g[i];
    const double m_hat = state.m[i] / c1;
    const double v_hat = state.v[i] / c2;
    x[i] -= cfg.lr * m_hat / (std::sqrt(v_hat) + cfg.eps);
  }
}

inline void adam_step(HigcnParams& params, const HigcnParams& grads, AdamState& state,
                      const AdamConfig& cfg) {
  std::vector<double> x = params.flatten();
  const std::vector<double> g = grads.flatten();
  adam_update(x, g, state, cfg);
  params.assign_flat(x);
}

inline std::vector<int> predict_classes(const DenseMatrix& log_probs) {
  std::vector<int> out(log_probs.rows());
  for (std::size_t i = 0; i < log_probs.rows(); ++i) {
    auto row = log_probs.row(i);
    out[i] = static_cast<int>(std::max_element(row.begin(), row.end()) - row.begin());
  }
  return out;
}

}  // namespace higcn
