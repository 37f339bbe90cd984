#pragma once

// Flower-petal operators: the symmetric normalized node-simplex-node adjacency of one
// petal, its Laplacian, the core/petal random walk, and the feature powers the model
// consumes.

#include <cmath>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "higcn/complex.hpp"
#include "higcn/dense.hpp"
#include "higcn/errors.hpp"
#include "higcn/sparse.hpp"
#include "higcn/sym_eigen.hpp"

namespace higcn {

struct FpOperator {
  std::size_t order = 0;
  SparseMatrix a_tilde;               // n x n, symmetric
  std::vector<double> node_degrees;   // d_p(v)
  std::vector<bool> isolated;         // d_p(v) == 0

  std::size_t num_nodes() const noexcept { return a_tilde.rows(); }
};

// A_p = 1/(p+1) D^{-1/2} H Hᵀ D^{-1/2}. Nodes in no p-simplex get all-zero rows and
// columns; with no p-simplices at all the operator is zero.
inline FpOperator build_fp_adjacency(const IncidenceMatrix& inc) {
  const std::size_t n = inc.num_nodes();
  FpOperator op;
  op.order = inc.order;
  op.node_degrees = inc.node_degrees();
  op.isolated.resize(n);
  std::vector<double> inv_sqrt(n, 0.0);
  for (std::size_t v = 0; v < n; ++v) {
    op.isolated[v] = op.node_degrees[v] == 0.0;
    if (!op.isolated[v]) inv_sqrt[v] = 1.0 / std::sqrt(op.node_degrees[v]);
  }
  const SparseMatrix hht = multiply(inc.h, transpose(inc.h));
  const double scale = 1.0 / static_cast<double>(inc.order + 1);
  std::vector<double> left(inv_sqrt);
  for (auto& x : left) x *= scale;
  op.a_tilde = scale_rows_cols(hht, left, inv_sqrt);
  return op;
}

inline FpOperator build_fp_adjacency(const SimplicialComplex& k, std::size_t p) {
  return build_fp_adjacency(incidence_matrix(k, p));
}

// L_p = I - A_p; isolated nodes keep a unit diagonal.
inline SparseMatrix build_fp_laplacian(const FpOperator& op) {
  return add(SparseMatrix::identity(op.num_nodes()), op.a_tilde, 1.0, -1.0);
}

// Column-stochastic two-step walk matrix W_p = H D_h^{-1} Hᵀ D_v^{-1}. Columns of
// isolated nodes are zero.
inline SparseMatrix walk_operator(const IncidenceMatrix& inc) {
  const auto deg = inc.node_degrees();
  std::vector<double> inv_deg(deg.size(), 0.0);
  for (std::size_t v = 0; v < deg.size(); ++v)
    if (deg[v] > 0.0) inv_deg[v] = 1.0 / deg[v];
  std::vector<double> row_scale(deg.size(), 1.0 / static_cast<double>(inc.order + 1));
  return scale_rows_cols(multiply(inc.h, transpose(inc.h)), row_scale, inv_deg);
}

struct WalkState {
  std::size_t order = 0;
  std::vector<double> pi;
};

// Runs steps/2 complete core -> petal -> core walks, sub-step by sub-step:
//   pi_sigma = sum_u H(u,sigma)/d(u) pi_u,   pi_v = sum_sigma H(v,sigma)/(p+1) pi_sigma.
inline WalkState two_step_walk(const IncidenceMatrix& inc, const WalkState& start,
                               std::size_t steps) {
  if (steps < 2 || steps % 2 != 0) {
    throw UsageError("two_step_walk: step count must be even and >= 2, got " +
                     std::to_string(steps));
  }
  const std::size_t n = inc.num_nodes();
  if (start.pi.size() != n) throw UsageError("two_step_walk: distribution length mismatch");
  const auto deg = inc.node_degrees();
  for (std::size_t v = 0; v < n; ++v) {
    if (deg[v] == 0.0 && start.pi[v] != 0.0) {
      throw NumericalError("two_step_walk: probability mass on node " + std::to_string(v) +
                           " which lies in no " + std::to_string(inc.order) + "-simplex");
    }
  }
  // Hᵀ gives simplex -> member lists; H rows give node -> simplex lists.
  const SparseMatrix ht = transpose(inc.h);
  const double delta = static_cast<double>(inc.order + 1);
  std::vector<double> node_pi = start.pi;
  std::vector<double> simplex_pi(inc.num_simplices());
  for (std::size_t step = 0; step < steps / 2; ++step) {
    for (std::size_t s = 0; s < ht.rows(); ++s) {
      double acc = 0.0;
      for (auto u : ht.row_cols(s)) acc += node_pi[u] / deg[u];
      simplex_pi[s] = acc;
    }
    for (std::size_t v = 0; v < n; ++v) {
      double acc = 0.0;
      for (auto s : inc.h.row_cols(v)) acc += simplex_pi[s] / delta;
      node_pi[v] = acc;
    }
  }
  return {inc.order, std::move(node_pi)};
}

// blocks[p-1][k] = A_p^k X for p = 1..P and k = 0..K.
struct PropagatedFeatures {
  std::size_t max_order = 0;
  std::size_t max_power = 0;
  std::vector<std::vector<DenseMatrix>> blocks;

  std::size_t num_nodes() const { return blocks.empty() ? 0 : blocks[0][0].rows(); }
  std::size_t feature_dim() const { return blocks.empty() ? 0 : blocks[0][0].cols(); }
  const DenseMatrix& block(std::size_t petal_index, std::size_t k) const {
    return blocks[petal_index][k];
  }
};

inline PropagatedFeatures propagate_features(std::span<const FpOperator> ops, const DenseMatrix& x,
                                             std::size_t max_power) {
  PropagatedFeatures out;
  out.max_order = ops.size();
  out.max_power = max_power;
  out.blocks.resize(ops.size());
  for (std::size_t p = 0; p < ops.size(); ++p) {
    if (ops[p].num_nodes() != x.rows()) {
      throw UsageError("propagate_features: operator of order " + std::to_string(ops[p].order) +
                       " has " + std::to_string(ops[p].num_nodes()) + " nodes, features have " +
                       std::to_string(x.rows()) + " rows");
    }
    auto& chain = out.blocks[p];
    chain.reserve(max_power + 1);
    chain.push_back(x);
    for (std::size_t k = 1; k <= max_power; ++k) chain.push_back(spmm_dense(ops[p].a_tilde, chain.back()));
  }
  return out;
}

// Operators A_1..A_P of a lifted complex (zero operators for empty petals).
inline std::vector<FpOperator> build_fp_operators(const SimplicialComplex& k, std::size_t max_order) {
  std::vector<FpOperator> ops;
  ops.reserve(max_order);
  for (std::size_t p = 1; p <= max_order; ++p) {
    if (p <= k.max_order()) {
      ops.push_back(build_fp_adjacency(k, p));
    } else {
      FpOperator op;
      op.order = p;
      op.a_tilde = SparseMatrix::zero(k.num_nodes(), k.num_nodes());
      op.node_degrees.assign(k.num_nodes(), 0.0);
      op.isolated.assign(k.num_nodes(), true);
      ops.push_back(std::move(op));
    }
  }
  return ops;
}

// sum_k coeffs[k] L^k x by Horner's rule with repeated spmv.
inline std::vector<double> apply_polynomial(const SparseMatrix& l, std::span<const double> coeffs,
                                            std::span<const double> x) {
  if (l.rows() != l.cols() || x.size() != l.cols()) {
    throw UsageError("apply_polynomial: dimension mismatch");
  }
  std::vector<double> acc(x.size(), 0.0);
  for (std::size_t k = coeffs.size(); k-- > 0;) {
    acc = spmv(l, acc);
    for (std::size_t i = 0; i < x.size(); ++i) acc[i] += coeffs[k] * x[i];
  }
  return acc;
}

// Spectral-domain reference: Phi g(Lambda) Phiᵀ x with g(lambda) = sum_k coeffs[k] lambda^k.
inline std::vector<double> spectral_filter_oracle(const SparseMatrix& l,
                                                  std::span<const double> coeffs,
                                                  std::span<const double> x) {
  if (l.rows() > kMaxEigenSize) {
    throw NumericalError("spectral_filter_oracle: size " + std::to_string(l.rows()) +
                         " exceeds cap " + std::to_string(kMaxEigenSize));
  }
  if (x.size() != l.cols()) throw UsageError("spectral_filter_oracle: dimension mismatch");
  const SymEigen eig = dense_sym_eig(l.to_dense());
  const std::size_t n = x.size();
  std::vector<double> out(n, 0.0);
  for (std::size_t j = 0; j < n; ++j) {
    const double lambda = eig.eigenvalues[j];
    double g = 0.0;
    for (std::size_t k = coeffs.size(); k-- > 0;) g = g * lambda + coeffs[k];
    double proj = 0.0;
    for (std::size_t i = 0; i < n; ++i) proj += eig.eigenvectors(i, j) * x[i];
    const double w = g * proj;
    for (std::size_t i = 0; i < n; ++i) out[i] += w * eig.eigenvectors(i, j);
  }
  return out;
}

// Spectrum summary of one petal, as reported by the `spectra` command.
struct PetalSpectrum {
  std::size_t order = 0;
  std::size_t num_simplices = 0;
  std::size_t isolated_nodes = 0;
  double adjacency_min = 0.0;
  double adjacency_max = 0.0;
  double laplacian_min = 0.0;
  double laplacian_max = 0.0;
  double max_asymmetry = 0.0;
  bool psd = false;
};

inline PetalSpectrum petal_spectrum(const SimplicialComplex& k, std::size_t p) {
  const FpOperator op = build_fp_adjacency(k, p);
  const SparseMatrix lap = build_fp_laplacian(op);
  const auto ea = dense_sym_eig(op.a_tilde.to_dense()).eigenvalues;
  const auto el = dense_sym_eig(lap.to_dense()).eigenvalues;
  PetalSpectrum s;
  s.order = p;
  s.num_simplices = k.count(p);
  for (bool b : op.isolated) s.isolated_nodes += b ? 1 : 0;
  if (!ea.empty()) {
    s.adjacency_min = ea.front();
    s.adjacency_max = ea.back();
    s.laplacian_min = el.front();
    s.laplacian_max = el.back();
  }
  s.max_asymmetry = std::max(max_asymmetry(op.a_tilde), max_asymmetry(lap));
  constexpr double tol = 1e-10;
  s.psd = s.max_asymmetry <= 1e-12 && s.adjacency_min >= -tol && s.adjacency_max <= 1.0 + tol &&
          s.laplacian_min >= -tol && s.laplacian_max <= 1.0 + tol;
  return s;
}

// max |A_1 - (D^{-1/2} A D^{-1/2} + I)/2| over all entries; requires no isolated nodes.
inline double reduced_adjacency_residual(const Graph& g) {
  const auto k = clique_lift(g, 1);
  const FpOperator op = build_fp_adjacency(k, 1);
  const auto deg = g.degrees();
  DenseMatrix expected(g.n, g.n);
  for (std::size_t v = 0; v < g.n; ++v) {
    if (deg[v] == 0) throw NumericalError("reduced_adjacency_residual: graph has isolated nodes");
    expected(v, v) = 0.5;
  }
  for (auto [u, v] : g.edges) {
    const double w = 0.5 / std::sqrt(static_cast<double>(deg[u]) * static_cast<double>(deg[v]));
    expected(u, v) = w;
    expected(v, u) = w;
  }
  return max_abs_diff(op.a_tilde.to_dense(), expected);
}

}  // namespace higcn
