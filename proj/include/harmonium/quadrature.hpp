#pragma once

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "harmonium/errors.hpp"
#include "harmonium/gaussian.hpp"

namespace harmonium {

/// n-point Gauss-Hermite rule for the weight exp(-x^2/2).
/// `free_weights` integrate an arbitrary f: sum f(x_i) w_i exp(x_i^2/2) ~ int f dx.
template <typename Scalar>
struct GaussHermiteRule {
  std::vector<Scalar> nodes;
  std::vector<Scalar> weights;
  std::vector<Scalar> free_weights;
};

template <typename Scalar>
GaussHermiteRule<Scalar> gauss_hermite_rule(int n) {
  if (n < 1) throw std::invalid_argument("gauss_hermite_rule: order must be >= 1");
  // Golub-Welsch start, then Newton on the orthonormal recurrence
  //   x p_k = sqrt(k+1) p_{k+1} + sqrt(k) p_{k-1}
  MatrixX<Scalar> J = MatrixX<Scalar>::Zero(n, n);
  for (int k = 1; k < n; ++k) J(k, k - 1) = J(k - 1, k) = std::sqrt(Scalar(k));
  Eigen::SelfAdjointEigenSolver<MatrixX<Scalar>> es(J, Eigen::EigenvaluesOnly);
  GaussHermiteRule<Scalar> rule;
  const Scalar sqrt2pi = std::sqrt(Scalar(2) * std::numbers::pi_v<Scalar>);
  for (int i = 0; i < n; ++i) {
    Scalar x = es.eigenvalues()(i);
    Scalar sum_sq(0);
    for (int it = 0; it < 8; ++it) {
      Scalar pm(0), p(1);
      sum_sq = Scalar(1);
      for (int k = 0; k < n; ++k) {
        const Scalar pn = (x * p - std::sqrt(Scalar(k)) * pm) / std::sqrt(Scalar(k + 1));
        pm = p;
        p = pn;
        if (k + 1 < n) sum_sq += p * p;
      }
      // p = p_n, pm = p_{n-1}; p_n' = sqrt(n) p_{n-1}
      const Scalar step = p / (std::sqrt(Scalar(n)) * pm);
      x -= step;
      if (std::abs(step) <= std::numeric_limits<Scalar>::epsilon() * std::max(Scalar(1), std::abs(x))) break;
    }
    // recompute the Christoffel sum at the polished node
    Scalar pm(0), p(1);
    sum_sq = Scalar(1);
    for (int k = 0; k + 1 < n; ++k) {
      const Scalar pn = (x * p - std::sqrt(Scalar(k)) * pm) / std::sqrt(Scalar(k + 1));
      pm = p;
      p = pn;
      sum_sq += p * p;
    }
    const Scalar w = sqrt2pi / sum_sq;
    rule.nodes.push_back(x);
    rule.weights.push_back(w);
    rule.free_weights.push_back(std::exp(std::log(w) + Scalar(0.5) * x * x));
  }
  return rule;
}

/// Affine frame x = center + L z in which the integrand looks like a standard normal.
template <typename Scalar>
struct QuadratureFrame {
  VectorX<Scalar> center;
  MatrixX<Scalar> L;

  static QuadratureFrame identity(int dim) {
    return {VectorX<Scalar>::Zero(dim), MatrixX<Scalar>::Identity(dim, dim)};
  }

  /// Frame matched to exp(-1/2 (x-c)^T P (x-c)).
  static QuadratureFrame from_precision(const MatrixX<Scalar>& P, VectorX<Scalar> c) {
    const auto llt = detail::checked_llt(P, "QuadratureFrame");
    const Eigen::Index d = P.rows();
    MatrixX<Scalar> Lt = llt.matrixU();
    MatrixX<Scalar> L = Lt.template triangularView<Eigen::Upper>().solve(MatrixX<Scalar>::Identity(d, d));
    return {std::move(c), std::move(L)};
  }

  int dim() const { return static_cast<int>(center.size()); }
};

template <typename Scalar>
struct QuadratureResult {
  Scalar value = 0;
  Scalar error = 0;
  Scalar l1 = 0;
  int order = 0;
  long long evaluations = 0;
};

struct QuadratureOptions {
  double tol = 1e-10;
  int min_order = 4;
  int max_order = 80;
  int max_dim = 6;
  long long max_evaluations = 60'000'000;
};

/// Tensor-product rule of a single order in the given frame.
template <typename Scalar, typename F>
QuadratureResult<Scalar> tensor_gauss_hermite(F&& f, const QuadratureFrame<Scalar>& frame, int order) {
  const int d = frame.dim();
  const auto rule = gauss_hermite_rule<Scalar>(order);
  const Scalar jac = std::abs(frame.L.determinant());
  QuadratureResult<Scalar> res;
  res.order = order;
  if (d == 0) {
    const Scalar v = f(VectorX<Scalar>());
    res.value = v;
    res.l1 = std::abs(v);
    res.evaluations = 1;
    return res;
  }
  std::vector<int> idx(static_cast<std::size_t>(d), 0);
  VectorX<Scalar> z(d), x(d);
  Scalar sum(0), l1(0);
  while (true) {
    Scalar w(1);
    for (int k = 0; k < d; ++k) {
      z(k) = rule.nodes[static_cast<std::size_t>(idx[static_cast<std::size_t>(k)])];
      w *= rule.free_weights[static_cast<std::size_t>(idx[static_cast<std::size_t>(k)])];
    }
    x.noalias() = frame.center + frame.L * z;
    const Scalar v = f(x) * w;
    sum += v;
    l1 += std::abs(v);
    ++res.evaluations;
    int k = 0;
    while (k < d && ++idx[static_cast<std::size_t>(k)] == order) idx[static_cast<std::size_t>(k++)] = 0;
    if (k == d) break;
  }
  res.value = sum * jac;
  res.l1 = l1 * jac;
  return res;
}

/// Increases the order until two successive estimates agree to tol * L1 norm.
template <typename Scalar, typename F>
QuadratureResult<Scalar> quadrature_oracle(F&& f, const QuadratureFrame<Scalar>& frame,
                                           const QuadratureOptions& opt = {}) {
  const int d = frame.dim();
  if (d > opt.max_dim)
    throw std::invalid_argument("quadrature_oracle: dimension " + std::to_string(d) + " exceeds cap " +
                                std::to_string(opt.max_dim));
  auto cost = [d](int n) {
    long long c = 1;
    for (int k = 0; k < d; ++k) c *= n;
    return c;
  };
  QuadratureResult<Scalar> prev = tensor_gauss_hermite<Scalar>(f, frame, opt.min_order);
  long long total = prev.evaluations;
  int n = opt.min_order;
  while (true) {
    const int next = std::min(opt.max_order, n + std::max(2, n / 2));
    if (next == n || total + cost(next) > opt.max_evaluations)
      throw NumericalFailure("quadrature_oracle: no convergence up to order " + std::to_string(n) +
                             " (last change " + std::to_string(static_cast<double>(prev.error)) + ")");
    QuadratureResult<Scalar> cur = tensor_gauss_hermite<Scalar>(f, frame, next);
    total += cur.evaluations;
    cur.error = std::abs(cur.value - prev.value);
    cur.evaluations = total;
    if (cur.error <= Scalar(opt.tol) * std::max(cur.l1, std::numeric_limits<Scalar>::min())) return cur;
    prev = cur;
    n = next;
  }
}

}  // namespace harmonium
