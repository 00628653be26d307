#pragma once

#include <cmath>
#include <limits>
#include <map>
#include <numbers>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "harmonium/errors.hpp"
#include "harmonium/polynomial.hpp"

namespace harmonium {

template <typename Scalar>
using VectorX = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;
template <typename Scalar>
using MatrixX = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

/// A real number stored as sign * exp(log_abs).
template <typename Scalar>
struct SignedLog {
  Scalar log_abs = -std::numeric_limits<Scalar>::infinity();
  int sign = 0;

  Scalar value() const { return sign == 0 ? Scalar(0) : Scalar(sign) * std::exp(log_abs); }
};

/// exp(log_scale) * poly(y) * exp(-1/2 (y - shift)^T Q (y - shift))
template <typename Scalar>
struct PolyGaussian {
  int dim = 0;
  Polynomial<Scalar> poly;
  MatrixX<Scalar> Q;
  VectorX<Scalar> shift;
  Scalar log_scale = 0;

  PolyGaussian() = default;
  PolyGaussian(Polynomial<Scalar> p, MatrixX<Scalar> q, VectorX<Scalar> s, Scalar log_s = 0)
      : dim(p.dim()), poly(std::move(p)), Q(std::move(q)), shift(std::move(s)), log_scale(log_s) {
    if (Q.rows() != dim || Q.cols() != dim || shift.size() != dim)
      throw std::invalid_argument("PolyGaussian: shape mismatch");
  }

  /// Pure Gaussian with constant polynomial 1.
  static PolyGaussian gaussian(const MatrixX<Scalar>& q, Scalar log_s = 0) {
    const int d = static_cast<int>(q.rows());
    return PolyGaussian(Polynomial<Scalar>::constant(d, Scalar(1)), q, VectorX<Scalar>::Zero(d), log_s);
  }

  Scalar evaluate(const VectorX<Scalar>& y) const {
    const VectorX<Scalar> z = y - shift;
    return std::exp(log_scale - Scalar(0.5) * z.dot(Q * z)) * poly.evaluate(y);
  }
};

namespace detail {

template <typename Scalar>
Eigen::LLT<MatrixX<Scalar>> checked_llt(const MatrixX<Scalar>& Q, const char* who) {
  if (Q.rows() != Q.cols()) throw std::invalid_argument(std::string(who) + ": matrix not square");
  const Scalar scale = Q.cwiseAbs().maxCoeff();
  if (scale > 0 && (Q - Q.transpose()).cwiseAbs().maxCoeff() > Scalar(1e-12) * scale)
    throw NumericalFailure(std::string(who) + ": matrix not symmetric");
  Eigen::LLT<MatrixX<Scalar>> llt(Q);
  if (llt.info() != Eigen::Success)
    throw NumericalFailure(std::string(who) + ": matrix not positive definite");
  for (Eigen::Index i = 0; i < Q.rows(); ++i)
    if (!(llt.matrixL()(i, i) > Scalar(0)))
      throw NumericalFailure(std::string(who) + ": matrix not positive definite");
  return llt;
}

template <typename Scalar>
Scalar log_det_spd(const Eigen::LLT<MatrixX<Scalar>>& llt) {
  Scalar s(0);
  for (Eigen::Index i = 0; i < llt.matrixLLT().rows(); ++i) s += std::log(llt.matrixLLT()(i, i));
  return Scalar(2) * s;
}

inline double double_factorial_odd(int k) {
  // (k-1)!! for even k, i.e. E[z^k] of a standard normal
  double r = 1.0;
  for (int j = k - 1; j > 1; j -= 2) r *= j;
  return r;
}

}  // namespace detail

/// log of the integral of exp(-1/2 y^T Q y) over R^dim.
template <typename Scalar>
Scalar gaussian_norm(const MatrixX<Scalar>& Q) {
  const auto llt = detail::checked_llt(Q, "gaussian_norm");
  const Scalar d = static_cast<Scalar>(Q.rows());
  return Scalar(0.5) * d * std::log(Scalar(2) * std::numbers::pi_v<Scalar>) -
         Scalar(0.5) * detail::log_det_spd(llt);
}

/// Centered Gaussian moments E[prod y_i^{k_i}] for a fixed covariance.
/// Memoized per instance; an instance must not be shared between threads.
template <typename Scalar>
class IsserlisMoments {
 public:
  explicit IsserlisMoments(MatrixX<Scalar> sigma) : sigma_(std::move(sigma)) {
    const Eigen::Index n = sigma_.rows();
    diagonal_ = true;
    for (Eigen::Index i = 0; i < n && diagonal_; ++i)
      for (Eigen::Index j = 0; j < n; ++j)
        if (i != j && sigma_(i, j) != Scalar(0)) {
          diagonal_ = false;
          break;
        }
  }

  const MatrixX<Scalar>& sigma() const { return sigma_; }

  Scalar operator()(const Exponent& k) {
    const int deg = total_degree(k);
    if (deg % 2 != 0) return Scalar(0);
    if (deg == 0) return Scalar(1);
    if (diagonal_) {
      Scalar r(1);
      for (Eigen::Index i = 0; i < sigma_.rows(); ++i) {
        const int ki = k[static_cast<std::size_t>(i)];
        if (ki % 2 != 0) return Scalar(0);
        if (ki > 0) r *= Scalar(detail::double_factorial_odd(ki)) * std::pow(sigma_(i, i), Scalar(ki / 2));
      }
      return r;
    }
    if (auto it = cache_.find(k); it != cache_.end()) return it->second;
    // E[y_i y^m] = sum_j Sigma_ij m_j E[y^{m - e_j}], with y^k = y_i y^m
    std::size_t i = 0;
    while (k[i] == 0) ++i;
    Exponent m = k;
    --m[i];
    Scalar r(0);
    for (std::size_t j = 0; j < static_cast<std::size_t>(sigma_.rows()); ++j) {
      if (m[j] == 0) continue;
      const Scalar s = sigma_(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
      if (s == Scalar(0)) continue;
      Exponent mm = m;
      --mm[j];
      r += s * Scalar(m[j]) * (*this)(mm);
    }
    cache_.emplace(k, r);
    return r;
  }

 private:
  MatrixX<Scalar> sigma_;
  bool diagonal_ = false;
  std::map<Exponent, Scalar> cache_;
};

template <typename Scalar>
Scalar isserlis_moment(const MatrixX<Scalar>& sigma, const Exponent& k) {
  IsserlisMoments<Scalar> moments(sigma);
  return moments(k);
}

struct IntegrationOptions {
  int max_degree = 64;
};

/// Closed-form integral of a PolyGaussian over R^dim.
template <typename Scalar>
SignedLog<Scalar> integrate(const PolyGaussian<Scalar>& pg, const IntegrationOptions& opt = {}) {
  if (pg.poly.degree() > opt.max_degree)
    throw NumericalFailure("integrate: polynomial degree " + std::to_string(pg.poly.degree()) +
                           " exceeds limit " + std::to_string(opt.max_degree));
  const auto llt = detail::checked_llt(pg.Q, "integrate");
  const Scalar log_norm = Scalar(0.5) * static_cast<Scalar>(pg.dim) *
                              std::log(Scalar(2) * std::numbers::pi_v<Scalar>) -
                          Scalar(0.5) * detail::log_det_spd(llt);
  Polynomial<Scalar> centered = pg.poly;
  if (pg.shift.size() > 0 && pg.shift.cwiseAbs().maxCoeff() > Scalar(0))
    centered = pg.poly.compose_affine(MatrixX<Scalar>::Identity(pg.dim, pg.dim), pg.shift);
  IsserlisMoments<Scalar> moments(llt.solve(MatrixX<Scalar>::Identity(pg.dim, pg.dim)));
  Scalar sum(0);
  for (const auto& [e, c] : centered.terms()) sum += c * moments(e);
  SignedLog<Scalar> out;
  if (sum == Scalar(0)) return out;
  out.sign = sum > 0 ? 1 : -1;
  out.log_abs = pg.log_scale + log_norm + std::log(std::abs(sum));
  return out;
}

/// Integrates out every variable not listed in `keep` (keep must be sorted, unique).
template <typename Scalar>
PolyGaussian<Scalar> marginalize(const PolyGaussian<Scalar>& pg, const std::vector<int>& keep) {
  const int n = pg.dim;
  std::vector<int> drop;
  {
    std::vector<bool> kept(static_cast<std::size_t>(n), false);
    for (int k : keep) {
      if (k < 0 || k >= n || kept[static_cast<std::size_t>(k)])
        throw std::invalid_argument("marginalize: bad keep index set");
      kept[static_cast<std::size_t>(k)] = true;
    }
    for (int i = 0; i < n; ++i)
      if (!kept[static_cast<std::size_t>(i)]) drop.push_back(i);
  }
  const int nk = static_cast<int>(keep.size());
  const int nd = static_cast<int>(drop.size());
  if (nd == 0) return pg;

  MatrixX<Scalar> Qkk(nk, nk), Qkd(nk, nd), Qdd(nd, nd);
  for (int i = 0; i < nk; ++i)
    for (int j = 0; j < nk; ++j) Qkk(i, j) = pg.Q(keep[i], keep[j]);
  for (int i = 0; i < nk; ++i)
    for (int j = 0; j < nd; ++j) Qkd(i, j) = pg.Q(keep[i], drop[j]);
  for (int i = 0; i < nd; ++i)
    for (int j = 0; j < nd; ++j) Qdd(i, j) = pg.Q(drop[i], drop[j]);

  const auto llt = detail::checked_llt(Qdd, "marginalize");
  const MatrixX<Scalar> G = llt.solve(Qkd.transpose());  // nd x nk
  const MatrixX<Scalar> schur = Qkk - Qkd * G;
  const Scalar log_dropped = Scalar(0.5) * static_cast<Scalar>(nd) *
                                 std::log(Scalar(2) * std::numbers::pi_v<Scalar>) -
                             Scalar(0.5) * detail::log_det_spd(llt);

  // y_keep = v, y_drop = shift_d + w - G (v - shift_k); new variables (v, w)
  MatrixX<Scalar> A = MatrixX<Scalar>::Zero(n, nk + nd);
  VectorX<Scalar> c = VectorX<Scalar>::Zero(n);
  for (int i = 0; i < nk; ++i) A(keep[i], i) = Scalar(1);
  for (int i = 0; i < nd; ++i) {
    const int r = drop[i];
    A(r, nk + i) = Scalar(1);
    c(r) = pg.shift(r);
    for (int j = 0; j < nk; ++j) {
      A(r, j) = -G(i, j);
      c(r) += G(i, j) * pg.shift(keep[j]);
    }
  }
  const Polynomial<Scalar> composed = pg.poly.compose_affine(A, c);
  IsserlisMoments<Scalar> moments(llt.solve(MatrixX<Scalar>::Identity(nd, nd)));
  Polynomial<Scalar> out(nk);
  for (const auto& [e, coeff] : composed.terms()) {
    Exponent ek{}, ew{};
    for (int i = 0; i < nk; ++i) ek[static_cast<std::size_t>(i)] = e[static_cast<std::size_t>(i)];
    for (int i = 0; i < nd; ++i) ew[static_cast<std::size_t>(i)] = e[static_cast<std::size_t>(nk + i)];
    const Scalar m = moments(ew);
    if (m != Scalar(0)) out.add_term(ek, coeff * m);
  }
  VectorX<Scalar> shift_k(nk);
  for (int i = 0; i < nk; ++i) shift_k(i) = pg.shift(keep[i]);
  return PolyGaussian<Scalar>(std::move(out), schur, shift_k, pg.log_scale + log_dropped);
}

/// Pointwise product of two PolyGaussians over the same variables.
template <typename Scalar>
PolyGaussian<Scalar> multiply(const PolyGaussian<Scalar>& f, const PolyGaussian<Scalar>& g) {
  if (f.dim != g.dim) throw std::invalid_argument("multiply: dimension mismatch");
  const MatrixX<Scalar> Q = f.Q + g.Q;
  const VectorX<Scalar> h = f.Q * f.shift + g.Q * g.shift;
  const auto llt = detail::checked_llt(Q, "multiply");
  const VectorX<Scalar> s = llt.solve(h);
  const Scalar c = f.shift.dot(f.Q * f.shift) + g.shift.dot(g.Q * g.shift) - s.dot(h);
  return PolyGaussian<Scalar>(f.poly * g.poly, Q, s, f.log_scale + g.log_scale - Scalar(0.5) * c);
}

}  // namespace harmonium
