#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace harmonium {

/// Upper bound on the number of variables a Polynomial may carry.
inline constexpr int kMaxPolyDim = 16;

/// Exponent multi-index; unused trailing slots are zero.
using Exponent = std::array<std::uint8_t, kMaxPolyDim>;

inline int total_degree(const Exponent& e) {
  int d = 0;
  for (auto k : e) d += k;
  return d;
}

/// Sparse multivariate polynomial: exponent multi-index -> coefficient.
template <typename Scalar>
class Polynomial {
 public:
  using Terms = std::map<Exponent, Scalar>;
  using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;
  using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

  Polynomial() = default;
  explicit Polynomial(int dim) : dim_(dim) {
    if (dim < 0 || dim > kMaxPolyDim)
      throw std::invalid_argument("Polynomial: dimension " + std::to_string(dim) +
                                  " outside [0, " + std::to_string(kMaxPolyDim) + "]");
  }

  static Polynomial constant(int dim, Scalar c) {
    Polynomial p(dim);
    p.add_term(Exponent{}, c);
    return p;
  }

  static Polynomial variable(int dim, int var) {
    Polynomial p(dim);
    Exponent e{};
    e.at(static_cast<std::size_t>(var)) = 1;
    p.add_term(e, Scalar(1));
    return p;
  }

  /// c0 + sum_j coeffs_j * y_j
  template <typename Derived>
  static Polynomial linear(const Eigen::MatrixBase<Derived>& coeffs, Scalar c0 = Scalar(0)) {
    Polynomial p(static_cast<int>(coeffs.size()));
    p.add_term(Exponent{}, c0);
    for (Eigen::Index j = 0; j < coeffs.size(); ++j) {
      Exponent e{};
      e[static_cast<std::size_t>(j)] = 1;
      p.add_term(e, coeffs(j));
    }
    return p;
  }

  int dim() const { return dim_; }
  const Terms& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  std::size_t size() const { return terms_.size(); }

  void add_term(const Exponent& e, Scalar c) {
    if (c == Scalar(0)) return;
    auto [it, inserted] = terms_.try_emplace(e, c);
    if (!inserted) {
      it->second += c;
      if (it->second == Scalar(0)) terms_.erase(it);
    }
  }

  int degree() const {
    int d = 0;
    for (const auto& [e, c] : terms_) d = std::max(d, total_degree(e));
    return d;
  }

  Scalar evaluate(const Vector& y) const {
    Scalar sum(0);
    for (const auto& [e, c] : terms_) {
      Scalar m = c;
      for (int i = 0; i < dim_; ++i)
        for (int k = 0; k < e[static_cast<std::size_t>(i)]; ++k) m *= y(i);
      sum += m;
    }
    return sum;
  }

  Polynomial derivative(int var) const {
    Polynomial out(dim_);
    const auto v = static_cast<std::size_t>(var);
    for (const auto& [e, c] : terms_) {
      if (e[v] == 0) continue;
      Exponent f = e;
      --f[v];
      out.add_term(f, c * Scalar(e[v]));
    }
    return out;
  }

  Polynomial& operator+=(const Polynomial& o) {
    check_same_dim(o);
    for (const auto& [e, c] : o.terms_) add_term(e, c);
    return *this;
  }

  Polynomial& operator-=(const Polynomial& o) {
    check_same_dim(o);
    for (const auto& [e, c] : o.terms_) add_term(e, -c);
    return *this;
  }

  Polynomial& operator*=(Scalar s) {
    if (s == Scalar(0)) {
      terms_.clear();
      return *this;
    }
    for (auto& [e, c] : terms_) c *= s;
    return *this;
  }

  friend Polynomial operator+(Polynomial a, const Polynomial& b) { return a += b; }
  friend Polynomial operator-(Polynomial a, const Polynomial& b) { return a -= b; }
  friend Polynomial operator*(Polynomial a, Scalar s) { return a *= s; }
  friend Polynomial operator*(Scalar s, Polynomial a) { return a *= s; }

  friend Polynomial operator*(const Polynomial& a, const Polynomial& b) {
    a.check_same_dim(b);
    Polynomial out(a.dim_);
    for (const auto& [ea, ca] : a.terms_)
      for (const auto& [eb, cb] : b.terms_) {
        Exponent e;
        for (std::size_t i = 0; i < e.size(); ++i) {
          const int k = ea[i] + eb[i];
          if (k > 255) throw std::overflow_error("Polynomial: exponent overflow");
          e[i] = static_cast<std::uint8_t>(k);
        }
        out.add_term(e, ca * cb);
      }
    return out;
  }

  Polynomial pow(int n) const {
    Polynomial out = constant(dim_, Scalar(1));
    for (int i = 0; i < n; ++i) out = out * *this;
    return out;
  }

  /// Substitutes y = A z + c, returning a polynomial in z (dimension A.cols()).
  template <typename DerivedA, typename DerivedC>
  Polynomial compose_affine(const Eigen::MatrixBase<DerivedA>& A,
                            const Eigen::MatrixBase<DerivedC>& c) const {
    if (A.rows() != dim_ || c.size() != dim_)
      throw std::invalid_argument("Polynomial::compose_affine: shape mismatch");
    const int new_dim = static_cast<int>(A.cols());
    // powers[i][k] = (A_i . z + c_i)^k, built on demand
    std::vector<std::vector<Polynomial>> powers(static_cast<std::size_t>(dim_));
    auto power_of = [&](int i, int k) -> const Polynomial& {
      auto& list = powers[static_cast<std::size_t>(i)];
      if (list.empty()) {
        list.push_back(constant(new_dim, Scalar(1)));
        list.push_back(linear(A.row(i).transpose(), c(i)));
      }
      while (static_cast<int>(list.size()) <= k) list.push_back(list.back() * list[1]);
      return list[static_cast<std::size_t>(k)];
    };
    Polynomial out(new_dim);
    for (const auto& [e, coeff] : terms_) {
      Polynomial term = constant(new_dim, coeff);
      for (int i = 0; i < dim_; ++i)
        if (e[static_cast<std::size_t>(i)] > 0) term = term * power_of(i, e[static_cast<std::size_t>(i)]);
      out += term;
    }
    return out;
  }

  /// Drops terms whose magnitude is below tol * (largest magnitude).
  Polynomial pruned(Scalar rel_tol) const {
    Scalar big(0);
    for (const auto& [e, c] : terms_) big = std::max<Scalar>(big, std::abs(c));
    Polynomial out(dim_);
    for (const auto& [e, c] : terms_)
      if (std::abs(c) > rel_tol * big) out.terms_.emplace(e, c);
    return out;
  }

 private:
  void check_same_dim(const Polynomial& o) const {
    if (o.dim_ != dim_) throw std::invalid_argument("Polynomial: dimension mismatch");
  }

  int dim_ = 0;
  Terms terms_;
};

}  // namespace harmonium
