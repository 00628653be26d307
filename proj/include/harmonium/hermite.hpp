#pragma once

#include <cmath>
#include <numbers>
#include <vector>

#include "harmonium/polynomial.hpp"

namespace harmonium {

/// Coefficients of the physicists' Hermite polynomial H_n, lowest power first.
template <typename Scalar>
std::vector<Scalar> hermite_coefficients(int n) {
  std::vector<Scalar> prev{Scalar(1)};  // H_0
  if (n == 0) return prev;
  std::vector<Scalar> cur{Scalar(0), Scalar(2)};  // H_1
  for (int k = 1; k < n; ++k) {
    // H_{k+1} = 2 y H_k - 2k H_{k-1}
    std::vector<Scalar> next(static_cast<std::size_t>(k + 2), Scalar(0));
    for (std::size_t i = 0; i < cur.size(); ++i) next[i + 1] += Scalar(2) * cur[i];
    for (std::size_t i = 0; i < prev.size(); ++i) next[i] -= Scalar(2 * k) * prev[i];
    prev = std::move(cur);
    cur = std::move(next);
  }
  return cur;
}

/// H_n as a one-variable Polynomial.
template <typename Scalar>
Polynomial<Scalar> hermite_polynomial(int n) {
  Polynomial<Scalar> p(1);
  const auto c = hermite_coefficients<Scalar>(n);
  for (std::size_t k = 0; k < c.size(); ++k) {
    Exponent e{};
    e[0] = static_cast<std::uint8_t>(k);
    p.add_term(e, c[k]);
  }
  return p;
}

/// H_n(y) by the three-term recurrence.
template <typename Scalar>
Scalar hermite_value(int n, Scalar y) {
  Scalar h0(1);
  if (n == 0) return h0;
  Scalar h1 = Scalar(2) * y;
  for (int k = 1; k < n; ++k) {
    const Scalar h2 = Scalar(2) * y * h1 - Scalar(2 * k) * h0;
    h0 = h1;
    h1 = h2;
  }
  return h1;
}

/// log of the normalization constant N_n with N_n^2 = sqrt(omega) / (2^n n! sqrt(pi)).
template <typename Scalar>
Scalar log_hermite_norm(int n, Scalar omega) {
  using std::log;
  const Scalar log_pi = log(std::numbers::pi_v<Scalar>);
  return Scalar(0.5) * (Scalar(0.5) * log(omega) - Scalar(n) * log(Scalar(2)) -
                        std::lgamma(Scalar(n + 1)) - Scalar(0.5) * log_pi);
}

/// Normalized oscillator eigenfunction with squared frequency beta:
/// Phi_n(u) = N_n H_n(sqrt(omega) u) exp(-omega u^2 / 2), omega = sqrt(beta).
/// Evaluated through the orthonormal recurrence, so large n and large omega stay finite.
template <typename Scalar>
Scalar oscillator_function(int n, Scalar beta, Scalar u) {
  using std::exp;
  using std::log;
  using std::sqrt;
  const Scalar omega = sqrt(beta);
  const Scalar xi = sqrt(omega) * u;
  // psi_0 = pi^{-1/4} exp(-xi^2/2), psi_{k+1} = sqrt(2/(k+1)) xi psi_k - sqrt(k/(k+1)) psi_{k-1}
  Scalar p0 = exp(-Scalar(0.5) * xi * xi - Scalar(0.25) * log(std::numbers::pi_v<Scalar>));
  Scalar p1(0);
  for (int k = 0; k < n; ++k) {
    const Scalar p2 = sqrt(Scalar(2) / Scalar(k + 1)) * xi * p0 - sqrt(Scalar(k) / Scalar(k + 1)) * p1;
    p1 = p0;
    p0 = p2;
  }
  return sqrt(sqrt(omega)) * p0;
}

}  // namespace harmonium
