#include "harmonium/entanglement.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numbers>

#include "harmonium/hermite.hpp"

namespace harmonium {

namespace {

constexpr double kLog2Pi = 1.8378770664093454836;

double log_det_chol(const MatrixXd& S, const char* who) {
  return detail::log_det_spd(detail::checked_llt<double>(S, who));
}

/// Rows over (single particle | companion CM, other-species CM) for the single-particle splits.
/// alpha, beta_c: weights of the singled-out particle and of the companion CM in the species CM.
struct SplitWeights {
  double alpha;
  double beta_c;
};

SplitWeights split_weights(int n) {
  const double nd = n;
  return {1.0 / std::sqrt(nd), std::sqrt((nd - 1.0) / nd)};
}

}  // namespace

std::string to_string(PurityMethod m) {
  switch (m) {
    case PurityMethod::Analytic: return "analytic";
    case PurityMethod::CovarianceFastPath: return "covariance_fast_path";
    case PurityMethod::Oracle: return "oracle";
  }
  return "?";
}

EntanglementResult EntanglementResult::from_log(double log_purity, PurityMethod m) {
  if (!std::isfinite(log_purity)) throw NumericalFailure("purity is not finite");
  EntanglementResult r;
  r.log_purity = std::min(log_purity, 0.0);  // round-off can push a pure marginal above 1
  r.purity = std::exp(r.log_purity);
  r.linear_entropy = 1.0 - r.purity;
  r.method = m;
  return r;
}

ReducedProblem reduced_exact(const ModelParams& p, const QuantumNumbers& q, Bipartition b) {
  q.validate(p);
  const NormalModes m = normal_modes(p);
  const double c = m.cos_theta, s = m.sin_theta;
  ReducedProblem r;
  r.dim_a = 1;
  const auto two_mode = [&](double c11, double c12, double c21, double c22) {
    r.W.resize(2, 2);
    r.W << c11, c12, c21, c22;
    r.beta.resize(2);
    r.beta << m.beta1, m.beta2;
    r.quanta = {q.u1, q.u2};
  };
  switch (b) {
    case Bipartition::NucleiVsElectrons:
      two_mode(c, s, -s, c);  // over (P | p)
      break;
    case Bipartition::OneNucleusVsRest:
      if (p.n_nuclei == 1) {
        two_mode(c, s, -s, c);
      } else {
        // over (X_last | Q, p), Q the normalized CM of the other nuclei
        const auto [al, be] = split_weights(p.n_nuclei);
        r.W.resize(3, 3);
        r.W << -be, al, 0.0, c * al, c * be, s, -s * al, -s * be, c;
        r.beta.resize(3);
        r.beta << m.beta_n, m.beta1, m.beta2;
        r.quanta = {q.nuclear.back(), q.u1, q.u2};
      }
      break;
    case Bipartition::OneElectronVsRest:
      if (p.n_electrons == 1) {
        two_mode(s, c, c, -s);  // over (x | P)
      } else {
        // over (x_last | Q_e, P)
        const auto [al, be] = split_weights(p.n_electrons);
        r.W.resize(3, 3);
        r.W << -be, al, 0.0, s * al, s * be, c, c * al, c * be, -s;
        r.beta.resize(3);
        r.beta << m.beta_e, m.beta1, m.beta2;
        r.quanta = {q.electronic.back(), q.u1, q.u2};
      }
      break;
  }
  return r;
}

ReducedProblem reduce_state(const StateRep& s, Bipartition b, double tol) {
  const int N = s.dim();
  const std::vector<int> a_cols = subsystem_columns(s.params, b);
  std::vector<bool> in_a(static_cast<std::size_t>(N), false);
  for (int c : a_cols) in_a[static_cast<std::size_t>(c)] = true;
  std::vector<int> b_cols;
  for (int c = 0; c < N; ++c)
    if (!in_a[static_cast<std::size_t>(c)]) b_cols.push_back(c);

  const std::size_t F = s.factors.size();
  std::vector<VectorXd> wa(F), wb(F);
  for (std::size_t f = 0; f < F; ++f) {
    wa[f].resize(static_cast<Eigen::Index>(a_cols.size()));
    wb[f].resize(static_cast<Eigen::Index>(b_cols.size()));
    for (std::size_t i = 0; i < a_cols.size(); ++i) wa[f](static_cast<Eigen::Index>(i)) = s.factors[f].row(a_cols[i]);
    for (std::size_t i = 0; i < b_cols.size(); ++i) wb[f](static_cast<Eigen::Index>(i)) = s.factors[f].row(b_cols[i]);
  }

  MatrixXd SA(static_cast<Eigen::Index>(a_cols.size()), 0), SB(static_cast<Eigen::Index>(b_cols.size()), 0);
  auto residual = [](const MatrixXd& S, const VectorXd& v) {
    VectorXd r = v - S * (S.transpose() * v);
    return VectorXd(r - S * (S.transpose() * r));  // second Gram-Schmidt pass
  };
  auto extend = [&](MatrixXd& S, const VectorXd& v, double scale) {
    const VectorXd r = residual(S, v);
    if (r.norm() <= tol * scale) return false;
    S.conservativeResize(Eigen::NoChange, S.cols() + 1);
    S.col(S.cols() - 1) = r / r.norm();
    return true;
  };

  for (std::size_t f = 0; f < F; ++f) {
    const double scale = std::max(1.0, s.factors[f].row.norm());
    if (wa[f].norm() > tol * scale && wb[f].norm() > tol * scale) {
      extend(SA, wa[f], scale);
      extend(SB, wb[f], scale);
    }
  }
  // closure: every factor must lie inside the spans or be orthogonal to both
  std::vector<bool> inside(F, false);
  for (bool changed = true; changed;) {
    changed = false;
    for (std::size_t f = 0; f < F; ++f) {
      const double scale = std::max(1.0, s.factors[f].row.norm());
      const bool a_in = residual(SA, wa[f]).norm() <= tol * scale;
      const bool b_in = residual(SB, wb[f]).norm() <= tol * scale;
      const bool a_out = SA.cols() == 0 || (SA.transpose() * wa[f]).norm() <= tol * scale;
      const bool b_out = SB.cols() == 0 || (SB.transpose() * wb[f]).norm() <= tol * scale;
      inside[f] = a_in && b_in && !(a_out && b_out);
      if (inside[f] || (a_out && b_out)) continue;
      changed |= extend(SA, wa[f], scale);
      changed |= extend(SB, wb[f], scale);
    }
  }

  ReducedProblem r;
  r.dim_a = static_cast<int>(SA.cols());
  const int k = static_cast<int>(SA.cols() + SB.cols());
  r.W.resize(k, k);
  r.beta.resize(k);
  int row = 0;
  for (std::size_t f = 0; f < F; ++f) {
    if (!inside[f]) continue;
    if (row == k) throw NumericalFailure("reduce_state: more factors than reduced coordinates");
    r.W.row(row).head(SA.cols()) = (SA.transpose() * wa[f]).transpose();
    r.W.row(row).tail(SB.cols()) = (SB.transpose() * wb[f]).transpose();
    r.beta(row) = s.factors[f].beta;
    r.quanta.push_back(s.factors[f].quanta);
    ++row;
  }
  if (row != k) throw NumericalFailure("reduce_state: reduced factor rows do not span the reduced coordinates");
  return r;
}

EntanglementResult reduced_purity(const ReducedProblem& r) {
  const int k = r.dim(), na = r.dim_a, nb = k - na;
  if (na == 0 || nb == 0) return EntanglementResult::from_log(0.0, PurityMethod::Analytic);
  if (2 * k > kMaxPolyDim) throw NumericalFailure("reduced_purity: reduced dimension too large");

  const VectorXd omega = r.beta.cwiseSqrt();
  const Eigen::PartialPivLU<MatrixXd> lu(r.W);
  double log_det_w = 0.0;
  for (int i = 0; i < k; ++i) log_det_w += std::log(std::abs(lu.matrixLU()(i, i)));
  if (!std::isfinite(log_det_w)) throw NumericalFailure("reduced_purity: singular mode matrix");
  const MatrixXd W_inv = lu.inverse();

  // Q = W^T diag(omega) W; the B-block determinant goes through det Q det((Q^-1)_AA)
  const MatrixXd Q = r.W.transpose() * omega.asDiagonal() * r.W;
  const MatrixXd QAA = Q.topLeftCorner(na, na);
  const MatrixXd QBB = Q.bottomRightCorner(nb, nb);
  const MatrixXd Qinv_AA = W_inv.topRows(na) * omega.cwiseInverse().asDiagonal() * W_inv.topRows(na).transpose();
  const double ld_QAA = log_det_chol(QAA, "reduced_purity");
  const double ld_QBB = omega.array().log().sum() + 2.0 * log_det_w + log_det_chol(Qinv_AA, "reduced_purity");

  // Sum/difference variables a+- = (a +- a')/sqrt2, b+- likewise. The exponent becomes
  // y+^T (2Q) y+ + a-^T (2Q_AA) a- + b-^T (2Q_BB) b-, whitened to standard normals t.
  const Eigen::LLT<MatrixXd> LA(2.0 * QAA), LB(2.0 * QBB);
  if (LA.info() != Eigen::Success || LB.info() != Eigen::Success)
    throw NumericalFailure("reduced_purity: subsystem block not positive definite");
  const MatrixXd MA = LA.matrixL().solve(r.W.leftCols(na).transpose()).transpose();   // W_{.A} L_A^{-T}
  const MatrixXd MB = LB.matrixL().solve(r.W.rightCols(nb).transpose()).transpose();  // W_{.B} L_B^{-T}

  double log_pref = -log_det_w + k * kLog2Pi - 0.5 * ((na + nb) * std::log(2.0) + ld_QAA + ld_QBB);
  for (int s = 0; s < k; ++s)
    log_pref += 4.0 * log_hermite_norm(r.quanta[static_cast<std::size_t>(s)], omega(s)) - 0.5 * std::log(2.0 * omega(s));

  double expectation = 1.0;
  if (std::any_of(r.quanta.begin(), r.quanta.end(), [](int v) { return v > 0; })) {
    const int d = 2 * k;  // t+ (k), t_A (na), t_B (nb)
    static constexpr int sa[4] = {1, -1, -1, 1};
    static constexpr int sb[4] = {1, 1, -1, -1};
    Polynomial<double> poly = Polynomial<double>::constant(d, 1.0);
    for (int s = 0; s < k; ++s) {
      const int nu = r.quanta[static_cast<std::size_t>(s)];
      if (nu == 0) continue;
      const Polynomial<double> H = hermite_polynomial<double>(nu);
      const double g = std::sqrt(0.5 * omega(s));
      for (int c = 0; c < 4; ++c) {
        Eigen::RowVectorXd lin = Eigen::RowVectorXd::Zero(d);
        lin(s) = 0.5;
        for (int j = 0; j < na; ++j) lin(k + j) = sa[c] * g * MA(s, j);
        for (int j = 0; j < nb; ++j) lin(k + na + j) = sb[c] * g * MB(s, j);
        poly = poly * H.compose_affine(lin, VectorXd::Zero(1));
      }
    }
    IsserlisMoments<double> moments(MatrixXd::Identity(d, d));
    expectation = 0.0;
    for (const auto& [e, coeff] : poly.terms()) expectation += coeff * moments(e);
    if (!(expectation > 0.0)) throw NumericalFailure("reduced_purity: non-positive trace integral");
  }
  // divide by (int h^2)^2 = |det W|^-2
  return EntanglementResult::from_log(log_pref + std::log(expectation) + 2.0 * log_det_w, PurityMethod::Analytic);
}

namespace {

using Amplitude = std::function<double(const VectorXd&)>;

/// Nested quadrature for Tr rho_A^2 with rho_A(a,a') = int h(a,b) h(a',b) db, unnormalized.
/// Q is the Gaussian part of h (coordinates ordered A first); it only positions the frames.
double nested_trace(const Amplitude& h, const MatrixXd& Q, int na, int order) {
  const int k = static_cast<int>(Q.rows()), nb = k - na;
  const MatrixXd QAA = Q.topLeftCorner(na, na), QAB = Q.topRightCorner(na, nb), QBB = Q.bottomRightCorner(nb, nb);
  const Eigen::LLT<MatrixXd> llt_bb(QBB);
  if (llt_bb.info() != Eigen::Success) throw NumericalFailure("oracle: Q_BB not positive definite");
  const MatrixXd shift_map = -0.5 * llt_bb.solve(QAB.transpose());  // b0 = shift_map (a + a')
  const MatrixXd G = QAB * llt_bb.solve(QAB.transpose());
  MatrixXd K(2 * na, 2 * na);
  K << 2.0 * QAA - G, -G, -G, 2.0 * QAA - G;
  const auto inner_frame = QuadratureFrame<double>::from_precision(2.0 * QBB, VectorXd::Zero(nb));
  const auto outer_frame = QuadratureFrame<double>::from_precision(K, VectorXd::Zero(2 * na));

  VectorXd y1(k), y2(k);
  auto rho = [&](const VectorXd& aa) {
    QuadratureFrame<double> f = inner_frame;
    f.center = shift_map * (aa.head(na) + aa.tail(na));
    y1.head(na) = aa.head(na);
    y2.head(na) = aa.tail(na);
    auto integrand = [&](const VectorXd& bv) {
      y1.tail(nb) = bv;
      y2.tail(nb) = bv;
      return h(y1) * h(y2);
    };
    return tensor_gauss_hermite<double>(integrand, f, order).value;
  };
  auto outer = [&](const VectorXd& aa) {
    const double r = rho(aa);
    return r * r;
  };
  return tensor_gauss_hermite<double>(outer, outer_frame, order).value;
}

EntanglementResult nested_purity(const Amplitude& h, const MatrixXd& Q, int na, const OracleOptions& opt) {
  const int k = static_cast<int>(Q.rows());
  if (na == 0 || na == k) return EntanglementResult::from_log(0.0, PurityMethod::Oracle);
  QuadratureOptions qo;
  qo.tol = opt.tol;
  qo.max_order = opt.max_order;
  qo.min_order = opt.min_order;
  const auto norm = quadrature_oracle<double>([&](const VectorXd& y) { return h(y) * h(y); },
                                              QuadratureFrame<double>::from_precision(2.0 * Q, VectorXd::Zero(k)), qo);
  double prev = nested_trace(h, Q, na, opt.min_order);
  for (int n = opt.min_order + 2; n <= opt.max_order; n += 2) {
    const double cur = nested_trace(h, Q, na, n);
    const double change = std::abs(cur - prev);
    if (change <= opt.tol * std::abs(cur)) {
      if (!(cur > 0.0)) throw NumericalFailure("oracle: non-positive trace");
      auto res = EntanglementResult::from_log(std::log(cur) - 2.0 * std::log(norm.value), PurityMethod::Oracle);
      res.oracle_error = change / std::abs(cur) + 2.0 * norm.error / std::abs(norm.value);
      return res;
    }
    prev = cur;
  }
  throw NumericalFailure("oracle: nested quadrature did not converge by order " + std::to_string(opt.max_order));
}

}  // namespace

EntanglementResult reduced_purity_oracle(const ReducedProblem& r, const OracleOptions& opt) {
  const int k = r.dim();
  const VectorXd omega = r.beta.cwiseSqrt();
  const MatrixXd Q = r.W.transpose() * omega.asDiagonal() * r.W;
  Amplitude h = [&](const VectorXd& y) {
    const VectorXd u = r.W * y;
    double v = 1.0;
    for (int s = 0; s < k; ++s) v *= oscillator_function(r.quanta[static_cast<std::size_t>(s)], r.beta(s), u(s));
    return v;
  };
  return nested_purity(h, Q, r.dim_a, opt);
}

EntanglementResult state_purity_oracle(const StateRep& s, Bipartition b, const OracleOptions& opt) {
  const int N = s.dim();
  if (N > 4) throw InvalidParameters("state_purity_oracle: full-state quadrature limited to 4 particles");
  const std::vector<int> a_cols = subsystem_columns(s.params, b);
  std::vector<int> perm = a_cols;  // reduced position -> particle column
  for (int c = 0; c < N; ++c)
    if (std::find(a_cols.begin(), a_cols.end(), c) == a_cols.end()) perm.push_back(c);
  const int na = static_cast<int>(a_cols.size());
  // dilated coordinates: the dilation is local to each side and drops out of the purity
  MatrixXd Q = MatrixXd::Zero(N, N);
  for (const auto& f : s.factors) {
    VectorXd w(N);
    for (int i = 0; i < N; ++i) w(i) = f.row(perm[static_cast<std::size_t>(i)]);
    Q += std::sqrt(f.beta) * w * w.transpose();
  }
  Amplitude h = [&](const VectorXd& y) {
    VectorXd x(N);
    for (int i = 0; i < N; ++i) x(perm[static_cast<std::size_t>(i)]) = y(i);
    double v = 1.0;
    for (const auto& f : s.factors) v *= oscillator_function(f.quanta, f.beta, f.row.dot(x));
    return v;
  };
  return nested_purity(h, Q, na, opt);
}

EntanglementResult purity(const ModelParams& p, const QuantumNumbers& q, Bipartition b) {
  return reduced_purity(reduced_exact(p, q, b));
}

double linear_entropy(const ModelParams& p, const QuantumNumbers& q, Bipartition b) {
  return purity(p, q, b).linear_entropy;
}

EntanglementResult purity_oracle(const ModelParams& p, const QuantumNumbers& q, Bipartition b,
                                 const OracleOptions& opt) {
  return reduced_purity_oracle(reduced_exact(p, q, b), opt);
}

EntanglementResult gaussian_state_purity(const MatrixXd& Q, const MatrixXd& Q_inv, const std::vector<int>& a) {
  const int na = static_cast<int>(a.size());
  if (na == 0 || na == Q.rows()) return EntanglementResult::from_log(0.0, PurityMethod::CovarianceFastPath);
  MatrixXd QAA(na, na), IAA(na, na);
  for (int i = 0; i < na; ++i)
    for (int j = 0; j < na; ++j) {
      QAA(i, j) = Q(a[i], a[j]);
      IAA(i, j) = Q_inv(a[i], a[j]);
    }
  // sigma_x = Q^-1 / 2, sigma_p = Q / 2 for a real Gaussian; purity = det(2 sigma_A)^{-1/2}
  const double ld = log_det_chol(QAA, "covariance purity") + log_det_chol(IAA, "covariance purity");
  return EntanglementResult::from_log(-0.5 * ld, PurityMethod::CovarianceFastPath);
}

EntanglementResult ground_state_purity_covariance(const ModelParams& p, Bipartition b) {
  const NormalModes m = normal_modes(p);
  const CoordinateMap map = coordinate_map(p);
  const VectorXd omega = mode_betas(p, m).cwiseSqrt();
  const MatrixXd Q = map.T.transpose() * omega.asDiagonal() * map.T;
  const MatrixXd Q_inv = map.T.transpose() * omega.cwiseInverse().asDiagonal() * map.T;
  return gaussian_state_purity(Q, Q_inv, subsystem_columns(p, b));
}

EqualMassEpsilon epsilon_equal_mass(const ModelParams& p) {
  if (p.mass_ratio != 1.0) throw InvalidParameters("epsilon_equal_mass requires M = 1");
  if (p.tau_ne != p.tau_ee || p.tau_ne != p.tau_nn)
    throw InvalidParameters("epsilon_equal_mass requires tau_ne = tau_ee = tau_nn");
  const double t = p.tau_ne;
  const double A = 1.0 + (p.n_electrons + p.n_nuclei) * t;
  const double sA = std::sqrt(A);
  EqualMassEpsilon out;
  out.epsilon = 1.0 - (1.0 + sA) * std::sqrt(sA) / std::sqrt((sA + A - t) * (1.0 + sA + t));
  out.in_regime = t >= 1.0;
  return out;
}

MassMaximum argmax_mass_ratio(const ModelParams& templ, double tau_ne, const MassSearch& search) {
  if (!(tau_ne > 0.0)) throw InvalidParameters("argmax_mass_ratio requires tau_ne > 0");
  if (!(search.m_min > 0.0) || !(search.m_max > search.m_min) || search.grid_points < 3)
    throw InvalidParameters("argmax_mass_ratio: bad search bracket");
  const ModelParams base = templ.with_tau_ne(tau_ne);
  const QuantumNumbers g = QuantumNumbers::ground(base);
  auto eps = [&](double log_m) {
    return purity(base.with_mass_ratio(std::exp(log_m)), g, Bipartition::NucleiVsElectrons).linear_entropy;
  };
  const double lo = std::log(search.m_min), hi = std::log(search.m_max);
  const int n = search.grid_points;
  std::vector<double> u(static_cast<std::size_t>(n)), v(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    u[static_cast<std::size_t>(i)] = lo + (hi - lo) * i / (n - 1);
    v[static_cast<std::size_t>(i)] = eps(u[static_cast<std::size_t>(i)]);
  }
  const auto best = static_cast<int>(std::max_element(v.begin(), v.end()) - v.begin());
  int local_maxima = 0;
  for (int i = 1; i + 1 < n; ++i)
    if (v[static_cast<std::size_t>(i)] > v[static_cast<std::size_t>(i - 1)] &&
        v[static_cast<std::size_t>(i)] > v[static_cast<std::size_t>(i + 1)])
      ++local_maxima;

  // golden section on log M inside the grid cell pair around the best sample
  double a = u[static_cast<std::size_t>(std::max(best - 1, 0))];
  double b = u[static_cast<std::size_t>(std::min(best + 1, n - 1))];
  const double phi = 0.5 * (std::sqrt(5.0) - 1.0);
  double x1 = b - phi * (b - a), x2 = a + phi * (b - a);
  double f1 = eps(x1), f2 = eps(x2);
  while (b - a > search.rel_tol * 1e-2) {
    if (f1 < f2) {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + phi * (b - a);
      f2 = eps(x2);
    } else {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - phi * (b - a);
      f1 = eps(x1);
    }
  }
  MassMaximum out;
  const double um = 0.5 * (a + b);
  out.mass_ratio = std::exp(um);
  out.epsilon = eps(um);
  out.unimodal = local_maxima <= 1;
  return out;
}

}  // namespace harmonium
