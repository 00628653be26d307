#include "harmonium/eigenstates.hpp"

#include <cmath>
#include <numeric>

#include "harmonium/hermite.hpp"

namespace harmonium {

std::string to_string(Bipartition b) {
  switch (b) {
    case Bipartition::NucleiVsElectrons: return "nuclei-electrons";
    case Bipartition::OneNucleusVsRest: return "one-nucleus";
    case Bipartition::OneElectronVsRest: return "one-electron";
  }
  return "?";
}

Bipartition parse_bipartition(const std::string& s) {
  if (s == "nuclei-electrons") return Bipartition::NucleiVsElectrons;
  if (s == "one-nucleus") return Bipartition::OneNucleusVsRest;
  if (s == "one-electron") return Bipartition::OneElectronVsRest;
  throw InvalidParameters("unknown bipartition '" + s + "' (expected nuclei-electrons, one-nucleus, one-electron)");
}

std::vector<int> subsystem_columns(const ModelParams& p, Bipartition b) {
  switch (b) {
    case Bipartition::NucleiVsElectrons: {
      std::vector<int> a(static_cast<std::size_t>(p.n_nuclei));
      std::iota(a.begin(), a.end(), 0);
      return a;
    }
    case Bipartition::OneNucleusVsRest: return {p.n_nuclei - 1};
    case Bipartition::OneElectronVsRest: return {p.n_nuclei + p.n_electrons - 1};
  }
  return {};
}

std::string ModeId::name() const {
  switch (kind) {
    case ModeKind::NuclearJacobi: return "R" + std::to_string(index);
    case ModeKind::ElectronicJacobi: return "r" + std::to_string(index);
    case ModeKind::U1: return "U1";
    case ModeKind::U2: return "U2";
    case ModeKind::NuclearCM: return "Rcm";
    case ModeKind::ElectronicCM: return "rcm";
  }
  return "?";
}

MatrixXd StateRep::rows() const {
  MatrixXd W(static_cast<Eigen::Index>(factors.size()), dim());
  for (std::size_t i = 0; i < factors.size(); ++i) W.row(static_cast<Eigen::Index>(i)) = factors[i].row.transpose();
  return W;
}

VectorXd StateRep::betas() const {
  VectorXd b(static_cast<Eigen::Index>(factors.size()));
  for (std::size_t i = 0; i < factors.size(); ++i) b(static_cast<Eigen::Index>(i)) = factors[i].beta;
  return b;
}

std::vector<int> StateRep::quanta() const {
  std::vector<int> q;
  for (const auto& f : factors) q.push_back(f.quanta);
  return q;
}

int StateRep::total_quanta() const {
  int t = 0;
  for (const auto& f : factors) t += f.quanta;
  return t;
}

double StateRep::log_prefactor() const {
  return 0.25 * params.n_nuclei * std::log(params.mass_ratio) + 0.5 * log_det_w;
}

StateRep exact_state(const ModelParams& p, const QuantumNumbers& q) {
  q.validate(p);
  StateRep s;
  s.params = p;
  s.qnums = q;
  s.modes = normal_modes(p);
  s.map = coordinate_map(p);
  s.dilation = s.map->dilation;
  const int Nn = p.n_nuclei, Ne = p.n_electrons, N = Nn + Ne;
  const VectorXd betas = mode_betas(p, *s.modes);
  const std::vector<int> quanta = mode_quanta(q);
  for (int r = 0; r < N; ++r) {
    ModeFactor f;
    if (r < Nn - 1) {
      f.id = {ModeKind::NuclearJacobi, r + 1};
    } else if (r < N - 2) {
      f.id = {ModeKind::ElectronicJacobi, r - (Nn - 1) + 1};
    } else {
      f.id = {r == N - 2 ? ModeKind::U1 : ModeKind::U2, 0};
    }
    f.row = s.map->T.row(r).transpose();
    f.beta = betas(r);
    f.quanta = quanta[static_cast<std::size_t>(r)];
    f.support.assign(static_cast<std::size_t>(N), false);
    const bool collective = f.id.kind == ModeKind::U1 || f.id.kind == ModeKind::U2;
    for (int c = 0; c < N; ++c) f.support[static_cast<std::size_t>(c)] = collective || f.row(c) != 0.0;
    s.factors.push_back(std::move(f));
  }
  s.log_det_w = 0.0;
  return s;
}

double evaluate_wavefunction(const StateRep& s, const VectorXd& coords) {
  if (coords.size() != s.dim()) throw InvalidParameters("coordinate vector has wrong length");
  const VectorXd y = s.dilation.cwiseProduct(coords);
  double amp = std::exp(s.log_prefactor());
  for (const auto& f : s.factors) amp *= oscillator_function(f.quanta, f.beta, f.row.dot(y));
  return amp;
}

PolyGaussian<double> to_polygaussian(const StateRep& s) {
  const int N = s.dim();
  if (N > kMaxExpandedParticles)
    throw InvalidParameters("polynomial expansion limited to " + std::to_string(kMaxExpandedParticles) + " particles");
  MatrixXd Q = MatrixXd::Zero(N, N);
  Polynomial<double> poly = Polynomial<double>::constant(N, 1.0);
  double log_scale = s.log_prefactor();
  for (const auto& f : s.factors) {
    const double omega = std::sqrt(f.beta);
    const VectorXd w = s.dilation.cwiseProduct(f.row);
    Q += omega * w * w.transpose();
    log_scale += log_hermite_norm(f.quanta, omega);
    if (f.quanta > 0) {
      const Eigen::RowVectorXd a = std::sqrt(omega) * w.transpose();
      poly = poly * hermite_polynomial<double>(f.quanta).compose_affine(a, VectorXd::Zero(1));
    }
  }
  Q = 0.5 * (Q + Q.transpose());
  return PolyGaussian<double>(std::move(poly), std::move(Q), VectorXd::Zero(N), log_scale);
}

double overlap(const StateRep& a, const StateRep& b) {
  if (a.dim() != b.dim()) throw InvalidParameters("overlap: states live on different particle counts");
  return integrate(multiply(to_polygaussian(a), to_polygaussian(b))).value();
}

double energy_expectation(const StateRep& s) {
  const PolyGaussian<double> pg = to_polygaussian(s);
  const int N = pg.dim;
  const int Nn = s.params.n_nuclei;
  // physical-coordinate potential Hessian D A D and masses (dimensionless units)
  const MatrixXd A = build_interaction_matrix(s.params);
  const MatrixXd V = s.dilation.asDiagonal() * A * s.dilation.asDiagonal();
  // <H> = int sum_i |d_i Psi|^2 / (2 m_i) + 1/2 x^T V x Psi^2 (kinetic term integrated by parts)
  Polynomial<double> integrand(N);
  for (int i = 0; i < N; ++i) {
    const double mass = i < Nn ? s.params.mass_ratio : 1.0;
    const Polynomial<double> qx = Polynomial<double>::linear(pg.Q.row(i).transpose());
    const Polynomial<double> d = pg.poly.derivative(i) - qx * pg.poly;
    integrand += (0.5 / mass) * (d * d);
  }
  Polynomial<double> xvx(N);
  for (int i = 0; i < N; ++i)
    for (int j = 0; j < N; ++j)
      if (V(i, j) != 0.0)
        xvx += V(i, j) * (Polynomial<double>::variable(N, i) * Polynomial<double>::variable(N, j));
  integrand += 0.5 * (xvx * (pg.poly * pg.poly));
  const PolyGaussian<double> h(std::move(integrand), 2.0 * pg.Q, VectorXd::Zero(N), 2.0 * pg.log_scale);
  return std::sqrt(s.params.k / s.params.m_e) * integrate(h).value();
}

std::vector<ModeId> mixing_support(const StateRep& s, Bipartition b) {
  const std::vector<int> a_cols = subsystem_columns(s.params, b);
  std::vector<bool> in_a(static_cast<std::size_t>(s.dim()), false);
  for (int c : a_cols) in_a[static_cast<std::size_t>(c)] = true;
  std::vector<ModeId> out;
  for (const auto& f : s.factors) {
    bool touches_a = false, touches_b = false;
    for (int c = 0; c < s.dim(); ++c) {
      if (!f.support[static_cast<std::size_t>(c)]) continue;
      (in_a[static_cast<std::size_t>(c)] ? touches_a : touches_b) = true;
    }
    if (touches_a && touches_b) out.push_back(f.id);
  }
  return out;
}

}  // namespace harmonium
