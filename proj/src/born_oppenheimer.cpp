#include "harmonium/born_oppenheimer.hpp"

#include <algorithm>
#include <cmath>

#include "harmonium/hermite.hpp"
#include "harmonium/quadrature.hpp"

namespace harmonium {

BOModes bo_modes(const ModelParams& p) {
  const NormalModes m = normal_modes(p);
  const double Nn = p.n_nuclei, Ne = p.n_electrons, M = p.mass_ratio, t = p.tau_ne;
  BOModes b;
  b.beta_n = m.beta_n;
  b.beta_e = m.beta_e;
  b.beta_n_cm = (1.0 + (Nn + Ne) * t) / (M * (1.0 + Nn * t));
  b.beta_e_cm = 1.0 + Nn * t;
  b.delta = t * std::sqrt(Nn * Ne) / (std::sqrt(M) * (1.0 + Nn * t));
  b.gamma = M * Nn / Ne;
  return b;
}

BOQuantumNumbers BOQuantumNumbers::ground(const ModelParams& p) {
  return {std::vector<int>(static_cast<std::size_t>(p.n_nuclei), 0),
          std::vector<int>(static_cast<std::size_t>(p.n_electrons), 0)};
}

void BOQuantumNumbers::validate(const ModelParams& p) const {
  if (nuclear.size() != static_cast<std::size_t>(p.n_nuclei) ||
      electronic.size() != static_cast<std::size_t>(p.n_electrons))
    throw InvalidParameters("BO labels need N_n nuclear and N_e electronic quanta");
  auto bad = [](int x) { return x < 0 || x > 64; };
  if (std::any_of(nuclear.begin(), nuclear.end(), bad) || std::any_of(electronic.begin(), electronic.end(), bad))
    throw InvalidParameters("BO quantum numbers must lie in [0, 64]");
}

StateRep bo_state(const ModelParams& p, const BOQuantumNumbers& q) {
  q.validate(p);
  const BOModes bm = bo_modes(p);
  const int Nn = p.n_nuclei, Ne = p.n_electrons, N = Nn + Ne;
  if (N > kMaxDenseParticles)
    throw InvalidParameters("BO state limited to " + std::to_string(kMaxDenseParticles) + " particles");
  StateRep s;
  s.params = p;
  s.dilation = VectorXd::Ones(N);
  s.dilation.head(Nn).setConstant(std::sqrt(p.mass_ratio));
  const MatrixXd Jn = jacobi_rows(Nn), Je = jacobi_rows(Ne);
  auto make = [&](ModeId id, VectorXd row, double beta, int quanta, bool all_support) {
    ModeFactor f;
    f.id = id;
    f.beta = beta;
    f.quanta = quanta;
    f.support.assign(static_cast<std::size_t>(N), false);
    for (int c = 0; c < N; ++c) f.support[static_cast<std::size_t>(c)] = all_support || row(c) != 0.0;
    f.row = std::move(row);
    s.factors.push_back(std::move(f));
  };
  VectorXd P = VectorXd::Zero(N), pe = VectorXd::Zero(N);
  P.head(Nn) = Jn.row(Nn - 1).transpose();
  pe.tail(Ne) = Je.row(Ne - 1).transpose();
  for (int j = 0; j + 1 < Nn; ++j) {
    VectorXd row = VectorXd::Zero(N);
    row.head(Nn) = Jn.row(j).transpose();
    make({ModeKind::NuclearJacobi, j + 1}, row, bm.beta_n, q.nuclear[static_cast<std::size_t>(j)], false);
  }
  for (int j = 0; j + 1 < Ne; ++j) {
    VectorXd row = VectorXd::Zero(N);
    row.tail(Ne) = Je.row(j).transpose();
    make({ModeKind::ElectronicJacobi, j + 1}, row, bm.beta_e, q.electronic[static_cast<std::size_t>(j)], false);
  }
  make({ModeKind::NuclearCM, 0}, P, bm.beta_n_cm, q.nuclear.back(), false);
  VectorXd shifted = pe - bm.delta * P;
  make({ModeKind::ElectronicCM, 0}, shifted, bm.beta_e_cm, q.electronic.back(), true);
  s.log_det_w = 0.0;  // unit triangular in the orthonormal Jacobi basis
  return s;
}

ReducedProblem reduced_bo(const ModelParams& p, const BOQuantumNumbers& q, Bipartition b) {
  q.validate(p);
  const BOModes bm = bo_modes(p);
  const double d = bm.delta;
  const int s_cm = q.nuclear.back(), e_cm = q.electronic.back();
  ReducedProblem r;
  r.dim_a = 1;
  auto over_cms = [&]() {
    // (P | p): nuclear CM factor and the shifted electronic CM factor
    r.W.resize(2, 2);
    r.W << 1.0, 0.0, -d, 1.0;
    r.beta.resize(2);
    r.beta << bm.beta_n_cm, bm.beta_e_cm;
    r.quanta = {s_cm, e_cm};
  };
  switch (b) {
    case Bipartition::NucleiVsElectrons:
      over_cms();
      break;
    case Bipartition::OneNucleusVsRest:
      if (p.n_nuclei == 1) {
        over_cms();
      } else {
        // (X_last | Q, p)
        const double al = 1.0 / std::sqrt(double(p.n_nuclei)), be = std::sqrt((p.n_nuclei - 1.0) / p.n_nuclei);
        r.W.resize(3, 3);
        r.W << -be, al, 0.0, al, be, 0.0, -d * al, -d * be, 1.0;
        r.beta.resize(3);
        r.beta << bm.beta_n, bm.beta_n_cm, bm.beta_e_cm;
        r.quanta = {q.nuclear[static_cast<std::size_t>(p.n_nuclei - 2)], s_cm, e_cm};
      }
      break;
    case Bipartition::OneElectronVsRest:
      if (p.n_electrons == 1) {
        // (x | P)
        r.W.resize(2, 2);
        r.W << 1.0, -d, 0.0, 1.0;
        r.beta.resize(2);
        r.beta << bm.beta_e_cm, bm.beta_n_cm;
        r.quanta = {e_cm, s_cm};
      } else {
        // (x_last | Q_e, P)
        const double al = 1.0 / std::sqrt(double(p.n_electrons)),
                     be = std::sqrt((p.n_electrons - 1.0) / p.n_electrons);
        r.W.resize(3, 3);
        r.W << -be, al, 0.0, al, be, -d, 0.0, 0.0, 1.0;
        r.beta.resize(3);
        r.beta << bm.beta_e, bm.beta_e_cm, bm.beta_n_cm;
        r.quanta = {q.electronic[static_cast<std::size_t>(p.n_electrons - 2)], e_cm, s_cm};
      }
      break;
  }
  return r;
}

EntanglementResult bo_purity(const ModelParams& p, Bipartition b) {
  return bo_purity(p, BOQuantumNumbers::ground(p), b);
}

EntanglementResult bo_purity(const ModelParams& p, const BOQuantumNumbers& q, Bipartition b) {
  return reduced_purity(reduced_bo(p, q, b));
}

namespace {

struct CmGaussians {
  Eigen::Matrix2d O;      // exact U rows over (P, p)
  Eigen::Vector2d omega;  // exact frequencies
  Eigen::Matrix2d W;      // BO rows over (P, p)
  Eigen::Vector2d omega_bo;
};

CmGaussians cm_gaussians(const ModelParams& p) {
  const NormalModes m = normal_modes(p);
  const BOModes bm = bo_modes(p);
  CmGaussians g;
  g.O << m.cos_theta, m.sin_theta, -m.sin_theta, m.cos_theta;
  g.omega << std::sqrt(m.beta1), std::sqrt(m.beta2);
  g.W << 1.0, 0.0, -bm.delta, 1.0;
  g.omega_bo << std::sqrt(bm.beta_n_cm), std::sqrt(bm.beta_e_cm);
  return g;
}

}  // namespace

double overlap_ground(const ModelParams& p) {
  const CmGaussians g = cm_gaussians(p);
  // whiten the exact Gaussian; the BO quadratic form becomes S, and
  // Theta^2 = 4 sqrt(det S) / det(1 + S) with det(1 + S) = 1 + tr S + det S
  const Eigen::Matrix2d G = g.W * g.O.transpose() * g.omega.cwiseSqrt().cwiseInverse().asDiagonal();
  const Eigen::Matrix2d S = G.transpose() * g.omega_bo.asDiagonal() * G;
  const double det_s = (g.omega_bo(0) * g.omega_bo(1)) / (g.omega(0) * g.omega(1));
  const double theta2 = 4.0 * std::sqrt(det_s) / (1.0 + S.trace() + det_s);
  return std::min(1.0, std::sqrt(theta2));
}

double overlap_ground_quadrature(const ModelParams& p) {
  const CmGaussians g = cm_gaussians(p);
  const Eigen::Matrix2d Q = g.O.transpose() * g.omega.asDiagonal() * g.O + g.W.transpose() * g.omega_bo.asDiagonal() * g.W;
  auto f = [&](const VectorXd& y) {
    const Eigen::Vector2d u = g.O * y, v = g.W * y;
    return oscillator_function(0, g.omega(0) * g.omega(0), u(0)) * oscillator_function(0, g.omega(1) * g.omega(1), u(1)) *
           oscillator_function(0, g.omega_bo(0) * g.omega_bo(0), v(0)) *
           oscillator_function(0, g.omega_bo(1) * g.omega_bo(1), v(1));
  };
  QuadratureOptions opt;
  opt.tol = 1e-13;
  return quadrature_oracle<double>(f, QuadratureFrame<double>::from_precision(Q, VectorXd::Zero(2)), opt).value;
}

H2PlusApprox h2plus_entanglement_approx(const ModelParams& p) {
  if (p.n_nuclei != 2 || p.n_electrons != 1)
    throw InvalidParameters("the H2+ closed form needs two nuclei and one electron");
  if (!(p.tau_ne > 0.0)) throw InvalidParameters("the H2+ closed form needs tau_ne > 0");
  const double M = p.mass_ratio, t = p.tau_ne;
  H2PlusApprox out;
  out.epsilon = 1.0 - std::sqrt(2.0 + 4.0 * t) * std::pow(M + 3.0 * M * t, 0.25) / (2.0 * t);
  out.in_regime = M >= 10.0 && t >= 100.0 * M;
  return out;
}

ValidityReport validity_report(const ModelParams& p) {
  ValidityReport r;
  r.gamma = p.mass_ratio * p.n_nuclei / p.n_electrons;
  r.complementary = r.gamma < 1.0;
  const EntanglementResult exact = purity(p, QuantumNumbers::ground(p), Bipartition::NucleiVsElectrons);
  const ModelParams q = r.complementary ? p.swapped_species() : p;
  const EntanglementResult bo = bo_purity(q, Bipartition::NucleiVsElectrons);
  r.theta_gs = overlap_ground(q);
  r.purity_exact = exact.purity;
  r.purity_bo = bo.purity;
  r.epsilon_exact = exact.linear_entropy;
  r.epsilon_bo = bo.linear_entropy;
  if (r.epsilon_exact < 1e-14 && r.epsilon_bo < 1e-14)
    r.relative_error = 0.0;
  else
    r.relative_error = std::abs(r.epsilon_exact - r.epsilon_bo) / r.epsilon_exact;
  r.purity_relative_error = std::abs(r.purity_exact - r.purity_bo) / r.purity_exact;
  return r;
}

}  // namespace harmonium
