#include "harmonium/model.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>

namespace harmonium {

namespace {

bool finite_nonneg(double v) { return std::isfinite(v) && v >= 0.0; }
bool finite_pos(double v) { return std::isfinite(v) && v > 0.0; }

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(17);
  os << v;
  return os.str();
}

}  // namespace

ModelParams::ModelParams(int nn, int ne, double M, double t_ne, double t_ee, double t_nn, double k_, double me)
    : n_nuclei(nn), n_electrons(ne), mass_ratio(M), tau_ne(t_ne), tau_ee(t_ee), tau_nn(t_nn), k(k_), m_e(me) {
  validate();
}

void ModelParams::validate() const {
  if (n_nuclei < 1) throw InvalidParameters("n_nuclei must be >= 1, got " + std::to_string(n_nuclei));
  if (n_electrons < 1) throw InvalidParameters("n_electrons must be >= 1, got " + std::to_string(n_electrons));
  if (!finite_pos(mass_ratio)) throw InvalidParameters("mass ratio must be positive and finite, got " + fmt(mass_ratio));
  if (!finite_nonneg(tau_ne)) throw InvalidParameters("tau_ne must be non-negative and finite, got " + fmt(tau_ne));
  if (!finite_nonneg(tau_ee)) throw InvalidParameters("tau_ee must be non-negative and finite, got " + fmt(tau_ee));
  if (!finite_nonneg(tau_nn)) throw InvalidParameters("tau_nn must be non-negative and finite, got " + fmt(tau_nn));
  if (!finite_pos(k)) throw InvalidParameters("confinement k must be positive, got " + fmt(k));
  if (!finite_pos(m_e)) throw InvalidParameters("electron mass must be positive, got " + fmt(m_e));
}

ModelParams ModelParams::with_mass_ratio(double M) const {
  ModelParams p = *this;
  p.mass_ratio = M;
  p.validate();
  return p;
}

ModelParams ModelParams::with_tau_ne(double t) const {
  ModelParams p = *this;
  p.tau_ne = t;
  p.validate();
  return p;
}

ModelParams ModelParams::with_tau_ee(double t) const {
  ModelParams p = *this;
  p.tau_ee = t;
  p.validate();
  return p;
}

ModelParams ModelParams::with_tau_nn(double t) const {
  ModelParams p = *this;
  p.tau_nn = t;
  p.validate();
  return p;
}

ModelParams ModelParams::with_counts(int nn, int ne) const {
  ModelParams p = *this;
  p.n_nuclei = nn;
  p.n_electrons = ne;
  p.validate();
  return p;
}

ModelParams ModelParams::swapped_species() const {
  ModelParams p = *this;
  std::swap(p.n_nuclei, p.n_electrons);
  std::swap(p.tau_ee, p.tau_nn);
  p.mass_ratio = 1.0 / mass_ratio;
  p.validate();
  return p;
}

std::string ModelParams::to_string() const {
  std::ostringstream os;
  os.precision(17);
  os << "nn=" << n_nuclei << " ne=" << n_electrons << " mass_ratio=" << mass_ratio << " tau_ne=" << tau_ne
     << " tau_ee=" << tau_ee << " tau_nn=" << tau_nn << " k=" << k << " me=" << m_e;
  return os.str();
}

QuantumNumbers QuantumNumbers::ground(const ModelParams& p) {
  QuantumNumbers q;
  q.nuclear.assign(static_cast<std::size_t>(p.n_nuclei - 1), 0);
  q.electronic.assign(static_cast<std::size_t>(p.n_electrons - 1), 0);
  return q;
}

QuantumNumbers QuantumNumbers::parse(const std::string& text, const ModelParams& p) {
  std::vector<int> v;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    std::size_t used = 0;
    int x = 0;
    try {
      x = std::stoi(item, &used);
    } catch (const std::exception&) {
      throw InvalidParameters("quantum number '" + item + "' is not an integer");
    }
    if (used != item.size() && item.find_first_not_of(" \t", used) != std::string::npos)
      throw InvalidParameters("quantum number '" + item + "' is not an integer");
    v.push_back(x);
  }
  const std::size_t expected = static_cast<std::size_t>(p.n_nuclei + p.n_electrons);
  if (v.size() != expected)
    throw InvalidParameters("state '" + text + "' has " + std::to_string(v.size()) + " entries, expected " +
                            std::to_string(expected) + " (u1,u2, " + std::to_string(p.n_nuclei - 1) +
                            " nuclear, " + std::to_string(p.n_electrons - 1) + " electronic)");
  QuantumNumbers q;
  q.u1 = v[0];
  q.u2 = v[1];
  q.nuclear.assign(v.begin() + 2, v.begin() + 2 + (p.n_nuclei - 1));
  q.electronic.assign(v.begin() + 2 + (p.n_nuclei - 1), v.end());
  q.validate(p);
  return q;
}

void QuantumNumbers::validate(const ModelParams& p) const {
  if (nuclear.size() != static_cast<std::size_t>(p.n_nuclei - 1))
    throw InvalidParameters("expected " + std::to_string(p.n_nuclei - 1) + " nuclear quanta, got " +
                            std::to_string(nuclear.size()));
  if (electronic.size() != static_cast<std::size_t>(p.n_electrons - 1))
    throw InvalidParameters("expected " + std::to_string(p.n_electrons - 1) + " electronic quanta, got " +
                            std::to_string(electronic.size()));
  auto bad = [](int x) { return x < 0 || x > 64; };
  if (bad(u1) || bad(u2) || std::any_of(nuclear.begin(), nuclear.end(), bad) ||
      std::any_of(electronic.begin(), electronic.end(), bad))
    throw InvalidParameters("quantum numbers must lie in [0, 64]");
}

int QuantumNumbers::total() const {
  return u1 + u2 + std::accumulate(nuclear.begin(), nuclear.end(), 0) +
         std::accumulate(electronic.begin(), electronic.end(), 0);
}

std::string QuantumNumbers::to_string() const {
  std::ostringstream os;
  os << u1 << ',' << u2;
  for (int n : nuclear) os << ',' << n;
  for (int e : electronic) os << ',' << e;
  return os.str();
}

NormalModes normal_modes(const ModelParams& p) {
  p.validate();
  const double Nn = p.n_nuclei, Ne = p.n_electrons, M = p.mass_ratio, t = p.tau_ne;
  const double sM = std::sqrt(M);
  NormalModes m;
  m.beta_n = (1.0 + Ne * t + Nn * p.tau_nn) / M;
  m.beta_e = 1.0 + Nn * t + Ne * p.tau_ee;
  m.lambda_n = 1.0 + t * Ne + p.tau_nn * (Nn - 1.0);
  m.lambda_e = 1.0 + t * Nn + p.tau_ee * (Ne - 1.0);

  // a and b multiplied by tau, finite in the decoupled limit
  const double at = ((M - 1.0) + t * (M * Nn - Ne)) / (2.0 * sM * Nn);
  const double bt = std::hypot(at, t * std::sqrt(Ne / Nn));
  const double det = (1.0 + (Nn + Ne) * t) / M;
  m.beta2 = (1.0 + M + Ne * t + Nn * M * t) / (2.0 * M) + Nn * bt / sM;
  m.beta1 = det / m.beta2;

  if (t > 1e-300) {
    m.a = at / t;
    m.b = bt / t;
  } else if (M == 1.0) {
    m.a = (Nn - Ne) / (2.0 * Nn);
    m.b = std::sqrt(m.a * m.a + Ne / Nn);
  } else {
    const double inf = std::numeric_limits<double>::infinity();
    m.a = M > 1.0 ? inf : -inf;
    m.b = inf;
  }

  double c = 0, s = 0;
  if (bt == 0.0) {
    m.degenerate = true;
    c = std::sqrt(Nn);
    s = std::sqrt(Ne);
  } else if (at >= 0.0) {
    c = std::sqrt(Nn) * (at + bt);
    s = std::sqrt(Ne) * t;
  } else {
    // a + b = (Ne/Nn) / (b - a), rewritten to avoid cancellation
    c = std::sqrt(Nn) * (Ne / Nn) * t / (bt - at);
    s = std::sqrt(Ne);
  }
  const double r = std::hypot(c, s);
  m.cos_theta = c / r;
  m.sin_theta = s / r;

  for (double beta : {m.beta1, m.beta2, m.beta_n, m.beta_e})
    if (!(beta > 0.0) || !std::isfinite(beta))
      throw InvalidParameters("non-positive squared frequency: Hamiltonian unbounded for " + p.to_string());
  return m;
}

MatrixXd build_interaction_matrix(const ModelParams& p) {
  p.validate();
  const int Nn = p.n_nuclei, Ne = p.n_electrons, N = Nn + Ne;
  if (N > kMaxDenseParticles)
    throw InvalidParameters("interaction matrix limited to " + std::to_string(kMaxDenseParticles) + " particles");
  const double M = p.mass_ratio;
  MatrixXd A = MatrixXd::Zero(N, N);
  for (int i = 0; i < Nn; ++i)
    for (int j = 0; j < Nn; ++j)
      A(i, j) = i == j ? (1.0 + Ne * p.tau_ne + (Nn - 1) * p.tau_nn) / M : -p.tau_nn / M;
  for (int i = 0; i < Ne; ++i)
    for (int j = 0; j < Ne; ++j)
      A(Nn + i, Nn + j) = i == j ? 1.0 + Nn * p.tau_ne + (Ne - 1) * p.tau_ee : -p.tau_ee;
  const double cross = -p.tau_ne / std::sqrt(M);
  A.topRightCorner(Nn, Ne).setConstant(cross);
  A.bottomLeftCorner(Ne, Nn).setConstant(cross);
  Eigen::LLT<MatrixXd> llt(A);
  if (llt.info() != Eigen::Success)
    throw InvalidParameters("interaction matrix not positive definite for " + p.to_string());
  return A;
}

MatrixXd jacobi_rows(int n) {
  MatrixXd J = MatrixXd::Zero(n, n);
  for (int j = 1; j < n; ++j) {
    const double norm = std::sqrt(static_cast<double>(j) * (j + 1));
    for (int k = 0; k < j; ++k) J(j - 1, k) = 1.0 / norm;
    J(j - 1, j) = -static_cast<double>(j) / norm;
  }
  J.row(n - 1).setConstant(1.0 / std::sqrt(static_cast<double>(n)));
  return J;
}

CoordinateMap coordinate_map(const ModelParams& p, int last_nucleus, int last_electron) {
  const NormalModes m = normal_modes(p);
  const int Nn = p.n_nuclei, Ne = p.n_electrons, N = Nn + Ne;
  if (N > kMaxDenseParticles)
    throw InvalidParameters("coordinate map limited to " + std::to_string(kMaxDenseParticles) + " particles");
  if (last_nucleus >= Nn || last_electron >= Ne)
    throw InvalidParameters("singled-out particle index out of range");

  CoordinateMap map;
  map.n_nuclei = Nn;
  map.n_electrons = Ne;
  map.T = MatrixXd::Zero(N, N);
  map.dilation = VectorXd::Ones(N);
  map.dilation.head(Nn).setConstant(std::sqrt(p.mass_ratio));

  auto chain = [](int n, int last) {
    std::vector<int> order(static_cast<std::size_t>(n));
    std::iota(order.begin(), order.end(), 0);
    if (last >= 0) {
      order.erase(order.begin() + last);
      order.push_back(last);
    }
    return order;
  };
  const std::vector<int> nuc = chain(Nn, last_nucleus);
  const std::vector<int> ele = chain(Ne, last_electron);
  map.particle_order = nuc;
  for (int e : ele) map.particle_order.push_back(Nn + e);

  const MatrixXd Jn = jacobi_rows(Nn), Je = jacobi_rows(Ne);
  VectorXd P = VectorXd::Zero(N), q = VectorXd::Zero(N);
  for (int k = 0; k < Nn; ++k) {
    for (int j = 0; j + 1 < Nn; ++j) map.T(map.row_nuclear_jacobi(j), nuc[k]) = Jn(j, k);
    P(nuc[k]) = Jn(Nn - 1, k);
  }
  for (int k = 0; k < Ne; ++k) {
    for (int j = 0; j + 1 < Ne; ++j) map.T(map.row_electronic_jacobi(j), Nn + ele[k]) = Je(j, k);
    q(Nn + ele[k]) = Je(Ne - 1, k);
  }
  map.T.row(map.row_u1()) = m.cos_theta * P + m.sin_theta * q;
  map.T.row(map.row_u2()) = -m.sin_theta * P + m.cos_theta * q;
  return map;
}

VectorXd mode_betas(const ModelParams& p, const NormalModes& m) {
  const int Nn = p.n_nuclei, Ne = p.n_electrons;
  VectorXd b(Nn + Ne);
  b.head(Nn - 1).setConstant(m.beta_n);
  b.segment(Nn - 1, Ne - 1).setConstant(m.beta_e);
  b(Nn + Ne - 2) = m.beta1;
  b(Nn + Ne - 1) = m.beta2;
  return b;
}

std::vector<int> mode_quanta(const QuantumNumbers& q) {
  std::vector<int> v(q.nuclear);
  v.insert(v.end(), q.electronic.begin(), q.electronic.end());
  v.push_back(q.u1);
  v.push_back(q.u2);
  return v;
}

double eigenenergy(const ModelParams& p, const QuantumNumbers& q) {
  q.validate(p);
  const NormalModes m = normal_modes(p);
  const double wn = std::sqrt(m.beta_n), we = std::sqrt(m.beta_e);
  double e = std::sqrt(m.beta1) * (q.u1 + 0.5) + std::sqrt(m.beta2) * (q.u2 + 0.5);
  // unexcited Jacobi modes contribute their zero-point energy in bulk
  double sn = 0.0, se = 0.0;
  for (int n : q.nuclear) sn += n;
  for (int x : q.electronic) se += x;
  e += wn * (sn + 0.5 * (p.n_nuclei - 1)) + we * (se + 0.5 * (p.n_electrons - 1));
  return std::sqrt(p.k / p.m_e) * e;
}

double limit_energy_tau0(const ModelParams& p, const QuantumNumbers& q) {
  if (p.n_nuclei != 1 || p.n_electrons != 2)
    throw InvalidParameters("limit_energy_tau0 is defined for one nucleus and two electrons only");
  q.validate(p);
  const double M = p.mass_ratio, e1 = q.electronic[0];
  const double e = M >= 1.0 ? 1.0 + (0.5 + q.u1) / std::sqrt(M) + q.u2 + e1
                            : 1.0 + q.u1 + (0.5 + q.u2) / std::sqrt(M) + e1;
  return std::sqrt(p.k / p.m_e) * e;
}

std::vector<QuantumNumbers> enumerate_states(const ModelParams& p, int max_quanta) {
  if (max_quanta < 0) throw InvalidParameters("max_quanta must be non-negative");
  const int modes = p.n_nuclei + p.n_electrons;
  if (modes > 64) throw InvalidParameters("state enumeration limited to 64 modes");
  std::vector<QuantumNumbers> out;
  std::vector<int> v(static_cast<std::size_t>(modes), 0);
  // order: u1, u2, nuclear..., electronic...; by total, earlier modes first
  auto emit = [&]() {
    QuantumNumbers q;
    q.u1 = v[0];
    q.u2 = v[1];
    q.nuclear.assign(v.begin() + 2, v.begin() + 2 + (p.n_nuclei - 1));
    q.electronic.assign(v.begin() + 2 + (p.n_nuclei - 1), v.end());
    out.push_back(std::move(q));
  };
  auto rec = [&](auto&& self, int pos, int left) -> void {
    if (pos == modes - 1) {
      v[static_cast<std::size_t>(pos)] = left;
      emit();
      v[static_cast<std::size_t>(pos)] = 0;
      return;
    }
    for (int k = left; k >= 0; --k) {
      v[static_cast<std::size_t>(pos)] = k;
      self(self, pos + 1, left - k);
    }
    v[static_cast<std::size_t>(pos)] = 0;
  };
  for (int total = 0; total <= max_quanta; ++total) rec(rec, 0, total);
  return out;
}

std::vector<std::vector<QuantumNumbers>> degeneracy_groups(const ModelParams& p, int max_quanta,
                                                           double energy_tol) {
  if (!(energy_tol > 0.0)) throw InvalidParameters("energy_tol must be positive");
  const bool three = p.n_nuclei == 1 && p.n_electrons == 2;
  ModelParams free = p;
  free.tau_ne = free.tau_ee = free.tau_nn = 0.0;
  const auto states = enumerate_states(p, max_quanta);
  std::vector<std::pair<double, std::size_t>> keyed;
  for (std::size_t i = 0; i < states.size(); ++i)
    keyed.emplace_back(three ? limit_energy_tau0(free, states[i]) : eigenenergy(free, states[i]), i);
  std::stable_sort(keyed.begin(), keyed.end(),
                   [](const auto& x, const auto& y) { return x.first < y.first; });
  std::vector<std::vector<QuantumNumbers>> groups;
  double anchor = 0.0;
  for (const auto& [e, i] : keyed) {
    if (groups.empty() || e - anchor > energy_tol) {
      groups.emplace_back();
      anchor = e;
    }
    groups.back().push_back(states[i]);
  }
  return groups;
}

}  // namespace harmonium
