#pragma once

#include <string>
#include <vector>

#include <Eigen/Dense>

#include "harmonium/errors.hpp"

namespace harmonium {

using Eigen::MatrixXd;
using Eigen::VectorXd;

/// Physical configuration: N_n nuclei of mass M m_e, N_e electrons of mass m_e,
/// confinement k and pairwise harmonic couplings tau (in units of k).
struct ModelParams {
  int n_nuclei = 1;
  int n_electrons = 1;
  double mass_ratio = 1.0;
  double tau_ne = 0.0;
  double tau_ee = 0.0;
  double tau_nn = 0.0;
  double k = 1.0;
  double m_e = 1.0;

  ModelParams() = default;
  ModelParams(int nn, int ne, double M, double t_ne, double t_ee = 0.0, double t_nn = 0.0, double k_ = 1.0,
              double me = 1.0);

  /// Throws InvalidParameters unless every field is in range.
  void validate() const;

  int total() const { return n_nuclei + n_electrons; }

  ModelParams with_mass_ratio(double M) const;
  ModelParams with_tau_ne(double t) const;
  ModelParams with_tau_ee(double t) const;
  ModelParams with_tau_nn(double t) const;
  ModelParams with_counts(int nn, int ne) const;

  /// Relabels electrons as nuclei: counts and tau_ee/tau_nn swap, M -> 1/M.
  /// Dimensionless quantities (entanglement, overlaps) are invariant under this map.
  ModelParams swapped_species() const;

  std::string to_string() const;
};

/// Excitation quanta: collective u1, u2, nuclear Jacobi (N_n - 1) and electronic Jacobi (N_e - 1).
struct QuantumNumbers {
  int u1 = 0;
  int u2 = 0;
  std::vector<int> nuclear;
  std::vector<int> electronic;

  static QuantumNumbers ground(const ModelParams& p);
  /// Parses "u1,u2,n_1..n_{Nn-1},e_1..e_{Ne-1}".
  static QuantumNumbers parse(const std::string& text, const ModelParams& p);

  void validate(const ModelParams& p) const;
  int total() const;
  bool is_ground() const { return total() == 0; }
  std::string to_string() const;

  bool operator==(const QuantumNumbers&) const = default;
};

struct NormalModes {
  double a = 0;  // mixing parameters; +-inf in the decoupled limit with M != 1
  double b = 0;
  double beta1 = 0;  // collective U1 (smaller) and U2 squared frequencies
  double beta2 = 0;
  double beta_n = 0;  // nuclear and electronic Jacobi modes
  double beta_e = 0;
  double lambda_n = 0;  // independent-particle frequencies
  double lambda_e = 0;
  double cos_theta = 1;  // U1 = cos P + sin p with P, p the normalized species CMs
  double sin_theta = 0;
  bool degenerate = false;  // beta1 == beta2; U rows fixed by convention
};

NormalModes normal_modes(const ModelParams& p);

/// Interaction matrix in dilated coordinates (sqrt(M) X, x), units of k.
MatrixXd build_interaction_matrix(const ModelParams& p);

/// Largest particle count for which dense N x N objects are built.
inline constexpr int kMaxDenseParticles = 512;

/// Orthogonal map from dilated particle coordinates to normal coordinates.
/// Rows: R_1..R_{Nn-1}, r_1..r_{Ne-1}, U1, U2. Columns: nuclei then electrons, in
/// `particle_order` within each species.
struct CoordinateMap {
  MatrixXd T;
  VectorXd dilation;
  std::vector<int> particle_order;
  int n_nuclei = 0;
  int n_electrons = 0;

  int row_nuclear_jacobi(int j) const { return j; }
  int row_electronic_jacobi(int j) const { return n_nuclei - 1 + j; }
  int row_u1() const { return n_nuclei + n_electrons - 2; }
  int row_u2() const { return n_nuclei + n_electrons - 1; }
};

/// `last_nucleus` / `last_electron` choose which particle ends its Jacobi chain (-1 keeps
/// natural order). Columns always stay in natural particle order.
CoordinateMap coordinate_map(const ModelParams& p, int last_nucleus = -1, int last_electron = -1);

/// Rows of the normalized Jacobi chain for n identical particles: n-1 relative rows then the CM row.
MatrixXd jacobi_rows(int n);

/// Squared frequency of every row of coordinate_map, in row order.
VectorXd mode_betas(const ModelParams& p, const NormalModes& m);

/// Quanta of every row of coordinate_map, in row order.
std::vector<int> mode_quanta(const QuantumNumbers& q);

double eigenenergy(const ModelParams& p, const QuantumNumbers& q);

/// Three-particle (N_n=1, N_e=2) energy at vanishing couplings, units sqrt(k/m_e).
double limit_energy_tau0(const ModelParams& p, const QuantumNumbers& q);

/// Every QuantumNumbers with total quanta <= max_quanta, in a fixed enumeration order.
std::vector<QuantumNumbers> enumerate_states(const ModelParams& p, int max_quanta);

/// Equal-energy classes of the decoupled spectrum, classes sorted by energy.
std::vector<std::vector<QuantumNumbers>> degeneracy_groups(const ModelParams& p, int max_quanta,
                                                           double energy_tol);

}  // namespace harmonium
