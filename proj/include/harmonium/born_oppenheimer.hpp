#pragma once

#include <vector>

#include "harmonium/eigenstates.hpp"
#include "harmonium/entanglement.hpp"
#include "harmonium/model.hpp"

namespace harmonium {

struct BOModes {
  double beta_n = 0;     // nuclear Jacobi modes
  double beta_e = 0;     // electronic Jacobi modes
  double beta_n_cm = 0;  // nuclear CM in the adiabatic potential
  double beta_e_cm = 0;  // electronic CM at frozen nuclei
  double delta = 0;      // electronic CM follows delta * nuclear CM
  double gamma = 0;      // total mass ratio M N_n / N_e
};

BOModes bo_modes(const ModelParams& p);

/// BO labels. nuclear: N_n - 1 Jacobi quanta then the CM quantum; electronic likewise.
struct BOQuantumNumbers {
  std::vector<int> nuclear;
  std::vector<int> electronic;

  static BOQuantumNumbers ground(const ModelParams& p);
  void validate(const ModelParams& p) const;
};

/// F_s(X) phi_q(X; x) as a product state over dilated coordinates (unit-determinant rows).
StateRep bo_state(const ModelParams& p, const BOQuantumNumbers& q);

/// Closed-form reduction of a BO state; the adiabatic shift makes the rows non-orthogonal.
ReducedProblem reduced_bo(const ModelParams& p, const BOQuantumNumbers& q, Bipartition b);

EntanglementResult bo_purity(const ModelParams& p, Bipartition b);
EntanglementResult bo_purity(const ModelParams& p, const BOQuantumNumbers& q, Bipartition b);

/// <exact ground | BO ground>, both taken positive; closed form on the two CM coordinates.
double overlap_ground(const ModelParams& p);

/// The same overlap by 2D Gauss-Hermite quadrature of the CM factors.
double overlap_ground_quadrature(const ModelParams& p);

struct H2PlusApprox {
  double epsilon = 0;
  bool in_regime = true;  // 1 << M << tau_ne, read as M >= 10 and tau_ne >= 100 M
};

/// Closed-form nuclei-electrons linear entropy of the two-nuclei, one-electron system with the
/// nuclear wavefunction frozen over the atom size.
H2PlusApprox h2plus_entanglement_approx(const ModelParams& p);

struct ValidityReport {
  double gamma = 0;
  bool complementary = false;  // gamma < 1: BO with the species roles swapped
  double theta_gs = 1;
  double epsilon_exact = 0;
  double epsilon_bo = 0;
  double relative_error = 0;  // |eps_exact - eps_bo| / eps_exact
  double purity_exact = 1;
  double purity_bo = 1;
  double purity_relative_error = 0;  // |P_exact - P_bo| / P_exact
};

ValidityReport validity_report(const ModelParams& p);

}  // namespace harmonium
