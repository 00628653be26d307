#pragma once

#include <string>
#include <vector>

#include "harmonium/eigenstates.hpp"
#include "harmonium/model.hpp"
#include "harmonium/quadrature.hpp"

namespace harmonium {

enum class PurityMethod { Analytic, CovarianceFastPath, Oracle };
std::string to_string(PurityMethod m);

struct EntanglementResult {
  double purity = 1;
  double linear_entropy = 0;
  double log_purity = 0;
  PurityMethod method = PurityMethod::Analytic;
  double oracle_error = 0;  // quadrature change at the last order (oracle only)

  static EntanglementResult from_log(double log_purity, PurityMethod m);
};

/// A product state restricted to the coordinates its mixing modes span.
/// Coordinates are ordered with the dim_a subsystem coordinates first.
/// Factor s is Phi_{quanta[s]}^{beta[s]}(W.row(s) . y).
struct ReducedProblem {
  int dim_a = 0;
  MatrixXd W;
  VectorXd beta;
  std::vector<int> quanta;

  int dim() const { return static_cast<int>(W.rows()); }
  int dim_b() const { return dim() - dim_a; }
};

/// Closed-form reduction of an exact eigenstate.
ReducedProblem reduced_exact(const ModelParams& p, const QuantumNumbers& q, Bipartition b);

/// Numerical reduction of any product state: the smallest coordinate subspace, aligned
/// with the bipartition, that carries every factor touching both sides.
ReducedProblem reduce_state(const StateRep& s, Bipartition b, double tol = 1e-10);

/// Tr rho_A^2 of a reduced problem with the Wick engine.
EntanglementResult reduced_purity(const ReducedProblem& r);

struct OracleOptions {
  double tol = 1e-11;
  int min_order = 6;
  int max_order = 80;
};

/// Tr rho_A^2 by nested Gauss-Hermite (inner rho_A, outer Tr rho_A^2), no Wick algebra.
EntanglementResult reduced_purity_oracle(const ReducedProblem& r, const OracleOptions& opt = {});

/// The same nested quadrature applied to the unreduced state over all particle coordinates.
EntanglementResult state_purity_oracle(const StateRep& s, Bipartition b, const OracleOptions& opt = {});

EntanglementResult purity(const ModelParams& p, const QuantumNumbers& q, Bipartition b);
double linear_entropy(const ModelParams& p, const QuantumNumbers& q, Bipartition b);
EntanglementResult purity_oracle(const ModelParams& p, const QuantumNumbers& q, Bipartition b,
                                 const OracleOptions& opt = {});

/// Purity of a real Gaussian state exp(-1/2 y^T Q y) for subsystem `a`, given Q and Q^{-1}.
EntanglementResult gaussian_state_purity(const MatrixXd& Q, const MatrixXd& Q_inv, const std::vector<int>& a);

/// Ground-state purity from the position/momentum covariance in particle coordinates.
EntanglementResult ground_state_purity_covariance(const ModelParams& p, Bipartition b);

struct EqualMassEpsilon {
  double epsilon = 0;
  bool in_regime = true;  // tau >= 1
};

/// Single-particle linear entropy at M = 1 with all couplings equal.
EqualMassEpsilon epsilon_equal_mass(const ModelParams& p);

struct MassSearch {
  double m_min = 1e-3;
  double m_max = 1e3;
  double rel_tol = 1e-4;
  int grid_points = 61;
};

struct MassMaximum {
  double mass_ratio = 1;
  double epsilon = 0;
  bool unimodal = true;  // false when the scan found several local maxima
};

/// Ground-state nuclei-electrons maximizer of epsilon over M at fixed counts and couplings.
MassMaximum argmax_mass_ratio(const ModelParams& templ, double tau_ne, const MassSearch& search = {});

}  // namespace harmonium
