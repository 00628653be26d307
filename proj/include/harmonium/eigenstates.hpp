#pragma once

#include <optional>
#include <string>
#include <vector>

#include "harmonium/gaussian.hpp"
#include "harmonium/model.hpp"

namespace harmonium {

enum class Bipartition { NucleiVsElectrons, OneNucleusVsRest, OneElectronVsRest };

std::string to_string(Bipartition b);
/// Accepts "nuclei-electrons", "one-nucleus", "one-electron".
Bipartition parse_bipartition(const std::string& s);

/// Particle columns on the singled-out side. The single-particle splits always take the last
/// particle of the species, which the Jacobi chains place last.
std::vector<int> subsystem_columns(const ModelParams& p, Bipartition b);

enum class ModeKind { NuclearJacobi, ElectronicJacobi, U1, U2, NuclearCM, ElectronicCM };

struct ModeId {
  ModeKind kind = ModeKind::U1;
  int index = 0;  // Jacobi index (1-based as in R_j / r_j); 0 for collective modes

  std::string name() const;
  bool operator==(const ModeId&) const = default;
  auto operator<=>(const ModeId&) const = default;
};

/// One oscillator factor Phi_quanta^beta(row . D x) of a product state.
struct ModeFactor {
  ModeId id;
  VectorXd row;  // over dilated particle coordinates
  double beta = 1;
  int quanta = 0;
  std::vector<bool> support;  // particles the mode involves structurally
};

/// A product of oscillator factors over linear forms of the dilated coordinates,
/// Psi(x) = M^{N_n/4} sqrt|det W| prod_s Phi_s(W_s . D x). Exact states have orthogonal W.
struct StateRep {
  ModelParams params;
  std::optional<QuantumNumbers> qnums;  // set for exact eigenstates
  std::optional<CoordinateMap> map;
  std::optional<NormalModes> modes;
  std::vector<ModeFactor> factors;
  VectorXd dilation;
  double log_det_w = 0;  // log |det W|

  int dim() const { return static_cast<int>(dilation.size()); }
  MatrixXd rows() const;
  VectorXd betas() const;
  std::vector<int> quanta() const;
  int total_quanta() const;

  /// log of the constant in front of the factor product.
  double log_prefactor() const;
};

inline constexpr int kMaxExpandedParticles = 16;

StateRep exact_state(const ModelParams& p, const QuantumNumbers& q);

/// Amplitude at physical particle coordinates (nuclei then electrons).
double evaluate_wavefunction(const StateRep& s, const VectorXd& coords);

/// The state expanded into one PolyGaussian over physical coordinates (N <= 16).
PolyGaussian<double> to_polygaussian(const StateRep& s);

/// <a|b> via the Gaussian engine.
double overlap(const StateRep& a, const StateRep& b);

/// <Psi|H|Psi> via the Gaussian engine, in units sqrt(k/m_e) (N <= 16).
double energy_expectation(const StateRep& s);

/// Modes whose support crosses the bipartition.
std::vector<ModeId> mixing_support(const StateRep& s, Bipartition b);

}  // namespace harmonium
