#include <cmath>

#include "doctest.h"
#include "harmonium/entanglement.hpp"
#include "harmonium/repro.hpp"

using namespace harmonium;

namespace {

constexpr auto NvE = Bipartition::NucleiVsElectrons;
constexpr auto OneN = Bipartition::OneNucleusVsRest;
constexpr auto OneE = Bipartition::OneElectronVsRest;

QuantumNumbers qn(const ModelParams& p, const std::string& s) { return QuantumNumbers::parse(s, p); }

double eps(const ModelParams& p, Bipartition b, const std::string& s = "") {
  return linear_entropy(p, s.empty() ? QuantumNumbers::ground(p) : qn(p, s), b);
}

}  // namespace

TEST_CASE("purity against an independent grid-SVD computation") {
  // Wavefunction tabulated on a 90^3 grid from a numerical eigendecomposition of the
  // Hamiltonian Hessian, purity from the singular values of the reshaped amplitude.
  struct Case {
    ModelParams p;
    std::string state;
    Bipartition b;
    double purity;
  };
  const Case cases[] = {
      {ModelParams(1, 2, 1, 1), "0,0,0", NvE, 0.948683298050513},
      {ModelParams(1, 2, 2, 1, 0.5), "0,0,0", NvE, 0.948417068916234},
      {ModelParams(1, 2, 2, 1, 0.5), "1,0,0", NvE, 0.519347113777169},
      {ModelParams(1, 2, 2, 1, 0.5), "1,0,1", OneE, 0.375800719135144},
      {ModelParams(1, 2, 2, 1, 0.5), "1,1,1", OneE, 0.314248817410638},
      {ModelParams(2, 1, 3, 2, 0, 0.5), "0,0,0", OneN, 0.936587970772594},
  };
  for (const auto& c : cases) {
    CHECK(purity(c.p, qn(c.p, c.state), c.b).purity == doctest::Approx(c.purity).epsilon(1e-12));
  }
  // the equal-mass three-particle ground state has purity 3/sqrt(10)
  CHECK(purity(ModelParams(1, 2, 1, 1), qn(ModelParams(1, 2, 1, 1), "0,0,0"), NvE).purity ==
        doctest::Approx(3 / std::sqrt(10.0)).epsilon(1e-14));
}

TEST_CASE("trivial and benchmark values") {
  const ModelParams free(2, 3, 4, 0, 1, 1);
  const EntanglementResult r = purity(free, QuantumNumbers::ground(free), NvE);
  CHECK(r.purity == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(r.linear_entropy == 0.0);

  const ModelParams h2(2, 1, 2000, 1e24);
  const EntanglementResult b = purity(h2, QuantumNumbers::ground(h2), NvE);
  CHECK(b.purity == doctest::Approx(8.802217438513939e-06).epsilon(1e-10));
  CHECK(b.purity > 8.8e-6 / 1.5);
  CHECK(b.purity < 8.8e-6 * 1.5);
  CHECK(ground_state_purity_covariance(h2, NvE).purity == doctest::Approx(b.purity).epsilon(1e-3));
}

TEST_CASE("result invariants") {
  for (double t : {0.0, 1e-6, 1.0, 1e6}) {
    const ModelParams p(2, 3, 5, t);
    for (auto b : {NvE, OneN, OneE}) {
      const EntanglementResult r = purity(p, qn(p, "1,0,1,0,1"), b);
      CHECK(r.purity > 0);
      CHECK(r.purity <= 1);
      CHECK(r.linear_entropy == 1 - r.purity);
      CHECK(r.log_purity <= 0);
    }
  }
}

TEST_CASE("analytic, closure and oracle paths agree") {
  const ModelParams p(1, 2, 1, 1);
  const EntanglementResult a = purity(p, QuantumNumbers::ground(p), NvE);
  const EntanglementResult o = purity_oracle(p, QuantumNumbers::ground(p), NvE);
  CHECK(o.method == PurityMethod::Oracle);
  CHECK(o.purity == doctest::Approx(a.purity).epsilon(1e-8));
  const ModelParams m5(1, 2, 5, 1);
  CHECK(ground_state_purity_covariance(m5, NvE).purity ==
        doctest::Approx(purity(m5, QuantumNumbers::ground(m5), NvE).purity).epsilon(1e-10));

  const ModelParams q(2, 3, 10, 1, 10, 1);
  const QuantumNumbers s = qn(q, "0,1,1,0,1");
  for (auto b : {NvE, OneN, OneE}) {
    const double ref = purity(q, s, b).purity;
    CHECK(reduced_purity(reduce_state(exact_state(q, s), b)).purity == doctest::Approx(ref).epsilon(1e-10));
    CHECK(purity_oracle(q, s, b).purity == doctest::Approx(ref).epsilon(1e-7));
  }
  // full-state nested quadrature over all particle coordinates
  const ModelParams w(1, 2, 1, 0.5);
  const QuantumNumbers e = qn(w, "1,0,1");
  CHECK(state_purity_oracle(exact_state(w, e), OneE).purity == doctest::Approx(purity(w, e, OneE).purity).epsilon(1e-8));
}

TEST_CASE("gaussian covariance purity") {
  // single uncoupled mode: pure
  MatrixXd Q(1, 1);
  Q << 2.0;
  CHECK(gaussian_state_purity(Q, Q.inverse(), {0}).purity == doctest::Approx(1.0));
  // product of two modes is separable
  MatrixXd D = Eigen::Vector2d(1.0, 3.0).asDiagonal();
  CHECK(gaussian_state_purity(D, D.inverse(), {1}).purity == doctest::Approx(1.0));
}

TEST_CASE("dependence table: couplings and quanta that cannot matter") {
  const ModelParams p(2, 3, 4, 1.5, 0.6, 0.8);
  const std::string s = "1,1,1,0,1";
  const double e = eps(p, NvE, s);
  CHECK(std::abs(eps(p.with_tau_ee(2.7), NvE, s) - e) < 1e-12);
  CHECK(std::abs(eps(p.with_tau_nn(0.1), NvE, s) - e) < 1e-12);
  CHECK(std::abs(eps(p, NvE, "1,1,2,3,0") - e) < 1e-12);  // Jacobi quanta do not mix species

  const double en = eps(p, OneN, s);
  CHECK(std::abs(eps(p.with_tau_ee(2.7), OneN, s) - en) < 1e-12);
  CHECK(std::abs(eps(p, OneN, "1,1,1,2,0") - en) < 1e-12);  // electronic quanta
  CHECK(std::abs(eps(p.with_tau_nn(2.0), OneN, s) - en) > 1e-6);

  const double ee = eps(p, OneE, s);
  CHECK(std::abs(eps(p.with_tau_nn(2.7), OneE, s) - ee) < 1e-12);
  CHECK(std::abs(eps(p, OneE, "1,1,3,2,1") - ee) < 1e-12);  // nuclear and inner electronic quanta
  CHECK(std::abs(eps(p.with_tau_ee(2.0), OneE, s) - ee) > 1e-6);
}

TEST_CASE("species swap symmetry") {
  for (int nn : {1, 2, 3})
    for (int ne : {1, 4})
      for (double M : {0.2, 3.0}) {
        const ModelParams p(nn, ne, M, 2.0);
        CHECK(eps(p, NvE) == doctest::Approx(eps(p.swapped_species(), NvE)).epsilon(1e-10));
      }
}

TEST_CASE("three-particle degeneracy limit") {
  const ModelParams p(1, 2, 1, 1e-8);
  const double a = eps(p, NvE, "1,0,0"), b = eps(p, NvE, "0,1,0");
  CHECK(a > 0.01);
  CHECK(std::abs(a - b) < 1e-4);
  CHECK(eps(p, NvE) < 1e-6);
  // the limit is reached smoothly
  const ModelParams q(1, 2, 1, 1e-5);
  CHECK(eps(q, NvE, "1,0,0") == doctest::Approx(a).epsilon(1e-3));
}

TEST_CASE("ground-state entanglement grows with the coupling") {
  for (double M : {0.1, 1.0, 10.0}) {
    double prev = -1;
    for (double t : log_grid(1e-4, 1e3, 50)) {
      const double e = eps(ModelParams(1, 2, M, t), NvE);
      CHECK(e >= prev - 1e-14);
      prev = e;
    }
  }
}

TEST_CASE("kinematic fade at large mass ratio") {
  const MassMaximum mm = argmax_mass_ratio(ModelParams(1, 2, 1, 10), 10);
  double prev = 1;
  for (double M : log_grid(mm.mass_ratio * 1.01, 1e8, 40)) {
    const double e = eps(ModelParams(1, 2, M, 10), NvE);
    CHECK(e <= prev + 1e-14);
    prev = e;
  }
  CHECK(prev < 1e-3);
}

TEST_CASE("equal-mass single-particle closed form") {
  CHECK(epsilon_equal_mass(ModelParams(2, 2, 1, 0, 0, 0)).epsilon == doctest::Approx(0.0).scale(1));
  const ModelParams p(2, 2, 1, 1, 1, 1);
  CHECK(epsilon_equal_mass(p).epsilon == doctest::Approx(0.0585).epsilon(1e-3));
  CHECK(eps(p, OneE) == doctest::Approx(epsilon_equal_mass(p).epsilon).epsilon(1e-8));
  const ModelParams q(3, 2, 1, 2, 2, 2);
  const double e1 = epsilon_equal_mass(q).epsilon;
  CHECK(eps(q, OneN) == doctest::Approx(e1).epsilon(1e-8));
  CHECK(eps(q, OneE) == doctest::Approx(e1).epsilon(1e-8));
  CHECK_THROWS_AS(epsilon_equal_mass(ModelParams(2, 2, 2, 1, 1, 1)), InvalidParameters);
}

TEST_CASE("heavier species is the more entangled one at equal couplings") {
  // stated without proof for M > 1, tau >= 1; checked empirically on a grid
  for (int nn : {2, 3, 5})
    for (int ne : {2, 3, 5})
      for (double M : {2.0, 10.0, 100.0})
        for (double t : {1.0, 10.0}) {
          const ModelParams p(nn, ne, M, t, t, t);
          CHECK(eps(p, OneN) > eps(p, OneE));
        }
}

TEST_CASE("mass ratio maximizing the ground-state entanglement") {
  for (double t : {0.1, 1.0, 10.0}) CHECK(argmax_mass_ratio(ModelParams(2, 2, 1, t), t).mass_ratio == doctest::Approx(1.0).epsilon(1e-3));
  CHECK(argmax_mass_ratio(ModelParams(2, 10, 1, 1e4), 1e4).mass_ratio == doctest::Approx(5.0).epsilon(0.02));
  const double m = argmax_mass_ratio(ModelParams(2, 4, 1, 0.1), 0.1).mass_ratio;
  CHECK(m > 1.0);
  CHECK(m < 2.0);
  const MassMaximum three = argmax_mass_ratio(ModelParams(1, 2, 1, 100), 100);
  CHECK(three.unimodal);
  CHECK(three.mass_ratio > 1.8);
  CHECK(three.mass_ratio < 2.2);
}
