#include <algorithm>
#include <cmath>
#include <random>

#include "doctest.h"
#include "harmonium/eigenstates.hpp"
#include "harmonium/hermite.hpp"

using namespace harmonium;

namespace {

std::vector<ModelParams> small_systems() {
  return {ModelParams(1, 1, 1, 0.5), ModelParams(1, 2, 2, 1), ModelParams(2, 1, 0.1, 10, 0, 1),
          ModelParams(2, 2, 10, 1, 1, 0), ModelParams(1, 3, 0.5, 2, 0.3, 0)};
}

std::vector<std::string> names(const std::vector<ModeId>& ids) {
  std::vector<std::string> s;
  for (const auto& i : ids) s.push_back(i.name());
  std::sort(s.begin(), s.end());
  return s;
}

}  // namespace

TEST_CASE("bipartition names") {
  CHECK(parse_bipartition("nuclei-electrons") == Bipartition::NucleiVsElectrons);
  CHECK(parse_bipartition("one-nucleus") == Bipartition::OneNucleusVsRest);
  CHECK(to_string(Bipartition::OneElectronVsRest) == "one-electron");
  CHECK_THROWS_AS(parse_bipartition("halves"), InvalidParameters);
}

TEST_CASE("states are orthonormal") {
  for (const auto& p : small_systems()) {
    const auto qs = enumerate_states(p, 2);
    std::vector<StateRep> states;
    for (const auto& q : qs) states.push_back(exact_state(p, q));
    for (std::size_t i = 0; i < states.size(); ++i)
      for (std::size_t j = i; j < states.size(); ++j)
        CHECK(overlap(states[i], states[j]) == doctest::Approx(i == j ? 1.0 : 0.0).epsilon(1e-10).scale(1));
  }
}

TEST_CASE("energy expectation equals the eigenenergy") {
  for (const auto& p : small_systems())
    for (const auto& q : enumerate_states(p, 2)) {
      const StateRep s = exact_state(p, q);
      CHECK(energy_expectation(s) == doctest::Approx(eigenenergy(p, q)).epsilon(1e-8));
    }
  const ModelParams scaled(1, 2, 2, 1, 0, 0, 4.0, 0.25);
  const QuantumNumbers q = QuantumNumbers::parse("1,0,1", scaled);
  CHECK(energy_expectation(exact_state(scaled, q)) == doctest::Approx(eigenenergy(scaled, q)).epsilon(1e-8));
}

TEST_CASE("expanded polynomial structure") {
  const ModelParams p(1, 2, 2, 1);
  CHECK(to_polygaussian(exact_state(p, QuantumNumbers::ground(p))).poly.degree() == 0);
  const PolyGaussian<double> e1 = to_polygaussian(exact_state(p, QuantumNumbers::parse("0,0,1", p)));
  CHECK(e1.poly.degree() == 1);
  // degree one in r1 = (x1 - x2)/sqrt2: odd under electron exchange, zero on x1 = x2
  VectorXd a(3), b(3);
  a << 0.3, 0.8, -0.4;
  b << 0.3, -0.4, 0.8;
  CHECK(e1.poly.evaluate(a) == doctest::Approx(-e1.poly.evaluate(b)).epsilon(1e-13));
  a << 0.3, 0.5, 0.5;
  CHECK(std::abs(e1.poly.evaluate(a)) < 1e-13);
}

TEST_CASE("factored and expanded forms agree pointwise") {
  std::mt19937 rng(11);
  std::normal_distribution<double> n(0.0, 0.8);
  const ModelParams p(1, 2, 2, 1);
  for (const std::string st : {"0,0,0", "1,0,0", "0,2,1"}) {
    const StateRep s = exact_state(p, QuantumNumbers::parse(st, p));
    const PolyGaussian<double> pg = to_polygaussian(s);
    const MatrixXd W = s.rows();
    for (int k = 0; k < 10; ++k) {
      VectorXd x(3);
      for (int i = 0; i < 3; ++i) x(i) = n(rng);
      // direct product of oscillator functions in dilated coordinates
      const VectorXd y = s.dilation.cwiseProduct(x);
      double direct = std::exp(s.log_prefactor());
      for (std::size_t f = 0; f < s.factors.size(); ++f)
        direct *= oscillator_function(s.factors[f].quanta, s.factors[f].beta, W.row(static_cast<Eigen::Index>(f)).dot(y));
      CHECK(evaluate_wavefunction(s, x) == doctest::Approx(direct).epsilon(1e-12).scale(1e-12));
      CHECK(pg.evaluate(x) == doctest::Approx(direct).epsilon(1e-12).scale(1e-12));
    }
  }
}

TEST_CASE("wavefunction shape") {
  const ModelParams p(1, 2, 3, 0.7);
  const StateRep g = exact_state(p, QuantumNumbers::ground(p));
  const double peak = evaluate_wavefunction(g, VectorXd::Zero(3));
  CHECK(peak > 0);
  VectorXd x(3);
  x << 0.2, -0.3, 0.6;
  CHECK(evaluate_wavefunction(g, x) < peak);
  VectorXd swapped(3);
  swapped << 0.2, 0.6, -0.3;
  CHECK(evaluate_wavefunction(g, swapped) == doctest::Approx(evaluate_wavefunction(g, x)).epsilon(1e-14));

  // |100> vanishes on the U1 = 0 surface
  const StateRep u = exact_state(p, QuantumNumbers::parse("1,0,0", p));
  const CoordinateMap c = coordinate_map(p);
  VectorXd w = c.T.row(c.row_u1()).transpose();
  VectorXd y(3);
  y << 0.4, -0.9, 0.35;
  y -= w * w.dot(y);
  CHECK(std::abs(evaluate_wavefunction(u, y.cwiseQuotient(u.dilation))) < 1e-14);
}

TEST_CASE("mixing support follows the dependence table") {
  const ModelParams p(2, 2, 3, 1, 0.5, 0.5);
  const StateRep s = exact_state(p, QuantumNumbers::ground(p));
  CHECK(names(mixing_support(s, Bipartition::NucleiVsElectrons)) == std::vector<std::string>{"U1", "U2"});
  CHECK(names(mixing_support(s, Bipartition::OneElectronVsRest)) == std::vector<std::string>{"U1", "U2", "r1"});
  CHECK(names(mixing_support(s, Bipartition::OneNucleusVsRest)) == std::vector<std::string>{"R1", "U1", "U2"});
  const ModelParams one(1, 3, 3, 1);
  CHECK(names(mixing_support(exact_state(one, QuantumNumbers::ground(one)), Bipartition::OneNucleusVsRest)) ==
        std::vector<std::string>{"U1", "U2"});
}

TEST_CASE("subsystem columns pick the last particle of a species") {
  const ModelParams p(3, 2, 1, 1);
  CHECK(subsystem_columns(p, Bipartition::NucleiVsElectrons) == std::vector<int>{0, 1, 2});
  CHECK(subsystem_columns(p, Bipartition::OneNucleusVsRest) == std::vector<int>{2});
  CHECK(subsystem_columns(p, Bipartition::OneElectronVsRest) == std::vector<int>{4});
}
