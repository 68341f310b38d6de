#include <cmath>
#include <numbers>

#include "doctest.h"

#include "collapse/lindblad_fock.hpp"

using namespace collapse;
using namespace collapse::fock;
using std::numbers::pi;

namespace {

// Rescaled units: a = 1, (2 pi / L)^3 = 1, lambdabar = 1, so
// c0 = lambda pi^{-3/2} and dissipator rates are O(lambda w^2).
units::CollapseParams unit_params(double lambda = 1.0) {
  units::CollapseParams p;
  p.lambda_rate = lambda;
  p.a = 1.0;
  p.lambda_bar_n = 1.0;
  return p;
}

ModeGrid line(std::initializer_list<double> kz, double M = 0.0, double L = 2.0 * pi) {
  ModeGrid g;
  for (double k : kz) g.momenta.emplace_back(0.0, 0.0, k);
  g.M = M;
  g.L = L;
  return g;
}

FockModel model_of(const ModeGrid& g, double lambda = 1.0, std::size_t n_max = 3, double hscale = 1.0) {
  FockModel m(g, unit_params(lambda), n_max);
  m.hamiltonian_scale = hscale;
  return m;
}

}  // namespace

TEST_CASE("model construction and guards") {
  CHECK_THROWS_AS(FockModel(ModeGrid{}, unit_params()), std::domain_error);
  CHECK_THROWS_AS(FockModel(line({1.0, 1.0}), unit_params()), std::domain_error);
  CHECK_THROWS_AS(FockModel(line({1, 2, 3, 4, 5, 6, 7}), unit_params(), 1), std::domain_error);
  CHECK_THROWS_AS(FockModel(line({1, 2, 3, 4, 5, 6}), unit_params(), 4), std::domain_error);
  CHECK(FockModel(line({1, 2, 3, 4, 5, 6}), unit_params(), 3).dimension() == 4096);

  const auto m = model_of(line({0.5, 1.0, 1.5}, 0.3));
  CHECK(m.dimension() == 64);
  CHECK(m.c0() == doctest::Approx(std::pow(pi, -1.5)).epsilon(1e-14));
  for (std::size_t i = 0; i < 3; ++i) {
    CHECK(m.kernel(i, i) == doctest::Approx(m.grid().omega(i)));
    for (std::size_t j = 0; j < 3; ++j) CHECK(m.kernel(i, j) == m.kernel(j, i));
  }
  CHECK(m.kernel(0, 2) == doctest::Approx(std::sqrt(m.grid().omega(0) * m.grid().omega(2)) * std::exp(-1.0)));
  // Evenly spaced modes share transfers: q = 0, +-0.5, +-1.
  CHECK(m.transfers().size() == 5);
  const auto occ = std::vector<std::size_t>{1, 3, 2};
  CHECK(m.occupations(m.index_of(occ)) == occ);
  CHECK_THROWS_AS((void)m.index_of({4, 0, 0}), std::domain_error);

  // Physical units: c0 from the box conventions.
  units::CollapseParams grw;
  FockModel phys(line({1e5, 2e5}, 0.0, 1e-3), grw, 2);
  CHECK(phys.c0() == doctest::Approx(1e-16 * std::pow(2.1e-14, 2) * std::pow(1e-10 / pi, 1.5) *
                                     std::pow(2.0 * pi / 1e-3, 3))
                         .epsilon(1e-13));
  CHECK(phys.hamiltonian_scale == units::kSpeedOfLight);
}

TEST_CASE("truncated hopping operators") {
  const auto m = model_of(line({1.0, 2.0}));
  const DenseMatrix h = DenseMatrix(m.hop(0, 1));
  // a0^dag a1 |0,2> = sqrt(2) |1,1>
  CHECK(h(m.index_of({1, 1}), m.index_of({0, 2})).real() == doctest::Approx(std::sqrt(2.0)));
  // blocked at the truncation edge
  CHECK(h.col(m.index_of({3, 1})).norm() == 0.0);
  CHECK((DenseMatrix(m.hop(1, 0)) - h.adjoint()).norm() == 0.0);
  const DenseMatrix n0 = DenseMatrix(m.hop(0, 0));
  CHECK(n0(m.index_of({3, 2}), m.index_of({3, 2})).real() == 3.0);
}

TEST_CASE("single mode: diagonal states are stationary, number coherences dephase") {
  const auto m = model_of(line({1.3}, 0.4));
  const double w = m.grid().omega(0);
  const auto diag = number_state(m, {2});
  CHECK(m.apply_dissipator(diag.rho).cwiseAbs().maxCoeff() < 1e-15);
  Eigen::VectorXcd psi = Eigen::VectorXcd::Zero(4);
  psi[0] = psi[2] = 1.0;
  const auto s = pure_state(m, psi);
  const DenseMatrix d = m.apply_dissipator(s.rho);
  CHECK(d(0, 2).real() == doctest::Approx(-0.5 * m.c0() * w * w * 4.0 * 0.5).epsilon(1e-13));
  CHECK(std::abs(d(0, 0)) < 1e-15);
}

TEST_CASE("generator preserves trace and Hermiticity") {
  const auto m = model_of(line({0.2, 0.9, 1.7}, 0.5));
  const auto d = static_cast<Eigen::Index>(m.dimension());
  const DenseMatrix mixed = DenseMatrix::Identity(d, d) / static_cast<double>(d);
  CHECK(std::abs(m.apply(mixed).trace()) < 1e-12);
  const auto c = coherent_state(m, {Complex(0.7, 0.2), Complex(-0.3, 0.5), Complex(0.4, 0.0)});
  const DenseMatrix g = m.apply(c.rho);
  CHECK(std::abs(g.trace()) < 1e-12);
  CHECK((g - g.adjoint()).cwiseAbs().maxCoeff() < 1e-13);
  // Number is conserved by every piece of the generator.
  CHECK(std::abs((m.total_number().cast<Complex>().asDiagonal() * g).trace()) < 1e-12);
}

TEST_CASE("observables of simple states") {
  const auto m = model_of(line({1.0, 2.0, 3.0}, 0.0));
  const auto v = observables(vacuum(m), m);
  CHECK(v.number == 0.0);
  CHECK(v.energy == 0.0);
  CHECK(v.top_layer == 0.0);
  const auto n = observables(number_state(m, {2, 0, 1}), m);
  CHECK(n.occupancy == std::vector<double>{2.0, 0.0, 1.0});
  CHECK(n.energy == doctest::Approx(5.0));
  CHECK(observables(number_state(m, {3, 0, 0}), m).top_layer == 1.0);
  CHECK_FALSE(observables(number_state(m, {3, 0, 0}), m).truncation_ok());

  // Thermal occupancy with the truncation pushed far out.
  const auto big = model_of(line({0.8, 1.6}, 0.0), 1.0, 40);
  const double beta = 1.7;
  const auto t = observables(thermal_state(big, beta), big);
  for (std::size_t i = 0; i < 2; ++i)
    CHECK(t.occupancy[i] == doctest::Approx(1.0 / std::expm1(beta * big.grid().omega(i))).epsilon(1e-9));
  CHECK(check_state(thermal_state(big, beta), false).trace_error < 1e-14);

  const auto c = observables(coherent_state(big, {Complex(1.2, 0.0), Complex(0.0, 0.5)}), big);
  CHECK(c.occupancy[0] == doctest::Approx(1.44).epsilon(1e-12));
  CHECK(c.occupancy[1] == doctest::Approx(0.25).epsilon(1e-12));
}

TEST_CASE("unitary limit") {
  const auto m = model_of(line({1.0, 2.5}, 0.3), 0.0);
  Eigen::VectorXcd psi = Eigen::VectorXcd::Zero(16);
  const auto a = m.index_of({1, 0}), b = m.index_of({0, 2}), c = m.index_of({2, 1});
  psi[a] = 1.0;
  psi[b] = Complex(0.0, 1.0);
  psi[c] = 0.5;
  const auto s0 = pure_state(m, psi);
  const double t = 3.7;
  const auto s1 = evolve(s0, m, t, {.steps = 50});
  CHECK((s1.rho.diagonal() - s0.rho.diagonal()).cwiseAbs().maxCoeff() < 1e-14);
  CHECK(std::abs(std::abs(s1.rho(a, b)) - std::abs(s0.rho(a, b))) < 1e-10);
  const double phase = -(m.energies()[a] - m.energies()[b]) * t;
  CHECK(std::abs(s1.rho(a, b) - s0.rho(a, b) * Complex(std::cos(phase), std::sin(phase))) < 1e-12);
  CHECK(m.dissipator_norm_bound() == 0.0);
}

TEST_CASE("Runge-Kutta splitting against exact exponentiation") {
  const auto free = model_of(line({0.4, 1.1}, 0.2), 1.0, 3, 0.0);
  const auto s0 = coherent_state(free, {Complex(0.6, 0.1), Complex(0.2, -0.4)});
  const double t = 1.5;
  const auto exact = evolve_exact(s0, free, t);
  CHECK((evolve(s0, free, t).rho - exact.rho).cwiseAbs().maxCoeff() < 1e-7);
  CHECK((evolve(s0, free, t, {.steps = 400}).rho - exact.rho).cwiseAbs().maxCoeff() < 1e-11);

  // Two modes: every jump operator shifts the energy by a fixed amount, so
  // the free evolution commutes with the dissipator and splitting is exact.
  const auto full = model_of(line({0.4, 1.1}, 0.2), 1.0, 3, 1.0);
  CHECK((evolve(s0, full, t, {.steps = 400}).rho - evolve_exact(s0, full, t).rho).cwiseAbs().maxCoeff() < 1e-11);

  // Evenly spaced massive modes share a transfer with unequal energy shifts.
  const auto lat = model_of(line({0.4, 1.1, 1.8}, 0.6), 1.0, 1, 1.0);
  const auto l0 = coherent_state(lat, {Complex(0.6, 0.1), Complex(0.2, -0.4), Complex(0.3, 0.0)});
  const auto ex = evolve_exact(l0, lat, t);
  const double e1 = (evolve(l0, lat, t, {.steps = 100}).rho - ex.rho).cwiseAbs().maxCoeff();
  const double e2 = (evolve(l0, lat, t, {.steps = 200}).rho - ex.rho).cwiseAbs().maxCoeff();
  CHECK(e2 < 1e-4);
  CHECK(e1 / e2 == doctest::Approx(4.0).epsilon(0.05));

  CHECK_THROWS_AS(build_generator(model_of(line({1, 2, 3}))), std::domain_error);
}

TEST_CASE("invariants over an O(1) span of the generator") {
  const auto m = model_of(line({0.3, 0.8, 1.2, 1.9}, 0.5));
  CHECK(m.dimension() == 256);
  const auto s0 = coherent_state(m, {Complex(0.5, 0.0), Complex(0.0, 0.3), Complex(0.2, 0.2), Complex(0.1, 0.0)});
  const double t = 1.0 / m.dissipator_norm_bound();
  const auto o0 = observables(s0, m);
  const auto s1 = evolve(s0, m, 3.0 * t);
  const auto o1 = observables(s1, m);
  const auto chk = check_state(s1);
  CHECK(std::abs(o1.trace - Complex(1.0, 0.0)) <= 1e-8);
  CHECK(std::abs(o1.number - o0.number) <= 1e-8);
  CHECK(chk.hermiticity <= 1e-12);
  CHECK(chk.min_eigenvalue >= -1e-8);
  CHECK(chk.ok());

  // A number eigenstate keeps its total number.
  const auto n0 = number_state(m, {2, 0, 1, 0});
  const auto n1 = evolve(n0, m, 3.0 * t);
  CHECK(std::abs(observables(n1, m).number - 3.0) <= 1e-10);
}

TEST_CASE("first-order occupancy changes match the discrete rates") {
  const auto m = model_of(line({0.3, 0.8, 1.2, 1.9}, 0.5));
  SUBCASE("number state") {
    const std::vector<std::size_t> occ{2, 0, 1, 0};
    const auto s0 = number_state(m, occ);
    const std::vector<double> n0(occ.begin(), occ.end());
    const auto rates = first_order_number_rates(m, n0);
    double sum = 0.0;
    for (double r : rates) sum += r;
    CHECK(std::abs(sum) < 1e-14);
    const double t = 1e-3 / m.dissipator_norm_bound();
    const auto o = observables(evolve(s0, m, t), m);
    for (std::size_t i = 0; i < 4; ++i) {
      CHECK((o.occupancy[i] - n0[i]) / t == doctest::Approx(rates[i]).epsilon(0.05));
    }
    CHECK(first_order_energy_rate(m, n0) > 0.0);
  }
  SUBCASE("two-mode coherent state, energy slope") {
    const auto two = model_of(line({0.4, 1.4}, 0.0));
    const auto s0 = coherent_state(two, {Complex(0.8, 0.0), Complex(0.3, 0.2)});
    const auto o0 = observables(s0, two);
    const double t = 1e-3 / two.dissipator_norm_bound();
    const auto o1 = observables(evolve(s0, two, t), two);
    const double rate = first_order_energy_rate(two, o0.occupancy);
    CHECK(rate > 0.0);
    CHECK((o1.energy - o0.energy) / t == doctest::Approx(rate).epsilon(0.05));
  }
}

TEST_CASE("energy grows for states below the kernel's centre") {
  const std::vector<std::vector<std::size_t>> fixtures{{3, 0, 0, 0}, {2, 1, 0, 0}, {1, 1, 0, 0}};
  const auto m = model_of(line({0.2, 0.7, 1.1, 1.6}, 0.0));
  for (const auto& occ : fixtures) {
    const auto series = evolve_series(number_state(m, occ), m, 2.0 / m.dissipator_norm_bound(), 10);
    for (std::size_t i = 1; i < series.size(); ++i) CHECK(series[i].obs.energy > series[i - 1].obs.energy);
  }
}

TEST_CASE("coherence decay rate scales with the square of the mode energies") {
  auto rate = [](double scale) {
    // Momenta and mass times s, collapse length and box divided by s.
    ModeGrid g = line({0.6 * scale, 1.3 * scale}, 0.4 * scale, 2.0 * pi / scale);
    units::CollapseParams p = unit_params();
    p.a = 1.0 / scale;
    FockModel m(g, p, 2);
    m.hamiltonian_scale = 1.0;
    Eigen::VectorXcd psi = Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(m.dimension()));
    const auto L = m.index_of({2, 0}), R = m.index_of({0, 2});
    psi[L] = psi[R] = 1.0;
    const auto s0 = pure_state(m, psi);
    const double t = 1e-4;
    const auto s1 = evolve(s0, m, t, {.steps = 20});
    return (std::abs(s0.rho(L, R)) - std::abs(s1.rho(L, R))) / t;
  };
  const double r1 = rate(1.0), r2 = rate(2.0);
  CHECK(r1 > 0.0);
  CHECK(r2 / r1 == doctest::Approx(4.0).epsilon(0.05));
}

TEST_CASE("evolution diagnostics") {
  const auto m = model_of(line({1.0, 2.0}));
  CHECK_THROWS_AS(evolve(vacuum(m), m, -1.0), std::domain_error);
  DensityState bad;
  bad.rho = DenseMatrix::Identity(3, 3);
  CHECK_THROWS_AS(evolve(bad, m, 1.0), std::domain_error);
  // A non-normalized input is reported, not silently rescaled.
  DensityState twice = vacuum(m);
  twice.rho *= 2.0;
  CHECK_THROWS_AS(evolve(twice, m, 0.1), std::runtime_error);
  CHECK_NOTHROW(evolve(twice, m, 0.1, {.check = false}));
}
