#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "aclab/profiles.hpp"

using namespace aclab;

namespace {

// independent shooting oracle for the heteroclinic: integrate the second
// order equation from the origin with the first-integral slope
double shoot_heteroclinic(const DoubleWell& dw, double t_end) {
  double y = 0.0, yp = std::sqrt(2.0 * dw.eval(0.0, 0));
  const int steps = 200000;
  const double dt = t_end / steps;
  for (int i = 0; i < steps; ++i) {
    auto f = [&](double a, double b) { return std::make_pair(b, dw.eval(a, 1)); };
    auto [k1a, k1b] = f(y, yp);
    auto [k2a, k2b] = f(y + 0.5 * dt * k1a, yp + 0.5 * dt * k1b);
    auto [k3a, k3b] = f(y + 0.5 * dt * k2a, yp + 0.5 * dt * k2b);
    auto [k4a, k4b] = f(y + dt * k3a, yp + dt * k3b);
    y += dt * (k1a + 2 * k2a + 2 * k3a + k4a) / 6.0;
    yp += dt * (k1b + 2 * k2b + 2 * k3b + k4b) / 6.0;
  }
  return y;
}

// fourth-order differences, interior only
Eigen::VectorXd fd2_interior(const Eigen::VectorXd& f, double h) {
  const int n = int(f.size());
  Eigen::VectorXd d = Eigen::VectorXd::Zero(n);
  for (int i = 2; i < n - 2; ++i)
    d(i) = (-f(i - 2) + 16 * f(i - 1) - 30 * f(i) + 16 * f(i + 1) - f(i + 2)) / (12 * h * h);
  return d;
}

double trapz(const Eigen::VectorXd& f, double h) {
  return h * (f.sum() - 0.5 * (f(0) + f(f.size() - 1)));
}

}  // namespace

TEST_CASE("heteroclinic: closed form and shooting oracle") {
  DoubleWell dw = DoubleWell::canonical();
  ProfileTable h = solve_heteroclinic(dw, 12.0, 4000);

  const int i0 = (int(h.t.size()) - 1) / 2;
  CHECK(std::abs(h.v(i0)) < 1e-14);
  CHECK(h.value(1.0) == doctest::Approx(std::tanh(1.0 / std::sqrt(2.0))).epsilon(1e-9));
  CHECK(h.value(1.0) == doctest::Approx(shoot_heteroclinic(dw, 1.0)).epsilon(1e-8));

  // first integral at every node
  for (int i = 0; i < h.t.size(); ++i) {
    CHECK(std::abs(h.dv(i) * h.dv(i) - 2.0 * dw.eval(h.v(i), 0)) < 1e-13);
  }
  // strictly increasing, range inside (-1, 1)
  for (int i = 0; i + 1 < h.t.size(); ++i) CHECK(h.v(i) < h.v(i + 1));
  CHECK(h.v.minCoeff() > -1.0);
  CHECK(h.v.maxCoeff() < 1.0);
  // tail approach
  const double T = h.half_width();
  CHECK(std::abs(h.v(h.t.size() - 1) - 1.0) <= 10.0 * std::exp(-h.decay * T));

  // residual of the defining equation under an independent difference stencil
  Eigen::VectorXd num2 = fd2_interior(h.v, h.step());
  double rmax = 0;
  for (int i = 2; i < h.t.size() - 2; ++i)
    rmax = std::max(rmax, std::abs(num2(i) - dw.eval(h.v(i), 1)));
  CHECK(rmax < 1e-8);

  CHECK_THROWS_AS(solve_heteroclinic(dw, 8.0, 4000), std::invalid_argument);
  CHECK_THROWS_AS(solve_heteroclinic(dw, 12.0, 100), std::invalid_argument);
  Eigen::VectorXd bad(2);
  bad << 0.0, 1.0;
  CHECK_THROWS_AS(solve_heteroclinic(DoubleWell::from_even_coeffs(bad), 12.0, 4000),
                  std::invalid_argument);
}

TEST_CASE("correction profile I matches its closed form") {
  DoubleWell dw = DoubleWell::canonical();
  ProfileTable h = solve_heteroclinic(dw, 12.0, 4000);
  const double e0 = energy_constant(h);
  ProfileTable itab = solve_correction(ProfileKind::I, dw, h, e0);

  const int i0 = (int(h.t.size()) - 1) / 2;
  CHECK(std::abs(itab.v(i0)) < 1e-13);
  // I = -(1/2) tanh^2(t / sqrt 2) for the quartic well
  double sup = 0;
  for (int i = 0; i < h.t.size(); ++i) {
    const double th = std::tanh(h.t(i) / std::sqrt(2.0));
    sup = std::max(sup, std::abs(itab.v(i) + 0.5 * th * th));
  }
  CHECK(sup < 1e-7);
  CHECK(itab.value(12.0) == doctest::Approx(-0.5).epsilon(1e-6));
  CHECK(itab.value(-12.0) == doctest::Approx(-0.5).epsilon(1e-6));
  CHECK(itab.tail_plus == doctest::Approx(-0.5));

  // residual under an independent stencil
  Eigen::VectorXd num2 = fd2_interior(itab.v, h.step());
  double rmax = 0;
  for (int i = 2; i < h.t.size() - 2; ++i) {
    const double want = dw.eval(h.v(i), 2) * itab.v(i) + 1.0 - 2.0 / e0 * h.dv(i);
    rmax = std::max(rmax, std::abs(num2(i) - want));
  }
  CHECK(rmax < 1e-7);
}

TEST_CASE("correction profiles J, K, L: parity, tails, solvability guard") {
  DoubleWell dw = DoubleWell::canonical();
  ProfileTable h = solve_heteroclinic(dw, 12.0, 4000);
  const double e0 = energy_constant(h);
  ProfileTable itab = solve_correction(ProfileKind::I, dw, h, e0);
  ProfileTable jtab = solve_correction(ProfileKind::J, dw, h, e0);
  ProfileTable ktab = solve_correction(ProfileKind::K, dw, h, e0, &itab);
  ProfileTable ltab = solve_correction(ProfileKind::L, dw, h, e0, &itab);

  const int n = int(h.t.size());
  const int i0 = (n - 1) / 2;
  for (const ProfileTable* p : {&jtab, &ktab, &ltab}) CHECK(std::abs(p->v(i0)) < 1e-12);

  // mirrored-solve check: J, K, L are odd (a nonzero even part would kill
  // the nonvanishing curvature integrals they feed)
  for (const ProfileTable* p : {&jtab, &ktab, &ltab}) {
    double asym = 0;
    for (int i = 0; i < n; ++i) asym = std::max(asym, std::abs(p->v(i) + p->v(n - 1 - i)));
    CHECK(asym < 1e-7);
  }
  // I is even
  double iasym = 0;
  for (int i = 0; i < n; ++i) iasym = std::max(iasym, std::abs(itab.v(i) - itab.v(n - 1 - i)));
  CHECK(iasym < 1e-7);

  CHECK(std::abs(jtab.value(12.0)) < 1e-5);
  CHECK(std::abs(ktab.value(12.0)) < 1e-5);
  CHECK(ltab.value(12.0) == doctest::Approx(-0.75).epsilon(1e-4));
  CHECK(ltab.value(-12.0) == doctest::Approx(0.75).epsilon(1e-4));

  // corrupted right-hand side trips the solvability guard
  ProfileTable corrupt = itab;
  corrupt.dv = h.dv;  // int H' H' = e0 != 0
  CHECK_THROWS_AS(solve_correction(ProfileKind::K, dw, h, e0, &corrupt), std::runtime_error);
}

TEST_CASE("profile integral constants") {
  DoubleWell dw = DoubleWell::canonical();
  ProfileFamily fam = build_profile_family(dw, 12.0, 4000);
  const ProfileConstants& c = fam.constants;
  const double e0_exact = 2.0 * std::sqrt(2.0) / 3.0;

  CHECK(std::abs(c.e0.value - e0_exact) < 1e-8);
  CHECK(std::abs(c.z_hpp_hp.value + 0.5 * c.e0.value) < 1e-8);
  CHECK(std::abs(c.wppp_j.value + 0.5 * c.e0.value) < 1e-6);
  CHECK(std::abs(c.wppp_k.value - c.hpp_ip.value) < 1e-6);
  CHECK(std::abs(c.wppp_i2_hp.value) < 1e-8);
  CHECK(std::abs(c.curvature_coefficient_sum()) < 1e-6);

  // int H'' H' dz = 0 (exact derivative with vanishing tails)
  CHECK(std::abs(trapz(fam.h.ddv.cwiseProduct(fam.h.dv), fam.h.step())) < 1e-10);

  // int H'' I' in closed form: int tanh^2 sech^4 ds = 4/15
  CHECK(c.hpp_ip.value == doctest::Approx(4.0 / 15.0).epsilon(1e-6));

  // integration-by-parts identity for every bounded correction profile
  const int n = int(fam.h.t.size());
  Eigen::VectorXd w3(n);
  for (int i = 0; i < n; ++i) w3(i) = dw.eval(fam.h.v(i), 3);
  for (const ProfileTable* p : {&fam.i, &fam.j, &fam.k, &fam.l}) {
    Eigen::VectorXd lhs = w3.cwiseProduct(p->v).cwiseProduct(fam.h.dv.cwiseProduct(fam.h.dv));
    Eigen::VectorXd wpp(n);
    for (int i = 0; i < n; ++i) wpp(i) = dw.eval(fam.h.v(i), 2);
    Eigen::VectorXd rhs = fam.h.ddv.cwiseProduct(p->ddv - wpp.cwiseProduct(p->v));
    CHECK(std::abs(trapz(lhs, fam.h.step()) - trapz(rhs, fam.h.step())) < 1e-6);
  }

  // grid mismatch is rejected
  ProfileTable shorter = fam.i;
  shorter.t = fam.i.t.head(100).eval();
  CHECK_THROWS_AS(profile_integrals(fam.h, shorter, fam.j, fam.k, fam.l, dw),
                  std::invalid_argument);
}

TEST_CASE("doubling the half-width stays within reported quadrature error") {
  DoubleWell dw = DoubleWell::canonical();
  ProfileFamily fam1 = build_profile_family(dw, 12.0, 4000);
  ProfileFamily fam2 = build_profile_family(dw, 24.0, 8000);
  auto close = [](const ProfileConstants::Entry& a, const ProfileConstants::Entry& b) {
    return std::abs(a.value - b.value) <= a.err + b.err + 1e-10;
  };
  CHECK(close(fam1.constants.e0, fam2.constants.e0));
  CHECK(close(fam1.constants.z_hpp_hp, fam2.constants.z_hpp_hp));
  CHECK(close(fam1.constants.hpp_ip, fam2.constants.hpp_ip));
  CHECK(close(fam1.constants.wppp_j, fam2.constants.wppp_j));
  CHECK(close(fam1.constants.wppp_k, fam2.constants.wppp_k));
  CHECK(close(fam1.constants.wppp_l, fam2.constants.wppp_l));
  CHECK(close(fam1.constants.wquad_i2, fam2.constants.wquad_i2));
  CHECK(close(fam1.constants.wppp_ip_i_hp, fam2.constants.wppp_ip_i_hp));
}

TEST_CASE("cutoff profiles") {
  DoubleWell dw = DoubleWell::canonical();
  ProfileTable h = solve_heteroclinic(dw, 24.0, 8000);
  const double e0 = energy_constant(h);
  ProfileTable itab = solve_correction(ProfileKind::I, dw, h, e0);

  CutoffConfig cfg{0.5, 0.01};
  CHECK(cfg.plateau() == doctest::Approx(10.0));
  CutoffProfile hbar = apply_cutoff(h, cfg);
  CHECK(std::abs(hbar.table.value(0.0)) < 1e-12);
  CHECK(hbar.table.value(3.0 * cfg.plateau()) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(hbar.table.value(-3.0 * cfg.plateau()) == doctest::Approx(-1.0).epsilon(1e-15));
  // identity on the plateau
  CHECK(hbar.table.value(2.0) == doctest::Approx(h.value(2.0)).epsilon(1e-12));
  // defect constant is O(1) when the plateau matches the eps^3 budget
  CHECK(hbar.defect_over_eps3 < 10.0);
  CHECK(hbar.defect_c0 > 0.0);

  CutoffProfile ibar = apply_cutoff(itab, cfg, &h, e0);
  CHECK(std::abs(ibar.table.value(0.0)) < 1e-12);
  CHECK(ibar.table.value(3.0 * cfg.plateau()) == doctest::Approx(-0.5).epsilon(1e-14));
  CHECK(ibar.defect_c0 / std::pow(cfg.epsilon, 3) < 10.0);

  // plateau guard
  CutoffConfig bad{0.25, 0.01};
  CHECK_THROWS_AS(apply_cutoff(h, bad), std::invalid_argument);
  CHECK_THROWS_AS(apply_cutoff(itab, cfg), std::invalid_argument);  // missing H context
}

TEST_CASE("fiber excited state") {
  DoubleWell dw = DoubleWell::canonical();
  ProfileTable h = solve_heteroclinic(dw, 12.0, 4000);
  double lam = 0;
  Eigen::VectorXd e2 = fiber_excited_state(h, dw, &lam);
  CHECK(lam == doctest::Approx(1.5).epsilon(1e-3));
  // orthogonal to the translation kernel
  const double ip = trapz(e2.cwiseProduct(h.dv), h.step());
  CHECK(std::abs(ip) < 1e-6);
  // unit trapezoid norm
  CHECK(trapz(e2.cwiseProduct(e2), h.step()) == doctest::Approx(1.0).epsilon(1e-10));
}
