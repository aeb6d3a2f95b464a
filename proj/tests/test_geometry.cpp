#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "aclab/geometry.hpp"

using namespace aclab;

TEST_CASE("areas match closed forms") {
  auto torus = make_geometry(TorusSpec{2 * M_PI, 2 * M_PI, 64, 32});
  CHECK(torus->area() == doctest::Approx(4 * M_PI * M_PI).epsilon(1e-10));

  auto sphere = make_geometry(SphereSpec{1.0, 64, 16});
  CHECK(sphere->area() == doctest::Approx(4 * M_PI).epsilon(1e-10));

  auto sphere2 = make_geometry(SphereSpec{2.5, 48, 16});
  CHECK(sphere2->area() == doctest::Approx(4 * M_PI * 2.5 * 2.5).epsilon(1e-10));

  // revolution surface from a sine generator reproduces the unit sphere
  const int ns = 64;
  Eigen::VectorXd rho(ns);
  for (int i = 0; i < ns; ++i) rho(i) = std::sin((i + 0.5) * M_PI / ns);
  auto rev = make_geometry(RevolutionSpec{rho, M_PI, 16});
  CHECK(rev->area() == doctest::Approx(4 * M_PI).epsilon(1e-8));
  CHECK(rev->gauss_curvature({1.1, 0.0}) == doctest::Approx(1.0).epsilon(1e-8));

  CHECK_THROWS_AS(make_geometry(TorusSpec{-1.0, 2 * M_PI, 64, 32}), ConfigError);
  CHECK_THROWS_AS(make_geometry(SphereSpec{0.0, 64, 16}), ConfigError);
}

TEST_CASE("fermi chart: torus band pair is flat and totally geodesic") {
  auto torus = make_geometry(TorusSpec{2 * M_PI, 2 * M_PI, 64, 32});
  HypersurfaceSpec spec;
  spec.kind = HypersurfaceSpec::Kind::TorusBandPair;
  spec.band_lo = M_PI / 2;
  spec.band_hi = 3 * M_PI / 2;
  FermiChart chart = fermi_chart(torus, spec, 0.7);
  REQUIRE(chart.components.size() == 2);
  for (const auto& c : chart.components) {
    CHECK(c.mean(0.3) == 0.0);
    CHECK(c.sff(-0.2) == 0.0);
    CHECK(c.ricci(0.1) == 0.0);
    CHECK(c.jacobian(0.5) == 1.0);
    CHECK(c.length == doctest::Approx(2 * M_PI));
  }
  CHECK(chart.total_length() == doctest::Approx(4 * M_PI));
  CHECK_THROWS_AS(fermi_chart(torus, spec, 2.0), GeometryError);
}

TEST_CASE("fermi chart: sphere latitude closed forms") {
  auto sphere = make_geometry(SphereSpec{1.0, 64, 16});
  HypersurfaceSpec spec;
  spec.kind = HypersurfaceSpec::Kind::SphereLatitude;
  spec.polar_radius = M_PI / 3;
  FermiChart chart = fermi_chart(sphere, spec, 0.5);
  const auto& c = chart.components[0];
  const double r = M_PI / 3;

  CHECK(c.mean(0.0) == doctest::Approx(1.0 / std::tan(r)).epsilon(1e-12));
  CHECK(c.sff(0.0) * c.sff(0.0) == doctest::Approx(1.0 / (std::tan(r) * std::tan(r))));
  CHECK(c.ricci(0.0) == doctest::Approx(1.0));
  CHECK(c.length == doctest::Approx(2 * M_PI * std::sin(r)));

  // volume element along the fiber (geodesic polar oracle)
  for (double z : {-0.3, -0.1, 0.2, 0.45}) {
    CHECK(c.jacobian(z) == doctest::Approx(std::sin(r + z) / std::sin(r)).epsilon(1e-12));
  }

  // Riccati cross-check on tensor components in the fixed y chart:
  // d/dz A_yy = (A^2)_yy - K g_yy
  const double dz = 1e-5;
  for (double z : {-0.3, 0.0, 0.25}) {
    const double ayy = [&](double zz) { return c.sff(zz) * c.metric_yy(zz); }(z);
    const double d = ([&](double zz) { return c.sff(zz) * c.metric_yy(zz); }(z + dz) -
                      [&](double zz) { return c.sff(zz) * c.metric_yy(zz); }(z - dz)) /
                     (2 * dz);
    const double rhs = c.sff(z) * ayy - c.ricci(z) * c.metric_yy(z);
    CHECK(d == doctest::Approx(rhs).epsilon(1e-7));
  }

  // H_z = H_Gamma - (|A|^2 + Ric) z + O(z^2): fitted quadratic remainder
  const double h0 = c.mean(0.0);
  const double slope = -(c.sff(0.0) * c.sff(0.0) + c.ricci(0.0));
  for (double z : {-0.1, 0.05, 0.1}) {
    const double rem = c.mean(z) - h0 - slope * z;
    CHECK(std::abs(rem) < 2.0 * z * z * (std::abs(h0) + 1.0) * 3.0);
  }

  // focal guard
  CHECK_THROWS_AS(fermi_chart(sphere, spec, 1.1), GeometryError);
}

TEST_CASE("fermi chart: revolution parallel matches the sphere") {
  const int ns = 96;
  Eigen::VectorXd rho(ns);
  for (int i = 0; i < ns; ++i) rho(i) = std::sin((i + 0.5) * M_PI / ns);
  auto rev = make_geometry(RevolutionSpec{rho, M_PI, 16});
  HypersurfaceSpec spec;
  spec.kind = HypersurfaceSpec::Kind::RevolutionParallel;
  spec.polar_radius = M_PI / 3;
  FermiChart chart = fermi_chart(rev, spec, 0.5);
  const auto& c = chart.components[0];
  const double r = M_PI / 3;
  CHECK(c.mean(0.0) == doctest::Approx(1.0 / std::tan(r)).epsilon(1e-8));
  CHECK(c.jacobian(0.3) == doctest::Approx(std::sin(r + 0.3) / std::sin(r)).epsilon(1e-8));
  CHECK(c.ricci(0.2) == doctest::Approx(1.0).epsilon(1e-7));
}

TEST_CASE("jacobi potential") {
  const double e0 = 2.0 * std::sqrt(2.0) / 3.0;

  auto torus = make_geometry(TorusSpec{2 * M_PI, 2 * M_PI, 64, 32});
  HypersurfaceSpec tspec;
  tspec.kind = HypersurfaceSpec::Kind::TorusBandPair;
  tspec.band_lo = M_PI / 2;
  tspec.band_hi = 3 * M_PI / 2;
  FermiChart tc = fermi_chart(torus, tspec, 0.7);
  Vec pot = jacobi_potential(tc, AmbientScalar::constant(0.0), e0);
  CHECK(pot.cwiseAbs().maxCoeff() < 1e-12);

  auto sphere = make_geometry(SphereSpec{1.0, 64, 16});
  HypersurfaceSpec sspec;
  sspec.kind = HypersurfaceSpec::Kind::SphereLatitude;
  sspec.polar_radius = M_PI / 3;
  FermiChart sc = fermi_chart(sphere, sspec, 0.5);
  const double r = M_PI / 3;
  Vec pot2 = jacobi_potential(sc, AmbientScalar::constant(0.7), e0);
  const double expected = 1.0 / (std::sin(r) * std::sin(r));
  for (int i = 0; i < pot2.size(); ++i) CHECK(pot2(i) == doctest::Approx(expected).epsilon(1e-9));

  // h linear in the normal coordinate: theta = r + z on the unit sphere
  const double cc = 0.35;
  AmbientScalar hz{[r, cc](const Vec2& p) { return cc * (p(0) - r); }};
  Vec pot3 = jacobi_potential(sc, hz, e0);
  for (int i = 0; i < pot3.size(); ++i)
    CHECK(pot3(i) == doctest::Approx(expected + 2.0 / e0 * cc).epsilon(1e-8));
}
