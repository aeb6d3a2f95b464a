#include "aclab/potential.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace aclab {

namespace {

Eigen::VectorXd differentiate(const Eigen::VectorXd& c) {
  if (c.size() <= 1) return Eigen::VectorXd::Zero(1);
  Eigen::VectorXd d(c.size() - 1);
  for (int j = 1; j < c.size(); ++j) d(j - 1) = j * c(j);
  return d;
}

double horner(const Eigen::VectorXd& c, double x) {
  double acc = 0;
  for (int j = int(c.size()) - 1; j >= 0; --j) acc = acc * x + c(j);
  return acc;
}

}  // namespace

DoubleWell DoubleWell::canonical() {
  Eigen::VectorXd even(3);
  even << 0.25, -0.5, 0.25;  // (1 - x^2)^2 / 4
  DoubleWell dw = from_even_coeffs(even);
  dw.canonical_ = true;
  return dw;
}

DoubleWell DoubleWell::from_even_coeffs(const Eigen::VectorXd& coeffs) {
  DoubleWell dw;
  dw.full_coeffs_ = Eigen::VectorXd::Zero(2 * coeffs.size() - 1);
  for (int k = 0; k < coeffs.size(); ++k) dw.full_coeffs_(2 * k) = coeffs(k);
  dw.finalize();
  return dw;
}

DoubleWell DoubleWell::from_coeffs(const Eigen::VectorXd& coeffs) {
  DoubleWell dw;
  dw.full_coeffs_ = coeffs;
  dw.finalize();
  return dw;
}

void DoubleWell::finalize() {
  deriv_coeffs_.clear();
  deriv_coeffs_.push_back(full_coeffs_);
  for (int o = 1; o <= 4; ++o) deriv_coeffs_.push_back(differentiate(deriv_coeffs_.back()));

  // beta: half the gap between x = 1 and the largest zero of W'' in [0, 1];
  // kappa: measured minimum of W'' on |x| >= 1 - beta over a fine grid.
  const int n = 20000;
  double last_nonpos = 0;
  for (int i = 0; i <= n; ++i) {
    const double x = double(i) / n;
    if (eval(x, 2) <= 0) last_nonpos = x;
  }
  beta_ = 0.5 * (1.0 - last_nonpos);
  if (beta_ <= 0 || beta_ >= 1) beta_ = 0.5;
  double kmin = std::numeric_limits<double>::max();
  for (int i = 0; i <= n; ++i) {
    const double x = (1.0 - beta_) + (3.0 - (1.0 - beta_)) * double(i) / n;
    kmin = std::min(kmin, eval(x, 2));
  }
  kappa_ = kmin;
}

double DoubleWell::eval(double x, int order) const {
  if (order < 0 || order > 4) throw std::invalid_argument("DoubleWell::eval: order must be 0..4");
  return horner(deriv_coeffs_[order], x);
}

double eval_w(const DoubleWell& dw, double x, int order) { return dw.eval(x, order); }

WellReport validate_well(const DoubleWell& dw, int samples) {
  if (samples < 100) throw std::invalid_argument("validate_well: samples >= 100 required");
  WellReport rep;
  const double xmax = 2.0;
  auto grid = [&](int i) { return -xmax + 2.0 * xmax * double(i) / (samples - 1); };

  WellCheck vanish{"vanishes-iff-pm1", true, 0, 0};
  for (int i = 0; i < samples; ++i) {
    const double x = grid(i);
    const double w = dw.eval(x, 0);
    const double d1 = std::min(std::abs(x - 1.0), std::abs(x + 1.0));
    if (d1 < 1e-9) continue;
    if (w <= 0) {
      vanish.pass = false;
      vanish.witness = x;
      vanish.value = w;
      break;
    }
  }
  if (vanish.pass && (std::abs(dw.eval(1.0, 0)) > 1e-12 || std::abs(dw.eval(-1.0, 0)) > 1e-12)) {
    vanish.pass = false;
    vanish.witness = 1.0;
    vanish.value = dw.eval(1.0, 0);
  }
  rep.checks.push_back(vanish);

  WellCheck sym{"even-symmetry", true, 0, 0};
  for (int i = 0; i < samples; ++i) {
    const double x = grid(i);
    const double d = dw.eval(x, 0) - dw.eval(-x, 0);
    if (std::abs(d) > 1e-12 * (1 + std::abs(dw.eval(x, 0)))) {
      sym.pass = false;
      sym.witness = x;
      sym.value = d;
      break;
    }
  }
  rep.checks.push_back(sym);

  WellCheck origin{"origin-conditions", true, 0, 0};
  if (std::abs(dw.eval(0, 1)) > 1e-12) {
    origin.pass = false;
    origin.value = dw.eval(0, 1);
  } else if (std::abs(dw.eval(0, 2)) < 1e-12) {
    origin.pass = false;
    origin.value = dw.eval(0, 2);
  }
  rep.checks.push_back(origin);

  WellCheck slope{"x-wprime-negative-inside", true, 0, 0};
  for (int i = 0; i < samples; ++i) {
    const double x = 1e-3 + (1.0 - 2e-3) * double(i) / (samples - 1);
    if (x * dw.eval(x, 1) >= 0) {
      slope.pass = false;
      slope.witness = x;
      slope.value = x * dw.eval(x, 1);
      break;
    }
  }
  rep.checks.push_back(slope);

  WellCheck convex{"wpp-lower-bound-outside", true, 0, 0};
  for (int i = 0; i < samples; ++i) {
    const double x = (1.0 - dw.beta()) + (xmax - (1.0 - dw.beta())) * double(i) / (samples - 1);
    if (dw.eval(x, 2) < dw.kappa() - 1e-12) {
      convex.pass = false;
      convex.witness = x;
      convex.value = dw.eval(x, 2);
      break;
    }
  }
  rep.checks.push_back(convex);

  return rep;
}

}  // namespace aclab
