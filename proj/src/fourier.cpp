#include "aclab/fourier.hpp"

#include <cmath>
#include <stdexcept>

namespace aclab {

Mat periodic_diff1(int n, double period) {
  if (n % 2 != 0) throw std::invalid_argument("periodic_diff1: n must be even");
  const double scale = 2.0 * M_PI / period;
  Mat d = Mat::Zero(n, n);
  for (int j = 0; j < n; ++j) {
    for (int k = 0; k < n; ++k) {
      if (j == k) continue;
      const int djk = j - k;
      const double sgn = (djk % 2 == 0) ? 1.0 : -1.0;
      d(j, k) = scale * 0.5 * sgn / std::tan(djk * M_PI / n);
    }
  }
  return d;
}

Mat periodic_diff2(int n, double period) {
  if (n % 2 != 0) throw std::invalid_argument("periodic_diff2: n must be even");
  const double scale = 2.0 * M_PI / period;
  Mat d = Mat::Zero(n, n);
  for (int j = 0; j < n; ++j) {
    for (int k = 0; k < n; ++k) {
      if (j == k) {
        d(j, k) = -scale * scale * (n * n / 12.0 + 1.0 / 6.0);
      } else {
        const int djk = j - k;
        const double sgn = (djk % 2 == 0) ? 1.0 : -1.0;
        const double s = std::sin(djk * M_PI / n);
        d(j, k) = -scale * scale * sgn * 0.5 / (s * s);
      }
    }
  }
  return d;
}

ParityDerivatives make_parity_derivatives(int nh, double domain) {
  ParityDerivatives p;
  p.nh = nh;
  p.domain = domain;
  const int n = 2 * nh;
  Mat d1 = periodic_diff1(n, 2 * domain);
  Mat d2 = periodic_diff2(n, 2 * domain);
  p.d1_even = Mat(nh, nh);
  p.d2_even = Mat(nh, nh);
  p.d1_odd = Mat(nh, nh);
  p.d2_odd = Mat(nh, nh);
  for (int i = 0; i < nh; ++i) {
    for (int j = 0; j < nh; ++j) {
      const int jm = n - 1 - j;  // mirror node 2Q - q_j
      p.d1_even(i, j) = d1(i, j) + d1(i, jm);
      p.d2_even(i, j) = d2(i, j) + d2(i, jm);
      p.d1_odd(i, j) = d1(i, j) - d1(i, jm);
      p.d2_odd(i, j) = d2(i, j) - d2(i, jm);
    }
  }
  return p;
}

Vec moment_weights(int nh, double domain, const Vec& moments) {
  if (moments.size() < nh) throw std::invalid_argument("moment_weights: need nh moments");
  Vec w = Vec::Zero(nh);
  for (int j = 0; j < nh; ++j) {
    const double q = (j + 0.5) * domain / nh;
    double acc = moments(0);
    for (int k = 1; k < nh; ++k) acc += 2.0 * moments(k) * std::cos(k * M_PI * q / domain);
    w(j) = acc / nh;
  }
  return w;
}

Vec polar_sin_moments(int nh) {
  Vec m = Vec::Zero(nh);
  m(0) = 2.0;
  for (int k = 2; k < nh; ++k) {
    if (k % 2 == 0) m(k) = 2.0 / (1.0 - double(k) * k);
  }
  return m;
}

TrigInterp::TrigInterp(const Vec& samples, double period, double x0)
    : period_(period), x0_(x0), n_(int(samples.size())) {
  // direct DFT; n is moderate everywhere this is used
  coef_.assign(n_, {0, 0});
  for (int k = 0; k < n_; ++k) {
    std::complex<double> acc(0, 0);
    for (int j = 0; j < n_; ++j) {
      const double ang = -2.0 * M_PI * k * j / n_;
      acc += samples(j) * std::complex<double>(std::cos(ang), std::sin(ang));
    }
    coef_[k] = acc / double(n_);
  }
}

double TrigInterp::eval(double x) const { return deriv(x, 0); }

double TrigInterp::deriv(double x, int order) const {
  const double t = 2.0 * M_PI * (x - x0_) / period_;
  std::complex<double> acc(0, 0);
  const int half = n_ / 2;
  for (int k = 0; k < n_; ++k) {
    int kk = (k <= half) ? k : k - n_;
    std::complex<double> ik(0, kk * 2.0 * M_PI / period_);
    std::complex<double> f = coef_[k];
    for (int o = 0; o < order; ++o) f *= ik;
    acc += f * std::complex<double>(std::cos(kk * t), std::sin(kk * t));
  }
  return acc.real();
}

void gauss_legendre(int n, double a, double b, Vec& nodes, Vec& weights) {
  Mat jac = Mat::Zero(n, n);
  for (int i = 1; i < n; ++i) {
    const double beta = i / std::sqrt(4.0 * i * i - 1.0);
    jac(i, i - 1) = beta;
    jac(i - 1, i) = beta;
  }
  Eigen::SelfAdjointEigenSolver<Mat> es(jac);
  nodes.resize(n);
  weights.resize(n);
  for (int i = 0; i < n; ++i) {
    const double x = es.eigenvalues()(i);
    const double w0 = 2.0 * es.eigenvectors()(0, i) * es.eigenvectors()(0, i);
    nodes(i) = 0.5 * (b - a) * x + 0.5 * (a + b);
    weights(i) = 0.5 * (b - a) * w0;
  }
}

double fit_loglog_slope(const std::vector<double>& eps, const std::vector<double>& vals,
                        double floor) {
  if (eps.size() != vals.size() || eps.size() < 2)
    throw std::invalid_argument("fit_loglog_slope: need matching lists, size >= 2");
  const int n = int(eps.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (int i = 0; i < n; ++i) {
    const double x = std::log(eps[i]);
    const double y = std::log(std::max(std::abs(vals[i]), floor));
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

}  // namespace aclab
