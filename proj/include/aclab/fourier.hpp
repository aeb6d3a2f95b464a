#pragma once

#include <Eigen/Dense>
#include <complex>
#include <vector>

// Spectral utilities on uniform periodic grids: differentiation matrices,
// parity folding for the doubled polar coordinate, quadrature weight
// construction, trigonometric interpolation, and Gauss-Legendre rules.

namespace aclab {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

// Fourier differentiation matrix on a uniform periodic grid of N points
// covering a period of length L. Valid for shifted grids as well (the
// matrix is Toeplitz in the node index). N must be even.
Mat periodic_diff1(int n, double period);
Mat periodic_diff2(int n, double period);

// Operators on the half grid of a parity-extended coordinate.
//
// The coordinate q lives on (0, Q); grid nodes q_j = (j + 1/2) Q / nh.
// Functions extend to the 2Q-periodic circle with parity +1 (even) or -1
// (odd) about q = 0 and q = Q. Folding the periodic differentiation
// matrices onto the first nh nodes yields exact derivative matrices on
// each parity class.
struct ParityDerivatives {
  int nh = 0;
  double domain = 0;  // Q
  Mat d1_even, d2_even;  // act on even-extended samples
  Mat d1_odd, d2_odd;    // act on odd-extended samples
};
ParityDerivatives make_parity_derivatives(int nh, double domain);

// Quadrature weights w_j on nodes q_j = (j + 1/2) Q / nh reproducing the
// prescribed cosine moments m_k = \int_0^Q cos(k pi q / Q) w(q) dq for
// k = 0 .. nh-1. With w(q) = sin(q) on (0, pi) this is the polar-weighted
// rule used on the sphere; it integrates smooth even-extendable functions
// against w(q) with spectral accuracy and constants exactly.
Vec moment_weights(int nh, double domain, const Vec& moments);

// Moments of cos(k theta) against sin(theta) on (0, pi).
Vec polar_sin_moments(int nh);

// Trigonometric interpolant of samples on a uniform periodic grid.
// Nodes x_j = x0 + j * period / n. Evaluation is O(n) per point.
class TrigInterp {
 public:
  TrigInterp() = default;
  TrigInterp(const Vec& samples, double period, double x0);
  double eval(double x) const;
  double deriv(double x, int order) const;

 private:
  std::vector<std::complex<double>> coef_;
  double period_ = 1, x0_ = 0;
  int n_ = 0;
};

// Gauss-Legendre nodes/weights on [a, b] via the Jacobi matrix.
void gauss_legendre(int n, double a, double b, Vec& nodes, Vec& weights);

// Least-squares slope of log(vals) against log(eps); values are clipped
// at `floor` before taking logs. Requires at least two entries.
double fit_loglog_slope(const std::vector<double>& eps,
                        const std::vector<double>& vals,
                        double floor = 1e-300);

// Trapezoid sum h * sum(f) for a uniform periodic grid (spacing h).
inline double periodic_trapezoid(const Vec& f, double h) { return h * f.sum(); }

}  // namespace aclab
