#pragma once

#include <Eigen/Dense>
#include <string>
#include <vector>

// Double-well potentials: even polynomials vanishing to second order at
// x = +-1. The canonical choice is W(x) = (1 - x^2)^2 / 4. Derivatives up
// to fourth order are exact (coefficient differentiation). The structural
// constants kappa and beta are measured from the coefficients at
// construction.

namespace aclab {

struct WellCheck {
  std::string name;
  bool pass = false;
  double witness = 0;  // sample point where the check failed (if it did)
  double value = 0;    // offending value at the witness
};

struct WellReport {
  std::vector<WellCheck> checks;
  bool all_pass() const {
    for (const auto& c : checks)
      if (!c.pass) return false;
    return true;
  }
};

class DoubleWell {
 public:
  static DoubleWell canonical();
  // coeffs c_k of W(x) = sum_k c_k x^(2k), constant term first
  static DoubleWell from_even_coeffs(const Eigen::VectorXd& coeffs);
  // general polynomial a_j of x^j; used to validate candidate wells that
  // may violate the structural assumptions (e.g. odd terms)
  static DoubleWell from_coeffs(const Eigen::VectorXd& coeffs);

  // order in {0,..,4}: W, W', W'', W''', W''''
  double eval(double x, int order) const;

  double kappa() const { return kappa_; }
  double beta() const { return beta_; }
  bool is_canonical() const { return canonical_; }
  // full coefficient list of W as a polynomial in x
  const Eigen::VectorXd& coeffs() const { return full_coeffs_; }

 private:
  Eigen::VectorXd full_coeffs_;              // a_j of x^j (odd entries zero)
  std::vector<Eigen::VectorXd> deriv_coeffs_;  // coefficient arrays, orders 0..4
  double kappa_ = 0, beta_ = 0;
  bool canonical_ = false;

  void finalize();
};

double eval_w(const DoubleWell& dw, double x, int order);

// Evaluates every structural assumption on a symmetric sample grid of the
// given size; failures are reported with a witness point, never thrown.
WellReport validate_well(const DoubleWell& dw, int samples);

}  // namespace aclab
