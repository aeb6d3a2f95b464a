#pragma once

#include <memory>
#include <optional>

#include "aclab/potential.hpp"

// One-dimensional transition profiles on a truncated line [-T, T] in the
// stretched variable t: the heteroclinic H connecting -1 to +1, the bounded
// correction profiles I, J, K, L solving v'' - W''(H) v = r with v(0) = 0,
// their smooth cutoffs, and the catalog of integral constants they satisfy.

namespace aclab {

enum class ProfileKind { H, I, J, K, L, CutoffH, CutoffI };

struct ProfileTable {
  ProfileKind kind = ProfileKind::H;
  Eigen::VectorXd t, v, dv, ddv, d3v;
  double tail_plus = 0, tail_minus = 0;
  double decay = 0;  // sqrt(W''(1))
  std::shared_ptr<const DoubleWell> well;

  double half_width() const { return t(t.size() - 1); }
  double step() const { return t(1) - t(0); }

  // cubic Hermite inside [-T, T]; exponential approach to the tail outside
  double value(double tt) const;
  double deriv(double tt) const;
  double second(double tt) const;
};

struct ProfileConstants {
  struct Entry {
    double value = 0;
    double err = 0;  // quadrature error estimate
  };
  Entry e0;              // int (H')^2
  Entry z_hpp_hp;        // int t H'' H'
  Entry hpp_ip;          // int H'' I'
  Entry wppp_j;          // int W'''(H) J (H')^2
  Entry wppp_k;          // int W'''(H) K (H')^2
  Entry wppp_l;          // int W'''(H) L (H')^2
  Entry wquad_i2;        // int W''''(H) I^2 (H')^2
  Entry wppp_ip_i_hp;    // int W'''(H) I' I H'
  Entry wppp_i2_hp;      // int W'''(H) I^2 H'

  // Coefficient sum from the curvature-squared bookkeeping; vanishes as the
  // integral of an exact derivative.
  double curvature_coefficient_sum() const;
};

struct CutoffConfig {
  double delta_star = 0.25;
  double epsilon = 0.1;
  double plateau() const;  // epsilon^(-delta_star)
  void validate() const;   // plateau >= 4
};

struct CutoffProfile {
  ProfileTable table;
  double defect_c0 = 0;      // sup |residual of the defining ODE|
  double defect_c3 = 0;      // with up to 3rd-derivative surrogates added
  double defect_over_eps3 = 0;
};

// Heteroclinic via the first integral (H')^2 = 2 W(H): the substitution
// H = tanh(v) reduces t(v) to a smooth quadrature that is integrated as an
// ODE along the grid. n is rounded up to include t = 0 as a node.
ProfileTable solve_heteroclinic(const DoubleWell& dw, double half_width, int n);

// e0 = int (H')^2 dt by trapezoid on the table grid.
double energy_constant(const ProfileTable& h);

// Bounded solution of v'' - W''(H) v = r with v(0) = 0, assembled as a
// fourth-order (Numerov) tridiagonal system with radiation conditions at
// +-T and a bordered row enforcing solvability orthogonal to H'. For kinds
// K and L the I profile is derived on demand when not supplied.
ProfileTable solve_correction(ProfileKind kind, const DoubleWell& dw, const ProfileTable& h,
                              double e0, const ProfileTable* i_table = nullptr);

// Smooth transition to the tail limits on |t| in (p, 2p), p = eps^(-delta*).
// Only kinds H and I may be cut off. For kind I the defect is measured
// against the cut-off heteroclinic, so the H table and e0 must be passed.
CutoffProfile apply_cutoff(const ProfileTable& table, const CutoffConfig& cfg,
                           const ProfileTable* h = nullptr, double e0 = 0);

ProfileConstants profile_integrals(const ProfileTable& h, const ProfileTable& i,
                                   const ProfileTable& j, const ProfileTable& k,
                                   const ProfileTable& l, const DoubleWell& dw);

// C-infinity bump: 1 on (-1, 1), supported in (-2, 2).
double cutoff_chi(double t);
double cutoff_chi_d1(double t);
double cutoff_chi_d2(double t);

// Everything downstream needs: profiles for one well at one truncation.
struct ProfileFamily {
  std::shared_ptr<const DoubleWell> well;
  ProfileTable h, i, j, k, l;
  ProfileConstants constants;
  double e0 = 0;
};
ProfileFamily build_profile_family(const DoubleWell& dw, double half_width, int n);

// Second eigenfunction of -d^2/dt^2 + W''(H(t)) on the table grid
// (the first excited fiber mode above the translation kernel H').
// Returned normalized in the trapezoid L^2 norm; eigenvalue in *lambda.
Eigen::VectorXd fiber_excited_state(const ProfileTable& h, const DoubleWell& dw, double* lambda);

}  // namespace aclab
