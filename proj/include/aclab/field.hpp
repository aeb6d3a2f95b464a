#pragma once

#include <string>

#include "aclab/geometry.hpp"

// Scalar fields on the product grid of a model geometry, with spectral
// differential operators. On the sphere and on revolution surfaces the
// symmetric coordinate is expanded in angular modes and the main coordinate
// uses parity-folded periodic differentiation on the doubled interval.

namespace aclab {

struct Field {
  GeometryPtr geom;
  Vec vals;  // row-major: index = i_main * n_sym + j_sym
  std::string name;
  double eps = 0;

  double& at(int i, int j) { return vals(i * geom->n_sym() + j); }
  double at(int i, int j) const { return vals(i * geom->n_sym() + j); }
};

Field make_field(const GeometryPtr& geom, double value = 0.0, const std::string& name = "");
Field sample(const GeometryPtr& geom, const std::function<double(const Vec2&)>& f,
             const std::string& name = "");

// quadrature against d(mu_g); exact for constants
double integrate(const Field& u);

Field laplace_beltrami(const Field& u);
// coordinate partial derivatives (d_main u, d_sym u)
std::array<Field, 2> gradient(const Field& u);
// |grad u|_g^2
Field gradient_squared(const Field& u);

// symmetric-coordinate axisymmetry helpers
bool is_axisymmetric(const Field& u, double tol = 1e-12);
Vec axi_profile(const Field& u);
Field broadcast_axi(const GeometryPtr& geom, const Vec& profile, const std::string& name = "",
                    double eps = 0);

// 1D operators along the main coordinate for a fixed angular mode m and
// main-coordinate parity (+1 even, -1 odd about the poles):
//   torus:       d^2/dx^2                      (parity ignored)
//   sphere:      (d^2/dth^2 + cot th d/dth - m^2/sin^2 th) / R^2
//   revolution:  d^2/ds^2 + (rho'/rho) d/ds - m^2/rho^2
Mat mode_laplacian(const GeometryPtr& geom, int m, int parity);
Vec apply_main_d1(const GeometryPtr& geom, const Vec& u, int parity);

// trigonometric interpolant of an axisymmetric profile (even/odd doubled
// extension off the poles; plain periodic on the torus)
TrigInterp axi_interp(const GeometryPtr& geom, const Vec& profile, int parity = +1);

// angular mode basis on the symmetric coordinate: column c of to_vals is
// the c-th basis function (1, cos, sin, ..., Nyquist sine) at the grid
struct SymModeBasis {
  Mat to_vals, to_coef;
  std::vector<int> mode_of_col;
};
SymModeBasis sym_mode_basis(const GeometryPtr& geom);

}  // namespace aclab
