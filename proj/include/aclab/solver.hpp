#pragma once

#include "aclab/field.hpp"
#include "aclab/profiles.hpp"

// Newton continuation for critical points of the phase-transition energy
//   E[u] = int ( eps/2 |grad u|^2 + W(u)/eps + h u )
// i.e. solutions of eps^2 lap u = W'(u) + eps h. Axisymmetric data reduce
// to a 1D solve along the main coordinate; a second-order full-grid path
// on the torus is kept for cross-validation.

namespace aclab {

struct SolveOptions {
  double tol = 1e-11;  // sup-norm of the residual
  int max_iter = 60;
  double armijo = 1e-4;
  int max_backtracks = 25;
  std::vector<double> ladder;  // strictly decreasing continuation epsilons
  double beta0 = 0.1;
  double c0 = 10.0;
  double cond_threshold = 1e8;  // near-kernel projection trigger
  bool force_full_grid = false;

  void validate() const;
};

struct SolveLogEntry {
  int iter = 0;
  double residual = 0;
  double damping = 1;
};

struct SolveResult {
  Field u;
  int iterations = 0;
  double residual = 0;
  bool projected_kernel = false;
  bool gradient_bound_pass = false;  // eps |grad u| >= 1/c0 on {|u| < 1 - beta0}
  double measured_grad_min = 0;
  std::vector<SolveLogEntry> log;
};

struct SolveError : std::runtime_error {
  Field last_iterate;
  SolveError(const std::string& msg, Field last)
      : std::runtime_error(msg), last_iterate(std::move(last)) {}
};
struct BifurcationError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// u0 = Hbar(signed_distance / eps), extended by +-1 outside the tube;
// the normal (and the + side) points out of the enclosed region.
Field initial_ansatz(const GeometryPtr& geom, const HypersurfaceSpec& spec, double eps,
                     const ProfileTable& hbar);

double signed_distance(const GeometryPtr& geom, const HypersurfaceSpec& spec, const Vec2& p);

SolveResult solve_critical_point(const GeometryPtr& geom, double eps, const AmbientScalar& h,
                                 const Field& u0, const DoubleWell& dw,
                                 const SolveOptions& opts = {});

struct EnergyBreakdown {
  double gradient = 0, well = 0, bulk = 0;
  double total() const { return gradient + well + bulk; }
};
EnergyBreakdown energy(const GeometryPtr& geom, double eps, const AmbientScalar& h,
                       const Field& u, const DoubleWell& dw);

// Solves along the decreasing epsilon ladder, warm-starting each solve from
// the previous solution; ansatz(eps) supplies the first iterate.
std::vector<SolveResult> solve_ladder(const GeometryPtr& geom, const AmbientScalar& h,
                                      const DoubleWell& dw, const std::vector<double>& ladder,
                                      const std::function<Field(double)>& ansatz,
                                      const SolveOptions& opts = {});

}  // namespace aclab
