#pragma once

#include "aclab/potential.hpp"
#include "aclab/solver.hpp"

// First and second variations of the sharp-interface functional
// (area minus prescribed bulk term) and of the diffuse energy, the inner
// variations generated by ambient flows, and diffuse-measure diagnostics.

namespace aclab {

struct FlowError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Ambient vector field in contravariant chart components.
struct VectorFieldSpec {
  std::function<Eigen::Vector2d(const Vec2&)> comp;
  int flow_substeps = 16;
  Eigen::Vector2d operator()(const Vec2& p) const { return comp(p); }
};

// Discrete closed curve with enclosed-region marker; the normal points out
// of the enclosed region.
struct SharpHypersurface {
  GeometryPtr geom;
  HypersurfaceSpec spec;
  struct Node {
    Vec2 pos;
    Vec2 tangent;  // unit, contravariant
    Vec2 normal;   // unit, contravariant, outward
    double curvature = 0;  // trace of the second fundamental form along the normal
    double weight = 0;     // arclength quadrature weight
  };
  std::vector<std::vector<Node>> components;
  double length() const;
};

SharpHypersurface make_sharp(const GeometryPtr& geom, const HypersurfaceSpec& spec,
                             int nodes_per_component = 256);

// --- diffuse functional -----------------------------------------------------

double first_variation_E(const GeometryPtr& geom, double eps, const AmbientScalar& h,
                         const Field& u, const Field& v, const DoubleWell& dw);

// the bilinear form int [ eps grad v . grad w + W''(u) v w / eps ]
double second_variation_E(const GeometryPtr& geom, double eps, const Field& u, const Field& v,
                          const Field& w, const DoubleWell& dw);

// inner variation generated by the flow of X, evaluated at a critical point
double inner_second_variation(const GeometryPtr& geom, double eps, const AmbientScalar& h,
                              const Field& u, const VectorFieldSpec& x, const DoubleWell& dw);

// E[u o flow(-t)] by change of variables (no interpolation of u)
double energy_pulled_back(const GeometryPtr& geom, double eps, const AmbientScalar& h,
                          const Field& u, const VectorFieldSpec& x, double t,
                          const DoubleWell& dw);

// centered-difference oracle for the inner second variation
double inner_second_variation_fd(const GeometryPtr& geom, double eps, const AmbientScalar& h,
                                 const Field& u, const VectorFieldSpec& x, const DoubleWell& dw,
                                 double dt = 1e-3);

struct DiffuseMeasure {
  Field density;      // eps |grad u|^2
  double mass = 0;
  Field discrepancy;  // eps |grad u|^2 / 2 - W(u) / eps
};
DiffuseMeasure diffuse_measure(const GeometryPtr& geom, double eps, const Field& u,
                               const DoubleWell& dw);

// --- sharp functional --------------------------------------------------------

double first_variation_A(const SharpHypersurface& surface, const AmbientScalar& h_fn,
                         const VectorFieldSpec& x);

struct ScalarSecondVariation {
  double value = 0;
  bool critical = true;          // formula assumes an A_h-critical curve
  double criticality_defect = 0;  // sup |H - h|
};
// f given at the curve nodes, stacked component-major
ScalarSecondVariation second_variation_A_scalar(const SharpHypersurface& surface,
                                                const AmbientScalar& h_fn, const Vec& f);

// ambient-field version, valid at critical points
double second_variation_A_ambient(const SharpHypersurface& surface, const AmbientScalar& h_fn,
                                  const VectorFieldSpec& x);

// int over the curve of (grad_n X . n)^2
double normal_derivative_sq_integral(const SharpHypersurface& surface, const VectorFieldSpec& x);

// area minus bulk term of the flowed pair at flow time t (finite-difference
// oracle for the first variation)
double sharp_functional_flowed(const SharpHypersurface& surface, const AmbientScalar& h_fn,
                               const VectorFieldSpec& x, double t);

// --- flows -------------------------------------------------------------------

// RK4 flow of a point; optionally transports the coordinate differential
Vec2 flow_point(const GeometryPtr& geom, const VectorFieldSpec& x, double t, const Vec2& p,
                Eigen::Matrix2d* dflow = nullptr);

// --- comparison along the epsilon ladder --------------------------------------

struct LimitComparisonRow {
  double eps = 0;
  double diffuse = 0;  // inner second variation / e0
  double sharp = 0;    // ambient second variation + normal-derivative correction
  double gap = 0;
};
struct LimitComparison {
  std::vector<LimitComparisonRow> rows;
  double sharp_value = 0;
  double slope = 0;  // fitted log-log decay of |gap|
};
// h_fn is the prescribing function of the PDE; the sharp side uses 2 h / e0
LimitComparison limit_comparison(const GeometryPtr& geom,
                                 const std::vector<std::pair<double, Field>>& ladder,
                                 const AmbientScalar& h_fn, const VectorFieldSpec& x,
                                 const SharpHypersurface& surface, double e0,
                                 const DoubleWell& dw);

}  // namespace aclab
