#pragma once

#include <functional>
#include <memory>
#include <stdexcept>

#include "aclab/fourier.hpp"

// Model closed surfaces (flat torus, round sphere, surface of revolution),
// their reference curves, and Fermi charts with the extrinsic curvature
// data of the parallel curves. All curvature quantities come from closed
// forms per geometry kind; the Riccati relation is kept as a cross-check.

namespace aclab {

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct GeometryError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

using Vec2 = Eigen::Vector2d;

struct TorusSpec {
  double lx = 2 * M_PI, ly = 2 * M_PI;
  int nx = 256, ny = 64;
};
struct SphereSpec {
  double radius = 1.0;
  int ntheta = 256;  // nodes on (0, pi)
  int nphi = 64;
};
struct RevolutionSpec {
  // rho sampled at s_j = (j + 1/2) length / rho.size(); poles at s = 0, S
  Eigen::VectorXd rho;
  double length = M_PI;
  int nphi = 64;
};

class ModelGeometry {
 public:
  enum class Kind { Torus, Sphere, Revolution };

  Kind kind() const { return kind_; }
  int n_main() const { return n_main_; }    // x / theta / s count
  int n_sym() const { return n_sym_; }      // y / phi count
  int size() const { return n_main_ * n_sym_; }
  double main_coord(int i) const { return main_(i); }
  double sym_coord(int j) const { return sym_(j); }
  const Vec& main_coords() const { return main_; }
  const Vec& sym_coords() const { return sym_; }
  double main_extent() const { return main_extent_; }
  double sym_extent() const { return sym_extent_; }

  // quadrature weight of grid node (i, j) for integrals against d(mu_g)
  double node_weight(int i, int j) const { return wmain_(i) * wsym_; }
  const Vec& main_weights() const { return wmain_; }
  double sym_weight() const { return wsym_; }

  double area() const;

  // pointwise metric data in chart coordinates (diagonal metrics)
  Vec2 metric_diag(const Vec2& p) const;       // (g_mm, g_ss)
  double sqrt_g(const Vec2& p) const;
  double gauss_curvature(const Vec2& p) const;
  // Christoffel symbols: gamma[c](a, b)
  std::array<Eigen::Matrix2d, 2> christoffel(const Vec2& p) const;

  // spectral derivative operators along the main coordinate, acting on the
  // parity class of the doubled coordinate (sphere/revolution); plain
  // periodic matrices on the torus
  const Mat& d1_main(int parity) const;
  const Mat& d2_main(int parity) const;
  const Mat& d1_sym() const { return d1_sym_; }
  const Mat& d2_sym() const { return d2_sym_; }
  bool main_periodic() const { return kind_ == Kind::Torus; }

  // revolution-surface profile and its derivatives at arbitrary s
  double rho(double s) const;
  double rho_d(double s, int order) const;

  double sphere_radius() const { return radius_; }
  double torus_lx() const { return lx_; }
  double torus_ly() const { return ly_; }

  static std::shared_ptr<const ModelGeometry> make(const TorusSpec& spec);
  static std::shared_ptr<const ModelGeometry> make(const SphereSpec& spec);
  static std::shared_ptr<const ModelGeometry> make(const RevolutionSpec& spec);

 private:
  Kind kind_ = Kind::Torus;
  int n_main_ = 0, n_sym_ = 0;
  double main_extent_ = 0, sym_extent_ = 0;
  double lx_ = 0, ly_ = 0, radius_ = 0;
  Vec main_, sym_, wmain_;
  double wsym_ = 0;
  Mat d1_main_p_, d2_main_p_, d1_main_m_, d2_main_m_;  // parity +1 / -1
  Mat d1_sym_, d2_sym_;
  TrigInterp rho_interp_;  // odd doubled extension of the revolution profile
  double rho_scale_ = 1.0;
};

using GeometryPtr = std::shared_ptr<const ModelGeometry>;

// Reference curves: a pair of parallel geodesics bounding a torus band, a
// sphere latitude, or a revolution-surface parallel. The normal points out
// of the enclosed region.
struct HypersurfaceSpec {
  enum class Kind { TorusBandPair, SphereLatitude, RevolutionParallel };
  Kind kind = Kind::TorusBandPair;
  double band_lo = 0, band_hi = M_PI;  // torus band in x (enclosed region)
  double polar_radius = M_PI / 3;      // sphere latitude / revolution parallel
};

// A Fermi chart stores per-component closed-form curvature tables of the
// parallel curves at signed normal distance z.
struct FermiChart {
  GeometryPtr geom;
  HypersurfaceSpec spec;
  double z_max = 0;
  int n_y = 0, n_z = 0;
  Vec y, z;        // y is the angle/arclength parameter on each component
  double y_step = 0, z_step = 0;

  struct Component {
    double base = 0;      // main coordinate of the curve
    double normal_sign = 1;  // +1: z increases the main coordinate
    double length = 0;
    // closed-form data as functions of z
    std::function<double(double)> sff;       // second fundamental form scalar A_z
    std::function<double(double)> mean;      // H_z
    std::function<double(double)> metric_yy; // g_z in the y parameter
    std::function<double(double)> jacobian;  // d(mu_{g_z}) / d(mu_Gamma)
    std::function<double(double)> ricci;     // ambient Ric(n, n) at distance z
  };
  std::vector<Component> components;

  int rows() const { return int(components.size()) * n_y; }
  // chart (component, y, z) -> geometry coordinates
  Vec2 to_geometry(int comp, double yy, double zz) const;
  double curve_weight(int /*iy*/) const { return y_step; }  // times metric later
  double total_length() const {
    double acc = 0;
    for (const auto& c : components) acc += c.length;
    return acc;
  }
};

GeometryPtr make_geometry(const TorusSpec& spec);
GeometryPtr make_geometry(const SphereSpec& spec);
GeometryPtr make_geometry(const RevolutionSpec& spec);

FermiChart fermi_chart(const GeometryPtr& geom, const HypersurfaceSpec& spec, double z_max,
                       int n_y = 0, int n_z = 201);

// Ambient scalar function given in geometry coordinates.
struct AmbientScalar {
  std::function<double(const Vec2&)> f;
  double operator()(const Vec2& p) const { return f(p); }
  static AmbientScalar constant(double c) {
    return AmbientScalar{[c](const Vec2&) { return c; }};
  }
};

// h evaluated on a chart fiber, plus its normal derivative at z = 0.
double chart_eval(const FermiChart& chart, const AmbientScalar& h, int comp, double y, double z);
double chart_normal_derivative(const FermiChart& chart, const AmbientScalar& h, int comp,
                               double y);

// |A_Gamma|^2 + Ric(n, n) + (2 / e0) d_z h(., 0) on the curve grid,
// stacked component-major.
Vec jacobi_potential(const FermiChart& chart, const AmbientScalar& h, double e0);

}  // namespace aclab
