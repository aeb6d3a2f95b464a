#include "aclab/geometry.hpp"

#include <cmath>

namespace aclab {

namespace {

int force_odd(int n) { return (n % 2 == 0) ? n + 1 : n; }

double wrap(double x, double period) {
  double y = std::fmod(x, period);
  if (y < 0) y += period;
  return y;
}

}  // namespace

std::shared_ptr<const ModelGeometry> ModelGeometry::make(const TorusSpec& spec) {
  if (spec.lx <= 0 || spec.ly <= 0 || spec.nx < 16 || spec.ny < 4)
    throw ConfigError("torus: positive sides and nx >= 16, ny >= 4 required");
  if (spec.nx % 2 || spec.ny % 2) throw ConfigError("torus: even grid sizes required");
  auto g = std::make_shared<ModelGeometry>();
  g->kind_ = Kind::Torus;
  g->lx_ = spec.lx;
  g->ly_ = spec.ly;
  g->n_main_ = spec.nx;
  g->n_sym_ = spec.ny;
  g->main_extent_ = spec.lx;
  g->sym_extent_ = spec.ly;
  g->main_.resize(spec.nx);
  for (int i = 0; i < spec.nx; ++i) g->main_(i) = (i + 0.5) * spec.lx / spec.nx;
  g->sym_.resize(spec.ny);
  for (int j = 0; j < spec.ny; ++j) g->sym_(j) = (j + 0.5) * spec.ly / spec.ny;
  g->wmain_ = Vec::Constant(spec.nx, spec.lx / spec.nx);
  g->wsym_ = spec.ly / spec.ny;
  g->d1_main_p_ = periodic_diff1(spec.nx, spec.lx);
  g->d2_main_p_ = periodic_diff2(spec.nx, spec.lx);
  g->d1_main_m_ = g->d1_main_p_;
  g->d2_main_m_ = g->d2_main_p_;
  g->d1_sym_ = periodic_diff1(spec.ny, spec.ly);
  g->d2_sym_ = periodic_diff2(spec.ny, spec.ly);
  return g;
}

std::shared_ptr<const ModelGeometry> ModelGeometry::make(const SphereSpec& spec) {
  if (spec.radius <= 0 || spec.ntheta < 16 || spec.nphi < 4)
    throw ConfigError("sphere: positive radius and ntheta >= 16, nphi >= 4 required");
  if (spec.nphi % 2) throw ConfigError("sphere: even nphi required");
  auto g = std::make_shared<ModelGeometry>();
  g->kind_ = Kind::Sphere;
  g->radius_ = spec.radius;
  g->n_main_ = spec.ntheta;
  g->n_sym_ = spec.nphi;
  g->main_extent_ = M_PI;
  g->sym_extent_ = 2 * M_PI;
  g->main_.resize(spec.ntheta);
  for (int i = 0; i < spec.ntheta; ++i) g->main_(i) = (i + 0.5) * M_PI / spec.ntheta;
  g->sym_.resize(spec.nphi);
  for (int j = 0; j < spec.nphi; ++j) g->sym_(j) = (j + 0.5) * 2 * M_PI / spec.nphi;
  // polar-weighted quadrature: exact cosine moments against sin(theta)
  g->wmain_ = spec.radius * spec.radius *
              moment_weights(spec.ntheta, M_PI, polar_sin_moments(spec.ntheta));
  if (g->wmain_.minCoeff() <= 0) throw ConfigError("sphere: nonpositive polar weights");
  g->wsym_ = 2 * M_PI / spec.nphi;
  ParityDerivatives pd = make_parity_derivatives(spec.ntheta, M_PI);
  g->d1_main_p_ = pd.d1_even;
  g->d2_main_p_ = pd.d2_even;
  g->d1_main_m_ = pd.d1_odd;
  g->d2_main_m_ = pd.d2_odd;
  g->d1_sym_ = periodic_diff1(spec.nphi, 2 * M_PI);
  g->d2_sym_ = periodic_diff2(spec.nphi, 2 * M_PI);
  return g;
}

std::shared_ptr<const ModelGeometry> ModelGeometry::make(const RevolutionSpec& spec) {
  const int ns = int(spec.rho.size());
  if (spec.length <= 0 || ns < 16 || spec.nphi < 4)
    throw ConfigError("revolution: positive length, >= 16 profile samples, nphi >= 4");
  if (spec.nphi % 2) throw ConfigError("revolution: even nphi required");
  if (spec.rho.minCoeff() <= 0)
    throw ConfigError("revolution: profile must be positive away from the poles");
  auto g = std::make_shared<ModelGeometry>();
  g->kind_ = Kind::Revolution;
  g->n_main_ = ns;
  g->n_sym_ = spec.nphi;
  g->main_extent_ = spec.length;
  g->sym_extent_ = 2 * M_PI;
  g->main_.resize(ns);
  for (int i = 0; i < ns; ++i) g->main_(i) = (i + 0.5) * spec.length / ns;
  g->sym_.resize(spec.nphi);
  for (int j = 0; j < spec.nphi; ++j) g->sym_(j) = (j + 0.5) * 2 * M_PI / spec.nphi;

  // odd doubled extension of the profile (smooth closed caps)
  Vec doubled(2 * ns);
  for (int i = 0; i < ns; ++i) {
    doubled(i) = spec.rho(i);
    doubled(2 * ns - 1 - i) = -spec.rho(i);
  }
  g->rho_interp_ = TrigInterp(doubled, 2 * spec.length, 0.5 * spec.length / ns);

  // cosine moments of the profile weight by panel Gauss-Legendre on the
  // interpolant
  Vec moments = Vec::Zero(ns);
  {
    const int panels = 64, q = 8;
    Vec nodes, wts;
    for (int pnl = 0; pnl < panels; ++pnl) {
      const double a = spec.length * pnl / panels;
      const double b = spec.length * (pnl + 1) / panels;
      gauss_legendre(q, a, b, nodes, wts);
      for (int iq = 0; iq < q; ++iq) {
        const double rho = g->rho_interp_.eval(nodes(iq));
        for (int k = 0; k < ns; ++k)
          moments(k) += wts(iq) * rho * std::cos(k * M_PI * nodes(iq) / spec.length);
      }
    }
  }
  g->wmain_ = moment_weights(ns, spec.length, moments);
  g->wsym_ = 2 * M_PI / spec.nphi;

  ParityDerivatives pd = make_parity_derivatives(ns, spec.length);
  g->d1_main_p_ = pd.d1_even;
  g->d2_main_p_ = pd.d2_even;
  g->d1_main_m_ = pd.d1_odd;
  g->d2_main_m_ = pd.d2_odd;
  g->d1_sym_ = periodic_diff1(spec.nphi, 2 * M_PI);
  g->d2_sym_ = periodic_diff2(spec.nphi, 2 * M_PI);
  return g;
}

GeometryPtr make_geometry(const TorusSpec& spec) { return ModelGeometry::make(spec); }
GeometryPtr make_geometry(const SphereSpec& spec) { return ModelGeometry::make(spec); }
GeometryPtr make_geometry(const RevolutionSpec& spec) { return ModelGeometry::make(spec); }

double ModelGeometry::area() const {
  return wmain_.sum() * n_sym_ * wsym_;
}

Vec2 ModelGeometry::metric_diag(const Vec2& p) const {
  switch (kind_) {
    case Kind::Torus:
      return {1.0, 1.0};
    case Kind::Sphere: {
      const double s = std::sin(p(0));
      return {radius_ * radius_, radius_ * radius_ * s * s};
    }
    case Kind::Revolution: {
      const double r = rho(p(0));
      return {1.0, r * r};
    }
  }
  return {1.0, 1.0};
}

double ModelGeometry::sqrt_g(const Vec2& p) const {
  const Vec2 m = metric_diag(p);
  return std::sqrt(m(0) * m(1));
}

double ModelGeometry::gauss_curvature(const Vec2& p) const {
  switch (kind_) {
    case Kind::Torus:
      return 0.0;
    case Kind::Sphere:
      return 1.0 / (radius_ * radius_);
    case Kind::Revolution:
      return -rho_d(p(0), 2) / rho(p(0));
  }
  return 0.0;
}

std::array<Eigen::Matrix2d, 2> ModelGeometry::christoffel(const Vec2& p) const {
  std::array<Eigen::Matrix2d, 2> gam;
  gam[0].setZero();
  gam[1].setZero();
  switch (kind_) {
    case Kind::Torus:
      break;
    case Kind::Sphere: {
      const double th = p(0);
      gam[0](1, 1) = -std::sin(th) * std::cos(th);
      gam[1](0, 1) = gam[1](1, 0) = std::cos(th) / std::sin(th);
      break;
    }
    case Kind::Revolution: {
      const double r = rho(p(0)), rp = rho_d(p(0), 1);
      gam[0](1, 1) = -r * rp;
      gam[1](0, 1) = gam[1](1, 0) = rp / r;
      break;
    }
  }
  return gam;
}

const Mat& ModelGeometry::d1_main(int parity) const {
  return parity >= 0 ? d1_main_p_ : d1_main_m_;
}
const Mat& ModelGeometry::d2_main(int parity) const {
  return parity >= 0 ? d2_main_p_ : d2_main_m_;
}

double ModelGeometry::rho(double s) const {
  if (kind_ == Kind::Sphere) return radius_ * std::sin(s);
  if (kind_ != Kind::Revolution) throw GeometryError("rho: not a revolution surface");
  return rho_interp_.eval(s);
}

double ModelGeometry::rho_d(double s, int order) const {
  if (kind_ == Kind::Sphere) {
    const double c = radius_;
    switch (order) {
      case 1: return c * std::cos(s);
      case 2: return -c * std::sin(s);
      default: throw GeometryError("rho_d: order 1 or 2");
    }
  }
  if (kind_ != Kind::Revolution) throw GeometryError("rho_d: not a revolution surface");
  return rho_interp_.deriv(s, order);
}

FermiChart fermi_chart(const GeometryPtr& geom, const HypersurfaceSpec& spec, double z_max,
                       int n_y, int n_z) {
  if (z_max <= 0) throw ConfigError("fermi_chart: z_max must be positive");
  FermiChart chart;
  chart.geom = geom;
  chart.spec = spec;
  chart.z_max = z_max;
  chart.n_z = force_odd(n_z);
  chart.z.resize(chart.n_z);
  chart.z_step = 2 * z_max / (chart.n_z - 1);
  for (int k = 0; k < chart.n_z; ++k) chart.z(k) = -z_max + k * chart.z_step;

  switch (spec.kind) {
    case HypersurfaceSpec::Kind::TorusBandPair: {
      if (geom->kind() != ModelGeometry::Kind::Torus)
        throw ConfigError("fermi_chart: band pair lives on a torus");
      const double lx = geom->torus_lx(), ly = geom->torus_ly();
      const double width = wrap(spec.band_hi - spec.band_lo, lx);
      if (width <= 0) throw ConfigError("fermi_chart: empty band");
      const double gap = std::min(width, lx - width) / 2;
      if (z_max >= gap) throw GeometryError("fermi_chart: z_max beyond the band focal distance");
      chart.n_y = (n_y > 0) ? n_y : geom->n_sym();
      chart.y_step = ly / chart.n_y;
      chart.y.resize(chart.n_y);
      for (int j = 0; j < chart.n_y; ++j) chart.y(j) = (j + 0.5) * chart.y_step;
      for (double sign : {-1.0, 1.0}) {
        FermiChart::Component c;
        c.base = (sign < 0) ? spec.band_lo : spec.band_hi;
        c.normal_sign = sign;
        c.length = ly;
        c.sff = [](double) { return 0.0; };
        c.mean = [](double) { return 0.0; };
        c.metric_yy = [](double) { return 1.0; };
        c.jacobian = [](double) { return 1.0; };
        c.ricci = [](double) { return 0.0; };
        chart.components.push_back(std::move(c));
      }
      break;
    }
    case HypersurfaceSpec::Kind::SphereLatitude: {
      if (geom->kind() != ModelGeometry::Kind::Sphere)
        throw ConfigError("fermi_chart: latitude lives on a sphere");
      const double r = spec.polar_radius, rad = geom->sphere_radius();
      if (r <= 0 || r >= M_PI) throw ConfigError("fermi_chart: latitude radius inside (0, pi)");
      if (z_max >= rad * std::min(r, M_PI - r))
        throw GeometryError("fermi_chart: z_max beyond the latitude focal distance");
      chart.n_y = (n_y > 0) ? n_y : geom->n_sym();
      const double len = 2 * M_PI * rad * std::sin(r);
      chart.y_step = len / chart.n_y;
      chart.y.resize(chart.n_y);
      for (int j = 0; j < chart.n_y; ++j) chart.y(j) = (j + 0.5) * chart.y_step;
      FermiChart::Component c;
      c.base = r;
      c.normal_sign = 1;
      c.length = len;
      c.sff = [r, rad](double z) { return 1.0 / (rad * std::tan(r + z / rad)); };
      c.mean = c.sff;
      c.metric_yy = [r, rad](double z) {
        const double q = std::sin(r + z / rad) / std::sin(r);
        return q * q;
      };
      c.jacobian = [r, rad](double z) { return std::sin(r + z / rad) / std::sin(r); };
      c.ricci = [rad](double) { return 1.0 / (rad * rad); };
      chart.components.push_back(std::move(c));
      break;
    }
    case HypersurfaceSpec::Kind::RevolutionParallel: {
      if (geom->kind() != ModelGeometry::Kind::Revolution)
        throw ConfigError("fermi_chart: parallel lives on a revolution surface");
      const double s0 = spec.polar_radius;
      const double total = geom->main_extent();
      if (s0 <= 0 || s0 >= total) throw ConfigError("fermi_chart: parallel inside (0, length)");
      if (z_max >= std::min(s0, total - s0))
        throw GeometryError("fermi_chart: z_max beyond the parallel focal distance");
      chart.n_y = (n_y > 0) ? n_y : geom->n_sym();
      const ModelGeometry* g = geom.get();
      const double rho0 = g->rho(s0);
      const double len = 2 * M_PI * rho0;
      chart.y_step = len / chart.n_y;
      chart.y.resize(chart.n_y);
      for (int j = 0; j < chart.n_y; ++j) chart.y(j) = (j + 0.5) * chart.y_step;
      FermiChart::Component c;
      c.base = s0;
      c.normal_sign = 1;
      c.length = len;
      c.sff = [g, s0](double z) { return g->rho_d(s0 + z, 1) / g->rho(s0 + z); };
      c.mean = c.sff;
      c.metric_yy = [g, s0, rho0](double z) {
        const double q = g->rho(s0 + z) / rho0;
        return q * q;
      };
      c.jacobian = [g, s0, rho0](double z) { return g->rho(s0 + z) / rho0; };
      c.ricci = [g, s0](double z) { return -g->rho_d(s0 + z, 2) / g->rho(s0 + z); };
      chart.components.push_back(std::move(c));
      break;
    }
  }
  return chart;
}

Vec2 FermiChart::to_geometry(int comp, double yy, double zz) const {
  const Component& c = components.at(comp);
  switch (spec.kind) {
    case HypersurfaceSpec::Kind::TorusBandPair: {
      double x = c.base + c.normal_sign * zz;
      const double lx = geom->torus_lx();
      x = std::fmod(x, lx);
      if (x < 0) x += lx;
      return {x, yy};
    }
    case HypersurfaceSpec::Kind::SphereLatitude: {
      const double rad = geom->sphere_radius();
      const double theta = c.base + c.normal_sign * zz / rad;
      const double phi = yy / (rad * std::sin(c.base));
      return {theta, phi};
    }
    case HypersurfaceSpec::Kind::RevolutionParallel: {
      const double s = c.base + c.normal_sign * zz;
      const double phi = yy / geom->rho(c.base);
      return {s, phi};
    }
  }
  return {0, 0};
}

double chart_eval(const FermiChart& chart, const AmbientScalar& h, int comp, double y, double z) {
  return h(chart.to_geometry(comp, y, z));
}

double chart_normal_derivative(const FermiChart& chart, const AmbientScalar& h, int comp,
                               double y) {
  const double d = std::min(1e-4, chart.z_max / 16);
  const double f1 = chart_eval(chart, h, comp, y, d) - chart_eval(chart, h, comp, y, -d);
  const double f2 = chart_eval(chart, h, comp, y, 2 * d) - chart_eval(chart, h, comp, y, -2 * d);
  return (8 * f1 - f2) / (12 * d);
}

Vec jacobi_potential(const FermiChart& chart, const AmbientScalar& h, double e0) {
  Vec out(chart.rows());
  int row = 0;
  for (int c = 0; c < int(chart.components.size()); ++c) {
    const auto& comp = chart.components[c];
    const double a0 = comp.sff(0.0);
    const double ric = comp.ricci(0.0);
    for (int j = 0; j < chart.n_y; ++j, ++row) {
      out(row) = a0 * a0 + ric + 2.0 / e0 * chart_normal_derivative(chart, h, c, chart.y(j));
    }
  }
  return out;
}

}  // namespace aclab
