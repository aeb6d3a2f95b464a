#include "aclab/solver.hpp"

#include <Eigen/SparseCore>
#include <Eigen/SparseLU>
#include <cmath>
#include <limits>

namespace aclab {

namespace {

double wrap(double x, double period) {
  double y = std::fmod(x, period);
  if (y < 0) y += period;
  return y;
}

bool scalar_is_axisymmetric(const GeometryPtr& geom, const AmbientScalar& h) {
  for (int i : {0, geom->n_main() / 3, geom->n_main() - 1}) {
    const double ref = h({geom->main_coord(i), geom->sym_coord(0)});
    for (int j = 1; j < geom->n_sym(); j += std::max(1, geom->n_sym() / 7)) {
      if (std::abs(h({geom->main_coord(i), geom->sym_coord(j)}) - ref) > 1e-13 * (1 + std::abs(ref)))
        return false;
    }
  }
  return true;
}

// near-kernel basis by subspace inverse iteration on a slightly shifted
// copy (the unshifted matrix may be singular to machine precision, and the
// kernel may have dimension above one, e.g. translation plus width modes)
Mat near_kernel(const Mat& jac, double cond_threshold) {
  const int n = int(jac.rows());
  const double scale = jac.cwiseAbs().rowwise().sum().maxCoeff();
  Mat shifted = jac;
  shifted.diagonal().array() += 1e-13 * scale;
  Eigen::PartialPivLU<Mat> lu(shifted);
  const int kdim = std::min(4, n);
  Mat x(n, kdim);
  for (int c = 0; c < kdim; ++c)
    for (int i = 0; i < n; ++i) x(i, c) = std::sin(0.7 * i + 0.4 + 1.3 * c) + 0.1 * c;
  for (int it = 0; it < 40; ++it) {
    Mat y = lu.solve(x);
    if (!y.allFinite()) break;
    Eigen::HouseholderQR<Mat> qr(y);
    x = qr.householderQ() * Mat::Identity(n, kdim);
  }
  // keep directions whose Rayleigh quotient is tiny against the row scale
  std::vector<int> keep;
  for (int c = 0; c < kdim; ++c) {
    const double lam = x.col(c).dot(jac * x.col(c));
    if (std::abs(lam) <= scale / cond_threshold) keep.push_back(c);
  }
  Mat basis(n, int(keep.size()));
  for (size_t c = 0; c < keep.size(); ++c) basis.col(int(c)) = x.col(keep[c]);
  return basis;
}

struct Reduced1D {
  Mat lap;          // main-coordinate laplacian at angular mode zero
  Vec hvec;         // prescribing function on the profile grid
  const GeometryPtr* geom;
};

Vec residual_1d(const Reduced1D& red, const DoubleWell& dw, double eps, const Vec& u) {
  Vec r = eps * eps * (red.lap * u);
  for (int i = 0; i < u.size(); ++i) r(i) -= dw.eval(u(i), 1) + eps * red.hvec(i);
  return r;
}

}  // namespace

void SolveOptions::validate() const {
  if (tol <= 0) throw ConfigError("SolveOptions: tolerance must be positive");
  for (size_t i = 1; i < ladder.size(); ++i)
    if (!(ladder[i] < ladder[i - 1])) throw ConfigError("SolveOptions: ladder must decrease");
}

double signed_distance(const GeometryPtr& geom, const HypersurfaceSpec& spec, const Vec2& p) {
  switch (spec.kind) {
    case HypersurfaceSpec::Kind::TorusBandPair: {
      const double lx = geom->torus_lx();
      const double width = wrap(spec.band_hi - spec.band_lo, lx);
      const double xi = wrap(p(0) - spec.band_lo, lx);
      if (xi < width) return -std::min(xi, width - xi);  // inside the enclosed band
      const double eta = xi - width;
      return std::min(eta, lx - width - eta);
    }
    case HypersurfaceSpec::Kind::SphereLatitude:
      return (p(0) - spec.polar_radius) * geom->sphere_radius();
    case HypersurfaceSpec::Kind::RevolutionParallel:
      return p(0) - spec.polar_radius;
  }
  return 0;
}

Field initial_ansatz(const GeometryPtr& geom, const HypersurfaceSpec& spec, double eps,
                     const ProfileTable& hbar) {
  Field u = sample(geom, [&](const Vec2& p) {
    return hbar.value(signed_distance(geom, spec, p) / eps);
  });
  u.name = "ansatz";
  u.eps = eps;
  return u;
}

SolveResult solve_critical_point(const GeometryPtr& geom, double eps, const AmbientScalar& h,
                                 const Field& u0, const DoubleWell& dw, const SolveOptions& opts) {
  opts.validate();
  if (eps <= 0) throw ConfigError("solve_critical_point: eps must be positive");

  const bool reduced = !opts.force_full_grid && is_axisymmetric(u0, 1e-11) &&
                       scalar_is_axisymmetric(geom, h);
  SolveResult out;

  if (reduced) {
    Reduced1D red;
    red.lap = mode_laplacian(geom, 0, +1);
    red.hvec.resize(geom->n_main());
    for (int i = 0; i < geom->n_main(); ++i)
      red.hvec(i) = h({geom->main_coord(i), geom->sym_coord(0)});
    Vec u = axi_profile(u0);
    const int n = int(u.size());

    Vec r = residual_1d(red, dw, eps, u);
    double rnorm = r.cwiseAbs().maxCoeff();
    int iter = 0;
    out.log.push_back({0, rnorm, 1.0});
    while (rnorm > opts.tol && iter < opts.max_iter) {
      Mat jac = eps * eps * red.lap;
      for (int i = 0; i < n; ++i) jac(i, i) -= dw.eval(u(i), 2);
      Eigen::PartialPivLU<Mat> lu(jac);
      const double rc = lu.rcond();
      Vec delta;
      if (!(rc > 1.0 / opts.cond_threshold)) {
        // project out the near-kernel directions through a bordered solve
        out.projected_kernel = true;
        Mat k = near_kernel(jac, opts.cond_threshold);
        if (!k.allFinite() || k.cols() == 0)
          throw BifurcationError("solve_critical_point: singular jacobian");
        const int kc = int(k.cols());
        Mat bord = Mat::Zero(n + kc, n + kc);
        bord.topLeftCorner(n, n) = jac;
        bord.topRightCorner(n, kc) = k;
        bord.bottomLeftCorner(kc, n) = k.transpose();
        Vec rhs = Vec::Zero(n + kc);
        rhs.head(n) = -r;
        Vec sol = Eigen::PartialPivLU<Mat>(bord).solve(rhs);
        delta = sol.head(n);
      } else {
        delta = lu.solve(-r);
      }
      if (!delta.allFinite()) throw BifurcationError("solve_critical_point: singular jacobian");

      // Armijo damping on the squared residual norm
      const double phi0 = r.squaredNorm();
      double alpha = 1.0;
      Vec unew, rnew;
      bool accepted = false;
      for (int bt = 0; bt < opts.max_backtracks; ++bt) {
        unew = u + alpha * delta;
        rnew = residual_1d(red, dw, eps, unew);
        if (rnew.squaredNorm() <= (1.0 - opts.armijo * alpha) * phi0) {
          accepted = true;
          break;
        }
        alpha *= 0.5;
      }
      if (!accepted) {
        Field last = broadcast_axi(geom, u, "newton-last", eps);
        throw SolveError("solve_critical_point: damped step failed to reduce the residual", last);
      }
      u = unew;
      r = rnew;
      rnorm = r.cwiseAbs().maxCoeff();
      ++iter;
      out.log.push_back({iter, rnorm, alpha});
    }
    if (rnorm > opts.tol) {
      Field last = broadcast_axi(geom, u, "newton-last", eps);
      throw SolveError("solve_critical_point: no convergence within max_iter", last);
    }
    out.u = broadcast_axi(geom, u, "u", eps);
    out.iterations = iter;
    out.residual = rnorm;
  } else {
    if (geom->kind() != ModelGeometry::Kind::Torus)
      throw ConfigError("solve_critical_point: full-grid path is torus-only");
    // second-order five-point path, kept for cross-validating the reduction
    const int nx = geom->n_main(), ny = geom->n_sym(), n = nx * ny;
    const double hx = geom->main_extent() / nx, hy = geom->sym_extent() / ny;
    auto idx = [&](int i, int j) { return ((i + nx) % nx) * ny + ((j + ny) % ny); };
    auto lap_of = [&](const Vec& u) {
      Vec out2(n);
      for (int i = 0; i < nx; ++i)
        for (int j = 0; j < ny; ++j) {
          out2(idx(i, j)) =
              (u(idx(i + 1, j)) - 2 * u(idx(i, j)) + u(idx(i - 1, j))) / (hx * hx) +
              (u(idx(i, j + 1)) - 2 * u(idx(i, j)) + u(idx(i, j - 1))) / (hy * hy);
        }
      return out2;
    };
    Vec hvec(n);
    for (int i = 0; i < nx; ++i)
      for (int j = 0; j < ny; ++j)
        hvec(idx(i, j)) = h({geom->main_coord(i), geom->sym_coord(j)});
    auto resid = [&](const Vec& u) {
      Vec r = eps * eps * lap_of(u);
      for (int i = 0; i < n; ++i) r(i) -= dw.eval(u(i), 1) + eps * hvec(i);
      return r;
    };
    Vec u = u0.vals;
    Vec r = resid(u);
    double rnorm = r.cwiseAbs().maxCoeff();
    int iter = 0;
    out.log.push_back({0, rnorm, 1.0});
    while (rnorm > opts.tol && iter < opts.max_iter) {
      std::vector<Eigen::Triplet<double>> trips;
      trips.reserve(size_t(5) * n);
      for (int i = 0; i < nx; ++i)
        for (int j = 0; j < ny; ++j) {
          const int row = idx(i, j);
          trips.emplace_back(row, row,
                             -2 * eps * eps / (hx * hx) - 2 * eps * eps / (hy * hy) -
                                 dw.eval(u(row), 2));
          trips.emplace_back(row, idx(i + 1, j), eps * eps / (hx * hx));
          trips.emplace_back(row, idx(i - 1, j), eps * eps / (hx * hx));
          trips.emplace_back(row, idx(i, j + 1), eps * eps / (hy * hy));
          trips.emplace_back(row, idx(i, j - 1), eps * eps / (hy * hy));
        }
      Eigen::SparseMatrix<double> jac(n, n);
      jac.setFromTriplets(trips.begin(), trips.end());
      Eigen::SparseLU<Eigen::SparseMatrix<double>> lu;
      lu.compute(jac);
      if (lu.info() != Eigen::Success)
        throw BifurcationError("solve_critical_point: singular full-grid jacobian");
      Vec delta = lu.solve(-r);
      const double phi0 = r.squaredNorm();
      double alpha = 1.0;
      bool accepted = false;
      Vec unew, rnew;
      for (int bt = 0; bt < opts.max_backtracks; ++bt) {
        unew = u + alpha * delta;
        rnew = resid(unew);
        if (rnew.squaredNorm() <= (1.0 - opts.armijo * alpha) * phi0) {
          accepted = true;
          break;
        }
        alpha *= 0.5;
      }
      if (!accepted) {
        Field last = make_field(geom, 0, "newton-last");
        last.vals = u;
        throw SolveError("solve_critical_point: damped step failed (full grid)", last);
      }
      u = unew;
      r = rnew;
      rnorm = r.cwiseAbs().maxCoeff();
      ++iter;
      out.log.push_back({iter, rnorm, alpha});
    }
    if (rnorm > opts.tol) {
      Field last = make_field(geom, 0, "newton-last");
      last.vals = u;
      throw SolveError("solve_critical_point: no convergence (full grid)", last);
    }
    out.u = make_field(geom, 0, "u");
    out.u.vals = u;
    out.u.eps = eps;
    out.iterations = iter;
    out.residual = rnorm;
  }

  // structural gradient bound on the transition region
  Field gs = gradient_squared(out.u);
  double gmin = std::numeric_limits<double>::max();
  bool any = false;
  for (int i = 0; i < geom->size(); ++i) {
    if (std::abs(out.u.vals(i)) < 1.0 - opts.beta0) {
      any = true;
      gmin = std::min(gmin, eps * std::sqrt(std::max(gs.vals(i), 0.0)));
    }
  }
  out.measured_grad_min = any ? gmin : 0.0;
  out.gradient_bound_pass = !any || gmin >= 1.0 / opts.c0;
  return out;
}

EnergyBreakdown energy(const GeometryPtr& geom, double eps, const AmbientScalar& h,
                       const Field& u, const DoubleWell& dw) {
  Field gs = gradient_squared(u);
  EnergyBreakdown e;
  Field well = make_field(geom), bulk = make_field(geom);
  for (int i = 0; i < geom->size(); ++i) well.vals(i) = dw.eval(u.vals(i), 0);
  Field hs = sample(geom, [&](const Vec2& p) { return h(p); });
  bulk.vals = hs.vals.cwiseProduct(u.vals);
  Field half_gs = gs;
  half_gs.vals *= 0.5 * eps;
  e.gradient = integrate(half_gs);
  Field wional = well;
  wional.vals /= eps;
  e.well = integrate(wional);
  e.bulk = integrate(bulk);
  return e;
}

std::vector<SolveResult> solve_ladder(const GeometryPtr& geom, const AmbientScalar& h,
                                      const DoubleWell& dw, const std::vector<double>& ladder,
                                      const std::function<Field(double)>& ansatz,
                                      const SolveOptions& opts) {
  std::vector<SolveResult> results;
  Field start;
  for (size_t i = 0; i < ladder.size(); ++i) {
    const double eps = ladder[i];
    Field u0 = (i == 0) ? ansatz(eps) : start;
    u0.eps = eps;
    SolveResult res = solve_critical_point(geom, eps, h, u0, dw, opts);
    start = res.u;
    results.push_back(std::move(res));
  }
  return results;
}

}  // namespace aclab
