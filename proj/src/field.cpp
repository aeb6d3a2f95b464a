#include "aclab/field.hpp"

#include <cmath>

namespace aclab {

Field make_field(const GeometryPtr& geom, double value, const std::string& name) {
  Field f;
  f.geom = geom;
  f.vals = Vec::Constant(geom->size(), value);
  f.name = name;
  return f;
}

Field sample(const GeometryPtr& geom, const std::function<double(const Vec2&)>& fn,
             const std::string& name) {
  Field f = make_field(geom, 0.0, name);
  for (int i = 0; i < geom->n_main(); ++i)
    for (int j = 0; j < geom->n_sym(); ++j)
      f.at(i, j) = fn({geom->main_coord(i), geom->sym_coord(j)});
  return f;
}

double integrate(const Field& u) {
  const auto& g = *u.geom;
  double acc = 0;
  for (int i = 0; i < g.n_main(); ++i) {
    double row = 0;
    for (int j = 0; j < g.n_sym(); ++j) row += u.at(i, j);
    acc += g.main_weights()(i) * row;
  }
  return acc * g.sym_weight();
}

SymModeBasis sym_mode_basis(const GeometryPtr& geom) {
  const int n = geom->n_sym();
  const double period = geom->sym_extent();
  SymModeBasis basis;
  basis.to_vals = Mat(n, n);
  basis.mode_of_col.resize(n);
  int col = 0;
  auto push = [&](int m, bool sine) {
    for (int j = 0; j < n; ++j) {
      const double a = 2 * M_PI * m * geom->sym_coord(j) / period;
      basis.to_vals(j, col) = sine ? std::sin(a) : std::cos(a);
    }
    basis.mode_of_col[col] = m;
    ++col;
  };
  push(0, false);
  for (int m = 1; m < n / 2; ++m) {
    push(m, false);
    push(m, true);
  }
  push(n / 2, true);  // Nyquist cosine vanishes on the half-offset grid
  basis.to_coef = basis.to_vals.inverse();
  return basis;
}

namespace {

// applies the per-mode main-coordinate operator to every angular mode
Field apply_modewise(const Field& u, const std::function<Vec(const Vec&, int)>& op) {
  const auto& g = *u.geom;
  const int nm = g.n_main(), ns = g.n_sym();
  Field out = make_field(u.geom);
  if (g.main_periodic()) {
    // no parity bookkeeping needed; apply directly column by column
    for (int j = 0; j < ns; ++j) {
      Vec col(nm);
      for (int i = 0; i < nm; ++i) col(i) = u.at(i, j);
      Vec res = op(col, 0);
      for (int i = 0; i < nm; ++i) out.at(i, j) = res(i);
    }
    return out;
  }
  SymModeBasis basis = sym_mode_basis(u.geom);
  // coefficient matrix: rows main nodes, cols modes
  Mat coef(nm, ns);
  for (int i = 0; i < nm; ++i) {
    Vec row(ns);
    for (int j = 0; j < ns; ++j) row(j) = u.at(i, j);
    coef.row(i) = (basis.to_coef * row).transpose();
  }
  Mat res(nm, ns);
  for (int c = 0; c < ns; ++c) {
    res.col(c) = op(coef.col(c), basis.mode_of_col[c]);
  }
  for (int i = 0; i < nm; ++i) {
    Vec row = basis.to_vals * res.row(i).transpose();
    for (int j = 0; j < ns; ++j) out.at(i, j) = row(j);
  }
  return out;
}

int parity_of_mode(int m) { return (m % 2 == 0) ? +1 : -1; }

}  // namespace

Mat mode_laplacian(const GeometryPtr& geom, int m, int parity) {
  const auto& g = *geom;
  const int n = g.n_main();
  switch (g.kind()) {
    case ModelGeometry::Kind::Torus: {
      Mat lap = g.d2_main(+1);
      if (m != 0) {
        const double k = 2 * M_PI * m / g.torus_ly();
        lap.diagonal().array() -= k * k;
      }
      return lap;
    }
    case ModelGeometry::Kind::Sphere: {
      const double r2 = g.sphere_radius() * g.sphere_radius();
      Mat lap = g.d2_main(parity);
      const Mat& d1 = g.d1_main(parity);
      for (int i = 0; i < n; ++i) {
        const double th = g.main_coord(i);
        lap.row(i) += (std::cos(th) / std::sin(th)) * d1.row(i);
      }
      if (m != 0) {
        for (int i = 0; i < n; ++i) {
          const double s = std::sin(g.main_coord(i));
          lap(i, i) -= double(m) * m / (s * s);
        }
      }
      return lap / r2;
    }
    case ModelGeometry::Kind::Revolution: {
      Mat lap = g.d2_main(parity);
      const Mat& d1 = g.d1_main(parity);
      for (int i = 0; i < n; ++i) {
        const double s = g.main_coord(i);
        lap.row(i) += (g.rho_d(s, 1) / g.rho(s)) * d1.row(i);
      }
      if (m != 0) {
        for (int i = 0; i < n; ++i) {
          const double r = g.rho(g.main_coord(i));
          lap(i, i) -= double(m) * m / (r * r);
        }
      }
      return lap;
    }
  }
  return Mat();
}

Vec apply_main_d1(const GeometryPtr& geom, const Vec& u, int parity) {
  return geom->d1_main(parity) * u;
}

Field laplace_beltrami(const Field& u) {
  const auto& g = *u.geom;
  if (g.kind() == ModelGeometry::Kind::Torus) {
    const int nm = g.n_main(), ns = g.n_sym();
    Mat U(nm, ns);
    for (int i = 0; i < nm; ++i)
      for (int j = 0; j < ns; ++j) U(i, j) = u.at(i, j);
    Mat lap = g.d2_main(+1) * U + U * g.d2_sym().transpose();
    Field out = make_field(u.geom);
    for (int i = 0; i < nm; ++i)
      for (int j = 0; j < ns; ++j) out.at(i, j) = lap(i, j);
    return out;
  }
  return apply_modewise(u, [&](const Vec& col, int m) -> Vec {
    return mode_laplacian(u.geom, m, parity_of_mode(m)) * col;
  });
}

std::array<Field, 2> gradient(const Field& u) {
  const auto& g = *u.geom;
  const int nm = g.n_main(), ns = g.n_sym();
  Field dm = make_field(u.geom), dsym = make_field(u.geom);
  // symmetric coordinate: plain periodic differentiation
  for (int i = 0; i < nm; ++i) {
    Vec row(ns);
    for (int j = 0; j < ns; ++j) row(j) = u.at(i, j);
    Vec d = g.d1_sym() * row;
    for (int j = 0; j < ns; ++j) dsym.at(i, j) = d(j);
  }
  if (g.main_periodic()) {
    for (int j = 0; j < ns; ++j) {
      Vec col(nm);
      for (int i = 0; i < nm; ++i) col(i) = u.at(i, j);
      Vec d = g.d1_main(+1) * col;
      for (int i = 0; i < nm; ++i) dm.at(i, j) = d(i);
    }
    return {dm, dsym};
  }
  Field dmain = apply_modewise(u, [&](const Vec& col, int m) -> Vec {
    return g.d1_main(parity_of_mode(m)) * col;
  });
  return {dmain, dsym};
}

Field gradient_squared(const Field& u) {
  auto grads = gradient(u);
  const auto& g = *u.geom;
  Field out = make_field(u.geom);
  for (int i = 0; i < g.n_main(); ++i) {
    for (int j = 0; j < g.n_sym(); ++j) {
      const Vec2 p{g.main_coord(i), g.sym_coord(j)};
      const Vec2 met = g.metric_diag(p);
      const double a = grads[0].at(i, j), b = grads[1].at(i, j);
      out.at(i, j) = a * a / met(0) + b * b / met(1);
    }
  }
  return out;
}

bool is_axisymmetric(const Field& u, double tol) {
  const auto& g = *u.geom;
  for (int i = 0; i < g.n_main(); ++i) {
    double lo = u.at(i, 0), hi = lo;
    for (int j = 1; j < g.n_sym(); ++j) {
      lo = std::min(lo, u.at(i, j));
      hi = std::max(hi, u.at(i, j));
    }
    if (hi - lo > tol * (1 + std::abs(hi))) return false;
  }
  return true;
}

Vec axi_profile(const Field& u) {
  const auto& g = *u.geom;
  Vec p(g.n_main());
  for (int i = 0; i < g.n_main(); ++i) {
    double acc = 0;
    for (int j = 0; j < g.n_sym(); ++j) acc += u.at(i, j);
    p(i) = acc / g.n_sym();
  }
  return p;
}

Field broadcast_axi(const GeometryPtr& geom, const Vec& profile, const std::string& name,
                    double eps) {
  Field f = make_field(geom, 0.0, name);
  f.eps = eps;
  for (int i = 0; i < geom->n_main(); ++i)
    for (int j = 0; j < geom->n_sym(); ++j) f.at(i, j) = profile(i);
  return f;
}

TrigInterp axi_interp(const GeometryPtr& geom, const Vec& profile, int parity) {
  const auto& g = *geom;
  const int n = g.n_main();
  if (g.main_periodic()) {
    return TrigInterp(profile, g.main_extent(), g.main_coord(0));
  }
  Vec doubled(2 * n);
  for (int i = 0; i < n; ++i) {
    doubled(i) = profile(i);
    doubled(2 * n - 1 - i) = parity * profile(i);
  }
  return TrigInterp(doubled, 2 * g.main_extent(), g.main_coord(0));
}

}  // namespace aclab
