#include "aclab/spectral.hpp"

#include <Eigen/SparseCore>
#include <Eigen/SparseLU>
#include <algorithm>
#include <cmath>

namespace aclab {

namespace {

int parity_of_mode(int m) { return (m % 2 == 0) ? +1 : -1; }

// truncated trigonometric basis on the nodes; Nyquist modes are excluded
// (their derivatives vanish at half-offset nodes and would produce spurious
// zero-energy directions)
struct TrigBasis {
  Mat vals, derivs;  // nodes x functions
};

TrigBasis parity_basis(const Vec& nodes, double half_domain, int parity, int kmax) {
  const int n = int(nodes.size());
  TrigBasis basis;
  const int cols = (parity > 0) ? kmax + 1 : kmax;
  basis.vals.resize(n, cols);
  basis.derivs.resize(n, cols);
  int col = 0;
  if (parity > 0) {
    for (int k = 0; k <= kmax; ++k, ++col) {
      const double w = k * M_PI / half_domain;
      for (int i = 0; i < n; ++i) {
        basis.vals(i, col) = std::cos(w * nodes(i));
        basis.derivs(i, col) = -w * std::sin(w * nodes(i));
      }
    }
  } else {
    for (int k = 1; k <= kmax; ++k, ++col) {
      const double w = k * M_PI / half_domain;
      for (int i = 0; i < n; ++i) {
        basis.vals(i, col) = std::sin(w * nodes(i));
        basis.derivs(i, col) = w * std::cos(w * nodes(i));
      }
    }
  }
  return basis;
}

TrigBasis circle_basis(const Vec& nodes, double period) {
  const int n = int(nodes.size());
  const int kmax = n / 2 - 1;
  TrigBasis basis;
  basis.vals.resize(n, 2 * kmax + 1);
  basis.derivs.resize(n, 2 * kmax + 1);
  basis.vals.col(0).setOnes();
  basis.derivs.col(0).setZero();
  int col = 1;
  for (int k = 1; k <= kmax; ++k) {
    const double w = 2 * M_PI * k / period;
    for (int i = 0; i < n; ++i) {
      basis.vals(i, col) = std::cos(w * nodes(i));
      basis.derivs(i, col) = -w * std::sin(w * nodes(i));
      basis.vals(i, col + 1) = std::sin(w * nodes(i));
      basis.derivs(i, col + 1) = w * std::cos(w * nodes(i));
    }
    col += 2;
  }
  return basis;
}

// variational block: S = Bp^T diag(w eps ginv) Bp + B^T diag(w (eps ang + pot)) B
void galerkin_block(ModeBlock& blk, const TrigBasis& basis, const Vec& w, double eps,
                    const Vec& ginv, const Vec& ang, const Vec& pot) {
  const Vec wg = w.cwiseProduct(ginv) * eps;
  const Vec wp = w.cwiseProduct(eps * ang + pot);
  blk.a = basis.derivs.transpose() * wg.asDiagonal() * basis.derivs +
          basis.vals.transpose() * wp.asDiagonal() * basis.vals;
  blk.a = 0.5 * (blk.a + blk.a.transpose()).eval();
  blk.gram = basis.vals.transpose() * w.asDiagonal() * basis.vals;
  blk.gram = 0.5 * (blk.gram + blk.gram.transpose()).eval();
  blk.nodal = basis.vals;
}

}  // namespace

double Operator::symmetry_defect() const {
  double worst = 0;
  for (const auto& b : blocks) {
    const double scale = b.a.cwiseAbs().maxCoeff();
    worst = std::max(worst, (b.a - b.a.transpose()).cwiseAbs().maxCoeff() / (scale + 1e-300));
    const double gscale = b.gram.cwiseAbs().maxCoeff();
    worst = std::max(worst,
                     (b.gram - b.gram.transpose()).cwiseAbs().maxCoeff() / (gscale + 1e-300));
  }
  return worst;
}

Operator assemble_diffuse(const GeometryPtr& geom, double eps, const Field& u,
                          const DoubleWell& dw, int max_mode) {
  if (!is_axisymmetric(u, 1e-10))
    throw ConfigError("assemble_diffuse: mode-block assembly needs axisymmetric u");
  Operator op;
  op.tag = "diffuse";
  op.eps = eps;
  op.geom = geom;
  Vec prof = axi_profile(u);
  const int n = geom->n_main();
  Vec wpp(n);
  for (int i = 0; i < n; ++i) wpp(i) = dw.eval(prof(i), 2) / eps;

  if (geom->kind() == ModelGeometry::Kind::Torus) {
    // fold about x = 0; symmetrize the potential across the reflection
    Vec wsym = wpp;
    for (int i = 0; i < n; ++i) wsym(i) = 0.5 * (wpp(i) + wpp(n - 1 - i));
    const Vec ones = Vec::Ones(n);
    const Vec w = geom->main_weights();
    for (int m = 0; m <= max_mode; ++m) {
      const double ky = 2 * M_PI * m / geom->torus_ly();
      const Vec ang = Vec::Constant(n, ky * ky);
      for (int parity : {+1, -1}) {
        ModeBlock blk;
        blk.m = m;
        blk.parity = parity;
        blk.copies = (m == 0) ? 1 : 2;
        blk.label = "m=" + std::to_string(m) + (parity > 0 ? ",even" : ",odd");
        TrigBasis basis = parity_basis(geom->main_coords(), geom->torus_lx() / 2, parity, n / 2 - 1);
        galerkin_block(blk, basis, w, eps, ones, ang, wsym);
        blk.weights = w;
        op.blocks.push_back(std::move(blk));
      }
    }
    return op;
  }

  // sphere / revolution: parity classes of the doubled polar coordinate
  const Vec& w = geom->main_weights();
  Vec ginv(n);
  for (int i = 0; i < n; ++i) {
    const Vec2 p{geom->main_coord(i), geom->sym_coord(0)};
    ginv(i) = 1.0 / geom->metric_diag(p)(0);
  }
  for (int m = 0; m <= max_mode; ++m) {
    const int parity = parity_of_mode(m);
    Vec ang(n);
    for (int i = 0; i < n; ++i) {
      const Vec2 p{geom->main_coord(i), geom->sym_coord(0)};
      ang(i) = double(m) * m / geom->metric_diag(p)(1);
    }
    ModeBlock blk;
    blk.m = m;
    blk.parity = parity;
    blk.copies = (m == 0) ? 1 : 2;
    blk.label = "m=" + std::to_string(m);
    TrigBasis basis = parity_basis(geom->main_coords(), geom->main_extent(), parity, n - 1);
    galerkin_block(blk, basis, w, eps, ginv, ang, wpp);
    blk.weights = w;
    op.blocks.push_back(std::move(blk));
  }
  return op;
}

Operator assemble_sharp(const SharpHypersurface& surface, const AmbientScalar& h_fn,
                        const FermiChart& chart, double e0) {
  if (chart.spec.kind != surface.spec.kind)
    throw ConfigError("assemble_sharp: chart and surface disagree");
  Operator op;
  op.tag = "sharp";
  op.eps = 0;
  op.geom = surface.geom;
  Vec pot = jacobi_potential(chart, h_fn, e0);
  for (int c = 0; c < int(chart.components.size()); ++c) {
    const double len = chart.components[c].length;
    const int n = chart.n_y;
    ModeBlock blk;
    blk.m = c;
    blk.copies = 1;
    blk.label = "component " + std::to_string(c);
    TrigBasis basis = circle_basis(chart.y, len);
    const Vec w = Vec::Constant(n, len / n);
    galerkin_block(blk, basis, w, 1.0, Vec::Ones(n), Vec::Zero(n), -pot.segment(c * n, n));
    blk.weights = w;
    op.blocks.push_back(std::move(blk));
  }
  return op;
}

double default_zero_threshold(const std::string& tag, double eps) {
  // symmetry-forced zero modes only split at finite eps
  if (tag == "diffuse") return 10.0 * eps * eps * eps;  // 10 eps^2 after 1/eps scaling
  return 1e-6;
}

SpectrumReport eigs(const Operator& op, int count, double zero_threshold) {
  if (count < 1) throw ConfigError("eigs: count must be positive");
  SpectrumReport rep;
  rep.tag = op.tag;
  rep.eps = op.eps;
  rep.zero_threshold = zero_threshold;

  std::vector<EigPair> all;
  for (int b = 0; b < int(op.blocks.size()); ++b) {
    const auto& blk = op.blocks[b];
    Eigen::GeneralizedSelfAdjointEigenSolver<Mat> es(blk.a, blk.gram);
    if (es.info() != Eigen::Success)
      throw EigenSolverError("eigs: block diagonalization failed (" + blk.label + ")");
    rep.block_values.push_back(es.eigenvalues());
    rep.block_vectors.push_back(es.eigenvectors());
    const int keep = std::min<int>(count + 2, int(es.eigenvalues().size()));
    for (int k = 0; k < keep; ++k) {
      EigPair p;
      p.lambda = es.eigenvalues()(k);
      p.block = b;
      p.index_in_block = k;
      const Vec v = es.eigenvectors().col(k);
      const Vec r = blk.a * v - p.lambda * (blk.gram * v);
      p.residual = r.norm() / (1.0 + std::abs(p.lambda));
      rep.max_residual = std::max(rep.max_residual, p.residual);
      for (int c = 0; c < blk.copies; ++c) all.push_back(p);
    }
    // index / nullity bookkeeping over the whole block spectrum
    for (int k = 0; k < es.eigenvalues().size(); ++k) {
      const double lam = es.eigenvalues()(k);
      if (lam < -zero_threshold) rep.index += blk.copies;
      else if (std::abs(lam) <= zero_threshold) rep.nullity += blk.copies;
    }
  }
  std::sort(all.begin(), all.end(),
            [](const EigPair& a, const EigPair& b) { return a.lambda < b.lambda; });
  if (int(all.size()) > count) all.resize(count);
  rep.pairs = std::move(all);
  return rep;
}

Field make_eigenfield(const Operator& op, const SpectrumReport& rep, int pair_index) {
  if (op.tag != "diffuse")
    throw ConfigError("make_eigenfield: only diffuse operators produce nodal fields");
  const EigPair& p = rep.pairs.at(pair_index);
  const ModeBlock& blk = op.blocks.at(p.block);
  const Vec q = blk.nodal * rep.block_vectors.at(p.block).col(p.index_in_block);
  const GeometryPtr& geom = op.geom;
  Vec prof;
  if (geom->kind() == ModelGeometry::Kind::Torus) {
    const int n = geom->n_main();
    prof.resize(n);
    for (int i = 0; i < n / 2; ++i) {
      prof(i) = q(i);
      prof(n - 1 - i) = blk.parity * q(i);
    }
  } else {
    prof = q;
  }
  const double ky = 2 * M_PI * blk.m / geom->sym_extent();
  Field w = sample(geom, [&](const Vec2& pt) {
    (void)pt;
    return 0.0;
  });
  for (int i = 0; i < geom->n_main(); ++i)
    for (int j = 0; j < geom->n_sym(); ++j)
      w.at(i, j) = prof(i) * ((blk.m == 0) ? 1.0 : std::cos(ky * geom->sym_coord(j)));
  Field wsq = w;
  wsq.vals = w.vals.cwiseProduct(w.vals);
  const double nrm = std::sqrt(integrate(wsq));
  w.vals /= (nrm > 0 ? nrm : 1.0);
  w.name = "eigenfield";
  w.eps = op.eps;
  return w;
}

SpectrumComparison compare_spectra(const std::vector<SpectrumReport>& diffuse,
                                   const SpectrumReport& sharp, int ell_max) {
  if (diffuse.empty()) throw ConfigError("compare_spectra: empty ladder");
  SpectrumComparison out;
  out.sharp_index = sharp.index;
  out.sharp_nullity = sharp.nullity;
  for (const auto& d : diffuse) out.ladder.push_back(d.eps);
  int avail = int(sharp.pairs.size());
  for (const auto& d : diffuse) avail = std::min(avail, int(d.pairs.size()));
  if (ell_max > avail) out.truncated = true;
  const int ells = std::min(ell_max, avail);
  for (int ell = 1; ell <= ells; ++ell) {
    SpectrumComparisonRow row;
    row.ell = ell;
    row.sharp = sharp.pairs[ell - 1].lambda;
    std::vector<double> eps, gaps;
    for (const auto& d : diffuse) {
      const double scaled = d.pairs[ell - 1].lambda / d.eps;
      row.scaled_diffuse.push_back(scaled);
      row.gaps.push_back(scaled - row.sharp);
      eps.push_back(d.eps);
      gaps.push_back(std::abs(scaled - row.sharp));
    }
    row.slope = (eps.size() >= 2) ? fit_loglog_slope(eps, gaps, 1e-13) : 0.0;
    out.rows.push_back(std::move(row));
  }
  for (const auto& d : diffuse) {
    out.index_agrees.push_back(d.index == sharp.index);
    out.nullity_agrees.push_back(d.nullity == sharp.nullity);
  }
  return out;
}

// --- tube machinery -----------------------------------------------------------

TubeField composite_profile(const FermiChart& chart, const ProfileTable& hbar,
                            const ProfileTable& ibar, double eps, const AmbientScalar& h_fn,
                            const Vec& h_fit) {
  const int rows = chart.rows();
  const int nz = chart.n_z;
  TubeField xi;
  xi.vals.resize(rows, nz);
  xi.dz.resize(rows, nz);
  xi.dy.resize(rows, nz);
  for (int c = 0; c < int(chart.components.size()); ++c) {
    // spectral derivative of the fitted height along the curve
    Vec hseg = h_fit.segment(c * chart.n_y, chart.n_y);
    Mat d1 = periodic_diff1(chart.n_y, chart.components[c].length);
    Vec hprime = d1 * hseg;
    for (int iy = 0; iy < chart.n_y; ++iy) {
      const int row = c * chart.n_y + iy;
      const double y = chart.y(iy);
      for (int k = 0; k < nz; ++k) {
        const double z = chart.z(k);
        const double t = (z - hseg(iy)) / eps;
        const double hv = chart_eval(chart, h_fn, c, y, z);
        const double hp1 = hbar.deriv(t), hp2 = hbar.second(t);
        const double ip1 = ibar.deriv(t), ip2 = ibar.second(t);
        xi.vals(row, k) = hp1 + eps * hv * ip1;
        const double dz_h = (chart_eval(chart, h_fn, c, y, z + 1e-5) -
                             chart_eval(chart, h_fn, c, y, z - 1e-5)) /
                            2e-5;
        xi.dz(row, k) = (hp2 + eps * hv * ip2) / eps + eps * dz_h * ip1;
        const double ystep = chart.y_step;
        const double dy_h = (chart_eval(chart, h_fn, c, y + ystep, z) -
                             chart_eval(chart, h_fn, c, y - ystep, z)) /
                            (2 * ystep);
        xi.dy(row, k) = -hprime(iy) / eps * (hp2 + eps * hv * ip2) + eps * dy_h * ip1;
      }
    }
  }
  return xi;
}

NormalDecomposition decompose(const FermiChart& chart, const ProfileTable& hbar,
                              const ProfileTable& ibar, double eps, const AmbientScalar& h_fn,
                              const Vec& h_fit, const Mat& w) {
  NormalDecomposition out;
  out.xi = composite_profile(chart, hbar, ibar, eps, h_fn, h_fit);
  const int rows = chart.rows();
  const int nz = chart.n_z;
  if (w.rows() != rows || w.cols() != nz)
    throw ConfigError("decompose: field shape does not match the chart");
  out.w_parallel.resize(rows);
  out.w_perp.resize(rows, nz);
  out.orth_residual.resize(rows);
  Vec wz = Vec::Constant(nz, chart.z_step);
  wz(0) *= 0.5;
  wz(nz - 1) *= 0.5;
  for (int row = 0; row < rows; ++row) {
    double num = 0, den = 0, fiber_mass = 0;
    for (int k = 0; k < nz; ++k) {
      num += wz(k) * w(row, k) * out.xi.vals(row, k);
      den += wz(k) * out.xi.vals(row, k) * out.xi.vals(row, k);
      fiber_mass += wz(k) * std::abs(out.xi.vals(row, k));
    }
    if (den < 1e-8)
      throw DecompositionError("decompose: degenerate fiber norm");
    out.w_parallel(row) = num / den;
    double resid = 0;
    for (int k = 0; k < nz; ++k) {
      out.w_perp(row, k) = w(row, k) - out.w_parallel(row) * out.xi.vals(row, k);
      resid += wz(k) * out.w_perp(row, k) * out.xi.vals(row, k);
    }
    out.orth_residual(row) = std::abs(resid) / (fiber_mass + 1e-300);
    for (int k = 0; k < nz; ++k) {
      const double recon = out.w_parallel(row) * out.xi.vals(row, k) + out.w_perp(row, k);
      out.recon_error = std::max(out.recon_error, std::abs(recon - w(row, k)));
    }
  }
  return out;
}

Mat fiber_profiles_of(const FermiChart& chart, const Field& u) {
  if (!is_axisymmetric(u, 1e-9))
    throw ConfigError("fiber profiles need an axisymmetric field");
  TrigInterp interp = axi_interp(u.geom, axi_profile(u), +1);
  Mat out(int(chart.components.size()), chart.n_z);
  for (int c = 0; c < int(chart.components.size()); ++c)
    for (int k = 0; k < chart.n_z; ++k)
      out(c, k) = interp.eval(chart.to_geometry(c, chart.y(0), chart.z(k))(0));
  return out;
}

Vec fiber_profile_of(const FermiChart& chart, const Field& u) {
  Mat all = fiber_profiles_of(chart, u);
  return all.row(0).transpose();
}

double tube_quadratic_form(const FermiChart& chart, double eps, const Vec& u_fiber,
                           const DoubleWell& dw, const TubeField& a, const TubeField& b) {
  // single-component fiber data broadcast across components
  const int rows = chart.rows();
  const int nz = chart.n_z;
  Vec wz = Vec::Constant(nz, chart.z_step);
  wz(0) *= 0.5;
  wz(nz - 1) *= 0.5;
  Vec wpp(nz);
  for (int k = 0; k < nz; ++k) wpp(k) = dw.eval(u_fiber(k), 2);
  double acc = 0;
  for (int c = 0; c < int(chart.components.size()); ++c) {
    const auto& comp = chart.components[c];
    for (int iy = 0; iy < chart.n_y; ++iy) {
      const int row = c * chart.n_y + iy;
      for (int k = 0; k < nz; ++k) {
        const double z = chart.z(k);
        const double jac = comp.jacobian(z);
        const double gyy = comp.metric_yy(z);
        const double grad = a.dz(row, k) * b.dz(row, k) + a.dy(row, k) * b.dy(row, k) / gyy;
        acc += chart.y_step * wz(k) * jac *
               (eps * grad + wpp(k) * a.vals(row, k) * b.vals(row, k) / eps);
      }
    }
  }
  return acc;
}

double tube_energy_norm(const FermiChart& chart, double eps, const TubeField& a) {
  const int nz = chart.n_z;
  Vec wz = Vec::Constant(nz, chart.z_step);
  wz(0) *= 0.5;
  wz(nz - 1) *= 0.5;
  double acc = 0;
  for (int c = 0; c < int(chart.components.size()); ++c) {
    const auto& comp = chart.components[c];
    for (int iy = 0; iy < chart.n_y; ++iy) {
      const int row = c * chart.n_y + iy;
      for (int k = 0; k < nz; ++k) {
        const double jac = comp.jacobian(chart.z(k));
        const double gyy = comp.metric_yy(chart.z(k));
        const double grad =
            a.dz(row, k) * a.dz(row, k) + a.dy(row, k) * a.dy(row, k) / gyy;
        acc += chart.y_step * wz(k) * jac *
               (eps * grad + a.vals(row, k) * a.vals(row, k) / eps);
      }
    }
  }
  return acc;
}

namespace {

struct BankFunction {
  std::string label;
  std::function<double(double)> f, fprime;  // of the arclength parameter
};

std::vector<BankFunction> curve_bank(double len) {
  const double k1 = 2 * M_PI / len;
  return {
      {"1", [](double) { return 1.0; }, [](double) { return 0.0; }},
      {"cos", [k1](double y) { return std::cos(k1 * y); },
       [k1](double y) { return -k1 * std::sin(k1 * y); }},
      {"sin", [k1](double y) { return std::sin(k1 * y); },
       [k1](double y) { return k1 * std::cos(k1 * y); }},
      {"cos2", [k1](double y) { return std::cos(2 * k1 * y); },
       [k1](double y) { return -2 * k1 * std::sin(2 * k1 * y); }},
  };
}

TubeField separable_field(const FermiChart& chart, const std::function<double(double)>& f,
                          const std::function<double(double)>& fp, const Vec& fiber,
                          const Vec& fiber_dz) {
  const int rows = chart.rows();
  const int nz = chart.n_z;
  TubeField out;
  out.vals.resize(rows, nz);
  out.dz.resize(rows, nz);
  out.dy.resize(rows, nz);
  for (int c = 0; c < int(chart.components.size()); ++c) {
    for (int iy = 0; iy < chart.n_y; ++iy) {
      const int row = c * chart.n_y + iy;
      const double fv = f(chart.y(iy)), fd = fp(chart.y(iy));
      for (int k = 0; k < nz; ++k) {
        out.vals(row, k) = fv * fiber(k);
        out.dz(row, k) = fv * fiber_dz(k);
        out.dy(row, k) = fd * fiber(k);
      }
    }
  }
  return out;
}

}  // namespace

LemmaSuiteReport lemma_suite(const FermiChart& chart, const ProfileFamily& fam,
                             const ProfileTable& hbar, const ProfileTable& ibar, double eps,
                             const Field& u, const AmbientScalar& h_fn, const Vec& h_fit,
                             const DoubleWell& dw) {
  LemmaSuiteReport rep;
  rep.eps = eps;
  const double e0 = fam.e0;
  const int nz = chart.n_z;
  if (chart.components.size() != 1)
    throw ConfigError("lemma_suite: single-component charts only");
  const double len = chart.components[0].length;
  const double hconst = h_fit(0);

  // fiber data (axisymmetric solution, y-independent fibers)
  Vec u_fiber = fiber_profile_of(chart, u);
  Vec xi(nz), xi_dz(nz);
  const auto& h0 = h_fn;
  for (int k = 0; k < nz; ++k) {
    const double z = chart.z(k);
    const double t = (z - hconst) / eps;
    const double hv = chart_eval(chart, h0, 0, chart.y(0), z);
    xi(k) = hbar.deriv(t) + eps * hv * ibar.deriv(t);
    xi_dz(k) = (hbar.second(t) + eps * hv * ibar.second(t)) / eps;
  }

  // second fiber eigenstate, projected orthogonal to the composite profile
  double lam2 = 0;
  Vec e2grid = fiber_excited_state(fam.h, dw, &lam2);
  ProfileTable e2tab;
  e2tab.kind = ProfileKind::H;
  e2tab.t = fam.h.t;
  e2tab.v = e2grid;
  e2tab.dv.resize(e2grid.size());
  {
    const double hh = fam.h.step();
    for (int i = 0; i < e2grid.size(); ++i) {
      const int n = int(e2grid.size());
      if (i >= 2 && i < n - 2)
        e2tab.dv(i) =
            (e2grid(i - 2) - 8 * e2grid(i - 1) + 8 * e2grid(i + 1) - e2grid(i + 2)) / (12 * hh);
      else
        e2tab.dv(i) = 0;
    }
    e2tab.ddv.resize(e2grid.size());
    for (int i = 0; i < e2grid.size(); ++i)
      e2tab.ddv(i) = (dw.eval(fam.h.v(i), 2) - lam2) * e2grid(i);
    e2tab.d3v = Vec::Zero(e2grid.size());
    e2tab.tail_plus = e2tab.tail_minus = 0;
    e2tab.decay = std::sqrt(std::max(dw.eval(1.0, 2) - lam2, 0.1));
    e2tab.well = fam.well;
  }
  Vec omega_fiber(nz), omega_dz(nz);
  for (int k = 0; k < nz; ++k) {
    const double t = (chart.z(k) - hconst) / eps;
    omega_fiber(k) = e2tab.value(t);
    omega_dz(k) = e2tab.deriv(t) / eps;
  }
  // fiber projection enforcing the orthogonality constraint
  {
    double num = 0, den = 0;
    Vec wz = Vec::Constant(nz, chart.z_step);
    wz(0) *= 0.5;
    wz(nz - 1) *= 0.5;
    for (int k = 0; k < nz; ++k) {
      num += wz(k) * omega_fiber(k) * xi(k);
      den += wz(k) * xi(k) * xi(k);
    }
    omega_fiber -= (num / den) * xi;
    omega_dz -= (num / den) * xi_dz;
  }
  const double komega = 3.0 * 2 * M_PI / len;
  auto gomega = [komega](double y) { return std::cos(komega * y); };
  auto gomega_p = [komega](double y) { return -komega * std::sin(komega * y); };
  TubeField omega = separable_field(chart, gomega, gomega_p, omega_fiber, omega_dz);
  rep.omega_energy = tube_energy_norm(chart, eps, omega);
  rep.r59 = tube_quadratic_form(chart, eps, u_fiber, dw, omega, omega) / rep.omega_energy;

  // jacobi-form potential on the curve
  Vec pot = jacobi_potential(chart, h_fn, e0);

  for (const auto& bank : curve_bank(len)) {
    LemmaSuiteRow row;
    row.bank_label = bank.label;
    TubeField fxi = separable_field(chart, bank.f, bank.fprime, xi, xi_dz);
    const double q = tube_quadratic_form(chart, eps, u_fiber, dw, fxi, fxi);
    // Q_Gamma(f, f) on the curve
    double qg = 0, fnorm = 0;
    for (int iy = 0; iy < chart.n_y; ++iy) {
      const double y = chart.y(iy);
      const double fv = bank.f(y), fd = bank.fprime(y);
      qg += chart.y_step * (fd * fd - pot(iy) * fv * fv);
      fnorm += chart.y_step * (fd * fd + fv * fv);
    }
    row.q_gamma = qg;
    row.r57 = std::abs(q - eps * eps * e0 * qg);
    row.r57_over_eps2 = row.r57 / (eps * eps);
    row.r58 = std::abs(tube_quadratic_form(chart, eps, u_fiber, dw, fxi, omega));
    row.r58_normalized = row.r58 / (eps * eps * (fnorm + rep.omega_energy));
    rep.rows.push_back(std::move(row));
  }
  return rep;
}

std::vector<double> diffuse_eigenvalues_full_grid(const GeometryPtr& geom, double eps,
                                                  const Field& u, const DoubleWell& dw,
                                                  int count) {
  if (geom->kind() != ModelGeometry::Kind::Torus)
    throw ConfigError("full-grid eigenvalues: torus only");
  const int nx = geom->n_main(), ny = geom->n_sym(), n = nx * ny;
  const double hx = geom->main_extent() / nx, hy = geom->sym_extent() / ny;
  auto idx = [&](int i, int j) { return ((i + nx) % nx) * ny + ((j + ny) % ny); };
  std::vector<Eigen::Triplet<double>> trips;
  trips.reserve(size_t(5) * n);
  double lam_min_guess = 0;
  for (int i = 0; i < nx; ++i)
    for (int j = 0; j < ny; ++j) {
      const int row = idx(i, j);
      const double diag =
          eps * (2.0 / (hx * hx) + 2.0 / (hy * hy)) + dw.eval(u.vals(row), 2) / eps;
      lam_min_guess = std::min(lam_min_guess, dw.eval(u.vals(row), 2) / eps);
      trips.emplace_back(row, row, diag);
      trips.emplace_back(row, idx(i + 1, j), -eps / (hx * hx));
      trips.emplace_back(row, idx(i - 1, j), -eps / (hx * hx));
      trips.emplace_back(row, idx(i, j + 1), -eps / (hy * hy));
      trips.emplace_back(row, idx(i, j - 1), -eps / (hy * hy));
    }
  Eigen::SparseMatrix<double> a(n, n);
  a.setFromTriplets(trips.begin(), trips.end());
  const double sigma = lam_min_guess - 1.0;
  Eigen::SparseMatrix<double> shifted = a;
  for (int i = 0; i < n; ++i) shifted.coeffRef(i, i) -= sigma;
  Eigen::SparseLU<Eigen::SparseMatrix<double>> lu;
  lu.compute(shifted);
  if (lu.info() != Eigen::Success)
    throw EigenSolverError("full-grid eigenvalues: factorization failed");

  // Lanczos with full reorthogonalization on the shift-inverted operator
  const int m = std::min(n, std::max(3 * count + 20, 40));
  Mat v(n, m + 1);
  Vec alpha(m), beta(m);
  Vec q = Vec::Zero(n);
  for (int i = 0; i < n; ++i) q(i) = std::sin(0.37 * i + 0.2);
  q.normalize();
  v.col(0) = q;
  Vec prev = Vec::Zero(n);
  double beta_prev = 0;
  for (int k = 0; k < m; ++k) {
    Vec w = lu.solve(v.col(k));
    w -= beta_prev * prev;
    alpha(k) = v.col(k).dot(w);
    w -= alpha(k) * v.col(k);
    // full reorthogonalization
    for (int r = 0; r <= k; ++r) w -= v.col(r).dot(w) * v.col(r);
    beta(k) = w.norm();
    if (beta(k) < 1e-13) {
      // invariant subspace found
      for (int kk = k + 1; kk < m; ++kk) {
        alpha(kk) = alpha(k);
        beta(kk) = 0;
      }
      break;
    }
    prev = v.col(k);
    beta_prev = beta(k);
    v.col(k + 1) = w / beta(k);
  }
  Mat t = Mat::Zero(m, m);
  for (int k = 0; k < m; ++k) {
    t(k, k) = alpha(k);
    if (k + 1 < m) t(k, k + 1) = t(k + 1, k) = beta(k);
  }
  Eigen::SelfAdjointEigenSolver<Mat> es(t);
  std::vector<double> lams;
  for (int k = m - 1; k >= 0; --k) {
    const double mu = es.eigenvalues()(k);
    if (mu <= 0) continue;  // spurious for the shifted operator
    lams.push_back(sigma + 1.0 / mu);
  }
  std::sort(lams.begin(), lams.end());
  if (int(lams.size()) > count) lams.resize(count);
  return lams;
}

std::vector<LocalizationRow> localization_check(const GeometryPtr& geom, double eps,
                                                const HypersurfaceSpec& tube_spec, double z_max,
                                                const Operator& op, const SpectrumReport& rep,
                                                double lambda_cap) {
  std::vector<LocalizationRow> rows;
  for (int p = 0; p < int(rep.pairs.size()); ++p) {
    if (rep.pairs[p].lambda > eps * lambda_cap) continue;
    Field w = make_eigenfield(op, rep, p);
    double inside = 0, outside = 0;
    for (int i = 0; i < geom->n_main(); ++i) {
      for (int j = 0; j < geom->n_sym(); ++j) {
        const Vec2 pt{geom->main_coord(i), geom->sym_coord(j)};
        const double sd = signed_distance(geom, tube_spec, pt);
        const double m = geom->node_weight(i, j) * w.at(i, j) * w.at(i, j);
        if (std::abs(sd) < z_max) inside += m;
        else outside += m;
      }
    }
    LocalizationRow row;
    row.pair_index = p;
    row.rayleigh = rep.pairs[p].lambda;
    row.ratio = outside / (inside + 1e-300);
    rows.push_back(row);
  }
  return rows;
}

}  // namespace aclab
