#pragma once

#include "aclab/profiles.hpp"
#include "aclab/variations.hpp"

// Stability operators and their spectra: the diffuse operator
// -eps lap + W''(u)/eps assembled in angular-mode blocks, the Jacobi-type
// operator on the reference curve, index/nullity bookkeeping, and the
// quadratic-form decomposition over a Fermi tube.

namespace aclab {

struct ModeBlock {
  int m = 0;       // angular wavenumber (diffuse) or component id (sharp)
  int copies = 1;  // multiplicity carried by the block (cos/sin pairs)
  std::string label;
  // variational pair over a truncated trigonometric basis: quadratic form
  // matrix, mass Gram matrix, and basis values at the grid nodes
  Mat a;
  Mat gram;
  Mat nodal;
  Vec weights;     // node quadrature weights of the 1D line
  int parity = +1;  // main-coordinate parity class
};

struct Operator {
  std::string tag;  // "diffuse" or "sharp"
  double eps = 0;
  GeometryPtr geom;
  std::vector<ModeBlock> blocks;

  // symmetry defect of block matrices (exact zero by construction)
  double symmetry_defect() const;
};

Operator assemble_diffuse(const GeometryPtr& geom, double eps, const Field& u,
                          const DoubleWell& dw, int max_mode = 8);

Operator assemble_sharp(const SharpHypersurface& surface, const AmbientScalar& h_fn,
                        const FermiChart& chart, double e0);

struct EigPair {
  double lambda = 0;
  int block = 0;
  int index_in_block = 0;
  double residual = 0;
};

struct SpectrumReport {
  std::string tag;
  double eps = 0;
  std::vector<EigPair> pairs;  // ascending, multiplicity copies expanded
  double zero_threshold = 0;
  int index = 0, nullity = 0;
  double max_residual = 0;
  std::vector<Vec> block_values;
  std::vector<Mat> block_vectors;

  std::vector<double> eigenvalues() const {
    std::vector<double> v;
    for (const auto& p : pairs) v.push_back(p.lambda);
    return v;
  }
};

double default_zero_threshold(const std::string& tag, double eps);

struct EigenSolverError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

SpectrumReport eigs(const Operator& op, int count, double zero_threshold);

// nodal field of a computed eigenpair (cosine representative for m > 0)
Field make_eigenfield(const Operator& op, const SpectrumReport& report, int pair_index);

struct SpectrumComparisonRow {
  int ell = 0;  // 1-based
  double sharp = 0;
  std::vector<double> scaled_diffuse;  // eps^{-1} lambda_ell per ladder entry
  std::vector<double> gaps;
  double slope = 0;
};
struct SpectrumComparison {
  std::vector<double> ladder;
  std::vector<SpectrumComparisonRow> rows;
  bool truncated = false;
  std::vector<bool> index_agrees, nullity_agrees;  // per ladder entry
  int sharp_index = 0, sharp_nullity = 0;
};
SpectrumComparison compare_spectra(const std::vector<SpectrumReport>& diffuse,
                                   const SpectrumReport& sharp, int ell_max);

// --- tube decomposition -------------------------------------------------------

// scalar data on the chart product grid (component-major rows, z columns)
struct TubeField {
  Mat vals, dz, dy;  // rows = components * n_y, cols = n_z
};

// fiber profile Xi = Hbar'((z - h)/eps) + eps h_fn Ibar'((z - h)/eps)
TubeField composite_profile(const FermiChart& chart, const ProfileTable& hbar,
                            const ProfileTable& ibar, double eps, const AmbientScalar& h_fn,
                            const Vec& h_fit);

struct NormalDecomposition {
  Vec w_parallel;        // on the curve grid
  Mat w_perp;            // chart grid
  TubeField xi;
  Vec orth_residual;     // per curve node, fiber units
  double recon_error = 0;
};
struct DecompositionError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

NormalDecomposition decompose(const FermiChart& chart, const ProfileTable& hbar,
                              const ProfileTable& ibar, double eps, const AmbientScalar& h_fn,
                              const Vec& h_fit, const Mat& w);

// quadratic form of the diffuse operator restricted to the tube
double tube_quadratic_form(const FermiChart& chart, double eps, const Vec& u_fiber,
                           const DoubleWell& dw, const TubeField& a, const TubeField& b);

// energy-type norm int ( eps |grad w|^2 + w^2 / eps )
double tube_energy_norm(const FermiChart& chart, double eps, const TubeField& a);

// u sampled along the chart fibers (requires axisymmetric u)
Vec fiber_profile_of(const FermiChart& chart, const Field& u);
Mat fiber_profiles_of(const FermiChart& chart, const Field& u);

// second-order full-grid path (torus), shift-inverted Lanczos; kept to
// cross-validate the mode-block reduction at coarse resolution
std::vector<double> diffuse_eigenvalues_full_grid(const GeometryPtr& geom, double eps,
                                                  const Field& u, const DoubleWell& dw,
                                                  int count);

struct LemmaSuiteRow {
  std::string bank_label;
  double r57 = 0;            // |Q(f Xi, f Xi) - eps^2 e0 Q_Gamma(f, f)|
  double r57_over_eps2 = 0;
  double r58 = 0;            // |Q(f Xi, omega)|
  double r58_normalized = 0;
  double q_gamma = 0;
};
struct LemmaSuiteReport {
  double eps = 0;
  std::vector<LemmaSuiteRow> rows;
  double r59 = 0;  // Q(omega, omega) / energy norm, bounded below
  double omega_energy = 0;
};

LemmaSuiteReport lemma_suite(const FermiChart& chart, const ProfileFamily& fam,
                             const ProfileTable& hbar, const ProfileTable& ibar, double eps,
                             const Field& u, const AmbientScalar& h_fn, const Vec& h_fit,
                             const DoubleWell& dw);

struct LocalizationRow {
  int pair_index = 0;
  double rayleigh = 0;
  double ratio = 0;  // mass outside the tube over mass inside
};
std::vector<LocalizationRow> localization_check(const GeometryPtr& geom, double eps,
                                                const HypersurfaceSpec& tube_spec, double z_max,
                                                const Operator& op, const SpectrumReport& rep,
                                                double lambda_cap);

}  // namespace aclab
