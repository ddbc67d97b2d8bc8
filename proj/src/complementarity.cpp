#include "opalg/complementarity.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <queue>

#include <Eigen/Eigenvalues>

namespace opalg {

std::string to_string(ObjectiveKind kind) {
  switch (kind) {
    case ObjectiveKind::sum: return "sum";
    case ObjectiveKind::sum_of_squares: return "sum_of_squares";
    case ObjectiveKind::product: return "product";
    case ObjectiveKind::single: return "single";
  }
  return "unknown";
}

ObjectiveKind objective_kind_from_string(const std::string& name) {
  if (name == "sum") return ObjectiveKind::sum;
  if (name == "sum_of_squares") return ObjectiveKind::sum_of_squares;
  if (name == "product") return ObjectiveKind::product;
  if (name == "single") return ObjectiveKind::single;
  throw ValidationError("unknown objective kind '" + name + "'");
}

// ---------------------------------------------------------------------------
// Sphere optimizer

namespace {

struct StartResult {
  double value = std::numeric_limits<double>::infinity();
  Vector psi;
  int iterations = 0;
  bool converged = false;
};

StartResult descend(const SphereObjective& f, Vector psi, const OptimizerConfig& cfg, int start_index,
                    std::vector<TraceRow>* trace) {
  StartResult r;
  psi /= psi.norm();
  Vector grad;
  double value = f.value_and_gradient(psi, grad);
  double step = 1.0;
  int it = 0;
  for (; it < cfg.max_iterations; ++it) {
    if (trace) trace->push_back({start_index, it, value});
    // Riemannian gradient: drop the radial component.
    const double radial = (psi.dot(grad)).real();
    const Vector tangent = grad - radial * psi;
    const double gnorm2 = tangent.squaredNorm();
    if (std::sqrt(gnorm2) < cfg.grad_tol) {
      r.converged = true;
      break;
    }
    step = std::min(step * 2.0, 1e3);
    bool accepted = false;
    Vector candidate;
    double cand_value = 0.0;
    while (step > 1e-20) {
      candidate = psi - step * tangent;
      candidate /= candidate.norm();
      cand_value = f.value(candidate);
      if (cand_value <= value - 1e-4 * step * gnorm2) {
        accepted = true;
        break;
      }
      step *= cfg.backtrack;
    }
    if (!accepted) {
      // No descent is possible at working precision (a kink or a flat minimum).
      r.converged = true;
      break;
    }
    psi = candidate;
    value = f.value_and_gradient(psi, grad);
  }
  r.value = value;
  r.psi = psi;
  r.iterations = it;
  return r;
}

// Unit vector from hyperspherical angles theta (n-1, in [0, pi/2]) and phases phi (n-1).
Vector from_angles(const std::vector<double>& params, int n) {
  Vector psi(n);
  double radius = 1.0;
  for (int j = 0; j < n - 1; ++j) {
    const double theta = params[static_cast<std::size_t>(j)];
    const double phase = j == 0 ? 0.0 : params[static_cast<std::size_t>(n - 1 + j - 1)];
    psi(j) = std::polar(radius * std::cos(theta), phase);
    radius *= std::sin(theta);
  }
  psi(n - 1) = std::polar(radius, n >= 2 ? params[static_cast<std::size_t>(2 * n - 3)] : 0.0);
  return psi;
}

}  // namespace

BoundReport minimize_on_sphere(const SphereObjective& objective, int dim, const OptimizerConfig& cfg,
                               const std::vector<Vector>& extra_starts) {
  if (dim < 1) throw ValidationError("minimize_on_sphere: dimension must be >= 1");
  if (cfg.starts < 0) throw ValidationError("minimize_on_sphere: starts must be >= 0");
  if (!(cfg.backtrack > 0.0 && cfg.backtrack < 1.0))
    throw ValidationError("minimize_on_sphere: backtrack factor must lie in (0, 1)");
  Rng rng(cfg.seed);
  std::vector<Vector> starts;
  for (int k = 0; k < cfg.starts; ++k) starts.push_back(random_unit_vector(rng, dim));
  for (const Vector& v : extra_starts) {
    if (v.size() != dim) throw ValidationError("minimize_on_sphere: start vector has wrong dimension");
    if (v.norm() > 0) starts.push_back(v / v.norm());
  }
  if (starts.empty()) throw ValidationError("minimize_on_sphere: no start vectors");

  BoundReport report;
  report.seed = cfg.seed;
  report.starts = static_cast<int>(starts.size());
  report.infimum_estimate = std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < starts.size(); ++k) {
    StartResult r = descend(objective, starts[k], cfg, static_cast<int>(k), cfg.record_trace ? &report.trace : nullptr);
    report.iterations_total += r.iterations;
    if (r.converged) ++report.converged_starts;
    // Strict comparison keeps the lowest start index among ties.
    if (r.value < report.infimum_estimate) {
      report.infimum_estimate = r.value;
      report.argmin_state = r.psi;
    }
  }
  return report;
}

double grid_oracle_infimum(const std::function<double(const Vector&)>& value, int dim, int resolution) {
  if (dim < 1) throw ValidationError("grid_oracle_infimum: dimension must be >= 1");
  if (dim == 1) return value(Vector::Ones(1));
  if (resolution <= 0) resolution = dim == 2 ? 400 : dim == 3 ? 40 : dim == 4 ? 12 : 6;
  const int n_theta = dim - 1;
  const int n_params = 2 * dim - 2;
  const double half_pi = std::numbers::pi / 2.0;
  const double two_pi = 2.0 * std::numbers::pi;
  // theta grid has resolution + 1 points including both endpoints; phases are periodic.
  std::vector<int> counts(static_cast<std::size_t>(n_params));
  std::vector<double> spacing(static_cast<std::size_t>(n_params));
  for (int j = 0; j < n_params; ++j) {
    const bool is_theta = j < n_theta;
    counts[static_cast<std::size_t>(j)] = is_theta ? resolution + 1 : resolution;
    spacing[static_cast<std::size_t>(j)] = is_theta ? half_pi / resolution : two_pi / resolution;
  }

  using Entry = std::pair<double, std::vector<double>>;
  auto cmp = [](const Entry& a, const Entry& b) { return a.first < b.first; };
  std::priority_queue<Entry, std::vector<Entry>, decltype(cmp)> best(cmp);  // max-heap of the K best
  constexpr std::size_t kKeep = 8;

  std::vector<int> idx(static_cast<std::size_t>(n_params), 0);
  std::vector<double> params(static_cast<std::size_t>(n_params));
  while (true) {
    for (int j = 0; j < n_params; ++j)
      params[static_cast<std::size_t>(j)] = idx[static_cast<std::size_t>(j)] * spacing[static_cast<std::size_t>(j)];
    const double v = value(from_angles(params, dim));
    if (best.size() < kKeep) {
      best.emplace(v, params);
    } else if (v < best.top().first) {
      best.pop();
      best.emplace(v, params);
    }
    int j = 0;
    while (j < n_params && ++idx[static_cast<std::size_t>(j)] == counts[static_cast<std::size_t>(j)]) {
      idx[static_cast<std::size_t>(j)] = 0;
      ++j;
    }
    if (j == n_params) break;
  }

  double overall = std::numeric_limits<double>::infinity();
  while (!best.empty()) {
    auto [v, p] = best.top();
    best.pop();
    // Compass search in parameter space.
    double step = *std::max_element(spacing.begin(), spacing.end());
    while (step > 1e-10) {
      bool improved = false;
      for (int j = 0; j < n_params; ++j)
        for (double dir : {1.0, -1.0}) {
          std::vector<double> trial = p;
          trial[static_cast<std::size_t>(j)] += dir * step;
          const double tv = value(from_angles(trial, dim));
          if (tv < v) {
            v = tv;
            p = std::move(trial);
            improved = true;
          }
        }
      if (!improved) step *= 0.5;
    }
    overall = std::min(overall, v);
  }
  return overall;
}

// ---------------------------------------------------------------------------
// Deviation objectives

double pure_variance(const Matrix& a, const Vector& psi) {
  const Vector ap = a * psi;
  const double mean = psi.dot(ap).real();
  return (ap - mean * psi).squaredNorm();
}

namespace {

// Variance and its real gradient 2 dV/d conj(psi) = 2 (a^2 psi - 2 <a> a psi).
double variance_with_gradient(const Matrix& a, const Vector& psi, Vector& grad) {
  const Vector ap = a * psi;
  const double mean = psi.dot(ap).real();
  const Vector centred = ap - mean * psi;
  grad = 2.0 * (a * centred - mean * ap);
  return centred.squaredNorm();
}

constexpr double kSqrtGuard = 1e-300;

}  // namespace

SphereObjective deviation_objective(const Matrix& a_in, const Matrix* b_in, ObjectiveKind kind) {
  const Matrix a = a_in;
  const bool has_b = b_in != nullptr;
  const Matrix b = has_b ? *b_in : Matrix();
  SphereObjective f;
  f.value = [=](const Vector& psi) {
    const double va = pure_variance(a, psi);
    if (kind == ObjectiveKind::single) return std::sqrt(va);
    const double vb = pure_variance(b, psi);
    switch (kind) {
      case ObjectiveKind::sum: return std::sqrt(va) + std::sqrt(vb);
      case ObjectiveKind::sum_of_squares: return va + vb;
      case ObjectiveKind::product: return std::sqrt(va * vb);
      case ObjectiveKind::single: break;
    }
    return std::sqrt(va);
  };
  f.value_and_gradient = [=](const Vector& psi, Vector& grad) {
    Vector ga;
    const double va = variance_with_gradient(a, psi, ga);
    if (kind == ObjectiveKind::single) {
      const double da = std::sqrt(va);
      grad = ga / (2.0 * std::max(da, kSqrtGuard));
      return da;
    }
    Vector gb;
    const double vb = variance_with_gradient(b, psi, gb);
    switch (kind) {
      case ObjectiveKind::sum: {
        const double da = std::sqrt(va), db = std::sqrt(vb);
        grad = ga / (2.0 * std::max(da, kSqrtGuard)) + gb / (2.0 * std::max(db, kSqrtGuard));
        return da + db;
      }
      case ObjectiveKind::sum_of_squares:
        grad = ga + gb;
        return va + vb;
      case ObjectiveKind::product: {
        const double prod = std::sqrt(va * vb);
        grad = (vb * ga + va * gb) / (2.0 * std::max(prod, kSqrtGuard));
        return prod;
      }
      case ObjectiveKind::single: break;
    }
    return va;
  };
  return f;
}

double robertson_bound(const State& s, const Matrix& a, const Matrix& b) {
  require_same_dim(s.rho(), a, "robertson_bound");
  require_same_dim(a, b, "robertson_bound");
  require_hermitian(a, kStateTol, "robertson_bound");
  require_hermitian(b, kStateTol, "robertson_bound");
  return 0.5 * std::abs(expectation(s, commutator(a, b)));
}

namespace {

std::vector<Vector> eigenvector_starts(const Matrix& a, const Matrix* b) {
  std::vector<Vector> out;
  for (const Matrix* m : {&a, b}) {
    if (!m) continue;
    Eigen::SelfAdjointEigenSolver<Matrix> es(*m);
    for (Eigen::Index k = 0; k < es.eigenvectors().cols(); ++k) out.push_back(es.eigenvectors().col(k));
  }
  return out;
}

}  // namespace

BoundReport minimize_deviation_functional(const Matrix& a, const Matrix* b, ObjectiveKind kind,
                                          const OptimizerConfig& cfg) {
  if (a.rows() == 0) throw ValidationError("minimize_deviation_functional: zero-dimensional input");
  require_hermitian(a, kStateTol, "minimize_deviation_functional");
  if (kind == ObjectiveKind::single) {
    if (b) throw ValidationError("minimize_deviation_functional: kind=single takes one observable");
  } else {
    if (!b) throw ValidationError("minimize_deviation_functional: kind requires two observables");
    require_same_dim(a, *b, "minimize_deviation_functional");
    require_hermitian(*b, kStateTol, "minimize_deviation_functional");
  }
  const Matrix ah = (a + a.adjoint()) * 0.5;
  const Matrix bh = b ? Matrix((*b + b->adjoint()) * 0.5) : Matrix();
  const Matrix* bp = b ? &bh : nullptr;
  const SphereObjective f = deviation_objective(ah, bp, kind);
  const int dim = static_cast<int>(a.rows());
  BoundReport report = minimize_on_sphere(f, dim, cfg, cfg.eigenvector_starts ? eigenvector_starts(ah, bp)
                                                                             : std::vector<Vector>{});
  report.kind = kind;
  report.objective_name = to_string(kind);
  if (cfg.grid_check && dim <= 4) {
    report.grid_infimum = grid_oracle_infimum(f.value, dim, cfg.grid_resolution);
    report.grid_gap = report.infimum_estimate - *report.grid_infimum;
  }
  return report;
}

Certification certify_complementarity(const Matrix& a, const Matrix& b, const OptimizerConfig& cfg) {
  Certification c;
  c.report = minimize_deviation_functional(a, &b, ObjectiveKind::sum, cfg);
  c.threshold = cfg.threshold.value_or(1e-6 * (operator_norm(a) + operator_norm(b)));
  c.complementary = c.report.infimum_estimate > c.threshold;
  return c;
}

SharpState common_sharp_state(const Matrix& a, const Matrix& b, double tol) {
  require_hermitian(a, kStateTol, "common_sharp_state");
  require_hermitian(b, kStateTol, "common_sharp_state");
  require_same_dim(a, b, "common_sharp_state");
  SharpState out;
  out.commutator_norm = operator_norm(commutator(a, b));
  if (out.commutator_norm >= tol) return out;
  const Matrix ah = (a + a.adjoint()) * 0.5;
  const Matrix bh = (b + b.adjoint()) * 0.5;
  Eigen::SelfAdjointEigenSolver<Matrix> es(ah, Eigen::EigenvaluesOnly);
  const double range = es.eigenvalues().maxCoeff() - es.eigenvalues().minCoeff();
  const auto clusters = spectral_clusters(ah, 1e-8 * std::max(range, 1.0));
  // b leaves each eigenspace of a invariant; diagonalize it there.
  const Matrix& v = clusters.front().vectors;
  const Matrix compressed = v.adjoint() * bh * v;
  Eigen::SelfAdjointEigenSolver<Matrix> inner((compressed + compressed.adjoint()) * 0.5);
  Vector psi = v * inner.eigenvectors().col(0);
  out.vector = psi / psi.norm();
  return out;
}

// ---------------------------------------------------------------------------
// Oscillator and the Weyl-cosine experiment

OscillatorModel build_oscillator(int n, double s, double hbar) {
  if (n < 4) throw ValidationError("build_oscillator: truncation N must be >= 4");
  if (!(s > 0.0) || !(hbar > 0.0)) throw ValidationError("build_oscillator: s and hbar must be positive");
  Matrix lower = Matrix::Zero(n, n);
  for (int k = 1; k < n; ++k) lower(k - 1, k) = std::sqrt(static_cast<double>(k));
  const Matrix raise = lower.adjoint();
  OscillatorModel m;
  m.truncation_dim = n;
  m.scale_s = s;
  m.hbar = hbar;
  m.q_matrix = std::sqrt(hbar / (2.0 * s)) * (raise + lower);
  m.p_matrix = Complex(0.0, std::sqrt(hbar * s / 2.0)) * (raise - lower);
  return m;
}

WeylCosineObjective::WeylCosineObjective(const OscillatorModel& model)
    : q_scale_(std::sqrt(model.scale_s / model.hbar)), p_scale_(1.0 / std::sqrt(model.hbar * model.scale_s)) {
  require_hermitian(model.q_matrix, 1e-10, "WeylCosineObjective");
  require_hermitian(model.p_matrix, 1e-10, "WeylCosineObjective");
  // cos of a shifted operator shares its eigenvectors, so one decomposition
  // per observable serves every recentring.
  Eigen::SelfAdjointEigenSolver<Matrix> qs(model.q_matrix);
  Eigen::SelfAdjointEigenSolver<Matrix> ps(model.p_matrix);
  q_values_ = qs.eigenvalues();
  q_vectors_ = qs.eigenvectors();
  p_values_ = ps.eigenvalues();
  p_vectors_ = ps.eigenvectors();
}

double WeylCosineObjective::term(const Eigen::VectorXd& values, const Matrix& vectors, double scale,
                                 const Vector& psi, Vector* grad) const {
  const Vector amp = vectors.adjoint() * psi;
  const Eigen::VectorXd w = amp.cwiseAbs2();
  const double mean = w.dot(values);
  const Eigen::ArrayXd theta = scale * (values.array() - mean);
  const Eigen::ArrayXd c = theta.cos();
  const Eigen::ArrayXd sn = theta.sin();
  const double cbar = (w.array() * c).sum();
  const double var = (w.array() * c * c).sum() - cbar * cbar;
  if (grad) {
    const double dmean = 2.0 * scale * (w.array() * sn * (c - cbar)).sum();
    const Eigen::ArrayXd dw = c * c - 2.0 * cbar * c + dmean * values.array();
    *grad = 2.0 * (vectors * (dw.matrix().cast<Complex>().asDiagonal() * amp));
  }
  return var;
}

double WeylCosineObjective::value(const Vector& psi) const {
  return term(q_values_, q_vectors_, q_scale_, psi, nullptr) + term(p_values_, p_vectors_, p_scale_, psi, nullptr);
}

double WeylCosineObjective::value_and_gradient(const Vector& psi, Vector& grad) const {
  Vector gq, gp;
  const double v = term(q_values_, q_vectors_, q_scale_, psi, &gq) + term(p_values_, p_vectors_, p_scale_, psi, &gp);
  grad = gq + gp;
  return v;
}

SphereObjective WeylCosineObjective::as_sphere_objective() const {
  SphereObjective f;
  f.value = [this](const Vector& psi) { return value(psi); };
  f.value_and_gradient = [this](const Vector& psi, Vector& g) { return value_and_gradient(psi, g); };
  return f;
}

Vector squeezed_vacuum(int n, double r) {
  Matrix lower = Matrix::Zero(n, n);
  for (int k = 1; k < n; ++k) lower(k - 1, k) = std::sqrt(static_cast<double>(k));
  const Matrix raise = lower.adjoint();
  // exp((r/2)(a^2 - a^dag^2)) = exp(-i t H) with hermitian H = (i/2)(a^2 - a^dag^2), t = r.
  const Matrix h = Complex(0.0, 0.5) * (lower * lower - raise * raise);
  Eigen::SelfAdjointEigenSolver<Matrix> es((h + h.adjoint()) * 0.5);
  Vector phases(n);
  for (int k = 0; k < n; ++k) phases(k) = std::polar(1.0, -r * es.eigenvalues()(k));
  const Matrix u = es.eigenvectors() * phases.asDiagonal() * es.eigenvectors().adjoint();
  Vector psi = u.col(0);
  return psi / psi.norm();
}

double WeylCosineReport::relative_change() const {
  if (!half) return 0.0;
  return std::abs(main.infimum_estimate - half->infimum_estimate) / std::abs(main.infimum_estimate);
}

namespace {

BoundReport run_weyl_cosine(const OscillatorModel& model, const OptimizerConfig& cfg, double* grid_value) {
  const WeylCosineObjective obj(model);
  std::vector<Vector> extra;
  double best = std::numeric_limits<double>::infinity();
  for (int k = -12; k <= 12; ++k) {
    const Vector v = squeezed_vacuum(model.truncation_dim, 0.125 * k);
    extra.push_back(v);
    best = std::min(best, obj.value(v));
  }
  if (grid_value) *grid_value = best;
  BoundReport r = minimize_on_sphere(obj.as_sphere_objective(), obj.dim(), cfg, extra);
  r.kind = ObjectiveKind::sum_of_squares;
  r.objective_name = "weyl_cosine";
  return r;
}

}  // namespace

WeylCosineReport weyl_cosine_experiment(const OscillatorModel& model, const OptimizerConfig& cfg,
                                        bool with_half_truncation) {
  if (model.truncation_dim < 4 || model.q_matrix.rows() != model.truncation_dim ||
      model.p_matrix.rows() != model.truncation_dim)
    throw ValidationError("weyl_cosine_experiment: invalid oscillator model");
  WeylCosineReport out;
  out.main = run_weyl_cosine(model, cfg, &out.squeezed_grid_value);
  if (with_half_truncation && model.truncation_dim / 2 >= 4) {
    const OscillatorModel half = build_oscillator(model.truncation_dim / 2, model.scale_s, model.hbar);
    out.half = run_weyl_cosine(half, cfg, nullptr);
  }
  return out;
}

CollapseReport bounded_product_collapse(const Matrix& a, const Matrix& b, const OptimizerConfig& cfg,
                                        double tol) {
  OptimizerConfig local = cfg;
  CollapseReport out;
  out.product_infimum = minimize_deviation_functional(a, &b, ObjectiveKind::product, local).infimum_estimate;
  out.single_infimum = minimize_deviation_functional(a, nullptr, ObjectiveKind::single, local).infimum_estimate;
  out.bound = out.single_infimum * std::sqrt(2.0) * operator_norm(b);
  out.holds = out.product_infimum <= out.bound + tol;
  return out;
}

}  // namespace opalg
