#include "ned/dichotomy.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <sstream>

namespace ned {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

Matrix thin_q(const Matrix& m) {
  if (m.cols() == 0) return Matrix(m.rows(), 0);
  Eigen::HouseholderQR<Matrix> qr(m);
  return qr.householderQ() * Matrix::Identity(m.rows(), m.cols());
}

double relative_residual(const Matrix& diff, double scale) {
  return diff.norm() / std::max(scale, std::numeric_limits<double>::min());
}

}  // namespace

// --- ProjectorSequence -----------------------------------------------------

ProjectorSequence ProjectorSequence::from_bases(const MatrixSequence& sys, Window window, long l_ref,
                                                std::vector<Matrix> range,
                                                std::vector<Matrix> kernel) {
  const auto count = static_cast<std::size_t>(window.size());
  if (range.size() != count || kernel.size() != count)
    throw Error(ErrorKind::InvalidArgument, "one range and one kernel basis per fiber required");
  if (!window.contains(l_ref))
    throw Error(ErrorKind::IndexOutOfRange, "reference index outside projector window");

  ProjectorSequence p;
  p.window_ = window;
  p.l_ref_ = l_ref;
  p.dim_ = sys.dimension();
  p.rank_ = static_cast<int>(range.front().cols());
  p.coords_.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    const Matrix& s = range[i];
    const Matrix& u = kernel[i];
    if (s.rows() != p.dim_ || u.rows() != p.dim_ || s.cols() != p.rank_ ||
        s.cols() + u.cols() != p.dim_)
      throw Error(ErrorKind::InvalidArgument, "range/kernel bases do not split R^N");
    Matrix frame(p.dim_, p.dim_);
    frame << s, u;
    Eigen::JacobiSVD<Matrix> svd(frame);
    const auto& sv = svd.singularValues();
    if (!(sv(sv.size() - 1) > 1e-10 * sv(0))) {
      std::ostringstream os;
      os << "range and kernel nearly intersect at fiber " << window.lo + static_cast<long>(i);
      throw Error(ErrorKind::IllConditionedBasis, os.str());
    }
    p.coords_.push_back(frame.inverse());
  }
  p.range_ = std::move(range);
  p.kernel_ = std::move(kernel);

  double worst = 0.0;
  for (long k = window.lo; k < window.hi; ++k) {
    const Matrix a = sys.transition(k);
    const Matrix pk = p.projector(k);
    const Matrix pk1 = p.projector(k + 1);
    const double scale = norm2(a) * std::max({norm2(pk), norm2(pk1), 1.0});
    worst = std::max(worst, relative_residual(pk1 * a - a * pk, scale));
  }
  p.invariance_residual_ = worst;
  return p;
}

std::size_t ProjectorSequence::index(long k) const {
  if (!window_.contains(k)) {
    std::ostringstream os;
    os << "fiber " << k << " outside projector window [" << window_.lo << ", " << window_.hi << "]";
    throw Error(ErrorKind::IndexOutOfRange, os.str());
  }
  return static_cast<std::size_t>(k - window_.lo);
}

Matrix ProjectorSequence::projector(long k) const {
  const auto i = index(k);
  return range_[i] * coords_[i].topRows(rank_);
}

ProjectorSequence ProjectorSequence::restricted(const Window& w) const {
  if (!window_.contains(w))
    throw Error(ErrorKind::IndexOutOfRange, "restriction window not inside projector window");
  ProjectorSequence p = *this;
  const auto first = index(w.lo);
  const auto last = index(w.hi) + 1;
  p.window_ = w;
  p.range_.assign(range_.begin() + first, range_.begin() + last);
  p.kernel_.assign(kernel_.begin() + first, kernel_.begin() + last);
  p.coords_.assign(coords_.begin() + first, coords_.begin() + last);
  p.l_ref_ = std::clamp(l_ref_, w.lo, w.hi);
  return p;
}

int numerical_rank(const Matrix& m, double tol) {
  if (m.size() == 0) return 0;
  Eigen::JacobiSVD<Matrix> svd(m);
  const auto& sv = svd.singularValues();
  if (sv(0) == 0.0) return 0;
  int r = 0;
  for (Eigen::Index i = 0; i < sv.size(); ++i)
    if (sv(i) > tol * std::max(1.0, sv(0))) ++r;
  return r;
}

ProjectorSequence propagate_projector(const MatrixSequence& sys, const Matrix& p_ref, long l_ref,
                                      const Window& w) {
  const int n = sys.dimension();
  if (p_ref.rows() != n || p_ref.cols() != n)
    throw Error(ErrorKind::NotAProjector, "reference projector has wrong shape");
  const double scale = std::max(1.0, norm2(p_ref));
  if ((p_ref * p_ref - p_ref).norm() > 1e-8 * scale)
    throw Error(ErrorKind::NotAProjector, "P_ref is not idempotent");

  Eigen::JacobiSVD<Matrix> svd(p_ref, Eigen::ComputeFullU | Eigen::ComputeFullV);
  const int r = numerical_rank(p_ref);
  Matrix s0 = svd.matrixU().leftCols(r);
  Matrix u0 = svd.matrixV().rightCols(n - r);

  const Window hull{std::min(w.lo, l_ref), std::max(w.hi, l_ref)};
  const auto count = static_cast<std::size_t>(hull.size());
  std::vector<Matrix> range(count), kernel(count);
  const auto at = [&](long k) { return static_cast<std::size_t>(k - hull.lo); };
  range[at(l_ref)] = s0;
  kernel[at(l_ref)] = u0;
  for (long k = l_ref + 1; k <= hull.hi; ++k) {
    const Matrix a = sys.transition(k - 1);
    range[at(k)] = thin_q(a * range[at(k - 1)]);
    kernel[at(k)] = thin_q(a * kernel[at(k - 1)]);
  }
  for (long k = l_ref - 1; k >= hull.lo; --k) {
    const Matrix ainv = sys.inverse_transition(k);
    range[at(k)] = thin_q(ainv * range[at(k + 1)]);
    kernel[at(k)] = thin_q(ainv * kernel[at(k + 1)]);
  }
  return ProjectorSequence::from_bases(sys, hull, l_ref, std::move(range), std::move(kernel));
}

// --- certificates ------------------------------------------------------------

void validate(const DichotomyCertificate& cert) {
  if (!(cert.K >= 1.0)) throw Error(ErrorKind::InvalidArgument, "K must be >= 1");
  if (!(cert.alpha > 0.0 && cert.alpha < 1.0))
    throw Error(ErrorKind::InvalidArgument, "alpha must lie in (0, 1)");
  if (!(cert.epsilon >= 1.0)) throw Error(ErrorKind::InvalidArgument, "epsilon must be >= 1");
  if (cert.flavor == Flavor::UniformED && cert.epsilon != 1.0)
    throw Error(ErrorKind::InvalidArgument, "uniform ED requires epsilon = 1");
  if (cert.flavor == Flavor::StrongNED && !is_strong(cert))
    throw Error(ErrorKind::InvalidArgument, "strong NED requires alpha * epsilon^2 < 1");
}

bool is_strong(double alpha, double epsilon) { return alpha * epsilon * epsilon < 1.0; }

bool is_strong(const DichotomyCertificate& cert) { return is_strong(cert.alpha, cert.epsilon); }

std::vector<double> FitConfig::default_alpha_grid() {
  std::vector<double> g;
  for (int i = 0; i < 64; ++i) g.push_back(std::exp(-6.0 * (i + 1) / 64.0));
  return g;
}

std::vector<double> FitConfig::default_eps_grid() {
  std::vector<double> g;
  for (int i = 0; i < 16; ++i) g.push_back(std::exp(0.05 * i));
  return g;
}

// --- profile -----------------------------------------------------------------

DichotomyProfile::DichotomyProfile(const MatrixSequence& sys, const ProjectorSequence& proj,
                                   const Window& w)
    : window_(w), rank_(proj.rank()) {
  if (!proj.window().contains(w))
    throw Error(ErrorKind::IndexOutOfRange, "projector sequence does not cover the window");
  const int n = sys.dimension();
  const int r = rank_;
  const Window in = w.inner();
  const auto is_inner = [&](long k, long l) { return in.contains(k) && in.contains(l); };
  const auto span = static_cast<std::size_t>(w.size());

  // Restricted one-step maps on the stable and unstable bundles.
  std::vector<Matrix> stable_step, unstable_step;
  stable_step.reserve(span);
  unstable_step.reserve(span);
  for (long j = w.lo; j < w.hi; ++j) {
    const Matrix a = sys.transition(j);
    if (r > 0) stable_step.push_back(proj.range_basis(j + 1).transpose() * a * proj.range_basis(j));
    if (r < n) {
      const Matrix ainv = a.partialPivLu().inverse();
      unstable_step.push_back(proj.kernel_basis(j).transpose() * ainv * proj.kernel_basis(j + 1));
    }
  }

  if (r > 0) {
    stable_.reserve(span * (span + 1) / 2);
    for (long l = w.lo; l <= w.hi; ++l) {
      Matrix m = proj.coordinates(l).topRows(r);
      double log_scale = 0.0;
      for (long k = l;; ++k) {
        const double nm = norm2(m);
        log_scale += std::log(nm);
        stable_.push_back({k, l, log_scale, static_cast<double>(k - l), is_inner(k, l)});
        if (k == w.hi) break;
        m = stable_step[static_cast<std::size_t>(k - w.lo)] * (m / nm);
      }
    }
  }
  if (r < n) {
    unstable_.reserve(span * (span + 1) / 2);
    for (long l = w.lo; l <= w.hi; ++l) {
      Matrix m = proj.coordinates(l).bottomRows(n - r);
      double log_scale = 0.0;
      for (long k = l;; --k) {
        const double nm = norm2(m);
        log_scale += std::log(nm);
        unstable_.push_back({k, l, log_scale, static_cast<double>(l - k), is_inner(k, l)});
        if (k == w.lo) break;
        m = unstable_step[static_cast<std::size_t>(k - 1 - w.lo)] * (m / nm);
      }
    }
  }
}

DichotomyProfile DichotomyProfile::weighted(double gamma) const {
  if (!(gamma > 0.0)) throw Error(ErrorKind::NonpositiveWeight, "gamma must be positive");
  const double lg = std::log(gamma);
  DichotomyProfile p = *this;
  for (auto& e : p.stable_) e.log_norm -= e.distance * lg;
  for (auto& e : p.unstable_) e.log_norm += e.distance * lg;
  return p;
}

ViolationReport DichotomyProfile::excess(double log_alpha, double log_eps, ExponentMode mode,
                                         double* inner_max) const {
  ViolationReport rep;
  double in = kNegInf;
  const auto scan = [&](const std::vector<Entry>& entries, double& worst, Witness& wit) {
    for (const auto& e : entries) {
      const double x = e.log_norm - e.distance * log_alpha - nonuniform_exponent(e.l, mode) * log_eps;
      if (x > worst) {
        worst = x;
        wit = {e.k, e.l};
      }
      if (e.inner && x > in) in = x;
    }
  };
  scan(stable_, rep.max_stable_excess, rep.stable_witness);
  scan(unstable_, rep.max_unstable_excess, rep.unstable_witness);
  rep.pass = rep.max_stable_excess <= kExcessTolerance && rep.max_unstable_excess <= kExcessTolerance;
  if (inner_max) *inner_max = in;
  return rep;
}

// --- verification and fitting -----------------------------------------------

ViolationReport verify_certificate(const DichotomyProfile& profile, const DichotomyCertificate& cert,
                                   ExponentMode mode) {
  validate(cert);
  ViolationReport rep = profile.excess(std::log(cert.alpha), std::log(cert.epsilon), mode);
  const double lk = std::log(cert.K);
  rep.max_stable_excess -= lk;
  rep.max_unstable_excess -= lk;
  rep.pass = rep.max_stable_excess <= kExcessTolerance && rep.max_unstable_excess <= kExcessTolerance;
  return rep;
}

ViolationReport verify_certificate(const MatrixSequence& sys, const DichotomyCertificate& cert,
                                   const Window& w, ExponentMode mode) {
  const ProjectorSequence& p = cert.projector;
  if (p.dimension() == sys.dimension() && p.window().contains(w))
    return verify_certificate(DichotomyProfile(sys, p, w), cert, mode);
  const ProjectorSequence prop =
      propagate_projector(sys, p.reference_projector(), p.reference_index(), w);
  return verify_certificate(DichotomyProfile(sys, prop, w), cert, mode);
}

double minimal_log_constant(const DichotomyProfile& profile, double alpha, double epsilon,
                            ExponentMode mode) {
  const ViolationReport rep = profile.excess(std::log(alpha), std::log(epsilon), mode);
  return std::max(rep.max_stable_excess, rep.max_unstable_excess);
}

namespace {

struct Trial {
  double full;
  double inner;
};

Trial trial(const DichotomyProfile& profile, double log_alpha, double log_eps, ExponentMode mode) {
  double in = kNegInf;
  const ViolationReport rep = profile.excess(log_alpha, log_eps, mode, &in);
  return {std::max(rep.max_stable_excess, rep.max_unstable_excess), in};
}

bool admissible(const Trial& t, const FitConfig& config) {
  return t.full - t.inner <= config.stability_tol && std::max(t.full, 0.0) <= std::log(config.k_cap);
}

}  // namespace

std::optional<DichotomyCertificate> fit_constants(const DichotomyProfile& profile,
                                                  const ProjectorSequence& proj,
                                                  const std::vector<double>& alpha_grid,
                                                  const std::vector<double>& eps_grid,
                                                  const FitConfig& config) {
  if (alpha_grid.empty() || eps_grid.empty())
    throw Error(ErrorKind::EmptyGrid, "alpha and epsilon grids must be nonempty");
  for (double a : alpha_grid)
    if (!(a > 0.0 && a < 1.0)) throw Error(ErrorKind::InvalidArgument, "alpha grid values must lie in (0,1)");
  for (double e : eps_grid)
    if (!(e >= 1.0)) throw Error(ErrorKind::InvalidArgument, "epsilon grid values must be >= 1");

  std::optional<DichotomyCertificate> best;
  double best_rate = 0.0;
  for (double alpha : alpha_grid) {
    for (double eps : eps_grid) {
      if (!is_strong(alpha, eps)) continue;
      const Trial t = trial(profile, std::log(alpha), std::log(eps), config.exponent);
      if (!admissible(t, config)) continue;
      const double k = std::exp(std::max(t.full, 0.0));
      const double rate = alpha * eps * eps;
      // total order: rate, then K, then epsilon, then alpha
      const bool better = !best || rate < best_rate ||
                          (rate == best_rate &&
                           (k < best->K || (k == best->K && (eps < best->epsilon ||
                                                             (eps == best->epsilon && alpha < best->alpha)))));
      if (better) {
        best = DichotomyCertificate{proj, k, alpha, eps,
                                    eps == 1.0 ? Flavor::UniformED : Flavor::StrongNED};
        best_rate = rate;
      }
    }
  }
  return best;
}

std::optional<DichotomyCertificate> fit_constants(const MatrixSequence& sys,
                                                  const ProjectorSequence& proj, const Window& w,
                                                  const std::vector<double>& alpha_grid,
                                                  const std::vector<double>& eps_grid,
                                                  const FitConfig& config) {
  if (alpha_grid.empty() || eps_grid.empty())
    throw Error(ErrorKind::EmptyGrid, "alpha and epsilon grids must be nonempty");
  return fit_constants(DichotomyProfile(sys, proj, w), proj, alpha_grid, eps_grid, config);
}

namespace {

// max_d (c[d] + d t) for t >= 0: the excess at log alpha = -t, one line per
// pair distance d (the largest intercept among pairs at that distance).
struct Envelope {
  std::vector<double> c;

  void add(std::size_t d, double v) {
    if (d >= c.size()) c.resize(d + 1, kNegInf);
    c[d] = std::max(c[d], v);
  }

  bool empty() const {
    return std::none_of(c.begin(), c.end(), [](double v) { return v > kNegInf; });
  }

  double at(double t) const {
    double m = kNegInf;
    for (std::size_t d = 0; d < c.size(); ++d)
      if (c[d] > kNegInf) m = std::max(m, c[d] + static_cast<double>(d) * t);
    return m;
  }

  // Abscissae where the active line changes, from the upper hull.
  std::vector<double> breakpoints() const {
    std::vector<std::size_t> hull;
    const auto cross = [&](std::size_t i, std::size_t j) {
      return (c[i] - c[j]) / static_cast<double>(j - i);
    };
    for (std::size_t d = 0; d < c.size(); ++d) {
      if (!(c[d] > kNegInf)) continue;
      while (hull.size() >= 2 &&
             cross(hull[hull.size() - 2], d) <= cross(hull[hull.size() - 2], hull.back()))
        hull.pop_back();
      hull.push_back(d);
    }
    std::vector<double> out;
    for (std::size_t i = 1; i < hull.size(); ++i) out.push_back(cross(hull[i - 1], hull[i]));
    return out;
  }
};

}  // namespace

std::optional<StrongConstants> search_strong_constants(const DichotomyProfile& profile,
                                                       const FitConfig& config) {
  constexpr double kLogAlphaFloor = -50.0;
  // The extension test tolerates neutral growth at rates ~ stability_tol / L,
  // so alpha eps^2 < 1 must hold with a margin well above that.
  constexpr double kStrictMargin = 1e-6;
  const double log_cap = std::log(config.k_cap);
  // solved with half the tolerance so that re-evaluation never lands outside
  const double tol = 0.5 * config.stability_tol;

  // Smallest admissible log alpha at log eps = y, exactly: both maxima are
  // convex piecewise linear in t = -log alpha, so is their difference
  // between merged hull breakpoints. +inf when nothing is admissible.
  const auto x_star = [&](double y) {
    constexpr double kNone = std::numeric_limits<double>::infinity();
    Envelope full, inner;
    for (const auto* side : {&profile.stable(), &profile.unstable()})
      for (const auto& e : *side) {
        const double v = e.log_norm - nonuniform_exponent(e.l, config.exponent) * y;
        const auto d = static_cast<std::size_t>(e.distance);
        full.add(d, v);
        if (e.inner) inner.add(d, v);
      }
    if (full.empty() || inner.empty() || full.at(0.0) > log_cap) return kNone;
    double t_max = -kLogAlphaFloor;
    if (full.at(t_max) > log_cap) {
      double lo = 0.0, hi = t_max;
      for (int i = 0; i < 100; ++i) {
        const double m = 0.5 * (lo + hi);
        (full.at(m) <= log_cap ? lo : hi) = m;
      }
      t_max = lo;
    }
    std::vector<double> pts{0.0, t_max};
    for (const auto* env : {&full, &inner})
      for (double t : env->breakpoints())
        if (t > 0.0 && t < t_max) pts.push_back(t);
    std::sort(pts.begin(), pts.end());
    const auto gap = [&](double t) { return full.at(t) - inner.at(t); };
    double gb = gap(pts.back());
    if (gb <= tol) return -pts.back();
    for (std::size_t i = pts.size() - 1; i > 0; --i) {
      const double a = pts[i - 1], b = pts[i], ga = gap(a);
      if (ga <= tol) return -(a + (tol - ga) / (gb - ga) * (b - a));
      gb = ga;
    }
    return kNone;
  };
  const auto rate = [&](double y) { return x_star(y) + 2.0 * y; };

  // the rate is not unimodal in y, so a grid locates the basin first
  std::vector<double> ys;
  for (int i = 0; i <= 100; ++i) ys.push_back(0.01 * i);
  for (int i = 11; i <= 50; ++i) ys.push_back(0.1 * i);
  for (int i = 6; i <= 25; ++i) ys.push_back(static_cast<double>(i));
  std::size_t best = 0;
  std::vector<double> fs;
  for (std::size_t i = 0; i < ys.size(); ++i) {
    fs.push_back(rate(ys[i]));
    if (fs[i] < fs[best]) best = i;
  }
  if (!(fs[best] < -kStrictMargin)) return std::nullopt;

  // golden-section refinement between the grid neighbours
  double best_y = ys[best], best_f = fs[best];
  if (best_y > 0.0) {
    const double gr = 0.5 * (std::sqrt(5.0) - 1.0);
    double a = ys[best - 1], b = best + 1 < ys.size() ? ys[best + 1] : ys[best];
    double c = b - gr * (b - a), d = a + gr * (b - a);
    double fc = rate(c), fd = rate(d);
    for (int i = 0; i < 60 && b - a > 1e-12; ++i) {
      if (fc <= fd) {
        b = d, d = c, fd = fc;
        c = b - gr * (b - a);
        fc = rate(c);
      } else {
        a = c, c = d, fc = fd;
        d = a + gr * (b - a);
        fd = rate(d);
      }
    }
    const double y = fc <= fd ? c : d;
    if (std::min(fc, fd) < best_f) best_y = y, best_f = std::min(fc, fd);
  }
  const double best_x = x_star(best_y);
  const Trial t = trial(profile, best_x, best_y, config.exponent);
  if (!admissible(t, config)) return std::nullopt;
  return StrongConstants{best_x, best_y, std::max(t.full, 0.0)};
}

GrowthBound fit_growth_bound(const MatrixSequence& sys, const Window& w,
                             const std::vector<double>& eps_grid, const FitConfig& config) {
  if (eps_grid.empty()) throw Error(ErrorKind::EmptyGrid, "epsilon grid must be nonempty");
  const int n = sys.dimension();
  const Window in = w.inner();

  struct Entry {
    double log_norm;
    double distance;
    long l;
    bool inner;
    bool forward;
  };
  std::vector<Entry> entries;
  std::vector<Matrix> fwd, bwd;
  double step_bound = 0.0;
  for (long j = w.lo; j < w.hi; ++j) {
    fwd.push_back(sys.transition(j));
    bwd.push_back(fwd.back().partialPivLu().inverse());
    step_bound = std::max({step_bound, std::log(norm2(fwd.back())), std::log(norm2(bwd.back()))});
  }
  for (long l = w.lo; l <= w.hi; ++l) {
    entries.push_back({0.0, 0.0, l, in.contains(l), true});
    entries.push_back({0.0, 0.0, l, in.contains(l), false});
    Matrix m = Matrix::Identity(n, n);
    double log_scale = 0.0;
    for (long k = l + 1; k <= w.hi; ++k) {
      m = fwd[static_cast<std::size_t>(k - 1 - w.lo)] * m;
      const double nm = norm2(m);
      log_scale += std::log(nm);
      m /= nm;
      entries.push_back({log_scale, static_cast<double>(k - l), l, in.contains(k) && in.contains(l), true});
    }
    m = Matrix::Identity(n, n);
    log_scale = 0.0;
    for (long k = l - 1; k >= w.lo; --k) {
      m = bwd[static_cast<std::size_t>(k - w.lo)] * m;
      const double nm = norm2(m);
      log_scale += std::log(nm);
      m /= nm;
      entries.push_back({log_scale, static_cast<double>(l - k), l, in.contains(k) && in.contains(l), false});
    }
  }

  // side 0 holds k >= l, side 1 holds k <= l
  const auto eval = [&](double x, double y) {
    std::array<Trial, 2> t{Trial{kNegInf, kNegInf}, Trial{kNegInf, kNegInf}};
    for (const auto& e : entries) {
      Trial& s = t[e.forward ? 0 : 1];
      const double v = e.log_norm - e.distance * x - nonuniform_exponent(e.l, config.exponent) * y;
      s.full = std::max(s.full, v);
      if (e.inner) s.inner = std::max(s.inner, v);
    }
    return t;
  };
  // Each side must pass the extension test on its own, as the rank-N and
  // rank-0 resolvent tests see only one side.
  const auto stable = [&](double x, double y) {
    const auto t = eval(x, y);
    return t[0].full - t[0].inner <= config.stability_tol && t[1].full - t[1].inner <= config.stability_tol;
  };

  std::optional<GrowthBound> best;
  for (double eps : eps_grid) {
    if (!(eps >= 1.0)) throw Error(ErrorKind::InvalidArgument, "epsilon grid values must be >= 1");
    const double y = std::log(eps);
    double hi = step_bound + 1.0;
    while (!stable(hi, y) && hi < 1e3) hi *= 2.0;
    if (!stable(hi, y)) continue;
    double x = 0.0;
    if (!stable(0.0, y)) {
      double lo = 0.0;
      for (int i = 0; i < 60; ++i) {
        const double m = 0.5 * (lo + hi);
        (stable(m, y) ? hi : lo) = m;
      }
      x = hi;
    }
    const auto t = eval(x, y);
    const GrowthBound g{std::exp(std::max(t[0].full, t[1].full)), std::exp(x), eps};
    // a is bisected, so values within the bisection noise count as ties
    const double noise = 1e-9 * best.value_or(g).a;
    if (!best || g.a < best->a - noise || (g.a <= best->a + noise && g.epsilon < best->epsilon)) best = g;
  }
  if (!best) throw Error(ErrorKind::InvalidArgument, "no growth bound found on the epsilon grid");
  return *best;
}

}  // namespace ned
