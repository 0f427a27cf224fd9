#include "ned/spectrum.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

namespace ned {

namespace {

const double kLog2 = std::log(2.0);

Matrix thin_q(const Matrix& m) {
  if (m.cols() == 0) return Matrix(m.rows(), 0);
  Eigen::HouseholderQR<Matrix> qr(m);
  return qr.householderQ() * Matrix::Identity(m.rows(), m.cols());
}

struct ScaledProduct {
  Matrix phi;  // Phi(to, from) / exp(log_scale)
  double log_scale = 0.0;
};

// Phi(to, from) with per-step renormalization.
ScaledProduct scaled_evolution(const MatrixSequence& sys, long to, long from) {
  const int n = sys.dimension();
  ScaledProduct p{Matrix::Identity(n, n), 0.0};
  const auto renorm = [&p] {
    const double s = p.phi.norm();
    p.phi /= s;
    p.log_scale += std::log(s);
  };
  if (to > from) {
    for (long j = from; j < to; ++j) {
      p.phi = sys.transition(j) * p.phi;
      renorm();
    }
  } else {
    for (long j = from - 1; j >= to; --j) {
      p.phi = sys.inverse_transition(j) * p.phi;
      renorm();
    }
  }
  return p;
}

// Log singular values of Phi(l + h, l) in ascending order, together with the
// matching right singular vectors. Small singular values are taken from the
// inverse product so that both ends of the spectrum are resolved.
struct LogSvd {
  Vector log_sv;  // ascending
  Matrix vectors;  // column i belongs to log_sv(i)
};

LogSvd log_svd(const MatrixSequence& sys, long l, long h) {
  const ScaledProduct fwd = scaled_evolution(sys, l + h, l);
  const ScaledProduct bwd = scaled_evolution(sys, l, l + h);
  Eigen::JacobiSVD<Matrix> sf(fwd.phi, Eigen::ComputeFullV);
  Eigen::JacobiSVD<Matrix> sb(bwd.phi, Eigen::ComputeFullU);
  const int n = sys.dimension();
  LogSvd out{Vector(n), Matrix(n, n)};
  const double trust = std::log(1e-8);
  for (int i = 0; i < n; ++i) {
    // ascending index i: i-th largest of the inverse, (n-1-i)-th largest of Phi
    const double from_bwd = -(std::log(sb.singularValues()(i)) + bwd.log_scale);
    const double sv_f = sf.singularValues()(n - 1 - i);
    const bool fwd_ok = sv_f > 0.0 && std::log(sv_f) > trust;
    out.log_sv(i) = fwd_ok ? std::log(sv_f) + fwd.log_scale : from_bwd;
    out.vectors.col(i) = fwd_ok ? Matrix(sf.matrixV().col(n - 1 - i)) : Matrix(sb.matrixU().col(i));
  }
  return out;
}

// Weighted and eps-normalized log singular values of Phi_gamma(l + h, l).
Vector split_values(const LogSvd& s, double gamma, long h, double eps, long l, ExponentMode mode) {
  return s.log_sv.array() - static_cast<double>(h) * std::log(gamma) -
         nonuniform_exponent(l, mode) * std::log(eps);
}

void require_gap(const Vector& v, long l) {
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    if (std::abs(v(i)) < kLog2) {
      std::ostringstream os;
      os << "singular value cluster near 1 at fiber " << l;
      throw Error(ErrorKind::NoSpectralGap, os.str());
    }
  }
}

// Dominant `rank`-dimensional left singular subspace of a scaled product.
Matrix dominant_subspace(const ScaledProduct& p, int rank) {
  Eigen::JacobiSVD<Matrix> svd(p.phi, Eigen::ComputeFullU);
  return svd.matrixU().leftCols(rank);
}

// Number of fibers beyond the window edge reachable through transitions that
// exist and pass the invertibility check, capped at `cap`.
long usable_room(const MatrixSequence& sys, const Window& w, long cap, int dir) {
  for (long j = 1; j <= cap; ++j) {
    try {
      sys.transition(dir > 0 ? w.hi + j - 1 : w.lo - j);
    } catch (const Error&) {
      return j - 1;
    }
  }
  return cap;
}

}  // namespace

std::string_view to_string(Status s) {
  switch (s) {
    case Status::Resolvent: return "resolvent";
    case Status::Spectrum: return "spectrum";
    case Status::Undecided: return "undecided";
  }
  return "unknown";
}

BundleBasis stable_bundle(const MatrixSequence& sys, double gamma, long l, long horizon, double eps,
                          ExponentMode mode) {
  if (!(gamma > 0.0)) throw Error(ErrorKind::NonpositiveWeight, "gamma must be positive");
  if (horizon <= 0) throw Error(ErrorKind::InvalidArgument, "horizon must be positive");
  const LogSvd s = log_svd(sys, l, horizon);
  const Vector v = split_values(s, gamma, horizon, eps, l, mode);
  require_gap(v, l);
  const auto d = static_cast<int>((v.array() <= 0.0).count());
  return {l, thin_q(s.vectors.leftCols(d))};
}

BundleBasis unstable_bundle(const MatrixSequence& sys, double gamma, long l, long horizon,
                            double eps, ExponentMode mode) {
  if (!(gamma > 0.0)) throw Error(ErrorKind::NonpositiveWeight, "gamma must be positive");
  if (horizon <= 0) throw Error(ErrorKind::InvalidArgument, "horizon must be positive");
  // backward: Phi_gamma(l - h, l) = gamma^{h} Phi(l - h, l)
  const LogSvd s = log_svd(sys, l, -horizon);
  const Vector v = split_values(s, 1.0 / gamma, horizon, eps, l, mode);
  require_gap(v, l);
  const auto d = static_cast<int>((v.array() <= 0.0).count());
  return {l, thin_q(s.vectors.leftCols(d))};
}

BundleBasis intersect_subspaces(const BundleBasis& b1, const BundleBasis& b2) {
  if (b1.fiber != b2.fiber || b1.ambient() != b2.ambient())
    throw Error(ErrorKind::FiberMismatch, "subspaces live on different fibers");
  const int n = b1.ambient();
  if (b1.dim() == 0 || b2.dim() == 0) return {b1.fiber, Matrix(n, 0)};
  Eigen::JacobiSVD<Matrix> svd(b1.basis.transpose() * b2.basis, Eigen::ComputeFullU);
  const auto count = static_cast<int>((svd.singularValues().array() > 1.0 - 1e-8).count());
  return {b1.fiber, thin_q(b1.basis * svd.matrixU().leftCols(count))};
}

ProjectorSequence invariant_splitting(const MatrixSequence& sys, const Window& w, int rank,
                                      long horizon) {
  const int n = sys.dimension();
  if (rank < 0 || rank > n) throw Error(ErrorKind::InvalidArgument, "rank outside [0, N]");
  if (auto f = sys.fiber_range(); f && !f->contains(w))
    throw Error(ErrorKind::IndexOutOfRange, "window outside the fiber range of the table");
  const long room_hi = usable_room(sys, w, 2 * horizon, +1);
  const long room_lo = usable_room(sys, w, 2 * horizon, -1);

  // Start points outside the window; most of the available room goes to the
  // guess horizon, since on strongly nonuniform systems a short horizon far
  // from the origin sees the local oscillation rather than the trend.
  const long m_hi = std::min(horizon, room_hi / 4);
  const long g_hi = room_hi - m_hi;
  const long m_lo = std::min(horizon, room_lo / 4);
  const long g_lo = room_lo - m_lo;
  const long t_hi = w.hi + m_hi;
  const long t_lo = w.lo - m_lo;

  // Stable guess at t_hi: dominant subspace of Phi(t_hi, t_hi + g), the
  // directions contracted most by forward evolution. With no room, fall back
  // to the dominant subspace of the inverse of the last step.
  Matrix s = g_hi > 0 ? dominant_subspace(scaled_evolution(sys, t_hi, t_hi + g_hi), rank)
                      : dominant_subspace(scaled_evolution(sys, t_hi - 1, t_hi), rank);
  if (g_hi == 0) s = thin_q(sys.transition(t_hi - 1) * s);
  Matrix u = g_lo > 0 ? dominant_subspace(scaled_evolution(sys, t_lo, t_lo - g_lo), n - rank)
                      : dominant_subspace(scaled_evolution(sys, t_lo + 1, t_lo), n - rank);
  if (g_lo == 0) u = thin_q(sys.inverse_transition(t_lo) * u);

  const auto count = static_cast<std::size_t>(w.size());
  std::vector<Matrix> range(count), kernel(count);
  const auto at = [&w](long k) { return static_cast<std::size_t>(k - w.lo); };
  for (long k = t_hi; k >= w.lo; --k) {
    if (k < t_hi) s = thin_q(sys.inverse_transition(k) * s);
    if (w.contains(k)) range[at(k)] = s;
  }
  for (long k = t_lo; k <= w.hi; ++k) {
    if (k > t_lo) u = thin_q(sys.transition(k - 1) * u);
    if (w.contains(k)) kernel[at(k)] = u;
  }
  return ProjectorSequence::from_bases(sys, w, w.mid(), std::move(range), std::move(kernel));
}

// --- resolvent test -------------------------------------------------------

SpectralAnalyzer::SpectralAnalyzer(MatrixSequence sys, SpectrumConfig config)
    : sys_(std::move(sys)), config_(std::move(config)) {
  if (config_.horizon <= 0) throw Error(ErrorKind::InvalidArgument, "horizon must be positive");
}

const SpectralAnalyzer::Cached& SpectralAnalyzer::cached(const Window& w, int rank) {
  const auto key = std::make_tuple(w.lo, w.hi, rank);
  auto it = cache_.find(key);
  if (it != cache_.end()) return it->second;
  Cached c;
  try {
    c.splitting = invariant_splitting(sys_, w, rank, config_.horizon);
    c.profile.emplace(sys_, *c.splitting, w);
  } catch (const Error&) {
    c.splitting.reset();
    c.profile.reset();
  }
  return cache_.emplace(key, std::move(c)).first->second;
}

std::vector<int> SpectralAnalyzer::candidate_ranks(double gamma, const Window& w) const {
  const int n = sys_.dimension();
  int preferred = 0;
  try {
    const long l = w.mid();
    long h = config_.horizon;
    if (auto f = sys_.fiber_range()) h = std::min(h, f->hi - l);
    if (h > 0) {
      const Vector v = split_values(log_svd(sys_, l, h), gamma, h, config_.bundle_eps, l,
                                    config_.fit.exponent);
      preferred = static_cast<int>((v.array() <= 0.0).count());
    }
  } catch (const Error&) {
  }
  std::vector<int> ranks(static_cast<std::size_t>(n + 1));
  std::iota(ranks.begin(), ranks.end(), 0);
  std::stable_sort(ranks.begin(), ranks.end(), [preferred](int a, int b) {
    return std::abs(a - preferred) < std::abs(b - preferred);
  });
  return ranks;
}

std::optional<ResolventVerdict> SpectralAnalyzer::try_window(double gamma, const Window& w) {
  for (int rank : candidate_ranks(gamma, w)) {
    const Cached& c = cached(w, rank);
    if (!c.profile) continue;
    const DichotomyProfile weighted = c.profile->weighted(gamma);
    const auto found = search_strong_constants(weighted, config_.fit);
    if (!found) continue;
    DichotomyCertificate cert;
    cert.projector = *c.splitting;
    cert.K = std::exp(found->log_k);
    cert.alpha = std::exp(found->log_alpha);
    cert.epsilon = std::exp(found->log_eps);
    cert.flavor = found->log_eps == 0.0 ? Flavor::UniformED : Flavor::StrongNED;
    ResolventVerdict v;
    v.gamma = gamma;
    v.status = Status::Resolvent;
    v.certificate = std::move(cert);
    v.stable_dim = rank;
    return v;
  }
  return std::nullopt;
}

ResolventVerdict SpectralAnalyzer::test(double gamma, const Window& w) {
  if (!(gamma > 0.0)) throw Error(ErrorKind::NonpositiveWeight, "gamma must be positive");
  if (auto v = try_window(gamma, w)) return *v;
  ResolventVerdict out;
  out.gamma = gamma;
  out.status = Status::Spectrum;
  const Window wide = sys_.clip(w.doubled());
  if (wide != w && try_window(gamma, wide)) out.status = Status::Undecided;
  return out;
}

ResolventVerdict resolvent_test(const MatrixSequence& sys, double gamma, const Window& w,
                                const SpectrumConfig& config) {
  SpectralAnalyzer analyzer(sys, config);
  return analyzer.test(gamma, w);
}

// --- spectrum estimate ----------------------------------------------------

namespace {

bool is_resolvent(const ResolventVerdict& v) { return v.status == Status::Resolvent; }

class Scanner {
 public:
  Scanner(SpectralAnalyzer& analyzer, const Window& w, double tol)
      : analyzer_(analyzer), w_(w), tol_(tol) {}

  const ResolventVerdict& at(double gamma) {
    auto it = tested_.find(gamma);
    if (it == tested_.end()) it = tested_.emplace(gamma, analyzer_.test(gamma, w_)).first;
    return it->second;
  }

  // Bisects (a, b) until every status or dimension change sits in a bracket
  // of relative width <= tol.
  void refine(double a, double b) {
    const ResolventVerdict& va = at(a);
    const ResolventVerdict& vb = at(b);
    const bool ra = is_resolvent(va), rb = is_resolvent(vb);
    if (ra && rb && va.stable_dim == vb.stable_dim) return;
    if (!ra && !rb) return;
    if (b / a - 1.0 <= tol_) return;
    const double m = std::sqrt(a * b);
    at(m);
    refine(a, m);
    refine(m, b);
  }

  const std::map<double, ResolventVerdict>& tested() const { return tested_; }

 private:
  SpectralAnalyzer& analyzer_;
  Window w_;
  double tol_;
  std::map<double, ResolventVerdict> tested_;
};

ResolventVerdict convention_cut(double gamma, int dim) {
  ResolventVerdict v;
  v.gamma = gamma;
  v.status = Status::Spectrum;
  v.stable_dim = dim;
  return v;
}

SpectrumEstimate run_estimate(const MatrixSequence& sys, const Window& w,
                              std::optional<std::pair<double, double>> bracket,
                              const SpectrumConfig& config) {
  if (auto f = sys.fiber_range(); f && !f->contains(w))
    throw Error(ErrorKind::IndexOutOfRange, "window outside the fiber range of the table");
  if (!(config.bisect_tol > 0.0)) throw Error(ErrorKind::InvalidArgument, "bisect_tol must be positive");
  if (config.grid_points < 2) throw Error(ErrorKind::InvalidArgument, "grid needs at least two points");

  SpectrumEstimate est;
  est.window = w;
  est.horizon = config.horizon;
  est.bisect_tol = config.bisect_tol;
  const bool user_bracket = bracket.has_value();
  if (!user_bracket) {
    const GrowthBound g = fit_growth_bound(sys, w, config.eps_grid, config.fit);
    est.growth = g;
    const double reach = g.a * g.epsilon * g.epsilon;
    bracket = std::make_pair(1.0 / reach / config.bracket_widening, reach * config.bracket_widening);
  }
  const auto [lo, hi] = *bracket;
  if (!(lo > 0.0 && hi > lo)) throw Error(ErrorKind::InvalidArgument, "bracket must satisfy 0 < lo < hi");
  est.bracket_lo = lo;
  est.bracket_hi = hi;

  SpectralAnalyzer analyzer(sys, config);
  // each boundary gets half the tolerance, so a point spectrum comes out
  // no wider than bisect_tol
  Scanner scan(analyzer, w, 0.5 * config.bisect_tol);
  if (!user_bracket && (!is_resolvent(scan.at(lo)) || !is_resolvent(scan.at(hi)))) {
    std::ostringstream os;
    os << "bracket [" << lo << ", " << hi << "] endpoints not both resolvent; widen the bracket";
    throw Error(ErrorKind::BracketNotResolvent, os.str());
  }

  std::vector<double> grid(static_cast<std::size_t>(config.grid_points));
  const double step = std::log(hi / lo) / (config.grid_points - 1);
  for (std::size_t i = 0; i < grid.size(); ++i) grid[i] = lo * std::exp(step * static_cast<double>(i));
  grid.back() = hi;
  for (double g : grid) scan.at(g);
  for (std::size_t i = 0; i + 1 < grid.size(); ++i) scan.refine(grid[i], grid[i + 1]);

  // Walk the tested points in order and assemble intervals.
  const auto& pts = scan.tested();
  const ResolventVerdict* prev = nullptr;
  bool open = false;
  bool undecided = false;
  for (const auto& [gamma, v] : pts) {
    est.scan.push_back({gamma, v.status, v.stable_dim});
    if (v.status == Status::Undecided) undecided = true;
    if (!prev) {
      if (!is_resolvent(v)) {
        SpectralInterval iv;
        iv.lo = iv.lo_inner = gamma;
        iv.unbounded_below = true;
        est.intervals.push_back(iv);
        open = true;
      }
    } else if (is_resolvent(*prev) && !is_resolvent(v)) {
      SpectralInterval iv;
      iv.lo = prev->gamma;
      iv.lo_inner = gamma;
      est.intervals.push_back(iv);
      open = true;
    } else if (!is_resolvent(*prev) && is_resolvent(v)) {
      est.intervals.back().hi = gamma;
      est.intervals.back().hi_inner = prev->gamma;
      open = false;
    } else if (is_resolvent(*prev) && is_resolvent(v) && prev->stable_dim != v.stable_dim) {
      SpectralInterval iv;
      iv.lo = prev->gamma;
      iv.hi = gamma;
      iv.lo_inner = iv.hi_inner = std::sqrt(prev->gamma * gamma);
      est.intervals.push_back(iv);
    }
    prev = &v;
  }
  if (open) {
    est.intervals.back().hi = est.intervals.back().hi_inner = prev->gamma;
    est.intervals.back().unbounded_above = true;
  }

  // Cut points: the bracket ends and the resolvent point nearest the log
  // center of every gap.
  const int n = sys.dimension();
  const ResolventVerdict& first = pts.begin()->second;
  const ResolventVerdict& last = pts.rbegin()->second;
  est.cuts.push_back(is_resolvent(first) ? first : convention_cut(first.gamma, 0));
  for (std::size_t i = 0; i + 1 < est.intervals.size(); ++i) {
    const double a = est.intervals[i].hi, b = est.intervals[i + 1].lo;
    const double center = 0.5 * (std::log(a) + std::log(b));
    const ResolventVerdict* best = nullptr;
    for (auto it = pts.lower_bound(a); it != pts.end() && it->first <= b; ++it) {
      if (!is_resolvent(it->second)) continue;
      if (!best || std::abs(std::log(it->first) - center) < std::abs(std::log(best->gamma) - center))
        best = &it->second;
    }
    est.cuts.push_back(best ? *best : convention_cut(std::sqrt(a * b), est.cuts.back().stable_dim));
  }
  if (!est.intervals.empty())
    est.cuts.push_back(is_resolvent(last) ? last : convention_cut(last.gamma, n));

  // Lemma 2.3: dims never decrease along resolvent points and strictly
  // increase across each interval.
  int running = -1;
  for (const auto& [gamma, v] : pts) {
    if (!is_resolvent(v)) continue;
    if (v.stable_dim < running) est.monotone_dims = false;
    running = std::max(running, v.stable_dim);
  }
  for (std::size_t i = 0; i + 1 < est.cuts.size(); ++i)
    if (est.cuts[i + 1].stable_dim <= est.cuts[i].stable_dim) est.monotone_dims = false;
  if (!est.monotone_dims) {
    est.saturated = false;
    est.diagnostics.emplace_back("NonMonotoneDims: stable dimensions violate monotonicity; window likely too short");
  }
  if (undecided) {
    est.saturated = false;
    est.diagnostics.emplace_back("undecided verdicts present; treated as spectrum");
  }
  return est;
}

}  // namespace

SpectrumEstimate estimate_spectrum(const MatrixSequence& sys, const Window& w,
                                   std::optional<std::pair<double, double>> bracket,
                                   const SpectrumConfig& config) {
  SpectrumEstimate est = run_estimate(sys, w, bracket, config);
  if (!config.check_saturation) return est;

  SpectrumConfig twice = config;
  twice.horizon = 2 * config.horizon;
  twice.check_saturation = false;
  const SpectrumEstimate other =
      run_estimate(sys, w, std::make_pair(est.bracket_lo, est.bracket_hi), twice);
  bool same = other.intervals.size() == est.intervals.size() &&
              other.cuts.size() == est.cuts.size();
  for (std::size_t i = 0; same && i < est.cuts.size(); ++i)
    same = other.cuts[i].stable_dim == est.cuts[i].stable_dim;
  for (std::size_t i = 0; same && i < est.intervals.size(); ++i) {
    const auto moved = [&](double x, double y) { return std::abs(x / y - 1.0) > config.bisect_tol; };
    same = !moved(other.intervals[i].lo, est.intervals[i].lo) &&
           !moved(other.intervals[i].hi, est.intervals[i].hi);
  }
  if (!same) {
    est.saturated = false;
    est.diagnostics.emplace_back("doubling the horizon changed the interval structure");
  }
  return est;
}

std::vector<BundleBasis> spectral_bundles(const MatrixSequence& sys, const SpectrumEstimate& est,
                                          long l, long horizon) {
  if (est.cuts.empty()) throw Error(ErrorKind::InvalidArgument, "estimate has no cut points");
  const int n = sys.dimension();
  const Window fiber{l, l};
  std::vector<BundleBasis> stable, unstable;
  for (const auto& cut : est.cuts) {
    const ProjectorSequence split = invariant_splitting(sys, fiber, cut.stable_dim, horizon);
    stable.push_back({l, split.range_basis(l)});
    unstable.push_back({l, split.kernel_basis(l)});
  }
  std::vector<BundleBasis> w;
  w.push_back(stable.front());
  for (std::size_t i = 1; i < est.cuts.size(); ++i)
    w.push_back(intersect_subspaces(unstable[i - 1], stable[i]));
  w.push_back(unstable.back());

  int total = 0;
  Matrix stacked(n, 0);
  for (const auto& b : w) {
    total += b.dim();
    Matrix next(n, stacked.cols() + b.dim());
    next << stacked, b.basis;
    stacked = std::move(next);
  }
  if (total != n || numerical_rank(stacked) != n) {
    std::ostringstream os;
    os << "spectral bundles at fiber " << l << " have total dimension " << total << " and rank "
       << (stacked.cols() ? numerical_rank(stacked) : 0) << ", expected " << n;
    throw Error(ErrorKind::WhitneyFailure, os.str());
  }
  return w;
}

namespace {

// sup over x in A of the log-distance from x to B.
double directed_log_distance(const std::vector<SpectralInterval>& a,
                             const std::vector<SpectralInterval>& b) {
  const auto dist = [&b](double x) {
    double best = std::numeric_limits<double>::infinity();
    for (const auto& iv : b) {
      const double lo = std::log(iv.lo), hi = std::log(iv.hi);
      best = std::min(best, x < lo ? lo - x : (x > hi ? x - hi : 0.0));
    }
    return best;
  };
  double worst = 0.0;
  for (const auto& iv : a) {
    const double lo = std::log(iv.lo), hi = std::log(iv.hi);
    worst = std::max({worst, dist(lo), dist(hi)});
    // interior points of A farthest from B sit at the centers of B's gaps
    for (std::size_t j = 0; j + 1 < b.size(); ++j) {
      const double c = 0.5 * (std::log(b[j].hi) + std::log(b[j + 1].lo));
      if (lo < c && c < hi) worst = std::max(worst, dist(c));
    }
  }
  return worst;
}

}  // namespace

double interval_hausdorff(const std::vector<SpectralInterval>& a,
                          const std::vector<SpectralInterval>& b) {
  if (a.empty() && b.empty()) return 0.0;
  if (a.empty() || b.empty()) return std::numeric_limits<double>::infinity();
  const double d = std::max(directed_log_distance(a, b), directed_log_distance(b, a));
  return std::expm1(d);
}

CandidateComparison compare_to_candidates(const SpectralInterval& interval,
                                          std::vector<std::pair<double, double>> candidates,
                                          double tol) {
  CandidateComparison c;
  c.candidates = std::move(candidates);
  for (std::size_t i = 0; i < c.candidates.size(); ++i) {
    const auto [lo, hi] = c.candidates[i];
    const double err = std::max(std::abs(interval.lo - lo) / lo, std::abs(interval.hi - hi) / hi);
    c.relative_errors.push_back(err);
    if (c.matched < 0 && err <= tol) c.matched = static_cast<int>(i);
  }
  for (std::size_t i = 0; i < c.candidates.size(); ++i)
    for (std::size_t j = i + 1; j < c.candidates.size(); ++j) {
      const auto& x = c.candidates[i];
      const auto& y = c.candidates[j];
      if (std::abs(x.first - y.first) / y.first > tol || std::abs(x.second - y.second) / y.second > tol)
        c.candidates_disagree = true;
    }
  return c;
}

std::vector<std::pair<double, double>> oscillating_scalar_candidates(double omega, double a) {
  return {{std::exp(-omega - a), std::exp(-omega + a)},
          {std::exp(-omega - 5.0 * a), std::exp(-omega + 5.0 * a)}};
}

}  // namespace ned
