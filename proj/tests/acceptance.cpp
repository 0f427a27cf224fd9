// One pass/fail line per acceptance criterion. Exit status is the number of
// failed criteria.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <limits>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "ned/reducibility.hpp"
#include "support.hpp"

using namespace ned;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

Matrix m2(double a, double b, double c, double d) {
  Matrix m(2, 2);
  m << a, b, c, d;
  return m;
}

struct Outcome {
  bool pass = true;
  std::ostringstream detail;

  void check(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      detail << " [failed: " << what << "]";
    }
  }
};

int report(int id, const std::function<void(Outcome&)>& body) {
  Outcome o;
  o.detail.precision(4);
  try {
    body(o);
  } catch (const std::exception& e) {
    o.pass = false;
    o.detail << " exception: " << e.what();
  }
  std::printf("criterion %d: %s%s\n", id, o.pass ? "PASS" : "FAIL", o.detail.str().c_str());
  std::fflush(stdout);
  return o.pass ? 0 : 1;
}

Matrix diag_p(int n, int r) {
  Matrix p = Matrix::Zero(n, n);
  for (int i = 0; i < r; ++i) p(i, i) = 1.0;
  return p;
}

DichotomyCertificate paper_certificate(const MatrixSequence& sys, const Window& w, double eps) {
  return {propagate_projector(sys, diag_p(2, 1), 0, w), std::exp(0.9), std::exp(-0.9), eps,
          Flavor::StrongNED};
}

// Largest |log||Phi(k,l)P_l|| - log bound| over pairs with k and l even, and
// the largest signed excess in `top`.
double even_pair_gap(const MatrixSequence& sys, const DichotomyCertificate& c, const Window& w,
                     double& top) {
  double worst = 0.0;
  top = -std::numeric_limits<double>::infinity();
  for (long l = w.lo; l <= w.hi; ++l) {
    if (l % 2) continue;
    const Matrix p = c.projector.projector(l), q = Matrix::Identity(2, 2) - p;
    for (long k = w.lo; k <= w.hi; ++k) {
      if (k % 2) continue;
      const Matrix part = k >= l ? Matrix(evolution(sys, k, l) * p) : Matrix(evolution(sys, k, l) * q);
      const double bound = std::log(c.K) + std::abs(k - l) * std::log(c.alpha) +
                           std::abs(l) * std::log(c.epsilon);
      const double excess = std::log(norm2(part)) - bound;
      worst = std::max(worst, std::abs(excess));
      top = std::max(top, excess);
    }
  }
  return worst;
}

void criterion1(Outcome& o) {
  const auto t0 = Clock::now();
  const auto sys = builtin_example("paper_2d", {1.0, 0.1});
  const Window w{-30, 30};
  const auto cert = paper_certificate(sys, w, std::exp(0.2));
  const auto rep = verify_certificate(sys, cert, w);
  o.detail << " excess(stable,unstable)=(" << rep.max_stable_excess << "," << rep.max_unstable_excess
           << ")";
  o.check(rep.pass, "certificate (e^0.9, e^-0.9, e^0.2) verifies");

  double top = 0.0;
  const double gap = even_pair_gap(sys, cert, w, top);
  o.detail << " even-pair max|excess|=" << gap << " max excess=" << top;
  o.check(gap <= 1e-9, "zero excess at even pairs within 1e-9");

  // least-squares slope of log K_min(L) at eps = 1
  const double ls[] = {10, 20, 30};
  double ks[3];
  for (int i = 0; i < 3; ++i) {
    const long L = static_cast<long>(ls[i]);
    const Window wl{-L, L};
    const DichotomyProfile profile(sys, propagate_projector(sys, diag_p(2, 1), 0, wl), wl);
    ks[i] = minimal_log_constant(profile, std::exp(-0.9), 1.0);
  }
  const double lm = 20.0, km = (ks[0] + ks[1] + ks[2]) / 3.0;
  double num = 0.0, den = 0.0;
  for (int i = 0; i < 3; ++i) {
    num += (ls[i] - lm) * (ks[i] - km);
    den += (ls[i] - lm) * (ls[i] - lm);
  }
  const double slope = num / den;
  o.detail << " eps=1 slope=" << slope;
  o.check(slope >= 0.18, "eps=1 slope >= 0.18");

  const double t = seconds_since(t0);
  o.detail << " time=" << t << "s";
  o.check(t < 5.0, "runtime < 5 s");
}

void criterion2(Outcome& o) {
  const auto t0 = Clock::now();
  const auto sys = builtin_example("paper_scalar", {1.0, 0.1});
  const auto est = estimate_spectrum(sys, {-40, 40});
  o.detail << " intervals=" << est.intervals.size();
  o.check(est.intervals.size() == 1, "exactly one interval");
  if (!est.intervals.empty()) {
    const auto& iv = est.intervals.front();
    const auto cmp = compare_to_candidates(iv, oscillating_scalar_candidates(1.0, 0.1), 5e-3);
    o.detail << " log[" << std::log(iv.lo) << "," << std::log(iv.hi) << "]";
    for (double e : cmp.relative_errors) o.detail << " err=" << e;
    o.check(cmp.matched >= 0, "matches a candidate within 5e-3");
    o.check(cmp.candidates_disagree, "candidate discrepancy flagged");
  }
  const double t = seconds_since(t0);
  o.detail << " time=" << t << "s";
  o.check(t < 30.0, "runtime < 30 s");
}

void criterion3(Outcome& o) {
  const auto sys = builtin_example("constant_diag", {2.0, 0.5});
  const auto est = estimate_spectrum(sys, {-15, 15});
  o.check(est.intervals.size() == 2, "two intervals");
  const double eig[] = {0.5, 2.0};
  for (std::size_t i = 0; i < est.intervals.size() && i < 2; ++i) {
    const auto& iv = est.intervals[i];
    const double width = (iv.hi - iv.lo) / eig[i];
    o.detail << " width" << i << "=" << width;
    o.check(!iv.unbounded_below && !iv.unbounded_above, "bounded intervals");
    o.check(width <= 1e-3, "relative width <= 1e-3");
    o.check(iv.lo <= eig[i] && eig[i] <= iv.hi, "interval contains eigenvalue");
  }
  double worst_angle = 0.0;
  for (long l : {-5L, 0L, 5L}) {
    const auto ws = spectral_bundles(sys, est, l, est.horizon);
    int total = 0;
    Matrix all(2, 0);
    for (const auto& b : ws) {
      total += b.dim();
      for (int j = 0; j < b.dim(); ++j) {
        const Vector v = b.basis.col(j).normalized();
        // sine of the angle to the nearest coordinate axis
        const double s = std::min(std::abs(v(1)), std::abs(v(0)));
        worst_angle = std::max(worst_angle, std::asin(std::min(1.0, s)));
      }
      Matrix next(2, all.cols() + b.dim());
      next << all, b.basis;
      all = next;
    }
    o.check(total == 2, "Whitney dims sum to 2");
    o.check(numerical_rank(all) == 2, "bundles span R^2");
    if (l == 0) {
      o.detail << " dims=";
      for (const auto& b : ws) o.detail << b.dim();
    }
  }
  o.detail << " max angle=" << worst_angle;
  o.check(worst_angle <= 1e-6, "bundle angle <= 1e-6");
}

void criterion4(Outcome& o) {
  const auto sys = builtin_example("paper_2d", {1.0, 0.1});
  const Window w{-30, 30};
  const auto cert = paper_certificate(sys, w, std::exp(0.2));
  const auto red = block_diagonalize(sys, cert, w);
  const auto sim = verify_weak_similarity(sys, red.blocks.assembled, red.transform, w);
  double s_norm = 0.0;
  for (long k = w.lo; k <= w.hi; ++k) s_norm = std::max(s_norm, norm2(red.transform.at(k)));
  const auto frame = normalize_projector(sys, cert.projector, 0, w);
  double xsr = 0.0;
  for (long k = w.lo; k <= w.hi; ++k) {
    const auto split = lyapunov_split(frame, k);
    xsr = std::max(xsr, norm2(frame.x(k) - split.S * split.R) / norm2(frame.x(k)));
    s_norm = std::max(s_norm, norm2(split.S));
  }
  o.detail << " off-diag=" << red.blocks.max_off_diagonal << " residual=" << sim.max_residual
           << " max|S|=" << s_norm << " X-SR=" << xsr;
  o.check(red.blocks.max_off_diagonal <= 1e-10, "off-diagonal <= 1e-10");
  o.check(sim.max_residual <= 1e-9, "conjugation residual <= 1e-9");
  o.check(s_norm <= std::sqrt(2.0) + 1e-9, "|S_k| <= sqrt 2");
  o.check(xsr <= 1e-9, "X = SR within 1e-9");
}

void criterion5(Outcome& o) {
  const auto run = [&](const std::string& name, const MatrixSequence& sys, const Window& w,
                       long margin) {
    const auto est = estimate_spectrum(sys, w);
    const auto cascade = full_reduction(sys, est, w.expanded(margin));
    const auto& red = cascade.reduction;
    const auto inv = spectrum_invariance_check(sys, red.blocks.assembled, red.transform, est);
    o.detail << " " << name << ": intervals=" << est.intervals.size() << "/"
             << inv.spectrum_b.intervals.size() << " distance=" << inv.distance;
    o.check(inv.distance <= 2e-3, name + " Hausdorff distance <= 2e-3");
  };
  run("paper_2d", builtin_example("paper_2d", {1.0, 0.1}), {-30, 30}, 20);
  run("triangular", ned::testing::constant(m2(2, 1, 0, 0.5)), {-15, 15}, 20);
}

void criterion6(Outcome& o) {
  const auto t0 = Clock::now();
  std::mt19937_64 rng(606);
  const Window w{-15, 15};
  std::uniform_int_distribution<long> idx(w.lo, w.hi);
  double cocycle = 0.0;
  int resolvent = 0, failures = 0, unsaturated = 0;
  const auto fail = [&](int trial, const std::string& what) {
    if (failures++ < 3) o.check(false, "table " + std::to_string(trial) + ": " + what);
  };
  for (int trial = 0; trial < 50; ++trial) {
    const int n = 2 + trial % 2;
    const auto sys = ned::testing::random_table(rng, n, -70, 70);
    for (int i = 0; i < 20; ++i) {
      const long k = idx(rng), m = idx(rng), l = idx(rng);
      const Matrix kl = evolution(sys, k, l);
      cocycle = std::max(cocycle, norm2(evolution(sys, k, m) * evolution(sys, m, l) - kl) / norm2(kl));
    }
    const auto est = estimate_spectrum(sys, w);
    if (!est.saturated) ++unsaturated;
    // every resolvent weight of the scan, plus the cuts
    std::vector<ResolventVerdict> verdicts;
    SpectralAnalyzer analyzer(sys, {});
    for (const auto& p : est.scan)
      if (p.status == Status::Resolvent) verdicts.push_back(analyzer.test(p.gamma, w));
    verdicts.insert(verdicts.end(), est.cuts.begin(), est.cuts.end());
    for (const auto& cut : verdicts) {
      if (cut.status != Status::Resolvent) continue;
      ++resolvent;
      if (!cut.certificate) {
        fail(trial, "resolvent verdict without certificate");
        continue;
      }
      const auto& cert = *cut.certificate;
      if (!verify_certificate(weighted_system(sys, cut.gamma), cert, w).pass)
        fail(trial, "certificate re-verification");
      for (long l : {w.lo, w.mid(), w.hi}) {
        const BundleBasis s{l, cert.projector.range_basis(l)}, u{l, cert.projector.kernel_basis(l)};
        if (s.dim() + u.dim() != n || intersect_subspaces(s, u).dim() != 0)
          fail(trial, "stable/unstable complementarity");
      }
    }
    if (!est.growth) {
      fail(trial, "no growth bound");
    } else {
      const double a = est.growth->a * est.growth->epsilon * est.growth->epsilon;
      for (const auto& iv : est.intervals)
        if (iv.lo < (1.0 / a) * (1 - est.bisect_tol) || iv.hi > a * (1 + est.bisect_tol))
          fail(trial, "interval outside growth bracket");
    }
    if (!est.monotone_dims && est.saturated) fail(trial, "non-monotone dims in a saturated run");
  }
  const double t = seconds_since(t0);
  o.detail << " cocycle=" << cocycle << " resolvent weights=" << resolvent << " unsaturated=" << unsaturated
           << " failures=" << failures << " time=" << t << "s";
  o.check(cocycle <= 1e-10, "cocycle <= 1e-10");
  o.check(t < 300.0, "runtime < 5 min");
}

void criterion7(Outcome& o) {
  std::mt19937_64 rng(707);
  const Matrix p = diag_p(3, 1), q = Matrix::Identity(3, 3) - p;
  double r2 = 0.0, comm = 0.0, s_norm = 0.0, conj = 0.0;
  for (int trial = 0; trial < 100; ++trial) {
    const Matrix x = ned::testing::random_matrix(rng, 3, 0.1, 10.0);
    const auto split = lyapunov_split(x, p);
    const Matrix g = x.transpose() * x;
    const Matrix r_tilde = p * g * p + q * g * q;
    r2 = std::max(r2, norm2(split.R * split.R - r_tilde) / norm2(r_tilde));
    comm = std::max(comm, norm2(p * split.R - split.R * p) / norm2(split.R));
    s_norm = std::max(s_norm, norm2(split.S));
    const Matrix target = x * p * x.inverse();
    conj = std::max(conj, norm2(split.S * p * split.S.inverse() - target) / norm2(target));
  }
  o.detail << " R^2-R~=" << r2 << " PR-RP=" << comm << " max|S|=" << s_norm << " SPS^-1-XPX^-1=" << conj;
  o.check(r2 <= 1e-9, "R^2 = R~ within 1e-9");
  o.check(comm <= 1e-10, "PR = RP within 1e-10");
  o.check(s_norm <= std::sqrt(2.0) + 1e-9, "|S| <= sqrt 2");
  o.check(conj <= 1e-8, "S P S^-1 = X P X^-1 within 1e-8");
}

}  // namespace

int main() {
  int failed = 0;
  failed += report(1, criterion1);
  failed += report(2, criterion2);
  failed += report(3, criterion3);
  failed += report(4, criterion4);
  failed += report(5, criterion5);
  failed += report(6, criterion6);
  failed += report(7, criterion7);
  std::printf("%d of 7 criteria passed\n", 7 - failed);
  return failed;
}
