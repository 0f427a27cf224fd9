#pragma once

// Dichotomy spectrum of x_{k+1} = A_k x_k: the weights gamma for which the
// weighted system A_k / gamma admits no strong nonuniform dichotomy, together
// with the stable/unstable bundles and the spectral bundles between cuts.

#include <map>
#include <optional>
#include <string>
#include <tuple>
#include <vector>

#include "ned/dichotomy.hpp"

namespace ned {

struct BundleBasis {
  long fiber = 0;
  Matrix basis;  // N x dim, orthonormal columns

  int dim() const { return static_cast<int>(basis.cols()); }
  int ambient() const { return static_cast<int>(basis.rows()); }
};

enum class Status { Resolvent, Spectrum, Undecided };

std::string_view to_string(Status s);

struct ResolventVerdict {
  double gamma = 1.0;
  Status status = Status::Spectrum;
  std::optional<DichotomyCertificate> certificate;  // present iff resolvent
  int stable_dim = 0;
};

struct SpectrumConfig {
  FitConfig fit;
  long horizon = 20;
  double bisect_tol = 1e-3;
  int grid_points = 33;
  /// Factor applied on each side of the growth-bound bracket.
  double bracket_widening = 2.0;
  bool check_saturation = true;
  std::vector<double> eps_grid = FitConfig::default_eps_grid();
  /// eps used to normalize singular values in the bundle split.
  double bundle_eps = 1.0;
};

/// Directions at fiber l whose gamma-weighted forward growth over `horizon`
/// steps is at most 1 (singular value split of Phi_gamma(l + horizon, l)).
BundleBasis stable_bundle(const MatrixSequence& sys, double gamma, long l, long horizon,
                          double eps = 1.0, ExponentMode mode = ExponentMode::Absolute);

/// Mirror of stable_bundle using Phi_gamma(l - horizon, l).
BundleBasis unstable_bundle(const MatrixSequence& sys, double gamma, long l, long horizon,
                            double eps = 1.0, ExponentMode mode = ExponentMode::Absolute);

/// Orthonormal basis of B1 ∩ B2 from principal angles (cos > 1 - 1e-8).
BundleBasis intersect_subspaces(const BundleBasis& b1, const BundleBasis& b2);

/// Invariant splitting with a stable bundle of dimension `rank`, computed on
/// `w` by orthogonal iteration from singular-vector guesses placed up to
/// `horizon` fibers outside the window.
ProjectorSequence invariant_splitting(const MatrixSequence& sys, const Window& w, int rank,
                                      long horizon);

/// Caches invariant splittings and their profiles per (window, rank), so that
/// classifying many weights on the same window reuses the bundle work.
class SpectralAnalyzer {
 public:
  SpectralAnalyzer(MatrixSequence sys, SpectrumConfig config);

  const MatrixSequence& system() const { return sys_; }
  const SpectrumConfig& config() const { return config_; }

  ResolventVerdict test(double gamma, const Window& w);

 private:
  struct Cached {
    std::optional<ProjectorSequence> splitting;
    std::optional<DichotomyProfile> profile;
  };

  const Cached& cached(const Window& w, int rank);
  std::optional<ResolventVerdict> try_window(double gamma, const Window& w);
  std::vector<int> candidate_ranks(double gamma, const Window& w) const;

  MatrixSequence sys_;
  SpectrumConfig config_;
  std::map<std::tuple<long, long, int>, Cached> cache_;
};

ResolventVerdict resolvent_test(const MatrixSequence& sys, double gamma, const Window& w,
                                const SpectrumConfig& config = {});

struct SpectralInterval {
  double lo = 0.0;
  double hi = 0.0;
  bool unbounded_below = false;
  bool unbounded_above = false;
  /// Bisection brackets of each endpoint: [outer, inner] on the low side and
  /// [inner, outer] on the high side. Outer points tested resolvent.
  double lo_inner = 0.0;
  double hi_inner = 0.0;
};

struct ScanPoint {
  double gamma;
  Status status;
  int stable_dim;
};

struct SpectrumEstimate {
  std::vector<SpectralInterval> intervals;
  /// gamma_0 .. gamma_n; a cut whose status is not Resolvent is a convention
  /// point (stable_dim 0 below the first interval, N above the last).
  std::vector<ResolventVerdict> cuts;
  std::vector<ScanPoint> scan;
  Window window{};
  long horizon = 0;
  double bisect_tol = 0.0;
  double bracket_lo = 0.0;
  double bracket_hi = 0.0;
  std::optional<GrowthBound> growth;
  bool saturated = true;
  bool monotone_dims = true;
  std::vector<std::string> diagnostics;
};

/// Scans a log grid over the bracket, refines every status change by bisection
/// and assembles the interval structure. Without a bracket, the growth bound
/// [1/(a eps^2), a eps^2] widened by config.bracket_widening is used.
SpectrumEstimate estimate_spectrum(const MatrixSequence& sys, const Window& w,
                                   std::optional<std::pair<double, double>> bracket = std::nullopt,
                                   const SpectrumConfig& config = {});

/// W_0 .. W_{n+1} at fiber l.
std::vector<BundleBasis> spectral_bundles(const MatrixSequence& sys, const SpectrumEstimate& est,
                                          long l, long horizon);

/// Relative Hausdorff distance between two interval families
/// (max over endpoints of |log| differences, expressed as exp(d) - 1).
double interval_hausdorff(const std::vector<SpectralInterval>& a,
                          const std::vector<SpectralInterval>& b);

/// Endpoint comparison of one estimated interval against candidate intervals.
struct CandidateComparison {
  std::vector<std::pair<double, double>> candidates;
  std::vector<double> relative_errors;  // max endpoint error per candidate
  int matched = -1;                     // first candidate within tolerance
  /// The candidates are mutually inconsistent at the tolerance.
  bool candidates_disagree = false;
};

CandidateComparison compare_to_candidates(const SpectralInterval& interval,
                                          std::vector<std::pair<double, double>> candidates,
                                          double tol);

/// The two intervals stated for the oscillating scalar example:
/// [e^{-w-a}, e^{-w+a}] and [e^{-w-5a}, e^{-w+5a}].
std::vector<std::pair<double, double>> oscillating_scalar_candidates(double omega, double a);

}  // namespace ned
