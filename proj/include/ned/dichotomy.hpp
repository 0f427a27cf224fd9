#pragma once

// Invariant projectors and (nonuniform) exponential dichotomy certificates:
//
//   ||Phi(k,l) P_l|| <= K alpha^{k-l} eps^{phi(l)},      k >= l
//   ||Phi(k,l) Q_l|| <= K (1/alpha)^{k-l} eps^{phi(l)},  k <= l
//
// where phi(l) = |l| (default) or l. All constants are handled in log space.

#include <limits>
#include <optional>
#include <vector>

#include "ned/system.hpp"

namespace ned {

enum class ExponentMode { Absolute, Signed };

/// The exponent applied to eps for initial time l.
inline double nonuniform_exponent(long l, ExponentMode mode) {
  const double d = static_cast<double>(l);
  return mode == ExponentMode::Absolute ? (d < 0 ? -d : d) : d;
}

/// Invariant projector realized fiberwise by orthonormal bases of its range
/// and kernel. Both bundles are invariant by construction, so the restricted
/// cocycles S_{k+1}^T A_k S_k and U_k^T A_k^{-1} U_{k+1} carry all growth
/// information without cross-contamination between the two blocks.
class ProjectorSequence {
 public:
  ProjectorSequence() = default;

  /// Builds from per-fiber bases over `window`; bases[i] belongs to fiber window.lo + i.
  static ProjectorSequence from_bases(const MatrixSequence& sys, Window window, long l_ref,
                                      std::vector<Matrix> range, std::vector<Matrix> kernel);

  const Window& window() const { return window_; }
  long reference_index() const { return l_ref_; }
  int rank() const { return rank_; }
  int dimension() const { return dim_; }
  double invariance_residual() const { return invariance_residual_; }

  const Matrix& range_basis(long k) const { return range_[index(k)]; }
  const Matrix& kernel_basis(long k) const { return kernel_[index(k)]; }
  /// [range | kernel]^{-1}; its top `rank` rows give P_k = S_k * top rows.
  const Matrix& coordinates(long k) const { return coords_[index(k)]; }
  Matrix projector(long k) const;
  Matrix reference_projector() const { return projector(l_ref_); }

  /// Restriction to a subwindow.
  ProjectorSequence restricted(const Window& w) const;

 private:
  std::size_t index(long k) const;

  Window window_{};
  long l_ref_ = 0;
  int rank_ = 0;
  int dim_ = 0;
  std::vector<Matrix> range_;
  std::vector<Matrix> kernel_;
  std::vector<Matrix> coords_;
  double invariance_residual_ = 0.0;
};

/// Numerical rank after rounding singular values at `tol` relative to the largest.
int numerical_rank(const Matrix& m, double tol = 1e-8);

/// P_k = Phi(k, l_ref) P_ref Phi(l_ref, k) over the hull of `w` and l_ref.
ProjectorSequence propagate_projector(const MatrixSequence& sys, const Matrix& p_ref, long l_ref,
                                      const Window& w);

enum class Flavor { UniformED, NED, StrongNED };

struct DichotomyCertificate {
  ProjectorSequence projector;
  double K = 1.0;
  double alpha = 0.5;
  double epsilon = 1.0;
  Flavor flavor = Flavor::NED;
};

/// Throws InvalidArgument when the constants violate the flavor's invariants.
void validate(const DichotomyCertificate& cert);

/// alpha * eps^2 < 1.
bool is_strong(double alpha, double epsilon);
bool is_strong(const DichotomyCertificate& cert);

struct Witness {
  long k = 0;
  long l = 0;
};

struct ViolationReport {
  double max_stable_excess = -std::numeric_limits<double>::infinity();
  Witness stable_witness;
  double max_unstable_excess = -std::numeric_limits<double>::infinity();
  Witness unstable_witness;
  bool pass = true;
};

inline constexpr double kExcessTolerance = 1e-9;

struct FitConfig {
  ExponentMode exponent = ExponentMode::Absolute;
  double k_cap = 1e12;
  /// Allowed log-growth of the minimal constant when passing from the inner
  /// half of the window to the full window.
  double stability_tol = 1e-9;

  /// 64 log-spaced values in (0, 1): log alpha = -6 (i+1)/64.
  static std::vector<double> default_alpha_grid();
  /// 16 log-spaced values from 1: log eps = 0.05 i.
  static std::vector<double> default_eps_grid();
};

/// Log-norms of Phi(k,l)P_l (k >= l) and Phi(k,l)Q_l (k <= l) over a window,
/// computed through the restricted cocycles of a projector sequence.
class DichotomyProfile {
 public:
  struct Entry {
    long k;
    long l;
    double log_norm;
    double distance;  // |k - l|
    bool inner;       // both indices inside window.inner()
  };

  DichotomyProfile(const MatrixSequence& sys, const ProjectorSequence& proj, const Window& w);

  /// Profile of the weighted system A_k / gamma (same projector).
  DichotomyProfile weighted(double gamma) const;

  const Window& window() const { return window_; }
  int rank() const { return rank_; }
  const std::vector<Entry>& stable() const { return stable_; }
  const std::vector<Entry>& unstable() const { return unstable_; }

  /// Worst excess over K = 1 for (log alpha, log eps); also fills `inner_max`.
  ViolationReport excess(double log_alpha, double log_eps, ExponentMode mode,
                         double* inner_max = nullptr) const;

 private:
  DichotomyProfile() = default;

  Window window_{};
  int rank_ = 0;
  std::vector<Entry> stable_;
  std::vector<Entry> unstable_;
};

ViolationReport verify_certificate(const DichotomyProfile& profile, const DichotomyCertificate& cert,
                                   ExponentMode mode = ExponentMode::Absolute);

/// Checks the certificate exhaustively over all pairs in `w`.
ViolationReport verify_certificate(const MatrixSequence& sys, const DichotomyCertificate& cert,
                                   const Window& w, ExponentMode mode = ExponentMode::Absolute);

/// log of the smallest K for which (alpha, eps) holds on the profile's window.
double minimal_log_constant(const DichotomyProfile& profile, double alpha, double epsilon,
                            ExponentMode mode = ExponentMode::Absolute);

/// Grid fit. Returns nullopt (infeasible) when no grid pair gives a strong
/// dichotomy whose minimal K stays below the cap and does not grow from the
/// inner half-window to the full window.
std::optional<DichotomyCertificate> fit_constants(const DichotomyProfile& profile,
                                                  const ProjectorSequence& proj,
                                                  const std::vector<double>& alpha_grid,
                                                  const std::vector<double>& eps_grid,
                                                  const FitConfig& config = {});

std::optional<DichotomyCertificate> fit_constants(const MatrixSequence& sys,
                                                  const ProjectorSequence& proj, const Window& w,
                                                  const std::vector<double>& alpha_grid,
                                                  const std::vector<double>& eps_grid,
                                                  const FitConfig& config = {});

struct StrongConstants {
  double log_alpha;
  double log_eps;
  double log_k;
};

/// Continuous search for a strong pair (alpha eps^2 < 1) that passes the same
/// cap and extension-stability test as fit_constants.
std::optional<StrongConstants> search_strong_constants(const DichotomyProfile& profile,
                                                       const FitConfig& config = {});

struct GrowthBound {
  double K = 1.0;
  double a = 1.0;
  double epsilon = 1.0;
};

/// ||Phi(k,l)|| <= K a^{|k-l|} eps^{phi(l)} with minimal a over the grid.
GrowthBound fit_growth_bound(const MatrixSequence& sys, const Window& w,
                             const std::vector<double>& eps_grid, const FitConfig& config = {});

}  // namespace ned
