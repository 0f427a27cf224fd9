#pragma once

// Weak kinematic similarity S_{k+1} B_k = A_k S_k that block-diagonalizes a
// system along an invariant splitting, and the cascade over spectral cuts.

#include <string>
#include <utility>
#include <vector>

#include "ned/spectrum.hpp"

namespace ned {

/// Fundamental matrix X_k = Phi(k, n_ref) T^{-1} adapted to a projector:
/// T P_{n_ref} T^{-1} = diag(Id_r, 0).
struct NormalizedFrame {
  Matrix T;
  Matrix T_inv;
  long n_ref = 0;
  int rank = 0;
  Matrix P_tilde;
  Window window{};
  std::vector<Matrix> X;  // X[i] belongs to fiber window.lo + i

  const Matrix& x(long k) const;
};

/// T^{-1} = [range basis | kernel basis] of P_{n_ref}; X_k is assembled from
/// the restricted cocycles of `proj`, so X_{k+1} = A_k X_k holds to rounding
/// even where the two blocks grow at very different rates.
NormalizedFrame normalize_projector(const MatrixSequence& sys, const ProjectorSequence& proj,
                                    long n_ref, const Window& w);
NormalizedFrame normalize_projector(const MatrixSequence& sys, const ProjectorSequence& proj,
                                    long n_ref);

struct LyapunovSplit {
  Matrix S;
  Matrix R;
};

/// R_k = (P X^T X P + Q X^T X Q)^{1/2}, S_k = X_k R_k^{-1} with P = P_tilde.
LyapunovSplit lyapunov_split(const Matrix& x, const Matrix& p_tilde);
LyapunovSplit lyapunov_split(const NormalizedFrame& frame, long k);

enum class Degeneracy { NonDegenerate, WeaklyNonDegenerate };

std::string_view to_string(Degeneracy d);

struct SimilarityTransform {
  Window window{};
  std::vector<Matrix> S;  // S[i] belongs to fiber window.lo + i
  double fitted_M = 1.0;
  double fitted_eps = 1.0;
  Degeneracy degeneracy = Degeneracy::NonDegenerate;

  const Matrix& at(long k) const;
};

/// B_k for k in [window.lo, window.hi - 1], as one table per block and the
/// assembled block-diagonal table.
struct BlockSystem {
  std::vector<int> dims;
  std::vector<MatrixSequence> blocks;
  MatrixSequence assembled;
  /// max over k of ||off-diagonal part of B_k|| / ||B_k||
  double max_off_diagonal = 0.0;
};

struct WeakBound {
  double M = 1.0;
  double eps = 1.0;
};

/// Minimal eps (then M) with ||S_k||, ||S_k^{-1}|| <= M eps^{|k|} on the window,
/// using the same inner/full extension test as the dichotomy fits.
WeakBound fit_weak_bound(const SimilarityTransform& s, double stability_tol = 1e-9);

struct Reduction {
  SimilarityTransform transform;
  BlockSystem blocks;
  DichotomyCertificate certificate;  // last certificate used (two-block case)
};

/// Theorem 3.1 decoupling along `cert.projector`, whose constants are
/// re-verified on `w` first (CertificateMissing on failure).
Reduction block_diagonalize(const MatrixSequence& sys, const DichotomyCertificate& cert,
                            const Window& w, const FitConfig& config = {});

/// Fits a strong certificate for `proj` on `w` and decouples along it.
Reduction block_diagonalize(const MatrixSequence& sys, const ProjectorSequence& proj,
                            const Window& w, const FitConfig& config = {});

struct SimilarityReport {
  double max_residual = 0.0;  // max_k ||S_{k+1} B_k - A_k S_k|| / ||A_k S_k||
  long worst_k = 0;
  WeakBound bound;
  bool pass = false;
};

SimilarityReport verify_weak_similarity(const MatrixSequence& a, const MatrixSequence& b,
                                        const SimilarityTransform& s, const Window& w);

struct CascadeResult {
  Reduction reduction;
  /// Spectrum of every block over the input bracket, in block order.
  std::vector<SpectrumEstimate> block_spectra;
  std::vector<std::string> diagnostics;
};

/// Splits off W_0, W_1, ... one cut at a time, re-fitting a certificate on
/// each remaining block on est.window and extending its splitting to `w`.
/// `w` should exceed est.window by a margin so that the block tables leave
/// room for the bundle computations of later stages.
CascadeResult full_reduction(const MatrixSequence& sys, const SpectrumEstimate& est,
                             const Window& w, const SpectrumConfig& config = {});

struct InvarianceReport {
  SimilarityReport similarity;
  SpectrumEstimate spectrum_b;
  double distance = 0.0;  // relative Hausdorff distance
  bool pass = false;
};

InvarianceReport spectrum_invariance_check(const MatrixSequence& a, const MatrixSequence& b,
                                           const SimilarityTransform& s,
                                           const SpectrumEstimate& est_a,
                                           const SpectrumConfig& config = {});

}  // namespace ned
