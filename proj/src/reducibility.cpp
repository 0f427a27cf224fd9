#include "ned/reducibility.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace ned {

namespace {

constexpr double kGramFloor = 1e-14;

std::size_t slot(const Window& w, long k, const char* what) {
  if (!w.contains(k)) {
    std::ostringstream os;
    os << what << ": fiber " << k << " outside [" << w.lo << ", " << w.hi << "]";
    throw Error(ErrorKind::IndexOutOfRange, os.str());
  }
  return static_cast<std::size_t>(k - w.lo);
}

// Largest-magnitude entry of every column made positive.
void fix_signs(Matrix& m) {
  for (Eigen::Index j = 0; j < m.cols(); ++j) {
    Eigen::Index i = 0;
    m.col(j).cwiseAbs().maxCoeff(&i);
    if (m(i, j) < 0.0) m.col(j) *= -1.0;
  }
}

// Symmetric positive-definite square root of a Gram block.
Matrix spd_sqrt(const Matrix& g) {
  if (g.rows() == 0) return g;
  const Matrix sym = 0.5 * (g + g.transpose());
  Eigen::SelfAdjointEigenSolver<Matrix> es(sym);
  const Vector& ev = es.eigenvalues();
  const double top = ev.maxCoeff();
  if (!(top > 0.0) || ev.minCoeff() <= kGramFloor * top)
    throw Error(ErrorKind::IndefiniteGram, "Gram block not positive definite; X_k numerically singular");
  return es.eigenvectors() * ev.cwiseSqrt().asDiagonal() * es.eigenvectors().transpose();
}

Matrix block_diag(const Matrix& a, const Matrix& b) {
  Matrix m = Matrix::Zero(a.rows() + b.rows(), a.cols() + b.cols());
  m.topLeftCorner(a.rows(), a.cols()) = a;
  m.bottomRightCorner(b.rows(), b.cols()) = b;
  return m;
}

// Decoupling along an invariant splitting without any certificate checks.
Reduction decouple(const MatrixSequence& sys, const ProjectorSequence& proj, const Window& w) {
  const long n_ref = proj.window().contains(w.mid()) ? w.mid() : proj.reference_index();
  const NormalizedFrame frame = normalize_projector(sys, proj, n_ref, w);
  const int n = sys.dimension();
  const int r = frame.rank;

  Reduction red;
  red.transform.window = w;
  std::vector<Matrix> rs;
  for (long k = w.lo; k <= w.hi; ++k) {
    LyapunovSplit ls = lyapunov_split(frame, k);
    red.transform.S.push_back(std::move(ls.S));
    rs.push_back(std::move(ls.R));
  }
  const WeakBound wb = fit_weak_bound(red.transform);
  red.transform.fitted_M = wb.M;
  red.transform.fitted_eps = wb.eps;
  red.transform.degeneracy = wb.eps > 1.0 ? Degeneracy::WeaklyNonDegenerate : Degeneracy::NonDegenerate;

  std::vector<Matrix> full, top, bottom;
  double off = 0.0;
  for (std::size_t i = 0; i + 1 < rs.size(); ++i) {
    // R is block diagonal, so B = R_{k+1} R_k^{-1} is block diagonal too;
    // each block is formed separately to keep the zero pattern exact.
    const Matrix b1 = rs[i + 1].topLeftCorner(r, r) *
                      rs[i].topLeftCorner(r, r).llt().solve(Matrix::Identity(r, r));
    const Matrix b2 = rs[i + 1].bottomRightCorner(n - r, n - r) *
                      rs[i].bottomRightCorner(n - r, n - r).llt().solve(Matrix::Identity(n - r, n - r));
    Matrix b = block_diag(b1, b2);
    const Matrix direct = rs[i + 1] * rs[i].inverse();
    const double od = (direct.topRightCorner(r, n - r).norm() + direct.bottomLeftCorner(n - r, r).norm()) /
                      direct.norm();
    off = std::max(off, od);
    full.push_back(std::move(b));
    top.push_back(b1);
    bottom.push_back(b2);
  }
  red.blocks.dims = {r, n - r};
  red.blocks.blocks.push_back(MatrixSequence::table(w.lo, std::move(top), sys.invertibility_tolerance()));
  red.blocks.blocks.push_back(MatrixSequence::table(w.lo, std::move(bottom), sys.invertibility_tolerance()));
  red.blocks.assembled = MatrixSequence::table(w.lo, std::move(full), sys.invertibility_tolerance());
  red.blocks.max_off_diagonal = off;
  return red;
}

}  // namespace

const Matrix& NormalizedFrame::x(long k) const { return X[slot(window, k, "frame")]; }

const Matrix& SimilarityTransform::at(long k) const { return S[slot(window, k, "transform")]; }

std::string_view to_string(Degeneracy d) {
  return d == Degeneracy::NonDegenerate ? "non_degenerate" : "weakly_non_degenerate";
}

NormalizedFrame normalize_projector(const MatrixSequence& sys, const ProjectorSequence& proj,
                                    long n_ref) {
  return normalize_projector(sys, proj, n_ref, proj.window());
}

NormalizedFrame normalize_projector(const MatrixSequence& sys, const ProjectorSequence& proj,
                                    long n_ref, const Window& w) {
  const int n = proj.dimension();
  const int r = proj.rank();
  if (r == 0 || r == n) throw Error(ErrorKind::RankDegenerate, "projector rank must lie strictly between 0 and N");
  if (!proj.window().contains(w) || !w.contains(n_ref))
    throw Error(ErrorKind::IndexOutOfRange, "frame window must lie in the projector window and contain n_ref");

  NormalizedFrame f;
  f.n_ref = n_ref;
  f.rank = r;
  f.window = w;
  Matrix s = proj.range_basis(n_ref);
  Matrix u = proj.kernel_basis(n_ref);
  fix_signs(s);
  fix_signs(u);
  f.T_inv.resize(n, n);
  f.T_inv << s, u;
  Eigen::JacobiSVD<Matrix> svd(f.T_inv);
  const double cond = svd.singularValues()(0) / svd.singularValues()(n - 1);
  if (!(cond <= 1e8)) {
    std::ostringstream os;
    os << "normalizing frame has condition number " << cond;
    throw Error(ErrorKind::IllConditionedBasis, os.str());
  }
  f.T = f.T_inv.inverse();
  f.P_tilde = Matrix::Zero(n, n);
  f.P_tilde.topLeftCorner(r, r).setIdentity();

  // X_k = [S_k C_S(k, n_ref), U_k C_U(k, n_ref)] with C the restricted cocycles.
  // Coefficients of the sign-fixed bases in the stored bases at n_ref:
  const Matrix cs0 = proj.range_basis(n_ref).transpose() * s;
  const Matrix cu0 = proj.kernel_basis(n_ref).transpose() * u;
  const auto count = static_cast<std::size_t>(w.size());
  std::vector<Matrix> cs(count), cu(count);
  const auto at = [&w](long k) { return static_cast<std::size_t>(k - w.lo); };
  cs[at(n_ref)] = cs0;
  cu[at(n_ref)] = cu0;
  for (long k = n_ref; k < w.hi; ++k) {
    const Matrix a = sys.transition(k);
    cs[at(k + 1)] = (proj.range_basis(k + 1).transpose() * a * proj.range_basis(k)) * cs[at(k)];
    cu[at(k + 1)] = (proj.kernel_basis(k + 1).transpose() * a * proj.kernel_basis(k)) * cu[at(k)];
  }
  for (long k = n_ref; k > w.lo; --k) {
    const Matrix ainv = sys.inverse_transition(k - 1);
    cs[at(k - 1)] = (proj.range_basis(k - 1).transpose() * ainv * proj.range_basis(k)) * cs[at(k)];
    cu[at(k - 1)] = (proj.kernel_basis(k - 1).transpose() * ainv * proj.kernel_basis(k)) * cu[at(k)];
  }
  f.X.reserve(count);
  for (long k = w.lo; k <= w.hi; ++k) {
    Matrix x(n, n);
    x << proj.range_basis(k) * cs[at(k)], proj.kernel_basis(k) * cu[at(k)];
    f.X.push_back(std::move(x));
  }
  return f;
}

LyapunovSplit lyapunov_split(const Matrix& x, const Matrix& p_tilde) {
  const auto n = x.rows();
  const auto r = static_cast<Eigen::Index>(std::lround(p_tilde.trace()));
  Matrix expected = Matrix::Zero(n, n);
  expected.topLeftCorner(r, r).setIdentity();
  if (p_tilde.rows() != n || p_tilde.cols() != n || (p_tilde - expected).norm() > 1e-12)
    throw Error(ErrorKind::InvalidArgument, "P_tilde must be diag(Id_r, 0)");
  const Matrix q_tilde = Matrix::Identity(n, n) - p_tilde;
  const Matrix xtx = x.transpose() * x;
  const Matrix g = p_tilde * xtx * p_tilde + q_tilde * xtx * q_tilde;
  Matrix r_mat = Matrix::Zero(n, n);
  r_mat.topLeftCorner(r, r) = spd_sqrt(g.topLeftCorner(r, r));
  r_mat.bottomRightCorner(n - r, n - r) = spd_sqrt(g.bottomRightCorner(n - r, n - r));
  LyapunovSplit out;
  out.R = r_mat;
  // S = X R^{-1} blockwise: each column block becomes an orthonormal polar factor.
  out.S = Matrix(n, n);
  if (r > 0) {
    out.S.leftCols(r) = r_mat.topLeftCorner(r, r).llt().solve(x.leftCols(r).transpose()).transpose();
  }
  if (n - r > 0) {
    out.S.rightCols(n - r) =
        r_mat.bottomRightCorner(n - r, n - r).llt().solve(x.rightCols(n - r).transpose()).transpose();
  }
  return out;
}

LyapunovSplit lyapunov_split(const NormalizedFrame& frame, long k) {
  return lyapunov_split(frame.x(k), frame.P_tilde);
}

WeakBound fit_weak_bound(const SimilarityTransform& s, double stability_tol) {
  const Window& w = s.window;
  const Window in = w.inner();
  std::vector<double> v;
  for (const Matrix& m : s.S) {
    const double fwd = std::log(norm2(m));
    const double inv = std::log(norm2(m.inverse()));
    v.push_back(std::max(fwd, inv));
  }
  const auto maxima = [&](double y) {
    double full = -std::numeric_limits<double>::infinity(), inner = full;
    for (long k = w.lo; k <= w.hi; ++k) {
      const double e = v[static_cast<std::size_t>(k - w.lo)] - std::abs(static_cast<double>(k)) * y;
      full = std::max(full, e);
      if (in.contains(k)) inner = std::max(inner, e);
    }
    return std::make_pair(full, inner);
  };
  const auto stable = [&](double y) {
    const auto [full, inner] = maxima(y);
    return full - inner <= stability_tol;
  };
  double y = 0.0;
  if (!stable(0.0)) {
    const double spread = *std::max_element(v.begin(), v.end()) - *std::min_element(v.begin(), v.end());
    double lo = 0.0, hi = spread + 1.0;
    if (stable(hi)) {
      for (int i = 0; i < 60; ++i) {
        const double m = 0.5 * (lo + hi);
        (stable(m) ? hi : lo) = m;
      }
      y = hi;
    }
  }
  return {std::exp(maxima(y).first), std::exp(y)};
}

Reduction block_diagonalize(const MatrixSequence& sys, const DichotomyCertificate& cert,
                            const Window& w, const FitConfig& config) {
  validate(cert);
  const ViolationReport rep = verify_certificate(sys, cert, w, config.exponent);
  if (!rep.pass)
    throw Error(ErrorKind::CertificateMissing, "certificate does not hold for the system on the window");
  const ProjectorSequence proj =
      cert.projector.window().contains(w)
          ? cert.projector
          : propagate_projector(sys, cert.projector.reference_projector(),
                                cert.projector.reference_index(), w);
  Reduction red = decouple(sys, proj, w);
  red.certificate = cert;
  return red;
}

Reduction block_diagonalize(const MatrixSequence& sys, const ProjectorSequence& proj,
                            const Window& w, const FitConfig& config) {
  const ProjectorSequence p =
      proj.window().contains(w)
          ? proj
          : propagate_projector(sys, proj.reference_projector(), proj.reference_index(), w);
  const auto found = search_strong_constants(DichotomyProfile(sys, p, w), config);
  if (!found) throw Error(ErrorKind::CertificateMissing, "no strong dichotomy fits the projector");
  DichotomyCertificate cert;
  cert.projector = p;
  cert.K = std::exp(found->log_k);
  cert.alpha = std::exp(found->log_alpha);
  cert.epsilon = std::exp(found->log_eps);
  cert.flavor = found->log_eps == 0.0 ? Flavor::UniformED : Flavor::StrongNED;
  return block_diagonalize(sys, cert, w, config);
}

SimilarityReport verify_weak_similarity(const MatrixSequence& a, const MatrixSequence& b,
                                        const SimilarityTransform& s, const Window& w) {
  SimilarityReport rep;
  if (a.dimension() != b.dimension() || s.S.empty() || s.S.front().rows() != a.dimension())
    return rep;
  for (long k = w.lo; k < w.hi; ++k) {
    const Matrix as = a.transition(k) * s.at(k);
    const double res = (s.at(k + 1) * b.transition(k) - as).norm() / as.norm();
    if (k == w.lo || res > rep.max_residual) {
      rep.max_residual = res;
      rep.worst_k = k;
    }
  }
  SimilarityTransform sub;
  sub.window = w;
  for (long k = w.lo; k <= w.hi; ++k) sub.S.push_back(s.at(k));
  rep.bound = fit_weak_bound(sub);
  rep.pass = rep.max_residual <= 1e-9 && std::isfinite(rep.bound.M) && std::isfinite(rep.bound.eps);
  return rep;
}

namespace {

std::vector<Matrix> table_slice(const MatrixSequence& m, const Window& w) {
  std::vector<Matrix> out;
  for (long k = w.lo; k < w.hi; ++k) out.push_back(m.transition(k));
  return out;
}

Matrix assemble(const std::vector<Matrix>& parts) {
  Eigen::Index n = 0;
  for (const auto& p : parts) n += p.rows();
  Matrix m = Matrix::Zero(n, n);
  Eigen::Index o = 0;
  for (const auto& p : parts) {
    m.block(o, o, p.rows(), p.cols()) = p;
    o += p.rows();
  }
  return m;
}

Matrix thin_q(const Matrix& m) {
  if (m.cols() == 0) return Matrix(m.rows(), 0);
  Eigen::HouseholderQR<Matrix> qr(m);
  return qr.householderQ() * Matrix::Identity(m.rows(), m.cols());
}

// The splitting of `proj` carried to the larger window `w` by propagating both
// bases outward.
ProjectorSequence extend_splitting(const MatrixSequence& sys, const ProjectorSequence& proj,
                                   const Window& w) {
  const Window& in = proj.window();
  if (!w.contains(in)) throw Error(ErrorKind::InvalidArgument, "extension window must contain the projector window");
  const auto count = static_cast<std::size_t>(w.size());
  std::vector<Matrix> range(count), kernel(count);
  const auto at = [&w](long k) { return static_cast<std::size_t>(k - w.lo); };
  for (long k = in.lo; k <= in.hi; ++k) {
    range[at(k)] = proj.range_basis(k);
    kernel[at(k)] = proj.kernel_basis(k);
  }
  for (long k = in.hi + 1; k <= w.hi; ++k) {
    const Matrix a = sys.transition(k - 1);
    range[at(k)] = thin_q(a * range[at(k - 1)]);
    kernel[at(k)] = thin_q(a * kernel[at(k - 1)]);
  }
  for (long k = in.lo - 1; k >= w.lo; --k) {
    const Matrix ainv = sys.inverse_transition(k);
    range[at(k)] = thin_q(ainv * range[at(k + 1)]);
    kernel[at(k)] = thin_q(ainv * kernel[at(k + 1)]);
  }
  return ProjectorSequence::from_bases(sys, w, proj.reference_index(), std::move(range), std::move(kernel));
}

bool within(const SpectralInterval& found, const SpectralInterval& expected, double tol) {
  return found.lo >= expected.lo * (1.0 - tol) && found.hi <= expected.hi * (1.0 + tol);
}

}  // namespace

CascadeResult full_reduction(const MatrixSequence& sys, const SpectrumEstimate& est,
                             const Window& w, const SpectrumConfig& config) {
  const int n = sys.dimension();
  if (est.cuts.empty()) throw Error(ErrorKind::InvalidArgument, "estimate has no cut points");
  for (const auto& c : est.cuts) {
    if (c.stable_dim > 0 && c.stable_dim < n && c.status != Status::Resolvent) {
      std::ostringstream os;
      os << "cut point gamma = " << c.gamma << " is not resolvent";
      throw Error(ErrorKind::CutPointNotResolvent, os.str());
    }
  }

  // Blocks W_0 .. W_{n+1} in cut order; only nonzero ones are split off.
  struct Stage {
    double gamma;
    int rank;           // stable rank inside the remaining block
    int expected;       // index into est.intervals, -1 for none
  };
  std::vector<Stage> stages;
  std::vector<int> block_expected;  // expected interval per emitted block
  int prev = 0;
  for (std::size_t i = 0; i < est.cuts.size(); ++i) {
    const int d = est.cuts[i].stable_dim;
    const int expected = i == 0 ? -1 : static_cast<int>(i) - 1;
    if (d > prev && d < n) stages.push_back({est.cuts[i].gamma, d - prev, expected});
    if (d > prev) block_expected.push_back(expected);
    prev = std::max(prev, d);
  }
  if (prev < n) block_expected.push_back(-1);

  const auto s_count = static_cast<long>(stages.size());
  std::vector<Matrix> composite;
  std::vector<MatrixSequence> emitted;
  MatrixSequence remaining = sys;
  DichotomyCertificate last_cert;
  double off = 0.0;
  for (long j = 0; j < s_count; ++j) {
    const Stage& st = stages[static_cast<std::size_t>(j)];
    SpectralAnalyzer analyzer(remaining, config);
    const ResolventVerdict v = analyzer.test(st.gamma, remaining.clip(est.window));
    if (v.status != Status::Resolvent || v.stable_dim != st.rank) {
      std::ostringstream os;
      os << "gamma = " << st.gamma << " is not resolvent with stable rank " << st.rank
         << " for the remaining block";
      throw Error(ErrorKind::CutPointNotResolvent, os.str());
    }
    last_cert = *v.certificate;
    const ProjectorSequence split = extend_splitting(remaining, last_cert.projector, w);
    Reduction red = decouple(remaining, split, w);
    off = std::max(off, red.blocks.max_off_diagonal);

    const int o = n - remaining.dimension();
    for (long k = w.lo; k <= w.hi; ++k) {
      const Matrix lift = assemble({Matrix::Identity(o, o), red.transform.at(k)});
      const auto i = static_cast<std::size_t>(k - w.lo);
      if (composite.size() <= i) composite.push_back(lift);
      else composite[i] = composite[i] * lift;
    }
    emitted.push_back(red.blocks.blocks[0]);
    remaining = red.blocks.blocks[1];
  }
  if (composite.empty())
    for (long k = w.lo; k <= w.hi; ++k) composite.push_back(Matrix::Identity(n, n));
  if (remaining.dimension() > 0) emitted.push_back(remaining);

  CascadeResult out;
  Reduction& red = out.reduction;
  red.certificate = last_cert;
  red.transform.window = w;
  red.transform.S = std::move(composite);
  const WeakBound wb = fit_weak_bound(red.transform);
  red.transform.fitted_M = wb.M;
  red.transform.fitted_eps = wb.eps;
  red.transform.degeneracy = wb.eps > 1.0 ? Degeneracy::WeaklyNonDegenerate : Degeneracy::NonDegenerate;

  std::vector<std::vector<Matrix>> slices;
  for (const auto& b : emitted) {
    red.blocks.dims.push_back(b.dimension());
    slices.push_back(table_slice(b, w));
    red.blocks.blocks.push_back(MatrixSequence::table(w.lo, slices.back(), sys.invertibility_tolerance()));
  }
  std::vector<Matrix> full;
  for (long k = w.lo; k < w.hi; ++k) {
    std::vector<Matrix> parts;
    for (const auto& sl : slices) parts.push_back(sl[static_cast<std::size_t>(k - w.lo)]);
    full.push_back(assemble(parts));
  }
  red.blocks.assembled = MatrixSequence::table(w.lo, std::move(full), sys.invertibility_tolerance());
  red.blocks.max_off_diagonal = off;

  // Corollary 3.1: every block carries exactly its spectral interval.
  SpectrumConfig block_config = config;
  block_config.check_saturation = false;
  const double tol = 2.0 * config.bisect_tol;
  for (std::size_t b = 0; b < red.blocks.blocks.size(); ++b) {
    const MatrixSequence& blk = red.blocks.blocks[b];
    SpectrumEstimate e = estimate_spectrum(blk, blk.clip(est.window),
                                           std::make_pair(est.bracket_lo, est.bracket_hi), block_config);
    const int expected = b < block_expected.size() ? block_expected[b] : -1;
    bool ok = expected < 0 ? e.intervals.empty() : !e.intervals.empty();
    for (const auto& iv : e.intervals)
      ok = ok && expected >= 0 && within(iv, est.intervals[static_cast<std::size_t>(expected)], tol);
    if (!ok) {
      std::ostringstream os;
      os << "block " << b << " (dim " << blk.dimension() << ") spectrum";
      for (const auto& iv : e.intervals) os << " [" << iv.lo << ", " << iv.hi << "]";
      if (expected >= 0) {
        const auto& x = est.intervals[static_cast<std::size_t>(expected)];
        os << " does not match [" << x.lo << ", " << x.hi << "]";
      } else {
        os << " should be empty";
      }
      throw Error(ErrorKind::BlockSpectrumMismatch, os.str());
    }
    if (!e.saturated) out.diagnostics.push_back("block " + std::to_string(b) + " spectrum unsaturated");
    out.block_spectra.push_back(std::move(e));
  }
  return out;
}

InvarianceReport spectrum_invariance_check(const MatrixSequence& a, const MatrixSequence& b,
                                           const SimilarityTransform& s,
                                           const SpectrumEstimate& est_a,
                                           const SpectrumConfig& config) {
  InvarianceReport rep;
  const Window w = b.clip(s.window);
  rep.similarity = verify_weak_similarity(a, b, s, w);
  rep.spectrum_b = estimate_spectrum(b, b.clip(est_a.window),
                                     std::make_pair(est_a.bracket_lo, est_a.bracket_hi), config);
  rep.distance = interval_hausdorff(est_a.intervals, rep.spectrum_b.intervals);
  rep.pass = rep.similarity.pass && rep.distance <= 2.0 * config.bisect_tol;
  return rep;
}

}  // namespace ned
