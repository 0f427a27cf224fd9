#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "ned/reducibility.hpp"
#include "support.hpp"

using namespace ned;
using ned::testing::constant;
using ned::testing::rel_diff;

namespace {

Matrix m2(double a, double b, double c, double d) {
  Matrix m(2, 2);
  m << a, b, c, d;
  return m;
}

Matrix p_tilde(int n, int r) {
  Matrix p = Matrix::Zero(n, n);
  p.topLeftCorner(r, r).setIdentity();
  return p;
}

SimilarityTransform identity_transform(int n, const Window& w) {
  SimilarityTransform s;
  s.window = w;
  s.S.assign(static_cast<std::size_t>(w.size()), Matrix::Identity(n, n));
  return s;
}

ErrorKind kind_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.kind();
  }
  return ErrorKind::InvalidArgument;
}

// Exact spectral splitting of a constant matrix: eigenvalues below 1 span the
// range, the rest the kernel, at every fiber of w.
ProjectorSequence spectral_splitting(const MatrixSequence& sys, const Matrix& a, const Window& w) {
  Eigen::EigenSolver<Matrix> es(a);
  const Matrix v = es.eigenvectors().real();
  std::vector<Eigen::Index> lo, hi;
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    (std::abs(es.eigenvalues()(i).real()) < 1.0 ? lo : hi).push_back(i);
  Matrix range(a.rows(), static_cast<Eigen::Index>(lo.size())), kernel(a.rows(), static_cast<Eigen::Index>(hi.size()));
  for (std::size_t j = 0; j < lo.size(); ++j) range.col(static_cast<Eigen::Index>(j)) = v.col(lo[j]).normalized();
  for (std::size_t j = 0; j < hi.size(); ++j) kernel.col(static_cast<Eigen::Index>(j)) = v.col(hi[j]).normalized();
  const auto n = static_cast<std::size_t>(w.size());
  return ProjectorSequence::from_bases(sys, w, w.mid(), std::vector<Matrix>(n, range),
                                       std::vector<Matrix>(n, kernel));
}

const MatrixSequence& paper_2d() {
  static const auto sys = builtin_example("paper_2d", {1.0, 0.1});
  return sys;
}

}  // namespace

TEST(Frame, AlreadyNormalized) {
  const Window w{-10, 10};
  const auto proj = propagate_projector(paper_2d(), p_tilde(2, 1), 0, w);
  const auto f = normalize_projector(paper_2d(), proj, 0, w);
  EXPECT_LE(norm2(f.T - Matrix::Identity(2, 2)), 1e-14);
  EXPECT_LE(norm2(f.P_tilde - p_tilde(2, 1)), 0.0);
  for (long k = w.lo; k <= w.hi; ++k) EXPECT_LE(rel_diff(f.x(k), evolution(paper_2d(), k, 0)), 1e-12);
}

TEST(Frame, ObliqueProjector) {
  // eigenvectors (1,0) for 1/2 and (-1,1) for 2: P = [[1,1],[0,0]] is invariant
  const Matrix v = m2(1, -1, 0, 1);
  const Matrix a = v * m2(0.5, 0, 0, 2) * v.inverse();
  const auto sys = constant(a);
  const Matrix p = m2(1, 1, 0, 0);
  const Window w{-8, 8};
  const auto f = normalize_projector(sys, propagate_projector(sys, p, 0, w), 0, w);
  EXPECT_LE(norm2(f.T * p * f.T_inv - p_tilde(2, 1)), 1e-12);
  EXPECT_LE(norm2(f.x(0) - f.T_inv), 1e-14);
  EXPECT_LE(norm2(f.T * f.T_inv - Matrix::Identity(2, 2)), 1e-14);
  for (long k = w.lo; k < w.hi; ++k) EXPECT_LE(rel_diff(f.x(k + 1), a * f.x(k)), 1e-12);
}

TEST(Frame, RankDegenerate) {
  const auto sys = builtin_example("constant_diag", {2.0, 0.5});
  const auto proj = propagate_projector(sys, Matrix::Identity(2, 2), 0, {-3, 3});
  EXPECT_EQ(kind_of([&] { normalize_projector(sys, proj, 0); }), ErrorKind::RankDegenerate);
}

TEST(Split, Identity) {
  const auto s = lyapunov_split(Matrix::Identity(2, 2), p_tilde(2, 1));
  EXPECT_LE(norm2(s.R - Matrix::Identity(2, 2)), 1e-15);
  EXPECT_LE(norm2(s.S - Matrix::Identity(2, 2)), 1e-15);
}

TEST(Split, Isometry) {
  const double t = 0.7;
  const Matrix x = m2(std::cos(t), -std::sin(t), std::sin(t), std::cos(t));
  const auto s = lyapunov_split(x, p_tilde(2, 1));
  EXPECT_LE(norm2(s.R - Matrix::Identity(2, 2)), 1e-15);
  EXPECT_LE(norm2(s.S - x), 1e-15);
}

TEST(Split, Paper2dDiagonal) {
  const Window w{-10, 10};
  const auto f = normalize_projector(paper_2d(), propagate_projector(paper_2d(), p_tilde(2, 1), 0, w), 0, w);
  const auto s = lyapunov_split(f, 4);
  const Matrix phi = evolution(paper_2d(), 4, 0);
  EXPECT_LE(rel_diff(s.R, m2(std::abs(phi(0, 0)), 0, 0, std::abs(phi(1, 1)))), 1e-14);
  EXPECT_LE(norm2(s.S.cwiseAbs() - Matrix::Identity(2, 2)), 1e-14);
}

TEST(Split, RejectsNonCanonicalPTilde) {
  EXPECT_EQ(kind_of([] { lyapunov_split(Matrix::Identity(2, 2), m2(0, 0, 0, 1)); }), ErrorKind::InvalidArgument);
}

TEST(Split, RandomFramesProperty) {
  std::mt19937_64 rng(555);
  std::normal_distribution<double> g;
  for (int trial = 0; trial < 100; ++trial) {
    const int n = 2 + trial % 3;
    const int r = 1 + trial % (n - 1);
    Matrix x(n, n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) x(i, j) = g(rng);
    const Matrix p = p_tilde(n, r), q = Matrix::Identity(n, n) - p;
    const auto s = lyapunov_split(x, p);
    const Matrix gram = p * x.transpose() * x * p + q * x.transpose() * x * q;
    EXPECT_LE(norm2(s.R * s.R - gram) / norm2(gram), 1e-9);
    EXPECT_LE(norm2(s.R - s.R.transpose()), 1e-10 * norm2(s.R));
    EXPECT_GT(Eigen::SelfAdjointEigenSolver<Matrix>(s.R).eigenvalues().minCoeff(), 0.0);
    EXPECT_LE(norm2(p * s.R - s.R * p), 1e-10 * norm2(s.R));
    EXPECT_LE(norm2(s.S), std::sqrt(2.0) + 1e-9);
    EXPECT_LE(norm2(s.S * s.R - x) / norm2(x), 1e-9);
    EXPECT_LE(norm2(s.S * p * s.S.inverse() - x * p * x.inverse()) / norm2(x * p * x.inverse()), 1e-9);
  }
}

TEST(BlockDiagonalize, Paper2d) {
  const Window w{-30, 30};
  const auto red = block_diagonalize(paper_2d(), propagate_projector(paper_2d(), p_tilde(2, 1), 0, w), w);
  EXPECT_EQ(red.blocks.dims, (std::vector<int>{1, 1}));
  for (long k = w.lo; k < w.hi; ++k) {
    const Matrix b = red.blocks.assembled.transition(k);
    const Matrix a = paper_2d().transition(k);
    EXPECT_EQ(b(0, 1), 0.0);
    EXPECT_EQ(b(1, 0), 0.0);
    EXPECT_NEAR(std::abs(b(0, 0)) / std::abs(a(0, 0)), 1.0, 1e-12);
    EXPECT_NEAR(std::abs(b(1, 1)) / std::abs(a(1, 1)), 1.0, 1e-12);
  }
  const auto rep = verify_weak_similarity(paper_2d(), red.blocks.assembled, red.transform, w);
  EXPECT_TRUE(rep.pass);
  EXPECT_LE(rep.bound.eps, std::exp(0.2) + 1e-9);
}

TEST(BlockDiagonalize, UpperTriangularConstant) {
  const Matrix a = m2(2, 1, 0, 0.5);
  const auto sys = constant(a);
  const Window w{-15, 15};
  const auto red = block_diagonalize(sys, spectral_splitting(sys, a, w), w);
  ASSERT_EQ(red.blocks.dims, (std::vector<int>{1, 1}));
  for (long k = w.lo; k < w.hi; ++k) {
    const Matrix b = red.blocks.assembled.transition(k);
    EXPECT_NEAR(std::abs(b(0, 0)), 0.5, 1e-8);
    EXPECT_NEAR(std::abs(b(1, 1)), 2.0, 1e-8);
    EXPECT_LE(std::abs(b(0, 1)) + std::abs(b(1, 0)), 1e-10 * norm2(b));
  }
  EXPECT_LE(verify_weak_similarity(sys, red.blocks.assembled, red.transform, w).max_residual, 1e-9);
}

TEST(BlockDiagonalize, RankZero) {
  const auto sys = builtin_example("constant_diag", {2.0, 3.0});
  const Window w{-10, 10};
  EXPECT_EQ(kind_of([&] { block_diagonalize(sys, propagate_projector(sys, Matrix::Zero(2, 2), 0, w), w); }),
            ErrorKind::RankDegenerate);
}

TEST(BlockDiagonalize, WrongCertificate) {
  const Window w{-10, 10};
  const DichotomyCertificate cert{propagate_projector(paper_2d(), p_tilde(2, 1), 0, w), 1.0, 0.5, 1.0,
                                  Flavor::UniformED};
  EXPECT_EQ(kind_of([&] { block_diagonalize(paper_2d(), cert, w); }), ErrorKind::CertificateMissing);
}

TEST(WeakSimilarity, IdentityTransform) {
  std::mt19937_64 rng(8);
  const auto a = ned::testing::random_table(rng, 3, -12, 12);
  const Window w{-10, 10};
  const auto rep = verify_weak_similarity(a, a, identity_transform(3, w), w);
  EXPECT_TRUE(rep.pass);
  EXPECT_EQ(rep.max_residual, 0.0);
  EXPECT_NEAR(rep.bound.M, 1.0, 1e-12);
  EXPECT_NEAR(rep.bound.eps, 1.0, 1e-12);
}

TEST(WeakSimilarity, BrokenConjugation) {
  const Matrix a = m2(2, 1, 0, 0.5);
  const Window w{-10, 10};
  const auto rep = verify_weak_similarity(constant(a), constant(2 * a), identity_transform(2, w), w);
  EXPECT_FALSE(rep.pass);
  EXPECT_GT(rep.max_residual, 0.1);
}

TEST(Cascade, ConstantDiagonal) {
  const auto sys = builtin_example("constant_diag", {2.0, 0.5});
  const auto est = estimate_spectrum(sys, {-15, 15}, std::make_pair(0.25, 4.0));
  const auto res = full_reduction(sys, est, {-35, 35});
  ASSERT_EQ(res.reduction.blocks.dims, (std::vector<int>{1, 1}));
  ASSERT_EQ(res.block_spectra.size(), 2u);
  const double expected[] = {0.5, 2.0};
  for (int i = 0; i < 2; ++i) {
    const auto& iv = res.block_spectra[static_cast<std::size_t>(i)].intervals;
    ASSERT_EQ(iv.size(), 1u);
    EXPECT_LE(iv[0].lo, expected[i]);
    EXPECT_GE(iv[0].hi, expected[i]);
  }
  EXPECT_LE(verify_weak_similarity(sys, res.reduction.blocks.assembled, res.reduction.transform, {-35, 35})
                .max_residual,
            1e-9);
}

TEST(Cascade, ScalarIsOneBlock) {
  const auto sys = builtin_example("paper_scalar", {1.0, 0.1});
  SpectrumConfig cfg;
  cfg.check_saturation = false;
  const auto est = estimate_spectrum(sys, {-20, 20}, std::nullopt, cfg);
  const Window w{-40, 40};
  const auto res = full_reduction(sys, est, w, cfg);
  ASSERT_EQ(res.reduction.blocks.dims, (std::vector<int>{1}));
  for (long k = w.lo; k <= w.hi; ++k) EXPECT_NEAR(std::abs(res.reduction.transform.at(k)(0, 0)), 1.0, 1e-12);
}

TEST(Invariance, SameSystem) {
  const auto sys = builtin_example("constant_diag", {2.0, 0.5});
  const auto est = estimate_spectrum(sys, {-15, 15});
  const auto rep = spectrum_invariance_check(sys, sys, identity_transform(2, {-15, 15}), est);
  EXPECT_TRUE(rep.pass);
  EXPECT_EQ(rep.distance, 0.0);
}

TEST(Invariance, PermutedBlocks) {
  const auto a = builtin_example("constant_diag", {2.0, 0.5});
  const auto b = builtin_example("constant_diag", {0.5, 2.0});
  const Window w{-15, 15};
  SimilarityTransform s;
  s.window = w;
  s.S.assign(static_cast<std::size_t>(w.size()), m2(0, 1, 1, 0));
  const auto rep = spectrum_invariance_check(a, b, s, estimate_spectrum(a, w));
  EXPECT_TRUE(rep.similarity.pass);
  EXPECT_EQ(rep.distance, 0.0);
}

TEST(Invariance, RankPreservedAtCuts) {
  const Matrix a = m2(2, 1, 0, 0.5);
  const auto sys = constant(a);
  const Window w{-15, 15};
  const auto red = block_diagonalize(sys, spectral_splitting(sys, a, w.expanded(20)), w.expanded(20));
  for (double gamma : {0.25, 1.0, 4.0}) {
    const auto va = resolvent_test(sys, gamma, w);
    const auto vb = resolvent_test(red.blocks.assembled, gamma, w);
    ASSERT_EQ(va.status, Status::Resolvent);
    ASSERT_EQ(vb.status, Status::Resolvent);
    EXPECT_EQ(va.stable_dim, vb.stable_dim);
  }
}
