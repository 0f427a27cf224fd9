#include "ned/system.hpp"

#include <cmath>
#include <sstream>
#include <utility>

namespace ned {

std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::IndexOutOfRange: return "IndexOutOfRange";
    case ErrorKind::SingularTransition: return "SingularTransition";
    case ErrorKind::NonpositiveWeight: return "NonpositiveWeight";
    case ErrorKind::UnknownName: return "UnknownName";
    case ErrorKind::ParamConstraintViolated: return "ParamConstraintViolated";
    case ErrorKind::NotAProjector: return "NotAProjector";
    case ErrorKind::EmptyGrid: return "EmptyGrid";
    case ErrorKind::NoSpectralGap: return "NoSpectralGap";
    case ErrorKind::BracketNotResolvent: return "BracketNotResolvent";
    case ErrorKind::FiberMismatch: return "FiberMismatch";
    case ErrorKind::WhitneyFailure: return "WhitneyFailure";
    case ErrorKind::RankDegenerate: return "RankDegenerate";
    case ErrorKind::IllConditionedBasis: return "IllConditionedBasis";
    case ErrorKind::IndefiniteGram: return "IndefiniteGram";
    case ErrorKind::CertificateMissing: return "CertificateMissing";
    case ErrorKind::CutPointNotResolvent: return "CutPointNotResolvent";
    case ErrorKind::BlockSpectrumMismatch: return "BlockSpectrumMismatch";
    case ErrorKind::ParseError: return "ParseError";
    case ErrorKind::InvalidArgument: return "InvalidArgument";
  }
  return "Unknown";
}

long Window::mid() const {
  // floor division so that negative windows are handled consistently
  long s = lo + hi;
  return s >= 0 ? s / 2 : -((-s + 1) / 2);
}

Window Window::doubled() const {
  long m = mid();
  return {m - 2 * (m - lo), m + 2 * (hi - m)};
}

Window Window::inner() const {
  long q = (hi - lo) / 4;
  return {lo + q, hi - q};
}

Window Window::intersect(const Window& o) const {
  return {std::max(lo, o.lo), std::min(hi, o.hi)};
}

Window make_window(long lo, long hi) {
  if (lo > hi) {
    std::ostringstream os;
    os << "empty window [" << lo << ", " << hi << "]";
    throw Error(ErrorKind::InvalidArgument, os.str());
  }
  return {lo, hi};
}

double norm2(const Matrix& m) {
  if (m.size() == 0) return 0.0;
  if (m.rows() == 1 || m.cols() == 1) return m.norm();
  Eigen::JacobiSVD<Matrix> svd(m);
  return svd.singularValues()(0);
}

MatrixSequence MatrixSequence::table(long k_min, std::vector<Matrix> matrices,
                                     double invertibility_tolerance) {
  if (matrices.empty()) throw Error(ErrorKind::InvalidArgument, "empty matrix table");
  MatrixSequence s;
  s.dimension_ = static_cast<int>(matrices.front().rows());
  for (const auto& m : matrices) {
    if (m.rows() != s.dimension_ || m.cols() != s.dimension_)
      throw Error(ErrorKind::InvalidArgument, "table matrices must all be N x N");
    if (!m.allFinite()) throw Error(ErrorKind::InvalidArgument, "non-finite table entry");
  }
  s.name_ = "table";
  s.table_ = std::move(matrices);
  s.k_min_ = k_min;
  s.tol_ = invertibility_tolerance;
  return s;
}

MatrixSequence MatrixSequence::generator(int dimension, std::string name, std::vector<double> params,
                                         Generator gen, double invertibility_tolerance) {
  if (dimension <= 0) throw Error(ErrorKind::InvalidArgument, "dimension must be positive");
  MatrixSequence s;
  s.dimension_ = dimension;
  s.name_ = std::move(name);
  s.params_ = std::move(params);
  s.gen_ = std::move(gen);
  s.tol_ = invertibility_tolerance;
  return s;
}

std::optional<Window> MatrixSequence::transition_range() const {
  if (!is_table()) return std::nullopt;
  return Window{k_min_, k_min_ + static_cast<long>(table_.size()) - 1};
}

std::optional<Window> MatrixSequence::fiber_range() const {
  auto r = transition_range();
  if (!r) return std::nullopt;
  return Window{r->lo, r->hi + 1};
}

Window MatrixSequence::clip(const Window& w) const {
  auto r = fiber_range();
  return r ? w.intersect(*r) : w;
}

Matrix MatrixSequence::transition(long k) const {
  Matrix a;
  if (is_table()) {
    if (k < k_min_ || k >= k_min_ + static_cast<long>(table_.size())) {
      std::ostringstream os;
      os << "A_" << k << " outside table range [" << k_min_ << ", "
         << k_min_ + static_cast<long>(table_.size()) - 1 << "]";
      throw Error(ErrorKind::IndexOutOfRange, os.str());
    }
    a = table_[static_cast<std::size_t>(k - k_min_)];
  } else {
    a = gen_(k);
    if (!a.allFinite()) throw Error(ErrorKind::SingularTransition, "non-finite generator output");
  }
  const double scale = std::pow(norm2(a), dimension_);
  if (!(std::abs(a.determinant()) > tol_ * scale)) {
    std::ostringstream os;
    os << "|det A_" << k << "| below tolerance";
    throw Error(ErrorKind::SingularTransition, os.str());
  }
  return a;
}

Matrix MatrixSequence::inverse_transition(long k) const {
  return transition(k).partialPivLu().inverse();
}

Matrix evolution(const MatrixSequence& sys, long k, long l) {
  const int n = sys.dimension();
  Matrix phi = Matrix::Identity(n, n);
  if (k > l) {
    for (long j = l; j < k; ++j) phi = sys.transition(j) * phi;
  } else if (k < l) {
    for (long j = l - 1; j >= k; --j) phi = sys.inverse_transition(j) * phi;
  }
  return phi;
}

Matrix weighted_evolution(const MatrixSequence& sys, double gamma, long k, long l) {
  if (!(gamma > 0.0)) throw Error(ErrorKind::NonpositiveWeight, "gamma must be positive");
  return std::pow(gamma, -static_cast<double>(k - l)) * evolution(sys, k, l);
}

MatrixSequence weighted_system(const MatrixSequence& sys, double gamma) {
  if (!(gamma > 0.0)) throw Error(ErrorKind::NonpositiveWeight, "gamma must be positive");
  if (sys.is_table()) {
    std::vector<Matrix> scaled;
    scaled.reserve(sys.table_entries().size());
    for (const auto& m : sys.table_entries()) scaled.push_back(m / gamma);
    return MatrixSequence::table(sys.table_k_min(), std::move(scaled), sys.invertibility_tolerance());
  }
  auto base = sys;
  return MatrixSequence::generator(
      sys.dimension(), sys.name() + "/gamma", sys.params(),
      [base, gamma](long k) -> Matrix { return base.transition(k) / gamma; },
      sys.invertibility_tolerance());
}

double oscillating_exponent(double omega, double a, long k) {
  const double sk = (k % 2 == 0) ? 1.0 : -1.0;
  const double kd = static_cast<double>(k);
  // (-1)^{k-1} = -(-1)^k
  return -omega + a * kd * sk + a * (kd - 1.0) * sk;
}

namespace {

void require_params(const std::string& name, const std::vector<double>& params, std::size_t n) {
  if (params.size() != n) {
    std::ostringstream os;
    os << name << " expects " << n << " parameters, got " << params.size();
    throw Error(ErrorKind::ParamConstraintViolated, os.str());
  }
}

}  // namespace

MatrixSequence builtin_example(const std::string& name, const std::vector<double>& params) {
  if (name == "paper_2d") {
    require_params(name, params, 2);
    const double omega = params[0], a = params[1];
    if (!(omega > a && a > 0.0))
      throw Error(ErrorKind::ParamConstraintViolated, "paper_2d requires omega > a > 0");
    return MatrixSequence::generator(2, name, params, [omega, a](long k) -> Matrix {
      const double e = oscillating_exponent(omega, a, k);
      Matrix m = Matrix::Zero(2, 2);
      m(0, 0) = std::exp(e);
      m(1, 1) = std::exp(-e);
      return m;
    });
  }
  if (name == "paper_scalar") {
    require_params(name, params, 2);
    const double omega = params[0], a = params[1];
    if (!(a > 0.0 && omega > 5.0 * a))
      throw Error(ErrorKind::ParamConstraintViolated, "paper_scalar requires omega > 5a > 0");
    return MatrixSequence::generator(1, name, params, [omega, a](long k) -> Matrix {
      Matrix m(1, 1);
      m(0, 0) = std::exp(oscillating_exponent(omega, a, k));
      return m;
    });
  }
  if (name == "constant_diag") {
    if (params.empty())
      throw Error(ErrorKind::ParamConstraintViolated, "constant_diag needs at least one entry");
    for (double d : params)
      if (!std::isfinite(d) || d == 0.0)
        throw Error(ErrorKind::ParamConstraintViolated, "constant_diag entries must be finite and nonzero");
    Eigen::Map<const Vector> diag(params.data(), static_cast<Eigen::Index>(params.size()));
    Matrix m = diag.asDiagonal();
    return MatrixSequence::generator(static_cast<int>(params.size()), name, params,
                                     [m](long) -> Matrix { return m; });
  }
  if (name == "table") {
    if (params.size() < 2)
      throw Error(ErrorKind::ParamConstraintViolated, "table expects N, k_min, entries...");
    const double nd = params[0];
    if (!(nd >= 1.0) || nd != std::floor(nd) || params[1] != std::floor(params[1]))
      throw Error(ErrorKind::ParamConstraintViolated, "table N and k_min must be integers, N >= 1");
    const auto n = static_cast<std::size_t>(nd);
    const std::size_t entries = params.size() - 2;
    if (entries == 0 || entries % (n * n) != 0)
      throw Error(ErrorKind::ParamConstraintViolated, "table entry count must be a multiple of N*N");
    std::vector<Matrix> mats;
    for (std::size_t off = 2; off < params.size(); off += n * n) {
      Matrix m(n, n);
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) m(i, j) = params[off + i * n + j];
      mats.push_back(std::move(m));
    }
    return MatrixSequence::table(static_cast<long>(params[1]), std::move(mats));
  }
  throw Error(ErrorKind::UnknownName, "unknown builtin system '" + name + "'");
}

}  // namespace ned
