#pragma once

// Nonautonomous linear difference systems x_{k+1} = A_k x_k and their
// evolution operators.

#include <Eigen/Dense>

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "ned/errors.hpp"

namespace ned {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

/// Closed integer interval [lo, hi].
struct Window {
  long lo = 0;
  long hi = 0;

  long size() const { return hi - lo + 1; }
  long mid() const;
  bool contains(long k) const { return lo <= k && k <= hi; }
  bool contains(const Window& w) const { return lo <= w.lo && w.hi <= hi; }
  /// Same midpoint, twice the half-length.
  Window doubled() const;
  /// Middle half of the window, used for the extension-stability test.
  Window inner() const;
  Window expanded(long margin) const { return {lo - margin, hi + margin}; }
  Window intersect(const Window& o) const;

  bool operator==(const Window&) const = default;
};

/// Checks lo <= hi; throws InvalidArgument otherwise.
Window make_window(long lo, long hi);

/// Operator 2-norm (largest singular value).
double norm2(const Matrix& m);

/// The coefficient sequence {A_k}. Either a finite table or a pure generator.
class MatrixSequence {
 public:
  using Generator = std::function<Matrix(long)>;

  static constexpr double kDefaultInvertibilityTolerance = 1e-12;

  /// Table-backed sequence: matrices[i] is A_{k_min + i}.
  static MatrixSequence table(long k_min, std::vector<Matrix> matrices,
                              double invertibility_tolerance = kDefaultInvertibilityTolerance);

  /// Closed-form sequence defined for every k.
  static MatrixSequence generator(int dimension, std::string name, std::vector<double> params,
                                  Generator gen,
                                  double invertibility_tolerance = kDefaultInvertibilityTolerance);

  int dimension() const { return dimension_; }
  const std::string& name() const { return name_; }
  const std::vector<double>& params() const { return params_; }
  double invertibility_tolerance() const { return tol_; }
  bool is_table() const { return !table_.empty(); }
  const std::vector<Matrix>& table_entries() const { return table_; }
  long table_k_min() const { return k_min_; }

  /// Range of k for which A_k is defined; nullopt for generators (all of Z).
  std::optional<Window> transition_range() const;
  /// Range of fibers on which Phi is defined: one past the last A_k.
  std::optional<Window> fiber_range() const;
  /// Clips `w` to the fiber range.
  Window clip(const Window& w) const;

  /// A_k, checked for range and invertibility.
  Matrix transition(long k) const;
  /// A_k^{-1}.
  Matrix inverse_transition(long k) const;

 private:
  int dimension_ = 0;
  std::string name_;
  std::vector<double> params_;
  Generator gen_;
  std::vector<Matrix> table_;
  long k_min_ = 0;
  double tol_ = kDefaultInvertibilityTolerance;
};

/// Phi(k,l): A_{k-1}...A_l for k > l, Id for k = l, A_k^{-1}...A_{l-1}^{-1} for k < l.
Matrix evolution(const MatrixSequence& sys, long k, long l);

/// (1/gamma)^{k-l} Phi(k,l).
Matrix weighted_evolution(const MatrixSequence& sys, double gamma, long k, long l);

/// The sequence A_k / gamma.
MatrixSequence weighted_system(const MatrixSequence& sys, double gamma);

/// Named closed-form systems: paper_2d (omega, a), paper_scalar (omega, a),
/// constant_diag (d_1..d_N), table (N, k_min, then row-major entries).
MatrixSequence builtin_example(const std::string& name, const std::vector<double>& params);

/// Exponent e_k of the oscillating scalar factor
/// exp(-omega + a k (-1)^k - a (k-1) (-1)^{k-1}).
double oscillating_exponent(double omega, double a, long k);

}  // namespace ned
