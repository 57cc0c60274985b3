#pragma once

#include <complex>
#include <optional>
#include <vector>

#include <Eigen/Dense>

#include "ptdyn/errors.hpp"

namespace ptdyn {

using Complex = std::complex<double>;
using Index = Eigen::Index;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;

inline constexpr Complex I1{0.0, 1.0};

// Dense operator on span{|0>, ..., |dim-1>}.
class FockOperator {
 public:
  explicit FockOperator(Matrix m);

  static FockOperator identity(Index dim);
  static FockOperator zero(Index dim);
  static FockOperator diagonal(const Vector& d);

  Index dim() const { return m_.rows(); }
  const Matrix& matrix() const { return m_; }
  Complex operator()(Index i, Index j) const { return m_(i, j); }

  FockOperator adjoint() const { return FockOperator(m_.adjoint()); }
  FockOperator conj() const { return FockOperator(m_.conjugate()); }
  FockOperator inverse() const;

 private:
  Matrix m_;
};

FockOperator operator+(const FockOperator& a, const FockOperator& b);
FockOperator operator-(const FockOperator& a, const FockOperator& b);
FockOperator operator-(const FockOperator& a);
FockOperator operator*(const FockOperator& a, const FockOperator& b);
FockOperator operator*(Complex c, const FockOperator& a);

class FockState {
 public:
  explicit FockState(Vector v);

  static FockState basis(Index dim, Index n);

  Index dim() const { return v_.size(); }
  const Vector& amplitudes() const { return v_; }
  Complex operator[](Index n) const { return v_(n); }
  FockState conj() const { return FockState(v_.conjugate()); }
  double norm() const { return v_.norm(); }

 private:
  Vector v_;
};

FockState operator*(const FockOperator& a, const FockState& v);
FockState operator+(const FockState& a, const FockState& b);
FockState operator-(const FockState& a, const FockState& b);
FockState operator*(Complex c, const FockState& v);

// v -> M conj(v)
class AntilinearOperator {
 public:
  explicit AntilinearOperator(FockOperator linear_part);

  static AntilinearOperator conjugation(Index dim);

  Index dim() const { return m_.dim(); }
  const FockOperator& linear_part() const { return m_; }
  AntilinearOperator inverse() const;

 private:
  FockOperator m_;
};

FockState apply_antilinear(const AntilinearOperator& k, const FockState& v);
FockState operator*(const AntilinearOperator& k, const FockState& v);
FockOperator operator*(const AntilinearOperator& k1, const AntilinearOperator& k2);
AntilinearOperator operator*(const FockOperator& a, const AntilinearOperator& k);
AntilinearOperator operator*(const AntilinearOperator& k, const FockOperator& a);

struct Ladder {
  FockOperator a;
  FockOperator a_dagger;
};

Ladder ladder_ops(Index dim);
FockOperator number_op(Index dim);
// a^dagger a + 1/2
FockOperator shifted_number_op(Index dim);
FockOperator parity(Index dim);
AntilinearOperator parity_time(Index dim);

FockOperator matrix_exp(const FockOperator& a);
FockOperator hermitian_sqrt(const FockOperator& a, double tol = 1e-10);

// leading dim x dim block
FockOperator crop(const FockOperator& a, Index dim);
FockState crop(const FockState& v, Index dim);

// levels kept in residual comparisons: the top quarter is dropped
Index trusted_levels(Index dim);
// ||r||_F / ||ref||_F on the leading block (whole matrix when levels is empty)
double block_residual(const Matrix& r, const Matrix& ref, std::optional<Index> levels = std::nullopt);

// shift + number (N + 1/2) + raise a^dagger^2 + lower a^2
class QuadraticOperator {
 public:
  QuadraticOperator(Complex number, Complex raise, Complex lower, Complex shift = 0.0)
      : number_(number), raise_(raise), lower_(lower), shift_(shift) {}

  Complex number() const { return number_; }
  Complex raise() const { return raise_; }
  Complex lower() const { return lower_; }
  Complex shift() const { return shift_; }

  void apply(const Vector& in, Vector& out) const;
  Vector operator*(const Vector& v) const;
  FockOperator dense(Index dim) const;
  double norm_bound(Index dim) const;

  QuadraticOperator adjoint() const;
  QuadraticOperator scaled(Complex c) const;
  QuadraticOperator plus(const QuadraticOperator& o) const;

 private:
  Complex number_, raise_, lower_, shift_;
};

// exp(q) built in dim*pad levels and cropped back to dim
FockOperator truncated_exp(const QuadraticOperator& q, Index dim, Index pad = 4);

}  // namespace ptdyn
