#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "ptdyn/fock_algebra.hpp"

using namespace ptdyn;

TEST_CASE("ladder operator in the smallest truncation") {
  const Ladder l = ladder_ops(2);
  CHECK(l.a(0, 1) == Complex(1.0));
  CHECK(l.a(0, 0) == Complex(0.0));
  CHECK(l.a(1, 0) == Complex(0.0));
  CHECK(l.a(1, 1) == Complex(0.0));
}

TEST_CASE("ladder entries are sqrt(n)") {
  const Ladder l = ladder_ops(3);
  CHECK(std::abs(l.a(1, 2) - std::sqrt(2.0)) < 1e-15);
  CHECK((l.a_dagger.matrix() - l.a.matrix().adjoint()).norm() == 0.0);
}

TEST_CASE("commutator is the identity except in the last level") {
  const Ladder l = ladder_ops(16);
  const Matrix c = l.a.matrix() * l.a_dagger.matrix() - l.a_dagger.matrix() * l.a.matrix();
  const Matrix d = c - Matrix::Identity(16, 16);
  CHECK(d.topLeftCorner(15, 15).norm() < 1e-13);
  CHECK(std::abs(c(15, 15) - Complex(-15.0)) < 1e-12);
}

TEST_CASE("invalid dimensions throw") {
  CHECK_THROWS_AS(ladder_ops(1), InvalidDimension);
  CHECK_THROWS_AS(FockOperator(Matrix::Zero(2, 3)), InvalidDimension);
  CHECK_THROWS_AS(FockState::basis(4, 4), InvalidDimension);
  CHECK_THROWS_AS(ladder_ops(3) .a * ladder_ops(4).a, DimensionMismatch);
}

TEST_CASE("matrix exponential") {
  CHECK((matrix_exp(FockOperator::zero(6)).matrix() - Matrix::Identity(6, 6)).norm() == 0.0);

  const FockOperator e = matrix_exp(I1 * std::acos(-1.0) * shifted_number_op(8));
  for (Index n = 0; n < 8; ++n) {
    const Complex expect = (n % 2 == 0 ? 1.0 : -1.0) * I1;
    CHECK(std::abs(e(n, n) - expect) < 1e-14);
  }

  // Taylor-series oracle
  const Index dim = 32;
  const Ladder l = ladder_ops(dim);
  const Matrix a = 0.05 * (l.a_dagger.matrix() * l.a_dagger.matrix() - l.a.matrix() * l.a.matrix());
  Matrix sum = Matrix::Identity(dim, dim), term = Matrix::Identity(dim, dim);
  for (int k = 1; k <= 20; ++k) {
    term = term * a / double(k);
    sum += term;
  }
  CHECK((matrix_exp(FockOperator(a)).matrix() - sum).norm() <= 1e-11);
}

TEST_CASE("non-finite exponent is a numeric error") {
  Matrix a = Matrix::Zero(3, 3);
  a(0, 0) = Complex(1e308, 0.0);
  CHECK_THROWS_AS(matrix_exp(FockOperator(a)), NumericError);
}

TEST_CASE("hermitian square root") {
  CHECK((hermitian_sqrt(FockOperator::identity(5)).matrix() - Matrix::Identity(5, 5)).norm() == 0.0);
  Vector d(2);
  d << 4.0, 9.0;
  const FockOperator s = hermitian_sqrt(FockOperator::diagonal(d));
  CHECK(std::abs(s(0, 0) - 2.0) < 1e-14);
  CHECK(std::abs(s(1, 1) - 3.0) < 1e-14);

  // dense oracle: square of the root
  Matrix b = Matrix::Random(6, 6);
  Matrix p = b.adjoint() * b + Matrix::Identity(6, 6);
  const Matrix r = hermitian_sqrt(FockOperator(p)).matrix();
  CHECK((r * r - p).norm() < 1e-12);

  Vector neg(2);
  neg << 1.0, -1.0;
  CHECK_THROWS_AS(hermitian_sqrt(FockOperator::diagonal(neg)), MetricViolation);
  Matrix nh = Matrix::Identity(2, 2);
  nh(0, 1) = 1.0;
  CHECK_THROWS_AS(hermitian_sqrt(FockOperator(nh)), MetricViolation);
}

TEST_CASE("parity-time on Fock states") {
  const AntilinearOperator pt = parity_time(6);
  for (Index n = 0; n < 6; ++n) {
    const FockState v = pt * FockState::basis(6, n);
    const double sign = n % 2 == 0 ? 1.0 : -1.0;
    CHECK((v.amplitudes() - sign * FockState::basis(6, n).amplitudes()).norm() == 0.0);
  }
  const FockState w = AntilinearOperator::conjugation(3) * (I1 * FockState::basis(3, 0));
  CHECK(std::abs(w[0] - Complex(0.0, -1.0)) == 0.0);
}

TEST_CASE("parity-time is an involution") {
  const AntilinearOperator pt = parity_time(7);
  const FockState v(Vector::Random(7));
  CHECK((pt * (pt * v)).amplitudes().isApprox(v.amplitudes(), 1e-15));
  CHECK(((pt * pt).matrix() - Matrix::Identity(7, 7)).norm() == 0.0);
}

TEST_CASE("antilinear composition rules") {
  const FockOperator m(Matrix::Random(4, 4));
  const AntilinearOperator k(m);
  const FockState v(Vector::Random(4));
  // (A K) v = A (K v), (K A) v = K (A v)
  const FockOperator a(Matrix::Random(4, 4));
  CHECK(((a * k) * v).amplitudes().isApprox((a * (k * v)).amplitudes(), 1e-13));
  CHECK(((k * a) * v).amplitudes().isApprox((k * (a * v)).amplitudes(), 1e-13));
  CHECK(((k * k) * v).amplitudes().isApprox((k * (k * v)).amplitudes(), 1e-13));
  CHECK((k.inverse() * (k * v)).amplitudes().isApprox(v.amplitudes(), 1e-12));
  CHECK_THROWS_AS(AntilinearOperator(FockOperator::zero(3)), NumericError);
}

TEST_CASE("matrix-free quadratic operator matches its dense form") {
  const QuadraticOperator q(Complex(1.3, 0.2), Complex(0.0, 0.4), Complex(-0.7, 0.1), Complex(0.25));
  const Index dim = 40;
  const Vector v = Vector::Random(dim);
  Vector out;
  q.apply(v, out);
  CHECK((out - q.dense(dim).matrix() * v).norm() < 1e-12);
  CHECK(q.dense(dim).matrix().norm() <= q.norm_bound(dim) * std::sqrt(double(dim)));
  CHECK((q.adjoint().dense(dim).matrix() - q.dense(dim).matrix().adjoint()).norm() < 1e-13);
}

TEST_CASE("padded exponential converges on the leading block") {
  const QuadraticOperator gen(0.0, 0.15, -0.15);
  const FockOperator e4 = truncated_exp(gen, 24, 4);
  const FockOperator e8 = truncated_exp(gen, 24, 8);
  CHECK(block_residual(e4.matrix() - e8.matrix(), e8.matrix(), 12) < 1e-12);
  CHECK(trusted_levels(64) == 48);
}
