#include "ptdyn/fock_algebra.hpp"

#include <cmath>
#include <string>
#include <unordered_map>

#include <unsupported/Eigen/MatrixFunctions>

namespace ptdyn {

namespace {

void require_same(Index a, Index b, const char* what) {
  if (a != b)
    throw DimensionMismatch(std::string(what) + ": " + std::to_string(a) + " vs " + std::to_string(b));
}

struct PairFactors {
  std::vector<double> up;    // sqrt(n (n-1)), a^dagger^2 |n-2> -> |n>
  std::vector<double> down;  // sqrt((n+1)(n+2)), a^2 |n+2> -> |n>
};

const PairFactors& pair_factors(Index dim) {
  thread_local std::unordered_map<Index, PairFactors> cache;
  auto it = cache.find(dim);
  if (it != cache.end()) return it->second;
  PairFactors f;
  f.up.resize(dim);
  f.down.resize(dim);
  for (Index n = 0; n < dim; ++n) {
    f.up[n] = std::sqrt(double(n) * double(n - 1));
    f.down[n] = std::sqrt(double(n + 1) * double(n + 2));
  }
  return cache.emplace(dim, std::move(f)).first->second;
}

}  // namespace

FockOperator::FockOperator(Matrix m) : m_(std::move(m)) {
  if (m_.rows() != m_.cols()) throw InvalidDimension("operator matrix is not square");
  if (m_.rows() < 2) throw InvalidDimension("truncation dimension must be >= 2");
}

FockOperator FockOperator::identity(Index dim) {
  if (dim < 2) throw InvalidDimension("truncation dimension must be >= 2");
  return FockOperator(Matrix::Identity(dim, dim));
}

FockOperator FockOperator::zero(Index dim) {
  if (dim < 2) throw InvalidDimension("truncation dimension must be >= 2");
  return FockOperator(Matrix::Zero(dim, dim));
}

FockOperator FockOperator::diagonal(const Vector& d) {
  return FockOperator(Matrix(d.asDiagonal()));
}

FockOperator FockOperator::inverse() const {
  Eigen::PartialPivLU<Matrix> lu(m_);
  Matrix inv = lu.inverse();
  if (!inv.allFinite()) throw NumericError("singular operator");
  double err = (m_ * inv - Matrix::Identity(dim(), dim())).norm();
  if (!(err < 1e-6 * std::sqrt(double(dim())))) throw NumericError("operator is numerically singular");
  return FockOperator(std::move(inv));
}

FockOperator operator+(const FockOperator& a, const FockOperator& b) {
  require_same(a.dim(), b.dim(), "operator sum");
  return FockOperator(a.matrix() + b.matrix());
}

FockOperator operator-(const FockOperator& a, const FockOperator& b) {
  require_same(a.dim(), b.dim(), "operator difference");
  return FockOperator(a.matrix() - b.matrix());
}

FockOperator operator-(const FockOperator& a) { return FockOperator(-a.matrix()); }

FockOperator operator*(const FockOperator& a, const FockOperator& b) {
  require_same(a.dim(), b.dim(), "operator product");
  return FockOperator(a.matrix() * b.matrix());
}

FockOperator operator*(Complex c, const FockOperator& a) { return FockOperator(c * a.matrix()); }

FockState::FockState(Vector v) : v_(std::move(v)) {
  if (v_.size() < 2) throw InvalidDimension("state dimension must be >= 2");
}

FockState FockState::basis(Index dim, Index n) {
  if (dim < 2) throw InvalidDimension("state dimension must be >= 2");
  if (n < 0 || n >= dim) throw InvalidDimension("basis index outside truncation");
  Vector v = Vector::Zero(dim);
  v(n) = 1.0;
  return FockState(std::move(v));
}

FockState operator*(const FockOperator& a, const FockState& v) {
  require_same(a.dim(), v.dim(), "operator on state");
  return FockState(a.matrix() * v.amplitudes());
}

FockState operator+(const FockState& a, const FockState& b) {
  require_same(a.dim(), b.dim(), "state sum");
  return FockState(a.amplitudes() + b.amplitudes());
}

FockState operator-(const FockState& a, const FockState& b) {
  require_same(a.dim(), b.dim(), "state difference");
  return FockState(a.amplitudes() - b.amplitudes());
}

FockState operator*(Complex c, const FockState& v) { return FockState(c * v.amplitudes()); }

AntilinearOperator::AntilinearOperator(FockOperator linear_part) : m_(std::move(linear_part)) {
  Eigen::FullPivLU<Matrix> lu(m_.matrix());
  lu.setThreshold(1e-13);
  if (!lu.isInvertible()) throw NumericError("antilinear operator must be invertible");
}

AntilinearOperator AntilinearOperator::conjugation(Index dim) {
  return AntilinearOperator(FockOperator::identity(dim));
}

// (M K)^-1 = K M^-1 = conj(M^-1) K
AntilinearOperator AntilinearOperator::inverse() const { return AntilinearOperator(m_.inverse().conj()); }

FockState apply_antilinear(const AntilinearOperator& k, const FockState& v) {
  require_same(k.dim(), v.dim(), "antilinear on state");
  return FockState(k.linear_part().matrix() * v.amplitudes().conjugate());
}

FockState operator*(const AntilinearOperator& k, const FockState& v) { return apply_antilinear(k, v); }

FockOperator operator*(const AntilinearOperator& k1, const AntilinearOperator& k2) {
  require_same(k1.dim(), k2.dim(), "antilinear composition");
  return FockOperator(k1.linear_part().matrix() * k2.linear_part().matrix().conjugate());
}

AntilinearOperator operator*(const FockOperator& a, const AntilinearOperator& k) {
  return AntilinearOperator(a * k.linear_part());
}

AntilinearOperator operator*(const AntilinearOperator& k, const FockOperator& a) {
  return AntilinearOperator(k.linear_part() * a.conj());
}

Ladder ladder_ops(Index dim) {
  if (dim < 2) throw InvalidDimension("truncation dimension must be >= 2");
  Matrix a = Matrix::Zero(dim, dim);
  for (Index n = 1; n < dim; ++n) a(n - 1, n) = std::sqrt(double(n));
  Matrix ad = a.adjoint();
  return {FockOperator(std::move(a)), FockOperator(std::move(ad))};
}

FockOperator number_op(Index dim) {
  if (dim < 2) throw InvalidDimension("truncation dimension must be >= 2");
  Vector d(dim);
  for (Index n = 0; n < dim; ++n) d(n) = double(n);
  return FockOperator::diagonal(d);
}

FockOperator shifted_number_op(Index dim) {
  if (dim < 2) throw InvalidDimension("truncation dimension must be >= 2");
  Vector d(dim);
  for (Index n = 0; n < dim; ++n) d(n) = double(n) + 0.5;
  return FockOperator::diagonal(d);
}

FockOperator parity(Index dim) {
  if (dim < 2) throw InvalidDimension("truncation dimension must be >= 2");
  Vector d(dim);
  for (Index n = 0; n < dim; ++n) d(n) = (n % 2 == 0) ? 1.0 : -1.0;
  return FockOperator::diagonal(d);
}

AntilinearOperator parity_time(Index dim) { return AntilinearOperator(parity(dim)); }

FockOperator matrix_exp(const FockOperator& a) {
  if (!a.matrix().allFinite()) throw NumericError("matrix_exp: non-finite input");
  Matrix e = a.matrix().exp();
  if (!e.allFinite()) throw NumericError("matrix_exp: overflow");
  return FockOperator(std::move(e));
}

FockOperator hermitian_sqrt(const FockOperator& a, double tol) {
  const Matrix& m = a.matrix();
  double scale = m.norm();
  if (!m.allFinite() || scale == 0.0) throw MetricViolation("hermitian_sqrt: zero or non-finite input");
  if ((m - m.adjoint()).norm() > 1e-12 * scale) throw MetricViolation("hermitian_sqrt: input not Hermitian");
  Eigen::SelfAdjointEigenSolver<Matrix> es(m);
  const Eigen::VectorXd& ev = es.eigenvalues();
  if (ev.minCoeff() <= tol * ev.cwiseAbs().maxCoeff())
    throw MetricViolation("hermitian_sqrt: input not positive definite");
  Matrix v = es.eigenvectors();
  Matrix b = v * ev.cwiseSqrt().cast<Complex>().asDiagonal() * v.adjoint();
  b = 0.5 * (b + b.adjoint()).eval();
  return FockOperator(std::move(b));
}

FockOperator crop(const FockOperator& a, Index dim) {
  if (dim > a.dim()) throw DimensionMismatch("crop: target larger than source");
  return FockOperator(a.matrix().topLeftCorner(dim, dim));
}

FockState crop(const FockState& v, Index dim) {
  if (dim > v.dim()) throw DimensionMismatch("crop: target larger than source");
  return FockState(v.amplitudes().head(dim));
}

Index trusted_levels(Index dim) { return dim - dim / 4; }

double block_residual(const Matrix& r, const Matrix& ref, std::optional<Index> levels) {
  Index k = levels.value_or(r.rows());
  k = std::min({k, r.rows(), ref.rows()});
  double den = ref.topLeftCorner(k, k).norm();
  double num = r.topLeftCorner(k, k).norm();
  return den > 0.0 ? num / den : num;
}

void QuadraticOperator::apply(const Vector& in, Vector& out) const {
  const Index dim = in.size();
  const PairFactors& f = pair_factors(dim);
  out.resize(dim);
  for (Index n = 0; n < dim; ++n) {
    Complex s = (shift_ + number_ * (double(n) + 0.5)) * in(n);
    if (n >= 2) s += raise_ * f.up[n] * in(n - 2);
    if (n + 2 < dim) s += lower_ * f.down[n] * in(n + 2);
    out(n) = s;
  }
}

Vector QuadraticOperator::operator*(const Vector& v) const {
  Vector out;
  apply(v, out);
  return out;
}

FockOperator QuadraticOperator::dense(Index dim) const {
  if (dim < 2) throw InvalidDimension("truncation dimension must be >= 2");
  const PairFactors& f = pair_factors(dim);
  Matrix m = Matrix::Zero(dim, dim);
  for (Index n = 0; n < dim; ++n) {
    m(n, n) = shift_ + number_ * (double(n) + 0.5);
    if (n >= 2) m(n, n - 2) = raise_ * f.up[n];
    if (n + 2 < dim) m(n, n + 2) = lower_ * f.down[n];
  }
  return FockOperator(std::move(m));
}

double QuadraticOperator::norm_bound(Index dim) const {
  double d = double(dim);
  return std::abs(shift_) + std::abs(number_) * d + (std::abs(raise_) + std::abs(lower_)) * d;
}

QuadraticOperator QuadraticOperator::adjoint() const {
  return {std::conj(number_), std::conj(lower_), std::conj(raise_), std::conj(shift_)};
}

QuadraticOperator QuadraticOperator::scaled(Complex c) const {
  return {c * number_, c * raise_, c * lower_, c * shift_};
}

QuadraticOperator QuadraticOperator::plus(const QuadraticOperator& o) const {
  return {number_ + o.number_, raise_ + o.raise_, lower_ + o.lower_, shift_ + o.shift_};
}

FockOperator truncated_exp(const QuadraticOperator& q, Index dim, Index pad) {
  if (pad < 1) throw InvalidDimension("padding factor must be >= 1");
  return crop(matrix_exp(q.dense(dim * pad)), dim);
}

}  // namespace ptdyn
