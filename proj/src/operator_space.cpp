#include "ladderlab/operator_space.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>
#include <sstream>

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include "ladderlab/errors.hpp"

namespace ladderlab {

namespace {

bool all_finite(const Matrix& m) {
  for (Eigen::Index j = 0; j < m.cols(); ++j) {
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
      if (!std::isfinite(m(i, j).real()) || !std::isfinite(m(i, j).imag())) return false;
    }
  }
  return true;
}

// Standard normals by Box-Muller on the raw engine output. The engine's bit
// stream is fixed by the standard, std::normal_distribution is not, and
// dressings must be reproducible across toolchains.
double unit_open(std::mt19937_64& rng) { return (static_cast<double>(rng() >> 11) + 0.5) * 0x1.0p-53; }

Complex complex_normal(std::mt19937_64& rng) {
  const double r = std::sqrt(-2.0 * std::log(unit_open(rng)));
  const double t = 2.0 * std::numbers::pi * unit_open(rng);
  return {r * std::cos(t), r * std::sin(t)};
}

Matrix random_unitary(int dim, std::mt19937_64& rng) {
  Matrix g(dim, dim);
  for (int j = 0; j < dim; ++j) {
    for (int i = 0; i < dim; ++i) g(i, j) = complex_normal(rng);
  }
  Eigen::HouseholderQR<Matrix> qr(g);
  Matrix q = qr.householderQ();
  // Fix column phases with the diagonal of R so the distribution is Haar.
  const Matrix r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (int j = 0; j < dim; ++j) {
    const double mag = std::abs(r(j, j));
    if (mag > 0.0) q.col(j) *= r(j, j) / mag;
  }
  return q;
}

}  // namespace

DressedSpace::DressedSpace(Matrix dressing, Matrix dressing_inv, double cond_bound, bool identity)
    : dressing_(std::move(dressing)),
      dressing_inv_(std::move(dressing_inv)),
      cond_bound_(cond_bound),
      identity_(identity) {}

Vector DressedSpace::phi_basis(int n) const {
  if (n < 0 || n >= dim()) throw DomainError("phi_basis: index out of range");
  return dressing_.col(n);
}

Vector DressedSpace::psi_basis(int n) const {
  if (n < 0 || n >= dim()) throw DomainError("psi_basis: index out of range");
  // Column n of V^{-dagger} is the conjugate of row n of V^{-1}.
  return dressing_inv_.row(n).adjoint();
}

Matrix DressedSpace::to_ambient(const Matrix& coords) const {
  if (identity_) return coords;
  return dressing_ * coords * dressing_inv_;
}

Matrix DressedSpace::phi_coordinates(const Matrix& ambient) const {
  if (identity_) return ambient;
  return dressing_inv_ * ambient * dressing_;
}

Matrix DressedSpace::psi_coordinates(const Matrix& ambient) const {
  if (identity_) return ambient;
  return dressing_.adjoint() * ambient * dressing_inv_.adjoint();
}

double condition_number(const Matrix& m) {
  Eigen::JacobiSVD<Matrix> svd(m);
  const auto& s = svd.singularValues();
  const double smax = s(0);
  const double smin = s(s.size() - 1);
  if (smin <= 0.0) return std::numeric_limits<double>::infinity();
  return smax / smin;
}

SpacePtr make_space(int dim, const DressingSpec& spec) {
  if (dim < 4) throw DomainError("make_space: dim must be >= 4");

  if (std::holds_alternative<IdentityDressing>(spec)) {
    return std::make_shared<const DressedSpace>(Matrix::Identity(dim, dim),
                                                Matrix::Identity(dim, dim), 1.0, true);
  }

  Matrix v;
  if (const auto* diag = std::get_if<DiagonalDressing>(&spec)) {
    if (static_cast<int>(diag->scales.size()) != dim) {
      throw DomainError("make_space: diagonal dressing needs exactly dim scales");
    }
    v = Matrix::Zero(dim, dim);
    for (int i = 0; i < dim; ++i) {
      if (diag->scales[i] == Complex(0.0, 0.0)) {
        std::ostringstream msg;
        msg << "make_space: diagonal scale " << i << " is zero (singular dressing)";
        throw DomainError(msg.str());
      }
      v(i, i) = diag->scales[i];
    }
  } else {
    const auto& rnd = std::get<RandomDressing>(spec);
    if (!(rnd.target_cond >= 1.0 && rnd.target_cond <= kMaxDressingCond)) {
      throw DomainError("make_space: target_cond must lie in [1, 1e6]");
    }
    std::mt19937_64 rng(rnd.seed);
    const Matrix u = random_unitary(dim, rng);
    const Matrix w = random_unitary(dim, rng);
    // Log-spaced singular values in (1/target, 1]; the top one is exactly 1.
    const double span = std::log(rnd.target_cond) * (1.0 - 1e-9);
    Eigen::VectorXd sigma(dim);
    for (int k = 0; k < dim; ++k) sigma(k) = std::exp(-span * k / (dim - 1));
    v = u * sigma.cast<Complex>().asDiagonal() * w.adjoint();
  }

  if (!all_finite(v)) throw DomainError("make_space: dressing has non-finite entries");
  const double cond = condition_number(v);
  if (!(cond <= kMaxDressingCond)) {
    std::ostringstream msg;
    msg << "make_space: dressing rejected, measured condition number " << cond;
    throw DomainError(msg.str());
  }
  Matrix v_inv = v.fullPivLu().inverse();
  const double defect =
      (v * v_inv - Matrix::Identity(dim, dim)).cwiseAbs().maxCoeff();
  if (defect > 1e-10 * cond) {
    std::ostringstream msg;
    msg << "make_space: inverse defect " << defect << " exceeds 1e-10 * cond (" << cond << ")";
    throw NumericalError(msg.str());
  }
  return std::make_shared<const DressedSpace>(std::move(v), std::move(v_inv), cond, false);
}

Operator::Operator(SpacePtr space, Matrix ambient) : space_(std::move(space)), mat_(std::move(ambient)) {
  if (!space_) throw DomainError("Operator: null space");
  if (mat_.rows() != space_->dim() || mat_.cols() != space_->dim()) {
    throw DomainError("Operator: matrix dimensions do not match the space");
  }
  if (!all_finite(mat_)) throw DomainError("Operator: non-finite entry");
}

Operator Operator::from_coordinates(const SpacePtr& space, const Matrix& coords) {
  return Operator(space, space->to_ambient(coords));
}

Operator Operator::identity(const SpacePtr& space) {
  return Operator(space, Matrix::Identity(space->dim(), space->dim()));
}

Operator Operator::zero(const SpacePtr& space) {
  return Operator(space, Matrix::Zero(space->dim(), space->dim()));
}

bool same_space(const Operator& a, const Operator& b) {
  if (a.space() == b.space()) return true;
  return a.dim() == b.dim() && a.space()->dressing() == b.space()->dressing();
}

namespace {
void require_same_space(const Operator& a, const Operator& b, const char* what) {
  if (!same_space(a, b)) throw DomainError(std::string(what) + ": operators live on different spaces");
}
}  // namespace

Operator Operator::operator+(const Operator& other) const {
  require_same_space(*this, other, "operator+");
  return Operator(space_, mat_ + other.mat_);
}

Operator Operator::operator-(const Operator& other) const {
  require_same_space(*this, other, "operator-");
  return Operator(space_, mat_ - other.mat_);
}

Operator Operator::operator*(const Operator& other) const {
  require_same_space(*this, other, "operator*");
  return Operator(space_, mat_ * other.mat_);
}

Operator Operator::operator-() const { return Operator(space_, -mat_); }

Operator Operator::scaled(Complex c) const { return Operator(space_, c * mat_); }

Operator adjoint(const Operator& a) { return Operator(a.space(), a.mat().adjoint()); }

Operator transpose(const Operator& a) { return Operator(a.space(), a.mat().transpose()); }

Operator commutator(const Operator& a, const Operator& b) {
  require_same_space(a, b, "commutator");
  return Operator(a.space(), a.mat() * b.mat() - b.mat() * a.mat());
}

Operator qmutator(const Operator& a, const Operator& b, Complex q) {
  require_same_space(a, b, "qmutator");
  const Matrix ba = b.mat() * a.mat();
  return Operator(a.space(), a.mat() * b.mat() - q * ba);
}

Operator power(const Operator& a, int n) {
  if (n < 0) throw DomainError("power: negative exponent");
  Matrix result = Matrix::Identity(a.dim(), a.dim());
  for (int k = 0; k < n; ++k) result = result * a.mat();
  return Operator(a.space(), std::move(result));
}

double effective_threshold(double tol, double cond, double scale) {
  return tol * cond * std::max(1.0, scale);
}

Comparison op_approx_equal(const Operator& a, const Operator& b, int window, double tol,
                           Basis basis, std::optional<double> scale) {
  require_same_space(a, b, "op_approx_equal");
  const auto& space = *a.space();
  if (window < 0 || window > space.window()) {
    throw DomainError("op_approx_equal: window exceeds the space window");
  }
  const Matrix diff = a.mat() - b.mat();
  const Matrix coords =
      basis == Basis::phi ? space.phi_coordinates(diff) : space.psi_coordinates(diff);
  Comparison out;
  out.window = window;
  out.max_deviation = window == 0 ? 0.0 : coords.leftCols(window).cwiseAbs().maxCoeff();
  const double s = scale.value_or(std::max(a.norm(), b.norm()));
  out.threshold = effective_threshold(tol, space.cond_bound(), s);
  out.equal = out.max_deviation <= out.threshold;
  return out;
}

Spectrum eig(const Matrix& a) {
  if (a.rows() != a.cols()) throw DomainError("eig: matrix must be square");
  Eigen::ComplexEigenSolver<Matrix> solver(a, true);
  if (solver.info() != Eigen::Success) {
    throw NumericalError("eig: eigensolver did not converge");
  }
  const auto n = a.rows();
  std::vector<Eigen::Index> order(n);
  for (Eigen::Index i = 0; i < n; ++i) order[i] = i;
  const auto& vals = solver.eigenvalues();
  std::sort(order.begin(), order.end(), [&](Eigen::Index x, Eigen::Index y) {
    if (vals(x).real() != vals(y).real()) return vals(x).real() < vals(y).real();
    return vals(x).imag() < vals(y).imag();
  });

  Spectrum out;
  out.vectors.resize(n, n);
  const double anorm = a.norm();
  for (Eigen::Index k = 0; k < n; ++k) {
    const auto idx = order[k];
    out.values.push_back(vals(idx));
    out.vectors.col(k) = solver.eigenvectors().col(idx);
    const double res = (a * out.vectors.col(k) - vals(idx) * out.vectors.col(k)).norm();
    out.max_residual = std::max(out.max_residual, anorm > 0.0 ? res / anorm : res);
  }
  if (!std::isfinite(out.max_residual) || out.max_residual > 1e-8) {
    std::ostringstream msg;
    msg << "eig: eigenpair residual " << out.max_residual << " exceeds 1e-8 |A|";
    throw NumericalError(msg.str());
  }
  return out;
}

Spectrum eig(const Operator& a) { return eig(a.mat()); }

}  // namespace ladderlab
