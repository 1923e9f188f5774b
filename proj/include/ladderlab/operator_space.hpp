#pragma once

// Finite stage for the ladder computations: a truncated Fock space whose
// phi-basis is V e_n and whose biorthogonal psi-basis is V^{-dagger} e_n.
// Operators are stored in ambient (orthonormal) coordinates so the adjoint is
// the plain conjugate transpose.

#include <complex>
#include <cstdint>
#include <memory>
#include <optional>
#include <variant>
#include <vector>

#include <Eigen/Dense>

namespace ladderlab {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;

struct IdentityDressing {};
struct DiagonalDressing {
  std::vector<Complex> scales;
};
struct RandomDressing {
  std::uint64_t seed = 0;
  double target_cond = 1.0;
};
using DressingSpec = std::variant<IdentityDressing, DiagonalDressing, RandomDressing>;

// Largest condition number accepted for a dressing map.
inline constexpr double kMaxDressingCond = 1e6;

class DressedSpace {
 public:
  DressedSpace(Matrix dressing, Matrix dressing_inv, double cond_bound, bool identity);

  int dim() const { return static_cast<int>(dressing_.rows()); }
  // Indices [0, window) are free of truncation leakage for one raise + one lower.
  int window() const { return dim() - 2; }
  double cond_bound() const { return cond_bound_; }
  bool is_identity() const { return identity_; }

  const Matrix& dressing() const { return dressing_; }
  const Matrix& dressing_inv() const { return dressing_inv_; }

  Vector phi_basis(int n) const;
  Vector psi_basis(int n) const;

  // V M V^{-1}
  Matrix to_ambient(const Matrix& coords) const;
  // V^{-1} A V : action on phi-basis vectors expressed in the phi-basis.
  Matrix phi_coordinates(const Matrix& ambient) const;
  // V^dagger A V^{-dagger} : action on psi-basis vectors expressed in the psi-basis.
  Matrix psi_coordinates(const Matrix& ambient) const;

 private:
  Matrix dressing_;
  Matrix dressing_inv_;
  double cond_bound_;
  bool identity_;
};

using SpacePtr = std::shared_ptr<const DressedSpace>;

// Throws DomainError on bad arguments or a dressing with cond > kMaxDressingCond.
SpacePtr make_space(int dim, const DressingSpec& spec);

// 2-norm condition number via singular values.
double condition_number(const Matrix& m);

class Operator {
 public:
  Operator(SpacePtr space, Matrix ambient);

  static Operator from_coordinates(const SpacePtr& space, const Matrix& coords);
  static Operator identity(const SpacePtr& space);
  static Operator zero(const SpacePtr& space);

  const Matrix& mat() const { return mat_; }
  const SpacePtr& space() const { return space_; }
  int dim() const { return static_cast<int>(mat_.rows()); }
  double norm() const { return mat_.norm(); }

  Vector apply(const Vector& v) const { return mat_ * v; }

  Operator operator+(const Operator& other) const;
  Operator operator-(const Operator& other) const;
  Operator operator*(const Operator& other) const;
  Operator operator-() const;
  Operator scaled(Complex c) const;

 private:
  SpacePtr space_;
  Matrix mat_;
};

inline Operator operator*(Complex c, const Operator& a) { return a.scaled(c); }

bool same_space(const Operator& a, const Operator& b);

Operator adjoint(const Operator& a);
Operator transpose(const Operator& a);
Operator commutator(const Operator& a, const Operator& b);
// AB - q BA
Operator qmutator(const Operator& a, const Operator& b, Complex q);
Operator power(const Operator& a, int n);

enum class Basis { phi, psi };

struct Comparison {
  bool equal = false;
  double max_deviation = 0.0;
  double threshold = 0.0;
  int window = 0;
};

// Threshold used throughout: tol * cond * max(1, scale).
double effective_threshold(double tol, double cond, double scale);

// Compares the action of a and b on the first `window` vectors of the chosen
// basis (columns of the phi- or psi-coordinate matrix of a - b). Without an
// explicit scale the threshold uses max(|a|, |b|).
Comparison op_approx_equal(const Operator& a, const Operator& b, int window, double tol,
                           Basis basis = Basis::phi, std::optional<double> scale = std::nullopt);

struct Spectrum {
  std::vector<Complex> values;  // sorted by real part, then imaginary part
  Matrix vectors;               // column k pairs with values[k]
  double max_residual = 0.0;    // max_k |A v_k - lambda_k v_k| / |A|
};

// Dense complex eigensolver. Throws NumericalError on non-convergence or when
// an eigenpair residual exceeds 1e-8 |A|.
Spectrum eig(const Operator& a);
Spectrum eig(const Matrix& a);

}  // namespace ladderlab
