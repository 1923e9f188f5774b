#pragma once

// Independent reference values for the tests. Nothing here calls into the
// library's numerical code; each helper uses a different route to the same
// number (closed forms, plain Eigen, long double sums).

#include <gtest/gtest.h>

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <complex>
#include <functional>
#include <vector>

namespace oracle {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;

// [n]_q by the geometric closed form, with the q = 1 limit.
inline Complex qnum(int n, Complex q) {
  if (std::abs(q - 1.0) < 1e-14) return Complex(n, 0.0);
  return (1.0 - std::pow(q, n)) / (1.0 - q);
}

// q^n by repeated squaring so it does not share std::pow with qnum.
inline Complex qpow(Complex q, int n) {
  Complex out(1.0, 0.0), base = q;
  for (unsigned k = static_cast<unsigned>(n); k; k >>= 1) {
    if (k & 1u) out *= base;
    base *= base;
  }
  return out;
}

// sum_{n < terms} x^n / n! in long double.
inline long double exp_partial(long double x, int terms) {
  long double term = 1.0L, sum = 0.0L;
  for (int n = 0; n < terms; ++n) {
    sum += term;
    term *= x / (n + 1);
  }
  return sum;
}

// eps_0 = 0, eps_n = f(eps_{n-1}), using a plain C++ callable.
inline std::vector<double> levels(const std::function<double(double)>& f, int count) {
  std::vector<double> eps{0.0};
  while (static_cast<int>(eps.size()) < count) eps.push_back(f(eps.back()));
  return eps;
}

// Eigenvalues by Eigen's solver, sorted by real then imaginary part.
inline std::vector<Complex> eigenvalues(const Matrix& a) {
  Eigen::ComplexEigenSolver<Matrix> s(a, false);
  std::vector<Complex> v(s.eigenvalues().data(), s.eigenvalues().data() + s.eigenvalues().size());
  std::sort(v.begin(), v.end(), [](Complex x, Complex y) {
    return x.real() != y.real() ? x.real() < y.real() : x.imag() < y.imag();
  });
  return v;
}

// Smallest distance from z to any value in the list.
inline double nearest(Complex z, const std::vector<Complex>& values) {
  double best = HUGE_VAL;
  for (Complex v : values) best = std::min(best, std::abs(v - z));
  return best;
}

inline Matrix commutator(const Matrix& a, const Matrix& b) { return a * b - b * a; }

// Truncated canonical lowering matrix: a e_n = sqrt(n) e_{n-1}.
inline Matrix boson_lowering(int dim) {
  Matrix a = Matrix::Zero(dim, dim);
  for (int n = 1; n < dim; ++n) a(n - 1, n) = std::sqrt(static_cast<double>(n));
  return a;
}

// Random complex matrix from a fixed LCG, for perturbation tests.
inline Matrix lcg_matrix(int rows, int cols, unsigned seed) {
  unsigned long long s = seed * 6364136223846793005ULL + 1442695040888963407ULL;
  const auto next = [&s]() {
    s = s * 6364136223846793005ULL + 1442695040888963407ULL;
    return static_cast<double>(s >> 11) * 0x1.0p-53 * 2.0 - 1.0;
  };
  Matrix m(rows, cols);
  for (int j = 0; j < cols; ++j) {
    for (int i = 0; i < rows; ++i) {
      const double re = next();
      m(i, j) = Complex(re, next());
    }
  }
  return m;
}

}  // namespace oracle

#define EXPECT_COMPLEX_NEAR(a, b, tol)                                       \
  do {                                                                       \
    const std::complex<double> ea_ = (a), eb_ = (b);                         \
    EXPECT_LE(std::abs(ea_ - eb_), (tol)) << "lhs " << ea_ << " rhs " << eb_; \
  } while (0)
