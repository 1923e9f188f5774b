#include "ladderlab/graphene.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <sstream>

#include "ladderlab/errors.hpp"

namespace ladderlab::graphene {

namespace {

const Complex kI(0.0, 1.0);

Matrix lowering(int ncut) {
  Matrix a = Matrix::Zero(ncut, ncut);
  for (int n = 1; n < ncut; ++n) a(n - 1, n) = std::sqrt(static_cast<double>(n));
  return a;
}

Matrix kron(const Matrix& x, const Matrix& y) {
  Matrix out(x.rows() * y.rows(), x.cols() * y.cols());
  for (Eigen::Index i = 0; i < x.rows(); ++i) {
    for (Eigen::Index j = 0; j < x.cols(); ++j) {
      out.block(i * y.rows(), j * y.cols(), y.rows(), y.cols()) = x(i, j) * y;
    }
  }
  return out;
}

Vector basis_vector(int size, int index) {
  Vector v = Vector::Zero(size);
  v(index) = 1.0;
  return v;
}

}  // namespace

void validate(const GrapheneParams& p) {
  if (!(p.vf > 0.0) || !std::isfinite(p.vf)) throw DomainError("graphene: v_F must be positive");
  if (!(p.xi > 0.0) || !std::isfinite(p.xi)) throw DomainError("graphene: xi must be positive");
  if (p.ncut < 2) throw DomainError("graphene: ncut must be at least 2");
}

Modes build_modes(int ncut) {
  if (ncut < 2) throw DomainError("build_modes: ncut must be at least 2");
  const auto space = make_space(ncut * ncut, IdentityDressing{});
  const Matrix a = lowering(ncut);
  const Matrix id = Matrix::Identity(ncut, ncut);
  return {ncut, Operator(space, kron(a, id)), Operator(space, kron(id, a))};
}

Comparison interior_deviation(const Matrix& m, int ncut, int blocks, double threshold) {
  Comparison c;
  const int block = ncut * ncut;
  int used = 0;
  for (int b = 0; b < blocks; ++b) {
    for (int n1 = 0; n1 + 1 < ncut; ++n1) {
      for (int n2 = 0; n2 + 1 < ncut; ++n2) {
        const int col = b * block + flat_index(n1, n2, ncut);
        c.max_deviation = std::max(c.max_deviation, m.col(col).cwiseAbs().maxCoeff());
        ++used;
      }
    }
  }
  c.window = used;
  c.threshold = threshold;
  c.equal = c.max_deviation <= threshold;
  return c;
}

ModeChecks check_modes(const Modes& modes, double tol) {
  const int n = modes.ncut;
  const Matrix id = Matrix::Identity(n * n, n * n);
  const auto full = [tol](const Matrix& m) {
    Comparison c;
    c.max_deviation = m.cwiseAbs().maxCoeff();
    c.threshold = tol;
    c.window = static_cast<int>(m.cols());
    c.equal = c.max_deviation <= tol;
    return c;
  };
  ModeChecks mc;
  mc.a1_ccr = interior_deviation(commutator(modes.A1, adjoint(modes.A1)).mat() - id, n, 1, tol);
  mc.a2_ccr = interior_deviation(commutator(modes.A2, adjoint(modes.A2)).mat() - id, n, 1, tol);
  mc.a1_a2 = full(commutator(modes.A1, modes.A2).mat());
  mc.a1_a2dag = full(commutator(modes.A1, adjoint(modes.A2)).mat());
  return mc;
}

HK build_HK(const GrapheneParams& params) {
  validate(params);
  Modes modes = build_modes(params.ncut);
  const int d = params.ncut * params.ncut;
  const Complex c = 2.0 * kI * params.vf / params.xi;
  const Matrix& a2 = modes.A2.mat();
  Matrix h = Matrix::Zero(2 * d, 2 * d);
  h.block(0, d, d, d) = c * a2.adjoint();
  h.block(d, 0, d, d) = -c * a2;
  const auto space = make_space(2 * d, IdentityDressing{});
  HK out{params, modes, Operator(space, h), 0.0, {}};
  out.hermitian_dev = (h - h.adjoint()).cwiseAbs().maxCoeff();

  Matrix a1a1 = Matrix::Zero(2 * d, 2 * d);
  a1a1.block(0, 0, d, d) = modes.A1.mat();
  a1a1.block(d, d, d, d) = modes.A1.mat();
  const Matrix comm = h * a1a1 - a1a1 * h;
  out.a1_commutes = interior_deviation(comm, params.ncut, 2, 1e-12 * std::max(1.0, h.norm()));
  return out;
}

Operator HKprime(const HK& hk) { return transpose(hk.H); }

double analytic_energy(const GrapheneParams& p, int n2, int sign) {
  return sign * 2.0 * p.vf / p.xi * std::sqrt(static_cast<double>(n2));
}

Eigenstructure eigenstructure(const GrapheneParams& params) {
  const HK hk = build_HK(params);
  const int n = params.ncut;
  const int d = n * n;
  const Matrix& h = hk.H.mat();
  const double hnorm = h.norm();

  Eigenstructure es;
  std::vector<Vector> vecs;
  const double s2 = 1.0 / std::sqrt(2.0);
  for (int n1 = 0; n1 < n; ++n1) {
    for (int n2 = 0; n2 < n; ++n2) {
      const int signs[2] = {+1, -1};
      if (n2 == 0) {
        EigenRow row{n1, 0, 0, 0.0, 0.0, 0.0};
        vecs.push_back(basis_vector(2 * d, flat_index(n1, 0, n)));
        es.rows.push_back(row);
        continue;
      }
      for (int sgn : signs) {
        Vector v = Vector::Zero(2 * d);
        v(flat_index(n1, n2, n)) = s2;
        v(d + flat_index(n1, n2 - 1, n)) = -static_cast<double>(sgn) * kI * s2;
        vecs.push_back(v);
        es.rows.push_back({n1, n2, sgn, analytic_energy(params, n2, sgn), 0.0, 0.0});
      }
    }
  }
  for (std::size_t k = 0; k < vecs.size(); ++k) {
    auto& row = es.rows[k];
    row.norm = vecs[k].norm();
    row.residual = (h * vecs[k] - row.E * vecs[k]).norm();
    es.max_residual = std::max(es.max_residual, row.residual);
    es.max_norm_dev = std::max(es.max_norm_dev, std::abs(row.norm - 1.0));
    for (std::size_t m = k + 1; m < vecs.size(); ++m) {
      es.max_overlap = std::max(es.max_overlap, std::abs(vecs[k].dot(vecs[m])));
    }
  }
  es.residual_threshold = 1e-10 * hnorm;

  Eigen::SelfAdjointEigenSolver<Matrix> solver(h, Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) throw NumericalError("eigenstructure: eigensolver failed");
  const auto& ev = solver.eigenvalues();
  es.spectrum.assign(ev.data(), ev.data() + ev.size());
  std::sort(es.spectrum.begin(), es.spectrum.end());
  es.min_eigenvalue = es.spectrum.front();
  es.max_eigenvalue = es.spectrum.back();
  const std::size_t m = es.spectrum.size();
  for (std::size_t k = 0; k < m; ++k) {
    if (std::abs(es.spectrum[k]) <= 1e-9 * hnorm) ++es.zero_multiplicity;
    es.symmetry_dev = std::max(es.symmetry_dev, std::abs(es.spectrum[k] + es.spectrum[m - 1 - k]));
  }
  for (const auto& row : es.rows) {
    if (row.n2 >= n - 1) continue;
    double best = HUGE_VAL;
    for (double s : es.spectrum) best = std::min(best, std::abs(s - row.E));
    es.analytic_match_dev = std::max(es.analytic_match_dev, best);
  }
  es.certified = es.max_residual <= es.residual_threshold && es.max_norm_dev <= 1e-12 &&
                 es.max_overlap <= 1e-12 && es.min_eigenvalue < 0.0 && es.max_eigenvalue > 0.0 &&
                 es.symmetry_dev <= 1e-9 && es.analytic_match_dev <= 1e-9 * std::max(1.0, hnorm);
  return es;
}

double min_shifted_eigenvalue(const GrapheneParams& params, double alpha) {
  const HK hk = build_HK(params);
  const Matrix shifted = hk.H.mat() - alpha * Matrix::Identity(hk.H.dim(), hk.H.dim());
  Eigen::SelfAdjointEigenSolver<Matrix> solver(shifted, Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) throw NumericalError("min_shifted_eigenvalue: eigensolver failed");
  return solver.eigenvalues().minCoeff();
}

Json to_json(const Eigenstructure& e) {
  Json j;
  Json rows = Json::array();
  for (const auto& r : e.rows) {
    Json row;
    row["n1"] = r.n1;
    row["n2"] = r.n2;
    row["sign"] = r.sign > 0 ? "+" : (r.sign < 0 ? "-" : "0");
    row["E"] = r.E;
    row["residual"] = r.residual;
    rows.push_back(std::move(row));
  }
  j["rows"] = std::move(rows);
  j["max_residual"] = e.max_residual;
  j["residual_threshold"] = e.residual_threshold;
  j["max_norm_dev"] = e.max_norm_dev;
  j["max_overlap"] = e.max_overlap;
  j["spectrum"] = real_list_to_json(e.spectrum);
  j["min_eigenvalue"] = e.min_eigenvalue;
  j["max_eigenvalue"] = e.max_eigenvalue;
  j["zero_multiplicity"] = e.zero_multiplicity;
  j["symmetry_dev"] = e.symmetry_dev;
  j["analytic_match_dev"] = e.analytic_match_dev;
  j["certified"] = e.certified;
  return j;
}

}  // namespace ladderlab::graphene
