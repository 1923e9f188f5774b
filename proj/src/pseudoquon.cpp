#include "ladderlab/pseudoquon.hpp"

#include <cmath>
#include <sstream>

#include "ladderlab/errors.hpp"

namespace ladderlab::quon {

namespace {

const Complex kI(0.0, 1.0);

void require_not_minus_one(Complex q, const char* where) {
  if (std::abs(q + 1.0) < 1e-12) {
    throw DomainError(std::string(where) + ": q = -1 is excluded");
  }
}

}  // namespace

Complex qnum(int n, Complex q) {
  if (n < 0) throw DomainError("qnum: n must be nonnegative");
  // Horner form of 1 + q + ... + q^{n-1}; avoids the 0/0 of the closed form near q = 1.
  Complex s(0.0, 0.0);
  for (int k = 0; k < n; ++k) s = s * q + 1.0;
  return s;
}

Complex factorial_from_zero(const std::vector<Complex>& x, int n) {
  if (n >= static_cast<int>(x.size())) throw DomainError("factorial_from_zero: index beyond sequence");
  Complex p(1.0, 0.0);
  for (int k = 0; k <= n; ++k) p *= x[k];
  return p;
}

Complex factorial_from_one(const std::vector<Complex>& x, int n) {
  if (n >= static_cast<int>(x.size())) throw DomainError("factorial_from_one: index beyond sequence");
  Complex p(1.0, 0.0);
  for (int k = 1; k <= n; ++k) p *= x[k];
  return p;
}

bool near_root_of_unity(Complex q, int k_max) {
  Complex qk(1.0, 0.0);
  for (int k = 1; k <= k_max; ++k) {
    qk *= q;
    if (std::abs(qk - 1.0) < 1e-8) return true;
  }
  return false;
}

Complex QuonParams::beta(int n) const {
  return std::conj(1.0 / (alpha.at(n) * qnum(n, q)));
}

QuonParams make_params(Complex q, int dim) {
  std::vector<Complex> alpha(dim, Complex(1.0, 0.0));
  for (int n = 1; n < dim; ++n) {
    const double m = std::abs(qnum(n, q));
    if (m == 0.0) {
      std::ostringstream msg;
      msg << "make_params: [" << n << "]_q vanishes";
      throw DomainError(msg.str());
    }
    alpha[n] = 1.0 / std::sqrt(m);
  }
  return make_params(q, dim, std::move(alpha));
}

QuonParams make_params(Complex q, int dim, std::vector<Complex> alpha) {
  require_not_minus_one(q, "make_params");
  if (dim < 4) throw DomainError("make_params: dim must be at least 4");
  if (static_cast<int>(alpha.size()) != dim) {
    throw DomainError("make_params: alpha needs one entry per basis index");
  }
  for (int n = 1; n < dim; ++n) {
    if (alpha[n] == Complex(0.0, 0.0)) {
      std::ostringstream msg;
      msg << "make_params: alpha_" << n << " = 0";
      throw DomainError(msg.str());
    }
    if (qnum(n, q) == Complex(0.0, 0.0)) {
      std::ostringstream msg;
      msg << "make_params: [" << n << "]_q vanishes";
      throw DomainError(msg.str());
    }
  }
  QuonParams p;
  p.q = q;
  p.alpha = std::move(alpha);
  p.dim = dim;
  return p;
}

QuonPair build_quon_pair(const QuonParams& params, const SpacePtr& space) {
  const int dim = space->dim();
  if (dim != params.dim) throw DomainError("build_quon_pair: space and params disagree on dim");
  Matrix a = Matrix::Zero(dim, dim);
  Matrix b = Matrix::Zero(dim, dim);
  for (int n = 0; n + 1 < dim; ++n) b(n + 1, n) = 1.0 / params.alpha[n + 1];
  for (int n = 1; n < dim; ++n) a(n - 1, n) = params.alpha[n] * qnum(n, params.q);
  Operator A = Operator::from_coordinates(space, a);
  Operator B = Operator::from_coordinates(space, b);
  Operator N = B * A;
  return {std::move(A), std::move(B), std::move(N)};
}

ladder::LadderTriple quon_triple(const QuonPair& pair, Complex q) {
  return ladder::LadderTriple((q + 1.0) * pair.N, pair.a, pair.b, q + 1.0);
}

Oscillator build_oscillator(const QuonPair& pair, const OscParams& osc, Complex q, double tol) {
  require_not_minus_one(q, "build_oscillator");
  if (osc.alpha == Complex(0.0, 0.0) || osc.beta == Complex(0.0, 0.0)) {
    throw DomainError("build_oscillator: alpha and beta must be nonzero");
  }
  const auto& space = pair.a.space();
  const int window = space->window();
  const Complex al = osc.alpha, be = osc.beta;
  const Operator I = Operator::identity(space);

  Operator x = al * (pair.b + pair.a);
  Operator p = (kI * be) * (pair.b - pair.a);
  const Operator xs = (1.0 / al) * x;
  const Operator ps = (1.0 / be) * p;
  Operator H = 0.5 * (ps * ps + xs * xs);
  Operator h = H - I;

  Oscillator out{x, p, H, h, {}, {}, {}};
  out.h_closed_form = op_approx_equal(H, (q + 1.0) * pair.N + I, window, tol);
  const Operator xp = commutator(x, p);
  const Operator rhs = (4.0 * kI * al * be / (q + 1.0)) * I +
                       (kI * (q - 1.0) / (al * be * (q + 1.0))) * ((be * be) * (x * x) + (al * al) * (p * p));
  out.xp_deformed = op_approx_equal(xp, rhs, window, tol);
  out.xp_canonical = op_approx_equal(xp, kI * I, window, tol);
  return out;
}

std::vector<Complex> oscillator_levels(Complex q, int count) {
  std::vector<Complex> out;
  Complex qn(1.0, 0.0);
  for (int n = 0; n < count; ++n) {
    out.push_back(2.0 * qnum(n, q) + qn);
    qn *= q;
  }
  return out;
}

bool QuonFamilies::certified(double biorth_tol) const {
  using ladder::all_ok;
  return biorth_dev <= biorth_tol && all_ok(number_phi) && all_ok(number_psi) &&
         all_ok(lower_phi) && all_ok(raise_phi) && all_ok(lower_psi) && all_ok(raise_psi);
}

QuonFamilies quon_families(const QuonParams& params, const QuonPair& pair, int n_max, double tol) {
  const auto& space = *pair.a.space();
  if (n_max < 0 || n_max > space.window()) {
    std::ostringstream msg;
    msg << "quon_families: truncation reached before n_max = " << n_max << " (window "
        << space.window() << ")";
    throw DomainError(msg.str());
  }
  const double cond = space.cond_bound();
  const Operator ad = adjoint(pair.a), bd = adjoint(pair.b), Nd = adjoint(pair.N);
  const double na = pair.a.norm(), nb = pair.b.norm(), nN = pair.N.norm();

  QuonFamilies f;
  f.n_max = n_max;
  f.tol = tol;
  f.Phi.push_back(space.phi_basis(0));
  f.Psi.push_back(space.psi_basis(0));
  // One extra member so the raising checks reach n_max.
  for (int n = 1; n <= n_max + 1; ++n) {
    f.Phi.push_back(params.alpha[n] * pair.b.apply(f.Phi.back()));
    f.Psi.push_back(params.beta(n) * ad.apply(f.Psi.back()));
  }
  for (int n = 0; n <= n_max + 1; ++n) f.qn.push_back(qnum(n, params.q));

  using ladder::vector_check;
  for (int n = 0; n <= n_max; ++n) {
    const Vector& P = f.Phi[n];
    const Vector& Q = f.Psi[n];
    const Complex qn = f.qn[n];
    f.number_phi.push_back(vector_check(n, pair.N.apply(P), qn * P, tol, cond, nN, P.norm()));
    f.number_psi.push_back(vector_check(n, Nd.apply(Q), std::conj(qn) * Q, tol, cond, nN, Q.norm()));
    const Vector zero = Vector::Zero(space.dim());
    f.lower_phi.push_back(vector_check(
        n, pair.a.apply(P), n == 0 ? zero : Vector(params.alpha[n] * qn * f.Phi[n - 1]), tol, cond,
        na, P.norm()));
    f.lower_psi.push_back(vector_check(
        n, bd.apply(Q), n == 0 ? zero : Vector(params.beta(n) * std::conj(qn) * f.Psi[n - 1]), tol,
        cond, nb, Q.norm()));
    f.raise_phi.push_back(
        vector_check(n, pair.b.apply(P), f.Phi[n + 1] / params.alpha[n + 1], tol, cond, nb, P.norm()));
    f.raise_psi.push_back(
        vector_check(n, ad.apply(Q), f.Psi[n + 1] / params.beta(n + 1), tol, cond, na, Q.norm()));
  }
  f.Phi.pop_back();
  f.Psi.pop_back();
  f.qn.pop_back();

  for (int n = 0; n <= n_max; ++n) {
    for (int m = 0; m <= n_max; ++m) {
      const Complex ip = f.Psi[n].dot(f.Phi[m]);
      f.biorth_dev = std::max(f.biorth_dev, std::abs(ip - (n == m ? 1.0 : 0.0)));
    }
  }
  return f;
}

double normalization_map_deviation(const QuonFamilies& fam, const QuonParams& params,
                                   const ladder::EigenFamilyPair& pair) {
  const int count = std::min(static_cast<int>(fam.Phi.size()), pair.size());
  double worst = 0.0;
  for (int n = 0; n < count; ++n) {
    const Complex an = factorial_from_one(params.alpha, n);
    worst = std::max(worst, (fam.Phi[n] - an * pair.phi[n]).norm() / fam.Phi[n].norm());
    worst = std::max(worst, (fam.Psi[n] - pair.psi[n] / std::conj(an)).norm() / fam.Psi[n].norm());
  }
  return worst;
}

Json to_json(const QuonFamilies& fam) {
  Json j;
  j["n_max"] = fam.n_max;
  j["tolerance"] = fam.tol;
  j["qn"] = complex_list_to_json(fam.qn);
  j["biorth_dev"] = fam.biorth_dev;
  Json res;
  res["N_Phi"] = ladder::to_json(fam.number_phi);
  res["Ndag_Psi"] = ladder::to_json(fam.number_psi);
  res["a_Phi"] = ladder::to_json(fam.lower_phi);
  res["b_Phi"] = ladder::to_json(fam.raise_phi);
  res["bdag_Psi"] = ladder::to_json(fam.lower_psi);
  res["adag_Psi"] = ladder::to_json(fam.raise_psi);
  j["residuals"] = std::move(res);
  return j;
}

Json to_json(const Oscillator& osc) {
  Json j;
  j["H_closed_form"] = ladder::to_json(osc.h_closed_form);
  j["xp_deformed"] = ladder::to_json(osc.xp_deformed);
  j["xp_canonical"] = ladder::to_json(osc.xp_canonical);
  return j;
}

}  // namespace ladderlab::quon
