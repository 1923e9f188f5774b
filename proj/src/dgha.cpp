#include "ladderlab/dgha.hpp"

#include <cmath>
#include <sstream>

#include "ladderlab/errors.hpp"

namespace ladderlab::dgha {

namespace {

constexpr int kSamplePoints = 256;

}  // namespace

DghaModel build_model(const expr::Expr& f, int dim) {
  if (dim < 4) throw DomainError("build_model: dim must be at least 4");
  DghaModel m;
  m.f = f;
  m.dim = dim;
  m.eps.push_back(0.0);
  for (int n = 1; n <= dim; ++n) {
    const double v = expr::eval(f, m.eps.back());
    if (!std::isfinite(v) || std::abs(v) > kLevelCeiling) {
      m.truncated = true;
      break;
    }
    if (!(v > m.eps.back())) {
      std::ostringstream msg;
      msg << "build_model: levels not strictly increasing at n = " << n << " (eps_" << n << " = "
          << v << ", eps_" << n - 1 << " = " << m.eps.back() << ")";
      throw DomainError(msg.str());
    }
    m.eps.push_back(v);
  }
  m.levels_reached = static_cast<int>(m.eps.size());

  auto& cert = m.monotonicity;
  cert.lo = 0.0;
  cert.hi = m.eps.back();
  cert.points = kSamplePoints;
  if (cert.hi <= 0.0) return m;
  const double step = (cert.hi - cert.lo) / (kSamplePoints - 1);
  double prev = expr::eval(f, cert.lo);
  cert.min_slope = HUGE_VAL;
  for (int i = 1; i < kSamplePoints; ++i) {
    const double x = cert.lo + step * i;
    const double y = expr::eval(f, x);
    if (!std::isfinite(y) || !std::isfinite(prev)) {
      std::ostringstream msg;
      msg << "build_model: f is not finite near x = " << x;
      throw DomainError(msg.str());
    }
    cert.min_slope = std::min(cert.min_slope, (y - prev) / step);
    prev = y;
  }
  if (!(cert.min_slope > 0.0)) {
    std::ostringstream msg;
    msg << "build_model: sampled slope of f drops to " << cert.min_slope << " on [" << cert.lo
        << ", " << cert.hi << "]";
    throw DomainError(msg.str());
  }
  cert.ok = true;
  return m;
}

Operator eval_f_on_operator(const expr::Expr& f, const Operator& h, const std::vector<double>& eps) {
  const int dim = h.dim();
  if (static_cast<int>(eps.size()) < dim) throw DomainError("eval_f_on_operator: too few levels");
  Matrix d = Matrix::Zero(dim, dim);
  for (int n = 0; n < dim; ++n) {
    const double v = expr::eval(f, eps[n]);
    if (!std::isfinite(v)) {
      std::ostringstream msg;
      msg << "eval_f_on_operator: f undefined at eps_" << n << " = " << eps[n];
      throw DomainError(msg.str());
    }
    d(n, n) = v;
  }
  return Operator::from_coordinates(h.space(), d);
}

bool DghaSystem::certified(double biorth_tol) const {
  using ladder::all_ok;
  return relations_hold() && adjoint_f.equal && biorth_dev <= biorth_tol && all_ok(h_xi) &&
         all_ok(hdag_eta) && all_ok(b_xi) && all_ok(adag_eta) && all_ok(a_xi) && all_ok(bdag_eta) &&
         all_ok(ba_xi) && all_ok(ab_xi) && all_ok(adbd_eta) && all_ok(bdad_eta);
}

DghaSystem build_dgha_triple(const DghaModel& model, const SpacePtr& space, double tol) {
  if (model.truncated) {
    std::ostringstream msg;
    msg << "build_dgha_triple: model overflowed after " << model.levels_reached << " levels";
    throw DomainError(msg.str());
  }
  const int dim = space->dim();
  if (dim != model.dim) throw DomainError("build_dgha_triple: space and model disagree on dim");
  const auto& eps = model.eps;

  Matrix a = Matrix::Zero(dim, dim), b = Matrix::Zero(dim, dim), h = Matrix::Zero(dim, dim);
  for (int n = 0; n < dim; ++n) h(n, n) = eps[n];
  for (int n = 0; n + 1 < dim; ++n) b(n + 1, n) = std::sqrt(eps[n + 1]);
  for (int n = 1; n < dim; ++n) a(n - 1, n) = std::sqrt(eps[n]);
  Operator A = Operator::from_coordinates(space, a);
  Operator B = Operator::from_coordinates(space, b);
  Operator Hop = Operator::from_coordinates(space, h);
  Operator fh = eval_f_on_operator(model.f, Hop, eps);

  const int window = space->window();
  DghaSystem s{ladder::LadderTriple(Hop, A, B, Complex(1.0, 0.0)), fh, {}, {}, {}, {}, {}, {}, {},
               {}, {}, {}, {}, {}, {}, {}, {}, {}, 0.0};
  s.hb = op_approx_equal(Hop * B, B * fh, window, tol);
  s.ah = op_approx_equal(A * Hop, fh * A, window, tol);
  s.ab_commutator = op_approx_equal(commutator(A, B), fh - Hop, window, tol);

  // f(h^+) by the same spectral rule on the adjoint side: V^{-+} diag(f(eps)) V^+.
  Matrix fd = Matrix::Zero(dim, dim);
  for (int n = 0; n < dim; ++n) fd(n, n) = expr::eval(model.f, eps[n]);
  const Operator f_hdag(space, space->dressing_inv().adjoint() * fd * space->dressing().adjoint());
  s.adjoint_f = op_approx_equal(adjoint(fh), f_hdag, window, tol, Basis::psi);

  const double cond = space->cond_bound();
  const Operator Ad = adjoint(A), Bd = adjoint(B), Hd = adjoint(Hop);
  const Operator BA = B * A, AB = A * B, AdBd = Ad * Bd, BdAd = Bd * Ad;
  const double na = A.norm(), nb = B.norm(), nh = Hop.norm(), nab = na * nb;
  for (int n = 0; n < dim; ++n) {
    s.xi.push_back(space->phi_basis(n));
    s.eta.push_back(space->psi_basis(n));
  }
  using ladder::vector_check;
  const Vector zero = Vector::Zero(dim);
  for (int n = 0; n <= window; ++n) {
    const Vector& x = s.xi[n];
    const Vector& e = s.eta[n];
    const double xn = x.norm(), en = e.norm();
    s.h_xi.push_back(vector_check(n, Hop.apply(x), eps[n] * x, tol, cond, nh, xn));
    s.hdag_eta.push_back(vector_check(n, Hd.apply(e), eps[n] * e, tol, cond, nh, en));
    s.b_xi.push_back(vector_check(n, B.apply(x), std::sqrt(eps[n + 1]) * s.xi[n + 1], tol, cond, nb, xn));
    s.adag_eta.push_back(vector_check(n, Ad.apply(e), std::sqrt(eps[n + 1]) * s.eta[n + 1], tol, cond, na, en));
    s.a_xi.push_back(vector_check(n, A.apply(x), n == 0 ? zero : Vector(std::sqrt(eps[n]) * s.xi[n - 1]),
                                  tol, cond, na, xn));
    s.bdag_eta.push_back(vector_check(n, Bd.apply(e), n == 0 ? zero : Vector(std::sqrt(eps[n]) * s.eta[n - 1]),
                                      tol, cond, nb, en));
    s.ba_xi.push_back(vector_check(n, BA.apply(x), eps[n] * x, tol, cond, nab, xn));
    s.ab_xi.push_back(vector_check(n, AB.apply(x), eps[n + 1] * x, tol, cond, nab, xn));
    s.adbd_eta.push_back(vector_check(n, AdBd.apply(e), eps[n] * e, tol, cond, nab, en));
    s.bdad_eta.push_back(vector_check(n, BdAd.apply(e), eps[n + 1] * e, tol, cond, nab, en));
  }
  for (int n = 0; n <= window; ++n) {
    for (int m = 0; m <= window; ++m) {
      const Complex ip = s.xi[n].dot(s.eta[m]);
      s.biorth_dev = std::max(s.biorth_dev, std::abs(ip - (n == m ? 1.0 : 0.0)));
    }
  }
  return s;
}

bool constant_gap(const DghaModel& model, int count, double rel_tol) {
  if (count < 1 || count + 1 > static_cast<int>(model.eps.size())) {
    throw DomainError("constant_gap: count outside the stored levels");
  }
  const double g0 = model.eps[1] - model.eps[0];
  for (int n = 1; n < count; ++n) {
    const double g = model.eps[n + 1] - model.eps[n];
    if (std::abs(g - g0) > rel_tol * std::max(1.0, std::abs(g0))) return false;
  }
  return true;
}

std::string eps_csv(const DghaModel& model) {
  std::ostringstream out;
  out.precision(17);
  out << "n,eps\n";
  for (std::size_t n = 0; n < model.eps.size(); ++n) out << n << "," << model.eps[n] << "\n";
  return out.str();
}

Json to_json(const DghaModel& model) {
  Json j;
  j["f"] = expr::print(model.f);
  j["dim"] = model.dim;
  j["eps"] = real_list_to_json(model.eps);
  j["truncated"] = model.truncated;
  j["levels_reached"] = model.levels_reached;
  Json c;
  c["interval"] = Json::array({model.monotonicity.lo, model.monotonicity.hi});
  c["points"] = model.monotonicity.points;
  c["min_slope"] = real_to_json(model.monotonicity.min_slope);
  c["ok"] = model.monotonicity.ok;
  j["monotonicity"] = std::move(c);
  return j;
}

Json to_json(const DghaSystem& sys) {
  Json j;
  Json rel;
  rel["hb_eq_b_fh"] = ladder::to_json(sys.hb);
  rel["ah_eq_fh_a"] = ladder::to_json(sys.ah);
  rel["commutator_ab_eq_fh_minus_h"] = ladder::to_json(sys.ab_commutator);
  rel["fh_adjoint"] = ladder::to_json(sys.adjoint_f);
  j["relations"] = std::move(rel);
  j["biorth_dev"] = sys.biorth_dev;
  Json res;
  res["h_xi"] = ladder::to_json(sys.h_xi);
  res["hdag_eta"] = ladder::to_json(sys.hdag_eta);
  res["b_xi"] = ladder::to_json(sys.b_xi);
  res["adag_eta"] = ladder::to_json(sys.adag_eta);
  res["a_xi"] = ladder::to_json(sys.a_xi);
  res["bdag_eta"] = ladder::to_json(sys.bdag_eta);
  res["ba_xi"] = ladder::to_json(sys.ba_xi);
  res["ab_xi"] = ladder::to_json(sys.ab_xi);
  res["adag_bdag_eta"] = ladder::to_json(sys.adbd_eta);
  res["bdag_adag_eta"] = ladder::to_json(sys.bdad_eta);
  j["residuals"] = std::move(res);
  return j;
}

}  // namespace ladderlab::dgha
