#include "ladderlab/ladder_engine.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include <Eigen/LU>
#include <Eigen/SVD>

#include "ladderlab/errors.hpp"

namespace ladderlab::ladder {

namespace {

// Beyond this the phi-family is not usable as a full basis.
constexpr double kMaxFamilyCond = 1e12;

Complex gamma_at(const std::vector<Complex>& gamma, int n) {
  return n < 0 ? Complex(0.0, 0.0) : gamma[n];
}

// Repeated multiplication by S amplifies rounding in directions with a fast
// growing level, so phi_n drifts off the eigenline of H when the grading is
// steep. A couple of inverse-iteration steps at the predicted level pull it
// back; the raw scale and phase are kept by projecting the raw vector onto
// the refined direction. Only runs when the raw residual is large on the
// scale of the level itself. Returns the relative change, 0 when untouched.
double polish(const Operator& H, Vector& v, Complex level, Complex step, double threshold) {
  const double vn = v.norm();
  const Matrix& h = H.mat();
  const auto residual = [&](const Vector& x) { return (h * x - level * x).norm(); };
  const double raw = residual(v);
  if (raw <= threshold * std::max(1.0, std::abs(level)) * vn || std::abs(step) == 0.0) return 0.0;
  const Complex shift = level + 1e-3 * std::abs(step);
  const Eigen::PartialPivLU<Matrix> lu(h - shift * Matrix::Identity(h.rows(), h.cols()));
  Vector x = v / vn;
  for (int it = 0; it < 3; ++it) {
    x = lu.solve(x);
    const double xn = x.norm();
    if (!std::isfinite(xn) || xn == 0.0) return 0.0;
    x /= xn;
  }
  Vector refined = x * x.dot(v);
  const double rn = refined.norm();
  if (rn == 0.0 || residual(refined) / rn >= raw / vn) return 0.0;
  const double change = (refined - v).norm() / vn;
  v = std::move(refined);
  return change;
}

}  // namespace

VectorCheck vector_check(int n, const Vector& lhs, const Vector& rhs, double tol, double cond,
                         double op_scale, double vec_scale) {
  VectorCheck c;
  c.n = n;
  c.residual = (lhs - rhs).norm();
  c.threshold = effective_threshold(tol, cond, op_scale) * std::max(vec_scale, 1e-300);
  c.ok = c.residual <= c.threshold;
  return c;
}

bool all_ok(const std::vector<VectorCheck>& checks) {
  return std::all_of(checks.begin(), checks.end(), [](const VectorCheck& c) { return c.ok; });
}

Json to_json(const std::vector<VectorCheck>& checks) {
  Json arr = Json::array();
  for (const auto& c : checks) {
    Json j;
    j["n"] = c.n;
    j["residual"] = c.residual;
    j["threshold"] = c.threshold;
    j["ok"] = c.ok;
    arr.push_back(std::move(j));
  }
  return arr;
}

Json to_json(const Comparison& c) {
  Json j;
  j["equal"] = c.equal;
  j["max_deviation"] = c.max_deviation;
  j["threshold"] = c.threshold;
  j["window"] = c.window;
  return j;
}

LadderTriple::LadderTriple(Operator h, Operator t, Operator s, Complex lam)
    : H(std::move(h)), T(std::move(t)), S(std::move(s)), lambda(lam) {
  if (!same_space(H, T) || !same_space(H, S)) {
    throw DomainError("LadderTriple: H, T and S must share one space");
  }
}

ClassificationReport classify(const LadderTriple& triple, double tol) {
  const auto& H = triple.H;
  const auto& T = triple.T;
  const auto& S = triple.S;
  const Complex lam = triple.lambda;
  const int window = triple.space()->window();
  const double nh = H.norm(), nt = T.norm(), ns = S.norm();

  const Operator ts = commutator(T, S);
  ClassificationReport r;
  r.tol = tol;
  r.window_used = window;

  const double raise_scale = std::max(2 * nh * ns, 2 * std::abs(lam) * ns * ns * nt);
  r.raising = op_approx_equal(commutator(H, S), lam * (S * ts), window, tol, Basis::phi,
                              raise_scale);

  const double lower_scale = std::max(2 * nh * nt, 2 * std::abs(lam) * ns * nt * nt);
  r.lowering = op_approx_equal(commutator(H, T), lam * (commutator(S, T) * T), window, tol,
                               Basis::phi, lower_scale);

  r.ts = op_approx_equal(commutator(H, ts), Operator::zero(triple.space()), window, tol,
                         Basis::phi, 4 * nh * nt * ns);

  const Operator hd = adjoint(H), td = adjoint(T), sd = adjoint(S);
  r.adjoint_mirror = op_approx_equal(commutator(hd, sd), std::conj(lam) * (commutator(td, sd) * sd),
                                     window, tol, Basis::psi, raise_scale);

  r.in_R_lambda = r.raising.equal;
  r.in_R_lambda_strong = r.raising.equal && r.lowering.equal;
  r.commutes_with_TS = r.ts.equal;
  r.mirror_agrees = r.raising.equal == r.adjoint_mirror.equal;
  return r;
}

std::vector<PowerIdentityRow> verify_power_identities(const LadderTriple& triple, int n_max,
                                                      double tol) {
  const auto& space = *triple.space();
  if (n_max < 0 || n_max > space.window()) {
    std::ostringstream msg;
    msg << "verify_power_identities: n_max " << n_max << " exceeds window " << space.window();
    throw DomainError(msg.str());
  }
  if (!classify(triple, tol).in_R_lambda) {
    throw DomainError("verify_power_identities: triple is not in R_lambda");
  }
  const auto& H = triple.H;
  const auto& T = triple.T;
  const auto& S = triple.S;
  const Complex lam = triple.lambda;
  const Operator hd = adjoint(H), td = adjoint(T), sd = adjoint(S);
  const double nh = H.norm(), nt = T.norm(), ns = S.norm();

  std::vector<PowerIdentityRow> rows;
  Operator sn = Operator::identity(triple.space());
  for (int n = 0; n <= n_max; ++n) {
    if (n > 0) sn = sn * S;
    // Column k of the n-th identity is exact while k + n stays below dim.
    const int window = std::min(space.window(), space.dim() - 1 - n);
    const double nsn = sn.norm();
    const double scale = std::max(2 * nh * nsn, 2 * std::abs(lam) * ns * nt * nsn);
    PowerIdentityRow row;
    row.n = n;
    row.raising_power =
        op_approx_equal(commutator(H, sn), lam * (S * commutator(T, sn)), window, tol, Basis::phi, scale);
    const Operator sdn = adjoint(sn);
    row.adjoint_power = op_approx_equal(commutator(hd, sdn),
                                        std::conj(lam) * (commutator(td, sdn) * sd), window, tol,
                                        Basis::psi, scale);
    rows.push_back(row);
  }
  return rows;
}

bool EigenFamilyPair::certified() const {
  return biorth_ok && all_ok(eigen_phi) && all_ok(ts_phi) && all_ok(eigen_psi) &&
         all_ok(lowering_psi);
}

EigenFamilyPair build_families(const LadderTriple& triple, const Vector& phi0, int n_max,
                               double tol) {
  const auto& space = *triple.space();
  const int dim = space.dim();
  const double cond = space.cond_bound();
  if (phi0.size() != dim) throw DomainError("build_families: phi0 has the wrong dimension");
  if (n_max < 0 || n_max > space.window()) {
    std::ostringstream msg;
    msg << "build_families: n_max " << n_max << " exceeds window " << space.window();
    throw DomainError(msg.str());
  }
  const double phi0_norm = phi0.norm();
  if (phi0_norm == 0.0) throw DomainError("build_families: phi0 must be nonzero");

  const auto& H = triple.H;
  const auto& T = triple.T;
  const auto& S = triple.S;
  const double nh = H.norm();
  const double h_phi0 = H.apply(phi0).norm();
  if (h_phi0 > effective_threshold(tol, cond, nh) * phi0_norm) {
    std::ostringstream msg;
    msg << "build_families: H phi0 = 0 fails (residual " << h_phi0
        << "); shift H with shift_to_zero first";
    throw DomainError(msg.str());
  }
  const auto verdict = classify(triple, tol);
  if (!verdict.in_R_lambda || !verdict.commutes_with_TS) {
    throw DomainError("build_families: triple fails [H,S] = lambda S[T,S] or [H,[T,S]] = 0");
  }

  EigenFamilyPair pair;
  pair.tol = tol;
  pair.cond_bound = cond;

  // phi_n for the whole truncated space; the tail beyond n_max is only used
  // to complete the basis for the dual family. mu and E run alongside so each
  // new vector can be polished against its predicted level.
  const Operator ts = commutator(T, S);
  const double nts = ts.norm();
  // mu_n picks up contamination times the far level, so the trigger is tight.
  const double level_threshold = 1e-3 * tol * cond;
  std::vector<Vector> all_phi{phi0};
  std::vector<Complex> all_mu, all_E{Complex(0.0, 0.0)};
  const auto rayleigh = [&ts](const Vector& v) { return v.dot(ts.apply(v)) / v.squaredNorm(); };
  int full_count = dim;
  for (int n = 1; n < dim; ++n) {
    all_mu.push_back(rayleigh(all_phi.back()));
    all_E.push_back(all_E.back() + triple.lambda * all_mu.back());
    Vector next = S.apply(all_phi.back());
    if (next.norm() < 1e-12 * phi0_norm) {
      full_count = n;
      if (n <= n_max) {
        pair.early_stop = true;
        pair.early_stop_index = n;
      }
      all_E.pop_back();
      break;
    }
    const double change = polish(H, next, all_E[n], all_E[n] - all_E[n - 1], level_threshold);
    if (change > 0.0) {
      if (n <= n_max) pair.polished.push_back(n);
      pair.max_polish_change = std::max(pair.max_polish_change, change);
    }
    all_phi.push_back(std::move(next));
  }
  pair.n_max = pair.early_stop ? pair.early_stop_index - 1 : n_max;
  const int count = pair.n_max + 1;
  pair.phi.assign(all_phi.begin(), all_phi.begin() + count);

  // mu_n by the Rayleigh-type quotient, E_n by the recursion.
  for (int n = 0; n < count; ++n) {
    const Complex mu = n < static_cast<int>(all_mu.size()) ? all_mu[n] : rayleigh(pair.phi[n]);
    pair.mu.push_back(mu);
    if (std::abs(mu) <= effective_threshold(tol, cond, nts)) pair.zero_mu.push_back(n);
    pair.E.push_back(all_E[n]);
  }

  pair.min_gap = std::numeric_limits<double>::infinity();
  for (int n = 0; n < count; ++n) {
    for (int m = n + 1; m < count; ++m) {
      pair.min_gap = std::min(pair.min_gap, std::abs(pair.E[n] - pair.E[m]));
    }
  }
  if (count > 1 && pair.min_gap < kDegeneracyGap) {
    std::ostringstream msg;
    msg << "build_families: eigenvalues coincide within " << kDegeneracyGap
        << " (min gap " << pair.min_gap << "); non-degenerate spectrum required";
    throw NumericalError(msg.str());
  }

  // Dual family.
  bool dual_done = false;
  if (full_count == dim) {
    Matrix normalized(dim, dim);
    std::vector<double> norms(dim);
    for (int n = 0; n < dim; ++n) {
      norms[n] = all_phi[n].norm();
      normalized.col(n) = all_phi[n] / norms[n];
    }
    if (condition_number(normalized) <= kMaxFamilyCond) {
      const Matrix inv = normalized.fullPivLu().inverse();
      for (int n = 0; n < count; ++n) {
        pair.psi.push_back(inv.row(n).adjoint() / norms[n]);
      }
      pair.psi_provenance = DualProvenance::dual_basis;
      dual_done = true;
    }
  }
  if (!dual_done) {
    Matrix normalized(dim, count);
    std::vector<double> norms(count);
    for (int n = 0; n < count; ++n) {
      norms[n] = pair.phi[n].norm();
      normalized.col(n) = pair.phi[n] / norms[n];
    }
    const Matrix gram = normalized.adjoint() * normalized;
    const Matrix dual = normalized * gram.fullPivLu().inverse();
    for (int n = 0; n < count; ++n) pair.psi.push_back(dual.col(n) / norms[n]);
    pair.psi_provenance = DualProvenance::gram_span;
  }

  // Certification.
  const Operator hd = adjoint(H);
  const Operator sd = adjoint(S);
  const double ns = S.norm();
  for (int n = 0; n < count; ++n) {
    const Vector& v = pair.phi[n];
    const Vector& w = pair.psi[n];
    pair.eigen_phi.push_back(vector_check(n, H.apply(v), pair.E[n] * v, tol, cond, nh, v.norm()));
    pair.ts_phi.push_back(vector_check(n, ts.apply(v), pair.mu[n] * v, tol, cond, nts, v.norm()));
    pair.eigen_psi.push_back(
        vector_check(n, hd.apply(w), std::conj(pair.E[n]) * w, tol, cond, nh, w.norm()));
    const Vector lower_target = n == 0 ? Vector::Zero(dim) : pair.psi[n - 1];
    pair.lowering_psi.push_back(vector_check(n, sd.apply(w), lower_target, tol, cond, ns, w.norm()));
  }

  for (int n = 0; n < count; ++n) {
    for (int m = 0; m < count; ++m) {
      const Complex ip = pair.phi[n].dot(pair.psi[m]);
      const double dev = std::abs(ip - (n == m ? Complex(1.0, 0.0) : Complex(0.0, 0.0)));
      pair.biorth_abs_dev = std::max(pair.biorth_abs_dev, dev);
      const double scale = std::max(1.0, pair.phi[n].norm() * pair.psi[m].norm());
      pair.biorth_scaled_dev = std::max(pair.biorth_scaled_dev, dev / scale);
    }
  }
  pair.biorth_ok = pair.biorth_scaled_dev <= 1e-9 * cond;
  return pair;
}

bool GammaReport::certified() const {
  return !gamma_zero && t_annihilates_phi0 && all_ok(raise_psi) && all_ok(lower_phi) &&
         all_ok(st_phi) && all_ok(ts_phi) && all_ok(sdag_tdag_psi) && all_ok(tdag_sdag_psi) &&
         all_ok(comm_phi) && all_ok(comm_psi);
}

GammaReport gamma_ladder(const EigenFamilyPair& pair, const LadderTriple& triple, double tol) {
  if (pair.n_max < 1) throw DomainError("gamma_ladder: need at least two family members");
  if (!classify(triple, tol).in_R_lambda_strong) {
    throw DomainError("gamma_ladder: triple is not in the strong class R_lambda^(s)");
  }
  const auto& T = triple.T;
  const auto& S = triple.S;
  const double cond = pair.cond_bound;
  const int count = pair.size();
  const int dim = triple.space()->dim();
  const Operator td = adjoint(T), sd = adjoint(S);
  const double nt = T.norm(), ns = S.norm();
  const double nst = ns * nt;

  GammaReport g;
  g.pair = pair;
  auto& gamma = g.pair.gamma;
  gamma.clear();
  for (int n = 0; n + 1 < count; ++n) {
    const Vector& next = pair.psi[n + 1];
    gamma.push_back(next.dot(td.apply(pair.psi[n])) / next.squaredNorm());
  }
  const int ng = static_cast<int>(gamma.size());
  for (const auto& gv : gamma) {
    if (std::abs(gv) <= effective_threshold(tol, cond, nt)) g.gamma_zero = true;
  }

  for (int n = 0; n < ng; ++n) {
    const Vector& w = pair.psi[n];
    g.raise_psi.push_back(vector_check(n, td.apply(w), gamma[n] * pair.psi[n + 1], tol, cond, nt, w.norm()));
  }

  const Vector t_phi0 = T.apply(pair.phi[0]);
  g.t_phi0_residual = t_phi0.norm();
  g.t_annihilates_phi0 =
      g.t_phi0_residual <= effective_threshold(tol, cond, nt) * pair.phi[0].norm();
  for (int n = 1; n < count; ++n) {
    const Vector& v = pair.phi[n];
    g.lower_phi.push_back(vector_check(n, T.apply(v), std::conj(gamma[n - 1]) * pair.phi[n - 1],
                                       tol, cond, nt, v.norm()));
  }

  const Operator st = S * T, tsop = T * S;
  const Operator sdtd = sd * td, tdsd = td * sd;
  const Operator st_comm = commutator(S, T), st_comm_dag = commutator(sd, td);
  for (int n = 0; n < count; ++n) {
    const Vector& v = pair.phi[n];
    const Vector& w = pair.psi[n];
    const Complex prev = gamma_at(gamma, n - 1);
    g.st_phi.push_back(vector_check(n, st.apply(v), std::conj(prev) * v, tol, cond, nst, v.norm()));
    g.tdag_sdag_psi.push_back(vector_check(n, tdsd.apply(w), prev * w, tol, cond, nst, w.norm()));
    if (n < ng) {
      g.ts_phi.push_back(vector_check(n, tsop.apply(v), std::conj(gamma[n]) * v, tol, cond, nst, v.norm()));
      g.sdag_tdag_psi.push_back(vector_check(n, sdtd.apply(w), gamma[n] * w, tol, cond, nst, w.norm()));
      g.comm_phi.push_back(vector_check(n, st_comm.apply(v), (std::conj(prev) - std::conj(gamma[n])) * v,
                                        tol, cond, 2 * nst, v.norm()));
      g.comm_psi.push_back(vector_check(n, st_comm_dag.apply(w), (gamma[n] - prev) * w, tol, cond,
                                        2 * nst, w.norm()));
    }
  }
  (void)dim;

  for (int n = 0; n < ng; ++n) g.gaps.push_back(gamma[n] - gamma_at(gamma, n - 1));
  g.constant_gap = true;
  for (const auto& gap : g.gaps) {
    if (std::abs(gap - g.gaps.front()) > 1e-9 * cond * std::max(1.0, std::abs(g.gaps.front()))) {
      g.constant_gap = false;
    }
  }
  return g;
}

std::vector<Lemma1Row> verify_lemma1(const EigenFamilyPair& pair, const Operator& T,
                                     const Operator& S, double tol) {
  const Operator ts = commutator(T, S);
  const Operator ts_dag = commutator(adjoint(T), adjoint(S));
  const double cond = pair.cond_bound;
  std::vector<Lemma1Row> rows;
  for (int n = 0; n < pair.size(); ++n) {
    const Vector& w = pair.psi[n];
    const Vector& v = pair.phi[n];
    Lemma1Row row;
    row.n = n;
    const Vector cw = ts_dag.apply(w);
    row.eigenvalue = w.dot(cw) / w.squaredNorm();
    row.expected = -std::conj(pair.mu[n]);
    row.eigenvalue_dev = std::abs(row.eigenvalue - row.expected);
    row.residual = vector_check(n, cw, row.expected * w, tol, cond, ts_dag.norm(), w.norm());
    const Vector vh = v / v.norm();
    const Vector wh = w / w.norm();
    row.phi_expectation = vh.dot(ts.apply(vh));
    row.psi_expectation = wh.dot(ts.apply(wh));
    row.expectation_dev = std::abs(row.phi_expectation - row.psi_expectation);
    row.threshold = effective_threshold(tol, cond, std::abs(pair.mu[n]));
    row.ok = row.eigenvalue_dev <= row.threshold && row.residual.ok &&
             row.expectation_dev <= row.threshold;
    rows.push_back(row);
  }
  return rows;
}

Operator shift_to_zero(const Operator& H, Complex alpha) {
  return H - alpha * Operator::identity(H.space());
}

SpectrumPairing pair_spectra(const std::vector<Complex>& recursion,
                             const std::vector<Complex>& eig_values) {
  if (recursion.size() > eig_values.size()) {
    throw DomainError("pair_spectra: more recursion values than eigenvalues");
  }
  SpectrumPairing out;
  std::vector<bool> used(eig_values.size(), false);
  for (const auto& e : recursion) {
    int best = -1;
    double best_dist = std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k < eig_values.size(); ++k) {
      if (used[k]) continue;
      const double d = std::abs(e - eig_values[k]);
      if (d < best_dist) {
        best_dist = d;
        best = static_cast<int>(k);
      }
    }
    used[best] = true;
    out.eig_index.push_back(best);
    out.distance.push_back(best_dist);
    out.max_distance = std::max(out.max_distance, best_dist);
  }
  return out;
}

Json to_json(const ClassificationReport& r) {
  Json j;
  Json verdicts;
  verdicts["in_R_lambda"] = r.in_R_lambda;
  verdicts["in_R_lambda_strong"] = r.in_R_lambda_strong;
  verdicts["commutes_with_TS"] = r.commutes_with_TS;
  verdicts["adjoint_mirror_agrees"] = r.mirror_agrees;
  j["verdicts"] = std::move(verdicts);
  Json dev;
  dev["raising"] = to_json(r.raising);
  dev["lowering"] = to_json(r.lowering);
  dev["ts_commutator"] = to_json(r.ts);
  dev["adjoint_mirror"] = to_json(r.adjoint_mirror);
  j["deviations"] = std::move(dev);
  j["window_used"] = r.window_used;
  j["tolerance"] = r.tol;
  return j;
}

Json to_json(const EigenFamilyPair& p) {
  Json j;
  j["n_max"] = p.n_max;
  j["tolerance"] = p.tol;
  j["E"] = complex_list_to_json(p.E);
  j["mu"] = complex_list_to_json(p.mu);
  j["gamma"] = complex_list_to_json(p.gamma);
  std::vector<double> phi_norms, psi_norms;
  for (const auto& v : p.phi) phi_norms.push_back(v.norm());
  for (const auto& v : p.psi) psi_norms.push_back(v.norm());
  j["phi_norms"] = real_list_to_json(phi_norms);
  j["psi_norms"] = real_list_to_json(psi_norms);
  j["early_stop"] = p.early_stop;
  if (p.early_stop) j["early_stop_index"] = p.early_stop_index;
  j["zero_mu"] = p.zero_mu;
  j["psi_provenance"] = p.psi_provenance == DualProvenance::dual_basis ? "dual_basis" : "gram_span";
  j["polished"] = p.polished;
  j["max_polish_change"] = p.max_polish_change;
  j["normalization"] = "<phi_0, psi_0> = 1; overall phase of the pair is free";
  j["min_gap"] = real_to_json(p.min_gap);
  Json bi;
  bi["abs_dev"] = p.biorth_abs_dev;
  bi["scaled_dev"] = p.biorth_scaled_dev;
  bi["ok"] = p.biorth_ok;
  j["biorthonormality"] = std::move(bi);
  Json res;
  res["H_phi"] = to_json(p.eigen_phi);
  res["TS_phi"] = to_json(p.ts_phi);
  res["Hdag_psi"] = to_json(p.eigen_psi);
  res["Sdag_psi"] = to_json(p.lowering_psi);
  j["residuals"] = std::move(res);
  j["certified"] = p.certified();
  return j;
}

Json to_json(const GammaReport& g) {
  Json j;
  j["gamma"] = complex_list_to_json(g.pair.gamma);
  j["gaps"] = complex_list_to_json(g.gaps);
  j["constant_gap"] = g.constant_gap;
  j["gamma_zero"] = g.gamma_zero;
  j["T_phi0_residual"] = g.t_phi0_residual;
  j["T_annihilates_phi0"] = g.t_annihilates_phi0;
  Json res;
  res["Tdag_psi"] = to_json(g.raise_psi);
  res["T_phi"] = to_json(g.lower_phi);
  res["ST_phi"] = to_json(g.st_phi);
  res["TS_phi"] = to_json(g.ts_phi);
  res["SdagTdag_psi"] = to_json(g.sdag_tdag_psi);
  res["TdagSdag_psi"] = to_json(g.tdag_sdag_psi);
  res["commST_phi"] = to_json(g.comm_phi);
  res["commSdagTdag_psi"] = to_json(g.comm_psi);
  j["residuals"] = std::move(res);
  j["certified"] = g.certified();
  return j;
}

Json to_json(const std::vector<PowerIdentityRow>& rows) {
  Json arr = Json::array();
  for (const auto& r : rows) {
    Json j;
    j["n"] = r.n;
    j["raising_power"] = to_json(r.raising_power);
    j["adjoint_power"] = to_json(r.adjoint_power);
    arr.push_back(std::move(j));
  }
  return arr;
}

Json to_json(const std::vector<Lemma1Row>& rows) {
  Json arr = Json::array();
  for (const auto& r : rows) {
    Json j;
    j["n"] = r.n;
    j["eigenvalue"] = complex_to_json(r.eigenvalue);
    j["expected"] = complex_to_json(r.expected);
    j["eigenvalue_dev"] = r.eigenvalue_dev;
    j["residual"] = r.residual.residual;
    j["phi_expectation"] = complex_to_json(r.phi_expectation);
    j["psi_expectation"] = complex_to_json(r.psi_expectation);
    j["expectation_dev"] = r.expectation_dev;
    j["threshold"] = r.threshold;
    j["ok"] = r.ok;
    arr.push_back(std::move(j));
  }
  return arr;
}

}  // namespace ladderlab::ladder
