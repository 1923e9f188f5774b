#include "ladderlab/bicoherent.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "ladderlab/errors.hpp"

namespace ladderlab::coherent {

namespace {

// Least-squares slope of y against x.
double slope(const std::vector<double>& x, const std::vector<double>& y) {
  const double n = static_cast<double>(x.size());
  const double mx = std::accumulate(x.begin(), x.end(), 0.0) / n;
  const double my = std::accumulate(y.begin(), y.end(), 0.0) / n;
  double sxy = 0.0, sxx = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxy += (x[i] - mx) * (y[i] - my);
    sxx += (x[i] - mx) * (x[i] - mx);
  }
  return sxx > 0.0 ? sxy / sxx : 0.0;
}

// Relative size of the dropped tail when the last term ratio continues
// geometrically, doubled. Terms are magnitudes.
double geometric_tail(const std::vector<double>& terms) {
  const std::size_t n = terms.size();
  if (n == 0) return 0.0;
  const double last = terms.back();
  if (last == 0.0) return 0.0;
  if (n < 2 || terms[n - 2] == 0.0) return kInf;
  const double ratio = last / terms[n - 2];
  if (ratio >= 1.0) return kInf;
  return 2.0 * last * ratio / (1.0 - ratio);
}

}  // namespace

GrowthBound fit_growth_bound(const std::vector<double>& norms) {
  const int len = static_cast<int>(norms.size());
  if (len < 8) throw DomainError("fit_growth_bound: need at least 8 norms");
  std::vector<double> ln(len);
  for (int n = 0; n < len; ++n) {
    if (!(norms[n] > 0.0) || !std::isfinite(norms[n])) {
      std::ostringstream msg;
      msg << "fit_growth_bound: norm " << n << " is zero or not finite";
      throw DomainError(msg.str());
    }
    ln[n] = std::log(norms[n]);
  }
  GrowthBound b;
  // Geometric mean growth; A then makes the bound tight at its worst index.
  const double ln_r = (ln[len - 1] - ln[0]) / (len - 1);
  b.r = std::exp(ln_r);
  double ln_A = -kInf;
  for (int n = 0; n < len; ++n) ln_A = std::max(ln_A, ln[n] - n * ln_r);
  b.A = std::exp(ln_A);
  std::vector<double> ln_M(len);
  for (int n = 0; n < len; ++n) {
    ln_M[n] = ln[n] - ln_A - n * ln_r;
    b.M_seq.push_back(std::exp(ln_M[n]));
  }

  // Tail ratios M_n / M_{n+1}; their log-log trend separates the three regimes.
  std::vector<double> ln_t, ln_idx;
  for (int n = len / 2; n + 1 < len; ++n) {
    ln_t.push_back(ln_M[n] - ln_M[n + 1]);
    ln_idx.push_back(std::log(n + 1.0));
  }
  const double s = slope(ln_idx, ln_t);
  const double t_last = std::exp(ln_M[len - 2] - ln_M[len - 1]);
  const double t_prev = std::exp(ln_M[len - 3] - ln_M[len - 2]);
  if (s < -0.1) {
    b.super_geometric = true;
    b.M_limit = 0.0;
    b.M_limit_uncertainty = t_last;
  } else if (s > 0.1) {
    b.super_decay = true;
    b.M_limit = kInf;
    b.M_limit_uncertainty = kInf;
  } else {
    b.M_limit = t_last;
    b.M_limit_uncertainty = std::abs(t_last - t_prev);
  }
  return b;
}

LimitEstimate estimate_limit(const std::vector<double>& seq) {
  if (seq.empty()) throw DomainError("estimate_limit: empty sequence");
  LimitEstimate e;
  const int len = static_cast<int>(seq.size());
  e.value = seq.back();
  if (len < 2) {
    e.slack = kInf;
    return e;
  }
  std::vector<double> d(len - 1);
  for (int k = 0; k + 1 < len; ++k) d[k] = seq[k + 1] - seq[k];
  const int last = len - 2;
  const int w = std::min(32, len - 1);
  const int k = std::min(8, last);
  double r_d = 0.0;
  if (k > 0 && d[last - k] != 0.0) {
    r_d = std::pow(std::abs(d[last]) / std::abs(d[last - k]), 1.0 / k);
  } else if (k == 0) {
    r_d = 1.0;
  }
  bool rising = len >= 8;
  for (int i = last - w + 1; i <= last && rising; ++i) rising = d[i] > 0.0;
  if (rising && r_d > 0.97) {
    e.divergent = true;
    e.value = kInf;
    e.slack = kInf;
    return e;
  }
  if (r_d < 1.0) {
    e.slack = std::abs(d[last]) * r_d / (1.0 - r_d);
  } else {
    double worst = 0.0;
    for (int i = last - w + 1; i <= last; ++i) worst = std::max(worst, std::abs(d[i]));
    e.slack = worst * w;
  }
  return e;
}

RadiusReport radius(const std::vector<Complex>& gamma, const GrowthBound& bound_phi,
                    const GrowthBound& bound_psi) {
  if (gamma.empty()) throw DomainError("radius: empty gamma sequence");
  std::vector<double> mags;
  for (std::size_t n = 0; n < gamma.size(); ++n) {
    if (gamma[n] == Complex(0.0, 0.0)) {
      std::ostringstream msg;
      msg << "radius: gamma_" << n << " = 0";
      throw DomainError(msg.str());
    }
    mags.push_back(std::abs(gamma[n]));
  }
  RadiusReport r;
  r.gamma = estimate_limit(mags);
  const double g = r.gamma.divergent ? kInf : r.gamma.value;

  if (bound_phi.super_geometric) {
    if (std::isinf(g)) {
      // inf * 0: compare gamma_n against the per-step growth directly.
      std::vector<double> joint;
      const std::size_t len = std::min(gamma.size(), bound_phi.M_seq.size() - 1);
      for (std::size_t n = 0; n < len; ++n) {
        joint.push_back(mags[n] * bound_phi.M_seq[n] / bound_phi.M_seq[n + 1] / bound_phi.r);
      }
      const LimitEstimate j = estimate_limit(joint);
      r.phi_candidate = j.divergent ? kInf : j.value;
      r.phi_from_joint_tail = true;
    } else {
      r.phi_candidate = 0.0;
      r.zero_by_growth = true;
    }
  } else if (bound_phi.super_decay || std::isinf(g)) {
    r.phi_candidate = kInf;
  } else {
    r.phi_candidate = g * bound_phi.M_limit / bound_phi.r;
  }

  if (bound_psi.super_decay) {
    r.psi_candidate = kInf;
  } else if (bound_psi.super_geometric) {
    r.psi_candidate = 0.0;
    r.zero_by_growth = true;
  } else {
    r.psi_candidate = bound_psi.M_limit / bound_psi.r;
  }
  r.gamma_candidate = std::sqrt(g);
  r.rho = std::min({r.phi_candidate, r.psi_candidate, r.gamma_candidate});
  return r;
}

RadiusReport radius_for_pair(const ladder::EigenFamilyPair& pair) {
  std::vector<double> phi_norms, psi_norms;
  for (const auto& v : pair.phi) phi_norms.push_back(v.norm());
  for (const auto& v : pair.psi) psi_norms.push_back(v.norm());
  return radius(pair.gamma, fit_growth_bound(phi_norms), fit_growth_bound(psi_norms));
}

RadiusReport radius_for_pair(const ladder::EigenFamilyPair& pair, const DressedSpace& space) {
  std::vector<double> phi_norms, psi_norms;
  for (const auto& v : pair.phi) phi_norms.push_back((space.dressing_inv() * v).norm());
  for (const auto& v : pair.psi) psi_norms.push_back((space.dressing().adjoint() * v).norm());
  return radius(pair.gamma, fit_growth_bound(phi_norms), fit_growth_bound(psi_norms));
}

SeriesValue gamma_series(const std::vector<Complex>& gamma, Complex z, int n_terms) {
  if (n_terms < 1) throw DomainError("gamma_series: need at least one term");
  if (static_cast<int>(gamma.size()) < n_terms - 1) {
    throw DomainError("gamma_series: gamma sequence too short for n_terms");
  }
  const double z2 = std::norm(z);
  SeriesValue s;
  s.n_terms = n_terms;
  Complex term(1.0, 0.0);
  std::vector<double> mags;
  for (int n = 0; n < n_terms; ++n) {
    if (n > 0) term *= z2 / gamma[n - 1];
    s.value += term;
    mags.push_back(std::abs(term));
  }
  s.tail_bound = geometric_tail(mags);
  return s;
}

std::vector<Complex> phi_coefficients(const std::vector<Complex>& gamma, int count) {
  if (count > static_cast<int>(gamma.size()) + 1) {
    throw DomainError("phi_coefficients: gamma sequence too short");
  }
  std::vector<Complex> c;
  for (int n = 0; n < count; ++n) c.push_back(n == 0 ? Complex(1.0, 0.0) : c.back() / std::conj(gamma[n - 1]));
  return c;
}

BiCoherentState build_states(const ladder::EigenFamilyPair& pair, Complex z, int n_terms) {
  return build_states(pair, z, n_terms, radius_for_pair(pair).rho);
}

BiCoherentState build_states(const ladder::EigenFamilyPair& pair, Complex z, int n_terms,
                             double rho) {
  if (n_terms < 1 || n_terms > pair.size()) {
    throw DomainError("build_states: n_terms must lie in [1, family size]");
  }
  if (static_cast<int>(pair.gamma.size()) < n_terms - 1) {
    throw DomainError("build_states: gamma ladder missing; run gamma_ladder first");
  }
  if (!(std::abs(z) < rho)) {
    std::ostringstream msg;
    msg << "build_states: |z| = " << std::abs(z) << " is not below rho = " << rho;
    throw DomainError(msg.str());
  }
  BiCoherentState s;
  s.z = z;
  s.n_terms = n_terms;
  s.rho = rho;
  s.coeff_phi = phi_coefficients(pair.gamma, n_terms);
  s.coeff_psi.assign(n_terms, Complex(1.0, 0.0));
  s.Gamma = gamma_series(pair.gamma, z, n_terms);

  const int dim = static_cast<int>(pair.phi[0].size());
  Vector sphi = Vector::Zero(dim), spsi = Vector::Zero(dim);
  std::vector<double> uphi, upsi;
  Complex zn(1.0, 0.0);
  for (int n = 0; n < n_terms; ++n) {
    if (n > 0) zn *= z;
    sphi += (s.coeff_phi[n] * zn) * pair.phi[n];
    spsi += zn * pair.psi[n];
    uphi.push_back(std::abs(s.coeff_phi[n] * zn) * pair.phi[n].norm());
    upsi.push_back(std::abs(zn) * pair.psi[n].norm());
  }
  const double sum_uphi = std::accumulate(uphi.begin(), uphi.end(), 0.0);
  const double sum_upsi = std::accumulate(upsi.begin(), upsi.end(), 0.0);
  const double gmag = std::abs(s.Gamma.value);
  s.tail_bound = std::max({geometric_tail(uphi) / sphi.norm(), geometric_tail(upsi) / spsi.norm(),
                           s.Gamma.tail_bound / gmag});

  s.normalized = gmag > kGammaZero;
  if (s.normalized) {
    s.N_phi = 1.0 / std::sqrt(gmag);
    s.N_psi = std::polar(1.0 / std::sqrt(gmag), -std::arg(s.Gamma.value));
    s.norm_product = 1.0 / s.Gamma.value;
  }
  s.phi = s.N_phi * sphi;
  s.psi = s.N_psi * spsi;
  s.inner_product = s.phi.dot(s.psi);
  // Rounding in <phi_n, psi_m> is relative to |phi_n||psi_m|, hence the norm sums.
  const double cond = pair.cond_bound;
  s.inner_threshold = s.Gamma.tail_bound / gmag +
                      1e-9 * cond * std::max(1.0, sum_uphi * sum_upsi / gmag);
  s.inner_ok = s.normalized && std::abs(s.inner_product - 1.0) <= s.inner_threshold;
  return s;
}

EigenResidual verify_eigen(const BiCoherentState& state, const ladder::EigenFamilyPair& pair,
                           const Operator& T, const Operator& S) {
  const int last = state.n_terms - 1;
  const Complex z = state.z;
  const double cond = pair.cond_bound;
  EigenResidual r;

  const double phi_norm = state.phi.norm();
  const double psi_norm = state.psi.norm();
  r.residual_T = (T.apply(state.phi) - z * state.phi).norm() / phi_norm;
  r.residual_Sdag = (adjoint(S).apply(state.psi) - z * state.psi).norm() / psi_norm;

  // The truncated series misses exactly z times its last term.
  Complex zl = std::pow(z, last);
  if (last == 0) zl = 1.0;
  const double dropped_phi =
      std::abs(z * zl * state.coeff_phi[last] * state.N_phi) * pair.phi[last].norm() / phi_norm;
  const double dropped_psi = std::abs(z * zl * state.N_psi) * pair.psi[last].norm() / psi_norm;

  double sum_phi = 0.0, sum_psi = 0.0;
  Complex zn(1.0, 0.0);
  for (int n = 0; n <= last; ++n) {
    if (n > 0) zn *= z;
    sum_phi += std::abs(state.coeff_phi[n] * zn * state.N_phi) * pair.phi[n].norm();
    sum_psi += std::abs(zn * state.N_psi) * pair.psi[n].norm();
  }
  const double op_scale = std::max(1.0, std::max(T.norm(), S.norm()) + std::abs(z));
  r.predicted_T = 2.0 * dropped_phi + 1e-10 * cond * op_scale * sum_phi / phi_norm;
  r.predicted_Sdag = 2.0 * dropped_psi + 1e-10 * cond * op_scale * sum_psi / psi_norm;
  r.ok = r.residual_T <= r.predicted_T && r.residual_Sdag <= r.predicted_Sdag;
  return r;
}

Json to_json(const GrowthBound& b) {
  Json j;
  j["A"] = b.A;
  j["r"] = b.r;
  j["M_limit"] = real_to_json(b.M_limit);
  j["M_limit_uncertainty"] = real_to_json(b.M_limit_uncertainty);
  j["super_geometric"] = b.super_geometric;
  j["super_decay"] = b.super_decay;
  return j;
}

Json to_json(const RadiusReport& r) {
  Json j;
  j["rho"] = real_to_json(r.rho);
  j["phi_candidate"] = real_to_json(r.phi_candidate);
  j["psi_candidate"] = real_to_json(r.psi_candidate);
  j["gamma_candidate"] = real_to_json(r.gamma_candidate);
  j["gamma_limit"] = real_to_json(r.gamma.value);
  j["gamma_limit_slack"] = real_to_json(r.gamma.slack);
  j["gamma_divergent"] = r.gamma.divergent;
  j["phi_from_joint_tail"] = r.phi_from_joint_tail;
  j["zero_by_growth"] = r.zero_by_growth;
  return j;
}

Json to_json(const BiCoherentState& s, const EigenResidual& res) {
  Json j;
  j["z"] = complex_to_json(s.z);
  j["rho"] = real_to_json(s.rho);
  j["Gamma"] = complex_to_json(s.Gamma.value);
  j["Gamma_tail"] = real_to_json(s.Gamma.tail_bound);
  j["normalized"] = s.normalized;
  if (s.norm_product) j["norm_product"] = complex_to_json(*s.norm_product);
  j["residual_T"] = res.residual_T;
  j["residual_Sdag"] = res.residual_Sdag;
  j["predicted_T"] = res.predicted_T;
  j["predicted_Sdag"] = res.predicted_Sdag;
  j["n_terms"] = s.n_terms;
  j["tail_bound"] = real_to_json(s.tail_bound);
  j["inner_product"] = complex_to_json(s.inner_product);
  j["inner_ok"] = s.inner_ok;
  return j;
}

}  // namespace ladderlab::coherent
