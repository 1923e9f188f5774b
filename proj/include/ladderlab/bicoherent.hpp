#pragma once

// Bi-coherent states phi(z), psi(z) built from an eigenfamily pair with its
// gamma ladder, the convergence radius estimate, and the normalization
// series Gamma(z) = sum |z|^{2n} / gamma_{n-1}!.

#include <limits>
#include <optional>
#include <vector>

#include "ladderlab/ladder_engine.hpp"

namespace ladderlab::coherent {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

// |family_n| <= A r^n M_seq[n].
struct GrowthBound {
  double A = 1.0;
  double r = 1.0;
  std::vector<double> M_seq;
  double M_limit = 1.0;              // lim M_n / M_{n+1}; 0 and +inf are flagged below
  double M_limit_uncertainty = 0.0;
  bool super_geometric = false;      // tail ratios fall to zero: M_limit reported as 0
  bool super_decay = false;          // tail ratios diverge: M_limit reported as +inf
};

// Needs at least 8 norms, all positive.
GrowthBound fit_growth_bound(const std::vector<double>& norms);

struct LimitEstimate {
  double value = 0.0;
  double slack = 0.0;      // Cauchy-tail estimate of |value - limit|
  bool divergent = false;
};

// Limit of a nonnegative sequence: last value plus slack, or divergence when
// the last min(32, len-1) increments are all positive and barely decaying.
LimitEstimate estimate_limit(const std::vector<double>& seq);

struct RadiusReport {
  double rho = 0.0;
  double phi_candidate = 0.0;    // gamma M(phi) / r_phi
  double psi_candidate = 0.0;    // M(psi) / r_psi
  double gamma_candidate = 0.0;  // sqrt(gamma)
  LimitEstimate gamma;           // lim |gamma_n|
  bool phi_from_joint_tail = false;
  bool zero_by_growth = false;   // some M limit fitted to 0 with finite gamma
};

// Throws DomainError on an empty or vanishing gamma sequence.
RadiusReport radius(const std::vector<Complex>& gamma, const GrowthBound& bound_phi,
                    const GrowthBound& bound_psi);

// rho from the stored family norms and gamma of a pair.
RadiusReport radius_for_pair(const ladder::EigenFamilyPair& pair);
// Same, with the norms taken in dressing coordinates (V^-1 phi_n, V^+ psi_n).
// The bounded factors |V|, |V^-1| only move A, and dropping them keeps a
// random dressing from masking the growth trend.
RadiusReport radius_for_pair(const ladder::EigenFamilyPair& pair, const DressedSpace& space);

struct SeriesValue {
  Complex value;
  double tail_bound = 0.0;   // doubled geometric comparison on the last ratio
  int n_terms = 0;
};

// Partial sum of sum_{n < n_terms} |z|^{2n} / gamma_{n-1}!, gamma_{-1}! = 1.
SeriesValue gamma_series(const std::vector<Complex>& gamma, Complex z, int n_terms);

// alpha_n = 1 / conj(gamma_{n-1}!), n = 0..count-1
std::vector<Complex> phi_coefficients(const std::vector<Complex>& gamma, int count);

// Threshold below which Gamma(z) counts as a zero and normalization is skipped.
inline constexpr double kGammaZero = 1e-12;

struct BiCoherentState {
  Complex z;
  std::vector<Complex> coeff_phi;
  std::vector<Complex> coeff_psi;
  SeriesValue Gamma;
  bool normalized = false;          // false when |Gamma| <= 1e-12
  std::optional<Complex> norm_product;  // conj(N_phi) N_psi = 1/Gamma
  Complex N_phi{1.0, 0.0};
  Complex N_psi{1.0, 0.0};
  int n_terms = 0;
  double rho = 0.0;
  double tail_bound = 0.0;          // relative tail of the state series
  Vector phi;
  Vector psi;
  Complex inner_product;            // <phi(z), psi(z)>
  double inner_threshold = 0.0;
  bool inner_ok = false;
};

// Requires gamma on the pair, n_terms <= pair.size(), |z| < rho.
BiCoherentState build_states(const ladder::EigenFamilyPair& pair, Complex z, int n_terms);
BiCoherentState build_states(const ladder::EigenFamilyPair& pair, Complex z, int n_terms,
                             double rho);

struct EigenResidual {
  double residual_T = 0.0;       // |T phi(z) - z phi(z)| / |phi(z)|
  double residual_Sdag = 0.0;    // |S^+ psi(z) - z psi(z)| / |psi(z)|
  double predicted_T = 0.0;      // truncation term plus rounding allowance
  double predicted_Sdag = 0.0;
  bool ok = false;
};

EigenResidual verify_eigen(const BiCoherentState& state, const ladder::EigenFamilyPair& pair,
                           const Operator& T, const Operator& S);

Json to_json(const GrowthBound& b);
Json to_json(const RadiusReport& r);
Json to_json(const BiCoherentState& s, const EigenResidual& res);

}  // namespace ladderlab::coherent
