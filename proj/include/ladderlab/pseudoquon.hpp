#pragma once

// Pseudo-quons ab - q ba = 1 with complex q as truncated matrices, their
// biorthonormal Phi/Psi families, and the deformed oscillator built on them.

#include <optional>
#include <vector>

#include "ladderlab/ladder_engine.hpp"
#include "ladderlab/operator_space.hpp"

namespace ladderlab::quon {

// [n]_q = 1 + q + ... + q^{n-1}, [0]_q = 0.
Complex qnum(int n, Complex q);

// x_0 x_1 ... x_n, empty product (n = -1) is 1. Used for the gamma factorial.
Complex factorial_from_zero(const std::vector<Complex>& x, int n);
// x_1 x_2 ... x_n, empty product (n = 0) is 1. Used for alpha_n! and beta_n!.
Complex factorial_from_one(const std::vector<Complex>& x, int n);

// True when |q^k - 1| < 1e-8 for some 1 <= k <= k_max.
bool near_root_of_unity(Complex q, int k_max);

struct QuonParams {
  Complex q;
  std::vector<Complex> alpha;  // size dim; alpha[0] unused, alpha[n] for n = 1..dim-1
  int dim = 0;

  Complex beta(int n) const;   // conj(1 / (alpha_n [n]_q))
};

// Default alpha_n = 1 / sqrt(|[n]_q|). Throws DomainError for q = -1 or when
// some [n]_q vanishes (q a root of unity of low order).
QuonParams make_params(Complex q, int dim);
// Explicit alpha_1..alpha_dim; alpha[0] is ignored.
QuonParams make_params(Complex q, int dim, std::vector<Complex> alpha);

struct QuonPair {
  Operator a;
  Operator b;
  Operator N;   // b a
};

QuonPair build_quon_pair(const QuonParams& params, const SpacePtr& space);

// (h, a, b) with h = (q+1) N and lambda = q+1.
ladder::LadderTriple quon_triple(const QuonPair& pair, Complex q);

struct OscParams {
  Complex alpha;
  Complex beta;
};

struct Oscillator {
  Operator x;
  Operator p;
  Operator H;  // ((p/beta)^2 + (x/alpha)^2) / 2
  Operator h;  // H - I
  Comparison h_closed_form;    // H vs (q+1) N + I
  Comparison xp_deformed;      // [x,p] vs the deformed rule with x^2, p^2 terms
  Comparison xp_canonical;     // [x,p] vs i I (meaningful at q = 1, alpha = beta = 1/sqrt 2)
};

Oscillator build_oscillator(const QuonPair& pair, const OscParams& osc, Complex q,
                            double tol = ladder::kDefaultTol);

// 2[n]_q + q^n, n = 0..count-1
std::vector<Complex> oscillator_levels(Complex q, int count);

struct QuonFamilies {
  std::vector<Vector> Phi;
  std::vector<Vector> Psi;
  std::vector<Complex> qn;     // [n]_q
  int n_max = 0;

  double biorth_dev = 0.0;     // max |<Psi_n, Phi_m> - delta|
  std::vector<ladder::VectorCheck> number_phi;   // N Phi_n = [n] Phi_n
  std::vector<ladder::VectorCheck> number_psi;   // N^+ Psi_n = conj[n] Psi_n
  std::vector<ladder::VectorCheck> lower_phi;    // a Phi_n = alpha_n [n] Phi_{n-1}, a Phi_0 = 0
  std::vector<ladder::VectorCheck> raise_phi;    // b Phi_n = Phi_{n+1} / alpha_{n+1}
  std::vector<ladder::VectorCheck> lower_psi;    // b^+ Psi_n = beta_n conj[n] Psi_{n-1}, b^+ Psi_0 = 0
  std::vector<ladder::VectorCheck> raise_psi;    // a^+ Psi_n = Psi_{n+1} / beta_{n+1}
  double tol = ladder::kDefaultTol;

  bool certified(double biorth_tol) const;
};

// Phi_n = alpha_n b Phi_{n-1}, Psi_n = beta_n a^+ Psi_{n-1} from the vacua
// Phi_0 = V e_0 and Psi_0 = V^{-dagger} e_0. Throws DomainError if n_max
// exceeds the window.
QuonFamilies quon_families(const QuonParams& params, const QuonPair& pair, int n_max,
                           double tol = ladder::kDefaultTol);

// Relative deviation of Phi_n = alpha_n! phi_n and Psi_n = psi_n / conj(alpha_n!)
// against a family pair from the generic engine.
double normalization_map_deviation(const QuonFamilies& fam, const QuonParams& params,
                                   const ladder::EigenFamilyPair& pair);

Json to_json(const QuonFamilies& fam);
Json to_json(const Oscillator& osc);

}  // namespace ladderlab::quon
