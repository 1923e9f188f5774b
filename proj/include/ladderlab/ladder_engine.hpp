#pragma once

// Ladder-operator machinery for a triple (H, T, S) with [H,S] = lambda S [T,S]:
// class membership tests, the eigenfamily phi_n = S^n phi_0 with its
// biorthonormal partner psi_n, and the gamma ladder of the strong class.

#include <vector>

#include "ladderlab/matrix_io.hpp"
#include "ladderlab/operator_space.hpp"

namespace ladderlab::ladder {

struct LadderTriple {
  LadderTriple(Operator h, Operator t, Operator s, Complex lambda);

  Operator H;
  Operator T;
  Operator S;
  Complex lambda;

  const SpacePtr& space() const { return H.space(); }
};

inline constexpr double kDefaultTol = 1e-10;

struct ClassificationReport {
  bool in_R_lambda = false;         // [H,S] = lambda S [T,S]
  bool in_R_lambda_strong = false;  // additionally [H,T] = lambda [S,T] T
  bool commutes_with_TS = false;    // [H,[T,S]] = 0
  Comparison raising;               // deviation of [H,S] - lambda S[T,S]
  Comparison lowering;              // deviation of [H,T] - lambda [S,T]T
  Comparison ts;                    // deviation of [H,[T,S]]
  // Adjoint form [H^+,S^+] = conj(lambda)[T^+,S^+]S^+, checked on the psi-basis.
  Comparison adjoint_mirror;
  bool mirror_agrees = false;
  int window_used = 0;
  double tol = kDefaultTol;
};

ClassificationReport classify(const LadderTriple& triple, double tol = kDefaultTol);

struct PowerIdentityRow {
  int n = 0;
  Comparison raising_power;   // [H,S^n] = lambda S [T,S^n]
  Comparison adjoint_power;   // [H^+,(S^+)^n] = conj(lambda) [T^+,(S^+)^n] S^+
};

// Requires classify(...).in_R_lambda and n_max <= space window.
std::vector<PowerIdentityRow> verify_power_identities(const LadderTriple& triple, int n_max,
                                                      double tol = kDefaultTol);

struct VectorCheck {
  int n = 0;
  double residual = 0.0;
  double threshold = 0.0;
  bool ok = false;
};

// |lhs - rhs| against tol * cond * max(1, op_scale) * vec_scale.
VectorCheck vector_check(int n, const Vector& lhs, const Vector& rhs, double tol, double cond,
                         double op_scale, double vec_scale);
bool all_ok(const std::vector<VectorCheck>& checks);
Json to_json(const std::vector<VectorCheck>& checks);
Json to_json(const Comparison& c);

enum class DualProvenance { dual_basis, gram_span };

struct EigenFamilyPair {
  std::vector<Vector> phi;     // phi_n = S^n phi_0
  std::vector<Vector> psi;     // <phi_n, psi_m> = delta_nm
  std::vector<Complex> E;      // E_0 = 0, E_n = E_{n-1} + lambda mu_{n-1}
  std::vector<Complex> mu;     // [T,S] phi_n = mu_n phi_n
  std::vector<Complex> gamma;  // filled by gamma_ladder
  int n_max = 0;               // highest stored index
  double tol = kDefaultTol;
  double cond_bound = 1.0;

  bool early_stop = false;     // some |phi_n| fell below 1e-12 |phi_0|
  int early_stop_index = -1;
  std::vector<int> zero_mu;    // indices with mu_n = 0
  DualProvenance psi_provenance = DualProvenance::dual_basis;
  std::vector<int> polished;       // indices refined by inverse iteration
  double max_polish_change = 0.0;  // largest relative move of a polished phi_n

  std::vector<VectorCheck> eigen_phi;    // H phi_n = E_n phi_n
  std::vector<VectorCheck> ts_phi;       // [T,S] phi_n = mu_n phi_n
  std::vector<VectorCheck> eigen_psi;    // H^+ psi_n = conj(E_n) psi_n
  std::vector<VectorCheck> lowering_psi; // S^+ psi_n = psi_{n-1}, S^+ psi_0 = 0

  double biorth_abs_dev = 0.0;     // max |<phi_n,psi_m> - delta|
  double biorth_scaled_dev = 0.0;  // same divided by max(1, |phi_n||psi_m|)
  bool biorth_ok = false;
  double min_gap = 0.0;            // min_{n != m} |E_n - E_m|

  int size() const { return n_max + 1; }
  bool certified() const;
};

// Threshold for declaring two recursion eigenvalues coincident.
inline constexpr double kDegeneracyGap = 1e-8;

// Requires H phi0 = 0, classify passing for [H,S] and [H,[T,S]], and
// n_max <= window. Throws NumericalError when two E_n coincide within 1e-8.
EigenFamilyPair build_families(const LadderTriple& triple, const Vector& phi0, int n_max,
                               double tol = kDefaultTol);

struct GammaReport {
  EigenFamilyPair pair;                 // copy with gamma populated
  std::vector<VectorCheck> raise_psi;   // T^+ psi_n = gamma_n psi_{n+1}
  std::vector<VectorCheck> lower_phi;   // T phi_n = conj(gamma_{n-1}) phi_{n-1}
  std::vector<VectorCheck> st_phi;      // S T phi_n = conj(gamma_{n-1}) phi_n
  std::vector<VectorCheck> ts_phi;      // T S phi_n = conj(gamma_n) phi_n
  std::vector<VectorCheck> sdag_tdag_psi;  // S^+ T^+ psi_n = gamma_n psi_n
  std::vector<VectorCheck> tdag_sdag_psi;  // T^+ S^+ psi_n = gamma_{n-1} psi_n
  std::vector<VectorCheck> comm_phi;    // [S,T] phi_n = (conj g_{n-1} - conj g_n) phi_n
  std::vector<VectorCheck> comm_psi;    // [S^+,T^+] psi_n = (g_n - g_{n-1}) psi_n
  double t_phi0_residual = 0.0;
  bool t_annihilates_phi0 = false;
  std::vector<Complex> gaps;            // gamma_n - gamma_{n-1}, gamma_{-1} = 0
  bool constant_gap = false;
  bool gamma_zero = false;

  bool certified() const;
};

// Requires the triple to be in the strong class.
GammaReport gamma_ladder(const EigenFamilyPair& pair, const LadderTriple& triple,
                         double tol = kDefaultTol);

struct Lemma1Row {
  int n = 0;
  Complex eigenvalue;     // <psi_n, [T^+,S^+] psi_n> / |psi_n|^2
  Complex expected;       // -conj(mu_n)
  double eigenvalue_dev = 0.0;
  VectorCheck residual;   // |[T^+,S^+] psi_n + conj(mu_n) psi_n|
  Complex phi_expectation;  // <phi^_n, [T,S] phi^_n>
  Complex psi_expectation;  // <psi^_n, [T,S] psi^_n>
  double expectation_dev = 0.0;
  double threshold = 0.0;
  bool ok = false;
};

std::vector<Lemma1Row> verify_lemma1(const EigenFamilyPair& pair, const Operator& T,
                                     const Operator& S, double tol = kDefaultTol);

// H - alpha I
Operator shift_to_zero(const Operator& H, Complex alpha);

struct SpectrumPairing {
  std::vector<int> eig_index;     // partner of recursion value n
  std::vector<double> distance;
  double max_distance = 0.0;
};

// Greedy nearest-neighbour matching in index order of `recursion`; ties go to
// the lower eig index.
SpectrumPairing pair_spectra(const std::vector<Complex>& recursion,
                             const std::vector<Complex>& eig_values);

Json to_json(const ClassificationReport& r);
Json to_json(const EigenFamilyPair& p);
Json to_json(const GammaReport& g);
Json to_json(const std::vector<PowerIdentityRow>& rows);
Json to_json(const std::vector<Lemma1Row>& rows);

}  // namespace ladderlab::ladder
