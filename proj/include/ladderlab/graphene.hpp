#pragma once

// Two-mode truncated Fock space and the Dirac-type block Hamiltonian
//   H_K = (2 i v_F / xi) [[0, A2^+], [-A2, 0]]
// on K (+) K, with its explicit eigenvectors.

#include <vector>

#include "ladderlab/ladder_engine.hpp"

namespace ladderlab::graphene {

struct GrapheneParams {
  double vf = 1.0;
  double xi = 1.0;
  int ncut = 2;
};

void validate(const GrapheneParams& p);

// Lexicographic flattening e_{n1,n2} -> n1 * ncut + n2.
inline int flat_index(int n1, int n2, int ncut) { return n1 * ncut + n2; }

struct Modes {
  int ncut = 0;
  Operator A1;
  Operator A2;
};

Modes build_modes(int ncut);

// Max deviation of m over columns with both mode indices < ncut - 1, on a
// two-mode space of size ncut^2 repeated `blocks` times.
Comparison interior_deviation(const Matrix& m, int ncut, int blocks, double threshold);

struct ModeChecks {
  Comparison a1_ccr;         // [A1, A1^+] = I
  Comparison a2_ccr;         // [A2, A2^+] = I
  Comparison a1_a2;          // [A1, A2] = 0
  Comparison a1_a2dag;       // [A1, A2^+] = 0
};

ModeChecks check_modes(const Modes& modes, double tol = 1e-12);

struct HK {
  GrapheneParams params;
  Modes modes;
  Operator H;
  double hermitian_dev = 0.0;   // max |H - H^+|
  Comparison a1_commutes;       // [H, A1 (+) A1] = 0 on the interior window
};

HK build_HK(const GrapheneParams& params);

// H_{K'} = H_K^T
Operator HKprime(const HK& hk);

// (2 v_F / xi) sqrt(n2) with sign
double analytic_energy(const GrapheneParams& p, int n2, int sign);

struct EigenRow {
  int n1 = 0;
  int n2 = 0;
  int sign = 0;          // +1, -1, or 0 for v_{n1,0}
  double E = 0.0;
  double residual = 0.0; // |H v - E v|
  double norm = 0.0;
};

struct Eigenstructure {
  std::vector<EigenRow> rows;
  double max_residual = 0.0;
  double residual_threshold = 0.0;   // 1e-10 |H_K|
  double max_norm_dev = 0.0;
  double max_overlap = 0.0;          // sampled |<v, w>| between distinct rows
  std::vector<double> spectrum;      // eig oracle, sorted
  double min_eigenvalue = 0.0;
  double max_eigenvalue = 0.0;
  int zero_multiplicity = 0;         // eigenvalues within 1e-9 |H_K| of 0
  double symmetry_dev = 0.0;         // sorted spectrum vs its negation
  double analytic_match_dev = 0.0;   // worst distance from an analytic level to the spectrum
  bool certified = false;
};

Eigenstructure eigenstructure(const GrapheneParams& params);

// Smallest eigenvalue of H_K - alpha I.
double min_shifted_eigenvalue(const GrapheneParams& params, double alpha);

Json to_json(const Eigenstructure& e);

}  // namespace ladderlab::graphene
