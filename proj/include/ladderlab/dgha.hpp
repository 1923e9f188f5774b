#pragma once

// Deformed generalized Heisenberg algebras: h b = b f(h), a h = f(h) a,
// [a,b] = f(h) - h for a strictly increasing f, realized on the levels
// eps_0 = 0, eps_n = f(eps_{n-1}).

#include <string>
#include <vector>

#include "ladderlab/expr.hpp"
#include "ladderlab/ladder_engine.hpp"

namespace ladderlab::dgha {

struct MonotonicityCertificate {
  double lo = 0.0;
  double hi = 0.0;
  int points = 0;
  double min_slope = 0.0;   // smallest finite-difference slope of f on the grid
  bool ok = false;
};

struct DghaModel {
  expr::Expr f;
  std::vector<double> eps;   // eps_0 .. eps_dim (one level beyond the matrix size)
  int dim = 0;
  bool truncated = false;    // overflow before all levels were reached
  int levels_reached = 0;
  MonotonicityCertificate monotonicity;
};

// Levels above this count as overflow.
inline constexpr double kLevelCeiling = 1e150;

// Throws DomainError for dim < 4, a non-increasing level sequence or a
// negative sampled slope. Overflow returns a truncated model instead.
DghaModel build_model(const expr::Expr& f, int dim);

struct DghaSystem {
  ladder::LadderTriple triple;   // (h, a, b), lambda = 1
  Operator f_h;
  Comparison hb;                 // h b = b f(h)
  Comparison ah;                 // a h = f(h) a
  Comparison ab_commutator;      // [a,b] = f(h) - h
  Comparison adjoint_f;          // f(h)^+ = f(h^+)
  std::vector<Vector> xi;
  std::vector<Vector> eta;
  std::vector<ladder::VectorCheck> h_xi;      // h xi_n = eps_n xi_n
  std::vector<ladder::VectorCheck> hdag_eta;  // h^+ eta_n = eps_n eta_n
  std::vector<ladder::VectorCheck> b_xi;      // b xi_n = sqrt(eps_{n+1}) xi_{n+1}
  std::vector<ladder::VectorCheck> adag_eta;  // a^+ eta_n = sqrt(eps_{n+1}) eta_{n+1}
  std::vector<ladder::VectorCheck> a_xi;      // a xi_n = sqrt(eps_n) xi_{n-1}, a xi_0 = 0
  std::vector<ladder::VectorCheck> bdag_eta;  // b^+ eta_n = sqrt(eps_n) eta_{n-1}, b^+ eta_0 = 0
  std::vector<ladder::VectorCheck> ba_xi;     // b a xi_n = eps_n xi_n
  std::vector<ladder::VectorCheck> ab_xi;     // a b xi_n = eps_{n+1} xi_n
  std::vector<ladder::VectorCheck> adbd_eta;  // a^+ b^+ eta_n = eps_n eta_n
  std::vector<ladder::VectorCheck> bdad_eta;  // b^+ a^+ eta_n = eps_{n+1} eta_n
  double biorth_dev = 0.0;

  bool relations_hold() const { return hb.equal && ah.equal && ab_commutator.equal; }
  bool certified(double biorth_tol) const;
};

// Throws DomainError on a truncated model or a dim mismatch.
DghaSystem build_dgha_triple(const DghaModel& model, const SpacePtr& space,
                             double tol = ladder::kDefaultTol);

// V diag(f(eps_0), ..., f(eps_{dim-1})) V^{-1}. Throws DomainError naming the
// first index where f is not finite.
Operator eval_f_on_operator(const expr::Expr& f, const Operator& h, const std::vector<double>& eps);

// gamma_n - gamma_{n-1} constant over the first `count` levels, i.e.
// f(eps_n) - eps_n independent of n.
bool constant_gap(const DghaModel& model, int count, double rel_tol);

std::string eps_csv(const DghaModel& model);
Json to_json(const DghaModel& model);
Json to_json(const DghaSystem& sys);

}  // namespace ladderlab::dgha
