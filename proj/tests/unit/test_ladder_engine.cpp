#include <gtest/gtest.h>

#include "ladderlab/dgha.hpp"
#include "ladderlab/errors.hpp"
#include "ladderlab/ladder_engine.hpp"
#include "oracles.hpp"

using namespace ladderlab;
using namespace ladderlab::ladder;

namespace {

// Pseudo-quon pair written out by hand: a e_n = alpha_n [n] e_{n-1},
// b e_n = e_{n+1} / alpha_{n+1}, alpha_n = |[n]|^{-1/2}.
struct HandQuon {
  Matrix a, b, h;
};

HandQuon hand_quon(Complex q, int dim) {
  HandQuon out{Matrix::Zero(dim, dim), Matrix::Zero(dim, dim), Matrix::Zero(dim, dim)};
  for (int n = 1; n < dim; ++n) {
    const Complex qn = oracle::qnum(n, q);
    const double alpha = 1.0 / std::sqrt(std::abs(qn));
    out.a(n - 1, n) = alpha * qn;
    out.b(n, n - 1) = 1.0 / alpha;
  }
  out.h = (q + 1.0) * out.b * out.a;
  return out;
}

LadderTriple quon_triple_on(const SpacePtr& s, Complex q) {
  const HandQuon m = hand_quon(q, s->dim());
  return LadderTriple(Operator::from_coordinates(s, m.h), Operator::from_coordinates(s, m.a),
                      Operator::from_coordinates(s, m.b), q + 1.0);
}

LadderTriple boson_triple(const SpacePtr& s) {
  const Matrix a = oracle::boson_lowering(s->dim());
  const Matrix b = a.adjoint();
  return LadderTriple(Operator::from_coordinates(s, b * a), Operator::from_coordinates(s, a),
                      Operator::from_coordinates(s, b), 1.0);
}

}  // namespace

TEST(Classify, QuonIsInTheStrongClass) {
  for (Complex q : {Complex(0.5, 0.0), Complex(0.7, 0.6), std::polar(1.15, 2.0)}) {
    const auto s = make_space(14, RandomDressing{21, 30.0});
    const auto r = classify(quon_triple_on(s, q));
    EXPECT_TRUE(r.in_R_lambda) << q;
    EXPECT_TRUE(r.in_R_lambda_strong) << q;
    EXPECT_TRUE(r.commutes_with_TS) << q;
    EXPECT_TRUE(r.mirror_agrees) << q;
    EXPECT_EQ(r.window_used, 12);
  }
}

TEST(Classify, ShiftedLoweringLeavesOnlyTheWeakClass) {
  const auto s = make_space(10, IdentityDressing{});
  const auto t = boson_triple(s);
  const LadderTriple shifted(t.H, t.T + 0.5 * Operator::identity(s), t.S, 1.0);
  const auto r = classify(shifted);
  EXPECT_TRUE(r.in_R_lambda);
  EXPECT_FALSE(r.in_R_lambda_strong);
  EXPECT_NEAR(r.lowering.max_deviation, 0.5, 1e-12);
}

TEST(Classify, PerturbedHamiltonianFails) {
  const auto s = make_space(10, IdentityDressing{});
  const auto t = boson_triple(s);
  const LadderTriple bad(t.H + Operator(s, 1e-4 * oracle::lcg_matrix(10, 10, 8)), t.T, t.S, 1.0);
  const auto r = classify(bad);
  EXPECT_FALSE(r.in_R_lambda);
  EXPECT_GT(r.raising.max_deviation, 1e-5);
  EXPECT_LT(r.raising.max_deviation, 1e-2);
  EXPECT_TRUE(r.mirror_agrees);
}

TEST(PowerIdentities, HoldForEveryPower) {
  const auto s = make_space(12, RandomDressing{2, 10.0});
  const auto rows = verify_power_identities(quon_triple_on(s, Complex(0.4, 0.3)), 6);
  ASSERT_EQ(rows.size(), 7u);
  EXPECT_EQ(rows.front().n, 0);
  for (const auto& r : rows) {
    EXPECT_TRUE(r.raising_power.equal) << r.n;
    EXPECT_TRUE(r.adjoint_power.equal) << r.n;
  }
}

TEST(BuildFamilies, QuonSpectrumAndBiorthonormality) {
  const Complex q(0.7, 0.6);
  const auto s = make_space(16, RandomDressing{4, 60.0});
  const auto t = quon_triple_on(s, q);
  const auto p = build_families(t, s->phi_basis(0), 14);
  ASSERT_EQ(p.size(), 15);
  EXPECT_TRUE(p.certified());
  EXPECT_EQ(p.psi_provenance, DualProvenance::dual_basis);
  for (int n = 0; n < p.size(); ++n) {
    EXPECT_COMPLEX_NEAR(p.E[n], (q + 1.0) * oracle::qnum(n, q), 1e-8);
    EXPECT_COMPLEX_NEAR(p.mu[n], oracle::qpow(q, n), 1e-8);
  }
  EXPECT_LT(p.biorth_scaled_dev, 1e-10);
}

TEST(BuildFamilies, PreconditionsAreEnforced) {
  const auto s = make_space(8, IdentityDressing{});
  const auto t = boson_triple(s);
  EXPECT_THROW(build_families(t, s->phi_basis(1), 4), DomainError);
  EXPECT_THROW(build_families(t, s->phi_basis(0), 7), DomainError);
  EXPECT_THROW(build_families(t, Vector::Zero(8), 4), DomainError);
  EXPECT_THROW(build_families(t, Vector::Zero(5), 4), DomainError);
}

TEST(BuildFamilies, CoincidingLevelsAreRejected) {
  // q = 0.5: level gaps 1.5 * 0.5^{n-1} fall below 1e-8 past n = 28.
  const auto s = make_space(40, IdentityDressing{});
  const auto t = quon_triple_on(s, 0.5);
  EXPECT_THROW(build_families(t, s->phi_basis(0), 38), NumericalError);
  EXPECT_NO_THROW(build_families(t, s->phi_basis(0), 28));
}

TEST(BuildFamilies, SteepLevelsArePolishedBackOntoTheSpectrum) {
  // eps_n = 2^n - 1: plain powers of S lose the low levels under a dressing.
  const auto model = dgha::build_model(expr::parse("2*x+1"), 16);
  const auto s = make_space(16, RandomDressing{3, 100.0});
  const auto sys = dgha::build_dgha_triple(model, s);
  const auto p = build_families(sys.triple, s->phi_basis(0), 14);
  EXPECT_TRUE(p.certified());
  EXPECT_FALSE(p.polished.empty());
  EXPECT_LT(p.max_polish_change, 1e-6);
  for (int n = 0; n < p.size(); ++n) {
    const double exact = std::ldexp(1.0, n) - 1.0;
    EXPECT_LE(std::abs(p.E[n] - exact), 1e-9 * std::max(1.0, exact)) << n;
  }
}

TEST(GammaLadder, QuonGammaIsConjugateQNumber) {
  const Complex q = std::polar(1.1, 0.8);
  const auto s = make_space(14, RandomDressing{9, 20.0});
  const auto t = quon_triple_on(s, q);
  const auto g = gamma_ladder(build_families(t, s->phi_basis(0), 12), t);
  EXPECT_TRUE(g.certified());
  EXPECT_TRUE(g.t_annihilates_phi0);
  EXPECT_FALSE(g.constant_gap);
  ASSERT_GE(g.pair.gamma.size(), 12u);
  for (int n = 0; n < 12; ++n) {
    EXPECT_COMPLEX_NEAR(g.pair.gamma[n], std::conj(oracle::qnum(n + 1, q)), 1e-8);
  }
}

TEST(GammaLadder, PseudoBosonHasConstantGap) {
  const auto s = make_space(12, RandomDressing{1, 5.0});
  const auto t = boson_triple(s);
  const auto g = gamma_ladder(build_families(t, s->phi_basis(0), 10), t);
  EXPECT_TRUE(g.certified());
  EXPECT_TRUE(g.constant_gap);
  for (std::size_t n = 0; n < g.pair.gamma.size(); ++n) {
    EXPECT_COMPLEX_NEAR(g.pair.gamma[n], Complex(n + 1.0, 0.0), 1e-9);
  }
}

TEST(Lemma1, AdjointCommutatorEigenvalue) {
  const Complex q(0.6, -0.5);
  const auto s = make_space(12, RandomDressing{6, 40.0});
  const auto t = quon_triple_on(s, q);
  const auto p = build_families(t, s->phi_basis(0), 10);
  const auto rows = verify_lemma1(p, t.T, t.S);
  ASSERT_EQ(rows.size(), 11u);
  for (const auto& r : rows) {
    EXPECT_TRUE(r.ok) << r.n;
    EXPECT_COMPLEX_NEAR(r.eigenvalue, -std::conj(oracle::qpow(q, r.n)), 1e-9);
    EXPECT_LE(std::abs(r.phi_expectation - r.psi_expectation), r.threshold);
  }
}

TEST(ShiftToZero, SubtractsTheIdentity) {
  const auto s = make_space(5, IdentityDressing{});
  const Operator h(s, oracle::lcg_matrix(5, 5, 1));
  const Operator k = shift_to_zero(h, Complex(2.0, 1.0));
  EXPECT_EQ(k.mat(), h.mat() - Complex(2.0, 1.0) * Matrix::Identity(5, 5));
}

TEST(PairSpectra, GreedyInIndexOrder) {
  const auto p = pair_spectra({0.0, 1.0, 2.0}, {2.1, 0.05, 1.0});
  EXPECT_EQ(p.eig_index, (std::vector<int>{1, 2, 0}));
  EXPECT_NEAR(p.max_distance, 0.1, 1e-12);
  const auto tie = pair_spectra({1.0}, {0.5, 1.5});
  EXPECT_EQ(tie.eig_index, (std::vector<int>{0}));
}

TEST(VectorCheck, ThresholdScalesWithVectorNorm) {
  Vector a = Vector::Ones(3), b = Vector::Ones(3);
  b(0) += 1e-8;
  const auto c = vector_check(2, a, b, 1e-10, 10.0, 4.0, 2.0);
  EXPECT_DOUBLE_EQ(c.threshold, 1e-10 * 10.0 * 4.0 * 2.0);
  EXPECT_FALSE(c.ok);
  b(0) = 1.0 + 5e-9;
  EXPECT_TRUE(vector_check(2, a, b, 1e-10, 10.0, 4.0, 2.0).ok);
  EXPECT_EQ(c.n, 2);
}

TEST(Report, FamilyJsonCarriesCertificates) {
  const auto s = make_space(8, IdentityDressing{});
  const auto j = to_json(build_families(boson_triple(s), s->phi_basis(0), 5));
  EXPECT_EQ(j["n_max"], 5);
  EXPECT_TRUE(j["certified"].get<bool>());
  EXPECT_EQ(j["E"].size(), 6u);
  EXPECT_TRUE(j.contains("biorthonormality"));
}
