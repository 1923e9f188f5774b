#include <gtest/gtest.h>

#include <numbers>

#include "ladderlab/errors.hpp"
#include "ladderlab/pseudoquon.hpp"
#include "oracles.hpp"

using namespace ladderlab;
using namespace ladderlab::quon;

TEST(QNumber, MatchesGeometricForm) {
  for (Complex q : {Complex(0.5, 0.0), Complex(0.7, 0.6), std::polar(1.2, 2.0), Complex(1.0, 0.0),
                    Complex(-0.8, 0.1)}) {
    EXPECT_EQ(qnum(0, q), Complex(0.0, 0.0));
    for (int n = 1; n < 30; ++n) {
      EXPECT_COMPLEX_NEAR(qnum(n, q), oracle::qnum(n, q), 1e-12 * std::max(1.0, std::abs(oracle::qnum(n, q))));
    }
  }
  EXPECT_EQ(qnum(3, 2.0), Complex(7.0, 0.0));
}

TEST(QNumber, Factorials) {
  const std::vector<Complex> x{2.0, 3.0, Complex(0.0, 1.0), 5.0};
  EXPECT_EQ(factorial_from_zero(x, -1), Complex(1.0, 0.0));
  EXPECT_EQ(factorial_from_zero(x, 2), Complex(0.0, 6.0));
  EXPECT_EQ(factorial_from_one(x, 0), Complex(1.0, 0.0));
  EXPECT_EQ(factorial_from_one(x, 3), Complex(0.0, 15.0));
}

TEST(QNumber, RootsOfUnity) {
  EXPECT_TRUE(near_root_of_unity(Complex(0.0, 1.0), 8));
  EXPECT_FALSE(near_root_of_unity(Complex(0.0, 1.0), 3));
  EXPECT_TRUE(near_root_of_unity(std::polar(1.0, 2.0 * std::numbers::pi / 7.0), 10));
  EXPECT_FALSE(near_root_of_unity(0.5, 50));
  EXPECT_FALSE(near_root_of_unity(std::polar(1.0, 2.0), 50));
}

TEST(Params, DefaultsAndRejections) {
  const auto p = make_params(Complex(0.7, 0.6), 10);
  for (int n = 1; n < 10; ++n) {
    EXPECT_NEAR(std::abs(p.alpha[n]), 1.0 / std::sqrt(std::abs(oracle::qnum(n, p.q))), 1e-14);
    EXPECT_COMPLEX_NEAR(p.beta(n), std::conj(1.0 / (p.alpha[n] * oracle::qnum(n, p.q))), 1e-14);
  }
  EXPECT_THROW(make_params(-1.0, 8), DomainError);
  EXPECT_THROW(make_params(Complex(0.0, 1.0), 8), DomainError);  // [4]_i = 0
  EXPECT_THROW(make_params(0.5, 3), DomainError);
  EXPECT_THROW(make_params(0.5, 6, std::vector<Complex>(5, 1.0)), DomainError);
}

TEST(Pair, DeformedCommutationOnTheWindow) {
  for (Complex q : {Complex(0.5, 0.0), Complex(0.7, 0.6), std::polar(1.15, 2.0)}) {
    const auto s = make_space(16, RandomDressing{13, 40.0});
    const auto pair = build_quon_pair(make_params(q, 16), s);
    const auto c = op_approx_equal(qmutator(pair.a, pair.b, q), Operator::identity(s), s->window(), 1e-10);
    EXPECT_TRUE(c.equal) << q << " " << c.max_deviation;
    // N = b a is diagonal with [n]_q in phi coordinates.
    const Matrix n = s->phi_coordinates(pair.N.mat());
    for (int k = 0; k < 16; ++k) EXPECT_COMPLEX_NEAR(n(k, k), oracle::qnum(k, q), 1e-8);
  }
}

TEST(Pair, TripleUsesQPlusOne) {
  const Complex q(0.3, 0.4);
  const auto s = make_space(8, IdentityDressing{});
  const auto pair = build_quon_pair(make_params(q, 8), s);
  const auto t = quon_triple(pair, q);
  EXPECT_EQ(t.lambda, q + 1.0);
  EXPECT_LT((t.H.mat() - (q + 1.0) * pair.N.mat()).norm(), 1e-15);
}

TEST(Oscillator, ClosedFormAndDeformedCommutator) {
  const Complex q(0.7, 0.6);
  const auto s = make_space(18, RandomDressing{4, 25.0});
  const auto pair = build_quon_pair(make_params(q, 18), s);
  const auto osc = build_oscillator(pair, {0.8, Complex(1.3, 0.2)}, q);
  EXPECT_TRUE(osc.h_closed_form.equal);
  EXPECT_TRUE(osc.xp_deformed.equal);
  EXPECT_FALSE(osc.xp_canonical.equal);
  const auto levels = oscillator_levels(q, 16);
  const auto ev = oracle::eigenvalues(osc.H.mat());
  for (int n = 0; n < 16; ++n) {
    EXPECT_COMPLEX_NEAR(levels[n], 2.0 * oracle::qnum(n, q) + oracle::qpow(q, n), 1e-12);
    EXPECT_LT(oracle::nearest(levels[n], ev), 1e-8) << n;
  }
}

TEST(Oscillator, CanonicalPointIsHeisenberg) {
  const auto s = make_space(14, IdentityDressing{});
  const auto pair = build_quon_pair(make_params(1.0, 14), s);
  const double h = std::numbers::sqrt2 / 2;
  const auto osc = build_oscillator(pair, {h, h}, 1.0, 1e-12);
  EXPECT_TRUE(osc.xp_canonical.equal);
  EXPECT_LE(osc.xp_canonical.max_deviation, 1e-12);
}

TEST(Families, CertifiedAndMatchTheEngine) {
  const Complex q = std::polar(1.1, 1.3);
  const auto s = make_space(16, RandomDressing{2, 30.0});
  const auto params = make_params(q, 16);
  const auto pair = build_quon_pair(params, s);
  const auto fam = quon_families(params, pair, 14);
  EXPECT_TRUE(fam.certified(1e-8 * s->cond_bound()));
  EXPECT_LT(fam.biorth_dev, 1e-8);
  const auto t = quon_triple(pair, q);
  const auto generic = ladder::build_families(t, s->phi_basis(0), 14);
  EXPECT_LT(normalization_map_deviation(fam, params, generic), 1e-8);
  EXPECT_THROW(quon_families(params, pair, 15), DomainError);
}

TEST(Report, FamilyAndOscillatorJson) {
  const auto s = make_space(10, IdentityDressing{});
  const auto params = make_params(0.5, 10);
  const auto pair = build_quon_pair(params, s);
  const Json f = to_json(quon_families(params, pair, 8));
  const Json o = to_json(build_oscillator(pair, {1.0, 1.0}, 0.5));
  EXPECT_FALSE(f.empty());
  EXPECT_FALSE(o.empty());
}
