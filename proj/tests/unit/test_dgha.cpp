#include <gtest/gtest.h>

#include <cmath>

#include "ladderlab/dgha.hpp"
#include "ladderlab/errors.hpp"
#include "oracles.hpp"

using namespace ladderlab;
using namespace ladderlab::dgha;

namespace {

DghaModel model(const std::string& f, int dim) { return build_model(expr::parse(f), dim); }

}  // namespace

TEST(Model, LevelsFollowTheRecursion) {
  const auto m = model("2*x + 1", 5);
  EXPECT_EQ(std::vector<double>(m.eps.begin(), m.eps.begin() + 5), (std::vector<double>{0, 1, 3, 7, 15}));
  EXPECT_EQ(m.eps.size(), 6u);
  EXPECT_FALSE(m.truncated);
  EXPECT_TRUE(m.monotonicity.ok);
  EXPECT_EQ(m.monotonicity.points, 256);
  EXPECT_DOUBLE_EQ(m.monotonicity.hi, 31.0);
  EXPECT_NEAR(m.monotonicity.min_slope, 2.0, 1e-12);

  const auto k = model("x + 3", 6);
  for (int n = 0; n <= 6; ++n) EXPECT_DOUBLE_EQ(k.eps[n], 3.0 * n);

  const auto t = model("x + tanh(x) + 1", 12);
  const auto ref = oracle::levels([](double x) { return x + std::tanh(x) + 1.0; }, 13);
  for (int n = 0; n <= 12; ++n) EXPECT_DOUBLE_EQ(t.eps[n], ref[n]);
}

TEST(Model, Rejections) {
  EXPECT_THROW(model("x - 1", 8), DomainError);
  EXPECT_THROW(model("2*x+1", 3), DomainError);
  // Increasing on the orbit but with a negative slope near x = 10.
  const auto dip = expr::parse("2*x + 1 - 3*tanh(x - 10)");
  const auto eps = oracle::levels([](double x) { return 2 * x + 1 - 3 * std::tanh(x - 10); }, 7);
  for (int n = 1; n < 7; ++n) ASSERT_GT(eps[n], eps[n - 1]);
  EXPECT_THROW(build_model(dip, 6), DomainError);
}

TEST(Model, OverflowTruncates) {
  const auto m = model("x^2 + x + 1", 16);
  EXPECT_TRUE(m.truncated);
  EXPECT_EQ(m.levels_reached, 11);
  for (double e : m.eps) EXPECT_LE(e, kLevelCeiling);
  const auto s = make_space(16, IdentityDressing{});
  EXPECT_THROW(build_dgha_triple(m, s), DomainError);
}

TEST(FunctionOfH, SpectralCalculus) {
  const auto m = model("x + 3", 8);
  const auto s = make_space(8, RandomDressing{5, 20.0});
  const auto sys = build_dgha_triple(m, s);
  const Operator fh = eval_f_on_operator(expr::parse("x + 3"), sys.triple.H, m.eps);
  EXPECT_LT((fh.mat() - (sys.triple.H.mat() + 3.0 * Matrix::Identity(8, 8))).norm(), 1e-10);
  const Operator id = eval_f_on_operator(expr::parse("x"), sys.triple.H, m.eps);
  EXPECT_LT((id.mat() - sys.triple.H.mat()).norm(), 1e-10);
  try {
    eval_f_on_operator(expr::parse("log(x)"), sys.triple.H, m.eps);
    FAIL() << "log(0) accepted";
  } catch (const DomainError& e) {
    EXPECT_NE(std::string(e.what()).find("eps_0"), std::string::npos);
  }
}

TEST(Triple, RelationsAndFamiliesUnderDressing) {
  for (const char* f : {"2*x+1", "x+3", "x + tanh(x) + 1"}) {
    const auto m = model(f, 16);
    const auto s = make_space(16, RandomDressing{17, 80.0});
    const auto sys = build_dgha_triple(m, s, 1e-9);
    EXPECT_TRUE(sys.relations_hold()) << f;
    EXPECT_TRUE(sys.adjoint_f.equal) << f;
    EXPECT_TRUE(sys.certified(1e-8 * s->cond_bound())) << f;
    EXPECT_LE(sys.a_xi[0].residual, sys.a_xi[0].threshold);
    EXPECT_LE(sys.bdag_eta[0].residual, sys.bdag_eta[0].threshold);
  }
}

TEST(Triple, EngineRecoversLevelsAndGamma) {
  for (const char* f : {"2*x+1", "x+3", "x + tanh(x) + 1"}) {
    const auto m = model(f, 16);
    const auto s = make_space(16, RandomDressing{3, 100.0});
    const auto sys = build_dgha_triple(m, s);
    const auto rep = ladder::classify(sys.triple);
    ASSERT_TRUE(rep.in_R_lambda && rep.in_R_lambda_strong && rep.commutes_with_TS) << f;
    const auto g = ladder::gamma_ladder(ladder::build_families(sys.triple, s->phi_basis(0), 14), sys.triple);
    EXPECT_TRUE(g.certified()) << f;
    for (int n = 0; n <= 14; ++n) {
      const double tol = 1e-9 * s->cond_bound() * std::max(1.0, m.eps[n + 1]);
      EXPECT_LE(std::abs(g.pair.E[n] - m.eps[n]), tol) << f << " n=" << n;
      EXPECT_LE(std::abs(g.pair.mu[n] - (m.eps[n + 1] - m.eps[n])), tol) << f << " n=" << n;
    }
    for (std::size_t n = 0; n < g.pair.gamma.size(); ++n) {
      EXPECT_LE(std::abs(g.pair.gamma[n] - m.eps[n + 1]), 1e-9 * s->cond_bound() * m.eps[n + 1]);
    }
    const auto lemma = ladder::verify_lemma1(g.pair, sys.triple.T, sys.triple.S);
    for (const auto& r : lemma) {
      EXPECT_TRUE(r.ok) << f << " n=" << r.n;
      EXPECT_NEAR(r.eigenvalue.real(), -(m.eps[r.n + 1] - m.eps[r.n]),
                  1e-9 * s->cond_bound() * std::max(1.0, m.eps[r.n + 1]));
    }
  }
}

TEST(ConstantGap, OnlyForUnitSlopeShifts) {
  EXPECT_TRUE(constant_gap(model("x+3", 16), 14, 1e-12));
  EXPECT_FALSE(constant_gap(model("2*x+1", 16), 14, 1e-12));
  EXPECT_FALSE(constant_gap(model("x + tanh(x) + 1", 16), 14, 1e-12));
  const auto s = make_space(16, IdentityDressing{});
  for (const char* f : {"x+3", "2*x+1"}) {
    const auto sys = build_dgha_triple(model(f, 16), s);
    const auto g = ladder::gamma_ladder(ladder::build_families(sys.triple, s->phi_basis(0), 14), sys.triple);
    EXPECT_EQ(g.constant_gap, std::string(f) == "x+3") << f;
  }
  EXPECT_THROW(constant_gap(model("x+3", 8), 9, 1e-12), DomainError);
}

TEST(Export, CsvAndJson) {
  const auto m = model("2*x+1", 4);
  EXPECT_EQ(eps_csv(m), "n,eps\n0,0\n1,1\n2,3\n3,7\n4,15\n");
  const Json j = to_json(m);
  EXPECT_EQ(j["f"], "2*x+1");
  EXPECT_EQ(j["eps"].size(), 5u);
  EXPECT_TRUE(j["monotonicity"]["ok"].get<bool>());
}
