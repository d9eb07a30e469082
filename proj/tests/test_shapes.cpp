#include <gtest/gtest.h>

#include <numeric>

#include "ellhomog/errors.hpp"
#include "ellhomog/shapes.hpp"

using namespace ellhomog;

namespace {

ShapeSeq S(std::vector<int> parts, int kappa = 0) { return ShapeSeq(std::move(parts), kappa); }

// Independent reading of the psi rules: psi(t) = 1 for odd t whose part is
// strictly below every earlier part, -1 for even t whose part is strictly
// above every later part, 0 otherwise.
std::vector<int> psi_oracle(const std::vector<int>& p) {
  const int s = static_cast<int>(p.size());
  std::vector<int> out(p.size(), 0);
  for (int t = 1; t <= s; ++t) {
    bool ok = true;
    if (t % 2 == 1) {
      for (int x = 1; x < t; ++x) ok = ok && p[t - 1] < p[x - 1];
      if (ok) out[t - 1] = 1;
    } else {
      for (int x = t + 1; x <= s; ++x) ok = ok && p[t - 1] > p[x - 1];
      if (ok) out[t - 1] = -1;
    }
  }
  return out;
}

}  // namespace

TEST(ShapeSeq, ParseAndDerived) {
  ShapeSeq s = ShapeSeq::parse("3,2,2,1", 1);
  EXPECT_EQ(s.parts(), (std::vector<int>{3, 2, 2, 1}));
  EXPECT_EQ(s.n(), 8);
  EXPECT_EQ(s.nu(), 17);
  EXPECT_EQ(s.sigma(), 4);
  EXPECT_EQ(s.kappa_sigma(), 0);
  EXPECT_EQ(s.index_count(), 5);
  EXPECT_EQ(s.block_length(5), 1);
}

TEST(ShapeSeq, RejectsBadInput) {
  EXPECT_THROW(ShapeSeq::parse("1,2", 0), UsageError);
  EXPECT_THROW(ShapeSeq::parse("2,0", 0), UsageError);
  EXPECT_THROW(ShapeSeq::parse("", 0), UsageError);
  EXPECT_THROW(ShapeSeq::parse("2,x", 0), UsageError);
  EXPECT_THROW(S({2}, 2), UsageError);
}

TEST(ShapeSeq, OrthogonalOddKappaZeroNeedsEvenSigma) {
  EXPECT_THROW(S({2}, 0).validate(Mode::OrthogonalOdd), UsageError);
  EXPECT_NO_THROW(S({2}, 1).validate(Mode::OrthogonalOdd));
  EXPECT_NO_THROW(S({2, 1}, 0).validate(Mode::OrthogonalOdd));
  EXPECT_NO_THROW(S({2}, 0).validate(Mode::SymplecticOrChar2));
}

TEST(Psi, SpecExamples) {
  EXPECT_EQ(psi(S({3, 2, 2, 1})).values, (std::vector<int>{1, 0, 0, -1}));
  EXPECT_EQ(psi(S({4})).values, (std::vector<int>{1}));
  EXPECT_EQ(psi(S({2, 2})).values, (std::vector<int>{1, -1}));
}

TEST(Psi, ExhaustiveInvariantsUpToEight) {
  for (int n = 1; n <= 8; ++n) {
    for (const auto& p : partitions_of(n)) {
      auto v = psi(S(p)).values;
      EXPECT_EQ(v, psi_oracle(p)) << S(p).to_string();
      int prefix = 0;
      for (std::size_t t = 1; t <= v.size(); ++t) {
        prefix += v[t - 1];
        EXPECT_GE(prefix, 0);
        if (v[t - 1] == 1) EXPECT_EQ(t % 2, 1u);
        if (v[t - 1] == -1) {
          EXPECT_EQ(t % 2, 0u);
          EXPECT_EQ(prefix, 0);
        }
      }
    }
  }
}

TEST(JordanPrediction, SpecExamples) {
  EXPECT_EQ(jordan_prediction(S({2, 1}), Mode::SymplecticOrChar2), (std::vector<int>{4, 2}));
  EXPECT_EQ(jordan_prediction(S({2, 1}), Mode::OrthogonalOdd), (std::vector<int>{5, 1}));
  EXPECT_EQ(jordan_prediction(S({2}, 1), Mode::OrthogonalOdd), (std::vector<int>{5}));
  EXPECT_EQ(jordan_prediction(S({2, 1}, 1), Mode::SymplecticOrChar2), (std::vector<int>{4, 2, 1}));
  EXPECT_THROW(jordan_prediction(S({2}), Mode::OrthogonalOdd), UsageError);
}

TEST(JordanPrediction, SumsToNuExhaustively) {
  for (Mode mode : {Mode::SymplecticOrChar2, Mode::OrthogonalOdd}) {
    for (const auto& s : shapes_up_to(8, mode)) {
      auto j = jordan_prediction(s, mode);
      EXPECT_EQ(std::accumulate(j.begin(), j.end(), 0), s.nu()) << s.to_string();
      EXPECT_TRUE(std::is_sorted(j.rbegin(), j.rend()));
    }
  }
}

TEST(PiWindow, SpecExamples) {
  auto w = pi_window(S({3, 2, 2, 1}), Level::integer(1));
  ASSERT_TRUE(w);
  EXPECT_EQ(w->a, 1);
  EXPECT_EQ(w->b, 3);
  w = pi_window(S({2, 1}), Level::integer(1));
  ASSERT_TRUE(w);
  EXPECT_EQ(w->a, 1);
  EXPECT_EQ(w->b, 1);
  EXPECT_FALSE(pi_window(S({1, 1}), Level::integer(1)));
  EXPECT_THROW(pi_window(S({2, 1}), Level::integer(3)), UsageError);
  EXPECT_THROW(pi_window(S({2, 1}), Level::half()), UsageError);
}

TEST(PiWindow, HalfLevelEndsAtSigma) {
  for (const auto& s : shapes_up_to(8, Mode::OrthogonalOdd)) {
    if (s.kappa() != 1) continue;
    auto w = pi_window(s, Level::half());
    ASSERT_TRUE(w) << s.to_string();
    EXPECT_EQ(w->b, s.sigma());
    EXPECT_EQ(w->b % 2 == 1, s.sigma() % 2 == 1);
  }
}

TEST(PiWindow, WindowInvariants) {
  for (int n = 1; n <= 8; ++n) {
    for (const auto& p : partitions_of(n)) {
      ShapeSeq s = S(p);
      auto ps = psi(s);
      for (std::size_t x = 1; x < p.size(); ++x) {
        const int pi = p[x];
        auto w = pi_window(s, Level::integer(pi));
        if (p[0] == pi) {
          EXPECT_FALSE(w);
          continue;
        }
        ASSERT_TRUE(w);
        EXPECT_LE(w->a, w->b);
        EXPECT_EQ(w->a % 2, 1);
        EXPECT_GT(s.p(w->b), pi);
        EXPECT_EQ(s.p(w->b + 1), pi);
        EXPECT_EQ(ps.at(w->a), 1);
        EXPECT_GT(s.p(w->a), pi);
        for (int a = w->a + 1; a <= w->b; ++a) EXPECT_FALSE(ps.at(a) == 1 && s.p(a) > pi) << s.to_string();
      }
    }
  }
}

TEST(BinomialNk, SpecExamples) {
  EXPECT_EQ(binomial_nk(1, 0), 1);
  EXPECT_EQ(binomial_nk(1, 1), -2);
  EXPECT_EQ(binomial_nk(1, 2), 1);
  EXPECT_EQ(binomial_nk(2, 2), 6);
  EXPECT_EQ(binomial_nk(3, 5), -6);
  EXPECT_THROW(binomial_nk(1, 3), UsageError);
  EXPECT_THROW(binomial_nk(1, -1), UsageError);
}

TEST(BinomialNk, GeneratingPolynomial) {
  // coefficients of (1 - x)^{2 pi} by repeated multiplication
  for (int pi = 1; pi <= 6; ++pi) {
    std::vector<long long> poly{1};
    for (int f = 0; f < 2 * pi; ++f) {
      std::vector<long long> next(poly.size() + 1, 0);
      for (std::size_t k = 0; k < poly.size(); ++k) {
        next[k] += poly[k];
        next[k + 1] -= poly[k];
      }
      poly = next;
    }
    for (int k = 0; k <= 2 * pi; ++k) EXPECT_EQ(binomial_nk(pi, k), poly[static_cast<std::size_t>(k)]);
  }
}

TEST(SeriesIdentity, SpecExamples) {
  EXPECT_TRUE(verify_series_identity(SeriesIdentity::NegativeBinomial, 1, 6));
  EXPECT_TRUE(verify_series_identity(SeriesIdentity::NegativeBinomial, 3, 10));
  EXPECT_TRUE(verify_series_identity(SeriesIdentity::TwoPole, 2, 10));
}

TEST(SeriesIdentity, TwoPoleCoefficientsByHand) {
  // (1+T)(1-T)^{-M}: coefficient of T^u is C(M+u-1, u) + C(M+u-2, u-1)
  for (int M = 2; M <= 8; ++M) {
    EXPECT_EQ(two_pole_coefficient(M, 0), 1);
    for (int u = 1; u <= 12; ++u) {
      mpq_class expect = mpq_class(binomial(M + u - 1, u) + binomial(M + u - 2, u - 1));
      EXPECT_EQ(two_pole_coefficient(M, u), expect) << "M=" << M << " u=" << u;
    }
  }
}

TEST(SeriesIdentity, AsPrintedProductDiffersFromSecondOrderOn) {
  // u = 1 agrees, u = 2 gives (M+1)(M+3)/2 against M(M+3)/2
  for (int M = 2; M <= 8; ++M) {
    EXPECT_EQ(two_pole_coefficient_as_printed(M, 1), two_pole_coefficient(M, 1));
    EXPECT_EQ(two_pole_coefficient_as_printed(M, 2), mpq_class((M + 1) * (M + 3)) / 2);
    EXPECT_NE(two_pole_coefficient_as_printed(M, 2), two_pole_coefficient(M, 2));
    EXPECT_FALSE(verify_two_pole_as_printed(M, 4));
  }
}

TEST(Partitions, CountsAndOrder) {
  const std::vector<std::size_t> p{1, 1, 2, 3, 5, 7, 11, 15, 22};
  for (int n = 1; n <= 8; ++n) EXPECT_EQ(partitions_of(n).size(), p[static_cast<std::size_t>(n)]);
  EXPECT_EQ(partitions_of(3), (std::vector<std::vector<int>>{{3}, {2, 1}, {1, 1, 1}}));
}

TEST(Levels, DescendingWithHalf) {
  auto l = levels_descending(S({3, 2, 2, 1}, 1));
  ASSERT_EQ(l.size(), 4u);
  EXPECT_EQ(l[0], Level::integer(3));
  EXPECT_EQ(l[2], Level::integer(1));
  EXPECT_TRUE(l[3].is_half());
}
