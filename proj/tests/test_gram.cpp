#include <gtest/gtest.h>

#include "ellhomog/errors.hpp"
#include "ellhomog/gram.hpp"

using namespace ellhomog;

namespace {

ShapeSeq S(std::vector<int> parts, int kappa = 0) { return ShapeSeq(std::move(parts), kappa); }
Field Q() { return FieldDescriptor::rationals(); }

FieldElement rat(const Field& f, const mpq_class& v) { return FieldElement::from_rational(f, v); }

// |delta| range used by the sweeps below.
int sweep_window(const ShapeSeq& s) { return 2 * s.parts()[0] + 2; }

}  // namespace

TEST(GramValue, SymplecticSpecExamples) {
  GramTable t(S({1}), Mode::SymplecticOrChar2, Q());
  EXPECT_EQ(t.value(1, 1, -1), FieldElement::one(Q()));
  EXPECT_EQ(t.value(1, 1, -3), FieldElement::from_int(Q(), 3));
  EXPECT_EQ(t.value(1, 1, 1), FieldElement::from_int(Q(), -1));
  EXPECT_TRUE(t.value(1, 1, 0).is_zero());
}

TEST(GramValue, OrthogonalTopLevelExample) {
  GramTable t(S({1, 1}), Mode::OrthogonalOdd, Q());
  EXPECT_EQ(t.classify(1, 1), GramCase::SelfEvenOrTop);
  EXPECT_EQ(t.value(1, 1, -2), FieldElement::from_int(t.field(), 4));
}

TEST(GramValue, VirtualRowWithEvenSigma) {
  GramTable t(S({1, 1}, 1), Mode::OrthogonalOdd, Q());
  for (int d = -4; d <= 4; ++d) {
    EXPECT_EQ(t.value(3, 3, d), FieldElement::from_int(t.field(), 2));
    EXPECT_TRUE(t.value(1, 3, d).is_zero());
    EXPECT_TRUE(t.value(2, 3, d).is_zero());
    EXPECT_TRUE(t.value(3, 1, d).is_zero());
  }
}

TEST(GramValue, WindowAndIndexErrors) {
  GramTable t(S({1}), Mode::SymplecticOrChar2, Q());
  EXPECT_EQ(t.window_bound(1), 6);
  EXPECT_THROW(t.value(1, 1, 7), BoundExceeded);
  EXPECT_THROW(t.value(2, 1, 0), UsageError);
  GramTable wide(S({1}), Mode::SymplecticOrChar2, Q(), 20);
  EXPECT_NO_THROW(wide.value(1, 1, 20));
}

TEST(GramMatrix, SymplecticShapeOne) {
  GramTable t(S({1}), Mode::SymplecticOrChar2, Q());
  EXPECT_EQ(gram_matrix(t), ExactMatrix::from_ints({{0, 1}, {-1, 0}}, Q()));
}

TEST(GramMatrix, CharTwoVirtualIndexIsRadical) {
  Field f = FieldDescriptor::galois(2);
  GramTable t(S({1}, 1), Mode::SymplecticOrChar2, f);
  ExactMatrix g = gram_matrix(t);
  EXPECT_EQ(g, ExactMatrix::from_ints({{0, 1, 0}, {1, 0, 0}, {0, 0, 0}}, f));
  EXPECT_EQ(rank(g), 2u);
  auto k = kernel(g);
  ASSERT_EQ(k.size(), 1u);
  EXPECT_TRUE(k[0][0].is_zero() && k[0][1].is_zero() && !k[0][2].is_zero());
}

TEST(GramMatrix, OrthogonalRankIsNu) {
  for (const auto& s : shapes_up_to(4, Mode::OrthogonalOdd)) {
    GramTable t(s, Mode::OrthogonalOdd, Q());
    EXPECT_EQ(rank(gram_matrix(t)), static_cast<std::size_t>(s.nu())) << s.to_string();
  }
}

TEST(GramMatrix, SymplecticRankIsNu) {
  for (const auto& s : shapes_up_to(5, Mode::SymplecticOrChar2)) {
    if (s.kappa()) continue;
    GramTable t(s, Mode::SymplecticOrChar2, FieldDescriptor::galois(5));
    EXPECT_EQ(rank(gram_matrix(t)), static_cast<std::size_t>(s.nu())) << s.to_string();
  }
}

TEST(ClosedForm, SpecExamples) {
  EXPECT_EQ(closed_form_value(ClosedForm::SelfPairing, 1, 1), 4);
  EXPECT_THROW(closed_form_value(ClosedForm::SelfPairing, 1, 0), UsageError);
  EXPECT_EQ(closed_form_value(ClosedForm::SameLevelPairing, 2, 3), 70);
  EXPECT_EQ(closed_form_value(ClosedForm::JordanBinomial, 1, 2), 3);
}

TEST(ClosedForm, SelfPairingByExplicitProduct) {
  // pi = 2, s = 3: 2 * 5 * 6 * 5 / 6 = 50
  EXPECT_EQ(closed_form_value(ClosedForm::SelfPairing, 2, 3), 50);
  // pi = 1, s = 2: 2 * 3 * 3 / 2 = 9
  EXPECT_EQ(closed_form_value(ClosedForm::SelfPairing, 1, 2), 9);
}

TEST(ClosedForm, JordanBlockBinomialSigns) {
  EXPECT_EQ(jordan_block_closed_form(1, 3), 3);
  EXPECT_EQ(jordan_block_closed_form(1, -3), -3);
  EXPECT_EQ(jordan_block_closed_form(2, 1), 0);
  EXPECT_EQ(jordan_block_closed_form(2, 4), 10);
}

TEST(SquareConjecture, SmallK) {
  const std::vector<long> expect{-16, 64, -256};
  for (int k = 2; k <= 4; ++k) {
    auto c = check_square_conjecture(k);
    EXPECT_TRUE(c.matches) << k;
    EXPECT_EQ(c.expected, expect[static_cast<std::size_t>(k - 2)]);
    EXPECT_EQ(c.square, FieldElement::from_int(c.square.field(), expect[static_cast<std::size_t>(k - 2)]));
  }
}

TEST(GramTable, CaseTotalityAndSymmetry) {
  for (Mode mode : {Mode::SymplecticOrChar2, Mode::OrthogonalOdd}) {
    Field f = mode == Mode::OrthogonalOdd ? Q() : FieldDescriptor::galois(3);
    for (const auto& s : shapes_up_to(6, mode)) {
      if (mode == Mode::SymplecticOrChar2 && s.kappa()) continue;
      GramTable t(s, mode, f);
      const int w = sweep_window(s);
      for (int a = 1; a <= s.index_count(); ++a) {
        for (int b = 1; b <= s.index_count(); ++b) {
          ASSERT_NO_THROW(t.classify(a, b)) << s.to_string();
          for (int d = -w; d <= w; ++d) {
            FieldElement x = t.value(a, b, d), y = t.value(b, a, -d);
            if (mode == Mode::OrthogonalOdd)
              EXPECT_EQ(x, y) << s.to_string();
            else
              EXPECT_EQ(x, -y) << s.to_string();
          }
        }
      }
      EXPECT_FALSE(t.diagnostics().any()) << s.to_string();
    }
  }
}

TEST(GramTable, SymplecticMatchesClosedForm) {
  for (const auto& s : shapes_up_to(5, Mode::SymplecticOrChar2)) {
    if (s.kappa()) continue;
    GramTable t(s, Mode::SymplecticOrChar2, Q());
    for (int a = 1; a <= s.sigma(); ++a) {
      for (int d = -t.window_bound(a); d <= t.window_bound(a); ++d) {
        EXPECT_EQ(t.value(a, a, d), rat(Q(), mpq_class(jordan_block_closed_form(s.p(a), -d))));
      }
    }
  }
}

TEST(GramTable, CharTwoVirtualDiagonalIsImageOfTwo) {
  Field f = FieldDescriptor::galois(2, 2);
  GramTable t(S({2, 1}, 1), Mode::SymplecticOrChar2, f);
  EXPECT_TRUE(t.value(3, 3, 0).is_zero());
  EXPECT_TRUE(t.value(1, 3, 2).is_zero());
  EXPECT_FALSE(f->extends(*FieldDescriptor::rationals()));
  EXPECT_TRUE(t.field()->same_as(*f));
}

TEST(GramTable, ZeroBands) {
  for (const auto& s : shapes_up_to(5, Mode::OrthogonalOdd)) {
    GramTable t(s, Mode::OrthogonalOdd, Q());
    for (int x = 1; x <= s.sigma(); ++x) {
      const int pi = s.p(x);
      for (int y = 1; y <= x; ++y) {
        GramCase c = t.classify(y, x);
        if (c == GramCase::SelfOddWindow || c == GramCase::SelfEvenOrTop) {
          // 0 <= j - i < pi, then 1 at pi
          for (int D = 0; D < pi; ++D) EXPECT_TRUE(t.value(x, x, -D).is_zero());
          EXPECT_EQ(t.value(x, x, -pi), FieldElement::one(t.field()));
        } else if (c == GramCase::SameLevel) {
          for (int d = -pi; d < pi; ++d) EXPECT_TRUE(t.value(y, x, d).is_zero()) << s.to_string();
        } else if (c == GramCase::HigherBlock) {
          for (int d = -pi; d < 2 * s.p(y) - pi; ++d) EXPECT_TRUE(t.value(y, x, d).is_zero()) << s.to_string();
        } else if (c == GramCase::Separated) {
          for (int d = -sweep_window(s); d <= sweep_window(s); ++d) EXPECT_TRUE(t.value(y, x, d).is_zero());
        }
      }
    }
  }
}

TEST(GramTable, SelfPairingClosedFormOnTopOrEvenWindow) {
  for (const auto& s : shapes_up_to(5, Mode::OrthogonalOdd)) {
    GramTable t(s, Mode::OrthogonalOdd, Q(), 40);
    for (int x = 1; x <= s.sigma(); ++x) {
      if (t.classify(x, x) != GramCase::SelfEvenOrTop) continue;
      const int pi = s.p(x);
      for (int sft = 1; sft <= 10; ++sft) {
        FieldElement expect = rat(t.field(), closed_form_value(ClosedForm::SelfPairing, pi, sft));
        EXPECT_EQ(t.value(x, x, -(pi + sft)), expect) << s.to_string() << " s=" << sft;
        EXPECT_EQ(t.value(x, x, pi + sft), expect) << s.to_string() << " s=" << sft;
      }
    }
  }
}

TEST(GramTable, SameLevelPrediction) {
  int applicable = 0;
  for (const auto& s : shapes_up_to(5, Mode::OrthogonalOdd)) {
    GramTable t(s, Mode::OrthogonalOdd, Q(), 30);
    for (int x = 1; x <= s.sigma(); ++x) {
      for (int y = 1; y < x; ++y) {
        if (t.classify(y, x) != GramCase::SameLevel || t.classify(x, x) != GramCase::SelfEvenOrTop) continue;
        ++applicable;
        const int pi = s.p(x);
        for (int sft = 0; sft <= 8; ++sft) {
          FieldElement expect = rat(t.field(), closed_form_value(ClosedForm::SameLevelPairing, pi, sft));
          EXPECT_EQ(t.value(y, x, pi + sft), expect) << s.to_string();
          EXPECT_EQ(t.value(y, x, -(pi + 1 + sft)), expect) << s.to_string();
        }
      }
    }
  }
  EXPECT_GT(applicable, 0);
}

TEST(GramTable, HigherBlockIndependentOfLevelRepresentative) {
  int pairs = 0;
  for (const auto& s : shapes_up_to(6, Mode::OrthogonalOdd)) {
    GramTable t(s, Mode::OrthogonalOdd, Q());
    for (int x = 1; x <= s.sigma(); ++x) {
      for (int x2 = x + 1; x2 <= s.sigma(); ++x2) {
        if (s.p(x2) != s.p(x)) continue;
        for (int y = 1; y < x; ++y) {
          if (t.classify(y, x) != GramCase::HigherBlock) continue;
          ++pairs;
          for (int d = -sweep_window(s); d <= sweep_window(s); ++d)
            EXPECT_EQ(t.value(y, x, d), t.value(y, x2, d)) << s.to_string();
        }
      }
    }
  }
  EXPECT_GT(pairs, 0);
}

TEST(GramTable, AuxiliaryResidualsVanish) {
  for (const auto& s : shapes_up_to(6, Mode::OrthogonalOdd)) {
    GramTable t(s, Mode::OrthogonalOdd, Q());
    EXPECT_TRUE(t.aux_residuals_vanish()) << s.to_string();
    EXPECT_TRUE(t.virtual_residuals_vanish()) << s.to_string();
    for (const auto& L : t.levels()) {
      ASSERT_TRUE(L.nu.count(L.a));
      EXPECT_FALSE(L.nu.at(L.a).is_zero()) << s.to_string();
    }
    if (t.virtual_level()) EXPECT_FALSE(t.virtual_level()->nu.is_zero()) << s.to_string();
  }
}

TEST(GramTable, InductiveRecurrencesHaveZeroResidual) {
  // self cases at top or even window: sum_k (-1)^k C(2pi+1, k) value at D - k = 0 for D >= pi + 2
  for (const auto& s : shapes_up_to(5, Mode::OrthogonalOdd)) {
    GramTable t(s, Mode::OrthogonalOdd, Q());
    for (int x = 1; x <= s.sigma(); ++x) {
      if (t.classify(x, x) != GramCase::SelfEvenOrTop) continue;
      const int pi = s.p(x);
      for (int D = pi + 2; D <= t.window_bound(x); ++D) {
        FieldElement acc = FieldElement::zero(t.field());
        for (int k = 0; k <= std::min(2 * pi + 1, D - pi); ++k) {
          mpz_class c = binomial(2 * pi + 1, k);
          if (k % 2) c = -c;
          acc += rat(t.field(), mpq_class(c)) * t.value(x, x, -(D - k));
        }
        EXPECT_TRUE(acc.is_zero()) << s.to_string() << " D=" << D;
      }
    }
  }
}

TEST(GramTable, SameLevelRecurrenceResidual) {
  for (const auto& s : shapes_up_to(5, Mode::OrthogonalOdd)) {
    GramTable t(s, Mode::OrthogonalOdd, Q());
    for (int x = 1; x <= s.sigma(); ++x) {
      for (int y = 1; y < x; ++y) {
        if (t.classify(y, x) != GramCase::SameLevel) continue;
        const int pi = s.p(x);
        for (int sft = 1; pi + sft + 2 * pi <= t.window_bound(y); ++sft) {
          const int delta = -(pi + sft);
          FieldElement lhs = t.value(y, x, delta), rhs = FieldElement::zero(t.field());
          for (int k = 1; k <= 2 * pi && k < sft; ++k)
            lhs += FieldElement::from_int(t.field(), binomial_nk(pi, k)) * t.value(y, x, delta + k);
          for (int k = 0; k <= 2 * pi; ++k)
            rhs += FieldElement::from_int(t.field(), binomial_nk(pi, k)) * t.value(x, x, delta + k);
          EXPECT_EQ(lhs, rhs) << s.to_string();
        }
      }
    }
  }
}

TEST(GramTable, TranslationInvarianceIsStructural) {
  GramTable t(S({2, 1}), Mode::OrthogonalOdd, Q());
  auto g = gram_matrix(t);
  auto idx = standard_index(t.shape());
  for (std::size_t u = 0; u < idx.size(); ++u)
    for (std::size_t v = 0; v < idx.size(); ++v)
      EXPECT_EQ(g(u, v), t.value(idx[u].first, idx[v].first, idx[u].second - idx[v].second));
}

TEST(GramTable, FieldGrowsOnlyInOrthogonalMode) {
  GramTable sp(S({3, 2, 1}), Mode::SymplecticOrChar2, Q());
  EXPECT_EQ(sp.field()->depth(), 0);
  // the (4,1) entry squares to -256, so sqrt(-1) has been adjoined
  GramTable k4(S({4, 1}), Mode::OrthogonalOdd, Q());
  EXPECT_GE(k4.field()->depth(), 1);
}
