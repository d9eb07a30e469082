#include <gtest/gtest.h>

#include <algorithm>
#include <numeric>

#include "ellhomog/errors.hpp"
#include "ellhomog/matrix.hpp"
#include "helpers.hpp"

using namespace ellhomog;

namespace {

Field Q() { return FieldDescriptor::rationals(); }

FieldElement leibniz_det(const ExactMatrix& m) {
  const std::size_t n = m.rows();
  std::vector<std::size_t> perm(n);
  std::iota(perm.begin(), perm.end(), 0);
  FieldElement acc = FieldElement::zero(m.field());
  do {
    int inversions = 0;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i + 1; j < n; ++j) inversions += perm[i] > perm[j];
    FieldElement term = FieldElement::one(m.field());
    for (std::size_t i = 0; i < n; ++i) term *= m(i, perm[i]);
    acc += inversions % 2 ? -term : term;
  } while (std::next_permutation(perm.begin(), perm.end()));
  return acc;
}

}  // namespace

TEST(Rank, SpecExamples) {
  EXPECT_EQ(rank(ExactMatrix::identity(3, Q())), 3u);
  EXPECT_EQ(rank(test::jordan_block(4, Q())), 3u);
  EXPECT_EQ(rank(ExactMatrix(3, 4, Q())), 0u);
}

TEST(Rank, TransposeInvariantOnRandomMatrices) {
  std::mt19937_64 rng(11);
  std::uniform_int_distribution<std::size_t> dim(1, 12);
  for (const auto& nf : test::sample_fields()) {
    for (int trial = 0; trial < 12; ++trial) {
      const std::size_t r = dim(rng), c = dim(rng);
      ExactMatrix m = test::random_matrix(r, c, nf.field, rng, 0.6);
      EXPECT_EQ(rank(m), rank(m.transpose())) << nf.name << " " << r << "x" << c;
    }
  }
}

TEST(Rank, ProductOfLowRankFactors) {
  // rank(A B) <= k when A is n x k
  std::mt19937_64 rng(3);
  Field f = FieldDescriptor::galois(7);
  for (std::size_t k = 0; k <= 5; ++k) {
    ExactMatrix a = test::random_matrix(8, k, f, rng), b = test::random_matrix(k, 9, f, rng);
    EXPECT_LE(rank(a * b), k);
  }
}

TEST(SolveLinear, SpecExamples) {
  Field q = Q();
  Vector b{FieldElement::from_int(q, 3), FieldElement::from_int(q, -1)};
  auto u = solve_linear(ExactMatrix::identity(2, q), b);
  ASSERT_TRUE(std::holds_alternative<Unique>(u));
  EXPECT_EQ(std::get<Unique>(u).x, b);

  Vector zero{FieldElement::zero(q), FieldElement::zero(q)};
  auto a = solve_linear(ExactMatrix(2, 2, q), zero);
  ASSERT_TRUE(std::holds_alternative<Affine>(a));
  EXPECT_EQ(std::get<Affine>(a).x0, zero);
  EXPECT_EQ(std::get<Affine>(a).kernel.size(), 2u);

  auto none = solve_linear(ExactMatrix::from_ints({{1, 1}, {1, 1}}, q),
                           {FieldElement::one(q), FieldElement::zero(q)});
  EXPECT_TRUE(std::holds_alternative<NoSolution>(none));
}

TEST(SolveLinear, AffineSolutionsSatisfySystem) {
  std::mt19937_64 rng(5);
  for (const auto& nf : test::sample_fields()) {
    ExactMatrix a = test::random_matrix(4, 6, nf.field, rng, 0.3);
    Vector xs = test::random_matrix(6, 1, nf.field, rng).column(0);
    Vector b = a * xs;
    auto s = solve_linear(a, b);
    if (auto* u = std::get_if<Unique>(&s)) {
      EXPECT_EQ(a * u->x, b) << nf.name;
    } else if (auto* af = std::get_if<Affine>(&s)) {
      EXPECT_EQ(a * af->x0, b) << nf.name;
      for (const auto& k : af->kernel) EXPECT_EQ(a * k, Vector(4, FieldElement::zero(nf.field))) << nf.name;
      EXPECT_EQ(af->kernel.size(), 6 - rank(a)) << nf.name;
    } else {
      ADD_FAILURE() << "consistent system reported unsolvable over " << nf.name;
    }
  }
}

TEST(Determinant, MatchesLeibnizExpansion) {
  std::mt19937_64 rng(17);
  for (const auto& nf : test::sample_fields()) {
    for (std::size_t n = 1; n <= 5; ++n) {
      ExactMatrix m = test::random_matrix(n, n, nf.field, rng, 0.2);
      EXPECT_EQ(determinant(m), leibniz_det(m)) << nf.name << " n=" << n;
    }
  }
}

TEST(Inverse, TimesOriginalIsIdentity) {
  std::mt19937_64 rng(19);
  for (const auto& nf : test::sample_fields()) {
    for (std::size_t n = 1; n <= 6; ++n) {
      ExactMatrix m = test::random_matrix(n, n, nf.field, rng);
      if (determinant(m).is_zero()) {
        EXPECT_THROW(inverse(m), SingularMatrix);
        continue;
      }
      EXPECT_EQ(inverse(m) * m, ExactMatrix::identity(n, nf.field)) << nf.name;
      EXPECT_EQ(m * inverse(m), ExactMatrix::identity(n, nf.field)) << nf.name;
    }
  }
}

TEST(Kernel, DimensionAndAnnihilation) {
  std::mt19937_64 rng(23);
  Field f = FieldDescriptor::galois(5);
  for (int trial = 0; trial < 20; ++trial) {
    ExactMatrix m = test::random_matrix(5, 7, f, rng, 0.5);
    auto k = kernel(m);
    EXPECT_EQ(k.size(), 7 - rank(m));
    for (const auto& v : k) EXPECT_EQ(m * v, Vector(5, FieldElement::zero(f)));
  }
}

TEST(Rref, PivotIsFirstNonzeroTopDown) {
  Field q = Q();
  auto r = rref(ExactMatrix::from_ints({{0, 2, 4}, {0, 1, 3}, {1, 0, 0}}, q));
  EXPECT_EQ(r.pivot_columns, (std::vector<std::size_t>{0, 1, 2}));
  EXPECT_EQ(r.reduced, ExactMatrix::identity(3, q));
}

TEST(Subspaces, IntersectionAndPerp) {
  Field q = Q();
  // e1, e2 and e2, e3 in Q^3
  ExactMatrix u = ExactMatrix::from_ints({{1, 0}, {0, 1}, {0, 0}}, q);
  ExactMatrix w = ExactMatrix::from_ints({{0, 0}, {1, 0}, {0, 1}}, q);
  EXPECT_EQ(intersection_dim(u, w), 1u);
  EXPECT_EQ(span_dim(u.hstack(w)), 3u);
  ExactMatrix p = perp(u, ExactMatrix::identity(3, q));
  EXPECT_EQ(span_dim(p), 1u);
  EXPECT_TRUE(same_span(p, ExactMatrix::from_ints({{0}, {0}, {5}}, q)));
}

TEST(NilpotentJordan, SpecExamples) {
  Field q = Q();
  EXPECT_EQ(nilpotent_jordan_multiset(test::jordan_block(3, q)), (std::vector<int>{3}));
  EXPECT_EQ(nilpotent_jordan_multiset(test::direct_sum({test::jordan_block(2, q), test::jordan_block(1, q)}, q)),
            (std::vector<int>{2, 1}));
  EXPECT_EQ(nilpotent_jordan_multiset(ExactMatrix::from_ints({{-1, -1}, {1, 1}}, q)), (std::vector<int>{2}));
}

TEST(NilpotentJordan, RejectsNonNilpotent) {
  EXPECT_THROW(nilpotent_jordan_multiset(ExactMatrix::identity(2, Q())), NotNilpotent);
}

TEST(NilpotentJordan, DirectSumsUnderRandomConjugation) {
  std::mt19937_64 rng(29);
  std::uniform_int_distribution<int> size(1, 4);
  for (const auto& nf : test::sample_fields()) {
    for (int trial = 0; trial < 6; ++trial) {
      std::vector<int> sizes;
      std::vector<ExactMatrix> blocks;
      int total = 0;
      while (total < 7) {
        int s = std::min(size(rng), 8 - total);
        sizes.push_back(s);
        blocks.push_back(test::jordan_block(static_cast<std::size_t>(s), nf.field));
        total += s;
      }
      ExactMatrix n = test::direct_sum(blocks, nf.field);
      ExactMatrix h;
      do h = test::random_matrix(n.rows(), n.rows(), nf.field, rng);
      while (determinant(h).is_zero());
      auto got = nilpotent_jordan_multiset(h * n * inverse(h));
      std::sort(sizes.rbegin(), sizes.rend());
      EXPECT_EQ(got, sizes) << nf.name;
      EXPECT_EQ(std::accumulate(got.begin(), got.end(), 0), total);
    }
  }
}
