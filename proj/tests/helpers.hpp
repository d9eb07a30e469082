#pragma once

#include <random>
#include <string>
#include <vector>

#include "ellhomog/field.hpp"
#include "ellhomog/matrix.hpp"

namespace ellhomog::test {

struct NamedField {
  std::string name;
  Field field;
};

inline std::vector<NamedField> sample_fields() {
  Field q = FieldDescriptor::rationals();
  Field q2 = sqrt_extend(FieldElement::from_int(q, 2), q).field;
  Field q23 = sqrt_extend(FieldElement::from_int(q2, 3), q2).field;
  return {{"Q", q},
          {"Q(sqrt2,sqrt3)", q23},
          {"GF5", FieldDescriptor::galois(5)},
          {"GF7", FieldDescriptor::galois(7)},
          {"GF9", FieldDescriptor::galois(3, 2)},
          {"GF8", FieldDescriptor::galois(2, 3)},
          {"GF4", FieldDescriptor::galois(2, 2)}};
}

// Small random element: integer coordinates in [-3, 3] (towers) or uniform
// residues (finite fields).
inline FieldElement random_element(const Field& f, std::mt19937_64& rng) {
  if (f->is_finite()) {
    std::uniform_int_distribution<std::uint64_t> d(0, f->order() - 1);
    return FieldElement::from_encoding(f, d(rng));
  }
  std::uniform_int_distribution<int> d(-3, 3);
  RationalCoords c(f->coordinate_count());
  for (auto& x : c) x = d(rng);
  return FieldElement(f, c);
}

inline ExactMatrix random_matrix(std::size_t rows, std::size_t cols, const Field& f, std::mt19937_64& rng,
                                 double zero_bias = 0.0) {
  ExactMatrix m(rows, cols, f);
  std::bernoulli_distribution zero(zero_bias);
  for (std::size_t i = 0; i < rows; ++i)
    for (std::size_t j = 0; j < cols; ++j)
      m.set(i, j, zero(rng) ? FieldElement::zero(f) : random_element(f, rng));
  return m;
}

// Nilpotent Jordan block of size n (ones on the superdiagonal).
inline ExactMatrix jordan_block(std::size_t n, const Field& f) {
  ExactMatrix m(n, n, f);
  for (std::size_t i = 0; i + 1 < n; ++i) m.set(i, i + 1, FieldElement::one(f));
  return m;
}

inline ExactMatrix direct_sum(const std::vector<ExactMatrix>& blocks, const Field& f) {
  std::size_t n = 0;
  for (const auto& b : blocks) n += b.rows();
  ExactMatrix m(n, n, f);
  std::size_t off = 0;
  for (const auto& b : blocks) {
    for (std::size_t i = 0; i < b.rows(); ++i)
      for (std::size_t j = 0; j < b.cols(); ++j) m.set(off + i, off + j, b(i, j));
    off += b.rows();
  }
  return m;
}

}  // namespace ellhomog::test
