#pragma once

// Exact scalars: towers of quadratic extensions of Q and finite fields GF(p^m).
//
// A field is an immutable FieldDescriptor shared through `Field`.  Extending a
// field (adjoining a square root) produces a new descriptor whose parent is the
// old one; elements of an ancestor are lifted implicitly when they meet
// elements of a descendant in arithmetic.

#include <gmpxx.h>

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace ellhomog {

enum class FieldKind { RationalTower, Finite };

inline constexpr int kDefaultMaxDepth = 8;

class FieldDescriptor;
using Field = std::shared_ptr<const FieldDescriptor>;

using RationalCoords = std::vector<mpq_class>;
using FiniteCoords = std::vector<std::uint32_t>;

class FieldDescriptor {
 public:
  static Field rationals(int max_depth = kDefaultMaxDepth);
  // GF(p^m) with the least monic irreducible modulus of degree m.
  static Field galois(std::uint32_t p, int m = 1, int max_depth = kDefaultMaxDepth);

  FieldKind kind() const { return kind_; }
  bool is_finite() const { return kind_ == FieldKind::Finite; }
  // 0 for the rational tower.
  std::uint32_t characteristic() const { return p_; }
  int degree() const { return m_; }
  std::uint64_t order() const;
  // Number of extension steps taken from the base field.
  int depth() const { return depth_; }
  int max_depth() const { return max_depth_; }
  const Field& parent() const { return parent_; }

  // radicands()[k] is a coordinate vector at depth k; its square root is the
  // (k+1)-th generator.  Coordinate index bit k selects that generator.
  const std::vector<RationalCoords>& radicands() const { return radicands_; }
  // Coefficients c_0..c_{m-1} of the monic modulus x^m + ... + c_0.
  const FiniteCoords& modulus() const { return modulus_; }
  // Image of the parent's generator x in this field (finite extensions only).
  const FiniteCoords& parent_generator_image() const { return embedding_; }

  std::size_t coordinate_count() const;
  // True if `other` is this descriptor or one of its ancestors.
  bool extends(const FieldDescriptor& other) const;

  std::string name() const;

  // Same field up to structure: pointer identity is not required.
  bool same_as(const FieldDescriptor& other) const;

  // One radicand more; the caller guarantees it is a non-square in `base`.
  static Field with_radicand(const Field& base, RationalCoords radicand);
  // GF(p^{2m}) together with the embedding of `base`.
  static Field quadratic_extension(const Field& base);

 private:
  FieldDescriptor() = default;

  FieldKind kind_ = FieldKind::RationalTower;
  std::uint32_t p_ = 0;
  int m_ = 1;
  int depth_ = 0;
  int max_depth_ = kDefaultMaxDepth;
  Field parent_;
  std::vector<RationalCoords> radicands_;
  FiniteCoords modulus_;
  FiniteCoords embedding_;
};

class FieldElement {
 public:
  FieldElement() = default;
  FieldElement(Field field, RationalCoords coords);
  FieldElement(Field field, FiniteCoords coords);

  static FieldElement zero(const Field& field);
  static FieldElement one(const Field& field);
  static FieldElement from_int(const Field& field, long long value);
  static FieldElement from_rational(const Field& field, const mpq_class& value);
  // Finite fields: inverse of encoding().
  static FieldElement from_encoding(const Field& field, std::uint64_t code);

  bool valid() const { return static_cast<bool>(field_); }
  const Field& field() const { return field_; }
  bool is_zero() const;

  FieldElement lifted(const Field& target) const;

  FieldElement operator-() const;
  FieldElement inverse() const;
  FieldElement pow(long long exponent) const;

  FieldElement& operator+=(const FieldElement& rhs);
  FieldElement& operator-=(const FieldElement& rhs);
  FieldElement& operator*=(const FieldElement& rhs);
  FieldElement& operator/=(const FieldElement& rhs);

  friend FieldElement operator+(FieldElement lhs, const FieldElement& rhs) { return lhs += rhs; }
  friend FieldElement operator-(FieldElement lhs, const FieldElement& rhs) { return lhs -= rhs; }
  friend FieldElement operator*(FieldElement lhs, const FieldElement& rhs) { return lhs *= rhs; }
  friend FieldElement operator/(FieldElement lhs, const FieldElement& rhs) { return lhs /= rhs; }
  friend bool operator==(const FieldElement& lhs, const FieldElement& rhs);
  friend bool operator!=(const FieldElement& lhs, const FieldElement& rhs) { return !(lhs == rhs); }

  const RationalCoords& rational_coordinates() const { return q_; }
  const FiniteCoords& finite_coordinates() const { return f_; }
  // Little-endian base-p integer of the polynomial coordinates.
  std::uint64_t encoding() const;
  std::vector<std::string> coordinate_strings() const;
  std::string to_string() const;
  // The value as a rational, when it lies in the base field Q.
  std::optional<mpq_class> as_rational() const;

 private:
  Field field_;
  RationalCoords q_;
  FiniteCoords f_;
};

// Canonical square root inside x's own field, if one exists.  Towers choose
// the root whose first nonzero coordinate is positive; finite fields the root
// with the smaller encoding.
std::optional<FieldElement> square_root(const FieldElement& x);

struct SqrtExtension {
  FieldElement root;
  Field field;
};

// Square root of x, extending `field` by one step when x is not a square there.
// Throws BoundExceeded when the extension would pass field->max_depth().
SqrtExtension sqrt_extend(const FieldElement& x, const Field& field);

// Least monic irreducible polynomial of degree m over GF(p), ordered by the
// encoding of its lower coefficients.  Returns c_0..c_{m-1}.
FiniteCoords least_irreducible(std::uint32_t p, int m);

// The deeper of the two fields; throws UsageError if neither extends the other.
Field common_field(const Field& a, const Field& b);

}  // namespace ellhomog
