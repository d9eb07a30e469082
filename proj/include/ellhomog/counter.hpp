#pragma once

// Brute-force counting over small finite classical groups: group closure,
// isotropic flags, unipotent classes by Jordan type and the number of pairs
// (g, B) with (B, gB) in a prescribed relative position.
//
// Matrices here use a compact table-driven GF(q) kernel; the exact routines
// of matrix.hpp serve as the cross-check in tests.

#include <gmpxx.h>

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "ellhomog/field.hpp"
#include "ellhomog/matrix.hpp"
#include "ellhomog/shapes.hpp"

namespace ellhomog {

constexpr int kMaxSmallDim = 7;
constexpr int kMaxSmallQ = 7;
constexpr std::size_t kGroupCap = 1000000;

// GF(q) by lookup tables; element codes agree with FieldElement::encoding().
class SmallField {
 public:
  SmallField() = default;
  explicit SmallField(int q);
  int q() const { return q_; }
  int p() const { return p_; }
  const Field& exact() const { return exact_; }
  std::uint8_t add(std::uint8_t a, std::uint8_t b) const { return add_[a * q_ + b]; }
  std::uint8_t mul(std::uint8_t a, std::uint8_t b) const { return mul_[a * q_ + b]; }
  std::uint8_t neg(std::uint8_t a) const { return neg_[a]; }
  std::uint8_t inv(std::uint8_t a) const { return inv_[a]; }
  std::uint8_t sub(std::uint8_t a, std::uint8_t b) const { return add(a, neg(b)); }
  std::uint8_t from_int(long long v) const;
  // Multiplicative generator.
  std::uint8_t primitive() const { return primitive_; }

 private:
  int q_ = 0;
  int p_ = 0;
  Field exact_;
  std::vector<std::uint8_t> add_, mul_, neg_, inv_;
  std::uint8_t primitive_ = 1;
};

using SVec = std::array<std::uint8_t, kMaxSmallDim>;

struct SmallMat {
  std::array<std::uint8_t, kMaxSmallDim * kMaxSmallDim> e{};
  std::uint8_t& at(int i, int j) { return e[static_cast<std::size_t>(i * kMaxSmallDim + j)]; }
  std::uint8_t at(int i, int j) const { return e[static_cast<std::size_t>(i * kMaxSmallDim + j)]; }
  friend bool operator==(const SmallMat& a, const SmallMat& b) { return a.e == b.e; }
};

struct SmallMatHash {
  std::size_t operator()(const SmallMat& m) const;
};

enum class SpaceKind { TypeA, Symplectic, OrthogonalOdd, OrthogonalEven };

std::string space_kind_name(SpaceKind kind);

struct FiniteFormSpace {
  SpaceKind kind = SpaceKind::TypeA;
  int q = 0;
  int nu = 0;
  SmallField field;
  SmallMat gram;   // (x, y) = x^T gram y
  SmallMat qform;  // upper triangular, Q(x) = sum_{i <= j} qform_ij x_i x_j

  std::uint8_t form(const SVec& x, const SVec& y) const;
  std::uint8_t quad(const SVec& x) const;
  bool has_form() const { return kind != SpaceKind::TypeA; }
  bool has_q() const { return kind == SpaceKind::OrthogonalOdd || kind == SpaceKind::OrthogonalEven; }
  // Half the dimension of a maximal isotropic subspace (n for type A is nu).
  int rank() const;
};

// Antidiagonal standard forms.  Throws BoundExceeded past nu <= 7, q <= 7 and
// UsageError for orthogonal spaces in characteristic 2 or odd symplectic nu.
FiniteFormSpace make_space(SpaceKind kind, int nu, int q);

// Exact-algebra images, for cross-checks.
ExactMatrix to_exact(const FiniteFormSpace& space, const SmallMat& m);
SmallMat from_exact(const FiniteFormSpace& space, const ExactMatrix& m);

SmallMat small_identity(int nu);
SmallMat small_mul(const FiniteFormSpace& space, const SmallMat& a, const SmallMat& b);
SVec small_apply(const FiniteFormSpace& space, const SmallMat& m, const SVec& x);
int small_rank(const FiniteFormSpace& space, std::vector<SVec> rows);
bool preserves_form(const FiniteFormSpace& space, const SmallMat& m);
// Descending block sizes of m - 1; nullopt if m is not unipotent.
std::optional<std::vector<int>> unipotent_jordan(const FiniteFormSpace& space, const SmallMat& m);

// |GL_nu|, |Sp_nu|, |SO_nu| of the space.
mpz_class classical_order(const FiniteFormSpace& space);

struct GroupEnum {
  std::vector<SmallMat> generators;
  std::vector<SmallMat> elements;
  mpz_class order() const { return mpz_class(static_cast<unsigned long>(elements.size())); }
};

// Breadth-first closure; throws BoundExceeded past kGroupCap and
// VerificationFailed if the order differs from classical_order.
GroupEnum enumerate_group(const FiniteFormSpace& space);

struct FiniteFlag {
  // basis[k] extends V_k to V_{k+1} for k < rank(); type A uses all nu.
  std::vector<SVec> basis;
  std::vector<std::vector<SVec>> spaces;  // row bases of V_0 .. V_nu
};

// All complete flags (type A) or all isotropic flags with V_{nu-i} = V_i^perp.
// The count is checked against |G| / |B|.
std::vector<FiniteFlag> enumerate_isotropic_flags(const FiniteFormSpace& space);
mpz_class expected_flag_count(const FiniteFormSpace& space);

std::vector<SmallMat> unipotents_of_type(const FiniteFormSpace& space, const GroupEnum& group,
                                         const std::vector<int>& target);

// w with dim(V_i cap V'_j) = #{k <= j : w(k) <= i}; entry k-1 holds w(k).
std::vector<int> relative_position_typeA(const FiniteFormSpace& space, const FiniteFlag& a, const FiniteFlag& b);
// w(k) = k + 1, w(n) = 1.
std::vector<int> coxeter_cycle(int n);

// The dimension conditions between V_* = flag and V'_* = g flag.
bool position_holds(const FiniteFormSpace& space, const ShapeSeq& shape, const FiniteFlag& flag, const SmallMat& g);

struct Coxeter {};
using PositionSpec = std::variant<Coxeter, ShapeSeq>;

// |PGL_{n+1}(q)|, |SO_{2n+1}(q)|, |PSp_{2n}(q)| for type 'A', 'B', 'C'.
mpz_class adjoint_order(char type, int n, int q);

struct CountOptions {
  int jobs = 0;         // 0: OpenMP default
  bool serial = false;  // use the serial reference loop
  bool per_g = false;   // keep per-element subcounts
};

struct CountResult {
  SpaceKind kind = SpaceKind::TypeA;
  int q = 0;
  int nu = 0;
  std::vector<int> gamma;
  std::size_t group_order = 0;
  std::size_t unipotents = 0;
  std::size_t flags = 0;
  unsigned long long count = 0;
  unsigned long long flag_outer_count = 0;  // same set, flags outside
  std::optional<mpz_class> adjoint;         // absent for even orthogonal spaces
  bool equals_adjoint = false;
  bool double_count_agrees = false;
  std::vector<unsigned long long> per_g;
};

CountResult count_pairs(const FiniteFormSpace& space, const PositionSpec& spec, const std::vector<int>& gamma,
                        const CountOptions& options = {});

// Shared tables for the kernels below; count_pairs builds one.
struct CountingTables {
  FiniteFormSpace space;
  PositionSpec spec;
  std::vector<FiniteFlag> flags;
  std::vector<SmallMat> elements;
};

CountingTables prepare_counting(const FiniteFormSpace& space, const PositionSpec& spec, const std::vector<int>& gamma);
bool in_position(const CountingTables& tables, const FiniteFlag& flag, const SmallMat& g);
// g outside, flags inside.
unsigned long long count_serial(const CountingTables& tables, std::vector<unsigned long long>* per_g = nullptr);
unsigned long long count_parallel(const CountingTables& tables, int jobs,
                                  std::vector<unsigned long long>* per_g = nullptr);
// flags outside, g inside.
unsigned long long count_flag_outer(const CountingTables& tables);

// Adjoint type letter and rank for the space: GL_nu -> ('A', nu-1), Sp_2n ->
// ('C', n), SO_2n+1 -> ('B', n).  nullopt for even orthogonal spaces.
std::optional<std::pair<char, int>> adjoint_type(const FiniteFormSpace& space);

}  // namespace ellhomog
