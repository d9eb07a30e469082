#pragma once

// Explicit space (V, (,), Q) with a unipotent isometry g rebuilt from a Gram
// table, adapted collections inside it, the two flags attached to g and the
// intertwiner between two such isometries.

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "ellhomog/field.hpp"
#include "ellhomog/gram.hpp"
#include "ellhomog/matrix.hpp"
#include "ellhomog/shapes.hpp"

namespace ellhomog {

enum class FormKind {
  Symplectic,      // alternating form, Q = 0, characteristic != 2
  OrthogonalOdd,   // Q(x) = (x, x) / 2, characteristic != 2
  OrthogonalChar2  // Q given on the basis, polar form alternating
};

std::string form_kind_name(FormKind kind);

struct QuadSpace {
  FormKind kind = FormKind::Symplectic;
  ExactMatrix gram;      // (e_u, e_v)
  Vector q_basis;        // Q(e_u); used for OrthogonalChar2

  std::size_t dim() const { return gram.rows(); }
  bool has_q() const { return kind != FormKind::Symplectic; }
  FieldElement form(const Vector& x, const Vector& y) const;
  FieldElement q(const Vector& x) const;
  // Basis of the radical of the form.
  ExactMatrix radical() const;
};

struct IsometryModel {
  ShapeSeq shape;
  Mode mode = Mode::SymplecticOrChar2;
  std::shared_ptr<GramTable> table;
  QuadSpace space;
  ExactMatrix g;
  ExactMatrix g_inv;
  std::vector<IndexPair> index;  // standard basis order
  std::vector<int> jordan;       // of g - 1, descending

  const Field& field() const { return g.field(); }
  std::size_t dim() const { return index.size(); }
  // Position of basis vector e^t_i.
  std::size_t position(int t, int i) const;
  Vector basis_vector(int t, int i) const;
};

struct ModelOptions {
  // |delta| window of the underlying table; default covers the adapted and
  // round-trip windows, 6 p_1 + 4.
  std::optional<int> window;
};

// Throws UsageError for invalid shape/mode/field combinations and
// VerificationFailed if any invariant of the result fails.
IsometryModel build_model(const ShapeSeq& shape, Mode mode, const Field& field, const ModelOptions& options = {});

// Adapted collections are stored by their generators w^t_0; w^t_i = g^i w^t_0.
struct Collection {
  ExactMatrix g;
  std::vector<Vector> generators;  // t = 1..sigma+kappa
};

Collection canonical_collection(const IsometryModel& model);
// w^t_0 -> eps_t w^t_0
Collection sign_flipped(const Collection& c, const std::vector<int>& eps);
// Image under h: g -> h g h^{-1}, w -> h w.
Collection conjugated(const Collection& c, const ExactMatrix& h);

// Cached evaluation of w^t_i for any integer i.
class CollectionView {
 public:
  explicit CollectionView(const Collection& c);
  const Vector& at(int t, int i);
  const Collection& collection() const { return c_; }

 private:
  Collection c_;
  ExactMatrix g_inv_;
  std::map<IndexPair, Vector> cache_;
};

Vector extend_index(const IsometryModel& model, int t, int i);

struct CheckReport {
  bool pass = true;
  std::vector<std::string> failures;  // first few violations with witnesses
  void fail(std::string what);
};

// Clauses (a)-(f) over i, j in [-2p_1, 4p_1].
CheckReport check_adapted(const IsometryModel& model, const Collection& collection);

// (extend_index(t,i), extend_index(r,j)) = value(t, r, i - j) over the window.
CheckReport round_trip_check(const IsometryModel& model);

struct IsoFlag {
  std::vector<ExactMatrix> spaces;  // spaces[i] has i independent columns, i = 0..nu
};

struct FlagPair {
  IsoFlag v;
  IsoFlag v_prime;
};

// Throws VerificationFailed ("isotropy violation") if a constructed V_i fails.
FlagPair flags_from(const IsometryModel& model, const Collection& collection);
FlagPair flags_from(const IsometryModel& model);

// Q and the form vanish on V_i and V_i^perp = V_{nu-i} for i <= n; nested with
// the right dimensions.
CheckReport check_iso_flag(const QuadSpace& space, const IsoFlag& flag, int n);
bool position_check(const IsoFlag& v, const IsoFlag& v_prime, const ShapeSeq& shape);
// g V_i = V'_i for every i.
bool maps_flag(const ExactMatrix& g, const IsoFlag& v, const IsoFlag& v_prime);

// Standard index set with one more index per block, (t, i) for i in
// [0, block_length(t)]; pairings on it also pin down the image of g.
std::vector<IndexPair> gram_data_index(const ShapeSeq& shape);
// Pairings of a collection over gram_data_index.
ExactMatrix collection_gram(const IsometryModel& model, const Collection& collection);

// Signs eps with (eps_t a^t_i, eps_r a^r_j) = b-values; nullopt if none exist.
std::optional<std::vector<int>> normalize_signs(const IsometryModel& model, const ExactMatrix& a_gram,
                                                const ExactMatrix& b_gram);

struct IntertwinerReport {
  ExactMatrix T;
  std::vector<int> eps;
  bool isometry = false;
  bool intertwines = false;
  bool fixes_v = false;
  bool fixes_v_prime = false;
  // "yes", "negated" (T replaced by -T to land in the identity component)
  // or "no".
  std::string identity_component;
  FieldElement determinant;
  bool in_identity_component() const;
  bool all() const { return isometry && intertwines && fixes_v && fixes_v_prime && in_identity_component(); }
};

// T with T(w^t_i) = w~^t_i after normalising the signs of B.  Throws
// VerificationFailed if a conclusion fails or the signs are incompatible.
IntertwinerReport build_T(const IsometryModel& model, const Collection& a, const Collection& b);

// Central -1 lies in the identity component of Is(V).
bool central_in_identity_component(const IsometryModel& model);

// Orthogonal-odd: cut at r with psi(r) = -1; symplectic-or-char2: any r in
// [1, sigma].  Checks stability, perpendicularity, W' = W^perp and the
// Jordan types of the restrictions (and pairwise orthogonal blocks X_t in
// symplectic-or-char2 mode).
CheckReport split_check(const IsometryModel& model, int r);

// Matrix of op restricted to the op-stable span of basis columns.
ExactMatrix restrict_to(const ExactMatrix& op, const ExactMatrix& basis);

}  // namespace ellhomog
