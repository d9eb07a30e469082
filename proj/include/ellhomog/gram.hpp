#pragma once

// Canonical pairing tables value(t, r, delta) = (w^t_i, w^r_j) with delta = i - j.
//
// Symplectic-or-char2 mode uses the Jordan-block recursion (closed forms are
// kept separately as oracles).  Orthogonal-odd mode runs the level-by-level
// recursion: levels are processed in decreasing order, each strictly lower
// level reading only values already fixed above it.  Square roots taken
// along the way may extend the field; all of them are taken at construction
// so field() is final once the constructor returns.

#include <gmpxx.h>

#include <cstdlib>
#include <map>
#include <optional>
#include <string>
#include <tuple>
#include <unordered_map>
#include <utility>
#include <vector>

#include "ellhomog/field.hpp"
#include "ellhomog/matrix.hpp"
#include "ellhomog/shapes.hpp"

namespace ellhomog {

// Which rule produces value(t, r, .) for t <= r.
enum class GramCase {
  JordanBlock,     // symplectic: same index t = r <= sigma
  VirtualDiagonal, // symplectic: t = r = sigma+1, the image of 2
  Orthogonal,      // symplectic: distinct indices, always 0
  Separated,       // p_t above the level with an even drop in between: 0
  HigherBlock,     // p_t above the level of r
  SelfOddWindow,   // t = r, window end b odd
  SelfEvenOrTop,   // t = r, b even or p_1 at the level
  SameLevel,       // t < r at one level
  VirtualEven,     // r = sigma+1, sigma even
  VirtualOdd,      // r = sigma+1, sigma odd
};

std::string gram_case_name(GramCase c);

using IndexPair = std::pair<int, int>;

struct AuxLevel {
  Level level;
  int a = 0;
  int b = 0;
  std::map<IndexPair, FieldElement> alpha;    // (r, h), h in [0, p_r - pi - 1]
  std::map<IndexPair, FieldElement> beta;     // (r, j), j in [p_r - pi, 2p_r - 2pi - 1]
  std::map<IndexPair, FieldElement> a_tilde;  // (r, j), j in [0, 2p_r - 2pi - 1]
  std::map<int, FieldElement> nu;             // t in [a, b]
  FieldElement mu;
};

// Data of the virtual level when sigma is odd.
struct VirtualAux {
  int a = 0;
  std::vector<IndexPair> index;  // (r, i), r in [a, sigma], i in [0, 2p_r - 1]
  Vector c;
  FieldElement nu;
  FieldElement c0;  // sqrt(nu / 2)
};

struct GramDiagnostics {
  bool mu_zero_fallback = false;     // some nu_a vanished, mu set to 0
  bool singular_fallback = false;    // virtual-level system singular, c set to 0
  bool virtual_nu_zero = false;      // nu = 0 at the virtual level (c0 not invertible)
  bool any() const { return mu_zero_fallback || singular_fallback || virtual_nu_zero; }
};

class GramTable {
 public:
  // window: bound on |delta| accepted by value(); default 2p_1 + 2p_t + 2.
  GramTable(ShapeSeq shape, Mode mode, Field field, std::optional<int> window = std::nullopt);

  const ShapeSeq& shape() const { return shape_; }
  Mode mode() const { return mode_; }
  const Field& field() const { return field_; }
  int window_bound(int t) const;
  std::optional<int> window_override() const { return window_; }

  // Throws UsageError for bad indices and BoundExceeded outside the window.
  FieldElement value(int t, int r, int delta);

  GramCase classify(int t, int r) const;

  const std::vector<AuxLevel>& levels() const { return levels_; }
  const std::optional<VirtualAux>& virtual_level() const { return virtual_; }
  const GramDiagnostics& diagnostics() const { return diag_; }
  std::size_t memo_size() const { return memo_.size(); }

  // Substitute alpha and beta back into their defining equations; true when
  // every residual is exactly zero.
  bool aux_residuals_vanish();
  // Same for c against its linear system at the virtual level.
  bool virtual_residuals_vanish();

 private:
  struct KeyHash {
    std::size_t operator()(const std::tuple<int, int, int>& k) const {
      auto [a, b, c] = k;
      return (static_cast<std::size_t>(a) * 1315423911u) ^ (static_cast<std::size_t>(b) * 2654435761u) ^
             (static_cast<std::size_t>(c + 100000) * 40503u);
    }
  };

  FieldElement raw(int t, int r, int delta);
  FieldElement compute(int y, int x, int delta);
  FieldElement symplectic(int y, int x, int delta);

  FieldElement higher_block(int t, int x, int delta);
  FieldElement self_odd_window(int x, int D);
  FieldElement self_even_or_top(int x, int D);
  FieldElement same_level(int y, int x, int delta);
  FieldElement virtual_odd(int y, int delta);

  void build_level(const Level& level);
  void build_virtual();
  const AuxLevel& aux_for(int pi) const;

  FieldElement n_k(int pi, int k) const;
  FieldElement integer(long long v) const { return FieldElement::from_int(field_, v); }
  bool separated(int y, int x) const;

  ShapeSeq shape_;
  Mode mode_;
  Field field_;
  std::optional<int> window_;
  std::unordered_map<std::tuple<int, int, int>, FieldElement, KeyHash> memo_;
  std::vector<AuxLevel> levels_;
  std::optional<VirtualAux> virtual_;
  GramDiagnostics diag_;
};

// Basis order (t, i): t in [1, sigma+kappa], i in [0, block_length(t) - 1].
std::vector<IndexPair> standard_index(const ShapeSeq& shape);

// Matrix of value(t, r, i - j) over standard_index, in table.field().
ExactMatrix gram_matrix(GramTable& table);

enum class ClosedForm {
  JordanBinomial,  // C(2pi + s - 1, s): the symplectic value at |j - i| = pi + s
  SelfPairing,     // 2 (2pi+1)(2pi+2)...(2pi+s-1)(pi+s) / s!, s >= 1
  SameLevelPairing // 2 C(2pi + s, s)
};

mpq_class closed_form_value(ClosedForm which, int pi, int s);

// Symplectic value for one Jordan block by the binomial formula:
// sg(j - i) C(|j - i| + pi - 1, |j - i| - pi), zero inside the band.
mpz_class jordan_block_closed_form(int pi, int j_minus_i);

struct SquareCheck {
  int k = 0;
  FieldElement value;   // |^1_{2k} : ^2_1|
  FieldElement square;
  mpz_class expected;   // (-1)^{k-1} 2^{2k}
  bool matches = false;
};

// Shape (k, 1), kappa = 0, orthogonal-odd over the rational tower.
SquareCheck check_square_conjecture(int k, int max_depth = kDefaultMaxDepth);

}  // namespace ellhomog
