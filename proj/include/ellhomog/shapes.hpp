#pragma once

// Shape sequences p_1 >= ... >= p_sigma with the marker kappa, the sign
// function psi, Jordan-type predictions, level windows and the binomials n_k.

#include <gmpxx.h>

#include <optional>
#include <string>
#include <vector>

namespace ellhomog {

enum class Mode { SymplecticOrChar2, OrthogonalOdd };

std::string mode_name(Mode mode);
Mode parse_mode(const std::string& text);

// A part value, or the virtual level 1/2 carried by the extra index sigma+1.
struct Level {
  enum class Kind { Integer, Half };
  Kind kind = Kind::Integer;
  int value = 0;  // meaningful for Integer only

  static Level integer(int v) { return {Kind::Integer, v}; }
  static Level half() { return {Kind::Half, 0}; }
  bool is_half() const { return kind == Kind::Half; }
  // 2*level, an integer in both cases.
  int twice() const { return is_half() ? 1 : 2 * value; }
  std::string label() const { return is_half() ? "1/2" : std::to_string(value); }
  friend bool operator==(const Level&, const Level&) = default;
};

class ShapeSeq {
 public:
  ShapeSeq() = default;
  ShapeSeq(std::vector<int> parts, int kappa);
  // "3,2,2,1"
  static ShapeSeq parse(const std::string& text, int kappa);

  const std::vector<int>& parts() const { return parts_; }
  int kappa() const { return kappa_; }
  int sigma() const { return static_cast<int>(parts_.size()); }
  int n() const;
  int nu() const { return 2 * n() + kappa_; }
  int kappa_sigma() const { return sigma() % 2; }
  // Number of indices carrying basis vectors: sigma + kappa.
  int index_count() const { return sigma() + kappa_; }

  // 1-based part; p(sigma+1) is not an integer, use level_of.
  int p(int t) const;
  // 2 p_t, and 1 for the virtual index sigma+1.
  int block_length(int t) const;
  Level level_of(int t) const;
  // Comparison p_t > level, valid for t in [1, sigma+1].
  bool above(int t, const Level& level) const;

  // Throws UsageError when the shape is not allowed in `mode`.
  void validate(Mode mode) const;
  bool valid_for(Mode mode) const;
  std::string to_string() const;

  friend bool operator==(const ShapeSeq&, const ShapeSeq&) = default;

 private:
  std::vector<int> parts_;
  int kappa_ = 0;
};

// psi(1..sigma), stored 0-based.
struct PsiVector {
  std::vector<int> values;
  int at(int t) const { return values.at(static_cast<std::size_t>(t - 1)); }
};

PsiVector psi(const ShapeSeq& shape);

// Descending block sizes.
std::vector<int> jordan_prediction(const ShapeSeq& shape, Mode mode);

struct PiWindow {
  int a = 0;
  int b = 0;
  Level level;
};

// nullopt exactly when p_1 equals the level.  Throws UsageError when the level
// does not occur in the shape.
std::optional<PiWindow> pi_window(const ShapeSeq& shape, const Level& level);

// Distinct levels in strictly decreasing order, ending with 1/2 when kappa = 1.
std::vector<Level> levels_descending(const ShapeSeq& shape);

// n_k = (-1)^k C(2 pi, k)
long long binomial_nk(int pi, int k);
mpz_class binomial(long long n, long long k);

enum class SeriesIdentity { NegativeBinomial, TwoPole };

// Coefficient of T^u on the left side of the two-pole identity:
// M (M+1) ... (M+u-2) (M+2u-1) / u!, and 1 at u = 0.
mpq_class two_pole_coefficient(int M, int u);
// The same product started at M+1, as printed in the general statement.
mpq_class two_pole_coefficient_as_printed(int M, int u);

bool verify_series_identity(SeriesIdentity which, int M, int degree);
// Compare the as-printed two-pole left side with (1+T)(1-T)^{-M}.
bool verify_two_pole_as_printed(int M, int degree);

// All partitions of n in descending part order, listed in reverse
// lexicographic order.
std::vector<std::vector<int>> partitions_of(int n);

// Every shape 1 <= sum(p) <= max_n, both kappa, valid for `mode`.
std::vector<ShapeSeq> shapes_up_to(int max_n, Mode mode);

}  // namespace ellhomog
