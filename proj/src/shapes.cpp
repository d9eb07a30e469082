#include "ellhomog/shapes.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>

#include "ellhomog/errors.hpp"

namespace ellhomog {

std::string mode_name(Mode mode) {
  return mode == Mode::SymplecticOrChar2 ? "symplectic-or-char2" : "orthogonal-odd";
}

Mode parse_mode(const std::string& text) {
  if (text == "symplectic-or-char2" || text == "symplectic" || text == "char2" || text == "sp") {
    return Mode::SymplecticOrChar2;
  }
  if (text == "orthogonal-odd" || text == "orthogonal" || text == "so") return Mode::OrthogonalOdd;
  throw UsageError("unknown mode '" + text + "'");
}

ShapeSeq::ShapeSeq(std::vector<int> parts, int kappa) : parts_(std::move(parts)), kappa_(kappa) {
  if (parts_.empty()) throw UsageError("shape needs at least one part");
  if (kappa_ != 0 && kappa_ != 1) throw UsageError("kappa must be 0 or 1");
  for (std::size_t i = 0; i < parts_.size(); ++i) {
    if (parts_[i] < 1) throw UsageError("parts must be >= 1");
    if (i > 0 && parts_[i] > parts_[i - 1]) throw UsageError("parts must be weakly decreasing");
  }
}

ShapeSeq ShapeSeq::parse(const std::string& text, int kappa) {
  std::vector<int> parts;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item.erase(std::remove_if(item.begin(), item.end(), ::isspace), item.end());
    if (item.empty()) throw UsageError("empty part in shape '" + text + "'");
    std::size_t used = 0;
    int v = 0;
    try {
      v = std::stoi(item, &used);
    } catch (const std::exception&) {
      throw UsageError("bad part '" + item + "' in shape");
    }
    if (used != item.size()) throw UsageError("bad part '" + item + "' in shape");
    parts.push_back(v);
  }
  return ShapeSeq(std::move(parts), kappa);
}

int ShapeSeq::n() const { return std::accumulate(parts_.begin(), parts_.end(), 0); }

int ShapeSeq::p(int t) const {
  if (t < 1 || t > sigma()) throw UsageError("part index " + std::to_string(t) + " out of range");
  return parts_[static_cast<std::size_t>(t - 1)];
}

int ShapeSeq::block_length(int t) const {
  if (t == sigma() + 1 && kappa_ == 1) return 1;
  return 2 * p(t);
}

Level ShapeSeq::level_of(int t) const {
  if (t == sigma() + 1) return Level::half();
  return Level::integer(p(t));
}

bool ShapeSeq::above(int t, const Level& level) const {
  if (t == sigma() + 1) return false;
  return level.is_half() || p(t) > level.value;
}

bool ShapeSeq::valid_for(Mode mode) const {
  return !(mode == Mode::OrthogonalOdd && kappa_ == 0 && kappa_sigma() != 0);
}

void ShapeSeq::validate(Mode mode) const {
  if (!valid_for(mode)) {
    throw UsageError("orthogonal-odd mode with kappa = 0 requires an even number of parts (shape " + to_string() +
                     ")");
  }
}

std::string ShapeSeq::to_string() const {
  std::ostringstream os;
  os << "(";
  for (std::size_t i = 0; i < parts_.size(); ++i) os << (i ? "," : "") << parts_[i];
  os << ")";
  if (kappa_) os << "+k";
  return os.str();
}

PsiVector psi(const ShapeSeq& shape) {
  const int sigma = shape.sigma();
  PsiVector out;
  for (int t = 1; t <= sigma; ++t) {
    int value = 0;
    if (t % 2 == 1) {
      bool ok = true;
      for (int x = 1; x < t; ++x) ok = ok && shape.p(t) < shape.p(x);
      if (ok) value = 1;
    } else {
      bool ok = true;
      for (int x = t + 1; x <= sigma; ++x) ok = ok && shape.p(x) < shape.p(t);
      if (ok) value = -1;
    }
    out.values.push_back(value);
  }
  return out;
}

std::vector<int> jordan_prediction(const ShapeSeq& shape, Mode mode) {
  shape.validate(mode);
  std::vector<int> sizes;
  if (mode == Mode::SymplecticOrChar2) {
    for (int p : shape.parts()) sizes.push_back(2 * p);
    if (shape.kappa() == 1) sizes.push_back(1);
  } else {
    const PsiVector ps = psi(shape);
    for (int t = 1; t <= shape.sigma(); ++t) sizes.push_back(2 * shape.p(t) + ps.at(t));
    if (shape.kappa() == 1 && shape.kappa_sigma() == 0) sizes.push_back(1);
  }
  std::sort(sizes.rbegin(), sizes.rend());
  return sizes;
}

std::optional<PiWindow> pi_window(const ShapeSeq& shape, const Level& level) {
  const int sigma = shape.sigma();
  int b = 0;
  if (level.is_half()) {
    if (shape.kappa() != 1) throw UsageError("level 1/2 needs kappa = 1");
    b = sigma;
  } else {
    const auto& parts = shape.parts();
    if (std::find(parts.begin(), parts.end(), level.value) == parts.end()) {
      throw UsageError("level " + level.label() + " is not a part of " + shape.to_string());
    }
    if (shape.p(1) == level.value) return std::nullopt;
    for (int t = 1; t <= sigma; ++t) {
      if (shape.p(t) > level.value) b = t;
    }
  }
  const PsiVector ps = psi(shape);
  int a = 0;
  for (int t = 1; t <= b; t += 2) {
    if (ps.at(t) == 1 && shape.above(t, level)) a = t;
  }
  if (a == 0) throw VerificationFailed("no window start for level " + level.label() + " in " + shape.to_string());
  return PiWindow{a, b, level};
}

std::vector<Level> levels_descending(const ShapeSeq& shape) {
  std::vector<Level> out;
  for (int p : shape.parts()) {
    if (out.empty() || out.back().value != p) out.push_back(Level::integer(p));
  }
  if (shape.kappa() == 1) out.push_back(Level::half());
  return out;
}

mpz_class binomial(long long n, long long k) {
  if (k < 0 || n < 0 || k > n) return 0;
  mpz_class r;
  mpz_bin_uiui(r.get_mpz_t(), static_cast<unsigned long>(n), static_cast<unsigned long>(k));
  return r;
}

long long binomial_nk(int pi, int k) {
  if (pi < 1) throw UsageError("n_k needs an integer level >= 1");
  if (k < 0 || k > 2 * pi) throw UsageError("n_k index out of range");
  const long long c = binomial(2 * pi, k).get_si();
  return k % 2 == 0 ? c : -c;
}

namespace {

mpq_class falling_from(int start, int count) {
  mpq_class acc = 1;
  for (int i = 0; i < count; ++i) acc *= start + i;
  return acc;
}

mpq_class factorial(int u) { return falling_from(1, u); }

std::vector<mpq_class> mul_series(const std::vector<mpq_class>& a, const std::vector<mpq_class>& b, int degree) {
  std::vector<mpq_class> out(static_cast<std::size_t>(degree) + 1, mpq_class(0));
  for (std::size_t i = 0; i < a.size() && i <= static_cast<std::size_t>(degree); ++i) {
    for (std::size_t j = 0; j < b.size() && i + j <= static_cast<std::size_t>(degree); ++j) {
      out[i + j] += a[i] * b[j];
    }
  }
  return out;
}

std::vector<mpq_class> invert_series(const std::vector<mpq_class>& a, int degree) {
  std::vector<mpq_class> inv(static_cast<std::size_t>(degree) + 1, mpq_class(0));
  inv[0] = 1 / a[0];
  for (int m = 1; m <= degree; ++m) {
    mpq_class acc = 0;
    for (int k = 1; k <= m && k < static_cast<int>(a.size()); ++k) acc += a[static_cast<std::size_t>(k)] * inv[static_cast<std::size_t>(m - k)];
    inv[static_cast<std::size_t>(m)] = -acc / a[0];
  }
  return inv;
}

// (1-T)^{-M}, times (1+T) when asked, by explicit series division.
std::vector<mpq_class> rhs_series(int M, bool with_one_plus_t, int degree) {
  std::vector<mpq_class> one_minus{mpq_class(1), mpq_class(-1)};
  std::vector<mpq_class> power{mpq_class(1)};
  for (int i = 0; i < M; ++i) power = mul_series(power, one_minus, M);
  std::vector<mpq_class> s = invert_series(power, degree);
  if (with_one_plus_t) s = mul_series(s, {mpq_class(1), mpq_class(1)}, degree);
  return s;
}

}  // namespace

mpq_class two_pole_coefficient(int M, int u) {
  if (u == 0) return 1;
  return falling_from(M, u - 1) * (M + 2 * u - 1) / factorial(u);
}

mpq_class two_pole_coefficient_as_printed(int M, int u) {
  if (u == 0) return 1;
  return falling_from(M + 1, u - 1) * (M + 2 * u - 1) / factorial(u);
}

bool verify_series_identity(SeriesIdentity which, int M, int degree) {
  if (M < 1 || (which == SeriesIdentity::TwoPole && M < 2)) throw UsageError("series identity needs larger M");
  if (degree < 0) throw UsageError("negative degree");
  const bool two_pole = which == SeriesIdentity::TwoPole;
  const std::vector<mpq_class> rhs = rhs_series(M, two_pole, degree);
  for (int u = 0; u <= degree; ++u) {
    // C(M+u-1, u) as the rising product M (M+1) ... (M+u-1) / u!
    const mpq_class lhs = two_pole ? two_pole_coefficient(M, u) : falling_from(M, u) / factorial(u);
    if (lhs != rhs[static_cast<std::size_t>(u)]) return false;
  }
  return true;
}

bool verify_two_pole_as_printed(int M, int degree) {
  const std::vector<mpq_class> rhs = rhs_series(M, true, degree);
  for (int u = 0; u <= degree; ++u) {
    if (two_pole_coefficient_as_printed(M, u) != rhs[static_cast<std::size_t>(u)]) return false;
  }
  return true;
}

namespace {

void partitions_rec(int remaining, int max_part, std::vector<int>& cur, std::vector<std::vector<int>>& out) {
  if (remaining == 0) {
    out.push_back(cur);
    return;
  }
  for (int p = std::min(remaining, max_part); p >= 1; --p) {
    cur.push_back(p);
    partitions_rec(remaining - p, p, cur, out);
    cur.pop_back();
  }
}

}  // namespace

std::vector<std::vector<int>> partitions_of(int n) {
  std::vector<std::vector<int>> out;
  std::vector<int> cur;
  if (n >= 1) partitions_rec(n, n, cur, out);
  return out;
}

std::vector<ShapeSeq> shapes_up_to(int max_n, Mode mode) {
  std::vector<ShapeSeq> out;
  for (int n = 1; n <= max_n; ++n) {
    for (const auto& parts : partitions_of(n)) {
      for (int kappa : {0, 1}) {
        ShapeSeq s(parts, kappa);
        if (s.valid_for(mode)) out.push_back(s);
      }
    }
  }
  return out;
}

}  // namespace ellhomog
