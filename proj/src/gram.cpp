#include "ellhomog/gram.hpp"

#include <algorithm>

#include "ellhomog/errors.hpp"

namespace ellhomog {

std::string gram_case_name(GramCase c) {
  switch (c) {
    case GramCase::JordanBlock: return "jordan-block";
    case GramCase::VirtualDiagonal: return "virtual-diagonal";
    case GramCase::Orthogonal: return "orthogonal";
    case GramCase::Separated: return "separated";
    case GramCase::HigherBlock: return "higher-block";
    case GramCase::SelfOddWindow: return "self-odd-window";
    case GramCase::SelfEvenOrTop: return "self-even-or-top";
    case GramCase::SameLevel: return "same-level";
    case GramCase::VirtualEven: return "virtual-even";
    case GramCase::VirtualOdd: return "virtual-odd";
  }
  return "?";
}

GramTable::GramTable(ShapeSeq shape, Mode mode, Field field, std::optional<int> window)
    : shape_(std::move(shape)), mode_(mode), field_(std::move(field)), window_(window) {
  shape_.validate(mode_);
  if (mode_ == Mode::OrthogonalOdd && field_->characteristic() == 2) {
    throw UsageError("orthogonal-odd tables need characteristic != 2");
  }
  if (mode_ == Mode::OrthogonalOdd) {
    for (const Level& level : levels_descending(shape_)) {
      if (level.is_half()) {
        if (shape_.sigma() % 2 == 1) build_virtual();
      } else if (level.value < shape_.p(1) && pi_window(shape_, level)->b % 2 == 1) {
        // With b even every pair above this level is separated, so its data
        // would never be read.
        build_level(level);
      }
    }
  }
}

int GramTable::window_bound(int t) const {
  if (window_) return *window_;
  return 2 * shape_.p(1) + shape_.block_length(t) + 2;
}

FieldElement GramTable::value(int t, int r, int delta) {
  const int top = shape_.index_count();
  if (t < 1 || t > top || r < 1 || r > top) {
    throw UsageError("index pair (" + std::to_string(t) + "," + std::to_string(r) + ") outside [1," +
                     std::to_string(top) + "]");
  }
  if (std::abs(delta) > window_bound(t)) {
    throw BoundExceeded("delta " + std::to_string(delta) + " outside window " + std::to_string(window_bound(t)));
  }
  return raw(t, r, delta).lifted(field_);
}

FieldElement GramTable::raw(int t, int r, int delta) {
  bool negate = false;
  if (t > r) {
    std::swap(t, r);
    delta = -delta;
    negate = mode_ == Mode::SymplecticOrChar2;
  }
  if (t == r && delta > 0) {
    delta = -delta;
    // the virtual index pairs to the image of 2 for every delta
    negate = mode_ == Mode::SymplecticOrChar2 && t != shape_.sigma() + 1;
  }
  const auto key = std::make_tuple(t, r, delta);
  auto it = memo_.find(key);
  if (it == memo_.end()) {
    FieldElement v = compute(t, r, delta);
    it = memo_.emplace(key, std::move(v)).first;
  }
  return negate ? -it->second : it->second;
}

bool GramTable::separated(int y, int x) const {
  if (!shape_.above(y, shape_.level_of(x))) return false;
  const int sigma = shape_.sigma();
  for (int r = y; r <= x - 1; ++r) {
    if (r % 2 != 0) continue;
    // p_{sigma+1} = 1/2 lies below every part
    if (r == sigma || shape_.p(r) > shape_.p(r + 1)) return true;
  }
  return false;
}

GramCase GramTable::classify(int t, int r) const {
  const int y = std::min(t, r), x = std::max(t, r);
  if (mode_ == Mode::SymplecticOrChar2) {
    if (y != x) return GramCase::Orthogonal;
    return x == shape_.sigma() + 1 ? GramCase::VirtualDiagonal : GramCase::JordanBlock;
  }
  const Level level = shape_.level_of(x);
  if (separated(y, x)) return GramCase::Separated;
  if (level.is_half()) return shape_.sigma() % 2 == 0 ? GramCase::VirtualEven : GramCase::VirtualOdd;
  if (shape_.above(y, level)) return GramCase::HigherBlock;
  if (y == x) {
    auto w = pi_window(shape_, level);
    return (w && w->b % 2 == 1) ? GramCase::SelfOddWindow : GramCase::SelfEvenOrTop;
  }
  return GramCase::SameLevel;
}

FieldElement GramTable::n_k(int pi, int k) const { return integer(binomial_nk(pi, k)); }

FieldElement GramTable::compute(int y, int x, int delta) {
  if (mode_ == Mode::SymplecticOrChar2) return symplectic(y, x, delta);
  switch (classify(y, x)) {
    case GramCase::Separated: return integer(0);
    case GramCase::VirtualEven: return integer(y == x ? 2 : 0);
    case GramCase::VirtualOdd: return virtual_odd(y, delta);
    case GramCase::HigherBlock: return higher_block(y, x, delta);
    case GramCase::SelfOddWindow: return self_odd_window(x, -delta);
    case GramCase::SelfEvenOrTop: return self_even_or_top(x, -delta);
    case GramCase::SameLevel: return same_level(y, x, delta);
    default: break;
  }
  throw VerificationFailed("no recursion case applies");
}

// Canonical call: y <= x and delta <= 0 on the diagonal.
FieldElement GramTable::symplectic(int y, int x, int delta) {
  switch (classify(y, x)) {
    case GramCase::Orthogonal: return integer(0);
    case GramCase::VirtualDiagonal: return integer(2);
    default: break;
  }
  const int pi = shape_.p(x);
  const int D = -delta;
  if (D < pi) return integer(0);
  if (D == pi) return integer(1);
  FieldElement acc = integer(0);
  for (int k = 1; k <= std::min(2 * pi, D - pi); ++k) acc -= n_k(pi, k) * raw(x, x, -(D - k));
  return acc;
}

const AuxLevel& GramTable::aux_for(int pi) const {
  for (const auto& l : levels_) {
    if (!l.level.is_half() && l.level.value == pi) return l;
  }
  throw VerificationFailed("auxiliary data for level " + std::to_string(pi) + " missing");
}

void GramTable::build_level(const Level& level) {
  const int pi = level.value;
  const auto w = pi_window(shape_, level);
  AuxLevel L;
  L.level = level;
  L.a = w->a;
  L.b = w->b;
  const int a = L.a, b = L.b;
  const int pa = shape_.p(a);
  auto p = [&](int r) { return shape_.p(r); };
  auto n = [&](int k) { return n_k(pi, k); };
  // sum_k n_k value(t, r, base + k)
  auto nsum = [&](int t, int r, int base) {
    FieldElement acc = integer(0);
    for (int k = 0; k <= 2 * pi; ++k) acc += n(k) * raw(t, r, base + k);
    return acc;
  };

  int H = 0;
  for (int r = a; r <= b; ++r) H = std::max(H, p(r) - pi);
  for (int h = 0; h <= H; ++h) {
    for (int r = b; r >= a; --r) {
      if (h > p(r) - pi - 1) continue;
      FieldElement rhs = -nsum(a, r, 2 * pa - 2 * pi - p(r) - h);
      for (int r2 = a; r2 <= b; ++r2) {
        for (int i = 0; i <= p(r2) - pi - 1 && i < h; ++i) rhs -= L.alpha.at({r2, i}) * nsum(r2, r, i - p(r) - h);
        for (int j = 1; j <= p(r2) - pi && j < h; ++j) {
          rhs -= L.beta.at({r2, 2 * p(r2) - 2 * pi - j}) * nsum(r2, r, 2 * p(r2) - 2 * pi - j - p(r) - h);
        }
      }
      for (int r2 = r + 1; r2 <= b; ++r2) {
        if (p(r2) == p(r)) rhs -= L.alpha.at({r2, h}) * raw(r2, r, -p(r));
      }
      L.alpha.emplace(IndexPair{r, h}, rhs);
    }
    if (h < 1) continue;
    for (int r = a; r <= b; ++r) {
      if (h > p(r) - pi) continue;
      FieldElement rhs = -nsum(a, r, 2 * pa - 2 * pi - p(r) + h);
      for (int r2 = a; r2 <= b; ++r2) {
        for (int i = 0; i <= p(r2) - pi - 1 && i < h - 1; ++i) {
          rhs -= L.alpha.at({r2, i}) * nsum(r2, r, i - p(r) + h);
        }
        for (int j = 1; j <= p(r2) - pi && j < h; ++j) {
          rhs -= L.beta.at({r2, 2 * p(r2) - 2 * pi - j}) * nsum(r2, r, 2 * p(r2) - 2 * pi - j - p(r) + h);
        }
      }
      for (int r2 = a; r2 < r; ++r2) {
        rhs -= L.beta.at({r2, 2 * p(r2) - 2 * pi - h}) * raw(r2, r, 2 * p(r2) - p(r));
      }
      L.beta.emplace(IndexPair{r, 2 * p(r) - 2 * pi - h}, rhs);
    }
  }
  for (int r = a; r <= b; ++r) {
    for (int j = 0; j < 2 * p(r) - 2 * pi; ++j) {
      L.a_tilde.emplace(IndexPair{r, j}, j < p(r) - pi ? L.alpha.at({r, j}) : L.beta.at({r, j}));
    }
  }
  for (int t = a; t <= b; ++t) {
    FieldElement v = nsum(a, t, 2 * pa - 2 * pi - (2 * p(t) - pi));
    for (int r = a; r <= b; ++r) {
      for (int i = 0; i < 2 * p(r) - 2 * pi; ++i) v += nsum(r, t, i - 2 * p(t) + pi) * L.a_tilde.at({r, i});
    }
    L.nu.emplace(t, v);
  }
  const FieldElement& nu_a = L.nu.at(a);
  if (nu_a.is_zero()) {
    diag_.mu_zero_fallback = true;
    L.mu = integer(0);
  } else {
    SqrtExtension root = sqrt_extend(integer(2) * nu_a, field_);
    field_ = root.field;
    L.mu = integer(2) / root.root;
  }
  levels_.push_back(std::move(L));
}

FieldElement GramTable::higher_block(int t, int x, int delta) {
  const int pi = shape_.p(x);
  const AuxLevel& L = aux_for(pi);
  const int a = L.a, b = L.b;
  if (t < a || t > b) throw VerificationFailed("higher-block index outside its window");
  const int pt = shape_.p(t), pa = shape_.p(a);
  auto n = [&](int k) { return n_k(pi, k); };
  if (-pi <= delta && delta < 2 * pt - pi) return integer(0);
  if (delta == 2 * pt - pi) return L.mu * L.nu.at(t);
  FieldElement val = integer(0);
  FieldElement rhs = integer(0);
  if (delta > 2 * pt - pi) {
    const int s = delta - (2 * pt - pi);
    for (int k = 1; k <= std::min(2 * pi, s); ++k) val -= n(k) * raw(t, x, delta - k);
    for (int k = 0; k <= 2 * pi; ++k) rhs += n(k) * raw(t, a, delta - k - 2 * pa + 2 * pi);
    for (const auto& [rh, coeff] : L.a_tilde) {
      FieldElement inner = integer(0);
      for (int k = 0; k <= 2 * pi; ++k) inner += n(k) * raw(t, rh.first, delta - k - rh.second);
      rhs += inner * coeff;
    }
  } else {
    const int s = -pi - delta;
    for (int k = std::max(0, 2 * pi - s); k <= 2 * pi - 1; ++k) val -= n(k) * raw(t, x, delta + 2 * pi - k);
    for (int k = 0; k <= 2 * pi; ++k) rhs += n(k) * raw(a, t, k + 2 * pa - 2 * pi - (delta + 2 * pi));
    for (const auto& [rh, coeff] : L.a_tilde) {
      FieldElement inner = integer(0);
      for (int k = 0; k <= 2 * pi; ++k) inner += n(k) * raw(rh.first, t, k + rh.second - (delta + 2 * pi));
      rhs += inner * coeff;
    }
  }
  return val + L.mu * rhs;
}

FieldElement GramTable::self_odd_window(int x, int D) {
  const int pi = shape_.p(x);
  if (D < pi) return integer(0);
  if (D == pi) return integer(1);
  const AuxLevel& L = aux_for(pi);
  const int a = L.a, pa = shape_.p(a);
  auto n = [&](int k) { return n_k(pi, k); };
  const int s = D - pi, d = -D;
  FieldElement val = integer(0);
  for (int k = 1; k <= std::min(2 * pi, s); ++k) val -= n(k) * raw(x, x, d + k);
  FieldElement rhs = integer(0);
  for (int k = 0; k <= 2 * pi; ++k) rhs += n(k) * raw(a, x, d + k + 2 * pa - 2 * pi);
  for (const auto& [rh, coeff] : L.a_tilde) {
    FieldElement inner = integer(0);
    for (int k = 0; k <= 2 * pi; ++k) inner += n(k) * raw(rh.first, x, d + k + rh.second);
    rhs += inner * coeff;
  }
  return val + L.mu * rhs;
}

FieldElement GramTable::self_even_or_top(int x, int D) {
  const int pi = shape_.p(x);
  if (D < pi) return integer(0);
  if (D == pi) return integer(1);
  if (D == pi + 1) return integer(2 * pi + 2);
  FieldElement acc = integer(0);
  for (int k = 1; k <= std::min(2 * pi + 1, D - pi); ++k) {
    mpz_class c = binomial(2 * pi + 1, k);
    if (k % 2 == 1) c = -c;
    acc -= FieldElement::from_rational(field_, mpq_class(c)) * raw(x, x, -(D - k));
  }
  return acc;
}

FieldElement GramTable::same_level(int y, int x, int delta) {
  const int pi = shape_.p(x);
  auto n = [&](int k) { return n_k(pi, k); };
  if (-pi <= delta && delta < pi) return integer(0);
  FieldElement acc = integer(0);
  if (delta < -pi) {
    const int s = -pi - delta;
    for (int k = 1; k <= std::min(2 * pi, s - 1); ++k) acc -= n(k) * raw(y, x, delta + k);
    for (int k = 0; k <= 2 * pi; ++k) acc += n(k) * raw(x, x, delta + k);
    return acc;
  }
  const int s = delta - pi;
  for (int k = std::max(0, 2 * pi - s); k <= 2 * pi - 1; ++k) acc -= n(k) * raw(y, x, delta + k - 2 * pi);
  for (int k = 0; k <= 2 * pi; ++k) acc += n(k) * raw(x, x, delta + k - 2 * pi);
  return acc;
}

void GramTable::build_virtual() {
  const auto w = pi_window(shape_, Level::half());
  VirtualAux V;
  V.a = w->a;
  const int sigma = shape_.sigma();
  for (int r = V.a; r <= sigma; ++r) {
    for (int i = 0; i < 2 * shape_.p(r); ++i) V.index.emplace_back(r, i);
  }
  const std::size_t m = V.index.size();
  ExactMatrix M(m, m, field_);
  Vector rhs;
  const int pa = shape_.p(V.a);
  for (std::size_t row = 0; row < m; ++row) {
    const auto [r2, i2] = V.index[row];
    for (std::size_t col = 0; col < m; ++col) {
      const auto [r, i] = V.index[col];
      M.set(row, col, raw(r, r2, i - i2).lifted(field_));
    }
    rhs.push_back(raw(V.a, r2, 2 * pa - i2).lifted(field_));
  }
  SolveResult sol = solve_linear(M, rhs);
  if (auto* u = std::get_if<Unique>(&sol)) {
    V.c = u->x;
  } else {
    diag_.singular_fallback = true;
    V.c.assign(m, integer(0));
  }
  FieldElement nu = integer(0);
  for (std::size_t u = 0; u < m; ++u) {
    if (V.c[u].is_zero()) continue;
    for (std::size_t v = 0; v < m; ++v) {
      nu -= V.c[u] * V.c[v] * raw(V.index[u].first, V.index[v].first, V.index[u].second - V.index[v].second);
    }
  }
  V.nu = nu;
  if (nu.is_zero()) diag_.virtual_nu_zero = true;
  SqrtExtension root = sqrt_extend(nu / integer(2), field_);
  field_ = root.field;
  V.c0 = root.root;
  virtual_ = std::move(V);
}

FieldElement GramTable::virtual_odd(int y, int delta) {
  const VirtualAux& V = *virtual_;
  const int x = shape_.sigma() + 1;
  const int pa = shape_.p(V.a);
  if (V.c0.is_zero()) throw VerificationFailed("virtual level scalar vanished; values undefined");
  if (y < x) {
    if (y < V.a) throw VerificationFailed("virtual-level index below its window");
    const int h = -delta;
    FieldElement val = raw(V.a, y, 2 * pa + h);
    for (std::size_t u = 0; u < V.index.size(); ++u) {
      if (V.c[u].is_zero()) continue;
      val -= V.c[u] * raw(V.index[u].first, y, V.index[u].second + h);
    }
    return val / V.c0;
  }
  const int h = delta;
  FieldElement val = raw(V.a, V.a, h);
  for (std::size_t u = 0; u < V.index.size(); ++u) {
    if (V.c[u].is_zero()) continue;
    const auto [r, i] = V.index[u];
    val -= V.c[u] * (raw(r, V.a, i + h - 2 * pa) + raw(r, V.a, i - 2 * pa - h));
  }
  for (std::size_t u = 0; u < V.index.size(); ++u) {
    if (V.c[u].is_zero()) continue;
    for (std::size_t v = 0; v < V.index.size(); ++v) {
      if (V.c[v].is_zero()) continue;
      val += V.c[u] * V.c[v] * raw(V.index[u].first, V.index[v].first, V.index[u].second + h - V.index[v].second);
    }
  }
  return val / (V.c0 * V.c0);
}

bool GramTable::aux_residuals_vanish() {
  for (const AuxLevel& L : levels_) {
    const int pi = L.level.value;
    const int a = L.a, b = L.b, pa = shape_.p(a);
    auto p = [&](int r) { return shape_.p(r); };
    // sum over k of n_k value(t, r, base + k)
    auto nsum = [&](int t, int r, int base) {
      FieldElement acc = integer(0);
      for (int k = 0; k <= 2 * pi; ++k) acc += n_k(pi, k) * raw(t, r, base + k);
      return acc;
    };
    // Both equations with every term moved to one side.
    for (int r = a; r <= b; ++r) {
      for (int h = 0; h <= p(r) - pi - 1; ++h) {
        FieldElement res = L.alpha.at({r, h}) + nsum(a, r, 2 * pa - 2 * pi - p(r) - h);
        for (int r2 = a; r2 <= b; ++r2) {
          if (r2 > r && p(r2) == p(r)) res += L.alpha.at({r2, h}) * raw(r2, r, -p(r));
          for (int i = 0; i < std::min(h, p(r2) - pi); ++i) res += L.alpha.at({r2, i}) * nsum(r2, r, i - p(r) - h);
          for (int j = 1; j <= p(r2) - pi && j < h; ++j) {
            const int jj = 2 * p(r2) - 2 * pi - j;
            res += L.beta.at({r2, jj}) * nsum(r2, r, jj - p(r) - h);
          }
        }
        if (!res.is_zero()) return false;
      }
      for (int h = 1; h <= p(r) - pi; ++h) {
        FieldElement res = L.beta.at({r, 2 * p(r) - 2 * pi - h}) + nsum(a, r, 2 * pa - 2 * pi - p(r) + h);
        for (int r2 = a; r2 <= b; ++r2) {
          if (r2 < r) res += L.beta.at({r2, 2 * p(r2) - 2 * pi - h}) * raw(r2, r, 2 * p(r2) - p(r));
          for (int i = 0; i < std::min(h - 1, p(r2) - pi); ++i) {
            res += L.alpha.at({r2, i}) * nsum(r2, r, i - p(r) + h);
          }
          for (int j = 1; j <= p(r2) - pi && j < h; ++j) {
            const int jj = 2 * p(r2) - 2 * pi - j;
            res += L.beta.at({r2, jj}) * nsum(r2, r, jj - p(r) + h);
          }
        }
        if (!res.is_zero()) return false;
      }
    }
  }
  return true;
}

bool GramTable::virtual_residuals_vanish() {
  if (!virtual_) return true;
  const VirtualAux& V = *virtual_;
  const int pa = shape_.p(V.a);
  for (const auto& [r2, i2] : V.index) {
    FieldElement res = -raw(V.a, r2, 2 * pa - i2);
    for (std::size_t u = 0; u < V.index.size(); ++u) {
      res += V.c[u] * raw(V.index[u].first, r2, V.index[u].second - i2);
    }
    if (!res.is_zero()) return false;
  }
  return true;
}

std::vector<IndexPair> standard_index(const ShapeSeq& shape) {
  std::vector<IndexPair> idx;
  for (int t = 1; t <= shape.index_count(); ++t) {
    for (int i = 0; i < shape.block_length(t); ++i) idx.emplace_back(t, i);
  }
  return idx;
}

ExactMatrix gram_matrix(GramTable& table) {
  const auto idx = standard_index(table.shape());
  ExactMatrix G(idx.size(), idx.size(), table.field());
  for (std::size_t u = 0; u < idx.size(); ++u) {
    for (std::size_t v = 0; v < idx.size(); ++v) {
      G.set(u, v, table.value(idx[u].first, idx[v].first, idx[u].second - idx[v].second));
    }
  }
  return G;
}

mpq_class closed_form_value(ClosedForm which, int pi, int s) {
  if (pi < 1) throw UsageError("closed forms need pi >= 1");
  if (s < 0) throw UsageError("closed forms need s >= 0");
  switch (which) {
    case ClosedForm::JordanBinomial: return mpq_class(binomial(2 * pi + s - 1, s));
    case ClosedForm::SelfPairing: {
      if (s < 1) throw UsageError("self-pairing closed form is defined for s >= 1");
      mpq_class acc = 2;
      for (int f = 2 * pi + 1; f <= 2 * pi + s - 1; ++f) acc *= f;
      acc *= pi + s;
      for (int f = 2; f <= s; ++f) acc /= f;
      return acc;
    }
    case ClosedForm::SameLevelPairing: return mpq_class(2 * binomial(2 * pi + s, s));
  }
  throw UsageError("unknown closed form");
}

mpz_class jordan_block_closed_form(int pi, int j_minus_i) {
  const int m = std::abs(j_minus_i);
  if (m < pi) return 0;
  mpz_class c = binomial(m + pi - 1, m - pi);
  return j_minus_i < 0 ? mpz_class(-c) : c;
}

SquareCheck check_square_conjecture(int k, int max_depth) {
  if (k < 2) throw UsageError("square check needs k >= 2");
  GramTable table(ShapeSeq({k, 1}, 0), Mode::OrthogonalOdd, FieldDescriptor::rationals(max_depth));
  SquareCheck out;
  out.k = k;
  out.value = table.value(1, 2, 2 * k - 1);
  out.square = out.value * out.value;
  mpz_class e;
  mpz_ui_pow_ui(e.get_mpz_t(), 2, static_cast<unsigned long>(2 * k));
  out.expected = (k % 2 == 1) ? e : mpz_class(-e);
  out.matches = out.square == FieldElement::from_rational(table.field(), mpq_class(out.expected));
  return out;
}

}  // namespace ellhomog
