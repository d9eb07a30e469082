#include "ellhomog/counter.hpp"

#include <algorithm>
#include <set>
#include <unordered_set>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "ellhomog/errors.hpp"

namespace ellhomog {

namespace {

std::pair<int, int> prime_power(int q) {
  if (q < 2) throw UsageError("q must be a prime power >= 2");
  for (int p = 2; p <= q; ++p) {
    if (q % p != 0) continue;
    int m = 0;
    int r = q;
    while (r % p == 0) {
      r /= p;
      ++m;
    }
    if (r != 1) throw UsageError("q = " + std::to_string(q) + " is not a prime power");
    return {p, m};
  }
  throw UsageError("q must be a prime power");
}

mpz_class ipow(int q, long e) {
  mpz_class r;
  mpz_ui_pow_ui(r.get_mpz_t(), static_cast<unsigned long>(q), static_cast<unsigned long>(e));
  return r;
}

}  // namespace

SmallField::SmallField(int q) : q_(q) {
  const auto [p, m] = prime_power(q);
  p_ = p;
  exact_ = FieldDescriptor::galois(static_cast<std::uint32_t>(p), m);
  const std::size_t qq = static_cast<std::size_t>(q);
  add_.resize(qq * qq);
  mul_.resize(qq * qq);
  neg_.resize(qq);
  inv_.resize(qq);
  std::vector<FieldElement> el;
  for (int a = 0; a < q; ++a) el.push_back(FieldElement::from_encoding(exact_, static_cast<std::uint64_t>(a)));
  for (int a = 0; a < q; ++a) {
    neg_[static_cast<std::size_t>(a)] = static_cast<std::uint8_t>((-el[a]).encoding());
    inv_[static_cast<std::size_t>(a)] = a == 0 ? 0 : static_cast<std::uint8_t>(el[a].inverse().encoding());
    for (int b = 0; b < q; ++b) {
      add_[static_cast<std::size_t>(a * q + b)] = static_cast<std::uint8_t>((el[a] + el[b]).encoding());
      mul_[static_cast<std::size_t>(a * q + b)] = static_cast<std::uint8_t>((el[a] * el[b]).encoding());
    }
  }
  for (int a = 1; a < q; ++a) {
    int order = 1;
    std::uint8_t x = static_cast<std::uint8_t>(a);
    while (x != 1) {
      x = mul(x, static_cast<std::uint8_t>(a));
      ++order;
    }
    if (order == q - 1) {
      primitive_ = static_cast<std::uint8_t>(a);
      break;
    }
  }
}

std::uint8_t SmallField::from_int(long long v) const {
  long long r = v % p_;
  if (r < 0) r += p_;
  return static_cast<std::uint8_t>(r);
}

std::size_t SmallMatHash::operator()(const SmallMat& m) const {
  std::size_t h = 1469598103934665603ull;
  for (std::uint8_t b : m.e) {
    h ^= b;
    h *= 1099511628211ull;
  }
  return h;
}

std::string space_kind_name(SpaceKind kind) {
  switch (kind) {
    case SpaceKind::TypeA:
      return "A";
    case SpaceKind::Symplectic:
      return "symplectic";
    case SpaceKind::OrthogonalOdd:
      return "orthogonal-odd-dim";
    case SpaceKind::OrthogonalEven:
      return "orthogonal-even-dim";
  }
  return "?";
}

std::uint8_t FiniteFormSpace::form(const SVec& x, const SVec& y) const {
  std::uint8_t acc = 0;
  for (int i = 0; i < nu; ++i) {
    if (!x[i]) continue;
    for (int j = 0; j < nu; ++j) {
      if (y[j] && gram.at(i, j)) acc = field.add(acc, field.mul(x[i], field.mul(gram.at(i, j), y[j])));
    }
  }
  return acc;
}

std::uint8_t FiniteFormSpace::quad(const SVec& x) const {
  std::uint8_t acc = 0;
  for (int i = 0; i < nu; ++i) {
    if (!x[i]) continue;
    for (int j = i; j < nu; ++j) {
      if (x[j] && qform.at(i, j)) acc = field.add(acc, field.mul(qform.at(i, j), field.mul(x[i], x[j])));
    }
  }
  return acc;
}

int FiniteFormSpace::rank() const { return kind == SpaceKind::TypeA ? nu : nu / 2; }

FiniteFormSpace make_space(SpaceKind kind, int nu, int q) {
  if (nu < 1 || nu > kMaxSmallDim || q > kMaxSmallQ) {
    throw BoundExceeded("finite spaces are limited to nu <= 7 and q <= 7");
  }
  FiniteFormSpace s{kind, q, nu, SmallField(q), SmallMat{}, SmallMat{}};
  const int n = nu / 2;
  const std::uint8_t one = 1;
  switch (kind) {
    case SpaceKind::TypeA:
      break;
    case SpaceKind::Symplectic:
      if (nu % 2) throw UsageError("symplectic spaces need even dimension");
      for (int i = 0; i < nu; ++i) s.gram.at(i, nu - 1 - i) = i < n ? one : s.field.neg(one);
      break;
    case SpaceKind::OrthogonalOdd:
    case SpaceKind::OrthogonalEven:
      if (s.field.p() == 2) throw UsageError("orthogonal counting needs odd q");
      if ((kind == SpaceKind::OrthogonalOdd) != (nu % 2 == 1)) throw UsageError("dimension parity does not match");
      for (int i = 0; i < n; ++i) s.qform.at(i, nu - 1 - i) = one;
      if (nu % 2) s.qform.at(n, n) = one;
      for (int i = 0; i < nu; ++i) {
        for (int j = 0; j < nu; ++j) s.gram.at(i, j) = s.field.add(s.qform.at(i, j), s.qform.at(j, i));
      }
      break;
  }
  return s;
}

ExactMatrix to_exact(const FiniteFormSpace& space, const SmallMat& m) {
  const std::size_t n = static_cast<std::size_t>(space.nu);
  ExactMatrix out(n, n, space.field.exact());
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      out.set(i, j, FieldElement::from_encoding(space.field.exact(), m.at(static_cast<int>(i), static_cast<int>(j))));
    }
  }
  return out;
}

SmallMat from_exact(const FiniteFormSpace& space, const ExactMatrix& m) {
  if (!m.field()->same_as(*space.field.exact())) throw UsageError("matrix over a different field");
  SmallMat out;
  for (int i = 0; i < space.nu; ++i) {
    for (int j = 0; j < space.nu; ++j) {
      out.at(i, j) = static_cast<std::uint8_t>(m(static_cast<std::size_t>(i), static_cast<std::size_t>(j)).encoding());
    }
  }
  return out;
}

SmallMat small_identity(int nu) {
  SmallMat m;
  for (int i = 0; i < nu; ++i) m.at(i, i) = 1;
  return m;
}

SmallMat small_mul(const FiniteFormSpace& space, const SmallMat& a, const SmallMat& b) {
  const SmallField& f = space.field;
  SmallMat c;
  for (int i = 0; i < space.nu; ++i) {
    for (int k = 0; k < space.nu; ++k) {
      const std::uint8_t aik = a.at(i, k);
      if (!aik) continue;
      for (int j = 0; j < space.nu; ++j) {
        if (b.at(k, j)) c.at(i, j) = f.add(c.at(i, j), f.mul(aik, b.at(k, j)));
      }
    }
  }
  return c;
}

SVec small_apply(const FiniteFormSpace& space, const SmallMat& m, const SVec& x) {
  const SmallField& f = space.field;
  SVec y{};
  for (int i = 0; i < space.nu; ++i) {
    std::uint8_t acc = 0;
    for (int j = 0; j < space.nu; ++j) {
      if (x[j] && m.at(i, j)) acc = f.add(acc, f.mul(m.at(i, j), x[j]));
    }
    y[i] = acc;
  }
  return y;
}

namespace {

// Row echelon in place; returns the rank.  Rows past the rank are garbage.
int eliminate(const FiniteFormSpace& space, std::vector<SVec>& rows, bool reduce) {
  const SmallField& f = space.field;
  int r = 0;
  for (int c = 0; c < space.nu && r < static_cast<int>(rows.size()); ++c) {
    int piv = -1;
    for (int i = r; i < static_cast<int>(rows.size()); ++i) {
      if (rows[i][c]) {
        piv = i;
        break;
      }
    }
    if (piv < 0) continue;
    std::swap(rows[r], rows[piv]);
    const std::uint8_t inv = f.inv(rows[r][c]);
    for (int j = c; j < space.nu; ++j) rows[r][j] = f.mul(rows[r][j], inv);
    for (int i = reduce ? 0 : r + 1; i < static_cast<int>(rows.size()); ++i) {
      if (i == r || !rows[i][c]) continue;
      const std::uint8_t factor = f.neg(rows[i][c]);
      for (int j = c; j < space.nu; ++j) rows[i][j] = f.add(rows[i][j], f.mul(factor, rows[r][j]));
    }
    ++r;
  }
  return r;
}

std::vector<SVec> reduced_basis(const FiniteFormSpace& space, std::vector<SVec> rows) {
  const int r = eliminate(space, rows, true);
  rows.resize(static_cast<std::size_t>(r));
  return rows;
}

// {x : rows . x = 0}
std::vector<SVec> small_kernel(const FiniteFormSpace& space, std::vector<SVec> rows) {
  const SmallField& f = space.field;
  const int r = eliminate(space, rows, true);
  std::vector<int> pivot_of_row;
  std::vector<bool> is_pivot(static_cast<std::size_t>(space.nu), false);
  for (int i = 0; i < r; ++i) {
    int c = 0;
    while (!rows[i][c]) ++c;
    pivot_of_row.push_back(c);
    is_pivot[static_cast<std::size_t>(c)] = true;
  }
  std::vector<SVec> out;
  for (int free = 0; free < space.nu; ++free) {
    if (is_pivot[static_cast<std::size_t>(free)]) continue;
    SVec x{};
    x[free] = 1;
    for (int i = 0; i < r; ++i) x[pivot_of_row[static_cast<std::size_t>(i)]] = f.neg(rows[i][free]);
    out.push_back(x);
  }
  return out;
}

std::vector<SVec> all_vectors(const FiniteFormSpace& space) {
  std::vector<SVec> out;
  SVec x{};
  while (true) {
    out.push_back(x);
    int i = 0;
    while (i < space.nu && ++x[i] == space.q) x[i++] = 0;
    if (i == space.nu) break;
  }
  return out;
}

// First nonzero coordinate equal to 1.
std::vector<SVec> projective_points(const FiniteFormSpace& space) {
  std::vector<SVec> out;
  for (const SVec& x : all_vectors(space)) {
    int i = 0;
    while (i < space.nu && !x[i]) ++i;
    if (i < space.nu && x[i] == 1) out.push_back(x);
  }
  return out;
}

SVec gram_times(const FiniteFormSpace& space, const SVec& x) { return small_apply(space, space.gram, x); }

}  // namespace

int small_rank(const FiniteFormSpace& space, std::vector<SVec> rows) { return eliminate(space, rows, false); }

bool preserves_form(const FiniteFormSpace& space, const SmallMat& m) {
  for (int i = 0; i < space.nu; ++i) {
    SVec ei{};
    ei[i] = 1;
    const SVec mi = small_apply(space, m, ei);
    if (space.has_q() && space.quad(mi) != space.quad(ei)) return false;
    if (!space.has_form()) continue;
    for (int j = 0; j < space.nu; ++j) {
      SVec ej{};
      ej[j] = 1;
      if (space.form(mi, small_apply(space, m, ej)) != space.gram.at(i, j)) return false;
    }
  }
  return true;
}

std::optional<std::vector<int>> unipotent_jordan(const FiniteFormSpace& space, const SmallMat& m) {
  SmallMat n = m;
  for (int i = 0; i < space.nu; ++i) n.at(i, i) = space.field.sub(n.at(i, i), 1);
  auto rank_of = [&](const SmallMat& a) {
    std::vector<SVec> rows(static_cast<std::size_t>(space.nu));
    for (int i = 0; i < space.nu; ++i) {
      for (int j = 0; j < space.nu; ++j) rows[static_cast<std::size_t>(i)][j] = a.at(i, j);
    }
    return small_rank(space, rows);
  };
  std::vector<int> r{space.nu};
  SmallMat power = small_identity(space.nu);
  for (int s = 1; s <= space.nu; ++s) {
    power = small_mul(space, power, n);
    r.push_back(rank_of(power));
  }
  if (r.back() != 0) return std::nullopt;
  r.push_back(0);
  std::vector<int> sizes;
  for (int s = space.nu; s >= 1; --s) {
    const int mult = r[static_cast<std::size_t>(s - 1)] - 2 * r[static_cast<std::size_t>(s)] + r[static_cast<std::size_t>(s + 1)];
    for (int k = 0; k < mult; ++k) sizes.push_back(s);
  }
  return sizes;
}

mpz_class classical_order(const FiniteFormSpace& space) {
  const int q = space.q;
  const int nu = space.nu;
  mpz_class acc = 1;
  switch (space.kind) {
    case SpaceKind::TypeA:
      for (int i = 0; i < nu; ++i) acc *= ipow(q, nu) - ipow(q, i);
      return acc;
    case SpaceKind::Symplectic:
    case SpaceKind::OrthogonalOdd: {
      const int n = nu / 2;
      acc = ipow(q, static_cast<long>(n) * n);
      for (int i = 1; i <= n; ++i) acc *= ipow(q, 2 * i) - 1;
      return acc;
    }
    case SpaceKind::OrthogonalEven: {
      const int n = nu / 2;
      acc = ipow(q, static_cast<long>(n) * (n - 1)) * (ipow(q, n) - 1);
      for (int i = 1; i < n; ++i) acc *= ipow(q, 2 * i) - 1;
      return acc;
    }
  }
  return acc;
}

namespace {

std::vector<SmallMat> standard_generators(const FiniteFormSpace& space) {
  const SmallField& f = space.field;
  const int nu = space.nu;
  std::vector<SmallMat> gens;
  switch (space.kind) {
    case SpaceKind::TypeA: {
      for (int i = 0; i < nu; ++i) {
        for (int j = 0; j < nu; ++j) {
          if (i == j) continue;
          for (int l = 1; l < space.q; ++l) {
            SmallMat m = small_identity(nu);
            m.at(i, j) = static_cast<std::uint8_t>(l);
            gens.push_back(m);
          }
        }
      }
      SmallMat d = small_identity(nu);
      d.at(0, 0) = f.primitive();
      gens.push_back(d);
      break;
    }
    case SpaceKind::Symplectic:
      // Transvections x -> x + l (x, u) u.
      for (const SVec& u : projective_points(space)) {
        const SVec ju = gram_times(space, u);
        for (int l = 1; l < space.q; ++l) {
          SmallMat m = small_identity(nu);
          for (int a = 0; a < nu; ++a) {
            for (int b = 0; b < nu; ++b) {
              m.at(a, b) = f.add(m.at(a, b), f.mul(static_cast<std::uint8_t>(l), f.mul(u[a], ju[b])));
            }
          }
          gens.push_back(m);
        }
      }
      break;
    case SpaceKind::OrthogonalOdd:
    case SpaceKind::OrthogonalEven: {
      // Products of two reflections x -> x - ((x,u)/Q(u)) u.
      std::vector<SmallMat> refl;
      for (const SVec& u : projective_points(space)) {
        const std::uint8_t qu = space.quad(u);
        if (!qu) continue;
        const SVec gu = gram_times(space, u);
        const std::uint8_t c = f.neg(f.inv(qu));
        SmallMat m = small_identity(nu);
        for (int a = 0; a < nu; ++a) {
          for (int b = 0; b < nu; ++b) m.at(a, b) = f.add(m.at(a, b), f.mul(c, f.mul(u[a], gu[b])));
        }
        refl.push_back(m);
      }
      for (std::size_t k = 1; k < refl.size(); ++k) gens.push_back(small_mul(space, refl[k], refl[0]));
      break;
    }
  }
  for (const auto& g : gens) {
    if (!preserves_form(space, g)) throw VerificationFailed("generator is not an isometry");
  }
  return gens;
}

}  // namespace

GroupEnum enumerate_group(const FiniteFormSpace& space) {
  const mpz_class expected = classical_order(space);
  if (expected > static_cast<unsigned long>(kGroupCap)) {
    throw BoundExceeded("group order " + expected.get_str() + " exceeds the enumeration cap");
  }
  GroupEnum out;
  out.generators = standard_generators(space);
  std::unordered_set<SmallMat, SmallMatHash> seen;
  const SmallMat id = small_identity(space.nu);
  seen.insert(id);
  out.elements.push_back(id);
  for (std::size_t head = 0; head < out.elements.size(); ++head) {
    const SmallMat cur = out.elements[head];
    for (const SmallMat& g : out.generators) {
      SmallMat next = small_mul(space, cur, g);
      if (seen.insert(next).second) {
        out.elements.push_back(next);
        if (out.elements.size() > kGroupCap) throw BoundExceeded("group closure passed the cap");
      }
    }
  }
  if (out.order() != expected) {
    throw VerificationFailed("closure has " + out.order().get_str() + " elements, expected " + expected.get_str());
  }
  return out;
}

mpz_class expected_flag_count(const FiniteFormSpace& space) {
  const int q = space.q;
  mpz_class acc = 1;
  switch (space.kind) {
    case SpaceKind::TypeA:
      for (int i = 1; i <= space.nu; ++i) acc *= (ipow(q, i) - 1) / (q - 1);
      return acc;
    case SpaceKind::Symplectic:
    case SpaceKind::OrthogonalOdd:
      for (int i = 1; i <= space.rank(); ++i) acc *= (ipow(q, 2 * i) - 1) / (q - 1);
      return acc;
    case SpaceKind::OrthogonalEven:
      // isotropic lines of O+_{2m}: (q^m - 1)(q^{m-1} + 1)/(q - 1)
      for (int m = 1; m <= space.rank(); ++m) acc *= (ipow(q, m) - 1) * (ipow(q, m - 1) + 1) / (q - 1);
      return acc;
  }
  return acc;
}

std::vector<FiniteFlag> enumerate_isotropic_flags(const FiniteFormSpace& space) {
  const int depth = space.rank();
  const std::vector<SVec> vectors = all_vectors(space);
  std::vector<FiniteFlag> out;
  std::vector<SVec> basis;

  auto admissible = [&](const SVec& v) {
    if (!space.has_form()) return true;
    if (space.has_q() ? space.quad(v) != 0 : space.form(v, v) != 0) return false;
    for (const SVec& b : basis) {
      if (space.form(b, v)) return false;
    }
    return true;
  };

  auto finish = [&]() {
    FiniteFlag fl;
    fl.basis = basis;
    fl.spaces.resize(static_cast<std::size_t>(space.nu) + 1);
    for (int k = 0; k <= depth; ++k) {
      fl.spaces[static_cast<std::size_t>(k)] =
          reduced_basis(space, std::vector<SVec>(basis.begin(), basis.begin() + k));
    }
    for (int k = depth + 1; k <= space.nu; ++k) {
      std::vector<SVec> rows;
      for (const SVec& b : fl.spaces[static_cast<std::size_t>(space.nu - k)]) rows.push_back(gram_times(space, b));
      // gram is symmetric or antisymmetric, so (b, x) = 0 iff (G b) . x = 0 up to sign.
      fl.spaces[static_cast<std::size_t>(k)] = reduced_basis(space, small_kernel(space, rows));
    }
    out.push_back(std::move(fl));
    if (out.size() > kGroupCap) throw BoundExceeded("too many flags");
  };

  auto rec = [&](auto&& self, int k) -> void {
    if (k == depth) {
      finish();
      return;
    }
    std::set<std::vector<SVec>> children;
    for (const SVec& v : vectors) {
      if (!admissible(v)) continue;
      std::vector<SVec> rows = basis;
      rows.push_back(v);
      std::vector<SVec> red = reduced_basis(space, rows);
      if (static_cast<int>(red.size()) != k + 1) continue;
      if (!children.insert(red).second) continue;
      basis.push_back(v);
      self(self, k + 1);
      basis.pop_back();
    }
  };
  rec(rec, 0);

  if (mpz_class(static_cast<unsigned long>(out.size())) != expected_flag_count(space)) {
    throw VerificationFailed("found " + std::to_string(out.size()) + " flags, expected " +
                             expected_flag_count(space).get_str());
  }
  return out;
}

std::vector<SmallMat> unipotents_of_type(const FiniteFormSpace& space, const GroupEnum& group,
                                         const std::vector<int>& target) {
  std::vector<int> want = target;
  std::sort(want.rbegin(), want.rend());
  std::vector<SmallMat> out;
  for (const SmallMat& g : group.elements) {
    auto j = unipotent_jordan(space, g);
    if (j && *j == want) out.push_back(g);
  }
  return out;
}

namespace {

int cap_dim(const FiniteFormSpace& space, const std::vector<SVec>& a, const std::vector<SVec>& b) {
  std::vector<SVec> rows = a;
  rows.insert(rows.end(), b.begin(), b.end());
  return static_cast<int>(a.size() + b.size()) - small_rank(space, rows);
}

std::vector<SVec> images(const FiniteFormSpace& space, const SmallMat& g, const std::vector<SVec>& rows) {
  std::vector<SVec> out;
  for (const SVec& r : rows) out.push_back(small_apply(space, g, r));
  return out;
}

}  // namespace

std::vector<int> relative_position_typeA(const FiniteFormSpace& space, const FiniteFlag& a, const FiniteFlag& b) {
  const int n = space.nu;
  std::vector<std::vector<int>> d(static_cast<std::size_t>(n) + 1, std::vector<int>(static_cast<std::size_t>(n) + 1, 0));
  for (int i = 1; i <= n; ++i) {
    for (int j = 1; j <= n; ++j) {
      d[i][j] = cap_dim(space, a.spaces[static_cast<std::size_t>(i)], b.spaces[static_cast<std::size_t>(j)]);
    }
  }
  std::vector<int> w(static_cast<std::size_t>(n), 0);
  for (int j = 1; j <= n; ++j) {
    for (int i = 1; i <= n; ++i) {
      if (d[i][j] - d[i - 1][j] - d[i][j - 1] + d[i - 1][j - 1] == 1) w[static_cast<std::size_t>(j - 1)] = i;
    }
  }
  return w;
}

std::vector<int> coxeter_cycle(int n) {
  std::vector<int> w;
  for (int k = 1; k < n; ++k) w.push_back(k + 1);
  w.push_back(1);
  return w;
}

bool position_holds(const FiniteFormSpace& space, const ShapeSeq& shape, const FiniteFlag& flag, const SmallMat& g) {
  const int nu = space.nu;
  // V'_a = g V_a = span(g b_1, ..., g b_a) for a <= n.
  const std::vector<SVec> gb = images(space, g, flag.basis);
  auto dim_cap = [&](int a, int b) {
    std::vector<SVec> va(gb.begin(), gb.begin() + a);
    return cap_dim(space, va, flag.spaces[static_cast<std::size_t>(b)]);
  };
  int below = 0;
  for (int r = 1; r <= shape.sigma(); ++r) {
    const int pr = shape.p(r);
    for (int i = 1; i <= pr - 1; ++i) {
      const int k = below + i;
      if (dim_cap(k, k) != k - r) return false;
      if (dim_cap(k, k + 1) != k - r + 1) return false;
    }
    const int upto = below + pr;
    if (dim_cap(upto, nu - below - 1) != upto - r) return false;
    if (dim_cap(upto, nu - below) != upto - r + 1) return false;
    below = upto;
  }
  return true;
}

mpz_class adjoint_order(char type, int n, int q) {
  if (n < 1) throw UsageError("rank must be >= 1");
  prime_power(q);
  mpz_class acc = 1;
  switch (type) {
    case 'A':
      for (int i = 0; i <= n; ++i) acc *= ipow(q, n + 1) - ipow(q, i);
      return acc / (q - 1);
    case 'B':
    case 'C':
      acc = ipow(q, static_cast<long>(n) * n);
      for (int i = 1; i <= n; ++i) acc *= ipow(q, 2 * i) - 1;
      if (type == 'C' && q % 2 == 1) acc /= 2;
      return acc;
    default:
      throw UsageError(std::string("adjoint order for type ") + type + " is not available");
  }
}

std::optional<std::pair<char, int>> adjoint_type(const FiniteFormSpace& space) {
  switch (space.kind) {
    case SpaceKind::TypeA:
      if (space.nu < 2) return std::nullopt;
      return std::make_pair('A', space.nu - 1);
    case SpaceKind::Symplectic:
      return std::make_pair('C', space.nu / 2);
    case SpaceKind::OrthogonalOdd:
      return std::make_pair('B', space.nu / 2);
    case SpaceKind::OrthogonalEven:
      return std::nullopt;
  }
  return std::nullopt;
}

CountingTables prepare_counting(const FiniteFormSpace& space, const PositionSpec& spec, const std::vector<int>& gamma) {
  int total = 0;
  for (int b : gamma) {
    if (b < 1) throw UsageError("gamma parts must be >= 1");
    total += b;
  }
  if (total != space.nu) throw UsageError("gamma must partition the dimension " + std::to_string(space.nu));
  if (const auto* shape = std::get_if<ShapeSeq>(&spec)) {
    if (space.kind == SpaceKind::TypeA) throw UsageError("type A counting uses the Coxeter position");
    if (space.field.p() == 2) throw UsageError("classical counting needs odd q");
    if (shape->nu() != space.nu) throw UsageError("shape dimension does not match the space");
    if ((shape->kappa() == 1) != (space.kind == SpaceKind::OrthogonalOdd)) {
      throw UsageError("kappa = 1 goes with odd orthogonal spaces");
    }
  } else if (space.kind != SpaceKind::TypeA) {
    throw UsageError("the Coxeter position is for type A");
  }
  CountingTables t{space, spec, enumerate_isotropic_flags(space), {}};
  t.elements = unipotents_of_type(space, enumerate_group(space), gamma);
  return t;
}

bool in_position(const CountingTables& tables, const FiniteFlag& flag, const SmallMat& g) {
  if (const auto* shape = std::get_if<ShapeSeq>(&tables.spec)) return position_holds(tables.space, *shape, flag, g);
  FiniteFlag moved;
  for (const auto& sp : flag.spaces) moved.spaces.push_back(images(tables.space, g, sp));
  return relative_position_typeA(tables.space, flag, moved) == coxeter_cycle(tables.space.nu);
}

unsigned long long count_serial(const CountingTables& tables, std::vector<unsigned long long>* per_g) {
  unsigned long long total = 0;
  if (per_g) per_g->assign(tables.elements.size(), 0);
  for (std::size_t k = 0; k < tables.elements.size(); ++k) {
    unsigned long long c = 0;
    for (const FiniteFlag& fl : tables.flags) c += in_position(tables, fl, tables.elements[k]) ? 1 : 0;
    if (per_g) (*per_g)[k] = c;
    total += c;
  }
  return total;
}

unsigned long long count_parallel(const CountingTables& tables, int jobs, std::vector<unsigned long long>* per_g) {
  const long long n = static_cast<long long>(tables.elements.size());
  std::vector<unsigned long long> sub(tables.elements.size(), 0);
  unsigned long long total = 0;
#ifdef _OPENMP
  if (jobs <= 0) jobs = omp_get_max_threads();
#pragma omp parallel for schedule(dynamic, 4) reduction(+ : total) num_threads(jobs)
#endif
  for (long long k = 0; k < n; ++k) {
    unsigned long long c = 0;
    for (const FiniteFlag& fl : tables.flags) c += in_position(tables, fl, tables.elements[static_cast<std::size_t>(k)]) ? 1 : 0;
    sub[static_cast<std::size_t>(k)] = c;
    total += c;
  }
  (void)jobs;
  if (per_g) *per_g = std::move(sub);
  return total;
}

unsigned long long count_flag_outer(const CountingTables& tables) {
  unsigned long long total = 0;
  for (const FiniteFlag& fl : tables.flags) {
    for (const SmallMat& g : tables.elements) total += in_position(tables, fl, g) ? 1 : 0;
  }
  return total;
}

CountResult count_pairs(const FiniteFormSpace& space, const PositionSpec& spec, const std::vector<int>& gamma,
                        const CountOptions& options) {
  const CountingTables tables = prepare_counting(space, spec, gamma);
  CountResult res;
  res.kind = space.kind;
  res.q = space.q;
  res.nu = space.nu;
  res.gamma = gamma;
  std::sort(res.gamma.rbegin(), res.gamma.rend());
  res.group_order = static_cast<std::size_t>(classical_order(space).get_ui());
  res.unipotents = tables.elements.size();
  res.flags = tables.flags.size();
  std::vector<unsigned long long>* sub = options.per_g ? &res.per_g : nullptr;
  res.count = options.serial ? count_serial(tables, sub) : count_parallel(tables, options.jobs, sub);
  res.flag_outer_count = count_flag_outer(tables);
  res.double_count_agrees = res.count == res.flag_outer_count;
  if (auto t = adjoint_type(space)) {
    res.adjoint = adjoint_order(t->first, t->second, space.q);
    res.equals_adjoint = mpz_class(static_cast<unsigned long>(res.count)) == *res.adjoint;
  }
  return res;
}

}  // namespace ellhomog
