#include "ellhomog/model.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>

#include "ellhomog/errors.hpp"

namespace ellhomog {

std::string form_kind_name(FormKind kind) {
  switch (kind) {
    case FormKind::Symplectic:
      return "symplectic";
    case FormKind::OrthogonalOdd:
      return "orthogonal-odd";
    case FormKind::OrthogonalChar2:
      return "orthogonal-char2";
  }
  return "?";
}

FieldElement QuadSpace::form(const Vector& x, const Vector& y) const { return bilinear(gram, x, y); }

FieldElement QuadSpace::q(const Vector& x) const {
  const Field& f = gram.field();
  switch (kind) {
    case FormKind::Symplectic:
      return FieldElement::zero(f);
    case FormKind::OrthogonalOdd:
      return form(x, x) / FieldElement::from_int(f, 2);
    case FormKind::OrthogonalChar2: {
      FieldElement acc = FieldElement::zero(f);
      for (std::size_t u = 0; u < x.size(); ++u) {
        if (x[u].is_zero()) continue;
        acc += x[u] * x[u] * q_basis[u];
        for (std::size_t v = u + 1; v < x.size(); ++v) acc += x[u] * x[v] * gram(u, v);
      }
      return acc;
    }
  }
  return FieldElement::zero(f);
}

ExactMatrix QuadSpace::radical() const {
  return ExactMatrix::from_columns(kernel(gram.transpose()), dim(), gram.field());
}

std::size_t IsometryModel::position(int t, int i) const {
  for (std::size_t k = 0; k < index.size(); ++k) {
    if (index[k] == IndexPair{t, i}) return k;
  }
  throw UsageError("no basis vector e^" + std::to_string(t) + "_" + std::to_string(i));
}

Vector IsometryModel::basis_vector(int t, int i) const {
  Vector e(dim(), FieldElement::zero(field()));
  e[position(t, i)] = FieldElement::one(field());
  return e;
}

namespace {

bool q_preserved(const QuadSpace& space, const ExactMatrix& m) {
  if (!space.has_q()) return true;
  for (std::size_t u = 0; u < space.dim(); ++u) {
    Vector e(space.dim(), FieldElement::zero(space.gram.field()));
    e[u] = FieldElement::one(space.gram.field());
    if (space.q(m * e) != space.q(e)) return false;
  }
  return true;
}

bool is_isometry(const QuadSpace& space, const ExactMatrix& m) {
  return m.transpose() * space.gram * m == space.gram && q_preserved(space, m);
}

std::string join(const std::vector<int>& v) {
  std::ostringstream os;
  os << "{";
  for (std::size_t i = 0; i < v.size(); ++i) os << (i ? "," : "") << v[i];
  os << "}";
  return os.str();
}

}  // namespace

IsometryModel build_model(const ShapeSeq& shape, Mode mode, const Field& field, const ModelOptions& options) {
  shape.validate(mode);
  const bool char2 = field->characteristic() == 2;
  if (mode == Mode::SymplecticOrChar2 && !char2 && shape.kappa() == 1) {
    throw UsageError("symplectic mode with kappa = 1 needs characteristic 2");
  }
  IsometryModel m;
  m.shape = shape;
  m.mode = mode;
  m.table = std::make_shared<GramTable>(shape, mode, field, options.window.value_or(6 * shape.p(1) + 4));
  m.index = standard_index(shape);
  const ExactMatrix gram = gram_matrix(*m.table);
  const Field& f = m.table->field();
  const std::size_t nu = m.index.size();

  m.space.gram = gram;
  if (mode == Mode::OrthogonalOdd) {
    m.space.kind = FormKind::OrthogonalOdd;
  } else {
    m.space.kind = char2 ? FormKind::OrthogonalChar2 : FormKind::Symplectic;
  }
  for (std::size_t u = 0; u < nu; ++u) {
    const bool virt = m.index[u].first == shape.sigma() + 1;
    if (m.space.kind == FormKind::OrthogonalOdd) {
      m.space.q_basis.push_back(gram(u, u) / FieldElement::from_int(f, 2));
    } else if (m.space.kind == FormKind::OrthogonalChar2) {
      m.space.q_basis.push_back(virt ? FieldElement::one(f) : FieldElement::zero(f));
    } else {
      m.space.q_basis.push_back(FieldElement::zero(f));
    }
  }

  // (v, e_u) is entry u of G^T v.
  const ExactMatrix gram_t = gram.transpose();
  m.g = ExactMatrix(nu, nu, f);
  for (std::size_t u = 0; u < nu; ++u) {
    const auto [t, i] = m.index[u];
    const int len = shape.block_length(t);
    if (i + 1 < len) {
      m.g.set(m.position(t, i + 1), u, FieldElement::one(f));
      continue;
    }
    Vector rhs;
    for (const auto& [y, j] : m.index) rhs.push_back(m.table->value(t, y, len - j));
    const FieldElement q_target = t == shape.sigma() + 1 ? FieldElement::one(f) : FieldElement::zero(f);
    SolveResult sol = solve_linear(gram_t, rhs);
    Vector v;
    if (auto* uq = std::get_if<Unique>(&sol)) {
      v = uq->x;
    } else if (auto* af = std::get_if<Affine>(&sol)) {
      if (m.space.kind != FormKind::OrthogonalChar2 || af->kernel.size() != 1) {
        throw VerificationFailed("degenerate form outside the char-2 radical case");
      }
      // Q(x0 + c rho) = Q(x0) + c^2 Q(rho) since rho is in the radical.
      const Vector& rho = af->kernel[0];
      const FieldElement q_rho = m.space.q(rho);
      if (q_rho.is_zero()) throw VerificationFailed("Q vanishes on the radical");
      auto c = square_root((q_target - m.space.q(af->x0)) / q_rho);
      if (!c) throw VerificationFailed("no square root for the radical correction");
      v = af->x0;
      for (std::size_t k = 0; k < nu; ++k) v[k] += *c * rho[k];
    } else {
      throw VerificationFailed("no vector realizes w^" + std::to_string(t) + "_" + std::to_string(len));
    }
    for (std::size_t k = 0; k < nu; ++k) m.g.set(k, u, v[k]);
  }

  if (!is_isometry(m.space, m.g)) throw VerificationFailed("g does not preserve the form on " + shape.to_string());
  m.g_inv = inverse(m.g);
  m.jordan = nilpotent_jordan_multiset(m.g - ExactMatrix::identity(nu, f));
  const std::vector<int> expected = jordan_prediction(shape, mode);
  if (m.jordan != expected) {
    throw VerificationFailed("Jordan type " + join(m.jordan) + " differs from prediction " + join(expected));
  }
  CheckReport adapted = check_adapted(m, canonical_collection(m));
  if (!adapted.pass) throw VerificationFailed("adapted-collection clause failed: " + adapted.failures.front());
  return m;
}

Collection canonical_collection(const IsometryModel& model) {
  Collection c;
  c.g = model.g;
  for (int t = 1; t <= model.shape.sigma() + model.shape.kappa(); ++t) c.generators.push_back(model.basis_vector(t, 0));
  return c;
}

Collection sign_flipped(const Collection& c, const std::vector<int>& eps) {
  if (eps.size() != c.generators.size()) throw UsageError("sign vector has the wrong length");
  Collection out = c;
  for (std::size_t t = 0; t < eps.size(); ++t) {
    if (eps[t] < 0) {
      for (auto& x : out.generators[t]) x = -x;
    }
  }
  return out;
}

Collection conjugated(const Collection& c, const ExactMatrix& h) {
  Collection out;
  out.g = h * c.g * inverse(h);
  for (const auto& w : c.generators) out.generators.push_back(h * w);
  return out;
}

CollectionView::CollectionView(const Collection& c) : c_(c), g_inv_(inverse(c.g)) {}

const Vector& CollectionView::at(int t, int i) {
  if (t < 1 || t > static_cast<int>(c_.generators.size())) throw UsageError("collection index out of range");
  auto it = cache_.find({t, i});
  if (it != cache_.end()) return it->second;
  if (i == 0) return cache_.emplace(IndexPair{t, 0}, c_.generators[static_cast<std::size_t>(t - 1)]).first->second;
  const int step = i > 0 ? 1 : -1;
  int k = 0;
  const Vector* cur = &at(t, 0);
  while (k != i) {
    k += step;
    auto found = cache_.find({t, k});
    if (found == cache_.end()) {
      Vector next = step > 0 ? c_.g * *cur : g_inv_ * *cur;
      found = cache_.emplace(IndexPair{t, k}, std::move(next)).first;
    }
    cur = &found->second;
  }
  return *cur;
}

Vector extend_index(const IsometryModel& model, int t, int i) {
  CollectionView view(canonical_collection(model));
  return view.at(t, i);
}

void CheckReport::fail(std::string what) {
  pass = false;
  if (failures.size() < 12) failures.push_back(std::move(what));
}

namespace {

std::string witness(char clause, int t, int i, int r, int j, const FieldElement& got) {
  std::ostringstream os;
  os << "clause (" << clause << "): (w^" << t << "_" << i << ", w^" << r << "_" << j << ") = " << got.to_string();
  return os.str();
}

// Vectors w^t_i for i in [lo, hi] and G w^t_i, for pairings by dot products.
struct WindowVectors {
  int lo = 0;
  int hi = 0;
  std::vector<std::vector<Vector>> w;   // [t-1][i-lo]
  std::vector<std::vector<Vector>> gw;  // gram * w

  WindowVectors(const QuadSpace& space, const Collection& c, int lo_, int hi_) : lo(lo_), hi(hi_) {
    CollectionView view(c);
    for (int t = 1; t <= static_cast<int>(c.generators.size()); ++t) {
      std::vector<Vector> ws;
      std::vector<Vector> gws;
      for (int i = lo; i <= hi; ++i) {
        ws.push_back(view.at(t, i));
        gws.push_back(space.gram * ws.back());
      }
      w.push_back(std::move(ws));
      gw.push_back(std::move(gws));
    }
  }
  const Vector& at(int t, int i) const { return w[static_cast<std::size_t>(t - 1)][static_cast<std::size_t>(i - lo)]; }
  FieldElement pair(int t, int i, int r, int j) const {
    return dot(at(t, i), gw[static_cast<std::size_t>(r - 1)][static_cast<std::size_t>(j - lo)]);
  }
};

}  // namespace

CheckReport check_adapted(const IsometryModel& model, const Collection& collection) {
  CheckReport rep;
  const ShapeSeq& s = model.shape;
  const int sigma = s.sigma();
  const int lo = -2 * s.p(1);
  const int hi = 4 * s.p(1);
  const Field& f = model.field();
  const FieldElement zero = FieldElement::zero(f);
  const FieldElement one = FieldElement::one(f);
  const FieldElement two = FieldElement::from_int(f, 2);
  WindowVectors wv(model.space, collection, lo, hi + 1);
  const int count = static_cast<int>(collection.generators.size());

  for (int t = 1; t <= count; ++t) {
    for (int i = lo; i <= hi; ++i) {
      if (model.g * wv.at(t, i) != wv.at(t, i + 1)) {
        rep.fail("clause (a): g w^" + std::to_string(t) + "_" + std::to_string(i) + " != w^" + std::to_string(t) +
                 "_" + std::to_string(i + 1));
      }
    }
  }
  for (int t = 1; t <= std::min(count, sigma); ++t) {
    const int pt = s.p(t);
    for (int i = lo; i <= hi; ++i) {
      for (int j = lo; j <= hi; ++j) {
        if (std::abs(i - j) >= pt && j - i != pt) continue;
        const FieldElement v = wv.pair(t, i, t, j);
        if (std::abs(i - j) < pt && v != zero) rep.fail(witness('b', t, i, t, j, v));
        if (j - i == pt && v != one) rep.fail(witness('b', t, i, t, j, v));
      }
    }
  }
  for (int t = 1; t <= std::min(count, sigma); ++t) {
    for (int r = t + 1; r <= std::min(count, sigma); ++r) {
      for (int i = lo; i <= hi; ++i) {
        for (int j = lo; j <= hi; ++j) {
          const int d = i - j + s.p(r);
          if (d < 0 || d >= 2 * s.p(t)) continue;
          const FieldElement v = wv.pair(t, i, r, j);
          if (v != zero) rep.fail(witness('c', t, i, r, j, v));
        }
      }
    }
  }
  if (s.kappa() == 1 && count == sigma + 1) {
    const int x = sigma + 1;
    for (int i = lo; i <= hi; ++i) {
      const FieldElement v = wv.pair(x, i, x, i);
      if (v != two) rep.fail(witness('d', x, i, x, i, v));
    }
    for (int t = 1; t <= sigma; ++t) {
      for (int i = lo; i <= hi; ++i) {
        for (int j = lo; j <= hi; ++j) {
          if (i - j < 0 || i - j >= 2 * s.p(t)) continue;
          const FieldElement v = wv.pair(t, i, x, j);
          if (v != zero) rep.fail(witness('e', t, i, x, j, v));
        }
      }
    }
  }
  if (model.space.has_q()) {
    for (int t = 1; t <= count; ++t) {
      const FieldElement target = t == sigma + 1 ? one : zero;
      for (int i = lo; i <= hi; ++i) {
        const FieldElement v = model.space.q(wv.at(t, i));
        if (v != target) {
          rep.fail("clause (f): Q(w^" + std::to_string(t) + "_" + std::to_string(i) + ") = " + v.to_string());
        }
      }
    }
  }
  return rep;
}

CheckReport round_trip_check(const IsometryModel& model) {
  CheckReport rep;
  const int lo = -2 * model.shape.p(1);
  const int hi = 4 * model.shape.p(1);
  WindowVectors wv(model.space, canonical_collection(model), lo, hi);
  const int count = model.shape.sigma() + model.shape.kappa();
  for (int t = 1; t <= count; ++t) {
    for (int r = 1; r <= count; ++r) {
      for (int i = lo; i <= hi; ++i) {
        for (int j = lo; j <= hi; ++j) {
          const FieldElement got = wv.pair(t, i, r, j);
          const FieldElement want = model.table->value(t, r, i - j);
          if (got != want) {
            rep.fail("(w^" + std::to_string(t) + "_" + std::to_string(i) + ", w^" + std::to_string(r) + "_" +
                     std::to_string(j) + ") = " + got.to_string() + ", table " + want.to_string());
          }
        }
      }
    }
  }
  return rep;
}

FlagPair flags_from(const IsometryModel& model, const Collection& collection) {
  const ShapeSeq& s = model.shape;
  const std::size_t nu = model.dim();
  const int n = s.n();
  const Field& f = model.field();
  CollectionView view(collection);
  std::vector<Vector> lower;
  for (int r = 1; r <= s.sigma(); ++r) {
    for (int h = s.p(r); h < 2 * s.p(r); ++h) lower.push_back(view.at(r, h));
  }
  FlagPair out;
  out.v.spaces.resize(nu + 1);
  for (int k = 0; k <= n; ++k) {
    out.v.spaces[static_cast<std::size_t>(k)] =
        ExactMatrix::from_columns(std::vector<Vector>(lower.begin(), lower.begin() + k), nu, f);
  }
  for (std::size_t k = static_cast<std::size_t>(n) + 1; k <= nu; ++k) {
    out.v.spaces[k] = perp(out.v.spaces[nu - k], model.space.gram);
  }
  CheckReport iso = check_iso_flag(model.space, out.v, n);
  if (!iso.pass) throw VerificationFailed("isotropy violation: " + iso.failures.front());
  for (const auto& sp : out.v.spaces) out.v_prime.spaces.push_back(collection.g * sp);
  return out;
}

FlagPair flags_from(const IsometryModel& model) { return flags_from(model, canonical_collection(model)); }

CheckReport check_iso_flag(const QuadSpace& space, const IsoFlag& flag, int n) {
  CheckReport rep;
  const std::size_t nu = space.dim();
  if (flag.spaces.size() != nu + 1) {
    rep.fail("flag has " + std::to_string(flag.spaces.size()) + " terms");
    return rep;
  }
  for (std::size_t k = 0; k <= nu; ++k) {
    if (span_dim(flag.spaces[k]) != k) rep.fail("dim V_" + std::to_string(k) + " is wrong");
    if (k > 0 && intersection_dim(flag.spaces[k - 1], flag.spaces[k]) != k - 1) {
      rep.fail("V_" + std::to_string(k - 1) + " not inside V_" + std::to_string(k));
    }
  }
  if (!rep.pass) return rep;
  for (int k = 0; k <= n; ++k) {
    const ExactMatrix& vk = flag.spaces[static_cast<std::size_t>(k)];
    if (!(vk.transpose() * space.gram * vk).is_zero()) rep.fail("form nonzero on V_" + std::to_string(k));
    for (std::size_t c = 0; c < vk.cols(); ++c) {
      if (!space.q(vk.column(c)).is_zero()) rep.fail("Q nonzero on V_" + std::to_string(k));
    }
    if (!same_span(perp(vk, space.gram), flag.spaces[nu - static_cast<std::size_t>(k)])) {
      rep.fail("V_" + std::to_string(k) + "^perp != V_" + std::to_string(nu - static_cast<std::size_t>(k)));
    }
  }
  return rep;
}

bool position_check(const IsoFlag& v, const IsoFlag& v_prime, const ShapeSeq& shape) {
  const int nu = shape.nu();
  if (static_cast<int>(v.spaces.size()) != nu + 1 || v_prime.spaces.size() != v.spaces.size()) return false;
  auto dim_cap = [&](int a, int b) {
    return static_cast<int>(intersection_dim(v_prime.spaces[static_cast<std::size_t>(a)],
                                             v.spaces[static_cast<std::size_t>(b)]));
  };
  int below = 0;  // p_{<r}
  for (int r = 1; r <= shape.sigma(); ++r) {
    const int pr = shape.p(r);
    for (int i = 1; i <= pr - 1; ++i) {
      const int k = below + i;
      if (dim_cap(k, k) != k - r) return false;
      if (dim_cap(k, k + 1) != k - r + 1) return false;
    }
    const int upto = below + pr;  // p_{<=r}
    if (dim_cap(upto, nu - below - 1) != upto - r) return false;
    if (dim_cap(upto, nu - below) != upto - r + 1) return false;
    below = upto;
  }
  return true;
}

bool maps_flag(const ExactMatrix& g, const IsoFlag& v, const IsoFlag& v_prime) {
  if (v.spaces.size() != v_prime.spaces.size()) return false;
  for (std::size_t k = 0; k < v.spaces.size(); ++k) {
    if (!same_span(g * v.spaces[k], v_prime.spaces[k])) return false;
  }
  return true;
}

namespace {

ExactMatrix collection_matrix(const IsometryModel& model, const Collection& c,
                              const std::vector<IndexPair>& index) {
  CollectionView view(c);
  std::vector<Vector> cols;
  for (const auto& [t, i] : index) cols.push_back(view.at(t, i));
  return ExactMatrix::from_columns(cols, model.dim(), model.field());
}

ExactMatrix collection_matrix(const IsometryModel& model, const Collection& c) {
  return collection_matrix(model, c, model.index);
}

// Parity union-find: parity[x] is the sign of x relative to its parent.
struct SignUnion {
  std::vector<int> parent;
  std::vector<int> parity;
  explicit SignUnion(int n) : parent(static_cast<std::size_t>(n)), parity(static_cast<std::size_t>(n), 0) {
    std::iota(parent.begin(), parent.end(), 0);
  }
  std::pair<int, int> find(int x) {
    int p = 0;
    while (parent[static_cast<std::size_t>(x)] != x) {
      p ^= parity[static_cast<std::size_t>(x)];
      x = parent[static_cast<std::size_t>(x)];
    }
    return {x, p};
  }
  // Require sign(a) * sign(b) = (-1)^rel.
  bool unite(int a, int b, int rel) {
    auto [ra, pa] = find(a);
    auto [rb, pb] = find(b);
    if (ra == rb) return (pa ^ pb) == rel;
    if (ra < rb) {
      std::swap(ra, rb);
      std::swap(pa, pb);
    }
    parent[static_cast<std::size_t>(ra)] = rb;
    parity[static_cast<std::size_t>(ra)] = pa ^ pb ^ rel;
    return true;
  }
};

}  // namespace

std::vector<IndexPair> gram_data_index(const ShapeSeq& shape) {
  std::vector<IndexPair> out;
  for (int t = 1; t <= shape.sigma() + shape.kappa(); ++t) {
    for (int i = 0; i <= shape.block_length(t); ++i) out.emplace_back(t, i);
  }
  return out;
}

ExactMatrix collection_gram(const IsometryModel& model, const Collection& collection) {
  const ExactMatrix w = collection_matrix(model, collection, gram_data_index(model.shape));
  return w.transpose() * model.space.gram * w;
}

std::optional<std::vector<int>> normalize_signs(const IsometryModel& model, const ExactMatrix& a_gram,
                                                const ExactMatrix& b_gram) {
  const int count = model.shape.sigma() + model.shape.kappa();
  const std::vector<IndexPair> index = gram_data_index(model.shape);
  const std::size_t nu = index.size();
  if (a_gram.rows() != nu || b_gram.rows() != nu || a_gram.cols() != nu || b_gram.cols() != nu) {
    throw UsageError("collection Gram data of the wrong size");
  }
  SignUnion uf(count);
  for (int t = 1; t <= count; ++t) {
    for (int r = t; r <= count; ++r) {
      bool equal = true;
      bool negated = true;
      bool zero = true;
      for (std::size_t u = 0; u < nu; ++u) {
        if (index[u].first != t) continue;
        for (std::size_t v = 0; v < nu; ++v) {
          if (index[v].first != r) continue;
          const FieldElement& a = a_gram(u, v);
          const FieldElement& b = b_gram(u, v);
          if (a != b) equal = false;
          if (a != -b) negated = false;
          if (!a.is_zero() || !b.is_zero()) zero = false;
        }
      }
      if (zero) continue;
      int rel = 0;
      if (equal) {
        rel = 0;
      } else if (negated && t != r) {
        rel = 1;
      } else {
        return std::nullopt;
      }
      if (!uf.unite(t - 1, r - 1, rel)) return std::nullopt;
    }
  }
  // Roots are the smallest index of each component, so eps_1 = +1 and every
  // otherwise free component defaults to +1.
  std::vector<int> eps;
  for (int t = 0; t < count; ++t) eps.push_back(uf.find(t).second ? -1 : 1);
  return eps;
}

bool central_in_identity_component(const IsometryModel& model) {
  if (model.space.kind == FormKind::OrthogonalOdd) return model.dim() % 2 == 0;
  return true;
}

IntertwinerReport build_T(const IsometryModel& model, const Collection& a, const Collection& b) {
  auto eps = normalize_signs(model, collection_gram(model, a), collection_gram(model, b));
  if (!eps) throw VerificationFailed("collection Gram data are incompatible under sign changes");
  const Collection bn = sign_flipped(b, *eps);
  IntertwinerReport rep;
  rep.eps = *eps;
  const ExactMatrix wa = collection_matrix(model, a);
  const ExactMatrix wb = collection_matrix(model, bn);
  try {
    rep.T = wb * inverse(wa);
  } catch (const SingularMatrix&) {
    throw VerificationFailed("collection does not span V");
  }
  rep.determinant = determinant(rep.T);
  const std::size_t nu = model.dim();
  const Field& f = model.field();
  const FieldElement minus_one = FieldElement::from_int(f, -1);
  switch (model.space.kind) {
    case FormKind::Symplectic:
      rep.identity_component = "yes";
      break;
    case FormKind::OrthogonalOdd:
      if (nu % 2 == 1 && rep.determinant == minus_one) {
        // -1 has determinant -1 here, so -T lies in SO(V) and still intertwines.
        rep.T = minus_one * rep.T;
        rep.determinant = determinant(rep.T);
        rep.identity_component = "negated";
      } else {
        rep.identity_component = rep.determinant == FieldElement::one(f) ? "yes" : "no";
      }
      break;
    case FormKind::OrthogonalChar2:
      rep.identity_component = "yes";
      break;
  }
  rep.isometry = is_isometry(model.space, rep.T);
  rep.intertwines = rep.T * a.g == bn.g * rep.T;
  const FlagPair fa = flags_from(model, a);
  const FlagPair fb = flags_from(model, bn);
  rep.fixes_v = maps_flag(rep.T, fa.v, fb.v);
  rep.fixes_v_prime = maps_flag(rep.T, fa.v_prime, fb.v_prime);
  if (model.space.kind == FormKind::OrthogonalChar2 && model.shape.kappa() == 0) {
    // Dickson invariant by the parity of dim(T V_n cap V_n) against n.
    const std::size_t n = static_cast<std::size_t>(model.shape.n());
    const std::size_t d = intersection_dim(rep.T * fa.v.spaces[n], fa.v.spaces[n]);
    rep.identity_component = (n - d) % 2 == 0 ? "yes" : "no";
  }
  if (!rep.all()) throw VerificationFailed("intertwiner fails a conclusion on " + model.shape.to_string());
  return rep;
}

bool IntertwinerReport::in_identity_component() const {
  return identity_component == "yes" || identity_component == "negated";
}

ExactMatrix restrict_to(const ExactMatrix& op, const ExactMatrix& basis) {
  const std::size_t d = basis.cols();
  ExactMatrix out(d, d, common_field(op.field(), basis.field()));
  for (std::size_t c = 0; c < d; ++c) {
    SolveResult sol = solve_linear(basis, op * basis.column(c));
    auto* uq = std::get_if<Unique>(&sol);
    if (!uq) throw VerificationFailed("subspace is not stable or its columns are dependent");
    for (std::size_t k = 0; k < d; ++k) out.set(k, c, uq->x[k]);
  }
  return out;
}

namespace {

ExactMatrix span_of_blocks(const IsometryModel& model, int from, int to) {
  std::vector<Vector> cols;
  for (const auto& [t, i] : model.index) {
    if (t >= from && t <= to) cols.push_back(model.basis_vector(t, i));
  }
  return ExactMatrix::from_columns(cols, model.dim(), model.field());
}

bool stable(const ExactMatrix& op, const ExactMatrix& w) {
  return span_dim(w.hstack(op * w)) == span_dim(w);
}

}  // namespace

CheckReport split_check(const IsometryModel& model, int r) {
  const ShapeSeq& s = model.shape;
  const int sigma = s.sigma();
  const int count = sigma + s.kappa();
  if (r < 1 || r > sigma) throw UsageError("cut index out of range");
  const PsiVector ps = psi(s);
  if (model.mode == Mode::OrthogonalOdd && ps.at(r) != -1) throw UsageError("cut needs psi(r) = -1");
  CheckReport rep;
  const ExactMatrix w = span_of_blocks(model, 1, r);
  const ExactMatrix w2 = span_of_blocks(model, r + 1, count);
  if (!stable(model.g, w)) rep.fail("W not g-stable");
  if (!stable(model.g, w2)) rep.fail("W' not g-stable");
  if (!(w.transpose() * model.space.gram * w2).is_zero()) rep.fail("W and W' not perpendicular");
  const ExactMatrix wp = perp(w, model.space.gram);
  if (span_dim(wp) != span_dim(w2) || (w2.cols() > 0 && !same_span(wp, w2))) rep.fail("W' != W^perp");

  std::vector<int> first;
  std::vector<int> rest;
  for (int t = 1; t <= sigma; ++t) {
    const int size = model.mode == Mode::OrthogonalOdd ? 2 * s.p(t) + ps.at(t) : 2 * s.p(t);
    (t <= r ? first : rest).push_back(size);
  }
  if (s.kappa() == 1 && (model.mode == Mode::SymplecticOrChar2 || s.kappa_sigma() == 0)) rest.push_back(1);
  std::sort(first.rbegin(), first.rend());
  std::sort(rest.rbegin(), rest.rend());
  if (rep.pass) {
    const ExactMatrix n = model.g - ExactMatrix::identity(model.dim(), model.field());
    const std::vector<int> got_w = nilpotent_jordan_multiset(restrict_to(n, w));
    const std::vector<int> got_w2 = w2.cols() ? nilpotent_jordan_multiset(restrict_to(n, w2)) : std::vector<int>{};
    if (got_w != first) rep.fail("Jordan type on W is " + join(got_w) + ", expected " + join(first));
    if (got_w2 != rest) rep.fail("Jordan type on W' is " + join(got_w2) + ", expected " + join(rest));
  }
  if (model.mode == Mode::SymplecticOrChar2) {
    for (int t = 1; t <= count; ++t) {
      const ExactMatrix xt = span_of_blocks(model, t, t);
      if (!stable(model.g, xt)) rep.fail("X_" + std::to_string(t) + " not g-stable");
      for (int u = t + 1; u <= count; ++u) {
        const ExactMatrix xu = span_of_blocks(model, u, u);
        if (!(xt.transpose() * model.space.gram * xu).is_zero()) {
          rep.fail("X_" + std::to_string(t) + " not perpendicular to X_" + std::to_string(u));
        }
      }
    }
  }
  return rep;
}

}  // namespace ellhomog
