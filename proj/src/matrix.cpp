#include "ellhomog/matrix.hpp"

#include <algorithm>

#include "ellhomog/errors.hpp"

namespace ellhomog {

ExactMatrix::ExactMatrix(std::size_t rows, std::size_t cols, Field field)
    : rows_(rows), cols_(cols), field_(std::move(field)), data_(rows * cols, FieldElement::zero(field_)) {}

ExactMatrix ExactMatrix::identity(std::size_t n, const Field& field) {
  ExactMatrix m(n, n, field);
  const FieldElement one = FieldElement::one(field);
  for (std::size_t i = 0; i < n; ++i) m.data_[i * n + i] = one;
  return m;
}

ExactMatrix ExactMatrix::from_columns(const std::vector<Vector>& columns, std::size_t rows, const Field& field) {
  Field f = field;
  for (const auto& c : columns) {
    for (const auto& e : c) f = common_field(f, e.field());
  }
  ExactMatrix m(rows, columns.size(), f);
  for (std::size_t j = 0; j < columns.size(); ++j) {
    if (columns[j].size() != rows) throw UsageError("column length mismatch");
    for (std::size_t i = 0; i < rows; ++i) m.set(i, j, columns[j][i]);
  }
  return m;
}

ExactMatrix ExactMatrix::from_ints(const std::vector<std::vector<long long>>& rows, const Field& field) {
  const std::size_t r = rows.size();
  const std::size_t c = r ? rows[0].size() : 0;
  ExactMatrix m(r, c, field);
  for (std::size_t i = 0; i < r; ++i) {
    if (rows[i].size() != c) throw UsageError("ragged matrix rows");
    for (std::size_t j = 0; j < c; ++j) m.data_[i * c + j] = FieldElement::from_int(field, rows[i][j]);
  }
  return m;
}

void ExactMatrix::set(std::size_t i, std::size_t j, const FieldElement& value) {
  data_[i * cols_ + j] = value.field().get() == field_.get() ? value : value.lifted(field_);
}

Vector ExactMatrix::column(std::size_t j) const {
  Vector v;
  v.reserve(rows_);
  for (std::size_t i = 0; i < rows_; ++i) v.push_back((*this)(i, j));
  return v;
}

Vector ExactMatrix::row(std::size_t i) const {
  return Vector(data_.begin() + static_cast<std::ptrdiff_t>(i * cols_),
                data_.begin() + static_cast<std::ptrdiff_t>((i + 1) * cols_));
}

ExactMatrix ExactMatrix::transpose() const {
  ExactMatrix t(cols_, rows_, field_);
  for (std::size_t i = 0; i < rows_; ++i) {
    for (std::size_t j = 0; j < cols_; ++j) t.data_[j * rows_ + i] = (*this)(i, j);
  }
  return t;
}

ExactMatrix ExactMatrix::lifted(const Field& target) const {
  if (target.get() == field_.get()) return *this;
  ExactMatrix m(rows_, cols_, target);
  for (std::size_t k = 0; k < data_.size(); ++k) m.data_[k] = data_[k].lifted(target);
  return m;
}

ExactMatrix ExactMatrix::hstack(const ExactMatrix& other) const {
  if (other.rows_ != rows_) throw UsageError("hstack row mismatch");
  Field f = common_field(field_, other.field_);
  ExactMatrix m(rows_, cols_ + other.cols_, f);
  for (std::size_t i = 0; i < rows_; ++i) {
    for (std::size_t j = 0; j < cols_; ++j) m.set(i, j, (*this)(i, j));
    for (std::size_t j = 0; j < other.cols_; ++j) m.set(i, cols_ + j, other(i, j));
  }
  return m;
}

ExactMatrix ExactMatrix::pow(unsigned exponent) const {
  if (rows_ != cols_) throw UsageError("power of a non-square matrix");
  ExactMatrix acc = identity(rows_, field_);
  ExactMatrix base = *this;
  while (exponent > 0) {
    if (exponent & 1U) acc = acc * base;
    exponent >>= 1;
    if (exponent) base = base * base;
  }
  return acc;
}

bool ExactMatrix::is_zero() const {
  return std::all_of(data_.begin(), data_.end(), [](const FieldElement& e) { return e.is_zero(); });
}

ExactMatrix operator+(const ExactMatrix& a, const ExactMatrix& b) {
  if (a.rows_ != b.rows_ || a.cols_ != b.cols_) throw UsageError("matrix sum shape mismatch");
  ExactMatrix m = a.lifted(common_field(a.field_, b.field_));
  for (std::size_t k = 0; k < m.data_.size(); ++k) m.data_[k] += b.data_[k];
  return m;
}

ExactMatrix operator-(const ExactMatrix& a, const ExactMatrix& b) {
  if (a.rows_ != b.rows_ || a.cols_ != b.cols_) throw UsageError("matrix difference shape mismatch");
  ExactMatrix m = a.lifted(common_field(a.field_, b.field_));
  for (std::size_t k = 0; k < m.data_.size(); ++k) m.data_[k] -= b.data_[k];
  return m;
}

ExactMatrix operator*(const ExactMatrix& a, const ExactMatrix& b) {
  if (a.cols_ != b.rows_) throw UsageError("matrix product shape mismatch");
  Field f = common_field(a.field_, b.field_);
  ExactMatrix m(a.rows_, b.cols_, f);
  for (std::size_t i = 0; i < a.rows_; ++i) {
    for (std::size_t k = 0; k < a.cols_; ++k) {
      const FieldElement& aik = a(i, k);
      if (aik.is_zero()) continue;
      for (std::size_t j = 0; j < b.cols_; ++j) {
        const FieldElement& bkj = b(k, j);
        if (bkj.is_zero()) continue;
        m.data_[i * b.cols_ + j] += aik * bkj;
      }
    }
  }
  return m;
}

ExactMatrix operator*(const FieldElement& s, const ExactMatrix& a) {
  ExactMatrix m = a.lifted(common_field(a.field_, s.field()));
  for (auto& e : m.data_) e *= s;
  return m;
}

Vector operator*(const ExactMatrix& a, const Vector& v) {
  if (v.size() != a.cols_) throw UsageError("matrix-vector shape mismatch");
  Vector out(a.rows_, FieldElement::zero(a.field_));
  for (std::size_t i = 0; i < a.rows_; ++i) {
    for (std::size_t j = 0; j < a.cols_; ++j) {
      if (a(i, j).is_zero() || v[j].is_zero()) continue;
      out[i] += a(i, j) * v[j];
    }
  }
  return out;
}

bool operator==(const ExactMatrix& a, const ExactMatrix& b) {
  if (a.rows_ != b.rows_ || a.cols_ != b.cols_) return false;
  for (std::size_t k = 0; k < a.data_.size(); ++k) {
    if (a.data_[k] != b.data_[k]) return false;
  }
  return true;
}

RrefResult rref(const ExactMatrix& m) {
  ExactMatrix r = m;
  std::vector<std::size_t> pivots;
  std::size_t row = 0;
  for (std::size_t col = 0; col < r.cols() && row < r.rows(); ++col) {
    std::size_t piv = row;
    while (piv < r.rows() && r(piv, col).is_zero()) ++piv;
    if (piv == r.rows()) continue;
    if (piv != row) {
      for (std::size_t j = 0; j < r.cols(); ++j) {
        FieldElement tmp = r(row, j);
        r.set(row, j, r(piv, j));
        r.set(piv, j, tmp);
      }
    }
    const FieldElement inv = r(row, col).inverse();
    for (std::size_t j = col; j < r.cols(); ++j) r.set(row, j, r(row, j) * inv);
    for (std::size_t i = 0; i < r.rows(); ++i) {
      if (i == row || r(i, col).is_zero()) continue;
      const FieldElement factor = r(i, col);
      for (std::size_t j = col; j < r.cols(); ++j) {
        if (r(row, j).is_zero()) continue;
        r.set(i, j, r(i, j) - factor * r(row, j));
      }
    }
    pivots.push_back(col);
    ++row;
  }
  return {std::move(r), std::move(pivots)};
}

std::size_t rank(const ExactMatrix& m) { return rref(m).pivot_columns.size(); }

FieldElement determinant(const ExactMatrix& m) {
  if (m.rows() != m.cols()) throw UsageError("determinant of a non-square matrix");
  ExactMatrix r = m;
  FieldElement det = FieldElement::one(m.field());
  const std::size_t n = m.rows();
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t piv = col;
    while (piv < n && r(piv, col).is_zero()) ++piv;
    if (piv == n) return FieldElement::zero(m.field());
    if (piv != col) {
      for (std::size_t j = 0; j < n; ++j) {
        FieldElement tmp = r(col, j);
        r.set(col, j, r(piv, j));
        r.set(piv, j, tmp);
      }
      det = -det;
    }
    det *= r(col, col);
    const FieldElement inv = r(col, col).inverse();
    for (std::size_t i = col + 1; i < n; ++i) {
      if (r(i, col).is_zero()) continue;
      const FieldElement factor = r(i, col) * inv;
      for (std::size_t j = col; j < n; ++j) r.set(i, j, r(i, j) - factor * r(col, j));
    }
  }
  return det;
}

ExactMatrix inverse(const ExactMatrix& m) {
  if (m.rows() != m.cols()) throw UsageError("inverse of a non-square matrix");
  const std::size_t n = m.rows();
  RrefResult rr = rref(m.hstack(ExactMatrix::identity(n, m.field())));
  if (rr.pivot_columns.size() < n || rr.pivot_columns[n - 1] != n - 1) throw SingularMatrix("matrix is singular");
  ExactMatrix inv(n, n, rr.reduced.field());
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) inv.set(i, j, rr.reduced(i, n + j));
  }
  return inv;
}

std::vector<Vector> kernel(const ExactMatrix& m) {
  RrefResult rr = rref(m);
  std::vector<bool> is_pivot(m.cols(), false);
  for (std::size_t c : rr.pivot_columns) is_pivot[c] = true;
  std::vector<Vector> basis;
  const Field& f = rr.reduced.field();
  for (std::size_t free = 0; free < m.cols(); ++free) {
    if (is_pivot[free]) continue;
    Vector v(m.cols(), FieldElement::zero(f));
    v[free] = FieldElement::one(f);
    for (std::size_t k = 0; k < rr.pivot_columns.size(); ++k) v[rr.pivot_columns[k]] = -rr.reduced(k, free);
    basis.push_back(std::move(v));
  }
  return basis;
}

SolveResult solve_linear(const ExactMatrix& a, const Vector& b) {
  if (b.size() != a.rows()) throw UsageError("right-hand side length mismatch");
  ExactMatrix rhs = ExactMatrix::from_columns({b}, a.rows(), a.field());
  RrefResult rr = rref(a.hstack(rhs));
  const std::size_t n = a.cols();
  if (!rr.pivot_columns.empty() && rr.pivot_columns.back() == n) return NoSolution{};
  const Field& f = rr.reduced.field();
  Vector x0(n, FieldElement::zero(f));
  for (std::size_t k = 0; k < rr.pivot_columns.size(); ++k) x0[rr.pivot_columns[k]] = rr.reduced(k, n);
  if (rr.pivot_columns.size() == n) return Unique{std::move(x0)};
  return Affine{std::move(x0), kernel(a.lifted(f))};
}

std::size_t span_dim(const ExactMatrix& u) { return rank(u); }

std::size_t intersection_dim(const ExactMatrix& u, const ExactMatrix& w) {
  return rank(u) + rank(w) - rank(u.hstack(w));
}

ExactMatrix column_basis(const ExactMatrix& u) {
  RrefResult rr = rref(u);
  std::vector<Vector> cols;
  for (std::size_t c : rr.pivot_columns) cols.push_back(u.column(c));
  return ExactMatrix::from_columns(cols, u.rows(), u.field());
}

ExactMatrix perp(const ExactMatrix& u, const ExactMatrix& gram) {
  ExactMatrix pairing = u.transpose() * gram;  // rows: u_k^T G
  auto basis = kernel(pairing);
  return ExactMatrix::from_columns(basis, gram.rows(), pairing.field());
}

bool same_span(const ExactMatrix& u, const ExactMatrix& w) {
  const std::size_t ru = rank(u);
  return ru == rank(w) && rank(u.hstack(w)) == ru;
}

std::vector<int> nilpotent_jordan_multiset(const ExactMatrix& n) {
  if (n.rows() != n.cols()) throw UsageError("Jordan type of a non-square matrix");
  const std::size_t dim = n.rows();
  std::vector<std::size_t> r{dim};  // r[s] = rank(N^s)
  ExactMatrix power = ExactMatrix::identity(dim, n.field());
  for (std::size_t s = 1; s <= dim; ++s) {
    power = power * n;
    r.push_back(rank(power));
  }
  if (r[dim] != 0) throw NotNilpotent("N^dim is nonzero");
  r.push_back(0);
  std::vector<int> sizes;
  for (std::size_t s = dim; s >= 1; --s) {
    const long long mult = static_cast<long long>(r[s - 1]) - 2 * static_cast<long long>(r[s]) +
                           static_cast<long long>(r[s + 1]);
    for (long long k = 0; k < mult; ++k) sizes.push_back(static_cast<int>(s));
  }
  return sizes;
}

FieldElement dot(const Vector& a, const Vector& b) {
  if (a.size() != b.size()) throw UsageError("dot length mismatch");
  if (a.empty()) throw UsageError("dot of empty vectors");
  FieldElement acc = FieldElement::zero(common_field(a[0].field(), b[0].field()));
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i].is_zero() || b[i].is_zero()) continue;
    acc += a[i] * b[i];
  }
  return acc;
}

FieldElement bilinear(const ExactMatrix& gram, const Vector& a, const Vector& b) { return dot(a, gram * b); }

}  // namespace ellhomog
