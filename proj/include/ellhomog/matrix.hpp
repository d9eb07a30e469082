#pragma once

// Dense exact matrices over a Field and the elimination routines built on them.

#include <cstddef>
#include <variant>
#include <vector>

#include "ellhomog/field.hpp"

namespace ellhomog {

using Vector = std::vector<FieldElement>;

class ExactMatrix {
 public:
  ExactMatrix() = default;
  ExactMatrix(std::size_t rows, std::size_t cols, Field field);

  static ExactMatrix identity(std::size_t n, const Field& field);
  static ExactMatrix from_columns(const std::vector<Vector>& columns, std::size_t rows, const Field& field);
  static ExactMatrix from_ints(const std::vector<std::vector<long long>>& rows, const Field& field);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  const Field& field() const { return field_; }

  const FieldElement& operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }
  // Entries from an ancestor field are lifted; deeper entries are rejected.
  void set(std::size_t i, std::size_t j, const FieldElement& value);

  Vector column(std::size_t j) const;
  Vector row(std::size_t i) const;
  ExactMatrix transpose() const;
  ExactMatrix lifted(const Field& target) const;
  // Columns of *this followed by columns of other.
  ExactMatrix hstack(const ExactMatrix& other) const;
  ExactMatrix pow(unsigned exponent) const;
  bool is_zero() const;

  friend ExactMatrix operator+(const ExactMatrix& a, const ExactMatrix& b);
  friend ExactMatrix operator-(const ExactMatrix& a, const ExactMatrix& b);
  friend ExactMatrix operator*(const ExactMatrix& a, const ExactMatrix& b);
  friend ExactMatrix operator*(const FieldElement& s, const ExactMatrix& a);
  friend Vector operator*(const ExactMatrix& a, const Vector& v);
  friend bool operator==(const ExactMatrix& a, const ExactMatrix& b);
  friend bool operator!=(const ExactMatrix& a, const ExactMatrix& b) { return !(a == b); }

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  Field field_;
  std::vector<FieldElement> data_;
};

struct RrefResult {
  ExactMatrix reduced;
  std::vector<std::size_t> pivot_columns;
};

// Gauss-Jordan; the pivot in each column is the first nonzero entry at or below
// the current row.
RrefResult rref(const ExactMatrix& m);
std::size_t rank(const ExactMatrix& m);
FieldElement determinant(const ExactMatrix& m);
ExactMatrix inverse(const ExactMatrix& m);
// Basis of {x : m x = 0}, one vector per free column.
std::vector<Vector> kernel(const ExactMatrix& m);

struct Unique {
  Vector x;
};
struct Affine {
  Vector x0;
  std::vector<Vector> kernel;
};
struct NoSolution {};
using SolveResult = std::variant<Unique, Affine, NoSolution>;

SolveResult solve_linear(const ExactMatrix& a, const Vector& b);

// Subspaces are given by spanning columns.
std::size_t span_dim(const ExactMatrix& u);
std::size_t intersection_dim(const ExactMatrix& u, const ExactMatrix& w);
// Column basis of the span.
ExactMatrix column_basis(const ExactMatrix& u);
// {x : x^T gram u = 0}, as columns.
ExactMatrix perp(const ExactMatrix& u, const ExactMatrix& gram);
bool same_span(const ExactMatrix& u, const ExactMatrix& w);

// Block sizes of nilpotent n, descending.  Throws NotNilpotent.
std::vector<int> nilpotent_jordan_multiset(const ExactMatrix& n);

FieldElement dot(const Vector& a, const Vector& b);
// a^T gram b
FieldElement bilinear(const ExactMatrix& gram, const Vector& a, const Vector& b);

}  // namespace ellhomog
