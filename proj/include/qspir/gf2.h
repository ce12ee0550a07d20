#pragma once

#include <cstddef>
#include <vector>

#include "qspir/bit_vector.h"

namespace qspir::gf2 {

// Dense matrix over GF(2), stored as packed rows.
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }

  bool get(std::size_t r, std::size_t c) const { return data_[r][c]; }
  void set(std::size_t r, std::size_t c, bool v) { data_[r].set(c, v); }
  void flip(std::size_t r, std::size_t c) { data_[r].flip(c); }

  const BitVector& row(std::size_t r) const { return data_[r]; }
  BitVector& row(std::size_t r) { return data_[r]; }
  BitVector column(std::size_t c) const;

  // Matrix-vector product M·v.
  BitVector multiply(const BitVector& v) const;
  Matrix transpose() const;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<BitVector> data_;
};

// Subspace of GF(2)^dim kept in reduced echelon form: every basis vector
// has a distinct leading (lowest-index) bit that is clear in all others, so
// reduce() yields a canonical coset representative.
class Basis {
 public:
  explicit Basis(std::size_t dim) : dim_(dim) {}

  // Returns true if `v` was independent of the current span.
  bool insert(BitVector v);
  BitVector reduce(BitVector v) const;
  bool contains(const BitVector& v) const { return reduce(v).none(); }

  std::size_t dimension() const { return vectors_.size(); }
  std::size_t ambient_dimension() const { return dim_; }
  // Basis vectors ordered by leading bit.
  std::vector<BitVector> vectors() const;

  bool operator==(const Basis& other) const;

 private:
  std::size_t dim_;
  std::vector<BitVector> vectors_;
  std::vector<std::size_t> leads_;
};

std::size_t rank(const Matrix& m);
Basis column_space(const Matrix& m);
// True iff v lies in the column space of m. Throws std::invalid_argument if
// |v| differs from the row count.
bool colspace_member(const Matrix& m, const BitVector& v);

}  // namespace qspir::gf2
