#include "qspir/gf2.h"

#include <algorithm>
#include <stdexcept>

namespace qspir::gf2 {

Matrix::Matrix(std::size_t rows, std::size_t cols)
    : rows_(rows), cols_(cols), data_(rows, BitVector(cols)) {}

BitVector Matrix::column(std::size_t c) const {
  BitVector out(rows_);
  for (std::size_t r = 0; r < rows_; ++r) {
    if (data_[r][c]) out.set(r, true);
  }
  return out;
}

BitVector Matrix::multiply(const BitVector& v) const {
  if (v.size() != cols_) throw std::invalid_argument("matrix-vector dimension mismatch");
  BitVector out(rows_);
  for (std::size_t r = 0; r < rows_; ++r) {
    if (data_[r].dot(v)) out.set(r, true);
  }
  return out;
}

Matrix Matrix::transpose() const {
  Matrix t(cols_, rows_);
  for (std::size_t r = 0; r < rows_; ++r) {
    for (std::size_t c = 0; c < cols_; ++c) {
      if (data_[r][c]) t.set(c, r, true);
    }
  }
  return t;
}

bool Basis::insert(BitVector v) {
  if (v.size() != dim_) throw std::invalid_argument("basis vector dimension mismatch");
  v = reduce(std::move(v));
  const std::size_t lead = v.first_set();
  if (lead == dim_) return false;
  // Keep the basis fully reduced: clear the new lead from existing vectors.
  for (auto& b : vectors_) {
    if (b[lead]) b ^= v;
  }
  const auto pos = std::lower_bound(leads_.begin(), leads_.end(), lead) - leads_.begin();
  leads_.insert(leads_.begin() + pos, lead);
  vectors_.insert(vectors_.begin() + pos, std::move(v));
  return true;
}

BitVector Basis::reduce(BitVector v) const {
  if (v.size() != dim_) throw std::invalid_argument("basis vector dimension mismatch");
  for (std::size_t i = 0; i < vectors_.size(); ++i) {
    if (v[leads_[i]]) v ^= vectors_[i];
  }
  return v;
}

std::vector<BitVector> Basis::vectors() const { return vectors_; }

bool Basis::operator==(const Basis& other) const {
  return dim_ == other.dim_ && leads_ == other.leads_ && vectors_ == other.vectors_;
}

Basis column_space(const Matrix& m) {
  Basis basis(m.rows());
  for (std::size_t c = 0; c < m.cols(); ++c) basis.insert(m.column(c));
  return basis;
}

std::size_t rank(const Matrix& m) {
  Basis basis(m.cols());
  for (std::size_t r = 0; r < m.rows(); ++r) basis.insert(m.row(r));
  return basis.dimension();
}

bool colspace_member(const Matrix& m, const BitVector& v) {
  if (v.size() != m.rows()) {
    throw std::invalid_argument("colspace_member: vector length must equal row count");
  }
  return column_space(m).contains(v);
}

}  // namespace qspir::gf2
