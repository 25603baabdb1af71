#include "pedc/linalg.hpp"

#include <string>
#include <utility>

namespace pedc {

FieldVector::FieldVector(std::vector<FieldElement> elems)
    : elems_(std::move(elems)) {
  if (elems_.empty()) throw DimensionError("empty field vector");
  const std::uint64_t q = elems_.front().modulus();
  for (const auto& e : elems_) {
    if (e.modulus() != q) {
      throw ModulusMismatchError("vector mixes moduli " + std::to_string(q) +
                                 " and " + std::to_string(e.modulus()));
    }
  }
}

FieldVector FieldVector::zeros(std::size_t len, std::uint64_t q) {
  return FieldVector(std::vector<FieldElement>(len, FieldElement(0, q)));
}

FieldVector FieldVector::from_values(const std::vector<std::uint64_t>& values,
                                     std::uint64_t q) {
  std::vector<FieldElement> elems;
  elems.reserve(values.size());
  for (std::uint64_t v : values) elems.emplace_back(v, q);
  return FieldVector(std::move(elems));
}

FieldElement FieldVector::dot(const FieldVector& rhs) const {
  if (size() != rhs.size()) {
    throw DimensionError("dot: length " + std::to_string(size()) + " vs " +
                         std::to_string(rhs.size()));
  }
  FieldElement acc(0, modulus());
  for (std::size_t i = 0; i < size(); ++i) acc = acc + elems_[i] * rhs[i];
  return acc;
}

FieldVector FieldVector::operator+(const FieldVector& rhs) const {
  if (size() != rhs.size()) {
    throw DimensionError("add: length " + std::to_string(size()) + " vs " +
                         std::to_string(rhs.size()));
  }
  std::vector<FieldElement> out;
  out.reserve(size());
  for (std::size_t i = 0; i < size(); ++i) out.push_back(elems_[i] + rhs[i]);
  return FieldVector(std::move(out));
}

FieldVector FieldVector::scaled(const FieldElement& c) const {
  std::vector<FieldElement> out;
  out.reserve(size());
  for (const auto& e : elems_) out.push_back(e * c);
  return FieldVector(std::move(out));
}

FieldMatrix::FieldMatrix(std::size_t rows, std::size_t cols, std::uint64_t q)
    : rows_(rows), cols_(cols), data_(rows * cols, FieldElement(0, q)) {
  if (rows == 0 || cols == 0) throw DimensionError("empty matrix");
}

FieldMatrix FieldMatrix::from_rows(const std::vector<FieldVector>& rows) {
  if (rows.empty()) throw DimensionError("matrix from zero rows");
  FieldMatrix m(rows.size(), rows.front().size(), rows.front().modulus());
  for (std::size_t r = 0; r < rows.size(); ++r) {
    if (rows[r].size() != m.cols_) {
      throw DimensionError("ragged rows: " + std::to_string(rows[r].size()) +
                           " vs " + std::to_string(m.cols_));
    }
    for (std::size_t c = 0; c < m.cols_; ++c) m.set(r, c, rows[r][c]);
  }
  return m;
}

const FieldElement& FieldMatrix::at(std::size_t r, std::size_t c) const {
  if (r >= rows_ || c >= cols_) throw DimensionError("matrix index out of range");
  return data_[r * cols_ + c];
}

void FieldMatrix::set(std::size_t r, std::size_t c, const FieldElement& v) {
  if (r >= rows_ || c >= cols_) throw DimensionError("matrix index out of range");
  if (v.modulus() != data_.front().modulus()) {
    throw ModulusMismatchError("matrix entry modulus mismatch");
  }
  data_[r * cols_ + c] = v;
}

FieldVector FieldMatrix::row(std::size_t r) const {
  std::vector<FieldElement> out(data_.begin() + r * cols_,
                                data_.begin() + (r + 1) * cols_);
  return FieldVector(std::move(out));
}

FieldVector FieldMatrix::mul(const FieldVector& x) const {
  if (x.size() != cols_) {
    throw DimensionError("mul: " + std::to_string(cols_) + " cols vs vector " +
                         std::to_string(x.size()));
  }
  std::vector<FieldElement> out;
  out.reserve(rows_);
  for (std::size_t r = 0; r < rows_; ++r) out.push_back(row(r).dot(x));
  return FieldVector(std::move(out));
}

FieldVector solve_linear(const FieldMatrix& a, const FieldVector& b) {
  if (a.rows() != a.cols()) {
    throw DimensionError("solve_linear needs a square matrix, got " +
                         std::to_string(a.rows()) + "x" +
                         std::to_string(a.cols()));
  }
  if (b.size() != a.rows()) {
    throw DimensionError("solve_linear: rhs length mismatch");
  }
  if (a.modulus() != b.modulus()) {
    throw ModulusMismatchError("solve_linear: matrix/rhs moduli differ");
  }

  const std::size_t n = a.rows();

  // Working copy of the augmented system.
  std::vector<std::vector<FieldElement>> m(n);
  for (std::size_t r = 0; r < n; ++r) {
    m[r].reserve(n + 1);
    for (std::size_t c = 0; c < n; ++c) m[r].push_back(a.at(r, c));
    m[r].push_back(b[r]);
  }

  for (std::size_t col = 0; col < n; ++col) {
    // First nonzero entry on or below the diagonal.
    std::size_t pivot = col;
    while (pivot < n && m[pivot][col].is_zero()) ++pivot;
    if (pivot == n) {
      throw SingularMatrixError("no pivot in column " + std::to_string(col));
    }
    std::swap(m[col], m[pivot]);

    const FieldElement inv_pivot = m[col][col].inv();
    for (std::size_t c = col; c <= n; ++c) m[col][c] = m[col][c] * inv_pivot;

    for (std::size_t r = 0; r < n; ++r) {
      if (r == col || m[r][col].is_zero()) continue;
      const FieldElement factor = m[r][col];
      for (std::size_t c = col; c <= n; ++c) {
        m[r][c] = m[r][c] - factor * m[col][c];
      }
    }
  }

  std::vector<FieldElement> x;
  x.reserve(n);
  for (std::size_t r = 0; r < n; ++r) x.push_back(m[r][n]);
  return FieldVector(std::move(x));
}

}  // namespace pedc
