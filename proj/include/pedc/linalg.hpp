#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "pedc/field.hpp"

namespace pedc {

// Nonempty vector of field symbols sharing one modulus.
class FieldVector {
 public:
  explicit FieldVector(std::vector<FieldElement> elems);

  static FieldVector zeros(std::size_t len, std::uint64_t q);
  static FieldVector from_values(const std::vector<std::uint64_t>& values,
                                 std::uint64_t q);

  std::size_t size() const { return elems_.size(); }
  std::uint64_t modulus() const { return elems_.front().modulus(); }
  const FieldElement& operator[](std::size_t i) const { return elems_[i]; }
  const std::vector<FieldElement>& elements() const { return elems_; }

  FieldElement dot(const FieldVector& rhs) const;
  FieldVector operator+(const FieldVector& rhs) const;
  FieldVector scaled(const FieldElement& c) const;

  bool operator==(const FieldVector&) const = default;

 private:
  std::vector<FieldElement> elems_;
};

// Rectangular matrix of field symbols, row-major, one modulus.
class FieldMatrix {
 public:
  // Zero-filled.
  FieldMatrix(std::size_t rows, std::size_t cols, std::uint64_t q);

  static FieldMatrix from_rows(const std::vector<FieldVector>& rows);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  std::uint64_t modulus() const { return data_.front().modulus(); }

  const FieldElement& at(std::size_t r, std::size_t c) const;
  void set(std::size_t r, std::size_t c, const FieldElement& v);

  FieldVector row(std::size_t r) const;
  FieldVector mul(const FieldVector& x) const;

  bool operator==(const FieldMatrix&) const = default;

 private:
  std::size_t rows_;
  std::size_t cols_;
  std::vector<FieldElement> data_;
};

// Solves A x = b by Gaussian elimination with first-nonzero pivoting
// (exact arithmetic makes pivot magnitude irrelevant). Throws
// SingularMatrixError when no unique solution exists.
FieldVector solve_linear(const FieldMatrix& a, const FieldVector& b);

}  // namespace pedc
