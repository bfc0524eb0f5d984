#pragma once

#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <vector>

namespace linkfm {

/// Dense square matrix of residues. The modulus is not stored; every
/// arithmetic helper takes it explicitly and returns canonical residues.
class Matrix {
 public:
  Matrix() = default;
  explicit Matrix(std::size_t n) : n_(n), a_(n * n, 0) {}
  Matrix(std::initializer_list<std::initializer_list<std::int64_t>> rows, std::uint64_t mod);

  static Matrix identity(std::size_t n);

  std::size_t n() const { return n_; }
  std::uint64_t& operator()(std::size_t i, std::size_t j) { return a_[i * n_ + j]; }
  std::uint64_t operator()(std::size_t i, std::size_t j) const { return a_[i * n_ + j]; }
  const std::vector<std::uint64_t>& entries() const { return a_; }
  std::vector<std::uint64_t>& entries() { return a_; }

  bool is_zero() const;

  bool operator==(const Matrix&) const = default;

 private:
  std::size_t n_ = 0;
  std::vector<std::uint64_t> a_;
};

/// n x n matrix over F_p with entries in [0, p).
using SquareMatrixFp = Matrix;

Matrix add(const Matrix& a, const Matrix& b, std::uint64_t mod);
Matrix sub(const Matrix& a, const Matrix& b, std::uint64_t mod);
Matrix scale(const Matrix& a, std::uint64_t s, std::uint64_t mod);
Matrix multiply(const Matrix& a, const Matrix& b, std::uint64_t mod);
Matrix power(const Matrix& a, std::uint64_t k, std::uint64_t mod);
/// ab - ba
Matrix commutator(const Matrix& a, const Matrix& b, std::uint64_t mod);
Matrix reduce(const Matrix& a, std::uint64_t mod);
std::uint64_t trace(const Matrix& a, std::uint64_t mod);
std::uint64_t determinant(const Matrix& a, std::uint64_t mod);

}  // namespace linkfm
