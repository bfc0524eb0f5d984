#include "linkfm/matrix.hpp"

#include <algorithm>
#include <stdexcept>

#include "linkfm/modarith.hpp"

namespace linkfm {

namespace {

void require_same_shape(const Matrix& a, const Matrix& b) {
  if (a.n() != b.n()) throw InvalidInput("matrix dimension mismatch");
}

std::uint64_t canon(std::int64_t x, std::uint64_t mod) {
  auto m = static_cast<std::int64_t>(mod);
  auto r = x % m;
  return static_cast<std::uint64_t>(r < 0 ? r + m : r);
}

}  // namespace

Matrix::Matrix(std::initializer_list<std::initializer_list<std::int64_t>> rows,
               std::uint64_t mod)
    : Matrix(rows.size()) {
  std::size_t i = 0;
  for (const auto& row : rows) {
    if (row.size() != n_) throw InvalidInput("matrix literal is not square");
    std::size_t j = 0;
    for (auto v : row) (*this)(i, j++) = canon(v, mod);
    ++i;
  }
}

Matrix Matrix::identity(std::size_t n) {
  Matrix m(n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1;
  return m;
}

bool Matrix::is_zero() const {
  return std::all_of(a_.begin(), a_.end(), [](auto v) { return v == 0; });
}

Matrix add(const Matrix& a, const Matrix& b, std::uint64_t mod) {
  require_same_shape(a, b);
  Matrix out(a.n());
  for (std::size_t k = 0; k < a.entries().size(); ++k) {
    out.entries()[k] = (a.entries()[k] % mod + b.entries()[k] % mod) % mod;
  }
  return out;
}

Matrix sub(const Matrix& a, const Matrix& b, std::uint64_t mod) {
  require_same_shape(a, b);
  Matrix out(a.n());
  for (std::size_t k = 0; k < a.entries().size(); ++k) {
    out.entries()[k] = (a.entries()[k] % mod + mod - b.entries()[k] % mod) % mod;
  }
  return out;
}

Matrix scale(const Matrix& a, std::uint64_t s, std::uint64_t mod) {
  Matrix out(a.n());
  for (std::size_t k = 0; k < a.entries().size(); ++k) {
    out.entries()[k] = mul_mod(a.entries()[k], s, mod);
  }
  return out;
}

Matrix multiply(const Matrix& a, const Matrix& b, std::uint64_t mod) {
  require_same_shape(a, b);
  const auto n = a.n();
  Matrix out(n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      std::uint64_t acc = 0;
      for (std::size_t k = 0; k < n; ++k) acc = (acc + mul_mod(a(i, k), b(k, j), mod)) % mod;
      out(i, j) = acc;
    }
  }
  return out;
}

Matrix power(const Matrix& a, std::uint64_t k, std::uint64_t mod) {
  Matrix result = reduce(Matrix::identity(a.n()), mod);
  Matrix base = reduce(a, mod);
  while (k > 0) {
    if (k & 1) result = multiply(result, base, mod);
    base = multiply(base, base, mod);
    k >>= 1;
  }
  return result;
}

Matrix commutator(const Matrix& a, const Matrix& b, std::uint64_t mod) {
  return sub(multiply(a, b, mod), multiply(b, a, mod), mod);
}

Matrix reduce(const Matrix& a, std::uint64_t mod) {
  Matrix out(a.n());
  for (std::size_t k = 0; k < a.entries().size(); ++k) out.entries()[k] = a.entries()[k] % mod;
  return out;
}

std::uint64_t trace(const Matrix& a, std::uint64_t mod) {
  std::uint64_t t = 0;
  for (std::size_t i = 0; i < a.n(); ++i) t = (t + a(i, i) % mod) % mod;
  return t;
}

std::uint64_t determinant(const Matrix& a, std::uint64_t mod) {
  // Division-free Laplace expansion; only used for n <= 3.
  const auto n = a.n();
  if (n == 0) return 1 % mod;
  if (n == 1) return a(0, 0) % mod;
  std::uint64_t det = 0;
  for (std::size_t col = 0; col < n; ++col) {
    Matrix minor(n - 1);
    for (std::size_t i = 1; i < n; ++i) {
      std::size_t mj = 0;
      for (std::size_t j = 0; j < n; ++j) {
        if (j == col) continue;
        minor(i - 1, mj++) = a(i, j);
      }
    }
    auto term = mul_mod(a(0, col) % mod, determinant(minor, mod), mod);
    det = (col % 2 == 0) ? (det + term) % mod : (det + mod - term) % mod;
  }
  return det;
}

}  // namespace linkfm
