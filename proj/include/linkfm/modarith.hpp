#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace linkfm {

/// Raised when an argument violates an operation's precondition. Every
/// message names the offending value.
class InvalidInput : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Raised when a search or scan would exceed its configured budget.
class BudgetExceeded : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// ---------------------------------------------------------------------------
// Word-size modular helpers. All products go through 128-bit intermediates so
// any modulus below 2^64 is safe.
// ---------------------------------------------------------------------------

inline std::uint64_t mul_mod(std::uint64_t a, std::uint64_t b, std::uint64_t m) {
  return static_cast<std::uint64_t>(static_cast<unsigned __int128>(a) * b % m);
}

std::uint64_t pow_mod(std::uint64_t base, std::uint64_t exp, std::uint64_t m);

/// Inverse of a modulo m; requires gcd(a, m) = 1.
std::uint64_t inv_mod(std::uint64_t a, std::uint64_t m);

/// Arithmetic in F_p with canonical residues in [0, p).
struct PrimeField {
  std::uint32_t p;

  std::uint32_t reduce(std::int64_t x) const {
    auto r = x % static_cast<std::int64_t>(p);
    return static_cast<std::uint32_t>(r < 0 ? r + p : r);
  }
  std::uint32_t add(std::uint32_t a, std::uint32_t b) const { return (a + b) % p; }
  std::uint32_t sub(std::uint32_t a, std::uint32_t b) const { return (a + p - b) % p; }
  std::uint32_t neg(std::uint32_t a) const { return (p - a) % p; }
  std::uint32_t mul(std::uint32_t a, std::uint32_t b) const {
    return static_cast<std::uint32_t>(std::uint64_t{a} * b % p);
  }
  std::uint32_t inv(std::uint32_t a) const {
    return static_cast<std::uint32_t>(inv_mod(a, p));
  }
  std::uint32_t div(std::uint32_t a, std::uint32_t b) const { return mul(a, inv(b)); }
};

/// Deterministic for every n < 2^64 (Miller-Rabin on the first twelve prime
/// bases). Throws InvalidInput for n < 2.
bool is_prime(std::uint64_t n);

/// Throws InvalidInput unless p is an odd prime that fits in 32 bits.
void require_odd_prime(std::uint64_t p);

/// Distinct prime factors of n by trial division, ascending.
std::vector<std::uint64_t> prime_factors(std::uint64_t n);

std::uint64_t smallest_primitive_root(std::uint64_t q);

/// An eligible prime for a fixed odd prime p: q = 1 (mod p), q != 1 (mod p^2).
struct PrimeRecord {
  std::uint64_t q = 0;
  std::uint32_t p = 0;
  std::uint32_t c = 0;     ///< ((q - 1) / p) mod p, never zero
  std::uint64_t g = 0;     ///< primitive root mod q
  std::uint64_t zeta = 0;  ///< g^((q - 1) / p) mod q, exact order p

  /// Validates eligibility and fills c and zeta. If root is zero the smallest
  /// primitive root is used; otherwise root must be a primitive root mod q.
  static PrimeRecord make(std::uint64_t q, std::uint32_t p, std::uint64_t root = 0);

  bool operator==(const PrimeRecord&) const = default;
};

/// Every eligible prime q <= bound, ascending.
std::vector<PrimeRecord> eligible_primes(std::uint32_t p, std::uint64_t bound);

/// Why q fails eligibility for p, or an empty string when it is eligible.
std::string eligibility_error(std::uint64_t q, std::uint32_t p);

/// The l in F_p with a^((q-1)/p) = zeta^(-l) mod q, i.e. a = g^(-l) up to a
/// p-th power. Throws InvalidInput when q divides a.
std::uint32_t linking_number(std::uint64_t a, const PrimeRecord& qj);

/// True iff a^((q-1)/p) = 1 mod q. Throws InvalidInput when q divides a.
bool pth_power_residue(std::uint64_t a, const PrimeRecord& q);

}  // namespace linkfm
