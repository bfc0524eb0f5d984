#include "linkfm/modarith.hpp"

#include <array>
#include <limits>

namespace linkfm {

std::uint64_t pow_mod(std::uint64_t base, std::uint64_t exp, std::uint64_t m) {
  if (m == 1) return 0;
  std::uint64_t result = 1;
  base %= m;
  while (exp > 0) {
    if (exp & 1) result = mul_mod(result, base, m);
    base = mul_mod(base, base, m);
    exp >>= 1;
  }
  return result;
}

std::uint64_t inv_mod(std::uint64_t a, std::uint64_t m) {
  __int128 t = 0, new_t = 1;
  __int128 r = m, new_r = a % m;
  while (new_r != 0) {
    __int128 quot = r / new_r;
    __int128 tmp = t - quot * new_t;
    t = new_t;
    new_t = tmp;
    tmp = r - quot * new_r;
    r = new_r;
    new_r = tmp;
  }
  if (r != 1) {
    throw InvalidInput("inv_mod: " + std::to_string(a) + " is not invertible mod " +
                       std::to_string(m));
  }
  if (t < 0) t += m;
  return static_cast<std::uint64_t>(t);
}

namespace {

bool miller_rabin_round(std::uint64_t n, std::uint64_t a, std::uint64_t d, int s) {
  std::uint64_t x = pow_mod(a, d, n);
  if (x == 1 || x == n - 1) return true;
  for (int r = 1; r < s; ++r) {
    x = mul_mod(x, x, n);
    if (x == n - 1) return true;
  }
  return false;
}

}  // namespace

bool is_prime(std::uint64_t n) {
  if (n < 2) throw InvalidInput("is_prime: input must be >= 2, got " + std::to_string(n));
  // These bases are sufficient for all n < 3.3 * 10^24.
  static constexpr std::array<std::uint64_t, 12> kBases = {2,  3,  5,  7,  11, 13,
                                                           17, 19, 23, 29, 31, 37};
  for (auto b : kBases) {
    if (n == b) return true;
    if (n % b == 0) return false;
  }
  std::uint64_t d = n - 1;
  int s = 0;
  while ((d & 1) == 0) {
    d >>= 1;
    ++s;
  }
  for (auto b : kBases) {
    if (!miller_rabin_round(n, b, d, s)) return false;
  }
  return true;
}

void require_odd_prime(std::uint64_t p) {
  if (p < 3 || p % 2 == 0 || p > std::numeric_limits<std::uint32_t>::max() || !is_prime(p)) {
    throw InvalidInput("p must be an odd prime, got " + std::to_string(p));
  }
}

std::vector<std::uint64_t> prime_factors(std::uint64_t n) {
  std::vector<std::uint64_t> out;
  for (std::uint64_t f = 2; f <= n / f; ++f) {
    if (n % f == 0) {
      out.push_back(f);
      while (n % f == 0) n /= f;
    }
  }
  if (n > 1) out.push_back(n);
  return out;
}

namespace {

bool is_generator(std::uint64_t g, std::uint64_t q, const std::vector<std::uint64_t>& factors) {
  if (g % q == 0) return false;
  for (auto r : factors) {
    if (pow_mod(g, (q - 1) / r, q) == 1) return false;
  }
  return true;
}

}  // namespace

std::uint64_t smallest_primitive_root(std::uint64_t q) {
  if (q < 2 || !is_prime(q)) {
    throw InvalidInput("smallest_primitive_root: " + std::to_string(q) + " is not prime");
  }
  if (q == 2) return 1;
  const auto factors = prime_factors(q - 1);
  for (std::uint64_t g = 2;; ++g) {
    if (is_generator(g, q, factors)) return g;
  }
}

std::string eligibility_error(std::uint64_t q, std::uint32_t p) {
  if (q < 2 || !is_prime(q)) return std::to_string(q) + " is not prime";
  if (q % p != 1) return std::to_string(q) + " is not congruent to 1 mod " + std::to_string(p);
  const std::uint64_t p2 = std::uint64_t{p} * p;
  if (q % p2 == 1) {
    return std::to_string(q) + " is congruent to 1 mod " + std::to_string(p2);
  }
  return {};
}

PrimeRecord PrimeRecord::make(std::uint64_t q, std::uint32_t p, std::uint64_t root) {
  require_odd_prime(p);
  if (auto err = eligibility_error(q, p); !err.empty()) throw InvalidInput(err);
  PrimeRecord rec;
  rec.q = q;
  rec.p = p;
  rec.c = static_cast<std::uint32_t>(((q - 1) / p) % p);
  if (root == 0) {
    rec.g = smallest_primitive_root(q);
  } else {
    if (!is_generator(root % q, q, prime_factors(q - 1))) {
      throw InvalidInput(std::to_string(root) + " is not a primitive root mod " +
                         std::to_string(q));
    }
    rec.g = root % q;
  }
  rec.zeta = pow_mod(rec.g, (q - 1) / p, q);
  return rec;
}

std::vector<PrimeRecord> eligible_primes(std::uint32_t p, std::uint64_t bound) {
  require_odd_prime(p);
  std::vector<PrimeRecord> out;
  const std::uint64_t p2 = std::uint64_t{p} * p;
  // q = 1 + k p with k not divisible by p; k = 1 gives q = p + 1, even, never prime.
  for (std::uint64_t q = 1 + 2ULL * p; q <= bound; q += 2ULL * p) {
    if (q % p2 == 1) continue;
    if (is_prime(q)) out.push_back(PrimeRecord::make(q, p));
    if (q > std::numeric_limits<std::uint64_t>::max() - 2ULL * p) break;
  }
  return out;
}

namespace {

void require_unit(std::uint64_t a, const PrimeRecord& rec) {
  if (a % rec.q == 0) {
    throw InvalidInput(std::to_string(a) + " is divisible by " + std::to_string(rec.q));
  }
}

}  // namespace

std::uint32_t linking_number(std::uint64_t a, const PrimeRecord& qj) {
  require_unit(a, qj);
  const std::uint64_t projected = pow_mod(a, (qj.q - 1) / qj.p, qj.q);
  std::uint64_t power = 1;
  for (std::uint32_t e = 0; e < qj.p; ++e) {
    if (power == projected) return (qj.p - e) % qj.p;
    power = mul_mod(power, qj.zeta, qj.q);
  }
  throw std::logic_error("linking_number: projection of " + std::to_string(a) +
                         " is outside the order-p subgroup mod " + std::to_string(qj.q));
}

bool pth_power_residue(std::uint64_t a, const PrimeRecord& q) {
  require_unit(a, q);
  return pow_mod(a, (q.q - 1) / q.p, q.q) == 1;
}

}  // namespace linkfm
