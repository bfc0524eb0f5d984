#include "linkfm/lieoracle.hpp"

#include <algorithm>
#include <atomic>
#include <limits>
#include <random>
#include <thread>

namespace linkfm {

nlohmann::ordered_json to_json(const HomWitness& w) {
  nlohmann::ordered_json j;
  j["n"] = w.n;
  j["p"] = w.system.p;
  auto mats = nlohmann::ordered_json::array();
  for (const auto& m : w.mats) {
    auto rows = nlohmann::ordered_json::array();
    for (std::size_t i = 0; i < m.n(); ++i) {
      auto row = nlohmann::ordered_json::array();
      for (std::size_t k = 0; k < m.n(); ++k) row.push_back(m(i, k));
      rows.push_back(row);
    }
    mats.push_back(rows);
  }
  j["mats"] = mats;
  return j;
}

HomWitness witness_from_json(const nlohmann::json& j, const RelationSystem& sys) {
  try {
    HomWitness w;
    w.system = sys;
    w.n = j.at("n").get<std::size_t>();
    if (j.at("p").get<std::uint32_t>() != sys.p) throw InvalidInput("witness JSON: p mismatch");
    for (const auto& jm : j.at("mats")) {
      const auto rows = jm.get<std::vector<std::vector<std::uint64_t>>>();
      if (rows.size() != w.n) throw InvalidInput("witness JSON: wrong matrix dimension");
      Matrix m(w.n);
      for (std::size_t r = 0; r < w.n; ++r) {
        if (rows[r].size() != w.n) throw InvalidInput("witness JSON: wrong matrix dimension");
        for (std::size_t k = 0; k < w.n; ++k) m(r, k) = rows[r][k] % sys.p;
      }
      w.mats.push_back(std::move(m));
    }
    if (w.mats.size() != sys.d()) throw InvalidInput("witness JSON: wrong number of matrices");
    return w;
  } catch (const nlohmann::json::exception& e) {
    throw InvalidInput(std::string("witness JSON: ") + e.what());
  }
}

bool check_hom(const RelationSystem& sys, std::span<const SquareMatrixFp> mats) {
  if (mats.size() != sys.d()) {
    throw InvalidInput("check_hom: expected " + std::to_string(sys.d()) + " matrices, got " +
                       std::to_string(mats.size()));
  }
  if (mats.empty()) return true;
  const auto n = mats.front().n();
  for (const auto& m : mats) {
    if (m.n() != n) throw InvalidInput("check_hom: matrices have differing dimensions");
  }
  const std::uint64_t p = sys.p;
  for (std::size_t i = 0; i < sys.d(); ++i) {
    Matrix acc = scale(mats[i], sys.c[i], p);
    for (std::size_t j = 0; j < sys.d(); ++j) {
      if (j == i || sys.ell(i, j) == 0) continue;
      acc = add(acc, scale(commutator(mats[i], mats[j], p), sys.ell(i, j), p), p);
    }
    if (!acc.is_zero()) return false;
  }
  return true;
}

namespace {

/// Checked a^b; nullopt on overflow.
std::optional<std::uint64_t> checked_pow(std::uint64_t a, std::uint64_t b) {
  std::uint64_t r = 1;
  for (std::uint64_t k = 0; k < b; ++k) {
    if (a != 0 && r > std::numeric_limits<std::uint64_t>::max() / a) return std::nullopt;
    r *= a;
  }
  return r;
}

/// Writes the matrix with the given index, entries row-major. The free
/// entries (all but the last diagonal one when trace_zero) are the base-p
/// digits of idx, most significant first.
void decode_matrix(std::uint64_t idx, std::size_t n, std::uint32_t p, bool trace_zero,
                   std::uint32_t* out) {
  const std::size_t nn = n * n;
  const std::size_t free = trace_zero ? nn - 1 : nn;
  for (std::size_t k = free; k-- > 0;) {
    out[k] = static_cast<std::uint32_t>(idx % p);
    idx /= p;
  }
  if (trace_zero) {
    std::uint64_t diag = 0;
    for (std::size_t i = 0; i + 1 < n; ++i) diag += out[i * n + i];
    out[nn - 1] = static_cast<std::uint32_t>((p - diag % p) % p);
  }
}

Matrix matrix_at(std::uint64_t idx, std::size_t n, std::uint32_t p, bool trace_zero) {
  std::vector<std::uint32_t> m(n * n);
  decode_matrix(idx, n, p, trace_zero, m.data());
  Matrix out(n);
  for (std::size_t k = 0; k < m.size(); ++k) out.entries()[k] = m[k];
  return out;
}

/// Enumerates (trace-zero) n x n matrices over F_p by index and evaluates
/// relators on index tuples through precomputed tables.
class RelatorEvaluator {
 public:
  RelatorEvaluator(const RelationSystem& sys, std::size_t n, bool trace_zero,
                   std::uint64_t count)
      : sys_(sys), n_(n), nn_(n * n), trace_zero_(trace_zero), count_(count) {
    if (count_ <= kElementTableLimit) {
      elements_.resize(count_ * nn_);
      std::vector<std::uint32_t> m(nn_);
      for (std::uint64_t idx = 0; idx < count_; ++idx) {
        decode(idx, m.data());
        std::copy(m.begin(), m.end(), elements_.begin() + idx * nn_);
      }
    }
    if (count_ <= kCommutatorTableLimit) {
      commutators_.resize(count_ * count_ * nn_);
      std::vector<std::uint32_t> out(nn_);
      for (std::uint64_t a = 0; a < count_; ++a) {
        for (std::uint64_t b = 0; b < count_; ++b) {
          bracket(element(a), element(b), out.data());
          std::copy(out.begin(), out.end(), commutators_.begin() + (a * count_ + b) * nn_);
        }
      }
    }
  }

  void decode(std::uint64_t idx, std::uint32_t* out) const {
    decode_matrix(idx, n_, sys_.p, trace_zero_, out);
  }

  const std::uint32_t* element(std::uint64_t idx) const {
    if (!elements_.empty()) return elements_.data() + idx * nn_;
    return nullptr;
  }

  Matrix to_matrix(std::uint64_t idx) const { return matrix_at(idx, n_, sys_.p, trace_zero_); }

  /// Scratch buffers owned by one worker.
  struct Scratch {
    std::vector<std::vector<std::uint32_t>> decoded;
  };

  Scratch make_scratch() const {
    Scratch s;
    s.decoded.assign(sys_.d(), std::vector<std::uint32_t>(nn_));
    return s;
  }

  bool satisfies(std::span<const std::uint64_t> tuple, Scratch& s) const {
    const auto d = sys_.d();
    const std::uint64_t p = sys_.p;
    auto mat = [&](std::size_t i) -> const std::uint32_t* {
      if (const auto* e = element(tuple[i])) return e;
      decode(tuple[i], s.decoded[i].data());
      return s.decoded[i].data();
    };
    for (std::size_t i = 0; i < d; ++i) {
      const auto* ai = mat(i);
      for (std::size_t e = 0; e < nn_; ++e) {
        std::uint64_t acc = std::uint64_t{sys_.c[i]} * ai[e];
        for (std::size_t j = 0; j < d; ++j) {
          const auto l = sys_.ell(i, j);
          if (j == i || l == 0) continue;
          if (!commutators_.empty()) {
            acc += l * commutators_[(tuple[i] * count_ + tuple[j]) * nn_ + e];
          } else {
            acc += l * bracket_entry(ai, mat(j), e);
          }
          acc %= p;
        }
        if (acc % p != 0) return false;
      }
    }
    return true;
  }

 private:
  static constexpr std::uint64_t kElementTableLimit = 1ULL << 22;
  static constexpr std::uint64_t kCommutatorTableLimit = 1024;

  std::uint64_t bracket_entry(const std::uint32_t* a, const std::uint32_t* b,
                              std::size_t e) const {
    const std::uint64_t p = sys_.p;
    const std::size_t r = e / n_, c = e % n_;
    std::uint64_t ab = 0, ba = 0;
    for (std::size_t k = 0; k < n_; ++k) {
      ab += std::uint64_t{a[r * n_ + k]} * b[k * n_ + c];
      ba += std::uint64_t{b[r * n_ + k]} * a[k * n_ + c];
    }
    return (ab % p + p - ba % p) % p;
  }

  void bracket(const std::uint32_t* a, const std::uint32_t* b, std::uint32_t* out) const {
    for (std::size_t e = 0; e < nn_; ++e) out[e] = static_cast<std::uint32_t>(bracket_entry(a, b, e));
  }

  const RelationSystem& sys_;
  std::size_t n_, nn_;
  bool trace_zero_;
  std::uint64_t count_;
  std::vector<std::uint32_t> elements_;
  std::vector<std::uint32_t> commutators_;
};

}  // namespace

SearchResult find_nontrivial_hom(const RelationSystem& sys, std::size_t n,
                                 const SearchOptions& opts) {
  if (n == 0) throw InvalidInput("find_nontrivial_hom: dimension must be positive");
  const auto d = sys.d();
  const std::uint64_t free = opts.trace_zero ? n * n - 1 : n * n;
  const auto per_matrix = checked_pow(sys.p, free);
  const auto total = per_matrix ? checked_pow(*per_matrix, d) : std::nullopt;
  if (!per_matrix || !total || *total > opts.budget) {
    return SearchResult{SearchStatus::kInfeasible, std::nullopt, 0};
  }
  SearchResult result{SearchStatus::kNone, std::nullopt, *total};
  if (d == 0 || *per_matrix <= 1) return result;

  const RelatorEvaluator eval(sys, n, opts.trace_zero, *per_matrix);
  const std::uint64_t count = *per_matrix;
  const auto max_jobs = static_cast<unsigned>(std::min<std::uint64_t>(count, 1024));
  const unsigned jobs = std::clamp(opts.jobs, 1u, max_jobs);
  std::atomic<std::uint64_t> best_first{std::numeric_limits<std::uint64_t>::max()};
  std::vector<std::optional<std::vector<std::uint64_t>>> found(jobs);

  auto worker = [&](unsigned w) {
    const std::uint64_t lo = count * w / jobs;
    const std::uint64_t hi = count * (w + 1) / jobs;
    auto scratch = eval.make_scratch();
    std::vector<std::uint64_t> tuple(d, 0);
    for (std::uint64_t first = lo; first < hi; ++first) {
      if (first > best_first.load(std::memory_order_relaxed)) return;
      tuple.assign(d, 0);
      tuple[0] = first;
      while (true) {
        const bool zero = std::all_of(tuple.begin(), tuple.end(), [](auto v) { return v == 0; });
        if (!zero && eval.satisfies(tuple, scratch)) {
          found[w] = tuple;
          auto cur = best_first.load();
          while (first < cur && !best_first.compare_exchange_weak(cur, first)) {
          }
          return;
        }
        // Odometer over positions 1..d-1, last position fastest.
        bool advanced = false;
        for (std::size_t pos = d; pos-- > 1;) {
          if (++tuple[pos] < count) {
            advanced = true;
            break;
          }
          tuple[pos] = 0;
        }
        if (!advanced) break;
      }
    }
  };

  if (jobs == 1) {
    worker(0);
  } else {
    std::vector<std::thread> threads;
    for (unsigned w = 0; w < jobs; ++w) threads.emplace_back(worker, w);
    for (auto& t : threads) t.join();
  }

  for (const auto& f : found) {
    if (!f) continue;
    HomWitness w{sys, n, {}};
    for (auto idx : *f) w.mats.push_back(eval.to_matrix(idx));
    result.status = SearchStatus::kFound;
    result.witness = std::move(w);
    break;
  }
  return result;
}

RelationSystem cycle_system(std::uint32_t p, std::size_t m, std::vector<std::uint32_t> c) {
  if (m < 2) throw InvalidInput("cycle_system: half-length must be at least 2, got " + std::to_string(m));
  if (c.size() != 2 * m) {
    throw InvalidInput("cycle_system: expected " + std::to_string(2 * m) + " coefficients, got " +
                       std::to_string(c.size()));
  }
  const auto d = 2 * m;
  Matrix ell(d);
  for (std::size_t i = 0; i < d; ++i) ell(i, (i + 1) % d) = 1;
  return RelationSystem::make(p, std::move(c), std::move(ell));
}

bool is_nilpotent(const SquareMatrixFp& a, std::uint32_t p) {
  return power(a, a.n(), p).is_zero();
}

ExhaustiveResult lemma_bb_exhaustive(std::size_t n, std::uint32_t p, std::uint64_t budget) {
  require_odd_prime(p);
  if (n == 0 || n >= p) {
    throw InvalidInput("lemma_bb_exhaustive: need 1 <= n < p, got n=" + std::to_string(n));
  }
  const auto per_matrix = checked_pow(p, n * n);
  const auto pairs = per_matrix ? checked_pow(*per_matrix, 2) : std::nullopt;
  if (!pairs || *pairs > budget) return ExhaustiveResult{false, false, 0, 0};

  ExhaustiveResult out;
  std::vector<Matrix> all;
  all.reserve(*per_matrix);
  for (std::uint64_t idx = 0; idx < *per_matrix; ++idx) all.push_back(matrix_at(idx, n, p, false));
  for (const auto& a : all) {
    for (const auto& b : all) {
      ++out.pairs;
      if (commutator(a, b, p) != a) continue;
      ++out.solutions;
      if (!is_nilpotent(a, p)) out.holds = false;
    }
  }
  return out;
}

std::uint64_t TruncatedMatrix::modulus() const {
  return *checked_pow(p, level);
}

TruncatedMatrix TruncatedMatrix::reduced(unsigned new_level) const {
  if (new_level > level) throw InvalidInput("TruncatedMatrix: cannot lift to a higher level");
  TruncatedMatrix out{p, new_level, Matrix()};
  out.m = reduce(m, out.modulus());
  return out;
}

Matrix inverse(const Matrix& a, std::uint64_t mod) {
  const auto n = a.n();
  const auto det = determinant(a, mod);
  const auto det_inv = inv_mod(det, mod);
  if (n == 1) {
    Matrix out(1);
    out(0, 0) = det_inv;
    return out;
  }
  Matrix out(n);
  for (std::size_t r = 0; r < n; ++r) {
    for (std::size_t c = 0; c < n; ++c) {
      Matrix minor(n - 1);
      for (std::size_t i = 0, mi = 0; i < n; ++i) {
        if (i == r) continue;
        for (std::size_t j = 0, mj = 0; j < n; ++j) {
          if (j == c) continue;
          minor(mi, mj++) = a(i, j);
        }
        ++mi;
      }
      auto cof = determinant(minor, mod);
      if ((r + c) % 2 == 1) cof = (mod - cof) % mod;
      out(c, r) = mul_mod(cof, det_inv, mod);  // adjugate is the transposed cofactor matrix
    }
  }
  return out;
}

namespace {

Matrix random_matrix(std::size_t n, std::uint64_t mod, std::mt19937_64& rng) {
  std::uniform_int_distribution<std::uint64_t> dist(0, mod - 1);
  Matrix m(n);
  for (auto& v : m.entries()) v = dist(rng);
  return m;
}

/// X^{-1} Y^{-1} X Y
Matrix group_commutator(const Matrix& x, const Matrix& y, std::uint64_t mod) {
  return multiply(multiply(inverse(x, mod), inverse(y, mod), mod), multiply(x, y, mod), mod);
}

}  // namespace

bool commutator_congruence_check(std::uint32_t p, unsigned i, unsigned j, std::size_t samples,
                                 std::uint64_t seed, std::size_t n) {
  require_odd_prime(p);
  if (i < 1 || j < 1) throw InvalidInput("commutator_congruence_check: levels must be >= 1");
  const unsigned top = std::max(i + j + 1, i + 2);
  const std::uint64_t mod = *checked_pow(p, top);
  const std::uint64_t pi = *checked_pow(p, i), pj = *checked_pow(p, j);
  const std::uint64_t comm_mod = *checked_pow(p, i + j + 1);
  const std::uint64_t pow_modulus = *checked_pow(p, i + 2);
  const Matrix one = Matrix::identity(n);
  std::mt19937_64 rng(seed);
  for (std::size_t s = 0; s < samples; ++s) {
    const Matrix a = random_matrix(n, mod, rng);
    const Matrix b = random_matrix(n, mod, rng);
    const Matrix x = add(one, scale(a, pi, mod), mod);
    const Matrix y = add(one, scale(b, pj, mod), mod);

    const Matrix lhs = reduce(group_commutator(x, y, mod), comm_mod);
    const Matrix rhs = add(one, scale(commutator(a, b, comm_mod), pi * pj, comm_mod), comm_mod);
    if (lhs != rhs) return false;

    const Matrix xp = reduce(power(x, p, mod), pow_modulus);
    const Matrix expected = add(one, scale(a, pi * p, pow_modulus), pow_modulus);
    if (xp != expected) return false;
  }
  return true;
}

bool commutator_with_unipotent_check(std::uint32_t p, std::size_t samples, std::uint64_t seed) {
  require_odd_prime(p);
  const std::uint64_t p2 = std::uint64_t{p} * p, p3 = p2 * p;
  const Matrix one = Matrix::identity(2);
  const Matrix unipotent({{1, 1}, {0, 1}}, p3);
  std::mt19937_64 rng(seed);
  for (std::size_t s = 0; s < samples; ++s) {
    const Matrix a = random_matrix(2, p3, rng);
    const Matrix x = add(one, scale(a, p, p3), p3);
    const Matrix y = add(unipotent, scale(random_matrix(2, p3, rng), p, p3), p3);
    const Matrix lhs = reduce(group_commutator(x, y, p3), p2);
    const std::int64_t ea = static_cast<std::int64_t>(a(0, 0) % p2);
    const std::int64_t ec = static_cast<std::int64_t>(a(1, 0) % p2);
    const std::int64_t ed = static_cast<std::int64_t>(a(1, 1) % p2);
    const Matrix shape({{-ec, ea - ed - ec}, {0, ec}}, p2);
    const Matrix rhs = add(one, scale(shape, p, p2), p2);
    if (lhs != rhs) return false;
  }
  return true;
}

bool unipotent_power_check(std::uint32_t p, std::size_t samples, std::uint64_t seed) {
  require_odd_prime(p);
  const std::uint64_t p2 = std::uint64_t{p} * p, p3 = p2 * p;
  const Matrix one = Matrix::identity(2);
  const Matrix expected = add(one, scale(Matrix({{0, 1}, {0, 0}}, p2), p, p2), p2);
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<std::uint64_t> dist(0, p3 - 1);
  for (std::size_t s = 0; s < samples; ++s) {
    // h - 1 = [[p a, 1 + p e], [p c, p f]] with p^2 | p c.
    Matrix h(2);
    h(0, 0) = (1 + mul_mod(p, dist(rng), p3)) % p3;
    h(0, 1) = (1 + mul_mod(p, dist(rng), p3)) % p3;
    h(1, 0) = mul_mod(p2, dist(rng), p3);
    h(1, 1) = (1 + mul_mod(p, dist(rng), p3)) % p3;
    if (reduce(power(h, p, p3), p2) != expected) return false;
  }
  return true;
}

bool det_one_trace_check(std::uint32_t p, std::size_t samples, std::uint64_t seed, std::size_t n) {
  require_odd_prime(p);
  if (n < 1) throw InvalidInput("det_one_trace_check: dimension must be positive");
  const std::uint64_t p2 = std::uint64_t{p} * p, p3 = p2 * p;
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<std::uint64_t> dist(0, p3 - 1);
  std::uniform_int_distribution<std::size_t> index(0, n - 1);
  for (std::size_t s = 0; s < samples; ++s) {
    // A random product of generators of SL_n(Z/p^3) congruent to 1 mod p:
    // transvections 1 + p t E_ij and diagonal pairs diag(u, u^{-1}) at (i, j).
    Matrix x = Matrix::identity(n);
    for (int step = 0; step < 8; ++step) {
      Matrix g = Matrix::identity(n);
      if (n == 1) break;
      const auto i = index(rng);
      auto j = index(rng);
      while (j == i) j = index(rng);
      if (step % 2 == 0) {
        g(i, j) = mul_mod(p, dist(rng), p3);
      } else {
        const auto u = (1 + mul_mod(p, dist(rng), p3)) % p3;
        g(i, i) = u;
        g(j, j) = inv_mod(u, p3);
      }
      x = multiply(x, g, p3);
    }
    if (determinant(x, p3) != 1) continue;  // cannot happen; regenerate-by-skip
    // N = (X - 1) / p, known modulo p^2.
    const Matrix diff = sub(x, Matrix::identity(n), p3);
    std::uint64_t tr = 0;
    for (std::size_t k = 0; k < n; ++k) tr += diff(k, k) / p;
    if (tr % p != 0) return false;
  }
  return true;
}

bool triangular_lemma_checks(std::uint32_t p, std::size_t samples, std::uint64_t seed) {
  return commutator_with_unipotent_check(p, samples, seed) &&
         unipotent_power_check(p, samples, seed + 1) &&
         det_one_trace_check(p, samples, seed + 2, 2) &&
         det_one_trace_check(p, samples, seed + 3, 3);
}

}  // namespace linkfm
