#include <algorithm>
#include <cstdint>
#include <map>
#include <numeric>
#include <thread>
#include <tuple>

#include "purity/errors.hpp"
#include "purity/weingarten.hpp"

namespace purity::wg {

namespace {

// Permutations of degree n stored flat and 0-indexed: perm p occupies
// images[p*n .. p*n+n).
struct PermutationBlock {
  int n = 0;
  std::size_t count = 0;
  std::vector<std::uint8_t> images;

  const std::uint8_t* at(std::size_t p) const { return images.data() + p * static_cast<std::size_t>(n); }
};

PermutationBlock enumerate(int n) {
  PermutationBlock block;
  block.n = n;
  std::vector<std::uint8_t> current(static_cast<std::size_t>(n));
  std::iota(current.begin(), current.end(), std::uint8_t{0});
  do {
    block.images.insert(block.images.end(), current.begin(), current.end());
    ++block.count;
  } while (std::next_permutation(current.begin(), current.end()));
  return block;
}

// Cycle type encoded as multiplicities m_1..m_n in base (n+1).
std::uint64_t cycle_code(const std::uint8_t* images, int n) {
  std::uint8_t seen[32] = {};
  std::uint8_t multiplicity[33] = {};
  for (int start = 0; start < n; ++start) {
    if (seen[start]) continue;
    int len = 0;
    for (int i = start; !seen[i]; i = images[i]) {
      seen[i] = 1;
      ++len;
    }
    ++multiplicity[len];
  }
  std::uint64_t code = 0;
  for (int len = n; len >= 1; --len) code = code * static_cast<std::uint64_t>(n + 1) + multiplicity[len];
  return code;
}

int cycle_count(const std::uint8_t* images, int n) {
  std::uint8_t seen[32] = {};
  int cycles = 0;
  for (int start = 0; start < n; ++start) {
    if (seen[start]) continue;
    ++cycles;
    for (int i = start; !seen[i]; i = images[i]) seen[i] = 1;
  }
  return cycles;
}

sym::Partition decode(std::uint64_t code, int n) {
  std::vector<int> parts;
  for (int len = 1; len <= n; ++len) {
    const auto m = static_cast<int>(code % static_cast<std::uint64_t>(n + 1));
    code /= static_cast<std::uint64_t>(n + 1);
    for (int i = 0; i < m; ++i) parts.push_back(len);
  }
  return sym::Partition::from_unsorted(std::move(parts));
}

// (cycles(τ), cycles(τ∘s), code of [σ], code of [τ∘σ∘s]) -> number of pairs.
using Key = std::tuple<int, int, std::uint64_t, std::uint64_t>;
using Counts = std::map<Key, std::uint64_t>;

void accumulate(const PermutationBlock& perms, const std::vector<std::uint8_t>& sigma_s,
                const std::vector<std::uint64_t>& sigma_class, const std::vector<std::uint8_t>& swap,
                std::size_t tau_begin, std::size_t tau_end, Counts& counts) {
  const int n = perms.n;
  std::vector<std::uint8_t> tau_s(static_cast<std::size_t>(n));
  std::vector<std::uint8_t> rho(static_cast<std::size_t>(n));
  for (std::size_t t = tau_begin; t < tau_end; ++t) {
    const std::uint8_t* tau = perms.at(t);
    for (int i = 0; i < n; ++i) tau_s[static_cast<std::size_t>(i)] = tau[swap[static_cast<std::size_t>(i)]];
    const int cycles_a = cycle_count(tau, n);
    const int cycles_b = cycle_count(tau_s.data(), n);
    for (std::size_t s = 0; s < perms.count; ++s) {
      const std::uint8_t* ss = sigma_s.data() + s * static_cast<std::size_t>(n);
      for (int i = 0; i < n; ++i) rho[static_cast<std::size_t>(i)] = tau[ss[i]];
      ++counts[Key{cycles_a, cycles_b, sigma_class[s], cycle_code(rho.data(), n)}];
    }
  }
}

}  // namespace

PowerSumPolynomial moment_polynomial(int k, const BipartitionDims& dims, const MomentOptions& options) {
  if (k < 1) throw ValidationError("moment order k must be >= 1");
  if (k > 3) throw ValidationError("moment order k > 3 is not supported by the permutation sum");
  const int n = 2 * k;

  WeingartenTable owned;
  const WeingartenTable* table = options.table;
  if (table == nullptr) {
    owned = WeingartenTable::build(n, dims.n());
    table = &owned;
  } else if (table->n != n || table->n_dim != dims.n()) {
    throw ValidationError("supplied Weingarten table does not match degree 2k and dimension N");
  }

  const PermutationBlock perms = enumerate(n);
  std::vector<std::uint8_t> swap(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) swap[static_cast<std::size_t>(i)] = static_cast<std::uint8_t>(i ^ 1);

  // σ∘s for every σ, and the class of σ.
  std::vector<std::uint8_t> sigma_s(perms.images.size());
  std::vector<std::uint64_t> sigma_class(perms.count);
  for (std::size_t s = 0; s < perms.count; ++s) {
    const std::uint8_t* sigma = perms.at(s);
    for (int i = 0; i < n; ++i) {
      sigma_s[s * static_cast<std::size_t>(n) + static_cast<std::size_t>(i)] = sigma[swap[static_cast<std::size_t>(i)]];
    }
    sigma_class[s] = cycle_code(sigma, n);
  }

  const int threads = std::max(1, std::min<int>(options.threads, static_cast<int>(perms.count)));
  std::vector<Counts> partial(static_cast<std::size_t>(threads));
  if (threads == 1) {
    accumulate(perms, sigma_s, sigma_class, swap, 0, perms.count, partial[0]);
  } else {
    std::vector<std::thread> workers;
    const std::size_t chunk = (perms.count + static_cast<std::size_t>(threads) - 1) / static_cast<std::size_t>(threads);
    for (int w = 0; w < threads; ++w) {
      const std::size_t begin = std::min(perms.count, static_cast<std::size_t>(w) * chunk);
      const std::size_t end = std::min(perms.count, begin + chunk);
      workers.emplace_back([&, begin, end, w] {
        accumulate(perms, sigma_s, sigma_class, swap, begin, end, partial[static_cast<std::size_t>(w)]);
      });
    }
    for (auto& worker : workers) worker.join();
  }

  Counts merged;
  for (const auto& part : partial) {
    for (const auto& [key, count] : part) merged[key] += count;
  }

  PowerSumPolynomial poly(dims);
  for (const auto& [key, count] : merged) {
    const auto& [cycles_a, cycles_b, sigma_code, rho_code] = key;
    const Rational& c = table->at(decode(sigma_code, n));
    const Integer f = ipow(dims.na(), static_cast<unsigned>(cycles_a)) * ipow(dims.nb(), static_cast<unsigned>(cycles_b));
    poly.add(make_monomial(decode(rho_code, n)), c * f * count);
  }
  return poly;
}

}  // namespace purity::wg
