#include "purity/symcore.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <numeric>
#include <utility>

#include "purity/errors.hpp"

namespace purity::sym {

Permutation::Permutation(std::vector<int> images) : images_(std::move(images)) {
  const int n = degree();
  std::vector<bool> seen(static_cast<std::size_t>(n), false);
  for (const int v : images_) {
    if (v < 1 || v > n || seen[static_cast<std::size_t>(v - 1)]) {
      throw ValidationError("permutation images must be a bijection of {1.." + std::to_string(n) + "}");
    }
    seen[static_cast<std::size_t>(v - 1)] = true;
  }
}

Permutation Permutation::identity(int degree) {
  if (degree < 0) throw ValidationError("negative permutation degree");
  std::vector<int> images(static_cast<std::size_t>(degree));
  std::iota(images.begin(), images.end(), 1);
  return Permutation(std::move(images), Unchecked{});
}

Permutation Permutation::inverse() const {
  std::vector<int> inv(images_.size());
  for (std::size_t i = 0; i < images_.size(); ++i) {
    inv[static_cast<std::size_t>(images_[i] - 1)] = static_cast<int>(i) + 1;
  }
  return Permutation(std::move(inv), Unchecked{});
}

int Permutation::cycle_count() const {
  std::vector<bool> seen(images_.size(), false);
  int cycles = 0;
  for (std::size_t start = 0; start < images_.size(); ++start) {
    if (seen[start]) continue;
    ++cycles;
    for (std::size_t i = start; !seen[i]; i = static_cast<std::size_t>(images_[i] - 1)) seen[i] = true;
  }
  return cycles;
}

Permutation compose(const Permutation& p, const Permutation& q) {
  if (p.degree() != q.degree()) {
    throw ValidationError("cannot compose permutations of degree " + std::to_string(p.degree()) + " and " +
                          std::to_string(q.degree()));
  }
  std::vector<int> out(q.images_.size());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = p.images_[static_cast<std::size_t>(q.images_[i] - 1)];
  return Permutation(std::move(out), Permutation::Unchecked{});
}

std::vector<Permutation> all_permutations(int degree) {
  if (degree < 1) throw ValidationError("permutation degree must be >= 1");
  std::vector<int> images(static_cast<std::size_t>(degree));
  std::iota(images.begin(), images.end(), 1);
  std::vector<Permutation> out;
  do {
    out.emplace_back(images);
  } while (std::next_permutation(images.begin(), images.end()));
  return out;
}

// ---------------------------------------------------------------------------

Partition::Partition(std::vector<int> parts) : parts_(std::move(parts)) {
  for (std::size_t i = 0; i < parts_.size(); ++i) {
    if (parts_[i] < 1) throw ValidationError("partition parts must be positive");
    if (i > 0 && parts_[i] > parts_[i - 1]) throw ValidationError("partition parts must be non-increasing");
    weight_ += parts_[i];
  }
}

Partition Partition::from_unsorted(std::vector<int> parts) {
  std::sort(parts.begin(), parts.end(), std::greater<>());
  return Partition(std::move(parts));
}

Partition Partition::conjugate() const {
  std::vector<int> out;
  if (parts_.empty()) return Partition();
  for (int j = 0; j < parts_.front(); ++j) {
    int count = 0;
    for (const int p : parts_) count += p > j ? 1 : 0;
    out.push_back(count);
  }
  return Partition(std::move(out));
}

Integer Partition::class_size() const {
  Integer z = 1;
  std::map<int, int> multiplicity;
  for (const int p : parts_) ++multiplicity[p];
  for (const auto& [len, m] : multiplicity) {
    for (int i = 0; i < m; ++i) z *= len;
    for (int i = 2; i <= m; ++i) z *= i;
  }
  Integer factorial = 1;
  for (int i = 2; i <= weight_; ++i) factorial *= i;
  return factorial / z;
}

std::string Partition::to_string() const {
  std::string s = "[";
  for (std::size_t i = 0; i < parts_.size(); ++i) {
    if (i) s += ",";
    s += std::to_string(parts_[i]);
  }
  return s + "]";
}

void to_json(nlohmann::json& j, const Partition& p) {
  j = std::vector<int>(p.parts().begin(), p.parts().end());
}

Partition cycle_type(const Permutation& p) {
  const auto images = p.images();
  std::vector<bool> seen(images.size(), false);
  std::vector<int> lengths;
  for (std::size_t start = 0; start < images.size(); ++start) {
    if (seen[start]) continue;
    int len = 0;
    for (std::size_t i = start; !seen[i]; i = static_cast<std::size_t>(images[i] - 1)) {
      seen[i] = true;
      ++len;
    }
    lengths.push_back(len);
  }
  return Partition::from_unsorted(std::move(lengths));
}

namespace {

void partitions_into(int remaining, int max_part, std::vector<int>& prefix, std::vector<Partition>& out) {
  if (remaining == 0) {
    out.emplace_back(prefix);
    return;
  }
  for (int part = std::min(remaining, max_part); part >= 1; --part) {
    prefix.push_back(part);
    partitions_into(remaining - part, part, prefix, out);
    prefix.pop_back();
  }
}

Integer factorial(int n) {
  Integer f = 1;
  for (int i = 2; i <= n; ++i) f *= i;
  return f;
}

// hook(i, j) for cell (i, j), 0-indexed.
int hook_length(const Partition& lambda, const Partition& conj, int i, int j) {
  return lambda.part(i) - j + conj.part(j) - i - 1;
}

}  // namespace

std::vector<Partition> all_partitions(int n) {
  if (n < 1) throw ValidationError("all_partitions requires n >= 1");
  std::vector<Partition> out;
  std::vector<int> prefix;
  partitions_into(n, n, prefix, out);
  return out;
}

Integer sn_dimension(const Partition& lambda) {
  const Partition conj = lambda.conjugate();
  Integer hooks = 1;
  for (int i = 0; i < lambda.length(); ++i) {
    for (int j = 0; j < lambda.part(i); ++j) hooks *= hook_length(lambda, conj, i, j);
  }
  return factorial(lambda.weight()) / hooks;
}

Integer schur_dimension(const Partition& lambda, int n_dim) {
  if (n_dim < 1) throw ValidationError("unitary dimension must be >= 1");
  if (lambda.length() > n_dim) return 0;
  const Partition conj = lambda.conjugate();
  Integer num = 1;
  Integer den = 1;
  for (int i = 0; i < lambda.length(); ++i) {
    for (int j = 0; j < lambda.part(i); ++j) {
      num *= n_dim + j - i;
      den *= hook_length(lambda, conj, i, j);
    }
  }
  return num / den;
}

// ---------------------------------------------------------------------------
// Murnaghan–Nakayama on beta-sets. A partition with l parts is encoded by the
// strictly decreasing first-column hook lengths b_i = λ_i + l − 1 − i. Removing
// a rim hook of length r moves one bead from b to b − r (if that slot is free);
// the sign is (−1)^(number of beads strictly between b − r and b).

namespace {

using BetaKey = std::pair<std::vector<int>, std::vector<int>>;

std::int64_t mn_recurse(const std::vector<int>& lambda, const std::vector<int>& mu, std::size_t mu_pos,
                        std::map<BetaKey, std::int64_t>& memo) {
  if (mu_pos == mu.size()) return lambda.empty() ? 1 : 0;

  BetaKey key{lambda, std::vector<int>(mu.begin() + static_cast<std::ptrdiff_t>(mu_pos), mu.end())};
  if (const auto it = memo.find(key); it != memo.end()) return it->second;

  const int r = mu[mu_pos];
  const int l = static_cast<int>(lambda.size());
  std::vector<int> beta(lambda.size());
  for (int i = 0; i < l; ++i) beta[static_cast<std::size_t>(i)] = lambda[static_cast<std::size_t>(i)] + l - 1 - i;

  std::int64_t total = 0;
  for (int i = 0; i < l; ++i) {
    const int b = beta[static_cast<std::size_t>(i)];
    const int target = b - r;
    if (target < 0) continue;
    if (std::find(beta.begin(), beta.end(), target) != beta.end()) continue;
    int between = 0;
    for (const int other : beta) between += (other > target && other < b) ? 1 : 0;

    std::vector<int> moved = beta;
    moved[static_cast<std::size_t>(i)] = target;
    std::sort(moved.begin(), moved.end(), std::greater<>());
    std::vector<int> reduced;
    for (int k = 0; k < l; ++k) {
      const int part = moved[static_cast<std::size_t>(k)] - (l - 1 - k);
      if (part > 0) reduced.push_back(part);
    }
    const std::int64_t sub = mn_recurse(reduced, mu, mu_pos + 1, memo);
    total += (between % 2 == 0) ? sub : -sub;
  }
  memo.emplace(std::move(key), total);
  return total;
}

}  // namespace

std::int64_t character(const Partition& lambda, const Partition& mu) {
  if (lambda.weight() != mu.weight()) {
    throw ValidationError("character: weight mismatch between " + lambda.to_string() + " and " + mu.to_string());
  }
  thread_local std::map<BetaKey, std::int64_t> memo;
  const std::vector<int> l(lambda.parts().begin(), lambda.parts().end());
  const std::vector<int> m(mu.parts().begin(), mu.parts().end());
  return mn_recurse(l, m, 0, memo);
}

Permutation nearby_pair_swap(int k) {
  if (k < 1) throw ValidationError("nearby_pair_swap requires k >= 1");
  std::vector<int> images(static_cast<std::size_t>(2 * k));
  for (int l = 1; l <= k; ++l) {
    images[static_cast<std::size_t>(2 * l - 2)] = 2 * l;
    images[static_cast<std::size_t>(2 * l - 1)] = 2 * l - 1;
  }
  return Permutation(std::move(images));
}

// ---------------------------------------------------------------------------

CharacterTable CharacterTable::build(int n) {
  CharacterTable t;
  t.n = n;
  t.irreps = all_partitions(n);
  t.classes = t.irreps;
  for (const auto& cls : t.classes) t.class_sizes.push_back(cls.class_size());
  for (const auto& irrep : t.irreps) {
    std::vector<std::int64_t> row;
    row.reserve(t.classes.size());
    for (const auto& cls : t.classes) row.push_back(character(irrep, cls));
    t.values.push_back(std::move(row));
  }
  return t;
}

std::int64_t CharacterTable::value(const Partition& irrep, const Partition& cls) const {
  const auto row = std::find(irreps.begin(), irreps.end(), irrep);
  const auto col = std::find(classes.begin(), classes.end(), cls);
  if (row == irreps.end() || col == classes.end()) {
    throw ValidationError("partition not in the S_" + std::to_string(n) + " table");
  }
  return values[static_cast<std::size_t>(row - irreps.begin())][static_cast<std::size_t>(col - classes.begin())];
}

nlohmann::json CharacterTable::to_json() const {
  return nlohmann::json{{"n", n}, {"irreps", irreps}, {"classes", classes}, {"values", values}};
}

}  // namespace purity::sym
