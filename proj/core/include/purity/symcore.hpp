#pragma once

// Symmetric-group combinatorics: permutations in one-line notation,
// partitions (cycle types, conjugacy classes, Young diagrams), irreducible
// characters and the two dimension formulas used by the Weingarten sums.
// Everything here is exact integer arithmetic.

#include <compare>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "purity/rational.hpp"

namespace purity::sym {

/// A bijection of {1..n}, stored in one-line notation (images[i-1] = p(i)).
class Permutation {
 public:
  /// Throws ValidationError unless `images` is a bijection of {1..n}.
  explicit Permutation(std::vector<int> images);

  static Permutation identity(int degree);

  int degree() const { return static_cast<int>(images_.size()); }
  /// 1-indexed image.
  int operator()(int i) const { return images_[static_cast<std::size_t>(i - 1)]; }
  std::span<const int> images() const { return images_; }

  Permutation inverse() const;
  int cycle_count() const;

  bool operator==(const Permutation&) const = default;
  auto operator<=>(const Permutation&) const = default;

 private:
  struct Unchecked {};
  Permutation(std::vector<int> images, Unchecked) : images_(std::move(images)) {}
  friend Permutation compose(const Permutation&, const Permutation&);

  std::vector<int> images_;
};

/// (p∘q)(i) = p(q(i)). Throws ValidationError on degree mismatch.
Permutation compose(const Permutation& p, const Permutation& q);

/// All n! permutations of degree n in lexicographic one-line order.
std::vector<Permutation> all_permutations(int degree);

/// Non-increasing sequence of positive parts. The empty partition has weight 0.
class Partition {
 public:
  Partition() = default;
  /// Throws ValidationError unless `parts` is non-increasing and positive.
  explicit Partition(std::vector<int> parts);

  /// Sorts and validates.
  static Partition from_unsorted(std::vector<int> parts);

  std::span<const int> parts() const { return parts_; }
  int weight() const { return weight_; }
  int length() const { return static_cast<int>(parts_.size()); }
  int part(int i) const { return parts_[static_cast<std::size_t>(i)]; }

  /// Transposed diagram.
  Partition conjugate() const;

  /// Number of permutations with this cycle type: n! / z_λ.
  Integer class_size() const;

  /// "[2,1,1]".
  std::string to_string() const;

  bool operator==(const Partition&) const = default;
  auto operator<=>(const Partition&) const = default;

 private:
  std::vector<int> parts_;
  int weight_ = 0;
};

void to_json(nlohmann::json& j, const Partition& p);

/// Cycle lengths of p, non-increasing.
Partition cycle_type(const Permutation& p);

/// Every partition of n exactly once, in reverse-lexicographic order
/// ([n] first, [1^n] last). Throws ValidationError for n < 1.
std::vector<Partition> all_partitions(int n);

/// Dimension of the S_n irrep λ by the hook-length formula.
Integer sn_dimension(const Partition& lambda);

/// Dimension of the U(N) irrep with diagram λ: ∏ (N + j − i) / hook(i, j).
/// Zero when λ has more than N rows.
Integer schur_dimension(const Partition& lambda, int n_dim);

/// Irreducible character χ_λ(μ), by the Murnaghan–Nakayama rule.
/// Memoized per thread. Throws ValidationError on weight mismatch.
std::int64_t character(const Partition& lambda, const Partition& mu);

/// s(2l−1) = 2l, s(2l) = 2l−1 for l = 1..k; degree 2k.
Permutation nearby_pair_swap(int k);

struct CharacterTable {
  int n = 0;
  std::vector<Partition> irreps;   // rows, reverse-lexicographic
  std::vector<Partition> classes;  // columns, reverse-lexicographic
  std::vector<std::vector<std::int64_t>> values;
  std::vector<Integer> class_sizes;

  static CharacterTable build(int n);

  std::int64_t value(const Partition& irrep, const Partition& cls) const;

  /// {"n":..,"irreps":[[..],..],"classes":[[..],..],"values":[[..],..]}
  nlohmann::json to_json() const;
};

}  // namespace purity::sym
