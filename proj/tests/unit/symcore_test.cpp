#include <gtest/gtest.h>

#include <map>

#include "purity/errors.hpp"
#include "purity/symcore.hpp"

namespace purity::sym {
namespace {

Partition P(std::vector<int> parts) { return Partition(std::move(parts)); }

TEST(Permutation, ComposeBasics) {
  const Permutation q({3, 1, 2});
  EXPECT_EQ(compose(Permutation::identity(3), q), q);
  const Permutation s({2, 1});
  EXPECT_EQ(compose(s, s), Permutation::identity(2));
  EXPECT_EQ(compose(q, q.inverse()), Permutation::identity(3));
  // (1 2) after (2 3): 1->1->2, 2->3->3, 3->2->1.
  EXPECT_EQ(compose(Permutation({2, 1, 3}), Permutation({1, 3, 2})), Permutation({2, 3, 1}));
}

TEST(Permutation, Validation) {
  EXPECT_THROW(Permutation({1, 1}), ValidationError);
  EXPECT_THROW(Permutation({0, 1}), ValidationError);
  EXPECT_THROW(compose(Permutation({1, 2}), Permutation({1, 2, 3})), ValidationError);
  EXPECT_THROW(all_permutations(0), ValidationError);
}

TEST(CycleType, Examples) {
  EXPECT_EQ(cycle_type(Permutation::identity(4)), P({1, 1, 1, 1}));
  EXPECT_EQ(cycle_type(nearby_pair_swap(2)), P({2, 2}));
  EXPECT_EQ(cycle_type(Permutation({2, 3, 4, 1})), P({4}));
  EXPECT_EQ(Permutation({2, 3, 4, 1}).cycle_count(), 1);
}

TEST(Partitions, Enumeration) {
  EXPECT_EQ(all_partitions(2), (std::vector<Partition>{P({2}), P({1, 1})}));
  EXPECT_EQ(all_partitions(4).size(), 5u);
  EXPECT_EQ(all_partitions(8).size(), 22u);
  EXPECT_THROW(all_partitions(0), ValidationError);
  EXPECT_THROW(P({1, 2}), ValidationError);
  EXPECT_THROW(P({2, 0}), ValidationError);
}

TEST(Partitions, ClassSizesSumToFactorial) {
  for (int n = 1; n <= 8; ++n) {
    Integer total = 0;
    for (const auto& p : all_partitions(n)) total += p.class_size();
    Integer fact = 1;
    for (int i = 2; i <= n; ++i) fact *= i;
    EXPECT_EQ(total, fact) << n;
  }
}

TEST(Partitions, ClassSizeMatchesCycleTypeCounts) {
  std::map<Partition, Integer> counts;
  for (const auto& p : all_permutations(5)) counts[cycle_type(p)] += 1;
  for (const auto& [cls, count] : counts) EXPECT_EQ(cls.class_size(), count) << cls.to_string();
}

TEST(Dimensions, HookLength) {
  EXPECT_EQ(sn_dimension(P({4})), 1);
  EXPECT_EQ(sn_dimension(P({2, 1})), 2);
  EXPECT_EQ(sn_dimension(P({2, 2})), 2);
  EXPECT_EQ(sn_dimension(P({3, 2, 1})), 16);
}

TEST(Dimensions, Schur) {
  for (int n = 1; n <= 7; ++n) {
    EXPECT_EQ(schur_dimension(P({1}), n), n);
    EXPECT_EQ(schur_dimension(P({1, 1}), n), n * (n - 1) / 2);
    EXPECT_EQ(schur_dimension(P({2}), n), n * (n + 1) / 2);
  }
  EXPECT_EQ(schur_dimension(P({2, 1, 1}), 2), 0);
  EXPECT_THROW(schur_dimension(P({1}), 0), ValidationError);
}

TEST(Dimensions, SchurOfColumnIsBinomial) {
  for (int n = 1; n <= 8; ++n) {
    for (int m = 1; m <= 6; ++m) {
      Integer binom = 1;
      for (int i = 0; i < m; ++i) binom = binom * (n - i) / (i + 1);
      EXPECT_EQ(schur_dimension(P(std::vector<int>(static_cast<std::size_t>(m), 1)), n), binom < 0 ? 0 : binom);
    }
  }
}

TEST(Dimensions, SumOfSquaresIsFactorial) {
  for (int n = 1; n <= 9; ++n) {
    Integer total = 0;
    for (const auto& p : all_partitions(n)) total += sn_dimension(p) * sn_dimension(p);
    Integer fact = 1;
    for (int i = 2; i <= n; ++i) fact *= i;
    EXPECT_EQ(total, fact);
  }
}

TEST(Characters, S3Table) {
  EXPECT_EQ(character(P({3}), P({2, 1})), 1);
  EXPECT_EQ(character(P({2, 1}), P({1, 1, 1})), 2);
  EXPECT_EQ(character(P({2, 1}), P({2, 1})), 0);
  EXPECT_EQ(character(P({2, 1}), P({3})), -1);
  EXPECT_EQ(character(P({1, 1, 1}), P({2, 1})), -1);
  EXPECT_THROW(character(P({2}), P({1, 1, 1})), ValidationError);
}

TEST(Characters, IdentityColumnIsDimension) {
  for (int n = 1; n <= 8; ++n) {
    const Partition id(std::vector<int>(static_cast<std::size_t>(n), 1));
    for (const auto& lambda : all_partitions(n)) EXPECT_EQ(Integer(character(lambda, id)), sn_dimension(lambda));
  }
}

TEST(Characters, RowAndColumnOrthogonality) {
  for (int n = 1; n <= 7; ++n) {
    const auto t = CharacterTable::build(n);
    Integer fact = 1;
    for (int i = 2; i <= n; ++i) fact *= i;
    const std::size_t m = t.irreps.size();
    for (std::size_t a = 0; a < m; ++a) {
      for (std::size_t b = 0; b < m; ++b) {
        Integer row = 0;
        Integer col = 0;
        for (std::size_t c = 0; c < m; ++c) {
          row += t.class_sizes[c] * t.values[a][c] * t.values[b][c];
          col += Integer(t.values[c][a]) * t.values[c][b];
        }
        EXPECT_EQ(row, a == b ? fact : Integer(0));
        EXPECT_EQ(col * t.class_sizes[a], a == b ? fact : Integer(0));
      }
    }
  }
}

TEST(Characters, BurnsideCountsInvolutions) {
  // Σ_λ dim(λ) = number of involutions in S_n (Frobenius-Schur, all indicators 1).
  for (int n = 1; n <= 8; ++n) {
    Integer dims = 0;
    for (const auto& p : all_partitions(n)) dims += sn_dimension(p);
    long involutions = 0;
    for (const auto& p : all_permutations(n)) involutions += compose(p, p) == Permutation::identity(n) ? 1 : 0;
    EXPECT_EQ(dims, involutions);
  }
}

TEST(Characters, ClassFunction) {
  const auto perms = all_permutations(4);
  for (const auto& g : perms) {
    for (const auto& h : perms) {
      const auto conj = compose(compose(h, g), h.inverse());
      EXPECT_EQ(cycle_type(conj), cycle_type(g));
    }
  }
}

TEST(NearbyPairSwap, Shape) {
  EXPECT_EQ(nearby_pair_swap(1), Permutation({2, 1}));
  EXPECT_EQ(nearby_pair_swap(2), Permutation({2, 1, 4, 3}));
  EXPECT_EQ(cycle_type(nearby_pair_swap(3)), P({2, 2, 2}));
  EXPECT_THROW(nearby_pair_swap(0), ValidationError);
}

TEST(CharacterTable, Json) {
  const auto j = CharacterTable::build(3).to_json();
  EXPECT_EQ(j["n"], 3);
  EXPECT_EQ(j["irreps"][0], nlohmann::json::array({3}));
  EXPECT_EQ(j["values"][1][2], 2);
  const auto t = CharacterTable::build(4);
  EXPECT_EQ(t.value(P({2, 2}), P({2, 2})), 2);
  EXPECT_THROW(t.value(P({3}), P({3})), ValidationError);
}

}  // namespace
}  // namespace purity::sym
