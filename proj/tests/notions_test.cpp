// Copyright 2026 The ACN Bounds Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <cctype>
#include <cstdint>
#include <string>
#include <vector>

#include <gtest/gtest.h>

#include "acnb/notions.hpp"

namespace acnb {
namespace {

constexpr UserId kA = 0, kB = 1, kC = 2, kD = 3, kR = 4, kS = 5;

Batch B(std::vector<Row> rows) { return MakeBatch(std::move(rows), OrderingMode::kRandomPermutation); }
Row C(UserId s, UserId r, MessageId m, AuxTag aux = 0) { return Communication{s, r, m, aux}; }
bool Valid(const std::string& notion, const Batch& b0, const Batch& b1) {
  return IsValidPair(Notion::Parse(notion), b0, b1);
}

TEST(IsValidPairTest, SenderUnobservabilitySwap) {
  EXPECT_TRUE(Valid("SO", B({C(kA, kR, 1), C(kB, kR, 2)}), B({C(kB, kR, 1), C(kA, kR, 2)})));
}

TEST(IsValidPairTest, SenderUnobservabilityRejectsMessageChange) {
  EXPECT_FALSE(Valid("SO", B({C(kA, kR, 1)}), B({C(kA, kR, 2)})));
}

TEST(IsValidPairTest, PairNotionSingleSwap) {
  EXPECT_TRUE(Valid("(SM)L", B({C(kA, kR, 1), C(kB, kR, 2)}), B({C(kB, kR, 1), C(kA, kR, 2)})));
}

TEST(IsValidPairTest, BoundedSenderRejectsRepeatSender) {
  EXPECT_FALSE(Valid("SO_nmax:1", B({C(kA, kR, 1), C(kA, kR, 2)}), B({C(kB, kR, 1), C(kC, kR, 2)})));
  EXPECT_TRUE(Valid("SO_nmax:2", B({C(kA, kR, 1), C(kA, kR, 2)}), B({C(kB, kR, 1), C(kC, kR, 2)})));
}

TEST(IsValidPairTest, LengthMismatchIsInvalidExceptCommunicationUnobservability) {
  const Batch one = B({C(kA, kR, 1)});
  const Batch two = B({C(kA, kR, 1), C(kB, kR, 2)});
  for (const char* n : {"SO", "RO", "SML", "(SM)L", "(SR)L", "MO[ML]"}) {
    EXPECT_FALSE(Valid(n, one, two)) << n;
  }
  EXPECT_TRUE(Valid("CO", one, two));
}

TEST(IsValidPairTest, ReindexesSecondBatch) {
  // Same SO pattern with batch1 listed in a different order.
  EXPECT_TRUE(Valid("SO", B({C(kA, kR, 1), C(kB, kS, 2)}), B({C(kA, kS, 2), C(kB, kR, 1)})));
  EXPECT_TRUE(Valid("(SM)L", B({C(kA, kR, 1), C(kB, kR, 2), C(kC, kS, 3)}),
                    B({C(kC, kS, 3), C(kA, kR, 2), C(kB, kR, 1)})));
}

TEST(IsValidPairTest, PairNotionsNeedExactlyOneSwap) {
  const Batch b0 = B({C(kA, kR, 1), C(kB, kR, 2), C(kC, kR, 3), C(kD, kR, 4)});
  const Batch rotated = B({C(kB, kR, 1), C(kC, kR, 2), C(kD, kR, 3), C(kA, kR, 4)});
  EXPECT_TRUE(Valid("SO", b0, rotated));
  EXPECT_TRUE(Valid("SML", b0, rotated));
  EXPECT_FALSE(Valid("(SM)L", b0, rotated));
  // Identical batches are not a challenge for the pair notions.
  EXPECT_FALSE(Valid("(SM)L", b0, b0));
  EXPECT_TRUE(Valid("SO", b0, b0));
}

TEST(IsValidPairTest, SenderMessagePairNeedsSharedReceiver) {
  EXPECT_FALSE(Valid("(SM)L", B({C(kA, kR, 1), C(kB, kS, 2)}), B({C(kB, kR, 1), C(kA, kS, 2)})));
}

TEST(IsValidPairTest, SenderReceiverPairNeedsSharedMessage) {
  EXPECT_TRUE(Valid("(SR)L", B({C(kA, kR, 1), C(kB, kS, 1)}), B({C(kB, kR, 1), C(kA, kS, 1)})));
  EXPECT_FALSE(Valid("(SR)L", B({C(kA, kR, 1), C(kB, kS, 2)}), B({C(kB, kR, 1), C(kA, kS, 2)})));
}

TEST(IsValidPairTest, AuxMustMatch) {
  EXPECT_FALSE(Valid("(SM)L", B({C(kA, kR, 1, 0), C(kB, kR, 2, 0)}),
                     B({C(kB, kR, 1, 1), C(kA, kR, 2, 0)})));
  EXPECT_FALSE(Valid("SO", B({C(kA, kR, 1, 0)}), B({C(kB, kR, 1, 7)})));
}

TEST(IsValidPairTest, SenderMessageExtendedKeepsSenderCounts) {
  EXPECT_TRUE(Valid("SML", B({C(kA, kR, 1), C(kA, kR, 2), C(kB, kR, 3)}),
                    B({C(kB, kR, 1), C(kA, kR, 2), C(kA, kR, 3)})));
  EXPECT_FALSE(Valid("SML", B({C(kA, kR, 1), C(kA, kR, 2)}), B({C(kB, kR, 1), C(kA, kR, 2)})));
}

TEST(IsValidPairTest, ReceiverUnobservability) {
  EXPECT_TRUE(Valid("RO", B({C(kA, kR, 1)}), B({C(kA, kS, 1)})));
  EXPECT_FALSE(Valid("RO", B({C(kA, kR, 1)}), B({C(kB, kR, 1)})));
}

TEST(IsValidPairTest, MessageUnobservabilityRejectsEmptyRows) {
  EXPECT_TRUE(Valid("MO[ML]", B({C(kA, kR, 1), C(kB, kS, 2)}), B({C(kA, kS, 7), C(kB, kR, 8)})));
  EXPECT_FALSE(Valid("MO[ML]", B({C(kA, kR, 1), std::nullopt}), B({C(kA, kR, 1), std::nullopt})));
  EXPECT_FALSE(Valid("MO[ML]", B({C(kA, kR, 1), C(kA, kR, 2)}), B({C(kA, kR, 1), C(kB, kR, 2)})));
}

TEST(IsValidPairTest, EmptyRowsMatchEmptyRows) {
  EXPECT_TRUE(Valid("SO", B({C(kA, kR, 1), std::nullopt}), B({std::nullopt, C(kB, kR, 1)})));
  EXPECT_FALSE(Valid("SO", B({C(kA, kR, 1), std::nullopt}), B({C(kB, kR, 1), C(kA, kR, 2)})));
  EXPECT_TRUE(Valid("CO", B({C(kA, kR, 1), std::nullopt}), B({C(kB, kS, 1), C(kA, kR, 2)})));
}

TEST(IsValidPairTest, SingleRestriction) {
  const Batch b0 = B({C(kA, kR, 1), C(kB, kR, 2)});
  const Batch b1 = B({C(kB, kR, 1), C(kA, kR, 2)});
  EXPECT_TRUE(Valid("SO_1", b0, b1));
  EXPECT_FALSE(Valid("SO_1", B({C(kA, kR, 1), C(kA, kR, 2)}), b1));
  // Receivers repeat, which RO_1 and the impartial notions forbid.
  EXPECT_FALSE(Valid("CO_1", b0, b1));
  EXPECT_FALSE(Valid("RO_1", B({C(kA, kR, 1), C(kB, kR, 2)}), B({C(kA, kR, 1), C(kB, kR, 2)})));
}

TEST(IsValidPairTest, CorruptionRestrictionFixesMessages) {
  const Batch b0 = B({C(kA, kR, 1)});
  const Batch b1 = B({C(kA, kR, 2)});
  EXPECT_TRUE(Valid("CO", b0, b1));
  EXPECT_FALSE(Valid("CO_ce:0", b0, b1));
  EXPECT_FALSE(Valid("CO_ce:4", b0, b1));
  EXPECT_TRUE(Valid("CO_ce:3", b0, b1));
  EXPECT_FALSE(Valid("CO_ce:0", B({C(kA, kR, 1)}), B({std::nullopt})));
}

TEST(CountChallengeRowsTest, Examples) {
  const Batch b0 = B({C(kA, kR, 1), C(kB, kR, 2), C(kC, kR, 3)});
  EXPECT_EQ(CountChallengeRows(b0, b0), 0);
  EXPECT_EQ(CountChallengeRows(b0, B({C(kB, kR, 1), C(kA, kR, 2), C(kC, kR, 3)})), 2);
  // mu rows differ: the victim sends all mu messages in scenario 0.
  for (int mu = 1; mu <= 5; ++mu) {
    std::vector<Row> r0, r1;
    for (int i = 0; i < mu; ++i) {
      r0.push_back(C(kA, kR, i));
      r1.push_back(C(kB + i, kR, i));
    }
    ASSERT_TRUE(Valid("SO", B(r0), B(r1)));
    EXPECT_EQ(CountChallengeRows(B(r0), B(r1)), mu);
  }
}

TEST(CountChallengeRowsTest, LengthMismatchIsError) {
  try {
    CountChallengeRows(B({C(kA, kR, 1)}), B({C(kA, kR, 1), C(kB, kR, 1)}));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kInvalidInput);
  }
}

TEST(NotionNameTest, RoundTrip) {
  for (const char* s : {"CO", "RO", "SO", "SO_nmax:3", "SML", "(SM)L", "(SR)L", "MO[ML]", "SO_1",
                        "(SM)L_1", "(SR)L_1_ce", "(SR)L_1_ce:3,4", "SO_nmax:2_1_ce:0"}) {
    EXPECT_EQ(Notion::Parse(s).Name(), s);
  }
}

TEST(NotionNameTest, RejectsMalformed) {
  for (const char* s : {"", "XO", "SO_nmax:", "SO_nmax:0", "SO_2", "(SM)L_1_ce:", "SO_ce:a"}) {
    EXPECT_ANY_THROW(Notion::Parse(s)) << s;
  }
}

TEST(HierarchyTest, SpecExamples) {
  const NotionUniverse u{2, 2, 2};
  EXPECT_TRUE(IsValidSubset(Notion::Parse("(SM)L"), Notion::Parse("SO"), u));
  EXPECT_TRUE(IsValidSubset(Notion::Parse("SO"), Notion::Parse("CO"), u));
  EXPECT_FALSE(IsValidSubset(Notion::Parse("SO"), Notion::Parse("(SM)L"), NotionUniverse{4, 1, 2}));
}

// An SO pair with four differing senders is not a single swap.
TEST(HierarchyTest, SoPairWithFourDifferingSendersIsNotASwap) {
  const Batch b0 = B({C(kA, kR, 1), C(kB, kR, 2), C(kC, kR, 3), C(kD, kR, 4)});
  const Batch b1 = B({C(kB, kR, 1), C(kA, kR, 2), C(kD, kR, 3), C(kC, kR, 4)});
  EXPECT_TRUE(Valid("SO", b0, b1));
  EXPECT_FALSE(Valid("(SM)L", b0, b1));
}

TEST(HierarchyTest, ChainAtSmallScale) {
  const NotionUniverse u{2, 2, 3};
  EXPECT_TRUE(IsValidSubset(Notion::Parse("(SM)L"), Notion::Parse("SML"), u));
  EXPECT_TRUE(IsValidSubset(Notion::Parse("SML"), Notion::Parse("SO"), u));
  EXPECT_TRUE(IsValidSubset(Notion::Parse("SO"), Notion::Parse("CO"), u));
  EXPECT_FALSE(IsValidSubset(Notion::Parse("CO"), Notion::Parse("SO"), u));
}

TEST(HierarchyTest, RestrictionsNeverEnlarge) {
  const NotionUniverse u{2, 2, 2};
  for (const char* base : {"CO", "RO", "SO", "SO_nmax:1", "SML", "(SM)L", "(SR)L", "MO[ML]"}) {
    const Notion n = Notion::Parse(base);
    EXPECT_TRUE(IsValidSubset(Notion::Parse(std::string(base) + "_1"), n, u)) << base;
    EXPECT_TRUE(IsValidSubset(Notion::Parse(std::string(base) + "_ce:0"), n, u)) << base;
    EXPECT_TRUE(IsValidSubset(Notion::Parse(std::string(base) + "_ce:0,1"), n, u)) << base;
  }
}

TEST(HierarchyTest, LargeUniverseIsResourceLimit) {
  try {
    IsValidSubset(Notion::Parse("SO"), Notion::Parse("CO"), NotionUniverse{5, 3, 3});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kResourceLimit);
  }
}

ProtocolParams Users(int n) {
  ProtocolParams q;
  q.n = n;
  return q;
}

TEST(GeneratePairTest, SenderMessagePairTwoUsers) {
  const ScenarioPair p = GeneratePair(Notion::Parse("(SM)L_1"), Users(2), 5);
  EXPECT_EQ(p.batch0.size(), 2u);
  EXPECT_EQ(p.batch0[0]->sender, p.batch1[1]->sender);
  EXPECT_EQ(p.batch0[1]->sender, p.batch1[0]->sender);
  EXPECT_NE(p.batch0[0]->sender, p.batch1[0]->sender);
  EXPECT_EQ(p.batch0[0]->message, p.batch1[0]->message);
  EXPECT_EQ(CountChallengeRows(p.batch0, p.batch1), 2);
}

TEST(GeneratePairTest, SenderReceiverPairTwoUsers) {
  const ScenarioPair p = GeneratePair(Notion::Parse("(SR)L_1"), Users(2), 9);
  EXPECT_EQ(p.batch0[0]->message, p.batch0[1]->message);
  EXPECT_NE(p.batch0[0]->receiver, p.batch0[1]->receiver);
  // The sender reaching receiver batch0[0].receiver differs between scenarios.
  EXPECT_NE(p.batch0[0]->sender, p.batch1[0]->sender);
  EXPECT_EQ(p.batch0[0]->receiver, p.batch1[0]->receiver);
}

TEST(GeneratePairTest, DeterministicInSeed) {
  const Notion so = Notion::Parse("SO");
  const ScenarioPair a = GeneratePair(so, Users(3), 77);
  const ScenarioPair b = GeneratePair(so, Users(3), 77);
  EXPECT_EQ(a.batch0, b.batch0);
  EXPECT_EQ(a.batch1, b.batch1);
}

TEST(GeneratePairTest, RejectsBadNotion) {
  Notion bad;
  bad.kind = NotionKind::kSenderUnobservabilityBounded;
  bad.n_max = 0;
  EXPECT_ANY_THROW(GeneratePair(bad, Users(3), 1));
}

class GeneratorAgreementTest : public ::testing::TestWithParam<std::string> {};

TEST_P(GeneratorAgreementTest, GeneratedPairsAreValid) {
  const Notion notion = Notion::Parse(GetParam());
  for (std::uint64_t seed = 0; seed < 10000; ++seed) {
    const int n = 2 + static_cast<int>(seed % 4);
    const ScenarioPair p = GeneratePair(notion, Users(n), seed);
    ASSERT_TRUE(IsValidPair(notion, p.batch0, p.batch1)) << GetParam() << " seed " << seed;
  }
}

INSTANTIATE_TEST_SUITE_P(
    AllNotions, GeneratorAgreementTest,
    ::testing::Values("CO", "RO", "SO", "SO_nmax:1", "SO_nmax:2", "SML", "(SM)L", "(SR)L",
                      "MO[ML]", "CO_1", "RO_1", "SO_1", "SML_1", "(SM)L_1", "(SR)L_1", "MO[ML]_1",
                      "CO_ce:0", "SO_ce:1", "(SM)L_1_ce:0", "(SR)L_1_ce:0,1"),
    [](const ::testing::TestParamInfo<std::string>& info) {
      std::string s;
      for (char c : info.param) s += std::isalnum(static_cast<unsigned char>(c)) ? c : '_';
      return s;
    });

}  // namespace
}  // namespace acnb
