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

#include <algorithm>
#include <cmath>
#include <functional>
#include <cstdint>
#include <map>
#include <set>
#include <vector>

#include <gtest/gtest.h>

#include "acnb/protocols.hpp"

namespace acnb {
namespace {

Batch Rows(std::vector<Communication> c, OrderingMode mode = OrderingMode::kRandomPermutation) {
  return MakeBatch(c, mode);
}

ObservationTrace Simulate(ProtocolVariant v, const ProtocolParams& q, const Batch& b,
                     std::uint64_t seed) {
  SampledChooser rng(seed);
  return RunProtocol(ProtocolKind{v, q}, b, rng);
}

long Count(const ObservationTrace& t, EventKind kind) {
  long k = 0;
  for (const auto& e : t.events) k += e.kind == kind ? 1 : 0;
  return k;
}

ErrorCode CodeOf(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "no acnb::Error thrown";
  return ErrorCode::kInvalidInput;
}

TEST(ProtocolNameTest, RoundTrip) {
  for (ProtocolVariant v :
       {ProtocolVariant::kTrilemmaSync, ProtocolVariant::kTrilemmaUnsync,
        ProtocolVariant::kOnionPath, ProtocolVariant::kThresholdMix, ProtocolVariant::kDcNetRound,
        ProtocolVariant::kBroadcastFullDummy, ProtocolVariant::kDroppingModel}) {
    EXPECT_EQ(ParseProtocol(ProtocolName(v)), v);
  }
  EXPECT_EQ(CodeOf([] { ParseProtocol("carrier-pigeon"); }), ErrorCode::kInvalidInput);
}

TEST(BroadcastTest, EveryUserSendsEveryRound) {
  ProtocolParams q;
  q.n = 4;
  q.rounds = 3;
  const ObservationTrace t =
      Simulate(ProtocolVariant::kBroadcastFullDummy, q, Rows({{0, 1, 1, 0}, {2, 3, 2, 0}}), 1);
  EXPECT_EQ(Count(t, EventKind::kSend), 12);
  std::map<std::pair<int, int>, int> per;
  for (const auto& e : t.events) {
    if (e.kind == EventKind::kSend) ++per[{e.round, e.location.id}];
  }
  EXPECT_EQ(per.size(), 12u);
  EXPECT_EQ(Count(t, EventKind::kDeliver), 2);
}

TEST(ThresholdMixTest, FlushesAllAtOnce) {
  ProtocolParams q;
  q.n = 4;
  q.threshold = 3;
  const ObservationTrace t = Simulate(ProtocolVariant::kThresholdMix, q,
                                 Rows({{0, 3, 1, 0}, {1, 3, 2, 0}, {2, 3, 3, 0}}), 4);
  std::set<int> send_rounds, deliver_rounds;
  for (const auto& e : t.events) {
    if (e.kind == EventKind::kSend) send_rounds.insert(e.round);
    if (e.kind == EventKind::kDeliver) deliver_rounds.insert(e.round);
  }
  EXPECT_EQ(send_rounds, (std::set<int>{1, 2, 3}));
  EXPECT_EQ(deliver_rounds, (std::set<int>{4}));
  EXPECT_EQ(Count(t, EventKind::kDeliver), 3);
}

TEST(ThresholdMixTest, ThresholdAboveMessageCountIsConfigurationError) {
  ProtocolParams q;
  q.n = 4;
  q.threshold = 3;
  EXPECT_EQ(CodeOf([&] { Simulate(ProtocolVariant::kThresholdMix, q, Rows({{0, 3, 1, 0}}), 1); }),
            ErrorCode::kConfiguration);
}

TEST(TrilemmaUnsyncTest, DeterministicInSeed) {
  ProtocolParams q;
  q.n = 5;
  q.l_max = 3;
  q.beta = 0.2;
  q.p_real = 0.2;
  q.rounds = 20;
  const Batch b = Rows({{0, 1, 1, 0}, {1, 2, 2, 0}, {2, 3, 3, 0}});
  EXPECT_EQ(Simulate(ProtocolVariant::kTrilemmaUnsync, q, b, 99),
            Simulate(ProtocolVariant::kTrilemmaUnsync, q, b, 99));
  EXPECT_NE(Simulate(ProtocolVariant::kTrilemmaUnsync, q, b, 99),
            Simulate(ProtocolVariant::kTrilemmaUnsync, q, b, 100));
}

TEST(TrilemmaUnsyncTest, SendFrequencyMatchesP) {
  ProtocolParams q;
  q.n = 20;
  q.l_max = 2;
  q.beta = 0.15;
  q.p_real = 0.15;
  q.rounds = 5000;  // 10^5 user-rounds
  const ObservationTrace t =
      Simulate(ProtocolVariant::kTrilemmaUnsync, q, Rows({{0, 1, 1, 0}}), 2024);
  const double user_rounds = static_cast<double>(q.n) * q.rounds;
  const double sends = static_cast<double>(Count(t, EventKind::kSend));
  const double sigma = std::sqrt(q.p() * (1 - q.p()) * user_rounds);
  EXPECT_LE(std::abs(sends - q.p() * user_rounds), 3 * sigma + 1);
}

TEST(TrilemmaUnsyncTest, RealMessagesArriveWithinLatency) {
  ProtocolParams q;
  q.n = 6;
  q.l_max = 4;
  q.p_real = 0.5;
  q.rounds = 50;
  const ObservationTrace t =
      Simulate(ProtocolVariant::kTrilemmaUnsync, q, Rows({{0, 1, 1, 0}, {2, 1, 2, 0}}), 5);
  // Batch messages have unique ids; filler traffic reuses one id per user.
  std::map<MessageId, int> sent;
  long real_sends = 0, delivered = 0;
  for (const auto& e : t.events) {
    if (e.kind == EventKind::kSend && e.is_real.value_or(false)) {
      ++real_sends;
      if (*e.message > 0) sent[*e.message] = e.round;
    }
  }
  for (const auto& e : t.events) {
    if (e.kind != EventKind::kDeliver) continue;
    ++delivered;
    if (*e.message <= 0) continue;
    const int delay = e.round - sent.at(*e.message);
    EXPECT_GE(delay, 1);
    EXPECT_LE(delay, q.l_max - 1);
  }
  EXPECT_EQ(sent.size(), 2u);
  EXPECT_EQ(delivered, real_sends);
}

TEST(TrilemmaSyncTest, OneRealSendPerRoundAndAtMostOneSendPerUser) {
  ProtocolParams q;
  q.n = 8;
  q.l_max = 3;
  q.beta = 0.5;
  std::vector<Communication> rows;
  for (int i = 0; i < 8; ++i) rows.push_back({i, (i + 3) % 8, i + 1, 0});
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const ObservationTrace t = Simulate(ProtocolVariant::kTrilemmaSync, q, Rows(rows), seed);
    std::map<int, int> real_per_round;
    std::map<std::pair<int, int>, int> per_user_round;
    for (const auto& e : t.events) {
      if (e.kind != EventKind::kSend) continue;
      if (*e.is_real) ++real_per_round[e.round];
      EXPECT_EQ((++per_user_round[{e.round, e.location.id}]), 1);
    }
    EXPECT_EQ(real_per_round.size(), 8u);
    for (const auto& [round, k] : real_per_round) EXPECT_EQ(k, 1) << round;
    EXPECT_EQ(Count(t, EventKind::kDeliver), 8);  // no drops, everything arrives
  }
}

TEST(TrilemmaSyncTest, LatencyOneDeliversInSendRound) {
  ProtocolParams q;
  q.n = 3;
  q.l_max = 1;
  q.l_exp = 1;
  const ObservationTrace t =
      Simulate(ProtocolVariant::kTrilemmaSync, q, Rows({{0, 1, 1, 0}, {1, 2, 2, 0}}), 3);
  for (const auto& e : t.events) {
    if (e.kind == EventKind::kDeliver) {
      const auto send = std::find_if(t.events.begin(), t.events.end(), [&](const auto& s) {
        return s.kind == EventKind::kSend && s.packet == e.packet;
      });
      ASSERT_NE(send, t.events.end());
      EXPECT_EQ(send->round, e.round);
    }
  }
}

TEST(OnionPathTest, DelayEqualsPathLengthAndMeanMatchesExpectation) {
  ProtocolParams q;
  q.n = 10;
  q.l_max = 5;
  q.l_exp = 2.4;
  q.relays = 6;
  std::vector<Communication> rows;
  for (int i = 0; i < 10; ++i) rows.push_back({i, (i + 1) % 10, i + 1, 0});
  const Batch b = Rows(rows, OrderingMode::kSimultaneous);
  double total = 0;
  long packets = 0;
  for (std::uint64_t seed = 0; packets < 100000; ++seed) {
    const ObservationTrace t = Simulate(ProtocolVariant::kOnionPath, q, b, seed);
    std::map<MessageId, int> send_round;
    long forwards = 0;
    for (const auto& e : t.events) {
      if (e.kind == EventKind::kSend) send_round[*e.message] = e.round;
      if (e.kind == EventKind::kForward) ++forwards;
    }
    long hops = 0;
    long delivered = 0;
    for (const auto& e : t.events) {
      if (e.kind != EventKind::kDeliver) continue;
      const int delay = e.round - send_round.at(*e.message);
      EXPECT_LE(delay + 1, q.l_max);
      total += delay;
      hops += delay;
      ++packets;
      ++delivered;
    }
    ASSERT_EQ(delivered, 10);
    EXPECT_EQ(forwards, hops);  // one forward per relay on the path
  }
  EXPECT_NEAR(total / packets, q.l_exp, 0.02 * q.l_exp);
}

TEST(OnionPathTest, HopsAreDistinctRelaysAndLinked) {
  ProtocolParams q;
  q.n = 4;
  q.l_max = 4;
  q.l_exp = 3;
  q.relays = 3;
  const ObservationTrace t = Simulate(ProtocolVariant::kOnionPath, q, Rows({{0, 2, 7, 0}}), 8);
  std::set<int> relays;
  PacketId current = 0;
  for (const auto& e : t.events) {
    if (e.kind == EventKind::kSend) current = e.packet;
    if (e.kind == EventKind::kForward) {
      EXPECT_EQ(*e.source_packet, current);
      current = e.packet;
      relays.insert(e.location.id);
    }
    if (e.kind == EventKind::kDeliver) {
      EXPECT_EQ(e.packet, current);
    }
  }
  EXPECT_EQ(relays.size(), 3u);
}

TEST(OnionPathTest, RejectsInconsistentLatency) {
  ProtocolParams q;
  q.n = 4;
  q.l_max = 3;
  q.l_exp = 3;
  q.relays = 4;
  EXPECT_EQ(CodeOf([&] { Simulate(ProtocolVariant::kOnionPath, q, Rows({{0, 1, 1, 0}}), 1); }),
            ErrorCode::kConfiguration);
}

TEST(DcNetTest, ScheduledRoundsNeverCollide) {
  ProtocolParams q;
  q.n = 5;
  q.rounds = 4;
  const ObservationTrace t =
      Simulate(ProtocolVariant::kDcNetRound, q, Rows({{0, 1, 1, 0}, {2, 3, 2, 0}, {4, 0, 3, 0}}), 3);
  std::map<int, int> outputs;
  int real = 0;
  for (const auto& e : t.events) {
    if (e.kind != EventKind::kDeliver) continue;
    ++outputs[e.round];
    EXPECT_FALSE(e.collision);
    EXPECT_EQ(e.location, Location::Broadcast());
    real += *e.is_real ? 1 : 0;
  }
  EXPECT_EQ(outputs.size(), 4u);
  for (const auto& [round, k] : outputs) EXPECT_EQ(k, 1) << round;
  EXPECT_EQ(real, 3);
  EXPECT_EQ(Count(t, EventKind::kSend), 20);
}

TEST(DcNetTest, CollisionMarkerWhenTwoSendersShareARound) {
  ProtocolParams q;
  q.n = 3;
  q.rounds = 2;
  ProtocolKind kind{ProtocolVariant::kDcNetRound, q};
  kind.collision_free_schedule = false;
  int collisions = 0;
  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    SampledChooser rng(seed);
    const ObservationTrace t = RunProtocol(kind, Rows({{0, 1, 1, 0}, {1, 2, 2, 0}}), rng);
    std::map<int, int> outputs;
    for (const auto& e : t.events) {
      if (e.kind != EventKind::kDeliver) continue;
      ++outputs[e.round];
      if (e.collision) {
        ++collisions;
        EXPECT_FALSE(e.message.has_value());
      }
    }
    EXPECT_EQ(outputs.size(), 2u);
    for (const auto& [round, k] : outputs) EXPECT_EQ(k, 1);
  }
  // Both messages share a round with probability 1/2.
  EXPECT_GT(collisions, 60);
  EXPECT_LT(collisions, 140);
}

ProtocolParams DroppingParams(int copies, int relays) {
  ProtocolParams q;
  q.n = 4;
  q.l_max = 2;
  q.l_exp = 1;
  q.relays = relays;
  q.copies = copies;
  return q;
}

bool Delivered(const ObservationTrace& t, MessageId m) {
  for (const auto& e : t.events) {
    if (e.kind == EventKind::kDeliver && e.message == m) return true;
  }
  return false;
}

TEST(DroppingRunTest, DropOnlyCopyAtVictimLink) {
  AdversaryCapability cap;
  cap.observed_senders = {0};
  cap.active_drop = true;
  cap.receiver_corrupted = true;
  SampledChooser rng(1);
  DroppingRun run(DroppingParams(1, 4), Rows({{0, 3, 9, 0}}), cap, rng);
  std::vector<ObservationEvent> seen;
  while (!run.done()) {
    std::set<DropAction> drops;
    for (const auto& p : run.VisiblePending()) {
      if (p.at == Location::User(0)) drops.insert({p.packet, p.at});
    }
    for (const auto& e : run.Step(drops)) seen.push_back(e);
  }
  EXPECT_FALSE(Delivered(run.Trace(), 9));
  EXPECT_EQ(Count(run.Trace(), EventKind::kDrop), 1);
  for (const auto& e : seen) EXPECT_NE(e.kind, EventKind::kDeliver);
}

TEST(DroppingRunTest, SurvivingCopyStillDelivers) {
  AdversaryCapability cap;
  cap.active_nodes = 4;
  cap.active_drop = true;
  SampledChooser rng(2);
  DroppingRun run(DroppingParams(2, 4), Rows({{0, 3, 9, 0}}), cap, rng);
  bool dropped_one = false;
  while (!run.done()) {
    std::set<DropAction> drops;
    for (const auto& p : run.VisiblePending()) {
      if (!dropped_one && p.at.kind == Location::Kind::kRelay) {
        drops.insert({p.packet, p.at});
        dropped_one = true;
      }
    }
    run.Step(drops);
  }
  EXPECT_TRUE(dropped_one);
  EXPECT_TRUE(Delivered(run.Trace(), 9));
  EXPECT_EQ(Count(run.Trace(), EventKind::kDrop), 1);
  EXPECT_EQ(Count(run.Trace(), EventKind::kDeliver), 1);
}

TEST(DroppingRunTest, DroppingAtHonestRelayIsCapabilityViolation) {
  AdversaryCapability cap;
  cap.active_nodes = 1;
  cap.active_drop = true;
  SampledChooser rng(3);
  DroppingRun run(DroppingParams(1, 4), Rows({{0, 3, 9, 0}}), cap, rng);
  EXPECT_EQ(CodeOf([&] { run.Step({DropAction{1, Location::Relay(2)}}); }),
            ErrorCode::kCapabilityViolation);
}

TEST(DroppingRunTest, CopiesUseDistinctFirstHopsAndFullLatency) {
  const ProtocolParams q = [] {
    ProtocolParams p = DroppingParams(3, 4);
    p.l_max = 4;
    p.l_exp = 3;
    return p;
  }();
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    const ObservationTrace t = Simulate(ProtocolVariant::kDroppingModel, q, Rows({{1, 2, 5, 0}}), seed);
    std::set<int> first_relays;
    std::set<PacketId> sends;
    for (const auto& e : t.events) {
      if (e.kind == EventKind::kSend) {
        sends.insert(e.packet);
        first_relays.insert(e.next_hop->id);
      }
      if (e.kind == EventKind::kDeliver) {
        EXPECT_EQ(e.round, q.l_max);
      }
    }
    EXPECT_EQ(sends.size(), 3u);
    EXPECT_EQ(first_relays.size(), 3u);
    EXPECT_EQ(Count(t, EventKind::kDeliver), 3);
  }
}

TEST(DroppingRunTest, RequiresLatencyAtLeastTwo) {
  ProtocolParams q = DroppingParams(1, 4);
  q.l_max = 1;
  EXPECT_EQ(CodeOf([&] { Simulate(ProtocolVariant::kDroppingModel, q, Rows({{0, 1, 1, 0}}), 1); }),
            ErrorCode::kConfiguration);
}

TEST(RunProtocolTest, FilteredOverloadMatchesManualFilter) {
  ProtocolParams q;
  q.n = 4;
  q.l_max = 3;
  q.beta = 0.3;
  q.p_real = 0.2;
  q.rounds = 10;
  const Batch b0 = Rows({{0, 3, 1, 0}, {1, 3, 2, 0}});
  const Batch b1 = Rows({{1, 3, 1, 0}, {0, 3, 2, 0}});
  const ScenarioPair pair{b0, b1, Notion::Parse("(SM)L")};
  AdversaryCapability cap;
  cap.observed_senders = {0, 1};
  cap.receiver_corrupted = true;
  const ProtocolKind kind{ProtocolVariant::kTrilemmaUnsync, q};
  SampledChooser rng(17);
  EXPECT_EQ(RunProtocol(kind, pair, 1, cap, 17), FilterTrace(RunProtocol(kind, b1, rng), cap));
}

}  // namespace
}  // namespace acnb
