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

#ifndef ACNB_ADVERSARIES_HPP_
#define ACNB_ADVERSARIES_HPP_

#include <algorithm>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include "acnb/error.hpp"
#include "acnb/model.hpp"
#include "acnb/notions.hpp"
#include "acnb/protocols.hpp"
#include "acnb/random.hpp"

namespace acnb {

enum class AttackKind { kCounting, kTimingInterval, kPathTracing, kDropping, kRandomGuess };

inline constexpr std::pair<std::string_view, AttackKind> kAttackNames[] = {
    {"counting", AttackKind::kCounting},
    {"timing", AttackKind::kTimingInterval},
    {"tracing", AttackKind::kPathTracing},
    {"dropping", AttackKind::kDropping},
    {"random-guess", AttackKind::kRandomGuess},
    {"timing-interval", AttackKind::kTimingInterval},
    {"path-tracing", AttackKind::kPathTracing},
};

inline std::string_view AttackName(AttackKind kind) {
  for (const auto& [name, k] : kAttackNames) {
    if (k == kind) return name;
  }
  return "unknown";
}

inline AttackKind ParseAttack(std::string_view name) {
  for (const auto& [n, k] : kAttackNames) {
    if (n == name) return k;
  }
  Fail(ErrorCode::kInvalidInput, "unknown attack '" + std::string(name) + "'");
}

// What the game adversary knows about her own challenge: row 0 of each batch
// is the challenge communication, so its two senders are the suspects.
struct ChallengeView {
  UserId suspect[2] = {0, 0};
  MessageId message = 0;
  UserId receiver = 0;

  static ChallengeView Of(const ScenarioPair& pair) {
    Require(pair.batch0[0].has_value() && pair.batch1[0].has_value(),
            ErrorCode::kInvalidInput, "challenge row must be a communication");
    ChallengeView v;
    v.suspect[0] = pair.batch0[0]->sender;
    v.suspect[1] = pair.batch1[0]->sender;
    v.message = pair.batch0[0]->message;
    v.receiver = pair.batch0[0]->receiver;
    return v;
  }

  std::optional<int> ScenarioOf(UserId sender) const {
    if (suspect[0] == suspect[1]) return std::nullopt;
    if (sender == suspect[0]) return 0;
    if (sender == suspect[1]) return 1;
    return std::nullopt;
  }
};

// Capability a given attack needs; used both to build a default adversary
// and to reject incompatible ones.
inline void CheckCapability(AttackKind attack, const AdversaryCapability& cap,
                            const ScenarioPair& pair) {
  const ChallengeView view = ChallengeView::Of(pair);
  switch (attack) {
    case AttackKind::kCounting:
      Require(cap.receiver_corrupted || cap.knows_total_real_messages,
              ErrorCode::kCapabilityViolation,
              "counting needs a corrupted receiver or the total real message count");
      break;
    case AttackKind::kTimingInterval:
    case AttackKind::kPathTracing:
      Require(cap.receiver_corrupted, ErrorCode::kCapabilityViolation,
              "timing needs the challenge arrival at a corrupted receiver");
      Require(cap.ObservesSender(view.suspect[0]) && cap.ObservesSender(view.suspect[1]),
              ErrorCode::kCapabilityViolation, "timing needs both suspects' links");
      break;
    case AttackKind::kDropping:
      Require(cap.active_drop && cap.knows_expected_reception && cap.receiver_corrupted,
              ErrorCode::kCapabilityViolation,
              "dropping needs active drops, a corrupted receiver and expected reception");
      break;
    case AttackKind::kRandomGuess:
      break;
  }
}

inline AdversaryCapability DefaultCapability(AttackKind attack, const ScenarioPair& pair,
                                             int passive_relays = 0, int active_nodes = 0) {
  const ChallengeView view = ChallengeView::Of(pair);
  AdversaryCapability cap;
  switch (attack) {
    case AttackKind::kCounting:
      for (const Batch* b : {&pair.batch0, &pair.batch1}) {
        for (std::size_t j = 0; j < b->size(); ++j) {
          const Row& other = (b == &pair.batch0 ? pair.batch1 : pair.batch0)[j];
          if ((*b)[j] && (!other || other->sender != (*b)[j]->sender)) {
            cap.observed_senders.insert((*b)[j]->sender);
          }
        }
      }
      cap.receiver_corrupted = true;
      break;
    case AttackKind::kTimingInterval:
    case AttackKind::kPathTracing:
      cap.observed_senders = {view.suspect[0], view.suspect[1]};
      cap.receiver_corrupted = true;
      cap.passive_relays = passive_relays;
      break;
    case AttackKind::kDropping:
      cap.observed_senders = {view.suspect[0]};
      cap.receiver_corrupted = true;
      cap.active_drop = true;
      cap.knows_expected_reception = true;
      cap.active_nodes = active_nodes;
      break;
    case AttackKind::kRandomGuess:
      break;
  }
  return cap;
}

// Excludes every scenario in which some observed sender would have had to send
// more real messages than she sent messages at all.
inline int CountingGuess(const ObservationTrace& view, const AdversaryCapability& cap,
                         const ScenarioPair& pair, Chooser& coin) {
  CheckCapability(AttackKind::kCounting, cap, pair);
  // Out counts arrivals of the challenge batches' own messages only.
  std::set<MessageId> challenge_messages;
  for (const Batch* b : {&pair.batch0, &pair.batch1}) {
    for (const Row& r : b->rows()) {
      if (r) challenge_messages.insert(r->message);
    }
  }
  std::map<UserId, long> sent;
  long out = 0;
  for (const ObservationEvent& e : view.events) {
    if (e.kind == EventKind::kSend && e.location.kind == Location::Kind::kUser &&
        cap.ObservesSender(e.location.id)) {
      ++sent[e.location.id];
    } else if (e.kind == EventKind::kDeliver && e.is_real.value_or(false) && !e.collision &&
               e.message && challenge_messages.count(*e.message) > 0) {
      ++out;
    }
  }

  bool excluded[2] = {false, false};
  for (int b = 0; b < 2; ++b) {
    const Batch& batch = pair.batch(b);
    long total = 0;
    std::map<UserId, long> rows;
    for (const Row& r : batch.rows()) {
      if (!r) continue;
      ++total;
      ++rows[r->sender];
    }
    const long delivered = cap.receiver_corrupted ? out : total;
    for (const auto& [u, count] : rows) {
      if (!cap.ObservesSender(u)) continue;
      // Fewest of u's messages that must be among the delivered ones.
      const long required = std::max(0L, count - (total - delivered));
      if (sent[u] < required) excluded[b] = true;
    }
  }
  if (excluded[0] != excluded[1]) return excluded[0] ? 1 : 0;
  return coin.Coin() ? 1 : 0;
}

namespace internal {

inline const ObservationEvent* FindChallengeArrival(const ObservationTrace& view,
                                                    const ChallengeView& c) {
  for (const ObservationEvent& e : view.events) {
    if (e.kind == EventKind::kDeliver && e.message == c.message) return &e;
  }
  return nullptr;
}

inline std::optional<UserId> DirectSender(const ObservationTrace& view, PacketId packet) {
  for (const ObservationEvent& e : view.events) {
    if (e.kind == EventKind::kSend && e.packet == packet) return e.location.id;
  }
  return std::nullopt;
}

inline int DecideFromWindowSends(bool sent0, bool sent1, Chooser& coin) {
  if (sent0 && !sent1) return 0;
  if (sent1 && !sent0) return 1;
  return coin.Coin() ? 1 : 0;
}

inline bool InWindow(int round, int arrival, int l_max) {
  return round >= arrival - l_max + 1 && round <= arrival - 1;
}

}  // namespace internal

// Accuses the only suspect that sent anything during the l_max - 1 rounds
// before the challenge arrived; otherwise flips the adversary coin.
inline int TimingGuess(const ObservationTrace& view, const AdversaryCapability& cap,
                       const ScenarioPair& pair, int l_max, Chooser& coin) {
  CheckCapability(AttackKind::kTimingInterval, cap, pair);
  const ChallengeView c = ChallengeView::Of(pair);
  const ObservationEvent* arrival = internal::FindChallengeArrival(view, c);
  if (arrival == nullptr || c.suspect[0] == c.suspect[1]) return coin.Coin() ? 1 : 0;

  // Same-round delivery without relays: the packet is seen on the sender link.
  if (const auto sender = internal::DirectSender(view, arrival->packet)) {
    if (const auto b = c.ScenarioOf(*sender)) return *b;
  }
  bool sent[2] = {false, false};
  for (const ObservationEvent& e : view.events) {
    if (e.kind != EventKind::kSend || !internal::InWindow(e.round, arrival->round, l_max))
      continue;
    for (int k = 0; k < 2; ++k) sent[k] |= e.location.id == c.suspect[k];
  }
  return internal::DecideFromWindowSends(sent[0], sent[1], coin);
}

// Follows packets through compromised relays. A challenge traced back to a
// suspect decides the game; suspect packets traced to some other end are
// removed from the timing window. Without compromised relays this is exactly
// TimingGuess.
inline int TracingGuess(const ObservationTrace& view, const AdversaryCapability& cap,
                        const ScenarioPair& pair, int l_max, Chooser& coin) {
  CheckCapability(AttackKind::kPathTracing, cap, pair);
  if (cap.passive_relays == 0) return TimingGuess(view, cap, pair, l_max, coin);
  const ChallengeView c = ChallengeView::Of(pair);
  const ObservationEvent* arrival = internal::FindChallengeArrival(view, c);
  if (arrival == nullptr || c.suspect[0] == c.suspect[1]) return coin.Coin() ? 1 : 0;

  std::unordered_map<PacketId, const ObservationEvent*> by_output;
  std::unordered_map<PacketId, const ObservationEvent*> by_input;
  for (const ObservationEvent& e : view.events) {
    if (e.kind == EventKind::kForward && e.source_packet) {
      by_output[e.packet] = &e;
      by_input[*e.source_packet] = &e;
    }
  }

  PacketId packet = arrival->packet;
  while (true) {
    if (const auto sender = internal::DirectSender(view, packet)) {
      if (const auto b = c.ScenarioOf(*sender)) return *b;
      break;
    }
    const auto it = by_output.find(packet);
    if (it == by_output.end()) break;
    packet = *it->second->source_packet;
  }

  // True iff the packet's whole onward path is visible and ends elsewhere.
  auto traced_elsewhere = [&](const ObservationEvent& send) {
    if (!send.next_hop) return false;
    PacketId p = send.packet;
    std::optional<Location> next = send.next_hop;
    while (next && next->kind == Location::Kind::kRelay) {
      const auto it = by_input.find(p);
      if (it == by_input.end()) return false;
      p = it->second->packet;
      next = it->second->next_hop;
    }
    return p != arrival->packet;
  };

  bool sent[2] = {false, false};
  for (const ObservationEvent& e : view.events) {
    if (e.kind != EventKind::kSend || !internal::InWindow(e.round, arrival->round, l_max))
      continue;
    for (int k = 0; k < 2; ++k) {
      if (e.location.id == c.suspect[k] && !traced_elsewhere(e)) sent[k] = true;
    }
  }
  return internal::DecideFromWindowSends(sent[0], sent[1], coin);
}

// Active adversary: drops everything leaving the victim (suspect 0), both on
// the victim's own link and at controlled relays whose previous hop was the
// victim, then checks whether the expected packet still reached the receiver.
class DroppingStrategy {
 public:
  DroppingStrategy(const AdversaryCapability& cap, const ScenarioPair& pair)
      : cap_(cap), challenge_(ChallengeView::Of(pair)) {
    CheckCapability(AttackKind::kDropping, cap, pair);
  }

  UserId victim() const { return challenge_.suspect[0]; }

  std::set<DropAction> Actions(const std::vector<PendingTransmission>& pending) const {
    std::set<DropAction> drops;
    const Location victim_loc = Location::User(victim());
    for (const PendingTransmission& t : pending) {
      if (t.at == victim_loc || (t.previous && *t.previous == victim_loc)) {
        drops.insert({t.packet, t.at});
      }
    }
    return drops;
  }

  // Victim accused (scenario 0) iff the expected message never arrived.
  int Guess(const ObservationTrace& view) const {
    for (const ObservationEvent& e : view.events) {
      if (e.kind == EventKind::kDeliver && e.location == Location::User(challenge_.receiver) &&
          e.message == challenge_.message) {
        return 1;
      }
    }
    return 0;
  }

  // Drives a full run of the dropping model and returns the guess.
  int Play(DroppingRun& run) const {
    ObservationTrace view;
    while (!run.done()) {
      const auto events = run.Step(Actions(run.VisiblePending()));
      view.events.insert(view.events.end(), events.begin(), events.end());
    }
    return Guess(view);
  }

 private:
  AdversaryCapability cap_;
  ChallengeView challenge_;
};

}  // namespace acnb

#endif  // ACNB_ADVERSARIES_HPP_
