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

#ifndef ACNB_MODEL_HPP_
#define ACNB_MODEL_HPP_

#include <algorithm>
#include <compare>
#include <cstdint>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "acnb/error.hpp"

namespace acnb {

using UserId = int;
using MessageId = int;
using AuxTag = int;
using PacketId = std::uint64_t;

// One (sender, receiver, message, aux) tuple. Payload ids are compared for
// equality only; sender == receiver is allowed.
struct Communication {
  UserId sender = 0;
  UserId receiver = 0;
  MessageId message = 0;
  AuxTag aux = 0;

  friend auto operator<=>(const Communication&, const Communication&) = default;
};

// A batch row is either a communication or the "no communication" marker.
using Row = std::optional<Communication>;

enum class OrderingMode { kSimultaneous, kRandomPermutation };

class Batch {
 public:
  static Batch Make(std::vector<Row> rows, OrderingMode mode) {
    Require(!rows.empty(), ErrorCode::kInvalidInput, "batch needs at least one row");
    return Batch(std::move(rows), mode);
  }

  const std::vector<Row>& rows() const { return rows_; }
  OrderingMode mode() const { return mode_; }
  std::size_t size() const { return rows_.size(); }
  const Row& operator[](std::size_t i) const { return rows_[i]; }

  friend bool operator==(const Batch&, const Batch&) = default;

 private:
  Batch(std::vector<Row> rows, OrderingMode mode) : rows_(std::move(rows)), mode_(mode) {}

  std::vector<Row> rows_;
  OrderingMode mode_;
};

inline Batch MakeBatch(std::vector<Row> rows, OrderingMode mode) {
  return Batch::Make(std::move(rows), mode);
}

inline Batch MakeBatch(const std::vector<Communication>& comms, OrderingMode mode) {
  return Batch::Make(std::vector<Row>(comms.begin(), comms.end()), mode);
}

// Protocol-level parameters. Latency convention: a message sent in round s
// and delivered in round a occupies a - s + 1 rounds, which never exceeds
// l_max. l_max = 1 therefore means same-round delivery without relays.
struct ProtocolParams {
  int n = 2;
  int l_max = 2;
  double l_exp = 1.0;
  double beta = 0.0;    // dummy-send probability per user and round
  double p_real = 0.0;  // real-send probability per user and round
  int relays = 4;       // K
  int threshold = 1;    // threshold mix flush size
  int copies = 1;       // redundant first hops (dropping model)
  int rounds = 1;       // horizon r
  bool integrated = false;  // users also relay traffic (dropping model)

  double p() const { return beta + p_real; }

  void Validate() const {
    Require(n >= 2, ErrorCode::kInvalidInput, "n must be at least 2");
    Require(l_max >= 1, ErrorCode::kInvalidInput, "l_max must be at least 1");
    Require(beta >= 0.0 && beta <= 1.0, ErrorCode::kInvalidInput, "beta outside [0,1]");
    Require(p_real >= 0.0 && p_real <= 1.0, ErrorCode::kInvalidInput,
            "p' outside [0,1]");
    Require(beta + p_real <= 1.0 + 1e-12, ErrorCode::kInvalidInput,
            "p' + beta exceeds 1");
    Require(l_exp >= 0.0 && l_exp <= l_max, ErrorCode::kInvalidInput,
            "l_exp must lie in [0, l_max]");
    Require(relays >= 0, ErrorCode::kInvalidInput, "negative relay count");
    Require(rounds >= 1, ErrorCode::kInvalidInput, "rounds must be at least 1");
  }
};

struct AdversaryCapability {
  std::set<UserId> observed_senders;
  bool receiver_corrupted = false;
  int passive_relays = 0;  // c_p: relays 0..c_p-1 are compromised
  int active_nodes = 0;    // c_a: relays 0..c_a-1 may drop
  bool active_drop = false;
  bool knows_expected_reception = false;
  bool knows_total_real_messages = false;

  void Validate(int relay_count) const {
    Require(passive_relays >= 0 && active_nodes >= 0, ErrorCode::kInvalidInput,
            "negative corruption count");
    Require(passive_relays <= relay_count, ErrorCode::kInvalidInput, "c_p exceeds K");
    Require(!active_drop || active_nodes >= 1 || !observed_senders.empty(),
            ErrorCode::kInvalidInput, "active drop needs a controlled node or link");
  }

  bool ObservesSender(UserId u) const { return observed_senders.count(u) > 0; }
  bool SeesRelay(int relay) const {
    return relay < passive_relays || relay < active_nodes;
  }
  bool CanDropAtRelay(int relay) const { return active_drop && relay < active_nodes; }
  bool CanDropAtUser(UserId u) const { return active_drop && ObservesSender(u); }
};

enum class EventKind { kSend, kForward, kDeliver, kDrop };

struct Location {
  enum class Kind { kUser, kRelay, kBroadcast };
  Kind kind = Kind::kUser;
  int id = 0;

  static Location User(UserId u) { return {Kind::kUser, u}; }
  static Location Relay(int r) { return {Kind::kRelay, r}; }
  static Location Broadcast() { return {Kind::kBroadcast, 0}; }

  friend auto operator<=>(const Location&, const Location&) = default;
};

// Fields wrapped in optional are the ones a vantage point may not see.
struct ObservationEvent {
  EventKind kind = EventKind::kSend;
  int round = 0;
  Location location;
  PacketId packet = 0;
  std::optional<PacketId> source_packet;  // incoming layer at a forwarding node
  std::optional<Location> next_hop;
  std::optional<bool> is_real;
  std::optional<MessageId> message;
  std::optional<AuxTag> aux;
  bool collision = false;

  friend bool operator==(const ObservationEvent&, const ObservationEvent&) = default;
};

struct ObservationTrace {
  std::vector<ObservationEvent> events;

  void SortByRound() {
    std::stable_sort(events.begin(), events.end(),
                     [](const auto& a, const auto& b) { return a.round < b.round; });
  }

  friend bool operator==(const ObservationTrace&, const ObservationTrace&) = default;
};

namespace internal {

inline bool Visible(const ObservationEvent& e, const AdversaryCapability& cap) {
  const bool at_user = e.location.kind == Location::Kind::kUser;
  const bool at_relay = e.location.kind == Location::Kind::kRelay;
  switch (e.kind) {
    case EventKind::kSend:
      return at_user && cap.ObservesSender(e.location.id);
    case EventKind::kForward:
      return (at_relay && cap.SeesRelay(e.location.id)) ||
             (at_user && cap.ObservesSender(e.location.id));
    case EventKind::kDeliver:
      return cap.receiver_corrupted;
    case EventKind::kDrop:
      return (at_relay && cap.CanDropAtRelay(e.location.id)) ||
             (at_user && cap.CanDropAtUser(e.location.id));
  }
  return false;
}

}  // namespace internal

// The adversary's view: only events at granted vantage points survive, and
// real/dummy status, payload and aux survive only at corrupted receivers.
// Applying the same filter twice yields the same trace.
inline ObservationTrace FilterTrace(const ObservationTrace& trace,
                                    const AdversaryCapability& cap) {
  ObservationTrace out;
  for (const ObservationEvent& e : trace.events) {
    if (!internal::Visible(e, cap)) continue;
    ObservationEvent v = e;
    if (e.kind != EventKind::kDeliver) {
      v.is_real.reset();
      v.message.reset();
      v.aux.reset();
    }
    out.events.push_back(std::move(v));
  }
  return out;
}

struct TrafficStats {
  std::vector<long> sends_per_user;  // L_i(r)
  long delivered_real = 0;           // Out(r)
  long total_sends = 0;              // Com(r)
};

// Counts events up to and including `up_to_round` (all rounds by default).
inline TrafficStats ComputeTrafficStats(const ObservationTrace& trace,
                                        const ProtocolParams& params,
                                        std::optional<int> up_to_round = std::nullopt) {
  TrafficStats stats;
  stats.sends_per_user.assign(static_cast<std::size_t>(params.n), 0);
  for (const ObservationEvent& e : trace.events) {
    if (up_to_round && e.round > *up_to_round) continue;
    if (e.kind == EventKind::kSend && e.location.kind == Location::Kind::kUser &&
        e.location.id >= 0 && e.location.id < params.n) {
      ++stats.sends_per_user[static_cast<std::size_t>(e.location.id)];
    } else if (e.kind == EventKind::kDeliver && e.is_real.value_or(false) &&
               !e.collision) {
      ++stats.delivered_real;
    }
  }
  for (long l : stats.sends_per_user) stats.total_sends += l;
  return stats;
}

}  // namespace acnb

#endif  // ACNB_MODEL_HPP_
