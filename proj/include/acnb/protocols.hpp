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

#ifndef ACNB_PROTOCOLS_HPP_
#define ACNB_PROTOCOLS_HPP_

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "acnb/error.hpp"
#include "acnb/model.hpp"
#include "acnb/notions.hpp"
#include "acnb/random.hpp"

namespace acnb {

enum class ProtocolVariant {
  kTrilemmaSync,
  kTrilemmaUnsync,
  kOnionPath,
  kThresholdMix,
  kDcNetRound,
  kBroadcastFullDummy,
  kDroppingModel,
};

inline constexpr std::pair<std::string_view, ProtocolVariant> kProtocolNames[] = {
    {"trilemma-sync", ProtocolVariant::kTrilemmaSync},
    {"trilemma-unsync", ProtocolVariant::kTrilemmaUnsync},
    {"onion-path", ProtocolVariant::kOnionPath},
    {"threshold-mix", ProtocolVariant::kThresholdMix},
    {"dcnet-round", ProtocolVariant::kDcNetRound},
    {"broadcast-full-dummy", ProtocolVariant::kBroadcastFullDummy},
    {"dropping-model", ProtocolVariant::kDroppingModel},
};

inline std::string_view ProtocolName(ProtocolVariant v) {
  for (const auto& [name, variant] : kProtocolNames) {
    if (variant == v) return name;
  }
  return "unknown";
}

inline ProtocolVariant ParseProtocol(std::string_view name) {
  for (const auto& [n, variant] : kProtocolNames) {
    if (n == name) return variant;
  }
  Fail(ErrorCode::kInvalidInput, "unknown protocol '" + std::string(name) + "'");
}

struct ProtocolKind {
  ProtocolVariant variant = ProtocolVariant::kTrilemmaUnsync;
  ProtocolParams params;
  // DC-net only: one slot per user per round, so real messages never collide.
  bool collision_free_schedule = true;
};

// Message id used for real sends that are not backed by a batch row (the
// unsynchronized model assumes a user always has something to send).
inline MessageId FillerMessage(UserId u) { return -(u + 1); }

namespace internal {

class TraceBuilder {
 public:
  PacketId Fresh() { return next_packet_++; }

  void Send(int round, UserId u, PacketId packet, std::optional<Location> next,
            bool is_real, std::optional<MessageId> message = std::nullopt,
            std::optional<AuxTag> aux = std::nullopt) {
    ObservationEvent e;
    e.kind = EventKind::kSend;
    e.round = round;
    e.location = Location::User(u);
    e.packet = packet;
    e.next_hop = next;
    e.is_real = is_real;
    e.message = message;
    e.aux = aux;
    trace_.events.push_back(e);
  }

  void Forward(int round, Location at, PacketId in, PacketId out,
               std::optional<Location> next, bool is_real) {
    ObservationEvent e;
    e.kind = EventKind::kForward;
    e.round = round;
    e.location = at;
    e.packet = out;
    e.source_packet = in;
    e.next_hop = next;
    e.is_real = is_real;
    trace_.events.push_back(e);
  }

  void Deliver(int round, Location at, PacketId packet, bool is_real,
               std::optional<MessageId> message, std::optional<AuxTag> aux,
               bool collision = false) {
    ObservationEvent e;
    e.kind = EventKind::kDeliver;
    e.round = round;
    e.location = at;
    e.packet = packet;
    e.is_real = is_real;
    e.message = message;
    e.aux = aux;
    e.collision = collision;
    trace_.events.push_back(e);
  }

  void Drop(int round, Location at, PacketId packet) {
    ObservationEvent e;
    e.kind = EventKind::kDrop;
    e.round = round;
    e.location = at;
    e.packet = packet;
    trace_.events.push_back(e);
  }

  ObservationTrace Finish() {
    trace_.SortByRound();
    return std::move(trace_);
  }

  ObservationTrace& trace() { return trace_; }
  const ObservationTrace& trace() const { return trace_; }

 private:
  ObservationTrace trace_;
  PacketId next_packet_ = 1;
};

// Indices of the non-empty rows in execution order.
inline std::vector<std::size_t> ExecutionOrder(const Batch& batch, Chooser& chooser) {
  std::vector<std::size_t> order;
  for (std::size_t i = 0; i < batch.size(); ++i) {
    if (batch[i]) order.push_back(i);
  }
  if (batch.mode() == OrderingMode::kRandomPermutation) chooser.Shuffle(order);
  return order;
}

// Uniform delay in {1, ..., l_max - 1}; zero when l_max = 1.
inline int TrilemmaDelay(int l_max, Chooser& chooser) {
  return l_max <= 1 ? 0 : 1 + chooser.UniformInt(l_max - 1);
}

inline void EmitRealDelivery(TraceBuilder& tb, int round, int delay, UserId sender,
                             const Communication& c) {
  const PacketId sent = tb.Fresh();
  if (delay == 0) {
    tb.Send(round, sender, sent, Location::User(c.receiver), true, c.message, c.aux);
    tb.Deliver(round, Location::User(c.receiver), sent, true, c.message, c.aux);
    return;
  }
  tb.Send(round, sender, sent, std::nullopt, true, c.message, c.aux);
  tb.Deliver(round + delay, Location::User(c.receiver), tb.Fresh(), true, c.message, c.aux);
}

inline ObservationTrace SimulateTrilemmaUnsync(const ProtocolParams& params,
                                               const Batch& batch, Chooser& chooser) {
  TraceBuilder tb;
  const int n = params.n;
  const std::vector<std::size_t> order = ExecutionOrder(batch, chooser);
  // The challenge row starts late enough that the adversary's window never
  // reaches before round 1.
  const int challenge_round = params.l_max;
  const int horizon = std::max(params.rounds, 2 * params.l_max - 1);
  std::optional<Communication> challenge = batch[0];

  std::map<UserId, std::vector<Communication>> queued;
  for (std::size_t i : order) {
    if (i == 0) continue;
    queued[batch[i]->sender].push_back(*batch[i]);
  }
  std::map<UserId, std::size_t> next_queued;

  const double probs[3] = {1.0 - params.p(), params.p_real, params.beta};
  for (int round = 1; round <= horizon; ++round) {
    for (UserId u = 0; u < n; ++u) {
      if (challenge && u == challenge->sender && round == challenge_round) {
        EmitRealDelivery(tb, round, TrilemmaDelay(params.l_max, chooser), u, *challenge);
        continue;
      }
      const int action = chooser.Categorical(probs);
      if (action == 0) continue;
      if (action == 2) {
        tb.Send(round, u, tb.Fresh(), std::nullopt, false);
        continue;
      }
      Communication c{u, (u + 1) % n, FillerMessage(u), 0};
      auto& q = queued[u];
      auto& pos = next_queued[u];
      if (pos < q.size()) c = q[pos++];
      EmitRealDelivery(tb, round, TrilemmaDelay(params.l_max, chooser), u, c);
    }
  }
  return tb.Finish();
}

inline ObservationTrace SimulateTrilemmaSync(const ProtocolParams& params,
                                             const Batch& batch, Chooser& chooser) {
  TraceBuilder tb;
  const int n = params.n;
  const std::vector<std::size_t> order = ExecutionOrder(batch, chooser);
  Require(!order.empty(), ErrorCode::kConfiguration, "sync model needs a real message");
  // Expected dummies per round equal beta * n, spread over the n - 1 users
  // that do not hold this round's real slot.
  const double dummy_prob = std::min(1.0, params.beta * n / (n - 1));
  for (std::size_t slot = 0; slot < order.size(); ++slot) {
    const int round = static_cast<int>(slot) + 1;
    const Communication& c = *batch[order[slot]];
    for (UserId u = 0; u < n; ++u) {
      if (u == c.sender) {
        EmitRealDelivery(tb, round, TrilemmaDelay(params.l_max, chooser), u, c);
      } else if (chooser.Bernoulli(dummy_prob)) {
        tb.Send(round, u, tb.Fresh(), std::nullopt, false);
      }
    }
  }
  return tb.Finish();
}

inline int OnionPathLength(const ProtocolParams& params, Chooser& chooser) {
  if (params.l_max == 1) return 0;
  const int lo = static_cast<int>(std::floor(params.l_exp));
  const double frac = params.l_exp - lo;
  return frac > 0.0 && chooser.Bernoulli(frac) ? lo + 1 : lo;
}

inline void EmitOnion(TraceBuilder& tb, const ProtocolParams& params, int round,
                      UserId sender, std::optional<Communication> real, Chooser& chooser) {
  const int hops = OnionPathLength(params, chooser);
  const std::vector<int> path = chooser.SampleWithoutReplacement(params.relays, hops);
  const bool is_real = real.has_value();
  std::optional<Location> destination;
  if (real) destination = Location::User(real->receiver);

  PacketId packet = tb.Fresh();
  auto hop_target = [&](std::size_t i) -> std::optional<Location> {
    return i < path.size() ? std::optional<Location>(Location::Relay(path[i])) : destination;
  };
  tb.Send(round, sender, packet, hop_target(0), is_real,
          real ? std::optional<MessageId>(real->message) : std::nullopt,
          real ? std::optional<AuxTag>(real->aux) : std::nullopt);
  for (std::size_t i = 0; i < path.size(); ++i) {
    const PacketId out = tb.Fresh();
    tb.Forward(round + static_cast<int>(i) + 1, Location::Relay(path[i]), packet, out,
               hop_target(i + 1), is_real);
    packet = out;
  }
  if (real) {
    tb.Deliver(round + hops, Location::User(real->receiver), packet, true, real->message,
               real->aux);
  }
}

inline ObservationTrace SimulateOnionPath(const ProtocolParams& params, const Batch& batch,
                                          Chooser& chooser) {
  Require(params.l_max == 1 || (params.l_exp >= 1.0 && params.l_exp <= params.l_max - 1),
          ErrorCode::kConfiguration, "onion-path needs 1 <= l_exp <= l_max - 1");
  Require(params.relays >= static_cast<int>(std::ceil(params.l_exp)),
          ErrorCode::kConfiguration, "not enough relays for the path length");
  TraceBuilder tb;
  const std::vector<std::size_t> order = ExecutionOrder(batch, chooser);
  const bool simultaneous = batch.mode() == OrderingMode::kSimultaneous;
  for (std::size_t slot = 0; slot < order.size(); ++slot) {
    const Communication& c = *batch[order[slot]];
    EmitOnion(tb, params, simultaneous ? 1 : static_cast<int>(slot) + 1, c.sender, c, chooser);
  }
  if (params.beta > 0.0) {
    const int horizon = std::max(params.rounds, static_cast<int>(order.size()));
    for (int round = 1; round <= horizon; ++round) {
      for (UserId u = 0; u < params.n; ++u) {
        if (chooser.Bernoulli(params.beta)) EmitOnion(tb, params, round, u, std::nullopt, chooser);
      }
    }
  }
  return tb.Finish();
}

inline ObservationTrace SimulateThresholdMix(const ProtocolParams& params,
                                             const Batch& batch, Chooser& chooser) {
  Require(params.threshold >= 1, ErrorCode::kConfiguration, "threshold must be positive");
  const std::vector<std::size_t> order = ExecutionOrder(batch, chooser);
  Require(static_cast<int>(order.size()) >= params.threshold, ErrorCode::kConfiguration,
          "threshold exceeds the number of messages; the mix never flushes");
  TraceBuilder tb;
  std::vector<std::pair<PacketId, Communication>> pool;
  for (std::size_t slot = 0; slot < order.size(); ++slot) {
    const int round = static_cast<int>(slot) + 1;
    const Communication& c = *batch[order[slot]];
    const PacketId packet = tb.Fresh();
    tb.Send(round, c.sender, packet, Location::Relay(0), true, c.message, c.aux);
    pool.emplace_back(packet, c);
    if (static_cast<int>(pool.size()) == params.threshold) {
      chooser.Shuffle(pool);
      for (const auto& [in, msg] : pool) {
        const PacketId out = tb.Fresh();
        tb.Forward(round + 1, Location::Relay(0), in, out, Location::User(msg.receiver), true);
        tb.Deliver(round + 1, Location::User(msg.receiver), out, true, msg.message, msg.aux);
      }
      pool.clear();
    }
  }
  return tb.Finish();
}

inline ObservationTrace SimulateDcNet(const ProtocolParams& params, const Batch& batch,
                                      bool collision_free, Chooser& chooser) {
  const std::vector<std::size_t> order = ExecutionOrder(batch, chooser);
  const int horizon = std::max(params.rounds, static_cast<int>(order.size()));
  std::vector<std::vector<Communication>> slots(static_cast<std::size_t>(horizon) + 1);
  for (std::size_t k = 0; k < order.size(); ++k) {
    const int round = collision_free ? static_cast<int>(k) + 1 : 1 + chooser.UniformInt(horizon);
    slots[static_cast<std::size_t>(round)].push_back(*batch[order[k]]);
  }
  TraceBuilder tb;
  for (int round = 1; round <= horizon; ++round) {
    const auto& real = slots[static_cast<std::size_t>(round)];
    for (UserId u = 0; u < params.n; ++u) {
      const bool owns = std::any_of(real.begin(), real.end(),
                                    [u](const Communication& c) { return c.sender == u; });
      tb.Send(round, u, tb.Fresh(), Location::Broadcast(), owns);
    }
    // Exactly one superposed output per round.
    if (real.empty()) {
      tb.Deliver(round, Location::Broadcast(), tb.Fresh(), false, std::nullopt, std::nullopt);
    } else if (real.size() == 1) {
      tb.Deliver(round, Location::Broadcast(), tb.Fresh(), true, real[0].message, real[0].aux);
    } else {
      tb.Deliver(round, Location::Broadcast(), tb.Fresh(), true, std::nullopt, std::nullopt,
                 /*collision=*/true);
    }
  }
  return tb.Finish();
}

inline ObservationTrace SimulateBroadcast(const ProtocolParams& params, const Batch& batch,
                                          Chooser& chooser) {
  const std::vector<std::size_t> order = ExecutionOrder(batch, chooser);
  const int horizon = std::max(params.rounds, static_cast<int>(order.size()));
  TraceBuilder tb;
  for (int round = 1; round <= horizon; ++round) {
    const std::size_t slot = static_cast<std::size_t>(round) - 1;
    std::optional<Communication> real;
    if (slot < order.size()) real = batch[order[slot]];
    for (UserId u = 0; u < params.n; ++u) {
      const bool is_real = real && real->sender == u;
      tb.Send(round, u, tb.Fresh(), Location::Broadcast(), is_real,
              is_real ? std::optional<MessageId>(real->message) : std::nullopt);
    }
    if (real) {
      tb.Deliver(round, Location::User(real->receiver), tb.Fresh(), true, real->message,
                 real->aux);
    }
  }
  return tb.Finish();
}

}  // namespace internal

// A transmission that will happen this round unless the adversary drops it.
struct PendingTransmission {
  PacketId packet = 0;
  Location at;
  std::optional<Location> previous;
  Location next;
};

struct DropAction {
  PacketId packet = 0;
  Location at;

  friend auto operator<=>(const DropAction&, const DropAction&) = default;
};

// Round-by-round execution of the dropping model, so an active adversary can
// remove packets while the protocol runs. Every batch row is sent as `copies`
// onions over distinct first hops; each onion crosses l_max - 1 nodes and is
// delivered l_max - 1 rounds after it was sent. In the integrated model the
// relay pool also contains the other users.
class DroppingRun {
 public:
  DroppingRun(const ProtocolParams& params, const Batch& batch,
              const AdversaryCapability& capability, Chooser& chooser)
      : capability_(capability) {
    Require(params.copies >= 1, ErrorCode::kConfiguration, "dropping model needs copies >= 1");
    Require(params.l_max >= 2, ErrorCode::kConfiguration, "dropping model needs l_max >= 2");
    const int hops = params.l_max - 1;
    for (std::size_t i : internal::ExecutionOrder(batch, chooser)) {
      const Communication& c = *batch[i];
      std::vector<Location> pool;
      for (int r = 0; r < params.relays; ++r) pool.push_back(Location::Relay(r));
      if (params.integrated) {
        for (UserId v = 0; v < params.n; ++v) {
          if (v != c.sender) pool.push_back(Location::User(v));
        }
      }
      Require(static_cast<int>(pool.size()) >= params.copies, ErrorCode::kConfiguration,
              "more copies than available first hops");
      const int pool_size = static_cast<int>(pool.size());
      for (int first : chooser.SampleWithoutReplacement(pool_size, params.copies)) {
        Onion onion;
        onion.comm = c;
        onion.path.push_back(Location::User(c.sender));
        onion.path.push_back(pool[static_cast<std::size_t>(first)]);
        for (int h = 1; h < hops; ++h) {
          int next = chooser.UniformInt(pool_size - 1);
          const auto cur = std::find(pool.begin(), pool.end(), onion.path.back()) - pool.begin();
          if (next >= cur) ++next;
          onion.path.push_back(pool[static_cast<std::size_t>(next)]);
        }
        onion.path.push_back(Location::User(c.receiver));
        onion.packet = builder_.Fresh();
        onions_.push_back(std::move(onion));
      }
    }
  }

  bool done() const {
    return std::all_of(onions_.begin(), onions_.end(), [](const Onion& o) {
      return o.dropped || o.position + 1 >= o.path.size();
    });
  }

  int round() const { return round_; }

  // Transmissions of the coming round at nodes or links the adversary controls.
  std::vector<PendingTransmission> VisiblePending() const {
    std::vector<PendingTransmission> out;
    for (const Onion& o : onions_) {
      if (o.dropped || o.position + 1 >= o.path.size()) continue;
      const Location& at = o.path[o.position];
      if (!Controlled(at)) continue;
      PendingTransmission p{o.packet, at, std::nullopt, o.path[o.position + 1]};
      if (o.position > 0) p.previous = o.path[o.position - 1];
      out.push_back(p);
    }
    return out;
  }

  // Advances one round. Returns the adversary's observations of that round.
  std::vector<ObservationEvent> Step(const std::set<DropAction>& drops) {
    for (const DropAction& d : drops) {
      Require(Controlled(d.at), ErrorCode::kCapabilityViolation,
              "drop at a location outside adversarial control");
    }
    ++round_;
    const std::size_t first_event = builder_.trace().events.size();
    for (Onion& o : onions_) {
      if (o.dropped || o.position + 1 >= o.path.size()) continue;
      const Location at = o.path[o.position];
      if (drops.count(DropAction{o.packet, at}) > 0) {
        builder_.Drop(round_, at, o.packet);
        o.dropped = true;
        continue;
      }
      const Location next = o.path[o.position + 1];
      const bool last = o.position + 2 == o.path.size();
      if (o.position == 0) {
        builder_.Send(round_, o.comm.sender, o.packet, next, true, o.comm.message, o.comm.aux);
      } else {
        const PacketId out = builder_.Fresh();
        builder_.Forward(round_, at, o.packet, out, next, true);
        o.packet = out;
      }
      ++o.position;
      if (last) {
        builder_.Deliver(round_, next, o.packet, true, o.comm.message, o.comm.aux);
      }
    }
    ObservationTrace round_events;
    const auto& all = builder_.trace().events;
    round_events.events.assign(all.begin() + static_cast<std::ptrdiff_t>(first_event), all.end());
    return FilterTrace(round_events, capability_).events;
  }

  // Omniscient trace of everything executed so far.
  ObservationTrace Trace() const {
    ObservationTrace t = builder_.trace();
    t.SortByRound();
    return t;
  }

 private:
  struct Onion {
    Communication comm;
    std::vector<Location> path;
    std::size_t position = 0;
    PacketId packet = 0;
    bool dropped = false;
  };

  bool Controlled(const Location& at) const {
    if (at.kind == Location::Kind::kUser) return capability_.CanDropAtUser(at.id);
    if (at.kind == Location::Kind::kRelay) return capability_.CanDropAtRelay(at.id);
    return false;
  }

  AdversaryCapability capability_;
  internal::TraceBuilder builder_;
  std::vector<Onion> onions_;
  int round_ = 0;
};

// Runs the protocol on `batch` and returns the omniscient trace; every random
// decision is taken from `chooser`.
inline ObservationTrace RunProtocol(const ProtocolKind& kind, const Batch& batch,
                                    Chooser& chooser) {
  const ProtocolParams& params = kind.params;
  params.Validate();
  switch (kind.variant) {
    case ProtocolVariant::kTrilemmaSync:
      return internal::SimulateTrilemmaSync(params, batch, chooser);
    case ProtocolVariant::kTrilemmaUnsync:
      return internal::SimulateTrilemmaUnsync(params, batch, chooser);
    case ProtocolVariant::kOnionPath:
      return internal::SimulateOnionPath(params, batch, chooser);
    case ProtocolVariant::kThresholdMix:
      return internal::SimulateThresholdMix(params, batch, chooser);
    case ProtocolVariant::kDcNetRound:
      return internal::SimulateDcNet(params, batch, kind.collision_free_schedule, chooser);
    case ProtocolVariant::kBroadcastFullDummy:
      return internal::SimulateBroadcast(params, batch, chooser);
    case ProtocolVariant::kDroppingModel: {
      DroppingRun run(params, batch, AdversaryCapability{}, chooser);
      while (!run.done()) run.Step({});
      return run.Trace();
    }
  }
  Fail(ErrorCode::kConfiguration, "unhandled protocol variant");
}

// Executes scenario b of `pair` and returns the adversary's filtered view.
inline ObservationTrace RunProtocol(const ProtocolKind& kind, const ScenarioPair& pair,
                                    int b, const AdversaryCapability& capability,
                                    std::uint64_t seed) {
  capability.Validate(kind.params.relays);
  SampledChooser chooser(seed);
  return FilterTrace(RunProtocol(kind, pair.batch(b), chooser), capability);
}

}  // namespace acnb

#endif  // ACNB_PROTOCOLS_HPP_
