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

#ifndef ACNB_NOTIONS_HPP_
#define ACNB_NOTIONS_HPP_

#include <algorithm>
#include <cstdint>
#include <map>
#include <numeric>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "acnb/error.hpp"
#include "acnb/model.hpp"
#include "acnb/random.hpp"

namespace acnb {

enum class NotionKind {
  kCommunicationUnobservability,  // CO
  kReceiverUnobservability,       // RO
  kSenderUnobservability,         // SO
  kSenderUnobservabilityBounded,  // SO_{n_max}
  kSenderMessageExtended,         // SML
  kSenderMessagePair,             // (SM)L
  kSenderReceiverPair,            // (SR)L
  kMessageUnobservability,        // MO[ML]
};

// Whether the "exactly once" restriction applies to senders, receivers or both.
enum class NotionSide { kSender, kReceiver, kImpartial };

namespace internal {

inline int ParseUserId(const std::string& text) {
  Require(!text.empty() && text.size() <= 9 &&
              std::all_of(text.begin(), text.end(), [](char c) { return c >= '0' && c <= '9'; }),
          ErrorCode::kInvalidInput, "bad user id '" + text + "'");
  return std::stoi(text);
}

}  // namespace internal

struct Notion {
  NotionKind kind = NotionKind::kSenderUnobservability;
  int n_max = 0;
  bool single = false;                          // X_1
  std::optional<std::set<UserId>> corrupted;    // c^e

  NotionSide side() const {
    switch (kind) {
      case NotionKind::kReceiverUnobservability:
        return NotionSide::kReceiver;
      case NotionKind::kCommunicationUnobservability:
      case NotionKind::kSenderReceiverPair:
      case NotionKind::kMessageUnobservability:
        return NotionSide::kImpartial;
      default:
        return NotionSide::kSender;
    }
  }

  // Canonical string, e.g. "SO", "SO_nmax:2", "(SM)L_1", "(SR)L_1_ce:3,4".
  std::string Name() const {
    std::string s;
    switch (kind) {
      case NotionKind::kCommunicationUnobservability: s = "CO"; break;
      case NotionKind::kReceiverUnobservability: s = "RO"; break;
      case NotionKind::kSenderUnobservability: s = "SO"; break;
      case NotionKind::kSenderUnobservabilityBounded:
        s = "SO_nmax:" + std::to_string(n_max);
        break;
      case NotionKind::kSenderMessageExtended: s = "SML"; break;
      case NotionKind::kSenderMessagePair: s = "(SM)L"; break;
      case NotionKind::kSenderReceiverPair: s = "(SR)L"; break;
      case NotionKind::kMessageUnobservability: s = "MO[ML]"; break;
    }
    if (single) s += "_1";
    if (corrupted) {
      s += "_ce";
      if (!corrupted->empty()) {
        s += ':';
        bool first = true;
        for (UserId u : *corrupted) {
          if (!first) s += ',';
          s += std::to_string(u);
          first = false;
        }
      }
    }
    return s;
  }

  static Notion Parse(std::string_view text) {
    static const std::pair<std::string_view, NotionKind> kBases[] = {
        {"SO_nmax:", NotionKind::kSenderUnobservabilityBounded},
        {"(SM)L", NotionKind::kSenderMessagePair},
        {"(SR)L", NotionKind::kSenderReceiverPair},
        {"MO[ML]", NotionKind::kMessageUnobservability},
        {"SML", NotionKind::kSenderMessageExtended},
        {"CO", NotionKind::kCommunicationUnobservability},
        {"RO", NotionKind::kReceiverUnobservability},
        {"SO", NotionKind::kSenderUnobservability},
    };
    Notion notion;
    std::string_view rest;
    bool matched = false;
    for (const auto& [prefix, kind] : kBases) {
      if (text.substr(0, prefix.size()) == prefix) {
        notion.kind = kind;
        rest = text.substr(prefix.size());
        matched = true;
        break;
      }
    }
    Require(matched, ErrorCode::kInvalidInput, "unknown notion '" + std::string(text) + "'");
    if (notion.kind == NotionKind::kSenderUnobservabilityBounded) {
      std::size_t digits = 0;
      while (digits < rest.size() && rest[digits] >= '0' && rest[digits] <= '9') ++digits;
      Require(digits > 0, ErrorCode::kInvalidInput, "SO_nmax needs a bound");
      notion.n_max = internal::ParseUserId(std::string(rest.substr(0, digits)));
      rest = rest.substr(digits);
    }
    if (rest.substr(0, 2) == "_1") {
      notion.single = true;
      rest = rest.substr(2);
    }
    if (rest.substr(0, 3) == "_ce") {
      notion.corrupted.emplace();
      rest = rest.substr(3);
      if (!rest.empty() && rest.front() == ':') {
        const std::string list(rest.substr(1));
        Require(!list.empty() && list.back() != ',', ErrorCode::kInvalidInput,
                "empty corrupted user list");
        std::stringstream ss{list};
        std::string item;
        while (std::getline(ss, item, ',')) {
          notion.corrupted->insert(internal::ParseUserId(item));
        }
        rest = {};
      }
    }
    Require(rest.empty(), ErrorCode::kInvalidInput,
            "trailing characters in notion '" + std::string(text) + "'");
    notion.Validate();
    return notion;
  }

  void Validate() const {
    Require(kind != NotionKind::kSenderUnobservabilityBounded || n_max >= 1,
            ErrorCode::kInvalidInput, "n_max must be at least 1");
  }
};

struct ScenarioPair {
  Batch batch0;
  Batch batch1;
  Notion notion;

  const Batch& batch(int b) const { return b == 0 ? batch0 : batch1; }
};

namespace internal {

using CountMap = std::map<UserId, int>;

inline CountMap SenderCounts(const Batch& b) {
  CountMap q;
  for (const Row& r : b.rows()) {
    if (r) ++q[r->sender];
  }
  return q;
}

inline CountMap ReceiverCounts(const Batch& b) {
  CountMap q;
  for (const Row& r : b.rows()) {
    if (r) ++q[r->receiver];
  }
  return q;
}

inline bool AllOnce(const CountMap& q) {
  return std::all_of(q.begin(), q.end(), [](const auto& kv) { return kv.second == 1; });
}

inline bool HasEmptyRow(const Batch& b) {
  return std::any_of(b.rows().begin(), b.rows().end(), [](const Row& r) { return !r; });
}

inline bool TouchesCorrupted(const Row& r, const std::set<UserId>& corrupted) {
  return r && (corrupted.count(r->sender) > 0 || corrupted.count(r->receiver) > 0);
}

// Per-index pattern: may row r1 stand at the position of r0?
inline bool IndexCompatible(const Notion& notion, const Row& r0, const Row& r1) {
  if (notion.corrupted &&
      (TouchesCorrupted(r0, *notion.corrupted) || TouchesCorrupted(r1, *notion.corrupted))) {
    if (!r0 || !r1 || r0->message != r1->message) return false;
  }
  if (notion.kind == NotionKind::kCommunicationUnobservability ||
      notion.kind == NotionKind::kMessageUnobservability) {
    return true;
  }
  if (!r0 || !r1) return !r0 && !r1;
  const Communication& a = *r0;
  const Communication& b = *r1;
  switch (notion.kind) {
    case NotionKind::kReceiverUnobservability:
      return a.sender == b.sender && a.message == b.message && a.aux == b.aux;
    default:
      // Sender notions and the pair notions keep receiver, message and aux per
      // index; senders are free here and the pair notions restrict them below.
      return a.receiver == b.receiver && a.message == b.message && a.aux == b.aux;
  }
}

inline bool IsPairNotion(NotionKind kind) {
  return kind == NotionKind::kSenderMessagePair || kind == NotionKind::kSenderReceiverPair;
}

// Leaf condition of the pair notions: exactly two rows differ and they are the
// same two communications with their senders exchanged.
inline bool IsSingleSwap(NotionKind kind, const std::vector<Row>& r0,
                         const std::vector<Row>& r1) {
  std::vector<std::size_t> diff;
  for (std::size_t j = 0; j < r0.size(); ++j) {
    if (r0[j] != r1[j]) diff.push_back(j);
  }
  if (diff.size() != 2) return false;
  const Row& a0 = r0[diff[0]];
  const Row& b0 = r0[diff[1]];
  const Row& a1 = r1[diff[0]];
  const Row& b1 = r1[diff[1]];
  if (!a0 || !b0 || !a1 || !b1) return false;
  if (a0->sender == b0->sender) return false;
  if (a1->sender != b0->sender || b1->sender != a0->sender) return false;
  if (kind == NotionKind::kSenderMessagePair) return a0->receiver == b0->receiver;
  return a0->message == b0->message;
}

class Reindexer {
 public:
  Reindexer(const Notion& notion, const std::vector<Row>& r0, const std::vector<Row>& r1)
      : notion_(notion), r0_(r0), r1_(r1), used_(r1.size(), false) {
    assigned_.reserve(r1.size());
  }

  bool Search() { return Assign(0); }

 private:
  static constexpr std::uint64_t kNodeBudget = 1ULL << 24;

  bool Assign(std::size_t j) {
    Require(++nodes_ <= kNodeBudget, ErrorCode::kResourceLimit,
            "batch reindexing search too large");
    if (j == r0_.size()) {
      if (!IsPairNotion(notion_.kind)) return true;
      return IsSingleSwap(notion_.kind, r0_, assigned_);
    }
    // Identity first, so already-aligned batches are accepted immediately.
    if (TryCandidate(j, j)) return true;
    for (std::size_t k = 0; k < r1_.size(); ++k) {
      if (k != j && TryCandidate(j, k)) return true;
    }
    return false;
  }

  bool TryCandidate(std::size_t j, std::size_t k) {
    if (used_[k] || !IndexCompatible(notion_, r0_[j], r1_[k])) return false;
    if (IsPairNotion(notion_.kind)) {
      int differing = r0_[j] != r1_[k] ? 1 : 0;
      for (std::size_t i = 0; i < j; ++i) differing += r0_[i] != assigned_[i] ? 1 : 0;
      if (differing > 2) return false;
    }
    used_[k] = true;
    assigned_.push_back(r1_[k]);
    const bool ok = Assign(j + 1);
    assigned_.pop_back();
    used_[k] = false;
    return ok;
  }

  const Notion& notion_;
  const std::vector<Row>& r0_;
  const std::vector<Row>& r1_;
  std::vector<bool> used_;
  std::vector<Row> assigned_;
  std::uint64_t nodes_ = 0;
};

}  // namespace internal

// True iff (b0, b1) is an admissible challenge under `notion`. batch1 may be
// reordered before matching the per-index pattern, since batch rows start in
// an order the adversary cannot predict.
inline bool IsValidPair(const Notion& notion, const Batch& b0, const Batch& b1) {
  using internal::AllOnce;
  const NotionKind kind = notion.kind;
  std::vector<Row> r0 = b0.rows();
  std::vector<Row> r1 = b1.rows();

  if (r0.size() != r1.size()) {
    if (kind != NotionKind::kCommunicationUnobservability) return false;
    const std::size_t len = std::max(r0.size(), r1.size());
    r0.resize(len);
    r1.resize(len);
  }

  if (notion.single) {
    for (const Batch* b : {&b0, &b1}) {
      if (notion.side() != NotionSide::kReceiver && !AllOnce(internal::SenderCounts(*b)))
        return false;
      if (notion.side() != NotionSide::kSender && !AllOnce(internal::ReceiverCounts(*b)))
        return false;
    }
  }

  switch (kind) {
    case NotionKind::kSenderUnobservabilityBounded:
      for (const Batch* b : {&b0, &b1}) {
        for (const auto& [u, count] : internal::SenderCounts(*b)) {
          if (count > notion.n_max) return false;
        }
      }
      break;
    case NotionKind::kSenderMessageExtended:
      if (internal::SenderCounts(b0) != internal::SenderCounts(b1)) return false;
      break;
    case NotionKind::kMessageUnobservability:
      if (internal::HasEmptyRow(b0) || internal::HasEmptyRow(b1)) return false;
      if (internal::SenderCounts(b0) != internal::SenderCounts(b1)) return false;
      if (internal::ReceiverCounts(b0) != internal::ReceiverCounts(b1)) return false;
      break;
    case NotionKind::kCommunicationUnobservability:
      if (!notion.corrupted) return true;
      break;
    default:
      break;
  }
  return internal::Reindexer(notion, r0, r1).Search();
}

// Number of indices at which the two batches differ (no reindexing).
inline int CountChallengeRows(const Batch& b0, const Batch& b1) {
  Require(b0.size() == b1.size(), ErrorCode::kInvalidInput,
          "challenge rows need equal-length batches");
  int count = 0;
  for (std::size_t j = 0; j < b0.size(); ++j) count += b0[j] != b1[j] ? 1 : 0;
  return count;
}

struct NotionUniverse {
  int users = 2;
  int messages = 2;
  int max_batch_len = 2;
};

namespace internal {

inline std::vector<Batch> EnumerateBatches(const NotionUniverse& u) {
  std::vector<Row> rows{std::nullopt};
  for (int s = 0; s < u.users; ++s)
    for (int r = 0; r < u.users; ++r)
      for (int m = 0; m < u.messages; ++m) rows.push_back(Communication{s, r, m, 0});

  std::vector<Batch> out;
  for (int len = 1; len <= u.max_batch_len; ++len) {
    std::vector<std::size_t> idx(static_cast<std::size_t>(len), 0);
    while (true) {
      std::vector<Row> b;
      for (std::size_t i : idx) b.push_back(rows[i]);
      out.push_back(Batch::Make(std::move(b), OrderingMode::kRandomPermutation));
      std::size_t pos = 0;
      while (pos < idx.size() && ++idx[pos] == rows.size()) idx[pos++] = 0;
      if (pos == idx.size()) break;
    }
  }
  return out;
}

}  // namespace internal

inline constexpr std::uint64_t kMaxEnumeratedPairs = 20'000'000;

// Enumerates every batch pair over a small universe and reports whether each
// pair valid under `weaker` is also valid under `stronger`.
inline bool IsValidSubset(const Notion& weaker, const Notion& stronger,
                          const NotionUniverse& universe) {
  Require(universe.users >= 1 && universe.messages >= 1 && universe.max_batch_len >= 1,
          ErrorCode::kInvalidInput, "empty universe");
  const double rows = 1.0 + double(universe.users) * universe.users * universe.messages;
  double batches = 0.0;
  double power = 1.0;
  for (int len = 1; len <= universe.max_batch_len; ++len) batches += (power *= rows);
  Require(batches * batches <= double(kMaxEnumeratedPairs), ErrorCode::kResourceLimit,
          "universe too large to enumerate");
  const std::vector<Batch> all = internal::EnumerateBatches(universe);
  for (const Batch& b0 : all) {
    for (const Batch& b1 : all) {
      if (IsValidPair(weaker, b0, b1) && !IsValidPair(stronger, b0, b1)) return false;
    }
  }
  return true;
}

// Draws a challenge pair that satisfies `notion` over users 0..n-1. Row 0 of
// each batch carries the challenge communication; for the pair notions rows 0
// and 1 are the swapped communications. Deterministic in `seed`.
inline ScenarioPair GeneratePair(const Notion& notion, const ProtocolParams& params,
                                 std::uint64_t seed) {
  params.Validate();
  notion.Validate();
  const int n = params.n;
  SampledChooser rng(seed);
  const bool unique_receivers =
      notion.single && notion.side() != NotionSide::kSender;

  std::vector<int> senders(static_cast<std::size_t>(n));
  std::iota(senders.begin(), senders.end(), 0);
  rng.Shuffle(senders);

  auto draw_receivers = [&]() {
    std::vector<int> receivers(static_cast<std::size_t>(n));
    if (unique_receivers) {
      std::iota(receivers.begin(), receivers.end(), 0);
      rng.Shuffle(receivers);
    } else {
      for (int& r : receivers) r = rng.UniformInt(n);
    }
    return receivers;
  };

  std::vector<Communication> c0(static_cast<std::size_t>(n));
  const std::vector<int> receivers = draw_receivers();
  for (int i = 0; i < n; ++i) {
    c0[static_cast<std::size_t>(i)] = {senders[static_cast<std::size_t>(i)],
                                       receivers[static_cast<std::size_t>(i)], i + 1, 0};
  }
  if (notion.kind == NotionKind::kSenderMessagePair) c0[1].receiver = c0[0].receiver;
  if (notion.kind == NotionKind::kSenderReceiverPair) c0[1].message = c0[0].message;

  std::vector<Communication> c1 = c0;
  auto shuffle_senders = [&]() {
    std::vector<int> s;
    for (const auto& c : c1) s.push_back(c.sender);
    rng.Shuffle(s);
    for (std::size_t i = 0; i < c1.size(); ++i) c1[i].sender = s[i];
  };

  switch (notion.kind) {
    case NotionKind::kCommunicationUnobservability: {
      std::vector<int> s(static_cast<std::size_t>(n));
      std::iota(s.begin(), s.end(), 0);
      rng.Shuffle(s);
      const std::vector<int> r = draw_receivers();
      for (std::size_t i = 0; i < c1.size(); ++i) {
        c1[i] = {s[i], r[i], 1 + rng.UniformInt(n), 0};
      }
      if (notion.corrupted) {
        for (std::size_t i = 0; i < c1.size(); ++i) {
          if (internal::TouchesCorrupted(c0[i], *notion.corrupted) ||
              internal::TouchesCorrupted(c1[i], *notion.corrupted)) {
            c1[i].message = c0[i].message;
          }
        }
      }
      break;
    }
    case NotionKind::kReceiverUnobservability:
      if (unique_receivers) {
        std::vector<int> r;
        for (const auto& c : c1) r.push_back(c.receiver);
        rng.Shuffle(r);
        for (std::size_t i = 0; i < c1.size(); ++i) c1[i].receiver = r[i];
      } else {
        for (auto& c : c1) c.receiver = rng.UniformInt(n);
      }
      break;
    case NotionKind::kSenderUnobservability:
      if (notion.single) {
        shuffle_senders();
      } else {
        for (auto& c : c1) c.sender = rng.UniformInt(n);
      }
      break;
    case NotionKind::kSenderUnobservabilityBounded: {
      std::map<int, int> used;
      for (auto& c : c1) {
        int u;
        do {
          u = rng.UniformInt(n);
        } while (used[u] >= (notion.single ? 1 : notion.n_max));
        ++used[u];
        c.sender = u;
      }
      break;
    }
    case NotionKind::kSenderMessageExtended:
    case NotionKind::kMessageUnobservability:
      shuffle_senders();
      break;
    case NotionKind::kSenderMessagePair:
    case NotionKind::kSenderReceiverPair:
      std::swap(c1[0].sender, c1[1].sender);
      break;
  }

  ScenarioPair pair{MakeBatch(c0, OrderingMode::kRandomPermutation),
                    MakeBatch(c1, OrderingMode::kRandomPermutation), notion};
  Require(IsValidPair(notion, pair.batch0, pair.batch1), ErrorCode::kInvalidInput,
          "notion " + notion.Name() + " is not satisfiable with these parameters");
  return pair;
}

}  // namespace acnb

#endif  // ACNB_NOTIONS_HPP_
