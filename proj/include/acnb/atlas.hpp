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

#ifndef ACNB_ATLAS_HPP_
#define ACNB_ATLAS_HPP_

#include <cmath>
#include <cstdio>
#include <optional>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

#include "acnb/bounds.hpp"
#include "acnb/error.hpp"
#include "acnb/model.hpp"

namespace acnb {

// A per-round rate that is either a constant or proportional to n.
struct Rate {
  double value = 0.0;
  bool per_n = false;

  double At(int n) const { return per_n ? value * n : value; }
};

struct AcnPreset {
  std::string name;
  std::string source;  // where the numbers come from
  ProtocolParams params;
  // General-case sending behavior; absent for systems with no such row.
  std::optional<Rate> dummy_per_user_round;
  std::optional<Rate> communications_per_round;
  bool superposed = false;             // neither mixing-model bound applies
  // Needs several real messages in the same round, so the single-sender
  // Trilemma model does not describe the general case.
  bool parallel_communications = false;
};

enum class AtlasMode { kFigure3, kGeneral };

inline std::string_view AtlasModeName(AtlasMode m) {
  return m == AtlasMode::kFigure3 ? "figure3" : "general";
}

inline AtlasMode ParseAtlasMode(std::string_view name) {
  if (name == "figure3") return AtlasMode::kFigure3;
  if (name == "general") return AtlasMode::kGeneral;
  Fail(ErrorCode::kInvalidInput, "unknown atlas mode '" + std::string(name) + "'");
}

inline const std::vector<std::string>& PresetNames() {
  static const std::vector<std::string> names = {
      "tor",  "hornet", "threshold-mix", "herd",   "dcnet",    "dissent",
      "dicemix", "loopix", "riposte",    "riffle", "vuvuzela"};
  return names;
}

// Parameter point for a named system. `n` users, security parameter `lambda`.
inline AcnPreset Preset(std::string_view name, int n = 1000, double lambda = 256.0) {
  Require(n >= 2 && lambda > 1.0, ErrorCode::kInvalidInput, "need n >= 2 and lambda > 1");
  AcnPreset a;
  a.name = std::string(name);
  ProtocolParams& q = a.params;
  q.n = n;
  const double inv_n = 1.0 / n;
  const int mix_chain = static_cast<int>(std::lround(std::log2(lambda)));
  auto one_real_per_round = [&] {
    q.p_real = inv_n;
    q.beta = 1.0 - inv_n;
  };
  if (name == "tor" || name == "hornet") {
    a.source = "onion routing, fixed three-relay paths, no dummy traffic";
    q.l_max = 4;
    q.l_exp = 3;
    q.relays = 3;
    q.p_real = inv_n;
  } else if (name == "threshold-mix") {
    a.source = "threshold mix, no dummy traffic";
    q.l_max = 3;
    q.l_exp = 2;
    q.relays = 2;
    q.threshold = n;
    q.p_real = inv_n;
  } else if (name == "herd") {
    a.source = "onion routing with constant-rate dummy traffic (VoIP)";
    q.l_max = 3;
    q.l_exp = 2;
    q.relays = 2;
    one_real_per_round();
    a.dummy_per_user_round = Rate{1.0, false};
    a.communications_per_round = Rate{1.0, true};
  } else if (name == "dcnet" || name == "dissent") {
    a.source = "superposed sending, one slot per round";
    q.l_max = 1;
    q.l_exp = 1;
    q.relays = 0;
    one_real_per_round();
    a.dummy_per_user_round = Rate{1.0, false};
    a.communications_per_round = Rate{1.0, false};
    a.superposed = true;
  } else if (name == "dicemix") {
    a.source = "superposed sending, one message of each user per round";
    q.l_max = 1;
    q.l_exp = 1;
    q.relays = 0;
    one_real_per_round();
    a.dummy_per_user_round = Rate{1.0, true};
    a.communications_per_round = Rate{1.0, true};
    a.superposed = true;
  } else if (name == "loopix") {
    a.source = "sqrt(lambda) mixes per path, dummy probability 1/lambda";
    const int mixes = static_cast<int>(std::lround(std::sqrt(lambda)));
    q.l_max = mixes + 1;
    q.l_exp = mixes;
    q.relays = mixes;
    q.beta = 1.0 / lambda;
  } else if (name == "riposte") {
    a.source = "reverse-PIR broadcast, every client writes each epoch";
    q.l_max = 2;
    q.l_exp = 1;
    q.relays = 0;
    q.p_real = 1.0;
    a.dummy_per_user_round = Rate{0.0, false};
    a.communications_per_round = Rate{1.0, true};
    a.parallel_communications = true;
  } else if (name == "riffle" || name == "vuvuzela") {
    a.source = name == "riffle" ? "verifiable shuffle through log2(lambda) mixes, all clients send"
                                : "mix chain of log2(lambda) servers with cover traffic";
    q.l_max = mix_chain + 1;
    q.l_exp = mix_chain;
    q.relays = mix_chain;
    if (name == "riffle") {
      q.p_real = 1.0;
      a.dummy_per_user_round = Rate{0.0, false};
    } else {
      one_real_per_round();
      a.dummy_per_user_round = Rate{1.0, false};
    }
    a.communications_per_round = Rate{1.0, true};
  } else {
    Fail(ErrorCode::kNotFound, "unknown preset '" + std::string(name) + "'");
  }
  q.Validate();
  return a;
}

enum class AtlasVerdict { kMeets, kViolates, kNotApplicable };

inline std::string_view AtlasVerdictName(AtlasVerdict v) {
  switch (v) {
    case AtlasVerdict::kMeets:
      return "meets";
    case AtlasVerdict::kViolates:
      return "violates";
    case AtlasVerdict::kNotApplicable:
      return "not-applicable";
  }
  return "unknown";
}

struct BoundClassification {
  BoundKind bound = BoundKind::kCounting;
  AtlasVerdict verdict = AtlasVerdict::kNotApplicable;
  std::optional<double> threshold;
  std::string reason;  // machine-readable code for not-applicable verdicts
};

struct Classification {
  std::string preset;
  AtlasMode mode = AtlasMode::kFigure3;
  double poly_lambda = 0.0;
  BoundClassification counting, trilemma, dropping;
};

namespace internal {

inline BoundClassification FromRegion(const RegionVerdict& v) {
  BoundClassification c;
  c.bound = v.kind;
  c.threshold = v.threshold;
  c.reason = v.reason;
  switch (v.verdict) {
    case Verdict::kPossible:
      c.verdict = AtlasVerdict::kMeets;
      break;
    case Verdict::kImpossible:
      c.verdict = AtlasVerdict::kViolates;
      break;
    case Verdict::kNotApplicable:
      c.verdict = AtlasVerdict::kNotApplicable;
      break;
  }
  return c;
}

inline BoundClassification NotApplicable(BoundKind kind, std::string reason) {
  BoundClassification c;
  c.bound = kind;
  c.reason = std::move(reason);
  return c;
}

}  // namespace internal

// figure3 mode evaluates the single-real-message point with beta taken equal
// to the total sending probability p. General mode replaces the counting
// verdict by the sending-behavior rule (dummy traffic per user and round must
// cover the communications per round) and drops the Trilemma for systems that need
// parallel communications.
inline Classification Classify(const AcnPreset& preset, AtlasMode mode, double lambda = 256.0,
                               std::optional<double> poly_lambda = std::nullopt) {
  const ProtocolParams& q = preset.params;
  Classification out;
  out.preset = preset.name;
  out.mode = mode;
  out.poly_lambda = poly_lambda.value_or(static_cast<double>(q.n));

  RegionPoint pt;
  pt.n = q.n;
  pt.l_max = q.l_max;
  pt.p = std::min(1.0, q.p());
  pt.beta = pt.p;  // beta ~ p
  pt.lambda = lambda;
  pt.out_per_round = 1.0;

  out.counting = internal::FromRegion(ImpossibilityRegion(BoundKind::kCounting, pt, poly_lambda));
  if (mode == AtlasMode::kGeneral && preset.dummy_per_user_round &&
      preset.communications_per_round) {
    const double dummy = preset.dummy_per_user_round->At(q.n);
    const double comms = preset.communications_per_round->At(q.n);
    out.counting.threshold = comms;
    out.counting.verdict = dummy >= comms ? AtlasVerdict::kMeets : AtlasVerdict::kViolates;
  }

  if (preset.superposed) {
    out.trilemma = internal::NotApplicable(BoundKind::kTrilemma, "superposed-sending");
    out.dropping = internal::NotApplicable(BoundKind::kDropping, "superposed-sending");
    return out;
  }
  if (mode == AtlasMode::kGeneral && preset.parallel_communications) {
    out.trilemma = internal::NotApplicable(BoundKind::kTrilemma, "parallel-communications");
  } else {
    out.trilemma =
        internal::FromRegion(ImpossibilityRegion(BoundKind::kTrilemma, pt, poly_lambda));
  }
  out.dropping = internal::FromRegion(ImpossibilityRegion(BoundKind::kDropping, pt, poly_lambda));
  return out;
}

// ---------------------------------------------------------------------------
// Trade-off grid.

struct GridRange {
  double start = 0.0;
  double stop = 0.0;
  double step = 1.0;

  std::vector<double> Values() const {
    Require(step > 0.0 && stop >= start, ErrorCode::kInvalidInput, "empty or invalid range");
    const auto count = static_cast<std::size_t>(std::floor((stop - start) / step + 1e-9)) + 1;
    std::vector<double> v(count);
    for (std::size_t i = 0; i < count; ++i) v[i] = start + static_cast<double>(i) * step;
    return v;
  }
};

struct GridRow {
  int l_max = 1;
  double beta = 0.0;
  std::optional<double> counting_min_beta;
  std::optional<double> trilemma_min_beta;
  std::optional<double> dropping_min_p;
  Verdict counting = Verdict::kNotApplicable;
  Verdict trilemma = Verdict::kNotApplicable;
  Verdict dropping = Verdict::kNotApplicable;
};

inline constexpr std::string_view kGridHeader =
    "l_max,beta,counting_min_beta,trilemma_min_beta,dropping_min_p,counting_verdict,"
    "trilemma_verdict,dropping_verdict";

// Rows ordered by l_max then beta, with beta ~ p and one real message per
// round.
inline std::vector<GridRow> ComputeGrid(int l_min, int l_max_hi, const GridRange& beta,
                                        int n, double lambda,
                                        std::optional<double> poly_lambda = std::nullopt) {
  Require(l_min >= 1 && l_max_hi >= l_min, ErrorCode::kInvalidInput, "empty l_max range");
  const std::vector<double> betas = beta.Values();
  std::vector<GridRow> rows;
  for (int l = l_min; l <= l_max_hi; ++l) {
    for (double b : betas) {
      RegionPoint pt;
      pt.n = n;
      pt.l_max = l;
      pt.beta = std::clamp(b, 0.0, 1.0);
      pt.p = pt.beta;
      pt.lambda = lambda;
      GridRow row;
      row.l_max = l;
      row.beta = b;
      const RegionVerdict c = ImpossibilityRegion(BoundKind::kCounting, pt, poly_lambda);
      const RegionVerdict t = ImpossibilityRegion(BoundKind::kTrilemma, pt, poly_lambda);
      const RegionVerdict d = ImpossibilityRegion(BoundKind::kDropping, pt, poly_lambda);
      row.counting_min_beta = c.threshold;
      row.trilemma_min_beta = t.threshold;
      row.dropping_min_p = d.threshold;
      row.counting = c.verdict;
      row.trilemma = t.verdict;
      row.dropping = d.verdict;
      rows.push_back(row);
    }
  }
  return rows;
}

inline std::string FormatNumber(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.10g", x);
  return buf;
}

inline void EmitGrid(std::ostream& out, const std::vector<GridRow>& rows) {
  auto opt = [](const std::optional<double>& x) { return x ? FormatNumber(*x) : std::string(); };
  out << kGridHeader << '\n';
  for (const GridRow& r : rows) {
    out << r.l_max << ',' << FormatNumber(r.beta) << ',' << opt(r.counting_min_beta) << ','
        << opt(r.trilemma_min_beta) << ',' << opt(r.dropping_min_p) << ','
        << VerdictName(r.counting) << ',' << VerdictName(r.trilemma) << ','
        << VerdictName(r.dropping) << '\n';
  }
}

}  // namespace acnb

#endif  // ACNB_ATLAS_HPP_
