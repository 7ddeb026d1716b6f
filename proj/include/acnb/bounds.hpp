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

#ifndef ACNB_BOUNDS_HPP_
#define ACNB_BOUNDS_HPP_

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "acnb/error.hpp"

namespace acnb {

inline double Clamp01(double x) { return std::clamp(x, 0.0, 1.0); }

inline double LogBase(double x, double base) {
  return base == 2.0 ? std::log2(x) : std::log(x) / std::log(base);
}

// Binomial coefficient as a double; zero when k > n.
inline double Binomial(int n, int k) {
  if (k < 0 || n < 0 || k > n) return 0.0;
  k = std::min(k, n - k);
  double r = 1.0;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return std::round(r);
}

struct BoundResult {
  std::string kind;
  double delta = 0.0;
  std::string case_tag;
  std::map<std::string, double> inputs;
};

// ---------------------------------------------------------------------------
// Counting and optimality.

struct CountingBoundResult {
  std::int64_t min_com = 0;
  double overhead_fraction = 0.0;  // share of the minimum that is dummy traffic
  std::vector<int> excluded;       // senders that sent fewer than out_r
};

inline CountingBoundResult CountingBound(std::int64_t out_r, std::int64_t h,
                                         const std::optional<std::vector<std::int64_t>>&
                                             per_sender = std::nullopt) {
  Require(out_r >= 0 && h >= 1, ErrorCode::kInvalidInput, "need out_r >= 0 and h >= 1");
  CountingBoundResult r;
  r.min_com = out_r * h;
  r.overhead_fraction = static_cast<double>(h - 1) / static_cast<double>(h);
  if (per_sender) {
    for (std::size_t i = 0; i < per_sender->size(); ++i) {
      if ((*per_sender)[i] < out_r) r.excluded.push_back(static_cast<int>(i));
    }
  }
  return r;
}

inline std::int64_t OptimalityOverhead(std::int64_t n, std::int64_t mu_max) {
  Require(n >= 0 && mu_max >= 0, ErrorCode::kInvalidInput, "need n, mu_max >= 0");
  return n * mu_max;
}

// ---------------------------------------------------------------------------
// Trilemma.

enum class TrilemmaSetting { kSync, kUnsyncImproved, kUnsyncOriginal };

inline std::string_view TrilemmaSettingName(TrilemmaSetting s) {
  switch (s) {
    case TrilemmaSetting::kSync:
      return "sync";
    case TrilemmaSetting::kUnsyncImproved:
      return "unsync-improved";
    case TrilemmaSetting::kUnsyncOriginal:
      return "unsync-original";
  }
  return "unknown";
}

inline TrilemmaSetting ParseTrilemmaSetting(std::string_view name) {
  if (name == "sync" || name == "trilemma-sync") return TrilemmaSetting::kSync;
  if (name == "unsync-improved" || name == "unsync" || name == "trilemma-unsync")
    return TrilemmaSetting::kUnsyncImproved;
  if (name == "unsync-original" || name == "trilemma-unsync-original")
    return TrilemmaSetting::kUnsyncOriginal;
  Fail(ErrorCode::kInvalidInput, "unknown trilemma setting '" + std::string(name) + "'");
}

// Probability that some other user sends within x rounds, synchronized model.
inline double FBeta(double x, double beta, int n) {
  return std::min(1.0, x * (1.0 + beta * n) / (n - 1));
}

namespace internal {

inline void CheckTrilemmaInputs(int l_max, double beta, double p, int n) {
  Require(l_max >= 1, ErrorCode::kInvalidInput, "l_max must be >= 1");
  Require(n >= 2, ErrorCode::kInvalidInput, "n must be >= 2");
  Require(beta >= 0.0 && beta <= 1.0 && p >= 0.0 && p <= 1.0, ErrorCode::kInvalidInput,
          "beta and p must lie in [0,1]");
}

}  // namespace internal

inline BoundResult TrilemmaAdvantage(TrilemmaSetting setting, int l_max, double beta, double p,
                                     int n) {
  internal::CheckTrilemmaInputs(l_max, beta, p, n);
  BoundResult r;
  r.kind = "trilemma-" + std::string(TrilemmaSettingName(setting));
  r.inputs = {{"l_max", l_max}, {"beta", beta}, {"p", p}, {"n", n}};
  const double silent = std::pow(1.0 - p, l_max - 1);
  switch (setting) {
    case TrilemmaSetting::kSync:
      r.delta = 1.0 - FBeta(l_max - 1, beta, n);
      break;
    case TrilemmaSetting::kUnsyncImproved:
      r.delta = silent;
      break;
    case TrilemmaSetting::kUnsyncOriginal:
      r.delta = 1.0 - (0.5 + std::min(0.5, 1.0 - silent));
      break;
  }
  r.delta = Clamp01(r.delta);
  return r;
}

inline BoundResult TrilemmaCompromising(TrilemmaSetting setting, int l_max, double beta,
                                        double p, int n, int c_p, int relays) {
  internal::CheckTrilemmaInputs(l_max, beta, p, n);
  Require(setting != TrilemmaSetting::kUnsyncOriginal, ErrorCode::kInvalidInput,
          "compromising bound exists for sync and unsync-improved only");
  Require(c_p >= 0 && relays >= 0, ErrorCode::kInvalidInput, "c_p and K must be >= 0");
  Require(c_p <= relays, ErrorCode::kInvalidInput, "c_p must not exceed K");
  BoundResult r;
  r.kind = "trilemma-compromising-" + std::string(TrilemmaSettingName(setting));
  r.inputs = {{"l_max", l_max}, {"beta", beta}, {"p", p},
              {"n", n},         {"c_p", c_p},   {"K", relays}};
  const int hops = l_max - 1;
  const bool sync = setting == TrilemmaSetting::kSync;
  if (c_p >= hops) {
    r.case_tag = "c_p>=l_max-1";
    const double honest_on_path = 1.0 - Binomial(c_p, hops) / Binomial(relays, hops);
    const double other_sends = sync ? FBeta(hops, beta, n) : 1.0 - std::pow(1.0 - p, hops);
    r.delta = 1.0 - honest_on_path * other_sends;
  } else {
    r.case_tag = "c_p<l_max-1";
    const double honest_short = 1.0 - 1.0 / Binomial(relays, c_p);
    if (sync) {
      r.delta = 1.0 - honest_short * FBeta(c_p, beta, n) - FBeta(hops - c_p, beta, n);
    } else {
      r.delta = std::pow(1.0 - p, hops - c_p) *
                (1.0 - (1.0 - std::pow(1.0 - p, c_p)) * honest_short);
    }
  }
  r.delta = Clamp01(r.delta);
  return r;
}

// ---------------------------------------------------------------------------
// Impossibility regions.

enum class BoundKind { kCounting, kTrilemma, kDropping };
enum class Verdict { kImpossible, kPossible, kNotApplicable };

inline std::string_view BoundKindName(BoundKind k) {
  switch (k) {
    case BoundKind::kCounting:
      return "counting";
    case BoundKind::kTrilemma:
      return "trilemma";
    case BoundKind::kDropping:
      return "dropping";
  }
  return "unknown";
}

inline BoundKind ParseBoundKind(std::string_view name) {
  for (BoundKind k : {BoundKind::kCounting, BoundKind::kTrilemma, BoundKind::kDropping}) {
    if (BoundKindName(k) == name) return k;
  }
  Fail(ErrorCode::kInvalidInput, "unknown bound kind '" + std::string(name) + "'");
}

inline std::string_view VerdictName(Verdict v) {
  switch (v) {
    case Verdict::kImpossible:
      return "impossible";
    case Verdict::kPossible:
      return "possible";
    case Verdict::kNotApplicable:
      return "not-applicable";
  }
  return "unknown";
}

struct RegionPoint {
  int n = 2;
  int l_max = 1;
  double beta = 0.0;
  double p = 0.0;
  int c_p = 0;
  double out_per_round = 1.0;  // Out(r) / r
  double lambda = 256.0;
  double log_base = 2.0;
};

struct RegionVerdict {
  BoundKind kind = BoundKind::kCounting;
  Verdict verdict = Verdict::kNotApplicable;
  std::optional<double> threshold;  // min beta (counting, trilemma) or min p (dropping)
  double poly_lambda = 0.0;
  std::string reason;  // set when not applicable
};

inline double CountingMinBeta(double out_per_round, double poly_lambda) {
  return out_per_round * (1.0 - 1.0 / poly_lambda);
}

// Returns nullopt when l_max <= 1 (no latency window to exploit).
inline std::optional<double> TrilemmaMinBeta(int l_max, int c_p, double poly_lambda) {
  if (l_max <= 1) return std::nullopt;
  const int window = c_p >= l_max - 1 ? l_max - 1 : l_max - 1 - c_p;
  return (1.0 - 1.0 / poly_lambda) / (2.0 * window);
}

inline double DroppingMinP(double lambda, double poly_lambda, int l_max, double log_base = 2.0) {
  return LogBase(lambda, log_base) / (poly_lambda * l_max);
}

// A point is "possible" only when it satisfies the bound's necessary
// condition; points inside the area of impossibility are "impossible".
inline RegionVerdict ImpossibilityRegion(BoundKind kind, const RegionPoint& pt,
                                         std::optional<double> poly_lambda = std::nullopt) {
  const double poly = poly_lambda.value_or(static_cast<double>(pt.n));
  Require(poly > 1.0, ErrorCode::kInvalidInput, "poly(lambda) must exceed 1");
  Require(pt.n >= 2 && pt.l_max >= 1, ErrorCode::kInvalidInput, "need n >= 2 and l_max >= 1");
  Require(pt.beta >= 0.0 && pt.beta <= 1.0 && pt.p >= 0.0 && pt.p <= 1.0,
          ErrorCode::kInvalidInput, "beta and p must lie in [0,1]");
  RegionVerdict v;
  v.kind = kind;
  v.poly_lambda = poly;
  switch (kind) {
    case BoundKind::kCounting: {
      v.threshold = CountingMinBeta(pt.out_per_round, poly);
      v.verdict = (pt.p >= 1.0 && pt.beta >= *v.threshold) ? Verdict::kPossible
                                                           : Verdict::kImpossible;
      break;
    }
    case BoundKind::kTrilemma: {
      v.threshold = TrilemmaMinBeta(pt.l_max, pt.c_p, poly);
      if (!v.threshold) {
        v.verdict = Verdict::kNotApplicable;
        v.reason = "minimal-latency";
        break;
      }
      const bool inside = pt.beta <= *v.threshold || pt.beta * pt.n < 1.0;
      v.verdict = inside ? Verdict::kImpossible : Verdict::kPossible;
      break;
    }
    case BoundKind::kDropping: {
      Require(pt.lambda > 1.0 && pt.log_base > 1.0, ErrorCode::kInvalidInput,
              "lambda and log base must exceed 1");
      v.threshold = DroppingMinP(pt.lambda, poly, pt.l_max, pt.log_base);
      v.verdict = pt.p <= *v.threshold ? Verdict::kImpossible : Verdict::kPossible;
      break;
    }
  }
  return v;
}

// ---------------------------------------------------------------------------
// Onion cost.

enum class CostModel { kTrilemma, kCounting, kDropping };

inline std::string_view CostModelName(CostModel m) {
  switch (m) {
    case CostModel::kTrilemma:
      return "trilemma";
    case CostModel::kCounting:
      return "counting";
    case CostModel::kDropping:
      return "dropping-threshold";
  }
  return "unknown";
}

struct OnionCost {
  CostModel model = CostModel::kTrilemma;
  double per_user = 0.0;
  double network = 0.0;
};

inline OnionCost ComputeOnionCost(CostModel model, int n, double p, double l_exp,
                                  double lambda, double log_base = 2.0) {
  Require(n >= 1 && p >= 0.0 && p <= 1.0 && l_exp >= 0.0, ErrorCode::kInvalidInput,
          "onion cost parameters out of range");
  OnionCost c;
  c.model = model;
  switch (model) {
    case CostModel::kTrilemma:
      c.per_user = n * p * l_exp;
      break;
    case CostModel::kCounting:
      c.per_user = n * l_exp;
      break;
    case CostModel::kDropping:
      Require(lambda > 1.0 && log_base > 1.0, ErrorCode::kInvalidInput,
              "lambda and log base must exceed 1");
      c.per_user = LogBase(lambda, log_base);
      break;
  }
  c.network = c.per_user * n;
  return c;
}

}  // namespace acnb

#endif  // ACNB_BOUNDS_HPP_
