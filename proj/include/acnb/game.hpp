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

#ifndef ACNB_GAME_HPP_
#define ACNB_GAME_HPP_

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <thread>
#include <utility>
#include <vector>

#include "acnb/adversaries.hpp"
#include "acnb/error.hpp"
#include "acnb/model.hpp"
#include "acnb/notions.hpp"
#include "acnb/protocols.hpp"
#include "acnb/random.hpp"

namespace acnb {

// One instance of the indistinguishability game: the challenger runs
// `protocol` on pair.batch_b and `attack` guesses b from the filtered view.
struct Experiment {
  ProtocolKind protocol;
  AttackKind attack = AttackKind::kRandomGuess;
  ScenarioPair pair;
  AdversaryCapability capability;

  void Validate() const {
    protocol.params.Validate();
    capability.Validate(protocol.params.relays);
    CheckCapability(attack, capability, pair);
    Require(attack != AttackKind::kDropping ||
                protocol.variant == ProtocolVariant::kDroppingModel,
            ErrorCode::kCapabilityViolation, "dropping attack needs the dropping model");
  }
};

// Plays scenario b once and returns the adversary's guess. Protocol and
// adversary randomness come from separate choosers (they may be the same
// object when enumerating).
inline int PlayTrial(const Experiment& exp, int b, Chooser& protocol_rng, Chooser& coin) {
  const Batch& batch = exp.pair.batch(b);
  if (exp.attack == AttackKind::kDropping) {
    DroppingRun run(exp.protocol.params, batch, exp.capability, protocol_rng);
    return DroppingStrategy(exp.capability, exp.pair).Play(run);
  }
  if (exp.attack == AttackKind::kRandomGuess) return coin.Coin() ? 1 : 0;
  const ObservationTrace view =
      FilterTrace(RunProtocol(exp.protocol, batch, protocol_rng), exp.capability);
  const int l_max = exp.protocol.params.l_max;
  switch (exp.attack) {
    case AttackKind::kCounting:
      return CountingGuess(view, exp.capability, exp.pair, coin);
    case AttackKind::kTimingInterval:
      return TimingGuess(view, exp.capability, exp.pair, l_max, coin);
    case AttackKind::kPathTracing:
      return TracingGuess(view, exp.capability, exp.pair, l_max, coin);
    default:
      break;
  }
  Fail(ErrorCode::kConfiguration, "unhandled attack");
}

enum class AdvantageForm { kCounting, kOptimality };

inline std::string_view AdvantageFormName(AdvantageForm f) {
  return f == AdvantageForm::kCounting ? "counting-form" : "optimality-form";
}

struct AdvantageForms {
  double counting = 0.0;    // Pr[1|1] - Pr[1|0]
  double optimality = 0.0;  // 2 Pr[b|b] - 1 with a uniform challenge bit
};

inline AdvantageForms TransformAdvantage(double prob_1_given_1, double prob_1_given_0) {
  Require(prob_1_given_1 >= 0.0 && prob_1_given_1 <= 1.0 && prob_1_given_0 >= 0.0 &&
              prob_1_given_0 <= 1.0,
          ErrorCode::kInvalidInput, "probabilities must lie in [0,1]");
  AdvantageForms f;
  f.counting = prob_1_given_1 - prob_1_given_0;
  const double correct = 0.5 * (1.0 - prob_1_given_0) + 0.5 * prob_1_given_1;
  f.optimality = 2.0 * correct - 1.0;
  return f;
}

struct TrialCounts {
  std::int64_t scenario1 = 0;        // trials with b = 1
  std::int64_t scenario0 = 0;
  std::int64_t guess1_given1 = 0;
  std::int64_t guess1_given0 = 0;

  TrialCounts& operator+=(const TrialCounts& o) {
    scenario1 += o.scenario1;
    scenario0 += o.scenario0;
    guess1_given1 += o.guess1_given1;
    guess1_given0 += o.guess1_given0;
    return *this;
  }
};

struct AdvantageEstimate {
  double point = 0.0;
  double ci_low = 0.0;
  double ci_high = 0.0;
  double std_error = 0.0;
  std::int64_t trials = 0;
  AdvantageForm definition = AdvantageForm::kCounting;
  TrialCounts counts;
};

inline constexpr double kZ95 = 1.959963984540054;

// Wilson score interval for k successes in n trials.
inline std::pair<double, double> WilsonInterval(std::int64_t k, std::int64_t n,
                                                double z = kZ95) {
  if (n == 0) return {0.0, 1.0};
  const double nn = static_cast<double>(n);
  const double phat = static_cast<double>(k) / nn;
  const double z2 = z * z;
  const double denom = 1.0 + z2 / nn;
  const double center = (phat + z2 / (2.0 * nn)) / denom;
  const double half = z * std::sqrt(phat * (1.0 - phat) / nn + z2 / (4.0 * nn * nn)) / denom;
  const double lo = k == 0 ? 0.0 : std::max(0.0, center - half);
  const double hi = k == n ? 1.0 : std::min(1.0, center + half);
  return {lo, hi};
}

inline TrialCounts RunTrials(const Experiment& exp, std::int64_t begin, std::int64_t end,
                             std::uint64_t master_seed) {
  TrialCounts c;
  for (std::int64_t i = begin; i < end; ++i) {
    const auto index = static_cast<std::uint64_t>(i);
    const int b = static_cast<int>(DeriveSeed(master_seed, index, Stream::kChallengeBit) & 1);
    SampledChooser protocol_rng(DeriveSeed(master_seed, index, Stream::kProtocol));
    SampledChooser coin(DeriveSeed(master_seed, index, Stream::kAdversary));
    const int guess = PlayTrial(exp, b, protocol_rng, coin);
    if (b == 1) {
      ++c.scenario1;
      c.guess1_given1 += guess;
    } else {
      ++c.scenario0;
      c.guess1_given0 += guess;
    }
  }
  return c;
}

inline AdvantageEstimate SummarizeCounts(const TrialCounts& c, AdvantageForm form) {
  AdvantageEstimate est;
  est.counts = c;
  est.trials = c.scenario0 + c.scenario1;
  est.definition = form;
  const double n1 = static_cast<double>(c.scenario1);
  const double n0 = static_cast<double>(c.scenario0);
  const double p11 = n1 > 0 ? static_cast<double>(c.guess1_given1) / n1 : 0.0;
  const double p10 = n0 > 0 ? static_cast<double>(c.guess1_given0) / n0 : 0.0;
  if (form == AdvantageForm::kCounting) {
    est.point = p11 - p10;
  } else {
    const double correct = static_cast<double>(c.guess1_given1 + (c.scenario0 - c.guess1_given0));
    est.point = 2.0 * correct / static_cast<double>(est.trials) - 1.0;
  }
  est.std_error = std::sqrt((n1 > 0 ? p11 * (1 - p11) / n1 : 0.0) +
                            (n0 > 0 ? p10 * (1 - p10) / n0 : 0.0));
  // Per-arm Wilson intervals combined at their extremes.
  const auto [lo1, hi1] = WilsonInterval(c.guess1_given1, c.scenario1);
  const auto [lo0, hi0] = WilsonInterval(c.guess1_given0, c.scenario0);
  est.ci_low = std::min(est.point, lo1 - hi0);
  est.ci_high = std::max(est.point, hi1 - lo0);
  return est;
}

// Monte Carlo estimate over `trials` games. Each trial's challenge bit and
// random streams derive from (master_seed, trial index), so the result does
// not depend on `workers`.
inline AdvantageEstimate EstimateAdvantage(const Experiment& exp, std::int64_t trials,
                                           std::uint64_t master_seed, int workers = 1,
                                           AdvantageForm form = AdvantageForm::kCounting) {
  Require(trials >= 100, ErrorCode::kInvalidInput, "at least 100 trials required");
  exp.Validate();
  workers = std::clamp<int>(workers, 1, 256);
  std::vector<TrialCounts> partial(static_cast<std::size_t>(workers));
  std::vector<std::thread> threads;
  std::vector<std::exception_ptr> errors(static_cast<std::size_t>(workers));
  for (int w = 0; w < workers; ++w) {
    const std::int64_t begin = trials * w / workers;
    const std::int64_t end = trials * (w + 1) / workers;
    threads.emplace_back([&, w, begin, end] {
      try {
        partial[static_cast<std::size_t>(w)] = RunTrials(exp, begin, end, master_seed);
      } catch (...) {
        errors[static_cast<std::size_t>(w)] = std::current_exception();
      }
    });
  }
  for (auto& t : threads) t.join();
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  TrialCounts total;
  for (const TrialCounts& c : partial) total += c;
  return SummarizeCounts(total, form);
}

struct ExactAdvantage {
  double prob_1_given_1 = 0.0;
  double prob_1_given_0 = 0.0;
  double advantage = 0.0;
  std::uint64_t outcomes = 0;
};

// Exact advantage by walking every protocol and adversary outcome with its
// probability. Throws kResourceLimit when the outcome space is too large.
inline ExactAdvantage ComputeExactAdvantage(const Experiment& exp,
                                            std::uint64_t max_outcomes = 1ULL << 22) {
  exp.Validate();
  ExactAdvantage result;
  double prob1[2] = {0.0, 0.0};
  for (int b = 0; b < 2; ++b) {
    EnumeratingChooser walker(max_outcomes);
    double total = 0.0;
    walker.ForEachOutcome([&] {
      const int guess = PlayTrial(exp, b, walker, walker);
      total += walker.weight();
      if (guess == 1) prob1[b] += walker.weight();
    });
    prob1[b] /= total;
    result.outcomes += walker.outcomes();
  }
  result.prob_1_given_0 = prob1[0];
  result.prob_1_given_1 = prob1[1];
  result.advantage = prob1[1] - prob1[0];
  return result;
}

}  // namespace acnb

#endif  // ACNB_GAME_HPP_
