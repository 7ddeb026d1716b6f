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

#ifndef ACNB_RANDOM_HPP_
#define ACNB_RANDOM_HPP_

#include <cstdint>
#include <limits>
#include <numeric>
#include <random>
#include <span>
#include <utility>
#include <vector>

#include "acnb/error.hpp"

namespace acnb {

// SplitMix64 finalizer; used to derive independent per-trial seeds from a
// master seed so results never depend on how trials are scheduled.
inline std::uint64_t Mix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// Named sub-streams of one master seed.
enum class Stream : std::uint64_t {
  kChallengeBit = 1,
  kProtocol = 2,
  kAdversary = 3,
  kPairGeneration = 4,
};

inline std::uint64_t DeriveSeed(std::uint64_t master, std::uint64_t index,
                                Stream stream) {
  return Mix64(Mix64(master ^ Mix64(index)) + static_cast<std::uint64_t>(stream));
}

// Source of every random decision a protocol or adversary makes. Two
// implementations exist: one samples, the other walks every outcome with its
// exact probability weight. Model code is written once against this interface.
class Chooser {
 public:
  virtual ~Chooser() = default;

  // Index drawn with the given (normalized) probabilities.
  virtual int Categorical(std::span<const double> probs) = 0;

  virtual bool Bernoulli(double p) {
    const double probs[2] = {1.0 - p, p};
    return Categorical(probs) == 1;
  }

  virtual int UniformInt(int k) {
    std::vector<double> probs(static_cast<std::size_t>(k), 1.0 / k);
    return Categorical(probs);
  }

  bool Coin() { return Bernoulli(0.5); }

  template <typename T>
  void Shuffle(std::vector<T>& items) {
    for (int i = static_cast<int>(items.size()) - 1; i > 0; --i) {
      const int j = UniformInt(i + 1);
      std::swap(items[static_cast<std::size_t>(i)], items[static_cast<std::size_t>(j)]);
    }
  }

  // Ordered sample of `count` distinct values from [0, population).
  std::vector<int> SampleWithoutReplacement(int population, int count) {
    Require(count >= 0 && count <= population, ErrorCode::kInvalidInput,
            "sample size exceeds population");
    std::vector<int> pool(static_cast<std::size_t>(population));
    std::iota(pool.begin(), pool.end(), 0);
    std::vector<int> out;
    out.reserve(static_cast<std::size_t>(count));
    for (int i = 0; i < count; ++i) {
      const int j = UniformInt(population - i);
      out.push_back(pool[static_cast<std::size_t>(j)]);
      pool.erase(pool.begin() + j);
    }
    return out;
  }
};

class SampledChooser final : public Chooser {
 public:
  explicit SampledChooser(std::uint64_t seed) : engine_(seed) {}

  int Categorical(std::span<const double> probs) override {
    const double u = NextUnit();
    double acc = 0.0;
    int last_positive = 0;
    for (std::size_t i = 0; i < probs.size(); ++i) {
      if (probs[i] <= 0.0) continue;
      last_positive = static_cast<int>(i);
      acc += probs[i];
      if (u < acc) return static_cast<int>(i);
    }
    return last_positive;
  }

  bool Bernoulli(double p) override { return NextUnit() < p; }

  int UniformInt(int k) override {
    const auto bound = static_cast<std::uint64_t>(k);
    const std::uint64_t limit =
        std::numeric_limits<std::uint64_t>::max() -
        std::numeric_limits<std::uint64_t>::max() % bound;
    std::uint64_t x;
    do {
      x = engine_();
    } while (x >= limit);
    return static_cast<int>(x % bound);
  }

 private:
  double NextUnit() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  std::mt19937_64 engine_;
};

// Depth-first walk over every sequence of choices with positive probability.
// The body must be deterministic given its choices; it is replayed once per
// outcome and `weight()` holds that outcome's probability.
class EnumeratingChooser final : public Chooser {
 public:
  explicit EnumeratingChooser(std::uint64_t max_outcomes = 1ULL << 22)
      : max_outcomes_(max_outcomes) {}

  int Categorical(std::span<const double> probs) override {
    int chosen;
    if (depth_ < levels_.size()) {
      chosen = levels_[depth_].chosen;
    } else {
      chosen = FirstPositive(probs, -1);
      Require(chosen >= 0, ErrorCode::kInvalidInput,
              "categorical draw with no positive probability");
      levels_.push_back({std::vector<double>(probs.begin(), probs.end()), chosen});
    }
    weight_ *= probs[static_cast<std::size_t>(chosen)];
    ++depth_;
    return chosen;
  }

  double weight() const { return weight_; }
  std::uint64_t outcomes() const { return outcomes_; }

  template <typename Body>
  void ForEachOutcome(Body&& body) {
    levels_.clear();
    outcomes_ = 0;
    do {
      Require(++outcomes_ <= max_outcomes_, ErrorCode::kResourceLimit,
              "outcome space exceeds enumeration budget");
      depth_ = 0;
      weight_ = 1.0;
      body();
      levels_.resize(depth_);
    } while (Advance());
  }

 private:
  struct Level {
    std::vector<double> probs;
    int chosen;
  };

  static int FirstPositive(std::span<const double> probs, int after) {
    for (std::size_t i = static_cast<std::size_t>(after + 1); i < probs.size(); ++i) {
      if (probs[i] > 0.0) return static_cast<int>(i);
    }
    return -1;
  }

  bool Advance() {
    while (!levels_.empty()) {
      Level& level = levels_.back();
      const int next = FirstPositive(level.probs, level.chosen);
      if (next >= 0) {
        level.chosen = next;
        return true;
      }
      levels_.pop_back();
    }
    return false;
  }

  std::uint64_t max_outcomes_;
  std::uint64_t outcomes_ = 0;
  std::vector<Level> levels_;
  std::size_t depth_ = 0;
  double weight_ = 1.0;
};

}  // namespace acnb

#endif  // ACNB_RANDOM_HPP_
