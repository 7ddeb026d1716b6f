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

#ifndef ACNB_CLI_HPP_
#define ACNB_CLI_HPP_

#include <cstdint>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "acnb/acnb.hpp"

namespace acnb::cli {

using nlohmann::json;

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitVerifyFailed = 2;

inline constexpr const char* kWorkersEnv = "ACNB_WORKERS";
inline constexpr int kDefaultGameUsers = 10;
inline constexpr int kDefaultPopulation = 1000;

// Everything any subcommand may read. Flag names mirror config-file keys.
struct RunConfig {
  std::string subcommand;
  std::uint64_t seed = 1;
  std::string format = "json";

  // Protocol and adversary.
  std::string protocol = "trilemma-unsync";
  std::string attack = "timing";
  std::string notion;  // empty: default for the attack
  int n = 10;
  int l_max = 3;
  std::optional<double> l_exp;
  double beta = 0.0;
  std::optional<double> p_real;
  std::optional<double> p;  // total send probability; p' = p - beta
  int relays = 4;
  int threshold = 1;
  int copies = 1;
  int rounds = 1;
  bool integrated = false;
  int c_p = 0;
  int c_a = 0;
  bool link_control = true;
  std::int64_t trials = 100000;
  std::string definition = "counting-form";
  double tolerance = 0.02;

  // Bounds and regions.
  std::string kind;
  std::int64_t out = 1;
  std::int64_t h = 1;
  std::int64_t mu = 0;
  double out_rate = 1.0;
  double lambda = 256.0;
  std::optional<double> poly_lambda;
  double log_base = 2.0;
  std::string lmax_range;
  std::string beta_range;

  // Atlas.
  std::string preset = "all";
  std::string mode = "general";
};

namespace internal {

inline double TotalP(const RunConfig& c) {
  if (c.p) return *c.p;
  return c.beta + c.p_real.value_or(0.0);
}

inline ProtocolParams ParamsOf(const RunConfig& c) {
  ProtocolParams q;
  q.n = c.n;
  q.l_max = c.l_max;
  q.beta = c.beta;
  if (c.p) {
    Require(!c.p_real, ErrorCode::kInvalidInput, "give either --p or --preal, not both");
    Require(*c.p >= c.beta, ErrorCode::kInvalidInput, "--p must be at least --beta");
    q.p_real = *c.p - c.beta;
  } else {
    q.p_real = c.p_real.value_or(0.0);
  }
  q.l_exp = c.l_exp.value_or(std::max(1, c.l_max - 1));
  q.relays = c.relays;
  q.threshold = c.threshold;
  q.copies = c.copies;
  q.rounds = c.rounds;
  q.integrated = c.integrated;
  q.Validate();
  return q;
}

inline json ParamsJson(const ProtocolParams& q) {
  return json{{"n", q.n},           {"l_max", q.l_max},   {"l_exp", q.l_exp},
              {"beta", q.beta},     {"p_real", q.p_real}, {"p", q.p()},
              {"K", q.relays},      {"threshold", q.threshold},
              {"copies", q.copies}, {"rounds", q.rounds}, {"integrated", q.integrated}};
}

inline std::string DefaultNotion(AttackKind attack) {
  switch (attack) {
    case AttackKind::kCounting:
      return "SO";
    case AttackKind::kDropping:
      return "(SR)L_1";
    default:
      return "(SM)L";
  }
}

inline AdvantageForm ParseDefinition(const std::string& s) {
  if (s == "counting-form") return AdvantageForm::kCounting;
  if (s == "optimality-form") return AdvantageForm::kOptimality;
  Fail(ErrorCode::kInvalidInput, "unknown definition '" + s + "'");
}

inline int WorkersFromEnv() {
  const char* v = std::getenv(kWorkersEnv);
  if (v == nullptr || *v == '\0') return 1;
  char* end = nullptr;
  const long w = std::strtol(v, &end, 10);
  Require(*end == '\0' && w >= 1 && w <= 256, ErrorCode::kInvalidInput,
          std::string(kWorkersEnv) + " must be an integer in [1,256]");
  return static_cast<int>(w);
}

inline json CiJson(const AdvantageEstimate& e) { return json::array({e.ci_low, e.ci_high}); }

inline json Simulate(const RunConfig& c, AdvantageEstimate* estimate = nullptr) {
  const ProtocolParams params = ParamsOf(c);
  const AttackKind attack = ParseAttack(c.attack);
  const Notion notion = Notion::Parse(c.notion.empty() ? DefaultNotion(attack) : c.notion);
  ScenarioPair pair = GeneratePair(notion, params, DeriveSeed(c.seed, 0, Stream::kPairGeneration));
  AdversaryCapability cap = DefaultCapability(attack, pair, c.c_p, c.c_a);
  if (attack == AttackKind::kDropping && !c.link_control) cap.observed_senders.clear();
  const Experiment exp{{ParseProtocol(c.protocol), params}, attack, std::move(pair), cap};
  const AdvantageEstimate est = EstimateAdvantage(exp, c.trials, c.seed, WorkersFromEnv(),
                                                  ParseDefinition(c.definition));
  if (estimate) *estimate = est;
  return json{{"protocol", ProtocolName(exp.protocol.variant)},
              {"attack", AttackName(exp.attack)},
              {"notion", notion.Name()},
              {"params", ParamsJson(params)},
              {"trials", est.trials},
              {"seed", c.seed},
              {"point", est.point},
              {"ci", CiJson(est)},
              {"definition", AdvantageFormName(est.definition)}};
}

inline json BoundJson(const BoundResult& r) {
  json j{{"bound", r.kind}, {"delta", r.delta}, {"inputs", r.inputs}};
  if (!r.case_tag.empty()) j["case"] = r.case_tag;
  return j;
}

inline json Bound(const RunConfig& c) {
  const std::string& k = c.kind;
  Require(!k.empty(), ErrorCode::kInvalidInput, "--kind is required");
  const double p = TotalP(c);
  if (k == "trilemma-sync" || k == "trilemma-unsync" || k == "trilemma-unsync-improved" ||
      k == "trilemma-unsync-original") {
    const TrilemmaSetting s = ParseTrilemmaSetting(k == "trilemma-unsync-improved"
                                                       ? std::string("unsync-improved")
                                                       : k);
    return BoundJson(TrilemmaAdvantage(s, c.l_max, c.beta, p, c.n));
  }
  if (k == "trilemma-compromising-sync" || k == "trilemma-compromising-unsync") {
    const TrilemmaSetting s = k == "trilemma-compromising-sync"
                                  ? TrilemmaSetting::kSync
                                  : TrilemmaSetting::kUnsyncImproved;
    return BoundJson(TrilemmaCompromising(s, c.l_max, c.beta, p, c.n, c.c_p, c.relays));
  }
  if (k == "counting") {
    const CountingBoundResult r = CountingBound(c.out, c.h);
    return json{{"bound", "counting"},
                {"min_com", r.min_com},
                {"overhead_fraction", r.overhead_fraction},
                {"inputs", {{"out", c.out}, {"h", c.h}}}};
  }
  if (k == "optimality") {
    return json{{"bound", "optimality"},
                {"overhead", OptimalityOverhead(c.n, c.mu)},
                {"inputs", {{"n", c.n}, {"mu_max", c.mu}}}};
  }
  if (k == "onion-trilemma" || k == "onion-counting" || k == "onion-dropping") {
    const CostModel m = k == "onion-trilemma"   ? CostModel::kTrilemma
                        : k == "onion-counting" ? CostModel::kCounting
                                                : CostModel::kDropping;
    const double l_exp = c.l_exp.value_or(std::max(1, c.l_max - 1));
    const OnionCost oc = ComputeOnionCost(m, c.n, p, l_exp, c.lambda, c.log_base);
    return json{{"bound", "onion-cost"},
                {"model", CostModelName(m)},
                {"per_user", oc.per_user},
                {"network", oc.network},
                {"inputs", {{"n", c.n}, {"p", p}, {"l_exp", l_exp}, {"lambda", c.lambda}}}};
  }
  Fail(ErrorCode::kInvalidInput, "unknown bound kind '" + k + "'");
}

// Analytic lower bound matching a simulated configuration, if there is one.
inline std::optional<BoundResult> MatchingBound(const RunConfig& c) {
  const ProtocolVariant v = ParseProtocol(c.protocol);
  const AttackKind a = ParseAttack(c.attack);
  const bool timing = a == AttackKind::kTimingInterval ||
                      (a == AttackKind::kPathTracing && c.c_p == 0);
  if (!timing) return std::nullopt;
  const ProtocolParams q = ParamsOf(c);
  if (v == ProtocolVariant::kTrilemmaUnsync)
    return TrilemmaAdvantage(TrilemmaSetting::kUnsyncImproved, q.l_max, q.beta, q.p(), q.n);
  if (v == ProtocolVariant::kTrilemmaSync)
    return TrilemmaAdvantage(TrilemmaSetting::kSync, q.l_max, q.beta, q.p(), q.n);
  return std::nullopt;
}

inline std::pair<int, int> ParseIntRange(const std::string& s) {
  int a = 0, b = 0;
  char colon = 0;
  std::istringstream in(s);
  Require(static_cast<bool>(in >> a >> colon >> b) && colon == ':' && in.eof(),
          ErrorCode::kInvalidInput, "l_max range must look like 2:10");
  return {a, b};
}

inline GridRange ParseRealRange(const std::string& s) {
  GridRange r;
  char c1 = 0, c2 = 0;
  std::istringstream in(s);
  Require(static_cast<bool>(in >> r.start >> c1 >> r.stop >> c2 >> r.step) && c1 == ':' &&
              c2 == ':' && in.eof(),
          ErrorCode::kInvalidInput, "beta range must look like 0:1:0.05");
  return r;
}

inline json RegionJson(const RegionVerdict& v) {
  json j{{"bound", BoundKindName(v.kind)},
         {"verdict", VerdictName(v.verdict)},
         {"poly_lambda", v.poly_lambda}};
  j["threshold"] = v.threshold ? json(*v.threshold) : json(nullptr);
  if (!v.reason.empty()) j["reason"] = v.reason;
  return j;
}

inline json ClassificationJson(const BoundClassification& b) {
  json j{{"verdict", AtlasVerdictName(b.verdict)}};
  j["threshold"] = b.threshold ? json(*b.threshold) : json(nullptr);
  if (!b.reason.empty()) j["reason"] = b.reason;
  return j;
}

inline json ClassifyJson(const AcnPreset& preset, const Classification& cl) {
  return json{{"preset", preset.name},
              {"source", preset.source},
              {"mode", AtlasModeName(cl.mode)},
              {"params", ParamsJson(preset.params)},
              {"poly_lambda", cl.poly_lambda},
              {"counting", ClassificationJson(cl.counting)},
              {"trilemma", ClassificationJson(cl.trilemma)},
              {"dropping", ClassificationJson(cl.dropping)}};
}

}  // namespace internal

// Runs one configured subcommand, writing records to `out`. Returns the exit
// status; throws acnb::Error on invalid input.
namespace internal {

// Passes when the attack reaches the analytic lower bound within tolerance.
inline int AddVerdict(json& record, const AdvantageEstimate& est, const BoundResult& bound,
                      double tolerance) {
  const bool pass = est.ci_high + tolerance >= bound.delta;
  record["bound"] = BoundJson(bound);
  record["tolerance"] = tolerance;
  record["pass"] = pass;
  return pass ? kExitOk : kExitVerifyFailed;
}

}  // namespace internal

inline int Dispatch(const RunConfig& c, std::ostream& out) {
  Require(c.format == "json" || c.format == "csv", ErrorCode::kInvalidInput,
          "--format must be json or csv");
  if (c.subcommand == "bound") {
    out << internal::Bound(c).dump() << '\n';
    return kExitOk;
  }
  if (c.subcommand == "simulate") {
    out << internal::Simulate(c).dump() << '\n';
    return kExitOk;
  }
  if (c.subcommand == "verify") {
    const std::optional<BoundResult> bound = internal::MatchingBound(c);
    Require(bound.has_value(), ErrorCode::kInvalidInput,
            "no analytic bound for protocol '" + c.protocol + "' with attack '" + c.attack +
                "'");
    Require(c.tolerance >= 0.0, ErrorCode::kInvalidInput, "tolerance must be >= 0");
    Require(c.definition == "counting-form", ErrorCode::kInvalidInput,
            "verify uses the counting-form definition");
    AdvantageEstimate est;
    json record = internal::Simulate(c, &est);
    const int status = internal::AddVerdict(record, est, *bound, c.tolerance);
    out << record.dump() << '\n';
    return status;
  }
  if (c.subcommand == "region") {
    if (!c.lmax_range.empty() || !c.beta_range.empty() || c.format == "csv") {
      const auto [lo, hi] = internal::ParseIntRange(c.lmax_range.empty() ? "2:10" : c.lmax_range);
      const GridRange betas =
          internal::ParseRealRange(c.beta_range.empty() ? "0:1:0.05" : c.beta_range);
      EmitGrid(out, ComputeGrid(lo, hi, betas, c.n, c.lambda, c.poly_lambda));
      return kExitOk;
    }
    RegionPoint pt;
    pt.n = c.n;
    pt.l_max = c.l_max;
    pt.beta = c.beta;
    pt.p = internal::TotalP(c);
    pt.c_p = c.c_p;
    pt.out_per_round = c.out_rate;
    pt.lambda = c.lambda;
    pt.log_base = c.log_base;
    std::vector<BoundKind> kinds;
    if (c.kind.empty() || c.kind == "all") {
      kinds = {BoundKind::kCounting, BoundKind::kTrilemma, BoundKind::kDropping};
    } else {
      kinds = {ParseBoundKind(c.kind)};
    }
    for (BoundKind k : kinds) {
      out << internal::RegionJson(ImpossibilityRegion(k, pt, c.poly_lambda)).dump() << '\n';
    }
    return kExitOk;
  }
  if (c.subcommand == "atlas") {
    const AtlasMode mode = ParseAtlasMode(c.mode);
    std::vector<std::string> names;
    if (c.preset == "all") {
      names = PresetNames();
    } else {
      names = {c.preset};
    }
    if (c.format == "csv") out << "preset,mode,counting,trilemma,dropping\n";
    for (const std::string& name : names) {
      const AcnPreset preset = Preset(name, c.n, c.lambda);
      const Classification cl = Classify(preset, mode, c.lambda, c.poly_lambda);
      if (c.format == "csv") {
        out << name << ',' << AtlasModeName(mode) << ',' << AtlasVerdictName(cl.counting.verdict)
            << ',' << AtlasVerdictName(cl.trilemma.verdict) << ','
            << AtlasVerdictName(cl.dropping.verdict) << '\n';
      } else {
        out << internal::ClassifyJson(preset, cl).dump() << '\n';
      }
    }
    return kExitOk;
  }
  Fail(ErrorCode::kInvalidInput, "unknown subcommand '" + c.subcommand + "'");
}

namespace internal {

template <typename T>
void AddOptional(CLI::App* app, const std::string& flag, std::optional<T>& target,
                 const std::string& help) {
  app->add_option_function<T>(flag, [&target](const T& v) { target = v; }, help);
}

inline void AddProtocolOptions(CLI::App* app, RunConfig& c) {
  app->add_option("--protocol", c.protocol, "protocol model");
  app->add_option("--attack", c.attack, "attack strategy");
  app->add_option("--notion", c.notion, "privacy notion of the challenge pair");
  app->add_option("--lmax", c.l_max, "maximum latency in rounds");
  AddOptional(app, "--lexp", c.l_exp, "expected latency in rounds");
  app->add_option("--beta", c.beta, "dummy-send probability per user and round");
  AddOptional(app, "--preal", c.p_real, "real-send probability per user and round");
  AddOptional(app, "--p", c.p, "total send probability per user and round");
  app->add_option("--K", c.relays, "number of relays");
  app->add_option("--threshold", c.threshold, "threshold mix flush size");
  app->add_option("--copies", c.copies, "redundant first hops");
  app->add_option("--rounds", c.rounds, "simulation horizon in rounds");
  app->add_flag("--integrated", c.integrated, "users also relay traffic");
  app->add_option("--cp", c.c_p, "passively compromised relays");
  app->add_option("--ca", c.c_a, "actively compromised nodes");
  app->add_option("--link-control", c.link_control,
                  "dropping adversary controls the victim's first link");
  app->add_option("--trials", c.trials, "number of game trials");
  app->add_option("--definition", c.definition, "counting-form or optimality-form");
}

// Flat JSON config file: each key is a flag name without the leading dashes.
inline std::vector<std::string> ConfigArgs(const std::string& path) {
  std::ifstream in(path);
  Require(in.good(), ErrorCode::kInvalidInput, "cannot read config file '" + path + "'");
  json cfg;
  try {
    in >> cfg;
  } catch (const json::exception& e) {
    Fail(ErrorCode::kInvalidInput, "config file is not valid JSON: " + std::string(e.what()));
  }
  Require(cfg.is_object(), ErrorCode::kInvalidInput, "config file must hold a JSON object");
  std::vector<std::string> args;
  for (const auto& [key, value] : cfg.items()) {
    if (key == "subcommand") continue;
    Require(!value.is_object() && !value.is_array() && !value.is_null(),
            ErrorCode::kInvalidInput, "config value for '" + key + "' must be a scalar");
    std::string text;
    if (value.is_string()) {
      text = value.get<std::string>();
    } else if (value.is_boolean()) {
      text = value.get<bool>() ? "true" : "false";
    } else {
      text = value.dump();
    }
    args.push_back("--" + key + "=" + text);
  }
  return args;
}

inline std::optional<std::string> ConfigSubcommand(const std::string& path) {
  std::ifstream in(path);
  json cfg = json::parse(in, nullptr, false);
  if (cfg.is_object() && cfg.contains("subcommand") && cfg["subcommand"].is_string())
    return cfg["subcommand"].get<std::string>();
  return std::nullopt;
}

}  // namespace internal

inline const std::vector<std::string>& Subcommands() {
  static const std::vector<std::string> names = {"bound", "simulate", "verify", "region",
                                                 "atlas"};
  return names;
}

// Full command-line entry point.
inline int Main(std::vector<std::string> args, std::ostream& out, std::ostream& err) {
  try {
    // Pull out --config, then splice the file's values in before the user's
    // flags so that flags win.
    std::optional<std::string> config_path;
    std::vector<std::string> user;
    for (std::size_t i = 0; i < args.size(); ++i) {
      if (args[i] == "--config") {
        Require(i + 1 < args.size(), ErrorCode::kInvalidInput, "--config needs a path");
        config_path = args[++i];
      } else if (args[i].rfind("--config=", 0) == 0) {
        config_path = args[i].substr(9);
      } else {
        user.push_back(args[i]);
      }
    }
    std::vector<std::string> argv;
    std::size_t sub = 0;
    while (sub < user.size() &&
           std::find(Subcommands().begin(), Subcommands().end(), user[sub]) ==
               Subcommands().end()) {
      ++sub;
    }
    if (config_path) {
      const std::vector<std::string> from_file = internal::ConfigArgs(*config_path);
      if (sub == user.size()) {
        const auto name = internal::ConfigSubcommand(*config_path);
        Require(name.has_value(), ErrorCode::kInvalidInput, "no subcommand given");
        user.insert(user.begin(), *name);
        sub = 0;
      }
      user.insert(user.begin() + static_cast<std::ptrdiff_t>(sub) + 1, from_file.begin(),
                  from_file.end());
    }

    RunConfig c;
    std::optional<int> n_flag;
    CLI::App app{"Privacy-overhead bounds and attack simulations for anonymous communication",
                  "acnb"};
    app.option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
    app.require_subcommand(1);
    app.set_version_flag("--version", "acnb 1.0.0");
    app.set_help_flag("--help", "print help and exit");

    CLI::App* bound = app.add_subcommand("bound", "evaluate a closed-form bound");
    CLI::App* simulate = app.add_subcommand("simulate", "estimate attack advantage");
    CLI::App* verify = app.add_subcommand("verify", "check a simulation against its bound");
    CLI::App* region = app.add_subcommand("region", "impossibility verdicts or a CSV grid");
    CLI::App* atlas = app.add_subcommand("atlas", "classify named systems");
    for (CLI::App* s : {bound, simulate, verify, region, atlas}) {
      s->option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
      s->add_option("--seed", c.seed, "master seed");
      s->add_option("--format", c.format, "json or csv");
      s->add_option("--lambda", c.lambda, "security parameter");
      internal::AddOptional(s, "--poly-lambda", c.poly_lambda, "value of poly(lambda)");
      s->add_option("--log-base", c.log_base, "logarithm base");
    }
    for (CLI::App* s : {simulate, verify}) {
      internal::AddProtocolOptions(s, c);
      internal::AddOptional(s, "--n", n_flag, "number of users");
    }
    verify->add_option("--tolerance", c.tolerance, "slack allowed below the bound");

    bound->add_option("--kind", c.kind, "bound to evaluate");
    bound->add_option("--lmax", c.l_max, "maximum latency in rounds");
    bound->add_option("--beta", c.beta, "dummy-send probability");
    internal::AddOptional(bound, "--p", c.p, "total send probability");
    internal::AddOptional(bound, "--preal", c.p_real, "real-send probability");
    internal::AddOptional(bound, "--lexp", c.l_exp, "expected latency");
    internal::AddOptional(bound, "--n", n_flag, "number of users");
    bound->add_option("--cp", c.c_p, "passively compromised relays");
    bound->add_option("--K", c.relays, "number of relays");
    bound->add_option("--out", c.out, "real messages delivered");
    bound->add_option("--h", c.h, "honest senders");
    bound->add_option("--mu", c.mu, "maximum differing communications");

    region->add_option("--kind", c.kind, "counting, trilemma, dropping or all");
    region->add_option("--lmax", c.l_max, "maximum latency in rounds");
    region->add_option("--beta", c.beta, "dummy-send probability");
    internal::AddOptional(region, "--p", c.p, "total send probability");
    internal::AddOptional(region, "--preal", c.p_real, "real-send probability");
    internal::AddOptional(region, "--n", n_flag, "number of users");
    region->add_option("--cp", c.c_p, "passively compromised relays");
    region->add_option("--out-rate", c.out_rate, "real deliveries per round");
    region->add_option("--lmax-range", c.lmax_range, "grid l_max range lo:hi");
    region->add_option("--beta-range", c.beta_range, "grid beta range start:stop:step");

    atlas->add_option("--preset", c.preset, "system name or all");
    atlas->add_option("--mode", c.mode, "figure3 or general");
    internal::AddOptional(atlas, "--n", n_flag, "number of users");

    std::vector<std::string> reversed(user.rbegin(), user.rend());
    try {
      app.parse(reversed);
    } catch (const CLI::CallForHelp& e) {
      app.exit(e, out, err);
      return kExitOk;
    } catch (const CLI::CallForVersion&) {
      out << "acnb 1.0.0\n";
      return kExitOk;
    } catch (const CLI::ParseError& e) {
      err << "error: " << e.what() << '\n';
      return kExitUsage;
    }
    for (CLI::App* s : {bound, simulate, verify, region, atlas}) {
      if (s->parsed()) c.subcommand = s->get_name();
    }
    const bool population_default = c.subcommand == "region" || c.subcommand == "atlas";
    c.n = n_flag.value_or(population_default ? kDefaultPopulation : kDefaultGameUsers);
    return Dispatch(c, out);
  } catch (const Error& e) {
    err << "error (" << ErrorCodeName(e.code()) << "): " << e.what() << '\n';
    return kExitUsage;
  }
}

}  // namespace acnb::cli

#endif  // ACNB_CLI_HPP_
