// Copyright 2026 The lhiggs Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <CLI11.hpp>

#include <algorithm>
#include <iostream>
#include <optional>
#include <string>

#include "lhiggs/experiments.hpp"

namespace {

using lhiggs::exp::CommandContext;
using lhiggs::exp::RunConfig;

struct CommonFlags {
  std::string config;
  std::optional<std::uint64_t> seed;
  std::string out;
  bool quick = false;
};

void add_common(CLI::App* sub, CommonFlags& f) {
  sub->add_option("--config", f.config, "Run configuration (TOML-style key = value with [sections])");
  sub->add_option("--seed", f.seed, "Override sampler.seed");
  sub->add_option("--out", f.out, "Override output.dir");
  sub->add_flag("--quick", f.quick, "Reduced workload");
}

CommandContext make_context(const CommonFlags& f) {
  CommandContext ctx;
  if (!f.config.empty()) ctx.cfg = RunConfig::load(f.config);
  if (f.seed) ctx.cfg.sampler.seed = *f.seed;
  if (!f.out.empty()) ctx.cfg.out = f.out;
  ctx.quick = f.quick;
  if (f.quick) {
    auto& s = ctx.cfg.sampler;
    s.sweeps = std::max(s.burn_in + static_cast<long>(s.bins) * s.thin * 16, s.burn_in + (s.sweeps - s.burn_in) / 5);
  }
  ctx.cfg.validate();
  return ctx;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Simulation and expansion engine for the compact abelian lattice Higgs model with charge k"};
  app.require_subcommand(1);
  CommonFlags flags;
  std::string fault;

  auto* validate = app.add_subcommand("validate", "Cross-validation and invariant suite");
  add_common(validate, flags);
  validate->add_option("--inject-fault", fault, "Corrupt a component to exercise failure paths (bessel)");
  auto* mf = app.add_subcommand("mf-ratio", "Marcu-Fredenhagen ratio series versus n");
  add_common(mf, flags);
  auto* wilson = app.add_subcommand("wilson-scan", "Rectangle Wilson loops and decay fit");
  add_common(wilson, flags);
  auto* phase = app.add_subcommand("phase-scan", "Smallness quantities over a (beta, kappa) grid");
  add_common(phase, flags);
  auto* currents = app.add_subcommand("currents", "Current enumeration report on a named tiny complex");
  add_common(currents, flags);
  auto* polymers = app.add_subcommand("polymers", "Polymer weights against their Hoelder bounds");
  add_common(polymers, flags);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : lhiggs::exp::kInvalidInput;
  }

  return lhiggs::exp::guarded(
      [&]() -> int {
        const CommandContext ctx = make_context(flags);
        if (validate->parsed()) return lhiggs::exp::cmd_validate(ctx, {ctx.quick, fault});
        if (mf->parsed()) return lhiggs::exp::cmd_mf_ratio(ctx);
        if (wilson->parsed()) return lhiggs::exp::cmd_wilson_scan(ctx);
        if (phase->parsed()) return lhiggs::exp::cmd_phase_scan(ctx);
        if (currents->parsed()) return lhiggs::exp::cmd_currents(ctx);
        return lhiggs::exp::cmd_polymers(ctx);
      },
      std::cerr);
}
