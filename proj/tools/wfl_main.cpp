// Copyright 2026 The wfl Authors.
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

// wfl: run experiments, emit designs, verify bounds, inspect IDX files.
//
//   wfl run --config exp.ini --set experiment.rounds=50
//   wfl optimize --config exp.ini --seed 3 -o design.json
//   wfl verify --config exp.ini --radio.cell_radius_m=1200
//   wfl inspect-idx data/mnist-1k-images-idx3-ubyte

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "wfl/design/digital_opt.hpp"
#include "wfl/design/io.hpp"
#include "wfl/design/ota_opt.hpp"
#include "wfl/sim/config.hpp"
#include "wfl/sim/data.hpp"
#include "wfl/sim/experiment.hpp"

namespace {

struct Common {
  std::string config;
  std::vector<std::string> sets;
};

void add_common(CLI::App* cmd, Common& c) {
  cmd->add_option("-c,--config", c.config, "INI experiment file");
  cmd->add_option("--set", c.sets, "override, section.key=value (repeatable)");
  // Any --section.key=value or --section.key value is an override too.
  cmd->allow_extras();
}

std::vector<std::string> overrides(const CLI::App* cmd, const Common& c) {
  std::vector<std::string> out = c.sets;
  const std::vector<std::string> extra = cmd->remaining();
  for (std::size_t i = 0; i < extra.size(); ++i) {
    const std::string& a = extra[i];
    if (a.rfind("--", 0) != 0 || a.find('.') == std::string::npos)
      throw wfl::Error(wfl::ErrorCode::kInvalidConfig, "unexpected argument " + a);
    std::string kv = a.substr(2);
    if (kv.find('=') == std::string::npos) {
      if (i + 1 >= extra.size())
        throw wfl::Error(wfl::ErrorCode::kInvalidConfig, a + " needs a value");
      kv += "=" + extra[++i];
    }
    out.push_back(kv);
  }
  return out;
}

wfl::ExperimentConfig load(const CLI::App* cmd, const Common& c) {
  const auto o = overrides(cmd, c);
  if (c.config.empty()) {
    std::istringstream empty;
    return wfl::parse_config(empty, o);
  }
  return wfl::load_config(c.config, o);
}

// "-" is stdout.
template <typename F>
void with_output(const std::string& path, F&& write) {
  if (path == "-") {
    write(std::cout);
    std::cout.flush();
    return;
  }
  std::ofstream f(path, std::ios::binary);
  if (!f) throw wfl::Error(wfl::ErrorCode::kInvalidConfig, "cannot write " + path);
  write(f);
}

int cmd_optimize(const wfl::ExperimentConfig& cfg, std::uint64_t seed, const std::string& out) {
  using wfl::DesignSource;
  if (cfg.scheme == wfl::Scheme::kIdeal)
    throw wfl::Error(wfl::ErrorCode::kInvalidConfig, "the ideal scheme has no design");
  const wfl::ExperimentSetup setup = wfl::prepare_experiment(cfg);
  const wfl::Scenario sc = wfl::build_scenario(cfg, setup, seed);
  const std::string source(wfl::to_string(cfg.design));
  const wfl::DesignFile file =
      cfg.scheme == wfl::Scheme::kOta
          ? wfl::to_design_file(sc.ota, sc.inputs.profiles, source, sc.design_objective)
          : wfl::to_design_file(sc.digital, sc.inputs.profiles, source, sc.design_objective);
  with_output(out, [&](std::ostream& os) {
    os << wfl::write_design_json(file, sc.inputs.profiles, sc.inputs.link) << '\n';
  });
  return 0;
}

int cmd_inspect(const std::string& path) {
  const wfl::IdxHeader h = wfl::read_idx_header(path);
  std::cout << "file: " << path << '\n'
            << "magic: 0x" << std::hex << h.magic << std::dec << '\n'
            << "type: 0x" << std::hex << static_cast<int>(h.type_code) << std::dec << '\n'
            << "dims:";
  for (auto d : h.dims) std::cout << ' ' << d;
  std::cout << "\nbytes: " << h.file_bytes << '\n';
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Wireless federated learning simulator"};
  app.require_subcommand(1);

  Common run_opts, opt_opts, ver_opts;
  std::string run_out, opt_out = "-", ver_out = "-";
  std::uint64_t opt_seed = 0;
  bool opt_seed_set = false;
  std::size_t replicas = 0;
  std::string idx_path;

  CLI::App* run = app.add_subcommand("run", "simulate training and write per-round metrics CSV");
  add_common(run, run_opts);
  run->add_option("-o,--output", run_out, "CSV path, - for stdout (default: experiment.output)");
  bool verbose = false;
  run->add_flag("-v,--verbose", verbose, "print the resolved constants to stderr");

  CLI::App* opt = app.add_subcommand("optimize", "compute a design and write it as JSON");
  add_common(opt, opt_opts);
  opt->add_option("-o,--output", opt_out, "JSON path, - for stdout");
  opt->add_option("--seed", opt_seed, "placement seed (default: first configured seed)")
      ->each([&](const std::string&) { opt_seed_set = true; });

  CLI::App* ver = app.add_subcommand("verify", "Monte-Carlo check of the variance and error bounds");
  add_common(ver, ver_opts);
  ver->add_option("-o,--output", ver_out, "report path, - for stdout");
  ver->add_option("--replicas", replicas, "Monte-Carlo replicas (default: verify.replicas)");

  CLI::App* idx = app.add_subcommand("inspect-idx", "print an IDX file header");
  idx->add_option("path", idx_path, "IDX file")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (run->parsed()) {
      const wfl::ExperimentConfig cfg = load(run, run_opts);
      const wfl::ExperimentSetup setup = wfl::prepare_experiment(cfg);
      if (verbose) wfl::describe_setup(std::cerr, setup);
      with_output(run_out.empty() ? cfg.output : run_out,
                  [&](std::ostream& os) { wfl::run_experiment(cfg, setup, os); });
      return 0;
    }
    if (opt->parsed()) {
      const wfl::ExperimentConfig cfg = load(opt, opt_opts);
      return cmd_optimize(cfg, opt_seed_set ? opt_seed : cfg.seeds.front(), opt_out);
    }
    if (ver->parsed()) {
      wfl::ExperimentConfig cfg = load(ver, ver_opts);
      if (replicas != 0) cfg.verify_replicas = replicas;
      cfg.validate();
      const wfl::VerifyReport report = wfl::verify_bounds(cfg);
      with_output(ver_out, [&](std::ostream& os) { wfl::write_verify_csv(os, report); });
      return report.all_pass() ? 0 : 1;
    }
    if (idx->parsed()) return cmd_inspect(idx_path);
  } catch (const wfl::Error& e) {
    std::cerr << "wfl: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "wfl: " << e.what() << '\n';
    return 2;
  }
  return 0;
}
