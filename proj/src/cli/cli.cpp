// Copyright 2026 The axnas Authors
// SPDX-License-Identifier: Apache-2.0
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "axnas/cli/cli.hpp"

#include <chrono>
#include <ctime>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <optional>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "axnas/errors.hpp"
#include "axnas/experiment/energy.hpp"
#include "axnas/experiment/macs.hpp"
#include "axnas/experiment/pipeline.hpp"
#include "axnas/mult/error_metrics.hpp"
#include "axnas/tensor/checkpoint.hpp"

namespace axnas::cli {
namespace {

namespace fs = std::filesystem;
using nlohmann::json;

std::string utc_now() {
  const std::time_t t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&t, &tm);
  std::ostringstream os;
  os << std::put_time(&tm, "%Y-%m-%dT%H:%M:%SZ");
  return os.str();
}

/// `path` with its extension replaced by `suffix` (e.g. ".log.csv").
fs::path sibling(const fs::path& path, const std::string& suffix) {
  fs::path p = path;
  p.replace_extension();
  p += suffix;
  return p;
}

void ensure_parent(const fs::path& p) {
  if (p.has_parent_path()) fs::create_directories(p.parent_path());
}

void write_json(const json& j, const fs::path& path) {
  ensure_parent(path);
  std::ofstream out(path);
  if (!out) throw std::runtime_error(path.string() + ": cannot write");
  out << j.dump(2) << '\n';
}

json multiplier_json(const ExecMode& mode) {
  if (const auto* q = std::get_if<Quant8>(&mode)) {
    return {{"name", q->multiplier->name()},
            {"checksum", experiment::hex64(q->multiplier->checksum())},
            {"energy_per_op", q->multiplier->energy_per_op()}};
  }
  return {{"name", "fp32"}, {"checksum", nullptr}};
}

std::string multiplier_label(const ExecMode& mode) {
  if (const auto* q = std::get_if<Quant8>(&mode)) return q->multiplier->name();
  return "fp32";
}

/// The command's inputs and outputs; the only file carrying timestamps.
struct Manifest {
  json j;
  Manifest(const std::string& command, const std::vector<std::string>& args) {
    j["command"] = command;
    j["argv"] = args;
    j["version"] = AXNAS_VERSION;
    j["started_at"] = utc_now();
  }
  void config(const std::string& source, const experiment::RunConfig& rc) {
    j["config_file"] = source;
    j["config_hash"] = experiment::config_hash(rc.resolved);
  }
  void write(const fs::path& path) {
    j["finished_at"] = utc_now();
    write_json(j, path);
  }
};

json overrides(std::optional<std::uint64_t> seed, const std::optional<std::string>& multiplier,
               const char* section) {
  json o = json::object();
  if (seed) o[section]["seed"] = *seed;
  if (multiplier) o[section]["multiplier"] = *multiplier;
  return o;
}

int cmd_search(const std::string& config_path, std::optional<std::uint64_t> seed,
               const std::optional<std::string>& multiplier, const fs::path& out_path,
               const std::vector<std::string>& args, std::ostream& out) {
  Manifest man("search", args);
  const auto rc = experiment::load_run_config(config_path, overrides(seed, multiplier, "search"));
  man.config(config_path, rc);
  const auto data = experiment::load_dataset(rc.dataset);
  const auto res = experiment::run_search(rc.search, data);

  const fs::path log_path = sibling(out_path, ".log.csv");
  const fs::path man_path = sibling(out_path, ".manifest.json");
  darts::GenotypeProvenance prov{multiplier_label(rc.search.mode), rc.search.seed,
                                 experiment::config_hash(rc.resolved),
                                 man_path.filename().string()};
  ensure_parent(out_path);
  darts::save_genotype(res.genotype, prov, out_path);
  experiment::write_log(res.log, log_path);

  man.j["seed"] = rc.search.seed;
  man.j["multiplier"] = multiplier_json(rc.search.mode);
  man.j["search_seconds"] = res.seconds;
  man.j["outputs"] = {{"genotype", out_path.string()}, {"log", log_path.string()}};
  man.write(man_path);
  out << "genotype: " << darts::genotype_string(res.genotype) << '\n'
      << "wrote " << out_path.string() << " (" << res.seconds << " s)\n";
  return kExitOk;
}

int cmd_train(const fs::path& genotype_path, const std::string& config_path,
              std::optional<std::uint64_t> seed, const std::optional<std::string>& multiplier,
              const fs::path& prefix, const std::vector<std::string>& args, std::ostream& out) {
  Manifest man("train", args);
  const auto rc = experiment::load_run_config(config_path, overrides(seed, multiplier, "eval"));
  man.config(config_path, rc);
  const auto genotype = darts::load_genotype(genotype_path);
  const auto data = experiment::load_dataset(rc.dataset);
  const auto res = experiment::run_eval(genotype, rc.eval, data);

  const fs::path ckpt = sibling(prefix, ".ckpt");
  const fs::path result = sibling(prefix, ".result.json");
  const fs::path log_path = sibling(prefix, ".log.csv");
  const fs::path man_path = sibling(prefix, ".manifest.json");
  ensure_parent(ckpt);
  checkpoint::save(*res.network, ckpt);
  experiment::write_log(res.log, log_path);
  write_json({{"test_accuracy", res.test_accuracy},
              {"parameters", res.parameters},
              {"genotype", darts::genotype_string(genotype)},
              {"multiplier", multiplier_json(rc.eval.mode)},
              {"seed", rc.eval.seed},
              {"config_hash", experiment::config_hash(rc.resolved)},
              {"manifest", man_path.filename().string()}},
             result);

  man.j["seed"] = rc.eval.seed;
  man.j["multiplier"] = multiplier_json(rc.eval.mode);
  man.j["genotype_file"] = genotype_path.string();
  man.j["train_seconds"] = res.seconds;
  man.j["outputs"] = {{"checkpoint", ckpt.string()},
                      {"result", result.string()},
                      {"log", log_path.string()}};
  man.write(man_path);
  out << "test accuracy: " << std::fixed << std::setprecision(2) << res.test_accuracy << "%\n"
      << "parameters: " << res.parameters << '\n'
      << "wrote " << ckpt.string() << '\n';
  return kExitOk;
}

int cmd_mult_analyze(const std::string& name, std::optional<double> energy,
                     const std::optional<fs::path>& dump, bool as_json, std::ostream& out) {
  const auto m = mult::resolve_multiplier(name, energy);
  const auto em = mult::compute_error_metrics(*m);
  if (dump) {
    ensure_parent(*dump);
    mult::save_multiplier_binary(*m, *dump);
  }
  const auto exact8 = mult::build_builtin_multiplier(mult::BuiltinKind::exact());
  const double savings = 100.0 * (1.0 - m->energy_per_op() / exact8.energy_per_op());
  if (as_json) {
    out << json{{"name", m->name()},
                {"checksum", experiment::hex64(m->checksum())},
                {"mre_pct", em.mre_pct},
                {"ep_pct", em.ep_pct},
                {"mae_pct", em.mae_pct},
                {"wce_pct", em.wce_pct},
                {"energy_per_op", m->energy_per_op()},
                {"savings_vs_exact8_pct", savings}}
               .dump(2)
        << '\n';
    return kExitOk;
  }
  out << std::fixed << std::setprecision(4) << "multiplier: " << m->name() << '\n'
      << "checksum:   " << experiment::hex64(m->checksum()) << '\n'
      << "MRE [%]:    " << em.mre_pct << '\n'
      << "EP [%]:     " << em.ep_pct << '\n'
      << "MAE [%]:    " << em.mae_pct << '\n'
      << "WCE [%]:    " << em.wce_pct << '\n'
      << "energy/op:  " << m->energy_per_op() << '\n'
      << "savings vs exact 8-bit [%]: " << std::setprecision(2) << savings << '\n';
  return kExitOk;
}

int cmd_energy(const fs::path& genotype_path, const std::string& config_path,
               const std::optional<std::string>& multiplier, std::optional<double> fp32_factor,
               const std::optional<fs::path>& out_path, const std::vector<std::string>& args,
               std::ostream& out) {
  Manifest man("energy", args);
  json o = json::object();
  if (fp32_factor) o["energy"]["fp32_factor"] = *fp32_factor;
  const auto rc = experiment::load_run_config(config_path, o);
  man.config(config_path, rc);
  const auto genotype = darts::load_genotype(genotype_path);

  // Pricing uses the flag, else the eval multiplier, else the exact one.
  std::string mname = "exact";
  if (multiplier) {
    mname = *multiplier;
  } else if (const auto* q = std::get_if<Quant8>(&rc.eval.mode)) {
    mname = q->multiplier->name();
  }
  const auto m = mult::resolve_multiplier(mname);
  const auto exact8 = mult::build_builtin_multiplier(mult::BuiltinKind::exact());

  Rng rng(rc.eval.seed);
  experiment::EvalShape shape;
  shape.cells = rc.eval.cells;
  shape.init_channels = rc.eval.init_channels;
  shape.in_channels = rc.dataset.channels;
  shape.num_classes = rc.dataset.num_classes;
  shape.stem_multiplier = rc.eval.stem_multiplier;
  shape.approx_preprocess = rc.eval.approx_preprocess;
  shape.auxiliary = false;  // training-only branch
  experiment::EvalNetwork net(genotype, shape, rng);
  const auto counts = experiment::count_macs(net, rc.dataset.channels, rc.dataset.image_size,
                                             rc.dataset.image_size);
  const auto report = experiment::energy_report(counts, *m, exact8, rc.fp32_factor);

  json j = experiment::energy_report_to_json(report);
  j["multiplier"] = {{"name", m->name()},
                     {"checksum", experiment::hex64(m->checksum())},
                     {"energy_per_op", m->energy_per_op()}};
  j["fp32_factor"] = rc.fp32_factor;
  j["genotype"] = darts::genotype_string(genotype);
  j["config_hash"] = experiment::config_hash(rc.resolved);
  if (out_path) {
    const fs::path man_path = sibling(*out_path, ".manifest.json");
    j["manifest"] = man_path.filename().string();
    write_json(j, *out_path);
    man.j["multiplier"] = j["multiplier"];
    man.j["genotype_file"] = genotype_path.string();
    man.j["outputs"] = {{"report", out_path->string()}};
    man.write(man_path);
  }
  out << j.dump(2) << '\n';
  return kExitOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Differentiable architecture search with approximate multipliers", "axnas"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(AXNAS_VERSION));

  std::string config_path;
  fs::path genotype_path;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> multiplier;

  auto* search = app.add_subcommand("search", "Run the architecture search stage");
  fs::path search_out = "genotype.json";
  search->add_option("config", config_path, "Config file (.toml/.json) or preset name")
      ->required();
  search->add_option("--seed", seed, "Override search.seed");
  search->add_option("--multiplier", multiplier, "fp32, a builtin multiplier, or a table file");
  search->add_option("--out", search_out, "Genotype output path")->capture_default_str();

  auto* train = app.add_subcommand("train", "Train a genotype from scratch and test it");
  fs::path train_out = "model";
  train->add_option("genotype", genotype_path, "Genotype JSON file")->required();
  train->add_option("config", config_path, "Config file (.toml/.json) or preset name")
      ->required();
  train->add_option("--seed", seed, "Override eval.seed");
  train->add_option("--multiplier", multiplier, "fp32, a builtin multiplier, or a table file");
  train->add_option("--out", train_out,
                    "Output prefix for .ckpt, .result.json, .log.csv and .manifest.json")
      ->capture_default_str();

  auto* analyze = app.add_subcommand("mult-analyze", "Error metrics and energy of a multiplier");
  std::string mult_name;
  std::optional<double> mult_energy;
  std::optional<fs::path> table_dump;
  bool as_json = false;
  analyze->add_option("multiplier", mult_name, "Builtin multiplier name or table file")
      ->required();
  analyze->add_option("--energy", mult_energy, "Energy per operation for a table file");
  analyze->add_option("--table-dump", table_dump, "Write the table in the binary format");
  analyze->add_flag("--json", as_json, "Print JSON instead of text");

  auto* energy = app.add_subcommand("energy", "Operation counts and energy of a genotype");
  std::optional<double> fp32_factor;
  std::optional<fs::path> energy_out;
  energy->add_option("genotype", genotype_path, "Genotype JSON file")->required();
  energy->add_option("config", config_path, "Config file (.toml/.json) or preset name")
      ->required();
  energy->add_option("--multiplier", multiplier, "Builtin multiplier name or table file");
  energy->add_option("--fp32-factor", fp32_factor, "FP32 to exact 8-bit energy ratio");
  energy->add_option("--out", energy_out, "Also write the report to this file");

  std::vector<std::string> argv_tail(args.begin() + (args.empty() ? 0 : 1), args.end());
  std::reverse(argv_tail.begin(), argv_tail.end());
  try {
    app.parse(argv_tail);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitConfig;
  }

  try {
    if (search->parsed()) {
      return cmd_search(config_path, seed, multiplier, search_out, args, out);
    }
    if (train->parsed()) {
      return cmd_train(genotype_path, config_path, seed, multiplier, train_out, args, out);
    }
    if (analyze->parsed()) return cmd_mult_analyze(mult_name, mult_energy, table_dump, as_json, out);
    if (energy->parsed()) {
      return cmd_energy(genotype_path, config_path, multiplier, fp32_factor, energy_out, args,
                        out);
    }
  } catch (const MultiplierError& e) {
    err << "multiplier error: " << e.what() << '\n';
    return kExitMultiplier;
  } catch (const DataError& e) {
    err << "data error: " << e.what() << '\n';
    return kExitData;
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const ShapeError& e) {
    err << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitFailure;
  }
  return kExitFailure;
}

}  // namespace axnas::cli
