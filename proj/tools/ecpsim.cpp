// Copyright 2026 The ecpsim Authors
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

// ecpsim: protocol runs, sweeps, claim verification and circuit files.
//
// Exit codes: 0 ok, 1 verification failure, 2 circuit parse error,
// 3 invalid arguments, 4 file I/O failure.

#include <algorithm>
#include <charconv>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "ecpsim/builtin_circuits.hpp"
#include "ecpsim/dsl.hpp"
#include "ecpsim/dsl_exec.hpp"
#include "ecpsim/monte_carlo.hpp"
#include "ecpsim/protocols.hpp"
#include "ecpsim/report.hpp"
#include "ecpsim/sweep.hpp"
#include "ecpsim/verify.hpp"

namespace {

using namespace ecpsim;

constexpr int kOk = 0;
constexpr int kVerifyFailed = 1;
constexpr int kParseError = 2;
constexpr int kBadArgs = 3;
constexpr int kIoError = 4;

constexpr const char* kSeedEnv = "ECPSIM_SEED";

struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct ArgError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_output(const std::optional<std::string>& path, const std::string& text) {
  if (!path) {
    std::cout << text;
    return;
  }
  std::ofstream out(*path, std::ios::binary);
  if (!out || !(out << text) || !out.flush()) throw IoError("cannot write " + *path);
}

std::uint64_t default_seed() {
  const char* env = std::getenv(kSeedEnv);
  if (!env || !*env) return 0;
  std::uint64_t v = 0;
  const std::string s(env);
  auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc() || res.ptr != s.data() + s.size()) {
    throw ArgError(std::string(kSeedEnv) + " is not a 64-bit unsigned integer");
  }
  return v;
}

AccountingMode parse_accounting(const std::string& s) {
  return s == "joint" ? AccountingMode::JointCoherent : AccountingMode::PaperBranch;
}

struct EngineFlags {
  std::string engine = "exact";
  std::uint64_t trials = 100000;
  std::optional<std::uint64_t> seed;

  void add(CLI::App* app) {
    app->add_option("--engine", engine, "exact or mc")->check(CLI::IsMember({"exact", "mc"}));
    app->add_option("--trials", trials, "Monte Carlo trials")->check(CLI::PositiveNumber);
    app->add_option("--seed", seed, std::string("Monte Carlo seed (default from ") + kSeedEnv + ", else 0)");
  }
  bool monte_carlo() const { return engine == "mc"; }
  std::uint64_t resolved_seed() const { return seed ? *seed : default_seed(); }
};

void print_summary(std::ostream& os, const ProtocolReport& r) {
  os << "p_total " << dsl::format_number(r.p_total);
  if (r.engine.monte_carlo) os << " +- " << dsl::format_number(r.engine.std_error);
  os << "\n";
  for (const auto& c : r.paper_comparison) {
    os << "  " << c.name << ": closed form " << dsl::format_number(c.paper_value) << ", simulated "
       << dsl::format_number(c.simulated_value) << ", delta " << dsl::format_number(c.delta()) << "\n";
  }
}

void emit_report(const ProtocolReport& r, const std::optional<std::string>& out) {
  write_output(out, to_json_text(r));
  print_summary(out ? std::cout : std::cerr, r);
}

// ------------------------------------------------------------------- run

struct RunFlags {
  std::string protocol;
  double alpha_sq = 0.0;
  std::optional<double> gamma_sq;
  std::optional<double> t1, t2;
  std::optional<int> rounds;
  std::string accounting = "branch";
  double eta = 1.0;
  EngineFlags engine;
  std::optional<std::string> out;
};

int cmd_run(const RunFlags& f) {
  const auto e = EntanglementParams::from_alpha_sq(f.alpha_sq);
  const auto model = DetectorModel::analytic(f.eta);
  const auto acc = parse_accounting(f.accounting);
  const bool ecp1 = f.protocol == "ecp1";
  if (ecp1 && f.rounds && *f.rounds != 1) throw ArgError("ecp1 has a single round; drop --rounds");
  if (!ecp1 && (f.t1 || f.t2)) throw ArgError("--t1/--t2 apply to ecp1; ecp2 uses the balancing schedule");
  const int rounds = f.rounds.value_or(1);
  if (rounds < 1) throw ArgError("--rounds must be at least 1");

  ProtocolReport r;
  if (!f.gamma_sq) {
    if (f.accounting == "joint") throw ArgError("joint accounting needs --gamma-sq");
    r = run_stripped(ecp1 ? Protocol::Ecp1 : Protocol::Ecp2, e, rounds, model);
  } else if (ecp1) {
    const double t = e.alpha_sq();
    r = run_ecp1(e, PolarizationParams::from_gamma_sq(*f.gamma_sq), f.t1.value_or(t), f.t2.value_or(t), acc, model);
  } else {
    r = run_ecp2(e, PolarizationParams::from_gamma_sq(*f.gamma_sq), vbs_schedule(e, rounds), rounds, acc, model);
  }
  if (f.engine.monte_carlo()) r = with_monte_carlo(std::move(r), f.engine.trials, f.engine.resolved_seed());
  emit_report(r, f.out);
  return kOk;
}

// ----------------------------------------------------------------- sweep

struct SweepFlags {
  std::string grid = "0.05:0.95:0.05";
  double eta = 0.8;
  std::vector<int> ks{1, 3, 5};
  std::optional<double> gamma_sq;
  EngineFlags engine;
  unsigned threads = 0;
  std::optional<std::string> out;
};

int cmd_sweep(const SweepFlags& f) {
  SweepSpec spec;
  std::vector<double> parts;
  std::stringstream ss(f.grid);
  for (std::string item; std::getline(ss, item, ':');) {
    double v = 0.0;
    auto res = std::from_chars(item.data(), item.data() + item.size(), v);
    if (item.empty() || res.ec != std::errc() || res.ptr != item.data() + item.size()) {
      throw ArgError("--grid expects start:stop:step");
    }
    parts.push_back(v);
  }
  if (parts.size() != 3) throw ArgError("--grid expects start:stop:step");
  spec.start = parts[0];
  spec.stop = parts[1];
  spec.step = parts[2];
  spec.eta = f.eta;
  spec.ks = f.ks;
  spec.gamma_sq = f.gamma_sq;
  spec.threads = f.threads;
  if (f.engine.monte_carlo()) {
    spec.mc_trials = f.engine.trials;
    spec.mc_seed = f.engine.resolved_seed();
  }
  write_output(f.out, sweep_csv(run_sweep(spec)));
  return kOk;
}

// ---------------------------------------------------------------- verify

struct VerifyFlags {
  double tolerance = kTolerance;
  bool inject_fault = false;
  std::optional<std::string> circuits;
};

int cmd_verify(const VerifyFlags& f) {
  verify::Options o;
  o.tolerance = f.tolerance;
  std::optional<std::string> dir = f.circuits;
#ifdef ECPSIM_CIRCUIT_DIR
  // source-tree circuits when they are still around, builtins otherwise
  if (!dir && std::filesystem::exists(ECPSIM_CIRCUIT_DIR "/ecp1.ecp") &&
      std::filesystem::exists(ECPSIM_CIRCUIT_DIR "/ecp2.ecp")) {
    dir = ECPSIM_CIRCUIT_DIR;
  }
#endif
  std::string ecp1_text, ecp2_text;
  if (dir) {
    ecp1_text = read_file(*dir + "/ecp1.ecp");
    ecp2_text = read_file(*dir + "/ecp2.ecp");
    o.ecp1_text = ecp1_text;
    o.ecp2_text = ecp2_text;
  }
  std::optional<fault_injection::ScopedSymmetricBs> fault;
  if (f.inject_fault) fault.emplace();

  std::cout << "tolerance " << dsl::format_number(o.tol()) << "\n";
  bool ok = true;
  int informational = 0;
  for (const auto& c : verify::run_all(o)) {
    ok = ok && c.passed();
    std::cout << "AC" << c.id << " " << (c.passed() ? "PASS" : "FAIL") << "  " << c.title << "\n";
    for (const auto& claim : c.claims) {
      informational += claim.verdict == verify::Verdict::Informational ? 1 : 0;
      std::cout << "    [" << verify::to_string(claim.verdict) << "] " << claim.name << ": reference "
                << dsl::format_number(claim.reference) << ", simulated " << dsl::format_number(claim.simulated)
                << ", delta " << dsl::format_number(claim.delta()) << "\n";
    }
  }
  std::cout << (ok ? "all engine checks passed" : "engine checks FAILED") << "; " << informational
            << " informational discrepancies\n";
  return ok ? kOk : kVerifyFailed;
}

// ------------------------------------------------------------ exec / fmt

struct ExecFlags {
  std::string file;
  std::optional<double> alpha_sq, gamma_sq, t1, t2;
  std::vector<std::string> params;
  int rounds = 1;
  std::string accounting = "branch";
  double eta = 1.0;
  EngineFlags engine;
  std::optional<std::string> out;
};

int cmd_exec(const ExecFlags& f) {
  const auto doc = dsl::parse(read_file(f.file));
  const auto declared = doc.params();
  auto is_declared = [&](const std::string& p) { return std::find(declared.begin(), declared.end(), p) != declared.end(); };

  dsl::Bindings b;
  if (f.alpha_sq) b["alpha_sq"] = *f.alpha_sq;
  if (f.gamma_sq) b["gamma_sq"] = *f.gamma_sq;
  if (f.t1) b["t1"] = *f.t1;
  if (f.t2) b["t2"] = *f.t2;
  for (const auto& kv : f.params) {
    const auto eq = kv.find('=');
    double v = 0.0;
    const std::string value = eq == std::string::npos ? "" : kv.substr(eq + 1);
    auto res = std::from_chars(value.data(), value.data() + value.size(), v);
    if (eq == std::string::npos || value.empty() || res.ec != std::errc() || res.ptr != value.data() + value.size()) {
      throw ArgError("--param expects name=value, got '" + kv + "'");
    }
    b[kv.substr(0, eq)] = v;
  }

  dsl::ExecOptions x;
  x.accounting = parse_accounting(f.accounting);
  x.rounds = f.rounds;
  x.eta = f.eta;
  if (f.alpha_sq) {
    const auto e = EntanglementParams::from_alpha_sq(*f.alpha_sq);
    for (const char* t : {"t1", "t2"}) {
      if (is_declared(t) && !b.count(t)) b[t] = e.alpha_sq();
    }
    if (is_declared("t_plus") || is_declared("t_minus")) {
      const auto sched = vbs_schedule(e, f.rounds);
      if (is_declared("t_plus") && !b.count("t_plus")) x.per_round["t_plus"] = sched.plus;
      if (is_declared("t_minus") && !b.count("t_minus")) x.per_round["t_minus"] = sched.minus;
    }
  }
  if (f.engine.monte_carlo()) {
    x.mc_trials = f.engine.trials;
    x.mc_seed = f.engine.resolved_seed();
  }
  emit_report(dsl::execute(doc, b, x), f.out);
  return kOk;
}

int cmd_fmt(const std::string& file, const std::optional<std::string>& out) {
  write_output(out, dsl::serialize(dsl::parse(read_file(file))));
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Few-photon Fock-state simulator for heralded entanglement concentration"};
  app.require_subcommand(1);

  RunFlags run;
  auto* run_cmd = app.add_subcommand("run", "run one protocol and write its report");
  run_cmd->add_option("--protocol", run.protocol, "ecp1 or ecp2")->required()->check(CLI::IsMember({"ecp1", "ecp2"}));
  run_cmd->add_option("--alpha-sq", run.alpha_sq, "|alpha|^2")->required()->check(CLI::Range(0.0, 1.0));
  run_cmd->add_option("--gamma-sq", run.gamma_sq, "|gamma|^2; omit for the polarization-free run")
      ->check(CLI::Range(0.0, 1.0));
  run_cmd->add_option("--t1", run.t1, "VBS1 transmission (ecp1, default |alpha|^2)")->check(CLI::Range(0.0, 1.0));
  run_cmd->add_option("--t2", run.t2, "VBS2 transmission (ecp1, default |alpha|^2)")->check(CLI::Range(0.0, 1.0));
  run_cmd->add_option("--rounds", run.rounds, "concentration rounds (ecp2)");
  run_cmd->add_option("--accounting", run.accounting, "branch or joint")->check(CLI::IsMember({"branch", "joint"}));
  run_cmd->add_option("--eta", run.eta, "detector efficiency")->check(CLI::Range(0.0, 1.0));
  run.engine.add(run_cmd);
  run_cmd->add_option("--out", run.out, "report path (default stdout)");

  SweepFlags sweep;
  auto* sweep_cmd = app.add_subcommand("sweep", "P_total over an alpha^2 grid as CSV");
  sweep_cmd->add_option("--grid", sweep.grid, "start:stop:step of alpha^2");
  sweep_cmd->add_option("--eta", sweep.eta, "detector efficiency")->check(CLI::Range(0.0, 1.0));
  sweep_cmd->add_option("--k", sweep.ks, "round counts")->delimiter(',');
  sweep_cmd->add_option("--gamma-sq", sweep.gamma_sq, "simulate with polarization instead of the reference run")
      ->check(CLI::Range(0.0, 1.0));
  sweep.engine.add(sweep_cmd);
  sweep_cmd->add_option("--threads", sweep.threads, "worker threads (0 = all cores)");
  sweep_cmd->add_option("--out", sweep.out, "CSV path (default stdout)");

  VerifyFlags ver;
  auto* verify_cmd = app.add_subcommand("verify", "check every claim and print a pass/fail table");
  verify_cmd->add_option("--tolerance", ver.tolerance, "absolute tolerance; only loosens the default");
  verify_cmd->add_option("--circuits", ver.circuits, "directory holding ecp1.ecp and ecp2.ecp");
  verify_cmd->add_flag("--inject-bs-fault", ver.inject_fault)->group("");

  ExecFlags ex;
  auto* exec_cmd = app.add_subcommand("exec", "execute a circuit file");
  exec_cmd->add_option("file", ex.file, "circuit file (.ecp)")->required();
  exec_cmd->add_option("--alpha-sq", ex.alpha_sq, "binds alpha_sq");
  exec_cmd->add_option("--gamma-sq", ex.gamma_sq, "binds gamma_sq");
  exec_cmd->add_option("--t1", ex.t1, "binds t1");
  exec_cmd->add_option("--t2", ex.t2, "binds t2");
  exec_cmd->add_option("--param", ex.params, "extra binding name=value");
  exec_cmd->add_option("--rounds", ex.rounds, "rounds")->check(CLI::PositiveNumber);
  exec_cmd->add_option("--accounting", ex.accounting, "branch or joint")->check(CLI::IsMember({"branch", "joint"}));
  exec_cmd->add_option("--eta", ex.eta, "detector efficiency")->check(CLI::Range(0.0, 1.0));
  ex.engine.add(exec_cmd);
  exec_cmd->add_option("--out", ex.out, "report path (default stdout)");

  std::string fmt_file;
  std::optional<std::string> fmt_out;
  auto* fmt_cmd = app.add_subcommand("fmt", "print a circuit file in canonical form");
  fmt_cmd->add_option("file", fmt_file, "circuit file (.ecp)")->required();
  fmt_cmd->add_option("--out", fmt_out, "output path (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    std::cerr << app.help();
    return kBadArgs;
  }

  try {
    if (*run_cmd) return cmd_run(run);
    if (*sweep_cmd) return cmd_sweep(sweep);
    if (*verify_cmd) return cmd_verify(ver);
    if (*exec_cmd) return cmd_exec(ex);
    if (*fmt_cmd) return cmd_fmt(fmt_file, fmt_out);
  } catch (const ParseError& e) {
    std::cerr << "error: " << (*exec_cmd ? ex.file : fmt_file) << ": " << e.what() << "\n";
    return kParseError;
  } catch (const IoError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kIoError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kBadArgs;
  }
  return kBadArgs;
}
