// hmlbn: validate, run, analyze, check and dump H-MLBN scenarios.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "hmlbn/analysis.hpp"
#include "hmlbn/sequence.hpp"
#include "hmlbn/simulator.hpp"

namespace fs = std::filesystem;
using namespace hmlbn;

namespace {

constexpr int kPass = 0;
constexpr int kValidation = 1;
constexpr int kRuntime = 2;

struct Options {
  std::string scenario;
  std::optional<std::uint64_t> seed;
  std::string out;
  int k_min = 1;
  int k_max = 20;
  double alpha = 5.0;
  double zeta = 2.0;
  double ploss = 0.005;
  std::uint64_t trials = 0;
  std::string pattern;
  std::string trace;
  std::optional<double> until;
  std::string node;
};

// Loads and validates; prints diagnostics on failure.
std::optional<Scenario> load(const Options& o) {
  auto diags = validate_scenario_file(o.scenario);
  if (!diags.empty()) {
    std::cout << to_jsonl(diags);
    return std::nullopt;
  }
  auto s = load_scenario(o.scenario);
  if (o.seed) s.seed = *o.seed;
  return s;
}

void write_file(const fs::path& path, const std::string& text) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream os(path, std::ios::binary);
  if (!os) throw Error(Errc::InvalidArgument, "cannot write " + path.string());
  os << text;
}

int cmd_validate(const Options& o) {
  auto diags = validate_scenario_file(o.scenario);
  if (!o.out.empty()) write_file(fs::path(o.out) / "diagnostics.jsonl", to_jsonl(diags));
  if (!diags.empty()) {
    std::cout << to_jsonl(diags);
    return kValidation;
  }
  std::cout << "valid: " << o.scenario << '\n';
  return kPass;
}

int cmd_run(const Options& o) {
  auto s = load(o);
  if (!s) return kValidation;
  auto sim = simulate(*s);
  const fs::path dir = o.out.empty() ? fs::path(".") : fs::path(o.out);
  write_file(dir / "trace.jsonl", sim->trace().to_jsonl());
  const auto m = sim->metrics();
  write_file(dir / "metrics.csv", m.to_csv());
  std::cout << s->name << ": " << m.summary() << '\n';
  return kPass;
}

int cmd_analyze(const Options& o) {
  if (o.k_min < 1 || o.k_max < o.k_min) {
    std::cerr << "need 1 <= k-min <= k-max\n";
    return kValidation;
  }
  std::ostringstream csv;
  csv << std::setprecision(10);
  csv << "k,kind,d_m_upper,d_bar,delay_mean_ms,delay_sd_ms,loss";
  if (o.trials) csv << ",mc_mean,mc_mean_sigma,mc_max_bin_z";
  csv << '\n';
  double worst_z = 0.0;
  for (int k = o.k_min; k <= o.k_max; ++k) {
    for (auto kind : {PenaltyKind::FixedToMobile, PenaltyKind::MobileToMobile}) {
      const auto b = dm_upper_bound(k, kind);
      const auto d = delay_penalty(b.d_bar, o.alpha, o.zeta);
      csv << k << ',' << to_string(kind) << ',' << b.d_m << ',' << b.d_bar << ',' << d.mean_ms << ',' << d.sd_ms
          << ',' << loss_penalty(b.d_bar, o.ploss);
      if (o.trials) {
        if (b.d_m >= 1) {
          PenaltyModel model;
          model.k = k;
          model.d_m = b.d_m;
          model.kind = kind;
          const auto mc = monte_carlo_ctmc(model, o.trials, o.seed.value_or(1) + static_cast<std::uint64_t>(k));
          double z = 0.0;
          for (std::size_t j = 0; j < mc.pi.size(); ++j) {
            z = std::max(z, std::abs(mc.pi[j] - 1.0 / mc.pi.size()) / mc.sigma[j]);
          }
          worst_z = std::max(worst_z, z);
          csv << ',' << mc.mean << ',' << mc.mean_sigma << ',' << z;
        } else {
          csv << ",0,0,0";
        }
      }
      csv << '\n';
    }
  }
  const fs::path dir = o.out.empty() ? fs::path(".") : fs::path(o.out);
  write_file(dir / "penalty.csv", csv.str());
  std::cout << "wrote " << (dir / "penalty.csv").string() << " for k=" << o.k_min << ".." << o.k_max;
  if (o.trials) std::cout << ", worst Monte Carlo bin deviation " << std::setprecision(3) << worst_z << " sigma";
  std::cout << '\n';
  return kPass;
}

int cmd_check_sequence(const Options& o) {
  SequencePattern pattern;
  try {
    pattern = load_pattern(o.pattern);
  } catch (const Error& e) {
    std::cerr << e.what() << '\n';
    return kValidation;
  }
  Trace trace;
  if (!o.trace.empty()) {
    trace = Trace::load(o.trace);
  } else {
    auto s = load(o);
    if (!s) return kValidation;
    trace = simulate(*s)->trace();
  }
  const auto r = check_sequence(trace, pattern);
  std::cout << (r.pass ? "PASS " : "FAIL ") << r.diagnostic << '\n';
  return r.pass ? kPass : kRuntime;
}

int cmd_dump(const Options& o) {
  auto s = load(o);
  if (!s) return kValidation;
  Simulator sim(*s);
  sim.run_until(o.until.value_or(s->duration));
  std::ostringstream os;
  auto dump_node = [&](const Node& n) {
    os << "# " << n.name << " (" << to_string(n.role) << ", " << n.rid.to_string() << ") at t=" << sim.now() << '\n';
    switch (n.role) {
      case NodeRole::Aler:
        os << sim.aler(n.name).dump_fib();
        break;
      case NodeRole::Amrr:
        os << sim.amrr(n.name).dump();
        break;
      case NodeRole::Ler: {
        const auto& ler = sim.ler(n.name);
        os << "registration\tinterface\tlabel\tarea\tlast_heard\n";
        for (const auto& [p, r] : ler.registrations()) {
          os << p.to_string() << '\t' << r.interface_id << '\t' << r.label.value() << '\t' << r.advertised_area.value()
             << '\t' << r.last_heard << '\n';
        }
        os << "cache\torigin\tlabel\tarea\texpiry\n";
        for (const auto& [p, c] : ler.cache()) {
          os << p.to_string() << '\t' << c.binding.origin.to_string() << '\t' << c.binding.label.value() << '\t'
             << c.binding.area.value() << '\t' << c.expiry << '\n';
        }
        break;
      }
      case NodeRole::Lsr:
        os << "(no mobility state)\n";
        break;
    }
  };
  if (!o.node.empty()) {
    const Node* n = sim.graph().find(o.node);
    if (!n) {
      std::cerr << "unknown node " << o.node << '\n';
      return kValidation;
    }
    dump_node(*n);
  } else {
    for (const Node& n : sim.graph().nodes()) {
      if (n.role != NodeRole::Lsr) dump_node(n);
    }
  }
  if (o.out.empty()) {
    std::cout << os.str();
  } else {
    write_file(fs::path(o.out) / "dump.txt", os.str());
    std::cout << "wrote " << (fs::path(o.out) / "dump.txt").string() << '\n';
  }
  return kPass;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"H-MLBN discrete-event simulator"};
  app.require_subcommand(1);
  Options o;

  auto* validate = app.add_subcommand("validate", "Check a scenario file");
  validate->add_option("--scenario", o.scenario, "Scenario JSON")->required();
  validate->add_option("--out", o.out, "Also write diagnostics.jsonl here");

  auto* run = app.add_subcommand("run", "Simulate and write trace.jsonl and metrics.csv");
  run->add_option("--scenario", o.scenario, "Scenario JSON")->required();
  run->add_option("--seed", o.seed, "Override the scenario seed");
  run->add_option("--out", o.out, "Output directory");

  auto* analyze = app.add_subcommand("analyze", "Triangular-routing penalty table");
  analyze->add_option("--k-min", o.k_min, "Smallest diameter")->capture_default_str();
  analyze->add_option("--k-max", o.k_max, "Largest diameter")->capture_default_str();
  analyze->add_option("--alpha", o.alpha, "Mean per-hop delay (ms)")->capture_default_str();
  analyze->add_option("--zeta", o.zeta, "Per-hop delay s.d. (ms)")->capture_default_str();
  analyze->add_option("--ploss", o.ploss, "Per-hop loss probability")->capture_default_str();
  analyze->add_option("--trials", o.trials, "Monte Carlo jumps per row (0 = off)")->capture_default_str();
  analyze->add_option("--seed", o.seed, "Monte Carlo seed");
  analyze->add_option("--out", o.out, "Output directory");

  auto* check = app.add_subcommand("check-sequence", "Match a trace against an expected sequence");
  check->add_option("--pattern", o.pattern, "Pattern JSON")->required();
  check->add_option("--scenario", o.scenario, "Scenario to simulate");
  check->add_option("--trace", o.trace, "Existing trace.jsonl instead of simulating");
  check->add_option("--seed", o.seed, "Override the scenario seed");

  auto* dump = app.add_subcommand("dump", "Print FIB, AMRR and LER state");
  dump->add_option("--scenario", o.scenario, "Scenario JSON")->required();
  dump->add_option("--until", o.until, "Stop the simulation at this time");
  dump->add_option("--node", o.node, "Only this node");
  dump->add_option("--seed", o.seed, "Override the scenario seed");
  dump->add_option("--out", o.out, "Write dump.txt here");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kPass : kValidation;
  }

  try {
    if (*validate) return cmd_validate(o);
    if (*run) return cmd_run(o);
    if (*analyze) return cmd_analyze(o);
    if (*check) {
      if (o.scenario.empty() == o.trace.empty()) {
        std::cerr << "give exactly one of --scenario or --trace\n";
        return kValidation;
      }
      return cmd_check_sequence(o);
    }
    if (*dump) return cmd_dump(o);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return e.code() == Errc::ScenarioInvalid || e.code() == Errc::InvalidArgument ? kValidation : kRuntime;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kRuntime;
  }
  return kPass;
}
