#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "ewgame/ewgame.hpp"
#include "ewgame/io.hpp"

namespace {

using namespace ewgame;

constexpr int kOk = 0;
constexpr int kNegative = 1;
constexpr int kError = 2;

struct Options {
  std::string state;
  std::string witness;
  std::string pi = "uniform";
  std::string strategy = "honest";
  std::string format;  // empty: per-command default
  std::string out;
  std::string config;
  std::string figure = "fig2";
  std::uint64_t rounds = 100000;
  std::uint64_t seed = 0;
  int workers = 1;
  int resolution = 21;
  long samples = 10000;
};

void emit(const Options& o, const std::string& text) {
  if (o.out.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream f(o.out, std::ios::binary);
  if (!f) throw io::ParseError("cannot write '" + o.out + "'");
  f << text;
}

std::uint64_t effective_seed(std::uint64_t flag) {
  const char* env = std::getenv("EWGAME_SEED");
  if (!env || !*env) return flag;
  char* end = nullptr;
  const unsigned long long v = std::strtoull(env, &end, 10);
  if (*end != '\0') throw io::ParseError(std::string("EWGAME_SEED: not an integer: '") + env + "'");
  return v;
}

void require(const std::string& value, const char* flag) {
  if (value.empty()) throw io::ParseError(std::string(flag) + " is required");
}

void apply_config(Options& o, const CLI::App& cmd) {
  if (o.config.empty()) return;
  const auto c = io::parse_run_config(io::detail::parse_json_text(io::read_file(o.config), "config '" + o.config + "'"));
  // Explicit flags win over the config file.
  auto take = [&](const char* flag, auto& dst, const auto& src) {
    if (src && cmd.count(flag) == 0) dst = *src;
  };
  take("--state", o.state, c.state);
  take("--witness", o.witness, c.witness);
  take("--strategy", o.strategy, c.strategy);
  take("--pi", o.pi, c.pi);
  take("--rounds", o.rounds, c.rounds);
  take("--seed", o.seed, c.seed);
  take("--workers", o.workers, c.workers);
}

int cmd_payoff(const Options& o) {
  require(o.state, "--state");
  require(o.witness, "--witness");
  const DensityMatrix rho = io::parse_state(o.state);
  const Witness w = io::parse_witness(o.witness, rho);
  const double v = rho.qubits() == 3 ? expected_payoff3(rho, w.weights()) : expected_payoff(rho, w);
  if (o.format == "structured") {
    emit(o, "{\"payoff\": " + io::format_number(v) + ", \"detected\": " + (v > 0 ? "true" : "false") + "}\n");
  } else {
    emit(o, io::format_number(v) + "\n");
  }
  return v > 0 ? kOk : kNegative;
}

template <int N>
int simulate(const Options& o, const DensityMatrix& rho, const Witness& w) {
  GameConfig<N> c;
  c.pi = io::parse_pi<N>(o.pi, w.weights());
  c.rounds = o.rounds;
  c.seed = effective_seed(o.seed);
  c.workers = o.workers;
  Strategy<N> s;
  if (o.strategy == "honest") {
    s = honest_strategy<N>(rho);
  } else if (o.strategy == "cheat") {
    if constexpr (N == 2) {
      s = classical_cheat_strategy();
    } else {
      throw io::ParseError("--strategy cheat is defined for two players only");
    }
  } else {
    throw io::ParseError("--strategy must be honest or cheat");
  }
  const Transcript<N> tr = run_game(c, s, w.weights());
  if (o.format == "csv") {
    if (tr.records.empty()) throw io::ParseError("transcript has no records; lower --rounds to keep them");
    emit(o, io::transcript_csv(tr));
    return kOk;
  }
  const PayoffEstimate e = empirical_payoff(tr);
  if (o.format == "structured") {
    std::cout << io::transcript_summary(tr);
  } else {
    std::cout << "mean " << io::format_number(e.mean) << "\nstd_error " << io::format_number(e.std_error) << "\nrounds "
              << tr.rounds << "\nseed " << tr.seed << "\n";
  }
  if (!o.out.empty()) {
    if (tr.records.empty()) throw io::ParseError("transcript has no records; lower --rounds to keep them");
    emit(o, io::transcript_csv(tr));
  }
  return kOk;
}

int cmd_simulate(const Options& o) {
  require(o.state, "--state");
  const DensityMatrix rho = io::parse_state(o.state);
  const Witness w = io::parse_witness(o.witness.empty() ? (rho.qubits() == 3 ? "ghz" : "werner") : o.witness, rho);
  if (w.qubits() != rho.qubits()) throw io::ParseError("witness and state act on different numbers of qubits");
  return rho.qubits() == 3 ? simulate<3>(o, rho, w) : simulate<2>(o, rho, w);
}

int cmd_tomography(const Options& o) {
  require(o.state, "--state");
  const DensityMatrix rho = io::parse_state(o.state);
  const Witness w = io::parse_witness(o.witness.empty() ? "werner" : o.witness, rho);
  GameConfig<2> c;
  c.pi = io::parse_pi<2>(o.pi, w.weights());
  c.rounds = o.rounds;
  c.seed = effective_seed(o.seed);
  c.workers = o.workers;
  const Estimate e = reconstruct(accumulate(run_game(c, honest_strategy<2>(rho), w.weights())));
  const double err = reconstruction_error(rho, e);
  if (o.format == "csv") {
    emit(o, io::estimate_csv(e));
  } else if (o.format == "structured") {
    emit(o, io::estimate_structured(e, err));
  } else {
    emit(o, "trace_distance " + io::format_number(err) + "\nprojected " + io::matrix_text(e.projected.op()) + "\n");
  }
  return kOk;
}

int cmd_geometry(const Options& o) {
  const FigureData fd = export_figure_data(parse_figure(o.figure), o.resolution);
  emit(o, o.format == "structured" ? io::figure_structured(fd) : io::figure_csv(fd));
  return kOk;
}

int cmd_chsh(const Options& o) {
  require(o.state, "--state");
  const ChshResult r = chsh_value(io::parse_state(o.state), ChshSettings::standard());
  const char* v = r.violates_classical ? "true" : "false";
  const char* s = r.exceeds_strengthened ? "true" : "false";
  if (o.format == "structured") {
    emit(o, "{\"S\": " + io::format_number(r.value) + ", \"violation\": " + v + ", \"exceeds_sqrt2\": " + s + "}\n");
  } else {
    emit(o, "S " + io::format_number(r.value) + "\nviolation " + v + "\nexceeds_sqrt2 " + s + "\n");
  }
  return r.violates_classical ? kOk : kNegative;
}

int cmd_witness_make(const Options& o) {
  require(o.state, "--state");
  try {
    emit(o, io::weights_to_text(ppt_witness(io::parse_state(o.state)).weights()));
  } catch (const PptStateError& e) {
    std::cerr << e.what() << "\n";
    return kNegative;
  }
  return kOk;
}

int cmd_witness_check(const Options& o) {
  require(o.state, "--state");
  require(o.witness, "--witness");
  const DensityMatrix rho = io::parse_state(o.state);
  const Witness w = io::parse_witness(o.witness, rho);
  Rng rng(effective_seed(o.seed));
  const CheckReport r = check_witness(w, rho, o.samples, rng);
  const char* v = r.verdict ? "true" : "false";
  if (o.format == "structured") {
    emit(o, "{\"payoff\": " + io::format_number(r.payoff_on_target) + ", \"min_separable_value\": " +
                io::format_number(r.min_separable_value) + ", \"samples\": " + std::to_string(r.n_samples) +
                ", \"detected\": " + v + "}\n");
  } else {
    emit(o, "payoff " + io::format_number(r.payoff_on_target) + "\nmin_separable_value " +
                io::format_number(r.min_separable_value) + "\nsamples " + std::to_string(r.n_samples) + "\ndetected " +
                v + "\n");
  }
  return r.verdict ? kOk : kNegative;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Entanglement witness game toolkit"};
  app.require_subcommand(1);
  Options o;

  auto add_format = [&](CLI::App* c) {
    c->add_option("--format", o.format, "Output format")->check(CLI::IsMember({"text", "csv", "structured"}));
    c->add_option("--out", o.out, "Write output to this file");
  };
  auto add_game = [&](CLI::App* c) {
    c->add_option("--rounds", o.rounds, "Number of rounds");
    c->add_option("--seed", o.seed, "Base seed (EWGAME_SEED overrides)");
    c->add_option("--pi", o.pi, "uniform, support-only, or a JSON list / file");
    c->add_option("--workers", o.workers, "Worker threads")->check(CLI::PositiveNumber);
  };

  auto* payoff = app.add_subcommand("payoff", "Exact payoff -Tr(rho W)");
  payoff->add_option("--state", o.state, "State spec");
  payoff->add_option("--witness", o.witness, "Witness spec");

  auto* sim = app.add_subcommand("simulate", "Play the game by Monte Carlo");
  sim->add_option("--state", o.state, "State spec");
  sim->add_option("--witness", o.witness, "Witness spec");
  sim->add_option("--strategy", o.strategy, "honest or cheat");
  sim->add_option("--config", o.config, "JSON run config");
  add_game(sim);

  auto* tomo = app.add_subcommand("tomography", "Reconstruct the state from game moments");
  tomo->add_option("--state", o.state, "State spec");
  tomo->add_option("--witness", o.witness, "Witness spec (sets support-only Pi)");
  add_game(tomo);

  auto* geo = app.add_subcommand("geometry", "Export figure data");
  geo->add_option("--figure", o.figure, "fig2 or fig3");
  geo->add_option("--resolution", o.resolution, "Sampling resolution")->check(CLI::Range(2, 1000));

  auto* chsh = app.add_subcommand("chsh", "CHSH value with the standard settings");
  chsh->add_option("--state", o.state, "State spec");

  auto* wit = app.add_subcommand("witness", "Construct or check witnesses");
  wit->require_subcommand(1);
  auto* make = wit->add_subcommand("make", "PPT witness for an NPT state");
  make->add_option("--state", o.state, "State spec");
  auto* check = wit->add_subcommand("check", "Check a witness on a state and separable samples");
  check->add_option("--state", o.state, "State spec");
  check->add_option("--witness", o.witness, "Witness spec");
  check->add_option("--samples", o.samples, "Separable samples")->check(CLI::PositiveNumber);
  check->add_option("--seed", o.seed, "Sampling seed (EWGAME_SEED overrides)");

  for (auto* c : {payoff, sim, tomo, geo, chsh, make, check}) add_format(c);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kOk : kError;
  }

  try {
    if (*payoff) return cmd_payoff(o);
    if (*sim) {
      apply_config(o, *sim);
      return cmd_simulate(o);
    }
    if (*tomo) return cmd_tomography(o);
    if (*geo) return cmd_geometry(o);
    if (*chsh) return cmd_chsh(o);
    if (*make) return cmd_witness_make(o);
    if (*check) return cmd_witness_check(o);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kError;
  }
  return kError;
}
