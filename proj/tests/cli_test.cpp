#include <gtest/gtest.h>
#include <sys/wait.h>

#include <array>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

namespace fs = std::filesystem;

namespace {

struct Result {
  int code;
  std::string out;
};

Result run(const std::string& args, const std::string& env = "") {
  const std::string cmd = env + (env.empty() ? "" : " ") + "'" EWGAME_CLI "' " + args + " 2>/dev/null";
  FILE* p = popen(cmd.c_str(), "r");
  if (!p) return {-1, ""};
  std::string out;
  std::array<char, 4096> buf{};
  std::size_t n;
  while ((n = fread(buf.data(), 1, buf.size(), p)) > 0) out.append(buf.data(), n);
  const int status = pclose(p);
  return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, out};
}

std::string slurp(const fs::path& p) {
  std::ifstream f(p);
  std::stringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

fs::path temp(const std::string& name) { return fs::temp_directory_path() / ("ewgame_cli_" + name); }

double field(const std::string& text, const std::string& key) {
  const auto pos = text.find(key + " ");
  if (pos == std::string::npos) return std::nan("");
  return std::stod(text.substr(pos + key.size() + 1));
}

}  // namespace

TEST(CliPayoff, werner_examples) {
  const Result r = run("payoff --state 'werner(1)' --witness werner");
  EXPECT_EQ(r.code, 0);
  EXPECT_EQ(r.out, "1.1547005383792515\n");
  const Result neg = run("payoff --state 'werner(0.2)' --witness werner");
  EXPECT_EQ(neg.code, 1);
  EXPECT_LT(std::stod(neg.out), 0.0);
}

TEST(CliPayoff, errors_exit_two) {
  const fs::path bad = temp("bad.json");
  std::ofstream(bad) << "{\"n\": 2, \"weights\": [[0, 9, 1]]}";
  EXPECT_EQ(run("payoff --state 'werner(1)' --witness " + bad.string()).code, 2);
  EXPECT_EQ(run("payoff --state 'werner(2)' --witness werner").code, 2);
  EXPECT_EQ(run("payoff --state 'werner(1)'").code, 2);
  EXPECT_EQ(run("payoff --state 'werner(1)' --witness ghz").code, 2);
  EXPECT_EQ(run("bogus").code, 2);
  EXPECT_EQ(run("").code, 2);
  EXPECT_EQ(run("--help").code, 0);
}

TEST(CliPayoff, ghz) {
  const Result r = run("payoff --state ghz --witness ghz --format structured");
  EXPECT_EQ(r.code, 0);
  EXPECT_NE(r.out.find("\"detected\": true"), std::string::npos);
}

TEST(CliSimulate, deterministic_and_seed_override) {
  const std::string args = "simulate --state 'werner(1)' --witness werner --rounds 200000 --seed 42";
  const Result a = run(args);
  const Result b = run(args);
  EXPECT_EQ(a.code, 0);
  EXPECT_EQ(a.out, b.out);
  EXPECT_NE(a.out.find("seed 42"), std::string::npos);
  const Result env = run(args, "EWGAME_SEED=7");
  EXPECT_NE(env.out.find("seed 7"), std::string::npos);
  EXPECT_EQ(env.out, run("simulate --state 'werner(1)' --witness werner --rounds 200000 --seed 7").out);
  EXPECT_EQ(run(args, "EWGAME_SEED=x").code, 2);
}

TEST(CliSimulate, cheat_and_separable) {
  const Result cheat = run("simulate --state 'werner(0)' --strategy cheat --rounds 1000000 --seed 3");
  ASSERT_EQ(cheat.code, 0);
  EXPECT_LE(std::abs(field(cheat.out, "mean") - 2.0 / std::sqrt(3.0)), 3 * field(cheat.out, "std_error"));
  const Result sep = run("simulate --state 'separable(5)' --rounds 1000000 --seed 4");
  ASSERT_EQ(sep.code, 0);
  EXPECT_LE(field(sep.out, "mean"), 3 * field(sep.out, "std_error"));
}

TEST(CliSimulate, outputs_and_errors) {
  const fs::path csv = temp("transcript.csv");
  const Result r = run("simulate --state bell_psi_plus --rounds 50 --seed 1 --out " + csv.string());
  EXPECT_EQ(r.code, 0);
  const std::string text = slurp(csv);
  EXPECT_EQ(text.rfind("s,t,a,b,payoff\n", 0), 0u);
  EXPECT_EQ(std::count(text.begin(), text.end(), '\n'), 51);
  EXPECT_EQ(run("simulate --state ghz --rounds 20 --format csv").out.rfind("i,j,k,a,b,c,payoff\n", 0), 0u);
  EXPECT_NE(run("simulate --state ghz --rounds 2000 --format structured").out.find("\"mean\""), std::string::npos);

  EXPECT_EQ(run("simulate --state 'werner(1)' --pi '[1,0,0,0, 0,0,0,0, 0,0,0,0, 0,0,0,0]'").code, 2);
  EXPECT_EQ(run("simulate --state 'werner(1)' --strategy psychic").code, 2);
  EXPECT_EQ(run("simulate --state ghz --strategy cheat").code, 2);
}

TEST(CliSimulate, config_file) {
  const fs::path cfg = temp("config.json");
  std::ofstream(cfg) << R"j({"state": "werner(1)", "witness": "werner", "rounds": 5000, "seed": 11, "workers": 2})j";
  const Result a = run("simulate --config " + cfg.string());
  EXPECT_EQ(a.code, 0);
  EXPECT_NE(a.out.find("rounds 5000"), std::string::npos);
  EXPECT_EQ(a.out, run("simulate --config " + cfg.string()).out);
  EXPECT_NE(run("simulate --config " + cfg.string() + " --seed 12").out.find("seed 12"), std::string::npos);
  std::ofstream(cfg) << R"({"rounds": "many"})";
  EXPECT_EQ(run("simulate --config " + cfg.string()).code, 2);
}

TEST(CliTomography, werner_reconstruction) {
  const Result r = run("tomography --state 'werner(0.5)' --rounds 1000000 --seed 5 --workers 4");
  EXPECT_EQ(r.code, 0);
  EXPECT_LT(field(r.out, "trace_distance"), 0.02);
  EXPECT_EQ(run("tomography --state 'werner(0.5)' --pi support-only --rounds 1000").code, 2);
}

TEST(CliGeometry, fig2_intersection) {
  const Result r = run("geometry --figure fig2 --resolution 5");
  EXPECT_EQ(r.code, 0);
  std::istringstream in(r.out);
  std::string line;
  bool found = false;
  while (std::getline(in, line)) {
    if (line.rfind("intersection,", 0) != 0) continue;
    found = true;
    EXPECT_NEAR(std::stod(line.substr(line.rfind(',') + 1)), 1.0 / 3.0, 1e-15);
  }
  EXPECT_TRUE(found);
  EXPECT_EQ(run("geometry --figure fig9").code, 2);
  EXPECT_EQ(run("geometry --figure fig3 --resolution 1").code, 2);
}

TEST(CliChsh, violation_flag) {
  const Result r = run("chsh --state 'werner(0.8)'");
  EXPECT_EQ(r.code, 0);
  EXPECT_NEAR(std::abs(field(r.out, "S")), 2 * std::sqrt(2.0) * 0.8, 1e-12);
  EXPECT_NE(r.out.find("violation true"), std::string::npos);
  EXPECT_EQ(run("chsh --state 'werner(0.6)'").code, 1);
}

TEST(CliWitness, make_and_check) {
  const Result ppt = run("witness make --state 'werner(0.2)'");
  EXPECT_EQ(ppt.code, 1);
  const fs::path w = temp("ppt_witness.json");
  EXPECT_EQ(run("witness make --state 'werner(0.6)' --out " + w.string()).code, 0);
  EXPECT_EQ(run("payoff --state 'werner(0.6)' --witness " + w.string()).code, 0);
  EXPECT_EQ(run("witness check --state 'werner(0.6)' --witness " + w.string() + " --samples 2000").code, 0);
  EXPECT_EQ(run("witness check --state 'werner(0.6)' --witness chsh --samples 2000").code, 1);
  EXPECT_EQ(run("witness").code, 2);
}
