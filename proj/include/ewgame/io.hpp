#pragma once

#include <cctype>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "ewgame/game.hpp"
#include "ewgame/geometry.hpp"
#include "ewgame/multiparty.hpp"
#include "ewgame/state.hpp"
#include "ewgame/tomography.hpp"
#include "ewgame/witness.hpp"

namespace ewgame::io {

using json = nlohmann::json;

class ParseError : public Error {
 public:
  using Error::Error;
};

/// 17 significant digits, '.' separator regardless of locale.
inline std::string format_number(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  std::string s(buf);
  for (char& c : s)
    if (c == ',') c = '.';
  return s;
}

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

namespace detail {

/// expr := ['+'|'-'] factor (('*'|'/') factor)* ; factor := number | sqrt(expr) | (expr)
class SymbolicParser {
 public:
  explicit SymbolicParser(const std::string& s) : s_(s) {}

  double parse() {
    const double v = expr();
    skip();
    if (pos_ != s_.size()) fail("unexpected '" + s_.substr(pos_) + "'");
    if (!std::isfinite(v)) fail("value is not finite");
    return v;
  }

 private:
  double expr() {
    skip();
    double sign = 1.0;
    if (peek() == '-' || peek() == '+') sign = s_[pos_++] == '-' ? -1.0 : 1.0;
    double v = factor();
    for (;;) {
      skip();
      if (peek() == '*') {
        ++pos_;
        v *= factor();
      } else if (peek() == '/') {
        ++pos_;
        v /= factor();
      } else {
        return sign * v;
      }
    }
  }

  double factor() {
    skip();
    if (s_.compare(pos_, 4, "sqrt") == 0) {
      pos_ += 4;
      expect('(');
      const double v = expr();
      expect(')');
      if (v < 0) fail("sqrt of a negative number");
      return std::sqrt(v);
    }
    if (peek() == '(') {
      ++pos_;
      const double v = expr();
      expect(')');
      return v;
    }
    const std::size_t start = pos_;
    while (pos_ < s_.size() && (std::isdigit(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '.' ||
                                s_[pos_] == 'e' || s_[pos_] == 'E' ||
                                ((s_[pos_] == '-' || s_[pos_] == '+') && pos_ > start &&
                                 (s_[pos_ - 1] == 'e' || s_[pos_ - 1] == 'E'))))
      ++pos_;
    if (start == pos_) fail("expected a number");
    try {
      std::size_t used = 0;
      const double v = std::stod(s_.substr(start, pos_ - start), &used);
      if (used != pos_ - start) fail("malformed number");
      return v;
    } catch (const std::logic_error&) {
      fail("malformed number");
    }
    return 0.0;
  }

  void skip() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }
  char peek() const { return pos_ < s_.size() ? s_[pos_] : '\0'; }
  void expect(char c) {
    skip();
    if (peek() != c) fail(std::string("expected '") + c + "'");
    ++pos_;
  }
  [[noreturn]] void fail(const std::string& why) const {
    throw ParseError("cannot parse number '" + s_ + "': " + why);
  }

  const std::string& s_;
  std::size_t pos_ = 0;
};

inline double number_from_json(const json& j, const std::string& where) {
  if (j.is_number()) return j.get<double>();
  if (j.is_string()) return SymbolicParser(j.get<std::string>()).parse();
  throw ParseError(where + ": expected a number or symbolic string");
}

inline bool call_form(const std::string& spec, const std::string& name, std::string& arg) {
  if (spec.size() < name.size() + 2 || spec.compare(0, name.size() + 1, name + "(") != 0 || spec.back() != ')') return false;
  arg = spec.substr(name.size() + 1, spec.size() - name.size() - 2);
  return true;
}

inline json parse_json_text(const std::string& text, const std::string& what) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError(what + ": " + e.what());
  }
}

}  // namespace detail

/// Parses "1/sqrt(3)", "-sqrt(2)/2", "0.25" and the like.
inline double parse_symbolic(const std::string& s) { return detail::SymbolicParser(s).parse(); }

/// Dense row-major list of [re, im] pairs; the dimension is inferred.
inline Operator parse_matrix(const json& j) {
  if (!j.is_array()) throw ParseError("matrix literal must be a list of [re, im] pairs");
  std::vector<Complex> entries;
  for (std::size_t k = 0; k < j.size(); ++k) {
    const json& e = j[k];
    const std::string where = "matrix entry " + std::to_string(k);
    if (e.is_array() && e.size() == 2) {
      entries.emplace_back(detail::number_from_json(e[0], where), detail::number_from_json(e[1], where));
    } else {
      throw ParseError(where + ": expected [re, im]");
    }
  }
  const int d = static_cast<int>(std::lround(std::sqrt(static_cast<double>(entries.size()))));
  if (d * d != static_cast<int>(entries.size()) || (d != 2 && d != 4 && d != 8)) {
    throw ParseError("matrix literal has " + std::to_string(entries.size()) + " entries; expected 4, 16 or 64");
  }
  return Operator::from_entries(d, entries);
}

/// Named constructors: werner(z), bell_psi_plus, ghz, mixed(n), product(bits),
/// separable(seed), random(seed); otherwise an inline matrix literal or a file holding one.
inline DensityMatrix parse_state(const std::string& spec) {
  std::string arg;
  if (detail::call_form(spec, "werner", arg)) return make_werner(parse_symbolic(arg));
  if (spec == "bell_psi_plus" || spec == "psi_plus") return bell_psi_plus();
  if (spec == "ghz") return ghz_state();
  if (detail::call_form(spec, "mixed", arg)) {
    const double n = parse_symbolic(arg);
    if (n != 2.0 && n != 3.0) throw ParseError("mixed(n) needs n = 2 or 3");
    return maximally_mixed(1 << static_cast<int>(n));
  }
  if (detail::call_form(spec, "product", arg)) return computational_state(arg);
  if (detail::call_form(spec, "separable", arg)) {
    Rng rng(static_cast<std::uint64_t>(parse_symbolic(arg)));
    return random_separable(rng, 3, 2);
  }
  if (detail::call_form(spec, "random", arg)) {
    Rng rng(static_cast<std::uint64_t>(parse_symbolic(arg)));
    return random_density_matrix(rng, 4);
  }
  if (!spec.empty() && spec.front() == '[') return DensityMatrix(parse_matrix(detail::parse_json_text(spec, "state")));
  if (std::filesystem::is_regular_file(spec)) {
    return DensityMatrix(parse_matrix(detail::parse_json_text(read_file(spec), "state file '" + spec + "'")));
  }
  throw ParseError("unknown state spec '" + spec + "'");
}

/// {"n": 2, "weights": [[s, t, w], ...]}; w may be a number or a symbolic string.
inline PauliWeights parse_weights(const json& j) {
  if (!j.is_object()) throw ParseError("witness file must be a JSON object");
  if (!j.contains("n") || !j["n"].is_number_integer()) throw ParseError("witness file: field 'n' must be an integer");
  const int n = j["n"].get<int>();
  if (n != 2 && n != 3) throw ParseError("witness file: 'n' must be 2 or 3");
  if (!j.contains("weights") || !j["weights"].is_array()) throw ParseError("witness file: field 'weights' must be a list");
  PauliWeights w(n);
  std::vector<bool> seen(static_cast<std::size_t>(w.size()), false);
  for (std::size_t k = 0; k < j["weights"].size(); ++k) {
    const json& e = j["weights"][k];
    const std::string where = "witness file: weights[" + std::to_string(k) + "]";
    if (!e.is_array() || e.size() != static_cast<std::size_t>(n + 1)) {
      throw ParseError(where + ": expected " + std::to_string(n) + " labels and a weight");
    }
    std::vector<PauliIndex> labels;
    for (int q = 0; q < n; ++q) {
      const json& l = e[static_cast<std::size_t>(q)];
      if (!l.is_number_integer() || l.get<int>() < 0 || l.get<int>() > 3) throw ParseError(where + ": labels must be integers 0..3");
      labels.push_back(l.get<int>());
    }
    const int idx = flat_index(labels);
    if (seen[static_cast<std::size_t>(idx)]) throw ParseError(where + ": duplicate entry for " + label_name(labels));
    seen[static_cast<std::size_t>(idx)] = true;
    w[idx] = detail::number_from_json(e[static_cast<std::size_t>(n)], where);
  }
  try {
    w.validate();
  } catch (const Error& e) {
    throw ParseError(std::string("witness file: ") + e.what());
  }
  return w;
}

/// Nonzero weights as a witness file, numbers at 17 significant digits.
inline std::string weights_to_text(const PauliWeights& w) {
  std::string out = "{\"n\": " + std::to_string(w.n) + ", \"weights\": [";
  bool first = true;
  for (int i = 0; i < w.size(); ++i) {
    if (w[i] == 0.0) continue;
    out += first ? "\n  [" : ",\n  [";
    first = false;
    for (PauliIndex l : labels_of(i, w.n)) out += std::to_string(l) + ", ";
    out += format_number(w[i]) + "]";
  }
  out += "\n]}\n";
  return out;
}

/// Built-ins werner, chsh, chsh_plus, chsh_minus, strengthened, ghz, ppt (needs
/// a state); anything else is read as a witness file.
inline Witness parse_witness(const std::string& spec, const std::optional<DensityMatrix>& state = std::nullopt) {
  if (spec == "werner") return werner_witness();
  if (spec == "chsh") return fixed_chsh_witness();
  if (spec == "chsh_plus" || spec == "chsh_minus") {
    const auto s = ChshSettings::standard();
    return chsh_witness(s.a, s.a2, s.b, s.b2, spec == "chsh_plus" ? 1 : -1);
  }
  if (spec == "strengthened") return strengthened_chsh_witness();
  if (spec == "ghz") return ghz_witness();
  if (spec == "ppt") {
    if (!state) throw ParseError("witness 'ppt' needs a state");
    return ppt_witness(*state);
  }
  if (!spec.empty() && spec.front() == '{') return Witness::from_weights(parse_weights(detail::parse_json_text(spec, "witness")));
  if (std::filesystem::is_regular_file(spec)) {
    return Witness::from_weights(parse_weights(detail::parse_json_text(read_file(spec), "witness file '" + spec + "'")));
  }
  throw ParseError("unknown witness spec '" + spec + "'");
}

/// "uniform", "support-only" or a JSON list of 4^n probabilities (inline or file).
template <int N>
LabelDistribution<N> parse_pi(const std::string& spec, const PauliWeights& w) {
  if (spec == "uniform") return LabelDistribution<N>::uniform();
  if (spec == "support-only") return LabelDistribution<N>::support_only(w);
  const std::string text = (!spec.empty() && spec.front() == '[') ? spec : read_file(spec);
  const json j = detail::parse_json_text(text, "pi");
  if (!j.is_array() || j.size() != static_cast<std::size_t>(cells<N>())) {
    throw ParseError("pi must list " + std::to_string(cells<N>()) + " probabilities");
  }
  LabelDistribution<N> d;
  for (std::size_t k = 0; k < j.size(); ++k) d.p[k] = detail::number_from_json(j[k], "pi[" + std::to_string(k) + "]");
  d.validate();
  return d;
}

template <int N>
std::string transcript_csv(const Transcript<N>& tr) {
  std::string out = N == 2 ? "s,t,a,b,payoff\n" : "i,j,k,a,b,c,payoff\n";
  for (const auto& r : tr.records) {
    for (PauliIndex l : r.labels) out += std::to_string(l) + ",";
    for (int a : r.outcomes) out += std::to_string(a) + ",";
    out += format_number(r.payoff) + "\n";
  }
  return out;
}

template <int N>
std::string transcript_summary(const Transcript<N>& tr) {
  const PayoffEstimate e = empirical_payoff(tr);
  return "{\"mean\": " + format_number(e.mean) + ", \"std_error\": " + format_number(e.std_error) +
         ", \"rounds\": " + std::to_string(tr.rounds) + ", \"seed\": " + std::to_string(tr.seed) + "}\n";
}

inline std::string figure_csv(const FigureData& fd) {
  std::string out = "series,id";
  for (const auto& a : fd.axis_names) out += "," + a;
  out += ",z\n";
  for (const auto& r : fd.rows) {
    out += r.series + "," + std::to_string(r.id);
    for (double c : r.coords) out += "," + format_number(c);
    out += "," + (std::isnan(r.z) ? std::string() : format_number(r.z)) + "\n";
  }
  return out;
}

inline std::string figure_structured(const FigureData& fd) {
  std::string out = "{\"figure\": \"" + fd.figure + "\", \"axes\": [";
  for (std::size_t k = 0; k < fd.axis_names.size(); ++k) out += (k ? ", \"" : "\"") + fd.axis_names[k] + "\"";
  out += "], \"rows\": [";
  for (std::size_t i = 0; i < fd.rows.size(); ++i) {
    const auto& r = fd.rows[i];
    out += (i ? ",\n  " : "\n  ") + std::string("{\"series\": \"") + r.series + "\", \"id\": " + std::to_string(r.id) +
           ", \"coords\": [";
    for (std::size_t k = 0; k < r.coords.size(); ++k) out += (k ? ", " : "") + format_number(r.coords[k]);
    out += "]";
    if (!std::isnan(r.z)) out += ", \"z\": " + format_number(r.z);
    out += "}";
  }
  out += "\n]}\n";
  return out;
}

inline std::string matrix_text(const Operator& op) {
  std::string out = "[";
  for (int r = 0; r < op.dim(); ++r)
    for (int c = 0; c < op.dim(); ++c) {
      out += (r || c) ? ", " : "";
      out += "[" + format_number(op(r, c).real()) + ", " + format_number(op(r, c).imag()) + "]";
    }
  return out + "]";
}

inline std::string estimate_csv(const Estimate& e) {
  std::string out = "s,t,r_hat,std_error\n";
  for (int c = 0; c < 16; ++c) {
    const auto l = labels_of(c, 2);
    out += std::to_string(l[0]) + "," + std::to_string(l[1]) + "," + format_number(e.r_hat[c]) + "," +
           format_number(e.std_errors[static_cast<std::size_t>(c)]) + "\n";
  }
  return out;
}

inline std::string estimate_structured(const Estimate& e, std::optional<double> error = std::nullopt) {
  std::string out = "{\"r_hat\": [";
  for (int c = 0; c < 16; ++c) out += (c ? ", " : "") + format_number(e.r_hat[c]);
  out += "],\n \"std_errors\": [";
  for (int c = 0; c < 16; ++c) out += (c ? ", " : "") + format_number(e.std_errors[static_cast<std::size_t>(c)]);
  out += "],\n \"raw\": " + matrix_text(e.raw) + ",\n \"projected\": " + matrix_text(e.projected.op());
  if (error) out += ",\n \"trace_distance\": " + format_number(*error);
  return out + "}\n";
}

/// Simulation settings read from a JSON config file; every field optional.
struct RunConfig {
  std::optional<std::string> state, witness, strategy, pi;
  std::optional<std::uint64_t> rounds, seed;
  std::optional<int> workers;
};

inline RunConfig parse_run_config(const json& j) {
  if (!j.is_object()) throw ParseError("config must be a JSON object");
  RunConfig c;
  auto str = [&](const char* key, std::optional<std::string>& dst) {
    if (!j.contains(key)) return;
    if (j[key].is_string()) {
      dst = j[key].get<std::string>();
    } else if (std::string(key) == "pi" && j[key].is_array()) {
      dst = j[key].dump();
    } else if (std::string(key) == "witness" && j[key].is_object()) {
      dst = j[key].dump();
    } else if (std::string(key) == "state" && j[key].is_array()) {
      dst = j[key].dump();
    } else {
      throw ParseError(std::string("config.") + key + ": unexpected type");
    }
  };
  str("state", c.state);
  str("witness", c.witness);
  str("strategy", c.strategy);
  str("pi", c.pi);
  auto uint = [&](const char* key, std::optional<std::uint64_t>& dst) {
    if (!j.contains(key)) return;
    if (!j[key].is_number_unsigned()) throw ParseError(std::string("config.") + key + ": expected a nonnegative integer");
    dst = j[key].get<std::uint64_t>();
  };
  uint("rounds", c.rounds);
  uint("seed", c.seed);
  if (j.contains("workers")) {
    if (!j["workers"].is_number_integer() || j["workers"].get<int>() < 1) throw ParseError("config.workers: expected a positive integer");
    c.workers = j["workers"].get<int>();
  }
  return c;
}

}  // namespace ewgame::io
