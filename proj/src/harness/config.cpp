#include "nev/harness/config.hpp"

#include <algorithm>
#include <cerrno>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <map>
#include <set>
#include <sstream>

#include "nev/expr/evaluate.hpp"
#include "nev/expr/parse.hpp"
#include "nev/nevanlinna/grid.hpp"

namespace nev::harness {

namespace {

const std::vector<std::pair<Theorem, const char*>> kTheoremNames = {
    {Theorem::t11, "t11"},       {Theorem::t12, "t12"},       {Theorem::t13, "t13"},
    {Theorem::op1, "op1"},       {Theorem::ol1, "ol1"},       {Theorem::prop51, "prop51"},
    {Theorem::prop52, "prop52"}, {Theorem::prop53, "prop53"}, {Theorem::prop54, "prop54"},
    {Theorem::smt, "smt"},       {Theorem::functionals, "functionals"},
};

std::string trim(const std::string& s) {
  auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

[[noreturn]] void fail(int line, const std::string& msg) {
  throw Error(ErrorKind::config, "line " + std::to_string(line) + ": " + msg);
}

double to_double(const std::string& v, int line) {
  errno = 0;
  char* end = nullptr;
  double x = std::strtod(v.c_str(), &end);
  if (v.empty() || *end != '\0' || errno == ERANGE || !std::isfinite(x))
    fail(line, "expected a number, got '" + v + "'");
  return x;
}

long to_long(const std::string& v, int line) {
  errno = 0;
  char* end = nullptr;
  long x = std::strtol(v.c_str(), &end, 10);
  if (v.empty() || *end != '\0' || errno == ERANGE) fail(line, "expected an integer, got '" + v + "'");
  return x;
}

// Complex constants are written as constant expressions: 1, -0.5, 2i, 1+2i.
cplx to_complex(const std::string& v, int line) {
  try {
    auto e = expr::parse(v);
    if (!expr::is_z_free(e.root())) fail(line, "constant must not depend on z: '" + v + "'");
    auto val = expr::value_at(e, cplx{});
    if (!val) fail(line, "constant is not finite: '" + v + "'");
    return *val;
  } catch (const Error& err) {
    if (err.kind() == ErrorKind::config) throw;
    fail(line, "bad constant '" + v + "': " + err.what());
  }
}

std::vector<std::string> split_list(const std::string& v) {
  std::vector<std::string> out;
  std::stringstream ss(v);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(trim(item));
  return out;
}

using Setter = std::function<void(SweepConfig&, const std::string&, int)>;

const std::vector<std::pair<std::string, Setter>>& setters() {
  static const std::vector<std::pair<std::string, Setter>> table = {
      {"function.f", [](SweepConfig& c, const std::string& v, int line) {
         if (v.empty()) fail(line, "empty function");
         c.function_text = v;
       }},
      {"function.a", [](SweepConfig& c, const std::string& v, int line) { c.a = to_complex(v, line); }},
      {"function.a_list", [](SweepConfig& c, const std::string& v, int line) {
         c.a_list.clear();
         if (trim(v).empty()) return;
         for (const auto& s : split_list(v)) c.a_list.push_back(to_complex(s, line));
       }},
      {"theorem.mode", [](SweepConfig& c, const std::string& v, int line) {
         try {
           c.theorem = theorem_from_string(v);
         } catch (const Error& e) {
           fail(line, e.what());
         }
       }},
      {"grid.r_min", [](SweepConfig& c, const std::string& v, int line) { c.r_min = to_double(v, line); }},
      {"grid.r_max", [](SweepConfig& c, const std::string& v, int line) { c.r_max = to_double(v, line); }},
      {"grid.points", [](SweepConfig& c, const std::string& v, int line) {
         long n = to_long(v, line);
         if (n < 0 || n > 1000000) fail(line, "points out of range");
         c.points = static_cast<int>(n);
       }},
      {"grid.spacing", [](SweepConfig& c, const std::string& v, int line) {
         if (v != "geometric") fail(line, "only geometric spacing is supported");
         c.spacing = v;
       }},
      {"shift.eta", [](SweepConfig& c, const std::string& v, int line) { c.eta = to_complex(v, line); }},
      {"shift.etas", [](SweepConfig& c, const std::string& v, int line) {
         c.etas.clear();
         for (const auto& s : split_list(v)) c.etas.push_back(to_complex(s, line));
       }},
      {"shift.beta", [](SweepConfig& c, const std::string& v, int line) { c.beta = to_double(v, line); }},
      {"shift.omega_coef",
       [](SweepConfig& c, const std::string& v, int line) { c.omega_coef = to_double(v, line); }},
      {"shift.epsilon", [](SweepConfig& c, const std::string& v, int line) { c.epsilon = to_double(v, line); }},
      {"shift.sigma", [](SweepConfig& c, const std::string& v, int line) {
         c.sigmas.clear();
         for (const auto& s : split_list(v)) c.sigmas.push_back(to_double(s, line));
       }},
      {"shift.varsigma",
       [](SweepConfig& c, const std::string& v, int line) { c.varsigma = to_double(v, line); }},
      {"verdict.threshold",
       [](SweepConfig& c, const std::string& v, int line) { c.threshold = to_double(v, line); }},
      {"verdict.log_measure_cap",
       [](SweepConfig& c, const std::string& v, int line) { c.log_measure_cap = to_double(v, line); }},
      {"verdict.s0", [](SweepConfig& c, const std::string& v, int line) { c.s0 = to_double(v, line); }},
      {"verdict.s1", [](SweepConfig& c, const std::string& v, int line) { c.s1 = to_double(v, line); }},
      {"verdict.window", [](SweepConfig& c, const std::string& v, int line) {
         long n = to_long(v, line);
         if (n < 1 || n > 1000) fail(line, "window out of range");
         c.window = static_cast<int>(n);
       }},
      {"tolerance.abs_tol", [](SweepConfig& c, const std::string& v, int line) { c.abs_tol = to_double(v, line); }},
      {"tolerance.rel_tol", [](SweepConfig& c, const std::string& v, int line) { c.rel_tol = to_double(v, line); }},
      {"output.dir", [](SweepConfig& c, const std::string& v, int) { c.out_dir = v; }},
      {"output.csv", [](SweepConfig& c, const std::string& v, int) { c.csv = v; }},
      {"output.summary", [](SweepConfig& c, const std::string& v, int) { c.summary = v; }},
      {"output.svg", [](SweepConfig& c, const std::string& v, int) { c.svg = v; }},
      {"run.seed", [](SweepConfig& c, const std::string& v, int line) {
         long n = to_long(v, line);
         if (n < 0) fail(line, "seed must be non-negative");
         c.seed = static_cast<std::uint64_t>(n);
       }},
      {"run.threads", [](SweepConfig& c, const std::string& v, int line) {
         long n = to_long(v, line);
         if (n < 1 || n > 256) fail(line, "threads out of range");
         c.threads = static_cast<int>(n);
       }},
      {"run.pj_points", [](SweepConfig& c, const std::string& v, int line) {
         long n = to_long(v, line);
         if (n < 0 || n > 10000) fail(line, "pj_points out of range");
         c.pj_points = static_cast<int>(n);
       }},
  };
  return table;
}

}  // namespace

const char* to_string(Theorem t) {
  for (const auto& [k, name] : kTheoremNames)
    if (k == t) return name;
  return "?";
}

Theorem theorem_from_string(const std::string& name) {
  for (const auto& [k, n] : kTheoremNames)
    if (name == n) return k;
  throw Error(ErrorKind::config, "unknown theorem mode '" + name + "'");
}

const std::vector<std::string>& config_keys() {
  static const std::vector<std::string> keys = [] {
    std::vector<std::string> out;
    for (const auto& [k, s] : setters()) out.push_back(k);
    return out;
  }();
  return keys;
}

void SweepConfig::validate() const {
  auto bad = [](const std::string& m) { throw Error(ErrorKind::config, m); };
  if (function_text.empty()) bad("function.f is required");
  if (!(r_min > 0.0)) bad("grid.r_min must be positive");
  if (theorem == Theorem::op1 && !(r_min > std::exp(1.0))) bad("grid.r_min must exceed e for op1");
  if (!(r_max > r_min)) bad("grid.r_max must exceed grid.r_min");
  if (points < 8) bad("grid.points must be at least 8");
  if (!(abs_tol > 0.0) || !(rel_tol > 0.0)) bad("tolerances must be positive");
  if (!(log_measure_cap > 0.0)) bad("verdict.log_measure_cap must be positive");
  if (etas.empty()) bad("shift.etas must not be empty");
  if (sigmas.empty()) bad("shift.sigma must not be empty");
  if (threads < 1) bad("run.threads must be at least 1");
}

std::vector<double> SweepConfig::grid() const {
  return nevanlinna::geometric_grid(r_min, r_max, points);
}

SweepConfig parse_config(const std::string& text) {
  SweepConfig cfg;
  std::map<std::string, const Setter*> lookup;
  std::set<std::string> sections;
  for (const auto& [k, s] : setters()) {
    lookup[k] = &s;
    sections.insert(k.substr(0, k.find('.')));
  }
  std::set<std::string> seen;
  std::string section;
  std::istringstream in(text);
  std::string raw;
  int line = 0;
  while (std::getline(in, raw)) {
    ++line;
    std::string s = raw;
    auto hash = s.find_first_of("#;");
    if (hash != std::string::npos) s = s.substr(0, hash);
    s = trim(s);
    if (s.empty()) continue;
    if (s.front() == '[') {
      if (s.back() != ']') fail(line, "unterminated section header");
      section = trim(s.substr(1, s.size() - 2));
      if (!sections.count(section)) fail(line, "unknown section [" + section + "]");
      continue;
    }
    auto eq = s.find('=');
    if (eq == std::string::npos) fail(line, "expected key = value");
    if (section.empty()) fail(line, "key outside of a section");
    std::string key = section + "." + trim(s.substr(0, eq));
    std::string value = trim(s.substr(eq + 1));
    auto it = lookup.find(key);
    if (it == lookup.end()) fail(line, "unknown key '" + key + "'");
    if (!seen.insert(key).second) fail(line, "duplicate key '" + key + "'");
    (*it->second)(cfg, value, line);
  }
  cfg.validate();
  return cfg;
}

SweepConfig load_config(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::io, "cannot open config '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

}  // namespace nev::harness
