#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "nev/error.hpp"

namespace nev::harness {

enum class Theorem { t11, t12, t13, op1, ol1, prop51, prop52, prop53, prop54, smt, functionals };

const char* to_string(Theorem t);
// Throws ErrorKind::config on an unknown name.
Theorem theorem_from_string(const std::string& name);

struct SweepConfig {
  std::string function_text;
  Theorem theorem = Theorem::functionals;
  cplx a{0.0};
  std::vector<cplx> a_list{cplx{0.0}};

  double r_min = 1.0;
  double r_max = 50.0;
  int points = 64;
  std::string spacing = "geometric";

  cplx eta{1e-6};
  std::vector<cplx> etas{cplx{1e-2}, cplx{1e-4}, cplx{1e-6}};
  double beta = 0.25;
  double omega_coef = 1.0;
  double epsilon = 0.5;
  std::vector<double> sigmas{1.5};
  double varsigma = 0.0;

  // Unset (<= 0 after parsing means "mode default").
  double threshold = -1.0;
  double log_measure_cap = 1.0;
  double s0 = 0.1;
  double s1 = 10.0;
  int window = 5;

  double abs_tol = 1e-8;
  double rel_tol = 1e-12;

  std::string out_dir = "out";
  std::string csv = "results.csv";
  std::string summary = "summary.json";
  std::string svg = "plot.svg";

  std::uint64_t seed = 0;
  int threads = 1;
  int pj_points = 0;

  // Throws ErrorKind::config when an invariant is violated.
  void validate() const;
  std::vector<double> grid() const;
};

// "section.key" for every key the parser accepts, in documentation order.
const std::vector<std::string>& config_keys();

// Flat key = value lines under [section] headers; '#' and ';' start comments.
// Unknown sections or keys, duplicates and malformed values are errors.
SweepConfig parse_config(const std::string& text);
SweepConfig load_config(const std::string& path);

}  // namespace nev::harness
