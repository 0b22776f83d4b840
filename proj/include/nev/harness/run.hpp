#pragma once

#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "nev/error.hpp"
#include "nev/harness/config.hpp"
#include "nev/harness/exceptional.hpp"
#include "nev/harness/report.hpp"

namespace nev::harness {

struct ModeResult {
  Table table;
  Verdict verdict = Verdict::pass;
  std::optional<ExceptionalReport> report;
  PlotSpec plot;
  nlohmann::ordered_json details = nlohmann::ordered_json::object();
};

// Runs the probe selected by cfg.theorem over cfg.grid(). Grid points are
// spread over cfg.threads workers where the probe allows it; the result does
// not depend on the worker count.
ModeResult evaluate_mode(const SweepConfig& cfg);

struct RunOutcome {
  Verdict verdict = Verdict::pass;
  int exit_code = 0;
  std::vector<std::string> files;
  ModeResult result;
};

// evaluate_mode, then CSV, summary JSON and (unless cfg.svg is empty) SVG
// under cfg.out_dir.
RunOutcome run(const SweepConfig& cfg);

// 0 PASS, 2 FAIL, 3 INCONCLUSIVE; errors map to 1.
int exit_code_for(Verdict v);
inline constexpr int kErrorExitCode = 1;

// One line: "error <kind>: <message>".
std::string error_reason(const Error& e);

}  // namespace nev::harness
