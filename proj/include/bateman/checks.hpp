#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "bateman/model.hpp"
#include "bateman/types.hpp"

namespace bateman {

enum class ReportFormat { json, csv };

/// Configuration of a check run. Most checks pin the sizes and tolerances
/// their statements demand; the config supplies the working point for the
/// theta-dependent vacuum checks, the spectrum truncation, the quadrature
/// resolution, and a global tolerance cap (see effective_tolerance).
struct RunConfig {
  int n_max = 24;
  double theta = 0.3;
  SignBranch branch = SignBranch::plus;
  double omega = 1.0;
  double gamma = 0.2;
  double mass = 1.0;
  double hbar = 1.0;
  double tol = 1e-8;
  int margin = 2;
  int quad_nodes = 64;
  std::filesystem::path out_dir = ".";
  ReportFormat format = ReportFormat::json;

  void validate() const;  // throws DomainError on out-of-range fields
  PhysParams params() const { return {mass, omega, gamma, hbar}; }
};

/// One executed check. `measured` is the witness value the check compares
/// against its target; checks that errored out carry NaN and pass = false.
struct CheckReport {
  std::string check_id;
  RunConfig params;
  Complex measured{};
  double tolerance = 0.0;
  bool pass = false;
  double elapsed = 0.0;  // seconds
};

enum class Suite { ccr, vacuum, spectrum, wavefunctions, improper, all };

/// Parse a suite name; throws DomainError for unknown names.
Suite parse_suite(const std::string& name);
std::string suite_name(Suite suite);

/// Static mapping from the library's documented invariants to the suite
/// that exercises each of them; every invariant appears exactly once.
struct InvariantMapping {
  const char* invariant;  // e.g. "fockspace.canonical_commutators"
  Suite suite;
};
const std::vector<InvariantMapping>& invariant_coverage();

/// Invariant tag of a report id ("ccr/canonical_commutators/..." ->
/// "canonical_commutators"); empty when the id has no tag segment.
std::string invariant_of(const std::string& check_id);

/// Execute a suite. Checks never abort the run: a thrown error becomes a
/// failed report. Report order is deterministic for a given config.
std::vector<CheckReport> run_suite(Suite suite, const RunConfig& config);

/// Write report.json and/or report.csv into config.out_dir, returning the
/// paths written. Throws FilesystemError with path context on I/O failure.
std::vector<std::filesystem::path> emit(const std::vector<CheckReport>& reports,
                                        const RunConfig& config);

std::string reports_to_json(const std::vector<CheckReport>& reports);
std::string reports_to_csv(const std::vector<CheckReport>& reports);

bool all_pass(const std::vector<CheckReport>& reports);

}  // namespace bateman
