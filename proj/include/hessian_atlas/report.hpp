#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "hessian_atlas/poly.hpp"
#include "hessian_atlas/sphere_ext.hpp"
#include "hessian_atlas/tracer.hpp"

namespace hatlas {

inline constexpr const char* kSchema = "hessian-atlas/1";

struct AnalyzeOptions {
  int grid = 512;
  double window = 8.0;
  double tol = 1e-9;
  std::uint64_t seed = 42;
  /// Wall-clock timing is left out of the report unless requested, so that
  /// repeated runs give identical JSON.
  bool timing = false;
};

/// A stage that threw. `kind` is one of invalid_input, non_generic, numerical.
struct FailureRecord {
  std::string stage;
  std::string kind;
  std::string message;
  friend bool operator==(const FailureRecord&, const FailureRecord&) = default;
};

struct GodronRecord {
  double x = 0.0;
  double y = 0.0;
  std::array<double, 2> direction{1.0, 0.0};
  std::string type;
  int index = -1;
  double lie_cartan_det = 0.0;
  double lie_cartan_trace = 0.0;
  /// winding of the lifted field, 0 when the oracle could not decide
  int winding = 0;
  friend bool operator==(const GodronRecord&, const GodronRecord&) = default;
};

struct InfinityRecord {
  std::array<double, 2> direction{1.0, 0.0};
  bool representative = true;
  double index = 0.0;
  double raw_index = 0.0;
  double radius = 0.0;
  int Hf_sign_nearby = 0;
  bool sheets_agree = true;
  friend bool operator==(const InfinityRecord&, const InfinityRecord&) = default;
};

struct BranchRecord {
  std::size_t points = 0;
  bool closed = false;
  bool crosses_infinity = false;
  double arc_length = 0.0;
  friend bool operator==(const BranchRecord&, const BranchRecord&) = default;
};

struct AnalysisReport {
  std::string schema = kSchema;
  std::string input;
  std::string canonical;
  int degree = 0;
  int k = 0;
  std::string top_form_class;
  bool transverse_at_infinity = false;

  bool smooth = false;
  bool folds_nondegenerate = true;
  bool top_factors_simple = true;
  bool generic = false;
  std::vector<std::string> genericity_notes;

  bool curve_traced = false;
  bool compact = false;
  int oval_count = 0;
  int points_at_infinity = 0;
  int P = 0;
  int N = 0;
  int chi_Bplus = 0;
  int chi_Bminus = 0;
  std::string H_le0_is = "empty";
  int chi_H_le0 = 0;
  bool H_le0_orientable = true;
  std::vector<int> depth;
  std::vector<BranchRecord> branches;

  bool grid_done = false;
  int grid_chi_Bplus = 0;
  int grid_chi_Bminus = 0;
  std::string grid_H_le0_is = "empty";
  int grid_refinements = 0;

  std::vector<GodronRecord> godrons;
  int P_minus = 0;
  int P_plus = 0;

  std::vector<InfinityRecord> infinity;
  double S_inf = 0.0;

  std::vector<AuditResult> audits;
  std::vector<FailureRecord> failures;
  std::vector<std::string> notes;
  std::optional<double> seconds;

  bool audits_pass() const;
  const AuditResult* audit(const std::string& name) const;
  bool has_failure(const std::string& kind) const;
};

/// Audit names in report order; each appears exactly once per report.
const std::vector<std::string>& audit_names();

struct Analysis {
  BivariatePolynomial f;
  AnalysisReport report;
  CurveSet curves;
};

/// Runs the whole pipeline. Stage errors are caught and stored as failure
/// records; whatever was computed before the failure is kept.
Analysis analyze_full(const BivariatePolynomial& f, const AnalyzeOptions& opt = {},
                      const std::string& input = "");
AnalysisReport analyze(const BivariatePolynomial& f, const AnalyzeOptions& opt = {},
                       const std::string& input = "");

nlohmann::ordered_json to_json(const AnalysisReport& r);
AnalysisReport report_from_json(const nlohmann::ordered_json& j);
/// Floats are written with 17 significant digits.
std::string dump_json(const AnalysisReport& r);

/// Throws std::runtime_error("cannot write PATH") on I/O failure.
void emit_json(const AnalysisReport& r, const std::string& path);
std::string render_svg(const Analysis& a);
void emit_svg(const Analysis& a, const std::string& path);

}  // namespace hatlas
