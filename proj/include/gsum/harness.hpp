#pragma once

// Curlicue export, the benchmark runner and JSON reports shared by the CLI
// and the acceptance runner.

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "gsum/numeric.hpp"
#include "json.hpp"

namespace gsum {

inline constexpr const char* kVersion = "0.1.0";
inline constexpr std::int64_t kMaxPathLength = 10'000'000;

/// S(0), S(1), ..., S(N) by incremental summation with reduced_phase.
struct CurlicuePath {
  Params params;
  std::int64_t N = 0;
  std::vector<Complex> points;
  /// Filled when annotated: L(n) and a_{L(n)}, with L(0) = -1.
  std::vector<int> level;
  std::vector<double> a_level;
};

/// Throws domain-error ("memory-guard") for N above kMaxPathLength.
CurlicuePath curlicue_path(std::int64_t N, const Params& p, const PrecisionConfig& cfg = {},
                           bool annotate = false);

/// Columns n, re, im and, when annotated, L, a_L.
void write_curlicue_csv(const CurlicuePath& path, std::ostream& out);

/// Largest |S(n+1) - S(n)| - 1| along the path.
double max_increment_defect(const CurlicuePath& path);

struct ArcComparison {
  int L = 0;
  double a_L = 0.0;
  double b_L = 0.0;
  std::int64_t N_minus = 0;
  std::int64_t N_plus = 0;
  std::size_t path_points = 0;  // N in [N^-(L), N^+(L)] with xi_L - b_L <= 1/2
  std::size_t arc_points = 0;
  double hausdorff = 0.0;       // in normalized coordinates
  double C = 0.0;               // hausdorff / sqrt(a_L)
};

/// Maps S(N) for N on level L through z -> conj^L(z e(-theta_{L+1}) sqrt(a_0..a_L)),
/// which carries the leading term onto the Cornu arc
/// t -> integral of e(-tau^2/2) over [-b_L/sqrt(a_L), t], and measures the
/// Hausdorff distance between the two sets. The arc is sampled at arc_points
/// values of t.
ArcComparison compare_to_fresnel_arc(int L, const Params& p, std::size_t arc_points,
                                     const PrecisionConfig& cfg = {});

struct BenchRecord {
  std::int64_t N = 0;
  std::string method;  // "naive" or "renorm"
  std::int64_t wall_ns = 0;
  Complex value;
  std::optional<double> residual;  // |naive - renorm| when both ran
};

/// Median wall time over reps for each N. The naive sum runs only for
/// N <= naive_limit.
std::vector<BenchRecord> bench(const std::vector<std::int64_t>& Ns, const Params& p,
                               const PrecisionConfig& cfg = {}, int reps = 5,
                               std::int64_t naive_limit = 10'000'000);

// -- reports ---------------------------------------------------------------

using Json = nlohmann::ordered_json;

Json complex_json(Complex z);
Json config_json(const PrecisionConfig& cfg);

/// {"tool", "version", "command", "seed", "config", "outputs"}; keys are
/// emitted in a fixed order so equal runs give identical bytes.
Json make_report(const std::string& command, const Json& config, std::optional<std::uint64_t> seed,
                 const Json& outputs);

/// Writes text to path, or to stdout for an empty path; io error when the
/// file cannot be written.
void write_output(const std::string& path, const std::string& text);

/// Parses a report back; io error on malformed input.
Json parse_report(const std::string& text);

}  // namespace gsum
