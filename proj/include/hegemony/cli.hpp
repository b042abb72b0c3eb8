#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "hegemony/core.hpp"

namespace hegemony::cli {

inline constexpr int kOk = 0;
inline constexpr int kInputError = 1;
inline constexpr int kEmptyResult = 2;

struct CommonOptions {
  std::vector<std::string> inputs;
  std::string output = "-";          // '-' writes to stdout, no manifest
  std::string format = "csv";        // csv | json
  std::string input_format = "auto"; // auto | text | mrt
  std::string collector;             // collector label for MRT inputs
  std::string date;                  // snapshot date override (YYYY-MM-DD)
  HegemonyConfig config;
  unsigned jobs = 0; // 0 = all cores; never affects output bytes
  std::uint64_t seed = 1;
};

struct GlobalOptions : CommonOptions {};

struct LocalOptions : CommonOptions {
  std::vector<Asn> origins;   // explicit origin list
  bool all = false;           // sweep every origin
  std::string summary_output; // optional per-origin dependency counts CSV
  double summary_threshold = 0.01;
};

struct TimeseriesOptions {
  std::vector<std::string> inputs; // score CSVs produced by global/local runs
  std::string output = "-";
  bool force = false; // concatenate even when configs differ or manifests miss
};

struct RobustnessOptions : CommonOptions {
  std::string topology;        // edge-list file; when empty, inputs are RIBs
  std::vector<Asn> viewpoints; // overrides the topology's viewpoint list
  std::vector<std::size_t> ks{5, 10, 20, 40};
  std::size_t trials = 30;
  std::string metric = "both"; // bc | hegemony | both
};

/// Ranked hegemony over the global graph. Writes the table plus a
/// `<output>.manifest.json` sidecar when output names a file.
int cmd_global(const GlobalOptions& options, std::ostream& err);

/// Per-origin local-graph hegemony; `--all` sweeps every origin in one pass.
int cmd_local(const LocalOptions& options, std::ostream& err);

/// Concatenates per-snapshot outputs into a date-tagged long table, refusing
/// inputs with mismatched alpha/weighting unless forced.
int cmd_timeseries(const TimeseriesOptions& options, std::ostream& err);

/// Viewpoint-subsampling KL-divergence experiment over a topology file or
/// RIB inputs.
int cmd_robustness(const RobustnessOptions& options, std::ostream& err);

} // namespace hegemony::cli
