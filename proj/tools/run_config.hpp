#pragma once

#include <string>
#include <vector>

namespace qsw::cli {

// Resolved configuration of a `simulate` run. Serialized into CSV metadata as
// `config.<key>=<value>` lines; parsing those lines back yields an identical
// value (doubles round-trip through %.17g).
struct RunConfig {
  std::string model = "decoherent";  // decoherent | congestion
  int n = 6;
  std::vector<double> tau;    // per-client LLE success probabilities (decoherent)
  std::string profile = "uniform";  // uniform | skewed
  double load = -1.0;               // total load; < 0 means "probs given directly"
  std::vector<int> heavy;           // skewed profile heavy types; empty = default
  std::vector<double> probs;        // per-type request probabilities
  std::vector<double> lleProbs;     // per-client LLE probabilities (congestion)
  double alpha = 1.0;
  double gamma = 2.0;
  double delta = -1.0;  // < 0 means regime default 2(gamma+alpha)+alpha
  int memory = -1;      // < 0 means required minimum
  bool literalService = false;
  bool force = false;
  long long slots = 10000;
  unsigned long long seed = 1;
  long long checkpoint = 500;

  bool operator==(const RunConfig&) const = default;

  // key=value lines, fixed order, no prefix.
  std::vector<std::string> toLines() const;
  // Strict parse; unknown keys or malformed values throw std::invalid_argument.
  static RunConfig fromLines(const std::vector<std::string>& lines);
};

// Applies one key=value setting; unknown keys throw std::invalid_argument.
// Both the config-file loader and the flag layer funnel through this.
void applyKeyValue(RunConfig& config, const std::string& key, const std::string& value);

// Shared little parsers used by the CLI flags and the config file.
std::vector<double> parseDoubleList(const std::string& text);
std::vector<int> parseIntList(const std::string& text);
std::string joinDoubles(const std::vector<double>& xs);  // %.17g, comma-joined

// key=value config file with '#' comments; unknown keys are errors (the caller
// passes the recognized key handler).
std::vector<std::pair<std::string, std::string>> readKeyValueFile(const std::string& path);

}  // namespace qsw::cli
