#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "romns/config.hpp"

namespace romns {

struct LedgerEntry {
  std::string stage;
  std::string config_hash;
  std::vector<std::pair<std::string, std::string>> inputs;   // (artifact, hash)
  std::vector<std::pair<std::string, std::string>> outputs;  // (artifact, hash)
  std::vector<std::pair<std::string, double>> seconds;       // (label, wall clock)
};

/// Append-only record of stage executions in `<stage-dir>/ledger.txt`.
class RunLedger {
 public:
  explicit RunLedger(std::string path);

  const std::vector<LedgerEntry>& entries() const { return entries_; }
  void append(const LedgerEntry& e);

  /// Hash recorded by the most recent stage that wrote `artifact`.
  std::optional<std::string> latest_hash(const std::string& artifact) const;
  /// Most recent duration recorded under (stage, label).
  std::optional<double> latest_seconds(const std::string& stage, const std::string& label) const;

  static std::string format(const LedgerEntry& e);

 private:
  std::string path_;
  std::vector<LedgerEntry> entries_;
};

const std::vector<std::string>& stage_names();

/// Runs one stage, reading upstream artifacts from and writing outputs to
/// `stage_dir`. Progress goes to `log`.
void run_stage(const SimConfig& config, const std::string& stage, const std::string& stage_dir,
               std::ostream& log);

/// fom, homogenize, pod, offline, online, vp-online and compare in order.
void run_all(const SimConfig& config, const std::string& stage_dir, std::ostream& log);

/// Parses `key=value` lines of a summary report.
std::vector<std::pair<std::string, std::string>> parse_report(const std::string& text);

}  // namespace romns
