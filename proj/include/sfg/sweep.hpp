#ifndef SFG_SWEEP_HPP
#define SFG_SWEEP_HPP

#include <functional>
#include <map>
#include <string>
#include <vector>

#include "json.hpp"
#include "sfg/types.hpp"

namespace sfg::sweep {

/// Worker pool size: SFG_THREADS when set, hardware concurrency otherwise.
int worker_count();

/// Run fn(0..n-1) on the worker pool. Results must be written to
/// index-addressed storage so output order never depends on scheduling.
void parallel_for(int n, const std::function<void(int)>& fn);

/// CSV output with '#'-prefixed provenance comments, a header row, and
/// "%.12g"-formatted numbers (identical config => byte-identical file).
class CsvWriter {
 public:
  explicit CsvWriter(const std::string& path);
  ~CsvWriter();
  CsvWriter(const CsvWriter&) = delete;
  CsvWriter& operator=(const CsvWriter&) = delete;

  void comment(const std::string& key, const std::string& value);
  void comment(const std::string& key, double value);
  void header(const std::vector<std::string>& columns);
  void row(const std::vector<std::string>& cells);

  static std::string num(double v);

 private:
  struct Impl;
  Impl* impl_;
};

struct AxisSpec {
  std::string name;
  double min = 0.0;
  double max = 1.0;
  int steps = 2;
  std::string scale = "linear";  // or "log"

  std::vector<double> values() const;
};

/// Generic parameter sweep: a quantity evaluated over one or two swept
/// parameters with the remaining ones fixed.
struct SweepConfig {
  std::string quantity;  // efficiency|optimal_efficiency|fidelity|width_ratio|renyi2
  std::vector<AxisSpec> axes;
  std::map<std::string, double> fixed;
  std::string output_path;
};

SweepConfig parse_sweep_config(const nlohmann::json& j);
void validate(const SweepConfig& config);
void run_sweep(const SweepConfig& config);

}  // namespace sfg::sweep

#endif  // SFG_SWEEP_HPP
