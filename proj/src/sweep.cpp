#include "sfg/sweep.hpp"

#include <atomic>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <stdexcept>
#include <thread>

#include "sfg/analytic.hpp"
#include "sfg/figures.hpp"
#include "sfg/model.hpp"

namespace sfg::sweep {

int worker_count() {
  int n = static_cast<int>(std::thread::hardware_concurrency());
  if (n < 1) n = 1;
  if (const char* env = std::getenv("SFG_THREADS")) {
    const int cap = std::atoi(env);
    if (cap >= 1 && cap < n) n = cap;
  }
  return n;
}

void parallel_for(int n, const std::function<void(int)>& fn) {
  const int workers = std::min(worker_count(), std::max(1, n));
  if (workers == 1) {
    for (int i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<int> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (int w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (;;) {
        const int i = next.fetch_add(1);
        if (i >= n) return;
        try {
          fn(i);
        } catch (...) {
          std::lock_guard<std::mutex> lock(error_mutex);
          if (!error) error = std::current_exception();
        }
      }
    });
  }
  for (auto& t : pool) t.join();
  if (error) std::rethrow_exception(error);
}

// --- CSV ---------------------------------------------------------------------

struct CsvWriter::Impl {
  std::ofstream out;
};

CsvWriter::CsvWriter(const std::string& path) : impl_(new Impl) {
  impl_->out.open(path);
  if (!impl_->out)
    throw std::runtime_error("CsvWriter: cannot open " + path);
}

CsvWriter::~CsvWriter() { delete impl_; }

void CsvWriter::comment(const std::string& key, const std::string& value) {
  impl_->out << "# " << key << "=" << value << "\n";
}

void CsvWriter::comment(const std::string& key, double value) {
  comment(key, num(value));
}

void CsvWriter::header(const std::vector<std::string>& columns) {
  for (size_t i = 0; i < columns.size(); ++i)
    impl_->out << columns[i] << (i + 1 < columns.size() ? "," : "\n");
}

void CsvWriter::row(const std::vector<std::string>& cells) {
  for (size_t i = 0; i < cells.size(); ++i)
    impl_->out << cells[i] << (i + 1 < cells.size() ? "," : "\n");
}

std::string CsvWriter::num(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

// --- sweep -------------------------------------------------------------------

std::vector<double> AxisSpec::values() const {
  std::vector<double> out(steps);
  if (scale == "log") {
    const double la = std::log(min), lb = std::log(max);
    for (int i = 0; i < steps; ++i)
      out[i] = std::exp(la + (lb - la) * i / (steps - 1));
  } else {
    for (int i = 0; i < steps; ++i)
      out[i] = min + (max - min) * i / (steps - 1);
  }
  return out;
}

SweepConfig parse_sweep_config(const nlohmann::json& j) {
  SweepConfig cfg;
  cfg.quantity = j.at("quantity").get<std::string>();
  for (const auto& a : j.at("axes")) {
    AxisSpec ax;
    ax.name = a.at("name").get<std::string>();
    ax.min = a.at("min").get<double>();
    ax.max = a.at("max").get<double>();
    ax.steps = a.at("steps").get<int>();
    if (a.contains("scale")) ax.scale = a.at("scale").get<std::string>();
    cfg.axes.push_back(ax);
  }
  if (j.contains("fixed"))
    for (const auto& [k, v] : j.at("fixed").items())
      cfg.fixed[k] = v.get<double>();
  cfg.output_path = j.at("output_path").get<std::string>();
  validate(cfg);
  return cfg;
}

void validate(const SweepConfig& cfg) {
  static const std::vector<std::string> known = {
      "efficiency", "optimal_efficiency", "fidelity", "width_ratio", "renyi2"};
  bool ok = false;
  for (const auto& k : known) ok = ok || k == cfg.quantity;
  if (!ok)
    throw invalid_parameter("SweepConfig: unknown quantity '" + cfg.quantity +
                            "'");
  if (cfg.axes.empty() || cfg.axes.size() > 2)
    throw invalid_parameter("SweepConfig: need 1 or 2 swept axes");
  for (const auto& ax : cfg.axes) {
    if (ax.steps < 2) throw invalid_parameter("SweepConfig: steps must be >= 2");
    if (!(ax.min < ax.max))
      throw invalid_parameter("SweepConfig: min must be < max");
    if (ax.scale != "linear" && ax.scale != "log")
      throw invalid_parameter("SweepConfig: scale must be linear or log");
    if (ax.scale == "log" && !(ax.min > 0.0))
      throw invalid_parameter("SweepConfig: log axis requires min > 0");
  }
  if (cfg.output_path.empty())
    throw invalid_parameter("SweepConfig: output_path missing");

  auto have = [&](const std::string& name) {
    if (cfg.fixed.count(name)) return true;
    for (const auto& ax : cfg.axes)
      if (ax.name == name) return true;
    return false;
  };
  auto require = [&](std::initializer_list<const char*> names) {
    for (const char* n : names)
      if (!have(n))
        throw invalid_parameter("SweepConfig: quantity '" + cfg.quantity +
                                "' requires parameter '" + n + "'");
  };
  if (cfg.quantity == "efficiency") require({"p", "q", "T"});
  if (cfg.quantity == "optimal_efficiency") require({"q", "T"});
  if (cfg.quantity == "fidelity") require({"q", "T"});
  if (cfg.quantity == "width_ratio") require({"q0", "q"});
  if (cfg.quantity == "renyi2") require({"S", "q"});
}

namespace {

struct Point {
  std::map<std::string, double> values;
  double get(const std::string& name) const {
    auto it = values.find(name);
    if (it == values.end())
      throw invalid_parameter("sweep point is missing parameter " + name);
    return it->second;
  }
  double get_or(const std::string& name, double fallback) const {
    auto it = values.find(name);
    return it == values.end() ? fallback : it->second;
  }
};

// Evaluate one sweep point. Returns value plus a status tag for cells that
// needed a fallback or are undefined.
std::pair<double, std::string> evaluate(const std::string& quantity,
                                        const Point& pt) {
  using namespace sfg::analytic;
  if (quantity == "efficiency") {
    DimensionlessParams d;
    d.p = pt.get("p");
    d.q = pt.get("q");
    d.T = pt.get("T");
    return {efficiency(d).value, "ok"};
  }
  if (quantity == "optimal_efficiency") {
    const double q = pt.get("q"), T = pt.get("T");
    try {
      const double p_hat = optimal_p_estimate(q, T);
      DimensionlessParams d;
      d.p = p_hat;
      d.q = q;
      d.T = T;
      return {efficiency(d).value, "ok"};
    } catch (const no_peak_error&) {
      return {optimal_p_refined(q, T).efficiency, "scan_fallback"};
    }
  }
  if (quantity == "fidelity") {
    const double q = pt.get("q"), T = pt.get("T");
    double p = pt.get_or("p", -1.0);
    std::string status = "ok";
    if (p <= 0.0) {
      try {
        p = optimal_p_estimate(q, T);
      } catch (const no_peak_error&) {
        p = optimal_p_refined(q, T).p;
        status = "scan_fallback";
      }
    }
    const PhysicalPoint phys = canonical_point(p, q, T);
    return {fidelity_first_order(phys.photon, phys.escort, phys.gamma),
            status};
  }
  if (quantity == "width_ratio") {
    const double q0 = pt.get("q0"), q = pt.get("q");
    if (!figures::compression_accessible(q0, q))
      return {std::nan(""), "inaccessible"};
    const double p = optimal_p_refined(q, 0.0).p;
    const int n_a = static_cast<int>(pt.get_or("n_a", 4096));
    const int n_h = static_cast<int>(pt.get_or("n_h", 128));
    return {figures::width_ratio_cell(q0, q, p, n_a, n_h), "ok"};
  }
  if (quantity == "renyi2") {
    const double S = pt.get("S"), q = pt.get("q");
    const double s1 = pt.get_or("sigma1", 1.0);
    const double sh = pt.get_or("sigma_h", 1.0);
    double p = pt.get_or("p", -1.0);
    if (p <= 0.0) p = optimal_p_refined(q, 0.0).p;
    return {upconverted_purity(S, s1, sh, p, q).renyi2, "ok"};
  }
  throw invalid_parameter("unknown sweep quantity " + quantity);
}

}  // namespace

void run_sweep(const SweepConfig& cfg) {
  validate(cfg);
  std::vector<std::vector<double>> axis_values;
  for (const auto& ax : cfg.axes) axis_values.push_back(ax.values());

  const int n0 = static_cast<int>(axis_values[0].size());
  const int n1 = cfg.axes.size() == 2 ? static_cast<int>(axis_values[1].size())
                                      : 1;
  const int total = n0 * n1;
  std::vector<double> results(total);
  std::vector<std::string> statuses(total);

  parallel_for(total, [&](int idx) {
    Point pt;
    for (const auto& [k, v] : cfg.fixed) pt.values[k] = v;
    pt.values[cfg.axes[0].name] = axis_values[0][idx / n1];
    if (cfg.axes.size() == 2)
      pt.values[cfg.axes[1].name] = axis_values[1][idx % n1];
    const auto [value, status] = evaluate(cfg.quantity, pt);
    results[idx] = value;
    statuses[idx] = status;
  });

  CsvWriter csv(cfg.output_path);
  csv.comment("tool", figures::tool_version());
  csv.comment("quantity", cfg.quantity);
  for (const auto& ax : cfg.axes)
    csv.comment("axis_" + ax.name,
                CsvWriter::num(ax.min) + ".." + CsvWriter::num(ax.max) + " x" +
                    std::to_string(ax.steps) + " " + ax.scale);
  for (const auto& [k, v] : cfg.fixed) csv.comment("fixed_" + k, v);

  std::vector<std::string> cols;
  for (const auto& ax : cfg.axes) cols.push_back(ax.name);
  cols.push_back(cfg.quantity);
  cols.push_back("status");
  csv.header(cols);
  for (int idx = 0; idx < total; ++idx) {
    std::vector<std::string> cells;
    cells.push_back(CsvWriter::num(axis_values[0][idx / n1]));
    if (cfg.axes.size() == 2)
      cells.push_back(CsvWriter::num(axis_values[1][idx % n1]));
    cells.push_back(CsvWriter::num(results[idx]));
    cells.push_back(statuses[idx]);
    csv.row(cells);
  }
}

}  // namespace sfg::sweep
