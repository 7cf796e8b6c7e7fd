#include "fusekit/config.hpp"

#include <charconv>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <set>
#include <sstream>

#include "fusekit/trace_io.hpp"

namespace fusekit {

namespace {

struct RawValue {
  std::string text;
  int line = 0;
};

using RawMap = std::map<std::string, RawValue>;

std::string trim(const std::string& s) {
  const auto begin = s.find_first_not_of(" \t\r");
  if (begin == std::string::npos) return {};
  const auto end = s.find_last_not_of(" \t\r");
  return s.substr(begin, end - begin + 1);
}

RawMap tokenize(const std::string& text) {
  RawMap raw;
  std::istringstream stream(text);
  std::string line;
  int line_no = 0;
  while (std::getline(stream, line)) {
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string::npos) {
      line = line.substr(0, hash);
    }
    const std::string stripped = trim(line);
    if (stripped.empty()) continue;
    const auto eq = stripped.find('=');
    if (eq == std::string::npos) {
      throw ConfigError("line " + std::to_string(line_no) +
                        ": expected key = value");
    }
    const std::string key = trim(stripped.substr(0, eq));
    const std::string value = trim(stripped.substr(eq + 1));
    if (key.empty() || value.empty()) {
      throw ConfigError("line " + std::to_string(line_no) +
                        ": empty key or value");
    }
    if (raw.count(key)) {
      throw ConfigError("line " + std::to_string(line_no) +
                        ": duplicate key \"" + key + "\"");
    }
    raw[key] = RawValue{value, line_no};
  }
  return raw;
}

double parse_double(const std::string& key, const RawValue& v) {
  double out = 0.0;
  const char* first = v.text.data();
  const char* last = first + v.text.size();
  const auto [ptr, ec] = std::from_chars(first, last, out);
  if (ec != std::errc{} || ptr != last) {
    throw ConfigError("line " + std::to_string(v.line) + ": key \"" + key +
                      "\" is not a number: " + v.text);
  }
  return out;
}

std::uint64_t parse_uint(const std::string& key, const RawValue& v) {
  std::uint64_t out = 0;
  const char* first = v.text.data();
  const char* last = first + v.text.size();
  const auto [ptr, ec] = std::from_chars(first, last, out);
  if (ec != std::errc{} || ptr != last) {
    throw ConfigError("line " + std::to_string(v.line) + ": key \"" + key +
                      "\" is not a non-negative integer: " + v.text);
  }
  return out;
}

bool parse_bool(const std::string& key, const RawValue& v) {
  if (v.text == "true") return true;
  if (v.text == "false") return false;
  throw ConfigError("line " + std::to_string(v.line) + ": key \"" + key +
                    "\" must be true or false: " + v.text);
}

class Fields {
 public:
  explicit Fields(RawMap raw) : raw_(std::move(raw)) {}

  bool has(const std::string& key) const { return raw_.count(key) > 0; }

  void take_double(const std::string& key, double& target) {
    if (auto it = raw_.find(key); it != raw_.end()) {
      target = parse_double(key, it->second);
      consumed_.insert(it->first);
    }
  }

  void take_positive(const std::string& key, double& target) {
    take_double(key, target);
    if (!(target > 0.0)) {
      throw DomainError("key \"" + key + "\" must be > 0");
    }
  }

  void take_nonnegative(const std::string& key, double& target) {
    take_double(key, target);
    if (!(target >= 0.0)) {
      throw DomainError("key \"" + key + "\" must be >= 0");
    }
  }

  void take_bool(const std::string& key, bool& target) {
    if (auto it = raw_.find(key); it != raw_.end()) {
      target = parse_bool(key, it->second);
      consumed_.insert(it->first);
    }
  }

  void take_string(const std::string& key, std::string& target) {
    if (auto it = raw_.find(key); it != raw_.end()) {
      target = it->second.text;
      consumed_.insert(it->first);
    }
  }

  std::optional<std::uint64_t> take_uint(const std::string& key) {
    if (auto it = raw_.find(key); it != raw_.end()) {
      consumed_.insert(it->first);
      return parse_uint(key, it->second);
    }
    return std::nullopt;
  }

  std::optional<double> take_optional_double(const std::string& key) {
    if (auto it = raw_.find(key); it != raw_.end()) {
      consumed_.insert(it->first);
      return parse_double(key, it->second);
    }
    return std::nullopt;
  }

  void reject_unconsumed() const {
    for (const auto& [key, value] : raw_) {
      if (!consumed_.count(key)) {
        throw ConfigError("line " + std::to_string(value.line) +
                          ": unknown key \"" + key + "\"");
      }
    }
  }

 private:
  RawMap raw_;
  std::set<std::string> consumed_;
};

void parse_pendulum(Fields& fields, PendulumParams& p) {
  fields.take_positive("g_mps2", p.gravity);
  fields.take_positive("l_m", p.length);
  fields.take_positive("m_kg", p.mass);
  if (fields.has("theta0_deg") && fields.has("theta0_rad")) {
    throw ConfigError("keys theta0_deg and theta0_rad are mutually exclusive");
  }
  if (auto deg = fields.take_optional_double("theta0_deg")) {
    p.theta0 = *deg * kDegToRad;
  }
  if (auto rad = fields.take_optional_double("theta0_rad")) {
    p.theta0 = *rad;
  }
  fields.take_double("theta_dot0_rad_s", p.theta_dot0);
  fields.take_nonnegative("sigma_r", p.sigma_r);
  fields.take_nonnegative("sigma_o", p.sigma_o);
  if (auto f = fields.take_optional_double("filter_sigma_r")) {
    if (!(*f >= 0.0)) {
      throw DomainError("key \"filter_sigma_r\" must be >= 0");
    }
    p.filter_sigma_r = *f;
  }
  fields.take_positive("dt_s", p.dt);
  fields.take_positive("duration_s", p.duration);
  fields.take_positive("rate_hz", p.rate_hz);
  fields.take_bool("linear_truth", p.linear_truth);
  p.validate();
}

void parse_tracking(Fields& fields, TrackingParams& p) {
  fields.take_positive("dt_s", p.dt);
  fields.take_positive("duration_s", p.duration);
  fields.take_nonnegative("sigma_a", p.sigma_a);
  fields.take_nonnegative("sigma_pos", p.sigma_pos);
  fields.take_double("x0_px", p.x0[0]);
  fields.take_double("x0_vx", p.x0[1]);
  fields.take_double("x0_py", p.x0[2]);
  fields.take_double("x0_vy", p.x0[3]);
  p.validate();
}

}  // namespace

RunConfig parse_config(const std::string& text) {
  Fields fields(tokenize(text));

  RunConfig config;
  std::string scenario;
  fields.take_string("scenario", scenario);
  if (scenario.empty()) {
    throw ConfigError("missing required key \"scenario\"");
  }
  if (scenario == "pendulum") {
    config.scenario = ScenarioKind::kPendulum;
    parse_pendulum(fields, config.pendulum);
  } else if (scenario == "tracking") {
    config.scenario = ScenarioKind::kTracking;
    parse_tracking(fields, config.tracking);
  } else {
    throw ConfigError("key \"scenario\" must be pendulum or tracking, got " +
                      scenario);
  }

  const auto seed = fields.take_uint("seed");
  const auto seed_count = fields.take_uint("seeds");
  const auto base_seed = fields.take_uint("base_seed");
  if (seed && (seed_count || base_seed)) {
    throw ConfigError("key \"seed\" excludes \"seeds\"/\"base_seed\"");
  }
  if (seed) {
    config.seeds = {*seed};
  } else if (seed_count) {
    if (*seed_count == 0) {
      throw DomainError("key \"seeds\" must be >= 1");
    }
    config.seeds.clear();
    const std::uint64_t base = base_seed.value_or(1);
    for (std::uint64_t i = 0; i < *seed_count; ++i) {
      config.seeds.push_back(base + i);
    }
  } else if (base_seed) {
    throw ConfigError("key \"base_seed\" requires \"seeds\"");
  }

  fields.take_string("output_dir", config.output_dir);
  fields.take_bool("emit_trace_csv", config.emit_trace_csv);
  fields.take_bool("emit_summary", config.emit_summary);
  fields.take_bool("emit_plot_data", config.emit_plot_data);

  fields.reject_unconsumed();
  return config;
}

std::string render_config(const RunConfig& config) {
  std::ostringstream out;
  const auto real = [&](const char* key, double v) {
    out << key << " = " << format_real(v) << '\n';
  };
  const auto boolean = [&](const char* key, bool v) {
    out << key << " = " << (v ? "true" : "false") << '\n';
  };

  if (config.scenario == ScenarioKind::kPendulum) {
    const PendulumParams& p = config.pendulum;
    out << "scenario = pendulum\n";
    real("g_mps2", p.gravity);
    real("l_m", p.length);
    real("m_kg", p.mass);
    real("theta0_rad", p.theta0);
    real("theta_dot0_rad_s", p.theta_dot0);
    real("sigma_r", p.sigma_r);
    real("sigma_o", p.sigma_o);
    if (p.filter_sigma_r) real("filter_sigma_r", *p.filter_sigma_r);
    real("dt_s", p.dt);
    real("duration_s", p.duration);
    real("rate_hz", p.rate_hz);
    boolean("linear_truth", p.linear_truth);
  } else {
    const TrackingParams& p = config.tracking;
    out << "scenario = tracking\n";
    real("dt_s", p.dt);
    real("duration_s", p.duration);
    real("sigma_a", p.sigma_a);
    real("sigma_pos", p.sigma_pos);
    real("x0_px", p.x0[0]);
    real("x0_vx", p.x0[1]);
    real("x0_py", p.x0[2]);
    real("x0_vy", p.x0[3]);
  }

  if (config.seeds.size() == 1) {
    out << "seed = " << config.seeds.front() << '\n';
  } else {
    out << "seeds = " << config.seeds.size() << '\n';
    out << "base_seed = " << config.seeds.front() << '\n';
  }
  out << "output_dir = " << config.output_dir << '\n';
  boolean("emit_trace_csv", config.emit_trace_csv);
  boolean("emit_summary", config.emit_summary);
  boolean("emit_plot_data", config.emit_plot_data);
  return out.str();
}

namespace {

bool write_file(const std::filesystem::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  out << content;
  return static_cast<bool>(out);
}

}  // namespace

int run_command(const RunConfig& config, bool check) {
  namespace fs = std::filesystem;
  const fs::path out_dir(config.output_dir);
  std::error_code ec;
  fs::create_directories(out_dir, ec);
  if (ec) {
    std::cerr << "error: cannot create output directory " << out_dir << ": "
              << ec.message() << '\n';
    return 2;
  }

  std::vector<ScenarioSummary> summaries;
  summaries.reserve(config.seeds.size());
  for (const std::uint64_t seed : config.seeds) {
    const ScenarioTrace trace =
        config.scenario == ScenarioKind::kPendulum
            ? run_scenario(config.pendulum, seed)
            : run_scenario(config.tracking, seed);
    summaries.push_back(trace.summary);

    if (config.emit_trace_csv) {
      const fs::path path = out_dir / ("trace_" + std::to_string(seed) + ".csv");
      if (!write_file(path, trace_to_csv(trace))) {
        std::cerr << "error: cannot write " << path << '\n';
        return 2;
      }
    }
    if (config.emit_plot_data) {
      const fs::path path = out_dir / ("plot_" + std::to_string(seed) + ".csv");
      if (!write_file(path, trace_to_plot_csv(trace))) {
        std::cerr << "error: cannot write " << path << '\n';
        return 2;
      }
    }
  }

  // Pool over seeds: RMSE through the squared errors, the rest as plain
  // averages over equal-length runs.
  const double count = static_cast<double>(summaries.size());
  ScenarioSummary pooled = summaries.front();
  Vec sq = pooled.rmse.cwiseProduct(pooled.rmse);
  for (std::size_t i = 1; i < summaries.size(); ++i) {
    sq += summaries[i].rmse.cwiseProduct(summaries[i].rmse);
    pooled.containment += summaries[i].containment;
    pooled.innovation_mean += summaries[i].innovation_mean;
    pooled.innovation_cov += summaries[i].innovation_cov;
    pooled.mean_nis += summaries[i].mean_nis;
  }
  pooled.rmse = (sq / count).cwiseSqrt();
  pooled.containment /= count;
  pooled.innovation_mean /= count;
  pooled.innovation_cov /= count;
  pooled.mean_nis /= count;

  const std::string summary_text = summary_to_text(pooled);
  if (config.emit_summary) {
    std::ostringstream full;
    full << "# resolved configuration\n"
         << render_config(config) << "# pooled metrics over "
         << config.seeds.size() << " seed(s)\n"
         << summary_text;
    const fs::path path = out_dir / "summary.txt";
    if (!write_file(path, full.str())) {
      std::cerr << "error: cannot write " << path << '\n';
      return 2;
    }
  }

  std::cout << "seeds: " << config.seeds.size() << '\n' << summary_text;

  if (check && pooled.containment.size() > 0 &&
      pooled.containment.minCoeff() < kContainmentGate) {
    std::cout << "check: FAILED (containment "
              << format_real(pooled.containment.minCoeff()) << " < "
              << format_real(kContainmentGate) << ")\n";
    return 1;
  }
  if (check) {
    std::cout << "check: ok\n";
  }
  return 0;
}

}  // namespace fusekit
