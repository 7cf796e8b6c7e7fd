#include "fusekit/trace_io.hpp"

#include <charconv>
#include <sstream>

namespace fusekit {

std::string format_real(double value) {
  char buf[40];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), value,
                                       std::chars_format::general, 17);
  (void)ec;
  return std::string(buf, ptr);
}

namespace {

void append_header_group(std::ostringstream& out, const char* prefix,
                         Eigen::Index count) {
  for (Eigen::Index i = 0; i < count; ++i) {
    out << ',' << prefix << '_' << i;
  }
}

void append_values(std::ostringstream& out, const Vec& values) {
  for (Eigen::Index i = 0; i < values.size(); ++i) {
    out << ',' << format_real(values[i]);
  }
}

void append_optional(std::ostringstream& out, const std::optional<Vec>& values,
                     Eigen::Index count) {
  if (values) {
    append_values(out, *values);
  } else {
    for (Eigen::Index i = 0; i < count; ++i) out << ",NA";
  }
}

}  // namespace

std::string trace_to_csv(const ScenarioTrace& trace) {
  if (trace.records.empty()) {
    throw DomainError("trace_to_csv: empty trace");
  }
  const Eigen::Index n = trace.state_dim();
  const Eigen::Index d = trace.meas_dim();

  std::ostringstream out;
  out << 't';
  append_header_group(out, "x_true", n);
  append_header_group(out, "z", d);
  append_header_group(out, "x_hat", n);
  append_header_group(out, "p_diag", n);
  append_header_group(out, "nu", d);
  append_header_group(out, "sig3", n);
  out << '\n';

  for (const auto& rec : trace.records) {
    out << format_real(rec.t);
    append_values(out, rec.x_true);
    append_optional(out, rec.z, d);
    append_values(out, rec.x_hat);
    append_values(out, rec.p_diag);
    append_optional(out, rec.nu, d);
    append_values(out, rec.three_sigma);
    out << '\n';
  }
  return out.str();
}

std::string trace_to_plot_csv(const ScenarioTrace& trace) {
  if (trace.records.empty()) {
    throw DomainError("trace_to_plot_csv: empty trace");
  }
  const Eigen::Index n = trace.state_dim();

  std::ostringstream out;
  out << 't';
  append_header_group(out, "truth", n);
  append_header_group(out, "estimate", n);
  append_header_group(out, "lo3", n);
  append_header_group(out, "hi3", n);
  out << '\n';
  for (const auto& rec : trace.records) {
    out << format_real(rec.t);
    append_values(out, rec.x_true);
    append_values(out, rec.x_hat);
    append_values(out, rec.x_hat - rec.three_sigma);
    append_values(out, rec.x_hat + rec.three_sigma);
    out << '\n';
  }
  return out.str();
}

std::string summary_to_text(const ScenarioSummary& summary) {
  std::ostringstream out;
  for (Eigen::Index i = 0; i < summary.rmse.size(); ++i) {
    out << "rmse_" << i << ": " << format_real(summary.rmse[i]) << '\n';
  }
  for (Eigen::Index i = 0; i < summary.containment.size(); ++i) {
    out << "containment_" << i << ": " << format_real(summary.containment[i])
        << '\n';
  }
  for (Eigen::Index i = 0; i < summary.innovation_mean.size(); ++i) {
    out << "innovation_mean_" << i << ": "
        << format_real(summary.innovation_mean[i]) << '\n';
  }
  out << "mean_nis: " << format_real(summary.mean_nis) << '\n';
  return out.str();
}

}  // namespace fusekit
