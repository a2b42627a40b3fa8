#include "report.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "error.hpp"

namespace ghostsim {

namespace {

nlohmann::json finite_or_null(double v) { return std::isfinite(v) ? nlohmann::json(v) : nlohmann::json(nullptr); }

}  // namespace

std::string format_number(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void write_scan_csv(const CorrelationResult& r, std::ostream& out) {
  out << kScanCsvHeader << '\n';
  for (std::size_t i = 0; i < r.records.size(); ++i) {
    const auto& p = r.records[i];
    out << format_number(p.x_r) << ',' << format_number(p.g2) << ',' << format_number(r.g2_norm(i)) << ','
        << format_number(p.noise) << ',' << format_number(r.dg2_norm(i)) << ',' << format_number(r.dg2_avg_norm(i))
        << ',' << format_number(p.snr) << ',' << format_number(r.snr_avg(i)) << ',' << r.flags(i) << '\n';
  }
}

nlohmann::json scan_to_json(const CorrelationResult& r, const nlohmann::json& provenance) {
  nlohmann::json records = nlohmann::json::array();
  for (std::size_t i = 0; i < r.records.size(); ++i) {
    const auto& p = r.records[i];
    records.push_back({{"x_r_mm", p.x_r},
                       {"g2", p.g2},
                       {"g2_norm", r.g2_norm(i)},
                       {"dg2", p.noise},
                       {"dg2_norm", r.dg2_norm(i)},
                       {"dg2_avg_norm", r.dg2_avg_norm(i)},
                       {"snr", finite_or_null(p.snr)},
                       {"snr_avg", finite_or_null(r.snr_avg(i))},
                       {"i_t", p.i_t},
                       {"i_r", p.i_r},
                       {"second_moment", p.second_moment},
                       {"flags", r.flags(i)}});
  }
  return {{"x_t_mm", r.config.x_t_fixed},
          {"n_pairs", r.n_pairs},
          {"g2_max", r.g2_max},
          {"records", records},
          {"config", provenance}};
}

nlohmann::json sweep_to_json(std::span<const SweepSummary> sweep) {
  nlohmann::json out = nlohmann::json::array();
  for (const auto& s : sweep) {
    out.push_back({{"aperture_mm", s.aperture_mm},
                   {"peak_snr", finite_or_null(s.peak_snr)},
                   {"peak_positions_mm", s.peak_positions_mm},
                   {"contrast", s.contrast ? nlohmann::json(*s.contrast) : nlohmann::json(nullptr)},
                   {"noise_amplitude", s.noise_amplitude}});
  }
  return out;
}

void write_file_atomically(const std::filesystem::path& path, const std::string& content) {
  if (path.empty()) throw Error(ErrorCode::Io, "no output path given");
  auto tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(ErrorCode::Io, "cannot write " + tmp.string());
    out << content;
    out.flush();
    if (!out) throw Error(ErrorCode::Io, "write failed for " + tmp.string());
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    std::filesystem::remove(tmp, ec);
    throw Error(ErrorCode::Io, "cannot move output into place at " + path.string());
  }
}

}  // namespace ghostsim
