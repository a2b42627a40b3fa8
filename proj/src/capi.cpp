#include "ghostsim/ghostsim.h"

#include <cmath>
#include <cstdlib>
#include <cstring>
#include <exception>
#include <new>
#include <sstream>
#include <string>
#include <vector>

#include "config.hpp"
#include "error.hpp"
#include "experiments.hpp"
#include "report.hpp"
#include "source.hpp"
#include "validation.hpp"

struct gs_config {
  ghostsim::RunConfig config;
};

struct gs_scan {
  ghostsim::CorrelationResult result;
  nlohmann::json provenance;
};

struct gs_sweep {
  std::vector<ghostsim::SweepSummary> summaries;
};

namespace {

thread_local std::string last_error;

gs_status code_to_status(ghostsim::ErrorCode c) {
  using ghostsim::ErrorCode;
  switch (c) {
    case ErrorCode::InvalidArgument: return GS_ERR_INVALID_ARGUMENT;
    case ErrorCode::NumericDomain: return GS_ERR_NUMERIC_DOMAIN;
    case ErrorCode::Truncation: return GS_ERR_TRUNCATION;
    case ErrorCode::NormalizationViolation: return GS_ERR_NORMALIZATION;
    case ErrorCode::UndefinedContrast: return GS_ERR_UNDEFINED_CONTRAST;
    case ErrorCode::Parse: return GS_ERR_PARSE;
    case ErrorCode::Config: return GS_ERR_CONFIG;
    case ErrorCode::Io: return GS_ERR_IO;
    case ErrorCode::Internal: return GS_ERR_INTERNAL;
  }
  return GS_ERR_INTERNAL;
}

gs_status fail(gs_status s, std::string msg) {
  last_error = std::move(msg);
  return s;
}

// Runs body, translating exceptions into status codes.
template <class F>
gs_status guard(F&& body) {
  try {
    body();
    last_error.clear();
    return GS_OK;
  } catch (const ghostsim::Error& e) {
    return fail(code_to_status(e.code()), e.what());
  } catch (const std::bad_alloc&) {
    return fail(GS_ERR_INTERNAL, "out of memory");
  } catch (const std::exception& e) {
    return fail(GS_ERR_INTERNAL, e.what());
  } catch (...) {
    return fail(GS_ERR_INTERNAL, "unknown error");
  }
}

gs_status null_arg(const char* what) { return fail(GS_ERR_INVALID_ARGUMENT, std::string(what) + " is null"); }

char* dup_string(const std::string& s) {
  auto* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (!out) throw std::bad_alloc();
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

unsigned flag_bits(const ghostsim::PointStatistics& p) {
  unsigned f = 0;
  if (p.g2_zero) f |= GS_FLAG_G2_ZERO;
  if (std::isinf(p.snr)) f |= GS_FLAG_SNR_INF;
  if (p.noise_clamped) f |= GS_FLAG_NOISE_CLAMPED;
  return f;
}

}  // namespace

extern "C" {

const char* gs_last_error(void) { return last_error.c_str(); }

const char* gs_status_name(gs_status s) {
  switch (s) {
    case GS_OK: return "ok";
    case GS_ERR_INVALID_ARGUMENT: return "invalid argument";
    case GS_ERR_NUMERIC_DOMAIN: return "numeric domain error";
    case GS_ERR_TRUNCATION: return "truncation error";
    case GS_ERR_NORMALIZATION: return "normalization violation";
    case GS_ERR_UNDEFINED_CONTRAST: return "undefined contrast";
    case GS_ERR_PARSE: return "parse error";
    case GS_ERR_CONFIG: return "configuration error";
    case GS_ERR_IO: return "i/o error";
    case GS_ERR_INTERNAL: return "internal error";
  }
  return "unknown status";
}

gs_status gs_config_load(const char* path, gs_config** out) {
  if (!path) return null_arg("path");
  if (!out) return null_arg("out");
  *out = nullptr;
  return guard([&] { *out = new gs_config{ghostsim::load_config(path)}; });
}

gs_status gs_config_parse(const char* text, const char* base_dir, gs_config** out) {
  if (!text) return null_arg("json_text");
  if (!out) return null_arg("out");
  *out = nullptr;
  return guard([&] {
    *out = new gs_config{ghostsim::parse_config(text, base_dir ? std::filesystem::path(base_dir)
                                                               : std::filesystem::current_path())};
  });
}

gs_status gs_config_to_json(const gs_config* c, char** out) {
  if (!c) return null_arg("config");
  if (!out) return null_arg("out");
  return guard([&] { *out = dup_string(ghostsim::to_json(c->config).dump(2) + "\n"); });
}

gs_status gs_config_output_path(const gs_config* c, char** out) {
  if (!c) return null_arg("config");
  if (!out) return null_arg("out");
  return guard([&] { *out = dup_string(c->config.output.path); });
}

gs_status gs_config_output_format(const gs_config* c, gs_format* out) {
  if (!c) return null_arg("config");
  if (!out) return null_arg("out");
  *out = c->config.output.format == ghostsim::OutputFormat::Json ? GS_FORMAT_JSON : GS_FORMAT_CSV;
  return GS_OK;
}

gs_status gs_config_set_aperture(gs_config* c, double D_mm) {
  if (!c) return null_arg("config");
  auto* rect = std::get_if<ghostsim::RectPupilSpec>(&c->config.reference_arm.pupil);
  if (!rect) return fail(GS_ERR_CONFIG, std::string(ghostsim::kApertureParam) + ": pupil is not rect");
  if (!(D_mm > 0.0) || !std::isfinite(D_mm)) {
    return fail(GS_ERR_CONFIG, std::string(ghostsim::kApertureParam) + ": must be a positive length");
  }
  rect->D_mm = D_mm;
  return GS_OK;
}

gs_status gs_config_set_grids(gs_config* c, long long n_x, long long n_xp) {
  if (!c) return null_arg("config");
  if (n_x < 3 || n_xp < 3) return fail(GS_ERR_CONFIG, "numerics: n_x and n_xp must be >= 3");
  c->config.numerics.n_x = n_x;
  c->config.numerics.n_xp = n_xp;
  return GS_OK;
}

void gs_config_free(gs_config* c) { delete c; }

void gs_string_free(char* s) { std::free(s); }

gs_status gs_scan_run(const gs_config* c, unsigned threads, gs_scan** out) {
  if (!c) return null_arg("config");
  if (!out) return null_arg("out");
  *out = nullptr;
  return guard([&] {
    auto result = ghostsim::scan_reference(c->config.to_scan_config(threads));
    *out = new gs_scan{std::move(result), ghostsim::to_json(c->config)};
  });
}

size_t gs_scan_size(const gs_scan* s) { return s ? s->result.records.size() : 0; }

gs_status gs_scan_point(const gs_scan* s, size_t i, gs_point* out) {
  if (!s) return null_arg("scan");
  if (!out) return null_arg("out");
  if (i >= s->result.records.size()) return fail(GS_ERR_INVALID_ARGUMENT, "point index out of range");
  const auto& r = s->result;
  const auto& p = r.records[i];
  *out = gs_point{p.x_r, p.g2, r.g2_norm(i), p.noise, r.dg2_norm(i), r.dg2_avg_norm(i), p.snr, r.snr_avg(i),
                  flag_bits(p)};
  return GS_OK;
}

double gs_scan_g2_max(const gs_scan* s) { return s ? s->result.g2_max : 0.0; }

gs_status gs_scan_contrast(const gs_scan* s, double* out) {
  if (!s) return null_arg("scan");
  if (!out) return null_arg("out");
  return guard([&] { *out = ghostsim::contrast_metric(s->result); });
}

gs_status gs_scan_write(const gs_scan* s, const char* path, gs_format format) {
  if (!s) return null_arg("scan");
  if (!path) return null_arg("path");
  return guard([&] {
    std::string content;
    if (format == GS_FORMAT_JSON) {
      content = ghostsim::scan_to_json(s->result, s->provenance).dump(2) + "\n";
    } else {
      std::ostringstream os;
      ghostsim::write_scan_csv(s->result, os);
      content = os.str();
    }
    ghostsim::write_file_atomically(path, content);
  });
}

void gs_scan_free(gs_scan* s) { delete s; }

gs_status gs_sweep_run(const gs_config* c, const double* apertures, size_t count, unsigned threads, gs_sweep** out) {
  if (!c) return null_arg("config");
  if (!out) return null_arg("out");
  if (!apertures && count > 0) return null_arg("apertures_mm");
  *out = nullptr;
  return guard([&] {
    const std::vector<double> d(apertures, apertures + count);
    *out = new gs_sweep{ghostsim::aperture_sweep(c->config.to_scan_config(threads), d)};
  });
}

size_t gs_sweep_size(const gs_sweep* s) { return s ? s->summaries.size() : 0; }

gs_status gs_sweep_summary_at(const gs_sweep* s, size_t i, gs_sweep_summary* out) {
  if (!s) return null_arg("sweep");
  if (!out) return null_arg("out");
  if (i >= s->summaries.size()) return fail(GS_ERR_INVALID_ARGUMENT, "summary index out of range");
  const auto& m = s->summaries[i];
  *out = gs_sweep_summary{m.aperture_mm, m.peak_snr, m.contrast.value_or(0.0), m.contrast ? 1 : 0, m.noise_amplitude,
                          m.peak_positions_mm.size()};
  return GS_OK;
}

gs_status gs_sweep_peak_position(const gs_sweep* s, size_t i, size_t k, double* out) {
  if (!s) return null_arg("sweep");
  if (!out) return null_arg("out");
  if (i >= s->summaries.size() || k >= s->summaries[i].peak_positions_mm.size()) {
    return fail(GS_ERR_INVALID_ARGUMENT, "peak index out of range");
  }
  *out = s->summaries[i].peak_positions_mm[k];
  return GS_OK;
}

size_t gs_sweep_monotonicity_violations(const gs_sweep* s) {
  return s ? ghostsim::contrast_monotonicity_violations(s->summaries).size() : 0;
}

gs_status gs_sweep_write_json(const gs_sweep* s, const char* path) {
  if (!s) return null_arg("sweep");
  if (!path) return null_arg("path");
  return guard([&] { ghostsim::write_file_atomically(path, ghostsim::sweep_to_json(s->summaries).dump(2) + "\n"); });
}

void gs_sweep_free(gs_sweep* s) { delete s; }

gs_status gs_validate(gs_check_callback callback, void* user, int* all_passed) {
  if (!all_passed) return null_arg("all_passed");
  return guard([&] {
    const auto results = ghostsim::run_validation_suite();
    bool ok = true;
    for (const auto& r : results) {
      ok = ok && r.passed;
      if (callback) callback(r.name.c_str(), r.passed ? 1 : 0, r.detail.c_str(), user);
    }
    *all_passed = ok ? 1 : 0;
  });
}

void gs_debug_set_norm_fault(double factor) { ghostsim::detail::set_normalization_fault(factor); }

}  // extern "C"
