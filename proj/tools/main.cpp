#include <cerrno>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "ghostsim/ghostsim.h"

namespace {

enum Exit { kOk = 0, kValidationFailed = 1, kUsage = 2, kRuntime = 3 };

int report(const char* what, gs_status s) {
  std::fprintf(stderr, "ghostsim: %s: %s: %s\n", what, gs_status_name(s), gs_last_error());
  switch (s) {
    case GS_ERR_PARSE:
    case GS_ERR_CONFIG:
    case GS_ERR_IO:
      return kUsage;
    default:
      return kRuntime;
  }
}

struct ConfigHandle {
  gs_config* p = nullptr;
  ~ConfigHandle() { gs_config_free(p); }
};

int load(const std::string& path, ConfigHandle& h) {
  const gs_status s = gs_config_load(path.c_str(), &h.p);
  // Any failure to produce a valid configuration is a usage error.
  if (s != GS_OK) {
    report("config", s);
    return kUsage;
  }
  return kOk;
}

// Errors after loading are configuration problems only when flagged as such.
int run_error(const char* what, gs_status s) {
  const int code = report(what, s);
  return s == GS_ERR_IO ? kRuntime : code;
}

bool parse_values(const std::string& text, std::vector<double>& out, std::string& bad) {
  std::size_t start = 0;
  while (start <= text.size()) {
    const std::size_t comma = text.find(',', start);
    const std::string item = text.substr(start, comma == std::string::npos ? std::string::npos : comma - start);
    char* end = nullptr;
    errno = 0;
    const double v = std::strtod(item.c_str(), &end);
    if (item.empty() || end != item.c_str() + item.size() || errno != 0 || !std::isfinite(v)) {
      bad = item;
      return false;
    }
    out.push_back(v);
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  return !out.empty();
}

int cmd_scan(const std::string& config_path, std::string output, const std::string& format) {
  ConfigHandle cfg;
  if (int rc = load(config_path, cfg)) return rc;
  gs_format fmt = GS_FORMAT_CSV;
  gs_config_output_format(cfg.p, &fmt);
  if (format == "csv") fmt = GS_FORMAT_CSV;
  if (format == "json") fmt = GS_FORMAT_JSON;
  if (output.empty()) {
    char* p = nullptr;
    if (gs_config_output_path(cfg.p, &p) == GS_OK) output = p;
    gs_string_free(p);
  }
  if (output.empty()) {
    std::fprintf(stderr, "ghostsim: scan: no output path (use --output or output.path)\n");
    return kUsage;
  }

  gs_scan* scan = nullptr;
  gs_status s = gs_scan_run(cfg.p, 0, &scan);
  if (s != GS_OK) return run_error("scan", s);
  s = gs_scan_write(scan, output.c_str(), fmt);
  const std::size_t rows = gs_scan_size(scan);
  gs_scan_free(scan);
  if (s != GS_OK) return run_error("write", s);
  std::fprintf(stderr, "ghostsim: wrote %zu points to %s\n", rows, output.c_str());
  return kOk;
}

int cmd_sweep(const std::string& config_path, const std::string& param, const std::string& values,
              const std::string& output) {
  if (param != "reference_arm.pupil.rect.D_mm") {
    std::fprintf(stderr, "ghostsim: sweep: unsupported parameter '%s' (only reference_arm.pupil.rect.D_mm)\n",
                 param.c_str());
    return kUsage;
  }
  std::vector<double> apertures;
  std::string bad;
  if (!parse_values(values, apertures, bad)) {
    std::fprintf(stderr, "ghostsim: sweep: --values: '%s' is not a number\n", bad.c_str());
    return kUsage;
  }
  for (double d : apertures) {
    if (!(d > 0.0)) {
      std::fprintf(stderr, "ghostsim: sweep: --values: aperture %g must be positive\n", d);
      return kUsage;
    }
  }
  ConfigHandle cfg;
  if (int rc = load(config_path, cfg)) return rc;

  gs_sweep* sweep = nullptr;
  gs_status s = gs_sweep_run(cfg.p, apertures.data(), apertures.size(), 0, &sweep);
  if (s != GS_OK) return run_error("sweep", s);
  s = gs_sweep_write_json(sweep, output.c_str());
  gs_sweep_free(sweep);
  if (s != GS_OK) return run_error("write", s);
  return kOk;
}

void print_check(const char* name, int passed, const char* detail, void*) {
  std::printf("%s %s: %s\n", passed ? "PASS" : "FAIL", name, detail);
  std::fflush(stdout);
}

int cmd_validate(double fault) {
  if (fault != 1.0) gs_debug_set_norm_fault(fault);
  int all = 0;
  const gs_status s = gs_validate(print_check, nullptr, &all);
  if (s != GS_OK) return run_error("validate", s);
  std::printf("%s\n", all ? "all checks passed" : "validation FAILED");
  return all ? kOk : kValidationFailed;
}

int cmd_resolve(const std::string& config_path) {
  ConfigHandle cfg;
  if (int rc = load(config_path, cfg)) return rc;
  char* text = nullptr;
  const gs_status s = gs_config_to_json(cfg.p, &text);
  if (s != GS_OK) return run_error("resolve", s);
  std::fputs(text, stdout);
  gs_string_free(text);
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Entangled-photon ghost-imaging simulator"};
  app.require_subcommand(1);

  std::string config, output, format, param, values;
  double fault = 1.0;

  auto* scan = app.add_subcommand("scan", "Scan the reference detector position and write the coincidence curve");
  scan->add_option("--config", config, "Run configuration (JSON)")->required();
  scan->add_option("--output", output, "Output file (defaults to output.path in the config)");
  scan->add_option("--format", format, "Output format, overriding the config")->check(CLI::IsMember({"csv", "json"}));

  auto* sweep = app.add_subcommand("sweep", "Repeat the scan over a list of parameter values");
  sweep->add_option("--config", config, "Base run configuration (JSON)")->required();
  sweep->add_option("--param", param, "Parameter to sweep")->required();
  sweep->add_option("--values", values, "Comma-separated values")->required()->allow_extra_args(false);
  sweep->add_option("--output", output, "Output JSON file")->required();

  auto* validate = app.add_subcommand("validate", "Run the built-in oracle checks");
  validate->add_option("--inject-norm-fault", fault)->group("");

  auto* resolve = app.add_subcommand("resolve", "Print the fully resolved configuration");
  resolve->add_option("--config", config, "Run configuration (JSON)")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kUsage;
  }

  if (scan->parsed()) return cmd_scan(config, output, format);
  if (sweep->parsed()) return cmd_sweep(config, param, values, output);
  if (validate->parsed()) return cmd_validate(fault);
  if (resolve->parsed()) return cmd_resolve(config);
  return kUsage;
}
