#include "config.hpp"

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "error.hpp"

namespace ghostsim {

namespace {

using nlohmann::json;

[[noreturn]] void config_error(const std::string& field, const std::string& what) {
  throw Error(ErrorCode::Config, field + ": " + what);
}

void reject_unknown(const json& obj, const std::string& where, std::initializer_list<const char*> allowed) {
  const std::set<std::string> ok(allowed.begin(), allowed.end());
  for (const auto& [key, _] : obj.items()) {
    if (!ok.contains(key)) config_error(where.empty() ? key : where + "." + key, "unknown key");
  }
}

const json& object_at(const json& parent, const std::string& where, const char* key) {
  const std::string field = where.empty() ? key : where + "." + key;
  if (!parent.contains(key)) config_error(field, "required field missing");
  const json& v = parent.at(key);
  if (!v.is_object()) config_error(field, "must be an object");
  return v;
}

double number(const json& parent, const std::string& where, const char* key, std::optional<double> fallback = {}) {
  const std::string field = where + "." + key;
  if (!parent.contains(key)) {
    if (fallback) return *fallback;
    config_error(field, "required field missing");
  }
  const json& v = parent.at(key);
  if (!v.is_number()) config_error(field, "must be a number");
  const double d = v.get<double>();
  if (!std::isfinite(d)) config_error(field, "must be finite");
  return d;
}

double positive_number(const json& parent, const std::string& where, const char* key,
                       std::optional<double> fallback = {}) {
  const double d = number(parent, where, key, fallback);
  if (!(d > 0.0)) config_error(where + "." + key, "must be positive");
  return d;
}

std::int64_t integer(const json& parent, const std::string& where, const char* key, std::int64_t fallback,
                     std::int64_t minimum) {
  const std::string field = where + "." + key;
  if (!parent.contains(key)) return fallback;
  const json& v = parent.at(key);
  std::int64_t n = 0;
  if (v.is_number_integer()) {
    n = v.get<std::int64_t>();
  } else if (v.is_number_float() && std::floor(v.get<double>()) == v.get<double>() && std::abs(v.get<double>()) < 9e15) {
    n = static_cast<std::int64_t>(v.get<double>());
  } else {
    config_error(field, "must be an integer");
  }
  if (n < minimum) config_error(field, "must be >= " + std::to_string(minimum));
  return n;
}

std::filesystem::path readable_path(const json& parent, const std::string& where, const std::filesystem::path& base) {
  const std::string field = where + ".path";
  if (!parent.contains("path") || !parent.at("path").is_string()) config_error(field, "must be a string");
  std::filesystem::path p = parent.at("path").get<std::string>();
  if (p.empty()) config_error(field, "must not be empty");
  if (p.is_relative()) p = base / p;
  p = p.lexically_normal();
  std::ifstream probe(p);
  if (!probe) config_error(field, "file not readable: " + p.string());
  return p;
}

// Exactly one variant key inside `obj`.
std::string single_variant(const json& obj, const std::string& where, std::initializer_list<const char*> kinds) {
  reject_unknown(obj, where, kinds);
  if (obj.size() != 1) {
    std::string names;
    for (const char* k : kinds) names += (names.empty() ? "" : " | ") + std::string(k);
    config_error(where, "must contain exactly one of " + names);
  }
  return obj.begin().key();
}

ObjectSpec parse_object(const json& obj, const std::string& where, const std::filesystem::path& base) {
  const std::string kind = single_variant(obj, where, {"double_slit", "gaussian", "tabulated"});
  const std::string sub = where + "." + kind;
  const json& body = object_at(obj, where, kind.c_str());
  if (kind == "double_slit") {
    reject_unknown(body, sub, {"w_mm", "d_mm"});
    DoubleSlitSpec s{positive_number(body, sub, "w_mm"), positive_number(body, sub, "d_mm")};
    if (s.w_mm >= s.d_mm) config_error(sub + ".w_mm", "must be smaller than d_mm (slits would merge)");
    return s;
  }
  if (kind == "gaussian") {
    reject_unknown(body, sub, {"w_mm"});
    return GaussianObjectSpec{positive_number(body, sub, "w_mm")};
  }
  reject_unknown(body, sub, {"path"});
  return TabulatedSpec{readable_path(body, sub, base)};
}

PupilSpec parse_pupil(const json& obj, const std::string& where, const std::filesystem::path& base) {
  const std::string kind = single_variant(obj, where, {"rect", "gaussian", "tabulated"});
  const std::string sub = where + "." + kind;
  const json& body = object_at(obj, where, kind.c_str());
  if (kind == "rect") {
    reject_unknown(body, sub, {"D_mm"});
    return RectPupilSpec{positive_number(body, sub, "D_mm")};
  }
  if (kind == "gaussian") {
    reject_unknown(body, sub, {"sigma_mm"});
    return GaussianPupilSpec{positive_number(body, sub, "sigma_mm")};
  }
  reject_unknown(body, sub, {"path"});
  return TabulatedSpec{readable_path(body, sub, base)};
}

std::pair<std::size_t, std::size_t> line_and_column(std::string_view text, std::size_t byte) {
  std::size_t line = 1, col = 1;
  for (std::size_t i = 0; i + 1 < byte && i < text.size(); ++i) {
    if (text[i] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
  }
  return {line, col};
}

const char* phase_name(QuadraticPhase p) {
  return p == QuadraticPhase::SourceCoordinate ? "source_coordinate" : "test_coordinate";
}

}  // namespace

RunConfig parse_config(std::string_view text, const std::filesystem::path& base_dir) {
  json doc;
  try {
    doc = json::parse(text.begin(), text.end());
  } catch (const json::parse_error& e) {
    const auto [line, col] = line_and_column(text, e.byte);
    std::ostringstream os;
    os << "JSON parse error at line " << line << ", column " << col << ": " << e.what();
    throw Error(ErrorCode::Parse, os.str());
  }
  if (!doc.is_object()) config_error("<root>", "must be a JSON object");
  reject_unknown(doc, "", {"source", "test_arm", "reference_arm", "scan", "pairs", "numerics", "output"});

  RunConfig c;
  const json& src = object_at(doc, "", "source");
  reject_unknown(src, "source", {"a_mm", "b_mm"});
  c.source.a_mm = positive_number(src, "source", "a_mm");
  c.source.b_mm = positive_number(src, "source", "b_mm");

  const json& ta = object_at(doc, "", "test_arm");
  reject_unknown(ta, "test_arm", {"lambda_nm", "f_mm", "object"});
  c.test_arm.lambda_nm = positive_number(ta, "test_arm", "lambda_nm");
  c.test_arm.f_mm = positive_number(ta, "test_arm", "f_mm");
  c.test_arm.object = parse_object(object_at(ta, "test_arm", "object"), "test_arm.object", base_dir);

  const json& ra = object_at(doc, "", "reference_arm");
  reject_unknown(ra, "reference_arm", {"lambda_nm", "f_mm", "pupil", "quadratic_phase"});
  c.reference_arm.lambda_nm = positive_number(ra, "reference_arm", "lambda_nm");
  c.reference_arm.f_mm = positive_number(ra, "reference_arm", "f_mm");
  c.reference_arm.pupil = parse_pupil(object_at(ra, "reference_arm", "pupil"), "reference_arm.pupil", base_dir);
  if (ra.contains("quadratic_phase")) {
    const json& q = ra.at("quadratic_phase");
    if (q == "source_coordinate") {
      c.reference_arm.quadratic_phase = QuadraticPhase::SourceCoordinate;
    } else if (q == "test_coordinate") {
      c.reference_arm.quadratic_phase = QuadraticPhase::TestCoordinate;
    } else {
      config_error("reference_arm.quadratic_phase", "must be \"source_coordinate\" or \"test_coordinate\"");
    }
  }

  if (doc.contains("scan")) {
    const json& s = object_at(doc, "", "scan");
    reject_unknown(s, "scan", {"xr_min_mm", "xr_max_mm", "n_points", "xt_mm"});
    c.scan.xr_min_mm = number(s, "scan", "xr_min_mm", kDefaultScanMin);
    c.scan.xr_max_mm = number(s, "scan", "xr_max_mm", kDefaultScanMax);
    c.scan.n_points = integer(s, "scan", "n_points", kDefaultScanPoints, 2);
    c.scan.xt_mm = number(s, "scan", "xt_mm", 0.0);
    if (!(c.scan.xr_min_mm < c.scan.xr_max_mm)) config_error("scan.xr_max_mm", "must be greater than scan.xr_min_mm");
  }

  if (doc.contains("pairs")) {
    const json& p = object_at(doc, "", "pairs");
    reject_unknown(p, "pairs", {"N"});
    c.n_pairs = integer(p, "pairs", "N", 1, 1);
  }

  c.numerics.window_mm = kDefaultWindowPerSourceSize * c.source.a_mm;
  if (doc.contains("numerics")) {
    const json& n = object_at(doc, "", "numerics");
    reject_unknown(n, "numerics", {"n_x", "n_xp", "window_mm"});
    c.numerics.n_x = integer(n, "numerics", "n_x", kDefaultNx, 2);
    c.numerics.n_xp = integer(n, "numerics", "n_xp", kDefaultNxp, 2);
    c.numerics.window_mm = positive_number(n, "numerics", "window_mm", c.numerics.window_mm);
  }

  if (doc.contains("output")) {
    const json& o = object_at(doc, "", "output");
    reject_unknown(o, "output", {"path", "format"});
    if (o.contains("path")) {
      if (!o.at("path").is_string()) config_error("output.path", "must be a string");
      c.output.path = o.at("path").get<std::string>();
    }
    if (o.contains("format")) {
      const json& f = o.at("format");
      if (f == "csv") {
        c.output.format = OutputFormat::Csv;
      } else if (f == "json") {
        c.output.format = OutputFormat::Json;
      } else {
        config_error("output.format", "must be \"csv\" or \"json\"");
      }
    }
  }
  return c;
}

RunConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::Io, "cannot read config file " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str(), path.parent_path());
}

nlohmann::json to_json(const RunConfig& c) {
  json j;
  j["source"] = {{"a_mm", c.source.a_mm}, {"b_mm", c.source.b_mm}};

  json object;
  if (const auto* s = std::get_if<DoubleSlitSpec>(&c.test_arm.object)) {
    object["double_slit"] = {{"w_mm", s->w_mm}, {"d_mm", s->d_mm}};
  } else if (const auto* g = std::get_if<GaussianObjectSpec>(&c.test_arm.object)) {
    object["gaussian"] = {{"w_mm", g->w_mm}};
  } else {
    object["tabulated"] = {{"path", std::get<TabulatedSpec>(c.test_arm.object).path.string()}};
  }
  j["test_arm"] = {{"lambda_nm", c.test_arm.lambda_nm}, {"f_mm", c.test_arm.f_mm}, {"object", object}};

  json pupil;
  if (const auto* r = std::get_if<RectPupilSpec>(&c.reference_arm.pupil)) {
    pupil["rect"] = {{"D_mm", r->D_mm}};
  } else if (const auto* g = std::get_if<GaussianPupilSpec>(&c.reference_arm.pupil)) {
    pupil["gaussian"] = {{"sigma_mm", g->sigma_mm}};
  } else {
    pupil["tabulated"] = {{"path", std::get<TabulatedSpec>(c.reference_arm.pupil).path.string()}};
  }
  j["reference_arm"] = {{"lambda_nm", c.reference_arm.lambda_nm},
                        {"f_mm", c.reference_arm.f_mm},
                        {"pupil", pupil},
                        {"quadratic_phase", phase_name(c.reference_arm.quadratic_phase)}};

  j["scan"] = {{"xr_min_mm", c.scan.xr_min_mm},
               {"xr_max_mm", c.scan.xr_max_mm},
               {"n_points", c.scan.n_points},
               {"xt_mm", c.scan.xt_mm}};
  j["pairs"] = {{"N", c.n_pairs}};
  j["numerics"] = {{"n_x", c.numerics.n_x}, {"n_xp", c.numerics.n_xp}, {"window_mm", c.numerics.window_mm}};
  j["output"] = {{"path", c.output.path}, {"format", c.output.format == OutputFormat::Csv ? "csv" : "json"}};
  return j;
}

ScanConfig RunConfig::to_scan_config(unsigned threads) const {
  ScanConfig s;
  s.source = source;
  s.test_arm = {test_arm.lambda_nm / kNmPerMm, test_arm.f_mm, test_arm.object};
  s.reference_arm = {reference_arm.lambda_nm / kNmPerMm, reference_arm.f_mm, reference_arm.pupil,
                     reference_arm.quadratic_phase};
  s.x_t_fixed = scan.xt_mm;
  s.x_r = {scan.xr_min_mm, scan.xr_max_mm, scan.n_points};
  s.n_pairs = n_pairs;
  s.grids = {numerics.n_x, numerics.n_xp, numerics.window_mm};
  s.threads = threads;
  return s;
}

}  // namespace ghostsim
