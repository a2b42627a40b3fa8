#include "csv_io.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <sstream>
#include <string>

#include "error.hpp"

namespace ghostsim {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

bool parse_double(const std::string& field, double& out) {
  const std::string f = trim(field);
  if (f.empty()) return false;
  const char* begin = f.data();
  const char* end = f.data() + f.size();
  if (*begin == '+') ++begin;
  auto [ptr, ec] = std::from_chars(begin, end, out);
  return ec == std::errc() && ptr == end;
}

}  // namespace

std::vector<std::vector<double>> read_numeric_csv(const std::filesystem::path& path,
                                                  std::initializer_list<std::size_t> allowed_columns) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::Io, "cannot open " + path.string());

  std::vector<std::vector<double>> rows;
  std::string line;
  std::size_t line_no = 0;
  std::size_t columns = 0;
  bool seen_content = false;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string t = trim(line);
    if (t.empty() || t.front() == '#') continue;

    std::vector<std::string> fields;
    std::stringstream ss(t);
    std::string field;
    while (std::getline(ss, field, ',')) fields.push_back(field);

    std::vector<double> row(fields.size());
    bool numeric = true;
    for (std::size_t k = 0; k < fields.size(); ++k) numeric = numeric && parse_double(fields[k], row[k]);
    if (!numeric) {
      if (!seen_content) {
        seen_content = true;  // header
        continue;
      }
      throw Error(ErrorCode::Parse, path.string() + ":" + std::to_string(line_no) + ": non-numeric field");
    }
    seen_content = true;
    if (std::find(allowed_columns.begin(), allowed_columns.end(), row.size()) == allowed_columns.end()) {
      throw Error(ErrorCode::Parse, path.string() + ":" + std::to_string(line_no) + ": unexpected column count " +
                                        std::to_string(row.size()));
    }
    if (columns == 0) columns = row.size();
    if (row.size() != columns) {
      throw Error(ErrorCode::Parse, path.string() + ":" + std::to_string(line_no) + ": inconsistent column count");
    }
    rows.push_back(std::move(row));
  }
  if (rows.empty()) throw Error(ErrorCode::Parse, path.string() + ": no data rows");
  return rows;
}

}  // namespace ghostsim
