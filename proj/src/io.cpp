#include "tvd/io.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <vector>

#include "json.hpp"

namespace tvd {

std::string format_double(double x)
{
  if (std::isnan(x)) return "nan";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

std::string read_text(const std::string& path)
{
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ArgumentError("cannot open '" + path + "' for reading");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text(const std::string& path, const std::string& text)
{
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ArgumentError("cannot open '" + path + "' for writing");
  out << text;
  if (!out) throw ArgumentError("failed writing '" + path + "'");
}

// ---------------------------------------------------------------------------

namespace {

std::string_view trim(std::string_view s)
{
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

}  // namespace

ImageMatrix parse_matrix_csv(const std::string& text, const std::string& origin)
{
  std::vector<std::string_view> lines;
  std::string_view rest(text);
  while (!rest.empty()) {
    const auto cut = rest.find('\n');
    lines.push_back(rest.substr(0, cut));
    if (cut == std::string_view::npos) break;
    rest.remove_prefix(cut + 1);
  }
  while (!lines.empty() && trim(lines.back()).empty()) lines.pop_back();
  if (lines.empty()) throw ArgumentError(origin + ": empty matrix file");

  std::vector<double> values;
  std::size_t width = 0;
  for (std::size_t r = 0; r < lines.size(); ++r) {
    const std::string where = origin + ": row " + std::to_string(r + 1);
    std::size_t count = 0;
    std::string_view line = lines[r];
    for (;;) {
      const auto comma = line.find(',');
      const std::string_view field = trim(line.substr(0, comma));
      double v = 0.0;
      const char* first = field.data();
      const char* last = field.data() + field.size();
      if (!field.empty() && *first == '+') ++first;
      const auto [ptr, ec] = std::from_chars(first, last, v);
      if (field.empty() || ec != std::errc() || ptr != last)
        throw ArgumentError(where + ": cannot parse '" + std::string(field) + "' as a number");
      if (!std::isfinite(v)) throw ArgumentError(where + ": non-finite value");
      values.push_back(v);
      ++count;
      if (comma == std::string_view::npos) break;
      line.remove_prefix(comma + 1);
    }
    if (r == 0)
      width = count;
    else if (count != width)
      throw ArgumentError(where + ": expected " + std::to_string(width) + " values, found " + std::to_string(count));
  }

  const Index rows = static_cast<Index>(lines.size());
  const Index cols = static_cast<Index>(width);
  return Eigen::Map<const ImageMatrix>(values.data(), rows, cols);
}

ImageMatrix read_matrix_csv(const std::string& path) { return parse_matrix_csv(read_text(path), path); }

std::string format_matrix_csv(const ImageMatrix& m)
{
  std::string out;
  for (Index i = 0; i < m.rows(); ++i) {
    for (Index j = 0; j < m.cols(); ++j) {
      if (j > 0) out += ',';
      out += format_double(m(i, j));
    }
    out += '\n';
  }
  return out;
}

void write_matrix_csv(const std::string& path, const ImageMatrix& m) { write_text(path, format_matrix_csv(m)); }

// ---------------------------------------------------------------------------

std::string partition_to_json(const RectPartition& p)
{
  nlohmann::json arr = nlohmann::json::array();
  for (const Rect& r : p.rects)
    arr.push_back({{"row_lo", r.row_lo}, {"row_hi", r.row_hi}, {"col_lo", r.col_lo}, {"col_hi", r.col_hi}});
  return arr.dump() + "\n";
}

RectPartition partition_from_json(const std::string& text, Index rows, Index cols)
{
  RectPartition p{rows, cols, {}};
  try {
    const auto arr = nlohmann::json::parse(text);
    if (!arr.is_array()) throw ArgumentError("partition JSON must be an array");
    for (const auto& o : arr)
      p.rects.push_back({o.at("row_lo").get<Index>(), o.at("row_hi").get<Index>(), o.at("col_lo").get<Index>(),
                         o.at("col_hi").get<Index>()});
  } catch (const nlohmann::json::exception& e) {
    throw ArgumentError(std::string("malformed partition JSON: ") + e.what());
  }
  p.validate();
  return p;
}

// ---------------------------------------------------------------------------

namespace {

std::string json_number(double x) { return std::isfinite(x) ? format_double(x) : "null"; }

std::string json_string(const std::string& s) { return nlohmann::json(s).dump(); }

double number_or_nan(const nlohmann::json& v)
{
  return v.is_null() ? std::numeric_limits<double>::quiet_NaN() : v.get<double>();
}

}  // namespace

std::string report_csv(const ExperimentReport& report)
{
  std::string out = "signal,estimator,n,N,mse_mean,mse_stderr\n";
  const std::string prefix = to_string(report.spec.signal) + "," + to_string(report.spec.estimator) + ",";
  for (const auto& r : report.records)
    out += prefix + std::to_string(r.n) + "," + std::to_string(r.N) + "," + format_double(r.mse_mean) + "," +
           format_double(r.mse_stderr) + "\n";
  return out;
}

std::string report_json(const ExperimentReport& report)
{
  const ExperimentSpec& s = report.spec;
  std::string n_list;
  for (std::size_t k = 0; k < s.n_list.size(); ++k) n_list += (k ? "," : "") + std::to_string(s.n_list[k]);

  std::string out = "{\n";
  out += "  \"signal\": " + json_string(to_string(s.signal)) + ",\n";
  out += "  \"estimator\": " + json_string(to_string(s.estimator)) + ",\n";
  out += "  \"slope\": " + json_number(report.slope) + ",\n";
  out += "  \"intercept\": " + json_number(report.intercept) + ",\n";
  out += "  \"slope_stderr\": " + json_number(report.slope_stderr) + ",\n";
  out += "  \"seed\": " + std::to_string(s.seed) + ",\n";
  out += "  \"spec\": {\"signal\": " + json_string(to_string(s.signal)) +
         ", \"estimator\": " + json_string(to_string(s.estimator)) + ", \"n_list\": [" + n_list +
         "], \"reps\": " + std::to_string(s.reps) + ", \"sigma\": " + json_number(s.sigma) +
         ", \"seed\": " + std::to_string(s.seed) + "}\n";
  out += "}\n";
  return out;
}

std::string sidecar_path(const std::string& path)
{
  const std::string ext = ".csv";
  if (path.size() >= ext.size() && path.compare(path.size() - ext.size(), ext.size(), ext) == 0)
    return path.substr(0, path.size() - ext.size()) + ".json";
  return path + ".json";
}

void write_report(const std::string& path, const ExperimentReport& report)
{
  write_text(path, report_csv(report));
  write_text(sidecar_path(path), report_json(report));
}

ExperimentReport read_report(const std::string& path)
{
  ExperimentReport report;
  const std::string side = sidecar_path(path);
  try {
    const auto j = nlohmann::json::parse(read_text(side));
    const auto& s = j.at("spec");
    report.spec.signal = parse_signal_kind(s.at("signal").get<std::string>());
    report.spec.estimator = parse_estimator(s.at("estimator").get<std::string>());
    report.spec.n_list = s.at("n_list").get<std::vector<Index>>();
    report.spec.reps = s.at("reps").get<int>();
    report.spec.sigma = s.at("sigma").get<double>();
    report.spec.seed = s.at("seed").get<std::uint64_t>();
    report.slope = number_or_nan(j.at("slope"));
    report.intercept = number_or_nan(j.at("intercept"));
    report.slope_stderr = number_or_nan(j.at("slope_stderr"));
  } catch (const nlohmann::json::exception& e) {
    throw ArgumentError(side + ": malformed report sidecar: " + e.what());
  }

  std::istringstream csv(read_text(path));
  std::string line;
  if (!std::getline(csv, line) || trim(line) != "signal,estimator,n,N,mse_mean,mse_stderr")
    throw ArgumentError(path + ": missing or wrong report header");
  int row = 1;
  while (std::getline(csv, line)) {
    ++row;
    if (trim(line).empty()) continue;
    std::vector<std::string> f;
    std::stringstream ls(line);
    std::string cell;
    while (std::getline(ls, cell, ',')) f.push_back(std::string(trim(cell)));
    if (f.size() != 6) throw ArgumentError(path + ": row " + std::to_string(row) + ": expected 6 fields");
    try {
      report.records.push_back({std::stoll(f[2]), std::stoll(f[3]), std::stod(f[4]), std::stod(f[5])});
    } catch (const std::exception&) {
      throw ArgumentError(path + ": row " + std::to_string(row) + ": malformed number");
    }
  }
  return report;
}

}  // namespace tvd
