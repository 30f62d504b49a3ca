#include "report.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include "errors.hpp"

namespace holowave {

std::string fmt17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return std::string(buf);
}

void EstimateReport::add(std::vector<double> params, double ratio) {
  ratios.emplace_back(std::move(params), ratio);
}

void EstimateReport::finalize() {
  sup_ratio = 0.0;
  for (const auto& r : ratios) sup_ratio = std::max(sup_ratio, r.second);
  pass = sup_ratio <= bound;
}

std::string EstimateReport::to_csv() const {
  std::ostringstream os;
  os << "name";
  for (const auto& pn : param_names) os << "," << pn;
  os << ",ratio\n";
  for (const auto& r : ratios) {
    os << name;
    for (double v : r.first) os << "," << fmt17(v);
    os << "," << fmt17(r.second) << "\n";
  }
  return os.str();
}

std::string EstimateReport::to_json() const {
  std::ostringstream os;
  os << "{\"name\":\"" << name << "\",\"sup_ratio\":" << fmt17(sup_ratio)
     << ",\"pass\":" << (pass ? "true" : "false") << "}";
  return os.str();
}

void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream f(path, std::ios::binary);
  if (!f) fail(ErrorCode::IoError, "cannot open for writing: " + path);
  f << content;
  if (!f) fail(ErrorCode::IoError, "write failed: " + path);
}

std::string read_text_file(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) fail(ErrorCode::IoError, "cannot open for reading: " + path);
  std::ostringstream os;
  os << f.rdbuf();
  return os.str();
}

}  // namespace holowave
