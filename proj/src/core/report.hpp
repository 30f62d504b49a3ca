#ifndef HOLOWAVE_REPORT_HPP
#define HOLOWAVE_REPORT_HPP

#include <limits>
#include <string>
#include <utility>
#include <vector>

namespace holowave {

// Formats with 17 significant digits (round-trip exact for doubles); all
// emitted files use this so that reruns are byte-identical.
std::string fmt17(double v);

// Ratio scan of one inequality: rows of (parameter tuple, observed LHS/RHS),
// the sup over the scan, and a pass verdict against a declared bound.
struct EstimateReport {
  std::string name;
  std::vector<std::string> param_names;
  std::vector<std::pair<std::vector<double>, double>> ratios;
  std::vector<double> a_values;
  double sup_ratio = 0.0;
  double bound = std::numeric_limits<double>::infinity();
  bool pass = false;
  std::string note;

  void add(std::vector<double> params, double ratio);
  // sup_ratio = max over rows; pass = sup_ratio <= bound (callers may then
  // tighten pass with stability conditions).
  void finalize();

  std::string to_csv() const;
  std::string to_json() const;
};

void write_text_file(const std::string& path, const std::string& content);
std::string read_text_file(const std::string& path);

}  // namespace holowave

#endif
