#ifndef HOLOWAVE_CONFIG_HPP
#define HOLOWAVE_CONFIG_HPP

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "holo.hpp"

namespace holowave {

// Flat key/value configuration with [section] headers and comma lists
// (schema version 1). Section and key names are case-sensitive.
struct ConfigFile {
  // (section, key) -> list of raw values (repeated keys accumulate)
  std::map<std::pair<std::string, std::string>, std::vector<std::string>> kv;
  int schema = 1;

  bool has(const std::string& sec, const std::string& key) const;
  std::string str(const std::string& sec, const std::string& key,
                  const std::string& dflt) const;
  double num(const std::string& sec, const std::string& key,
             double dflt) const;
  int integer(const std::string& sec, const std::string& key, int dflt) const;
  bool flag(const std::string& sec, const std::string& key, bool dflt) const;
  std::vector<double> num_list(const std::string& sec,
                               const std::string& key) const;
  std::vector<std::string> str_list(const std::string& sec,
                                    const std::string& key) const;
  const std::vector<std::string>* raw(const std::string& sec,
                                      const std::string& key) const;
};

ConfigFile parse_config(const std::string& text);

struct DatumModeSpec {
  int mode = 0;
  std::string kind = "bump";  // bump | sine_bump | zero
  double center = 1.0, width = 0.5, amplitude = 1.0, freq = 0.0;
};

struct RunConfig {
  // problem
  int n = 4;
  double mu = 0.0;
  double a = 0.5;
  bool exact_ads = true;
  MetricSeries metric;
  // grid
  int cells = 400;
  GridKind kind = GridKind::Graded;
  double x_min_factor = 1e-4;
  double grading_ratio = 1.05;
  // evolution
  double T = 2.0;
  double dt = 0.0;
  double cfl = 0.9;
  int stride = 8;
  // datum
  std::vector<DatumModeSpec> datum;
  // peeling
  int k = 2;
  double a0_factor = 0.5;
  int sobolev_m = 1;
  // nonlinearity
  NonlinearitySpec nl;
  // checks
  std::vector<std::string> suites;
  // hardy scan parameters
  double hardy_s = 0.0, hardy_r = 1.0;
  std::vector<double> a_list{1.0, 0.5, 0.25, 0.125};
  // picard
  int max_iter = 12;
  double tol = 1e-6;
  // output
  std::string out_dir = "out";

  TwistParams params() const;
  BoundaryDatum boundary_datum() const;
};

// Parses and validates; throws ConfigParse (with line info) or
// ValidationFailed (wrapping the violated invariant).
RunConfig load_run_config(const std::string& path);
RunConfig run_config_from_text(const std::string& text);

}  // namespace holowave

#endif
