#include "config.hpp"

#include <algorithm>
#include <cctype>
#include <sstream>

#include "report.hpp"

namespace holowave {

namespace {

std::string trim(const std::string& s) {
  size_t b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  size_t e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split_commas(const std::string& s) {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream is(s);
  while (std::getline(is, cur, ',')) out.push_back(trim(cur));
  return out;
}

double parse_num(const std::string& v, const std::string& where) {
  try {
    size_t pos = 0;
    double x = std::stod(v, &pos);
    if (pos != v.size()) throw std::invalid_argument(v);
    return x;
  } catch (...) {
    fail(ErrorCode::ConfigParse, where + ": not a number: '" + v + "'");
  }
}

}  // namespace

bool ConfigFile::has(const std::string& sec, const std::string& key) const {
  return kv.count({sec, key}) > 0;
}

const std::vector<std::string>* ConfigFile::raw(const std::string& sec,
                                                const std::string& key) const {
  auto it = kv.find({sec, key});
  return it == kv.end() ? nullptr : &it->second;
}

std::string ConfigFile::str(const std::string& sec, const std::string& key,
                            const std::string& dflt) const {
  auto* v = raw(sec, key);
  return v && !v->empty() ? v->front() : dflt;
}

double ConfigFile::num(const std::string& sec, const std::string& key,
                       double dflt) const {
  auto* v = raw(sec, key);
  if (!v || v->empty()) return dflt;
  return parse_num(v->front(), "[" + sec + "] " + key);
}

int ConfigFile::integer(const std::string& sec, const std::string& key,
                        int dflt) const {
  return static_cast<int>(num(sec, key, dflt));
}

bool ConfigFile::flag(const std::string& sec, const std::string& key,
                      bool dflt) const {
  std::string v = str(sec, key, dflt ? "true" : "false");
  if (v == "true" || v == "1" || v == "yes") return true;
  if (v == "false" || v == "0" || v == "no") return false;
  fail(ErrorCode::ConfigParse, "[" + sec + "] " + key + ": not a boolean");
}

std::vector<double> ConfigFile::num_list(const std::string& sec,
                                         const std::string& key) const {
  std::vector<double> out;
  auto* v = raw(sec, key);
  if (!v) return out;
  for (const auto& tok : *v)
    out.push_back(parse_num(tok, "[" + sec + "] " + key));
  return out;
}

std::vector<std::string> ConfigFile::str_list(const std::string& sec,
                                              const std::string& key) const {
  auto* v = raw(sec, key);
  return v ? *v : std::vector<std::string>{};
}

ConfigFile parse_config(const std::string& text) {
  ConfigFile cf;
  std::istringstream is(text);
  std::string line, section;
  int lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    std::string s = trim(line);
    size_t hash = s.find('#');
    if (hash != std::string::npos) s = trim(s.substr(0, hash));
    if (s.empty()) continue;
    if (s.front() == '[') {
      if (s.back() != ']')
        fail(ErrorCode::ConfigParse,
             "line " + std::to_string(lineno) + ": unterminated section");
      section = trim(s.substr(1, s.size() - 2));
      continue;
    }
    size_t eq = s.find('=');
    if (eq == std::string::npos)
      fail(ErrorCode::ConfigParse,
           "line " + std::to_string(lineno) + ": expected key = value");
    std::string key = trim(s.substr(0, eq));
    std::string val = trim(s.substr(eq + 1));
    if (key.empty())
      fail(ErrorCode::ConfigParse,
           "line " + std::to_string(lineno) + ": empty key");
    auto toks = split_commas(val);
    auto& slot = cf.kv[{section, key}];
    slot.insert(slot.end(), toks.begin(), toks.end());
  }
  if (cf.has("", "schema")) cf.schema = cf.integer("", "schema", 1);
  if (cf.schema != 1)
    fail(ErrorCode::ConfigParse, "unsupported schema version");
  return cf;
}

TwistParams RunConfig::params() const { return TwistParams::make(n, mu, a); }

BoundaryDatum RunConfig::boundary_datum() const {
  BoundaryDatum f;
  for (const auto& d : datum) {
    TimeProfile pr = TimeProfile::zero();
    if (d.kind == "bump")
      pr = TimeProfile::bump(d.center, d.width, d.amplitude);
    else if (d.kind == "sine_bump")
      pr = TimeProfile::sine_bump(d.center, d.width, d.amplitude, d.freq);
    else if (d.kind != "zero")
      fail(ErrorCode::ValidationFailed, "unknown datum kind: " + d.kind);
    f.modes.emplace_back(d.mode, pr);
  }
  return f;
}

RunConfig run_config_from_text(const std::string& text) {
  ConfigFile cf = parse_config(text);
  RunConfig rc;
  rc.n = cf.integer("problem", "n", 4);
  rc.mu = cf.num("problem", "mu", 0.0);
  rc.a = cf.num("problem", "a", 0.5);
  std::string mk = cf.str("problem", "metric", "exact_ads");
  rc.exact_ads = (mk == "exact_ads");
  int order = cf.integer("metric.series", "order", 6);
  if (rc.exact_ads) {
    rc.metric = ads_metric(rc.n, order);
  } else if (mk == "series") {
    rc.metric = ads_metric(rc.n, order);
    auto comp = [&](const char* key, Series* dst) {
      if (!cf.has("metric.series", key)) return;
      std::vector<double> c = cf.num_list("metric.series", key);
      c.resize(order + 1, 0.0);
      *dst = Series(0.0, c);
    };
    comp("g_tt", &rc.metric.tt);
    comp("g_tx", &rc.metric.tx);
    comp("g_xx", &rc.metric.xx);
    comp("g_thth", &rc.metric.thth);
    comp("g_tth", &rc.metric.tth);
    comp("g_xth", &rc.metric.xth);
    rc.metric.order = order;
    rc.metric.n = rc.n;
  } else {
    fail(ErrorCode::ValidationFailed, "unknown metric kind: " + mk);
  }

  rc.cells = cf.integer("grid", "cells", 400);
  std::string gk = cf.str("grid", "kind", "graded");
  if (gk == "uniform")
    rc.kind = GridKind::Uniform;
  else if (gk == "graded")
    rc.kind = GridKind::Graded;
  else
    fail(ErrorCode::ValidationFailed, "unknown grid kind: " + gk);
  rc.x_min_factor = cf.num("grid", "x_min_factor", 1e-4);
  rc.grading_ratio = cf.num("grid", "grading_ratio", 1.05);

  rc.T = cf.num("evolution", "T", 2.0);
  rc.dt = cf.num("evolution", "dt", 0.0);
  rc.cfl = cf.num("evolution", "cfl", 0.9);
  rc.stride = cf.integer("evolution", "stride", 8);

  if (auto* rows = cf.raw("datum", "mode")) {
    // each datum line contributes 5..6 tokens: l, kind, center, width,
    // amplitude[, freq]
    size_t i = 0;
    while (i < rows->size()) {
      DatumModeSpec d;
      d.mode = (int)parse_num((*rows)[i++], "[datum] mode");
      if (i >= rows->size())
        fail(ErrorCode::ConfigParse, "[datum] mode: truncated entry");
      d.kind = (*rows)[i++];
      size_t nums = (d.kind == "sine_bump") ? 4 : 3;
      if (d.kind == "zero") nums = 0;
      if (i + nums > rows->size())
        fail(ErrorCode::ConfigParse, "[datum] mode: truncated entry");
      if (nums >= 3) {
        d.center = parse_num((*rows)[i++], "[datum] center");
        d.width = parse_num((*rows)[i++], "[datum] width");
        d.amplitude = parse_num((*rows)[i++], "[datum] amplitude");
      }
      if (nums == 4) d.freq = parse_num((*rows)[i++], "[datum] freq");
      rc.datum.push_back(d);
    }
  }

  rc.k = cf.integer("peeling", "k", 2);
  rc.a0_factor = cf.num("peeling", "a0_factor", 0.5);
  rc.sobolev_m = cf.integer("peeling", "m", 1);

  rc.nl.enabled = cf.flag("nonlinearity", "enabled", false);
  rc.nl.q = cf.num("nonlinearity", "q", 0.0);
  if (cf.has("nonlinearity", "gamma_hat")) {
    std::vector<double> c = cf.num_list("nonlinearity", "gamma_hat");
    rc.nl.gamma_hat = Series(0.0, c);
  }
  rc.max_iter = cf.integer("nonlinearity", "max_iter", 12);
  rc.tol = cf.num("nonlinearity", "tol", 1e-6);

  rc.suites = cf.str_list("checks", "suites");
  rc.hardy_s = cf.num("hardy", "s", 0.0);
  rc.hardy_r = cf.num("hardy", "r", 1.0);
  if (cf.has("hardy", "a_list")) rc.a_list = cf.num_list("hardy", "a_list");

  rc.out_dir = cf.str("output", "dir", "out");

  // validation: physical parameters first
  try {
    TwistParams p = rc.params();
    (void)p;
  } catch (const Error& e) {
    fail(ErrorCode::ValidationFailed, std::string("problem parameters: ") +
                                          e.what() + " [" +
                                          error_code_name(e.code()) + "]");
  }
  if (rc.cells < 8)
    fail(ErrorCode::ValidationFailed, "grid needs at least 8 cells");
  static const std::vector<std::string> known = {
      "hardy",       "morrey", "moser",      "elliptic",
      "eigen",       "evolve", "peel",       "holo-linear",
      "holo-nonlinear", "causality"};
  for (const auto& s : rc.suites)
    if (std::find(known.begin(), known.end(), s) == known.end())
      fail(ErrorCode::ValidationFailed, "unknown suite: " + s);
  if (rc.suites.empty())
    fail(ErrorCode::ValidationFailed, "no suites declared under [checks]");
  return rc;
}

RunConfig load_run_config(const std::string& path) {
  return run_config_from_text(read_text_file(path));
}

}  // namespace holowave
