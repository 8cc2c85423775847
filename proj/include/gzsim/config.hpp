#pragma once

// Experiment configuration: flat `key = value` text, command-line overrides,
// and the typed view the study runners consume.
//
// Lengths are given in one of two unit systems, chosen by `units`:
//   tx_distance  lengths are multiples of the transmitter distance (which is
//                therefore 1); the SNR is referenced to that distance
//   net_radius   lengths are multiples of the network radius (which is 1)
// Numbers may be written as decimals, as fractions such as 1/12, or as inf.
// Grids are comma-separated lists.

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <limits>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "gzsim/channel.hpp"
#include "gzsim/errors.hpp"
#include "gzsim/metrics.hpp"
#include "gzsim/outage.hpp"
#include "gzsim/spatial.hpp"

namespace gzsim {

enum class Study {
  table1,
  outage_vs_rg,
  tc_vs_rg,
  latency_vs_rg,
  tc_vs_M,
  tc_vs_tx_distance,
  min_rg_curve,
  min_ge_curve,
  single_network,
};

enum class LengthUnit { tx_distance, net_radius };

inline const std::vector<std::pair<std::string_view, Study>>& study_names() {
  static const std::vector<std::pair<std::string_view, Study>> names = {
      {"table1", Study::table1},
      {"outage_vs_rg", Study::outage_vs_rg},
      {"tc_vs_rg", Study::tc_vs_rg},
      {"latency_vs_rg", Study::latency_vs_rg},
      {"tc_vs_M", Study::tc_vs_M},
      {"tc_vs_tx_distance", Study::tc_vs_tx_distance},
      {"min_rg_curve", Study::min_rg_curve},
      {"min_ge_curve", Study::min_ge_curve},
      {"single_network", Study::single_network},
  };
  return names;
}

inline std::string_view to_string(Study s) {
  for (const auto& [name, value] : study_names())
    if (value == s) return name;
  return "unknown";
}

inline std::string_view to_string(LengthUnit u) {
  return u == LengthUnit::tx_distance ? "tx_distance" : "net_radius";
}

/// Raw configuration: every known key mapped to its textual value.
using ConfigMap = std::map<std::string, std::string>;

/// Every accepted key with its default. An empty default means "unset".
inline const ConfigMap& config_defaults() {
  static const ConfigMap defaults = {
      {"study", "outage_vs_rg"},
      {"units", "tx_distance"},
      {"net_radius", "6"},
      {"tx_distance", "1"},
      {"exclusion_radius", "1/2"},
      {"guard_radius", "1/2"},
      {"receiver", "center"},
      {"interferers", "30"},
      {"path_loss_exponent", "3.5"},
      {"shadowing_db", "8"},
      {"reference_distance", "0"},
      {"spreading", "fixed"},
      {"effective_gain", "1"},
      {"processing_gain", "32"},
      {"power_ratio", "1"},
      {"duty_factor", "0.5"},
      {"nakagami_m", "1"},
      {"m0", "3"},
      {"sinr_threshold_db", "0"},
      {"snr_db", "10"},
      {"networks", "10000"},
      {"seed", ""},
      {"workers", "1"},
      {"thinning", "true"},
      {"max_redraws", "10000"},
      {"tc_estimator", "product_of_means"},
      {"latency_model", "closed_form"},
      {"arq_interval", "6"},
      {"slot_duration", "1"},
      {"link_throughput", "1"},
      {"guard_radius_grid", ""},
      {"exclusion_radius_grid", ""},
      {"effective_gain_grid", ""},
      {"path_loss_exponent_grid", ""},
      {"interferers_grid", ""},
      {"tx_distance_grid", ""},
      {"snr_db_grid", ""},
      {"target_outage", "0.1"},
      {"target_tc", "15"},
      {"search_method", "grid"},
      {"search_resolution", "0.001"},
      {"max_gain", "1e6"},
  };
  return defaults;
}

namespace detail {

inline std::string trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return std::string(s.substr(first, last - first + 1));
}

inline std::optional<double> parse_plain_number(std::string_view s) {
  if (s == "inf" || s == "+inf") return std::numeric_limits<double>::infinity();
  if (s == "-inf") return -std::numeric_limits<double>::infinity();
  double v = 0.0;
  const char* end = s.data() + s.size();
  auto [ptr, ec] = std::from_chars(s.data(), end, v);
  if (ec != std::errc() || ptr != end) return std::nullopt;
  return v;
}

}  // namespace detail

/// Parses a decimal, a fraction a/b, or inf.
inline double parse_number(const std::string& key, std::string_view text) {
  const std::string s = detail::trim(text);
  if (s.empty()) throw ConfigError(key, "expected a number, got an empty value");
  const auto slash = s.find('/');
  std::optional<double> v;
  if (slash == std::string::npos) {
    v = detail::parse_plain_number(s);
  } else {
    const auto num = detail::parse_plain_number(detail::trim(std::string_view(s).substr(0, slash)));
    const auto den = detail::parse_plain_number(detail::trim(std::string_view(s).substr(slash + 1)));
    if (num && den && *den != 0.0) v = *num / *den;
  }
  if (!v || std::isnan(*v)) throw ConfigError(key, "expected a number, got '" + s + "'");
  return *v;
}

inline std::uint64_t parse_unsigned(const std::string& key, std::string_view text) {
  const std::string s = detail::trim(text);
  std::uint64_t v = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (s.empty() || ec != std::errc() || ptr != s.data() + s.size())
    throw ConfigError(key, "expected a nonnegative integer, got '" + s + "'");
  return v;
}

inline bool parse_bool(const std::string& key, std::string_view text) {
  const std::string s = detail::trim(text);
  if (s == "true" || s == "1" || s == "yes") return true;
  if (s == "false" || s == "0" || s == "no") return false;
  throw ConfigError(key, "expected true or false, got '" + s + "'");
}

/// Comma-separated numbers. The text must not be blank; an unset grid is
/// represented by the key holding its empty default, which callers check
/// before parsing.
inline std::vector<double> parse_grid(const std::string& key, std::string_view text) {
  std::vector<double> out;
  std::string item;
  std::istringstream in{std::string(text)};
  while (std::getline(in, item, ',')) out.push_back(parse_number(key, item));
  if (out.empty()) throw ConfigError(key, "sweep grid is empty");
  return out;
}

/// Applies one `key=value` assignment, rejecting unknown keys.
inline void assign(ConfigMap& cfg, const std::string& assignment, const std::string& origin) {
  const auto eq = assignment.find('=');
  if (eq == std::string::npos)
    throw ConfigError("", origin + ": expected key=value, got '" + assignment + "'");
  const std::string key = detail::trim(std::string_view(assignment).substr(0, eq));
  const std::string value = detail::trim(std::string_view(assignment).substr(eq + 1));
  if (!config_defaults().contains(key)) throw ConfigError(key, origin + ": unknown key");
  cfg[key] = value;
}

/// Keys a user explicitly provided (file or override), as opposed to defaults.
struct ConfigSource {
  ConfigMap values = config_defaults();
  std::map<std::string, bool> explicit_keys;

  void set(const std::string& assignment, const std::string& origin) {
    assign(values, assignment, origin);
    const auto eq = assignment.find('=');
    explicit_keys[detail::trim(std::string_view(assignment).substr(0, eq))] = true;
  }

  bool is_explicit(const std::string& key) const { return explicit_keys.contains(key); }

  /// Parses `key = value` lines; `#` starts a comment.
  void load(std::istream& in, const std::string& origin) {
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
      ++lineno;
      const auto hash = line.find('#');
      if (hash != std::string::npos) line.erase(hash);
      if (detail::trim(line).empty()) continue;
      set(line, origin + ":" + std::to_string(lineno));
    }
  }
};

/// Typed experiment configuration.
struct ExperimentConfig {
  Study study = Study::outage_vs_rg;
  LengthUnit units = LengthUnit::tx_distance;
  NetworkGeometry geometry;
  bool perimeter = false;
  ChannelConfig channel;
  OutageParams outage;
  double snr_db = 10.0;
  double sinr_threshold_db = 0.0;
  std::size_t networks = 10000;
  std::uint64_t seed = 0;
  unsigned workers = 1;
  bool thinning = true;
  TcEstimator tc_estimator = TcEstimator::product_of_means;
  LatencyModel latency_model = LatencyModel::closed_form;
  unsigned arq_interval = 6;
  double slot_duration = 1.0;
  double link_throughput = 1.0;

  std::vector<double> guard_radius_grid;
  std::vector<double> exclusion_radius_grid;
  std::vector<double> effective_gain_grid;
  std::vector<double> path_loss_exponent_grid;
  std::vector<double> interferers_grid;
  std::vector<double> tx_distance_grid;
  std::vector<double> snr_db_grid;

  double target_outage = 0.1;
  double target_tc = 15.0;
  SearchMethod search_method = SearchMethod::grid;
  double search_resolution = 1e-3;
  double max_gain = 1e6;

  /// The resolved textual form, echoed into the run manifest.
  ConfigMap resolved;
};

namespace detail {

inline double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }

/// Collects violations instead of stopping at the first one.
class Violations {
 public:
  template <typename Fn>
  void check(Fn&& fn) {
    try {
      fn();
    } catch (const ConfigError& e) {
      list_.push_back(e.what());
    } catch (const Error& e) {
      list_.push_back(e.what());
    }
  }
  void add(const std::string& key, const std::string& msg) { list_.push_back(key + ": " + msg); }
  const std::vector<std::string>& list() const { return list_; }

 private:
  std::vector<std::string> list_;
};

}  // namespace detail

struct ParseOutcome {
  ExperimentConfig config;
  std::vector<std::string> violations;

  bool ok() const { return violations.empty(); }
};

/// Builds the typed configuration and reports every violated constraint by
/// key. Geometry is checked against the scalar values; grid points that
/// violate r_g >= r_ex are skipped at run time rather than rejected.
inline ParseOutcome parse_config(const ConfigSource& src) {
  ParseOutcome out;
  ExperimentConfig& c = out.config;
  detail::Violations v;
  const ConfigMap& m = src.values;
  auto get = [&](const char* k) -> const std::string& { return m.at(k); };
  auto num = [&](const char* k, double& dst) { v.check([&] { dst = parse_number(k, get(k)); }); };
  auto grid = [&](const char* k, std::vector<double>& dst) {
    v.check([&] {
      if (get(k).empty()) {
        if (src.is_explicit(k)) throw ConfigError(k, "sweep grid is empty");
        return;
      }
      dst = parse_grid(k, get(k));
      if (!std::is_sorted(dst.begin(), dst.end()))
        throw ConfigError(k, "sweep grid must be sorted ascending");
    });
  };

  v.check([&] {
    const std::string& s = get("study");
    for (const auto& [name, value] : study_names()) {
      if (s == name) {
        c.study = value;
        return;
      }
    }
    throw ConfigError("study", "unknown study '" + s + "'");
  });
  v.check([&] {
    const std::string& u = get("units");
    if (u == "tx_distance")
      c.units = LengthUnit::tx_distance;
    else if (u == "net_radius")
      c.units = LengthUnit::net_radius;
    else
      throw ConfigError("units", "expected tx_distance or net_radius");
  });

  num("net_radius", c.geometry.net_radius);
  num("tx_distance", c.geometry.tx_distance);
  num("exclusion_radius", c.geometry.exclusion_radius);
  num("guard_radius", c.geometry.guard_radius);
  v.check([&] {
    const std::string& r = get("receiver");
    if (r == "center")
      c.perimeter = false;
    else if (r == "perimeter")
      c.perimeter = true;
    else
      throw ConfigError("receiver", "expected center or perimeter");
  });
  v.check([&] { c.geometry.interferers = parse_unsigned("interferers", get("interferers")); });
  v.check([&] {
    c.geometry.max_redraws = parse_unsigned("max_redraws", get("max_redraws"));
    if (c.geometry.max_redraws < 1) throw ConfigError("max_redraws", "must be at least 1");
  });

  num("path_loss_exponent", c.channel.path_loss_exponent);
  num("shadowing_db", c.channel.shadowing_db);
  num("reference_distance", c.channel.reference_distance);
  v.check([&] {
    const std::string& s = get("spreading");
    if (s == "fixed")
      c.channel.spreading = SpreadingMode::fixed_effective_gain;
    else if (s == "random_chip")
      c.channel.spreading = SpreadingMode::random_chip_offset;
    else
      throw ConfigError("spreading", "expected fixed or random_chip");
  });
  num("effective_gain", c.channel.effective_gain);
  num("processing_gain", c.channel.processing_gain);
  num("power_ratio", c.channel.power_ratio);
  num("duty_factor", c.channel.duty_factor);
  num("nakagami_m", c.channel.nakagami_m);

  v.check([&] {
    const double m0 = parse_number("m0", get("m0"));
    if (!(m0 >= 1.0) || m0 != std::floor(m0) || m0 > 64.0)
      throw ConfigError("m0", "must be a positive integer (got " + get("m0") + ")");
    c.outage.m0 = static_cast<unsigned>(m0);
  });
  num("sinr_threshold_db", c.sinr_threshold_db);
  num("snr_db", c.snr_db);
  c.outage.beta = detail::db_to_linear(c.sinr_threshold_db);
  c.outage.snr = std::isinf(c.snr_db) && c.snr_db > 0 ? std::numeric_limits<double>::infinity()
                                                      : detail::db_to_linear(c.snr_db);

  v.check([&] {
    c.networks = parse_unsigned("networks", get("networks"));
    if (c.networks < 1) throw ConfigError("networks", "must be at least 1");
  });
  v.check([&] {
    if (get("seed").empty())
      throw ConfigError("seed", "a seed is required (set seed= or pass --seed)");
    c.seed = parse_unsigned("seed", get("seed"));
  });
  v.check([&] {
    c.workers = static_cast<unsigned>(parse_unsigned("workers", get("workers")));
    if (c.workers < 1) throw ConfigError("workers", "must be at least 1");
  });
  v.check([&] { c.thinning = parse_bool("thinning", get("thinning")); });
  v.check([&] {
    const std::string& s = get("tc_estimator");
    if (s == "product_of_means")
      c.tc_estimator = TcEstimator::product_of_means;
    else if (s == "mean_of_products")
      c.tc_estimator = TcEstimator::mean_of_products;
    else
      throw ConfigError("tc_estimator", "expected product_of_means or mean_of_products");
  });
  v.check([&] {
    const std::string& s = get("latency_model");
    if (s == "closed_form")
      c.latency_model = LatencyModel::closed_form;
    else if (s == "renewal")
      c.latency_model = LatencyModel::renewal;
    else
      throw ConfigError("latency_model", "expected closed_form or renewal");
  });
  v.check([&] {
    c.arq_interval = static_cast<unsigned>(parse_unsigned("arq_interval", get("arq_interval")));
    if (c.arq_interval < 1) throw ConfigError("arq_interval", "must be at least 1");
  });
  num("slot_duration", c.slot_duration);
  num("link_throughput", c.link_throughput);

  grid("guard_radius_grid", c.guard_radius_grid);
  grid("exclusion_radius_grid", c.exclusion_radius_grid);
  grid("effective_gain_grid", c.effective_gain_grid);
  grid("path_loss_exponent_grid", c.path_loss_exponent_grid);
  grid("interferers_grid", c.interferers_grid);
  grid("tx_distance_grid", c.tx_distance_grid);
  grid("snr_db_grid", c.snr_db_grid);

  num("target_outage", c.target_outage);
  num("target_tc", c.target_tc);
  v.check([&] {
    const std::string& s = get("search_method");
    if (s == "grid")
      c.search_method = SearchMethod::grid;
    else if (s == "bisection")
      c.search_method = SearchMethod::bisection;
    else
      throw ConfigError("search_method", "expected grid or bisection");
  });
  num("search_resolution", c.search_resolution);
  num("max_gain", c.max_gain);

  // Table study defaults: the full 2x2x2x2 layout unless the grids are given.
  if (c.study == Study::table1) {
    if (c.effective_gain_grid.empty()) c.effective_gain_grid = {1.0, 48.0};
    if (c.path_loss_exponent_grid.empty()) c.path_loss_exponent_grid = {3.0, 4.0};
    if (c.exclusion_radius_grid.empty()) c.exclusion_radius_grid = {0.0, 0.5};
    if (c.guard_radius_grid.empty()) c.guard_radius_grid = {0.5, 1.5};
  }

  // Unit system.
  if (c.units == LengthUnit::tx_distance) {
    if (c.geometry.tx_distance != 1.0)
      v.add("tx_distance", "must be 1 when units = tx_distance");
    if (!c.tx_distance_grid.empty())
      v.add("tx_distance_grid", "cannot sweep the transmitter distance when units = tx_distance");
  } else if (c.geometry.net_radius != 1.0) {
    v.add("net_radius", "must be 1 when units = net_radius");
  }

  if (c.perimeter) c.geometry.receiver = NetworkGeometry::perimeter_receiver(c.geometry.net_radius);

  // Scalar invariants, reported by key.
  if (!(c.geometry.guard_radius >= c.geometry.exclusion_radius))
    v.add("guard_radius", "r_g must be at least r_ex (exclusion_radius)");
  if (!(c.geometry.exclusion_radius >= 0.0)) v.add("exclusion_radius", "must be nonnegative");
  if (!(c.geometry.net_radius > 0.0)) v.add("net_radius", "must be positive");
  if (!(c.geometry.tx_distance > 0.0)) v.add("tx_distance", "must be positive");
  else if (c.geometry.tx_distance < c.geometry.exclusion_radius)
    v.add("tx_distance", "must be at least exclusion_radius");
  else if (c.geometry.tx_distance > c.geometry.net_radius)
    v.add("tx_distance", "must not exceed net_radius");
  if (!(c.channel.path_loss_exponent >= 2.0)) v.add("path_loss_exponent", "must be at least 2");
  if (!(c.channel.shadowing_db >= 0.0)) v.add("shadowing_db", "must be nonnegative");
  if (!(c.channel.reference_distance >= 0.0)) v.add("reference_distance", "must be nonnegative");
  else if (c.channel.reference_distance > 0.0 &&
           c.channel.reference_distance > c.geometry.exclusion_radius &&
           c.geometry.exclusion_radius > 0.0)
    v.add("reference_distance", "must not exceed exclusion_radius");
  if (!(c.channel.effective_gain > 0.0)) v.add("effective_gain", "must be positive");
  if (!(c.channel.processing_gain > 0.0)) v.add("processing_gain", "must be positive");
  if (!(c.channel.duty_factor >= 0.0 && c.channel.duty_factor <= 1.0))
    v.add("duty_factor", "must lie in [0, 1]");
  if (!(c.channel.nakagami_m > 0.0)) v.add("nakagami_m", "must be positive");
  if (!(c.channel.power_ratio >= 0.0)) v.add("power_ratio", "must be nonnegative");
  if (!(c.slot_duration > 0.0)) v.add("slot_duration", "must be positive");
  if (!(c.link_throughput > 0.0)) v.add("link_throughput", "must be positive");
  if (!(c.target_outage >= 0.0 && c.target_outage <= 1.0))
    v.add("target_outage", "must lie in [0, 1]");
  if (!(c.target_tc >= 0.0)) v.add("target_tc", "must be nonnegative");
  if (!(c.search_resolution > 0.0)) v.add("search_resolution", "must be positive");
  if (!(c.max_gain >= 1.0)) v.add("max_gain", "must be at least 1");
  if (std::isnan(c.snr_db) || c.snr_db == -std::numeric_limits<double>::infinity())
    v.add("snr_db", "must be finite or inf");
  for (double g : c.effective_gain_grid)
    if (!(g > 0.0)) v.add("effective_gain_grid", "entries must be positive");
  for (double a : c.path_loss_exponent_grid)
    if (!(a >= 2.0)) v.add("path_loss_exponent_grid", "entries must be at least 2");
  for (double r : c.exclusion_radius_grid)
    if (!(r >= 0.0)) v.add("exclusion_radius_grid", "entries must be nonnegative");
  for (double r : c.guard_radius_grid)
    if (!(r >= 0.0)) v.add("guard_radius_grid", "entries must be nonnegative");
  for (double n : c.interferers_grid)
    if (!(n >= 0.0) || n != std::floor(n))
      v.add("interferers_grid", "entries must be nonnegative integers");
  for (double d : c.tx_distance_grid)
    if (!(d > 0.0 && d <= c.geometry.net_radius))
      v.add("tx_distance_grid", "entries must lie in (0, net_radius]");

  c.resolved = m;
  out.violations = v.list();
  return out;
}

}  // namespace gzsim
