#pragma once

// Study runners behind the command-line tool. Every study produces a CSV
// table whose header carries the unit of each numeric column.

#include <charconv>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <functional>
#include <map>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "gzsim/config.hpp"
#include "gzsim/errors.hpp"
#include "gzsim/metrics.hpp"

namespace gzsim {

/// Shortest decimal text that round-trips to the same double.
inline std::string format_number(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, ptr);
}

inline std::string format_number(std::size_t v) { return std::to_string(v); }

struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  static std::string quote(const std::string& field) {
    if (field.find_first_of(",\"\r\n") == std::string::npos) return field;
    std::string out = "\"";
    for (char ch : field) {
      if (ch == '"') out += '"';
      out += ch;
    }
    return out + "\"";
  }

  /// RFC 4180 layout: CRLF line ends, header row first.
  void write(std::ostream& os) const {
    auto line = [&os](const std::vector<std::string>& fields) {
      for (std::size_t i = 0; i < fields.size(); ++i) {
        if (i) os << ',';
        os << quote(fields[i]);
      }
      os << "\r\n";
    };
    line(header);
    for (const auto& r : rows) line(r);
  }

  std::string str() const {
    std::ostringstream os;
    write(os);
    return os.str();
  }
};

struct StudyOutput {
  CsvTable table;
  std::vector<std::string> warnings;
};

/// An error raised at a specific sweep point.
class SweepPointError : public Error {
 public:
  SweepPointError(const std::string& point, const std::string& what)
      : Error("at " + point + ": " + what) {}
};

namespace detail {

inline std::vector<double> grid_or(const std::vector<double>& grid, double scalar) {
  return grid.empty() ? std::vector<double>{scalar} : grid;
}

inline std::string bool_text(bool b) { return b ? "true" : "false"; }

/// Geometry-defining coordinates of a sweep: one ensemble per combination.
struct EnsemblePoint {
  double tx_distance;
  std::size_t interferers;
  double exclusion_radius;

  std::string describe() const {
    return "tx_distance=" + format_number(tx_distance) +
           " interferers=" + std::to_string(interferers) +
           " exclusion_radius=" + format_number(exclusion_radius);
  }
};

inline std::vector<EnsemblePoint> ensemble_points(const ExperimentConfig& c) {
  std::vector<EnsemblePoint> pts;
  for (double d : grid_or(c.tx_distance_grid, c.geometry.tx_distance))
    for (double m : grid_or(c.interferers_grid, static_cast<double>(c.geometry.interferers)))
      for (double rex : grid_or(c.exclusion_radius_grid, c.geometry.exclusion_radius))
        pts.push_back({d, static_cast<std::size_t>(m), rex});
  return pts;
}

inline Ensemble build_ensemble(const ExperimentConfig& c, const EnsemblePoint& p, bool perimeter) {
  NetworkGeometry g = c.geometry;
  g.tx_distance = p.tx_distance;
  g.interferers = p.interferers;
  g.exclusion_radius = p.exclusion_radius;
  g.guard_radius = p.exclusion_radius;
  g.receiver = perimeter ? NetworkGeometry::perimeter_receiver(g.net_radius) : Point{};
  try {
    return generate_ensemble(g, c.networks, c.seed, c.workers);
  } catch (const Error& e) {
    throw SweepPointError(p.describe(), e.what());
  }
}

inline EvaluationOptions evaluation_options(const ExperimentConfig& c,
                                            std::optional<double> guard) {
  EvaluationOptions o;
  o.guard_radius = guard;
  o.tc_estimator = c.tc_estimator;
  o.latency_model = c.latency_model;
  o.arq_interval = c.arq_interval;
  o.workers = c.workers;
  return o;
}

inline std::string unit_label(const ExperimentConfig& c) { return std::string(to_string(c.units)); }

/// Columns shared by every ensemble-level row: the inputs of the point.
inline std::vector<std::string> point_header(const ExperimentConfig& c) {
  const std::string L = unit_label(c);
  return {"study",
          "receiver",
          "interferers[count]",
          "net_radius[" + L + "]",
          "tx_distance[" + L + "]",
          "exclusion_radius[" + L + "]",
          "guard_radius[" + L + "]",
          "csma",
          "path_loss_exponent[1]",
          "shadowing[dB]",
          "spreading",
          "effective_gain[1]",
          "processing_gain[1]",
          "snr[dB]",
          "sinr_threshold[dB]",
          "m0[1]",
          "nakagami_m[1]",
          "duty_factor[1]",
          "networks[count]",
          "seed"};
}

struct EvalPoint {
  EnsemblePoint ens;
  double guard_radius;
  bool csma;
  double path_loss_exponent;
  double effective_gain;
  double snr_db;
};

inline std::vector<std::string> point_fields(const ExperimentConfig& c, const EvalPoint& p) {
  return {std::string(to_string(c.study)),
          c.perimeter ? "perimeter" : "center",
          std::to_string(p.ens.interferers),
          format_number(c.geometry.net_radius),
          format_number(p.ens.tx_distance),
          format_number(p.ens.exclusion_radius),
          format_number(p.guard_radius),
          bool_text(p.csma),
          format_number(p.path_loss_exponent),
          format_number(c.channel.shadowing_db),
          c.channel.spreading == SpreadingMode::fixed_effective_gain ? "fixed" : "random_chip",
          format_number(p.effective_gain),
          format_number(c.channel.processing_gain),
          format_number(p.snr_db),
          format_number(c.sinr_threshold_db),
          std::to_string(c.outage.m0),
          format_number(c.channel.nakagami_m),
          format_number(c.channel.duty_factor),
          std::to_string(c.networks),
          std::to_string(c.seed)};
}

inline OutageParams outage_at(const ExperimentConfig& c, double snr_db) {
  OutageParams o = c.outage;
  o.snr = std::isinf(snr_db) ? std::numeric_limits<double>::infinity()
                             : std::pow(10.0, snr_db / 10.0);
  return o;
}

inline ChannelConfig channel_at(const ExperimentConfig& c, double alpha, double gain) {
  ChannelConfig ch = c.channel;
  ch.path_loss_exponent = alpha;
  ch.effective_gain = gain;
  return ch;
}

/// Ensemble sweep shared by the outage, TC, latency, M, distance and
/// single-network studies.
inline StudyOutput run_sweep(const ExperimentConfig& c) {
  StudyOutput out;
  const std::string L = unit_label(c);
  out.table.header = point_header(c);
  for (const char* h : {"eps_bar[prob]", "eps_std_err[prob]", "mean_active[count]"})
    out.table.header.emplace_back(h);
  out.table.header.push_back("density[1/" + L + "^2]");
  out.table.header.push_back("tc_over_b[1/" + L + "^2]");
  out.table.header.push_back("tc[throughput/" + L + "^2]");
  out.table.header.emplace_back("latency[slots]");
  out.table.header.emplace_back("latency[time]");

  for (const EnsemblePoint& ep : ensemble_points(c)) {
    const Ensemble ens = build_ensemble(c, ep, c.perimeter);
    for (double gain : grid_or(c.effective_gain_grid, c.channel.effective_gain))
      for (double alpha : grid_or(c.path_loss_exponent_grid, c.channel.path_loss_exponent))
        for (double snr_db : grid_or(c.snr_db_grid, c.snr_db))
          for (double rg : grid_or(c.guard_radius_grid, c.geometry.guard_radius)) {
            if (rg < ep.exclusion_radius) continue;
            const EvalPoint p{ep, rg, c.thinning, alpha, gain, snr_db};
            const auto opts =
                evaluation_options(c, c.thinning ? std::optional<double>(rg) : std::nullopt);
            ExperimentResult r;
            try {
              r = evaluate(ens, channel_at(c, alpha, gain), outage_at(c, snr_db), opts);
            } catch (const Error& e) {
              throw SweepPointError(ep.describe() + " guard_radius=" + format_number(rg), e.what());
            }
            auto row = point_fields(c, p);
            row.push_back(format_number(r.eps_bar));
            row.push_back(format_number(r.eps_std_err));
            row.push_back(format_number(r.mean_active));
            row.push_back(format_number(r.density));
            row.push_back(format_number(r.tc_over_b));
            row.push_back(format_number(r.tc_over_b * c.link_throughput));
            row.push_back(format_number(r.latency_slots));
            row.push_back(format_number(r.latency_slots * c.slot_duration));
            out.table.rows.push_back(std::move(row));
          }
  }
  return out;
}

/// Centre and perimeter average outage side by side, one row per
/// (G_e, alpha, r_ex, r_g) combination in that nesting order.
inline StudyOutput run_table1(const ExperimentConfig& c) {
  StudyOutput out;
  const std::string L = unit_label(c);
  out.table.header = {"effective_gain[1]",
                      "path_loss_exponent[1]",
                      "exclusion_radius[" + L + "]",
                      "guard_radius[" + L + "]",
                      "eps_center[prob]",
                      "eps_perimeter[prob]",
                      "eps_center_std_err[prob]",
                      "eps_perimeter_std_err[prob]",
                      "mean_active_center[count]",
                      "mean_active_perimeter[count]"};

  struct Cell {
    ExperimentResult center;
    ExperimentResult perimeter;
  };
  std::map<std::size_t, Cell> cells;  // keyed by output row index
  const auto gains = grid_or(c.effective_gain_grid, c.channel.effective_gain);
  const auto alphas = grid_or(c.path_loss_exponent_grid, c.channel.path_loss_exponent);
  const auto rexs = grid_or(c.exclusion_radius_grid, c.geometry.exclusion_radius);
  const auto rgs = grid_or(c.guard_radius_grid, c.geometry.guard_radius);
  auto index = [&](std::size_t gi, std::size_t ai, std::size_t xi, std::size_t ri) {
    return ((gi * alphas.size() + ai) * rexs.size() + xi) * rgs.size() + ri;
  };

  for (std::size_t xi = 0; xi < rexs.size(); ++xi) {
    const EnsemblePoint ep{c.geometry.tx_distance, c.geometry.interferers, rexs[xi]};
    for (bool perimeter : {false, true}) {
      const Ensemble ens = build_ensemble(c, ep, perimeter);
      for (std::size_t gi = 0; gi < gains.size(); ++gi)
        for (std::size_t ai = 0; ai < alphas.size(); ++ai)
          for (std::size_t ri = 0; ri < rgs.size(); ++ri) {
            if (rgs[ri] < rexs[xi]) continue;
            const auto opts = evaluation_options(
                c, c.thinning ? std::optional<double>(rgs[ri]) : std::nullopt);
            const auto r = evaluate(ens, channel_at(c, alphas[ai], gains[gi]),
                                    outage_at(c, c.snr_db), opts);
            Cell& cell = cells[index(gi, ai, xi, ri)];
            (perimeter ? cell.perimeter : cell.center) = r;
          }
    }
  }

  for (std::size_t gi = 0; gi < gains.size(); ++gi)
    for (std::size_t ai = 0; ai < alphas.size(); ++ai)
      for (std::size_t xi = 0; xi < rexs.size(); ++xi)
        for (std::size_t ri = 0; ri < rgs.size(); ++ri) {
          const auto it = cells.find(index(gi, ai, xi, ri));
          if (it == cells.end()) continue;
          const Cell& cell = it->second;
          out.table.rows.push_back({format_number(gains[gi]), format_number(alphas[ai]),
                                    format_number(rexs[xi]), format_number(rgs[ri]),
                                    format_number(cell.center.eps_bar),
                                    format_number(cell.perimeter.eps_bar),
                                    format_number(cell.center.eps_std_err),
                                    format_number(cell.perimeter.eps_std_err),
                                    format_number(cell.center.mean_active),
                                    format_number(cell.perimeter.mean_active)});
        }
  return out;
}

/// Smallest guard radius meeting `target_outage`, per (distance, M, r_ex,
/// G_e, alpha, SNR).
inline StudyOutput run_min_rg_curve(const ExperimentConfig& c) {
  StudyOutput out;
  const std::string L = unit_label(c);
  out.table.header = {"receiver",
                      "interferers[count]",
                      "tx_distance[" + L + "]",
                      "exclusion_radius[" + L + "]",
                      "effective_gain[1]",
                      "path_loss_exponent[1]",
                      "snr[dB]",
                      "target_outage[prob]",
                      "min_guard_radius[" + L + "]",
                      "eps_at_min[prob]",
                      "status"};
  GuardSearchOptions search;
  search.method = c.search_method;
  search.grid = c.guard_radius_grid;
  search.resolution = c.search_resolution;
  for (const EnsemblePoint& ep : ensemble_points(c)) {
    const Ensemble ens = build_ensemble(c, ep, c.perimeter);
    for (double gain : grid_or(c.effective_gain_grid, c.channel.effective_gain))
      for (double alpha : grid_or(c.path_loss_exponent_grid, c.channel.path_loss_exponent))
        for (double snr_db : grid_or(c.snr_db_grid, c.snr_db)) {
          const ChannelConfig ch = channel_at(c, alpha, gain);
          const OutageParams op = outage_at(c, snr_db);
          std::vector<std::string> row = {c.perimeter ? "perimeter" : "center",
                                          std::to_string(ep.interferers),
                                          format_number(ep.tx_distance),
                                          format_number(ep.exclusion_radius),
                                          format_number(gain),
                                          format_number(alpha),
                                          format_number(snr_db),
                                          format_number(c.target_outage)};
          try {
            const double rg = min_guard_radius(c.target_outage, ens, ch, op, search,
                                               evaluation_options(c, std::nullopt));
            const double eps = evaluate(ens, ch, op, evaluation_options(c, rg)).eps_bar;
            row.push_back(format_number(rg));
            row.push_back(format_number(eps));
            row.emplace_back("ok");
          } catch (const TargetUnachievable& e) {
            out.warnings.push_back(ep.describe() + " effective_gain=" + format_number(gain) +
                                   ": " + e.what());
            row.emplace_back("");
            row.emplace_back("");
            row.emplace_back("unachievable");
          }
          out.table.rows.push_back(std::move(row));
        }
  }
  return out;
}

/// Smallest effective gain meeting `target_tc` (as tau / b), per
/// (distance, M, r_ex, alpha, SNR, r_g).
inline StudyOutput run_min_ge_curve(const ExperimentConfig& c) {
  StudyOutput out;
  const std::string L = unit_label(c);
  out.table.header = {"receiver",
                      "interferers[count]",
                      "tx_distance[" + L + "]",
                      "exclusion_radius[" + L + "]",
                      "guard_radius[" + L + "]",
                      "path_loss_exponent[1]",
                      "snr[dB]",
                      "target_tc_over_b[1/" + L + "^2]",
                      "min_effective_gain[1]",
                      "tc_over_b_at_min[1/" + L + "^2]",
                      "status"};
  GainSearchOptions search;
  search.max_gain = c.max_gain;
  search.relative_resolution = c.search_resolution;
  for (const EnsemblePoint& ep : ensemble_points(c)) {
    const Ensemble ens = build_ensemble(c, ep, c.perimeter);
    for (double alpha : grid_or(c.path_loss_exponent_grid, c.channel.path_loss_exponent))
      for (double snr_db : grid_or(c.snr_db_grid, c.snr_db))
        for (double rg : grid_or(c.guard_radius_grid, c.geometry.guard_radius)) {
          if (rg < ep.exclusion_radius) continue;
          const ChannelConfig ch = channel_at(c, alpha, c.channel.effective_gain);
          const OutageParams op = outage_at(c, snr_db);
          const std::optional<double> guard =
              c.thinning ? std::optional<double>(rg) : std::nullopt;
          std::vector<std::string> row = {c.perimeter ? "perimeter" : "center",
                                          std::to_string(ep.interferers),
                                          format_number(ep.tx_distance),
                                          format_number(ep.exclusion_radius),
                                          format_number(rg),
                                          format_number(alpha),
                                          format_number(snr_db),
                                          format_number(c.target_tc)};
          try {
            const double gain = min_spreading_gain(c.target_tc, ens, ch, op, guard, search,
                                                   evaluation_options(c, std::nullopt));
            const double tc =
                evaluate(ens, channel_at(c, alpha, gain), op, evaluation_options(c, guard))
                    .tc_over_b;
            row.push_back(format_number(gain));
            row.push_back(format_number(tc));
            row.emplace_back("ok");
          } catch (const TargetUnachievable& e) {
            out.warnings.push_back(ep.describe() + " guard_radius=" + format_number(rg) + ": " +
                                   e.what());
            row.emplace_back("");
            row.emplace_back("");
            row.emplace_back("unachievable");
          }
          out.table.rows.push_back(std::move(row));
        }
  }
  return out;
}

}  // namespace detail

inline StudyOutput run_study(const ExperimentConfig& c) {
  switch (c.study) {
    case Study::table1:
      return detail::run_table1(c);
    case Study::min_rg_curve:
      return detail::run_min_rg_curve(c);
    case Study::min_ge_curve:
      return detail::run_min_ge_curve(c);
    case Study::outage_vs_rg:
    case Study::tc_vs_rg:
    case Study::latency_vs_rg:
    case Study::tc_vs_M:
    case Study::tc_vs_tx_distance:
    case Study::single_network:
      return detail::run_sweep(c);
  }
  return {};
}

}  // namespace gzsim
