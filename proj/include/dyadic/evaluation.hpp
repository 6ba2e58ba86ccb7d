#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <optional>
#include <span>
#include <utility>
#include <variant>
#include <vector>

#include "continuous.hpp"
#include "empirical.hpp"
#include "errors.hpp"
#include "estimator.hpp"
#include "sample_buffer.hpp"
#include "scalar.hpp"
#include "source.hpp"
#include "step_density.hpp"

namespace dyadic {

/// Exact integral of |f - g| over the line, walking the merged breakpoints.
template <class T>
T l1_step(const StepDensity<T>& f, const StepDensity<T>& g) {
  const auto pts = merged_breakpoints(f, g);
  T sum(0);
  std::size_t pf = 0;
  std::size_t pg = 0;
  auto value_on = [](const StepDensity<T>& h, std::size_t& p, const T& lo) {
    const auto& b = h.breakpoints();
    if (h.is_zero() || lo < b.front() || !(lo < b.back()))
      return T(0);
    while (!(lo < b[p + 1]))
      ++p;
    return h.heights()[p];
  };
  for (std::size_t s = 0; s + 1 < pts.size(); ++s) {
    const T diff = value_on(f, pf, pts[s]) - value_on(g, pg, pts[s]);
    sum += abs_value(diff) * (pts[s + 1] - pts[s]);
  }
  return sum;
}

struct L1Result {
  double value = 0.0;
  /// Worst-case error of `value` caused by treating mass outside the window
  /// as non-overlapping.
  double tail_bound = 0.0;
  /// Mass of the continuous target outside the window exceeds 1e-6.
  bool window_too_small = false;
};

/// integral |f - g| for a step function f and a closed-form density g.
///
/// Inside [lo, hi) the line is cut at f's breakpoints, at an optional uniform
/// grid, and at every point where g - f can change sign (g's jumps, its mode
/// and its crossings of f's level), so each piece contributes exactly
/// |c * length - (G(b) - G(a))|. Outside the window the masses of |f| and g
/// are added, which over-counts by at most tail_bound.
inline L1Result l1_mixed(const StepDensity<double>& f,
                         const ContinuousDensity& g, double lo, double hi,
                         int grid_cells_per_unit = 0) {
  if (!(std::isfinite(lo) && std::isfinite(hi) && lo < hi))
    throw contract_error("l1_mixed: window needs finite lo < hi");
  if (grid_cells_per_unit < 0)
    throw contract_error("l1_mixed: grid_cells_per_unit must be >= 0");

  std::vector<double> cuts{lo, hi};
  for (double b : f.breakpoints())
    if (lo < b && b < hi)
      cuts.push_back(b);
  if (grid_cells_per_unit > 0) {
    const double step = 1.0 / grid_cells_per_unit;
    const auto cells = static_cast<std::size_t>(std::ceil((hi - lo) / step));
    for (std::size_t c = 1; c < cells; ++c)
      cuts.push_back(lo + static_cast<double>(c) * step);
  }
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());

  L1Result out;
  double inside = 0.0;
  for (std::size_t s = 0; s + 1 < cuts.size(); ++s) {
    const double a = cuts[s];
    const double b = cuts[s + 1];
    const double level = f(a);
    double left = a;
    auto piece = [&](double right) {
      const double mass_g = g.cdf(right) - g.cdf(left);
      inside += std::fabs(level * (right - left) - mass_g);
      left = right;
    };
    for (double x : g.sign_splits(level, a, b))
      piece(x);
    piece(b);
  }

  double f_out = 0.0;
  const auto& bps = f.breakpoints();
  for (std::size_t p = 0; p < f.pieces(); ++p) {
    const double h = std::fabs(f.heights()[p]);
    const double l = bps[p];
    const double r = bps[p + 1];
    if (l < lo)
      f_out += h * (std::min(r, lo) - l);
    if (r > hi)
      f_out += h * (r - std::max(l, hi));
  }
  const double g_out = g.cdf(lo) + (1.0 - g.cdf(hi));
  out.value = inside + f_out + g_out;
  out.tail_bound = 2.0 * std::min(f_out, g_out);
  out.window_too_small = g_out > 1e-6;
  return out;
}

inline L1Result l1_mixed(const StepDensity<double>& f,
                         const ContinuousDensity& g,
                         int grid_cells_per_unit = 0) {
  const auto [lo, hi] = g.natural_window();
  return l1_mixed(f, g, lo, hi, grid_cells_per_unit);
}

/// L1 distance from an estimate to a declared limiting density.
inline L1Result l1_to_limit(const StepDensity<double>& estimate,
                            const LimitingDensity& target) {
  if (const auto* step = std::get_if<StepDensity<double>>(&target))
    return {l1_step(estimate, *step), 0.0, false};
  if (const auto* g = std::get_if<ContinuousDensity>(&target))
    return l1_mixed(estimate, *g);
  throw contract_error("source declares no limiting density");
}

/// sup-over-intervals discrepancy between a sample and a declared density.
inline double discrepancy_to_limit(const SampleBuffer& buffer,
                                   const LimitingDensity& target) {
  if (const auto* step = std::get_if<StepDensity<double>>(&target))
    return sup_interval_discrepancy(
        buffer, [step](double x) { return step_cdf(*step, x); });
  if (const auto* g = std::get_if<ContinuousDensity>(&target))
    return sup_interval_discrepancy(buffer,
                                    [g](double x) { return g->cdf(x); });
  throw contract_error("source declares no limiting density");
}

struct ReportRow {
  std::size_t n = 0;
  std::optional<int> level;
  double l1_error = 0.0;
  double discrepancy = 0.0;
  double tail_bound = 0.0;
};

/// Streams the source through the estimator and scores every checkpoint
/// against the source's declared limiting density.
inline std::vector<ReportRow>
convergence_report(SequenceSource& source, const EstimatorConfig& config,
                   std::span<const std::size_t> checkpoints) {
  const LimitingDensity target = source.limiting_density();
  if (std::holds_alternative<std::monostate>(target))
    throw contract_error("convergence_report: source declares no limiting density");
  std::vector<ReportRow> rows;
  rows.reserve(checkpoints.size());
  stream(source, config, checkpoints,
         [&](const SampleBuffer& buffer, const EstimateReport& report) {
           const L1Result l1 = l1_to_limit(report.density, target);
           rows.push_back({report.n, report.level, l1.value,
                           discrepancy_to_limit(buffer, target),
                           l1.tail_bound});
         });
  return rows;
}

} // namespace dyadic
