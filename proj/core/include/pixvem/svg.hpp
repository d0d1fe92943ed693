#pragma once

#include <string>

namespace pixvem {

enum class PlotKind { ErrorVsH, ErrorVsDofs };

PlotKind parse_plot_kind(const std::string& name);

/// Log-log SVG of a study CSV: one polyline per (k, tau_hat) series for e1
/// (solid) and e0 (dashed), annotated with fitted slopes.
void plot_svg(const std::string& csv_path, PlotKind kind, const std::string& out_path);

}  // namespace pixvem
