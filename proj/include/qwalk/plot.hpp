#pragma once
// Dependency-free SVG rendering of result tables.
//
// The emitter reads its schema from table metadata rather than guessing:
//   plot_x — x column            (scan, heatmap, profile)
//   plot_y — y column(s), comma-separated (scan, profile) / axis2 (heatmap)
//   plot_v — cell value column   (heatmap)
// scatter_complex instead locates the first _re/_im column pair and an
// optional "series" text column (series "pbc" drawn blue, "fbc" red).
// Missing schema pieces raise invalid_parameter.

#include <string>

#include "qwalk/table.hpp"

namespace qwalk {

enum class PlotKind { scatter_complex, scan, heatmap, profile };

/// Render `table` as a standalone 640x480 SVG file at `path`.
/// scatter_complex: point cloud of (re, im) pairs, one color per series.
/// scan: y columns against the swept x column, as points.
/// heatmap: colored cells of plot_v over the (plot_x, plot_y) grid.
/// profile: log10 of |y| against x, for localization envelopes.
void emit_plot(const ResultTable& table, PlotKind kind,
               const std::string& path);

} // namespace qwalk
