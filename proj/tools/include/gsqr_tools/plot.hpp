#pragma once

#include "gsqr_tools/document.hpp"

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace gsqr::tools {

enum class PlotKind { Coefficients, Tradeoff, GroupMax };

PlotKind plot_kind_from_string(const std::string& name);

struct Series {
    std::string name;
    std::vector<double> values;
};

/// Polyline vertices at the path nodes; the path is linear in between.
struct PlotData {
    std::string title;
    std::string x_label = "R";
    std::string y_label;
    std::vector<double> x;
    std::vector<Series> series;
};

PlotData make_plot(const PathDocument& doc, PlotKind kind);

/// Header "R,<series>..." then one row per vertex, numbers at 17 significant digits.
void write_plot_csv(std::ostream& out, const PlotData& data);

/// Line plot with node markers and an optional dashed vertical line at marker_R.
void write_plot_svg(std::ostream& out, const PlotData& data, std::optional<double> marker_R = std::nullopt);

}  // namespace gsqr::tools
