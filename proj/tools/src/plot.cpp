#include "gsqr_tools/plot.hpp"

#include "gsqr/errors.hpp"
#include "gsqr/select.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <sstream>

namespace gsqr::tools {

PlotKind plot_kind_from_string(const std::string& name) {
    if (name == "coefficients") return PlotKind::Coefficients;
    if (name == "tradeoff") return PlotKind::Tradeoff;
    if (name == "groupmax") return PlotKind::GroupMax;
    throw InputError("unknown plot kind '" + name + "' (expected coefficients, tradeoff or groupmax)");
}

PlotData make_plot(const PathDocument& doc, PlotKind kind) {
    if (doc.path.empty()) throw InputError("document has an empty path");
    const QuantileProblem& p = doc.problem();
    PlotData data;
    for (const auto& node : doc.path.nodes) data.x.push_back(node.R);

    switch (kind) {
        case PlotKind::Coefficients:
            data.title = "Coefficient paths";
            data.y_label = "coefficient";
            for (int j = 0; j < p.m(); ++j) {
                Series s{doc.column_names[static_cast<std::size_t>(j)], {}};
                for (const auto& node : doc.path.nodes) s.values.push_back(node.beta[j]);
                data.series.push_back(std::move(s));
            }
            break;
        case PlotKind::Tradeoff: {
            data.title = "Loss against penalty";
            data.y_label = "loss";
            Series s{"loss", {}};
            for (const auto& pt : tradeoff_curve(doc.path, p)) s.values.push_back(pt.loss);
            data.series.push_back(std::move(s));
            break;
        }
        case PlotKind::GroupMax:
            data.title = "Group max-norms";
            data.y_label = "max |beta_j| in group";
            for (int k = 0; k < p.groups().size(); ++k) {
                Series s{doc.group_names[static_cast<std::size_t>(k)], {}};
                for (const auto& node : doc.path.nodes) s.values.push_back(group_max_norm(node.beta, p.groups(), k));
                data.series.push_back(std::move(s));
            }
            break;
    }
    return data;
}

namespace {

std::string csv_field(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    return out + '"';
}

std::string xml_escape(const std::string& s) {
    std::string out;
    for (char c : s) {
        switch (c) {
            case '<': out += "&lt;"; break;
            case '>': out += "&gt;"; break;
            case '&': out += "&amp;"; break;
            case '"': out += "&quot;"; break;
            default: out += c;
        }
    }
    return out;
}

const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd",
                          "#8c564b", "#e377c2", "#7f7f7f", "#bcbd22", "#17becf"};

}  // namespace

void write_plot_csv(std::ostream& out, const PlotData& data) {
    const auto precision = out.precision(17);
    out << csv_field(data.x_label);
    for (const auto& s : data.series) out << ',' << csv_field(s.name);
    out << '\n';
    for (std::size_t t = 0; t < data.x.size(); ++t) {
        out << data.x[t];
        for (const auto& s : data.series) out << ',' << s.values[t];
        out << '\n';
    }
    out.precision(precision);
}

void write_plot_svg(std::ostream& out, const PlotData& data, std::optional<double> marker_R) {
    constexpr double width = 640, height = 420;
    constexpr double left = 70, right = 150, top = 40, bottom = 50;
    const double plot_w = width - left - right;
    const double plot_h = height - top - bottom;

    double x_lo = 0.0, x_hi = 1.0, y_lo = 0.0, y_hi = 1.0;
    if (!data.x.empty()) {
        x_lo = *std::min_element(data.x.begin(), data.x.end());
        x_hi = *std::max_element(data.x.begin(), data.x.end());
    }
    bool first = true;
    for (const auto& s : data.series) {
        for (double v : s.values) {
            if (first) y_lo = y_hi = v;
            y_lo = std::min(y_lo, v);
            y_hi = std::max(y_hi, v);
            first = false;
        }
    }
    if (x_hi - x_lo <= 0.0) x_hi = x_lo + 1.0;
    if (y_hi - y_lo <= 0.0) {
        y_lo -= 0.5;
        y_hi += 0.5;
    }
    const double pad = 0.05 * (y_hi - y_lo);
    y_lo -= pad;
    y_hi += pad;

    auto sx = [&](double x) { return left + (x - x_lo) / (x_hi - x_lo) * plot_w; };
    auto sy = [&](double y) { return top + (y_hi - y) / (y_hi - y_lo) * plot_h; };

    std::ostringstream svg;
    svg.precision(6);
    svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\"" << height
        << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
    svg << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    svg << "<text x=\"" << width / 2 << "\" y=\"22\" text-anchor=\"middle\" font-size=\"14\">" << xml_escape(data.title)
        << "</text>\n";

    // axes and ticks
    svg << "<line x1=\"" << left << "\" y1=\"" << top + plot_h << "\" x2=\"" << left + plot_w << "\" y2=\""
        << top + plot_h << "\" stroke=\"black\"/>\n";
    svg << "<line x1=\"" << left << "\" y1=\"" << top << "\" x2=\"" << left << "\" y2=\"" << top + plot_h
        << "\" stroke=\"black\"/>\n";
    for (int t = 0; t <= 4; ++t) {
        const double xv = x_lo + (x_hi - x_lo) * t / 4.0;
        const double yv = y_lo + (y_hi - y_lo) * t / 4.0;
        svg << "<line x1=\"" << sx(xv) << "\" y1=\"" << top + plot_h << "\" x2=\"" << sx(xv) << "\" y2=\""
            << top + plot_h + 5 << "\" stroke=\"black\"/>";
        svg << "<text x=\"" << sx(xv) << "\" y=\"" << top + plot_h + 18 << "\" text-anchor=\"middle\">" << xv
            << "</text>\n";
        svg << "<line x1=\"" << left - 5 << "\" y1=\"" << sy(yv) << "\" x2=\"" << left << "\" y2=\"" << sy(yv)
            << "\" stroke=\"black\"/>";
        svg << "<text x=\"" << left - 8 << "\" y=\"" << sy(yv) + 4 << "\" text-anchor=\"end\">" << yv << "</text>\n";
    }
    svg << "<text x=\"" << left + plot_w / 2 << "\" y=\"" << height - 10 << "\" text-anchor=\"middle\">"
        << xml_escape(data.x_label) << "</text>\n";
    svg << "<text transform=\"translate(16," << top + plot_h / 2 << ") rotate(-90)\" text-anchor=\"middle\">"
        << xml_escape(data.y_label) << "</text>\n";

    if (marker_R && *marker_R >= x_lo && *marker_R <= x_hi) {
        svg << "<line x1=\"" << sx(*marker_R) << "\" y1=\"" << top << "\" x2=\"" << sx(*marker_R) << "\" y2=\""
            << top + plot_h << "\" stroke=\"gray\" stroke-dasharray=\"6,4\"/>\n";
    }

    for (std::size_t k = 0; k < data.series.size(); ++k) {
        const auto& s = data.series[k];
        const char* color = kPalette[k % std::size(kPalette)];
        svg << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.5\" points=\"";
        for (std::size_t t = 0; t < data.x.size(); ++t) svg << sx(data.x[t]) << ',' << sy(s.values[t]) << ' ';
        svg << "\"/>\n";
        for (std::size_t t = 0; t < data.x.size(); ++t) {
            svg << "<circle cx=\"" << sx(data.x[t]) << "\" cy=\"" << sy(s.values[t]) << "\" r=\"2.5\" fill=\"" << color
                << "\"/>";
        }
        svg << '\n';
        const double ly = top + 14.0 * static_cast<double>(k) + 6;
        svg << "<line x1=\"" << left + plot_w + 10 << "\" y1=\"" << ly << "\" x2=\"" << left + plot_w + 28 << "\" y2=\""
            << ly << "\" stroke=\"" << color << "\" stroke-width=\"2\"/>";
        svg << "<text x=\"" << left + plot_w + 32 << "\" y=\"" << ly + 4 << "\">" << xml_escape(s.name) << "</text>\n";
    }
    svg << "</svg>\n";
    out << svg.str();
}

}  // namespace gsqr::tools
