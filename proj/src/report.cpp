#include "kmpp/report.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <limits>
#include <sstream>

#include <fmt/format.h>

#include "kmpp/error.hpp"
#include "kmpp/io.hpp"

namespace kmpp {

namespace {

constexpr std::size_t kBoxSide = std::numeric_limits<std::size_t>::max();

constexpr std::array<std::string_view, 20> kPalette{
    "#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd", "#8c564b", "#e377c2", "#7f7f7f", "#bcbd22", "#17becf",
    "#aec7e8", "#ffbb78", "#98df8a", "#ff9896", "#c5b0d5", "#c49c94", "#f7b6d2", "#c7c7c7", "#dbdb8d", "#9edae5",
};

// Polygon vertex plus the generator of the edge that starts at it
// (another center's index, or kBoxSide for the clip box).
struct LabeledVertex {
    Vec2 p;
    std::size_t edge;
};

// Keeps the part of `poly` where dot(normal, p - anchor) <= 0; new edges along the line get `label`.
std::vector<LabeledVertex> clip(const std::vector<LabeledVertex>& poly, Vec2 normal, Vec2 anchor, std::size_t label) {
    auto side = [&](Vec2 p) { return normal.x * (p.x - anchor.x) + normal.y * (p.y - anchor.y); };
    std::vector<LabeledVertex> out;
    const std::size_t n = poly.size();
    for (std::size_t i = 0; i < n; ++i) {
        const LabeledVertex& a = poly[i];
        const LabeledVertex& b = poly[(i + 1) % n];
        const double sa = side(a.p);
        const double sb = side(b.p);
        const bool a_in = sa <= 0.0;
        const bool b_in = sb <= 0.0;
        if (a_in) {
            out.push_back(a);
        }
        if (a_in != b_in) {
            const double t = sa / (sa - sb);
            const Vec2 cross{a.p.x + t * (b.p.x - a.p.x), a.p.y + t * (b.p.y - a.p.y)};
            out.push_back({cross, a_in ? label : a.edge});
        }
    }
    return out;
}

std::string fmt_real(double v) {
    return fmt::format("{:.17g}", v);
}

bool parse_real(const std::string& field, double& value) {
    auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), value);
    return ec == std::errc() && ptr == field.data() + field.size();
}

}  // namespace

VoronoiDiagram voronoi_diagram(const CenterSet& centers, const Box& box) {
    if (centers.dim() != 2) {
        throw UnsupportedDimensionError(fmt::format("Voronoi diagrams need 2-D centers, got {}-D", centers.dim()));
    }
    VoronoiDiagram diagram;
    const std::size_t k = centers.size();
    for (std::size_t i = 0; i < k; ++i) {
        const Vec2 ci{centers[i][0], centers[i][1]};
        std::vector<LabeledVertex> poly{{{box.xmin, box.ymin}, kBoxSide},
                                        {{box.xmax, box.ymin}, kBoxSide},
                                        {{box.xmax, box.ymax}, kBoxSide},
                                        {{box.xmin, box.ymax}, kBoxSide}};
        for (std::size_t j = 0; j < k && !poly.empty(); ++j) {
            if (j == i) {
                continue;
            }
            const Vec2 cj{centers[j][0], centers[j][1]};
            if (cj.x == ci.x && cj.y == ci.y) {
                // Coincident centers: the lower index owns the whole cell.
                if (j < i) {
                    poly.clear();
                }
                continue;
            }
            const Vec2 normal{cj.x - ci.x, cj.y - ci.y};
            const Vec2 mid{0.5 * (ci.x + cj.x), 0.5 * (ci.y + cj.y)};
            poly = clip(poly, normal, mid, j);
        }
        VoronoiCell cell{i, {}};
        for (std::size_t v = 0; v < poly.size(); ++v) {
            cell.polygon.push_back(poly[v].p);
            const LabeledVertex& next = poly[(v + 1) % poly.size()];
            const double len = std::hypot(next.p.x - poly[v].p.x, next.p.y - poly[v].p.y);
            if (poly[v].edge != kBoxSide && poly[v].edge > i && len > 1e-12) {
                diagram.edges.push_back({i, poly[v].edge, poly[v].p, next.p});
            }
        }
        diagram.cells.push_back(std::move(cell));
    }
    return diagram;
}

Box plot_bounds(const Dataset& data) {
    if (data.dim() != 2) {
        throw UnsupportedDimensionError(fmt::format("plots need 2-D data, got {}-D", data.dim()));
    }
    Box b{std::numeric_limits<double>::infinity(), std::numeric_limits<double>::infinity(),
          -std::numeric_limits<double>::infinity(), -std::numeric_limits<double>::infinity()};
    for (std::size_t i = 0; i < data.size(); ++i) {
        auto p = data.point(i);
        b.xmin = std::min(b.xmin, p[0]);
        b.xmax = std::max(b.xmax, p[0]);
        b.ymin = std::min(b.ymin, p[1]);
        b.ymax = std::max(b.ymax, p[1]);
    }
    const double mx = b.xmax > b.xmin ? 0.05 * (b.xmax - b.xmin) : 0.5;
    const double my = b.ymax > b.ymin ? 0.05 * (b.ymax - b.ymin) : 0.5;
    return {b.xmin - mx, b.ymin - my, b.xmax + mx, b.ymax + my};
}

std::string_view cluster_color(std::size_t cluster) {
    return kPalette[cluster % kPalette.size()];
}

std::string clustering_svg(const PlotSpec& plot) {
    const Dataset& data = plot.data;
    if (data.dim() != 2 || plot.centers.dim() != 2) {
        throw UnsupportedDimensionError(fmt::format("clustering plots need 2-D data, got {}-D", data.dim()));
    }
    if (plot.assignment.labels.size() != data.size() || plot.assignment.num_centers != plot.centers.size()) {
        throw ContractError("assignment does not match the dataset and center set");
    }
    if (plot.width <= 0 || plot.height <= 0) {
        throw ValidationError("canvas dimensions must be positive");
    }

    const Box box = plot_bounds(data);
    const VoronoiDiagram diagram = voronoi_diagram(plot.centers, box);

    const double pad = 10.0;
    const double w = plot.width;
    const double h = plot.height;
    const double scale = std::min((w - 2 * pad) / (box.xmax - box.xmin), (h - 2 * pad) / (box.ymax - box.ymin));
    const double off_x = 0.5 * (w - scale * (box.xmax - box.xmin));
    const double off_y = 0.5 * (h - scale * (box.ymax - box.ymin));
    auto to_canvas = [&](double x, double y) {
        return Vec2{off_x + (x - box.xmin) * scale, off_y + (box.ymax - y) * scale};
    };
    auto pair = [](Vec2 p) { return fmt::format("{:.3f},{:.3f}", p.x, p.y); };

    std::string svg;
    svg += "<?xml version=\"1.0\" encoding=\"UTF-8\" standalone=\"no\"?>\n";
    svg += fmt::format(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"{0}\" height=\"{1}\" "
        "viewBox=\"0 0 {0} {1}\">\n",
        plot.width, plot.height);
    const Vec2 lo = to_canvas(box.xmin, box.ymax);
    svg += fmt::format(
        "<rect class=\"frame\" x=\"{:.3f}\" y=\"{:.3f}\" width=\"{:.3f}\" height=\"{:.3f}\" fill=\"white\" "
        "stroke=\"#999999\"/>\n",
        lo.x, lo.y, scale * (box.xmax - box.xmin), scale * (box.ymax - box.ymin));

    svg += "<g class=\"cells\">\n";
    for (const auto& cell : diagram.cells) {
        std::string points;
        for (const auto& v : cell.polygon) {
            if (!points.empty()) {
                points += ' ';
            }
            points += pair(to_canvas(v.x, v.y));
        }
        svg += fmt::format(
            "<polygon class=\"cell\" data-cluster=\"{}\" points=\"{}\" fill=\"{}\" fill-opacity=\"0.12\" "
            "stroke=\"none\"/>\n",
            cell.center, points, cluster_color(cell.center));
    }
    svg += "</g>\n<g class=\"points\">\n";
    for (std::size_t i = 0; i < data.size(); ++i) {
        const std::size_t label = plot.assignment.labels[i];
        const Vec2 p = to_canvas(data.point(i)[0], data.point(i)[1]);
        svg += fmt::format("<circle class=\"point\" data-cluster=\"{}\" cx=\"{:.3f}\" cy=\"{:.3f}\" r=\"1.5\" fill=\"{}\"/>\n",
                           label, p.x, p.y, cluster_color(label));
    }
    svg += "</g>\n<g class=\"edges\">\n";
    for (const auto& e : diagram.edges) {
        svg += fmt::format(
            "<polyline class=\"edge\" data-cells=\"{} {}\" points=\"{} {}\" fill=\"none\" stroke=\"#222222\" "
            "stroke-width=\"1\"/>\n",
            e.a, e.b, pair(to_canvas(e.from.x, e.from.y)), pair(to_canvas(e.to.x, e.to.y)));
    }
    svg += "</g>\n<g class=\"centers\">\n";
    for (std::size_t j = 0; j < plot.centers.size(); ++j) {
        const Vec2 c = to_canvas(plot.centers[j][0], plot.centers[j][1]);
        svg += fmt::format(
            "<circle class=\"center\" data-cluster=\"{}\" cx=\"{:.3f}\" cy=\"{:.3f}\" r=\"4\" fill=\"black\" "
            "stroke=\"white\" stroke-width=\"1\"/>\n",
            j, c.x, c.y);
    }
    svg += "</g>\n</svg>\n";
    return svg;
}

void render_clustering_svg(const PlotSpec& plot, const std::filesystem::path& path) {
    write_text_file(path, clustering_svg(plot));
}

std::string study_csv(const ExperimentResult& result) {
    std::string out = "m,strategy,refine,mean,stderr,ref_cost,gap\n";
    for (const auto& row : result.per_m) {
        out += fmt::format("{},{},{},{},{},{},{}\n", row.m, to_string(row.strategy), row.refine ? "true" : "false",
                           fmt_real(row.mean), fmt_real(row.std_error), fmt_real(row.ref_cost), fmt_real(row.gap));
    }
    return out;
}

void write_study_csv(const ExperimentResult& result, const std::filesystem::path& path) {
    write_text_file(path, study_csv(result));
}

std::vector<StudyRow> parse_study_csv(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    std::size_t line_no = 0;
    std::vector<StudyRow> rows;
    while (std::getline(in, line)) {
        ++line_no;
        if (line_no == 1) {
            if (line != "m,strategy,refine,mean,stderr,ref_cost,gap") {
                throw ParseError("unexpected study CSV header", line_no);
            }
            continue;
        }
        if (line.empty()) {
            continue;
        }
        std::vector<std::string> f;
        std::istringstream fields(line);
        std::string field;
        while (std::getline(fields, field, ',')) {
            f.push_back(field);
        }
        if (f.size() != 7) {
            throw ParseError(fmt::format("expected 7 fields, found {}", f.size()), line_no);
        }
        StudyRow row{};
        double m = 0.0;
        if (!parse_real(f[0], m) || !parse_real(f[3], row.mean) || !parse_real(f[4], row.std_error) ||
            !parse_real(f[5], row.ref_cost) || !parse_real(f[6], row.gap)) {
            throw ParseError("malformed number", line_no);
        }
        row.m = static_cast<std::size_t>(m);
        try {
            row.strategy = parse_strategy(f[1]);
        } catch (const ValidationError&) {
            throw ParseError("unknown strategy '" + f[1] + "'", line_no);
        }
        if (f[2] != "true" && f[2] != "false") {
            throw ParseError("refine must be true or false", line_no);
        }
        row.refine = f[2] == "true";
        rows.push_back(row);
    }
    if (line_no == 0) {
        throw ParseError("empty file", 1);
    }
    return rows;
}

std::string bound_csv(const std::vector<BoundCheck>& checks) {
    std::string out = "instance,m,k,expected_cost,optimal_cost,ratio,bound,status\n";
    for (const auto& c : checks) {
        out += fmt::format("{},{},{},{},{},{},{},{}\n", c.instance_id, c.m, c.k, fmt_real(c.expected_cost),
                           fmt_real(c.optimal_cost), fmt_real(c.ratio), fmt_real(c.bound), to_string(c.status));
    }
    return out;
}

}  // namespace kmpp
