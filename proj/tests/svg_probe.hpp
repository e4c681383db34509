#pragma once

// Reads the clustering SVGs back for structural checks: XML well-formedness,
// cell count, and Voronoi/colour consistency against nearest-center queries.

#include <cmath>
#include <cstddef>
#include <limits>
#include <sstream>
#include <string>
#include <vector>

#include <boost/property_tree/ptree.hpp>
#include <boost/property_tree/xml_parser.hpp>

namespace kmpp::testing {

struct SvgPoint {
    double x;
    double y;
    std::size_t cluster;
    std::string fill;
};

struct SvgCell {
    std::size_t cluster;
    std::vector<std::pair<double, double>> polygon;
    std::string fill;
};

struct ParsedSvg {
    std::vector<SvgCell> cells;
    std::vector<SvgPoint> points;
    std::vector<SvgPoint> centers;
    std::size_t edges = 0;
};

inline std::vector<std::pair<double, double>> parse_points_attr(const std::string& s) {
    std::vector<std::pair<double, double>> out;
    std::istringstream in(s);
    std::string pair;
    while (in >> pair) {
        const auto comma = pair.find(',');
        out.emplace_back(std::stod(pair.substr(0, comma)), std::stod(pair.substr(comma + 1)));
    }
    return out;
}

/// Throws boost::property_tree::xml_parser_error if the document is not well-formed XML.
inline ParsedSvg parse_svg(const std::string& text) {
    namespace pt = boost::property_tree;
    pt::ptree tree;
    std::istringstream in(text);
    pt::read_xml(in, tree);
    ParsedSvg out;
    const pt::ptree& svg = tree.get_child("svg");
    for (const auto& [group_tag, group] : svg) {
        if (group_tag != "g") {
            continue;
        }
        for (const auto& [tag, node] : group) {
            if (tag == "<xmlattr>") {
                continue;
            }
            const std::string cls = node.get<std::string>("<xmlattr>.class", "");
            if (tag == "polygon" && cls == "cell") {
                out.cells.push_back({node.get<std::size_t>("<xmlattr>.data-cluster"),
                                     parse_points_attr(node.get<std::string>("<xmlattr>.points")),
                                     node.get<std::string>("<xmlattr>.fill")});
            } else if (tag == "circle" && (cls == "point" || cls == "center")) {
                SvgPoint p{node.get<double>("<xmlattr>.cx"), node.get<double>("<xmlattr>.cy"),
                           node.get<std::size_t>("<xmlattr>.data-cluster"), node.get<std::string>("<xmlattr>.fill")};
                (cls == "point" ? out.points : out.centers).push_back(p);
            } else if (tag == "polyline" && cls == "edge") {
                ++out.edges;
            }
        }
    }
    return out;
}

inline bool inside_polygon(const std::vector<std::pair<double, double>>& poly, double x, double y) {
    bool inside = false;
    for (std::size_t i = 0, j = poly.size() - 1; i < poly.size(); j = i++) {
        const auto [xi, yi] = poly[i];
        const auto [xj, yj] = poly[j];
        if ((yi > y) != (yj > y) && x < (xj - xi) * (y - yi) / (yj - yi) + xi) {
            inside = !inside;
        }
    }
    return inside;
}

/// Nearest center marker, and the gap between the best and second-best distance.
inline std::pair<std::size_t, double> nearest_marker(const std::vector<SvgPoint>& centers, double x, double y) {
    double best = std::numeric_limits<double>::infinity();
    double second = std::numeric_limits<double>::infinity();
    std::size_t arg = 0;
    for (const auto& c : centers) {
        const double d = std::hypot(c.x - x, c.y - y);
        if (d < best) {
            second = best;
            best = d;
            arg = c.cluster;
        } else if (d < second) {
            second = d;
        }
    }
    return {arg, second - best};
}

struct VoronoiCheck {
    std::size_t probes = 0;
    std::size_t mismatches = 0;
};

/// Probe an n x n grid over the frame: each probe must lie in the cell of its nearest center.
/// Probes within `margin` px of a tie are skipped (coordinates are printed to 3 decimals).
inline VoronoiCheck probe_voronoi(const ParsedSvg& svg, double width, double height, std::size_t n,
                                  double margin = 0.05) {
    VoronoiCheck check;
    for (std::size_t a = 0; a < n; ++a) {
        for (std::size_t b = 0; b < n; ++b) {
            const double x = (a + 0.5) * width / n;
            const double y = (b + 0.5) * height / n;
            std::size_t owner = std::numeric_limits<std::size_t>::max();
            std::size_t hits = 0;
            for (const auto& cell : svg.cells) {
                if (cell.polygon.size() >= 3 && inside_polygon(cell.polygon, x, y)) {
                    owner = cell.cluster;
                    ++hits;
                }
            }
            if (hits == 0) {
                continue;  // outside the clipped frame
            }
            const auto [nearest, gap] = nearest_marker(svg.centers, x, y);
            if (gap < margin) {
                continue;
            }
            ++check.probes;
            if (hits != 1 || owner != nearest) {
                ++check.mismatches;
            }
        }
    }
    return check;
}

/// Points whose fill differs from their nearest center's colour (ties within `margin` px skipped).
inline std::size_t colour_mismatches(const ParsedSvg& svg, double margin = 0.05) {
    std::size_t bad = 0;
    for (const auto& p : svg.points) {
        const auto [nearest, gap] = nearest_marker(svg.centers, p.x, p.y);
        if (gap < margin) {
            continue;
        }
        std::string expected;
        for (const auto& cell : svg.cells) {
            if (cell.cluster == nearest) {
                expected = cell.fill;
            }
        }
        if (p.cluster != nearest || p.fill != expected) {
            ++bad;
        }
    }
    return bad;
}

}  // namespace kmpp::testing
