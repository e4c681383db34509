#pragma once

#include <array>
#include <cstddef>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "kmpp/cost.hpp"
#include "kmpp/dataset.hpp"
#include "kmpp/experiments.hpp"

namespace kmpp {

struct Vec2 {
    double x;
    double y;
};

struct Box {
    double xmin;
    double ymin;
    double xmax;
    double ymax;
};

struct VoronoiCell {
    std::size_t center;
    std::vector<Vec2> polygon;  ///< counter-clockwise; empty if the center duplicates a lower-index one
};

/// Boundary segment shared by cells `a < b`.
struct VoronoiEdge {
    std::size_t a;
    std::size_t b;
    Vec2 from;
    Vec2 to;
};

struct VoronoiDiagram {
    std::vector<VoronoiCell> cells;
    std::vector<VoronoiEdge> edges;
};

/// Voronoi cells of 2-D centers clipped to `box`, one half-plane clip per
/// other center (O(k^2) per cell).
VoronoiDiagram voronoi_diagram(const CenterSet& centers, const Box& box);

/// Bounding box of the data widened by 5% of its extent on every side
/// (a zero extent is widened by 0.5 instead).
Box plot_bounds(const Dataset& data);

/// Fixed 20-color palette; cluster j gets entry j mod 20.
std::string_view cluster_color(std::size_t cluster);

struct PlotSpec {
    const Dataset& data;
    CenterSet centers;
    Assignment assignment;
    int width = 800;
    int height = 800;
};

/**
 * SVG 1.1 scatter plot with the Voronoi diagram superimposed.
 *
 * Data coordinates map to the canvas with one scale for both axes and y up.
 * Elements carry classes for tooling: `cell` polygons and `point` circles
 * with a `data-cluster` attribute, `edge` polylines, `center` markers.
 * Throws UnsupportedDimensionError unless the data is 2-D.
 */
std::string clustering_svg(const PlotSpec& plot);
void render_clustering_svg(const PlotSpec& plot, const std::filesystem::path& path);

/// Header `m,strategy,refine,mean,stderr,ref_cost,gap`, one row per (m, track),
/// reals at 17 significant digits.
std::string study_csv(const ExperimentResult& result);
void write_study_csv(const ExperimentResult& result, const std::filesystem::path& path);
std::vector<StudyRow> parse_study_csv(const std::string& text);

/// Header `instance,m,k,expected_cost,optimal_cost,ratio,bound,status`.
std::string bound_csv(const std::vector<BoundCheck>& checks);

}  // namespace kmpp
