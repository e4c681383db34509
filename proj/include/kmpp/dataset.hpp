#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "kmpp/rng.hpp"

namespace kmpp {

/**
 * A finite point set in R^dim, stored dense and row-major.
 *
 * Stands for the empirical measure that puts mass 1/m on each point.
 * Duplicate points are allowed and each carries its own mass. Immutable
 * after construction.
 */
class Dataset {
public:
    /// Throws ValidationError unless dim >= 1, coords is a nonempty multiple
    /// of dim, and every coordinate is finite.
    Dataset(std::size_t dim, std::vector<double> coords);

    static Dataset from_rows(const std::vector<std::vector<double>>& rows);

    std::size_t size() const { return coords_.size() / dim_; }
    std::size_t dim() const { return dim_; }

    std::span<const double> point(std::size_t i) const {
        return {coords_.data() + i * dim_, dim_};
    }
    std::span<const double> coords() const { return coords_; }

    /// Coordinate-wise mean of all points.
    std::vector<double> mean() const;

    /// Number of distinct point locations (exact coordinate equality).
    std::size_t distinct_locations() const;

    bool operator==(const Dataset&) const = default;

private:
    std::size_t dim_;
    std::vector<double> coords_;
};

struct MixtureComponent {
    std::vector<double> center;
    double stdev;
    double weight;
};

/// Isotropic Gaussian mixture. Weights are normalized at construction.
class MixtureSpec {
public:
    /// Throws ValidationError for an empty list, mismatched center
    /// dimensions, or a non-positive stdev or weight.
    explicit MixtureSpec(std::vector<MixtureComponent> components);

    const std::vector<MixtureComponent>& components() const { return components_; }
    std::size_t dim() const { return components_.front().center.size(); }

private:
    std::vector<MixtureComponent> components_;
};

/// rows x cols components centered at (i * spacing, j * spacing) with equal weights.
MixtureSpec generate_grid_mixture(std::size_t rows, std::size_t cols, double spacing, double stdev);

/// m i.i.d. draws: component chosen by weight, then isotropic Gaussian noise.
Dataset sample(const MixtureSpec& spec, std::size_t m, Rng& rng);
Dataset sample(const MixtureSpec& spec, std::size_t m, std::uint64_t seed);

// CSV: one point per line, comma-separated, no header. Values are written
// with 17 significant digits so that load(save(d)) == d.
Dataset load_csv(const std::filesystem::path& path);
Dataset parse_csv(const std::string& text);
void save_csv(const Dataset& data, const std::filesystem::path& path);
std::string to_csv(const Dataset& data);

// Mixture config: `key = value` lines, `#` comments. Either a grid
//   rows = 4
//   cols = 4
//   spacing = 1.0
//   stdev = 0.1
// or one line per component
//   component = <c_1>,<c_2>,...;<stdev>;<weight>
MixtureSpec parse_mixture_config(const std::string& text);
MixtureSpec load_mixture_config(const std::filesystem::path& path);
std::string to_mixture_config(const MixtureSpec& spec);
void save_mixture_config(const MixtureSpec& spec, const std::filesystem::path& path);

}  // namespace kmpp
