#include "kmpp/dataset.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <map>
#include <set>
#include <sstream>

#include <fmt/format.h>

#include "kmpp/error.hpp"
#include "kmpp/io.hpp"

namespace kmpp {

namespace {

std::string trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string_view::npos) {
        return {};
    }
    const auto last = s.find_last_not_of(" \t\r");
    return std::string(s.substr(first, last - first + 1));
}

std::vector<std::string> split(std::string_view s, char sep) {
    std::vector<std::string> out;
    std::size_t start = 0;
    while (true) {
        const auto pos = s.find(sep, start);
        out.push_back(trim(s.substr(start, pos - start)));
        if (pos == std::string_view::npos) {
            break;
        }
        start = pos + 1;
    }
    return out;
}

bool parse_double(const std::string& field, double& value) {
    if (field.empty()) {
        return false;
    }
    const char* begin = field.data();
    const char* end = begin + field.size();
    if (*begin == '+') {
        ++begin;
    }
    auto [ptr, ec] = std::from_chars(begin, end, value);
    return ec == std::errc() && ptr == end && std::isfinite(value);
}

}  // namespace

Dataset::Dataset(std::size_t dim, std::vector<double> coords) : dim_(dim), coords_(std::move(coords)) {
    if (dim_ == 0) {
        throw ValidationError("dataset dimension must be positive");
    }
    if (coords_.empty() || coords_.size() % dim_ != 0) {
        throw ValidationError(
            fmt::format("dataset needs a nonempty multiple of {} coordinates, got {}", dim_, coords_.size()));
    }
    if (!std::all_of(coords_.begin(), coords_.end(), [](double v) { return std::isfinite(v); })) {
        throw ValidationError("dataset coordinates must be finite");
    }
}

Dataset Dataset::from_rows(const std::vector<std::vector<double>>& rows) {
    if (rows.empty()) {
        throw ValidationError("dataset must contain at least one point");
    }
    const std::size_t dim = rows.front().size();
    std::vector<double> coords;
    coords.reserve(rows.size() * dim);
    for (const auto& row : rows) {
        if (row.size() != dim) {
            throw ValidationError("all points must have the same dimension");
        }
        coords.insert(coords.end(), row.begin(), row.end());
    }
    return Dataset(dim, std::move(coords));
}

std::vector<double> Dataset::mean() const {
    std::vector<double> acc(dim_, 0.0);
    for (std::size_t i = 0; i < size(); ++i) {
        auto p = point(i);
        for (std::size_t d = 0; d < dim_; ++d) {
            acc[d] += p[d];
        }
    }
    for (auto& v : acc) {
        v /= static_cast<double>(size());
    }
    return acc;
}

std::size_t Dataset::distinct_locations() const {
    std::set<std::vector<double>> seen;
    for (std::size_t i = 0; i < size(); ++i) {
        auto p = point(i);
        seen.emplace(p.begin(), p.end());
    }
    return seen.size();
}

MixtureSpec::MixtureSpec(std::vector<MixtureComponent> components) : components_(std::move(components)) {
    if (components_.empty()) {
        throw ValidationError("mixture needs at least one component");
    }
    const std::size_t dim = components_.front().center.size();
    if (dim == 0) {
        throw ValidationError("mixture component centers must be nonempty");
    }
    double total = 0.0;
    for (const auto& c : components_) {
        if (c.center.size() != dim) {
            throw ValidationError("mixture component centers differ in dimension");
        }
        if (!(c.stdev > 0.0) || !std::isfinite(c.stdev)) {
            throw ValidationError(fmt::format("mixture stdev must be positive, got {}", c.stdev));
        }
        if (!(c.weight > 0.0) || !std::isfinite(c.weight)) {
            throw ValidationError(fmt::format("mixture weight must be positive, got {}", c.weight));
        }
        if (!std::all_of(c.center.begin(), c.center.end(), [](double v) { return std::isfinite(v); })) {
            throw ValidationError("mixture centers must be finite");
        }
        total += c.weight;
    }
    for (auto& c : components_) {
        c.weight /= total;
    }
}

MixtureSpec generate_grid_mixture(std::size_t rows, std::size_t cols, double spacing, double stdev) {
    if (rows == 0 || cols == 0) {
        throw ValidationError("grid needs at least one row and one column");
    }
    if (!(spacing > 0.0)) {
        throw ValidationError(fmt::format("grid spacing must be positive, got {}", spacing));
    }
    if (!(stdev > 0.0)) {
        throw ValidationError(fmt::format("grid stdev must be positive, got {}", stdev));
    }
    const double weight = 1.0 / static_cast<double>(rows * cols);
    std::vector<MixtureComponent> components;
    components.reserve(rows * cols);
    for (std::size_t i = 0; i < rows; ++i) {
        for (std::size_t j = 0; j < cols; ++j) {
            components.push_back({{static_cast<double>(i) * spacing, static_cast<double>(j) * spacing}, stdev, weight});
        }
    }
    return MixtureSpec(std::move(components));
}

Dataset sample(const MixtureSpec& spec, std::size_t m, Rng& rng) {
    if (m == 0) {
        throw ValidationError("sample size must be positive");
    }
    const auto& comps = spec.components();
    std::vector<double> cumulative;
    cumulative.reserve(comps.size());
    double acc = 0.0;
    for (const auto& c : comps) {
        acc += c.weight;
        cumulative.push_back(acc);
    }
    const std::size_t dim = spec.dim();
    std::vector<double> coords;
    coords.reserve(m * dim);
    for (std::size_t i = 0; i < m; ++i) {
        const double u = rng.uniform() * acc;
        auto it = std::upper_bound(cumulative.begin(), cumulative.end(), u);
        const auto& c = comps[std::min<std::size_t>(it - cumulative.begin(), comps.size() - 1)];
        for (std::size_t d = 0; d < dim; ++d) {
            coords.push_back(c.center[d] + c.stdev * rng.normal());
        }
    }
    return Dataset(dim, std::move(coords));
}

Dataset sample(const MixtureSpec& spec, std::size_t m, std::uint64_t seed) {
    Rng rng(seed);
    return sample(spec, m, rng);
}

Dataset parse_csv(const std::string& text) {
    std::vector<double> coords;
    std::size_t dim = 0;
    std::size_t line_no = 0;
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) {
        ++line_no;
        if (trim(line).empty()) {
            continue;
        }
        const auto fields = split(line, ',');
        if (dim == 0) {
            dim = fields.size();
        } else if (fields.size() != dim) {
            throw ParseError(fmt::format("expected {} fields, found {}", dim, fields.size()), line_no);
        }
        for (const auto& f : fields) {
            double v = 0.0;
            if (!parse_double(f, v)) {
                throw ParseError("not a finite number: '" + f + "'", line_no);
            }
            coords.push_back(v);
        }
    }
    if (dim == 0) {
        throw ParseError("empty file", std::max<std::size_t>(line_no, 1));
    }
    return Dataset(dim, std::move(coords));
}

Dataset load_csv(const std::filesystem::path& path) {
    return parse_csv(read_text_file(path));
}

std::string to_csv(const Dataset& data) {
    std::string out;
    for (std::size_t i = 0; i < data.size(); ++i) {
        auto p = data.point(i);
        for (std::size_t d = 0; d < p.size(); ++d) {
            if (d > 0) {
                out += ',';
            }
            out += fmt::format("{:.17g}", p[d]);
        }
        out += '\n';
    }
    return out;
}

void save_csv(const Dataset& data, const std::filesystem::path& path) {
    write_text_file(path, to_csv(data));
}

MixtureSpec parse_mixture_config(const std::string& text) {
    std::map<std::string, double> grid;
    std::vector<MixtureComponent> components;
    std::istringstream in(text);
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const auto hash = line.find('#');
        if (hash != std::string::npos) {
            line.erase(hash);
        }
        if (trim(line).empty()) {
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos) {
            throw ParseError("expected key = value", line_no);
        }
        const std::string key = trim(std::string_view(line).substr(0, eq));
        const std::string value = trim(std::string_view(line).substr(eq + 1));
        if (key == "component") {
            const auto parts = split(value, ';');
            if (parts.size() != 3) {
                throw ParseError("component needs center;stdev;weight", line_no);
            }
            MixtureComponent c{};
            for (const auto& f : split(parts[0], ',')) {
                double v = 0.0;
                if (!parse_double(f, v)) {
                    throw ParseError("bad center coordinate '" + f + "'", line_no);
                }
                c.center.push_back(v);
            }
            if (!parse_double(parts[1], c.stdev) || !parse_double(parts[2], c.weight)) {
                throw ParseError("bad stdev or weight", line_no);
            }
            components.push_back(std::move(c));
        } else if (key == "rows" || key == "cols" || key == "spacing" || key == "stdev") {
            double v = 0.0;
            if (!parse_double(value, v)) {
                throw ParseError("bad value for " + key, line_no);
            }
            grid[key] = v;
        } else {
            throw ParseError("unknown key '" + key + "'", line_no);
        }
    }
    if (!components.empty()) {
        if (!grid.empty()) {
            throw ValidationError("mixture config mixes grid keys with explicit components");
        }
        return MixtureSpec(std::move(components));
    }
    for (const char* key : {"rows", "cols", "spacing", "stdev"}) {
        if (!grid.contains(key)) {
            throw ValidationError(std::string("mixture config is missing '") + key + "'");
        }
    }
    const double rows = grid["rows"];
    const double cols = grid["cols"];
    if (rows < 1 || cols < 1 || rows != std::floor(rows) || cols != std::floor(cols)) {
        throw ValidationError("rows and cols must be positive integers");
    }
    return generate_grid_mixture(static_cast<std::size_t>(rows), static_cast<std::size_t>(cols), grid["spacing"],
                                 grid["stdev"]);
}

MixtureSpec load_mixture_config(const std::filesystem::path& path) {
    return parse_mixture_config(read_text_file(path));
}

std::string to_mixture_config(const MixtureSpec& spec) {
    std::string out;
    for (const auto& c : spec.components()) {
        out += "component = ";
        for (std::size_t d = 0; d < c.center.size(); ++d) {
            if (d > 0) {
                out += ',';
            }
            out += fmt::format("{:.17g}", c.center[d]);
        }
        out += fmt::format(";{:.17g};{:.17g}\n", c.stdev, c.weight);
    }
    return out;
}

void save_mixture_config(const MixtureSpec& spec, const std::filesystem::path& path) {
    write_text_file(path, to_mixture_config(spec));
}

}  // namespace kmpp
