#include "kmpp/cli.hpp"

#include <cstdlib>
#include <filesystem>
#include <functional>
#include <ostream>
#include <sstream>

#include <fmt/format.h>

#include "CLI11.hpp"
#include "json.hpp"

#include "kmpp/dataset.hpp"
#include "kmpp/error.hpp"
#include "kmpp/experiments.hpp"
#include "kmpp/io.hpp"
#include "kmpp/lloyd.hpp"
#include "kmpp/oracle.hpp"
#include "kmpp/report.hpp"
#include "kmpp/seeding.hpp"

namespace kmpp {

namespace {

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;

constexpr const char* kOutDirEnv = "KMPP_OUT_DIR";

struct GridOptions {
    std::string grid = "4x4";
    double spacing = 1.0;
    double stdev = 0.1;
    std::string mixture_path;
};

MixtureSpec resolve_mixture(const GridOptions& g) {
    if (!g.mixture_path.empty()) {
        return load_mixture_config(g.mixture_path);
    }
    const auto x = g.grid.find('x');
    if (x == std::string::npos) {
        throw ValidationError("grid must look like RxC, e.g. 4x4");
    }
    std::size_t rows = 0;
    std::size_t cols = 0;
    try {
        std::size_t used = 0;
        rows = std::stoul(g.grid.substr(0, x), &used);
        if (used != x) {
            throw std::invalid_argument("rows");
        }
        cols = std::stoul(g.grid.substr(x + 1), &used);
        if (used != g.grid.size() - x - 1) {
            throw std::invalid_argument("cols");
        }
    } catch (const std::logic_error&) {
        throw ValidationError("grid must look like RxC, e.g. 4x4, got '" + g.grid + "'");
    }
    return generate_grid_mixture(rows, cols, g.spacing, g.stdev);
}

void add_grid_options(CLI::App* cmd, GridOptions& g) {
    auto* grid = cmd->add_option("--grid", g.grid, "Grid of Gaussian clusters, RxC")->capture_default_str();
    cmd->add_option("--spacing", g.spacing, "Distance between neighbouring grid clusters")->capture_default_str();
    cmd->add_option("--stdev", g.stdev, "Per-coordinate standard deviation of each cluster")->capture_default_str();
    cmd->add_option("--mixture", g.mixture_path, "Mixture config file (overrides the grid)")->excludes(grid);
}

void add_out_option(CLI::App* cmd, std::string& out_dir) {
    cmd->add_option("--out", out_dir, "Output directory")->envname(kOutDirEnv)->capture_default_str();
}

fs::path prepare_out_dir(const std::string& dir) {
    const fs::path path(dir);
    std::error_code ec;
    fs::create_directories(path, ec);
    if (ec || !fs::is_directory(path)) {
        throw IoError("cannot create output directory " + dir);
    }
    return path;
}

void write_json(const fs::path& path, const json& doc) {
    write_text_file(path, doc.dump(2) + "\n");
}

json centers_json(const CenterSet& centers) {
    json arr = json::array();
    for (std::size_t j = 0; j < centers.size(); ++j) {
        arr.push_back(std::vector<double>(centers[j].begin(), centers[j].end()));
    }
    return arr;
}

std::string labels_csv(const std::vector<std::size_t>& labels) {
    std::string out;
    for (auto l : labels) {
        out += fmt::format("{}\n", l);
    }
    return out;
}

Dataset centers_as_dataset(const CenterSet& centers) {
    return Dataset(centers.dim(), std::vector<double>(centers.coords().begin(), centers.coords().end()));
}

json seeds_json(const std::vector<std::size_t>& indices) {
    return json(indices);
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"k-means++ seeding, Lloyd refinement, exact oracles, and consistency studies", "kmpp"};
    app.set_config("--config", "", "INI/TOML config file; command-line flags take precedence");
    app.require_subcommand(1, 1);
    app.set_help_all_flag("--help-all", "Show help for every subcommand");
    app.allow_config_extras(false);

    std::function<void()> action;
    std::string out_dir = ".";

    // generate
    GridOptions gen_grid;
    std::size_t gen_m = 0;
    std::uint64_t gen_seed = 0;
    auto* generate = app.add_subcommand("generate", "Sample a dataset from a Gaussian mixture");
    add_grid_options(generate, gen_grid);
    generate->add_option("--m", gen_m, "Number of points")->required();
    generate->add_option("--seed", gen_seed, "RNG seed")->required();
    add_out_option(generate, out_dir);
    generate->callback([&] {
        action = [&] {
            const MixtureSpec mixture = resolve_mixture(gen_grid);
            const Dataset data = sample(mixture, gen_m, gen_seed);
            const fs::path dir = prepare_out_dir(out_dir);
            save_csv(data, dir / "points.csv");
            save_mixture_config(mixture, dir / "mixture.cfg");
            out << fmt::format("wrote {} points to {}\n", data.size(), (dir / "points.csv").string());
        };
    });

    // cluster
    std::string cl_input;
    std::size_t cl_k = 0;
    std::string cl_strategy = "plusplus";
    std::uint64_t cl_seed = 0;
    bool cl_refine = false;
    LloydOptions cl_lloyd;
    auto* cluster = app.add_subcommand("cluster", "Seed (and optionally refine) a clustering of a CSV dataset");
    cluster->add_option("--input", cl_input, "Dataset CSV")->required();
    cluster->add_option("--k", cl_k, "Number of centers")->required();
    cluster->add_option("--strategy", cl_strategy, "plusplus or uniform_random")->capture_default_str();
    cluster->add_option("--seed", cl_seed, "RNG seed")->required();
    cluster->add_flag("--refine", cl_refine, "Run Lloyd refinement after seeding");
    cluster->add_option("--max-iters", cl_lloyd.max_iters, "Lloyd iteration cap")->capture_default_str();
    cluster->add_option("--tol", cl_lloyd.tol, "Lloyd displacement tolerance")->capture_default_str();
    add_out_option(cluster, out_dir);
    cluster->callback([&] {
        action = [&] {
            const Dataset data = load_csv(cl_input);
            Rng rng(cl_seed);
            const Seeding seeding = seed(data, cl_k, parse_strategy(cl_strategy), rng);
            json summary;
            summary["strategy"] = to_string(parse_strategy(cl_strategy));
            summary["k"] = cl_k;
            summary["seed"] = cl_seed;
            summary["seed_indices"] = seeds_json(seeding.indices);
            summary["seeded_cost"] = cost_empirical(data, seeding.centers);
            CenterSet final_centers = seeding.centers;
            Assignment labels = assign(data, seeding.centers);
            if (cl_refine) {
                LloydTrace trace = lloyd_refine(data, seeding.centers, cl_lloyd);
                json iters = json::array();
                for (const auto& step : trace.iterations) {
                    iters.push_back({{"cost", step.cost}, {"moved", step.moved}});
                }
                summary["lloyd"] = {{"converged", trace.converged}, {"iterations", iters}};
                final_centers = trace.final_centers;
                labels = trace.final_assignment;
            }
            summary["final_cost"] = cost_empirical(data, final_centers);
            summary["centers"] = centers_json(final_centers);

            const fs::path dir = prepare_out_dir(out_dir);
            save_csv(centers_as_dataset(final_centers), dir / "centers.csv");
            write_text_file(dir / "assignment.csv", labels_csv(labels.labels));
            if (data.dim() == 2) {
                render_clustering_svg(PlotSpec{data, final_centers, labels}, dir / "clustering.svg");
            }
            write_json(dir / "summary.json", summary);
            out << fmt::format("final cost {:.17g}\n", summary["final_cost"].get<double>());
        };
    });

    // enumerate
    std::string en_input;
    std::size_t en_k = 0;
    bool en_refine = false;
    auto* enumerate = app.add_subcommand("enumerate", "Exact k-means++ seeding distribution of a small dataset");
    enumerate->add_option("--input", en_input, "Dataset CSV")->required();
    enumerate->add_option("--k", en_k, "Number of centers")->required();
    enumerate->add_flag("--refine", en_refine, "Also report the expectation after Lloyd refinement");
    add_out_option(enumerate, out_dir);
    enumerate->callback([&] {
        action = [&] {
            const Dataset data = load_csv(en_input);
            const auto outcomes = enumerate_seedings(data, en_k);
            double total = 0.0;
            double expected = 0.0;
            for (const auto& o : outcomes) {
                total += o.probability;
                expected += o.probability * o.cost;
            }
            json summary;
            summary["m"] = data.size();
            summary["k"] = en_k;
            summary["outcomes"] = outcomes.size();
            summary["probability_sum"] = total;
            summary["expected_cost"] = expected;
            summary["expected_prefix_costs"] = exact_expected_prefix_costs(data, en_k);
            if (en_refine) {
                summary["expected_refined_cost"] = exact_expected_cost(data, en_k, true);
            }
            const fs::path dir = prepare_out_dir(out_dir);
            write_outcomes_csv(outcomes, dir / "outcomes.csv");
            write_json(dir / "summary.json", summary);
            out << fmt::format("{} outcomes, expected cost {:.17g}\n", outcomes.size(), expected);
        };
    });

    // optimum
    std::string op_input;
    std::size_t op_k = 0;
    auto* optimum = app.add_subcommand("optimum", "Brute-force optimal clustering of a small dataset");
    optimum->add_option("--input", op_input, "Dataset CSV")->required();
    optimum->add_option("--k", op_k, "Maximum number of clusters")->required();
    add_out_option(optimum, out_dir);
    optimum->callback([&] {
        action = [&] {
            const Dataset data = load_csv(op_input);
            const OptimalClustering best = brute_force_optimum(data, op_k);
            json summary;
            summary["m"] = data.size();
            summary["k"] = op_k;
            summary["best_cost"] = best.best_cost;
            summary["per_prefix"] = best.per_prefix;
            summary["partition"] = best.best_partition;
            summary["centers"] = centers_json(best.centers);
            const fs::path dir = prepare_out_dir(out_dir);
            write_text_file(dir / "partition.csv", labels_csv(best.best_partition));
            write_json(dir / "optimum.json", summary);
            out << fmt::format("optimal cost {:.17g}\n", best.best_cost);
        };
    });

    // bound-suite
    std::string bs_preset = "small-random";
    std::size_t bs_instances = 50;
    std::uint64_t bs_seed = 0;
    std::vector<std::string> bs_inputs;
    std::size_t bs_k = 2;
    auto* bound = app.add_subcommand("bound-suite", "Check E[cost] <= 8 (ln k + 2) * optimum on small instances");
    bound->add_option("--preset", bs_preset, "Instance family (small-random), ignored with --input")
        ->check(CLI::IsMember({"small-random"}))
        ->capture_default_str();
    bound->add_option("--instances", bs_instances, "Number of preset instances")->capture_default_str();
    bound->add_option("--seed", bs_seed, "RNG seed")->required();
    bound->add_option("--input", bs_inputs, "Dataset CSV files to check instead of the preset");
    bound->add_option("--k", bs_k, "Number of centers for --input datasets")->capture_default_str();
    add_out_option(bound, out_dir);
    bound->callback([&] {
        action = [&] {
            std::vector<BoundInstance> instances;
            if (bs_inputs.empty()) {
                instances = small_random_instances(bs_instances, bs_seed);
            } else {
                for (const auto& path : bs_inputs) {
                    instances.push_back({path, load_csv(path), bs_k});
                }
            }
            const auto checks = run_bound_suite(instances);
            std::size_t counts[4] = {0, 0, 0, 0};
            json rows = json::array();
            for (const auto& c : checks) {
                ++counts[static_cast<int>(c.status)];
                json row{{"instance", c.instance_id}, {"m", c.m},           {"k", c.k},
                         {"ratio", c.ratio},          {"bound", c.bound},   {"status", to_string(c.status)}};
                if (!c.message.empty()) {
                    row["message"] = c.message;
                }
                rows.push_back(row);
            }
            json summary;
            summary["preset"] = bs_inputs.empty() ? bs_preset : "files";
            summary["seed"] = bs_seed;
            summary["pass"] = counts[0];
            summary["fail"] = counts[1];
            summary["degenerate"] = counts[2];
            summary["error"] = counts[3];
            summary["bound_checks"] = rows;
            const fs::path dir = prepare_out_dir(out_dir);
            write_text_file(dir / "bounds.csv", bound_csv(checks));
            write_json(dir / "summary.json", summary);
            out << fmt::format("{} instances: {} pass, {} fail, {} degenerate, {} error\n", checks.size(), counts[0],
                               counts[1], counts[2], counts[3]);
        };
    });

    // converge
    GridOptions cv_grid;
    ConvergenceStudySpec cv_spec;
    std::vector<std::string> cv_strategies{"plusplus"};
    bool cv_no_svg = false;
    auto* converge = app.add_subcommand("converge", "Sample-size convergence study of the expected seeding cost");
    add_grid_options(converge, cv_grid);
    converge->add_option("--k", cv_spec.k, "Number of centers")->capture_default_str();
    converge->add_option("--sizes", cv_spec.sample_sizes, "Sample sizes, strictly increasing")
        ->delimiter(',')
        ->capture_default_str();
    converge->add_option("--reps", cv_spec.reps, "Repetitions per sample size")->capture_default_str();
    converge->add_option("--ref", cv_spec.ref_size, "Reference sample size")->capture_default_str();
    converge->add_option("--ref-reps", cv_spec.ref_reps, "Repetitions on the reference (0: same as --reps)")
        ->capture_default_str();
    converge->add_option("--seed", cv_spec.master_seed, "Master RNG seed")->required();
    converge->add_flag("--refine", cv_spec.refine, "Also record a Lloyd-refined track");
    converge->add_option("--strategy", cv_strategies, "Seeding strategies (plusplus, uniform_random)")
        ->delimiter(',')
        ->capture_default_str();
    converge->add_option("--max-iters", cv_spec.lloyd.max_iters, "Lloyd iteration cap")->capture_default_str();
    converge->add_option("--tol", cv_spec.lloyd.tol, "Lloyd displacement tolerance")->capture_default_str();
    converge->add_option("--threads", cv_spec.threads, "Worker threads; results do not depend on it")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    converge->add_flag("--no-svg", cv_no_svg, "Skip the per-size clustering figures");
    add_out_option(converge, out_dir);
    converge->callback([&] {
        action = [&] {
            cv_spec.mixture = resolve_mixture(cv_grid);
            cv_spec.strategies.clear();
            for (const auto& s : cv_strategies) {
                cv_spec.strategies.push_back(parse_strategy(s));
            }
            validate(cv_spec);
            const fs::path dir = prepare_out_dir(out_dir);
            const ExperimentResult result = run_convergence_study(cv_spec);
            write_study_csv(result, dir / "study.csv");

            json spec_echo;
            spec_echo["mixture"] = to_mixture_config(cv_spec.mixture);
            spec_echo["k"] = cv_spec.k;
            spec_echo["sample_sizes"] = cv_spec.sample_sizes;
            spec_echo["reps"] = cv_spec.reps;
            spec_echo["ref_size"] = cv_spec.ref_size;
            spec_echo["ref_reps"] = cv_spec.ref_reps == 0 ? cv_spec.reps : cv_spec.ref_reps;
            spec_echo["master_seed"] = cv_spec.master_seed;
            spec_echo["refine"] = cv_spec.refine;
            std::vector<std::string> names;
            for (auto s : cv_spec.strategies) {
                names.emplace_back(to_string(s));
            }
            spec_echo["strategies"] = names;

            json tracks = json::array();
            for (const auto& t : result.tracks) {
                const TrendVerdict v = assess_trend(result, t.strategy, t.refine);
                tracks.push_back({{"strategy", to_string(t.strategy)},
                                  {"refine", t.refine},
                                  {"ref_expectation", t.ref_expectation},
                                  {"ref_stderr", t.ref_stderr},
                                  {"first_gap", v.first_gap},
                                  {"last_gap", v.last_gap},
                                  {"gap_rank_correlation", v.rank_correlation},
                                  {"gap_halved", v.halved},
                                  {"trend_pass", v.pass()}});
            }
            json summary;
            summary["spec"] = spec_echo;
            summary["tracks"] = tracks;
            summary["trend_criterion"] =
                "trend only: last gap <= 0.5 * first gap and negative rank correlation between m and gap; "
                "no convergence rate is asserted";
            if (cv_spec.strategies.size() > 1) {
                json dominance = json::array();
                for (const auto& r : result.per_m) {
                    if (r.strategy != Strategy::uniform_random) {
                        continue;
                    }
                    for (const auto& p : result.per_m) {
                        if (p.strategy == Strategy::plusplus && p.m == r.m && p.refine == r.refine) {
                            const double se = std::sqrt(r.std_error * r.std_error + p.std_error * p.std_error);
                            const double z = se > 0.0 ? (r.mean - p.mean) / se : 0.0;
                            dominance.push_back({{"m", r.m},
                                                 {"refine", r.refine},
                                                 {"random_mean", r.mean},
                                                 {"plusplus_mean", p.mean},
                                                 {"separation_in_stderr", z},
                                                 {"random_worse_at_3_stderr", z >= 3.0}});
                        }
                    }
                }
                summary["random_vs_plusplus"] = dominance;
            }
            summary["bound_checks"] = json::array();
            write_json(dir / "summary.json", summary);

            if (!cv_no_svg && cv_spec.mixture.dim() == 2) {
                for (const auto& ex : result.exemplars) {
                    render_clustering_svg(PlotSpec{ex.sample, ex.centers, assign(ex.sample, ex.centers)},
                                          dir / fmt::format("clusters_m{}.svg", ex.m));
                }
            }
            for (const auto& row : result.per_m) {
                out << fmt::format("m={} {} refine={} mean={:.6g} stderr={:.3g} ref_cost={:.6g} gap={:.3g}\n", row.m,
                                   to_string(row.strategy), row.refine, row.mean, row.std_error, row.ref_cost,
                                   row.gap);
            }
        };
    });

    // render
    std::string rd_input;
    std::string rd_centers;
    std::string rd_name = "clustering.svg";
    int rd_width = 800;
    int rd_height = 800;
    auto* render = app.add_subcommand("render", "Draw a 2-D clustering with its Voronoi diagram as SVG");
    render->add_option("--input", rd_input, "Dataset CSV")->required();
    render->add_option("--centers", rd_centers, "Centers CSV")->required();
    render->add_option("--name", rd_name, "Output file name")->capture_default_str();
    render->add_option("--width", rd_width, "Canvas width in px")->capture_default_str();
    render->add_option("--height", rd_height, "Canvas height in px")->capture_default_str();
    add_out_option(render, out_dir);
    render->callback([&] {
        action = [&] {
            const Dataset data = load_csv(rd_input);
            const Dataset c = load_csv(rd_centers);
            const CenterSet centers(c.dim(), std::vector<double>(c.coords().begin(), c.coords().end()));
            const fs::path dir = prepare_out_dir(out_dir);
            render_clustering_svg(PlotSpec{data, centers, assign(data, centers), rd_width, rd_height}, dir / rd_name);
            out << fmt::format("wrote {}\n", (dir / rd_name).string());
        };
    });

    for (auto* sub : app.get_subcommands([](const CLI::App*) { return true; })) {
        sub->configurable();
    }

    std::vector<const char*> argv{"kmpp"};
    for (const auto& a : args) {
        argv.push_back(a.c_str());
    }
    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == static_cast<int>(CLI::ExitCodes::Success)) {
            out << app.help();
            return kExitOk;
        }
        err << "kmpp: " << e.what() << "\n";
        return kExitUsage;
    }

    try {
        action();
        const fs::path dir = prepare_out_dir(out_dir);
        const CLI::App* used = app.get_subcommands().front();
        std::string manifest = "# Re-run with: kmpp --config manifest.ini\n";
        manifest += "[" + used->get_name() + "]\n";
        manifest += used->config_to_str(true, false);
        write_text_file(dir / "manifest.ini", manifest);
    } catch (const SizeLimitError& e) {
        err << "kmpp: size limit: " << e.what() << "\n";
        return kExitSizeLimit;
    } catch (const IoError& e) {
        err << "kmpp: I/O error: " << e.what() << "\n";
        return kExitIo;
    } catch (const ParseError& e) {
        err << "kmpp: parse error: " << e.what() << "\n";
        return kExitValidation;
    } catch (const Error& e) {
        err << "kmpp: invalid input: " << e.what() << "\n";
        return kExitValidation;
    }
    return kExitOk;
}

}  // namespace kmpp
