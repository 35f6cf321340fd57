#include <bit>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "rwt/baselines.hpp"
#include "rwt/errors.hpp"
#include "rwt/estimator.hpp"
#include "rwt/io.hpp"
#include "rwt/risk.hpp"

namespace {

constexpr int kExitUsage = 1;
constexpr int kExitData = 2;
constexpr int kExitCapacity = 3;

struct ScheduleFlags {
    std::string name = "constant";
    std::vector<double> alphas;
    double scale = 1.0;
    int adaptive_q = 16;
};

rwt::ThresholdSchedule make_schedule(const ScheduleFlags& f, int dim) {
    rwt::ThresholdSchedule s = [&] {
        if (f.name == "custom") {
            if (f.alphas.empty())
                throw std::invalid_argument("--schedule custom requires --alphas");
            return rwt::ThresholdSchedule::custom(dim, f.alphas);
        }
        if (f.name == "adaptive") return rwt::ThresholdSchedule::adaptive_top_q(dim, f.adaptive_q);
        return rwt::ThresholdSchedule::from_name(f.name, dim);
    }();
    if (f.scale != 1.0) s.scale(f.scale);
    return s;
}

struct TraversalFlags {
    int branching = 2;
    std::optional<int> max_order;
    std::optional<int> top_q;
    std::string queue = "weight";
    std::optional<double> leaf_threshold;
    bool no_direct = false;
};

rwt::TraversalConfig make_config(const TraversalFlags& f, int dim) {
    rwt::TraversalConfig cfg;
    if (f.branching < 2 || (f.branching & (f.branching - 1)) != 0)
        throw std::invalid_argument("--branching must be a power of two >= 2");
    cfg.branching_bits = std::countr_zero(static_cast<unsigned>(f.branching));
    if (f.max_order) {
        if (*f.max_order > dim)
            throw std::invalid_argument("--max-order cannot exceed the dimension");
        cfg.max_order = f.max_order;
    }
    cfg.top_q = f.top_q;
    if (f.queue == "depth")
        cfg.queue_policy = rwt::QueuePolicy::DepthFirst;
    else if (f.queue == "breadth")
        cfg.queue_policy = rwt::QueuePolicy::BreadthFirst;
    else if (f.queue == "weight")
        cfg.queue_policy = rwt::QueuePolicy::MaxWeight;
    else
        throw std::invalid_argument("--queue must be depth|breadth|weight");
    cfg.leaf_threshold_override = f.leaf_threshold;
    if (f.no_direct) cfg.direct_switch = rwt::TraversalConfig::Switch::Never;
    cfg.validate(dim);
    return cfg;
}

std::uint64_t dataset_seed(std::uint64_t master, std::uint64_t run, std::size_t n) {
    return rwt::substream_seed(master ^ (0x9e3779b97f4a7c15ULL * run), "dataset", n);
}

int cmd_synth(int dim, int components, int biased, double bias, std::uint64_t seed,
              const std::vector<std::size_t>& sizes, const std::vector<std::uint64_t>& runs,
              const std::string& outdir) {
    namespace fs = std::filesystem;
    fs::create_directories(outdir);
    const auto mix = rwt::make_benchmark_mixture(dim, components, biased, bias,
                                                 rwt::substream_seed(seed, "mixture"));
    rwt::write_mixture_file((fs::path(outdir) / "mixture.txt").string(), mix);
    for (std::size_t n : sizes) {
        for (std::uint64_t run : runs) {
            const auto data = rwt::sample(mix, n, dataset_seed(seed, run, n));
            const auto name = "data_n" + std::to_string(n) + "_seed" + std::to_string(run) + ".txt";
            rwt::write_dataset_file((fs::path(outdir) / name).string(), data);
        }
    }
    return 0;
}

int cmd_estimate(const std::string& input, const std::string& output, const ScheduleFlags& sf,
                 const TraversalFlags& tf) {
    const auto data = rwt::read_dataset_file(input);
    const auto schedule = make_schedule(sf, data.dim());
    const auto config = make_config(tf, data.dim());
    const auto result = rwt::rwt_estimate(data, schedule, config);
    rwt::write_coefficients_file(output, result.density);
    std::ofstream stats(output + ".stats.json");
    if (!stats) throw std::runtime_error("cannot open for writing: " + output + ".stats.json");
    stats << rwt::stats_to_json(result.stats);
    std::cout << "retained " << result.stats.retained_coefficients << " coefficients, "
              << result.stats.recursive_calls << " recursive calls\n";
    return 0;
}

int cmd_oracle(const std::string& input, const std::string& output) {
    const auto data = rwt::read_dataset_file(input);
    const auto full = rwt::unthresholded_estimator(data);
    rwt::write_coefficients_file(output, full);
    return 0;
}

struct BenchFlags {
    int dim = 15;
    int components = 10;
    int biased = 3;
    double bias = 0.9;
    std::uint64_t seed = 1;
    std::vector<std::size_t> sizes{1000, 2500, 5000, 7500, 10000};
    std::size_t num_seeds = 5;
    std::vector<std::string> schedules{"constant", "log", "linear"};
    std::size_t probes = 100000;
    std::string mixture_file;
    std::string output = "bench.csv";
    TraversalFlags traversal;
    double threshold_scale = 1.0;
    bool with_baselines = true;
};

int cmd_bench(const BenchFlags& bf) {
    const auto mix = bf.mixture_file.empty()
                         ? rwt::make_benchmark_mixture(bf.dim, bf.components, bf.biased, bf.bias,
                                                       rwt::substream_seed(bf.seed, "mixture"))
                         : rwt::read_mixture_file(bf.mixture_file);
    const int dim = mix.dim;
    const bool exact = dim <= rwt::kOracleCapDim;
    const auto truth = rwt::truth_from_mixture(mix);
    std::ofstream os(bf.output);
    if (!os) throw std::runtime_error("cannot open for writing: " + bf.output);
    os << rwt::RiskReport::csv_header() << '\n';

    auto report = [&](rwt::RiskReport r, const std::string& estimator, std::size_t n,
                      std::uint64_t run, const std::string& schedule) {
        r.estimator = estimator;
        r.dim = dim;
        r.n = n;
        r.seed = run;
        r.schedule = schedule;
        os << r.csv_row() << '\n';
    };
    auto sampled_report = [&](const rwt::SparseDensity& est, std::size_t n, std::uint64_t run) {
        rwt::RiskReport r;
        r.truth_source = "sample_based";
        r.retained = est.size();
        r.mse = rwt::mse_sampled(
            est, [&](const rwt::BitVector& x) { return rwt::mixture_density(mix, x); }, bf.probes,
            rwt::substream_seed(bf.seed ^ run, "bench-probes", n));
        r.variance_term = std::nan("");
        r.bias_term = std::nan("");
        return r;
    };

    for (std::size_t n : bf.sizes) {
        for (std::uint64_t run = 1; run <= bf.num_seeds; ++run) {
            const auto data = rwt::sample(mix, n, dataset_seed(bf.seed, run, n));
            for (const std::string& sched_name : bf.schedules) {
                ScheduleFlags sf;
                sf.name = sched_name;
                sf.scale = bf.threshold_scale;
                sf.adaptive_q = bf.traversal.top_q.value_or(16);
                const auto schedule = make_schedule(sf, dim);
                const auto config = make_config(bf.traversal, dim);
                const auto result = rwt::rwt_estimate(data, schedule, config);
                rwt::RiskReport r = exact ? rwt::mse_exact(result.density, truth)
                                          : sampled_report(result.density, n, run);
                r.calls = result.stats.recursive_calls;
                r.time_ms = result.stats.wall_time_seconds * 1e3;
                r.retained = result.stats.retained_coefficients;
                report(r, "rwt", n, run, sched_name);
            }
            if (bf.with_baselines) {
                if (!exact) {
                    report(rwt::RiskReport{}, "skipped:ott_kronmal", n, run, "");
                    report(rwt::RiskReport{}, "skipped:exhaustive_search", n, run, "");
                    report(rwt::RiskReport{}, "skipped:ideal", n, run, "");
                    continue;
                }
                {
                    const auto t0 = std::chrono::steady_clock::now();
                    const auto ok = rwt::ott_kronmal(data);
                    rwt::RiskReport r = rwt::mse_exact(ok, truth);
                    r.time_ms =
                        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
                            .count() *
                        1e3;
                    report(r, "ott_kronmal", n, run, "");
                }
                {
                    const auto t0 = std::chrono::steady_clock::now();
                    const auto best = rwt::exhaustive_threshold_search(data, truth);
                    rwt::RiskReport r = rwt::mse_exact(best.estimate, truth);
                    r.time_ms =
                        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
                            .count() *
                        1e3;
                    report(r, "exhaustive_search", n, run, "");
                }
                {
                    const auto ideal = rwt::ideal_estimator(data, truth);
                    report(rwt::mse_exact(ideal, truth), "ideal", n, run, "");
                }
            }
        }
    }
    std::cout << "wrote " << bf.output << '\n';
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Sparse Walsh density estimation on the binary hypercube"};
    app.require_subcommand(1);

    // synth
    auto* synth = app.add_subcommand("synth", "generate a mixture and datasets");
    int dim = 15, components = 10, biased = 3;
    double bias = 0.9;
    std::uint64_t seed = 1;
    std::vector<std::size_t> sizes{5000};
    std::vector<std::uint64_t> runs{1};
    std::string outdir = ".";
    synth->add_option("--dim", dim, "hypercube dimension")->required();
    synth->add_option("--components", components, "mixture components");
    synth->add_option("--biased", biased, "biased covariates per component");
    synth->add_option("--bias", bias, "success probability of biased covariates");
    synth->add_option("--seed", seed, "master seed");
    synth->add_option("--n", sizes, "sample sizes")->delimiter(',');
    synth->add_option("--runs", runs, "run seeds")->delimiter(',');
    synth->add_option("--output", outdir, "output directory");

    // estimate
    auto* est = app.add_subcommand("estimate", "run the recursive estimator on a dataset");
    std::string input, output = "coefficients.csv";
    ScheduleFlags sf;
    TraversalFlags tf;
    est->add_option("--input", input, "dataset file")->required();
    est->add_option("--output", output, "coefficient CSV (stats land in <output>.stats.json)");
    est->add_option("--schedule", sf.name, "constant|log|linear|custom|adaptive");
    est->add_option("--alphas", sf.alphas, "custom alpha_1..alpha_d")->delimiter(',');
    est->add_option("--threshold-scale", sf.scale, "multiplier on every alpha_k");
    est->add_option("--adaptive-q", sf.adaptive_q, "q for the adaptive schedule");
    est->add_option("--branching", tf.branching, "children per expansion (power of two)");
    auto* mo = est->add_option("--max-order", "cap on index Hamming weight");
    auto* tq = est->add_option("--top-q", "expand only the q best branches per level");
    est->add_option("--queue", tf.queue, "depth|breadth|weight");
    auto* lt = est->add_option("--leaf-threshold", "override lambda at the leaf level");
    est->add_flag("--no-direct-switch", tf.no_direct, "never switch to direct leaf computation");

    // oracle
    auto* orc = app.add_subcommand("oracle", "all empirical coefficients via the fast transform");
    std::string orc_in, orc_out = "oracle.csv";
    orc->add_option("--input", orc_in, "dataset file")->required();
    orc->add_option("--output", orc_out, "coefficient CSV");

    // bench
    auto* bench = app.add_subcommand("bench", "benchmark sweep to a long-format CSV");
    BenchFlags bf;
    bench->add_option("--dim", bf.dim, "hypercube dimension");
    bench->add_option("--components", bf.components, "mixture components");
    bench->add_option("--biased", bf.biased, "biased covariates per component");
    bench->add_option("--bias", bf.bias, "bias level");
    bench->add_option("--seed", bf.seed, "master seed");
    bench->add_option("--n-list", bf.sizes, "sample sizes")->delimiter(',');
    bench->add_option("--num-seeds", bf.num_seeds, "independent runs per cell");
    bench->add_option("--schedules", bf.schedules, "schedules to sweep")->delimiter(',');
    bench->add_option("--probes", bf.probes, "probe count for sampled MSE");
    bench->add_option("--mixture", bf.mixture_file, "mixture file (skip synthesis)");
    bench->add_option("--output", bf.output, "output CSV");
    bench->add_option("--branching", bf.traversal.branching, "children per expansion");
    auto* bmo = bench->add_option("--max-order", "cap on index Hamming weight");
    auto* btq = bench->add_option("--top-q", "expand only the q best branches per level");
    bench->add_option("--queue", bf.traversal.queue, "depth|breadth|weight");
    bench->add_option("--threshold-scale", bf.threshold_scale, "multiplier on every alpha_k");
    bench->add_flag("--no-direct-switch", bf.traversal.no_direct,
                    "never switch to direct leaf computation");
    bench->add_flag("!--no-baselines", bf.with_baselines, "skip baseline estimators");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_name() == "CallForHelp" || e.get_name() == "CallForAllHelp")
            return app.exit(e);
        std::cerr << e.what() << '\n';
        return kExitUsage;
    }

    try {
        if (mo->count()) tf.max_order = mo->as<int>();
        if (tq->count()) tf.top_q = tq->as<int>();
        if (lt->count()) tf.leaf_threshold = lt->as<double>();
        if (bmo->count()) bf.traversal.max_order = bmo->as<int>();
        if (btq->count()) bf.traversal.top_q = btq->as<int>();
        if (synth->parsed()) return cmd_synth(dim, components, biased, bias, seed, sizes, runs, outdir);
        if (est->parsed()) return cmd_estimate(input, output, sf, tf);
        if (orc->parsed()) return cmd_oracle(orc_in, orc_out);
        if (bench->parsed()) return cmd_bench(bf);
    } catch (const rwt::capacity_error& e) {
        std::cerr << "capacity error: " << e.what() << '\n';
        return kExitCapacity;
    } catch (const rwt::parse_error& e) {
        std::cerr << "data error: " << e.what() << '\n';
        return kExitData;
    } catch (const std::invalid_argument& e) {
        std::cerr << "usage error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitData;
    }
    return kExitUsage;
}
