#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <numeric>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "hgntr/clustering.hpp"
#include "hgntr/export.hpp"
#include "hgntr/metrics.hpp"
#include "hgntr/noise.hpp"
#include "hgntr/solver.hpp"
#include "hgntr/synth.hpp"
#include "hgntr/tensor_io.hpp"

namespace fs = std::filesystem;
using json = nlohmann::json;
using namespace hgntr;

namespace {

struct SolverFlags {
    Shape ranks;
    Shape tucker_ranks;
    double beta = 0.1;
    std::size_t k = 5;
    std::size_t inner_iters = 20;
    std::size_t sweeps = 100;
    double tol = 1e-6;
    double epsilon = 1e-12;
    std::string graph_mode = "hypergraph";
    std::uint64_t seed = 0;

    SolverConfig config() const
    {
        SolverConfig c;
        c.tr_ranks = ranks;
        if (!tucker_ranks.empty()) c.tucker_ranks = tucker_ranks;
        c.beta = beta;
        c.k_neighbors = k;
        c.inner_iters = inner_iters;
        c.outer_sweeps = sweeps;
        c.tol = tol;
        c.epsilon = epsilon;
        c.graph_mode = parse_graph_mode(graph_mode);
        c.seed = seed;
        return c;
    }
};

void add_solver_flags(CLI::App* app, SolverFlags& f)
{
    app->add_option("--ranks", f.ranks, "TR ranks, one per mode")->delimiter(',')->required();
    app->add_option("--tucker-ranks", f.tucker_ranks,
                    "Tucker ranks; selects the low-rank-approximation solver")
        ->delimiter(',');
    app->add_option("--beta", f.beta, "graph regularization weight")->capture_default_str();
    app->add_option("--k", f.k, "nearest neighbours per hyperedge")->capture_default_str();
    app->add_option("--inner-iters", f.inner_iters, "multiplicative steps per core")
        ->capture_default_str();
    app->add_option("--sweeps", f.sweeps, "maximum outer sweeps")->capture_default_str();
    app->add_option("--tol", f.tol, "relative objective change to stop at")->capture_default_str();
    app->add_option("--epsilon", f.epsilon, "denominator guard")->capture_default_str();
    app->add_option("--graph-mode", f.graph_mode, "hypergraph | pairwise-graph | none")
        ->capture_default_str();
    app->add_option("--seed", f.seed, "initialization seed")->capture_default_str();
}

json config_json(const SolverConfig& c)
{
    json j{{"tr_ranks", c.tr_ranks},
           {"beta", c.beta},
           {"k_neighbors", c.k_neighbors},
           {"inner_iters", c.inner_iters},
           {"outer_sweeps", c.outer_sweeps},
           {"tol", c.tol},
           {"epsilon", c.epsilon},
           {"graph_mode", to_string(c.graph_mode)},
           {"seed", c.seed},
           {"variant", c.tucker_ranks ? "lra" : "exact"}};
    if (c.tucker_ranks) j["tucker_ranks"] = *c.tucker_ranks;
    return j;
}

json times_json(const PhaseTimes& t)
{
    return {{"graph_build", t.graph_build},
            {"setup", t.setup},
            {"updates", t.updates},
            {"evaluation", t.evaluation}};
}

json result_json(const SolveResult& r)
{
    return {{"seed", r.seed},
            {"sweeps_run", r.sweeps_run},
            {"converged", r.converged},
            {"final_objective", r.objective_trace.back()},
            {"final_relative_fit", r.fit_trace.back()},
            {"objective_trace", r.objective_trace},
            {"fit_trace", r.fit_trace},
            {"update_seconds", r.update_seconds},
            {"wall_times", times_json(r.times)}};
}

void write_json(const fs::path& path, const json& j)
{
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
    out << j.dump(2) << '\n';
}

json metrics_json(const Metrics& m)
{
    return {{"acc", m.acc}, {"nmi", m.nmi}, {"pur", m.pur}};
}

json summarize(const std::vector<Metrics>& ms)
{
    json out;
    auto field = [&](const char* name, double Metrics::*member) {
        std::vector<double> v;
        for (const auto& m : ms) v.push_back(m.*member);
        const double mean = std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
        json s{{"mean", mean}};
        if (v.size() >= 2) {
            double ss = 0.0;
            for (double x : v) ss += (x - mean) * (x - mean);
            s["std"] = std::sqrt(ss / static_cast<double>(v.size() - 1));
        }
        out[name] = s;
    };
    field("acc", &Metrics::acc);
    field("nmi", &Metrics::nmi);
    field("pur", &Metrics::pur);
    return out;
}

DenseTensor load_input(const std::string& path, bool truncate)
{
    DenseTensor x = read_tensor_file(path);
    if (truncate) x = truncate_negatives(x);
    return x;
}

// --config FILE holds key=value lines; each becomes --key=value placed ahead
// of the real arguments so that command-line flags win.
std::vector<std::string> expand_config(int argc, char** argv)
{
    std::vector<std::string> args(argv + 1, argv + argc);
    std::string file;
    std::size_t at = args.size(), span = 0;
    for (std::size_t i = 0; i < args.size(); ++i) {
        if (args[i] == "--config" && i + 1 < args.size()) {
            file = args[i + 1];
            at = i;
            span = 2;
            break;
        }
        if (args[i].rfind("--config=", 0) == 0) {
            file = args[i].substr(9);
            at = i;
            span = 1;
            break;
        }
    }
    if (span == 0) return args;
    args.erase(args.begin() + static_cast<std::ptrdiff_t>(at),
               args.begin() + static_cast<std::ptrdiff_t>(at + span));

    std::ifstream in(file);
    if (!in) throw std::runtime_error("cannot open config file " + file);
    std::vector<std::string> injected;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const auto first = line.find_first_not_of(" \t\r");
        if (first == std::string::npos || line[first] == '#' || line[first] == ';') continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw std::runtime_error("config line " + std::to_string(line_no) + " lacks '='");
        auto trim = [](std::string s) {
            const auto b = s.find_first_not_of(" \t\r\"");
            const auto e = s.find_last_not_of(" \t\r\"");
            return b == std::string::npos ? std::string{} : s.substr(b, e - b + 1);
        };
        std::string key = trim(line.substr(0, eq));
        std::replace(key.begin(), key.end(), '_', '-');
        injected.push_back("--" + key + "=" + trim(line.substr(eq + 1)));
    }
    // Insert right after the subcommand name.
    const std::size_t sub = args.empty() ? 0 : 1;
    args.insert(args.begin() + static_cast<std::ptrdiff_t>(sub), injected.begin(), injected.end());
    return args;
}

int run_synth(const std::string& kind, const Shape& shape, const Shape& ranks,
              const Shape& sample_shape, std::size_t classes, std::size_t per_class, double eta,
              std::uint64_t seed, const std::string& out, const std::string& labels_out)
{
    json info{{"kind", kind}, {"seed", seed}, {"output", out}};
    if (kind == "tr-exact") {
        const auto s = synth_tr_exact(shape, ranks, seed);
        write_tensor_file(out, s.tensor);
        info["shape"] = s.tensor.shape();
    } else if (kind == "tucker-exact") {
        const auto s = synth_tucker_exact(shape, ranks, seed);
        write_tensor_file(out, s.tensor);
        info["shape"] = s.tensor.shape();
    } else if (kind == "clusters") {
        if (labels_out.empty()) throw std::invalid_argument("clusters synth needs --labels-out");
        const auto s = synth_clusters(sample_shape, classes, per_class, eta, seed);
        write_tensor_file(out, s.tensor);
        write_labels(labels_out, s.labels);
        info["shape"] = s.tensor.shape();
        info["labels"] = labels_out;
        info["within_between_ratio"] =
            within_between_ratio(unfold_tr(s.tensor, s.tensor.order() - 1), s.labels);
    } else {
        throw std::invalid_argument("unknown synth kind '" + kind + "'");
    }
    std::cout << info.dump() << '\n';
    return 0;
}

int run_decompose(const std::string& input, const SolverFlags& flags, bool truncate,
                  const std::string& out_dir, bool svg)
{
    const DenseTensor x = load_input(input, truncate);
    const SolverConfig config = flags.config();
    const SolveResult result = solve(x, config);

    fs::create_directories(out_dir);
    for (std::size_t n = 0; n < result.cores.order(); ++n)
        write_tensor_file(fs::path(out_dir) / ("core_" + std::to_string(n) + ".ntf"),
                          result.cores.core(n));
    write_trace_csv(fs::path(out_dir) / "trace.csv", result);
    json record{{"input", input},
                {"truncate_negatives", truncate},
                {"config", config_json(config)},
                {"result", result_json(result)}};
    write_json(fs::path(out_dir) / "record.json", record);
    if (svg) {
        std::ofstream(fs::path(out_dir) / "convergence.svg")
            << render_svg_line_chart(result.objective_trace, "objective per sweep", "objective");
    }
    std::cout << json{{"sweeps_run", result.sweeps_run},
                      {"final_relative_fit", result.fit_trace.back()},
                      {"out_dir", out_dir}}
                     .dump()
              << '\n';
    return 0;
}

int run_cluster(const std::string& input, const std::string& labels_path, const SolverFlags& flags,
                bool truncate, std::size_t repetitions, std::size_t restarts,
                const std::string& out)
{
    const DenseTensor x = load_input(input, truncate);
    const auto truth = Labeling::from_raw(read_labels(labels_path));
    if (truth.size() != x.extent(x.order() - 1))
        throw std::invalid_argument("labels file has " + std::to_string(truth.size())
                                    + " entries, last mode has " + std::to_string(x.extent(x.order() - 1)));
    if (repetitions < 1) throw std::invalid_argument("repetitions must be >= 1");

    json reps = json::array();
    std::vector<Metrics> best_metrics, mean_metrics;
    for (std::size_t r = 0; r < repetitions; ++r) {
        SolverConfig config = flags.config();
        config.seed = flags.seed + r;
        const SolveResult result = solve(x, config);
        const auto km = kmeans(feature_matrix(result),
                               KMeansOptions{static_cast<std::size_t>(truth.n_clusters), config.seed,
                                             restarts, 300});
        const Metrics best = evaluate(truth, km.best.labeling);
        Metrics mean;
        for (const auto& run : km.runs) {
            const Metrics m = evaluate(truth, run.labeling);
            mean.acc += m.acc;
            mean.nmi += m.nmi;
            mean.pur += m.pur;
        }
        const double nr = static_cast<double>(km.runs.size());
        mean.acc /= nr;
        mean.nmi /= nr;
        mean.pur /= nr;
        best_metrics.push_back(best);
        mean_metrics.push_back(mean);
        reps.push_back({{"seed", config.seed},
                        {"best_of_restarts", metrics_json(best)},
                        {"mean_of_restarts", metrics_json(mean)},
                        {"sweeps_run", result.sweeps_run},
                        {"final_relative_fit", result.fit_trace.back()},
                        {"wall_times", times_json(result.times)},
                        {"objective_trace", result.objective_trace},
                        {"fit_trace", result.fit_trace}});
    }
    json record{{"input", input},
                {"labels", labels_path},
                {"config", config_json(flags.config())},
                {"repetitions", repetitions},
                {"kmeans_restarts", restarts},
                {"per_repetition", reps},
                {"best_of_restarts", summarize(best_metrics)},
                {"mean_of_restarts", summarize(mean_metrics)}};
    if (!out.empty()) write_json(out, record);
    std::cout << json{{"best_of_restarts", record["best_of_restarts"]}}.dump() << '\n';
    return 0;
}

int run_noise(const std::string& input, double snr_db, std::uint64_t seed, bool truncate,
              const std::string& out)
{
    const DenseTensor x = read_tensor_file(input);
    write_tensor_file(out, add_gaussian_noise(x, snr_db, seed, truncate));
    return 0;
}

int run_bench(Shape sizes, std::size_t order, std::size_t tr_rank, std::size_t tucker_rank,
              std::size_t sweeps, std::uint64_t seed, const std::string& out)
{
    std::sort(sizes.begin(), sizes.end());
    sizes.erase(std::unique(sizes.begin(), sizes.end()), sizes.end());
    if (sizes.empty()) throw std::invalid_argument("bench needs at least one size");
    if (order < 2) throw std::invalid_argument("bench order must be >= 2");

    std::ofstream csv;
    std::ostream* os = &std::cout;
    if (!out.empty()) {
        csv.open(out);
        if (!csv) throw std::runtime_error("cannot open " + out + " for writing");
        os = &csv;
    }
    *os << "size,elements,exact_seconds_per_sweep,lra_seconds_per_sweep,ratio\n";
    for (std::size_t size : sizes) {
        const Shape shape(order, size);
        const auto data = synth_tr_exact(shape, Shape(order, tr_rank), seed);
        SolverConfig config;
        config.tr_ranks = Shape(order, tr_rank);
        config.beta = 0.0;
        config.graph_mode = GraphMode::none;
        config.outer_sweeps = sweeps;
        config.tol = 0.0;
        config.seed = seed;
        const auto exact = solve_hgntr(data.tensor, config);
        config.tucker_ranks = Shape(order, std::min(tucker_rank, size));
        const auto lra = solve_lra_hgntr(data.tensor, config);
        const double te = exact.times.updates / static_cast<double>(exact.sweeps_run);
        const double tl = lra.times.updates / static_cast<double>(lra.sweeps_run);
        char buf[200];
        std::snprintf(buf, sizeof buf, "%zu,%zu,%.6f,%.6f,%.4f\n", size, data.tensor.size(), te, tl,
                      tl / te);
        *os << buf << std::flush;
    }
    return 0;
}

int run_export_basis(const std::string& cores_dir, std::size_t width, std::size_t height,
                     const std::string& out_dir)
{
    std::vector<DenseTensor> cores;
    for (std::size_t n = 0;; ++n) {
        const fs::path p = fs::path(cores_dir) / ("core_" + std::to_string(n) + ".ntf");
        if (!fs::exists(p)) break;
        cores.push_back(read_tensor_file(p));
    }
    if (cores.empty()) throw std::runtime_error("no core_N.ntf files in " + cores_dir);
    const auto images = basis_images(TRCores(std::move(cores)), height, width);
    fs::create_directories(out_dir);
    for (std::size_t i = 0; i < images.size(); ++i) {
        char name[32];
        std::snprintf(name, sizeof name, "basis_%03zu.pgm", i);
        write_pgm(fs::path(out_dir) / name, images[i]);
    }
    std::cout << json{{"images", images.size()}, {"out_dir", out_dir}}.dump() << '\n';
    return 0;
}

void print_error(const std::string& kind, const std::string& message)
{
    std::cerr << json{{"error", message}, {"kind", kind}}.dump() << std::endl;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Nonnegative tensor-ring factorization with hypergraph regularization"};
    app.require_subcommand(1);
    app.option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);

    std::string kind = "tr-exact", out, labels_out;
    Shape shape, ranks, sample_shape;
    std::size_t classes = 5, per_class = 20;
    double eta = 0.1;
    std::uint64_t seed = 0;
    auto* synth = app.add_subcommand("synth", "generate a synthetic tensor");
    synth->add_option("--kind", kind, "tr-exact | tucker-exact | clusters")->capture_default_str();
    synth->add_option("--shape", shape, "tensor shape (tr-exact, tucker-exact)")->delimiter(',');
    synth->add_option("--ranks", ranks, "TR or Tucker ranks")->delimiter(',');
    synth->add_option("--sample-shape", sample_shape, "per-sample shape (clusters)")->delimiter(',');
    synth->add_option("--classes", classes)->capture_default_str();
    synth->add_option("--per-class", per_class)->capture_default_str();
    synth->add_option("--eta", eta, "perturbation amplitude")->capture_default_str();
    synth->add_option("--seed", seed)->capture_default_str();
    synth->add_option("--out", out, "output tensor file")->required();
    synth->add_option("--labels-out", labels_out, "labels file (clusters)");

    SolverFlags solver_flags;
    std::string input, out_dir = "out";
    bool truncate = false, svg = false;
    auto* decompose = app.add_subcommand("decompose", "factorize a tensor file");
    decompose->add_option("--input", input)->required();
    add_solver_flags(decompose, solver_flags);
    decompose->add_flag("--truncate-negatives", truncate, "clamp negative input entries to zero");
    decompose->add_option("--out-dir", out_dir)->capture_default_str();
    decompose->add_flag("--svg", svg, "also write convergence.svg");

    std::string labels;
    std::size_t repetitions = 10, restarts = 10;
    auto* cluster = app.add_subcommand("cluster", "factorize, k-means on features, score");
    cluster->add_option("--input", input)->required();
    cluster->add_option("--labels", labels)->required();
    add_solver_flags(cluster, solver_flags);
    cluster->add_flag("--truncate-negatives", truncate);
    cluster->add_option("--repetitions", repetitions)->capture_default_str();
    cluster->add_option("--restarts", restarts, "k-means restarts")->capture_default_str();
    cluster->add_option("--out", out, "experiment record (JSON)");

    double snr_db = 10.0;
    auto* noise = app.add_subcommand("noise", "add Gaussian noise at a given SNR");
    noise->add_option("--input", input)->required();
    noise->add_option("--snr-db", snr_db)->capture_default_str();
    noise->add_option("--seed", seed)->capture_default_str();
    noise->add_flag("--truncate", truncate, "clamp negatives to zero");
    noise->add_option("--out", out)->required();

    Shape sizes{16, 24, 32};
    std::size_t order = 3, tr_rank = 4, tucker_rank = 8, sweeps = 5;
    auto* bench = app.add_subcommand("bench", "per-sweep update time, exact vs low-rank");
    bench->add_option("--sizes", sizes, "cubic extents to sweep")->delimiter(',')->capture_default_str();
    bench->add_option("--order", order)->capture_default_str();
    bench->add_option("--tr-rank", tr_rank)->capture_default_str();
    bench->add_option("--tucker-rank", tucker_rank)->capture_default_str();
    bench->add_option("--sweeps", sweeps)->capture_default_str();
    bench->add_option("--seed", seed)->capture_default_str();
    bench->add_option("--out", out, "CSV path (stdout when omitted)");

    std::string cores_dir;
    std::size_t width = 0, height = 0;
    auto* basis = app.add_subcommand("export-basis", "write basis images as PGM");
    basis->add_option("--cores-dir", cores_dir)->required();
    basis->add_option("--width", width)->required();
    basis->add_option("--height", height)->required();
    basis->add_option("--out-dir", out_dir)->capture_default_str();

    for (auto* sub : app.get_subcommands({}))
        sub->add_option("--config", "key=value file; command-line flags take precedence");

    try {
        auto args = expand_config(argc, argv);
        std::reverse(args.begin(), args.end());
        app.parse(args);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        print_error("usage", e.what());
        return 2;
    } catch (const std::exception& e) {
        print_error("config", e.what());
        return 2;
    }

    try {
        if (*synth)
            return run_synth(kind, shape, ranks, sample_shape, classes, per_class, eta, seed, out,
                             labels_out);
        if (*decompose) return run_decompose(input, solver_flags, truncate, out_dir, svg);
        if (*cluster)
            return run_cluster(input, labels, solver_flags, truncate, repetitions, restarts, out);
        if (*noise) return run_noise(input, snr_db, seed, truncate, out);
        if (*bench) return run_bench(sizes, order, tr_rank, tucker_rank, sweeps, seed, out);
        if (*basis) return run_export_basis(cores_dir, width, height, out_dir);
    } catch (const FormatError& e) {
        print_error("format", e.what());
        return 3;
    } catch (const NumericalError& e) {
        print_error("numerical", e.what());
        return 4;
    } catch (const std::invalid_argument& e) {
        print_error("invalid_argument", e.what());
        return 2;
    } catch (const std::exception& e) {
        print_error("runtime", e.what());
        return 1;
    }
    return 0;
}
