#include "nng_tools/cli.hpp"

#include "nng/config.hpp"
#include "nng/graph.hpp"
#include "nng/io.hpp"
#include "nng/oracle.hpp"
#include "nng/pipeline.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <ostream>

#include <CLI11.hpp>
#include <fmt/core.h>
#include <json.hpp>

namespace nng::cli {

namespace {

/// Verification failed: the graph is well formed but wrong.
struct VerifyFailure : std::runtime_error
{
    using std::runtime_error::runtime_error;
};

/// Flags shared by build, verify and bench; each maps onto a config key.
struct SettingFlags
{
    std::string config;
    std::map<std::string, std::string> values;
    std::map<std::string, CLI::Option*> options;

    void attach(CLI::App& app, bool with_config = true)
    {
        if (with_config) app.add_option("--config", config, "key = value run configuration file");
        add(app, "--dataset", "dataset", "path (.fvecs .bvecs .ivecs .csv .txt) or synthetic:<kind>,n=..,dim=..");
        add(app, "--metric", "metric", "euclidean, cosine, hamming or edit");
        add(app, "--epsilon", "epsilon", "neighbor radius");
        add(app, "--algorithm", "algorithm", "systolic-ring, landmark-coll or landmark-ring");
        add(app, "--ranks", "ranks", "number of simulated ranks");
        add(app, "--cells", "cells", "landmark cells (default 8 per rank)");
        add(app, "--leaf-size", "leaf_size", "cover tree leaf size");
        add(app, "--seed", "seed", "center sampling seed");
        add(app, "--centers", "centers", "random or greedy");
    }

    void add(CLI::App& app, const std::string& flag, const std::string& key, const std::string& help)
    {
        options[key] = app.add_option(flag, values[key], help);
    }

    Config resolve() const
    {
        Config cfg = config.empty() ? Config{} : Config::load(config);
        for (const auto& [key, opt] : options)
            if (opt->count() > 0)
            {
                auto items = split_list(key, values.at(key));
                if (items.empty()) throw InvalidInput(fmt::format("empty value for {}", opt->get_name()));
                cfg.set(key, std::move(items));
            }
        return cfg;
    }
};

Real parse_real(std::string_view key, const std::string& text)
{
    double v;
    auto [end, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
    if (ec != std::errc() || end != text.data() + text.size() || !std::isfinite(v))
        throw InvalidInput(fmt::format("{}: '{}' is not a number", key, text));
    return v;
}

std::int64_t parse_int(std::string_view key, const std::string& text)
{
    std::int64_t v;
    auto [end, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
    if (ec != std::errc() || end != text.data() + text.size())
        throw InvalidInput(fmt::format("{}: '{}' is not an integer", key, text));
    return v;
}

std::string require(const Config& cfg, std::string_view key)
{
    auto v = cfg.single(key);
    if (!v) throw InvalidInput(fmt::format("missing required setting '{}'", key));
    return *v;
}

std::vector<std::string> values_or(const Config& cfg, std::string_view key, std::string fallback)
{
    const auto* v = cfg.find(key);
    return v ? *v : std::vector<std::string>{std::move(fallback)};
}

/// One fully specified run.
struct RunSpec
{
    std::string dataset;
    MetricKind metric = MetricKind::euclidean;
    BuildOptions options;
};

RunSpec make_spec(const std::string& dataset, const std::string& metric, const std::string& epsilon,
                  const std::string& algorithm, const std::string& ranks, const std::string& cells,
                  const std::string& leaf_size, const std::string& seed, const std::string& centers)
{
    RunSpec spec;
    spec.dataset = dataset;
    spec.metric = parse_metric(metric);
    spec.options.epsilon = parse_real("epsilon", epsilon);
    if (spec.options.epsilon < 0) throw InvalidInput("epsilon must be nonnegative");
    spec.options.algorithm = parse_algorithm(algorithm);

    auto r = parse_int("ranks", ranks);
    if (r < 1 || r > 4096) throw InvalidInput(fmt::format("ranks must be in [1, 4096], got {}", r));
    spec.options.ranks = static_cast<int>(r);

    spec.options.cells = parse_int("cells", cells);
    if (spec.options.cells < 0) throw InvalidInput("cells must be nonnegative");
    spec.options.leaf_size = parse_int("leaf_size", leaf_size);
    if (spec.options.leaf_size < 1) throw InvalidInput("leaf size must be at least 1");
    auto s = parse_int("seed", seed);
    if (s < 0) throw InvalidInput("seed must be nonnegative");
    spec.options.seed = static_cast<std::uint64_t>(s);
    spec.options.centers = parse_center_strategy(centers);
    return spec;
}

RunSpec single_spec(const Config& cfg)
{
    return make_spec(require(cfg, "dataset"), require(cfg, "metric"), require(cfg, "epsilon"),
                     cfg.single("algorithm").value_or("systolic-ring"), cfg.single("ranks").value_or("1"),
                     cfg.single("cells").value_or("0"), cfg.single("leaf_size").value_or("10"),
                     cfg.single("seed").value_or("0"), cfg.single("centers").value_or("random"));
}

PointSet load_points(const std::string& dataset, const Metric& metric)
{
    PointSet pts = load_dataset(dataset, metric.kind()).points;
    if (pts.empty()) throw InvalidInput(fmt::format("dataset '{}' has no points", dataset));
    metric.require_compatible(pts);
    return pts;
}

std::ofstream open_out(const std::string& path)
{
    std::ofstream os(path, std::ios::binary);
    if (!os) throw ParseError(fmt::format("cannot write '{}'", path), 0);
    return os;
}

std::string stats_line(const BuildResult& r)
{
    GraphStats s = stats(r.graph);
    return fmt::format("n={} edges={} avg_degree={} distance_evals={} comm_rounds={} wall_seconds={:.3f}",
                       r.graph.num_vertices(), s.edges, format_real(s.avg_degree), r.report.distance_evals,
                       r.report.comm_rounds, r.report.wall_seconds);
}

int cmd_build(const SettingFlags& flags, const std::string& out_path, const std::string& trace_path,
              std::ostream& out, std::ostream& err)
{
    Config cfg = flags.resolve();
    RunSpec spec = single_spec(cfg);
    std::string out_file = out_path.empty() ? cfg.single("out").value_or("") : out_path;
    std::string trace_file = trace_path.empty() ? cfg.single("trace").value_or("") : trace_path;
    spec.options.trace = !trace_file.empty();

    if (spec.metric == MetricKind::cosine)
        err << "warning: cosine distance violates the triangle inequality; tree pruning may miss edges\n";

    Metric metric(spec.metric);
    PointSet pts = load_points(spec.dataset, metric);
    BuildResult result = build_graph(pts, metric, spec.options);

    if (out_file.empty())
    {
        write_edge_list(out, result.graph, spec.metric);
        return exit_ok;
    }

    {
        auto os = open_out(out_file);
        write_edge_list(os, result.graph, spec.metric);
    }
    {
        auto os = open_out(out_file + ".report.json");
        write_report(os, result, spec.options, spec.metric);
    }
    if (!trace_file.empty())
    {
        auto os = open_out(trace_file);
        write_trace(os, result.trace);
    }
    out << stats_line(result) << '\n';
    return exit_ok;
}

int cmd_verify(const SettingFlags& flags, const std::string& graph_path, std::ostream& out)
{
    Config cfg = flags.resolve();
    std::string dataset = require(cfg, "dataset");
    Real epsilon = parse_real("epsilon", require(cfg, "epsilon"));
    MetricKind kind = parse_metric(require(cfg, "metric"));

    std::ifstream in(graph_path);
    if (!in) throw ParseError(fmt::format("cannot open graph '{}'", graph_path), 0);
    EdgeListFile file = read_edge_list(in);

    if (file.metric != kind)
        throw VerifyFailure(fmt::format("graph metric is {}, expected {}", to_string(file.metric), to_string(kind)));
    if (file.graph.epsilon() != epsilon)
        throw VerifyFailure(fmt::format("graph epsilon is {}, expected {}", format_real(file.graph.epsilon()), format_real(epsilon)));

    Metric metric(kind);
    PointSet pts = load_points(dataset, metric);
    NeighborGraph expected = oracle::brute_graph(pts, metric, epsilon);

    auto cmp = equals_canonical(file.graph, expected);
    if (!cmp) throw VerifyFailure(fmt::format("graph differs from brute force: {}", cmp.divergence));

    out << fmt::format("PASS n={} edges={}\n", expected.num_vertices(), expected.num_edges());
    return exit_ok;
}

struct BenchRow
{
    RunSpec spec;
    std::string metric_name;
    Index n = 0;
    GraphStats stats;
    RunReport report;
};

const std::vector<std::string>& bench_phases()
{
    static const std::vector<std::string> phases = {"partition", "tree", "query", "ghost"};
    return phases;
}

/// Slowest rank's compute and communication time in a phase.
std::pair<double, double> phase_times(const RunReport& r, std::string_view name)
{
    const PhaseRecord* p = r.find_phase(name);
    if (!p) return {0, 0};
    double compute = 0, comm = 0;
    for (int j = 0; j < r.ranks; ++j)
    {
        compute = std::max(compute, p->compute_seconds[j]);
        comm = std::max(comm, p->comm_seconds[j]);
    }
    return {compute, comm};
}

nlohmann::ordered_json row_json(const BenchRow& row)
{
    const auto& o = row.spec.options;
    nlohmann::ordered_json j;
    j["dataset"] = row.spec.dataset;
    j["metric"] = row.metric_name;
    j["algorithm"] = to_string(o.algorithm);
    j["ranks"] = o.ranks;
    j["epsilon"] = o.epsilon;
    j["cells"] = o.cells;
    j["leaf_size"] = o.leaf_size;
    j["seed"] = o.seed;
    j["centers"] = to_string(o.centers);
    j["n"] = row.n;
    j["edges"] = row.stats.edges;
    j["avg_degree"] = row.stats.avg_degree;
    j["distance_evals"] = row.report.distance_evals;
    j["query_pairings"] = row.report.query_pairings;
    j["ghost_queries"] = row.report.ghost_queries;
    j["comm_rounds"] = row.report.comm_rounds;

    std::size_t bytes = 0;
    for (const auto& c : row.report.comm)
        bytes += c.bytes_sent;
    j["bytes_sent"] = bytes;

    for (const auto& phase : bench_phases())
    {
        auto [compute, comm] = phase_times(row.report, phase);
        j[phase + "_compute_seconds"] = compute;
        j[phase + "_comm_seconds"] = comm;
    }
    j["wall_seconds"] = row.report.wall_seconds;
    return j;
}

std::vector<std::string> bench_columns()
{
    std::vector<std::string> cols = {"dataset", "metric", "algorithm", "ranks", "epsilon", "cells", "leaf_size",
                                     "seed", "centers", "n", "edges", "avg_degree", "distance_evals",
                                     "query_pairings", "ghost_queries", "comm_rounds", "bytes_sent"};
    for (const auto& phase : bench_phases())
    {
        cols.push_back(phase + "_compute_seconds");
        cols.push_back(phase + "_comm_seconds");
    }
    cols.push_back("wall_seconds");
    return cols;
}

std::string csv_field(const nlohmann::ordered_json& v)
{
    if (v.is_string())
    {
        std::string s = v.get<std::string>();
        if (s.find_first_of(",\"\n") == std::string::npos) return s;
        std::string quoted = "\"";
        for (char c : s)
            quoted += c == '"' ? std::string("\"\"") : std::string(1, c);
        return quoted + "\"";
    }
    if (v.is_number_float()) return format_real(v.get<double>());
    return v.dump();
}

int cmd_bench(const SettingFlags& flags, const std::string& format, const std::string& out_path, std::ostream& out)
{
    if (format != "csv" && format != "json") throw InvalidInput(fmt::format("unknown format '{}' (csv or json)", format));

    Config cfg = flags.resolve();
    auto empty_if_missing = [&](std::string_view key) {
        const auto* v = cfg.find(key);
        return v ? *v : std::vector<std::string>{};
    };
    auto datasets = empty_if_missing("dataset");
    auto metrics = empty_if_missing("metric");
    auto epsilons = empty_if_missing("epsilon");
    auto algorithms = values_or(cfg, "algorithm", "systolic-ring");
    auto ranks = values_or(cfg, "ranks", "1");
    auto cells = values_or(cfg, "cells", "0");
    auto leaf_sizes = values_or(cfg, "leaf_size", "10");
    auto seeds = values_or(cfg, "seed", "0");
    auto centers = values_or(cfg, "centers", "random");

    // validate the whole matrix before running any of it
    std::vector<RunSpec> specs;
    for (const auto& d : datasets)
        for (const auto& m : metrics)
            for (const auto& e : epsilons)
                for (const auto& a : algorithms)
                    for (const auto& r : ranks)
                        for (const auto& c : cells)
                            for (const auto& l : leaf_sizes)
                                for (const auto& s : seeds)
                                    for (const auto& z : centers)
                                        specs.push_back(make_spec(d, m, e, a, r, c, l, s, z));

    std::vector<BenchRow> rows;
    std::map<std::pair<std::string, MetricKind>, PointSet> loaded;
    for (const auto& spec : specs)
    {
        Metric metric(spec.metric);
        auto key = std::make_pair(spec.dataset, spec.metric);
        auto it = loaded.find(key);
        if (it == loaded.end()) it = loaded.emplace(key, load_points(spec.dataset, metric)).first;

        BuildResult result = build_graph(it->second, metric, spec.options);
        rows.push_back(BenchRow{spec, std::string(to_string(spec.metric)), result.graph.num_vertices(), stats(result.graph),
                                std::move(result.report)});
    }

    std::ofstream file;
    if (!out_path.empty()) file = open_out(out_path);
    std::ostream& os = out_path.empty() ? out : file;

    if (format == "json")
    {
        auto table = nlohmann::ordered_json::array();
        for (const auto& row : rows)
            table.push_back(row_json(row));
        os << table.dump(2) << '\n';
        return exit_ok;
    }

    auto cols = bench_columns();
    for (std::size_t k = 0; k < cols.size(); ++k)
        os << (k ? "," : "") << cols[k];
    os << '\n';
    for (const auto& row : rows)
    {
        auto j = row_json(row);
        for (std::size_t k = 0; k < cols.size(); ++k)
            os << (k ? "," : "") << csv_field(j[cols[k]]);
        os << '\n';
    }
    return exit_ok;
}

int cmd_gen(const SyntheticSpec& spec, const std::string& out_path, const std::string& labels_path, std::ostream& out)
{
    Dataset data = gen_synthetic(spec);

    std::string ext = std::filesystem::path(out_path).extension().string();
    auto os = open_out(out_path);
    if (ext == ".fvecs") write_fvecs(os, data.points);
    else if (ext == ".ivecs") write_ivecs(os, data.points);
    else if (ext == ".bvecs") write_bvecs(os, data.points);
    else if (ext == ".csv" || ext == ".txt") write_csv(os, data.points);
    else throw InvalidInput(fmt::format("cannot infer output format of '{}'", out_path));

    if (!labels_path.empty())
    {
        auto ls = open_out(labels_path);
        for (Index label : data.labels)
            ls << label << '\n';
    }
    out << fmt::format("wrote {} points ({}) to {}\n", data.points.size(), to_string(spec.kind), out_path);
    return exit_ok;
}

}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err)
{
    CLI::App app{"Exact fixed-radius near neighbor graphs with simulated distributed ranks", "nng"};
    app.require_subcommand(1);

    SettingFlags build_flags, verify_flags, bench_flags;
    std::string out_path, trace_path, graph_path, format = "csv";

    auto* build = app.add_subcommand("build", "build a neighbor graph and write it as an edge list");
    build_flags.attach(*build);
    build->add_option("--out", out_path, "edge list path; the report goes to <out>.report.json");
    build->add_option("--trace", trace_path, "write the message trace as JSON lines");

    auto* verify = app.add_subcommand("verify", "compare an edge list with the brute force graph");
    verify_flags.attach(*verify);
    verify->add_option("--graph", graph_path, "edge list to check")->required();

    auto* bench = app.add_subcommand("bench", "run the Cartesian product of list-valued settings");
    bench_flags.attach(*bench);
    bench->add_option("--format", format, "csv or json");
    bench->add_option("--out", out_path, "output table path (default stdout)");

    SyntheticSpec synth;
    std::string kind = "uniform-cube", labels_path;
    auto* gen = app.add_subcommand("gen", "write a synthetic dataset");
    gen->add_option("--kind", kind, "uniform-cube, gaussian-mixture, bit-uniform or string-mutation");
    gen->add_option("--n", synth.n, "number of points");
    gen->add_option("--dim", synth.dim, "dimension, bit length, or base string length");
    gen->add_option("--clusters", synth.clusters, "mixture components or string families");
    gen->add_option("--seed", synth.seed, "generator seed");
    gen->add_option("--labels", labels_path, "write generating labels, one per line");
    gen->add_option("--out", out_path, "output path (.fvecs .bvecs .ivecs .csv .txt)")->required();

    std::vector<const char*> argv;
    for (const auto& a : args)
        argv.push_back(a.c_str());

    try
    {
        app.parse(static_cast<int>(argv.size()), argv.data());
    }
    catch (const CLI::ParseError& e)
    {
        int code = app.exit(e, out, err);
        return code == 0 ? exit_ok : exit_usage;
    }

    try
    {
        if (*build) return cmd_build(build_flags, out_path, trace_path, out, err);
        if (*verify) return cmd_verify(verify_flags, graph_path, out);
        if (*bench) return cmd_bench(bench_flags, format, out_path, out);
        synth.kind = parse_synthetic_kind(kind);
        return cmd_gen(synth, out_path, labels_path, out);
    }
    catch (const VerifyFailure& e)
    {
        out << "FAIL " << e.what() << '\n';
        return exit_verify;
    }
    catch (const InvalidInput& e)
    {
        err << "error: " << e.what() << '\n';
        return exit_usage;
    }
    catch (const ParseError& e)
    {
        err << "error: " << e.what() << '\n';
        return exit_parse;
    }
    catch (const std::exception& e)
    {
        err << "internal error: " << e.what() << '\n';
        return exit_internal;
    }
}

}
