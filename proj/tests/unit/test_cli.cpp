#include "nng_tools/cli.hpp"

#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

namespace fs = std::filesystem;
using nng::cli::run;

namespace {

const std::string dataset = "synthetic:uniform-cube,n=300,dim=2,seed=4";

struct Result
{
    int code;
    std::string out;
    std::string err;
};

Result nng_cli(std::vector<std::string> args)
{
    args.insert(args.begin(), "nng");
    std::ostringstream out, err;
    int code = run(args, out, err);
    return {code, out.str(), err.str()};
}

std::string tmp(const std::string& name)
{
    fs::create_directories(NNG_TEST_TMPDIR);
    return (fs::path(NNG_TEST_TMPDIR) / name).string();
}

std::string slurp(const std::string& path)
{
    std::ifstream in(path, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write(const std::string& path, const std::string& text)
{
    std::ofstream(path) << text;
}

}

TEST(Cli, BuildThenVerify)
{
    std::string out = tmp("build.txt");
    auto b = nng_cli({"build", "--dataset", dataset, "--metric", "euclidean", "--epsilon", "0.1",
                      "--algorithm", "landmark-coll", "--ranks", "4", "--out", out, "--trace", tmp("build.trace")});
    ASSERT_EQ(b.code, 0) << b.err;
    EXPECT_NE(b.out.find("edges="), std::string::npos);
    EXPECT_TRUE(fs::exists(out + ".report.json"));
    EXPECT_FALSE(slurp(tmp("build.trace")).empty());

    auto v = nng_cli({"verify", "--dataset", dataset, "--metric", "euclidean", "--epsilon", "0.1", "--graph", out});
    EXPECT_EQ(v.code, 0) << v.out << v.err;
    EXPECT_EQ(v.out.rfind("PASS", 0), 0u);
}

TEST(Cli, SingleRankHasNoRounds)
{
    auto b = nng_cli({"build", "--dataset", dataset, "--metric", "euclidean", "--epsilon", "0.1", "--out", tmp("one.txt")});
    ASSERT_EQ(b.code, 0) << b.err;
    EXPECT_NE(b.out.find("comm_rounds=0"), std::string::npos);
}

TEST(Cli, OutputIsIdenticalAcrossRanksAndAlgorithms)
{
    std::string first;
    for (std::string algo : {"systolic-ring", "landmark-coll", "landmark-ring"})
        for (std::string ranks : {"1", "3", "8"})
        {
            std::string path = tmp("same_" + algo + ranks + ".txt");
            ASSERT_EQ(nng_cli({"build", "--dataset", dataset, "--metric", "euclidean", "--epsilon", "0.07",
                               "--algorithm", algo, "--ranks", ranks, "--out", path}).code, 0);
            if (first.empty()) first = slurp(path);
            EXPECT_EQ(slurp(path), first) << algo << " " << ranks;
        }
}

TEST(Cli, ConfigFileAndOverride)
{
    std::string cfg = tmp("run.cfg");
    write(cfg, "dataset = " + dataset + "\nmetric = euclidean\nepsilon = 0.05\nalgorithm = landmark-ring\nranks = 2\n");
    auto b = nng_cli({"build", "--config", cfg, "--epsilon", "0.1", "--out", tmp("cfg.txt")});
    ASSERT_EQ(b.code, 0) << b.err;
    std::string header = slurp(tmp("cfg.txt"));
    header = header.substr(0, header.find('\n'));
    EXPECT_EQ(header.substr(0, 4), "300 ");
    EXPECT_NE(header.find(" 0.1 euclidean"), std::string::npos);
}

TEST(Cli, UsageErrors)
{
    EXPECT_EQ(nng_cli({}).code, nng::cli::exit_usage);
    EXPECT_EQ(nng_cli({"frobnicate"}).code, nng::cli::exit_usage);
    EXPECT_EQ(nng_cli({"build", "--dataset", dataset, "--metric", "euclidean", "--epsilon", "0.1",
                       "--algorithm", "quadtree"}).code, nng::cli::exit_usage);
    EXPECT_EQ(nng_cli({"build", "--dataset", dataset, "--metric", "euclidean"}).code, nng::cli::exit_usage);
    EXPECT_EQ(nng_cli({"build", "--dataset", dataset, "--metric", "euclidean", "--epsilon", "-1"}).code,
              nng::cli::exit_usage);
    EXPECT_EQ(nng_cli({"build", "--dataset", dataset, "--metric", "euclidean", "--epsilon", "0.1", "--ranks", "0"}).code,
              nng::cli::exit_usage);
    EXPECT_EQ(nng_cli({"--help"}).code, 0);
}

TEST(Cli, ParseErrors)
{
    std::string bad = tmp("bad.fvecs");
    write(bad, "xy");
    EXPECT_EQ(nng_cli({"build", "--dataset", bad, "--metric", "euclidean", "--epsilon", "1"}).code, nng::cli::exit_parse);

    std::string cfg = tmp("bad.cfg");
    write(cfg, "colour = blue\n");
    EXPECT_EQ(nng_cli({"build", "--config", cfg}).code, nng::cli::exit_parse);

    std::string graph = tmp("bad_graph.txt");
    write(graph, "not a graph\n");
    EXPECT_EQ(nng_cli({"verify", "--dataset", dataset, "--metric", "euclidean", "--epsilon", "1", "--graph", graph}).code,
              nng::cli::exit_parse);
}

TEST(Cli, VerifyDetectsMutationAndWrongEpsilon)
{
    std::string out = tmp("mut.txt");
    ASSERT_EQ(nng_cli({"build", "--dataset", dataset, "--metric", "euclidean", "--epsilon", "0.1", "--out", out}).code, 0);
    std::string text = slurp(out);

    // drop the last edge and fix the header count
    std::istringstream is(text);
    std::string header, line, body;
    std::getline(is, header);
    std::vector<std::string> lines;
    while (std::getline(is, line)) lines.push_back(line);
    lines.pop_back();
    for (const auto& l : lines) body += l + "\n";
    std::istringstream hs(header);
    std::string n, m, eps, metric;
    hs >> n >> m >> eps >> metric;
    std::string mutated = tmp("mutated.txt");
    write(mutated, n + " " + std::to_string(lines.size()) + " " + eps + " " + metric + "\n" + body);

    auto v = nng_cli({"verify", "--dataset", dataset, "--metric", "euclidean", "--epsilon", "0.1", "--graph", mutated});
    EXPECT_EQ(v.code, nng::cli::exit_verify);
    EXPECT_NE(v.out.find("FAIL"), std::string::npos);
    EXPECT_NE(v.out.find("only in second"), std::string::npos);

    auto e = nng_cli({"verify", "--dataset", dataset, "--metric", "euclidean", "--epsilon", "0.2", "--graph", out});
    EXPECT_EQ(e.code, nng::cli::exit_verify);
    EXPECT_NE(e.out.find("epsilon"), std::string::npos);
}

TEST(Cli, BenchEmptyMatrix)
{
    std::string cfg = tmp("empty.cfg");
    write(cfg, "# nothing to run\nalgorithm = systolic-ring\n");
    auto csv = nng_cli({"bench", "--config", cfg});
    ASSERT_EQ(csv.code, 0) << csv.err;
    EXPECT_EQ(std::count(csv.out.begin(), csv.out.end(), '\n'), 1);
    auto json = nng_cli({"bench", "--config", cfg, "--format", "json"});
    EXPECT_EQ(json.out, "[]\n");
}

TEST(Cli, BenchRowMatchesBuild)
{
    std::string cfg = tmp("one.cfg");
    write(cfg, "dataset = " + dataset + "\nmetric = euclidean\nepsilon = 0.1\nalgorithm = landmark-coll\nranks = 2\n");
    auto b = nng_cli({"build", "--config", cfg, "--out", tmp("bench_build.txt")});
    auto r = nng_cli({"bench", "--config", cfg});
    ASSERT_EQ(r.code, 0) << r.err;

    std::istringstream is(r.out);
    std::string header, row;
    std::getline(is, header);
    std::getline(is, row);
    EXPECT_FALSE(std::getline(is, row) && !row.empty());

    EXPECT_EQ(header.substr(0, 25), "dataset,metric,algorithm,");
    EXPECT_NE(r.out.find("\"" + dataset + "\""), std::string::npos);
    auto edges_in_build = b.out.substr(b.out.find("edges=") + 6);
    edges_in_build = edges_in_build.substr(0, edges_in_build.find(' '));
    EXPECT_NE(r.out.find("," + edges_in_build + ","), std::string::npos);
}

TEST(Cli, BenchMatrixAndAverageDegree)
{
    std::string cfg = tmp("matrix.cfg");
    write(cfg, "dataset = " + dataset + "\nmetric = euclidean\nepsilon = 0.05 0.1\nalgorithm = systolic-ring landmark-ring\nranks = 1 2\n");
    auto r = nng_cli({"bench", "--config", cfg, "--format", "json"});
    ASSERT_EQ(r.code, 0) << r.err;
    EXPECT_EQ(std::count(r.out.begin(), r.out.end(), '{'), 8);
    EXPECT_NE(r.out.find("\"avg_degree\""), std::string::npos);
}

TEST(Cli, GenWritesDatasets)
{
    std::string out = tmp("gen.fvecs");
    auto g = nng_cli({"gen", "--kind", "gaussian-mixture", "--n", "50", "--dim", "3", "--out", out});
    ASSERT_EQ(g.code, 0) << g.err;
    EXPECT_EQ(fs::file_size(out), 50u * (4 + 12));

    std::string bits = tmp("gen.bvecs");
    ASSERT_EQ(nng_cli({"gen", "--kind", "bit-uniform", "--n", "20", "--dim", "64", "--out", bits}).code, 0);
    auto b = nng_cli({"build", "--dataset", bits, "--metric", "hamming", "--epsilon", "28", "--out", tmp("bits.txt")});
    EXPECT_EQ(b.code, 0) << b.err;

    std::string strs = tmp("gen.txt");
    ASSERT_EQ(nng_cli({"gen", "--kind", "string-mutation", "--n", "30", "--dim", "12", "--out", strs}).code, 0);
    auto s = nng_cli({"build", "--dataset", strs, "--metric", "edit", "--epsilon", "3", "--ranks", "2",
                      "--algorithm", "landmark-ring", "--out", tmp("strs.txt")});
    EXPECT_EQ(s.code, 0) << s.err;
    auto v = nng_cli({"verify", "--dataset", strs, "--metric", "edit", "--epsilon", "3", "--graph", tmp("strs.txt")});
    EXPECT_EQ(v.code, 0) << v.out;

    EXPECT_EQ(nng_cli({"gen", "--kind", "spiral", "--out", tmp("x.csv")}).code, nng::cli::exit_usage);
}
