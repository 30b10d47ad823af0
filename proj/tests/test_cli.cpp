#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "bai/cli.hpp"

using nlohmann::json;
namespace fs = std::filesystem;

namespace {

struct Outcome {
    int code;
    std::string out;
    std::string err;
};

Outcome run(std::vector<std::string> args)
{
    args.insert(args.begin(), "bai_lab");
    std::ostringstream out, err;
    const int code = bai::run_cli(args, out, err);
    return {code, out.str(), err.str()};
}

fs::path scratch(const std::string& name)
{
    const char* base = std::getenv("BAI_LAB_TEST_TMP");
    fs::path dir = fs::path(base ? base : fs::temp_directory_path().string()) / name;
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

std::string slurp(const fs::path& p)
{
    std::ifstream f(p, std::ios::binary);
    return {std::istreambuf_iterator<char>(f), std::istreambuf_iterator<char>()};
}

}  // namespace

TEST_CASE("complexity subcommand")
{
    const Outcome o = run({"complexity", "--instance", "[0.5, 0.4, 0.3]"});
    REQUIRE(o.code == 0);
    const json j = json::parse(o.out);
    CHECK(j["h2"].get<double>() == doctest::Approx(200.0));
    CHECK(j["h_excl"].get<double>() == doctest::Approx(125.0));
    CHECK(j["h_incl"].get<double>() == doctest::Approx(225.0));

    const Outcome f = run({"complexity", "--family", R"({"type": "alpha", "K": 4, "alpha": 1})"});
    REQUIRE(f.code == 0);
    CHECK(json::parse(f.out)["H"].size() == 4);

    CHECK(run({"complexity", "--instance", "[0.5, 1.5]"}).code == 1);
    CHECK(run({"complexity"}).code == 1);
}

TEST_CASE("usage errors exit with 1")
{
    CHECK(run({}).code == 1);
    CHECK(run({"frobnicate"}).code == 1);
    CHECK(run({"complexity", "--instance", "[0.5, 0.4]", "--bogus"}).code == 1);
    CHECK(run({"simulate", "--instance", "[0.5, 0.4]", "--strategy", "greedy", "--T", "10"}).code == 1);
    CHECK(run({"simulate", "--instance", "[0.5, 0.4]", "--strategy", "uniform", "--T", "10", "--a", "2"}).code == 1);
    CHECK(run({"simulate", "--instance", "[0.5, 0.4, 0.3]", "--strategy", "successive_rejects", "--T", "2"}).code ==
          1);
    CHECK(run({"verify", "--suite", "nope"}).code == 1);
    CHECK(run({"sweep"}).code == 1);
    CHECK(run({"--help"}).code == 0);
}

TEST_CASE("simulate is reproducible and independent of workers")
{
    const std::vector<std::string> base{"simulate", "--instance", "[0.5, 0.45, 0.4]", "--strategy",
                                        "ucb_e",    "--a",        "3",                "--T",
                                        "60",       "--R",        "2000"};
    auto a = base;
    a.insert(a.end(), {"--seed", "4", "--workers", "1"});
    auto b = base;
    b.insert(b.end(), {"--seed", "4", "--workers", "3"});
    const Outcome oa = run(a), ob = run(b);
    REQUIRE(oa.code == 0);
    CHECK(oa.out == ob.out);
    CHECK(json::parse(oa.out)["estimate"]["replications"] == 2000);
}

TEST_CASE("global flags may precede the subcommand")
{
    const Outcome o = run({"--seed", "9", "--level", "0.9", "simulate", "--instance", "[0.5, 0.3]", "--strategy",
                           "uniform", "--T", "10", "--R", "100"});
    REQUIRE(o.code == 0);
    const json j = json::parse(o.out);
    CHECK(j["seed"] == 9);
    CHECK(j["estimate"]["level"].get<double>() == 0.9);
}

TEST_CASE("bounds subcommand")
{
    const Outcome o = run({"bounds", "--T", "10000", "--K", "3", "--H2", "75"});
    REQUIRE(o.code == 0);
    const json j = json::parse(o.out);
    CHECK(j["bounds"][0]["name"] == "ub_sr");
    CHECK(j["bounds"][0]["log_value"].get<double>() == doctest::Approx(-73.2938).epsilon(1e-5));
    const Outcome fam = run({"bounds", "--T", "400", "--family", R"({"type": "alpha", "K": 8, "alpha": 1})"});
    REQUIRE(fam.code == 0);
    CHECK(json::parse(fam.out)["bounds"].size() == 6);
    CHECK(run({"bounds", "--T", "100", "--K", "3"}).code == 1);
}

TEST_CASE("verify subcommand")
{
    const fs::path dir = scratch("verify");
    const Outcome o = run({"verify", "--suite", "chain", "--out", dir.string()});
    REQUIRE(o.code == 0);
    const json j = json::parse(o.out);
    CHECK(j["passed"] == true);
    CHECK(slurp(dir / "verify_chain.json") == o.out);
}

TEST_CASE("sweep writes identical files on repeated runs")
{
    const fs::path dir = scratch("sweep");
    const json cfg = json::parse(R"({
        "family": {"type": "alpha", "K": 4, "alpha": 1.0},
        "strategies": [{"kind": "successive_rejects"}, {"kind": "successive_halving"}],
        "T_grid": [16, 32],
        "replications": 400,
        "seed": 21
    })");
    std::ofstream(dir / "cfg.json") << cfg.dump();
    const auto first = dir / "first", second = dir / "second";
    REQUIRE(run({"sweep", "--config", (dir / "cfg.json").string(), "--out", first.string(), "--workers", "1"}).code ==
            0);
    REQUIRE(run({"sweep", "--config", (dir / "cfg.json").string(), "--out", second.string(), "--workers", "3"})
                .code == 0);
    for (const char* name : {"sweep.csv", "plot_successive_rejects.csv", "plot_successive_halving.csv"}) {
        CHECK(fs::exists(first / name));
        CHECK(slurp(first / name) == slurp(second / name));
    }
    json meta = json::parse(slurp(first / "metadata.json"));
    json meta2 = json::parse(slurp(second / "metadata.json"));
    CHECK(meta["config"]["seed"] == 21);
    CHECK(meta["config"]["out"] == first.string());
    meta["config"].erase("out");
    meta2["config"].erase("out");
    CHECK(meta == meta2);

    CHECK(run({"sweep", "--config", (dir / "missing.json").string()}).code == 1);
}

TEST_CASE("worker count from the environment")
{
    ::setenv("BAI_LAB_WORKERS", "2", 1);
    CHECK(run({"simulate", "--instance", "[0.5, 0.3]", "--strategy", "uniform", "--T", "10", "--R", "10"}).code == 0);
    ::setenv("BAI_LAB_WORKERS", "zero", 1);
    CHECK(run({"simulate", "--instance", "[0.5, 0.3]", "--strategy", "uniform", "--T", "10", "--R", "10"}).code == 1);
    ::unsetenv("BAI_LAB_WORKERS");
}
