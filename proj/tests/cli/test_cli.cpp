#include <catch2/catch_amalgamated.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <string>

#include "icdof/serialize.hpp"

namespace fs = std::filesystem;

namespace {

std::string cli_path() {
    const char* p = std::getenv("ICDOF_CLI");
    REQUIRE(p != nullptr);
    return p;
}

int run_cli(const std::string& args) {
    const std::string cmd = cli_path() + " " + args + " > /dev/null 2>&1";
    const int rc = std::system(cmd.c_str());
    return WEXITSTATUS(rc);
}

fs::path work_dir() {
    const fs::path dir = fs::temp_directory_path() / "icdof_cli_test";
    fs::create_directories(dir);
    return dir;
}

}  // namespace

TEST_CASE("region subcommand emits exact vertices") {
    const fs::path out = work_dir() / "region.json";
    REQUIRE(run_cli("region --alpha 1/2 --out " + out.string()) == 0);
    const auto region = icdof::region_from_json(icdof::json::parse(icdof::read_text(out.string())));
    bool has_mid = false;
    for (const auto& v : region.vertices)
        has_mid = has_mid || (v[0] == icdof::Rat(5, 6) && v[1] == icdof::Rat(5, 6));
    CHECK(has_mid);
    CHECK(region.half_planes.size() == 6);

    const fs::path out0 = work_dir() / "region0.json";
    REQUIRE(run_cli("region --alpha 0 --out " + out0.string()) == 0);
    const auto region0 = icdof::region_from_json(icdof::json::parse(icdof::read_text(out0.string())));
    bool has_23 = false;
    for (const auto& v : region0.vertices)
        has_23 = has_23 || (v[0] == icdof::Rat(2, 3) && v[1] == icdof::Rat(2, 3));
    CHECK(has_23);
}

TEST_CASE("region subcommand rejects invalid alpha") {
    CHECK(run_cli("region --alpha 2") == 1);
}

TEST_CASE("sweep subcommand is deterministic and well-formed") {
    const fs::path a = work_dir() / "sweep_a.csv";
    const fs::path b = work_dir() / "sweep_b.csv";
    const std::string common =
        "sweep --scheme hk --alpha 0.5 --pmin-db 50 --pmax-db 70 --points 3 --trials 300 --window 3 --seed 5 ";
    REQUIRE(run_cli(common + "--out " + a.string()) == 0);
    REQUIRE(run_cli(common + "--out " + b.string()) == 0);
    CHECK(icdof::read_text(a.string()) == icdof::read_text(b.string()));

    const auto parsed = icdof::curve_from_csv(icdof::read_text(a.string()));
    REQUIRE(parsed.curve.points.size() == 3);
    CHECK(parsed.curve.scheme == "hk");
    REQUIRE(parsed.has_fit);
    CHECK(parsed.fit.slope1 == Catch::Approx(1.0).margin(0.2));
    CHECK(parsed.fit.slope2 == Catch::Approx(0.5).margin(0.2));

    CHECK(run_cli("sweep --scheme bogus") == 1);
    CHECK(run_cli("sweep --scheme enhanced --alpha 1.5") == 1);
}

TEST_CASE("config file supplies defaults, flags win") {
    const fs::path cfgf = work_dir() / "cli.cfg";
    {
        std::ofstream out(cfgf);
        out << "[sweep]\nscheme=hk\nalpha=0.5\npmin-db=50\npmax-db=70\npoints=3\ntrials=300\nwindow=3\nseed=5\n";
    }
    const fs::path a = work_dir() / "cfg_a.csv";
    const fs::path b = work_dir() / "cfg_b.csv";
    REQUIRE(run_cli("--config " + cfgf.string() + " sweep --out " + a.string()) == 0);
    const std::string explicit_flags =
        "sweep --scheme hk --alpha 0.5 --pmin-db 50 --pmax-db 70 --points 3 --trials 300 --window 3 --seed 5 ";
    REQUIRE(run_cli(explicit_flags + "--out " + b.string()) == 0);
    CHECK(icdof::read_text(a.string()) == icdof::read_text(b.string()));

    // A flag on the command line overrides the config value.
    const fs::path c = work_dir() / "cfg_c.csv";
    REQUIRE(run_cli("--config " + cfgf.string() + " sweep --seed 6 --out " + c.string()) == 0);
    CHECK(icdof::read_text(a.string()) != icdof::read_text(c.string()));
}

TEST_CASE("bounds subcommand validates dimensions and reports passes") {
    CHECK(run_cli("bounds --m 1 --n 2") == 1);
    const fs::path out = work_dir() / "bounds.json";
    REQUIRE(run_cli("bounds --n 1 --m 2 --instances 5 --trials 2000 --sigma2-grid 1,0.1 --seed 3 --out " +
                    out.string()) == 0);
    const auto doc = icdof::json::parse(icdof::read_text(out.string()));
    CHECK(doc.at("pass_count").get<int>() == 10);
    CHECK(doc.at("fail_count").get<int>() == 0);
    CHECK(doc.at("rows").size() == 10);
}

TEST_CASE("check subcommand accepts honest curves and rejects impossible ones") {
    // A swept curve from the simulator passes.
    const fs::path curve = work_dir() / "hk.csv";
    REQUIRE(run_cli("sweep --scheme hk --alpha 0.5 --trials 500 --window 3 --seed 4 --out " + curve.string()) ==
            0);
    CHECK(run_cli("check --from " + curve.string()) == 0);

    // A synthetic curve with slope 1.2 per user violates d_i <= 1.
    icdof::RateCurve fake;
    fake.scheme = "enhanced";
    fake.alpha = 0.5;
    for (const double p : {1e4, 1e6, 1e8}) {
        icdof::RatePair pt;
        pt.power = p;
        pt.r1 = pt.r2 = 1.2 * std::log2(p);
        fake.power.push_back(p);
        fake.points.push_back(pt);
    }
    const fs::path fake_path = work_dir() / "fake.csv";
    icdof::write_text_atomic(fake_path.string(), icdof::curve_to_csv(fake));
    CHECK(run_cli("check --from " + fake_path.string()) == 2);

    // The inflation flag is honored: a point just outside the strict region
    // passes with a generous epsilon.
    icdof::RateCurve edge = fake;
    for (auto& pt : edge.points) pt.r1 = pt.r2 = 0.85 * std::log2(pt.power);
    const fs::path edge_path = work_dir() / "edge.csv";
    icdof::write_text_atomic(edge_path.string(), icdof::curve_to_csv(edge));
    CHECK(run_cli("check --from " + edge_path.string() + " --eps 0.0") == 2);
    CHECK(run_cli("check --from " + edge_path.string() + " --eps 0.1") == 0);
}

TEST_CASE("simulated containment check over a small budget") {
    CHECK(run_cli("check --schemes zf,hk --alpha 0.5 --trials 300 --points 3 --seed 2") == 0);
}
