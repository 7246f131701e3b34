#include <catch2/catch_amalgamated.hpp>

#include <filesystem>

#include "icdof/serialize.hpp"

using namespace icdof;

TEST_CASE("region polygons round-trip through JSON exactly") {
    const RegionPolygon region = miso_dof_region(Rat(3, 4));
    const json j = region_to_json(region);
    const RegionPolygon back = region_from_json(json::parse(j.dump()));
    REQUIRE(back.vertices.size() == region.vertices.size());
    for (std::size_t i = 0; i < region.vertices.size(); ++i) {
        CHECK(back.vertices[i][0] == region.vertices[i][0]);
        CHECK(back.vertices[i][1] == region.vertices[i][1]);
    }
    REQUIRE(back.half_planes.size() == region.half_planes.size());
    for (std::size_t i = 0; i < region.half_planes.size(); ++i) {
        CHECK(back.half_planes[i].a == region.half_planes[i].a);
        CHECK(back.half_planes[i].c == region.half_planes[i].c);
    }
    CHECK(back.alpha == region.alpha);
    CHECK(back.label == region.label);
}

TEST_CASE("rate curves round-trip through CSV exactly") {
    RateCurve curve;
    curve.scheme = "hk";
    curve.alpha = 0.5;
    curve.power = {1e4, 1e6, 1e8};
    for (const double p : curve.power) {
        RatePair pt;
        pt.power = p;
        pt.alpha = 0.5;
        pt.r1 = 1.2345678901234 * std::log2(p);
        pt.r2 = 0.5 * pt.r1;
        pt.se1 = 0.031;
        pt.se2 = 0.017;
        curve.points.push_back(pt);
    }
    DofFit fit;
    fit.slope1 = 1.2345678901234;
    fit.slope2 = 0.61728;
    fit.se_slope1 = 1e-4;
    fit.se_slope2 = 2e-4;
    fit.window_begin = 0;
    fit.window_end = 3;
    fit.diff_quotient1 = fit.slope1;
    fit.diff_quotient2 = fit.slope2;

    const std::string text = curve_to_csv(curve, &fit);
    const ParsedCurve back = curve_from_csv(text);
    REQUIRE(back.curve.points.size() == 3);
    CHECK(back.curve.scheme == "hk");
    CHECK(back.curve.alpha == curve.alpha);
    for (std::size_t i = 0; i < 3; ++i) {
        CHECK(back.curve.points[i].r1 == curve.points[i].r1);
        CHECK(back.curve.points[i].r2 == curve.points[i].r2);
        CHECK(back.curve.points[i].se1 == curve.points[i].se1);
        CHECK(back.curve.power[i] == Catch::Approx(curve.power[i]).epsilon(1e-12));
    }
    REQUIRE(back.has_fit);
    CHECK(back.fit.slope1 == fit.slope1);
    CHECK(back.fit.window_end == fit.window_end);

    CHECK_THROWS(curve_from_csv("bogus\n1,2,3\n"));
}

TEST_CASE("atomic writes create parent directories and replace content") {
    namespace fs = std::filesystem;
    const fs::path dir = fs::temp_directory_path() / "icdof_serialize_test";
    fs::remove_all(dir);
    const std::string path = (dir / "a" / "b.txt").string();
    write_text_atomic(path, "first");
    CHECK(read_text(path) == "first");
    write_text_atomic(path, "second");
    CHECK(read_text(path) == "second");
    CHECK_FALSE(fs::exists(path + ".tmp"));
    fs::remove_all(dir);
}
