#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <nlohmann/json.hpp>
#include <random>

#include "kgvar/io.hpp"

using namespace kgv;

TEST_CASE("grid round trip keeps axes and the time flag") {
    Grid g({{0.0, 1.0, 5}, {-2.0, 3.0, 7}, {0.5, 0.75, 4}}, true);
    Grid back = grid_from_json(grid_to_json(g));
    CHECK(back == g);

    Grid spatial({{0.0, 1.0, 3}});
    CHECK(grid_from_json(grid_to_json(spatial)) == spatial);
}

TEST_CASE("scalar field round trip is exact") {
    Grid g({{0.0, 1.0, 4}, {0.0, 2.0, 5}});
    std::mt19937 rng(21);
    std::normal_distribution<double> dist;
    ScalarField f(g);
    for (Complex& v : f.values)
        v = Complex(dist(rng), dist(rng));
    ScalarField back = scalar_field_from_json(field_to_json(f));
    CHECK(back.grid == g);
    for (std::size_t p = 0; p < g.size(); ++p)
        CHECK(back.values[p] == f.values[p]);
}

TEST_CASE("vector field round trip is exact") {
    Grid g({{0.0, 1.0, 3}, {0.0, 1.0, 4}, {0.0, 1.0, 5}}, true);
    std::mt19937 rng(22);
    std::normal_distribution<double> dist;
    VectorField f(g, 3);
    for (double& v : f.values)
        v = dist(rng);
    VectorField back = vector_field_from_json(field_to_json(f));
    CHECK(back.grid == g);
    CHECK(back.codim == 3);
    for (std::size_t i = 0; i < f.values.size(); ++i)
        CHECK(back.values[i] == f.values[i]);
}

TEST_CASE("save and load through a file") {
    Grid g({{0.0, 1.0, 3}, {0.0, 1.0, 3}});
    ScalarField f = ScalarField::sample(g, [](std::span<const double> x) {
        return Complex(x[0], -x[1]);
    });
    const std::string path = "io_roundtrip_test.json";
    save_json(field_to_json(f), path);
    ScalarField back = scalar_field_from_json(load_json(path));
    std::remove(path.c_str());
    for (std::size_t p = 0; p < g.size(); ++p)
        CHECK(back.values[p] == f.values[p]);
}

TEST_CASE("malformed containers are rejected") {
    nlohmann::json j;
    j["kind"] = "vector";
    CHECK_THROWS_AS(scalar_field_from_json(j), ArgumentError);
    CHECK_THROWS_AS(load_json("no_such_file_here.json"), ArgumentError);

    Grid g({{0.0, 1.0, 3}});
    nlohmann::json truncated = field_to_json(ScalarField(g));
    truncated["values"].erase(0);
    CHECK_THROWS_AS(scalar_field_from_json(truncated), ArgumentError);
}
