#include "kgvar/io.hpp"

#include <fstream>
#include <nlohmann/json.hpp>

namespace kgv {

using nlohmann::json;

json grid_to_json(const Grid& g) {
    json axes = json::array();
    for (int a = 0; a < g.dim(); ++a)
        axes.push_back({{"lo", g.axis(a).lo}, {"hi", g.axis(a).hi}, {"n", g.axis(a).n}});
    return {{"axes", axes}, {"time_axis", g.has_time_axis()}};
}

Grid grid_from_json(const json& j) {
    std::vector<Axis> axes;
    for (const json& a : j.at("axes"))
        axes.push_back({a.at("lo").get<double>(), a.at("hi").get<double>(), a.at("n").get<int>()});
    return Grid(std::move(axes), j.at("time_axis").get<bool>());
}

json field_to_json(const ScalarField& f) {
    json values = json::array();
    for (const Complex& v : f.values)
        values.push_back({v.real(), v.imag()});
    return {{"schema", "kgvar-field-1"},
            {"kind", "scalar"},
            {"grid", grid_to_json(f.grid)},
            {"values", std::move(values)}};
}

ScalarField scalar_field_from_json(const json& j) {
    if (j.at("kind").get<std::string>() != "scalar")
        throw ArgumentError("scalar_field_from_json: not a scalar field container");
    ScalarField f(grid_from_json(j.at("grid")));
    const json& values = j.at("values");
    if (values.size() != f.values.size())
        throw ArgumentError("scalar_field_from_json: value count does not match grid");
    for (std::size_t p = 0; p < f.values.size(); ++p)
        f.values[p] = Complex(values[p][0].get<double>(), values[p][1].get<double>());
    return f;
}

json field_to_json(const VectorField& f) {
    return {{"schema", "kgvar-field-1"},
            {"kind", "vector"},
            {"codim", f.codim},
            {"grid", grid_to_json(f.grid)},
            {"values", f.values}};
}

VectorField vector_field_from_json(const json& j) {
    if (j.at("kind").get<std::string>() != "vector")
        throw ArgumentError("vector_field_from_json: not a vector field container");
    VectorField f(grid_from_json(j.at("grid")), j.at("codim").get<int>());
    const json& values = j.at("values");
    if (values.size() != f.values.size())
        throw ArgumentError("vector_field_from_json: value count does not match grid");
    for (std::size_t p = 0; p < f.values.size(); ++p)
        f.values[p] = values[p].get<double>();
    return f;
}

void save_json(const json& j, const std::string& path) {
    std::ofstream out(path);
    if (!out)
        throw ArgumentError("save_json: cannot open " + path);
    out << j.dump(2) << "\n";
}

json load_json(const std::string& path) {
    std::ifstream in(path);
    if (!in)
        throw ArgumentError("load_json: cannot open " + path);
    return json::parse(in);
}

} // namespace kgv
