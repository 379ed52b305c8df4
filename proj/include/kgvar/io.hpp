#pragma once

#include <nlohmann/json_fwd.hpp>
#include <string>

#include "kgvar/grid.hpp"

namespace kgv {

// JSON field container: grid metadata header (axes, time flag) followed by
// row-major values. Scalars store [re, im] pairs; vectors store codim reals
// per point.
nlohmann::json grid_to_json(const Grid& g);
Grid grid_from_json(const nlohmann::json& j);

nlohmann::json field_to_json(const ScalarField& f);
ScalarField scalar_field_from_json(const nlohmann::json& j);

nlohmann::json field_to_json(const VectorField& f);
VectorField vector_field_from_json(const nlohmann::json& j);

void save_json(const nlohmann::json& j, const std::string& path);
nlohmann::json load_json(const std::string& path);

} // namespace kgv
