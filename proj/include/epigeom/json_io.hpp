#pragma once

#include <string>

#include <json.hpp>

#include "epigeom/star_body.hpp"
#include "epigeom/verify.hpp"

namespace epigeom {

/// Parse {"family": ..., "dim": ..., "params": {...}}.
Density density_from_json(const nlohmann::json& j);
nlohmann::json density_to_json(const Density& d);

GridDensity grid_from_json(const nlohmann::json& j);
nlohmann::json grid_to_json(const GridDensity& g);

/// Star body fixture: either {"angles": [...], "radii": [...]} or a generator
/// {"generator": {"base": b, "amplitude": a, "frequency": k}, "directions": n}
/// meaning rho(theta) = base + amplitude cos(k theta).
StarBody star_body_from_json(const nlohmann::json& j);
nlohmann::json star_body_to_json(const StarBody& b);

nlohmann::json report_to_json(const CheckReport& r);

nlohmann::json load_json_file(const std::string& path);
/// Atomic write (temp file + rename).
void write_text_file(const std::string& path, const std::string& text);

}  // namespace epigeom
