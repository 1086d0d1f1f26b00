#pragma once

#include <string>

#include "semcell/geo.hpp"

namespace semcell {

// FeatureCollection with one Point feature per map point, red then orange
// then blue. Coordinates follow GeoJSON order (lon, lat); the engine stores
// (lat, lon), so the swap happens here and only here.
std::string map_categories_to_geojson(const MapCategories& categories);

void write_map_geojson(const MapCategories& categories, const std::string& path);

} // namespace semcell
