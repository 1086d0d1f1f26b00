#include "semcell/geojson.hpp"

#include <json.hpp>

#include "semcell/format.hpp"

namespace semcell {

namespace {

nlohmann::json feature_to_json(const MapFeature& feature) {
    nlohmann::json properties;
    properties["category"] = feature.category;
    properties["mesh_i"] = feature.mesh.i;
    properties["mesh_j"] = feature.mesh.j;
    if (feature.category == "blue") {
        properties["chromosome_index"] = feature.chromosome_index;
    } else {
        properties["div"] = feature.div;
        properties["rank"] = feature.rank;
    }
    return nlohmann::json{
        {"type", "Feature"},
        {"geometry", {{"type", "Point"}, {"coordinates", {feature.lon, feature.lat}}}},
        {"properties", properties},
    };
}

} // namespace

std::string map_categories_to_geojson(const MapCategories& categories) {
    nlohmann::json features = nlohmann::json::array();
    for (const auto& f : categories.red) features.push_back(feature_to_json(f));
    for (const auto& f : categories.orange) features.push_back(feature_to_json(f));
    for (const auto& f : categories.blue) features.push_back(feature_to_json(f));
    const nlohmann::json collection{{"type", "FeatureCollection"}, {"features", features}};
    return collection.dump();
}

void write_map_geojson(const MapCategories& categories, const std::string& path) {
    write_text_file(path, map_categories_to_geojson(categories));
}

} // namespace semcell
