#include "semcell/types.hpp"

#include <unordered_set>

namespace semcell {

CoexistenceUnit make_unit(std::size_t unit_id, const std::vector<std::string>& raw_members) {
    CoexistenceUnit unit;
    unit.unit_id = unit_id;
    unit.members.reserve(raw_members.size());
    std::unordered_set<std::string_view> seen;
    for (const auto& m : raw_members) {
        if (seen.insert(m).second) {
            unit.members.push_back(m);
        }
    }
    return unit;
}

const char* to_string(DistanceMode mode) {
    return mode == DistanceMode::PlainAlpha ? "plain-alpha" : "attenuated";
}

const char* to_string(InitMode mode) {
    return mode == InitMode::Identical ? "identical" : "jitter";
}

DistanceMode distance_mode_from_string(std::string_view s) {
    if (s == "plain-alpha" || s == "plain") return DistanceMode::PlainAlpha;
    if (s == "attenuated") return DistanceMode::Attenuated;
    throw UsageError("unknown distance mode '" + std::string(s) + "' (expected plain-alpha or attenuated)");
}

InitMode init_mode_from_string(std::string_view s) {
    if (s == "identical") return InitMode::Identical;
    if (s == "jitter") return InitMode::Jitter;
    throw UsageError("unknown init mode '" + std::string(s) + "' (expected identical or jitter)");
}

void EvolutionConfig::validate() const {
    if (!(alpha >= 0.0 && alpha <= 1.0)) {
        throw UsageError("alpha must be in [0, 1], got " + std::to_string(alpha));
    }
    if (g < 1) throw UsageError("g must be a positive integer, got " + std::to_string(g));
    if (d < 1) throw UsageError("d must be a positive integer, got " + std::to_string(d));
    if (rounds < 1) throw UsageError("rounds must be a positive integer, got " + std::to_string(rounds));
    if (!(attenuation_epsilon > 0.0)) {
        throw UsageError("attenuation-epsilon must be > 0, got " + std::to_string(attenuation_epsilon));
    }
    if (!(jitter_scale >= 0.0)) {
        throw UsageError("jitter scale must be >= 0, got " + std::to_string(jitter_scale));
    }
}

const SemanticCell* CellPopulation::find(std::string_view item_id) const {
    auto it = cells.find(item_id);
    return it == cells.end() ? nullptr : &it->second;
}

SemanticCell* CellPopulation::find(std::string_view item_id) {
    auto it = cells.find(item_id);
    return it == cells.end() ? nullptr : &it->second;
}

void validate_item_id(std::string_view item_id) {
    if (item_id.empty()) throw DataError("empty item id");
    if (item_id.find_first_of("\t\n\r") != std::string_view::npos) {
        throw DataError("item id contains tab or newline: '" + std::string(item_id) + "'");
    }
}

} // namespace semcell
