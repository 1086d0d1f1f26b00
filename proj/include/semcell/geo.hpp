#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "semcell/diversity.hpp"
#include "semcell/types.hpp"

namespace semcell {

struct QuakeEvent {
    std::int64_t time = 0;  // seconds since Unix epoch, UTC
    double lat = 0.0;       // degrees, [-90, 90]
    double lon = 0.0;       // degrees, [-180, 180]
    double depth = 0.0;     // km; carried, unused by the algorithm
    double magnitude = 0.0;
};

// Half-open mesh cell indices: (floor(lat/width), floor(lon/width)).
struct MeshId {
    std::int64_t i = 0;
    std::int64_t j = 0;
    friend bool operator==(const MeshId&, const MeshId&) = default;
    friend auto operator<=>(const MeshId&, const MeshId&) = default;
};

// Canonical item id string for a mesh, "i:j" (e.g. "71:279", "-1:0").
std::string mesh_item_id(MeshId mesh);
MeshId parse_mesh_item_id(std::string_view item_id);

MeshId mesh_of(const QuakeEvent& event, double width);

struct CatalogOptions {
    bool skip_bad_rows = false;            // downgrade unparseable rows to counted warnings
    std::optional<double> min_magnitude;   // ingestion floor, off by default
};

struct Catalog {
    std::vector<QuakeEvent> events;  // sorted ascending by time (stable)
    std::size_t skipped_rows = 0;
    std::size_t filtered_rows = 0;   // dropped by min_magnitude
};

// CSV with header "time,lat,lon,depth,magnitude"; time ISO-8601 UTC.
Catalog parse_catalog(const std::string& path, const CatalogOptions& options = {});

enum class GeoInitMode { FirstEvent, MeshCenter, EventCentroid };
enum class WindowMode { Disjoint, Sliding };

GeoInitMode geo_init_mode_from_string(std::string_view s);
const char* to_string(GeoInitMode mode);

struct GeoRunOptions {
    int window_size = 10;
    double mesh_width = 0.5;
    WindowMode window_mode = WindowMode::Disjoint;
    GeoInitMode init = GeoInitMode::FirstEvent;
};

struct GeoRun {
    CellPopulation population;              // pre-evolution, d = 2, genes (lat, lon)
    std::vector<CoexistenceUnit> units;     // one per event window, in time order
    // Pre-evolution representative coordinates per mesh item (lat, lon).
    std::map<std::string, std::array<double, 2>, std::less<>> base_coords;
    std::size_t dropped_tail_events = 0;
    std::size_t event_count = 0;
    std::int64_t first_event_time = 0;
    std::int64_t last_event_time = 0;
};

// One cell per mesh with at least one event; units are blocks of
// `window_size` consecutive events (distinct mesh ids, first-occurrence
// order), trailing partial block dropped. config.d must be 2.
GeoRun build_geo_run(const std::vector<QuakeEvent>& events, const EvolutionConfig& config,
                     const GeoRunOptions& options = {});

struct MapFeature {
    std::string category;  // "red" | "orange" | "blue"
    MeshId mesh;
    double lat = 0.0;
    double lon = 0.0;
    int rank = 0;              // red/orange
    double div = 0.0;          // red/orange
    int chromosome_index = -1; // blue
};

struct MapCategories {
    std::vector<MapFeature> red;     // original coordinates of ranks 1..top_red
    std::vector<MapFeature> orange;  // original coordinates of ranks top_red+1..top_orange
    std::vector<MapFeature> blue;    // post-evolution chromosomes of the top_orange cells
    bool bands_shrunk = false;       // fewer cells than top_orange
};

// Map categorization: red/orange carry pre-evolution coordinates and
// div; blue carries every post-evolution chromosome of the top band. With
// fewer cells than top_orange the bands shrink to what exists.
MapCategories categorize_for_map(const std::vector<DiversityRecord>& ranking,
                                 const CellPopulation& evolved,
                                 const std::map<std::string, std::array<double, 2>, std::less<>>& base_coords,
                                 int top_red, int top_orange);

struct HindcastCellOutcome {
    MeshId mesh;
    int rank = 0;
    double div = 0.0;
    std::string match_class;  // "same-mesh" | "adjacent-mesh" | "miss"
    std::optional<QuakeEvent> matched_event;
};

struct HindcastReport {
    std::vector<HindcastCellOutcome> per_cell;
    double precision_same_mesh = 0.0;
    double precision_adjacent = 0.0;  // same or adjacent mesh
    double recall = 0.0;
    bool recall_defined = false;
    std::size_t qualifying_event_count = 0;
    int top_n_requested = 0;
    int top_n_used = 0;
    bool clamped = false;
    double mag_threshold = 0.0;
    std::int64_t horizon_seconds = 0;
    std::int64_t train_end_time = 0;
    double mesh_width = 0.5;
};

// Checks whether top-ranked meshes precede qualifying future events
// (magnitude >= threshold, within the horizon after the training window).
// A cell hits on its own mesh or one of its 8 neighbors. Evaluation events
// at or before the end of the training window are a hard error.
HindcastReport hindcast(const std::vector<DiversityRecord>& ranking,
                        const std::vector<QuakeEvent>& future_events,
                        double mesh_width,
                        std::int64_t train_end_time,
                        double mag_threshold,
                        std::int64_t horizon_seconds,
                        int top_n);

} // namespace semcell
