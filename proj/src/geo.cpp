#include "semcell/geo.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <set>

#include "semcell/evolve.hpp"
#include "semcell/format.hpp"

namespace semcell {

std::string mesh_item_id(MeshId mesh) {
    return std::to_string(mesh.i) + ":" + std::to_string(mesh.j);
}

MeshId parse_mesh_item_id(std::string_view item_id) {
    const std::size_t colon = item_id.find(':');
    if (colon == std::string_view::npos) {
        throw DataError("bad mesh item id '" + std::string(item_id) + "', expected 'i:j'");
    }
    MeshId mesh;
    mesh.i = parse_int64(item_id.substr(0, colon), "mesh item id");
    mesh.j = parse_int64(item_id.substr(colon + 1), "mesh item id");
    return mesh;
}

MeshId mesh_of(const QuakeEvent& event, double width) {
    if (!(width > 0.0)) throw UsageError("mesh width must be > 0");
    return MeshId{static_cast<std::int64_t>(std::floor(event.lat / width)),
                  static_cast<std::int64_t>(std::floor(event.lon / width))};
}

Catalog parse_catalog(const std::string& path, const CatalogOptions& options) {
    const std::string content = read_text_file(path);
    Catalog catalog;

    std::size_t pos = 0;
    std::size_t line_number = 0;
    bool header_seen = false;
    while (pos < content.size()) {
        std::size_t eol = content.find('\n', pos);
        if (eol == std::string::npos) eol = content.size();
        std::string_view line(content.data() + pos, eol - pos);
        if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
        pos = eol + 1;
        ++line_number;
        if (trim(line).empty()) continue;
        const std::string context = path + ":" + std::to_string(line_number);

        if (!header_seen) {
            std::string header(trim(line));
            if (header != "time,lat,lon,depth,magnitude") {
                throw DataError(context + ": expected header 'time,lat,lon,depth,magnitude', got '" +
                                header + "'");
            }
            header_seen = true;
            continue;
        }

        try {
            const auto fields = csv_split_line(line, context);
            if (fields.size() != 5) {
                throw DataError(context + ": expected 5 fields, found " + std::to_string(fields.size()));
            }
            QuakeEvent event;
            event.time = parse_iso8601_utc(trim(fields[0]), context);
            event.lat = parse_double(trim(fields[1]), context + " lat");
            event.lon = parse_double(trim(fields[2]), context + " lon");
            event.depth = parse_double(trim(fields[3]), context + " depth");
            event.magnitude = parse_double(trim(fields[4]), context + " magnitude");
            if (!(event.lat >= -90.0 && event.lat <= 90.0)) {
                throw DataError(context + ": latitude " + fmt_double_shortest(event.lat) +
                                " out of [-90, 90]");
            }
            if (!(event.lon >= -180.0 && event.lon <= 180.0)) {
                throw DataError(context + ": longitude " + fmt_double_shortest(event.lon) +
                                " out of [-180, 180]");
            }
            if (!(event.depth >= 0.0)) {
                throw DataError(context + ": depth " + fmt_double_shortest(event.depth) +
                                " must be >= 0");
            }
            if (!std::isfinite(event.magnitude)) {
                throw DataError(context + ": non-finite magnitude");
            }
            if (options.min_magnitude && event.magnitude < *options.min_magnitude) {
                ++catalog.filtered_rows;
                continue;
            }
            catalog.events.push_back(event);
        } catch (const DataError&) {
            if (!options.skip_bad_rows) throw;
            ++catalog.skipped_rows;
        }
    }
    if (!header_seen) throw DataError(path + ": empty catalog file");

    std::stable_sort(catalog.events.begin(), catalog.events.end(),
                     [](const QuakeEvent& a, const QuakeEvent& b) { return a.time < b.time; });
    return catalog;
}

GeoInitMode geo_init_mode_from_string(std::string_view s) {
    if (s == "first-event") return GeoInitMode::FirstEvent;
    if (s == "mesh-center") return GeoInitMode::MeshCenter;
    if (s == "event-centroid") return GeoInitMode::EventCentroid;
    throw UsageError("unknown geo init mode '" + std::string(s) +
                     "' (expected first-event, mesh-center or event-centroid)");
}

const char* to_string(GeoInitMode mode) {
    switch (mode) {
        case GeoInitMode::FirstEvent: return "first-event";
        case GeoInitMode::MeshCenter: return "mesh-center";
        default: return "event-centroid";
    }
}

GeoRun build_geo_run(const std::vector<QuakeEvent>& events, const EvolutionConfig& config,
                     const GeoRunOptions& options) {
    config.validate();
    if (config.d != 2) {
        throw UsageError("geo runs require d=2 (lat, lon), got d=" + std::to_string(config.d));
    }
    if (options.window_size < 2) {
        throw UsageError("window size must be >= 2, got " + std::to_string(options.window_size));
    }
    if (!(options.mesh_width > 0.0)) throw UsageError("mesh width must be > 0");

    GeoRun run;
    run.event_count = events.size();
    if (events.empty()) {
        throw DataError("no events: no complete co-existence unit can be formed");
    }
    run.first_event_time = events.front().time;
    run.last_event_time = events.back().time;

    // per-mesh accumulators for the init modes
    struct MeshAccum {
        double first_lat = 0.0, first_lon = 0.0;
        double sum_lat = 0.0, sum_lon = 0.0;
        std::size_t count = 0;
    };
    std::map<std::string, MeshAccum, std::less<>> meshes;

    std::vector<std::string> event_mesh_ids;
    event_mesh_ids.reserve(events.size());
    for (const auto& event : events) {
        const MeshId mesh = mesh_of(event, options.mesh_width);
        std::string id = mesh_item_id(mesh);
        auto [it, inserted] = meshes.try_emplace(id);
        MeshAccum& accum = it->second;
        if (inserted) {
            accum.first_lat = event.lat;
            accum.first_lon = event.lon;
        }
        accum.sum_lat += event.lat;
        accum.sum_lon += event.lon;
        ++accum.count;
        event_mesh_ids.push_back(std::move(id));
    }

    const std::size_t n = static_cast<std::size_t>(options.window_size);
    if (options.window_mode == WindowMode::Disjoint) {
        const std::size_t complete = events.size() / n;
        run.dropped_tail_events = events.size() - complete * n;
        for (std::size_t b = 0; b < complete; ++b) {
            std::vector<std::string> raw(event_mesh_ids.begin() + static_cast<std::ptrdiff_t>(b * n),
                                         event_mesh_ids.begin() + static_cast<std::ptrdiff_t>((b + 1) * n));
            run.units.push_back(make_unit(b, raw));
        }
    } else {
        if (events.size() >= n) {
            for (std::size_t start = 0; start + n <= events.size(); ++start) {
                std::vector<std::string> raw(event_mesh_ids.begin() + static_cast<std::ptrdiff_t>(start),
                                             event_mesh_ids.begin() + static_cast<std::ptrdiff_t>(start + n));
                run.units.push_back(make_unit(start, raw));
            }
        }
    }
    if (run.units.empty()) {
        throw DataError("no complete co-existence unit: " + std::to_string(events.size()) +
                        " events with window size " + std::to_string(options.window_size));
    }

    std::map<std::string, Chromosome, std::less<>> base_vectors;
    for (const auto& [id, accum] : meshes) {
        double lat = accum.first_lat;
        double lon = accum.first_lon;
        if (options.init == GeoInitMode::MeshCenter) {
            const MeshId mesh = parse_mesh_item_id(id);
            lat = (static_cast<double>(mesh.i) + 0.5) * options.mesh_width;
            lon = (static_cast<double>(mesh.j) + 0.5) * options.mesh_width;
        } else if (options.init == GeoInitMode::EventCentroid) {
            lat = accum.sum_lat / static_cast<double>(accum.count);
            lon = accum.sum_lon / static_cast<double>(accum.count);
        }
        base_vectors.emplace(id, Chromosome{lat, lon});
        run.base_coords.emplace(id, std::array<double, 2>{lat, lon});
    }

    run.population = initialize_cells(base_vectors, config);
    return run;
}

MapCategories categorize_for_map(const std::vector<DiversityRecord>& ranking,
                                 const CellPopulation& evolved,
                                 const std::map<std::string, std::array<double, 2>, std::less<>>& base_coords,
                                 int top_red, int top_orange) {
    if (top_red < 0 || top_orange < top_red) {
        throw UsageError("require 0 <= top_red <= top_orange, got top_red=" + std::to_string(top_red) +
                         " top_orange=" + std::to_string(top_orange));
    }
    MapCategories out;
    const int n = static_cast<int>(ranking.size());
    int red_band = top_red;
    int orange_band = top_orange;
    if (orange_band > n) {
        orange_band = n;
        red_band = std::min(red_band, n);
        out.bands_shrunk = true;
    }

    for (int idx = 0; idx < orange_band; ++idx) {
        const DiversityRecord& record = ranking[static_cast<std::size_t>(idx)];
        const auto coord_it = base_coords.find(record.item_id);
        if (coord_it == base_coords.end()) {
            throw DataError("no original coordinates for item '" + record.item_id + "'");
        }
        MapFeature feature;
        feature.category = idx < red_band ? "red" : "orange";
        feature.mesh = parse_mesh_item_id(record.item_id);
        feature.lat = coord_it->second[0];
        feature.lon = coord_it->second[1];
        feature.rank = record.rank;
        feature.div = record.div;
        (idx < red_band ? out.red : out.orange).push_back(std::move(feature));
    }

    for (int idx = 0; idx < orange_band; ++idx) {
        const DiversityRecord& record = ranking[static_cast<std::size_t>(idx)];
        const SemanticCell* cell = evolved.find(record.item_id);
        if (cell == nullptr) {
            throw DataError("ranked item '" + record.item_id + "' is missing from the population");
        }
        for (std::size_t j = 0; j < cell->chromosomes.size(); ++j) {
            MapFeature feature;
            feature.category = "blue";
            feature.mesh = parse_mesh_item_id(record.item_id);
            feature.lat = cell->chromosomes[j][0];
            feature.lon = cell->chromosomes[j][1];
            feature.rank = record.rank;
            feature.chromosome_index = static_cast<int>(j);
            out.blue.push_back(std::move(feature));
        }
    }
    return out;
}

HindcastReport hindcast(const std::vector<DiversityRecord>& ranking,
                        const std::vector<QuakeEvent>& future_events,
                        double mesh_width,
                        std::int64_t train_end_time,
                        double mag_threshold,
                        std::int64_t horizon_seconds,
                        int top_n) {
    if (top_n < 1) throw UsageError("top-n must be >= 1, got " + std::to_string(top_n));
    if (horizon_seconds <= 0) throw UsageError("horizon must be positive");
    if (!(mesh_width > 0.0)) throw UsageError("mesh width must be > 0");

    for (const auto& event : future_events) {
        if (event.time <= train_end_time) {
            throw DataError("evaluation event at " + format_iso8601_utc(event.time) +
                            " overlaps the training window (ends " +
                            format_iso8601_utc(train_end_time) + ")");
        }
    }

    HindcastReport report;
    report.top_n_requested = top_n;
    report.mag_threshold = mag_threshold;
    report.horizon_seconds = horizon_seconds;
    report.train_end_time = train_end_time;
    report.mesh_width = mesh_width;

    if (top_n > static_cast<int>(ranking.size())) {
        top_n = static_cast<int>(ranking.size());
        report.clamped = true;
    }
    report.top_n_used = top_n;

    std::vector<QuakeEvent> qualifying;
    for (const auto& event : future_events) {
        if (event.magnitude >= mag_threshold && event.time <= train_end_time + horizon_seconds) {
            qualifying.push_back(event);
        }
    }
    std::stable_sort(qualifying.begin(), qualifying.end(),
                     [](const QuakeEvent& a, const QuakeEvent& b) { return a.time < b.time; });
    report.qualifying_event_count = qualifying.size();

    std::vector<MeshId> qualifying_meshes;
    qualifying_meshes.reserve(qualifying.size());
    for (const auto& event : qualifying) {
        qualifying_meshes.push_back(mesh_of(event, mesh_width));
    }

    std::set<MeshId> top_set;
    std::size_t same_hits = 0;
    std::size_t adjacent_hits = 0;
    for (int idx = 0; idx < top_n; ++idx) {
        const DiversityRecord& record = ranking[static_cast<std::size_t>(idx)];
        const MeshId cell_mesh = parse_mesh_item_id(record.item_id);
        top_set.insert(cell_mesh);

        HindcastCellOutcome outcome;
        outcome.mesh = cell_mesh;
        outcome.rank = record.rank;
        outcome.div = record.div;
        outcome.match_class = "miss";
        for (std::size_t e = 0; e < qualifying.size(); ++e) {
            if (qualifying_meshes[e] == cell_mesh) {
                outcome.match_class = "same-mesh";
                outcome.matched_event = qualifying[e];
                break;
            }
        }
        if (outcome.match_class == "miss") {
            for (std::size_t e = 0; e < qualifying.size(); ++e) {
                const MeshId m = qualifying_meshes[e];
                if (std::llabs(m.i - cell_mesh.i) <= 1 && std::llabs(m.j - cell_mesh.j) <= 1) {
                    outcome.match_class = "adjacent-mesh";
                    outcome.matched_event = qualifying[e];
                    break;
                }
            }
        }
        if (outcome.match_class == "same-mesh") ++same_hits;
        if (outcome.match_class == "same-mesh" || outcome.match_class == "adjacent-mesh") ++adjacent_hits;
        report.per_cell.push_back(std::move(outcome));
    }

    if (top_n > 0) {
        report.precision_same_mesh = static_cast<double>(same_hits) / static_cast<double>(top_n);
        report.precision_adjacent = static_cast<double>(adjacent_hits) / static_cast<double>(top_n);
    }

    if (!qualifying.empty()) {
        std::size_t recalled = 0;
        for (const MeshId& m : qualifying_meshes) {
            bool hit = false;
            for (std::int64_t di = -1; di <= 1 && !hit; ++di) {
                for (std::int64_t dj = -1; dj <= 1 && !hit; ++dj) {
                    if (top_set.count(MeshId{m.i + di, m.j + dj}) != 0) hit = true;
                }
            }
            if (hit) ++recalled;
        }
        report.recall = static_cast<double>(recalled) / static_cast<double>(qualifying.size());
        report.recall_defined = true;
    }
    return report;
}

} // namespace semcell
