#include <doctest.h>

#include <cmath>
#include <random>
#include <set>

#include <json.hpp>

#include "semcell/diversity.hpp"
#include "semcell/evolve.hpp"
#include "semcell/format.hpp"
#include "semcell/geo.hpp"
#include "semcell/geojson.hpp"

#include "support/oracles.hpp"

using namespace semcell;

namespace {

QuakeEvent event_at(std::int64_t time, double lat, double lon, double mag = 5.0) {
    return QuakeEvent{time, lat, lon, 10.0, mag};
}

// n events all inside one mesh, then n in another, alternating per window.
std::vector<QuakeEvent> synthetic_events(int count) {
    std::vector<QuakeEvent> events;
    for (int i = 0; i < count; ++i) {
        const bool left = (i / 5) % 2 == 0;
        events.push_back(event_at(1000 + i * 60, left ? 35.2 : 36.2, left ? 135.2 : 136.2));
    }
    return events;
}

EvolutionConfig geo_config() {
    EvolutionConfig config;
    config.d = 2;
    config.g = 5;
    config.init_mode = InitMode::Identical;
    return config;
}

} // namespace

TEST_CASE("parse_catalog reads, validates, and sorts the event list") {
    oracles::TempDir dir;

    SUBCASE("direct parse of the documented row") {
        const std::string path = dir.file("cat.csv");
        write_text_file(path,
                        "time,lat,lon,depth,magnitude\n"
                        "2010-03-14T08:08:00Z,37.7,141.8,40,6.7\n");
        const Catalog catalog = parse_catalog(path);
        REQUIRE(catalog.events.size() == 1);
        const QuakeEvent& e = catalog.events[0];
        CHECK(e.time == parse_iso8601_utc("2010-03-14T08:08:00Z", "test"));
        CHECK(e.lat == 37.7);
        CHECK(e.lon == 141.8);
        CHECK(e.depth == 40.0);
        CHECK(e.magnitude == 6.7);
    }
    SUBCASE("rows out of time order are re-sorted ascending") {
        const std::string path = dir.file("order.csv");
        write_text_file(path,
                        "time,lat,lon,depth,magnitude\n"
                        "2011-01-01T00:00:00Z,35,135,10,5.0\n"
                        "2010-01-01T00:00:00Z,36,136,10,5.1\n");
        const Catalog catalog = parse_catalog(path);
        REQUIRE(catalog.events.size() == 2);
        CHECK(catalog.events[0].magnitude == 5.1);
        CHECK(catalog.events[1].magnitude == 5.0);
    }
    SUBCASE("out-of-range latitude names the line") {
        const std::string path = dir.file("lat.csv");
        write_text_file(path,
                        "time,lat,lon,depth,magnitude\n"
                        "2010-01-01T00:00:00Z,95,139,10,5.0\n");
        try {
            parse_catalog(path);
            FAIL("expected DataError");
        } catch (const DataError& e) {
            CHECK(std::string(e.what()).find(":2") != std::string::npos);
        }
    }
    SUBCASE("skip-bad-rows downgrades parse failures to a count") {
        const std::string path = dir.file("skip.csv");
        write_text_file(path,
                        "time,lat,lon,depth,magnitude\n"
                        "2010-01-01T00:00:00Z,35,135,10,5.0\n"
                        "not-a-time,36,136,10,5.0\n"
                        "2010-01-02T00:00:00Z,37,137,10,5.0\n");
        CHECK_THROWS_AS(parse_catalog(path), DataError);
        CatalogOptions options;
        options.skip_bad_rows = true;
        const Catalog catalog = parse_catalog(path, options);
        CHECK(catalog.events.size() == 2);
        CHECK(catalog.skipped_rows == 1);
    }
    SUBCASE("magnitude floor filters with a count") {
        const std::string path = dir.file("mag.csv");
        write_text_file(path,
                        "time,lat,lon,depth,magnitude\n"
                        "2010-01-01T00:00:00Z,35,135,10,3.0\n"
                        "2010-01-02T00:00:00Z,36,136,10,5.5\n");
        CatalogOptions options;
        options.min_magnitude = 4.0;
        const Catalog catalog = parse_catalog(path, options);
        CHECK(catalog.events.size() == 1);
        CHECK(catalog.filtered_rows == 1);
        CHECK(catalog.events[0].magnitude == 5.5);
    }
    SUBCASE("wrong header is rejected") {
        const std::string path = dir.file("hdr.csv");
        write_text_file(path, "time,latitude,lon,depth,magnitude\n");
        CHECK_THROWS_AS(parse_catalog(path), DataError);
    }
}

TEST_CASE("mesh_of implements half-open floor binning") {
    CHECK(mesh_of(event_at(0, 35.68, 139.76), 0.5) == MeshId{71, 279});
    CHECK(mesh_of(event_at(0, -0.2, 0.2), 0.5) == MeshId{-1, 0});
    CHECK(mesh_of(event_at(0, 35.5, 139.76), 0.5).i == 71);  // boundary belongs upward
    CHECK(mesh_of(event_at(0, -0.5, 0.0), 0.5).i == -1);
}

TEST_CASE("mesh_of agrees with the repeated-subtraction oracle on 1e5 coordinates") {
    std::mt19937_64 rng(31337);
    std::uniform_real_distribution<double> lat_dist(-90.0, 90.0);
    std::uniform_real_distribution<double> lon_dist(-180.0, 180.0);
    for (int i = 0; i < 100000; ++i) {
        const double lat = lat_dist(rng);
        const double lon = lon_dist(rng);
        const MeshId mesh = mesh_of(event_at(0, lat, lon), 0.5);
        REQUIRE(mesh.i == oracles::mesh_index_scan(lat, 0.5));
        REQUIRE(mesh.j == oracles::mesh_index_scan(lon, 0.5));
    }
}

TEST_CASE("mesh item ids round-trip") {
    CHECK(mesh_item_id(MeshId{71, 279}) == "71:279");
    CHECK(mesh_item_id(MeshId{-1, 0}) == "-1:0");
    CHECK(parse_mesh_item_id("71:279") == MeshId{71, 279});
    CHECK(parse_mesh_item_id("-3:-7") == MeshId{-3, -7});
    CHECK_THROWS_AS(parse_mesh_item_id("banana"), DataError);
    CHECK_THROWS_AS(parse_mesh_item_id("1:"), DataError);
}

TEST_CASE("build_geo_run forms disjoint windows and drops the partial tail") {
    GeoRunOptions options;

    SUBCASE("20 events make exactly 2 units") {
        const GeoRun run = build_geo_run(synthetic_events(20), geo_config(), options);
        CHECK(run.units.size() == 2);
        CHECK(run.dropped_tail_events == 0);
    }
    SUBCASE("25 events make 2 units and drop 5") {
        const GeoRun run = build_geo_run(synthetic_events(25), geo_config(), options);
        CHECK(run.units.size() == 2);
        CHECK(run.dropped_tail_events == 5);
    }
    SUBCASE("a single-mesh window yields a single-member unit") {
        std::vector<QuakeEvent> events;
        for (int i = 0; i < 10; ++i) events.push_back(event_at(1000 + i, 35.2, 135.2));
        const GeoRun run = build_geo_run(events, geo_config(), options);
        REQUIRE(run.units.size() == 1);
        CHECK(run.units[0].members == std::vector<std::string>{"70:270"});
    }
    SUBCASE("9 events cannot form a window") {
        try {
            build_geo_run(synthetic_events(9), geo_config(), options);
            FAIL("expected DataError");
        } catch (const DataError& e) {
            CHECK(std::string(e.what()).find("no complete co-existence unit") != std::string::npos);
        }
    }
    SUBCASE("every non-dropped event contributes to exactly one unit") {
        const auto events = synthetic_events(47);
        const GeoRun run = build_geo_run(events, geo_config(), options);
        CHECK(run.units.size() == 4);
        CHECK(run.dropped_tail_events == 7);
        for (std::size_t i = 0; i + run.dropped_tail_events < events.size(); ++i) {
            const std::string id = mesh_item_id(mesh_of(events[i], options.mesh_width));
            const auto& unit = run.units[i / 10];
            CHECK(std::find(unit.members.begin(), unit.members.end(), id) != unit.members.end());
        }
    }
    SUBCASE("sliding mode emits one unit per start position") {
        GeoRunOptions sliding = options;
        sliding.window_mode = WindowMode::Sliding;
        const GeoRun run = build_geo_run(synthetic_events(25), geo_config(), sliding);
        CHECK(run.units.size() == 16);  // 25 - 10 + 1
        CHECK(run.units[3].unit_id == 3);
    }
    SUBCASE("window size below 2 is a configuration error") {
        GeoRunOptions bad = options;
        bad.window_size = 1;
        CHECK_THROWS_AS(build_geo_run(synthetic_events(20), geo_config(), bad), UsageError);
    }
    SUBCASE("d must be 2") {
        EvolutionConfig config = geo_config();
        config.d = 3;
        CHECK_THROWS_AS(build_geo_run(synthetic_events(20), config, options), UsageError);
    }
}

TEST_CASE("geo chromosome initialization modes") {
    std::vector<QuakeEvent> events;
    // Mesh (70, 270): first event (35.2, 135.2), second (35.3, 135.3).
    for (int i = 0; i < 5; ++i) events.push_back(event_at(1000 + i, 35.2, 135.2));
    for (int i = 0; i < 5; ++i) events.push_back(event_at(2000 + i, 35.3, 135.3));

    GeoRunOptions options;
    SUBCASE("first-event") {
        const GeoRun run = build_geo_run(events, geo_config(), options);
        CHECK(run.population.find("70:270")->chromosomes[0] == Chromosome{35.2, 135.2});
        CHECK(run.base_coords.at("70:270") == std::array<double, 2>{35.2, 135.2});
    }
    SUBCASE("mesh-center") {
        options.init = GeoInitMode::MeshCenter;
        const GeoRun run = build_geo_run(events, geo_config(), options);
        CHECK(run.population.find("70:270")->chromosomes[0] == Chromosome{35.25, 135.25});
    }
    SUBCASE("event-centroid") {
        options.init = GeoInitMode::EventCentroid;
        const GeoRun run = build_geo_run(events, geo_config(), options);
        CHECK(run.population.find("70:270")->chromosomes[0][0] == doctest::Approx(35.25).epsilon(1e-12));
        CHECK(run.population.find("70:270")->chromosomes[0][1] == doctest::Approx(135.25).epsilon(1e-12));
    }
}

TEST_CASE("evolved genes stay inside the initial bounding box") {
    std::mt19937_64 rng(64);
    std::uniform_real_distribution<double> lat_dist(30.0, 40.0);
    std::uniform_real_distribution<double> lon_dist(130.0, 140.0);
    std::vector<QuakeEvent> events;
    for (int i = 0; i < 200; ++i) {
        events.push_back(event_at(1000 + i * 60, lat_dist(rng), lon_dist(rng)));
    }
    EvolutionConfig config = geo_config();
    config.alpha = 0.4;
    config.rounds = 3;
    GeoRun run = build_geo_run(events, config, {});

    double lo[2] = {1e300, 1e300};
    double hi[2] = {-1e300, -1e300};
    for (const auto& [id, cell] : run.population.cells) {
        (void)id;
        for (const auto& c : cell.chromosomes) {
            for (int k = 0; k < 2; ++k) {
                lo[k] = std::min(lo[k], c[static_cast<std::size_t>(k)]);
                hi[k] = std::max(hi[k], c[static_cast<std::size_t>(k)]);
            }
        }
    }
    evolve(run.population, run.units);
    for (const auto& [id, cell] : run.population.cells) {
        (void)id;
        for (const auto& c : cell.chromosomes) {
            for (int k = 0; k < 2; ++k) {
                CHECK(c[static_cast<std::size_t>(k)] >= lo[k]);
                CHECK(c[static_cast<std::size_t>(k)] <= hi[k]);
            }
        }
    }
}

TEST_CASE("categorize_for_map band arithmetic") {
    // 60 cells with descending diversity by construction.
    CellPopulation pop;
    pop.config.g = 5;
    pop.config.d = 2;
    std::map<std::string, std::array<double, 2>, std::less<>> base_coords;
    std::vector<DiversityRecord> ranking;
    for (int i = 0; i < 60; ++i) {
        const std::string id = std::to_string(i) + ":0";
        SemanticCell cell{id, {}};
        for (int j = 0; j < 5; ++j) {
            cell.chromosomes.push_back({static_cast<double>(i) + 0.1 * j, 0.5});
        }
        pop.cells.emplace(id, std::move(cell));
        base_coords.emplace(id, std::array<double, 2>{static_cast<double>(i) * 0.5 + 0.1, 0.2});
        ranking.push_back({id, 100.0 - i, i + 1});
    }

    SUBCASE("default bands: 15 red, 35 orange, 250 blue") {
        const MapCategories cats = categorize_for_map(ranking, pop, base_coords, 15, 50);
        CHECK(cats.red.size() == 15);
        CHECK(cats.orange.size() == 35);
        CHECK(cats.blue.size() == 250);
        CHECK(!cats.bands_shrunk);

        // Red and orange are disjoint rank bands carrying original coordinates.
        std::set<std::string> red_ids;
        for (const auto& f : cats.red) {
            red_ids.insert(mesh_item_id(f.mesh));
            CHECK(f.rank <= 15);
            const auto& base = base_coords.at(mesh_item_id(f.mesh));
            CHECK(f.lat == base[0]);
            CHECK(f.lon == base[1]);
        }
        for (const auto& f : cats.orange) {
            CHECK(f.rank > 15);
            CHECK(f.rank <= 50);
            CHECK(!red_ids.count(mesh_item_id(f.mesh)));
        }
        // Every blue point is a chromosome value present in the evolved population.
        for (const auto& f : cats.blue) {
            const SemanticCell* cell = pop.find(mesh_item_id(f.mesh));
            REQUIRE(cell != nullptr);
            REQUIRE(f.chromosome_index >= 0);
            const Chromosome& c = cell->chromosomes[static_cast<std::size_t>(f.chromosome_index)];
            CHECK(f.lat == c[0]);
            CHECK(f.lon == c[1]);
        }
    }
    SUBCASE("tiny bands") {
        CellPopulation two;
        two.config.g = 2;
        two.config.d = 2;
        two.cells.emplace("0:0", SemanticCell{"0:0", {{0.0, 0.0}, {1.0, 1.0}}});
        two.cells.emplace("1:1", SemanticCell{"1:1", {{2.0, 2.0}, {3.0, 3.0}}});
        std::map<std::string, std::array<double, 2>, std::less<>> coords{
            {"0:0", {0.1, 0.1}}, {"1:1", {1.1, 1.1}}};
        const std::vector<DiversityRecord> two_ranking{{"0:0", 2.0, 1}, {"1:1", 1.0, 2}};
        const MapCategories cats = categorize_for_map(two_ranking, two, coords, 1, 1);
        CHECK(cats.red.size() == 1);
        CHECK(cats.orange.empty());
        CHECK(cats.blue.size() == 2);
    }
    SUBCASE("fewer cells than top_orange shrinks the bands") {
        std::vector<DiversityRecord> short_ranking(ranking.begin(), ranking.begin() + 20);
        const MapCategories cats = categorize_for_map(short_ranking, pop, base_coords, 15, 50);
        CHECK(cats.bands_shrunk);
        CHECK(cats.red.size() == 15);
        CHECK(cats.orange.size() == 5);
        CHECK(cats.blue.size() == 100);
    }
    SUBCASE("invalid band bounds are a configuration error") {
        CHECK_THROWS_AS(categorize_for_map(ranking, pop, base_coords, 10, 5), UsageError);
        CHECK_THROWS_AS(categorize_for_map(ranking, pop, base_coords, -1, 5), UsageError);
    }
}

TEST_CASE("geojson export is a valid FeatureCollection in (lon, lat) order") {
    CellPopulation pop;
    pop.config.g = 2;
    pop.config.d = 2;
    pop.cells.emplace("71:279", SemanticCell{"71:279", {{35.6, 139.8}, {35.7, 139.9}}});
    std::map<std::string, std::array<double, 2>, std::less<>> coords{{"71:279", {35.68, 139.76}}};
    const std::vector<DiversityRecord> ranking{{"71:279", 0.015, 1}};
    const MapCategories cats = categorize_for_map(ranking, pop, coords, 1, 1);

    const nlohmann::json doc = nlohmann::json::parse(map_categories_to_geojson(cats));
    CHECK(doc.at("type") == "FeatureCollection");
    REQUIRE(doc.at("features").size() == 3);  // 1 red + 2 blue

    const auto& red = doc["features"][0];
    CHECK(red.at("type") == "Feature");
    CHECK(red["geometry"].at("type") == "Point");
    // GeoJSON order is (lon, lat); the engine stores (lat, lon).
    CHECK(red["geometry"]["coordinates"][0].get<double>() == 139.76);
    CHECK(red["geometry"]["coordinates"][1].get<double>() == 35.68);
    CHECK(red["properties"].at("category") == "red");
    CHECK(red["properties"].at("mesh_i") == 71);
    CHECK(red["properties"].at("mesh_j") == 279);
    CHECK(red["properties"].contains("div"));
    CHECK(red["properties"].contains("rank"));
    CHECK(!red["properties"].contains("chromosome_index"));

    const auto& blue = doc["features"][1];
    CHECK(blue["properties"].at("category") == "blue");
    CHECK(blue["properties"].at("chromosome_index") == 0);
    CHECK(!blue["properties"].contains("div"));
    CHECK(blue["geometry"]["coordinates"][0].get<double>() == 139.8);
    CHECK(blue["geometry"]["coordinates"][1].get<double>() == 35.6);
}

TEST_CASE("hindcast rejects evaluation events inside the training window") {
    const std::vector<DiversityRecord> ranking{{"71:279", 1.0, 1}};
    const std::vector<QuakeEvent> overlap{event_at(1000, 35.6, 139.8, 6.5)};
    CHECK_THROWS_AS(hindcast(ranking, overlap, 0.5, 1000, 6.0, 86400, 1), DataError);
    CHECK_THROWS_AS(hindcast(ranking, overlap, 0.5, 2000, 6.0, 86400, 1), DataError);
    CHECK_NOTHROW(hindcast(ranking, overlap, 0.5, 999, 6.0, 86400, 1));
}

TEST_CASE("hindcast handles the empty and degenerate cases") {
    const std::vector<DiversityRecord> ranking{{"71:279", 1.0, 1}, {"10:10", 0.5, 2}};

    SUBCASE("no future events at all") {
        const HindcastReport report = hindcast(ranking, {}, 0.5, 0, 6.0, 86400, 2);
        CHECK(report.qualifying_event_count == 0);
        CHECK(report.precision_same_mesh == 0.0);
        CHECK(report.precision_adjacent == 0.0);
        CHECK(!report.recall_defined);
        for (const auto& cell : report.per_cell) CHECK(cell.match_class == "miss");
    }
    SUBCASE("future events all below the threshold") {
        const std::vector<QuakeEvent> weak{event_at(100, 35.6, 139.8, 5.9)};
        const HindcastReport report = hindcast(ranking, weak, 0.5, 0, 6.0, 86400, 2);
        CHECK(report.qualifying_event_count == 0);
        CHECK(!report.recall_defined);
    }
    SUBCASE("top-n clamps to the ranking size") {
        const std::vector<QuakeEvent> future{event_at(100, 35.6, 139.8, 6.5)};
        const HindcastReport report = hindcast(ranking, future, 0.5, 0, 6.0, 86400, 10);
        CHECK(report.clamped);
        CHECK(report.top_n_requested == 10);
        CHECK(report.top_n_used == 2);
    }
    SUBCASE("top-1 same-mesh hit gives precision 1.0") {
        const std::vector<DiversityRecord> top1{{"71:279", 1.0, 1}};
        const std::vector<QuakeEvent> future{event_at(100, 35.68, 139.76, 6.7)};
        const HindcastReport report = hindcast(top1, future, 0.5, 0, 6.0, 86400, 1);
        CHECK(report.precision_same_mesh == 1.0);
        CHECK(report.precision_adjacent == 1.0);
        CHECK(report.recall == 1.0);
        CHECK(report.recall_defined);
        REQUIRE(report.per_cell.size() == 1);
        CHECK(report.per_cell[0].match_class == "same-mesh");
        REQUIRE(report.per_cell[0].matched_event.has_value());
        CHECK(report.per_cell[0].matched_event->magnitude == 6.7);
    }
    SUBCASE("events beyond the horizon do not qualify") {
        const std::vector<QuakeEvent> late{event_at(86400 * 3, 35.68, 139.76, 6.7)};
        const HindcastReport report = hindcast(ranking, late, 0.5, 0, 6.0, 86400 * 2, 2);
        CHECK(report.qualifying_event_count == 0);
    }
}

TEST_CASE("hindcast matches the brute-force oracle on a mixed fixture") {
    // Meshes: ranks 1 and 2 are same-mesh hits, rank 3 misses, rank 4 is
    // adjacent to the same event rank 2 contains, rank 5 misses.
    const std::vector<DiversityRecord> ranking{
        {"71:279", 5.0, 1}, {"80:100", 4.0, 2}, {"-40:-40", 3.0, 3},
        {"79:99", 2.0, 4},  {"0:0", 1.0, 5},
    };
    std::vector<QuakeEvent> future{
        event_at(5000, 35.68, 139.76, 6.7),   // inside 71:279
        event_at(4000, 40.3, 50.3, 6.1),      // inside 80:100, adjacent for 79:99
        event_at(6000, 10.0, 10.0, 7.0),      // mesh (20,20): nobody's neighbor
        event_at(7000, 35.9, 139.9, 5.0),     // below threshold
        event_at(400000000, 35.68, 139.76, 8.0),  // beyond horizon
    };
    const std::int64_t train_end = 1000;
    const std::int64_t horizon = 86400 * 365;

    const HindcastReport got = hindcast(ranking, future, 0.5, train_end, 6.0, horizon, 5);
    const oracles::BruteHindcast want =
        oracles::brute_hindcast(ranking, future, 0.5, train_end, 6.0, horizon, 5);

    CHECK(got.qualifying_event_count == want.qualifying);
    CHECK(got.top_n_used == want.top_n_used);
    REQUIRE(got.per_cell.size() == want.match_class.size());
    for (std::size_t i = 0; i < want.match_class.size(); ++i) {
        CHECK(got.per_cell[i].match_class == want.match_class[i]);
        CHECK(got.per_cell[i].matched_event.has_value() == want.matched_time[i].has_value());
        if (want.matched_time[i]) {
            CHECK(got.per_cell[i].matched_event->time == *want.matched_time[i]);
        }
    }
    CHECK(got.precision_same_mesh == want.precision_same_mesh);
    CHECK(got.precision_adjacent == want.precision_adjacent);
    CHECK(got.recall == want.recall);
    CHECK(got.recall_defined == want.recall_defined);

    // Sanity against hand counts: 3 qualifying events; same-mesh hits
    // {rank 1, rank 2}; rank 4 adds an adjacent hit; 2 of the 3 qualifying
    // events sit in some top cell's neighborhood.
    CHECK(got.qualifying_event_count == 3);
    CHECK(got.precision_same_mesh == doctest::Approx(2.0 / 5.0));
    CHECK(got.precision_adjacent == doctest::Approx(3.0 / 5.0));
    CHECK(got.recall == doctest::Approx(2.0 / 3.0));
}
