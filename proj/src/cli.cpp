#include "semcell/cli.hpp"

#include <filesystem>
#include <iostream>
#include <map>
#include <set>
#include <utility>

#include <json.hpp>

#include "semcell/format.hpp"
#include "semcell/geo.hpp"
#include "semcell/geojson.hpp"
#include "semcell/manifest.hpp"
#include "semcell/snapshot.hpp"
#include "semcell/text.hpp"
#include "semcell/version.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace semcell::cli {

namespace {

void log_line(const std::string& message) {
    std::cerr << "semcell: " << message << "\n";
}

std::string join_path(const std::string& dir, const char* name) {
    return (fs::path(dir) / name).string();
}

void add_input(RunManifest& manifest, const char* role, const std::string& path) {
    manifest.inputs.push_back({role, path, sha256_file(path)});
}

WindowMode window_mode_from_name(const std::string& s) {
    if (s == "disjoint") return WindowMode::Disjoint;
    if (s == "sliding") return WindowMode::Sliding;
    throw UsageError("unknown window mode '" + s + "' (expected disjoint|sliding)");
}

MissingTokenPolicy missing_policy_from_name(const std::string& s) {
    if (s == "skip-token") return MissingTokenPolicy::SkipToken;
    if (s == "error") return MissingTokenPolicy::Error;
    throw UsageError("unknown missing-token policy '" + s + "' (expected skip-token|error)");
}

json config_to_json(const EvolutionConfig& config) {
    return json{
        {"alpha", config.alpha},
        {"g", config.g},
        {"dim", config.d},
        {"rounds", config.rounds},
        {"distance_mode", to_string(config.distance_mode)},
        {"attenuation_epsilon", config.attenuation_epsilon},
        {"seed", config.seed},
        {"init_mode", to_string(config.init_mode)},
        {"jitter", config.jitter_scale},
        {"tie_break", EvolutionConfig::tie_break},
    };
}

EvolutionConfig config_from_json(const json& j) {
    EvolutionConfig config;
    config.alpha = j.at("alpha").get<double>();
    config.g = j.at("g").get<int>();
    config.d = j.at("dim").get<int>();
    config.rounds = j.at("rounds").get<int>();
    config.distance_mode = distance_mode_from_string(j.at("distance_mode").get<std::string>());
    config.attenuation_epsilon = j.at("attenuation_epsilon").get<double>();
    config.seed = j.at("seed").get<std::uint64_t>();
    config.init_mode = init_mode_from_string(j.at("init_mode").get<std::string>());
    config.jitter_scale = j.at("jitter").get<double>();
    return config;
}

json optional_string(const std::string& s) {
    return s.empty() ? json(nullptr) : json(s);
}

std::string string_or_empty(const json& j) {
    return j.is_null() ? std::string() : j.get<std::string>();
}

// Sentence units over the raw corpus, before any stoplist or embedding
// filtering. Used to collect the vocabulary for the built-in initializer; the
// resulting table may cover a superset of the final vocabulary, which is
// harmless.
std::vector<CoexistenceUnit> raw_sentence_units(const std::vector<std::string>& texts) {
    std::vector<CoexistenceUnit> units;
    std::size_t unit_id = 0;
    for (const auto& text : texts) {
        for (const auto& sentence : segment_sentences(text)) {
            const auto tokens = tokenize(sentence);
            if (!tokens.empty()) units.push_back(make_unit(unit_id++, tokens));
        }
    }
    return units;
}

std::map<std::string, int> parse_labels_csv(const std::string& path) {
    const std::string content = read_text_file(path);
    std::map<std::string, int> labels;
    std::size_t line_number = 0;
    std::size_t pos = 0;
    bool header_seen = false;
    while (pos <= content.size()) {
        const std::size_t eol = content.find('\n', pos);
        std::string_view line(content.data() + pos,
                              (eol == std::string::npos ? content.size() : eol) - pos);
        pos = (eol == std::string::npos) ? content.size() + 1 : eol + 1;
        ++line_number;
        if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
        if (line.empty()) continue;
        const std::string context = path + ":" + std::to_string(line_number);
        if (!header_seen) {
            if (trim(line) != "item,label") {
                throw DataError(context + ": expected header 'item,label', got '" +
                                std::string(line) + "'");
            }
            header_seen = true;
            continue;
        }
        const auto fields = csv_split_line(line, context);
        if (fields.size() != 2) {
            throw DataError(context + ": expected 2 fields, found " + std::to_string(fields.size()));
        }
        validate_item_id(fields[0]);
        const std::int64_t label = parse_int64(fields[1], context + ": label");
        if (label != 0 && label != 1) {
            throw DataError(context + ": label must be 0 or 1, got " + std::to_string(label));
        }
        if (!labels.emplace(fields[0], static_cast<int>(label)).second) {
            throw DataError(context + ": duplicate label for item '" + fields[0] + "'");
        }
    }
    if (!header_seen) throw DataError(path + ": empty labels file");
    return labels;
}

json event_to_json(const QuakeEvent& event) {
    return json{
        {"time", format_iso8601_utc(event.time)},
        {"lat", event.lat},
        {"lon", event.lon},
        {"depth", event.depth},
        {"magnitude", event.magnitude},
    };
}

std::string hindcast_report_to_json(const HindcastReport& report, int horizon_days) {
    json cells = json::array();
    for (const auto& outcome : report.per_cell) {
        json cell{
            {"rank", outcome.rank},
            {"item", mesh_item_id(outcome.mesh)},
            {"mesh_i", outcome.mesh.i},
            {"mesh_j", outcome.mesh.j},
            {"div", outcome.div},
            {"match_class", outcome.match_class},
            {"matched_event",
             outcome.matched_event ? event_to_json(*outcome.matched_event) : json(nullptr)},
        };
        cells.push_back(std::move(cell));
    }
    json doc{
        {"per_cell", std::move(cells)},
        {"precision_same_mesh", report.precision_same_mesh},
        {"precision_adjacent", report.precision_adjacent},
        {"recall", report.recall_defined ? json(report.recall) : json(nullptr)},
        {"recall_defined", report.recall_defined},
        {"qualifying_event_count", report.qualifying_event_count},
        {"top_n_requested", report.top_n_requested},
        {"top_n_used", report.top_n_used},
        {"clamped", report.clamped},
        {"mag_threshold", report.mag_threshold},
        {"horizon_days", horizon_days},
        {"mesh_width", report.mesh_width},
        {"train_end_utc", format_iso8601_utc(report.train_end_time)},
    };
    return doc.dump(2) + "\n";
}

} // namespace

std::string ranking_to_csv(const std::vector<DiversityRecord>& ranking) {
    std::string out = "rank,item,div\n";
    for (const auto& record : ranking) {
        out += std::to_string(record.rank);
        out += ',';
        out += csv_escape(record.item_id);
        out += ',';
        out += fmt_double_sig6(record.div);
        out += '\n';
    }
    return out;
}

std::vector<DiversityRecord> parse_ranking_csv(const std::string& path) {
    const std::string content = read_text_file(path);
    std::vector<DiversityRecord> ranking;
    std::size_t line_number = 0;
    std::size_t pos = 0;
    bool header_seen = false;
    while (pos <= content.size()) {
        const std::size_t eol = content.find('\n', pos);
        std::string_view line(content.data() + pos,
                              (eol == std::string::npos ? content.size() : eol) - pos);
        pos = (eol == std::string::npos) ? content.size() + 1 : eol + 1;
        ++line_number;
        if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
        if (line.empty()) continue;
        const std::string context = path + ":" + std::to_string(line_number);
        if (!header_seen) {
            if (trim(line) != "rank,item,div") {
                throw DataError(context + ": expected header 'rank,item,div', got '" +
                                std::string(line) + "'");
            }
            header_seen = true;
            continue;
        }
        const auto fields = csv_split_line(line, context);
        if (fields.size() != 3) {
            throw DataError(context + ": expected 3 fields, found " + std::to_string(fields.size()));
        }
        DiversityRecord record;
        record.rank = static_cast<int>(parse_int64(fields[0], context + ": rank"));
        record.item_id = fields[1];
        validate_item_id(record.item_id);
        record.div = parse_double(fields[2], context + ": div");
        const int expected = static_cast<int>(ranking.size()) + 1;
        if (record.rank != expected) {
            throw DataError(context + ": rank " + std::to_string(record.rank) +
                            " out of order, expected " + std::to_string(expected));
        }
        ranking.push_back(std::move(record));
    }
    if (!header_seen) throw DataError(path + ": empty ranking file");
    return ranking;
}

std::string trace_to_tsv(const UpdateTrace& trace) {
    auto join = [](const Chromosome& v) {
        std::string s;
        for (std::size_t k = 0; k < v.size(); ++k) {
            if (k) s += ' ';
            s += fmt_double_shortest(v[k]);
        }
        return s;
    };
    std::string out = "round\tunit\titem\tselected\tcentroid\tpre\tpost\n";
    for (const auto& record : trace) {
        out += std::to_string(record.round);
        out += '\t';
        out += std::to_string(record.unit_id);
        out += '\t';
        out += record.item_id;
        out += '\t';
        out += std::to_string(record.selected);
        out += '\t';
        out += join(record.centroid);
        out += '\t';
        out += join(record.pre);
        out += '\t';
        out += join(record.post);
        out += '\n';
    }
    return out;
}

void run_evolve_text(const EvolveTextArgs& args) {
    if (args.out_dir.empty()) throw UsageError("--out-dir is required");
    if (args.corpus_files.empty()) throw UsageError("at least one corpus file is required");
    const bool has_embeddings = !args.embeddings_file.empty();
    if (has_embeddings == args.builtin_init) {
        throw UsageError("exactly one of --embeddings and --builtin-init must be given");
    }
    TextRunOptions options;
    options.missing_policy = missing_policy_from_name(args.missing_policy);

    if (args.per_file) {
        // Per-file analysis: one independent single-file run per corpus file,
        // each in its own subdirectory with its own manifest.
        std::set<std::string> used_names;
        for (const auto& file : args.corpus_files) {
            std::string stem = fs::path(file).stem().string();
            if (stem.empty()) stem = "corpus";
            std::string name = stem;
            for (int k = 2; !used_names.insert(name).second; ++k) {
                name = stem + "_" + std::to_string(k);
            }
            EvolveTextArgs sub = args;
            sub.per_file = false;
            sub.corpus_files = {file};
            sub.out_dir = (fs::path(args.out_dir) / name).string();
            log_line("per-file run: " + file + " -> " + sub.out_dir);
            run_evolve_text(sub);
        }
        return;
    }

    RunManifest manifest;
    manifest.command = "evolve-text";
    manifest.version = SEMCELL_VERSION;
    manifest.started_utc = now_iso8601_utc();

    std::vector<std::string> texts;
    texts.reserve(args.corpus_files.size());
    for (const auto& path : args.corpus_files) {
        std::string text = read_text_file(path);
        if (const auto bad = find_invalid_utf8(text)) {
            throw DataError(path + ": invalid UTF-8 at byte offset " + std::to_string(*bad));
        }
        add_input(manifest, "corpus", path);
        texts.push_back(std::move(text));
    }
    if (!args.stoplist_file.empty()) {
        options.stoplist = load_stoplist(args.stoplist_file);
        add_input(manifest, "stoplist", args.stoplist_file);
    }

    EvolutionConfig config = args.config;
    EmbeddingTable table;
    if (args.builtin_init) {
        table = builtin_base_vectors(raw_sentence_units(texts), config.d, config.seed);
    } else {
        table = load_embeddings(args.embeddings_file);
        add_input(manifest, "embeddings", args.embeddings_file);
        if (table.duplicate_count > 0) {
            log_line("warning: " + std::to_string(table.duplicate_count) +
                     " duplicate token(s) in embeddings, last occurrence wins");
        }
        if (table.declared_count != table.vectors.size()) {
            log_line("warning: embeddings header declares " + std::to_string(table.declared_count) +
                     " tokens but the file defines " + std::to_string(table.vectors.size()));
        }
        if (args.explicit_dim && config.d != table.dim) {
            throw UsageError("--dim " + std::to_string(config.d) +
                             " conflicts with embedding dimension " + std::to_string(table.dim));
        }
        config.d = table.dim;
    }
    config.validate();

    TextRun run = build_text_run(texts, table, config, options);
    if (run.units.empty()) throw DataError("corpus produced no co-existence units");
    if (run.skipped_occurrences > 0) {
        log_line("skipped " + std::to_string(run.skipped_occurrences) +
                 " token occurrence(s) missing from the embedding table");
    }

    const std::string snapshot_pre = serialize_snapshot(run.population);
    UpdateTrace trace;
    evolve(run.population, run.units, args.trace ? &trace : nullptr);
    const std::string snapshot_post = serialize_snapshot(run.population);
    const auto ranking = rank_by_diversity(run.population);

    fs::create_directories(args.out_dir);
    write_text_file(join_path(args.out_dir, kSnapshotPreFile), snapshot_pre);
    write_text_file(join_path(args.out_dir, kSnapshotPostFile), snapshot_post);
    write_text_file(join_path(args.out_dir, kRankingFile), ranking_to_csv(ranking));
    if (args.trace) write_text_file(join_path(args.out_dir, kTraceFile), trace_to_tsv(trace));

    manifest.params = json{
        {"corpus", args.corpus_files},
        {"embeddings", optional_string(args.embeddings_file)},
        {"builtin_init", args.builtin_init},
        {"stoplist", optional_string(args.stoplist_file)},
        {"missing_policy", args.missing_policy},
        {"trace", args.trace},
        {"config", config_to_json(config)},
    };
    manifest.results = json{
        {"sentences", run.sentence_count},
        {"skipped_token_occurrences", run.skipped_occurrences},
    };
    manifest.item_count = run.population.size();
    manifest.unit_count = run.units.size();
    manifest.finished_utc = now_iso8601_utc();
    write_manifest(manifest, join_path(args.out_dir, kManifestFile));
    log_line("evolve-text: " + std::to_string(manifest.item_count) + " items, " +
             std::to_string(manifest.unit_count) + " units -> " + args.out_dir);
}

void run_evolve_geo(const EvolveGeoArgs& args) {
    if (args.out_dir.empty()) throw UsageError("--out-dir is required");
    if (args.catalog_file.empty()) throw UsageError("a catalog file is required");
    EvolutionConfig config = args.config;
    config.d = 2;
    config.validate();
    if (args.top_red < 0 || args.top_red > args.top_orange) {
        throw UsageError("require 0 <= top-red <= top-orange");
    }

    GeoRunOptions options;
    options.window_size = args.window_size;
    options.mesh_width = args.mesh_width;
    options.window_mode = window_mode_from_name(args.window_mode);
    options.init = geo_init_mode_from_string(args.geo_init);

    RunManifest manifest;
    manifest.command = "evolve-geo";
    manifest.version = SEMCELL_VERSION;
    manifest.started_utc = now_iso8601_utc();
    add_input(manifest, "catalog", args.catalog_file);

    CatalogOptions catalog_options;
    catalog_options.skip_bad_rows = args.skip_bad_rows;
    catalog_options.min_magnitude = args.min_mag;
    Catalog catalog = parse_catalog(args.catalog_file, catalog_options);
    if (catalog.skipped_rows > 0) {
        log_line("warning: skipped " + std::to_string(catalog.skipped_rows) + " bad catalog row(s)");
    }
    if (catalog.filtered_rows > 0) {
        log_line("filtered " + std::to_string(catalog.filtered_rows) +
                 " event(s) below the magnitude floor");
    }

    std::vector<QuakeEvent> events = std::move(catalog.events);
    if (!args.train_start.empty()) {
        const std::int64_t t0 = parse_iso8601_utc(args.train_start, "--train-start");
        std::erase_if(events, [t0](const QuakeEvent& e) { return e.time < t0; });
    }
    std::int64_t train_end_time = 0;
    bool explicit_train_end = false;
    if (!args.train_end.empty()) {
        train_end_time = parse_iso8601_utc(args.train_end, "--train-end");
        explicit_train_end = true;
        std::erase_if(events, [train_end_time](const QuakeEvent& e) { return e.time > train_end_time; });
    }
    if (events.empty()) throw DataError("no events remain inside the training window");

    GeoRun run = build_geo_run(events, config, options);
    if (run.dropped_tail_events > 0) {
        log_line("dropped " + std::to_string(run.dropped_tail_events) +
                 " trailing event(s) not filling a window");
    }
    if (!explicit_train_end) train_end_time = run.last_event_time;

    const std::string snapshot_pre = serialize_snapshot(run.population);
    UpdateTrace trace;
    evolve(run.population, run.units, args.trace ? &trace : nullptr);
    const std::string snapshot_post = serialize_snapshot(run.population);
    const auto ranking = rank_by_diversity(run.population);
    const MapCategories categories =
        categorize_for_map(ranking, run.population, run.base_coords, args.top_red, args.top_orange);
    if (categories.bands_shrunk) {
        log_line("warning: only " + std::to_string(ranking.size()) +
                 " cells; red/orange bands shrunk accordingly");
    }

    fs::create_directories(args.out_dir);
    write_text_file(join_path(args.out_dir, kSnapshotPreFile), snapshot_pre);
    write_text_file(join_path(args.out_dir, kSnapshotPostFile), snapshot_post);
    write_text_file(join_path(args.out_dir, kRankingFile), ranking_to_csv(ranking));
    write_text_file(join_path(args.out_dir, kMapFile), map_categories_to_geojson(categories));
    if (args.trace) write_text_file(join_path(args.out_dir, kTraceFile), trace_to_tsv(trace));

    manifest.params = json{
        {"catalog", args.catalog_file},
        {"window_size", args.window_size},
        {"mesh_width", args.mesh_width},
        {"window_mode", args.window_mode},
        {"geo_init", args.geo_init},
        {"top_red", args.top_red},
        {"top_orange", args.top_orange},
        {"min_mag", args.min_mag ? json(*args.min_mag) : json(nullptr)},
        {"train_start", optional_string(args.train_start)},
        {"train_end", optional_string(args.train_end)},
        {"skip_bad_rows", args.skip_bad_rows},
        {"trace", args.trace},
        {"config", config_to_json(config)},
    };
    manifest.results = json{
        {"train_end_utc", format_iso8601_utc(train_end_time)},
        {"first_event_utc", format_iso8601_utc(run.first_event_time)},
        {"last_event_utc", format_iso8601_utc(run.last_event_time)},
        {"event_count", run.event_count},
        {"dropped_tail_events", run.dropped_tail_events},
        {"skipped_rows", catalog.skipped_rows},
        {"filtered_rows", catalog.filtered_rows},
        {"bands_shrunk", categories.bands_shrunk},
    };
    manifest.item_count = run.population.size();
    manifest.unit_count = run.units.size();
    manifest.finished_utc = now_iso8601_utc();
    write_manifest(manifest, join_path(args.out_dir, kManifestFile));
    log_line("evolve-geo: " + std::to_string(manifest.item_count) + " mesh cells, " +
             std::to_string(manifest.unit_count) + " windows -> " + args.out_dir);
}

void run_hindcast(const HindcastArgs& args) {
    if (args.out_dir.empty()) throw UsageError("--out-dir is required");
    if (args.run_dir.empty()) throw UsageError("a geo run directory is required");
    if (args.eval_catalog.empty()) throw UsageError("--eval-catalog is required");
    if (args.horizon_days < 1) throw UsageError("--horizon-days must be >= 1");
    if (args.top_n < 1) throw UsageError("--top-n must be >= 1");

    const std::string run_manifest_path = join_path(args.run_dir, kManifestFile);
    const std::string run_ranking_path = join_path(args.run_dir, kRankingFile);
    const RunManifest run_manifest = read_manifest(run_manifest_path);
    if (run_manifest.command != "evolve-geo") {
        throw UsageError("hindcast requires an evolve-geo run directory, found command '" +
                         run_manifest.command + "'");
    }
    double mesh_width = 0.5;
    std::int64_t train_end_time = 0;
    try {
        mesh_width = run_manifest.params.at("mesh_width").get<double>();
        train_end_time = parse_iso8601_utc(
            run_manifest.results.at("train_end_utc").get<std::string>(),
            run_manifest_path + ": train_end_utc");
    } catch (const json::exception& e) {
        throw DataError(run_manifest_path + ": missing geo run fields: " + e.what());
    }

    RunManifest manifest;
    manifest.command = "hindcast";
    manifest.version = SEMCELL_VERSION;
    manifest.started_utc = now_iso8601_utc();
    add_input(manifest, "run-manifest", run_manifest_path);
    add_input(manifest, "ranking", run_ranking_path);
    add_input(manifest, "eval-catalog", args.eval_catalog);

    const auto ranking = parse_ranking_csv(run_ranking_path);
    const Catalog eval_catalog = parse_catalog(args.eval_catalog);
    const std::int64_t horizon_seconds = static_cast<std::int64_t>(args.horizon_days) * 86400;

    const HindcastReport report = hindcast(ranking, eval_catalog.events, mesh_width,
                                           train_end_time, args.mag_threshold, horizon_seconds,
                                           args.top_n);
    if (report.clamped) {
        log_line("warning: --top-n " + std::to_string(args.top_n) + " clamped to " +
                 std::to_string(report.top_n_used) + " ranked cells");
    }
    if (!report.recall_defined) {
        log_line("warning: no qualifying evaluation events; recall is undefined");
    }

    fs::create_directories(args.out_dir);
    write_text_file(join_path(args.out_dir, kHindcastFile),
                    hindcast_report_to_json(report, args.horizon_days));

    manifest.params = json{
        {"run_dir", args.run_dir},
        {"eval_catalog", args.eval_catalog},
        {"mag_threshold", args.mag_threshold},
        {"horizon_days", args.horizon_days},
        {"top_n", args.top_n},
    };
    manifest.results = json{
        {"precision_same_mesh", report.precision_same_mesh},
        {"precision_adjacent", report.precision_adjacent},
        {"recall", report.recall_defined ? json(report.recall) : json(nullptr)},
        {"qualifying_event_count", report.qualifying_event_count},
        {"top_n_used", report.top_n_used},
    };
    manifest.item_count = ranking.size();
    manifest.unit_count = 0;
    manifest.finished_utc = now_iso8601_utc();
    write_manifest(manifest, join_path(args.out_dir, kManifestFile));
    log_line("hindcast: precision(same) " + fmt_double_sig6(report.precision_same_mesh) +
             ", precision(adjacent) " + fmt_double_sig6(report.precision_adjacent) + " -> " +
             args.out_dir);
}

void run_rank(const RankArgs& args) {
    if (args.out_dir.empty()) throw UsageError("--out-dir is required");
    if (args.snapshot_file.empty()) throw UsageError("a snapshot file is required");

    RunManifest manifest;
    manifest.command = "rank";
    manifest.version = SEMCELL_VERSION;
    manifest.started_utc = now_iso8601_utc();
    add_input(manifest, "snapshot", args.snapshot_file);

    const CellPopulation pop = read_snapshot(args.snapshot_file);
    const auto ranking = rank_by_diversity(pop);

    fs::create_directories(args.out_dir);
    write_text_file(join_path(args.out_dir, kRankingFile), ranking_to_csv(ranking));

    manifest.params = json{{"snapshot", args.snapshot_file}};
    manifest.item_count = pop.size();
    manifest.unit_count = 0;
    manifest.finished_utc = now_iso8601_utc();
    write_manifest(manifest, join_path(args.out_dir, kManifestFile));
    log_line("rank: " + std::to_string(pop.size()) + " items -> " + args.out_dir);
}

void run_smooth(const SmoothArgs& args) {
    if (args.out_dir.empty()) throw UsageError("--out-dir is required");
    if (args.ranking_file.empty()) throw UsageError("a ranking file is required");
    if (args.labels_file.empty()) throw UsageError("--labels is required");
    if (args.window < 1) throw UsageError("--window must be >= 1");
    if (args.missing_policy != "zero-fill" && args.missing_policy != "error") {
        throw UsageError("unknown missing-label policy '" + args.missing_policy +
                         "' (expected zero-fill|error)");
    }

    RunManifest manifest;
    manifest.command = "smooth";
    manifest.version = SEMCELL_VERSION;
    manifest.started_utc = now_iso8601_utc();
    add_input(manifest, "ranking", args.ranking_file);
    add_input(manifest, "labels", args.labels_file);

    const auto ranking = parse_ranking_csv(args.ranking_file);
    const auto labels = parse_labels_csv(args.labels_file);

    std::vector<int> label_column(ranking.size(), 0);
    std::vector<std::string> missing;
    for (std::size_t i = 0; i < ranking.size(); ++i) {
        const auto it = labels.find(ranking[i].item_id);
        if (it == labels.end()) {
            missing.push_back(ranking[i].item_id);
        } else {
            label_column[i] = it->second;
        }
    }
    if (!missing.empty()) {
        if (args.missing_policy == "error") {
            std::string message = "labels file is missing " + std::to_string(missing.size()) +
                                  " ranked item(s):";
            const std::size_t shown = std::min<std::size_t>(missing.size(), 20);
            for (std::size_t i = 0; i < shown; ++i) message += " '" + missing[i] + "'";
            if (missing.size() > shown) message += " ...";
            throw DataError(message);
        }
        log_line("warning: zero-filled " + std::to_string(missing.size()) +
                 " ranked item(s) absent from the labels file");
    }
    std::size_t extra_labels = 0;
    {
        std::set<std::string_view> ranked_items;
        for (const auto& record : ranking) ranked_items.insert(record.item_id);
        for (const auto& [item, label] : labels) {
            (void)label;
            if (!ranked_items.count(item)) ++extra_labels;
        }
    }
    if (extra_labels > 0) {
        log_line("ignored " + std::to_string(extra_labels) + " label(s) for unranked items");
    }

    const auto smoothed = smooth_scores(label_column, args.window);
    std::string csv = "rank,item,label,smoothed\n";
    for (std::size_t i = 0; i < ranking.size(); ++i) {
        csv += std::to_string(ranking[i].rank);
        csv += ',';
        csv += csv_escape(ranking[i].item_id);
        csv += ',';
        csv += std::to_string(label_column[i]);
        csv += ',';
        csv += fmt_double_shortest(smoothed[i]);
        csv += '\n';
    }

    fs::create_directories(args.out_dir);
    write_text_file(join_path(args.out_dir, kSmoothedFile), csv);

    manifest.params = json{
        {"ranking", args.ranking_file},
        {"labels", args.labels_file},
        {"window", args.window},
        {"missing_policy", args.missing_policy},
    };
    manifest.results = json{
        {"missing_labeled_items", missing.size()},
        {"extra_label_rows", extra_labels},
    };
    manifest.item_count = ranking.size();
    manifest.unit_count = 0;
    manifest.finished_utc = now_iso8601_utc();
    write_manifest(manifest, join_path(args.out_dir, kManifestFile));
    log_line("smooth: " + std::to_string(ranking.size()) + " items, window " +
             std::to_string(args.window) + " -> " + args.out_dir);
}

void run_rerun(const std::string& manifest_path, const std::string& out_dir) {
    if (out_dir.empty()) throw UsageError("--out-dir is required");
    const RunManifest manifest = read_manifest(manifest_path);
    if (manifest.hash_algorithm != "sha256") {
        throw DataError(manifest_path + ": unsupported hash algorithm '" +
                        manifest.hash_algorithm + "'");
    }
    for (const auto& input : manifest.inputs) {
        const std::string digest = sha256_file(input.path);
        if (digest != input.sha256) {
            throw DataError("input '" + input.path +
                            "' no longer matches its manifest digest; bit-identical "
                            "reproduction is impossible");
        }
    }

    const json& p = manifest.params;
    try {
        if (manifest.command == "evolve-text") {
            EvolveTextArgs args;
            args.corpus_files = p.at("corpus").get<std::vector<std::string>>();
            args.embeddings_file = string_or_empty(p.at("embeddings"));
            args.builtin_init = p.at("builtin_init").get<bool>();
            args.stoplist_file = string_or_empty(p.at("stoplist"));
            args.missing_policy = p.at("missing_policy").get<std::string>();
            args.trace = p.at("trace").get<bool>();
            args.config = config_from_json(p.at("config"));
            args.explicit_dim = true;  // params carry the resolved dimension
            args.out_dir = out_dir;
            run_evolve_text(args);
        } else if (manifest.command == "evolve-geo") {
            EvolveGeoArgs args;
            args.catalog_file = p.at("catalog").get<std::string>();
            args.window_size = p.at("window_size").get<int>();
            args.mesh_width = p.at("mesh_width").get<double>();
            args.window_mode = p.at("window_mode").get<std::string>();
            args.geo_init = p.at("geo_init").get<std::string>();
            args.top_red = p.at("top_red").get<int>();
            args.top_orange = p.at("top_orange").get<int>();
            if (!p.at("min_mag").is_null()) args.min_mag = p.at("min_mag").get<double>();
            args.train_start = string_or_empty(p.at("train_start"));
            args.train_end = string_or_empty(p.at("train_end"));
            args.skip_bad_rows = p.at("skip_bad_rows").get<bool>();
            args.trace = p.at("trace").get<bool>();
            args.config = config_from_json(p.at("config"));
            args.out_dir = out_dir;
            run_evolve_geo(args);
        } else if (manifest.command == "hindcast") {
            HindcastArgs args;
            args.run_dir = p.at("run_dir").get<std::string>();
            args.eval_catalog = p.at("eval_catalog").get<std::string>();
            args.mag_threshold = p.at("mag_threshold").get<double>();
            args.horizon_days = p.at("horizon_days").get<int>();
            args.top_n = p.at("top_n").get<int>();
            args.out_dir = out_dir;
            run_hindcast(args);
        } else if (manifest.command == "rank") {
            RankArgs args;
            args.snapshot_file = p.at("snapshot").get<std::string>();
            args.out_dir = out_dir;
            run_rank(args);
        } else if (manifest.command == "smooth") {
            SmoothArgs args;
            args.ranking_file = p.at("ranking").get<std::string>();
            args.labels_file = p.at("labels").get<std::string>();
            args.window = p.at("window").get<int>();
            args.missing_policy = p.at("missing_policy").get<std::string>();
            args.out_dir = out_dir;
            run_smooth(args);
        } else {
            throw DataError(manifest_path + ": unknown command '" + manifest.command + "'");
        }
    } catch (const json::exception& e) {
        throw DataError(manifest_path + ": cannot reconstruct parameters: " + e.what());
    }
}

} // namespace semcell::cli
