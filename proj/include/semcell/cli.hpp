#pragma once

#include <optional>
#include <string>
#include <vector>

#include "semcell/diversity.hpp"
#include "semcell/evolve.hpp"
#include "semcell/types.hpp"

namespace semcell::cli {

// Fixed artifact names within an output directory.
inline constexpr const char* kManifestFile = "manifest.json";
inline constexpr const char* kSnapshotPreFile = "snapshot_pre.txt";
inline constexpr const char* kSnapshotPostFile = "snapshot_post.txt";
inline constexpr const char* kRankingFile = "ranking.csv";
inline constexpr const char* kMapFile = "map.geojson";
inline constexpr const char* kHindcastFile = "hindcast.json";
inline constexpr const char* kTraceFile = "trace.tsv";
inline constexpr const char* kSmoothedFile = "smoothed.csv";

struct EvolveTextArgs {
    std::vector<std::string> corpus_files;
    std::string embeddings_file;   // exactly one of embeddings_file / builtin_init
    bool builtin_init = false;
    std::string stoplist_file;
    bool per_file = false;
    std::string missing_policy = "error";  // "skip-token" | "error"
    bool explicit_dim = false;             // --dim was passed; otherwise embeddings set d
    EvolutionConfig config;
    std::string out_dir;
    bool trace = false;
};

struct EvolveGeoArgs {
    std::string catalog_file;
    int window_size = 10;
    double mesh_width = 0.5;
    int top_red = 15;
    int top_orange = 50;
    std::optional<double> min_mag;
    std::string train_start;  // ISO-8601 or empty
    std::string train_end;
    std::string window_mode = "disjoint";  // "disjoint" | "sliding"
    std::string geo_init = "first-event";  // "first-event" | "mesh-center" | "event-centroid"
    bool skip_bad_rows = false;
    EvolutionConfig config;  // d is forced to 2
    std::string out_dir;
    bool trace = false;
};

struct HindcastArgs {
    std::string run_dir;       // a completed evolve-geo output directory
    std::string eval_catalog;
    double mag_threshold = 6.0;
    int horizon_days = 730;
    int top_n = 15;
    std::string out_dir;
};

struct RankArgs {
    std::string snapshot_file;
    std::string out_dir;
};

struct SmoothArgs {
    std::string ranking_file;
    std::string labels_file;
    int window = 100;
    std::string missing_policy = "error";  // "zero-fill" | "error"
    std::string out_dir;
};

void run_evolve_text(const EvolveTextArgs& args);
void run_evolve_geo(const EvolveGeoArgs& args);
void run_hindcast(const HindcastArgs& args);
void run_rank(const RankArgs& args);
void run_smooth(const SmoothArgs& args);

// Re-executes the command recorded in a manifest into a fresh output
// directory. Input files are digest-verified first; a changed input is a
// hard error because bit-identical reproduction is no longer possible.
void run_rerun(const std::string& manifest_path, const std::string& out_dir);

// Shared artifact writers (also used by tests).
std::string ranking_to_csv(const std::vector<DiversityRecord>& ranking);
std::vector<DiversityRecord> parse_ranking_csv(const std::string& path);
std::string trace_to_tsv(const UpdateTrace& trace);

} // namespace semcell::cli
