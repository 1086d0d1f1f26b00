#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "semcell/cli.hpp"
#include "semcell/types.hpp"
#include "semcell/version.hpp"

namespace {

struct ModeFlags {
    std::string init_mode;
    std::string distance_mode = "plain-alpha";
};

// Evolution-parameter flags shared by both evolve commands. Geo runs have no
// --dim: their chromosomes are (lat, lon) pairs by construction.
void add_evolution_flags(CLI::App* cmd, semcell::EvolutionConfig& config, ModeFlags& modes,
                         bool with_dim) {
    cmd->add_option("--alpha", config.alpha, "Crossover step size in [0, 1]")
        ->capture_default_str();
    cmd->add_option("--g", config.g, "Chromosomes per cell")->capture_default_str();
    if (with_dim) {
        cmd->add_option("--dim", config.d, "Chromosome dimension")->capture_default_str();
    }
    cmd->add_option("--rounds", config.rounds, "Full passes over all co-existence units")
        ->capture_default_str();
    cmd->add_option("--seed", config.seed, "Seed for deterministic initialization")
        ->capture_default_str();
    cmd->add_option("--init-mode", modes.init_mode, "Cell initialization: identical | jitter")
        ->check(CLI::IsMember({"identical", "jitter"}))
        ->capture_default_str();
    cmd->add_option("--jitter", config.jitter_scale,
                    "Per-component jitter half-width for --init-mode jitter")
        ->capture_default_str();
    cmd->add_option("--distance-mode", modes.distance_mode,
                    "Step rule: plain-alpha | attenuated")
        ->check(CLI::IsMember({"plain-alpha", "attenuated"}))
        ->capture_default_str();
    cmd->add_option("--attenuation-epsilon", config.attenuation_epsilon,
                    "Distance floor for the attenuated step rule")
        ->capture_default_str();
}

void apply_mode_flags(semcell::EvolutionConfig& config, const ModeFlags& modes) {
    config.init_mode = semcell::init_mode_from_string(modes.init_mode);
    config.distance_mode = semcell::distance_mode_from_string(modes.distance_mode);
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"semcell: semantic-cell evolution over co-occurrence units"};
    app.set_version_flag("--version", SEMCELL_VERSION);
    app.require_subcommand(1);

    // evolve-text ----------------------------------------------------------
    semcell::cli::EvolveTextArgs text_args;
    ModeFlags text_modes;
    text_modes.init_mode = "jitter";
    CLI::App* text_cmd =
        app.add_subcommand("evolve-text", "Evolve word cells over sentence units of a corpus");
    text_cmd->add_option("corpus", text_args.corpus_files, "Corpus text files, processed in order")
        ->required()
        ->check(CLI::ExistingFile);
    text_cmd->add_option("--embeddings", text_args.embeddings_file,
                         "Word-embedding text file supplying base vectors")
        ->check(CLI::ExistingFile);
    text_cmd->add_flag("--builtin-init", text_args.builtin_init,
                       "Use deterministic pseudo-random unit vectors instead of embeddings");
    text_cmd->add_option("--stoplist", text_args.stoplist_file, "Stop-word file, one token per line")
        ->check(CLI::ExistingFile);
    text_cmd->add_option("--missing-policy", text_args.missing_policy,
                         "Tokens absent from the embeddings: skip-token | error")
        ->check(CLI::IsMember({"skip-token", "error"}))
        ->capture_default_str();
    text_cmd->add_flag("--per-file", text_args.per_file,
                       "Analyze each corpus file independently into a subdirectory");
    text_cmd->add_flag("--trace", text_args.trace, "Write trace.tsv with every applied update");
    text_cmd->add_option("--out-dir", text_args.out_dir, "Output directory")->required();
    add_evolution_flags(text_cmd, text_args.config, text_modes, /*with_dim=*/true);

    // evolve-geo -----------------------------------------------------------
    semcell::cli::EvolveGeoArgs geo_args;
    ModeFlags geo_modes;
    geo_modes.init_mode = "identical";
    geo_args.config.init_mode = semcell::InitMode::Identical;
    CLI::App* geo_cmd =
        app.add_subcommand("evolve-geo", "Evolve mesh cells over earthquake event windows");
    geo_cmd->add_option("catalog", geo_args.catalog_file,
                        "Catalog CSV: time,lat,lon,depth,magnitude")
        ->required()
        ->check(CLI::ExistingFile);
    geo_cmd->add_option("--window-size", geo_args.window_size, "Events per co-existence window")
        ->capture_default_str();
    geo_cmd->add_option("--mesh-width", geo_args.mesh_width, "Mesh cell width in degrees")
        ->capture_default_str();
    geo_cmd->add_option("--top-red", geo_args.top_red, "Red band: ranks 1..top-red")
        ->capture_default_str();
    geo_cmd->add_option("--top-orange", geo_args.top_orange,
                        "Orange band: ranks top-red+1..top-orange")
        ->capture_default_str();
    geo_cmd->add_option("--min-mag", geo_args.min_mag, "Drop events below this magnitude");
    geo_cmd->add_option("--train-start", geo_args.train_start,
                        "Keep only events at or after this ISO-8601 UTC time");
    geo_cmd->add_option("--train-end", geo_args.train_end,
                        "Keep only events at or before this ISO-8601 UTC time");
    geo_cmd->add_option("--window-mode", geo_args.window_mode,
                        "Window construction: disjoint | sliding")
        ->check(CLI::IsMember({"disjoint", "sliding"}))
        ->capture_default_str();
    geo_cmd->add_option("--geo-init", geo_args.geo_init,
                        "Mesh chromosome seed: first-event | mesh-center | event-centroid")
        ->check(CLI::IsMember({"first-event", "mesh-center", "event-centroid"}))
        ->capture_default_str();
    geo_cmd->add_flag("--skip-bad-rows", geo_args.skip_bad_rows,
                      "Count unparseable catalog rows instead of failing");
    geo_cmd->add_flag("--trace", geo_args.trace, "Write trace.tsv with every applied update");
    geo_cmd->add_option("--out-dir", geo_args.out_dir, "Output directory")->required();
    add_evolution_flags(geo_cmd, geo_args.config, geo_modes, /*with_dim=*/false);

    // hindcast ---------------------------------------------------------------
    semcell::cli::HindcastArgs hindcast_args;
    CLI::App* hindcast_cmd = app.add_subcommand(
        "hindcast", "Score a geo run's top cells against a later evaluation catalog");
    hindcast_cmd->add_option("run_dir", hindcast_args.run_dir,
                             "Completed evolve-geo output directory")
        ->required()
        ->check(CLI::ExistingDirectory);
    hindcast_cmd->add_option("--eval-catalog", hindcast_args.eval_catalog,
                             "Evaluation catalog CSV, strictly after the training window")
        ->required()
        ->check(CLI::ExistingFile);
    hindcast_cmd->add_option("--mag-threshold", hindcast_args.mag_threshold,
                             "Qualifying event magnitude floor")
        ->capture_default_str();
    hindcast_cmd->add_option("--horizon-days", hindcast_args.horizon_days,
                             "Days after the training window an event may qualify")
        ->capture_default_str();
    hindcast_cmd->add_option("--top-n", hindcast_args.top_n, "Ranked cells to evaluate")
        ->capture_default_str();
    hindcast_cmd->add_option("--out-dir", hindcast_args.out_dir, "Output directory")->required();

    // rank -------------------------------------------------------------------
    semcell::cli::RankArgs rank_args;
    CLI::App* rank_cmd =
        app.add_subcommand("rank", "Compute the diversity ranking of a population snapshot");
    rank_cmd->add_option("snapshot", rank_args.snapshot_file, "Population snapshot file")
        ->required()
        ->check(CLI::ExistingFile);
    rank_cmd->add_option("--out-dir", rank_args.out_dir, "Output directory")->required();

    // smooth -----------------------------------------------------------------
    semcell::cli::SmoothArgs smooth_args;
    CLI::App* smooth_cmd =
        app.add_subcommand("smooth", "Smooth binary labels over forward rank windows");
    smooth_cmd->add_option("ranking", smooth_args.ranking_file, "Ranking CSV (rank,item,div)")
        ->required()
        ->check(CLI::ExistingFile);
    smooth_cmd->add_option("--labels", smooth_args.labels_file, "Labels CSV (item,label)")
        ->required()
        ->check(CLI::ExistingFile);
    smooth_cmd->add_option("--window", smooth_args.window,
                           "Forward window: position i averages ranks i..i+window")
        ->capture_default_str();
    smooth_cmd->add_option("--missing-policy", smooth_args.missing_policy,
                           "Ranked items without labels: zero-fill | error")
        ->check(CLI::IsMember({"zero-fill", "error"}))
        ->capture_default_str();
    smooth_cmd->add_option("--out-dir", smooth_args.out_dir, "Output directory")->required();

    // rerun ------------------------------------------------------------------
    std::string rerun_manifest;
    std::string rerun_out_dir;
    CLI::App* rerun_cmd =
        app.add_subcommand("rerun", "Re-execute a recorded run for bit-identical artifacts");
    rerun_cmd->add_option("manifest", rerun_manifest, "manifest.json of a previous run")
        ->required()
        ->check(CLI::ExistingFile);
    rerun_cmd->add_option("--out-dir", rerun_out_dir, "Output directory")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    try {
        if (text_cmd->parsed()) {
            text_args.explicit_dim = text_cmd->count("--dim") > 0;
            apply_mode_flags(text_args.config, text_modes);
            semcell::cli::run_evolve_text(text_args);
        } else if (geo_cmd->parsed()) {
            apply_mode_flags(geo_args.config, geo_modes);
            semcell::cli::run_evolve_geo(geo_args);
        } else if (hindcast_cmd->parsed()) {
            semcell::cli::run_hindcast(hindcast_args);
        } else if (rank_cmd->parsed()) {
            semcell::cli::run_rank(rank_args);
        } else if (smooth_cmd->parsed()) {
            semcell::cli::run_smooth(smooth_args);
        } else if (rerun_cmd->parsed()) {
            semcell::cli::run_rerun(rerun_manifest, rerun_out_dir);
        }
    } catch (const semcell::UsageError& e) {
        std::cerr << "semcell: error: " << e.what() << "\n";
        return 1;
    } catch (const semcell::DataError& e) {
        std::cerr << "semcell: error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "semcell: internal error: " << e.what() << "\n";
        return 2;
    }
    return 0;
}
