#pragma once

#include <cstdint>
#include <set>
#include <string>
#include <unordered_map>
#include <vector>

#include "semcell/types.hpp"

namespace semcell {

// Splits on '.', '!' or '?' followed by whitespace or end of input, and on
// blank lines. The triggering terminator is stripped, surrounding whitespace
// trimmed, empty sentences dropped. Order preserved.
std::vector<std::string> segment_sentences(std::string_view text);

// Whitespace split, then leading/trailing ASCII punctuation is stripped.
// Internal '-' and '_' (and any internal punctuation) survive, and case is
// preserved: "Entropy" and "entropy" are distinct items.
std::vector<std::string> tokenize(std::string_view sentence);

struct EmbeddingTable {
    std::unordered_map<std::string, Chromosome> vectors;
    int dim = 0;
    std::size_t duplicate_count = 0;   // duplicate tokens in the source, last wins
    std::size_t declared_count = 0;    // vocab count announced by the header
};

// Word-embedding text format: header "<vocab_count> <d>", then one
// "<token> <v1> ... <vd>" row per line. Malformed rows and non-finite
// values are hard errors with line numbers.
EmbeddingTable load_embeddings(const std::string& path);

// Deterministic unit-norm base vectors for every token in `units`, keyed by
// (seed, token). Encodes no co-occurrence structure: it exists so the
// pipeline runs hermetically, for algorithm testing rather than semantic
// claims.
EmbeddingTable builtin_base_vectors(const std::vector<CoexistenceUnit>& units, int d,
                                    std::uint64_t seed);

// One token per line; blank lines ignored.
std::set<std::string> load_stoplist(const std::string& path);

enum class MissingTokenPolicy { SkipToken, Error };

struct TextRunOptions {
    MissingTokenPolicy missing_policy = MissingTokenPolicy::Error;
    std::set<std::string> stoplist;
};

struct TextRun {
    CellPopulation population;            // initial, pre-evolution
    std::vector<CoexistenceUnit> units;   // sentence units in document order
    std::size_t sentence_count = 0;       // sentences seen, including ones that formed no unit
    std::size_t skipped_occurrences = 0;  // token occurrences dropped by the missing policy
};

// Segments and tokenizes each corpus text in order, builds sentence units
// over the surviving vocabulary and initializes one cell per token from the
// embedding table. config.d must match the table dimension.
TextRun build_text_run(const std::vector<std::string>& corpus_texts,
                       const EmbeddingTable& embeddings,
                       const EvolutionConfig& config,
                       const TextRunOptions& options = {});

} // namespace semcell
