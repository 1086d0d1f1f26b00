#include "semcell/text.hpp"

#include <cctype>
#include <cmath>
#include <unordered_set>

#include "semcell/evolve.hpp"
#include "semcell/format.hpp"
#include "semcell/rng.hpp"

namespace semcell {

namespace {

bool is_ws(char c) {
    return c == ' ' || c == '\t' || c == '\r' || c == '\n' || c == '\v' || c == '\f';
}

bool is_ascii_punct(char c) {
    return std::ispunct(static_cast<unsigned char>(c)) != 0 && static_cast<unsigned char>(c) < 0x80;
}

void flush_sentence(std::string& current, std::vector<std::string>& out) {
    const std::string_view trimmed = trim(current);
    if (!trimmed.empty()) out.emplace_back(trimmed);
    current.clear();
}

} // namespace

std::vector<std::string> segment_sentences(std::string_view text) {
    std::vector<std::string> sentences;
    std::string current;
    std::size_t i = 0;
    const std::size_t n = text.size();
    while (i < n) {
        const char c = text[i];
        if (c == '.' || c == '!' || c == '?') {
            if (i + 1 >= n || is_ws(text[i + 1])) {
                flush_sentence(current, sentences);
                ++i;
                continue;
            }
        }
        if (c == '\n') {
            // a line holding only whitespace ends the sentence
            std::size_t k = i + 1;
            while (k < n && (text[k] == ' ' || text[k] == '\t' || text[k] == '\r')) ++k;
            if (k < n && text[k] == '\n') {
                flush_sentence(current, sentences);
                i = k + 1;
                continue;
            }
        }
        current.push_back(c);
        ++i;
    }
    flush_sentence(current, sentences);
    return sentences;
}

std::vector<std::string> tokenize(std::string_view sentence) {
    std::vector<std::string> tokens;
    std::size_t i = 0;
    const std::size_t n = sentence.size();
    while (i < n) {
        while (i < n && is_ws(sentence[i])) ++i;
        std::size_t start = i;
        while (i < n && !is_ws(sentence[i])) ++i;
        if (i == start) break;
        std::size_t begin = start;
        std::size_t end = i;
        while (begin < end && is_ascii_punct(sentence[begin])) ++begin;
        while (end > begin && is_ascii_punct(sentence[end - 1])) --end;
        if (end > begin) {
            tokens.emplace_back(sentence.substr(begin, end - begin));
        }
    }
    return tokens;
}

EmbeddingTable load_embeddings(const std::string& path) {
    const std::string content = read_text_file(path);
    EmbeddingTable table;

    std::size_t pos = 0;
    std::size_t line_number = 0;
    bool header_seen = false;
    while (pos <= content.size()) {
        std::size_t eol = content.find('\n', pos);
        if (eol == std::string::npos) eol = content.size();
        std::string_view line(content.data() + pos, eol - pos);
        if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
        pos = eol + 1;
        ++line_number;
        if (trim(line).empty()) {
            if (pos > content.size()) break;
            continue;
        }
        const std::string context = path + ":" + std::to_string(line_number);

        // whitespace-split the row
        std::vector<std::string_view> parts;
        std::size_t i = 0;
        while (i < line.size()) {
            while (i < line.size() && line[i] == ' ') ++i;
            std::size_t start = i;
            while (i < line.size() && line[i] != ' ') ++i;
            if (i > start) parts.push_back(line.substr(start, i - start));
        }

        if (!header_seen) {
            if (parts.size() != 2) {
                throw DataError(context + ": expected header '<vocab_count> <dimension>'");
            }
            table.declared_count = static_cast<std::size_t>(parse_int64(parts[0], context));
            table.dim = static_cast<int>(parse_int64(parts[1], context));
            if (table.dim < 1) throw DataError(context + ": embedding dimension must be positive");
            header_seen = true;
            continue;
        }

        if (parts.size() != static_cast<std::size_t>(table.dim) + 1) {
            throw DataError(context + ": expected 1 token and " + std::to_string(table.dim) +
                            " values, found " + std::to_string(parts.size()) + " fields");
        }
        std::string token(parts[0]);
        validate_item_id(token);
        Chromosome vec(static_cast<std::size_t>(table.dim));
        for (int k = 0; k < table.dim; ++k) {
            vec[static_cast<std::size_t>(k)] = parse_double(parts[static_cast<std::size_t>(k) + 1], context);
            if (!std::isfinite(vec[static_cast<std::size_t>(k)])) {
                throw DataError(context + ": non-finite embedding value for token '" + token + "'");
            }
        }
        auto [it, inserted] = table.vectors.insert_or_assign(std::move(token), std::move(vec));
        (void)it;
        if (!inserted) ++table.duplicate_count;
    }
    if (!header_seen) throw DataError(path + ": empty embedding file");
    return table;
}

EmbeddingTable builtin_base_vectors(const std::vector<CoexistenceUnit>& units, int d,
                                    std::uint64_t seed) {
    if (d < 1) throw UsageError("embedding dimension must be >= 1");
    EmbeddingTable table;
    table.dim = d;
    for (const auto& unit : units) {
        for (const auto& member : unit.members) {
            if (table.vectors.count(member) == 0) {
                table.vectors.emplace(member, deterministic_unit_vector(seed, member, d));
            }
        }
    }
    table.declared_count = table.vectors.size();
    return table;
}

std::set<std::string> load_stoplist(const std::string& path) {
    const std::string content = read_text_file(path);
    std::set<std::string> stoplist;
    std::size_t pos = 0;
    while (pos <= content.size()) {
        std::size_t eol = content.find('\n', pos);
        if (eol == std::string::npos) eol = content.size();
        const std::string_view token = trim(std::string_view(content.data() + pos, eol - pos));
        if (!token.empty()) stoplist.emplace(token);
        if (eol == content.size()) break;
        pos = eol + 1;
    }
    return stoplist;
}

TextRun build_text_run(const std::vector<std::string>& corpus_texts,
                       const EmbeddingTable& embeddings,
                       const EvolutionConfig& config,
                       const TextRunOptions& options) {
    config.validate();
    if (config.d != embeddings.dim) {
        throw UsageError("configured d=" + std::to_string(config.d) +
                         " does not match embedding dimension " + std::to_string(embeddings.dim));
    }

    TextRun run;
    std::vector<std::string> missing;  // first-encounter order, for the error message
    std::unordered_set<std::string> missing_seen;
    std::map<std::string, Chromosome, std::less<>> base_vectors;

    std::size_t unit_id = 0;
    for (const auto& text : corpus_texts) {
        for (const auto& sentence : segment_sentences(text)) {
            ++run.sentence_count;
            std::vector<std::string> kept;
            for (auto& token : tokenize(sentence)) {
                if (options.stoplist.count(token) != 0) continue;
                auto it = embeddings.vectors.find(token);
                if (it == embeddings.vectors.end()) {
                    if (options.missing_policy == MissingTokenPolicy::SkipToken) {
                        ++run.skipped_occurrences;
                        continue;
                    }
                    if (missing_seen.insert(token).second) {
                        missing.push_back(token);
                    }
                    continue;
                }
                if (base_vectors.find(token) == base_vectors.end()) {
                    base_vectors.emplace(token, it->second);
                }
                kept.push_back(std::move(token));
            }
            if (!kept.empty() && missing.empty()) {
                run.units.push_back(make_unit(unit_id++, kept));
            }
        }
    }

    if (!missing.empty()) {
        std::string message = "tokens without embeddings (policy=error):";
        const std::size_t shown = std::min<std::size_t>(missing.size(), 20);
        for (std::size_t i = 0; i < shown; ++i) message += " '" + missing[i] + "'";
        if (missing.size() > shown) {
            message += " ... and " + std::to_string(missing.size() - shown) + " more";
        }
        throw DataError(message);
    }

    run.population = initialize_cells(base_vectors, config);
    return run;
}

} // namespace semcell
