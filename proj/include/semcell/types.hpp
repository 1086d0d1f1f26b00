#pragma once

#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace semcell {

// One candidate sense of an item: a d-dimensional real vector. Length is
// fixed per run and every component must stay finite.
using Chromosome = std::vector<double>;

// Malformed input data, contract violations in files, corrupted state.
// The CLI maps this to exit code 2.
class DataError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Bad invocation or configuration. The CLI maps this to exit code 1.
class UsageError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// An item together with its g evolving chromosomes. Chromosome index j is a
// stable identity: it never reorders across rounds.
struct SemanticCell {
    std::string item_id;
    std::vector<Chromosome> chromosomes;
};

// An ordered set of distinct items observed together (a sentence, a block of
// consecutive earthquakes). Members are kept in first-occurrence order.
struct CoexistenceUnit {
    std::size_t unit_id = 0;
    std::vector<std::string> members;
};

// Builds a unit from raw occurrences: duplicates collapse to the first
// occurrence, order otherwise preserved.
CoexistenceUnit make_unit(std::size_t unit_id, const std::vector<std::string>& raw_members);

enum class DistanceMode { PlainAlpha, Attenuated };
enum class InitMode { Identical, Jitter };

const char* to_string(DistanceMode mode);
const char* to_string(InitMode mode);
DistanceMode distance_mode_from_string(std::string_view s);
InitMode init_mode_from_string(std::string_view s);

// All free parameters of a run. alpha = 0 is accepted as the degenerate
// no-op step (several invariants are stated against it).
struct EvolutionConfig {
    double alpha = 0.1;
    int g = 5;
    int d = 50;
    int rounds = 1;
    DistanceMode distance_mode = DistanceMode::PlainAlpha;
    double attenuation_epsilon = 1e-6;
    std::uint64_t seed = 0;
    InitMode init_mode = InitMode::Jitter;
    double jitter_scale = 0.01;

    // Tie-breaking in chromosome selection is fixed to lowest index; kept
    // here so config echoes carry the choice.
    static constexpr const char* tie_break = "lowest-index";

    // Throws UsageError on out-of-range values.
    void validate() const;
};

// Every cell of a run, keyed by item id. std::map keeps iteration sorted by
// item_id, which is the order all observable outputs use.
struct CellPopulation {
    std::map<std::string, SemanticCell, std::less<>> cells;
    EvolutionConfig config;

    const SemanticCell* find(std::string_view item_id) const;
    SemanticCell* find(std::string_view item_id);
    std::size_t size() const { return cells.size(); }
};

// Item ids are embedded in tab-separated snapshots; tabs/newlines (and empty
// ids) are rejected wherever items enter the system.
void validate_item_id(std::string_view item_id);

} // namespace semcell
