#pragma once

#include <map>
#include <vector>

#include "semcell/types.hpp"

namespace semcell {

// One applied crossover step, for audit and tests. `selected` is j0, the
// chromosome index chosen by least distance to the unit centroid.
struct UpdateRecord {
    int round = 0;
    std::size_t unit_id = 0;
    std::string item_id;
    int selected = 0;
    Chromosome centroid;
    Chromosome pre;
    Chromosome post;
};

using UpdateTrace = std::vector<UpdateRecord>;

// Arithmetic mean of all g chromosomes of all member cells, computed from
// the chromosome state at the moment of the call.
Chromosome unit_centroid(const CoexistenceUnit& unit, const CellPopulation& pop);

// Index of the chromosome with minimum Euclidean distance to the centroid.
// Ties break to the lowest index. Squared distances are compared; the argmin
// is identical and exact.
int select_chromosome(const SemanticCell& cell, const Chromosome& centroid);

// Moves chromosome j0 toward the centroid by a convex combination. In
// plain-alpha mode the step is alpha; in attenuated mode it is
// alpha / max(r^2, attenuation_epsilon) clamped to [0, 1], with r the
// Euclidean distance between the old chromosome and the centroid. All other
// chromosomes are untouched. A step of exactly 0 leaves the chromosome
// bit-identical.
void crossover_update(SemanticCell& cell, int j0, const Chromosome& centroid,
                      const EvolutionConfig& config);

// Runs config.rounds full passes over `units` in order. Within each unit the
// centroid is computed once from the pre-unit state, then members are
// processed in first-occurrence order. One round = one pass over all units.
// If `trace` is non-null, one UpdateRecord is appended per applied update.
void evolve(CellPopulation& pop, const std::vector<CoexistenceUnit>& units,
            UpdateTrace* trace = nullptr);

// Expands one base vector per item into a cell of g chromosomes. Identical
// mode copies the base; jitter mode adds a deterministic offset with each
// component uniform in [-jitter_scale, +jitter_scale], keyed by
// (seed, item_id, chromosome index).
CellPopulation initialize_cells(const std::map<std::string, Chromosome, std::less<>>& base_vectors,
                                const EvolutionConfig& config);

} // namespace semcell
