#pragma once

#include <vector>

#include "semcell/types.hpp"

namespace semcell {

// One row of a diversity ranking. Ranks are 1-based, assigned after sorting
// by descending div with ties broken by ascending item_id.
struct DiversityRecord {
    std::string item_id;
    double div = 0.0;
    int rank = 0;
};

// Sum over dimensions of the population variance (divide by g) across the
// cell's chromosomes. g = 1 yields 0.
double diversity(const SemanticCell& cell);

std::vector<DiversityRecord> rank_by_diversity(const CellPopulation& pop);

// Forward-looking rank-window mean: output[i] is the mean of
// labels[i .. min(i + window, N-1)], both endpoints included, so the nominal
// span is window + 1 items, truncated at the tail. Labels must be 0 or 1.
std::vector<double> smooth_scores(const std::vector<int>& labels, int window);

} // namespace semcell
