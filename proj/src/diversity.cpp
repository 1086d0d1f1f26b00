#include "semcell/diversity.hpp"

#include <algorithm>
#include <cstdint>

namespace semcell {

double diversity(const SemanticCell& cell) {
    if (cell.chromosomes.empty()) {
        throw DataError("item '" + cell.item_id + "' has no chromosomes");
    }
    const std::size_t g = cell.chromosomes.size();
    const std::size_t d = cell.chromosomes[0].size();
    double div = 0.0;
    // Welford per dimension; stays exactly zero when all values are equal.
    for (std::size_t k = 0; k < d; ++k) {
        double mean = 0.0;
        double m2 = 0.0;
        for (std::size_t j = 0; j < g; ++j) {
            const double x = cell.chromosomes[j][k];
            const double delta = x - mean;
            mean += delta / static_cast<double>(j + 1);
            m2 += delta * (x - mean);
        }
        div += m2 / static_cast<double>(g);
    }
    return div;
}

std::vector<DiversityRecord> rank_by_diversity(const CellPopulation& pop) {
    if (pop.cells.empty()) {
        throw DataError("cannot rank an empty population");
    }
    std::vector<DiversityRecord> records;
    records.reserve(pop.cells.size());
    for (const auto& [item_id, cell] : pop.cells) {
        records.push_back({item_id, diversity(cell), 0});
    }
    std::sort(records.begin(), records.end(), [](const DiversityRecord& a, const DiversityRecord& b) {
        if (a.div != b.div) return a.div > b.div;
        return a.item_id < b.item_id;
    });
    for (std::size_t i = 0; i < records.size(); ++i) {
        records[i].rank = static_cast<int>(i + 1);
    }
    return records;
}

std::vector<double> smooth_scores(const std::vector<int>& labels, int window) {
    if (window < 1) throw UsageError("smoothing window must be >= 1, got " + std::to_string(window));
    const std::size_t n = labels.size();
    std::vector<double> out(n);
    if (n == 0) return out;

    std::vector<std::int64_t> prefix(n + 1, 0);
    for (std::size_t i = 0; i < n; ++i) {
        if (labels[i] != 0 && labels[i] != 1) {
            throw DataError("label at position " + std::to_string(i) + " is " +
                            std::to_string(labels[i]) + ", expected 0 or 1");
        }
        prefix[i + 1] = prefix[i] + labels[i];
    }
    for (std::size_t i = 0; i < n; ++i) {
        const std::size_t hi = std::min(i + static_cast<std::size_t>(window), n - 1);
        const std::int64_t sum = prefix[hi + 1] - prefix[i];
        out[i] = static_cast<double>(sum) / static_cast<double>(hi + 1 - i);
    }
    return out;
}

} // namespace semcell
