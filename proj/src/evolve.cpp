#include "semcell/evolve.hpp"

#include <cmath>
#include <string>

#include "semcell/rng.hpp"

namespace semcell {

namespace {

double squared_distance(const Chromosome& a, const Chromosome& b) {
    double s = 0.0;
    for (std::size_t k = 0; k < a.size(); ++k) {
        const double diff = a[k] - b[k];
        s += diff * diff;
    }
    return s;
}

bool all_finite(const Chromosome& v) {
    for (double x : v) {
        if (!std::isfinite(x)) return false;
    }
    return true;
}

} // namespace

Chromosome unit_centroid(const CoexistenceUnit& unit, const CellPopulation& pop) {
    if (unit.members.empty()) {
        throw DataError("co-existence unit " + std::to_string(unit.unit_id) + " is empty");
    }
    const std::size_t d = static_cast<std::size_t>(pop.config.d);
    Chromosome sum(d, 0.0);
    std::size_t count = 0;
    for (const auto& member : unit.members) {
        const SemanticCell* cell = pop.find(member);
        if (cell == nullptr) {
            throw DataError("unit " + std::to_string(unit.unit_id) +
                            " references unknown item '" + member + "'");
        }
        for (const auto& chromosome : cell->chromosomes) {
            if (chromosome.size() != d) {
                throw DataError("item '" + member + "' has a chromosome of dimension " +
                                std::to_string(chromosome.size()) + ", expected " + std::to_string(d));
            }
            for (std::size_t k = 0; k < d; ++k) sum[k] += chromosome[k];
            ++count;
        }
    }
    for (std::size_t k = 0; k < d; ++k) sum[k] /= static_cast<double>(count);
    return sum;
}

int select_chromosome(const SemanticCell& cell, const Chromosome& centroid) {
    if (cell.chromosomes.empty()) {
        throw DataError("item '" + cell.item_id + "' has no chromosomes");
    }
    int best = 0;
    double best_sq = -1.0;
    for (std::size_t j = 0; j < cell.chromosomes.size(); ++j) {
        if (cell.chromosomes[j].size() != centroid.size()) {
            throw DataError("item '" + cell.item_id + "' chromosome " + std::to_string(j) +
                            " has dimension " + std::to_string(cell.chromosomes[j].size()) +
                            ", centroid has " + std::to_string(centroid.size()));
        }
        const double sq = squared_distance(cell.chromosomes[j], centroid);
        if (j == 0 || sq < best_sq) {
            best = static_cast<int>(j);
            best_sq = sq;
        }
    }
    return best;
}

void crossover_update(SemanticCell& cell, int j0, const Chromosome& centroid,
                      const EvolutionConfig& config) {
    if (j0 < 0 || static_cast<std::size_t>(j0) >= cell.chromosomes.size()) {
        throw DataError("item '" + cell.item_id + "': chromosome index " + std::to_string(j0) +
                        " out of range");
    }
    Chromosome& chosen = cell.chromosomes[static_cast<std::size_t>(j0)];
    if (chosen.size() != centroid.size()) {
        throw DataError("item '" + cell.item_id + "': dimension mismatch in crossover update");
    }

    double step = config.alpha;
    if (config.distance_mode == DistanceMode::Attenuated) {
        const double r_sq = squared_distance(chosen, centroid);
        step = config.alpha / std::max(r_sq, config.attenuation_epsilon);
        if (step > 1.0) step = 1.0;
    }
    if (step == 0.0) return;

    for (std::size_t k = 0; k < chosen.size(); ++k) {
        chosen[k] = (1.0 - step) * chosen[k] + step * centroid[k];
    }
    if (!all_finite(chosen)) {
        throw DataError("item '" + cell.item_id + "': non-finite gene after crossover update");
    }
}

void evolve(CellPopulation& pop, const std::vector<CoexistenceUnit>& units, UpdateTrace* trace) {
    pop.config.validate();
    for (int round = 1; round <= pop.config.rounds; ++round) {
        for (const auto& unit : units) {
            const Chromosome centroid = unit_centroid(unit, pop);
            for (const auto& member : unit.members) {
                SemanticCell* cell = pop.find(member);
                // unit_centroid already verified membership
                const int j0 = select_chromosome(*cell, centroid);
                UpdateRecord record;
                if (trace != nullptr) {
                    record.round = round;
                    record.unit_id = unit.unit_id;
                    record.item_id = member;
                    record.selected = j0;
                    record.centroid = centroid;
                    record.pre = cell->chromosomes[static_cast<std::size_t>(j0)];
                }
                crossover_update(*cell, j0, centroid, pop.config);
                if (trace != nullptr) {
                    record.post = cell->chromosomes[static_cast<std::size_t>(j0)];
                    trace->push_back(std::move(record));
                }
            }
        }
    }
}

CellPopulation initialize_cells(const std::map<std::string, Chromosome, std::less<>>& base_vectors,
                                const EvolutionConfig& config) {
    config.validate();
    CellPopulation pop;
    pop.config = config;
    const std::size_t d = static_cast<std::size_t>(config.d);
    const bool jitter = config.init_mode == InitMode::Jitter && config.jitter_scale > 0.0;
    for (const auto& [item_id, base] : base_vectors) {
        validate_item_id(item_id);
        if (base.size() != d) {
            throw DataError("base vector for item '" + item_id + "' has dimension " +
                            std::to_string(base.size()) + ", expected " + std::to_string(d));
        }
        if (!all_finite(base)) {
            throw DataError("base vector for item '" + item_id + "' has non-finite components");
        }
        SemanticCell cell;
        cell.item_id = item_id;
        cell.chromosomes.reserve(static_cast<std::size_t>(config.g));
        for (int j = 0; j < config.g; ++j) {
            if (jitter) {
                Chromosome c = base;
                const Chromosome delta = jitter_offset(config.seed, item_id,
                                                       static_cast<std::uint64_t>(j),
                                                       config.d, config.jitter_scale);
                for (std::size_t k = 0; k < d; ++k) c[k] += delta[k];
                cell.chromosomes.push_back(std::move(c));
            } else {
                cell.chromosomes.push_back(base);
            }
        }
        pop.cells.emplace(item_id, std::move(cell));
    }
    return pop;
}

} // namespace semcell
