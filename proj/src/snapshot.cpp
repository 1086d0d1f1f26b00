#include "semcell/snapshot.hpp"

#include <cmath>
#include <sstream>

#include "semcell/format.hpp"

namespace semcell {

std::string serialize_snapshot(const CellPopulation& pop) {
    std::string out = "semcell-snapshot v1 g=" + std::to_string(pop.config.g) +
                      " d=" + std::to_string(pop.config.d) + "\n";
    for (const auto& [item_id, cell] : pop.cells) {
        for (std::size_t j = 0; j < cell.chromosomes.size(); ++j) {
            out += item_id;
            out += '\t';
            out += std::to_string(j);
            out += '\t';
            const Chromosome& genes = cell.chromosomes[j];
            for (std::size_t k = 0; k < genes.size(); ++k) {
                if (k > 0) out += ' ';
                out += fmt_double_shortest(genes[k]);
            }
            out += '\n';
        }
    }
    return out;
}

void write_snapshot(const CellPopulation& pop, const std::string& path) {
    write_text_file(path, serialize_snapshot(pop));
}

CellPopulation read_snapshot(const std::string& path) {
    const std::string content = read_text_file(path);
    std::istringstream in(content);
    std::string line;
    if (!std::getline(in, line)) throw DataError(path + ": empty snapshot file");

    int g = 0;
    int d = 0;
    {
        std::istringstream header(line);
        std::string magic, version, g_field, d_field;
        header >> magic >> version >> g_field >> d_field;
        if (magic != "semcell-snapshot" || version != "v1" ||
            g_field.rfind("g=", 0) != 0 || d_field.rfind("d=", 0) != 0) {
            throw DataError(path + ": bad snapshot header: '" + line + "'");
        }
        g = static_cast<int>(parse_int64(g_field.substr(2), path + " header"));
        d = static_cast<int>(parse_int64(d_field.substr(2), path + " header"));
        if (g < 1 || d < 1) throw DataError(path + ": header g/d must be positive");
    }

    CellPopulation pop;
    pop.config.g = g;
    pop.config.d = d;

    std::size_t line_number = 1;
    while (std::getline(in, line)) {
        ++line_number;
        if (line.empty()) continue;
        const std::string context = path + ":" + std::to_string(line_number);

        const std::size_t tab1 = line.find('\t');
        const std::size_t tab2 = tab1 == std::string::npos ? std::string::npos : line.find('\t', tab1 + 1);
        if (tab2 == std::string::npos) {
            throw DataError(context + ": expected <item>\\t<j>\\t<genes>");
        }
        const std::string item_id = line.substr(0, tab1);
        validate_item_id(item_id);
        const std::int64_t j = parse_int64(line.substr(tab1 + 1, tab2 - tab1 - 1), context);
        if (j < 0 || j >= g) {
            throw DataError(context + ": chromosome index " + std::to_string(j) +
                            " out of range for g=" + std::to_string(g));
        }

        Chromosome genes;
        genes.reserve(static_cast<std::size_t>(d));
        std::string_view rest = std::string_view(line).substr(tab2 + 1);
        std::size_t pos = 0;
        while (pos < rest.size()) {
            std::size_t next = rest.find(' ', pos);
            if (next == std::string_view::npos) next = rest.size();
            if (next > pos) {
                const double value = parse_double(rest.substr(pos, next - pos), context);
                if (!std::isfinite(value)) throw DataError(context + ": non-finite gene value");
                genes.push_back(value);
            }
            pos = next + 1;
        }
        if (genes.size() != static_cast<std::size_t>(d)) {
            throw DataError(context + ": expected " + std::to_string(d) + " genes, found " +
                            std::to_string(genes.size()));
        }

        auto [it, inserted] = pop.cells.try_emplace(item_id);
        SemanticCell& cell = it->second;
        if (inserted) {
            cell.item_id = item_id;
            cell.chromosomes.resize(static_cast<std::size_t>(g));
        }
        if (!cell.chromosomes[static_cast<std::size_t>(j)].empty()) {
            throw DataError(context + ": duplicate chromosome " + std::to_string(j) +
                            " for item '" + item_id + "'");
        }
        cell.chromosomes[static_cast<std::size_t>(j)] = std::move(genes);
    }

    for (const auto& [item_id, cell] : pop.cells) {
        for (std::size_t j = 0; j < cell.chromosomes.size(); ++j) {
            if (cell.chromosomes[j].empty()) {
                throw DataError(path + ": item '" + item_id + "' is missing chromosome " +
                                std::to_string(j));
            }
        }
    }
    if (pop.cells.empty()) throw DataError(path + ": snapshot contains no cells");
    return pop;
}

} // namespace semcell
