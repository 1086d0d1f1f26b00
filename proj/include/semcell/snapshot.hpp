#pragma once

#include <string>

#include "semcell/types.hpp"

namespace semcell {

// Line-oriented population snapshot:
//   semcell-snapshot v1 g=<g> d=<d>
//   <item_id>\t<j>\t<gene_1> ... <gene_d>
// Genes are printed as shortest round-trip decimals. Rows are sorted by
// item_id, then chromosome index.
std::string serialize_snapshot(const CellPopulation& pop);
void write_snapshot(const CellPopulation& pop, const std::string& path);

// Reads a snapshot back. Only g and d of the config are recoverable; the
// rest keeps defaults. Every cell must carry exactly g chromosomes.
CellPopulation read_snapshot(const std::string& path);

} // namespace semcell
