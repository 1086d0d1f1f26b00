#include "semcell/rng.hpp"

#include <cmath>

namespace semcell {

Chromosome deterministic_unit_vector(std::uint64_t seed, std::string_view item, int d) {
    KeyedRng rng(seed, item, /*index=*/0);
    Chromosome v(static_cast<std::size_t>(d));
    for (;;) {
        double sumsq = 0.0;
        for (auto& x : v) {
            x = rng.next_symmetric(1.0);
            sumsq += x * x;
        }
        if (sumsq > 1e-12) {
            const double inv = 1.0 / std::sqrt(sumsq);
            for (auto& x : v) x *= inv;
            return v;
        }
        // near-zero draw, try the next values in the stream
    }
}

} // namespace semcell
