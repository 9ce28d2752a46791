#include "laryngen/synth.hpp"

#include <cstdlib>

// Exhaustive reference for the per-pair optimisation semantics. Kept free of
// the search machinery in synth_path.cpp on purpose: plain subset masks, a
// plain reachability loop, and the pairwise penalty written out directly.

namespace laryngen {

int brute_force_min_cost(const GridGeometry& g, Cell pivot_a, Cell pivot_b,
                         std::span<const SubBlockRef> guessable_region,
                         Adjacency adj, bool column_penalty) {
    const size_t n = guessable_region.size();
    if (n > 20)
        throw OracleBoundError("oracle bound exceeded: region has " +
                               std::to_string(n) + " sub-blocks (max 20)");

    SubBlockRef sa = cell_to_refs(g, pivot_a.x, pivot_a.y).second;
    SubBlockRef sb = cell_to_refs(g, pivot_b.x, pivot_b.y).second;
    uint32_t required = 0;
    std::vector<int> sx(n), sy(n);
    for (size_t i = 0; i < n; ++i) {
        g.global_from_subref(guessable_region[i], sx[i], sy[i]);
        if (guessable_region[i] == sa || guessable_region[i] == sb)
            required |= uint32_t(1) << i;
    }
    if (required == 0 || (sa != sb && (required & (required - 1)) == 0))
        throw ContractError("oracle: pivot sub-blocks are not in the region");

    auto adjacent = [&](size_t i, size_t j) {
        int dx = std::abs(sx[i] - sx[j]);
        int dy = std::abs(sy[i] - sy[j]);
        return adj == Adjacency::EightWay ? (dx <= 1 && dy <= 1 && (dx | dy) != 0)
                                          : (dx + dy == 1);
    };

    int best = -1;
    const uint32_t limit = uint32_t(1) << n;
    for (uint32_t mask = 0; mask < limit; ++mask) {
        if ((mask & required) != required)
            continue;

        // reachability from the lowest member, no early exit
        uint32_t reach = mask & (~mask + 1);
        bool grew = true;
        while (grew) {
            grew = false;
            for (size_t i = 0; i < n; ++i) {
                if (!(reach & (uint32_t(1) << i)))
                    continue;
                for (size_t j = 0; j < n; ++j) {
                    uint32_t bj = uint32_t(1) << j;
                    if ((mask & bj) && !(reach & bj) && adjacent(i, j)) {
                        reach |= bj;
                        grew = true;
                    }
                }
            }
        }
        if (reach != mask)
            continue;

        int cost = 0;
        for (size_t i = 0; i < n; ++i) {
            if (!(mask & (uint32_t(1) << i)))
                continue;
            for (size_t j = i + 1; j < n; ++j) {
                if (!(mask & (uint32_t(1) << j)) || adjacent(i, j))
                    continue;
                if (sx[i] == sx[j])
                    ++cost;
                if (column_penalty && sy[i] == sy[j])
                    ++cost;
            }
        }
        if (best < 0 || cost < best)
            best = cost;
    }
    if (best < 0)
        throw InfeasibleError("oracle: no connected subset joins the pivot sub-blocks");
    return best;
}

} // namespace laryngen
