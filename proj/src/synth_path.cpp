#include "laryngen/synth.hpp"

#include <algorithm>
#include <bit>
#include <queue>
#include <unordered_set>

#include "laryngen/kernels.hpp"

namespace laryngen {

int path_cost(const GridGeometry& g, std::span<const SubBlockRef> selection,
              Adjacency adj, bool column_penalty) {
    const size_t n = selection.size();
    std::vector<int> gsx(n), gsy(n);
    for (size_t i = 0; i < n; ++i)
        g.global_from_subref(selection[i], gsx[i], gsy[i]);

    int cost = 0;
    for (size_t i = 0; i < n; ++i) {
        for (size_t j = i + 1; j < n; ++j) {
            int dx = std::abs(gsx[i] - gsx[j]);
            int dy = std::abs(gsy[i] - gsy[j]);
            bool adjacent = adj == Adjacency::EightWay ? (dx <= 1 && dy <= 1)
                                                       : (dx + dy == 1);
            if (adjacent)
                continue;
            if (dx == 0)
                ++cost; // row bands overlap
            if (column_penalty && dy == 0)
                ++cost;
        }
    }
    return cost;
}

std::vector<SubBlockRef> guessable_subblocks(const CellGrid& grid, Rect rect,
                                             SemClass placement_cls,
                                             std::optional<BlockRef> block) {
    const GridGeometry& g = grid.geometry();
    rect.x0 = std::max(rect.x0, 0);
    rect.y0 = std::max(rect.y0, 0);
    rect.x1 = std::min(rect.x1, g.height - 1);
    rect.y1 = std::min(rect.y1, g.width - 1);
    if (rect.x0 > rect.x1 || rect.y0 > rect.y1)
        return {};

    const uint8_t target = static_cast<uint8_t>(placement_cls);
    std::vector<SubBlockRef> out;
    for (int gsx = rect.x0 / g.sub_dim; gsx <= rect.x1 / g.sub_dim; ++gsx) {
        for (int gsy = rect.y0 / g.sub_dim; gsy <= rect.y1 / g.sub_dim; ++gsy) {
            SubBlockRef s = g.subref_from_global(gsx, gsy);
            if (block && s.idb != block->idb)
                continue;
            Rect r = g.subblock_rect(s);
            bool pure = true;
            for (int x = r.x0; x <= r.x1 && pure; ++x) {
                const uint8_t* row = grid.data() + static_cast<size_t>(x) * g.width + r.y0;
                pure = kernels::count_eq(row, g.sub_dim, target) ==
                       static_cast<size_t>(g.sub_dim);
            }
            if (pure)
                out.push_back(s);
        }
    }
    std::sort(out.begin(), out.end());
    return out;
}

namespace {

// Per-pair search state over a region of at most 64 sub-blocks, indexed by
// bitmask. The soft cost is monotone under insertion, so uniform-cost search
// pops goals in optimal order and subset enumeration needs no pruning.
struct PairSearch {
    std::vector<SubBlockRef> region;
    std::vector<uint64_t> adj_mask;
    std::vector<int> gsx, gsy;
    Adjacency adj;
    bool column_penalty;

    PairSearch(const GridGeometry& g, std::vector<SubBlockRef> reg, Adjacency a, bool colp)
        : region(std::move(reg)), adj(a), column_penalty(colp) {
        const size_t n = region.size();
        if (n > 64)
            throw Error("guessable region of " + std::to_string(n) +
                        " sub-blocks exceeds the 64 sub-block search limit");
        adj_mask.assign(n, 0);
        gsx.resize(n);
        gsy.resize(n);
        for (size_t i = 0; i < n; ++i)
            g.global_from_subref(region[i], gsx[i], gsy[i]);
        for (size_t i = 0; i < n; ++i) {
            for (size_t j = 0; j < n; ++j) {
                if (i == j)
                    continue;
                int dx = std::abs(gsx[i] - gsx[j]);
                int dy = std::abs(gsy[i] - gsy[j]);
                bool ok = adj == Adjacency::EightWay ? (dx <= 1 && dy <= 1)
                                                     : (dx + dy == 1);
                if (ok)
                    adj_mask[i] |= uint64_t(1) << j;
            }
        }
    }

    size_t size() const { return region.size(); }

    int pair_delta(uint64_t mask, size_t k) const {
        int d = 0;
        uint64_t rest = mask;
        while (rest) {
            size_t i = static_cast<size_t>(std::countr_zero(rest));
            rest &= rest - 1;
            if (adj_mask[k] & (uint64_t(1) << i))
                continue;
            if (gsx[i] == gsx[k])
                ++d;
            if (column_penalty && gsy[i] == gsy[k])
                ++d;
        }
        return d;
    }

    int cost_of(uint64_t mask) const {
        int c = 0;
        uint64_t rest = mask;
        while (rest) {
            size_t k = static_cast<size_t>(std::countr_zero(rest));
            rest &= rest - 1;
            c += pair_delta(rest, k);
        }
        return c;
    }

    bool connected(uint64_t mask) const {
        if (mask == 0)
            return false;
        uint64_t start = mask & (~mask + 1);
        uint64_t reach = start;
        while (true) {
            uint64_t grow = reach;
            uint64_t rest = reach;
            while (rest) {
                size_t i = static_cast<size_t>(std::countr_zero(rest));
                rest &= rest - 1;
                grow |= adj_mask[i] & mask;
            }
            if (grow == reach)
                break;
            reach = grow;
        }
        return reach == mask;
    }
};

struct PairResult {
    uint64_t mask = 0;
    int cost = 0;
};

// Complete enumeration of connected subsets containing `required`. Minimum
// cost wins, smaller selections break cost ties (the two pivot sub-blocks
// alone, when they already touch), and remaining ties are sampled uniformly.
std::optional<PairResult> enumerate_pair(const PairSearch& ps, uint64_t required,
                                         Rng& rng) {
    const uint64_t all = ps.size() == 64 ? ~uint64_t(0)
                                         : ((uint64_t(1) << ps.size()) - 1);
    const uint64_t free_bits = all & ~required;

    PairResult best;
    int best_size = 0;
    bool found = false;
    uint64_t ties = 0;

    uint64_t sub = 0;
    while (true) {
        uint64_t mask = required | sub;
        if (ps.connected(mask)) {
            int c = ps.cost_of(mask);
            int size = std::popcount(mask);
            if (!found || c < best.cost || (c == best.cost && size < best_size)) {
                best = {mask, c};
                best_size = size;
                found = true;
                ties = 1;
            } else if (c == best.cost && size == best_size) {
                ++ties;
                if (rng.bounded(ties) == 0)
                    best.mask = mask;
            }
        }
        if (sub == free_bits)
            break;
        sub = (sub - free_bits) & free_bits; // next superset pattern
    }
    if (!found)
        return std::nullopt;
    return best;
}

// Uniform-cost search growing a connected selection from one pivot sub-block
// until the other is covered. Optimal when the budget is not exhausted.
std::optional<PairResult> best_first_pair(const PairSearch& ps, size_t start,
                                          size_t goal, size_t node_budget, Rng& rng) {
    struct State {
        int cost;
        int size;
        uint64_t mask;
        bool operator>(const State& o) const {
            if (cost != o.cost) return cost > o.cost;
            if (size != o.size) return size > o.size;
            return mask > o.mask;
        }
    };

    std::priority_queue<State, std::vector<State>, std::greater<State>> pq;
    std::unordered_set<uint64_t> seen;
    pq.push({0, 1, uint64_t(1) << start});
    seen.insert(uint64_t(1) << start);

    const uint64_t goal_bit = uint64_t(1) << goal;
    std::vector<PairResult> goals;
    int goal_cost = -1, goal_size = -1;
    size_t expanded = 0;

    while (!pq.empty()) {
        State s = pq.top();
        pq.pop();
        if (goal_cost >= 0 &&
            (s.cost > goal_cost || (s.cost == goal_cost && s.size > goal_size)))
            break;
        if (s.mask & goal_bit) {
            goals.push_back({s.mask, s.cost});
            goal_cost = s.cost;
            goal_size = s.size;
            if (goals.size() >= 64)
                break;
            continue;
        }
        if (++expanded > node_budget)
            break;

        uint64_t frontier = 0;
        uint64_t rest = s.mask;
        while (rest) {
            size_t i = static_cast<size_t>(std::countr_zero(rest));
            rest &= rest - 1;
            frontier |= ps.adj_mask[i];
        }
        frontier &= ~s.mask;
        while (frontier) {
            size_t k = static_cast<size_t>(std::countr_zero(frontier));
            frontier &= frontier - 1;
            uint64_t nm = s.mask | (uint64_t(1) << k);
            if (!seen.insert(nm).second)
                continue;
            pq.push({s.cost + ps.pair_delta(s.mask, k), s.size + 1, nm});
        }
    }
    if (goals.empty())
        return std::nullopt;
    return goals[rng.bounded(goals.size())];
}

// Plain BFS chain from start to goal; feasibility fallback when the
// best-first budget trips.
std::optional<PairResult> bfs_chain(const PairSearch& ps, size_t start, size_t goal) {
    std::vector<int> prev(ps.size(), -1);
    std::vector<bool> vis(ps.size(), false);
    std::vector<size_t> queue{start};
    vis[start] = true;
    for (size_t qi = 0; qi < queue.size(); ++qi) {
        size_t i = queue[qi];
        if (i == goal)
            break;
        uint64_t rest = ps.adj_mask[i];
        while (rest) {
            size_t j = static_cast<size_t>(std::countr_zero(rest));
            rest &= rest - 1;
            if (!vis[j]) {
                vis[j] = true;
                prev[j] = static_cast<int>(i);
                queue.push_back(j);
            }
        }
    }
    if (!vis[goal])
        return std::nullopt;
    uint64_t mask = 0;
    for (int i = static_cast<int>(goal); i != -1; i = prev[i])
        mask |= uint64_t(1) << i;
    return PairResult{mask, ps.cost_of(mask)};
}

std::optional<size_t> index_of(const std::vector<SubBlockRef>& region, SubBlockRef s) {
    auto it = std::lower_bound(region.begin(), region.end(), s);
    if (it == region.end() || !(*it == s))
        return std::nullopt;
    return static_cast<size_t>(it - region.begin());
}

} // namespace

PathSelection connect_pivots(const CellGrid& grid,
                             const std::vector<ContourPivot>& pivots,
                             const ObjectSpec& spec, const ConnectScope& scope,
                             const SearchOptions& opt, Rng& rng) {
    const GridGeometry& g = grid.geometry();
    if (pivots.empty())
        throw ContractError("connect_pivots: no pivots");

    std::optional<Rect> clip;
    if (scope.block)
        clip = g.block_rect(*scope.block);

    const size_t n = pivots.size();
    std::vector<std::pair<size_t, size_t>> pairs;
    if (n == 1) {
        pairs.emplace_back(0, 0);
    } else if (scope.cyclic) {
        for (size_t i = 0; i < n; ++i)
            if (n > 2 || i < n - 1) // two pivots: one pair, not two
                pairs.emplace_back(i, (i + 1) % n);
    } else {
        for (size_t i = 0; i + 1 < n; ++i)
            pairs.emplace_back(i, i + 1);
    }

    std::vector<SubBlockRef> chosen;
    for (auto [ia, ib] : pairs) {
        Cell a = pivots[ia].position;
        Cell b = pivots[ib].position;
        SubBlockRef sa = cell_to_refs(g, a.x, a.y).second;
        SubBlockRef sb = cell_to_refs(g, b.x, b.y).second;

        Rect rect = bounding_rect(a, b, spec.rect_padding, clip ? &*clip : nullptr);
        std::vector<SubBlockRef> region =
            guessable_subblocks(grid, rect, scope.placement_cls, scope.block);
        // Pivot sub-blocks are forced into the path even when not wholly
        // placement-class; the fill step recolors only placement cells.
        for (SubBlockRef s : {sa, sb}) {
            auto it = std::lower_bound(region.begin(), region.end(), s);
            if (it == region.end() || !(*it == s))
                region.insert(it, s);
        }

        PairSearch ps(g, std::move(region), opt.adjacency, opt.column_penalty);
        size_t idx_a = *index_of(ps.region, sa);
        size_t idx_b = *index_of(ps.region, sb);
        uint64_t required = (uint64_t(1) << idx_a) | (uint64_t(1) << idx_b);

        std::optional<PairResult> res;
        if (ps.size() <= static_cast<size_t>(opt.exhaustive_bound)) {
            res = enumerate_pair(ps, required, rng);
        } else if (opt.exhaustive) {
            res = best_first_pair(ps, idx_a, idx_b, static_cast<size_t>(-1), rng);
        } else {
            res = best_first_pair(ps, idx_a, idx_b, opt.node_budget, rng);
            if (!res)
                res = bfs_chain(ps, idx_a, idx_b);
        }
        if (!res)
            throw InfeasibleError("no connected selection joins pivots " +
                                  std::to_string(pivots[ia].idfp) + " and " +
                                  std::to_string(pivots[ib].idfp));

        uint64_t rest = res->mask;
        while (rest) {
            size_t i = static_cast<size_t>(std::countr_zero(rest));
            rest &= rest - 1;
            chosen.push_back(ps.region[i]);
        }
    }

    std::sort(chosen.begin(), chosen.end());
    chosen.erase(std::unique(chosen.begin(), chosen.end()), chosen.end());

    PathSelection sel;
    sel.cost = path_cost(g, chosen, opt.adjacency, opt.column_penalty);
    sel.chosen = std::move(chosen);
    return sel;
}

} // namespace laryngen
