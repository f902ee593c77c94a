#pragma once

#include "mtmc/errors.hpp"

#include <cmath>
#include <cstdint>
#include <limits>
#include <type_traits>
#include <vector>

namespace mtmc {

// Dense cost matrix, row-major. The identity graph and the per-frame CLEAR
// matcher both pad their matrices square before solving, with the padding
// entries carrying the cost of leaving a node unmatched.
template <typename Cost>
struct CostMatrix {
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::vector<Cost> costs;

    CostMatrix() = default;
    CostMatrix(std::size_t r, std::size_t c, Cost fill = Cost{})
        : rows(r), cols(c), costs(r * c, fill) {}

    Cost& at(std::size_t r, std::size_t c) { return costs[r * cols + c]; }
    const Cost& at(std::size_t r, std::size_t c) const { return costs[r * cols + c]; }
    const Cost* row(std::size_t r) const { return costs.data() + r * cols; }
};

template <typename Cost>
struct AssignmentResult {
    std::vector<std::size_t> row_to_col;
    Cost total_cost = Cost{};
};

namespace detail {

template <typename Cost>
inline bool entry_valid(Cost c) {
    if constexpr (std::is_floating_point_v<Cost>) {
        if (!std::isfinite(c)) return false;
    }
    return c >= Cost{0};
}

} // namespace detail

// Exact minimum-cost one-to-one assignment over a square matrix via
// shortest augmenting paths with dual potentials, O(n^3). Rows are
// processed in input order and column scans break ties on the first
// minimum, so equal-cost optima resolve deterministically. Integer costs
// stay integral throughout.
template <typename Cost>
AssignmentResult<Cost> solve_min_cost_assignment(const CostMatrix<Cost>& m) {
    if (m.rows != m.cols)
        throw ValidationError("assignment requires a square matrix, got " +
                              std::to_string(m.rows) + "x" + std::to_string(m.cols));
    for (Cost c : m.costs)
        if (!detail::entry_valid(c))
            throw ValidationError("assignment costs must be finite and non-negative");

    const std::size_t n = m.rows;
    AssignmentResult<Cost> result;
    if (n == 0) return result;

    constexpr Cost kInf = std::numeric_limits<Cost>::max() / 4;

    // 1-based; p[j] is the row matched to column j, column 0 is virtual.
    std::vector<Cost> u(n + 1, Cost{}), v(n + 1, Cost{}), minv(n + 1);
    std::vector<std::size_t> p(n + 1, 0), way(n + 1, 0);
    std::vector<char> used(n + 1);

    for (std::size_t i = 1; i <= n; ++i) {
        p[0] = i;
        std::size_t j0 = 0;
        std::fill(minv.begin(), minv.end(), kInf);
        std::fill(used.begin(), used.end(), 0);
        do {
            used[j0] = 1;
            const std::size_t i0 = p[j0];
            const Cost* row = m.row(i0 - 1);
            Cost delta = kInf;
            std::size_t j1 = 0;
            for (std::size_t j = 1; j <= n; ++j) {
                if (used[j]) continue;
                const Cost cur = row[j - 1] - u[i0] - v[j];
                if (cur < minv[j]) {
                    minv[j] = cur;
                    way[j] = j0;
                }
                if (minv[j] < delta) {
                    delta = minv[j];
                    j1 = j;
                }
            }
            for (std::size_t j = 0; j <= n; ++j) {
                if (used[j]) {
                    u[p[j]] += delta;
                    v[j] -= delta;
                } else {
                    minv[j] -= delta;
                }
            }
            j0 = j1;
        } while (p[j0] != 0);
        do {
            const std::size_t j1 = way[j0];
            p[j0] = p[j1];
            j0 = j1;
        } while (j0 != 0);
    }

    result.row_to_col.assign(n, 0);
    for (std::size_t j = 1; j <= n; ++j) {
        result.row_to_col[p[j] - 1] = j - 1;
        result.total_cost += m.at(p[j] - 1, j - 1);
    }
    return result;
}

} // namespace mtmc
