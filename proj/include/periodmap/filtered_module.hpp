#pragma once

#include <algorithm>
#include <vector>

#include "periodmap/series.hpp"

namespace periodmap {

/* Finite free module over R_S with an adapted graded basis: basis vector a
 * lives in level levels[a], the decreasing filtration is
 *   F^p = span{ e_a : levels[a] >= p },
 * and the same grading realizes the splitting H = (+) H^{p, weight-p}.
 * Levels may repeat or skip; empty graded pieces are fine. */
struct FilteredModule {
    int rank = 0;
    std::vector<int> levels;
    int weight = 0;
    int s = 0;  // coefficient ring parameters
    int n = 0;

    FilteredModule() = default;
    FilteredModule(std::vector<int> lv, int wt, int s_, int n_)
        : rank((int)lv.size()), levels(std::move(lv)), weight(wt), s(s_), n(n_) {}

    int min_level() const {
        return levels.empty() ? 0 : *std::min_element(levels.begin(), levels.end());
    }
    int max_level() const {
        return levels.empty() ? 0 : *std::max_element(levels.begin(), levels.end());
    }

    // Indices of the adapted basis vectors spanning F^p.
    std::vector<int> filtration_basis(int p) const {
        std::vector<int> idx;
        for (int a = 0; a < rank; ++a)
            if (levels[a] >= p) idx.push_back(a);
        return idx;
    }

    // Degree of the (b, a) matrix position as a graded endomorphism.
    int entry_degree(int b, int a) const { return levels[b] - levels[a]; }
};

}  // namespace periodmap
