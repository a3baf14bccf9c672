#include "csw/kernels.hpp"

#include <algorithm>
#include <limits>

namespace csw::kernels {

bool intersection_is_initial(std::span<const Position> a, std::span<const Position> b) {
    std::size_t p = 0;
    while (p < a.size() && p < b.size() && a[p] == b[p]) ++p;
    // Past the common prefix the sets must be disjoint.
    std::size_t i = p, j = p;
    while (i < a.size() && j < b.size()) {
        if (a[i] == b[j]) return false;
        if (a[i] < b[j]) {
            ++i;
        } else {
            ++j;
        }
    }
    return true;
}

std::optional<IndexPair> first_bad_intersection_serial(std::span<const SchemeSet> sets) {
    for (std::size_t i = 0; i < sets.size(); ++i) {
        for (std::size_t j = i + 1; j < sets.size(); ++j) {
            if (!intersection_is_initial(sets[i].elements, sets[j].elements)) return IndexPair{i, j};
        }
    }
    return std::nullopt;
}

std::optional<IndexPair> first_bad_intersection_parallel(std::span<const SchemeSet> sets) {
    const auto n = static_cast<std::int64_t>(sets.size());
    std::int64_t best_i = std::numeric_limits<std::int64_t>::max();
    std::size_t best_j = 0;
#pragma omp parallel
    {
        std::int64_t li = std::numeric_limits<std::int64_t>::max();
        std::size_t lj = 0;
#pragma omp for schedule(dynamic, 8) nowait
        for (std::int64_t i = 0; i < n; ++i) {
            if (i >= li) continue;
            for (std::int64_t j = i + 1; j < n; ++j) {
                if (!intersection_is_initial(sets[i].elements, sets[j].elements)) {
                    li = i;
                    lj = static_cast<std::size_t>(j);
                    break;
                }
            }
        }
#pragma omp critical
        if (li < best_i) {
            best_i = li;
            best_j = lj;
        }
    }
    if (best_i == std::numeric_limits<std::int64_t>::max()) return std::nullopt;
    return IndexPair{static_cast<std::size_t>(best_i), best_j};
}

MaxPairing max_abs_pairing_serial(std::span<const SparseVector> functionals, const SparseVector& x) {
    MaxPairing out;
    out.value = 0;
    for (std::size_t i = 0; i < functionals.size(); ++i) {
        Rational v = abs_value(pair(functionals[i], x));
        if (v > out.value) {
            out.value = std::move(v);
            out.index = i;
        }
    }
    return out;
}

MaxPairing max_abs_pairing_parallel(std::span<const SparseVector> functionals, const SparseVector& x) {
    const auto n = static_cast<std::int64_t>(functionals.size());
    if (n < 64) return max_abs_pairing_serial(functionals, x);
    MaxPairing out;
    out.value = 0;
#pragma omp parallel
    {
        MaxPairing local;
        local.value = 0;
#pragma omp for schedule(static) nowait
        for (std::int64_t i = 0; i < n; ++i) {
            Rational v = abs_value(pair(functionals[i], x));
            if (v > local.value) {
                local.value = std::move(v);
                local.index = static_cast<std::size_t>(i);
            }
        }
#pragma omp critical
        if (local.value > out.value || (local.value == out.value && local.value > 0 && local.index < out.index)) {
            out = local;
        }
    }
    return out;
}

std::vector<DualNormResult> dual_norms_serial(std::span<const SparseVector> targets, std::span<const SparseVector> basis) {
    std::vector<DualNormResult> out;
    out.reserve(targets.size());
    for (const auto& g : targets) out.push_back(dual_norm_solve(g, basis));
    return out;
}

std::vector<DualNormResult> dual_norms_parallel(std::span<const SparseVector> targets, std::span<const SparseVector> basis) {
    std::vector<DualNormResult> out(targets.size());
    const auto n = static_cast<std::int64_t>(targets.size());
#pragma omp parallel for schedule(dynamic, 1)
    for (std::int64_t i = 0; i < n; ++i) out[i] = dual_norm_solve(targets[i], basis);
    return out;
}

}  // namespace csw::kernels
