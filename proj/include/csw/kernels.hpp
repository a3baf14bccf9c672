#pragma once

// Data-parallel sweeps used by the checks and the norm. Every kernel has a
// serial reference next to its OpenMP version; both must return identical
// results (ties are broken by lowest index in both).

#include <cstddef>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "csw/lp.hpp"
#include "csw/scheme.hpp"
#include "csw/sparse_vector.hpp"

namespace csw::kernels {

// True iff a ∩ b is an initial segment of both sorted sequences.
bool intersection_is_initial(std::span<const Position> a, std::span<const Position> b);

// First pair (i < j) in lexicographic order whose intersection is not an
// initial segment of both.
using IndexPair = std::pair<std::size_t, std::size_t>;
std::optional<IndexPair> first_bad_intersection_serial(std::span<const SchemeSet> sets);
std::optional<IndexPair> first_bad_intersection_parallel(std::span<const SchemeSet> sets);

struct MaxPairing {
    Rational value;          // max |<f, x>|
    std::size_t index = 0;   // lowest index attaining it
};

MaxPairing max_abs_pairing_serial(std::span<const SparseVector> functionals, const SparseVector& x);
MaxPairing max_abs_pairing_parallel(std::span<const SparseVector> functionals, const SparseVector& x);

std::vector<DualNormResult> dual_norms_serial(std::span<const SparseVector> targets,
                                              std::span<const SparseVector> basis);
std::vector<DualNormResult> dual_norms_parallel(std::span<const SparseVector> targets,
                                                std::span<const SparseVector> basis);

}  // namespace csw::kernels
