#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "csw/sparse_vector.hpp"

namespace csw {

// Arithmetic profile (m_k, n_k, r_k) of a finite-depth scheme. n and r are
// stored with a dummy slot at index 0 so that n[k], r[k] read naturally.
struct TypeSpec {
    int depth = 0;
    std::vector<std::int64_t> m;  // 0..depth
    std::vector<std::int64_t> n;  // 1..depth, n[0] unused
    std::vector<std::int64_t> r;  // 1..depth, r[0] unused

    std::int64_t universe_size() const { return m.back(); }
    bool operator==(const TypeSpec&) const = default;
};

struct TypeViolation {
    int k;
    std::string constraint;
    std::string detail;
};

struct TypeValidation {
    std::optional<TypeSpec> spec;
    std::vector<TypeViolation> violations;

    bool ok() const { return spec.has_value(); }
};

// `n` and `r` are given for k = 1..depth (no dummy slot); depth = |m| - 1.
TypeValidation validate_type(std::span<const std::int64_t> m, std::span<const std::int64_t> n,
                             std::span<const std::int64_t> r);

// Inline form "m-list;n-list;r-list", e.g. "1,2,4;2,3;0,1". Throws on
// malformed text or an invalid type.
TypeSpec parse_type(const std::string& text);
std::string format_type(const TypeSpec& type);

struct SetId {
    int rank = 0;
    std::uint32_t index = 0;

    bool operator==(const SetId&) const = default;
    auto operator<=>(const SetId&) const = default;
    std::string to_string() const;
    static SetId parse(const std::string& text);
};

struct SchemeSet {
    std::vector<Position> elements;  // strictly increasing
    int rank = 0;
    std::size_t root_size = 0;

    std::span<const Position> root() const { return {elements.data(), root_size}; }
    std::size_t size() const { return elements.size(); }
    bool contains(Position p) const;
    bool contains_all(std::span<const Position> sorted) const;
    std::size_t position_of(Position p) const;  // index of p; throws if absent
};

struct Decomposition {
    std::vector<Position> root;
    std::vector<SetId> children;
};

// A finite construction scheme stored level by level. Levels are sorted
// lexicographically by elements; decomposition holds child indices into the
// level below. The object does not enforce the axioms itself, so that a
// deserialized (possibly corrupted) scheme can still be inspected by
// check_axioms.
class Scheme {
public:
    Scheme() = default;
    Scheme(TypeSpec type, std::vector<std::vector<SchemeSet>> levels,
           std::vector<std::vector<std::vector<std::uint32_t>>> children);

    const TypeSpec& type() const { return type_; }
    int depth() const { return type_.depth; }
    std::int64_t universe_size() const { return type_.universe_size(); }

    std::size_t level_size(int rank) const { return levels_.at(rank).size(); }
    std::span<const SchemeSet> level(int rank) const { return levels_.at(rank); }
    const SchemeSet& set(SetId id) const { return levels_.at(id.rank).at(id.index); }
    SetId top() const { return {depth(), 0}; }

    // Child indices are into level(rank - 1).
    std::span<const std::uint32_t> child_indices(SetId id) const;
    std::vector<SetId> children(SetId id) const;

    std::optional<SetId> find(std::span<const Position> elements) const;
    // Minimal-rank set containing every position of `support` (first in
    // lexicographic order among those found by descending from the top).
    std::optional<SetId> minimal_container(std::span<const Position> support) const;
    // All scheme sets E with E a subset of F, excluding F itself.
    std::vector<SetId> subsets_of(SetId id) const;
    std::size_t total_sets() const;

    bool operator==(const Scheme& other) const;

    // Mutable access for fault injection in tests and the loader.
    std::vector<std::vector<SchemeSet>>& mutable_levels() { return levels_; }

private:
    TypeSpec type_;
    std::vector<std::vector<SchemeSet>> levels_;
    std::vector<std::vector<std::vector<std::uint32_t>>> children_;
};

// Deterministic block-splitting scheme over [0, m[depth]).
Scheme build_scheme(const TypeSpec& type);

struct AxiomResult {
    std::string axiom;
    bool pass = true;
    std::string counterexample;
};

struct AxiomReport {
    std::vector<AxiomResult> results;

    bool ok() const;
    const AxiomResult* find(const std::string& axiom) const;
};

AxiomReport check_axioms(const Scheme& scheme);

Decomposition canonical_decomposition(const Scheme& scheme, SetId id);
Decomposition canonical_decomposition(const Scheme& scheme, std::span<const Position> elements);

// The unique increasing bijection between two equal-size sorted sequences.
class PositionMap {
public:
    PositionMap(std::vector<Position> source, std::vector<Position> target);

    Position operator()(Position p) const;
    Position inverse(Position p) const;
    const std::vector<Position>& source() const { return source_; }
    const std::vector<Position>& target() const { return target_; }
    std::vector<Position> image(std::span<const Position> sorted) const;
    SparseVector apply(const SparseVector& v) const;

private:
    std::vector<Position> source_;
    std::vector<Position> target_;
};

PositionMap position_map(std::span<const Position> source, std::span<const Position> target);

}  // namespace csw
