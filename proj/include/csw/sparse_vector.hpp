#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "csw/rational.hpp"

namespace csw {

using Position = std::uint32_t;

// Finitely supported rational vector. Entries are kept sorted by position
// with no explicit zeros, so equality is structural.
class SparseVector {
public:
    using Entry = std::pair<Position, Rational>;

    SparseVector() = default;
    SparseVector(std::initializer_list<Entry> entries);

    static SparseVector unit(Position p);

    Rational get(Position p) const;
    void set(Position p, const Rational& value);
    void add(Position p, const Rational& value);

    bool empty() const { return entries_.empty(); }
    std::size_t size() const { return entries_.size(); }
    const std::vector<Entry>& entries() const { return entries_; }
    std::vector<Position> support() const;

    // Positions strictly below `cut`.
    SparseVector below(Position cut) const;
    // Entries whose position is in the sorted list `positions`.
    SparseVector restricted_to(std::span<const Position> positions) const;
    SparseVector transported(const std::function<Position(Position)>& map) const;

    SparseVector& operator+=(const SparseVector& other);
    SparseVector& operator-=(const SparseVector& other);
    SparseVector& operator*=(const Rational& scalar);

    friend SparseVector operator+(SparseVector a, const SparseVector& b) { return a += b; }
    friend SparseVector operator-(SparseVector a, const SparseVector& b) { return a -= b; }
    friend SparseVector operator*(const Rational& s, SparseVector a) { return a *= s; }
    friend SparseVector operator-(SparseVector a) { return a *= Rational(-1); }

    friend bool operator==(const SparseVector& a, const SparseVector& b);
    friend bool operator<(const SparseVector& a, const SparseVector& b);

    // "pos:val,pos:val"
    static SparseVector parse(const std::string& text);
    std::string to_string() const;

private:
    std::vector<Entry> entries_;
};

// Exact inner product over the intersection of supports.
Rational pair(const SparseVector& f, const SparseVector& x);

Rational max_abs_entry(const SparseVector& v);

}  // namespace csw
