#include "csw/sparse_vector.hpp"

#include <algorithm>
#include <sstream>

#include "csw/error.hpp"

namespace csw {

namespace {

auto lower(std::vector<SparseVector::Entry>& v, Position p) {
    return std::lower_bound(v.begin(), v.end(), p,
                            [](const SparseVector::Entry& e, Position q) { return e.first < q; });
}

auto lower(const std::vector<SparseVector::Entry>& v, Position p) {
    return std::lower_bound(v.begin(), v.end(), p,
                            [](const SparseVector::Entry& e, Position q) { return e.first < q; });
}

}  // namespace

SparseVector::SparseVector(std::initializer_list<Entry> entries) {
    for (const auto& [p, v] : entries) add(p, v);
}

SparseVector SparseVector::unit(Position p) {
    SparseVector out;
    out.entries_.emplace_back(p, Rational(1));
    return out;
}

Rational SparseVector::get(Position p) const {
    auto it = lower(entries_, p);
    if (it != entries_.end() && it->first == p) return it->second;
    return 0;
}

void SparseVector::set(Position p, const Rational& value) {
    auto it = lower(entries_, p);
    const bool present = it != entries_.end() && it->first == p;
    if (value == 0) {
        if (present) entries_.erase(it);
    } else if (present) {
        it->second = value;
    } else {
        entries_.emplace(it, p, value);
    }
}

void SparseVector::add(Position p, const Rational& value) {
    if (value == 0) return;
    auto it = lower(entries_, p);
    if (it != entries_.end() && it->first == p) {
        it->second += value;
        if (it->second == 0) entries_.erase(it);
    } else {
        entries_.emplace(it, p, value);
    }
}

std::vector<Position> SparseVector::support() const {
    std::vector<Position> out;
    out.reserve(entries_.size());
    for (const auto& e : entries_) out.push_back(e.first);
    return out;
}

SparseVector SparseVector::below(Position cut) const {
    SparseVector out;
    auto end = lower(entries_, cut);
    out.entries_.assign(entries_.begin(), end);
    return out;
}

SparseVector SparseVector::restricted_to(std::span<const Position> positions) const {
    SparseVector out;
    auto it = positions.begin();
    for (const auto& e : entries_) {
        while (it != positions.end() && *it < e.first) ++it;
        if (it == positions.end()) break;
        if (*it == e.first) out.entries_.push_back(e);
    }
    return out;
}

SparseVector SparseVector::transported(const std::function<Position(Position)>& map) const {
    SparseVector out;
    out.entries_.reserve(entries_.size());
    for (const auto& [p, v] : entries_) out.entries_.emplace_back(map(p), v);
    std::sort(out.entries_.begin(), out.entries_.end(),
              [](const Entry& a, const Entry& b) { return a.first < b.first; });
    return out;
}

SparseVector& SparseVector::operator+=(const SparseVector& other) {
    std::vector<Entry> merged;
    merged.reserve(entries_.size() + other.entries_.size());
    auto a = entries_.begin();
    auto b = other.entries_.begin();
    while (a != entries_.end() || b != other.entries_.end()) {
        if (b == other.entries_.end() || (a != entries_.end() && a->first < b->first)) {
            merged.push_back(std::move(*a++));
        } else if (a == entries_.end() || b->first < a->first) {
            merged.push_back(*b++);
        } else {
            Rational s = a->second + b->second;
            if (s != 0) merged.emplace_back(a->first, std::move(s));
            ++a;
            ++b;
        }
    }
    entries_ = std::move(merged);
    return *this;
}

SparseVector& SparseVector::operator-=(const SparseVector& other) {
    return *this += Rational(-1) * other;
}

SparseVector& SparseVector::operator*=(const Rational& scalar) {
    if (scalar == 0) {
        entries_.clear();
        return *this;
    }
    for (auto& e : entries_) e.second *= scalar;
    return *this;
}

bool operator==(const SparseVector& a, const SparseVector& b) {
    return a.entries_ == b.entries_;
}

bool operator<(const SparseVector& a, const SparseVector& b) {
    const auto n = std::min(a.entries_.size(), b.entries_.size());
    for (std::size_t i = 0; i < n; ++i) {
        const auto& x = a.entries_[i];
        const auto& y = b.entries_[i];
        if (x.first != y.first) return x.first < y.first;
        if (x.second != y.second) return x.second < y.second;
    }
    return a.entries_.size() < b.entries_.size();
}

SparseVector SparseVector::parse(const std::string& text) {
    SparseVector out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (item.find_first_not_of(" \t") == std::string::npos) continue;
        const auto colon = item.find(':');
        if (colon == std::string::npos) throw Error(ErrorCode::Parse, "expected pos:val, got '" + item + "'");
        const std::string pos = item.substr(0, colon);
        if (pos.empty() || pos.find_first_not_of(" 0123456789") != std::string::npos) {
            throw Error(ErrorCode::Parse, "bad position '" + pos + "'");
        }
        out.add(static_cast<Position>(std::stoul(pos)), parse_rational(item.substr(colon + 1)));
    }
    return out;
}

std::string SparseVector::to_string() const {
    std::string out;
    for (const auto& [p, v] : entries_) {
        if (!out.empty()) out += ',';
        out += std::to_string(p) + ':' + format_rational(v);
    }
    return out;
}

Rational pair(const SparseVector& f, const SparseVector& x) {
    Rational sum = 0;
    const auto& a = f.entries();
    const auto& b = x.entries();
    auto i = a.begin();
    auto j = b.begin();
    while (i != a.end() && j != b.end()) {
        if (i->first < j->first) {
            ++i;
        } else if (j->first < i->first) {
            ++j;
        } else {
            sum += i->second * j->second;
            ++i;
            ++j;
        }
    }
    return sum;
}

Rational max_abs_entry(const SparseVector& v) {
    Rational best = 0;
    for (const auto& e : v.entries()) best = std::max(best, abs_value(e.second));
    return best;
}

}  // namespace csw
