#include "csw/capture.hpp"

#include <algorithm>
#include <limits>

namespace csw {

namespace {

std::vector<Position> intersect(std::span<const Position> a, std::span<const Position> b) {
    std::vector<Position> out;
    std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
    return out;
}

// Tries one candidate site; fills `chosen` with the lexicographically first
// member subsequence it captures.
bool capture_at(const Scheme& scheme, SetId site, const DeltaSystem& system, std::size_t t,
                std::vector<std::size_t>& chosen) {
    const auto& f = scheme.set(site);
    if (!std::includes(f.elements.begin(), f.elements.begin() + f.root_size, system.root.begin(), system.root.end())) {
        return false;
    }
    const auto kids = scheme.children(site);
    if (kids.size() < t) return false;
    const auto& first = scheme.set(kids[0]).elements;
    std::vector<PositionMap> maps;
    maps.reserve(t);
    for (std::size_t i = 0; i < t; ++i) maps.emplace_back(first, scheme.set(kids[i]).elements);

    const auto& members = system.members;
    for (std::size_t s0 = 0; s0 < members.size(); ++s0) {
        const auto& d0 = members[s0];
        if (!std::includes(first.begin(), first.end(), d0.begin(), d0.end())) continue;
        chosen.assign(1, s0);
        std::size_t next = s0 + 1;
        for (std::size_t i = 1; i < t; ++i) {
            const auto target = maps[i].image(d0);
            while (next < members.size() && members[next] != target) ++next;
            if (next == members.size()) break;
            chosen.push_back(next++);
        }
        if (chosen.size() == t) return true;
    }
    return false;
}

void check_t(const DeltaSystem& system, std::size_t t) {
    if (t == 0 || t > system.members.size()) {
        throw Error(ErrorCode::ParameterOutOfRange,
                    "t=" + std::to_string(t) + " with " + std::to_string(system.members.size()) + " members");
    }
}

}  // namespace

DeltaSystem is_delta_system(std::vector<std::vector<Position>> members) {
    if (members.empty()) throw Error(ErrorCode::NotDelta, "empty family");
    for (std::size_t i = 0; i < members.size(); ++i) {
        const auto& d = members[i];
        if (std::adjacent_find(d.begin(), d.end(), std::greater_equal<>()) != d.end()) {
            throw NotDeltaError(i, i, "member is not strictly increasing");
        }
        if (d.size() != members[0].size()) throw NotDeltaError(0, i, "members differ in size");
    }
    DeltaSystem out;
    if (members.size() == 1) {
        out.members = std::move(members);
        return out;
    }
    out.root = intersect(members[0], members[1]);
    const auto& root = out.root;
    for (std::size_t i = 0; i < members.size(); ++i) {
        for (std::size_t j = i + 1; j < members.size(); ++j) {
            if (intersect(members[i], members[j]) != root) throw NotDeltaError(i, j, "intersections differ");
        }
    }
    // Members contain the root, so each tail is what follows it.
    std::int64_t last = root.empty() ? -1 : static_cast<std::int64_t>(root.back());
    for (std::size_t i = 0; i < members.size(); ++i) {
        const auto& d = members[i];
        if (!std::equal(root.begin(), root.end(), d.begin())) throw NotDeltaError(0, std::max<std::size_t>(i, 1), "root is not an initial segment");
        if (d.size() == root.size()) continue;
        if (static_cast<std::int64_t>(d[root.size()]) <= last) {
            throw NotDeltaError(i == 0 ? 0 : i - 1, i, "tails are not increasing");
        }
        last = d.back();
    }
    out.members = std::move(members);
    return out;
}

bool captures(const Scheme& scheme, SetId site, const DeltaSystem& system, std::span<const std::size_t> chosen) {
    if (site.rank == 0 || chosen.empty()) return false;
    const auto& f = scheme.set(site);
    if (!std::includes(f.elements.begin(), f.elements.begin() + f.root_size, system.root.begin(), system.root.end())) {
        return false;
    }
    const auto kids = scheme.children(site);
    if (chosen.size() > kids.size()) return false;
    const auto& first = scheme.set(kids[0]).elements;
    const auto& d0 = system.members.at(chosen[0]);
    for (std::size_t i = 0; i < chosen.size(); ++i) {
        const auto& fi = scheme.set(kids[i]).elements;
        const auto& di = system.members.at(chosen[i]);
        if (i > 0 && chosen[i] <= chosen[i - 1]) return false;
        if (!std::includes(fi.begin(), fi.end(), di.begin(), di.end())) return false;
        if (position_map(first, fi).image(d0) != di) return false;
    }
    return true;
}

std::optional<Capture> find_capture_serial(const Scheme& scheme, const DeltaSystem& system, std::size_t t) {
    check_t(system, t);
    std::vector<std::size_t> chosen;
    for (int k = 1; k <= scheme.depth(); ++k) {
        if (scheme.type().n[k] < static_cast<std::int64_t>(t)) continue;
        for (std::uint32_t i = 0; i < scheme.level_size(k); ++i) {
            if (capture_at(scheme, {k, i}, system, t, chosen)) return Capture{{k, i}, chosen};
        }
    }
    return std::nullopt;
}

std::optional<Capture> find_capture(const Scheme& scheme, const DeltaSystem& system, std::size_t t) {
    check_t(system, t);
    for (int k = 1; k <= scheme.depth(); ++k) {
        if (scheme.type().n[k] < static_cast<std::int64_t>(t)) continue;
        const auto count = static_cast<std::int64_t>(scheme.level_size(k));
        std::int64_t best = std::numeric_limits<std::int64_t>::max();
#pragma omp parallel
        {
            std::vector<std::size_t> chosen;
            std::int64_t local = std::numeric_limits<std::int64_t>::max();
#pragma omp for schedule(dynamic, 16) nowait
            for (std::int64_t i = 0; i < count; ++i) {
                if (i < local && capture_at(scheme, {k, static_cast<std::uint32_t>(i)}, system, t, chosen)) local = i;
            }
#pragma omp critical
            best = std::min(best, local);
        }
        if (best != std::numeric_limits<std::int64_t>::max()) {
            std::vector<std::size_t> chosen;
            const SetId site{k, static_cast<std::uint32_t>(best)};
            capture_at(scheme, site, system, t, chosen);
            return Capture{site, chosen};
        }
    }
    return std::nullopt;
}

DeltaSystem make_captured_family(const Scheme& scheme, SetId site, std::span<const std::size_t> pattern_positions,
                                 std::size_t t) {
    const auto decomposition = canonical_decomposition(scheme, site);
    const auto& kids = decomposition.children;
    if (t == 0 || t > kids.size()) {
        throw Error(ErrorCode::PatternOutOfRange, "t=" + std::to_string(t) + " but n_k=" + std::to_string(kids.size()));
    }
    const auto& first = scheme.set(kids[0]).elements;
    if (pattern_positions.empty()) throw Error(ErrorCode::PatternOutOfRange, "empty pattern");
    std::vector<std::size_t> pos(pattern_positions.begin(), pattern_positions.end());
    std::sort(pos.begin(), pos.end());
    if (std::adjacent_find(pos.begin(), pos.end()) != pos.end() || pos.back() >= first.size()) {
        throw Error(ErrorCode::PatternOutOfRange, "pattern positions must be distinct and below |F_0|=" +
                                                      std::to_string(first.size()));
    }
    std::vector<Position> d0;
    for (auto p : pos) d0.push_back(first[p]);
    std::vector<std::vector<Position>> members;
    for (std::size_t i = 0; i < t; ++i) members.push_back(position_map(first, scheme.set(kids[i]).elements).image(d0));
    if (t == 1) return DeltaSystem{std::move(members), {}};
    return is_delta_system(std::move(members));
}

}  // namespace csw
