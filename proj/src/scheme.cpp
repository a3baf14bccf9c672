#include "csw/scheme.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <set>
#include <sstream>

#include "csw/error.hpp"
#include "csw/kernels.hpp"

namespace csw {

namespace {

std::vector<std::int64_t> parse_int_list(const std::string& text) {
    std::vector<std::int64_t> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        const auto first = item.find_first_not_of(" \t");
        if (first == std::string::npos) continue;
        item = item.substr(first, item.find_last_not_of(" \t") - first + 1);
        std::size_t used = 0;
        std::int64_t v = 0;
        try {
            v = std::stoll(item, &used);
        } catch (const std::exception&) {
            used = 0;
        }
        if (used != item.size()) throw Error(ErrorCode::Parse, "not an integer: '" + item + "'");
        out.push_back(v);
    }
    return out;
}

std::string join(std::span<const std::int64_t> xs) {
    std::string out;
    for (auto x : xs) {
        if (!out.empty()) out += ',';
        out += std::to_string(x);
    }
    return out;
}

std::string format_set(std::span<const Position> s) {
    std::string out = "{";
    for (std::size_t i = 0; i < s.size(); ++i) {
        if (i) out += ',';
        out += std::to_string(s[i]);
    }
    return out + "}";
}

bool strictly_increasing(std::span<const Position> s) {
    return std::adjacent_find(s.begin(), s.end(), std::greater_equal<>()) == s.end();
}

}  // namespace

TypeValidation validate_type(std::span<const std::int64_t> m, std::span<const std::int64_t> n,
                             std::span<const std::int64_t> r) {
    TypeValidation out;
    if (m.empty()) {
        out.violations.push_back({0, "ArityMismatch", "m must contain at least m_0"});
        return out;
    }
    const int depth = static_cast<int>(m.size()) - 1;
    if (n.size() != m.size() - 1 || r.size() != m.size() - 1) {
        out.violations.push_back({0, "ArityMismatch",
                                  "expected " + std::to_string(depth) + " entries in n and r, got " +
                                      std::to_string(n.size()) + " and " + std::to_string(r.size())});
        return out;
    }
    if (m[0] != 1) out.violations.push_back({0, "m_0 = 1", "m_0 = " + std::to_string(m[0])});
    for (int k = 1; k <= depth; ++k) {
        const auto mk = m[k], mp = m[k - 1], nk = n[k - 1], rk = r[k - 1];
        if (nk <= k) {
            out.violations.push_back({k, "n_k > k", "n_" + std::to_string(k) + " = " + std::to_string(nk)});
        }
        if (rk < 0) {
            out.violations.push_back({k, "r_k >= 0", "r_" + std::to_string(k) + " = " + std::to_string(rk)});
        }
        if (rk >= mp) {
            out.violations.push_back({k, "r_k < m_{k-1}",
                                      "r_" + std::to_string(k) + " = " + std::to_string(rk) + ", m_" +
                                          std::to_string(k - 1) + " = " + std::to_string(mp)});
        }
        const auto expected = nk * (mp - rk) + rk;
        if (mk != expected) {
            out.violations.push_back({k, "m_k = n_k(m_{k-1}-r_k)+r_k",
                                      "m_" + std::to_string(k) + " = " + std::to_string(mk) + " but " +
                                          std::to_string(nk) + "*(" + std::to_string(mp) + "-" +
                                          std::to_string(rk) + ")+" + std::to_string(rk) + " = " +
                                          std::to_string(expected)});
        }
    }
    if (!out.violations.empty()) return out;
    TypeSpec spec;
    spec.depth = depth;
    spec.m.assign(m.begin(), m.end());
    spec.n.push_back(0);
    spec.n.insert(spec.n.end(), n.begin(), n.end());
    spec.r.push_back(0);
    spec.r.insert(spec.r.end(), r.begin(), r.end());
    out.spec = std::move(spec);
    return out;
}

TypeSpec parse_type(const std::string& text) {
    std::vector<std::string> parts;
    std::stringstream ss(text);
    std::string part;
    while (std::getline(ss, part, ';')) parts.push_back(part);
    while (parts.size() < 3) parts.emplace_back();
    if (parts.size() != 3) throw Error(ErrorCode::Parse, "type must be 'm-list;n-list;r-list'");
    const auto m = parse_int_list(parts[0]);
    const auto n = parse_int_list(parts[1]);
    const auto r = parse_int_list(parts[2]);
    auto v = validate_type(m, n, r);
    if (!v.ok()) {
        const auto& first = v.violations.front();
        throw Error(first.constraint == "ArityMismatch" ? ErrorCode::ArityMismatch : ErrorCode::ConstraintViolation,
                    "k=" + std::to_string(first.k) + " " + first.constraint + " (" + first.detail + ")");
    }
    return *v.spec;
}

std::string format_type(const TypeSpec& type) {
    std::span<const std::int64_t> n(type.n);
    std::span<const std::int64_t> r(type.r);
    return join(type.m) + ";" + join(n.subspan(1)) + ";" + join(r.subspan(1));
}

std::string SetId::to_string() const { return std::to_string(rank) + ":" + std::to_string(index); }

SetId SetId::parse(const std::string& text) {
    const auto colon = text.find(':');
    if (colon == std::string::npos) throw Error(ErrorCode::Parse, "set id must be 'rank:index'");
    try {
        return {std::stoi(text.substr(0, colon)), static_cast<std::uint32_t>(std::stoul(text.substr(colon + 1)))};
    } catch (const std::exception&) {
        throw Error(ErrorCode::Parse, "bad set id '" + text + "'");
    }
}

bool SchemeSet::contains(Position p) const {
    return std::binary_search(elements.begin(), elements.end(), p);
}

bool SchemeSet::contains_all(std::span<const Position> sorted) const {
    return std::includes(elements.begin(), elements.end(), sorted.begin(), sorted.end());
}

std::size_t SchemeSet::position_of(Position p) const {
    auto it = std::lower_bound(elements.begin(), elements.end(), p);
    if (it == elements.end() || *it != p) {
        throw Error(ErrorCode::NotInScheme, std::to_string(p) + " not in " + format_set(elements));
    }
    return static_cast<std::size_t>(it - elements.begin());
}

Scheme::Scheme(TypeSpec type, std::vector<std::vector<SchemeSet>> levels,
               std::vector<std::vector<std::vector<std::uint32_t>>> children)
    : type_(std::move(type)), levels_(std::move(levels)), children_(std::move(children)) {}

std::span<const std::uint32_t> Scheme::child_indices(SetId id) const {
    if (id.rank == 0) return {};
    return children_.at(id.rank).at(id.index);
}

std::vector<SetId> Scheme::children(SetId id) const {
    std::vector<SetId> out;
    for (auto c : child_indices(id)) out.push_back({id.rank - 1, c});
    return out;
}

std::optional<SetId> Scheme::find(std::span<const Position> elements) const {
    for (int k = 0; k < static_cast<int>(levels_.size()); ++k) {
        const auto& lvl = levels_[k];
        auto it = std::lower_bound(lvl.begin(), lvl.end(), elements, [](const SchemeSet& s, std::span<const Position> e) {
            return std::lexicographical_compare(s.elements.begin(), s.elements.end(), e.begin(), e.end());
        });
        if (it != lvl.end() && std::equal(it->elements.begin(), it->elements.end(), elements.begin(), elements.end())) {
            return SetId{k, static_cast<std::uint32_t>(it - lvl.begin())};
        }
    }
    return std::nullopt;
}

std::optional<SetId> Scheme::minimal_container(std::span<const Position> support) const {
    if (levels_.empty() || levels_.back().empty()) return std::nullopt;
    SetId cur = top();
    if (!set(cur).contains_all(support)) return std::nullopt;
    while (cur.rank > 0) {
        bool descended = false;
        for (auto c : child_indices(cur)) {
            SetId child{cur.rank - 1, c};
            if (set(child).contains_all(support)) {
                cur = child;
                descended = true;
                break;
            }
        }
        if (!descended) break;
    }
    return cur;
}

std::vector<SetId> Scheme::subsets_of(SetId id) const {
    std::set<SetId> seen;
    std::vector<SetId> frontier{id};
    while (!frontier.empty()) {
        SetId cur = frontier.back();
        frontier.pop_back();
        for (auto c : child_indices(cur)) {
            SetId child{cur.rank - 1, c};
            if (seen.insert(child).second) frontier.push_back(child);
        }
    }
    return {seen.begin(), seen.end()};
}

std::size_t Scheme::total_sets() const {
    std::size_t total = 0;
    for (const auto& lvl : levels_) total += lvl.size();
    return total;
}

bool Scheme::operator==(const Scheme& other) const {
    if (!(type_ == other.type_) || levels_.size() != other.levels_.size() || children_ != other.children_) return false;
    for (std::size_t k = 0; k < levels_.size(); ++k) {
        if (levels_[k].size() != other.levels_[k].size()) return false;
        for (std::size_t i = 0; i < levels_[k].size(); ++i) {
            const auto& a = levels_[k][i];
            const auto& b = other.levels_[k][i];
            if (a.elements != b.elements || a.rank != b.rank || a.root_size != b.root_size) return false;
        }
    }
    return true;
}

Scheme build_scheme(const TypeSpec& type) {
    const int depth = type.depth;
    std::vector<std::vector<SchemeSet>> levels(depth + 1);
    std::vector<std::vector<std::vector<std::uint32_t>>> children(depth + 1);

    std::vector<Position> universe(static_cast<std::size_t>(type.universe_size()));
    std::iota(universe.begin(), universe.end(), Position{0});
    levels[depth].push_back({universe, depth, depth > 0 ? static_cast<std::size_t>(type.r[depth]) : 0});

    for (int k = depth; k > 0; --k) {
        const auto rk = static_cast<std::size_t>(type.r[k]);
        const auto nk = static_cast<std::size_t>(type.n[k]);
        const auto block = static_cast<std::size_t>(type.m[k - 1]) - rk;
        const std::size_t child_root = k - 1 > 0 ? static_cast<std::size_t>(type.r[k - 1]) : 0;

        std::vector<std::vector<std::vector<Position>>> parts(levels[k].size());
        std::set<std::vector<Position>> below;
        for (std::size_t p = 0; p < levels[k].size(); ++p) {
            const auto& e = levels[k][p].elements;
            for (std::size_t i = 0; i < nk; ++i) {
                std::vector<Position> child(e.begin(), e.begin() + rk);
                auto first = e.begin() + rk + i * block;
                child.insert(child.end(), first, first + block);
                below.insert(child);
                parts[p].push_back(std::move(child));
            }
        }
        levels[k - 1].reserve(below.size());
        for (const auto& c : below) levels[k - 1].push_back({c, k - 1, child_root});
        children[k].resize(levels[k].size());
        for (std::size_t p = 0; p < parts.size(); ++p) {
            for (const auto& c : parts[p]) {
                auto it = below.find(c);
                children[k][p].push_back(static_cast<std::uint32_t>(std::distance(below.begin(), it)));
            }
        }
    }
    return Scheme(type, std::move(levels), std::move(children));
}

bool AxiomReport::ok() const {
    return std::all_of(results.begin(), results.end(), [](const AxiomResult& r) { return r.pass; });
}

const AxiomResult* AxiomReport::find(const std::string& axiom) const {
    for (const auto& r : results) {
        if (r.axiom == axiom) return &r;
    }
    return nullptr;
}

AxiomReport check_axioms(const Scheme& scheme) {
    AxiomReport report;
    const auto& type = scheme.type();

    AxiomResult type_ok{"type", true, ""};
    {
        std::span<const std::int64_t> n(type.n), r(type.r);
        auto v = type.m.empty() || n.empty() || r.empty()
                     ? validate_type(type.m, {}, {})
                     : validate_type(type.m, n.subspan(1), r.subspan(1));
        if (!v.ok()) {
            type_ok.pass = false;
            type_ok.counterexample = "k=" + std::to_string(v.violations[0].k) + " " + v.violations[0].constraint;
        }
    }
    report.results.push_back(type_ok);
    if (!type_ok.pass || static_cast<int>(type.m.size()) != scheme.depth() + 1) return report;

    const int depth = scheme.depth();
    bool levels_present = true;
    for (int k = 0; k <= depth; ++k) {
        try {
            (void)scheme.level(k);
        } catch (const std::out_of_range&) {
            levels_present = false;
        }
    }
    if (!levels_present) {
        report.results.push_back({"structure", false, "missing levels"});
        return report;
    }

    AxiomResult sorted{"sorted", true, ""};
    for (int k = 0; k <= depth && sorted.pass; ++k) {
        for (const auto& s : scheme.level(k)) {
            const bool in_range = std::all_of(s.elements.begin(), s.elements.end(),
                                              [&](Position p) { return p < scheme.universe_size(); });
            if (!strictly_increasing(s.elements) || !in_range) {
                sorted.pass = false;
                sorted.counterexample = "rank " + std::to_string(k) + " set " + format_set(s.elements);
                break;
            }
        }
    }
    report.results.push_back(sorted);

    AxiomResult size{"size", true, ""};
    for (int k = 0; k <= depth && size.pass; ++k) {
        const auto expected_root = k > 0 ? static_cast<std::size_t>(type.r[k]) : 0;
        for (const auto& s : scheme.level(k)) {
            if (static_cast<std::int64_t>(s.size()) != type.m[k] || s.root_size != expected_root || s.rank != k) {
                size.pass = false;
                size.counterexample = "rank " + std::to_string(k) + " set " + format_set(s.elements) + " has |F|=" +
                                      std::to_string(s.size()) + ", |R(F)|=" + std::to_string(s.root_size) +
                                      "; expected " + std::to_string(type.m[k]) + ", " + std::to_string(expected_root);
                break;
            }
        }
    }
    report.results.push_back(size);

    AxiomResult cover{"cover", true, ""};
    {
        std::vector<Position> universe(static_cast<std::size_t>(scheme.universe_size()));
        std::iota(universe.begin(), universe.end(), Position{0});
        const auto& top = scheme.level(depth);
        if (top.size() != 1 || top[0].elements != universe) {
            cover.pass = false;
            cover.counterexample = "top level must be exactly the universe [0," + std::to_string(universe.size()) + ")";
        } else {
            const auto& singles = scheme.level(0);
            bool all = singles.size() == universe.size();
            for (std::size_t i = 0; all && i < singles.size(); ++i) {
                all = singles[i].elements == std::vector<Position>{static_cast<Position>(i)};
            }
            if (!all) {
                cover.pass = false;
                cover.counterexample = "rank 0 must be all singletons of the universe";
            }
        }
    }
    report.results.push_back(cover);

    AxiomResult initial{"initial_segment", true, ""};
    for (int k = 0; k <= depth && initial.pass; ++k) {
        if (auto bad = kernels::first_bad_intersection_parallel(scheme.level(k))) {
            initial.pass = false;
            initial.counterexample = "rank " + std::to_string(k) + ": " +
                                     format_set(scheme.level(k)[bad->first].elements) + " and " +
                                     format_set(scheme.level(k)[bad->second].elements);
        }
    }
    report.results.push_back(initial);

    AxiomResult decomposition{"decomposition", true, ""};
    for (int k = 1; k <= depth && decomposition.pass; ++k) {
        for (std::uint32_t p = 0; p < scheme.level_size(k) && decomposition.pass; ++p) {
            const SetId id{k, p};
            const auto& f = scheme.set(id);
            auto fail = [&](const std::string& why) {
                decomposition.pass = false;
                decomposition.counterexample = "rank " + std::to_string(k) + " set " + format_set(f.elements) + ": " + why;
            };
            std::span<const std::uint32_t> idx;
            try {
                idx = scheme.child_indices(id);
            } catch (const std::out_of_range&) {
                fail("no decomposition");
                break;
            }
            if (static_cast<std::int64_t>(idx.size()) != type.n[k]) {
                fail(std::to_string(idx.size()) + " children, expected n_k=" + std::to_string(type.n[k]));
                break;
            }
            if (std::any_of(idx.begin(), idx.end(), [&](std::uint32_t c) { return c >= scheme.level_size(k - 1); })) {
                fail("child index out of range");
                break;
            }
            const auto root = f.root();
            std::set<Position> uni;
            std::vector<Position> prev_tail;
            for (std::size_t i = 0; i < idx.size() && decomposition.pass; ++i) {
                const auto& c = scheme.set({k - 1, idx[i]}).elements;
                uni.insert(c.begin(), c.end());
                if (!std::equal(root.begin(), root.end(), c.begin(), c.begin() + std::min(c.size(), root.size())) ||
                    c.size() < root.size()) {
                    fail("child " + format_set(c) + " does not start with root " + format_set(root));
                    break;
                }
                std::vector<Position> tail(c.begin() + root.size(), c.end());
                if (!root.empty() && !tail.empty() && tail.front() <= root.back()) {
                    fail("R(F) < F_i minus R(F) violated at child " + std::to_string(i));
                    break;
                }
                if (!prev_tail.empty() && !tail.empty() && tail.front() <= prev_tail.back()) {
                    fail("children not increasing at " + std::to_string(i));
                    break;
                }
                if (!tail.empty()) prev_tail = std::move(tail);
            }
            if (decomposition.pass && !std::equal(uni.begin(), uni.end(), f.elements.begin(), f.elements.end())) {
                fail("union of children differs from F");
            }
        }
    }
    report.results.push_back(decomposition);
    return report;
}

Decomposition canonical_decomposition(const Scheme& scheme, SetId id) {
    if (id.rank < 0 || id.rank > scheme.depth() || id.index >= scheme.level_size(id.rank)) {
        throw Error(ErrorCode::NotInScheme, "no set " + id.to_string());
    }
    if (id.rank == 0) throw Error(ErrorCode::RankZero, "rank-0 sets have no decomposition");
    const auto& f = scheme.set(id);
    return {std::vector<Position>(f.root().begin(), f.root().end()), scheme.children(id)};
}

Decomposition canonical_decomposition(const Scheme& scheme, std::span<const Position> elements) {
    auto id = scheme.find(elements);
    if (!id) throw Error(ErrorCode::NotInScheme, format_set(elements) + " is not a scheme set");
    return canonical_decomposition(scheme, *id);
}

PositionMap::PositionMap(std::vector<Position> source, std::vector<Position> target)
    : source_(std::move(source)), target_(std::move(target)) {
    if (source_.size() != target_.size()) {
        throw Error(ErrorCode::LengthMismatch, std::to_string(source_.size()) + " vs " + std::to_string(target_.size()));
    }
}

Position PositionMap::operator()(Position p) const {
    auto it = std::lower_bound(source_.begin(), source_.end(), p);
    if (it == source_.end() || *it != p) throw Error(ErrorCode::NotInScheme, std::to_string(p) + " outside map domain");
    return target_[static_cast<std::size_t>(it - source_.begin())];
}

Position PositionMap::inverse(Position p) const {
    auto it = std::lower_bound(target_.begin(), target_.end(), p);
    if (it == target_.end() || *it != p) throw Error(ErrorCode::NotInScheme, std::to_string(p) + " outside map range");
    return source_[static_cast<std::size_t>(it - target_.begin())];
}

std::vector<Position> PositionMap::image(std::span<const Position> sorted) const {
    std::vector<Position> out;
    out.reserve(sorted.size());
    for (auto p : sorted) out.push_back((*this)(p));
    return out;
}

SparseVector PositionMap::apply(const SparseVector& v) const {
    return v.transported([this](Position p) { return (*this)(p); });
}

PositionMap position_map(std::span<const Position> source, std::span<const Position> target) {
    return PositionMap({source.begin(), source.end()}, {target.begin(), target.end()});
}

}  // namespace csw
