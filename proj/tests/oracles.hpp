#pragma once
// Independent reference computations used only by the tests. They work on
// plain containers and recompute everything from the type, without going
// through Scheme, the simplex or the family builders.

#include <algorithm>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <vector>

#include "csw/rational.hpp"
#include "csw/scheme.hpp"
#include "csw/sparse_vector.hpp"

namespace oracle {

using csw::Position;
using csw::Rational;
using Dense = std::map<Position, Rational>;
using Elements = std::vector<Position>;

inline csw::SparseVector to_sparse(const Dense& d) {
    csw::SparseVector v;
    for (const auto& [p, q] : d) v.add(p, q);
    return v;
}

// ---- scheme ---------------------------------------------------------------

// Pieces of a rank-k set by the block rule: root = first r_k points, then
// n_k consecutive blocks of m_{k-1} - r_k points.
inline std::vector<Elements> pieces(const csw::TypeSpec& t, int k, const Elements& f) {
    const auto r = static_cast<std::size_t>(t.r[k]);
    const auto b = static_cast<std::size_t>(t.m[k - 1] - t.r[k]);
    std::vector<Elements> out;
    for (std::int64_t i = 0; i < t.n[k]; ++i) {
        Elements p(f.begin(), f.begin() + r);
        p.insert(p.end(), f.begin() + r + i * b, f.begin() + r + (i + 1) * b);
        out.push_back(p);
    }
    return out;
}

// Every set of every rank, by recursive expansion of the top set.
inline std::vector<std::set<Elements>> all_sets(const csw::TypeSpec& t) {
    std::vector<std::set<Elements>> levels(t.depth + 1);
    Elements top(t.m.back());
    for (std::size_t i = 0; i < top.size(); ++i) top[i] = static_cast<Position>(i);
    std::function<void(int, const Elements&)> go = [&](int k, const Elements& f) {
        if (!levels[k].insert(f).second) return;
        if (k == 0) return;
        for (const auto& p : pieces(t, k, f)) go(k - 1, p);
    };
    go(t.depth, top);
    return levels;
}

inline bool initial_segment_of_both(const Elements& a, const Elements& b) {
    Elements common;
    std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(common));
    return std::equal(common.begin(), common.end(), a.begin()) && std::equal(common.begin(), common.end(), b.begin());
}

// ---- ε family -------------------------------------------------------------

inline Dense transport(const Dense& h, const Elements& from, const Elements& to) {
    Dense out;
    for (const auto& [p, q] : h) {
        const auto at = std::find(from.begin(), from.end(), p) - from.begin();
        out[to[at]] = q;
    }
    return out;
}

// h_α^F for every α ∈ F, straight from the four amalgamation rules.
inline std::map<Position, Dense> eps_family(const csw::TypeSpec& t, int k, const Elements& f, const Rational& eps) {
    std::map<Position, Dense> out;
    if (k == 0) {
        out[f[0]][f[0]] = 1;
        return out;
    }
    const auto ps = pieces(t, k, f);
    const auto r = static_cast<std::size_t>(t.r[k]);
    const auto h0 = eps_family(t, k - 1, ps[0], eps);
    auto tail_sum = [&](const Dense& h, int sign_offset) {
        Dense s;
        for (std::size_t i = 2; i < ps.size(); ++i) {
            const Rational sign = ((i + sign_offset) % 2 == 0) ? 1 : -1;
            for (const auto& [p, q] : transport(h, ps[0], ps[i])) {
                if (std::find(ps[i].begin(), ps[i].begin() + r, p) == ps[i].begin() + r) s[p] += eps * sign * q;
            }
        }
        return s;
    };
    for (std::size_t a = 0; a < f.size(); ++a) {
        const Position alpha = f[a];
        Dense h;
        if (a < r) {
            for (const auto& p : ps) {
                for (const auto& [pos, q] : transport(h0.at(alpha), ps[0], p)) h[pos] = q;
            }
        } else if (a < ps[0].size()) {
            h = h0.at(alpha);
            for (const auto& [p, q] : tail_sum(h0.at(alpha), 0)) h[p] += q;
        } else {
            const std::size_t j = (a - r) / (ps[0].size() - r);
            if (j == 1) {
                const Position beta = ps[0][r + (a - r) % (ps[0].size() - r)];
                h = transport(h0.at(beta), ps[0], ps[1]);
                for (const auto& [p, q] : tail_sum(h0.at(beta), 1)) h[p] += q;
            } else {
                h = eps_family(t, k - 1, ps[j], eps).at(alpha);
            }
        }
        std::erase_if(h, [](const auto& e) { return e.second == 0; });
        out[alpha] = h;
    }
    return out;
}

// ---- exact linear algebra ---------------------------------------------------

// Solves the square system A x = b; nullopt when singular.
inline std::optional<std::vector<Rational>> solve(std::vector<std::vector<Rational>> a, std::vector<Rational> b) {
    const std::size_t n = a.size();
    for (std::size_t c = 0; c < n; ++c) {
        std::size_t piv = c;
        while (piv < n && a[piv][c] == 0) ++piv;
        if (piv == n) return std::nullopt;
        std::swap(a[piv], a[c]);
        std::swap(b[piv], b[c]);
        for (std::size_t r = 0; r < n; ++r) {
            if (r == c || a[r][c] == 0) continue;
            const Rational f = a[r][c] / a[c][c];
            for (std::size_t k = c; k < n; ++k) a[r][k] -= f * a[c][k];
            b[r] -= f * b[c];
        }
    }
    std::vector<Rational> x(n);
    for (std::size_t i = 0; i < n; ++i) x[i] = b[i] / a[i][i];
    return x;
}

// max <g, x> over the polytope {x ∈ Q^d : |<h, x>| <= 1 for h in H} by
// enumerating its vertices. H must span Q^d so the polytope is bounded.
inline Rational vertex_dual_norm(const std::vector<std::vector<Rational>>& H, const std::vector<Rational>& g) {
    const std::size_t d = g.size();
    std::vector<std::pair<std::vector<Rational>, Rational>> rows;  // <row, x> <= 1
    for (const auto& h : H) {
        rows.push_back({h, 1});
        std::vector<Rational> neg(d);
        for (std::size_t i = 0; i < d; ++i) neg[i] = -h[i];
        rows.push_back({neg, 1});
    }
    std::optional<Rational> best;
    std::vector<std::size_t> pick(d);
    std::function<void(std::size_t, std::size_t)> rec = [&](std::size_t start, std::size_t depth) {
        if (depth == d) {
            std::vector<std::vector<Rational>> a;
            std::vector<Rational> b;
            for (auto i : pick) {
                a.push_back(rows[i].first);
                b.push_back(rows[i].second);
            }
            const auto x = solve(a, b);
            if (!x) return;
            for (const auto& [row, rhs] : rows) {
                Rational s = 0;
                for (std::size_t i = 0; i < d; ++i) s += row[i] * (*x)[i];
                if (s > rhs) return;
            }
            Rational v = 0;
            for (std::size_t i = 0; i < d; ++i) v += g[i] * (*x)[i];
            if (!best || v > *best) best = v;
            return;
        }
        for (std::size_t i = start; i < rows.size(); ++i) {
            pick[depth] = i;
            rec(i + 1, depth + 1);
        }
    };
    rec(0, 0);
    return best.value_or(Rational(0));
}

inline std::size_t rank_of(std::vector<std::vector<Rational>> a) {
    std::size_t rank = 0;
    const std::size_t cols = a.empty() ? 0 : a[0].size();
    for (std::size_t c = 0; c < cols && rank < a.size(); ++c) {
        std::size_t piv = rank;
        while (piv < a.size() && a[piv][c] == 0) ++piv;
        if (piv == a.size()) continue;
        std::swap(a[piv], a[rank]);
        for (std::size_t r = 0; r < a.size(); ++r) {
            if (r == rank || a[r][c] == 0) continue;
            const Rational f = a[r][c] / a[rank][c];
            for (std::size_t k = c; k < cols; ++k) a[r][k] -= f * a[rank][k];
        }
        ++rank;
    }
    return rank;
}

}  // namespace oracle
