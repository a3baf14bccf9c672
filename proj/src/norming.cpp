#include "csw/norming.hpp"

#include <algorithm>
#include <map>

#include "csw/error.hpp"
#include "csw/kernels.hpp"

namespace csw {

std::string to_string(SpaceKind kind) { return kind == SpaceKind::Epsilon ? "eps" : "k"; }

int Origin::rule() const {
    switch (form) {
        case Form::Base: return 0;
        case Form::Root: return 1;
        case Form::First: return 2;
        case Form::Second: return 3;
        case Form::Tail: return 4;
        case Form::Unit: return 1;
        case Form::Spread: return 2;
        case Form::Cut: return 3;
    }
    return 0;
}

std::string Origin::form_name() const {
    switch (form) {
        case Form::Base: return "base";
        case Form::Root: return "root";
        case Form::First: return "first";
        case Form::Second: return "second";
        case Form::Tail: return "tail";
        case Form::Unit: return "unit";
        case Form::Spread: return "spread";
        case Form::Cut: return "cut";
    }
    return "?";
}

NormingFamily::NormingFamily(std::shared_ptr<const Scheme> scheme, SpaceKind kind, Rational parameter, int scale_cap)
    : scheme_(std::move(scheme)), kind_(kind), parameter_(std::move(parameter)), scale_cap_(scale_cap) {
    vectors_.resize(scheme_->depth() + 1);
    origins_.resize(scheme_->depth() + 1);
    for (int k = 0; k <= scheme_->depth(); ++k) {
        vectors_[k].resize(scheme_->level_size(k));
        origins_[k].resize(scheme_->level_size(k));
    }
}

Functional NormingFamily::functional(SetId id, std::size_t i) const {
    return {vectors(id)[i], origins(id)[i], id};
}

std::size_t NormingFamily::total_functionals() const {
    std::size_t total = 0;
    for (const auto& lvl : vectors_) {
        for (const auto& fam : lvl) total += fam.size();
    }
    return total;
}

const SparseVector& NormingFamily::h(SetId id, Position alpha) const {
    if (kind_ != SpaceKind::Epsilon) throw Error(ErrorCode::WrongSpaceKind, "h_alpha^F exists only in the eps family");
    return vectors_.at(id.rank).at(id.index).at(scheme_->set(id).position_of(alpha));
}

void NormingFamily::assign(SetId id, std::vector<SparseVector> vectors, std::vector<std::vector<Origin>> origins) {
    vectors_.at(id.rank).at(id.index) = std::move(vectors);
    origins_.at(id.rank).at(id.index) = std::move(origins);
}

namespace {

struct Pieces {
    std::vector<const SchemeSet*> sets;
    std::size_t root = 0;
};

Pieces pieces_of(const Scheme& scheme, SetId site) {
    Pieces out;
    for (auto c : scheme.children(site)) out.sets.push_back(&scheme.set(c));
    out.root = scheme.set(site).root_size;
    return out;
}

// φ_i(h) restricted to F_i \ R, with h living on F_0.
SparseVector transport_tail(const SparseVector& h, const SchemeSet& first, const SchemeSet& target, std::size_t root) {
    SparseVector out;
    for (const auto& [p, v] : h.entries()) {
        const auto idx = first.position_of(p);
        if (idx >= root) out.add(target.elements[idx], v);
    }
    return out;
}

SparseVector transport_all(const SparseVector& h, const SchemeSet& first, const SchemeSet& target) {
    SparseVector out;
    for (const auto& [p, v] : h.entries()) out.add(target.elements[first.position_of(p)], v);
    return out;
}

SparseVector spread_impl(const SparseVector& f, const Pieces& pieces) {
    SparseVector out = f;
    for (std::size_t i = 1; i < pieces.sets.size(); ++i) {
        out += transport_tail(f, *pieces.sets[0], *pieces.sets[i], pieces.root);
    }
    return out;
}

}  // namespace

SparseVector spread(const SparseVector& f, const Scheme& scheme, SetId site) {
    const auto decomposition = canonical_decomposition(scheme, site);
    const auto& first = scheme.set(decomposition.children[0]);
    for (const auto& [p, v] : f.entries()) {
        if (!first.contains(p)) {
            throw Error(ErrorCode::HomeMismatch, "functional is not supported on the first piece of " + site.to_string());
        }
    }
    return spread_impl(f, pieces_of(scheme, site));
}

Functional spread(const Functional& f, const Scheme& scheme, SetId site) {
    const auto decomposition = canonical_decomposition(scheme, site);
    if (!(f.home == decomposition.children[0])) {
        throw Error(ErrorCode::HomeMismatch, "home " + f.home.to_string() + " is not the first piece of " + site.to_string());
    }
    Origin o;
    o.form = Origin::Form::Spread;
    o.rank = site.rank;
    o.exponent = f.origin().exponent;
    return {spread(f.vector, scheme, site), {o}, site};
}

NormingFamily build_eps_family(std::shared_ptr<const Scheme> scheme_ptr, const Rational& eps, EpsOptions options) {
    if (eps <= 0 || eps >= 1) throw Error(ErrorCode::ParameterOutOfRange, "eps must lie in (0,1), got " + format_rational(eps));
    NormingFamily family(scheme_ptr, SpaceKind::Epsilon, eps, 0);
    const Scheme& scheme = *scheme_ptr;

    for (std::uint32_t i = 0; i < scheme.level_size(0); ++i) {
        const Position a = scheme.set({0, i}).elements.at(0);
        Origin o;
        o.alpha = a;
        family.assign({0, i}, {SparseVector::unit(a)}, {{o}});
    }

    for (int k = 1; k <= scheme.depth(); ++k) {
        for (std::uint32_t idx = 0; idx < scheme.level_size(k); ++idx) {
            const SetId site{k, idx};
            const auto& F = scheme.set(site);
            const auto kids = scheme.children(site);
            const Pieces pieces = pieces_of(scheme, site);
            const auto& F0 = *pieces.sets[0];
            const std::size_t r = F.root_size;
            const auto h0 = family.vectors(kids[0]);  // element order of F_0

            std::vector<SparseVector> out(F.size());
            std::vector<std::vector<Origin>> origins(F.size());

            auto alternating = [&](const SparseVector& h, int parity) {
                SparseVector acc;
                for (std::size_t i = 2; i < pieces.sets.size(); ++i) {
                    const Rational s = ((i + parity) % 2 == 0) ? eps : Rational(-eps);
                    acc += s * transport_tail(h, F0, *pieces.sets[i], r);
                }
                return acc;
            };

            for (std::size_t pos = 0; pos < F.size(); ++pos) {
                const Position a = F.elements[pos];
                Origin o;
                o.rank = k;
                o.alpha = a;
                if (pos < r) {
                    o.form = Origin::Form::Root;
                    const auto& h = h0[pos];
                    if (options.literal_root_rule) {
                        SparseVector v = h0[0];
                        for (std::size_t i = 1; i < pieces.sets.size(); ++i) v += transport_tail(h, F0, *pieces.sets[i], r);
                        out[pos] = std::move(v);
                    } else {
                        out[pos] = spread_impl(h, pieces);
                    }
                } else {
                    // Which piece holds a, and its preimage in F_0.
                    const std::size_t block = F0.size() - r;
                    const std::size_t j = (pos - r) / block;
                    const std::size_t pre = r + (pos - r) % block;
                    const auto& h = h0[pre];
                    if (j == 0) {
                        o.form = Origin::Form::First;
                        out[pos] = h + alternating(h, 0);
                    } else if (j == 1) {
                        o.form = Origin::Form::Second;
                        out[pos] = transport_all(h, F0, *pieces.sets[1]) + alternating(h, 1);
                    } else {
                        o.form = Origin::Form::Tail;
                        out[pos] = family.h(kids[j], a);
                    }
                }
                origins[pos].push_back(o);
            }
            family.assign(site, std::move(out), std::move(origins));
        }
    }
    return family;
}

NormingFamily build_K_family(std::shared_ptr<const Scheme> scheme_ptr, const Rational& K, int scale_cap) {
    if (K <= 1) throw Error(ErrorCode::ParameterOutOfRange, "K must exceed 1, got " + format_rational(K));
    if (scale_cap < 1) throw Error(ErrorCode::ParameterOutOfRange, "scale_cap must be at least 1");
    NormingFamily family(scheme_ptr, SpaceKind::KBasis, K, scale_cap);
    const Scheme& scheme = *scheme_ptr;

    std::vector<Rational> scale(scale_cap + 1);
    for (int j = 0; j <= scale_cap; ++j) scale[j] = inverse_power(K, j);

    for (int k = 0; k <= scheme.depth(); ++k) {
        for (std::uint32_t idx = 0; idx < scheme.level_size(k); ++idx) {
            const SetId site{k, idx};
            const auto& F = scheme.set(site);

            std::vector<SparseVector> vecs;
            std::vector<std::vector<Origin>> origins;
            std::map<SparseVector, std::size_t> seen;
            auto insert = [&](SparseVector v, const Origin& o) {
                if (v.empty()) return;
                auto [it, fresh] = seen.emplace(v, vecs.size());
                if (fresh) {
                    vecs.push_back(std::move(v));
                    origins.push_back({o});
                } else {
                    origins[it->second].push_back(o);
                }
            };

            for (Position a : F.elements) {
                Origin o;
                o.form = Origin::Form::Unit;
                o.rank = k;
                o.alpha = a;
                insert(SparseVector::unit(a), o);
            }
            if (k > 0) {
                const auto kids = scheme.children(site);
                const Pieces pieces = pieces_of(scheme, site);
                const auto base = family.vectors(kids[0]);
                const auto base_origins = family.origins(kids[0]);
                for (std::size_t g = 0; g < base.size(); ++g) {
                    Origin o;
                    o.form = Origin::Form::Spread;
                    o.rank = k;
                    o.exponent = base_origins[g].front().exponent;
                    o.generator = g;
                    insert(spread_impl(base[g], pieces), o);
                }
            }

            // Closure: K^{-j} (b restricted below δ) for every base b. Only
            // cuts at support points (or no cut) give distinct vectors.
            const std::size_t bases = vecs.size();
            for (std::size_t b = 0; b < bases; ++b) {
                const SparseVector shape = vecs[b];
                const int base_exp = origins[b].front().exponent;
                std::vector<std::optional<Position>> cuts;
                for (const auto& e : shape.entries()) cuts.emplace_back(e.first);
                cuts.emplace_back(std::nullopt);
                for (const auto& cut : cuts) {
                    const SparseVector restricted = cut ? shape.below(*cut) : shape;
                    if (restricted.empty()) continue;
                    for (int j = 1; j <= scale_cap; ++j) {
                        Origin o;
                        o.form = Origin::Form::Cut;
                        o.rank = k;
                        o.exponent = base_exp + j;
                        o.steps = j;
                        o.cut = cut;
                        o.generator = b;
                        insert(scale[j] * restricted, o);
                    }
                }
            }
            family.assign(site, std::move(vecs), std::move(origins));
        }
    }
    return family;
}

Rational norm_on(const SparseVector& x, const NormingFamily& family, SetId site) {
    const auto fs = family.vectors(site);
    if (fs.empty()) throw Error(ErrorCode::EmptyFamily, "no functionals on " + site.to_string());
    return kernels::max_abs_pairing_parallel(fs, x).value;
}

NormEvaluation evaluate_norm(const SparseVector& x, const NormingFamily& family, NormMode mode) {
    NormEvaluation out;
    out.value = 0;
    if (x.empty()) return out;
    const auto& scheme = family.scheme();
    const auto support = x.support();
    if (support.back() >= scheme.universe_size()) {
        throw Error(ErrorCode::ParameterOutOfRange, "support exceeds the universe [0," +
                                                        std::to_string(scheme.universe_size()) + ")");
    }
    if (mode == NormMode::Local) {
        const auto site = scheme.minimal_container(support);
        if (!site) throw Error(ErrorCode::NotInScheme, "no scheme set contains the support");
        const auto fs = family.vectors(*site);
        if (fs.empty()) throw Error(ErrorCode::EmptyFamily, "no functionals on " + site->to_string());
        const auto best = kernels::max_abs_pairing_parallel(fs, x);
        out.value = best.value;
        out.site = site;
        out.index = best.index;
        return out;
    }
    bool any = false;
    for (int k = 0; k <= scheme.depth(); ++k) {
        for (std::uint32_t i = 0; i < scheme.level_size(k); ++i) {
            const auto fs = family.vectors({k, i});
            if (fs.empty()) continue;
            const auto best = kernels::max_abs_pairing_parallel(fs, x);
            if (!any || best.value > out.value) {
                out.value = best.value;
                out.site = SetId{k, i};
                out.index = best.index;
                any = true;
            }
        }
    }
    if (!any) throw Error(ErrorCode::EmptyFamily, "family has no functionals");
    return out;
}

Rational norm(const SparseVector& x, const NormingFamily& family, NormMode mode) {
    return evaluate_norm(x, family, mode).value;
}

GlobalDual global_dual(const NormingFamily& family, Position alpha) {
    if (family.kind() != SpaceKind::Epsilon) throw Error(ErrorCode::WrongSpaceKind, "global duals exist only in the eps family");
    const auto& scheme = family.scheme();
    if (alpha >= scheme.universe_size()) throw Error(ErrorCode::NotInScheme, std::to_string(alpha) + " outside the universe");
    return {alpha, family.h(scheme.top(), alpha)};
}

}  // namespace csw
