#include "csw/analysis.hpp"

#include <algorithm>
#include <map>
#include <set>

#include "csw/capture.hpp"
#include "csw/error.hpp"
#include "csw/kernels.hpp"
#include "csw/lp.hpp"

namespace csw {

Claim SweepResult::claim() const {
    return make_claim(name, Rational(static_cast<long>(failures)), Rel::Eq, Rational(0),
                      failures ? counterexample : std::to_string(checked) + " checks");
}

namespace {

std::string describe(SetId id, const Scheme& scheme) {
    std::string out = id.to_string() + "{";
    const auto& e = scheme.set(id).elements;
    for (std::size_t i = 0; i < e.size(); ++i) out += (i ? "," : "") + std::to_string(e[i]);
    return out + "}";
}

void fail(SweepResult& r, const std::string& what) {
    if (r.failures++ == 0) r.counterexample = what;
}

template <class Fn>
void for_each_set(const Scheme& scheme, int min_rank, Fn&& fn) {
    for (int k = min_rank; k <= scheme.depth(); ++k) {
        for (std::uint32_t i = 0; i < scheme.level_size(k); ++i) fn(SetId{k, i});
    }
}

void require_eps(const NormingFamily& family) {
    if (family.kind() != SpaceKind::Epsilon) throw Error(ErrorCode::WrongSpaceKind, "requires the eps family");
}

}  // namespace

SweepResult check_nonseparability(const NormingFamily& family) {
    require_eps(family);
    SweepResult r;
    r.name = "nonseparability";
    const auto& scheme = family.scheme();
    for_each_set(scheme, 0, [&](SetId id) {
        const auto& F = scheme.set(id);
        const auto hs = family.vectors(id);
        for (std::size_t i = 0; i < F.size(); ++i) {
            ++r.checked;
            const Position a = F.elements[i];
            const auto& h = hs[i];
            if (h.get(a) != 1 || !h.below(a).empty()) {
                fail(r, "h_" + std::to_string(a) + " on " + describe(id, scheme) + " = " + h.to_string());
            }
        }
    });
    return r;
}

SweepResult check_coherence_restriction(const NormingFamily& family) {
    require_eps(family);
    SweepResult r;
    r.name = "coherence_restriction";
    const auto& scheme = family.scheme();
    for_each_set(scheme, 1, [&](SetId f_id) {
        for (SetId e_id : scheme.subsets_of(f_id)) {
            const auto& E = scheme.set(e_id);
            for (Position a : E.elements) {
                ++r.checked;
                const auto restricted = family.h(f_id, a).restricted_to(E.elements);
                if (restricted != family.h(e_id, a)) {
                    fail(r, "h_" + std::to_string(a) + " on " + describe(f_id, scheme) + " restricted to " +
                                describe(e_id, scheme) + " = " + restricted.to_string() + " but h_" +
                                std::to_string(a) + "^E = " + family.h(e_id, a).to_string());
                }
            }
        }
    });
    return r;
}

SweepResult check_coherence_hull(const NormingFamily& family) {
    SweepResult r;
    r.name = "coherence_hull";
    const auto& scheme = family.scheme();
    for_each_set(scheme, 1, [&](SetId f_id) {
        const auto fs = family.vectors(f_id);
        for (SetId e_id : scheme.subsets_of(f_id)) {
            const auto& E = scheme.set(e_id);
            const auto basis = family.vectors(e_id);
            std::map<SparseVector, std::size_t> index;
            std::vector<SparseVector> targets;
            std::vector<std::size_t> first_source;
            for (std::size_t i = 0; i < fs.size(); ++i) {
                ++r.checked;
                auto t = fs[i].restricted_to(E.elements);
                if (index.emplace(t, targets.size()).second) {
                    targets.push_back(std::move(t));
                    first_source.push_back(i);
                }
            }
            const auto results = kernels::dual_norms_parallel(targets, basis);
            for (std::size_t t = 0; t < targets.size(); ++t) {
                HullMembership m;
                m.member = results[t].in_span && results[t].value <= 1;
                if (m.member) {
                    m.coefficients = results[t].coefficients;
                } else {
                    m.separator = results[t].witness;
                }
                if (!m.member || !verify_hull_certificate(targets[t], basis, m)) {
                    fail(r, "functional " + std::to_string(first_source[t]) + " of " + describe(f_id, scheme) +
                                " restricted to " + describe(e_id, scheme) + " = " + targets[t].to_string() +
                                (results[t].in_span ? " has dual norm " + format_rational(results[t].value)
                                                    : std::string(" is outside the span")));
                }
            }
        }
    });
    return r;
}

SweepResult check_closure(const NormingFamily& family) {
    if (family.kind() != SpaceKind::KBasis) throw Error(ErrorCode::WrongSpaceKind, "closure applies to the K family");
    SweepResult r;
    r.name = "closure";
    const auto& scheme = family.scheme();
    const Rational inv = 1 / family.parameter();
    for_each_set(scheme, 0, [&](SetId id) {
        const auto fs = family.vectors(id);
        const auto os = family.origins(id);
        const std::set<SparseVector> members(fs.begin(), fs.end());
        for (std::size_t i = 0; i < fs.size(); ++i) {
            int steps = family.scale_cap();
            for (const auto& o : os[i]) steps = std::min(steps, o.steps);
            if (steps >= family.scale_cap()) continue;
            for (Position d : scheme.set(id).elements) {
                auto v = inv * fs[i].below(d);
                if (v.empty()) continue;
                ++r.checked;
                if (!members.count(v)) {
                    fail(r, "K^-1(f|" + std::to_string(d) + ") missing on " + describe(id, scheme) + " for f=" +
                                fs[i].to_string());
                }
            }
        }
    });
    return r;
}

SweepResult check_transport_invariance(const NormingFamily& family) {
    SweepResult r;
    r.name = "transport_invariance";
    const auto& scheme = family.scheme();
    for_each_set(scheme, 1, [&](SetId id) {
        const auto kids = scheme.children(id);
        const auto& first = scheme.set(kids[0]).elements;
        const auto base = family.vectors(kids[0]);
        for (std::size_t i = 1; i < kids.size(); ++i) {
            ++r.checked;
            const auto map = position_map(first, scheme.set(kids[i]).elements);
            std::set<SparseVector> moved;
            for (const auto& h : base) moved.insert(map.apply(h));
            const auto target = family.vectors(kids[i]);
            const std::set<SparseVector> actual(target.begin(), target.end());
            if (moved != actual) {
                fail(r, "piece " + std::to_string(i) + " of " + describe(id, scheme) + ": transported family differs");
            }
        }
    });
    return r;
}

SparseVector random_vector(std::mt19937_64& rng, std::span<const Position> host) {
    std::vector<Position> pool(host.begin(), host.end());
    std::uniform_int_distribution<std::size_t> count(1, pool.size());
    const std::size_t k = count(rng);
    std::shuffle(pool.begin(), pool.end(), rng);
    std::uniform_int_distribution<long> num(1, 9);
    std::uniform_int_distribution<long> den(1, 6);
    std::uniform_int_distribution<int> sign(0, 1);
    SparseVector x;
    for (std::size_t i = 0; i < k; ++i) {
        const long p = num(rng) * (sign(rng) ? 1 : -1);
        x.set(pool[i], make_rational(p, den(rng)));
    }
    return x;
}

namespace {

SetId random_set(std::mt19937_64& rng, const Scheme& scheme) {
    std::uniform_int_distribution<int> rank(0, scheme.depth());
    const int k = rank(rng);
    std::uniform_int_distribution<std::uint32_t> idx(0, static_cast<std::uint32_t>(scheme.level_size(k) - 1));
    return {k, idx(rng)};
}

std::vector<SetId> containers(const Scheme& scheme, std::span<const Position> support) {
    std::vector<SetId> out;
    for_each_set(scheme, 0, [&](SetId id) {
        if (scheme.set(id).contains_all(support)) out.push_back(id);
    });
    return out;
}

}  // namespace

SweepResult check_norm_well_defined(const NormingFamily& family, std::size_t samples, std::uint64_t seed) {
    SweepResult r;
    r.name = "norm_well_defined";
    const auto& scheme = family.scheme();
    std::mt19937_64 rng(seed);
    for (std::size_t s = 0; s < samples; ++s) {
        const SetId host = random_set(rng, scheme);
        const auto x = random_vector(rng, scheme.set(host).elements);
        const auto sites = containers(scheme, x.support());
        const Rational reference = norm_on(x, family, sites.front());
        for (std::size_t i = 1; i < sites.size(); ++i) {
            ++r.checked;
            const Rational v = norm_on(x, family, sites[i]);
            if (v != reference) {
                fail(r, "x=" + x.to_string() + ": " + format_rational(reference) + " on " +
                            describe(sites.front(), scheme) + " vs " + format_rational(v) + " on " +
                            describe(sites[i], scheme));
            }
        }
    }
    return r;
}

SweepResult check_scale_cap_stability(const NormingFamily& low, const NormingFamily& high, std::size_t samples,
                                      std::uint64_t seed) {
    SweepResult r;
    r.name = "scale_cap_stability";
    const auto& scheme = low.scheme();
    std::mt19937_64 rng(seed);
    for (std::size_t s = 0; s < samples; ++s) {
        const SetId host = random_set(rng, scheme);
        const auto x = random_vector(rng, scheme.set(host).elements);
        ++r.checked;
        const Rational a = norm(x, low);
        const Rational b = norm(x, high);
        if (a != b) {
            fail(r, "x=" + x.to_string() + ": cap " + std::to_string(low.scale_cap()) + " gives " + format_rational(a) +
                        ", cap " + std::to_string(high.scale_cap()) + " gives " + format_rational(b));
        }
    }
    return r;
}

SweepResult check_scale_cap_hulls(const NormingFamily& low, const NormingFamily& high) {
    SweepResult r;
    r.name = "scale_cap_hulls";
    const auto& scheme = low.scheme();
    for_each_set(scheme, 0, [&](SetId id) {
        const auto small = low.vectors(id);
        const auto big = high.vectors(id);
        const std::set<SparseVector> in_big(big.begin(), big.end());
        for (const auto& f : small) {
            ++r.checked;
            if (!in_big.count(f)) fail(r, f.to_string() + " on " + describe(id, scheme) + " missing at the higher cap");
        }
        // Direction of each lower-cap functional, scaled to lead with 1.
        std::map<SparseVector, std::size_t> direction;
        for (std::size_t i = 0; i < small.size(); ++i) {
            direction.emplace((1 / small[i].entries().front().second) * small[i], i);
        }
        const std::set<SparseVector> in_small(small.begin(), small.end());
        std::vector<SparseVector> extra;
        for (const auto& f : big) {
            if (in_small.count(f)) continue;
            // A multiple c*h of some h in the lower family needs only |c| <= 1.
            const Rational lead = f.entries().front().second;
            const auto it = direction.find((1 / lead) * f);
            if (it != direction.end()) {
                HullMembership m;
                m.coefficients.assign(small.size(), 0);
                m.coefficients[it->second] = lead / small[it->second].entries().front().second;
                m.member = abs_value(m.coefficients[it->second]) <= 1;
                if (m.member && verify_hull_certificate(f, small, m)) {
                    ++r.checked;
                    continue;
                }
            }
            extra.push_back(f);
        }
        const auto results = kernels::dual_norms_parallel(extra, small);
        for (std::size_t i = 0; i < extra.size(); ++i) {
            ++r.checked;
            HullMembership m;
            m.member = results[i].in_span && results[i].value <= 1;
            if (m.member) {
                m.coefficients = results[i].coefficients;
            } else {
                m.separator = results[i].witness;
            }
            if (!m.member || !verify_hull_certificate(extra[i], small, m)) {
                fail(r, extra[i].to_string() + " on " + describe(id, scheme) + " lies outside the lower-cap hull");
            }
        }
    });
    return r;
}

BiorthogonalityReport check_biorthogonality(const NormingFamily& family) {
    require_eps(family);
    const auto& scheme = family.scheme();
    const auto& universe = scheme.set(scheme.top()).elements;
    BiorthogonalityReport out;
    out.diagonal_min = 1;
    out.diagonal_max = 1;
    out.off_diagonal_max = 0;
    bool first = true;
    for (Position a : universe) {
        const auto h = global_dual(family, a).vector;
        const Rational diag = pair(h, SparseVector::unit(a));
        if (first || diag < out.diagonal_min) out.diagonal_min = diag;
        if (first || diag > out.diagonal_max) out.diagonal_max = diag;
        first = false;
        for (const auto& [b, v] : h.entries()) {
            if (b == a) continue;
            const Rational off = abs_value(v);
            if (off > out.off_diagonal_max) {
                out.off_diagonal_max = off;
                out.argmax_alpha = a;
                out.argmax_beta = b;
            }
        }
    }
    const Rational& eps = family.parameter();
    const std::string pair_text =
        "<h_" + std::to_string(out.argmax_alpha) + ", e_" + std::to_string(out.argmax_beta) + ">";
    out.report.title = "biorthogonality";
    out.report.add(make_claim("min diagonal pairing", out.diagonal_min, Rel::Eq, 1));
    out.report.add(make_claim("max diagonal pairing", out.diagonal_max, Rel::Eq, 1));
    out.report.add(make_claim("off-diagonal max <= eps", out.off_diagonal_max, Rel::Le, eps, pair_text));
    out.report.add(make_claim("off-diagonal max attains eps", out.off_diagonal_max, Rel::Eq, eps, pair_text));
    out.report.norms.emplace_back("off_diagonal_max", out.off_diagonal_max);
    return out;
}

namespace {

template <class Solver>
BasisConstant basis_constant_impl(std::span<const SparseVector> norming, std::span<const Position> positions,
                                  Solver&& solve) {
    std::map<SparseVector, std::size_t> index;
    std::vector<SparseVector> targets;
    std::vector<std::pair<Position, std::size_t>> source;
    for (std::size_t i = 0; i < norming.size(); ++i) {
        for (Position d : positions) {
            auto t = norming[i].below(d);
            if (t.empty()) continue;
            if (index.emplace(t, targets.size()).second) {
                targets.push_back(std::move(t));
                source.emplace_back(d, i);
            }
        }
    }
    const auto results = solve(std::span<const SparseVector>(targets), norming);
    BasisConstant out;
    out.value = 0;
    out.lp_solves = targets.size();
    bool found = false;
    for (std::size_t t = 0; t < targets.size(); ++t) {
        if (!results[t].in_span) {
            ++out.out_of_span;
            continue;
        }
        if (!found || results[t].value > out.value) {
            found = true;
            out.value = results[t].value;
            out.cut = source[t].first;
            out.functional = source[t].second;
            out.restricted = targets[t];
            out.witness = results[t].witness;
        }
    }
    return out;
}

}  // namespace

BasisConstant basis_constant(std::span<const SparseVector> norming, std::span<const Position> positions) {
    return basis_constant_impl(norming, positions, [](auto t, auto b) { return kernels::dual_norms_parallel(t, b); });
}

BasisConstant basis_constant_serial(std::span<const SparseVector> norming, std::span<const Position> positions) {
    return basis_constant_impl(norming, positions, [](auto t, auto b) { return kernels::dual_norms_serial(t, b); });
}

BasisConstant basis_constant(const NormingFamily& family) {
    const auto& scheme = family.scheme();
    return basis_constant(family.vectors(scheme.top()), scheme.set(scheme.top()).elements);
}

SweepResult check_prefix_inequality(const NormingFamily& family, const BasisConstant& constant, std::size_t samples,
                                    std::uint64_t seed) {
    SweepResult r;
    r.name = "prefix_inequality";
    const auto& scheme = family.scheme();
    const auto& universe = scheme.set(scheme.top()).elements;
    std::mt19937_64 rng(seed);
    for (std::size_t s = 0; s < samples; ++s) {
        const auto x = random_vector(rng, universe);
        const Rational whole = norm(x, family);
        for (Position d : universe) {
            ++r.checked;
            const Rational part = norm(x.below(d), family);
            if (part > constant.value * whole) {
                fail(r, "x=" + x.to_string() + " cut " + std::to_string(d) + ": " + format_rational(part) + " > " +
                            format_rational(constant.value) + "*" + format_rational(whole));
            }
        }
    }
    if (!constant.witness.empty()) {
        ++r.checked;
        const Rational whole = norm(constant.witness, family);
        const Rational part = norm(constant.witness.below(constant.cut), family);
        if (part != constant.value * whole) {
            fail(r, "witness " + constant.witness.to_string() + " does not attain the constant");
        }
    }
    return r;
}

namespace {

std::optional<SetId> first_site(const Scheme& scheme, std::int64_t pieces) {
    for (int k = 1; k <= scheme.depth(); ++k) {
        if (scheme.type().n[k] >= pieces && scheme.level_size(k) > 0) return SetId{k, 0};
    }
    return std::nullopt;
}

SetId resolve_site(const Scheme& scheme, const std::optional<SetId>& requested, std::int64_t pieces) {
    if (requested) {
        const auto& s = *requested;
        if (s.rank < 1 || s.rank > scheme.depth() || s.index >= scheme.level_size(s.rank)) {
            throw Error(ErrorCode::ConfigInvalid, "site " + s.to_string() + " is not a scheme set of positive rank");
        }
        if (scheme.type().n[s.rank] < pieces) {
            throw Error(ErrorCode::CaptureUnavailable, "site " + s.to_string() + " has " +
                                                           std::to_string(scheme.type().n[s.rank]) + " pieces, need " +
                                                           std::to_string(pieces));
        }
        return s;
    }
    auto s = first_site(scheme, pieces);
    if (!s) {
        throw Error(ErrorCode::CaptureUnavailable, "no scheme set has " + std::to_string(pieces) + " pieces");
    }
    return *s;
}

struct Copies {
    SetId site;
    std::vector<SetId> pieces;
    std::vector<SparseVector> xs;  // x_i = φ_i(z), normalized
    Rational scale;                // 1 / ||φ_0(z)||
    DeltaSystem system;
    std::optional<Capture> capture;
};

Copies make_copies(const NormingFamily& family, SetId site, const std::optional<SparseVector>& pattern,
                   std::size_t count) {
    const auto& scheme = family.scheme();
    Copies out;
    out.site = site;
    out.pieces = scheme.children(site);
    const auto& F0 = scheme.set(out.pieces[0]);
    SparseVector z = pattern ? *pattern : SparseVector::unit(static_cast<Position>(scheme.set(site).root_size));
    if (z.empty()) throw Error(ErrorCode::PatternOutOfRange, "pattern is zero");
    std::vector<std::size_t> slots;
    SparseVector z0;
    for (const auto& [p, v] : z.entries()) {
        if (p >= F0.size()) {
            throw Error(ErrorCode::PatternOutOfRange, "pattern slot " + std::to_string(p) + " >= |F_0| = " +
                                                          std::to_string(F0.size()));
        }
        slots.push_back(p);
        z0.set(F0.elements[p], v);
    }
    out.system = make_captured_family(scheme, site, slots, count);
    out.capture = find_capture(scheme, out.system, count);
    out.scale = 1 / norm(z0, family);
    z0 *= out.scale;
    for (std::size_t i = 0; i < count; ++i) {
        out.xs.push_back(position_map(F0.elements, scheme.set(out.pieces[i]).elements).apply(z0));
    }
    return out;
}

Claim normalized_claim(const NormingFamily& family, const std::vector<SparseVector>& xs) {
    std::size_t bad = 0;
    std::string first;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        const Rational v = norm(xs[i], family);
        if (v != 1) {
            if (!bad++) first = "||x_" + std::to_string(i) + "|| = " + format_rational(v);
        }
    }
    return make_claim("copies normalized", Rational(static_cast<long>(bad)), Rel::Eq, 0,
                      bad ? first : std::to_string(xs.size()) + " copies");
}

Claim capture_claim(const Copies& c, const Scheme& scheme) {
    std::string w = c.capture ? "captured at " + describe(c.capture->site, scheme) : "no capture found";
    return make_claim("engineered family is captured", Rational(c.capture ? 1 : 0), Rel::Eq, 1, w);
}

}  // namespace

void validate(const EpsExperimentConfig& config) {
    if (!(config.eps > 0 && config.eps < 1)) {
        throw Error(ErrorCode::ConfigInvalid, "eps must lie in (0,1), got " + format_rational(config.eps));
    }
    if (config.n < 1) throw Error(ErrorCode::ConfigInvalid, "n must be positive");
    const Rational m = 2 * config.n * config.eps;
    if (m.get_den() != 1) {
        throw Error(ErrorCode::ConfigInvalid, "m = 2n*eps = " + format_rational(m) + " is not an integer");
    }
    if (config.m && Rational(static_cast<long>(*config.m)) != m) {
        throw Error(ErrorCode::ConfigInvalid, "m=" + std::to_string(*config.m) + " but 2n*eps = " + format_rational(m));
    }
}

void validate(const EpsExperimentConfig& config, const NormingFamily& family) {
    validate(config);
    if (family.kind() != SpaceKind::Epsilon) throw Error(ErrorCode::WrongSpaceKind, "eps experiment needs the eps family");
    if (family.parameter() != config.eps) {
        throw Error(ErrorCode::ConfigInvalid, "family built for eps=" + format_rational(family.parameter()) +
                                                  ", config has " + format_rational(config.eps));
    }
    resolve_site(family.scheme(), config.site, 2 * config.n + 2);
}

void validate(const KExperimentConfig& config) {
    if (!(config.K > 1)) throw Error(ErrorCode::ConfigInvalid, "K must exceed 1, got " + format_rational(config.K));
    if (config.n < 1) throw Error(ErrorCode::ConfigInvalid, "n must be positive");
    if (config.K_prime < 1 || !(config.K_prime < config.L) || !(config.L < config.K)) {
        throw Error(ErrorCode::ConfigInvalid, "need 1 <= K' < L < K, got K'=" + format_rational(config.K_prime) +
                                                  " L=" + format_rational(config.L) + " K=" + format_rational(config.K));
    }
    const Rational lhs = 1 / config.K + Rational(1, config.n);
    if (!(lhs < 1 / config.L)) {
        throw Error(ErrorCode::ConfigInvalid, "1/K + 1/n = " + format_rational(lhs) + " is not below 1/L = " +
                                                  format_rational(1 / config.L));
    }
}

void validate(const KExperimentConfig& config, const NormingFamily& family) {
    validate(config);
    if (family.kind() != SpaceKind::KBasis) throw Error(ErrorCode::WrongSpaceKind, "K experiment needs the K family");
    if (family.parameter() != config.K) {
        throw Error(ErrorCode::ConfigInvalid, "family built for K=" + format_rational(family.parameter()) +
                                                  ", config has " + format_rational(config.K));
    }
    resolve_site(family.scheme(), config.site, 2 * config.n);
}

Report run_eps_experiment(const NormingFamily& family, const EpsExperimentConfig& config) {
    validate(config, family);
    const auto& scheme = family.scheme();
    const int n = config.n;
    const Rational m = 2 * n * config.eps;
    const SetId site = resolve_site(scheme, config.site, 2 * n + 2);
    const auto copies = make_copies(family, site, config.pattern, static_cast<std::size_t>(2 * n + 2));
    const auto& xs = copies.xs;

    // w = (x_0 - x_1) - (1/m) Σ_{i=1..n} (x_{2i} - x_{2i+1})
    SparseVector w = xs[0] - xs[1];
    SparseVector tail;
    for (int i = 1; i <= n; ++i) tail += xs[2 * i] - xs[2 * i + 1];
    w -= (1 / m) * tail;

    Report rep;
    rep.title = "eps capture experiment";
    rep.add(make_claim("m = 2n*eps", m, Rel::Eq, 2 * n * config.eps));
    rep.add(capture_claim(copies, scheme));
    rep.add(normalized_claim(family, xs));

    const auto& F = scheme.set(site);
    Rational root_max = 0;
    for (Position p : F.root()) root_max = std::max(root_max, abs_value(w.get(p)));
    rep.add(make_claim("w vanishes on R(F)", root_max, Rel::Eq, 0));

    const auto hs = family.vectors(site);
    const auto os = family.origins(site);
    Rational form_max[5] = {0, 0, 0, 0, 0};
    std::size_t form_count[5] = {0, 0, 0, 0, 0};
    for (std::size_t i = 0; i < hs.size(); ++i) {
        const Rational p = pair(hs[i], w);
        const auto& o = os[i].front();
        const int rule = o.rule();
        form_max[rule] = std::max(form_max[rule], abs_value(p));
        ++form_count[rule];
        rep.pairings.emplace_back("h_" + std::to_string(o.alpha) + " [" + o.form_name() + "]", p);
    }
    auto count_text = [&](int rule) { return std::to_string(form_count[rule]) + " functionals"; };
    rep.add(make_claim("form 1 (root) pairings vanish", form_max[1], Rel::Eq, 0, count_text(1)));
    rep.add(make_claim("form 2 (first piece) pairings vanish", form_max[2], Rel::Eq, 0, count_text(2)));
    rep.add(make_claim("form 3 (second piece) pairings vanish", form_max[3], Rel::Eq, 0, count_text(3)));
    rep.add(make_claim("form 4 (later pieces) pairings <= 1/m", form_max[4], Rel::Le, 1 / m, count_text(4)));

    const auto local = evaluate_norm(w, family, NormMode::Local);
    const Rational on_site = norm_on(w, family, site);
    rep.add(make_claim("||w|| <= 1/m", local.value, Rel::Le, 1 / m));
    rep.add(make_claim("||w|| on capture site equals local norm", on_site, Rel::Eq, local.value));
    rep.norms.emplace_back("w", local.value);
    rep.norms.emplace_back("w_all", norm(w, family, NormMode::All));
    rep.norms.emplace_back("pattern_scale", copies.scale);
    return rep;
}

Report run_K_experiment(const NormingFamily& family, const KExperimentConfig& config) {
    validate(config, family);
    const auto& scheme = family.scheme();
    const int n = config.n;
    const Rational& K = config.K;
    const SetId site = resolve_site(scheme, config.site, 2 * n);
    const auto copies = make_copies(family, site, config.pattern, static_cast<std::size_t>(2 * n));
    const auto& xs = copies.xs;

    SparseVector v, w;
    for (int i = 0; i < n; ++i) v += xs[i];
    w = v;
    for (int i = n; i < 2 * n; ++i) w -= xs[i];

    Report rep;
    rep.title = "K capture experiment";
    rep.add(make_claim("1/K + 1/n < 1/L", 1 / K + Rational(1, n), Rel::Lt, 1 / config.L));
    rep.add(capture_claim(copies, scheme));
    rep.add(normalized_claim(family, xs));

    // Spread of a norming functional of x_0 pairs with v to n.
    const auto& first = copies.pieces[0];
    const auto best = kernels::max_abs_pairing_serial(family.vectors(first), xs[0]);
    const auto f = spread(family.vectors(first)[best.index], scheme, site);
    const auto hs = family.vectors(site);
    const bool f_in_family = std::find(hs.begin(), hs.end(), f) != hs.end();
    rep.add(make_claim("spread witness lies in H_F", Rational(f_in_family ? 1 : 0), Rel::Eq, 1, f.to_string()));
    rep.add(make_claim("|<spread witness, v>| = n", abs_value(pair(f, v)), Rel::Eq, n, f.to_string()));

    const auto os = family.origins(site);
    const auto& F = scheme.set(site);
    const std::size_t r = F.root_size;
    const std::size_t block = scheme.set(first).size() - r;
    Rational unit_max = 0, spread_max = 0, cut_root = 0, cut_low = 0, cut_high = 0;
    for (std::size_t i = 0; i < hs.size(); ++i) {
        const Rational p = pair(hs[i], w);
        const Rational a = abs_value(p);
        const auto& o = os[i].front();
        rep.pairings.emplace_back(o.form_name() + "#" + std::to_string(i), p);
        if (o.form == Origin::Form::Unit) {
            unit_max = std::max(unit_max, a);
        } else if (o.form == Origin::Form::Spread) {
            spread_max = std::max(spread_max, a);
        } else if (!o.cut) {
            cut_high = std::max(cut_high, a);
        } else {
            const std::size_t pos = F.position_of(*o.cut);
            if (pos < r) {
                cut_root = std::max(cut_root, a);
            } else if ((pos - r) / block < static_cast<std::size_t>(n)) {
                cut_low = std::max(cut_low, a);
            } else {
                cut_high = std::max(cut_high, a);
            }
        }
    }
    const Rational bound = Rational(n) / K + 1;
    rep.add(make_claim("unit pairings <= 1", unit_max, Rel::Le, 1));
    rep.add(make_claim("spread pairings vanish", spread_max, Rel::Eq, 0));
    rep.add(make_claim("cuts inside R(F) vanish", cut_root, Rel::Eq, 0));
    rep.add(make_claim("cuts in pieces j<n: <= (n-1)/K + 1", cut_low, Rel::Le, Rational(n - 1) / K + 1));
    rep.add(make_claim("cuts in pieces j>=n: <= n/K + 1", cut_high, Rel::Le, bound));

    const Rational nv = norm(v, family);
    const Rational nw = norm(w, family);
    rep.add(make_claim("||v|| >= n", nv, Rel::Ge, n));
    rep.add(make_claim("||w|| <= n/K + 1", nw, Rel::Le, bound));
    rep.add(make_claim("||v|| > L*||w||", nv, Rel::Gt, config.L * nw));
    rep.norms.emplace_back("v", nv);
    rep.norms.emplace_back("w", nw);
    if (nw != 0) rep.norms.emplace_back("ratio", nv / nw);
    rep.norms.emplace_back("pattern_scale", copies.scale);
    return rep;
}

Rational SeparationConfig::delta(const Rational& N_value) const {
    return (1 / N_value) * (1 - tau * (1 + eps) / eps);
}

Report verify_separation_bound(const BiorthogonalData& data, const NormingFamily& family, const SeparationConfig& config,
                               std::span<const std::size_t> indices) {
    const auto count = data.vectors.size();
    if (data.duals.size() != count) throw Error(ErrorCode::DimensionMismatch, "vectors and duals differ in number");
    if (indices.size() < 2 || indices.size() % 2 != 0) {
        throw Error(ErrorCode::ConfigInvalid, "need an even number (>= 2) of indices");
    }
    for (auto i : indices) {
        if (i >= count) throw Error(ErrorCode::ConfigInvalid, "index " + std::to_string(i) + " out of range");
    }
    if (!(config.eps > 0 && config.eps < 1) || config.tau < 0) {
        throw Error(ErrorCode::ConfigInvalid, "need 0 < eps < 1 and tau >= 0");
    }
    for (std::size_t i = 0; i < count; ++i) {
        for (std::size_t j = 0; j < count; ++j) {
            const Rational p = pair(data.duals[i], data.vectors[j]);
            if (i == j ? p != 1 : abs_value(p) > config.tau) {
                throw Error(ErrorCode::NotBiorthogonal, "<y*_" + std::to_string(i) + ", y_" + std::to_string(j) +
                                                            "> = " + format_rational(p));
            }
        }
    }
    const auto& scheme = family.scheme();
    const auto basis = family.vectors(scheme.top());
    const auto norms = kernels::dual_norms_parallel(data.duals, basis);
    Rational max_dual = 0;
    for (std::size_t i = 0; i < count; ++i) {
        if (!norms[i].in_span) throw Error(ErrorCode::NotBiorthogonal, "y*_" + std::to_string(i) + " is not in the span");
        max_dual = std::max(max_dual, norms[i].value);
    }
    const Rational N = config.N.value_or(max_dual);
    if (max_dual > N) {
        throw Error(ErrorCode::NotBiorthogonal, "dual norm " + format_rational(max_dual) + " exceeds N=" + format_rational(N));
    }

    const int n = static_cast<int>(indices.size() / 2) - 1;
    const auto& y = data.vectors;
    SparseVector w = y[indices[0]] - y[indices[1]];
    Rational bound;
    Report rep;
    rep.title = "separation bound";
    if (n == 0) {
        bound = (1 - config.tau) / N;
    } else {
        const Rational m = 2 * n * config.eps;
        if (m.get_den() != 1) throw Error(ErrorCode::ConfigInvalid, "m = 2n*eps = " + format_rational(m) + " is not an integer");
        SparseVector tail;
        for (int i = 1; i <= n; ++i) tail += y[indices[2 * i]] - y[indices[2 * i + 1]];
        w -= (1 / m) * tail;
        bound = (1 / N) * (1 - config.tau * (1 + Rational(2 * n) / m));
        rep.add(make_claim("delta = (1/N)(1 - tau(1+eps)/eps)", bound, Rel::Eq, config.delta(N)));
    }
    const bool vacuous = bound <= 0;
    const std::string note = vacuous ? "vacuous: bound <= 0" : "";
    const Rational dual_pairing = abs_value(pair(data.duals[indices[0]], w)) / N;
    rep.add(make_claim("|<y*_0, w>|/N >= delta", dual_pairing, Rel::Ge, bound, note));
    const Rational nw = norm(w, family);
    rep.add(make_claim("||w|| >= delta", nw, Rel::Ge, bound, note));
    rep.norms.emplace_back("w", nw);
    rep.norms.emplace_back("delta", bound);
    rep.norms.emplace_back("N", N);
    rep.norms.emplace_back("max_dual_norm", max_dual);
    return rep;
}

Report verify_basic_separation(std::span<const SparseVector> xs, const NormingFamily& family, const Rational& K_prime,
                               const Rational& L, std::span<const std::size_t> indices) {
    if (indices.empty() || indices.size() % 2 != 0) throw Error(ErrorCode::ConfigInvalid, "need 2n indices");
    if (K_prime < 1) throw Error(ErrorCode::ConfigInvalid, "K' must be at least 1");
    for (auto i : indices) {
        if (i >= xs.size()) throw Error(ErrorCode::ConfigInvalid, "index " + std::to_string(i) + " out of range");
    }
    const std::size_t n = indices.size() / 2;
    SparseVector v, w;
    for (std::size_t i = 0; i < n; ++i) v += xs[indices[i]];
    w = v;
    for (std::size_t i = n; i < 2 * n; ++i) w -= xs[indices[i]];
    const Rational nv = norm(v, family);
    const Rational nw = norm(w, family);
    Report rep;
    rep.title = "basic sequence separation";
    rep.add(make_claim("||sum x_i|| <= L*||w||", nv, Rel::Le, L * nw));
    rep.add(make_claim("||w|| >= 1/(2K')", nw, Rel::Ge, 1 / (2 * K_prime)));
    rep.norms.emplace_back("v", nv);
    rep.norms.emplace_back("w", nw);
    return rep;
}

}  // namespace csw
