#include <doctest.h>

#include "csw/analysis.hpp"
#include "csw/error.hpp"
#include "csw/lp.hpp"
#include "oracles.hpp"

using namespace csw;

namespace {

std::shared_ptr<const Scheme> scheme_of(const char* type) {
    return std::make_shared<const Scheme>(build_scheme(parse_type(type)));
}

void require_error(ErrorCode code, const std::function<void()>& fn) {
    try {
        fn();
        FAIL("expected " << to_string(code));
    } catch (const Error& e) {
        CHECK(e.code() == code);
    }
}

std::vector<Position> iota(Position n) {
    std::vector<Position> v(n);
    for (Position i = 0; i < n; ++i) v[i] = i;
    return v;
}

}  // namespace

TEST_CASE("biorthogonality") {
    const auto r = check_biorthogonality(build_eps_family(scheme_of("1,6;6;0"), Rational(1, 2)));
    CHECK(r.diagonal_min == 1);
    CHECK(r.diagonal_max == 1);
    CHECK(r.off_diagonal_max == Rational(1, 2));
    CHECK(r.report.pass());

    const auto d2 = check_biorthogonality(build_eps_family(scheme_of("1,2,4;2,3;0,1"), Rational(2, 3)));
    CHECK(d2.off_diagonal_max <= Rational(2, 3));
    CHECK(d2.report.find("off-diagonal max <= eps")->pass);
}

TEST_CASE("basis constant on small families") {
    const std::vector<SparseVector> l_inf{SparseVector::unit(0), SparseVector::unit(1)};
    const auto positions = iota(2);
    CHECK(basis_constant(l_inf, positions).value == 1);

    CHECK(basis_constant(build_K_family(scheme_of("1,2;2;0"), 2, 1)).value == 1);

    const auto k8 = build_K_family(scheme_of("1,8;8;0"), 2, 1);
    const auto c = basis_constant(k8);
    CHECK(c.value == 2);
    CHECK(c.out_of_span == 0);
    // Upper bound: the minimal decomposition of g restricted below δ.
    const auto basis = k8.vectors(k8.scheme().top());
    const auto r = dual_norm_solve(c.restricted, basis);
    REQUIRE(r.in_span);
    SparseVector sum;
    Rational mass = 0;
    for (std::size_t i = 0; i < basis.size(); ++i) {
        sum += r.coefficients[i] * basis[i];
        mass += abs_value(r.coefficients[i]);
    }
    CHECK(sum == c.restricted);
    CHECK(mass == 2);
    // Lower bound: the witness has norm 1 and its prefix has norm 2.
    CHECK(norm(c.witness, k8) == 1);
    CHECK(norm(c.witness.below(c.cut), k8) == 2);
    // The v, w pair of the block experiment gives the same ratio.
    const auto w = SparseVector::parse("0:1,1:1,2:1,3:1,4:-1,5:-1,6:-1,7:-1");
    CHECK(norm(w.below(4), k8) == 2 * norm(w, k8));

    const auto serial = basis_constant_serial(basis, k8.scheme().set(k8.scheme().top()).elements);
    CHECK(serial.value == c.value);
    CHECK(serial.cut == c.cut);
    CHECK(serial.witness == c.witness);
}

TEST_CASE("basis constant agrees with vertex enumeration in low dimension") {
    for (const char* text : {"1,2;2;0", "1,3;3;0"}) {
        for (const Rational K : {Rational(2), Rational(3, 2)}) {
            CAPTURE(text);
            const auto fam = build_K_family(scheme_of(text), K, 1);
            const auto& s = fam.scheme();
            const auto basis = fam.vectors(s.top());
            const auto d = static_cast<Position>(s.universe_size());
            std::vector<std::vector<Rational>> H;
            for (const auto& f : basis) {
                std::vector<Rational> row(d);
                for (Position i = 0; i < d; ++i) row[i] = f.get(i);
                H.push_back(row);
            }
            Rational brute = 0;
            for (const auto& g : basis) {
                for (Position cut = 0; cut < d; ++cut) {
                    std::vector<Rational> t(d);
                    for (Position i = 0; i < cut; ++i) t[i] = g.get(i);
                    brute = std::max(brute, oracle::vertex_dual_norm(H, t));
                }
            }
            const auto c = basis_constant(fam);
            CHECK(c.value == brute);
            CHECK(c.value <= K);
        }
    }
}

TEST_CASE("prefix inequality") {
    const auto fam = build_K_family(scheme_of("1,8;8;0"), 2, 1);
    const auto c = basis_constant(fam);
    const auto r = check_prefix_inequality(fam, c, 100, 9);
    CHECK(r.pass());
    CHECK(r.checked > 100);
    BasisConstant too_small = c;
    too_small.value = 1;
    CHECK_FALSE(check_prefix_inequality(fam, too_small, 100, 9).pass());
}

TEST_CASE("sweeps pass on both kinds") {
    const auto s = scheme_of("1,2,4,10;2,3,4;0,1,2");
    const auto eps = build_eps_family(s, Rational(2, 3));
    CHECK(check_nonseparability(eps).pass());
    CHECK(check_coherence_restriction(eps).pass());
    CHECK(check_coherence_hull(eps).pass());
    CHECK(check_transport_invariance(eps).pass());
    CHECK(check_norm_well_defined(eps, 50, 1).pass());

    const auto k = build_K_family(scheme_of("1,2,4;2,3;0,1"), Rational(3, 2), 2);
    CHECK(check_closure(k).pass());
    CHECK(check_coherence_hull(k).pass());
    CHECK(check_transport_invariance(k).pass());
    CHECK(check_norm_well_defined(k, 50, 1).pass());
    require_error(ErrorCode::WrongSpaceKind, [&] { check_closure(eps); });
    require_error(ErrorCode::WrongSpaceKind, [&] { check_coherence_restriction(k); });
}

TEST_CASE("sweeps report injected faults") {
    const auto s = scheme_of("1,2,4;2,3;0,1");
    auto fam = build_K_family(s, 2, 1);
    const SetId piece{1, 1};
    auto vs = std::vector<SparseVector>(fam.vectors(piece).begin(), fam.vectors(piece).end());
    auto os = std::vector<std::vector<Origin>>(fam.origins(piece).begin(), fam.origins(piece).end());
    vs.push_back(SparseVector::parse("0:1,2:1/3"));
    os.push_back(os.front());
    fam.assign(piece, vs, os);
    CHECK_FALSE(check_transport_invariance(fam).pass());

    auto eps = build_eps_family(s, Rational(1, 2));
    const auto top = s->top();
    auto tv = std::vector<SparseVector>(eps.vectors(top).begin(), eps.vectors(top).end());
    tv[1].set(0, Rational(1, 5));
    eps.assign(top, tv, std::vector<std::vector<Origin>>(eps.origins(top).begin(), eps.origins(top).end()));
    CHECK_FALSE(check_nonseparability(eps).pass());
}

TEST_CASE("scale cap does not change norms") {
    const auto s = scheme_of("1,2,4,10;2,3,4;0,1,2");
    const auto low = build_K_family(s, 2, 1);
    const auto high = build_K_family(s, 2, 3);
    CHECK(high.total_functionals() > low.total_functionals());
    CHECK(check_scale_cap_stability(low, high, 100, 4).pass());
    CHECK(check_scale_cap_hulls(low, high).pass());
    CHECK_FALSE(check_scale_cap_hulls(high, low).pass());
}

TEST_CASE("eps experiment on six singletons") {
    const auto fam = build_eps_family(scheme_of("1,6;6;0"), Rational(1, 2));
    EpsExperimentConfig cfg;
    cfg.eps = Rational(1, 2);
    cfg.n = 2;
    cfg.m = 2;
    const auto rep = run_eps_experiment(fam, cfg);
    CHECK(rep.pass());
    CHECK(*rep.norm("w") == Rational(1, 2));
    CHECK(*rep.norm("w_all") == 1);
    std::map<std::string, Rational> table(rep.pairings.begin(), rep.pairings.end());
    CHECK(table.at("h_0 [first]") == 0);
    CHECK(table.at("h_1 [second]") == 0);
    for (int j = 2; j < 6; ++j) CHECK(abs_value(table.at("h_" + std::to_string(j) + " [tail]")) == Rational(1, 2));
}

TEST_CASE("eps experiment variants") {
    const auto f4 = build_eps_family(scheme_of("1,4;4;0"), Rational(1, 2));
    EpsExperimentConfig one;
    one.eps = Rational(1, 2);
    one.n = 1;
    const auto r1 = run_eps_experiment(f4, one);
    CHECK(r1.pass());
    CHECK(r1.find("form 2 (first piece) pairings vanish")->lhs == 0);

    // Root-only pattern: all copies coincide and w vanishes.
    const auto rooted = build_eps_family(scheme_of("1,2,5;2,4;0,1"), Rational(1, 2));
    EpsExperimentConfig root_cfg = one;
    root_cfg.site = SetId{2, 0};
    root_cfg.pattern = SparseVector::parse("0:1");
    const auto r2 = run_eps_experiment(rooted, root_cfg);
    CHECK(r2.pass());
    CHECK(*r2.norm("w") == 0);
    for (const auto& [name, value] : r2.pairings) CHECK(value == 0);

    // Root point plus a free slot, on a site with a nonempty root.
    EpsExperimentConfig mixed = root_cfg;
    mixed.pattern = SparseVector::parse("0:2,1:-1/3");
    const auto r3 = run_eps_experiment(rooted, mixed);
    CHECK(r3.pass());
    CHECK(r3.find("w vanishes on R(F)")->pass);
    CHECK(*r3.norm("w") <= 1);
}

TEST_CASE("eps experiment configuration errors") {
    const auto f6 = build_eps_family(scheme_of("1,6;6;0"), Rational(1, 2));
    EpsExperimentConfig cfg;
    cfg.eps = Rational(1, 2);
    cfg.n = 2;
    cfg.m = 3;
    require_error(ErrorCode::ConfigInvalid, [&] { run_eps_experiment(f6, cfg); });
    cfg.m.reset();
    cfg.eps = Rational(1, 3);
    require_error(ErrorCode::ConfigInvalid, [&] { validate(cfg); });
    cfg.eps = Rational(1, 2);
    cfg.n = 3;
    cfg.m.reset();
    require_error(ErrorCode::CaptureUnavailable, [&] { run_eps_experiment(f6, cfg); });
    cfg.n = 2;
    cfg.pattern = SparseVector::parse("1:1");
    require_error(ErrorCode::PatternOutOfRange, [&] { run_eps_experiment(f6, cfg); });
}

TEST_CASE("K experiment on eight singletons") {
    for (int cap : {1, 2}) {
        const auto fam = build_K_family(scheme_of("1,8;8;0"), 2, cap);
        KExperimentConfig cfg;
        cfg.K = 2;
        cfg.L = Rational(5, 4);
        cfg.n = 4;
        const auto rep = run_K_experiment(fam, cfg);
        CHECK(rep.pass());
        CHECK(*rep.norm("v") == 4);
        CHECK(*rep.norm("w") == 2);
        CHECK(*rep.norm("ratio") == 2);
        CHECK(rep.find("||w|| <= n/K + 1")->rhs == 3);
    }
}

TEST_CASE("K experiment configuration errors") {
    const auto fam = build_K_family(scheme_of("1,8;8;0"), 2, 1);
    KExperimentConfig cfg;
    cfg.K = 2;
    cfg.n = 4;
    cfg.L = Rational(3, 2);
    require_error(ErrorCode::ConfigInvalid, [&] { run_K_experiment(fam, cfg); });
    cfg.n = 1;
    cfg.L = Rational(5, 4);
    require_error(ErrorCode::ConfigInvalid, [&] { validate(cfg); });
    cfg.n = 5;
    cfg.L = Rational(6, 5);
    require_error(ErrorCode::CaptureUnavailable, [&] { run_K_experiment(fam, cfg); });
}

TEST_CASE("separation bound with global duals") {
    const auto fam = build_eps_family(scheme_of("1,6;6;0"), Rational(1, 2));
    BiorthogonalData data;
    for (Position a = 0; a < 6; ++a) {
        data.vectors.push_back(SparseVector::unit(a));
        data.duals.push_back(global_dual(fam, a).vector);
    }
    SeparationConfig cfg;
    cfg.tau = Rational(1, 2);
    cfg.eps = Rational(1, 2);
    const std::vector<std::size_t> idx{0, 1, 2, 3, 4, 5};
    const auto rep = verify_separation_bound(data, fam, cfg, idx);
    CHECK(*rep.norm("delta") == cfg.delta(*rep.norm("N")));
    CHECK(*rep.norm("delta") <= 0);
    CHECK(rep.pass());
    CHECK(rep.find("||w|| >= delta")->witness.find("vacuous") != std::string::npos);

    cfg.tau = Rational(1, 3);
    require_error(ErrorCode::NotBiorthogonal, [&] { verify_separation_bound(data, fam, cfg, idx); });
}

TEST_CASE("separation bound on disjoint supports") {
    const auto fam = build_eps_family(scheme_of("1,6;6;0"), Rational(1, 2));
    BiorthogonalData data;
    for (Position a = 0; a < 6; ++a) {
        data.vectors.push_back(SparseVector::unit(a));
        data.duals.push_back(SparseVector::unit(a));
    }
    SeparationConfig cfg;
    cfg.tau = 0;
    cfg.eps = Rational(1, 2);
    const std::vector<std::size_t> idx{0, 1, 2, 3, 4, 5};
    const auto rep = verify_separation_bound(data, fam, cfg, idx);
    const Rational N = *rep.norm("N");
    CHECK(N == *rep.norm("max_dual_norm"));
    CHECK(*rep.norm("delta") == 1 / N);
    CHECK(rep.pass());

    const std::vector<std::size_t> two{0, 1};
    const auto r2 = verify_separation_bound(data, fam, cfg, two);
    CHECK(*r2.norm("delta") == 1 / N);
    CHECK(*r2.norm("w") == norm(SparseVector::parse("0:1,1:-1"), fam));
    CHECK(r2.pass());

    cfg.N = Rational(1, 2);
    require_error(ErrorCode::NotBiorthogonal, [&] { verify_separation_bound(data, fam, cfg, idx); });
    data.duals.pop_back();
    require_error(ErrorCode::DimensionMismatch, [&] { verify_separation_bound(data, fam, cfg, idx); });
}

TEST_CASE("basic separation") {
    const auto fam = build_K_family(scheme_of("1,8;8;0"), 2, 1);
    std::vector<SparseVector> xs;
    for (Position a = 0; a < 8; ++a) xs.push_back(SparseVector::unit(a));
    const std::vector<std::size_t> idx{0, 1, 2, 3, 4, 5, 6, 7};
    const auto loose = verify_basic_separation(xs, fam, 1, 3, idx);
    CHECK(loose.pass());
    const auto tight = verify_basic_separation(xs, fam, 1, Rational(5, 4), idx);
    CHECK_FALSE(tight.find("||sum x_i|| <= L*||w||")->pass);
    CHECK(tight.find("||w|| >= 1/(2K')")->pass);
}
