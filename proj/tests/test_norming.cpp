#include <doctest.h>

#include <set>

#include "csw/analysis.hpp"
#include "csw/error.hpp"
#include "csw/norming.hpp"
#include "oracles.hpp"

using namespace csw;

namespace {

std::shared_ptr<const Scheme> scheme_of(const char* type) {
    return std::make_shared<const Scheme>(build_scheme(parse_type(type)));
}

bool contains(std::span<const SparseVector> fs, const SparseVector& v) {
    return std::find(fs.begin(), fs.end(), v) != fs.end();
}

}  // namespace

TEST_CASE("eps family on six singletons") {
    const auto s = scheme_of("1,6;6;0");
    const auto fam = build_eps_family(s, Rational(1, 2));
    const auto top = s->top();
    CHECK(fam.h(top, 0) == SparseVector::parse("0:1,2:1/2,3:-1/2,4:1/2,5:-1/2"));
    CHECK(fam.h(top, 1) == SparseVector::parse("1:1,2:-1/2,3:1/2,4:-1/2,5:1/2"));
    for (Position j = 2; j < 6; ++j) CHECK(fam.h(top, j) == SparseVector::unit(j));
    for (std::uint32_t i = 0; i < 6; ++i) {
        const auto v = fam.vectors({0, i});
        REQUIRE(v.size() == 1);
        CHECK(v[0] == SparseVector::unit(i));
    }
    CHECK(pair(fam.h(top, 0), SparseVector::unit(2)) == Rational(1, 2));
    CHECK(fam.origins(top)[0].front().rule() == 2);
    CHECK(fam.origins(top)[1].front().rule() == 3);
    CHECK(fam.origins(top)[3].front().rule() == 4);
}

TEST_CASE("root rule spreads the first-piece functional") {
    const auto s = scheme_of("1,2,4;2,3;0,1");
    const auto fam = build_eps_family(s, Rational(1, 2));
    const auto top = s->top();
    const auto first = s->children(top)[0];
    CHECK(fam.h(top, 0) == spread(fam.h(first, 0), *s, top));
    CHECK(fam.origins(top)[0].front().rule() == 1);
}

TEST_CASE("eps families match the rule-by-rule expansion") {
    for (const char* text : {"1,6;6;0", "1,2,4;2,3;0,1", "1,2,4,10;2,3,4;0,1,2", "1,2,4,7;2,3,4;0,1,3", "1,3,9;3,4;0,1"}) {
        for (const Rational eps : {Rational(1, 2), Rational(2, 3)}) {
            CAPTURE(text);
            const auto t = parse_type(text);
            const auto s = std::make_shared<const Scheme>(build_scheme(t));
            const auto fam = build_eps_family(s, eps);
            for (int k = 0; k <= t.depth; ++k) {
                for (std::uint32_t i = 0; i < s->level_size(k); ++i) {
                    const auto& F = s->set({k, i});
                    const auto expected = oracle::eps_family(t, k, F.elements, eps);
                    for (Position a : F.elements) REQUIRE(fam.h({k, i}, a) == oracle::to_sparse(expected.at(a)));
                }
            }
        }
    }
}

TEST_CASE("literal root rule breaks coherence") {
    const auto s = scheme_of("1,2,4,10;2,3,4;0,1,2");
    const auto good = build_eps_family(s, Rational(1, 2));
    const auto bad = build_eps_family(s, Rational(1, 2), {true});
    CHECK(check_coherence_restriction(good).pass());
    CHECK(check_nonseparability(good).pass());
    const auto broken = check_coherence_restriction(bad);
    CHECK_FALSE(broken.pass());
    CHECK_FALSE(broken.counterexample.empty());
}

TEST_CASE("spread") {
    const auto s = scheme_of("1,2,4;2,3;0,1");
    const auto top = s->top();
    CHECK(spread(SparseVector::parse("0:1/2,1:1"), *s, top) == SparseVector::parse("0:1/2,1:1,2:1,3:1"));
    CHECK(spread(SparseVector::unit(0), *s, top) == SparseVector::unit(0));
    CHECK(spread(SparseVector::unit(1), *s, top) == SparseVector::parse("1:1,2:1,3:1"));
    try {
        spread(SparseVector::unit(2), *s, top);
        FAIL("expected HomeMismatch");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::HomeMismatch);
    }
}

TEST_CASE("K family on two points") {
    const auto s = scheme_of("1,2;2;0");
    const auto fam = build_K_family(s, 2, 1);
    const auto top = fam.vectors(s->top());
    for (const char* v : {"0:1", "1:1", "0:1,1:1", "0:1/2", "1:1/2", "0:1/2,1:1/2"}) {
        CAPTURE(v);
        CHECK(contains(top, SparseVector::parse(v)));
    }
    for (const auto& f : top) {
        CHECK_FALSE(f.empty());
        CHECK(max_abs_entry(f) <= 1);
    }
    const std::set<SparseVector> unique(top.begin(), top.end());
    CHECK(unique.size() == top.size());
    const auto r0 = fam.vectors({0, 0});
    CHECK(r0.size() == 2);
    CHECK(contains(r0, SparseVector::unit(0)));
    CHECK(contains(r0, SparseVector::parse("0:1/2")));
}

TEST_CASE("K family closure by direct enumeration") {
    // Per set: B = units and spreads of the first-piece family; H = B plus
    // K^-j (b restricted below d) for j <= cap and d in F or no cut.
    for (const char* text : {"1,2;2;0", "1,3;3;0", "1,2,4;2,3;0,1"}) {
        for (int cap : {1, 2}) {
            CAPTURE(text);
            CAPTURE(cap);
            const auto s = scheme_of(text);
            const Rational K(3, 2);
            const auto fam = build_K_family(s, K, cap);
            std::map<SetId, std::set<SparseVector>> expect;
            for (int k = 0; k <= s->depth(); ++k) {
                for (std::uint32_t i = 0; i < s->level_size(k); ++i) {
                    const SetId id{k, i};
                    const auto& F = s->set(id);
                    std::set<SparseVector> base;
                    for (Position a : F.elements) base.insert(SparseVector::unit(a));
                    if (k > 0) {
                        const auto first = s->children(id)[0];
                        for (const auto& f : expect[first]) base.insert(spread(f, *s, id));
                    }
                    auto all = base;
                    for (const auto& b : base) {
                        for (int j = 1; j <= cap; ++j) {
                            const Rational scale = inverse_power(K, j);
                            all.insert(scale * b);
                            for (Position d : F.elements) {
                                auto v = scale * b.below(d);
                                if (!v.empty()) all.insert(v);
                            }
                        }
                    }
                    expect[id] = all;
                    const auto got = fam.vectors(id);
                    CHECK(std::set<SparseVector>(got.begin(), got.end()) == all);
                }
            }
        }
    }
}

TEST_CASE("norm values") {
    const auto s6 = scheme_of("1,6;6;0");
    const auto eps = build_eps_family(s6, Rational(1, 2));
    for (Position a = 0; a < 6; ++a) CHECK(norm(SparseVector::unit(a), eps) == 1);
    const auto x = SparseVector::parse("0:1,1:-1,2:-1/2,3:1/2,4:-1/2,5:1/2");
    CHECK(norm(x, eps) == Rational(1, 2));
    CHECK(norm(x, eps, NormMode::All) == 1);
    CHECK(norm(SparseVector{}, eps) == 0);
    const auto ev = evaluate_norm(x, eps);
    REQUIRE(ev.site);
    CHECK(*ev.site == s6->top());

    const auto s8 = scheme_of("1,8;8;0");
    const auto k = build_K_family(s8, 2, 1);
    CHECK(norm(SparseVector::parse("0:1,1:1,2:1,3:1,4:1,5:1,6:1,7:1"), k) == 8);
    for (Position a = 0; a < 8; ++a) CHECK(norm(SparseVector::unit(a), k) == 1);

    const auto s2 = scheme_of("1,2;2;0");
    CHECK(norm(SparseVector::parse("0:1,1:-1"), build_K_family(s2, 2, 1)) == 1);
    CHECK(norm_on(SparseVector::unit(3), eps, s6->top()) == 1);
}

TEST_CASE("norm is the largest pairing over the local family") {
    const auto s = scheme_of("1,2,4,10;2,3,4;0,1,2");
    const auto fam = build_eps_family(s, Rational(2, 3));
    std::mt19937_64 rng(3);
    for (int trial = 0; trial < 50; ++trial) {
        const auto x = random_vector(rng, s->set(s->top()).elements);
        Rational best = 0;
        for (const auto& f : fam.vectors(s->top())) best = std::max(best, abs_value(pair(f, x)));
        CHECK(norm(x, fam) == best);
    }
}

TEST_CASE("global duals") {
    const auto s = scheme_of("1,6;6;0");
    const auto fam = build_eps_family(s, Rational(1, 2));
    CHECK(global_dual(fam, 0).vector == SparseVector::parse("0:1,2:1/2,3:-1/2,4:1/2,5:-1/2"));
    const auto last = global_dual(fam, 5).vector;
    CHECK(last.get(5) == 1);
    CHECK(last.below(5).empty());
    const auto k = build_K_family(s, 2, 1);
    try {
        global_dual(k, 0);
        FAIL("expected WrongSpaceKind");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::WrongSpaceKind);
    }
}

TEST_CASE("parameter ranges") {
    const auto s = scheme_of("1,2;2;0");
    for (const Rational bad : {Rational(0), Rational(1), Rational(3, 2), Rational(-1, 2)}) {
        CHECK_THROWS_AS(build_eps_family(s, bad), Error);
    }
    CHECK_THROWS_AS(build_K_family(s, 1, 1), Error);
    CHECK_THROWS_AS(build_K_family(s, 2, 0), Error);
}
