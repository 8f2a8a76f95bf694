#include <doctest.h>

#include <sstream>

#include "toda/spectral_engine.hpp"

using namespace toda;

namespace {

const SSClass kAlpha{0, 1, 0, 1};
const SSClass kBeta{0, 0, 1, 1};
const SSClass kDelta{1, 0, 0, 1};

// Product-rule expansion of the first differential on D^a B^b with a >= 0:
// one identical term D^{a-1} A B^{b+p-1} per D factor, counted mod p.
std::optional<SSClass> leibniz_first(const PrimeContext& ctx, const SSClass& c) {
    if (c.alpha_exp == 1) return std::nullopt;
    REQUIRE(c.delta_exp >= 0);
    long long terms = 0;
    for (Int i = 0; i < c.delta_exp; ++i) terms = (terms + c.coeff) % ctx.p;
    if (terms == 0) return std::nullopt;
    return SSClass{c.delta_exp - 1, 1, c.beta_exp + ctx.p - 1, static_cast<int>(terms)};
}

long long count_fate(const Page& pg, Fate f) {
    long long c = 0;
    for (const auto& [key, st] : pg.entries)
        if (st.fate == f) ++c;
    return c;
}

}  // namespace

TEST_CASE("bidegree bookkeeping of monomial classes") {
    PrimeContext ctx = make_context(7);
    CHECK(class_filtration(kAlpha) == 1);
    CHECK(class_internal_degree(ctx, kAlpha) == 12);
    CHECK(class_filtration(kBeta) == 2);
    CHECK(class_internal_degree(ctx, kBeta) == 84);
    CHECK(class_filtration(kDelta) == 0);
    CHECK(class_internal_degree(ctx, kDelta) == 504);
    SSClass c{-2, 1, 3, 1};
    CHECK(class_filtration(c) == 7);
    CHECK(class_internal_degree(ctx, c) == -1008 + 12 + 252);
}

TEST_CASE("key ordering puts kernel markers after the monomial at a bidegree") {
    PrimeContext ctx = make_context(7);
    ClassKey mono = monomial_key(ctx, SSClass{0, 0, 0, 1});
    ClassKey marker = kernel_marker_key(0);
    CHECK(mono < marker);
    CHECK_FALSE(marker < mono);
    CHECK(monomial_key(ctx, kAlpha).s == 1);
    CHECK(monomial_key(ctx, kAlpha).t == 12);
}

TEST_CASE("second-page materialization over a small window") {
    PrimeContext ctx = make_context(7);
    Page pg = e2_page(ctx, Window{2, 0, 90});
    CHECK(pg.index == PageIndex::e2);
    // unit, alpha, beta, plus kernel markers at 0, 12, ..., 84
    CHECK(pg.entries.size() == 11);
    CHECK(pg.entries.count(monomial_key(ctx, SSClass{0, 0, 0, 1})) == 1);
    CHECK(pg.entries.count(monomial_key(ctx, kAlpha)) == 1);
    CHECK(pg.entries.count(monomial_key(ctx, kBeta)) == 1);
    for (Int t = 0; t <= 84; t += 12) CHECK(pg.entries.count(kernel_marker_key(t)) == 1);
    for (const auto& [key, st] : pg.entries) CHECK(st.fate == Fate::alive);

    Page one = e2_page(ctx, Window{0, 504, 504});
    CHECK(one.entries.size() == 2);
    CHECK(one.entries.count(monomial_key(ctx, kDelta)) == 1);
    CHECK(one.entries.count(kernel_marker_key(504)) == 1);

    // odd internal degree holds nothing at all
    CHECK(e2_page(ctx, Window{5, 13, 13}).entries.empty());

    CHECK_THROWS_AS(e2_page(ctx, Window{-1, 0, 10}), std::domain_error);
    CHECK_THROWS_AS(e2_page(ctx, Window{3, 10, 0}), std::domain_error);
}

TEST_CASE("first differential on the generators") {
    PrimeContext ctx = make_context(7);

    auto img = d_first(ctx, kDelta);
    REQUIRE(img.has_value());
    CHECK(*img == SSClass{0, 1, 6, 1});
    CHECK(class_filtration(*img) == 13);
    CHECK(class_internal_degree(ctx, *img) == 516);

    CHECK_FALSE(d_first(ctx, SSClass{7, 0, 0, 1}).has_value());
    CHECK_FALSE(d_first(ctx, SSClass{2, 1, 3, 1}).has_value());

    auto cube = d_first(ctx, SSClass{3, 0, 2, 1});
    REQUIRE(cube.has_value());
    CHECK(*cube == SSClass{2, 1, 8, 3});
}

TEST_CASE("first differential agrees with term-by-term expansion") {
    PrimeContext ctx = make_context(7);
    for (long long a = 0; a <= 16; ++a)
        for (long long b = 0; b <= 4; ++b)
            for (int coeff = 1; coeff <= 6; ++coeff) {
                SSClass c{a, 0, b, coeff};
                CHECK(d_first(ctx, c) == leibniz_first(ctx, c));
            }
}

TEST_CASE("first differential on inverse powers pairs to zero") {
    PrimeContext ctx = make_context(7);
    // d(D^a D^-a) = 0 forces the coefficients of d(D^a) and d(D^-a) to cancel
    for (long long a = 1; a <= 15; ++a) {
        auto plus = d_first(ctx, SSClass{a, 0, 0, 1});
        auto minus = d_first(ctx, SSClass{-a, 0, 0, 1});
        CHECK(plus.has_value() == minus.has_value());
        if (plus) CHECK((plus->coeff + minus->coeff) % ctx.p == 0);
    }
    auto inv = d_first(ctx, SSClass{-1, 0, 0, 1});
    REQUIRE(inv.has_value());
    CHECK(*inv == SSClass{-2, 1, 6, 6});
}

TEST_CASE("differentials shift bidegree by (r, r-1)") {
    PrimeContext ctx = make_context(7);
    for (long long a = -6; a <= 8; ++a)
        for (long long b = 0; b <= 3; ++b) {
            SSClass c{a, 0, b, 1};
            if (auto img = d_first(ctx, c)) {
                CHECK(class_filtration(*img) - class_filtration(c) == 13);
                CHECK(class_internal_degree(ctx, *img) - class_internal_degree(ctx, c) == 12);
            }
            SSClass odd{a, 1, b, 1};
            if (survives_to_e2p(ctx, odd)) {
                if (auto img = d_second(ctx, odd)) {
                    CHECK(class_filtration(*img) - class_filtration(odd) == 73);
                    CHECK(class_internal_degree(ctx, *img) - class_internal_degree(ctx, odd) ==
                          72);
                }
            }
        }
}

TEST_CASE("first differential composes to zero") {
    PrimeContext ctx = make_context(7);
    for (long long a = -10; a <= 10; ++a)
        for (long long b = 0; b <= 3; ++b)
            if (auto img = d_first(ctx, SSClass{a, 0, b, 1}))
                CHECK_FALSE(d_first(ctx, *img).has_value());
}

TEST_CASE("class validation rejects malformed input") {
    PrimeContext ctx = make_context(7);
    CHECK_THROWS_AS(d_first(ctx, SSClass{1, 0, 0, 0}), std::domain_error);
    CHECK_THROWS_AS(d_first(ctx, SSClass{1, 0, 0, 7}), std::domain_error);
    CHECK_THROWS_AS(d_first(ctx, SSClass{1, 2, 0, 1}), std::domain_error);
    CHECK_THROWS_AS(d_first(ctx, SSClass{1, 0, -1, 1}), std::domain_error);
    CHECK_THROWS_AS(survives_to_e2p(ctx, SSClass{1, -1, 0, 1}), std::domain_error);
}

TEST_CASE("survival to the intermediate page") {
    PrimeContext ctx = make_context(7);
    CHECK(survives_to_e2p(ctx, kAlpha));
    CHECK(survives_to_e2p(ctx, kBeta));
    CHECK_FALSE(survives_to_e2p(ctx, kDelta));
    CHECK(survives_to_e2p(ctx, SSClass{7, 0, 0, 1}));
    CHECK_FALSE(survives_to_e2p(ctx, SSClass{0, 1, 6, 1}));   // image of D
    CHECK(survives_to_e2p(ctx, SSClass{-1, 1, 6, 1}));        // would-be source is D^0
    CHECK(survives_to_e2p(ctx, SSClass{6, 1, 2, 1}));         // too few B factors to be hit

    // survivor == no outgoing differential and no incoming one
    for (long long a = -8; a <= 8; ++a)
        for (long long b = 0; b <= 8; ++b)
            for (int e = 0; e <= 1; ++e) {
                SSClass c{a, e, b, 1};
                bool outgoing = d_first(ctx, c).has_value();
                bool incoming = e == 1 && b >= ctx.p - 1 &&
                                d_first(ctx, SSClass{a + 1, 0, b - ctx.p + 1, 1}).has_value();
                CHECK(survives_to_e2p(ctx, c) == (!outgoing && !incoming));
            }
}

TEST_CASE("second differential on the generators") {
    PrimeContext ctx = make_context(7);

    auto img = d_second(ctx, SSClass{6, 1, 0, 1});
    REQUIRE(img.has_value());
    CHECK(*img == SSClass{0, 0, 37, 1});
    CHECK(class_filtration(*img) == 74);
    CHECK(class_internal_degree(ctx, *img) == 3108);

    CHECK_FALSE(d_second(ctx, SSClass{7, 0, 2, 1}).has_value());

    auto far = d_second(ctx, SSClass{13, 1, 3, 1});
    REQUIRE(far.has_value());
    CHECK(*far == SSClass{7, 0, 40, 1});

    auto scaled = d_second(ctx, SSClass{6, 1, 0, 2});
    REQUIRE(scaled.has_value());
    CHECK(scaled->coeff == 2);

    CHECK_THROWS_AS(d_second(ctx, kDelta), std::domain_error);
    CHECK_THROWS_AS(d_second(ctx, SSClass{0, 1, 6, 1}), std::domain_error);
}

TEST_CASE("full run resolves the frozen example classes") {
    PrimeContext ctx = make_context(7);
    Page pg = run_to_einfinity(ctx, Window{80, 0, 7055});
    CHECK(pg.index == PageIndex::einf);

    const ClassStatus& alpha = pg.entries.at(monomial_key(ctx, kAlpha));
    CHECK(alpha.fate == Fate::alive);

    const ClassStatus& delta = pg.entries.at(monomial_key(ctx, kDelta));
    CHECK(delta.fate == Fate::supports);
    CHECK(delta.page == 13);
    CHECK(delta.unit_coeff == 1);
    REQUIRE(delta.partner.has_value());
    CHECK(*delta.partner == monomial_key(ctx, SSClass{0, 1, 6, 1}));
    CHECK(delta.partner->s == 13);
    CHECK(delta.partner->t == 516);

    const ClassStatus& ab6 = pg.entries.at(monomial_key(ctx, SSClass{0, 1, 6, 1}));
    CHECK(ab6.fate == Fate::killed);
    CHECK(ab6.page == 13);
    REQUIRE(ab6.partner.has_value());
    CHECK(*ab6.partner == monomial_key(ctx, kDelta));

    const ClassStatus& b37 = pg.entries.at(monomial_key(ctx, SSClass{0, 0, 37, 1}));
    CHECK(b37.fate == Fate::killed);
    CHECK(b37.page == 73);
    REQUIRE(b37.partner.has_value());
    CHECK(*b37.partner == monomial_key(ctx, SSClass{6, 1, 0, 1}));

    const ClassStatus& d6a = pg.entries.at(monomial_key(ctx, SSClass{6, 1, 0, 1}));
    CHECK(d6a.fate == Fate::supports);
    CHECK(d6a.page == 73);
    CHECK_FALSE(d6a.partner_outside);

    const ClassStatus& d7 = pg.entries.at(monomial_key(ctx, SSClass{7, 0, 0, 1}));
    CHECK(d7.fate == Fate::alive);
    CHECK(monomial_key(ctx, SSClass{7, 0, 0, 1}).t == 3528);

    // a support whose target overshoots the window is flagged, not dropped
    const ClassStatus& edge = pg.entries.at(monomial_key(ctx, SSClass{13, 1, 5, 1}));
    CHECK(edge.fate == Fate::supports);
    CHECK(edge.page == 73);
    CHECK(edge.partner_outside);
    REQUIRE(edge.partner.has_value());
    CHECK(edge.partner->t == 7056);

    CHECK(count_fate(pg, Fate::unknown) == 0);
    for (Int t = 0; t <= 7055; t += 12)
        CHECK(pg.entries.at(kernel_marker_key(t)).fate == Fate::alive);
}

TEST_CASE("kill and support pairs form a perfect matching") {
    PrimeContext ctx = make_context(7);
    Page pg = run_to_einfinity(ctx, Window{80, 0, 7055});
    long long supports_inside = 0, killed = 0;
    for (const auto& [key, st] : pg.entries) {
        if (st.fate == Fate::supports) {
            REQUIRE(st.partner.has_value());
            CHECK(st.partner->s - key.s == st.page);
            CHECK(st.partner->t - key.t == st.page - 1);
            if (st.partner_outside) {
                bool outside = st.partner->s > pg.window.s_max || st.partner->t > pg.window.t_max;
                CHECK(outside);
                continue;
            }
            ++supports_inside;
            const ClassStatus& target = pg.entries.at(*st.partner);
            CHECK(target.fate == Fate::killed);
            CHECK(target.page == st.page);
            CHECK(target.unit_coeff == st.unit_coeff);
            REQUIRE(target.partner.has_value());
            CHECK(*target.partner == key);
        } else if (st.fate == Fate::killed) {
            ++killed;
            CHECK(st.unit_coeff >= 1);
            CHECK(st.unit_coeff < ctx.p);
        }
    }
    CHECK(supports_inside == killed);
    CHECK(killed > 0);
}

TEST_CASE("alive filtrations obey the collapsed-page bounds") {
    PrimeContext ctx = make_context(7);
    Page pg = run_to_einfinity(ctx, Window{80, 0, 7055});
    for (const auto& [key, st] : pg.entries) {
        if (key.k_marker || st.fate != Fate::alive) continue;
        if (key.s % 2 == 1) CHECK(key.s <= 2 * ctx.n - 1);
        if (key.s >= 2 && key.s % 2 == 0) CHECK(key.s <= 2 * ctx.n * ctx.n);
        if (key.s == 0) CHECK(mod_norm(key.delta_exp, ctx.p) == 0);
    }
}

TEST_CASE("window validation for the full run") {
    PrimeContext ctx = make_context(7);
    CHECK_THROWS_AS(run_to_einfinity(ctx, Window{80, 0, 3526}), WindowError);
    CHECK_THROWS_AS(run_to_einfinity(ctx, Window{73, 0, 7055}), WindowError);
    CHECK_NOTHROW(run_to_einfinity(ctx, Window{74, 0, 3527}));
}

TEST_CASE("engine matches the closed form over one and two periods") {
    PrimeContext ctx = make_context(7);
    EinfComparison one = compare_einfinity(ctx, Window{74, 0, 3527});
    CHECK(one.pass());
    CHECK(one.bidegrees_checked == 74 * 3528);
    CHECK(one.mismatches.empty());
    CHECK(one.unknowns.empty());

    EinfComparison two = compare_einfinity(ctx, Window{80, 0, 7055});
    CHECK(two.pass());
    CHECK(two.bidegrees_checked == 80 * 7056);
}

TEST_CASE("engine matches the closed form at p = 5") {
    PrimeContext ctx = make_context(5);
    EinfComparison cmp = compare_einfinity(ctx, Window{2 * 16 + 2, 0, 799});
    CHECK(cmp.pass());
}

TEST_CASE("kills sourced below the window are reported unknown") {
    PrimeContext ctx = make_context(7);
    // [1020, 4547] spans one period; the would-be d13 sources of the five
    // odd classes on t = 1020 all live at t = 1008, below the window
    Page pg = run_to_einfinity(ctx, Window{80, 1020, 4547});
    std::vector<SSClass> shadowed = {
        {1, 1, 6, 1}, {0, 1, 12, 1}, {-2, 1, 24, 1}, {-3, 1, 30, 1}, {-4, 1, 36, 1}};
    for (const SSClass& c : shadowed) {
        const ClassStatus& st = pg.entries.at(monomial_key(ctx, c));
        CHECK(st.fate == Fate::unknown);
        CHECK(st.page == 13);
        CHECK(class_internal_degree(ctx, c) == 1020);
    }
    // a = -1 is exempt: its would-be source has a == 0 mod p, so nothing
    // below the window can have hit it and it determinately supports d73
    const ClassStatus& live = pg.entries.at(monomial_key(ctx, SSClass{-1, 1, 18, 1}));
    CHECK(live.fate == Fate::supports);
    CHECK(live.page == 73);
    CHECK(live.partner_outside);
    CHECK(count_fate(pg, Fate::unknown) == 5);

    EinfComparison cmp = compare_einfinity(ctx, Window{80, 1020, 4547});
    CHECK_FALSE(cmp.pass());
    CHECK(cmp.mismatches.empty());
    REQUIRE(cmp.unknowns.size() == 5);
    for (const ClassKey& key : cmp.unknowns) CHECK(key.t == 1020);
}

TEST_CASE("repeated runs dump identical pages") {
    PrimeContext ctx = make_context(7);
    Page a = run_to_einfinity(ctx, Window{74, 0, 3527});
    Page b = run_to_einfinity(ctx, Window{74, 0, 3527});
    CHECK(dump_page(ctx, a) == dump_page(ctx, b));
}

TEST_CASE("page dump format") {
    PrimeContext ctx = make_context(7);
    Page pg = e2_page(ctx, Window{2, 0, 90});
    std::string expected =
        "0 0 0 0 0 1 alive\n"
        "0 0 0 0 0 0 alive\n"
        "0 12 0 0 0 0 alive\n"
        "0 24 0 0 0 0 alive\n"
        "0 36 0 0 0 0 alive\n"
        "0 48 0 0 0 0 alive\n"
        "0 60 0 0 0 0 alive\n"
        "0 72 0 0 0 0 alive\n"
        "0 84 0 0 0 0 alive\n"
        "1 12 0 1 0 1 alive\n"
        "2 84 0 0 1 1 alive\n";
    CHECK(dump_page(ctx, pg) == expected);

    Page full = run_to_einfinity(ctx, Window{74, 0, 3527});
    std::string dump = dump_page(ctx, full);
    CHECK(dump.find("0 504 1 0 0 1 supports:d13\n") != std::string::npos);
    CHECK(dump.find("13 516 0 1 6 1 killed:d13\n") != std::string::npos);
    CHECK(dump.find("1 3036 6 1 0 1 supports:d73\n") != std::string::npos);
    CHECK(dump.find("74 3108 0 0 37 1 killed:d73\n") != std::string::npos);
    CHECK(dump.find("1 12 0 1 0 1 alive\n") != std::string::npos);
}
