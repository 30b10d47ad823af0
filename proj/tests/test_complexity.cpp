#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numeric>

#include "bai/complexity.hpp"
#include "bai/errors.hpp"
#include "bai/instance_factory.hpp"
#include "bai/rng.hpp"
#include "test_support.hpp"

using namespace bai;

namespace {

double rel_diff(double a, double b) { return std::abs(a - b) / std::max(std::abs(a), std::abs(b)); }

// Direct sums in long double over the sorted gaps, unique best arm assumed.
struct Brute {
    long double h = 0, h2 = 0, h_incl = 0;
};

Brute brute(const std::vector<double>& means)
{
    const double best = *std::max_element(means.begin(), means.end());
    std::vector<long double> g;
    for (double m : means)
        g.push_back(static_cast<long double>(best) - m);
    std::sort(g.begin(), g.end());
    Brute b;
    for (std::size_t k = 1; k < g.size(); ++k) {
        b.h += 1 / (g[k] * g[k]);
        b.h2 = std::max(b.h2, static_cast<long double>(k + 1) / (g[k] * g[k]));
    }
    b.h_incl = b.h + 1 / (g[1] * g[1]);
    return b;
}

}  // namespace

TEST_CASE("kl of Bernoulli distributions")
{
    CHECK(kl_bernoulli(0.3, 0.3) == 0.0);
    const double expected = 0.2 * std::log(0.2 / 0.4) + 0.8 * std::log(0.8 / 0.6);
    CHECK(kl_bernoulli(0.2, 0.4) == doctest::Approx(expected).epsilon(1e-14));
    CHECK(kl_bernoulli(0.4, 0.2) > 0.0);
    CHECK_THROWS_AS(kl_bernoulli(0.0, 0.5), DomainError);
    CHECK_THROWS_AS(kl_bernoulli(0.5, 1.0), DomainError);
    CHECK_THROWS_AS(kl_bernoulli(std::nan(""), 0.5), DomainError);
}

TEST_CASE("kl_flip agrees with the general divergence and the quadratic bound")
{
    for (int n = 0; n < 2500; ++n) {
        const double p = 0.25 + n * 1e-4;
        const double flip = kl_flip(p);
        const double general = kl_bernoulli(p, 1.0 - p);
        // the general form cancels two logs near p = 1/2; compare on the scale of its terms
        const double scale = std::abs(std::log(p / (1.0 - p)));
        REQUIRE(std::abs(flip - general) <= 1e-15 + 4e-16 * scale);
        REQUIRE(flip <= 10.0 * (0.5 - p) * (0.5 - p));
        // lower side of the same quadratic: kl >= 2 (1 - 2p)^2 by Pinsker
        REQUIRE(flip >= 2.0 * (1 - 2 * p) * (1 - 2 * p) - 1e-15);
    }
    CHECK(kl_flip(0.5) == 0.0);
}

TEST_CASE("complexities of the documented counterexample")
{
    const BanditInstance inst({0.5, 0.4, 0.3});
    CHECK(complexity_h(inst) == doctest::Approx(125.0).epsilon(1e-12));
    CHECK(complexity_h2(inst) == doctest::Approx(200.0).epsilon(1e-12));
    CHECK(complexity_h_incl(inst) == doctest::Approx(225.0).epsilon(1e-12));
    CHECK(complexity_h2(inst) > complexity_h(inst));
}

TEST_CASE("complexity edge cases")
{
    CHECK_THROWS_AS(complexity_h(BanditInstance({0.5, 0.5})), ComplexityError);
    CHECK_THROWS_AS(complexity_h2(BanditInstance({0.5})), ComplexityError);
    const BanditInstance tied({0.5, 0.5, 0.3});
    CHECK_THROWS_AS(complexity_h_incl(tied), ComplexityError);
    CHECK(complexity_h(tied) == doctest::Approx(25.0));
    // sorted gaps (0, 0, 0.2): the first suboptimal rank is 3
    CHECK(complexity_h2(tied) == doctest::Approx(75.0));
    const ComplexityReport r = complexity_report(tied);
    CHECK_FALSE(r.h_incl.has_value());
    CHECK(r.gaps.size() == 3);
}

TEST_CASE("complexities match brute-force sums on random instances")
{
    RngStream rng(17, 0);
    for (int n = 0; n < 300; ++n) {
        const std::size_t K = 2 + rng.next_u64() % 30;
        const BanditInstance inst = make_uniform_random_instance(K, {0.01, 0.5}, rng);
        const std::vector<double> means(inst.means().begin(), inst.means().end());
        const Brute b = brute(means);
        REQUIRE(rel_diff(complexity_h(inst), static_cast<double>(b.h)) < 1e-12);
        REQUIRE(rel_diff(complexity_h2(inst), static_cast<double>(b.h2)) < 1e-12);
        REQUIRE(rel_diff(complexity_h_incl(inst), static_cast<double>(b.h_incl)) < 1e-12);
    }
}

TEST_CASE("property: chain h2 <= h_incl <= log(2K) h2 and permutation invariance")
{
    test::SplitMix64 g{5};
    for (int n = 0; n < 1000; ++n) {
        const std::size_t K = 2 + g.next() % 49;
        std::vector<double> means(K);
        for (auto& m : means)
            m = 0.5 - (0.01 + 0.49 * static_cast<double>(g.next() >> 11) * 0x1.0p-53);
        means[g.next() % K] = 0.5;
        const BanditInstance inst(means);
        const double h2 = complexity_h2(inst);
        const double hi = complexity_h_incl(inst);
        REQUIRE(h2 <= hi);
        REQUIRE(hi <= std::log(2.0 * K) * h2);

        std::vector<double> shuffled = means;
        std::rotate(shuffled.begin(), shuffled.begin() + static_cast<long>(g.next() % K), shuffled.end());
        std::reverse(shuffled.begin(), shuffled.end());
        const BanditInstance perm(shuffled);
        REQUIRE(rel_diff(complexity_h(perm), complexity_h(inst)) < 1e-12);
        REQUIRE(complexity_h2(perm) == complexity_h2(inst));
        REQUIRE(rel_diff(complexity_h_incl(perm), hi) < 1e-12);
    }
}

TEST_CASE("family complexities of a three-arm family")
{
    const std::vector<double> tail{0.25, 0.375};
    const FamilyComplexities fc = family_complexities(make_flipped_family(tail));
    REQUIRE(fc.h.size() == 3);
    CHECK(fc.h[0] == doctest::Approx(80.0).epsilon(1e-13));
    CHECK(fc.h[1] == doctest::Approx(208.0 / 9.0).epsilon(1e-13));
    CHECK(fc.h[2] == doctest::Approx(640.0 / 9.0).epsilon(1e-13));
    CHECK(fc.h_star == doctest::Approx(9.0 / 13.0 + 9.0 / 10.0).epsilon(1e-13));
}

TEST_CASE("family complexities at alpha = 0 have closed forms")
{
    for (std::size_t K : {2, 3, 5, 17, 100}) {
        const FamilyComplexities fc = family_complexities(make_alpha_family(K, 0.0));
        const double k = static_cast<double>(K);
        CHECK(fc.h[0] == doctest::Approx(16.0 * (k - 1)).epsilon(1e-12));
        for (std::size_t i = 1; i < K; ++i)
            CHECK(fc.h[i] == doctest::Approx(4.0 * k + 8.0).epsilon(1e-12));
        CHECK(fc.h_star == doctest::Approx(4.0 * (k - 1) / (k + 2)).epsilon(1e-12));
    }
}
