#include <cmath>

#include <doctest.h>

#include "bellforge/photonics.hpp"
#include "bellforge/types.hpp"

using namespace bellforge;

namespace {

constexpr double kPi = 3.14159265358979323846;
const double kSqrt2 = std::sqrt(2.0);

BJSSParams params(double eta, double l, double alpha_sq = 400.0)
{
    BJSSParams p;
    p.eta = eta;
    p.l = l;
    p.alpha_sq = alpha_sq;
    return p;
}

} // namespace

TEST_CASE("two-mode interference visibilities")
{
    CHECK(twc_visibility(1e-6) == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(twc_visibility(1.0) == doctest::Approx(0.5));
    for (double a : {0.3, 1.0, 2.0}) CHECK(twc_visibility(a) == doctest::Approx(1.0 / (1 + a * a)));
    // coherent pair: maximum one half at alpha^2 = beta^2 / 2
    for (double beta : {0.5, 1.0, 3.0}) {
        const double a_opt = beta / kSqrt2;
        CHECK(std::abs(twc_visibility(a_opt, beta) - 0.5) < 1e-9);
        CHECK(twc_visibility(a_opt * 1.2, beta) < 0.5);
        CHECK(twc_visibility(a_opt * 0.8, beta) < 0.5);
    }
}

TEST_CASE("two-mode interference CHSH threshold")
{
    CHECK(std::abs(twc_chsh_threshold() - std::sqrt(kSqrt2 - 1)) < 1e-6);
    CHECK(twc_chsh_margin(0.3) > 0);
    CHECK(twc_chsh_margin(0.9) < 0);
    CHECK(twc_correlation(0.0, kPi / 2, 0.0) == doctest::Approx(1.0));
}

TEST_CASE("Fock cutoff covers the Poisson tail")
{
    CHECK(poisson_cutoff(400.0) > 400);
    CHECK(poisson_cutoff(400.0) < 600);
    CHECK_THROWS_AS(poisson_cutoff(400.0, 300), NumericalError);
}

TEST_CASE("homodyne probabilities")
{
    SUBCASE("exact and approximate P++ at opposite phases")
    {
        const auto ex = bjss_probs(params(1, 1), 0.0, kPi, ProbabilityMethod::exact);
        const auto ap = bjss_probs(params(1, 1), 0.0, kPi, ProbabilityMethod::approx);
        CHECK(std::abs(ex.p_pp - ap.p_pp) <= 0.01 * ap.p_pp);
        CHECK(ex.p_pp == doctest::Approx(0.49937).epsilon(1e-4));
    }
    SUBCASE("no coherence removes the phase dependence")
    {
        for (auto m : {ProbabilityMethod::exact, ProbabilityMethod::approx}) {
            const double a = bjss_probs(params(0.8, 0), 0.0, 0.3, m).p_pp;
            const double b = bjss_probs(params(0.8, 0), 1.0, -2.0, m).p_pp;
            CHECK(a == doctest::Approx(b).epsilon(1e-12));
        }
    }
    SUBCASE("approximate P-- vanishes at equal phases")
    {
        CHECK(std::abs(bjss_probs(params(1, 1), 0.4, 0.4, ProbabilityMethod::approx).p_mm) < 1e-15);
    }
    SUBCASE("exact probabilities are probabilities")
    {
        for (double eta : {0.2, 0.6, 1.0})
            for (double d : {0.0, 1.0, 2.5}) {
                const auto q = bjss_probs(params(eta, 0.9, 50), 0.0, d, ProbabilityMethod::exact);
                for (double x : {q.p_plus_c, q.p_plus_d, q.p_pp, q.p_pm, q.p_mp, q.p_mm}) {
                    CHECK(x >= -1e-15);
                    CHECK(x <= 1 + 1e-15);
                }
                // d may stay silent, so the joint terms never exceed the marginal
                CHECK(q.p_pp + q.p_pm <= q.p_plus_c + 1e-12);
            }
    }
    SUBCASE("invalid parameters")
    {
        CHECK_THROWS_AS(bjss_probs(params(1.2, 1), 0, 0, ProbabilityMethod::approx), DomainError);
        CHECK_THROWS_AS(bjss_probs(params(1, -0.1), 0, 0, ProbabilityMethod::approx), DomainError);
        CHECK_THROWS_AS(bjss_probs(params(1, 1, 0), 0, 0, ProbabilityMethod::exact), DomainError);
    }
}

TEST_CASE("CH expression values")
{
    // P++ falls with cos(phi_c - phi_d), so the optimum has the d angles shifted by pi
    const std::array<double, 4> best{0.0, kPi / 2, 5 * kPi / 4, 3 * kPi / 4};
    CHECK(bjss_ch_value(params(1, 1), ChVariant::plus_only, best) ==
          doctest::Approx(0.5 * (kSqrt2 - 1)).epsilon(1e-9));
    CHECK(bjss_ch_max(params(1, 1), ChVariant::plus_only).value ==
          doctest::Approx(0.5 * (kSqrt2 - 1)).epsilon(1e-9));
    SUBCASE("coherence below 1/sqrt2 never violates")
    {
        for (double l : {0.5, 0.7})
            for (auto v : {ChVariant::plus_only, ChVariant::plus_minus})
                for (double a = 0; a < 2 * kPi; a += kPi / 6)
                    for (double b = 0; b < 2 * kPi; b += kPi / 6) {
                        const std::array<double, 4> ang{0.0, a, b, a + b};
                        CHECK(bjss_ch_value(params(1, l), v, ang) <= 1e-12);
                    }
    }
    CHECK(bjss_ch_max(params(1e-9, 1), ChVariant::plus_only).value <= 1e-9);
}

TEST_CASE("critical transparencies")
{
    const auto r = bjss_critical_roots();
    CHECK(r.l_ch_pp == doctest::Approx(1 + kSqrt2 - std::pow(2.0, 0.75)).epsilon(1e-9));
    CHECK(std::abs(r.l_chsh - 0.632) < 1e-3);
    CHECK(r.l_ch_pm == doctest::Approx(3 - 2 * kSqrt2).epsilon(1e-9));
    SUBCASE("curves reach 1/sqrt2 at unit transparency and decrease with it")
    {
        const auto c1 = bjss_critical_curves(1.0);
        CHECK(c1.l_ch_pp == doctest::Approx(1 / kSqrt2).epsilon(1e-9));
        CHECK(c1.l_chsh == doctest::Approx(1 / kSqrt2).epsilon(1e-9));
        CHECK(c1.l_ch_pm == doctest::Approx(1 / kSqrt2).epsilon(1e-9));
        double prev = 1e9;
        for (double eta = 0.2; eta <= 1.0; eta += 0.1) {
            const double v = bjss_critical_curves(eta).l_ch_pp;
            CHECK(v < prev);
            prev = v;
        }
    }
    SUBCASE("the optimised expressions vanish at the roots")
    {
        CHECK(std::abs(bjss_ch_max(params(r.l_ch_pp, 1), ChVariant::plus_only).value) < 1e-9);
        CHECK(std::abs(bjss_ch_max(params(r.l_ch_pm, 1), ChVariant::plus_minus).value) < 1e-9);
        CHECK(std::abs(bjss_chsh_max(params(r.l_chsh, 1)).value) < 1e-9);
    }
}

TEST_CASE("compensated intensity")
{
    for (double eta : {0.3, 0.8, 1.0}) {
        const auto c = bjss_compensated(params(eta, 1));
        CHECK(std::abs(c.critical_product - 1 / kSqrt2) < 1e-9);
        CHECK(c.attainable == (c.l_critical <= 1.0));
    }
}

TEST_CASE("partial transposition eigenvalue")
{
    for (double eta : {0.1, 0.5, 0.9, 1.0})
        for (double l : {0.0, 0.4, 1.0}) {
            const double f = bjss_ppt_min_eig_formula(eta, l);
            CHECK(std::abs(f - bjss_ppt_min_eig_numeric(eta, l)) < 1e-10);
            CHECK(f == doctest::Approx(0.5 * (1 - eta - std::sqrt((1 - eta) * (1 - eta) + l * l * eta * eta))));
        }
}

TEST_CASE("detection loophole thresholds")
{
    const auto g = garg_mermin({1.0, 0.0, 1.0});
    CHECK(std::abs(g.eta_crit - 2 * (kSqrt2 - 1)) < 1e-9);
    CHECK(std::abs(g.v_crit - 1 / kSqrt2) < 1e-9);
    CHECK(garg_mermin({1.0, 0.0, 1 / kSqrt2}).eta_crit == doctest::Approx(1.0));
    CHECK(garg_mermin({0.9, 0.01, 1.0}).v_crit > garg_mermin({0.9, 0.0, 1.0}).v_crit);
    CHECK_THROWS_AS(garg_mermin({1.5, 0.0, 1.0}), DomainError);
}

TEST_CASE("single photon against a weak coherent beam")
{
    const auto none = hessmo_probs(1.0, 0.0, 1.0, 0.3, 1.0);
    CHECK(none.p_cd == doctest::Approx(0.0));
    const double r = std::sin(2 * kPi / 180), t = std::cos(2 * kPi / 180);
    const auto h = hessmo_probs(1.0, r, t, 0.0, 1.0);
    CHECK(h.visibility > 0);
    CHECK(h.visibility <= 1);
    CHECK(h.nonclassical == (h.visibility > 0.5));
    CHECK_THROWS_AS(hessmo_probs(1.0, 0.5, 0.5, 0.0, 1.0), DomainError);
}
