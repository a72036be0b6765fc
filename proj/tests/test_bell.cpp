#include <algorithm>
#include <cmath>
#include <random>

#include <doctest.h>

#include "bellforge/bell.hpp"

using namespace bellforge;

namespace {

constexpr double kPi = 3.14159265358979323846;

int parties_of(const std::string& name) { return named_functional(name).scenario.n_parties; }

/** State on which each catalog entry is expected to reach at least its LHV bound. */
DensityOperator designated_state(const BellFunctional& f)
{
    if (f.name == "chsh") return singlet().density();
    return ghz_state(f.scenario.n_parties).density();
}

std::vector<int> quarters(const BellFunctional& f)
{
    std::vector<int> q;
    for (double c : f.coeffs) q.push_back(static_cast<int>(std::lround(4 * c)));
    return q;
}

} // namespace

TEST_CASE("brute-force LHV bounds of catalog entries")
{
    CHECK(compute_lhv_bound(chsh()) == 2.0);
    BellFunctional single(Scenario(2, 2), "single");
    single.at({0, 0}) = 1.0;
    CHECK(compute_lhv_bound(single) == 1.0);
    CHECK(compute_lhv_bound(mermin(3)) == 2.0);
    CHECK(compute_lhv_bound(mermin(4)) == 4.0);
    CHECK(compute_lhv_bound(mermin(5)) == 4.0);
    for (int k = 1; k <= 4; ++k) CHECK(compute_lhv_bound(wiesniak_ineq(k)) == doctest::Approx(1.0));
    CHECK(compute_lhv_bound(plzb3qa()) == doctest::Approx(16.0));
    for (int n = 2; n <= 6; ++n) CHECK(compute_lhv_bound(mabk(n)) == doctest::Approx(1.0));
}

TEST_CASE("vertex enumeration agrees with strategy enumeration")
{
    for (const auto& f : {chsh(), mermin(3), ardehali(4), wiesniak_ineq(2)})
        CHECK(lhv_bound_vertices(f) == doctest::Approx(compute_lhv_bound(f)));
}

TEST_CASE("quantum values on the standard states")
{
    CHECK(quantum_value(chsh(), singlet().density()).value == doctest::Approx(2 * std::sqrt(2.0)).epsilon(1e-9));
    CHECK(quantum_value(mermin(3), ghz_state(3).density()).value == doctest::Approx(4.0).epsilon(1e-9));
    SUBCASE("product states stay below the classical bound")
    {
        std::mt19937_64 rng(2);
        for (int rep = 0; rep < 20; ++rep) {
            const auto prod = random_separable({2, 2}, 1, rng);
            CHECK(quantum_value(chsh(), prod, 16, rep).value <= 2.0 + 1e-6);
        }
    }
    SUBCASE("the returned observables reproduce the value")
    {
        const auto t = correlation_tensor(singlet().density());
        SeeSawOptions opts;
        const auto q = quantum_value(chsh(), t, opts);
        CHECK(bell_value(chsh(), t, q.observables) == doctest::Approx(q.value).epsilon(1e-12));
        for (const auto& party : q.observables)
            for (const auto& v : party) CHECK(v.norm() == doctest::Approx(1.0));
    }
    SUBCASE("fixed seed gives identical results")
    {
        const auto a = quantum_value(mermin(3), ghz_state(3).density(), 8, 42);
        const auto b = quantum_value(mermin(3), ghz_state(3).density(), 8, 42);
        CHECK(a.restart_values == b.restart_values);
    }
}

TEST_CASE("catalog entries against quantum and separable states")
{
    std::mt19937_64 rng(99);
    for (const auto& f : named_functionals()) {
        CAPTURE(f.name);
        REQUIRE(f.lhv_bound.has_value());
        const auto t = correlation_tensor(designated_state(f));
        SeeSawOptions opts;
        opts.restarts = 32;
        CHECK(quantum_value(f, t, opts).value >= *f.lhv_bound - 1e-9);
        const int n = f.scenario.n_parties;
        const int samples = n <= 4 ? 100 : 20;
        opts.restarts = 4;
        double worst = -1e300;
        for (int rep = 0; rep < samples; ++rep) {
            const auto sep = correlation_tensor(random_separable(std::vector<int>(n, 2), 3, rng));
            worst = std::max(worst, quantum_value(f, sep, opts).value);
        }
        CHECK(worst <= *f.lhv_bound + 1e-9);
    }
}

TEST_CASE("named functionals parse with their party counts")
{
    CHECK(parties_of("chsh") == 2);
    CHECK(parties_of("mermin_5") == 5);
    CHECK(parties_of("mabk_4") == 4);
    CHECK(parties_of("chsh_lift_3") == 3);
    CHECK(parties_of("plzb3qa") == 3);
    CHECK(parties_of("wiesniak_ineq3") == 3);
    CHECK_THROWS_AS(named_functional("nonsense"), DomainError);
    CHECK_THROWS_AS(named_functional("mermin_1"), DomainError);
}

TEST_CASE("all-versus-nothing GHZ check")
{
    const auto r3 = ghz_avn_check(3);
    REQUIRE(r3.means.size() == 4);
    CHECK(r3.means[0] == doctest::Approx(1.0));
    CHECK(r3.means[1] == doctest::Approx(1.0));
    CHECK(r3.means[2] == doctest::Approx(1.0));
    CHECK(r3.means[3] == doctest::Approx(-1.0));
    CHECK(r3.means_match);
    CHECK_FALSE(r3.lhv_assignable);
    CHECK(r3.contradiction);
    for (int n = 4; n <= 6; ++n) {
        const auto r = ghz_avn_check(n);
        CHECK(r.means_match);
        for (double m : r.means) CHECK(std::abs(std::abs(m) - 1.0) < 1e-10);
    }
    const DensityOperator mixed(Eigen::MatrixXcd::Identity(8, 8) / 8.0, {2, 2, 2});
    const auto rm = ghz_avn_check(3, mixed);
    for (double m : rm.means) CHECK(std::abs(m) < 1e-12);
    CHECK_FALSE(rm.contradiction);
    CHECK_THROWS_AS(ghz_avn_check(2), DomainError);
}

TEST_CASE("face determinant on the two-setting product vertices")
{
    std::vector<std::array<int, 9>> all;
    for (int a : {1, -1})
        for (int b : {1, -1})
            for (int c : {1, -1})
                for (int d : {1, -1}) all.push_back(product_vertex(a, b, c, d));
    // greedily pick nine vertices with a non-singular matrix
    std::vector<int> pick(9);
    std::vector<std::array<int, 9>> basis;
    bool found = false;
    std::vector<bool> mask(all.size(), false);
    std::fill(mask.begin(), mask.begin() + 9, true);
    do {
        basis.clear();
        for (std::size_t i = 0; i < all.size(); ++i)
            if (mask[i]) basis.push_back(all[i]);
        std::vector<std::vector<long long>> m;
        for (const auto& v : basis) m.emplace_back(v.begin(), v.end());
        found = integer_determinant(m) != 0;
    } while (!found && std::prev_permutation(mask.begin(), mask.end()));
    REQUIRE(found);
    std::array<int, 9> other{};
    for (std::size_t i = 0; i < all.size(); ++i)
        if (!mask[i]) other = all[i];
    const auto in_span = is_face_2q3s(basis, other);
    CHECK(in_span.D == 0);
    CHECK_FALSE(in_span.degenerate);
    std::array<int, 9> flipped = basis[0];
    for (int& x : flipped) x = -x;
    const auto outside = is_face_2q3s(basis, flipped);
    CHECK(std::llabs(outside.D) == 2 * std::llabs(outside.minor));
    CHECK(outside.D != 0);
    CHECK(is_face_2q3s(basis, basis[0]).D == 0);
}

TEST_CASE("integer determinant")
{
    CHECK(integer_determinant({{2, 0}, {0, 3}}) == 6);
    CHECK(integer_determinant({{1, 2}, {2, 4}}) == 0);
    CHECK(integer_determinant({{0, 1}, {1, 0}}) == -1);
}

TEST_CASE("tight functional generation")
{
    SUBCASE("two parties: CHSH is the only nontrivial class")
    {
        const auto cat = generate_tight_functionals(2);
        CHECK(cat.sign_functions == 90);
        CHECK(cat.nontrivial() == 1);
        for (const auto& cls : cat.classes) {
            CHECK(compute_lhv_bound(cls.functional) == doctest::Approx(1.0));
            CHECK(cls.rank == 9);
        }
    }
    SUBCASE("three parties contain the four inequalities")
    {
        const auto cat = generate_tight_functionals(3);
        CHECK(cat.sign_functions == 51678);
        CHECK(cat.classes.size() == 10);
        std::size_t total = 0;
        for (const auto& cls : cat.classes) {
            total += cls.orbit_size;
            CHECK(is_valid_sign_function(cls.quarter_coeffs, 3, 3));
            CHECK(compute_lhv_bound(cls.functional) == doctest::Approx(1.0));
            CHECK(cls.rank == 27);
            long long sq = 0, sum = 0;
            for (int q : cls.quarter_coeffs) {
                sq += q * q;
                sum += q;
            }
            CHECK(sq == 16); // sum g^2 = 1
            (void)sum;
        }
        CHECK(total == cat.sign_functions);
        const std::size_t expected_class[] = {3, 5, 6, 9};
        for (int k = 1; k <= 4; ++k) {
            const auto m = match_class(cat, wiesniak_ineq(k));
            REQUIRE(m.has_value());
            CHECK(*m == expected_class[k - 1]);
        }
    }
    SUBCASE("the printed fourth inequality is not a sign function")
    {
        CHECK_FALSE(is_valid_sign_function(quarters(wiesniak_ineq4_printed()), 3, 3));
        CHECK(is_valid_sign_function(quarters(wiesniak_ineq(4)), 3, 3));
    }
    SUBCASE("canonical form is invariant under relabelling")
    {
        auto q = quarters(wiesniak_ineq(1));
        const auto canon = canonical_form(q, 3, 3);
        // swap settings 0 and 2 of the last party
        auto swapped = q;
        for (int i = 0; i < 9; ++i) std::swap(swapped[3 * i], swapped[3 * i + 2]);
        CHECK(canonical_form(swapped, 3, 3) == canon);
    }
    CHECK_THROWS_AS(generate_tight_functionals(4), DomainError);
}

TEST_CASE("tensor conditions")
{
    SUBCASE("noisy W3 gives 7/3 V^2")
    {
        for (double v : {1.0, 0.8, 0.5}) {
            const auto t = correlation_tensor(with_white_noise(w_state(3).density(), v));
            CHECK(condition_wwwzb(t, ConditionMode::optimized) == doctest::Approx(7.0 / 3.0 * v * v).epsilon(1e-6));
        }
    }
    SUBCASE("generalized GHZ xz sum is one")
    {
        for (double a : {0.05, 0.2, 0.4, 0.7}) {
            const auto t = correlation_tensor(generalized_ghz(3, a).density());
            CHECK(plane_square_sum(t, {{1, 3}, {1, 3}, {1, 3}}) == doctest::Approx(1.0).epsilon(1e-12));
        }
    }
    SUBCASE("singlet")
    {
        const auto t = correlation_tensor(singlet().density());
        CHECK(condition_wwwzb(t, ConditionMode::optimized) == doctest::Approx(2.0).epsilon(1e-9));
    }
    SUBCASE("product states stay at or below one")
    {
        std::mt19937_64 rng(4);
        for (int rep = 0; rep < 10; ++rep) {
            std::vector<Eigen::Vector3d> bloch;
            for (int p = 0; p < 3; ++p) {
                Eigen::Vector3d v = Eigen::Vector3d::Random();
                bloch.push_back(v.normalized());
            }
            const auto t = correlation_tensor(product_state(bloch));
            CHECK(condition_wwwzb(t, ConditionMode::optimized) <= 1.0 + 1e-9);
            CHECK(condition_wzlpzb(t, 3) <= 1.0 + 1e-9);
            const auto rep3 = condition_three_setting(t, ThreeSettingCondition::ineq1);
            CHECK(rep3.optimized <= 1.0 + 1e-9);
        }
    }
    SUBCASE("generalized GHZ in the extended condition")
    {
        // xz frame gives 1 + sin^2 2a; the xy frame gives 4 sin^2 2a and wins past sin^2 2a = 1/3
        for (double a : {0.1, 0.3, 0.5, kPi / 4}) {
            const auto t = correlation_tensor(generalized_ghz(3, a).density());
            const double s2 = std::pow(std::sin(2 * a), 2);
            CHECK(condition_wzlpzb(t, 3) == doctest::Approx(std::max(1.0 + s2, 4 * s2)).epsilon(1e-6));
        }
    }
    SUBCASE("noisy W threshold of the extended condition")
    {
        for (int n : {3, 4}) {
            const double v_star = 1.0 / std::sqrt(3.0 - 2.0 / n);
            const auto above = correlation_tensor(with_white_noise(w_state(n).density(), v_star + 0.02));
            const auto below = correlation_tensor(with_white_noise(w_state(n).density(), v_star - 0.02));
            CHECK(condition_wzlpzb(above, n) > 1.0);
            CHECK(condition_wzlpzb(below, n) < 1.0);
        }
    }
    SUBCASE("three-setting conditions on GHZ3")
    {
        const auto t = correlation_tensor(ghz_state(3).density());
        const auto r1 = condition_three_setting(t, ThreeSettingCondition::ineq1);
        CHECK(r1.common_fixed <= 3.0 + 1e-9);
        CHECK(r1.optimized <= 3.0 + 1e-6);
        const auto r2 = condition_three_setting(t, ThreeSettingCondition::ineq2);
        CHECK(r2.optimized >= r2.common_fixed - 1e-9);
    }
}

TEST_CASE("rotational invariance condition")
{
    const auto ghz3 = correlation_tensor(ghz_state(3).density());
    const auto r = rotinv_condition(ghz3, RotInvMode::planar);
    CHECK(r.t_max == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(r.sum_sq == doctest::Approx(4.0).epsilon(1e-12));
    CHECK(r.ratio == doctest::Approx(std::pow(kPi / 4, 3) * 4).epsilon(1e-9));
    CHECK(r.violated);
    const DensityOperator mixed(Eigen::MatrixXcd::Identity(8, 8) / 8.0, {2, 2, 2});
    const auto rm = rotinv_condition(correlation_tensor(mixed), RotInvMode::planar);
    CHECK(rm.sum_sq == 0.0);
    CHECK_FALSE(rm.violated);
}

TEST_CASE("modified tensor of the four-party generalized GHZ state")
{
    for (double a : {0.1, 0.3, 0.6}) {
        const auto t = correlation_tensor(generalized_ghz(4, a).density());
        const double s = std::sin(2 * a);
        // the construction gives sqrt(1 + sin^2 2a)
        CHECK(modified_tensor_max(t) == doctest::Approx(std::sqrt(1 + s * s)).epsilon(1e-9));
    }
}

TEST_CASE("Euler rotations are orthogonal and rotate tensors consistently")
{
    const Eigen::Matrix3d r = euler_rotation(0.3, 1.1, -0.7);
    CHECK((r * r.transpose() - Eigen::Matrix3d::Identity()).norm() < 1e-12);
    CHECK(r.determinant() == doctest::Approx(1.0));
    const auto t = correlation_tensor(singlet().density());
    // the singlet is invariant under equal rotations of both parties
    const auto rt = rotate_party(rotate_party(t, 0, r), 1, r);
    for (std::size_t k = 0; k < t.size(); ++k) CHECK(std::abs(rt[k] - t[k]) < 1e-12);
}
