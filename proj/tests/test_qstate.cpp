#include <cmath>
#include <random>

#include <doctest.h>
#include <unsupported/Eigen/KroneckerProduct>

#include "bellforge/qstate.hpp"

using namespace bellforge;

namespace {

constexpr double kPi = 3.14159265358979323846;

CorrelationTensor tensor_of(const PureState& psi) { return correlation_tensor(psi.density()); }

double max_abs_diff(const Eigen::MatrixXcd& a, const Eigen::MatrixXcd& b) { return (a - b).cwiseAbs().maxCoeff(); }

} // namespace

TEST_CASE("singlet correlation tensor is minus the identity on the spatial block")
{
    const auto t = tensor_of(singlet());
    CHECK(t({0, 0}) == doctest::Approx(1.0));
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) {
            if (i == 0 && j == 0) continue;
            const double expected = (i == j) ? -1.0 : 0.0;
            CHECK(std::abs(t({i, j}) - expected) < 1e-12);
        }
}

TEST_CASE("maximally mixed pair has only the trivial entry")
{
    const DensityOperator mixed(Eigen::MatrixXcd::Identity(4, 4) / 4.0, {2, 2});
    const auto t = correlation_tensor(mixed);
    for (std::size_t k = 0; k < t.size(); ++k) CHECK(std::abs(t[k] - (k == 0 ? 1.0 : 0.0)) < 1e-14);
}

TEST_CASE("minus-sign GHZ3 has the stabiliser signs of the all-versus-nothing argument")
{
    const auto t = tensor_of(ghz_state(3, -1));
    CHECK(t({1, 2, 2}) == doctest::Approx(1.0));
    CHECK(t({2, 1, 2}) == doctest::Approx(1.0));
    CHECK(t({2, 2, 1}) == doctest::Approx(1.0));
    CHECK(t({1, 1, 1}) == doctest::Approx(-1.0));
}

TEST_CASE("tensor reconstruction")
{
    SUBCASE("trivial tensor gives the maximally mixed state")
    {
        CorrelationTensor t(2);
        t({0, 0}) = 1.0;
        const auto rec = state_from_tensor(t);
        CHECK(rec.positive);
        CHECK(max_abs_diff(rec.state.matrix(), Eigen::MatrixXcd::Identity(4, 4) / 4.0) < 1e-14);
    }
    SUBCASE("singlet projector comes back")
    {
        const auto s = singlet().density();
        CHECK(max_abs_diff(state_from_tensor(correlation_tensor(s)).state.matrix(), s.matrix()) < 1e-12);
    }
    SUBCASE("random states round-trip for one to four qubits")
    {
        std::mt19937_64 rng(101);
        for (int n = 1; n <= 4; ++n)
            for (int rep = 0; rep < 10; ++rep) {
                const auto rho = random_density(std::vector<int>(n, 2), rng);
                const auto back = state_from_tensor(correlation_tensor(rho));
                CHECK(max_abs_diff(back.state.matrix(), rho.matrix()) < 1e-10);
            }
    }
    SUBCASE("unphysical tensor is flagged")
    {
        CorrelationTensor t(2);
        t({0, 0}) = 1.0;
        t({1, 1}) = t({2, 2}) = t({3, 3}) = 1.0; // would need eigenvalue -1/2
        CHECK_FALSE(state_from_tensor(t).positive);
    }
}

TEST_CASE("partial trace")
{
    SUBCASE("spin-l singlet reduces to the maximally mixed state")
    {
        for (double l : {0.5, 1.0, 1.5, 2.0}) {
            const int d = static_cast<int>(2 * l + 1);
            const auto red = partial_trace(spin_singlet(l).density(), {0});
            CHECK(max_abs_diff(red.matrix(), Eigen::MatrixXcd::Identity(d, d) / double(d)) < 1e-12);
            CHECK(von_neumann_entropy(red) == doctest::Approx(std::log2(d)).epsilon(1e-12));
        }
    }
    SUBCASE("product state keeps its factor")
    {
        std::mt19937_64 rng(7);
        const auto a = random_density({2}, rng);
        const auto b = random_density({3}, rng);
        Eigen::MatrixXcd ab = Eigen::kroneckerProduct(a.matrix(), b.matrix());
        const DensityOperator prod(ab, {2, 3});
        CHECK(max_abs_diff(partial_trace(prod, {0}).matrix(), a.matrix()) < 1e-12);
        CHECK(max_abs_diff(partial_trace(prod, {1}).matrix(), b.matrix()) < 1e-12);
    }
    SUBCASE("GHZ3 pair marginal is the classical mixture")
    {
        Eigen::MatrixXcd expected = Eigen::MatrixXcd::Zero(4, 4);
        expected(0, 0) = expected(3, 3) = 0.5;
        CHECK(max_abs_diff(partial_trace(ghz_state(3).density(), {0, 1}).matrix(), expected) < 1e-12);
    }
    SUBCASE("bad keep sets throw")
    {
        const auto g = ghz_state(3).density();
        CHECK_THROWS_AS(partial_trace(g, {}), DomainError);
        CHECK_THROWS_AS(partial_trace(g, {0, 0}), DomainError);
        CHECK_THROWS_AS(partial_trace(g, {3}), DomainError);
    }
}

TEST_CASE("partial transposition")
{
    CHECK(partial_transpose_min_eig(singlet().density(), 1) == doctest::Approx(-0.5).epsilon(1e-12));
    CHECK(partial_transpose_min_eig(singlet().density(), 0) == doctest::Approx(-0.5).epsilon(1e-12));
    std::mt19937_64 rng(3);
    for (int rep = 0; rep < 50; ++rep) {
        const auto prod = random_separable({2, 2}, 1, rng);
        CHECK(partial_transpose_min_eig(prod, 1) >= -1e-10);
        const auto sep = random_separable({2, 3}, 6, rng);
        CHECK(partial_transpose_min_eig(sep, 0) >= -1e-10);
    }
}

TEST_CASE("concurrence")
{
    CHECK(concurrence(singlet().density()) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(concurrence(product_state({Eigen::Vector3d(0, 0, 1), Eigen::Vector3d(1, 0, 0)})) < 1e-12);
    std::mt19937_64 rng(11);
    for (int rep = 0; rep < 50; ++rep) {
        const auto psi = random_pure_state({2, 2}, rng);
        const auto sf = schmidt_decompose(psi);
        CHECK(std::abs(concurrence(psi.density()) - 2 * std::cos(sf.alpha) * std::sin(sf.alpha)) < 1e-9);
    }
    CHECK_THROWS_AS(concurrence(ghz_state(3).density()), DimensionError);
}

TEST_CASE("Schmidt decomposition")
{
    Eigen::VectorXcd zero = Eigen::VectorXcd::Zero(4);
    zero(0) = 1;
    CHECK(schmidt_decompose(PureState(zero, {2, 2})).alpha == doctest::Approx(0.0));
    CHECK(schmidt_decompose(singlet()).alpha == doctest::Approx(kPi / 4).epsilon(1e-12));
    const auto g = generalized_ghz(2, 0.3);
    CHECK(schmidt_decompose(g).alpha == doctest::Approx(0.3).epsilon(1e-12));
    CHECK(tensor_of(g)({1, 1}) == doctest::Approx(std::sin(0.6)).epsilon(1e-12));
    SUBCASE("the local bases rebuild the state")
    {
        std::mt19937_64 rng(5);
        for (int rep = 0; rep < 20; ++rep) {
            const auto psi = random_pure_state({2, 2}, rng);
            const auto sf = schmidt_decompose(psi);
            CHECK(sf.alpha >= -1e-15);
            CHECK(sf.alpha <= kPi / 4 + 1e-12);
            Eigen::VectorXcd rebuilt = std::cos(sf.alpha) * Eigen::kroneckerProduct(sf.basis_a.col(0), sf.basis_b.col(0)) +
                                       std::sin(sf.alpha) * Eigen::kroneckerProduct(sf.basis_a.col(1), sf.basis_b.col(1));
            rebuilt *= sf.global_phase;
            CHECK((rebuilt - psi.amplitudes()).norm() < 1e-10);
        }
    }
}

TEST_CASE("Jamiolkowski correspondence")
{
    using M = Eigen::MatrixXcd;
    const auto transpose = [](const M& x) -> M { return x.transpose(); };
    const auto identity = [](const M& x) -> M { return x; };

    const auto wt = jamiolkowski_operator<double>(transpose, 2, 2);
    Eigen::SelfAdjointEigenSolver<M> es(wt.W / 2.0);
    CHECK(es.eigenvalues().minCoeff() == doctest::Approx(-0.5).epsilon(1e-12));

    const auto wi = jamiolkowski_operator<double>(identity, 2, 2);
    const M proj = wi.W / 2.0;
    CHECK(max_abs_diff(proj * proj, proj) < 1e-12);
    CHECK(proj.trace().real() == doctest::Approx(1.0));

    std::mt19937_64 rng(17);
    SUBCASE("identity map applies as the identity")
    {
        const auto rho = random_density({2}, rng);
        CHECK(max_abs_diff(jamiolkowski_apply(wi, rho).matrix(), rho.matrix()) < 1e-12);
    }
    SUBCASE("random Kraus maps have positive operators")
    {
        for (int rep = 0; rep < 20; ++rep) {
            // two Kraus operators cut from a random isometry
            const M u = random_unitary(4, rng);
            const M k1 = u.block(0, 0, 2, 2), k2 = u.block(2, 0, 2, 2);
            const auto channel = [&](const M& x) -> M { return k1 * x * k1.adjoint() + k2 * x * k2.adjoint(); };
            const auto w = jamiolkowski_operator<double>(channel, 2, 2);
            Eigen::SelfAdjointEigenSolver<M> ew(w.W);
            CHECK(ew.eigenvalues().minCoeff() >= -1e-10);
            const auto rho = random_density({2}, rng);
            CHECK(max_abs_diff(jamiolkowski_apply(w, rho).matrix(), channel(rho.matrix())) < 1e-12);
        }
    }
}

TEST_CASE("entropy")
{
    CHECK(std::abs(von_neumann_entropy(singlet().density())) < 1e-12);
    Eigen::MatrixXcd half = Eigen::MatrixXcd::Zero(2, 2);
    half(0, 0) = half(1, 1) = 0.5;
    CHECK(von_neumann_entropy(DensityOperator(half)) == doctest::Approx(1.0));
}

TEST_CASE("density operator invariants are enforced")
{
    Eigen::MatrixXcd m = Eigen::MatrixXcd::Identity(2, 2);
    CHECK_THROWS_AS(DensityOperator{m}, DomainError); // trace 2
    m(0, 1) = 0.3;
    m /= 2.0;
    CHECK_THROWS_AS(DensityOperator{m}, DomainError); // not Hermitian
    Eigen::MatrixXcd neg = Eigen::MatrixXcd::Zero(2, 2);
    neg(0, 0) = 1.5;
    neg(1, 1) = -0.5;
    CHECK_THROWS_AS(DensityOperator{neg}, DomainError);
    CHECK_THROWS_AS(DensityOperator(Eigen::MatrixXcd::Identity(4, 4) / 4.0, {2, 3}), DimensionError);
    Eigen::VectorXcd v = Eigen::VectorXcd::Ones(2);
    CHECK_THROWS_AS(PureState(v, {2}), DomainError);
}

TEST_CASE("extended precision instantiation agrees")
{
    using LD = long double;
    CMatrix<LD> s = singlet().density().matrix().cast<std::complex<LD>>();
    const BasicDensityOperator<LD> rho(s, {2, 2});
    const auto t = correlation_tensor(rho);
    CHECK(std::abs(static_cast<double>(t({3, 3})) + 1.0) < 1e-15);
    CHECK(std::abs(static_cast<double>(concurrence(rho)) - 1.0) < 1e-12);
}

TEST_CASE("spin operators obey the commutation relation and Casimir")
{
    for (double l : {0.5, 1.0, 1.5}) {
        const auto s = spin_operators(l);
        const int d = static_cast<int>(2 * l + 1);
        const std::complex<double> i(0, 1);
        CHECK(max_abs_diff(s[0] * s[1] - s[1] * s[0], i * s[2]) < 1e-12);
        const Eigen::MatrixXcd cas = s[0] * s[0] + s[1] * s[1] + s[2] * s[2];
        CHECK(max_abs_diff(cas, l * (l + 1) * Eigen::MatrixXcd::Identity(d, d)) < 1e-12);
    }
}
