#include <algorithm>
#include <cmath>
#include <random>

#include "bellforge/bell.hpp"
#include "bellforge/numerics.hpp"

namespace bellforge {

namespace {

/** Spatial (1..3)^N block as a flat array, party 0 most significant. */
std::vector<double> spatial(const CorrelationTensor& t)
{
    const int n = t.n_parties();
    std::size_t size = 1;
    for (int k = 0; k < n; ++k) size *= 3;
    std::vector<double> out(size);
    std::vector<int> idx(n);
    for (std::size_t f = 0; f < size; ++f) {
        std::size_t q = f;
        for (int k = n - 1; k >= 0; --k) {
            idx[k] = static_cast<int>(q % 3) + 1;
            q /= 3;
        }
        out[f] = t(idx);
    }
    return out;
}

/** Applies m (p x 3) along `axis` of a tensor whose axes all have length dims[k]. */
std::vector<double> contract(const std::vector<double>& data, std::vector<int>& dims, int axis,
                             const Eigen::MatrixXd& m)
{
    std::size_t outer = 1, inner = 1;
    for (int k = 0; k < axis; ++k) outer *= dims[k];
    for (std::size_t k = axis + 1; k < dims.size(); ++k) inner *= dims[k];
    const int q = dims[axis];
    const int p = static_cast<int>(m.rows());
    std::vector<double> out(outer * p * inner, 0.0);
    for (std::size_t o = 0; o < outer; ++o)
        for (int a2 = 0; a2 < p; ++a2)
            for (int a = 0; a < q; ++a) {
                const double w = m(a2, a);
                if (w == 0.0) continue;
                for (std::size_t i = 0; i < inner; ++i)
                    out[(o * p + a2) * inner + i] += w * data[(o * q + a) * inner + i];
            }
    dims[axis] = p;
    return out;
}

double sum_squares(const std::vector<double>& v)
{
    double s = 0.0;
    for (double x : v) s += x * x;
    return s;
}

Eigen::Vector3d normal_from_angles(double theta, double phi)
{
    return {std::sin(theta) * std::cos(phi), std::sin(theta) * std::sin(phi), std::cos(theta)};
}

/** Sum of the two largest squared singular values. */
double ky_fan2(const Eigen::Matrix3d& m)
{
    const Eigen::Vector3d sv = Eigen::JacobiSVD<Eigen::Matrix3d>(m).singularValues();
    return sv(0) * sv(0) + sv(1) * sv(1);
}

double top_sq(const Eigen::Matrix3d& m)
{
    const double s = Eigen::JacobiSVD<Eigen::Matrix3d>(m).singularValues()(0);
    return s * s;
}

/** Maximise f over R^dim with Nelder-Mead from the given starts; returns the best value. */
double maximise(const std::function<double(const Eigen::VectorXd&)>& f,
                const std::vector<Eigen::VectorXd>& starts)
{
    double best = -1e300;
    NelderMeadOptions o;
    o.max_evaluations = 3000;
    o.initial_step = 0.4;
    for (const auto& x0 : starts) {
        const auto r = nelder_mead_minimize([&](const Eigen::VectorXd& x) { return -f(x); }, x0, o);
        best = std::max(best, -r.value);
    }
    return best;
}

std::vector<Eigen::VectorXd> random_starts(int dim, int count, std::mt19937_64& rng,
                                           double scale = M_PI)
{
    std::uniform_real_distribution<double> u(0.0, scale);
    std::vector<Eigen::VectorXd> out;
    out.push_back(Eigen::VectorXd::Zero(dim));
    for (int i = 0; i < count; ++i) {
        Eigen::VectorXd x(dim);
        for (int j = 0; j < dim; ++j) x(j) = u(rng);
        out.push_back(x);
    }
    return out;
}

Eigen::Matrix3d slice_last(const std::vector<double>& s3, const Eigen::Vector3d& c)
{
    // s3 is a 3x3x3 spatial block; contract the last index with c
    Eigen::Matrix3d m = Eigen::Matrix3d::Zero();
    for (int a = 0; a < 3; ++a)
        for (int b = 0; b < 3; ++b)
            for (int k = 0; k < 3; ++k) m(a, b) += s3[(a * 3 + b) * 3 + k] * c(k);
    return m;
}

Eigen::Matrix3d slice_first(const std::vector<double>& s3, const Eigen::Vector3d& a)
{
    Eigen::Matrix3d m = Eigen::Matrix3d::Zero();
    for (int i = 0; i < 3; ++i)
        for (int b = 0; b < 3; ++b)
            for (int c = 0; c < 3; ++c) m(b, c) += a(i) * s3[(i * 3 + b) * 3 + c];
    return m;
}

Eigen::Matrix3d frame(const Eigen::VectorXd& x, int offset)
{
    return euler_rotation(x(offset), x(offset + 1), x(offset + 2));
}

} // namespace

Eigen::Matrix3d euler_rotation(double a, double b, double c)
{
    return (Eigen::AngleAxisd(a, Eigen::Vector3d::UnitZ()) *
            Eigen::AngleAxisd(b, Eigen::Vector3d::UnitY()) *
            Eigen::AngleAxisd(c, Eigen::Vector3d::UnitZ()))
        .toRotationMatrix();
}

CorrelationTensor rotate_party(const CorrelationTensor& t, int party, const Eigen::Matrix3d& r)
{
    if (party < 0 || party >= t.n_parties()) throw DomainError("rotate_party: bad party");
    CorrelationTensor out(t.n_parties());
    for (std::size_t f = 0; f < t.size(); ++f) {
        auto idx = t.unflat(f);
        if (idx[party] == 0) {
            out[f] += t[f];
            continue;
        }
        const int b = idx[party] - 1;
        for (int a = 0; a < 3; ++a) {
            idx[party] = a + 1;
            out(idx) += r(a, b) * t[f];
        }
    }
    return out;
}

double plane_square_sum(const CorrelationTensor& t, const std::vector<std::array<int, 2>>& axes)
{
    const int n = t.n_parties();
    if (static_cast<int>(axes.size()) != n) throw DimensionError("one axis pair per party");
    double s = 0.0;
    std::vector<int> idx(n);
    for (int bits = 0; bits < (1 << n); ++bits) {
        for (int k = 0; k < n; ++k) idx[k] = axes[k][(bits >> (n - 1 - k)) & 1];
        const double v = t(idx);
        s += v * v;
    }
    return s;
}

double condition_wwwzb(const CorrelationTensor& t, ConditionMode mode, std::uint64_t seed)
{
    const int n = t.n_parties();
    if (mode == ConditionMode::fixed_frame)
        return plane_square_sum(t, std::vector<std::array<int, 2>>(n, {1, 2}));

    const std::vector<double> s = spatial(t);
    auto value_for = [&](const std::vector<Eigen::Vector3d>& normals) {
        std::vector<double> x = s;
        std::vector<int> dims(n, 3);
        for (int k = 0; k < n; ++k) {
            const Eigen::Matrix3d p = Eigen::Matrix3d::Identity() - normals[k] * normals[k].transpose();
            x = contract(x, dims, k, p);
        }
        return sum_squares(x);
    };
    // exhaustive axis-aligned planes
    double best = 0.0;
    std::size_t combos = 1;
    for (int k = 0; k < n; ++k) combos *= 3;
    for (std::size_t c = 0; c < combos; ++c) {
        std::vector<Eigen::Vector3d> normals(n);
        std::size_t q = c;
        for (int k = n - 1; k >= 0; --k) {
            normals[k] = Eigen::Vector3d::Unit(static_cast<int>(q % 3));
            q /= 3;
        }
        best = std::max(best, value_for(normals));
    }
    auto objective = [&](const Eigen::VectorXd& x) {
        std::vector<Eigen::Vector3d> normals(n);
        for (int k = 0; k < n; ++k) normals[k] = normal_from_angles(x(2 * k), x(2 * k + 1));
        return value_for(normals);
    };
    std::mt19937_64 rng(seed);
    std::vector<Eigen::VectorXd> starts;
    // the three coordinate axes shared by all parties
    const double axis_angles[3][2] = {{M_PI / 2, 0.0}, {M_PI / 2, M_PI / 2}, {0.0, 0.0}};
    for (const auto& aa : axis_angles) {
        Eigen::VectorXd x(2 * n);
        for (int k = 0; k < n; ++k) {
            x(2 * k) = aa[0];
            x(2 * k + 1) = aa[1];
        }
        starts.push_back(x);
    }
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    for (int r = 0; r < 50; ++r) {
        Eigen::VectorXd x(2 * n);
        for (int k = 0; k < n; ++k) {
            const double z = u(rng);
            x(2 * k) = std::acos(z);
            x(2 * k + 1) = M_PI * u(rng);
        }
        starts.push_back(x);
    }
    return std::max(best, maximise(objective, starts));
}

double condition_wzlpzb(const CorrelationTensor& t, int arity, std::uint64_t seed)
{
    if (arity != 3 && arity != 4) throw DomainError("condition_wzlpzb: arity must be 3 or 4");
    if (t.n_parties() != arity) throw DimensionError("condition_wzlpzb: party count mismatch");
    const std::vector<double> s = spatial(t);
    std::mt19937_64 rng(seed);

    if (arity == 3) {
        auto objective = [&](const Eigen::VectorXd& x) {
            const Eigen::Matrix3d r = frame(x, 0);
            return ky_fan2(slice_last(s, r.col(0))) + ky_fan2(slice_last(s, r.col(1)));
        };
        auto starts = random_starts(3, 30, rng, 2 * M_PI);
        // frames with the third axis along x, y or z
        for (const auto& e : {Eigen::Vector3d(0, 0, 0), Eigen::Vector3d(0, M_PI / 2, 0),
                              Eigen::Vector3d(M_PI / 2, M_PI / 2, 0)})
            starts.push_back(e);
        return maximise(objective, starts);
    }

    // fourth party: one frame (d1, d2); third party: a frame per fourth-party direction
    auto objective = [&](const Eigen::VectorXd& x) {
        const Eigen::Matrix3d rd = frame(x, 0);
        double total = 0.0;
        for (int dd = 0; dd < 2; ++dd) {
            std::vector<double> s3(27, 0.0);
            for (std::size_t f = 0; f < 81; ++f)
                s3[f / 3] += s[f] * rd(static_cast<int>(f % 3), dd);
            const Eigen::Matrix3d rc = frame(x, 3 + 3 * dd);
            total += ky_fan2(slice_last(s3, rc.col(0))) + ky_fan2(slice_last(s3, rc.col(1)));
        }
        return total;
    };
    return maximise(objective, random_starts(9, 40, rng, 2 * M_PI));
}

ThreeSettingReport condition_three_setting(const CorrelationTensor& t, ThreeSettingCondition which,
                                           std::uint64_t seed)
{
    if (t.n_parties() != 3) throw DimensionError("condition_three_setting needs 3 qubits");
    ThreeSettingReport rep;
    std::mt19937_64 rng(seed);
    auto sq = [](double v) { return v * v; };

    if (which == ThreeSettingCondition::ineq1) {
        auto common = [&](const CorrelationTensor& u) {
            double v = sq(u({2, 1, 1}));
            for (int i = 1; i <= 3; ++i) v += sq(u({1, 1, i})) + sq(u({2, i, 2}));
            return v;
        };
        rep.raw_fixed = sq(t({1, 1, 1})) + sq(t({2, 1, 1})) + sq(t({2, 1, 2}));
        rep.common_fixed = common(t);
        auto objective = [&](const Eigen::VectorXd& x) {
            CorrelationTensor u = t;
            for (int k = 0; k < 3; ++k) u = rotate_party(u, k, frame(x, 3 * k));
            return common(u);
        };
        rep.optimized = std::max(rep.common_fixed, maximise(objective, random_starts(9, 30, rng, 2 * M_PI)));
        return rep;
    }

    // ineq2: T111^2 + sum_{ij in {1,2}} T'_{2ij}^2, Bob and Carol free per term
    rep.raw_fixed = sq(t({1, 1, 1}));
    for (int i = 1; i <= 2; ++i)
        for (int j = 1; j <= 2; ++j) rep.raw_fixed += sq(t({2, i, j}));
    const std::vector<double> s = spatial(t);
    auto per_frame = [&](const Eigen::Matrix3d& ra) {
        return top_sq(slice_first(s, ra.col(0))) + ky_fan2(slice_first(s, ra.col(1)));
    };
    rep.common_fixed = per_frame(Eigen::Matrix3d::Identity());
    auto objective = [&](const Eigen::VectorXd& x) { return per_frame(frame(x, 0)); };
    rep.optimized = std::max(rep.common_fixed, maximise(objective, random_starts(3, 30, rng, 2 * M_PI)));
    return rep;
}

RotInvReport rotinv_condition(const CorrelationTensor& t, RotInvMode mode, int restarts,
                              std::uint64_t seed)
{
    const int n = t.n_parties();
    RotInvReport rep;
    if (mode == RotInvMode::planar) {
        rep.sum_sq = plane_square_sum(t, std::vector<std::array<int, 2>>(n, {1, 2}));
    } else {
        rep.sum_sq = sum_squares(spatial(t));
    }
    const double prefactor = mode == RotInvMode::planar ? std::pow(M_PI / 4, n) : std::pow(2.0 / 3.0, n);
    rep.t_max = tensor_max(t, mode == RotInvMode::planar ? ObservableDomain::planar_xy
                                                         : ObservableDomain::full,
                           std::max(32, restarts), seed);
    rep.ratio = rep.t_max > 0 ? prefactor * rep.sum_sq / rep.t_max : 0.0;
    rep.violated = rep.ratio > 1.0;
    return rep;
}

namespace {

/** Largest multilinear value of a nonnegative 2^N tensor over unit 2-vectors. */
double nonneg_multilinear_max(const std::vector<double>& data, int n)
{
    std::vector<Eigen::Vector2d> v(n, Eigen::Vector2d(1, 1).normalized());
    auto grad = [&](int k) {
        Eigen::Vector2d g = Eigen::Vector2d::Zero();
        for (std::size_t f = 0; f < data.size(); ++f) {
            double w = data[f];
            int own = 0;
            for (int j = 0; j < n; ++j) {
                const int bit = static_cast<int>((f >> (n - 1 - j)) & 1U);
                if (j == k) own = bit;
                else w *= v[j](bit);
            }
            g(own) += w;
        }
        return g;
    };
    double value = 0.0;
    for (int sweep = 0; sweep < 2000; ++sweep) {
        for (int k = 0; k < n; ++k) {
            const Eigen::Vector2d g = grad(k);
            if (g.norm() > 0) v[k] = g.normalized();
        }
        const double next = grad(0).dot(v[0]);
        if (next - value < 1e-14) {
            value = std::max(value, next);
            break;
        }
        value = next;
    }
    return value;
}

} // namespace

double modified_tensor_max(const CorrelationTensor& t, int restarts, std::uint64_t seed)
{
    const int n = t.n_parties();
    auto objective = [&](const Eigen::VectorXd& theta) {
        CorrelationTensor u = t;
        for (int k = 0; k < n; ++k)
            u = rotate_party(u, k, Eigen::AngleAxisd(theta(k), Eigen::Vector3d::UnitY()).toRotationMatrix());
        std::vector<double> xz(std::size_t(1) << n);
        std::vector<int> idx(n);
        for (std::size_t f = 0; f < xz.size(); ++f) {
            for (int k = 0; k < n; ++k) idx[k] = ((f >> (n - 1 - k)) & 1U) ? 3 : 1;
            xz[f] = std::abs(u(idx));
        }
        return nonneg_multilinear_max(xz, n);
    };
    std::mt19937_64 rng(seed);
    auto starts = random_starts(n, restarts, rng, M_PI);
    Eigen::VectorXd quarter = Eigen::VectorXd::Constant(n, M_PI / 4);
    starts.push_back(quarter);
    quarter(n - 1) = 0.0;
    starts.push_back(quarter);
    return maximise(objective, starts);
}

} // namespace bellforge
