#include "bellforge/photonics.hpp"

#include <algorithm>
#include <cmath>

#include "bellforge/numerics.hpp"
#include "bellforge/qstate.hpp"
#include "bellforge/types.hpp"

namespace bellforge {

namespace {

constexpr double kSqrt2 = 1.41421356237309504880;

double log_poisson(double mean, int n)
{
    if (mean == 0.0) return n == 0 ? 0.0 : -INFINITY;
    return n * std::log(mean) - mean - std::lgamma(n + 1.0);
}

/** The four oscillator-dressed sums that every exact probability is built from. */
struct FockSums {
    double plus_with = 0.0;     // "+" projection, photon present
    double plus_shifted = 0.0;  // "+" projection, photon absorbed from the pair
    double minus_with = 0.0;
    double minus_shifted = 0.0;
    int n_max = 0;
};

FockSums fock_sums(const BJSSParams& p)
{
    const double beta_sq = p.alpha_sq * p.eta;
    FockSums s;
    s.n_max = std::max(p.n_max, poisson_cutoff(beta_sq));
    for (int n = 1; n <= s.n_max + 1; ++n) {
        const double r = n / p.alpha_sq;
        const double w = std::exp(log_poisson(beta_sq, n));
        const double w1 = std::exp(log_poisson(beta_sq, n - 1));
        s.plus_with += r / (1.0 + r) * w;
        s.plus_shifted += w1 / (1.0 + r);
        s.minus_with += w / (1.0 + r);
        s.minus_shifted += r / (1.0 + r) * w1;
    }
    return s;
}

void check_probability(double x)
{
    if (!(x >= -1e-12 && x <= 1.0 + 1e-12)) throw NumericalError("probability outside [0, 1]");
}

std::array<std::array<double, 4>, 2> angle_seeds()
{
    return {{{0.0, M_PI / 2, M_PI / 4, -M_PI / 4}, {0.0, M_PI / 2, 5 * M_PI / 4, 3 * M_PI / 4}}};
}

AngleOptimum maximise_angles(const std::function<double(const std::array<double, 4>&)>& f)
{
    AngleOptimum best{-INFINITY, {}};
    NelderMeadOptions o;
    o.f_tolerance = 1e-15;
    o.x_tolerance = 1e-12;
    auto as_array = [](const Eigen::VectorXd& x) { return std::array<double, 4>{x(0), x(1), x(2), x(3)}; };
    auto seeds = angle_seeds();
    for (int mirror = 0; mirror < 2; ++mirror)
        for (auto seed : seeds) {
            if (mirror) std::swap(seed[2], seed[3]);
            Eigen::VectorXd x0(4);
            x0 << seed[0], seed[1], seed[2], seed[3];
            const auto r = nelder_mead_minimize([&](const Eigen::VectorXd& x) { return -f(as_array(x)); }, x0, o);
            if (-r.value > best.value) best = {-r.value, as_array(r.x)};
        }
    return best;
}

} // namespace

// ---- two-mode interference ----

double twc_visibility(double alpha, std::optional<double> beta)
{
    if (!(alpha > 0)) throw DomainError("twc_visibility: alpha must be positive");
    if (!beta) return 1.0 / (1.0 + alpha * alpha);
    if (!(*beta > 0)) throw DomainError("twc_visibility: beta must be positive");
    const double r = (alpha / *beta) * (alpha / *beta);
    return r / (r * r + r + 0.25);
}

double twc_correlation(double alpha, double theta1, double theta2)
{
    return std::sin(theta1 - theta2) / (1.0 + alpha * alpha);
}

double twc_chsh_margin(double alpha)
{
    auto chsh = [alpha](const std::array<double, 4>& a) {
        return std::abs(twc_correlation(alpha, a[0], a[2]) + twc_correlation(alpha, a[0], a[3]) +
                        twc_correlation(alpha, a[1], a[2]) - twc_correlation(alpha, a[1], a[3]));
    };
    return maximise_angles(chsh).value - 2.0;
}

double twc_chsh_threshold()
{
    return bisect_root(twc_chsh_margin, 0.1, 1.0, 1e-13);
}

// ---- homodyne scheme ----

void BJSSParams::validate() const
{
    if (!(alpha_sq >= 0)) throw DomainError("alpha_sq must be non-negative");
    if (!(eta >= 0 && eta <= 1)) throw DomainError("eta must lie in [0, 1]");
    if (!(l >= 0 && l <= 1)) throw DomainError("l must lie in [0, 1]");
    if (n_max < 0) throw DomainError("n_max must be non-negative");
}

int poisson_cutoff(double mean, int cap)
{
    if (mean <= 0) return 1;
    long double mass = 0.0L;
    for (int n = 0; n <= cap; ++n) {
        mass += std::exp(static_cast<long double>(log_poisson(mean, n)));
        if (n > mean && 1.0L - mass < 1e-12L) return std::max(n, 1);
    }
    throw NumericalError("Poisson tail above 1e-12 at the Fock cap");
}

BJSSProbabilities bjss_probs(const BJSSParams& p, double phi_c, double phi_d,
                             ProbabilityMethod method)
{
    p.validate();
    const double c = std::cos(phi_c - phi_d);
    const double e = p.eta;
    BJSSProbabilities out;
    if (method == ProbabilityMethod::approx) {
        const double k2 = (e / (1 + e)) * (e / (1 + e));
        out.p_plus_c = out.p_plus_d = e * (3 - e) / (2 * (1 + e));
        out.p_pp = k2 * (2 - e - p.l * c);
        out.p_pm = out.p_mp = e * (3 - 2 * e + e * e + 2 * p.l * e * c) / (2 * (1 + e) * (1 + e));
        out.p_mm = k2 * (1 - p.l * c);
        return out;
    }
    if (!(p.alpha_sq > 0)) throw DomainError("exact probabilities need alpha_sq > 0");
    const FockSums s = fock_sums(p);
    // interference term of the single photon shared between the two arms
    const double cross = p.l * e * c * e * s.plus_shifted * s.plus_shifted;
    out.n_max_used = s.n_max;
    out.p_plus_c = out.p_plus_d = (1 - e / 2) * s.plus_with + e / 2 * s.plus_shifted;
    out.p_pp = (1 - e) * s.plus_with * s.plus_with + e * s.plus_with * s.plus_shifted - cross;
    out.p_pm = out.p_mp = (1 - e) * s.plus_with * s.minus_with +
                          e / 2 * (s.plus_shifted * s.minus_with + s.plus_with * s.minus_shifted) +
                          cross;
    out.p_mm = (1 - e) * s.minus_with * s.minus_with + e * s.minus_with * s.minus_shifted - cross;
    for (double x : {out.p_plus_c, out.p_pp, out.p_pm, out.p_mm}) check_probability(x);
    return out;
}

double bjss_ch_value(const BJSSParams& p, ChVariant variant, const std::array<double, 4>& a,
                     ProbabilityMethod method)
{
    const auto cd = bjss_probs(p, a[0], a[2], method);
    const auto cpd = bjss_probs(p, a[1], a[2], method);
    const auto cdp = bjss_probs(p, a[0], a[3], method);
    const auto cpdp = bjss_probs(p, a[1], a[3], method);
    if (variant == ChVariant::plus_only)
        return cd.p_pp + cpd.p_pp + cdp.p_pp - cpdp.p_pp - cd.p_plus_c - cd.p_plus_d;
    return cd.p_pp + cdp.p_pm + cpd.p_mp - cpdp.p_mm - cd.p_plus_c - cd.p_plus_d;
}

double bjss_correlation(const BJSSParams& p, double phi_c, double phi_d, ProbabilityMethod method)
{
    const auto q = bjss_probs(p, phi_c, phi_d, method);
    return q.p_pp + q.p_mm - q.p_pm - q.p_mp;
}

double bjss_chsh_margin(const BJSSParams& p, const std::array<double, 4>& a, ProbabilityMethod method)
{
    const double s = bjss_correlation(p, a[0], a[2], method) + bjss_correlation(p, a[0], a[3], method) +
                     bjss_correlation(p, a[1], a[2], method) - bjss_correlation(p, a[1], a[3], method);
    return std::abs(s) - 2.0;
}

AngleOptimum bjss_ch_max(const BJSSParams& p, ChVariant variant, ProbabilityMethod method)
{
    return maximise_angles([&](const std::array<double, 4>& a) { return bjss_ch_value(p, variant, a, method); });
}

AngleOptimum bjss_chsh_max(const BJSSParams& p, ProbabilityMethod method)
{
    return maximise_angles([&](const std::array<double, 4>& a) { return bjss_chsh_margin(p, a, method); });
}

CriticalCurves bjss_critical_curves(double eta)
{
    if (!(eta > 0 && eta <= 1)) throw DomainError("bjss_critical_curves: eta must lie in (0, 1]");
    CriticalCurves c;
    c.l_ch_pp = (3 - 2 * eta + eta * eta) / (2 * kSqrt2 * eta);
    c.l_chsh = -(2 * eta * eta * eta - 6 * eta * eta + eta - 1) / (4 * kSqrt2 * eta * eta);
    c.l_ch_pm = (3 - eta) / (2 * kSqrt2);
    return c;
}

CriticalCurves bjss_critical_roots(double tol)
{
    CriticalCurves r;
    r.l_ch_pp = bisect_root([](double e) { return bjss_critical_curves(e).l_ch_pp - 1; }, 1e-6, 1, tol);
    r.l_chsh = bisect_root([](double e) { return bjss_critical_curves(e).l_chsh - 1; }, 1e-6, 1, tol);
    r.l_ch_pm = bisect_root([](double e) { return bjss_critical_curves(e).l_ch_pm - 1; }, 1e-6, 1, tol);
    return r;
}

CompensatedResult bjss_compensated(const BJSSParams& p, double phase_difference)
{
    p.validate();
    if (!(p.eta > 0)) throw DomainError("bjss_compensated: eta must be positive");
    // every oscillator-dressed sum equals one half once the intensity is raised by 1/eta
    auto p_pp = [&](double l, double dphi) { return 0.25 * (1 - l * p.eta * std::cos(dphi)); };
    CompensatedResult r;
    r.p_plus = 0.5;
    r.p_pp = p_pp(p.l, phase_difference);
    // CH with the angle choice that makes the cosine combination equal 2 sqrt2
    auto ch = [&](double l) {
        return p_pp(l, 3 * M_PI / 4) + p_pp(l, 3 * M_PI / 4) + p_pp(l, 3 * M_PI / 4) -
               p_pp(l, M_PI / 4) - 2 * r.p_plus;
    };
    r.l_critical = bisect_root(ch, 0.0, 2.0 / p.eta, 1e-14);
    r.critical_product = r.l_critical * p.eta;
    r.attainable = r.l_critical <= 1.0;
    return r;
}

double bjss_ppt_min_eig_formula(double eta, double l)
{
    return 0.5 * (1 - eta - std::sqrt((1 - eta) * (1 - eta) + l * l * eta * eta));
}

double bjss_ppt_min_eig_numeric(double eta, double l)
{
    Eigen::Matrix4cd m = Eigen::Matrix4cd::Zero();
    m(0, 0) = 1 - eta;
    m(1, 1) = m(2, 2) = eta / 2;
    m(1, 2) = m(2, 1) = -eta * l / 2;
    return partial_transpose_min_eig(DensityOperator(m, {2, 2}), 1);
}

// ---- detection loophole ----

GargMermin garg_mermin(const DetectionModel& m)
{
    if (!(m.eta >= 0 && m.eta <= 1) || !(m.p_dark >= 0 && m.p_dark < 1) ||
        !(m.visibility >= 0 && m.visibility <= 1))
        throw DomainError("garg_mermin: parameter out of range");
    GargMermin g;
    g.eta_crit = 2.0 / (kSqrt2 * m.visibility + 1.0);
    if (m.eta > 0) {
        const double e = m.eta;
        g.v_crit = (1 - m.p_dark) * (2 - e) * (m.p_dark * (2 - e) + e) / (kSqrt2 * e * e);
    } else {
        g.v_crit = INFINITY;
    }
    return g;
}

// ---- single photon against a weak coherent beam ----

HessmoResult hessmo_probs(double alpha, double r, double t, double phase_difference, double eta)
{
    if (std::abs(r * r + t * t - 1.0) > 1e-12) throw DomainError("hessmo_probs: r^2 + t^2 must be 1");
    if (!(eta >= 0 && eta <= 1)) throw DomainError("hessmo_probs: eta must lie in [0, 1]");
    const double a2 = alpha * alpha, r2 = r * r, t2 = t * t;
    auto p_cd = [&](double dphi) {
        return std::exp(-2 * a2 * r2) * (r2 + r2 * t2 * (1 + std::cos(dphi)));
    };
    const double background = (1 - eta) * std::pow(1 - std::exp(-a2 * r2), 2);
    auto total = [&](double dphi) { return eta * p_cd(dphi) + background; };
    HessmoResult h;
    h.p_c = 0.5 * std::exp(-a2 * r2) * (1 + r2 + a2 * r2 * t2);
    h.p_cd = p_cd(phase_difference);
    h.p_coinc_total = total(phase_difference);
    double hi = -INFINITY, lo = INFINITY;
    constexpr int kScan = 3600;
    for (int i = 0; i <= kScan; ++i) {
        const double v = total(2 * M_PI * i / kScan);
        hi = std::max(hi, v);
        lo = std::min(lo, v);
    }
    h.visibility = hi + lo > 0 ? (hi - lo) / (hi + lo) : 0.0;
    h.nonclassical = h.visibility > 0.5;
    return h;
}

} // namespace bellforge
