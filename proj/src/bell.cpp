#include "bellforge/bell.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <map>
#include <numeric>
#include <random>

#include "bellforge/numerics.hpp"

namespace bellforge {

// ---- scenario & functional ----

Scenario::Scenario(int n, int settings_each) : n_parties(n), settings(n, settings_each)
{
    if (n < 1 || settings_each < 1) throw DomainError("scenario needs parties and settings");
}

Scenario::Scenario(std::vector<int> settings_per_party)
    : n_parties(static_cast<int>(settings_per_party.size())), settings(std::move(settings_per_party))
{
    if (settings.empty()) throw DomainError("scenario needs at least one party");
    for (int m : settings)
        if (m < 1) throw DomainError("every party needs at least one setting");
}

std::size_t Scenario::n_coeffs() const
{
    std::size_t n = 1;
    for (int m : settings) n *= static_cast<std::size_t>(m);
    return n;
}

int Scenario::total_settings() const { return std::accumulate(settings.begin(), settings.end(), 0); }

BellFunctional::BellFunctional(Scenario s, std::string label)
    : scenario(std::move(s)), coeffs(scenario.n_coeffs(), 0.0), name(std::move(label))
{
}

std::size_t BellFunctional::flat(const std::vector<int>& idx) const
{
    if (static_cast<int>(idx.size()) != scenario.n_parties)
        throw DimensionError("setting index has wrong arity");
    std::size_t f = 0;
    for (int k = 0; k < scenario.n_parties; ++k) {
        if (idx[k] < 0 || idx[k] >= scenario.settings[k]) throw DomainError("setting out of range");
        f = f * scenario.settings[k] + idx[k];
    }
    return f;
}

std::vector<int> BellFunctional::unflat(std::size_t i) const
{
    std::vector<int> idx(scenario.n_parties);
    for (int k = scenario.n_parties - 1; k >= 0; --k) {
        idx[k] = static_cast<int>(i % scenario.settings[k]);
        i /= scenario.settings[k];
    }
    return idx;
}

double evaluate_strategy(const BellFunctional& f, const DeterministicStrategy& s)
{
    double v = 0.0;
    for (std::size_t i = 0; i < f.coeffs.size(); ++i) {
        if (f.coeffs[i] == 0.0) continue;
        const auto idx = f.unflat(i);
        int sign = 1;
        for (int k = 0; k < f.scenario.n_parties; ++k) sign *= s.outcomes[k][idx[k]];
        v += f.coeffs[i] * sign;
    }
    return v;
}

// ---- brute-force bounds ----

namespace {

void check_enumerable(const Scenario& sc)
{
    if (sc.total_settings() > 24) throw DomainError("scenario too large for brute force");
}

/** Outcome vector (+-1 per setting) of party k encoded in the bits of `bits`. */
inline int outcome(std::uint64_t bits, int offset, int setting)
{
    return ((bits >> (offset + setting)) & 1U) ? -1 : 1;
}

} // namespace

double compute_lhv_bound(const BellFunctional& f)
{
    const Scenario& sc = f.scenario;
    check_enumerable(sc);
    const int n = sc.n_parties;
    const int last = sc.settings[n - 1];
    if (n == 1) {
        double s = 0;
        for (double c : f.coeffs) s += std::abs(c);
        return s;
    }
    std::vector<int> offsets(n, 0);
    for (int k = 1; k < n; ++k) offsets[k] = offsets[k - 1] + sc.settings[k - 1];
    const int head_bits = offsets[n - 1];
    const std::size_t head = f.coeffs.size() / last;

    // Global sign: the first outcome of party 0 can be fixed to +1.
    const std::uint64_t count = std::uint64_t(1) << (head_bits - 1);
    const std::size_t chunks = std::min<std::uint64_t>(count, 256);
    std::vector<double> chunk_best(chunks, 0.0);
    parallel_for(chunks, [&](std::size_t c) {
        std::vector<int> sign(head);
        std::vector<double> w(last);
        double local = 0.0;
        for (std::uint64_t r = c; r < count; r += chunks) {
            const std::uint64_t bits = r << 1;
            for (std::size_t p = 0; p < head; ++p) {
                std::size_t q = p;
                int s = 1;
                for (int k = n - 2; k >= 0; --k) {
                    const int m = sc.settings[k];
                    s *= outcome(bits, offsets[k], static_cast<int>(q % m));
                    q /= m;
                }
                sign[p] = s;
            }
            std::fill(w.begin(), w.end(), 0.0);
            for (std::size_t p = 0; p < head; ++p)
                for (int t = 0; t < last; ++t) w[t] += sign[p] * f.coeffs[p * last + t];
            double v = 0.0;
            for (double x : w) v += std::abs(x);
            local = std::max(local, v);
        }
        chunk_best[c] = local;
    });
    return *std::max_element(chunk_best.begin(), chunk_best.end());
}

double lhv_bound(BellFunctional& f)
{
    const double b = compute_lhv_bound(f);
    f.lhv_bound = b;
    return b;
}

namespace {

/** Outcome-product vector of a full strategy encoded in bits. */
void product_vector(const Scenario& sc, std::uint64_t bits, const std::vector<int>& offsets,
                    std::vector<int>& out)
{
    const std::size_t n_coeffs = out.size();
    for (std::size_t i = 0; i < n_coeffs; ++i) {
        std::size_t q = i;
        int s = 1;
        for (int k = sc.n_parties - 1; k >= 0; --k) {
            const int m = sc.settings[k];
            s *= outcome(bits, offsets[k], static_cast<int>(q % m));
            q /= m;
        }
        out[i] = s;
    }
}

std::vector<int> party_offsets(const Scenario& sc)
{
    std::vector<int> offsets(sc.n_parties, 0);
    for (int k = 1; k < sc.n_parties; ++k) offsets[k] = offsets[k - 1] + sc.settings[k - 1];
    return offsets;
}

DeterministicStrategy decode_strategy(const Scenario& sc, std::uint64_t bits)
{
    const auto offsets = party_offsets(sc);
    DeterministicStrategy s;
    for (int k = 0; k < sc.n_parties; ++k) {
        std::vector<int> o(sc.settings[k]);
        for (int j = 0; j < sc.settings[k]; ++j) o[j] = outcome(bits, offsets[k], j);
        s.outcomes.push_back(std::move(o));
    }
    return s;
}

} // namespace

double lhv_bound_vertices(const BellFunctional& f)
{
    const Scenario& sc = f.scenario;
    check_enumerable(sc);
    const auto offsets = party_offsets(sc);
    // vertices v and -v coincide for products; only half the strategies are distinct up to sign
    const std::uint64_t count = std::uint64_t(1) << (sc.total_settings() - 1);
    std::vector<int> v(f.coeffs.size());
    double best = 0.0;
    for (std::uint64_t r = 0; r < count; ++r) {
        product_vector(sc, r << 1, offsets, v);
        double dot = 0.0;
        for (std::size_t i = 0; i < v.size(); ++i) dot += f.coeffs[i] * v[i];
        best = std::max(best, std::abs(dot));
    }
    return best;
}

std::vector<DeterministicStrategy> saturating_strategies(const BellFunctional& f, double tol)
{
    const Scenario& sc = f.scenario;
    check_enumerable(sc);
    const double bound = compute_lhv_bound(f);
    const auto offsets = party_offsets(sc);
    const std::uint64_t count = std::uint64_t(1) << sc.total_settings();
    std::vector<int> v(f.coeffs.size());
    std::vector<DeterministicStrategy> out;
    for (std::uint64_t bits = 0; bits < count; ++bits) {
        product_vector(sc, bits, offsets, v);
        double dot = 0.0;
        for (std::size_t i = 0; i < v.size(); ++i) dot += f.coeffs[i] * v[i];
        if (std::abs(dot - bound) <= tol) out.push_back(decode_strategy(sc, bits));
    }
    return out;
}

int saturating_rank(const BellFunctional& f, double tol)
{
    const auto strategies = saturating_strategies(f, tol);
    if (strategies.empty()) return 0;
    const std::size_t n = f.coeffs.size();
    Eigen::MatrixXd m(static_cast<Eigen::Index>(strategies.size()), static_cast<Eigen::Index>(n));
    for (std::size_t r = 0; r < strategies.size(); ++r)
        for (std::size_t i = 0; i < n; ++i) {
            const auto idx = f.unflat(i);
            int s = 1;
            for (int k = 0; k < f.scenario.n_parties; ++k) s *= strategies[r].outcomes[k][idx[k]];
            m(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(i)) = s;
        }
    Eigen::FullPivLU<Eigen::MatrixXd> lu(m);
    lu.setThreshold(1e-9);
    return static_cast<int>(lu.rank());
}

// ---- see-saw ----

namespace {

/** new[o, a', i] = sum_a M(a', a) data[o, a, i] along `axis`. */
std::vector<double> mode_product(const std::vector<double>& data, std::vector<int>& dims, int axis,
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
                const double* src = &data[(o * q + a) * inner];
                double* dst = &out[(o * p + a2) * inner];
                for (std::size_t i = 0; i < inner; ++i) dst[i] += w * src[i];
            }
    dims[axis] = p;
    return out;
}

std::vector<double> spatial_block(const CorrelationTensor& t)
{
    const int n = t.n_parties();
    std::size_t size = 1;
    for (int k = 0; k < n; ++k) size *= 3;
    std::vector<double> r(size);
    std::vector<int> idx(n);
    for (std::size_t f = 0; f < size; ++f) {
        std::size_t q = f;
        for (int k = n - 1; k >= 0; --k) {
            idx[k] = static_cast<int>(q % 3) + 1;
            q /= 3;
        }
        r[f] = t(idx);
    }
    return r;
}

Eigen::Vector3d restrict_to(const Eigen::Vector3d& v, ObservableDomain d)
{
    Eigen::Vector3d out = v;
    if (d == ObservableDomain::planar_xy) out(2) = 0.0;
    return out;
}

struct SeeSawProblem {
    int n;
    std::vector<int> settings;
    std::vector<double> spatial; // 3^n
    std::vector<double> coeffs;  // prod settings
    ObservableDomain domain;
};

using Observables = std::vector<Eigen::MatrixXd>; // per party: settings x 3

/** G[s_k][i] for party k. */
Eigen::MatrixXd gradient(const SeeSawProblem& p, const Observables& a, int k)
{
    std::vector<int> dims(p.n, 3);
    std::vector<double> x = p.spatial;
    for (int j = 0; j < p.n; ++j)
        if (j != k) x = mode_product(x, dims, j, a[j]);
    // x has axis j of size settings[j] (j != k) and axis k of size 3
    Eigen::MatrixXd g = Eigen::MatrixXd::Zero(p.settings[k], 3);
    const std::size_t total = p.coeffs.size();
    std::size_t inner = 1;
    for (int j = k + 1; j < p.n; ++j) inner *= p.settings[j];
    for (std::size_t c = 0; c < total; ++c) {
        const double w = p.coeffs[c];
        if (w == 0.0) continue;
        const std::size_t outer_idx = c / (inner * p.settings[k]);
        const int sk = static_cast<int>((c / inner) % p.settings[k]);
        const std::size_t in = c % inner;
        for (int i = 0; i < 3; ++i) g(sk, i) += w * x[(outer_idx * 3 + i) * inner + in];
    }
    return g;
}

double seesaw_value(const SeeSawProblem& p, const Observables& a)
{
    const Eigen::MatrixXd g = gradient(p, a, 0);
    return (g.cwiseProduct(a[0])).sum();
}

double run_seesaw(const SeeSawProblem& p, Observables& a, double tol, int max_sweeps)
{
    double value = seesaw_value(p, a);
    for (int sweep = 0; sweep < max_sweeps; ++sweep) {
        for (int k = 0; k < p.n; ++k) {
            const Eigen::MatrixXd g = gradient(p, a, k);
            for (int s = 0; s < p.settings[k]; ++s) {
                const Eigen::Vector3d v = restrict_to(g.row(s).transpose(), p.domain);
                const double norm = v.norm();
                if (norm > 1e-300) a[k].row(s) = (v / norm).transpose();
            }
        }
        const double next = seesaw_value(p, a);
        const bool done = next - value < tol;
        value = std::max(value, next);
        if (done) break;
    }
    return value;
}

std::uint64_t splitmix(std::uint64_t x)
{
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

Eigen::Vector3d random_direction(std::mt19937_64& rng, ObservableDomain d)
{
    std::normal_distribution<double> g;
    Eigen::Vector3d v;
    do {
        v = restrict_to(Eigen::Vector3d(g(rng), g(rng), g(rng)), d);
    } while (v.norm() < 1e-8);
    return v.normalized();
}

} // namespace

QuantumValue quantum_value(const BellFunctional& f, const CorrelationTensor& t,
                           const SeeSawOptions& options)
{
    if (t.n_parties() != f.scenario.n_parties)
        throw DimensionError("tensor and functional disagree on the number of parties");
    SeeSawProblem p{f.scenario.n_parties, f.scenario.settings, spatial_block(t), f.coeffs,
                    options.domain};
    const int n_seeded = static_cast<int>(options.seeds.size());
    const int total = n_seeded + std::max(0, options.restarts);
    std::vector<double> values(total, -std::numeric_limits<double>::infinity());
    std::vector<Observables> found(total);

    parallel_for(static_cast<std::size_t>(total), [&](std::size_t r) {
        Observables a(p.n);
        std::mt19937_64 rng(splitmix(options.seed + r));
        for (int k = 0; k < p.n; ++k) {
            a[k].resize(p.settings[k], 3);
            for (int s = 0; s < p.settings[k]; ++s) {
                Eigen::Vector3d v;
                if (static_cast<int>(r) < n_seeded) v = options.seeds[r][k][s];
                else v = random_direction(rng, p.domain);
                a[k].row(s) = v.normalized().transpose();
            }
        }
        values[r] = run_seesaw(p, a, options.tolerance, options.max_sweeps);
        found[r] = std::move(a);
    });

    QuantumValue out;
    out.seed = options.seed;
    out.restart_values = values;
    out.value = -std::numeric_limits<double>::infinity();
    for (int r = 0; r < total; ++r)
        if (values[r] > out.value) {
            out.value = values[r];
            out.best_restart = r;
        }
    if (out.best_restart >= 0) {
        const auto& a = found[out.best_restart];
        for (int k = 0; k < p.n; ++k) {
            std::vector<Eigen::Vector3d> party;
            for (int s = 0; s < p.settings[k]; ++s) party.push_back(a[k].row(s).transpose());
            out.observables.push_back(std::move(party));
        }
    }
    return out;
}

QuantumValue quantum_value(const BellFunctional& f, const DensityOperator& rho, int restarts,
                           std::uint64_t seed)
{
    SeeSawOptions o;
    o.restarts = restarts;
    o.seed = seed;
    return quantum_value(f, correlation_tensor(rho), o);
}

double bell_value(const BellFunctional& f, const CorrelationTensor& t,
                  const std::vector<std::vector<Eigen::Vector3d>>& observables)
{
    SeeSawProblem p{f.scenario.n_parties, f.scenario.settings, spatial_block(t), f.coeffs,
                    ObservableDomain::full};
    Observables a(p.n);
    for (int k = 0; k < p.n; ++k) {
        a[k].resize(p.settings[k], 3);
        for (int s = 0; s < p.settings[k]; ++s) a[k].row(s) = observables[k][s].transpose();
    }
    return seesaw_value(p, a);
}

double tensor_max(const CorrelationTensor& t, ObservableDomain domain, int restarts,
                  std::uint64_t seed)
{
    BellFunctional single(Scenario(t.n_parties(), 1), "single");
    single.coeffs[0] = 1.0;
    SeeSawOptions o;
    o.restarts = restarts;
    o.seed = seed;
    o.domain = domain;
    // axis-aligned grid seeds: 2^N (planar) or 3^N (full) combinations
    const int axes = domain == ObservableDomain::planar_xy ? 2 : 3;
    std::size_t combos = 1;
    for (int k = 0; k < t.n_parties(); ++k) combos *= axes;
    for (std::size_t c = 0; c < combos && c < 4096; ++c) {
        std::vector<std::vector<Eigen::Vector3d>> seedset;
        std::size_t q = c;
        for (int k = 0; k < t.n_parties(); ++k) {
            Eigen::Vector3d v = Eigen::Vector3d::Zero();
            v(static_cast<int>(q % axes)) = 1.0;
            q /= axes;
            seedset.push_back({v});
        }
        o.seeds.push_back(std::move(seedset));
    }
    return std::abs(quantum_value(single, t, o).value);
}

// ---- catalog ----

BellFunctional chsh()
{
    BellFunctional f(Scenario(2, 2), "chsh");
    f.coeffs = {1, 1, 1, -1};
    f.stated_bound = 2;
    return f;
}

namespace {

void check_range(int n, int lo, int hi, const char* what)
{
    if (n < lo || n > hi) throw DomainError(std::string(what) + ": unsupported number of parties");
}

/** i^k for the number k of second settings among the given indices. */
std::complex<double> i_power(int k)
{
    static const std::complex<double> table[4] = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};
    return table[k % 4];
}

} // namespace

BellFunctional mermin(int n)
{
    check_range(n, 2, 6, "mermin");
    BellFunctional f(Scenario(n, 2), "mermin_" + std::to_string(n));
    for (std::size_t i = 0; i < f.coeffs.size(); ++i) {
        const auto idx = f.unflat(i);
        const int k = std::accumulate(idx.begin(), idx.end(), 0);
        f.coeffs[i] = i_power(k).real();
    }
    f.stated_bound = std::pow(2.0, n / 2);
    return f;
}

BellFunctional ardehali(int n)
{
    check_range(n, 2, 6, "ardehali");
    BellFunctional f(Scenario(n, 2), "ardehali_" + std::to_string(n));
    for (std::size_t i = 0; i < f.coeffs.size(); ++i) {
        const auto idx = f.unflat(i);
        const int k = std::accumulate(idx.begin(), idx.end() - 1, 0);
        const auto z = i_power(k);
        f.coeffs[i] = z.real() + (idx.back() == 0 ? 1.0 : -1.0) * z.imag();
    }
    f.stated_bound = (n % 2 == 0) ? std::pow(2.0, n / 2) : std::pow(2.0, (n - 1) / 2);
    return f;
}

BellFunctional mabk(int n)
{
    check_range(n, 2, 6, "mabk");
    std::vector<double> s1 = {1, 0}, s2 = {0, 1};
    for (int m = 1; m < n; ++m) {
        std::vector<double> n1(s1.size() * 2), n2(s1.size() * 2);
        for (std::size_t p = 0; p < s1.size(); ++p) {
            // S1' = (S1 (A1 + A2) + S2 (A1 - A2)) / 2; S2' swaps the roles of A1 and A2
            n1[2 * p] = 0.5 * (s1[p] + s2[p]);
            n1[2 * p + 1] = 0.5 * (s1[p] - s2[p]);
            n2[2 * p] = 0.5 * (s2[p] - s1[p]);
            n2[2 * p + 1] = 0.5 * (s2[p] + s1[p]);
        }
        s1.swap(n1);
        s2.swap(n2);
    }
    BellFunctional f(Scenario(n, 2), "mabk_" + std::to_string(n));
    f.coeffs = s1;
    f.stated_bound = 1;
    return f;
}

BellFunctional wwwzb(int n, std::uint64_t sign_mask)
{
    check_range(n, 2, 5, "wwwzb");
    BellFunctional f(Scenario(n, 2), "wwwzb_" + std::to_string(n) + "_" + std::to_string(sign_mask));
    const int n_signs = 1 << n;
    for (std::size_t i = 0; i < f.coeffs.size(); ++i) {
        const auto idx = f.unflat(i);
        double c = 0.0;
        for (int s = 0; s < n_signs; ++s) {
            const double S = ((sign_mask >> s) & 1U) ? -1.0 : 1.0;
            double prod = 1.0;
            for (int k = 0; k < n; ++k) {
                const double sk = ((s >> (n - 1 - k)) & 1) ? -1.0 : 1.0;
                if (idx[k] == 1) prod *= sk;
            }
            c += S * prod;
        }
        f.coeffs[i] = c / n_signs;
    }
    f.stated_bound = 1;
    return f;
}

std::vector<BellFunctional> wwwzb_family(int n)
{
    check_range(n, 2, 4, "wwwzb_family");
    std::vector<BellFunctional> out;
    const std::uint64_t members = std::uint64_t(1) << (1 << n);
    for (std::uint64_t m = 0; m < members; ++m) out.push_back(wwwzb(n, m));
    return out;
}

BellFunctional plzb3qa()
{
    BellFunctional f(Scenario(std::vector<int>{4, 4, 2}), "plzb3qa");
    // (A1(B1+B2) + A2(B1-B2))(C1+C2) + (A3(B3+B4) + A4(B3-B4))(C1-C2), times 4
    auto add = [&](int a, int b, int c, double w) { f.at({a, b, c}) += 4.0 * w; };
    const int pairs[2][2] = {{0, 1}, {2, 3}};
    for (int block = 0; block < 2; ++block) {
        const int a1 = pairs[block][0], a2 = pairs[block][1];
        const double carol[2] = {1.0, block == 0 ? 1.0 : -1.0};
        for (int c = 0; c < 2; ++c) {
            add(a1, a1, c, carol[c]);
            add(a1, a2, c, carol[c]);
            add(a2, a1, c, carol[c]);
            add(a2, a2, c, -carol[c]);
        }
    }
    f.stated_bound = 16;
    return f;
}

namespace {

BellFunctional from_quarter_table(const std::string& name, const std::map<std::string, int>& table)
{
    BellFunctional f(Scenario(3, 3), name);
    for (const auto& [key, v] : table) f.at({key[0] - '0', key[1] - '0', key[2] - '0'}) = v / 4.0;
    f.stated_bound = 1;
    return f;
}

} // namespace

BellFunctional wiesniak_ineq(int k)
{
    switch (k) {
    case 1:
        return from_quarter_table("wiesniak_ineq1", {{"000", 2}, {"001", 1}, {"002", 1}, {"011", 1},
                                                     {"012", -1}, {"100", 2}, {"101", -1},
                                                     {"102", -1}, {"111", -1}, {"112", 1}});
    case 2:
        return from_quarter_table("wiesniak_ineq2", {{"000", 2}, {"011", 1}, {"012", 1}, {"021", 1},
                                                     {"022", -1}, {"100", 2}, {"111", -1},
                                                     {"112", -1}, {"121", -1}, {"122", 1}});
    case 3:
        return from_quarter_table("wiesniak_ineq3",
                                  {{"000", 2}, {"001", 1}, {"002", 1}, {"010", 1}, {"011", -1},
                                   {"020", 1}, {"022", -1}, {"101", 1}, {"102", -1}, {"110", 1},
                                   {"111", -1}, {"120", -1}, {"122", 1}});
    case 4:
        return from_quarter_table("wiesniak_ineq4",
                                  {{"000", 1}, {"001", 1}, {"010", 1}, {"012", 1}, {"021", 1},
                                   {"022", -1}, {"100", 1}, {"102", -1}, {"110", 1}, {"111", -1},
                                   {"121", -1}, {"122", 1}, {"201", 1}, {"202", 1}, {"211", -1},
                                   {"212", -1}});
    default: throw DomainError("wiesniak_ineq: k must be 1..4");
    }
}

BellFunctional wiesniak_ineq4_printed()
{
    return from_quarter_table("wiesniak_ineq4_printed",
                              {{"000", 1}, {"001", 1}, {"010", 1}, {"012", 1}, {"021", 1},
                               {"022", -1}, {"100", 1}, {"102", -1}, {"110", 1}, {"111", -1},
                               {"121", -1}, {"122", 1}, {"201", 1}, {"202", 1}, {"211", -1},
                               {"222", -1}});
}

BellFunctional chsh_lift(int n)
{
    check_range(n, 2, 6, "chsh_lift");
    BellFunctional f(Scenario(n, 2), "chsh_lift_" + std::to_string(n));
    std::vector<int> idx(n, 0);
    f.at(idx) += 1; // A1 prod A1
    idx[0] = 1;
    f.at(idx) += 1; // A2 prod A1
    std::fill(idx.begin(), idx.end(), 1);
    idx[0] = 0;
    f.at(idx) += 1; // A1 prod A2
    idx[0] = 1;
    f.at(idx) -= 1; // -A2 prod A2
    f.stated_bound = 2;
    return f;
}

std::vector<BellFunctional> named_functionals()
{
    std::vector<BellFunctional> out;
    out.push_back(chsh());
    for (int n = 2; n <= 6; ++n) out.push_back(mermin(n));
    for (int n = 2; n <= 6; ++n) out.push_back(ardehali(n));
    for (int n = 2; n <= 6; ++n) out.push_back(mabk(n));
    for (int n = 3; n <= 4; ++n) out.push_back(chsh_lift(n));
    out.push_back(plzb3qa());
    for (int k = 1; k <= 4; ++k) out.push_back(wiesniak_ineq(k));
    for (auto& f : out) lhv_bound(f);
    return out;
}

BellFunctional named_functional(const std::string& name)
{
    auto parse_n = [&](const std::string& prefix) -> int {
        return std::stoi(name.substr(prefix.size()));
    };
    BellFunctional f;
    if (name == "chsh") f = chsh();
    else if (name == "plzb3qa") f = plzb3qa();
    else if (name.rfind("mermin_", 0) == 0) f = mermin(parse_n("mermin_"));
    else if (name.rfind("ardehali_", 0) == 0) f = ardehali(parse_n("ardehali_"));
    else if (name.rfind("mabk_", 0) == 0) f = mabk(parse_n("mabk_"));
    else if (name.rfind("chsh_lift_", 0) == 0) f = chsh_lift(parse_n("chsh_lift_"));
    else if (name.rfind("wiesniak_ineq", 0) == 0) f = wiesniak_ineq(parse_n("wiesniak_ineq"));
    else throw DomainError("unknown functional: " + name);
    lhv_bound(f);
    return f;
}

// ---- GHZ argument ----

AvnReport ghz_avn_check(int n) { return ghz_avn_check(n, ghz_state(n, -1).density()); }

AvnReport ghz_avn_check(int n, const DensityOperator& rho)
{
    if (n < 3 || n > 6) throw DomainError("ghz_avn_check supports 3 <= N <= 6");
    if (rho.n_factors() != n) throw DimensionError("state has the wrong number of qubits");
    const CorrelationTensor t = correlation_tensor(rho);
    AvnReport rep;
    rep.n = n;
    std::vector<std::vector<int>> strings; // per observable: 1 or 2 per party
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) {
            std::vector<int> s(n, 1);
            s[i] = s[j] = 2;
            strings.push_back(s);
            rep.expected.push_back(1.0);
        }
    strings.push_back(std::vector<int>(n, 1));
    rep.expected.push_back(-1.0);
    rep.means_match = true;
    for (std::size_t q = 0; q < strings.size(); ++q) {
        std::string label;
        for (int k = 0; k < n; ++k) label += (k ? " s" : "s") + std::to_string(strings[q][k]);
        rep.labels.push_back(label);
        rep.means.push_back(t(strings[q]));
        if (std::abs(rep.means.back() - rep.expected[q]) > 1e-10) rep.means_match = false;
    }
    // search for a +-1 assignment (two observables per party) matching every expected sign
    rep.lhv_assignable = false;
    for (std::uint32_t bits = 0; bits < (1U << (2 * n)) && !rep.lhv_assignable; ++bits) {
        bool ok = true;
        for (std::size_t q = 0; q < strings.size() && ok; ++q) {
            int prod = 1;
            for (int k = 0; k < n; ++k) {
                const int bit = 2 * k + (strings[q][k] - 1);
                prod *= ((bits >> bit) & 1U) ? -1 : 1;
            }
            ok = prod == static_cast<int>(rep.expected[q]);
        }
        rep.lhv_assignable = ok;
    }
    rep.contradiction = rep.means_match && !rep.lhv_assignable;
    return rep;
}

// ---- face determinant ----

std::array<int, 9> product_vertex(int a, int b, int c, int d)
{
    const int u[3] = {1, a, b};
    const int v[3] = {1, c, d};
    std::array<int, 9> out{};
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) out[3 * i + j] = u[i] * v[j];
    return out;
}

long long integer_determinant(std::vector<std::vector<long long>> m)
{
    const int n = static_cast<int>(m.size());
    long long sign = 1, prev = 1;
    for (int k = 0; k < n - 1; ++k) {
        if (m[k][k] == 0) {
            int swap_row = -1;
            for (int r = k + 1; r < n; ++r)
                if (m[r][k] != 0) {
                    swap_row = r;
                    break;
                }
            if (swap_row < 0) return 0;
            std::swap(m[k], m[swap_row]);
            sign = -sign;
        }
        for (int i = k + 1; i < n; ++i)
            for (int j = k + 1; j < n; ++j) {
                const __int128 num = static_cast<__int128>(m[i][j]) * m[k][k] -
                                     static_cast<__int128>(m[i][k]) * m[k][j];
                m[i][j] = static_cast<long long>(num / prev); // exact by Bareiss
            }
        prev = m[k][k];
    }
    return sign * m[n - 1][n - 1];
}

FaceDeterminant is_face_2q3s(const std::vector<std::array<int, 9>>& vertices,
                             const std::array<int, 9>& candidate)
{
    if (vertices.size() != 9) throw DimensionError("is_face_2q3s needs exactly 9 basis vertices");
    auto check = [](const std::array<int, 9>& v) {
        for (int x : v)
            if (x != 1 && x != -1) throw DomainError("vertex entries must be +-1");
    };
    check(candidate);
    std::vector<std::vector<long long>> big(10, std::vector<long long>(10, 1));
    std::vector<std::vector<long long>> small(9, std::vector<long long>(9));
    for (int j = 0; j < 9; ++j) big[0][j + 1] = candidate[j];
    for (int r = 0; r < 9; ++r) {
        check(vertices[r]);
        for (int j = 0; j < 9; ++j) {
            big[r + 1][j + 1] = vertices[r][j];
            small[r][j] = vertices[r][j];
        }
    }
    FaceDeterminant out;
    out.D = integer_determinant(big);
    out.minor = integer_determinant(small);
    out.degenerate = out.minor == 0;
    return out;
}

} // namespace bellforge
