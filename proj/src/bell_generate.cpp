#include <algorithm>
#include <array>
#include <cmath>
#include <cstdlib>
#include <map>
#include <set>
#include <vector>

#include "bellforge/bell.hpp"

namespace bellforge {

namespace {

using Tensor = std::vector<int>; // quarter units, settings^N entries

constexpr int kSettings = 3;

int ipow(int b, int e)
{
    int r = 1;
    while (e-- > 0) r *= b;
    return r;
}

/** Signed permutation of tensor entries: out[target[i]] = sign[i] * in[i]. */
struct Generator {
    std::vector<int> target;
    std::vector<int> sign;
};

std::vector<int> digits(int i, int n)
{
    std::vector<int> d(n);
    for (int k = n - 1; k >= 0; --k) {
        d[k] = i % kSettings;
        i /= kSettings;
    }
    return d;
}

int undigits(const std::vector<int>& d)
{
    int i = 0;
    for (int x : d) i = i * kSettings + x;
    return i;
}

/** Setting transpositions (0 1), (1 2) and a sign flip of setting 0 per party; adjacent party swaps. */
std::vector<Generator> symmetry_generators(int n)
{
    const int size = ipow(kSettings, n);
    std::vector<Generator> gens;
    auto make = [&](auto&& map) {
        Generator g{std::vector<int>(size), std::vector<int>(size, 1)};
        for (int i = 0; i < size; ++i) {
            auto d = digits(i, n);
            int s = 1;
            map(d, s);
            g.target[i] = undigits(d);
            g.sign[i] = s;
        }
        gens.push_back(std::move(g));
    };
    for (int p = 0; p < n; ++p) {
        make([p](std::vector<int>& d, int&) {
            if (d[p] == 0) d[p] = 1;
            else if (d[p] == 1) d[p] = 0;
        });
        make([p](std::vector<int>& d, int&) {
            if (d[p] == 1) d[p] = 2;
            else if (d[p] == 2) d[p] = 1;
        });
        make([p](std::vector<int>& d, int& s) {
            if (d[p] == 0) s = -1;
        });
    }
    for (int p = 0; p + 1 < n; ++p)
        make([p](std::vector<int>& d, int&) { std::swap(d[p], d[p + 1]); });
    return gens;
}

Tensor apply(const Generator& g, const Tensor& t)
{
    Tensor out(t.size());
    for (std::size_t i = 0; i < t.size(); ++i) out[g.target[i]] = g.sign[i] * t[i];
    return out;
}

std::set<Tensor> orbit(const Tensor& t, const std::vector<Generator>& gens)
{
    std::set<Tensor> seen{t};
    std::vector<Tensor> stack{t};
    while (!stack.empty()) {
        const Tensor x = std::move(stack.back());
        stack.pop_back();
        for (const auto& g : gens) {
            Tensor y = apply(g, x);
            if (seen.insert(y).second) stack.push_back(std::move(y));
        }
    }
    return seen;
}

/** The four points (1, a, b) of one party's sign vector with the first sign fixed. */
const std::array<std::array<int, 3>, 4>& sign_points()
{
    static const std::array<std::array<int, 3>, 4> pts = {
        {{{1, 1, 1}}, {{1, 1, -1}}, {{1, -1, 1}}, {{1, -1, -1}}}};
    return pts;
}

int dot3(const std::array<int, 3>& c, const std::array<int, 3>& p)
{
    return c[0] * p[0] + c[1] * p[1] + c[2] * p[2];
}

/** Quarter-integer vectors whose values on the four sign points lie in `allowed`. */
std::vector<std::array<int, 3>> delta_vectors(const std::set<int>& allowed)
{
    std::vector<std::array<int, 3>> out;
    for (int a = -4; a <= 4; ++a)
        for (int b = -4; b <= 4; ++b)
            for (int c = -4; c <= 4; ++c) {
                const std::array<int, 3> v{a, b, c};
                bool ok = true;
                for (const auto& p : sign_points()) ok = ok && allowed.count(dot3(v, p));
                if (ok) out.push_back(v);
            }
    return out;
}

/** A first-order delta: coefficient block, its support mask on the sign points. */
struct Delta {
    std::vector<int> block;
    unsigned mask;
};

std::vector<Delta> first_order_deltas_two_party()
{
    std::vector<Delta> out;
    for (const auto& v : delta_vectors({0, 4, -4})) {
        unsigned mask = 0;
        for (int q = 0; q < 4; ++q)
            if (dot3(v, sign_points()[q]) != 0) mask |= 1U << q;
        out.push_back({{v[0], v[1], v[2]}, mask});
    }
    return out;
}

std::vector<Delta> first_order_deltas_three_party()
{
    // rows (indexed by the second party's setting) are second-order deltas
    const auto rows = delta_vectors({0, 2, -2, 4, -4});
    std::vector<std::array<int, 4>> row_values(rows.size());
    for (std::size_t r = 0; r < rows.size(); ++r)
        for (int q = 0; q < 4; ++q) row_values[r][q] = dot3(rows[r], sign_points()[q]);
    std::vector<Delta> out;
    const std::size_t nr = rows.size();
    for (std::size_t r0 = 0; r0 < nr; ++r0)
        for (std::size_t r1 = 0; r1 < nr; ++r1)
            for (std::size_t r2 = 0; r2 < nr; ++r2) {
                unsigned mask = 0;
                bool ok = true;
                for (int p = 0; p < 4 && ok; ++p) {
                    const auto& sp = sign_points()[p];
                    for (int q = 0; q < 4; ++q) {
                        const int v = sp[0] * row_values[r0][q] + sp[1] * row_values[r1][q] +
                                      sp[2] * row_values[r2][q];
                        if (v != 0 && v != 4 && v != -4) {
                            ok = false;
                            break;
                        }
                        if (v != 0) mask |= 1U << (4 * p + q);
                    }
                }
                if (!ok) continue;
                std::vector<int> block;
                for (std::size_t r : {r0, r1, r2})
                    block.insert(block.end(), rows[r].begin(), rows[r].end());
                out.push_back({std::move(block), mask});
            }
    return out;
}

/** All sign functions: one delta per first-party setting, disjoint supports covering every point. */
std::set<Tensor> enumerate_sign_functions(int n)
{
    const std::vector<Delta> deltas =
        n == 2 ? first_order_deltas_two_party() : first_order_deltas_three_party();
    const unsigned full = n == 2 ? 0xFU : 0xFFFFU;
    std::map<unsigned, std::vector<std::size_t>> by_mask;
    std::size_t zero = deltas.size();
    for (std::size_t i = 0; i < deltas.size(); ++i) {
        by_mask[deltas[i].mask].push_back(i);
        if (deltas[i].mask == 0 &&
            std::all_of(deltas[i].block.begin(), deltas[i].block.end(), [](int x) { return x == 0; }))
            zero = i;
    }
    std::set<Tensor> out;
    for (std::size_t a = 0; a < deltas.size(); ++a)
        for (std::size_t b = 0; b < deltas.size(); ++b) {
            if (deltas[a].mask & deltas[b].mask) continue;
            const unsigned rest = full ^ (deltas[a].mask | deltas[b].mask);
            std::vector<std::size_t> thirds;
            if (rest == 0) thirds.push_back(zero);
            else if (auto it = by_mask.find(rest); it != by_mask.end()) thirds = it->second;
            for (std::size_t c : thirds) {
                Tensor t;
                for (std::size_t d : {a, b, c})
                    t.insert(t.end(), deltas[d].block.begin(), deltas[d].block.end());
                out.insert(std::move(t));
            }
        }
    return out;
}

BellFunctional to_functional(const Tensor& t, int n, const std::string& name)
{
    BellFunctional f(Scenario(n, kSettings), name);
    for (std::size_t i = 0; i < t.size(); ++i) f.coeffs[i] = t[i] / 4.0;
    f.stated_bound = 1;
    return f;
}

} // namespace

std::size_t TightCatalog::nontrivial() const
{
    return static_cast<std::size_t>(
        std::count_if(classes.begin(), classes.end(), [](const TightClass& c) { return !c.trivial; }));
}

bool is_valid_sign_function(const std::vector<int>& q, int n, int settings)
{
    const int total = n * settings;
    if (static_cast<int>(q.size()) != ipow(settings, n)) return false;
    for (std::uint32_t bits = 0; bits < (1U << total); ++bits) {
        long long acc = 0;
        for (std::size_t i = 0; i < q.size(); ++i) {
            if (q[i] == 0) continue;
            std::size_t r = i;
            int s = 1;
            for (int k = n - 1; k >= 0; --k) {
                const int setting = static_cast<int>(r % settings);
                r /= settings;
                if ((bits >> (k * settings + setting)) & 1U) s = -s;
            }
            acc += s * q[i];
        }
        if (acc != 4 && acc != -4) return false;
    }
    long long sq = 0, sum = 0;
    for (int x : q) {
        sq += static_cast<long long>(x) * x;
        sum += x;
    }
    return sq == 16 && std::llabs(sum) == 4;
}

std::vector<int> canonical_form(const std::vector<int>& q, int n, int settings)
{
    if (settings != kSettings) throw DomainError("canonical_form supports three settings");
    const auto o = orbit(q, symmetry_generators(n));
    return *o.begin();
}

TightCatalog generate_tight_functionals(int n)
{
    if (n != 2 && n != 3) throw DomainError("generate_tight_functionals supports N = 2 or 3");
    const auto gens = symmetry_generators(n);
    const std::set<Tensor> all = enumerate_sign_functions(n);

    TightCatalog cat;
    cat.n_parties = n;
    cat.sign_functions = all.size();
    std::set<Tensor> assigned;
    for (const auto& t : all) {
        if (assigned.count(t)) continue;
        const auto o = orbit(t, gens);
        assigned.insert(o.begin(), o.end());
        if (!is_valid_sign_function(t, n, kSettings)) continue;
        TightClass c;
        c.quarter_coeffs = t;
        c.orbit_size = o.size();
        c.trivial = std::count_if(t.begin(), t.end(), [](int x) { return x != 0; }) == 1;
        c.functional = to_functional(t, n, "tight" + std::to_string(n) + "_" +
                                               std::to_string(cat.classes.size()));
        lhv_bound(c.functional);
        c.saturating = static_cast<int>(saturating_strategies(c.functional).size());
        c.rank = saturating_rank(c.functional);
        cat.classes.push_back(std::move(c));
    }
    return cat;
}

std::optional<std::size_t> match_class(const TightCatalog& catalog, const BellFunctional& f)
{
    if (f.scenario.n_parties != catalog.n_parties) return std::nullopt;
    for (int m : f.scenario.settings)
        if (m != kSettings) return std::nullopt;
    Tensor q(f.coeffs.size());
    for (std::size_t i = 0; i < q.size(); ++i) {
        const double x = 4.0 * f.coeffs[i];
        if (std::abs(x - std::round(x)) > 1e-9) return std::nullopt;
        q[i] = static_cast<int>(std::lround(x));
    }
    const Tensor canon = canonical_form(q, catalog.n_parties, kSettings);
    for (std::size_t c = 0; c < catalog.classes.size(); ++c)
        if (catalog.classes[c].quarter_coeffs == canon) return c;
    return std::nullopt;
}

} // namespace bellforge
