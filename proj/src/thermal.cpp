#include "bellforge/thermal.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "bellforge/numerics.hpp"
#include "bellforge/types.hpp"

namespace bellforge {

using SparseC = Eigen::SparseMatrix<std::complex<double>>;

namespace {

double convention_scale(OperatorConvention c) { return c == OperatorConvention::pauli ? 2.0 : 1.0; }

/** Nonzero entries of a small dense operator, grouped by column. */
struct LocalOperator {
    int dim = 0;
    std::vector<std::vector<std::pair<int, std::complex<double>>>> columns;

    explicit LocalOperator(const Eigen::MatrixXcd& m) : dim(static_cast<int>(m.rows())), columns(m.cols())
    {
        for (int c = 0; c < m.cols(); ++c)
            for (int r = 0; r < m.rows(); ++r)
                if (std::abs(m(r, c)) > 1e-15) columns[c].emplace_back(r, m(r, c));
    }
};

std::vector<long> strides(const std::vector<int>& dims)
{
    std::vector<long> s(dims.size(), 1);
    for (int k = static_cast<int>(dims.size()) - 2; k >= 0; --k) s[k] = s[k + 1] * dims[k + 1];
    return s;
}

std::array<Eigen::MatrixXcd, 3> scaled_spin(double l, OperatorConvention c)
{
    auto s = spin_operators<double>(l);
    for (auto& m : s) m *= convention_scale(c);
    return s;
}

/** Accumulates sum over sites of a one-site operator and over edges of a two-site operator. */
class Assembler {
public:
    explicit Assembler(const SpinLattice& lat) : dims_(lat.local_dims()), strides_(strides(dims_))
    {
        dim_ = lat.dim();
    }

    void add_site(int site, const Eigen::MatrixXcd& op)
    {
        const LocalOperator local(op);
        const int d = dims_[site];
        for (long b = 0; b < static_cast<long>(dim_); ++b) {
            const int x = static_cast<int>((b / strides_[site]) % d);
            for (const auto& [r, v] : local.columns[x])
                triplets_.emplace_back(static_cast<int>(b + (r - x) * strides_[site]), static_cast<int>(b), v);
        }
    }

    void add_pair(int i, int j, const Eigen::MatrixXcd& op)
    {
        const LocalOperator local(op);
        const int di = dims_[i], dj = dims_[j];
        for (long b = 0; b < static_cast<long>(dim_); ++b) {
            const int x = static_cast<int>((b / strides_[i]) % di);
            const int y = static_cast<int>((b / strides_[j]) % dj);
            for (const auto& [r, v] : local.columns[x * dj + y]) {
                const int x2 = r / dj, y2 = r % dj;
                triplets_.emplace_back(static_cast<int>(b + (x2 - x) * strides_[i] + (y2 - y) * strides_[j]),
                                       static_cast<int>(b), v);
            }
        }
    }

    SparseC finish()
    {
        SparseC m(static_cast<long>(dim_), static_cast<long>(dim_));
        m.setFromTriplets(triplets_.begin(), triplets_.end());
        m.prune(std::complex<double>(0.0), 1e-14);
        return m;
    }

private:
    std::vector<int> dims_;
    std::vector<long> strides_;
    std::size_t dim_ = 0;
    std::vector<Eigen::Triplet<std::complex<double>>> triplets_;
};

/** Connected components of the sparsity graph. */
std::vector<std::vector<int>> components(const SparseC& h)
{
    const int n = static_cast<int>(h.rows());
    std::vector<int> parent(n);
    std::iota(parent.begin(), parent.end(), 0);
    std::function<int(int)> find = [&](int x) {
        while (parent[x] != x) x = parent[x] = parent[parent[x]];
        return x;
    };
    for (int c = 0; c < h.outerSize(); ++c)
        for (SparseC::InnerIterator it(h, c); it; ++it) {
            const int a = find(static_cast<int>(it.row())), b = find(c);
            if (a != b) parent[std::max(a, b)] = std::min(a, b);
        }
    std::vector<int> label(n, -1);
    std::vector<std::vector<int>> out;
    for (int i = 0; i < n; ++i) {
        const int r = find(i);
        if (label[r] < 0) {
            label[r] = static_cast<int>(out.size());
            out.emplace_back();
        }
        out[label[r]].push_back(i);
    }
    return out;
}

void check_temperature(double T)
{
    if (!(T >= 1e-6)) throw DomainError("temperature must be at least 1e-6; use the ground-space limit");
}

/** ln p_k for every sorted eigenstate. */
Eigen::VectorXd log_weights(const Spectrum& spec, double T)
{
    check_temperature(T);
    const Eigen::VectorXd shifted = -(spec.energies.array() - spec.energies(0)) / T;
    const double log_sum = std::log(shifted.array().exp().sum());
    return shifted.array() - log_sum;
}

std::array<SparseC, 3> total_spin_all(const SpinLattice& lat)
{
    return {total_spin_sparse(lat, 0, OperatorConvention::spin),
            total_spin_sparse(lat, 1, OperatorConvention::spin),
            total_spin_sparse(lat, 2, OperatorConvention::spin)};
}

/** Tr(rho X) for a dense rho and sparse X. */
std::complex<double> trace_product(const Eigen::MatrixXcd& rho, const SparseC& x)
{
    std::complex<double> s = 0.0;
    for (int c = 0; c < x.outerSize(); ++c)
        for (SparseC::InnerIterator it(x, c); it; ++it) s += rho(c, it.row()) * it.value();
    return s;
}

void check_state_matches(const DensityOperator& rho, const SpinLattice& lat)
{
    if (static_cast<std::size_t>(rho.dim()) != lat.dim())
        throw DimensionError("state dimension does not match the lattice");
}

/** Spin-1/2 Heisenberg model with one coupling constant; returns J. */
double heisenberg_coupling(const SpinLattice& lat)
{
    if (lat.convention != OperatorConvention::pauli)
        throw DomainError("energy witness: Pauli convention required");
    for (double l : lat.spins)
        if (l != 0.5) throw DomainError("energy witness: spins 1/2 required");
    if (lat.edges.empty() || !lat.isotropic()) throw DomainError("energy witness: isotropic couplings required");
    const double J = lat.edges.front().J * lat.edges.front().axes(0);
    for (const auto& e : lat.edges)
        if (std::abs(e.J * e.axes(0) - J) > 1e-12 || e.Jq != 0.0)
            throw DomainError("energy witness: uniform bilinear coupling required");
    if (J == 0.0) throw DomainError("energy witness: zero coupling");
    return J;
}

/** sum over edges of sigma . sigma with unit weights. */
SparseC bond_sum(const SpinLattice& lat)
{
    SpinLattice unit = lat;
    unit.field.setZero();
    for (auto& e : unit.edges) {
        e.J = 1.0;
        e.axes = Eigen::Vector3d::Ones();
    }
    return build_hamiltonian_sparse(unit);
}

WitnessReport energy_report(double bond_total, const SpinLattice& lat, EnergyLevel level)
{
    WitnessReport r;
    switch (level) {
    case EnergyLevel::bipartite:
        r.quantity = bond_total / static_cast<double>(lat.edges.size());
        r.threshold = -1.0;
        r.entangled = std::abs(r.quantity) > 1.0;
        r.note = "per-bond <sigma.sigma>, separable states satisfy |value| <= 1";
        break;
    case EnergyLevel::tripartite:
        r.quantity = bond_total / lat.n_sites();
        r.threshold = -(1.0 + std::sqrt(5.0)) / 2.0;
        r.entangled = r.quantity < r.threshold;
        r.note = "energy per site over J, below threshold implies tripartite entanglement";
        break;
    case EnergyLevel::bifactorisable:
        r.quantity = bond_total / lat.n_sites();
        r.threshold = -1.5;
        r.entangled = r.quantity < r.threshold;
        r.note = "energy per site over J, below threshold excludes pairwise-factorisable states";
        break;
    }
    return r;
}

} // namespace

// ---- lattice ----

void SpinLattice::validate() const
{
    if (spins.empty()) throw DomainError("lattice has no sites");
    for (double l : spins) {
        const double twice = 2.0 * l;
        if (!(l > 0) || std::abs(twice - std::round(twice)) > 1e-12)
            throw DomainError("spin magnitudes must be positive half-integers");
    }
    for (const auto& e : edges) {
        if (e.i == e.j) throw DomainError("edge joins a site to itself");
        if (e.i < 0 || e.j < 0 || e.i >= n_sites() || e.j >= n_sites()) throw DomainError("edge index out of range");
    }
    long double d = 1;
    for (int x : local_dims()) d *= x;
    if (d > kMaxLatticeDim) throw DimensionError("lattice Hilbert dimension exceeds 4096");
}

std::vector<int> SpinLattice::local_dims() const
{
    std::vector<int> d;
    for (double l : spins) d.push_back(static_cast<int>(std::lround(2 * l + 1)));
    return d;
}

std::size_t SpinLattice::dim() const
{
    std::size_t d = 1;
    for (int x : local_dims()) d *= static_cast<std::size_t>(x);
    return d;
}

bool SpinLattice::isotropic() const
{
    return std::all_of(edges.begin(), edges.end(), [](const Edge& e) {
        return e.axes(0) == e.axes(1) && e.axes(1) == e.axes(2);
    });
}

double SpinLattice::spin_sum() const { return std::accumulate(spins.begin(), spins.end(), 0.0); }

SparseC build_hamiltonian_sparse(const SpinLattice& lat)
{
    lat.validate();
    Assembler a(lat);
    for (const auto& e : lat.edges) {
        const auto si = scaled_spin(lat.spins[e.i], lat.convention);
        const auto sj = scaled_spin(lat.spins[e.j], lat.convention);
        Eigen::MatrixXcd dot = Eigen::MatrixXcd::Zero(si[0].rows() * sj[0].rows(), si[0].rows() * sj[0].rows());
        Eigen::MatrixXcd weighted = dot;
        for (int k = 0; k < 3; ++k) {
            const Eigen::MatrixXcd term = kron_all<double>({si[k], sj[k]});
            dot += term;
            weighted += e.axes(k) * term;
        }
        Eigen::MatrixXcd h = e.J * weighted;
        if (e.Jq != 0.0) h += e.Jq * dot * dot;
        a.add_pair(e.i, e.j, h);
    }
    if (lat.field.squaredNorm() > 0)
        for (int i = 0; i < lat.n_sites(); ++i) {
            const auto s = scaled_spin(lat.spins[i], lat.convention);
            a.add_site(i, lat.field(0) * s[0] + lat.field(1) * s[1] + lat.field(2) * s[2]);
        }
    return a.finish();
}

Eigen::MatrixXcd build_hamiltonian(const SpinLattice& lat) { return Eigen::MatrixXcd(build_hamiltonian_sparse(lat)); }

SparseC total_spin_sparse(const SpinLattice& lat, int axis, OperatorConvention convention)
{
    lat.validate();
    if (axis < 0 || axis > 2) throw DomainError("axis must be 0, 1 or 2");
    Assembler a(lat);
    for (int i = 0; i < lat.n_sites(); ++i) a.add_site(i, scaled_spin(lat.spins[i], convention)[axis]);
    return a.finish();
}

// ---- spectra ----

Eigen::VectorXcd Spectrum::eigenvector(std::size_t k) const
{
    if (!has_vectors) throw DomainError("spectrum was computed without eigenvectors");
    const auto [b, c] = origin.at(k);
    Eigen::VectorXcd v = Eigen::VectorXcd::Zero(static_cast<long>(dim));
    const auto& blk = blocks[b];
    for (std::size_t r = 0; r < blk.basis.size(); ++r) v(blk.basis[r]) = blk.vectors(static_cast<long>(r), c);
    return v;
}

Eigen::MatrixXcd Spectrum::eigenvectors() const
{
    Eigen::MatrixXcd v = Eigen::MatrixXcd::Zero(static_cast<long>(dim), static_cast<long>(dim));
    for (std::size_t k = 0; k < dim; ++k) v.col(static_cast<long>(k)) = eigenvector(k);
    return v;
}

Spectrum diagonalize(const SparseC& h, std::vector<int> factor_dims, bool with_vectors)
{
    if (h.rows() != h.cols()) throw DimensionError("Hamiltonian must be square");
    Spectrum spec;
    spec.dim = static_cast<std::size_t>(h.rows());
    spec.factor_dims = std::move(factor_dims);
    spec.has_vectors = with_vectors;
    const auto comps = components(h);
    spec.blocks.resize(comps.size());
    const SparseC hc = h; // column access
    parallel_for(comps.size(), [&](std::size_t b) {
        const auto& basis = comps[b];
        const int n = static_cast<int>(basis.size());
        std::vector<int> local(spec.dim, -1);
        for (int r = 0; r < n; ++r) local[basis[r]] = r;
        Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(n, n);
        bool real = true;
        for (int c = 0; c < n; ++c)
            for (SparseC::InnerIterator it(hc, basis[c]); it; ++it) {
                m(local[it.row()], c) = it.value();
                if (std::abs(it.value().imag()) > 0) real = false;
            }
        if ((m - m.adjoint()).cwiseAbs().maxCoeff() > 1e-10 * std::max(1.0, m.cwiseAbs().maxCoeff()))
            throw DomainError("Hamiltonian is not Hermitian");
        const int options = with_vectors ? Eigen::ComputeEigenvectors : Eigen::EigenvaluesOnly;
        SpectrumBlock& blk = spec.blocks[b];
        blk.basis = basis;
        if (real) {
            const Eigen::MatrixXd mr = 0.5 * (m.real() + m.real().transpose());
            Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(mr, options);
            if (es.info() != Eigen::Success) throw NumericalError("eigensolver failed");
            blk.energies = es.eigenvalues();
            if (with_vectors) blk.vectors = es.eigenvectors().cast<std::complex<double>>();
        } else {
            const Eigen::MatrixXcd mh = 0.5 * (m + m.adjoint());
            Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(mh, options);
            if (es.info() != Eigen::Success) throw NumericalError("eigensolver failed");
            blk.energies = es.eigenvalues();
            if (with_vectors) blk.vectors = es.eigenvectors();
        }
    });
    for (std::size_t b = 0; b < spec.blocks.size(); ++b)
        for (long c = 0; c < spec.blocks[b].energies.size(); ++c)
            spec.origin.emplace_back(static_cast<int>(b), static_cast<int>(c));
    std::stable_sort(spec.origin.begin(), spec.origin.end(), [&](auto x, auto y) {
        return spec.blocks[x.first].energies(x.second) < spec.blocks[y.first].energies(y.second);
    });
    spec.energies.resize(static_cast<long>(spec.dim));
    for (std::size_t k = 0; k < spec.dim; ++k)
        spec.energies(static_cast<long>(k)) = spec.blocks[spec.origin[k].first].energies(spec.origin[k].second);
    return spec;
}

Spectrum diagonalize(const SpinLattice& lat, bool with_vectors)
{
    return diagonalize(build_hamiltonian_sparse(lat), lat.local_dims(), with_vectors);
}

StateMoments magnetization_moments(const Spectrum& spec, const SpinLattice& lat)
{
    if (lat.dim() != spec.dim) throw DimensionError("spectrum does not belong to this lattice");
    const auto m = total_spin_all(lat);
    StateMoments out;
    out.mean = Eigen::MatrixXd::Zero(static_cast<long>(spec.dim), 3);
    out.second.assign(spec.dim, Eigen::Matrix3d::Zero());
    parallel_for(spec.dim, [&](std::size_t k) {
        const Eigen::VectorXcd v = spec.eigenvector(k);
        std::array<Eigen::VectorXcd, 3> w;
        for (int a = 0; a < 3; ++a) {
            w[a] = m[a] * v;
            out.mean(static_cast<long>(k), a) = v.dot(w[a]).real();
        }
        for (int a = 0; a < 3; ++a)
            for (int b = 0; b < 3; ++b) out.second[k](a, b) = w[a].dot(w[b]).real();
    });
    return out;
}

Eigen::VectorXd boltzmann_weights(const Spectrum& spec, double T) { return log_weights(spec, T).array().exp(); }

Thermo thermo(const Spectrum& spec, double T)
{
    check_temperature(T);
    const Eigen::ArrayXd shifted = spec.energies.array() - spec.energies(0);
    const Eigen::ArrayXd w = (-shifted / T).exp();
    const double z = w.sum();
    Thermo t;
    t.log_Z = std::log(z) - spec.energies(0) / T;
    const double mean_shift = (w * shifted).sum() / z;
    t.U = spec.energies(0) + mean_shift;
    const double var = (w * (shifted - mean_shift).square()).sum() / z;
    t.C = var / (T * T);
    return t;
}

Thermo thermo(const Spectrum& spec, const StateMoments& moments, double T)
{
    Thermo t = thermo(spec, T);
    const Eigen::VectorXd p = boltzmann_weights(spec, T);
    t.M = moments.mean.transpose() * p;
    return t;
}

DensityOperator thermal_state(const Spectrum& spec, double T)
{
    const Eigen::VectorXd lp = log_weights(spec, T);
    if (!spec.has_vectors) throw DomainError("thermal_state needs eigenvectors");
    Eigen::MatrixXcd rho = Eigen::MatrixXcd::Zero(static_cast<long>(spec.dim), static_cast<long>(spec.dim));
    // weights per (block, column)
    std::vector<Eigen::VectorXd> block_p(spec.blocks.size());
    for (std::size_t b = 0; b < spec.blocks.size(); ++b) block_p[b] = Eigen::VectorXd::Zero(spec.blocks[b].energies.size());
    for (std::size_t k = 0; k < spec.dim; ++k)
        block_p[spec.origin[k].first](spec.origin[k].second) = std::exp(lp(static_cast<long>(k)));
    for (std::size_t b = 0; b < spec.blocks.size(); ++b) {
        const auto& blk = spec.blocks[b];
        const Eigen::MatrixXcd part = blk.vectors * block_p[b].asDiagonal() * blk.vectors.adjoint();
        for (std::size_t r = 0; r < blk.basis.size(); ++r)
            for (std::size_t c = 0; c < blk.basis.size(); ++c)
                rho(blk.basis[r], blk.basis[c]) = part(static_cast<long>(r), static_cast<long>(c));
    }
    rho = 0.5 * (rho + rho.adjoint()).eval();
    return DensityOperator(rho, spec.factor_dims);
}

double thermal_expectation(const Spectrum& spec, const SparseC& x, double T)
{
    const Eigen::VectorXd lp = log_weights(spec, T);
    std::vector<double> part(spec.dim, 0.0);
    parallel_for(spec.dim, [&](std::size_t k) {
        const double p = std::exp(lp(static_cast<long>(k)));
        if (p == 0.0) return;
        const Eigen::VectorXcd v = spec.eigenvector(k);
        part[k] = p * v.dot(x * v).real();
    });
    return std::accumulate(part.begin(), part.end(), 0.0);
}

// ---- susceptibility ----

double susceptibility(const Spectrum& spec, const StateMoments& moments, double T, const Eigen::Vector3d& direction)
{
    if (direction.norm() == 0) throw DomainError("direction must be nonzero");
    const Eigen::Vector3d n = direction.normalized();
    const Eigen::VectorXd p = boltzmann_weights(spec, T);
    double second = 0.0;
    for (std::size_t k = 0; k < spec.dim; ++k) second += p(static_cast<long>(k)) * n.dot(moments.second[k] * n);
    const double mean = p.dot(moments.mean * n);
    return (second - mean * mean) / T;
}

double susceptibility(const Spectrum& spec, const SpinLattice& lat, double T, const Eigen::Vector3d& direction,
                      SusceptibilityForm form)
{
    if (form == SusceptibilityForm::variance)
        return susceptibility(spec, magnetization_moments(spec, lat), T, direction);

    if (direction.norm() == 0) throw DomainError("direction must be nonzero");
    const Eigen::Vector3d n = direction.normalized();
    const auto m = total_spin_all(lat);
    const SparseC mn = n(0) * m[0] + n(1) * m[1] + n(2) * m[2];
    const Eigen::VectorXd lp = log_weights(spec, T);
    const Eigen::MatrixXcd v = spec.eigenvectors();
    const Eigen::MatrixXcd w = v.adjoint() * (mn * v);
    // logarithmic mean of p_m and p_n, computed from the logs so nothing underflows
    auto kubo_weight = [&](long a, long b) {
        const double x = lp(a) - lp(b);
        if (std::abs(x) < 1e-12) return std::exp(lp(b)) * (1 + 0.5 * x);
        return std::exp(lp(b)) * std::expm1(x) / x;
    };
    const long d = static_cast<long>(spec.dim);
    double total = 0.0, mean = 0.0;
    for (long a = 0; a < d; ++a) {
        mean += std::exp(lp(a)) * w(a, a).real();
        for (long b = 0; b < d; ++b) {
            const double amp = std::norm(w(a, b));
            if (amp > 0) total += amp * kubo_weight(a, b);
        }
    }
    return (total - mean * mean) / T;
}

WitnessReport witness_susceptibility(const SpinLattice& lat, const Spectrum& spec, const StateMoments& moments,
                                     double T)
{
    if (!lat.isotropic() || lat.field.squaredNorm() > 0)
        throw DomainError("susceptibility witness needs isotropic couplings and zero field");
    WitnessReport r;
    for (int a = 0; a < 3; ++a) r.quantity += T * susceptibility(spec, moments, T, Eigen::Vector3d::Unit(a));
    r.threshold = lat.spin_sum();
    r.entangled = r.quantity < r.threshold;
    r.note = "T * (chi_x + chi_y + chi_z), spin convention";
    return r;
}

WitnessReport witness_susceptibility(const SpinLattice& lat, double T)
{
    if (!lat.isotropic() || lat.field.squaredNorm() > 0)
        throw DomainError("susceptibility witness needs isotropic couplings and zero field");
    const Spectrum spec = diagonalize(lat);
    return witness_susceptibility(lat, spec, magnetization_moments(spec, lat), T);
}

WitnessReport witness_susceptibility_ground(const SpinLattice& lat, const Spectrum& spec, const StateMoments& moments,
                                            double tol)
{
    if (!lat.isotropic() || lat.field.squaredNorm() > 0)
        throw DomainError("susceptibility witness needs isotropic couplings and zero field");
    Eigen::Matrix3d second = Eigen::Matrix3d::Zero();
    Eigen::Vector3d mean = Eigen::Vector3d::Zero();
    int count = 0;
    for (std::size_t k = 0; k < spec.dim && spec.energies(static_cast<long>(k)) - spec.energies(0) <= tol; ++k) {
        second += moments.second[k];
        mean += moments.mean.row(static_cast<long>(k)).transpose();
        ++count;
    }
    second /= count;
    mean /= count;
    WitnessReport r;
    r.quantity = second.trace() - mean.squaredNorm();
    r.threshold = lat.spin_sum();
    r.entangled = r.quantity < r.threshold;
    r.note = "zero-temperature limit over a ground space of dimension " + std::to_string(count);
    return r;
}

// ---- energy witnesses ----

WitnessReport witness_energy(const SpinLattice& lat, double T, EnergyLevel level)
{
    heisenberg_coupling(lat);
    const Spectrum spec = diagonalize(lat);
    return energy_report(thermal_expectation(spec, bond_sum(lat), T), lat, level);
}

WitnessReport witness_energy(const SpinLattice& lat, const DensityOperator& rho, EnergyLevel level)
{
    heisenberg_coupling(lat);
    check_state_matches(rho, lat);
    return energy_report(trace_product(rho.matrix(), bond_sum(lat)).real(), lat, level);
}

WitnessReport witness_energy_ground(const SpinLattice& lat, EnergyLevel level)
{
    heisenberg_coupling(lat);
    const Spectrum spec = diagonalize(lat);
    const SparseC bonds = bond_sum(lat);
    double total = 0.0;
    int count = 0;
    for (std::size_t k = 0; k < spec.dim && spec.energies(static_cast<long>(k)) - spec.energies(0) <= 1e-9; ++k) {
        const Eigen::VectorXcd v = spec.eigenvector(k);
        total += v.dot(bonds * v).real();
        ++count;
    }
    return energy_report(total / count, lat, level);
}

double HeatCapacityClass::threshold(double T) const
{
    if (!(T > 0)) throw DomainError("temperature must be positive");
    if (e_bound < u0) throw DomainError("separable bound must not lie below the ground energy");
    if (!(scale > 0)) throw DomainError("gamma or gap must be positive");
    return kind == Kind::gapless ? scale * (e_bound - u0) / T : scale * (e_bound - u0) / (T * T);
}

WitnessReport witness_heat_capacity(const HeatCapacityClass& cls, double C, double T)
{
    WitnessReport r;
    r.quantity = C;
    r.threshold = cls.threshold(T);
    r.entangled = C < r.threshold;
    r.note = cls.kind == HeatCapacityClass::Kind::gapless ? "gapless: gamma (E_B - U0) / T"
                                                          : "gapped: gap (E_B - U0) / T^2";
    return r;
}

// ---- state functionals ----

double hofmann_takeuchi(const DensityOperator& rho, const SpinLattice& lat)
{
    check_state_matches(rho, lat);
    const auto m = total_spin_all(lat);
    double total = 0.0;
    for (int a = 0; a < 3; ++a) {
        const double mean = trace_product(rho.matrix(), m[a]).real();
        const SparseC sq = m[a] * m[a];
        total += trace_product(rho.matrix(), sq).real() - mean * mean;
    }
    return total;
}

Complementarity complementarity(const DensityOperator& rho, const SpinLattice& lat)
{
    check_state_matches(rho, lat);
    const double l = lat.spins.front();
    for (double x : lat.spins)
        if (x != l) throw DomainError("complementarity needs equal spin magnitudes");
    const double nl = lat.n_sites() * l;
    const auto m = total_spin_all(lat);
    Eigen::Vector3d mean;
    double second = 0.0;
    for (int a = 0; a < 3; ++a) {
        mean(a) = trace_product(rho.matrix(), m[a]).real();
        const SparseC sq = m[a] * m[a];
        second += trace_product(rho.matrix(), sq).real();
    }
    const double variance = second - mean.squaredNorm();
    Complementarity c;
    c.nonlocal_term = 1.0 - variance / nl;
    c.local_term = mean.squaredNorm() / (nl * nl);
    c.lhs = c.nonlocal_term + c.local_term;
    c.lemma_holds = second >= (nl + 1) / nl * mean.squaredNorm() - 1e-9;
    return c;
}

double wang_zanardi_concurrence(double u_per_bond_over_J) { return std::max(0.0, 0.5 * (-u_per_bond_over_J - 1.0)); }

double wang_zanardi_concurrence_fm(double u_per_site, double J)
{
    return std::max(0.0, 0.5 * (u_per_site / (3.0 * J) - 1.0));
}

// ---- transverse Ising ----

double ising_product_variance(double theta1, double theta2, double B, int sign)
{
    const double z1 = std::cos(theta1), z2 = std::cos(theta2);
    const double x1 = std::sin(theta1), x2 = std::sin(theta2);
    return (1 + z1 * z1 + z2 * z2 - 3 * z1 * z1 * z2 * z2) - sign * 2 * B * z1 * z2 * (x1 + x2) +
           0.5 * B * B * (2 - x1 * x1 - x2 * x2);
}

IsingVariance ising_min_variance(double B, int sign)
{
    IsingVariance best{INFINITY, 0, 0};
    NelderMeadOptions o;
    o.f_tolerance = 1e-15;
    o.x_tolerance = 1e-12;
    constexpr int kGrid = 8;
    for (int i = 0; i < kGrid; ++i)
        for (int j = 0; j < kGrid; ++j) {
            Eigen::VectorXd x0(2);
            x0 << 2 * M_PI * (i + 0.5) / kGrid, 2 * M_PI * (j + 0.5) / kGrid;
            const auto r = nelder_mead_minimize(
                [&](const Eigen::VectorXd& x) { return ising_product_variance(x(0), x(1), B, sign); }, x0, o);
            if (r.value < best.min_value_per_site)
                best = {r.value, std::remainder(r.x(0), 2 * M_PI), std::remainder(r.x(1), 2 * M_PI)};
        }
    best.min_value_per_site = std::max(0.0, best.min_value_per_site);
    return best;
}

double ising_product_variance_explicit(double theta1, double theta2, double B, int n, int sign)
{
    if (n < 3 || n % 2) throw DomainError("explicit ring needs an even number of sites, at least 4");
    const SparseC h = build_hamiltonian_sparse(ising_ring(n, sign, B));
    Eigen::VectorXcd psi = Eigen::VectorXcd::Ones(1);
    for (int k = 0; k < n; ++k) {
        const double t = k % 2 ? theta2 : theta1;
        Eigen::VectorXcd site(2);
        site << std::cos(t / 2), std::sin(t / 2);
        Eigen::VectorXcd next(psi.size() * 2);
        for (long i = 0; i < psi.size(); ++i) next.segment(2 * i, 2) = psi(i) * site;
        psi = next;
    }
    const Eigen::VectorXcd hpsi = h * psi;
    const double mean = psi.dot(hpsi).real();
    return (hpsi.squaredNorm() - mean * mean) / n;
}

double katsura_ising_c(double B, double T)
{
    check_temperature(T);
    auto integrand = [&](double w) {
        const double f2 = 1 - 2 * B * std::cos(w) + B * B;
        const double c = std::cosh(std::sqrt(f2) / T);
        return f2 / (c * c);
    };
    return integrate_adaptive(integrand, 0.0, M_PI, 1e-12) / (M_PI * T * T);
}

KatsuraXX katsura_xx(double K, double L)
{
    // f = |L - 2K cos w|; f tanh f and tanh(f) sign(.) are smooth in the signed form
    KatsuraXX r;
    r.U_over_T = -integrate_adaptive(
                     [&](double w) {
                         const double x = L - 2 * K * std::cos(w);
                         return x * std::tanh(x);
                     },
                     0.0, M_PI, 1e-11) /
                 M_PI;
    r.M_bar = -integrate_adaptive([&](double w) { return std::tanh(L - 2 * K * std::cos(w)); }, 0.0, M_PI, 1e-11) /
              M_PI;
    return r;
}

WitnessReport witness_bvz_dimer(double chi_per_spin, double T)
{
    if (!(T > 0)) throw DomainError("temperature must be positive");
    WitnessReport r;
    r.quantity = chi_per_spin;
    r.threshold = 1.0 / (6.0 * T);
    r.entangled = chi_per_spin < r.threshold;
    r.note = "susceptibility per spin along one axis, natural units";
    return r;
}

} // namespace bellforge
