#include "bellforge/qstate.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include <unsupported/Eigen/KroneckerProduct>

namespace bellforge {

namespace {

int product_of(const std::vector<int>& dims)
{
    long long p = 1;
    for (int d : dims) {
        if (d <= 0) throw DimensionError("factor dimensions must be positive");
        p *= d;
        if (p > (1LL << 30)) throw DimensionError("total dimension too large");
    }
    return static_cast<int>(p);
}

/** Mixed-radix digits of a basis index, most significant factor first. */
std::vector<int> digits_of(int index, const std::vector<int>& dims)
{
    std::vector<int> out(dims.size());
    for (int k = static_cast<int>(dims.size()) - 1; k >= 0; --k) {
        out[k] = index % dims[k];
        index /= dims[k];
    }
    return out;
}

int index_of(const std::vector<int>& digits, const std::vector<int>& dims)
{
    int index = 0;
    for (std::size_t k = 0; k < dims.size(); ++k) index = index * dims[k] + digits[k];
    return index;
}

template <class Real>
Eigen::Matrix<Real, Eigen::Dynamic, 1> hermitian_eigenvalues(const CMatrix<Real>& m)
{
    Eigen::SelfAdjointEigenSolver<CMatrix<Real>> es(m, Eigen::EigenvaluesOnly);
    return es.eigenvalues();
}

/** Phase picked up by basis bit b under sigma_k (column b of the Pauli matrix). */
template <class Real>
std::complex<Real> pauli_phase(int k, int b)
{
    using C = std::complex<Real>;
    switch (k) {
    case 2: return b == 0 ? C(0, 1) : C(0, -1);
    case 3: return b == 0 ? C(1) : C(-1);
    default: return C(1);
    }
}

} // namespace

// ---- DensityOperator ----

template <class Real>
BasicDensityOperator<Real>::BasicDensityOperator(Matrix matrix, std::vector<int> factor_dims,
                                                 NoCheck)
    : matrix_(std::move(matrix)), factor_dims_(std::move(factor_dims))
{
    if (matrix_.rows() != matrix_.cols()) throw DimensionError("density matrix must be square");
    if (product_of(factor_dims_) != matrix_.rows())
        throw DimensionError("factor dimensions do not multiply to the matrix size");
    const Real herm = (matrix_ - matrix_.adjoint()).cwiseAbs().maxCoeff();
    if (herm > Real(StateTolerance::hermitian))
        throw DomainError("density matrix is not Hermitian (deviation " +
                          std::to_string(static_cast<double>(herm)) + ")");
    const Real tr_err = std::abs(matrix_.trace() - std::complex<Real>(1));
    if (tr_err > Real(StateTolerance::trace))
        throw DomainError("density matrix trace differs from 1 by " +
                          std::to_string(static_cast<double>(tr_err)));
    matrix_ = (Real(0.5) * (matrix_ + matrix_.adjoint())).eval();
}

template <class Real>
BasicDensityOperator<Real>::BasicDensityOperator(Matrix matrix, std::vector<int> factor_dims)
    : BasicDensityOperator(std::move(matrix), std::move(factor_dims), NoCheck{})
{
    const Real lo = min_eigenvalue();
    if (lo < Real(StateTolerance::min_eigenvalue))
        throw DomainError("density matrix has negative eigenvalue " +
                          std::to_string(static_cast<double>(lo)));
}

template <class Real>
BasicDensityOperator<Real>::BasicDensityOperator(Matrix matrix)
    : BasicDensityOperator(matrix, std::vector<int>{static_cast<int>(matrix.rows())})
{
}

template <class Real>
BasicDensityOperator<Real> BasicDensityOperator<Real>::unchecked(Matrix matrix,
                                                                 std::vector<int> factor_dims)
{
    return BasicDensityOperator(std::move(matrix), std::move(factor_dims), NoCheck{});
}

template <class Real>
Real BasicDensityOperator<Real>::min_eigenvalue() const
{
    return hermitian_eigenvalues<Real>(matrix_).minCoeff();
}

// ---- PureState ----

template <class Real>
BasicPureState<Real>::BasicPureState(Vector amplitudes, std::vector<int> factor_dims)
    : amplitudes_(std::move(amplitudes)), factor_dims_(std::move(factor_dims))
{
    if (product_of(factor_dims_) != amplitudes_.size())
        throw DimensionError("factor dimensions do not multiply to the vector size");
    if (std::abs(amplitudes_.norm() - Real(1)) > Real(StateTolerance::norm))
        throw DomainError("state vector is not normalised");
}

template <class Real>
BasicDensityOperator<Real> BasicPureState<Real>::density() const
{
    return BasicDensityOperator<Real>(amplitudes_ * amplitudes_.adjoint(), factor_dims_);
}

// ---- CorrelationTensor ----

template <class Real>
BasicCorrelationTensor<Real>::BasicCorrelationTensor(int n_parties) : n_parties_(n_parties)
{
    if (n_parties < 1 || n_parties > 10) throw DomainError("unsupported number of parties");
    entries_.assign(std::size_t(1) << (2 * n_parties), Real(0));
}

template <class Real>
std::size_t BasicCorrelationTensor<Real>::flat(const std::vector<int>& index) const
{
    if (static_cast<int>(index.size()) != n_parties_)
        throw DimensionError("tensor index has wrong arity");
    std::size_t f = 0;
    for (int a : index) {
        if (a < 0 || a > 3) throw DomainError("tensor index out of range");
        f = 4 * f + static_cast<std::size_t>(a);
    }
    return f;
}

template <class Real>
std::vector<int> BasicCorrelationTensor<Real>::unflat(std::size_t i) const
{
    std::vector<int> idx(n_parties_);
    for (int k = n_parties_ - 1; k >= 0; --k) {
        idx[k] = static_cast<int>(i % 4);
        i /= 4;
    }
    return idx;
}

// ---- operators ----

template <class Real>
CMatrix<Real> pauli(int k)
{
    using C = std::complex<Real>;
    CMatrix<Real> m(2, 2);
    switch (k) {
    case 0: m << C(1), C(0), C(0), C(1); break;
    case 1: m << C(0), C(1), C(1), C(0); break;
    case 2: m << C(0), C(0, -1), C(0, 1), C(0); break;
    case 3: m << C(1), C(0), C(0), C(-1); break;
    default: throw DomainError("Pauli index must be 0..3");
    }
    return m;
}

template <class Real>
std::array<CMatrix<Real>, 3> spin_operators(double l)
{
    const double twice = 2.0 * l;
    if (l <= 0 || std::abs(twice - std::round(twice)) > 1e-12)
        throw DomainError("spin magnitude must be a positive half-integer");
    const int d = static_cast<int>(std::round(twice)) + 1;
    CMatrix<Real> raise = CMatrix<Real>::Zero(d, d);
    for (int i = 1; i < d; ++i) {
        const Real m = Real(l) - Real(i); // basis i carries m = l - i
        raise(i - 1, i) = std::sqrt(Real(l) * Real(l + 1) - m * (m + 1));
    }
    const CMatrix<Real> lower = raise.adjoint();
    std::array<CMatrix<Real>, 3> s;
    s[0] = Real(0.5) * (raise + lower);
    s[1] = std::complex<Real>(0, Real(-0.5)) * (raise - lower);
    s[2] = CMatrix<Real>::Zero(d, d);
    for (int i = 0; i < d; ++i) s[2](i, i) = Real(l) - Real(i);
    return s;
}

template <class Real>
CMatrix<Real> kron_all(const std::vector<CMatrix<Real>>& factors)
{
    CMatrix<Real> out = CMatrix<Real>::Identity(1, 1);
    for (const auto& f : factors) out = Eigen::kroneckerProduct(out, f).eval();
    return out;
}

template <class Real>
CMatrix<Real> embed(const CMatrix<Real>& op, int site, const std::vector<int>& factor_dims)
{
    if (site < 0 || site >= static_cast<int>(factor_dims.size()))
        throw DimensionError("site out of range");
    if (op.rows() != factor_dims[site]) throw DimensionError("operator does not fit the site");
    int left = 1, right = 1;
    for (int k = 0; k < site; ++k) left *= factor_dims[k];
    for (std::size_t k = site + 1; k < factor_dims.size(); ++k) right *= factor_dims[k];
    const CMatrix<Real> a = Eigen::kroneckerProduct(CMatrix<Real>::Identity(left, left), op);
    return Eigen::kroneckerProduct(a, CMatrix<Real>::Identity(right, right));
}

template <class Real>
std::complex<Real> expectation(const BasicDensityOperator<Real>& rho, const CMatrix<Real>& op)
{
    if (op.rows() != rho.dim() || op.cols() != rho.dim())
        throw DimensionError("operator dimension mismatch");
    return (rho.matrix().transpose().cwiseProduct(op)).sum();
}

// ---- correlation tensor ----

template <class Real>
BasicCorrelationTensor<Real> correlation_tensor(const BasicDensityOperator<Real>& rho)
{
    for (int d : rho.factor_dims())
        if (d != 2) throw DimensionError("correlation tensor needs qubit factors");
    const int n = rho.n_factors();
    const int dim = rho.dim();
    BasicCorrelationTensor<Real> t(n);
    const auto& m = rho.matrix();
    for (std::size_t s = 0; s < t.size(); ++s) {
        const auto idx = t.unflat(s);
        int flip = 0;
        for (int k = 0; k < n; ++k)
            if (idx[k] == 1 || idx[k] == 2) flip |= 1 << (n - 1 - k);
        std::complex<Real> acc(0);
        for (int j = 0; j < dim; ++j) {
            std::complex<Real> phase(1);
            for (int k = 0; k < n; ++k) phase *= pauli_phase<Real>(idx[k], (j >> (n - 1 - k)) & 1);
            acc += m(j, j ^ flip) * phase;
        }
        t[s] = acc.real();
    }
    return t;
}

template <class Real>
TensorReconstruction<Real> state_from_tensor(const BasicCorrelationTensor<Real>& t)
{
    const int n = t.n_parties();
    const int dim = 1 << n;
    if (std::abs(t[0] - Real(1)) > Real(1e-12))
        throw DomainError("tensor entry (0..0) must equal 1");
    CMatrix<Real> m = CMatrix<Real>::Zero(dim, dim);
    const Real scale = Real(1) / Real(dim);
    for (std::size_t s = 0; s < t.size(); ++s) {
        if (t[s] == Real(0)) continue;
        const auto idx = t.unflat(s);
        int flip = 0;
        for (int k = 0; k < n; ++k)
            if (idx[k] == 1 || idx[k] == 2) flip |= 1 << (n - 1 - k);
        for (int j = 0; j < dim; ++j) {
            std::complex<Real> phase(1);
            for (int k = 0; k < n; ++k) phase *= pauli_phase<Real>(idx[k], (j >> (n - 1 - k)) & 1);
            m(j ^ flip, j) += scale * t[s] * phase;
        }
    }
    auto state = BasicDensityOperator<Real>::unchecked(std::move(m), std::vector<int>(n, 2));
    const Real lo = state.min_eigenvalue();
    return {std::move(state), lo >= Real(StateTolerance::min_eigenvalue), lo};
}

// ---- partial operations ----

template <class Real>
BasicDensityOperator<Real> partial_trace(const BasicDensityOperator<Real>& rho,
                                         const std::vector<int>& keep)
{
    const auto& dims = rho.factor_dims();
    const int nf = rho.n_factors();
    if (keep.empty()) throw DomainError("partial_trace: keep set is empty");
    std::vector<int> kept = keep;
    std::sort(kept.begin(), kept.end());
    if (std::adjacent_find(kept.begin(), kept.end()) != kept.end())
        throw DomainError("partial_trace: duplicate factor in keep set");
    if (kept.front() < 0 || kept.back() >= nf)
        throw DomainError("partial_trace: factor index out of range");

    std::vector<int> traced;
    for (int k = 0; k < nf; ++k)
        if (!std::binary_search(kept.begin(), kept.end(), k)) traced.push_back(k);
    std::vector<int> kdims, tdims;
    for (int k : kept) kdims.push_back(dims[k]);
    for (int k : traced) tdims.push_back(dims[k]);
    const int dk = std::accumulate(kdims.begin(), kdims.end(), 1, std::multiplies<>());
    const int dt = std::accumulate(tdims.begin(), tdims.end(), 1, std::multiplies<>());

    // full index for each (kept, traced) pair
    std::vector<int> full(static_cast<std::size_t>(dk) * dt);
    std::vector<int> digits(nf);
    for (int a = 0; a < dk; ++a) {
        const auto da = digits_of(a, kdims);
        for (int c = 0; c < dt; ++c) {
            const auto dc = digits_of(c, tdims);
            for (std::size_t q = 0; q < kept.size(); ++q) digits[kept[q]] = da[q];
            for (std::size_t q = 0; q < traced.size(); ++q) digits[traced[q]] = dc[q];
            full[static_cast<std::size_t>(a) * dt + c] = index_of(digits, dims);
        }
    }
    CMatrix<Real> out = CMatrix<Real>::Zero(dk, dk);
    const auto& m = rho.matrix();
    for (int a = 0; a < dk; ++a)
        for (int b = 0; b < dk; ++b) {
            std::complex<Real> acc(0);
            for (int c = 0; c < dt; ++c)
                acc += m(full[static_cast<std::size_t>(a) * dt + c],
                         full[static_cast<std::size_t>(b) * dt + c]);
            out(a, b) = acc;
        }
    return BasicDensityOperator<Real>::unchecked(std::move(out), kdims);
}

template <class Real>
CMatrix<Real> partial_transpose(const BasicDensityOperator<Real>& rho, int part)
{
    const auto& dims = rho.factor_dims();
    if (part < 0 || part >= rho.n_factors()) throw DomainError("partial_transpose: bad factor");
    int stride = 1;
    for (int k = part + 1; k < rho.n_factors(); ++k) stride *= dims[k];
    const int d = dims[part];
    const int dim = rho.dim();
    CMatrix<Real> out(dim, dim);
    const auto& m = rho.matrix();
    for (int i = 0; i < dim; ++i) {
        const int di = (i / stride) % d;
        for (int j = 0; j < dim; ++j) {
            const int dj = (j / stride) % d;
            const int i2 = i + (dj - di) * stride;
            const int j2 = j + (di - dj) * stride;
            out(i, j) = m(i2, j2);
        }
    }
    return out;
}

template <class Real>
Real partial_transpose_min_eig(const BasicDensityOperator<Real>& rho, int part)
{
    return hermitian_eigenvalues<Real>(partial_transpose(rho, part)).minCoeff();
}

// ---- measures ----

namespace {

template <class Real>
Real clamp_eigenvalue(Real v)
{
    if (v < Real(0) && v >= Real(StateTolerance::min_eigenvalue)) return Real(0);
    return v;
}

} // namespace

template <class Real>
Real concurrence(const BasicDensityOperator<Real>& rho)
{
    if (rho.dim() != 4 || rho.n_factors() != 2) throw DimensionError("concurrence needs 2 qubits");
    // rho = A A^dag with noise-level weights dropped; the lambdas are the singular
    // values of A^T (yy) A, which stay accurate for nearly pure states
    Eigen::SelfAdjointEigenSolver<CMatrix<Real>> es(rho.matrix());
    Eigen::Matrix<Real, Eigen::Dynamic, 1> ev = es.eigenvalues();
    const Real floor = Real(64) * std::numeric_limits<Real>::epsilon();
    for (Eigen::Index i = 0; i < ev.size(); ++i) ev(i) = ev(i) > floor ? std::sqrt(ev(i)) : Real(0);
    const CMatrix<Real> a = es.eigenvectors() * ev.asDiagonal();
    const CMatrix<Real> yy = kron_all<Real>({pauli<Real>(2), pauli<Real>(2)});
    const CMatrix<Real> tau = a.transpose() * yy * a;
    Eigen::JacobiSVD<CMatrix<Real>> svd(tau);
    std::vector<Real> s(svd.singularValues().data(), svd.singularValues().data() + 4);
    std::sort(s.begin(), s.end(), std::greater<>());
    return std::max(Real(0), s[0] - s[1] - s[2] - s[3]);
}

template <class Real>
SchmidtForm<Real> schmidt_decompose(const BasicPureState<Real>& psi)
{
    if (psi.dim() != 4 || psi.factor_dims().size() != 2)
        throw DimensionError("schmidt_decompose expects two qubits");
    CMatrix<Real> c(2, 2);
    c << psi.amplitudes()(0), psi.amplitudes()(1), psi.amplitudes()(2), psi.amplitudes()(3);
    Eigen::JacobiSVD<CMatrix<Real>> svd(c, Eigen::ComputeFullU | Eigen::ComputeFullV);
    const auto& sv = svd.singularValues();
    SchmidtForm<Real> out;
    out.alpha = std::atan2(sv(1), sv(0));
    out.basis_a = svd.matrixU();
    out.basis_b = svd.matrixV().conjugate();
    out.global_phase = std::complex<Real>(1);
    return out;
}

template <class Real>
BasicLinearMapMatrix<Real> jamiolkowski_operator(
    const std::function<CMatrix<Real>(const CMatrix<Real>&)>& map, int d_in, int d_out)
{
    if (d_in <= 0 || d_out <= 0) throw DimensionError("map dimensions must be positive");
    BasicLinearMapMatrix<Real> w{d_in, d_out, CMatrix<Real>::Zero(d_in * d_out, d_in * d_out)};
    for (int i = 0; i < d_in; ++i)
        for (int j = 0; j < d_in; ++j) {
            CMatrix<Real> unit = CMatrix<Real>::Zero(d_in, d_in);
            unit(i, j) = Real(1);
            const CMatrix<Real> image = map(unit);
            if (image.rows() != d_out || image.cols() != d_out)
                throw DimensionError("map output has wrong dimension");
            w.W.block(i * d_out, j * d_out, d_out, d_out) = image;
        }
    return w;
}

template <class Real>
BasicDensityOperator<Real> jamiolkowski_apply(const BasicLinearMapMatrix<Real>& w,
                                              const BasicDensityOperator<Real>& rho_in)
{
    if (rho_in.dim() != w.d_in) throw DimensionError("input state does not match the map");
    CMatrix<Real> out = CMatrix<Real>::Zero(w.d_out, w.d_out);
    const auto& r = rho_in.matrix();
    for (int i = 0; i < w.d_in; ++i)
        for (int j = 0; j < w.d_in; ++j)
            out += r(i, j) * w.W.block(i * w.d_out, j * w.d_out, w.d_out, w.d_out);
    return BasicDensityOperator<Real>(std::move(out), std::vector<int>{w.d_out});
}

template <class Real>
Real von_neumann_entropy(const BasicDensityOperator<Real>& rho)
{
    const auto ev = hermitian_eigenvalues<Real>(rho.matrix());
    Real s(0);
    for (Eigen::Index i = 0; i < ev.size(); ++i) {
        const Real p = clamp_eigenvalue(ev(i));
        if (p < Real(0)) throw DomainError("negative eigenvalue in entropy");
        if (p > Real(0)) s -= p * std::log2(p);
    }
    return s;
}

#define BELLFORGE_QSTATE_INSTANTIATE(R)                                                       \
    template class BasicDensityOperator<R>;                                                   \
    template class BasicPureState<R>;                                                         \
    template class BasicCorrelationTensor<R>;                                                 \
    template CMatrix<R> pauli<R>(int);                                                        \
    template std::array<CMatrix<R>, 3> spin_operators<R>(double);                             \
    template CMatrix<R> kron_all<R>(const std::vector<CMatrix<R>>&);                          \
    template CMatrix<R> embed<R>(const CMatrix<R>&, int, const std::vector<int>&);            \
    template std::complex<R> expectation<R>(const BasicDensityOperator<R>&, const CMatrix<R>&); \
    template BasicCorrelationTensor<R> correlation_tensor<R>(const BasicDensityOperator<R>&); \
    template TensorReconstruction<R> state_from_tensor<R>(const BasicCorrelationTensor<R>&);  \
    template BasicDensityOperator<R> partial_trace<R>(const BasicDensityOperator<R>&,         \
                                                      const std::vector<int>&);               \
    template CMatrix<R> partial_transpose<R>(const BasicDensityOperator<R>&, int);            \
    template R partial_transpose_min_eig<R>(const BasicDensityOperator<R>&, int);             \
    template R concurrence<R>(const BasicDensityOperator<R>&);                                \
    template SchmidtForm<R> schmidt_decompose<R>(const BasicPureState<R>&);                   \
    template BasicLinearMapMatrix<R> jamiolkowski_operator<R>(                                \
        const std::function<CMatrix<R>(const CMatrix<R>&)>&, int, int);                       \
    template BasicDensityOperator<R> jamiolkowski_apply<R>(const BasicLinearMapMatrix<R>&,    \
                                                           const BasicDensityOperator<R>&);   \
    template R von_neumann_entropy<R>(const BasicDensityOperator<R>&);

BELLFORGE_QSTATE_INSTANTIATE(double)
BELLFORGE_QSTATE_INSTANTIATE(long double)
#undef BELLFORGE_QSTATE_INSTANTIATE

// ---- state library ----

PureState singlet()
{
    Eigen::VectorXcd v = Eigen::VectorXcd::Zero(4);
    v(1) = 1.0 / std::sqrt(2.0);
    v(2) = -1.0 / std::sqrt(2.0);
    return PureState(v, {2, 2});
}

PureState ghz_state(int n, int sign)
{
    if (n < 1) throw DomainError("ghz_state needs n >= 1");
    if (sign != 1 && sign != -1) throw DomainError("ghz_state sign must be +1 or -1");
    Eigen::VectorXcd v = Eigen::VectorXcd::Zero(1 << n);
    v(0) = 1.0 / std::sqrt(2.0);
    v((1 << n) - 1) = sign / std::sqrt(2.0);
    return PureState(v, std::vector<int>(n, 2));
}

PureState generalized_ghz(int n, double alpha)
{
    if (n < 1) throw DomainError("generalized_ghz needs n >= 1");
    Eigen::VectorXcd v = Eigen::VectorXcd::Zero(1 << n);
    v(0) = std::cos(alpha);
    v((1 << n) - 1) += std::sin(alpha);
    return PureState(v, std::vector<int>(n, 2));
}

PureState w_state(int n)
{
    if (n < 2) throw DomainError("w_state needs n >= 2");
    Eigen::VectorXcd v = Eigen::VectorXcd::Zero(1 << n);
    for (int k = 0; k < n; ++k) v(1 << k) = 1.0 / std::sqrt(static_cast<double>(n));
    return PureState(v, std::vector<int>(n, 2));
}

PureState spin_singlet(double l)
{
    const int d = static_cast<int>(std::round(2 * l)) + 1;
    if (l <= 0 || std::abs(2 * l - (d - 1)) > 1e-12) throw DomainError("bad spin magnitude");
    Eigen::VectorXcd v = Eigen::VectorXcd::Zero(d * d);
    for (int i = 0; i < d; ++i) {
        // basis i carries m = l - i, its partner -m sits at d - 1 - i
        const double sign = (i % 2 == 0) ? 1.0 : -1.0;
        v(i * d + (d - 1 - i)) = sign / std::sqrt(static_cast<double>(d));
    }
    return PureState(v, {d, d});
}

DensityOperator with_white_noise(const DensityOperator& rho, double visibility)
{
    if (visibility < 0 || visibility > 1) throw DomainError("visibility must lie in [0,1]");
    const int d = rho.dim();
    Eigen::MatrixXcd m = visibility * rho.matrix() +
                         (1 - visibility) / d * Eigen::MatrixXcd::Identity(d, d);
    return DensityOperator(std::move(m), rho.factor_dims());
}

DensityOperator product_state(const std::vector<Eigen::Vector3d>& bloch)
{
    std::vector<Eigen::MatrixXcd> f;
    for (const auto& r : bloch) {
        if (r.norm() > 1 + 1e-12) throw DomainError("Bloch vector longer than 1");
        f.push_back(0.5 * (pauli<double>(0) + r(0) * pauli<double>(1) + r(1) * pauli<double>(2) +
                           r(2) * pauli<double>(3)));
    }
    return DensityOperator(kron_all<double>(f), std::vector<int>(bloch.size(), 2));
}

PureState random_pure_state(const std::vector<int>& factor_dims, std::mt19937_64& rng)
{
    const int d = product_of(factor_dims);
    std::normal_distribution<double> g;
    Eigen::VectorXcd v(d);
    for (int i = 0; i < d; ++i) v(i) = {g(rng), g(rng)};
    v.normalize();
    return PureState(v, factor_dims);
}

DensityOperator random_density(const std::vector<int>& factor_dims, std::mt19937_64& rng)
{
    const int d = product_of(factor_dims);
    std::normal_distribution<double> g;
    Eigen::MatrixXcd a(d, d);
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j) a(i, j) = {g(rng), g(rng)};
    Eigen::MatrixXcd m = a * a.adjoint();
    m /= m.trace().real();
    return DensityOperator(std::move(m), factor_dims);
}

DensityOperator random_separable(const std::vector<int>& factor_dims, int terms,
                                 std::mt19937_64& rng)
{
    if (terms < 1) throw DomainError("random_separable needs at least one term");
    const int d = product_of(factor_dims);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(d, d);
    double total = 0;
    for (int t = 0; t < terms; ++t) {
        std::vector<Eigen::MatrixXcd> f;
        for (int dk : factor_dims) {
            const auto psi = random_pure_state({dk}, rng);
            f.push_back(psi.amplitudes() * psi.amplitudes().adjoint());
        }
        const double w = u(rng) + 1e-3;
        m += w * kron_all<double>(f);
        total += w;
    }
    m /= total;
    return DensityOperator(std::move(m), factor_dims);
}

Eigen::MatrixXcd random_unitary(int dim, std::mt19937_64& rng)
{
    std::normal_distribution<double> g;
    Eigen::MatrixXcd a(dim, dim);
    for (int i = 0; i < dim; ++i)
        for (int j = 0; j < dim; ++j) a(i, j) = {g(rng), g(rng)};
    Eigen::HouseholderQR<Eigen::MatrixXcd> qr(a);
    Eigen::MatrixXcd q = qr.householderQ();
    const Eigen::MatrixXcd r = qr.matrixQR().triangularView<Eigen::Upper>();
    for (int i = 0; i < dim; ++i) q.col(i) *= std::polar(1.0, std::arg(r(i, i)));
    return q;
}

} // namespace bellforge
