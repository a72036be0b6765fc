#ifndef BELLFORGE_QSTATE_HPP
#define BELLFORGE_QSTATE_HPP

#include <array>
#include <cstdint>
#include <functional>
#include <random>
#include <vector>

#include <Eigen/Dense>

#include "bellforge/types.hpp"

namespace bellforge {

/** Tolerances pinned for the state invariants. */
struct StateTolerance {
    static constexpr double hermitian = 1e-12;
    static constexpr double trace = 1e-12;
    static constexpr double min_eigenvalue = -1e-10;
    static constexpr double norm = 1e-12;
};

/**
 * Unit-trace, Hermitian, positive semidefinite operator on a tensor product
 * of factors with the given dimensions. Party 0 is the most significant factor.
 */
template <class Real>
class BasicDensityOperator {
public:
    using Matrix = CMatrix<Real>;

    /** Validates the invariants; throws DomainError on violation. */
    BasicDensityOperator(Matrix matrix, std::vector<int> factor_dims);

    /** Single-factor operator. */
    explicit BasicDensityOperator(Matrix matrix);

    /** Skips positivity (used for reconstructions of possibly unphysical tensors). */
    static BasicDensityOperator unchecked(Matrix matrix, std::vector<int> factor_dims);

    const Matrix& matrix() const { return matrix_; }
    int dim() const { return static_cast<int>(matrix_.rows()); }
    const std::vector<int>& factor_dims() const { return factor_dims_; }
    int n_factors() const { return static_cast<int>(factor_dims_.size()); }

    /** Smallest eigenvalue of the matrix. */
    Real min_eigenvalue() const;

private:
    struct NoCheck {};
    BasicDensityOperator(Matrix matrix, std::vector<int> factor_dims, NoCheck);
    Matrix matrix_;
    std::vector<int> factor_dims_;
};

/** Normalised state vector on a tensor product of factors. */
template <class Real>
class BasicPureState {
public:
    using Vector = CVector<Real>;

    BasicPureState(Vector amplitudes, std::vector<int> factor_dims);

    const Vector& amplitudes() const { return amplitudes_; }
    int dim() const { return static_cast<int>(amplitudes_.size()); }
    const std::vector<int>& factor_dims() const { return factor_dims_; }

    BasicDensityOperator<Real> density() const;

private:
    Vector amplitudes_;
    std::vector<int> factor_dims_;
};

/**
 * Real tensor over {0,1,2,3}^n, flattened with party 0 most significant.
 * Index 0 stands for the identity, 1..3 for the Pauli matrices.
 */
template <class Real>
class BasicCorrelationTensor {
public:
    explicit BasicCorrelationTensor(int n_parties);

    int n_parties() const { return n_parties_; }
    std::size_t size() const { return entries_.size(); }

    Real operator()(const std::vector<int>& index) const { return entries_[flat(index)]; }
    Real& operator()(const std::vector<int>& index) { return entries_[flat(index)]; }
    Real operator[](std::size_t i) const { return entries_[i]; }
    Real& operator[](std::size_t i) { return entries_[i]; }

    const std::vector<Real>& entries() const { return entries_; }

    std::size_t flat(const std::vector<int>& index) const;
    std::vector<int> unflat(std::size_t i) const;

private:
    int n_parties_;
    std::vector<Real> entries_;
};

/** Choi-type matrix of a linear map from d_in to d_out dimensional operators. */
template <class Real>
struct BasicLinearMapMatrix {
    int d_in = 0;
    int d_out = 0;
    CMatrix<Real> W;
};

/** Reconstruction from a correlation tensor together with its positivity report. */
template <class Real>
struct TensorReconstruction {
    BasicDensityOperator<Real> state;
    bool positive;
    Real min_eigenvalue;
};

/** Schmidt form cos(alpha)|0'0'> + sin(alpha)|1'1'>. */
template <class Real>
struct SchmidtForm {
    Real alpha;
    CMatrix<Real> basis_a; ///< columns |0'>, |1'> of the first party
    CMatrix<Real> basis_b; ///< columns |0'>, |1'> of the second party
    std::complex<Real> global_phase;
};

using DensityOperator = BasicDensityOperator<double>;
using PureState = BasicPureState<double>;
using CorrelationTensor = BasicCorrelationTensor<double>;
using LinearMapMatrix = BasicLinearMapMatrix<double>;

/** Pauli matrix sigma_k, k = 0 (identity), 1, 2, 3. */
template <class Real = double>
CMatrix<Real> pauli(int k);

/** Spin operators (S_x, S_y, S_z) for spin magnitude l (half-integer). */
template <class Real = double>
std::array<CMatrix<Real>, 3> spin_operators(double l);

/** Kronecker product of a sequence of matrices. */
template <class Real>
CMatrix<Real> kron_all(const std::vector<CMatrix<Real>>& factors);

/** Operator acting as op on factor `site` and identity elsewhere. */
template <class Real>
CMatrix<Real> embed(const CMatrix<Real>& op, int site, const std::vector<int>& factor_dims);

/** Tr(rho * op). */
template <class Real>
std::complex<Real> expectation(const BasicDensityOperator<Real>& rho, const CMatrix<Real>& op);

template <class Real>
BasicCorrelationTensor<Real> correlation_tensor(const BasicDensityOperator<Real>& rho);

template <class Real>
TensorReconstruction<Real> state_from_tensor(const BasicCorrelationTensor<Real>& t);

template <class Real>
BasicDensityOperator<Real> partial_trace(const BasicDensityOperator<Real>& rho,
                                         const std::vector<int>& keep);

/** Partial transpose on the factor `part`. */
template <class Real>
CMatrix<Real> partial_transpose(const BasicDensityOperator<Real>& rho, int part);

template <class Real>
Real partial_transpose_min_eig(const BasicDensityOperator<Real>& rho, int part);

/** Wootters concurrence of a two-qubit state. */
template <class Real>
Real concurrence(const BasicDensityOperator<Real>& rho);

template <class Real>
SchmidtForm<Real> schmidt_decompose(const BasicPureState<Real>& psi);

/** W = sum_ij |i><j| (x) map(|i><j|). */
template <class Real>
BasicLinearMapMatrix<Real> jamiolkowski_operator(
    const std::function<CMatrix<Real>(const CMatrix<Real>&)>& map, int d_in, int d_out);

/** map(rho) = Tr_in[(rho^T (x) 1) W]. */
template <class Real>
BasicDensityOperator<Real> jamiolkowski_apply(const BasicLinearMapMatrix<Real>& w,
                                              const BasicDensityOperator<Real>& rho_in);

/** Entropy in bits. */
template <class Real>
Real von_neumann_entropy(const BasicDensityOperator<Real>& rho);

// ---- state library (double precision) ----

/** (|01> - |10>)/sqrt2. */
PureState singlet();

/** (|0..0> + sign |1..1>)/sqrt2. */
PureState ghz_state(int n, int sign = +1);

/** cos(a)|0..0> + sin(a)|1..1>. */
PureState generalized_ghz(int n, double alpha);

/** Uniform superposition of single excitations, normalised by 1/sqrt(N). */
PureState w_state(int n);

/** Two spin-l singlet sum_m (-1)^(l-m) |m,-m> / sqrt(2l+1). */
PureState spin_singlet(double l);

/** V rho + (1 - V) identity / dim. */
DensityOperator with_white_noise(const DensityOperator& rho, double visibility);

/** Product of qubit states given by Bloch vectors. */
DensityOperator product_state(const std::vector<Eigen::Vector3d>& bloch);

PureState random_pure_state(const std::vector<int>& factor_dims, std::mt19937_64& rng);

/** Random mixed state from a Ginibre matrix of full rank. */
DensityOperator random_density(const std::vector<int>& factor_dims, std::mt19937_64& rng);

/** Convex combination of up to `terms` random product states. */
DensityOperator random_separable(const std::vector<int>& factor_dims, int terms,
                                 std::mt19937_64& rng);

/** Haar-random unitary. */
Eigen::MatrixXcd random_unitary(int dim, std::mt19937_64& rng);

#define BELLFORGE_QSTATE_EXTERN(R)                                                            \
    extern template class BasicDensityOperator<R>;                                            \
    extern template class BasicPureState<R>;                                                  \
    extern template class BasicCorrelationTensor<R>;                                          \
    extern template CMatrix<R> pauli<R>(int);                                                 \
    extern template std::array<CMatrix<R>, 3> spin_operators<R>(double);                      \
    extern template CMatrix<R> kron_all<R>(const std::vector<CMatrix<R>>&);                   \
    extern template CMatrix<R> embed<R>(const CMatrix<R>&, int, const std::vector<int>&);     \
    extern template std::complex<R> expectation<R>(const BasicDensityOperator<R>&,            \
                                                   const CMatrix<R>&);                        \
    extern template BasicCorrelationTensor<R> correlation_tensor<R>(                          \
        const BasicDensityOperator<R>&);                                                      \
    extern template TensorReconstruction<R> state_from_tensor<R>(                             \
        const BasicCorrelationTensor<R>&);                                                    \
    extern template BasicDensityOperator<R> partial_trace<R>(const BasicDensityOperator<R>&,  \
                                                             const std::vector<int>&);        \
    extern template CMatrix<R> partial_transpose<R>(const BasicDensityOperator<R>&, int);     \
    extern template R partial_transpose_min_eig<R>(const BasicDensityOperator<R>&, int);      \
    extern template R concurrence<R>(const BasicDensityOperator<R>&);                         \
    extern template SchmidtForm<R> schmidt_decompose<R>(const BasicPureState<R>&);            \
    extern template BasicLinearMapMatrix<R> jamiolkowski_operator<R>(                         \
        const std::function<CMatrix<R>(const CMatrix<R>&)>&, int, int);                       \
    extern template BasicDensityOperator<R> jamiolkowski_apply<R>(                            \
        const BasicLinearMapMatrix<R>&, const BasicDensityOperator<R>&);                      \
    extern template R von_neumann_entropy<R>(const BasicDensityOperator<R>&);

BELLFORGE_QSTATE_EXTERN(double)
BELLFORGE_QSTATE_EXTERN(long double)
#undef BELLFORGE_QSTATE_EXTERN

} // namespace bellforge

#endif // BELLFORGE_QSTATE_HPP
