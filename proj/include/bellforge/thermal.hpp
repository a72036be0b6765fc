#ifndef BELLFORGE_THERMAL_HPP
#define BELLFORGE_THERMAL_HPP

#include <string>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/Sparse>

#include "bellforge/qstate.hpp"

namespace bellforge {

/** Pauli convention uses sigma = 2S; spin convention uses S. */
enum class OperatorConvention { pauli, spin };

struct Edge {
    int i = 0;
    int j = 0;
    double J = 1.0;                                  ///< bilinear strength
    double Jq = 0.0;                                 ///< biquadratic strength
    Eigen::Vector3d axes = Eigen::Vector3d::Ones();  ///< per-axis weights of the bilinear term
};

struct SpinLattice {
    std::vector<double> spins; ///< magnitudes l_i
    std::vector<Edge> edges;
    Eigen::Vector3d field = Eigen::Vector3d::Zero();
    OperatorConvention convention = OperatorConvention::spin;
    std::string name;

    void validate() const;
    std::size_t dim() const;
    std::vector<int> local_dims() const;
    int n_sites() const { return static_cast<int>(spins.size()); }
    /** Every edge has equal weights on the three axes. */
    bool isotropic() const;
    double spin_sum() const;
};

constexpr std::size_t kMaxLatticeDim = 4096;

Eigen::SparseMatrix<std::complex<double>> build_hamiltonian_sparse(const SpinLattice& lat);
Eigen::MatrixXcd build_hamiltonian(const SpinLattice& lat);

/** Total spin component sum_i S_a^(i) (axis 0..2), scaled by the convention. */
Eigen::SparseMatrix<std::complex<double>> total_spin_sparse(const SpinLattice& lat, int axis,
                                                            OperatorConvention convention);

// ---- model factories ----

SpinLattice xxx_ring(int n, double J, double l);
SpinLattice xxz_ring(int n, double J, double J3, double B);
/** sign * sum sz sz + B sum sx, Pauli convention. */
SpinLattice ising_ring(int n, int sign, double B);
SpinLattice blbq_ring6(double a);
SpinLattice cube_center(double a);
SpinLattice octahedron_center(double a);
SpinLattice tetrahedron_center(double a);
/** Open spin-1/2 chain with alternating couplings J1 (even bonds) and J2 (odd bonds). */
SpinLattice dimer_chain(int n, double J1, double J2);
/** Open spin-1/2 chain in Pauli convention (odd N for the tripartite bound). */
SpinLattice xxx_chain(int n, double J);

/** Factory by name ("xxx_ring:8", "blbq_ring6", ...); parameter a for the a-models. */
SpinLattice model_by_name(const std::string& name, double a = 0.0);

/** JSON {sites, edges:[[i,j,J,Jq]...], field, anisotropy?, convention?}. */
SpinLattice lattice_from_json(const std::string& text);

// ---- spectra ----

struct SpectrumBlock {
    std::vector<int> basis; ///< computational basis states spanned by this block
    Eigen::VectorXd energies;
    Eigen::MatrixXcd vectors; ///< empty when only eigenvalues were requested
};

struct Spectrum {
    std::size_t dim = 0;
    std::vector<int> factor_dims;
    std::vector<SpectrumBlock> blocks;
    Eigen::VectorXd energies;                 ///< ascending, all blocks merged
    std::vector<std::pair<int, int>> origin;  ///< (block, column) of each sorted energy
    bool has_vectors = false;

    Eigen::VectorXcd eigenvector(std::size_t k) const;
    Eigen::MatrixXcd eigenvectors() const;
};

/**
 * Exact diagonalization. The Hamiltonian is split into connected components of its
 * sparsity graph; real blocks use the real symmetric solver.
 */
Spectrum diagonalize(const SpinLattice& lat, bool with_vectors = true);
Spectrum diagonalize(const Eigen::SparseMatrix<std::complex<double>>& h, std::vector<int> factor_dims,
                     bool with_vectors = true);

/** Per-eigenstate moments of the total spin (spin convention), in sorted-energy order. */
struct StateMoments {
    Eigen::MatrixXd mean;                ///< dim x 3: <k|M_a|k>
    std::vector<Eigen::Matrix3d> second; ///< Re <k|M_a M_b|k>
};

StateMoments magnetization_moments(const Spectrum& spec, const SpinLattice& lat);

struct Thermo {
    double log_Z = 0.0;
    double U = 0.0;
    double C = 0.0;
    Eigen::Vector3d M = Eigen::Vector3d::Zero(); ///< spin convention; zero without moments
};

/** Boltzmann weights p_k with the ground energy shifted out. */
Eigen::VectorXd boltzmann_weights(const Spectrum& spec, double T);

Thermo thermo(const Spectrum& spec, double T);
Thermo thermo(const Spectrum& spec, const StateMoments& moments, double T);

/** Gibbs state exp(-H/T)/Z. */
DensityOperator thermal_state(const Spectrum& spec, double T);

/** Tr(rho_T X) for a sparse observable X on the same space. */
double thermal_expectation(const Spectrum& spec, const Eigen::SparseMatrix<std::complex<double>>& x,
                           double T);

// ---- susceptibility ----

enum class SusceptibilityForm { variance, kubo };

/** Susceptibility along a unit direction, spin convention. */
double susceptibility(const Spectrum& spec, const SpinLattice& lat, double T,
                      const Eigen::Vector3d& direction, SusceptibilityForm form);
double susceptibility(const Spectrum& spec, const StateMoments& moments, double T,
                      const Eigen::Vector3d& direction);

struct WitnessReport {
    double quantity = 0.0;
    double threshold = 0.0;
    bool entangled = false;
    std::string note;
};

/** T (chi_x + chi_y + chi_z) at zero field against sum_i l_i. */
WitnessReport witness_susceptibility(const SpinLattice& lat, double T);
WitnessReport witness_susceptibility(const SpinLattice& lat, const Spectrum& spec,
                                     const StateMoments& moments, double T);
/** Same quantity in the zero-temperature limit: average over the degenerate ground space. */
WitnessReport witness_susceptibility_ground(const SpinLattice& lat, const Spectrum& spec,
                                            const StateMoments& moments, double tol = 1e-9);

enum class EnergyLevel { bipartite, tripartite, bifactorisable };

/** Nearest-neighbour sigma.sigma average of a spin-1/2 Heisenberg model. */
WitnessReport witness_energy(const SpinLattice& lat, double T, EnergyLevel level);
WitnessReport witness_energy(const SpinLattice& lat, const DensityOperator& rho, EnergyLevel level);
/** Ground-state (T -> 0) version. */
WitnessReport witness_energy_ground(const SpinLattice& lat, EnergyLevel level);

struct HeatCapacityClass {
    enum class Kind { gapless, gapped } kind = Kind::gapless;
    double scale = 0.0; ///< gamma (gapless) or gap (gapped)
    double e_bound = 0.0;
    double u0 = 0.0;

    double threshold(double T) const;
};

WitnessReport witness_heat_capacity(const HeatCapacityClass& cls, double C, double T);

/** sum_a Var(M_a), spin convention; below sum_i l_i certifies entanglement. */
double hofmann_takeuchi(const DensityOperator& rho, const SpinLattice& lat);

struct Complementarity {
    double nonlocal_term = 0.0;
    double local_term = 0.0;
    double lhs = 0.0;
    bool lemma_holds = false; ///< <M^2> >= ((Nl+1)/(Nl)) <M>^2
};

Complementarity complementarity(const DensityOperator& rho, const SpinLattice& lat);

/** Nearest-neighbour concurrence from the energy per bond, antiferromagnetic branch. */
double wang_zanardi_concurrence(double u_per_bond_over_J);
/** Ferromagnetic branch as printed (never positive for non-positive energy). */
double wang_zanardi_concurrence_fm(double u_per_site, double J);

// ---- transverse Ising ----

struct IsingVariance {
    double min_value_per_site = 0.0;
    double theta1 = 0.0;
    double theta2 = 0.0;
};

/** Per-site energy variance of a 2-periodic product state; sign is the coupling sign. */
double ising_product_variance(double theta1, double theta2, double B, int sign = 1);

IsingVariance ising_min_variance(double B, int sign = 1);

/** Direct Var(H)/N for the 2-periodic product state on an explicit ring. */
double ising_product_variance_explicit(double theta1, double theta2, double B, int n, int sign = 1);

/** Heat capacity per site of the infinite transverse Ising ring (J = 1). */
double katsura_ising_c(double B, double T);

struct KatsuraXX {
    double U_over_T = 0.0; ///< energy per site divided by T
    double M_bar = 0.0;    ///< magnetisation per site
};

/** Infinite xx ring, K = J/(2T), L = B/T. */
KatsuraXX katsura_xx(double K, double L);

/** Dimer susceptibility per spin against 1/(6T). */
WitnessReport witness_bvz_dimer(double chi_per_spin, double T);

} // namespace bellforge

#endif // BELLFORGE_THERMAL_HPP
