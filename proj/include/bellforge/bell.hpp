#ifndef BELLFORGE_BELL_HPP
#define BELLFORGE_BELL_HPP

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "bellforge/qstate.hpp"

namespace bellforge {

/** Parties with binary outcomes and a number of settings each. */
struct Scenario {
    int n_parties = 0;
    std::vector<int> settings;

    Scenario() = default;
    Scenario(int n, int settings_each);
    explicit Scenario(std::vector<int> settings_per_party);

    std::size_t n_coeffs() const;
    int total_settings() const;
};

/** Outcome (+1 or -1) for every party and setting. */
struct DeterministicStrategy {
    std::vector<std::vector<int>> outcomes;
};

/**
 * Correlation-only Bell expression sum coeffs[s1..sN] E(s1..sN).
 * Coefficients are row-major with party 0 most significant.
 */
struct BellFunctional {
    Scenario scenario;
    std::vector<double> coeffs;
    std::optional<double> lhv_bound;
    double stated_bound = 0.0; ///< constant the expression is normalised against
    std::string name;

    BellFunctional() = default;
    BellFunctional(Scenario s, std::string label);

    std::size_t flat(const std::vector<int>& setting_index) const;
    std::vector<int> unflat(std::size_t i) const;
    double& at(const std::vector<int>& setting_index) { return coeffs[flat(setting_index)]; }
    double at(const std::vector<int>& setting_index) const { return coeffs[flat(setting_index)]; }
};

/** Value of the expression for one deterministic strategy. */
double evaluate_strategy(const BellFunctional& f, const DeterministicStrategy& s);

/** Exact maximum of |expression| over deterministic strategies; stores it in f. */
double lhv_bound(BellFunctional& f);

/** Same maximum, leaving f untouched. */
double compute_lhv_bound(const BellFunctional& f);

/** Maximum over vertices of the correlation polytope (outcome-product vectors up to sign). */
double lhv_bound_vertices(const BellFunctional& f);

/** Strategies whose signed value equals +max (within tol). */
std::vector<DeterministicStrategy> saturating_strategies(const BellFunctional& f,
                                                         double tol = 1e-9);

/** Rank of the outcome-product vectors of the saturating strategies. */
int saturating_rank(const BellFunctional& f, double tol = 1e-9);

/** Which Bloch directions an observable may use. */
enum class ObservableDomain { full, planar_xy };

struct SeeSawOptions {
    int restarts = 64;
    std::uint64_t seed = 20240601;
    double tolerance = 1e-12;
    int max_sweeps = 5000;
    ObservableDomain domain = ObservableDomain::full;
    /** Extra deterministic starts (per party, per setting) tried before random ones. */
    std::vector<std::vector<std::vector<Eigen::Vector3d>>> seeds;
};

struct QuantumValue {
    double value = 0.0;
    std::vector<std::vector<Eigen::Vector3d>> observables; ///< [party][setting] Bloch vector
    std::uint64_t seed = 0;
    int best_restart = -1;
    std::vector<double> restart_values;
};

/** See-saw maximisation of sum C T(a1 .. aN) over unit observable vectors. */
QuantumValue quantum_value(const BellFunctional& f, const CorrelationTensor& t,
                           const SeeSawOptions& options);

QuantumValue quantum_value(const BellFunctional& f, const DensityOperator& rho,
                           int restarts = 64, std::uint64_t seed = 20240601);

/** Expression value for explicit observables. */
double bell_value(const BellFunctional& f, const CorrelationTensor& t,
                  const std::vector<std::vector<Eigen::Vector3d>>& observables);

// ---- catalog ----

BellFunctional chsh();
/** Re prod (a1 + i a2). */
BellFunctional mermin(int n);
/** Ardehali form: Re(prod)(C1 + C2) + Im(prod)(C1 - C2) over the first N-1 parties. */
BellFunctional ardehali(int n);
/** Recursive MABK expression S1^N (bound 1). */
BellFunctional mabk(int n);
/** WWWZB member with sign function given as a bit mask over the 2^N sign vectors. */
BellFunctional wwwzb(int n, std::uint64_t sign_mask);
/** All 2^(2^N) WWWZB members. */
std::vector<BellFunctional> wwwzb_family(int n);
/** Three-party 4x4x2 expression scaled by 4 so that the bound is 16. */
BellFunctional plzb3qa();
/** Three-setting three-party inequalities; k = 1..4 (k = 4 in corrected form). */
BellFunctional wiesniak_ineq(int k);
/** The fourth inequality exactly as printed (not a valid sign function). */
BellFunctional wiesniak_ineq4_printed();
/** Generalised CHSH: (A1 + A2) prod A1 + (A1 - A2) prod A1 over N parties. */
BellFunctional chsh_lift(int n);

/** Every named functional with its LHV bound filled in. */
std::vector<BellFunctional> named_functionals();
BellFunctional named_functional(const std::string& name);

// ---- GHZ argument ----

struct AvnReport {
    int n = 0;
    std::vector<std::string> labels;
    std::vector<double> means;
    std::vector<double> expected;
    bool means_match = false;
    /** Whether some deterministic +-1 assignment reproduces all expected signs. */
    bool lhv_assignable = true;
    bool contradiction = false;
};

/** Stabiliser means on (|0..0> - |1..1>)/sqrt2 and the LHV sign contradiction. */
AvnReport ghz_avn_check(int n);
AvnReport ghz_avn_check(int n, const DensityOperator& rho);

// ---- polytope face test ----

struct FaceDeterminant {
    long long D = 0;     ///< bordered 10x10 determinant
    long long minor = 0; ///< 9x9 determinant of the basis
    bool degenerate = false;
};

/** (1,a,b) (x) (1,c,d) flattened to length 9. */
std::array<int, 9> product_vertex(int a, int b, int c, int d);

FaceDeterminant is_face_2q3s(const std::vector<std::array<int, 9>>& vertices,
                             const std::array<int, 9>& candidate);

/** Exact determinant of an integer matrix (fraction-free elimination). */
long long integer_determinant(std::vector<std::vector<long long>> m);

// ---- tight functional generation ----

struct TightClass {
    BellFunctional functional;
    std::vector<int> quarter_coeffs; ///< coefficients times 4
    std::size_t orbit_size = 0;
    bool trivial = false;
    int saturating = 0;
    int rank = 0;
};

struct TightCatalog {
    int n_parties = 0;
    std::size_t sign_functions = 0;
    std::vector<TightClass> classes;
    std::size_t nontrivial() const;
};

/** Sign-function enumeration for N in {2, 3} parties with 3 settings each. */
TightCatalog generate_tight_functionals(int n_parties);

/** S(s) in {-1, +1} for every sign vector (quarter-integer arithmetic). */
bool is_valid_sign_function(const std::vector<int>& quarter_coeffs, int n_parties,
                            int settings);

/** Lexicographically smallest member of the local-symmetry orbit. */
std::vector<int> canonical_form(const std::vector<int>& quarter_coeffs, int n_parties,
                                int settings);

/** Index of the catalog class equivalent to f, if any. */
std::optional<std::size_t> match_class(const TightCatalog& catalog, const BellFunctional& f);

// ---- tensor conditions ----

enum class ConditionMode { fixed_frame, optimized };

/** Sum of squared entries with each party restricted to two axes (1-based, e.g. {1,2}). */
double plane_square_sum(const CorrelationTensor& t, const std::vector<std::array<int, 2>>& axes);

double condition_wwwzb(const CorrelationTensor& t, ConditionMode mode,
                       std::uint64_t seed = 7);

double condition_wzlpzb(const CorrelationTensor& t, int arity, std::uint64_t seed = 7);

enum class ThreeSettingCondition { ineq1, ineq2 };

struct ThreeSettingReport {
    double raw_fixed = 0.0;     ///< ineq1: T111^2 + T211^2 + T212^2 in the given frame
    double common_fixed = 0.0;  ///< common-basis form in the given frame
    double optimized = 0.0;     ///< maximum over local frames
};

ThreeSettingReport condition_three_setting(const CorrelationTensor& t, ThreeSettingCondition which,
                                           std::uint64_t seed = 7);

enum class RotInvMode { planar, full };

struct RotInvReport {
    double sum_sq = 0.0;
    double t_max = 0.0;
    double ratio = 0.0;
    bool violated = false;
};

RotInvReport rotinv_condition(const CorrelationTensor& t, RotInvMode mode, int restarts = 32,
                              std::uint64_t seed = 11);

/** Largest |T(v1..vN)| over unit vectors (see-saw). */
double tensor_max(const CorrelationTensor& t, ObservableDomain domain, int restarts,
                  std::uint64_t seed);

/**
 * Rotate every party within the xz plane, replace entries by moduli and take the
 * largest multilinear value; maximised over the rotation angles.
 */
double modified_tensor_max(const CorrelationTensor& t, int restarts = 20, std::uint64_t seed = 3);

/** Apply a 3x3 rotation to one party's spatial indices. */
CorrelationTensor rotate_party(const CorrelationTensor& t, int party, const Eigen::Matrix3d& r);

/** Rotation matrix from z-y-z Euler angles. */
Eigen::Matrix3d euler_rotation(double a, double b, double c);

} // namespace bellforge

#endif // BELLFORGE_BELL_HPP
