#ifndef BELLFORGE_PHOTONICS_HPP
#define BELLFORGE_PHOTONICS_HPP

#include <array>
#include <optional>

namespace bellforge {

// ---- single photon against a local oscillator (two-mode interference) ----

/** Michelson visibility: single photon when beta is absent, coherent pair otherwise. */
double twc_visibility(double alpha, std::optional<double> beta = std::nullopt);

/** sin(theta1 - theta2) / (1 + alpha^2). */
double twc_correlation(double alpha, double theta1, double theta2);

/** Largest CHSH combination of twc_correlation over angles, minus the local bound 2. */
double twc_chsh_margin(double alpha);

/** Largest alpha for which the CHSH margin is positive. */
double twc_chsh_threshold();

// ---- homodyne single-photon scheme ----

struct BJSSParams {
    double alpha_sq = 400.0; ///< oscillator intensity per arm
    double eta = 1.0;        ///< channel transparency
    double l = 1.0;          ///< coherence retained by the single-photon part
    int n_max = 0;           ///< Fock cutoff; 0 picks it from the Poisson tail

    void validate() const;
};

enum class ProbabilityMethod { exact, approx };

struct BJSSProbabilities {
    double p_plus_c = 0.0;
    double p_plus_d = 0.0;
    double p_pp = 0.0;
    double p_pm = 0.0;
    double p_mp = 0.0;
    double p_mm = 0.0;
    int n_max_used = 0;
};

/** Tail-bounded Fock cutoff for a Poisson of mean `mean` (mass beyond < 1e-12). */
int poisson_cutoff(double mean, int cap = 4000);

BJSSProbabilities bjss_probs(const BJSSParams& p, double phi_c, double phi_d,
                             ProbabilityMethod method);

enum class ChVariant { plus_only, plus_minus };

/** Angles are {phi_c, phi_c', phi_d, phi_d'}. Positive value means violation. */
double bjss_ch_value(const BJSSParams& p, ChVariant variant, const std::array<double, 4>& angles,
                     ProbabilityMethod method = ProbabilityMethod::approx);

/** Correlation of +-1 outcomes: P++ + P-- - P+- - P-+. */
double bjss_correlation(const BJSSParams& p, double phi_c, double phi_d,
                        ProbabilityMethod method = ProbabilityMethod::approx);

/** |CHSH| from bjss_correlation minus 2. */
double bjss_chsh_margin(const BJSSParams& p, const std::array<double, 4>& angles,
                        ProbabilityMethod method = ProbabilityMethod::approx);

struct AngleOptimum {
    double value = 0.0;
    std::array<double, 4> angles{};
};

AngleOptimum bjss_ch_max(const BJSSParams& p, ChVariant variant,
                         ProbabilityMethod method = ProbabilityMethod::approx);
AngleOptimum bjss_chsh_max(const BJSSParams& p,
                           ProbabilityMethod method = ProbabilityMethod::approx);

struct CriticalCurves {
    double l_ch_pp = 0.0;
    double l_chsh = 0.0;
    double l_ch_pm = 0.0;
};

/** Critical coherence for each inequality; values above 1 mean no violation at this eta. */
CriticalCurves bjss_critical_curves(double eta);

/** Transparency at which each curve reaches l = 1 (bisection on [1e-6, 1]). */
CriticalCurves bjss_critical_roots(double tol = 1e-12);

struct CompensatedResult {
    double p_plus = 0.0;
    double p_pp = 0.0;      ///< at the supplied phase difference
    double l_critical = 0.0;
    double critical_product = 0.0; ///< l_critical * eta
    bool attainable = false;       ///< l_critical <= 1
};

/** Intensity raised to compensate the channel; root of the CH expression in l. */
CompensatedResult bjss_compensated(const BJSSParams& p, double phase_difference = 0.0);

/** Smallest eigenvalue after partial transposition of the reduced single-photon modes. */
double bjss_ppt_min_eig_formula(double eta, double l);
double bjss_ppt_min_eig_numeric(double eta, double l);

// ---- detection-efficiency loophole ----

struct DetectionModel {
    double eta = 1.0;
    double p_dark = 0.0;
    double visibility = 1.0;
};

struct GargMermin {
    double eta_crit = 0.0; ///< for model.visibility
    double v_crit = 0.0;   ///< for model.eta and model.p_dark
};

GargMermin garg_mermin(const DetectionModel& model);

// ---- single photon split against a weak coherent beam ----

struct HessmoResult {
    double p_c = 0.0;
    double p_cd = 0.0;
    double p_coinc_total = 0.0;
    double visibility = 0.0;
    bool nonclassical = false; ///< visibility above one half
};

HessmoResult hessmo_probs(double alpha, double r, double t, double phase_difference, double eta);

} // namespace bellforge

#endif // BELLFORGE_PHOTONICS_HPP
