#ifndef BELLFORGE_NUMERICS_HPP
#define BELLFORGE_NUMERICS_HPP

#include <cstddef>
#include <functional>

#include <Eigen/Dense>

namespace bellforge {

struct NelderMeadOptions {
    int max_evaluations = 4000;
    double f_tolerance = 1e-13;
    double x_tolerance = 1e-10;
    double initial_step = 0.25;
};

struct NelderMeadResult {
    Eigen::VectorXd x;
    double value = 0.0;
    int evaluations = 0;
};

/** Derivative-free simplex minimisation. */
NelderMeadResult nelder_mead_minimize(const std::function<double(const Eigen::VectorXd&)>& f,
                                      const Eigen::VectorXd& x0,
                                      const NelderMeadOptions& options = {});

/**
 * Adaptive Gauss-Kronrod (7/15) quadrature on [a, b].
 * Throws NumericalError when the requested absolute tolerance is not met.
 */
double integrate_adaptive(const std::function<double(double)>& f, double a, double b,
                          double abs_tolerance = 1e-10, int max_depth = 40);

/** Bisection for a sign change of f on [lo, hi]. */
double bisect_root(const std::function<double(double)>& f, double lo, double hi,
                   double tolerance = 1e-10);

/** Worker count: BELLFORGE_THREADS if set, otherwise hardware concurrency. */
unsigned worker_count();

/** Runs body(i) for i in [0, n) on up to worker_count() threads. */
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

} // namespace bellforge

#endif // BELLFORGE_NUMERICS_HPP
