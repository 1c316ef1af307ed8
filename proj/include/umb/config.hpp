#pragma once

#include <string>

namespace umb {

// Tunable tolerances and knobs, loadable from a key=value file and
// overridable by CLI flags. Defaults are the values the test suite pins.
struct Config {
    // quadrature scale used by the telescoping and gamma-limit checks,
    // in units of (1 + |quantity|)
    double quadrature_tol = 1e-2;

    // Moebius balancing
    double bisection_tol = 1e-9;
    double half_area_tol = 1e-6;
    double moebius_r_min = 1e-6;
    double moebius_r_max = 1e6;
    int moebius_max_bisections = 200;
    int moebius_max_sweeps = 10;

    // conformal layout
    double solver_tol = 1e-10;
    int solver_max_iters = 50000;
    int smoothing_iters = 5;
    double smoothing_lambda = 0.5;

    // monotonicity quadrature
    int ball_clip_depth = 4;
    double center_exclusion_scale = 1e-3;

    // density checks; c0 frozen from the round-sphere calibration run
    // (inf over the sphere family of mu(B_rho)(1+4W)/rho^2, divided by 2)
    double density_c0 = 80.0;
    double li_yau_rho = 0.1;
    double li_yau_tol = 0.1;

    // sphere fitting
    int hausdorff_samples = 10000;
    int gn_max_iters = 200;
    double gn_step_tol = 1e-12;

    // geometry
    double gauss_estimate_cn = -1.0; // < 0: use n - 1
    double mean_curvature_floor = 1e-8;

    // rigidity
    double delta0_sq = -1.0;        // < 0: use e_n (half the hypothesis bound)
    double spectral_slack = 5e-2;   // discretization slack in the lambda_4 gap check
    double gram_max_dev = 0.5;      // AlignmentFailure beyond this

    // parallelism; 0 = auto (hardware, capped by UMB_THREADS)
    int threads = 0;

    void set(const std::string& key, const std::string& value);
    static Config fromFile(const std::string& path);
};

} // namespace umb
