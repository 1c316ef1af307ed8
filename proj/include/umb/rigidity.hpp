#pragma once

#include "umb/config.hpp"
#include "umb/conformal.hpp"
#include "umb/geometry.hpp"
#include "umb/mesh.hpp"
#include "umb/monotonicity.hpp"
#include "umb/spherefit.hpp"

#include <Eigen/Sparse>
#include <optional>
#include <string>

namespace umb {

// Cotangent stiffness matrix and lumped mass on the S^2-image mesh.
// L is positive semi-definite with zero row sums; -L u / mass ~ Laplacian.
struct LaplaceOperator {
    Eigen::SparseMatrix<double> stiffness;
    Vec mass;

    static LaplaceOperator build(const SphericalParam& param);
    Mat laplacian(const Mat& f) const; // -(L f) / mass, rowwise
};

struct ConfFactorL2 {
    double u_l2 = 0.0;
    double gauss_residual_l2 = 0.0; // ||-Lu/m - (K e^{2u} - 1)||_{L^2}
    double linearized_l1 = 0.0;     // ||Delta u + 2u||_{L^1}
};

struct HarmonicProjection {
    Mat alpha;        // 4 x n, coefficients against v_0..v_3
    Mat l;            // n x 3 linear map on span{e1,e2,e3}
    Vec translation;  // constant component alpha_0 v_0 (an n-vector)
    double residual_l2 = 0.0;     // ||f - alpha_0 v_0 - l||_{L^2}
    double eigen_residual = 0.0;  // ||Delta f + 2 f||_{L^2}
    double gap_bound = 0.0;       // eigen_residual / min(2, lambda_4 - 2)
    bool gap_ok = true;           // residual <= gap bound + slack
};

struct RotationExtraction {
    Mat frame;        // n x 3 orthonormal, Gram-Schmidt of l
    Mat rotation;     // n x n proper rotation sending frame -> e_1..e_3
    double gram_dev = 0.0;       // max |Gram(l) - I|
    double polar_dev = 0.0;      // frame vs polar-decomposition oracle
    EmbeddedMesh aligned;        // translated by -alpha_0 v_0, then rotated
};

struct RigidityReport {
    int ambient_dim = 3;
    int chi = 0;
    double area = 0.0;
    double willmore = 0.0;
    double e_n = 0.0;
    double tau = 0.0;
    double a0_l2 = 0.0;
    double funda_deficit = 0.0;   // ||A - nu g||_{L^2}
    double gauss_deficit = 0.0;   // ||K - 1||_{L^1}, angle-defect K
    bool hypothesis_ok = false;   // ||A^0||^2 < 2 e_n

    // Theorem 1.2 stage (sphere-type, small deficit)
    std::string theorem12_status = "ok"; // ok | NotSphereType | skipped | <error>
    double mean_deficit = 0.0;    // ||H + 2 id||_{L^2} after recentering
    double radial_deficit = 0.0;  // || |id| - 1 ||_{L^2}
    double id_sup = 0.0;
    double sphere_center_dist = 0.0;
    double sphere_radius = 0.0;
    double w22_deficit = 0.0;
    double u_inf = 0.0;
    double u_l2 = 0.0;
    double half_area_dev = 0.0;
    double qc_error_max = 1.0;

    // empirical constants (deficit / ||A^0||, gauss vs ||A^0||^2)
    double c_funda = 0.0;
    double c_gauss = 0.0;
    double c_mean = 0.0;
    double c_w22 = 0.0;
    double c_uinf = 0.0;
    double c_ul2 = 0.0;

    // large-deficit branch (||A^0|| >= delta_0)
    bool vacuous_bound_mode = false;
    double a_l2 = 0.0;
    double large_branch_const = 0.0; // sqrt(2 + 8 pi / delta_0^2)
    bool large_branch_ok = true;     // ||A|| <= C ||A^0||
};

ConfFactorL2 confFactorL2(const SphericalParam& param, const CurvatureField& curv,
                          const LaplaceOperator& lap);

// mass-orthonormalized degree-<=1 eigenfunction projection of the vertex map
HarmonicProjection harmonicProject(const SphericalParam& param,
                                   const EmbeddedMesh& mesh,
                                   const LaplaceOperator& lap,
                                   const Config& cfg = {});

RotationExtraction extractRotation(const HarmonicProjection& proj,
                                   const EmbeddedMesh& mesh, const Config& cfg = {});

// (||d||^2 + ||grad d||^2 + ||Delta d||^2)^{1/2} for d = f - id_{S^2}
double w22Deficit(const EmbeddedMesh& aligned, const SphericalParam& param,
                  const LaplaceOperator& lap);

// closest orthonormal n x 3 frame in Frobenius norm, via the 3x3 Gram
Mat polarFrameOracle(const Mat& l);

// Full Theorem 1.1 / 1.2 pipeline on an area-normalized mesh.
RigidityReport analyzeMesh(const EmbeddedMesh& mesh, const Config& cfg = {},
                           bool skip_conformal = false);

} // namespace umb
