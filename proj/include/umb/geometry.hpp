#pragma once

#include "umb/config.hpp"
#include "umb/mesh.hpp"

#include <vector>

namespace umb {

// Per-vertex orthonormal frame: estimated tangent plane plus a basis of the
// normal space, from the area-weighted second moments of the 2-ring.
struct TangentFrame {
    Mat tangent; // n x 2
    Mat normal;  // n x (n-2)
    double residual = 0.0;
};

// Second fundamental form coefficients at one vertex, expressed in the
// frame: row k holds (A_11, A_12, A_22) against normal direction k.
using FormCoeffs = Eigen::Matrix<double, Eigen::Dynamic, 3>;

struct CurvatureField {
    std::vector<TangentFrame> frames;
    std::vector<FormCoeffs> A;  // per vertex, (n-2) x 3
    Mat mean;                   // V x n, mean-curvature vectors, H = Delta_g f
    Mat nu;                     // V x n, measurable unit normal field
    Vec a_sq;                   // |A|^2 per vertex
    Vec a0_sq;                  // |A^0|^2 per vertex
    Vec k_gauss;                // Gauss equation K from the fitted A
    Vec k_defect;               // angle defect / dual area

    // |A - nu g|^2 at vertex v (integrand of the Theorem 1.1 deficit)
    double fundaDeficitSq(int v) const;
};

struct EnergyReport {
    double willmore = 0.0;        // W = 1/4 int |H|^2
    double a0_l2sq = 0.0;         // ||A^0||^2_{L^2}
    double gauss_bonnet_int = 0.0; // int K_defect dmu (= 2 pi chi exactly)
    double gauss_int_fitted = 0.0; // int K_gauss dmu
    double e_n = 0.0;
    double tau = 0.0;             // 2 e_n - ||A^0||^2
    double area = 0.0;
    int chi = 0;
    bool area_normalized = true;
    bool hypothesis_ok = false;   // ||A^0||^2 < 2 e_n
};

struct GaussEstimate {
    Vec residual;   // |K - |H/2|^2| per vertex
    Vec bound;      // C_n |A^0|^2 per vertex
    double c_n = 0.0;
    std::vector<int> violations; // residual > bound + 1e-6
};

// codimension-dependent energy threshold: 4 pi, 8 pi/3, 2 pi
double energyThreshold(int ambient_dim);

std::vector<TangentFrame> fitTangentFrames(const EmbeddedMesh& mesh,
                                           const Config& cfg = {});

CurvatureField secondFundamentalForm(const EmbeddedMesh& mesh,
                                     std::vector<TangentFrame> frames,
                                     const Config& cfg = {});

EnergyReport willmoreEnergy(const EmbeddedMesh& mesh, const CurvatureField& curv);

GaussEstimate gaussEstimateCheck(const CurvatureField& curv, int ambient_dim,
                                 const Config& cfg = {});

// cotangent-Laplacian discretization of Delta_g f, for cross-checking the
// fitted mean curvature; row v is (L f)_v / dualArea(v)
Mat meanCurvatureCotan(const EmbeddedMesh& mesh);

} // namespace umb
