#pragma once

#include "umb/config.hpp"
#include "umb/geometry.hpp"
#include "umb/mesh.hpp"

namespace umb {

// Round 2-sphere inside an affine 3-subspace of R^n.
struct SphereFit {
    Vec center;       // c in R^n
    double radius = 0.0;
    Mat subspace;     // n x 3 orthonormal frame spanning the affine 3-space
    double l2_dist_sq = 0.0;  // int d(x,S)^2 dmu by face quadrature
    double hausdorff = 0.0;   // sampled two-sided distance
    double mean_deficit = 0.0; // int |H + 2(x-c)|^2 dmu

    double distance(const Vec& x) const;
};

struct RecenterReport {
    EmbeddedMesh mesh;     // translated by -c
    double mean_l2 = 0.0;  // ||H + 2 id||_{L^2}
    double radial_l2 = 0.0; // || |id| - 1 ||_{L^2}
    double id_sup = 0.0;    // max_v |x_v|
    double radius_dev = 0.0; // |r - 1|
};

// Tangent sphere of the paper's construction: radius 2/|H(xi)| in
// T_xi + span{H(xi)}, centered at xi + 2 H(xi)/|H(xi)|^2.
SphereFit tangentSphere(const EmbeddedMesh& mesh, const CurvatureField& curv,
                        int xi, const Config& cfg = {});

// Independent Gauss-Newton least-squares oracle over (center, radius, subspace).
SphereFit lsqSphereOracle(const EmbeddedMesh& mesh, const SphereFit& init,
                          const Config& cfg = {},
                          const CurvatureField* curv = nullptr);

RecenterReport recenterUnit(const EmbeddedMesh& mesh, const CurvatureField& curv,
                            const SphereFit& fit);

} // namespace umb
