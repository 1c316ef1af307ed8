#pragma once

#include "umb/config.hpp"
#include "umb/mesh.hpp"

#include <vector>

namespace umb {

struct MoebiusTransform {
    int axis = 3;      // 1, 2 or 3 (pole e_axis)
    int pole_sign = 1;
    double r = 1.0;    // dilation factor in the stereographic chart
};

// Spherical parametrization of a genus-0 mesh. Image points live on the unit
// 2-sphere in span{e1,e2,e3}; the pulled-back measure is carried by the
// original face areas, which balancing reassigns but never changes.
struct SphericalParam {
    Eigen::Matrix<double, Eigen::Dynamic, 3> images; // V x 3, unit rows
    Vec u;                 // conformal factor, g = e^{2u} g_{S^2}
    FaceMat faces;
    Vec orig_face_areas;
    Vec orig_dual_areas;
    Vec qc_error;          // per-face singular value ratio >= 1
    int seed_vertex = -1;
    std::vector<MoebiusTransform> transforms;
    double half_areas[3][2] = {{0, 0}, {0, 0}, {0, 0}}; // [axis-1][- , +]

    int numVertices() const { return static_cast<int>(images.rows()); }
    double halfAreaDeviation() const;
};

struct InvertedSurface {
    Mat positions;   // open mesh, pole vertex removed
    FaceMat faces;
    Vec u_hat;       // inverted conformal factor (lambda-normalized)
    Mat plane;       // V x 2 inverted domain coordinates
    std::vector<int> vertex_map; // row -> original vertex index
    int pole_vertex = -1;
    double lambda_hat = 0.0; // u_hat limit at infinity before normalization
    double osc_u_hat = 0.0;
    double bilipschitz_min = 0.0, bilipschitz_max = 0.0;
};

struct ConfSmallReport {
    double delta = 0.0;          // ||f - id||_inf over vertices
    double osc_lower = 0.0;      // osc of u on S_3^-
    double osc_upper = 0.0;      // osc of u on S_3^+
    double osc_total = 0.0;
    double osc_bound_lower = 0.0; // osc(u_hat) + 2 log((1+delta)/(1-delta))
    double osc_bound_upper = 0.0;
    double u_at_pivot = 0.0;     // u at the vertex of smallest |u|
    double u_inf = 0.0;
    bool pivot_ok = true;        // |u(p)| small (area pigeonhole)
    bool inf_bound_ok = true;    // ||u||_inf <= osc(u) + |u(p)|
};

// Sphere inversion Phi(x) = pole + 2 (x - pole)/|x - pole|^2; restricted to
// the unit sphere it is the standard stereographic projection, an involution.
Vec stereographic(const Vec& x, const Vec& pole);
double inversionConformalFactor(const Vec& x, const Vec& pole);

// Intrinsic harmonic layout of the punctured mesh, inverse stereographic
// lift, constrained smoothing, conformal factor from dual-area ratios.
SphericalParam parametrizeSphere(const EmbeddedMesh& mesh, const Config& cfg = {});

// Successive stereographic dilations at e3, e2, e1 until every coordinate
// half-sphere carries pulled-back area 2 pi.
SphericalParam moebiusBalance(const SphericalParam& param, const Config& cfg = {});

// pulled-back area of T_axis^{-1}(B_r(0)) for the current images
double chartDiskArea(const SphericalParam& param, int axis, int pole_sign, double r);

InvertedSurface inversionSurface(const EmbeddedMesh& mesh, const SphericalParam& param,
                                 const Config& cfg = {});

ConfSmallReport confSmallCheck(const EmbeddedMesh& aligned_mesh,
                               const SphericalParam& param, const Config& cfg = {});

// exact area of triangle(a,b,c) intersected with the disk of radius r at 0
double triangleDiskArea(const Eigen::Vector2d& a, const Eigen::Vector2d& b,
                        const Eigen::Vector2d& c, double r);

// spherical (geodesic) triangle area for unit vectors
double sphericalTriangleArea(const Eigen::Vector3d& a, const Eigen::Vector3d& b,
                             const Eigen::Vector3d& c);

} // namespace umb
