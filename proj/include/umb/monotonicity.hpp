#pragma once

#include "umb/config.hpp"
#include "umb/geometry.hpp"
#include "umb/mesh.hpp"

#include <vector>

namespace umb {

struct MonotonicityProfile {
    int center_vertex = -1;
    Vec center;
    Vec rho_samples;
    Vec gamma;
    // deficit integrand over the annulus between the smallest and largest rho
    double deficit_total = 0.0;
    double theta_infinity_proxy = 0.0; // gamma at the largest rho (-> W/4)
    double willmore = 0.0;
    bool monotone_ok = true; // up to 1e-6 (1 + gamma) slack
};

struct FubiniCenter {
    int vertex = -1;
    double value = 0.0;      // D(xi*) at the argmin
    double mean_value = 0.0; // area-weighted mean of D over sampled vertices
    Vec sampled_values;      // D per sampled vertex
    std::vector<int> sampled_vertices;
};

struct DensityCheck {
    std::vector<int> centers;
    std::vector<double> rhos;
    Mat ratios;              // centers x rhos, mu(B_rho)/(pi rho^2)
    double li_yau_max = 0.0; // max small-rho ratio (theta^2 proxy)
    double li_yau_bound = 0.0; // W / (4 pi)
    bool li_yau_ok = true;
    bool lower_bound_ok = true; // Prop-A.1-style bound with frozen c0
    double c0 = 0.0;
};

// gamma(rho) = rho^-2 mu(B_rho) + 1/16 int_{B_rho} |H|^2
//            + 1/2 int_{B_rho} rho^-2 (y-x).H(y)
MonotonicityProfile gammaProfile(const EmbeddedMesh& mesh, const CurvatureField& curv,
                                 int center_vertex, const Vec& rho_samples,
                                 const Config& cfg = {});

// int |1/4 H(y) + (y-x)^perp_y / |y-x|^2|^2 dmu(y), perp taken in the face plane
double monotonicityDeficit(const EmbeddedMesh& mesh, const CurvatureField& curv,
                           int center_vertex, const Config& cfg = {});

// argmin over sampled vertices xi of
// D(xi) = int |H(xi) + 4 (xi-x)^perp_xi / |xi-x|^2|^2 dmu(x)
FubiniCenter selectFubiniCenter(const EmbeddedMesh& mesh, const CurvatureField& curv,
                                int max_samples = 256, const Config& cfg = {});

DensityCheck densityChecks(const EmbeddedMesh& mesh, const CurvatureField& curv,
                           int max_centers = 64, const Config& cfg = {});

} // namespace umb
