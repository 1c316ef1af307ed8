#include "umb/monotonicity.hpp"

#include "umb/errors.hpp"
#include "umb/parallel.hpp"
#include "umb/quadrature.hpp"

#include <cmath>

namespace umb {

namespace {

double meanIncidentEdgeLength(const EmbeddedMesh& mesh, int v) {
    double sum = 0.0;
    const auto& ring = mesh.oneRing(v);
    for (int u : ring) sum += (mesh.position(u) - mesh.position(v)).norm();
    return sum / ring.size();
}

// |1/4 H(y) + (y-x)^perp / |y-x|^2|^2 with perp w.r.t. the face plane at y
double deficitIntegrand(const EmbeddedMesh& mesh, const CurvatureField& curv,
                        const Vec& x, const QuadNode& node, const Mat& plane_basis) {
    Vec y = quadPoint(mesh, node);
    Vec d = y - x;
    double dsq = d.squaredNorm();
    Vec perp = d - plane_basis * (plane_basis.transpose() * d);
    Vec H = interpolateRows(mesh, curv.mean, node);
    return (0.25 * H + perp / dsq).squaredNorm();
}

} // namespace

MonotonicityProfile gammaProfile(const EmbeddedMesh& mesh, const CurvatureField& curv,
                                 int center_vertex, const Vec& rho_samples,
                                 const Config& cfg) {
    if (center_vertex < 0 || center_vertex >= mesh.numVertices())
        throw CenterOffMesh("vertex " + std::to_string(center_vertex));
    const int m = static_cast<int>(rho_samples.size());
    if (m < 1) throw InvalidSpec("need at least one rho sample");
    for (int i = 1; i < m; ++i)
        if (!(rho_samples[i] > rho_samples[i - 1]))
            throw InvalidSpec("rho samples must be increasing");

    MonotonicityProfile prof;
    prof.center_vertex = center_vertex;
    prof.center = mesh.position(center_vertex);
    prof.rho_samples = rho_samples;
    prof.gamma.resize(m);

    const Vec x = prof.center;
    for (int i = 0; i < m; ++i) {
        double rho = rho_samples[i];
        double mu = 0.0, h2 = 0.0, cross = 0.0;
        forEachBallQuadNode(mesh, x, rho, cfg.ball_clip_depth,
                            [&](const QuadNode& node) {
                                Vec y = quadPoint(mesh, node);
                                Vec H = interpolateRows(mesh, curv.mean, node);
                                mu += node.weight;
                                h2 += node.weight * H.squaredNorm();
                                cross += node.weight * (y - x).dot(H);
                            });
        prof.gamma[i] = mu / (rho * rho) + h2 / 16.0 + 0.5 * cross / (rho * rho);
    }

    for (int i = 1; i < m; ++i)
        if (prof.gamma[i] < prof.gamma[i - 1] - 1e-6 * (1.0 + prof.gamma[i - 1]))
            prof.monotone_ok = false;

    // annulus deficit between the extreme samples (telescoping identity)
    double rho_min = rho_samples[0], rho_max = rho_samples[m - 1];
    double excl = cfg.center_exclusion_scale * meanIncidentEdgeLength(mesh, center_vertex);
    std::vector<Mat> bases(mesh.numFaces());
    for (int f = 0; f < mesh.numFaces(); ++f) bases[f] = mesh.facePlaneBasis(f);
    auto integrate = [&](double rho) {
        double sum = 0.0;
        forEachBallQuadNode(mesh, x, rho, cfg.ball_clip_depth,
                            [&](const QuadNode& node) {
                                Vec y = quadPoint(mesh, node);
                                if ((y - x).norm() < excl) return;
                                sum += node.weight *
                                       deficitIntegrand(mesh, curv, x, node, bases[node.face]);
                            });
        return sum;
    };
    prof.deficit_total = integrate(rho_max) - integrate(rho_min);

    double w = 0.0;
    for (int v = 0; v < mesh.numVertices(); ++v)
        w += 0.25 * mesh.dualArea(v) * curv.mean.row(v).squaredNorm();
    prof.willmore = w;
    prof.theta_infinity_proxy = prof.gamma[m - 1];
    return prof;
}

double monotonicityDeficit(const EmbeddedMesh& mesh, const CurvatureField& curv,
                           int center_vertex, const Config& cfg) {
    if (center_vertex < 0 || center_vertex >= mesh.numVertices())
        throw CenterOffMesh("vertex " + std::to_string(center_vertex));
    const Vec x = mesh.position(center_vertex);
    double excl = cfg.center_exclusion_scale * meanIncidentEdgeLength(mesh, center_vertex);
    double sum = 0.0;
    std::vector<Mat> bases(mesh.numFaces());
    for (int f = 0; f < mesh.numFaces(); ++f) bases[f] = mesh.facePlaneBasis(f);
    forEachFaceQuadNode(mesh, [&](const QuadNode& node) {
        Vec y = quadPoint(mesh, node);
        if ((y - x).norm() < excl) return;
        sum += node.weight * deficitIntegrand(mesh, curv, x, node, bases[node.face]);
    });
    return sum;
}

FubiniCenter selectFubiniCenter(const EmbeddedMesh& mesh, const CurvatureField& curv,
                                int max_samples, const Config& cfg) {
    const int nv = mesh.numVertices();
    int stride = std::max(1, nv / std::max(1, max_samples));
    std::vector<int> sampled;
    for (int v = 0; v < nv; v += stride) sampled.push_back(v);

    std::vector<Mat> bases(mesh.numFaces());
    for (int f = 0; f < mesh.numFaces(); ++f) bases[f] = mesh.facePlaneBasis(f);

    // quadrature nodes are shared across all candidate centers
    std::vector<QuadNode> nodes;
    std::vector<Vec> points;
    forEachFaceQuadNode(mesh, [&](const QuadNode& node) {
        nodes.push_back(node);
        points.push_back(quadPoint(mesh, node));
    });

    Vec values(sampled.size());
    parallelFor(static_cast<int>(sampled.size()), cfg.threads, [&](int i) {
        int xi = sampled[i];
        Vec p = mesh.position(xi);
        const TangentFrame& frame = curv.frames[xi];
        Vec H = curv.mean.row(xi).transpose();
        double excl = cfg.center_exclusion_scale * meanIncidentEdgeLength(mesh, xi);
        double sum = 0.0;
        for (size_t q = 0; q < nodes.size(); ++q) {
            Vec d = p - points[q];
            double dsq = d.squaredNorm();
            if (dsq < excl * excl) continue;
            // projection onto the normal space at xi
            Vec perp = frame.normal * (frame.normal.transpose() * d);
            sum += nodes[q].weight * (H + 4.0 * perp / dsq).squaredNorm();
        }
        values[i] = sum;
    });

    FubiniCenter out;
    out.sampled_vertices = sampled;
    out.sampled_values = values;
    int best = 0;
    double wsum = 0.0, mean = 0.0;
    for (size_t i = 0; i < sampled.size(); ++i) {
        if (values[i] < values[best]) best = static_cast<int>(i);
        double w = mesh.dualArea(sampled[i]);
        wsum += w;
        mean += w * values[i];
    }
    out.vertex = sampled[best];
    out.value = values[best];
    out.mean_value = mean / wsum;
    return out;
}

DensityCheck densityChecks(const EmbeddedMesh& mesh, const CurvatureField& curv,
                           int max_centers, const Config& cfg) {
    if (!mesh.isConnected()) throw InvalidSpec("density checks need a connected mesh");
    DensityCheck out;
    const int nv = mesh.numVertices();
    int stride = std::max(1, nv / std::max(1, max_centers));
    for (int v = 0; v < nv; v += stride) out.centers.push_back(v);

    double diam = mesh.diameter();
    out.rhos = {cfg.li_yau_rho, 0.25 * diam, 0.5 * diam, 0.75 * diam};

    double willmore = 0.0;
    for (int v = 0; v < nv; ++v)
        willmore += 0.25 * mesh.dualArea(v) * curv.mean.row(v).squaredNorm();
    out.li_yau_bound = willmore / (4.0 * M_PI);
    out.c0 = cfg.density_c0;

    out.ratios.resize(out.centers.size(), out.rhos.size());
    for (size_t i = 0; i < out.centers.size(); ++i) {
        Vec x = mesh.position(out.centers[i]);
        double reach = (mesh.positions().rowwise() - x.transpose()).rowwise().norm().maxCoeff();
        for (size_t j = 0; j < out.rhos.size(); ++j) {
            double rho = out.rhos[j];
            double mu = ballArea(mesh, x, rho, cfg.ball_clip_depth);
            out.ratios(i, j) = mu / (M_PI * rho * rho);
            bool contains_all = rho >= reach;
            if (!contains_all && mu < cfg.density_c0 * rho * rho / (1.0 + 4.0 * willmore))
                out.lower_bound_ok = false;
        }
        out.li_yau_max = std::max(out.li_yau_max, out.ratios(i, 0));
    }
    if (out.li_yau_max > out.li_yau_bound + cfg.li_yau_tol) out.li_yau_ok = false;
    return out;
}

} // namespace umb
