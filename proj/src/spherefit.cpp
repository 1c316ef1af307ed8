#include "umb/spherefit.hpp"

#include "umb/errors.hpp"
#include "umb/parallel.hpp"
#include "umb/quadrature.hpp"

#include <Eigen/QR>
#include <cmath>

namespace umb {

namespace {

// distance to the sphere: radial deficit inside the 3-space plus the
// orthogonal remainder
double sphereDistance(const Vec& x, const Vec& c, double r, const Mat& B) {
    Vec d = x - c;
    Vec in_coords = B.transpose() * d;
    double radial = in_coords.norm() - r;
    double off = (d - B * in_coords).norm();
    return std::sqrt(radial * radial + off * off);
}

double quadratureL2DistSq(const EmbeddedMesh& mesh, const Vec& c, double r,
                          const Mat& B) {
    double sum = 0.0;
    forEachFaceQuadNode(mesh, [&](const QuadNode& node) {
        double d = sphereDistance(quadPoint(mesh, node), c, r, B);
        sum += node.weight * d * d;
    });
    return sum;
}

double meanDeficit(const EmbeddedMesh& mesh, const CurvatureField& curv,
                   const Vec& c) {
    double sum = 0.0;
    for (int v = 0; v < mesh.numVertices(); ++v) {
        Vec term = curv.mean.row(v).transpose() + 2.0 * (mesh.position(v) - c);
        sum += mesh.dualArea(v) * term.squaredNorm();
    }
    return sum;
}

// deterministic spiral sample of the fitted sphere
std::vector<Vec> sampleSphere(const Vec& c, double r, const Mat& B, int count) {
    std::vector<Vec> pts;
    pts.reserve(count);
    const double golden = M_PI * (3.0 - std::sqrt(5.0));
    for (int i = 0; i < count; ++i) {
        double z = 1.0 - 2.0 * (i + 0.5) / count;
        double rad = std::sqrt(std::max(0.0, 1.0 - z * z));
        double phi = golden * i;
        Eigen::Vector3d u(rad * std::cos(phi), rad * std::sin(phi), z);
        pts.push_back(c + r * (B * u));
    }
    return pts;
}

double pointToTriangle(const Vec& p, const Vec& a, const Vec& b, const Vec& c) {
    // project into the face plane, clamp barycentrics on the boundary
    Vec ab = b - a, ac = c - a, ap = p - a;
    double d1 = ab.dot(ap), d2 = ac.dot(ap);
    double g11 = ab.squaredNorm(), g12 = ab.dot(ac), g22 = ac.squaredNorm();
    double det = g11 * g22 - g12 * g12;
    double s = det > 0 ? (g22 * d1 - g12 * d2) / det : 0.0;
    double t = det > 0 ? (g11 * d2 - g12 * d1) / det : 0.0;
    if (s >= 0.0 && t >= 0.0 && s + t <= 1.0) return (ap - s * ab - t * ac).norm();
    auto segment = [](const Vec& q, const Vec& u, const Vec& w) {
        Vec d = w - u;
        double tt = d.squaredNorm() > 0 ? std::clamp((q - u).dot(d) / d.squaredNorm(), 0.0, 1.0) : 0.0;
        return (q - u - tt * d).norm();
    };
    return std::min({segment(p, a, b), segment(p, b, c), segment(p, c, a)});
}

double pointToMesh(const EmbeddedMesh& mesh, const Vec& p) {
    // nearest vertex first, then exact distance over its incident fan
    Eigen::Index best;
    (mesh.positions().rowwise() - p.transpose()).rowwise().squaredNorm().minCoeff(&best);
    double d = (mesh.position(static_cast<int>(best)) - p).norm();
    for (int u : mesh.twoRing(static_cast<int>(best)))
        for (int f : mesh.vertexFaces(u))
            d = std::min(d, pointToTriangle(p, mesh.position(mesh.faces()(f, 0)),
                                            mesh.position(mesh.faces()(f, 1)),
                                            mesh.position(mesh.faces()(f, 2))));
    for (int f : mesh.vertexFaces(static_cast<int>(best)))
        d = std::min(d, pointToTriangle(p, mesh.position(mesh.faces()(f, 0)),
                                        mesh.position(mesh.faces()(f, 1)),
                                        mesh.position(mesh.faces()(f, 2))));
    return d;
}

double sampledHausdorff(const EmbeddedMesh& mesh, const Vec& c, double r,
                        const Mat& B, const Config& cfg) {
    // mesh -> sphere analytically, at vertices and face centroids
    double to_sphere = 0.0;
    for (int v = 0; v < mesh.numVertices(); ++v)
        to_sphere = std::max(to_sphere, sphereDistance(mesh.position(v), c, r, B));
    for (int f = 0; f < mesh.numFaces(); ++f)
        to_sphere = std::max(to_sphere, sphereDistance(mesh.faceCentroid(f), c, r, B));

    // sphere -> mesh over a deterministic sample
    std::vector<Vec> samples = sampleSphere(c, r, B, cfg.hausdorff_samples);
    Vec dists(samples.size());
    parallelFor(static_cast<int>(samples.size()), cfg.threads,
                [&](int i) { dists[i] = pointToMesh(mesh, samples[i]); });
    return std::max(to_sphere, dists.maxCoeff());
}

void fillFitQuality(const EmbeddedMesh& mesh, const CurvatureField* curv,
                    SphereFit& fit, const Config& cfg) {
    fit.l2_dist_sq = quadratureL2DistSq(mesh, fit.center, fit.radius, fit.subspace);
    fit.hausdorff = sampledHausdorff(mesh, fit.center, fit.radius, fit.subspace, cfg);
    if (curv) fit.mean_deficit = meanDeficit(mesh, *curv, fit.center);
}

} // namespace

double SphereFit::distance(const Vec& x) const {
    return sphereDistance(x, center, radius, subspace);
}

SphereFit tangentSphere(const EmbeddedMesh& mesh, const CurvatureField& curv,
                        int xi, const Config& cfg) {
    if (xi < 0 || xi >= mesh.numVertices())
        throw CenterOffMesh("vertex " + std::to_string(xi));
    Vec H = curv.mean.row(xi).transpose();
    double hnorm = H.norm();
    if (hnorm <= cfg.mean_curvature_floor)
        throw VanishingMeanCurvature("|H| = " + std::to_string(hnorm) +
                                     " at vertex " + std::to_string(xi));
    const int n = mesh.ambientDim();
    SphereFit fit;
    fit.radius = 2.0 / hnorm;
    fit.center = mesh.position(xi) + 2.0 * H / (hnorm * hnorm);

    Mat span(n, 3);
    span.col(0) = curv.frames[xi].tangent.col(0);
    span.col(1) = curv.frames[xi].tangent.col(1);
    span.col(2) = H / hnorm;
    Eigen::HouseholderQR<Mat> qr(span);
    fit.subspace = qr.householderQ() * Mat::Identity(n, 3);
    fillFitQuality(mesh, &curv, fit, cfg);
    return fit;
}

SphereFit lsqSphereOracle(const EmbeddedMesh& mesh, const SphereFit& init,
                          const Config& cfg, const CurvatureField* curv) {
    const int n = mesh.ambientDim();
    const int nv = mesh.numVertices();
    if (nv < 4) throw InvalidSpec("need at least 4 vertices");

    // parameters: center (n), radius (1), subspace frame (3n, re-orthonormalized)
    auto packResiduals = [&](const Vec& c, double r, const Mat& B, Vec& res) {
        res.resize(nv * (1 + n));
        for (int v = 0; v < nv; ++v) {
            double w = std::sqrt(mesh.dualArea(v));
            Vec d = mesh.position(v) - c;
            Vec in_coords = B.transpose() * d;
            res[v * (1 + n)] = w * (in_coords.norm() - r);
            res.segment(v * (1 + n) + 1, n) = w * (d - B * in_coords);
        }
    };
    auto orthonormalize = [&](Mat B) {
        Eigen::HouseholderQR<Mat> qr(B);
        Mat Q = qr.householderQ() * Mat::Identity(n, 3);
        Mat R = Q.transpose() * B;
        for (int k = 0; k < 3; ++k)
            if (R(k, k) < 0) Q.col(k) *= -1.0;
        return Q;
    };

    Vec c = init.center;
    double r = init.radius;
    Mat B = orthonormalize(init.subspace);
    const int np = n + 1 + 3 * n;
    Vec res;
    packResiduals(c, r, B, res);
    double cost = res.squaredNorm();
    bool converged = false;

    for (int iter = 0; iter < cfg.gn_max_iters && !converged; ++iter) {
        Mat J(res.size(), np);
        Vec params(np);
        params.head(n) = c;
        params[n] = r;
        params.tail(3 * n) = Eigen::Map<const Vec>(B.data(), 3 * n);
        for (int p = 0; p < np; ++p) {
            double h = 1e-7 * (1.0 + std::abs(params[p]));
            Vec pp = params;
            pp[p] += h;
            Mat Bp = Eigen::Map<const Mat>(pp.tail(3 * n).data(), n, 3);
            Vec rp;
            packResiduals(pp.head(n), pp[n], Bp, rp);
            J.col(p) = (rp - res) / h;
        }
        Mat JtJ = J.transpose() * J;
        JtJ.diagonal().array() += 1e-10 * (1.0 + JtJ.diagonal().maxCoeff());
        Vec step = JtJ.ldlt().solve(-J.transpose() * res);

        Vec c_new = c + step.head(n);
        double r_new = r + step[n];
        Mat B_new = orthonormalize(
            Mat(Eigen::Map<const Mat>(B.data(), n, 3) +
                Eigen::Map<const Mat>(step.tail(3 * n).data(), n, 3)));
        Vec res_new;
        packResiduals(c_new, r_new, B_new, res_new);
        double cost_new = res_new.squaredNorm();
        if (cost_new <= cost) {
            c = c_new;
            r = r_new;
            B = B_new;
            res = res_new;
            cost = cost_new;
        }
        if (step.norm() < cfg.gn_step_tol * (1.0 + params.norm())) converged = true;
    }
    if (!converged)
        throw NoConvergence("Gauss-Newton sphere fit did not converge in " +
                            std::to_string(cfg.gn_max_iters) + " iterations");

    SphereFit fit;
    fit.center = c;
    fit.radius = std::abs(r);
    fit.subspace = B;
    fillFitQuality(mesh, curv, fit, cfg);
    return fit;
}

RecenterReport recenterUnit(const EmbeddedMesh& mesh, const CurvatureField& curv,
                            const SphereFit& fit) {
    RecenterReport rep{mesh.translated(-fit.center)};
    double mean_sq = 0.0, radial_sq = 0.0, sup = 0.0;
    for (int v = 0; v < rep.mesh.numVertices(); ++v) {
        double w = rep.mesh.dualArea(v);
        Vec x = rep.mesh.position(v);
        mean_sq += w * (curv.mean.row(v).transpose() + 2.0 * x).squaredNorm();
        double len = x.norm();
        radial_sq += w * (len - 1.0) * (len - 1.0);
        sup = std::max(sup, len);
    }
    rep.mean_l2 = std::sqrt(mean_sq);
    rep.radial_l2 = std::sqrt(radial_sq);
    rep.id_sup = sup;
    rep.radius_dev = std::abs(fit.radius - 1.0);
    return rep;
}

} // namespace umb
