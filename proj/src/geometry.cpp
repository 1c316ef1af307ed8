#include "umb/geometry.hpp"

#include "umb/errors.hpp"
#include "umb/parallel.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>

namespace umb {

double energyThreshold(int ambient_dim) {
    if (ambient_dim == 3) return 4.0 * M_PI;
    if (ambient_dim == 4) return 8.0 * M_PI / 3.0;
    return 2.0 * M_PI;
}

std::vector<TangentFrame> fitTangentFrames(const EmbeddedMesh& mesh,
                                           const Config& cfg) {
    const int n = mesh.ambientDim();
    const int nv = mesh.numVertices();
    std::vector<TangentFrame> frames(nv);

    parallelFor(nv, cfg.threads, [&](int v) {
        std::vector<int> ring = mesh.twoRing(v);
        Vec center = mesh.position(v);

        double wsum = mesh.dualArea(v);
        Vec mean = wsum * center;
        for (int u : ring) {
            double w = mesh.dualArea(u);
            wsum += w;
            mean += w * mesh.position(u);
        }
        mean /= wsum;

        Mat cov = Mat::Zero(n, n);
        {
            Vec d = center - mean;
            cov += mesh.dualArea(v) * d * d.transpose();
        }
        for (int u : ring) {
            Vec d = mesh.position(u) - mean;
            cov += mesh.dualArea(u) * d * d.transpose();
        }

        Eigen::SelfAdjointEigenSolver<Mat> eig(cov);
        // eigenvalues ascending: last two span the tangent plane
        Vec evals = eig.eigenvalues();
        if (!(evals[n - 2] > 1e-12 * std::max(evals[n - 1], 1e-300)))
            throw RankDeficient("2-ring of vertex " + std::to_string(v) +
                                " does not span a 2-plane");
        TangentFrame frame;
        frame.tangent.resize(n, 2);
        frame.tangent.col(0) = eig.eigenvectors().col(n - 1);
        frame.tangent.col(1) = eig.eigenvectors().col(n - 2);
        frame.normal = eig.eigenvectors().leftCols(n - 2);
        frame.residual = std::sqrt(std::max(0.0, evals.head(n - 2).sum() / wsum));
        frames[v] = std::move(frame);
    });
    return frames;
}

double CurvatureField::fundaDeficitSq(int v) const {
    const auto& frame = frames[v];
    const FormCoeffs& coeff = A[v];
    Vec nu_coords = frame.normal.transpose() * nu.row(v).transpose();
    double sum = 0.0;
    for (int k = 0; k < coeff.rows(); ++k) {
        double a11 = coeff(k, 0) - nu_coords[k];
        double a12 = coeff(k, 1);
        double a22 = coeff(k, 2) - nu_coords[k];
        sum += a11 * a11 + 2.0 * a12 * a12 + a22 * a22;
    }
    return sum;
}

CurvatureField secondFundamentalForm(const EmbeddedMesh& mesh,
                                     std::vector<TangentFrame> frames,
                                     const Config& cfg) {
    const int n = mesh.ambientDim();
    const int nv = mesh.numVertices();
    const int codim = n - 2;

    CurvatureField curv;
    curv.frames = std::move(frames);
    curv.A.resize(nv);
    curv.mean.resize(nv, n);
    curv.nu.resize(nv, n);
    curv.a_sq.resize(nv);
    curv.a0_sq.resize(nv);
    curv.k_gauss.resize(nv);
    curv.k_defect.resize(nv);

    parallelFor(nv, cfg.threads, [&](int v) {
        const TangentFrame& frame = curv.frames[v];
        std::vector<int> ring = mesh.twoRing(v);
        if (static_cast<int>(ring.size()) < 5)
            throw RankDeficient("vertex " + std::to_string(v) + " has only " +
                                std::to_string(ring.size()) + " 2-ring neighbours");
        Vec center = mesh.position(v);

        Mat X(ring.size(), 5);
        Mat W(ring.size(), codim);
        for (size_t i = 0; i < ring.size(); ++i) {
            Vec d = mesh.position(ring[i]) - center;
            double s = frame.tangent.col(0).dot(d);
            double t = frame.tangent.col(1).dot(d);
            X(i, 0) = s;
            X(i, 1) = t;
            X(i, 2) = 0.5 * s * s;
            X(i, 3) = s * t;
            X(i, 4) = 0.5 * t * t;
            W.row(i) = (frame.normal.transpose() * d).transpose();
        }
        Eigen::ColPivHouseholderQR<Mat> qr(X);
        if (qr.rank() < 5)
            throw RankDeficient("quadratic fit underdetermined at vertex " +
                                std::to_string(v));
        Mat coeffs = qr.solve(W); // 5 x codim

        FormCoeffs A(codim, 3);
        for (int k = 0; k < codim; ++k) {
            A(k, 0) = coeffs(2, k);
            A(k, 1) = coeffs(3, k);
            A(k, 2) = coeffs(4, k);
        }
        curv.A[v] = A;

        // H = trace of A, a vector in the normal space
        Vec trace_coords(codim);
        for (int k = 0; k < codim; ++k) trace_coords[k] = A(k, 0) + A(k, 2);
        Vec H = frame.normal * trace_coords;
        curv.mean.row(v) = H.transpose();

        double a_sq = 0.0, h_sq = trace_coords.squaredNorm();
        double k_gauss = 0.0;
        for (int k = 0; k < codim; ++k) {
            a_sq += A(k, 0) * A(k, 0) + 2.0 * A(k, 1) * A(k, 1) + A(k, 2) * A(k, 2);
            k_gauss += A(k, 0) * A(k, 2) - A(k, 1) * A(k, 1);
        }
        curv.a_sq[v] = a_sq;
        curv.a0_sq[v] = a_sq - 0.5 * h_sq;
        curv.k_gauss[v] = k_gauss;
        curv.k_defect[v] = mesh.angleDefect(v) / mesh.dualArea(v);

        double hnorm = std::sqrt(h_sq);
        if (hnorm > cfg.mean_curvature_floor)
            curv.nu.row(v) = (H / hnorm).transpose();
        else
            curv.nu.row(v) = frame.normal.col(0).transpose();
    });
    return curv;
}

EnergyReport willmoreEnergy(const EmbeddedMesh& mesh, const CurvatureField& curv) {
    EnergyReport rep;
    const int nv = mesh.numVertices();
    for (int v = 0; v < nv; ++v) {
        double w = mesh.dualArea(v);
        rep.willmore += 0.25 * w * curv.mean.row(v).squaredNorm();
        rep.a0_l2sq += w * curv.a0_sq[v];
        rep.gauss_bonnet_int += w * curv.k_defect[v];
        rep.gauss_int_fitted += w * curv.k_gauss[v];
    }
    rep.area = mesh.totalArea();
    rep.chi = mesh.eulerCharacteristic();
    rep.e_n = energyThreshold(mesh.ambientDim());
    rep.tau = 2.0 * rep.e_n - rep.a0_l2sq;
    rep.area_normalized = std::abs(rep.area - 4.0 * M_PI) < 1e-6 * 4.0 * M_PI;
    rep.hypothesis_ok = rep.a0_l2sq < 2.0 * rep.e_n;
    return rep;
}

GaussEstimate gaussEstimateCheck(const CurvatureField& curv, int ambient_dim,
                                 const Config& cfg) {
    GaussEstimate est;
    est.c_n = cfg.gauss_estimate_cn > 0.0 ? cfg.gauss_estimate_cn
                                          : static_cast<double>(ambient_dim - 1);
    const int nv = static_cast<int>(curv.a0_sq.size());
    est.residual.resize(nv);
    est.bound.resize(nv);
    for (int v = 0; v < nv; ++v) {
        double half_h_sq = 0.25 * curv.mean.row(v).squaredNorm();
        est.residual[v] = std::abs(curv.k_gauss[v] - half_h_sq);
        est.bound[v] = est.c_n * curv.a0_sq[v];
        if (est.residual[v] > est.bound[v] + 1e-6) est.violations.push_back(v);
    }
    return est;
}

Mat meanCurvatureCotan(const EmbeddedMesh& mesh) {
    const int nv = mesh.numVertices();
    Mat lap = Mat::Zero(nv, mesh.ambientDim());
    // accumulate 0.5 cot(angle at c) (f_b - f_a) onto both ends of edge (a,b)
    for (int f = 0; f < mesh.numFaces(); ++f) {
        for (int k = 0; k < 3; ++k) {
            int a = mesh.faces()(f, (k + 1) % 3);
            int b = mesh.faces()(f, (k + 2) % 3);
            double ang = mesh.cornerAngle(f, k);
            double cot = std::cos(ang) / std::max(std::sin(ang), 1e-300);
            Vec diff = mesh.position(b) - mesh.position(a);
            lap.row(a) += 0.5 * cot * diff.transpose();
            lap.row(b) -= 0.5 * cot * diff.transpose();
        }
    }
    for (int v = 0; v < nv; ++v) lap.row(v) /= mesh.dualArea(v);
    return lap;
}

} // namespace umb
