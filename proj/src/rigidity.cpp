#include "umb/rigidity.hpp"

#include "umb/errors.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/QR>
#include <cmath>

namespace umb {

namespace {

using Triplet = Eigen::Triplet<double>;

double cornerAngleFromPoints(const Eigen::Vector3d& a, const Eigen::Vector3d& b,
                             const Eigen::Vector3d& c) {
    Eigen::Vector3d u = b - a, w = c - a;
    double cosang = u.dot(w) / (u.norm() * w.norm());
    return std::acos(std::clamp(cosang, -1.0, 1.0));
}

} // namespace

LaplaceOperator LaplaceOperator::build(const SphericalParam& param) {
    const int nv = param.numVertices();
    const int nf = static_cast<int>(param.faces.rows());
    std::vector<Triplet> trip;
    Vec mass = Vec::Zero(nv);
    Vec diag = Vec::Zero(nv);
    std::vector<Triplet> off;
    for (int f = 0; f < nf; ++f) {
        int idx[3] = {param.faces(f, 0), param.faces(f, 1), param.faces(f, 2)};
        Eigen::Vector3d p[3];
        for (int k = 0; k < 3; ++k) p[k] = param.images.row(idx[k]);
        double area = 0.5 * (p[1] - p[0]).cross(p[2] - p[0]).norm();
        for (int k = 0; k < 3; ++k) mass[idx[k]] += area / 3.0;
        for (int k = 0; k < 3; ++k) {
            int a = idx[(k + 1) % 3], b = idx[(k + 2) % 3];
            double ang = cornerAngleFromPoints(p[k], p[(k + 1) % 3], p[(k + 2) % 3]);
            double w = 0.5 * std::cos(ang) / std::max(std::sin(ang), 1e-12);
            off.emplace_back(a, b, -w);
            off.emplace_back(b, a, -w);
            diag[a] += w;
            diag[b] += w;
        }
    }
    for (int v = 0; v < nv; ++v) off.emplace_back(v, v, diag[v]);
    LaplaceOperator lap;
    lap.stiffness.resize(nv, nv);
    lap.stiffness.setFromTriplets(off.begin(), off.end());
    lap.mass = mass;
    return lap;
}

Mat LaplaceOperator::laplacian(const Mat& f) const {
    Mat lf = stiffness * f;
    for (int v = 0; v < lf.rows(); ++v) lf.row(v) /= -mass[v];
    return lf;
}

ConfFactorL2 confFactorL2(const SphericalParam& param, const CurvatureField& curv,
                          const LaplaceOperator& lap) {
    const int nv = param.numVertices();
    ConfFactorL2 out;
    Vec lap_u = -(lap.stiffness * param.u);
    double u_sq = 0.0, res_sq = 0.0, lin_l1 = 0.0;
    for (int v = 0; v < nv; ++v) {
        double m = lap.mass[v];
        double u = param.u[v];
        u_sq += m * u * u;
        double gauss = curv.k_defect[v] * std::exp(2.0 * u) - 1.0;
        double res = lap_u[v] / m - gauss; // -Delta u = K e^{2u} - 1
        res_sq += m * res * res;
        lin_l1 += m * std::abs(-lap_u[v] / m + 2.0 * u);
    }
    out.u_l2 = std::sqrt(u_sq);
    out.gauss_residual_l2 = std::sqrt(res_sq);
    out.linearized_l1 = lin_l1;
    return out;
}

HarmonicProjection harmonicProject(const SphericalParam& param,
                                   const EmbeddedMesh& mesh,
                                   const LaplaceOperator& lap, const Config& cfg) {
    const int nv = param.numVertices();
    const int n = mesh.ambientDim();

    // candidate eigenfunctions {1, x1, x2, x3}; Gram-Schmidt in the mass
    // inner product keeps Bessel/Parseval exact at the discrete level
    Mat V(nv, 4);
    V.col(0).setOnes();
    V.rightCols(3) = param.images;
    Mat C = Mat::Identity(4, 4); // row m: v_m in the {1, x1, x2, x3} basis
    for (int m = 0; m < 4; ++m) {
        for (int j = 0; j < m; ++j) {
            double ip = (V.col(m).array() * V.col(j).array() * lap.mass.array()).sum();
            V.col(m) -= ip * V.col(j);
            C.row(m) -= ip * C.row(j);
        }
        double norm =
            std::sqrt((V.col(m).array().square() * lap.mass.array()).sum());
        V.col(m) /= norm;
        C.row(m) /= norm;
    }

    HarmonicProjection proj;
    proj.alpha.resize(4, n);
    for (int m = 0; m < 4; ++m)
        proj.alpha.row(m) =
            (mesh.positions().array().colwise() * (V.col(m).array() * lap.mass.array()))
                .colwise()
                .sum();

    // l(x) = sum_{i>=1} alpha_i v_i(x) with v_i(x) = C(i,0) + sum_k C(i,k+1) x_k
    proj.l = Mat::Zero(n, 3);
    for (int i = 1; i < 4; ++i)
        for (int k = 0; k < 3; ++k)
            proj.l.col(k) += C(i, k + 1) * proj.alpha.row(i).transpose();
    // constant component of the degree-<=1 reconstruction
    Vec tr = Vec::Zero(n);
    for (int m = 0; m < 4; ++m) tr += C(m, 0) * proj.alpha.row(m).transpose();
    proj.translation = tr;

    // residual f - sum_m alpha_m v_m
    Mat recon = Mat::Zero(nv, n);
    for (int m = 0; m < 4; ++m) recon += V.col(m) * proj.alpha.row(m);
    double res_sq = 0.0;
    for (int v = 0; v < nv; ++v)
        res_sq += lap.mass[v] * (mesh.positions().row(v) - recon.row(v)).squaredNorm();
    proj.residual_l2 = std::sqrt(res_sq);

    Mat lapf = lap.laplacian(mesh.positions());
    double eig_sq = 0.0;
    for (int v = 0; v < nv; ++v)
        eig_sq += lap.mass[v] * (lapf.row(v) + 2.0 * mesh.positions().row(v)).squaredNorm();
    proj.eigen_residual = std::sqrt(eig_sq);
    proj.gap_bound = proj.eigen_residual / std::min(2.0, 6.0 - 2.0);
    double scale = std::sqrt((mesh.positions().array().square().colwise() *
                              lap.mass.array())
                                 .sum());
    proj.gap_ok = proj.residual_l2 <= proj.gap_bound + cfg.spectral_slack * (1.0 + scale);
    return proj;
}

Mat polarFrameOracle(const Mat& l) {
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d> eig(l.transpose() * l);
    Eigen::Matrix3d inv_sqrt = Eigen::Matrix3d::Zero();
    for (int k = 0; k < 3; ++k) {
        double lam = eig.eigenvalues()[k];
        if (lam <= 0.0) throw AlignmentFailure("rank-deficient linear map");
        inv_sqrt += eig.eigenvectors().col(k) * eig.eigenvectors().col(k).transpose() /
                    std::sqrt(lam);
    }
    return l * inv_sqrt;
}

RotationExtraction extractRotation(const HarmonicProjection& proj,
                                   const EmbeddedMesh& mesh, const Config& cfg) {
    const int n = mesh.ambientDim();
    Mat gram = proj.l.transpose() * proj.l;
    double dev = (gram - Mat::Identity(3, 3)).cwiseAbs().maxCoeff();
    if (dev > cfg.gram_max_dev)
        throw AlignmentFailure("Gram deviation " + std::to_string(dev) +
                               " exceeds " + std::to_string(cfg.gram_max_dev));

    RotationExtraction out{Mat(n, 3), Mat(n, n), dev, 0.0, mesh};
    // Gram-Schmidt in column order
    for (int k = 0; k < 3; ++k) {
        Vec col = proj.l.col(k);
        for (int j = 0; j < k; ++j) col -= out.frame.col(j).dot(col) * out.frame.col(j);
        out.frame.col(k) = col.normalized();
    }
    out.polar_dev = (out.frame - polarFrameOracle(proj.l)).cwiseAbs().maxCoeff();

    // complete to a proper orthonormal basis; R maps frame -> e_1..e_3
    Mat Q(n, n);
    Q.leftCols(3) = out.frame;
    Eigen::HouseholderQR<Mat> qr(out.frame);
    Mat full = qr.householderQ();
    for (int k = 3; k < n; ++k) Q.col(k) = full.col(k);
    if (Q.determinant() < 0.0) Q.col(n - 1) *= -1.0;
    out.rotation = Q.transpose();

    EmbeddedMesh centered = mesh.translated(-proj.translation);
    out.aligned = centered.rotated(out.rotation);
    return out;
}

double w22Deficit(const EmbeddedMesh& aligned, const SphericalParam& param,
                  const LaplaceOperator& lap) {
    const int nv = aligned.numVertices();
    const int n = aligned.ambientDim();
    Mat d(nv, n);
    for (int v = 0; v < nv; ++v) {
        Vec id = Vec::Zero(n);
        id.head(3) = param.images.row(v).transpose();
        d.row(v) = aligned.positions().row(v) - id.transpose();
    }
    double l2 = 0.0;
    for (int v = 0; v < nv; ++v) l2 += lap.mass[v] * d.row(v).squaredNorm();
    double dirichlet = (d.transpose() * (lap.stiffness * d)).trace();
    Mat lapd = lap.stiffness * d;
    double lap_l2 = 0.0;
    for (int v = 0; v < nv; ++v) lap_l2 += lapd.row(v).squaredNorm() / lap.mass[v];
    return std::sqrt(l2 + std::max(0.0, dirichlet) + lap_l2);
}

RigidityReport analyzeMesh(const EmbeddedMesh& mesh, const Config& cfg,
                           bool skip_conformal) {
    RigidityReport rep;
    rep.ambient_dim = mesh.ambientDim();
    rep.chi = mesh.eulerCharacteristic();
    rep.area = mesh.totalArea();

    auto frames = fitTangentFrames(mesh, cfg);
    auto curv = secondFundamentalForm(mesh, std::move(frames), cfg);
    auto energy = willmoreEnergy(mesh, curv);
    rep.willmore = energy.willmore;
    rep.e_n = energy.e_n;
    rep.tau = energy.tau;
    rep.a0_l2 = std::sqrt(energy.a0_l2sq);
    rep.hypothesis_ok = energy.hypothesis_ok;

    double funda_sq = 0.0, gauss_l1 = 0.0, a_sq = 0.0;
    for (int v = 0; v < mesh.numVertices(); ++v) {
        double w = mesh.dualArea(v);
        funda_sq += w * curv.fundaDeficitSq(v);
        gauss_l1 += w * std::abs(curv.k_defect[v] - 1.0);
        a_sq += w * curv.a_sq[v];
    }
    rep.funda_deficit = std::sqrt(funda_sq);
    rep.gauss_deficit = gauss_l1;
    rep.a_l2 = std::sqrt(a_sq);

    double delta0_sq = cfg.delta0_sq > 0.0 ? cfg.delta0_sq : rep.e_n;
    if (energy.a0_l2sq >= delta0_sq) {
        rep.vacuous_bound_mode = true;
        rep.large_branch_const = std::sqrt(2.0 + 8.0 * M_PI / delta0_sq);
        rep.large_branch_ok = rep.a_l2 <= rep.large_branch_const * rep.a0_l2;
    }

    if (rep.a0_l2 > 0.0) {
        rep.c_funda = rep.funda_deficit / rep.a0_l2;
        rep.c_gauss = rep.gauss_deficit / energy.a0_l2sq;
    }

    if (skip_conformal) {
        rep.theorem12_status = "skipped";
        return rep;
    }
    if (rep.chi != 2) {
        rep.theorem12_status = "NotSphereType";
        return rep;
    }

    // sphere stage: Fubini center, tangent sphere, recentering
    FubiniCenter fub = selectFubiniCenter(mesh, curv, 256, cfg);
    SphereFit fit = tangentSphere(mesh, curv, fub.vertex, cfg);
    rep.sphere_center_dist = fit.center.norm();
    rep.sphere_radius = fit.radius;
    RecenterReport rec = recenterUnit(mesh, curv, fit);
    rep.mean_deficit = rec.mean_l2;
    rep.radial_deficit = rec.radial_l2;
    rep.id_sup = rec.id_sup;

    SphericalParam param = parametrizeSphere(rec.mesh, cfg);
    param = moebiusBalance(param, cfg);
    rep.half_area_dev = param.halfAreaDeviation();
    rep.qc_error_max = param.qc_error.maxCoeff();
    rep.u_inf = param.u.cwiseAbs().maxCoeff();

    LaplaceOperator lap = LaplaceOperator::build(param);
    ConfFactorL2 cf = confFactorL2(param, curv, lap);
    rep.u_l2 = cf.u_l2;

    HarmonicProjection proj = harmonicProject(param, rec.mesh, lap, cfg);
    RotationExtraction rot = extractRotation(proj, rec.mesh, cfg);
    rep.w22_deficit = w22Deficit(rot.aligned, param, lap);

    if (rep.a0_l2 > 0.0) {
        rep.c_mean = rep.mean_deficit / rep.a0_l2;
        rep.c_w22 = rep.w22_deficit / rep.a0_l2;
        rep.c_uinf = rep.u_inf / rep.a0_l2;
        rep.c_ul2 = rep.u_l2 / rep.a0_l2;
    }
    return rep;
}

} // namespace umb
