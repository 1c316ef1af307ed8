#include "umb/conformal.hpp"

#include "umb/errors.hpp"

#include <Eigen/IterativeLinearSolvers>
#include <Eigen/Sparse>
#include <algorithm>
#include <cmath>
#include <map>
#include <random>

namespace umb {

namespace {

using Eigen::Vector2d;
using Eigen::Vector3d;
using SparseMat = Eigen::SparseMatrix<double>;
using Triplet = Eigen::Triplet<double>;

constexpr double kPoleTol = 1e-12;

Vec axisPole(int axis, int pole_sign, int dim = 3) {
    Vec p = Vec::Zero(dim);
    p[axis - 1] = pole_sign;
    return p;
}

// cotangent edge weights from the original (intrinsic) corner angles
std::map<std::pair<int, int>, double> cotanWeights(const EmbeddedMesh& mesh,
                                                   const std::vector<char>* face_mask) {
    std::map<std::pair<int, int>, double> w;
    for (int f = 0; f < mesh.numFaces(); ++f) {
        if (face_mask && !(*face_mask)[f]) continue;
        for (int k = 0; k < 3; ++k) {
            int a = mesh.faces()(f, (k + 1) % 3);
            int b = mesh.faces()(f, (k + 2) % 3);
            double ang = mesh.cornerAngle(f, k);
            double cot = std::cos(ang) / std::max(std::sin(ang), 1e-12);
            w[std::minmax(a, b)] += 0.5 * cot;
        }
    }
    return w;
}

double triangleArea2D(const Vector2d& a, const Vector2d& b, const Vector2d& c) {
    return 0.5 * std::abs((b - a).x() * (c - a).y() - (b - a).y() * (c - a).x());
}

// 2D coordinates (second row) of a triangle with the given side lengths
// placed as (0,0), (la,0), third point above the axis
Vector2d thirdPoint(double la, double lb, double lc) {
    // la = |AB|, lb = |AC|, lc = |BC|
    double x = (la * la + lb * lb - lc * lc) / (2.0 * la);
    double y2 = lb * lb - x * x;
    return {x, std::sqrt(std::max(0.0, y2))};
}

} // namespace

Vec stereographic(const Vec& x, const Vec& pole) {
    double dsq = (x - pole).squaredNorm();
    if (dsq < kPoleTol * kPoleTol)
        throw PoleSingularity("point coincides with the pole");
    return pole + 2.0 * (x - pole) / dsq;
}

double inversionConformalFactor(const Vec& x, const Vec& pole) {
    double d = (x - pole).norm();
    if (d < kPoleTol) throw PoleSingularity("point coincides with the pole");
    return 0.5 * std::log(4.0) - 2.0 * std::log(d);
}

double sphericalTriangleArea(const Vector3d& a, const Vector3d& b,
                             const Vector3d& c) {
    double num = std::abs(a.dot(b.cross(c)));
    double den = 1.0 + a.dot(b) + b.dot(c) + c.dot(a);
    return 2.0 * std::atan2(num, den);
}

double triangleDiskArea(const Vector2d& a, const Vector2d& b, const Vector2d& c,
                        double r) {
    auto wedge = [&](const Vector2d& p, const Vector2d& q) {
        auto tri = [](const Vector2d& u, const Vector2d& w) {
            return 0.5 * (u.x() * w.y() - u.y() * w.x());
        };
        auto sector = [&](const Vector2d& u, const Vector2d& w) {
            double ang = std::atan2(u.x() * w.y() - u.y() * w.x(), u.dot(w));
            return 0.5 * r * r * ang;
        };
        Vector2d d = q - p;
        double A = d.squaredNorm();
        double B = 2.0 * p.dot(d);
        double C = p.squaredNorm() - r * r;
        double ts[2];
        int nts = 0;
        double disc = B * B - 4.0 * A * C;
        if (disc > 0.0 && A > 0.0) {
            double s = std::sqrt(disc);
            for (double t : {(-B - s) / (2.0 * A), (-B + s) / (2.0 * A)})
                if (t > 0.0 && t < 1.0) ts[nts++] = t;
        }
        double area = 0.0;
        Vector2d prev = p;
        double prev_t = 0.0;
        for (int i = 0; i <= nts; ++i) {
            double t = i < nts ? ts[i] : 1.0;
            Vector2d cur = i < nts ? Vector2d(p + t * d) : q;
            Vector2d mid = p + 0.5 * (prev_t + t) * d;
            area += mid.squaredNorm() <= r * r ? tri(prev, cur) : sector(prev, cur);
            prev = cur;
            prev_t = t;
        }
        return area;
    };
    return std::abs(wedge(a, b) + wedge(b, c) + wedge(c, a));
}

double SphericalParam::halfAreaDeviation() const {
    double dev = 0.0;
    for (const auto& axis : half_areas)
        for (double h : axis) dev = std::max(dev, std::abs(h - 2.0 * M_PI));
    return dev;
}

SphericalParam parametrizeSphere(const EmbeddedMesh& mesh, const Config& cfg) {
    if (mesh.eulerCharacteristic() != 2 || mesh.hasBoundary())
        throw NotSphereType("Euler characteristic " +
                            std::to_string(mesh.eulerCharacteristic()));
    if (!mesh.isConnected()) throw NotSphereType("mesh is not connected");
    const int nv = mesh.numVertices();
    const int nf = mesh.numFaces();

    // (a) seed by maximal dual area
    int seed = 0;
    for (int v = 1; v < nv; ++v)
        if (mesh.dualArea(v) > mesh.dualArea(seed)) seed = v;

    // (b) lay out mesh minus star(seed); link goes to the unit circle by
    // arc length, interior solves the intrinsic cotan Laplace equation
    const std::vector<int>& link = mesh.oneRing(seed);
    std::vector<char> in_star(nf, 0);
    for (int f : mesh.vertexFaces(seed)) in_star[f] = 1;
    std::vector<char> keep_face(nf, 1);
    for (int f = 0; f < nf; ++f) keep_face[f] = !in_star[f];

    auto weights = cotanWeights(mesh, &keep_face);

    std::vector<double> cumlen(link.size() + 1, 0.0);
    for (size_t i = 0; i < link.size(); ++i) {
        int a = link[i], b = link[(i + 1) % link.size()];
        cumlen[i + 1] = cumlen[i] + (mesh.position(a) - mesh.position(b)).norm();
    }
    double total_len = cumlen[link.size()];

    std::vector<int> index(nv, -1); // interior unknown index
    std::vector<char> pinned(nv, 0);
    pinned[seed] = 1;
    for (int v : link) pinned[v] = 1;
    int nunk = 0;
    for (int v = 0; v < nv; ++v)
        if (!pinned[v]) index[v] = nunk++;

    Mat boundary_pos(nv, 2);
    boundary_pos.setZero();
    for (size_t i = 0; i < link.size(); ++i) {
        double theta = 2.0 * M_PI * cumlen[i] / total_len;
        boundary_pos.row(link[i]) << std::cos(theta), std::sin(theta);
    }

    std::vector<Triplet> trip;
    Mat rhs = Mat::Zero(nunk, 2);
    std::vector<double> diag(nunk, 0.0);
    for (const auto& [edge, w] : weights) {
        auto [a, b] = edge;
        if (index[a] >= 0) diag[index[a]] += w;
        if (index[b] >= 0) diag[index[b]] += w;
        if (index[a] >= 0 && index[b] >= 0) {
            trip.emplace_back(index[a], index[b], -w);
            trip.emplace_back(index[b], index[a], -w);
        } else if (index[a] >= 0) {
            rhs.row(index[a]) += w * boundary_pos.row(b);
        } else if (index[b] >= 0) {
            rhs.row(index[b]) += w * boundary_pos.row(a);
        }
    }
    for (int i = 0; i < nunk; ++i) trip.emplace_back(i, i, diag[i]);
    SparseMat L(nunk, nunk);
    L.setFromTriplets(trip.begin(), trip.end());

    Eigen::ConjugateGradient<SparseMat, Eigen::Lower | Eigen::Upper> cg;
    cg.setTolerance(cfg.solver_tol);
    cg.setMaxIterations(cfg.solver_max_iters);
    cg.compute(L);
    Mat layout_int = cg.solve(rhs);
    if (cg.info() != Eigen::Success)
        throw SolverFailure("CG residual " + std::to_string(cg.error()) + " after " +
                            std::to_string(cg.iterations()) + " iterations");

    Mat layout(nv, 2);
    for (int v = 0; v < nv; ++v)
        layout.row(v) = pinned[v] ? boundary_pos.row(v) : layout_int.row(index[v]);

    // (c),(d) inverse stereographic lift, seed at the pole
    SphericalParam param;
    param.images.resize(nv, 3);
    Vec pole = axisPole(3, 1);
    for (int v = 0; v < nv; ++v) {
        if (v == seed) {
            param.images.row(v) << 0, 0, 1;
            continue;
        }
        Vec p = Vec::Zero(3);
        p.head(2) = layout.row(v).transpose();
        Vec img = stereographic(p, pole);
        param.images.row(v) = img.transpose().head(3);
        param.images.row(v).normalize();
    }
    param.faces = mesh.faces();
    param.seed_vertex = seed;
    param.orig_face_areas = mesh.faceAreas();
    param.orig_dual_areas = mesh.dualAreas();

    // fix global orientation: image solid should be positively oriented
    double vol = 0.0;
    for (int f = 0; f < nf; ++f) {
        Vector3d a = param.images.row(param.faces(f, 0));
        Vector3d b = param.images.row(param.faces(f, 1));
        Vector3d c = param.images.row(param.faces(f, 2));
        vol += a.dot(b.cross(c));
    }
    if (vol < 0.0) param.images.col(1) *= -1.0;

    // (e) tangential cotan-Laplacian smoothing constrained to the sphere
    auto full_weights = cotanWeights(mesh, nullptr);
    std::vector<std::vector<std::pair<int, double>>> nbr(nv);
    for (const auto& [edge, w] : full_weights) {
        nbr[edge.first].emplace_back(edge.second, w);
        nbr[edge.second].emplace_back(edge.first, w);
    }
    for (int it = 0; it < cfg.smoothing_iters; ++it) {
        Eigen::Matrix<double, Eigen::Dynamic, 3> next = param.images;
        for (int v = 0; v < nv; ++v) {
            double wsum = 0.0;
            Vector3d acc = Vector3d::Zero();
            for (const auto& [u, w] : nbr[v]) {
                acc += w * (param.images.row(u) - param.images.row(v)).transpose();
                wsum += w;
            }
            if (wsum <= 0.0) continue;
            Vector3d p = param.images.row(v);
            Vector3d step = acc / wsum;
            step -= step.dot(p) * p;
            next.row(v) = (p + cfg.smoothing_lambda * step).normalized();
        }
        param.images = next;
    }

    // (f) conformal factor from dual-area ratios; image dual areas are
    // spherical so they tile 4 pi exactly for an injective image
    Vec img_dual = Vec::Zero(nv);
    for (int f = 0; f < nf; ++f) {
        double area = sphericalTriangleArea(param.images.row(param.faces(f, 0)),
                                            param.images.row(param.faces(f, 1)),
                                            param.images.row(param.faces(f, 2)));
        for (int k = 0; k < 3; ++k) img_dual[param.faces(f, k)] += area / 3.0;
    }
    param.u.resize(nv);
    for (int v = 0; v < nv; ++v)
        param.u[v] = 0.5 * std::log(param.orig_dual_areas[v] /
                                    std::max(img_dual[v], 1e-300));

    // (g) quasi-conformal error from the singular values of each face map
    param.qc_error.resize(nf);
    for (int f = 0; f < nf; ++f) {
        int i = param.faces(f, 0), j = param.faces(f, 1), k = param.faces(f, 2);
        double la = (mesh.position(j) - mesh.position(i)).norm();
        double lb = (mesh.position(k) - mesh.position(i)).norm();
        double lc = (mesh.position(k) - mesh.position(j)).norm();
        double ma = (param.images.row(j) - param.images.row(i)).norm();
        double mb = (param.images.row(k) - param.images.row(i)).norm();
        double mc = (param.images.row(k) - param.images.row(j)).norm();
        Eigen::Matrix2d E, F;
        E.col(0) << la, 0.0;
        E.col(1) = thirdPoint(la, lb, lc);
        F.col(0) << ma, 0.0;
        F.col(1) = thirdPoint(ma, mb, mc);
        Eigen::Matrix2d J = F * E.inverse();
        Eigen::JacobiSVD<Eigen::Matrix2d> svd(J);
        double s1 = svd.singularValues()[0], s2 = svd.singularValues()[1];
        param.qc_error[f] = s2 > 0.0 ? s1 / s2 : std::numeric_limits<double>::infinity();
    }

    for (int axis = 1; axis <= 3; ++axis) {
        double lower = chartDiskArea(param, axis, 1, 1.0);
        param.half_areas[axis - 1][0] = lower;
        param.half_areas[axis - 1][1] = 4.0 * M_PI - lower;
    }
    return param;
}

double chartDiskArea(const SphericalParam& param, int axis, int pole_sign, double r) {
    Vec pole = axisPole(axis, pole_sign);
    int c1 = axis % 3, c2 = (axis + 1) % 3; // in-plane coordinate indices
    const int nf = static_cast<int>(param.faces.rows());
    const int nv = param.numVertices();

    std::vector<char> at_pole(nv, 0);
    Mat plane(nv, 2);
    for (int v = 0; v < nv; ++v) {
        Vec img = param.images.row(v).transpose();
        if ((img - pole).norm() < 1e-9) {
            at_pole[v] = 1;
            plane.row(v).setZero();
            continue;
        }
        Vec z = stereographic(img, pole);
        plane(v, 0) = z[c1];
        plane(v, 1) = z[c2];
    }

    double area = 0.0;
    for (int f = 0; f < nf; ++f) {
        int i = param.faces(f, 0), j = param.faces(f, 1), k = param.faces(f, 2);
        if (at_pole[i] || at_pole[j] || at_pole[k]) continue; // touches infinity
        Vector2d a = plane.row(i), b = plane.row(j), c = plane.row(k);
        double tri = triangleArea2D(a, b, c);
        double frac;
        if (tri < 1e-280) {
            frac = ((a + b + c) / 3.0).norm() <= r ? 1.0 : 0.0;
        } else {
            frac = std::clamp(triangleDiskArea(a, b, c, r) / tri, 0.0, 1.0);
        }
        area += frac * param.orig_face_areas[f];
    }
    return area;
}

SphericalParam moebiusBalance(const SphericalParam& input, const Config& cfg) {
    SphericalParam param = input;
    const int nv = param.numVertices();

    auto applyPass = [&](int axis) {
        Vec pole = axisPole(axis, 1);
        auto areaAt = [&](double r) { return chartDiskArea(param, axis, 1, r); };

        double target = 2.0 * M_PI;
        double r = 1.0;
        if (std::abs(areaAt(1.0) - target) > cfg.bisection_tol) {
            double lo = cfg.moebius_r_min, hi = cfg.moebius_r_max;
            double alo = areaAt(lo), ahi = areaAt(hi);
            if (!(alo <= target && target <= ahi))
                throw BisectionFailure("half-area root not bracketed in [" +
                                       std::to_string(lo) + "," + std::to_string(hi) + "]");
            bool done = false;
            for (int it = 0; it < cfg.moebius_max_bisections; ++it) {
                r = std::sqrt(lo * hi);
                double a = areaAt(r);
                if (std::abs(a - target) <= cfg.bisection_tol) { done = true; break; }
                (a < target ? lo : hi) = r;
            }
            if (!done)
                throw BisectionFailure("bisection did not reach |area - 2pi| <= " +
                                       std::to_string(cfg.bisection_tol));
        }

        // apply phi = T^{-1} o (z/r) o T and update u by the composition law
        for (int v = 0; v < nv; ++v) {
            Vec img = param.images.row(v).transpose();
            double dpole = (img - pole).norm();
            if (dpole < 1e-9) {
                param.u[v] -= std::log(r); // limit of the factor at the pole
                continue;
            }
            // z lies in the chart plane through the origin; dilate about 0
            Vec z = stereographic(img, pole);
            Vec zr = z / r;
            Vec img_new = stereographic(zr, pole);
            img_new.head(3).normalize();
            double u_phi = 2.0 * std::log((img_new - pole).norm()) -
                           2.0 * std::log(dpole) - std::log(r);
            param.images.row(v) = img_new.transpose().head(3);
            param.u[v] -= u_phi;
        }
        param.transforms.push_back({axis, 1, r});
    };

    double dev = std::numeric_limits<double>::infinity();
    for (int sweep = 0; sweep < cfg.moebius_max_sweeps; ++sweep) {
        for (int axis : {3, 2, 1}) applyPass(axis);
        for (int axis = 1; axis <= 3; ++axis) {
            double lower = chartDiskArea(param, axis, 1, 1.0);
            param.half_areas[axis - 1][0] = lower;
            param.half_areas[axis - 1][1] = 4.0 * M_PI - lower;
        }
        dev = param.halfAreaDeviation();
        if (dev <= cfg.half_area_tol) return param;
    }
    throw BisectionFailure("half areas did not converge, deviation " +
                           std::to_string(dev));
}

InvertedSurface inversionSurface(const EmbeddedMesh& mesh, const SphericalParam& param,
                                 const Config& cfg) {
    (void)cfg;
    const int nv = mesh.numVertices();
    const int n = mesh.ambientDim();
    Vec pole3 = axisPole(3, 1);

    int pole_vertex = 0;
    double best = std::numeric_limits<double>::infinity();
    for (int v = 0; v < nv; ++v) {
        double d = (param.images.row(v).transpose() - pole3).norm();
        if (d < best) { best = d; pole_vertex = v; }
    }

    Vec pole_n = Vec::Zero(n);
    pole_n[2] = 1.0;
    EmbeddedMesh shifted = mesh.translated(pole_n - mesh.position(pole_vertex));
    for (int v = 0; v < nv; ++v) {
        if (v == pole_vertex) continue;
        if ((shifted.position(v) - pole_n).norm() < 1e-9)
            throw PoleOnSurface("vertex " + std::to_string(v) +
                                " collides with the inversion pole");
    }

    InvertedSurface inv;
    inv.pole_vertex = pole_vertex;
    inv.vertex_map.reserve(nv - 1);
    std::vector<int> new_index(nv, -1);
    for (int v = 0; v < nv; ++v) {
        if (v == pole_vertex) continue;
        new_index[v] = static_cast<int>(inv.vertex_map.size());
        inv.vertex_map.push_back(v);
    }
    int kept_faces = 0;
    for (int f = 0; f < mesh.numFaces(); ++f) {
        bool touches = false;
        for (int k = 0; k < 3; ++k) touches |= mesh.faces()(f, k) == pole_vertex;
        if (!touches) ++kept_faces;
    }
    inv.faces.resize(kept_faces, 3);
    int fi = 0;
    for (int f = 0; f < mesh.numFaces(); ++f) {
        bool touches = false;
        for (int k = 0; k < 3; ++k) touches |= mesh.faces()(f, k) == pole_vertex;
        if (touches) continue;
        for (int k = 0; k < 3; ++k) inv.faces(fi, k) = new_index[mesh.faces()(f, k)];
        ++fi;
    }

    const int nkept = static_cast<int>(inv.vertex_map.size());
    inv.positions.resize(nkept, n);
    inv.plane.resize(nkept, 2);
    inv.u_hat.resize(nkept);
    for (int i = 0; i < nkept; ++i) {
        int v = inv.vertex_map[i];
        Vec fx = shifted.position(v);
        inv.positions.row(i) = stereographic(fx, pole_n).transpose();
        Vec img = param.images.row(v).transpose();
        Vec z = stereographic(img, pole3);
        inv.plane(i, 0) = z[0];
        inv.plane(i, 1) = z[1];
        inv.u_hat[i] = param.u[v] - 2.0 * std::log((fx - pole_n).norm() /
                                                   (img - pole3).norm());
    }

    // lambda-normalization: u_hat at infinity realized as the one-ring
    // average around the removed pole
    double lambda = 0.0;
    const auto& ring = mesh.oneRing(pole_vertex);
    for (int u : ring) lambda += inv.u_hat[new_index[u]];
    lambda /= static_cast<double>(ring.size());
    inv.lambda_hat = lambda;
    inv.u_hat.array() -= lambda;
    inv.osc_u_hat = inv.u_hat.maxCoeff() - inv.u_hat.minCoeff();

    std::mt19937 rng(42);
    std::uniform_int_distribution<int> pick(0, nkept - 1);
    double lo = std::numeric_limits<double>::infinity(), hi = 0.0;
    for (int s = 0; s < 2000; ++s) {
        int i = pick(rng), j = pick(rng);
        if (i == j) continue;
        double dz = (inv.plane.row(i) - inv.plane.row(j)).norm();
        if (dz < 1e-12) continue;
        double ratio = (inv.positions.row(i) - inv.positions.row(j)).norm() / dz;
        lo = std::min(lo, ratio);
        hi = std::max(hi, ratio);
    }
    inv.bilipschitz_min = lo;
    inv.bilipschitz_max = hi;
    return inv;
}

ConfSmallReport confSmallCheck(const EmbeddedMesh& aligned_mesh,
                               const SphericalParam& param, const Config& cfg) {
    const int nv = aligned_mesh.numVertices();
    const int n = aligned_mesh.ambientDim();
    ConfSmallReport rep;

    for (int v = 0; v < nv; ++v) {
        Vec embed = Vec::Zero(n);
        embed.head(3) = param.images.row(v).transpose();
        rep.delta = std::max(rep.delta, (aligned_mesh.position(v) - embed).norm());
    }

    double lo_min = 1e300, lo_max = -1e300, hi_min = 1e300, hi_max = -1e300;
    for (int v = 0; v < nv; ++v) {
        double x3 = param.images(v, 2);
        if (x3 <= 0.0) {
            lo_min = std::min(lo_min, param.u[v]);
            lo_max = std::max(lo_max, param.u[v]);
        }
        if (x3 >= 0.0) {
            hi_min = std::min(hi_min, param.u[v]);
            hi_max = std::max(hi_max, param.u[v]);
        }
    }
    rep.osc_lower = lo_max - lo_min;
    rep.osc_upper = hi_max - hi_min;
    rep.osc_total = param.u.maxCoeff() - param.u.minCoeff();

    // quotient-bound route: osc(u) <= osc(u_hat) + 2 log((1+d)/(1-d)) per half
    double d = std::min(rep.delta, 0.5);
    double quot = 2.0 * (std::log1p(d) - std::log1p(-d));
    auto oscHatOnHalf = [&](bool rotate) {
        EmbeddedMesh m = aligned_mesh;
        SphericalParam p = param;
        if (rotate) {
            // map -e3 to e3: flip coords 2 and 3
            Mat R = Mat::Identity(n, n);
            R(1, 1) = -1.0;
            R(2, 2) = -1.0;
            m = m.rotated(R);
            p.images.col(1) *= -1.0;
            p.images.col(2) *= -1.0;
        }
        InvertedSurface inv = inversionSurface(m, p, cfg);
        double mn = 1e300, mx = -1e300;
        for (size_t i = 0; i < inv.vertex_map.size(); ++i) {
            if (p.images(inv.vertex_map[i], 2) > 0.0) continue;
            mn = std::min(mn, inv.u_hat[i]);
            mx = std::max(mx, inv.u_hat[i]);
        }
        return mx - mn;
    };
    rep.osc_bound_lower = oscHatOnHalf(false) + quot;
    rep.osc_bound_upper = oscHatOnHalf(true) + quot;

    int pivot = 0;
    for (int v = 1; v < nv; ++v)
        if (std::abs(param.u[v]) < std::abs(param.u[pivot])) pivot = v;
    rep.u_at_pivot = param.u[pivot];
    rep.u_inf = param.u.cwiseAbs().maxCoeff();
    rep.pivot_ok = param.u.minCoeff() <= 1e-6 && param.u.maxCoeff() >= -1e-6;
    rep.inf_bound_ok = rep.u_inf <= rep.osc_total + std::abs(rep.u_at_pivot) + 1e-12;
    return rep;
}

} // namespace umb
