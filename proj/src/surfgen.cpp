#include "umb/surfgen.hpp"

#include "umb/errors.hpp"

#include <array>
#include <cmath>
#include <functional>
#include <map>
#include <vector>

namespace umb {

namespace {

using Eigen::Vector3d;

// ---------------------------------------------------------------- icosphere

struct TriSoup {
    std::vector<Vector3d> verts;
    std::vector<std::array<int, 3>> faces;
};

TriSoup icosahedron() {
    const double t = (1.0 + std::sqrt(5.0)) / 2.0;
    TriSoup s;
    s.verts = {
        {-1, t, 0}, {1, t, 0},   {-1, -t, 0}, {1, -t, 0},
        {0, -1, t}, {0, 1, t},   {0, -1, -t}, {0, 1, -t},
        {t, 0, -1}, {t, 0, 1},   {-t, 0, -1}, {-t, 0, 1},
    };
    for (auto& v : s.verts) v.normalize();
    s.faces = {
        {0, 11, 5}, {0, 5, 1},  {0, 1, 7},   {0, 7, 10}, {0, 10, 11},
        {1, 5, 9},  {5, 11, 4}, {11, 10, 2}, {10, 7, 6}, {7, 1, 8},
        {3, 9, 4},  {3, 4, 2},  {3, 2, 6},   {3, 6, 8},  {3, 8, 9},
        {4, 9, 5},  {2, 4, 11}, {6, 2, 10},  {8, 6, 7},  {9, 8, 1},
    };
    return s;
}

TriSoup subdivideProjected(const TriSoup& in) {
    TriSoup out;
    out.verts = in.verts;
    std::map<std::pair<int, int>, int> midpoint;
    auto mid = [&](int a, int b) {
        auto key = std::minmax(a, b);
        auto it = midpoint.find(key);
        if (it != midpoint.end()) return it->second;
        Vector3d m = (out.verts[a] + out.verts[b]).normalized();
        int idx = static_cast<int>(out.verts.size());
        out.verts.push_back(m);
        midpoint[key] = idx;
        return idx;
    };
    for (const auto& f : in.faces) {
        int ab = mid(f[0], f[1]), bc = mid(f[1], f[2]), ca = mid(f[2], f[0]);
        out.faces.push_back({f[0], ab, ca});
        out.faces.push_back({f[1], bc, ab});
        out.faces.push_back({f[2], ca, bc});
        out.faces.push_back({ab, bc, ca});
    }
    return out;
}

TriSoup icosphereSoup(int level) {
    if (level < 0 || level > 8) throw InvalidSpec("icosphere level out of range [0,8]");
    TriSoup s = icosahedron();
    for (int i = 0; i < level; ++i) s = subdivideProjected(s);
    return s;
}

EmbeddedMesh soupToMesh(const TriSoup& s, int ambient_dim,
                        const std::function<Vec(const Vector3d&)>& embed) {
    Mat positions(s.verts.size(), ambient_dim);
    for (size_t v = 0; v < s.verts.size(); ++v)
        positions.row(v) = embed(s.verts[v]).transpose();
    FaceMat faces(s.faces.size(), 3);
    for (size_t f = 0; f < s.faces.size(); ++f)
        for (int k = 0; k < 3; ++k) faces(f, k) = s.faces[f][k];
    return EmbeddedMesh::fromData(std::move(positions), std::move(faces));
}

// ------------------------------------------------- surfaces of revolution

// rings[i] = (radius, height); first/last may be poles (radius 0)
EmbeddedMesh revolve(const std::vector<std::pair<double, double>>& rings,
                     int segments) {
    if (segments < 8) throw InvalidSpec("need >= 8 azimuthal segments");
    std::vector<Vector3d> verts;
    std::vector<std::array<int, 3>> faces;

    bool north_pole = rings.front().first == 0.0;
    bool south_pole = rings.back().first == 0.0;
    size_t first_ring = north_pole ? 1 : 0;
    size_t last_ring = south_pole ? rings.size() - 2 : rings.size() - 1;

    int north_idx = -1, south_idx = -1;
    if (north_pole) {
        north_idx = static_cast<int>(verts.size());
        verts.push_back({0, 0, rings.front().second});
    }
    std::vector<int> ring_start;
    for (size_t i = first_ring; i <= last_ring; ++i) {
        ring_start.push_back(static_cast<int>(verts.size()));
        for (int j = 0; j < segments; ++j) {
            double phi = 2.0 * M_PI * j / segments;
            verts.push_back({rings[i].first * std::cos(phi),
                             rings[i].first * std::sin(phi), rings[i].second});
        }
    }
    if (south_pole) {
        south_idx = static_cast<int>(verts.size());
        verts.push_back({0, 0, rings.back().second});
    }

    // outward orientation with rings ordered from +z down to -z
    if (north_pole)
        for (int j = 0; j < segments; ++j)
            faces.push_back({north_idx, ring_start[0] + j,
                             ring_start[0] + (j + 1) % segments});
    for (size_t r = 0; r + 1 < ring_start.size(); ++r) {
        for (int j = 0; j < segments; ++j) {
            int a = ring_start[r] + j, b = ring_start[r] + (j + 1) % segments;
            int c = ring_start[r + 1] + j, d = ring_start[r + 1] + (j + 1) % segments;
            faces.push_back({a, c, d});
            faces.push_back({a, d, b});
        }
    }
    if (south_pole) {
        size_t r = ring_start.size() - 1;
        for (int j = 0; j < segments; ++j)
            faces.push_back({south_idx, ring_start[r] + (j + 1) % segments,
                             ring_start[r] + j});
    }

    Mat positions(verts.size(), 3);
    for (size_t v = 0; v < verts.size(); ++v) positions.row(v) = verts[v].transpose();
    FaceMat fmat(faces.size(), 3);
    for (size_t f = 0; f < faces.size(); ++f)
        for (int k = 0; k < 3; ++k) fmat(f, k) = faces[f][k];
    return EmbeddedMesh::fromData(std::move(positions), std::move(fmat));
}

EmbeddedMesh catenoidNeck(double a, int segments) {
    if (!(a > 0.0)) throw InvalidSpec("neck radius must be positive");
    if (a >= 0.5)
        throw TangencyFailure("no C1 cap/catenoid match for neck radius " +
                              std::to_string(a) + " >= 0.5");
    // C1 junction: cosh(t*/a) = 1/sqrt(a); junction circle radius sqrt(a);
    // cap spheres of radius 1 centered at z = +-(t* + sqrt(1-a))
    double t_star = a * std::acosh(1.0 / std::sqrt(a));
    double zc = t_star + std::sqrt(1.0 - a);
    double theta_j = std::acos(-std::sqrt(1.0 - a)); // polar angle of junction on cap

    double h_az_cap = 2.0 * M_PI / segments;        // azimuthal step at cap equator
    double h_az_neck = 2.0 * M_PI * a / segments;   // azimuthal step at the neck
    int n_cap = std::max(8, static_cast<int>(std::ceil(theta_j / h_az_cap)));
    int n_neck =
        std::max(8, static_cast<int>(std::ceil(2.0 * t_star / h_az_neck)));
    if (n_neck > 4 * segments) n_neck = 4 * segments; // keep meshes desk-scale

    std::vector<std::pair<double, double>> rings;
    rings.emplace_back(0.0, zc + 1.0); // north pole
    for (int i = 1; i < n_cap; ++i) {
        double theta = theta_j * i / n_cap;
        rings.emplace_back(std::sin(theta), zc + std::cos(theta));
    }
    for (int i = 0; i <= n_neck; ++i) {
        double t = t_star - 2.0 * t_star * i / n_neck;
        rings.emplace_back(a * std::cosh(t / a), t);
    }
    for (int i = n_cap - 1; i >= 1; --i) {
        double theta = theta_j * i / n_cap;
        rings.emplace_back(std::sin(theta), -zc - std::cos(theta));
    }
    rings.emplace_back(0.0, -zc - 1.0); // south pole
    return revolve(rings, segments);
}

EmbeddedMesh torus(double R, double rho, int segments) {
    if (!(R > 0.0) || !(rho > 0.0) || rho >= R)
        throw InvalidSpec("torus needs 0 < rho < R");
    int n_minor = std::max(
        8, static_cast<int>(std::ceil(segments * rho / R)));
    std::vector<Vector3d> verts;
    std::vector<std::array<int, 3>> faces;
    for (int i = 0; i < segments; ++i) {
        double u = 2.0 * M_PI * i / segments;
        for (int j = 0; j < n_minor; ++j) {
            double v = 2.0 * M_PI * j / n_minor;
            double r = R + rho * std::cos(v);
            verts.push_back({r * std::cos(u), r * std::sin(u), rho * std::sin(v)});
        }
    }
    auto idx = [&](int i, int j) {
        return ((i + segments) % segments) * n_minor + ((j + n_minor) % n_minor);
    };
    for (int i = 0; i < segments; ++i)
        for (int j = 0; j < n_minor; ++j) {
            faces.push_back({idx(i, j), idx(i + 1, j), idx(i + 1, j + 1)});
            faces.push_back({idx(i, j), idx(i + 1, j + 1), idx(i, j + 1)});
        }
    Mat positions(verts.size(), 3);
    for (size_t v = 0; v < verts.size(); ++v) positions.row(v) = verts[v].transpose();
    FaceMat fmat(faces.size(), 3);
    for (size_t f = 0; f < faces.size(); ++f)
        for (int k = 0; k < 3; ++k) fmat(f, k) = faces[f][k];
    return EmbeddedMesh::fromData(std::move(positions), std::move(fmat));
}

// ------------------------------------------------- spherical harmonics

// a! / b! for a >= b
double factorialRatio(int a, int b) {
    double r = 1.0;
    for (int k = b + 1; k <= a; ++k) r *= k;
    return r;
}

// associated Legendre P_l^m(x) without Condon-Shortley phase
double legendreP(int l, int m, double x) {
    double pmm = 1.0;
    if (m > 0) {
        double s = std::sqrt(std::max(0.0, (1.0 - x) * (1.0 + x)));
        double fact = 1.0;
        for (int i = 1; i <= m; ++i) {
            pmm *= fact * s;
            fact += 2.0;
        }
    }
    if (l == m) return pmm;
    double pmmp1 = x * (2.0 * m + 1.0) * pmm;
    if (l == m + 1) return pmmp1;
    double pll = 0.0;
    for (int ll = m + 2; ll <= l; ++ll) {
        pll = ((2.0 * ll - 1.0) * x * pmmp1 - (ll + m - 1.0) * pmm) / (ll - m);
        pmm = pmmp1;
        pmmp1 = pll;
    }
    return pll;
}

double sphericalHarmonicRecurrence(int l, int m, const Vector3d& u) {
    int am = std::abs(m);
    double norm = std::sqrt((2.0 * l + 1.0) / (4.0 * M_PI) /
                            factorialRatio(l + am, l - am));
    double z = std::clamp(u.z(), -1.0, 1.0);
    double p = legendreP(l, am, z);
    if (m == 0) return norm * p;
    double phi = std::atan2(u.y(), u.x());
    double trig = m > 0 ? std::cos(am * phi) : std::sin(am * phi);
    return std::sqrt(2.0) * norm * p * trig;
}

} // namespace

double sphericalHarmonic(int l, int m, const Vector3d& point) {
    if (l < 0 || std::abs(m) > l) throw InvalidSpec("invalid (l,m)");
    Vector3d u = point.normalized();
    double x = u.x(), y = u.y(), z = u.z();
    switch (l) {
        case 0:
            return 0.5 * std::sqrt(1.0 / M_PI);
        case 1:
            if (m == -1) return std::sqrt(3.0 / (4.0 * M_PI)) * y;
            if (m == 0) return std::sqrt(3.0 / (4.0 * M_PI)) * z;
            return std::sqrt(3.0 / (4.0 * M_PI)) * x;
        case 2:
            if (m == -2) return 0.5 * std::sqrt(15.0 / M_PI) * x * y;
            if (m == -1) return 0.5 * std::sqrt(15.0 / M_PI) * y * z;
            if (m == 0) return 0.25 * std::sqrt(5.0 / M_PI) * (3.0 * z * z - 1.0);
            if (m == 1) return 0.5 * std::sqrt(15.0 / M_PI) * x * z;
            return 0.25 * std::sqrt(15.0 / M_PI) * (x * x - y * y);
        case 3:
            if (m == -3)
                return 0.25 * std::sqrt(35.0 / (2.0 * M_PI)) * y * (3.0 * x * x - y * y);
            if (m == -2) return 0.5 * std::sqrt(105.0 / M_PI) * x * y * z;
            if (m == -1)
                return 0.25 * std::sqrt(21.0 / (2.0 * M_PI)) * y * (5.0 * z * z - 1.0);
            if (m == 0) return 0.25 * std::sqrt(7.0 / M_PI) * (5.0 * z * z - 3.0) * z;
            if (m == 1)
                return 0.25 * std::sqrt(21.0 / (2.0 * M_PI)) * x * (5.0 * z * z - 1.0);
            if (m == 2) return 0.25 * std::sqrt(105.0 / M_PI) * z * (x * x - y * y);
            return 0.25 * std::sqrt(35.0 / (2.0 * M_PI)) * x * (x * x - 3.0 * y * y);
        default:
            return sphericalHarmonicRecurrence(l, m, u);
    }
}

EmbeddedMesh generate(const FamilySpec& spec) {
    EmbeddedMesh mesh = [&] {
        switch (spec.kind) {
            case FamilyKind::Icosphere: {
                TriSoup s = icosphereSoup(spec.level);
                int dim = std::max(3, spec.ambient_dim);
                return soupToMesh(s, dim, [&](const Vector3d& x) {
                    Vec p = Vec::Zero(dim);
                    p.head<3>() = x;
                    return p;
                });
            }
            case FamilyKind::HarmonicPerturbed: {
                if (std::abs(spec.eps) >= 0.5)
                    throw InvalidSpec("harmonic perturbation |eps| must be < 0.5");
                TriSoup s = icosphereSoup(spec.level);
                return soupToMesh(s, 3, [&](const Vector3d& x) {
                    double y = sphericalHarmonic(spec.l, spec.m, x);
                    Vec p = (1.0 + spec.eps * y) * x;
                    return p;
                });
            }
            case FamilyKind::CodimLift: {
                if (std::abs(spec.eps) >= 0.5)
                    throw InvalidSpec("harmonic lift |eps| must be < 0.5");
                int dim = spec.ambient_dim < 4 ? 4 : spec.ambient_dim;
                TriSoup s = icosphereSoup(spec.level);
                return soupToMesh(s, dim, [&](const Vector3d& x) {
                    Vec p = Vec::Zero(dim);
                    p.head<3>() = x;
                    p[3] = spec.eps * sphericalHarmonic(spec.l, spec.m, x);
                    return p;
                });
            }
            case FamilyKind::Ellipsoid: {
                if (!(spec.semi_axes.minCoeff() > 0.0))
                    throw InvalidSpec("ellipsoid semi-axes must be positive");
                TriSoup s = icosphereSoup(spec.level);
                return soupToMesh(s, 3, [&](const Vector3d& x) {
                    Vec p = spec.semi_axes.cwiseProduct(x);
                    return p;
                });
            }
            case FamilyKind::CatenoidNeck:
                return catenoidNeck(spec.neck, spec.segments);
            case FamilyKind::Torus:
                return torus(spec.torus_R, spec.torus_rho, spec.segments);
        }
        throw InvalidSpec("unknown family kind");
    }();
    return spec.normalize ? normalizeArea(mesh) : mesh;
}

std::vector<std::pair<FamilySpec, EmbeddedMesh>> sweep(
    const FamilySpec& tmpl, const std::vector<double>& grid) {
    if (grid.empty()) throw InvalidSpec("empty parameter grid");
    std::vector<std::pair<FamilySpec, EmbeddedMesh>> out;
    out.reserve(grid.size());
    for (double g : grid) {
        FamilySpec s = tmpl;
        switch (tmpl.kind) {
            case FamilyKind::HarmonicPerturbed:
            case FamilyKind::CodimLift:
                s.eps = g;
                break;
            case FamilyKind::CatenoidNeck:
                s.neck = g;
                break;
            default:
                s.level = static_cast<int>(std::lround(g));
                break;
        }
        out.emplace_back(s, generate(s));
    }
    return out;
}

FamilyKind familyKindFromName(const std::string& name) {
    if (name == "icosphere") return FamilyKind::Icosphere;
    if (name == "harmonic" || name == "harmonic_perturbed")
        return FamilyKind::HarmonicPerturbed;
    if (name == "codim" || name == "codim_lift") return FamilyKind::CodimLift;
    if (name == "ellipsoid") return FamilyKind::Ellipsoid;
    if (name == "catenoid" || name == "catenoid_neck") return FamilyKind::CatenoidNeck;
    if (name == "torus") return FamilyKind::Torus;
    throw InvalidSpec("unknown family kind '" + name + "'");
}

std::string familyKindName(FamilyKind kind) {
    switch (kind) {
        case FamilyKind::Icosphere: return "icosphere";
        case FamilyKind::HarmonicPerturbed: return "harmonic_perturbed";
        case FamilyKind::CodimLift: return "codim_lift";
        case FamilyKind::Ellipsoid: return "ellipsoid";
        case FamilyKind::CatenoidNeck: return "catenoid_neck";
        case FamilyKind::Torus: return "torus";
    }
    return "unknown";
}

} // namespace umb
