#include "umb/quadrature.hpp"

#include <array>
#include <cmath>

namespace umb {

namespace {

using Eigen::Vector3d;

struct SubTri {
    // vertices as barycentric coords w.r.t. the parent face
    std::array<Vector3d, 3> b;
};

double subTriArea(const EmbeddedMesh& mesh, int face, const SubTri& tri) {
    // barycentric affine map scales areas by det of the barycentric matrix
    Eigen::Matrix3d B;
    B.col(0) = tri.b[0];
    B.col(1) = tri.b[1];
    B.col(2) = tri.b[2];
    return std::abs(B.determinant()) * mesh.faceArea(face);
}

void emitNodes(const EmbeddedMesh& mesh, int face, const SubTri& tri,
               const std::function<void(const QuadNode&)>& fn) {
    double w = subTriArea(mesh, face, tri) / 3.0;
    if (!(w > 0.0)) return;
    static const double rule[3][3] = {
        {2.0 / 3.0, 1.0 / 6.0, 1.0 / 6.0},
        {1.0 / 6.0, 2.0 / 3.0, 1.0 / 6.0},
        {1.0 / 6.0, 1.0 / 6.0, 2.0 / 3.0},
    };
    for (const auto& r : rule) {
        QuadNode node;
        node.face = face;
        node.bary = r[0] * tri.b[0] + r[1] * tri.b[1] + r[2] * tri.b[2];
        node.weight = w;
        fn(node);
    }
}

// parameter t in [0,1] with |p + t (q - p) - c| = rho, choosing the root in range
double edgeSphereCrossing(const Vec& p, const Vec& q, const Vec& c, double rho) {
    Vec d = q - p, m = p - c;
    double a = d.squaredNorm();
    double b = 2.0 * m.dot(d);
    double cc = m.squaredNorm() - rho * rho;
    double disc = b * b - 4.0 * a * cc;
    if (disc < 0.0 || a == 0.0) return 0.5;
    double s = std::sqrt(disc);
    double t1 = (-b - s) / (2.0 * a);
    double t2 = (-b + s) / (2.0 * a);
    for (double t : {t1, t2})
        if (t > 0.0 && t < 1.0) return t;
    return 0.5;
}

void clipRecurse(const EmbeddedMesh& mesh, int face, const SubTri& tri,
                 const Vec& center, double rho, int depth,
                 const std::function<void(const QuadNode&)>& fn) {
    const auto& faces = mesh.faces();
    std::array<Vec, 3> p;
    std::array<double, 3> dist;
    for (int k = 0; k < 3; ++k) {
        p[k] = tri.b[k][0] * mesh.position(faces(face, 0)) +
               tri.b[k][1] * mesh.position(faces(face, 1)) +
               tri.b[k][2] * mesh.position(faces(face, 2));
        dist[k] = (p[k] - center).norm();
    }
    bool in[3] = {dist[0] <= rho, dist[1] <= rho, dist[2] <= rho};
    int inside = in[0] + in[1] + in[2];

    if (inside == 3) {
        emitNodes(mesh, face, tri, fn);
        return;
    }
    if (inside == 0) return;
    if (depth <= 0) {
        // crossing sub-triangle at the recursion floor: classify by centroid
        Vec centroid = (p[0] + p[1] + p[2]) / 3.0;
        if ((centroid - center).norm() <= rho) emitNodes(mesh, face, tri, fn);
        return;
    }

    // mixed: split along the chord between the two edge crossings
    int lone = -1;
    if (inside == 1)
        lone = in[0] ? 0 : (in[1] ? 1 : 2);
    else
        lone = !in[0] ? 0 : (!in[1] ? 1 : 2);
    int u = (lone + 1) % 3, w = (lone + 2) % 3;
    double tu = edgeSphereCrossing(p[lone], p[u], center, rho);
    double tw = edgeSphereCrossing(p[lone], p[w], center, rho);
    Vector3d bu = (1.0 - tu) * tri.b[lone] + tu * tri.b[u];
    Vector3d bw = (1.0 - tw) * tri.b[lone] + tw * tri.b[w];

    SubTri tip{{tri.b[lone], bu, bw}};
    SubTri quad1{{bu, tri.b[u], tri.b[w]}};
    SubTri quad2{{bu, tri.b[w], bw}};
    clipRecurse(mesh, face, tip, center, rho, depth - 1, fn);
    clipRecurse(mesh, face, quad1, center, rho, depth - 1, fn);
    clipRecurse(mesh, face, quad2, center, rho, depth - 1, fn);
}

const SubTri kWhole{{Vector3d(1, 0, 0), Vector3d(0, 1, 0), Vector3d(0, 0, 1)}};

} // namespace

void forEachFaceQuadNode(const EmbeddedMesh& mesh,
                         const std::function<void(const QuadNode&)>& fn) {
    for (int f = 0; f < mesh.numFaces(); ++f) emitNodes(mesh, f, kWhole, fn);
}

void forEachBallQuadNode(const EmbeddedMesh& mesh, const Vec& center, double rho,
                         int depth,
                         const std::function<void(const QuadNode&)>& fn) {
    for (int f = 0; f < mesh.numFaces(); ++f)
        clipRecurse(mesh, f, kWhole, center, rho, depth, fn);
}

double ballArea(const EmbeddedMesh& mesh, const Vec& center, double rho, int depth) {
    double area = 0.0;
    forEachBallQuadNode(mesh, center, rho, depth,
                        [&](const QuadNode& node) { area += node.weight; });
    return area;
}

} // namespace umb
