#include "umb/mesh.hpp"

#include "umb/errors.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <set>

namespace umb {

namespace {

inline double triangleArea(const Vec& a, const Vec& b, const Vec& c) {
    Vec e1 = b - a, e2 = c - a;
    double g11 = e1.squaredNorm(), g22 = e2.squaredNorm(), g12 = e1.dot(e2);
    double det = g11 * g22 - g12 * g12;
    return det > 0.0 ? 0.5 * std::sqrt(det) : 0.0;
}

} // namespace

EmbeddedMesh EmbeddedMesh::fromData(Mat positions, FaceMat faces) {
    return fromData(std::move(positions), std::move(faces), Options{});
}

EmbeddedMesh EmbeddedMesh::fromData(Mat positions, FaceMat faces, Options opts) {
    if (positions.cols() < 3)
        throw ParseError("ambient dimension must be >= 3, got " +
                         std::to_string(positions.cols()));
    if (positions.rows() < 3 || faces.rows() < 1)
        throw ParseError("mesh needs at least 3 vertices and 1 face");
    for (int f = 0; f < faces.rows(); ++f)
        for (int k = 0; k < 3; ++k)
            if (faces(f, k) < 0 || faces(f, k) >= positions.rows())
                throw ParseError("face " + std::to_string(f) +
                                 " references vertex out of range");

    EmbeddedMesh mesh;
    mesh.positions_ = std::move(positions);
    mesh.faces_ = std::move(faces);
    mesh.buildConnectivity(opts);
    mesh.computeGeometry(opts);
    return mesh;
}

void EmbeddedMesh::buildConnectivity(const Options& opts) {
    const int nv = numVertices();
    const int nf = numFaces();

    // undirected multiplicities first: >2 incident faces is non-manifold
    // regardless of how the faces are oriented
    std::map<std::pair<int, int>, int> undirected;
    for (int f = 0; f < nf; ++f) {
        for (int k = 0; k < 3; ++k) {
            int a = faces_(f, k), b = faces_(f, (k + 1) % 3);
            if (a == b)
                throw DegenerateFace("face " + std::to_string(f) +
                                     " repeats vertex " + std::to_string(a));
            undirected[std::minmax(a, b)]++;
        }
    }
    num_edges_ = static_cast<int>(undirected.size());
    has_boundary_ = false;
    for (const auto& [e, count] : undirected) {
        if (count > 2)
            throw NonManifold("edge (" + std::to_string(e.first) + "," +
                              std::to_string(e.second) + ") lies on " +
                              std::to_string(count) + " faces");
        if (count == 1) {
            if (!opts.allow_boundary)
                throw NonManifold("edge (" + std::to_string(e.first) + "," +
                                  std::to_string(e.second) +
                                  ") lies on 1 face (open surface)");
            has_boundary_ = true;
        }
    }

    std::map<std::pair<int, int>, int> directed; // directed edge -> face
    for (int f = 0; f < nf; ++f) {
        for (int k = 0; k < 3; ++k) {
            int a = faces_(f, k), b = faces_(f, (k + 1) % 3);
            auto key = std::make_pair(a, b);
            if (directed.count(key))
                throw InconsistentOrientation(
                    "directed edge (" + std::to_string(a) + "," + std::to_string(b) +
                    ") appears in two faces");
            directed[key] = f;
        }
    }

    vertex_faces_.assign(nv, {});
    for (int f = 0; f < nf; ++f)
        for (int k = 0; k < 3; ++k)
            vertex_faces_[faces_(f, k)].push_back(f);

    // ordered one-rings by walking the fan; also detects pinwheel vertices
    one_rings_.assign(nv, {});
    for (int v = 0; v < nv; ++v) {
        if (vertex_faces_[v].empty())
            throw NonManifold("isolated vertex " + std::to_string(v));

        // outgoing neighbour of v in face f
        auto nextInFace = [&](int f) {
            for (int k = 0; k < 3; ++k)
                if (faces_(f, k) == v) return faces_(f, (k + 1) % 3);
            return -1;
        };
        auto prevInFace = [&](int f) {
            for (int k = 0; k < 3; ++k)
                if (faces_(f, k) == v) return faces_(f, (k + 2) % 3);
            return -1;
        };

        // start at a boundary-adjacent corner if the vertex is on a boundary
        int start_face = vertex_faces_[v][0];
        if (has_boundary_) {
            for (int f : vertex_faces_[v]) {
                int u = nextInFace(f);
                if (!directed.count({u, v})) { start_face = f; break; }
            }
        }
        // walk the fan: in face f the corners around v are (v, next, prev);
        // the neighbouring face across edge (prev, v) continues the fan
        std::vector<int> ring;
        int f = start_face;
        int guard = 0;
        while (true) {
            if (++guard > static_cast<int>(vertex_faces_[v].size()) + 1)
                throw NonManifold("vertex " + std::to_string(v) +
                                  " has a non-disk neighbourhood");
            ring.push_back(nextInFace(f));
            int w = prevInFace(f);
            // neighbour across edge {v,w} holds the directed edge (v,w)
            auto other = directed.find({v, w});
            if (other == directed.end()) { ring.push_back(w); break; }
            f = other->second;
            if (f == start_face) break;
        }
        std::set<int> uniq(ring.begin(), ring.end());
        if (uniq.size() != ring.size())
            throw NonManifold("vertex " + std::to_string(v) +
                              " has a non-disk neighbourhood");
        if (guard != static_cast<int>(vertex_faces_[v].size()))
            throw NonManifold("vertex " + std::to_string(v) +
                              " has a disconnected star");
        one_rings_[v] = std::move(ring);
    }
}

void EmbeddedMesh::computeGeometry(const Options& opts) {
    const int nf = numFaces();
    face_areas_.resize(nf);
    for (int f = 0; f < nf; ++f)
        face_areas_[f] = triangleArea(position(faces_(f, 0)), position(faces_(f, 1)),
                                      position(faces_(f, 2)));
    total_area_ = face_areas_.sum();
    if (opts.check_degenerate) {
        double mean_area = total_area_ / nf;
        for (int f = 0; f < nf; ++f)
            if (!(face_areas_[f] > 1e-14 * mean_area))
                throw DegenerateFace("face " + std::to_string(f) + " has area " +
                                     std::to_string(face_areas_[f]));
    }
    dual_areas_ = Vec::Zero(numVertices());
    for (int f = 0; f < nf; ++f)
        for (int k = 0; k < 3; ++k)
            dual_areas_[faces_(f, k)] += face_areas_[f] / 3.0;
}

std::vector<int> EmbeddedMesh::twoRing(int v) const {
    std::set<int> ring(one_rings_[v].begin(), one_rings_[v].end());
    for (int u : one_rings_[v])
        ring.insert(one_rings_[u].begin(), one_rings_[u].end());
    ring.erase(v);
    return {ring.begin(), ring.end()};
}

bool EmbeddedMesh::isConnected() const {
    std::vector<char> seen(numVertices(), 0);
    std::vector<int> stack = {0};
    seen[0] = 1;
    int count = 1;
    while (!stack.empty()) {
        int v = stack.back();
        stack.pop_back();
        for (int u : one_rings_[v])
            if (!seen[u]) { seen[u] = 1; ++count; stack.push_back(u); }
    }
    return count == numVertices();
}

double EmbeddedMesh::cornerAngle(int f, int corner) const {
    Vec a = position(faces_(f, corner));
    Vec b = position(faces_(f, (corner + 1) % 3));
    Vec c = position(faces_(f, (corner + 2) % 3));
    Vec u = b - a, w = c - a;
    double cosang = u.dot(w) / (u.norm() * w.norm());
    return std::acos(std::clamp(cosang, -1.0, 1.0));
}

double EmbeddedMesh::angleDefect(int v) const {
    double sum = 0.0;
    for (int f : vertex_faces_[v])
        for (int k = 0; k < 3; ++k)
            if (faces_(f, k) == v) sum += cornerAngle(f, k);
    return 2.0 * M_PI - sum;
}

double EmbeddedMesh::angleDefectSum() const {
    double sum = 0.0;
    for (int v = 0; v < numVertices(); ++v) sum += angleDefect(v);
    return sum;
}

Vec EmbeddedMesh::faceCentroid(int f) const {
    return (position(faces_(f, 0)) + position(faces_(f, 1)) + position(faces_(f, 2))) / 3.0;
}

Mat EmbeddedMesh::facePlaneBasis(int f) const {
    Vec e1 = position(faces_(f, 1)) - position(faces_(f, 0));
    Vec e2 = position(faces_(f, 2)) - position(faces_(f, 0));
    Mat basis(ambientDim(), 2);
    basis.col(0) = e1.normalized();
    Vec w = e2 - basis.col(0).dot(e2) * basis.col(0);
    basis.col(1) = w.normalized();
    return basis;
}

double EmbeddedMesh::diameter() const {
    std::call_once(diameter_cache_->flag, [this] {
        double d2 = 0.0;
        for (int v = 0; v + 1 < numVertices(); ++v) {
            double rowmax = (positions_.bottomRows(numVertices() - v - 1).rowwise() -
                             positions_.row(v))
                                .rowwise()
                                .squaredNorm()
                                .maxCoeff();
            d2 = std::max(d2, rowmax);
        }
        diameter_cache_->value = std::sqrt(d2);
    });
    return diameter_cache_->value;
}

Vec EmbeddedMesh::areaCentroid() const {
    Vec c = Vec::Zero(ambientDim());
    for (int f = 0; f < numFaces(); ++f) c += face_areas_[f] * faceCentroid(f);
    return c / total_area_;
}

MeshMetadata EmbeddedMesh::metadata() const {
    MeshMetadata md;
    md.total_area = total_area_;
    md.euler_characteristic = eulerCharacteristic();
    md.genus = genus();
    md.diameter = diameter();
    return md;
}

EmbeddedMesh EmbeddedMesh::withPositions(Mat positions) const {
    if (positions.rows() != positions_.rows())
        throw Error("withPositions: vertex count mismatch");
    EmbeddedMesh mesh(*this);
    mesh.positions_ = std::move(positions);
    mesh.diameter_cache_ = std::make_shared<DiameterCache>();
    Options opts;
    opts.check_degenerate = false;
    opts.allow_boundary = has_boundary_;
    mesh.computeGeometry(opts);
    return mesh;
}

EmbeddedMesh EmbeddedMesh::translated(const Vec& t) const {
    Mat p = positions_;
    p.rowwise() += t.transpose();
    return withPositions(std::move(p));
}

EmbeddedMesh EmbeddedMesh::rotated(const Mat& R) const {
    return withPositions(positions_ * R.transpose());
}

EmbeddedMesh normalizeArea(const EmbeddedMesh& mesh) {
    double area = mesh.totalArea();
    if (!(area > 1e-200)) throw ZeroArea("total area " + std::to_string(area));
    double lambda = std::sqrt(4.0 * M_PI / area);
    Vec c = mesh.areaCentroid();
    Mat p = mesh.positions();
    p.rowwise() -= c.transpose();
    p *= lambda;
    p.rowwise() += c.transpose();
    return mesh.withPositions(std::move(p));
}

} // namespace umb
