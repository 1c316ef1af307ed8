#pragma once

#include "umb/mesh.hpp"

#include <functional>

namespace umb {

// One barycentric quadrature node. bary refers to the parent mesh face, so
// per-vertex fields interpolate linearly through any clipping subdivision.
struct QuadNode {
    int face;
    Eigen::Vector3d bary;
    double weight; // area share of the node
};

// symmetric degree-2 rule, three nodes per (sub)triangle
void forEachFaceQuadNode(const EmbeddedMesh& mesh,
                         const std::function<void(const QuadNode&)>& fn);

// Same rule over the part of the surface inside the ball B_rho(center).
// Faces crossing the sphere are subdivided along the chord; sub-triangles
// still crossing are refined up to `depth`, then classified by centroid.
void forEachBallQuadNode(const EmbeddedMesh& mesh, const Vec& center, double rho,
                         int depth,
                         const std::function<void(const QuadNode&)>& fn);

double ballArea(const EmbeddedMesh& mesh, const Vec& center, double rho, int depth);

inline Vec quadPoint(const EmbeddedMesh& mesh, const QuadNode& node) {
    const auto& f = mesh.faces();
    return node.bary[0] * mesh.position(f(node.face, 0)) +
           node.bary[1] * mesh.position(f(node.face, 1)) +
           node.bary[2] * mesh.position(f(node.face, 2));
}

// linear interpolation of per-vertex rows (V x n) at a node
inline Vec interpolateRows(const EmbeddedMesh& mesh, const Mat& field,
                           const QuadNode& node) {
    const auto& f = mesh.faces();
    return node.bary[0] * field.row(f(node.face, 0)).transpose() +
           node.bary[1] * field.row(f(node.face, 1)).transpose() +
           node.bary[2] * field.row(f(node.face, 2)).transpose();
}

} // namespace umb
