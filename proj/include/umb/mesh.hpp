#pragma once

#include <Eigen/Dense>
#include <memory>
#include <mutex>
#include <string>
#include <vector>

namespace umb {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;
using FaceMat = Eigen::Matrix<int, Eigen::Dynamic, 3, Eigen::RowMajor>;

enum class MeshFormat { OFF, NOFF, OBJ };

struct MeshMetadata {
    double total_area = 0.0;
    int euler_characteristic = 0;
    int genus = 0;
    double diameter = 0.0;
};

// Closed oriented triangle mesh with vertex positions in R^n, n >= 3.
// Immutable after construction; halfedge connectivity is built eagerly and
// validated (manifold edges, consistent orientation, no degenerate faces).
class EmbeddedMesh {
public:
    struct Options {
        bool allow_boundary = false;   // only for derived open surfaces
        bool check_degenerate = true;
    };

    static EmbeddedMesh fromData(Mat positions, FaceMat faces);
    static EmbeddedMesh fromData(Mat positions, FaceMat faces, Options opts);

    int ambientDim() const { return static_cast<int>(positions_.cols()); }
    int numVertices() const { return static_cast<int>(positions_.rows()); }
    int numFaces() const { return static_cast<int>(faces_.rows()); }
    int numEdges() const { return num_edges_; }

    const Mat& positions() const { return positions_; }
    const FaceMat& faces() const { return faces_; }
    Vec position(int v) const { return positions_.row(v).transpose(); }

    // connectivity
    const std::vector<int>& oneRing(int v) const { return one_rings_[v]; }
    std::vector<int> twoRing(int v) const; // graph distance <= 2, excluding v
    const std::vector<int>& vertexFaces(int v) const { return vertex_faces_[v]; }
    bool hasBoundary() const { return has_boundary_; }
    bool isConnected() const;

    // per-face / per-vertex geometry
    double faceArea(int f) const { return face_areas_[f]; }
    const Vec& faceAreas() const { return face_areas_; }
    double dualArea(int v) const { return dual_areas_[v]; }
    const Vec& dualAreas() const { return dual_areas_; }
    double totalArea() const { return total_area_; }
    double cornerAngle(int f, int corner) const;
    double angleDefect(int v) const;
    double angleDefectSum() const; // = 2 pi chi up to rounding
    Vec faceCentroid(int f) const;
    // orthonormal basis of the face plane, n x 2
    Mat facePlaneBasis(int f) const;

    int eulerCharacteristic() const {
        return numVertices() - numEdges() + numFaces();
    }
    int genus() const { return (2 - eulerCharacteristic()) / 2; }
    double diameter() const; // max pairwise vertex distance, lazily cached
    Vec areaCentroid() const;
    MeshMetadata metadata() const;

    // rigid/scaling transforms preserve connectivity; geometry is not
    // re-validated (kept for the transformed copies used by the pipeline)
    EmbeddedMesh withPositions(Mat positions) const;
    EmbeddedMesh translated(const Vec& t) const;
    EmbeddedMesh rotated(const Mat& R) const; // positions * R^T

private:
    EmbeddedMesh() = default;
    void buildConnectivity(const Options& opts);
    void computeGeometry(const Options& opts);

    Mat positions_;
    FaceMat faces_;
    int num_edges_ = 0;
    bool has_boundary_ = false;

    std::vector<std::vector<int>> one_rings_;    // ordered around each vertex
    std::vector<std::vector<int>> vertex_faces_; // incident faces

    Vec face_areas_;
    Vec dual_areas_;
    double total_area_ = 0.0;

    struct DiameterCache {
        std::once_flag flag;
        double value = -1.0;
    };
    // shared between copies with identical positions; withPositions resets it
    mutable std::shared_ptr<DiameterCache> diameter_cache_ =
        std::make_shared<DiameterCache>();
};

// IO. Format is inferred from the extension when not forced:
// .off (OFF or nOFF by header), .noff, .obj.
EmbeddedMesh loadMesh(const std::string& path);
EmbeddedMesh loadMesh(const std::string& path, MeshFormat format);
void saveMesh(const EmbeddedMesh& mesh, const std::string& path);
void saveMesh(const EmbeddedMesh& mesh, const std::string& path, MeshFormat format);
EmbeddedMesh parseMesh(std::istream& in, MeshFormat format);
void writeMesh(const EmbeddedMesh& mesh, std::ostream& out, MeshFormat format);

// Scales about the area centroid so the total area becomes 4 pi.
EmbeddedMesh normalizeArea(const EmbeddedMesh& mesh);

} // namespace umb
