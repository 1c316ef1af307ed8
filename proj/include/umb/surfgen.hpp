#pragma once

#include "umb/mesh.hpp"

#include <vector>

namespace umb {

enum class FamilyKind {
    Icosphere,
    HarmonicPerturbed,
    CodimLift,
    Ellipsoid,
    CatenoidNeck,
    Torus,
};

struct FamilySpec {
    FamilyKind kind = FamilyKind::Icosphere;
    int level = 4;          // icosphere subdivision level
    double eps = 0.0;       // harmonic perturbation amplitude
    int l = 2, m = 2;       // spherical harmonic indices
    Eigen::Vector3d semi_axes{1.0, 1.0, 1.2};
    double neck = 0.2;      // catenoid neck radius a, must be < 0.5
    double torus_R = 2.0, torus_rho = 0.7;
    int segments = 64;      // azimuthal resolution for surfaces of revolution
    int ambient_dim = 3;    // >= 4 for CodimLift (extra coords zero-padded)
    bool normalize = true;  // scale output to total area 4 pi
};

// Deterministic generator for the test-surface families.
EmbeddedMesh generate(const FamilySpec& spec);

// Ordered family over a parameter grid applied to the template's eps
// (harmonic/codim) or neck (catenoid) parameter.
std::vector<std::pair<FamilySpec, EmbeddedMesh>> sweep(const FamilySpec& tmpl,
                                                       const std::vector<double>& grid);

// Real spherical harmonics, unit L^2(S^2) normalization. x need not be unit;
// it is projected radially. Explicit formulas up to l = 3, recurrence beyond.
double sphericalHarmonic(int l, int m, const Eigen::Vector3d& x);

FamilyKind familyKindFromName(const std::string& name);
std::string familyKindName(FamilyKind kind);

} // namespace umb
