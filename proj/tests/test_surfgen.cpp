#include "umb/errors.hpp"
#include "umb/geometry.hpp"
#include "umb/surfgen.hpp"

#include <doctest.h>

#include <cmath>

using namespace umb;

TEST_CASE("icosphere level 0 is the icosahedron") {
    EmbeddedMesh mesh = generate({.kind = FamilyKind::Icosphere, .level = 0});
    CHECK(mesh.numVertices() == 12);
    CHECK(mesh.numFaces() == 20);
    CHECK(mesh.eulerCharacteristic() == 2);
}

TEST_CASE("harmonic perturbation at eps 0 is bitwise the icosphere") {
    EmbeddedMesh a = generate({.kind = FamilyKind::Icosphere, .level = 3});
    EmbeddedMesh b = generate(
        {.kind = FamilyKind::HarmonicPerturbed, .level = 3, .eps = 0.0});
    CHECK((a.positions() - b.positions()).cwiseAbs().maxCoeff() == 0.0);
    CHECK((a.faces() - b.faces()).cwiseAbs().maxCoeff() == 0);
}

TEST_CASE("generated families have sphere topology, torus does not") {
    for (FamilyKind kind : {FamilyKind::HarmonicPerturbed, FamilyKind::CodimLift,
                            FamilyKind::Ellipsoid, FamilyKind::CatenoidNeck}) {
        FamilySpec spec{.kind = kind, .level = 2, .eps = 0.05};
        spec.segments = 32;
        EmbeddedMesh mesh = generate(spec);
        CAPTURE(familyKindName(kind));
        CHECK(mesh.eulerCharacteristic() == 2);
        CHECK(mesh.totalArea() == doctest::Approx(4.0 * M_PI).epsilon(1e-10));
    }
    CHECK(generate({.kind = FamilyKind::Torus}).eulerCharacteristic() == 0);
}

TEST_CASE("catenoid profile satisfies the minimal surface relation") {
    // r(t) = a cosh(t/a) has r'' r = 1 + r'^2 exactly
    double a = 0.2;
    for (double t : {-0.15, -0.05, 0.0, 0.1, 0.2}) {
        double r = a * std::cosh(t / a);
        double r1 = std::sinh(t / a);
        double r2 = std::cosh(t / a) / a;
        CHECK(std::abs(r2 * r - (1.0 + r1 * r1)) <= 1e-10);
    }
}

TEST_CASE("catenoid tangency fails for fat necks") {
    CHECK_THROWS_AS(generate({.kind = FamilyKind::CatenoidNeck, .neck = 0.6}),
                    TangencyFailure);
    CHECK_THROWS_AS(generate({.kind = FamilyKind::CatenoidNeck, .neck = -0.1}),
                    InvalidSpec);
}

TEST_CASE("spherical harmonics are discrete Laplace eigenfunctions") {
    EmbeddedMesh mesh = generate({.kind = FamilyKind::Icosphere, .level = 5,
                                  .normalize = false});
    for (auto [l, m] : {std::pair{2, 2}, std::pair{3, 1}, std::pair{4, 2}}) {
        const int nv = mesh.numVertices();
        Vec y(nv);
        for (int v = 0; v < nv; ++v) {
            Eigen::Vector3d p = mesh.position(v).head<3>();
            y[v] = sphericalHarmonic(l, m, p);
        }
        Vec ly = Vec::Zero(nv);
        for (int f = 0; f < mesh.numFaces(); ++f) {
            for (int k = 0; k < 3; ++k) {
                int c = mesh.faces()(f, k);
                int a = mesh.faces()(f, (k + 1) % 3);
                int b = mesh.faces()(f, (k + 2) % 3);
                double ang = mesh.cornerAngle(f, k);
                double cot = std::cos(ang) / std::sin(ang);
                ly[a] += 0.5 * cot * (y[b] - y[a]);
                ly[b] += 0.5 * cot * (y[a] - y[b]);
            }
        }
        double num = 0.0, den = 0.0;
        double lam = l * (l + 1);
        for (int v = 0; v < nv; ++v) {
            double w = mesh.dualArea(v);
            double residual = ly[v] / w + lam * y[v];
            num += w * residual * residual;
            den += w * lam * lam * y[v] * y[v];
        }
        CAPTURE(l);
        CAPTURE(m);
        CHECK(std::sqrt(num / den) <= 2e-2);
    }
}

TEST_CASE("harmonics are L2 normalized on the sphere") {
    EmbeddedMesh mesh = generate({.kind = FamilyKind::Icosphere, .level = 5,
                                  .normalize = false});
    for (auto [l, m] : {std::pair{2, 2}, std::pair{2, 0}, std::pair{3, -2}}) {
        double sum = 0.0;
        for (int v = 0; v < mesh.numVertices(); ++v) {
            Eigen::Vector3d p = mesh.position(v).head<3>();
            double y = sphericalHarmonic(l, m, p);
            sum += mesh.dualArea(v) * y * y;
        }
        CAPTURE(l);
        CAPTURE(m);
        CHECK(sum == doctest::Approx(1.0).epsilon(2e-2));
    }
}

TEST_CASE("sweep is ordered and rejects empty grids") {
    FamilySpec tmpl{.kind = FamilyKind::HarmonicPerturbed, .level = 2};
    auto fam = sweep(tmpl, {0.01, 0.02, 0.05});
    CHECK(fam.size() == 3);
    CHECK(fam[0].first.eps == 0.01);
    CHECK(fam[2].first.eps == 0.05);
    CHECK_THROWS_AS(sweep(tmpl, {}), InvalidSpec);
}
