#pragma once

#include <stdexcept>
#include <string>

namespace umb {

struct Error : std::runtime_error {
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

#define UMB_ERROR(Name)                                                        \
    struct Name : Error {                                                      \
        explicit Name(const std::string& msg) : Error(#Name ": " + msg) {}     \
    }

// mesh
UMB_ERROR(ParseError);
UMB_ERROR(NonManifold);
UMB_ERROR(InconsistentOrientation);
UMB_ERROR(DegenerateFace);
UMB_ERROR(ZeroArea);
UMB_ERROR(IoError);

// geometry
UMB_ERROR(RankDeficient);

// monotonicity
UMB_ERROR(CenterOffMesh);

// spherefit
UMB_ERROR(VanishingMeanCurvature);
UMB_ERROR(NoConvergence);

// conformal
UMB_ERROR(NotSphereType);
UMB_ERROR(SolverFailure);
UMB_ERROR(BisectionFailure);
UMB_ERROR(PoleSingularity);
UMB_ERROR(PoleOnSurface);

// rigidity
UMB_ERROR(AlignmentFailure);

// surfgen
UMB_ERROR(InvalidSpec);
UMB_ERROR(TangencyFailure);

// cli
UMB_ERROR(UsageError);

#undef UMB_ERROR

} // namespace umb
