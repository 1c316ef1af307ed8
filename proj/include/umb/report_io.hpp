#pragma once

#include "umb/conformal.hpp"
#include "umb/monotonicity.hpp"
#include "umb/rigidity.hpp"
#include "umb/spherefit.hpp"

#include <json.hpp>
#include <string>

namespace umb {

enum class ReportFormat { JSON, CSV };

using Json = nlohmann::ordered_json;

Json toJson(const RigidityReport& rep);
Json toJson(const SphereFit& fit);
Json toJson(const MonotonicityProfile& prof);
Json toJson(const SphericalParam& param);

RigidityReport rigidityReportFromJson(const Json& j);
SphereFit sphereFitFromJson(const Json& j);
MonotonicityProfile monotonicityProfileFromJson(const Json& j);
SphericalParam sphericalParamFromJson(const Json& j);

std::string toCsv(const RigidityReport& rep);
std::string toCsv(const SphereFit& fit);
std::string toCsv(const MonotonicityProfile& prof); // one row per rho sample

void saveReport(const RigidityReport& rep, const std::string& path, ReportFormat format);
void saveReport(const SphereFit& fit, const std::string& path, ReportFormat format);
void saveReport(const MonotonicityProfile& prof, const std::string& path,
                ReportFormat format);
void saveParam(const SphericalParam& param, const std::string& path);

RigidityReport loadRigidityReport(const std::string& path);
SphereFit loadSphereFit(const std::string& path);
MonotonicityProfile loadMonotonicityProfile(const std::string& path);
SphericalParam loadParam(const std::string& path);

void writeTextFile(const std::string& path, const std::string& text);
std::string readTextFile(const std::string& path);

} // namespace umb
