#include "umb/report_io.hpp"

#include "umb/errors.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

namespace umb {

namespace {

std::string fmt(double x) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", x);
    return buf;
}

Json vecToJson(const Vec& v) {
    Json a = Json::array();
    for (int i = 0; i < v.size(); ++i) a.push_back(v[i]);
    return a;
}

Vec vecFromJson(const Json& a) {
    Vec v(a.size());
    for (size_t i = 0; i < a.size(); ++i) v[i] = a[i].get<double>();
    return v;
}

Json matToJson(const Mat& m) {
    Json rows = Json::array();
    for (int r = 0; r < m.rows(); ++r) {
        Json row = Json::array();
        for (int c = 0; c < m.cols(); ++c) row.push_back(m(r, c));
        rows.push_back(row);
    }
    return rows;
}

Mat matFromJson(const Json& rows) {
    if (rows.empty()) return Mat(0, 0);
    Mat m(rows.size(), rows[0].size());
    for (size_t r = 0; r < rows.size(); ++r)
        for (size_t c = 0; c < rows[r].size(); ++c) m(r, c) = rows[r][c].get<double>();
    return m;
}

} // namespace

Json toJson(const RigidityReport& r) {
    Json j;
    j["ambient_dim"] = r.ambient_dim;
    j["chi"] = r.chi;
    j["area"] = r.area;
    j["willmore"] = r.willmore;
    j["e_n"] = r.e_n;
    j["tau"] = r.tau;
    j["a0_l2"] = r.a0_l2;
    j["funda_deficit"] = r.funda_deficit;
    j["gauss_deficit"] = r.gauss_deficit;
    j["hypothesis_ok"] = r.hypothesis_ok;
    j["theorem12_status"] = r.theorem12_status;
    j["mean_deficit"] = r.mean_deficit;
    j["radial_deficit"] = r.radial_deficit;
    j["id_sup"] = r.id_sup;
    j["sphere_center_dist"] = r.sphere_center_dist;
    j["sphere_radius"] = r.sphere_radius;
    j["w22_deficit"] = r.w22_deficit;
    j["u_inf"] = r.u_inf;
    j["u_l2"] = r.u_l2;
    j["half_area_dev"] = r.half_area_dev;
    j["qc_error_max"] = r.qc_error_max;
    j["empirical_constants"] = {
        {"funda", r.c_funda}, {"gauss", r.c_gauss}, {"mean", r.c_mean},
        {"w22", r.c_w22},     {"u_inf", r.c_uinf},  {"u_l2", r.c_ul2},
    };
    j["vacuous_bound_mode"] = r.vacuous_bound_mode;
    j["a_l2"] = r.a_l2;
    j["large_branch_const"] = r.large_branch_const;
    j["large_branch_ok"] = r.large_branch_ok;
    return j;
}

RigidityReport rigidityReportFromJson(const Json& j) {
    RigidityReport r;
    r.ambient_dim = j.at("ambient_dim");
    r.chi = j.at("chi");
    r.area = j.at("area");
    r.willmore = j.at("willmore");
    r.e_n = j.at("e_n");
    r.tau = j.at("tau");
    r.a0_l2 = j.at("a0_l2");
    r.funda_deficit = j.at("funda_deficit");
    r.gauss_deficit = j.at("gauss_deficit");
    r.hypothesis_ok = j.at("hypothesis_ok");
    r.theorem12_status = j.at("theorem12_status");
    r.mean_deficit = j.at("mean_deficit");
    r.radial_deficit = j.at("radial_deficit");
    r.id_sup = j.at("id_sup");
    r.sphere_center_dist = j.at("sphere_center_dist");
    r.sphere_radius = j.at("sphere_radius");
    r.w22_deficit = j.at("w22_deficit");
    r.u_inf = j.at("u_inf");
    r.u_l2 = j.at("u_l2");
    r.half_area_dev = j.at("half_area_dev");
    r.qc_error_max = j.at("qc_error_max");
    const auto& c = j.at("empirical_constants");
    r.c_funda = c.at("funda");
    r.c_gauss = c.at("gauss");
    r.c_mean = c.at("mean");
    r.c_w22 = c.at("w22");
    r.c_uinf = c.at("u_inf");
    r.c_ul2 = c.at("u_l2");
    r.vacuous_bound_mode = j.at("vacuous_bound_mode");
    r.a_l2 = j.at("a_l2");
    r.large_branch_const = j.at("large_branch_const");
    r.large_branch_ok = j.at("large_branch_ok");
    return r;
}

Json toJson(const SphereFit& f) {
    Json j;
    j["center"] = vecToJson(f.center);
    j["radius"] = f.radius;
    j["subspace"] = matToJson(f.subspace);
    j["l2_dist_sq"] = f.l2_dist_sq;
    j["hausdorff"] = f.hausdorff;
    j["mean_deficit"] = f.mean_deficit;
    return j;
}

SphereFit sphereFitFromJson(const Json& j) {
    SphereFit f;
    f.center = vecFromJson(j.at("center"));
    f.radius = j.at("radius");
    f.subspace = matFromJson(j.at("subspace"));
    f.l2_dist_sq = j.at("l2_dist_sq");
    f.hausdorff = j.at("hausdorff");
    f.mean_deficit = j.at("mean_deficit");
    return f;
}

Json toJson(const MonotonicityProfile& p) {
    Json j;
    j["center_vertex"] = p.center_vertex;
    j["center"] = vecToJson(p.center);
    j["rho"] = vecToJson(p.rho_samples);
    j["gamma"] = vecToJson(p.gamma);
    j["deficit_total"] = p.deficit_total;
    j["theta_infinity_proxy"] = p.theta_infinity_proxy;
    j["willmore"] = p.willmore;
    j["monotone_ok"] = p.monotone_ok;
    return j;
}

MonotonicityProfile monotonicityProfileFromJson(const Json& j) {
    MonotonicityProfile p;
    p.center_vertex = j.at("center_vertex");
    p.center = vecFromJson(j.at("center"));
    p.rho_samples = vecFromJson(j.at("rho"));
    p.gamma = vecFromJson(j.at("gamma"));
    p.deficit_total = j.at("deficit_total");
    p.theta_infinity_proxy = j.at("theta_infinity_proxy");
    p.willmore = j.at("willmore");
    p.monotone_ok = j.at("monotone_ok");
    return p;
}

Json toJson(const SphericalParam& p) {
    Json j;
    j["vertices"] = p.numVertices();
    j["seed_vertex"] = p.seed_vertex;
    j["images"] = matToJson(p.images);
    j["u"] = vecToJson(p.u);
    Json faces = Json::array();
    for (int f = 0; f < p.faces.rows(); ++f)
        faces.push_back({p.faces(f, 0), p.faces(f, 1), p.faces(f, 2)});
    j["faces"] = faces;
    j["orig_face_areas"] = vecToJson(p.orig_face_areas);
    j["orig_dual_areas"] = vecToJson(p.orig_dual_areas);
    j["qc_error"] = vecToJson(p.qc_error);
    Json tf = Json::array();
    for (const auto& t : p.transforms)
        tf.push_back({{"axis", t.axis}, {"pole_sign", t.pole_sign}, {"r", t.r}});
    j["transforms"] = tf;
    Json ha;
    const char* names[3] = {"x1", "x2", "x3"};
    for (int a = 0; a < 3; ++a)
        ha[names[a]] = {p.half_areas[a][0], p.half_areas[a][1]};
    j["half_areas"] = ha;
    return j;
}

SphericalParam sphericalParamFromJson(const Json& j) {
    SphericalParam p;
    Mat img = matFromJson(j.at("images"));
    p.images = img;
    p.u = vecFromJson(j.at("u"));
    const auto& faces = j.at("faces");
    p.faces.resize(faces.size(), 3);
    for (size_t f = 0; f < faces.size(); ++f)
        for (int k = 0; k < 3; ++k) p.faces(f, k) = faces[f][k].get<int>();
    p.orig_face_areas = vecFromJson(j.at("orig_face_areas"));
    p.orig_dual_areas = vecFromJson(j.at("orig_dual_areas"));
    p.qc_error = vecFromJson(j.at("qc_error"));
    p.seed_vertex = j.at("seed_vertex");
    for (const auto& t : j.at("transforms"))
        p.transforms.push_back(
            {t.at("axis").get<int>(), t.at("pole_sign").get<int>(), t.at("r").get<double>()});
    const char* names[3] = {"x1", "x2", "x3"};
    for (int a = 0; a < 3; ++a)
        for (int s = 0; s < 2; ++s)
            p.half_areas[a][s] = j.at("half_areas").at(names[a])[s].get<double>();
    return p;
}

std::string toCsv(const RigidityReport& r) {
    std::ostringstream out;
    out << "ambient_dim,chi,area,willmore,e_n,tau,a0_l2,funda_deficit,gauss_deficit,"
           "hypothesis_ok,theorem12_status,mean_deficit,radial_deficit,id_sup,"
           "sphere_center_dist,sphere_radius,w22_deficit,u_inf,u_l2,half_area_dev,"
           "qc_error_max\n";
    out << r.ambient_dim << ',' << r.chi << ',' << fmt(r.area) << ','
        << fmt(r.willmore) << ',' << fmt(r.e_n) << ',' << fmt(r.tau) << ','
        << fmt(r.a0_l2) << ',' << fmt(r.funda_deficit) << ',' << fmt(r.gauss_deficit)
        << ',' << (r.hypothesis_ok ? 1 : 0) << ',' << r.theorem12_status << ','
        << fmt(r.mean_deficit) << ',' << fmt(r.radial_deficit) << ',' << fmt(r.id_sup)
        << ',' << fmt(r.sphere_center_dist) << ',' << fmt(r.sphere_radius) << ','
        << fmt(r.w22_deficit) << ',' << fmt(r.u_inf) << ',' << fmt(r.u_l2) << ','
        << fmt(r.half_area_dev) << ',' << fmt(r.qc_error_max) << '\n';
    return out.str();
}

std::string toCsv(const SphereFit& f) {
    std::ostringstream out;
    out << "radius,l2_dist_sq,hausdorff,mean_deficit";
    for (int i = 0; i < f.center.size(); ++i) out << ",center_" << i;
    out << '\n' << fmt(f.radius) << ',' << fmt(f.l2_dist_sq) << ',' << fmt(f.hausdorff)
        << ',' << fmt(f.mean_deficit);
    for (int i = 0; i < f.center.size(); ++i) out << ',' << fmt(f.center[i]);
    out << '\n';
    return out.str();
}

std::string toCsv(const MonotonicityProfile& p) {
    std::ostringstream out;
    out << "center,rho,gamma\n";
    for (int i = 0; i < p.rho_samples.size(); ++i)
        out << p.center_vertex << ',' << fmt(p.rho_samples[i]) << ','
            << fmt(p.gamma[i]) << '\n';
    return out.str();
}

void writeTextFile(const std::string& path, const std::string& text) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot open '" + path + "' for writing");
    out << text;
    out.flush();
    if (!out) throw IoError("failed writing '" + path + "'");
}

std::string readTextFile(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open '" + path + "' for reading");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

namespace {
template <class Report>
void saveReportImpl(const Report& rep, const std::string& path, ReportFormat format) {
    if (format == ReportFormat::JSON)
        writeTextFile(path, toJson(rep).dump(2) + "\n");
    else
        writeTextFile(path, toCsv(rep));
}
} // namespace

void saveReport(const RigidityReport& rep, const std::string& path,
                ReportFormat format) {
    saveReportImpl(rep, path, format);
}
void saveReport(const SphereFit& fit, const std::string& path, ReportFormat format) {
    saveReportImpl(fit, path, format);
}
void saveReport(const MonotonicityProfile& prof, const std::string& path,
                ReportFormat format) {
    saveReportImpl(prof, path, format);
}
void saveParam(const SphericalParam& param, const std::string& path) {
    writeTextFile(path, toJson(param).dump(2) + "\n");
}

RigidityReport loadRigidityReport(const std::string& path) {
    return rigidityReportFromJson(Json::parse(readTextFile(path)));
}
SphereFit loadSphereFit(const std::string& path) {
    return sphereFitFromJson(Json::parse(readTextFile(path)));
}
MonotonicityProfile loadMonotonicityProfile(const std::string& path) {
    return monotonicityProfileFromJson(Json::parse(readTextFile(path)));
}
SphericalParam loadParam(const std::string& path) {
    return sphericalParamFromJson(Json::parse(readTextFile(path)));
}

} // namespace umb
