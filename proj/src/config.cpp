#include "umb/config.hpp"

#include "umb/errors.hpp"

#include <fstream>
#include <map>
#include <sstream>

namespace umb {

void Config::set(const std::string& key, const std::string& value) {
    auto d = [&] { return std::stod(value); };
    auto i = [&] { return std::stoi(value); };
    try {
        if (key == "quadrature_tol") quadrature_tol = d();
        else if (key == "bisection_tol") bisection_tol = d();
        else if (key == "half_area_tol") half_area_tol = d();
        else if (key == "moebius_r_min") moebius_r_min = d();
        else if (key == "moebius_r_max") moebius_r_max = d();
        else if (key == "moebius_max_bisections") moebius_max_bisections = i();
        else if (key == "moebius_max_sweeps") moebius_max_sweeps = i();
        else if (key == "solver_tol") solver_tol = d();
        else if (key == "solver_max_iters") solver_max_iters = i();
        else if (key == "smoothing_iters") smoothing_iters = i();
        else if (key == "smoothing_lambda") smoothing_lambda = d();
        else if (key == "ball_clip_depth") ball_clip_depth = i();
        else if (key == "center_exclusion_scale") center_exclusion_scale = d();
        else if (key == "density_c0") density_c0 = d();
        else if (key == "li_yau_rho") li_yau_rho = d();
        else if (key == "li_yau_tol") li_yau_tol = d();
        else if (key == "hausdorff_samples") hausdorff_samples = i();
        else if (key == "gn_max_iters") gn_max_iters = i();
        else if (key == "gn_step_tol") gn_step_tol = d();
        else if (key == "gauss_estimate_cn") gauss_estimate_cn = d();
        else if (key == "mean_curvature_floor") mean_curvature_floor = d();
        else if (key == "delta0_sq") delta0_sq = d();
        else if (key == "spectral_slack") spectral_slack = d();
        else if (key == "gram_max_dev") gram_max_dev = d();
        else if (key == "threads") threads = i();
        else throw UsageError("unknown config key '" + key + "'");
    } catch (const std::invalid_argument&) {
        throw UsageError("bad value '" + value + "' for config key '" + key + "'");
    }
}

Config Config::fromFile(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open config '" + path + "'");
    Config cfg;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        auto hash = line.find('#');
        if (hash != std::string::npos) line.resize(hash);
        std::string trimmed;
        for (char c : line)
            if (!std::isspace(static_cast<unsigned char>(c))) trimmed += c;
        if (trimmed.empty()) continue;
        auto eq = trimmed.find('=');
        if (eq == std::string::npos)
            throw UsageError("config line " + std::to_string(lineno) +
                             " is not key=value");
        cfg.set(trimmed.substr(0, eq), trimmed.substr(eq + 1));
    }
    return cfg;
}

} // namespace umb
