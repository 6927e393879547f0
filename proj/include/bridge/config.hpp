#pragma once

#include <map>
#include <string>

#include "bridge/integrator.hpp"
#include "bridge/params.hpp"

namespace bridge {

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Plain-text `key = value` configuration, `#` starts a comment.
/// Mechanical keys (all required): E_MPa, Ec_MPa, G_MPa, L_m, ell_m, f_m,
/// I_m4, K_m4, J_m6, A_m2, M_kg_per_m, g_m_per_s2.
/// Optional simulation keys: quad_panels, quad_nodes_per_panel, n_w, n_theta,
/// rel_tol, abs_tol, t_end_s, output_dt_s, method.
/// Unknown keys are errors.
struct Config {
    MechanicalParams mechanical;
    int quad_panels = 64;
    int quad_nodes_per_panel = 4;
    ModalConfig modes;
    IntegratorSettings integrator;

    /// All keys after defaulting, for the run manifest.
    std::map<std::string, std::string> resolved() const;
};

Config load_config(const std::string& path);
Config parse_config(const std::string& text, const std::string& origin = "<string>");

}  // namespace bridge
