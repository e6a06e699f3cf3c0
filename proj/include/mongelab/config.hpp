#pragma once

// JSON and short-string forms of profiles, drivers and run configurations.
//
// Profile JSON:  {"variant": "LinearSegment", "alpha": 1, "beta": 2}
//                {"variant": "Exponential", "A": 1, "L": 1}
//                {"variant": "PiecewiseLinear", "nodes": [[-1, 0], [0, 1], [1, 0]]}
//                {"variant": "PiecewiseExponential",
//                 "segments": [{"x_begin": null, "x_end": 0, "A": 1, "L": 1}, ...]}
//                {"variant": "RawJet", "jet": {"x0": 0, "coeffs": [1, 1, 0.5]}}
// Pressure JSON: {"variant": "None" | "Constant" | "LinearInX" | "TimeOnly" | "PolyX",
//                 "k": .., "k_coeffs": [..], "g_coeffs": [..], "p0": ..}
//
// Short forms: segment:ALPHA,BETA  exp:A,L  pwl:X0,U0;X1,U1;...  jet:X0;C0,C1,...
//              none  const:K  linear:K  time:K0,K1,...  poly:G0,G1,...
// A string starting with '{' is read as JSON.

#include "mongelab/model.hpp"

#include <nlohmann/json.hpp>

#include <string>
#include <vector>

namespace mongelab {

Profile profile_from_json(const nlohmann::json& j);
nlohmann::json profile_to_json(const Profile& p);
PressureSpec pressure_from_json(const nlohmann::json& j);
nlohmann::json pressure_to_json(const PressureSpec& p);

Profile parse_profile(const std::string& text);
PressureSpec parse_pressure(const std::string& text);

enum class SolverChoice { Series, Implicit, Characteristics, Extradim, All };
enum class OutputFormat { Csv, Json };

std::string solver_name(SolverChoice s);
SolverChoice parse_solver(const std::string& s);

struct RunConfig {
    Profile profile = Exponential{1.0, 1.0};
    PressureSpec pressure;
    std::vector<double> times{-0.5, -0.375, -0.25, -0.125, 0.0, 0.125, 0.25, 0.375, 0.5};
    Interval x_range{-4.0, 2.0};
    int n_samples = 201;
    SolverChoice solver = SolverChoice::All;
    int order = 40;
    std::string output; // empty: stdout
    OutputFormat format = OutputFormat::Csv;

    /// Throws ConfigError unless times are finite, n_samples >= 2, order >= 4
    /// and the x range is a finite, non-empty interval.
    void validate() const;
};

/// Fields present in j replace those of base.
RunConfig run_config_from_json(const nlohmann::json& j, RunConfig base = {});
nlohmann::json run_config_to_json(const RunConfig& cfg);

/// "a:b:step" or a comma list.
std::vector<double> parse_times(const std::string& text);

} // namespace mongelab
