#pragma once

// Subcommands behind the mongelab executable. Each produces a Table that is
// written as CSV or JSON; run() maps failures to exit codes
//   0 ok, 2 configuration, 3 solver, 4 verification failure.

#include "mongelab/config.hpp"

#include <iosfwd>
#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace mongelab::cli {

using Cell = std::variant<std::monostate, double, long long, std::string>;

struct Table {
    std::vector<std::string> columns;
    std::vector<std::vector<Cell>> rows;
};

/// printf %.17g.
std::string format_double(double v);
void write_csv(std::ostream& os, const Table& t);
void write_json(std::ostream& os, const Table& t);
/// Polylines of an evolve table, one per (t, solver, branch).
std::string render_svg(const Table& evolve);

/// hardware_concurrency capped by MONGELAB_THREADS (at least 1).
unsigned thread_cap();

/// t,x,u,branch,solver and, for solver=all, discrepancy.
Table cmd_evolve(const RunConfig& cfg);
/// x,t_break_closed,t_break_ratio,rel_diff,status
Table cmd_breaktime(const RunConfig& cfg);
/// t,x_face,u_face for exponential data.
Table cmd_front_face(const RunConfig& cfg);
/// t,status,position,u_left,u_right,speed,area_residual,area
Table cmd_shock(const RunConfig& cfg);

struct VerifyOptions {
    std::optional<double> tol; // replaces every bound
    bool flip_g_sign = false;  // negative control for the characteristics suite
};

struct CheckResult {
    std::string suite;
    std::string name;
    double value = 0.0;
    double bound = 0.0;
    bool pass = false;
};

struct VerifyReport {
    std::vector<CheckResult> checks;
    bool all_pass() const;
};

VerifyReport cmd_verify(const RunConfig& cfg, const VerifyOptions& opt);
/// suite,check,value,bound,result
Table report_table(const VerifyReport& r);

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

} // namespace mongelab::cli
