#include "mongelab/cli.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <limits>
#include <map>
#include <ostream>
#include <sstream>
#include <thread>

namespace mongelab::cli {

std::string format_double(double v)
{
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

namespace {

std::string cell_text(const Cell& c)
{
    return std::visit(
        [](const auto& v) -> std::string {
            using V = std::decay_t<decltype(v)>;
            if constexpr (std::is_same_v<V, std::monostate>)
                return "";
            else if constexpr (std::is_same_v<V, double>)
                return format_double(v);
            else if constexpr (std::is_same_v<V, long long>)
                return std::to_string(v);
            else
                return v;
        },
        c);
}

nlohmann::ordered_json cell_json(const Cell& c)
{
    return std::visit(
        [](const auto& v) -> nlohmann::ordered_json {
            using V = std::decay_t<decltype(v)>;
            if constexpr (std::is_same_v<V, std::monostate>) {
                return nullptr;
            } else if constexpr (std::is_same_v<V, double>) {
                // JSON has no inf/nan
                if (!std::isfinite(v))
                    return format_double(v);
                return v;
            } else {
                return v;
            }
        },
        c);
}

} // namespace

void write_csv(std::ostream& os, const Table& t)
{
    for (std::size_t i = 0; i < t.columns.size(); ++i)
        os << (i ? "," : "") << t.columns[i];
    os << '\n';
    for (const auto& row : t.rows) {
        for (std::size_t i = 0; i < row.size(); ++i)
            os << (i ? "," : "") << cell_text(row[i]);
        os << '\n';
    }
}

void write_json(std::ostream& os, const Table& t)
{
    nlohmann::ordered_json rows = nlohmann::ordered_json::array();
    for (const auto& row : t.rows) {
        nlohmann::ordered_json obj = nlohmann::ordered_json::object();
        for (std::size_t i = 0; i < row.size() && i < t.columns.size(); ++i)
            obj[t.columns[i]] = cell_json(row[i]);
        rows.push_back(std::move(obj));
    }
    os << nlohmann::ordered_json{{"columns", t.columns}, {"rows", rows}}.dump(2) << '\n';
}

std::string render_svg(const Table& evolve)
{
    auto col = [&](const std::string& name) -> std::size_t {
        const auto it = std::find(evolve.columns.begin(), evolve.columns.end(), name);
        return static_cast<std::size_t>(it - evolve.columns.begin());
    };
    const std::size_t ct = col("t"), cx = col("x"), cu = col("u"), cb = col("branch"), cs = col("solver");
    std::map<std::tuple<double, std::string, long long>, std::vector<std::pair<double, double>>> lines;
    double xmin = std::numeric_limits<double>::infinity(), xmax = -xmin, umin = xmin, umax = -xmin;
    for (const auto& row : evolve.rows) {
        const double t = std::get<double>(row[ct]);
        const double x = std::get<double>(row[cx]);
        const double u = std::get<double>(row[cu]);
        if (!std::isfinite(u))
            continue;
        lines[{t, std::get<std::string>(row[cs]), std::get<long long>(row[cb])}].push_back({x, u});
        xmin = std::min(xmin, x);
        xmax = std::max(xmax, x);
        umin = std::min(umin, u);
        umax = std::max(umax, u);
    }
    const double W = 800, H = 500, pad = 20;
    if (!(xmax > xmin))
        xmax = xmin + 1;
    if (!(umax > umin))
        umax = umin + 1;
    std::ostringstream os;
    os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W << "\" height=\"" << H << "\">\n";
    for (auto& [key, pts] : lines) {
        std::sort(pts.begin(), pts.end());
        os << "<polyline fill=\"none\" stroke=\"black\" stroke-width=\"1\" data-t=\"" << format_double(std::get<0>(key))
           << "\" data-solver=\"" << std::get<1>(key) << "\" data-branch=\"" << std::get<2>(key) << "\" points=\"";
        for (const auto& [x, u] : pts) {
            const double px = pad + (W - 2 * pad) * (x - xmin) / (xmax - xmin);
            const double py = H - pad - (H - 2 * pad) * (u - umin) / (umax - umin);
            os << format_double(px) << ',' << format_double(py) << ' ';
        }
        os << "\"/>\n";
    }
    os << "</svg>\n";
    return os.str();
}

unsigned thread_cap()
{
    unsigned n = std::max(1u, std::thread::hardware_concurrency());
    if (const char* env = std::getenv("MONGELAB_THREADS")) {
        char* end = nullptr;
        const long v = std::strtol(env, &end, 10);
        if (end != env && v >= 1)
            n = std::min(n, static_cast<unsigned>(v));
    }
    return n;
}

Table report_table(const VerifyReport& r)
{
    Table t;
    t.columns = {"suite", "check", "value", "bound", "result"};
    for (const auto& c : r.checks)
        t.rows.push_back({c.suite, c.name, c.value, c.bound, std::string(c.pass ? "PASS" : "FAIL")});
    return t;
}

bool VerifyReport::all_pass() const
{
    return std::all_of(checks.begin(), checks.end(), [](const CheckResult& c) { return c.pass; });
}

} // namespace mongelab::cli
