#include "mongelab/config.hpp"

#include "mongelab/error.hpp"

#include <cmath>
#include <sstream>

namespace mongelab {

namespace {

constexpr const char* kModule = "config";

[[noreturn]] void fail(const std::string& what)
{
    throw Error(ErrorCode::ConfigError, kModule, what);
}

using json = nlohmann::json;

double finite_or_null(const json& j, double fallback)
{
    if (j.is_null())
        return fallback;
    return j.get<double>();
}

json inf_as_null(double v)
{
    if (std::isinf(v))
        return nullptr;
    return v;
}

std::vector<std::string> split(const std::string& s, char sep)
{
    std::vector<std::string> out;
    std::string cur;
    for (char c : s) {
        if (c == sep) {
            out.push_back(cur);
            cur.clear();
        } else {
            cur.push_back(c);
        }
    }
    out.push_back(cur);
    return out;
}

double to_double(const std::string& s)
{
    try {
        std::size_t pos = 0;
        const double v = std::stod(s, &pos);
        while (pos < s.size() && std::isspace(static_cast<unsigned char>(s[pos])))
            ++pos;
        if (pos != s.size())
            fail("trailing characters in number '" + s + "'");
        return v;
    } catch (const std::logic_error&) {
        fail("not a number: '" + s + "'");
    }
}

std::vector<double> numbers(const std::string& s)
{
    std::vector<double> out;
    if (s.empty())
        return out;
    for (const auto& part : split(s, ','))
        out.push_back(to_double(part));
    return out;
}

// Wraps model validation failures as configuration errors.
template <class F>
auto guarded(F&& f) -> decltype(f())
{
    try {
        return f();
    } catch (const json::exception& e) {
        fail(e.what());
    } catch (const Error& e) {
        if (e.code() == ErrorCode::ConfigError)
            throw;
        fail(e.what());
    }
}

} // namespace

Profile profile_from_json(const json& j)
{
    return guarded([&]() -> Profile {
        const std::string v = j.at("variant").get<std::string>();
        if (v == "LinearSegment")
            return LinearSegment{j.at("alpha").get<double>(), j.at("beta").get<double>()};
        if (v == "Exponential")
            return Exponential{j.at("A").get<double>(), j.at("L").get<double>()};
        if (v == "PiecewiseLinear") {
            PiecewiseLinear p;
            for (const auto& n : j.at("nodes")) {
                if (!n.is_array() || n.size() != 2)
                    fail("PiecewiseLinear nodes are [x, u] pairs");
                p.nodes.emplace_back(n[0].get<double>(), n[1].get<double>());
            }
            return p;
        }
        if (v == "PiecewiseExponential") {
            PiecewiseExponential p;
            for (const auto& s : j.at("segments")) {
                ExpSegment seg;
                seg.x_begin = finite_or_null(s.value("x_begin", json(nullptr)), -INFINITY);
                seg.x_end = finite_or_null(s.value("x_end", json(nullptr)), INFINITY);
                seg.A = s.at("A").get<double>();
                seg.L = s.at("L").get<double>();
                p.segments.push_back(seg);
            }
            return p;
        }
        if (v == "RawJet") {
            const auto& jj = j.at("jet");
            return RawJet{Jet(jj.at("x0").get<double>(), jj.at("coeffs").get<std::vector<double>>())};
        }
        fail("unknown profile variant '" + v + "'");
    });
}

json profile_to_json(const Profile& p)
{
    return std::visit(
        [](const auto& v) -> json {
            using V = std::decay_t<decltype(v)>;
            if constexpr (std::is_same_v<V, LinearSegment>) {
                return {{"variant", "LinearSegment"}, {"alpha", v.alpha}, {"beta", v.beta}};
            } else if constexpr (std::is_same_v<V, Exponential>) {
                return {{"variant", "Exponential"}, {"A", v.A}, {"L", v.L}};
            } else if constexpr (std::is_same_v<V, PiecewiseLinear>) {
                json nodes = json::array();
                for (const auto& n : v.nodes)
                    nodes.push_back({n.first, n.second});
                return {{"variant", "PiecewiseLinear"}, {"nodes", nodes}};
            } else if constexpr (std::is_same_v<V, PiecewiseExponential>) {
                json segs = json::array();
                for (const auto& s : v.segments)
                    segs.push_back({{"x_begin", inf_as_null(s.x_begin)}, {"x_end", inf_as_null(s.x_end)}, {"A", s.A}, {"L", s.L}});
                return {{"variant", "PiecewiseExponential"}, {"segments", segs}};
            } else {
                return {{"variant", "RawJet"}, {"jet", {{"x0", v.jet.x0()}, {"coeffs", v.jet.dense()}}}};
            }
        },
        p.v);
}

PressureSpec pressure_from_json(const json& j)
{
    return guarded([&]() -> PressureSpec {
        const std::string v = j.at("variant").get<std::string>();
        const double p0 = j.value("p0", 0.0);
        if (v == "None")
            return PressureSpec::none(p0);
        if (v == "Constant")
            return PressureSpec::constant(j.at("k").get<double>(), p0);
        if (v == "LinearInX")
            return PressureSpec::linear_in_x(j.at("k").get<double>(), p0);
        if (v == "TimeOnly")
            return PressureSpec::time_only(j.at("k_coeffs").get<std::vector<double>>(), p0);
        if (v == "PolyX")
            return PressureSpec::poly_x(j.at("g_coeffs").get<std::vector<double>>(), p0);
        fail("unknown pressure variant '" + v + "'");
    });
}

json pressure_to_json(const PressureSpec& p)
{
    json j = {{"variant", kind_name(p.kind)}, {"p0", p.p0}};
    switch (p.kind) {
    case PressureSpec::Kind::Constant:
    case PressureSpec::Kind::LinearInX: j["k"] = p.k; break;
    case PressureSpec::Kind::TimeOnly: j["k_coeffs"] = p.k_coeffs; break;
    case PressureSpec::Kind::PolyX: j["g_coeffs"] = p.g_coeffs; break;
    case PressureSpec::Kind::None: break;
    }
    return j;
}

Profile parse_profile(const std::string& text)
{
    if (!text.empty() && text.front() == '{')
        return guarded([&] { return profile_from_json(json::parse(text)); });
    const auto colon = text.find(':');
    const std::string head = text.substr(0, colon);
    const std::string body = colon == std::string::npos ? std::string() : text.substr(colon + 1);
    return guarded([&]() -> Profile {
        if (head == "segment") {
            const auto v = numbers(body);
            if (v.size() != 2)
                fail("segment needs ALPHA,BETA");
            return LinearSegment{v[0], v[1]};
        }
        if (head == "exp") {
            const auto v = numbers(body);
            if (v.size() != 2)
                fail("exp needs A,L");
            return Exponential{v[0], v[1]};
        }
        if (head == "pwl") {
            PiecewiseLinear p;
            for (const auto& node : split(body, ';')) {
                const auto v = numbers(node);
                if (v.size() != 2)
                    fail("pwl nodes are X,U pairs separated by ';'");
                p.nodes.emplace_back(v[0], v[1]);
            }
            return p;
        }
        if (head == "jet") {
            const auto parts = split(body, ';');
            if (parts.size() != 2)
                fail("jet needs X0;C0,C1,...");
            return RawJet{Jet(to_double(parts[0]), numbers(parts[1]))};
        }
        fail("unknown profile '" + text + "'");
    });
}

PressureSpec parse_pressure(const std::string& text)
{
    if (!text.empty() && text.front() == '{')
        return guarded([&] { return pressure_from_json(json::parse(text)); });
    const auto colon = text.find(':');
    const std::string head = text.substr(0, colon);
    const std::string body = colon == std::string::npos ? std::string() : text.substr(colon + 1);
    auto one = [&](const char* what) {
        const auto v = numbers(body);
        if (v.size() != 1)
            fail(std::string(what) + " needs one number");
        return v[0];
    };
    if (head == "none")
        return PressureSpec::none();
    if (head == "const")
        return PressureSpec::constant(one("const"));
    if (head == "linear")
        return PressureSpec::linear_in_x(one("linear"));
    if (head == "time")
        return PressureSpec::time_only(numbers(body));
    if (head == "poly")
        return PressureSpec::poly_x(numbers(body));
    fail("unknown pressure '" + text + "'");
}

std::string solver_name(SolverChoice s)
{
    switch (s) {
    case SolverChoice::Series: return "series";
    case SolverChoice::Implicit: return "implicit";
    case SolverChoice::Characteristics: return "characteristics";
    case SolverChoice::Extradim: return "extradim";
    case SolverChoice::All: return "all";
    }
    return "all";
}

SolverChoice parse_solver(const std::string& s)
{
    for (auto c : {SolverChoice::Series, SolverChoice::Implicit, SolverChoice::Characteristics, SolverChoice::Extradim,
                   SolverChoice::All})
        if (solver_name(c) == s)
            return c;
    fail("unknown solver '" + s + "'");
}

void RunConfig::validate() const
{
    if (times.empty())
        fail("no times given");
    for (double t : times)
        if (!std::isfinite(t))
            fail("times must be finite");
    if (n_samples < 2)
        fail("n_samples must be at least 2");
    if (order < 4)
        fail("order must be at least 4");
    if (!std::isfinite(x_range.lo) || !std::isfinite(x_range.hi) || !(x_range.hi > x_range.lo))
        fail("x_range must be a finite interval with x_min < x_max");
}

RunConfig run_config_from_json(const json& j, RunConfig base)
{
    return guarded([&]() -> RunConfig {
        RunConfig c = std::move(base);
        if (!j.is_object())
            fail("config must be a JSON object");
        static const char* known[] = {"profile", "pressure", "times", "x_range", "n_samples", "solver", "order", "output", "format"};
        for (const auto& item : j.items()) {
            bool ok = false;
            for (const char* k : known)
                ok = ok || item.key() == k;
            if (!ok)
                fail("unknown config field '" + item.key() + "'");
        }
        if (j.contains("profile"))
            c.profile = profile_from_json(j["profile"]);
        if (j.contains("pressure"))
            c.pressure = pressure_from_json(j["pressure"]);
        if (j.contains("times"))
            c.times = j["times"].get<std::vector<double>>();
        if (j.contains("x_range")) {
            const auto r = j["x_range"].get<std::vector<double>>();
            if (r.size() != 2)
                fail("x_range is [x_min, x_max]");
            c.x_range = {r[0], r[1]};
        }
        if (j.contains("n_samples"))
            c.n_samples = j["n_samples"].get<int>();
        if (j.contains("solver"))
            c.solver = parse_solver(j["solver"].get<std::string>());
        if (j.contains("order"))
            c.order = j["order"].get<int>();
        if (j.contains("output"))
            c.output = j["output"].get<std::string>();
        if (j.contains("format")) {
            const auto f = j["format"].get<std::string>();
            if (f == "csv")
                c.format = OutputFormat::Csv;
            else if (f == "json")
                c.format = OutputFormat::Json;
            else
                fail("format must be csv or json");
        }
        return c;
    });
}

json run_config_to_json(const RunConfig& cfg)
{
    return {{"profile", profile_to_json(cfg.profile)},
            {"pressure", pressure_to_json(cfg.pressure)},
            {"times", cfg.times},
            {"x_range", {cfg.x_range.lo, cfg.x_range.hi}},
            {"n_samples", cfg.n_samples},
            {"solver", solver_name(cfg.solver)},
            {"order", cfg.order},
            {"output", cfg.output},
            {"format", cfg.format == OutputFormat::Csv ? "csv" : "json"}};
}

std::vector<double> parse_times(const std::string& text)
{
    const auto parts = split(text, ':');
    if (parts.size() == 3) {
        const double a = to_double(parts[0]);
        const double b = to_double(parts[1]);
        const double step = to_double(parts[2]);
        if (!(step > 0.0) || !(b >= a))
            fail("times range needs a <= b and a positive step");
        const long n = std::lround(std::floor((b - a) / step + 1e-9));
        std::vector<double> out;
        for (long i = 0; i <= n; ++i)
            out.push_back(a + step * static_cast<double>(i));
        return out;
    }
    if (parts.size() != 1)
        fail("times are a comma list or a:b:step");
    const auto v = numbers(text);
    if (v.empty())
        fail("no times given");
    return v;
}

} // namespace mongelab
