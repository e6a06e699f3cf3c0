#include "mongelab/config.hpp"
#include "mongelab/error.hpp"

#include <doctest.h>

#include <cmath>

using namespace mongelab;
using nlohmann::json;

namespace {

ErrorCode code_of(const std::function<void()>& f)
{
    try {
        f();
    } catch (const Error& e) {
        return e.code();
    }
    FAIL("expected an error");
    return ErrorCode::DomainError;
}

void same_values(const Profile& a, const Profile& b)
{
    CHECK(a.kind() == b.kind());
    for (double x : {-3.3, -0.9, 0.05, 0.7, 2.4})
        CHECK(a.value(x) == b.value(x));
}

} // namespace

TEST_CASE("profile JSON round trip")
{
    const Profile profiles[] = {
        LinearSegment{1.0, 2.0},
        Exponential{0.5, -2.0},
        PiecewiseLinear{{{-1.0, 0.0}, {0.0, 1.0}, {1.0, 0.0}}},
        PiecewiseExponential{{{-INFINITY, 0.0, 1.0, 1.0}, {0.0, INFINITY, 1.0, -1.0}}},
        RawJet{Jet(0.0, {1.0, 1.0, 0.5})},
    };
    for (const auto& p : profiles) {
        const json j = profile_to_json(p);
        same_values(profile_from_json(j), p);
        same_values(parse_profile(j.dump()), p);
    }
    const json pe = profile_to_json(profiles[3]);
    CHECK(pe["segments"][0]["x_begin"].is_null());
    CHECK(pe["segments"][1]["x_end"].is_null());
}

TEST_CASE("profile short forms")
{
    same_values(parse_profile("segment:1,2"), LinearSegment{1.0, 2.0});
    same_values(parse_profile("exp:1,1"), Exponential{1.0, 1.0});
    same_values(parse_profile("pwl:-1,0;0,1;1,0"), PiecewiseLinear{{{-1.0, 0.0}, {0.0, 1.0}, {1.0, 0.0}}});
    same_values(parse_profile("jet:0;1,1,0.5"), RawJet{Jet(0.0, {1.0, 1.0, 0.5})});
    for (const char* bad : {"segment:1", "exp:1,2,3", "pwl:1,2,3", "wave:1", "", "{\"variant\":\"Blob\"}",
                            "{\"variant\":\"LinearSegment\"}", "{not json", "pwl:1,0;0,1"})
        CHECK(code_of([bad] { parse_profile(bad); }) == ErrorCode::ConfigError);
}

TEST_CASE("pressure forms")
{
    const PressureSpec specs[] = {PressureSpec::none(0.5), PressureSpec::constant(2.0), PressureSpec::linear_in_x(0.7, 1.0),
                                  PressureSpec::time_only({1.0, -0.5}), PressureSpec::poly_x({0.1, 0.5, 0.0, 0.3})};
    for (const auto& p : specs) {
        const PressureSpec q = pressure_from_json(pressure_to_json(p));
        CHECK(q.kind == p.kind);
        for (double x : {-1.0, 0.3})
            for (double t : {0.0, 0.8}) {
                CHECK(q.g(x, t) == p.g(x, t));
                if (p.kind != PressureSpec::Kind::TimeOnly)
                    CHECK(pressure_at(q, x) == pressure_at(p, x));
            }
    }
    CHECK(parse_pressure("none").kind == PressureSpec::Kind::None);
    CHECK(parse_pressure("const:2").g(1.0, 0.0) == 2.0);
    CHECK(parse_pressure("linear:0.5").g(2.0, 0.0) == 0.5);
    CHECK(parse_pressure("time:1,2").g(0.0, 3.0) == 7.0);
    CHECK(parse_pressure("poly:0,1").g(4.0, 0.0) == 4.0);
    CHECK(parse_pressure("{\"variant\":\"Constant\",\"k\":3}").g(0.0, 0.0) == 3.0);
    for (const char* bad : {"const", "const:1,2", "gravity:1", "{\"variant\":\"Constant\"}"})
        CHECK(code_of([bad] { parse_pressure(bad); }) == ErrorCode::ConfigError);
}

TEST_CASE("times and solvers")
{
    const auto figure = parse_times("-0.5:0.5:0.125");
    REQUIRE(figure.size() == 9);
    CHECK(figure.front() == -0.5);
    CHECK(figure.back() == 0.5);
    CHECK(figure[4] == 0.0);
    CHECK(parse_times("0.1,0.2, 0.4") == std::vector<double>{0.1, 0.2, 0.4});
    for (const char* bad : {"1:0:0.1", "0:1:0", "0:1", "", "a,b"})
        CHECK(code_of([bad] { parse_times(bad); }) == ErrorCode::ConfigError);

    for (auto s : {SolverChoice::Series, SolverChoice::Implicit, SolverChoice::Characteristics, SolverChoice::Extradim,
                   SolverChoice::All})
        CHECK(parse_solver(solver_name(s)) == s);
    CHECK(code_of([] { parse_solver("magic"); }) == ErrorCode::ConfigError);
}

TEST_CASE("run configuration")
{
    RunConfig def;
    CHECK_NOTHROW(def.validate());
    CHECK(def.times.size() == 9);

    const RunConfig c = run_config_from_json(
        json{{"profile", {{"variant", "LinearSegment"}, {"alpha", 1}, {"beta", 2}}}, {"times", {0.1}}, {"n_samples", 5}});
    CHECK(c.profile.kind() == Profile(LinearSegment{}).kind());
    CHECK(c.times == std::vector<double>{0.1});
    CHECK(c.n_samples == 5);
    CHECK(c.order == def.order);

    const RunConfig back = run_config_from_json(run_config_to_json(c));
    CHECK(run_config_to_json(back) == run_config_to_json(c));

    // Later layers only replace what they name.
    const RunConfig layered = run_config_from_json(json{{"order", 12}}, c);
    CHECK(layered.order == 12);
    CHECK(layered.n_samples == 5);

    for (const json& bad : {json{{"n_samples", 1}}, json{{"order", 3}}, json{{"x_range", {1.0, 1.0}}},
                            json{{"x_range", {0.0}}}, json{{"times", json::array()}}, json{{"colour", "red"}},
                            json::array(), json{{"solver", "magic"}}, json{{"order", "ten"}}})
        CHECK(code_of([&] { run_config_from_json(bad).validate(); }) == ErrorCode::ConfigError);
    RunConfig inf = def;
    inf.times = {NAN};
    CHECK(code_of([&] { inf.validate(); }) == ErrorCode::ConfigError);
}
