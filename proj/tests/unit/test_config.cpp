#include "spa/config.hpp"
#include "spa/quadrature.hpp"

#include <doctest.h>

#include <cmath>
#include <sstream>

using namespace spa;

namespace {

bool has_failure(const ValidationReport& r, const std::string& name) {
    for (const auto& c : r.checks)
        if (c.name == name && !c.passed) return true;
    return false;
}

std::string failure_message(const ValidationReport& r, const std::string& name) {
    for (const auto& c : r.checks)
        if (c.name == name && !c.passed) return c.message;
    return {};
}

}  // namespace

TEST_CASE("indicator p=1 is valid with integral exactly one half") {
    ModelParams p;
    const auto r = validate(p);
    CHECK(r.ok());
    CHECK(r.profile_integral == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(ProfileFunction::indicator(1.0).integral(1e9) == 0.5);
}

TEST_CASE("affine slope 1 is rejected") {
    ModelParams p;
    p.f = AttachmentRule::affine(1.0, 1.0);
    const auto r = validate(p);
    CHECK_FALSE(r.ok());
    CHECK(has_failure(r, "attachment.slope"));
    CHECK(failure_message(r, "attachment.slope") == "slope must be < 1");
    CHECK_THROWS_AS(require_valid(p), InvalidModel);
}

TEST_CASE("polynomial delta 0.9 is rejected as divergent") {
    ModelParams p;
    p.phi = ProfileFunction::polynomial(0.9);
    const auto r = validate(p);
    CHECK_FALSE(r.ok());
    CHECK(has_failure(r, "profile.integrable"));
    CHECK(failure_message(r, "profile.integrable").find("diverges") != std::string::npos);
}

TEST_CASE("other validation failures") {
    CHECK(has_failure(validate(AttachmentRule::affine(0.5, 0.0), ProfileFunction::indicator(1)), "attachment.positive"));
    CHECK(has_failure(validate(AttachmentRule::tabulated({2, 1}, 0.1), ProfileFunction::indicator(1)), "attachment.monotone"));
    CHECK(has_failure(validate(AttachmentRule::affine(0.5, 1), ProfileFunction::indicator(1.5)), "profile.range"));
    CHECK(has_failure(validate(AttachmentRule::affine(0.5, 1), ProfileFunction::tabulated({{0, 1}, {1, 0.5}})),
                      "profile.integrable"));
    CHECK(has_failure(validate(AttachmentRule::affine(0.5, 1), ProfileFunction::tabulated({{0, 0.5}, {1, 0.7}, {2, 0}})),
                      "profile.monotone"));
    ModelParams p;
    p.horizon = Horizon::count(0);
    CHECK(has_failure(validate(p), "horizon.positive"));
}

TEST_CASE("profile_eval examples") {
    const auto phi = ProfileFunction::indicator(1.0);
    CHECK(profile_eval(phi, 0.25) == 1.0);
    CHECK(profile_eval(phi, 0.75) == 0.0);
    CHECK(profile_eval(phi, 0.0) == 1.0);
    CHECK(profile_eval(phi, 0.5) == 0.0);
}

TEST_CASE("polynomial delta 2 at its scale point matches a quadrature normalization") {
    // Independent oracle: c such that int_0^inf min(1, (c x)^-2) dx = 1/2, found by bisection on quadrature.
    auto integral = [](double c) {
        auto shape = [c](double x) { return std::min(1.0, std::pow(c * x, -2.0)); };
        // Head [0, 1/c] plus the tail [1/c, X] plus the analytic remainder 1/(c^2 X).
        const double X = 1e4 / c;
        return integrate_simpson(shape, 0.0, 1.0 / c, 1e-13) + integrate_simpson(shape, 1.0 / c, X, 1e-13) +
               1.0 / (c * c * X);
    };
    double lo = 0.1, hi = 100.0;
    for (int i = 0; i < 200; ++i) {
        const double mid = 0.5 * (lo + hi);
        (integral(mid) > 0.5 ? lo : hi) = mid;
    }
    const double c = 0.5 * (lo + hi);
    const auto phi = ProfileFunction::polynomial(2.0, 1.0);
    CHECK(profile_eval(phi, 1.0) == doctest::Approx(std::min(1.0, std::pow(c, -2.0))).epsilon(1e-7));
    CHECK(profile_eval(phi, 3.0) == doctest::Approx(std::pow(3.0 * c, -2.0)).epsilon(1e-7));
}

TEST_CASE("profile_inverse examples") {
    const auto ind = ProfileFunction::indicator(1.0);
    for (double u : {1e-9, 0.1, 0.5, 1.0}) CHECK(profile_inverse(ind, u) == 0.5);

    // min(1, (c x)^-2) < 1 iff x > 1/c: the plateau ends at 1/c = 1/stretch.
    const auto poly = ProfileFunction::polynomial(2.0);
    CHECK(profile_inverse(poly, 1.0) == doctest::Approx(poly.flat_end()));
    CHECK(profile_eval(poly, 0.999 * profile_inverse(poly, 1.0)) == 1.0);
    CHECK(profile_eval(poly, 1.001 * profile_inverse(poly, 1.0)) < 1.0);

    const auto tab = ProfileFunction::tabulated({{0, 1.0}, {1, 0.5}, {2, 0.25}, {3, 0}});
    const double s = tab.stretch();
    // Just above a knot value, phi drops below u exactly at that knot's abscissa.
    CHECK(profile_inverse(tab, 0.5 + 1e-9) == doctest::Approx(1.0 / s));
    CHECK(profile_inverse(tab, 0.25 + 1e-9) == doctest::Approx(2.0 / s));
    CHECK(profile_inverse(tab, 1e-9) == doctest::Approx(3.0 / s));
}

TEST_CASE("attachment_eval examples") {
    const auto f = AttachmentRule::affine(0.5, 1.0);
    CHECK(attachment_eval(f, 0) == 1.0);
    CHECK(attachment_eval(f, 4) == 3.0);
    const auto t = AttachmentRule::tabulated({1, 1, 2}, 0.3);
    CHECK(attachment_eval(t, 5) == doctest::Approx(2.9));
    CHECK(attachment_eval(t, 1) == 1.0);
}

TEST_CASE("property: profile integrals converge to one half") {
    const std::vector<ProfileFunction> profiles{
        ProfileFunction::indicator(1.0),       ProfileFunction::indicator(0.3),
        ProfileFunction::polynomial(1.5),      ProfileFunction::polynomial(3.0, 2.0),
        ProfileFunction::polynomial(2.0, 0.5), ProfileFunction::tabulated({{0, 1}, {0.4, 0.6}, {1.1, 0.2}, {2, 0}}),
    };
    for (const auto& phi : profiles) {
        CHECK(validate(AttachmentRule::affine(0.5, 1), phi).ok());
        CHECK(profile_integral_numeric(phi) == doctest::Approx(0.5).epsilon(1e-6));
        // The closed form over a growing window approaches 1/2.
        double previous = 0.0;
        for (double X = 0.1; X < 1e12; X *= 10) {
            const double v = phi.integral(X);
            CHECK(v >= previous - 1e-15);
            previous = v;
        }
        CHECK(previous == doctest::Approx(0.5).epsilon(1e-6));
    }
}

TEST_CASE("property: inverse sandwich") {
    const std::vector<ProfileFunction> profiles{
        ProfileFunction::indicator(0.7),
        ProfileFunction::polynomial(2.5),
        ProfileFunction::tabulated({{0, 0.9}, {0.5, 0.4}, {1.5, 0}}),
    };
    for (const auto& phi : profiles) {
        for (double u = 0.01; u <= 1.0; u += 0.0137) {
            const double x = profile_inverse(phi, u);
            // phi < u right after x, and phi >= u strictly before it.
            CHECK(profile_eval(phi, x * (1 + 1e-9) + 1e-12) < u);
            if (x > 0) CHECK(profile_eval(phi, x * (1 - 1e-9)) >= u);
        }
        for (double u = 0.05; u < 1.0; u += 0.1) CHECK(profile_inverse(phi, u) >= profile_inverse(phi, u + 0.05));
    }
}

TEST_CASE("property: attachment rules are non-decreasing") {
    for (const auto& f : {AttachmentRule::affine(0.5, 1.0), AttachmentRule::affine(0.0, 2.0),
                          AttachmentRule::tabulated({1, 1, 2, 4}, 0.7)}) {
        for (std::uint64_t k = 0; k < 10000; ++k) REQUIRE(f(k + 1) >= f(k));
    }
}

TEST_CASE("profiles are non-increasing and within [0, 1]") {
    for (const auto& phi : {ProfileFunction::indicator(0.4), ProfileFunction::polynomial(1.2),
                            ProfileFunction::tabulated({{0, 1}, {1, 0.3}, {2, 0}})}) {
        double previous = 1.0;
        for (double x = 0.0; x < 50.0; x += 0.01) {
            const double v = phi(x);
            REQUIRE(v >= 0.0);
            REQUIRE(v <= previous);
            previous = v;
        }
    }
}

TEST_CASE("attachment inverse is right-continuous") {
    const auto f = AttachmentRule::affine(0.5, 1.0);
    CHECK(f.inverse(0.2) == 0);
    CHECK(f.inverse(1.0) == 0);
    CHECK(f.inverse(1.2) == 1);
    CHECK(f.inverse(3.0) == 4);
    CHECK(AttachmentRule::affine(0.0, 1.0).inverse(2.0) == std::numeric_limits<std::uint64_t>::max());
}

TEST_CASE("config parsing") {
    std::istringstream in(
        "# comment\n"
        "attachment.kind = affine\n"
        "attachment.gamma = 0.25\n"
        "attachment.beta = 2\n"
        "profile.kind = polynomial\n"
        "profile.delta = 3\n"
        "seed = 42\n"
        "horizon.kind = time\n"
        "horizon.value = 12.5\n");
    const auto p = parse_config(in);
    CHECK(p.f.gamma() == 0.25);
    CHECK(p.f.beta() == 2.0);
    CHECK(p.phi.kind() == ProfileFunction::Kind::polynomial);
    CHECK(p.phi.delta() == 3.0);
    CHECK(p.seed == 42);
    CHECK(p.horizon.kind == Horizon::Kind::time);
    CHECK(p.horizon.value == 12.5);

    std::istringstream again(format_config(p));
    const auto q = parse_config(again);
    CHECK(format_config(q) == format_config(p));

    std::istringstream tab("attachment.kind = tabulated\nattachment.values = 1, 1, 2\nattachment.gamma = 0.3\n"
                           "profile.kind = tabulated\nprofile.knots = 0:1, 1:0.5, 2:0\n");
    const auto t = parse_config(tab);
    CHECK(t.f(5) == doctest::Approx(2.9));
    CHECK(t.phi.knots().size() == 3);
}

TEST_CASE("config errors carry key and line") {
    auto error_of = [](const std::string& text) -> std::pair<std::string, int> {
        std::istringstream in(text);
        try {
            parse_config(in);
        } catch (const ConfigError& e) {
            return {e.key(), e.line()};
        }
        return {"", -1};
    };
    CHECK(error_of("seed = 1\nprofile.colour = red\n") == std::pair<std::string, int>{"profile.colour", 2});
    CHECK(error_of("attachment.gamma = abc\n") == std::pair<std::string, int>{"attachment.gamma", 1});
    CHECK(error_of("seed = 1\n\nseed = 2\n") == std::pair<std::string, int>{"seed", 3});
    CHECK(error_of("profile.kind = polynomial\n") == std::pair<std::string, int>{"profile.delta", 1});
    CHECK(error_of("seed =\n") == std::pair<std::string, int>{"seed", 1});
    CHECK(error_of("horizon.kind = count\nhorizon.value = 2.5\n") == std::pair<std::string, int>{"horizon.value", 2});
    CHECK_THROWS_AS(load_config("/nonexistent/file.cfg"), ConfigError);
}
