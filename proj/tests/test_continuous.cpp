#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <limits>

#include "disclose/continuous.hpp"
#include "disclose/errors.hpp"
#include "test_util.hpp"

using namespace disclose;

namespace {

ConditionalDensityFamily uniform_family(int n) {
    return make_family(FamilySpec{}, n);
}

ConditionalDensityFamily triangular_family(double c0, double c1, double width, int n) {
    FamilySpec spec;
    spec.kind = FamilySpec::Kind::triangular;
    spec.center0 = c0;
    spec.center1 = c1;
    spec.width = width;
    return make_family(spec, n);
}

/// Linear densities 1 + slope(w - 1/2) tabulated as raw grids. Their grid
/// mean is 1/2 + slope (1/12 + h^2/6) exactly, so matching problems built
/// from them have closed-form solutions unpolluted by quadrature bias.
ConditionalDensityFamily linear_family(double slope0, double slope1, int n) {
    std::vector<GridDensity> slices;
    for (int i = 0; i <= n; ++i) {
        const double t = static_cast<double>(i) / n;
        const double slope = slope0 + slope1 * t;
        REQUIRE(std::abs(slope) <= 2.0);
        std::vector<double> v(n + 1);
        for (int k = 0; k <= n; ++k)
            v[k] = 1.0 + slope * (static_cast<double>(k) / n - 0.5);
        slices.push_back(GridDensity{std::move(v)});
    }
    return ConditionalDensityFamily(std::move(slices));
}

double sup_distance(const GridDensity& a, const GridDensity& b) {
    double worst = 0.0;
    for (std::size_t i = 0; i < a.values.size(); ++i)
        worst = std::max(worst, std::abs(a.values[i] - b.values[i]));
    return worst;
}

}  // namespace

TEST_CASE("descriptor of the uniform density") {
    const GridDensity u = uniform_density(256);
    CHECK(descriptor([](double w) { return w; }, u) == doctest::Approx(0.5).epsilon(1e-9));
    CHECK(descriptor([](double) { return 1.0; }, u) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("descriptor quadrature error is h^2/6 for the square moment") {
    // trapezoid(w^2) = 1/3 + h^2/6 exactly.
    for (int n : {64, 256}) {
        const double t = descriptor([](double w) { return w * w; }, uniform_density(n));
        const double err = t - 1.0 / 3.0;
        CHECK(err == doctest::Approx(1.0 / (6.0 * n * n)).epsilon(1e-6));
    }
}

TEST_CASE("grid refinement shrinks descriptors at trapezoidal order") {
    // Richardson ratio (t(h) - t(h/2)) / (t(h/2) - t(h/4)) ~ 4 for O(h^2).
    const auto ratio = [](auto&& value_at) {
        const double t1 = value_at(32);
        const double t2 = value_at(64);
        const double t3 = value_at(128);
        return (t1 - t2) / (t2 - t3);
    };
    const double r_uniform = ratio([](int n) {
        return descriptor([](double w) { return w * w; }, uniform_density(n));
    });
    CHECK(r_uniform >= 3.0);
    CHECK(r_uniform <= 5.0);

    const double r_beta = ratio([](int n) {
        return descriptor([](double w) { return w; }, beta_density(1.0, 2.0, n));
    });
    CHECK(r_beta >= 3.0);
    CHECK(r_beta <= 5.0);
}

TEST_CASE("uniform inference and impact convolve to uniform") {
    const int n = 128;
    const RiskDensityResult r = risk_density(uniform_family(n), uniform_family(n), 0.3);
    CHECK_FALSE(r.renormalized);
    for (double v : r.density.values) CHECK(v == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("condition-independent impact passes through any inference") {
    const int n = 128;
    const ConditionalDensityFamily impact = [&] {
        FamilySpec spec;
        spec.kind = FamilySpec::Kind::beta;
        spec.a0 = 2.0;
        spec.b0 = 3.0;
        return make_family(spec, n);
    }();
    const ConditionalDensityFamily spiky = triangular_family(0.7, 0.0, 0.1, n);
    const RiskDensityResult r = risk_density(impact, spiky, 0.42);
    const GridDensity expected = beta_density(2.0, 3.0, n);
    CHECK(sup_distance(r.density, expected) <= 1e-9);
}

TEST_CASE("narrowing spikes at full knowledge approach the top impact slice") {
    const int n = 256;
    const ConditionalDensityFamily impact = triangular_family(0.2, 0.6, 0.3, n);
    const GridDensity top = impact.slice(n);

    double prev = std::numeric_limits<double>::infinity();
    for (double half_width : {1.0 / 8.0, 1.0 / 16.0, 1.0 / 32.0}) {
        const ConditionalDensityFamily spike =
            triangular_family(1.0, 0.0, 2.0 * half_width, n);
        const RiskDensityResult r = risk_density(impact, spike, 1.0);
        const double d = sup_distance(r.density, top);
        CHECK(d < prev);
        prev = d;
    }
}

TEST_CASE("risk densities integrate to one before renormalization") {
    testutil::Gen gen(71);
    for (int i = 0; i < 40; ++i) {
        const int n = 64;
        // Random triangular families; constructors normalize at grid scale.
        const ConditionalDensityFamily impact =
            triangular_family(gen.uniform(0.2, 0.6), gen.uniform(-0.1, 0.3),
                              gen.uniform(0.1, 0.6), n);
        const ConditionalDensityFamily inference =
            triangular_family(gen.uniform(0.2, 0.6), gen.uniform(-0.1, 0.3),
                              gen.uniform(0.1, 0.6), n);
        const RiskDensityResult r = risk_density(impact, inference, gen.uniform());
        CHECK(r.integral_drift <= 1e-6);
        CHECK_FALSE(r.renormalized);
        for (double v : r.density.values) CHECK(v >= 0.0);
    }
}

TEST_CASE("descriptor of the convolution equals the double quadrature") {
    const int n = 96;
    const ConditionalDensityFamily impact = triangular_family(0.3, 0.4, 0.4, n);
    const ConditionalDensityFamily inference = triangular_family(0.25, 0.5, 0.3, n);
    const double x = 0.6;

    const double via_density = descriptor([](double w) { return w; },
                                          risk_density(impact, inference, x).density);

    // Same double sum with the loops exchanged.
    const GridDensity fi = inference.at(x);
    double direct = 0.0;
    for (int j = 0; j <= n; ++j) {
        const double wj = (j == 0 || j == n) ? 0.5 / n : 1.0 / n;
        double inner = 0.0;
        for (int k = 0; k <= n; ++k) {
            const double wk = (k == 0 || k == n) ? 0.5 / n : 1.0 / n;
            inner += wk * (static_cast<double>(k) / n) * impact.slice(j).values[k];
        }
        direct += wj * fi.values[j] * inner;
    }
    CHECK(via_density == doctest::Approx(direct).epsilon(1e-9));
}

TEST_CASE("equal impact residual is zero on identical consumers") {
    const int n = 64;
    const ConditionalDensityFamily impact = triangular_family(0.3, 0.4, 0.4, n);
    const ConditionalDensityFamily inference = triangular_family(0.25, 0.5, 0.3, n);
    for (double x : {0.0, 0.37, 1.0})
        CHECK(equal_impact_residual(impact, inference, x, impact, inference, x) == 0.0);
}

TEST_CASE("stochastically dominated inference lowers the mean impact") {
    const int n = 128;
    const ConditionalDensityFamily impact = triangular_family(0.2, 0.6, 0.3, n);
    const ConditionalDensityFamily high = triangular_family(0.3, 0.4, 0.2, n);
    const ConditionalDensityFamily low = triangular_family(0.2, 0.4, 0.2, n);
    const double residual = equal_impact_residual(impact, high, 0.5, impact, low, 0.5);
    CHECK(residual > 0.0);
    CHECK(residual <= 1.0);
    CHECK(residual >= -1.0);
}

TEST_CASE("matching disclosure recovers the symmetric root") {
    const int n = 128;
    const ConditionalDensityFamily impact = linear_family(0.4, 0.8, n);
    const ConditionalDensityFamily inference = linear_family(-0.5, 1.5, n);
    for (double x1 : {0.12, 0.5, 0.87}) {
        const auto x2 = solve_matching_disclosure(impact, inference, x1, impact, inference);
        REQUIRE(x2.has_value());
        CHECK(*x2 == doctest::Approx(x1).epsilon(1e-6));
    }
}

TEST_CASE("matching disclosure reproduces the linear closed form") {
    // Grid means are linear in the slope parameters, so equal impact means
    // u1(x1) = u2(x2): x2 = (p1 + q1 x1 - p2) / q2 = 0.25 for x1 = 0.5.
    const int n = 256;
    const ConditionalDensityFamily impact = linear_family(0.4, 0.8, n);
    const ConditionalDensityFamily inference1 = linear_family(-0.5, 1.5, n);
    const ConditionalDensityFamily inference2 = linear_family(0.1, 0.6, n);
    const auto x2 = solve_matching_disclosure(impact, inference1, 0.5, impact, inference2);
    REQUIRE(x2.has_value());
    CHECK(*x2 == doctest::Approx(0.25).epsilon(1e-6));
}

TEST_CASE("matching disclosure reports none without a sign change") {
    const int n = 128;
    const ConditionalDensityFamily impact = linear_family(0.4, 0.8, n);
    // Consumer 1 at full disclosure sits above consumer 2's whole range.
    const ConditionalDensityFamily inference1 = linear_family(1.9, 0.0, n);
    const ConditionalDensityFamily inference2 = linear_family(-0.5, 0.2, n);
    const auto x2 = solve_matching_disclosure(impact, inference1, 1.0, impact, inference2);
    CHECK_FALSE(x2.has_value());
}

TEST_CASE("family construction rejects bad parameters") {
    CHECK_THROWS_AS(triangular_density(0.5, 0.0, 64), ScenarioError);
    CHECK_THROWS_AS(beta_density(-1.0, 2.0, 64), ScenarioError);
    CHECK_THROWS_AS(normalized_density({1.0, -0.5, 1.0}), ScenarioError);
    CHECK_THROWS_AS(normalized_density({0.0, 0.0, 0.0}), ScenarioError);

    FamilySpec raw;
    raw.kind = FamilySpec::Kind::grid;
    raw.grid_values = {{1.0, 1.0}};  // wrong slice count for n = 2
    CHECK_THROWS_AS(make_family(raw, 2), ScenarioError);
}

TEST_CASE("raw grid families accept normalized tabulations") {
    FamilySpec raw;
    raw.kind = FamilySpec::Kind::grid;
    const int n = 2;
    for (int i = 0; i <= n; ++i) raw.grid_values.push_back({1.0, 1.0, 1.0});
    const ConditionalDensityFamily family = make_family(raw, n);
    CHECK(family.at(0.5) == uniform_density(n));
}

TEST_CASE("grid density validity checks") {
    CHECK(is_valid_density(uniform_density(16)));
    GridDensity unnormalized{{2.0, 2.0, 2.0}};
    CHECK_FALSE(is_valid_density(unnormalized));
    CHECK(is_valid_density(normalized_density(unnormalized.values)));
}
