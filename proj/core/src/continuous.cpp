#include "disclose/continuous.hpp"

#include <algorithm>
#include <cmath>

#include "disclose/errors.hpp"

namespace disclose {

double trapezoid(std::span<const double> values) {
    const std::size_t n = values.size();
    if (n < 2) return 0.0;
    double acc = 0.5 * (values.front() + values.back());
    for (std::size_t i = 1; i + 1 < n; ++i) acc += values[i];
    return acc / static_cast<double>(n - 1);
}

bool is_valid_density(const GridDensity& f, double tol) {
    if (f.values.size() < 2) return false;
    for (double v : f.values)
        if (!(v >= 0.0)) return false;
    return std::abs(f.integral() - 1.0) <= tol;
}

GridDensity normalized_density(std::vector<double> values) {
    if (values.size() < 2) throw ScenarioError("density needs at least 2 samples");
    for (double v : values)
        if (!(v >= 0.0)) throw ScenarioError("density values must be nonnegative");
    const double total = trapezoid(values);
    if (!(total > 0.0)) throw ScenarioError("density has zero total mass");
    for (double& v : values) v /= total;
    return {std::move(values)};
}

GridDensity uniform_density(int grid_n) {
    return {std::vector<double>(grid_n + 1, 1.0)};
}

GridDensity triangular_density(double center, double width, int grid_n) {
    if (!(width > 0.0)) throw ScenarioError("triangular density needs positive width");
    const double half = width / 2.0;
    std::vector<double> v(grid_n + 1);
    for (int i = 0; i <= grid_n; ++i) {
        const double w = static_cast<double>(i) / grid_n;
        v[i] = std::max(0.0, 1.0 - std::abs(w - center) / half) * (2.0 / width);
    }
    // Renormalization absorbs both tabulation error and clipping at [0,1].
    return normalized_density(std::move(v));
}

GridDensity beta_density(double a, double b, int grid_n) {
    if (a < 0.0 || b < 0.0) throw ScenarioError("beta-shaped density needs a, b >= 0");
    std::vector<double> v(grid_n + 1);
    for (int i = 0; i <= grid_n; ++i) {
        const double w = static_cast<double>(i) / grid_n;
        v[i] = std::pow(w, a) * std::pow(1.0 - w, b);
    }
    return normalized_density(std::move(v));
}

double descriptor(const std::function<double(double)>& h, const GridDensity& f) {
    const int n = f.intervals();
    std::vector<double> integrand(n + 1);
    for (int i = 0; i <= n; ++i) {
        const double w = static_cast<double>(i) / n;
        integrand[i] = h(w) * f.values[i];
    }
    return trapezoid(integrand);
}

ConditionalDensityFamily::ConditionalDensityFamily(std::vector<GridDensity> slices)
    : slices_(std::move(slices)) {
    if (slices_.size() < 2) throw ScenarioError("density family needs at least 2 slices");
    const std::size_t samples = slices_.front().values.size();
    for (const auto& s : slices_)
        if (s.values.size() != samples)
            throw ScenarioError("density family slices disagree on grid size");
}

GridDensity ConditionalDensityFamily::at(double t) const {
    if (!(t >= 0.0 && t <= 1.0)) throw ScenarioError("condition parameter outside [0,1]");
    const int n = intervals();
    const double pos = t * n;
    const int lo = std::min(static_cast<int>(pos), n - 1);
    const double frac = pos - lo;
    const auto& a = slices_[lo].values;
    const auto& b = slices_[lo + 1].values;
    std::vector<double> out(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) out[i] = (1.0 - frac) * a[i] + frac * b[i];
    return {std::move(out)};
}

ConditionalDensityFamily make_family(const FamilySpec& spec, int grid_n) {
    if (grid_n < 2) throw ScenarioError("grid_n must be at least 2");
    std::vector<GridDensity> slices;
    slices.reserve(grid_n + 1);
    switch (spec.kind) {
        case FamilySpec::Kind::uniform:
            for (int i = 0; i <= grid_n; ++i) slices.push_back(uniform_density(grid_n));
            break;
        case FamilySpec::Kind::triangular:
            for (int i = 0; i <= grid_n; ++i) {
                const double t = static_cast<double>(i) / grid_n;
                slices.push_back(
                    triangular_density(spec.center0 + spec.center1 * t, spec.width, grid_n));
            }
            break;
        case FamilySpec::Kind::beta:
            for (int i = 0; i <= grid_n; ++i) {
                const double t = static_cast<double>(i) / grid_n;
                slices.push_back(beta_density(std::max(0.0, spec.a0 + spec.a1 * t),
                                              std::max(0.0, spec.b0 + spec.b1 * t), grid_n));
            }
            break;
        case FamilySpec::Kind::grid: {
            if (spec.grid_values.size() != static_cast<std::size_t>(grid_n) + 1)
                throw ScenarioError("raw grid family needs one slice per condition sample (" +
                                    std::to_string(grid_n + 1) + ")");
            for (const auto& row : spec.grid_values) {
                if (row.size() != static_cast<std::size_t>(grid_n) + 1)
                    throw ScenarioError("raw grid slice has wrong sample count");
                GridDensity d{row};
                if (!is_valid_density(d))
                    throw ScenarioError("raw grid slice is not a normalized density");
                slices.push_back(std::move(d));
            }
            break;
        }
    }
    return ConditionalDensityFamily(std::move(slices));
}

RiskDensityResult risk_density(const ConditionalDensityFamily& impact,
                               const ConditionalDensityFamily& inference, double x) {
    const int n = impact.intervals();
    if (inference.intervals() != n || impact.slice(0).intervals() != n ||
        inference.slice(0).intervals() != n)
        throw ScenarioError("impact and inference families must share one grid");

    const GridDensity fi = inference.at(x);

    // f_R(z_k) = sum_j w_j f_Z(z_k; y_j) f_I(y_j; x), trapezoidal weights w_j.
    std::vector<double> out(n + 1, 0.0);
    for (int j = 0; j <= n; ++j) {
        const double wj = (j == 0 || j == n) ? 0.5 / n : 1.0 / n;
        const double scale = wj * fi.values[j];
        if (scale == 0.0) continue;
        const auto& fz = impact.slice(j).values;
        for (int k = 0; k <= n; ++k) out[k] += scale * fz[k];
    }

    RiskDensityResult result;
    result.density = GridDensity{std::move(out)};
    result.integral_drift = std::abs(result.density.integral() - 1.0);
    if (result.integral_drift > kDensityTol) {
        const double total = result.density.integral();
        if (!(total > 0.0)) throw ScenarioError("risk density lost all mass");
        for (double& v : result.density.values) v /= total;
        result.renormalized = true;
    }
    return result;
}

namespace {

double mean_impact(const ConditionalDensityFamily& impact,
                   const ConditionalDensityFamily& inference, double x) {
    return descriptor([](double w) { return w; },
                      risk_density(impact, inference, x).density);
}

}  // namespace

double equal_impact_residual(const ConditionalDensityFamily& impact1,
                             const ConditionalDensityFamily& inference1, double x1,
                             const ConditionalDensityFamily& impact2,
                             const ConditionalDensityFamily& inference2, double x2) {
    return mean_impact(impact1, inference1, x1) - mean_impact(impact2, inference2, x2);
}

std::optional<double> solve_matching_disclosure(const ConditionalDensityFamily& impact1,
                                                const ConditionalDensityFamily& inference1,
                                                double x1,
                                                const ConditionalDensityFamily& impact2,
                                                const ConditionalDensityFamily& inference2) {
    const auto residual = [&](double x2) {
        return equal_impact_residual(impact1, inference1, x1, impact2, inference2, x2);
    };
    double lo = 0.0;
    double hi = 1.0;
    double r_lo = residual(lo);
    const double r_hi = residual(hi);
    if (r_lo == 0.0) return lo;
    if (r_hi == 0.0) return hi;
    if ((r_lo < 0.0) == (r_hi < 0.0)) {
        // No bracketing root; an endpoint already inside tolerance counts.
        if (std::abs(r_lo) <= kMatchTol) return lo;
        if (std::abs(r_hi) <= kMatchTol) return hi;
        return std::nullopt;
    }

    // Shrink well past the residual tolerance so the returned x2 itself is
    // accurate, not just its residual. The residual is continuous (piecewise
    // linear in x via grid interpolation), so the midpoint converges.
    for (int i = 0; i < kMatchMaxIterations && (hi - lo) > 1e-12; ++i) {
        const double mid = 0.5 * (lo + hi);
        const double r_mid = residual(mid);
        if (r_mid == 0.0) return mid;
        if ((r_mid < 0.0) == (r_lo < 0.0)) {
            lo = mid;
            r_lo = r_mid;
        } else {
            hi = mid;
        }
    }
    return 0.5 * (lo + hi);
}

double distribution_distance(const ConditionalDensityFamily& impact1,
                             const ConditionalDensityFamily& inference1, double x1,
                             const ConditionalDensityFamily& impact2,
                             const ConditionalDensityFamily& inference2, double x2) {
    const GridDensity a = risk_density(impact1, inference1, x1).density;
    const GridDensity b = risk_density(impact2, inference2, x2).density;
    double worst = 0.0;
    for (std::size_t i = 0; i < a.values.size(); ++i)
        worst = std::max(worst, std::abs(a.values[i] - b.values[i]));
    return worst;
}

}  // namespace disclose
