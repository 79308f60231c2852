#pragma once

#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace disclose {

inline constexpr int kDefaultGridN = 256;

/// Tabulated densities must integrate to 1 within this (trapezoidal rule).
inline constexpr double kDensityTol = 1e-6;

/// Composite trapezoidal integral over [0,1] of values tabulated at
/// uniformly spaced sample points (values.size() - 1 intervals).
double trapezoid(std::span<const double> values);

/// Probability density on [0,1], tabulated at n+1 uniform sample points.
struct GridDensity {
    std::vector<double> values;

    int intervals() const { return static_cast<int>(values.size()) - 1; }
    double integral() const { return trapezoid(values); }

    friend bool operator==(const GridDensity&, const GridDensity&) = default;
};

/// True iff all values are >= 0 and the trapezoidal integral is 1 within tol.
bool is_valid_density(const GridDensity& f, double tol = kDensityTol);

/// Scales nonnegative tabulated values so the trapezoidal integral is 1.
/// Throws ScenarioError on negative values or zero total mass.
GridDensity normalized_density(std::vector<double> values);

GridDensity uniform_density(int grid_n = kDefaultGridN);
/// Triangle with apex at center and the given full base width, clipped to
/// [0,1] and renormalized on the grid.
GridDensity triangular_density(double center, double width, int grid_n = kDefaultGridN);
/// Normalized tabulation of w^a (1-w)^b, a, b >= 0.
GridDensity beta_density(double a, double b, int grid_n = kDefaultGridN);

/// t_h = integral of h(w) f(w) dw over [0,1], trapezoidal rule.
double descriptor(const std::function<double(double)>& h, const GridDensity& f);

/// Family of conditional densities f(.;t): one slice per grid point of the
/// condition t in [0,1], with linear interpolation between slices.
class ConditionalDensityFamily {
public:
    explicit ConditionalDensityFamily(std::vector<GridDensity> slices);

    int intervals() const { return static_cast<int>(slices_.size()) - 1; }
    const GridDensity& slice(std::size_t i) const { return slices_[i]; }

    /// Density at condition t; linear interpolation preserves
    /// nonnegativity and normalization of the endpoint slices.
    GridDensity at(double t) const;

    friend bool operator==(const ConditionalDensityFamily&,
                           const ConditionalDensityFamily&) = default;

private:
    std::vector<GridDensity> slices_;
};

/// Parametric description of a conditional density family, as given in a
/// scenario file or on the command line. Parameters depend linearly on
/// the condition t: e.g. the triangular center is center0 + center1 * t.
struct FamilySpec {
    enum class Kind { uniform, triangular, beta, grid };

    Kind kind = Kind::uniform;
    double center0 = 0.5;
    double center1 = 0.0;
    double width = 1.0;
    double a0 = 0.0;
    double a1 = 0.0;
    double b0 = 0.0;
    double b1 = 0.0;
    // Raw tabulation: one row per condition slice, each row n+1 samples.
    std::vector<std::vector<double>> grid_values;

    friend bool operator==(const FamilySpec&, const FamilySpec&) = default;
};

ConditionalDensityFamily make_family(const FamilySpec& spec, int grid_n = kDefaultGridN);

struct RiskDensityResult {
    GridDensity density;
    /// |integral - 1| of the raw convolution output, before renormalization.
    double integral_drift = 0.0;
    bool renormalized = false;
};

/// f_R(z; x) = integral over y of f_Z(z; y) f_I(y; x) dy, trapezoidal in y.
/// The output is renormalized only when its integral drifts from 1 by
/// more than kDensityTol; the drift is always reported.
RiskDensityResult risk_density(const ConditionalDensityFamily& impact,
                               const ConditionalDensityFamily& inference,
                               double x);

/// Mean-impact difference between two consumers at disclosure x1 and x2.
double equal_impact_residual(const ConditionalDensityFamily& impact1,
                             const ConditionalDensityFamily& inference1, double x1,
                             const ConditionalDensityFamily& impact2,
                             const ConditionalDensityFamily& inference2, double x2);

inline constexpr double kMatchTol = 1e-6;
inline constexpr int kMatchMaxIterations = 100;

/// Bisection on x2 in [0,1] for equal mean impact with consumer 1 held at
/// x1. Returns nullopt when the residual has the same sign at both ends.
std::optional<double> solve_matching_disclosure(const ConditionalDensityFamily& impact1,
                                                const ConditionalDensityFamily& inference1,
                                                double x1,
                                                const ConditionalDensityFamily& impact2,
                                                const ConditionalDensityFamily& inference2);

/// Diagnostic only: sup-norm distance between the two risk densities.
/// Matching full distributions is deliberately not solved for.
double distribution_distance(const ConditionalDensityFamily& impact1,
                             const ConditionalDensityFamily& inference1, double x1,
                             const ConditionalDensityFamily& impact2,
                             const ConditionalDensityFamily& inference2, double x2);

}  // namespace disclose
