#pragma once

#include "bec2/cli/config.hpp"
#include "bec2/model.hpp"

#include <iosfwd>
#include <optional>

namespace bec2::cli
{

enum ExitCode : int
{
    kOk = 0,
    kVerifyFailed = 1,
    kInvalidConfig = 2,
    kOffManifold = 3,
    kNumericalFailure = 4,
    kAperiodic = 5,
};

enum class Route
{
    Exact,
    Numeric,
};

/// Parameters after routing: the canonical coefficients always, the manifold
/// coordinates whenever the point lies on the solvable manifold.
struct Resolved
{
    Route route = Route::Exact;
    CanonicalParams canonical;
    std::optional<ExactParams> exact;
    std::optional<AngleSource> angle_source;
    double residual = 0.0;
    double scale = 0.0;
};

/// Auto mode routes to the closed form when the manifold residual is within
/// kRouteTolerance * scale. Throws NotSolvable for mode exact off the manifold.
inline constexpr double kRouteTolerance = 1e-9;
Resolved resolve(const RunConfig& cfg, int two_j);

/// Runs one configured command, writing into cfg.out.
int run_config(const RunConfig& cfg, std::ostream& out, std::ostream& err);

/// Full command line entry point; returns the process exit code.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);
int run(int argc, const char* const* argv);

} // namespace bec2::cli
