#pragma once

#include <functional>
#include <string>
#include <vector>

namespace bec2
{

struct CheckResult
{
    std::string id;
    std::string name;
    bool passed = false;
    double measured = 0.0;   ///< worst observed value of the check's figure of merit
    double threshold = 0.0;  ///< the bound it is compared with
    std::string detail;
    double seconds = 0.0;
};

struct VerifyOptions
{
    /// Added to the one-particle exchange coefficient in the conjugation check;
    /// a nonzero value is a negative control and must make that check fail.
    double mu_perturbation = 0.0;
};

/// Which cross-collision normalization satisfies the conjugation identity.
struct ConventionReport
{
    double cross_defect = 0.0;  ///< relative defect with u_cross as emitted
    double quarter_defect = 0.0;  ///< relative defect with u_cross / 2 (quarter normalization)
    bool cross_holds = false;
    bool quarter_holds = false;
    std::string adopted;          ///< "cross", "quarter", "both" or "neither"
    std::string dictionary;
};

ConventionReport measure_u_convention();

struct AcceptanceCheck
{
    std::string id;
    std::string name;
    std::function<CheckResult(const VerifyOptions&)> run;
};

/// AC-1 .. AC-13 in order.
const std::vector<AcceptanceCheck>& acceptance_checks();

/// Runs every check, timing each one.
std::vector<CheckResult> run_acceptance(const VerifyOptions& opts = {},
                                        const std::function<void(const CheckResult&)>& on_result = {});

} // namespace bec2
