#pragma once

#include "bec2/exact.hpp"

#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace bec2::cli
{

/// Bad flags, bad JSON, conflicting parameters. Maps to exit code 2.
class ConfigError : public std::runtime_error
{
public:
    using std::runtime_error::runtime_error;
};

enum class Command
{
    Ground,
    Dynamics,
    Entanglement,
    Verify,
};

enum class Mode
{
    Auto,
    Exact,
    Numeric,
};

enum class Units
{
    Physical, ///< a'a - b'b
    Paper,    ///< Jz, half the physical value
};

enum class UConvention
{
    Cross,   ///< --u is the coefficient of a'b'ab
    Quarter, ///< --u multiplies A2 (1 - 3 cos^2 theta) / 4
};

struct InitialState
{
    enum class Kind
    {
        Default,
        Dicke,
        Rotated,
        File,
    };
    enum class Basis
    {
        Unset,
        Eigen,
        Fock,
    };
    Kind kind = Kind::Default;
    int two_k = 0;
    double theta0 = 0.0;
    std::string path;
    Basis basis = Basis::Unset;
};

struct RunConfig
{
    Command command = Command::Ground;
    Mode mode = Mode::Auto;

    std::optional<int> two_j;
    std::optional<int> two_k0;

    // manifold coordinates
    std::optional<double> a1, a2, theta;
    std::optional<Rational> a1_exact, a2_exact;  ///< set when the text was an exact rational

    // canonical coefficients
    std::optional<double> a0, delta_omega, lam, u, mu, lambda2;
    UConvention u_convention = UConvention::Cross;

    double phi = 0.0;

    double t_max = 10.0;
    int steps = 1000;
    bool request_period = false;
    InitialState init;

    std::vector<double> thetas;
    std::vector<int> two_k0s;
    bool all_k0 = false;
    std::vector<int> two_js;

    std::string out = ".";
    bool svg = false;
    Units units = Units::Physical;

    double mu_perturbation = 0.0;
    std::vector<std::string> checks;

    bool has_exact() const { return a1 || a2 || theta; }
    bool has_canonical() const { return a0 || delta_omega || lam || u || mu || lambda2; }
};

/// Key -> text, the common form of command-line flags and JSON config entries.
/// Keys are the long flag names with '-' replaced by '_'.
using RawConfig = std::map<std::string, std::string>;

/// Every accepted key.
const std::vector<std::string>& config_keys();

/// Reals: decimals, "a/b", and multiples of pi such as "pi/2", "-3pi/4", "0.5*pi".
double parse_number(std::string_view text);
/// Exact value of a decimal or "a/b" string; empty for pi expressions or overflow.
std::optional<Rational> parse_rational(std::string_view text);
/// Twice a spin or projection: "3" -> 6, "2.5" -> 5, "5/2" -> 5.
int parse_twice(std::string_view text);
/// "a:b:n" (n points including both ends) or a comma list.
std::vector<double> parse_grid(std::string_view text);

Command parse_command(std::string_view name);
std::string to_string(Command c);
std::string to_string(Mode m);

/// Flattens a JSON object into RawConfig. Unknown keys and nested objects throw.
RawConfig raw_from_json_text(const std::string& text);
RawConfig raw_from_json_file(const std::string& path);

/// Validates raw text and builds the typed configuration.
RunConfig build_config(Command command, const RawConfig& raw);

} // namespace bec2::cli
