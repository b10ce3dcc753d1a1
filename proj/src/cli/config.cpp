#include "bec2/cli/config.hpp"

#include <json.hpp>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <numbers>
#include <numeric>
#include <sstream>

namespace bec2::cli
{

namespace
{

std::string_view trim(std::string_view s)
{
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front())))
        s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back())))
        s.remove_suffix(1);
    return s;
}

std::vector<std::string_view> split(std::string_view s, char sep)
{
    std::vector<std::string_view> parts;
    std::size_t start = 0;
    while (true)
    {
        const std::size_t pos = s.find(sep, start);
        parts.push_back(trim(s.substr(start, pos - start)));
        if (pos == std::string_view::npos)
            return parts;
        start = pos + 1;
    }
}

[[noreturn]] void bad(std::string_view what, std::string_view text)
{
    throw ConfigError(std::string(what) + ": '" + std::string(text) + "'");
}

double parse_decimal(std::string_view s)
{
    s = trim(s);
    std::string_view body = s;
    if (!body.empty() && body.front() == '+')
        body.remove_prefix(1);
    double v = 0.0;
    const auto [end, ec] = std::from_chars(body.data(), body.data() + body.size(), v);
    if (body.empty() || ec != std::errc() || end != body.data() + body.size() || !std::isfinite(v))
        bad("not a number", s);
    return v;
}

std::optional<Rational> exact_decimal(std::string_view s)
{
    s = trim(s);
    bool negative = false;
    if (!s.empty() && (s.front() == '+' || s.front() == '-'))
    {
        negative = s.front() == '-';
        s.remove_prefix(1);
    }
    using Wide = __int128;
    constexpr Wide kLimit = Wide(std::numeric_limits<std::int64_t>::max());
    Wide num = 0;
    int scale = 0;
    bool digits = false;
    bool dot = false;
    std::size_t i = 0;
    for (; i < s.size(); ++i)
    {
        const char ch = s[i];
        if (ch == '.' && !dot)
        {
            dot = true;
            continue;
        }
        if (ch < '0' || ch > '9')
            break;
        digits = true;
        num = num * 10 + (ch - '0');
        if (num > kLimit)
            return std::nullopt;
        if (dot)
            --scale;
    }
    if (!digits)
        return std::nullopt;
    if (i < s.size())
    {
        if (s[i] != 'e' && s[i] != 'E')
            return std::nullopt;
        int e = 0;
        std::string_view rest = s.substr(i + 1);
        if (!rest.empty() && rest.front() == '+')
            rest.remove_prefix(1);
        const auto [end, ec] = std::from_chars(rest.data(), rest.data() + rest.size(), e);
        if (rest.empty() || ec != std::errc() || end != rest.data() + rest.size())
            return std::nullopt;
        scale += e;
    }
    if (std::abs(scale) > 18)
        return std::nullopt;
    Wide den = 1;
    for (; scale > 0; --scale)
        num *= 10;
    for (; scale < 0; ++scale)
        den *= 10;
    if (num > kLimit)
        return std::nullopt;
    const auto g = std::gcd(static_cast<std::int64_t>(num), static_cast<std::int64_t>(den));
    Rational r{static_cast<std::int64_t>(num) / g, static_cast<std::int64_t>(den) / g};
    if (negative)
        r.num = -r.num;
    return r;
}

bool parse_bool(std::string_view key, std::string_view s)
{
    if (s == "true" || s == "1" || s == "yes" || s == "on")
        return true;
    if (s == "false" || s == "0" || s == "no" || s == "off")
        return false;
    bad("--" + std::string(key) + " expects a boolean", s);
}

int parse_int(std::string_view key, std::string_view s)
{
    s = trim(s);
    int v = 0;
    const auto [end, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (s.empty() || ec != std::errc() || end != s.data() + s.size())
        bad("--" + std::string(key) + " expects an integer", s);
    return v;
}

std::string shortest(double v)
{
    char buf[64];
    const auto r = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, r.ptr);
}

InitialState parse_init(std::string_view s)
{
    InitialState init;
    const auto parts = split(s, ':');
    if (parts[0] == "default" && parts.size() == 1)
        return init;
    if (parts[0] == "dicke" && parts.size() == 2)
    {
        init.kind = InitialState::Kind::Dicke;
        init.two_k = parse_twice(parts[1]);
        return init;
    }
    if (parts[0] == "rotated" && parts.size() == 3)
    {
        init.kind = InitialState::Kind::Rotated;
        init.theta0 = parse_number(parts[1]);
        init.two_k = parse_twice(parts[2]);
        return init;
    }
    if (parts[0] == "file" && parts.size() >= 2)
    {
        init.kind = InitialState::Kind::File;
        init.path = std::string(s.substr(5));
        return init;
    }
    bad("--init expects default, dicke:K, rotated:THETA0:K or file:PATH", s);
}

} // namespace

const std::vector<std::string>& config_keys()
{
    static const std::vector<std::string> keys = {
        "command", "mode",   "exact",  "numeric", "j",       "theta",  "k0",
        "a1",      "a2",     "phi",    "delta_omega", "lambda", "u",   "mu",
        "Lambda",  "a0",     "u_convention", "t_max", "steps", "period", "init",
        "init_basis", "thetas", "k0s", "js",     "out",     "svg",    "units",
        "inject_mu_perturbation", "checks"};
    return keys;
}

double parse_number(std::string_view text)
{
    const std::string_view s = trim(text);
    const std::size_t pi = s.find("pi");
    if (pi != std::string_view::npos)
    {
        std::string_view left = trim(s.substr(0, pi));
        if (!left.empty() && left.back() == '*')
            left = trim(left.substr(0, left.size() - 1));
        double coeff = 1.0;
        if (left == "-")
            coeff = -1.0;
        else if (!left.empty() && left != "+")
            coeff = parse_decimal(left);
        std::string_view right = trim(s.substr(pi + 2));
        double den = 1.0;
        if (!right.empty())
        {
            if (right.front() != '/')
                bad("not a number", s);
            den = parse_decimal(right.substr(1));
        }
        if (den == 0.0)
            bad("division by zero", s);
        return coeff * std::numbers::pi / den;
    }
    const std::size_t slash = s.find('/');
    if (slash != std::string_view::npos)
    {
        const double den = parse_decimal(s.substr(slash + 1));
        if (den == 0.0)
            bad("division by zero", s);
        return parse_decimal(s.substr(0, slash)) / den;
    }
    return parse_decimal(s);
}

std::optional<Rational> parse_rational(std::string_view text)
{
    const std::string_view s = trim(text);
    if (s.find("pi") != std::string_view::npos)
        return std::nullopt;
    const std::size_t slash = s.find('/');
    if (slash == std::string_view::npos)
        return exact_decimal(s);
    const auto num = exact_decimal(s.substr(0, slash));
    const auto den = exact_decimal(s.substr(slash + 1));
    if (!num || !den || den->num == 0)
        return std::nullopt;
    const __int128 n = __int128(num->num) * den->den;
    __int128 d = __int128(num->den) * den->num;
    __int128 nn = d < 0 ? -n : n;
    d = d < 0 ? -d : d;
    constexpr __int128 kLimit = std::numeric_limits<std::int64_t>::max();
    // reduce before narrowing
    __int128 a = nn < 0 ? -nn : nn, b = d;
    while (b != 0)
    {
        const __int128 t = a % b;
        a = b;
        b = t;
    }
    if (a > 1)
    {
        nn /= a;
        d /= a;
    }
    if (nn > kLimit || -nn > kLimit || d > kLimit)
        return std::nullopt;
    return Rational{static_cast<std::int64_t>(nn), static_cast<std::int64_t>(d)};
}

int parse_twice(std::string_view text)
{
    const auto r = parse_rational(text);
    if (!r || (2 * r->num) % r->den != 0)
        bad("expected an integer or half-integer", text);
    const std::int64_t twice = 2 * r->num / r->den;
    if (std::abs(twice) > 2'000'000)
        bad("value out of range", text);
    return static_cast<int>(twice);
}

std::vector<double> parse_grid(std::string_view text)
{
    std::vector<double> out;
    if (text.find(':') != std::string_view::npos)
    {
        const auto parts = split(text, ':');
        if (parts.size() != 3)
            bad("grid expects start:stop:count", text);
        const double a = parse_number(parts[0]);
        const double b = parse_number(parts[1]);
        const int n = parse_int("thetas", parts[2]);
        if (n < 1)
            bad("grid needs at least one point", text);
        for (int i = 0; i < n; ++i)
            out.push_back(n == 1 ? a : (i == n - 1 ? b : a + (b - a) * i / (n - 1)));
        return out;
    }
    for (auto part : split(text, ','))
        out.push_back(parse_number(part));
    return out;
}

Command parse_command(std::string_view name)
{
    if (name == "ground")
        return Command::Ground;
    if (name == "dynamics")
        return Command::Dynamics;
    if (name == "entanglement")
        return Command::Entanglement;
    if (name == "verify")
        return Command::Verify;
    bad("unknown command", name);
}

std::string to_string(Command c)
{
    switch (c)
    {
    case Command::Ground: return "ground";
    case Command::Dynamics: return "dynamics";
    case Command::Entanglement: return "entanglement";
    case Command::Verify: return "verify";
    }
    return "?";
}

std::string to_string(Mode m)
{
    switch (m)
    {
    case Mode::Auto: return "auto";
    case Mode::Exact: return "exact";
    case Mode::Numeric: return "numeric";
    }
    return "?";
}

RawConfig raw_from_json_text(const std::string& text)
{
    nlohmann::json doc;
    try
    {
        doc = nlohmann::json::parse(text);
    }
    catch (const nlohmann::json::parse_error& e)
    {
        throw ConfigError(std::string("config is not valid JSON: ") + e.what());
    }
    if (!doc.is_object())
        throw ConfigError("config must be a JSON object");

    const auto& keys = config_keys();
    auto scalar = [](const std::string& key, const nlohmann::json& v) -> std::string {
        if (v.is_string())
            return v.get<std::string>();
        if (v.is_boolean())
            return v.get<bool>() ? "true" : "false";
        if (v.is_number_integer())
            return v.dump();
        if (v.is_number_float())
            return shortest(v.get<double>());
        throw ConfigError("config key '" + key + "' has an unsupported value " + v.dump());
    };

    RawConfig raw;
    for (const auto& [key, value] : doc.items())
    {
        if (std::find(keys.begin(), keys.end(), key) == keys.end())
            throw ConfigError("unknown config key '" + key + "'");
        if (value.is_array())
        {
            std::string joined;
            for (const auto& item : value)
                joined += (joined.empty() ? "" : ",") + scalar(key, item);
            if (joined.empty())
                throw ConfigError("config key '" + key + "' is an empty list");
            raw[key] = joined;
        }
        else
        {
            raw[key] = scalar(key, value);
        }
    }
    return raw;
}

RawConfig raw_from_json_file(const std::string& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw ConfigError("cannot read config file '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return raw_from_json_text(ss.str());
}

RunConfig build_config(Command command, const RawConfig& raw)
{
    RunConfig cfg;
    cfg.command = command;
    auto get = [&](const std::string& key) -> std::optional<std::string> {
        const auto it = raw.find(key);
        if (it == raw.end())
            return std::nullopt;
        return it->second;
    };
    auto number = [&](const std::string& key) -> std::optional<double> {
        if (auto v = get(key))
            return parse_number(*v);
        return std::nullopt;
    };
    auto flag = [&](const std::string& key) {
        const auto v = get(key);
        return v && parse_bool(key, *v);
    };

    if (auto v = get("command"); v && parse_command(*v) != command)
        throw ConfigError("config is for '" + *v + "' but the command is '" + to_string(command) + "'");

    if (auto v = get("mode"))
    {
        if (*v == "auto")
            cfg.mode = Mode::Auto;
        else if (*v == "exact")
            cfg.mode = Mode::Exact;
        else if (*v == "numeric")
            cfg.mode = Mode::Numeric;
        else
            bad("--mode expects auto, exact or numeric", *v);
    }
    const bool want_exact = flag("exact");
    const bool want_numeric = flag("numeric");
    if (want_exact && want_numeric)
        throw ConfigError("--exact and --numeric are mutually exclusive");
    if (want_exact || want_numeric)
    {
        const Mode m = want_exact ? Mode::Exact : Mode::Numeric;
        if (get("mode") && cfg.mode != m)
            throw ConfigError("--mode contradicts --exact/--numeric");
        cfg.mode = m;
    }

    if (auto v = get("j"))
    {
        cfg.two_j = parse_twice(*v);
        if (*cfg.two_j < 0)
            bad("--j must be nonnegative", *v);
    }
    if (auto v = get("k0"))
        cfg.two_k0 = parse_twice(*v);

    cfg.a1 = number("a1");
    cfg.a2 = number("a2");
    cfg.theta = number("theta");
    if (auto v = get("a1"))
        cfg.a1_exact = parse_rational(*v);
    if (auto v = get("a2"))
        cfg.a2_exact = parse_rational(*v);

    cfg.a0 = number("a0");
    cfg.delta_omega = number("delta_omega");
    cfg.lam = number("lambda");
    cfg.u = number("u");
    cfg.mu = number("mu");
    cfg.lambda2 = number("Lambda");
    if (cfg.has_exact() && cfg.has_canonical())
        throw ConfigError("manifold coordinates (--a1/--a2/--theta) and canonical coefficients "
                          "(--delta-omega/--lambda/--u/--mu/--Lambda/--a0) cannot be mixed");

    if (auto v = get("u_convention"))
    {
        if (*v == "cross")
            cfg.u_convention = UConvention::Cross;
        else if (*v == "quarter")
            cfg.u_convention = UConvention::Quarter;
        else
            bad("--u-convention expects cross or quarter", *v);
    }
    if (auto v = number("phi"))
        cfg.phi = *v;

    if (auto v = number("t_max"))
    {
        if (!(*v > 0.0))
            throw ConfigError("--t-max must be positive");
        cfg.t_max = *v;
    }
    if (auto v = get("steps"))
    {
        cfg.steps = parse_int("steps", *v);
        if (cfg.steps < 1)
            throw ConfigError("--steps must be at least 1");
    }
    cfg.request_period = flag("period");
    if (auto v = get("init"))
        cfg.init = parse_init(*v);
    if (auto v = get("init_basis"))
    {
        if (*v == "eigen")
            cfg.init.basis = InitialState::Basis::Eigen;
        else if (*v == "fock")
            cfg.init.basis = InitialState::Basis::Fock;
        else
            bad("--init-basis expects eigen or fock", *v);
    }

    if (auto v = get("thetas"))
        cfg.thetas = parse_grid(*v);
    if (auto v = get("k0s"))
    {
        if (trim(*v) == "all")
            cfg.all_k0 = true;
        else
            for (auto part : split(*v, ','))
                cfg.two_k0s.push_back(parse_twice(part));
    }
    if (auto v = get("js"))
        for (auto part : split(*v, ','))
        {
            cfg.two_js.push_back(parse_twice(part));
            if (cfg.two_js.back() < 0)
                bad("--js entries must be nonnegative", part);
        }

    if (auto v = get("out"))
    {
        if (v->empty())
            throw ConfigError("--out must not be empty");
        cfg.out = *v;
    }
    cfg.svg = flag("svg");
    if (auto v = get("units"))
    {
        if (*v == "physical")
            cfg.units = Units::Physical;
        else if (*v == "paper")
            cfg.units = Units::Paper;
        else
            bad("--units expects physical or paper", *v);
    }
    if (auto v = number("inject_mu_perturbation"))
        cfg.mu_perturbation = *v;
    if (auto v = get("checks"))
        for (auto part : split(*v, ','))
            cfg.checks.emplace_back(part);

    switch (command)
    {
    case Command::Ground:
    case Command::Dynamics:
        if (!cfg.two_j)
            throw ConfigError("--j is required");
        break;
    case Command::Entanglement:
        if (cfg.two_js.empty())
        {
            if (!cfg.two_j)
                throw ConfigError("--j or --js is required");
            cfg.two_js.push_back(*cfg.two_j);
        }
        break;
    case Command::Verify:
        break;
    }
    return cfg;
}

} // namespace bec2::cli
