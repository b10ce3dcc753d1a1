#include "bec2/cli/commands.hpp"

#include "bec2/cli/output.hpp"
#include "bec2/errors.hpp"
#include "bec2/exact.hpp"
#include "bec2/fock.hpp"
#include "bec2/observables.hpp"
#include "bec2/spectral.hpp"
#include "bec2/verify.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <numbers>
#include <sstream>
#include <thread>

namespace bec2::cli
{

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;

namespace
{

constexpr double kPi = std::numbers::pi;

const char* kUDictionary =
    "u_cross multiplies a'b'ab; the quarter-normalized constant u_quarter = u_cross / 2 "
    "multiplies A2 (1 - 3 cos^2 theta) / 4 and is what --u-convention quarter reads";

/// Emitted when a period was requested and none exists.
struct Aperiodic
{
};

double half(int twice) { return 0.5 * twice; }

json exact_json(const ExactParams& x)
{
    return {{"a1", x.a1}, {"a2", x.a2}, {"theta", x.theta}, {"phi", x.phi}, {"j", half(x.two_j)}};
}

json canonical_json(const CanonicalParams& c)
{
    return {{"a0", c.a0},
            {"delta_omega", c.delta_omega},
            {"lambda", c.lam},
            {"phi", c.phi},
            {"u_cross", c.u_cross},
            {"u_quarter", quarter_u_from_cross(c.u_cross)},
            {"mu", c.mu},
            {"Lambda", c.lambda2},
            {"j", half(c.two_j)}};
}

std::string angle_source_name(AngleSource s)
{
    switch (s)
    {
    case AngleSource::Linear: return "linear";
    case AngleSource::Collision: return "collision";
    case AngleSource::Arbitrary: return "arbitrary";
    }
    return "?";
}

/// Output directory plus the manifest accumulated while a command runs.
class Run
{
public:
    Run(const RunConfig& cfg, std::ostream& out)
        : cfg_(cfg), out_(out), dir_(cfg.out), start_(std::chrono::steady_clock::now())
    {
        std::error_code ec;
        fs::create_directories(dir_, ec);
        if (ec || !fs::is_directory(dir_))
            throw ConfigError("cannot create output directory '" + cfg.out + "'");
        manifest_["tool"] = "bec2";
        manifest_["version"] = BEC2_VERSION;
        manifest_["command"] = to_string(cfg.command);
        manifest_["mode_requested"] = to_string(cfg.mode);
        manifest_["units"] = cfg.units == Units::Physical ? "physical" : "paper";
    }

    json& manifest() { return manifest_; }

    void write(const std::string& name, std::string_view bytes)
    {
        files_.push_back(write_file(dir_, name, bytes));
        out_ << "wrote " << (dir_ / name).string() << "\n";
    }

    void finish()
    {
        json files = json::array();
        for (const auto& f : files_)
            files.push_back({{"name", f.name}, {"sha256", f.sha256}, {"bytes", f.bytes}});
        manifest_["files"] = files;
        manifest_["wall_clock_seconds"] =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
        const std::string text = manifest_.dump(2) + "\n";
        write_file(dir_, "manifest.json", text);
        out_ << "wrote " << (dir_ / "manifest.json").string() << "\n";
    }

    void record_parameters(const Resolved& r)
    {
        manifest_["route"] = r.route == Route::Exact ? "exact" : "numeric";
        manifest_["manifold_residual"] = r.residual;
        manifest_["residual_scale"] = r.scale;
        manifest_["route_threshold"] = kRouteTolerance * r.scale;
        json params;
        params["canonical"] = canonical_json(r.canonical);
        if (r.exact)
            params["exact"] = exact_json(*r.exact);
        if (r.angle_source)
            params["angle_source"] = angle_source_name(*r.angle_source);
        manifest_["parameters"] = params;
        manifest_["u_dictionary"] = {
            {"input_convention", cfg_.u_convention == UConvention::Cross ? "cross" : "quarter"},
            {"note", kUDictionary}};
    }

private:
    const RunConfig& cfg_;
    std::ostream& out_;
    fs::path dir_;
    std::chrono::steady_clock::time_point start_;
    json manifest_;
    std::vector<FileRecord> files_;
};

double unit_scale(const RunConfig& cfg) { return cfg.units == Units::Physical ? 1.0 : 0.5; }

// ---------------------------------------------------------------- ground

int cmd_ground(const RunConfig& cfg, std::ostream& out)
{
    const int two_j = *cfg.two_j;
    const Resolved r = resolve(cfg, two_j);
    const FockBasis basis(two_j);

    struct Branch
    {
        Eigen::VectorXd probs;
        json info;
    };
    std::vector<Branch> branches;

    if (r.route == Route::Exact)
    {
        const ExactParams& x = *r.exact;
        std::vector<int> k0s;
        if (cfg.two_k0)
        {
            basis.index_of(*cfg.two_k0);
            k0s.push_back(*cfg.two_k0);
        }
        else if (ground_index(x.a1, x.a2, two_j).degenerate)
            k0s = ground_minimizers(x.a1, x.a2, two_j);
        else
            k0s.push_back(ground_index(x.a1, x.a2, two_j).two_k0);
        const EnergyLadder ladder{x.a1, x.a2, two_j};
        for (int tk : k0s)
            branches.push_back({ground_distribution(x, tk),
                                {{"k0", half(tk)}, {"energy", ladder.energy(tk)}}});
    }
    else
    {
        if (cfg.two_k0)
            throw ConfigError("--k0 labels a manifold eigenstate; it needs the exact route");
        const HermitianOperator h = build_hamiltonian(r.canonical);
        const SpectralDecomposition d = eigh(h);
        const double tol = 1e-10 * std::max(h.max_abs(), 1e-300);
        for (Eigen::Index i = 0; i < d.eigenvalues.size(); ++i)
        {
            if (d.eigenvalues(i) - d.eigenvalues(0) > tol)
                break;
            branches.push_back({d.eigenvectors.col(i).cwiseAbs2(),
                                {{"eigen_index", i}, {"energy", d.eigenvalues(i)}}});
        }
        if (!branches.empty())
            branches.front().info["eigen_residual"] = d.residual(h);
    }

    Run run(cfg, out);
    run.record_parameters(r);

    const bool multi = branches.size() > 1;
    std::vector<std::string> header = {"k", "m_physical", "probability"};
    if (multi)
        header.emplace_back("branch");
    CsvWriter csv(header);
    std::vector<Series> series;
    json branch_info = json::array();
    for (std::size_t b = 0; b < branches.size(); ++b)
    {
        Series s;
        s.label = multi ? "branch " + std::to_string(b) : "";
        for (Eigen::Index i = 0; i < basis.dim(); ++i)
        {
            csv.cell(basis.k(i)).cell(basis.two_k(i)).cell(branches[b].probs(i));
            if (multi)
                csv.cell(static_cast<int>(b));
            csv.end_row();
            s.x.push_back(cfg.units == Units::Physical ? basis.two_k(i) : basis.k(i));
            s.y.push_back(branches[b].probs(i));
        }
        series.push_back(std::move(s));
        json info = branches[b].info;
        info["branch"] = b;
        info["peak_count"] = count_peaks(branches[b].probs);
        branch_info.push_back(info);
    }
    run.write("ground.csv", csv.text());
    if (cfg.svg)
        run.write("ground.svg", svg_line_plot("ground-state number distribution",
                                              cfg.units == Units::Physical ? "m = n_a - n_b" : "k",
                                              "probability", series));

    auto& m = run.manifest();
    m["peak_count"] = branch_info.front()["peak_count"];
    m["degenerate"] = multi;
    m["branches"] = branch_info;
    run.finish();
    return kOk;
}

// ---------------------------------------------------------------- dynamics

Eigen::VectorXcd read_amplitudes(const std::string& path, Eigen::Index dim)
{
    std::ifstream in(path);
    if (!in)
        throw ConfigError("cannot read amplitude file '" + path + "'");
    std::vector<Complex> values;
    std::string line;
    while (std::getline(in, line))
    {
        if (const auto hash = line.find('#'); hash != std::string::npos)
            line.erase(hash);
        std::replace(line.begin(), line.end(), ',', ' ');
        std::istringstream ls(line);
        std::string re, im;
        if (!(ls >> re))
            continue;
        ls >> im;
        values.emplace_back(parse_number(re), im.empty() ? 0.0 : parse_number(im));
    }
    if (static_cast<Eigen::Index>(values.size()) != dim)
        throw ConfigError("amplitude file '" + path + "' has " + std::to_string(values.size()) +
                          " entries, expected " + std::to_string(dim));
    Eigen::VectorXcd v = Eigen::Map<Eigen::VectorXcd>(values.data(), dim);
    if (v.norm() == 0.0)
        throw ConfigError("amplitude file '" + path + "' holds the zero vector");
    return v / v.norm();
}

struct Initial
{
    Eigen::VectorXcd amps;
    bool eigen_basis = false;
    std::string description;
};

Initial initial_state(const RunConfig& cfg, const Resolved& r, int two_j)
{
    const FockBasis basis(two_j);
    InitialState spec = cfg.init;
    if (spec.kind == InitialState::Kind::Default)
    {
        if (r.exact)
        {
            spec.kind = InitialState::Kind::Rotated;
            spec.theta0 = kPi / 2;
            spec.two_k = two_j;
        }
        else
        {
            spec.kind = InitialState::Kind::Dicke;
            spec.two_k = two_j;
        }
    }
    if (spec.basis == InitialState::Basis::Unset)
        spec.basis = r.exact ? InitialState::Basis::Eigen : InitialState::Basis::Fock;
    if (spec.basis == InitialState::Basis::Eigen && !r.exact)
        throw ConfigError("eigen-basis initial states need parameters on the solvable manifold; "
                          "use --init-basis fock");

    Initial init;
    init.eigen_basis = spec.basis == InitialState::Basis::Eigen;
    const std::string where = init.eigen_basis ? " over eigenstates U^dag|j,k>" : " over Fock states";
    switch (spec.kind)
    {
    case InitialState::Kind::Dicke:
        init.amps = Eigen::VectorXcd::Zero(basis.dim());
        init.amps(basis.index_of(spec.two_k)) = 1.0;
        init.description = "dicke k = " + format_double(half(spec.two_k)) + where;
        break;
    case InitialState::Kind::Rotated:
        init.amps = wigner_row(two_j, spec.two_k, spec.theta0).amps.cast<Complex>();
        init.description = "rotated dicke theta0 = " + format_double(spec.theta0) +
                           ", k = " + format_double(half(spec.two_k)) + where;
        break;
    case InitialState::Kind::File:
        init.amps = read_amplitudes(spec.path, basis.dim());
        init.description = "amplitudes from " + spec.path + where;
        break;
    case InitialState::Kind::Default:
        break;
    }
    if (cfg.init.kind == InitialState::Kind::Default)
        init.description += " (default)";
    return init;
}

std::optional<RevivalPeriod> period_of(const RunConfig& cfg, const ExactParams& x)
{
    if (x.a2 == 0.0)
        return std::nullopt;
    // exact rationals typed on the command line give the period without reconstruction
    const std::optional<Rational> a2_text = cfg.a2 ? cfg.a2_exact : Rational{1, 1};
    if (cfg.a1_exact && a2_text && a2_text->num != 0)
    {
        const __int128 num = __int128(cfg.a1_exact->num) * a2_text->den;
        const __int128 den = __int128(cfg.a1_exact->den) * a2_text->num;
        constexpr __int128 lim = std::numeric_limits<std::int64_t>::max();
        if (num <= lim && -num <= lim && den <= lim && -den <= lim)
        {
            __int128 a = num < 0 ? -num : num, b = den < 0 ? -den : den;
            while (b != 0)
            {
                const __int128 t = a % b;
                a = b;
                b = t;
            }
            const __int128 g = a == 0 ? 1 : a;
            return revival_period(Rational{static_cast<std::int64_t>(num / g),
                                           static_cast<std::int64_t>(den / g)},
                                  x.a2);
        }
    }
    return revival_period(x.a1, x.a2);
}

int cmd_dynamics(const RunConfig& cfg, std::ostream& out)
{
    const int two_j = *cfg.two_j;
    const Resolved r = resolve(cfg, two_j);
    const FockBasis basis(two_j);
    const Initial init = initial_state(cfg, r, two_j);

    std::vector<double> times(cfg.steps + 1);
    for (int i = 0; i <= cfg.steps; ++i)
        times[i] = i == cfg.steps ? cfg.t_max : cfg.t_max * i / cfg.steps;
    std::vector<double> values(times.size());
    const double scale = unit_scale(cfg);

    json route_info;
    if (r.route == Route::Exact)
    {
        const ExactParams& x = *r.exact;
        const Eigen::VectorXcd c =
            init.eigen_basis ? init.amps : eigenbasis_coefficients(x, StateVector(basis, init.amps));
        const RelativePopulation pop(x, c);
        for (std::size_t i = 0; i < times.size(); ++i)
            values[i] = scale * pop(times[i]);
    }
    else
    {
        const StateVector s0 = init.eigen_basis ? state_from_eigenbasis(*r.exact, init.amps)
                                                : StateVector(basis, init.amps);
        const HermitianOperator h = build_hamiltonian(r.canonical);
        const SpectralDecomposition d = eigh(h);
        const Propagator prop(d, s0);
        const Eigen::VectorXd m_diag = m_operator(basis).band().row(0).real().transpose();
        for (std::size_t i = 0; i < times.size(); ++i)
            values[i] = scale * prop.expectation_diagonal(m_diag, times[i]);
        route_info["eigen_residual"] = d.residual(h);
    }

    CsvWriter csv({"t", "mean_m"});
    for (std::size_t i = 0; i < times.size(); ++i)
    {
        csv.cell(times[i]).cell(values[i]);
        csv.end_row();
    }

    CsvWriter markers({"marker", "value"});
    json marker_info;
    std::optional<RevivalPeriod> period;
    bool manifold_known = r.exact.has_value();
    if (manifold_known && r.exact->a2 != 0.0)
    {
        for (int n = 0; n <= 3; ++n)
        {
            const double tr = collapse_time(r.exact->a2, n);
            markers.cell("t_r" + std::to_string(n)).cell(tr);
            markers.end_row();
            marker_info["t_r" + std::to_string(n)] = tr;
        }
        period = period_of(cfg, *r.exact);
        if (period)
        {
            markers.cell("p").cell(static_cast<long long>(period->p));
            markers.end_row();
            markers.cell("q").cell(static_cast<long long>(period->q));
            markers.end_row();
            markers.cell("p_r").cell(static_cast<long long>(period->p_r));
            markers.end_row();
            markers.cell("t1").cell(period->t1);
            markers.end_row();
            marker_info["p"] = period->p;
            marker_info["q"] = period->q;
            marker_info["p_r"] = period->p_r;
            marker_info["t1"] = period->t1;
            marker_info["ratio_reconstructed"] = period->reconstructed;
        }
    }
    marker_info["periodic"] = period.has_value();

    Run run(cfg, out);
    run.record_parameters(r);
    run.write("dynamics.csv", csv.text());
    run.write("markers.csv", markers.text());
    if (cfg.svg)
        run.write("dynamics.svg",
                  svg_line_plot("relative population", "t",
                                cfg.units == Units::Physical ? "<a'a - b'b>" : "<Jz>",
                                {Series{"", times, values}}));
    auto& m = run.manifest();
    m["initial_state"] = init.description;
    m["time_grid"] = {{"t_max", cfg.t_max}, {"steps", cfg.steps}, {"points", cfg.steps + 1}};
    m["markers"] = marker_info;
    if (!route_info.is_null())
        m["numeric"] = route_info;
    run.finish();

    if (cfg.request_period && !period)
        throw Aperiodic{};
    return kOk;
}

// ---------------------------------------------------------------- entanglement

int thread_cap()
{
    if (const char* env = std::getenv("BEC2_THREADS"))
    {
        const int n = std::atoi(env);
        if (n >= 1)
            return n;
    }
    return std::max(1u, std::thread::hardware_concurrency());
}

int cmd_entanglement(const RunConfig& cfg, std::ostream& out)
{
    if (cfg.has_canonical())
        throw ConfigError("entanglement sweeps are parameterized by theta; canonical coefficients "
                          "are not accepted");
    std::vector<double> thetas = cfg.thetas;
    if (thetas.empty())
        thetas = cfg.theta ? std::vector<double>{*cfg.theta} : parse_grid("0:pi:181");

    struct Slice
    {
        int two_j;
        int two_k0;
    };
    std::vector<Slice> slices;
    for (int two_j : cfg.two_js)
    {
        const FockBasis basis(two_j);
        std::vector<int> k0s;
        if (cfg.all_k0)
            for (Eigen::Index i = 0; i < basis.dim(); ++i)
                k0s.push_back(basis.two_k(i));
        else if (!cfg.two_k0s.empty())
            k0s = cfg.two_k0s;
        else
            k0s.push_back(cfg.two_k0.value_or(two_j));
        for (int tk : k0s)
        {
            basis.index_of(tk);
            slices.push_back({two_j, tk});
        }
    }

    const std::size_t n_theta = thetas.size();
    const std::size_t total = slices.size() * n_theta;
    std::vector<double> entropy(total);
    const int workers = static_cast<int>(std::min<std::size_t>(thread_cap(), std::max<std::size_t>(total, 1)));
    std::vector<std::exception_ptr> failures(workers);
    auto work = [&](int w) {
        try
        {
            for (std::size_t i = w; i < total; i += workers)
            {
                const Slice& s = slices[i / n_theta];
                entropy[i] = ground_entropy(thetas[i % n_theta], s.two_j, s.two_k0).bits;
            }
        }
        catch (...)
        {
            failures[w] = std::current_exception();
        }
    };
    if (workers == 1)
        work(0);
    else
    {
        std::vector<std::thread> pool;
        for (int w = 0; w < workers; ++w)
            pool.emplace_back(work, w);
        for (auto& t : pool)
            t.join();
    }
    for (auto& f : failures)
        if (f)
            std::rethrow_exception(f);

    CsvWriter csv({"theta", "k0", "j", "entropy_bits"});
    json argmax = json::array();
    for (std::size_t s = 0; s < slices.size(); ++s)
    {
        std::size_t best = 0;
        for (std::size_t t = 0; t < n_theta; ++t)
        {
            const double v = entropy[s * n_theta + t];
            csv.cell(thetas[t]).cell(half(slices[s].two_k0)).cell(half(slices[s].two_j)).cell(v);
            csv.end_row();
            if (v > entropy[s * n_theta + best])
                best = t;
        }
        argmax.push_back({{"j", half(slices[s].two_j)},
                          {"k0", half(slices[s].two_k0)},
                          {"argmax_theta", thetas[best]},
                          {"max_entropy_bits", entropy[s * n_theta + best]}});
    }

    Run run(cfg, out);
    run.write("entropy.csv", csv.text());
    if (cfg.svg)
    {
        const int first_j = slices.front().two_j;
        std::vector<double> k0_axis;
        std::vector<std::vector<double>> grid;
        for (std::size_t s = 0; s < slices.size() && slices[s].two_j == first_j; ++s)
        {
            k0_axis.push_back(half(slices[s].two_k0));
            grid.emplace_back(entropy.begin() + s * n_theta, entropy.begin() + (s + 1) * n_theta);
        }
        if (k0_axis.size() > 1 && n_theta > 1)
            run.write("entropy.svg",
                      svg_heatmap("mode entanglement, j = " + format_double(half(first_j)), "theta",
                                  "k0", thetas, k0_axis, grid));
        else
        {
            std::vector<Series> series;
            for (std::size_t s = 0; s < slices.size() && series.size() < 8; ++s)
                series.push_back({"j = " + format_double(half(slices[s].two_j)) +
                                      ", k0 = " + format_double(half(slices[s].two_k0)),
                                  thetas,
                                  std::vector<double>(entropy.begin() + s * n_theta,
                                                      entropy.begin() + (s + 1) * n_theta)});
            run.write("entropy.svg", svg_line_plot("mode entanglement", "theta", "entropy (bits)", series));
        }
    }
    auto& m = run.manifest();
    m["grid"] = {{"thetas", n_theta}, {"slices", slices.size()}, {"threads", workers}};
    m["argmax"] = argmax;
    run.finish();
    return kOk;
}

// ---------------------------------------------------------------- verify

int cmd_verify(const RunConfig& cfg, std::ostream& out)
{
    const auto& all = acceptance_checks();
    for (const auto& id : cfg.checks)
        if (std::none_of(all.begin(), all.end(), [&](const AcceptanceCheck& c) { return c.id == id; }))
            throw ConfigError("unknown check '" + id + "'");

    VerifyOptions opts;
    opts.mu_perturbation = cfg.mu_perturbation;

    json checks = json::array();
    int passed = 0;
    int total = 0;
    for (const auto& check : all)
    {
        if (!cfg.checks.empty() && std::find(cfg.checks.begin(), cfg.checks.end(), check.id) == cfg.checks.end())
            continue;
        const auto t0 = std::chrono::steady_clock::now();
        CheckResult res;
        try
        {
            res = check.run(opts);
        }
        catch (const std::exception& e)
        {
            res = {check.id, check.name, false, 0.0, 0.0, std::string("exception: ") + e.what(), 0.0};
        }
        res.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        ++total;
        passed += res.passed;
        out << res.id << (res.passed ? " PASS " : " FAIL ") << res.name << ": " << res.detail << "\n";
        checks.push_back({{"id", res.id},
                          {"name", res.name},
                          {"passed", res.passed},
                          {"measured", res.measured},
                          {"threshold", res.threshold},
                          {"detail", res.detail},
                          {"seconds", res.seconds}});
    }

    const ConventionReport conv = measure_u_convention();
    json report;
    report["version"] = BEC2_VERSION;
    report["mu_perturbation"] = cfg.mu_perturbation;
    report["checks"] = checks;
    report["passed"] = passed;
    report["total"] = total;
    report["all_passed"] = passed == total;
    report["u_convention"] = {{"cross_defect", conv.cross_defect},
                              {"quarter_defect", conv.quarter_defect},
                              {"cross_holds", conv.cross_holds},
                              {"quarter_holds", conv.quarter_holds},
                              {"adopted", conv.adopted},
                              {"dictionary", conv.dictionary}};

    Run run(cfg, out);
    run.write("verify_report.json", report.dump(2) + "\n");
    run.manifest()["passed"] = passed;
    run.manifest()["total"] = total;
    run.finish();
    out << passed << "/" << total << " checks passed\n";
    return passed == total ? kOk : kVerifyFailed;
}

// ---------------------------------------------------------------- command line

struct FlagSpec
{
    const char* name;
    const char* key;
    const char* help;
    bool is_flag;
};

const FlagSpec kFlags[] = {
    {"--mode", "mode", "auto | exact | numeric", false},
    {"--exact", "exact", "same as --mode exact", true},
    {"--numeric", "numeric", "same as --mode numeric", true},
    {"--j", "j", "spin j = N/2 (integer or half-integer)", false},
    {"--k0", "k0", "eigenstate label k0 (default: the ground index)", false},
    {"--theta", "theta", "rotation angle; accepts pi expressions", false},
    {"--a1", "a1", "linear coefficient A1 of a1 Jz + a2 Jz^2", false},
    {"--a2", "a2", "quadratic coefficient A2 (default 1)", false},
    {"--phi", "phi", "rotation phase", false},
    {"--a0", "a0", "constant offset", false},
    {"--delta-omega", "delta_omega", "detuning coefficient", false},
    {"--lambda", "lambda", "Josephson coupling", false},
    {"--u", "u", "cross-collision constant (see --u-convention)", false},
    {"--mu", "mu", "density-assisted tunnelling", false},
    {"--Lambda", "Lambda", "pair tunnelling", false},
    {"--u-convention", "u_convention", "cross (coefficient of a'b'ab) | quarter", false},
    {"--t-max", "t_max", "end of the time grid (default 10)", false},
    {"--steps", "steps", "time steps; steps + 1 points (default 1000)", false},
    {"--period", "period", "exit 5 when the trace has no revival period", true},
    {"--init", "init", "default | dicke:K | rotated:THETA0:K | file:PATH", false},
    {"--init-basis", "init_basis", "eigen | fock", false},
    {"--thetas", "thetas", "theta grid, start:stop:count or a comma list", false},
    {"--k0s", "k0s", "comma list of k0 or 'all'", false},
    {"--js", "js", "comma list of j", false},
    {"--out", "out", "output directory (default .)", false},
    {"--svg", "svg", "also write SVG plots", true},
    {"--units", "units", "physical (a'a - b'b) | paper (Jz)", false},
    {"--inject-mu-perturbation", "inject_mu_perturbation", "negative control for verify", false},
    {"--checks", "checks", "comma list of check ids for verify", false},
};

} // namespace

Resolved resolve(const RunConfig& cfg, int two_j)
{
    Resolved r;
    if (cfg.has_exact() || !cfg.has_canonical())
    {
        const ExactParams x{cfg.a1.value_or(0.0), cfg.a2.value_or(1.0), cfg.theta.value_or(0.0), cfg.phi,
                            two_j};
        x.validate();
        r.exact = x;
        r.canonical = exact_to_canonical(x);
        r.scale = coefficient_scale(r.canonical);
        r.route = cfg.mode == Mode::Numeric ? Route::Numeric : Route::Exact;
        return r;
    }

    CanonicalParams& c = r.canonical;
    c.a0 = cfg.a0.value_or(0.0);
    c.delta_omega = cfg.delta_omega.value_or(0.0);
    c.lam = cfg.lam.value_or(0.0);
    c.phi = cfg.phi;
    const double u = cfg.u.value_or(0.0);
    c.u_cross = cfg.u_convention == UConvention::Cross ? u : cross_from_quarter_u(u);
    c.mu = cfg.mu.value_or(0.0);
    c.lambda2 = cfg.lambda2.value_or(0.0);
    c.two_j = two_j;
    c.validate();
    r.residual = solvability_residual(c);
    r.scale = coefficient_scale(c);

    const bool on_manifold = r.residual <= kRouteTolerance * r.scale;
    if (cfg.mode == Mode::Exact || on_manifold)
    {
        const Inversion inv = canonical_to_exact(c, kRouteTolerance); // throws NotSolvable
        r.exact = inv.params;
        r.angle_source = inv.angle_source;
    }
    r.route = cfg.mode == Mode::Numeric || !r.exact ? Route::Numeric : Route::Exact;
    return r;
}

int run_config(const RunConfig& cfg, std::ostream& out, std::ostream& err)
{
    try
    {
        switch (cfg.command)
        {
        case Command::Ground: return cmd_ground(cfg, out);
        case Command::Dynamics: return cmd_dynamics(cfg, out);
        case Command::Entanglement: return cmd_entanglement(cfg, out);
        case Command::Verify: return cmd_verify(cfg, out);
        }
    }
    catch (const Aperiodic&)
    {
        err << "error: a revival period was requested but a1/a2 is not rational within the "
               "reconstruction tolerance, or the point is off the manifold\n";
        return kAperiodic;
    }
    catch (const NotSolvable& e)
    {
        err << "error: not on the solvable manifold: " << e.what() << "\n";
        return kOffManifold;
    }
    catch (const ConvergenceFailure& e)
    {
        err << "error: numerical failure: " << e.what() << "\n";
        return kNumericalFailure;
    }
    catch (const SizeExceeded& e)
    {
        err << "error: numerical failure: " << e.what() << "\n";
        return kNumericalFailure;
    }
    catch (const ConfigError& e)
    {
        err << "error: " << e.what() << "\n";
        return kInvalidConfig;
    }
    catch (const Error& e)
    {
        err << "error: invalid configuration: " << e.what() << "\n";
        return kInvalidConfig;
    }
    catch (const std::exception& e)
    {
        err << "error: " << e.what() << "\n";
        return kNumericalFailure;
    }
    return kInvalidConfig;
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err)
{
    CLI::App app{"Two-mode condensate simulator: ground-state distributions, dynamics, "
                 "entanglement sweeps and the verification suite."};
    app.set_version_flag("--version", BEC2_VERSION);
    app.require_subcommand(1);

    std::map<std::string, std::string> values;
    std::map<std::string, bool> switches;
    std::string config_path;
    struct Bound
    {
        CLI::App* sub;
        std::vector<std::pair<std::string, CLI::Option*>> options;
        CLI::Option* config;
    };
    std::vector<Bound> subs;
    for (const char* name : {"ground", "dynamics", "entanglement", "verify"})
    {
        Bound b;
        b.sub = app.add_subcommand(name);
        for (const auto& f : kFlags)
            b.options.emplace_back(f.key, f.is_flag ? b.sub->add_flag(f.name, switches[f.key], f.help)
                                                    : b.sub->add_option(f.name, values[f.key], f.help));
        b.config = b.sub->add_option("--config", config_path, "JSON file with the same keys as the flags");
        subs.push_back(std::move(b));
    }
    subs[0].sub->description("number distribution of a manifold eigenstate or the numeric ground state");
    subs[1].sub->description("relative population <a'a - b'b>(t) with collapse and revival markers");
    subs[2].sub->description("mode entanglement over theta, k0 and j grids");
    subs[3].sub->description("run the acceptance checks and write verify_report.json");

    try
    {
        app.parse(argc, argv);
    }
    catch (const CLI::ParseError& e)
    {
        const int code = app.exit(e, out, err);
        return code == 0 ? kOk : kInvalidConfig;
    }

    try
    {
        for (const auto& b : subs)
        {
            if (!b.sub->parsed())
                continue;
            const Command command = parse_command(b.sub->get_name());
            RawConfig raw = b.config->count() > 0 ? raw_from_json_file(config_path) : RawConfig{};
            for (const auto& [key, opt] : b.options)
                if (opt->count() > 0)
                    raw[key] = switches.count(key) ? "true" : values[key];
            return run_config(build_config(command, raw), out, err);
        }
    }
    catch (const ConfigError& e)
    {
        err << "error: " << e.what() << "\n";
        return kInvalidConfig;
    }
    return kInvalidConfig;
}

int run(int argc, const char* const* argv) { return run(argc, argv, std::cout, std::cerr); }

} // namespace bec2::cli
