#include "cli.hpp"

#include "rcf/convergents.hpp"
#include "rcf/deviation.hpp"
#include "rcf/error.hpp"
#include "rcf/json_io.hpp"
#include "rcf/levy.hpp"
#include "rcf/mixing.hpp"
#include "rcf/report.hpp"
#include "rcf/seeding.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <functional>
#include <optional>
#include <sstream>

namespace rcf {

namespace {

struct Options {
    std::string spec;
    std::uint64_t seed = 0;
    std::size_t trials = 0;
    std::size_t n = 0;
    std::string n_grid;
    double delta = 0.0;
    std::string out;
    std::string report;
    std::string format;
    int threads = 0;
    std::size_t truncation = kDefaultTruncation;
    std::string method = "trajectory";
    bool certify = false;
    std::string psi_profile;
    bool self_test = false;
    std::size_t depth = 2;
    std::size_t k_max = 5;
    std::string lags = "1,2,4,8";
    std::size_t reference_trials = kReferenceTrials;
    std::size_t mgf_trials = CertificateOptions{}.mgf_trials;
};

std::string read_file(const std::string& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw ConfigError("cannot read \"" + path + "\"");
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

bool looks_inline(const std::string& text)
{
    const auto pos = text.find_first_not_of(" \t\r\n");
    return pos != std::string::npos && (text[pos] == '{' || text[pos] == '[');
}

ProcessSpec load_spec(const std::string& arg)
{
    if (arg.empty())
        throw ConfigError("--spec is required");
    if (looks_inline(arg))
        return parse_spec(arg);
    for (const auto& named : builtin_specs())
        if (named.name == arg)
            return named.spec;
    return parse_spec(read_file(arg));
}

std::size_t parse_count(const std::string& s, const char* what)
{
    std::size_t pos = 0;
    unsigned long long v = 0;
    try {
        v = std::stoull(s, &pos);
    } catch (const std::exception&) {
        pos = 0;
    }
    if (pos == 0 || pos != s.size() || s.front() == '-')
        throw ConfigError(std::string(what) + ": \"" + s + "\" is not a nonnegative integer");
    return static_cast<std::size_t>(v);
}

// "a:b:step" -> a, a+step, ..., <= b
std::vector<std::size_t> parse_grid(const std::string& text)
{
    std::vector<std::string> parts;
    std::stringstream in(text);
    for (std::string p; std::getline(in, p, ':');)
        parts.push_back(p);
    if (parts.size() != 3)
        throw ConfigError("--n-grid must look like a:b:step");
    const auto a = parse_count(parts[0], "--n-grid");
    const auto b = parse_count(parts[1], "--n-grid");
    const auto step = parse_count(parts[2], "--n-grid");
    if (a < 1 || step < 1 || b < a)
        throw ConfigError("--n-grid needs 1 <= a <= b and step >= 1");
    std::vector<std::size_t> grid;
    for (std::size_t n = a; n <= b; n += step)
        grid.push_back(n);
    return grid;
}

std::vector<std::size_t> parse_list(const std::string& text, const char* what)
{
    std::vector<std::size_t> out;
    std::stringstream in(text);
    for (std::string p; std::getline(in, p, ',');)
        out.push_back(parse_count(p, what));
    if (out.empty())
        throw ConfigError(std::string(what) + " is empty");
    return out;
}

PsiProfile load_psi(const std::string& arg)
{
    const Json j = [&] {
        try {
            return Json::parse(looks_inline(arg) ? arg : read_file(arg));
        } catch (const Json::parse_error& e) {
            throw ConfigError(std::string("--psi-profile: invalid JSON: ") + e.what());
        }
    }();
    if (!j.is_object())
        throw ConfigError("--psi-profile must be an object mapping lag to psi");
    PsiProfile psi;
    for (const auto& [key, value] : j.items()) {
        if (!value.is_number() || value.get<double>() < 0.0)
            throw ConfigError("--psi-profile values must be nonnegative numbers");
        psi[parse_count(key, "--psi-profile lag")] = value.get<double>();
    }
    return psi;
}

void emit(const std::string& text, const std::string& path, std::ostream& out)
{
    if (path.empty()) {
        out << text;
        return;
    }
    std::ofstream f(path, std::ios::binary);
    if (!f)
        throw ConfigError("cannot write \"" + path + "\"");
    f << text;
}

std::string dump(const Json& j)
{
    return j.dump(2) + "\n";
}

int cmd_simulate(const Options& o, std::ostream& out, std::ostream& err)
{
    const auto spec = load_spec(o.spec);
    if (o.n < 1)
        throw ConfigError("--n must be >= 1");
    const auto path = sample_path(spec, o.n, o.seed);
    ConvergentState s = init();
    std::vector<double> traj;
    traj.reserve(o.n);
    for (Digit d : path.digits) {
        step_in_place(s, d);
        traj.push_back(log_of(s.q_cur) / static_cast<double>(s.n));
    }
    const std::string convergent = s.p_cur.get_str() + "/" + s.q_cur.get_str();

    std::string body;
    if (o.format == "json") {
        Json rows = Json::array();
        for (std::size_t i = 0; i < traj.size(); ++i)
            rows.push_back(round_sig(traj[i]));
        body = dump(Json{{"spec", spec_to_json(spec)},
                         {"seed", o.seed},
                         {"n", o.n},
                         {"digits", path.digits},
                         {"log_qn_over_n", rows},
                         {"convergent", convergent}});
    } else {
        std::ostringstream csv;
        csv << "n,digit,log_qn_over_n\n";
        for (std::size_t i = 0; i < traj.size(); ++i)
            csv << i + 1 << ',' << path.digits[i] << ',' << format_number(traj[i]) << '\n';
        body = csv.str();
    }
    emit(body, o.out, out);
    (o.out.empty() ? err : out) << "convergent=" << convergent << '\n';
    return kExitOk;
}

int cmd_levy(const Options& o, std::ostream& out, std::ostream&)
{
    const auto spec = load_spec(o.spec);
    LevyEstimate e;
    if (o.method == "trajectory") {
        e = levy_mc_trajectory(spec, o.n, o.trials, o.seed);
    } else if (o.method == "direct") {
        e = levy_mc_direct(spec, o.trials, o.truncation, o.seed);
    } else {
        const auto a = levy_analytic(spec);
        if (!a)
            throw ConfigError("no analytic Levy constant for this spec");
        e.point = *a;
        e.method = LevyMethod::analytic;
        e.seed = o.seed;
        e.analytic = a;
    }
    emit(dump(to_json(e)), o.out, out);
    return kExitOk;
}

int cmd_deviation(const Options& o, std::ostream& out, std::ostream& err)
{
    const auto spec = load_spec(o.spec);
    if (!(o.delta > 0.0))
        throw ConfigError("--delta must be > 0");
    const auto grid = parse_grid(o.n_grid);
    std::optional<PsiProfile> psi;
    if (!o.psi_profile.empty())
        psi = load_psi(o.psi_profile);
    if (o.certify && !spec.is_iid() && !psi)
        throw ConfigError("--certify on a non-iid spec needs --psi-profile");

    const std::size_t ref_trials = std::max(o.reference_trials, 10 * o.trials);
    const auto ref = reference_levy(spec, ref_trials, o.seed);
    const auto curve = empirical_deviation(spec, o.delta, grid, o.trials, o.seed, ref.value);

    Json report{{"spec", spec_to_json(spec)},
                {"seed", o.seed},
                {"delta", round_sig(o.delta)},
                {"trials", o.trials},
                {"reference_L", round_sig(ref.value)},
                {"reference_analytic", ref.analytic},
                {"seeding", seeding_metadata()}};
    Json rows = Json::array();
    for (const auto& p : curve.grid)
        rows.push_back(Json{{"n", p.n},
                            {"trials", p.trials},
                            {"hits", p.hits},
                            {"hits_above", p.hits_above},
                            {"hits_below", p.hits_below},
                            {"p_hat", round_sig(p.p_hat)},
                            {"ci_lo", round_sig(p.ci_lo)},
                            {"ci_hi", round_sig(p.ci_hi)}});
    report["curve"] = rows;
    try {
        report["fit"] = to_json(fit_rate(curve));
    } catch (const InsufficientDataError& e) {
        report["fit"] = nullptr;
        report["fit_error"] = e.what();
    }

    int code = kExitOk;
    if (o.certify) {
        CertificateOptions copt;
        copt.reference_trials = ref_trials;
        copt.mgf_trials = o.mgf_trials;
        copt.truncation = o.truncation;
        const auto cert = chernoff_certificate(spec, o.delta, psi, o.seed, copt);
        const auto check = verify_bound(curve, cert);
        report["certificate"] = to_json(cert, spec);
        report["verify"] = to_json(check);
        if (!check.pass) {
            err << "verify_bound: empirical deviation probability exceeds the certified bound\n";
            code = kExitFailed;
        }
    }

    if (o.format == "csv") {
        emit(curve_csv(curve), o.out, out);
    } else {
        emit(dump(report), o.out, out);
    }
    if (!o.report.empty())
        emit(dump(report), o.report, out);
    return code;
}

void for_each_word(std::size_t len, Digit max_digit, const std::function<void(const std::vector<Digit>&)>& fn)
{
    std::vector<Digit> w(len, 1);
    while (true) {
        fn(w);
        std::size_t i = 0;
        while (i < len && w[i] == max_digit)
            w[i++] = 1;
        if (i == len)
            return;
        ++w[i];
    }
}

struct CheckTally {
    std::size_t paths = 0;
    std::size_t failures = 0;
    double determinant_residual = 0.0;
    double second_determinant_residual = 0.0;
    double mobius_gap = 0.0;
    double approximation_gap = 0.0;
    double product_gap = 0.0;
    double sandwich_residual = -INFINITY;

    void add(const IdentityReport& r)
    {
        ++paths;
        failures += r.all_pass() ? 0 : 1;
        determinant_residual = std::max(determinant_residual, r.determinant_residual);
        second_determinant_residual = std::max(second_determinant_residual, r.second_determinant_residual);
        mobius_gap = std::max(mobius_gap, r.mobius_gap);
        approximation_gap = std::max(approximation_gap, r.approximation_gap);
        product_gap = std::max(product_gap, r.product_gap);
    }
};

int cmd_check(const Options& o, std::ostream& out, std::ostream&)
{
    const Recurrence rec = o.self_test ? Recurrence::corrupted : Recurrence::exact;
    const double sandwich_tolerance = std::ldexp(1.0, -30);
    std::ostringstream text;
    bool pass = true;

    CheckTally exhaustive;
    for (std::size_t len = 1; len <= 6; ++len)
        for_each_word(len, 3, [&](const std::vector<Digit>& w) { exhaustive.add(identity_suite(w, 1, rec)); });
    pass = pass && exhaustive.failures == 0;
    text << "exhaustive digits<=3 length<=6: paths=" << exhaustive.paths << " failures=" << exhaustive.failures
         << '\n';

    std::vector<NamedSpec> families;
    if (o.spec.empty())
        families = builtin_specs();
    else
        families.push_back({"spec", load_spec(o.spec)});
    const std::size_t len = std::max<std::size_t>(o.n, o.truncation + 1);
    for (const auto& [name, spec] : families) {
        const PathSampler sampler(spec);
        const std::uint64_t base = stream_seed(o.seed, Stream::check);
        const auto reports = map_trials<std::pair<IdentityReport, SandwichReport>>(o.trials, [&](std::size_t i) {
            const auto digits = sampler.digits(len, derive_seed(base, i));
            return std::pair{identity_suite(digits, o.truncation, rec), sandwich_check(digits, o.truncation)};
        });
        CheckTally t;
        for (const auto& [id, sw] : reports) {
            t.add(id);
            t.sandwich_residual = std::max(t.sandwich_residual, sw.residual);
        }
        const bool ok = t.failures == 0 && t.sandwich_residual <= sandwich_tolerance;
        pass = pass && ok;
        text << name << ": paths=" << t.paths << " failures=" << t.failures
             << " determinant_residual=" << format_number(t.determinant_residual)
             << " second_determinant_residual=" << format_number(t.second_determinant_residual)
             << " mobius_gap=" << format_number(t.mobius_gap)
             << " approximation_gap=" << format_number(t.approximation_gap)
             << " product_gap=" << format_number(t.product_gap)
             << " sandwich_residual=" << format_number(t.sandwich_residual) << '\n';
    }
    text << (pass ? "PASS" : "FAIL") << '\n';
    emit(text.str(), o.out, out);
    return pass ? kExitOk : kExitFailed;
}

int cmd_mixing(const Options& o, std::ostream& out, std::ostream&)
{
    const auto spec = load_spec(o.spec);
    const auto lags = parse_list(o.lags, "--lags");
    const auto m = mixing_report(spec, lags, o.depth, o.k_max, o.trials, o.seed);
    Json j = to_json(m);
    j["spec"] = spec_to_json(spec);
    j["seed"] = o.seed;
    if (std::holds_alternative<process::GaussStationary>(spec.kind()))
        j["gauss_marginal"] = to_json(gauss_marginal_check(o.trials, o.seed));
    emit(dump(j), o.out, out);
    return kExitOk;
}

struct ArgvBuffer {
    std::vector<std::string> storage;
    std::vector<char*> ptrs;
    explicit ArgvBuffer(const std::vector<std::string>& args) : storage(args)
    {
        if (storage.empty())
            storage.emplace_back("rcf");
        for (auto& s : storage)
            ptrs.push_back(s.data());
    }
};

} // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err)
{
    CLI::App app{"Random continued fractions: simulation, Levy constants, deviation bounds and mixing diagnostics"};
    app.require_subcommand(1);
    Options o;

    auto common = [&](CLI::App* sub, bool needs_spec) {
        auto* spec = sub->add_option("--spec", o.spec, "Process spec: inline JSON, a JSON file, or a built-in name");
        if (needs_spec)
            spec->required();
        sub->add_option("--seed", o.seed, "Master seed (unsigned 64-bit)")->required();
        sub->add_option("--out", o.out, "Write the primary output here instead of standard output");
        sub->add_option("--threads", o.threads, "Worker threads")->check(CLI::PositiveNumber);
        sub->add_option("--truncation-depth", o.truncation, "Partial quotients used to bracket each tail value");
    };

    auto* simulate = app.add_subcommand("simulate", "Sample a path and its (1/n) ln Q_n trajectory");
    common(simulate, true);
    simulate->add_option("--n", o.n, "Path length")->required();
    simulate->add_option("--format", o.format, "csv or json")->check(CLI::IsMember({"csv", "json"}));

    auto* levy = app.add_subcommand("levy", "Estimate the Levy constant");
    common(levy, true);
    o.n = 500;
    o.trials = 200;
    levy->add_option("--n", o.n, "Trajectory length");
    levy->add_option("--trials", o.trials, "Independent trials");
    levy->add_option("--method", o.method, "trajectory, direct or analytic")
        ->check(CLI::IsMember({"trajectory", "direct", "analytic"}));
    levy->add_option("--format", o.format, "json")->check(CLI::IsMember({"json"}));

    auto* deviation = app.add_subcommand("deviation", "Empirical deviation curve, rate fit and Chernoff certificate");
    common(deviation, true);
    deviation->add_option("--delta", o.delta, "Deviation threshold")->required();
    deviation->add_option("--n-grid", o.n_grid, "Grid a:b:step")->required();
    deviation->add_option("--trials", o.trials, "Trials per grid point");
    deviation->add_option("--format", o.format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
    deviation->add_option("--report", o.report, "Also write the JSON report to this file");
    deviation->add_flag("--certify", o.certify, "Build the Chernoff certificate and verify the curve against it");
    deviation->add_option("--psi-profile", o.psi_profile, "JSON object {lag: psi}, inline or a file");
    deviation->add_option("--reference-trials", o.reference_trials, "Direct trials for the reference value");
    deviation->add_option("--mgf-trials", o.mgf_trials, "Trials for the moment estimates");

    auto* check = app.add_subcommand("check", "Exact identities and the sandwich bound on many paths");
    common(check, false);
    check->add_option("--trials", o.trials, "Random paths per process family");
    check->add_option("--n", o.n, "Random path length");
    check->add_flag("--self-test", o.self_test, "Corrupt one recurrence step; the check must then fail");

    auto* mixing = app.add_subcommand("mixing", "Stationarity and psi-mixing diagnostics");
    common(mixing, true);
    mixing->add_option("--trials", o.trials, "Trials");
    mixing->add_option("--lags", o.lags, "Comma-separated lags");
    mixing->add_option("--depth", o.depth, "Cylinder depth");
    mixing->add_option("--k-max", o.k_max, "Largest symbol tracked");
    mixing->add_option("--format", o.format, "json")->check(CLI::IsMember({"json"}));

    ArgvBuffer argv(args);
    try {
        app.parse(static_cast<int>(argv.ptrs.size()), argv.ptrs.data());
    } catch (const CLI::ParseError& e) {
        return app.exit(e, out, err) == 0 ? kExitOk : kExitUsage;
    }

    // Per-command defaults that differ from the shared ones.
    auto defaulted = [](CLI::App* sub, const char* flag) { return sub->count(flag) == 0; };
    try {
        if (o.threads > 0)
            set_worker_count(o.threads);
        if (*simulate) {
            if (o.format.empty())
                o.format = "csv";
            return cmd_simulate(o, out, err);
        }
        if (*levy)
            return cmd_levy(o, out, err);
        if (*deviation) {
            if (defaulted(deviation, "--trials"))
                o.trials = 10'000;
            if (o.format.empty())
                o.format = "json";
            return cmd_deviation(o, out, err);
        }
        if (*check) {
            if (defaulted(check, "--trials"))
                o.trials = 200;
            if (defaulted(check, "--n"))
                o.n = 100;
            if (defaulted(check, "--truncation-depth"))
                o.truncation = 40;
            return cmd_check(o, out, err);
        }
        if (*mixing) {
            if (defaulted(mixing, "--trials"))
                o.trials = 100'000;
            return cmd_mixing(o, out, err);
        }
    } catch (const ConfigError& e) {
        err << "error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const DomainError& e) {
        err << "error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const LengthError& e) {
        err << "error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const PrecisionError& e) {
        err << "failed: " << e.what() << '\n';
        return kExitFailed;
    } catch (const InsufficientDataError& e) {
        err << "failed: " << e.what() << '\n';
        return kExitFailed;
    }
    return kExitUsage;
}

} // namespace rcf
