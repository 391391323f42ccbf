// Acceptance suite: one PASS/FAIL line per criterion, tolerances pinned below.

#include "cli.hpp"
#include "oracles.hpp"

#include "rcf/convergents.hpp"
#include "rcf/deviation.hpp"
#include "rcf/distribution.hpp"
#include "rcf/levy.hpp"
#include "rcf/mixing.hpp"
#include "rcf/seeding.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <iostream>
#include <numbers>
#include <sstream>
#include <string>

using namespace rcf;

namespace {

constexpr std::uint64_t kSeed = 20240601;

constexpr double kGaussLevyTol = 0.02;
constexpr double kGaussLevySeconds = 60.0;
constexpr double kGoldenTol = 0.002;
constexpr double kSandwichTol = 0x1.0p-30;
constexpr double kTelescopeTol = 1e-12;
constexpr double kKhinchinTol = 1e-4;
constexpr double kKhinchinValue = 0.9878490;
constexpr double kRSquaredMin = 0.9;
constexpr double kMarginalTv = 0.01;

struct Line {
    bool pass;
    std::string detail;
};

std::string fmt(const char* f, auto... xs)
{
    char buf[512];
    std::snprintf(buf, sizeof buf, f, xs...);
    return buf;
}

double seconds_since(std::chrono::steady_clock::time_point t0)
{
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
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

Line gauss_levy()
{
    const auto t0 = std::chrono::steady_clock::now();
    const auto e = levy_mc_trajectory(ProcessSpec::gauss_stationary(), 500, 200, kSeed);
    const double secs = seconds_since(t0);
    const double target = 1.1865691;
    const double diff = std::abs(e.point - target);
    return {diff < kGaussLevyTol && secs <= kGaussLevySeconds,
            fmt("point=%.7f stderr=%.2g |diff|=%.2g tol=%g time=%.1fs", e.point, e.std_error, diff, kGaussLevyTol,
                secs)};
}

Line golden()
{
    ConvergentState s = init();
    bool fib = true;
    for (unsigned n = 1; n <= 90; ++n) {
        step_in_place(s, 1);
        fib = fib && s.q_cur == mpz_class(std::to_string(oracle::fibonacci(n + 1)));
    }
    for (unsigned n = 91; n <= 500; ++n)
        step_in_place(s, 1);
    const double l = log_of(s.q_cur) / 500.0;
    const double diff = std::abs(l - 0.4812118);
    return {fib && diff < kGoldenTol,
            fmt("Q_n=F(n+1) for n<=90: %s; (1/500)ln Q_500=%.7f |diff|=%.2g tol=%g", fib ? "yes" : "no", l, diff,
                kGoldenTol)};
}

Line exact_identities(std::size_t& random_paths)
{
    std::size_t words = 0, bad = 0;
    double residual = 0.0;
    for (std::size_t len = 1; len <= 6; ++len)
        for_each_word(len, 3, [&](const std::vector<Digit>& w) {
            const auto r = identity_suite(w, w.size());
            ++words;
            bad += (r.determinant_ok && r.second_determinant_ok) ? 0 : 1;
            residual = std::max({residual, r.determinant_residual, r.second_determinant_residual});
        });
    random_paths = 0;
    for (const auto& [name, spec] : builtin_specs()) {
        const PathSampler sampler(spec);
        const auto reports = map_trials<IdentityReport>(1000, [&](std::size_t i) {
            const auto d = sampler.digits(60, derive_seed(stream_seed(kSeed, Stream::check), i));
            return identity_suite(d, d.size());
        });
        for (const auto& r : reports) {
            ++random_paths;
            bad += (r.determinant_ok && r.second_determinant_ok) ? 0 : 1;
            residual = std::max({residual, r.determinant_residual, r.second_determinant_residual});
        }
    }
    return {bad == 0 && residual == 0.0,
            fmt("exhaustive=%zu random=%zu failures=%zu max residual=%g", words, random_paths, bad, residual)};
}

Line sandwich()
{
    double worst = -INFINITY;
    std::size_t paths = 0;
    for (const auto& [name, spec] : builtin_specs()) {
        const PathSampler sampler(spec);
        const auto reports = map_trials<SandwichReport>(1000, [&](std::size_t i) {
            return sandwich_check(sampler.digits(100, derive_seed(stream_seed(kSeed, Stream::check), i)), 40);
        });
        for (const auto& r : reports) {
            ++paths;
            worst = std::max(worst, r.residual);
        }
    }
    return {worst <= kSandwichTol, fmt("paths=%zu depth=40 worst residual=%.3g tol=2^-30", paths, worst)};
}

Line telescoping()
{
    double worst = 0.0;
    for (Digit K : {Digit{1}, Digit{10}, Digit{100}, Digit{10000}}) {
        long double s = 0.0L;
        for (Digit k = K; k >= 1; --k)
            s += gauss_kuzmin_pmf(k);
        worst = std::max(worst, static_cast<double>(std::abs(s - oracle::gk_partial_sum_closed(K))));
    }
    return {worst <= kTelescopeTol, fmt("K in {1,10,100,1e4} worst |diff|=%.2g tol=%g", worst, kTelescopeTol)};
}

Line khinchin()
{
    const auto v = expected_log_a1(Distribution::gauss_kuzmin());
    const auto [oracle_value, tail] = oracle::khinchin_log(10'000'000);
    const double d_frozen = std::abs(v.value - kKhinchinValue);
    const double d_oracle = std::abs(v.value - static_cast<double>(oracle_value));
    return {d_frozen < kKhinchinTol && d_oracle < kKhinchinTol,
            fmt("series=%.9f (bound %.1g) oracle=%.9f |diff|=%.2g tol=%g", v.value, v.error_bound,
                static_cast<double>(oracle_value), std::max(d_frozen, d_oracle), kKhinchinTol)};
}

Line cross_estimators()
{
    bool pass = true;
    std::string worst;
    double worst_ratio = 0.0;
    for (const auto& [name, spec] : builtin_specs()) {
        const auto t = levy_mc_trajectory(spec, 500, 200, kSeed);
        const auto d = levy_mc_direct(spec, 200, kDefaultTruncation, kSeed);
        const double sigma = std::hypot(t.std_error, d.std_error);
        const double tol = 3.0 * (sigma + (std::numbers::ln2 + d.bias_bound) / 500.0);
        const double diff = std::abs(t.point - d.point);
        pass = pass && diff <= tol;
        if (diff / tol >= worst_ratio) {
            worst_ratio = diff / tol;
            worst = fmt("%s: traj=%.5f direct=%.5f |diff|=%.2g tol=%.2g", name.c_str(), t.point, d.point, diff, tol);
        }
    }
    return {pass, "8 specs; worst " + worst};
}

Line deviation_decay(std::vector<ChernoffCertificate>& emitted)
{
    const auto spec = ProcessSpec::iid(Distribution::gauss_kuzmin());
    const double delta = 0.15;
    const std::size_t trials = 10'000;
    std::vector<std::size_t> grid;
    for (std::size_t n = 50; n <= 400; n += 50)
        grid.push_back(n);

    CertificateOptions opt;
    opt.reference_trials = std::max(kReferenceTrials, 10 * trials);
    const auto ref = reference_levy(spec, opt.reference_trials, kSeed);
    const auto curve = empirical_deviation(spec, delta, grid, trials, kSeed, ref.value);
    const auto fit = fit_rate(curve);
    const auto cert = chernoff_certificate(spec, delta, std::nullopt, kSeed, opt);
    emitted.push_back(cert);
    const auto check = verify_bound(curve, cert);

    // The grid may end before N; probe n = N and 2N as well so the bound is exercised.
    const auto beyond = empirical_deviation(spec, delta, {cert.N, 2 * cert.N}, trials, kSeed + 1, ref.value);
    const auto check_beyond = verify_bound(beyond, cert);

    const bool pass = fit.alpha_hat > 0.0 && fit.r_squared > kRSquaredMin && check.pass && check_beyond.pass;
    return {pass, fmt("alpha_hat=%.4g r2=%.4f (min %g); cert alpha=%.3g B=%.4g N=%zu; grid points >= N: %zu; "
                      "probe n=%zu,%zu p_hat=%.3g,%.3g lower99=%.3g,%.3g bound=%.3g,%.3g",
                      fit.alpha_hat, fit.r_squared, kRSquaredMin, cert.alpha, cert.B, cert.N, check.checked.size(),
                      cert.N, 2 * cert.N, beyond.grid[0].p_hat, beyond.grid[1].p_hat, check_beyond.checked[0].lower,
                      check_beyond.checked[1].lower, check_beyond.checked[0].bound, check_beyond.checked[1].bound)};
}

Line certificate_arithmetic(std::vector<ChernoffCertificate>& emitted)
{
    const std::size_t n0 = deviation_n0(0.1);
    CertificateOptions opt;
    emitted.push_back(chernoff_certificate(ProcessSpec::iid(Distribution::constant(1)), 0.8, std::nullopt, kSeed, opt));
    emitted.push_back(chernoff_certificate(ProcessSpec::iid(Distribution::uniform(3)), 0.2, std::nullopt, kSeed, opt));
    bool all = true;
    bool n0_ok = true;
    double worst = 0.0;
    for (const auto& c : emitted) {
        all = all && c.reverified && c.reverify_upper < c.delta / 8 && c.reverify_lower < c.delta / 8 &&
              c.reverify_seed != c.mgf_seed;
        n0_ok = n0_ok && c.N0 == static_cast<std::size_t>(std::ceil(2 * std::numbers::ln2 / c.delta));
        worst = std::max({worst, c.reverify_upper / (c.delta / 8), c.reverify_lower / (c.delta / 8)});
    }
    return {n0 == 14 && all && n0_ok,
            fmt("N0(0.1)=%zu; %zu certificates re-verified on an independent seed, worst |gap|/(delta/8)=%.3f", n0,
                emitted.size(), worst)};
}

Line mixing()
{
    bool within = true;
    double worst = 0.0;
    for (const auto& spec : {ProcessSpec::iid(Distribution::uniform(3)), ProcessSpec::iid(Distribution::gauss_kuzmin())}) {
        for (std::size_t lag : {1, 2, 4, 8}) {
            const auto e = psi_hat(spec, lag, 2, 3, 100'000, kSeed);
            within = within && e.within_envelope && e.psi_hat <= e.noise_envelope;
            worst = std::max(worst, e.psi_hat / e.noise_envelope);
        }
    }
    const auto m = marginal_check(ProcessSpec::gauss_stationary(), 1, 100'000, kSeed);
    const auto m3 = marginal_check(ProcessSpec::gauss_stationary(), 3, 100'000, kSeed);
    const double tv = std::max(m.total_variation, m3.total_variation);
    return {within && tv <= kMarginalTv,
            fmt("iid psi/envelope worst=%.3f (all pairs inside: %s); gauss marginal TV=%.4f tol=%g", worst,
                within ? "yes" : "no", tv, kMarginalTv)};
}

Line reproducibility()
{
    const std::vector<std::vector<std::string>> commands{
        {"simulate", "--spec", "gauss", "--n", "200", "--seed", "7"},
        {"levy", "--spec", "gauss_kuzmin", "--seed", "7", "--n", "200", "--trials", "200"},
        {"levy", "--spec", "markov2", "--seed", "7", "--method", "direct", "--trials", "2000"},
        {"deviation", "--spec", "uniform3", "--seed", "7", "--delta", "0.1", "--n-grid", "20:80:20", "--trials",
         "2000", "--reference-trials", "20000"},
        {"check", "--seed", "7", "--trials", "20"},
        {"mixing", "--spec", "gauss", "--seed", "7", "--trials", "10000", "--lags", "1,2"},
    };
    std::size_t identical = 0;
    for (const auto& cmd : commands) {
        std::string outputs[2];
        int codes[2];
        const char* threads[2] = {"1", "4"};
        for (int k = 0; k < 2; ++k) {
            auto args = cmd;
            args.insert(args.begin(), "rcf");
            args.push_back("--threads");
            args.push_back(threads[k]);
            std::ostringstream out, err;
            codes[k] = run_cli(args, out, err);
            outputs[k] = out.str() + "\x1f" + err.str();
        }
        identical += (outputs[0] == outputs[1] && codes[0] == codes[1] && codes[0] == 0) ? 1 : 0;
    }
    set_worker_count(1);
    return {identical == commands.size(),
            fmt("%zu/%zu commands byte-identical across --threads 1 and 4", identical, commands.size())};
}

} // namespace

int main()
{
    int failures = 0;
    auto report = [&](int id, const char* title, const std::function<Line()>& fn) {
        Line line;
        try {
            line = fn();
        } catch (const std::exception& e) {
            line = {false, std::string("exception: ") + e.what()};
        }
        failures += line.pass ? 0 : 1;
        std::cout << (line.pass ? "PASS" : "FAIL") << "  [" << id << "] " << title << ": " << line.detail
                  << std::endl;
    };

    std::size_t random_paths = 0;
    std::vector<ChernoffCertificate> emitted;
    report(1, "Gauss Levy constant", gauss_levy);
    report(2, "golden-ratio exactness", golden);
    report(3, "exact identities", [&] { return exact_identities(random_paths); });
    report(4, "sandwich bound", sandwich);
    report(5, "Gauss-Kuzmin telescoping", telescoping);
    report(6, "E(log a1) series", khinchin);
    report(7, "cross-estimator consistency", cross_estimators);
    report(8, "deviation decay", [&] { return deviation_decay(emitted); });
    report(9, "certificate arithmetic", [&] { return certificate_arithmetic(emitted); });
    report(10, "mixing diagnostics", mixing);
    report(11, "reproducibility", reproducibility);

    std::cout << (failures == 0 ? "ALL CRITERIA PASS" : std::to_string(failures) + " CRITERIA FAIL") << std::endl;
    return failures == 0 ? 0 : 1;
}
