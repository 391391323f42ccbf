#include "rcf/json_io.hpp"

#include "rcf/error.hpp"

#include <cmath>
#include <cstdio>

namespace rcf {

namespace {

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

const Json& field(const Json& j, const char* key)
{
    if (!j.is_object() || !j.contains(key))
        throw ConfigError(std::string("spec: missing field \"") + key + "\"");
    return j.at(key);
}

Digit positive_integer(const Json& v, const char* what)
{
    if (v.is_number_unsigned() || (v.is_number_integer() && v.get<long long>() > 0)) {
        const auto d = v.get<Digit>();
        if (d >= 1)
            return d;
    }
    throw ConfigError(std::string("spec: ") + what + " must be a positive integer");
}

double real(const Json& v, const char* what)
{
    if (!v.is_number())
        throw ConfigError(std::string("spec: ") + what + " must be a number");
    return v.get<double>();
}

std::vector<double> real_vector(const Json& v, const char* what)
{
    if (!v.is_array())
        throw ConfigError(std::string("spec: ") + what + " must be an array");
    std::vector<double> out;
    for (const auto& x : v)
        out.push_back(real(x, what));
    return out;
}

} // namespace

Json dist_to_json(const Distribution& d)
{
    return std::visit(overloaded{
                          [](const dist::Constant& c) { return Json{{"type", "constant"}, {"a", c.a}}; },
                          [](const dist::Uniform& u) { return Json{{"type", "uniform"}, {"K", u.K}}; },
                          [](const dist::Geometric& g) { return Json{{"type", "geometric"}, {"p", g.p}}; },
                          [](const dist::Zeta& z) { return Json{{"type", "zeta"}, {"s", z.s}}; },
                          [](const dist::GaussKuzmin&) { return Json{{"type", "gauss_kuzmin"}}; },
                      },
                      d.family());
}

Distribution dist_from_json(const Json& j)
{
    const auto& type = field(j, "type");
    if (!type.is_string())
        throw ConfigError("spec: dist type must be a string");
    const auto t = type.get<std::string>();
    try {
        if (t == "constant")
            return Distribution::constant(positive_integer(field(j, "a"), "a"));
        if (t == "uniform")
            return Distribution::uniform(positive_integer(field(j, "K"), "K"));
        if (t == "geometric")
            return Distribution::geometric(real(field(j, "p"), "p"));
        if (t == "zeta")
            return Distribution::zeta(real(field(j, "s"), "s"));
        if (t == "gauss_kuzmin")
            return Distribution::gauss_kuzmin();
    } catch (const DomainError& e) {
        throw ConfigError(std::string("spec: ") + e.what());
    }
    throw ConfigError("spec: unknown dist type \"" + t + "\"");
}

Json spec_to_json(const ProcessSpec& spec)
{
    return std::visit(overloaded{
                          [](const process::Iid& iid) { return Json{{"kind", "iid"}, {"dist", dist_to_json(iid.dist)}}; },
                          [](const process::Markov& m) {
                              return Json{{"kind", "markov"}, {"transition", m.transition}, {"initial", m.initial}};
                          },
                          [](const process::GaussStationary& g) {
                              return Json{{"kind", "gauss_stationary"}, {"precision_bits", g.precision_bits}};
                          },
                          [](const process::Explicit& e) { return Json{{"kind", "explicit"}, {"digits", e.digits}}; },
                      },
                      spec.kind());
}

ProcessSpec spec_from_json(const Json& j)
{
    const auto& kind = field(j, "kind");
    if (!kind.is_string())
        throw ConfigError("spec: kind must be a string");
    const auto k = kind.get<std::string>();
    try {
        if (k == "iid")
            return ProcessSpec::iid(dist_from_json(field(j, "dist")));
        if (k == "markov") {
            const auto& rows = field(j, "transition");
            if (!rows.is_array())
                throw ConfigError("spec: transition must be an array of rows");
            std::vector<std::vector<double>> transition;
            for (const auto& row : rows)
                transition.push_back(real_vector(row, "transition row"));
            std::vector<double> initial;
            if (j.contains("initial"))
                initial = real_vector(j.at("initial"), "initial");
            return ProcessSpec::markov(std::move(transition), std::move(initial));
        }
        if (k == "gauss_stationary") {
            unsigned bits = 256;
            if (j.contains("precision_bits"))
                bits = static_cast<unsigned>(positive_integer(j.at("precision_bits"), "precision_bits"));
            return ProcessSpec::gauss_stationary(bits);
        }
        if (k == "explicit") {
            const auto& ds = field(j, "digits");
            if (!ds.is_array())
                throw ConfigError("spec: digits must be an array");
            std::vector<Digit> digits;
            for (const auto& d : ds)
                digits.push_back(positive_integer(d, "digit"));
            return ProcessSpec::explicit_digits(std::move(digits));
        }
    } catch (const DomainError& e) {
        throw ConfigError(std::string("spec: ") + e.what());
    } catch (const LengthError& e) {
        throw ConfigError(std::string("spec: ") + e.what());
    }
    throw ConfigError("spec: unknown kind \"" + k + "\"");
}

ProcessSpec parse_spec(const std::string& text)
{
    Json j;
    try {
        j = Json::parse(text);
    } catch (const Json::parse_error& e) {
        throw ConfigError(std::string("spec: invalid JSON: ") + e.what());
    }
    return spec_from_json(j);
}

double round_sig(double x, int digits)
{
    if (!std::isfinite(x) || x == 0.0)
        return x;
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*g", digits, x);
    return std::strtod(buf, nullptr);
}

std::string format_number(double x)
{
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.9g", x);
    return buf;
}

} // namespace rcf
