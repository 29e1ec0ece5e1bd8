#include "confrec/rate.hpp"

#include "confrec/errors.hpp"

#include <cmath>
#include <fstream>
#include <map>
#include <sstream>

namespace confrec {

namespace {

void check_gamma(double gamma)
{
    if (!(gamma > 0.0) || !std::isfinite(gamma)) throw ValidationError("rate function needs gamma > 0");
}

std::map<std::string, double> parse_params(std::string_view body, std::string_view spec)
{
    std::map<std::string, double> out;
    std::size_t pos = 0;
    while (pos < body.size()) {
        const std::size_t end = std::min(body.find(',', pos), body.size());
        const std::string tok(body.substr(pos, end - pos));
        const std::size_t eq = tok.find('=');
        if (eq == std::string::npos) throw ValidationError("rate '" + std::string(spec) + "': expected key=value");
        const std::string key = tok.substr(0, eq);
        std::size_t used = 0;
        double v = 0.0;
        try {
            v = std::stod(tok.substr(eq + 1), &used);
        } catch (const std::exception&) {
            used = 0;
        }
        if (used == 0 || used != tok.size() - eq - 1) {
            throw ValidationError("rate '" + std::string(spec) + "': bad number for " + key);
        }
        out[key] = v;
        pos = end + 1;
    }
    return out;
}

std::vector<double> read_table(const std::string& path)
{
    std::ifstream in(path);
    if (!in) throw ValidationError("rate table: cannot open " + path);
    std::vector<double> values;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty() || line[0] == '#') continue;
        std::istringstream ss(line);
        std::string ncell, vcell;
        if (!std::getline(ss, ncell, ',') || !std::getline(ss, vcell)) {
            throw ValidationError(path + ":" + std::to_string(lineno) + ": expected n,phi");
        }
        if (values.empty() && ncell == "n") continue;
        try {
            const long n = std::stol(ncell);
            const double v = std::stod(vcell);
            if (n != static_cast<long>(values.size()) + 1) {
                throw ValidationError(path + ":" + std::to_string(lineno) + ": rows must be n = 1, 2, ...");
            }
            values.push_back(v);
        } catch (const ValidationError&) {
            throw;
        } catch (const std::exception&) {
            throw ValidationError(path + ":" + std::to_string(lineno) + ": expected n,phi");
        }
    }
    return values;
}

} // namespace

RateFunction RateFunction::power(double c, double a, double gamma)
{
    check_gamma(gamma);
    if (!(c > 0.0) || !std::isfinite(a)) throw ValidationError("power rate needs c > 0 and finite a");
    RateFunction r;
    r.family_ = Family::Power;
    r.c_ = c, r.a_ = a, r.gamma_ = gamma;
    return r;
}

RateFunction RateFunction::geometric(double rho, double gamma)
{
    check_gamma(gamma);
    if (!(rho > 0.0) || !std::isfinite(rho)) throw ValidationError("geometric rate needs rho > 0");
    RateFunction r;
    r.family_ = Family::Geometric;
    r.rho_ = rho, r.gamma_ = gamma;
    return r;
}

RateFunction RateFunction::log_corrected(double gamma)
{
    check_gamma(gamma);
    RateFunction r;
    r.family_ = Family::LogCorrected;
    r.gamma_ = gamma;
    return r;
}

RateFunction RateFunction::table(std::vector<double> values, double gamma)
{
    check_gamma(gamma);
    if (values.empty()) throw ValidationError("rate table is empty");
    for (double v : values) {
        if (!(v > 0.0) || !std::isfinite(v)) throw ValidationError("rate table values must be positive");
    }
    RateFunction r;
    r.family_ = Family::Table;
    r.table_ = std::move(values);
    r.gamma_ = gamma;
    return r;
}

RateFunction RateFunction::parse(std::string_view spec, double gamma)
{
    const std::size_t colon = spec.find(':');
    const std::string_view head = spec.substr(0, colon);
    const std::string_view body = colon == std::string_view::npos ? std::string_view{} : spec.substr(colon + 1);
    if (head == "power") {
        auto p = parse_params(body, spec);
        for (const auto& [k, v] : p) {
            (void)v;
            if (k != "c" && k != "a") throw ValidationError("rate '" + std::string(spec) + "': unknown key " + k);
        }
        return power(p.count("c") ? p["c"] : 1.0, p.count("a") ? p["a"] : 1.0, gamma);
    }
    if (head == "geom") {
        auto p = parse_params(body, spec);
        if (p.size() != 1 || !p.count("rho")) throw ValidationError("rate '" + std::string(spec) + "': expected rho=");
        return geometric(p["rho"], gamma);
    }
    if (head == "logcorr") {
        if (!body.empty()) throw ValidationError("rate 'logcorr' takes no parameters");
        return log_corrected(gamma);
    }
    if (head == "table") {
        if (body.empty() || body[0] != '@') throw ValidationError("rate table expects table:@file.csv");
        return table(read_table(std::string(body.substr(1))), gamma);
    }
    throw ValidationError("unknown rate family '" + std::string(spec) + "'");
}

double RateFunction::operator()(int n) const
{
    if (n < 1) throw DomainError("rate function defined for n >= 1");
    switch (family_) {
    case Family::Geometric:
        return std::pow(rho_, n);
    case Family::Table:
        if (n > max_n()) throw DomainError("rate table has no value for n = " + std::to_string(n));
        return table_[static_cast<std::size_t>(n - 1)];
    default:
        return std::pow(phi_gamma(n), 1.0 / gamma_);
    }
}

double RateFunction::phi_gamma(int n) const
{
    if (n < 1) throw DomainError("rate function defined for n >= 1");
    switch (family_) {
    case Family::Power:
        return c_ / std::pow(static_cast<double>(n), a_);
    case Family::Geometric:
        return std::pow(rho_, n * gamma_);
    case Family::LogCorrected:
        return 1.0 / (n * std::log(n + 1.0));
    case Family::Table:
        return std::pow((*this)(n), gamma_);
    }
    return 0.0;
}

bool RateFunction::divergent() const
{
    switch (family_) {
    case Family::Power:
        return a_ <= 1.0;
    case Family::Geometric:
        return rho_ >= 1.0;
    case Family::LogCorrected:
        return true;
    case Family::Table: {
        // Compare the last two complete dyadic blocks of phi^gamma.
        int k = 0;
        while ((2 << (k + 1)) - 1 <= max_n()) ++k;
        if (k < 1) return false;
        auto block = [this](int j) {
            double s = 0.0;
            for (int n = 1 << j; n < (2 << j); ++n) s += phi_gamma(n);
            return s;
        };
        return block(k) >= 0.75 * block(k - 1);
    }
    }
    return false;
}

std::string RateFunction::summability_note() const
{
    if (family_ != Family::Table) return divergent() ? "divergent" : "convergent";
    if (max_n() < 7) return "undetermined (table too short)";
    return divergent() ? "divergent (dyadic block heuristic)" : "convergent (dyadic block heuristic)";
}

std::string RateFunction::describe() const
{
    std::ostringstream ss;
    ss.precision(17);
    switch (family_) {
    case Family::Power:
        ss << "power:c=" << c_ << ",a=" << a_;
        break;
    case Family::Geometric:
        ss << "geom:rho=" << rho_;
        break;
    case Family::LogCorrected:
        ss << "logcorr";
        break;
    case Family::Table:
        ss << "table(" << table_.size() << " values)";
        break;
    }
    return ss.str();
}

} // namespace confrec
