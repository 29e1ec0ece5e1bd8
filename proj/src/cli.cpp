#include "confrec/cli.hpp"

#include "confrec/dimension.hpp"
#include "confrec/errors.hpp"
#include "confrec/experiments.hpp"
#include "confrec/ifs_json.hpp"
#include "confrec/kernels.hpp"
#include "confrec/recurrence_sets.hpp"
#include "confrec/report.hpp"

#include <CLI11.hpp>

#include <optional>
#include <ostream>
#include <sstream>

namespace confrec::cli {

namespace {

using nlohmann::json;

struct Config {
    std::string ifs_path;
    std::string phi = "power:c=1,a=1";
    std::optional<double> gamma;
    std::optional<int> depth;
    int Q = 10;
    std::size_t points = 10000;
    std::size_t L = 64;
    std::uint64_t seed = 1;
    std::string root;
    std::string out;
    int threads = 0;
    int N = 10;
    int span = 10;
    std::optional<std::size_t> block;
    std::string windows = "1:10,15:25";
    std::optional<double> s;
    double tol = 1e-10;
};

struct Outputs {
    CsvTable csv;
    json doc;
    std::optional<CsvTable> points;
};

int default_depth(const IfsSpec& ifs) { return ifs.all_similarity() ? 1 : 12; }

GammaResult gamma_of(const IfsSpec& ifs, const Config& c)
{
    return solve_gamma(ifs, c.tol, c.depth.value_or(default_depth(ifs)));
}

double gamma_value(const IfsSpec& ifs, const Config& c)
{
    if (c.gamma) {
        if (!(*c.gamma > 0.0)) throw ValidationError("--gamma must be positive");
        return *c.gamma;
    }
    return gamma_of(ifs, c).gamma.mid();
}

json ifs_summary(const IfsSpec& ifs)
{
    json j;
    j["alphabet"] = ifs.alphabet_size();
    j["dim"] = ifs.dim();
    j["all_similarity"] = ifs.all_similarity();
    j["osc_declared"] = ifs.osc_declared();
    j["hull_x"] = to_json(ifs.hull().x);
    j["hull_y"] = to_json(ifs.hull().y);
    j["diameter"] = to_json(ifs.diameter());
    j["max_sup_derivative"] = ifs.max_sup_derivative();
    j["distortion_constant"] = ifs.distortion_constant();
    return j;
}

Outputs cmd_dim(const IfsSpec& ifs, const Config& c)
{
    const GammaResult g = gamma_of(ifs, c);
    Outputs o{CsvTable({"gamma_lo", "gamma_hi", "gamma_mid", "width", "method", "depth"}), report_header("dim"), {}};
    o.csv.add({fmt(g.gamma.lo), fmt(g.gamma.hi), fmt(g.gamma.mid()), fmt(g.gamma.width()), to_string(g.method),
               std::to_string(g.depth_used)});
    o.doc["gamma"] = to_json(g.gamma);
    o.doc["gamma_mid"] = g.gamma.mid();
    o.doc["method"] = to_string(g.method);
    o.doc["depth_used"] = g.depth_used;
    o.doc["ifs"] = ifs_summary(ifs);
    return o;
}

Outputs cmd_pressure(const IfsSpec& ifs, const Config& c)
{
    const int depth = c.depth.value_or(8);
    const double s = c.s ? *c.s : gamma_value(ifs, c);
    Outputs o{CsvTable({"depth", "s", "value_lower", "value_upper", "partition_sum_lo", "partition_sum_hi"}),
              report_header("pressure"), {}};
    o.doc["s"] = s;
    json rows = json::array();
    for (int n = 1; n <= depth; ++n) {
        const PressureEstimate p = pressure_estimate(ifs, s, n);
        o.csv.add({std::to_string(n), fmt(s), fmt(p.value_lower), fmt(p.value_upper), fmt(p.partition_sum.lo),
                   fmt(p.partition_sum.hi)});
        rows.push_back({{"depth", n},
                        {"value_lower", p.value_lower},
                        {"value_upper", p.value_upper},
                        {"partition_sum", to_json(p.partition_sum)}});
    }
    o.doc["rows"] = rows;
    return o;
}

std::pair<int, int> parse_window(const std::string& w)
{
    const auto colon = w.find(':');
    try {
        if (colon == std::string::npos) throw std::invalid_argument(w);
        return {std::stoi(w.substr(0, colon)), std::stoi(w.substr(colon + 1))};
    } catch (const std::exception&) {
        throw ValidationError("--windows expects lo:hi,lo:hi");
    }
}

Outputs cmd_recur(const IfsSpec& ifs, const Config& c)
{
    DichotomyConfig dc;
    dc.gamma = gamma_value(ifs, c);
    dc.points = c.points;
    dc.length = c.L;
    dc.n_max = c.Q;
    dc.seed = c.seed;
    dc.block = c.block.value_or(ifs.all_similarity() ? 1 : 4);
    dc.band_hi = c.Q;
    const auto comma = c.windows.find(',');
    if (comma == std::string::npos) throw ValidationError("--windows expects lo:hi,lo:hi");
    std::tie(dc.early_lo, dc.early_hi) = parse_window(c.windows.substr(0, comma));
    std::tie(dc.late_lo, dc.late_hi) = parse_window(c.windows.substr(comma + 1));
    if (dc.length % dc.block != 0) throw ValidationError("--L must be a multiple of --block");

    const RateFunction phi = RateFunction::parse(c.phi, dc.gamma);
    const DichotomyReport rep = run_dichotomy(ifs, phi, dc);

    Outputs o{CsvTable({"n", "empirical_hit_rate", "unknown_rate", "phi_gamma", "rate_ratio", "mean_cumulative_hits"}),
              report_header("recur"), CsvTable({"sample", "hit_count", "first_hit"})};
    for (const DichotomyRow& r : rep.rows) {
        o.csv.add({std::to_string(r.n), fmt(r.empirical_hit_rate), fmt(r.unknown_rate), fmt(r.phi_gamma),
                   fmt(r.rate_ratio), fmt(r.mean_cumulative_hits)});
    }
    for (const DichotomyPoint& p : rep.points) {
        o.points->add({std::to_string(p.index), std::to_string(p.hit_count), std::to_string(p.first_hit)});
    }
    const DichotomySummary& s = rep.summary;
    o.doc["config"] = {{"gamma", dc.gamma}, {"points", dc.points}, {"L", dc.length}, {"n_max", dc.n_max},
                       {"seed", dc.seed},   {"block", dc.block},   {"phi", rep.phi}};
    o.doc["summary"] = {{"divergent", s.divergent},
                        {"summability", s.summability},
                        {"window_early", {dc.early_lo, dc.early_hi}},
                        {"window_late", {dc.late_lo, dc.late_hi}},
                        {"fraction_with_hit_early", s.fraction_with_hit_early},
                        {"fraction_with_hit_late", s.fraction_with_hit_late},
                        {"unknown_fraction", s.unknown_fraction},
                        {"unknown_flag", s.unknown_flag},
                        {"rate_ratio_band", {s.band_min, s.band_max}},
                        {"mean_total_hits", s.mean_total_hits}};
    return o;
}

const std::vector<std::string> kSeriesHeader{"n",         "nu_En",    "phi_gamma", "ratio",    "S",      "S2",
                                             "ce_lower",  "S_tilde",  "fitted_C",  "ratio_lo", "ratio_hi", "members"};

Outputs cmd_en(const IfsSpec& ifs, const Config& c)
{
    const double gamma = gamma_value(ifs, c);
    const RateFunction phi = RateFunction::parse(c.phi, gamma);
    const Word root = Word::parse(c.root);
    const auto rows = series_ratio(ifs, gamma, phi, root, c.Q);
    Outputs o{CsvTable(kSeriesHeader), report_header("en"), {}};
    double lo = std::numeric_limits<double>::infinity(), hi = 0.0;
    json jr = json::array();
    for (const SeriesRow& r : rows) {
        const std::size_t members = word_count(ifs.alphabet_size(), static_cast<std::size_t>(r.Q) - root.size(),
                                               ~std::uint64_t{0});
        o.csv.add({std::to_string(r.Q), fmt(r.nu_En.mid()), fmt(r.phi_gamma), fmt(r.ratio.mid()), fmt(r.S.mid()), "",
                   "", fmt(r.S_tilde), "", fmt(r.ratio.lo), fmt(r.ratio.hi), std::to_string(members)});
        jr.push_back({{"n", r.Q}, {"nu_En", to_json(r.nu_En)}, {"phi_gamma", r.phi_gamma}, {"S", to_json(r.S)},
                      {"S_tilde", r.S_tilde}, {"ratio", to_json(r.ratio)}});
        lo = std::min(lo, r.ratio.mid());
        hi = std::max(hi, r.ratio.mid());
    }
    o.doc["gamma"] = gamma;
    o.doc["phi"] = phi.describe();
    o.doc["root"] = root.to_string();
    o.doc["rows"] = jr;
    o.doc["ratio_band"] = {lo, hi};
    return o;
}

Outputs cmd_corr(const IfsSpec& ifs, const Config& c)
{
    const double gamma = gamma_value(ifs, c);
    const RateFunction phi = RateFunction::parse(c.phi, gamma);
    const Word root = Word::parse(c.root);
    const auto series = series_ratio(ifs, gamma, phi, root, c.Q);
    const SecondMomentReport rep = second_moment_report(ifs, gamma, phi, root, c.Q);
    Outputs o{CsvTable(kSeriesHeader), report_header("corr"), {}};
    json jr = json::array();
    for (std::size_t i = 0; i < rep.rows.size(); ++i) {
        const SeriesRow& s = series[i];
        const SecondMomentRow& r = rep.rows[i];
        const std::size_t members = word_count(ifs.alphabet_size(), static_cast<std::size_t>(r.Q) - root.size(),
                                               ~std::uint64_t{0});
        o.csv.add({std::to_string(r.Q), fmt(s.nu_En.mid()), fmt(s.phi_gamma), fmt(s.ratio.mid()), fmt(r.S.mid()),
                   fmt(r.S2.mid()), fmt(r.ce_lower.mid()), fmt(r.S_tilde), fmt(r.fitted_C.mid()), fmt(s.ratio.lo),
                   fmt(s.ratio.hi), std::to_string(members)});
        jr.push_back({{"n", r.Q},
                      {"S", to_json(r.S)},
                      {"S2", to_json(r.S2)},
                      {"ce_lower", to_json(r.ce_lower)},
                      {"S_tilde", r.S_tilde},
                      {"fitted_C", to_json(r.fitted_C)}});
    }
    o.doc["gamma"] = gamma;
    o.doc["phi"] = phi.describe();
    o.doc["root"] = root.to_string();
    o.doc["nu_root"] = to_json(rep.nu_root);
    o.doc["kappa"] = rep.kappa;
    o.doc["rows"] = jr;
    return o;
}

Outputs cmd_cover(const IfsSpec& ifs, const Config& c)
{
    const double gamma = gamma_value(ifs, c);
    const RateFunction phi = RateFunction::parse(c.phi, gamma);
    const CoveringTail t = covering_tail(ifs, gamma, phi, c.N, c.span);
    Outputs o{CsvTable({"N", "span", "K", "tail_lo", "tail_hi", "tail_mid"}), report_header("cover"), {}};
    o.csv.add({std::to_string(c.N), std::to_string(c.span), fmt(t.K), fmt(t.value.lo), fmt(t.value.hi),
               fmt(t.value.mid())});
    o.doc["gamma"] = gamma;
    o.doc["phi"] = phi.describe();
    o.doc["N"] = c.N;
    o.doc["span"] = c.span;
    o.doc["K"] = t.K;
    o.doc["tail"] = to_json(t.value);
    return o;
}

void emit(const Outputs& o, const Config& c, std::ostream& out)
{
    std::ostringstream csv;
    o.csv.write(csv);
    if (c.out.empty()) {
        out << csv.str();
        return;
    }
    write_text_file(c.out + ".csv", csv.str());
    write_text_file(c.out + ".json", o.doc.dump(2) + "\n");
    if (o.points) {
        std::ostringstream pts;
        o.points->write(pts);
        write_text_file(c.out + ".points.csv", pts.str());
    }
}

} // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err)
{
    CLI::App app{"Quantitative recurrence experiments for self-conformal sets", "confrec"};
    app.require_subcommand(1);
    Config c;

    auto common = [&c](CLI::App* sub) {
        sub->add_option("--ifs", c.ifs_path, "IFS JSON document")->required();
        sub->add_option("--gamma", c.gamma, "override the solved dimension");
        sub->add_option("--depth", c.depth, "pressure depth");
        sub->add_option("--tol", c.tol, "dimension tolerance");
        sub->add_option("--out", c.out, "write OUT.csv and OUT.json instead of CSV on stdout");
        sub->add_option("--threads", c.threads, "OpenMP threads (0 = default)");
    };
    auto* dim = app.add_subcommand("dim", "dimension gamma");
    common(dim);
    auto* pressure = app.add_subcommand("pressure", "pressure bounds for depths 1..depth");
    common(pressure);
    pressure->add_option("--s", c.s, "exponent (default: gamma)");
    auto* recur = app.add_subcommand("recur", "Monte Carlo orbit recurrence");
    common(recur);
    recur->add_option("--phi", c.phi, "rate function");
    recur->add_option("--points,--N", c.points, "number of sample points");
    recur->add_option("--L", c.L, "coding length");
    recur->add_option("--Q", c.Q, "largest time n");
    recur->add_option("--seed", c.seed, "RNG seed");
    recur->add_option("--block", c.block, "sampling block length");
    recur->add_option("--windows", c.windows, "hit windows lo:hi,lo:hi");
    auto* en = app.add_subcommand("en", "E_n measures and series ratios");
    common(en);
    auto* corr = app.add_subcommand("corr", "second moment and Chung-Erdos bound");
    common(corr);
    for (auto* sub : {en, corr}) {
        sub->add_option("--phi", c.phi, "rate function");
        sub->add_option("--Q", c.Q, "largest n");
        sub->add_option("--root", c.root, "root word J, e.g. 0,1");
    }
    auto* cover = app.add_subcommand("cover", "covering tail sum");
    common(cover);
    cover->add_option("--phi", c.phi, "rate function");
    cover->add_option("--N", c.N, "first n");
    cover->add_option("--span", c.span, "number of further terms");

    std::vector<const char*> argv{"confrec"};
    for (const auto& a : args) argv.push_back(a.c_str());
    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kOk : kValidation;
    }

    try {
        kernels::set_threads(c.threads);
        const IfsSpec ifs = load_ifs_json(c.ifs_path);
        Outputs o = [&] {
            if (dim->parsed()) return cmd_dim(ifs, c);
            if (pressure->parsed()) return cmd_pressure(ifs, c);
            if (recur->parsed()) return cmd_recur(ifs, c);
            if (en->parsed()) return cmd_en(ifs, c);
            if (corr->parsed()) return cmd_corr(ifs, c);
            return cmd_cover(ifs, c);
        }();
        emit(o, c, out);
        if (dim->parsed() && !c.out.empty()) {
            out << "gamma in [" << fmt(o.doc["gamma"][0].get<double>()) << ", " << fmt(o.doc["gamma"][1].get<double>())
                << "] method " << o.doc["method"].get<std::string>() << "\n";
        }
        return kOk;
    } catch (const ValidationError& e) {
        err << "error: " << e.what() << "\n";
        return kValidation;
    } catch (const DomainError& e) {
        err << "error: " << e.what() << "\n";
        return kValidation;
    } catch (const ResourceError& e) {
        err << "budget exceeded: " << e.what() << "\n";
        return kBudget;
    } catch (const BracketError& e) {
        err << "bracket failure: " << e.what() << "\n";
        return kBracket;
    } catch (const std::exception& e) {
        err << "internal error: " << e.what() << "\n";
        return kInternal;
    }
}

} // namespace confrec::cli
