#include "confrec/ifs_json.hpp"

#include "confrec/errors.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

namespace confrec {

namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& field, const std::string& what)
{
    throw ValidationError(field + ": " + what);
}

void reject_unknown(const json& obj, const std::string& where, const std::set<std::string>& allowed)
{
    for (const auto& [key, value] : obj.items()) {
        (void)value;
        if (!allowed.count(key)) fail(where.empty() ? key : where + "." + key, "unknown field");
    }
}

double number(const json& obj, const std::string& key, const std::string& where)
{
    const std::string field = where.empty() ? key : where + "." + key;
    if (!obj.contains(key)) fail(field, "missing field");
    const json& v = obj.at(key);
    if (!v.is_number()) fail(field, "expected a number");
    const double x = v.get<double>();
    if (!std::isfinite(x)) fail(field, "expected a finite number");
    return x;
}

std::size_t line_of(std::string_view text, std::size_t byte)
{
    byte = std::min(byte, text.size());
    return 1 + static_cast<std::size_t>(std::count(text.begin(), text.begin() + static_cast<std::ptrdiff_t>(byte), '\n'));
}

MapDesc parse_map(const json& m, int dim, const std::string& where)
{
    if (!m.is_object()) fail(where, "expected an object");
    if (!m.contains("kind") || !m.at("kind").is_string()) fail(where + ".kind", "expected \"similarity\" or \"moebius\"");
    const std::string kind = m.at("kind").get<std::string>();

    if (kind == "similarity") {
        reject_unknown(m, where, {"kind", "ratio", "translation", "orthogonal"});
        Similarity s;
        s.ratio = number(m, "ratio", where);
        if (m.contains("translation")) {
            const json& t = m.at("translation");
            if (dim == 1) {
                if (!t.is_number()) fail(where + ".translation", "expected a number");
                s.translation = {t.get<double>(), 0.0};
            } else {
                if (!t.is_array() || t.size() != 2 || !t[0].is_number() || !t[1].is_number()) {
                    fail(where + ".translation", "expected [x, y]");
                }
                s.translation = {t[0].get<double>(), t[1].get<double>()};
            }
        } else {
            fail(where + ".translation", "missing field");
        }
        if (m.contains("orthogonal")) {
            const json& o = m.at("orthogonal");
            if (dim == 1) {
                if (!o.is_number()) fail(where + ".orthogonal", "expected +1 or -1");
                s.orthogonal = {o.get<double>(), 0.0, 0.0, 1.0};
            } else {
                if (!o.is_array() || o.size() != 2) fail(where + ".orthogonal", "expected [[a, b], [c, d]]");
                for (std::size_t r = 0; r < 2; ++r) {
                    if (!o[r].is_array() || o[r].size() != 2 || !o[r][0].is_number() || !o[r][1].is_number()) {
                        fail(where + ".orthogonal", "expected [[a, b], [c, d]]");
                    }
                    s.orthogonal[2 * r] = o[r][0].get<double>();
                    s.orthogonal[2 * r + 1] = o[r][1].get<double>();
                }
            }
        }
        return s;
    }
    if (kind == "moebius") {
        reject_unknown(m, where, {"kind", "a", "b", "c", "d"});
        return Moebius{number(m, "a", where), number(m, "b", where), number(m, "c", where), number(m, "d", where)};
    }
    fail(where + ".kind", "unknown map kind \"" + kind + "\"");
}

} // namespace

IfsSpec parse_ifs_json(std::string_view text)
{
    json doc;
    try {
        doc = json::parse(text.begin(), text.end());
    } catch (const json::parse_error& e) {
        throw ValidationError("line " + std::to_string(line_of(text, e.byte == 0 ? 0 : e.byte - 1)) + ": " + e.what());
    }
    if (!doc.is_object()) fail("(document)", "expected a JSON object");
    reject_unknown(doc, "", {"alphabet", "dim", "maps", "holder_alpha", "holder_c", "osc", "domain", "margin"});

    if (!doc.contains("alphabet") || !doc.at("alphabet").is_number_integer()) fail("alphabet", "expected an integer");
    const auto alphabet = doc.at("alphabet").get<long long>();
    if (!doc.contains("dim") || !doc.at("dim").is_number_integer()) fail("dim", "expected an integer");
    const auto dim = doc.at("dim").get<long long>();
    if (dim != 1 && dim != 2) fail("dim", "must be 1 or 2");
    if (!doc.contains("maps") || !doc.at("maps").is_array()) fail("maps", "expected an array");
    const json& maps = doc.at("maps");
    if (alphabet < 1) fail("alphabet", "must be positive");
    if (static_cast<long long>(maps.size()) != alphabet) {
        fail("alphabet", "is " + std::to_string(alphabet) + " but " + std::to_string(maps.size()) + " maps are given");
    }

    IfsOptions opt;
    opt.holder_alpha = number(doc, "holder_alpha", "");
    if (doc.contains("holder_c")) opt.holder_c = number(doc, "holder_c", "");
    if (doc.contains("osc")) {
        if (!doc.at("osc").is_boolean()) fail("osc", "expected true or false");
        opt.osc_declared = doc.at("osc").get<bool>();
    }
    if (doc.contains("margin")) opt.v_margin = number(doc, "margin", "");
    if (doc.contains("domain")) {
        const json& d = doc.at("domain");
        if (!d.is_array() || d.size() != 2 || !d[0].is_number() || !d[1].is_number()) fail("domain", "expected [lo, hi]");
        opt.domain = Interval{d[0].get<double>(), d[1].get<double>()};
    }

    std::vector<MapDesc> descs;
    for (std::size_t i = 0; i < maps.size(); ++i) {
        descs.push_back(parse_map(maps[i], static_cast<int>(dim), "maps[" + std::to_string(i) + "]"));
    }
    return IfsSpec::build(static_cast<int>(dim), std::move(descs), opt);
}

IfsSpec load_ifs_json(const std::string& path)
{
    std::ifstream in(path);
    if (!in) throw ValidationError(path + ": cannot open file");
    std::ostringstream ss;
    ss << in.rdbuf();
    try {
        return parse_ifs_json(ss.str());
    } catch (const ValidationError& e) {
        throw ValidationError(path + ": " + e.what());
    }
}

} // namespace confrec
