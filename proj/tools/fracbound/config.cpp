#include "config.hpp"

#include "fracbound/error.hpp"

#include <cmath>
#include <fstream>
#include <limits>

namespace fracbound::app {

using nlohmann::json;

[[noreturn]] void fail(const std::string& where, const std::string& what) {
    throw ConfigError(where.empty() ? what : where + ": " + what);
}

Section::Section(const json& node, std::string path) : node_(node), path_(std::move(path)) {
    if (!node_.is_object()) fail(path_, "expected an object");
}

bool Section::has(const std::string& key) const { return node_.contains(key); }

const json& Section::raw(const std::string& key) {
    if (!node_.contains(key)) fail(path_, "missing key '" + key + "'");
    used_.insert(key);
    return node_.at(key);
}

Section Section::child(const std::string& key) { return Section(raw(key), path_.empty() ? key : path_ + "." + key); }

double Section::number(const std::string& key) {
    const json& v = raw(key);
    if (!v.is_number()) fail(path_, "'" + key + "' must be a number");
    const double d = v.get<double>();
    if (!std::isfinite(d)) fail(path_, "'" + key + "' must be finite");
    return d;
}

double Section::number(const std::string& key, double fallback) { return has(key) ? number(key) : fallback; }

double Section::positive(const std::string& key) {
    const double d = number(key);
    if (!(d > 0.0)) fail(path_, "'" + key + "' must be > 0");
    return d;
}

double Section::positive(const std::string& key, double fallback) { return has(key) ? positive(key) : fallback; }

std::uint64_t Section::count(const std::string& key) {
    const json& v = raw(key);
    if (!v.is_number_integer() || (v.is_number_integer() && !v.is_number_unsigned() && v.get<long long>() < 0)) {
        fail(path_, "'" + key + "' must be a nonnegative integer");
    }
    return v.get<std::uint64_t>();
}

std::uint64_t Section::count(const std::string& key, std::uint64_t fallback) {
    return has(key) ? count(key) : fallback;
}

std::string Section::text(const std::string& key) {
    const json& v = raw(key);
    if (!v.is_string()) fail(path_, "'" + key + "' must be a string");
    return v.get<std::string>();
}

std::string Section::text(const std::string& key, const std::string& fallback) {
    return has(key) ? text(key) : fallback;
}

bool Section::flag(const std::string& key, bool fallback) {
    if (!has(key)) return fallback;
    const json& v = raw(key);
    if (!v.is_boolean()) fail(path_, "'" + key + "' must be true or false");
    return v.get<bool>();
}

std::vector<double> Section::numbers(const std::string& key) {
    return parse_grid(raw(key), path_.empty() ? key : path_ + "." + key);
}

void Section::finish() const {
    for (const auto& item : node_.items()) {
        if (!used_.count(item.key())) fail(path_, "unknown key '" + item.key() + "'");
    }
}

json load_json(const std::string& file) {
    std::ifstream in(file);
    if (!in) throw ConfigError("cannot open config file '" + file + "'");
    try {
        return json::parse(in);
    } catch (const json::parse_error& e) {
        throw ConfigError("config file '" + file + "' is not valid JSON: " + e.what());
    }
}

namespace {

std::vector<double> number_list(const json& node, const std::string& where) {
    if (!node.is_array()) fail(where, "expected an array of numbers");
    std::vector<double> out;
    for (const auto& v : node) {
        if (!v.is_number()) fail(where, "expected an array of numbers");
        out.push_back(v.get<double>());
        if (!std::isfinite(out.back())) fail(where, "numbers must be finite");
    }
    return out;
}

MultiIndex parse_index(const json& node, const std::string& where, const BoxDomain& dom) {
    if (!node.is_array() || node.size() != dom.dims()) fail(where, "index must list one entry per axis");
    MultiIndex n{};
    for (std::size_t i = 0; i < node.size(); ++i) {
        if (!node[i].is_number_integer() || node[i].get<long long>() < 1) fail(where, "index entries must be integers >= 1");
        n[i] = node[i].get<unsigned>();
    }
    return n;
}

}  // namespace

std::vector<double> parse_grid(const json& node, const std::string& where) {
    if (node.is_array()) return number_list(node, where);
    if (node.is_number()) return {node.get<double>()};
    Section s(node, where);
    const double start = s.number("start");
    const double stop = s.number("stop");
    const auto n = s.count("count");
    s.finish();
    if (n == 0) fail(where, "'count' must be >= 1");
    if (n == 1) return {start};
    std::vector<double> out(n);
    for (std::size_t i = 0; i < n; ++i) {
        out[i] = start + (stop - start) * static_cast<double>(i) / static_cast<double>(n - 1);
    }
    out.back() = stop;
    return out;
}

Point parse_point(const json& node, const std::string& where, const BoxDomain& dom) {
    const auto xs = node.is_number() ? std::vector<double>{node.get<double>()} : number_list(node, where);
    if (xs.size() != dom.dims()) fail(where, "point must have one coordinate per axis");
    Point p{};
    for (std::size_t i = 0; i < xs.size(); ++i) p[i] = xs[i];
    return p;
}

std::vector<Point> parse_points(const json& node, const std::string& where, const BoxDomain& dom) {
    std::vector<Point> out;
    if (node.is_array()) {
        for (std::size_t i = 0; i < node.size(); ++i) {
            out.push_back(parse_point(node[i], where + "[" + std::to_string(i) + "]", dom));
        }
        if (out.empty()) fail(where, "need at least one point");
        return out;
    }
    Section s(node, where);
    const json& counts = s.raw("counts");
    s.finish();
    if (!counts.is_array() || counts.size() != dom.dims()) fail(where, "'counts' needs one entry per axis");
    std::array<std::size_t, kMaxDims> n{1, 1, 1};
    for (std::size_t i = 0; i < dom.dims(); ++i) {
        if (!counts[i].is_number_integer() || counts[i].get<long long>() < 2) fail(where, "'counts' entries must be >= 2");
        n[i] = counts[i].get<std::size_t>();
    }
    for (std::size_t a = 0; a < n[0]; ++a) {
        for (std::size_t b = 0; b < n[1]; ++b) {
            for (std::size_t c = 0; c < n[2]; ++c) {
                const std::array<std::size_t, kMaxDims> k{a, b, c};
                Point p{};
                for (std::size_t i = 0; i < dom.dims(); ++i) {
                    p[i] = dom.side(i) * static_cast<double>(k[i]) / static_cast<double>(n[i] - 1);
                }
                out.push_back(p);
            }
        }
    }
    return out;
}

BoxDomain parse_domain(Section s) {
    const auto sides = s.numbers("sides");
    s.finish();
    try {
        return BoxDomain(sides);
    } catch (const DomainError& e) {
        fail(s.path(), e.what());
    }
}

InitialDatum parse_datum(Section s, const BoxDomain& dom) {
    const std::string type = s.text("type");
    try {
        if (type == "zero") {
            s.finish();
            return InitialDatum::zero();
        }
        if (type == "eigenmode" || type == "modes") {
            const bool normalized = s.flag("normalized", true);
            double unit = 1.0;
            if (!normalized) {
                for (double m : dom.sides()) unit *= std::sqrt(m / 2.0);
            }
            std::vector<std::pair<MultiIndex, double>> terms;
            if (type == "eigenmode") {
                terms.emplace_back(parse_index(s.raw("index"), s.path() + ".index", dom), s.number("amplitude", 1.0) * unit);
            } else {
                const json& list = s.raw("terms");
                if (!list.is_array() || list.empty()) fail(s.path(), "'terms' must be a nonempty array");
                for (std::size_t i = 0; i < list.size(); ++i) {
                    Section t(list[i], s.path() + ".terms[" + std::to_string(i) + "]");
                    const MultiIndex n = parse_index(t.raw("index"), t.path() + ".index", dom);
                    terms.emplace_back(n, t.number("amplitude") * unit);
                    t.finish();
                }
            }
            s.finish();
            return InitialDatum::modes(std::move(terms));
        }
        if (type == "bump") {
            const Point c = parse_point(s.raw("center"), s.path() + ".center", dom);
            const double w = s.positive("width");
            s.finish();
            return InitialDatum::bump(c, w);
        }
        if (type == "indicator") {
            const Point lo = parse_point(s.raw("lower"), s.path() + ".lower", dom);
            const Point hi = parse_point(s.raw("upper"), s.path() + ".upper", dom);
            s.finish();
            InitialDatum f = InitialDatum::indicator(lo, hi);
            f.validate(dom);
            return f;
        }
        if (type == "tabulated") {
            const json& axes_node = s.raw("axes");
            if (!axes_node.is_array()) fail(s.path(), "'axes' must be an array of arrays");
            std::vector<std::vector<double>> axes;
            for (const auto& ax : axes_node) axes.push_back(number_list(ax, s.path() + ".axes"));
            auto values = number_list(s.raw("values"), s.path() + ".values");
            s.finish();
            InitialDatum f = InitialDatum::tabulated(std::move(axes), std::move(values));
            f.validate(dom);
            return f;
        }
    } catch (const DomainError& e) {
        fail(s.path(), e.what());
    }
    fail(s.path(), "unknown initial datum type '" + type + "'");
}

MixingMeasure parse_measure(Section s) {
    std::vector<Atom> atoms;
    if (s.has("atoms")) {
        const json& list = s.raw("atoms");
        if (!list.is_array()) fail(s.path(), "'atoms' must be an array");
        for (std::size_t i = 0; i < list.size(); ++i) {
            Section a(list[i], s.path() + ".atoms[" + std::to_string(i) + "]");
            const double beta = a.number("beta");
            if (!(beta > 0.0 && beta < 1.0)) fail(a.path(), "'beta' must lie in (0, 1)");
            if (a.has("weight") == a.has("scale")) fail(a.path(), "give exactly one of 'weight' or 'scale'");
            const double weight = a.has("weight") ? a.positive("weight")
                                                  : std::pow(a.positive("scale"), beta) / std::tgamma(1.0 - beta);
            a.finish();
            atoms.push_back({beta, weight});
        }
    }
    std::optional<DensityComponent> density;
    try {
        if (s.has("density")) {
            Section d = s.child("density");
            if (d.has("nodes")) {
                const json& nodes = d.raw("nodes");
                if (!nodes.is_array()) fail(d.path(), "'nodes' must be an array of [beta, p] pairs");
                std::vector<std::pair<double, double>> pts;
                for (const auto& n : nodes) {
                    const auto pair = number_list(n, d.path() + ".nodes");
                    if (pair.size() != 2) fail(d.path(), "'nodes' entries must be [beta, p] pairs");
                    pts.emplace_back(pair[0], pair[1]);
                }
                density = DensityComponent::tabulated(std::move(pts));
            } else {
                const double b0 = d.number("beta0");
                const double b1 = d.number("beta1");
                if (d.has("coefficients")) {
                    density = DensityComponent::polynomial(b0, b1, number_list(d.raw("coefficients"), d.path()));
                } else {
                    density = DensityComponent::constant(b0, b1, d.positive("value"));
                }
            }
            d.finish();
        }
        s.finish();
        return MixingMeasure(std::move(atoms), std::move(density));
    } catch (const DomainError& e) {
        fail(s.path(), e.what());
    }
}

HRoute parse_route_name(const std::string& where, const std::string& name) {
    try {
        return parse_route(name);
    } catch (const DomainError&) {
        fail(where, "unknown route '" + name + "' (auto, mittag-leffler, kochubei-integral, laplace-inversion)");
    }
}

InversionMethod parse_inversion(const std::string& where, const std::string& name) {
    if (name == "talbot") return InversionMethod::Talbot;
    if (name == "gaver-stehfest") return InversionMethod::GaverStehfest;
    fail(where, "unknown inversion '" + name + "' (talbot, gaver-stehfest)");
}

}  // namespace fracbound::app
