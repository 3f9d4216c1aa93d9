#include "commands.hpp"

#include "config.hpp"
#include "output.hpp"

#include "fracbound/eigenbasis.hpp"
#include "fracbound/error.hpp"
#include "fracbound/fracops.hpp"
#include "fracbound/hkernel.hpp"
#include "fracbound/mixing.hpp"
#include "fracbound/montecarlo.hpp"
#include "fracbound/spectral.hpp"
#include "fracbound/subordinate.hpp"

#include "CLI11.hpp"
#include "json.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <functional>
#include <iostream>
#include <map>

#ifndef FRACBOUND_VERSION
#define FRACBOUND_VERSION "unknown"
#endif

namespace fracbound::app {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct Context {
    const Invocation& inv;
    const json& config;
    Section root;
    json metrics = json::object();
    json warnings = json::array();
    json outputs = json::array();
    std::optional<std::uint64_t> seed;
    Context(const Invocation& i, const json& c) : inv(i), config(c), root(c, "") {}

    fs::path file(const std::string& name) {
        outputs.push_back(name);
        return inv.out / name;
    }

    std::uint64_t require_seed() {
        if (!seed) throw ConfigError("a seed is required for '" + inv.command + "' (config key 'seed' or --seed)");
        return *seed;
    }
};

std::vector<std::string> point_header(const BoxDomain& dom) {
    if (dom.dims() == 1) return {"x"};
    std::vector<std::string> out;
    for (std::size_t i = 0; i < dom.dims(); ++i) out.push_back("x" + std::to_string(i + 1));
    return out;
}

void write_point(CsvWriter& csv, const BoxDomain& dom, const Point& p) {
    for (std::size_t i = 0; i < dom.dims(); ++i) csv << p[i];
}

std::vector<double> nonnegative_grid(Section& s, const std::string& key) {
    auto v = s.numbers(key);
    if (v.empty()) fail(s.path(), "'" + key + "' must not be empty");
    for (double x : v) {
        if (!(x >= 0.0)) fail(s.path(), "'" + key + "' entries must be >= 0");
    }
    return v;
}

std::vector<double> positive_grid(Section& s, const std::string& key) {
    auto v = nonnegative_grid(s, key);
    for (double x : v) {
        if (!(x > 0.0)) fail(s.path(), "'" + key + "' entries must be > 0");
    }
    return v;
}

HOptions kernel_options(Section& s) {
    HOptions h;
    h.inversion = parse_inversion("inversion", s.text("inversion", "talbot"));
    h.beta_nodes = s.count("beta_nodes", h.beta_nodes);
    if (h.beta_nodes == 0) fail(s.path(), "'beta_nodes' must be >= 1");
    return h;
}

Point interior_point(const json& node, const std::string& where, const BoxDomain& dom) {
    const Point p = parse_point(node, where, dom);
    if (!dom.contains(p)) fail(where, "point must lie strictly inside the domain");
    return p;
}

McOptions mc_options(Section& s, unsigned threads) {
    McOptions o;
    o.euler_step = s.positive("euler_step", o.euler_step);
    o.subordinator_step = s.positive("subordinator_step", o.subordinator_step);
    o.bridge_correction = s.flag("bridge", false);
    o.threads = threads;
    return o;
}

std::size_t path_count(Section& s, const std::string& key, std::size_t fallback, std::size_t minimum) {
    const auto n = s.count(key, fallback);
    if (n < minimum) fail(s.path(), "'" + key + "' must be >= " + std::to_string(minimum));
    return n;
}

// Samples on every face: corners and a coarse grid on each face.
std::vector<Point> boundary_points(const BoxDomain& dom, std::size_t per_axis = 5) {
    std::vector<Point> out;
    const std::size_t d = dom.dims();
    for (std::size_t face = 0; face < d; ++face) {
        for (double side : {0.0, dom.side(face)}) {
            std::array<std::size_t, kMaxDims> n{1, 1, 1};
            for (std::size_t i = 0; i < d; ++i) n[i] = i == face ? 1 : per_axis;
            for (std::size_t a = 0; a < n[0]; ++a) {
                for (std::size_t b = 0; b < n[1]; ++b) {
                    for (std::size_t c = 0; c < n[2]; ++c) {
                        const std::array<std::size_t, kMaxDims> k{a, b, c};
                        Point p{};
                        for (std::size_t i = 0; i < d; ++i) {
                            p[i] = i == face ? side
                                             : dom.side(i) * static_cast<double>(k[i]) / static_cast<double>(n[i] - 1);
                        }
                        out.push_back(p);
                    }
                }
            }
        }
    }
    return out;
}

// ---- solve-spectral --------------------------------------------------------

int solve_spectral(Context& c) {
    const BoxDomain dom = parse_domain(c.root.child("domain"));
    const InitialDatum f = parse_datum(c.root.child("initial"), dom);
    const MixingMeasure m = parse_measure(c.root.child("measure"));
    SpectralOptions opts;
    opts.route = parse_route_name("route", c.root.text("route", "auto"));
    opts.kernel = kernel_options(c.root);
    opts.threads = c.inv.threads;
    if (c.root.has("modes") == c.root.has("target_tail")) {
        throw ConfigError("give exactly one of 'modes' or 'target_tail'");
    }
    std::size_t modes = 0;
    if (c.root.has("modes")) {
        modes = c.root.count("modes");
        if (modes == 0) fail("", "'modes' must be >= 1");
    } else {
        const double target = c.root.positive("target_tail");
        const TruncationChoice choice = choose_truncation(dom, f, target);
        modes = choice.count;
        c.metrics["truncation_fit"] = {{"k", choice.fit.k}, {"c", choice.fit.c}, {"estimated_tail", choice.estimated_tail},
                                       {"classical_threshold", choice.classical_threshold}};
        if (!choice.warning.empty()) c.warnings.push_back(choice.warning);
    }
    const auto times = nonnegative_grid(c.root, "times");
    const auto points = parse_points(c.root.raw("points"), "points", dom);
    c.root.finish();

    const SpectralSolution sol(dom, f, m, modes, opts);
    const SolutionField field = evaluate_field(sol, times, points);

    auto header = std::vector<std::string>{"t"};
    for (auto& h : point_header(dom)) header.push_back(h);
    header.insert(header.end(), {"u", "err"});
    CsvWriter csv(c.file("solution.csv"), header);
    for (std::size_t i = 0; i < times.size(); ++i) {
        for (std::size_t j = 0; j < points.size(); ++j) {
            csv << times[i];
            write_point(csv, dom, points[j]);
            csv << field.value(i, j) << field.error(i, j);
            csv.end_row();
        }
    }

    json norms = json::array();
    for (double t : times) norms.push_back({{"t", t}, {"l2_norm", t == 0.0 ? std::sqrt(sol.coefficients().norm_sq) : sol.l2_norm(t)}});
    c.metrics["modes"] = modes;
    c.metrics["route"] = std::string(to_string(sol.kernel().route()));
    c.metrics["probe_discrepancy"] = sol.kernel().probe_discrepancy();
    c.metrics["tail_bound"] = sol.tail_bound();
    c.metrics["parseval_residual"] = sol.coefficients().parseval_residual;
    c.metrics["classical"] = sol.classical();
    c.metrics["l2_norms"] = norms;
    if (!sol.warning().empty()) c.warnings.push_back(sol.warning());
    return kExitOk;
}

// ---- solve-mc --------------------------------------------------------------

int solve_mc(Context& c) {
    const BoxDomain dom = parse_domain(c.root.child("domain"));
    const InitialDatum f = parse_datum(c.root.child("initial"), dom);
    const MixingMeasure m = parse_measure(c.root.child("measure"));
    const auto times = nonnegative_grid(c.root, "times");
    const json& pts = c.root.raw("points");
    if (!pts.is_array() || pts.empty()) fail("points", "expected a nonempty array of interior points");
    std::vector<Point> points;
    for (std::size_t i = 0; i < pts.size(); ++i) points.push_back(interior_point(pts[i], "points[" + std::to_string(i) + "]", dom));
    const std::size_t paths = path_count(c.root, "paths", 10000, 100);
    const McOptions opts = mc_options(c.root, c.inv.threads);
    const std::size_t levels = path_count(c.root, "levels", 32, 1);
    c.root.finish();
    const std::uint64_t seed = c.require_seed();
    const SubordinatorSpec spec = SubordinatorSpec::from_measure(m, levels);

    auto header = std::vector<std::string>{"t"};
    for (auto& h : point_header(dom)) header.push_back(h);
    header.insert(header.end(), {"mean", "se", "paths"});
    CsvWriter csv(c.file("mc.csv"), header);
    std::uint64_t job = 0;
    for (double t : times) {
        for (const Point& x : points) {
            const MCEstimate e = estimate_u(dom, f, spec, t, x, paths, derive_seed(seed, 1000 + job++), opts);
            csv << t;
            write_point(csv, dom, x);
            csv << e.mean << e.se << static_cast<std::uint64_t>(e.paths);
            csv.end_row();
        }
    }
    c.metrics["components"] = spec.components().size();
    c.metrics["euler_step"] = opts.euler_step;
    c.metrics["subordinator_step"] = opts.subordinator_step;
    c.metrics["bridge_correction"] = opts.bridge_correction;
    return kExitOk;
}

// ---- eval-h ----------------------------------------------------------------

int eval_h(Context& c) {
    const MixingMeasure m = parse_measure(c.root.child("measure"));
    const HRoute route = parse_route_name("route", c.root.text("route", "auto"));
    HOptions opts = kernel_options(c.root);
    const auto ts = nonnegative_grid(c.root, "t");
    const auto lambdas = nonnegative_grid(c.root, "lambda");
    c.root.finish();
    const HEvaluator ev(m, route, opts);
    CsvWriter csv(c.file("h.csv"), {"t", "lambda", "h", "route", "est_error"});
    for (double t : ts) {
        for (double lambda : lambdas) {
            const HValue v = ev.evaluate(t, lambda);
            csv << t << lambda << v.value << to_string(v.route) << v.est_error;
            csv.end_row();
            if (v.fell_back) c.warnings.push_back("Gaver-Stehfest rejected at t = " + format_number(t) + ", lambda = " +
                                                  format_number(lambda) + "; Talbot used");
        }
    }
    c.metrics["route"] = std::string(to_string(ev.route()));
    c.metrics["probe_discrepancy"] = ev.probe_discrepancy();
    return kExitOk;
}

// ---- sample-subordinator ---------------------------------------------------

SubordinatorSpec parse_spec(Section& root) {
    if (root.has("components") == root.has("measure")) {
        throw ConfigError("give exactly one of 'components' or 'measure'");
    }
    if (root.has("components")) {
        const json& list = root.raw("components");
        if (!list.is_array() || list.empty()) fail("components", "expected a nonempty array");
        std::vector<StableComponent> comps;
        for (std::size_t i = 0; i < list.size(); ++i) {
            Section s(list[i], "components[" + std::to_string(i) + "]");
            const double beta = s.number("beta");
            if (!(beta > 0.0 && beta < 1.0)) fail(s.path(), "'beta' must lie in (0, 1)");
            comps.push_back({beta, s.positive("scale", 1.0)});
            s.finish();
        }
        return SubordinatorSpec(std::move(comps));
    }
    const MixingMeasure m = parse_measure(root.child("measure"));
    return SubordinatorSpec::from_measure(m, path_count(root, "levels", 32, 1));
}

int sample_subordinator(Context& c) {
    const SubordinatorSpec spec = parse_spec(c.root);
    const double horizon = c.root.positive("horizon", 1.0);
    const double step = c.root.positive("step", 1e-3);
    if (step > horizon) fail("step", "must not exceed 'horizon'");
    const std::size_t paths = path_count(c.root, "paths", 10000, 2);
    const auto s_values = c.root.has("s") ? nonnegative_grid(c.root, "s") : std::vector<double>{0.5, 1.0, 2.0};
    const std::size_t export_paths = c.root.count("export_paths", 0);
    std::optional<Section> g;
    if (c.root.has("g")) g.emplace(c.root.child("g"));
    c.root.finish();
    const std::uint64_t seed = c.require_seed();

    const auto rows = laplace_table(spec, horizon, s_values, paths, step, seed, c.inv.threads);
    CsvWriter lap(c.file("laplace.csv"), {"s", "empirical", "se", "exact", "z"});
    json table = json::array();
    for (const auto& r : rows) {
        lap << r.s << r.empirical.mean << r.empirical.se << r.exact << r.z;
        lap.end_row();
        table.push_back({{"s", r.s}, {"empirical", r.empirical.mean}, {"se", r.empirical.se}, {"exact", r.exact}, {"z", r.z}});
    }
    c.metrics["laplace"] = table;

    if (export_paths > 0) {
        // Same streams as the Laplace table, so the exported paths are the ones used there.
        CsvWriter out(c.file("paths.csv"), {"path", "k", "tau", "w"});
        const std::uint64_t stream_seed = derive_seed(seed, 1);
        for (std::size_t i = 0; i < std::min(export_paths, paths); ++i) {
            RandomStream rng(stream_seed, i);
            const SubordinatorPath p = sample_path(spec, horizon, step, rng);
            for (std::size_t k = 0; k < p.values.size(); ++k) {
                out << static_cast<std::uint64_t>(i) << static_cast<std::uint64_t>(k) << p.time(k) << p.values[k];
                out.end_row();
            }
        }
    }

    if (g) {
        const double t = g->positive("t", 1.0);
        const std::size_t bins = path_count(*g, "bins", 50, 1);
        const double range = g->number("range", 0.0);
        if (range < 0.0) fail(g->path(), "'range' must be >= 0");
        const auto lambdas = g->has("lambda") ? nonnegative_grid(*g, "lambda") : std::vector<double>{1.0};
        g->finish();
        const GEstimate est = estimate_g(spec, t, paths, step, seed, c.inv.threads, bins, range);
        CsvWriter out(c.file("g.csv"), {"x_lo", "x_hi", "density", "band"});
        for (std::size_t b = 0; b < est.density.size(); ++b) {
            out << est.edges[b] << est.edges[b + 1] << est.density[b] << est.band[b];
            out.end_row();
        }
        json plug = json::array();
        for (double lambda : lambdas) {
            const MeanEstimate s = est.sample_laplace(lambda);
            plug.push_back({{"lambda", lambda}, {"histogram", est.laplace(lambda)}, {"sample_mean", s.mean}, {"se", s.se}});
        }
        c.metrics["g"] = {{"t", t}, {"normalization", est.normalization}, {"widened", est.widened}, {"laplace", plug}};
        if (est.widened) c.warnings.push_back("fewer than 1000 paths: g bands widened");
    }
    return kExitOk;
}

// ---- verify ----------------------------------------------------------------

struct VerifyTable {
    CsvWriter csv;
    json rows = json::array();
    bool failed = false;

    void add(const std::string& check, const std::string& detail, double value, double threshold, std::string_view status) {
        csv << check << detail << value << threshold << status;
        csv.end_row();
        rows.push_back({{"check", check}, {"detail", detail}, {"value", value}, {"threshold", threshold}, {"status", status}});
        if (status == "fail") failed = true;
    }
};

std::string_view pass_fail(bool ok) { return ok ? "pass" : "fail"; }

int verify(Context& c) {
    const BoxDomain dom = parse_domain(c.root.child("domain"));
    const InitialDatum f = parse_datum(c.root.child("initial"), dom);
    const MixingMeasure m = parse_measure(c.root.child("measure"));
    const std::size_t modes = path_count(c.root, "modes", 16, 1);
    HOptions hopts = kernel_options(c.root);

    std::vector<double> route_t{0.1, 1.0, 10.0};
    std::vector<double> route_lambda{0.5, 1.0, 5.0, 25.0};
    double route_tol = -1.0;
    double gs_tol = 1e-6;
    if (c.root.has("routes")) {
        Section r = c.root.child("routes");
        if (r.has("t")) route_t = positive_grid(r, "t");
        if (r.has("lambda")) route_lambda = positive_grid(r, "lambda");
        route_tol = r.positive("tolerance", -1.0);
        gs_tol = r.positive("gaver_stehfest_tolerance", gs_tol);
        r.finish();
    }

    ResidualOptions ropts;
    ropts.t_min = 0.5;
    double r_step = 1e-3;
    double r_horizon = 2.0;
    std::vector<Point> r_points;
    if (c.root.has("residual")) {
        Section r = c.root.child("residual");
        r_step = r.positive("step", r_step);
        r_horizon = r.positive("horizon", r_horizon);
        ropts.t_min = r.positive("t_min", ropts.t_min);
        ropts.tolerance = r.positive("tolerance", ropts.tolerance);
        ropts.max_checks = path_count(r, "max_checks", ropts.max_checks, 1);
        if (r.has("points")) r_points = parse_points(r.raw("points"), r.path() + ".points", dom);
        r.finish();
    }
    if (r_points.empty()) {
        Point mid{};
        for (std::size_t i = 0; i < dom.dims(); ++i) mid[i] = 0.5 * dom.side(i);
        r_points.push_back(mid);
    }

    std::vector<double> bound_t{0.05, 0.1, 0.25, 0.5, 1.0, 2.0};
    std::vector<double> bound_lambda{1.0, 5.0, 25.0};
    if (c.root.has("bound")) {
        Section b = c.root.child("bound");
        if (b.has("t")) bound_t = positive_grid(b, "t");
        if (b.has("lambda")) bound_lambda = positive_grid(b, "lambda");
        b.finish();
    }
    const auto decay_times = c.root.has("decay_times") ? positive_grid(c.root, "decay_times")
                                                       : std::vector<double>{0.1, 0.5, 1.0, 2.0, 5.0};
    const auto datum_times = c.root.has("datum_times") ? positive_grid(c.root, "datum_times")
                                                       : std::vector<double>{1e-1, 1e-2, 1e-3};
    const auto boundary_times = c.root.has("boundary_times") ? positive_grid(c.root, "boundary_times")
                                                             : std::vector<double>{0.1, 1.0};
    c.root.finish();

    SpectralOptions sopts;
    sopts.kernel = hopts;
    sopts.threads = c.inv.threads;
    const SpectralSolution sol(dom, f, m, modes, sopts);
    const HEvaluator& ev = sol.kernel();

    VerifyTable table{CsvWriter(c.file("verify.csv"), {"check", "detail", "value", "threshold", "status"})};

    // route agreement
    auto max_diff = [&](const std::function<double(double, double)>& a, const std::function<double(double, double)>& b) {
        double worst = 0.0;
        for (double t : route_t) {
            for (double l : route_lambda) worst = std::max(worst, std::abs(a(t, l) - b(t, l)));
        }
        return worst;
    };
    auto talbot = [&](double t, double l) { return ev.invert(InversionMethod::Talbot, t, l); };
    if (m.atoms_only() && m.atoms().size() == 1) {
        const double tol = route_tol > 0.0 ? route_tol : 1e-8;
        const double d = max_diff([&](double t, double l) { return ev.evaluate_with(HRoute::MittagLeffler, t, l).value; }, talbot);
        table.add("route", "mittag-leffler vs laplace-inversion", d, tol, pass_fail(d <= tol));
    } else if (m.density_only()) {
        const double tol = route_tol > 0.0 ? route_tol : 1e-6;
        const double d = max_diff([&](double t, double l) { return ev.evaluate_with(HRoute::Kochubei, t, l).value; }, talbot);
        table.add("route", "kochubei-integral vs laplace-inversion", d, tol, pass_fail(d <= tol));
    }
    {
        const double d = max_diff([&](double t, double l) { return ev.invert(InversionMethod::GaverStehfest, t, l); }, talbot);
        table.add("route", "gaver-stehfest vs talbot", d, gs_tol, pass_fail(d <= gs_tol));
    }

    // residual of the series
    const auto grid = uniform_grid(r_horizon, static_cast<std::size_t>(std::llround(r_horizon / r_step)));
    ropts.fine_step = r_step;
    const ResidualReport rep = verify_residual(sol, grid, r_points, ropts);
    table.add("residual", "max |D u - Delta u|, step " + format_number(r_step), rep.max_abs, ropts.tolerance,
              to_string(rep.status));
    if (!rep.note.empty()) c.warnings.push_back(rep.note);

    // derivative bound
    {
        double worst = 0.0;
        std::size_t violated = 0;
        std::size_t inconclusive = 0;
        for (double t : bound_t) {
            for (double l : bound_lambda) {
                const DerivativeCheck chk = h_dt_bound_check(ev, t, l);
                if (chk.status == DerivativeCheck::Status::Inconclusive) {
                    ++inconclusive;
                    continue;
                }
                if (chk.status == DerivativeCheck::Status::Violated) ++violated;
                worst = std::max(worst, chk.derivative / chk.bound);
            }
        }
        table.add("dt-bound", "max |d/dt h| / (1.05 lambda k(t)), " + std::to_string(violated) + " violated", worst, 1.0,
                  violated == 0 ? (inconclusive == 0 ? "pass" : "inconclusive") : "fail");
    }

    // decay estimate
    {
        const double fnorm = std::sqrt(sol.coefficients().norm_sq);
        const double lambda1 = sol.coefficients().eigens.front().lambda;
        double worst = 0.0;
        for (double t : decay_times) {
            const double bound = ev(t, lambda1) * fnorm;
            worst = std::max(worst, bound > 0.0 ? sol.l2_norm(t) / bound : 0.0);
        }
        table.add("decay", "max ||u(t)|| / (h(t, lambda_1) ||f||)", worst, 1.0 + 1e-6, pass_fail(worst <= 1.0 + 1e-6));
    }

    // initial datum
    {
        auto ts = datum_times;
        std::sort(ts.begin(), ts.end(), std::greater<>());
        std::size_t bad = 0;
        double prev = std::numeric_limits<double>::infinity();
        json dist = json::array();
        for (double t : ts) {
            const double d = sol.distance_to_datum(t);
            dist.push_back({{"t", t}, {"distance", d}});
            if (!(d < prev)) ++bad;
            prev = d;
        }
        c.metrics["datum_distance"] = dist;
        table.add("initial-datum", "non-decreasing steps of ||u(t) - f|| as t decreases", static_cast<double>(bad), 0.0,
                  pass_fail(bad == 0));
    }

    // boundary
    {
        const auto pts = boundary_points(dom);
        double worst = 0.0;
        for (double t : boundary_times) {
            for (const Point& p : pts) worst = std::max(worst, std::abs(sol.series(t, p)));
        }
        table.add("boundary", "max |u| on the boundary", worst, sol.tail_bound(), pass_fail(worst <= sol.tail_bound()));
    }

    c.metrics["checks"] = table.rows;
    c.metrics["route"] = std::string(to_string(ev.route()));
    if (!sol.warning().empty()) c.warnings.push_back(sol.warning());
    return table.failed ? kExitVerification : kExitOk;
}

// ---- verify-commutation ----------------------------------------------------

int verify_commutation(Context& c) {
    const BoxDomain dom = parse_domain(c.root.child("domain"));
    const MixingMeasure m = parse_measure(c.root.child("measure"));
    const std::size_t levels = path_count(c.root, "levels", 32, 1);
    const double t = c.root.positive("t");
    const Point x = interior_point(c.root.raw("x"), "x", dom);
    const std::size_t paths = path_count(c.root, "paths", 10000, 2);
    CommutationOptions opts;
    opts.base_step = c.root.positive("base_step", opts.base_step);
    opts.levels = path_count(c.root, "refinements", opts.levels, 1);
    opts.s_fraction = c.root.positive("s_fraction", opts.s_fraction);
    opts.threads = c.inv.threads;
    const double max_rate = c.root.positive("max_rate", 0.02);
    c.root.finish();
    const std::uint64_t seed = c.require_seed();

    const CommutationReport rep =
        check_commutation(dom, SubordinatorSpec::from_measure(m, levels), t, x, paths, seed, opts);
    CsvWriter csv(c.file("commutation.csv"), {"level", "step", "s_step", "paths", "disagreements", "rate", "se"});
    json rows = json::array();
    for (std::size_t l = 0; l < rep.levels.size(); ++l) {
        const auto& lv = rep.levels[l];
        csv << static_cast<std::uint64_t>(l) << lv.step << lv.s_step << static_cast<std::uint64_t>(lv.paths)
            << static_cast<std::uint64_t>(lv.disagreements) << lv.rate << lv.se;
        csv.end_row();
        rows.push_back({{"step", lv.step}, {"rate", lv.rate}, {"se", lv.se}});
    }
    const bool ok = rep.non_increasing && rep.final_rate < max_rate;
    c.metrics["levels"] = rows;
    c.metrics["non_increasing"] = rep.non_increasing;
    c.metrics["final_rate"] = rep.final_rate;
    c.metrics["max_rate"] = max_rate;
    return ok ? kExitOk : kExitVerification;
}

// ---- ctrw ------------------------------------------------------------------

int ctrw(Context& c) {
    const BoxDomain dom = parse_domain(c.root.child("domain"));
    const InitialDatum f = parse_datum(c.root.child("initial"), dom);
    const MixingMeasure m = parse_measure(c.root.child("measure"));
    if (!m.atoms_only()) fail("measure", "ctrw needs an atoms-only measure");
    const double t = c.root.positive("t");
    const Point x = interior_point(c.root.raw("x"), "x", dom);
    const std::size_t walkers = path_count(c.root, "walkers", 10000, 2);
    const auto scales = c.root.has("c") ? positive_grid(c.root, "c") : std::vector<double>{1e4};
    CtrwOptions opts;
    opts.reference_paths = path_count(c.root, "reference_paths", opts.reference_paths, 100);
    opts.reference = mc_options(c.root, c.inv.threads);
    opts.threads = c.inv.threads;
    const double z_max = c.root.positive("z_max", 3.0);
    c.root.finish();
    const std::uint64_t seed = c.require_seed();

    CsvWriter csv(c.file("ctrw.csv"), {"c", "ctrw_mean", "ctrw_se", "reference_mean", "reference_se", "z", "mean_jumps"});
    json rows = json::array();
    double last_z = 0.0;
    for (double scale : scales) {
        const CtrwReport r = ctrw_check(dom, f, m, t, x, walkers, scale, seed, opts);
        csv << scale << r.ctrw.mean << r.ctrw.se << r.reference.mean << r.reference.se << r.z << r.mean_jumps;
        csv.end_row();
        rows.push_back({{"c", scale}, {"z", r.z}});
        last_z = r.z;
    }
    c.metrics["rows"] = rows;
    c.metrics["z_max"] = z_max;
    return std::abs(last_z) <= z_max ? kExitOk : kExitVerification;
}

const std::map<std::string, std::function<int(Context&)>>& dispatch() {
    static const std::map<std::string, std::function<int(Context&)>> table{
        {"solve-spectral", solve_spectral},
        {"solve-mc", solve_mc},
        {"eval-h", eval_h},
        {"sample-subordinator", sample_subordinator},
        {"verify", verify},
        {"verify-commutation", verify_commutation},
        {"ctrw", ctrw},
    };
    return table;
}

}  // namespace

const std::vector<std::string>& command_names() {
    static const std::vector<std::string> names{"solve-spectral", "solve-mc",           "eval-h", "sample-subordinator",
                                                "verify",         "verify-commutation", "ctrw"};
    return names;
}

int run_command(const Invocation& inv) {
    const auto it = dispatch().find(inv.command);
    if (it == dispatch().end()) throw ConfigError("unknown command '" + inv.command + "'");
    const json config = load_json(inv.config.string());
    std::error_code ec;
    fs::create_directories(inv.out, ec);
    if (ec) throw IoError("cannot create output directory '" + inv.out.string() + "': " + ec.message());

    const auto start = std::chrono::steady_clock::now();
    Context ctx(inv, config);
    if (ctx.root.has("seed")) ctx.seed = ctx.root.count("seed");
    if (inv.seed) ctx.seed = inv.seed;
    if (ctx.root.has("description")) ctx.root.text("description");

    int status = kExitOk;
    try {
        status = it->second(ctx);
    } catch (const json::exception& e) {
        throw ConfigError(std::string("config: ") + e.what());
    }

    json echo = config;
    if (ctx.seed) echo["seed"] = *ctx.seed;
    const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    json diag = {
        {"command", inv.command},
        {"version", FRACBOUND_VERSION},
        {"threads", inv.threads},
        {"config", echo},
        {"wall_time_seconds", wall},
        {"metrics", ctx.metrics},
        {"warnings", ctx.warnings},
        {"outputs", ctx.outputs},
        {"status", status == kExitOk ? "ok" : "verification-failed"},
    };
    if (ctx.seed) diag["seed"] = *ctx.seed;
    write_text(inv.out / "diagnostics.json", diag.dump(2) + "\n");
    for (const auto& w : ctx.warnings) std::cerr << "warning: " << w.get<std::string>() << '\n';
    return status;
}

int run(int argc, char** argv) {
    CLI::App app{"Distributed-order fractional diffusion on boxes: spectral and Monte Carlo solvers."};
    app.name("fracbound");
    app.require_subcommand(1, 1);
    Invocation inv;
    std::string out = ".";
    std::uint64_t seed = 0;
    const std::map<std::string, std::string> help{
        {"solve-spectral", "series solution on a time x space grid"},
        {"solve-mc", "Monte Carlo estimate of u(t, x)"},
        {"eval-h", "evaluate the temporal kernel h(t, lambda)"},
        {"sample-subordinator", "simulate the subordinator and its inverse"},
        {"verify", "residual, bound and route-agreement checks"},
        {"verify-commutation", "time-change / killing commutation check"},
        {"ctrw", "continuous-time random walk against Monte Carlo"},
    };
    std::vector<CLI::App*> subs;
    std::vector<CLI::Option*> seed_opts;
    for (const auto& name : command_names()) {
        CLI::App* sub = app.add_subcommand(name, help.at(name));
        sub->add_option("--config", inv.config, "JSON configuration file")->required()->check(CLI::ExistingFile);
        sub->add_option("--out", out, "output directory");
        seed_opts.push_back(sub->add_option("--seed", seed, "random seed (overrides the config)"));
        sub->add_option("--threads", inv.threads, "worker threads, 0 = all cores");
        subs.push_back(sub);
    }
    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitUsage;
    }
    for (std::size_t i = 0; i < subs.size(); ++i) {
        if (subs[i]->parsed()) {
            inv.command = subs[i]->get_name();
            if (seed_opts[i]->count() > 0) inv.seed = seed;
        }
    }
    inv.out = out;
    try {
        return run_command(inv);
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
    } catch (const IoError& e) {
        std::cerr << "i/o error: " << e.what() << '\n';
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
    }
    return kExitUsage;
}

}  // namespace fracbound::app
