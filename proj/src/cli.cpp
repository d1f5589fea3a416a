#include "imagearc/cli.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <numbers>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "imagearc/errors.hpp"
#include "imagearc/funcspec.hpp"
#include "imagearc/geodesics.hpp"
#include "imagearc/nevanlinna.hpp"
#include "imagearc/verifier.hpp"

namespace imagearc::cli {

namespace {

constexpr int kExitFail = 1;
constexpr int kExitInapplicable = 2;
constexpr int kExitUsage = 3;

std::string number(double x) {
    if (std::isnan(x)) return "nan";
    if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

std::string complex_text(Complex z) {
    const double im = z.imag();
    return number(z.real()) + (std::signbit(im) ? "-" : "+") + number(std::abs(im)) + "i";
}

std::string point_text(const SpherePoint& w) { return w.is_infinite() ? "inf" : complex_text(w.finite()); }

int exit_code(Status s) {
    switch (s) {
        case Status::Pass: return 0;
        case Status::Fail: return kExitFail;
        case Status::Inapplicable: return kExitInapplicable;
    }
    return kExitFail;
}

// Thrown by the handlers for flag values CLI11 cannot check on its own.
struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct Options {
    // global
    double abs_tol = 0.0;
    double rel_tol = 0.0;
    CLI::Option* abs_opt = nullptr;
    CLI::Option* rel_opt = nullptr;
    std::string header = "on";
    std::string output;

    // shared by subcommands
    std::string func;
    std::string at = "0";
    double theta = 0.0;
    std::string base = "0";
    double rho_max = 10.0;
    std::string rho = "1";
    std::string target = "E";
    std::size_t samples = 32;
    std::vector<double> radii;
    std::size_t boundary_samples = 0;

    // verify
    double alpha = 0.0;
    double delta = 1.0;
    std::string f0 = "const(0.5+0i) * blaschke_disc([0.5+0i])";
    std::string finf = "const(0.5+0i)";
    double delta_floor = 0.0;

    // scenario
    double annulus_R = std::exp(1.0);
    std::size_t blaschke_N = 40;
    std::size_t n_max = 40;

    QuadConfig quad(QuadConfig base) const {
        if (abs_opt->count() > 0) base.abs_tol = abs_tol;
        if (rel_opt->count() > 0) base.rel_tol = rel_tol;
        base.validate();
        return base;
    }
    bool with_header() const { return header == "on"; }
};

// Remembers the function text being parsed so errors can be echoed with a caret.
struct SpecParser {
    std::string current;
    MapExpr operator()(const std::string& text) {
        current = text;
        return parse(text);
    }
};

MetricId target_metric(const std::string& t, const MapExpr& f) {
    if (t == "E") return MetricId::Euclidean;
    if (t == "S") return MetricId::Spherical;
    return f.codomain() == MetricId::HyperbolicHalfPlane ? MetricId::HyperbolicHalfPlane : MetricId::HyperbolicDisc;
}

double radius_value(const std::string& text) {
    if (text == "inf" || text == "infinity") return kInfiniteRadius;
    std::size_t used = 0;
    double r = 0.0;
    try {
        r = std::stod(text, &used);
    } catch (const std::exception&) {
        used = 0;
    }
    if (used != text.size() || !(r >= 0.0)) throw UsageError("--rho must be a nonnegative number or inf");
    return r;
}

void print_report(std::ostream& os, const VerdictReport& r) {
    os << r.line() << '\n';
    for (const DetailRow& d : r.details) os << "# " << d.key << " = " << number(d.value) << '\n';
    if (!r.note.empty()) os << "# note: " << r.note << '\n';
}

void print_samples(std::ostream& os, const Options& o, const std::vector<GrowthSample>& samples) {
    if (o.with_header()) os << "rho,length\n";
    for (const GrowthSample& s : samples) os << number(s.rho) << ',' << number(s.length) << '\n';
}

int print_scenario(std::ostream& os, const Options& o, const ScenarioReport& s) {
    print_samples(os, o, s.samples);
    if (s.fit.model == GrowthModel::Exponential) {
        os << "# fit exponential rate=" << number(s.fit.exponent);
    } else {
        os << "# fit power_law exponent=" << number(s.fit.exponent);
    }
    os << " constant=" << number(s.fit.constant) << " residual=" << number(s.fit.residual) << '\n';
    os << "# verdict " << s.verdict.line() << '\n';
    for (const DetailRow& d : s.verdict.details) os << "# " << d.key << " = " << number(d.value) << '\n';
    if (!s.verdict.note.empty()) os << "# note: " << s.verdict.note << '\n';
    return exit_code(s.verdict.status);
}

std::vector<RadialArc> radial_arcs(std::size_t count, double rho_max) {
    std::vector<RadialArc> arcs;
    for (std::size_t k = 0; k < count; ++k) {
        arcs.push_back(RadialArc::disc(2.0 * std::numbers::pi * static_cast<double>(k) / static_cast<double>(count),
                                       rho_max));
    }
    return arcs;
}

// Subcommand bodies ------------------------------------------------------------

int cmd_eval(std::ostream& os, const Options& o, SpecParser& parse_spec) {
    const MapExpr f = parse_spec(o.func);
    parse_spec.current = o.at;
    const Complex z = parse_complex(o.at);
    const Jet j = evaluate(f, z);
    os << "value " << point_text(j.value) << '\n';
    os << (j.value.is_infinite() ? "derivative_of_reciprocal " : "derivative ") << complex_text(j.derivative) << '\n';
    const MetricId targets[] = {MetricId::Euclidean, MetricId::HyperbolicDisc, MetricId::HyperbolicHalfPlane,
                                MetricId::Spherical};
    for (MetricId t : targets) {
        std::string v;
        try {
            v = number(deriv_norm(f, z, t));
        } catch (const RangeError&) {
            v = "undefined";
        } catch (const DomainError&) {
            v = "undefined";
        }
        os << "deriv_norm_" << to_string(t) << ' ' << v << '\n';
    }
    return 0;
}

int cmd_length(std::ostream& os, const Options& o, SpecParser& parse_spec) {
    const MapExpr f = parse_spec(o.func);
    parse_spec.current = o.base;
    const RadialArc arc = f.source_metric() == MetricId::HyperbolicHalfPlane
                              ? RadialArc::half_plane(parse_complex(o.base), o.rho_max)
                              : RadialArc::disc(o.theta, o.rho_max);
    std::vector<double> rhos;
    for (std::size_t k = 1; k <= o.samples; ++k) {
        rhos.push_back(o.rho_max * static_cast<double>(k) / static_cast<double>(o.samples));
    }
    const auto samples = length_profile(f, arc, rhos, target_metric(o.target, f), o.quad(QuadConfig::lengths()));
    print_samples(os, o, samples);
    return 0;
}

int cmd_area(std::ostream& os, const Options& o, SpecParser& parse_spec) {
    const MapExpr f = parse_spec(o.func);
    const double rho = radius_value(o.rho);
    const QuadResult a = area(f, rho, target_metric(o.target, f), o.quad(QuadConfig::areas()));
    if (o.with_header()) os << "rho,area,error_bound\n";
    os << number(rho) << ',' << number(a.value) << ',' << number(a.error_bound) << '\n';
    return 0;
}

int cmd_nevanlinna(std::ostream& os, const Options& o, SpecParser& parse_spec) {
    const MapExpr f = parse_spec(o.func);
    const CharacteristicCurve c = characteristic_curve(f, o.radii, o.quad(QuadConfig::areas()));
    if (o.with_header()) os << "r,S,T\n";
    for (std::size_t i = 0; i < c.radii.size(); ++i) {
        os << number(c.radii[i]) << ',' << number(c.S_values[i]) << ',' << number(c.T_values[i]) << '\n';
    }
    return 0;
}

int cmd_decompose(std::ostream& os, const Options& o, SpecParser& parse_spec) {
    const MapExpr f = parse_spec(o.func);
    const Decomposition d = o.boundary_samples == 0 ? fatou_decompose_auto(f) : fatou_decompose(f, o.boundary_samples);
    os << to_manifest(d);
    const DecompositionResiduals r = decomposition_residuals(f, d);
    os << "# identity boundary |f0|^2+|finf|^2=1 residual=" << number(r.boundary) << '\n';
    os << "# identity interior f0/finf=f relative_residual=" << number(r.quotient) << '\n';
    if (std::isnan(r.origin)) {
        os << "# identity origin |f0(0)|^2+|finf(0)|^2=exp(-2T(1)) inapplicable (f(0) is 0 or inf)\n";
    } else {
        os << "# identity origin |f0(0)|^2+|finf(0)|^2=exp(-2T(1)) residual=" << number(r.origin) << '\n';
    }
    return 0;
}

int cmd_verify(const std::string& which, std::ostream& os, const Options& o, SpecParser& parse_spec) {
    auto func_or = [&](const char* fallback) { return parse_spec(o.func.empty() ? std::string(fallback) : o.func); };
    const std::vector<double> trend_rhos{4.0, 6.0, 8.0, 10.0, 12.0};
    const double theta = o.theta;
    VerdictReport r;
    if (which == "prop21" || which == "prop22") {
        const bool h2e = which == "prop21";
        const MapExpr f = func_or(h2e ? "z()" : "scale(0.5+0i)");
        const auto grid = ProbeGrid{}.points();
        r = check_area_derivative_bound(f, h2e ? AreaBound::HyperbolicToEuclidean : AreaBound::HyperbolicToHyperbolic,
                                        grid, o.quad(sharp_config()));
    } else if (which == "prop23") {
        r = check_spherical_bound(func_or("scale(0.1+0i)"), ProbeGrid{}, o.quad(QuadConfig::areas()));
    } else if (which == "keogh") {
        r = check_sqrt_trend("keogh", func_or("koebe() . scale(0.9+0i)"), theta, MetricId::Euclidean, trend_rhos, 0.5,
                             o.quad(QuadConfig::lengths()));
    } else if (which == "thm32") {
        r = check_sqrt_trend("thm32", func_or("scale(0.9+0i)"), theta, MetricId::HyperbolicDisc, trend_rhos, 0.0,
                             o.quad(QuadConfig::lengths()));
    } else if (which == "thm33") {
        r = check_sqrt_trend("thm33", func_or("koebe() . scale(0.9+0i)"), theta, MetricId::Spherical, trend_rhos, 0.0,
                             o.quad(QuadConfig::lengths()));
    } else if (which == "thm43") {
        const MapExpr f0 = parse_spec(o.f0);
        const MapExpr finf = parse_spec(o.finf);
        const ProbeGrid grid{};
        const auto probes = grid.points();
        const double delta = o.delta_floor > 0.0 ? o.delta_floor : uniform_characteristic_delta(f0, finf, probes);
        r = check_uniform_char_length_bound(f0, finf, delta, radial_arcs(8, 10.0), grid,
                                            o.quad(QuadConfig::lengths()));
    } else {
        r = alpha_growth_check(func_or("koebe() . scale(0.9+0i)"), o.alpha, o.delta, o.quad(QuadConfig::areas()));
    }
    print_report(os, r);
    return exit_code(r.status);
}

int cmd_scenario(const std::string& which, std::ostream& os, const Options& o) {
    if (which == "annulus") {
        const double rho_max = o.rho_max;
        return print_scenario(os, o, scenario_annulus(o.annulus_R, rho_max, o.quad(QuadConfig::lengths())));
    }
    if (which == "symmetric-blaschke") {
        return print_scenario(os, o,
                              scenario_symmetric_blaschke(o.blaschke_N, o.rho_max, o.quad(QuadConfig::lengths())));
    }
    return print_scenario(os, o, scenario_blaschke_quotient(o.n_max, o.quad(QuadConfig::lengths())));
}

void echo_parse_error(std::ostream& err, const ParseError& e, const std::string& source) {
    err << "error: " << e.what() << '\n';
    // One line of context around the offending byte.
    const std::size_t pos = std::min(e.position(), source.size());
    const std::size_t begin = source.rfind('\n', pos == 0 ? 0 : pos - 1);
    const std::size_t line_start = (begin == std::string::npos || pos == 0) ? 0 : begin + 1;
    std::size_t line_end = source.find('\n', pos);
    if (line_end == std::string::npos) line_end = source.size();
    err << "  " << source.substr(line_start, line_end - line_start) << '\n';
    err << "  " << std::string(pos - line_start, ' ') << "^\n";
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    Options o;
    CLI::App app{"Image arc lengths, areas and characteristics of analytic maps"};
    app.footer(std::string(kGrammar));
    app.require_subcommand(1);
    app.fallthrough();

    o.abs_opt = app.add_option("--abs-tol", o.abs_tol, "Absolute quadrature tolerance")->check(CLI::PositiveNumber);
    o.rel_opt = app.add_option("--rel-tol", o.rel_tol, "Relative quadrature tolerance")->check(CLI::PositiveNumber);
    app.add_option("--header", o.header, "CSV header line")->check(CLI::IsMember({"on", "off"}));
    app.add_option("--output", o.output, "Write data to PATH instead of stdout");

    auto* eval = app.add_subcommand("eval", "Value, derivative and derivative norms at a point");
    eval->add_option("--func", o.func, "Function spec")->required();
    eval->add_option("--at", o.at, "Complex point, e.g. 0.5+0.25i");

    auto* length = app.add_subcommand("length", "Image length of a radial geodesic at equispaced rho");
    length->add_option("--func", o.func, "Function spec")->required();
    length->add_option("--theta", o.theta, "Direction of the disc ray");
    length->add_option("--base", o.base, "Base offset of the half-plane ray");
    length->add_option("--rho-max", o.rho_max, "Largest hyperbolic radius")->check(CLI::PositiveNumber);
    length->add_option("--target", o.target, "Target metric")->check(CLI::IsMember({"E", "H", "S"}));
    length->add_option("--samples", o.samples, "Number of rho values")->check(CLI::Range(std::size_t{2}, std::size_t{1} << 20));

    auto* area_cmd = app.add_subcommand("area", "Image area of a hyperbolic disc counting multiplicity");
    area_cmd->add_option("--func", o.func, "Function spec")->required();
    area_cmd->add_option("--rho", o.rho, "Hyperbolic radius, or inf");
    area_cmd->add_option("--target", o.target, "Target metric")->check(CLI::IsMember({"E", "H", "S"}));

    auto* nev = app.add_subcommand("nevanlinna", "Ahlfors-Shimizu S(r) and T(r)");
    nev->add_option("--func", o.func, "Function spec")->required();
    nev->add_option("--radii", o.radii, "Comma-separated radii in (0, 1)")->delimiter(',')->required();

    auto* dec = app.add_subcommand("decompose", "Quotient representation f = f0/finf");
    dec->add_option("--func", o.func, "Function spec")->required();
    dec->add_option("--boundary-samples", o.boundary_samples, "Power of two >= 256 (default: automatic)");

    auto* verify = app.add_subcommand("verify", "Inequality and trend checks");
    verify->require_subcommand(1);
    verify->fallthrough();
    const std::vector<std::string> verify_names{"prop21", "prop22", "prop23", "keogh",
                                                "thm32",  "thm33",  "thm43",  "alpha"};
    for (const std::string& name : verify_names) {
        auto* v = verify->add_subcommand(name);
        v->fallthrough();
        if (name == "thm43") {
            v->add_option("--f0", o.f0, "Numerator spec");
            v->add_option("--finf", o.finf, "Denominator spec");
            v->add_option("--delta", o.delta_floor, "Lower bound for (|f0|^2+|finf|^2)^(1/2) (default: grid minimum)")
                ->check(CLI::PositiveNumber);
            continue;
        }
        v->add_option("--func", o.func, "Function spec (default depends on the check)");
        if (name == "keogh" || name == "thm32" || name == "thm33") v->add_option("--theta", o.theta, "Ray direction");
        if (name == "alpha") {
            v->add_option("--alpha", o.alpha, "Exponent > 1")->required()->check(CLI::PositiveNumber);
            v->add_option("--delta", o.delta, "Offset delta > 0")->check(CLI::PositiveNumber);
        }
    }
    o.theta = std::numbers::pi;  // trend checks default to the negative real axis

    auto* scenario = app.add_subcommand("scenario", "Named constructions with growth fits");
    scenario->require_subcommand(1);
    scenario->fallthrough();
    auto* annulus = scenario->add_subcommand("annulus");
    annulus->add_option("--R", o.annulus_R, "Outer radius R > 1")->check(CLI::Range(1.0, 1e300));
    annulus->add_option("--rho-max", o.rho_max, "Largest hyperbolic radius")->check(CLI::PositiveNumber);
    auto* sym = scenario->add_subcommand("symmetric-blaschke");
    sym->add_option("--N", o.blaschke_N, "Zeros 2^n i for |n| <= N");
    sym->add_option("--rho-max", o.rho_max, "Largest hyperbolic radius")->check(CLI::PositiveNumber);
    auto* quot = scenario->add_subcommand("blaschke-quotient");
    quot->add_option("--n-max", o.n_max, "Largest sampled zero index")->check(CLI::Range(std::size_t{8}, std::size_t{100000}));

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? 0 : kExitUsage;
    }

    // length defaults to theta = 0, the trend checks to pi.
    if (length->parsed() && length->count("--theta") == 0) o.theta = 0.0;
    if (annulus->parsed() && annulus->count("--rho-max") == 0) o.rho_max = 40.0;
    if (sym->parsed() && sym->count("--rho-max") == 0) o.rho_max = 20.0;

    std::ofstream file;
    if (!o.output.empty()) {
        file.open(o.output);
        if (!file) {
            err << "error: cannot open " << o.output << " for writing\n";
            return kExitUsage;
        }
    }
    std::ostream& data = o.output.empty() ? out : file;

    SpecParser parse_spec;
    try {
        if (eval->parsed()) return cmd_eval(data, o, parse_spec);
        if (length->parsed()) return cmd_length(data, o, parse_spec);
        if (area_cmd->parsed()) return cmd_area(data, o, parse_spec);
        if (nev->parsed()) return cmd_nevanlinna(data, o, parse_spec);
        if (dec->parsed()) return cmd_decompose(data, o, parse_spec);
        if (verify->parsed()) return cmd_verify(verify->get_subcommands().front()->get_name(), data, o, parse_spec);
        return cmd_scenario(scenario->get_subcommands().front()->get_name(), data, o);
    } catch (const ParseError& e) {
        echo_parse_error(err, e, parse_spec.current);
        return kExitUsage;
    } catch (const UsageError& e) {
        err << "error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const CompositionError& e) {
        err << "error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const ConstructionError& e) {
        err << "error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const PrecisionError& e) {
        err << "error: " << e.what() << '\n';
        err << "best estimate " << number(e.estimate()) << " (error bound " << number(e.error_bound()) << ")\n";
        return kExitFail;
    } catch (const DivergenceError& e) {
        err << "error: " << e.what() << '\n';
        err << "last value " << number(e.last_value()) << '\n';
        return kExitFail;
    } catch (const DomainError& e) {
        err << "error: " << e.what() << '\n';
        return kExitInapplicable;
    } catch (const RangeError& e) {
        err << "error: " << e.what() << '\n';
        return kExitInapplicable;
    } catch (const BoundarySingularityError& e) {
        err << "error: " << e.what() << '\n';
        return kExitInapplicable;
    } catch (const NormalizationError& e) {
        err << "error: " << e.what() << '\n';
        return kExitInapplicable;
    } catch (const UnsupportedError& e) {
        err << "error: " << e.what() << '\n';
        return kExitInapplicable;
    } catch (const Error& e) {
        err << "error: " << e.what() << '\n';
        return kExitFail;
    }
}

}  // namespace imagearc::cli
