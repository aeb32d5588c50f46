#include "fracmoc/cli.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <limits>
#include <optional>
#include <sstream>

#include "fracmoc/charsolve.hpp"
#include "fracmoc/expr.hpp"
#include "fracmoc/frcalc.hpp"
#include "fracmoc/verify.hpp"

namespace fracmoc::cli {

namespace {

constexpr double kUnset = std::numeric_limits<double>::quiet_NaN();

// Validation failure that maps to exit code 2.
class UsageError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

Order order_flag(const std::string& flag, double v) {
    if (!(v > 0.0 && v <= 1.0)) throw UsageError(flag + " must lie in (0, 1], got " + format_number(v));
    return Order(v);
}

expr::Expr expr_flag(const std::string& flag, const std::string& src) {
    try {
        return expr::parse(src);
    } catch (const ParseError& e) {
        std::string caret(e.position(), ' ');
        throw UsageError(flag + ": " + e.what() + "\n  " + src + "\n  " + caret + "^");
    }
}

std::vector<double> list_flag(const std::string& flag, const std::string& text) {
    std::vector<double> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        try {
            std::size_t used = 0;
            out.push_back(std::stod(item, &used));
            if (used != item.size()) throw std::invalid_argument(item);
        } catch (const std::exception&) {
            throw UsageError(flag + ": cannot read '" + item + "' as a number");
        }
    }
    if (out.empty()) throw UsageError(flag + ": empty list");
    return out;
}

Domain domain_flag(const std::string& text) {
    double x0, x1, t0, t1;
    char tail = 0;
    if (std::sscanf(text.c_str(), "%lf:%lf,%lf:%lf%c", &x0, &x1, &t0, &t1, &tail) != 4)
        throw UsageError("--domain: expected x0:x1,t0:t1, got '" + text + "'");
    if (!(x0 < x1) || !(t0 < t1) || x0 < 0.0 || t0 < 0.0)
        throw UsageError("--domain: need 0 <= x0 < x1 and 0 <= t0 < t1");
    return {x0, x1, t0, t1};
}

struct ProblemFlags {
    std::string preset;
    double alpha = kUnset;
    double beta = kUnset;
    double speed = 1.0;
    std::string phi;
    std::string profile;
    std::string a, b, c;
    std::string domain;
    int nx = 0;
    int nt = 0;
    double step = 1e-3;
    std::string mode;

    void add_to(CLI::App& app, bool grid_required) {
        app.add_option("--preset", preset, "Coefficient preset")->check(CLI::IsMember({"transport", "similarity"}));
        app.add_option("--alpha", alpha, "Time order in (0, 1]")->required();
        app.add_option("--beta", beta, "Space order in (0, 1]")->required();
        app.add_option("--speed", speed, "Transport speed (preset transport)");
        app.add_option("--phi", phi, "Initial data phi(x)");
        app.add_option("--profile-f", profile, "Solution profile f(z)");
        app.add_option("--a", a, "Coefficient a(x,t) of the space derivative");
        app.add_option("--b", b, "Coefficient b(x,t) of the time derivative");
        app.add_option("--c", c, "Right-hand side c(x,t)");
        auto* d = app.add_option("--domain", domain, "Domain x0:x1,t0:t1");
        auto* gx = app.add_option("--nx", nx, "Grid points in x")->check(CLI::PositiveNumber);
        auto* gt = app.add_option("--nt", nt, "Grid points in t")->check(CLI::PositiveNumber);
        if (grid_required) {
            d->required();
            gx->required();
            gt->required();
        }
        app.add_option("--step", step, "RK4 step in s for traced solutions")->check(CLI::PositiveNumber);
        app.add_option("--mode", mode, "closed (closed form) or traced (characteristic tracing)")
            ->check(CLI::IsMember({"closed", "traced"}));
    }

    FpdeProblem problem() const {
        const Order al = order_flag("--alpha", alpha);
        const Order be = order_flag("--beta", beta);
        const Domain dom = domain_flag(domain);
        const auto opt_expr = [](const std::string& flag, const std::string& src) {
            return src.empty() ? expr::Expr{} : expr_flag(flag, src);
        };
        try {
            if (preset == "transport") {
                if (phi.empty() && profile.empty()) throw UsageError("--preset transport needs --phi or --profile-f");
                return transport_problem(al, be, speed, opt_expr("--phi", phi), dom);
            }
            if (preset == "similarity") {
                if (profile.empty()) throw UsageError("--preset similarity needs --profile-f");
                return similarity_problem(al, be, dom);
            }
            if (a.empty() || b.empty() || c.empty())
                throw UsageError("without --preset, --a, --b and --c are all required");
            return FpdeProblem(al, be, expr_flag("--a", a), expr_flag("--b", b), expr_flag("--c", c),
                               opt_expr("--phi", phi), dom);
        } catch (const PatternError& e) {
            throw UsageError(e.what());
        } catch (const DomainError& e) {
            throw UsageError(e.what());
        }
    }

    Solution solution(const FpdeProblem& prob) const {
        try {
            const bool traced = mode == "traced" || (mode.empty() && preset.empty());
            if (traced) {
                if (!prob.has_initial_data()) throw UsageError("traced solutions need --phi");
                return traced_solution(prob, step);
            }
            if (preset == "similarity") return solve_similarity(prob, expr_flag("--profile-f", profile));
            if (!profile.empty()) return solve_constant_coeff(prob, expr_flag("--profile-f", profile));
            if (!prob.has_initial_data()) throw UsageError("closed-form solution needs --phi or --profile-f");
            return solve_constant_coeff(prob);
        } catch (const PatternError& e) {
            throw UsageError(e.what());
        }
    }
};

// Writes through a temporary file renamed into place on success.
void atomic_write(const std::string& path, const std::function<void(std::ostream&)>& body) {
    namespace fs = std::filesystem;
    const fs::path target(path);
    fs::path tmp = target;
    tmp += ".tmp";
    {
        std::ofstream os(tmp, std::ios::binary | std::ios::trunc);
        if (!os) throw std::runtime_error("cannot open '" + tmp.string() + "' for writing");
        body(os);
        os.flush();
        if (!os) {
            std::error_code ec;
            fs::remove(tmp, ec);
            throw std::runtime_error("failed writing '" + tmp.string() + "'");
        }
    }
    std::error_code ec;
    fs::rename(tmp, target, ec);
    if (ec) {
        fs::remove(tmp, ec);
        throw std::runtime_error("cannot move output into '" + path + "'");
    }
}

// Runs the three phases of a command with the exit-code contract.
int guarded(CLI::App& app, const std::vector<std::string>& args, std::ostream& out, std::ostream& err,
            const std::function<std::function<int()>()>& prepare) {
    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kOk : kUsage;
    }
    std::function<int()> work;
    try {
        work = prepare();
    } catch (const UsageError& e) {
        err << "error: " << e.what() << '\n';
        return kUsage;
    } catch (const ParseError& e) {
        err << "error: " << e.what() << '\n';
        return kUsage;
    }
    try {
        return work();
    } catch (const UsageError& e) {
        err << "error: " << e.what() << '\n';
        return kUsage;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return kRuntime;
    }
}

void print_summary(std::ostream& out, double max_abs, double l2, std::size_t skipped) {
    out << "max_abs=" << format_number(max_abs) << " l2=" << format_number(l2) << " skipped=" << skipped << '\n';
}

int tolerance_code(std::optional<double> tol, double value) {
    if (!tol) return kOk;
    return value <= *tol ? kOk : kToleranceFail;
}

QuadratureConfig quadrature(int panels) {
    QuadratureConfig cfg;
    cfg.n_panels = panels;
    return cfg;
}

}  // namespace

int cmd_solve(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app("Solve a space-time fractional first-order PDE on a grid; writes CSV x,t,u", "fracmoc solve");
    ProblemFlags flags;
    std::string out_path;
    flags.add_to(app, true);
    app.add_option("--out", out_path, "Output CSV path")->required();

    return guarded(app, args, out, err, [&]() -> std::function<int()> {
        auto prob = flags.problem();
        auto sol = flags.solution(prob);
        const Domain d = prob.domain();
        return [=, &out]() {
            const Field field = solve_grid(sol, linspace(d.x_min, d.x_max, flags.nx), linspace(d.t_min, d.t_max, flags.nt));
            atomic_write(out_path, [&](std::ostream& os) { write_csv(os, field); });
            out << "wrote " << field.x.size() * field.t.size() << " rows (" << field.missing << " missing) to "
                << out_path << '\n';
            return int(kOk);
        };
    });
}

int cmd_frderiv(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app("Fractional derivative of an expression at a point", "fracmoc frderiv");
    app.set_help_flag("--help", "Print this help message and exit");
    double alpha = kUnset;
    double at = kUnset;
    std::string src;
    std::string var = "x";
    std::string method = "quad";
    double h = 1e-4;
    int panels = 4096;
    int terms = 0;
    app.add_option("--alpha", alpha, "Order in (0, 1]")->required();
    app.add_option("--expr", src, "Expression in x or t")->required();
    app.add_option("--var", var, "Differentiation variable")->check(CLI::IsMember({"x", "t"}));
    app.add_option("--at", at, "Evaluation point")->required();
    app.add_option("--method", method, "quad (modified Riemann-Liouville quadrature) or gl (fractional difference)")
        ->check(CLI::IsMember({"quad", "gl"}));
    app.add_option("--h", h, "Step for --method gl")->check(CLI::PositiveNumber);
    app.add_option("--panels", panels, "Quadrature panels")->check(CLI::Range(2, 1 << 24));
    app.add_option("--terms", terms, "Difference terms for --method gl (default: enough to reach 0)");

    return guarded(app, args, out, err, [&]() -> std::function<int()> {
        const Order order = order_flag("--alpha", alpha);
        const auto e = expr_flag("--expr", src);
        return [=, &out]() {
            const ScalarFn f = expr::bind(e, var == "x" ? expr::Var::X : expr::Var::T);
            double value = 0.0;
            if (method == "gl") {
                const int n = terms > 0 ? terms : static_cast<int>(std::ceil(at / h)) + 2;
                value = gl_difference(f, order, at, h, n) / std::pow(h, order.value());
            } else {
                value = mrl_derivative(f, order, at, quadrature(panels));
            }
            char buf[64];
            std::snprintf(buf, sizeof buf, "%#.12g", value);
            out << buf << '\n';
            return int(kOk);
        };
    });
}

int cmd_verify(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app("Verification checks; prints max_abs=<v> l2=<v> skipped=<n>", "fracmoc verify");
    ProblemFlags flags;
    std::string check;
    std::string out_path;
    std::optional<double> tol;
    std::string src, v_src;
    std::string points = "0.5,1,2";
    std::string hs = "1e-2,1e-3,1e-4";
    std::string method = "quad";
    double upper = 1.0;
    int panels = 4096;
    app.add_option("--check", check, "Check to run")
        ->required()
        ->check(CLI::IsMember({"residual", "transformed", "fundamental", "parts", "compare"}));
    app.add_option("--tol", tol, "Exit 1 when max_abs exceeds this tolerance");
    app.add_option("--out", out_path, "Optional report CSV path");
    app.add_option("--expr", src, "f (fundamental, compare) or u (parts), in x");
    app.add_option("--v", v_src, "v for the parts check, in x");
    app.add_option("--points", points, "Comma-separated evaluation points");
    app.add_option("--hs", hs, "Comma-separated decreasing steps for compare");
    app.add_option("--upper", upper, "Upper limit for the parts check");
    app.add_option("--method", method, "Residual derivative method: quad or gl")->check(CLI::IsMember({"quad", "gl"}));
    app.add_option("--panels", panels, "Quadrature panels")->check(CLI::Range(2, 1 << 24));
    // Problem flags are only needed by the grid checks; validated below.
    flags.add_to(app, false);
    app.get_option("--alpha")->required(false);
    app.get_option("--beta")->required(false);

    return guarded(app, args, out, err, [&]() -> std::function<int()> {
        const QuadratureConfig cfg = quadrature(panels);
        if (check == "residual" || check == "transformed") {
            if (std::isnan(flags.alpha)) throw UsageError("--alpha is required");
            if (std::isnan(flags.beta)) throw UsageError("--beta is required");
            if (flags.domain.empty() || flags.nx == 0 || flags.nt == 0)
                throw UsageError("--domain, --nx and --nt are required for grid checks");
            auto prob = flags.problem();
            auto sol = flags.solution(prob);
            return [=, &out]() {
                const Domain d = prob.domain();
                ResidualReport report;
                if (check == "residual") {
                    auto interior = [](double lo, double hi, int n) {
                        Eigen::VectorXd g(n);
                        for (int i = 0; i < n; ++i) g[i] = lo + (hi - lo) * double(i + 1) / double(n + 1);
                        return g;
                    };
                    ResidualOptions opts;
                    opts.quadrature = cfg;
                    report = residual_fpde(sol, prob, interior(d.x_min, d.x_max, flags.nx),
                                           interior(d.t_min, d.t_max, flags.nt),
                                           method == "gl" ? ResidualMethod::GlDifference : ResidualMethod::Quadrature,
                                           opts);
                } else {
                    const auto lo = transform(d.x_min, d.t_min, prob.alpha(), prob.beta());
                    const auto hi = transform(d.x_max, d.t_max, prob.alpha(), prob.beta());
                    report = residual_transformed(sol, prob, linspace(lo.X, hi.X, flags.nx),
                                                  linspace(lo.T, hi.T, flags.nt));
                }
                if (!out_path.empty()) {
                    const bool transformed = report.method == ResidualMethod::TransformedClassical;
                    atomic_write(out_path, [&](std::ostream& os) {
                        write_csv(os, report.field, "residual", transformed ? "X" : "x", transformed ? "T" : "t");
                    });
                }
                print_summary(out, report.max_abs, report.l2, report.points_skipped);
                return tolerance_code(tol, report.max_abs);
            };
        }

        if (std::isnan(flags.alpha)) throw UsageError("--alpha is required");
        const Order order = order_flag("--alpha", flags.alpha);
        if (src.empty()) throw UsageError("--expr is required for --check " + check);
        const ScalarFn f = expr::bind(expr_flag("--expr", src), expr::Var::X);
        const auto xs = list_flag("--points", points);

        if (check == "fundamental") {
            return [=, &out]() {
                double worst = 0.0, sum_sq = 0.0;
                std::ostringstream csv;
                csv << "x,deviation\n";
                for (double x : xs) {
                    const double dev = fundamental_check(f, order, std::span<const double>(&x, 1), cfg);
                    csv << format_number(x) << ',' << format_number(dev) << '\n';
                    worst = std::max(worst, dev);
                    sum_sq += dev * dev;
                }
                if (!out_path.empty()) atomic_write(out_path, [&](std::ostream& os) { os << csv.str(); });
                print_summary(out, worst, std::sqrt(sum_sq / double(xs.size())), 0);
                return tolerance_code(tol, worst);
            };
        }
        if (check == "parts") {
            if (v_src.empty()) throw UsageError("--v is required for --check parts");
            const ScalarFn v = expr::bind(expr_flag("--v", v_src), expr::Var::X);
            return [=, &out]() {
                const double dev = parts_check(f, v, order, upper, cfg);
                if (!out_path.empty())
                    atomic_write(out_path, [&](std::ostream& os) {
                        os << "upper,deviation\n" << format_number(upper) << ',' << format_number(dev) << '\n';
                    });
                print_summary(out, dev, dev, 0);
                return tolerance_code(tol, dev);
            };
        }
        // compare
        const auto steps = list_flag("--hs", hs);
        for (std::size_t i = 1; i < steps.size(); ++i)
            if (!(steps[i] < steps[i - 1]) || !(steps[i] > 0.0))
                throw UsageError("--hs must be positive and strictly decreasing");
        return [=, &out]() {
            const auto rows = compare_methods(f, order, xs, steps, cfg);
            double worst = 0.0, sum_sq = 0.0;
            for (const auto& r : rows) {
                worst = std::max(worst, r.gap);
                sum_sq += r.gap * r.gap;
            }
            if (!out_path.empty())
                atomic_write(out_path, [&](std::ostream& os) {
                    os << "x,quadrature,gl,gap,order\n";
                    for (const auto& r : rows)
                        os << format_number(r.x) << ',' << format_number(r.quadrature) << ',' << format_number(r.gl)
                           << ',' << format_number(r.gap) << ',' << (std::isnan(r.order) ? "" : format_number(r.order))
                           << '\n';
                });
            print_summary(out, worst, std::sqrt(sum_sq / double(rows.size())), 0);
            return tolerance_code(tol, worst);
        };
    });
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    static const char* usage =
        "usage: fracmoc <command> [flags]\n"
        "\n"
        "commands:\n"
        "  solve     solve a fractional first-order PDE on a grid, write CSV\n"
        "  frderiv   fractional derivative of an expression at a point\n"
        "  verify    residual / identity checks with an optional tolerance gate\n"
        "\n"
        "Run 'fracmoc <command> --help' for the flags of a command.\n";
    if (args.empty()) {
        err << usage;
        return kUsage;
    }
    const std::string& cmd = args.front();
    const std::vector<std::string> rest(args.begin() + 1, args.end());
    if (cmd == "solve") return cmd_solve(rest, out, err);
    if (cmd == "frderiv") return cmd_frderiv(rest, out, err);
    if (cmd == "verify") return cmd_verify(rest, out, err);
    if (cmd == "--help" || cmd == "-h" || cmd == "help") {
        out << usage;
        return kOk;
    }
    err << "unknown command '" << cmd << "'\n" << usage;
    return kUsage;
}

}  // namespace fracmoc::cli
