#include "cli.hpp"

#include <cmath>
#include <cstdio>
#include <exception>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "fraclap/errors.hpp"
#include "fraclap/expression.hpp"
#include "fraclap/identities.hpp"
#include "fraclap/operator.hpp"
#include "fraclap/parallel.hpp"
#include "fraclap/solver.hpp"

namespace fraclap::cli {

namespace fs = std::filesystem;

namespace {

std::string num(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string shortNum(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.6g", v);
    return buf;
}

struct Problem {
    int dim = 1;
    std::vector<double> s{0.5};
    std::string domain = "interval";
    double lo = -1.0, hi = 1.0;
    double radius = 1.0;
    double mesh = 1.0 / 256;

    void attach(CLI::App* app) {
        app->add_option("--N", dim, "space dimension")->check(CLI::Range(1, 3));
        app->add_option("--s", s, "order(s) of the fractional Laplacian")->expected(1, -1);
        app->add_option("--domain", domain, "interval or ball")->check(CLI::IsMember({"interval", "ball"}));
        app->add_option("--lo", lo, "left end of the interval");
        app->add_option("--hi", hi, "right end of the interval");
        app->add_option("--radius", radius, "ball radius (centred at the origin)");
        app->add_option("--mesh", mesh, "grid spacing for solved problems");
    }

    Domain makeDomain() const {
        if (domain == "interval") {
            if (dim != 1) throw ParameterError("--domain interval requires --N 1");
            return Domain::interval(lo, hi);
        }
        return Domain::ball(Point(dim), radius);
    }
};

struct Settings {
    std::string outDir = "fraclap-out";
    int jobs = 0;
    std::optional<double> tol;
};

// a:b:step, inclusive of b
std::vector<double> parseRange(const std::string& spec) {
    std::vector<double> parts;
    std::stringstream ss(spec);
    std::string item;
    while (std::getline(ss, item, ':')) {
        try {
            std::size_t used = 0;
            parts.push_back(std::stod(item, &used));
            if (used != item.size()) throw std::invalid_argument(item);
        } catch (const std::exception&) {
            throw ParameterError("range \"" + spec + "\": expected a:b:step");
        }
    }
    if (parts.size() != 3 || !(parts[2] > 0.0) || parts[1] < parts[0])
        throw ParameterError("range \"" + spec + "\": expected a:b:step with a <= b and step > 0");
    std::vector<double> out;
    const long count = std::lround(std::floor((parts[1] - parts[0]) / parts[2] + 1e-9));
    for (long k = 0; k <= count; ++k) out.push_back(std::round((parts[0] + k * parts[2]) * 1e12) / 1e12);
    return out;
}

Point parsePoint(const std::string& text, int dim) {
    Point p(dim);
    std::stringstream ss(text);
    std::string item;
    int k = 0;
    while (std::getline(ss, item, ',')) {
        if (k >= dim) throw ParameterError("point \"" + text + "\" has more than " + std::to_string(dim) + " coordinates");
        try {
            std::size_t used = 0;
            p[k++] = std::stod(item, &used);
            if (used != item.size()) throw std::invalid_argument(item);
        } catch (const std::invalid_argument&) {
            throw ParameterError("point \"" + text + "\": bad coordinate \"" + item + "\"");
        }
    }
    if (k == 0) throw ParameterError("empty point");
    return p;
}

void prepareOutput(const std::string& dir) {
    std::error_code ec;
    fs::create_directories(dir, ec);
    const fs::path probe = fs::path(dir) / ".fraclap-write-test";
    std::ofstream f(probe);
    if (ec || !f) throw ParameterError("output directory \"" + dir + "\" is not writable");
    f.close();
    fs::remove(probe, ec);
}

void writeFile(const fs::path& path, const std::string& content) {
    std::ofstream f(path, std::ios::binary);
    f << content;
    if (!f) throw ParameterError("cannot write " + path.string());
}

// Runs tasks on the worker pool, keeps results in task order and rethrows the
// first failure by index.
template <class T, class F>
std::vector<T> runOrdered(std::size_t n, int jobs, F&& task) {
    std::vector<std::optional<T>> slots(n);
    std::vector<std::exception_ptr> errors(n);
    parallelFor(
        n,
        [&](std::size_t i) {
            try {
                slots[i] = task(i);
            } catch (...) {
                errors[i] = std::current_exception();
            }
        },
        jobs);
    for (auto& e : errors)
        if (e) std::rethrow_exception(e);
    std::vector<T> out;
    for (auto& s : slots) out.push_back(std::move(*s));
    return out;
}

// ---------------------------------------------------------------------------
// verify / sweep

struct VerifyArgs {
    std::vector<std::string> identities;
    std::vector<std::string> xs;
    std::string sweepX;
    std::string sRange;
    std::string y = "0.4";
    int axis = 1;
    std::string f = "x";
    int samples = 10000;
    int levels = 8;
    std::string pair = "bumps";
    int j = 1;
    int i = 0;
    bool timing = false;
};

struct Task {
    IdentityKind kind;
    double s;
    std::optional<Point> x;
};

IdentityReport runTask(const Task& t, const Problem& prob, const VerifyArgs& va, const IdentityOptions& opt) {
    const FracParams p(prob.dim, t.s);
    const Domain d = prob.makeDomain();
    const int axis = va.axis - 1;
    const Point x = t.x.value_or(d.center());
    switch (t.kind) {
        case IdentityKind::dedu: return checkDedu(p, d, x, axis, opt);
        case IdentityKind::thm11High:
        case IdentityKind::thm11Low: {
            const SourceTerm f = sourceFromExpression(Expression::parse(va.f));
            return t.kind == IdentityKind::thm11High ? checkThm11High(p, d, f, x[0], opt)
                                                     : checkThm11Low(p, d, f, x[0], opt);
        }
        case IdentityKind::thm15: return checkThm15(p, d, x, parsePoint(va.y, prob.dim), axis, opt);
        case IdentityKind::robinGrad: return checkRobinGrad(p, d, x, axis, opt);
        case IdentityKind::robinSymmetry: {
            std::optional<int> second;
            if (va.i > 0) second = va.i - 1;
            return checkRobinSymmetry(p, d, va.j - 1, second, std::nullopt, opt);
        }
        case IdentityKind::pohozaev: {
            if (va.pair == "bumps") {
                const double R = d.radius();
                Point shift(prob.dim);
                shift[0] = 0.2 * R;
                return checkPohozaev(p, d, bumpFunction(d, 0.5 * R), bumpFunction(d, 0.4 * R, shift), axis, opt);
            }
            const TestFunction tf = torsionFunction(p, d);
            if (va.pair == "torsion") return checkPohozaev(p, d, tf, tf, axis, opt);
            SolverOptions so;
            so.jobs = opt.jobs;
            const Solution sol =
                solveLinear(p, d, sourceFromExpression(Expression::parse(va.f)), opt.mesh, so);
            return checkPohozaev(p, d, tf, solvedFunction(sol, "solved"), axis, opt);
        }
        case IdentityKind::greenBounds: return checkGreenBounds(p, d, va.samples, opt);
        case IdentityKind::gradGreenL1: return checkGradGreenL1(p, d, x[0], va.levels, opt);
    }
    throw ParameterError("unhandled identity");
}

bool usesPoint(IdentityKind k) {
    return k != IdentityKind::robinSymmetry && k != IdentityKind::pohozaev && k != IdentityKind::greenBounds;
}

std::string reportsCsv(const std::vector<IdentityReport>& reports, const std::vector<Task>& tasks) {
    std::string out = "identity,s,x,lhs,rhs,residual,tolerance,passed\n";
    for (std::size_t k = 0; k < reports.size(); ++k) {
        const auto& r = reports[k];
        std::string x;
        if (tasks[k].x && usesPoint(tasks[k].kind)) {
            for (int c = 0; c < tasks[k].x->dim(); ++c) x += (c ? " " : "") + num((*tasks[k].x)[c]);
        }
        auto side = [](const std::vector<double>& v) {
            std::string s;
            for (std::size_t c = 0; c < v.size(); ++c) s += (c ? " " : "") + num(v[c]);
            return s;
        };
        out += toString(r.identity) + "," + num(tasks[k].s) + "," + x + "," + side(r.lhs) + "," + side(r.rhs) + "," +
               num(r.residual) + "," + num(r.tolerance) + "," + (r.passed ? "true" : "false") + "\n";
    }
    return out;
}

int runVerify(const Problem& prob, const VerifyArgs& va, const Settings& set, const std::string& stem,
              std::ostream& out) {
    std::vector<IdentityKind> kinds;
    for (const auto& name : va.identities) {
        const auto k = parseIdentity(name);
        if (!k) throw ParameterError("unknown identity \"" + name + "\"");
        kinds.push_back(*k);
    }
    if (kinds.empty()) throw ParameterError("no identity selected");
    if (va.pair != "bumps" && va.pair != "torsion" && va.pair != "torsion-solved")
        throw ParameterError("--pair must be bumps, torsion or torsion-solved");
    Expression::parse(va.f);  // reject malformed expressions before any work
    prepareOutput(set.outDir);

    std::vector<double> svals = va.sRange.empty() ? prob.s : parseRange(va.sRange);
    std::vector<Point> points;
    for (const auto& x : va.xs) points.push_back(parsePoint(x, prob.dim));
    if (!va.sweepX.empty())
        for (double v : parseRange(va.sweepX)) {
            Point p(prob.dim);
            p[0] = v;
            points.push_back(p);
        }
    if (points.empty()) {
        Point p(prob.dim);
        p[0] = 0.3;
        points.push_back(p);
    }

    std::vector<Task> tasks;
    for (IdentityKind k : kinds)
        for (double s : svals) {
            if (usesPoint(k))
                for (const auto& p : points) tasks.push_back({k, s, p});
            else
                tasks.push_back({k, s, std::nullopt});
        }

    IdentityOptions opt;
    if (set.tol) opt.tolerance = *set.tol;
    opt.mesh = prob.mesh;
    opt.timing = va.timing;
    const int jobs = set.jobs > 0 ? set.jobs : defaultJobs();
    opt.jobs = tasks.size() > 1 ? 1 : jobs;
    const auto reports =
        runOrdered<IdentityReport>(tasks.size(), tasks.size() > 1 ? jobs : 1,
                                   [&](std::size_t k) { return runTask(tasks[k], prob, va, opt); });

    nlohmann::json arr = nlohmann::json::array();
    bool all = true;
    for (std::size_t k = 0; k < reports.size(); ++k) {
        const auto& r = reports[k];
        arr.push_back(toJson(r));
        all = all && r.passed;
        out << (r.passed ? "PASS " : "FAIL ") << toString(r.identity) << " s=" << shortNum(tasks[k].s);
        if (tasks[k].x && usesPoint(tasks[k].kind)) out << " x=" << tasks[k].x->str();
        out << " residual=" << shortNum(r.residual) << " tol=" << shortNum(r.tolerance) << "\n";
    }
    writeFile(fs::path(set.outDir) / (stem + ".json"), arr.dump(2) + "\n");
    writeFile(fs::path(set.outDir) / (stem + ".csv"), reportsCsv(reports, tasks));
    out << reports.size() << " report(s), " << (all ? "all passed" : "some failed") << "\n";
    return all ? ok : checkFailed;
}

// ---------------------------------------------------------------------------
// constant

struct ConstantArgs {
    double rhoLo = 1.0, rhoHi = 2.0;
    double budget = 5e7;
};

int runConstant(const Problem& prob, const ConstantArgs& ca, const Settings& set, const std::vector<double>& svals,
                const std::string& stem, std::ostream& out) {
    const CutoffProfile rho(ca.rhoLo, ca.rhoHi);
    if (!(ca.budget >= 1.0)) throw ParameterError("--budget must be at least 1");
    for (double s : svals) FracParams(prob.dim, s);  // validate up front
    if (prob.dim > 2) throw CapabilityError("constant: only N = 1 and N = 2 are supported");
    prepareOutput(set.outDir);
    const double tol = set.tol.value_or(1e-2);
    const int jobs = set.jobs > 0 ? set.jobs : defaultJobs();
    const auto estimates = runOrdered<ConstantEstimate>(svals.size(), jobs, [&](std::size_t k) {
        return aConstant(FracParams(prob.dim, svals[k]), rho, static_cast<std::size_t>(ca.budget));
    });

    nlohmann::json arr = nlohmann::json::array();
    int status = ok;
    for (std::size_t k = 0; k < svals.size(); ++k) {
        const auto& e = estimates[k];
        const bool close = std::abs(e.value + 2.0) <= e.error + tol;
        arr.push_back({{"N", prob.dim},
                       {"s", svals[k]},
                       {"profile", rho.describe()},
                       {"value", e.value},
                       {"error", e.error},
                       {"evaluations", e.evaluations},
                       {"converged", e.converged},
                       {"tolerance", tol},
                       {"passed", e.converged && close}});
        char line[160];
        std::snprintf(line, sizeof line, "a[N=%d, s=%s] = %.6f ± %.2g%s\n", prob.dim, shortNum(svals[k]).c_str(),
                      e.value, std::max(e.error, 0.0), e.converged ? "" : " (budget exhausted, partial value)");
        out << line;
        if (!e.converged)
            status = numerical;
        else if (!close && status == ok)
            status = checkFailed;
    }
    writeFile(fs::path(set.outDir) / (stem + ".json"), arr.dump(2) + "\n");
    return status;
}

// ---------------------------------------------------------------------------
// solve

struct SolveArgs {
    std::string f;
    int maxIter = 200;
    double picardTol = 1e-10;
};

int runSolve(const Problem& prob, const SolveArgs& sa, const Settings& set, std::ostream& out) {
    const Expression e = Expression::parse(sa.f);
    if (prob.s.size() != 1) throw ParameterError("solve takes a single --s");
    const FracParams p(prob.dim, prob.s[0]);
    const Domain d = prob.makeDomain();
    if (d.dim() != 1) throw CapabilityError("solve: only intervals are supported");
    prepareOutput(set.outDir);
    SolverOptions so;
    so.maxIterations = sa.maxIter;
    so.tol = sa.picardTol;
    so.jobs = set.jobs;
    const SourceTerm f = sourceFromExpression(e);
    const Solution sol = e.dependsOnU() ? solveSemilinear(p, d, f, prob.mesh, so) : solveLinear(p, d, f, prob.mesh, so);

    std::ostringstream csv, tsv;
    writeSolutionCsv(sol, csv);
    writePlotData(sol, tsv);
    nlohmann::json summary = solutionSummary(sol);
    summary["f"] = sa.f;
    writeFile(fs::path(set.outDir) / "solution.csv", csv.str());
    writeFile(fs::path(set.outDir) / "solution.tsv", tsv.str());
    writeFile(fs::path(set.outDir) / "summary.json", summary.dump(2) + "\n");
    out << "solved f = " << sa.f << " on " << d.describe() << " with s=" << shortNum(p.s()) << ": " << sol.u.size()
        << " points, " << sol.iterations << " iteration(s), residual " << shortNum(sol.residual);
    if (sol.trace.size() == 2)
        out << ", trace " << shortNum(sol.trace.values[0]) << " / " << shortNum(sol.trace.values[1]);
    out << "\n";
    return ok;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"fraclap: fractional Laplacian solver and identity checks"};
    app.set_config("--config", "", "read options from a TOML/INI file (flags take precedence)");
    app.require_subcommand(1, 1);
    app.fallthrough();
    app.allow_config_extras(CLI::config_extras_mode::error);

    Settings set;
    double tolValue = 0.0;
    app.add_option("--out", set.outDir, "output directory");
    app.add_option("--jobs", set.jobs, "worker threads (default: FRACLAP_JOBS or all cores)")->check(CLI::NonNegativeNumber);
    auto* tolOpt = app.add_option("--tol", tolValue, "override the pass tolerance");

    Problem solveProb, verifyProb, constProb, sweepProb;
    constProb.s = {0.5};

    auto* solve = app.add_subcommand("solve", "solve (-Δ)^s u = f(x, u) on an interval");
    solveProb.attach(solve);
    SolveArgs sa;
    solve->add_option("--f", sa.f, "right-hand side in x and u, e.g. \"1-u\"")->required();
    solve->add_option("--max-iter", sa.maxIter, "Picard iteration limit")->check(CLI::PositiveNumber);
    solve->add_option("--picard-tol", sa.picardTol, "Picard residual target");

    VerifyArgs va;
    auto addVerifyOptions = [&](CLI::App* cmd, VerifyArgs& v) {
        cmd->add_option("--identity", v.identities, "identity name(s)")->required()->expected(1, -1);
        cmd->add_option("--x", v.xs, "evaluation point(s), comma-separated coordinates")->expected(1, -1);
        cmd->add_option("--sweep-x", v.sweepX, "a:b:step along the first axis");
        cmd->add_option("--y", v.y, "second point for thm15");
        cmd->add_option("--axis", v.axis, "coordinate direction, 1-based")->check(CLI::Range(1, 3));
        cmd->add_option("--f", v.f, "source term for thm11-high / thm11-low / pohozaev torsion-solved");
        cmd->add_option("--samples", v.samples, "pairs for green-bounds")->check(CLI::PositiveNumber);
        cmd->add_option("--levels", v.levels, "refinements for grad-green-l1")->check(CLI::Range(2, 30));
        cmd->add_option("--pair", v.pair, "pohozaev test pair: bumps, torsion, torsion-solved");
        cmd->add_option("--j", v.j, "robin-symmetry axis, 1-based")->check(CLI::Range(1, 3));
        cmd->add_option("--i", v.i, "robin-symmetry second axis, 1-based (0: none)")->check(CLI::Range(0, 3));
        cmd->add_flag("--timing", v.timing, "record runtimeMs in the reports");
    };
    auto* verify = app.add_subcommand("verify", "check identities and write JSON/CSV reports");
    verifyProb.attach(verify);
    addVerifyOptions(verify, va);

    ConstantArgs ca;
    auto* constant = app.add_subcommand("constant", "evaluate the universal constant a_{N,s}[ρ]");
    constProb.attach(constant);
    constant->add_option("--rho-lo", ca.rhoLo, "cutoff plateau end");
    constant->add_option("--rho-hi", ca.rhoHi, "cutoff support end");
    constant->add_option("--budget", ca.budget, "integrand evaluation budget");

    VerifyArgs swa;
    ConstantArgs sca;
    std::string sweepRange;
    bool sweepConstant = false;
    auto* sweep = app.add_subcommand("sweep", "run an identity or the constant over a range of s");
    sweepProb.attach(sweep);
    sweep->add_option("--s-range", sweepRange, "a:b:step")->required();
    sweep->add_flag("--constant", sweepConstant, "sweep the universal constant instead of an identity");
    sweep->add_option("--identity", swa.identities, "identity name(s)")->expected(1, -1);
    sweep->add_option("--x", swa.xs, "evaluation point(s)")->expected(1, -1);
    sweep->add_option("--sweep-x", swa.sweepX, "a:b:step along the first axis");
    sweep->add_option("--y", swa.y, "second point for thm15");
    sweep->add_option("--axis", swa.axis, "coordinate direction, 1-based")->check(CLI::Range(1, 3));
    sweep->add_option("--f", swa.f, "source term");
    sweep->add_option("--samples", swa.samples, "pairs for green-bounds")->check(CLI::PositiveNumber);
    sweep->add_option("--levels", swa.levels, "refinements for grad-green-l1")->check(CLI::Range(2, 30));
    sweep->add_option("--pair", swa.pair, "pohozaev test pair");
    sweep->add_option("--rho-lo", sca.rhoLo, "cutoff plateau end");
    sweep->add_option("--rho-hi", sca.rhoHi, "cutoff support end");
    sweep->add_option("--budget", sca.budget, "integrand evaluation budget");
    sweep->add_flag("--timing", swa.timing, "record runtimeMs in the reports");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        app.exit(e, out, err);
        return ok;
    } catch (const CLI::CallForAllHelp& e) {
        app.exit(e, out, err);
        return ok;
    } catch (const CLI::ParseError& e) {
        app.exit(e, out, err);
        return badInput;
    }
    if (*tolOpt) set.tol = tolValue;
    if (set.jobs > 0) setDefaultJobs(set.jobs);

    try {
        if (*solve) return runSolve(solveProb, sa, set, out);
        if (*verify) return runVerify(verifyProb, va, set, "reports", out);
        if (*constant) return runConstant(constProb, ca, set, constProb.s, "constant", out);
        if (*sweep) {
            if (sweepConstant) return runConstant(sweepProb, sca, set, parseRange(sweepRange), "sweep", out);
            if (swa.identities.empty()) throw ParameterError("sweep needs --identity or --constant");
            swa.sRange = sweepRange;
            return runVerify(sweepProb, swa, set, "sweep", out);
        }
    } catch (const ParameterError& e) {
        err << "error: " << e.what() << "\n";
        return badInput;
    } catch (const NumericalError& e) {
        err << "numerical failure: " << e.what() << "\n";
        return numerical;
    } catch (const std::exception& e) {
        err << "failure: " << e.what() << "\n";
        return numerical;
    }
    return badInput;
}

}  // namespace fraclap::cli
