#include "run.hpp"

#include <atomic>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <ostream>
#include <random>
#include <sstream>
#include <thread>

#include "bolza/characteristics.hpp"
#include "bolza/conjugacy.hpp"
#include "bolza/errors.hpp"
#include "bolza/oracle.hpp"
#include "bolza/problem_io.hpp"
#include "bolza/qualification.hpp"
#include "bolza/solver.hpp"
#include "format.hpp"
#include "svg.hpp"

namespace bolza::cli {

namespace fs = std::filesystem;

namespace {

struct Context {
    const RunConfig& config;
    fs::path dir;
    std::ostream& out;
    std::ostream& err;
};

void writeFile(const fs::path& path, const std::string& content) {
    std::ofstream f(path, std::ios::binary);
    require(f.good(), ErrorCode::InvalidArgument, "cannot write '" + path.string() + "'");
    f << content;
}

Vector point(const std::vector<double>& values, int n, const char* flag) {
    require(static_cast<int>(values.size()) == n, ErrorCode::InvalidArgument,
            std::string(flag) + " needs " + std::to_string(n) + " comma-separated values");
    return Eigen::Map<const Vector>(values.data(), n);
}

void checkTau(const BolzaProblem& problem, int tau) {
    require(tau >= 0 && tau <= problem.horizon(), ErrorCode::InvalidArgument,
            "--tau must lie in [0, " + std::to_string(problem.horizon()) + "]");
}

double certScale(double theta, double omega, double bilinear) {
    return 1.0 + std::abs(theta) + std::abs(omega) + std::abs(bilinear);
}

int cmdSolve(const Context& c, const BolzaProblem& problem) {
    const int n = problem.stateDim(), m = problem.stage(0).m();
    checkTau(problem, c.config.tau);
    const Vector xi = point(c.config.xi, n, "--xi");
    const SolveResult r = solvePrimal(PrimalModel(problem), c.config.tau, xi, c.config.tol);

    std::ostringstream csv;
    csv << "t," << columns("x", n) << ',' << columns("u", m) << ',' << columns("p", n) << '\n';
    for (std::size_t k = 0; k < r.states.size(); ++k) {
        csv << r.tau + static_cast<int>(k) << ',' << joined(r.states[k]) << ',';
        csv << (k < r.controls.size() ? joined(r.controls[k]) : std::string(static_cast<std::size_t>(m - 1), ','));
        csv << ',' << (k < r.costates.size() ? joined(r.costates[k]) : std::string(static_cast<std::size_t>(n - 1), ','))
            << '\n';
    }
    writeFile(c.dir / "solve.csv", csv.str());
    std::ostringstream summary;
    summary << "status,value,kkt_residual,iterations\n"
            << toString(r.status) << ',' << num(r.value.raw()) << ',' << num(r.kktResidual) << ',' << r.iterations
            << '\n';
    writeFile(c.dir / "solve_summary.csv", summary.str());
    c.out << "status " << toString(r.status) << "\nvalue " << num(r.value.raw()) << "\nwrote "
          << (c.dir / "solve.csv").string() << '\n';
    if (!r.optimal()) {
        c.err << "solver non-optimal: " << toString(r.status) << '\n';
        return kNotOptimal;
    }
    return kOk;
}

int cmdDualize(const Context& c, const BolzaProblem& problem) {
    const int n = problem.stateDim();
    std::vector<Vector> probes;
    if (n == 1) {
        for (double v : {-1.0, -0.5, 0.0, 0.5, 1.0}) probes.push_back(vec({v}));
    } else {
        std::mt19937_64 rng(c.config.seed);
        std::uniform_real_distribution<double> unit(-1.0, 1.0);
        for (int k = 0; k < 5; ++k) {
            Vector v(n);
            for (int i = 0; i < n; ++i) v(i) = unit(rng);
            probes.push_back(v);
        }
    }
    std::ostringstream k;
    k << "t," << columns("p", n) << ',' << columns("w", n) << ",K\n";
    for (int t = 0; t < problem.horizon(); ++t)
        for (const Vector& p : probes)
            for (const Vector& w : probes)
                k << t << ',' << joined(p) << ',' << joined(w) << ','
                  << num(dualLagrangianEval(problem, t, p, w, c.config.tol).raw()) << '\n';
    writeFile(c.dir / "dual_K.csv", k.str());
    std::ostringstream f;
    f << columns("b", n) << ",f\n";
    for (const Vector& b : probes) f << joined(Vector(2.0 * b)) << ',' << num(dualTerminal(problem, Vector(2.0 * b), c.config.tol).raw()) << '\n';
    writeFile(c.dir / "dual_f.csv", f.str());
    c.out << "dual problem: horizon " << problem.horizon() << ", state dimension " << n << '\n'
          << "stage cost K_t(p, w) = L_t*(w, p); terminal cost f(b) = g*(-b)\n"
          << "wrote " << (c.dir / "dual_K.csv").string() << " and " << (c.dir / "dual_f.csv").string() << '\n';
    return kOk;
}

int cmdCheckDuality(const Context& c, const BolzaProblem& problem) {
    const int n = problem.stateDim();
    checkTau(problem, c.config.tau);
    const Vector xi = point(c.config.xi, n, "--xi");
    const Vector eta = point(c.config.eta, n, "--eta");
    const PrimalModel model(problem);
    const DualityCertificate cert = dualityCertificate(model, c.config.tau, xi, eta, c.config.tol);
    const double bilinear = xi.dot(eta);

    std::ostringstream csv;
    csv << "theta,omega,bilinear,gap,fy_residual,transversality_residual,primal_status,dual_status\n"
        << num(cert.theta.raw()) << ',' << num(cert.omega.raw()) << ',' << num(bilinear) << ','
        << num(cert.gapInfinite ? INFINITY : cert.gap) << ',' << num(cert.fyResidual) << ','
        << num(cert.transversalityResidual) << ',' << toString(cert.primalStatus) << ','
        << toString(cert.dualStatus) << '\n';
    writeFile(c.dir / "certificate.csv", csv.str());
    std::ostringstream steps;
    steps << "t,el_residual\n";
    for (std::size_t k = 0; k < cert.elResiduals.size(); ++k)
        steps << c.config.tau + static_cast<int>(k) << ',' << num(cert.elResiduals[k]) << '\n';
    writeFile(c.dir / "certificate_steps.csv", steps.str());

    c.out << "theta " << num(cert.theta.raw()) << "\nomega " << num(cert.omega.raw()) << "\ngap "
          << num(cert.gapInfinite ? INFINITY : cert.gap) << '\n';
    if (cert.primalStatus != SolveStatus::Optimal || cert.dualStatus != SolveStatus::Optimal) {
        c.err << "solver non-optimal: primal " << toString(cert.primalStatus) << ", dual " << toString(cert.dualStatus)
              << '\n';
        return kNotOptimal;
    }
    const double scale = certScale(cert.theta.value(), cert.omega.value(), bilinear);
    if (cert.gap < -c.config.tol.cert * scale) {
        c.err << "weak duality violated: theta + omega - xi.eta = " << num(cert.gap) << '\n';
        return kVerificationFailed;
    }
    if (cert.gap > c.config.tol.cert * scale) {
        c.err << "Fenchel-Young equality fails: eta is not a subgradient of theta_tau at xi (gap " << num(cert.gap)
              << ")\n";
        return kVerificationFailed;
    }
    return kOk;
}

int cmdCharacteristics(const Context& c, const BolzaProblem& problem) {
    const int n = problem.stateDim();
    checkTau(problem, c.config.tau);
    const Vector xi = point(c.config.xi, n, "--xi");
    const Vector eta = point(c.config.eta, n, "--eta");
    const PrimalModel model(problem);
    const TrajectoryPair pair = buildCharacteristic(model, c.config.tau, xi, eta, c.config.tol);
    if (pair.status == PairStatus::SolverFailure) {
        c.err << "solver non-optimal: no primal/dual optimum at (tau, xi, eta)\n";
        return kNotOptimal;
    }
    const CharacteristicVerdict v = verifyCharacteristic(model, pair, eta, c.config.tol);
    std::ostringstream csv;
    csv << "t," << columns("x", n) << ',' << columns("p", n) << ",el_residual,ham_residual\n";
    for (std::size_t k = 0; k < pair.states.size(); ++k) {
        csv << pair.tau + static_cast<int>(k) << ',' << joined(pair.states[k]) << ',' << joined(pair.costates[k]) << ',';
        if (k < pair.elResiduals.size()) csv << num(pair.elResiduals[k]) << ',' << num(pair.hamResiduals[k]);
        else csv << ',';
        csv << '\n';
    }
    writeFile(c.dir / "trajectory.csv", csv.str());
    c.out << "status " << toString(pair.status) << "\ngap " << num(pair.gap) << "\ntransversality "
          << num(pair.transversalityResidual) << "\nverdict " << (v.pass ? "pass" : "fail") << "\nmax_residual "
          << num(v.maxResidual) << "\nfailing_step " << v.failingStep << '\n';
    if (pair.status != PairStatus::Characteristic || !v.pass) {
        if (pair.status != PairStatus::Characteristic)
            c.err << "Fenchel-Young gap " << num(pair.gap) << " exceeds tolerance: eta is not in the subdifferential\n";
        else
            c.err << "Hamiltonian inclusion fails at step " << v.failingStep << '\n';
        return kVerificationFailed;
    }
    return kOk;
}

void writeWitness(const Context& c, const QualificationReport& r, std::string& path) {
    path = "-";
    if (r.witness.empty()) return;
    const std::string name = "qualify_" + std::string(toString(r.condition)) + "_witness.csv";
    const int d = static_cast<int>(r.witness.front().size());
    const int m = r.witnessControls.empty() ? 0 : static_cast<int>(r.witnessControls.front().size());
    std::ostringstream csv;
    csv << "index," << columns("w", d);
    if (m > 0) csv << ',' << columns("u", m);
    csv << '\n';
    for (std::size_t k = 0; k < r.witness.size(); ++k) {
        csv << k << ',' << joined(r.witness[k]);
        if (m > 0) {
            csv << ',';
            if (k < r.witnessControls.size()) csv << joined(r.witnessControls[k]);
            else csv << std::string(static_cast<std::size_t>(m - 1), ',');
        }
        csv << '\n';
    }
    writeFile(c.dir / name, csv.str());
    path = (c.dir / name).string();
}

std::string joinedCodes(const std::vector<std::string>& codes) {
    std::string s;
    for (std::size_t i = 0; i < codes.size(); ++i) s += (i ? "," : "") + codes[i];
    return s.empty() ? "-" : s;
}

int cmdQualify(const Context& c, const BolzaProblem& problem) {
    std::vector<QualificationReport> reports;
    QualificationReport cq;
    cq.condition = Condition::CQ;
    cq.verdict = Verdict::Holds;
    for (int t = 0; t < problem.horizon(); ++t) {
        QualificationReport s = checkCQ(problem.stage(t), c.config.tol);
        cq.stageReasons.push_back(s.reasonCode);
        if (s.verdict == Verdict::Fails && cq.verdict != Verdict::Fails) {
            cq.verdict = Verdict::Fails;
            cq.reasonCode = "stage" + std::to_string(t) + ":" + s.reasonCode;
            cq.witness = s.witness;
        } else if (s.verdict == Verdict::Undecided && cq.verdict == Verdict::Holds) {
            cq.verdict = Verdict::Undecided;
            cq.reasonCode = "stage" + std::to_string(t) + ":" + s.reasonCode;
        }
    }
    if (cq.verdict == Verdict::Holds) cq.reasonCode = "all-stages";
    reports.push_back(cq);
    reports.push_back(checkH(problem, c.config.tol));
    reports.push_back(checkHprime(problem, c.config.tol));
    if (problem.isMixed())
        for (auto& r : checkMixedCertificates(problem, CertificateInput{}, c.config.tol)) reports.push_back(r);

    std::ostringstream txt;
    bool failed = false;
    for (const auto& r : reports) {
        std::string witness;
        writeWitness(c, r, witness);
        txt << toString(r.condition) << ' ' << toString(r.verdict) << ' ' << r.reasonCode
            << " stages=" << joinedCodes(r.stageReasons) << " witness=" << witness << '\n';
        failed = failed || r.verdict == Verdict::Fails;
    }
    writeFile(c.dir / "qualify.txt", txt.str());
    c.out << txt.str();
    if (failed) {
        c.err << "qualification condition fails\n";
        return kVerificationFailed;
    }
    return kOk;
}

// Evaluates fn at every index on `jobs` threads; results land in index order.
template <typename F>
void parallelFor(std::size_t count, int jobs, const F& fn) {
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t i = next++; i < count; i = next++) fn(i);
    };
    std::vector<std::thread> pool;
    for (int j = 1; j < std::max(1, jobs); ++j) pool.emplace_back(worker);
    worker();
    for (auto& th : pool) th.join();
}

int cmdSweep(const Context& c, const BolzaProblem& problem) {
    const int n = problem.stateDim();
    require(n <= 2, ErrorCode::UnsupportedClass, "sweep: state dimension must be 1 or 2");
    checkTau(problem, c.config.tau);
    const GridAxis axis = c.config.grid.value_or(GridAxis{-5.0, 5.0, 101});
    const std::vector<double> nodes = axis.nodes();
    const std::size_t count = n == 1 ? nodes.size() : nodes.size() * nodes.size();
    std::vector<double> values(count);
    std::vector<SolveStatus> statuses(count);
    const PrimalModel model(problem);
    parallelFor(count, c.config.jobs, [&](std::size_t i) {
        Vector xi = n == 1 ? vec({nodes[i]}) : vec({nodes[i / nodes.size()], nodes[i % nodes.size()]});
        const SolveResult r = solvePrimal(model, c.config.tau, xi, c.config.tol);
        statuses[i] = r.status;
        values[i] = r.optimal() || r.status == SolveStatus::Infeasible ? r.value.raw() : NAN;
    });

    std::ostringstream csv;
    csv << (n == 1 ? "xi0" : "xi0,xi1") << ",theta,status\n";
    bool allSettled = true;
    for (std::size_t i = 0; i < count; ++i) {
        if (n == 1) csv << num(nodes[i]);
        else csv << num(nodes[i / nodes.size()]) << ',' << num(nodes[i % nodes.size()]);
        csv << ',' << num(values[i]) << ',' << toString(statuses[i]) << '\n';
        allSettled = allSettled && (statuses[i] == SolveStatus::Optimal || statuses[i] == SolveStatus::Infeasible);
    }
    writeFile(c.dir / "sweep.csv", csv.str());
    const std::string title = "theta_" + std::to_string(c.config.tau);
    const std::string svg = n == 1 ? svgLinePlot(nodes, values, {title, "xi", "theta"})
                                   : svgHeatmap(nodes, nodes, values, {title, "xi0", "xi1"});
    writeFile(c.dir / "sweep.svg", svg);
    c.out << "wrote " << (c.dir / "sweep.csv").string() << " and " << (c.dir / "sweep.svg").string() << '\n';
    if (!allSettled) {
        c.err << "solver non-optimal at some sweep nodes (see status column)\n";
        return kNotOptimal;
    }
    return kOk;
}

int cmdOracle(const Context& c, const BolzaProblem& problem) {
    const int n = problem.stateDim();
    std::string method = c.config.method;
    if (method == "auto") method = problem.isUnconstrained() && n <= 2 ? "riccati" : "dp";
    const GridAxis axis = c.config.grid.value_or(defaultGridAxis());
    ValueTable table;
    if (method == "riccati") {
        require(n <= 2, ErrorCode::UnsupportedClass, "oracle: state dimension must be 1 or 2");
        table = riccatiTable(problem, std::vector<GridAxis>(static_cast<std::size_t>(n), axis), c.config.tol);
    } else if (method == "dp") {
        table = gridValueDp(problem, axis, c.config.tol);
    } else {
        fail(ErrorCode::InvalidArgument, "--method must be auto, dp or riccati");
    }
    for (int tau = 0; tau <= problem.horizon(); ++tau) {
        std::ostringstream csv;
        table.writeCsv(csv, tau);
        writeFile(c.dir / ("oracle_tau" + std::to_string(tau) + ".csv"), csv.str());
    }
    for (const auto& w : table.warnings) c.err << "warning: " << w << '\n';
    c.out << "source " << toString(table.source) << "\nwrote " << problem.horizon() + 1 << " tables to "
          << c.dir.string() << '\n';
    return kOk;
}

}  // namespace

fs::path resolveOutputDir(const RunConfig& config) {
    if (!config.outDir.empty()) return config.outDir;
    if (const char* env = std::getenv("BOLZA_OUTPUT_DIR"); env && *env) return env;
    return ".";
}

int run(const RunConfig& config, std::ostream& out, std::ostream& err) {
    try {
        const fs::path dir = resolveOutputDir(config);
        fs::create_directories(dir);
        const Context c{config, dir, out, err};
        require(!config.problem.empty(), ErrorCode::InvalidArgument, "--problem is required");
        const BolzaProblem problem = loadProblem(config.problem);
        if (config.command == "solve") return cmdSolve(c, problem);
        if (config.command == "dualize") return cmdDualize(c, problem);
        if (config.command == "check-duality") return cmdCheckDuality(c, problem);
        if (config.command == "characteristics") return cmdCharacteristics(c, problem);
        if (config.command == "qualify") return cmdQualify(c, problem);
        if (config.command == "sweep") return cmdSweep(c, problem);
        if (config.command == "oracle") return cmdOracle(c, problem);
        err << "unknown command '" << config.command << "'\n";
        return kUsage;
    } catch (const Error& e) {
        err << "error: " << e.what() << '\n';
        return kUsage;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return kUsage;
    }
}

}  // namespace bolza::cli
