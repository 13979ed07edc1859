#include "bolza/problem_io.hpp"

#include <cmath>
#include <fstream>
#include <limits>
#include <set>
#include <sstream>

#include <nlohmann/json.hpp>

#include "bolza/errors.hpp"

namespace bolza {

namespace {

using nlohmann::json;
constexpr double kInf = std::numeric_limits<double>::infinity();

[[noreturn]] void parseFail(const std::string& where, const std::string& what) {
    fail(ErrorCode::ParseError, where + ": " + what);
}

void onlyFields(const json& obj, const std::string& where, std::initializer_list<const char*> allowed) {
    if (!obj.is_object()) parseFail(where, "expected an object");
    const std::set<std::string> ok(allowed.begin(), allowed.end());
    for (const auto& [key, value] : obj.items())
        if (!ok.count(key)) parseFail(where, "unknown field '" + key + "'");
}

const json& field(const json& obj, const std::string& where, const char* name) {
    if (!obj.contains(name)) parseFail(where, std::string("missing field '") + name + "'");
    return obj.at(name);
}

double number(const json& v, const std::string& where) {
    if (!v.is_number()) parseFail(where, "expected a number");
    const double d = v.get<double>();
    if (!std::isfinite(d)) parseFail(where, "expected a finite number");
    return d;
}

// Box bound: a number, null (infinite) or "inf" / "-inf".
double bound(const json& v, const std::string& where, double infinite) {
    if (v.is_null()) return infinite;
    if (v.is_string()) {
        const auto s = v.get<std::string>();
        if (s == "inf" || s == "+inf") return kInf;
        if (s == "-inf") return -kInf;
        parseFail(where, "bad bound '" + s + "'");
    }
    return number(v, where);
}

Vector vector(const json& v, const std::string& where) {
    if (!v.is_array()) parseFail(where, "expected an array");
    Vector out(static_cast<Eigen::Index>(v.size()));
    for (std::size_t i = 0; i < v.size(); ++i)
        out(static_cast<Eigen::Index>(i)) = number(v[i], where + "[" + std::to_string(i) + "]");
    return out;
}

Matrix matrix(const json& v, const std::string& where) {
    if (!v.is_array()) parseFail(where, "expected an array of rows");
    if (v.empty()) return Matrix(0, 0);
    const std::size_t cols = v[0].is_array() ? v[0].size() : 0;
    Matrix out(static_cast<Eigen::Index>(v.size()), static_cast<Eigen::Index>(cols));
    for (std::size_t i = 0; i < v.size(); ++i) {
        const std::string w = where + "[" + std::to_string(i) + "]";
        if (!v[i].is_array() || v[i].size() != cols) parseFail(w, "ragged matrix");
        for (std::size_t j = 0; j < cols; ++j)
            out(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = number(v[i][j], w);
    }
    return out;
}

void expectShape(const Matrix& M, Eigen::Index rows, Eigen::Index cols, const std::string& where) {
    if (M.rows() != rows || M.cols() != cols)
        parseFail(where, "expected " + std::to_string(rows) + "x" + std::to_string(cols) + ", got " +
                             std::to_string(M.rows()) + "x" + std::to_string(M.cols()));
}

ConvexSet parseSet(const json& v, int dim, const std::string& where) {
    if (!v.is_object()) parseFail(where, "expected an object");
    const auto type = field(v, where, "type");
    if (!type.is_string()) parseFail(where + ".type", "expected a string");
    const auto kind = type.get<std::string>();
    if (kind == "all") {
        onlyFields(v, where, {"type"});
        return ConvexSet::wholeSpace(dim);
    }
    if (kind == "box") {
        onlyFields(v, where, {"type", "lower", "upper"});
        const auto& lo = field(v, where, "lower");
        const auto& hi = field(v, where, "upper");
        if (!lo.is_array() || !hi.is_array() || static_cast<int>(lo.size()) != dim ||
            static_cast<int>(hi.size()) != dim)
            parseFail(where, "box bounds need length " + std::to_string(dim));
        Vector l(dim), u(dim);
        for (int i = 0; i < dim; ++i) {
            l(i) = bound(lo[static_cast<std::size_t>(i)], where + ".lower", -kInf);
            u(i) = bound(hi[static_cast<std::size_t>(i)], where + ".upper", kInf);
        }
        return ConvexSet::box(l, u);
    }
    if (kind == "poly") {
        onlyFields(v, where, {"type", "C", "d"});
        const Matrix C = matrix(field(v, where, "C"), where + ".C");
        const Vector d = vector(field(v, where, "d"), where + ".d");
        if (C.rows() == 0) return ConvexSet::wholeSpace(dim);
        expectShape(C, d.size(), dim, where + ".C");
        return ConvexSet::polyhedron(C, d);
    }
    parseFail(where + ".type", "expected \"all\", \"box\" or \"poly\", got \"" + kind + "\"");
}

MixedFunction parseMixedFunction(const json& v, int dim, const std::string& where) {
    onlyFields(v, where, {"P", "q", "r"});
    const Matrix P = v.contains("P") ? matrix(v.at("P"), where + ".P") : Matrix::Zero(dim, dim);
    const Vector q = v.contains("q") ? vector(v.at("q"), where + ".q") : Vector::Zero(dim);
    const double r = v.contains("r") ? number(v.at("r"), where + ".r") : 0.0;
    expectShape(P, dim, dim, where + ".P");
    if (q.size() != dim) parseFail(where + ".q", "expected length " + std::to_string(dim));
    return MixedFunction::quadratic(P, q, r);
}

json matrixJson(const Matrix& M) {
    json rows = json::array();
    for (Eigen::Index i = 0; i < M.rows(); ++i) {
        json row = json::array();
        for (Eigen::Index j = 0; j < M.cols(); ++j) row.push_back(M(i, j));
        rows.push_back(row);
    }
    return rows;
}

json vectorJson(const Vector& v) {
    json out = json::array();
    for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(v(i));
    return out;
}

json boundJson(double b) { return std::isfinite(b) ? json(b) : json(nullptr); }

json setJson(const ConvexSet& s) {
    switch (s.kind()) {
        case ConvexSet::Kind::WholeSpace: return {{"type", "all"}};
        case ConvexSet::Kind::Box: {
            json lo = json::array(), hi = json::array();
            for (int i = 0; i < s.dim(); ++i) {
                lo.push_back(boundJson(s.lower()(i)));
                hi.push_back(boundJson(s.upper()(i)));
            }
            return {{"type", "box"}, {"lower", lo}, {"upper", hi}};
        }
        case ConvexSet::Kind::Polyhedron: return {{"type", "poly"}, {"C", matrixJson(s.C())}, {"d", vectorJson(s.d())}};
    }
    return {};
}

json mixedFunctionJson(const MixedFunction& f) {
    require(f.kind() == MixedFunction::Kind::QuadraticAffine, ErrorCode::UnsupportedClass,
            "problem json: callable mixed functions cannot be serialized");
    const QuadraticFunction& q = f.quadraticData();
    return {{"P", matrixJson(q.P())}, {"q", vectorJson(q.q())}, {"r", q.r()}};
}

}  // namespace

BolzaProblem parseProblem(std::string_view text) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& e) {
        fail(ErrorCode::ParseError, std::string("problem json: ") + e.what());
    }
    onlyFields(doc, "problem", {"horizon", "stages", "terminal"});
    const auto& h = field(doc, "problem", "horizon");
    if (!h.is_number_integer() || h.get<long long>() < 1) parseFail("horizon", "expected a positive integer");
    const auto horizon = static_cast<std::size_t>(h.get<long long>());
    const auto& stagesJson = field(doc, "problem", "stages");
    if (!stagesJson.is_array() || stagesJson.size() != horizon)
        parseFail("stages", "expected an array of " + std::to_string(horizon) + " stages");

    std::vector<StageSpec> stages;
    int n = -1;
    for (std::size_t t = 0; t < horizon; ++t) {
        const std::string w = "stages[" + std::to_string(t) + "]";
        const json& s = stagesJson[t];
        onlyFields(s, w, {"A", "B", "phi", "Q", "R", "stateSet", "controlSet", "mixed"});
        const Matrix A = matrix(field(s, w, "A"), w + ".A");
        if (n < 0) n = static_cast<int>(A.rows());
        if (n == 0) parseFail(w + ".A", "state dimension must be positive");
        expectShape(A, n, n, w + ".A");
        const Matrix B = matrix(field(s, w, "B"), w + ".B");
        if (B.rows() != n || B.cols() == 0) parseFail(w + ".B", "expected n rows and at least one column");
        const int m = static_cast<int>(B.cols());
        const Vector phi = s.contains("phi") ? vector(s.at("phi"), w + ".phi") : Vector::Zero(n);
        if (phi.size() != n) parseFail(w + ".phi", "expected length " + std::to_string(n));
        const Matrix Q = s.contains("Q") ? matrix(s.at("Q"), w + ".Q") : Matrix::Zero(n, n);
        expectShape(Q, n, n, w + ".Q");
        const Matrix R = matrix(field(s, w, "R"), w + ".R");
        expectShape(R, m, m, w + ".R");
        StageSpec st = makeStage(A, B, phi, Q, R);
        if (s.contains("stateSet")) st.stateSet = parseSet(s.at("stateSet"), n, w + ".stateSet");
        if (s.contains("controlSet")) st.controlSet = parseSet(s.at("controlSet"), m, w + ".controlSet");
        if (s.contains("mixed")) {
            const json& mx = s.at("mixed");
            onlyFields(mx, w + ".mixed", {"constraint", "runningCost"});
            MixedConstraintSpec spec;
            if (mx.contains("constraint"))
                spec.constraint = parseMixedFunction(mx.at("constraint"), n + m, w + ".mixed.constraint");
            if (mx.contains("runningCost"))
                spec.runningCost = parseMixedFunction(mx.at("runningCost"), n + m, w + ".mixed.runningCost");
            st.mixed = std::move(spec);
        }
        stages.push_back(std::move(st));
    }

    const json& term = field(doc, "problem", "terminal");
    onlyFields(term, "terminal", {"Qf", "set"});
    const Matrix Qf = matrix(field(term, "terminal", "Qf"), "terminal.Qf");
    expectShape(Qf, n, n, "terminal.Qf");
    TerminalCost g = makeTerminal(Qf);
    if (term.contains("set")) g.set = parseSet(term.at("set"), n, "terminal.set");

    try {
        return BolzaProblem(std::move(stages), std::move(g));
    } catch (const Error& e) {
        fail(ErrorCode::ParseError, std::string("problem: ") + e.what());
    }
}

BolzaProblem loadProblem(const std::filesystem::path& path) {
    std::ifstream in(path);
    require(in.good(), ErrorCode::ParseError, "cannot open problem file '" + path.string() + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    return parseProblem(ss.str());
}

std::string problemToJson(const BolzaProblem& problem, int indent) {
    json doc;
    doc["horizon"] = problem.horizon();
    json stages = json::array();
    for (const StageSpec& s : problem.stages()) {
        json st;
        st["A"] = matrixJson(s.A);
        st["B"] = matrixJson(s.B);
        st["phi"] = vectorJson(s.phi);
        st["Q"] = matrixJson(s.Q);
        st["R"] = matrixJson(s.R);
        st["stateSet"] = setJson(s.stateSet);
        st["controlSet"] = setJson(s.controlSet);
        if (s.mixed) {
            json mx = json::object();
            if (s.mixed->constraint) mx["constraint"] = mixedFunctionJson(*s.mixed->constraint);
            if (s.mixed->runningCost) mx["runningCost"] = mixedFunctionJson(*s.mixed->runningCost);
            st["mixed"] = mx;
        }
        stages.push_back(st);
    }
    doc["stages"] = stages;
    doc["terminal"] = {{"Qf", matrixJson(problem.terminal().Qf)}, {"set", setJson(problem.terminal().set)}};
    return doc.dump(indent) + "\n";
}

}  // namespace bolza
