#include "bolza/convex_set.hpp"

#include <cmath>
#include <limits>
#include <ostream>

#include "bolza/errors.hpp"

namespace bolza {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kImplicitTol = 1e-8;

// max s  s.t.  rows z + s * mask <= rhs,  eq z = eqRhs,  s <= cap.
// Returns the optimal s (or -inf when the LP fails).
double maxSlack(const Matrix& rows, const Vector& rhs, const Vector& mask, const Matrix& eq, const Vector& eqRhs,
                double cap, Vector* argmax) {
    const int n = static_cast<int>(rows.cols());
    ConvexProgram lp(n + 1);
    lp.c(n) = -1.0;
    if (eq.rows() > 0) {
        Matrix E = Matrix::Zero(eq.rows(), n + 1);
        E.leftCols(n) = eq;
        lp.addEqualities(E, eqRhs);
    }
    Matrix G(rows.rows() + 1, n + 1);
    G.setZero();
    G.topLeftCorner(rows.rows(), n) = rows;
    G.block(0, n, rows.rows(), 1) = mask;
    G(rows.rows(), n) = 1.0;
    Vector h(rows.rows() + 1);
    h << rhs, cap;
    lp.addInequalities(G, h);
    ProgramOptions opt;
    opt.diagnose = false;
    ProgramSolution sol = solveProgram(lp, opt);
    if (sol.status != ProgramStatus::Optimal) {
        // Only possible failure is an empty feasible set.
        return -kInf;
    }
    if (argmax != nullptr) *argmax = sol.w.head(n);
    return sol.w(n);
}

}  // namespace

ConvexSet ConvexSet::wholeSpace(int dim) {
    require(dim > 0, ErrorCode::DimensionMismatch, "set dimension must be positive");
    ConvexSet s(Kind::WholeSpace, dim);
    s.lower_ = Vector::Constant(dim, -kInf);
    s.upper_ = Vector::Constant(dim, kInf);
    s.eqRows_ = Matrix(0, dim);
    s.inRows_ = Matrix(0, dim);
    s.eqRhs_ = Vector(0);
    s.inRhs_ = Vector(0);
    s.C_ = Matrix(0, dim);
    s.d_ = Vector(0);
    return s;
}

ConvexSet ConvexSet::box(Vector lower, Vector upper) {
    const auto dim = static_cast<int>(lower.size());
    require(dim > 0 && upper.size() == dim, ErrorCode::DimensionMismatch, "box bounds differ in length");
    for (int i = 0; i < dim; ++i) {
        require(!std::isnan(lower(i)) && !std::isnan(upper(i)), ErrorCode::InvalidArgument, "box bound is NaN");
        require(lower(i) != kInf && upper(i) != -kInf, ErrorCode::EmptySet, "box bound excludes every point");
        require(lower(i) <= upper(i), ErrorCode::EmptySet, "box lower bound exceeds upper bound");
    }
    ConvexSet s(Kind::Box, dim);
    s.lower_ = std::move(lower);
    s.upper_ = std::move(upper);
    std::vector<std::pair<int, double>> eq;
    std::vector<std::pair<int, double>> ineq;  // signed index: +i upper, -(i+1) lower
    for (int i = 0; i < dim; ++i) {
        const double lo = s.lower_(i);
        const double hi = s.upper_(i);
        if (lo == hi) {
            eq.emplace_back(i, lo);
            continue;
        }
        if (std::isfinite(hi)) ineq.emplace_back(i, hi);
        if (std::isfinite(lo)) ineq.emplace_back(-(i + 1), -lo);
    }
    s.eqRows_ = Matrix::Zero(static_cast<Eigen::Index>(eq.size()), dim);
    s.eqRhs_ = Vector(static_cast<Eigen::Index>(eq.size()));
    for (std::size_t k = 0; k < eq.size(); ++k) {
        s.eqRows_(static_cast<Eigen::Index>(k), eq[k].first) = 1.0;
        s.eqRhs_(static_cast<Eigen::Index>(k)) = eq[k].second;
    }
    s.inRows_ = Matrix::Zero(static_cast<Eigen::Index>(ineq.size()), dim);
    s.inRhs_ = Vector(static_cast<Eigen::Index>(ineq.size()));
    for (std::size_t k = 0; k < ineq.size(); ++k) {
        const int code = ineq[k].first;
        const auto row = static_cast<Eigen::Index>(k);
        if (code >= 0)
            s.inRows_(row, code) = 1.0;
        else
            s.inRows_(row, -code - 1) = -1.0;
        s.inRhs_(row) = ineq[k].second;
    }
    // Raw polyhedral form, handy for printing and serialization.
    s.C_ = Matrix(0, dim);
    s.d_ = Vector(0);
    return s;
}

ConvexSet ConvexSet::polyhedron(Matrix C, Vector d) {
    const auto dim = static_cast<int>(C.cols());
    require(dim > 0 && C.rows() == d.size(), ErrorCode::DimensionMismatch, "polyhedron rows and rhs differ");
    require(C.allFinite() && d.allFinite(), ErrorCode::InvalidArgument, "polyhedron data must be finite");
    ConvexSet s(Kind::Polyhedron, dim);
    s.C_ = std::move(C);
    s.d_ = std::move(d);
    s.lower_ = Vector::Constant(dim, -kInf);
    s.upper_ = Vector::Constant(dim, kInf);
    s.finalizePolyhedron();
    return s;
}

void ConvexSet::finalizePolyhedron() {
    std::vector<Eigen::Index> kept;
    for (Eigen::Index i = 0; i < C_.rows(); ++i) {
        const double norm = C_.row(i).norm();
        if (norm <= 1e-14) {
            require(d_(i) >= -1e-12, ErrorCode::EmptySet, "polyhedron has an infeasible zero row");
            continue;
        }
        kept.push_back(i);
    }
    Matrix rows(static_cast<Eigen::Index>(kept.size()), dim_);
    Vector rhs(static_cast<Eigen::Index>(kept.size()));
    for (std::size_t k = 0; k < kept.size(); ++k) {
        const double norm = C_.row(kept[k]).norm();
        rows.row(static_cast<Eigen::Index>(k)) = C_.row(kept[k]) / norm;
        rhs(static_cast<Eigen::Index>(k)) = d_(kept[k]) / norm;
    }
    eqRows_ = Matrix(0, dim_);
    eqRhs_ = Vector(0);
    if (rows.rows() == 0) {
        inRows_ = rows;
        inRhs_ = rhs;
        return;
    }
    const Vector ones = Vector::Ones(rows.rows());
    const double slack = maxSlack(rows, rhs, ones, eqRows_, eqRhs_, 1.0, nullptr);
    require(slack >= -kImplicitTol * (1.0 + infNorm(rhs)), ErrorCode::EmptySet, "polyhedron is empty");
    if (slack > kImplicitTol) {
        inRows_ = rows;
        inRhs_ = rhs;
        return;
    }
    // Lower-dimensional: find the rows that are tight on the whole set.
    std::vector<Eigen::Index> implicit, strict;
    for (Eigen::Index i = 0; i < rows.rows(); ++i) {
        Vector mask = Vector::Zero(rows.rows());
        mask(i) = 1.0;
        const double s = maxSlack(rows, rhs, mask, eqRows_, eqRhs_, 1.0, nullptr);
        (s <= kImplicitTol ? implicit : strict).push_back(i);
    }
    Matrix eqAll(static_cast<Eigen::Index>(implicit.size()), dim_);
    Vector eqAllRhs(static_cast<Eigen::Index>(implicit.size()));
    for (std::size_t k = 0; k < implicit.size(); ++k) {
        eqAll.row(static_cast<Eigen::Index>(k)) = rows.row(implicit[k]);
        eqAllRhs(static_cast<Eigen::Index>(k)) = rhs(implicit[k]);
    }
    // Reduce to an orthonormal set of independent equalities.
    Matrix basis = rangeBasis(eqAll.transpose(), 1e-10);
    Vector z0 = eqAll.completeOrthogonalDecomposition().solve(eqAllRhs);
    eqRows_ = basis.transpose();
    eqRhs_ = eqRows_ * z0;
    inRows_ = Matrix(static_cast<Eigen::Index>(strict.size()), dim_);
    inRhs_ = Vector(static_cast<Eigen::Index>(strict.size()));
    for (std::size_t k = 0; k < strict.size(); ++k) {
        inRows_.row(static_cast<Eigen::Index>(k)) = rows.row(strict[k]);
        inRhs_(static_cast<Eigen::Index>(k)) = rhs(strict[k]);
    }
}

bool ConvexSet::isCompact() const {
    if (kind_ == Kind::WholeSpace) return false;
    if (kind_ == Kind::Box) return lower_.allFinite() && upper_.allFinite();
    ConvexSet cone = recessionCone();
    for (int i = 0; i < dim_; ++i) {
        for (double sign : {1.0, -1.0}) {
            ConvexProgram lp(dim_);
            lp.c(i) = -sign;
            cone.addConstraintsTo(lp, 0);
            lp.addInequalities(Matrix::Identity(dim_, dim_), Vector::Ones(dim_));
            lp.addInequalities(-Matrix::Identity(dim_, dim_), Vector::Ones(dim_));
            ProgramOptions opt;
            opt.diagnose = false;
            ProgramSolution sol = solveProgram(lp, opt);
            if (sol.status == ProgramStatus::Optimal && -sol.objective > 1e-7) return false;
        }
    }
    return true;
}

bool ConvexSet::contains(const Vector& z, double tol) const {
    require(z.size() == dim_, ErrorCode::DimensionMismatch, "point dimension differs from set dimension");
    for (Eigen::Index i = 0; i < eqRows_.rows(); ++i)
        if (std::abs(eqRows_.row(i).dot(z) - eqRhs_(i)) > tol * (1.0 + std::abs(eqRhs_(i)))) return false;
    for (Eigen::Index i = 0; i < inRows_.rows(); ++i)
        if (inRows_.row(i).dot(z) - inRhs_(i) > tol * (1.0 + std::abs(inRhs_(i)))) return false;
    return true;
}

bool ConvexSet::inRelativeInterior(const Vector& z, double tolRi) const {
    require(z.size() == dim_, ErrorCode::DimensionMismatch, "point dimension differs from set dimension");
    for (Eigen::Index i = 0; i < eqRows_.rows(); ++i)
        if (std::abs(eqRows_.row(i).dot(z) - eqRhs_(i)) > 1e-9 * (1.0 + std::abs(eqRhs_(i)))) return false;
    for (Eigen::Index i = 0; i < inRows_.rows(); ++i)
        if (inRhs_(i) - inRows_.row(i).dot(z) <= tolRi) return false;
    return true;
}

ConvexSet ConvexSet::recessionCone() const {
    switch (kind_) {
        case Kind::WholeSpace: return *this;
        case Kind::Box: {
            Vector lo(dim_), hi(dim_);
            for (int i = 0; i < dim_; ++i) {
                lo(i) = std::isfinite(lower_(i)) ? 0.0 : -kInf;
                hi(i) = std::isfinite(upper_(i)) ? 0.0 : kInf;
            }
            return box(lo, hi);
        }
        case Kind::Polyhedron: {
            Matrix rows(eqRows_.rows() * 2 + inRows_.rows(), dim_);
            rows << eqRows_, -eqRows_, inRows_;
            if (rows.rows() == 0) return wholeSpace(dim_);
            return polyhedron(rows, Vector::Zero(rows.rows()));
        }
    }
    return *this;
}

void ConvexSet::addConstraintsTo(ConvexProgram& program, int offset) const {
    const int n = program.size();
    require(offset >= 0 && offset + dim_ <= n, ErrorCode::DimensionMismatch, "set does not fit the program");
    if (eqRows_.rows() > 0) {
        Matrix E = Matrix::Zero(eqRows_.rows(), n);
        E.middleCols(offset, dim_) = eqRows_;
        program.addEqualities(E, eqRhs_);
    }
    if (inRows_.rows() > 0) {
        Matrix G = Matrix::Zero(inRows_.rows(), n);
        G.middleCols(offset, dim_) = inRows_;
        program.addInequalities(G, inRhs_);
    }
}

double ConvexSet::maxMinSlack(Vector* argmax, double cap) const {
    if (inRows_.rows() == 0) {
        if (argmax != nullptr) {
            *argmax = eqRows_.rows() > 0 ? Vector(eqRows_.completeOrthogonalDecomposition().solve(eqRhs_))
                                         : Vector(Vector::Zero(dim_));
        }
        return cap;
    }
    return maxSlack(inRows_, inRhs_, Vector::Ones(inRows_.rows()), eqRows_, eqRhs_, cap, argmax);
}

std::ostream& operator<<(std::ostream& os, const ConvexSet& set) {
    switch (set.kind()) {
        case ConvexSet::Kind::WholeSpace: return os << "R^" << set.dim();
        case ConvexSet::Kind::Box: {
            os << "box";
            for (int i = 0; i < set.dim(); ++i) os << (i == 0 ? " " : " x ") << '[' << set.lower()(i) << ',' << set.upper()(i) << ']';
            return os;
        }
        case ConvexSet::Kind::Polyhedron:
            return os << "polyhedron(" << set.C().rows() << " rows, dim " << set.dim() << ')';
    }
    return os;
}

}  // namespace bolza
