// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The wcsee-lab Authors

#include "wcsee/convex.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <memory>
#include <ostream>

#include "wcsee/error.hpp"

namespace wcsee::convex {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

}  // namespace

// ---------------------------------------------------------------------------
// ConvexProgram

ConvexProgram::ConvexProgram(int n)
    : n_(n),
      obj_lin_(Vec::Zero(n)),
      eq_a_(0, n),
      eq_b_(0),
      lower_(Vec::Constant(n, -kInf)),
      upper_(Vec::Constant(n, kInf)) {
    if (n < 1) {
        throw DimensionMismatch("convex program needs at least one variable");
    }
}

void ConvexProgram::set_objective(const Vec& linear) {
    if (linear.size() != n_) throw DimensionMismatch("objective length");
    obj_lin_ = linear;
    obj_quad_.resize(0, 0);
}

void ConvexProgram::set_objective(const Vec& linear, const Mat& quad) {
    if (linear.size() != n_ || quad.rows() != n_ || quad.cols() != n_) {
        throw DimensionMismatch("objective dimensions");
    }
    obj_lin_ = linear;
    obj_quad_ = quad;
}

void ConvexProgram::add_affine(const Vec& row, double constant, std::string label) {
    if (row.size() != n_) throw DimensionMismatch("affine row length");
    SmoothConstraint c;
    c.lin = row;
    c.constant = constant;
    c.label = std::move(label);
    smooth_.push_back(std::move(c));
}

void ConvexProgram::add_quadratic(const Mat& p, const Vec& lin, double constant, std::string label) {
    if (p.rows() != n_ || p.cols() != n_ || lin.size() != n_) {
        throw DimensionMismatch("quadratic constraint dimensions");
    }
    SmoothConstraint c;
    c.quad = p;
    c.lin = lin;
    c.constant = constant;
    c.label = std::move(label);
    smooth_.push_back(std::move(c));
}

void ConvexProgram::add_smooth(SmoothConstraint con) {
    if (con.lin.size() == 0) con.lin = Vec::Zero(n_);
    if (con.lin.size() != n_) throw DimensionMismatch("smooth constraint length");
    if (con.quad.size() != 0 && (con.quad.rows() != n_ || con.quad.cols() != n_)) {
        throw DimensionMismatch("smooth constraint quadratic part");
    }
    for (const auto& t : con.terms) {
        if (t.row.size() != n_) throw DimensionMismatch("scalar term row length");
        if (t.weight < 0.0) throw DomainError("scalar term weights must be non-negative");
    }
    smooth_.push_back(std::move(con));
}

void ConvexProgram::add_cone(const Mat& f, const Vec& g, const Vec& c, double d, std::string label) {
    if (f.cols() != n_ || g.size() != f.rows() || c.size() != n_) {
        throw DimensionMismatch("cone constraint dimensions");
    }
    cones_.push_back({f, g, c, d, std::move(label)});
}

void ConvexProgram::add_equality(const Vec& row, double rhs) {
    if (row.size() != n_) throw DimensionMismatch("equality row length");
    eq_a_.conservativeResize(eq_a_.rows() + 1, n_);
    eq_a_.row(eq_a_.rows() - 1) = row.transpose();
    eq_b_.conservativeResize(eq_b_.size() + 1);
    eq_b_(eq_b_.size() - 1) = rhs;
}

void ConvexProgram::set_bounds(int i, double lo, double hi) {
    if (i < 0 || i >= n_) throw DimensionMismatch("bound index out of range");
    lower_(i) = lo;
    upper_(i) = hi;
}

namespace {

double term_value(const ScalarTerm& t, const Vec& x) {
    const double u = t.row.dot(x) + t.offset;
    if (!(u > 0.0)) return kInf;
    switch (t.kind) {
        case ScalarTerm::Kind::NegLog: return -t.weight * std::log(u);
        case ScalarTerm::Kind::NegPow: return -t.weight * std::pow(u, t.exponent);
        case ScalarTerm::Kind::Pow: return t.weight * std::pow(u, t.exponent);
    }
    return kInf;
}

// First and second derivative of a term with respect to its argument u.
std::pair<double, double> term_derivs(const ScalarTerm& t, double u) {
    switch (t.kind) {
        case ScalarTerm::Kind::NegLog: return {-t.weight / u, t.weight / (u * u)};
        case ScalarTerm::Kind::NegPow:
            return {-t.weight * t.exponent * std::pow(u, t.exponent - 1.0),
                    -t.weight * t.exponent * (t.exponent - 1.0) * std::pow(u, t.exponent - 2.0)};
        case ScalarTerm::Kind::Pow:
            return {t.weight * t.exponent * std::pow(u, t.exponent - 1.0),
                    t.weight * t.exponent * (t.exponent - 1.0) * std::pow(u, t.exponent - 2.0)};
    }
    return {0.0, 0.0};
}

double smooth_value(const SmoothConstraint& c, const Vec& x) {
    double v = c.lin.dot(x) + c.constant;
    if (c.quad.size() != 0) v += 0.5 * x.dot(c.quad * x);
    for (const auto& t : c.terms) v += term_value(t, x);
    return v;
}

double cone_gap(const ConeConstraint& c, const Vec& x) {
    return (c.F * x + c.g).norm() - (c.c.dot(x) + c.d);
}

}  // namespace

double ConvexProgram::objective_value(const Vec& x) const {
    double v = obj_lin_.dot(x);
    if (obj_quad_.size() != 0) v += 0.5 * x.dot(obj_quad_ * x);
    return v;
}

double ConvexProgram::max_violation(const Vec& x) const {
    double worst = -kInf;
    for (const auto& c : smooth_) worst = std::max(worst, smooth_value(c, x));
    for (const auto& c : cones_) worst = std::max(worst, cone_gap(c, x));
    for (int i = 0; i < n_; ++i) {
        if (std::isfinite(lower_(i))) worst = std::max(worst, lower_(i) - x(i));
        if (std::isfinite(upper_(i))) worst = std::max(worst, x(i) - upper_(i));
    }
    if (eq_a_.rows() > 0) worst = std::max(worst, (eq_a_ * x - eq_b_).cwiseAbs().maxCoeff());
    return worst;
}

const char* to_string(SolveStatus s) {
    switch (s) {
        case SolveStatus::Optimal: return "optimal";
        case SolveStatus::Infeasible: return "infeasible";
        case SolveStatus::MaxIter: return "max_iter";
    }
    return "unknown";
}

// ---------------------------------------------------------------------------
// Interior-point machinery

namespace {

// One inequality g(z) <= 0 in the (possibly augmented) variable z. When
// `shift` >= 0 the constraint is relaxed by the phase-1 variable z(shift).
class Inequality {
  public:
    virtual ~Inequality() = default;
    virtual double value(const Vec& z) const = 0;  // +inf outside the domain
    virtual void gradient(const Vec& z, Vec& g) const = 0;
    virtual void add_hessian(const Vec& z, double w, Mat& h) const = 0;
};

class SmoothIneq final : public Inequality {
  public:
    SmoothIneq(const SmoothConstraint& c, int n, int shift) : c_(c), n_(n), shift_(shift) {}

    double value(const Vec& z) const override {
        const double v = smooth_value(c_, z.head(n_));
        return shift_ >= 0 ? v - z(shift_) : v;
    }

    void gradient(const Vec& z, Vec& g) const override {
        const auto x = z.head(n_);
        g.setZero(z.size());
        g.head(n_) = c_.lin;
        if (c_.quad.size() != 0) g.head(n_) += c_.quad * x;
        for (const auto& t : c_.terms) {
            const double u = t.row.dot(x) + t.offset;
            g.head(n_) += term_derivs(t, u).first * t.row;
        }
        if (shift_ >= 0) g(shift_) = -1.0;
    }

    void add_hessian(const Vec& z, double w, Mat& h) const override {
        const auto x = z.head(n_);
        if (c_.quad.size() != 0) h.topLeftCorner(n_, n_) += w * c_.quad;
        for (const auto& t : c_.terms) {
            const double u = t.row.dot(x) + t.offset;
            h.topLeftCorner(n_, n_) += (w * term_derivs(t, u).second) * (t.row * t.row.transpose());
        }
    }

  private:
    const SmoothConstraint& c_;
    int n_;
    int shift_;
};

// ||F x + g|| <= c'x + d (+ s), as the smooth convex function
// ||Fx+g||^2 / w - w with w = c'x + d (+ s) > 0.
class ConeIneq final : public Inequality {
  public:
    ConeIneq(const ConeConstraint& c, int n, int shift) : c_(c), n_(n), shift_(shift) {}

    double value(const Vec& z) const override {
        const double w = affine(z);
        if (!(w > 0.0)) return kInf;
        const Vec r = c_.F * z.head(n_) + c_.g;
        return r.squaredNorm() / w - w;
    }

    void gradient(const Vec& z, Vec& g) const override {
        const double w = affine(z);
        const Vec r = c_.F * z.head(n_) + c_.g;
        const double rr = r.squaredNorm();
        g = (-(rr / (w * w)) - 1.0) * ctilde(z.size());
        g.head(n_) += (2.0 / w) * (c_.F.transpose() * r);
    }

    void add_hessian(const Vec& z, double wt, Mat& h) const override {
        const double w = affine(z);
        const Vec r = c_.F * z.head(n_) + c_.g;
        const double rr = r.squaredNorm();
        const Vec ct = ctilde(z.size());
        Vec ftr = Vec::Zero(z.size());
        ftr.head(n_) = c_.F.transpose() * r;
        h.topLeftCorner(n_, n_) += (wt * 2.0 / w) * (c_.F.transpose() * c_.F);
        h -= (wt * 2.0 / (w * w)) * (ftr * ct.transpose() + ct * ftr.transpose());
        h += (wt * 2.0 * rr / (w * w * w)) * (ct * ct.transpose());
    }

  private:
    double affine(const Vec& z) const {
        double w = c_.c.dot(z.head(n_)) + c_.d;
        if (shift_ >= 0) w += z(shift_);
        return w;
    }
    Vec ctilde(Eigen::Index size) const {
        Vec ct = Vec::Zero(size);
        ct.head(n_) = c_.c;
        if (shift_ >= 0) ct(shift_) = 1.0;
        return ct;
    }

    const ConeConstraint& c_;
    int n_;
    int shift_;
};

struct Problem {
    int dim = 0;
    Vec lin;
    Mat quad;  // empty if none
    std::vector<std::unique_ptr<Inequality>> ineqs;
    Mat eq_a;
    Vec eq_b;
};

struct PdipOutcome {
    SolveStatus status = SolveStatus::MaxIter;
    Vec z;
    int iterations = 0;
    double gap = 0.0;
    double residual = 0.0;
};

double objective(const Problem& p, const Vec& z) {
    double v = p.lin.dot(z);
    if (p.quad.size() != 0) v += 0.5 * z.dot(p.quad * z);
    return v;
}

Vec objective_gradient(const Problem& p, const Vec& z) {
    Vec g = p.lin;
    if (p.quad.size() != 0) g += p.quad * z;
    return g;
}

// Log-barrier path following from a z strictly inside every inequality.
// Equalities may start violated; centering then runs infeasible-start Newton.
PdipOutcome run_barrier(const Problem& p, Vec z, const SolverOptions& opts) {
    const int n = p.dim;
    const auto m = static_cast<Eigen::Index>(p.ineqs.size());
    const Eigen::Index neq = p.eq_a.rows();
    constexpr double kAlpha = 0.01;
    constexpr double kBeta = 0.5;

    // Each inequality is rescaled by its gradient size at the start point.
    Vec sc = Vec::Ones(m);
    {
        Vec gi(n);
        for (Eigen::Index i = 0; i < m; ++i) {
            p.ineqs[i]->gradient(z, gi);
            sc(i) = 1.0 / std::max(1.0, gi.cwiseAbs().maxCoeff());
        }
    }
    auto eval_all = [&](const Vec& at, Vec& fv) {
        for (Eigen::Index i = 0; i < m; ++i) fv(i) = sc(i) * p.ineqs[i]->value(at);
    };
    auto jac_into = [&](const Vec& at, Mat& out) {
        Vec gi(n);
        for (Eigen::Index i = 0; i < m; ++i) {
            p.ineqs[i]->gradient(at, gi);
            out.row(i) = sc(i) * gi.transpose();
        }
    };
    auto inside = [](const Vec& fv) { return (fv.array() < 0.0).all(); };
    auto barrier = [](const Vec& fv) { return -(-fv.array()).log().sum(); };

    Vec f(m);
    Mat df(m, n);
    eval_all(z, f);
    jac_into(z, df);

    double t = 1.0;
    {
        const Vec g0 = objective_gradient(p, z);
        Vec gphi = Vec::Zero(n);
        for (Eigen::Index i = 0; i < m; ++i) gphi -= df.row(i).transpose() / f(i);
        if (m > 0 && g0.squaredNorm() > 0.0) {
            const double fit = -g0.dot(gphi) / g0.squaredNorm();
            if (fit > 0.0) t = std::clamp(fit, 1e-2, 1e4);
        }
    }
    const double b_scale = 1.0 + (neq > 0 ? p.eq_b.cwiseAbs().maxCoeff() : 0.0);
    const double feas_tol = 1e-9 * b_scale;

    PdipOutcome out;
    Vec nu = Vec::Zero(neq);
    int total = 0;
    int stalls = 0;
    while (true) {
        bool stalled = false;
        int steps = 0;
        // Centering: minimize t f0 + phi.
        while (true) {
            if (++steps > 60) {
                stalled = true;
                break;
            }
            if (total >= opts.max_iter) {
                out.status = SolveStatus::MaxIter;
                out.z = z;
                out.iterations = total;
                return out;
            }
            Vec grad = t * objective_gradient(p, z);
            Mat h = Mat::Zero(n, n);
            if (p.quad.size() != 0) h += t * p.quad;
            for (Eigen::Index i = 0; i < m; ++i) {
                const double inv = -1.0 / f(i);
                grad += inv * df.row(i).transpose();
                p.ineqs[i]->add_hessian(z, sc(i) * inv, h);
                h += (inv * inv) * (df.row(i).transpose() * df.row(i));
            }
            h.diagonal().array() += 1e-13 * std::max(1.0, h.diagonal().cwiseAbs().maxCoeff());
            const Vec r_pri = neq > 0 ? Vec(p.eq_a * z - p.eq_b) : Vec(0);
            const double rp = r_pri.size() > 0 ? r_pri.norm() : 0.0;

            Mat kkt = Mat::Zero(n + neq, n + neq);
            kkt.topLeftCorner(n, n) = h;
            Vec rhs(n + neq);
            rhs.head(n) = -grad;
            if (neq > 0) {
                kkt.topRightCorner(n, neq) = p.eq_a.transpose();
                kkt.bottomLeftCorner(neq, n) = p.eq_a;
                rhs.tail(neq) = -r_pri;
            }
            const Vec sol = kkt.partialPivLu().solve(rhs);
            if (!sol.allFinite()) {
                stalled = true;
                break;
            }
            const Vec dz = sol.head(n);
            const Vec nu_plus = sol.tail(neq);
            const double dec2 = dz.dot(h * dz);
            const bool eq_ok = rp <= feas_tol;
            // Centering accuracy is limited by roundoff in t f0 at large t.
            const double dec_tol = 1e-9 + 1e-13 * t * std::max(1.0, std::abs(objective(p, z)));
            if (eq_ok && 0.5 * dec2 <= dec_tol) {
                nu = nu_plus;
                break;
            }

            double step = 1.0;
            Vec z_new;
            Vec f_new(m);
            bool ok = false;
            if (eq_ok) {
                const double psi = t * objective(p, z) + barrier(f);
                const double slope = grad.dot(dz);
                while (step > 1e-16) {
                    z_new = z + step * dz;
                    eval_all(z_new, f_new);
                    if (inside(f_new)) {
                        const double psi_new = t * objective(p, z_new) + barrier(f_new);
                        if (std::isfinite(psi_new) && psi_new <= psi + kAlpha * step * slope) {
                            ok = true;
                            break;
                        }
                    }
                    step *= kBeta;
                }
            } else {
                auto res_norm = [&](const Vec& zz, const Vec& ff, const Vec& nn) {
                    Vec g = t * objective_gradient(p, zz);
                    Mat dff(m, n);
                    jac_into(zz, dff);
                    for (Eigen::Index i = 0; i < m; ++i) g -= dff.row(i).transpose() / ff(i);
                    if (neq > 0) g += p.eq_a.transpose() * nn;
                    const Vec rr = p.eq_a * zz - p.eq_b;
                    return std::sqrt(g.squaredNorm() + rr.squaredNorm());
                };
                const double r0 = res_norm(z, f, nu);
                while (step > 1e-16) {
                    z_new = z + step * dz;
                    eval_all(z_new, f_new);
                    if (inside(f_new) && res_norm(z_new, f_new, nu + step * (nu_plus - nu)) <= (1.0 - kAlpha * step) * r0) {
                        ok = true;
                        break;
                    }
                    step *= kBeta;
                }
            }
            ++total;
            if (!ok) {
                stalled = true;
                break;
            }
            if (neq > 0) nu += step * (nu_plus - nu);
            z = z_new;
            f = f_new;
            jac_into(z, df);
        }

        // Dual estimate from the centering conditions.
        Vec rd_vec = objective_gradient(p, z);
        for (Eigen::Index i = 0; i < m; ++i) rd_vec += (-1.0 / (t * f(i))) * df.row(i).transpose();
        if (neq > 0) rd_vec += p.eq_a.transpose() * (nu / t);
        const double rp = neq > 0 ? (p.eq_a * z - p.eq_b).norm() : 0.0;
        out.gap = static_cast<double>(m) / t;
        out.residual = std::max(rd_vec.norm(), rp);
        out.z = z;
        out.iterations = total;

        stalls = stalled ? stalls + 1 : 0;
        if (out.gap <= opts.tol && rp <= feas_tol) {
            out.status = SolveStatus::Optimal;
            return out;
        }
        if (stalls >= 3) {
            out.status = SolveStatus::MaxIter;
            return out;
        }
        t *= opts.mu;
    }
}

void add_bound_rows(const ConvexProgram& prog, std::vector<SmoothConstraint>& bounds) {
    const int n = prog.dim();
    for (int i = 0; i < n; ++i) {
        if (std::isfinite(prog.upper()(i))) {
            SmoothConstraint c;
            c.lin = Vec::Unit(n, i);
            c.constant = -prog.upper()(i);
            bounds.push_back(std::move(c));
        }
        if (std::isfinite(prog.lower()(i))) {
            SmoothConstraint c;
            c.lin = -Vec::Unit(n, i);
            c.constant = prog.lower()(i);
            bounds.push_back(std::move(c));
        }
    }
}

Vec default_start(const ConvexProgram& prog) {
    Vec x = Vec::Zero(prog.dim());
    for (int i = 0; i < prog.dim(); ++i) {
        const double lo = prog.lower()(i);
        const double hi = prog.upper()(i);
        if (std::isfinite(lo) && std::isfinite(hi)) {
            x(i) = 0.5 * (lo + hi);
        } else if (std::isfinite(lo)) {
            x(i) = std::max(0.0, lo + 1.0);
        } else if (std::isfinite(hi)) {
            x(i) = std::min(0.0, hi - 1.0);
        }
    }
    return x;
}

}  // namespace

SolveResult solve(const ConvexProgram& prog, const SolverOptions& opts) {
    const int n = prog.dim();
    std::vector<SmoothConstraint> bounds;
    add_bound_rows(prog, bounds);

    Vec x0 = opts.start ? *opts.start : default_start(prog);
    if (x0.size() != n) throw DimensionMismatch("solver start has wrong length");

    SolveResult result;

    // Strict feasibility of the start, and the phase-1 shift it would need.
    double worst = -kInf;
    bool in_domain = true;
    auto track = [&](double v) {
        if (!std::isfinite(v)) in_domain = false;
        worst = std::max(worst, v);
    };
    for (const auto& c : prog.smooth()) track(smooth_value(c, x0));
    for (const auto& c : bounds) track(smooth_value(c, x0));
    for (const auto& c : prog.cones()) worst = std::max(worst, cone_gap(c, x0));
    if (!in_domain) {
        // Only log/power terms have restricted domains.
        result.status = SolveStatus::Infeasible;
        result.x = x0;
        return result;
    }
    bool strictly_feasible = worst < 0.0;
    if (strictly_feasible) {
        for (const auto& c : prog.cones()) {
            // The smooth cone form also needs c'x + d > 0.
            if (!(c.c.dot(x0) + c.d > 0.0)) strictly_feasible = false;
        }
    }

    int iterations = 0;
    if (!strictly_feasible) {
        // Phase 1: minimize s subject to g_i(x) <= s, s >= -1.
        Problem ph;
        ph.dim = n + 1;
        ph.lin = Vec::Unit(n + 1, n);
        for (const auto& c : prog.smooth()) ph.ineqs.push_back(std::make_unique<SmoothIneq>(c, n, n));
        for (const auto& c : bounds) ph.ineqs.push_back(std::make_unique<SmoothIneq>(c, n, n));
        for (const auto& c : prog.cones()) ph.ineqs.push_back(std::make_unique<ConeIneq>(c, n, n));
        SmoothConstraint floor_con;
        floor_con.lin = Vec::Zero(n);
        floor_con.constant = -1.0;
        ph.ineqs.push_back(std::make_unique<SmoothIneq>(floor_con, n, n));
        ph.eq_a = Mat::Zero(prog.eq_matrix().rows(), n + 1);
        ph.eq_a.leftCols(n) = prog.eq_matrix();
        ph.eq_b = prog.eq_rhs();

        Vec z0(n + 1);
        z0.head(n) = x0;
        z0(n) = std::max(worst, -0.5) + std::max(1.0, std::abs(worst));
        SolverOptions ph_opts = opts;
        ph_opts.tol = std::min(opts.tol, 1e-9);
        const PdipOutcome ph_out = run_barrier(ph, z0, ph_opts);
        iterations += ph_out.iterations;
        const double s_star = ph_out.z(n);
        const double eq_res =
            prog.eq_matrix().rows() > 0 ? (prog.eq_matrix() * ph_out.z.head(n) - prog.eq_rhs()).norm() : 0.0;
        if (!(s_star < -1e-12) || eq_res > 1e-6) {
            result.status = SolveStatus::Infeasible;
            result.x = ph_out.z.head(n);
            result.iterations = iterations;
            return result;
        }
        x0 = ph_out.z.head(n);
    }

    Problem main;
    main.dim = n;
    main.lin = prog.objective_linear();
    main.quad = prog.objective_quad();
    for (const auto& c : prog.smooth()) main.ineqs.push_back(std::make_unique<SmoothIneq>(c, n, -1));
    for (const auto& c : bounds) main.ineqs.push_back(std::make_unique<SmoothIneq>(c, n, -1));
    for (const auto& c : prog.cones()) main.ineqs.push_back(std::make_unique<ConeIneq>(c, n, -1));
    main.eq_a = prog.eq_matrix();
    main.eq_b = prog.eq_rhs();

    const PdipOutcome out = run_barrier(main, x0, opts);
    result.status = out.status;
    result.x = out.z;
    result.objective = prog.objective_value(out.z);
    result.iterations = iterations + out.iterations;
    result.gap = out.gap;
    result.residual = out.residual;
    return result;
}

// ---------------------------------------------------------------------------
// Text dump

namespace {

void put_values(std::ostream& out, const Eigen::Ref<const Vec>& v) {
    for (Eigen::Index i = 0; i < v.size(); ++i) out << ' ' << v(i);
}

void put_matrix(std::ostream& out, const Mat& m) {
    for (Eigen::Index r = 0; r < m.rows(); ++r)
        for (Eigen::Index c = 0; c < m.cols(); ++c) out << ' ' << m(r, c);
}

const char* kind_name(ScalarTerm::Kind k) {
    switch (k) {
        case ScalarTerm::Kind::NegLog: return "neglog";
        case ScalarTerm::Kind::NegPow: return "negpow";
        case ScalarTerm::Kind::Pow: return "pow";
    }
    return "?";
}

std::string safe_label(const std::string& s) { return s.empty() ? "-" : s; }

}  // namespace

void write_program(std::ostream& out, const ConvexProgram& prog) {
    const auto old = out.precision(17);
    const int n = prog.dim();
    out << "n " << n << '\n';
    out << "objective";
    put_values(out, prog.objective_linear());
    out << '\n';
    if (prog.objective_quad().size() != 0) {
        out << "objective_quad";
        put_matrix(out, prog.objective_quad());
        out << '\n';
    }
    for (int i = 0; i < n; ++i) {
        if (std::isfinite(prog.lower()(i)) || std::isfinite(prog.upper()(i))) {
            out << "bound " << i << ' ' << prog.lower()(i) << ' ' << prog.upper()(i) << '\n';
        }
    }
    for (Eigen::Index r = 0; r < prog.eq_matrix().rows(); ++r) {
        out << "eq";
        put_values(out, prog.eq_matrix().row(r).transpose());
        out << ' ' << prog.eq_rhs()(r) << '\n';
    }
    for (const auto& c : prog.smooth()) {
        out << "smooth " << safe_label(c.label) << " constant " << c.constant << " lin";
        put_values(out, c.lin);
        out << " quad";
        if (c.quad.size() == 0) {
            out << " none";
        } else {
            put_matrix(out, c.quad);
        }
        out << " terms " << c.terms.size() << '\n';
        for (const auto& t : c.terms) {
            out << "  term " << kind_name(t.kind) << ' ' << t.weight << ' ' << t.offset << ' ' << t.exponent;
            put_values(out, t.row);
            out << '\n';
        }
    }
    for (const auto& c : prog.cones()) {
        out << "cone " << safe_label(c.label) << " rows " << c.F.rows() << " F";
        put_matrix(out, c.F);
        out << " g";
        put_values(out, c.g);
        out << " c";
        put_values(out, c.c);
        out << " d " << c.d << '\n';
    }
    out.precision(old);
}

}  // namespace wcsee::convex
