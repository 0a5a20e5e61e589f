// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The wcsee-lab Authors

#ifndef WCSEE_CONVEX_HPP
#define WCSEE_CONVEX_HPP

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "wcsee/types.hpp"

namespace wcsee::convex {

// A convex scalar function applied to an affine map u = row' x + offset.
struct ScalarTerm {
    enum class Kind {
        NegLog,  // -weight * log(u),        u > 0
        NegPow,  // -weight * u^exponent,    u > 0, 0 < exponent <= 1
        Pow,     //  weight * u^exponent,    u > 0, exponent >= 1
    };
    Kind kind = Kind::NegLog;
    double weight = 1.0;
    Vec row;
    double offset = 0.0;
    double exponent = 1.0;
};

// f(x) = 0.5 x'Px + lin'x + constant + sum(terms) <= 0. P must be PSD (or empty).
struct SmoothConstraint {
    Mat quad;
    Vec lin;
    double constant = 0.0;
    std::vector<ScalarTerm> terms;
    std::string label;
};

// ||F x + g|| <= c'x + d.
struct ConeConstraint {
    Mat F;
    Vec g;
    Vec c;
    double d = 0.0;
    std::string label;
};

// minimize 0.5 x'Qx + c'x subject to smooth convex inequalities, second-order
// cones, affine equalities and box bounds.
class ConvexProgram {
  public:
    explicit ConvexProgram(int n);

    int dim() const { return n_; }

    void set_objective(const Vec& linear);
    void set_objective(const Vec& linear, const Mat& quad);

    // row'x + constant <= 0
    void add_affine(const Vec& row, double constant, std::string label = {});
    // 0.5 x'Px + lin'x + constant <= 0
    void add_quadratic(const Mat& p, const Vec& lin, double constant, std::string label = {});
    void add_smooth(SmoothConstraint con);
    void add_cone(const Mat& f, const Vec& g, const Vec& c, double d, std::string label = {});
    // row'x == rhs
    void add_equality(const Vec& row, double rhs);
    void set_bounds(int i, double lo, double hi);

    const Vec& objective_linear() const { return obj_lin_; }
    const Mat& objective_quad() const { return obj_quad_; }
    const std::vector<SmoothConstraint>& smooth() const { return smooth_; }
    const std::vector<ConeConstraint>& cones() const { return cones_; }
    const Mat& eq_matrix() const { return eq_a_; }
    const Vec& eq_rhs() const { return eq_b_; }
    const Vec& lower() const { return lower_; }
    const Vec& upper() const { return upper_; }

    double objective_value(const Vec& x) const;
    // Largest constraint violation at x (<= 0 means feasible); includes
    // equality residuals as absolute values.
    double max_violation(const Vec& x) const;

  private:
    int n_;
    Vec obj_lin_;
    Mat obj_quad_;
    std::vector<SmoothConstraint> smooth_;
    std::vector<ConeConstraint> cones_;
    Mat eq_a_;
    Vec eq_b_;
    Vec lower_;
    Vec upper_;
};

enum class SolveStatus { Optimal, Infeasible, MaxIter };

const char* to_string(SolveStatus s);

struct SolverOptions {
    double tol = 1e-8;
    int max_iter = 200;
    double mu = 10.0;
    std::optional<Vec> start;  // must lie in the domain of every log/power term
};

struct SolveResult {
    SolveStatus status = SolveStatus::MaxIter;
    Vec x;
    double objective = 0.0;
    int iterations = 0;
    double gap = 0.0;
    double residual = 0.0;  // max of primal and dual residual norms
};

SolveResult solve(const ConvexProgram& prog, const SolverOptions& opts = {});

// Plain-text dump for external cross-checking. One record per line:
//   n <dim>
//   objective <c_1 .. c_n>
//   objective_quad <row-major n*n entries>        (only when present)
//   bound <i> <lo> <hi>                            (only finite sides)
//   eq <a_1 .. a_n> <rhs>
//   smooth <label> constant <c> lin <n values> quad <n*n values|none> terms <count>
//     term <neglog|negpow|pow> <weight> <offset> <exponent> <n row values>
//   cone <label> rows <r> F <r*n values> g <r values> c <n values> d <d>
void write_program(std::ostream& out, const ConvexProgram& prog);

}  // namespace wcsee::convex

#endif
