#pragma once

#include <optional>
#include <string>
#include <vector>

#include "addhaz/types.hpp"

namespace addhaz {

// Feasible set {b : rows * b >= 0}. Rows are half-space normals; the solvers
// assume rank(rows) = p+1 so the cone is pointed.
struct ConstraintCone {
  Matrix rows;  // r x (p+1)

  Eigen::Index r() const { return rows.rows(); }
  Eigen::Index dim() const { return rows.cols(); }
};

// A one-dimensional edge of the cone: unit direction plus p active row
// indices whose hyperplanes intersect in it.
struct Ray {
  Vector direction;
  std::vector<int> active_rows;
};

// All 2^p rows (1, m_1, ..., m_p), m in {0,1}^p: the hazard-nonnegativity
// constraint at every vertex of the unit cube.
ConstraintCone full_constraint_cone(int p);

// Numeric CSV without header, r rows by (p+1) columns.
ConstraintCone load_cone_csv(const std::string& path);

// Extreme rays of the cone, unit-normalized, deduplicated, in a deterministic
// order. Throws RankError when rank(rows) < p+1.
std::vector<Ray> extreme_rays(const ConstraintCone& c);

enum class EdgeStatus { finite, excluded, unbounded };

struct EdgeMaximum {
  EdgeStatus status = EdgeStatus::excluded;
  double l_star = 0.0;  // maximizing step along the edge (finite case)
  double value = 0.0;   // log(ratio) - 1 (finite case)
  double ratio = 0.0;   // x.v / s.v (finite case)
};

// Maximum of log(l x.v) - l s.v over l >= 0 along the edge direction v.
EdgeMaximum edge_maximum(const Vector& v, const Vector& x, const Vector& s);

enum class ConeMethod { naive, ascending, descending };
const char* cone_method_label(ConeMethod m);

// Evaluates every extreme ray and keeps all tied maximizers.
JumpSolution mle_jump_cone_naive(const ConstraintCone& c, const Vector& x, const Vector& s);

// Edge-to-edge ascent from a feasible starting edge (scanned for when absent).
// Pivots to the adjacent edge with the largest directional derivative until no
// ascent exists; falls back to the naive method when the final edge cannot be
// certified optimal.
JumpSolution mle_jump_cone_ascending(const ConstraintCone& c, const Vector& x, const Vector& s,
                                     const std::optional<std::vector<int>>& start = std::nullopt);

// Solves on a relaxed row subset and adds the most violated row until the
// relaxed optimum is feasible for the whole cone. The optimal values form a
// nonincreasing sequence, recorded in `value_trace` when given.
JumpSolution mle_jump_cone_descending(const ConstraintCone& c, const Vector& x, const Vector& s,
                                      std::vector<double>* value_trace = nullptr);

FitResult fit_mle_cone(const Dataset& d, const ConstraintCone& c, ConeMethod method);

}  // namespace addhaz
