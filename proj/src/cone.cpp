#include "addhaz/cone.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <limits>
#include <numeric>
#include <sstream>

#include "addhaz/data_io.hpp"
#include "addhaz/errors.hpp"
#include "addhaz/mle.hpp"

namespace addhaz {

namespace {

constexpr double kRankTol = 1e-10;  // rank-revealing relative tolerance
constexpr double kFeasTol = 1e-10;  // slack for M v >= 0 checks
constexpr double kDualTol = 1e-8;   // optimality-certificate slack

const char* kNaiveLabel = "naive";

Eigen::Index cone_rank(const Matrix& m) {
  Eigen::ColPivHouseholderQR<Matrix> qr(m);
  qr.setThreshold(kRankTol);
  return qr.rank();
}

// Unit direction spanning the null space of `rows` (q x dim), or empty when
// the null space is not one-dimensional.
Vector null_direction(const Matrix& rows) {
  const Eigen::Index dim = rows.cols();
  Eigen::JacobiSVD<Matrix> svd(rows, Eigen::ComputeFullV);
  const auto& sv = svd.singularValues();
  Eigen::Index rank = 0;
  for (Eigen::Index i = 0; i < sv.size(); ++i)
    if (sv(i) > kRankTol * sv(0)) ++rank;
  if (rank != dim - 1) return Vector();
  return svd.matrixV().col(dim - 1);
}

// Orients v so that M v >= 0 componentwise; empty when neither sign works.
Vector orient_feasible(const Vector& v, const Matrix& m, const Vector& row_norms) {
  bool plus_ok = true;
  bool minus_ok = true;
  const Vector dots = m * v;
  for (Eigen::Index i = 0; i < dots.size(); ++i) {
    const double tol = kFeasTol * std::max(1.0, row_norms(i));
    if (dots(i) < -tol) plus_ok = false;
    if (dots(i) > tol) minus_ok = false;
  }
  if (plus_ok) return v;
  if (minus_ok) return -v;
  return Vector();
}

Vector compute_row_norms(const Matrix& m) {
  Vector norms(m.rows());
  for (Eigen::Index i = 0; i < m.rows(); ++i) norms(i) = m.row(i).norm();
  return norms;
}

struct DDRay {
  Vector v;                        // unit, feasible for processed rows
  std::vector<std::uint64_t> zero; // activity bitset over all rows
};

bool bit(const std::vector<std::uint64_t>& bits, std::size_t i) {
  return (bits[i >> 6] >> (i & 63)) & 1u;
}

void set_bit(std::vector<std::uint64_t>& bits, std::size_t i) {
  bits[i >> 6] |= std::uint64_t{1} << (i & 63);
}

std::vector<std::uint64_t> activity_bits(const Vector& v, const Matrix& m,
                                         const Vector& row_norms) {
  std::vector<std::uint64_t> bits((static_cast<std::size_t>(m.rows()) + 63) / 64, 0);
  const Vector dots = m * v;
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    if (std::abs(dots(i)) <= kFeasTol * std::max(1.0, row_norms(i)))
      set_bit(bits, static_cast<std::size_t>(i));
  return bits;
}

// Combinatorial adjacency: u, w are adjacent iff no other ray's zero set
// (within the processed rows) contains their common zero set.
bool adjacent(const DDRay& u, const DDRay& w, const std::vector<DDRay>& rays, std::size_t iu,
              std::size_t iw, const std::vector<std::uint64_t>& processed) {
  const std::size_t blocks = processed.size();
  std::vector<std::uint64_t> common(blocks);
  for (std::size_t b = 0; b < blocks; ++b) common[b] = u.zero[b] & w.zero[b] & processed[b];
  for (std::size_t z = 0; z < rays.size(); ++z) {
    if (z == iu || z == iw) continue;
    bool contains = true;
    for (std::size_t b = 0; b < blocks; ++b)
      if (common[b] & ~rays[z].zero[b]) {
        contains = false;
        break;
      }
    if (contains) return false;
  }
  return true;
}

std::vector<int> select_active_rows(const Vector& v, const Matrix& m, const Vector& row_norms) {
  std::vector<int> active;
  const Vector dots = m * v;
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    if (std::abs(dots(i)) <= kFeasTol * std::max(1.0, row_norms(i)))
      active.push_back(static_cast<int>(i));
  const Eigen::Index p = m.cols() - 1;
  if (static_cast<Eigen::Index>(active.size()) <= p) return active;
  // Keep p independent hyperplanes, preferring low row indices.
  Matrix sub(active.size(), m.cols());
  for (std::size_t i = 0; i < active.size(); ++i) sub.row(i) = m.row(active[i]);
  std::vector<int> chosen;
  Matrix basis(p, m.cols());
  Eigen::Index got = 0;
  for (std::size_t i = 0; i < active.size() && got < p; ++i) {
    basis.row(got) = sub.row(i);
    if (cone_rank(basis.topRows(got + 1)) == got + 1) {
      chosen.push_back(active[i]);
      ++got;
    }
  }
  return chosen;
}

double parse_number(const std::string& s, std::size_t row, std::size_t col) {
  try {
    std::size_t pos = 0;
    const double v = std::stod(s, &pos);
    if (pos != s.size() || !std::isfinite(v)) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw ParseError("cannot parse '" + s + "' in constraint matrix at row " +
                     std::to_string(row + 1) + ", column " + std::to_string(col + 1));
  }
}

}  // namespace

const char* cone_method_label(ConeMethod m) {
  switch (m) {
    case ConeMethod::naive: return kNaiveLabel;
    case ConeMethod::ascending: return "ascending";
    case ConeMethod::descending: return "descending";
  }
  return "unknown";
}

ConstraintCone full_constraint_cone(int p) {
  if (p < 1) throw SizeError("full constraint set needs p >= 1");
  if (p > 20) throw SizeError("full constraint set for p = " + std::to_string(p) +
                              " has 2^p rows; p is capped at 20");
  const Eigen::Index rows = Eigen::Index{1} << p;
  ConstraintCone c;
  c.rows = Matrix::Zero(rows, p + 1);
  for (Eigen::Index m = 0; m < rows; ++m) {
    c.rows(m, 0) = 1.0;
    for (int j = 1; j <= p; ++j) c.rows(m, j) = static_cast<double>((m >> (p - j)) & 1);
  }
  return c;
}

ConstraintCone load_cone_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open '" + path + "'");
  std::vector<std::vector<double>> rows;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    if (line.find_first_not_of(" \t\r\n") == std::string::npos) {
      ++lineno;
      continue;
    }
    std::vector<double> row;
    std::stringstream ss(line);
    std::string field;
    std::size_t col = 0;
    while (std::getline(ss, field, ',')) row.push_back(parse_number(field, lineno, col++));
    if (!rows.empty() && row.size() != rows.front().size())
      throw ParseError("constraint matrix row " + std::to_string(lineno + 1) + " has " +
                       std::to_string(row.size()) + " columns, expected " +
                       std::to_string(rows.front().size()));
    rows.push_back(std::move(row));
    ++lineno;
  }
  if (rows.empty()) throw ParseError("constraint matrix '" + path + "' is empty");
  ConstraintCone c;
  c.rows = Matrix(rows.size(), rows.front().size());
  for (std::size_t i = 0; i < rows.size(); ++i)
    for (std::size_t j = 0; j < rows.front().size(); ++j)
      c.rows(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = rows[i][j];
  return c;
}

std::vector<Ray> extreme_rays(const ConstraintCone& c) {
  const Matrix& m = c.rows;
  const Eigen::Index dim = m.cols();
  const Eigen::Index r = m.rows();
  if (cone_rank(m) < dim)
    throw RankError("constraint matrix has rank below p+1; the cone is not pointed");

  const Vector row_norms = compute_row_norms(m);

  // Seed the double-description sweep with a simplicial subcone from dim
  // independent rows, whose rays are the columns of the inverse.
  Eigen::ColPivHouseholderQR<Matrix> qr(m.transpose());
  qr.setThreshold(kRankTol);
  const auto& perm = qr.colsPermutation().indices();
  std::vector<char> in_basis(static_cast<std::size_t>(r), 0);
  Matrix basis(dim, dim);
  for (Eigen::Index i = 0; i < dim; ++i) {
    basis.row(i) = m.row(perm(i));
    in_basis[static_cast<std::size_t>(perm(i))] = 1;
  }
  const Matrix basis_inv = basis.inverse();

  const std::size_t blocks = (static_cast<std::size_t>(r) + 63) / 64;
  std::vector<std::uint64_t> processed(blocks, 0);
  for (Eigen::Index i = 0; i < dim; ++i) set_bit(processed, static_cast<std::size_t>(perm(i)));

  std::vector<DDRay> rays;
  for (Eigen::Index i = 0; i < dim; ++i) {
    Vector v = basis_inv.col(i).normalized();
    rays.push_back({v, activity_bits(v, m, row_norms)});
  }

  for (Eigen::Index row = 0; row < r; ++row) {
    if (in_basis[static_cast<std::size_t>(row)]) continue;
    const double tol = kFeasTol * std::max(1.0, row_norms(row));
    std::vector<std::size_t> pos, neg, zero;
    std::vector<double> dots(rays.size());
    for (std::size_t i = 0; i < rays.size(); ++i) {
      dots[i] = m.row(row).dot(rays[i].v);
      if (dots[i] > tol)
        pos.push_back(i);
      else if (dots[i] < -tol)
        neg.push_back(i);
      else
        zero.push_back(i);
    }
    if (!neg.empty()) {
      std::vector<DDRay> created;
      for (std::size_t iu : pos)
        for (std::size_t iw : neg) {
          if (!adjacent(rays[iu], rays[iw], rays, iu, iw, processed)) continue;
          // Positive combination vanishing on this row.
          Vector v = dots[iu] * rays[iw].v - dots[iw] * rays[iu].v;
          const double norm = v.norm();
          if (norm < 1e-14) continue;
          v /= norm;
          created.push_back({v, activity_bits(v, m, row_norms)});
        }
      std::vector<DDRay> next;
      next.reserve(pos.size() + zero.size() + created.size());
      for (std::size_t i : pos) next.push_back(std::move(rays[i]));
      for (std::size_t i : zero) next.push_back(std::move(rays[i]));
      for (auto& ray : created) next.push_back(std::move(ray));
      rays = std::move(next);
    }
    set_bit(processed, static_cast<std::size_t>(row));
  }

  // Deduplicate and order deterministically.
  std::vector<Ray> out;
  out.reserve(rays.size());
  for (const auto& ray : rays) {
    bool dup = false;
    for (const auto& kept : out)
      if ((kept.direction - ray.v).norm() < 1e-9) {
        dup = true;
        break;
      }
    if (!dup) out.push_back({ray.v, {}});
  }
  std::sort(out.begin(), out.end(), [](const Ray& a, const Ray& b) {
    return std::lexicographical_compare(a.direction.data(), a.direction.data() + a.direction.size(),
                                        b.direction.data(), b.direction.data() + b.direction.size());
  });
  for (auto& ray : out) ray.active_rows = select_active_rows(ray.direction, m, row_norms);
  return out;
}

EdgeMaximum edge_maximum(const Vector& v, const Vector& x, const Vector& s) {
  const double xv = x.dot(v);
  const double sv = s.dot(v);
  if (xv <= 0.0) return {EdgeStatus::excluded, 0.0, -std::numeric_limits<double>::infinity(), 0.0};
  if (sv <= 0.0)
    return {EdgeStatus::unbounded, 0.0, std::numeric_limits<double>::infinity(),
            std::numeric_limits<double>::infinity()};
  const double ratio = xv / sv;
  return {EdgeStatus::finite, 1.0 / sv, std::log(ratio) - 1.0, ratio};
}

namespace {

JumpSolution solution_from_edges(const std::vector<const Vector*>& dirs,
                                 const std::vector<EdgeMaximum>& evals) {
  double vmax = 0.0;
  for (const auto& e : evals)
    if (e.status == EdgeStatus::finite) vmax = std::max(vmax, e.ratio);
  if (!(vmax > 0.0))
    throw NoPositiveRatio("no edge of the constraint cone gives the failing subject positive "
                          "hazard");
  const double threshold = vmax * (1.0 - detail::kRatioTieTol);
  JumpSolution sol;
  Vector sum;
  for (std::size_t i = 0; i < evals.size(); ++i) {
    if (evals[i].status != EdgeStatus::finite || evals[i].ratio < threshold) continue;
    Vector beta = evals[i].l_star * (*dirs[i]);
    if (sum.size() == 0)
      sum = beta;
    else
      sum += beta;
    sol.candidates.push_back(std::move(beta));
  }
  sol.averaged = sum / static_cast<double>(sol.candidates.size());
  sol.max_ratio = vmax;
  sol.per_time_loglik = std::log(vmax) - 1.0;
  return sol;
}

}  // namespace

JumpSolution mle_jump_cone_naive(const ConstraintCone& c, const Vector& x, const Vector& s) {
  const std::vector<Ray> rays = extreme_rays(c);
  std::vector<const Vector*> dirs;
  std::vector<EdgeMaximum> evals;
  dirs.reserve(rays.size());
  evals.reserve(rays.size());
  for (const Ray& ray : rays) {
    EdgeMaximum e = edge_maximum(ray.direction, x, s);
    if (e.status == EdgeStatus::unbounded)
      throw DegenerateRiskSet("cone edge with positive hazard and nonpositive risk-sum "
                              "projection; the likelihood supremum is infinite");
    dirs.push_back(&ray.direction);
    evals.push_back(e);
  }
  return solution_from_edges(dirs, evals);
}

namespace {

struct Edge {
  Vector v;                 // unit, feasible
  std::vector<int> active;  // p sorted row indices, rank p
};

// Edge from p active rows, oriented feasibly; empty direction when the rows
// do not define a feasible edge.
Edge edge_from_rows(const Matrix& m, const Vector& row_norms, const std::vector<int>& rows_idx) {
  const Eigen::Index dim = m.cols();
  Vector dir;
  if (rows_idx.empty()) {
    dir = Vector::Ones(1);  // p = 0: the whole line is the candidate edge
  } else {
    Matrix sub(rows_idx.size(), dim);
    for (std::size_t i = 0; i < rows_idx.size(); ++i) sub.row(i) = m.row(rows_idx[i]);
    dir = null_direction(sub);
  }
  if (dir.size() == 0) return {};
  dir = orient_feasible(dir, m, row_norms);
  if (dir.size() == 0) return {};
  Edge e;
  e.v = dir;
  e.active = rows_idx;
  std::sort(e.active.begin(), e.active.end());
  return e;
}

bool same_direction(const Vector& a, const Vector& b) { return (a - b).norm() < 1e-9; }

// First feasible edge in lexicographic order of p-row subsets.
Edge scan_for_edge(const Matrix& m, const Vector& row_norms) {
  const int r = static_cast<int>(m.rows());
  const int p = static_cast<int>(m.cols()) - 1;
  if (p == 0) {
    Edge e = edge_from_rows(m, row_norms, {});
    if (e.v.size() != 0) return e;
    throw StartNotFeasible("no feasible edge exists");
  }
  std::vector<int> comb(p);
  std::iota(comb.begin(), comb.end(), 0);
  while (true) {
    Edge e = edge_from_rows(m, row_norms, comb);
    if (e.v.size() != 0) return e;
    // next combination
    int i = p - 1;
    while (i >= 0 && comb[i] == r - p + i) --i;
    if (i < 0) break;
    ++comb[i];
    for (int j = i + 1; j < p; ++j) comb[j] = comb[j - 1] + 1;
  }
  throw StartNotFeasible("no feasible starting edge found among row subsets");
}

// LP optimality certificate at an edge maximizer: x = lambda s + M_A^T mu
// with mu <= 0 says no feasible ascent direction remains.
bool certify_optimal(const Matrix& m, const Edge& edge, const Vector& x, const Vector& s) {
  const Eigen::Index dim = m.cols();
  if (static_cast<Eigen::Index>(edge.active.size()) != dim - 1) return false;
  Matrix a(dim, dim);
  a.col(0) = s;
  for (std::size_t i = 0; i < edge.active.size(); ++i)
    a.col(static_cast<Eigen::Index>(i) + 1) = m.row(edge.active[i]).transpose();
  Eigen::FullPivLU<Matrix> lu(a);
  lu.setThreshold(kRankTol);
  if (lu.rank() < dim) return false;
  const Vector z = lu.solve(x);
  if ((a * z - x).norm() > kDualTol * (1.0 + x.norm())) return false;
  for (Eigen::Index i = 1; i < dim; ++i)
    if (z(i) > kDualTol) return false;
  return true;
}

}  // namespace

JumpSolution mle_jump_cone_ascending(const ConstraintCone& c, const Vector& x, const Vector& s,
                                     const std::optional<std::vector<int>>& start) {
  const Matrix& m = c.rows;
  const Eigen::Index dim = m.cols();
  const Eigen::Index r = m.rows();
  if (cone_rank(m) < dim)
    throw RankError("constraint matrix has rank below p+1; the cone is not pointed");
  const Vector row_norms = compute_row_norms(m);

  Edge current;
  if (start) {
    if (static_cast<Eigen::Index>(start->size()) != dim - 1)
      throw StartNotFeasible("starting active set must have p rows");
    for (int idx : *start)
      if (idx < 0 || idx >= r) throw StartNotFeasible("starting row index out of range");
    current = edge_from_rows(m, row_norms, *start);
    if (current.v.size() == 0)
      throw StartNotFeasible("starting active set does not define a feasible edge");
  } else {
    current = scan_for_edge(m, row_norms);
  }

  EdgeMaximum cur_eval = edge_maximum(current.v, x, s);
  if (cur_eval.status == EdgeStatus::unbounded)
    throw DegenerateRiskSet("starting edge has positive hazard and nonpositive risk-sum "
                            "projection; the likelihood supremum is infinite");

  const int max_pivots = 50 + 10 * static_cast<int>(r) * static_cast<int>(dim);
  bool certified = false;
  for (int pivot = 0; pivot < max_pivots; ++pivot) {
    struct Candidate {
      Edge edge;
      EdgeMaximum eval;
      double score;
      int add_row;
      int drop_row;
    };
    std::optional<Candidate> best;
    const double cur_ratio =
        cur_eval.status == EdgeStatus::finite ? cur_eval.ratio : 0.0;

    for (int drop : current.active) {
      std::vector<int> keep;
      for (int idx : current.active)
        if (idx != drop) keep.push_back(idx);
      for (int add = 0; add < r; ++add) {
        if (std::find(current.active.begin(), current.active.end(), add) !=
            current.active.end())
          continue;
        std::vector<int> rows_idx = keep;
        rows_idx.push_back(add);
        Edge e = edge_from_rows(m, row_norms, rows_idx);
        if (e.v.size() == 0 || same_direction(e.v, current.v)) continue;
        EdgeMaximum eval = edge_maximum(e.v, x, s);
        if (eval.status == EdgeStatus::unbounded)
          throw DegenerateRiskSet("adjacent cone edge with positive hazard and nonpositive "
                                  "risk-sum projection; the likelihood supremum is infinite");
        if (eval.status != EdgeStatus::finite) continue;
        const bool improves = cur_eval.status != EdgeStatus::finite
                                  ? true
                                  : eval.ratio > cur_ratio * (1.0 + 1e-13);
        if (!improves) continue;
        // Directional derivative of the log-likelihood at the current edge
        // maximizer, along the new edge direction.
        const double score = cur_eval.status == EdgeStatus::finite
                                 ? x.dot(e.v) / cur_ratio - s.dot(e.v)
                                 : eval.ratio;
        if (!best || score > best->score ||
            (score == best->score &&
             (add < best->add_row || (add == best->add_row && drop < best->drop_row)))) {
          best = Candidate{std::move(e), eval, score, add, drop};
        }
      }
    }
    if (!best) {
      certified = cur_eval.status == EdgeStatus::finite && certify_optimal(m, current, x, s);
      break;
    }
    current = std::move(best->edge);
    cur_eval = best->eval;
  }

  if (!certified) return mle_jump_cone_naive(c, x, s);

  JumpSolution sol;
  sol.candidates.push_back(cur_eval.l_star * current.v);
  sol.averaged = sol.candidates.front();
  sol.max_ratio = cur_eval.ratio;
  sol.per_time_loglik = cur_eval.value;
  return sol;
}

JumpSolution mle_jump_cone_descending(const ConstraintCone& c, const Vector& x, const Vector& s,
                                      std::vector<double>* value_trace) {
  const Matrix& m = c.rows;
  const Eigen::Index dim = m.cols();
  const Eigen::Index r = m.rows();
  if (cone_rank(m) < dim)
    throw RankError("constraint matrix has rank below p+1; the cone is not pointed");
  const Vector row_norms = compute_row_norms(m);
  if (value_trace) value_trace->clear();

  // Lexicographically first row subset of full rank seeds the relaxation.
  std::vector<int> working;
  {
    Matrix basis(dim, dim);
    Eigen::Index got = 0;
    for (Eigen::Index i = 0; i < r && got < dim; ++i) {
      basis.row(got) = m.row(i);
      if (cone_rank(basis.topRows(got + 1)) == got + 1) {
        working.push_back(static_cast<int>(i));
        ++got;
      }
    }
  }

  auto most_violated = [&](const Vector& v) -> int {
    int worst = -1;
    double worst_slack = -kFeasTol;
    for (Eigen::Index j = 0; j < r; ++j) {
      if (std::find(working.begin(), working.end(), static_cast<int>(j)) != working.end())
        continue;
      const double slack = m.row(j).dot(v) / std::max(1.0, row_norms(j));
      if (slack < worst_slack) {
        worst_slack = slack;
        worst = static_cast<int>(j);
      }
    }
    return worst;
  };

  for (int round = 0; round <= static_cast<int>(r); ++round) {
    ConstraintCone sub;
    sub.rows = Matrix(working.size(), dim);
    for (std::size_t i = 0; i < working.size(); ++i)
      sub.rows.row(static_cast<Eigen::Index>(i)) = m.row(working[i]);

    const std::vector<Ray> rays = extreme_rays(sub);
    // An unbounded relaxed edge must be cut off before values are comparable.
    bool cut = false;
    for (const Ray& ray : rays) {
      const EdgeMaximum e = edge_maximum(ray.direction, x, s);
      if (e.status != EdgeStatus::unbounded) continue;
      const int add = most_violated(ray.direction);
      if (add < 0)
        throw DegenerateRiskSet("cone edge with positive hazard and nonpositive risk-sum "
                                "projection; the likelihood supremum is infinite");
      working.push_back(add);
      cut = true;
      break;
    }
    if (cut) continue;

    std::vector<const Vector*> dirs;
    std::vector<EdgeMaximum> evals;
    for (const Ray& ray : rays) {
      dirs.push_back(&ray.direction);
      evals.push_back(edge_maximum(ray.direction, x, s));
    }
    JumpSolution sol = solution_from_edges(dirs, evals);  // throws NoPositiveRatio if all excluded
    if (value_trace) value_trace->push_back(sol.per_time_loglik);

    // Test the tied maximizers against the excluded rows.
    int add = -1;
    for (const Vector& cand : sol.candidates) {
      const int violated = most_violated(cand);
      if (violated >= 0) {
        add = violated;
        break;
      }
    }
    if (add < 0) {
      // Keep only candidates feasible for the full cone.
      JumpSolution final_sol;
      Vector sum;
      for (const Vector& cand : sol.candidates) {
        if (most_violated(cand) >= 0) continue;
        if (sum.size() == 0)
          sum = cand;
        else
          sum += cand;
        final_sol.candidates.push_back(cand);
      }
      final_sol.averaged = sum / static_cast<double>(final_sol.candidates.size());
      final_sol.max_ratio = sol.max_ratio;
      final_sol.per_time_loglik = sol.per_time_loglik;
      return final_sol;
    }
    working.push_back(add);
  }
  throw RankError("descending search failed to converge");  // unreachable
}

FitResult fit_mle_cone(const Dataset& d, const ConstraintCone& c, ConeMethod method) {
  detail::require_unit_cube(d);
  const EventTable table = build_event_table(d);
  if (c.dim() != static_cast<Eigen::Index>(d.p + 1))
    throw ConfigError("constraint matrix has " + std::to_string(c.dim()) +
                      " columns, expected p+1 = " + std::to_string(d.p + 1));
  const std::size_t K = table.size();

  FitResult result;
  result.coefficients.method = Method::mle_cone;
  result.coefficients.event_times = table.event_times;
  result.coefficients.jumps.resize(K);
  result.diagnostics.resize(K);
  result.per_time_loglik.resize(K);
  result.covariate_names = d.names;
  result.scale_info = d.scale_info;

  double total = 0.0;
  for (std::size_t k = 0; k < K; ++k) {
    try {
      JumpSolution sol;
      switch (method) {
        case ConeMethod::naive:
          sol = mle_jump_cone_naive(c, table.failing_covariates[k], table.risk_sums[k]);
          break;
        case ConeMethod::ascending:
          sol = mle_jump_cone_ascending(c, table.failing_covariates[k], table.risk_sums[k]);
          break;
        case ConeMethod::descending:
          sol = mle_jump_cone_descending(c, table.failing_covariates[k], table.risk_sums[k]);
          break;
      }
      result.coefficients.jumps[k] = sol.averaged;
      result.diagnostics[k].multiplicity = static_cast<int>(sol.candidates.size());
      result.per_time_loglik[k] = sol.per_time_loglik;
      total += sol.per_time_loglik;
    } catch (const DegenerateRiskSet& e) {
      throw DegenerateRiskSet("at event time " + std::to_string(table.event_times[k]) + ": " +
                              e.what());
    } catch (const NoPositiveRatio& e) {
      throw NoPositiveRatio("at event time " + std::to_string(table.event_times[k]) + ": " +
                            e.what());
    }
  }
  result.total_loglik = total;
  return result;
}

}  // namespace addhaz
