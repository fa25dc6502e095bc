#include <gtest/gtest.h>

#include <random>

#include "dntr/lpcore.hpp"
#include "oracles.hpp"

namespace lp = dntr::lp;

namespace {

void expect_feasible(const lp::LinearProgram& prog, const lp::LpOutcome& out) {
  ASSERT_EQ(out.status, lp::Status::Optimal);
  for (std::size_t j = 0; j < prog.num_variables(); ++j) {
    EXPECT_GE(out.values[j], prog.lower[j] - 1e-9);
    EXPECT_LE(out.values[j], prog.upper[j] + 1e-9);
  }
  for (const auto& row : prog.rows) {
    double act = 0.0;
    for (const auto& t : row.terms) act += t.coefficient * out.values[t.column];
    const double tol = 1e-7 * (1.0 + std::abs(row.rhs));
    if (row.sense == lp::Sense::LessEqual) EXPECT_LE(act, row.rhs + tol);
    if (row.sense == lp::Sense::GreaterEqual) EXPECT_GE(act, row.rhs - tol);
    if (row.sense == lp::Sense::Equal) EXPECT_NEAR(act, row.rhs, tol);
  }
}

}  // namespace

TEST(LpCore, BoundConstrainedSingleton) {
  lp::LinearProgram prog;
  prog.add_variable(1.0, 1.0, 3.0);
  const auto out = lp::solve_lp(prog);
  ASSERT_EQ(out.status, lp::Status::Optimal);
  EXPECT_DOUBLE_EQ(out.objective, 1.0);
  EXPECT_DOUBLE_EQ(out.values[0], 1.0);
}

TEST(LpCore, ContradictoryRowsAreInfeasible) {
  lp::LinearProgram prog;
  prog.add_variable(0.0, -lp::kInfinity, lp::kInfinity);
  prog.add_variable(0.0, -lp::kInfinity, lp::kInfinity);
  // Two-term rows so presolve does not reduce them to bounds.
  prog.add_row({{0, 1.0}, {1, 1.0}}, lp::Sense::GreaterEqual, 2.0);
  prog.add_row({{0, 1.0}, {1, 1.0}}, lp::Sense::LessEqual, 1.0);
  EXPECT_EQ(lp::solve_lp(prog).status, lp::Status::Infeasible);

  lp::LinearProgram single;
  single.add_variable(0.0, -lp::kInfinity, lp::kInfinity);
  single.add_row({{0, 1.0}}, lp::Sense::GreaterEqual, 2.0);
  single.add_row({{0, 1.0}}, lp::Sense::LessEqual, 1.0);
  EXPECT_EQ(lp::solve_lp(single).status, lp::Status::Infeasible);
  lp::SimplexOptions raw;
  raw.presolve = false;
  EXPECT_EQ(lp::solve_lp(single, raw).status, lp::Status::Infeasible);
}

TEST(LpCore, SmallVertexProblem) {
  // Vertices (0,0), (1,0), (0,1) give objectives 0, -2, -1.
  lp::LinearProgram prog;
  prog.add_variable(-2.0, 0.0, lp::kInfinity);
  prog.add_variable(-1.0, 0.0, lp::kInfinity);
  prog.add_row({{0, 1.0}, {1, 1.0}}, lp::Sense::LessEqual, 1.0);
  const auto out = lp::solve_lp(prog);
  ASSERT_EQ(out.status, lp::Status::Optimal);
  EXPECT_NEAR(out.objective, -2.0, 1e-12);
  EXPECT_NEAR(out.values[0], 1.0, 1e-12);
  EXPECT_NEAR(out.values[1], 0.0, 1e-12);
}

TEST(LpCore, DetectsUnbounded) {
  lp::LinearProgram prog;
  prog.add_variable(-1.0, 0.0, lp::kInfinity);
  prog.add_variable(0.0, 0.0, lp::kInfinity);
  prog.add_row({{0, 1.0}, {1, -1.0}}, lp::Sense::LessEqual, 1.0);
  EXPECT_EQ(lp::solve_lp(prog).status, lp::Status::Unbounded);
}

TEST(LpCore, FreeVariablesAndEqualities) {
  // min x + y  s.t. x - y = 1, x + y >= -3, x, y free  ->  x + y = -3.
  lp::LinearProgram prog;
  prog.add_variable(1.0, -lp::kInfinity, lp::kInfinity);
  prog.add_variable(1.0, -lp::kInfinity, lp::kInfinity);
  prog.add_row({{0, 1.0}, {1, -1.0}}, lp::Sense::Equal, 1.0);
  prog.add_row({{0, 1.0}, {1, 1.0}}, lp::Sense::GreaterEqual, -3.0);
  const auto out = lp::solve_lp(prog);
  expect_feasible(prog, out);
  EXPECT_NEAR(out.objective, -3.0, 1e-9);
  EXPECT_NEAR(out.values[0], -1.0, 1e-9);
  EXPECT_NEAR(out.values[1], -2.0, 1e-9);
}

TEST(LpCore, UpperBoundedOnlyColumn) {
  // max x with x <= 4 (upper bound only) and x >= -10 via row.
  lp::LinearProgram prog;
  prog.add_variable(-1.0, -lp::kInfinity, 4.0);
  prog.add_variable(0.0, 0.0, 1.0);
  prog.add_row({{0, 1.0}, {1, 1.0}}, lp::Sense::GreaterEqual, -10.0);
  const auto out = lp::solve_lp(prog);
  expect_feasible(prog, out);
  EXPECT_NEAR(out.values[0], 4.0, 1e-12);
}

TEST(LpCore, IndependentBlocksCombine) {
  lp::LinearProgram prog;
  prog.add_variable(1.0, 0.0, 10.0);
  prog.add_variable(1.0, 0.0, 10.0);
  prog.add_variable(2.0, 0.0, 10.0);
  prog.add_variable(1.0, 0.0, 10.0);
  prog.add_row({{0, 1.0}, {1, 1.0}}, lp::Sense::GreaterEqual, 3.0);
  prog.add_row({{2, 1.0}, {3, 1.0}}, lp::Sense::GreaterEqual, 5.0);
  const auto split = lp::solve_lp(prog);
  lp::SimplexOptions joined;
  joined.decompose = false;
  const auto whole = lp::solve_lp(prog, joined);
  ASSERT_EQ(split.status, lp::Status::Optimal);
  ASSERT_EQ(whole.status, lp::Status::Optimal);
  EXPECT_NEAR(split.objective, 8.0, 1e-12);
  EXPECT_NEAR(whole.objective, 8.0, 1e-12);

  // One infeasible block makes the whole program infeasible.
  prog.add_row({{0, 1.0}, {1, 1.0}}, lp::Sense::LessEqual, 2.0);
  EXPECT_EQ(lp::solve_lp(prog).status, lp::Status::Infeasible);
}

TEST(LpCore, RejectsMalformedPrograms) {
  lp::LinearProgram bad_bounds;
  bad_bounds.add_variable(0.0, 2.0, 1.0);
  EXPECT_THROW(lp::solve_lp(bad_bounds), lp::MalformedProgram);

  lp::LinearProgram bad_column;
  bad_column.add_variable(0.0, 0.0, 1.0);
  bad_column.add_row({{3, 1.0}}, lp::Sense::LessEqual, 1.0);
  EXPECT_THROW(lp::solve_lp(bad_column), lp::MalformedProgram);

  lp::LinearProgram bad_sizes;
  bad_sizes.objective = {1.0, 2.0};
  bad_sizes.lower = {0.0};
  bad_sizes.upper = {1.0, 1.0};
  EXPECT_THROW(lp::solve_lp(bad_sizes), lp::MalformedProgram);
}

TEST(LpCore, DegenerateCycleProneProgramTerminates) {
  // Beale's classic cycling example for Dantzig's rule.
  lp::LinearProgram prog;
  prog.add_variable(-0.75, 0.0, lp::kInfinity);
  prog.add_variable(150.0, 0.0, lp::kInfinity);
  prog.add_variable(-0.02, 0.0, lp::kInfinity);
  prog.add_variable(6.0, 0.0, lp::kInfinity);
  prog.add_row({{0, 0.25}, {1, -60.0}, {2, -0.04}, {3, 9.0}}, lp::Sense::LessEqual, 0.0);
  prog.add_row({{0, 0.5}, {1, -90.0}, {2, -0.02}, {3, 3.0}}, lp::Sense::LessEqual, 0.0);
  prog.add_row({{2, 1.0}, {0, 0.0}}, lp::Sense::LessEqual, 1.0);
  lp::SimplexOptions opts;
  opts.presolve = false;
  const auto out = lp::solve_lp(prog, opts);
  expect_feasible(prog, out);
  EXPECT_NEAR(out.objective, -0.05, 1e-9);
}

TEST(LpCore, Deterministic) {
  std::mt19937_64 rng(7);
  for (int k = 0; k < 50; ++k) {
    const auto prog = oracle::random_lp(rng);
    const auto a = lp::solve_lp(prog);
    const auto b = lp::solve_lp(prog);
    EXPECT_EQ(a.status, b.status);
    EXPECT_EQ(a.values, b.values);
  }
}

TEST(LpCore, MatchesVertexEnumerationOnRandomPrograms) {
  std::mt19937_64 rng(2024);
  for (int k = 0; k < 200; ++k) {
    const auto prog = oracle::random_lp(rng);
    const auto expected = oracle::brute_force_lp(prog);
    const auto got = lp::solve_lp(prog);
    ASSERT_EQ(got.status, expected.status) << "program " << k;
    if (expected.status == lp::Status::Optimal) {
      EXPECT_NEAR(got.objective, expected.objective, 1e-6 * std::max(1.0, std::abs(expected.objective))) << k;
      expect_feasible(prog, got);
    }
  }
}

TEST(LpCore, PresolveOffAgreesWithPresolveOn) {
  std::mt19937_64 rng(99);
  lp::SimplexOptions raw;
  raw.presolve = false;
  raw.decompose = false;
  for (int k = 0; k < 200; ++k) {
    const auto prog = oracle::random_lp(rng);
    const auto a = lp::solve_lp(prog);
    const auto b = lp::solve_lp(prog, raw);
    ASSERT_EQ(a.status, b.status) << k;
    if (a.status == lp::Status::Optimal) EXPECT_NEAR(a.objective, b.objective, 1e-6 * std::max(1.0, std::abs(a.objective)));
  }
}
