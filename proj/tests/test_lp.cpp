#include <doctest.h>

#include <random>
#include <sstream>

#include "rwb/error.hpp"
#include "rwb/lp.hpp"

using namespace rwb;

TEST_CASE("forced single variable") {
  LpProblem p(1);
  p.objective = {1.0};
  p.add_row(std::vector<double>{1.0}, 3.0);
  const auto s = solve_lp(p);
  REQUIRE(s.status == LpStatus::Optimal);
  CHECK(s.x[0] == doctest::Approx(3.0));
  CHECK(s.objective == doctest::Approx(3.0));
}

TEST_CASE("degenerate optimum has a unique objective") {
  LpProblem p(2);
  p.objective = {1.0, 1.0};
  p.add_row(std::vector<double>{1.0, 1.0}, 1.0);
  const auto s = solve_lp(p);
  REQUIRE(s.status == LpStatus::Optimal);
  CHECK(s.objective == doctest::Approx(1.0));
  CHECK(s.x[0] + s.x[1] == doctest::Approx(1.0));
}

TEST_CASE("unbounded ray") {
  LpProblem p(1);
  p.objective = {-1.0};
  CHECK(solve_lp(p).status == LpStatus::Unbounded);
}

TEST_CASE("infeasible system") {
  LpProblem p(1);
  p.objective = {1.0};
  p.add_row(std::vector<double>{1.0}, 1.0);
  p.add_row(std::vector<double>{1.0}, 2.0);
  CHECK(solve_lp(p).status == LpStatus::Infeasible);
}

TEST_CASE("upper bounds and negative right-hand sides") {
  // min -x - 2y s.t. x + y = 3, -y = -b with y <= 2 (b free to vary via slack s): x + y + s = 3
  LpProblem p(3);
  p.objective = {-1.0, -2.0, 0.0};
  p.add_row(std::vector<double>{1.0, 1.0, 1.0}, 3.0);
  p.add_row(std::vector<double>{-1.0, 0.0, 0.0}, -1.0);
  p.upper = {kInf, 1.5, kInf};
  const auto s = solve_lp(p);
  REQUIRE(s.status == LpStatus::Optimal);
  CHECK(s.x[0] == doctest::Approx(1.0));
  CHECK(s.x[1] == doctest::Approx(1.5));
  CHECK(s.objective == doctest::Approx(-4.0));
  CHECK(s.max_residual <= 1e-8 * 4.0);
}

TEST_CASE("duals certify optimality") {
  // min 2a + 3b + c s.t. a + b = 2, b + c = 1
  LpProblem p(3);
  p.objective = {2.0, 3.0, 1.0};
  p.add_row(std::vector<double>{1, 1, 0}, 2);
  p.add_row(std::vector<double>{0, 1, 1}, 1);
  const auto s = solve_lp(p);
  REQUIRE(s.status == LpStatus::Optimal);
  CHECK(s.objective == doctest::Approx(5.0));
  for (std::size_t j = 0; j < 3; ++j) {
    double rc = p.objective[j];
    for (std::size_t i = 0; i < 2; ++i) rc -= p.at(i, j) * s.duals[i];
    CHECK(rc >= -1e-9);
  }
  CHECK(s.duals[0] * 2 + s.duals[1] * 1 == doctest::Approx(s.objective));
}

TEST_CASE("redundant equality rows") {
  LpProblem p(2);
  p.objective = {1.0, 2.0};
  p.add_row(std::vector<double>{1, 1}, 1);
  p.add_row(std::vector<double>{2, 2}, 2);
  const auto s = solve_lp(p);
  REQUIRE(s.status == LpStatus::Optimal);
  CHECK(s.objective == doctest::Approx(1.0));
}

TEST_CASE("LP listing format") {
  LpProblem p(1);
  p.objective = {1.5};
  p.add_row(std::vector<double>{2.0}, 4.0);
  std::ostringstream os;
  write_lp_listing(os, p);
  const std::string out = os.str();
  CHECK(out.rfind("LP 1 1\n", 0) == 0);
  CHECK(out.find("END") != std::string::npos);
}

TEST_CASE("transportation: single arc") {
  const auto t = TransportationProblem::from_costs(1, 1, {0.0}, {2.0}, {2.0});
  const auto r = solve_transportation(t);
  CHECK(r.plan.at(0, 0) == 2.0);
  CHECK(r.cost == 0.0);
}

TEST_CASE("transportation 2x2 matches the enumerated family") {
  // feasible plans are [[a, 1-a], [1-a, a]] with cost a + 2(1-a) + 3(1-a) + a = 5 - 3a
  const std::vector<double> C{1, 2, 3, 1};
  double best = 1e300;
  for (int s = 0; s <= 1000; ++s) {
    const double a = s / 1000.0;
    best = std::min(best, C[0] * a + C[1] * (1 - a) + C[2] * (1 - a) + C[3] * a);
  }
  const auto r = solve_transportation(TransportationProblem::from_costs(2, 2, C, {1, 1}, {1, 1}));
  CHECK(r.cost == doctest::Approx(best));
  CHECK(r.cost == doctest::Approx(2.0));
  CHECK(r.plan.at(0, 0) == doctest::Approx(1.0));
  CHECK(r.plan.at(1, 1) == doctest::Approx(1.0));
}

TEST_CASE("transportation avoids forbidden arcs") {
  const auto t = TransportationProblem::from_costs(2, 2, {5, kInf, 1, 1}, {1, 1}, {1, 1});
  CHECK(t.is_forbidden(0, 1));
  const auto r = solve_transportation(t);
  CHECK(r.plan.at(0, 1) == 0.0);
  CHECK(r.plan.at(0, 0) == doctest::Approx(1.0));
  CHECK(r.plan.at(1, 1) == doctest::Approx(1.0));
  CHECK(r.cost == doctest::Approx(6.0));
}

TEST_CASE("transportation errors") {
  try {
    solve_transportation(TransportationProblem::from_costs(1, 1, {1.0}, {1.0}, {2.0}));
    FAIL("expected UNBALANCED");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::Unbalanced);
  }
  try {
    solve_transportation(TransportationProblem::from_costs(2, 2, {kInf, 0, kInf, 0}, {1, 1}, {1, 1}));
    FAIL("expected INFEASIBLE_ARCS");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::InfeasibleArcs);
  }
}

TEST_CASE("transportation is bit-deterministic and feasible on random instances") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(0.0, 10.0);
  std::uniform_int_distribution<int> q(1, 6);
  for (int rep = 0; rep < 20; ++rep) {
    const std::size_t R = 3 + rep % 5, C = 2 + rep % 7;
    std::vector<double> cost(R * C), s(R), d(C, 0.0);
    for (double& c : cost) c = u(rng);
    double tot = 0.0;
    for (double& v : s) tot += (v = q(rng));
    for (std::size_t j = 0; j + 1 < C; ++j) d[j] = tot / static_cast<double>(C);
    d[C - 1] = tot - d[0] * static_cast<double>(C - 1);
    const auto t = TransportationProblem::from_costs(R, C, cost, s, d);
    const auto a = solve_transportation(t);
    const auto b = solve_transportation(t);
    CHECK(a.plan.flow == b.plan.flow);
    for (std::size_t i = 0; i < R; ++i) CHECK(a.plan.row_sum(i) == doctest::Approx(s[i]).epsilon(1e-9));
    for (std::size_t j = 0; j < C; ++j) CHECK(a.plan.col_sum(j) == doctest::Approx(d[j]).epsilon(1e-9));
    const auto lp = solve_lp(transportation_as_lp(t));
    CHECK(std::abs(lp.objective - a.cost) <= 1e-8 * (1 + a.cost));
  }
}
