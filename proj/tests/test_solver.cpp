#include <doctest.h>

#include <cmath>
#include <sstream>

#include "core/errors.hpp"
#include "core/rng.hpp"
#include "core/solver.hpp"
#include "oracles.hpp"

using namespace hybridloc;

namespace {

AxisObjective make_objective(const std::vector<std::vector<double>>& entries,
                             const std::vector<double>& truth, double p) {
  AxisObjective obj{AxisEstimateMatrix{}, PenaltyFunction(p)};
  const auto m = static_cast<Eigen::Index>(entries.size());
  const auto n = static_cast<Eigen::Index>(entries[0].size());
  obj.matrix.entries.resize(m, n);
  obj.matrix.truth.resize(m);
  for (Eigen::Index j = 0; j < m; ++j) {
    obj.matrix.truth(j) = truth[static_cast<std::size_t>(j)];
    for (Eigen::Index i = 0; i < n; ++i) {
      obj.matrix.entries(j, i) =
          entries[static_cast<std::size_t>(j)][static_cast<std::size_t>(i)];
    }
  }
  return obj;
}

// The running M=2, N=2 example: truths (0, 1), u1 = (0.1, 1.1),
// u2 = (0.4, 0.6). The quadratic in alpha_1 has its minimum at 16/17.
AxisObjective example_2x2(double p = 2.0) {
  return make_objective({{0.1, 0.4}, {1.1, 0.6}}, {0.0, 1.0}, p);
}

AxisObjective random_objective(Rng& rng, std::size_t m, std::size_t n,
                               double p) {
  const auto inst = oracles::random_instance(rng, m, n);
  return make_objective(inst.entries, inst.truth, p);
}

CoefficientVector unit_vector(std::size_t n, std::size_t i) {
  CoefficientVector v;
  v.weights.assign(n, 0.0);
  v.weights[i] = 1.0;
  return v;
}

}  // namespace

TEST_SUITE("solver") {
  TEST_CASE("objective values match hand sums and the brute evaluator") {
    const auto obj = example_2x2();
    CHECK(objective(obj, CoefficientVector{{1.0, 0.0}}) ==
          doctest::Approx(0.02).epsilon(1e-12));
    CHECK(objective(obj, CoefficientVector{{0.5, 0.5}}) ==
          doctest::Approx(0.085).epsilon(1e-12));
    CHECK(objective(obj, CoefficientVector{{0.5, 0.5}}) ==
          doctest::Approx(oracles::brute_objective({{0.1, 0.4}, {1.1, 0.6}},
                                                   {0.0, 1.0}, {0.5, 0.5},
                                                   2.0))
              .epsilon(1e-14));

    // Exact estimator: zero residual everywhere.
    const auto exact = make_objective({{1.0, 5.0}, {2.0, -3.0}}, {1.0, 2.0},
                                      2.0);
    CHECK(objective(exact, CoefficientVector{{1.0, 0.0}}) == 0.0);
  }

  TEST_CASE("objective validates dimensions") {
    const auto obj = example_2x2();
    CHECK_THROWS_AS(objective(obj, CoefficientVector{{1.0}}),
                    InvalidInputError);
    CHECK_THROWS_AS(gradient(obj, CoefficientVector{{1.0, 0.0, 0.0}}),
                    InvalidInputError);
  }

  TEST_CASE("gradient of zero residuals vanishes") {
    const auto exact = make_objective({{1.0, 5.0}, {2.0, -3.0}}, {1.0, 2.0},
                                      2.0);
    const auto g = gradient(exact, CoefficientVector{{1.0, 0.0}});
    CHECK(g[0] == 0.0);
    CHECK(g[1] == 0.0);
  }

  TEST_CASE("gradient matches the p = 2 matrix form") {
    // 2 (C alpha - U^T u) on the identity instance.
    const auto obj = make_objective({{1.0, 0.0}, {0.0, 1.0}}, {1.0, 0.0}, 2.0);
    const auto g = gradient(obj, CoefficientVector{{0.5, 0.5}});
    CHECK(g[0] == doctest::Approx(-1.0).epsilon(1e-14));
    CHECK(g[1] == doctest::Approx(1.0).epsilon(1e-14));
  }

  TEST_CASE("gradient agrees with central differences") {
    Rng rng(7);
    for (double p : {2.0, 3.0, 1.5}) {
      for (int trial = 0; trial < 10; ++trial) {
        const auto obj = random_objective(rng, 2 + rng.bounded(8),
                                          2 + rng.bounded(3), p);
        const std::size_t n =
            static_cast<std::size_t>(obj.matrix.entries.cols());
        // A strictly interior feasible point.
        CoefficientVector alpha;
        double total = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
          alpha.weights.push_back(0.5 + rng.uniform01());
          total += alpha.weights.back();
        }
        for (double& w : alpha.weights) w /= total;

        const auto grad = gradient(obj, alpha);
        const double h = 1e-6;
        for (std::size_t i = 0; i < n; ++i) {
          auto plus = alpha;
          auto minus = alpha;
          plus.weights[i] += h;
          minus.weights[i] -= h;
          const double fd =
              (objective(obj, plus) - objective(obj, minus)) / (2.0 * h);
          CHECK(std::abs(grad[i] - fd) <=
                1e-5 * std::max(1.0, std::abs(grad[i])));
        }
      }
    }
  }

  TEST_CASE("solve_gpm: single technology returns immediately") {
    const auto obj = make_objective({{2.0}, {3.0}}, {2.0, 3.0}, 2.0);
    const auto [alpha, trace] = solve_gpm(obj, {});
    CHECK(alpha.weights == std::vector<double>{1.0});
    CHECK(trace.steps == 0);
    CHECK(trace.stop_reason == StopReason::kIterateFixed);
  }

  TEST_CASE("solve_gpm: closed-form optimum of the 2x2 example") {
    SolverConfig cfg;
    cfg.eps_opt = 1e-12;
    const auto [alpha, trace] = solve_gpm(example_2x2(), cfg);
    CHECK(alpha.weights[0] == doctest::Approx(16.0 / 17.0).epsilon(1e-6));
    CHECK(alpha.weights[1] == doctest::Approx(1.0 / 17.0).epsilon(2e-5));
    CHECK(trace.final_objective ==
          doctest::Approx(5.44 / 289.0).epsilon(1e-9));
    CHECK(trace.final_objective == doctest::Approx(0.018824).epsilon(1e-4));
  }

  TEST_CASE("solve_gpm: symmetric bias splits evenly and stops fixed") {
    // u1 = truth + 0.2, u2 = truth - 0.2.
    const auto obj = make_objective({{1.2, 0.8}, {2.2, 1.8}, {3.2, 2.8}},
                                    {1.0, 2.0, 3.0}, 2.0);
    const auto [alpha, trace] = solve_gpm(obj, {});
    CHECK(alpha.weights[0] == 0.5);
    CHECK(alpha.weights[1] == 0.5);
    CHECK(trace.final_objective <= 1e-30);  // residuals cancel to rounding
    CHECK(trace.stop_reason == StopReason::kIterateFixed);
  }

  TEST_CASE("solve_gpm: degenerate all-zero axis yields uniform weights") {
    const auto obj = make_objective({{0.0, 0.0}, {0.0, 0.0}}, {0.0, 0.0}, 2.0);
    const auto [alpha, trace] = solve_gpm(obj, {});
    CHECK(alpha.weights[0] == 0.5);
    CHECK(alpha.weights[1] == 0.5);
    CHECK(trace.degenerate_axis);
  }

  TEST_CASE("solve_gpm: bad configs are rejected") {
    SolverConfig cfg;
    cfg.beta = 100.0;  // outside (0, 2/(N L_max))
    CHECK_THROWS_AS(solve_gpm(example_2x2(), cfg), InvalidInputError);
    SolverConfig bad_eps;
    bad_eps.eps_opt = 0.0;
    CHECK_THROWS_AS(solve_gpm(example_2x2(), bad_eps), InvalidInputError);
  }

  TEST_CASE("monotone descent across penalties and steps") {
    Rng rng(99);
    for (int trial = 0; trial < 30; ++trial) {
      for (double p : {2.0, 3.0, 1.0001}) {
        const auto obj = random_objective(rng, 2 + rng.bounded(16),
                                          2 + rng.bounded(4), p);
        const auto window = curvature_bounds(obj.penalty, obj.matrix);
        for (int bi = 0; bi < 3; ++bi) {
          SolverConfig cfg;
          cfg.beta = window.beta_max * (0.05 + 0.9 * rng.uniform01());
          cfg.max_iter = 300;
          cfg.record_trace = true;
          const auto [alpha, trace] = solve_gpm(obj, cfg);
          for (std::size_t k = 1; k < trace.iterates.size(); ++k) {
            CHECK(trace.iterates[k].f <= trace.iterates[k - 1].f + 1e-12);
          }
        }
      }
    }
  }

  TEST_CASE("iterates replay as projected gradient steps") {
    Rng rng(1234);
    const auto obj = random_objective(rng, 12, 3, 2.0);
    SolverConfig cfg;
    cfg.record_trace = true;
    cfg.max_iter = 200;
    const auto [alpha, trace] = solve_gpm(obj, cfg);
    REQUIRE(trace.iterates.size() >= 2);
    for (std::size_t k = 1; k < trace.iterates.size(); ++k) {
      CoefficientVector prev{trace.iterates[k - 1].alpha};
      const auto grad = gradient(obj, prev);
      std::vector<double> step(prev.weights.size());
      for (std::size_t i = 0; i < step.size(); ++i) {
        step[i] = prev.weights[i] - trace.iterates[k].beta_used * grad[i];
      }
      const auto expected = project_sorted(step);
      for (std::size_t i = 0; i < step.size(); ++i) {
        CHECK(trace.iterates[k].alpha[i] == expected.point.weights[i]);
      }
    }
  }

  TEST_CASE("fixed-point stops satisfy the variational inequality") {
    const auto obj = make_objective({{1.0, 5.0}, {2.0, -3.0}}, {1.0, 2.0}, 2.0);
    SolverConfig cfg;
    cfg.eps_opt = 1e-13;
    const auto [alpha, trace] = solve_gpm(obj, cfg);
    const auto grad = gradient(obj, alpha);
    Rng rng(31337);
    for (int probe = 0; probe < 1000; ++probe) {
      std::vector<double> z(alpha.size());
      for (double& v : z) v = 2.0 * rng.uniform01() - 1.0;
      const auto feasible = project_sorted(z);
      double inner = 0.0;
      for (std::size_t i = 0; i < z.size(); ++i) {
        inner += grad[i] * (feasible.point.weights[i] - alpha.weights[i]);
      }
      CHECK(inner >= -1e-8);
    }
  }

  TEST_CASE("hybrid objective never loses to a single technology") {
    Rng rng(808);
    for (int trial = 0; trial < 40; ++trial) {
      const std::size_t n = 2 + rng.bounded(4);
      const auto obj = random_objective(rng, 4 * n, n, 2.0);
      SolverConfig cfg;
      cfg.eps_opt = 1e-12;
      const auto [alpha, trace] = solve_gpm(obj, cfg);
      for (std::size_t i = 0; i < n; ++i) {
        CHECK(trace.final_objective <=
              objective(obj, unit_vector(n, i)) + 1e-12);
      }
    }
  }

  TEST_CASE("linear convergence under the spectral contraction constant") {
    // For p = 2 the gradient map is linear, so projection nonexpansiveness
    // gives ||a^{k+1} - a*|| <= ||I - 2 beta C||_2 ||a^k - a*||. The trace
    // keeps every iterate, so the empirical per-step ratio is checked
    // against that certified constant.
    Rng rng(606);
    for (int trial = 0; trial < 10; ++trial) {
      const std::size_t n = 2 + rng.bounded(3);
      const auto obj = random_objective(rng, 4 * n, n, 2.0);
      SolverConfig cfg;
      cfg.eps_opt = 1e-13;
      cfg.record_trace = true;
      const auto [alpha, trace] = solve_gpm(obj, cfg);

      const Eigen::MatrixXd contraction =
          Eigen::MatrixXd::Identity(static_cast<Eigen::Index>(n),
                                    static_cast<Eigen::Index>(n)) -
          2.0 * trace.beta *
              (obj.matrix.entries.transpose() * obj.matrix.entries);
      const double rate = contraction.jacobiSvd().singularValues()(0);

      const auto gap_to_final = [&](const TracePoint& point) {
        double gap = 0.0;
        for (std::size_t i = 0; i < alpha.size(); ++i) {
          const double d = point.alpha[i] - alpha.weights[i];
          gap += d * d;
        }
        return std::sqrt(gap);
      };
      for (std::size_t k = 1; k < trace.iterates.size(); ++k) {
        const double prev = gap_to_final(trace.iterates[k - 1]);
        if (prev < 1e-8) break;  // below here the final iterate != a*
        CHECK(gap_to_final(trace.iterates[k]) <= rate * prev + 1e-12);
      }
    }
  }

  TEST_CASE("oracle nails the 2x2 example and exact estimators") {
    const auto best = solve_oracle(example_2x2(), 1e-3);
    CHECK(best.weights[0] == doctest::Approx(0.941).epsilon(1e-12));
    CHECK(best.weights[1] == doctest::Approx(0.059).epsilon(1e-12));
    CHECK(objective(example_2x2(), best) <=
          5.44 / 289.0 + 1e-6);

    const auto exact = make_objective({{1.0, 5.0}, {2.0, -3.0}}, {1.0, 2.0},
                                      2.0);
    const auto e1 = solve_oracle(exact, 1e-2);
    CHECK(e1.weights[0] == 1.0);
    CHECK(e1.weights[1] == 0.0);
  }

  TEST_CASE("oracle handles duplicated technologies by objective value") {
    // Columns 2 and 3 identical: the split between them is arbitrary but
    // the objective is unique.
    const auto obj = make_objective(
        {{0.2, 0.9, 0.9}, {1.1, 1.9, 1.9}, {2.3, 3.1, 3.1}}, {0.5, 1.5, 2.5},
        2.0);
    const auto best = solve_oracle(obj, 1e-2);
    const auto merged = make_objective({{0.2, 0.9}, {1.1, 1.9}, {2.3, 3.1}},
                                       {0.5, 1.5, 2.5}, 2.0);
    const auto merged_best = solve_oracle(merged, 1e-2);
    CHECK(objective(obj, best) ==
          doctest::Approx(objective(merged, merged_best)).epsilon(1e-3));
  }

  TEST_CASE("oracle agrees with GPM on random quadratic instances") {
    Rng rng(515);
    for (int trial = 0; trial < 20; ++trial) {
      const std::size_t n = 2 + rng.bounded(3);
      const auto obj = random_objective(rng, 2 + rng.bounded(15), n, 2.0);
      SolverConfig cfg;
      cfg.eps_opt = 1e-12;
      const auto [alpha, trace] = solve_gpm(obj, cfg);
      const auto grid = solve_oracle(obj, 1e-3);
      const double f_oracle = objective(obj, grid);
      CHECK(trace.final_objective <= f_oracle + 1e-4 * (1.0 + f_oracle));
    }
  }

  TEST_CASE("oracle agrees with GPM for a non-quadratic penalty") {
    Rng rng(525);
    for (int trial = 0; trial < 5; ++trial) {
      const auto obj = random_objective(rng, 8, 3, 3.0);
      SolverConfig cfg;
      cfg.eps_opt = 1e-12;
      const auto [alpha, trace] = solve_gpm(obj, cfg);
      const auto grid = solve_oracle(obj, 1e-3);
      const double f_oracle = objective(obj, grid);
      CHECK(trace.final_objective <= f_oracle + 1e-4 * (1.0 + f_oracle));
    }
  }

  TEST_CASE("oracle rejects unsupported sizes") {
    Rng rng(3);
    const auto obj = random_objective(rng, 4, 6, 2.0);
    CHECK_THROWS_AS(solve_oracle(obj, 1e-2), UnsupportedError);
    const auto small = random_objective(rng, 4, 2, 2.0);
    CHECK_THROWS_AS(solve_oracle(small, 0.0), InvalidInputError);
  }

  TEST_CASE("iteration bound arithmetic") {
    CHECK(iteration_bound(0.5, 2, std::sqrt(0.5)) == 0);
    CHECK(iteration_bound(0.5, 2, std::sqrt(0.5) / 8.0) == 3);  // ln 8 / ln 2
    CHECK(iteration_bound(0.5, 1, 0.1) == 0);        // start is optimal
    CHECK_THROWS_AS(iteration_bound(0.0, 2, 0.1), InvalidInputError);
    CHECK_THROWS_AS(iteration_bound(1.0, 2, 0.1), InvalidInputError);
    CHECK_THROWS_AS(iteration_bound(0.5, 2, 0.0), InvalidInputError);

    std::uint64_t prev = 0;
    for (double q : {0.1, 0.3, 0.5, 0.7, 0.9, 0.99, 0.999999}) {
      const auto bound = iteration_bound(q, 4, 1e-6);
      CHECK(bound >= prev);
      prev = bound;
    }
  }

  TEST_CASE("trace exports the documented CSV") {
    SolverConfig cfg;
    cfg.record_trace = true;
    cfg.max_iter = 5;
    const auto [alpha, trace] = solve_gpm(example_2x2(), cfg);
    std::ostringstream out;
    write_trace_csv(trace, out);
    std::istringstream in(out.str());
    std::string line;
    REQUIRE(std::getline(in, line));
    CHECK(line == "k,f,alpha_1,alpha_2");
    std::size_t rows = 0;
    while (std::getline(in, line)) ++rows;
    CHECK(rows == trace.iterates.size());
  }
}
