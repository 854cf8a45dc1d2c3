#include "smcbf/barrier.hpp"
#include "smcbf/qp.hpp"

#include <benchmark/benchmark.h>

#include <random>
#include <vector>

namespace {

// The filter QP of the three-constraint plant: H = 2I, three inputs.
void BM_FilterQp(benchmark::State& state) {
  std::mt19937 rng(3);
  std::normal_distribution<double> normal;
  const auto k = static_cast<int>(state.range(0));
  std::vector<smcbf::barrier::LinearInputConstraint> rows;
  for (int i = 0; i < k; ++i) {
    Eigen::RowVectorXd row(3);
    for (auto& v : row) v = normal(rng);
    rows.push_back({row, 1.0 + normal(rng)});
  }
  const Eigen::VectorXd u = Eigen::VectorXd::Zero(3);
  const smcbf::qp::HildrethSettings settings;
  for (auto _ : state) benchmark::DoNotOptimize(smcbf::barrier::filter_input(u, rows, settings));
}
BENCHMARK(BM_FilterQp)->Arg(1)->Arg(3);

void BM_HildrethRandom(benchmark::State& state) {
  std::mt19937 rng(5);
  std::normal_distribution<double> normal;
  const auto n = static_cast<int>(state.range(0));
  Eigen::MatrixXd l(n, n), m(4, n);
  for (auto& v : l.reshaped()) v = normal(rng);
  for (auto& v : m.reshaped()) v = normal(rng);
  Eigen::VectorXd c(n), inside(n);
  for (auto& v : c) v = normal(rng);
  for (auto& v : inside) v = normal(rng);
  const Eigen::VectorXd gamma = m * inside - Eigen::VectorXd::Constant(4, 0.5);
  const smcbf::qp::QpProblem p(l * l.transpose() + Eigen::MatrixXd::Identity(n, n), c, m, gamma);
  for (auto _ : state) benchmark::DoNotOptimize(smcbf::qp::solve_hildreth(p));
}
BENCHMARK(BM_HildrethRandom)->Arg(2)->Arg(4);

}  // namespace
