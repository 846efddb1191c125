// bench_core.cpp — microbenchmarks for the hot paths: consensus sweeps,
// full solver iterations, spectral analysis, transition products, and the
// closed-form bound constants.  Instances are fixed-seed so timings are
// comparable across runs.

#include <dgm/bounds.hpp>
#include <dgm/net.hpp>
#include <dgm/objectives.hpp>
#include <dgm/solvers.hpp>

#include <benchmark/benchmark.h>

#include <Eigen/Dense>

namespace {

dgm::WeightMatrix bench_weights(int n) {
    const double density = n >= 100 ? 0.10 : 0.12;
    return dgm::metropolis_weights(dgm::generate_geometric(n, density, 42));
}

void consensus_sweep(benchmark::State& state) {
    const int n = static_cast<int>(state.range(0));
    const dgm::WeightMatrix w = bench_weights(n);
    Eigen::MatrixXd x = Eigen::MatrixXd::Random(n, 3);
    for (auto _ : state) {
        x = w.matrix() * x;
        benchmark::DoNotOptimize(x.data());
    }
}
BENCHMARK(consensus_sweep)->Arg(30)->Arg(100);

void spectral_summary(benchmark::State& state) {
    const int n = static_cast<int>(state.range(0));
    const dgm::WeightMatrix w = bench_weights(n);
    for (auto _ : state) {
        dgm::SpectralInfo info = dgm::spectral(w);
        benchmark::DoNotOptimize(info.mu);
    }
}
BENCHMARK(spectral_summary)->Arg(30)->Arg(100);

void dng_run(benchmark::State& state) {
    const dgm::ObjectiveSet obj = dgm::make_logistic(10, 3);
    dgm::DngConfig cfg;
    cfg.c = 1.0;
    cfg.k_max = 200;
    cfg.weight = dgm::safeguard_weights(bench_weights(10), 0.1);
    const Eigen::VectorXd x0 = Eigen::VectorXd::Zero(obj.dim());
    for (auto _ : state) {
        dgm::RunTrace tr = dgm::run_dng(obj, cfg, x0);
        benchmark::DoNotOptimize(tr.records.back().dis_x);
    }
}
BENCHMARK(dng_run);

void dnc_run(benchmark::State& state) {
    const dgm::ObjectiveSet obj = dgm::make_logistic(10, 3);
    const dgm::WeightMatrix w = bench_weights(10);
    dgm::DncConfig cfg;
    cfg.alpha = 0.5 / *obj.lipschitz_L;
    cfg.k_max = 50;
    cfg.weight = w;
    cfg.mu = dgm::spectral(w).mu;
    const Eigen::VectorXd x0 = Eigen::VectorXd::Zero(obj.dim());
    for (auto _ : state) {
        dgm::RunTrace tr = dgm::run_dnc(obj, cfg, x0);
        benchmark::DoNotOptimize(tr.records.back().dis_x);
    }
}
BENCHMARK(dnc_run);

void transition_product(benchmark::State& state) {
    const dgm::WeightMatrix w =
        dgm::safeguard_weights(bench_weights(10), 0.1);
    for (auto _ : state) {
        Eigen::MatrixXd phi = dgm::phi_matrix(w, 50, 0);
        benchmark::DoNotOptimize(phi.data());
    }
}
BENCHMARK(transition_product);

void decay_supremum(benchmark::State& state) {
    for (auto _ : state) {
        double b = dgm::big_b(0.95);
        benchmark::DoNotOptimize(b);
    }
}
BENCHMARK(decay_supremum);

void logistic_total_gradient(benchmark::State& state) {
    const dgm::ObjectiveSet obj = dgm::make_logistic(100, 3);
    const Eigen::VectorXd x = Eigen::VectorXd::Constant(obj.dim(), 0.25);
    for (auto _ : state) {
        Eigen::VectorXd grad = obj.total_gradient(x);
        benchmark::DoNotOptimize(grad.data());
    }
}
BENCHMARK(logistic_total_gradient);

}  // namespace
