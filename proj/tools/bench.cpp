// Benchmark: OpenMP kernels against their serial reference twins.
// BETHEFORGE_THREADS controls the parallel side.

#include <fmt/format.h>

#include <chrono>
#include <cmath>

#include "betheforge/chain.hpp"
#include "betheforge/parallel.hpp"
#include "betheforge/rsos.hpp"
#include "betheforge/strings.hpp"
#include "betheforge/thermo.hpp"

using namespace betheforge;

namespace {

template <typename F>
double time_ms(F&& f) {
  auto start = std::chrono::steady_clock::now();
  f();
  return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start)
      .count();
}

void row(const std::string& name, const std::string& size, double serial_ms,
         double parallel_ms, double delta) {
  fmt::print("{:<26} {:<22} {:>10.1f} {:>10.1f} {:>8.2f}x   {:.1e}\n", name, size, serial_ms,
             parallel_ms, serial_ms / parallel_ms, delta);
}

}  // namespace

int main() {
  apply_thread_env();
  fmt::print("threads: {}\n", thread_count());
  fmt::print("{:<26} {:<22} {:>10} {:>10} {:>9}   {}\n", "kernel", "size", "serial/ms",
             "omp/ms", "speedup", "max|diff|");

  // monodromy build: two-leg apply vs embed-and-multiply
  {
    auto spec = make_chain_spec(std::vector<Spin>(8, Spin(1)), 1);
    auto sites = site_spins(spec);
    DenseOperator fast, ref;
    double tp = time_ms([&] { fast = inhomogeneous_transfer(Spin(2), sites, cplx(0.3), {}, false); });
    double ts = time_ms([&] { ref = inhomogeneous_transfer(Spin(2), sites, cplx(0.3), {}, true); });
    row("monodromy apply", "aux 1 x (1/2)^8", ts, tp,
        (fast.mat - ref.mat).cwiseAbs().maxCoeff());
  }

  // string-configuration counting
  {
    auto spec = make_chain_spec(std::vector<Spin>(1, Spin(1)), 56, BigInt(1) << 200);
    int M = 28;
    BigInt a, b;
    double tp = time_ms([&] { a = count_states(spec, M); });
    double ts = time_ms([&] { b = count_states_serial(spec, M); });
    row("state counting", fmt::format("(1/2)^56, M={}", M), ts, tp,
        a == b ? 0.0 : 1.0);
  }

  // kernel sampling on a dense rapidity grid
  {
    DensityGrid grid;
    grid.lambda_min = -20.0;
    grid.lambda_max = 20.0;
    grid.N = 8192;
    auto params = KernelParams::hbar_limit(1.0);
    auto f = [&](double l) { return kappa_kernel(params, l); };
    Eigen::VectorXd a, b;
    double tp = time_ms([&] { a = sample_grid(grid, f); });
    double ts = time_ms([&] { b = sample_grid_serial(grid, f); });
    row("kernel grid sampling", "N = 8192", ts, tp, (a - b).cwiseAbs().maxCoeff());
  }

  // RSOS conjecture sweep
  {
    std::vector<SweepCell> a, b;
    double tp = time_ms([&] { a = conjecture_sweep(40, 7); });
    double ts = time_ms([&] { b = conjecture_sweep_serial(40, 7); });
    bool equal = a.size() == b.size();
    for (size_t i = 0; equal && i < a.size(); ++i)
      equal = a[i].count == b[i].count && a[i].match && b[i].match;
    row("rsos conjecture sweep", "sum <= 40, sbar <= 7/2", ts, tp, equal ? 0.0 : 1.0);
  }
  return 0;
}
