// Times the parallel sweep kernel against the serial reference on the same
// violation-map workload and checks that both produce identical bytes.
#include <chrono>
#include <cstdio>
#include <cstring>
#include <string>
#include <thread>

#include "ombell/io.hpp"
#include "ombell/model.hpp"
#include "ombell/sweep.hpp"

using namespace ombell;
using clock_type = std::chrono::steady_clock;

namespace {

double seconds_since(clock_type::time_point t0) {
  return std::chrono::duration<double>(clock_type::now() - t0).count();
}

SweepSpec workload(int count, int workers) {
  SweepSpec spec;
  spec.base_params = SystemParams::symmetric(0.1, 0.9, 1e-5, 0.2, 0.0);
  spec.axes = {AxisSpec{"alpha_i", 0.0, 0.4, count, false},
               AxisSpec{"r", 0.0, 0.3, count, false}};
  spec.workers = workers;
  return spec;
}

}  // namespace

int main(int argc, char** argv) {
  int count = 101;
  int repeats = 3;
  for (int i = 1; i + 1 < argc; i += 2) {
    if (std::strcmp(argv[i], "--count") == 0) count = std::atoi(argv[i + 1]);
    else if (std::strcmp(argv[i], "--repeats") == 0)
      repeats = std::atoi(argv[i + 1]);
    else {
      std::fprintf(stderr, "usage: bench_sweep [--count N] [--repeats R]\n");
      return 2;
    }
  }
  if (count < 2 || repeats < 1) {
    std::fprintf(stderr, "bench_sweep: count >= 2 and repeats >= 1 required\n");
    return 2;
  }

  const int workers =
      std::max(1u, std::thread::hardware_concurrency());
  std::printf("grid %dx%d, %d repeat(s), %d worker(s)\n", count, count,
              repeats, workers);

  double best_serial = 1e300, best_parallel = 1e300;
  std::string serial_csv, parallel_csv;
  for (int rep = 0; rep < repeats; ++rep) {
    auto t0 = clock_type::now();
    const SweepResult serial = run_sweep_serial(workload(count, 1));
    best_serial = std::min(best_serial, seconds_since(t0));
    serial_csv = to_csv(serial);

    t0 = clock_type::now();
    const SweepResult parallel = run_sweep(workload(count, workers));
    best_parallel = std::min(best_parallel, seconds_since(t0));
    parallel_csv = to_csv(parallel);
  }

  std::printf("serial   : %.3f s (%.1f cells/ms)\n", best_serial,
              count * static_cast<double>(count) / (1e3 * best_serial));
  std::printf("parallel : %.3f s (%.1f cells/ms)\n", best_parallel,
              count * static_cast<double>(count) / (1e3 * best_parallel));
  std::printf("speedup  : %.2fx\n", best_serial / best_parallel);

  if (serial_csv != parallel_csv) {
    std::fprintf(stderr, "FAIL: serial and parallel sweeps differ\n");
    return 1;
  }
  std::printf("serial and parallel outputs are byte-identical\n");
  return 0;
}
