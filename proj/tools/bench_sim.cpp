// SPDX-License-Identifier: Apache-2.0
// simbench: throughput of the scalar vs bitsliced vs parallel simulators.
#include <chrono>
#include <cstdio>
#include <string>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "CLI11.hpp"

#include "gatelock/bench_io.hpp"
#include "gatelock/bits.hpp"
#include "gatelock/cipher.hpp"
#include "gatelock/errors.hpp"
#include "gatelock/netlist.hpp"
#include "gatelock/sim.hpp"

using namespace gatelock;

namespace {

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
      .count();
}

void report(const char* name, double sec, size_t patterns, size_t gates,
            double base_sec) {
  double mpat = patterns / sec / 1e6;
  double geval = patterns / sec * gates / 1e9;
  std::printf("%-10s %8.3f s  %9.3f Mpat/s  %8.2f Geval/s  %6.1fx\n", name,
              sec, mpat, geval, base_sec / sec);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"simulator throughput benchmark"};
  std::string bench_path, cipher_name = "simon-64-96-42";
  size_t patterns = 1 << 18;
  size_t scalar_cap = 1 << 12;
  uint64_t seed = 1;
  app.add_option("--bench", bench_path, "netlist to simulate");
  app.add_option("--cipher", cipher_name,
                 "unrolled cipher to simulate when no bench is given");
  app.add_option("--patterns", patterns, "bitsliced pattern count");
  app.add_option("--scalar-patterns", scalar_cap,
                 "pattern cap for the scalar reference");
  app.add_option("--seed", seed, "input pattern seed");
  CLI11_PARSE(app, argc, argv);

  try {
    Netlist n;
    if (!bench_path.empty()) {
      n = read_bench_file(bench_path);
    } else {
      auto spec = CipherSpec::parse_name(cipher_name);
      if (!spec) throw Error("unknown cipher spec: " + cipher_name);
      n = build_unrolled_circuit(*spec);
    }
    std::vector<NetId> sources = n.sources();
    std::printf("netlist: %zu gates, %zu sources, %zu outputs\n",
                n.num_gates(), sources.size(), n.outputs.size());
#ifdef _OPENMP
    std::printf("openmp: %d threads\n", omp_get_max_threads());
#else
    std::printf("openmp: disabled\n");
#endif

    Rng rng(seed);
    BitTable in(sources.size(), patterns);
    for (size_t r = 0; r < sources.size(); ++r)
      for (size_t w = 0; w < in.words(); ++w) in.row(r)[w] = rng.next_u64();

    size_t nscalar = std::min(scalar_cap, patterns);
    BitTable in_small(sources.size(), nscalar);
    for (size_t r = 0; r < sources.size(); ++r)
      for (size_t w = 0; w < in_small.words(); ++w)
        in_small.row(r)[w] = in.row(r)[w];

    auto t0 = std::chrono::steady_clock::now();
    BitTable ref = simulate_batch_scalar(n, sources, in_small, n.outputs);
    double scalar_sec = seconds_since(t0);
    double scalar_full = scalar_sec * patterns / nscalar;

    t0 = std::chrono::steady_clock::now();
    BitTable serial = simulate_batch_serial(n, sources, in, n.outputs);
    double serial_sec = seconds_since(t0);

    t0 = std::chrono::steady_clock::now();
    BitTable parallel = simulate_batch(n, sources, in, n.outputs);
    double parallel_sec = seconds_since(t0);

    for (size_t p = 0; p < nscalar; ++p)
      if (ref.column(p) != serial.column(p))
        throw Error("bitsliced result disagrees with the scalar reference");
    for (size_t r = 0; r < serial.rows(); ++r)
      for (size_t w = 0; w < serial.words(); ++w)
        if (serial.row(r)[w] != parallel.row(r)[w])
          throw Error("parallel result disagrees with the serial result");

    std::printf("scalar: %zu patterns in %.3f s (full run scaled below)\n",
                nscalar, scalar_sec);
    report("scalar", scalar_full, patterns, n.num_gates(), scalar_full);
    report("bitsliced", serial_sec, patterns, n.num_gates(), scalar_full);
    report("parallel", parallel_sec, patterns, n.num_gates(), scalar_full);
    std::printf("agreement: ok\n");
    return 0;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  }
}
