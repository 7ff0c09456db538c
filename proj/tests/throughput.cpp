// Throughput checks on 2048x1024 frames. Needs a machine with at least 8
// hardware threads to be meaningful; the line still prints on smaller hosts.

#include <cstdio>
#include <thread>

#include "corrobench/commands.hpp"

using namespace corrobench;

int main() {
  const CorruptionContext ctx;
  const auto noise = parse_kind_filter("noise");
  const std::vector<int> sev{1, 2, 3};
  const unsigned cores = std::thread::hardware_concurrency();
  int failures = 0;
  auto line = [&](bool ok, const char* what, double value, const char* limit) {
    std::printf("%s  [8] %s %.2f (%s) on %u hardware threads\n", ok ? "PASS" : "FAIL", what, value,
                limit, cores);
    std::fflush(stdout);
    failures += !ok;
  };

  // 5 kinds x 3 severities x 2 frames = 30 images per batch
  const BenchResult n8 = bench_batch("noise", noise, sev, 2, 2048, 1024, 8, ctx);
  line(n8.images_per_sec() >= 30.0, "noise family, 8 workers, images/sec:", n8.images_per_sec(), ">= 30");

  const BenchResult p8 = bench_batch("psf", {parse_kind("psf")}, {3}, 8, 2048, 1024, 8, ctx);
  line(p8.images_per_sec() >= 5.0, "psf, 8 workers, images/sec:", p8.images_per_sec(), ">= 5");

  const BenchResult n1 = bench_batch("noise", noise, sev, 2, 2048, 1024, 1, ctx);
  const double efficiency = n8.images_per_sec() / (8.0 * n1.images_per_sec());
  line(efficiency >= 0.6, "scaling efficiency 1 -> 8 workers:", efficiency, ">= 0.60");
  return failures == 0 ? 0 : 1;
}
