// Serial reference kernels against their OpenMP counterparts on the built-in
// examples. Both runs must produce identical reports.

#include <omp.h>

#include <chrono>
#include <cstdio>
#include <functional>
#include <sstream>
#include <string>

#include "acp/flow.hpp"
#include "acp/suites.hpp"

using namespace acp;

namespace {

template <class F>
double seconds(F&& f, int reps) {
  double best = 1e300;
  for (int r = 0; r < reps; ++r) {
    const auto t0 = std::chrono::steady_clock::now();
    f();
    best = std::min(best, std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count());
  }
  return best;
}

struct Kernel {
  std::string name;
  std::function<std::string(Execution)> run;  // returns a serialized result
};

}  // namespace

int main(int argc, char** argv) {
  const int n = argc > 1 ? std::stoi(argv[1]) : 2000;
  const int reps = argc > 2 ? std::stoi(argv[2]) : 3;
  const ModelFile sec5 = resolve_model("sec5_example");
  const ModelFile br3 = resolve_model("br3_unimodular");
  const PoissonTriple t5 = model_triple(sec5), tb = model_triple(br3);
  const SampleSet s5 = sample_box(sec5.box, Generator::Halton, n);
  const SampleSet sb = sample_box(br3.box, Generator::Halton, n);
  const UnimodularityCertificate cert = model_certificate(br3);
  std::vector<Point> starts(s5.points.begin(), s5.points.begin() + std::min<std::size_t>(64, s5.points.size()));

  const std::vector<Kernel> kernels{
      {"check sec5_example",
       [&](Execution ex) { return report_json(sec5.name, s5, sec5.tol, check_suite(t5, s5.points, sec5.tol, ex)).dump(); }},
      {"strata sec5_example",
       [&](Execution ex) {
         std::ostringstream os;
         write_strata_csv(os, strata_report(t5, s5, sec5.tol, ex));
         return os.str();
       }},
      {"modular br3_unimodular",
       [&](Execution ex) { return report_json(br3.name, sb, br3.tol, modular_suite(tb, sb.points, br3.tol, ex)).dump(); }},
      {"certificate br3_unimodular",
       [&](Execution ex) {
         return report_json(br3.name, sb, br3.tol, unimod_global_check(tb, cert, sb.points, br3.tol, ex)).dump();
       }},
      {"flow batch sec5_example",
       [&](Execution ex) {
         std::ostringstream os;
         for (const Trajectory& tr : integrate_all(t5, DifferentiableField::parse("x1*y2 + y3"), starts, 0.01, 200, ex))
           os.write(reinterpret_cast<const char*>(&tr.states.back()), sizeof(Point));
         return os.str();
       }},
  };

  std::printf("points=%d threads=%d reps=%d\n", n, omp_get_max_threads(), reps);
  std::printf("%-28s %12s %12s %8s %s\n", "kernel", "serial_s", "parallel_s", "speedup", "identical");
  bool same = true;
  for (const Kernel& k : kernels) {
    std::string a, b;
    const double ts = seconds([&] { a = k.run(Execution::Serial); }, reps);
    const double tp = seconds([&] { b = k.run(Execution::Parallel); }, reps);
    std::printf("%-28s %12.4f %12.4f %8.2f %s\n", k.name.c_str(), ts, tp, ts / tp, a == b ? "yes" : "NO");
    same = same && a == b;
  }
  return same ? 0 : 1;
}
