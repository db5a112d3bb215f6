// Acceptance harness: one PASS/FAIL line per criterion check, nonzero exit on
// any failure. `--tight` runs only the extended multicritical tier.
#include <chrono>
#include <cstdio>
#include <iostream>
#include <set>
#include <string>

#include <CLI11.hpp>

#include "dicke/verify.hpp"

using namespace dicke;

int main(int argc, char** argv) {
  CLI::App app{"acceptance checks"};
  bool tight = false;
  int jobs = 1;
  std::set<int> only;
  app.add_flag("--tight", tight, "run the tight multicritical tier only");
  app.add_option("--jobs", jobs, "worker threads")->check(CLI::PositiveNumber);
  app.add_option("--only", only, "criterion numbers to run (default: 1-9)")->check(CLI::Range(1, 9));
  CLI11_PARSE(app, argc, argv);

  verify::Report report;
  verify::Options opts;
  opts.jobs = jobs;
  const auto refs = verify::References::embedded();
  const auto want = [&](int k) { return only.empty() || only.count(k) > 0; };

  std::size_t printed = 0;
  auto step = [&](const char* label, auto&& fn) {
    const auto t0 = std::chrono::steady_clock::now();
    fn();
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    for (; printed < report.checks.size(); ++printed) std::cout << verify::format(report.checks[printed]) << '\n';
    std::cout << "# " << label << " took " << secs << " s" << std::endl;
  };

  if (tight) {
    step("multicritical tight", [&] { verify::check_multicritical(report, refs, opts, phase::Profile::tight); });
  } else {
    if (want(1)) step("criterion 1", [&] { verify::check_af_boundaries(report, refs, opts); });
    if (want(2)) step("criterion 2", [&] { verify::check_as_window(report, refs, opts); });
    if (want(3)) step("criterion 3", [&] { verify::check_multicritical(report, refs, opts, phase::Profile::standard); });
    if (want(4)) step("criterion 4", [&] { verify::check_dicke(report, opts); });
    if (want(5)) step("criterion 5", [&] { verify::check_tfim(report, opts); });
    if (want(6)) step("criterion 6", [&] { verify::check_ed_suite(report, opts); });
    if (want(7)) step("criterion 7", [&] { verify::check_classical_af(report, opts); });
    if (want(8)) step("criterion 8", [&] { verify::check_meanfield(report, refs); });
    if (want(9)) {
      step("criterion 9", [&] { verify::check_invariants(report, opts); });
      if (want(1) || want(2) || want(3) || want(4))
        step("hellmann-feynman", [&] { verify::check_hellmann_feynman(report); });
    }
  }

  std::size_t failed = 0;
  for (const auto& c : report.checks) failed += c.pass ? 0 : 1;
  std::cout << (failed == 0 ? "ALL PASS" : "FAILURES") << ": " << report.checks.size() - failed << "/"
            << report.checks.size() << " checks passed" << std::endl;
  return failed == 0 ? 0 : 1;
}
