// Acceptance suite: one PASS/FAIL/NOT RUN line per criterion, followed by the
// per-cell numbers behind it. Criteria 7 and 8 rerun named unit test cases.

#define DOCTEST_CONFIG_IMPLEMENT
#include <doctest.h>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <fmt/format.h>

#include "confound/config.hpp"
#include "confound/harness.hpp"

namespace fs = std::filesystem;
using namespace confound;

namespace {

enum class Status { Pass, Fail, NotRun };

std::string_view label(Status s) {
  switch (s) {
    case Status::Pass: return "PASS";
    case Status::Fail: return "FAIL";
    case Status::NotRun: return "NOT RUN";
  }
  return "";
}

struct Outcome {
  int id;
  std::string title;
  Status status = Status::Pass;
  std::vector<std::string> lines;
  Json cells = Json::array();
  double seconds = 0.0;

  void note(std::string line) { lines.push_back(std::move(line)); }
  void fail_if(bool bad) {
    if (bad && status == Status::Pass) status = Status::Fail;
  }
};

struct Options {
  bool quick = false;
  RngSeed seed = 20190923;
  fs::path data_dir;
  std::string out;
  std::vector<int> only;
  std::size_t workers = 0;
};

// Records which test cases actually ran, so a stale filter cannot pass silently.
std::vector<std::string> g_started;

struct StartedListener : doctest::IReporter {
  explicit StartedListener(const doctest::ContextOptions&) {}
  void report_query(const doctest::QueryData&) override {}
  void test_run_start() override {}
  void test_run_end(const doctest::TestRunStats&) override {}
  void test_case_start(const doctest::TestCaseData& tc) override { g_started.emplace_back(tc.m_name); }
  void test_case_reenter(const doctest::TestCaseData&) override {}
  void test_case_end(const doctest::CurrentTestCaseStats&) override {}
  void test_case_exception(const doctest::TestCaseException&) override {}
  void subcase_start(const doctest::SubcaseSignature&) override {}
  void subcase_end() override {}
  void log_assert(const doctest::AssertData&) override {}
  void log_message(const doctest::MessageData&) override {}
  void test_case_skipped(const doctest::TestCaseData&) override {}
};

constexpr NoiseKind kNoises[] = {NoiseKind::Normal01, NoiseKind::Uniform01, NoiseKind::Exponential1};

std::size_t datasets(const Options& o) { return o.quick ? 25 : 100; }

// One accuracy cell; the seed depends only on (family, noise), so cells are
// reproducible individually.
ExperimentReport cell(const Options& o, Family f, NoiseKind noise, std::vector<Algorithm> algorithms,
                      std::size_t n_datasets, std::optional<double> lambda = std::nullopt) {
  ExperimentPlan plan;
  plan.spec.family = f;
  plan.spec.noise = noise;
  plan.spec.lambda = lambda;
  plan.algorithms = std::move(algorithms);
  plan.n_datasets = n_datasets;
  plan.seed = derive_seed(o.seed, static_cast<std::uint64_t>(f) * 16 + static_cast<std::uint64_t>(noise));
  HarnessSettings settings;
  settings.workers = o.workers;
  return run_accuracy(plan, settings);
}

std::string pct(std::optional<double> acc) {
  return acc ? fmt::format("{:.0f}%", 100.0 * *acc) : std::string("n/a");
}

void record_cell(Outcome& out, const ExperimentReport& r, const AlgorithmReport& ar, double threshold,
                 bool checked) {
  const bool ok = ar.accuracy && *ar.accuracy >= threshold;
  out.note(fmt::format("  {:<20} {:<12} {:<8} acc={:>5} (need >= {:.0f}%{}){}",
                       to_string(r.plan.spec.family), to_string(r.plan.spec.noise), to_string(ar.algorithm),
                       pct(ar.accuracy), 100 * threshold, checked ? "" : ", informational",
                       checked && !ok ? "  <-- below" : ""));
  out.cells.push_back({{"family", to_string(r.plan.spec.family)},
                       {"noise", to_string(r.plan.spec.noise)},
                       {"algorithm", to_string(ar.algorithm)},
                       {"accuracy", ar.accuracy ? Json(*ar.accuracy) : Json(nullptr)},
                       {"n_datasets", r.plan.n_datasets},
                       {"undecided", ar.undecided},
                       {"errors", ar.errors},
                       {"threshold", threshold},
                       {"checked", checked}});
  if (checked) out.fail_if(!ok);
}

Outcome criterion1(const Options& o) {
  Outcome out{1, "Directed preservation"};
  const Family families[] = {Family::DirectedAdditive1, Family::DirectedAdditive2, Family::DirectedMult3,
                             Family::DirectedMult4,     Family::DirectedComplex5,  Family::DirectedComplex6};
  for (Family f : families) {
    for (NoiseKind noise : kNoises) {
      const auto r = cell(o, f, noise, {Algorithm::ModKCDC, Algorithm::ModIGCI, Algorithm::KCDC, Algorithm::IGCI},
                          datasets(o));
      for (const auto& ar : r.results) {
        const bool modified = ar.algorithm == Algorithm::ModKCDC || ar.algorithm == Algorithm::ModIGCI;
        bool checked = true;
        if (modified && f == Family::DirectedComplex6) checked = false;
        if (ar.algorithm == Algorithm::IGCI && f == Family::DirectedComplex6 && noise == NoiseKind::Normal01) {
          checked = false;
        }
        const double threshold = o.quick ? 0.85 : (modified ? 0.90 : 0.95);
        record_cell(out, r, ar, threshold, checked);
      }
    }
  }
  return out;
}

Outcome common_grid(const Options& o, int id, std::string title, std::span<const Family> families,
                    std::span<const NoiseKind> noises, double threshold) {
  Outcome out{id, std::move(title)};
  for (Family f : families) {
    for (NoiseKind noise : noises) {
      const auto r = cell(o, f, noise, {Algorithm::ModKCDC, Algorithm::ModIGCI}, datasets(o));
      for (const auto& ar : r.results) record_cell(out, r, ar, threshold, true);
    }
  }
  return out;
}

Outcome criterion2(const Options& o) {
  const Family families[] = {Family::CommonAdd1,  Family::CommonAdd2,   Family::CommonMult3,
                             Family::CommonMult4, Family::CommonMixed5, Family::CommonMixed6};
  return common_grid(o, 2, "Common-cause detection", families, kNoises, 0.88);
}

Outcome criterion3(const Options& o) {
  const Family families[] = {Family::CommonComplex1, Family::CommonComplex2, Family::CommonGP3,
                             Family::CommonGP4};
  const NoiseKind normal[] = {NoiseKind::Normal01};
  return common_grid(o, 3, "Robustness (complex noise and GP)", families, normal, 0.80);
}

Outcome criterion4(const Options& o) {
  Outcome out{4, "Sensitivity to the noise scale"};
  SensitivityPlan plan;
  plan.lambdas = o.quick ? std::vector<double>{0.0, 1.0, 2.0} : std::vector<double>{0.0, 0.25, 0.5, 1.0, 1.5, 2.0};
  plan.n_datasets = datasets(o);
  plan.seed = derive_seed(o.seed, 4);
  HarnessSettings settings;
  settings.workers = o.workers;
  const auto curve = run_sensitivity(plan, settings);
  const SensitivityPoint* at0 = nullptr;
  const SensitivityPoint* at1 = nullptr;
  for (const auto& p : curve) {
    out.note(fmt::format("  lambda={:<5} directed={:>5} common={:>5}", p.lambda, pct(p.directed_accuracy),
                         pct(p.common_accuracy)));
    out.cells.push_back({{"lambda", p.lambda},
                         {"directed_accuracy", p.directed_accuracy},
                         {"common_accuracy", p.common_accuracy}});
    if (p.lambda == 0.0) at0 = &p;
    if (p.lambda == 1.0) at1 = &p;
  }
  const auto& last = curve.back();
  const bool dir1 = std::abs(at1->directed_accuracy - 0.46) <= 0.15;
  const bool com1 = std::abs(at1->common_accuracy - 0.62) <= 0.15;
  const bool dir_mono = at0->directed_accuracy > last.directed_accuracy;
  const bool com_mono = at0->common_accuracy > last.common_accuracy;
  out.note(fmt::format("  lambda=1 directed {} within 0.46 +/- 0.15: {}", pct(at1->directed_accuracy), dir1));
  out.note(fmt::format("  lambda=1 common   {} within 0.62 +/- 0.15: {}", pct(at1->common_accuracy), com1));
  out.note(fmt::format("  lambda=0 beats lambda={}: directed {}, common {}", last.lambda, dir_mono, com_mono));
  out.fail_if(!(dir1 && com1 && dir_mono && com_mono));
  return out;
}

struct RealCase {
  std::string name;
  std::string file;
  PairFileSpec format;
  Algorithm algorithm;
  bool want_directed;
  std::optional<double> expected_mean;
};

Outcome criterion5(const Options& o) {
  Outcome out{5, "Real data"};
  const PairFileSpec bc{PairFormat::CsvWithHeader, "mean perimeter", "mean compactness"};
  const PairFileSpec mpg{PairFormat::CsvWithHeader, "acceleration", "mpg"};
  const std::vector<RealCase> cases{
      {"Tuebingen pair 99", "tuebingen_pair0099.txt", {}, Algorithm::ModKCDC, true, 0.933},
      {"breast cancer", "breast_cancer.csv", bc, Algorithm::ModKCDC, false, 0.491},
      {"AutoMPG", "autompg.csv", mpg, Algorithm::ModKCDC, false, 0.639},
      {"breast cancer", "breast_cancer.csv", bc, Algorithm::ModIGCI, false, std::nullopt},
  };
  std::size_t missing = 0;
  for (const auto& c : cases) {
    const fs::path path = o.data_dir / c.file;
    if (!fs::exists(path)) {
      ++missing;
      out.note(fmt::format("  {:<18} {:<8} file {} not found", c.name, to_string(c.algorithm), path.string()));
      continue;
    }
    const auto r = run_real(path, c.format, c.algorithm, {}, o.seed);
    const bool directed = r.verdict.tag == Verdict::AtoB || r.verdict.tag == Verdict::BtoA;
    const bool verdict_ok = c.want_directed ? directed : r.verdict.tag == Verdict::CommonCause;
    const bool mean_ok = !c.expected_mean || std::abs(r.stats->mean - *c.expected_mean) <= 0.15;
    out.note(fmt::format("  {:<18} {:<8} rows={} skipped={} verdict={} (want {}) mean={:.3f}{} var={:.4f}",
                         c.name, to_string(c.algorithm), r.rows, r.skipped_rows, to_string(r.verdict.tag),
                         c.want_directed ? "directed" : "CommonCause", r.stats->mean,
                         c.expected_mean ? fmt::format(" (want {:.3f} +/- 0.15)", *c.expected_mean) : "",
                         r.stats->var));
    out.cells.push_back({{"dataset", c.name},
                         {"algorithm", to_string(c.algorithm)},
                         {"rows", r.rows},
                         {"verdict", to_string(r.verdict.tag)},
                         {"mean", r.stats->mean},
                         {"var", r.stats->var}});
    out.fail_if(!(verdict_ok && mean_ok));
  }
  if (missing == cases.size()) out.status = Status::NotRun;
  else if (missing > 0 && out.status == Status::Pass) out.status = Status::NotRun;
  return out;
}

Outcome criterion6(const Options& o) {
  Outcome out{6, "CAN directional reproduction"};
  auto run = [&](Family f, NoiseKind noise) {
    const auto r = cell(o, f, noise, {Algorithm::CAN}, 10);
    const auto& ar = r.results.front();
    out.cells.push_back({{"family", to_string(f)},
                         {"noise", to_string(noise)},
                         {"fit_failures", ar.undecided},
                         {"errors", ar.errors},
                         {"fitted_accuracy", ar.accuracy ? Json(*ar.accuracy) : Json(nullptr)}});
    return ar;
  };
  for (Family f : {Family::DirectedAdditive1, Family::DirectedAdditive2}) {
    for (NoiseKind noise : kNoises) {
      const auto ar = run(f, noise);
      const bool ok = ar.undecided > 0 && ar.undecided < 10;
      out.note(fmt::format("  {:<20} {:<12} fit failures {}/10, fitted accuracy {} (need some but not all){}",
                           to_string(f), to_string(noise), ar.undecided, pct(ar.accuracy), ok ? "" : "  <-- off"));
      out.fail_if(!ok);
    }
  }
  for (Family f : {Family::DirectedMult3, Family::DirectedMult4, Family::DirectedComplex5, Family::DirectedComplex6}) {
    for (NoiseKind noise : kNoises) {
      const auto ar = run(f, noise);
      const bool ok = ar.undecided > 5;
      out.note(fmt::format("  {:<20} {:<12} fit failures {}/10 (need a majority){}", to_string(f),
                           to_string(noise), ar.undecided, ok ? "" : "  <-- off"));
      out.fail_if(!ok);
    }
  }
  return out;
}

Outcome run_cases(int id, std::string title, const std::vector<std::string>& names, double limit_seconds) {
  Outcome out{id, std::move(title)};
  std::string filter;
  for (const auto& n : names) {
    if (!filter.empty()) filter += ',';
    filter += n;
  }
  doctest::Context ctx;
  ctx.setOption("test-case", filter.c_str());
  ctx.setOption("minimal", true);
  const auto start = std::chrono::steady_clock::now();
  g_started.clear();
  const int failed = ctx.run();
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  for (const auto& n : names) {
    const bool ran = std::find(g_started.begin(), g_started.end(), n) != g_started.end();
    out.note(fmt::format("  {}{}", n, ran ? "" : "  <-- not found"));
    out.fail_if(!ran);
  }
  out.note(fmt::format("  {} cases, {:.1f} s (limit {:.0f} s)", names.size(), secs, limit_seconds));
  out.fail_if(failed != 0 || secs >= limit_seconds);
  return out;
}

Outcome criterion7() {
  return run_cases(7, "Property suites",
                   {"delta statistic range and exchange symmetry", "igci swap antisymmetry and permutation invariance",
                    "kcdc symmetric cases", "kcdc permutation invariance", "igci affine invariance",
                    "rbf Gram matrices are PSD", "hsic symmetry and shift invariance with a constant argument",
                    "isomap recovers the order of a cubic curve", "threshold tables partition the mean-variance square",
                    "discover replays bit-identically", "every family generates labelled finite data and replays"},
                   60.0);
}

Outcome criterion8() {
  return run_cases(8, "Oracle equivalences",
                   {"cme_norms matches the dense 3x3 oracle", "cme_norms matches the dense oracle with the median heuristic",
                    "kernel ridge matches the dense 4x4 oracle", "geodesic distances match Bellman-Ford on random graphs",
                    "classical MDS on three collinear points"},
                   600.0);
}

}  // namespace

DOCTEST_REGISTER_LISTENER("started", 1, StartedListener);

int main(int argc, char** argv) {
  Options o;
  o.data_dir = fs::path(CONFOUND_SOURCE_DIR) / "data";
  CLI::App app{"Acceptance criteria"};
  app.add_flag("--quick", o.quick, "25 datasets per cell instead of 100");
  app.add_option("--seed", o.seed, "Master seed");
  app.add_option("--data-dir", o.data_dir, "Directory holding the real-data files");
  app.add_option("--out", o.out, "Write a JSON report here");
  app.add_option("--only", o.only, "Run only these criteria");
  app.add_option("--workers", o.workers, "Worker threads");
  CLI11_PARSE(app, argc, argv);

  const std::vector<std::pair<int, std::function<Outcome()>>> criteria{
      {1, [&] { return criterion1(o); }}, {2, [&] { return criterion2(o); }},
      {3, [&] { return criterion3(o); }}, {4, [&] { return criterion4(o); }},
      {5, [&] { return criterion5(o); }}, {6, [&] { return criterion6(o); }},
      {7, [] { return criterion7(); }},   {8, [] { return criterion8(); }},
  };

  std::vector<Outcome> outcomes;
  for (const auto& [id, fn] : criteria) {
    if (!o.only.empty() && std::find(o.only.begin(), o.only.end(), id) == o.only.end()) continue;
    const auto start = std::chrono::steady_clock::now();
    Outcome out = fn();
    out.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::printf("[%s] %d %s (%.0f s)\n", std::string(label(out.status)).c_str(), out.id, out.title.c_str(),
                out.seconds);
    for (const auto& line : out.lines) std::printf("%s\n", line.c_str());
    std::fflush(stdout);
    outcomes.push_back(std::move(out));
  }

  std::printf("\nSummary (%s mode, seed %llu)\n", o.quick ? "quick" : "full",
              static_cast<unsigned long long>(o.seed));
  bool any_fail = false;
  Json report = {{"mode", o.quick ? "quick" : "full"}, {"seed", o.seed}, {"criteria", Json::array()}};
  for (const auto& out : outcomes) {
    std::printf("[%s] %d %s\n", std::string(label(out.status)).c_str(), out.id, out.title.c_str());
    any_fail = any_fail || out.status == Status::Fail;
    report["criteria"].push_back({{"id", out.id},
                                  {"title", out.title},
                                  {"status", label(out.status)},
                                  {"seconds", out.seconds},
                                  {"cells", out.cells}});
  }
  if (!o.out.empty()) write_json_file(o.out, report);
  return any_fail ? 1 : 0;
}
