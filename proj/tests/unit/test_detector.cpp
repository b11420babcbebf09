#include <doctest.h>

#include <cmath>
#include <string>
#include <vector>

#include "confound/detector.hpp"
#include "confound/errors.hpp"
#include "confound/generators.hpp"
#include "confound/rng.hpp"

using namespace confound;

TEST_CASE("delta statistic examples") {
  CHECK(delta_statistic(1, 1, 0, 5) == 1.0);
  CHECK(delta_statistic(0, 3, 5, 2) == 0.0);
  CHECK(delta_statistic(0, 1, 0, 3) == doctest::Approx(2.0 / 3.0));
  CHECK(delta_statistic(2, 2, 7, 7) == 0.0);
}

TEST_CASE("delta statistic range and exchange symmetry") {
  Rng r(2024);
  for (int i = 0; i < 100000; ++i) {
    const double scale = std::pow(10.0, 6 * r.uniform() - 3);
    const double v[4] = {scale * r.normal(), scale * r.normal(), scale * r.normal(), scale * r.normal()};
    const double d = delta_statistic(v[0], v[1], v[2], v[3]);
    REQUIRE(d >= 0.0);
    REQUIRE(d <= 1.0);
    REQUIRE(d == delta_statistic(v[2], v[3], v[0], v[1]));
  }
}

TEST_CASE("delta stats aggregate") {
  const auto s = DeltaStats::from_deltas({0.2, 0.4, 0.6});
  CHECK(s.mean == doctest::Approx(0.4));
  CHECK(s.var == doctest::Approx(0.04));
}

TEST_CASE("default tables") {
  const auto k = ThresholdTable::mod_kcdc();
  REQUIRE(k.rows().size() == 4);
  CHECK(k.locate(0.0).var_threshold == 0.03);
  CHECK(k.locate(0.25).var_threshold == 0.03);
  CHECK(k.locate(0.65).var_threshold == 0.06);
  CHECK(k.locate(0.9).above == RowAction::Failure);
  CHECK(k.locate(1.0).above == RowAction::Failure);
  CHECK(k.locate(0.1).below == RowAction::Failure);
  CHECK_THROWS_AS(k.locate(1.01), InvalidArgument);
  CHECK_THROWS_AS(k.locate(-0.01), InvalidArgument);

  const auto g = ThresholdTable::mod_igci();
  CHECK(g.locate(0.3).var_threshold == 0.01);
  CHECK(g.locate(0.45).var_threshold == 0.02);
  CHECK(g.action(0.5, 0.02) == RowAction::Directed);
  CHECK(g.action(0.5, 0.0201) == RowAction::CommonCause);
}

TEST_CASE("threshold tables partition the mean-variance square") {
  for (const auto& table : {ThresholdTable::mod_kcdc(), ThresholdTable::mod_igci()}) {
    for (int i = 0; i < 100; ++i) {
      const double mean = i / 99.0;
      int hits = 0;
      for (const auto& row : table.rows()) {
        const bool top = &row == &table.rows().back();
        if (mean >= row.mean_low && (mean < row.mean_high || (top && mean <= row.mean_high))) ++hits;
      }
      REQUIRE(hits == 1);
      for (int j = 0; j < 100; ++j) {
        const double var = 0.2 * j / 99.0;
        const auto& row = table.locate(mean);
        const RowAction want = var <= row.var_threshold ? row.below : row.above;
        REQUIRE(table.action(mean, var) == want);
      }
    }
  }
}

TEST_CASE("threshold table validation") {
  using R = ThresholdRow;
  const auto D = RowAction::Directed, C = RowAction::CommonCause, F = RowAction::Failure;
  CHECK_THROWS_AS(ThresholdTable({}), InvalidArgument);
  CHECK_THROWS_AS(ThresholdTable({R{0.0, 0.5, 0.1, D, C, ""}}), InvalidArgument);
  CHECK_THROWS_AS(ThresholdTable({R{0.0, 0.5, 0.1, D, C, ""}, R{0.6, 1.0, 0.1, D, C, ""}}), InvalidArgument);
  CHECK_THROWS_AS(ThresholdTable({R{0.0, 0.5, 0.2, D, C, ""}, R{0.5, 1.0, 0.1, D, C, ""}}), InvalidArgument);
  CHECK_THROWS_AS(ThresholdTable({R{0.0, 1.0, -0.1, D, C, ""}}), InvalidArgument);
  CHECK_THROWS_AS(ThresholdTable({R{0.0, 1.0, 0.1, C, D, ""}}), InvalidArgument);
  CHECK_NOTHROW(ThresholdTable({R{0.5, 1.0, 0.2, D, F, ""}, R{0.0, 0.5, 0.1, F, C, ""}}));
}

TEST_CASE("classify reproduces the published decisions") {
  const auto table = ThresholdTable::mod_kcdc();
  const auto directed = classify(DeltaStats{{}, 0.933, 0.007}, table, {1.0, 2.0});
  CHECK(directed.tag == Verdict::AtoB);
  CHECK(classify(DeltaStats{{}, 0.933, 0.007}, table, {2.0, 1.0}).tag == Verdict::BtoA);
  CHECK(classify(DeltaStats{{}, 0.491, 0.081}, table, {1.0, 2.0}).tag == Verdict::CommonCause);
  const auto fail = classify(DeltaStats{{}, 0.95, 0.10}, table, {1.0, 2.0});
  CHECK(fail.tag == Verdict::Undecided);
  CHECK(fail.detail.find("failure mode") != std::string::npos);
  CHECK(classify(DeltaStats{{}, 0.1, 0.001}, table, {1.0, 2.0}).tag == Verdict::Undecided);
}

TEST_CASE("detector config validation") {
  auto cfg = DetectorConfig::mod_igci(3);
  CHECK(cfg.scorer.scorer == ScorerKind::IGCI);
  CHECK(cfg.seed == 3);
  CHECK_NOTHROW(cfg.validate());
  cfg.n_bootstraps = 1;
  CHECK_THROWS_AS(cfg.validate(), InvalidArgument);
  cfg = DetectorConfig::mod_kcdc();
  cfg.subsample_fraction = 0.0;
  CHECK_THROWS_AS(cfg.validate(), InvalidArgument);
}

namespace {

BivariateDataset sample(Family f, RngSeed seed, std::size_t n = 250) {
  GeneratorSpec spec;
  spec.family = f;
  spec.seed = seed;
  spec.n = n;
  return generate(spec).data;
}

}  // namespace

TEST_CASE("bootstrap on full permutations has zero variance") {
  const auto d = normalize_unit_variance(sample(Family::DirectedAdditive2, 1, 120));
  auto cfg = DetectorConfig::mod_igci(7);
  cfg.n_bootstraps = 2;
  cfg.subsample_fraction = 1.0;
  const auto s = bootstrap_deltas(d, cfg);
  REQUIRE(s.deltas.size() == 2);
  CHECK(s.var == doctest::Approx(0.0).scale(1.0).epsilon(1e-20));
}

TEST_CASE("discover replays bit-identically") {
  const auto d = sample(Family::CommonMult3, 5, 150);
  for (auto cfg : {DetectorConfig::mod_kcdc(11), DetectorConfig::mod_igci(11)}) {
    cfg.n_bootstraps = 5;
    const auto a = discover(d, cfg);
    const auto b = discover(d, cfg);
    CHECK(a.stats == b.stats);
    CHECK(a.verdict == b.verdict);
    CHECK(a.stats.deltas.size() == 5);
    for (double v : a.stats.deltas) {
      CHECK(v >= 0.0);
      CHECK(v <= 1.0);
    }
    cfg.seed = 12;
    CHECK(!(discover(d, cfg).stats == a.stats));
  }
}

TEST_CASE("discover orients directed data") {
  int correct = 0;
  for (RngSeed seed = 0; seed < 5; ++seed) {
    auto cfg = DetectorConfig::mod_kcdc(seed);
    if (discover(sample(Family::DirectedAdditive2, 100 + seed), cfg).verdict.tag == Verdict::AtoB) ++correct;
  }
  CHECK(correct >= 4);
}

TEST_CASE("relabel symmetry with full subsamples") {
  for (RngSeed seed = 0; seed < 4; ++seed) {
    const auto d = sample(seed % 2 ? Family::DirectedMult4 : Family::CommonMixed5, seed, 120);
    for (auto cfg : {DetectorConfig::mod_kcdc(seed), DetectorConfig::mod_igci(seed)}) {
      cfg.subsample_fraction = 1.0;
      cfg.n_bootstraps = 3;
      const auto fwd = discover(d, cfg);
      const auto rev = discover(d.swapped(), cfg);
      CHECK(rev.verdict.tag == mirrored(fwd.verdict.tag));
      CHECK(rev.stats.mean == doctest::Approx(fwd.stats.mean).epsilon(1e-9));
    }
  }
}

TEST_CASE("discover error paths") {
  const BivariateDataset constant_b({1, 2, 3, 4, 5, 6}, {2, 2, 2, 2, 2, 2});
  CHECK_THROWS_AS(discover(constant_b, DetectorConfig::mod_kcdc()), ZeroVariance);

  // Too few rows for the neighborhood size surfaces as an embedding failure.
  const BivariateDataset tiny({1, 2, 3, 4, 6}, {2, 1, 4, 3, 5});
  try {
    discover(tiny, DetectorConfig::mod_igci());
    FAIL("expected EmbeddingFailure");
  } catch (const EmbeddingFailure& e) {
    CHECK(std::string(e.what()).find("iteration 0") != std::string::npos);
  }
}
