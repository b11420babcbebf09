#pragma once

#include <cstddef>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "confound/rng.hpp"

namespace confound {

/// Paired samples of two observed variables A and B.
///
/// Construction validates the invariants (equal lengths, at least three
/// rows, all values finite), so every instance in circulation is usable by
/// the scorers without further checks.
class BivariateDataset {
 public:
  BivariateDataset(std::vector<double> a, std::vector<double> b);

  std::span<const double> a() const noexcept { return a_; }
  std::span<const double> b() const noexcept { return b_; }
  std::size_t size() const noexcept { return a_.size(); }

  /// The same rows with the two columns exchanged.
  BivariateDataset swapped() const { return BivariateDataset(b_, a_); }

  friend bool operator==(const BivariateDataset&, const BivariateDataset&) = default;

 private:
  std::vector<double> a_;
  std::vector<double> b_;
};

enum class Verdict { AtoB, BtoA, CommonCause, Undecided };

struct CausalVerdict {
  Verdict tag = Verdict::Undecided;
  std::string detail;

  friend bool operator==(const CausalVerdict&, const CausalVerdict&) = default;
};

std::string_view to_string(Verdict v) noexcept;
Verdict verdict_from_string(std::string_view name);

/// AtoB <-> BtoA; CommonCause and Undecided are unchanged.
Verdict mirrored(Verdict v) noexcept;

/// Sample mean and unbiased (n - 1) variance.
double sample_mean(std::span<const double> x);
double sample_variance(std::span<const double> x);

/// Centers a column and scales it to unit unbiased variance.
/// Throws ZeroVariance for a constant column.
std::vector<double> standardize(std::span<const double> x);

/// Standardizes both columns. Throws ZeroVariance if either is constant.
BivariateDataset normalize_unit_variance(const BivariateDataset& d);

/// floor(fraction * n) rows drawn uniformly without replacement, in draw
/// order. Throws TooFewSamples if fewer than three rows would remain.
BivariateDataset subsample(const BivariateDataset& d, double fraction, RngSeed seed);

/// Row indices selected by subsample() for the same arguments.
std::vector<std::size_t> subsample_indices(std::size_t n, double fraction, RngSeed seed);

enum class PairFormat { TwoColumnWhitespace, CsvWithHeader };

struct PairFileSpec {
  PairFormat format = PairFormat::TwoColumnWhitespace;
  // Header names selecting the A and B columns; CSV only.
  std::string column_a;
  std::string column_b;
};

struct LoadedPair {
  BivariateDataset data;
  std::size_t skipped_rows = 0;
};

/// Reads a pair file. Rows with missing or unparsable entries are skipped
/// and counted. Throws IoError if the file cannot be read and FormatError if
/// fewer than three valid rows remain or a named column is absent.
LoadedPair load_pair_file(const std::filesystem::path& path, const PairFileSpec& spec = {});

/// Writes the two-column whitespace format with 17 significant digits.
void write_pair_file(const std::filesystem::path& path, const BivariateDataset& d);

/// CSV writer with a header line, the counterpart of CsvWithHeader loading.
void write_csv_pair_file(const std::filesystem::path& path, const BivariateDataset& d,
                         std::string_view column_a, std::string_view column_b);

}  // namespace confound
