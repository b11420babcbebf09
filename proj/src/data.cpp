#include "confound/data.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <numeric>
#include <sstream>

#include <fmt/format.h>

#include "confound/errors.hpp"

namespace confound {

BivariateDataset::BivariateDataset(std::vector<double> a, std::vector<double> b)
    : a_(std::move(a)), b_(std::move(b)) {
  if (a_.size() != b_.size()) {
    throw InvalidArgument(fmt::format("column lengths differ: {} vs {}", a_.size(), b_.size()));
  }
  if (a_.size() < 3) {
    throw TooFewSamples(fmt::format("dataset needs at least 3 rows, got {}", a_.size()));
  }
  for (std::size_t i = 0; i < a_.size(); ++i) {
    if (!std::isfinite(a_[i]) || !std::isfinite(b_[i])) {
      throw NonFinite(fmt::format("non-finite value in row {}", i));
    }
  }
}

std::string_view to_string(Verdict v) noexcept {
  switch (v) {
    case Verdict::AtoB: return "AtoB";
    case Verdict::BtoA: return "BtoA";
    case Verdict::CommonCause: return "CommonCause";
    case Verdict::Undecided: return "Undecided";
  }
  return "Undecided";
}

Verdict verdict_from_string(std::string_view name) {
  for (Verdict v : {Verdict::AtoB, Verdict::BtoA, Verdict::CommonCause, Verdict::Undecided}) {
    if (to_string(v) == name) return v;
  }
  throw InvalidArgument(fmt::format("unknown verdict '{}'", name));
}

Verdict mirrored(Verdict v) noexcept {
  if (v == Verdict::AtoB) return Verdict::BtoA;
  if (v == Verdict::BtoA) return Verdict::AtoB;
  return v;
}

double sample_mean(std::span<const double> x) {
  if (x.empty()) throw InvalidArgument("mean of empty sample");
  return std::accumulate(x.begin(), x.end(), 0.0) / static_cast<double>(x.size());
}

double sample_variance(std::span<const double> x) {
  if (x.size() < 2) throw InvalidArgument("variance needs at least 2 values");
  const double m = sample_mean(x);
  double ss = 0.0;
  for (double v : x) ss += (v - m) * (v - m);
  return ss / static_cast<double>(x.size() - 1);
}

std::vector<double> standardize(std::span<const double> x) {
  const double m = sample_mean(x);
  const double var = sample_variance(x);
  if (!(var > 0.0)) throw ZeroVariance("column has zero variance");
  const double inv_sd = 1.0 / std::sqrt(var);
  std::vector<double> out(x.size());
  std::transform(x.begin(), x.end(), out.begin(), [&](double v) { return (v - m) * inv_sd; });
  return out;
}

BivariateDataset normalize_unit_variance(const BivariateDataset& d) {
  return BivariateDataset(standardize(d.a()), standardize(d.b()));
}

std::vector<std::size_t> subsample_indices(std::size_t n, double fraction, RngSeed seed) {
  if (!(fraction > 0.0 && fraction <= 1.0)) {
    throw InvalidArgument(fmt::format("subsample fraction {} outside (0, 1]", fraction));
  }
  const auto m = static_cast<std::size_t>(std::floor(fraction * static_cast<double>(n)));
  if (m < 3) throw TooFewSamples(fmt::format("subsample keeps {} of {} rows", m, n));
  std::vector<std::size_t> idx(n);
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  Rng rng(seed);
  // Partial Fisher-Yates: the first m slots become the sample.
  for (std::size_t i = 0; i < m; ++i) {
    const auto j = i + static_cast<std::size_t>(rng.below(n - i));
    std::swap(idx[i], idx[j]);
  }
  idx.resize(m);
  return idx;
}

BivariateDataset subsample(const BivariateDataset& d, double fraction, RngSeed seed) {
  const auto idx = subsample_indices(d.size(), fraction, seed);
  std::vector<double> a(idx.size()), b(idx.size());
  for (std::size_t i = 0; i < idx.size(); ++i) {
    a[i] = d.a()[idx[i]];
    b[i] = d.b()[idx[i]];
  }
  return BivariateDataset(std::move(a), std::move(b));
}

namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r\n\"'");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n\"'");
  return s.substr(first, last - first + 1);
}

std::optional<double> parse_number(std::string_view token) {
  token = trim(token);
  if (token.empty()) return std::nullopt;
  if (token.front() == '+') token.remove_prefix(1);
  double value = 0.0;
  const auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), value);
  if (ec != std::errc{} || ptr != token.data() + token.size() || !std::isfinite(value)) {
    return std::nullopt;
  }
  return value;
}

std::vector<std::string_view> split_csv(std::string_view line) {
  std::vector<std::string_view> fields;
  std::size_t start = 0;
  while (true) {
    const auto comma = line.find(',', start);
    fields.push_back(line.substr(start, comma == std::string_view::npos ? comma : comma - start));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return fields;
}

}  // namespace

LoadedPair load_pair_file(const std::filesystem::path& path, const PairFileSpec& spec) {
  std::ifstream in(path);
  if (!in) throw IoError(fmt::format("cannot open '{}'", path.string()));

  std::vector<double> a, b;
  std::size_t skipped = 0;
  std::string line;

  if (spec.format == PairFormat::TwoColumnWhitespace) {
    while (std::getline(in, line)) {
      if (trim(line).empty()) continue;
      std::istringstream fields(line);
      std::string first, second;
      fields >> first >> second;
      const auto x = parse_number(first);
      const auto y = parse_number(second);
      if (x && y) {
        a.push_back(*x);
        b.push_back(*y);
      } else {
        ++skipped;
      }
    }
  } else {
    if (!std::getline(in, line)) throw FormatError(fmt::format("'{}' is empty", path.string()));
    const auto header = split_csv(line);
    auto column = [&](const std::string& name) {
      for (std::size_t i = 0; i < header.size(); ++i) {
        if (trim(header[i]) == name) return i;
      }
      throw FormatError(fmt::format("column '{}' not found in '{}'", name, path.string()));
    };
    const std::size_t ia = column(spec.column_a);
    const std::size_t ib = column(spec.column_b);
    while (std::getline(in, line)) {
      if (trim(line).empty()) continue;
      const auto fields = split_csv(line);
      std::optional<double> x, y;
      if (ia < fields.size()) x = parse_number(fields[ia]);
      if (ib < fields.size()) y = parse_number(fields[ib]);
      if (x && y) {
        a.push_back(*x);
        b.push_back(*y);
      } else {
        ++skipped;
      }
    }
  }
  if (in.bad()) throw IoError(fmt::format("read error on '{}'", path.string()));
  if (a.size() < 3) {
    throw FormatError(fmt::format("'{}' has {} valid rows, need at least 3", path.string(), a.size()));
  }
  return LoadedPair{BivariateDataset(std::move(a), std::move(b)), skipped};
}

void write_pair_file(const std::filesystem::path& path, const BivariateDataset& d) {
  std::ofstream out(path);
  if (!out) throw IoError(fmt::format("cannot write '{}'", path.string()));
  for (std::size_t i = 0; i < d.size(); ++i) {
    out << fmt::format("{:.17g} {:.17g}\n", d.a()[i], d.b()[i]);
  }
  if (!out) throw IoError(fmt::format("write error on '{}'", path.string()));
}

void write_csv_pair_file(const std::filesystem::path& path, const BivariateDataset& d,
                         std::string_view column_a, std::string_view column_b) {
  std::ofstream out(path);
  if (!out) throw IoError(fmt::format("cannot write '{}'", path.string()));
  out << column_a << ',' << column_b << '\n';
  for (std::size_t i = 0; i < d.size(); ++i) {
    out << fmt::format("{:.17g},{:.17g}\n", d.a()[i], d.b()[i]);
  }
  if (!out) throw IoError(fmt::format("write error on '{}'", path.string()));
}

}  // namespace confound
