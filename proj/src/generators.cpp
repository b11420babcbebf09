#include "confound/generators.hpp"

#include <array>
#include <cmath>
#include <numbers>
#include <utility>

#include <fmt/format.h>

#include "confound/errors.hpp"

namespace confound {

namespace {

constexpr std::array kFamilies{
    Family::DirectedAdditive1, Family::DirectedAdditive2, Family::DirectedMult3,
    Family::DirectedMult4,     Family::DirectedComplex5,  Family::DirectedComplex6,
    Family::CommonAdd1,        Family::CommonAdd2,        Family::CommonMult3,
    Family::CommonMult4,       Family::CommonMixed5,      Family::CommonMixed6,
    Family::CommonComplex1,    Family::CommonComplex2,    Family::CommonGP3,
    Family::CommonGP4,         Family::SensitivityDirected, Family::SensitivityCommon,
};

// Redraw budget per row before giving up on a family/noise combination.
constexpr std::size_t kMaxRedrawsPerRow = 10000;

double sin_exp(double x) { return std::sin(10.0 * x) + std::exp(3.0 * x); }
double log_sixth(double x) { return std::log(x + 10.0) + std::pow(x, 6); }
double even_poly(double x) { return x * x + std::pow(x, 6); }

struct Row {
  double a;
  double b;
};

Row directed_row(Family f, double a, double n, double lambda) {
  switch (f) {
    case Family::DirectedAdditive1: return {a, sin_exp(a) + n};
    case Family::DirectedAdditive2: return {a, a * std::exp(a * a) + n};
    case Family::DirectedMult3: return {a, sin_exp(a) * std::exp(n)};
    case Family::DirectedMult4: return {a, (a * a + std::pow(a, 5)) * std::exp(n)};
    case Family::DirectedComplex5: return {a, std::pow(a, 5) - std::sin(a * a * std::abs(n))};
    case Family::DirectedComplex6: return {a, std::log(a + 10.0) + std::pow(a, 8.0 * n)};
    case Family::SensitivityDirected: return {a, sin_exp(a) + lambda * std::exp(std::exp(n))};
    default: break;
  }
  throw InvalidArgument("not a directed family");
}

Row common_row(Family f, double t, double na, double nb, double lambda) {
  switch (f) {
    case Family::CommonAdd1: return {sin_exp(t) + na, log_sixth(t) + nb};
    case Family::CommonAdd2: return {log_sixth(t) + na, even_poly(t) + nb};
    case Family::CommonMult3: return {sin_exp(t) * std::exp(na), even_poly(t) * std::exp(nb)};
    case Family::CommonMult4: return {sin_exp(t) * std::exp(na), log_sixth(t) * std::exp(nb)};
    case Family::CommonMixed5: return {log_sixth(t) + na, even_poly(t) * std::exp(nb)};
    case Family::CommonMixed6: return {sin_exp(t) + na, even_poly(t) * std::exp(nb)};
    case Family::CommonComplex1:
      return {std::pow(t, 5) - std::sin(t * t * na),
              std::pow(std::log(std::pow(t, 4) + 10.0), 2.0 * nb)};
    case Family::CommonComplex2:
      return {t * std::sin(10.0 * t * std::abs(na)),
              std::log(t + 10.0) + std::pow(t, 2.0 * std::abs(nb))};
    case Family::SensitivityCommon:
      return {std::sin(3.0 * t) + lambda * std::exp(std::exp(na)),
              std::log(t + 10.0) + lambda * std::exp(std::exp(nb))};
    default: break;
  }
  throw InvalidArgument("not a per-row common-cause family");
}

bool finite(Row r) { return std::isfinite(r.a) && std::isfinite(r.b); }

}  // namespace

std::string_view to_string(NoiseKind k) noexcept {
  switch (k) {
    case NoiseKind::Normal01: return "normal";
    case NoiseKind::Uniform01: return "uniform";
    case NoiseKind::Exponential1: return "exponential";
  }
  return "normal";
}

NoiseKind noise_from_string(std::string_view name) {
  for (NoiseKind k : {NoiseKind::Normal01, NoiseKind::Uniform01, NoiseKind::Exponential1}) {
    if (to_string(k) == name) return k;
  }
  if (name == "Normal01") return NoiseKind::Normal01;
  if (name == "Uniform01") return NoiseKind::Uniform01;
  if (name == "Exponential1") return NoiseKind::Exponential1;
  throw InvalidArgument(fmt::format("unknown noise kind '{}'", name));
}

std::string_view to_string(Family f) noexcept {
  switch (f) {
    case Family::DirectedAdditive1: return "DirectedAdditive1";
    case Family::DirectedAdditive2: return "DirectedAdditive2";
    case Family::DirectedMult3: return "DirectedMult3";
    case Family::DirectedMult4: return "DirectedMult4";
    case Family::DirectedComplex5: return "DirectedComplex5";
    case Family::DirectedComplex6: return "DirectedComplex6";
    case Family::CommonAdd1: return "CommonAdd1";
    case Family::CommonAdd2: return "CommonAdd2";
    case Family::CommonMult3: return "CommonMult3";
    case Family::CommonMult4: return "CommonMult4";
    case Family::CommonMixed5: return "CommonMixed5";
    case Family::CommonMixed6: return "CommonMixed6";
    case Family::CommonComplex1: return "CommonComplex1";
    case Family::CommonComplex2: return "CommonComplex2";
    case Family::CommonGP3: return "CommonGP3";
    case Family::CommonGP4: return "CommonGP4";
    case Family::SensitivityDirected: return "SensitivityDirected";
    case Family::SensitivityCommon: return "SensitivityCommon";
  }
  return "";
}

Family family_from_string(std::string_view name) {
  for (Family f : kFamilies) {
    if (to_string(f) == name) return f;
  }
  throw InvalidArgument(fmt::format("unknown generator family '{}'", name));
}

std::span<const Family> all_families() noexcept { return kFamilies; }

bool is_directed(Family f) noexcept {
  switch (f) {
    case Family::DirectedAdditive1:
    case Family::DirectedAdditive2:
    case Family::DirectedMult3:
    case Family::DirectedMult4:
    case Family::DirectedComplex5:
    case Family::DirectedComplex6:
    case Family::SensitivityDirected:
      return true;
    default:
      return false;
  }
}

bool is_sensitivity(Family f) noexcept {
  return f == Family::SensitivityDirected || f == Family::SensitivityCommon;
}

double draw_noise(NoiseKind kind, Rng& rng) noexcept {
  switch (kind) {
    case NoiseKind::Normal01: return rng.normal();
    case NoiseKind::Uniform01: return rng.uniform();
    case NoiseKind::Exponential1: return rng.exponential();
  }
  return 0.0;
}

void GeneratorSpec::validate() const {
  if (n < 3) throw TooFewSamples(fmt::format("generator needs n >= 3, got {}", n));
  if (is_sensitivity(family)) {
    if (!lambda || !(*lambda >= 0.0)) {
      throw InvalidArgument(fmt::format("{} requires lambda >= 0", to_string(family)));
    }
  } else if (lambda) {
    throw InvalidArgument(fmt::format("{} does not take lambda", to_string(family)));
  }
  if (!(periodic.period > 0.0 && periodic.lengthscale > 0.0)) {
    throw InvalidArgument("periodic kernel parameters must be > 0");
  }
}

Eigen::MatrixXd gp_gram(std::span<const double> t, GpKernel kernel, const PeriodicParams& periodic) {
  const auto n = static_cast<Eigen::Index>(t.size());
  const bool even = kernel == GpKernel::PolyEven || kernel == GpKernel::PolyEvenPlusPeriodic;
  const bool with_periodic =
      kernel == GpKernel::PolyEvenPlusPeriodic || kernel == GpKernel::PolyOddPlusPeriodic;
  const double l2 = periodic.lengthscale * periodic.lengthscale;
  Eigen::MatrixXd k(n, n);
  for (Eigen::Index j = 0; j < n; ++j) {
    for (Eigen::Index i = j; i < n; ++i) {
      const double s = t[static_cast<std::size_t>(i)];
      const double u = t[static_cast<std::size_t>(j)];
      const double p = s * u;
      double v = even ? p * p + std::pow(p, 6) : std::pow(p, 3) + std::pow(p, 5);
      if (with_periodic) {
        const double sn = std::sin(std::numbers::pi * std::abs(s - u) / periodic.period);
        v += std::exp(-2.0 * sn * sn / l2);
      }
      k(i, j) = v;
      k(j, i) = v;
    }
  }
  return k;
}

std::vector<double> gp_sample(std::span<const double> t, GpKernel kernel, RngSeed seed,
                              const PeriodicParams& periodic) {
  if (t.size() < 2) throw InvalidArgument("GP sample needs at least 2 points");
  const auto n = static_cast<Eigen::Index>(t.size());
  Eigen::MatrixXd k = gp_gram(t, kernel, periodic);
  k.diagonal().array() += 1e-8;

  // Pivoted LDL^T tolerates the rank deficiency of the pure polynomial kernels.
  const Eigen::LDLT<Eigen::MatrixXd> ldlt(k);
  if (ldlt.info() != Eigen::Success) throw FactorizationFailure("GP Gram factorization failed");
  Eigen::VectorXd d = ldlt.vectorD();
  const double scale = std::max(1.0, d.cwiseAbs().maxCoeff());
  if (d.minCoeff() < -1e-8 * scale) {
    throw FactorizationFailure(fmt::format("GP Gram has negative pivot {}", d.minCoeff()));
  }

  Rng rng(seed);
  Eigen::VectorXd z(n);
  for (Eigen::Index i = 0; i < n; ++i) z(i) = rng.normal();
  Eigen::VectorXd y = d.cwiseMax(0.0).cwiseSqrt().cwiseProduct(z);
  y = ldlt.matrixL() * y;
  y = ldlt.transpositionsP().transpose() * y;
  if (!y.allFinite()) throw FactorizationFailure("GP draw is not finite");
  return {y.data(), y.data() + n};
}

LabeledDataset generate(const GeneratorSpec& spec) {
  spec.validate();
  const std::size_t n = spec.n;
  const double lambda = spec.lambda.value_or(0.0);
  Rng rng(spec.seed);
  std::size_t rejected = 0;

  std::vector<double> a(n), b(n), na, nb(n), latent;

  if (is_directed(spec.family)) {
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t attempt = 0;; ++attempt) {
        if (attempt == kMaxRedrawsPerRow) {
          throw NonFinite(fmt::format("{}: row {} stays non-finite", to_string(spec.family), i));
        }
        const double cause = rng.normal();
        const double noise = draw_noise(spec.noise, rng);
        const Row r = directed_row(spec.family, cause, noise, lambda);
        if (finite(r)) {
          a[i] = r.a;
          b[i] = r.b;
          nb[i] = noise;
          break;
        }
        ++rejected;
      }
    }
    LabeledDataset out{BivariateDataset(a, std::move(b)), {Verdict::AtoB, ""}, std::nullopt, a,
                       {}, std::move(nb), rejected};
    return out;
  }

  na.resize(n);
  latent.resize(n);
  if (spec.family == Family::CommonGP3 || spec.family == Family::CommonGP4) {
    for (std::size_t i = 0; i < n; ++i) {
      latent[i] = rng.normal();
      na[i] = draw_noise(spec.noise, rng);
      nb[i] = draw_noise(spec.noise, rng);
    }
    const bool same = spec.family == Family::CommonGP3;
    const auto f = gp_sample(latent, same ? GpKernel::PolyEvenPlusPeriodic : GpKernel::PolyEven,
                             derive_seed(spec.seed, 1), spec.periodic);
    const auto g = gp_sample(latent, same ? GpKernel::PolyEvenPlusPeriodic : GpKernel::PolyOddPlusPeriodic,
                             derive_seed(spec.seed, 2), spec.periodic);
    for (std::size_t i = 0; i < n; ++i) {
      a[i] = f[i] * std::exp(na[i]);
      b[i] = g[i] * std::exp(nb[i]);
      if (!std::isfinite(a[i]) || !std::isfinite(b[i])) {
        throw NonFinite(fmt::format("{}: row {} is non-finite", to_string(spec.family), i));
      }
    }
  } else {
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t attempt = 0;; ++attempt) {
        if (attempt == kMaxRedrawsPerRow) {
          throw NonFinite(fmt::format("{}: row {} stays non-finite", to_string(spec.family), i));
        }
        const double t = rng.normal();
        const double noise_a = draw_noise(spec.noise, rng);
        const double noise_b = draw_noise(spec.noise, rng);
        const Row r = common_row(spec.family, t, noise_a, noise_b, lambda);
        if (finite(r)) {
          a[i] = r.a;
          b[i] = r.b;
          latent[i] = t;
          na[i] = noise_a;
          nb[i] = noise_b;
          break;
        }
        ++rejected;
      }
    }
  }
  return LabeledDataset{BivariateDataset(std::move(a), std::move(b)),
                        {Verdict::CommonCause, ""},
                        std::move(latent),
                        {},
                        std::move(na),
                        std::move(nb),
                        rejected};
}

}  // namespace confound
