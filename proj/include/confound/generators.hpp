#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "confound/data.hpp"
#include "confound/rng.hpp"

namespace confound {

enum class NoiseKind { Normal01, Uniform01, Exponential1 };

enum class Family {
  // B = f(A, n_B), A ~ N(0, 1)
  DirectedAdditive1,   // sin(10A) + e^{3A} + n
  DirectedAdditive2,   // A e^{A^2} + n
  DirectedMult3,       // (sin(10A) + e^{3A}) e^{n}
  DirectedMult4,       // (A^2 + A^5) e^{n}
  DirectedComplex5,    // A^5 - sin(A^2 |n|)
  DirectedComplex6,    // log(A + 10) + A^{8n}
  // A = f(T, n_A), B = g(T, n_B), T ~ N(0, 1)
  CommonAdd1,
  CommonAdd2,
  CommonMult3,
  CommonMult4,
  CommonMixed5,
  CommonMixed6,
  CommonComplex1,
  CommonComplex2,
  CommonGP3,
  CommonGP4,
  SensitivityDirected,
  SensitivityCommon,
};

std::string_view to_string(NoiseKind k) noexcept;
NoiseKind noise_from_string(std::string_view name);
std::string_view to_string(Family f) noexcept;
Family family_from_string(std::string_view name);
std::span<const Family> all_families() noexcept;

bool is_directed(Family f) noexcept;
bool is_sensitivity(Family f) noexcept;

double draw_noise(NoiseKind kind, Rng& rng) noexcept;

struct PeriodicParams {
  double period = 1.0;
  double lengthscale = 1.0;
};

struct GeneratorSpec {
  Family family = Family::DirectedAdditive1;
  NoiseKind noise = NoiseKind::Normal01;
  std::size_t n = 250;
  // Noise scale; required by the sensitivity families, rejected by the rest.
  std::optional<double> lambda;
  RngSeed seed = 0;
  PeriodicParams periodic;

  void validate() const;
};

struct LabeledDataset {
  BivariateDataset data;
  CausalVerdict truth;
  // Latent common cause for common-cause families.
  std::optional<std::vector<double>> latent_t;
  // Cause values for directed families; equals data.a().
  std::vector<double> cause;
  // Noise draws actually used per row; empty where a family has no such term.
  std::vector<double> noise_a;
  std::vector<double> noise_b;
  // Rows redrawn because a formula produced a non-finite value.
  std::size_t rejected_rows = 0;
};

/// Draws one dataset. Deterministic in spec.seed.
/// Throws NonFinite if rows keep overflowing after many redraws.
LabeledDataset generate(const GeneratorSpec& spec);

enum class GpKernel { PolyEven, PolyOdd, PolyEvenPlusPeriodic, PolyOddPlusPeriodic };

/// Gram matrix of the named kernel. PolyEven: s^2 t^2 + s^6 t^6. PolyOdd:
/// s^3 t^3 + s^5 t^5. Periodic: exp(-2 sin^2(pi |s - t| / p) / l^2).
Eigen::MatrixXd gp_gram(std::span<const double> t, GpKernel kernel, const PeriodicParams& periodic = {});

/// One zero-mean draw from the GP at `t`, with 1e-8 diagonal jitter.
/// Throws FactorizationFailure if the Gram matrix is not positive semidefinite.
std::vector<double> gp_sample(std::span<const double> t, GpKernel kernel, RngSeed seed,
                              const PeriodicParams& periodic = {});

}  // namespace confound
