"""Latent common cause detection for bivariate data."""

from __future__ import annotations

import json
from typing import Any, Iterable, Mapping, Sequence

from . import _confound
from ._confound import (
    ConfoundError,
    cme_norms,
    delta_statistic,
    igci_scores,
    isomap_embed,
    kcdc_scores,
    load_pair,
)

__all__ = [
    "ConfoundError",
    "cme_norms",
    "delta_statistic",
    "discover",
    "generate",
    "igci_scores",
    "isomap_embed",
    "kcdc_scores",
    "load_pair",
    "run_accuracy",
    "run_sensitivity",
]

ALGORITHMS = ("modKCDC", "modIGCI", "KCDC", "IGCI", "CAN")


def _config(config: Mapping[str, Any] | None) -> str:
    return json.dumps(config) if config else ""


def _floats(values: Iterable[float]) -> list[float]:
    return [float(v) for v in values]


def discover(a: Sequence[float], b: Sequence[float], algorithm: str = "modKCDC", seed: int = 0,
             config: Mapping[str, Any] | None = None) -> dict:
    """Run one algorithm and return its verdict record (verdict, detail, and deltas/mean/var for mod*)."""
    return json.loads(_confound.run_algorithm_json(_floats(a), _floats(b), algorithm, seed, _config(config)))


def generate(family: str, noise: str = "normal", n: int = 250, seed: int = 0,
             lam: float | None = None) -> dict:
    """Draw a labelled synthetic pair. Keys: a, b, truth, latent_t, rejected_rows."""
    spec = {"family": family, "noise": noise, "n": n, "seed": seed, "lambda": lam}
    return json.loads(_confound.generate_json(json.dumps(spec)))


def run_accuracy(family: str, algorithms: Sequence[str] = ("modKCDC", "modIGCI"), noise: str = "normal",
                 n_datasets: int = 100, n_samples: int = 250, seed: int = 0, lam: float | None = None,
                 swap_columns: bool = False, config: Mapping[str, Any] | None = None) -> dict:
    spec = {"family": family, "noise": noise, "n": n_samples, "lambda": lam}
    return json.loads(_confound.run_accuracy_json(json.dumps(spec), list(algorithms), n_datasets, seed,
                                                  swap_columns, _config(config)))


def run_sensitivity(lambdas: Sequence[float], noise: str = "normal", n_datasets: int = 100,
                    n_samples: int = 250, seed: int = 0, algorithm: str = "modIGCI",
                    config: Mapping[str, Any] | None = None) -> list[tuple[float, float, float]]:
    """(lambda, directed_accuracy, common_accuracy) per lambda."""
    return _confound.run_sensitivity(_floats(lambdas), noise, n_datasets, n_samples, seed, algorithm,
                                     _config(config))
