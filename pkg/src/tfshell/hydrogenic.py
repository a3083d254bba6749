"""Filled-shell densities of non-interacting electrons in a Coulomb field.

The solvable system: N electrons bound by a bare -Z/r potential with Z = N,
filling shells n = 1..n_max completely.  Shell filling gives the
closed-shell electron counts 2, 10, 28, 60, 110, ...; per-orbital energies
follow the Rydberg formula, so the total kinetic energy is exactly
n_max * Z^2.  The density is an analytic sum of squared radial
wavefunctions and is represented both ways:

* as an exponential-polynomial term list (built in exact rational
  arithmetic, so construction itself introduces no roundoff), and
* through a stable orbital-summation kernel used for evaluation, which is
  what keeps many-shell configurations accurate in double precision.

Shell counts above ``MAX_SHELLS`` are rejected: beyond that the rescaled
Laguerre recurrences leave the comfortably-exact range of double precision
and results would silently degrade.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property, lru_cache

import numpy as np

from . import _kernels
from .fields import RadialField
from .special import LaguerreSpec, laguerre, log_factorial

__all__ = [
    "MAX_SHELLS",
    "MAGIC_NUMBERS",
    "ShellConfiguration",
    "HydrogenicDensity",
    "electron_count",
    "shell_count_for",
    "model_kinetic_energy",
    "model_kinetic_energy_continuous",
    "radial_wavefunction",
    "model_density",
]

MAX_SHELLS = 40

# electron_count(n) for n = 1..5: the closed-shell counts
MAGIC_NUMBERS = (2, 10, 28, 60, 110)


def electron_count(n_max: int) -> int:
    """Electrons in shells 1..n_max filled completely: sum of 2 n^2."""
    if not isinstance(n_max, (int, np.integer)) or n_max < 1:
        raise ValueError(f"n_max must be a positive integer, got {n_max!r}")
    return int(n_max) * (n_max + 1) * (2 * n_max + 1) // 3


def shell_count_for(z: int) -> int | None:
    """Inverse of electron_count on the closed-shell sequence, else None."""
    n = 1
    while True:
        count = electron_count(n)
        if count == z:
            return n
        if count > z:
            return None
        n += 1


@dataclass(frozen=True)
class ShellConfiguration:
    """Nuclear charge plus the highest completely filled shell."""

    nuclear_charge: float
    n_max: int

    def __post_init__(self) -> None:
        if not self.nuclear_charge > 0:
            raise ValueError(f"nuclear charge must be positive, got {self.nuclear_charge!r}")
        if not isinstance(self.n_max, (int, np.integer)) or self.n_max < 1:
            raise ValueError(f"n_max must be a positive integer, got {self.n_max!r}")

    @property
    def electron_count(self) -> int:
        return electron_count(self.n_max)

    @classmethod
    def closed_shell(cls, n_max: int) -> "ShellConfiguration":
        """The neutral configuration with Z equal to the electron count."""
        return cls(float(electron_count(n_max)), n_max)


def model_kinetic_energy(cfg: ShellConfiguration) -> float:
    """Exact kinetic energy n_max * Z^2 (hartree)."""
    return cfg.n_max * cfg.nuclear_charge**2


def model_kinetic_energy_continuous(z: float) -> float:
    """Closed-form continuation of the kinetic energy to non-integer filling.

    Solving the cubic shell-filling relation for the (real) shell count and
    substituting back gives

        T(Z) = 1/2 (3^{-1/3} D^{-1} + 3^{-2/3} D - 1) Z^2,
        D = (54 Z + sqrt(2916 Z^2 - 3))^{1/3},

    which coincides with n_max * Z^2 whenever Z is a closed-shell count.
    """
    z = float(z)
    radicand = 2916.0 * z * z - 3.0
    if radicand < 0.0:
        raise ValueError(f"charge {z} below the domain of the closed form (2916 Z^2 >= 3)")
    d = (54.0 * z + math.sqrt(radicand)) ** (1.0 / 3.0)
    return 0.5 * (3.0 ** (-1.0 / 3.0) / d + 3.0 ** (-2.0 / 3.0) * d - 1.0) * z * z


def radial_wavefunction(z: float, n: int, l: int, r):
    """Bound-state radial function R_{n,l}(r) for charge z, unit-normalized.

    R_{n,l}(r) = sqrt((2Z/n)^3 (n-l-1)! / (2n (n+l)!))
                 * exp(-Zr/n) (2Zr/n)^l L_{n-l-1}^{2l+1}(2Zr/n)

    Accepts scalar or array r >= 0.
    """
    if not z > 0:
        raise ValueError(f"charge must be positive, got {z!r}")
    if not isinstance(n, (int, np.integer)) or n < 1:
        raise ValueError(f"principal quantum number must be a positive integer, got {n!r}")
    if n > MAX_SHELLS:
        raise ValueError(f"n = {n} beyond supported shell range {MAX_SHELLS}")
    if not isinstance(l, (int, np.integer)) or l < 0 or l >= n:
        raise ValueError(f"angular quantum number must satisfy 0 <= l <= n-1, got l={l!r}")
    arr = np.asarray(r, dtype=float)
    if np.any(arr < 0):
        raise ValueError("radius must be non-negative")
    g = 2.0 * z / n
    log_norm = 0.5 * (
        3.0 * math.log(g) + log_factorial(n - l - 1) - math.log(2.0 * n) - log_factorial(n + l)
    )
    x = g * arr
    with np.errstate(under="ignore"):
        out = (
            math.exp(log_norm)
            * np.exp(-0.5 * x)
            * x ** int(l)
            * laguerre(LaguerreSpec(n - l - 1, 2 * l + 1), x)
        )
    if np.isscalar(r) or arr.ndim == 0:
        return float(out)
    return out


@lru_cache(maxsize=64)
def _exact_shell_terms(z_num: int, z_den: int, n_max: int) -> tuple:
    """Exponential-polynomial terms of the filled-shell density, exact.

    Coefficients are accumulated as Fractions (the 1/(4 pi) factor is
    applied at float conversion), merged per shell since all orbitals of a
    shell share the decay 2Z/n.  Returns ((coef, power, exponent), ...).
    """
    z = Fraction(z_num, z_den)
    terms: list[tuple[float, int, float]] = []
    four_pi = 4.0 * math.pi
    for n in range(1, n_max + 1):
        g = 2 * z / n
        poly: dict[int, Fraction] = {}
        for l in range(n):
            k = n - l - 1
            # Laguerre coefficients of L_k^{2l+1}: a_i = (-1)^i C(k+a, k-i)/i!
            a = [
                Fraction((-1) ** i * math.comb(k + 2 * l + 1, k - i), math.factorial(i))
                for i in range(k + 1)
            ]
            # normalization^2 times occupation 2(2l+1)
            norm_sq = (
                g**3
                * Fraction(math.factorial(k), 2 * n * math.factorial(n + l))
                * 2
                * (2 * l + 1)
            )
            for j in range(2 * k + 1):
                b_j = sum(a[i] * a[j - i] for i in range(max(0, j - k), min(k, j) + 1))
                power = 2 * l + j
                poly[power] = poly.get(power, Fraction(0)) + norm_sq * b_j * g**power
        beta = float(g)
        for power in sorted(poly):
            coef = float(poly[power]) / four_pi
            if not math.isfinite(coef):
                raise OverflowError(
                    f"term coefficients overflow double precision at n_max={n_max}, Z={float(z)}"
                )
            terms.append((coef, power, beta))
    return tuple(terms)


class HydrogenicDensity(RadialField):
    """Filled-shell density with stable orbital-summation evaluation.

    The term list is exact but its evaluation cancels catastrophically for
    many shells, so ``value``/``derivative``/``second_derivative`` run the
    orbital-summation kernel instead; the terms stay available for
    closed-form moments and for cross-checks at small shell counts.
    """

    def __init__(self, cfg: ShellConfiguration) -> None:
        if cfg.n_max > MAX_SHELLS:
            raise ValueError(f"n_max = {cfg.n_max} beyond supported shell range {MAX_SHELLS}")
        self.configuration = cfg

    @cached_property
    def _terms(self) -> tuple:  # type: ignore[override]
        z = Fraction(self.configuration.nuclear_charge).limit_denominator(10**9)
        return _exact_shell_terms(z.numerator, z.denominator, self.configuration.n_max)

    @property
    def terms(self) -> tuple:
        return self._terms

    def _profile(self, r) -> tuple:
        arr = np.atleast_1d(np.asarray(r, dtype=float))
        if np.any(arr < 0):
            raise ValueError("radius must be non-negative")
        cfg = self.configuration
        return _kernels.shell_profile(float(cfg.nuclear_charge), int(cfg.n_max), arr)

    def value(self, r):
        out = self._profile(r)[0]
        return float(out[0]) if np.asarray(r).ndim == 0 else out

    def derivative(self, r):
        out = self._profile(r)[1]
        return float(out[0]) if np.asarray(r).ndim == 0 else out

    def second_derivative(self, r):
        out = self._profile(r)[2]
        return float(out[0]) if np.asarray(r).ndim == 0 else out

    def profile(self, r):
        rho, drho, d2rho = self._profile(r)
        if np.asarray(r).ndim == 0:
            return float(rho[0]), float(drho[0]), float(d2rho[0])
        return rho, drho, d2rho

    def total_charge(self) -> float:
        return float(self.configuration.electron_count)

    def suggested_r_max(self, tail_fraction: float = 1e-12) -> float:
        # outermost orbital decays as exp(-2 Z r / n_max) against a degree
        # ~2 n_max polynomial; 6 n_max^2 / Z sits far beyond the turning
        # point ~2 n_max^2 / Z, and the constant floor covers n_max = 1
        cfg = self.configuration
        return (6.0 * cfg.n_max**2 + 40.0) / cfg.nuclear_charge

    def __repr__(self) -> str:
        cfg = self.configuration
        return f"HydrogenicDensity(Z={cfg.nuclear_charge:g}, n_max={cfg.n_max})"


def model_density(cfg: ShellConfiguration) -> HydrogenicDensity:
    """Density of the filled-shell configuration as a RadialField."""
    return HydrogenicDensity(cfg)
