"""Shell correction to the Thomas-Fermi energy of Coulomb systems.

For a neutral system of filled hydrogen-like shells the total kinetic
energy is known in closed form, so the Thomas-Fermi deficit

    delta_T(Z) = T_shell(Z) - T_TF[rho_shell]

is computable exactly at the filling numbers Z = 2, 10, 28, 60, 110.
A cubic in Z through the first four of those points extends the deficit
to every integer Z in between; adding it back to a Thomas-Fermi energy
gives the corrected estimate T_TF + delta_T.

Two cubics are available: 'refit' (default) solves for the coefficients
from freshly computed node deltas at full precision, while 'published'
uses the five-decimal literature coefficients for comparison runs.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .hydrogenic import (
    MAGIC_NUMBERS,
    ShellConfiguration,
    model_density,
    model_kinetic_energy,
    shell_count_for,
)
from .kedf import make_grid, tf_energy

__all__ = [
    "INTERPOLATION_MAX_Z",
    "PUBLISHED_COEFFICIENTS",
    "CorrectionTable",
    "delta_t_exact",
    "delta_t_interpolated",
    "corrected_energy",
]

# cubic c0 + c1 Z + c2 Z^2 + c3 Z^3 through the deficits at Z = 2, 10, 28, 60
PUBLISHED_COEFFICIENTS = (0.21210, -0.19860, 0.12815, 0.00010)

_NODE_SHELLS = (1, 2, 3, 4)
INTERPOLATION_MAX_Z = 110
_EXACT_GRID_POINTS = 3008


@lru_cache(maxsize=None)
def delta_t_exact(n_max: int) -> float:
    """Exact Thomas-Fermi deficit of the closed-shell system with ``n_max`` shells.

    Evaluates T_shell - T_TF[rho_shell] for the neutral configuration
    (Z equal to the electron count), using a grid fine enough that the
    built-in refinement check passes.  Quadrature failures propagate.
    """
    if not isinstance(n_max, (int, np.integer)) or n_max < 1:
        raise ValueError(f"shell count must be a positive integer, got {n_max!r}")
    cfg = ShellConfiguration.closed_shell(int(n_max))
    rho = model_density(cfg)
    grid = make_grid(n_points=_EXACT_GRID_POINTS, r_span=(0.0, rho.suggested_r_max()))
    return model_kinetic_energy(cfg) - tf_energy(rho, grid)


def _as_atomic_number(z: int) -> int:
    if not isinstance(z, (int, np.integer)):
        raise ValueError(f"atomic number must be an integer, got {z!r}")
    return int(z)


@dataclass(frozen=True)
class CorrectionTable:
    """A cubic deficit interpolant together with its construction nodes."""

    nodes: tuple[tuple[int, float], ...]
    coefficients: tuple[float, float, float, float]
    mode: str

    def evaluate(self, z: float) -> float:
        c0, c1, c2, c3 = self.coefficients
        return c0 + z * (c1 + z * (c2 + z * c3))

    @classmethod
    def published(cls) -> "CorrectionTable":
        """The literature cubic; node deltas are its own values there."""
        zs = tuple(MAGIC_NUMBERS[n - 1] for n in _NODE_SHELLS)
        nodes = tuple((z, _horner(PUBLISHED_COEFFICIENTS, z)) for z in zs)
        return cls(nodes=nodes, coefficients=PUBLISHED_COEFFICIENTS, mode="published")

    @classmethod
    def refit(cls) -> "CorrectionTable":
        """Cubic through freshly computed exact deltas at the four nodes."""
        zs = tuple(MAGIC_NUMBERS[n - 1] for n in _NODE_SHELLS)
        deltas = tuple(delta_t_exact(n) for n in _NODE_SHELLS)
        vander = np.vander(np.asarray(zs, dtype=float), 4, increasing=True)
        coefs = np.linalg.solve(vander, np.asarray(deltas))
        return cls(
            nodes=tuple(zip(zs, deltas)),
            coefficients=tuple(float(c) for c in coefs),
            mode="refit",
        )


def _horner(coefficients: tuple[float, ...], z: float) -> float:
    c0, c1, c2, c3 = coefficients
    return c0 + z * (c1 + z * (c2 + z * c3))


@lru_cache(maxsize=None)
def _table(mode: str) -> CorrectionTable:
    if mode == "published":
        return CorrectionTable.published()
    if mode == "refit":
        return CorrectionTable.refit()
    raise ValueError(f"unknown interpolation mode {mode!r}; use 'published' or 'refit'")


def delta_t_interpolated(z: int, mode: str = "refit") -> float:
    """Cubic-interpolated deficit at integer atomic number ``z`` (1..110).

    Beyond the last construction node (Z = 60) this is an extrapolation;
    the command-line layer warns about it, the library does not.
    """
    z = _as_atomic_number(z)
    if not 1 <= z <= INTERPOLATION_MAX_Z:
        raise ValueError(f"atomic number out of range [1, {INTERPOLATION_MAX_Z}]: {z}")
    return _table(mode).evaluate(float(z))


def corrected_energy(t_tf: float, z: int, mode: str = "refit") -> float:
    """Corrected kinetic energy T_TF + delta_T for atomic number ``z``.

    The deficit is the exact node value when ``z`` is a shell-filling
    number (2, 10, 28, 60, 110) and the cubic value otherwise.
    """
    z = _as_atomic_number(z)
    n_max = shell_count_for(z)
    if n_max is not None:
        return t_tf + delta_t_exact(n_max)
    return t_tf + delta_t_interpolated(z, mode)
