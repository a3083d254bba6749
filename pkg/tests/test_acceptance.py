"""Acceptance gate: one test per release criterion, with timing caps.

Each test records a one-line verdict through ``record_criterion`` before
asserting, so the terminal summary lists every criterion's outcome even
when one fails mid-run.

Criterion 3 is expected to fail in its current form: the extrapolated
Z^2 coefficient of the ladder's local-density energy reproducibly lands
near -0.6529, while the stated regression target is -0.625856 +- 1e-3.
The fitted value is stable under grid refinement, deeper extrapolation,
and exact high-precision arithmetic, so the test keeps the stated target
and stays red rather than moving the goalposts.
"""

from __future__ import annotations

import math
import time
from fractions import Fraction

import numpy as np
import pytest
import sympy as sp
from scipy import integrate, special

import conftest
from tfshell._kernels import _laguerre_array
from tfshell.asymptotics import (
    TURNING_POINT,
    model_energy_sequence,
    model_expansion,
    oscillation_amplitude,
    richardson_extrapolate,
    shell_oscillation_maxima,
    tf_limit_density,
)
from tfshell.correction import delta_t_exact, delta_t_interpolated
from tfshell.fields import RadialField
from tfshell.hydrogenic import (
    MAGIC_NUMBERS,
    ShellConfiguration,
    electron_count,
    model_density,
    model_kinetic_energy,
    model_kinetic_energy_continuous,
    radial_wavefunction,
    shell_count_for,
)
from tfshell.atomic_data import atom_density
from tfshell.kedf import fourth_order_energy, make_grid, tf_energy, weizsacker_energy


def record_criterion(number: int, label: str, ok: bool, detail: str) -> None:
    conftest.ACCEPTANCE_RESULTS.append((f"criterion {number} ({label})", ok, detail))


def test_criterion_1_model_ladder_energies():
    start = time.perf_counter()
    exact_ok = all(
        model_kinetic_energy(ShellConfiguration.closed_shell(n))
        == float(n * electron_count(n) ** 2)
        for n in range(1, 9)
    )
    continuous_dev = max(
        abs(model_kinetic_energy_continuous(float(z)) / (n * z * z) - 1.0)
        for n, z in enumerate(MAGIC_NUMBERS, start=1)
    )
    elapsed = time.perf_counter() - start
    ok = exact_ok and continuous_dev <= 1e-9 and elapsed < 1.0
    record_criterion(
        1,
        "model ladder energies",
        ok,
        f"closed shells exact through n_max=8, continuous dev {continuous_dev:.1e}, {elapsed:.2f}s",
    )
    assert exact_ok
    assert continuous_dev <= 1e-9
    assert elapsed < 1.0


# Nonzero series coefficients as printed alongside their exact surds.
PRINTED_EXPANSION = (
    (Fraction(7, 3), 1.144714),
    (Fraction(2), -0.5),
    (Fraction(5, 3), 0.072798),
    (Fraction(1, 3), -0.000098),
    (Fraction(-1, 3), 0.000006),
)


def test_criterion_2_expansion_coefficients():
    start = time.perf_counter()
    series = model_expansion(5)
    worst = max(abs(series.coefficient(p) - printed) for p, printed in PRINTED_EXPANSION)
    elapsed = time.perf_counter() - start
    ok = worst <= 1e-6 and elapsed < 1.0
    record_criterion(
        2,
        "expansion coefficients",
        ok,
        f"five printed values matched, worst |dev| {worst:.1e}, {elapsed:.2f}s",
    )
    assert worst <= 1e-6
    assert elapsed < 1.0


def test_criterion_3_extrapolated_ladder_coefficients():
    start = time.perf_counter()
    points = model_energy_sequence(range(2, 26), grid_points=3008)
    tf_fit = richardson_extrapolate(
        [(p.z, p.t_tf) for p in points],
        [Fraction(7, 3), Fraction(2), Fraction(5, 3)],
    )
    t2_lead = richardson_extrapolate([(p.z, p.t2) for p in points], [Fraction(7, 3)])[0]
    ratio_powers = [Fraction(-1, 3), Fraction(-2, 3)]
    t2_gamma = richardson_extrapolate(
        [(p.z, p.t2 / p.t_exact) for p in points], ratio_powers
    )[0]
    t4_gamma = richardson_extrapolate(
        [(p.z, p.t4 / p.t_exact) for p in points], ratio_powers
    )[0]
    elapsed = time.perf_counter() - start

    checks = [
        ("Z^{7/3} within 1e-5 of 1.144714", abs(tf_fit[0] - 1.144714) <= 1e-5),
        ("Z^2 within 1e-3 of -0.625856", abs(tf_fit[1] + 0.625856) <= 1e-3),
        ("Z^{5/3} within 1e-2 of 0.146878", abs(tf_fit[2] - 0.146878) <= 1e-2),
        ("T2 leading coefficient |a| < 1e-4", abs(t2_lead) < 1e-4),
        ("T2 fraction within 1e-3 of 0.10942", abs(t2_gamma - 0.10942) <= 1e-3),
        ("T4 fraction within 1e-3 of 0.015052", abs(t4_gamma - 0.015052) <= 1e-3),
        ("runtime under 300s", elapsed < 300.0),
    ]
    failing = [name for name, passed in checks if not passed]
    record_criterion(
        3,
        "extrapolated ladder coefficients",
        not failing,
        f"Z^2 fitted {tf_fit[1]:.6f} vs target -0.625856"
        + ("" if not failing else f"; failing: {', '.join(failing)}")
        + f", {elapsed:.1f}s",
    )
    assert not failing, (
        f"fitted coefficients (Z^{{7/3}} {tf_fit[0]:.7f}, Z^2 {tf_fit[1]:.6f}, "
        f"Z^{{5/3}} {tf_fit[2]:.5f}); failing checks: {failing}"
    )


# Printed error table for the closed-subshell atoms, kept as strings so
# each entry's own print precision is recoverable.
PRINTED_TABLE = {
    "He": ("-11", "0.59", "3.6", "0.95"),
    "Ne": ("-8.4", "-0.56", "0.95", "0.28"),
    "Ar": ("-7.0", "-0.49", "0.69", "0.36"),
    "Kr": ("-5.8", "-0.69", "0.18", "0.11"),
    "Xe": ("-5.2", "-0.68", "0.067", "0.073"),
}


def _printed_tolerance(entry: str) -> float:
    # 0.3 percentage points, widened to half an ulp of the printed value
    # for entries printed with no decimals
    decimals = len(entry.split(".")[1]) if "." in entry else 0
    return max(0.3, 0.5 * 10.0 ** (-decimals))


def _error_columns(record, grid) -> tuple[float, float, float, float]:
    field = atom_density(record)
    t_tf = tf_energy(field, grid)
    _, t2 = weizsacker_energy(field, grid)
    t4 = fourth_order_energy(field, grid)
    n_exact = shell_count_for(record.atomic_number)
    if n_exact is not None:
        delta = delta_t_exact(n_exact)
    else:
        delta = delta_t_interpolated(record.atomic_number)
    ref = record.reference_hf_kinetic
    return tuple(
        (approx - ref) / ref * 100.0
        for approx in (t_tf, t_tf + t2, t_tf + t2 + t4, t_tf + delta)
    )


def test_criterion_4_atom_table_reproduction(bundled):
    start = time.perf_counter()
    grid = make_grid("expmap", 2000, (0.0, 45.0))
    violations = []
    worst = 0.0
    for symbol, printed in PRINTED_TABLE.items():
        errors = _error_columns(bundled[symbol], grid)
        for column, (got, want) in enumerate(zip(errors, printed)):
            deviation = abs(got - float(want))
            worst = max(worst, deviation)
            if deviation > _printed_tolerance(want):
                violations.append(f"{symbol} column {column}: {got:.3f} vs printed {want}")
        if not errors[0] < 0.0:
            violations.append(f"{symbol}: local-density error must be negative")
        if not errors[3] > 0.0:
            violations.append(f"{symbol}: corrected error must be positive")
    # the two other spin-paired atoms in the bundle obey the same bounds
    for symbol in ("Be", "Mg"):
        errors = _error_columns(bundled[symbol], grid)
        if not errors[0] < 0.0 < errors[3]:
            violations.append(f"{symbol}: bound-direction signs violated")
    elapsed = time.perf_counter() - start
    ok = not violations and elapsed < 30.0
    record_criterion(
        4,
        "atom table reproduction",
        ok,
        f"worst |dev| {worst:.3f} pp over 5 atoms x 4 columns, {elapsed:.1f}s",
    )
    assert not violations, violations
    assert elapsed < 30.0


def test_criterion_5_improvement_factor(bundled):
    grid = make_grid("expmap", 2000, (0.0, 45.0))
    ratios = {}
    for symbol, record in bundled.items():
        errors = _error_columns(record, grid)
        ratios[symbol] = abs(errors[0]) / abs(errors[3])
    mean_all = sum(ratios.values()) / len(ratios)
    mean_closed = sum(ratios[s] for s in PRINTED_TABLE) / len(PRINTED_TABLE)
    ok = (
        mean_all >= 9.0
        and mean_closed >= 9.0
        and abs(ratios["He"] - 11.0) <= 0.3 * 11.0
        and abs(ratios["Xe"] - 72.0) <= 0.3 * 72.0
    )
    record_criterion(
        5,
        "improvement factor",
        ok,
        f"mean {mean_all:.1f} over all {len(ratios)} atoms "
        f"({mean_closed:.1f} over closed subshells), He {ratios['He']:.1f}, Xe {ratios['Xe']:.1f}",
    )
    assert mean_all >= 9.0
    assert mean_closed >= 9.0
    assert ratios["He"] == pytest.approx(11.0, rel=0.30)
    assert ratios["Xe"] == pytest.approx(72.0, rel=0.30)


def test_criterion_6_shell_oscillations():
    start = time.perf_counter()
    counts = {
        n: len(shell_oscillation_maxima(ShellConfiguration.closed_shell(n)))
        for n in (1, 2, 3, 5)
    }
    amp3 = oscillation_amplitude(ShellConfiguration.closed_shell(3))
    amp5 = oscillation_amplitude(ShellConfiguration.closed_shell(5))
    elapsed = time.perf_counter() - start
    ok = counts == {1: 1, 2: 2, 3: 3, 5: 5} and amp5 < amp3 and elapsed < 10.0
    record_criterion(
        6,
        "shell oscillation structure",
        ok,
        f"maxima {counts}, outer amplitude {amp3:.2e} -> {amp5:.2e}, {elapsed:.1f}s",
    )
    assert counts == {1: 1, 2: 2, 3: 3, 5: 5}
    assert amp5 < amp3
    assert elapsed < 10.0


def _symbolic_orbital_kinetic(z: float, n: int, l: int, grid) -> float:
    # independent route: differentiate the closed-form radial function
    # symbolically, then integrate (R'^2 r^2 + l(l+1) R^2) / 2 by quadrature
    r = sp.Symbol("r", positive=True)
    rho = 2 * z * r / n
    norm = sp.sqrt(
        (2 * z / sp.Integer(n)) ** 3
        * sp.factorial(n - l - 1)
        / (2 * n * sp.factorial(n + l))
    )
    radial = norm * rho**l * sp.exp(-rho / 2) * sp.assoc_laguerre(n - l - 1, 2 * l + 1, rho)
    radial_fn = sp.lambdify(r, radial, "numpy")
    deriv_fn = sp.lambdify(r, sp.diff(radial, r), "numpy")
    nodes = grid.nodes
    integrand = (
        deriv_fn(nodes) ** 2 * nodes**2 + l * (l + 1) * radial_fn(nodes) ** 2
    ) / 2.0
    return grid.integrate(integrand)


def test_criterion_7_property_suite():
    start = time.perf_counter()
    failures = []

    # polynomial kernel against the reference recurrence
    x = np.linspace(0.0, 30.0, 400)
    for k, alpha in ((0, 1.0), (1, 3.0), (4, 5.0), (9, 2.0)):
        ours = _laguerre_array(k, alpha, x)
        reference = special.genlaguerre(k, alpha)(x)
        if not np.allclose(ours, reference, rtol=1e-10, atol=1e-12):
            failures.append(f"laguerre k={k} alpha={alpha}")

    # orthonormality of the radial functions at a non-integer charge
    z = 7.3
    grid = make_grid("expmap", 2048, (0.0, 40.0))
    pairs = [(n, l) for n in range(1, 5) for l in range(n)]
    worst_overlap = 0.0
    for i, (n1, l1) in enumerate(pairs):
        r1 = radial_wavefunction(z, n1, l1, grid.nodes)
        for n2, l2 in pairs[i:]:
            if l1 != l2:
                continue
            r2 = radial_wavefunction(z, n2, l2, grid.nodes)
            overlap = grid.integrate(r1 * r2 * grid.nodes**2)
            expected = 1.0 if n1 == n2 else 0.0
            worst_overlap = max(worst_overlap, abs(overlap - expected))
    if worst_overlap > 1e-8:
        failures.append(f"orthonormality dev {worst_overlap:.1e}")

    # density normalization for a filled three-shell configuration
    density = model_density(ShellConfiguration(9.21, 3))
    charge = 4.0 * math.pi * grid.integrate(density.value(grid.nodes) * grid.nodes**2)
    norm_dev = abs(charge / electron_count(3) - 1.0)
    if norm_dev > 1e-8:
        failures.append(f"density normalization dev {norm_dev:.1e}")

    # summed orbital kinetic energies against the closed form
    z_sum, n_max = 28.0, 3
    kin_grid = make_grid("expmap", 2048, (0.0, (6.0 * n_max**2 + 40.0) / z_sum))
    total = sum(
        2 * (2 * l + 1) * _symbolic_orbital_kinetic(z_sum, n, l, kin_grid)
        for n in range(1, n_max + 1)
        for l in range(n)
    )
    kinetic_dev = abs(total / (n_max * z_sum**2) - 1.0)
    if kinetic_dev > 1e-7:
        failures.append(f"kinetic sum dev {kinetic_dev:.1e}")

    # uniform-dilation scaling of all three functionals
    field = RadialField([(2.0, 0, 1.5), (0.7, 2, 0.9)])
    lam = 1.7
    scaled = field.scaled(lam)
    base_grid = make_grid("expmap", 2000, (0.0, 60.0))
    scaled_grid = make_grid("expmap", 2000, (0.0, 60.0 / lam))
    base_tw, base_t2 = weizsacker_energy(field, base_grid)
    scaled_tw, scaled_t2 = weizsacker_energy(scaled, scaled_grid)
    scalings = (
        ("tf", tf_energy(scaled, scaled_grid), tf_energy(field, base_grid)),
        ("weizsacker", scaled_tw, base_tw),
        ("t2", scaled_t2, base_t2),
        ("t4", fourth_order_energy(scaled, scaled_grid), fourth_order_energy(field, base_grid)),
    )
    for name, scaled_value, base_value in scalings:
        dev = abs(scaled_value / (lam**2 * base_value) - 1.0)
        if dev > 1e-8:
            failures.append(f"{name} scaling dev {dev:.1e}")

    # one filled shell at z=2: gradient term is exact there
    one_shell = model_density(ShellConfiguration.closed_shell(1))
    tw_grid = make_grid("expmap", 2000, (0.0, 45.0))
    tw_value, _ = weizsacker_energy(one_shell, tw_grid)
    if abs(tw_value - 4.0) > 1e-6:
        failures.append(f"one-shell gradient energy {tw_value!r}")

    # limiting scaled density integrates to one electron's worth
    tf_norm, _ = integrate.quad(
        lambda x: 4.0 * math.pi * x * x * float(tf_limit_density(x)), 0.0, TURNING_POINT
    )
    if abs(tf_norm - 1.0) > 1e-6:
        failures.append(f"limit profile norm {tf_norm!r}")

    elapsed = time.perf_counter() - start
    ok = not failures and elapsed < 60.0
    record_criterion(
        7,
        "property suite",
        ok,
        "oracle battery clean" + ("" if not failures else f"; {failures}") + f", {elapsed:.1f}s",
    )
    assert not failures, failures
    assert elapsed < 60.0
