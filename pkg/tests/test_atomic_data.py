"""Slater-orbital data: format, validation, and the assembled densities."""

import io
import math
from importlib import resources

import numpy as np
import pytest

from tfshell.atomic_data import (
    NORM_TOLERANCE,
    STOAtomRecord,
    STODataError,
    STOOrbital,
    STOParseError,
    STOPrimitive,
    STOValidationError,
    atom_density,
    load_bundled,
    parse_sto_file,
    parse_sto_text,
    serialize_records,
)

MINIMAL = """\
# hydrogen-like helium with one primitive per orbital
ATOM He 2 4.0
ORB 1s 2
PRM 1 2.0 1.0
"""


# --- parsing ----------------------------------------------------------------


def test_parse_minimal_record() -> None:
    (rec,) = parse_sto_text(MINIMAL)
    assert rec.element == "He"
    assert rec.atomic_number == 2
    assert rec.reference_hf_kinetic == 4.0
    assert rec.electron_count == 2
    (orb,) = rec.orbitals
    assert (orb.label, orb.occupation) == ("1s", 2)
    assert orb.primitives == (STOPrimitive(1, 2.0, 1.0),)


def test_comments_and_blanks_ignored() -> None:
    noisy = "\n# leading comment\n\n" + MINIMAL.replace("ORB 1s 2", "ORB 1s 2  # full shell")
    assert parse_sto_text(noisy) == parse_sto_text(MINIMAL)


@pytest.mark.parametrize(
    "text,line_no,fragment",
    [
        ("WAT He 2 4.0", 1, "unknown directive"),
        ("ORB 1s 2", 1, "ORB before any ATOM"),
        ("ATOM He 2 4.0\nPRM 1 2.0 1.0", 2, "PRM before any ORB"),
        ("ATOM He 2", 1, "ATOM needs"),
        ("ATOM He 2 4.0\nORB 1s", 2, "ORB needs"),
        ("ATOM He 2 4.0\nORB 1s 2\nPRM 1 2.0", 3, "PRM needs"),
        ("ATOM He two 4.0", 1, "must be numeric"),
        ("ATOM He 2.5 4.0", 1, "must be an integer"),
        ("ATOM He 2 4.0\nORB s1 2", 2, "label"),
        ("ATOM He 2 4.0\nORB 1k 2", 2, "angular letter"),
        ("ATOM He 2 4.0\nORB 1s 2\nPRM 1 abc 1.0", 3, "must be numeric"),
    ],
)
def test_parse_errors_carry_line_numbers(text: str, line_no: int, fragment: str) -> None:
    with pytest.raises(STOParseError, match=fragment) as excinfo:
        parse_sto_text(text)
    assert excinfo.value.line_no == line_no
    assert f"line {line_no}:" in str(excinfo.value)


def test_empty_input_rejected() -> None:
    with pytest.raises(STODataError, match="no ATOM records"):
        parse_sto_text("# only a comment\n")


@pytest.mark.parametrize(
    "text,fragment",
    [
        (MINIMAL.replace("ORB 1s 2", "ORB 1s 3"), "occupation"),
        (MINIMAL.replace("PRM 1 2.0 1.0", "PRM 1 -2.0 1.0"), "exponent"),
        (MINIMAL.replace("ATOM He 2 4.0", "ATOM He 3 4.0"), "charge mismatch"),
        (MINIMAL.replace("PRM 1 2.0 1.0", "PRM 1 2.0 1.1"), "norm integral"),
        (MINIMAL.replace("ATOM He 2 4.0", "ATOM He 2 -4.0"), "must be positive"),
    ],
)
def test_validation_failures_surface_through_parse(text: str, fragment: str) -> None:
    with pytest.raises(STOValidationError, match=fragment):
        parse_sto_text(text)


def test_stream_and_path_agree(tmp_path) -> None:
    path = tmp_path / "one.sto"
    path.write_text(MINIMAL, encoding="utf-8")
    assert parse_sto_file(str(path)) == parse_sto_file(io.StringIO(MINIMAL))


# --- direct construction invariants ----------------------------------------


def test_primitive_normalization_closed_form() -> None:
    assert STOPrimitive(1, 1.0, 1.0).normalization == pytest.approx(2.0, rel=1e-15)
    p = STOPrimitive(2, 1.5, 0.3)
    assert p.normalization == pytest.approx(math.sqrt(3.0**5 / 24.0), rel=1e-15)


def test_primitive_validation() -> None:
    with pytest.raises(STOValidationError):
        STOPrimitive(0, 1.0, 1.0)
    with pytest.raises(STOValidationError):
        STOPrimitive(1, 0.0, 1.0)
    with pytest.raises(STOValidationError):
        STOPrimitive(1, math.inf, 1.0)
    with pytest.raises(STOValidationError):
        STOPrimitive(1, 1.0, math.nan)


def test_orbital_validation() -> None:
    prim = (STOPrimitive(1, 2.0, 1.0),)
    with pytest.raises(STOValidationError, match="below n"):
        STOOrbital(1, 1, 2, prim)
    with pytest.raises(STOValidationError, match="no primitives"):
        STOOrbital(1, 0, 2, ())
    with pytest.raises(STOValidationError, match="occupation"):
        STOOrbital(2, 1, 7, (STOPrimitive(2, 2.0, 1.0),))
    assert STOOrbital(2, 1, 6, (STOPrimitive(2, 2.0, 1.0),)).max_occupation == 6


def test_atom_record_validation() -> None:
    orb = STOOrbital(1, 0, 2, (STOPrimitive(1, 2.0, 1.0),))
    with pytest.raises(STOValidationError, match="alphabetic"):
        STOAtomRecord("X1", 2, (orb,), 4.0)
    with pytest.raises(STOValidationError, match="no orbitals"):
        STOAtomRecord("He", 2, (), 4.0)
    with pytest.raises(STOValidationError, match="charge mismatch"):
        STOAtomRecord("He", 4, (orb,), 4.0)
    with pytest.raises(STOValidationError, match="positive"):
        STOAtomRecord("He", 2, (orb,), 0.0)


def test_norm_integral_of_unit_primitive_is_exact() -> None:
    # the normalization constant is defined to make a lone primitive
    # unit-norm, so coefficient 1.0 must give exactly 1 up to rounding
    for n, zeta in [(1, 0.7), (2, 3.1), (3, 12.0)]:
        orb = STOOrbital(n, 0, 2, (STOPrimitive(n, zeta, 1.0),))
        assert orb.norm_integral() == pytest.approx(1.0, rel=1e-14)


# --- density assembly -------------------------------------------------------


def test_single_primitive_density_by_hand() -> None:
    (rec,) = parse_sto_text(MINIMAL)
    field = atom_density(rec)
    # rho = (occ / 4 pi) N^2 e^{-2 zeta r}; N^2 = (2 zeta)^3 / 2 = 32
    n_sq = (2.0 * 2.0) ** 3 / 2.0
    assert len(field.terms) == 1
    coef, power, exponent = field.terms[0]
    assert power == 0
    assert exponent == 4.0
    assert coef == pytest.approx(2.0 * n_sq / (4.0 * math.pi), rel=1e-14)
    r = 0.7
    assert field.value(r) == pytest.approx(
        2.0 * n_sq / (4.0 * math.pi) * math.exp(-4.0 * r), rel=1e-14
    )
    assert field.total_charge() == pytest.approx(2.0, rel=1e-13)


def test_density_matches_orbital_squares(bundled) -> None:
    # merged-term evaluation against the direct occupation-weighted sum of
    # squared radial orbitals
    r = np.geomspace(1e-4, 30.0, 200)
    for symbol in ("He", "Ne", "Ar"):
        rec = bundled[symbol]
        direct = np.zeros_like(r)
        for orb in rec.orbitals:
            direct += orb.occupation * orb.radial_value(r) ** 2
        direct /= 4.0 * math.pi
        np.testing.assert_allclose(atom_density(rec).value(r), direct, rtol=1e-12)


def test_bundled_charges_integrate_to_z(bundled) -> None:
    for rec in bundled.values():
        assert atom_density(rec).total_charge() == pytest.approx(
            float(rec.atomic_number), abs=1e-4
        )


def test_bundled_densities_nonnegative(bundled) -> None:
    r = np.geomspace(1e-6, 60.0, 10000)
    for rec in bundled.values():
        assert np.all(atom_density(rec).value(r) >= 0.0), rec.element


def test_helium_nuclear_cusp(bundled) -> None:
    rho = atom_density(bundled["He"])
    cusp = -rho.derivative(0.0) / (2.0 * rho.value(0.0))
    assert cusp == pytest.approx(2.0, rel=0.02)


# --- the bundle -------------------------------------------------------------


def test_bundle_contents(bundled) -> None:
    assert len(bundled) == 17
    for symbol in ("He", "Be", "Ne", "Mg", "Ar", "Kr", "Xe"):
        assert symbol in bundled
    zs = [rec.atomic_number for rec in bundled.values()]
    assert zs == sorted(zs)
    for rec in bundled.values():
        assert rec.electron_count == rec.atomic_number
        assert rec.reference_hf_kinetic > 0.0


def test_bundle_supports_open_shells(bundled) -> None:
    labels = {orb.label: orb.occupation for orb in bundled["N"].orbitals}
    assert labels == {"1s": 2, "2s": 2, "2p": 3}


def test_bundled_files_are_canonical() -> None:
    # parse -> serialize reproduces each file byte for byte
    root = resources.files("tfshell") / "data"
    checked = 0
    for entry in sorted(root.iterdir(), key=lambda e: e.name):
        if not entry.name.endswith(".sto"):
            continue
        text = entry.read_text(encoding="utf-8")
        assert serialize_records(parse_sto_text(text)) == text, entry.name
        checked += 1
    assert checked == 17


def test_serialize_round_trip_identity(bundled) -> None:
    text = serialize_records(bundled.values())
    reparsed = parse_sto_text(text)
    assert reparsed == list(bundled.values())
    assert serialize_records(reparsed) == text


def test_serialize_empty_rejected() -> None:
    with pytest.raises(STODataError, match="no records"):
        serialize_records([])


def test_load_bundled_filter() -> None:
    chosen = load_bundled(["ne", "He"])
    assert list(chosen) == ["Ne", "He"]
    assert chosen["Ne"].atomic_number == 10
    with pytest.raises(STODataError, match="no bundled data"):
        load_bundled(["Al"])


def test_norm_tolerance_is_needed_but_not_slack(bundled) -> None:
    # published coefficients are rounded to about five decimals; the worst
    # orbital norm misses unity by around 2e-5, so the gate must be looser
    # than that but still catch a typo-sized breach
    worst = max(
        abs(orb.norm_integral() - 1.0)
        for rec in bundled.values()
        for orb in rec.orbitals
    )
    assert 1e-5 < worst <= NORM_TOLERANCE
