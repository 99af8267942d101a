import random

import pytest
import sympy
from hypothesis import given, settings, strategies as st

from nilgeo.algebra import Kind, act, zero_algebra
from nilgeo.cli import DATA_DIR
from nilgeo.field import RationalFunction, as_rf
from nilgeo.linalg import Matrix
from nilgeo.nondegeneration import (LOWER, REFUTED, SUPPORTED, UPPER, CertificateError, ClosedSetCertificate,
                                    check_membership, coordinate_name, elementary, generic_triangular,
                                    load_certificate, load_certificate_file, orbit_probe, probe_generator,
                                    random_triangular, stability_probe, support_certificate, triangular_generators,
                                    verify_certificate)

from conftest import catalog, certificate_verdict

R = load_certificate_file(DATA_DIR / "bol4_R.json")
R_SUPPORT = load_certificate_file(DATA_DIR / "bol4_R_support.json")


def test_literal_certificate_contents():
    assert R.vanishing == ((3, (1, 2, 1, 3)), (3, (2, 3, 2, 4)))
    assert R.labels() == ["c121_3", "c232_4"]
    assert R.triangularity == LOWER


@pytest.mark.parametrize("raw", [
    '{"source": "B06", "target": "B10", "vanishing": []}',
    '{"source": "B06", "target": "B10", "vanishing": [{"arity": 3, "index": [2, 1, 1, 3]}]}',
    '{"source": "B06", "target": "B10", "vanishing": [{"arity": 2, "index": [1, 2, 1, 3]}]}',
    '{"source": "B06", "target": "B10", "triangularity": "middle", "vanishing": [{"arity": 2, "index": [1, 2, 3]}]}',
    '{"source": "B06", "vanishing": [{"arity": 2, "index": [1, 2, 3]}]}',
])
def test_malformed_certificates(raw):
    with pytest.raises(CertificateError):
        load_certificate(raw)


def test_membership():
    bol4 = catalog("bol4")
    assert check_membership(bol4["B06"], R)
    assert not check_membership(bol4["B10"], R)
    assert check_membership(zero_algebra(Kind.BOL, 4), R)
    assert check_membership(bol4["B06"], R_SUPPORT)
    assert not check_membership(bol4["B10"], R_SUPPORT)


def test_diagonal_generator_scales_each_coordinate():
    (name, diag), *_ = triangular_generators(4, LOWER)
    v = probe_generator(R, Kind.BOL, diag, name)
    assert v.stable
    assert v.transformed == {"c121_3": "c121_3*d3/(d1^2*d2)", "c232_4": "c232_4*d4/(d2^2*d3)"}


def test_first_lower_generator_leaves_a_residual():
    g = elementary(4, 2, 1, RationalFunction.var("s"))
    v = probe_generator(R, Kind.BOL, g, "e1 -> e1+s*e2")
    assert not v.stable
    assert v.residuals == {"c121_3": "-c122_3*s"}


def test_zero_shift_is_stable():
    assert probe_generator(R, Kind.BOL, elementary(4, 2, 1, as_rf(0))).stable


def test_generator_sets():
    assert len(triangular_generators(4, LOWER)) == len(triangular_generators(4, UPPER)) == 7
    assert elementary(3, 2, 1, as_rf(5)) == Matrix.from_rows([[1, 0, 0], [5, 1, 0], [0, 0, 1]])


@settings(max_examples=200, deadline=None)
@given(st.integers(1, 3), st.integers(2, 4), st.integers(1, 4))
def test_single_coordinate_diagonal_stability(arity_pick, i, l):
    """Under the torus every coordinate is rescaled by a nonzero monomial."""
    arity = 2 if arity_pick == 1 else 3
    idx = (1, i) + ((l,) if arity == 3 else ()) + (l,)
    cert = ClosedSetCertificate("B06", "B10", ((arity, idx),))
    name, diag = triangular_generators(4, LOWER)[0]
    assert probe_generator(cert, Kind.BOL, diag, name).stable


def test_support_certificate_is_stable_everywhere():
    rep = stability_probe(R_SUPPORT, Kind.BOL)
    assert rep.all_stable and not rep.inconclusive
    assert support_certificate(catalog("bol4")["B06"], "B10") == R_SUPPORT
    assert {(3, (1, 2, 1, 3)), (3, (2, 3, 2, 4))} <= set(R_SUPPORT.vanishing)


def test_literal_certificate_is_inconclusive_symbolically():
    rep = stability_probe(R, Kind.BOL)
    assert rep.inconclusive == [name for name, _ in triangular_generators(4, LOWER)[1:]]


def test_upper_reading_loses_retention():
    upper = ClosedSetCertificate("B06", "B10", R.vanishing, UPPER)
    ev = orbit_probe(catalog("bol4")["B06"], catalog("bol4")["B10"], upper, 200, 42)
    assert ev.retained < 200


def test_probe_counts_are_exact_and_seeded():
    bol4 = catalog("bol4")
    a = orbit_probe(bol4["B06"], bol4["B10"], R, 50, 7)
    b = orbit_probe(bol4["B06"], bol4["B10"], R, 50, 7)
    assert a == b
    assert a.retained == 50
    with pytest.raises(CertificateError):
        orbit_probe(bol4["B06"], bol4["B10"], R, 0, 7)


def test_target_already_in_locus_is_always_hit():
    bol4 = catalog("bol4")
    cert = ClosedSetCertificate("B06", "B06", ((3, (1, 2, 1, 3)),))
    ev = orbit_probe(bol4["B06"], bol4["B06"], cert, 20, 1)
    assert ev.retained == 20  # probing the source itself


def test_triangular_samples_are_triangular_and_invertible():
    rng = random.Random(3)
    for _ in range(50):
        g = random_triangular(rng, 4, LOWER)
        assert all(not g[i, j] for i in range(4) for j in range(i + 1, 4))
        assert all(g[i, i] for i in range(4))


def test_literal_certificate_verdict():
    v = certificate_verdict("bol4_R")
    assert v.source_member and not v.target_member
    assert v.evidence.retained == 1000
    assert v.evidence.hits == 1
    assert v.verdict == REFUTED


def test_literal_counterexample_is_genuine():
    """The recorded witness puts a copy of B10 inside the literal zero locus (checked with sympy)."""
    (hit,) = certificate_verdict("bol4_R").evidence.hit_witnesses
    g = Matrix.from_rows(hit["g"])
    moved = act(g, catalog("bol4")["B10"].ops)
    assert not moved[1].coefficient(1, 2, 1, 3) and not moved[1].coefficient(2, 3, 2, 4)
    G = sympy.Matrix([[sympy.Rational(x) for x in row] for row in hit["g"]])
    assert G.det() != 0
    assert hit["g"] == [["0", "2/3", "1", "-3"], ["-1", "5", "5/3", "5"], ["0", "-1/2", "1/3", "0"],
                        ["5", "-1/2", "0", "0"]]


def test_support_certificate_verdict():
    v = certificate_verdict("bol4_R_support")
    assert v.verdict == SUPPORTED
    assert (v.evidence.retained, v.evidence.hits) == (1000, 0)
    assert v.image_dims == {"B06": [2, 1], "B10": [2, 2]}


def test_wrong_certificate_is_refuted():
    cert = ClosedSetCertificate("B06", "B10", ((2, (1, 2, 3)),))
    v = verify_certificate(cert, catalog("bol4"), probes=10)
    assert v.verdict == REFUTED and not v.source_member
    assert "c12_3" in v.reasons[0]


def test_same_structure_on_both_sides_is_refuted():
    cert = ClosedSetCertificate("B06", "B06", R.vanishing)
    v = verify_certificate(cert, catalog("bol4"), probes=10)
    assert v.verdict == REFUTED  # a certificate cannot separate an entry from itself


def test_bad_inputs():
    with pytest.raises(CertificateError):
        verify_certificate(R, catalog("bol4"), probes=0)
    with pytest.raises(CertificateError):
        verify_certificate(ClosedSetCertificate("B99", "B10", R.vanishing), catalog("bol4"))


def test_coordinate_names():
    assert coordinate_name(2, (1, 2, 3)) == "c12_3"
    assert coordinate_name(3, (2, 3, 2, 4)) == "c232_4"
    d1, d2, s21 = (RationalFunction.var(n) for n in ("d1", "d2", "s21"))
    assert generic_triangular(2, LOWER) == Matrix.from_rows([[d1, 0], [s21, d2]])
