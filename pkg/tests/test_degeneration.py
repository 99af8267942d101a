import pytest
import sympy

from nilgeo.degeneration import (DegenerationClaim, DegenerationGraph, TableError, export_dot,
                                 exceptional_locus, load_table, reachability_audit, transform, verify_claim,
                                 verify_projections, verify_table)
from nilgeo.field import as_rf
from nilgeo.linalg import Matrix
from oracles import brute_change_basis, brute_limit, to_sympy

from conftest import catalog, table_report

GENERATORS = {"ly4": ["L19", "L29", "L44"], "bol4": ["B06", "B10"], "comp3": ["L2"], "comp4": ["L10"]}
L44_TO_L01 = [["t", 0, 0, 0], [0, 1, 0, 0], [0, 0, "t", "t"], [0, 0, 0, 1]]


def claim(source, target, basis, index=None, **kw):
    return DegenerationClaim(source, target, Matrix.from_rows(basis),
                             {k: as_rf(v) for k, v in (index or {}).items()}, **kw)


# -- transform -------------------------------------------------------------------

def test_transform_of_first_table_row():
    l44 = catalog("ly4")["L44"].specialize({"alpha": 0})
    bil, tri = transform(l44, Matrix.from_rows(L44_TO_L01))
    assert bil.constants == {(1, 2, 3): as_rf(1), (2, 3, 4): as_rf("t")}
    assert tri.coefficient(1, 2, 1, 3) == as_rf("t")
    assert tri.coefficient(1, 2, 1, 4) == as_rf("-t^2")


def test_transform_agrees_with_brute_force_and_limits():
    l44 = catalog("ly4")["L44"].specialize({"alpha": 0})
    moved = transform(l44, Matrix.from_rows(L44_TO_L01))
    rows = [[to_sympy(as_rf(x)) for x in r] for r in L44_TO_L01]
    for op, new in zip(l44.ops, moved):
        for args, coords in brute_change_basis(op, rows).items():
            for l, c in enumerate(coords):
                got = to_sympy(new.coefficient(*(a + 1 for a in args), l + 1))
                assert sympy.simplify(got - c) == 0
                lim = new.coefficient(*(a + 1 for a in args), l + 1).limit_at_zero()
                assert sympy.simplify(to_sympy(lim) - brute_limit(c)) == 0


# -- single claims ------------------------------------------------------------------

def test_first_row_passes():
    rep = verify_claim(claim("L44", "L01", L44_TO_L01, {"alpha": 0}), catalog("ly4"))
    assert rep.passed, rep.reason
    assert [p["matches"] for p in rep.projections] == [True, True]


def test_index_substitution_row_keeps_target_parameter():
    (row,) = [c for c in load_table_rows("ly4") if c.key == "L44^(1/(t^2 - alpha))->L20"]
    rep = verify_claim(row, catalog("ly4"))
    assert rep.passed, rep.reason
    assert any("alpha" in v.indeterminates for op in rep.limits for v in op.constants.values())


def test_pole_is_reported_with_coordinate():
    bad = claim("L44", "L01", [["1/t", 0, 0, 0], [0, 1, 0, 0], [0, 0, 1, 0], [0, 0, 0, 1]], {"alpha": 0})
    rep = verify_claim(bad, catalog("ly4"))
    assert not rep.passed
    assert rep.poles and rep.poles[0]["valuation"] == -1
    assert rep.reason.startswith("pole: c[1,2]^")


def test_identity_claim():
    ident = [[1 if i == j else 0 for j in range(4)] for i in range(4)]
    assert verify_claim(claim("L29", "L29", ident), catalog("ly4")).passed


def test_wrong_target_gives_exact_diff():
    rep = verify_claim(claim("L44", "L02", L44_TO_L01, {"alpha": 0}), catalog("ly4"))
    assert not rep.passed and rep.diff
    assert {d["arity"] for d in rep.diff} == {2, 3}


def test_singular_and_mismatched_claims():
    ly4 = catalog("ly4")
    sing = [[1, 1, 0, 0], [1, 1, 0, 0], [0, 0, 1, 0], [0, 0, 0, 1]]
    assert verify_claim(claim("L01", "L01", sing), ly4).reason == "basis matrix is singular"
    assert "index keys" in verify_claim(claim("L01", "L01", L44_TO_L01, {"alpha": 1}), ly4).reason
    violated = verify_claim(claim("L46", "L01", L44_TO_L01, {"alpha": 0}), ly4)
    assert "violates L46 constraint" in violated.reason


def test_unknown_ids_raise():
    with pytest.raises(TableError):
        verify_table([claim("L99", "L01", L44_TO_L01)], catalog("ly4"))


@pytest.mark.parametrize("doc", ["[", '{"rows": [{"source": "L01"}]}', '{"rows": [{"source": "L01", "target": "L01", "basis": [["1", "0"], ["0", "1"], ["0", "0"]]}]}',
                                 '{"rows": [{"source": "L01", "target": "L01", "basis": [["1/0"]]}]}', '{"catalog": "x"}'])
def test_malformed_tables(doc):
    with pytest.raises(TableError):
        load_table(doc)


# -- shipped tables -----------------------------------------------------------------

def load_table_rows(name):
    return [r.claim for r in table_report(name).rows]


FROZEN_TABLES = {  # rows, passing as printed, failing keys
    "ly4": (49, 48, ["L29->L23"]),
    "bol4": (57, 56, ["L29->L23"]),
    "comp3": (1, 1, []),
    "comp4": (9, 8, ["L10^0->L04"]),
}


@pytest.mark.parametrize("name", sorted(FROZEN_TABLES))
def test_table_outcomes(name):
    rep = table_report(name)
    rows, passing, failing = FROZEN_TABLES[name]
    assert len(rep.rows) == rows
    assert len(rep.passed) == passing
    assert [r.key for r in rep.failed] == failing
    assert not rep.unresolved
    for r in rep.failed:
        assert r.correction is not None and r.correction.passed and r.correction.claim.note


def test_ly4_transcription_issue_is_a_pole():
    (row,) = table_report("ly4").failed
    assert row.poles[0]["coordinate"] == "c[1,2,2]^4"
    assert row.poles[0]["valuation"] == -1


def test_comp4_transcription_issue_is_a_diff():
    (row,) = table_report("comp4").failed
    assert row.diff == [{"arity": 2, "coordinate": "c[1,2]^4", "limit": "0", "expected": "1"}]


def test_comp3_row_with_inverse_index():
    (row,) = table_report("comp3").rows
    assert row.key == "L2^1/t->L1" and row.passed
    assert row.claim.basis == Matrix.diagonal(["t", 1, 1])


@pytest.mark.parametrize("name", sorted(FROZEN_TABLES))
def test_projections_verify_independently(name):
    for r in table_report(name).rows:
        e = r.effective
        assert all(p["matches"] for p in e.projections)
        assert all(p["passed"] for p in verify_projections(e.claim, catalog(name))), e.key


@pytest.mark.parametrize("name", sorted(FROZEN_TABLES))
def test_monotonicity(name):
    for r in table_report(name).rows:
        m = r.effective.monotonicity
        assert m["monotone"], r.key
        if all(not v.indeterminates for v in r.claim.index.values()):
            assert m["strict"], r.key


def test_exceptional_locus_of_constrained_rows():
    rows = {r.claim.target: r.claim for r in table_report("ly4").rows}
    assert exceptional_locus(rows["L47"], catalog("ly4")) == {
        "points": [{"assignment": {"alpha": "1"}, "status": "excluded by stated constraint"}], "opaque": []}
    assert exceptional_locus(rows["L46"], catalog("ly4")) == {
        "points": [{"assignment": {"alpha": "0"}, "status": "not a catalog member"}], "opaque": []}


# -- graph and reachability ------------------------------------------------------------

def test_empty_graph_dot():
    assert export_dot(DegenerationGraph([], [])) == "digraph degenerations {\n}\n"


def test_single_edge_dot():
    rep = verify_claim(claim("L44", "L01", L44_TO_L01, {"alpha": 0}), catalog("ly4"))
    dot = export_dot(DegenerationGraph(["L44", "L01"], [rep]))
    assert dot.count("->") == 1 and dot.count(";") == 3
    assert '"L44" -> "L01"' in dot


def test_full_graph_and_determinism():
    g = DegenerationGraph.from_report(catalog("ly4"), table_report("ly4"))
    assert len(g.nodes) == len(catalog("ly4")) == 52
    assert export_dot(g) == export_dot(DegenerationGraph.from_report(catalog("ly4"), table_report("ly4")))
    assert "(corrected)" in export_dot(g)
    printed_only = DegenerationGraph.from_report(catalog("ly4"), table_report("ly4"), use_corrections=False)
    assert len(printed_only.edges) == len(g.edges) - 1


FROZEN_CLOSURE = {
    "ly4": ["L22", "L23{alpha=0}", "L47{alpha=1}"],
    "bol4": ["L09", "L19{alpha=-1}", "L22", "L23{alpha=0}", "B07{alpha=0}", "B08{alpha=0}"],
    "comp3": [],
    "comp4": ["L09{beta=0}"],
}


@pytest.mark.parametrize("name", sorted(GENERATORS))
def test_reachability_from_component_generators(name):
    g = DegenerationGraph.from_report(catalog(name), table_report(name))
    audit = reachability_audit(g, catalog(name), GENERATORS[name])
    assert audit.complete and not audit.unreachable
    assert audit.by_closure == FROZEN_CLOSURE[name]
    assert not audit.unused_edges


def test_empty_generator_set_reaches_nothing():
    g = DegenerationGraph.from_report(catalog("ly4"), table_report("ly4"))
    audit = reachability_audit(g, catalog("ly4"), [])
    assert not audit.strict and not audit.by_closure
    assert len(audit.unreachable) == len(audit.targets)


def test_without_corrections_the_audit_shows_the_gap():
    g = DegenerationGraph.from_report(catalog("ly4"), table_report("ly4"), use_corrections=False)
    audit = reachability_audit(g, catalog("ly4"), GENERATORS["ly4"])
    assert audit.unreachable == ["L22", "L23", "L24", "L25", "L26"]


def test_parametric_exclusion_is_honoured():
    """An edge valid only for alpha != 1 does not reach the alpha = 1 member by itself."""
    ly4 = catalog("ly4")
    (row,) = [r for r in table_report("ly4").rows if r.key.endswith("->L47")]
    audit = reachability_audit(DegenerationGraph(list(ly4), [row]), ly4, ["L44"])
    assert "L47" in audit.strict
    assert "L47{alpha=1}" not in audit.strict
    assert audit.by_closure == ["L47{alpha=1}"]


def test_unknown_generator():
    g = DegenerationGraph([], [])
    with pytest.raises(TableError):
        reachability_audit(g, catalog("ly4"), ["X1"])
