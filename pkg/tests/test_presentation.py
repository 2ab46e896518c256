import pytest

from abelslab.abels import contracting_family, subgroup_by_name, unipotent_and_torus
from abelslab.config import BudgetExceeded
from abelslab.matrices import Matrix
from abelslab.presentation import (
    CayleyPresentation,
    ColimitDiagram,
    CosetTable,
    Presentation,
    PresentationError,
    check_missing_relations,
    colimit_presentation,
    commutator_word,
    evaluate_word,
    family_diagram,
    free_reduce,
    inverse_word,
    parse_presentation,
    positions_presentation,
    power_word,
    regular_representation_presentation,
    serialize_presentation,
    tietze_reduce,
    tits_criterion_check,
    todd_coxeter,
    un_canonical_presentation,
    un_economic_presentation,
    von_dyck_check,
)
from abelslab.rings import additive_presentation, make_ring

Z2 = make_ring("zmod:2")
Z3 = make_ring("zmod:3")
Z4 = make_ring("zmod:4")
F4Q = make_ring("polyq:2:0,0,1")

P_Z2 = additive_presentation(Z2)
P_Z3 = additive_presentation(Z3)
P_Z4 = additive_presentation(Z4)
P_F4Q = additive_presentation(F4Q)

S3 = Presentation(("a", "b"), ((1, 1, 1), (2, 2), (1, 2, 1, 2)))


def unitriangular_order(n, ring):
    return ring.order() ** (n * (n - 1) // 2)


# -- words ------------------------------------------------------------------


def test_free_reduce():
    assert free_reduce((1, -1, 2)) == (2,)
    assert free_reduce((1, 2, -2, -1)) == ()
    assert free_reduce(()) == ()
    assert free_reduce((1, 1, -2)) == (1, 1, -2)


def test_inverse_word():
    assert inverse_word((1, -2, 3)) == (-3, 2, -1)
    assert free_reduce((1, -2) + inverse_word((1, -2))) == ()


def test_commutator_word():
    assert commutator_word((1,), (2,)) == (1, 2, -1, -2)
    assert commutator_word((1,), (1,)) == ()


def test_power_word():
    assert power_word((1, 2), 2) == (1, 2, 1, 2)
    assert power_word((1,), -3) == (-1, -1, -1)
    assert power_word((1, 2), 0) == ()


# -- presentation container --------------------------------------------------


def test_presentation_validation():
    with pytest.raises(PresentationError):
        Presentation(("a", "a"), ())
    with pytest.raises(PresentationError):
        Presentation(("A",), ())
    with pytest.raises(PresentationError):
        Presentation(("12",), ())
    with pytest.raises(PresentationError):
        Presentation(("a",), ((2,),))


def test_presentation_reduces_relators():
    p = Presentation(("a", "b"), ((1, -1), (1, 2, -2, 2)))
    assert p.relators == ((1, 2),)


def test_word_text_roundtrip():
    w = (1, -2, 1)
    text = S3.word_to_text(w)
    assert text == "a B a"
    assert S3.text_to_word(text) == w
    with pytest.raises(PresentationError):
        S3.text_to_word("a c")


def test_serialize_parse_roundtrip():
    eco = un_economic_presentation(4, P_Z2)
    text = serialize_presentation(eco)
    lines = text.splitlines()
    assert lines[0] == "e12t0 e13t0 e23t0 e24t0 e34t0"
    assert lines[1] == "e12t0 e13t0 E12T0 E13T0"
    back = parse_presentation(text)
    assert back.generators == eco.generators
    assert back.relators == eco.relators
    with pytest.raises(PresentationError):
        parse_presentation("")


# -- triangular presentations -------------------------------------------------


def test_canonical_shape():
    can = un_canonical_presentation(4, P_Z2)
    assert can.generators == (
        "e12t0",
        "e13t0",
        "e14t0",
        "e23t0",
        "e24t0",
        "e34t0",
    )
    assert len(can.relators) == 32


def test_economic_shape():
    eco = un_economic_presentation(4, P_Z2)
    assert "e14t0" not in eco.generators
    assert len(eco.generators) == 5
    assert len(eco.relators) == 17
    eco5 = un_economic_presentation(5, P_Z2)
    can5 = un_canonical_presentation(5, P_Z2)
    assert len(eco5.generators) == 9 and len(eco5.relators) == 57
    assert len(can5.generators) == 10 and len(can5.relators) == 90


def test_single_position_is_additive_only():
    p = positions_presentation([(1, 2)], P_Z4)
    assert p.generators == ("e12t0",)
    assert p.relators == ((1, 1, 1, 1),)
    assert todd_coxeter(p).count == 4


def test_window_must_be_chain_closed():
    with pytest.raises(PresentationError):
        positions_presentation([(1, 2), (2, 3)], P_Z2)
    with pytest.raises(PresentationError):
        positions_presentation([(2, 1)], P_Z2)


def test_size_guards():
    with pytest.raises(PresentationError):
        un_canonical_presentation(1, P_Z2)
    with pytest.raises(PresentationError):
        un_economic_presentation(3, P_Z2)


# -- coset enumeration --------------------------------------------------------


def test_cyclic_group():
    t = todd_coxeter(Presentation(("a",), ((1,) * 5,)))
    assert t.status == "complete"
    assert t.count == 5
    perm = t.action(1)
    assert sorted(perm) == list(range(5))
    # single 5-cycle through every coset
    seen, a = [0], perm[0]
    while a != 0:
        seen.append(a)
        a = perm[a]
    assert len(seen) == 5


def test_symmetric_group_enumeration():
    t = todd_coxeter(S3)
    assert (t.count, t.status) == (6, "complete")
    assert t.is_transitive()
    assert t.trace(0, (1, 1, 1)) == 0
    assert t.trace(0, (2, 2)) == 0
    assert todd_coxeter(S3, ((1,),)).count == 2
    assert todd_coxeter(S3, ((2,),)).count == 3


def test_enumeration_overflow():
    infinite_dihedral = Presentation(("a", "b"), ((1, 1), (2, 2)))
    t = todd_coxeter(infinite_dihedral, (), budget=64)
    assert t.status == "overflow"


def test_budget_guard():
    with pytest.raises(PresentationError):
        todd_coxeter(S3, (), budget=0)


def test_incomplete_table_guards():
    partial = CosetTable(1, [[1, -1], [-1, 0]], "overflow")
    assert partial.trace(0, (1, 1)) == -1
    with pytest.raises(PresentationError):
        partial.action(1)


@pytest.mark.parametrize(
    "n,ringpres,ring",
    [
        (2, P_Z4, Z4),
        (3, P_Z2, Z2),
        (3, P_F4Q, F4Q),
        (4, P_Z2, Z2),
        (4, P_Z3, Z3),
        (5, P_Z2, Z2),
    ],
)
def test_canonical_index(n, ringpres, ring):
    t = todd_coxeter(un_canonical_presentation(n, ringpres))
    assert t.status == "complete"
    assert t.count == unitriangular_order(n, ring)


@pytest.mark.parametrize(
    "n,ringpres,ring",
    [(4, P_Z2, Z2), (4, P_Z3, Z3), (5, P_Z2, Z2)],
)
def test_economic_index(n, ringpres, ring):
    t = todd_coxeter(un_economic_presentation(n, ringpres))
    assert t.status == "complete"
    assert t.count == unitriangular_order(n, ring)


def test_enumeration_is_deterministic():
    a = todd_coxeter(un_canonical_presentation(4, P_Z3))
    b = todd_coxeter(un_canonical_presentation(4, P_Z3))
    assert a.rows == b.rows
    assert a.status == b.status


def test_tietze_reduce():
    p = Presentation(("a", "b", "c"), ((2,), (1, 3)))
    r = tietze_reduce(p)
    assert r.generators == ("a",)
    assert r.relators == ()
    # group-preserving on a nontrivial example
    assert todd_coxeter(tietze_reduce(S3)).count == todd_coxeter(S3).count


# -- matrix-side checks --------------------------------------------------------


def elementary_assignment(pres, n, ring):
    T = additive_presentation(ring).generators
    out = {}
    for name in pres.generators:
        i, rest = int(name[1]), name[2:]
        j, t = int(rest[0]), int(rest.split("t")[1])
        out[name] = Matrix.elementary(ring, n, i, j, T[t])
    return out


def test_von_dyck_canonical():
    can = un_canonical_presentation(4, P_Z3)
    assert von_dyck_check(can, elementary_assignment(can, 4, Z3))


def test_von_dyck_economic():
    eco = un_economic_presentation(4, P_Z3)
    assert von_dyck_check(eco, elementary_assignment(eco, 4, Z3))


def test_von_dyck_detects_bad_images():
    can = un_canonical_presentation(4, P_Z2)
    images = elementary_assignment(can, 4, Z2)
    images["e12t0"], images["e13t0"] = images["e13t0"], images["e12t0"]
    assert not von_dyck_check(can, images)


def test_von_dyck_argument_errors():
    can = un_canonical_presentation(3, P_Z2)
    images = elementary_assignment(can, 3, Z2)
    with pytest.raises(PresentationError):
        von_dyck_check(can, {k: images[k] for k in list(images)[:-1]})
    bad = dict(images)
    bad["e12t0"] = Matrix.from_rows(Z2, [[Z2.zero] * 3] * 3)
    with pytest.raises(PresentationError):
        von_dyck_check(can, bad)
    mixed = dict(images)
    mixed["e12t0"] = Matrix.identity(Z2, 4)
    with pytest.raises(PresentationError):
        von_dyck_check(can, mixed)


def test_evaluate_word():
    e12 = Matrix.elementary(Z3, 3, 1, 2, Z3.one)
    e23 = Matrix.elementary(Z3, 3, 2, 3, Z3.one)
    e13 = Matrix.elementary(Z3, 3, 1, 3, Z3.one)
    assert evaluate_word((1, 2, -1, -2), [e12, e23], Z3, 3) == e13


@pytest.mark.parametrize("n,ring", [(4, Z3), (5, Z2)])
def test_missing_relation_sweep(n, ring):
    rep = check_missing_relations(n, ring)
    assert rep.ok
    assert {c.id for c in rep.checks} == {
        "corner-definition",
        "disjoint-row-column",
        "chain-through-column",
        "corner-central",
        "corner-additive",
    }
    assert all(c.status == "pass" for c in rep.checks)


# -- cayley presentations ------------------------------------------------------


def s3_matrices():
    def perm(imgs):
        rows = [[Z2.zero] * 3 for _ in range(3)]
        for src, dst in enumerate(imgs):
            rows[src][dst] = Z2.one
        return Matrix.from_rows(Z2, rows)

    return perm((1, 0, 2)), perm((0, 2, 1))


def test_regular_representation_presentation():
    a, b = s3_matrices()
    cay = regular_representation_presentation([a, b], names=("a", "b"))
    assert isinstance(cay, CayleyPresentation)
    assert cay.order == 6
    assert todd_coxeter(cay.presentation).count == 6
    for mat, word in cay.words.items():
        assert evaluate_word(word, [a, b], Z2, 3) == mat
    assert cay.words[Matrix.identity(Z2, 3)] == ()


def test_regular_representation_budget():
    a, b = s3_matrices()
    with pytest.raises(BudgetExceeded):
        regular_representation_presentation([a, b], budget=3)


# -- colimits -------------------------------------------------------------------


def test_colimit_free_product_overflows():
    c2 = Presentation(("x",), ((1, 1),))
    diagram = ColimitDiagram((("u", c2), ("v", c2)), ())
    colim = colimit_presentation(diagram)
    assert colim.generators == ("u.x", "v.x")
    assert todd_coxeter(colim, (), budget=100).status == "overflow"


def test_colimit_diagram_validation():
    c2 = Presentation(("x",), ((1, 1),))
    with pytest.raises(PresentationError):
        ColimitDiagram((("u", c2),), ((0, 1, c2, ((1,),), ((1,),)),))
    with pytest.raises(PresentationError):
        ColimitDiagram(
            (("u", c2), ("v", c2)), ((0, 1, c2, (), ((1,),)),)
        )


def test_colimit_rejects_non_homomorphic_edge():
    c2 = Presentation(("x",), ((1, 1),))
    c3 = Presentation(("y",), ((1, 1, 1),))
    edge = (0, 1, c2, ((1,),), ((1,),))
    diagram = ColimitDiagram((("u", c2), ("v", c3)), (edge,))
    with pytest.raises(PresentationError):
        colimit_presentation(diagram, validate=True)


@pytest.mark.parametrize(
    "n,ring,expected",
    [(4, Z2, 64), (4, Z3, 729), (5, Z2, 1024)],
)
def test_family_colimit_recovers_unitriangular_group(n, ring, expected):
    diagram = family_diagram(contracting_family(n, ring))
    colim = colimit_presentation(diagram)
    t = todd_coxeter(colim)
    assert t.status == "complete"
    assert t.count == expected


def test_family_diagram_generic_route():
    a, b = s3_matrices()
    diagram = family_diagram(([a], [b]))
    colim = colimit_presentation(diagram)
    # trivial intersections identify nothing: a free product, hence infinite
    assert todd_coxeter(colim, (), budget=100).status == "overflow"


# -- nerve criterion -------------------------------------------------------------


def test_tits_positive_instance():
    group = unipotent_and_torus(4, Z2)[0]
    rep = tits_criterion_check(group, contracting_family(4, Z2))
    assert rep.ok
    by_id = {c.id: c for c in rep.checks}
    assert by_id["connectivity-vs-generation"].status == "pass"
    assert by_id["colimit-index"].counts["index"] == 64
    assert by_id["simple-connectivity-vs-colimit"].status == "pass"


def test_tits_connected_but_not_simply_connected():
    a, b = s3_matrices()
    # small budget: the colimit here is infinite, so enumeration must
    # overflow and the complex side alone decides the verdict
    rep = tits_criterion_check([a, b], ([a], [b]), budget=2048)
    assert rep.ok
    by_id = {c.id: c for c in rep.checks}
    conn = by_id["connectivity-vs-generation"]
    assert conn.status == "pass"
    assert conn.counts == {"components": 1, "generated": 6, "group_order": 6}
    assert by_id["colimit-index"].status == "inconclusive"
    sc = by_id["simple-connectivity-vs-colimit"]
    assert sc.status == "pass"
    assert sc.counts.get("colimit_overflow") == 1


def test_tits_disconnected_instance():
    a, b = s3_matrices()
    cyc = a @ b
    rep = tits_criterion_check([a, b], ([cyc], [cyc]))
    assert rep.ok
    by_id = {c.id: c for c in rep.checks}
    conn = by_id["connectivity-vs-generation"]
    assert conn.status == "pass"
    assert conn.counts == {"components": 2, "generated": 3, "group_order": 6}
    assert by_id["colimit-index"].counts["index"] == 3
    sc = by_id["simple-connectivity-vs-colimit"]
    assert sc.status == "pass"
    assert sc.counts == {"components": 2}


def test_tits_accepts_subgroup_spec_family():
    group = subgroup_by_name("A", 4, Z2)
    family = tuple(subgroup_by_name(f"H{i}", 4, Z2) for i in (1, 2, 3, 4))
    rep = tits_criterion_check(group, family)
    assert rep.ok
    by_id = {c.id: c for c in rep.checks}
    assert by_id["connectivity-vs-generation"].counts["group_order"] == 64
    assert by_id["colimit-index"].counts["index"] == 64
