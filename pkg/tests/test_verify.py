import json
from dataclasses import replace
from importlib import resources

import pytest

from ainfcat import corpus
from ainfcat.ainfty import AinfCategory, Cochain, hochschild_differential
from ainfcat.bimod import BimoduleHom
from ainfcat.coeff import CoefficientRing
from ainfcat.hoch import cap
from ainfcat.verify import (
    TEMPLATE_FIELDS,
    DocumentError,
    OperationBundle,
    bundle_corruptions,
    cardy_sign,
    deformation_class,
    idempotent_bundle,
    load_document,
    parse_document,
    point_bundle,
    verify_cardy,
    verify_co_algebra,
    verify_leibniz_star,
    verify_oc_module,
)
from ainfcat.verify import _c0, _qc

TEMPLATES = {"co-algebra": verify_co_algebra, "oc-module": verify_oc_module, "cardy": verify_cardy}


def fixture(name):
    return resources.files("ainfcat").joinpath("fixtures", name)


@pytest.mark.parametrize("make", [point_bundle, idempotent_bundle])
@pytest.mark.parametrize("template", sorted(TEMPLATES))
def test_hand_built_bundles_pass(make, template):
    rep = TEMPLATES[template](make())
    assert rep.passed and rep.checked > 0


@pytest.mark.parametrize("template", sorted(TEMPLATES))
def test_every_corruption_is_caught(template):
    bundle = idempotent_bundle()
    bad = list(bundle_corruptions(bundle, TEMPLATE_FIELDS[template]))
    assert bad
    for name, c in bad:
        assert not TEMPLATES[template](c).passed, name


def test_point_oc_module_is_blind_to_rescaling_oc():
    # OC has a single entry and the identity is linear in it, so negating it is a global rescaling
    bundle = point_bundle()
    for name, c in bundle_corruptions(bundle, TEMPLATE_FIELDS["oc-module"]):
        assert verify_oc_module(c).passed == name.startswith("oc["), name


def test_cardy_signs():
    assert [cardy_sign(n) for n in range(8)] == [1, -1, -1, 1, 1, -1, -1, 1]


def test_cardy_applies_exactly_the_sign():
    bundle = idempotent_bundle()
    cy = bundle.cy
    flipped = BimoduleHom(cy.source, cy.target, cy.parity, {k: {n: -c for n, c in v.items()}
                                                               for k, v in cy.table.items()}, "CY")
    for n in range(5):
        assert verify_cardy(bundle, n).passed == (cardy_sign(n) == 1)
        assert verify_cardy(replace(bundle, cy=flipped), n).passed == (cardy_sign(n) == -1)


def test_wrong_cap_sign_fails():
    assert not verify_oc_module(idempotent_bundle(), cap_fn=lambda a, c: -cap(a, c)).passed


def test_zero_oc_passes_oc_module():
    assert verify_oc_module(replace(idempotent_bundle(), oc={})).passed


def test_closed_homotopy_changes_nothing():
    b = idempotent_bundle()
    cat = b.cat
    h = _c0(cat, {"1": 1})
    assert hochschild_differential(h, cat, 3).is_zero()
    assert verify_co_algebra(replace(b, h_co={("x", "x"): h})).passed


def test_homotopy_must_account_for_its_boundary():
    b = idempotent_bundle()
    cat = b.cat
    h = Cochain(cat, cat.value_space, 0, {("*", ("x",)): {"x": cat.ring.one}})
    assert not hochschild_differential(h, cat, 3).is_zero()
    assert not verify_co_algebra(replace(b, h_co={("x", "x"): h})).passed


def test_missing_cy_fails():
    assert not verify_cardy(replace(point_bundle(), cy=None)).passed


def deformation_bundle():
    R = CoefficientRing.bulk_polynomial(["t"], [0], (), 4)
    t = R.parse("x1")
    prods = {("1", "1"): {"1": 1}, ("1", "x"): {"x": 1}, ("x", "1"): {"x": 1}, ("x", "x"): {"x": t}}
    fam = AinfCategory.from_algebra(R, {"1": 0, "x": 0}, prods, name="x^2 = t x")
    D = corpus.dual_numbers()
    Z = D.ring
    nu = deformation_class(fam, D)
    qc = _qc(Z, {"1": 0, "t": 0})
    star = {("1", "1"): {"1": Z.one}, ("1", "t"): {"t": Z.one}, ("t", "1"): {"t": Z.one}}
    return nu, OperationBundle(D, qc, star=star, co={"1": _c0(D, {"1": 1}), "t": nu}, unit="1", max_len=3)


def test_deformation_class():
    nu, bundle = deformation_bundle()
    # d/dt of mu(x, x) = t x, read in the shifted convention
    assert nu.table == {("*", ("x", "x")): {"x": -bundle.cat.ring.one}}
    assert nu.parity == 1
    assert hochschild_differential(nu, bundle.cat, 4).is_zero()
    for L in range(2, 6):
        assert verify_co_algebra(replace(bundle, max_len=L)).passed


def test_deformation_bundle_corruptions():
    _, bundle = deformation_bundle()
    for name, c in bundle_corruptions(bundle, TEMPLATE_FIELDS["co-algebra"]):
        # t -> -t is an automorphism of QC, so negating CO(t) alone is invisible
        assert verify_co_algebra(c).passed == name.startswith("co[t]"), name


def test_leibniz():
    R = CoefficientRing.integers()
    one = R.one
    qc = _qc(R, {"u": 0, "a": 0, "b": 1}, {"a": {"b": one}})
    good = {("u", k): {k: one} for k in "uab"} | {(k, "u"): {k: one} for k in "ab"}
    assert verify_leibniz_star(qc, good).passed
    for key in sorted(good):
        bad = {**good, key: {k: -c for k, c in good[key].items()}}
        # u * u only meets d through d(u) = 0
        assert verify_leibniz_star(qc, bad).passed == (key == ("u", "u")), key
    flat = _qc(R, {"u": 0, "a": 0, "b": 1})
    assert verify_leibniz_star(flat, {**good, ("a", "u"): {"a": -one}}).passed


def test_document_errors_are_located():
    with pytest.raises(DocumentError) as exc:
        parse_document('{"ring": {"kind": "integers"},\n "category": [}')
    assert exc.value.line == 2 and exc.value.column is not None
    with pytest.raises(DocumentError) as exc:
        parse_document(json.dumps({"ring": {"kind": "octonions"}}))
    assert "ring" in exc.value.path
    with pytest.raises(DocumentError) as exc:
        parse_document(json.dumps({"ring": {"kind": "integers"},
                                   "category": {"objects": ["*"], "morphisms": {"e": ["*", "Q", 0]}}}))
    assert exc.value.path.startswith("category")


@pytest.mark.parametrize("name,make", [("point_bundle.json", point_bundle),
                                       ("idempotent_bundle.json", idempotent_bundle)])
def test_fixtures_match_hand_built(name, make):
    with resources.as_file(fixture(name)) as p:
        doc = load_document(p)
    got, want = doc.bundle, make()
    assert got.star == want.star and got.oc == want.oc
    assert {k: v.table for k, v in got.co.items()} == {k: v.table for k, v in want.co.items()}
    assert got.cy.table == want.cy.table
    for template, fn in TEMPLATES.items():
        assert fn(got).passed, template
