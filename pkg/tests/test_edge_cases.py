import json
from fractions import Fraction

import pytest

from lojex.cli import AnalysisOptions, analyze_germ, main
from lojex.errors import InputError
from lojex.fan import cone_det, normal_fan, simplicialize, unimodularize, validate_fan
from lojex.nondegeneracy import check_model
from lojex.parser import parse_text
from lojex.polyhedron import build_polyhedron
from lojex.taylor import RemainderDescriptor, TaylorModel, support


def test_one_variable_germ_full_pipeline():
    out = analyze_germ(parse_text("x1^2"), AnalysisOptions())
    rep = out.report
    assert out.exit_code == 0
    assert rep.theta.value == Fraction(1, 2)
    assert rep.alpha.value == 2
    assert rep.dist.value == 2
    assert (rep.fan_L, rep.fan_N) == (2, 2)


def test_unit_remainder_enters_polyhedron_but_blocks_face_certainty():
    m = parse_text("x1^2*x2^2\n@remainder exp=(3,1) unit")
    assert support(m) == frozenset({(2, 2), (3, 1)})
    out = analyze_germ(m, AnalysisOptions())
    assert out.report.kn.satisfied
    # every face touching the remainder exponent is underdetermined
    statuses = {k: v.status for k, v in out.report.face_verdicts.items()}
    assert statuses[((3, 1),)] == "inconclusive"
    assert statuses[((2, 2), (3, 1))] == "inconclusive"
    assert statuses[((2, 2),)] == "nondegenerate-exact"
    assert out.report.nondegeneracy_overall == "inconclusive"
    assert out.exit_code == 2


def test_unit_remainder_on_existing_term_is_underdetermined():
    m = TaylorModel.from_dict(
        2, {(2, 2): 1}, [RemainderDescriptor((2, 2), frozenset(), True)]
    )
    poly = build_polyhedron(support(m))
    verdicts, ok = check_model(m, poly)
    assert not ok
    assert all(v.status == "inconclusive" for v in verdicts.values())


def test_flat_remainder_only_germ_is_rejected():
    m = TaylorModel.from_dict(
        2, {}, [RemainderDescriptor((2, 0), frozenset({1}), False)]
    )
    with pytest.raises(InputError):
        analyze_germ(m, AnalysisOptions())


def test_flat_remainder_does_not_perturb_faces():
    plain = parse_text("x1^2*x2^2")
    flat = parse_text("x1^2*x2^2\n@remainder exp=(2,0) flat=(x2)")
    out_plain = analyze_germ(plain, AnalysisOptions())
    out_flat = analyze_germ(flat, AnalysisOptions())
    assert out_flat.report.face_verdicts.keys() == out_plain.report.face_verdicts.keys()
    assert out_flat.report.nondegeneracy_overall == "nondegenerate"


def test_4d_unimodularization():
    m = parse_text(
        "x1^2*x2^2 + x2^2*x3^2 + x3^2*x4^2 + x1^2*x4^2 + x1^2*x3^2 + x2^2*x4^2"
    )
    poly = build_polyhedron(support(m))
    fan = unimodularize(simplicialize(normal_fan(poly)))
    assert all(
        len(c.rays) == 4 and abs(cone_det(fan.generators(c))) == 1
        for c in fan.maximal_cones()
    )
    validate_fan(fan)


def test_cli_verify_reports_failing_exponent(tmp_path):
    out = tmp_path / "v.json"
    code = main(["verify", "x^2 + y^2", "--theta", "0.4", "--json", str(out)])
    assert code == 0
    doc = json.loads(out.read_text())
    assert doc["audits"][0]["verdict"] == "fail"


def test_cli_empty_input_is_input_error():
    assert main(["analyze", "   "]) == 3


def test_deep_exponent_is_capped():
    from lojex.errors import CapExceededError

    with pytest.raises(CapExceededError):
        parse_text(f"x^{10**7}")
