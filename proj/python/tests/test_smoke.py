import json
from pathlib import Path

import pytest

zncoh = pytest.importorskip("zncoh")

FIXTURES = Path(__file__).resolve().parents[2] / "fixtures"


def load(name):
    return json.loads((FIXTURES / f"{name}.json").read_text())


def test_dihedral_oracle_table():
    result = zncoh.analyze(load("dinfty"), max_degree=6, engine="oracle")
    groups = [g["group"] for g in result["tables"]["oracle"]["groups"]]
    assert groups == ["Z", "0", "(Z/2)^2", "0", "(Z/2)^2", "0", "(Z/2)^2"]


def test_worked_example_ranks_and_decomposition():
    doc = load("z5_z6")
    ranks = zncoh.rank(doc, max_degree=6)["ranks"]
    assert [r["oracle"] for r in ranks] == [1, 1, 2, 2, 1, 1, 0]
    assert all(r["molien"] == r["oracle"] == r["count_wedge_roots"] for r in ranks)
    primes = {p["p"]: (p["r"], p["s"], p["t"]) for p in zncoh.rst(doc)["primes"]}
    assert primes == {2: (2, 1, 1), 3: (3, 0, 1)}


def test_compare_summary_and_rendering():
    report = zncoh.compare(load("z5_z6"), max_degree=12)
    assert report["summary"]["rank_agreements"] == 13
    golden = (FIXTURES.parent / "tests" / "golden" / "z5_z6_compare.md").read_text()
    assert zncoh.render(report, "md") == golden


def test_json_text_input_and_census():
    text = (FIXTURES / "p3.json").read_text()
    census = zncoh.census(text)
    assert census["cyclotomic"] == {"3": 1}
    assert census["finite_subgroups"]["order_p_classes"] == {"3": 3}


def test_rejections_carry_the_error_kind():
    with pytest.raises(zncoh.ZncohError) as info:
        zncoh.analyze({"name": "bad", "n": 1, "m": 4, "phi": [[1]]})
    assert info.value.kind == "NotSquareFree"
    with pytest.raises(zncoh.ZncohError) as info:
        zncoh.rank("{not json")
    assert info.value.kind == "InvalidInput"
    with pytest.raises(ValueError):
        zncoh.analyze(load("dinfty"), engine="nonsense")
