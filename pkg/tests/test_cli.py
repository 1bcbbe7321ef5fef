from __future__ import annotations

import io
import json

import pytest

from tccert.cli import main
from tccert.document import field_of, load_space, parse_document, validate_document
from tccert.errors import SchemaError
from tccert.field_linalg import FieldSpec
from tccert.replay import replay

FULL = {"two_aspherical": True, "pi1_no_Z2": True, "pi1_torsion_free": True}
TORUS_DOC = {"schema_version": 1, "space": {"type": "bundled", "name": "torus"}}
GENUS2_PRES = {"schema_version": 1,
               "space": {"type": "presentation", "generators": ["a", "b", "c", "d"], "relators": ["abABcdCD"]},
               "assertions": FULL}


def _write(tmp_path, doc, name="doc.json"):
    p = tmp_path / name
    p.write_text(json.dumps(doc), encoding="utf-8")
    return str(p)


def run(argv):
    out = io.StringIO()
    code = main(argv, out)
    return code, out.getvalue()


def test_cohomology_examples(tmp_path):
    assert run(["cohomology", "--space", _write(tmp_path, TORUS_DOC), "--char", "0"]) == (0, "1 2 1\n")
    assert run(["cohomology", "--space", _write(tmp_path, GENUS2_PRES)]) == (0, "1 4 1\n")
    a5 = {"schema_version": 1, "space": {"type": "presentation", "generators": ["a", "b"],
                                         "relators": ["aaaaabbbbb"]}, "field": {"characteristic": 5}}
    assert run(["cohomology", "--space", _write(tmp_path, a5)])[1] == "1 2 1\n"
    assert run(["cohomology", "--space", _write(tmp_path, a5), "--char", "0"])[1] == "1 1\n"


def test_malformed_facets_name_the_path(tmp_path, capsys):
    doc = {"schema_version": 1, "space": {"type": "simplicial", "vertices": 3, "facets": [[0, 1], [1, "x"]]}}
    with pytest.raises(SchemaError) as exc:
        load_space(doc, FieldSpec(0))
    assert exc.value.path == "space.facets[1][1]"
    code, _ = run(["cohomology", "--space", _write(tmp_path, doc)])
    assert code == 1
    assert "space.facets[1][1]" in capsys.readouterr().err


def test_semantic_errors_name_the_path():
    doc = {"schema_version": 1, "space": {"type": "simplicial", "vertices": 3, "facets": [[0, 2, 1]]}}
    with pytest.raises(SchemaError, match="^space: "):
        load_space(doc, FieldSpec(0))
    doc = {"schema_version": 1, "space": {"type": "chain_complex", "dims": [1, 1, 1],
                                          "boundaries": [[[0]], [[1]]]}}
    load_space(doc, FieldSpec(0))
    doc["space"]["boundaries"] = [[[1]], [[1]]]
    with pytest.raises(SchemaError) as exc:
        load_space(doc, FieldSpec(0))
    assert exc.value.path == "space.boundaries[1]"
    doc = {"schema_version": 1, "space": {"type": "presentation", "generators": ["a"], "relators": ["ab"]}}
    with pytest.raises(SchemaError, match="undeclared"):
        load_space(doc, FieldSpec(0))


def test_schema_version_and_json_errors():
    with pytest.raises(SchemaError):
        validate_document({"schema_version": 2, "space": {"type": "bundled", "name": "torus"}})
    with pytest.raises(SchemaError, match=r"doc:2:"):
        parse_document('{"a":\n  oops}', "doc")


def test_certify_examples(tmp_path):
    out = tmp_path / "cert.json"
    code, text = run(["certify", "--space", "bundled:genus2", "--out", str(out)])
    assert code == 0 and "[4, 4]" in text
    cert = json.loads(out.read_text())
    assert (cert["lower"], cert["upper"]) == (4, 4)
    assert replay(cert)["exact"]
    code, text = run(["certify", "--space", _write(tmp_path, TORUS_DOC), "--out", str(out)])
    assert code == 2 and "[2, 4]" in text


def test_certify_char2_refusals(tmp_path):
    factor = {"space": GENUS2_PRES["space"], "assertions": FULL}
    doc = {"schema_version": 1, "space": {"type": "product", "factors": [factor, factor]},
           "field": {"characteristic": 2}}
    out = tmp_path / "c.json"
    code, text = run(["certify", "--space", _write(tmp_path, doc), "--out", str(out)])
    assert code == 2
    assert "refused THM_SPECIAL: characteristic(F) = 2" in text
    assert replay(json.loads(out.read_text()))["exact"] is False
    doc["field"]["characteristic"] = 3
    code, text = run(["certify", "--space", _write(tmp_path, doc), "--out", str(out)])
    assert code == 0 and "[8, 8]" in text


def test_certify_stdout_is_deterministic():
    a = run(["certify", "--space", "bundled:genus2", "--char", "5"])
    b = run(["certify", "--space", "bundled:genus2", "--char", "5"])
    assert a == b and a[0] == 0
    assert replay(json.loads(a[1]))["lower"] == 4


def test_verify_core_cli():
    code, text = run(["verify-core"])
    assert code == 0 and "FAIL" not in text
    code, text = run(["verify-core", "--max-prism-k", "0"])
    assert code == 0 and "prism identity k=0" in text and "k=1" not in text
    for fault in ("prism-sign", "torus-sign"):
        code, text = run(["verify-core", "--inject-fault", fault])
        assert code != 0 and "FAIL" in text


def test_ring_cli(tmp_path):
    code, text = run(["ring", "--space", _write(tmp_path, GENUS2_PRES)])
    assert code == 0 and "UNKNOWN" in text and "class u" in text


def test_document_variants():
    Q = FieldSpec(0)
    algebra = {"schema_version": 1, "space": {
        "type": "algebra", "characteristic": 0, "degrees": [0, 2, 4],
        "products": [[1, 1, [[2, "1"]]]]},
        "assertions": {"atoroidal_classes": ["u"]}}
    s = load_space(algebra, field_of(algebra))
    assert s.ring(Q).marked["u"].tag == "atoroidal (asserted)"
    bad = dict(algebra, field={"characteristic": 3})
    with pytest.raises(SchemaError, match="characteristic"):
        load_space(bad, field_of(bad))

    pres = {"schema_version": 1, "space": {"type": "presentation", "generators": ["a", "b"],
                                           "relators": ["abAB"], "relator_not_proper_power": True}}
    s = load_space(pres, Q)
    assert s.assertions.aspherical_space and s.assertions.two_aspherical

    marked = {"schema_version": 1, "space": {"type": "bundled", "name": "genus2"},
              "marked_classes": [{"name": "w", "coordinates": ["3/2"]}]}
    s = load_space(marked, Q)
    A = s.ring(Q)
    assert A.marked["w"].element.coefficient(A.size - 1) == FieldSpec(0).parse("3/2")
    marked["marked_classes"][0]["coordinates"] = ["0"]
    with pytest.raises(SchemaError, match="marked_classes"):
        load_space(marked, Q)


def test_bundled_assertions_can_be_replaced():
    doc = {"schema_version": 1, "space": {"type": "bundled", "name": "genus2"}, "assertions": {}}
    s = load_space(doc, FieldSpec(0))
    assert not s.assertions.pi1_no_Z2


def test_unknown_bundled_name():
    with pytest.raises(SchemaError):
        load_space({"schema_version": 1, "space": {"type": "bundled", "name": "klein"}}, FieldSpec(0))
