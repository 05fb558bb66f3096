import io
import json

import pytest

from hkrlab.cli import run


def write_doc(tmp_path, gens, rels, caps=None, name="alg.json"):
    doc = {"generators": [{"name": n, "weight": w} for n, w in gens], "relations": rels}
    if caps:
        doc["caps"] = caps
    p = tmp_path / name
    p.write_text(json.dumps(doc), encoding="utf-8")
    return str(p)


def call(*argv):
    out, err = io.StringIO(), io.StringIO()
    code = run(list(argv), stdout=out, stderr=err)
    return code, out.getvalue(), err.getvalue()


def cells(obj):
    if isinstance(obj, dict):
        for v in obj.values():
            yield from cells(v)
    else:
        yield obj


def test_hh_table(tmp_path):
    f = write_doc(tmp_path, [("x", 1)], [], {"max_degree": 3, "max_weight": 6})
    code, out, _ = call("hh", "--algebra", f, "--jobs", "1")
    assert code == 0
    doc = json.loads(out)
    assert set(doc) == {"version", "command", "algebra", "caps", "tables", "findings"}
    assert doc["caps"] == {"max_degree": 3, "max_weight": 6}
    row = doc["tables"]["hh_dim"]["1"]
    assert [row[str(w)] for w in range(1, 7)] == [1] * 6
    assert all(isinstance(c, int) and c >= 0 for c in cells(doc["tables"]))


def test_ext_ku():
    code, out, _ = call("ext-ku", "--max", "10")
    assert code == 0
    table = json.loads(out)["tables"]["ext_ku"]
    assert {int(d) for d, v in table.items() if v == 1} == {0, -2, -4, -6, -8, -10}
    assert all(v == 0 for d, v in table.items() if int(d) % 2 or int(d) > 0)


def test_cyclic_negative_and_periodic(tmp_path):
    f = write_doc(tmp_path, [("x", 1), ("y", 1)], [])
    code, out, _ = call("cyclic", "--algebra", f, "--max-degree", "3", "--max-weight", "4", "--jobs", "1")
    assert code == 0
    table = json.loads(out)["tables"]["cyclic_negative"]["0"]
    assert all(c["hochschild"] == c["derham"] for c in table.values())
    code, out, _ = call("cyclic", "--variant", "periodic", "--algebra", f, "--max-weight", "4", "--jobs", "1")
    assert code == 0
    assert json.loads(out)["tables"]["cyclic_periodic"]["even"]["0"] == {"hochschild": 1, "derham": 1}


def test_hkr_and_derived_commands(tmp_path):
    smooth = write_doc(tmp_path, [("x", 1)], [], name="line.json")
    assert call("hkr-check", "--algebra", smooth, "--max-degree", "2", "--max-weight", "4")[0] == 0
    dual = write_doc(tmp_path, [("x", 1)], ["x^2"], name="dual.json")
    assert call("hkr-check", "--algebra", dual, "--max-degree", "2", "--max-weight", "4")[0] == 1
    code, out, _ = call("derived-hkr-check", "--algebra", dual, "--max-degree", "3", "--max-weight", "4")
    assert code == 0
    assert "complete intersection" in json.loads(out)["findings"][0]["scope"]


def test_not_complete_intersection(tmp_path):
    f = write_doc(tmp_path, [("x", 1), ("y", 1)], ["x^2", "x*y"])
    code, out, err = call("derived-hkr-check", "--algebra", f, "--max-weight", "3")
    assert code == 2
    assert json.loads(out)["error"]["kind"] == "NotCompleteIntersection"
    assert err
    code, out, _ = call("derived-hkr-check", "--override", "--algebra", f, "--max-degree", "2", "--max-weight", "3")
    assert json.loads(out)["findings"][0]["override"] is True


def test_b_suite(tmp_path):
    f = write_doc(tmp_path, [("x", 1)], [])
    code, out, _ = call("b-suite", "--algebra", f, "--max-degree", "3", "--max-weight", "4", "--jobs", "1")
    assert code == 0
    doc = json.loads(out)
    assert doc["tables"]["lambda"]["0"] == 1
    assert doc["findings"][0]["witnesses"]


@pytest.mark.parametrize("rels,kind", [
    (["x^"], "PolySyntaxError"),
    (["z"], "UnknownVariable"),
    (["x^2 + x"], "NotHomogeneous"),
])
def test_input_errors(tmp_path, rels, kind):
    f = write_doc(tmp_path, [("x", 1)], rels)
    code, out, err = call("hh", "--algebra", f)
    assert code == 2
    rec = json.loads(out)["error"]
    assert rec["kind"] == kind
    assert kind in err
    if kind == "PolySyntaxError":
        assert rec["offset"] == 2


def test_bad_files(tmp_path):
    p = tmp_path / "broken.json"
    p.write_text("{not json", encoding="utf-8")
    assert call("hh", "--algebra", str(p))[0] == 2
    assert call("hh", "--algebra", str(tmp_path / "missing.json"))[0] == 2
    f = write_doc(tmp_path, [("x", 0)], [])
    assert json.loads(call("hh", "--algebra", f)[1])["error"]["kind"] == "InvalidPresentation"
    assert call("hh")[0] == 2


def test_markdown(tmp_path):
    f = write_doc(tmp_path, [("x", 1)], ["x^3"])
    code, out, _ = call("derham", "--algebra", f, "--format", "markdown", "--max-weight", "3", "--jobs", "1")
    assert code == 0
    assert out.startswith("# derham") and "| 0 |" in out


def test_deterministic_and_parallel(tmp_path):
    f = write_doc(tmp_path, [("x", 2), ("y", 3)], ["y^2 - x^3"])
    runs = [call("hh", "--algebra", f, "--max-degree", "3", "--max-weight", "6", "--jobs", j)[1]
            for j in ("1", "1", "2")]
    assert runs[0] == runs[1] == runs[2]
