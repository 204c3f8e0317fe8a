"""Tool surface tests: algebra file parsing, the packaged corpus, suite
reports, the CLI and the HTTP service."""

import json

import pytest

from uce_workbench.workbench.corpus import CORPUS_NAMES, corpus_text, load_corpus, load_corpus_algebra
from uce_workbench.workbench.parser import (AlgebraParseError, algebras_equal,
                                            parse_algebra, serialize_algebra)
from uce_workbench.workbench.suite import (CHECK_IDS, SMALL_RANK_SHAPES,
                                           resolve_threads, run_single, run_suite)
from uce_workbench.workbench import cli


def corpus_path(name):
    import uce_workbench.workbench as wb
    from pathlib import Path
    return str(Path(wb.__file__).parent / "algebras" / f"{name}.alg")


# -- parser -----------------------------------------------------------------

def test_parse_minimal_ground_ring():
    A = parse_algebra("ring Z\nbasis e\nunit e\nmul e e = e\n")
    assert A.rank == 1 and A.parity == (0,) and A.unit == 0
    assert A.domain.kind == "Z"


def test_parse_accumulates_repeated_terms():
    A = parse_algebra("ring GF(3)\nbasis e\nunit e\nmul e e = 2*e + 2*e\n")
    assert A.table[0][0] == (1,)


def test_parse_rational_coefficients():
    from fractions import Fraction
    text = ("ring Q\nbasis e x\nunit e\nmul e e = e\nmul e x = x\n"
            "mul x e = x\nmul x x = 1/2*x + -3/4*e\n")
    A = parse_algebra(text)
    assert A.table[1][1] == (Fraction(-3, 4), Fraction(1, 2))


def test_parse_comments_and_blank_lines():
    text = "# header\n\nring Z\nbasis e  # trailing\nunit e\nmul e e = e\n"
    A = parse_algebra(text)
    assert A.names == ["e"]


@pytest.mark.parametrize("text,line,col,token", [
    ("ring W\nbasis e\nunit e", 1, 6, "W"),
    ("ring Z\nbasis e e\nunit e", 2, 9, "e"),
    ("ring Z\nbasis e\nunit e\nmul e q = e", 4, 7, "q"),
    ("ring Z\nbasis e\nunit e\nmul e e = e + ", 4, 1, ""),
    ("ring Z\nbasis e\nunit e\nmul e e = e e", 4, 13, "e"),
    ("ring Z\nbasis e\nunit e\nparity e 2", 4, 10, "2"),
    ("ring Q\nbasis e\nunit e\nmul e e = 1/0*e", 4, 11, "1/0"),
    ("ring Z\nbasis e\nunit e\nfrobnicate e", 4, 1, "frobnicate"),
])
def test_parse_errors_carry_position_and_token(text, line, col, token):
    with pytest.raises(AlgebraParseError) as exc:
        parse_algebra(text)
    assert exc.value.line == line
    assert exc.value.column == col
    assert exc.value.token == token


def test_parse_requires_ring_basis_unit():
    with pytest.raises(AlgebraParseError):
        parse_algebra("basis e\nunit e\n")
    with pytest.raises(AlgebraParseError):
        parse_algebra("ring Z\nunit e\n")
    with pytest.raises(AlgebraParseError):
        parse_algebra("ring Z\nbasis e\nmul e e = e\n")


def test_parse_rejects_duplicate_product():
    with pytest.raises(AlgebraParseError) as exc:
        parse_algebra("ring Z\nbasis e\nunit e\nmul e e = e\nmul e e = e\n")
    assert exc.value.line == 5


def test_parse_rejects_bad_table():
    # unit must actually act as one: here e*e = 0 fails validation
    from uce_workbench.superalg import SuperAlgebraError
    with pytest.raises(SuperAlgebraError):
        parse_algebra("ring Z\nbasis e\nunit e\nmul e e = 0\n")


def test_serialize_round_trip_on_corpus():
    for name in CORPUS_NAMES:
        A = load_corpus_algebra(name)
        text = serialize_algebra(A)
        B = parse_algebra(text, label=name)
        assert algebras_equal(A, B), name
        assert serialize_algebra(B) == text, name


# -- corpus -----------------------------------------------------------------

def test_corpus_contents():
    corpus = load_corpus()
    assert list(corpus) == list(CORPUS_NAMES)
    assert corpus["z4"].domain.kind == "Zmod" and corpus["z4"].domain.modulus == 4
    g = corpus["grassmann"]
    assert g.parity == (0, 1)
    assert all(g.domain.is_zero(c) for c in g.table[1][1])
    c2 = corpus["group2"]
    assert c2.table[1][1] == (1, 0)
    cl = corpus["clifford"]
    assert cl.parity == (0, 1) and cl.table[1][1] == (1, 0)


def test_corpus_text_is_raw_file():
    assert "ring GF(2)" in corpus_text("grassmann")


# -- suite ------------------------------------------------------------------

def test_run_suite_shape_and_order():
    A = load_corpus_algebra("gf3")
    rep = run_suite(A)
    assert rep.version and rep.domain == "GF(3)" and rep.algebra == "gf3"
    assert rep.results[0].check == "parse-roundtrip"
    ids = [(r.check, r.m, r.n) for r in rep.results]
    assert len(ids) == len(set(ids))
    assert rep.all_pass
    # every small-rank shape appears, cocycle checks only on the rank-4 ones
    assert {(r.m, r.n) for r in rep.results if r.check == "h2-sl"} == set(SMALL_RANK_SHAPES)
    assert {(r.m, r.n) for r in rep.results if r.check == "cocycle-check"} == {(3, 1), (2, 2)}


def test_report_json_field_order():
    A = load_corpus_algebra("gf2")
    rep = run_single(A, "h2-st", 2, 2)
    data = json.loads(json.dumps(rep.model_dump(by_alias=True)))
    assert list(data.keys()) == ["version", "domain", "algebra", "results"]
    assert list(data["results"][0].keys()) == [
        "check", "m", "n", "expected", "computed", "pass", "millis", "error"]
    assert data["results"][0]["pass"] is True


def test_suite_deterministic_across_thread_counts():
    A = load_corpus_algebra("gf3")
    def strip(report):
        d = report.model_dump(by_alias=True)
        for r in d["results"]:
            r["millis"] = 0
        return d
    assert strip(run_suite(A, threads=1)) == strip(run_suite(A, threads=4))


def test_run_single_captures_errors_instead_of_raising():
    A = load_corpus_algebra("q")
    rep = run_single(A, "h2-st", 1, 1)
    r = rep.results[0]
    assert not r.pass_ and r.error and "MatrixShapeError" in r.error
    assert r.expected is None and r.computed is None


def test_unknown_check_rejected():
    A = load_corpus_algebra("q")
    with pytest.raises(ValueError):
        run_single(A, "h2-everything", 2, 1)
    with pytest.raises(ValueError):
        run_suite(A, checks=["h2-sl", "nope"])


def test_resolve_threads_env(monkeypatch):
    monkeypatch.delenv("UCE_THREADS", raising=False)
    assert resolve_threads() == 1
    monkeypatch.setenv("UCE_THREADS", "3")
    assert resolve_threads() == 3
    assert resolve_threads(2) == 2
    monkeypatch.setenv("UCE_THREADS", "0")
    assert resolve_threads() == 1


def test_check_ids_cover_registry():
    A = load_corpus_algebra("gf2")
    rep = run_suite(A, shapes=[(2, 1)], checks=CHECK_IDS)
    seen = {r.check for r in rep.results}
    assert "parse-roundtrip" in seen and "h2-sl" in seen
    # rank-4-only checks are skipped at (2,1)
    assert "cocycle-check" not in seen and "uce-compare" not in seen


# -- CLI --------------------------------------------------------------------

def test_cli_parse_ok(capsys):
    assert cli.main(["parse", corpus_path("grassmann")]) == 0
    out = capsys.readouterr().out
    assert "rank 2 over GF(2)" in out and "t'" in out


def test_cli_parse_error_exit_2(tmp_path, capsys):
    bad = tmp_path / "bad.alg"
    bad.write_text("ring Z\nbasis e\nunit e\nmul e q = e\n")
    assert cli.main(["parse", str(bad)]) == 2
    assert "line 4, column 7" in capsys.readouterr().err


def test_cli_missing_file_exit_2(tmp_path):
    assert cli.main(["parse", str(tmp_path / "absent.alg")]) == 2


def test_cli_h2_writes_report(tmp_path, capsys):
    out = tmp_path / "rep.json"
    code = cli.main(["h2", "--algebra", corpus_path("gf2"), "--m", "3", "--n", "1",
                     "--target", "sl", "--report", str(out)])
    assert code == 0
    data = json.loads(out.read_text())
    assert data["results"][0]["check"] == "h2-sl"
    assert data["results"][0]["computed"]["odd"]["free"] == 6
    assert "PASS h2-sl (3,1)" in capsys.readouterr().out


def test_cli_h2_failing_check_exit_1(tmp_path):
    # st needs m+n >= 3; the error lands in the report, exit is 1
    out = tmp_path / "rep.json"
    code = cli.main(["h2", "--algebra", corpus_path("q"), "--m", "1", "--n", "1",
                     "--target", "st", "--report", str(out)])
    assert code == 1
    data = json.loads(out.read_text())
    assert data["results"][0]["pass"] is False
    assert "MatrixShapeError" in data["results"][0]["error"]


def test_cli_verify_small_rank(tmp_path):
    out = tmp_path / "verify.json"
    code = cli.main(["verify", "--algebra", corpus_path("gf3"),
                     "--suite", "small-rank", "--report", str(out)])
    assert code == 0
    data = json.loads(out.read_text())
    assert len(data["results"]) == 42
    assert all(r["pass"] for r in data["results"])


def test_cli_verify_unknown_suite_exit_2(capsys):
    assert cli.main(["verify", "--algebra", corpus_path("gf3"),
                     "--suite", "exhaustive"]) == 2
    assert "unknown suite" in capsys.readouterr().err


def test_cli_cocycle_check(capsys):
    assert cli.main(["cocycle-check", "--algebra", corpus_path("z"),
                     "--variant", "2,2"]) == 0
    out = capsys.readouterr().out
    assert "cocycle axioms hold" in out and "ok   odd-cube" in out


def test_cli_rejects_bad_choices():
    with pytest.raises(SystemExit):
        cli.main(["h2", "--algebra", "x.alg", "--m", "2", "--n", "2",
                  "--target", "gl"])
    with pytest.raises(SystemExit):
        cli.main(["cocycle-check", "--algebra", "x.alg", "--variant", "4,0"])


# -- HTTP service -----------------------------------------------------------

@pytest.fixture(scope="module")
def client():
    from fastapi.testclient import TestClient
    from uce_workbench.workbench.service import app
    with TestClient(app) as c:
        yield c


def test_service_health(client):
    data = client.get("/health").json()
    assert data["status"] == "ok" and data["version"]


def test_service_parse(client):
    resp = client.post("/parse", json={"text": corpus_text("clifford"),
                                       "label": "clifford"})
    assert resp.status_code == 200
    data = resp.json()
    assert data["ring"] == "Z" and data["parity"] == [0, 1] and data["unit"] == "e"
    assert "mul x x = e" in data["serialized"]


def test_service_parse_error_400(client):
    resp = client.post("/parse", json={"text": "ring Z\nbasis e\nunit e\nmul e q = e"})
    assert resp.status_code == 400
    detail = resp.json()["detail"]
    assert detail["line"] == 4 and detail["column"] == 7 and detail["token"] == "q"


def test_service_h2(client):
    resp = client.post("/h2", json={"text": corpus_text("z"), "label": "z",
                                    "m": 3, "n": 0, "target": "st"})
    assert resp.status_code == 200
    r = resp.json()["results"][0]
    assert r["check"] == "h2-st" and r["pass"] is True
    assert r["computed"]["even"]["torsion"] == [3, 3, 3, 3, 3, 3]


def test_service_h2_bad_target(client):
    resp = client.post("/h2", json={"text": corpus_text("z"), "m": 2, "n": 2,
                                    "target": "gl"})
    assert resp.status_code == 400


def test_service_verify_bad_suite(client):
    resp = client.post("/verify", json={"text": corpus_text("z"), "suite": "huge"})
    assert resp.status_code == 400


def test_service_cocycle(client):
    resp = client.post("/cocycle-check", json={"text": corpus_text("grassmann"),
                                               "label": "grassmann",
                                               "variant": "3,1"})
    assert resp.status_code == 200
    data = resp.json()
    assert data["passed"] is True and data["first_failure"] is None
    assert set(data["verdicts"]) == {"parity", "antisymmetry", "even-square",
                                     "cocycle", "odd-cube"}
    assert client.post("/cocycle-check", json={"text": corpus_text("z"),
                                               "variant": "4,0"}).status_code == 400


def test_cli_server_mode_round_trip(client, monkeypatch, tmp_path, capsys):
    # route the CLI transport through the in-process test client
    import httpx

    def fake_post(url, json=None, timeout=None):
        route = url[url.index("/", len("http://")):]
        return client.post(route, json=json)

    monkeypatch.setattr(httpx, "post", fake_post)
    out = tmp_path / "rep.json"
    code = cli.main(["h2", "--algebra", corpus_path("gf2"), "--m", "2", "--n", "2",
                     "--target", "st-sharp", "--server", "http://unit.test",
                     "--report", str(out)])
    assert code == 0
    data = json.loads(out.read_text())
    assert data["results"][0]["check"] == "h2-st-sharp"
    assert data["results"][0]["computed"] == {"even": {"free": 0, "torsion": []},
                                              "odd": {"free": 0, "torsion": []}}
    assert cli.main(["cocycle-check", "--algebra", corpus_path("z"),
                     "--variant", "2,2", "--server", "http://unit.test"]) == 0
    capsys.readouterr()
