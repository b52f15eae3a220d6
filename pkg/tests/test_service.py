"""HTTP surface: routes, schemas, provenance echo, error mapping."""

import pytest
from fastapi.testclient import TestClient

from expmeasure.service.app import create_app


@pytest.fixture(scope="module")
def client():
    return TestClient(create_app())


def test_health(client):
    resp = client.get("/v1/health")
    assert resp.status_code == 200
    assert resp.json()["status"] == "ok"


def test_exponent_table(client):
    resp = client.post("/v1/exponent/table",
                       json={"d": "2..3", "delta": "1", "check_closed_forms": True})
    assert resp.status_code == 200
    body = resp.json()
    assert body["schema"] == "expmeasure.exponent_table/1"
    assert body["provenance"]["config"]["d"] == "2..3"
    rows = body["rows"]
    assert [r["lambda"] for r in rows] == [2, 4]
    assert rows[0]["psi_lambda"] == "11/1"
    assert rows[0]["zheng_equality"] is True
    notes = body["closed_form_notes"]
    three = [n for n in notes if n["which"] == 3]
    assert all(not n["matches_paper"] and n["matches_alt"] for n in three)


def test_bound_endpoint(client):
    resp = client.post("/v1/bound", json={"alpha": "x^2-2:+re", "delta": 1, "H": "100"})
    assert resp.status_code == 200
    body = resp.json()
    cert = body["certificate"]
    assert cert["psi"] == "11/1" and cert["p"] == 2 and cert["q"] == 4
    assert body["p_is_default_lambda"]
    resp = client.post("/v1/bound",
                       json={"alpha": "x^2-2:+re", "delta": 1, "H": "100", "p": 3})
    body = resp.json()
    assert body["certificate"]["psi"] == "11/1"     # psi(2,1,3) = 11 as well
    assert not body["p_is_default_lambda"]


def test_verify_endpoint(client):
    resp = client.post("/v1/verify", json={"alpha": "x-1", "delta": 1, "H": "1..5"})
    assert resp.status_code == 200
    body = resp.json()
    assert body["ok"] and len(body["rows"]) == 5
    assert body["rows"][2]["argmin"] == [-3, 1]
    assert all(r["log10_gap"] > 0 for r in body["rows"])


def test_approximants_endpoint(client):
    resp = client.post("/v1/approximants",
                       json={"alpha": "x-1", "n": 1, "p": 1, "metric_report": True})
    assert resp.status_code == 200
    body = resp.json()
    assert body["det_at_one_nonzero"]
    assert body["q"] == 1
    assert body["system"]["columns"][1]["vanishing_order"] == 3
    assert body["metric"]["entries_ok"]


def test_certificate_endpoint(client):
    resp = client.post("/v1/certificate",
                       json={"alpha": "x-1", "P": [-1, 1], "n": 1, "p": 1})
    assert resp.status_code == 200
    body = resp.json()
    assert body["chain_all_passed"] and body["integrality_ok"]
    assert body["column_reduction"]["symbolic_ok"]
    assert body["column_reduction"]["numeric_ok"]
    assert body["certificate"]["ell_subset"] == [0]


def test_scan_endpoints(client):
    resp = client.post("/v1/scan/parity", json={"d_max": 3, "delta_max": 3})
    assert resp.status_code == 200
    assert len(resp.json()["rows"]) == 4

    resp = client.post("/v1/scan/floor-identity", json={"d": "2..4", "delta": "1..2"})
    assert resp.status_code == 200
    assert all(r["identity_holds"] for r in resp.json()["rows"])

    resp = client.post("/v1/scan/asymptotic", json={"delta": 2, "d": "2..5"})
    assert resp.status_code == 200
    assert resp.json()["rows"][0]["difference"] == "-1/6"


def test_parse_error_maps_to_422(client):
    resp = client.post("/v1/bound", json={"alpha": "x^2-2:guess", "delta": 1})
    assert resp.status_code == 422
    assert resp.json()["error"]["code"] == "parse_error"


def test_constraint_error_maps_to_422(client):
    resp = client.post("/v1/bound",
                       json={"alpha": "x^2-2:+re", "delta": 1, "p": 1})
    assert resp.status_code == 422
    assert resp.json()["error"]["code"] == "constraint_violated"


def test_budget_error_code(client):
    resp = client.post("/v1/verify",
                       json={"alpha": "x-1", "delta": 1, "H": "50", "budget": 10})
    assert resp.status_code == 422
    assert resp.json()["error"]["code"] == "budget_exceeded"
