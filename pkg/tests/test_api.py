from fastapi.testclient import TestClient

from src.core.weights import binomial_pmf
from src.lp.constructions import extremal_tail
from src import main
from src.main import app
from src.models.schemas import WeightPMFRecord

client = TestClient(app)


def test_health_check():
    response = client.get("/health")
    assert response.status_code == 200
    data = response.json()
    assert data["status"] == "healthy"
    assert data["version"] == "1.0.0"
    assert data["precision"] >= 15


def test_lifespan_logs_startup_and_shutdown(monkeypatch):
    lines = []
    monkeypatch.setattr(main.logger, "info", lines.append)
    with TestClient(app) as scoped:
        assert scoped.get("/health").status_code == 200
        assert any("Starting" in line for line in lines)
    assert "Shutting Down" in lines[-1]
    assert not app.router.on_startup


def test_tail():
    response = client.get("/api/v1/tail", params={"n": 4, "t": 2})
    assert response.status_code == 200
    assert response.json() == {"n": 4, "t": 2, "tail": "5/16"}


def test_tail_on_bad_slice():
    response = client.get("/api/v1/tail", params={"n": 4, "t": 0, "slice": 1})
    assert response.status_code == 400


def test_bias():
    response = client.get("/api/v1/bias", params={"n": 3, "slice": 1})
    assert response.status_code == 200
    assert response.json()["bias"] == ["1/1", "1/3", "-1/3", "-1/1"]


def test_extremal():
    response = client.get("/api/v1/extremal", params={"n": 4, "k": 2, "t": 4})
    assert response.status_code == 200
    data = response.json()
    assert data["status"] == "optimal"
    assert data["value"] == "1/6"


def test_extremal_infeasible_is_not_an_error():
    response = client.get("/api/v1/extremal", params={"n": 4, "k": 2, "t": 4, "mod": 8, "residue": 4})
    assert response.status_code == 200
    assert response.json()["status"] == "infeasible"
    assert response.json()["primal"] is None


def test_extremal_bad_objective():
    response = client.get("/api/v1/extremal", params={"n": 4, "k": 2, "t": 4, "objective": "max_everything"})
    assert response.status_code == 400


def test_smooth():
    response = client.get("/api/v1/smooth", params={"n": 1, "slice": 1, "rho": "1/2"})
    assert response.status_code == 200
    assert response.json()["pmf"] == [{"w": -1, "p": "1/4"}, {"w": 1, "p": "3/4"}]


def test_smooth_rejects_bad_rho():
    assert client.get("/api/v1/smooth", params={"n": 4, "rho": "3/2"}).status_code == 400
    assert client.get("/api/v1/smooth", params={"n": 4, "rho": "abc"}).status_code == 400


def test_pipeline():
    source = extremal_tail(60, 4, 16).primal
    body = {"k": 4, "pmf": WeightPMFRecord.from_domain(source).model_dump()}
    response = client.post("/api/v1/pipeline", params={"rows": True}, json=body)
    assert response.status_code == 200
    data = response.json()
    assert data["certified"]
    assert data["interval_ok"]
    assert data["support_ok"]
    assert len(data["rows"]) == 60


def test_pipeline_rejects_non_uniform_input():
    body = {"k": 2, "pmf": {"n": 4, "pmf": [{"w": 4, "p": "1"}]}}
    assert client.post("/api/v1/pipeline", json=body).status_code == 400


def test_pipeline_validates_body():
    body = {"k": 1, "pmf": WeightPMFRecord.from_domain(binomial_pmf(4)).model_dump()}
    assert client.post("/api/v1/pipeline", json=body).status_code == 422
