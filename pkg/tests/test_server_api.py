import json

import pytest
from fastapi.testclient import TestClient

from vizcanvas.server import ServerConfig, create_app

SCATTER = {
    "mark": "scatter",
    "encodings": {"x": {"column": "GDP per capita"}, "y": {"column": "Birth Rate"}},
}


@pytest.fixture()
def client(tmp_path):
    app = create_app(ServerConfig(data_dir=str(tmp_path / "data")))
    return TestClient(app)


@pytest.fixture()
def uploaded(client, country_csv):
    response = client.post("/datasets", files={"file": ("countries.csv", country_csv)})
    assert response.status_code == 201
    return response.json()


@pytest.fixture()
def doc(client, uploaded):
    response = client.post("/documents", json={"dataset_id": uploaded["dataset_id"]})
    assert response.status_code == 201
    return response.json()


class TestDatasets:
    def test_upload_profiles_all_columns(self, uploaded):
        assert len(uploaded["summary"]["columns"]) == 26
        names = [c["name"] for c in uploaded["summary"]["columns"]]
        assert "Birth Rate" in names and "GDP per capita" in names

    def test_empty_file_400(self, client):
        response = client.post("/datasets", files={"file": ("x.csv", b"")})
        assert response.status_code == 400
        assert response.json()["code"] == "EmptyInput"

    def test_ragged_csv_400_with_row(self, client):
        response = client.post("/datasets", files={"file": ("x.csv", b"a,b\n1,2\n3\n")})
        assert response.status_code == 400
        body = response.json()
        assert body["code"] == "RaggedRows"
        assert body["detail"]["row"] == 3

    def test_oversized_upload_413(self, tmp_path, country_csv):
        config = ServerConfig(data_dir=str(tmp_path / "small"), max_upload_bytes=64)
        client = TestClient(create_app(config))
        response = client.post("/datasets", files={"file": ("x.csv", country_csv)})
        assert response.status_code == 413

    def test_suggestions(self, client, uploaded):
        ds = uploaded["dataset_id"]
        response = client.get(f"/datasets/{ds}/suggestions", params={"k": 3})
        assert response.status_code == 200
        assert len(response.json()["suggestions"]) == 3
        again = client.get(f"/datasets/{ds}/suggestions", params={"k": 3})
        assert again.content == response.content

    def test_suggestions_k_zero_422(self, client, uploaded):
        ds = uploaded["dataset_id"]
        assert client.get(f"/datasets/{ds}/suggestions", params={"k": 0}).status_code == 422

    def test_unknown_dataset_404(self, client):
        assert client.get("/datasets/nope/suggestions").status_code == 404


class TestDocuments:
    def test_create_and_fetch(self, client, doc):
        response = client.get(f"/documents/{doc['id']}")
        assert response.status_code == 200
        assert response.json()["doc_version"] == 0

    def test_note_lifecycle(self, client, doc):
        d = doc["id"]
        created = client.post(
            f"/documents/{d}/nodes",
            json={"kind": "note", "text": "idea", "position": [1, 2], "doc_version": 0},
        )
        assert created.status_code == 201
        node = created.json()["node_id"]
        version = created.json()["doc_version"]

        moved = client.put(
            f"/documents/{d}/nodes/{node}",
            json={"position": [100, 50], "doc_version": version},
        )
        assert moved.status_code == 200

        stale = client.put(
            f"/documents/{d}/nodes/{node}",
            json={"position": [0, 0], "doc_version": version},
        )
        assert stale.status_code == 409
        assert stale.json()["code"] == "StaleVersion"

    def test_visualization_node_and_spec_readout(self, client, doc):
        d = doc["id"]
        created = client.post(
            f"/documents/{d}/nodes",
            json={"kind": "visualization", "spec": SCATTER, "position": [0, 0],
                  "doc_version": 0},
        )
        assert created.status_code == 201
        node = created.json()["node_id"]

        readout = client.get(f"/documents/{d}/nodes/{node}/spec")
        assert readout.status_code == 200
        assert readout.json()["mark"] == "scatter"

    def test_invalid_spec_rejected(self, client, doc):
        response = client.post(
            f"/documents/{doc['id']}/nodes",
            json={"kind": "visualization",
                  "spec": {"mark": "scatter", "encodings": {"x": {"column": "zz"}}},
                  "doc_version": 0},
        )
        assert response.status_code == 422
        assert response.json()["code"] == "InvalidSpec"

    def test_spec_readout_of_note_404(self, client, doc):
        d = doc["id"]
        note = client.post(
            f"/documents/{d}/nodes",
            json={"kind": "note", "text": "n", "doc_version": 0},
        ).json()["node_id"]
        assert client.get(f"/documents/{d}/nodes/{note}/spec").status_code == 404

    def test_spec_readout_survives_tombstone(self, client, doc):
        d = doc["id"]
        node = client.post(
            f"/documents/{d}/nodes",
            json={"kind": "visualization", "spec": SCATTER, "doc_version": 0},
        ).json()["node_id"]
        deleted = client.delete(f"/documents/{d}/nodes/{node}", params={"doc_version": 1})
        assert deleted.status_code == 200
        readout = client.get(f"/documents/{d}/nodes/{node}/spec")
        assert readout.status_code == 200

    def test_duplicate_returns_edge(self, client, doc):
        d = doc["id"]
        node = client.post(
            f"/documents/{d}/nodes",
            json={"kind": "visualization", "spec": SCATTER, "doc_version": 0},
        ).json()["node_id"]
        duplicated = client.post(f"/documents/{d}/nodes/{node}/duplicate",
                                 json={"doc_version": 1})
        assert duplicated.status_code == 201
        body = duplicated.json()
        assert body["edge"]["kind"] == "duplicated-from"
        assert body["edge"]["from"] == node

    def test_lineage_of_three_deep_chain(self, client, doc):
        d = doc["id"]
        v1 = client.post(
            f"/documents/{d}/nodes",
            json={"kind": "visualization", "spec": SCATTER, "doc_version": 0},
        ).json()["node_id"]
        v2 = client.post(f"/documents/{d}/nodes/{v1}/duplicate",
                         json={"doc_version": 1}).json()["node_id"]
        v3 = client.post(f"/documents/{d}/nodes/{v2}/duplicate",
                         json={"doc_version": 2}).json()["node_id"]
        response = client.get(f"/documents/{d}/nodes/{v3}/lineage")
        assert response.json()["ancestors"] == [v2, v1]

    def test_unknown_ids_404(self, client, doc):
        assert client.get("/documents/missing").status_code == 404
        assert client.get(f"/documents/{doc['id']}/nodes/missing/lineage").status_code == 404

    def test_validation_error_shape(self, client):
        response = client.post("/documents", json={})
        assert response.status_code == 422
        assert response.json()["code"] == "InvalidRequest"


class TestGenerateAndRevise:
    def wait_done(self, client, job_id, budget=200):
        for _ in range(budget):
            snapshot = client.get(f"/jobs/{job_id}").json()
            if snapshot["state"] in ("done", "failed"):
                return snapshot
        raise AssertionError(f"job stuck: {snapshot}")

    def test_generate_appends_node_with_edge(self, client, uploaded, doc):
        d = doc["id"]
        note = client.post(
            f"/documents/{d}/nodes",
            json={"kind": "note", "text": "q", "position": [3, 4], "doc_version": 0},
        ).json()["node_id"]
        job = client.post(
            "/generate",
            json={"dataset_id": uploaded["dataset_id"], "document_id": d,
                  "source_node": note,
                  "goal_text": "how does GDP per capita relate to Birth Rate"},
        )
        assert job.status_code == 202
        snapshot = self.wait_done(client, job.json()["job_id"])
        assert snapshot["state"] == "done"
        node_id = snapshot["result"]["node_id"]

        document = client.get(f"/documents/{d}").json()
        assert node_id in document["nodes"]
        edges = document["edges"]
        assert edges == [
            {"from": note, "to": node_id, "kind": "generated-from-note",
             "created_at": edges[0]["created_at"]}
        ]
        payload = client.get(f"/documents/{d}/nodes/{node_id}/payload")
        assert payload.status_code == 200
        grammar = json.loads(payload.json()["grammar_json"])
        assert grammar["mark"] == "point"

    def test_empty_goal_422(self, client, uploaded, doc):
        response = client.post(
            "/generate",
            json={"dataset_id": uploaded["dataset_id"], "document_id": doc["id"],
                  "goal_text": "  "},
        )
        assert response.status_code == 422

    def test_unknown_document_404(self, client, uploaded):
        response = client.post(
            "/generate",
            json={"dataset_id": uploaded["dataset_id"], "document_id": "nope",
                  "goal_text": "x"},
        )
        assert response.status_code == 404

    def test_revise_flip(self, client, uploaded, doc):
        d = doc["id"]
        v1 = client.post(
            f"/documents/{d}/nodes",
            json={"kind": "visualization", "spec": SCATTER, "doc_version": 0},
        ).json()["node_id"]
        spec_before = client.get(f"/documents/{d}/nodes/{v1}/spec").content

        job = client.post(f"/documents/{d}/nodes/{v1}/revise",
                          json={"instruction": "flip it"})
        assert job.status_code == 202
        snapshot = self.wait_done(client, job.json()["job_id"])
        assert snapshot["state"] == "done"
        child = snapshot["result"]["node_id"]

        child_spec = client.get(f"/documents/{d}/nodes/{child}/spec").json()
        assert child_spec["encodings"]["x"]["column"] == "Birth Rate"
        assert child_spec["encodings"]["y"]["column"] == "GDP per capita"

        document = client.get(f"/documents/{d}").json()
        assert {"from": v1, "to": child, "kind": "derived-from"}.items() <= {
            k: v for k, v in document["edges"][0].items()
        }.items()
        # parent spec byte-identical
        assert client.get(f"/documents/{d}/nodes/{v1}/spec").content == spec_before
        # child offset from parent
        parent_pos = document["nodes"][v1]["position"]
        child_pos = document["nodes"][child]["position"]
        assert child_pos == [parent_pos[0] + 24, parent_pos[1] + 24]

    def test_revise_note_422(self, client, uploaded, doc):
        d = doc["id"]
        note = client.post(
            f"/documents/{d}/nodes",
            json={"kind": "note", "text": "n", "doc_version": 0},
        ).json()["node_id"]
        response = client.post(f"/documents/{d}/nodes/{note}/revise",
                               json={"instruction": "flip it"})
        assert response.status_code == 422
        assert response.json()["code"] == "NotAVisualization"

    def test_failed_job_carries_structured_error(self, client, uploaded, doc):
        job = client.post(
            "/generate",
            json={"dataset_id": uploaded["dataset_id"], "document_id": doc["id"],
                  "goal_text": "nothing matches here at all"},
        )
        snapshot = self.wait_done(client, job.json()["job_id"])
        assert snapshot["state"] == "failed"
        assert snapshot["error"]["code"] == "GenerationFailed"
