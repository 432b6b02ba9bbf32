"""Tests for the HTTP API, served in-process through the FastAPI test client."""

import pytest
from fastapi.testclient import TestClient

from psentscore.api.endpoints import score as score_endpoint
from psentscore.main import app

PAIRS_FILE = "filter_pairs.jsonl"


@pytest.fixture
def client(monkeypatch, lexicon):
    monkeypatch.setattr(score_endpoint, "get_lexicon", lambda: lexicon)
    with TestClient(app) as test_client:
        yield test_client


@pytest.fixture
def pairs_upload(data_dir):
    return {"pairs": (PAIRS_FILE, (data_dir / PAIRS_FILE).read_bytes(), "application/jsonl")}


class TestHealth:
    def test_health(self, client):
        """Health reports status and the channel order used by reports."""
        response = client.get("/health")
        assert response.status_code == 200
        body = response.json()
        assert body["status"] == "healthy"
        assert body["channels"] == ["all", "positive", "negative"]


class TestTokenizeEndpoint:
    """POST /api/tokenize"""

    def test_tokens_and_spans(self, client):
        """Speaker markers are dropped and spans index the original text."""
        response = client.post("/api/tokenize", json={"text": "#Person1#: Great news !"})
        assert response.status_code == 200
        body = response.json()
        assert body["tokens"] == ["Great", "news"]
        assert body["spans"] == [[11, 16], [17, 21]]

    def test_keep_speaker_tokens(self, client):
        """Speaker markers survive when asked for."""
        response = client.post("/api/tokenize", json={"text": "#Person1#: Hi", "keep_speaker_tokens": True})
        assert response.json()["tokens"] == ["#Person1#", "Hi"]


class TestScoreEndpoint:
    """POST /api/score"""

    def test_score_upload(self, client, pairs_upload):
        """An uploaded pair file yields a three-channel report tagged with the lexicon."""
        response = client.post("/api/score", files=pairs_upload)
        assert response.status_code == 200
        report = response.json()
        assert [entry["channel"] for entry in report["channels"]] == ["all", "positive", "negative"]
        assert report["channels"][0]["n_used"] == 9
        assert report["metadata"]["tagger"].startswith("lexicon:")

    def test_toolkit_error_is_422_with_code(self, client):
        """Toolkit errors become 422 with the error code and file context."""
        body = b'{"id":"d1","dialogue":"a","summary":"b"}\n{"id":"d1","dialogue":"c","summary":"d"}\n'
        response = client.post("/api/score", files={"pairs": ("dup.jsonl", body, "application/jsonl")})
        assert response.status_code == 422
        detail = response.json()["detail"]
        assert detail["code"] == "duplicate_id"
        assert "dup.jsonl" in detail["context"]

    def test_external_tags_alignment_error(self, client, pairs_upload):
        """Tags that do not match the token count are rejected."""
        tags = b'{"id":"f01","which":"dialogue","labels":["o"]}\n'
        files = dict(pairs_upload, tags=("tags.jsonl", tags, "application/jsonl"))
        response = client.post("/api/score", files=files)
        assert response.status_code == 422
        assert response.json()["detail"]["code"] == "tag_alignment"

    def test_upload_too_large(self, client, pairs_upload, monkeypatch):
        """Uploads over the configured limit are refused with 413."""
        monkeypatch.setattr(score_endpoint.settings, "max_upload_mb", 0)
        response = client.post("/api/score", files=pairs_upload)
        assert response.status_code == 413

    def test_non_utf8_upload(self, client):
        """Undecodable uploads are a client error."""
        response = client.post("/api/score", files={"pairs": ("bad.jsonl", b"\xff\xfe\x00", "application/jsonl")})
        assert response.status_code == 400


class TestFilterEndpoint:
    """POST /api/filter"""

    def test_train_like(self, client, pairs_upload):
        """Train-like filtering returns the kept ids and counts."""
        response = client.post("/api/filter", files=pairs_upload)
        assert response.status_code == 200
        body = response.json()
        assert body["report"]["kept"] == 6
        assert body["kept_ids"] == ["f01", "f02", "f03", "f04", "f05", "f06"]

    def test_test_like(self, client, pairs_upload):
        """Test-like filtering only drops zero-affect dialogues."""
        response = client.post("/api/filter", params={"mode": "test_like"}, files=pairs_upload)
        assert response.json()["report"]["kept"] == 9
