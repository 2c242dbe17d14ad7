import json
import threading
import urllib.error
import urllib.request

import numpy as np
import pytest

from fontsense.catalog import default_catalog
from fontsense.model import init_model, model_id
from fontsense.service import build_server


@pytest.fixture(scope="module")
def server_url(nrc_module):
    model = init_model(34, 8, 10, seed=21, featurizer_name="nrc")
    server = build_server(
        "127.0.0.1", 0, model, nrc_module, default_catalog(), model_id(model),
        cors_origin="http://localhost:5173",
    )
    thread = threading.Thread(target=server.serve_forever, daemon=True)
    thread.start()
    yield f"http://127.0.0.1:{server.server_address[1]}"
    server.shutdown()
    server.server_close()


@pytest.fixture(scope="module")
def nrc_module(tmp_path_factory):
    from fontsense.features import (
        EmotionLexicon, IntensityLexicon, NrcFeaturizer, SynonymTable, VadLexicon,
    )
    from fontsense.synthetic import write_lexicon_files

    directory = tmp_path_factory.mktemp("svc-lexicons")
    paths = write_lexicon_files(directory)
    return NrcFeaturizer(
        EmotionLexicon.load(paths["emotion"]),
        IntensityLexicon.load(paths["intensity"]),
        VadLexicon.load(paths["vad"]),
        SynonymTable.load(paths["synonyms"]),
    )


def post_json(url, payload, raw=None):
    data = raw if raw is not None else json.dumps(payload).encode()
    request = urllib.request.Request(
        url, data=data, headers={"Content-Type": "application/json"}, method="POST"
    )
    try:
        with urllib.request.urlopen(request, timeout=10) as response:
            return response.status, json.loads(response.read()), dict(response.headers)
    except urllib.error.HTTPError as exc:
        return exc.code, json.loads(exc.read()), dict(exc.headers)


def get_json(url):
    with urllib.request.urlopen(url, timeout=10) as response:
        return response.status, json.loads(response.read()), dict(response.headers)


class TestRecommendEndpoint:
    def test_valid_request(self, server_url):
        status, payload, headers = post_json(
            f"{server_url}/api/recommend", {"text": "happy launch party", "k": 3}
        )
        assert status == 200
        assert abs(sum(payload["distribution"]) - 1.0) < 1e-9
        assert len(payload["top"]) >= 3
        assert headers["Access-Control-Allow-Origin"] == "http://localhost:5173"
        scores = [t["score"] for t in payload["top"]]
        assert scores == sorted(scores, reverse=True)

    def test_default_k(self, server_url):
        status, payload, _ = post_json(f"{server_url}/api/recommend", {"text": "hello"})
        assert status == 200 and payload["k"] == 3

    def test_empty_text(self, server_url):
        status, payload, _ = post_json(f"{server_url}/api/recommend", {"text": "   "})
        assert status == 400 and payload["error"] == "empty_text"

    def test_bad_k(self, server_url):
        for k in (0, 11, "three", True):
            status, payload, _ = post_json(f"{server_url}/api/recommend", {"text": "hi", "k": k})
            assert status == 400 and payload["error"] == "bad_k"

    def test_oversize_body(self, server_url):
        big = json.dumps({"text": "x" * (17 * 1024)}).encode()
        status, payload, _ = post_json(f"{server_url}/api/recommend", None, raw=big)
        assert status == 413

    def test_malformed_json(self, server_url):
        status, payload, _ = post_json(f"{server_url}/api/recommend", None, raw=b"{nope")
        assert status == 400 and payload["error"] == "bad_json"

    def test_concurrent_identical_requests(self, server_url):
        results = []
        lock = threading.Lock()

        def hit():
            _, payload, _ = post_json(
                f"{server_url}/api/recommend", {"text": "grand wedding love", "k": 5}
            )
            with lock:
                results.append(payload)

        threads = [threading.Thread(target=hit) for _ in range(24)]
        for t in threads:
            t.start()
        for t in threads:
            t.join()
        assert len(results) == 24
        first = results[0]
        for other in results[1:]:
            assert other == first

    def test_tie_expansion_passthrough(self, server_url, nrc_module):
        # an untrained uniform model ties all ten fonts at k=3
        from fontsense.model import MlpModel
        from fontsense.service import recommend_response

        model = MlpModel(np.zeros((4, 34)), np.zeros(4), np.zeros((10, 4)), np.zeros(10), "nrc")
        response = recommend_response(
            model, nrc_module, default_catalog(), "anything", 3, "x"
        )
        assert len(response.top) == 10


class TestOtherEndpoints:
    def test_fonts(self, server_url):
        status, payload, _ = get_json(f"{server_url}/api/fonts")
        assert status == 200
        assert len(payload) == 10
        assert payload[0] == {"id": 0, "name": "Source Sans Pro", "css": "source-sans-pro"}

    def test_healthz(self, server_url):
        status, payload, _ = get_json(f"{server_url}/healthz")
        assert status == 200 and payload["status"] == "ok" and payload["model_id"]

    def test_unknown_route(self, server_url):
        try:
            with urllib.request.urlopen(f"{server_url}/nope", timeout=10) as response:
                status = response.status
        except urllib.error.HTTPError as exc:
            status = exc.code
        assert status == 404
