"""HTTP service exposing recommendations to the UI and other clients.

Endpoints:

* ``POST /api/recommend`` with ``{"text": "...", "k": 3}`` returns the full
  distribution plus the tie-expanded top-k fonts with scores.
* ``GET /api/fonts`` returns the font catalog.
* ``GET /healthz`` returns ``{"status": "ok", "model_id": "..."}``.

The model and catalog are immutable shared state, so the threading server
can answer concurrent requests without coordination; identical requests
always produce identical responses.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from http.server import BaseHTTPRequestHandler, ThreadingHTTPServer

from .catalog import FontCatalog
from .evaluation import topk_with_ties
from .model import MlpModel, predict

__all__ = ["RecommendResponse", "recommend_response", "build_server", "serve_forever"]

MAX_BODY_BYTES = 16 * 1024


@dataclass(frozen=True)
class RecommendResponse:
    distribution: list[float]
    top: list[dict]
    k: int
    model_id: str

    def to_dict(self) -> dict:
        return {
            "distribution": self.distribution,
            "top": self.top,
            "k": self.k,
            "model_id": self.model_id,
        }


def recommend_response(
    model: MlpModel, featurizer, catalog: FontCatalog, text: str, k: int, model_id: str
) -> RecommendResponse:
    """Predict and package the tie-expanded top-k recommendation."""
    dist = predict(model, text, featurizer)
    chosen = topk_with_ties(dist, k)
    ranked = sorted(chosen, key=lambda f: (-dist.probs[f], f))
    top = [
        {
            "font_id": f,
            "name": catalog.font(f).name,
            "css": catalog.font(f).css_family_hint,
            "score": float(dist.probs[f]),
        }
        for f in ranked
    ]
    return RecommendResponse(
        distribution=[float(p) for p in dist.probs],
        top=top,
        k=k,
        model_id=model_id,
    )


def build_server(
    host: str,
    port: int,
    model: MlpModel,
    featurizer,
    catalog: FontCatalog,
    model_id: str,
    cors_origin: str | None = None,
) -> ThreadingHTTPServer:
    handler = _make_handler(model, featurizer, catalog, model_id, cors_origin)
    return ThreadingHTTPServer((host, port), handler)


def serve_forever(server: ThreadingHTTPServer) -> None:
    try:
        server.serve_forever()
    except KeyboardInterrupt:
        pass
    finally:
        server.server_close()


def _make_handler(model, featurizer, catalog, model_id, cors_origin):
    catalog_payload = [
        {"id": f.font_id, "name": f.name, "css": f.css_family_hint} for f in catalog
    ]

    class Handler(BaseHTTPRequestHandler):
        server_version = "fontsense/0.1"

        def log_message(self, fmt, *args):  # keep request logs off stderr
            pass

        def _send_json(self, status: int, payload: dict | list) -> None:
            body = json.dumps(payload).encode("utf-8")
            self.send_response(status)
            self.send_header("Content-Type", "application/json")
            self.send_header("Content-Length", str(len(body)))
            if cors_origin:
                self.send_header("Access-Control-Allow-Origin", cors_origin)
            self.end_headers()
            self.wfile.write(body)

        def _send_error(self, status: int, code: str, message: str) -> None:
            self._send_json(status, {"error": code, "message": message})

        def do_OPTIONS(self):
            self.send_response(204)
            if cors_origin:
                self.send_header("Access-Control-Allow-Origin", cors_origin)
                self.send_header("Access-Control-Allow-Methods", "GET, POST, OPTIONS")
                self.send_header("Access-Control-Allow-Headers", "Content-Type")
            self.send_header("Content-Length", "0")
            self.end_headers()

        def do_GET(self):
            if self.path == "/healthz":
                self._send_json(200, {"status": "ok", "model_id": model_id})
            elif self.path == "/api/fonts":
                self._send_json(200, catalog_payload)
            else:
                self._send_error(404, "not_found", f"no route for {self.path}")

        def do_POST(self):
            if self.path != "/api/recommend":
                self._send_error(404, "not_found", f"no route for {self.path}")
                return
            length = int(self.headers.get("Content-Length") or 0)
            if length > MAX_BODY_BYTES:
                self._send_error(413, "body_too_large", f"body exceeds {MAX_BODY_BYTES} bytes")
                return
            try:
                payload = json.loads(self.rfile.read(length).decode("utf-8"))
            except (ValueError, UnicodeDecodeError):
                self._send_error(400, "bad_json", "request body is not valid JSON")
                return
            text = payload.get("text", "")
            if not isinstance(text, str) or not text.strip():
                self._send_error(400, "empty_text", "text must be a non-empty string")
                return
            k = payload.get("k", 3)
            if not isinstance(k, int) or isinstance(k, bool) or not 1 <= k <= len(catalog):
                self._send_error(400, "bad_k", f"k must be an integer in 1..{len(catalog)}")
                return
            response = recommend_response(model, featurizer, catalog, text, k, model_id)
            self._send_json(200, response.to_dict())

    return Handler
