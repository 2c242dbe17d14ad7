"""Train a small model, serve it over HTTP, and query it like the UI does.

Exercises the full serving path: POST /api/recommend with tie-expanded
top-k results, GET /api/fonts, and GET /healthz, all against a live
threading server on an ephemeral port.
"""

import json
import tempfile
import threading
import urllib.request
from pathlib import Path

from fontsense.catalog import default_catalog
from fontsense.corpus import aggregate_corpus, filter_annotators, split_corpus
from fontsense.features import EmotionLexicon, IntensityLexicon, NrcFeaturizer, SynonymTable, VadLexicon
from fontsense.model import TrainConfig, model_id, train
from fontsense.service import build_server
from fontsense.synthetic import generate_raw_corpus, write_lexicon_files


def post(url, payload):
    request = urllib.request.Request(
        url, data=json.dumps(payload).encode(),
        headers={"Content-Type": "application/json"}, method="POST",
    )
    with urllib.request.urlopen(request, timeout=10) as response:
        return json.loads(response.read())


def main():
    workspace = Path(tempfile.mkdtemp(prefix="fontsense-demo-"))
    lex = write_lexicon_files(workspace / "lexicons")
    nrc = NrcFeaturizer(
        EmotionLexicon.load(lex["emotion"]),
        IntensityLexicon.load(lex["intensity"]),
        VadLexicon.load(lex["vad"]),
        SynonymTable.load(lex["synonyms"]),
    )

    print("training a small model...")
    labeled = aggregate_corpus(filter_annotators(generate_raw_corpus(n_instances=500, seed=7)))
    split = split_corpus(labeled, seed=42)
    result = train(split, nrc, TrainConfig(epochs=30, batch_size=16, hidden_dim=32, seeds=(0,)))
    model = result.best

    catalog = default_catalog()
    server = build_server("127.0.0.1", 0, model, nrc, catalog, model_id(model),
                          cors_origin="http://localhost:5173")
    base = f"http://127.0.0.1:{server.server_address[1]}"
    thread = threading.Thread(target=server.serve_forever, daemon=True)
    thread.start()
    print(f"serving on {base}\n")

    with urllib.request.urlopen(f"{base}/healthz", timeout=10) as response:
        print("healthz:", json.loads(response.read()))

    with urllib.request.urlopen(f"{base}/api/fonts", timeout=10) as response:
        fonts = json.loads(response.read())
    print(f"fonts: {len(fonts)} available, first = {fonts[0]}")

    for text in ("Happy Birthday Party!", "Annual shareholder meeting", "Forever in our hearts"):
        payload = post(f"{base}/api/recommend", {"text": text, "k": 3})
        tops = ", ".join(f"{t['name']} ({t['score']:.2f})" for t in payload["top"])
        print(f"\n  {text!r}\n    -> {tops}")
        print(f"    distribution sums to {sum(payload['distribution']):.6f}")

    server.shutdown()
    server.server_close()
    print("\nserver stopped")


if __name__ == "__main__":
    main()
