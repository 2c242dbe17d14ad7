"""Two-dense-layer softmax predictor trained with KL divergence and Adam.

The network is x -> ReLU(W1 x + b1) -> softmax(W2 h + b2). Gradients are
analytic (softmax + KL collapses to p - t at the logits) and the optimizer
is standard Adam with bias correction. Training is single-threaded and
bit-reproducible for a fixed seed; a trained model is immutable thereafter.
"""

from __future__ import annotations

import hashlib
import json
import math
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .corpus import LabelDistribution, LabeledInstance, SplitCorpus
from .evaluation import f1_weighted_topk

__all__ = [
    "MlpModel",
    "AdamState",
    "TrainConfig",
    "EpochLog",
    "SeedRun",
    "TrainResult",
    "init_model",
    "forward",
    "forward_batch",
    "kl_div",
    "mean_kl",
    "backward",
    "backward_batch",
    "adam_step",
    "train",
    "predict",
    "featurize_corpus",
    "save_model",
    "load_model",
    "model_id",
]

_KL_CLAMP = 1e-12

CHECKPOINT_VERSION = 1


@dataclass
class MlpModel:
    W1: np.ndarray  # (hidden, in)
    b1: np.ndarray  # (hidden,)
    W2: np.ndarray  # (out, hidden)
    b2: np.ndarray  # (out,)
    featurizer_name: str = ""

    def __post_init__(self) -> None:
        for name, value in self.params().items():
            if not np.all(np.isfinite(value)):
                raise ValueError(f"parameter {name} contains non-finite values")
        if self.W1.shape[0] != self.b1.shape[0] or self.W2.shape[1] != self.W1.shape[0]:
            raise ValueError("inconsistent layer shapes")
        if self.W2.shape[0] != self.b2.shape[0]:
            raise ValueError("inconsistent output shapes")

    @property
    def in_dim(self) -> int:
        return self.W1.shape[1]

    @property
    def hidden_dim(self) -> int:
        return self.W1.shape[0]

    @property
    def out_dim(self) -> int:
        return self.W2.shape[0]

    def params(self) -> dict[str, np.ndarray]:
        return {"W1": self.W1, "b1": self.b1, "W2": self.W2, "b2": self.b2}

    def copy(self) -> "MlpModel":
        return MlpModel(
            self.W1.copy(), self.b1.copy(), self.W2.copy(), self.b2.copy(), self.featurizer_name
        )


@dataclass
class AdamState:
    lr: float
    beta1: float = 0.9
    beta2: float = 0.999
    epsilon: float = 1e-8
    t: int = 0
    m: dict[str, np.ndarray] = field(default_factory=dict)
    v: dict[str, np.ndarray] = field(default_factory=dict)

    @classmethod
    def for_params(cls, params: dict[str, np.ndarray], lr: float) -> "AdamState":
        return cls(
            lr=lr,
            m={k: np.zeros_like(p) for k, p in params.items()},
            v={k: np.zeros_like(p) for k, p in params.items()},
        )


@dataclass
class TrainConfig:
    lr: float = 1e-3
    epochs: int = 100
    batch_size: int = 16
    hidden_dim: int = 64
    seeds: tuple[int, ...] = (0, 1, 2, 3)
    selection_k: int = 1  # dev snapshots are picked by weighted F1 at this k
    shuffle: bool = True

    def __post_init__(self) -> None:
        if self.lr <= 0:
            raise ValueError(f"lr must be positive, got {self.lr}")
        if self.epochs < 1:
            raise ValueError(f"epochs must be >= 1, got {self.epochs}")
        if self.batch_size < 1:
            raise ValueError(f"batch_size must be >= 1, got {self.batch_size}")
        if not self.seeds:
            raise ValueError("at least one seed is required")


@dataclass(frozen=True)
class EpochLog:
    epoch: int
    train_kl: float
    dev_f1: float


@dataclass
class SeedRun:
    seed: int
    model: MlpModel
    log: list[EpochLog]
    best_epoch: int
    best_dev_f1: float


@dataclass
class TrainResult:
    runs: list[SeedRun]
    config: TrainConfig

    @property
    def best(self) -> MlpModel:
        """The served model: best dev score across seeds, earlier seed on ties."""
        best_run = self.runs[0]
        for run in self.runs[1:]:
            if run.best_dev_f1 > best_run.best_dev_f1:
                best_run = run
        return best_run.model

    @property
    def mean_best_dev_f1(self) -> float:
        return float(np.mean([r.best_dev_f1 for r in self.runs]))


def init_model(
    in_dim: int, hidden_dim: int, out_dim: int, seed: int, featurizer_name: str = ""
) -> MlpModel:
    """Glorot-uniform weights, zero biases, deterministic per seed."""
    if min(in_dim, hidden_dim, out_dim) < 1:
        raise ValueError(f"dims must be >= 1, got {(in_dim, hidden_dim, out_dim)}")
    rng = np.random.default_rng(seed)
    bound1 = math.sqrt(6.0 / (in_dim + hidden_dim))
    bound2 = math.sqrt(6.0 / (hidden_dim + out_dim))
    return MlpModel(
        W1=rng.uniform(-bound1, bound1, size=(hidden_dim, in_dim)),
        b1=np.zeros(hidden_dim),
        W2=rng.uniform(-bound2, bound2, size=(out_dim, hidden_dim)),
        b2=np.zeros(out_dim),
        featurizer_name=featurizer_name,
    )


def _softmax_rows(z: np.ndarray) -> np.ndarray:
    shifted = z - z.max(axis=-1, keepdims=True)
    exp = np.exp(shifted)
    return exp / exp.sum(axis=-1, keepdims=True)


def forward(model: MlpModel, x: np.ndarray) -> LabelDistribution:
    """Single-instance forward pass; always returns a valid distribution."""
    x = _as_vector(x, model.in_dim)
    hidden = np.maximum(model.W1 @ x + model.b1, 0.0)
    probs = _softmax_rows(model.W2 @ hidden + model.b2)
    return LabelDistribution(probs / probs.sum())


def forward_batch(model: MlpModel, X: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Row-wise forward pass; returns (hidden activations, probabilities)."""
    if X.ndim != 2 or X.shape[1] != model.in_dim:
        raise ValueError(f"expected (n, {model.in_dim}) inputs, got {X.shape}")
    hidden = np.maximum(X @ model.W1.T + model.b1, 0.0)
    return hidden, _softmax_rows(hidden @ model.W2.T + model.b2)


def kl_div(target, predicted) -> float:
    """sum t * ln(t / max(p, 1e-12)); zero-mass target entries contribute 0."""
    t = _dist_array(target)
    p = _dist_array(predicted)
    if t.shape != p.shape:
        raise ValueError(f"length mismatch: {t.shape} vs {p.shape}")
    mask = t > 0
    return float(np.sum(t[mask] * np.log(t[mask] / np.maximum(p[mask], _KL_CLAMP))))


def mean_kl(T: np.ndarray, P: np.ndarray) -> float:
    """Mean KL divergence over matched rows of targets and predictions."""
    ratios = np.where(T > 0, T / np.maximum(P, _KL_CLAMP), 1.0)
    return float(np.mean(np.sum(np.where(T > 0, T * np.log(ratios), 0.0), axis=1)))


def backward(model: MlpModel, x: np.ndarray, target) -> dict[str, np.ndarray]:
    """Analytic gradients of KL(target || softmax output) for one instance."""
    x = _as_vector(x, model.in_dim)
    t = _dist_array(target)
    if t.shape != (model.out_dim,):
        raise ValueError(f"expected target of length {model.out_dim}, got {t.shape}")
    pre = model.W1 @ x + model.b1
    hidden = np.maximum(pre, 0.0)
    probs = _softmax_rows(model.W2 @ hidden + model.b2)

    dz = probs - t
    d_hidden = model.W2.T @ dz
    d_hidden[pre <= 0] = 0.0
    return {
        "W1": np.outer(d_hidden, x),
        "b1": d_hidden,
        "W2": np.outer(dz, hidden),
        "b2": dz,
    }


def backward_batch(model: MlpModel, X: np.ndarray, T: np.ndarray) -> dict[str, np.ndarray]:
    """Gradients of the mean KL over a batch."""
    pre = X @ model.W1.T + model.b1
    hidden = np.maximum(pre, 0.0)
    probs = _softmax_rows(hidden @ model.W2.T + model.b2)

    dz = (probs - T) / X.shape[0]
    d_hidden = dz @ model.W2
    d_hidden[pre <= 0] = 0.0
    return {
        "W1": d_hidden.T @ X,
        "b1": d_hidden.sum(axis=0),
        "W2": dz.T @ hidden,
        "b2": dz.sum(axis=0),
    }


def adam_step(
    params: dict[str, np.ndarray], grads: dict[str, np.ndarray], state: AdamState
) -> tuple[dict[str, np.ndarray], AdamState]:
    """One Adam update with bias correction; params are updated in place."""
    state.t += 1
    for key, grad in grads.items():
        if params[key].shape != grad.shape:
            raise ValueError(f"shape mismatch for {key}: {params[key].shape} vs {grad.shape}")
        m = state.m[key]
        v = state.v[key]
        m *= state.beta1
        m += (1 - state.beta1) * grad
        v *= state.beta2
        v += (1 - state.beta2) * grad * grad
        m_hat = m / (1 - state.beta1**state.t)
        v_hat = v / (1 - state.beta2**state.t)
        params[key] -= state.lr * m_hat / (np.sqrt(v_hat) + state.epsilon)
    return params, state


def featurize_corpus(instances, featurizer) -> np.ndarray:
    """Stack per-instance feature vectors into an (n, dim) matrix."""
    if not instances:
        return np.zeros((0, featurizer.dim))
    return np.stack([featurizer.featurize_instance(inst).values for inst in instances])


def train(split: SplitCorpus, featurizer, config: TrainConfig | None = None) -> TrainResult:
    """Train one model per seed, snapshotting the best-on-dev epoch.

    Per epoch: shuffled mini-batches minimizing mean KL, then full-train KL
    and dev weighted F1 at ``config.selection_k`` are logged. The snapshot
    with the best dev score is kept (earlier epoch wins ties). With an empty
    dev set the final epoch's parameters are kept instead.
    """
    config = config or TrainConfig()
    if not split.train:
        raise ValueError("training set is empty")

    X_train = featurize_corpus(list(split.train), featurizer)
    T_train = np.stack([inst.target.probs for inst in split.train])
    if X_train.shape[1] != featurizer.dim:
        raise ValueError(f"featurizer dim {featurizer.dim} != feature width {X_train.shape[1]}")
    X_dev = featurize_corpus(list(split.dev), featurizer)
    dev_targets = [inst.target for inst in split.dev]

    n_fonts = T_train.shape[1]
    runs = []
    for seed in config.seeds:
        runs.append(
            _train_one_seed(
                X_train, T_train, X_dev, dev_targets, featurizer.name, n_fonts, seed, config
            )
        )
    return TrainResult(runs=runs, config=config)


def _train_one_seed(
    X_train, T_train, X_dev, dev_targets, featurizer_name, n_fonts, seed, config
) -> SeedRun:
    n = X_train.shape[0]
    model = init_model(X_train.shape[1], config.hidden_dim, n_fonts, seed, featurizer_name)
    params = model.params()
    state = AdamState.for_params(params, config.lr)
    rng = np.random.default_rng(seed)

    log: list[EpochLog] = []
    best_snapshot = model.copy()
    best_dev_f1 = -math.inf
    best_epoch = 0
    for epoch in range(1, config.epochs + 1):
        order = rng.permutation(n) if config.shuffle else np.arange(n)
        for start in range(0, n, config.batch_size):
            batch = order[start : start + config.batch_size]
            grads = backward_batch(model, X_train[batch], T_train[batch])
            adam_step(params, grads, state)

        _, P = forward_batch(model, X_train)
        train_kl = mean_kl(T_train, P)
        if len(dev_targets) > 0:
            _, P_dev = forward_batch(model, X_dev)
            dev_f1 = f1_weighted_topk(
                dev_targets, [LabelDistribution(row / row.sum()) for row in P_dev], config.selection_k
            )
            if dev_f1 > best_dev_f1:
                best_dev_f1 = dev_f1
                best_epoch = epoch
                best_snapshot = model.copy()
        else:
            dev_f1 = math.nan
            best_epoch = epoch
            best_snapshot = model.copy()
        log.append(EpochLog(epoch, train_kl, dev_f1))

    return SeedRun(
        seed=seed,
        model=best_snapshot,
        log=log,
        best_epoch=best_epoch,
        best_dev_f1=best_dev_f1 if best_dev_f1 > -math.inf else math.nan,
    )


def predict(model: MlpModel, text: str, featurizer) -> LabelDistribution:
    """Featurize then forward; featurizer must match the one trained with."""
    if model.featurizer_name and featurizer.name != model.featurizer_name:
        raise ValueError(
            f"model was trained with featurizer {model.featurizer_name!r}, got {featurizer.name!r}"
        )
    return forward(model, featurizer.featurize(text).values)


def save_model(model: MlpModel, path: str | Path) -> None:
    Path(path).write_text(_checkpoint_json(model), encoding="utf-8")


def load_model(path: str | Path) -> MlpModel:
    try:
        obj = json.loads(Path(path).read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise ValueError(f"{path}: not a valid checkpoint: {exc}") from exc
    version = obj.get("version")
    if version != CHECKPOINT_VERSION:
        raise ValueError(f"{path}: unsupported checkpoint version {version!r}")
    in_dim, hidden_dim, out_dim = obj["dims"]
    model = MlpModel(
        W1=np.array(obj["W1"], dtype=np.float64).reshape(hidden_dim, in_dim),
        b1=np.array(obj["b1"], dtype=np.float64),
        W2=np.array(obj["W2"], dtype=np.float64).reshape(out_dim, hidden_dim),
        b2=np.array(obj["b2"], dtype=np.float64),
        featurizer_name=str(obj.get("featurizer", "")),
    )
    return model


def model_id(model: MlpModel) -> str:
    """Stable short identifier derived from the checkpoint contents."""
    return hashlib.sha256(_checkpoint_json(model).encode("utf-8")).hexdigest()[:12]


def _checkpoint_json(model: MlpModel) -> str:
    payload = {
        "version": CHECKPOINT_VERSION,
        "featurizer": model.featurizer_name,
        "dims": [model.in_dim, model.hidden_dim, model.out_dim],
        "W1": model.W1.ravel().tolist(),
        "b1": model.b1.tolist(),
        "W2": model.W2.ravel().tolist(),
        "b2": model.b2.tolist(),
    }
    return json.dumps(payload)


def _as_vector(x, expected_dim: int) -> np.ndarray:
    values = getattr(x, "values", x)
    values = np.asarray(values, dtype=np.float64)
    if values.shape != (expected_dim,):
        raise ValueError(f"expected input of length {expected_dim}, got shape {values.shape}")
    return values


def _dist_array(dist) -> np.ndarray:
    probs = getattr(dist, "probs", dist)
    return np.asarray(probs, dtype=np.float64)
