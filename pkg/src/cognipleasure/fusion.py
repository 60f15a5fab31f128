"""Forward-only cross-modal attention fusion on small synthetic matrices.

Per modality: temporal convolution to a shared width ``d``, sinusoidal
positions, cross-attention with queries from this modality and keys/values
from the others, residual concatenation of original and attended streams
(width ``2d`` = ``d_model``), one pre-norm encoder block over a prepended CLS
token, and finally a linear head over the concatenated CLS states.

Row-vector convention throughout: a sequence is a ``T x width`` array and a
projection is ``x @ W``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Mapping, Sequence

import numpy as np

MODALITY_ORDER = ("a", "v", "t")
N_OUTPUTS = 7
LOSS_KEYS = ("a", "v", "t", "f")


@dataclass(frozen=True)
class ModalitySequence:
    modality: str
    features: np.ndarray
    mask: np.ndarray | None = None

    def __post_init__(self) -> None:
        if self.modality not in MODALITY_ORDER:
            raise ValueError(f"unknown modality {self.modality!r}")
        x = np.atleast_2d(np.asarray(self.features, dtype=float))
        if x.shape[0] < 1:
            raise ValueError("a sequence needs at least one time step")
        mask = np.ones(x.shape[0], dtype=bool) if self.mask is None else np.asarray(self.mask, dtype=bool)
        if mask.shape != (x.shape[0],):
            raise ValueError("mask length must equal the sequence length")
        if not mask.any():
            raise ValueError("mask must keep at least one time step")
        object.__setattr__(self, "features", x)
        object.__setattr__(self, "mask", mask)

    @property
    def length(self) -> int:
        return self.features.shape[0]


@dataclass
class Linear:
    weight: np.ndarray  # (in, out)
    bias: np.ndarray  # (out,)

    def __call__(self, x: np.ndarray) -> np.ndarray:
        return x @ self.weight + self.bias


@dataclass
class EncoderParams:
    n_heads: int
    w_q: np.ndarray
    w_k: np.ndarray
    w_v: np.ndarray
    w_o: np.ndarray
    ff1: Linear
    ff2: Linear
    cls: np.ndarray
    ln1: tuple[np.ndarray, np.ndarray]
    ln2: tuple[np.ndarray, np.ndarray]

    @property
    def d_model(self) -> int:
        return self.w_q.shape[0]

    def __post_init__(self) -> None:
        if self.d_model % self.n_heads:
            raise ValueError(f"d_model={self.d_model} is not divisible by {self.n_heads} heads")


@dataclass
class FusionParams:
    d: int
    conv: dict[str, np.ndarray]  # modality -> (k_m, d_in, d)
    w_q: np.ndarray
    w_k: np.ndarray
    w_v: np.ndarray
    encoders: dict[str, EncoderParams]
    head: Linear
    unimodal_heads: dict[str, Linear]
    alpha: dict[str, float] = field(default_factory=lambda: dict.fromkeys(LOSS_KEYS, 1.0))

    def __post_init__(self) -> None:
        if any(a < 0 for a in self.alpha.values()) or not any(a > 0 for a in self.alpha.values()):
            raise ValueError("loss weights must be non-negative and not all zero")

    @property
    def modalities(self) -> tuple[str, ...]:
        return tuple(m for m in MODALITY_ORDER if m in self.conv)

    @property
    def d_model(self) -> int:
        return 2 * self.d


def init_params(
    rng: np.random.Generator,
    d_in: Mapping[str, int],
    d: int = 8,
    *,
    n_heads: int = 4,
    ff_width: int | None = None,
    kernel_sizes: Mapping[str, int] | None = None,
    alpha: Mapping[str, float] | None = None,
) -> FusionParams:
    """Random small-scale parameters for the modalities present in ``d_in``."""
    d_model = 2 * d
    ff_width = ff_width or 2 * d_model
    kernel_sizes = kernel_sizes or {}

    def mat(rows, cols):
        return rng.normal(0.0, 1.0 / np.sqrt(rows), size=(rows, cols))

    def encoder():
        return EncoderParams(
            n_heads=n_heads,
            w_q=mat(d_model, d_model),
            w_k=mat(d_model, d_model),
            w_v=mat(d_model, d_model),
            w_o=mat(d_model, d_model),
            ff1=Linear(mat(d_model, ff_width), np.zeros(ff_width)),
            ff2=Linear(mat(ff_width, d_model), np.zeros(d_model)),
            cls=rng.normal(0.0, 0.02, size=d_model),
            ln1=(np.ones(d_model), np.zeros(d_model)),
            ln2=(np.ones(d_model), np.zeros(d_model)),
        )

    mods = [m for m in MODALITY_ORDER if m in d_in]
    conv = {}
    for m in mods:
        k = kernel_sizes.get(m, 3)
        conv[m] = rng.normal(0.0, 1.0 / np.sqrt(k * d_in[m]), size=(k, d_in[m], d))
    return FusionParams(
        d=d,
        conv=conv,
        w_q=mat(d, d),
        w_k=mat(d, d),
        w_v=mat(d, d),
        encoders={m: encoder() for m in mods},
        head=Linear(mat(len(mods) * d_model, N_OUTPUTS), np.zeros(N_OUTPUTS)),
        unimodal_heads={m: Linear(mat(d_model, N_OUTPUTS), np.zeros(N_OUTPUTS)) for m in mods},
        alpha=dict(alpha) if alpha is not None else dict.fromkeys(LOSS_KEYS, 1.0),
    )


def temporal_conv1d(seq: np.ndarray, kernel: np.ndarray, bias: np.ndarray | None = None) -> np.ndarray:
    """Same-length 1-D convolution along time.

    ``kernel`` has shape ``(k, d_in, d)`` with odd ``k``; the sequence is
    padded symmetrically by mirroring its edges.
    """
    seq = np.atleast_2d(np.asarray(seq, dtype=float))
    kernel = np.asarray(kernel, dtype=float)
    k = kernel.shape[0]
    if k % 2 == 0:
        raise ValueError("kernel size must be odd")
    if kernel.shape[1] != seq.shape[1]:
        raise ValueError(f"kernel expects width {kernel.shape[1]}, sequence has {seq.shape[1]}")
    half = k // 2
    padded = np.pad(seq, ((half, half), (0, 0)), mode="symmetric")
    T = seq.shape[0]
    out = sum(padded[j:j + T] @ kernel[j] for j in range(k))
    return out + bias if bias is not None else out


def sinusoidal_pe(T: int, d: int) -> np.ndarray:
    """Sine on even columns, cosine on odd columns, frequency 10000^(-2i/d)."""
    if d % 2:
        raise ValueError("positional encoding width must be even")
    pos = np.arange(T, dtype=float)[:, None]
    inv_freq = 10000.0 ** (-np.arange(0, d, 2, dtype=float) / d)
    pe = np.empty((T, d))
    pe[:, 0::2] = np.sin(pos * inv_freq)
    pe[:, 1::2] = np.cos(pos * inv_freq)
    return pe


def masked_softmax(scores: np.ndarray, key_mask: np.ndarray | None = None) -> np.ndarray:
    """Row softmax with masked key columns given exactly zero weight."""
    scores = np.asarray(scores, dtype=float)
    if key_mask is not None:
        key_mask = np.asarray(key_mask, dtype=bool)
        if not key_mask.any():
            raise ValueError("at least one key must be unmasked")
        scores = np.where(key_mask, scores, -np.inf)
    shifted = scores - scores.max(axis=-1, keepdims=True)
    e = np.exp(shifted)
    return e / e.sum(axis=-1, keepdims=True)


def scaled_dot_attention(q, k, v, key_mask=None) -> tuple[np.ndarray, np.ndarray]:
    weights = masked_softmax(q @ k.T / np.sqrt(k.shape[-1]), key_mask)
    return weights @ v, weights


def cross_attention(
    q_src: np.ndarray,
    kv_src: np.ndarray,
    params: FusionParams,
    kv_mask: np.ndarray | None = None,
) -> tuple[np.ndarray, np.ndarray]:
    """Queries from one modality, keys and values from another; returns (output, weights)."""
    return scaled_dot_attention(q_src @ params.w_q, kv_src @ params.w_k, kv_src @ params.w_v, kv_mask)


def multi_head_attention(x: np.ndarray, mask: np.ndarray | None, enc: EncoderParams):
    """Unpositioned multi-head self-attention; returns (output, per-head weights)."""
    h = enc.n_heads
    dh = enc.d_model // h
    q, k, v = x @ enc.w_q, x @ enc.w_k, x @ enc.w_v
    heads, weights = [], []
    for i in range(h):
        cols = slice(i * dh, (i + 1) * dh)
        out, w = scaled_dot_attention(q[:, cols], k[:, cols], v[:, cols], mask)
        heads.append(out)
        weights.append(w)
    return np.concatenate(heads, axis=1) @ enc.w_o, np.stack(weights)


def layer_norm(x: np.ndarray, gamma: np.ndarray, beta: np.ndarray, eps: float = 1e-5) -> np.ndarray:
    mu = x.mean(axis=-1, keepdims=True)
    var = x.var(axis=-1, keepdims=True)
    return (x - mu) / np.sqrt(var + eps) * gamma + beta


def encoder_block(x: np.ndarray, mask: np.ndarray | None, enc: EncoderParams) -> np.ndarray:
    """Pre-norm block: self-attention then ReLU feed-forward, each with a residual."""
    attn, _ = multi_head_attention(layer_norm(x, *enc.ln1), mask, enc)
    x = x + attn
    return x + enc.ff2(np.maximum(enc.ff1(layer_norm(x, *enc.ln2)), 0.0))


def residual_concat(original: np.ndarray, attended: np.ndarray) -> np.ndarray:
    if original.shape[0] != attended.shape[0]:
        raise ValueError("streams must share the sequence length")
    return np.concatenate([original, attended], axis=1)


def encode_with_cls(concat_seq: np.ndarray, mask: np.ndarray | None, enc: EncoderParams) -> np.ndarray:
    """Prepend the CLS token, run one encoder block, return the CLS row."""
    concat_seq = np.atleast_2d(concat_seq)
    if concat_seq.shape[1] != enc.d_model:
        raise ValueError(f"expected width {enc.d_model}, got {concat_seq.shape[1]}")
    mask = np.ones(concat_seq.shape[0], dtype=bool) if mask is None else np.asarray(mask, dtype=bool)
    x = np.vstack([enc.cls, concat_seq])
    full_mask = np.concatenate([[True], mask])
    return encoder_block(x, full_mask, enc)[0]


def fuse_and_head(cls_vectors: Sequence[np.ndarray], head: Linear) -> np.ndarray:
    """Concatenate CLS states in modality order and apply the output head."""
    fused = np.concatenate([np.asarray(c, dtype=float) for c in cls_vectors])
    if fused.shape[0] != head.weight.shape[0]:
        raise ValueError(f"head expects fused width {head.weight.shape[0]}, got {fused.shape[0]}")
    return head(fused)


def mae(pred, target) -> float:
    return float(np.mean(np.abs(np.asarray(pred, dtype=float) - np.asarray(target, dtype=float))))


def multitask_loss(
    unimodal_preds: Mapping[str, np.ndarray],
    fused_pred: np.ndarray,
    target: np.ndarray,
    alpha: Mapping[str, float],
) -> float:
    """Weighted sum of mean absolute errors of each unimodal head and the fused head."""
    preds = dict(unimodal_preds)
    preds["f"] = fused_pred
    if any(a < 0 for a in alpha.values()) or not any(a > 0 for a in alpha.values()):
        raise ValueError("loss weights must be non-negative and not all zero")
    return float(sum(alpha.get(key, 0.0) * mae(pred, target) for key, pred in preds.items()))


@dataclass
class FusionOutput:
    fused: np.ndarray
    unimodal: dict[str, np.ndarray]
    cls: dict[str, np.ndarray]
    cross_weights: dict[str, np.ndarray]
    widths: dict[str, int]


def forward(sequences: Mapping[str, ModalitySequence], params: FusionParams) -> FusionOutput:
    """Full forward pass; each modality attends over the concatenation of all others."""
    mods = [m for m in params.modalities if m in sequences]
    if len(mods) < 2:
        raise ValueError("cross-modal fusion needs at least two modalities")
    if set(sequences) - set(mods):
        raise ValueError(f"no parameters for modalities {sorted(set(sequences) - set(mods))}")

    streams, masks = {}, {}
    for m in mods:
        seq = sequences[m]
        u = temporal_conv1d(seq.features, params.conv[m])
        streams[m] = u + sinusoidal_pe(seq.length, params.d)
        masks[m] = seq.mask

    cls, uni, weights = {}, {}, {}
    for m in mods:
        others = [o for o in mods if o != m]
        kv = np.vstack([streams[o] for o in others])
        kv_mask = np.concatenate([masks[o] for o in others])
        attended, w = cross_attention(streams[m], kv, params, kv_mask)
        weights[m] = w
        cls[m] = encode_with_cls(residual_concat(streams[m], attended), masks[m], params.encoders[m])
        uni[m] = params.unimodal_heads[m](cls[m])

    fused = fuse_and_head([cls[m] for m in mods], params.head)
    return FusionOutput(
        fused=fused,
        unimodal=uni,
        cls=cls,
        cross_weights=weights,
        widths={"d": params.d, "d_model": params.d_model, "fused": len(mods) * params.d_model},
    )
