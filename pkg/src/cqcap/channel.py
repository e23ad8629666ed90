"""Channel model: letters mapped to output states, with costs and file IO.

The channel file format is a JSON object

    {"dim": m, "states": [state, ...], "costs": [s_1, ..., s_n]}

where each state is an m x m row-major array of ``[re, im]`` pairs and
"costs" is optional (absent means all-zero, i.e. unconstrained).
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from functools import cached_property

import numpy as np

from .errors import BadParams, DimensionMismatch, LengthMismatch
from .hermitian import (
    LN2,
    DensityMatrix,
    relative_entropy_nats,
    trace_product,
    validate_density,
)

SIMPLEX_TOL = 1e-12


class InputDistribution:
    """Probability vector over the channel's input letters."""

    def __init__(self, probs):
        p = np.asarray(probs, dtype=float)
        if p.ndim != 1 or p.size < 1:
            raise ValueError(f"expected a non-empty 1-D vector, got shape {p.shape}")
        if not np.all(np.isfinite(p)):
            raise ValueError("probabilities must be finite")
        if float(p.min()) < 0.0:
            raise ValueError(f"negative probability {float(p.min())!r}")
        if abs(float(p.sum()) - 1.0) > SIMPLEX_TOL:
            raise ValueError(f"probabilities sum to {float(p.sum())!r}, not 1")
        p = p.copy()
        p.setflags(write=False)
        self._probs = p

    @property
    def probs(self) -> np.ndarray:
        return self._probs

    @classmethod
    def uniform(cls, n: int) -> "InputDistribution":
        return cls(np.full(n, 1.0 / n))

    @classmethod
    def point_mass(cls, n: int, letter: int) -> "InputDistribution":
        p = np.zeros(n)
        p[letter] = 1.0
        return cls(p)

    def __len__(self) -> int:
        return self._probs.size

    def __repr__(self) -> str:
        return f"InputDistribution({self._probs.tolist()})"


def as_probability_vector(p, n: int | None = None) -> np.ndarray:
    """Coerce an InputDistribution or array-like into a validated read-only vector."""
    arr = p.probs if isinstance(p, InputDistribution) else InputDistribution(p).probs
    if n is not None and arr.size != n:
        raise LengthMismatch(f"distribution length {arr.size} != alphabet size {n}")
    return arr


def kl_divergence_bits(p: np.ndarray, q: np.ndarray) -> float:
    """Classical relative entropy D(p||q) in bits; +inf on a support violation."""
    p = np.asarray(p, dtype=float)
    q = np.asarray(q, dtype=float)
    mask = p > 0
    if np.any(q[mask] <= 0):
        return math.inf
    val = float(np.sum(p[mask] * (np.log(p[mask]) - np.log(q[mask]))))
    return max(0.0, val) / LN2


class CqChannel:
    """Finite input alphabet mapped to output states, with a per-letter cost."""

    def __init__(self, states, costs=None):
        resolved = tuple(
            s if isinstance(s, DensityMatrix) else validate_density(s) for s in states
        )
        if not resolved:
            raise BadParams("a channel needs at least one state")
        dim = resolved[0].dim
        if any(s.dim != dim for s in resolved):
            raise DimensionMismatch("all states must share one dimension")
        n = len(resolved)
        if costs is None:
            cost_vec = np.zeros(n)
        else:
            cost_vec = np.asarray(costs, dtype=float)
            if cost_vec.shape != (n,):
                raise LengthMismatch(f"costs length {cost_vec.shape} != alphabet size {n}")
            if not np.all(np.isfinite(cost_vec)) or float(cost_vec.min()) < 0.0:
                raise BadParams("costs must be finite and nonnegative")
            cost_vec = cost_vec.copy()
        cost_vec.setflags(write=False)
        self._states = resolved
        self._costs = cost_vec

    @property
    def states(self) -> tuple[DensityMatrix, ...]:
        return self._states

    @property
    def costs(self) -> np.ndarray:
        return self._costs

    @property
    def size(self) -> int:
        return len(self._states)

    @property
    def dim(self) -> int:
        return self._states[0].dim

    @cached_property
    def state_stack(self) -> np.ndarray:
        """All state matrices as one (n, m, m) array."""
        stack = np.stack([s.matrix for s in self._states])
        stack.setflags(write=False)
        return stack

    @cached_property
    def letter_entropies_nats(self) -> np.ndarray:
        ent = np.array([s.entropy_nats for s in self._states])
        ent.setflags(write=False)
        return ent

    @cached_property
    def gram(self) -> np.ndarray:
        """Pairwise trace inner products Tr(rho_i rho_j); real symmetric PSD."""
        n = self.size
        g = np.empty((n, n))
        for i in range(n):
            for j in range(i, n):
                g[i, j] = g[j, i] = trace_product(
                    self._states[i].matrix, self._states[j].matrix
                ).real
        g.setflags(write=False)
        return g

    def __repr__(self) -> str:
        return f"CqChannel(n={self.size}, dim={self.dim})"


def output_state(ch: CqChannel, p) -> DensityMatrix:
    """Mixture sum_x p_x rho_x as a validated state."""
    w = as_probability_vector(p, ch.size)
    return validate_density(np.einsum("x,xij->ij", w, ch.state_stack))


def holevo_quantity(ch: CqChannel, p) -> float:
    """H(mixture) - sum_x p_x H(rho_x), in bits; always nonnegative."""
    w = as_probability_vector(p, ch.size)
    mixed = output_state(ch, w)
    chi_bits = max(0.0, (mixed.entropy_nats - float(w @ ch.letter_entropies_nats)) / LN2)
    if __debug__:
        ensemble = sum(
            w[x] * relative_entropy_nats(ch.states[x], mixed)
            for x in range(ch.size)
            if w[x] > 0
        ) / LN2
        assert abs(chi_bits - ensemble) <= 1e-8, "ensemble identity violated"
    return chi_bits


@dataclass(frozen=True)
class IndependenceReport:
    independent: bool
    min_gram_eigenvalue: float


def independence_check(ch: CqChannel) -> IndependenceReport:
    """Linear independence of the output states via the trace Gram matrix.

    The smallest Gram eigenvalue is reported alongside the flag; the
    geometric convergence rate improves monotonically with it.
    """
    smallest = float(np.linalg.eigvalsh(ch.gram)[0])
    threshold = 1e-10 * float(np.trace(ch.gram))
    return IndependenceReport(independent=smallest > threshold,
                              min_gram_eigenvalue=smallest)


def random_channel(n: int, m: int, seed, kind: str = "pure") -> CqChannel:
    """Deterministic random channel; kind in {pure, mixed, diagonal}."""
    if n < 1 or m < 1:
        raise BadParams(f"need n >= 1 and m >= 1, got n={n}, m={m}")
    rng = np.random.default_rng(seed)
    mats = []
    for _ in range(n):
        if kind == "pure":
            vec = rng.normal(size=m) + 1j * rng.normal(size=m)
            vec /= np.linalg.norm(vec)
            mats.append(np.outer(vec, vec.conj()))
        elif kind == "mixed":
            a = rng.normal(size=(m, m)) + 1j * rng.normal(size=(m, m))
            w = a @ a.conj().T
            mats.append(w / float(np.trace(w).real))
        elif kind == "diagonal":
            row = rng.random(m)
            mats.append(np.diag(row / row.sum()).astype(complex))
        else:
            raise BadParams(f"unknown ensemble kind {kind!r}")
    return CqChannel(mats)


def channel_to_jsonable(ch: CqChannel) -> dict:
    """Channel as a plain dict in the channel file schema."""
    states = [
        [[[float(entry.real), float(entry.imag)] for entry in row] for row in s.matrix]
        for s in ch.states
    ]
    doc = {"dim": ch.dim, "states": states}
    if np.any(ch.costs != 0.0):
        doc["costs"] = [float(c) for c in ch.costs]
    return doc


def channel_from_jsonable(doc) -> CqChannel:
    """Parse and validate the channel file schema; raises ValueError on bad shape."""
    if not isinstance(doc, dict):
        raise ValueError("channel document must be a JSON object")
    dim = doc.get("dim")
    if not isinstance(dim, int) or dim < 1:
        raise ValueError("'dim' must be a positive integer")
    raw_states = doc.get("states")
    if not isinstance(raw_states, list) or not raw_states:
        raise ValueError("'states' must be a non-empty list")
    mats = []
    for idx, state in enumerate(raw_states):
        arr = np.asarray(state, dtype=float)
        if arr.shape != (dim, dim, 2):
            raise ValueError(
                f"state {idx} must be a {dim}x{dim} array of [re, im] pairs, "
                f"got shape {arr.shape}"
            )
        mats.append(arr[..., 0] + 1j * arr[..., 1])
    costs = doc.get("costs")
    if costs is not None:
        if not isinstance(costs, list) or len(costs) != len(mats):
            raise ValueError("'costs' must list one number per state")
        costs = [float(c) for c in costs]
    return CqChannel(mats, costs)


def load_channel(path) -> CqChannel:
    with open(path, "r", encoding="utf-8") as fh:
        return channel_from_jsonable(json.load(fh))


def save_channel(ch: CqChannel, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(channel_to_jsonable(ch), fh)
        fh.write("\n")
