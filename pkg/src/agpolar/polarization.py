"""Length-N polarization: G_n = B_n G^(x n), SC machinery, Z estimation.

Index conventions follow the monomial picture: the multi-index k with
l-ary digits (k_n, ..., k_1) identifies the monomial
M_{k_1}(X_1) ... M_{k_n}(X_n) and the row l^n - k of G_n, hence the
synthetic channel W_n^{(l^n - k)}.  Channel positions are 1-based where
the literature is; u-vectors are 0-based numpy arrays.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

import numpy as np

from . import linalg
from .channel import DMC, sof_witnesses
from .errors import LengthMismatch, NotSymmetric, OutOfRange, PreconditionViolated, TooLarge
from .kernel import Kernel

_BN_CAP = 1 << 20
_GN_CAP = 1024
_STAGE_CAP = 1 << 16


# -- multi-indices ------------------------------------------------------


@dataclass(frozen=True)
class MultiIndex:
    """Digit expansion of a row/monomial index at a given level count.

    digits[j] is the factor index on variable X_{j+1}; the value is
    sum(digits[j] * l^j).
    """

    digits: tuple
    l: int

    @property
    def n(self) -> int:
        return len(self.digits)

    @property
    def value(self) -> int:
        v = 0
        for j, d in enumerate(self.digits):
            v += d * self.l**j
        return v

    @classmethod
    def from_value(cls, value: int, l: int, n: int) -> "MultiIndex":
        digits = []
        v = value
        for _ in range(n):
            digits.append(v % l)
            v //= l
        if v:
            raise OutOfRange(f"value {value} needs more than {n} digits base {l}")
        return cls(tuple(digits), l)

    def row(self) -> int:
        """1-based row of G_n carrying this monomial."""
        return self.l**self.n - self.value


def multiindex_weight(mi: MultiIndex, hstar) -> int:
    return sum(hstar[d] for d in mi.digits)


# -- structural permutations and matrices -------------------------------


def bn_permutation(l: int, n: int) -> np.ndarray:
    """Digit-reversal permutation: perm[i] has the reversed l-ary digits."""
    if l < 2 or n < 1:
        raise OutOfRange("need l >= 2, n >= 1")
    total = l**n
    if total > _BN_CAP:
        raise TooLarge(f"l^n = {total} exceeds cap")
    perm = np.zeros(total, dtype=np.int64)
    for i in range(total):
        v, r = i, 0
        for _ in range(n):
            r = r * l + v % l
            v //= l
        perm[i] = r
    return perm


def gn_matrix(k: Kernel, n: int) -> np.ndarray:
    """Materialized G_n = B_n G^(x n) (index matrix)."""
    total = k.l**n
    if total > _GN_CAP:
        raise TooLarge(f"l^n = {total} exceeds materialization cap")
    field = k.field
    m = np.array([[1]], dtype=np.int32)
    for _ in range(n):
        # Kronecker step over field indices
        l1 = m.shape[0]
        out = np.zeros((l1 * k.l, l1 * k.l), dtype=np.int32)
        for i in range(l1 * k.l):
            for j in range(l1 * k.l):
                out[i, j] = field.mul(
                    int(m[i // k.l, j // k.l]), int(k.matrix[i % k.l, j % k.l])
                )
        m = out
    perm = bn_permutation(k.l, n) if n >= 1 else np.array([0])
    return m[perm]


def row_monomial(k: Kernel, n: int, row: int) -> MultiIndex:
    """The multi-index labeling a 1-based row of G_n."""
    total = k.l**n
    if not 1 <= row <= total:
        raise OutOfRange(f"row {row} out of range 1..{total}")
    return MultiIndex.from_value(total - row, k.l, n)


# -- encoding -----------------------------------------------------------


def encode(k: Kernel, n: int, u: np.ndarray) -> np.ndarray:
    """u G_n via the n-stage butterfly (G_n is never materialized)."""
    u = np.asarray(u, dtype=np.int32)
    total = k.l**n
    if u.shape != (total,):
        raise LengthMismatch(f"expected length {total}")
    return encode_many(k, n, u[None, :])[0]


def encode_many(k: Kernel, n: int, u: np.ndarray) -> np.ndarray:
    """Row-wise encoding of a batch of input vectors."""
    u = np.asarray(u, dtype=np.int32)
    total = k.l**n
    if u.ndim != 2 or u.shape[1] != total:
        raise LengthMismatch(f"expected shape (*, {total})")
    return _encode_rec(k, n, u)


def _encode_rec(k: Kernel, n: int, u: np.ndarray) -> np.ndarray:
    if n == 0:
        return u
    field, l = k.field, k.l
    blocks = u.reshape(u.shape[0], -1, l)  # consecutive l-blocks of u
    # per-block kernel application: stream t gets (block G)[t]
    streams = np.zeros_like(blocks)
    for r in range(l):
        streams = field.add_table[
            streams,
            field.mul_table[blocks[:, :, r][:, :, None], k.matrix[r][None, None, :]],
        ]
    return np.concatenate(
        [_encode_rec(k, n - 1, streams[:, :, t].copy()) for t in range(l)], axis=1
    )


# -- successive cancellation --------------------------------------------


class _SCNode:
    """One SC recursion level, vectorized over a batch of received words.

    Consumes per-sample decisions and yields per-sample likelihood
    vectors.  Likelihoods are normalized at every level; SC decisions
    are invariant under per-node positive scaling, and normalization
    keeps the l-fold products representable at deeper recursion levels.
    """

    def __init__(self, k: Kernel, level: int, y, w: DMC, onehot):
        self.k = k
        self.level = level
        self.onehot = onehot
        if level == 0:
            like = w.trans[:, y[:, 0]].T.astype(float)  # (s, q)
            self.like = like / np.maximum(like.sum(axis=1, keepdims=True), 1e-300)
        else:
            block = y.shape[1] // k.l
            self.children = [
                _SCNode(k, level - 1, y[:, t * block : (t + 1) * block], w, onehot)
                for t in range(k.l)
            ]
            self.stack = None
            self.decisions = []

    def next_likelihood(self) -> np.ndarray:
        if self.level == 0:
            return self.like
        k = self.k
        q, l = k.field.q, k.l
        if self.stack is None:
            kid = [c.next_likelihood() for c in self.children]  # each (s, q)
            s = kid[0].shape[0]
            logk = np.empty((s, l * q))
            for t in range(l):
                np.log(np.maximum(kid[t], 1e-300), out=logk[:, t * q : (t + 1) * q])
            np.maximum(logk, -700.0, out=logk)
            with np.errstate(under="ignore"):
                wt = (logk @ self.onehot.T.astype(float)).astype(np.float32)
                np.exp(wt, out=wt)  # (s, q^l)
            # partial suffix sums: stack[j] has axes (s, u_1 .. u_j)
            self.stack = [None] * (l + 1)
            self.stack[l] = wt.reshape((s,) + (q,) * l)
            for j in range(l - 1, 0, -1):
                self.stack[j] = self.stack[j + 1].sum(axis=-1)
            self.decisions = []
        j = len(self.decisions)  # 0-based inner position
        arr = self.stack[j + 1]
        s = arr.shape[0]
        out = arr[(np.arange(s),) + tuple(self.decisions)].astype(float)  # (s, q)
        return out / np.maximum(out.sum(axis=1, keepdims=True), 1e-300)

    def push_decision(self, v: np.ndarray):
        if self.level == 0:
            return
        self.decisions.append(np.asarray(v, dtype=np.int32))
        if len(self.decisions) == self.k.l:
            field = self.k.field
            x = np.zeros((len(v), self.k.l), dtype=np.int32)
            for r, d in enumerate(self.decisions):
                x = field.add_table[
                    x, field.mul_table[d[:, None], self.k.matrix[r][None, :]]
                ]
            for t, c in enumerate(self.children):
                c.push_decision(x[:, t])
            self.stack = None


def decode_sc_batch(k: Kernel, n: int, w: DMC, y: np.ndarray, frozen) -> np.ndarray:
    """SC-decode a batch of received words (one per row of y).

    ``frozen`` maps 0-based u-positions to a field element index (scalar
    per position).  Free positions take the likelihood argmax, ties
    going to the canonically smaller element.
    """
    if k.field.q**k.l > _STAGE_CAP:
        raise TooLarge("q^l exceeds SC stage cap")
    y = np.asarray(y)
    total = k.l**n
    if y.ndim != 2 or y.shape[1] != total:
        raise LengthMismatch(f"expected received shape (*, {total})")
    s = y.shape[0]
    frozen = {int(p): int(v) for p, v in frozen.items()}
    root = _SCNode(k, n, y, w, _genie_tables(k, w))
    u_hat = np.zeros((s, total), dtype=np.int32)
    for pos in range(total):
        like = root.next_likelihood()
        if pos in frozen:
            u_hat[:, pos] = frozen[pos]
        else:
            u_hat[:, pos] = np.argmax(like, axis=1)  # first maximum wins ties
        root.push_decision(u_hat[:, pos])
    return u_hat


def decode_sc(k: Kernel, n: int, w: DMC, y, frozen) -> np.ndarray:
    """SC estimate of u from a single received word (see decode_sc_batch)."""
    y = np.asarray(y)
    total = k.l**n
    if y.shape != (total,):
        raise LengthMismatch(f"expected received length {total}")
    return decode_sc_batch(k, n, w, y[None, :], frozen)[0]


# -- Monte Carlo Bhattacharyya estimation -------------------------------


@dataclass
class ZEstimates:
    """Genie-aided estimates of Z(W_n^{(i)}), one per channel position."""

    l: int
    n: int
    est: np.ndarray  # indexed by 0-based channel position i-1
    se: np.ndarray
    samples: int
    seed: int

    def by_monomial(self, k_value: int) -> float:
        return float(self.est[self.l**self.n - k_value - 1])

    def se_by_monomial(self, k_value: int) -> float:
        return float(self.se[self.l**self.n - k_value - 1])

    def serialize(self) -> dict:
        return {
            "samples": self.samples,
            "seed": self.seed,
            "z": [
                {"index": i + 1, "est": float(e), "se": float(s)}
                for i, (e, s) in enumerate(zip(self.est, self.se))
            ],
        }


def _genie_tables(k: Kernel, w: DMC):
    """Codewords of every input vector, one-hot encoded for the matmul.

    Returns a (q^l, l*q) float32 0/1 matrix C with C[u, t*q + x] = 1 iff
    symbol t of the codeword of u equals x.
    """
    field, q, l = k.field, k.field.q, k.l
    us = np.array(list(itertools.product(range(q), repeat=l)), dtype=np.int64)
    cw = np.zeros((q**l, l), dtype=np.int64)
    for r in range(l):
        cw = field.add_table[cw, field.mul_table[us[:, r][:, None], k.matrix[r][None, :]]]
    onehot = np.zeros((q**l, l * q), dtype=np.float32)
    rows = np.arange(q**l)
    for t in range(l):
        onehot[rows, t * q + cw[:, t]] = 1.0
    return onehot


def _genie_level(k: Kernel, w: DMC, y: np.ndarray, level: int, cw) -> np.ndarray:
    """Likelihood vectors for all channel positions of one level.

    y: (S, l^level) outputs.  Returns (S, l^level, q), position axis in
    channel order (position i-1), under all-zero genie decisions.
    """
    q, l = k.field.q, k.l
    s = y.shape[0]
    if level == 0:
        return w.trans[:, y[:, 0]].T.reshape(s, 1, q)
    block = y.shape[1] // l
    kids = [
        _genie_level(k, w, y[:, t * block : (t + 1) * block], level - 1, cw)
        for t in range(l)
    ]
    n_out = l**level
    out = np.empty((s, n_out, q))
    logk = np.empty((s, l * q), dtype=np.float32)
    for i in range(l ** (level - 1)):
        # weight of every u-vector: prod over copies t of kid_t likelihoods
        # at the codeword symbols, via a log-space one-hot matmul
        for t in range(l):
            np.log(
                np.maximum(kids[t][:, i, :], 1e-300), out=logk[:, t * q : (t + 1) * q]
            )
        np.maximum(logk, -700.0, out=logk)
        with np.errstate(under="ignore"):
            wt = np.exp(logk @ cw.T)  # (s, q^l)
        cube = wt.reshape((s,) + (q,) * l)
        arr = cube
        for j in range(l, 0, -1):
            # arr has axes (s, u_1..u_j); genie prefix is all zeros
            sel = arr[(slice(None),) + (0,) * (j - 1) + (slice(None),)]
            out[:, i * l + (j - 1), :] = sel
            arr = arr.sum(axis=-1)
        # positions within the group were filled j descending; reorder
        # is unnecessary: inner position j-1 is channel (i*l + j) - 1
    # normalize per position: likelihood ratios are scale-invariant and
    # deeper levels stay representable
    out /= np.maximum(out.max(axis=2, keepdims=True), 1e-300)
    return out


def mc_estimate_z(k: Kernel, n: int, w: DMC, samples: int, seed: int,
                  batch: int = 512) -> ZEstimates:
    """Genie-aided Monte Carlo estimate of all Z(W_n^{(i)}).

    Requires an SOF channel (all-zero-word sampling is then lossless).
    Deterministic given (seed, samples, batch); the batch size only
    perturbs floating-point summation order.
    """
    if k.field.q**k.l > _STAGE_CAP:
        raise TooLarge("q^l exceeds the marginalization cap")
    if sof_witnesses(w) is None:
        raise NotSymmetric("channel carries no SOF witness")
    q = k.field.q
    total = k.l**n
    rng = np.random.default_rng(seed)
    cw = _genie_tables(k, w)
    # all outputs drawn upfront so the batch size cannot affect results
    y_all = rng.choice(w.num_outputs, size=(samples, total), p=w.trans[0])
    sums = np.zeros(total)
    sqs = np.zeros(total)
    for start in range(0, samples, batch):
        y = y_all[start : start + batch]
        likes = _genie_level(k, w, y, n, cw)  # (b, total, q)
        l0 = likes[:, :, 0]
        with np.errstate(divide="ignore", invalid="ignore"):
            ratios = np.where(
                l0[:, :, None] > 0, likes / np.maximum(l0[:, :, None], 1e-300), 1.0
            )
        z = np.sqrt(ratios[:, :, 1:]).sum(axis=2) / (q - 1)
        sums += z.sum(axis=0)
        sqs += (z**2).sum(axis=0)
    mean = sums / samples
    var = np.maximum(sqs / samples - mean**2, 0.0)
    se = np.sqrt(var / samples)
    est = np.clip(mean, 0.0, 1.0)
    return ZEstimates(k.l, n, est, se, samples, seed)


# -- information sets ---------------------------------------------------


def select_info_set(z: ZEstimates, dim: int, hstar=None):
    """The dim monomial indices of smallest estimated Z.

    Ties break toward the larger monomial: bigger pole-order weight
    first, then reverse-lexicographic on the digit tuple.  Returns a
    MonomialIndexSet.
    """
    from .codeset import MonomialIndexSet

    total = z.l**z.n
    if not 0 <= dim <= total:
        raise OutOfRange(f"dim {dim} out of range")
    keys = []
    for k_value in range(total):
        mi = MultiIndex.from_value(k_value, z.l, z.n)
        wgt = multiindex_weight(mi, hstar) if hstar is not None else k_value
        revlex = tuple(reversed(mi.digits))
        keys.append((z.by_monomial(k_value), -wgt, tuple(-d for d in revlex), k_value))
    keys.sort()
    chosen = [k[-1] for k in keys[:dim]]
    return MonomialIndexSet.from_values(z.n, z.l, chosen)


# -- theoretical degradation order --------------------------------------


def theoretical_order(k: Kernel, curve, n: int) -> dict:
    """Degradation DAG over multi-index values, transitively closed.

    An edge i -> j asserts W_n^{(l^n - i)} is a degradation of
    W_n^{(l^n - j)}, so Z_i >= Z_j and membership of i in an information
    set forces membership of j.  Only moves licensed by the degradation
    results are asserted: per-digit generator subtraction and ring
    divisibility (both under the pole-order < l guard) and moving a
    digit's monomial to a free lower variable position.
    """
    if curve.l < 2 * curve.genus:
        raise PreconditionViolated("requires l >= 2g")
    l = curve.l
    hstar = curve.hstar
    hpos = {m: i for i, m in enumerate(hstar)}
    total = l**n

    digit_moves = [set() for _ in range(l)]
    for b in range(l):
        if hstar[b] < l:
            for a in curve.gen_poles:
                tgt = hstar[b] - a
                if tgt in hpos:
                    digit_moves[b].add(hpos[tgt])
            for bp in range(l):
                if bp != b and curve.divides(bp, b):
                    digit_moves[b].add(bp)

    adj = {v: set() for v in range(total)}
    for v in range(total):
        digits = list(MultiIndex.from_value(v, l, n).digits)
        for pos in range(n):
            for bp in digit_moves[digits[pos]]:
                nd = digits.copy()
                nd[pos] = bp
                adj[v].add(MultiIndex(tuple(nd), l).value)
            # move a nontrivial factor to a free lower variable position
            if digits[pos] != 0:
                for lower in range(pos):
                    if digits[lower] == 0:
                        nd = digits.copy()
                        nd[lower], nd[pos] = nd[pos], 0
                        adj[v].add(MultiIndex(tuple(nd), l).value)
    # transitive closure
    closed = {v: set(adj[v]) for v in range(total)}
    changed = True
    while changed:
        changed = False
        for v in range(total):
            extra = set()
            for u in closed[v]:
                extra |= closed[u] - closed[v]
            if extra:
                closed[v] |= extra
                changed = True
    for v in closed:
        closed[v].discard(v)
    return closed


# -- simulation ---------------------------------------------------------


def transmit(w: DMC, x: np.ndarray, rng: np.random.Generator) -> np.ndarray:
    """Sample one output per transmitted symbol (any input shape)."""
    x = np.asarray(x)
    cum = np.cumsum(w.trans, axis=1)
    r = rng.random(x.shape)
    idx = (cum[x] <= r[..., None]).sum(axis=-1)
    return idx.clip(0, w.num_outputs - 1)


def simulate_bler(k: Kernel, n: int, w: DMC, info_positions, trials: int, seed: int,
                  batch: int = 64) -> float:
    """Block error rate of SC decoding with frozen-to-zero convention."""
    rng = np.random.default_rng(seed)
    total = k.l**n
    info = sorted(int(p) for p in info_positions)
    frozen = {p: 0 for p in range(total) if p not in set(info)}
    # all randomness drawn upfront: the batch size cannot change results
    u_all = np.zeros((trials, total), dtype=np.int32)
    u_all[:, info] = rng.integers(0, k.field.q, size=(trials, len(info)))
    x_all = encode_many(k, n, u_all)
    y_all = transmit(w, x_all, rng)
    errors = 0
    for start in range(0, trials, batch):
        u = u_all[start : start + batch]
        u_hat = decode_sc_batch(k, n, w, y_all[start : start + batch], frozen)
        errors += int((u_hat[:, info] != u[:, info]).any(axis=1).sum())
    return errors / trials
