"""Discrete memoryless channels over GF(q): symmetry, degradation, splits.

A DMC is a row-stochastic table from the input field to a finite output
alphabet.  Exact channel splitting is only offered at tiny sizes; the
output alphabet is kept under control by merging outputs whose
likelihood columns are proportional, and canonically sorted so split
channels are comparable across runs.
"""

from __future__ import annotations

import itertools
import math

import numpy as np
from scipy.optimize import linprog

from .errors import NotSymmetric, OutOfRange, TooLarge
from .galois import FiniteField

_SPLIT_CAP = 1 << 20
_SOF_CAP = 64
_DEGRADE_CAP = 4096
_MERGE_DECIMALS = 12


class DMC:
    """Channel W : GF(q) -> outputs, as a q x M transition matrix."""

    def __init__(self, field: FiniteField, outputs, trans):
        self.field = field
        self.outputs = list(outputs)
        self.trans = np.asarray(trans, dtype=float)
        q, m = self.trans.shape
        if q != field.q or m != len(self.outputs):
            raise ValueError("transition table shape mismatch")
        if (self.trans < 0).any():
            raise ValueError("negative transition probability")
        if np.abs(self.trans.sum(axis=1) - 1.0).max() > 1e-12:
            raise ValueError("rows must sum to 1")

    @property
    def num_outputs(self) -> int:
        return len(self.outputs)

    def serialize(self) -> dict:
        return {
            "type": "table",
            "field": self.field.serialize(),
            "trans": [[float(v) for v in row] for row in self.trans],
        }

    def __repr__(self):
        return f"DMC(q={self.field.q}, M={self.num_outputs})"


class SofWitness:
    """Output permutations realizing the field symmetries of a channel."""

    def __init__(self, sigma, psi):
        self.sigma = sigma  # {d: permutation array}, additive
        self.psi = psi  # {a: permutation array}, multiplicative, a != 0


def qsc(field: FiniteField, p: float) -> DMC:
    """q-ary symmetric channel: total error probability p, spread evenly.

    Off-diagonal mass is p / (q - 1) so that rows are stochastic.
    """
    if not 0.0 <= p <= 1.0:
        raise OutOfRange(f"error probability {p} outside [0, 1]")
    q = field.q
    trans = np.full((q, q), p / (q - 1) if q > 1 else 0.0)
    np.fill_diagonal(trans, 1.0 - p)
    return DMC(field, list(range(q)), trans)


def bhattacharyya(w: DMC) -> float:
    """Z(W): mean pairwise Bhattacharyya coefficient over distinct inputs."""
    q = w.field.q
    s = np.sqrt(w.trans)
    gram = s @ s.T
    return float((gram.sum() - np.trace(gram)) / (q * (q - 1)))


def mutual_info(w: DMC) -> float:
    """I(W) in q-ary symbols, uniform input prior."""
    q = w.field.q
    wo = w.trans.mean(axis=0)
    t = w.trans
    with np.errstate(divide="ignore", invalid="ignore"):
        ratio = np.where(t > 0, t / wo[None, :], 1.0)
        terms = np.where(t > 0, t * np.log(ratio), 0.0)
    return float(terms.sum() / (q * math.log(q)))


# -- SOF symmetry -------------------------------------------------------


def _column_matching(a: np.ndarray, b: np.ndarray):
    """Permutation pi with b[:, pi[y]] == a[:, y] (exact up to rounding)."""
    m = a.shape[1]
    keys_b = {}
    for y in range(m):
        keys_b.setdefault(tuple(np.round(b[:, y], _MERGE_DECIMALS)), []).append(y)
    pi = np.zeros(m, dtype=np.int64)
    for y in range(m):
        key = tuple(np.round(a[:, y], _MERGE_DECIMALS))
        bucket = keys_b.get(key)
        if not bucket:
            return None
        pi[y] = bucket.pop()
    return pi


def sof_witnesses(w: DMC):
    """Witness permutations for SOF symmetry, or None if there are none.

    sigma[d] satisfies W(y | x) = W(sigma[d](y) | x + d); psi[a] satisfies
    W(y | x) = W(psi[a](y) | a x).
    """
    if w.num_outputs > _SOF_CAP:
        raise TooLarge(f"output alphabet {w.num_outputs} exceeds SOF search cap")
    f, t = w.field, w.trans
    q = f.q
    sigma = {}
    for d in range(q):
        shifted = np.empty_like(t)
        for x in range(q):
            shifted[x] = t[f.add(x, d)]
        pi = _column_matching(t, shifted)
        if pi is None:
            return None
        sigma[d] = pi
    psi = {}
    for a in range(1, q):
        scaled = np.empty_like(t)
        for x in range(q):
            scaled[x] = t[f.mul(a, x)]
        pi = _column_matching(t, scaled)
        if pi is None:
            return None
        psi[a] = pi
    return SofWitness(sigma, psi)


# -- degradation --------------------------------------------------------


def degradation_witness(w: DMC, wprime: DMC, tol: float = 1e-9):
    """Row-stochastic post-processing matrix showing wprime <= w, or None.

    Solved as a linear feasibility problem: find V >= 0 with unit row
    sums and w.trans @ V = wprime.trans.
    """
    if w.field != wprime.field:
        raise ValueError("channels must share the input field")
    m, mp = w.num_outputs, wprime.num_outputs
    if m * mp > _DEGRADE_CAP:
        raise TooLarge(f"witness search size {m * mp} exceeds cap")
    q = w.field.q
    nvar = m * mp

    # equality block: (q * mp) rows for the factorization, m for row sums
    a_eq = np.zeros((q * mp + m, nvar))
    b_eq = np.zeros(q * mp + m)
    for x in range(q):
        for y in range(mp):
            row = x * mp + y
            for z in range(m):
                a_eq[row, z * mp + y] = w.trans[x, z]
            b_eq[row] = wprime.trans[x, y]
    for z in range(m):
        a_eq[q * mp + z, z * mp : (z + 1) * mp] = 1.0
        b_eq[q * mp + z] = 1.0

    res = linprog(
        c=np.zeros(nvar),
        A_eq=a_eq,
        b_eq=b_eq,
        bounds=[(0.0, 1.0)] * nvar,
        method="highs",
    )
    if not res.success:
        return None
    v = res.x.reshape(m, mp)
    v = np.clip(v, 0.0, None)
    v /= v.sum(axis=1, keepdims=True)
    if np.abs(w.trans @ v - wprime.trans).max() > tol:
        return None
    return v


# -- exact channel splitting --------------------------------------------


def merge_outputs(field: FiniteField, trans: np.ndarray) -> DMC:
    """Canonical DMC: proportional likelihood columns merged, sorted."""
    q, m = trans.shape
    groups = {}
    for y in range(m):
        col = trans[:, y]
        s = col.sum()
        if s <= 0:
            continue  # unreachable output
        key = tuple(np.round(col / s, _MERGE_DECIMALS))
        if key in groups:
            groups[key] = groups[key] + col
        else:
            groups[key] = col.copy()
    keys = sorted(groups)
    merged = np.stack([groups[k] for k in keys], axis=1) if keys else np.zeros((q, 0))
    return DMC(field, list(range(len(keys))), merged)


def split_exact_matrix(w: DMC, g: np.ndarray, i: int) -> DMC:
    """Exact synthetic channel W^(i) for the one-shot transform u -> u g.

    ``i`` is 1-based.  Outputs are (y vector, u prefix) pairs, merged to
    canonical form.  Refuses instances beyond the 2^20 output cap.
    """
    field = w.field
    q = field.q
    l = g.shape[0]
    if not 1 <= i <= l:
        raise OutOfRange(f"split index {i} out of range 1..{l}")
    m = w.num_outputs
    if m**l * q ** (i - 1) > _SPLIT_CAP:
        raise TooLarge("split output alphabet exceeds cap")

    # codewords for every input vector u, u_1 slowest digit
    us = np.array(list(itertools.product(range(q), repeat=l)), dtype=np.int64)
    cw = np.zeros((q**l, l), dtype=np.int64)
    for r in range(l):
        cw = field.add_table[cw, field.mul_table[us[:, r][:, None], g[r][None, :]]]

    n_out = m**l * q ** (i - 1)
    trans = np.zeros((q, n_out))
    scale = 1.0 / q ** (l - 1)
    out_idx = 0
    for y in itertools.product(range(m), repeat=l):
        # weight of every u under this y
        wt = np.ones(q**l)
        for k in range(l):
            wt *= w.trans[cw[:, k], y[k]]
        # sum out the suffix, split prefix / u_i
        cube = wt.reshape((q,) * l)
        summed = cube.sum(axis=tuple(range(i, l))) if i < l else cube
        flat = summed.reshape(q ** (i - 1), q)
        for pfx in range(q ** (i - 1)):
            trans[:, out_idx] = flat[pfx] * scale
            out_idx += 1
    return merge_outputs(field, trans)


def split_exact(w: DMC, kernel, i: int) -> DMC:
    """Exact one-level split W_1^(i) through a kernel."""
    return split_exact_matrix(w, np.asarray(kernel.matrix), i)
