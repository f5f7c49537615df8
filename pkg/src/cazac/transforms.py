"""
CAZAC-invariant transformations, chains of them, and the length-8 class
identifier.

Chains are written in composition order, ``C_a o M_m o D_d o T_r``: the
rightmost transform is applied first. Translation ``T_r`` is the right
circular shift ``y(k) = x((k - r) mod n)``; with this convention the chains
recorded for the known length-8 samples map each sample onto its class
representative.
"""

from dataclasses import dataclass, field
from math import gcd
import itertools
import re

import numpy as np

from . import families
from .metrics import discrepancy
from .seqcore import TWO_PI, as_sequence, circular_distance, dft


class Transform:
    """Base class; subclasses implement ``__call__(x)`` and ``label``."""

    def __call__(self, x):
        raise NotImplementedError

    def inverse(self, n):
        raise NotImplementedError


@dataclass(frozen=True)
class Rotation(Transform):
    theta: float

    def __call__(self, x):
        return as_sequence(x) * np.exp(1j * self.theta)

    def inverse(self, n):
        return Rotation(-self.theta)

    @property
    def label(self):
        return f"R{self.theta:.12g}"


@dataclass(frozen=True)
class Translation(Transform):
    r: int

    def __call__(self, x):
        x = as_sequence(x)
        return np.roll(x, self.r)

    def inverse(self, n):
        return Translation((-self.r) % n)

    @property
    def label(self):
        return f"T{self.r}"


@dataclass(frozen=True)
class Decimation(Transform):
    d: int

    def __call__(self, x):
        x = as_sequence(x)
        n = x.size
        if gcd(self.d, n) != 1:
            raise ValueError(f"decimation factor {self.d} is not coprime with n={n}")
        return x[(self.d * np.arange(n)) % n]

    def inverse(self, n):
        return Decimation(pow(self.d, -1, n))

    @property
    def label(self):
        return f"D{self.d}"


@dataclass(frozen=True)
class Modulation(Transform):
    m: int

    def __call__(self, x):
        x = as_sequence(x)
        n = x.size
        k = np.arange(n)
        # reduce m*k mod n first so the phase factors are exact at quarter turns
        return x * np.exp(1j * TWO_PI * ((self.m * k) % n) / n)

    def inverse(self, n):
        return Modulation((-self.m) % n)

    @property
    def label(self):
        return f"M{self.m}"


@dataclass(frozen=True)
class Conjugation(Transform):
    a: int

    def __post_init__(self):
        if self.a not in (0, 1):
            raise ValueError("conjugation flag must be 0 or 1")

    def __call__(self, x):
        x = as_sequence(x)
        return x.conj() if self.a else x.copy()

    def inverse(self, n):
        return self

    @property
    def label(self):
        return f"C{self.a}"


@dataclass(frozen=True)
class DiscreteFT(Transform):
    def __call__(self, x):
        return dft(x)

    def inverse(self, n):
        raise NotImplementedError("the inverse DFT is not a member of the table")

    @property
    def label(self):
        return "F"


@dataclass(frozen=True)
class TransformChain:
    """
    Ordered composition of transforms, leftmost applied last.

    ``TransformChain((Conjugation(0), Modulation(2), Decimation(5),
    Translation(0)))`` is ``C_0 o M_2 o D_5 o T_0``.
    """

    transforms: tuple = field(default_factory=tuple)

    def __call__(self, x):
        y = as_sequence(x)
        for t in reversed(self.transforms):
            y = t(y)
        return y

    @property
    def label(self):
        return ".".join(t.label for t in self.transforms)

    def __str__(self):
        return self.label or "id"

    @classmethod
    def parse(cls, text):
        """Parse labels such as ``"C0.M2.D5.T0"`` (or ``"C0 o M2 o D5 o T0"``)."""
        out = []
        pos = 0
        text = text.strip()
        while pos < len(text):
            m = _TOKEN.match(text, pos)
            if not m:
                raise ValueError(f"cannot parse transform chain {text!r} at position {pos}")
            pos = m.end()
            kind, arg = m.group("kind"), m.group("arg")
            if kind is None:
                continue
            if kind == "F":
                out.append(DiscreteFT())
            elif kind == "R":
                out.append(Rotation(float(arg)))
            else:
                out.append({"T": Translation, "D": Decimation,
                            "M": Modulation, "C": Conjugation}[kind](int(arg)))
        return cls(tuple(out))


_TOKEN = re.compile(
    r"(?P<kind>[TDMC](?=-?\d)|R(?=[-+.\d])|F)"
    r"(?P<arg>(?<=[TDMC])-?\d+|(?<=R)[-+]?(?:\d+\.?\d*|\.\d+)(?:[eE][-+]?\d+)?)?"
    r"|\s*(?:[.\s]|\bo\b|∘)\s*"
)


def apply(t, x):
    """Apply a single transform."""
    return t(x)


def apply_chain(chain, x):
    """Apply a chain (rightmost transform first)."""
    if not isinstance(chain, TransformChain):
        chain = TransformChain(tuple(chain))
    return chain(x)


def cmdt_chain(a, m, d, r):
    return TransformChain((Conjugation(a), Modulation(m), Decimation(d), Translation(r)))


def units(n):
    return [d for d in range(1, n) if gcd(d, n) == 1] or [1]


def enumerate_chains(n=8):
    """
    All chains ``C_a o M_m o D_d o T_r`` for length ``n``.

    Ordered lexicographically by (a, m, d, r); for n = 8 there are 512.
    """
    return [cmdt_chain(a, m, d, r)
            for a, m, d, r in itertools.product((0, 1), range(n), units(n), range(n))]


def _chain_images(x, n):
    """Images of ``x`` under every enumerated chain, canonically rotated.

    Returns an array of shape (n_chains, n), rows in :func:`enumerate_chains`
    order.
    """
    params = np.array(list(itertools.product((0, 1), range(n), units(n), range(n))))
    a, m, d, r = (params[:, i][:, None] for i in range(4))
    k = np.arange(n)[None, :]
    y = x[(d * k - r) % n] * np.exp(1j * TWO_PI * ((m * k) % n) / n)
    y = np.where(a == 1, y.conj(), y)
    return y * np.exp(-1j * np.angle(y[:, :1]))


# ---------------------------------------------------------------------------
# length-8 classification

@dataclass(frozen=True)
class ClassLabel:
    """
    Result of :func:`classify8`.

    ``cls`` is one of ``"P"``, ``"C0a"``, ``"C0b"``, ``"C0c"``, ``"Unknown"``.
    For ``"P"``, ``row`` is the generic Popovic row (1..4) and ``theta_hat``
    its fitted free phase. ``chain`` maps the input onto the matched
    representative (up to a final rotation); ``witnesses`` lists every chain
    that does so for the matched class.
    """

    cls: str
    chain: TransformChain = None
    match_error: float = np.inf
    row: int = None
    theta_hat: float = None
    witnesses: tuple = ()

    def as_dict(self):
        return {
            "class": self.cls,
            "row": self.row,
            "theta_hat": self.theta_hat,
            "chain": self.chain.label if self.chain is not None else None,
            "match_error": self.match_error,
        }


CLASS_ORDER = ("P", "C0a", "C0b", "C0c")

_POPOVIC_PATTERNS = {row: families.popovic8_row(row, 0.0) for row in (1, 2, 3, 4)}
_S8_PATTERNS = {sid: families.s8_popovic_subsets(sid, 0.0) for sid in families.S8_SET_IDS}


def _row_pattern(row):
    if row in _POPOVIC_PATTERNS:
        return _POPOVIC_PATTERNS[row]
    if row in _S8_PATTERNS:
        return _S8_PATTERNS[row]
    raise ValueError(f"unknown Popovic row or subset id {row}")


def _circ_mean(z, axis=-1):
    return np.angle(np.sum(z, axis=axis))


def _popovic_fit(y, pattern):
    """Fit ``y ~ e^{i phi} * pattern * (1 at even, e^{i theta} at odd)``.

    ``y`` has shape (..., 8). Returns (theta, error).
    """
    q = y * pattern.conj()
    phi = _circ_mean(q[..., 0::2])
    q = q * np.exp(-1j * phi)[..., None]
    theta = _circ_mean(q[..., 1::2])
    model = np.ones(q.shape, dtype=complex)
    model[..., 1::2] = np.exp(1j * theta)[..., None]
    err = np.max(np.abs(np.angle(q * model.conj())), axis=-1)
    return np.mod(theta, TWO_PI), err


def _rotation_fit_error(y, rep):
    """Max phase distance between ``y`` and ``rep`` after the best rotation."""
    q = y * rep.conj()
    rot = _circ_mean(q)
    return np.max(np.abs(np.angle(q * np.exp(-1j * rot)[..., None])), axis=-1)


def fitted_theta(x, row, tol=2e-2):
    """
    Free phase of a length-8 Popovic-type sequence.

    Parameters
    ----------
    x : array_like of complex
        Sequence matching the pattern of ``row`` up to a global rotation.
    row : int
        Generic Popovic row 1..4, or a one-parameter subset id (11, 12, 21,
        22, 31, 32, 33, 34).
    tol : float
        Maximum allowed phase mismatch in radians.
    """
    x = as_sequence(x)
    if x.size != 8:
        raise ValueError("fitted_theta needs n = 8")
    theta, err = _popovic_fit(x, _row_pattern(row))
    if err > tol:
        raise ValueError(f"sequence does not match pattern {row} (error {err:.3g} rad)")
    return float(theta)


def classify8(x, tol=2e-2, max_d=1e-2, popovic_tol=None):
    """
    Identify the equivalence class of a length-8 near-CAZAC sequence.

    Every chain of :func:`enumerate_chains` is applied; an image matches the
    Popovic set when it fits one of the four generic rows, and matches a
    zero-degree-of-freedom class when it equals the class representative.
    Phase mismatch must stay below ``tol`` radians. Classes are tested in
    the order P, C0a, C0b, C0c; within a class the lowest chain index wins.

    IPUC approaches the one-parameter Popovic family slowly: at discrepancy
    D its outputs sit O(sqrt(D)) away in phase. The Popovic test therefore
    uses ``popovic_tol``, by default ``max(tol, 3*sqrt(D))``. The three other
    classes lie more than 1 rad away from every Popovic pattern.
    """
    x = as_sequence(x)
    if x.size != 8:
        raise ValueError("classify8 needs n = 8")
    rep = discrepancy(x)
    if rep.d >= max_d:
        raise ValueError(f"sequence too far from CAZAC to classify (D={rep.d:.3g})")
    if popovic_tol is None:
        popovic_tol = max(tol, 3.0 * np.sqrt(rep.d))
    x = x / np.abs(x)
    chains = enumerate_chains(8)
    images = _chain_images(x, 8)

    best_row = None
    for row in (1, 2, 3, 4):
        theta, err = _popovic_fit(images, _POPOVIC_PATTERNS[row])
        hits = np.flatnonzero(err <= popovic_tol)
        if hits.size:
            i = hits[0]
            cand = (i, row, theta[i], err[i], hits)
            if best_row is None or i < best_row[0]:
                best_row = cand
    if best_row is not None:
        i, row, theta, err, hits = best_row
        return ClassLabel("P", chains[i], float(err), row=row, theta_hat=float(theta),
                          witnesses=tuple(chains[j] for j in hits))

    for name, r in families.representatives().items():
        err = _rotation_fit_error(images, r)
        hits = np.flatnonzero(err <= tol)
        if hits.size:
            i = hits[0]
            return ClassLabel(name, chains[i], float(err[i]),
                              witnesses=tuple(chains[j] for j in hits))
    return ClassLabel("Unknown", None, float(np.inf))


def phase_distance_s(u, v, n=8):
    """Max circular distance between two s-vectors (in s-units)."""
    return float(np.max(circular_distance(u, v, period=n)))
