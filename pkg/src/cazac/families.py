"""
Closed-form CAZAC families.

Classical constructions (Zadoff-Chu, Popovic, Wiener, P4, Bjorck), the
complete n = 4 solution set, and the length-8 sets: the Popovic-type
one-parameter subsets and the three zero-degree-of-freedom classes
``C0a``, ``C0b`` and ``C0c``.
"""

from dataclasses import dataclass
import functools
from math import gcd, isqrt

import numpy as np

from .seqcore import TWO_PI, PhaseSequence
from .metrics import discrepancy


# ---------------------------------------------------------------------------
# number theory helpers

def is_prime(n):
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    for p in range(3, isqrt(n) + 1, 2):
        if n % p == 0:
            return False
    return True


def legendre(k, n):
    """Legendre symbol (k/n) for an odd prime n, by Euler's criterion."""
    k %= n
    if k == 0:
        return 0
    return 1 if pow(k, (n - 1) // 2, n) == 1 else -1


# ---------------------------------------------------------------------------
# classical families

def zadoff_chu(n, u=1, q=0):
    """
    Zadoff-Chu phases ``theta(k) = -pi u k (k + c + 2q) / n``, ``c = n mod 2``.

    Parameters
    ----------
    n : int
        Length, n > 1.
    u : int
        Root index, ``0 < u < n`` and ``gcd(n, u) == 1``.
    q : int
        Shift parameter, ``0 <= q < n``.
    """
    if n < 2:
        raise ValueError("Zadoff-Chu needs n > 1")
    if not 0 < u < n or gcd(n, u) != 1:
        raise ValueError(f"root u={u} must satisfy 0 < u < n and gcd(n, u) = 1")
    if not 0 <= q < n:
        raise ValueError(f"q={q} must satisfy 0 <= q < n")
    k = np.arange(n)
    c = n % 2
    # integer arithmetic before the division keeps the phases exact mod 2*pi
    num = np.mod(-u * k * (k + c + 2 * q), 2 * n)
    return PhaseSequence(np.pi * num / n)


def popovic(n, m, w, u=1, q=0):
    """
    Popovic phases ``theta(k) = zc(k) + 2 pi w(k mod m)`` for ``n = m**2 t``.

    ``w`` holds m reals in [0, 1]; ``u`` and ``q`` parametrize the underlying
    Zadoff-Chu sequence.
    """
    w = np.asarray(w, dtype=float)
    if m < 1 or n % (m * m) != 0:
        raise ValueError(f"n={n} is not of the form m**2 t with m={m}")
    if w.shape != (m,):
        raise ValueError(f"w must have length m={m}")
    if np.any((w < 0) | (w > 1)):
        raise ValueError("w components must lie in [0, 1]")
    zc = zadoff_chu(n, u, q).thetas
    k = np.arange(n)
    return PhaseSequence(zc + TWO_PI * w[k % m])


def wiener(n, m=1):
    """Wiener phases ``2 pi m k**2 / p`` with p = n (odd n) or 2n (even n)."""
    if n < 2:
        raise ValueError("Wiener needs n > 1")
    p = n if n % 2 else 2 * n
    if gcd(p, m) != 1:
        raise ValueError(f"gcd(p={p}, m={m}) must be 1")
    k = np.arange(n)
    return PhaseSequence(TWO_PI * np.mod(m * k * k, p) / p)


def p4(n):
    """Lewis-Kretschmer P4 phases ``pi k (k - n) / n``."""
    if n < 2:
        raise ValueError("P4 needs n > 1")
    k = np.arange(n)
    return PhaseSequence(np.pi * np.mod(k * (k - n), 2 * n) / n)


def bjorck(n):
    """
    Bjorck phases for a prime n.

    Type I (``n mod 4 == 1``): ``(k/n) arccos(1 / (1 + sqrt(n)))``.
    Type II (``n mod 4 == 3``): ``arccos((1 - n) / (1 + n))`` on the
    non-residues, 0 elsewhere.
    """
    if not is_prime(n) or n % 4 not in (1, 3):
        raise ValueError(f"Bjorck sequences need an odd prime n, got {n}")
    sym = np.array([legendre(k, n) for k in range(n)])
    if n % 4 == 1:
        return PhaseSequence(sym * np.arccos(1.0 / (1.0 + np.sqrt(n))))
    return PhaseSequence(np.where(sym == -1, np.arccos((1.0 - n) / (1.0 + n)), 0.0))


# ---------------------------------------------------------------------------
# n = 4

def cazac4(variant, theta):
    """
    The two one-parameter CAZAC sets of length 4.

    ``A``: (1, e^{i theta}, -1, e^{i theta}); ``B``: (1, e^{i theta}, 1, -e^{i theta}).
    """
    e = np.exp(1j * theta)
    if variant == "A":
        return np.array([1, e, -1, e], dtype=complex)
    if variant == "B":
        return np.array([1, e, 1, -e], dtype=complex)
    raise ValueError(f"unknown variant {variant!r}")


# ---------------------------------------------------------------------------
# n = 8, Popovic-type sets

# Rows of the generic Popovic set for n = 8. Even positions are fixed
# constants; odd positions are e^{i theta} times the listed factor.
POPOVIC8_EVEN = np.array([
    [1, 1, -1, -1],
    [1, 1j, 1, 1j],
    [1, -1, -1, 1],
    [1, -1j, 1, -1j],
])
POPOVIC8_ODD = np.array([
    [1, -1j, 1, -1j],
    [1, -1, -1, 1],
    [1, 1j, 1, 1j],
    [1, 1, -1, -1],
])


def popovic8_row(row, theta):
    """Row ``row`` (1..4) of the generic Popovic set for n = 8."""
    if row not in (1, 2, 3, 4):
        raise ValueError("row must be 1..4")
    x = np.empty(8, dtype=complex)
    x[0::2] = POPOVIC8_EVEN[row - 1]
    x[1::2] = np.exp(1j * theta) * POPOVIC8_ODD[row - 1]
    return x


def _odd_even(even, odd, theta):
    x = np.empty(8, dtype=complex)
    x[0::2] = even
    x[1::2] = np.exp(1j * theta) * np.asarray(odd)
    return x


# (even positions, odd factors) of each one-parameter subset
_S8_PATTERNS = {
    11: ([1, 1j, 1, 1j], [1, -1, -1, 1]),
    12: ([1, -1j, 1, -1j], [1, -1, -1, 1]),
    21: ([1, -1j, 1, -1j], [1, 1, -1, -1]),
    22: ([1, 1j, 1, 1j], [1, 1, -1, -1]),
    31: ([1, 1, -1, -1], [1, -1j, 1, -1j]),
    32: ([1, 1, -1, -1], [1, 1j, 1, 1j]),
    33: ([1, -1, -1, 1], [1, 1j, 1, 1j]),
    34: ([1, -1, -1, 1], [1, -1j, 1, -1j]),
}

S8_SET_IDS = tuple(sorted(_S8_PATTERNS))


def s8_popovic_subsets(setid, theta):
    """One-parameter length-8 subset ``S_setid`` at free phase ``theta``."""
    try:
        even, odd = _S8_PATTERNS[setid]
    except KeyError:
        raise ValueError(f"unknown set id {setid}; expected one of {S8_SET_IDS}") from None
    return _odd_even(even, odd, theta)


# ---------------------------------------------------------------------------
# n = 8, zero-degree-of-freedom classes

@dataclass(frozen=True)
class C0aConstants:
    chi: float
    phi: float
    gamma: float
    rho: float
    beta: float
    tau: float
    nu: float


def c0a_constants():
    """
    Constants of the decimation-7-invariant class ``C0a``.

    ``rho`` is taken on the positive arccos branch and ``nu`` on the
    principal arctan branch: this choice reproduces the reference class
    representative. The other three branch combinations give equivalent
    sequences (they differ by modulation M_4 and/or the swap of positions
    1 and 3).
    """
    chi = np.sqrt(-2.0 + 2.0 * np.sqrt(2.0))
    phi = 2.0 * np.arcsin(chi)
    gamma = -np.arccos(-chi**2 / 2.0)
    rho = np.arccos(-0.5 * (1.0 + np.cos(phi)))
    beta = np.cos(0.5 * (phi + rho))
    tau = -np.cos(rho / 2.0)
    nu = 2.0 * np.arctan(
        -(beta * np.cos(phi / 2.0) + tau * np.cos(gamma))
        / (beta * np.sin(phi / 2.0) + tau * np.sin(gamma))
    )
    return C0aConstants(chi, phi, gamma, rho, beta, tau, nu)


def c0a_sequence():
    """Representative of ``C0a``, invariant under decimation by 7."""
    c = c0a_constants()
    p = (c.nu + c.rho) / 2.0
    m = (c.nu - c.rho) / 2.0
    th = np.array([0.0, p, c.gamma, m, c.phi, m, c.gamma, p])
    return np.exp(1j * th)


def c0b_sequences():
    """
    The eight members of ``C0b`` (z = e^{i arccos(1/3)}); the first is the
    class representative (1, 1, z, 1, -z, -z, z, -z).
    """
    z = np.exp(1j * np.arccos(1.0 / 3.0))
    zc = z.conjugate()
    rows = [
        [1, 1, z, 1, -z, -z, z, -z],
        [1, 1, -1, 1, -z, -z, -1, -z],
        [1, 1, zc, 1, -zc, -zc, zc, -zc],
        [1, 1, -1, 1, -zc, -zc, -1, -zc],
        [1, -z, z, -z, -z, 1, z, 1],
        [1, -zc, zc, -zc, -zc, 1, zc, 1],
        [1, -z, -1, -z, -z, 1, -1, 1],
        [1, -zc, -1, -zc, -zc, 1, -1, 1],
    ]
    return [np.array(r, dtype=complex) for r in rows]


@dataclass(frozen=True)
class C0cTriple:
    a: float
    b: float
    c: float

    def as_array(self):
        return np.array([self.a, self.b, self.c])


REFERENCE_TRIPLE = C0cTriple(0.1390361, 0.3487759, 0.0975818)


def c0c_s_vectors(t=REFERENCE_TRIPLE):
    """s-vectors (eighths of a turn) of the eight ``C0c`` sequences."""
    a, b, c = t.a, t.b, t.c
    tail = [
        # C0c
        (a, 4 + b, 3 + c, 7.5 + c, 1.5 + b, 6.5 + a),
        (7.5 + b, 3 + b - c, 5.5 - a + b, 2 - a + b, 0.5 + b - c, 6 + b),
        (7 + c - a, 6.5 - a, 1.5 - a + b, 6 - a + b, 4 - a, 5.5 + c - a),
        (6.5 + b - c, 7.5 + a - c, 5 - c, 1.5 - c, 5 + a - c, 5 + b - c),
        # conjugate block
        (2 - a, 7 - b, 1 - c, 5.5 - c, 4.5 - b, 0.5 - a),
        (2.5 - b, 8 - b + c, 6.5 - b + a, 3 - b + a, 5.5 - b + c, 1 - b),
        (3 + a - c, 4.5 + a, 2.5 - b + a, 7 - b + a, 2 + a, 1.5 + a - c),
        (3.5 - b + c, 3.5 + c - a, 7 + c, 3.5 + c, 1 + c - a, 2 - b + c),
    ]
    return [np.mod(np.array((0.0, 0.5) + row), 8.0) for row in tail]


@functools.lru_cache(maxsize=1)
def refined_triple():
    """The seven-digit reference triple polished by Newton to machine precision."""
    from .newton import newton_solve

    return newton_solve(REFERENCE_TRIPLE.as_array())[0]


def c0c_sequences(t=None, tol=1e-6):
    """
    The eight ``C0c`` sequences built from a root ``t`` of the fourth-form
    system; the first is the class representative.

    By default ``t`` is :func:`refined_triple`: the seven reference digits leave
    a residual near 1e-7 and hence D near 3e-7.
    """
    from .newton import fourth_form_residual

    if t is None:
        t = refined_triple()
    r = np.max(np.abs(fourth_form_residual(t.a, t.b, t.c)))
    if r >= tol:
        raise ValueError(f"triple is not a root of the fourth-form system (|r|={r:.3g})")
    return [np.exp(1j * TWO_PI * s / 8.0) for s in c0c_s_vectors(t)]


def representatives():
    """Class representatives of the three zero-degree-of-freedom classes."""
    return {
        "C0a": c0a_sequence(),
        "C0b": c0b_sequences()[0],
        "C0c": c0c_sequences()[0],
    }


def check_cazac(x, tol=1e-9):
    """Raise if ``x`` is farther than ``tol`` from CAZAC."""
    rep = discrepancy(np.asarray(x))
    if rep.d >= tol:
        raise ValueError(f"sequence is not CAZAC within {tol} (D={rep.d:.3g})")
    return rep


FAMILY_NAMES = ("zc", "popovic", "wiener", "p4", "bjorck", "cazac4", "s8", "c0a", "c0b", "c0c")


def family_sequence(name, n=None, u=1, q=0, m=None, w=None, variant="A", theta=0.0,
                    setid=None, index=0):
    """
    Build a family member by name; returns a complex array.

    Lengths are fixed for ``cazac4`` (4) and the length-8 sets; passing a
    conflicting ``n`` is an error. ``s8`` with ``setid`` 13 or 23 gives the
    ``C0a`` sequence or ``C0b`` member ``index``.
    """
    def need_n():
        if n is None:
            raise ValueError(f"family {name!r} needs n")
        return n

    def fixed(length):
        if n is not None and n != length:
            raise ValueError(f"family {name!r} has fixed length {length}, got n={n}")

    if name == "zc":
        return zadoff_chu(need_n(), u, q).to_complex()
    if name == "popovic":
        if m is None:
            raise ValueError("popovic needs m")
        w = np.zeros(m) if w is None else w
        return popovic(need_n(), m, w, u, q).to_complex()
    if name == "wiener":
        return wiener(need_n(), 1 if m is None else m).to_complex()
    if name == "p4":
        return p4(need_n()).to_complex()
    if name == "bjorck":
        return bjorck(need_n()).to_complex()
    if name == "cazac4":
        fixed(4)
        return cazac4(variant, theta)
    if name in ("s8", "c0a", "c0b", "c0c"):
        fixed(8)
    if name == "s8":
        if setid is None:
            raise ValueError("s8 needs setid")
        if setid == 13:
            return c0a_sequence()
        if setid == 23:
            name = "c0b"
        else:
            return s8_popovic_subsets(setid, theta)
    if name == "c0a":
        return c0a_sequence()
    if name in ("c0b", "c0c"):
        rows = c0b_sequences() if name == "c0b" else c0c_sequences()
        if not 0 <= index < len(rows):
            raise ValueError(f"index must be in 0..{len(rows) - 1}")
        return rows[index]
    raise ValueError(f"unknown family {name!r}; expected one of {FAMILY_NAMES}")
