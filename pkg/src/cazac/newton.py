"""
Damped Newton solver for the three-equation system whose root (a, b, c)
parametrizes the ``C0c`` class, plus a multistart driver.

Unknowns are in s-units (eighths of a turn); angles inside the cosines are
``pi/4`` times affine combinations of them.
"""

import itertools
import logging

import numpy as np

from . import families
from .families import C0cTriple
from .metrics import discrepancy

log = logging.getLogger(__name__)

Q = np.pi / 4.0


class NewtonError(RuntimeError):
    """Raised when Newton iteration fails; ``best`` holds the best iterate."""

    def __init__(self, msg, best=None, residual=None):
        super().__init__(msg)
        self.best = best
        self.residual = residual


class SingularJacobian(NewtonError):
    pass


class MaxIters(NewtonError):
    pass


def fourth_form_residual(a, b, c):
    """Left-hand sides of the three fourth-form equations."""
    return np.array([
        np.cos(Q * (a + 3)) + np.cos(Q * (a - b + 0.5)) + np.cos(Q * (c - b + 2.5)),
        -np.cos(Q * (a + 3)) + np.cos(Q * (b + 2.5)) - np.sin(Q * (c - a))
        + np.cos(Q * (c - b + 2.5)),
        -np.cos(Q * (c + 5)) + np.cos(Q * (b + 2.5)) + np.sin(Q * (c - a)),
    ])


def fourth_form_jacobian(a, b, c):
    """Analytic Jacobian of :func:`fourth_form_residual` w.r.t. (a, b, c)."""
    s1 = np.sin(Q * (a + 3))
    s2 = np.sin(Q * (a - b + 0.5))
    s3 = np.sin(Q * (c - b + 2.5))
    s4 = np.sin(Q * (b + 2.5))
    s5 = np.sin(Q * (c + 5))
    cd = np.cos(Q * (c - a))
    return Q * np.array([
        [-s1 - s2, s2 + s3, -s3],
        [s1 + cd, -s4 + s3, -cd - s3],
        [-cd, -s4, s5 + cd],
    ])


def fd_jacobian(f, x, h=1e-6):
    """Central finite-difference Jacobian of ``f`` at ``x``."""
    x = np.asarray(x, dtype=float)
    cols = []
    for i in range(x.size):
        e = np.zeros_like(x)
        e[i] = h
        cols.append((f(*(x + e)) - f(*(x - e))) / (2 * h))
    return np.column_stack(cols)


def newton_solve(init, tol=1e-12, max_iters=50, jacobian="fd", history=None):
    """
    Damped Newton iteration on the fourth-form system.

    Parameters
    ----------
    init : array_like, shape (3,)
        Starting point (a, b, c).
    tol : float
        Stop when ``max|r| <= tol``.
    max_iters : int
        Iteration budget.
    jacobian : {"fd", "analytic"}
        Finite-difference (default) or analytic Jacobian.
    history : list, optional
        If given, ``(iterate, max|r|)`` pairs are appended to it.

    Returns
    -------
    triple : C0cTriple
    iterations : int
    """
    x = np.asarray(init, dtype=float).copy()
    r = fourth_form_residual(*x)
    rn = np.max(np.abs(r))
    if history is not None:
        history.append((x.copy(), rn))
    for it in range(max_iters + 1):
        if rn <= tol:
            return C0cTriple(*x), it
        if it == max_iters:
            break
        J = fourth_form_jacobian(*x) if jacobian == "analytic" \
            else fd_jacobian(fourth_form_residual, x)
        if np.linalg.cond(J) > 1e12:
            raise SingularJacobian("Jacobian is numerically singular", best=C0cTriple(*x),
                                   residual=rn)
        step = np.linalg.solve(J, -r)
        lam = 1.0
        while True:
            xn = x + lam * step
            rnew = fourth_form_residual(*xn)
            rnn = np.max(np.abs(rnew))
            if rnn < rn or lam < 1e-10:
                break
            lam *= 0.5
        if rnn >= rn:
            # no descent along the Newton direction; the iterate cannot improve
            break
        x, r, rn = xn, rnew, rnn
        if history is not None:
            history.append((x.copy(), rn))
    raise MaxIters(f"no convergence after {max_iters} iterations (|r|={rn:.3g})",
                   best=C0cTriple(*x), residual=rn)


def multistart(grid=12, tol=1e-12, merge_tol=1e-5, lo=0.0, hi=8.0):
    """
    Newton from every point of a ``grid**3`` lattice in ``[lo, hi)**3``.

    Roots are reduced modulo 8 and merged when closer than ``merge_tol``
    (lexicographically smallest kept). Returns a sorted list of
    :class:`C0cTriple`.
    """
    pts = lo + (hi - lo) * np.arange(grid) / grid
    roots = []
    for start in itertools.product(pts, pts, pts):
        try:
            t, _ = newton_solve(start, tol=tol)
        except NewtonError:
            continue
        v = np.mod(t.as_array(), 8.0)
        v[np.isclose(v, 8.0, atol=merge_tol)] = 0.0
        roots.append(v)
    roots.sort(key=tuple)
    merged = []
    for v in roots:
        if not any(np.max(np.abs(np.mod(v - u + 4, 8) - 4)) < merge_tol for u in merged):
            merged.append(v)
    return [C0cTriple(*v) for v in merged]


def solve_and_build(init=(0.1, 0.3, 0.1), tol=1e-12):
    """
    Solve for (a, b, c) and build the eight ``C0c`` sequences.

    Raises ``ValueError`` if any built sequence has ``D >= 1e-6``.
    """
    triple, _ = newton_solve(init, tol=tol)
    seqs = families.c0c_sequences(triple)
    for i, x in enumerate(seqs):
        d = discrepancy(x).d
        if d >= 1e-6:
            raise ValueError(f"built sequence {i} is not CAZAC (D={d:.3g})")
    return triple, seqs
