"""
Iterative projection onto the unit circle (IPUC).

Starting from a random constant-amplitude spectrum, the sequence is moved
back and forth between time and frequency domains, each time normalized to
unit modulus, until the discrepancy ``D = D_CA + D_ZAC`` drops to ``epsilon``.
A run whose discrepancy stalls is restarted from a fresh seed.
"""

from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, replace
import logging
import os

import numpy as np

from .metrics import DiscrepancyReport, discrepancy
from .seqcore import TWO_PI, ZERO_MODULUS, as_sequence, dft, idft, project_unit_circle

log = logging.getLogger(__name__)

# trajectory is sampled every iteration up to this count, then every 10th
DENSE_SAMPLES = 1000


@dataclass(frozen=True)
class IpucConfig:
    """
    Parameters of an IPUC run.

    ``max_iters`` bounds the iterations spent on a single seed,
    ``max_restarts`` the number of reseeds. A seed is abandoned when
    ``D(t) / D(t - restart_window) > restart_factor``.
    """

    n: int
    epsilon: float = 1e-3
    max_iters: int = 100_000
    restart_window: int = 200
    restart_factor: float = 0.99
    max_restarts: int = 50
    rng_seed: int = 0

    def __post_init__(self):
        if self.n < 2:
            raise ValueError("IPUC needs n >= 2")
        if not self.epsilon > 0:
            raise ValueError("epsilon must be positive")
        if self.max_iters < 1:
            raise ValueError("max_iters must be >= 1")
        if not 0 < self.restart_factor < 1:
            raise ValueError("restart_factor must lie in (0, 1)")
        if self.max_restarts < 0:
            raise ValueError("max_restarts must be >= 0")


@dataclass(frozen=True)
class IpucResult:
    sequence: np.ndarray
    report: DiscrepancyReport
    iterations: int
    restarts: int
    trajectory: np.ndarray = field(repr=False)
    converged: bool

    def __eq__(self, other):
        if not isinstance(other, IpucResult):
            return NotImplemented
        return (np.array_equal(self.sequence, other.sequence)
                and self.report == other.report
                and self.iterations == other.iterations
                and self.restarts == other.restarts
                and np.array_equal(self.trajectory, other.trajectory)
                and self.converged == other.converged)

    __hash__ = None


def ipuc_step(x):
    """One time -> frequency -> time pass with unit-circle projections."""
    return idft(project_unit_circle(dft(project_unit_circle(x))))


# below this length a dense DFT matrix beats the FFT call overhead
DENSE_DFT_MAX = 64


class _Kernel:
    """IPUC pass and discrepancy for a fixed length, without input checks."""

    def __init__(self, n):
        self.n = n
        if n <= DENSE_DFT_MAX:
            self.F = np.fft.fft(np.eye(n), norm="ortho")
            self.Fi = self.F.conj().T
            self.sqn = np.sqrt(n)

    def step(self, x):
        ax = np.abs(x)
        if _min(ax) < ZERO_MODULUS:
            x = project_unit_circle(x)
        else:
            x = x / ax
        if self.n <= DENSE_DFT_MAX:
            X = self.F @ x
            return self.Fi @ (X / np.abs(X))
        X = np.fft.fft(x, norm="ortho")
        return np.fft.ifft(X / np.abs(X), norm="ortho")

    def d(self, x):
        # D_CA + D_ZAC with R_x = IFFT(|FFT(x)|**2)
        if self.n <= DENSE_DFT_MAX:
            X = self.F @ x
            r = self.sqn * (self.Fi @ (X.real**2 + X.imag**2))
        else:
            X = np.fft.fft(x)
            r = np.fft.ifft(X.real**2 + X.imag**2)
        r = r[1:]
        return _max(np.abs(np.abs(x) - 1.0)) + np.sqrt(_max(r.real**2 + r.imag**2))


# ufunc reductions carry less per-call overhead than np.max on short arrays
_max = np.maximum.reduce
_min = np.minimum.reduce


_KERNELS = {}


def _kernel(n):
    k = _KERNELS.get(n)
    if k is None:
        k = _KERNELS[n] = _Kernel(n)
    return k


def run_rng(seed, stream=0):
    """Generator for run ``stream`` of a batch seeded with ``seed``."""
    return np.random.default_rng(np.random.SeedSequence(seed, spawn_key=(stream,)))


def random_ca(n, rng):
    """Unit-modulus vector with i.i.d. uniform phases."""
    return np.exp(1j * TWO_PI * rng.random(n))


def iterate(x, epsilon, max_iters, window=200, factor=0.99, record=None, offset=0):
    """
    Apply IPUC passes to ``x`` until ``D <= epsilon``, stall or budget.

    Returns ``(x, d, iterations, status)`` with status one of
    ``"converged"``, ``"stalled"``, ``"budget"``. ``window=0`` disables the
    stall test. When ``record`` is a list, ``(offset + iteration, D)``
    samples are appended to it.
    """
    hist = np.empty(max_iters + 1)
    x = as_sequence(x)
    kern = _kernel(x.size)
    for t in range(max_iters + 1):
        d = kern.d(x)
        hist[t] = d
        if record is not None:
            g = offset + t
            if g <= DENSE_SAMPLES or g % 10 == 0 or d <= epsilon:
                record.append((g, d))
        if d <= epsilon:
            return x, d, t, "converged"
        if window and t >= window and d > factor * hist[t - window]:
            return x, d, t, "stalled"
        if t == max_iters:
            break
        x = kern.step(x)
    return x, d, max_iters, "budget"


def ipuc_run(config, stream=0):
    """
    Generate one near-CAZAC sequence.

    Parameters
    ----------
    config : IpucConfig
    stream : int
        Index of the random stream derived from ``config.rng_seed``; run
        ``i`` of :func:`ipuc_batch` uses stream ``i``.

    Returns
    -------
    IpucResult
        The first sequence reaching ``epsilon``; if none does within
        ``max_restarts`` reseeds, the best sequence seen, with
        ``converged=False``.
    """
    rng = run_rng(config.rng_seed, stream)
    traj = []
    total = 0
    best = None
    for restart in range(config.max_restarts + 1):
        x0 = idft(random_ca(config.n, rng))
        x, d, its, status = iterate(
            x0, config.epsilon, config.max_iters,
            config.restart_window, config.restart_factor, record=traj, offset=total,
        )
        total += its
        if best is None or d < best[1]:
            best = (x, d)
        if status == "converged":
            break
        log.debug("seed %d abandoned (%s) at D=%.3g", restart, status, d)
        total += 1
    x = best[0]
    report = discrepancy(x)
    converged = report.d <= config.epsilon
    return IpucResult(
        sequence=x,
        report=report,
        iterations=total,
        restarts=restart,
        trajectory=np.array(traj, dtype=float).reshape(-1, 2),
        converged=bool(converged),
    )


def _run_one(args):
    config, stream = args
    return ipuc_run(config, stream)


def default_workers():
    return max(1, int(os.environ.get("CAZAC_THREADS", "1")))


def ipuc_batch(n, count, config=None, workers=None):
    """
    ``count`` independent IPUC runs of length ``n``.

    Run ``i`` uses stream ``i`` of ``config.rng_seed``, so results do not
    depend on ``workers`` and come back in run order.
    """
    if count < 1:
        raise ValueError("count must be >= 1")
    config = IpucConfig(n=n) if config is None else replace(config, n=n)
    workers = default_workers() if workers is None else workers
    jobs = [(config, i) for i in range(count)]
    if workers <= 1 or count == 1:
        return [_run_one(j) for j in jobs]
    with ProcessPoolExecutor(max_workers=workers) as ex:
        return list(ex.map(_run_one, jobs, chunksize=max(1, count // (4 * workers))))
