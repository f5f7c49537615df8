"""
Quality measures for (near-)CAZAC sequences.

The circular autocorrelation is

    R_x(k) = sum_l x(l) conj(x((l - k) mod n))

and the non-circular (aperiodic) autocorrelation, for lags tau >= 0,

    R_nc(tau) = sum_{k=0}^{n-1-tau} x(k) conj(x(k + tau)).
"""

from dataclasses import dataclass

import numpy as np

from .seqcore import PhaseSequence, as_sequence, unit_phases


@dataclass(frozen=True)
class DiscrepancyReport:
    """Distance-to-CAZAC of a sequence; ``d`` is derived, never stored."""

    d_ca: float
    d_zac: float
    degenerate: bool = False

    @property
    def d(self):
        return self.d_ca + self.d_zac

    def as_dict(self):
        return {"d_ca": self.d_ca, "d_zac": self.d_zac, "d": self.d}


@dataclass(frozen=True)
class LobeRatio:
    rho_db: float
    upper_bound_db: float
    max_side_lobe_power: float
    argmax_tau: int

    def as_dict(self):
        return {
            "rho_db": self.rho_db,
            "upper_bound_db": self.upper_bound_db,
            "max_side_lobe_power": self.max_side_lobe_power,
            "argmax_tau": self.argmax_tau,
        }


def circular_autocorr(x):
    """
    Circular autocorrelation vector ``R_x`` of length n.

    Computed through the FFT: ``R_x = IFFT(|FFT(x)|**2)``.
    """
    x = as_sequence(x)
    X = np.fft.fft(x)
    return np.fft.ifft(X * X.conj())


def noncircular_autocorr(x):
    """
    Aperiodic autocorrelation at lags ``tau = 0..n-1``.

    Negative lags follow from ``R_nc(-tau) = conj(R_nc(tau))``.
    """
    x = as_sequence(x)
    n = x.size
    # zero padding to 2n turns the circular correlation into the aperiodic one
    X = np.fft.fft(x, 2 * n)
    r = np.fft.ifft(X * X.conj())[:n]
    # r[tau] = sum_k x(k + tau) conj(x(k)); the convention here is its conjugate
    return r.conj()


def discrepancy(x):
    """
    CA and ZAC discrepancies of ``x``.

    ``d_ca = max_k ||x(k)| - 1|`` and ``d_zac = max_{0<k<n} |R_x(k)|``.
    For n = 1 the ZAC maximum is empty and ``d_zac`` is 0 (flagged as
    ``degenerate``).
    """
    x = as_sequence(x)
    d_ca = float(np.max(np.abs(np.abs(x) - 1.0)))
    if x.size == 1:
        return DiscrepancyReport(d_ca, 0.0, degenerate=True)
    r = circular_autocorr(x)
    return DiscrepancyReport(d_ca, float(np.max(np.abs(r[1:]))))


def zac_phase_criterion(theta):
    """
    ``max_{k != 0} |sum_l exp(1j*(theta(l) - theta((l-k) mod n)))|``.

    Zero exactly when the unit-modulus sequence with phases ``theta`` is ZAC.
    Evaluated as a direct sum over lags (O(n**2)).
    """
    t = theta.thetas if isinstance(theta, PhaseSequence) else np.asarray(theta, dtype=float)
    n = t.size
    if n < 2:
        raise ValueError("need n >= 2")
    best = 0.0
    for k in range(1, n):
        diff = t - np.roll(t, k)
        best = max(best, abs(np.exp(1j * diff).sum()))
    return best


def lobe_ratio(x):
    """
    Main-to-largest-side-lobe energy ratio of the aperiodic autocorrelation.

    Parameters
    ----------
    x : array_like of complex
        Sequence of length n >= 2, constant amplitude (approximately).

    Returns
    -------
    LobeRatio
        ``rho_db = 10 log10(|R_nc(0)|**2 / max_{0<tau<n} |R_nc(tau)|**2)``
        with the measured main lobe, the bound ``10 log10(n**2)``, the side
        lobe power and the (smallest) maximizing lag.
    """
    x = as_sequence(x)
    n = x.size
    if n < 2:
        raise ValueError("need n >= 2")
    r = noncircular_autocorr(x)
    power = np.abs(r) ** 2
    tau = int(np.argmax(power[1:])) + 1
    side = float(power[tau])
    main = float(power[0])
    rho = 10.0 * np.log10(main / side) if side > 0 else np.inf
    return LobeRatio(
        rho_db=float(rho),
        upper_bound_db=float(10.0 * np.log10(n * n)),
        max_side_lobe_power=side,
        argmax_tau=tau,
    )


def max_side_lobe_power(x):
    """Largest ``|R_nc(tau)|**2`` over ``0 < tau < n``."""
    power = np.abs(noncircular_autocorr(x)[1:]) ** 2
    return float(power.max())


def circulant_matrix(x):
    """Matrix whose row r is ``x`` circularly shifted right by r positions."""
    x = as_sequence(x)
    n = x.size
    idx = (np.arange(n)[None, :] - np.arange(n)[:, None]) % n
    return x[idx]


def circulant_gram_defect(x):
    """Largest absolute entry of ``Omega Omega^H - n I``."""
    omega = circulant_matrix(x)
    n = omega.shape[0]
    gram = omega @ omega.conj().T
    return float(np.max(np.abs(gram - n * np.eye(n))))


def is_cazac(x, tol=1e-9):
    return discrepancy(x).d <= tol
