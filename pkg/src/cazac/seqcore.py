"""
Sequence primitives: unit-modulus phases, the unitary DFT, projection onto
the unit circle and canonical (first element equal to 1) phase forms.

Complex sequences are plain 1-D ``complex128`` numpy arrays. Phase sequences
carry their phases reduced to ``[0, 2*pi)``.
"""

from dataclasses import dataclass, field

import numpy as np

TWO_PI = 2.0 * np.pi

# below this modulus a component is treated as zero by the projection
ZERO_MODULUS = 1e-300


def as_sequence(x):
    """Validate ``x`` and return it as a 1-D complex128 array."""
    arr = np.asarray(x, dtype=np.complex128)
    if arr.ndim != 1 or arr.size < 1:
        raise ValueError("a sequence must be a non-empty 1-D array")
    if not np.all(np.isfinite(arr)):
        raise ValueError("sequence contains NaN or Inf components")
    return arr


def wrap_phase(theta):
    """Reduce phases to [0, 2*pi)."""
    t = np.mod(np.asarray(theta, dtype=float), TWO_PI)
    # np.mod can return exactly 2*pi for tiny negative inputs
    t[t >= TWO_PI] = 0.0
    return t


def circular_distance(a, b, period=TWO_PI):
    """Componentwise distance between angles on a circle of given period."""
    d = np.mod(np.asarray(a, dtype=float) - np.asarray(b, dtype=float), period)
    return np.minimum(d, period - d)


@dataclass(frozen=True)
class PhaseSequence:
    """
    Phases ``theta`` of a unit-modulus sequence ``x(k) = exp(1j*theta(k))``.

    Phases are stored reduced to ``[0, 2*pi)``. ``canonical`` is true when
    ``theta[0] == 0``.
    """

    thetas: np.ndarray = field(repr=False)

    def __post_init__(self):
        t = np.asarray(self.thetas, dtype=float)
        if t.ndim != 1 or t.size < 1:
            raise ValueError("phases must be a non-empty 1-D array")
        if not np.all(np.isfinite(t)):
            raise ValueError("phases must be finite")
        t = wrap_phase(t)
        t.setflags(write=False)
        object.__setattr__(self, "thetas", t)

    @property
    def n(self):
        return self.thetas.size

    @property
    def canonical(self):
        return self.thetas[0] == 0.0

    @classmethod
    def from_s(cls, s, n=None):
        """Build from the s-representation ``theta(k) = 2*pi*s(k)/n``."""
        s = np.asarray(s, dtype=float)
        n = s.size if n is None else n
        return cls(TWO_PI * s / n)

    def to_s(self):
        """Return the s-representation, reduced to [0, n)."""
        s = self.thetas * self.n / TWO_PI
        s[s >= self.n] = 0.0
        return s

    def to_complex(self):
        return unit_phases(self)

    def __array__(self, dtype=None, copy=None):
        return self.to_complex() if dtype is None else self.to_complex().astype(dtype)

    def __len__(self):
        return self.n

    def __eq__(self, other):
        if not isinstance(other, PhaseSequence):
            return NotImplemented
        return np.array_equal(self.thetas, other.thetas)

    __hash__ = None


def s_to_phases(s, n=None):
    """s-representation to a :class:`PhaseSequence`."""
    return PhaseSequence.from_s(s, n)


def phases_to_s(theta):
    """:class:`PhaseSequence` (or raw phase array) to s-representation."""
    if not isinstance(theta, PhaseSequence):
        theta = PhaseSequence(theta)
    return theta.to_s()


def unit_phases(theta):
    """
    Map phases to the unit circle.

    Parameters
    ----------
    theta : PhaseSequence or array_like
        Phases in radians.

    Returns
    -------
    x : ndarray of complex
        ``exp(1j*theta)``.
    """
    t = theta.thetas if isinstance(theta, PhaseSequence) else np.asarray(theta, dtype=float)
    if not np.all(np.isfinite(t)):
        raise ValueError("phases must be finite")
    return np.exp(1j * t)


def dft(x):
    """Unitary DFT, ``X(k) = n**-0.5 * sum_l exp(-2j*pi*l*k/n) x(l)``."""
    return np.fft.fft(as_sequence(x), norm="ortho")


def idft(X):
    """Inverse of :func:`dft`."""
    return np.fft.ifft(as_sequence(X), norm="ortho")


def project_unit_circle(x):
    """
    Normalize every component to modulus 1.

    Components with modulus below 1e-300 are replaced by ``1+0j``.
    """
    x = as_sequence(x)
    mod = np.abs(x)
    zero = mod < ZERO_MODULUS
    out = np.empty_like(x)
    out[~zero] = x[~zero] / mod[~zero]
    out[zero] = 1.0
    return out


def canonicalize(x, tol=1e-6):
    """
    Rotate a CA sequence so that its first element is 1.

    Parameters
    ----------
    x : array_like of complex
        Constant-amplitude sequence (every ``|x(k)|`` within ``tol`` of 1).
    tol : float
        Allowed modulus deviation.

    Returns
    -------
    PhaseSequence
        Phases with ``theta[0] == 0``.
    """
    x = as_sequence(x)
    d_ca = np.max(np.abs(np.abs(x) - 1.0))
    if d_ca > tol:
        raise ValueError(f"sequence is not constant amplitude (D_CA={d_ca:.3g})")
    ang = np.angle(x)
    thetas = ang - ang[0]
    thetas[0] = 0.0
    return PhaseSequence(thetas)


def rotate_canonical(x):
    """Return ``x * conj(x[0]) / |x[0]|``, i.e. ``x`` with first phase removed."""
    x = as_sequence(x)
    return x * np.exp(-1j * np.angle(x[0]))
