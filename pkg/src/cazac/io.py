"""
Sequence files.

JSON form::

    {"n": 8, "repr": "s", "values": [0, 0.5, ...]}

CSV form: a header line ``# n=<n> repr=<s|theta>`` followed by one value per
line. ``repr`` is ``"s"`` (``theta = 2*pi*s/n``) or ``"theta"`` (radians).
Values are written with 12 significant digits; moduli are not stored, so a
near-CAZAC sequence is written as its unit-modulus projection. Extra JSON keys (such as an
embedded run manifest) are ignored on reading.
"""

import json
import os
from pathlib import Path
import re
import tempfile

import numpy as np

from .seqcore import PhaseSequence, canonicalize

REPRS = ("s", "theta")
SIG_DIGITS = 12

_HEADER = re.compile(r"^#\s*n\s*=\s*(\S+)\s+repr\s*=\s*(\S+)\s*$")


class SequenceFileError(ValueError):
    """Malformed sequence file; ``line`` is the 1-based offending line."""

    def __init__(self, msg, line=None, source=None):
        where = ""
        if source is not None:
            where += f"{source}:"
        if line is not None:
            where += f"line {line}: "
        elif where:
            where += " "
        super().__init__(where + msg)
        self.line = line
        self.source = source


def round_sig(v, digits=SIG_DIGITS):
    return float(f"{v:.{digits}g}")


def sequence_values(seq, repr="s"):
    """Phase values of ``seq`` in the requested representation, rounded."""
    if repr not in REPRS:
        raise ValueError(f"repr must be one of {REPRS}")
    if not isinstance(seq, PhaseSequence):
        # only phases are stored: a near-CAZAC sequence is written as its
        # unit-modulus projection, rotated so that the first phase is 0
        seq = canonicalize(seq, tol=np.inf)
    n = seq.n
    period = float(n) if repr == "s" else 2 * np.pi
    raw = seq.to_s() if repr == "s" else seq.thetas
    out = []
    for v in raw:
        r = round_sig(float(v))
        # rounding can land exactly on the period
        out.append(0.0 if r >= period else r)
    return out


def sequence_to_dict(seq, repr="s"):
    vals = sequence_values(seq, repr)
    return {"n": len(vals), "repr": repr, "values": vals}


def dumps_json(obj, compact=False):
    if compact:
        return json.dumps(obj, separators=(",", ":"), allow_nan=False) + "\n"
    return json.dumps(obj, indent=2, allow_nan=False) + "\n"


def format_csv(seq, repr="s"):
    vals = sequence_values(seq, repr)
    lines = [f"# n={len(vals)} repr={repr}"] + [f"{v:.{SIG_DIGITS}g}" for v in vals]
    return "\n".join(lines) + "\n"


def _build(n, repr, values, source, line):
    if repr not in REPRS:
        raise SequenceFileError(f"repr must be 's' or 'theta', got {repr!r}", line, source)
    if isinstance(n, bool) or not isinstance(n, int) or n < 1:
        raise SequenceFileError(f"n must be a positive integer, got {n!r}", line, source)
    if len(values) != n:
        raise SequenceFileError(f"expected {n} values, found {len(values)}", line, source)
    v = np.asarray(values, dtype=float)
    if repr == "s":
        return PhaseSequence.from_s(v, n)
    return PhaseSequence(v)


def _line_of(text, pattern):
    for i, ln in enumerate(text.splitlines(), 1):
        if pattern in ln:
            return i
    return None


def parse_json(text, source=None):
    """Parse the JSON form into a :class:`PhaseSequence`."""
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as e:
        raise SequenceFileError(f"invalid JSON: {e.msg}", e.lineno, source) from None
    if not isinstance(obj, dict):
        raise SequenceFileError("top level must be an object", 1, source)
    for key in ("n", "repr", "values"):
        if key not in obj:
            raise SequenceFileError(f"missing key {key!r}", 1, source)
    values = obj["values"]
    vline = _line_of(text, '"values"')
    if not isinstance(values, list):
        raise SequenceFileError("'values' must be a list", vline, source)
    for i, v in enumerate(values):
        if isinstance(v, bool) or not isinstance(v, (int, float)) or not np.isfinite(v):
            # pretty-printed files put one value per line after the key
            line = vline + 1 + i if vline is not None and "\n" in text.strip() else vline
            raise SequenceFileError(f"value #{i} is not a finite number: {v!r}", line, source)
    return _build(obj["n"], obj["repr"], values, source, _line_of(text, '"n"'))


def parse_csv(text, source=None):
    """Parse the CSV form into a :class:`PhaseSequence`."""
    lines = text.splitlines()
    header = None
    values = []
    for i, ln in enumerate(lines, 1):
        s = ln.strip()
        if not s:
            continue
        if header is None:
            m = _HEADER.match(s)
            if not m:
                raise SequenceFileError("expected header '# n=<n> repr=<s|theta>'", i, source)
            try:
                n = int(m.group(1))
            except ValueError:
                raise SequenceFileError(f"bad n {m.group(1)!r} in header", i, source) from None
            header = (n, m.group(2), i)
            continue
        if s.startswith("#"):
            continue
        try:
            v = float(s.split(",")[0])
        except ValueError:
            raise SequenceFileError(f"not a number: {s!r}", i, source) from None
        if not np.isfinite(v):
            raise SequenceFileError(f"not a finite number: {s!r}", i, source)
        values.append(v)
    if header is None:
        raise SequenceFileError("empty file", 1, source)
    n, repr, hline = header
    return _build(n, repr, values, source, hline)


def parse_sequence(text, source=None):
    """Parse either form; JSON is recognized by a leading ``{``."""
    if text.lstrip().startswith("{"):
        return parse_json(text, source)
    return parse_csv(text, source)


def read_sequence(path):
    """Read a sequence file (``"-"`` reads standard input)."""
    if str(path) == "-":
        import sys
        return parse_sequence(sys.stdin.read(), "<stdin>")
    p = Path(path)
    return parse_sequence(p.read_text(), str(p))


def atomic_write(path, text):
    """Write ``text`` to ``path`` through a temporary file and a rename."""
    p = Path(path)
    fd, tmp = tempfile.mkstemp(prefix=f".{p.name}.", dir=p.parent or ".")
    try:
        with os.fdopen(fd, "w") as f:
            f.write(text)
        os.replace(tmp, p)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def write_sequence(seq, path, repr="s", compact=False, extra=None):
    """Write ``seq`` as JSON, or as CSV when ``path`` ends in ``.csv``."""
    if str(path).endswith(".csv"):
        atomic_write(path, format_csv(seq, repr))
        return
    obj = sequence_to_dict(seq, repr)
    if extra:
        obj.update(extra)
    atomic_write(path, dumps_json(obj, compact))
