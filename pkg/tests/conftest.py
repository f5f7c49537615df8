import json
from pathlib import Path

import numpy as np
import pytest

DATA = Path(__file__).parent / "data"


def load(name):
    return json.loads((DATA / name).read_text())


@pytest.fixture(scope="session")
def golden8():
    return load("golden8.json")


@pytest.fixture(scope="session")
def n23_reference():
    d = load("n23_reference.json")
    return np.exp(2j * np.pi * np.asarray(d["values"]) / d["n"])


# Brute-force oracles, written from the definitions with explicit loops.

def direct_dft(x):
    n = len(x)
    return np.array([sum(np.exp(-2j * np.pi * l * k / n) * x[l] for l in range(n))
                     for k in range(n)]) / np.sqrt(n)


def direct_idft(X):
    n = len(X)
    return np.array([sum(np.exp(2j * np.pi * l * k / n) * X[l] for l in range(n))
                     for k in range(n)]) / np.sqrt(n)


def direct_circular(x):
    n = len(x)
    return np.array([sum(x[l] * np.conj(x[(l - k) % n]) for l in range(n)) for k in range(n)])


def direct_noncircular(x):
    n = len(x)
    return np.array([sum(x[k] * np.conj(x[k + t]) for k in range(n - t)) for t in range(n)])


def s_circ_dist(u, v, n=8):
    e = np.mod(np.asarray(u) - np.asarray(v) + n / 2, n) - n / 2
    return float(np.max(np.abs(e)))
