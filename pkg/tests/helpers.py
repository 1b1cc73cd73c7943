"""Independent scalar-path oracles shared across the test modules.

Everything here recomputes quantities from first principles (explicit loops,
eigendecompositions) so package results are checked against a second route,
not against themselves.
"""

import cmath
import math

import numpy as np
import scipy.linalg

from beamform.codebook import materialize, steering_gram, valid_solutions

GRAM_TOL = 1e-9


def channel_triple_loop(n_tx, n_rx, gains, aod, aoa, spacing=0.5):
    """Entry-by-entry channel assembly with scalar math only."""
    l_paths = len(gains)
    kd = 2.0 * math.pi * spacing
    scale = math.sqrt(n_tx * n_rx / l_paths)
    h = np.zeros((n_rx, n_tx), dtype=complex)
    for r in range(n_rx):
        for t in range(n_tx):
            acc = 0.0 + 0.0j
            for l in range(l_paths):
                a_r = cmath.exp(1j * kd * r * math.sin(aoa[l])) / math.sqrt(n_rx)
                a_t = cmath.exp(1j * kd * t * math.sin(aod[l])) / math.sqrt(n_tx)
                acc += gains[l] * a_r * a_t.conjugate()
            h[r, t] = scale * acc
    return h


def eig_cost(g, combiner, rho, sigma2, n_streams):
    """Objective via eigenvalues of R_n^{-1} g g^H instead of a determinant."""
    rn = sigma2 * (combiner.conj().T @ combiner)
    lam = scipy.linalg.eigvals(np.linalg.solve(rn, g @ g.conj().T))
    prod = 1.0 + 0.0j
    for v in lam:
        prod *= 1.0 + (rho / n_streams) * v
    return prod.real


def pair_cost(h, p_idx, c_idx, spec_t, spec_r, rho, sigma2=1.0, n_streams=None):
    """Raw-formula cost of one index pair; floor 1.0 for coinciding columns."""
    pm = materialize(p_idx, spec_t)
    cm = materialize(c_idx, spec_r)
    ns = pm.shape[1] if n_streams is None else n_streams
    gram = cm.conj().T @ cm
    if np.linalg.det(gram).real < GRAM_TOL:
        return 1.0
    g = cm.conj().T @ h @ pm
    rn = sigma2 * gram
    m = np.eye(cm.shape[1]) + (rho / ns) * np.linalg.solve(rn, g @ g.conj().T)
    return np.linalg.det(m).real


def brute_best_pair(h, spec_t, spec_r, rho, sigma2=1.0):
    """Loop over every valid pair; first maximum wins (ascending index order)."""
    best = (-math.inf, None, None)
    for p in valid_solutions(spec_t):
        for c in valid_solutions(spec_r):
            v = pair_cost(h, p, c, spec_t, spec_r, rho, sigma2)
            if v > best[0]:
                best = (v, p, c)
    return best


def brute_best_side(probe, spec):
    """Exhaustive per-side scan through the same probe the search uses."""
    best = (-math.inf, None)
    for tup in valid_solutions(spec):
        v = probe.cost_of(tup)
        if v > best[0]:
            best = (v, tup)
    return best


def is_aliased(indices, spec):
    """True when the tuple's columns numerically coincide (grid mirror pairs)."""
    idx = [q - 1 for q in indices]
    sub = np.asarray(steering_gram(spec)[np.ix_(idx, idx)])
    return np.linalg.det(sub).real < GRAM_TOL


def random_channel(rng, n_tx, n_rx):
    """Unstructured complex Gaussian matrix, for metric-level tests."""
    return (rng.standard_normal((n_rx, n_tx)) + 1j * rng.standard_normal((n_rx, n_tx))) / math.sqrt(2.0)
