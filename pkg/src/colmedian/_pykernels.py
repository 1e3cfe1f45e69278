"""Pure-Python (numpy) implementations of the hot kernels.

Used when the compiled extension is unavailable or disabled via
COLMEDIAN_PURE_PYTHON=1.  Semantics match colmedian._core exactly; sums that
steer tie-breaking are accumulated in the same order as the C loops.
"""

from __future__ import annotations

import itertools

import numpy as np


def evaluate_partition(
    dcf: np.ndarray,
    dff: np.ndarray,
    cell_start: np.ndarray,
    cell_clients: np.ndarray,
    cell_cost: np.ndarray,
    a_idx: np.ndarray,
    b_idx: np.ndarray,
    eps: float,
    ell: int,
    d_guess: float,
):
    """Greedy closed-set proposal for one (A, B, D) hint.

    For every anchor f in A, grow f's required set (facilities that must be
    closed with f under the hint) until no A-facility attracts more than
    eps*D/(3*ell^2) of rerouted cost, then charge f the marginal cost of
    closing the set.  Close the ell anchors with the smallest marginals.

    Returns (feasible, closed_indices, true_cost); infeasible when fewer
    than ell anchors have finite marginal cost.
    """
    m = dff.shape[0]
    n = dcf.shape[0]
    n_a = a_idx.shape[0]
    threshold = eps * d_guess / (3.0 * ell * ell)
    marginals = np.full(n_a, np.inf)

    for ai in range(n_a):
        f = int(a_idx[ai])
        s_f = dff[f, b_idx].min()
        in_r = np.zeros(m, dtype=bool)
        in_r[a_idx[dff[f, a_idx] < s_f]] = True
        in_r[f] = True
        r_size = int(in_r.sum())
        cell = cell_clients[cell_start[f] : cell_start[f + 1]]
        rows = dcf[cell] if cell.size else None
        while r_size <= ell:
            if cell.size:
                masked = np.where(in_r[None, :], np.inf, rows)
                dest = masked.argmin(axis=1)  # first minimum = smallest index
                dmin = masked[np.arange(cell.size), dest]
                acc = np.bincount(dest, weights=dmin, minlength=m)
            else:
                acc = np.zeros(m)
            over = a_idx[~in_r[a_idx] & (acc[a_idx] > threshold)]
            if over.size == 0:
                total = 0.0
                for g in range(m):  # sequential: bit-identical to the C core
                    total += acc[g]
                marginals[ai] = total - cell_cost[f]
                break
            in_r[int(over[0])] = True
            r_size += 1

    order = np.lexsort((a_idx, marginals))
    if n_a < ell or (ell > 0 and not np.isfinite(marginals[order[ell - 1]])):
        return False, None, np.inf
    closed = np.sort(a_idx[order[:ell]]).astype(np.int64)

    open_mask = np.ones(m, dtype=bool)
    open_mask[closed] = False
    if n:
        per_client = dcf[:, open_mask].min(axis=1)
        cost = 0.0
        for v in per_client:
            cost += v
    else:
        cost = 0.0
    return True, closed, float(cost)


def exhaustive_best(dcf: np.ndarray, m: int, ell: int):
    """Cheapest ell-subset to close, lexicographically-first on ties.

    Enumerates subsets in lexicographic order; chunks are evaluated with
    vectorized masking to keep the Python overhead per subset small.
    """
    n = dcf.shape[0]
    best_cost = np.inf
    best = None
    if ell == 0:
        cost = float(dcf.min(axis=1).sum()) if n else 0.0
        return np.empty(0, dtype=np.int64), cost

    chunk_rows = max(1, 4_000_000 // max(1, n * m))
    combos = itertools.combinations(range(m), ell)
    while True:
        chunk = list(itertools.islice(combos, chunk_rows))
        if not chunk:
            break
        k = len(chunk)
        sel = np.array(chunk, dtype=np.int64)
        mask = np.zeros((k, m), dtype=bool)
        mask[np.arange(k)[:, None], sel] = True
        if n:
            masked = np.where(mask[:, None, :], np.inf, dcf[None, :, :])
            costs = masked.min(axis=2).sum(axis=1)
        else:
            costs = np.zeros(k)
        i = int(costs.argmin())
        if costs[i] < best_cost:
            best_cost = float(costs[i])
            best = sel[i]
    return best.astype(np.int64), best_cost
