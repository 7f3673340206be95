"""Hot numeric kernels over the flat 3-neighbor representation.

A graph is held as ``neighbors`` (shape ``(order, 3)`` int64, every row
sorted ascending) plus ``states`` (shape ``(order,)`` uint8).  The two
kernels below are the per-step inner loops:

``step_tables``
    compute each vertex's configuration (4*state + number of alive
    neighbors), look up the new state and the division flag in the rule
    tables, and count divisions.

``divide_all``
    perform every flagged division in one batch.  A dividing vertex v is
    replaced by three clones on consecutive indices; the clones form a
    triangle and inherit v's former neighbors one each, ascending former
    neighbor index to ascending clone index.  Vertices above v shift up
    by two.  Processing the flags lowest-index-first with in-place
    shifting is equivalent to a single relabeling pass: the final index
    of old vertex v is v + 2*(dividers below v), so the whole surgery is
    done in O(order) regardless of how many vertices divide.

Two interchangeable backends are provided.  The numba backend compiles
explicit loops with @njit; the numpy backend expresses the same
arithmetic with vectorized operations.  Selection happens once at import
time:

* numba not importable          -> numpy backend
* GRA_PURE_NUMPY set (not "0")  -> numpy backend
* otherwise                     -> numba backend

Both backends stay importable so differential tests and the benchmark
can compare them on identical inputs.
"""

import os
from typing import Callable, NamedTuple

import numpy as np

try:
    from numba import njit

    HAS_NUMBA = True
except ImportError:  # pragma: no cover - exercised only without numba
    HAS_NUMBA = False

    def njit(*args, **kwargs):
        def wrap(func):
            return func

        return wrap


PURE_NUMPY_REQUESTED = os.environ.get("GRA_PURE_NUMPY", "") not in ("", "0")


# --------------------------------------------------------------------------
# numpy backend
# --------------------------------------------------------------------------

def _np_step_tables(neighbors, states, next_table, div_table):
    s = states.astype(np.int64)
    conf = 4 * s + s[neighbors].sum(axis=1)
    new_states = next_table[conf]
    div = div_table[conf]
    return new_states, div, int(div.sum())


def _np_divide_all(neighbors, states, div, n_div):
    o = states.shape[0]
    div64 = div.astype(np.int64)
    # dividers strictly below v shift it up by 2 each
    newpos = np.arange(o, dtype=np.int64) + 2 * (np.cumsum(div64) - div64)
    o2 = o + 2 * n_div

    # rank_back[v, k]: position of v inside the sorted row of its k-th
    # neighbor; that is the clone slot v attaches to if that neighbor
    # divides this step.
    rank_back = np.argmax(
        neighbors[neighbors] == np.arange(o, dtype=np.int64)[:, None, None], axis=2
    )
    target = newpos[neighbors] + np.where(div[neighbors] != 0, rank_back, 0)

    new_neighbors = np.empty((o2, 3), dtype=np.int64)
    new_states = np.empty(o2, dtype=np.uint8)

    keep = div == 0
    new_neighbors[newpos[keep]] = np.sort(target[keep], axis=1)
    new_states[newpos] = states

    div_idx = np.flatnonzero(~keep)
    p = newpos[div_idx]
    partners = ((1, 2), (0, 2), (0, 1))
    for k in range(3):
        a, b = partners[k]
        rows = np.stack((p + a, p + b, target[div_idx, k]), axis=1)
        rows.sort(axis=1)
        new_neighbors[p + k] = rows
    new_states[p + 1] = states[div_idx]
    new_states[p + 2] = states[div_idx]
    return new_neighbors, new_states


# --------------------------------------------------------------------------
# loop implementations (compiled by numba when available)
# --------------------------------------------------------------------------

def _loop_step_tables(neighbors, states, next_table, div_table):
    o = states.shape[0]
    new_states = np.empty(o, np.uint8)
    div = np.empty(o, np.uint8)
    n_div = 0
    for v in range(o):
        c = (
            4 * states[v]
            + states[neighbors[v, 0]]
            + states[neighbors[v, 1]]
            + states[neighbors[v, 2]]
        )
        new_states[v] = next_table[c]
        d = div_table[c]
        div[v] = d
        n_div += d
    return new_states, div, n_div


def _loop_divide_all(neighbors, states, div, n_div):
    o = states.shape[0]
    newpos = np.empty(o, np.int64)
    shift = 0
    for v in range(o):
        newpos[v] = v + shift
        if div[v] != 0:
            shift += 2
    o2 = o + shift
    new_neighbors = np.empty((o2, 3), np.int64)
    new_states = np.empty(o2, np.uint8)
    for v in range(o):
        p = newpos[v]
        if div[v] != 0:
            for k in range(3):
                u = neighbors[v, k]
                t = newpos[u]
                if div[u] != 0:
                    # clone slot of the mutual edge on u's side
                    if neighbors[u, 1] == v:
                        t += 1
                    elif neighbors[u, 2] == v:
                        t += 2
                # clone k: two triangle partners plus the inherited edge
                if k == 0:
                    x = p + 1
                    y = p + 2
                elif k == 1:
                    x = p + 0
                    y = p + 2
                else:
                    x = p + 0
                    y = p + 1
                if t < x:
                    new_neighbors[p + k, 0] = t
                    new_neighbors[p + k, 1] = x
                    new_neighbors[p + k, 2] = y
                elif t < y:
                    new_neighbors[p + k, 0] = x
                    new_neighbors[p + k, 1] = t
                    new_neighbors[p + k, 2] = y
                else:
                    new_neighbors[p + k, 0] = x
                    new_neighbors[p + k, 1] = y
                    new_neighbors[p + k, 2] = t
            new_states[p] = states[v]
            new_states[p + 1] = states[v]
            new_states[p + 2] = states[v]
        else:
            # ascending original neighbors map to ascending targets, so
            # the row stays sorted without an explicit sort
            for k in range(3):
                u = neighbors[v, k]
                t = newpos[u]
                if div[u] != 0:
                    if neighbors[u, 1] == v:
                        t += 1
                    elif neighbors[u, 2] == v:
                        t += 2
                new_neighbors[p, k] = t
            new_states[p] = states[v]
    return new_neighbors, new_states


class Backend(NamedTuple):
    name: str
    step_tables: Callable
    divide_all: Callable


NUMPY_BACKEND = Backend("numpy", _np_step_tables, _np_divide_all)

if HAS_NUMBA:
    _nb_step_tables = njit(cache=True)(_loop_step_tables)
    _nb_divide_all = njit(cache=True)(_loop_divide_all)
    NUMBA_BACKEND = Backend("numba", _nb_step_tables, _nb_divide_all)
else:
    NUMBA_BACKEND = None

if NUMBA_BACKEND is not None and not PURE_NUMPY_REQUESTED:
    ACTIVE = NUMBA_BACKEND
else:
    ACTIVE = NUMPY_BACKEND


def backend_name() -> str:
    return ACTIVE.name
