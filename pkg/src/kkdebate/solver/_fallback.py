"""Pure-Python (numpy-vectorized) twin of the compiled kernel.

Worlds are processed in ascending index order in fixed-size chunks, so the
discovery order of role codes matches the compiled kernel exactly.
"""

from __future__ import annotations

import numpy as np

from ._program import (
    OP_COUNT_LIARS,
    OP_COUNT_ROLE,
    OP_ROLE,
    OP_SAME,
    OP_TRUTH,
    PRED_EXACT,
)

CHUNK = 1 << 16


def _pred(kind: int, val: int, count: np.ndarray) -> np.ndarray:
    if kind == PRED_EXACT:
        return count == val
    return (count & 1) == val


def enumerate_worlds(n, nodes, masks, roots, expect, max_solutions, ready=None):
    # ``ready`` only matters to the depth-first kernel; every world is scored here.
    total = 1 << (2 * n)
    pow3 = 3 ** np.arange(n, dtype=np.int64)
    bits = np.uint64(1) << np.arange(n, dtype=np.uint64)
    seen: set[int] = set()
    out: list[int] = []
    checked = 0

    for start in range(0, total, CHUNK):
        w = np.arange(start, min(start + CHUNK, total), dtype=np.uint64)
        codes = (w[None, :] >> (np.uint64(2) * np.arange(n, dtype=np.uint64))[:, None]) & np.uint64(3)
        role = np.minimum(codes, np.uint64(2)).astype(np.int64)
        truth = (codes == 0) | (codes == 3)
        rmask = [((role == r) * bits[:, None]).sum(axis=0, dtype=np.uint64) for r in range(3)]
        tmask = (truth * bits[:, None]).sum(axis=0, dtype=np.uint64)
        rcode = (role * pow3[:, None]).sum(axis=0)

        def ev(i: int) -> np.ndarray:
            op, a, b, r, kind, val, c1, c2 = (int(x) for x in nodes[i])
            if op == OP_ROLE:
                return role[a] == r
            if op == OP_TRUTH:
                return truth[a] == bool(val)
            if op == OP_SAME:
                return role[a] == role[b]
            if op == OP_COUNT_ROLE:
                return _pred(kind, val, np.bitwise_count(rmask[r] & masks[i]))
            if op == OP_COUNT_LIARS:
                return _pred(kind, val, np.bitwise_count(~tmask & masks[i]))
            return ev(c1) != ev(c2)

        ok = np.ones(w.shape[0], dtype=bool)
        for root, exp in zip(roots, expect):
            v = ev(int(root))
            ok &= v if exp < 0 else (v == truth[int(exp)])
        hits = rcode[ok]
        stop = w.shape[0]
        for pos, code in zip(np.flatnonzero(ok), hits):
            code = int(code)
            if code in seen:
                continue
            seen.add(code)
            out.append(code)
            if max_solutions > 0 and len(out) >= max_solutions:
                stop = int(pos) + 1
                break
        checked += stop
        if max_solutions > 0 and len(out) >= max_solutions:
            break
    return out, checked
