# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled depth-first enumeration over (role, truth-bit) worlds.

Players are assigned in index order, four choices each: knight (bit 1),
knave (bit 0), spy lying (bit 0), spy truthful (bit 1).  A constraint is
checked at the depth where its last referenced player gets assigned, so
inconsistent prefixes are cut without visiting their completions.
"""

from libc.stdint cimport int64_t, uint64_t
from libc.stdlib cimport free, malloc

cdef extern from *:
    int __builtin_popcountll(unsigned long long) nogil

DEF MAXP = 64


cdef struct Node:
    int64_t op, a, b, role, kind, val, c1, c2
    uint64_t mask


cdef inline bint _pred(int64_t kind, int64_t val, int count) noexcept nogil:
    if kind == 0:
        return count == val
    return (count & 1) == val


cdef bint _eval(const Node* nodes, int64_t i, const uint64_t* rmask, uint64_t tmask,
                const int* role) noexcept nogil:
    cdef const Node* nd = &nodes[i]
    if nd.op == 0:
        return role[nd.a] == nd.role
    if nd.op == 1:
        return <int64_t>((tmask >> nd.a) & 1) == nd.val
    if nd.op == 2:
        return role[nd.a] == role[nd.b]
    if nd.op == 3:
        return _pred(nd.kind, nd.val, __builtin_popcountll(rmask[nd.role] & nd.mask))
    if nd.op == 4:
        return _pred(nd.kind, nd.val, __builtin_popcountll(~tmask & nd.mask))
    return _eval(nodes, nd.c1, rmask, tmask, role) != _eval(nodes, nd.c2, rmask, tmask, role)


def enumerate_worlds(int n, const int64_t[:, ::1] nodes, const uint64_t[::1] masks,
                     const int64_t[::1] roots, const int64_t[::1] expect,
                     long max_solutions, const int64_t[::1] ready):
    """Return (distinct role codes in discovery order, complete worlds reached).

    A role code is sum(role_i * 3**i).  The search stops once
    ``max_solutions`` distinct codes are found (0 = exhaustive).
    """
    if n < 1 or n > 40:
        raise ValueError("player count out of range for the compiled kernel")
    cdef Py_ssize_t m = nodes.shape[0], nc = roots.shape[0]
    cdef Node* nd = <Node*>malloc(max(m, 1) * sizeof(Node))
    if nd == NULL:
        raise MemoryError()
    cdef Py_ssize_t i
    for i in range(m):
        nd[i].op = nodes[i, 0]
        nd[i].a = nodes[i, 1]
        nd[i].b = nodes[i, 2]
        nd[i].role = nodes[i, 3]
        nd[i].kind = nodes[i, 4]
        nd[i].val = nodes[i, 5]
        nd[i].c1 = nodes[i, 6]
        nd[i].c2 = nodes[i, 7]
        nd[i].mask = masks[i]

    # constraints checked at depth k are cstart[k] .. cstart[k+1]-1
    cdef int64_t cstart[MAXP + 1]
    cdef int64_t pow3[MAXP]
    cdef int64_t space = 1
    cdef int k, j
    for k in range(n):
        pow3[k] = space
        space *= 3
    j = 0
    for k in range(n + 1):
        while j < nc and ready[j] < k:
            j += 1
        cstart[k] = j

    seen_buf = bytearray(space)
    cdef unsigned char[::1] seen = seen_buf
    out = []

    cdef uint64_t rm[MAXP + 1][3]
    cdef uint64_t tm[MAXP + 1]
    cdef int64_t rc[MAXP + 1]
    cdef int choice[MAXP]
    cdef int role[MAXP]
    cdef int c, r
    cdef uint64_t bit, checked = 0
    cdef long found = 0
    cdef bint ok, v
    cdef uint64_t* rmk

    rm[0][0] = 0
    rm[0][1] = 0
    rm[0][2] = 0
    tm[0] = 0
    rc[0] = 0
    k = 0
    choice[0] = -1
    try:
        with nogil:
            while k >= 0:
                choice[k] += 1
                c = choice[k]
                if c > 3:
                    k -= 1
                    continue
                bit = (<uint64_t>1) << k
                r = c if c < 2 else 2
                role[k] = r
                rm[k + 1][0] = rm[k][0]
                rm[k + 1][1] = rm[k][1]
                rm[k + 1][2] = rm[k][2]
                rm[k + 1][r] |= bit
                tm[k + 1] = tm[k] | bit if (c == 0 or c == 3) else tm[k]
                rc[k + 1] = rc[k] + r * pow3[k]
                if k == n - 1:
                    checked += 1
                    if seen[rc[k + 1]]:
                        continue
                rmk = rm[k + 1]
                ok = True
                for j in range(cstart[k], cstart[k + 1]):
                    v = _eval(nd, roots[j], rmk, tm[k + 1], role)
                    if expect[j] < 0:
                        if not v:
                            ok = False
                            break
                    elif v != <bint>((tm[k + 1] >> expect[j]) & 1):
                        ok = False
                        break
                if not ok:
                    continue
                if k == n - 1:
                    seen[rc[k + 1]] = 1
                    found += 1
                    with gil:
                        out.append(rc[k + 1])
                    if max_solutions > 0 and found >= max_solutions:
                        break
                else:
                    k += 1
                    choice[k] = -1
    finally:
        free(nd)
    return out, checked
