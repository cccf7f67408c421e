"""Exact linear algebra over Q(q) (or any exact field via duck typing).

Rows are dicts mapping column keys to field elements; dense matrices are
lists of lists.  Field elements must support +, -, *, / and an is_zero test
(Scalar has .is_zero(); Fractions compare to 0).
"""

from __future__ import annotations

from fractions import Fraction

from .scalars import Scalar, ZERO, ONE


def _iszero(x):
    if isinstance(x, Scalar):
        return x.is_zero()
    return x == 0


def rref_sparse(rows, column_order):
    """Reduced row echelon form of sparse rows.

    Pivots are chosen greedily along column_order, so the pivot set is the
    earliest independent set in that order.  Returns (pivot_rows, pivot_cols)
    where pivot_rows[c] is the fully reduced row with leading 1 at column c,
    expressed over non-pivot columns only.
    """
    col_rank = {c: k for k, c in enumerate(column_order)}
    pivot_rows = {}
    work = []
    for r in rows:
        r = {c: v for c, v in r.items() if not _iszero(v)}
        if r:
            work.append(r)

    def reduce_row(row):
        changed = True
        while changed:
            changed = False
            for c in list(row):
                if c not in row:
                    continue
                p = pivot_rows.get(c)
                if p is None:
                    continue
                f = row.pop(c)
                for cc, vv in p.items():
                    if cc == c:
                        continue
                    s = row.get(cc, None)
                    s = -(vv * f) if s is None else s - vv * f
                    if _iszero(s):
                        row.pop(cc, None)
                    else:
                        row[cc] = s
                changed = True
        return row

    for row in work:
        row = reduce_row(row)
        if not row:
            continue
        piv = min(row, key=lambda c: col_rank[c])
        pv = row[piv]
        newrow = {c: v / pv for c, v in row.items()}
        newrow[piv] = _one_like(pv)
        # eliminate the new pivot from existing pivot rows
        for c, p in pivot_rows.items():
            f = p.get(piv)
            if f is None or _iszero(f):
                continue
            p.pop(piv, None)
            for cc, vv in newrow.items():
                if cc == piv:
                    continue
                s = p.get(cc, None)
                s = -(vv * f) if s is None else s - vv * f
                if _iszero(s):
                    p.pop(cc, None)
                else:
                    p[cc] = s
        pivot_rows[piv] = newrow
    return pivot_rows, sorted(pivot_rows, key=lambda c: col_rank[c])


def sparse_rank(rows, column_order):
    _, pivots = rref_sparse(rows, column_order)
    return len(pivots)


# ---------------------------------------------------------------------------
# dense helpers (small matrices)

def _one_like(x):
    if isinstance(x, Scalar):
        return ONE
    return Fraction(1)


def _zero_like(x):
    if isinstance(x, Scalar):
        return ZERO
    return Fraction(0)


def identity(n, one=None, zero=None):
    one = ONE if one is None else one
    zero = ZERO if zero is None else zero
    return [[one if i == j else zero for j in range(n)] for i in range(n)]


def mat_mul(a, b):
    n, k, m = len(a), len(b), len(b[0])
    out = []
    for i in range(n):
        row = []
        ai = a[i]
        for j in range(m):
            acc = None
            for t in range(k):
                x = ai[t]
                if _iszero(x):
                    continue
                y = b[t][j]
                if _iszero(y):
                    continue
                p = x * y
                acc = p if acc is None else acc + p
            row.append(acc if acc is not None else _zero_like(ai[0]))
        out.append(row)
    return out


def mat_sub(a, b):
    return [[x - y for x, y in zip(ra, rb)] for ra, rb in zip(a, b)]


def mat_eq_zero(a):
    return all(_iszero(x) for row in a for x in row)


def mat_inverse(a):
    """Exact inverse via Gauss-Jordan; raises ValueError if singular."""
    n = len(a)
    one = _one_like(a[0][0])
    zero = _zero_like(a[0][0])
    aug = [list(row) + [one if i == j else zero for j in range(n)]
           for i, row in enumerate(a)]
    for col in range(n):
        piv = None
        for r in range(col, n):
            if not _iszero(aug[r][col]):
                piv = r
                break
        if piv is None:
            raise ValueError("matrix is singular")
        aug[col], aug[piv] = aug[piv], aug[col]
        pv = aug[col][col]
        aug[col] = [x / pv for x in aug[col]]
        for r in range(n):
            if r == col:
                continue
            f = aug[r][col]
            if _iszero(f):
                continue
            aug[r] = [x - f * y for x, y in zip(aug[r], aug[col])]
    return [row[n:] for row in aug]


def kernel_basis(a):
    """Basis of the right kernel {v : a v = 0} of a dense matrix."""
    if not a:
        return []
    n_cols = len(a[0])
    rows = [{j: x for j, x in enumerate(row) if not _iszero(x)} for row in a]
    pivot_rows, pivots = rref_sparse(rows, list(range(n_cols)))
    pivot_set = set(pivots)
    one = _one_like(a[0][0]) if a[0] else Fraction(1)
    zero = _zero_like(a[0][0]) if a[0] else Fraction(0)
    basis = []
    for free in range(n_cols):
        if free in pivot_set:
            continue
        v = [zero] * n_cols
        v[free] = one
        for p, row in pivot_rows.items():
            c = row.get(free)
            if c is not None and not _iszero(c):
                v[p] = -c
        basis.append(v)
    return basis


def rank_at_specializations(rows, column_order, points):
    """Rank of the same sparse system with q specialized to each point.

    Entries must be Scalars without poles at the points; returns a dict
    point -> rank computed with plain Fraction arithmetic.
    """
    out = {}
    for q0 in points:
        frows = []
        for r in rows:
            fr = {}
            for c, v in r.items():
                x = v.evaluate_at(q0)
                if x:
                    fr[c] = x
            frows.append(fr)
        out[q0] = sparse_rank(frows, column_order)
    return out
