"""Exact dense linear algebra over Fraction.

All matrices are lists of lists, all vectors plain lists. Sizes here are tiny
(a, b <= ~20), so O(n^3) Gaussian elimination with exact pivoting is the right
tool. Float problems go to numpy in the calling modules instead.
"""

from fractions import Fraction


def transpose(A):
    return [list(col) for col in zip(*A)]


def mat_vec(A, v):
    return [sum(row[k] * v[k] for k in range(len(v))) for row in A]


def vec_mat(v, A):
    n = len(A)
    cols = len(A[0]) if n else 0
    return [sum(v[i] * A[i][j] for i in range(n)) for j in range(cols)]


def mat_mul(A, B):
    Bt = transpose(B)
    return [[sum(x * y for x, y in zip(row, col)) for col in Bt] for row in A]


def identity(n):
    return [[Fraction(1) if i == j else Fraction(0) for j in range(n)] for i in range(n)]


def rref(A):
    """Reduced row echelon form. Returns (R, pivot_columns).

    Entries are coerced to Fraction; the input is not modified.
    """
    R = [[Fraction(x) for x in row] for row in A]
    rows = len(R)
    cols = len(R[0]) if rows else 0
    pivots = []
    r = 0
    for c in range(cols):
        pivot = next((i for i in range(r, rows) if R[i][c] != 0), None)
        if pivot is None:
            continue
        R[r], R[pivot] = R[pivot], R[r]
        inv = Fraction(1) / R[r][c]
        R[r] = [x * inv for x in R[r]]
        for i in range(rows):
            if i != r and R[i][c] != 0:
                f = R[i][c]
                R[i] = [x - f * y for x, y in zip(R[i], R[r])]
        pivots.append(c)
        r += 1
        if r == rows:
            break
    return R, pivots


def solve(A, b):
    """Solve A x = b exactly.

    Returns (kind, payload):
      ("unique", x)          one solution
      ("underdetermined", (x0, nullspace_basis))  affine solution set
      ("inconsistent", row)  witness row index of the RREF with 0 = nonzero
    """
    rows = len(A)
    cols = len(A[0]) if rows else 0
    aug = [[Fraction(x) for x in A[i]] + [Fraction(b[i])] for i in range(rows)]
    R, pivots = rref(aug)
    if cols in pivots:
        return "inconsistent", pivots.index(cols)
    pivot_set = set(pivots)
    x0 = [Fraction(0)] * cols
    for r, c in enumerate(pivots):
        x0[c] = R[r][cols]
    free = [c for c in range(cols) if c not in pivot_set]
    if not free:
        return "unique", x0
    basis = []
    for fcol in free:
        v = [Fraction(0)] * cols
        v[fcol] = Fraction(1)
        for r, c in enumerate(pivots):
            v[c] = -R[r][fcol]
        basis.append(v)
    return "underdetermined", (x0, basis)


def nullspace(A):
    """Basis of {x : A x = 0}, exact."""
    rows = len(A)
    cols = len(A[0]) if rows else 0
    if rows == 0:
        return [[Fraction(1) if i == j else Fraction(0) for j in range(cols)] for i in range(cols)]
    R, pivots = rref(A)
    pivot_set = set(pivots)
    basis = []
    for fcol in (c for c in range(cols) if c not in pivot_set):
        v = [Fraction(0)] * cols
        v[fcol] = Fraction(1)
        for r, c in enumerate(pivots):
            v[c] = -R[r][fcol]
        basis.append(v)
    return basis
