"""Exact integer and rational linear algebra.

Everything here runs over Z or Q with arbitrary precision: integer
matrices hold Python ints, rational ones hold ``fractions.Fraction``
(which normalises to positive denominator and lowest terms), and all
decompositions are driven by unimodular row/column operations.  No
floating point appears anywhere.

Main entry points:

* ``snf`` -- Smith normal form S = U*A*V with U, V unimodular and the
  diagonal divisibility chain; pivoting is deterministic (smallest
  absolute nonzero entry, ties broken by row then column index), so
  identical inputs give identical transforms.
* ``hnf_columns`` -- canonical column Hermite form of a lattice basis.
* ``int_kernel`` -- HNF-reduced basis of the saturated kernel lattice.
* ``cokernel_invariants`` -- invariant factors of Z^rows / col-span(A).
* ``rat_solve`` / ``int_solve`` -- deterministic exact solvers.
* ``kernel_with_torsion`` -- kernel of a map from Z^f (+) sum_i Z/m_i
  into a rational vector space.
"""

from fractions import Fraction


class LinAlgError(Exception):
    """Malformed input to an exact linear algebra routine."""


class TorsionObstructionError(LinAlgError):
    """A map claimed to land in a torsion-free group is nonzero on torsion."""


def _check_grid(data, what):
    if not data or not data[0]:
        raise LinAlgError("%s must have at least one row and one column" % what)
    width = len(data[0])
    for row in data:
        if len(row) != width:
            raise LinAlgError("ragged %s: expected %d columns, got %d"
                              % (what, width, len(row)))


class IntMatrix:
    """Immutable integer matrix, row-major, arbitrary precision entries."""

    __slots__ = ("rows", "cols", "data")

    def __init__(self, data):
        data = tuple(tuple(int(x) for x in row) for row in data)
        _check_grid(data, "integer matrix")
        self.data = data
        self.rows = len(data)
        self.cols = len(data[0])

    @classmethod
    def identity(cls, n):
        return cls([[1 if i == j else 0 for j in range(n)] for i in range(n)])

    @classmethod
    def zeros(cls, rows, cols):
        return cls([[0] * cols for _ in range(rows)])

    @classmethod
    def from_columns(cls, columns):
        if not columns:
            raise LinAlgError("from_columns needs at least one column")
        return cls([[col[i] for col in columns] for i in range(len(columns[0]))])

    def column(self, j):
        return tuple(row[j] for row in self.data)

    def columns(self):
        return [self.column(j) for j in range(self.cols)]

    def transpose(self):
        return IntMatrix(list(zip(*self.data)))

    def to_rational(self):
        return RatMatrix([[Fraction(x) for x in row] for row in self.data])

    def is_zero(self):
        return all(x == 0 for row in self.data for x in row)

    def is_identity(self):
        return (self.rows == self.cols
                and all(self.data[i][j] == (1 if i == j else 0)
                        for i in range(self.rows) for j in range(self.cols)))

    def __mul__(self, other):
        if isinstance(other, IntMatrix):
            if self.cols != other.rows:
                raise LinAlgError("dimension mismatch in product: %dx%d times %dx%d"
                                  % (self.rows, self.cols, other.rows, other.cols))
            ot = list(zip(*other.data))
            return IntMatrix([[sum(a * b for a, b in zip(row, col)) for col in ot]
                              for row in self.data])
        return NotImplemented

    def apply(self, vector):
        """Matrix times column vector; works for int or Fraction entries."""
        if len(vector) != self.cols:
            raise LinAlgError("vector length %d does not match %d columns"
                              % (len(vector), self.cols))
        return tuple(sum(a * b for a, b in zip(row, vector)) for row in self.data)

    def __add__(self, other):
        if isinstance(other, IntMatrix):
            if (self.rows, self.cols) != (other.rows, other.cols):
                raise LinAlgError("dimension mismatch in sum")
            return IntMatrix([[a + b for a, b in zip(r1, r2)]
                              for r1, r2 in zip(self.data, other.data)])
        return NotImplemented

    def __sub__(self, other):
        if isinstance(other, IntMatrix):
            return self + (-other)
        return NotImplemented

    def __neg__(self):
        return IntMatrix([[-x for x in row] for row in self.data])

    def scaled(self, c):
        c = int(c)
        return IntMatrix([[c * x for x in row] for row in self.data])

    def __eq__(self, other):
        return isinstance(other, IntMatrix) and self.data == other.data

    def __hash__(self):
        return hash(self.data)

    def __repr__(self):
        return "IntMatrix(%r)" % (list(map(list, self.data)),)


class RatMatrix:
    """Immutable matrix over Q; entries are normalised Fractions."""

    __slots__ = ("rows", "cols", "data")

    def __init__(self, data):
        data = tuple(tuple(Fraction(x) for x in row) for row in data)
        _check_grid(data, "rational matrix")
        self.data = data
        self.rows = len(data)
        self.cols = len(data[0])

    @classmethod
    def from_columns(cls, columns):
        if not columns:
            raise LinAlgError("from_columns needs at least one column")
        return cls([[col[i] for col in columns] for i in range(len(columns[0]))])

    def column(self, j):
        return tuple(row[j] for row in self.data)

    def columns(self):
        return [self.column(j) for j in range(self.cols)]

    def apply(self, vector):
        if len(vector) != self.cols:
            raise LinAlgError("vector length %d does not match %d columns"
                              % (len(vector), self.cols))
        return tuple(sum(a * Fraction(b) for a, b in zip(row, vector))
                     for row in self.data)

    def is_zero(self):
        return all(x == 0 for row in self.data for x in row)

    def __eq__(self, other):
        return isinstance(other, RatMatrix) and self.data == other.data

    def __hash__(self):
        return hash(self.data)

    def __repr__(self):
        return "RatMatrix(%r)" % (list(map(list, self.data)),)


class SnfResult:
    """Smith decomposition S = U * A * V with U, V unimodular."""

    __slots__ = ("U", "S", "V")

    def __init__(self, U, S, V):
        self.U = U
        self.S = S
        self.V = V

    def diagonal(self):
        S = self.S
        return tuple(S.data[i][i] for i in range(min(S.rows, S.cols)))

    def invariant_factors(self):
        return tuple(d for d in self.diagonal() if d != 0)

    def rank(self):
        return len(self.invariant_factors())


class AbelianGroup:
    """Z^free_rank (+) Z/m_1 (+) ... with the divisibility chain m_i | m_{i+1}."""

    __slots__ = ("free_rank", "torsion")

    def __init__(self, free_rank, torsion=()):
        torsion = tuple(int(m) for m in torsion)
        if free_rank < 0:
            raise LinAlgError("negative free rank")
        for m in torsion:
            if m < 2:
                raise LinAlgError("torsion orders must be >= 2, got %d" % m)
        for a, b in zip(torsion, torsion[1:]):
            if b % a != 0:
                raise LinAlgError("torsion list %r is not divisibility-ordered"
                                  % (torsion,))
        self.free_rank = int(free_rank)
        self.torsion = torsion

    def is_trivial(self):
        return self.free_rank == 0 and not self.torsion

    def __eq__(self, other):
        return (isinstance(other, AbelianGroup)
                and self.free_rank == other.free_rank
                and self.torsion == other.torsion)

    def __hash__(self):
        return hash((self.free_rank, self.torsion))

    def __str__(self):
        parts = []
        if self.free_rank == 1:
            parts.append("Z")
        elif self.free_rank > 1:
            parts.append("Z^%d" % self.free_rank)
        parts.extend("Z/%d" % m for m in self.torsion)
        return " + ".join(parts) if parts else "0"

    def __repr__(self):
        return "AbelianGroup(%d, %r)" % (self.free_rank, self.torsion)


# ---------------------------------------------------------------------------
# Smith normal form


def _smallest_pivot(S, t, rows, cols):
    best = None
    for i in range(t, rows):
        for j in range(t, cols):
            a = S[i][j]
            if a != 0:
                key = (abs(a), i, j)
                if best is None or key < best:
                    best = key
    if best is None:
        return None
    return best[1], best[2]


def snf(A):
    """Smith normal form of an IntMatrix.

    Returns an SnfResult with S = U*A*V, S diagonal with nonnegative
    entries d_1 | d_2 | ..., and |det U| = |det V| = 1.  The pivot at
    each step is the smallest-absolute-value nonzero entry of the
    remaining block (row-then-column tie-break), which makes the output
    reproducible bit for bit.
    """
    if not isinstance(A, IntMatrix):
        A = IntMatrix(A)
    rows, cols = A.rows, A.cols
    S = [list(row) for row in A.data]
    U = [[1 if i == j else 0 for j in range(rows)] for i in range(rows)]
    V = [[1 if i == j else 0 for j in range(cols)] for i in range(cols)]

    def swap_rows(i, k):
        if i != k:
            S[i], S[k] = S[k], S[i]
            U[i], U[k] = U[k], U[i]

    def swap_cols(j, k):
        if j != k:
            for row in S:
                row[j], row[k] = row[k], row[j]
            for row in V:
                row[j], row[k] = row[k], row[j]

    def add_row(i, k, c):
        # row_i += c * row_k
        S[i] = [a + c * b for a, b in zip(S[i], S[k])]
        U[i] = [a + c * b for a, b in zip(U[i], U[k])]

    def add_col(j, k, c):
        for row in S:
            row[j] += c * row[k]
        for row in V:
            row[j] += c * row[k]

    t = 0
    while t < rows and t < cols:
        piv = _smallest_pivot(S, t, rows, cols)
        if piv is None:
            break
        swap_rows(t, piv[0])
        swap_cols(t, piv[1])
        # Clear row and column t; floor division leaves remainders that
        # are strictly smaller than the pivot, so re-pivoting converges.
        dirty = False
        for i in range(t + 1, rows):
            if S[i][t] != 0:
                add_row(i, t, -(S[i][t] // S[t][t]))
                if S[i][t] != 0:
                    dirty = True
        for j in range(t + 1, cols):
            if S[t][j] != 0:
                add_col(j, t, -(S[t][j] // S[t][t]))
                if S[t][j] != 0:
                    dirty = True
        if dirty:
            continue
        # Pivot must divide the rest of the block or the divisibility
        # chain can fail; fold the first offending row in and retry.
        offender = None
        for i in range(t + 1, rows):
            for j in range(t + 1, cols):
                if S[i][j] % S[t][t] != 0:
                    offender = i
                    break
            if offender is not None:
                break
        if offender is not None:
            add_row(t, offender, 1)
            continue
        t += 1

    for i in range(min(rows, cols)):
        if S[i][i] < 0:
            S[i] = [-x for x in S[i]]
            U[i] = [-x for x in U[i]]
    return SnfResult(IntMatrix(U), IntMatrix(S), IntMatrix(V))


def determinant(A):
    """Exact determinant by fraction-free (Bareiss) elimination."""
    if not isinstance(A, IntMatrix):
        A = IntMatrix(A)
    if A.rows != A.cols:
        raise LinAlgError("determinant of a non-square matrix")
    n = A.rows
    M = [list(row) for row in A.data]
    sign = 1
    prev = 1
    for k in range(n - 1):
        if M[k][k] == 0:
            swap = next((i for i in range(k + 1, n) if M[i][k] != 0), None)
            if swap is None:
                return 0
            M[k], M[swap] = M[swap], M[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                M[i][j] = (M[i][j] * M[k][k] - M[i][k] * M[k][j]) // prev
            M[i][k] = 0
        prev = M[k][k]
    return sign * M[n - 1][n - 1]


def is_unimodular(A):
    return A.rows == A.cols and determinant(A) in (1, -1)


def int_inverse(A):
    """Exact inverse of a unimodular integer matrix, None otherwise."""
    if A.rows != A.cols:
        return None
    res = snf(A)
    if any(d != 1 for d in res.diagonal()):
        return None
    # S = U A V = I  =>  A^{-1} = V U
    return res.V * res.U


# ---------------------------------------------------------------------------
# Hermite form and kernels


def hnf_columns(columns, dim=None):
    """Canonical column Hermite form of a lattice basis.

    ``columns`` is a list of equal-length integer vectors spanning a
    lattice.  Returns ``(basis, pivot_rows)`` where ``basis`` is the
    canonical list of columns: pivot rows strictly increase, each pivot
    entry is positive and is the first nonzero entry of its column, and
    the entries of earlier columns in every pivot row are reduced into
    [0, pivot).  Zero columns are dropped.
    """
    if dim is None:
        if not columns:
            raise LinAlgError("cannot infer dimension of an empty basis")
        dim = len(columns[0])
    work = [list(c) for c in columns]
    for c in work:
        if len(c) != dim:
            raise LinAlgError("kernel basis vectors have mixed lengths")
    placed = 0
    pivot_rows = []
    for row in range(dim):
        live = [j for j in range(placed, len(work)) if work[j][row] != 0]
        while len(live) > 1:
            j0 = min(live, key=lambda j: (abs(work[j][row]), j))
            for j in live:
                if j != j0:
                    q = work[j][row] // work[j0][row]
                    work[j] = [a - q * b for a, b in zip(work[j], work[j0])]
            live = [j for j in live if work[j][row] != 0]
        if not live:
            continue
        j0 = live[0]
        work[placed], work[j0] = work[j0], work[placed]
        if work[placed][row] < 0:
            work[placed] = [-x for x in work[placed]]
        pivot = work[placed][row]
        for j in range(placed):
            q = work[j][row] // pivot
            if q:
                work[j] = [a - q * b for a, b in zip(work[j], work[placed])]
        pivot_rows.append(row)
        placed += 1
    return [tuple(c) for c in work[:placed]], pivot_rows


def hnf_solve(basis, pivot_rows, vector):
    """Express ``vector`` in an HNF column basis; None if not in the lattice."""
    coeffs = []
    residual = list(vector)
    for idx, row in enumerate(pivot_rows):
        pivot = basis[idx][row]
        if residual[row] % pivot != 0:
            return None
        q = residual[row] // pivot
        coeffs.append(q)
        if q:
            residual = [a - q * b for a, b in zip(residual, basis[idx])]
    if any(x != 0 for x in residual):
        return None
    return coeffs


def int_kernel(A):
    """HNF-reduced basis of the saturated lattice {x in Z^cols : A x = 0}.

    The returned list of integer vectors spans the full kernel lattice,
    which is automatically a direct summand of Z^cols; the empty list
    means the kernel is trivial.
    """
    if not isinstance(A, IntMatrix):
        A = IntMatrix(A)
    res = snf(A)
    diag = res.diagonal()
    kernel_cols = [res.V.column(i) for i in range(A.cols)
                   if i >= len(diag) or diag[i] == 0]
    if not kernel_cols:
        return []
    basis, _ = hnf_columns(kernel_cols, A.cols)
    return basis


def cokernel_invariants(A):
    """Invariant-factor description of Z^rows / column-span(A)."""
    if not isinstance(A, IntMatrix):
        A = IntMatrix(A)
    factors = snf(A).invariant_factors()
    return AbelianGroup(A.rows - len(factors),
                        tuple(d for d in factors if d >= 2))


def int_solve(A, b):
    """One integer solution of A x = b, or None when none exists.

    Deterministic: the solution derives from the Smith transform of A
    with all free coordinates set to zero.
    """
    if not isinstance(A, IntMatrix):
        A = IntMatrix(A)
    if len(b) != A.rows:
        raise LinAlgError("right-hand side length %d does not match %d rows"
                          % (len(b), A.rows))
    res = snf(A)
    c = res.U.apply([int(x) for x in b])
    diag = res.diagonal()
    y = [0] * A.cols
    for i in range(A.rows):
        d = diag[i] if i < len(diag) else 0
        if d == 0:
            if c[i] != 0:
                return None
        else:
            if c[i] % d != 0:
                return None
            if i < A.cols:
                y[i] = c[i] // d
    return res.V.apply(y)


# ---------------------------------------------------------------------------
# Rational elimination


def rat_solve(A, b):
    """One exact solution of A x = b over Q, or None when inconsistent.

    Gaussian elimination with leftmost pivots; free variables are set
    to zero, so the answer is the reduced-echelon particular solution.
    """
    if not isinstance(A, RatMatrix):
        A = RatMatrix(A)
    if len(b) != A.rows:
        raise LinAlgError("right-hand side length %d does not match %d rows"
                          % (len(b), A.rows))
    m = [list(row) + [Fraction(v)] for row, v in zip(A.data, b)]
    rows, cols = A.rows, A.cols
    pivot_cols = []
    r = 0
    for c in range(cols):
        pr = next((i for i in range(r, rows) if m[i][c] != 0), None)
        if pr is None:
            continue
        m[r], m[pr] = m[pr], m[r]
        inv = 1 / m[r][c]
        m[r] = [x * inv for x in m[r]]
        for i in range(rows):
            if i != r and m[i][c] != 0:
                f = m[i][c]
                m[i] = [x - f * y for x, y in zip(m[i], m[r])]
        pivot_cols.append(c)
        r += 1
        if r == rows:
            break
    for i in range(r, rows):
        if m[i][cols] != 0:
            return None
    x = [Fraction(0)] * cols
    for i, c in enumerate(pivot_cols):
        x[c] = m[i][cols]
    return tuple(x)


def rat_rank(A):
    if not isinstance(A, RatMatrix):
        A = RatMatrix(A)
    m = [list(row) for row in A.data]
    rank = 0
    for c in range(A.cols):
        pr = next((i for i in range(rank, A.rows) if m[i][c] != 0), None)
        if pr is None:
            continue
        m[rank], m[pr] = m[pr], m[rank]
        for i in range(rank + 1, A.rows):
            if m[i][c] != 0:
                f = m[i][c] / m[rank][c]
                m[i] = [x - f * y for x, y in zip(m[i], m[rank])]
        rank += 1
    return rank


def clear_denominators(A):
    """Integer matrix with the same kernel as the rational input A."""
    scaled_rows = []
    for row in A.data:
        lcm = 1
        for x in row:
            d = x.denominator
            lcm = lcm * d // _gcd(lcm, d)
        scaled_rows.append([int(x * lcm) for x in row])
    return IntMatrix(scaled_rows)


def _gcd(a, b):
    while b:
        a, b = b, a % b
    return abs(a)


class KernelWithTorsion:
    """Kernel of a map Z^f (+) sum Z/m_i -> Q^k whose torsion columns vanish."""

    __slots__ = ("group", "generators", "free_count", "moduli")

    def __init__(self, group, generators, free_count, moduli):
        self.group = group
        self.generators = generators
        self.free_count = free_count
        self.moduli = moduli


def kernel_with_torsion(A, moduli):
    """Kernel of A on Z^f (+) (+)_i Z/m_i, f = A.cols - len(moduli).

    The last ``len(moduli)`` columns of A correspond to the torsion
    generators and must be identically zero (a homomorphism into a
    rational vector space kills torsion); a nonzero torsion column
    raises TorsionObstructionError.  Returns a KernelWithTorsion whose
    generators are coordinate vectors: an HNF-reduced basis of the free
    kernel, then one unit vector per torsion summand.
    """
    if not isinstance(A, RatMatrix):
        A = RatMatrix(A)
    moduli = tuple(int(m) for m in moduli)
    f = A.cols - len(moduli)
    if f < 0:
        raise LinAlgError("more torsion moduli than columns")
    for t, j in enumerate(range(f, A.cols)):
        if any(row[j] != 0 for row in A.data):
            raise TorsionObstructionError(
                "column %d maps the order-%d torsion generator to a nonzero "
                "element of a torsion-free group; obstruction data is "
                "inconsistent" % (j, moduli[t]))
    if f == 0:
        free_basis = []
    else:
        free_block = RatMatrix([row[:f] for row in A.data])
        free_basis = int_kernel(clear_denominators(free_block))
    generators = [tuple(v) + (0,) * len(moduli) for v in free_basis]
    for t in range(len(moduli)):
        unit = [0] * A.cols
        unit[f + t] = 1
        generators.append(tuple(unit))
    group = AbelianGroup(len(free_basis), moduli)
    return KernelWithTorsion(group, generators, len(free_basis), moduli)
