"""Equivariant cell complexes and cohomology with local coefficients.

A complex stores one basis cell per orbit in each dimension and a
boundary map whose entries are group ring elements; this is exactly the
free Z[pi]-module presentation of the chains on the universal cover.
Nothing about attaching maps or the affine geometry is kept: the
algebra below is the whole data.

Evaluating the boundary entries under a representation rho gives the
coboundary matrices of the rho-twisted integer cochain complex, whose
kernels and images are handled by the exact lattice routines; under the
trivial one-dimensional representation (the augmentation) the same
machinery computes the ordinary cellular cohomology of the base.
"""

from fractions import Fraction

from .groupring import GroupRingElement, Representation, rep_eval
from .intlinalg import (
    AbelianGroup,
    IntMatrix,
    RatMatrix,
    cokernel_invariants,
    hnf_columns,
    hnf_solve,
    int_inverse,
    int_kernel,
    int_solve,
    rat_solve,
    snf,
)


class ComplexError(Exception):
    """Structurally invalid complex or cochain data."""


class NotACocycleError(ComplexError):
    """A cochain that was required to be closed is not."""


class EquivariantComplex:
    """Cell counts per dimension plus group-ring boundary maps.

    ``cells`` is a sequence of name tuples, one per dimension starting
    at 0.  ``boundaries`` maps each cell of positive dimension to a
    dict {lower cell name: GroupRingElement}; omitted entries are zero.
    """

    __slots__ = ("presentation", "cells", "boundaries", "_dim_of")

    def __init__(self, presentation, cells, boundaries):
        self.presentation = presentation
        self.cells = tuple(tuple(names) for names in cells)
        dim_of = {}
        for k, names in enumerate(self.cells):
            for name in names:
                if name in dim_of:
                    raise ComplexError("cell name %r used twice" % name)
                dim_of[name] = k
        self._dim_of = dim_of
        clean = {}
        for cell, entries in boundaries.items():
            if cell not in dim_of:
                raise ComplexError("boundary given for unknown cell %r" % cell)
            k = dim_of[cell]
            if k == 0:
                raise ComplexError("0-cell %r cannot have a boundary" % cell)
            row = {}
            for target, elem in entries.items():
                if target not in dim_of:
                    raise ComplexError(
                        "boundary of %r references unknown cell %r" % (cell, target))
                if dim_of[target] != k - 1:
                    raise ComplexError(
                        "boundary of %d-cell %r references %d-cell %r"
                        % (k, cell, dim_of[target], target))
                if not isinstance(elem, GroupRingElement):
                    raise ComplexError("boundary entries must be group ring elements")
                if not elem.is_zero():
                    row[target] = elem
            clean[cell] = row
        for k in range(1, len(self.cells)):
            for cell in self.cells[k]:
                clean.setdefault(cell, {})
        self.boundaries = clean

    @property
    def top(self):
        return len(self.cells) - 1

    def dim_of(self, cell):
        try:
            return self._dim_of[cell]
        except KeyError:
            raise ComplexError("unknown cell %r" % cell) from None

    def boundary_entry(self, cell, target):
        entry = self.boundaries.get(cell, {}).get(target)
        if entry is None:
            return GroupRingElement.zero(self.presentation)
        return entry

    def n_cells(self, k):
        if 0 <= k <= self.top:
            return len(self.cells[k])
        return 0

    def __eq__(self, other):
        return (isinstance(other, EquivariantComplex)
                and self.presentation == other.presentation
                and self.cells == other.cells
                and self.boundaries == other.boundaries)


class TwistedCochain:
    """Z^n-valued cochain on the basis k-cells, one vector per cell."""

    __slots__ = ("degree", "dim", "cells", "values")

    def __init__(self, degree, dim, cells, values):
        self.degree = degree
        self.dim = dim
        self.cells = tuple(cells)
        values = tuple(tuple(int(x) for x in row) for row in values)
        if len(values) != len(self.cells):
            raise ComplexError("expected one vector per cell")
        for row in values:
            if len(row) != dim:
                raise ComplexError("cochain vectors must have length %d" % dim)
        self.values = values

    @classmethod
    def zero(cls, complex_, degree, dim):
        cells = complex_.cells[degree]
        return cls(degree, dim, cells, [(0,) * dim for _ in cells])

    @classmethod
    def from_dict(cls, complex_, degree, dim, mapping):
        cells = complex_.cells[degree]
        unknown = set(mapping) - set(cells)
        if unknown:
            raise ComplexError("cochain values on unknown cells: %s"
                               % ", ".join(sorted(unknown)))
        return cls(degree, dim, cells,
                   [tuple(mapping.get(c, (0,) * dim)) for c in cells])

    @classmethod
    def from_flat(cls, complex_, degree, dim, vector):
        cells = complex_.cells[degree]
        if len(vector) != dim * len(cells):
            raise ComplexError("flat vector has wrong length")
        values = [tuple(vector[i * dim:(i + 1) * dim]) for i in range(len(cells))]
        return cls(degree, dim, cells, values)

    def flatten(self):
        return tuple(x for row in self.values for x in row)

    def value(self, cell):
        return self.values[self.cells.index(cell)]

    def __add__(self, other):
        if (self.degree, self.dim, self.cells) != (other.degree, other.dim, other.cells):
            raise ComplexError("cochain shapes differ")
        return TwistedCochain(self.degree, self.dim, self.cells,
                              [tuple(a + b for a, b in zip(r1, r2))
                               for r1, r2 in zip(self.values, other.values)])

    def scaled(self, c):
        return TwistedCochain(self.degree, self.dim, self.cells,
                              [tuple(c * x for x in row) for row in self.values])

    def is_zero(self):
        return all(x == 0 for row in self.values for x in row)

    def __eq__(self, other):
        return (isinstance(other, TwistedCochain)
                and (self.degree, self.dim, self.cells, self.values)
                == (other.degree, other.dim, other.cells, other.values))

    def __hash__(self):
        return hash((self.degree, self.dim, self.cells, self.values))

    def __repr__(self):
        nonzero = {c: v for c, v in zip(self.cells, self.values)
                   if any(x != 0 for x in v)}
        return "TwistedCochain(deg=%d, %r)" % (self.degree, nonzero)


def coboundary_matrix(complex_, rep, k):
    """Matrix of delta^k : C^k -> C^{k+1} for the given representation.

    Rows are blocked by (k+1)-cells and columns by k-cells; block (i, j)
    is the evaluation of the boundary entry of the i-th (k+1)-cell on
    the j-th k-cell.  This encodes the twisted coboundary
    (delta phi)(e) = phi(boundary e) with phi(g.e) = rho(g) phi(e).
    """
    if not 0 <= k < complex_.top + 1:
        raise ComplexError("degree %d out of range" % k)
    upper = complex_.cells[k + 1] if k + 1 <= complex_.top else ()
    lower = complex_.cells[k]
    if not upper or not lower:
        raise ComplexError("coboundary matrix needs cells in degrees %d and %d"
                           % (k, k + 1))
    n = rep.dim
    rows = []
    for up in upper:
        blocks = [rep_eval(rep, complex_.boundary_entry(up, low)) for low in lower]
        for r in range(n):
            rows.append([blocks[j].data[r][c]
                         for j in range(len(lower)) for c in range(n)])
    return IntMatrix(rows)


class ComplexValidation:
    """Outcome of the boundary-squares-to-zero check."""

    __slots__ = ("failures",)

    def __init__(self, failures):
        self.failures = tuple(failures)

    @property
    def ok(self):
        return not self.failures

    def __repr__(self):
        return "ComplexValidation(ok=%r, failures=%d)" % (self.ok, len(self.failures))


def validate_complex(complex_, reps):
    """Check that the boundary squares to zero under every representation.

    The representations are evaluated one by one (and the rank-1
    augmentation is always included); a failure records the
    representation name and the cell whose double boundary does not
    vanish.  Free equality of the group-ring entries is never used.
    """
    all_reps = list(reps)
    all_reps.append(Representation.trivial(complex_.presentation, 1,
                                           name="augmentation"))
    failures = []
    for rep in all_reps:
        n = rep.dim
        for k in range(2, complex_.top + 1):
            for cell in complex_.cells[k]:
                composite = {}
                for mid, elem in complex_.boundaries[cell].items():
                    mid_mat = rep_eval(rep, elem)
                    for target, elem2 in complex_.boundaries[mid].items():
                        block = mid_mat * rep_eval(rep, elem2)
                        if target in composite:
                            composite[target] = composite[target] + block
                        else:
                            composite[target] = block
                bad = sorted(t for t, m in composite.items() if not m.is_zero())
                if bad:
                    failures.append(
                        (rep.name, cell,
                         "double boundary of %r is nonzero on %s under "
                         "representation %r" % (cell, ", ".join(bad), rep.name)))
    return ComplexValidation(failures)


class CohomologyGroup:
    """H^k with invariant factors, generator cocycles, and coordinates.

    Generators are listed free part first, then torsion generators in
    invariant-factor order; ``orders`` holds 0 for each free generator
    and the torsion order otherwise.  ``per_cell_shape``, when not None,
    is a tuple over k-cells of coefficient-slot descriptors (0 for a Z
    summand, 1 for a killed slot, m >= 2 for Z/m) that reproduces the
    group as a direct sum read off cell by cell; it is only reported
    when that readout provably presents the same group.
    """

    __slots__ = ("degree", "dim", "cells", "group", "generators", "orders",
                 "per_cell_shape", "_kernel_basis", "_kernel_pivots",
                 "_image_hnf", "_image_pivots", "_gen_columns", "_delta_out")

    def __init__(self, degree, dim, cells, group, generators, orders,
                 per_cell_shape, kernel_basis, kernel_pivots,
                 image_hnf, image_pivots, gen_columns, delta_out):
        self.degree = degree
        self.dim = dim
        self.cells = tuple(cells)
        self.group = group
        self.generators = tuple(generators)
        self.orders = tuple(orders)
        self.per_cell_shape = per_cell_shape
        self._kernel_basis = kernel_basis
        self._kernel_pivots = kernel_pivots
        self._image_hnf = image_hnf
        self._image_pivots = image_pivots
        self._gen_columns = gen_columns
        self._delta_out = delta_out

    @property
    def free_rank(self):
        return self.group.free_rank

    @property
    def torsion(self):
        return self.group.torsion

    def __repr__(self):
        return "CohomologyGroup(H^%d = %s)" % (self.degree, self.group)


def _reduce_mod_lattice(column, basis, pivots):
    col = list(column)
    for vec, row in zip(basis, pivots):
        q = col[row] // vec[row]
        if q:
            col = [a - q * b for a, b in zip(col, vec)]
    return col


def twisted_cohomology(complex_, rep, k):
    """H^k(complex; Z^n twisted by rep) = ker delta^k / im delta^{k-1}.

    The kernel lattice is saturated and HNF-reduced, so generator
    cocycles are reproducible across runs.  When the image lattice in
    kernel coordinates admits a pivot readout presenting the same group
    (which covers every complex whose cocycle conditions are coordinate
    conditions), the generators are plain dual cochains and a per-cell
    shape is reported; otherwise generators fall back to the Smith
    transform of the image.
    """
    if not 0 <= k <= complex_.top:
        raise ComplexError("degree %d out of range for a %d-complex"
                           % (k, complex_.top))
    n = rep.dim
    cells = complex_.cells[k]
    size = n * len(cells)
    if size == 0:
        return CohomologyGroup(k, n, cells, AbelianGroup(0), (), (), (),
                               [], [], [], [], [], None)

    delta_out = None
    if k < complex_.top and complex_.n_cells(k + 1) > 0:
        delta_out = coboundary_matrix(complex_, rep, k)
        kernel_basis = int_kernel(delta_out)
        kernel_pivots = [next(i for i, x in enumerate(col) if x != 0)
                         for col in kernel_basis]
    else:
        kernel_basis = [tuple(1 if i == j else 0 for i in range(size))
                        for j in range(size)]
        kernel_pivots = list(range(size))

    m = len(kernel_basis)
    if m == 0:
        return CohomologyGroup(k, n, cells, AbelianGroup(0), (), (), None,
                               kernel_basis, kernel_pivots, [], [], [], delta_out)

    image_cols = []
    if k > 0 and complex_.n_cells(k - 1) > 0:
        delta_in = coboundary_matrix(complex_, rep, k - 1)
        for col in delta_in.columns():
            coords = hnf_solve(kernel_basis, kernel_pivots, col)
            if coords is None:
                raise ComplexError(
                    "image of delta^%d does not lie in the kernel of delta^%d; "
                    "the boundary does not square to zero under %r"
                    % (k - 1, k, rep.name))
            image_cols.append(tuple(coords))

    if image_cols:
        group = cokernel_invariants(IntMatrix.from_columns(image_cols))
    else:
        group = AbelianGroup(m)
    image_hnf, image_pivots = hnf_columns(image_cols, m) if image_cols else ([], [])

    readout = _pivot_readout(m, group, image_hnf, image_pivots)
    if readout is not None:
        gen_columns, orders = readout
    else:
        gen_columns, orders = _snf_generators(m, group, image_cols,
                                              image_hnf, image_pivots)

    per_cell_shape = None
    kernel_is_unit = all(sum(1 for x in col if x != 0) == 1 and col[p] == 1
                         for col, p in zip(kernel_basis, kernel_pivots))
    if readout is not None and kernel_is_unit:
        pivot_value = dict(zip(image_pivots,
                               (vec[row] for vec, row in zip(image_hnf,
                                                             image_pivots))))
        kernel_coord = {p: j for j, p in enumerate(kernel_pivots)}
        slots = []
        for p in range(size):
            j = kernel_coord.get(p)
            if j is None:
                slots.append(1)
            else:
                slots.append(pivot_value.get(j, 0))
        per_cell_shape = tuple(tuple(slots[i * n:(i + 1) * n])
                               for i in range(len(cells)))

    generators = []
    for col in gen_columns:
        vec = [0] * size
        for coeff, basis_col in zip(col, kernel_basis):
            if coeff:
                vec = [a + coeff * b for a, b in zip(vec, basis_col)]
        generators.append(TwistedCochain.from_flat(complex_, k, n, vec))

    return CohomologyGroup(k, n, cells, group, generators, orders,
                           per_cell_shape, kernel_basis, kernel_pivots,
                           image_hnf, image_pivots, gen_columns, delta_out)


def _pivot_readout(m, group, image_hnf, image_pivots):
    """Unit-vector generators read off the image pivots, if they present
    the same group; None when the readout is not faithful."""
    pivot_vals = [vec[row] for vec, row in zip(image_hnf, image_pivots)]
    free_rows = [r for r in range(m) if r not in image_pivots]
    torsion_rows = sorted(
        ((val, row) for val, row in zip(pivot_vals, image_pivots) if val >= 2))
    if len(free_rows) != group.free_rank:
        return None
    if [val for val, _ in torsion_rows] != list(group.torsion):
        return None
    gen_columns = [tuple(1 if i == r else 0 for i in range(m))
                   for r in free_rows]
    gen_columns += [tuple(1 if i == r else 0 for i in range(m))
                    for _, r in torsion_rows]
    orders = [0] * len(free_rows) + [val for val, _ in torsion_rows]
    if gen_columns:
        combined = IntMatrix.from_columns(list(gen_columns) + list(image_hnf))
        if not cokernel_invariants(combined).is_trivial():
            return None
    elif not group.is_trivial():
        return None
    return gen_columns, orders


def _snf_generators(m, group, image_cols, image_hnf, image_pivots):
    """Generator columns from the Smith transform of the image lattice."""
    B = IntMatrix.from_columns(image_cols)
    res = snf(B)
    diag = res.diagonal()
    u_inv = int_inverse(res.U)
    free_cols, torsion_cols, torsion_orders = [], [], []
    for i in range(m):
        d = diag[i] if i < len(diag) else 0
        col = _reduce_mod_lattice(u_inv.column(i), image_hnf, image_pivots)
        if d == 0:
            free_cols.append(tuple(col))
        elif d >= 2:
            torsion_cols.append(tuple(col))
            torsion_orders.append(d)
    gen_columns = free_cols + torsion_cols
    orders = [0] * len(free_cols) + torsion_orders
    assert len(free_cols) == group.free_rank
    assert torsion_orders == list(group.torsion)
    return gen_columns, orders


def cocycle_coordinates(H, cochain):
    """Coordinates of a cocycle's class in the generator basis of H.

    Free coordinates are exact integers; torsion coordinates are
    residues in [0, m_i).  Raises NotACocycleError when the cochain is
    not closed, ComplexError on shape mismatch.
    """
    if cochain.degree != H.degree or cochain.dim != H.dim:
        raise ComplexError("cochain degree/dimension does not match H^%d with "
                           "coefficients Z^%d" % (H.degree, H.dim))
    if cochain.cells != H.cells:
        raise ComplexError("cochain is over different cells")
    vec = cochain.flatten()
    if H._delta_out is not None:
        if any(x != 0 for x in H._delta_out.apply(vec)):
            raise NotACocycleError("cochain is not a cocycle: delta c != 0")
    if not H.generators and not H._kernel_basis:
        return ()
    kernel_coords = hnf_solve(H._kernel_basis, H._kernel_pivots, vec)
    if kernel_coords is None:
        raise NotACocycleError("cochain does not lie in the kernel lattice")
    columns = list(H._gen_columns) + list(H._image_hnf)
    if not columns:
        return ()
    solution = int_solve(IntMatrix.from_columns(columns), kernel_coords)
    if solution is None:
        raise ComplexError("internal error: class not generated by the "
                           "reported generators")
    coords = []
    for i, order in enumerate(H.orders):
        a = solution[i]
        coords.append(a % order if order else a)
    return tuple(coords)


def cochain_from_coordinates(H, coords):
    """Integer combination of the generators with the given coordinates."""
    if len(coords) != len(H.generators):
        raise ComplexError("expected %d coordinates" % len(H.generators))
    out = TwistedCochain(H.degree, H.dim, H.cells,
                         [(0,) * H.dim for _ in H.cells])
    for c, gen in zip(coords, H.generators):
        if c:
            out = out + gen.scaled(int(c))
    return out


class RationalCohomology:
    """H^k(base; Q) through the augmentation, with an exactness oracle.

    ``coordinates`` expresses a closed rational k-cochain in the chosen
    basis; the zero vector means the cochain is a coboundary, and the
    basis itself consists of the earliest dual cochains (top degree) or
    earliest kernel vectors whose classes are independent.
    """

    __slots__ = ("degree", "cells", "dimension", "basis", "basis_labels",
                 "_delta_out", "_image_cols")

    def __init__(self, degree, cells, dimension, basis, basis_labels,
                 delta_out, image_cols):
        self.degree = degree
        self.cells = tuple(cells)
        self.dimension = dimension
        self.basis = basis
        self.basis_labels = tuple(basis_labels)
        self._delta_out = delta_out
        self._image_cols = image_cols

    def coordinates(self, values):
        """Class of a rational k-cochain in the chosen basis of H^k(B;Q)."""
        vec = [Fraction(x) for x in values]
        if len(vec) != len(self.cells):
            raise ComplexError("expected one rational per %d-cell" % self.degree)
        if self._delta_out is not None:
            image = self._delta_out.apply(vec)
            if any(x != 0 for x in image):
                raise NotACocycleError("rational cochain is not closed")
        if self.dimension == 0:
            return ()
        columns = [list(b) for b in self.basis] + [list(c) for c in self._image_cols]
        A = RatMatrix.from_columns(columns)
        solution = rat_solve(A, vec)
        if solution is None:
            raise ComplexError("internal error: closed cochain not spanned "
                               "by basis and coboundaries")
        return tuple(solution[:self.dimension])


def untwisted_cohomology_Q(complex_, k):
    """Cellular cohomology of the base over Q in degree k.

    Uses the augmentation (send every group element to 1) to collapse
    the equivariant complex to the cellular cochain complex of the
    quotient, then picks a deterministic basis of representing
    cocycles.
    """
    if not 0 <= k <= complex_.top:
        raise ComplexError("degree %d out of range" % k)
    cells = complex_.cells[k]
    if not cells:
        return RationalCohomology(k, cells, 0, [], [], None, [])
    one = Representation.trivial(complex_.presentation, 1, name="augmentation")

    delta_out = None
    if k < complex_.top and complex_.n_cells(k + 1) > 0:
        delta_out = coboundary_matrix(complex_, one, k).to_rational()
    image_cols = []
    if k > 0 and complex_.n_cells(k - 1) > 0:
        delta_in = coboundary_matrix(complex_, one, k - 1).to_rational()
        image_cols = [list(c) for c in delta_in.columns()]

    size = len(cells)
    if delta_out is None:
        candidates = [[Fraction(1 if i == j else 0) for i in range(size)]
                      for j in range(size)]
        labels = ["dual(%s)" % c for c in cells]
    else:
        kern = int_kernel(_rational_to_int_rows(delta_out))
        candidates = [[Fraction(x) for x in col] for col in kern]
        labels = ["kernel[%d]" % i for i in range(len(candidates))]

    elim = _IncrementalEchelon(size)
    for col in image_cols:
        elim.add(col)
    image_rank = elim.rank
    basis, basis_labels = [], []
    for cand, label in zip(candidates, labels):
        if elim.add(cand):
            basis.append(tuple(cand))
            basis_labels.append(label)
    dimension = elim.rank - image_rank
    assert dimension == len(basis)
    return RationalCohomology(k, cells, dimension, basis, basis_labels,
                              delta_out, image_cols)


def _rational_to_int_rows(A):
    rows = []
    for row in A.data:
        lcm = 1
        for x in row:
            d = x.denominator
            g = _gcd(lcm, d)
            lcm = lcm * d // g
        rows.append([int(x * lcm) for x in row])
    return IntMatrix(rows)


def _gcd(a, b):
    while b:
        a, b = b, a % b
    return abs(a)


class _IncrementalEchelon:
    """Tracks the row space spanned so far; add() reports rank growth."""

    def __init__(self, width):
        self.width = width
        self.rows = []  # (pivot index, normalised row)
        self.rank = 0

    def add(self, vector):
        v = [Fraction(x) for x in vector]
        for pivot, row in self.rows:
            if v[pivot] != 0:
                f = v[pivot]
                v = [a - f * b for a, b in zip(v, row)]
        pivot = next((i for i, x in enumerate(v) if x != 0), None)
        if pivot is None:
            return False
        inv = 1 / v[pivot]
        v = [x * inv for x in v]
        self.rows.append((pivot, v))
        self.rows.sort(key=lambda pr: pr[0])
        self.rank += 1
        return True
