"""The obstruction homomorphism as a twisted cup product.

A degree-2 twisted cocycle c is paired against the rational periods of
an equivariant frame of closed 1-forms, through an explicit diagonal
approximation supplied per 3-cell as signed (front 1-cell, word | back
2-cell, word) terms.  Each term contributes

    sign * < rho(back word) . c(back cell), ell(front word) . P(front cell) >

to the value on that 3-cell; the resulting rational 3-cochain drops to
the base and its class in H^3(B; Q) is the obstruction value of [c].

Diagonal data is input, not derived: the bundled geometries use cell
structures with a single 3-cell, where no off-the-shelf front/back face
formula applies.  ``validate_diagonal`` certifies a term table by the
two properties that make the construction well defined on cohomology
(coboundaries land in coboundaries; re-lifting a 3-cell changes
nothing) plus additivity.
"""

from fractions import Fraction

from .complexes import (
    TwistedCochain,
    coboundary_matrix,
    twisted_cohomology,
    untwisted_cohomology_Q,
)
from .groupring import Word, rep_eval
from .intlinalg import RatMatrix


class ObstructionError(Exception):
    """Inconsistent period, diagonal, or obstruction data."""


class PeriodAssignment:
    """Rational period vector per basis 1-cell.

    Component l of the vector on a 1-cell is the integral of the l-th
    frame form over that cell; translates of the basis cell are covered
    by the equivariance rule P(g.e) = ell(g) P(e), so only basis values
    are stored.
    """

    __slots__ = ("dim", "values")

    def __init__(self, dim, values):
        self.dim = int(dim)
        clean = {}
        for cell, vec in values.items():
            vec = tuple(Fraction(x) for x in vec)
            if len(vec) != self.dim:
                raise ObstructionError(
                    "period vector on %r has length %d, expected %d"
                    % (cell, len(vec), self.dim))
            clean[cell] = vec
        self.values = clean

    def vector(self, cell):
        try:
            return self.values[cell]
        except KeyError:
            raise ObstructionError("no period vector for 1-cell %r" % cell) from None

    def __eq__(self, other):
        return (isinstance(other, PeriodAssignment)
                and self.dim == other.dim and self.values == other.values)

    def __repr__(self):
        return "PeriodAssignment(dim=%d, cells=%d)" % (self.dim, len(self.values))


class DiagonalApproximation:
    """Signed (front 1-cell, word | back 2-cell, word) terms per 3-cell."""

    __slots__ = ("terms",)

    def __init__(self, terms):
        clean = {}
        for cell, term_list in terms.items():
            rows = []
            for sign, front_cell, front_word, back_cell, back_word in term_list:
                if sign not in (1, -1):
                    raise ObstructionError("diagonal term sign must be +-1")
                if not isinstance(front_word, Word) or not isinstance(back_word, Word):
                    raise ObstructionError("diagonal term words must be Words")
                rows.append((sign, front_cell, front_word, back_cell, back_word))
            clean[cell] = tuple(rows)
        self.terms = clean

    def for_cell(self, cell):
        try:
            return self.terms[cell]
        except KeyError:
            raise ObstructionError("no diagonal terms for 3-cell %r" % cell) from None

    def relifted(self, cell, word):
        """Same table with one 3-cell's lift replaced by word . cell."""
        terms = dict(self.terms)
        terms[cell] = tuple(
            (sign, fc, word * fw, bc, word * bw)
            for sign, fc, fw, bc, bw in self.terms.get(cell, ()))
        return DiagonalApproximation(terms)

    def __eq__(self, other):
        return isinstance(other, DiagonalApproximation) and self.terms == other.terms

    def __repr__(self):
        return "DiagonalApproximation(cells=%d)" % len(self.terms)


def check_periods_closed(complex_, rep_form, periods):
    """Failures of the twisted cocycle condition for the period vectors.

    The frame forms are closed, so the periods of every boundary circle
    must vanish: sum over entries of each 2-cell boundary of
    ell(entry) P(cell) = 0.
    """
    failures = []
    for cell in complex_.cells[2] if complex_.top >= 2 else ():
        total = (Fraction(0),) * periods.dim
        for target, elem in complex_.boundaries[cell].items():
            mat = rep_eval(rep_form, elem)
            vec = mat.apply(periods.vector(target))
            total = tuple(a + b for a, b in zip(total, vec))
        if any(x != 0 for x in total):
            failures.append("periods are not closed around the boundary of %r"
                            % cell)
    return failures


def dd_evaluate(complex_, diagonal, rep_coeff, rep_form, periods, cochain):
    """Rational 3-cochain obtained by cup-pairing a degree-2 cocycle.

    Returns a tuple of Fractions aligned with the basis 3-cells.  Linear
    in the cochain; requires the duality between rep_form and rep_coeff
    to have been checked by the caller for the value to drop to the
    base.
    """
    if cochain.degree != 2:
        raise ObstructionError("cup pairing needs a degree-2 cochain")
    if cochain.dim != periods.dim or cochain.dim != rep_coeff.dim:
        raise ObstructionError("coefficient dimension mismatch")
    values = []
    for cell in complex_.cells[3]:
        total = Fraction(0)
        for sign, front_cell, front_word, back_cell, back_word in \
                diagonal.for_cell(cell):
            cvec = rep_eval(rep_coeff, back_word).apply(cochain.value(back_cell))
            pvec = rep_eval(rep_form, front_word).apply(periods.vector(front_cell))
            total += sign * sum(Fraction(a) * b for a, b in zip(cvec, pvec))
        values.append(total)
    return tuple(values)


def h3_class(complex_, values, h3=None):
    """Coordinates of a rational 3-cochain in the chosen basis of H^3(B;Q).

    The zero vector means the cochain is a coboundary of a rational
    2-cochain of the base.  Pass a precomputed ``untwisted_cohomology_Q``
    result as ``h3`` to avoid recomputing the basis.
    """
    if h3 is None:
        h3 = untwisted_cohomology_Q(complex_, 3)
    return h3.coordinates(values)


class ObstructionMap:
    """Rational matrix from H^2 generator coordinates to H^3(B;Q).

    Columns follow the generator order of the source cohomology group
    (free generators first, then torsion); torsion columns are zero by
    construction, which is re-validated on build.
    """

    __slots__ = ("matrix", "source_orders", "target_dim", "target_labels",
                 "generator_values")

    def __init__(self, matrix, source_orders, target_dim, target_labels,
                 generator_values):
        self.matrix = matrix
        self.source_orders = tuple(source_orders)
        self.target_dim = target_dim
        self.target_labels = tuple(target_labels)
        self.generator_values = tuple(generator_values)

    def is_zero(self):
        return self.matrix is None or self.matrix.is_zero()

    def column(self, j):
        if self.matrix is None:
            return (Fraction(0),) * self.target_dim
        return self.matrix.column(j)

    def __repr__(self):
        shape = "zero" if self.matrix is None else \
            "%dx%d" % (self.matrix.rows, self.matrix.cols)
        return "ObstructionMap(%s)" % shape


def dd_matrix(complex_, H2, diagonal, rep_coeff, rep_form, periods, h3=None):
    """Obstruction matrix: one column per H^2 generator.

    Column j is the H^3(B;Q) class of the cup pairing of generator j.
    A nonzero value on a torsion generator means the supplied diagonal
    or period data is inconsistent (a torsion class must die in a
    torsion-free target) and raises ObstructionError.
    """
    if h3 is None:
        h3 = untwisted_cohomology_Q(complex_, 3)
    columns = []
    gen_values = []
    for gen, order in zip(H2.generators, H2.orders):
        values = dd_evaluate(complex_, diagonal, rep_coeff, rep_form, periods, gen)
        cls = h3.coordinates(values)
        if order and any(x != 0 for x in cls):
            raise ObstructionError(
                "diagonal data or inputs inconsistent: the obstruction of an "
                "order-%d torsion generator is nonzero" % order)
        columns.append(cls)
        gen_values.append(cls)
    if columns and h3.dimension > 0:
        matrix = RatMatrix.from_columns([list(c) for c in columns])
    else:
        matrix = None
    return ObstructionMap(matrix, H2.orders, h3.dimension, h3.basis_labels,
                          gen_values)


class DiagonalReport:
    """Certification outcome for a diagonal approximation table."""

    __slots__ = ("failures", "checks_run")

    def __init__(self, failures, checks_run):
        self.failures = tuple(failures)
        self.checks_run = checks_run

    @property
    def ok(self):
        return not self.failures

    def __repr__(self):
        return "DiagonalReport(ok=%r, checks=%d)" % (self.ok, self.checks_run)


def validate_diagonal(complex_, diagonal, rep_coeff, rep_form, periods,
                      H2=None, h3=None, rng=None, n_random_cochains=0,
                      n_random_words=0, max_word_len=3):
    """Certify a diagonal table: descent, lift independence, additivity.

    (a) every basis twisted 1-cochain's coboundary pairs to an exact
        3-cochain (zero class);
    (b) re-lifting any single 3-cell by a group word leaves the classes
        of the H^2 generators unchanged;
    (c) the pairing is additive in the cochain.

    The deterministic pass covers all basis 1-cochains, all generator
    words and their inverses, and basis-pair additivity; passing an
    ``rng`` widens (a)-(c) with random cochains and random words.
    """
    failures = []
    checks = 0
    n = rep_coeff.dim
    if h3 is None:
        h3 = untwisted_cohomology_Q(complex_, 3)
    if H2 is None:
        H2 = twisted_cohomology(complex_, rep_coeff, 2)

    one_cells = complex_.cells[1]
    delta1 = coboundary_matrix(complex_, rep_coeff, 1) if one_cells else None

    try:
        checks = _run_diagonal_checks(
            complex_, diagonal, rep_coeff, rep_form, periods, H2, h3, delta1,
            n, rng, n_random_cochains, n_random_words, max_word_len, failures)
    except ObstructionError as exc:
        failures.append("diagonal data unusable: %s" % exc)
    return DiagonalReport(failures, checks)


def _run_diagonal_checks(complex_, diagonal, rep_coeff, rep_form, periods,
                         H2, h3, delta1, n, rng, n_random_cochains,
                         n_random_words, max_word_len, failures):
    checks = 0

    def eval_class(cochain):
        values = dd_evaluate(complex_, diagonal, rep_coeff, rep_form,
                             periods, cochain)
        return h3.coordinates(values)

    def coboundary_of(psi):
        image = delta1.apply(psi.flatten())
        return TwistedCochain.from_flat(complex_, 2, n, image)

    # (a) coboundary vanishing
    width = delta1.cols if delta1 is not None else 0
    basis_psis = []
    for idx in range(width):
        flat = [0] * width
        flat[idx] = 1
        basis_psis.append(TwistedCochain.from_flat(complex_, 1, n, flat))
    test_psis = list(basis_psis)
    if rng is not None:
        for _ in range(n_random_cochains):
            flat = [rng.randint(-5, 5) for _ in range(width)]
            test_psis.append(TwistedCochain.from_flat(complex_, 1, n, flat))
    for psi in test_psis:
        checks += 1
        cls = eval_class(coboundary_of(psi))
        if any(x != 0 for x in cls):
            failures.append(
                "coboundary of the twisted 1-cochain %r pairs to a nonzero "
                "class %r" % (psi, cls))

    # (b) translation invariance of generator classes
    base_classes = [eval_class(gen) for gen in H2.generators]
    words = []
    for idx in range(len(complex_.presentation.generators)):
        words.append(Word.generator(idx, 1))
        words.append(Word.generator(idx, -1))
    words.append(Word())
    if rng is not None:
        gen_count = len(complex_.presentation.generators)
        for _ in range(n_random_words):
            length = rng.randint(1, max_word_len)
            letters = tuple((rng.randrange(gen_count), rng.choice((1, -1)))
                            for _ in range(length))
            words.append(Word(letters))
    for cell in complex_.cells[3]:
        for word in words:
            shifted = diagonal.relifted(cell, word)
            for gen, base in zip(H2.generators, base_classes):
                checks += 1
                values = dd_evaluate(complex_, shifted, rep_coeff, rep_form,
                                     periods, gen)
                if h3.coordinates(values) != base:
                    failures.append(
                        "re-lifting %r by %s changes the class of a generator"
                        % (cell, word.text(complex_.presentation.generators)))

    # (c) additivity
    pairs = []
    if len(H2.generators) >= 2:
        pairs.append((H2.generators[0], H2.generators[1]))
    if rng is not None and basis_psis:
        two_cells = complex_.cells[2]
        for _ in range(max(1, n_random_cochains // 10)):
            c1 = TwistedCochain.from_flat(
                complex_, 2, n,
                [rng.randint(-5, 5) for _ in range(n * len(two_cells))])
            c2 = TwistedCochain.from_flat(
                complex_, 2, n,
                [rng.randint(-5, 5) for _ in range(n * len(two_cells))])
            pairs.append((c1, c2))
    for c1, c2 in pairs:
        checks += 1
        lhs = dd_evaluate(complex_, diagonal, rep_coeff, rep_form, periods,
                          c1 + c2)
        r1 = dd_evaluate(complex_, diagonal, rep_coeff, rep_form, periods, c1)
        r2 = dd_evaluate(complex_, diagonal, rep_coeff, rep_form, periods, c2)
        if lhs != tuple(a + b for a, b in zip(r1, r2)):
            failures.append("cup pairing is not additive in the cochain")

    return checks
