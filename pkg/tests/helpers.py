"""In-code builders for the three bundled geometries.

These mirror the bundled .iaf files; keeping an independent in-code
copy lets the algebra tests run without the parser and gives the
parser tests something to cross-check against.
"""

from fractions import Fraction

from lagfib.complexes import EquivariantComplex
from lagfib.groupring import GroupRingElement, Presentation, Representation
from lagfib.intlinalg import IntMatrix
from lagfib.obstruction import DiagonalApproximation, PeriodAssignment


def _relation(pres, lhs, rhs):
    return pres.word(lhs) * pres.word(rhs).inverse()


def _ring(pres, *terms):
    """GroupRingElement from (coeff, wordtext) pairs."""
    out = GroupRingElement.zero(pres)
    for coeff, text in terms:
        out = out + GroupRingElement.from_word(pres, pres.word(text), coeff)
    return out


def _complex(pres, boundary_spec):
    cells = (("e0",), ("e1_1", "e1_2", "e1_3"), ("e2_1", "e2_2", "e2_3"), ("e3",))
    boundaries = {}
    for cell, entries in boundary_spec.items():
        boundaries[cell] = {target: _ring(pres, *terms)
                            for target, terms in entries.items()}
    return EquivariantComplex(pres, cells, boundaries)


def torus3():
    """Flat 3-torus: trivial holonomy, cube cell structure."""
    base = Presentation(["a", "b", "c"])
    pres = Presentation(["a", "b", "c"], [
        _relation(base, "a*b", "b*a"),
        _relation(base, "a*c", "c*a"),
        _relation(base, "b*c", "c*b"),
    ])
    I = IntMatrix.identity(3)
    ell = Representation("ell", pres, [I, I, I])
    rho = Representation("rho", pres, [I, I, I])
    cx = _complex(pres, {
        "e1_1": {"e0": [(1, "a"), (-1, "1")]},
        "e1_2": {"e0": [(1, "b"), (-1, "1")]},
        "e1_3": {"e0": [(1, "c"), (-1, "1")]},
        "e2_1": {"e1_1": [(1, "1"), (-1, "b")], "e1_2": [(1, "a"), (-1, "1")]},
        "e2_2": {"e1_2": [(1, "1"), (-1, "c")], "e1_3": [(1, "b"), (-1, "1")]},
        "e2_3": {"e1_1": [(1, "c"), (-1, "1")], "e1_3": [(1, "1"), (-1, "a")]},
        "e3": {"e2_1": [(1, "c"), (-1, "1")],
               "e2_2": [(1, "a"), (-1, "1")],
               "e2_3": [(1, "b"), (-1, "1")]},
    })
    periods = PeriodAssignment(3, {
        "e1_1": (0, 1, 0),
        "e1_2": (0, 0, 1),
        "e1_3": (1, 0, 0),
    })
    diagonal = DiagonalApproximation({
        "e3": [(1, "e1_3", pres.word("1"), "e2_1", pres.word("c")),
               (1, "e1_1", pres.word("1"), "e2_2", pres.word("a")),
               (1, "e1_2", pres.word("1"), "e2_3", pres.word("b"))],
    })
    return dict(presentation=pres, ell=ell, rho=rho, complex=cx,
                periods=periods, diagonal=diagonal)


def heisenberg():
    """Heisenberg 3-manifold: nilpotent holonomy, one shear generator."""
    base = Presentation(["a", "b", "c"])
    pres = Presentation(["a", "b", "c"], [
        _relation(base, "a*b", "c*b*a"),
        _relation(base, "a*c", "c*a"),
        _relation(base, "b*c", "c*b"),
    ])
    I = IntMatrix.identity(3)
    ell = Representation("ell", pres, [
        IntMatrix([[1, 0, 0], [0, 1, 0], [1, 0, 1]]), I, I])
    rho = Representation("rho", pres, [
        IntMatrix([[1, 0, -1], [0, 1, 0], [0, 0, 1]]), I, I])
    cx = _complex(pres, {
        "e1_1": {"e0": [(1, "a"), (-1, "1")]},
        "e1_2": {"e0": [(1, "b"), (-1, "1")]},
        "e1_3": {"e0": [(1, "c"), (-1, "1")]},
        "e2_1": {"e1_1": [(1, "1"), (-1, "c*b")],
                 "e1_2": [(1, "a"), (-1, "c")],
                 "e1_3": [(-1, "1")]},
        "e2_2": {"e1_2": [(1, "1"), (-1, "c")],
                 "e1_3": [(-1, "1"), (1, "b")]},
        "e2_3": {"e1_1": [(1, "1"), (-1, "c")],
                 "e1_3": [(1, "a"), (-1, "1")]},
        "e3": {"e2_1": [(1, "c"), (-1, "1")],
               "e2_2": [(1, "a"), (-1, "c")],
               "e2_3": [(1, "1"), (-1, "c*b")]},
    })
    periods = PeriodAssignment(3, {
        "e1_1": (0, 1, 0),
        "e1_2": (1, 0, 0),
        "e1_3": (0, 0, 1),
    })
    diagonal = DiagonalApproximation({
        "e3": [(1, "e1_1", pres.word("1"), "e2_2", pres.word("a")),
               (1, "e1_3", pres.word("1"), "e2_3", pres.word("c*b"))],
    })
    return dict(presentation=pres, ell=ell, rho=rho, complex=cx,
                periods=periods, diagonal=diagonal)


def mapping_torus():
    """Mapping torus of the hyperelliptic involution of T^2."""
    base = Presentation(["a", "b", "c"])
    pres = Presentation(["a", "b", "c"], [
        _relation(base, "b*c", "c*b"),
        _relation(base, "a", "b*a*b"),
        _relation(base, "a", "c*a*c"),
    ])
    I = IntMatrix.identity(3)
    flip = IntMatrix([[-1, 0, 0], [0, 1, 0], [0, 0, -1]])
    ell = Representation("ell", pres, [flip, I, I])
    rho = Representation("rho", pres, [flip, I, I])
    cx = _complex(pres, {
        "e1_1": {"e0": [(1, "a*b*c"), (-1, "1")]},
        "e1_2": {"e0": [(1, "b"), (-1, "1")]},
        "e1_3": {"e0": [(1, "c"), (-1, "1")]},
        "e2_1": {"e1_1": [(1, "1"), (-1, "b")],
                 "e1_2": [(-1, "1"), (-1, "a*c")]},
        "e2_2": {"e1_2": [(1, "1"), (-1, "c")],
                 "e1_3": [(-1, "1"), (1, "b")]},
        "e2_3": {"e1_1": [(1, "1"), (-1, "c")],
                 "e1_3": [(-1, "1"), (-1, "a*b")]},
        "e3": {"e2_1": [(1, "1"), (-1, "c")],
               "e2_2": [(-1, "1"), (1, "a")],
               "e2_3": [(1, "1"), (-1, "b")]},
    })
    periods = PeriodAssignment(3, {
        "e1_1": (-1, Fraction(1, 2), -1),
        "e1_2": (0, 0, 1),
        "e1_3": (1, 0, 0),
    })
    diagonal = DiagonalApproximation({
        "e3": [(1, "e1_3", pres.word("1"), "e2_1", pres.word("1")),
               (1, "e1_1", pres.word("1"), "e2_2", pres.word("1")),
               (1, "e1_1", pres.word("1"), "e2_2", pres.word("a")),
               (1, "e1_2", pres.word("1"), "e2_3", pres.word("1"))],
    })
    return dict(presentation=pres, ell=ell, rho=rho, complex=cx,
                periods=periods, diagonal=diagonal)


ALL_EXAMPLES = {"t3": torus3, "heisenberg": heisenberg,
                "mapping_torus": mapping_torus}
