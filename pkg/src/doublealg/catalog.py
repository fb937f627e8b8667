"""Canonical instances shared by the test suite and the bundled models.

Passing and failing inputs are both first-class: every equivalence theorem
is exercised in both truth values.
"""

from __future__ import annotations

from typing import Tuple

from .algebroid import (
    Derivation,
    LieAlgebroid,
    PoissonChart,
    VectorField,
    bialgebra_to_dual_pair,
    cotangent_algebroid,
    lie_algebra_to_algebroid,
    tangent_algebroid,
)
from .exact import Chart, Polynomial
from .liealg import (
    Bialgebra,
    Cobracket,
    LieAlgebra,
    coadjoint_rho_matrix,
    coadjoint_sigma_matrix,
    dual_bracket,
)
from .matched import MatchedPair, RepresentationMap


def solvable2_bialgebra() -> Bialgebra:
    """[e1, e2] = e2 with delta(e2) = e1 ^ e2; the standard 2-dim example."""
    algebra = LieAlgebra(2, {(0, 1): (0, 1)})
    return Bialgebra(algebra, Cobracket(2, {1: {(0, 1): 1}}))


def abelian_bialgebra(dim: int = 2) -> Bialgebra:
    return Bialgebra(LieAlgebra(dim, {}), Cobracket(dim, {}))


def heisenberg_noncocycle_bialgebra() -> Bialgebra:
    """[e1, e2] = e3 with delta(e3) = e1 ^ e2: fails the cocycle identity
    on the pair (e1, e2)."""
    algebra = LieAlgebra(3, {(0, 1): (0, 0, 1)})
    return Bialgebra(algebra, Cobracket(3, {2: {(0, 1): 1}}))


def coadjoint_pair(b: Bialgebra) -> MatchedPair:
    """The mutual coadjoint actions of a bialgebra as a matched pair at a point."""
    chart = Chart(())
    algebra, dual = bialgebra_to_dual_pair(b)
    rho = RepresentationMap(
        [
            Derivation(
                VectorField.zero(chart),
                [
                    [Polynomial.constant(chart, c) for c in row]
                    for row in coadjoint_rho_matrix(b, i)
                ],
            )
            for i in range(b.dim)
        ]
    )
    sigma = RepresentationMap(
        [
            Derivation(
                VectorField.zero(chart),
                [
                    [Polynomial.constant(chart, c) for c in row]
                    for row in coadjoint_sigma_matrix(b, i)
                ],
            )
            for i in range(b.dim)
        ]
    )
    return MatchedPair(algebra, dual, rho, sigma)


def abelian_matched_pair(rank_a: int = 1, rank_b: int = 1) -> MatchedPair:
    chart = Chart(())
    a_alg = lie_algebra_to_algebroid(LieAlgebra(rank_a, {}, [f"a{i+1}" for i in range(rank_a)]))
    b_alg = lie_algebra_to_algebroid(LieAlgebra(rank_b, {}, [f"b{i+1}" for i in range(rank_b)]))
    rho = RepresentationMap([Derivation.zero(chart, rank_b) for _ in range(rank_a)])
    sigma = RepresentationMap([Derivation.zero(chart, rank_a) for _ in range(rank_b)])
    return MatchedPair(a_alg, b_alg, rho, sigma)


def line_action_pair(action_coeff: str = "x", sigma_coeff: str | None = None) -> MatchedPair:
    """Tangent algebroid of the line acting on an abelian line bundle.

    rho(del_x) multiplies the single frame of B by a polynomial; sigma is
    zero for the matched instance.  Passing `sigma_coeff` produces a pair
    that breaks the anchor identity while both representations stay flat.
    """
    chart = Chart(("x",))
    a_alg = tangent_algebroid(chart)
    b_alg = LieAlgebroid(chart, ("f1",), [[Polynomial.zero(chart)]], {})
    from .parsing import parse_polynomial

    rho = RepresentationMap(
        [Derivation(a_alg.anchor_field(0), [[parse_polynomial(action_coeff, chart)]])]
    )
    sigma_val = (
        Polynomial.zero(chart) if sigma_coeff is None else parse_polynomial(sigma_coeff, chart)
    )
    sigma = RepresentationMap([Derivation(VectorField.zero(chart), [[sigma_val]])])
    return MatchedPair(a_alg, b_alg, rho, sigma)


def poisson_chart_xy() -> PoissonChart:
    """pi = x d/dx ^ d/dy on the chart (x, y)."""
    chart = Chart(("x", "y"))
    zero = Polynomial.zero(chart)
    x = Polynomial.coordinate(chart, "x")
    return PoissonChart(chart, [[zero, x], [-x, zero]])


def tangent_cotangent_pair() -> Tuple[LieAlgebroid, LieAlgebroid]:
    """(TM, T*M) for pi = x d/dx ^ d/dy: the chart-level bialgebroid."""
    pois = poisson_chart_xy()
    return tangent_algebroid(pois.chart), cotangent_algebroid(pois)


def broken_dual_pair_point() -> Tuple[LieAlgebroid, LieAlgebroid]:
    """Both sides valid Lie algebras, but not a bialgebra pair:
    the 3-dim Heisenberg algebra against the dual of its non-cocycle
    cobracket."""
    b = heisenberg_noncocycle_bialgebra()
    return lie_algebra_to_algebroid(b.algebra), lie_algebra_to_algebroid(dual_bracket(b))


def broken_dual_pair_chart() -> Tuple[LieAlgebroid, LieAlgebroid]:
    """TM on (x, y) against a valid but incompatible structure on the dual:
    [phi1, phi2] = phi1 with zero anchor."""
    chart = Chart(("x", "y"))
    tm = tangent_algebroid(chart)
    zero = Polynomial.zero(chart)
    one = Polynomial.constant(chart, 1)
    dual = LieAlgebroid(
        chart,
        ("ph1", "ph2"),
        [[zero, zero], [zero, zero]],
        {(0, 1): (one, zero)},
    )
    return tm, dual


def broken_dual_pair_so3() -> Tuple[LieAlgebroid, LieAlgebroid]:
    """The rotation algebra against an incompatible dual: [eps2, eps3] = eps1.

    Both sides satisfy Jacobi; the induced cobracket delta(e1) = e2 ^ e3
    fails the cocycle identity on (e1, e2), so the pair is not a bialgebra.
    (The 2-dim solvable algebra cannot serve here: its exterior square is a
    line on which every antisymmetric map is a cocycle.)
    """
    so3 = lie_algebra_to_algebroid(
        LieAlgebra(3, {(0, 1): (0, 0, 1), (1, 2): (1, 0, 0), (0, 2): (0, -1, 0)})
    )
    dual = lie_algebra_to_algebroid(
        LieAlgebra(3, {(1, 2): (1, 0, 0)}, ("e1_d", "e2_d", "e3_d"))
    )
    return so3, dual
