"""Matched pairs of Lie algebroids: mutual representations, the bowtie
algebroid on the direct sum, and the two semidirect products on the duals.

A representation of A on a bundle E assigns to each frame of A a derivation
on E over the anchor field; flatness (bracket goes to commutator) is a
checked precondition, never assumed.  The three compatibility identities
are expanded exactly on frames with polynomial coefficients.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Dict, List, Sequence, Tuple

from .algebroid import (
    Derivation,
    LieAlgebroid,
    Multisection,
    bracket_sections,
    check_algebroid,
    check_bialgebroid,
)
from .exact import Chart, ChartMismatch, Polynomial
from .lavb import dual_frame_name, unique_names
from .verdicts import CheckItem, CheckReport, failed, passed


class MatchedPairError(ValueError):
    """A construction was fed a pair failing its validity precondition."""


@dataclass(frozen=True)
class RepresentationMap:
    """One derivation on the target bundle per frame of the acting algebroid."""

    derivations: Tuple[Derivation, ...]

    def __init__(self, derivations: Sequence[Derivation]):
        object.__setattr__(self, "derivations", tuple(derivations))

    def of_section(self, acting: LieAlgebroid, section: Multisection) -> Derivation:
        """The derivation for a polynomial-coefficient acting section."""
        comps = section.vector(acting.chart)
        rank = self.derivations[0].bundle_rank if self.derivations else 0
        out = Derivation.zero(acting.chart, rank)
        for alpha, coeff in enumerate(comps):
            if coeff:
                out = out + self.derivations[alpha].scale_by(coeff)
        return out

    def apply(self, alpha: int, comps: Sequence[Polynomial]) -> Tuple[Polynomial, ...]:
        return self.derivations[alpha].apply(comps)


def check_representation(
    acting: LieAlgebroid, rep: RepresentationMap, label: str
) -> CheckReport:
    """Base fields match the anchor; bracket of frames acts as commutator."""
    items: List[CheckItem] = []
    witness = None
    for alpha in range(acting.rank):
        d = rep.derivations[alpha]
        if d.base_field.components != acting.anchor_field(alpha).components:
            witness = (
                f"{label}({acting.frames[alpha]}) sits over {d.base_field}, "
                f"expected the anchor {acting.anchor_field(alpha)}"
            )
            break
    items.append(failed(f"{label}.base_fields", witness) if witness else passed(f"{label}.base_fields"))

    witness = None
    for a, b in itertools.combinations(range(acting.rank), 2):
        commutator = rep.derivations[a].commutator(rep.derivations[b])
        expected = rep.of_section(acting, acting.frame_bracket(a, b))
        if not commutator.equals(expected):
            witness = (
                f"flatness fails on ({acting.frames[a]}, {acting.frames[b]})"
            )
            break
    items.append(failed(f"{label}.flat", witness) if witness else passed(f"{label}.flat"))
    return CheckReport(tuple(items))


@dataclass(frozen=True)
class MatchedPair:
    algebroid_a: LieAlgebroid
    algebroid_b: LieAlgebroid
    rho: RepresentationMap  # A acting on the bundle of B
    sigma: RepresentationMap  # B acting on the bundle of A

    def __post_init__(self):
        if self.algebroid_a.chart != self.algebroid_b.chart:
            raise ChartMismatch("matched pair needs a shared base chart")
        if len(self.rho.derivations) != self.algebroid_a.rank:
            raise ValueError("rho needs one derivation per A-frame")
        if len(self.sigma.derivations) != self.algebroid_b.rank:
            raise ValueError("sigma needs one derivation per B-frame")
        for d in self.rho.derivations:
            if d.bundle_rank != self.algebroid_b.rank:
                raise ValueError("rho derivations must act on B")
        for d in self.sigma.derivations:
            if d.bundle_rank != self.algebroid_a.rank:
                raise ValueError("sigma derivations must act on A")

    @property
    def chart(self) -> Chart:
        return self.algebroid_a.chart


def check_matched(mp: MatchedPair) -> CheckReport:
    """The two mixed derivation identities plus the anchor identity, on frames.

    Preconditions (both algebroids valid, both representations flat) are
    re-verified and reported first.
    """
    a_alg, b_alg = mp.algebroid_a, mp.algebroid_b
    items: List[CheckItem] = []
    for label, alg in (("A", a_alg), ("B", b_alg)):
        rep = check_algebroid(alg)
        items.append(passed(f"algebroid_{label}") if rep.ok else failed(f"algebroid_{label}", rep.first_failure.witness))
    items.extend(check_representation(a_alg, mp.rho, "rho").items)
    items.extend(check_representation(b_alg, mp.sigma, "sigma").items)
    if not all(i.ok for i in items):
        return CheckReport(tuple(items))

    def rho_of(section: Multisection) -> Derivation:
        return mp.rho.of_section(a_alg, section)

    def sigma_of(section: Multisection) -> Derivation:
        return mp.sigma.of_section(b_alg, section)

    # identity 1: rho_X([Y1, Y2]) = [rho_X Y1, Y2] + [Y1, rho_X Y2]
    #             + rho_{sigma_{Y2} X}(Y1) - rho_{sigma_{Y1} X}(Y2)
    witness = None
    for alpha in range(a_alg.rank):
        if witness:
            break
        for b1, b2 in itertools.combinations(range(b_alg.rank), 2):
            y1, y2 = b_alg.frame_section(b1), b_alg.frame_section(b2)
            lhs = mp.rho.apply(alpha, b_alg.frame_bracket(b1, b2).vector(b_alg.chart))
            rhs = bracket_sections(
                b_alg, b_alg.section(mp.rho.apply(alpha, y1.vector(b_alg.chart))), y2
            )
            rhs = rhs + bracket_sections(
                b_alg, y1, b_alg.section(mp.rho.apply(alpha, y2.vector(b_alg.chart)))
            )
            x = a_alg.frame_section(alpha)
            sig2_x = a_alg.section(mp.sigma.apply(b2, x.vector(a_alg.chart)))
            sig1_x = a_alg.section(mp.sigma.apply(b1, x.vector(a_alg.chart)))
            rhs = rhs + b_alg.section(rho_of(sig2_x).apply(y1.vector(b_alg.chart)))
            rhs = rhs - b_alg.section(rho_of(sig1_x).apply(y2.vector(b_alg.chart)))
            defect = b_alg.section(lhs) - rhs
            if not defect.is_zero:
                witness = (
                    f"identity 1 at ({a_alg.frames[alpha]}; {b_alg.frames[b1]}, "
                    f"{b_alg.frames[b2]}): defect = {defect.format(b_alg.frames)}"
                )
                break
    items.append(failed("identity_1", witness) if witness else passed("identity_1"))

    # identity 2: the sigma mirror
    witness = None
    for beta in range(b_alg.rank):
        if witness:
            break
        for a1, a2 in itertools.combinations(range(a_alg.rank), 2):
            x1, x2 = a_alg.frame_section(a1), a_alg.frame_section(a2)
            lhs = mp.sigma.apply(beta, a_alg.frame_bracket(a1, a2).vector(a_alg.chart))
            rhs = bracket_sections(
                a_alg, a_alg.section(mp.sigma.apply(beta, x1.vector(a_alg.chart))), x2
            )
            rhs = rhs + bracket_sections(
                a_alg, x1, a_alg.section(mp.sigma.apply(beta, x2.vector(a_alg.chart)))
            )
            y = b_alg.frame_section(beta)
            rho2_y = b_alg.section(mp.rho.apply(a2, y.vector(b_alg.chart)))
            rho1_y = b_alg.section(mp.rho.apply(a1, y.vector(b_alg.chart)))
            rhs = rhs + a_alg.section(sigma_of(rho2_y).apply(x1.vector(a_alg.chart)))
            rhs = rhs - a_alg.section(sigma_of(rho1_y).apply(x2.vector(a_alg.chart)))
            defect = a_alg.section(lhs) - rhs
            if not defect.is_zero:
                witness = (
                    f"identity 2 at ({b_alg.frames[beta]}; {a_alg.frames[a1]}, "
                    f"{a_alg.frames[a2]}): defect = {defect.format(a_alg.frames)}"
                )
                break
    items.append(failed("identity_2", witness) if witness else passed("identity_2"))

    # identity 3: a(sigma_Y X) - b(rho_X Y) = [b(Y), a(X)]
    witness = None
    for alpha in range(a_alg.rank):
        if witness:
            break
        for beta in range(b_alg.rank):
            x = a_alg.frame_section(alpha)
            y = b_alg.frame_section(beta)
            lhs = a_alg.anchor_of(a_alg.section(mp.sigma.apply(beta, x.vector(a_alg.chart))))
            lhs = lhs - b_alg.anchor_of(b_alg.section(mp.rho.apply(alpha, y.vector(b_alg.chart))))
            rhs = b_alg.anchor_field(beta).commutator(a_alg.anchor_field(alpha))
            defect = lhs - rhs
            if not defect.is_zero:
                witness = (
                    f"identity 3 at ({a_alg.frames[alpha]}, {b_alg.frames[beta]}): "
                    f"defect = {defect}"
                )
                break
    items.append(failed("identity_3", witness) if witness else passed("identity_3"))
    return CheckReport(tuple(items))


def assemble_bowtie(mp: MatchedPair) -> LieAlgebroid:
    """The candidate algebroid on A + B (no validity gating)."""
    a_alg, b_alg = mp.algebroid_a, mp.algebroid_b
    chart = mp.chart
    ra, rb = a_alg.rank, b_alg.rank
    zero = Polynomial.zero(chart)
    frames = a_alg.frames + b_alg.frames
    anchor = [tuple(a_alg.anchor[i]) for i in range(ra)] + [tuple(b_alg.anchor[j]) for j in range(rb)]
    brackets: Dict[Tuple[int, int], Tuple[Polynomial, ...]] = {}
    for i, j in itertools.combinations(range(ra), 2):
        brackets[(i, j)] = tuple(a_alg.structure[i][j]) + tuple(zero for _ in range(rb))
    for i, j in itertools.combinations(range(rb), 2):
        brackets[(ra + i, ra + j)] = tuple(zero for _ in range(ra)) + tuple(b_alg.structure[i][j])
    for i in range(ra):
        x = a_alg.frame_section(i)
        for j in range(rb):
            y = b_alg.frame_section(j)
            sigma_part = mp.sigma.apply(j, x.vector(chart))
            rho_part = mp.rho.apply(i, y.vector(chart))
            brackets[(i, ra + j)] = tuple(-p for p in sigma_part) + tuple(rho_part)
    return LieAlgebroid(chart, frames, anchor, brackets)


def build_bowtie(mp: MatchedPair) -> LieAlgebroid:
    """A bowtie B on the direct sum; rejects pairs failing the identities."""
    report = check_matched(mp)
    if not report.ok:
        raise MatchedPairError(f"not a matched pair: {report.first_failure.witness}")
    result = assemble_bowtie(mp)
    post = check_algebroid(result)
    if not post.ok:
        raise MatchedPairError(
            f"internal inconsistency: bowtie fails axioms: {post.first_failure.witness}"
        )
    return result


def extract_actions(total: LieAlgebroid, split: int) -> MatchedPair:
    """Read a matched pair off an algebroid on a marked direct sum A + B.

    Frames [0, split) are A, the rest B; both marked subbundles must be
    closed under the bracket.  The actions come from the mixed bracket
    [X + 0, 0 + Y] = -sigma_Y(X) + rho_X(Y); the round trip with
    `assemble_bowtie` is the identity on the data.
    """
    ra = split
    rb = total.rank - split
    chart = total.chart
    for i, j in itertools.combinations(range(ra), 2):
        bad = [g for g in range(ra, total.rank) if total.structure[i][j][g]]
        if bad:
            raise MatchedPairError(
                f"A-block not closed: [{total.frames[i]}, {total.frames[j]}] leaks into "
                f"{total.frames[bad[0]]}"
            )
    for i, j in itertools.combinations(range(ra, total.rank), 2):
        bad = [g for g in range(ra) if total.structure[i][j][g]]
        if bad:
            raise MatchedPairError(
                f"B-block not closed: [{total.frames[i]}, {total.frames[j]}] leaks into "
                f"{total.frames[bad[0]]}"
            )
    a_alg = LieAlgebroid(
        chart,
        total.frames[:ra],
        [total.anchor[i] for i in range(ra)],
        {
            (i, j): tuple(total.structure[i][j][:ra])
            for i, j in itertools.combinations(range(ra), 2)
        },
    )
    b_alg = LieAlgebroid(
        chart,
        total.frames[ra:],
        [total.anchor[ra + i] for i in range(rb)],
        {
            (i, j): tuple(total.structure[ra + i][ra + j][ra:])
            for i, j in itertools.combinations(range(rb), 2)
        },
    )
    rho_ders = []
    for i in range(ra):
        matrix = [
            tuple(total.structure[i][ra + j][ra:]) for j in range(rb)
        ]
        rho_ders.append(Derivation(a_alg.anchor_field(i), matrix))
    sigma_ders = []
    for j in range(rb):
        matrix = [
            tuple(-p for p in total.structure[i][ra + j][:ra]) for i in range(ra)
        ]
        sigma_ders.append(Derivation(b_alg.anchor_field(j), matrix))
    return MatchedPair(a_alg, b_alg, RepresentationMap(rho_ders), RepresentationMap(sigma_ders))


def build_semidirects(mp: MatchedPair) -> Tuple[LieAlgebroid, LieAlgebroid]:
    """The semidirect structures on A* + B and on A^op + B*.

    Only the representations need to be valid; the matched-pair identities
    are not required.  First output: anchor (phi + Y) -> b(Y), bracket
    [phi1 + Y1, phi2 + Y2] = {sigma*_{Y1} phi2 - sigma*_{Y2} phi1} + [Y1, Y2].
    Second output: anchor (X + psi) -> -a(X), bracket
    [X1 + psi1, X2 + psi2] = [X2, X1] + {rho*_{X2} psi1 - rho*_{X1} psi2}.
    """
    a_alg, b_alg = mp.algebroid_a, mp.algebroid_b
    chart = mp.chart
    ra, rb, n = a_alg.rank, b_alg.rank, chart.dim
    zero = Polynomial.zero(chart)

    sigma_star = [d.contragredient() for d in mp.sigma.derivations]
    frames_e = (
        unique_names(
            [dual_frame_name(f) for f in a_alg.frames], b_alg.frames + chart.names
        )
        + b_alg.frames
    )
    anchor_e = [tuple(zero for _ in range(n)) for _ in range(ra)] + [
        tuple(b_alg.anchor[j]) for j in range(rb)
    ]
    brackets_e: Dict[Tuple[int, int], Tuple[Polynomial, ...]] = {}
    for i, j in itertools.combinations(range(rb), 2):
        brackets_e[(ra + i, ra + j)] = tuple(zero for _ in range(ra)) + tuple(
            b_alg.structure[i][j]
        )
    for a in range(ra):
        for j in range(rb):
            image = sigma_star[j].matrix[a]  # sigma*_{f_j} of the a-th dual frame
            brackets_e[(a, ra + j)] = tuple(-p for p in image) + tuple(zero for _ in range(rb))
    semidirect = LieAlgebroid(chart, frames_e, anchor_e, brackets_e)

    rho_star = [d.contragredient() for d in mp.rho.derivations]
    frames_f = a_alg.frames + unique_names(
        [dual_frame_name(f) for f in b_alg.frames], a_alg.frames + chart.names
    )
    anchor_f = [tuple(-p for p in a_alg.anchor[i]) for i in range(ra)] + [
        tuple(zero for _ in range(n)) for _ in range(rb)
    ]
    brackets_f: Dict[Tuple[int, int], Tuple[Polynomial, ...]] = {}
    for i, j in itertools.combinations(range(ra), 2):
        brackets_f[(i, j)] = tuple(-p for p in a_alg.structure[i][j]) + tuple(
            zero for _ in range(rb)
        )
    for i in range(ra):
        for b in range(rb):
            image = rho_star[i].matrix[b]
            brackets_f[(i, ra + b)] = tuple(zero for _ in range(ra)) + tuple(-p for p in image)
    opposite = LieAlgebroid(chart, frames_f, anchor_f, brackets_f)
    return semidirect, opposite


def check_cor_sdp(
    mp: MatchedPair, seed: int = 7, random_pairs: int = 4, max_degree: int = 2
) -> CheckReport:
    """The semidirect pair is a dual pair; run the bialgebroid check on it.

    By the semidirect correspondence this verdict must coincide with
    `check_matched` on every input (both truth values).
    """
    items: List[CheckItem] = []
    items.extend(check_representation(mp.algebroid_a, mp.rho, "rho").items)
    items.extend(check_representation(mp.algebroid_b, mp.sigma, "sigma").items)
    if not all(i.ok for i in items):
        return CheckReport(tuple(items))
    semidirect, opposite = build_semidirects(mp)
    rep = check_bialgebroid(
        semidirect, opposite, seed=seed, random_pairs=random_pairs, max_degree=max_degree
    )
    return CheckReport(tuple(items) + rep.prefixed("sdp").items)
