"""LA-vector bundles in decomposed generator form.

One pair of parallel sides of a split double vector bundle (D; A, B; M)
with core C carries Lie algebroid structures: B -> M is given as an honest
algebroid, and the structure on D -> A is presented by its action on the
canonical generators of its section module:

* per B-frame, a derivation on A (the linear vector field that anchors the
  corresponding linear section) and a derivation on C (the bracket action
  on core sections);
* a core anchor C -> A (the restriction of the anchor to the core);
* an antisymmetric Hom(A, C)-valued twist for each B-frame pair (the core
  component of the bracket of two canonical linear sections).

From this data the module builds the honest algebroid on the total space of
A (generator-level Jacobi and Leibniz checks reduce to `check_algebroid`
there) and the induced algebroid over the dual of the core, whose frames
are the transposed linear sections and the core sections coming from A*.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Dict, List, Mapping, Sequence, Tuple

from .algebroid import (
    Derivation,
    LieAlgebroid,
    Multisection,
    bracket_sections,
    check_algebroid,
    fibre_coordinate,
    tangent_algebroid,
)
from .exact import Chart, Polynomial
from .verdicts import CheckItem, CheckReport, failed, passed


def bundle_fibre_coordinate(frame_name: str) -> str:
    """Fibre coordinate on a bundle's own total space for one of its frames."""
    return f"u_{frame_name}"


def dual_frame_name(frame_name: str) -> str:
    return f"{frame_name}_d"


def unique_names(primary: Sequence[str], taken: Sequence[str]) -> Tuple[str, ...]:
    """Disambiguate generated names against already-used ones (apostrophes)."""
    out: List[str] = []
    used = set(taken)
    for name in primary:
        candidate = name
        while candidate in used:
            candidate += "'"
        out.append(candidate)
        used.add(candidate)
    return tuple(out)


Matrix = Tuple[Tuple[Polynomial, ...], ...]


@dataclass(frozen=True)
class LAVBundle:
    """Generator data for an algebroid structure on D -> A over side B."""

    side: LieAlgebroid  # the algebroid B over the base chart
    bundle_frames: Tuple[str, ...]  # frames of A
    core_frames: Tuple[str, ...]  # frames of C
    anchor_derivations: Tuple[Derivation, ...]  # on A, one per B-frame
    core_derivations: Tuple[Derivation, ...]  # on C, one per B-frame
    core_anchor: Matrix  # core_anchor[gamma][a]: A-components of the image of c_gamma
    twist: Tuple[Tuple[Matrix, ...], ...]  # twist[alpha][beta][a][gamma], antisymmetric

    def __init__(
        self,
        side: LieAlgebroid,
        bundle_frames: Sequence[str],
        core_frames: Sequence[str],
        anchor_derivations: Sequence[Derivation],
        core_derivations: Sequence[Derivation],
        core_anchor: Sequence[Sequence[Polynomial]],
        twist: Mapping[Tuple[int, int], Sequence[Sequence[Polynomial]]] | None = None,
    ):
        chart = side.chart
        bundle_frames = tuple(bundle_frames)
        core_frames = tuple(core_frames)
        ra, rc, rb = len(bundle_frames), len(core_frames), side.rank
        if len(anchor_derivations) != rb or len(core_derivations) != rb:
            raise ValueError("need one anchor and one core derivation per side frame")
        for d in anchor_derivations:
            if d.bundle_rank != ra:
                raise ValueError("anchor derivation rank mismatch")
        for d in core_derivations:
            if d.bundle_rank != rc:
                raise ValueError("core derivation rank mismatch")
        core_anchor = tuple(tuple(row) for row in core_anchor)
        if len(core_anchor) != rc or any(len(row) != ra for row in core_anchor):
            raise ValueError("core anchor must be (core rank) x (bundle rank)")
        all_names = side.frames + bundle_frames + core_frames
        if len(set(all_names)) != len(all_names):
            raise ValueError("side, bundle and core frame names must be distinct")
        zero = Polynomial.zero(chart)
        zero_mat = tuple(tuple(zero for _ in range(rc)) for _ in range(ra))
        table = [[zero_mat for _ in range(rb)] for _ in range(rb)]
        if twist:
            for (a, b), mat in twist.items():
                if a >= b:
                    raise ValueError("provide twist entries with alpha < beta only")
                mat = tuple(tuple(row) for row in mat)
                if len(mat) != ra or any(len(row) != rc for row in mat):
                    raise ValueError("twist entry must be (bundle rank) x (core rank)")
                table[a][b] = mat
                table[b][a] = tuple(tuple(-p for p in row) for row in mat)
        object.__setattr__(self, "side", side)
        object.__setattr__(self, "bundle_frames", bundle_frames)
        object.__setattr__(self, "core_frames", core_frames)
        object.__setattr__(self, "anchor_derivations", tuple(anchor_derivations))
        object.__setattr__(self, "core_derivations", tuple(core_derivations))
        object.__setattr__(self, "core_anchor", core_anchor)
        object.__setattr__(self, "twist", tuple(tuple(row) for row in table))

    @property
    def chart(self) -> Chart:
        return self.side.chart

    @property
    def bundle_rank(self) -> int:
        return len(self.bundle_frames)

    @property
    def core_rank(self) -> int:
        return len(self.core_frames)


@dataclass(frozen=True)
class LinearSection:
    """Bundle morphism A -> D over a section of B, in split data:
    projection components (over B-frames) plus a Hom(A, C) twist."""

    projection: Tuple[Polynomial, ...]
    hom_twist: Matrix  # [a][gamma]

    def __init__(self, projection: Sequence[Polynomial], hom_twist: Sequence[Sequence[Polynomial]]):
        object.__setattr__(self, "projection", tuple(projection))
        object.__setattr__(self, "hom_twist", tuple(tuple(row) for row in hom_twist))


@dataclass(frozen=True)
class CoreSection:
    components: Tuple[Polynomial, ...]

    def __init__(self, components: Sequence[Polynomial]):
        object.__setattr__(self, "components", tuple(components))


def total_chart(v: LAVBundle) -> Chart:
    return v.chart.extend(bundle_fibre_coordinate(f) for f in v.bundle_frames)


def total_algebroid(v: LAVBundle) -> LieAlgebroid:
    """The algebroid D -> A written over the total-space chart (x, u_a).

    Frames: the canonical linear sections (one per B-frame, zero twist)
    followed by the core sections.  Anchors are the linear vector fields of
    the anchor derivations and the vertical lifts of the core anchor.
    """
    chart = total_chart(v)
    n, ra, rb, rc = v.chart.dim, v.bundle_rank, v.side.rank, v.core_rank
    zero = Polynomial.zero(chart)
    u = [Polynomial.coordinate(chart, bundle_fibre_coordinate(f)) for f in v.bundle_frames]

    anchor_rows: List[Tuple[Polynomial, ...]] = []
    for beta in range(rb):
        d = v.anchor_derivations[beta]
        row = [c.lift(chart) for c in d.base_field.components]
        for a in range(ra):
            entry = zero
            for b in range(ra):
                m = d.matrix[b][a]
                if m:
                    entry = entry - m.lift(chart) * u[b]
            row.append(entry)
        anchor_rows.append(tuple(row))
    for gamma in range(rc):
        row = [zero for _ in range(n)]
        for a in range(ra):
            row.append(v.core_anchor[gamma][a].lift(chart))
        anchor_rows.append(tuple(row))

    brackets: Dict[Tuple[int, int], Tuple[Polynomial, ...]] = {}
    for al, be in itertools.combinations(range(rb), 2):
        vec = [zero for _ in range(rb + rc)]
        for g, coeff in enumerate(v.side.structure[al][be]):
            if coeff:
                vec[g] = coeff.lift(chart)
        for g in range(rc):
            entry = zero
            for a in range(ra):
                t = v.twist[al][be][a][g]
                if t:
                    entry = entry + t.lift(chart) * u[a]
            vec[rb + g] = entry
        brackets[(al, be)] = tuple(vec)
    for beta in range(rb):
        q = v.core_derivations[beta]
        for gamma in range(rc):
            vec = [zero for _ in range(rb + rc)]
            for delta in range(rc):
                m = q.matrix[gamma][delta]
                if m:
                    vec[rb + delta] = m.lift(chart)
            brackets[(beta, rb + gamma)] = tuple(vec)
    # core/core brackets vanish identically

    frames = v.side.frames + v.core_frames
    return LieAlgebroid(chart, frames, anchor_rows, brackets)


def linear_section(v: LAVBundle, beta: int) -> LinearSection:
    chart = v.chart
    proj = [Polynomial.zero(chart) for _ in range(v.side.rank)]
    proj[beta] = Polynomial.constant(chart, 1)
    zero_mat = [[Polynomial.zero(chart) for _ in range(v.core_rank)] for _ in range(v.bundle_rank)]
    return LinearSection(proj, zero_mat)


def section_to_total(v: LAVBundle, s: LinearSection | CoreSection) -> Multisection:
    """Express a generator-form section in the total-space frame."""
    chart = total_chart(v)
    rb, rc, ra = v.side.rank, v.core_rank, v.bundle_rank
    comps = [Polynomial.zero(chart) for _ in range(rb + rc)]
    if isinstance(s, CoreSection):
        if len(s.components) != rc:
            raise ValueError("core section has wrong rank")
        for g, coeff in enumerate(s.components):
            comps[rb + g] = coeff.lift(chart)
    else:
        if len(s.projection) != rb:
            raise ValueError("linear section projection has wrong rank")
        u = [Polynomial.coordinate(chart, bundle_fibre_coordinate(f)) for f in v.bundle_frames]
        for beta, coeff in enumerate(s.projection):
            comps[beta] = coeff.lift(chart)
        for a in range(ra):
            for g in range(rc):
                t = s.hom_twist[a][g]
                if t:
                    comps[rb + g] = comps[rb + g] + t.lift(chart) * u[a]
    return Multisection.from_vector(rb + rc, comps)


def bracket_generators(
    v: LAVBundle, s1: LinearSection | CoreSection, s2: LinearSection | CoreSection
) -> Multisection:
    """Bracket of two generator-form sections, as a total-space section.

    [linear, linear] is linear over the side bracket with the twist as core
    component, [linear, core] is the core-derivation image, and core pairs
    bracket to zero.
    """
    total = total_algebroid(v)
    return bracket_sections(total, section_to_total(v, s1), section_to_total(v, s2))


def induced_chart(v: LAVBundle) -> Chart:
    return v.chart.extend(fibre_coordinate(f) for f in v.core_frames)


def induced_dual_algebroid(v: LAVBundle) -> LieAlgebroid:
    """The algebroid over the dual of the core induced by the structure on
    D -> A.

    Base chart (x, xi_core); frames: transposed linear sections (one per
    B-frame) followed by the core sections coming from the frames of A*.
    Brackets and anchors:

        [lin_al, lin_be]   = side bracket + twist (linear in xi),
        [lin_be, core_a]   = contragredient anchor-derivation image,
        [core, core]       = 0,
        anchor(lin_be)     = side base field + core-derivation action on xi,
        anchor(core_a)(xi_g) = -<a-th dual frame, core anchor of c_g>.
    """
    chart = induced_chart(v)
    n, ra, rb, rc = v.chart.dim, v.bundle_rank, v.side.rank, v.core_rank
    zero = Polynomial.zero(chart)
    xi = [Polynomial.coordinate(chart, fibre_coordinate(f)) for f in v.core_frames]

    anchor_rows: List[Tuple[Polynomial, ...]] = []
    for beta in range(rb):
        q = v.core_derivations[beta]
        row = [c.lift(chart) for c in q.base_field.components]
        for gamma in range(rc):
            entry = zero
            for delta in range(rc):
                m = q.matrix[gamma][delta]
                if m:
                    entry = entry + m.lift(chart) * xi[delta]
            row.append(entry)
        anchor_rows.append(tuple(row))
    for a in range(ra):
        row = [zero for _ in range(n)]
        for gamma in range(rc):
            row.append(-v.core_anchor[gamma][a].lift(chart))
        anchor_rows.append(tuple(row))

    brackets: Dict[Tuple[int, int], Tuple[Polynomial, ...]] = {}
    for al, be in itertools.combinations(range(rb), 2):
        vec = [zero for _ in range(rb + ra)]
        for g, coeff in enumerate(v.side.structure[al][be]):
            if coeff:
                vec[g] = coeff.lift(chart)
        for a in range(ra):
            entry = zero
            for gamma in range(rc):
                t = v.twist[al][be][a][gamma]
                if t:
                    entry = entry + t.lift(chart) * xi[gamma]
            vec[rb + a] = entry
        brackets[(al, be)] = tuple(vec)
    for beta in range(rb):
        d = v.anchor_derivations[beta]
        for a in range(ra):
            vec = [zero for _ in range(rb + ra)]
            for b in range(ra):
                m = d.matrix[b][a]
                if m:
                    vec[rb + b] = -m.lift(chart)
            brackets[(beta, rb + a)] = tuple(vec)

    core_part = unique_names(
        [dual_frame_name(f) for f in v.bundle_frames], v.side.frames + chart.names
    )
    frames = v.side.frames + core_part
    return LieAlgebroid(chart, frames, anchor_rows, brackets)


def dual_lavb(v: LAVBundle) -> LAVBundle:
    """The reciprocal structure: generator data of the induced dual algebroid
    viewed as an LA-vector bundle over the same side, with bundle C* and
    core A*."""
    ra, rc = v.bundle_rank, v.core_rank
    new_core_anchor = [
        [-v.core_anchor[gamma][a] for gamma in range(rc)] for a in range(ra)
    ]
    new_twist = {}
    for al, be in itertools.combinations(range(v.side.rank), 2):
        mat = [[v.twist[al][be][a][gamma] for a in range(ra)] for gamma in range(rc)]
        new_twist[(al, be)] = mat
    new_bundle = unique_names(
        [dual_frame_name(f) for f in v.core_frames], v.side.frames + v.chart.names
    )
    new_core = unique_names(
        [dual_frame_name(f) for f in v.bundle_frames],
        v.side.frames + v.chart.names + new_bundle,
    )
    return LAVBundle(
        v.side,
        new_bundle,
        new_core,
        tuple(q.contragredient() for q in v.core_derivations),
        tuple(d.contragredient() for d in v.anchor_derivations),
        new_core_anchor,
        new_twist,
    )


def check_lavb(v: LAVBundle) -> CheckReport:
    """Validity of the decomposed structure.

    Side algebroid axioms; base-field consistency of all derivations with
    the side anchor (the anchor of D -> A is a morphism of double vector
    bundles); generator-level Jacobi and Leibniz via the total-space
    algebroid; and validity of the induced dual algebroid.
    """
    items: List[CheckItem] = []
    side_rep = check_algebroid(v.side)
    items.append(
        passed("side") if side_rep.ok else failed("side", side_rep.first_failure.witness)
    )

    witness = None
    for beta in range(v.side.rank):
        expected = v.side.anchor_field(beta)
        for label, der in (("anchor", v.anchor_derivations[beta]), ("core", v.core_derivations[beta])):
            if der.base_field.components != expected.components:
                witness = (
                    f"{label} derivation for side frame {v.side.frames[beta]} sits over "
                    f"{der.base_field}, expected {expected}"
                )
                break
        if witness:
            break
    items.append(failed("base_fields", witness) if witness else passed("base_fields"))

    if side_rep.ok and witness is None:
        total_rep = check_algebroid(total_algebroid(v))
        items.append(
            passed("generators")
            if total_rep.ok
            else failed("generators", total_rep.first_failure.witness)
        )
        induced_rep = check_algebroid(induced_dual_algebroid(v))
        items.append(
            passed("induced_dual")
            if induced_rep.ok
            else failed("induced_dual", induced_rep.first_failure.witness)
        )
    return CheckReport(tuple(items))


def tangent_lavb(chart: Chart, bundle_frames: Sequence[str], core_frames: Sequence[str] | None = None) -> LAVBundle:
    """The tangent prolongation structure of a trivialized bundle.

    D = TA over side TM: linear sections are the coordinate lifts, core
    sections are the vertical lifts, the core anchor is the identity and
    all twists vanish.
    """
    side = tangent_algebroid(chart)
    bundle_frames = tuple(bundle_frames)
    if core_frames is None:
        core_frames = tuple(f"{f}_c" for f in bundle_frames)
    core_frames = tuple(core_frames)
    ra = len(bundle_frames)
    anchor_ders = []
    core_ders = []
    for beta in range(chart.dim):
        base = side.anchor_field(beta)
        zero = Polynomial.zero(chart)
        anchor_ders.append(Derivation(base, [[zero] * ra for _ in range(ra)]))
        core_ders.append(Derivation(base, [[zero] * ra for _ in range(ra)]))
    ident = [
        [Polynomial.constant(chart, 1 if i == j else 0) for j in range(ra)]
        for i in range(ra)
    ]
    return LAVBundle(side, bundle_frames, core_frames, anchor_ders, core_ders, ident, {})
