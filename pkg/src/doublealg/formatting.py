"""Deterministic printers for report details.

Everything prints in the model-file grammar (signed monomial terms), so
emitted structures can be pasted back into model files.
"""

from __future__ import annotations

from fractions import Fraction
from typing import List, Sequence, Tuple

import itertools

from .algebroid import Derivation, LieAlgebroid, VectorField
from .exact import Polynomial, format_rat
from .liealg import LieAlgebra, PairedAlgebra


def _monomial_atoms(chart, exp) -> List[str]:
    atoms = []
    for name, power in zip(chart.names, exp):
        if power == 1:
            atoms.append(name)
        elif power > 1:
            atoms.append(f"{name}^{power}")
    return atoms


def format_combination(components: Sequence[Polynomial], names: Sequence[str]) -> str:
    """Linear combination of frames, expanded to grammar-level terms."""
    pieces: List[Tuple[Fraction, List[str]]] = []
    for poly, frame in zip(components, names):
        for exp, coeff in poly.terms:
            pieces.append((coeff, _monomial_atoms(poly.chart, exp) + [frame]))
    if not pieces:
        return "0"
    out = []
    for k, (coeff, atoms) in enumerate(pieces):
        mag = abs(coeff)
        body = " * ".join(([format_rat(mag)] if mag != 1 else []) + atoms)
        if k == 0:
            out.append(body if coeff > 0 else f"-{body}")
        else:
            out.append(f" + {body}" if coeff > 0 else f" - {body}")
    return "".join(out)


def format_vector_field(vf: VectorField) -> str:
    names = [f"d/d{name}" for name in vf.chart.names]
    pieces: List[Tuple[Fraction, List[str]]] = []
    for poly, direction in zip(vf.components, names):
        for exp, coeff in poly.terms:
            pieces.append((coeff, _monomial_atoms(poly.chart, exp) + [direction]))
    if not pieces:
        return "0"
    out = []
    for k, (coeff, atoms) in enumerate(pieces):
        mag = abs(coeff)
        body = " * ".join(([format_rat(mag)] if mag != 1 else []) + atoms)
        if k == 0:
            out.append(body if coeff > 0 else f"-{body}")
        else:
            out.append(f" + {body}" if coeff > 0 else f" - {body}")
    return "".join(out)


def format_algebroid_lines(name: str, L: LieAlgebroid) -> List[str]:
    lines = [f"[algebroid {name}]"]
    lines.append(f"base = [{', '.join(L.chart.names)}]")
    lines.append(f"frame = [{', '.join(L.frames)}]")
    for alpha in range(L.rank):
        field = L.anchor_field(alpha)
        if not field.is_zero:
            lines.append(f"anchor({L.frames[alpha]}) = {format_vector_field(field)}")
    for a, b in itertools.combinations(range(L.rank), 2):
        vec = L.structure[a][b]
        if any(vec):
            lines.append(
                f"bracket({L.frames[a]}, {L.frames[b]}) = "
                f"{format_combination(vec, L.frames)}"
            )
    return lines


def format_lie_algebra_lines(name: str, g: LieAlgebra) -> List[str]:
    lines = [f"[lie_algebra {name}]", f"dim = {g.dim}"]
    lines.append(f"basis = [{', '.join(g.basis_names)}]")
    for i, j in itertools.combinations(range(g.dim), 2):
        vec = g.constants[i][j]
        if any(c != 0 for c in vec):
            terms = []
            for k, c in enumerate(vec):
                if c == 0:
                    continue
                mag = abs(c)
                body = (f"{format_rat(mag)} * " if mag != 1 else "") + g.basis_names[k]
                terms.append((c > 0, body))
            text = ""
            for t, (positive, body) in enumerate(terms):
                if t == 0:
                    text = body if positive else f"-{body}"
                else:
                    text += f" + {body}" if positive else f" - {body}"
            lines.append(f"bracket({g.basis_names[i]}, {g.basis_names[j]}) = {text}")
    return lines


def format_pairing_lines(p: PairedAlgebra) -> List[str]:
    names = p.algebra.basis_names
    lines = []
    for i in range(p.algebra.dim):
        row = ", ".join(format_rat(v) for v in p.pairing[i])
        lines.append(f"pairing({names[i]}) = [{row}]")
    return lines


def format_derivation_lines(prefix: str, d: Derivation, frames: Sequence[str]) -> List[str]:
    lines = []
    base = format_vector_field(d.base_field)
    lines.append(f"{prefix}.base = {base}")
    for i, name in enumerate(frames):
        row = format_combination(d.matrix[i], frames)
        if row != "0":
            lines.append(f"{prefix}({name}) = {row}")
    return lines
