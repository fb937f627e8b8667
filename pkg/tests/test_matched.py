"""Matched pairs: the compatibility identities, the bowtie, the semidirect
products on the duals, and the equivalence with the bialgebroid route."""

import itertools

import pytest

from doublealg import catalog
from doublealg.algebroid import (
    Derivation,
    algebroid_to_lie_algebra,
    check_algebroid,
    tangent_algebroid,
)
from doublealg.exact import Chart, Polynomial
from doublealg.liealg import drinfeld_double
from doublealg.matched import (
    MatchedPair,
    MatchedPairError,
    RepresentationMap,
    assemble_bowtie,
    build_bowtie,
    build_semidirects,
    check_cor_sdp,
    check_matched,
    check_representation,
    extract_actions,
)


def scaled_sigma_pair(mp: MatchedPair, factor: int) -> MatchedPair:
    chart = mp.chart
    scale = Polynomial.constant(chart, factor)
    sigma = RepresentationMap([d.scale_by(scale) for d in mp.sigma.derivations])
    return MatchedPair(mp.algebroid_a, mp.algebroid_b, mp.rho, sigma)


PASSING = [
    catalog.abelian_matched_pair(),
    catalog.coadjoint_pair(catalog.solvable2_bialgebra()),
    catalog.line_action_pair(),
]
FAILING = [
    scaled_sigma_pair(catalog.coadjoint_pair(catalog.solvable2_bialgebra()), 2),
    catalog.line_action_pair(sigma_coeff="x"),
    catalog.line_action_pair(sigma_coeff="1"),
]


class TestCheckMatched:
    def test_abelian_pair_passes(self):
        assert check_matched(catalog.abelian_matched_pair()).ok

    def test_coadjoint_pair_passes(self):
        assert check_matched(catalog.coadjoint_pair(catalog.solvable2_bialgebra())).ok

    def test_scaled_sigma_fails(self):
        report = check_matched(FAILING[0])
        assert not report.ok
        # the scaled coadjoint action already fails flatness: commutators
        # scale quadratically, the image of the bracket linearly
        assert report.first_failure.check_id == "sigma.flat"

    def test_broken_anchor_identity(self):
        report = check_matched(catalog.line_action_pair(sigma_coeff="x"))
        assert not report.ok
        assert report.first_failure.check_id == "identity_3"
        assert "d/dx" in report.first_failure.witness

    def test_representation_preconditions_reported(self):
        chart = Chart(["x"])
        tm = tangent_algebroid(chart)
        rep = RepresentationMap(
            [Derivation(tm.anchor_field(0), [[Polynomial.zero(chart)]])]
        )
        assert check_representation(tm, rep, "rho").ok


class TestBowtie:
    def test_abelian_direct_sum(self):
        bow = build_bowtie(catalog.abelian_matched_pair())
        assert check_algebroid(bow).ok
        assert all(
            p.is_zero for row in bow.structure for vec in row for p in vec
        )

    def test_mixed_bracket_formula_on_frames(self):
        mp = catalog.coadjoint_pair(catalog.solvable2_bialgebra())
        bow = build_bowtie(mp)
        ra = mp.algebroid_a.rank
        for i in range(ra):
            for j in range(mp.algebroid_b.rank):
                x = mp.algebroid_a.frame_section(i).vector(mp.chart)
                y = mp.algebroid_b.frame_section(j).vector(mp.chart)
                expected = tuple(-p for p in mp.sigma.apply(j, x)) + tuple(
                    mp.rho.apply(i, y)
                )
                assert bow.structure[i][ra + j] == expected

    def test_coadjoint_bowtie_equals_drinfeld_double(self):
        b = catalog.solvable2_bialgebra()
        bow = build_bowtie(catalog.coadjoint_pair(b))
        assert (
            algebroid_to_lie_algebra(bow).constants
            == drinfeld_double(b).algebra.constants
        )

    def test_summand_restrictions(self):
        mp = catalog.line_action_pair()
        bow = build_bowtie(mp)
        ra = mp.algebroid_a.rank
        for i, j in itertools.combinations(range(ra), 2):
            assert bow.structure[i][j][:ra] == mp.algebroid_a.structure[i][j]

    def test_failing_pair_rejected_and_assembly_fails_axioms(self):
        bad = catalog.line_action_pair(sigma_coeff="x")
        with pytest.raises(MatchedPairError):
            build_bowtie(bad)
        assembled = assemble_bowtie(bad)
        assert not check_algebroid(assembled).ok


class TestExtractActions:
    def test_abelian_sum_gives_zero_actions(self):
        bow = build_bowtie(catalog.abelian_matched_pair())
        mp = extract_actions(bow, 1)
        assert all(
            all(p.is_zero for p in row)
            for d in mp.rho.derivations
            for row in d.matrix
        )

    def test_round_trip_on_catalog(self):
        for mp in PASSING:
            bow = build_bowtie(mp)
            again = extract_actions(bow, mp.algebroid_a.rank)
            assert again.algebroid_a.structure == mp.algebroid_a.structure
            assert again.algebroid_b.structure == mp.algebroid_b.structure
            for d1, d2 in zip(again.rho.derivations, mp.rho.derivations):
                assert d1.equals(d2)
            for d1, d2 in zip(again.sigma.derivations, mp.sigma.derivations):
                assert d1.equals(d2)
            rebuilt = build_bowtie(again)
            assert rebuilt.structure == bow.structure
            assert rebuilt.anchor == bow.anchor

    def test_drinfeld_double_actions_recovered(self):
        b = catalog.solvable2_bialgebra()
        mp = catalog.coadjoint_pair(b)
        double = drinfeld_double(b)
        from doublealg.algebroid import lie_algebra_to_algebroid

        total = lie_algebra_to_algebroid(double.algebra)
        again = extract_actions(total, b.dim)
        for d1, d2 in zip(again.rho.derivations, mp.rho.derivations):
            assert d1.equals(d2)
        for d1, d2 in zip(again.sigma.derivations, mp.sigma.derivations):
            assert d1.equals(d2)

    def test_unclosed_subspace_rejected(self):
        # the double of the solvable bialgebra split at the wrong place
        b = catalog.solvable2_bialgebra()
        from doublealg.algebroid import lie_algebra_to_algebroid

        total = lie_algebra_to_algebroid(drinfeld_double(b).algebra)
        with pytest.raises(MatchedPairError):
            extract_actions(total, 1)


class TestSemidirects:
    def test_zero_actions_give_product_structures(self):
        mp = catalog.abelian_matched_pair(2, 1)
        semidirect, opposite = build_semidirects(mp)
        assert check_algebroid(semidirect).ok and check_algebroid(opposite).ok
        assert all(
            p.is_zero for row in semidirect.structure for vec in row for p in vec
        )

    def test_dual_action_bracket_formula(self):
        # [0 + Y, phi + 0] = sigma*_Y(phi) + 0 on frames
        mp = catalog.coadjoint_pair(catalog.solvable2_bialgebra())
        semidirect, _ = build_semidirects(mp)
        ra = mp.algebroid_a.rank
        for a in range(ra):
            for j in range(mp.algebroid_b.rank):
                sigma_star = mp.sigma.derivations[j].contragredient()
                expected = tuple(sigma_star.matrix[a]) + tuple(
                    Polynomial.zero(mp.chart) for _ in range(mp.algebroid_b.rank)
                )
                got = tuple(-p for p in semidirect.structure[a][ra + j])
                assert got == expected

    def test_opposite_anchor_is_negated(self):
        mp = catalog.line_action_pair()
        _, opposite = build_semidirects(mp)
        assert opposite.anchor[0] == tuple(
            -p for p in mp.algebroid_a.anchor[0]
        )

    def test_valid_even_for_non_matched_pairs(self):
        # representations valid, identities broken: both outputs still pass
        bad = catalog.line_action_pair(sigma_coeff="x")
        semidirect, opposite = build_semidirects(bad)
        assert check_algebroid(semidirect).ok and check_algebroid(opposite).ok


class TestCorSdp:
    def test_three_way_verdicts_match(self):
        for mp in PASSING:
            assert check_matched(mp).ok
            assert check_cor_sdp(mp).ok
        for mp in FAILING:
            assert not check_matched(mp).ok
            assert not check_cor_sdp(mp).ok
