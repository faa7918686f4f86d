from __future__ import annotations

import itertools
import math
import random

import numpy as np
import pytest
import scipy.stats

from postedit.tlx import (
    CONDITIONS,
    DIMENSIONS,
    DegenerateInputError,
    IncompleteDesignError,
    SummaryStat,
    TlxError,
    TlxRecord,
    TlxRowError,
    composite_workload,
    condition_summary,
    friedman_test,
    ingest_tlx_csv,
    midranks,
    paired_scores,
    pearson_matrix,
    pearson_r,
    scores_matrix,
    wilcoxon_signed_rank,
)


def rec(condition="excel", participant="p1", **scores) -> TlxRecord:
    base = dict(mental=0.0, physical=0.0, temporal=0.0, performance=0.0,
                effort=0.0, frustration=0.0)
    base.update(scores)
    return TlxRecord(participant_id=participant, condition=condition, **base)


class TestCompositeWorkload:
    def test_excel_row_means(self):
        record = rec(mental=4.10, physical=3.40, temporal=2.70, performance=7.80,
                     effort=4.10, frustration=3.50)
        assert composite_workload(record) == pytest.approx(17.80, abs=1e-9)

    def test_ec1_row_means(self):
        record = rec(condition="ec1", mental=2.67, physical=1.58, temporal=2.17,
                     performance=8.50, effort=3.08, frustration=1.75)
        assert composite_workload(record) == pytest.approx(11.25, abs=1e-9)

    def test_all_zero(self):
        assert composite_workload(rec()) == 0.0

    def test_performance_excluded(self):
        assert composite_workload(rec(performance=9.0)) == 0.0

    def test_linear(self):
        r1 = rec(mental=1, physical=2, temporal=3, effort=4, frustration=5)
        r2 = rec(mental=2, physical=1, temporal=0.5, effort=1, frustration=0)
        summed = rec(mental=3, physical=3, temporal=3.5, effort=5, frustration=5)
        assert composite_workload(summed) == pytest.approx(
            composite_workload(r1) + composite_workload(r2)
        )


class TestConditionSummary:
    def test_mean_and_sample_sd(self):
        records = [rec(mental=2, participant="a"), rec(mental=4, participant="b")]
        stat = condition_summary(records)["excel"]["mental"]
        assert stat.mean == pytest.approx(3.00)
        assert stat.sd == pytest.approx(math.sqrt(2), abs=1e-3)  # 1.414
        assert stat.n == 2

    def test_single_record_null_sd(self):
        stat = condition_summary([rec(mental=7)])["excel"]["mental"]
        assert stat == SummaryStat(mean=7.0, sd=None, n=1)

    def test_identical_records_zero_sd(self):
        records = [rec(mental=5, participant="a"), rec(mental=5, participant="b")]
        assert condition_summary(records)["excel"]["mental"].sd == 0.0

    def test_empty_input(self):
        assert condition_summary([]) == {}

    def test_unbalanced_conditions_tolerated(self):
        records = [rec(), rec(participant="b"), rec(condition="ec1")]
        summary = condition_summary(records)
        assert summary["excel"]["mental"].n == 2
        assert summary["ec1"]["mental"].n == 1


class TestPearson:
    def test_perfect_linear(self):
        assert pearson_r([1, 2, 3], [2, 4, 6]) == pytest.approx(1.0)

    def test_hand_computed_negative(self):
        # cov = -0.5, sd_x = 1, sd_y = 1  ->  r = -0.5
        assert pearson_r([1, 2, 3], [6, 4, 5]) == pytest.approx(-0.5)

    def test_constant_sample_raises(self):
        with pytest.raises(ValueError):
            pearson_r([1, 2, 3], [3, 3, 3])

    def test_matrix_symmetric_unit_diagonal(self):
        rng = random.Random(7)
        records = [
            rec(participant=f"p{i}", condition=CONDITIONS[i % 4],
                mental=rng.uniform(0, 10), physical=rng.uniform(0, 10),
                temporal=rng.uniform(0, 10), performance=rng.uniform(0, 10),
                effort=rng.uniform(0, 10), frustration=rng.uniform(0, 10))
            for i in range(24)
        ]
        matrix = pearson_matrix(records)
        for i, a in enumerate(DIMENSIONS):
            assert matrix.values[i][i] == 1.0
            for j, b in enumerate(DIMENSIONS):
                assert matrix.value(a, b) == matrix.value(b, a)

    def test_matrix_matches_numpy(self):
        rng = random.Random(13)
        records = [
            rec(participant=f"p{i}",
                mental=rng.uniform(0, 10), physical=rng.uniform(0, 10),
                temporal=rng.uniform(0, 10), performance=rng.uniform(0, 10),
                effort=rng.uniform(0, 10), frustration=rng.uniform(0, 10))
            for i in range(15)
        ]
        matrix = pearson_matrix(records)
        data = np.array([[r.score(d) for d in DIMENSIONS] for r in records])
        expected = np.corrcoef(data, rowvar=False)
        assert np.allclose(np.array(matrix.values), expected, atol=1e-12)

    def test_degenerate_dimension_named(self):
        records = [rec(participant=f"p{i}", mental=i, physical=5) for i in range(4)]
        with pytest.raises(DegenerateInputError) as exc:
            pearson_matrix(records)
        assert exc.value.dimension == "physical"

    def test_affine_invariance(self):
        rng = random.Random(99)
        records = [
            rec(participant=f"p{i}",
                mental=rng.uniform(0, 10), physical=rng.uniform(0, 10),
                temporal=rng.uniform(0, 10), performance=rng.uniform(0, 10),
                effort=rng.uniform(0, 10), frustration=rng.uniform(0, 10))
            for i in range(12)
        ]
        base = pearson_matrix(records)
        scaled = [
            TlxRecord(r.participant_id, r.condition, r.mental * 0.3 + 2.0, r.physical,
                      r.temporal, r.performance, r.effort, r.frustration)
            for r in records
        ]
        other = pearson_matrix(scaled)
        assert np.allclose(np.array(base.values), np.array(other.values), atol=1e-12)


class TestMidranks:
    def test_no_ties(self):
        assert midranks([30, 10, 20]) == [3.0, 1.0, 2.0]

    def test_ties_get_average(self):
        assert midranks([5, 5, 1]) == [2.5, 2.5, 1.0]

    def test_all_tied(self):
        assert midranks([2, 2, 2, 2]) == [2.5, 2.5, 2.5, 2.5]


def brute_force_friedman_p(rows: list[list[float]]) -> float:
    """Literal enumeration over every combination of row permutations."""
    rank_rows = [midranks(row) for row in rows]
    k = len(rows[0])

    def statistic(rrs):
        sums = [sum(col) for col in zip(*rrs)]
        return sum(s * s for s in sums)

    observed = statistic(rank_rows)
    count = 0
    total = 0
    for combo in itertools.product(*(list(itertools.permutations(r)) for r in rank_rows)):
        total += 1
        if statistic(combo) >= observed - 1e-12:
            count += 1
    return count / total


class TestFriedman:
    def test_identically_ranked_rows(self):
        rows = [[1.0, 2.0, 3.0], [10.0, 20.0, 30.0], [0.1, 0.2, 0.3]]
        result = friedman_test(rows)
        assert result.statistic_name == "chi_squared"
        assert result.value == pytest.approx(6.0)
        assert result.degrees_of_freedom == 2
        assert 0.0 < result.p_value < 0.1

    def test_all_tied_rows(self):
        rows = [[4.0, 4.0, 4.0], [7.0, 7.0, 7.0]]
        result = friedman_test(rows)
        assert result.value == 0.0
        assert result.p_value == 1.0

    def test_exact_p_matches_brute_force(self):
        rng = random.Random(5)
        for _ in range(8):
            rows = [[rng.randint(0, 10) for _ in range(3)] for _ in range(4)]
            result = friedman_test(rows, method="exact")
            assert result.method == "exact"
            assert result.p_value == pytest.approx(brute_force_friedman_p(rows), abs=1e-12)

    def test_statistic_matches_scipy(self):
        rng = random.Random(11)
        for _ in range(10):
            rows = [[rng.uniform(0, 10) for _ in range(4)] for _ in range(6)]
            result = friedman_test(rows)
            cols = [np.array([row[j] for row in rows]) for j in range(4)]
            expected_stat, expected_p = scipy.stats.friedmanchisquare(*cols)
            assert result.value == pytest.approx(float(expected_stat), abs=1e-10)
            approx = friedman_test(rows, method="approx")
            assert approx.method == "approximation"
            assert approx.p_value == pytest.approx(float(expected_p), abs=1e-10)

    def test_monotone_transform_invariance(self):
        rng = random.Random(3)
        rows = [[rng.uniform(0, 10) for _ in range(4)] for _ in range(5)]
        transformed = [[math.exp(v) for v in row] for row in rows]
        a = friedman_test(rows)
        b = friedman_test(transformed)
        assert a.value == pytest.approx(b.value)
        assert a.p_value == pytest.approx(b.p_value)

    def test_missing_cell_names_participant(self):
        with pytest.raises(IncompleteDesignError) as exc:
            friedman_test([[1, 2, 3], [1, None, 3]], participants=["alice", "bob"])
        assert "bob" in str(exc.value)

    def test_too_few_conditions(self):
        with pytest.raises(TlxError):
            friedman_test([[1, 2], [2, 1]])


def brute_force_wilcoxon_p(differences: list[float]) -> float:
    nonzero = [d for d in differences if d != 0]
    ranks = midranks([abs(d) for d in nonzero])
    w_plus = sum(r for d, r in zip(nonzero, ranks) if d > 0)
    w_minus = sum(r for d, r in zip(nonzero, ranks) if d < 0)
    observed = min(w_plus, w_minus)
    n = len(nonzero)
    hits = 0
    for signs in itertools.product((1, -1), repeat=n):
        plus = sum(r for s, r in zip(signs, ranks) if s > 0)
        minus = sum(r for s, r in zip(signs, ranks) if s < 0)
        if min(plus, minus) <= observed + 1e-12:
            hits += 1
    return hits / 2**n


class TestWilcoxon:
    def test_all_positive_differences(self):
        result = wilcoxon_signed_rank([2, 3, 4], [1, 1, 1])  # d = (1, 2, 3)
        assert result.statistic_name == "w"
        assert result.value == 0.0
        assert result.p_value == pytest.approx(0.25)
        assert result.method == "exact"
        assert result.degrees_of_freedom is None

    def test_identical_samples(self):
        result = wilcoxon_signed_rank([1, 2, 3], [1, 2, 3])
        assert result.value == 0.0
        assert result.p_value == 1.0
        assert result.method == "all-zero"

    def test_exact_matches_brute_force_n8(self):
        rng = random.Random(17)
        for _ in range(10):
            a = [rng.randint(0, 10) for _ in range(8)]
            b = [rng.randint(0, 10) for _ in range(8)]
            if all(x == y for x, y in zip(a, b)):
                continue
            result = wilcoxon_signed_rank(a, b)
            expected = brute_force_wilcoxon_p([x - y for x, y in zip(a, b)])
            assert result.p_value == pytest.approx(expected, abs=1e-12)

    def test_zero_differences_dropped(self):
        # Pairs with equal values contribute nothing.
        with_zeros = wilcoxon_signed_rank([5, 2, 3, 4], [5, 1, 1, 1])
        without = wilcoxon_signed_rank([2, 3, 4], [1, 1, 1])
        assert with_zeros.p_value == without.p_value
        assert with_zeros.value == without.value

    def test_large_n_uses_approximation(self):
        rng = random.Random(23)
        a = [rng.uniform(0, 10) for _ in range(30)]
        b = [rng.uniform(0, 10) for _ in range(30)]
        result = wilcoxon_signed_rank(a, b)
        assert result.method == "approximation"
        assert 0.0 <= result.p_value <= 1.0

    def test_length_mismatch(self):
        with pytest.raises(TlxError):
            wilcoxon_signed_rank([1, 2], [1])


CSV_HEADER_LINE = "participant_id,condition,mental,physical,temporal,performance,effort,frustration"


class TestIngestCsv:
    def test_well_formed(self):
        doc = CSV_HEADER_LINE + "\np1,excel,1,2,3,4,5,6\np2,ec1,0,0,0,10,0,0\n"
        records = ingest_tlx_csv(doc)
        assert len(records) == 2
        assert records[0].condition == "excel"
        assert records[1].performance == 10.0

    def test_out_of_range_score_cites_line(self):
        doc = CSV_HEADER_LINE + "\np1,excel,1,2,3,4,5,6\np2,excel,11,0,0,0,0,0\n"
        with pytest.raises(TlxRowError) as exc:
            ingest_tlx_csv(doc)
        assert exc.value.line == 3

    def test_condition_case_normalized(self):
        doc = CSV_HEADER_LINE + "\np1,Excel,1,2,3,4,5,6\n"
        assert ingest_tlx_csv(doc)[0].condition == "excel"

    def test_space_variant_normalized(self):
        doc = CSV_HEADER_LINE + "\np1,No Suggestions,1,2,3,4,5,6\n"
        assert ingest_tlx_csv(doc)[0].condition == "no_suggestions"

    def test_unknown_condition_cites_line(self):
        doc = CSV_HEADER_LINE + "\np1,word,1,2,3,4,5,6\n"
        with pytest.raises(TlxRowError) as exc:
            ingest_tlx_csv(doc)
        assert exc.value.line == 2

    def test_missing_column(self):
        with pytest.raises(TlxRowError) as exc:
            ingest_tlx_csv("participant_id,condition,mental\np1,excel,1\n")
        assert "physical" in str(exc.value)

    def test_scale_flag(self):
        doc = CSV_HEADER_LINE + "\np1,excel,15,2,3,4,5,6\n"
        with pytest.raises(TlxRowError):
            ingest_tlx_csv(doc)
        assert ingest_tlx_csv(doc, scale_max=20)[0].mental == 15.0

    def test_header_order_independent(self):
        doc = (
            "condition,participant_id,frustration,effort,performance,temporal,physical,mental\n"
            "excel,p1,6,5,4,3,2,1\n"
        )
        record = ingest_tlx_csv(doc)[0]
        assert record.mental == 1.0 and record.frustration == 6.0


class TestMatrixHelpers:
    def test_scores_matrix_complete(self):
        records = [
            rec(participant=p, condition=c, mental=i)
            for i, (p, c) in enumerate(
                (p, c) for p in ("a", "b") for c in CONDITIONS
            )
        ]
        matrix, participants = scores_matrix(records, "mental")
        assert participants == ["a", "b"]
        assert len(matrix) == 2 and len(matrix[0]) == 4

    def test_scores_matrix_incomplete_names_participant(self):
        records = [rec(participant="a", condition=c) for c in CONDITIONS]
        records += [rec(participant="b", condition="excel")]
        with pytest.raises(IncompleteDesignError) as exc:
            scores_matrix(records, "mental")
        assert exc.value.participant == "b"

    def test_paired_scores_skips_unpaired(self):
        records = [
            rec(participant="a", condition="excel", mental=5),
            rec(participant="a", condition="ec1", mental=2),
            rec(participant="b", condition="excel", mental=7),
        ]
        a, b, who = paired_scores(records, "mental", "excel", "ec1")
        assert who == ["a"]
        assert a == [5.0] and b == [2.0]

    def test_record_rejects_bad_condition(self):
        with pytest.raises(ValueError):
            rec(condition="appraise")
