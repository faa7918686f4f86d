"""Workload analytics over NASA-TLX study records.

Implements the analysis pipeline used to evaluate annotation tooling:
per-condition summaries, composite workload, Pearson correlations between
the six TLX dimensions, and nonparametric significance tests (Friedman for
within-subject comparisons across all conditions, Wilcoxon signed-rank for
focused pairwise contrasts). TLX scores are ordinal and not normally
distributed, which is why both tests are rank-based.
"""

from __future__ import annotations

import csv
import io
import math
from collections import Counter, defaultdict
from dataclasses import dataclass
from itertools import permutations

DIMENSIONS = ("mental", "physical", "temporal", "performance", "effort", "frustration")

# Performance measures perceived success (higher is better) so it is
# excluded from the workload composite; the other five are burdens.
COMPOSITE_DIMENSIONS = ("mental", "physical", "temporal", "effort", "frustration")

CONDITIONS = ("excel", "no_suggestions", "xcomet", "ec1")

DEFAULT_SCALE_MAX = 10.0

# Exact enumeration bounds. Wilcoxon enumerates 2^n sign assignments via a
# sum-distribution DP; Friedman enumerates (k!)^n within-row permutations
# via a sorted-column-sum DP. Both are cheap at study scale.
WILCOXON_EXACT_LIMIT = 20
FRIEDMAN_EXACT_MAX_CELLS = 48
FRIEDMAN_EXACT_MAX_CONDITIONS = 5


class TlxError(Exception):
    pass


class TlxRowError(TlxError):
    def __init__(self, line: int, message: str):
        self.line = line
        super().__init__(f"line {line}: {message}")


class DegenerateInputError(TlxError):
    def __init__(self, dimension: str):
        self.dimension = dimension
        super().__init__(f"dimension {dimension!r} is constant; correlation undefined")


class IncompleteDesignError(TlxError):
    def __init__(self, participant: str):
        self.participant = participant
        super().__init__(f"participant {participant!r} is missing at least one condition")


@dataclass(frozen=True)
class TlxRecord:
    """One participant x condition row of the six TLX dimension scores."""

    participant_id: str
    condition: str
    mental: float
    physical: float
    temporal: float
    performance: float
    effort: float
    frustration: float

    def __post_init__(self) -> None:
        if self.condition not in CONDITIONS:
            raise ValueError(f"unknown condition {self.condition!r}")
        for dim in DIMENSIONS:
            if getattr(self, dim) < 0:
                raise ValueError(f"{dim} must be >= 0")

    def score(self, dimension: str) -> float:
        if dimension not in DIMENSIONS:
            raise ValueError(f"unknown dimension {dimension!r}")
        return float(getattr(self, dimension))


@dataclass(frozen=True)
class SummaryStat:
    mean: float
    sd: float | None
    n: int


@dataclass(frozen=True)
class StatResult:
    """A single test outcome.

    statistic_name is "chi_squared" (Friedman) or "w" (Wilcoxon);
    degrees_of_freedom is present exactly for chi-squared results. method
    records whether the p-value is exact (full enumeration of the null) or
    an asymptotic approximation; "all-zero" marks the degenerate Wilcoxon
    case where every paired difference vanished.
    """

    statistic_name: str
    value: float
    degrees_of_freedom: int | None
    p_value: float
    method: str

    def __post_init__(self) -> None:
        if not 0.0 <= self.p_value <= 1.0:
            raise ValueError(f"p_value out of [0, 1]: {self.p_value}")
        if (self.statistic_name == "chi_squared") != (self.degrees_of_freedom is not None):
            raise ValueError("degrees_of_freedom present iff chi-squared")

    def to_dict(self) -> dict:
        return {
            "statistic_name": self.statistic_name,
            "value": self.value,
            "degrees_of_freedom": self.degrees_of_freedom,
            "p_value": self.p_value,
            "method": self.method,
        }


@dataclass(frozen=True)
class CorrelationMatrix:
    """Symmetric, unit-diagonal Pearson r matrix indexed by dimension name."""

    dimensions: tuple[str, ...]
    values: tuple[tuple[float, ...], ...]

    def value(self, a: str, b: str) -> float:
        return self.values[self.dimensions.index(a)][self.dimensions.index(b)]

    def to_dict(self) -> dict:
        return {
            "dimensions": list(self.dimensions),
            "values": [list(row) for row in self.values],
        }


def composite_workload(record: TlxRecord) -> float:
    """Total workload: the plain sum of the five burden dimensions.

    Performance is excluded (it scores perceived success, not load). No
    weighting is applied.
    """
    return math.fsum(record.score(dim) for dim in COMPOSITE_DIMENSIONS)


def condition_summary(
    records: list[TlxRecord],
) -> dict[str, dict[str, SummaryStat]]:
    """Per-condition mean and sample (n-1) standard deviation per dimension.

    Conditions with a single record report their value with a null sd.
    Unbalanced condition counts are fine here; only the Friedman test
    requires complete blocks.
    """
    by_condition: dict[str, list[TlxRecord]] = defaultdict(list)
    for record in records:
        by_condition[record.condition].append(record)

    summary: dict[str, dict[str, SummaryStat]] = {}
    for condition in CONDITIONS:
        group = by_condition.get(condition)
        if not group:
            continue
        summary[condition] = {}
        for dim in DIMENSIONS:
            values = [r.score(dim) for r in group]
            n = len(values)
            mean = math.fsum(values) / n
            if n >= 2:
                var = math.fsum((v - mean) ** 2 for v in values) / (n - 1)
                sd = math.sqrt(var)
            else:
                sd = None
            summary[condition][dim] = SummaryStat(mean=mean, sd=sd, n=n)
    return summary


def pearson_r(xs: list[float], ys: list[float]) -> float:
    """Pearson correlation coefficient of two equal-length samples."""
    n = len(xs)
    if n != len(ys):
        raise ValueError("samples must have equal lengths")
    if n < 3:
        raise ValueError("need at least 3 observations")
    mean_x = math.fsum(xs) / n
    mean_y = math.fsum(ys) / n
    dx = [x - mean_x for x in xs]
    dy = [y - mean_y for y in ys]
    var_x = math.fsum(d * d for d in dx)
    var_y = math.fsum(d * d for d in dy)
    if var_x == 0.0 or var_y == 0.0:
        raise ValueError("constant sample; correlation undefined")
    r = math.fsum(a * b for a, b in zip(dx, dy)) / (math.sqrt(var_x) * math.sqrt(var_y))
    return max(-1.0, min(1.0, r))


def pearson_matrix(records: list[TlxRecord]) -> CorrelationMatrix:
    """Pairwise Pearson r between TLX dimensions, pooled across conditions.

    Raises DegenerateInputError naming the dimension when one is constant.
    """
    if len(records) < 3:
        raise TlxError("need at least 3 records for a correlation matrix")
    columns = {dim: [r.score(dim) for r in records] for dim in DIMENSIONS}
    for dim in DIMENSIONS:
        values = columns[dim]
        mean = math.fsum(values) / len(values)
        if all(v == mean for v in values):
            raise DegenerateInputError(dim)

    size = len(DIMENSIONS)
    grid = [[1.0] * size for _ in range(size)]
    for i in range(size):
        for j in range(i + 1, size):
            r = pearson_r(columns[DIMENSIONS[i]], columns[DIMENSIONS[j]])
            grid[i][j] = r
            grid[j][i] = r
    return CorrelationMatrix(
        dimensions=DIMENSIONS, values=tuple(tuple(row) for row in grid)
    )


def midranks(values: list[float]) -> list[float]:
    """Ranks 1..n with ties sharing their average rank."""
    order = sorted(range(len(values)), key=lambda i: values[i])
    ranks = [0.0] * len(values)
    i = 0
    while i < len(order):
        j = i
        while j + 1 < len(order) and values[order[j + 1]] == values[order[i]]:
            j += 1
        avg = (i + j) / 2 + 1
        for at in range(i, j + 1):
            ranks[order[at]] = avg
        i = j + 1
    return ranks


def _tie_term(values: list[float]) -> int:
    """Sum of t^3 - t over tie groups."""
    return sum(t**3 - t for t in Counter(values).values())


def _friedman_exact_p(rank_rows: list[list[float]]) -> float:
    """P(statistic >= observed) over all within-row rank permutations.

    Works in doubled-rank integer units so the comparison is exact. The DP
    tracks the distribution of the sorted column-sum vector: the statistic
    is symmetric in columns and each row permutation is uniform, so column
    identity never matters.
    """
    k = len(rank_rows[0])
    int_rows = [[round(2 * r) for r in row] for row in rank_rows]
    observed = sum(s * s for s in (sum(col) for col in zip(*int_rows)))

    states: dict[tuple[int, ...], int] = {tuple([0] * k): 1}
    total_arrangements = 1
    for row in int_rows:
        arrangements = Counter(permutations(row))
        total_arrangements *= math.factorial(k)
        next_states: dict[tuple[int, ...], int] = defaultdict(int)
        for state, count in states.items():
            for arrangement, multiplicity in arrangements.items():
                merged = tuple(sorted(s + a for s, a in zip(state, arrangement)))
                next_states[merged] += count * multiplicity
        states = dict(next_states)

    at_least = sum(
        count
        for sums, count in states.items()
        if sum(s * s for s in sums) >= observed
    )
    return at_least / total_arrangements


def friedman_test(
    scores: list[list[float]],
    participants: list[str] | None = None,
    method: str = "auto",
) -> StatResult:
    """Friedman rank test over an n participants x k conditions block design.

    Within-row midranks; chi-squared statistic with the standard tie
    correction; df = k - 1. The p-value is the exact permutation tail when
    the design is small enough to enumerate (method "exact"), otherwise the
    chi-squared upper tail (method "approximation"). An all-tied design
    carries no information: statistic 0, p = 1.

    Raises IncompleteDesignError naming the participant on any missing cell.
    """
    if method not in ("auto", "exact", "approx"):
        raise ValueError(f"unknown method {method!r}")
    n = len(scores)
    if n < 2:
        raise TlxError("need at least 2 participants")
    k = len(scores[0]) if scores[0] is not None else 0
    if k < 3:
        raise TlxError("need at least 3 conditions")
    rows: list[list[float]] = []
    for i, row in enumerate(scores):
        who = participants[i] if participants else f"row {i}"
        if row is None or len(row) != k or any(v is None for v in row):
            raise IncompleteDesignError(who)
        rows.append([float(v) for v in row])

    rank_rows = [midranks(row) for row in rows]
    rank_sums = [sum(col) for col in zip(*rank_rows)]
    q0 = 12.0 / (n * k * (k + 1)) * math.fsum(r * r for r in rank_sums) - 3.0 * n * (k + 1)
    ties = sum(_tie_term(row) for row in rows)
    correction = 1.0 - ties / (n * k * (k * k - 1))
    if correction <= 0:
        # Every row fully tied: the ranks cannot distinguish conditions.
        return StatResult("chi_squared", 0.0, k - 1, 1.0, "exact")
    statistic = q0 / correction

    exact_feasible = n * k <= FRIEDMAN_EXACT_MAX_CELLS and k <= FRIEDMAN_EXACT_MAX_CONDITIONS
    if method == "exact" and not exact_feasible:
        raise TlxError(f"design {n}x{k} too large for exact enumeration")
    if method == "exact" or (method == "auto" and exact_feasible):
        p = _friedman_exact_p(rank_rows)
        return StatResult("chi_squared", statistic, k - 1, p, "exact")

    from scipy.stats import chi2  # deferred: slow import, approximation-only

    p = float(chi2.sf(statistic, k - 1))
    return StatResult("chi_squared", statistic, k - 1, min(max(p, 0.0), 1.0), "approximation")


def _wilcoxon_exact_p(ranks: list[float], w_observed: float) -> float:
    """P(min(W+, W-) <= observed) over all 2^n sign assignments.

    DP over the distribution of W+ in doubled-rank integer units (midranks
    are halves, so doubling makes every sum exact).
    """
    doubled = [round(2 * r) for r in ranks]
    total = sum(doubled)
    w2 = round(2 * w_observed)
    counts = [0] * (total + 1)
    counts[0] = 1
    for r in doubled:
        for s in range(total - r, -1, -1):
            if counts[s]:
                counts[s + r] += counts[s]
    if 2 * w2 >= total:
        return 1.0
    lower = sum(counts[: w2 + 1])
    upper = sum(counts[total - w2 :])
    return (lower + upper) / 2 ** len(ranks)


def wilcoxon_signed_rank(a: list[float], b: list[float]) -> StatResult:
    """Two-sided Wilcoxon signed-rank test on paired samples.

    Differences of zero are dropped (classic treatment); |differences| are
    midranked; W = min(W+, W-). Exact two-sided p by enumerating all 2^n
    sign assignments when the effective n is at most 20, otherwise a normal
    approximation with continuity and tie corrections. All differences zero
    degenerates to W = 0, p = 1 with method "all-zero".
    """
    if len(a) != len(b):
        raise TlxError("paired samples must have equal lengths")
    if not a:
        raise TlxError("need at least one pair")
    differences = [x - y for x, y in zip(a, b)]
    nonzero = [d for d in differences if d != 0]
    if not nonzero:
        return StatResult("w", 0.0, None, 1.0, "all-zero")

    ranks = midranks([abs(d) for d in nonzero])
    w_plus = math.fsum(r for d, r in zip(nonzero, ranks) if d > 0)
    w_minus = math.fsum(r for d, r in zip(nonzero, ranks) if d < 0)
    w = min(w_plus, w_minus)
    n = len(nonzero)

    if n <= WILCOXON_EXACT_LIMIT:
        return StatResult("w", w, None, _wilcoxon_exact_p(ranks, w), "exact")

    mean = n * (n + 1) / 4.0
    variance = n * (n + 1) * (2 * n + 1) / 24.0 - _tie_term([abs(d) for d in nonzero]) / 48.0
    z = (w - mean + 0.5) / math.sqrt(variance)
    p = min(1.0, math.erfc(-z / math.sqrt(2.0)))
    return StatResult("w", w, None, p, "approximation")


TLX_CSV_HEADER = (
    "participant_id",
    "condition",
    "mental",
    "physical",
    "temporal",
    "performance",
    "effort",
    "frustration",
)


def normalize_condition(raw: str) -> str:
    return raw.strip().lower().replace(" ", "_").replace("-", "_")


def ingest_tlx_csv(document: str, scale_max: float = DEFAULT_SCALE_MAX) -> list[TlxRecord]:
    """Parse exported study responses from CSV into validated records.

    Header-driven: columns are located by name, extra columns are ignored.
    Condition labels are case-normalized. Row failures carry the 1-based
    line number. scale_max adapts to 0-20 or 0-100 TLX variants; the
    default is the 0-10 scale.
    """
    reader = csv.reader(io.StringIO(document))
    try:
        header = next(reader)
    except StopIteration:
        raise TlxRowError(1, "empty document") from None
    positions: dict[str, int] = {}
    for name in TLX_CSV_HEADER:
        try:
            positions[name] = header.index(name)
        except ValueError:
            raise TlxRowError(1, f"missing column {name!r}") from None

    records: list[TlxRecord] = []
    for line, row in enumerate(reader, start=2):
        if not row or all(not cell.strip() for cell in row):
            continue
        if len(row) <= max(positions.values()):
            raise TlxRowError(line, f"expected {len(header)} columns, got {len(row)}")
        condition = normalize_condition(row[positions["condition"]])
        if condition not in CONDITIONS:
            raise TlxRowError(line, f"unknown condition {row[positions['condition']]!r}")
        scores: dict[str, float] = {}
        for dim in DIMENSIONS:
            cell = row[positions[dim]].strip()
            try:
                value = float(cell)
            except ValueError:
                raise TlxRowError(line, f"{dim} is not a number: {cell!r}") from None
            if not 0.0 <= value <= scale_max:
                raise TlxRowError(
                    line, f"{dim} = {value} outside [0, {scale_max:g}]"
                )
            scores[dim] = value
        records.append(
            TlxRecord(
                participant_id=row[positions["participant_id"]].strip(),
                condition=condition,
                **scores,
            )
        )
    return records


def scores_matrix(
    records: list[TlxRecord], dimension: str, conditions: tuple[str, ...] = CONDITIONS
) -> tuple[list[list[float]], list[str]]:
    """Participants x conditions score matrix for one dimension.

    Block-complete input is required: a participant missing any requested
    condition raises IncompleteDesignError naming them.
    """
    if dimension not in DIMENSIONS:
        raise TlxError(f"unknown dimension {dimension!r}")
    cells: dict[str, dict[str, float]] = defaultdict(dict)
    for record in records:
        if record.condition in conditions:
            cells[record.participant_id][record.condition] = record.score(dimension)
    participants = sorted(cells)
    matrix: list[list[float]] = []
    for participant in participants:
        row = []
        for condition in conditions:
            if condition not in cells[participant]:
                raise IncompleteDesignError(participant)
            row.append(cells[participant][condition])
        matrix.append(row)
    return matrix, participants


def paired_scores(
    records: list[TlxRecord], dimension: str, condition_a: str, condition_b: str
) -> tuple[list[float], list[float], list[str]]:
    """Participant-paired score vectors for two conditions.

    Only participants present in both conditions are paired; order is
    sorted by participant id for determinism.
    """
    if dimension not in DIMENSIONS:
        raise TlxError(f"unknown dimension {dimension!r}")
    for condition in (condition_a, condition_b):
        if condition not in CONDITIONS:
            raise TlxError(f"unknown condition {condition!r}")
    by_participant: dict[str, dict[str, float]] = defaultdict(dict)
    for record in records:
        by_participant[record.participant_id][record.condition] = record.score(dimension)
    participants = sorted(
        pid
        for pid, conditions in by_participant.items()
        if condition_a in conditions and condition_b in conditions
    )
    a = [by_participant[p][condition_a] for p in participants]
    b = [by_participant[p][condition_b] for p in participants]
    return a, b, participants
