"""Closed-form noncontextuality criteria for cyclic systems of rank 2 and 4.

A cyclic system of rank n has n contents and n contexts arranged in a single
cycle: every context holds exactly two contents and every content appears in
exactly two contexts.  For rank 4 the maximal-equality coupling exists iff

    max_j |sum_i e_i - 2 e_j|  <=  2 + sum of per-content expectation gaps,

where e_i is the product expectation of context i and a content's gap is the
absolute difference of its expectations across its two contexts.  With all
gaps zero the right side is exactly 2 and the inequality reduces to the
classical CHSH/Fine existence criterion for a jointly distributed quadruple.
For rank 2 the same coupling exists iff |e_1 - e_2| is at most the sum of the
two gaps; the question-order "QQ" equality is precisely e_1 - e_2 = 0, which
makes such systems noncontextual no matter how unequal the marginals are.

Ranks other than 2 and 4 are reported as not-cyclic here and must go through
the coupling engine.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import InconsistentSystemError, RankError
from .system import (
    EPS_FEAS,
    EPS_PROB,
    System,
    consistency,
    expectation,
    product_expectation,
)

_CLOSED_FORM_RANKS = (2, 4)


@dataclass(frozen=True)
class CyclicLayout:
    """Canonical traversal of a cyclic system.

    ``order[i]`` is ``(content, (previous context, current context))``: the
    i-th content of the cycle together with the two contexts holding it, and
    the *current* context is the one it shares with the next content.  The
    cycle starts at the lexicographically least content id and runs in the
    direction that makes the second content id least (ties broken by least
    current-context id), so equal systems always canonicalize identically.
    """

    rank: int
    order: tuple[tuple[str, tuple[str, str]], ...]

    def cycle_contexts(self) -> tuple[str, ...]:
        """Context ids in cycle order (current context of each entry)."""
        return tuple(pair[1] for _, pair in self.order)

    def cycle_contents(self) -> tuple[str, ...]:
        return tuple(q for q, _ in self.order)


@dataclass(frozen=True)
class CriterionResult:
    """Outcome of one closed-form criterion.

    ``deltas`` maps each content to its connection gap in expectation units,
    |<R in one context> - <R in the other>| (each in [0, 2]).  ``boundary``
    flags results within EPS_FEAS of lhs = rhs, which are reported
    noncontextual because the criteria are non-strict inequalities.
    """

    lhs: float
    rhs: float
    noncontextual: bool
    deltas: dict[str, float]
    margin: float
    boundary: bool

    @classmethod
    def from_sides(cls, lhs: float, rhs: float, deltas: dict[str, float]) -> "CriterionResult":
        return cls(
            lhs=lhs,
            rhs=rhs,
            noncontextual=lhs <= rhs + EPS_FEAS,
            deltas=dict(deltas),
            margin=rhs - lhs,
            boundary=abs(lhs - rhs) <= EPS_FEAS,
        )


def detect_cyclic(system: System) -> CyclicLayout | None:
    """Recognize cyclic systems of rank 2 or 4 and return their canonical layout.

    Returns None for everything else (not an error): contexts with other than
    two contents, contents in other than two contexts, multiple disjoint
    cycles, or ranks outside {2, 4}.
    """
    if any(len(ctx.contents) != 2 for ctx in system.contexts):
        return None

    holders: dict[str, list[str]] = {c.id: [] for c in system.contents}
    for ctx in system.contexts:
        for q in ctx.contents:
            if q not in holders:
                return None
            holders[q].append(ctx.id)
    if any(len(ctxs) != 2 for ctxs in holders.values()):
        return None

    rank = len(system.contexts)
    if rank != len(system.contents) or rank not in _CLOSED_FORM_RANKS:
        return None

    other_content = {
        ctx.id: {ctx.contents[0]: ctx.contents[1], ctx.contents[1]: ctx.contents[0]}
        for ctx in system.contexts
    }

    start = min(holders)
    # Direction: pick the start context giving the least second content,
    # then the least context id.
    first_ctx = min(
        holders[start], key=lambda cid: (other_content[cid][start], cid)
    )

    order: list[tuple[str, tuple[str, str]]] = []
    q, cur = start, first_ctx
    for _ in range(rank):
        if holders[q][0] == holders[q][1]:
            return None  # a context listing one content twice is not a cycle
        prev = holders[q][0] if holders[q][1] == cur else holders[q][1]
        order.append((q, (prev, cur)))
        q = other_content[cur][q]
        cur = holders[q][0] if holders[q][1] == cur else holders[q][1]

    # The walk must close into a single cycle covering every content.
    if q != start or len({entry[0] for entry in order}) != rank:
        return None
    return CyclicLayout(rank=rank, order=tuple(order))


def _cycle_sides(system: System, layout: CyclicLayout) -> tuple[list[float], dict[str, float]]:
    """Per-context product expectations (cycle order) and per-content gaps."""
    n = layout.rank
    products = []
    for i in range(n):
        q_i = layout.order[i][0]
        q_next = layout.order[(i + 1) % n][0]
        ctx = layout.order[i][1][1]
        products.append(product_expectation(system.bunch(ctx), q_i, q_next))
    deltas = {}
    for q, (prev, cur) in layout.order:
        deltas[q] = abs(
            expectation(system.bunch(prev), q) - expectation(system.bunch(cur), q)
        )
    return products, deltas


def _odd_combination_max(products: list[float]) -> float:
    """max_j |sum_i e_i - 2 e_j| over the cycle's product expectations."""
    total = sum(products)
    return max(abs(total - 2.0 * e) for e in products)


def chsh_fine(system: System, layout: CyclicLayout) -> CriterionResult:
    """Classical CHSH/Fine existence criterion for rank-4 systems.

    Valid only for consistently connected systems, where one context-free
    variable per content can make sense; inconsistent input is refused
    (use cbd_cyclic4, which handles it).
    """
    if layout.rank != 4:
        raise RankError(f"CHSH/Fine applies to rank 4, got rank {layout.rank}")
    report = consistency(system)
    if report.max_marginal_gap > EPS_PROB:
        raise InconsistentSystemError(
            "system is not consistently connected "
            f"(max marginal gap {report.max_marginal_gap:g}); use cbd_cyclic4"
        )
    products, deltas = _cycle_sides(system, layout)
    return CriterionResult.from_sides(_odd_combination_max(products), 2.0, deltas)


def cbd_cyclic4(system: System, layout: CyclicLayout) -> CriterionResult:
    """Maximal-equality coupling criterion for rank-4 systems.

    Consistency is not required: the connection gaps move onto the right-hand
    side, which reduces to the CHSH/Fine bound 2 when all gaps vanish.
    """
    if layout.rank != 4:
        raise RankError(f"cyclic-4 criterion applies to rank 4, got rank {layout.rank}")
    products, deltas = _cycle_sides(system, layout)
    rhs = 2.0 + sum(deltas.values())
    return CriterionResult.from_sides(_odd_combination_max(products), rhs, deltas)


def cbd_cyclic2(system: System, layout: CyclicLayout) -> CriterionResult:
    """Maximal-equality coupling criterion for rank-2 systems."""
    if layout.rank != 2:
        raise RankError(f"cyclic-2 criterion applies to rank 2, got rank {layout.rank}")
    products, deltas = _cycle_sides(system, layout)
    lhs = abs(products[0] - products[1])
    return CriterionResult.from_sides(lhs, sum(deltas.values()), deltas)


def qq_statistic(system: System, layout: CyclicLayout) -> float:
    """Signed difference of the two product expectations of a rank-2 system,
    taken in canonical cycle order.

    Zero (the question-order "QQ" equality) makes cbd_cyclic2's left side
    vanish, so the system is noncontextual regardless of its marginals.
    """
    if layout.rank != 2:
        raise RankError(f"QQ statistic applies to rank 2, got rank {layout.rank}")
    products, _ = _cycle_sides(system, layout)
    return products[0] - products[1]
