"""Coupling-feasibility engine for arbitrary binary systems.

A system is noncontextual exactly when one joint distribution exists over
*all* its variables (one per (content, context) incidence) that reproduces
every bunch and gives each within-connection pair its required probability of
agreeing: 1 for the "equal always" (reduced-coupling) constraint, or the
maximal-coupling value 1 - |a - b| for the default "equal with maximal
possible probability" constraint.  Both are linear in the joint-assignment
probabilities, so existence is a linear feasibility problem over 2**m
unknowns (m = total variable count).

Two independent deciders are provided:

* :func:`decide` solves one elastic LP with scipy's HiGHS backend, minimizing
  the largest absolute constraint violation; the optimum is the distance to
  feasibility, and the minimizer doubles as the witness when it is ~0.
* :func:`brute_force_decide` re-derives the verdict from scratch: b must be a
  convex combination of the constraint images of the 2**m deterministic
  couplings, which a hand-rolled dense-tableau phase-1 simplex with Bland's
  rule settles without touching scipy.  It exists to cross-check decide and
  is intentionally limited to small systems.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np
from scipy import sparse
from scipy.optimize import linprog

from .errors import ConnectionSizeError, SolverError, SystemSizeError
from .system import EPS_FEAS, System, connections, require_valid

#: Hard cap on the total variable count (2**20 dense unknowns).
M_MAX = 20

#: brute_force_decide is a test oracle; keep its tableaus small.
BRUTE_M_MAX = 12

#: Violations below this are treated as exactly feasible; between this and
#: EPS_FEAS the verdict is re-solved at tightened tolerance and flagged
#: "boundary" if still ambiguous.
TIGHT_TOL = 1e-10

#: Switch the LP constraint blocks to sparse storage above this many variables.
_DENSE_M_LIMIT = 12


class CouplingConstraint(enum.Enum):
    """The property demanded of each within-connection pair of the coupling."""

    EQUAL_ALWAYS = "equal-always"
    MAX_EQUALITY = "max-equality"

    def target(self, a: float, b: float) -> float:
        """Required Pr[pair equal] given the pair's Pr[+1] marginals."""
        if self is CouplingConstraint.EQUAL_ALWAYS:
            return 1.0
        return max_equality_probability(a, b)


def max_equality_probability(a: float, b: float) -> float:
    """Largest Pr[X = Y] over all couplings of two +1/-1 variables with
    Pr[X=+1] = a and Pr[Y=+1] = b.

    The optimal coupling matches as much mass as possible on each outcome,
    giving min(a, b) + min(1-a, 1-b) = 1 - |a - b|; the formula holds at the
    degenerate extremes too.
    """
    if not (0.0 <= a <= 1.0 and 0.0 <= b <= 1.0):
        raise ValueError(f"marginals must lie in [0, 1], got a={a!r}, b={b!r}")
    return min(a, b) + min(1.0 - a, 1.0 - b)


@dataclass(frozen=True, eq=False)
class FeasibilityProblem:
    """Equality system A x = rhs over joint-assignment probabilities x >= 0.

    ``variables`` fixes the assignment-index bit convention: bit j of an
    assignment (least significant = variables[0]) carries variables[j], with
    bit value 1 meaning +1.  Rows encode, in order: every bunch entry of every
    context, one agreement probability per two-member connection, and total
    mass one.
    """

    variables: tuple[tuple[str, str], ...]
    matrix: object  # dense ndarray, or scipy.sparse matrix for large systems
    rhs: np.ndarray
    row_labels: tuple[str, ...]

    @property
    def num_variables(self) -> int:
        return len(self.variables)


@dataclass(frozen=True)
class CouplingWitness:
    """An explicit joint distribution certifying noncontextuality."""

    variables: tuple[tuple[str, str], ...]
    probs: tuple[float, ...]


@dataclass(frozen=True)
class FeasibilityVerdict:
    """Outcome of a coupling-existence decision.

    ``max_constraint_violation`` is the witness's worst residual when
    feasible, and the minimized worst residual (distance to feasibility)
    when not.  ``boundary`` marks verdicts that stayed within EPS_FEAS of
    the fence even after re-solving at tightened tolerance.
    """

    feasible: bool
    witness: CouplingWitness | None
    max_constraint_violation: float
    boundary: bool = False


def coupling_variables(system: System) -> tuple[tuple[str, str], ...]:
    """(content, context) pairs in canonical order: contexts as declared,
    contents in context order."""
    return tuple(
        (q, ctx.id) for ctx in system.contexts for q in ctx.contents
    )


def build_feasibility_problem(
    system: System, constraint: CouplingConstraint
) -> FeasibilityProblem:
    """Assemble the linear feasibility problem deciding C-coupling existence.

    Requires a valid system whose connections all have at most two members
    and whose total variable count does not exceed M_MAX.
    """
    require_valid(system)
    conns = connections(system)
    for conn in conns:
        if len(conn.members) > 2:
            raise ConnectionSizeError(
                f"content {conn.content!r} appears in {len(conn.members)} contexts;"
                " pairwise coupling constraints support at most 2"
            )
    variables = coupling_variables(system)
    m = len(variables)
    if m > M_MAX:
        raise SystemSizeError(
            f"coupling over {m} variables needs 2^{m} unknowns; limit is 2^{M_MAX}"
        )

    n = 1 << m
    index = np.arange(n)
    var_pos = {var: j for j, var in enumerate(variables)}

    rows: list[np.ndarray] = []
    rhs: list[float] = []
    labels: list[str] = []

    for ctx in system.contexts:
        bunch = system.bunch(ctx.id)
        bits = [(index >> var_pos[(q, ctx.id)]) & 1 for q in ctx.contents]
        for a, prob in enumerate(bunch.probs):
            mask = np.ones(n, dtype=bool)
            for j, bit in enumerate(bits):
                mask &= bit == ((a >> j) & 1)
            rows.append(mask)
            rhs.append(prob)
            labels.append(f"bunch[{ctx.id}][{a}]")

    for conn in conns:
        if len(conn.members) != 2:
            continue
        (ctx_a, marg_a), (ctx_b, marg_b) = conn.members
        u = (index >> var_pos[(conn.content, ctx_a)]) & 1
        v = (index >> var_pos[(conn.content, ctx_b)]) & 1
        rows.append(u == v)
        rhs.append(constraint.target(marg_a, marg_b))
        labels.append(f"equal[{conn.content}:{ctx_a}={ctx_b}]")

    rows.append(np.ones(n, dtype=bool))
    rhs.append(1.0)
    labels.append("mass")

    if m > _DENSE_M_LIMIT:
        matrix = sparse.vstack(
            [sparse.csr_matrix(row.astype(np.float64)) for row in rows], format="csr"
        )
    else:
        matrix = np.array(rows, dtype=np.float64)
    return FeasibilityProblem(
        variables=variables,
        matrix=matrix,
        rhs=np.array(rhs, dtype=np.float64),
        row_labels=tuple(labels),
    )


def _solve_min_max_violation(
    problem: FeasibilityProblem, tight: bool
) -> tuple[float, np.ndarray]:
    """Minimize t subject to |A x - rhs| <= t entrywise, x >= 0.

    Returns (t*, x*): the distance to feasibility in the max norm and its
    minimizer, which is a valid witness whenever t* is negligible.
    """
    A, b = problem.matrix, problem.rhs
    nr = len(b)
    nc = A.shape[1]  # one unknown per joint assignment: 2**m
    ones = np.ones((nr, 1))
    if sparse.issparse(A):
        A_ub = sparse.bmat([[A, -ones], [-A, -ones]], format="csr")
    else:
        A_ub = np.block([[A, -ones], [-A, -ones]])
    b_ub = np.concatenate([b, -b])
    c = np.zeros(nc + 1)
    c[-1] = 1.0
    options = {"presolve": True}
    if tight:
        options["primal_feasibility_tolerance"] = 1e-10
        options["dual_feasibility_tolerance"] = 1e-10
    res = linprog(
        c, A_ub=A_ub, b_ub=b_ub, bounds=(0, None), method="highs", options=options
    )
    if res.status != 0:
        raise SolverError(f"LP solver failed (status {res.status}): {res.message}")
    return float(res.x[-1]), res.x[:-1]


def witness_violation(
    system: System, constraint: CouplingConstraint, witness: CouplingWitness
) -> float:
    """Worst absolute defect of a claimed witness: negative mass, bunch
    reproduction error, or missed connection-equality target."""
    problem = build_feasibility_problem(system, constraint)
    if witness.variables != problem.variables:
        raise ValueError("witness variable order does not match the system's")
    x = np.asarray(witness.probs, dtype=np.float64)
    if x.shape != (1 << problem.num_variables,):
        raise ValueError(
            f"witness has {x.size} entries, expected {1 << problem.num_variables}"
        )
    return _max_violation(problem, x)


def _max_violation(problem: FeasibilityProblem, x: np.ndarray) -> float:
    residual = np.abs(problem.matrix @ x - problem.rhs).max()
    negativity = max(0.0, float(-x.min())) if x.size else 0.0
    return max(float(residual), negativity)


def _verdict_from_solution(
    problem: FeasibilityProblem, x: np.ndarray, boundary: bool
) -> FeasibilityVerdict:
    witness = CouplingWitness(problem.variables, tuple(float(v) for v in x))
    violation = _max_violation(problem, x)
    if violation > EPS_FEAS:
        raise SolverError(
            f"solver returned an invalid witness (violation {violation:g})"
        )
    return FeasibilityVerdict(
        feasible=True,
        witness=witness,
        max_constraint_violation=violation,
        boundary=boundary,
    )


def decide(system: System, constraint: CouplingConstraint) -> FeasibilityVerdict:
    """Decide C-coupling existence, with a validated witness when feasible.

    Feasible means the LP admits a point with max constraint violation at
    most EPS_FEAS.  Verdicts inside (TIGHT_TOL, EPS_FEAS] are re-solved at
    tightened solver tolerance and flagged ``boundary`` if still ambiguous.
    """
    problem = build_feasibility_problem(system, constraint)
    t, x = _solve_min_max_violation(problem, tight=False)
    if t > EPS_FEAS:
        return FeasibilityVerdict(
            feasible=False, witness=None, max_constraint_violation=t
        )
    boundary = False
    if t > TIGHT_TOL:
        t2, x2 = _solve_min_max_violation(problem, tight=True)
        if t2 < t:
            t, x = t2, x2
        boundary = t > TIGHT_TOL
    return _verdict_from_solution(problem, x, boundary)


def brute_force_decide(
    system: System, constraint: CouplingConstraint
) -> FeasibilityVerdict:
    """Independent oracle for :func:`decide`, limited to m <= BRUTE_M_MAX.

    Searches the convex combinations of all 2**m deterministic couplings for
    one hitting the target vector, via a dense-tableau phase-1 simplex with
    Bland's rule: a different formulation, pivoting scheme, and elimination
    path than the HiGHS solver behind decide.
    """
    m = len(coupling_variables(system))
    if m > BRUTE_M_MAX:
        raise SystemSizeError(
            f"brute-force decider handles at most {BRUTE_M_MAX} variables, got {m}"
        )
    problem = build_feasibility_problem(system, constraint)
    x = _phase1_bland(np.asarray(problem.matrix, dtype=np.float64), problem.rhs.copy())
    violation = _max_violation(problem, x)
    if violation > EPS_FEAS:
        return FeasibilityVerdict(
            feasible=False, witness=None, max_constraint_violation=violation
        )
    return _verdict_from_solution(problem, x, boundary=False)


def _phase1_bland(
    A: np.ndarray,
    b: np.ndarray,
    pivot_tol: float = 1e-9,
    max_pivots: int = 50_000,
) -> np.ndarray:
    """Phase-1 primal simplex on {x >= 0 : A x = b}, returning the x that
    minimizes the total artificial mass (zero iff the system is feasible).

    Bland's smallest-index rule is used for both the entering and leaving
    choices, which precludes cycling on these highly degenerate polytopes.
    """
    nr, nc = A.shape
    flip = b < 0
    A = np.where(flip[:, None], -A, A)
    b = np.where(flip, -b, b)

    # Tableau [A | I | b] with the artificial identity as starting basis.
    T = np.empty((nr, nc + nr + 1))
    T[:, :nc] = A
    T[:, nc : nc + nr] = np.eye(nr)
    T[:, -1] = b
    basis = np.arange(nc, nc + nr)

    # Reduced costs for min(sum of artificials): 0 - 1^T A_j on real columns.
    z = np.zeros(nc + nr)
    z[:nc] = -A.sum(axis=0)

    for _ in range(max_pivots):
        entering = np.flatnonzero(z < -pivot_tol)
        if entering.size == 0:
            break
        j = int(entering[0])
        col = T[:, j]
        candidates = np.flatnonzero(col > pivot_tol)
        if candidates.size == 0:
            # Phase-1 objective is bounded below by zero, so an unbounded
            # direction can only be numerical noise.
            raise SolverError("phase-1 simplex found an unbounded direction")
        ratios = T[candidates, -1] / col[candidates]
        best = ratios.min()
        ties = candidates[ratios <= best + 1e-12]
        r = int(ties[np.argmin(basis[ties])])

        T[r] /= T[r, j]
        reduce = T[:, j].copy()
        reduce[r] = 0.0
        T -= np.outer(reduce, T[r])
        z -= z[j] * T[r, :-1]
        basis[r] = j
    else:
        raise SolverError("phase-1 simplex exceeded the pivot budget")

    x = np.zeros(nc + nr)
    x[basis] = T[:, -1]
    return x[:nc]
