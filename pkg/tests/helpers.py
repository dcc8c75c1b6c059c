"""Shared test utilities: random system generators and independent oracles.

The generators are deliberately varied (boundary-pinned couplings, sparse
Dirichlet weights, moment-built near-extremal systems) so randomized
equivalence suites exercise both verdicts.  The oracles recompute quantities
by enumeration, independent of the library's code paths.
"""

from __future__ import annotations

import itertools

import numpy as np

from cbdsys import Bunch, Content, Context, System, build_system


def bunch_probs_from_moments(ea: float, eb: float, eab: float) -> list[float]:
    """2x2 table from means and correlation; assumes the triple is feasible."""
    probs = []
    for idx in range(4):
        x = 1.0 if idx & 1 else -1.0
        y = 1.0 if idx & 2 else -1.0
        probs.append((1.0 + x * ea + y * eb + x * y * eab) / 4.0)
    return probs


def random_rank4_consistent(rng: np.random.Generator) -> System:
    """Cyclic rank-4 system with equal marginals in both contexts of every
    content; an eighth of the couplings are pinned to a Frechet endpoint."""
    margs = rng.uniform(0.0, 1.0, 4)
    tables = []
    for i in range(4):
        a, b = margs[i], margs[(i + 1) % 4]
        lo, hi = max(0.0, a + b - 1.0), min(a, b)
        u = rng.uniform()
        if u < 0.125:
            t = lo
        elif u > 0.875:
            t = hi
        else:
            t = lo + (hi - lo) * rng.uniform()
        tables.append(
            (f"c{i + 1}", [f"q{i + 1}", f"q{(i + 1) % 4 + 1}"],
             [1.0 - a - b + t, a - t, b - t, t])
        )
    return build_system([f"q{i + 1}" for i in range(4)], tables)


def random_rank4_general(rng: np.random.Generator) -> System:
    """Generally inconsistent rank-4 system; half the draws are moment-built
    near an odd sign pattern, where contextual systems are common."""
    if rng.uniform() < 0.5:
        alpha = float(rng.choice([0.5, 1.0]))
        tables = [
            (f"c{i + 1}", [f"q{i + 1}", f"q{(i + 1) % 4 + 1}"],
             list(rng.dirichlet([alpha] * 4)))
            for i in range(4)
        ]
    else:
        signs = rng.choice([-1.0, 1.0], size=4)
        if float(np.prod(signs)) > 0:
            signs[rng.integers(4)] *= -1.0
        tables = []
        for i in range(4):
            e = float(signs[i]) * (1.0 - rng.uniform(0.0, 0.4))
            bound = (1.0 - abs(e)) / 2.0
            ea = rng.uniform(-bound, bound)
            eb = rng.uniform(-bound, bound)
            tables.append(
                (f"c{i + 1}", [f"q{i + 1}", f"q{(i + 1) % 4 + 1}"],
                 bunch_probs_from_moments(ea, eb, e))
            )
    return build_system([f"q{i + 1}" for i in range(4)], tables)


def random_rank2(rng: np.random.Generator, alpha: float = 1.0) -> System:
    tables = [
        ("AB", ["A", "B"], list(rng.dirichlet([alpha] * 4))),
        ("BA", ["A", "B"], list(rng.dirichlet([alpha] * 4))),
    ]
    return build_system(["A", "B"], tables)


def random_rank2_matched_products(rng: np.random.Generator) -> System:
    """Rank-2 system whose two contexts share the product expectation but not
    the marginals: the question-order situation where the QQ equality holds."""
    e = rng.uniform(-1.0, 1.0)
    agree = (1.0 + e) / 2.0
    tables = []
    for cid in ("AB", "BA"):
        u, v = rng.uniform(), rng.uniform()
        p_yy = agree * u
        p_nn = agree * (1.0 - u)
        p_yn = (1.0 - agree) * v
        p_ny = (1.0 - agree) * (1.0 - v)
        tables.append((cid, ["A", "B"], [p_nn, p_yn, p_ny, p_yy]))
    return build_system(["A", "B"], tables)


def random_small_system(rng: np.random.Generator, max_vars: int = 8) -> System:
    """Arbitrary-shape system with every content in at most two contexts and
    at most ``max_vars`` total variables."""
    pool = [f"q{i}" for i in range(1, 7)]
    usage = {q: 0 for q in pool}
    tables = []
    total = 0
    for j in range(int(rng.integers(1, 5))):
        available = [q for q in pool if usage[q] < 2]
        k = min(int(rng.integers(1, 4)), len(available), max_vars - total)
        if k == 0:
            break
        members = [str(q) for q in rng.choice(available, size=k, replace=False)]
        for q in members:
            usage[q] += 1
        total += k
        alpha = float(rng.choice([0.5, 1.0, 2.0]))
        tables.append((f"c{j + 1}", members, list(rng.dirichlet([alpha] * (1 << k)))))
    used = [q for q in pool if usage[q] > 0]
    return build_system(used, tables)


def permute_declarations(system: System, rng: np.random.Generator) -> System:
    """Same system, contents/contexts declared in a different order."""
    contents = list(system.contents)
    rng.shuffle(contents)
    order = rng.permutation(len(system.contexts))
    contexts = tuple(system.contexts[i] for i in order)
    bunches = tuple(system.bunch(ctx.id) for ctx in contexts)
    return System(tuple(contents), contexts, bunches)


def flip_content(system: System, content: str) -> System:
    """Relabel +1 <-> -1 for one content in every context holding it."""
    bunches = []
    for ctx in system.contexts:
        bunch = system.bunch(ctx.id)
        if content in ctx.contents:
            mask = 1 << ctx.contents.index(content)
            probs = tuple(bunch.probs[i ^ mask] for i in range(len(bunch.probs)))
            bunches.append(Bunch(ctx.id, ctx.contents, probs))
        else:
            bunches.append(bunch)
    return System(system.contents, system.contexts, tuple(bunches))


def rename_ids(system: System, content_map: dict[str, str], context_map: dict[str, str]) -> System:
    contents = tuple(Content(content_map[c.id], c.label) for c in system.contents)
    contexts = tuple(
        Context(context_map[ctx.id], tuple(content_map[q] for q in ctx.contents))
        for ctx in system.contexts
    )
    bunches = tuple(
        Bunch(context_map[b.context], tuple(content_map[q] for q in b.contents), b.probs)
        for b in system.bunches
    )
    return System(contents, contexts, bunches)


def marginalize_joint(probs, positions: list[int], m: int) -> list[float]:
    """Distribution of the variables at ``positions`` under a joint vector
    over m binary variables, by direct enumeration (test-side oracle)."""
    out = [0.0] * (1 << len(positions))
    for assignment, p in enumerate(probs):
        local = 0
        for j, pos in enumerate(positions):
            if (assignment >> pos) & 1:
                local |= 1 << j
        out[local] += p
    return out


def pair_equal_probability(probs, u: int, v: int) -> float:
    """Pr[bit u == bit v] under a joint vector, by direct enumeration."""
    return sum(
        p for assignment, p in enumerate(probs)
        if ((assignment >> u) & 1) == ((assignment >> v) & 1)
    )


def max_equality_by_basis_enumeration(a: float, b: float) -> float:
    """Independent maximizer of Pr[X = Y] for fixed Bernoulli marginals.

    The transport polytope {p >= 0 : p_yy + p_yn = a, p_yy + p_ny = b,
    sum p = 1} is searched exhaustively over its basic solutions: every
    choice of three basic variables out of four, solved exactly, kept if
    nonnegative.  The best objective among feasible bases is the LP optimum.
    """
    A = np.array([
        [1.0, 1.0, 0.0, 0.0],   # p_yy + p_yn = a
        [1.0, 0.0, 1.0, 0.0],   # p_yy + p_ny = b
        [1.0, 1.0, 1.0, 1.0],   # total mass
    ])
    rhs = np.array([a, b, 1.0])
    objective = np.array([1.0, 0.0, 0.0, 1.0])  # p_yy + p_nn
    best = None
    for basis in itertools.combinations(range(4), 3):
        sub = A[:, basis]
        if abs(np.linalg.det(sub)) < 1e-12:
            continue
        x_basis = np.linalg.solve(sub, rhs)
        if x_basis.min() < -1e-12:
            continue
        x = np.zeros(4)
        x[list(basis)] = x_basis
        value = float(objective @ x)
        if best is None or value > best:
            best = value
    assert best is not None, f"transport polytope empty for a={a}, b={b}"
    return best


def max_deterministic_cyclic_lhs(n: int = 4) -> float:
    """Largest criterion left side any deterministic +1/-1 assignment can
    produce: the classical bound certified by exhaustive enumeration."""
    best = 0.0
    for values in itertools.product((-1.0, 1.0), repeat=n):
        products = [values[i] * values[(i + 1) % n] for i in range(n)]
        total = sum(products)
        best = max(best, max(abs(total - 2.0 * e) for e in products))
    return best
