"""FP invariant, effective resistances, rank invariant and Alexander polynomial of a Tait-graph Laplacian."""

import logging
from dataclasses import dataclass, field

from sympy import Rational, Symbol, expand, zeros

from knotres import exactlinalg
from knotres.errors import IndexOutOfRange, NonUniformWeights, PenroseViolation
from knotres.exactlinalg import Polynomial
from knotres.taitgraph import laplacian
from knotres.utils.data_processor import format_matrix, format_number, format_polynomial, format_rational

logger = logging.getLogger(__name__)

T = Symbol("t")


def fp(L):
    """trace(L^T L^+)."""
    return (L.T * exactlinalg.pseudoinverse(L)).trace()


def rank_invariant(L):
    """trace(L L^+), which must be the integer rank(L)."""
    value = (L * exactlinalg.pseudoinverse(L)).trace()
    r = exactlinalg.rank(L)
    if value != r:
        raise PenroseViolation(f"trace(L L^+) = {value} differs from rank {r}")
    return r


def resistance_matrix(L):
    """R[i][j] = P[i][i] + P[j][j] - 2 P[i][j] with P = L^+."""
    P = exactlinalg.pseudoinverse(L)
    n = L.rows
    R = zeros(n, n)
    for i in range(n):
        for j in range(n):
            R[i, j] = P[i, i] + P[j, j] - 2 * P[i, j]
    return R


def edge_resistances(g, R=None):
    """Effective resistance between the endpoints of each edge, in edge order."""
    if R is None:
        R = resistance_matrix(laplacian(g))
    return [R[tail, head] for tail, head, _, _ in g.edges]


def _common_weight(g):
    omega = g.omega
    if omega is None and g.edges:
        raise NonUniformWeights(f"edge weights {sorted(set(g.weights))} are not all equal")
    return omega


def fp_via_resistance(g, R=None):
    """(omega / 2) * sum of edge resistances, parallel edges counted separately."""
    omega = _common_weight(g)
    if omega is None:
        return Rational(0)
    return omega * sum(edge_resistances(g, R), Rational(0)) / 2


def trace_identity_check(L):
    """(tr(L^T R), -2 FP); the two agree for balanced L."""
    R = resistance_matrix(L)
    return (L.T * R).trace(), -2 * fp(L)


def _seifert_form(L, delete):
    n = L.rows
    if not 0 <= delete < n:
        raise IndexOutOfRange(f"cannot delete vertex {delete} of a {n}-vertex graph")
    keep = [i for i in range(n) if i != delete]
    return L.extract(keep, keep)


def alexander_raw(L, delete):
    """det(S - t S^T) for S = L without row and column `delete`, unnormalized."""
    S = _seifert_form(L, delete)
    if S.rows == 0:
        return Polynomial((1,))
    return Polynomial.from_expr(expand((S - T * S.T).det(method="berkowitz")), T)


def alexander(L, delete):
    """Alexander polynomial, normalized to a positive constant term."""
    return alexander_raw(L, delete).normalized()


def equivalent_network(L, boundary):
    """Resistance matrix of the Kron-reduced network on `boundary` (ascending vertex order).

    Matches the full resistance matrix restricted to `boundary` when L is symmetric.
    For a directed L the two generally differ.
    """
    return resistance_matrix(exactlinalg.schur_complement(L, boundary))


@dataclass(frozen=True)
class InvariantReport:
    n: int
    omega: object
    fp: object
    rank_inv: int
    resistance: object
    alexander: Polynomial
    char_poly: Polynomial
    edge_resistances: tuple = ()
    checks: dict = field(default_factory=dict)

    @property
    def alexander_degree_ok(self):
        return self.alexander.degree <= self.n - 1

    def to_dict(self):
        return {
            "n": self.n,
            "omega": None if self.omega is None else format_number(self.omega),
            "fp": format_rational(self.fp),
            "rank": self.rank_inv,
            "char_poly": format_polynomial(self.char_poly),
            "alexander": format_polynomial(self.alexander),
            "alexander_degree_ok": self.alexander_degree_ok,
            "resistance": format_matrix(self.resistance),
            "edge_resistances": [format_rational(r) for r in self.edge_resistances],
            "checks": dict(self.checks),
        }


def report(g, delete=None):
    """Every invariant of g, with the resistance oracle and trace identity cross-checked."""
    L = laplacian(g)
    P = exactlinalg.pseudoinverse(L)
    value = (L.T * P).trace()
    R = resistance_matrix(L)

    checks = {
        "balanced": g.is_balanced,
        "penrose": all(exactlinalg.penrose_conditions(L, P).values()),
        "trace_identity": (L.T * R).trace() == -2 * value,
    }
    try:
        checks["oracle"] = fp_via_resistance(g, R) == value
    except NonUniformWeights as e:
        logger.warning(f"Resistance oracle skipped: {e}")
        checks["oracle"] = None
    if not g.is_balanced:
        logger.warning("Graph is unbalanced; the resistance identities need not hold")
    for name, ok in checks.items():
        if ok is False and name != "balanced":
            logger.warning(f"Cross-check {name} failed for FP = {value}")

    if delete is None:
        delete = g.n - 1
    result = InvariantReport(
        n=g.n,
        omega=g.omega,
        fp=value,
        rank_inv=rank_invariant(L),
        resistance=R,
        alexander=alexander(L, delete),
        char_poly=exactlinalg.char_poly(L),
        edge_resistances=tuple(edge_resistances(g, R)),
        checks=checks,
    )
    logger.info(f"Invariants computed: n={g.n}, FP={value}")
    return result
