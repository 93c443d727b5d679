"""Exact linear programming over the rationals.

The solver works on a dictionary (Tucker tableau) stored as an integer
matrix with a common positive denominator, pivoting fraction-free in the
style of Bareiss/Edmonds so that every entry stays an integer
subdeterminant. Pivot selection is Dantzig's rule, falling back to Bland's
rule on degenerate pivots, which keeps the method finite.

Problems are given as affine constraints ``l(x) + c >= 0`` and
``l(x) + c == 0`` on free variables ``x``. Every answer comes with a
certificate that is re-checked by exact substitution before it is returned:

* ``optimal``: a feasible point plus nonnegative dual multipliers proving
  that no better objective value exists;
* ``infeasible``: Farkas multipliers combining the constraints into
  ``0 >= positive constant``;
* ``unbounded``: a feasible point plus an improving recession direction.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import lcm
from typing import Sequence

import numpy as np

from .exact import primitive

Constraint = tuple  # (coeffs: tuple, const)


class LPError(RuntimeError):
    """Raised when a certificate fails exact re-verification (a bug trap)."""


@dataclass
class LPCertificate:
    status: str  # "optimal" | "infeasible" | "unbounded"
    witness: tuple | None = None
    optimum: Fraction | None = None
    farkas: tuple | None = None  # (ineq_multipliers, eq_multipliers)
    ray: tuple | None = None
    dual: tuple | None = None  # (ineq_multipliers, eq_multipliers)
    pivots: int = 0

    @property
    def feasible(self) -> bool:
        return self.status != "infeasible"


def _as_constraint(con, dim: int) -> Constraint:
    coeffs, const = con
    coeffs = tuple(Fraction(c) for c in coeffs)
    if len(coeffs) != dim:
        raise ValueError(f"constraint has {len(coeffs)} coefficients, expected {dim}")
    return coeffs, Fraction(const)


def _integer_row(coeffs, const):
    """Scale a rational row by a positive integer to make it integral."""
    den = 1
    for x in coeffs:
        den = lcm(den, x.denominator)
    den = lcm(den, const.denominator)
    return [int(const * den)] + [int(x * den) for x in coeffs], den


def _evaluate(con: Constraint, x) -> Fraction:
    coeffs, const = con
    return sum((a * b for a, b in zip(coeffs, x)), Fraction(0)) + const


class _Tableau:
    """Dictionary: basic_i = (T[i,0] + sum_j T[i,j] * nonbasic_j) / D."""

    def __init__(self, T: np.ndarray, basis: list, nonbasic: list):
        self.T = T
        self.D = 1
        self.basis = basis
        self.nonbasic = nonbasic
        self.pivots = 0

    def pivot(self, r: int, s: int) -> None:
        T = self.T
        p = T[r, s]
        D = self.D
        col = T[:, s].copy()
        row = T[r, :].copy()
        nz = np.nonzero(col)[0]
        T *= p
        if len(nz):
            T[nz, :] -= np.outer(col[nz], row)
        if D != 1:
            T //= D
        T[r, :] = -row
        T[:, s] = col
        T[r, s] = D
        if p < 0:
            np.negative(T, out=T)
            p = -p
        self.D = p
        self.basis[r], self.nonbasic[s - 1] = self.nonbasic[s - 1], self.basis[r]
        self.pivots += 1


def lp_solve(
    inequalities: Sequence[Constraint],
    equalities: Sequence[Constraint] = (),
    objective: Constraint | None = None,
    sense: str = "max",
    dim: int | None = None,
    max_pivots: int | None = None,
) -> LPCertificate:
    """Optimize an affine objective over ``{x : l_i(x) + c_i >= 0, l_k(x) + c_k = 0}``.

    Args:
        inequalities: pairs (coefficients, constant) meaning ``l(x)+c >= 0``.
        equalities: pairs meaning ``l(x)+c == 0``.
        objective: (coefficients, constant); None means pure feasibility.
        sense: "max" or "min".
        dim: number of variables (inferred from the first constraint if omitted).
        max_pivots: optional pivot budget; exceeding it raises LPError.

    Returns:
        An exactly verified LPCertificate.
    """
    if sense not in ("max", "min"):
        raise ValueError("sense must be 'max' or 'min'")
    if dim is None:
        first = next(iter(list(inequalities) + list(equalities)), None)
        if first is None and objective is None:
            raise ValueError("cannot infer dimension")
        dim = len(first[0]) if first is not None else len(objective[0])
    ineqs = [_as_constraint(c, dim) for c in inequalities]
    eqs = [_as_constraint(c, dim) for c in equalities]
    if objective is None:
        obj = (tuple(Fraction(0) for _ in range(dim)), Fraction(0))
    else:
        obj = _as_constraint(objective, dim)
    sgn = 1 if sense == "max" else -1
    cert = _solve(ineqs, eqs, (tuple(sgn * c for c in obj[0]), sgn * obj[1]), dim, max_pivots)
    if cert.status == "optimal":
        cert.optimum = sgn * cert.optimum
        if objective is None:
            cert.dual = None
    _verify(cert, ineqs, eqs, obj, sense)
    return cert


def _solve(ineqs, eqs, obj, d, max_pivots) -> LPCertificate:
    m1, m2 = len(ineqs), len(eqs)
    m = m1 + m2
    # variable ids: 0..d-1 free x, d..d+m-1 slacks (ineqs first), d+m aux q
    rows, scales = [], []
    for coeffs, const in ineqs + eqs:
        row, s = _integer_row(coeffs, const)
        rows.append(row)
        scales.append(s)
    T = np.zeros((m + 1, d + 1), dtype=object)
    for i, row in enumerate(rows):
        T[i, :] = row
    T[m, :] = 0
    tab = _Tableau(T, list(range(d, d + m)), list(range(d)))
    is_free = lambda v: v < d  # noqa: E731
    fixed = set(range(d + m1, d + m))  # equality slacks, pinned at 0 once nonbasic
    inert_rows = set()  # basic rows that are identically zero on enterable columns

    def check_budget():
        if max_pivots is not None and tab.pivots > max_pivots:
            raise LPError("pivot budget exceeded")

    # 1. equality slacks leave the basis in exchange for free variables
    for i in range(m1, m):
        r = tab.basis.index(d + i)
        s = next((j + 1 for j, v in enumerate(tab.nonbasic) if is_free(v) and tab.T[r, j + 1] != 0), None)
        if s is not None:
            tab.pivot(r, s)
            continue
        enterable = [j + 1 for j, v in enumerate(tab.nonbasic) if v not in fixed]
        if any(tab.T[r, j] != 0 for j in enterable):
            s = next(j for j in enterable if tab.T[r, j] != 0)
            tab.pivot(r, s)
            continue
        if tab.T[r, 0] != 0:
            return _farkas_from_row(tab, r, d, m1, m, scales, equality_row=True)
        inert_rows.add(d + i)

    # 2. remaining free variables enter the basis where possible
    for j in range(len(tab.nonbasic)):
        v = tab.nonbasic[j]
        if not is_free(v):
            continue
        r = next(
            (i for i in range(m) if not is_free(tab.basis[i]) and tab.basis[i] not in inert_rows
             and tab.basis[i] not in fixed and tab.T[i, j + 1] != 0),
            None,
        )
        if r is not None:
            tab.pivot(r, j + 1)
    check_budget()

    def constrained_rows():
        return [i for i in range(m) if not is_free(tab.basis[i]) and tab.basis[i] not in inert_rows]

    # 3. phase one with a single auxiliary variable
    bad = [i for i in constrained_rows() if tab.T[i, 0] < 0]
    if bad:
        q = d + m
        qcol = np.zeros((m + 1, 1), dtype=object)
        for i in constrained_rows():
            qcol[i, 0] = tab.D
        qcol[m, 0] = -tab.D
        tab.T[m, :] = 0
        tab.T = np.concatenate([tab.T, qcol], axis=1)
        tab.nonbasic.append(q)
        r = min(bad, key=lambda i: (tab.T[i, 0], tab.basis[i]))
        tab.pivot(r, tab.T.shape[1] - 1)
        status = _simplex(tab, m, d, fixed, inert_rows, max_pivots)
        if status != "optimal":
            raise LPError("phase one cannot be unbounded")
        if tab.T[m, 0] < 0:
            return _farkas_from_objective(tab, d, m1, m, scales)
        if q in tab.basis:
            r = tab.basis.index(q)
            s = next((j + 1 for j, v in enumerate(tab.nonbasic) if v not in fixed and tab.T[r, j + 1] != 0), None)
            if s is not None:
                tab.pivot(r, s)
            else:
                inert_rows.add(q)
        if q in tab.nonbasic:
            j = tab.nonbasic.index(q)
            tab.T = np.delete(tab.T, j + 1, axis=1)
            tab.nonbasic.pop(j)

    # 4. phase two
    coeffs, const = obj
    orow, oscale = _integer_row(coeffs, const)
    objrow = np.zeros(tab.T.shape[1], dtype=object)
    objrow[0] = orow[0] * tab.D
    for v in range(d):
        c = orow[v + 1]
        if c == 0:
            continue
        if v in tab.basis:
            objrow += c * tab.T[tab.basis.index(v), :]
        else:
            objrow[tab.nonbasic.index(v) + 1] += c * tab.D
    tab.T[m, :] = objrow
    status = _simplex(tab, m, d, fixed, inert_rows, max_pivots)
    x = _point(tab, d)
    if status == "optimal":
        yi, ye = _multipliers(tab, d, m1, m, scales, negate=True)
        ye = tuple(y / oscale for y in ye)
        yi = tuple(y / oscale for y in yi)
        return LPCertificate(
            "optimal", witness=x, optimum=Fraction(tab.T[m, 0], tab.D) / oscale,
            dual=(yi, ye), pivots=tab.pivots,
        )
    s = status[1]
    ray = _ray(tab, d, s)
    return LPCertificate("unbounded", witness=x, ray=ray, pivots=tab.pivots)


def _simplex(tab: _Tableau, m: int, d: int, fixed: set, inert_rows: set, max_pivots):
    """Maximize the objective row. Returns "optimal" or ("unbounded", col)."""
    bland = False
    while True:
        if max_pivots is not None and tab.pivots > max_pivots:
            raise LPError("pivot budget exceeded")
        T = tab.T
        obj = T[m]
        cands = []
        for j, v in enumerate(tab.nonbasic):
            if v in fixed:
                continue
            c = obj[j + 1]
            if v < d:
                if c != 0:
                    return ("unbounded", j + 1) if c > 0 else ("unbounded", -(j + 1))
                continue
            if c > 0:
                cands.append(j + 1)
        if not cands:
            return "optimal"
        if bland:
            s = min(cands, key=lambda j: tab.nonbasic[j - 1])
        else:
            s = max(cands, key=lambda j: (obj[j], -tab.nonbasic[j - 1]))
        col = T[:, s]
        best = None
        for i in np.nonzero(col[:m] < 0)[0]:
            b = tab.basis[i]
            if b < d or b in inert_rows:
                continue
            key = (Fraction(T[i, 0], -col[i]), b)
            if best is None or key < best[0]:
                best = (key, i)
        if best is None:
            return ("unbounded", s)
        degenerate = T[best[1], 0] == 0
        tab.pivot(best[1], s)
        bland = degenerate


def _point(tab: _Tableau, d: int) -> tuple:
    x = [Fraction(0)] * d
    for i, v in enumerate(tab.basis):
        if v < d:
            x[v] = Fraction(tab.T[i, 0], tab.D)
    return tuple(x)


def _ray(tab: _Tableau, d: int, s: int) -> tuple:
    direction = 1
    if s < 0:
        direction, s = -1, -s
    r = [Fraction(0)] * d
    entering = tab.nonbasic[s - 1]
    if entering < d:
        r[entering] = Fraction(direction)
    for i, v in enumerate(tab.basis):
        if v < d:
            r[v] = Fraction(direction * tab.T[i, s], tab.D)
    return tuple(r)


def _multipliers(tab, d, m1, m, scales, negate):
    """Read constraint multipliers off the objective row.

    The objective row reads  z = z0 + sum_j cbar_j u_j  over nonbasic u; for
    slack u_j = scaled row j, the multiplier of original row j is
    -cbar_j * scale_j (or +cbar_j when ``negate`` is False).
    """
    yi = [Fraction(0)] * m1
    ye = [Fraction(0)] * (m - m1)
    for j, v in enumerate(tab.nonbasic):
        if d <= v < d + m:
            k = v - d
            val = Fraction(tab.T[m, j + 1], tab.D) * scales[k]
            if negate:
                val = -val
            if k < m1:
                yi[k] = val
            else:
                ye[k - m1] = val
    return tuple(yi), tuple(ye)


def _normalize_farkas(yi, ye):
    vec = primitive(list(yi) + list(ye))
    return tuple(Fraction(v) for v in vec[: len(yi)]), tuple(Fraction(v) for v in vec[len(yi):])


def _farkas_from_objective(tab, d, m1, m, scales) -> LPCertificate:
    yi, ye = _multipliers(tab, d, m1, m, scales, negate=True)
    yi, ye = _normalize_farkas(yi, ye)
    return LPCertificate("infeasible", farkas=(yi, ye), pivots=tab.pivots)


def _farkas_from_row(tab, r, d, m1, m, scales, equality_row) -> LPCertificate:
    # basic slack b = (T0 + sum_j T_j u_j)/D with all enterable T_j zero:
    # b - sum_j (T_j/D) u_j == T0/D identically in x.
    yi = [Fraction(0)] * m1
    ye = [Fraction(0)] * (m - m1)
    k = tab.basis[r] - d
    coeff = {k: Fraction(1)}
    for j, v in enumerate(tab.nonbasic):
        if d <= v < d + m and tab.T[r, j + 1] != 0:
            coeff[v - d] = -Fraction(tab.T[r, j + 1], tab.D)
    const = Fraction(tab.T[r, 0], tab.D)
    sign = -1 if const > 0 else 1
    for idx, c in coeff.items():
        val = sign * c * scales[idx]
        if idx < m1:
            yi[idx] = val
        else:
            ye[idx - m1] = val
    yi, ye = _normalize_farkas(yi, ye)
    return LPCertificate("infeasible", farkas=(yi, ye), pivots=tab.pivots)


def _combine(ineqs, eqs, yi, ye, dim):
    lin = [Fraction(0)] * dim
    const = Fraction(0)
    for y, (coeffs, c) in list(zip(yi, ineqs)) + list(zip(ye, eqs)):
        if y:
            for k, a in enumerate(coeffs):
                if a:
                    lin[k] += y * a
            const += y * c
    return lin, const


def _verify(cert: LPCertificate, ineqs, eqs, obj, sense) -> None:
    dim = len(obj[0])
    if cert.status == "infeasible":
        yi, ye = cert.farkas
        if any(y < 0 for y in yi):
            raise LPError("Farkas multipliers on inequalities must be nonnegative")
        lin, const = _combine(ineqs, eqs, yi, ye, dim)
        if any(lin) or not const < 0:
            raise LPError("Farkas certificate does not yield 0 >= positive constant")
        return
    x = cert.witness
    for con in ineqs:
        if _evaluate(con, x) < 0:
            raise LPError("witness violates an inequality")
    for con in eqs:
        if _evaluate(con, x) != 0:
            raise LPError("witness violates an equality")
    sgn = 1 if sense == "max" else -1
    if cert.status == "unbounded":
        r = cert.ray
        for coeffs, _ in ineqs:
            if sum(a * b for a, b in zip(coeffs, r)) < 0:
                raise LPError("ray leaves the feasible region")
        for coeffs, _ in eqs:
            if sum(a * b for a, b in zip(coeffs, r)) != 0:
                raise LPError("ray leaves the affine hull")
        if not sgn * sum(a * b for a, b in zip(obj[0], r)) > 0:
            raise LPError("ray does not improve the objective")
        return
    if _evaluate(obj, x) != cert.optimum:
        raise LPError("witness value differs from the reported optimum")
    if cert.dual is not None:
        yi, ye = cert.dual
        if any(y < 0 for y in yi):
            raise LPError("dual multipliers must be nonnegative")
        lin, const = _combine(ineqs, eqs, yi, ye, dim)
        # sgn*obj(x) = sgn*opt - sum y_i s_i(x) for every x
        if any(sgn * a + b != 0 for a, b in zip(obj[0], lin)):
            raise LPError("dual multipliers do not reproduce the objective")
        if sgn * obj[1] + const != sgn * cert.optimum:
            raise LPError("dual bound does not match the optimum")


def feasible_point(inequalities, equalities=(), dim=None) -> LPCertificate:
    """Feasibility only; the returned certificate is 'optimal' or 'infeasible'."""
    return lp_solve(inequalities, equalities, None, "max", dim)
