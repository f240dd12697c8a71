"""Self-contained dense linear-programming kernel with duality certificates.

The solver is a two-phase revised simplex on the standard-form problem
``min c'x  s.t.  Ax = b, x >= 0`` derived from the general-form input.  The
entering variable is the one with the largest reduced-cost violation (ties
broken by lowest index); whenever the objective stalls the rule switches to
Bland's anti-cycling rule, which guarantees finite termination.  Everything
is deterministic for a fixed input.

Every optimal solution carries dual multipliers and reduced costs.  The
``verify_certificate`` routine recomputes all four certificate residuals --
primal feasibility, dual feasibility, complementary slackness, and the
objective gap -- independently of the solver's internals.  Residuals are
scaled by ``max(1, |reference|)`` so the stated tolerances behave uniformly
across problem scales.

Sign conventions (minimization): inequality rows are ``A_ub x <= b_ub`` with
multipliers ``y_ub <= 0``; equality multipliers are free; the reduced cost of
variable ``j`` is ``r_j = c_j - A_eq'y_eq - A_ub'y_ub`` with ``r_j >= 0``
required when the upper bound is infinite and ``r_j <= 0`` when the lower
bound is infinite.  For maximization all dual signs flip.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations

import numpy as np

from .errors import NumericalBreakdown, TooLarge, ValidationError

__all__ = [
    "LinearProgram",
    "LpSolution",
    "CertificateReport",
    "solve",
    "verify_certificate",
    "brute_force_vertices",
]

FEAS_TOL = 1e-9
DUAL_TOL = 1e-9
CS_TOL = 1e-8
GAP_TOL = 1e-8
PIVOT_TOL = 1e-9
BREAKDOWN_TOL = 1e-12

_SENSES = {"minimize": 1.0, "min": 1.0, "maximize": -1.0, "max": -1.0}


def _as_matrix(a, ncols: int, name: str) -> np.ndarray:
    if a is None:
        return np.zeros((0, ncols))
    a = np.asarray(a, dtype=float)
    if a.ndim == 1:
        a = a.reshape(1, -1) if a.size else a.reshape(0, ncols)
    if a.ndim != 2 or (a.shape[0] and a.shape[1] != ncols):
        raise ValidationError(f"{name} has shape {a.shape}, expected (*, {ncols})")
    return a


@dataclass(frozen=True)
class LinearProgram:
    """General-form LP: optimize ``c'x`` under equality rows, ``<=`` rows and bounds.

    ``lower``/``upper`` default to ``0``/``+inf``; use ``-inf`` lower bounds for
    free variables.  ``names`` are optional labels used by report extraction.
    """

    c: np.ndarray
    objective_sense: str = "minimize"
    A_eq: np.ndarray | None = None
    b_eq: np.ndarray | None = None
    A_ub: np.ndarray | None = None
    b_ub: np.ndarray | None = None
    lower: np.ndarray | None = None
    upper: np.ndarray | None = None
    names: tuple[str, ...] | None = None

    def __post_init__(self):
        c = np.asarray(self.c, dtype=float)
        if c.ndim != 1 or c.size == 0:
            raise ValidationError("c must be a nonempty vector")
        n = c.size
        if self.objective_sense not in _SENSES:
            raise ValidationError(f"unknown objective sense {self.objective_sense!r}")
        A_eq = _as_matrix(self.A_eq, n, "A_eq")
        A_ub = _as_matrix(self.A_ub, n, "A_ub")
        b_eq = np.zeros(0) if self.b_eq is None else np.atleast_1d(np.asarray(self.b_eq, dtype=float))
        b_ub = np.zeros(0) if self.b_ub is None else np.atleast_1d(np.asarray(self.b_ub, dtype=float))
        if b_eq.size != A_eq.shape[0]:
            raise ValidationError("b_eq length does not match A_eq")
        if b_ub.size != A_ub.shape[0]:
            raise ValidationError("b_ub length does not match A_ub")
        lower = np.zeros(n) if self.lower is None else np.asarray(self.lower, dtype=float).copy()
        upper = np.full(n, np.inf) if self.upper is None else np.asarray(self.upper, dtype=float).copy()
        if lower.shape != (n,) or upper.shape != (n,):
            raise ValidationError("bounds must match the variable count")
        for name, arr in (("c", c), ("A_eq", A_eq), ("A_ub", A_ub)):
            if arr.size and np.isnan(arr).any():
                raise ValidationError(f"{name} contains NaN")
        for name, arr in (("b_eq", b_eq), ("b_ub", b_ub)):
            if arr.size and not np.isfinite(arr).all():
                raise ValidationError(f"{name} must be finite")
        if np.isnan(lower).any() or np.isnan(upper).any():
            raise ValidationError("bounds contain NaN")
        if (lower > upper).any():
            j = int(np.argmax(lower > upper))
            raise ValidationError(f"variable {j} has lower bound above upper bound")
        names = self.names
        if names is not None:
            names = tuple(str(s) for s in names)
            if len(names) != n:
                raise ValidationError("names length does not match variable count")
        for key, val in (
            ("c", c), ("A_eq", A_eq), ("b_eq", b_eq), ("A_ub", A_ub), ("b_ub", b_ub),
            ("lower", lower), ("upper", upper), ("names", names),
        ):
            object.__setattr__(self, key, val)

    @property
    def n_vars(self) -> int:
        return self.c.size

    def dump(self) -> str:
        """Plain-text standard form, for external cross-checking."""
        lines = [f"sense {self.objective_sense}", "c " + " ".join(repr(v) for v in self.c)]
        for i in range(self.A_eq.shape[0]):
            lines.append(
                "eq  " + " ".join(repr(v) for v in self.A_eq[i]) + f" = {self.b_eq[i]!r}"
            )
        for i in range(self.A_ub.shape[0]):
            lines.append(
                "ub  " + " ".join(repr(v) for v in self.A_ub[i]) + f" <= {self.b_ub[i]!r}"
            )
        lines.append("lower " + " ".join(repr(v) for v in self.lower))
        lines.append("upper " + " ".join(repr(v) for v in self.upper))
        return "\n".join(lines) + "\n"


@dataclass
class LpSolution:
    """Solver output.  When ``status == "optimal"`` the certificate fields are
    populated and satisfy the residual bounds checked by ``verify_certificate``."""

    status: str
    x: np.ndarray | None = None
    objective: float = float("nan")
    y_eq: np.ndarray | None = None
    y_ub: np.ndarray | None = None
    reduced_costs: np.ndarray | None = None
    iterations: int = 0


@dataclass(frozen=True)
class CertificateReport:
    ok: bool
    residuals: dict
    failures: tuple[str, ...] = ()

    def __bool__(self) -> bool:
        return self.ok


# ---------------------------------------------------------------------------
# standard-form transformation


@dataclass
class _Column:
    kind: str                 # "shift" | "mirror" | "split" | "fixed"
    cols: tuple[int, ...] = ()
    offset: float = 0.0
    value: float = 0.0        # for fixed variables


@dataclass
class _StandardForm:
    A: np.ndarray
    b: np.ndarray
    c: np.ndarray
    cols: list
    n_eq: int
    n_ub: int                  # external ub rows precede internal bound rows
    n_bound: int
    slack_of_row: np.ndarray   # column index of the slack for each ub/bound row, -1 for eq


def _standard_form(lp: LinearProgram, sign: float) -> tuple[_StandardForm, np.ndarray]:
    """Rewrite as min (sign*c)'t, At = b, t >= 0.  Returns the form and the
    fixed-variable mask."""
    n = lp.n_vars
    lower, upper = lp.lower, lp.upper
    fixed = np.isfinite(lower) & np.isfinite(upper) & (upper - lower <= 0.0)

    cols: list[_Column] = [None] * n  # type: ignore[list-item]
    col_data: list[np.ndarray] = []
    col_cost: list[float] = []
    A_full = np.vstack([lp.A_eq, lp.A_ub]) if (lp.A_eq.size or lp.A_ub.size) else np.zeros((0, n))
    if A_full.size == 0:
        A_full = np.zeros((lp.A_eq.shape[0] + lp.A_ub.shape[0], n))
    b_eq = lp.b_eq.copy()
    b_ub = lp.b_ub.copy()
    c_int: list[float] = []
    bound_rows: list[tuple[int, float]] = []  # (internal column, rhs) for two-sided vars

    def push(col_vec: np.ndarray, cost: float) -> int:
        col_data.append(col_vec)
        c_int.append(cost)
        return len(col_data) - 1

    cobj = sign * lp.c
    for j in range(n):
        a_j = A_full[:, j]
        if fixed[j]:
            v = lower[j]
            b_eq -= lp.A_eq[:, j] * v if lp.A_eq.size else 0.0
            b_ub -= lp.A_ub[:, j] * v if lp.A_ub.size else 0.0
            cols[j] = _Column("fixed", (), 0.0, v)
            continue
        lo, up = lower[j], upper[j]
        if np.isfinite(lo):
            k = push(a_j, cobj[j])
            if lo != 0.0:
                b_eq -= lp.A_eq[:, j] * lo if lp.A_eq.size else 0.0
                b_ub -= lp.A_ub[:, j] * lo if lp.A_ub.size else 0.0
            cols[j] = _Column("shift", (k,), lo)
            if np.isfinite(up):
                bound_rows.append((k, up - lo))
        elif np.isfinite(up):
            k = push(-a_j, -cobj[j])
            b_eq -= lp.A_eq[:, j] * up if lp.A_eq.size else 0.0
            b_ub -= lp.A_ub[:, j] * up if lp.A_ub.size else 0.0
            cols[j] = _Column("mirror", (k,), up)
        else:
            kp = push(a_j, cobj[j])
            km = push(-a_j, -cobj[j])
            cols[j] = _Column("split", (kp, km))

    n_eq, n_ub, n_bound = b_eq.size, b_ub.size, len(bound_rows)
    m = n_eq + n_ub + n_bound
    n_struct = len(col_data)
    A = np.zeros((m, n_struct + n_ub + n_bound))
    for k, vec in enumerate(col_data):
        A[: n_eq + n_ub, k] = vec if vec.size else 0.0
    b = np.concatenate([b_eq, b_ub, np.array([r for _, r in bound_rows])])
    slack_of_row = np.full(m, -1, dtype=np.int64)
    for i in range(n_ub):
        A[n_eq + i, n_struct + i] = 1.0
        slack_of_row[n_eq + i] = n_struct + i
    for i, (k, _) in enumerate(bound_rows):
        A[n_eq + n_ub + i, k] = 1.0
        A[n_eq + n_ub + i, n_struct + n_ub + i] = 1.0
        slack_of_row[n_eq + n_ub + i] = n_struct + n_ub + i
    c = np.concatenate([np.array(c_int), np.zeros(n_ub + n_bound)])
    return _StandardForm(A, b, c, cols, n_eq, n_ub, n_bound, slack_of_row), fixed


# ---------------------------------------------------------------------------
# simplex core


class _Simplex:
    """Revised simplex with an explicit, periodically refactorized basis inverse."""

    REFACTOR_EVERY = 128

    def __init__(self, A: np.ndarray, b: np.ndarray):
        self.A = A
        self.b = b
        self.m = A.shape[0]
        self.iterations = 0

    def refactorize(self, basis: np.ndarray) -> np.ndarray:
        B = self.A[:, basis]
        try:
            Binv = np.linalg.solve(B, np.eye(self.m))
        except np.linalg.LinAlgError as exc:
            raise NumericalBreakdown(f"singular basis: {exc}") from exc
        err = np.abs(B @ Binv - np.eye(self.m)).max() if self.m else 0.0
        if not np.isfinite(err) or err > 1e-6:
            raise NumericalBreakdown(f"basis inverse residual {err:.2e}")
        return Binv

    def run(
        self,
        c: np.ndarray,
        basis: np.ndarray,
        Binv: np.ndarray,
        allowed: np.ndarray,
        max_iter: int,
    ) -> tuple[str, np.ndarray, np.ndarray]:
        """Minimize c'x from the given basic feasible solution.

        ``allowed`` masks the columns permitted to enter.  Returns
        ``(status, basis, Binv)`` with status "optimal" or "unbounded".
        """
        A, b, m = self.A, self.b, self.m
        bland = False
        stall = 0
        stall_limit = max(200, 2 * m)
        prev_obj = np.inf
        since_refactor = 0
        in_basis = np.zeros(A.shape[1], dtype=bool)
        in_basis[basis] = True
        basis = basis.copy()
        Binv = Binv.copy()
        cb = c[basis].copy()
        update_buf = np.empty((m, m))
        while True:
            if self.iterations >= max_iter:
                raise NumericalBreakdown(f"iteration limit {max_iter} exceeded")
            x_B = Binv @ b
            obj = float(cb @ x_B)
            if obj < prev_obj - 1e-12 * (1.0 + abs(prev_obj)):
                stall = 0
            else:
                stall += 1
                if stall > stall_limit:
                    bland = True  # anti-cycling: switch to Bland's rule
            prev_obj = obj
            y = cb @ Binv
            r = c - y @ A
            cand = (~in_basis) & allowed & (r < -PIVOT_TOL)
            if not cand.any():
                return "optimal", basis, Binv
            idx = np.flatnonzero(cand)
            j = int(idx[0]) if bland else int(idx[np.argmin(r[idx])])
            d = Binv @ A[:, j]
            p = self._leaving_row(x_B, d, basis, bland)
            if p is None:
                return "unbounded", basis, Binv
            if abs(d[p]) < 1e-7:
                # the update would amplify error by 1/|pivot|; retry from a
                # fresh factorization before accepting such a step
                Binv = self.refactorize(basis)
                since_refactor = 0
                x_B = Binv @ b
                d = Binv @ A[:, j]
                p = self._leaving_row(x_B, d, basis, bland)
                if p is None:
                    return "unbounded", basis, Binv
                if abs(d[p]) < BREAKDOWN_TOL:
                    raise NumericalBreakdown(f"pivot magnitude {abs(d[p]):.2e}")
            in_basis[basis[p]] = False
            in_basis[j] = True
            basis[p] = j
            cb[p] = c[j]
            # rank-one update of the inverse, in place
            row_p = Binv[p] / d[p]
            np.multiply.outer(d, row_p, out=update_buf)
            Binv -= update_buf
            Binv[p, :] = row_p
            self.iterations += 1
            since_refactor += 1
            if since_refactor >= self.REFACTOR_EVERY:
                Binv = self.refactorize(basis)
                since_refactor = 0

    def _leaving_row(self, x_B, d, basis, bland: bool):
        """Minimum-ratio row; ties go to the largest pivot for stability, or
        to the smallest basic index in Bland mode (the termination guarantee)."""
        pos = d > PIVOT_TOL
        if not pos.any():
            return None
        ratios = np.where(pos, np.maximum(x_B, 0.0) / np.where(pos, d, 1.0), np.inf)
        theta = ratios.min()
        ties = np.flatnonzero(ratios <= theta + 1e-9 * (1.0 + abs(theta)))
        if bland:
            return int(ties[np.argmin(basis[ties])])
        return int(ties[np.argmax(d[ties])])


def _solve_standard(
    sf: _StandardForm,
) -> tuple[str, np.ndarray | None, np.ndarray | None, np.ndarray, int]:
    """Two-phase simplex.  Returns (status, x, y, kept_rows, iterations)."""
    A, b, c = sf.A, sf.b, sf.c
    m, n = A.shape
    kept_rows = np.arange(m)
    iters = 0
    if m == 0:
        # bounds-only problems: every structural variable sits at zero level
        x = np.zeros(n)
        # any column with negative cost can grow without limit
        if (c < -PIVOT_TOL).any():
            return "unbounded", None, None, kept_rows, iters
        return "optimal", x, np.zeros(0), kept_rows, iters

    # initial basis: slacks where feasible, artificials elsewhere
    basis = np.full(m, -1, dtype=np.int64)
    art_cols: list[np.ndarray] = []
    art_index: list[int] = []
    next_col = n
    for i in range(m):
        s = sf.slack_of_row[i]
        if s >= 0 and b[i] >= 0.0:
            basis[i] = s
        else:
            col = np.zeros(m)
            col[i] = 1.0 if b[i] >= 0.0 else -1.0
            art_cols.append(col)
            art_index.append(i)
            basis[i] = next_col
            next_col += 1
    n_art = len(art_cols)
    if n_art:
        A1 = np.hstack([A, np.column_stack(art_cols)])
        c1 = np.concatenate([np.zeros(n), np.ones(n_art)])
        sx = _Simplex(A1, b)
        Binv = sx.refactorize(basis)
        allowed = np.ones(n + n_art, dtype=bool)
        allowed[n:] = False  # artificials may leave but never re-enter
        max_iter = 200000 + 100 * (m + n)
        status, basis, Binv = sx.run(c1, basis, Binv, allowed, max_iter)
        iters += sx.iterations
        if status != "optimal":
            raise NumericalBreakdown("phase-1 objective reported unbounded")
        x_B = Binv @ b
        phase1 = float(c1[basis] @ x_B)
        if phase1 > 1e-8 * max(1.0, np.abs(b).max()):
            return "infeasible", None, None, kept_rows, iters
        # drive remaining artificials out of the basis
        art_in_basis = [p for p in range(m) if basis[p] >= n]
        drop_rows: list[int] = []
        basic_set = set(basis.tolist())
        for p in art_in_basis:
            row = Binv[p, :] @ A
            pivots = np.flatnonzero(np.abs(row) > 1e-7)
            entered = False
            for j in pivots:
                if j < n and j not in basic_set:
                    d = Binv @ A[:, j]
                    if abs(d[p]) > 1e-7:
                        basic_set.discard(int(basis[p]))
                        basic_set.add(int(j))
                        basis[p] = j
                        Binv[p, :] /= d[p]
                        others = np.arange(m) != p
                        Binv[others, :] -= np.outer(d[others], Binv[p, :])
                        entered = True
                        break
            if not entered:
                drop_rows.append(p)
        if drop_rows:
            keep = np.array([i for i in range(m) if i not in drop_rows], dtype=np.int64)
            A = A[keep]
            b = b[keep]
            kept_rows = kept_rows[keep]
            basis = np.delete(basis, drop_rows)
            m = A.shape[0]
            if m == 0:
                if (c < -PIVOT_TOL).any():
                    return "unbounded", None, None, kept_rows, iters
                return "optimal", np.zeros(n), np.zeros(0), kept_rows, iters

    sx = _Simplex(A, b)
    Binv = sx.refactorize(basis)
    allowed = np.ones(n, dtype=bool)
    max_iter = 200000 + 100 * (m + n)
    status, basis, Binv = sx.run(c, basis, Binv, allowed, max_iter)
    iters += sx.iterations
    if status == "unbounded":
        return "unbounded", None, None, kept_rows, iters
    Binv = sx.refactorize(basis)  # clean final residuals
    x = np.zeros(n)
    x[basis] = Binv @ b
    y = c[basis] @ Binv
    return "optimal", x, y, kept_rows, iters


def solve(lp: LinearProgram) -> LpSolution:
    """Solve the LP and return a certified solution.

    Deterministic for a fixed input.  For ``status == "optimal"`` the returned
    duals and reduced costs pass ``verify_certificate``; when they do not
    (numerical loss of control) the solver raises ``NumericalBreakdown``
    rather than returning a silently wrong answer.
    """
    sign = _SENSES[lp.objective_sense]
    sf, _ = _standard_form(lp, sign)
    status, t, y_int, kept_rows, iters = _solve_standard(sf)
    if status != "optimal":
        return LpSolution(status=status, iterations=iters)

    n = lp.n_vars
    x = np.empty(n)
    for j in range(n):
        col = sf.cols[j]
        if col.kind == "fixed":
            x[j] = col.value
        elif col.kind == "shift":
            x[j] = col.offset + t[col.cols[0]]
        elif col.kind == "mirror":
            x[j] = col.offset - t[col.cols[0]]
        else:
            x[j] = t[col.cols[0]] - t[col.cols[1]]

    # duals of the original rows; deleted redundant rows carry 0
    m_int = sf.n_eq + sf.n_ub + sf.n_bound
    y_full = np.zeros(m_int)
    if y_int is not None and y_int.size:
        y_full[kept_rows] = y_int
    y_eq = sign * y_full[: sf.n_eq]
    y_ub = sign * y_full[sf.n_eq : sf.n_eq + sf.n_ub]

    reduced = lp.c - (lp.A_eq.T @ y_eq if lp.A_eq.size else 0.0) - (
        lp.A_ub.T @ y_ub if lp.A_ub.size else 0.0
    )
    objective = float(lp.c @ x)
    sol = LpSolution(
        status="optimal",
        x=x,
        objective=objective,
        y_eq=y_eq,
        y_ub=y_ub,
        reduced_costs=np.asarray(reduced, dtype=float),
        iterations=iters,
    )
    report = verify_certificate(lp, sol)
    if not report.ok:
        raise NumericalBreakdown(
            "optimal basis failed its own certificate: " + ", ".join(report.failures)
        )
    return sol


def verify_certificate(
    lp: LinearProgram,
    sol: LpSolution,
    *,
    tol_feas: float = FEAS_TOL,
    tol_dual: float = DUAL_TOL,
    tol_cs: float = CS_TOL,
    tol_gap: float = GAP_TOL,
) -> CertificateReport:
    """Recompute the four optimality residuals from scratch.

    Residuals are scaled by ``max(1, |reference|)`` (right-hand side, cost,
    or objective).  Returns a report with the worst residual per family and
    the list of failed families.
    """
    if sol.status != "optimal":
        return CertificateReport(False, {}, ("status_not_optimal",))
    x, y_eq, y_ub, r = sol.x, sol.y_eq, sol.y_ub, sol.reduced_costs
    sign = _SENSES[lp.objective_sense]
    res: dict[str, float] = {}

    # primal feasibility
    primal = 0.0
    if lp.A_eq.size:
        primal = max(primal, float(np.max(np.abs(lp.A_eq @ x - lp.b_eq) / np.maximum(1.0, np.abs(lp.b_eq)))))
    elif lp.b_eq.size:
        primal = max(primal, float(np.max(np.abs(lp.b_eq))))
    if lp.A_ub.size:
        viol = lp.A_ub @ x - lp.b_ub
        primal = max(primal, float(np.max(np.maximum(viol, 0.0) / np.maximum(1.0, np.abs(lp.b_ub)))))
    lo_v = np.where(np.isfinite(lp.lower), lp.lower - x, -np.inf)
    up_v = np.where(np.isfinite(lp.upper), x - lp.upper, -np.inf)
    bscale = np.maximum(1.0, np.maximum(np.abs(np.where(np.isfinite(lp.lower), lp.lower, 0.0)),
                                        np.abs(np.where(np.isfinite(lp.upper), lp.upper, 0.0))))
    primal = max(primal, float(np.max(np.maximum(lo_v, 0.0) / bscale, initial=0.0)))
    primal = max(primal, float(np.max(np.maximum(up_v, 0.0) / bscale, initial=0.0)))
    res["primal_feasibility"] = primal

    # dual feasibility: multiplier signs plus reduced-cost signs against bounds
    dual = 0.0
    if y_ub.size:
        wrong = sign * y_ub  # must be <= 0
        dual = max(dual, float(np.max(np.maximum(wrong, 0.0) / np.maximum(1.0, np.abs(y_ub)))))
    cscale = np.maximum(1.0, np.abs(lp.c))
    no_lower = ~np.isfinite(lp.lower)
    no_upper = ~np.isfinite(lp.upper)
    sr = sign * r
    if no_lower.any():
        dual = max(dual, float(np.max(np.maximum(sr[no_lower], 0.0) / cscale[no_lower], initial=0.0)))
    if no_upper.any():
        dual = max(dual, float(np.max(np.maximum(-sr[no_upper], 0.0) / cscale[no_upper], initial=0.0)))
    res["dual_feasibility"] = dual

    # complementary slackness
    cs = 0.0
    if lp.A_ub.size:
        slack = lp.b_ub - lp.A_ub @ x
        terms = np.abs(y_ub * slack) / np.maximum(1.0, np.maximum(np.abs(y_ub), np.abs(slack)))
        cs = max(cs, float(terms.max(initial=0.0)))
    r_lo = np.maximum(sr, 0.0)   # pairs with the lower bound
    r_up = np.maximum(-sr, 0.0)  # pairs with the upper bound
    gap_lo = np.where(np.isfinite(lp.lower), x - lp.lower, 0.0)
    gap_up = np.where(np.isfinite(lp.upper), lp.upper - x, 0.0)
    t1 = np.abs(r_lo * gap_lo) / np.maximum(1.0, np.maximum(r_lo, np.abs(gap_lo)))
    t2 = np.abs(r_up * gap_up) / np.maximum(1.0, np.maximum(r_up, np.abs(gap_up)))
    cs = max(cs, float(t1.max(initial=0.0)), float(t2.max(initial=0.0)))
    res["complementary_slackness"] = cs

    # strong duality, against the objective recomputed from x
    primal_obj = float(lp.c @ x)
    dual_obj = float(lp.b_eq @ y_eq) if y_eq.size else 0.0
    dual_obj += float(lp.b_ub @ y_ub) if y_ub.size else 0.0
    fin_lo = np.isfinite(lp.lower)
    fin_up = np.isfinite(lp.upper)
    bound_terms = np.where(fin_lo, lp.lower, 0.0) * r_lo - np.where(fin_up, lp.upper, 0.0) * r_up
    dual_obj += float(sign * np.sum(bound_terms))
    gap = max(
        abs(primal_obj - dual_obj), abs(sol.objective - primal_obj)
    ) / max(1.0, abs(primal_obj))
    res["objective_gap"] = gap

    failures = tuple(
        name
        for name, val, tol in (
            ("primal_feasibility", primal, tol_feas),
            ("dual_feasibility", dual, tol_dual),
            ("complementary_slackness", cs, tol_cs),
            ("objective_gap", gap, tol_gap),
        )
        if not (val <= tol)
    )
    return CertificateReport(not failures, res, failures)


def brute_force_vertices(lp: LinearProgram, *, tol: float = 1e-9) -> list[tuple[np.ndarray, float]]:
    """Enumerate basic feasible points and return the optimizer set.

    Independent oracle for small instances: at most 8 variables, and the
    feasible region must be bounded (every variable pinned by bounds or
    constraints) so an optimal vertex exists.  Each candidate point solves a
    square subsystem of active constraints; infeasible problems yield an
    empty list; coincident vertices are deduplicated.
    """
    n = lp.n_vars
    if n > 8:
        raise TooLarge(f"brute force accepts at most 8 variables, got {n}")
    sign = _SENSES[lp.objective_sense]

    rows: list[tuple[np.ndarray, float]] = []
    forced = list(range(lp.A_eq.shape[0]))
    for i in range(lp.A_eq.shape[0]):
        rows.append((lp.A_eq[i], lp.b_eq[i]))
    optional_start = len(rows)
    for i in range(lp.A_ub.shape[0]):
        rows.append((lp.A_ub[i], lp.b_ub[i]))
    for j in range(n):
        e = np.zeros(n)
        e[j] = 1.0
        if np.isfinite(lp.lower[j]):
            rows.append((e, lp.lower[j]))
        if np.isfinite(lp.upper[j]):
            rows.append((e.copy(), lp.upper[j]))

    def feasible(x: np.ndarray) -> bool:
        scale = max(1.0, float(np.abs(x).max(initial=0.0)))
        if lp.A_eq.size and np.max(np.abs(lp.A_eq @ x - lp.b_eq)) > tol * scale:
            return False
        if lp.A_ub.size and np.max(lp.A_ub @ x - lp.b_ub) > tol * scale:
            return False
        if np.any(x < lp.lower - tol * scale) or np.any(x > lp.upper + tol * scale):
            return False
        return True

    optional = range(optional_start, len(rows))
    need = n - len(forced)
    points: list[np.ndarray] = []
    if need < 0:
        combos: list[tuple[int, ...]] = [()]
    else:
        combos = list(combinations(optional, need))
    for combo in combos:
        idx = forced + list(combo)
        M = np.array([rows[i][0] for i in idx]).reshape(len(idx), n)
        rhs = np.array([rows[i][1] for i in idx])
        sol, _, rank, _ = np.linalg.lstsq(M, rhs, rcond=None)
        if rank < n:
            continue
        if np.max(np.abs(M @ sol - rhs)) > tol * max(1.0, float(np.abs(rhs).max(initial=0.0))):
            continue
        if feasible(sol):
            points.append(sol)

    unique: list[np.ndarray] = []
    for p in points:
        if not any(np.allclose(p, q, atol=1e-9, rtol=1e-9) for q in unique):
            unique.append(p)
    if not unique:
        return []
    objs = [float(lp.c @ p) for p in unique]
    best = min(sign * o for o in objs)
    out = [
        (p, o)
        for p, o in zip(unique, objs)
        if sign * o <= best + 1e-9 * (1.0 + abs(best))
    ]
    return out
