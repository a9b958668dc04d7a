"""Grid-driven verification of every identity, with counterexample-carrying reports.

Each registered check maps one grid cell (n, d[, x]) to a tuple of route
values; the cell passes when all routes agree exactly. Cells whose
enumeration would exceed a declared cap are recorded as skipped.
"""
from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Iterable

import numpy as np

from . import ballbox_sim as bb
from . import poly_engine as pe
from . import stirling_engine as se
from .exact_arith import (
    POLY_TUPLE_CAP,
    TUPLE_CAP,
    BoundExceeded,
    IdentityViolation,
    factorial,
    falling_factorial,
    format_rational,
)
from .partition_oracle import PartitionQuery, count_set_partitions, stirling_recurrence


@dataclass(frozen=True)
class GridSpec:
    n_max: int = 8
    x_samples: tuple[Fraction, ...] | None = None  # None: per-cell default set
    trials: int = 20000
    seed: int = 0
    cap: int = TUPLE_CAP
    poly_cap: int = POLY_TUPLE_CAP

    def __post_init__(self):
        if self.n_max < 1:
            raise ValueError(f"n_max must be >= 1, got {self.n_max}")
        if self.x_samples is not None:
            xs = tuple(Fraction(x) for x in self.x_samples)
            if any(x == 0 for x in xs):
                raise ValueError("x_samples must not contain 0")
            object.__setattr__(self, "x_samples", xs)

    def xs(self, d: int) -> list[Fraction]:
        if self.x_samples is not None:
            return sorted(set(self.x_samples))
        default = {Fraction(1, 3), Fraction(1, 2), Fraction(1), Fraction(2),
                   Fraction(d), d + Fraction(1, 2), Fraction(2 * d), Fraction(-2)}
        return sorted(default)


@dataclass
class CellResult:
    n: int
    d: int
    x: Fraction | None
    routes: dict[str, str]
    ok: bool
    deviation: Fraction | None = None
    skipped: str | None = None

    @property
    def lhs(self) -> str:
        return next(iter(self.routes.values()), "")

    @property
    def rhs(self) -> str:
        vals = list(self.routes.values())
        for v in vals[1:]:
            if v != vals[0]:
                return v
        return vals[-1] if vals else ""


@dataclass
class IdentityReport:
    identity_id: str
    name: str
    status: str  # pass | fail | skipped(bound)
    cells_checked: int
    cells_skipped: int
    worst_deviation: Fraction | None
    counterexample: CellResult | None = None
    diagnostic: bool = False
    cells: list[CellResult] = field(default_factory=list)


@dataclass(frozen=True)
class Identity:
    identity_id: str
    name: str
    cells: Callable[[GridSpec], Iterable[tuple]]
    check: Callable[..., tuple[dict[str, object], Fraction | None]]
    diagnostic: bool = False


def _nd(grid: GridSpec):
    for n in range(1, grid.n_max + 1):
        for d in range(1, n + 1):
            yield n, d, None


def _ndx(grid: GridSpec):
    for n, d, _ in _nd(grid):
        for x in grid.xs(d):
            yield n, d, x


def _ndx_prob(grid: GridSpec):
    for n, d, x in _ndx(grid):
        if x >= d:
            yield n, d, x


def _oracle(n: int, d: int) -> int:
    return count_set_partitions(PartitionQuery(n, d))


def _spread(values: Iterable) -> Fraction:
    vals = [Fraction(v) for v in values]
    return max(vals) - min(vals) if vals else Fraction(0)


# ---- individual checks: each returns (route -> value, deviation) ----------

def _lemma1(grid, n, d, x):
    f = pe.poly_f(d, n, grid.poly_cap)
    g = pe.poly_g(d, n)
    routes = {"f": f, "g": g}
    if g.degree != n - d or f.degree != n - d:
        routes["degree"] = f"{f.degree} vs expected {n - d}"
    if g.leading != falling_factorial(n, d):
        routes["leading"] = f"{format_rational(g.leading)} vs expected {falling_factorial(n, d)}"
    return routes, f.max_abs_difference(g)


def _ruiz_cells(grid):
    for d in range(1, grid.n_max + 1):
        yield d, d, None
        for x in grid.xs(d):
            yield d, d, x


def _ruiz(grid, n, d, x):
    g = pe.poly_g(d, d)
    if x is None:
        target = pe.Polynomial([factorial(d)])
        return {"g_dd": g, "d!": target}, g.max_abs_difference(target)
    value = pe.eval_poly(g, x)
    return {"g_dd(x)": value, "d!": factorial(d)}, abs(value - factorial(d))


def _euler(grid, n, d, x):
    vals = {"euler": se.stirling_euler(n, d), "recurrence": stirling_recurrence(n, d),
            "oracle": _oracle(n, d)}
    return vals, _spread(vals.values())


def _new_repr(grid, n, d, x):
    vals = {"record": se.stirling_record_sum(n, d, grid.cap), "oracle": _oracle(n, d)}
    return vals, _spread(vals.values())


def _dp(grid, n, d, x):
    vals = {"record-dp": se.stirling_record_dp(n, d), "record": se.stirling_record_sum(n, d, grid.cap)}
    return vals, _spread(vals.values())


def _gdn2(grid, n, d, x):
    a, b = pe.poly_g_stirling(d, n), pe.poly_g(d, n)
    return {"g_stirling": a, "g": b}, a.max_abs_difference(b)


def _rho_kappa(grid, n, d, x):
    vals = {"rho": pe.rho(d, n, x, grid.poly_cap), "kappa": pe.kappa(d, n, x)}
    return vals, _spread(vals.values())


def _methods(grid, n, d, x):
    vals = {
        "incl_excl": bb.exact_prob_incl_excl(n, d, x),
        "record_times": bb.exact_prob_record_times(n, d, x, grid.poly_cap),
        "brute_force": bb.brute_force_prob(n, d, x, grid.cap),
    }
    for v in vals.values():
        if not 0 <= v <= 1:
            vals["range"] = f"{format_rational(v)} outside [0, 1]"
            break
    return vals, _spread(v for k, v in vals.items() if k != "range")


def _duality(grid, n, d, x):
    vals = {"duality": se.stirling_via_duality(n, d), "oracle": _oracle(n, d)}
    return vals, _spread(vals.values())


def _s2_cells(grid):
    for n in range(1, grid.n_max + 1):
        for d in range(0, grid.n_max + 1):
            yield n, d, None


def _s2(grid, n, d, x):
    vals = {"s2_enum": se.s2_enum(n, d, grid.cap), "s2_nested": se.s2_nested(n, d)}
    return vals, _spread(vals.values())


def _dilcher_cells(grid):
    for n in range(1, grid.n_max + 1):
        for d in range(1, grid.n_max + 2 - n):
            yield n, d, None


def _dilcher(grid, n, d, x):
    vals = {"harmonic": se.harmonic_alt_sum(n, d), "multiple_sum": se.dilcher_multiple_sum(n, d, grid.cap)}
    return vals, _spread(vals.values())


def _inversion(grid, n, d, x):
    oracle = stirling_recurrence(n, d)
    try:
        value = pe.stirling_from_f_inversion(n, d, x, grid.poly_cap)
    except IdentityViolation as exc:
        return {"inversion": f"non-integral ({exc})", "oracle": oracle}, None
    return {"inversion": value, "oracle": oracle}, abs(Fraction(value - oracle))


def _printed(grid, n, d, x):
    value = pe.printed_inversion(n, d, x, grid.poly_cap)
    oracle = stirling_recurrence(n, d)
    return {"printed": value, "oracle": oracle}, abs(value - oracle)


def _mc_cells(grid):
    for n, d, _ in _nd(grid):
        yield n, d, Fraction(2 * d)


def _cell_seed(grid: GridSpec, n: int, d: int) -> int:
    return int(np.random.SeedSequence([grid.seed, n, d]).generate_state(1, np.uint64)[0])


def _monte_carlo(grid, n, d, x):
    res = bb.simulate(bb.SimConfig(n, d, x, grid.trials, _cell_seed(grid, n, d)))
    routes = {"estimate": repr(res.estimate), "exact": res.exact}
    if res.z_score is not None and res.z_score > 5:
        routes["z"] = f"|z| = {res.z_score:.3f} > 5"
    dev = abs(Fraction(res.estimate) - res.exact)
    return routes, dev


REGISTRY: dict[str, Identity] = {
    i.identity_id: i
    for i in [
        Identity("I1", "lemma1_coeffs", _nd, _lemma1),
        Identity("I2", "ruiz", _ruiz_cells, _ruiz),
        Identity("I3", "euler_vs_oracle", _nd, _euler),
        Identity("I4", "new_repr", _nd, _new_repr),
        Identity("I5", "dp_equiv", _nd, _dp),
        Identity("I6", "gdn2_form", _nd, _gdn2),
        Identity("I7", "rho_kappa", _ndx, _rho_kappa),
        Identity("I8", "methods_agree", _ndx_prob, _methods),
        Identity("I9", "duality", _nd, _duality),
        Identity("I10", "s2_forms", _s2_cells, _s2),
        Identity("I11", "dilcher", _dilcher_cells, _dilcher),
        Identity("I12", "inversion_corrected", _ndx, _inversion),
        Identity("D1", "printed_inversion", _ndx, _printed, diagnostic=True),
        Identity("S1", "monte_carlo", _mc_cells, _monte_carlo),
    ]
}

def _render(value) -> str:
    if isinstance(value, pe.Polynomial):
        return "[" + ", ".join(format_rational(c) for c in value.coeffs) + "]"
    if isinstance(value, (int, Fraction)):
        return format_rational(value)
    return str(value)


def _run_cell(identity: Identity, grid: GridSpec, n: int, d: int, x) -> CellResult:
    try:
        routes, dev = identity.check(grid, n, d, x)
    except BoundExceeded as exc:
        return CellResult(n, d, x, {}, ok=True, skipped=str(exc))
    rendered = {k: _render(v) for k, v in routes.items()}
    if identity.identity_id == "S1":
        ok = "z" not in rendered
    else:
        ok = len(set(rendered.values())) == 1
    return CellResult(n, d, x, rendered, ok=ok, deviation=dev)


def _cell_key(c: CellResult):
    return (c.n, c.d, c.x is not None, c.x if c.x is not None else 0)


def run_identity(identity: Identity, grid: GridSpec) -> IdentityReport:
    cells = sorted((_run_cell(identity, grid, *c) for c in identity.cells(grid)), key=_cell_key)
    checked = [c for c in cells if c.skipped is None]
    skipped = len(cells) - len(checked)
    failures = [c for c in checked if not c.ok]
    devs = [c.deviation for c in checked if c.deviation is not None]
    if failures:
        status = "fail"
    elif checked:
        status = "pass"
    else:
        status = "skipped(bound)"
    return IdentityReport(
        identity_id=identity.identity_id,
        name=identity.name,
        status=status,
        cells_checked=len(checked),
        cells_skipped=skipped,
        worst_deviation=max(devs) if devs else None,
        counterexample=failures[0] if failures else None,
        diagnostic=identity.diagnostic,
        cells=cells,
    )


def run_suite(grid: GridSpec, selection: Iterable[str] | None = None, threads: int = 1) -> list[IdentityReport]:
    ids = list(REGISTRY) if selection is None else list(selection)
    unknown = [i for i in ids if i not in REGISTRY]
    if unknown:
        raise ValueError(f"unknown identity id(s): {', '.join(unknown)}; known: {', '.join(REGISTRY)}")
    order = list(REGISTRY)
    ids = sorted(set(ids), key=order.index)
    identities = [REGISTRY[i] for i in ids]
    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            return list(pool.map(lambda ident: run_identity(ident, grid), identities))
    return [run_identity(ident, grid) for ident in identities]


def suite_passed(reports: Iterable[IdentityReport]) -> bool:
    """True when no non-diagnostic identity failed."""
    return all(r.status != "fail" for r in reports if not r.diagnostic)
