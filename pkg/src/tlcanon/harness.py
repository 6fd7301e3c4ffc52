"""Experiment drivers, exporters and the on-disk IC table cache."""

from __future__ import annotations

import csv
import io
import json
import logging
import os
import tempfile
import time
from dataclasses import dataclass, field
from pathlib import Path

from .coxeter import CoxeterGraph, CoxeterGroup, Word, parse_graph, shortlex_key, word_to_str
from .hecke_kl import DEFAULT_BUDGET, HeckeAlgebra, kernel_analysis
from .ic_solver import (
    ICTable, all_ic_structure_constants, is_ic_element, solve_ic, tl_context, verify_ic,
)
from .laurent import LaurentPoly, subring_membership
from .tl_algebra import TLAlgebra, from_mprime, to_mprime, vec_to_json

__all__ = [
    "EXPERIMENTS", "FORMATS", "SCHEMA_VERSION", "CACHE_ENV",
    "ExperimentConfig", "ExperimentReport", "Workspace", "ResourceError",
    "run", "export", "render", "ade_type", "default_cache_dir",
]

log = logging.getLogger(__name__)

EXPERIMENTS = ("enumerate", "ic", "monomial-check", "counterexample",
               "positivity", "kl-kernel", "transitions", "mult")
FORMATS = ("json", "csv", "latex")
SCHEMA_VERSION = 1
CACHE_ENV = "TLCANON_CACHE_DIR"


class ResourceError(RuntimeError):
    """A configured budget would be exceeded."""


def default_cache_dir() -> Path:
    env = os.environ.get(CACHE_ENV)
    if env:
        return Path(env)
    return Path(os.environ.get("XDG_CACHE_HOME", Path.home() / ".cache")) / "tlcanon"


@dataclass
class ExperimentConfig:
    graph: str
    experiment: str
    cap: int | None = None
    format: str = "json"
    cache_dir: Path | None = None
    budget: int = DEFAULT_BUDGET
    word: tuple[int, ...] | None = None
    other: tuple[int, ...] | None = None


@dataclass
class ExperimentReport:
    experiment: str
    graph: str
    cap: int | None
    # True / False, or None when no outcome is predicted
    expected: bool | None
    observed: bool
    verdict: str
    payload: dict = field(default_factory=dict)
    # optional table for csv / latex: row label -> {column label: poly}
    matrix: dict[Word, dict[Word, LaurentPoly]] | None = None
    matrix_title: str = ""
    timing: float = 0.0

    @property
    def matches(self) -> bool:
        return self.expected is None or self.expected == self.observed

    def to_json(self) -> dict:
        # timing is deliberately excluded so repeated runs are byte-identical
        return {
            "experiment": self.experiment,
            "graph": self.graph,
            "cap": self.cap,
            "expected": self.expected,
            "observed": self.observed,
            "verdict": self.verdict,
            "matches_expectation": self.matches,
            "payload": self.payload,
        }


def ade_type(graph: CoxeterGraph) -> bool:
    """Simply laced with every component of type A, D or E_n (any n)."""
    if not graph.is_simply_laced():
        return False
    nbrs = {s: set() for s in graph.generators}
    for (i, j), _ in graph.bonds:
        nbrs[i].add(j)
        nbrs[j].add(i)
    seen: set[int] = set()
    for start in graph.generators:
        if start in seen:
            continue
        comp, stack = set(), [start]
        while stack:
            s = stack.pop()
            if s not in comp:
                comp.add(s)
                stack.extend(nbrs[s] - comp)
        seen |= comp
        edges = sum(len(nbrs[s]) for s in comp) // 2
        if edges != len(comp) - 1:
            return False
        branch = [s for s in comp if len(nbrs[s]) > 2]
        if not branch:
            continue
        if len(branch) > 1 or len(nbrs[branch[0]]) > 3:
            return False
        arms = []
        for t in nbrs[branch[0]]:
            length, prev, cur = 1, branch[0], t
            while len(nbrs[cur]) == 2:
                prev, cur = cur, next(iter(nbrs[cur] - {prev}))
                length += 1
            arms.append(length)
        arms.sort()
        if not (arms[0] == 1 and arms[1] <= 2):
            return False
    return True


class Workspace:
    """Group, algebras and IC tables for one graph, shared between experiments."""

    def __init__(self, graph: CoxeterGraph, cap: int | None = None, cache_dir: Path | None = None):
        self.graph = graph
        self.cap = cap
        self.group = CoxeterGroup(graph)
        self.tl = TLAlgebra(self.group)
        self.ctx = tl_context(self.tl)
        self.cache_dir = cache_dir
        self._wc: list[Word] | None = None
        self._table: ICTable | None = None

    def wc(self) -> list[Word]:
        if self._wc is None:
            if self.cap is None and not _wc_known_finite(self.graph):
                raise ResourceError(f"a length cap is required for {self.graph}")
            self._wc = self.group.enumerate_wc(self.cap)
        return self._wc

    def tl_bar_mprime(self, coords: dict) -> dict:
        return to_mprime(self.tl.tl_bar(from_mprime(coords)))

    def _cache_path(self) -> Path | None:
        if self.cache_dir is None:
            return None
        cap = "all" if self.cap is None else str(self.cap)
        return Path(self.cache_dir) / f"ictable-{self.graph.canonical_hash}-cap{cap}-v{SCHEMA_VERSION}.json"

    def ic_table(self) -> ICTable:
        if self._table is not None:
            return self._table
        path = self._cache_path()
        if path is not None and path.exists():
            table = ICTable.from_json(json.loads(path.read_text()))
            report = verify_ic(self.ctx, table, bar=self.tl_bar_mprime)
            if report.ok and set(table.coeffs) == set(self.wc()):
                log.info("loaded IC table from %s", path)
                self._table = table
                return table
            log.warning("discarding invalid cached IC table %s", path)
        table = solve_ic(self.ctx, self.wc())
        if path is not None:
            _atomic_write(path, table.dumps())
        self._table = table
        return table


def _wc_known_finite(graph: CoxeterGraph) -> bool:
    # W_c is finite for finite W and for type ADE (any E_n)
    return graph.is_finite or ade_type(graph)


def _atomic_write(path: Path, text: str) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=".tmp-", suffix=path.suffix)
    with os.fdopen(fd, "w", encoding="utf-8") as fh:
        fh.write(text)
    os.replace(tmp, path)


# -- experiments -----------------------------------------------------------------


def _verdict(expected: bool | None, observed: bool) -> str:
    if expected is False:
        return "fail-as-expected" if not observed else "mismatch"
    return "pass" if observed else "fail"


def _exp_enumerate(ws: Workspace, cfg: ExperimentConfig) -> ExperimentReport:
    G = ws.group
    if cfg.cap is None and not ws.graph.is_finite:
        raise ResourceError("a length cap is required for an infinite Coxeter group")
    elems = G.enumerate(cfg.cap)
    if len(elems) > cfg.budget and cfg.cap is None:
        raise ResourceError(f"{len(elems)} elements exceed the budget of {cfg.budget}")
    n_wc = sum(fc for _, fc in elems)
    return ExperimentReport(
        "enumerate", str(ws.graph), cfg.cap, None, True, "done",
        payload={
            "count": len(elems),
            "wc_count": n_wc,
            "elements": [{"word": list(w), "length": len(w), "in_wc": fc} for w, fc in elems],
        },
    )


def _ic_matrix(table: ICTable) -> dict:
    return {w: dict(h) for w, h in table.coeffs.items()}


def _exp_ic(ws: Workspace, cfg: ExperimentConfig) -> ExperimentReport:
    table = ws.ic_table()
    report = verify_ic(ws.ctx, table, bar=ws.tl_bar_mprime)
    return ExperimentReport(
        "ic", str(ws.graph), cfg.cap, True, report.ok, "pass" if report.ok else "fail",
        payload={"wc_count": len(table), "table": table.to_json(),
                 "violations": [str(v) for v in report.violations]},
        matrix=_ic_matrix(table), matrix_title="IC basis over m'",
    )


def _exp_monomial_check(ws: Workspace, cfg: ExperimentConfig) -> ExperimentReport:
    table = ws.ic_table()
    mismatches = [w for w in ws.wc() if table[w] != to_mprime(ws.tl.monomial(w))]
    if ade_type(ws.graph):
        expected = True
    elif not ws.graph.is_simply_laced():
        expected = False
    else:
        expected = None
    observed = not mismatches
    return ExperimentReport(
        "monomial-check", str(ws.graph), cfg.cap, expected, observed,
        _verdict(expected, observed),
        payload={"wc_count": len(ws.wc()), "mismatches": [list(w) for w in mismatches]},
        matrix=_ic_matrix(table), matrix_title="IC basis over m'",
    )


def _default_counterexample(ws: Workspace) -> Word:
    g = ws.graph
    if g.name == "affA3" or (g.node_count == 4 and g.is_simply_laced()
                             and {p for p, _ in g.bonds} == {(1, 2), (2, 3), (3, 4), (1, 4)}):
        return ws.group.normal_form((1, 3, 2, 4, 1, 3))
    for (i, j), m in g.bonds:
        if m != 3:
            return ws.group.normal_form((i, j, i))
    raise ValueError(f"no default counterexample element for {g}; pass --word")


def _exp_counterexample(ws: Workspace, cfg: ExperimentConfig) -> ExperimentReport:
    G = ws.group
    w = G.normal_form(cfg.word) if cfg.word else _default_counterexample(ws)
    if not G.in_wc(w):
        raise ValueError(f"{word_to_str(w)} is complex")
    ideal = G.bruhat_ideal(w)
    table = solve_ic(ws.ctx, ideal)
    report = verify_ic(ws.ctx, table, bar=ws.tl_bar_mprime,
                       alt_key=lambda x: (len(x), tuple(-s for s in x)))
    b = to_mprime(ws.tl.monomial(w))
    monomial_is_ic = is_ic_element(ws.ctx, b, w)
    diff = {x: (b.get(x), table[w].get(x)) for x in set(b) | set(table[w])
            if b.get(x) != table[w].get(x)}
    return ExperimentReport(
        "counterexample", str(ws.graph), cfg.cap, False, monomial_is_ic or not report.ok,
        _verdict(False, monomial_is_ic or not report.ok),
        payload={
            "w": list(w),
            "monomial_is_ic": monomial_is_ic,
            "ic_verified": report.ok,
            "ideal_size": len(ideal),
            "c_w": [{"x": list(x), "h": table[w][x].to_json()}
                    for x in sorted(table[w], key=shortlex_key)],
            "b_w": [{"x": list(x), "h": b[x].to_json()} for x in sorted(b, key=shortlex_key)],
            "differences": [{"x": list(x), "b_w": (bx or LaurentPoly()).to_json(),
                             "c_w": (cx or LaurentPoly()).to_json()}
                            for x, (bx, cx) in sorted(diff.items(), key=lambda kv: shortlex_key(kv[0]))],
        },
        matrix={w: table[w]}, matrix_title="c_w over m'",
    )


def _exp_positivity(ws: Workspace, cfg: ExperimentConfig) -> ExperimentReport:
    table = ws.ic_table()
    n = len(table)
    if n * n > cfg.budget * 100:
        raise ResourceError(f"{n * n} products exceed the budget")
    consts = all_ic_structure_constants(ws.tl, table, ws.ctx)
    negative = [
        {"x": list(x), "y": list(y), "z": list(z), "coeff": c.to_json()}
        for (x, y), d in sorted(consts.items(), key=lambda kv: (shortlex_key(kv[0][0]), shortlex_key(kv[0][1])))
        for z, c in sorted(d.items(), key=lambda kv: shortlex_key(kv[0]))
        if not subring_membership(c, "N_of_v_vinv")
    ]
    observed = not negative
    return ExperimentReport(
        "positivity", str(ws.graph), cfg.cap, True, observed, "pass" if observed else "fail",
        payload={"wc_count": n, "products": len(consts), "negative": negative},
    )


def _exp_kl_kernel(ws: Workspace, cfg: ExperimentConfig) -> ExperimentReport:
    if not ws.graph.is_finite:
        raise ResourceError("kernel analysis needs a finite Coxeter group")
    try:
        rep = kernel_analysis(HeckeAlgebra(ws.group, ws.tl), ws.ic_table(), cfg.budget)
    except ValueError as exc:
        raise ResourceError(str(exc)) from None
    name = ws.graph.name
    if name.startswith("A"):
        expected, observed = True, rep.spanned and rep.projected_equals_ic
    else:
        expected = False if name == "D4" else None
        observed = rep.spanned
    return ExperimentReport(
        "kl-kernel", str(ws.graph), cfg.cap, expected, observed, _verdict(expected, observed),
        payload={**rep.to_json(), "order": rep.order, "wc_count": rep.wc_count},
    )


def _exp_transitions(ws: Workspace, cfg: ExperimentConfig) -> ExperimentReport:
    tables = ws.tl.transition_tables(ws.wc())
    bad = tables.triangularity_violations()
    observed = not bad
    expected = True if ade_type(ws.graph) else (False if not ws.graph.is_simply_laced() else None)
    matrix: dict = {}
    for (x, w), c in tables.qtilde.items():
        if c:
            matrix.setdefault(w, {})[x] = c
    return ExperimentReport(
        "transitions", str(ws.graph), cfg.cap, expected, observed,
        _verdict(expected, observed),
        payload={
            "qtilde": _pairs_json(tables.qtilde),
            "ptilde": _pairs_json(tables.ptilde),
            "violations": [{"x": list(x), "w": list(w), "q": c.to_json()} for x, w, c in bad],
        },
        matrix=matrix, matrix_title="Qtilde",
    )


def _pairs_json(d: dict) -> list[dict]:
    items = sorted(d.items(), key=lambda kv: (shortlex_key(kv[0][1]), shortlex_key(kv[0][0])))
    return [{"x": list(x), "w": list(w), "poly": c.to_json()} for (x, w), c in items if c]


def _exp_mult(ws: Workspace, cfg: ExperimentConfig) -> ExperimentReport:
    G = ws.group
    x = G.normal_form(cfg.word or ())
    y = G.normal_form(cfg.other or ())
    prod = ws.tl.t_mul(ws.tl.t(x), ws.tl.t(y))
    return ExperimentReport(
        "mult", str(ws.graph), cfg.cap, None, True, "done",
        payload={"x": list(x), "y": list(y), "product": vec_to_json(prod)},
        matrix={G.multiply(x, y): prod}, matrix_title="t_x t_y over t",
    )


_DRIVERS = {
    "enumerate": _exp_enumerate,
    "ic": _exp_ic,
    "monomial-check": _exp_monomial_check,
    "counterexample": _exp_counterexample,
    "positivity": _exp_positivity,
    "kl-kernel": _exp_kl_kernel,
    "transitions": _exp_transitions,
    "mult": _exp_mult,
}


def run(cfg: ExperimentConfig, workspace: Workspace | None = None) -> ExperimentReport:
    """Run one experiment. Raises ``GraphError``/``ResourceError`` on bad input."""
    if cfg.experiment not in _DRIVERS:
        raise ValueError(f"unknown experiment {cfg.experiment!r}")
    graph = parse_graph(cfg.graph)
    ws = workspace or Workspace(graph, cfg.cap, cfg.cache_dir)
    start = time.perf_counter()
    report = _DRIVERS[cfg.experiment](ws, cfg)
    report.timing = time.perf_counter() - start
    return report


# -- export -------------------------------------------------------------------------


def _columns(matrix: dict) -> list[Word]:
    cols = set()
    for row in matrix.values():
        cols |= set(row)
    return sorted(cols, key=shortlex_key)


def _latex_word(w: Word) -> str:
    return "e" if not w else "".join(f"s_{{{s}}}" for s in w)


def render(report: ExperimentReport, fmt: str) -> str:
    """Serialize a report; output depends only on the report payload."""
    if fmt == "json":
        return json.dumps(report.to_json(), indent=1, separators=(",", ": ")) + "\n"
    if fmt not in FORMATS:
        raise ValueError(f"unknown format {fmt!r}")
    matrix = report.matrix or {}
    rows = sorted(matrix, key=shortlex_key)
    if fmt == "csv":
        cols = _columns(matrix)
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(["w"] + [word_to_str(x) for x in cols])
        for w in rows:
            writer.writerow([word_to_str(w)] + [repr(matrix[w][x]) if matrix[w].get(x) else "" for x in cols])
        return buf.getvalue()
    lines = [
        f"% {report.experiment} for {report.graph}: {report.matrix_title}",
        "\\begin{tabular}{l|l}",
        "$w$ & expansion \\\\",
        "\\hline",
    ]
    for w in rows:
        terms = []
        for x in sorted(matrix[w], key=shortlex_key):
            c = matrix[w][x]
            if c:
                terms.append(f"({c.to_latex()})\\,m'_{{{_latex_word(x)}}}")
        lines.append(f"${_latex_word(w)}$ & ${' + '.join(terms) or '0'}$ \\\\")
    lines.append("\\end{tabular}")
    return "\n".join(lines) + "\n"


def export(report: ExperimentReport, fmt: str, path: str | Path | None = None) -> str:
    """Render ``report`` and, if ``path`` is given, write it atomically."""
    text = render(report, fmt)
    if path is not None:
        _atomic_write(Path(path), text)
    return text
