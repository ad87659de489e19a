"""Batch experiments: configuration, pipeline and deterministic reports."""

from __future__ import annotations

import csv
import hashlib
import io as _io
import json
import math
import time
from dataclasses import asdict, dataclass, field
from pathlib import Path

from locert import adversary, families, schemes
from locert.errors import CapacityError, PreconditionError
from locert.families import Permutation
from locert.io import assignment_to_json, dumps, graph_to_json
from locert.oracles import chromatic_feasible, find_perfect_matching, is_dominating_at_distance
from locert.words import integer_root_ceil


def _perm(text) -> Permutation:
    if isinstance(text, Permutation):
        return text
    return Permutation(tuple(int(x) for x in str(text).split("-")))


def _i(p, key, default=None):
    if key not in p:
        if default is None:
            raise ValueError(f"missing parameter {key}")
        return default
    return int(p[key])


FAMILIES = {
    "complete_k_partite": lambda p: (families.complete_k_partite(_i(p, "k"), _i(p, "m")), None),
    "clique_path": lambda p: (families.clique_path(_i(p, "r"), _i(p, "s")), None),
    "permuted_double_clique_path": lambda p: (
        families.permuted_double_clique_path(_i(p, "r"), _i(p, "s"), _perm(p["sigma"]), _perm(p["tau"])),
        families.double_clique_path_ids(_i(p, "r"), _i(p, "s")),
    ),
    "labeled_path": lambda p: (families.labeled_path(_i(p, "t")), None),
    "path": lambda p: (families.path(_i(p, "n"), [0] * _i(p, "n") if p.get("labeled") else None), None),
    "cycle": lambda p: (families.cycle(_i(p, "n"), [0] * _i(p, "n") if p.get("labeled") else None), None),
    "half_graph": lambda p: (
        families.half_graph(_i(p, "delta")),
        families.half_graph_ids(_i(p, "delta"), _perm(p["sigma"])) if "sigma" in p else None,
    ),
    "broken_half_graph_pair": lambda p: (
        families.broken_half_graph_pair(_i(p, "delta"), _i(p, "j1"), _i(p, "j2")), None),
    "grid": lambda p: (families.grid(_i(p, "rows"), _i(p, "cols")), None),
    "gnp": lambda p: (families.gnp(_i(p, "n"), float(p["p"]), _i(p, "seed", 0)), None),
    "random_tree": lambda p: (families.random_tree(_i(p, "n"), _i(p, "seed", 0)), None),
    "random_two_tree": lambda p: (families.random_two_tree(_i(p, "n"), _i(p, "seed", 0)), None),
    "complete_graph": lambda p: (families.complete_graph(_i(p, "n")), None),
}


def build_family(name: str, params: dict):
    if name not in FAMILIES:
        raise ValueError(f"unknown family {name!r}; choose from {sorted(FAMILIES)}")
    return FAMILIES[name](params)


def property_holds(s: schemes.Scheme, G) -> bool:
    """Oracle answer for the property certified by ``s``."""
    if s.name in ("coloring", "uniquely-colorable", "two-certificates"):
        return chromatic_feasible(G, s.param("k")) is not None
    if s.name.startswith("domination"):
        return is_dominating_at_distance(G, s.param("t"))
    if s.name == "matching":
        return find_perfect_matching(G) is not None
    raise ValueError(f"no oracle for scheme {s.name}")


def prove(s: schemes.Scheme, G, params: dict):
    if s.name == "coloring":
        return schemes.prove_coloring(G, s.param("k"))
    if s.name == "uniquely-colorable":
        return schemes.prove_uniquely_colorable(G, s.param("k"), s.distance)
    if s.name == "two-certificates":
        return schemes.prove_two_certificates(G, s.param("k"))
    if s.name == "domination-d1":
        return schemes.prove_domination_d1(G, s.param("t"))
    if s.name == "domination":
        return schemes.prove_domination(G, s.param("t"), s.distance)
    if s.name == "matching":
        backend = params.get("backend", "greedy")
        return schemes.prove_matching(G, "contraction" if backend.startswith("contraction") else "greedy",
                                      int(params.get("colors", 4)), params.get("coloring", "exact"))
    raise ValueError(f"no prover for scheme {s.name}")


# -- configuration and reports --------------------------------------------------


KINDS = ("certify", "search", "sample", "attack", "table")


@dataclass
class ExperimentConfig:
    kind: str
    family: str = ""
    family_params: dict = field(default_factory=dict)
    scheme: str = ""
    scheme_params: dict = field(default_factory=dict)
    alphabet: int | None = None
    budget: int = adversary.DEFAULT_BUDGET
    seed: int = 0
    workers: int = 1
    samples: int = 0
    certs: list | None = None
    attack: str = ""
    attack_params: dict = field(default_factory=dict)
    table_property: str = ""
    table_values: list = field(default_factory=list)
    json_out: str | None = None
    csv_out: str | None = None
    figure_out: str | None = None
    include_timings: bool = False

    def validate(self):
        if self.kind not in KINDS:
            raise ValueError(f"unknown experiment kind {self.kind!r}; choose from {KINDS}")
        if self.budget <= 0:
            raise ValueError("budget must be positive")
        if self.workers < 1:
            raise ValueError("workers must be at least 1")
        if self.kind in ("certify", "search", "sample"):
            if self.family not in FAMILIES:
                raise ValueError(f"unknown family {self.family!r}")
            if self.scheme not in schemes.SCHEME_FACTORIES:
                raise ValueError(f"unknown scheme {self.scheme!r}")
        if self.kind == "attack" and self.attack not in ATTACKS:
            raise ValueError(f"unknown attack {self.attack!r}; choose from {sorted(ATTACKS)}")
        if self.kind == "table" and self.table_property not in TABLE_PROPERTIES:
            raise ValueError(f"unknown table property {self.table_property!r}")

    @classmethod
    def from_json(cls, data: dict) -> "ExperimentConfig":
        known = set(cls.__dataclass_fields__)
        unknown = set(data) - known
        if unknown:
            raise ValueError(f"unknown config fields {sorted(unknown)}")
        return cls(**data)


@dataclass
class ExperimentReport:
    config: dict
    instances: list
    status: str  # ok | violation | incomplete
    exit_code: int

    def to_json(self) -> dict:
        return {"config": self.config, "instances": self.instances, "status": self.status}


def digest(obj) -> str:
    return hashlib.sha256(json.dumps(obj, sort_keys=True).encode()).hexdigest()


def _elapsed(row, start, cfg):
    if cfg.include_timings:
        row["time"] = round(time.perf_counter() - start, 6)


def _certify(cfg):
    G, ids = build_family(cfg.family, cfg.family_params)
    s = schemes.make_scheme(cfg.scheme, cfg.scheme_params)
    start = time.perf_counter()
    holds = property_holds(s, G)
    if cfg.certs is not None:
        c = tuple(int(x) for x in cfg.certs)
    elif holds:
        c = prove(s, G, cfg.scheme_params).symbols
    else:
        raise PreconditionError("no certificates given and the instance is a NO instance")
    verdict = schemes.verify_all(s, G, c, ids)
    row = {
        "instance": cfg.family, "scheme": s.name, "alphabet": s.alphabet_size,
        "symbols_used": len(set(c)), "property": holds, "accepted": verdict.accepted,
        "rejecting_vertices": sorted(verdict.rejecting_vertices),
    }
    _elapsed(row, start, cfg)
    violation = verdict.accepted != holds if cfg.certs is None else (verdict.accepted and not holds)
    return [row], violation


def _search(cfg):
    G, ids = build_family(cfg.family, cfg.family_params)
    s = schemes.make_scheme(cfg.scheme, cfg.scheme_params)
    start = time.perf_counter()
    if cfg.kind == "search":
        rep = adversary.exhaustive_search(s, G, cfg.alphabet, ids, cfg.budget, cfg.workers)
    else:
        rep = adversary.sample_search(s, G, cfg.samples, cfg.alphabet, cfg.seed, ids)
    holds = property_holds(s, G)
    row = {"instance": cfg.family, "scheme": s.name, "property": holds, **rep.to_json()}
    row["accepted"] = rep.accepting_assignment is not None
    _elapsed(row, start, cfg)
    return [row], row["accepted"] and not holds


def _attack_crossing(p, c, s):
    return adversary.crossing_attack(_i(p, "k"), _i(p, "m"), c, s)


def _attack_mix(p, c, s):
    c_tau = tuple(int(x) for x in p["certs_tau"].split(";")) if "certs_tau" in p else c
    return adversary.permutation_mix_attack(_i(p, "r"), _i(p, "s"), _perm(p["sigma"]), _perm(p["tau"]),
                                            c, c_tau, s)


def _attack_period(p, c, s):
    return adversary.period_attack(_i(p, "t"), _i(p, "d", 1), c, s)


def _attack_half(p, c, s):
    return adversary.half_graph_attack(_i(p, "delta"), c, s)


ATTACKS = {"crossing": _attack_crossing, "mix": _attack_mix, "period": _attack_period, "half-graph": _attack_half}


def _attack(cfg):
    if cfg.certs is None:
        raise ValueError("attack needs an assignment (certs)")
    s = schemes.make_scheme(cfg.scheme, cfg.scheme_params) if cfg.scheme else None
    start = time.perf_counter()
    try:
        out = ATTACKS[cfg.attack](cfg.attack_params, tuple(int(x) for x in cfg.certs), s)
    except adversary.AttackInapplicable as exc:
        row = {"attack": cfg.attack, "outcome": "inapplicable", "reason": str(exc)}
        _elapsed(row, start, cfg)
        return [row], False
    if out is None:
        row = {"attack": cfg.attack, "outcome": "none"}
        _elapsed(row, start, cfg)
        return [row], False
    data = out.to_json()
    row = {"attack": cfg.attack, "outcome": "built", "verified": out.verified,
           "witness_digest": digest(data["witnesses"]), **data}
    _elapsed(row, start, cfg)
    return [row], bool(out.details.get("target_accepted"))


def _table(cfg):
    rows = scaling_table(cfg.table_property, cfg.table_values, cfg.budget, cfg.workers)
    if not cfg.include_timings:
        for r in rows:
            r.pop("time", None)
    return rows, False


RUNNERS = {"certify": _certify, "search": _search, "sample": _search, "attack": _attack, "table": _table}


def run_experiment(cfg: ExperimentConfig) -> ExperimentReport:
    """Run one configured pipeline and write the requested files.

    Timings are left out unless ``include_timings`` is set, so the same
    configuration always yields byte-identical files.
    """
    cfg.validate()
    echo = asdict(cfg)
    for key in ("json_out", "csv_out", "figure_out", "workers"):
        echo.pop(key)
    try:
        rows, violation = RUNNERS[cfg.kind](cfg)
        status, code = ("violation", 2) if violation else ("ok", 0)
    except CapacityError as exc:
        rows = [{"error": str(exc), "progress": exc.progress, "incomplete": True}]
        status, code = "incomplete", 3
    report = ExperimentReport(echo, rows, status, code)
    if cfg.json_out:
        Path(cfg.json_out).write_text(dumps(report.to_json()))
    if cfg.csv_out:
        Path(cfg.csv_out).write_text(summary_csv(cfg, rows))
    if cfg.figure_out and cfg.kind == "table" and status != "incomplete":
        from locert.plotting import plot_scaling_table

        plot_scaling_table(rows, cfg.figure_out, cfg.table_property)
    return report


CSV_COLUMNS = ("instance", "scheme", "alphabet", "verdict", "time")


def summary_csv(cfg: ExperimentConfig, rows) -> str:
    buf = _io.StringIO()
    if cfg.kind == "table":
        cols = list(TABLE_COLUMNS) + (["time"] if cfg.include_timings else [])
        w = csv.DictWriter(buf, cols, extrasaction="ignore", lineterminator="\n")
        w.writeheader()
        w.writerows(rows)
        return buf.getvalue()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(CSV_COLUMNS)
    for r in rows:
        if cfg.kind == "attack":
            verdict = r.get("outcome")
            if verdict == "built":
                verdict = "verified" if r["verified"] else "unverified"
            w.writerow([cfg.attack, cfg.scheme or "-", len(set(cfg.certs or ())), verdict, r.get("time", "")])
        else:
            verdict = "incomplete" if r.get("incomplete") else ("accepted" if r.get("accepted") else "rejected")
            w.writerow([r.get("instance", cfg.family), r.get("scheme", cfg.scheme),
                        r.get("alphabet", r.get("alphabet_size", "")), verdict, r.get("time", "")])
    return buf.getvalue()


# -- scaling table -------------------------------------------------------------------


TABLE_COLUMNS = ("property", "parameter", "instance", "scheme_alphabet", "empirical_min",
                 "lower_bound", "formula", "status")


def _coloring_row(k):
    G = families.complete_k_partite(k, max(k, 3))
    return G, schemes.coloring_scheme(k), f"G_{k}", k, k


def _domination_row(t):
    G = families.labeled_path(t)
    return G, schemes.domination_d1_scheme(t), f"P_{t + 1}", math.sqrt(t - 1), 3 * integer_root_ceil(t, 2)


def _matching_row(delta):
    G = families.half_graph(delta)
    return G, schemes.matching_scheme(2 * delta - 1), f"B_{delta}", delta, 2 * delta - 1


TABLE_PROPERTIES = {"coloring": _coloring_row, "domination": _domination_row, "matching": _matching_row}


def scaling_table(prop: str, values, budget: int = adversary.DEFAULT_BUDGET, workers: int = 1) -> list:
    """Fewest distinct symbols the fixed verifier needs on the canonical YES instance.

    For each value, searches with at most 1, 2, ... distinct symbols drawn
    from the scheme's full alphabet and reports the first count that admits
    an accepting assignment, next to the bound formulas.
    """
    if prop not in TABLE_PROPERTIES:
        raise ValueError(f"unknown property {prop!r}; choose from {sorted(TABLE_PROPERTIES)}")
    rows = []
    for value in values:
        value = int(value)
        G, s, name, lower, formula = TABLE_PROPERTIES[prop](value)
        start = time.perf_counter()
        row = {"property": prop, "parameter": value, "instance": name, "scheme_alphabet": s.alphabet_size,
               "lower_bound": round(lower, 6), "formula": formula}
        try:
            for m in range(1, s.alphabet_size + 1):
                rep = adversary.exhaustive_search(s, G, budget=budget, workers=workers, max_distinct=m)
                if rep.accepting_assignment is not None:
                    row.update(empirical_min=m, status="complete")
                    break
            else:
                row.update(empirical_min="", status="none")
        except CapacityError:
            row.update(empirical_min="", status="incomplete")
        row["time"] = round(time.perf_counter() - start, 6)
        rows.append(row)
    return rows


def certificate_json(s, G, c, ids=None, per_vertex=False) -> dict:
    verdict = schemes.verify_all(s, G, c, ids)
    out = verdict.to_json(per_vertex)
    out.update(scheme=s.name, alphabet_size=s.alphabet_size, symbols_used=len(set(c.symbols)),
               assignment=assignment_to_json(c), graph=graph_to_json(G))
    return out
