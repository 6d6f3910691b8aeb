"""Assembling the analysis report (a plain JSON-ready dict) and its text rendering."""

from __future__ import annotations

import json
import random
from fractions import Fraction
from itertools import combinations

import numpy as np

from . import __version__
from .atoms import (
    clemens_schmid_dims,
    decompose,
    ext_dimensions,
    hodge_delta,
    interaction_graph,
    nnf_report,
)
from .cluster import fg_coords, mutate_and_compare
from .config import DegenerationConfig
from .corpus import random_config
from .dubrovin import MonodromyResult, integrate_loop, monodromy_vs_pl
from .integral_structure import decategorification_check, Correspondence, n_int
from .lattice import (
    CycleConfig,
    InputError,
    det,
    exact_equal,
    fmt_rational,
    intersection_matrix,
    is_zero,
    qmat,
    qvec,
    to_jsonable,
)
from .pl_stokes import (
    DEFAULT_CAP,
    OperatorSet,
    braid_holds,
    commutator_nilpotent,
    first_order_commutator_holds,
    group_commutator,
    group_explore,
    relation_classify,
)

UNIPOTENCY_TOL = 1e-8


def _cx(v) -> list:
    v = complex(v)
    return [v.real, v.imag]


def _check(name: str, fn) -> dict:
    try:
        ok = bool(fn())
        return {"invariant": name, "passed": ok}
    except AssertionError as exc:
        return {"invariant": name, "passed": False, "detail": str(exc)}


def operator_identities(config: CycleConfig) -> list[dict]:
    ops = OperatorSet.from_config(config)
    lam = intersection_matrix(config)
    pairs = list(combinations(range(1, config.r + 1), 2))
    basic = ops.check()

    def commutator_closed_form():
        for i, j in pairs:
            commutator_nilpotent(config, i, j)
            commutator_nilpotent(config, j, i)
        return True

    def group_commutator_identity():
        for i, j in pairs:
            group_commutator(config, i, j)
        return True

    def commutator_vanishing_iff_lambda():
        for i, j in pairs:
            c = commutator_nilpotent(config, i, j, check=False)
            if is_zero(c) != (lam[i - 1, j - 1] == 0):
                return False
        return True

    def braid_when_unit_lambda():
        return all(braid_holds(config, i, j) for i, j in pairs if abs(lam[i - 1, j - 1]) == 1)

    def rank_nullity():
        d = decompose(config)
        return d.rigid_dim + d.covector_rank == config.n

    def flexible_atoms():
        d = decompose(config)
        return d.flexible_count == config.r and all(x == 1 for x in d.flexible_dims)

    return [
        _check("pairing_skew_symmetric", lambda: exact_equal(config.lattice.pairing.T, -config.lattice.pairing)),
        _check("nilpotent_square_zero", lambda: basic["nilpotent_square_zero"]),
        _check("nilpotent_rank_one", lambda: basic["nilpotent_rank_one"]),
        _check("stokes_inverse_is_id_minus_n", lambda: basic["stokes_inverse"]),
        _check("pl_determinant_one", lambda: all(det(t) == 1 for t in ops.pl_ops)),
        _check("commutator_closed_form_matches_direct", commutator_closed_form),
        _check("group_commutator_closed_form", group_commutator_identity),
        _check("commutator_zero_iff_lambda_zero", commutator_vanishing_iff_lambda),
        _check("braid_relation_when_abs_lambda_one", braid_when_unit_lambda),
        _check("nnf_criteria_consistent", lambda: nnf_report(config, strict=False)["consistent"]),
        _check("rigid_rank_nullity", rank_nullity),
        _check("flexible_atoms_rank_one", flexible_atoms),
        _check("clemens_schmid_exact", lambda: clemens_schmid_dims(config)["exact"]),
    ]


def analyze(dc: DegenerationConfig, *, max_len: int = 2, cap: int = DEFAULT_CAP,
            samples: int = 0, seed: int = 0) -> dict:
    config = dc.cycles
    lam = intersection_matrix(config)
    pairs = list(combinations(range(1, config.r + 1), 2))
    graph = interaction_graph(config)
    identities = operator_identities(config)
    report = {
        "tool": {"name": "conifold", "version": __version__},
        "config_sha256": dc.digest,
        "rank": config.n,
        "r": config.r,
        "pairing_nondegenerate": config.lattice.nondegenerate,
        "cycles_independent": config.cycles_independent,
        "intersection_matrix": to_jsonable(lam),
        "operator_identities": identities,
        "group_commutator_first_order": {
            "holds_for_all_pairs": all(first_order_commutator_holds(config, i, j) for i, j in pairs),
            "failing_pairs": [[i, j] for i, j in pairs if not first_order_commutator_holds(config, i, j)],
        },
        "relations": [
            {"i": i, "j": j, "lambda": fmt_rational(lam[i - 1, j - 1]),
             "relation": relation_classify(config, i, j)}
            for i, j in pairs
        ],
        "atom_decomposition": decompose(config).as_dict(),
        "interaction_graph": graph.as_dict(),
        "nnf": nnf_report(config, strict=False),
        "clemens_schmid": clemens_schmid_dims(config),
        "hodge_delta": list(hodge_delta(config.r)),
        "ext_dimensions": {
            "degree_1": ext_dimensions(config.r, 1),
            "degree_2": ext_dimensions(config.r, 2, interacting=graph.has_edge),
        },
    }
    if config.r:
        g = group_explore(config, max_len, cap=cap)
        report["group"] = {"max_len": max_len, "element_count": g.element_count, "abelian": g.abelian}
    if samples:
        report["property_samples"] = random_property_check(samples, seed)
        identities.append({"invariant": "random_corpus_consistency",
                           "passed": report["property_samples"]["all_passed"]})
    report["failures"] = [c["invariant"] for c in identities if not c["passed"]]
    return report


def random_property_check(samples: int, seed: int) -> dict:
    rng = random.Random(seed)
    failed = []
    for idx in range(samples):
        cfg = random_config(rng)
        bad = [c["invariant"] for c in operator_identities(cfg) if not c["passed"]]
        if bad:
            failed.append({"index": idx, "failed": bad})
    return {"seed": seed, "samples": samples, "failed": failed, "all_passed": not failed}


def monodromy_section(dc: DegenerationConfig, *, z=None, radius=0.3, tol=1e-10,
                      orientation="ccw", max_steps=200_000, base=0.5, extended=False) -> dict:
    z = dc.z if z is None else z
    res: MonodromyResult = integrate_loop(z, radius, tol, max_steps, orientation, base, extended)
    out = res.as_dict()
    checks = [
        {"invariant": "eigenvalues_within_tol_of_one",
         "passed": bool(np.max(res.eigenvalue_deviations) < UNIPOTENCY_TOL)},
        {"invariant": "relative_unipotency_residual",
         "passed": res.relative_unipotency < UNIPOTENCY_TOL},
        {"invariant": "log_rank_one", "passed": res.numerical_rank == 1},
    ]
    if dc.cycles.r == 1 and dc.cycles.n == 4:
        cmp = monodromy_vs_pl(res, dc.cycles, z)
        out["pl_comparison"] = cmp
        checks.append({"invariant": "jordan_type_matches_pl", "passed": cmp["agree"]})
    out["checks"] = checks
    return out


def cluster_section(dc: DegenerationConfig) -> dict | None:
    if dc.cluster is None:
        return None
    state = fg_coords(dc.cluster["central_charges"], dc.cluster["z"])
    out = {"state": state.as_dict()}
    if dc.cycles.r == 2:
        cmp = mutate_and_compare(dc.cycles, state)
        out["comparison"] = {
            "lambda": fmt_rational(cmp["lambda"]),
            "mutated_cycles": [to_jsonable(c) for c in cmp["mutated_cycles"]],
            "linear_transport": _cx(cmp["linear_transport"]),
            "cluster": _cx(cmp["cluster"]),
            "discrepancy": cmp["discrepancy"],
        }
    return out


def kdata_section(dc: DegenerationConfig) -> dict | None:
    kd = dc.kdata
    if kd is None:
        return None
    out = {}
    if "chi_with_S" in kd and "chi_S_with" in kd:
        ni = n_int(kd["chi_with_S"], kd["chi_S_with"])
        out["n_int"] = {
            "matrix": to_jsonable(ni.matrix) if ni.matrix.dtype == object else [[_cx(v) for v in r] for r in ni.matrix],
            "rank": ni.rank,
            "contraction": fmt_rational(ni.contraction) if isinstance(ni.contraction, Fraction) else _cx(ni.contraction),
            "unipotent": bool(ni.unipotent),
        }
    if all(k in kd for k in ("ch", "spherical", "euler_pairing")):
        node = int(kd.get("node", 1))
        if not 1 <= node <= dc.cycles.r:
            raise InputError("field 'kdata.node': out of range")
        corr = Correspondence(qmat(kd["ch"]), qvec(kd["spherical"]), qmat(kd["euler_pairing"]), dc.cycles, node)
        out["decategorification"] = decategorification_check(corr)
    return out


def full_report(dc: DegenerationConfig, **kw) -> dict:
    mono_kw = {k: kw.pop(k) for k in list(kw) if k in
               ("z", "radius", "tol", "orientation", "max_steps", "base", "extended")}
    report = analyze(dc, **kw)
    report["monodromy"] = monodromy_section(dc, **mono_kw)
    for key, section in (("cluster", cluster_section(dc)), ("kdata", kdata_section(dc))):
        if section is not None:
            report[key] = section
    failures = report["failures"]
    failures += [c["invariant"] for c in report["monodromy"]["checks"] if not c["passed"]]
    if "kdata" in report and "decategorification" in report["kdata"]:
        if not report["kdata"]["decategorification"]["commutes"]:
            failures.append("decategorification_square")
    return report


def dumps(report: dict) -> str:
    return json.dumps(report, sort_keys=True, indent=2, allow_nan=False) + "\n"


def render_text(obj, indent: int = 0) -> str:
    pad = "  " * indent
    lines = []
    if isinstance(obj, dict):
        for key in sorted(obj):
            val = obj[key]
            if isinstance(val, (dict, list)) and val and not _flat(val):
                lines.append(f"{pad}{key}:")
                lines.append(render_text(val, indent + 1))
            else:
                lines.append(f"{pad}{key}: {_inline(val)}")
    elif isinstance(obj, list):
        for item in obj:
            if isinstance(item, dict) and "invariant" in item:
                mark = "PASS" if item["passed"] else "FAIL"
                lines.append(f"{pad}[{mark}] {item['invariant']}")
            elif isinstance(item, (dict, list)) and not _flat(item):
                lines.append(f"{pad}-")
                lines.append(render_text(item, indent + 1))
            else:
                lines.append(f"{pad}- {_inline(item)}")
    else:
        lines.append(f"{pad}{_inline(obj)}")
    return "\n".join(lines)


def _flat(val) -> bool:
    if isinstance(val, dict):
        return False
    return all(not isinstance(v, (dict, list)) or (isinstance(v, list) and all(
        not isinstance(w, (dict, list)) for w in v)) for v in val) and len(val) <= 8


def _inline(val) -> str:
    return json.dumps(val, sort_keys=True) if isinstance(val, (dict, list)) else str(val)
