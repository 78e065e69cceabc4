"""Verification suites: case generation, execution and deterministic reports.

A case is a plain tuple (suite, case id, parameters) so that it can be shipped
to worker processes; each case draws its randomness from a stream keyed by
(seed, suite, case id), which makes results independent of scheduling.
"""

from __future__ import annotations

import json
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Callable

from . import __version__
from .category import (
    Equivalence,
    Chain,
    corrupted_provider,
    filtration_equivalence_check,
    pullback_cokernel_check,
    quasi_strong_check,
    strong_object_check,
)
from .finab import FinAbGroup, GroupError, GroupHom, cokernel, kernel_subgroup
from .filtered import (
    FilterError,
    GradedModel,
    Tri,
    WindowProvider,
    all_cuts,
    build_graded_model,
    dual_object,
    dual_provider,
    lex_window,
    standard_splitting,
    total_filtration,
)
from .fourier import functoriality_holds, inversion_batch, modulation_holds, plancherel_holds
from .funcspace import FnOnGroup, delta_basis, pushforward, shriek
from .generators import (
    all_groups,
    model_seed,
    random_cokernel_instance,
    random_composable,
    random_graded_model,
    random_hom,
    random_hom_of_kind,
    random_morphism,
)
from .scenario import SUITES, Scenario, ScenarioError, scenario_from_dict
from .schwartz import (
    LazyStructure,
    SchwartzFunction,
    admissibility_check,
    cardinality_identity,
    indicator_fourier,
    poisson_bruteforce,
    poisson_eval,
    random_schwartz,
    refinement_expand,
)
from .smooth import (
    SmoothGerm,
    germ_from_literal,
    inversion_holds_n,
    invariant_dimension,
    one_A,
    plancherel_holds_n,
    tau,
    tau_injective_on_windows,
    tau_translation_equivariant,
    theorem_functions_check,
    TRANSFORM_FLAVOR,
)

RUN_SUITES = ("level0", "category", "smooth", "poisson")
PASS, FAIL, UNKNOWN = "pass", "fail", "unknown"

STANDARD_MODELS = (
    (1, {"(-1)": [2], "(0)": [2]}),
    (1, {"(-1)": [2], "(0)": [2], "(1)": [2]}),
    (2, {"(0,0)": [2], "(0,1)": [2], "(1,0)": [2], "(1,1)": [2]}),
)


def caps() -> tuple[int, int]:
    return int(os.environ.get("ADELHARM_MAX_ORDER", 4096)), int(os.environ.get("ADELHARM_MAX_CONDUCTOR", 840))


class CapExceeded(Exception):
    pass


def _guard(A: FinAbGroup):
    max_order, max_cond = caps()
    if A.order > max_order:
        raise CapExceeded(f"group order {A.order} exceeds the cap {max_order}")
    if A.exponent > max_cond:
        raise CapExceeded(f"conductor {A.exponent} exceeds the cap {max_cond}")


def _model_key(level: int, comps: dict) -> str:
    return json.dumps({"level": level, "components": comps}, sort_keys=True, separators=(",", ":"))


def _model(params) -> tuple[GradedModel, Any]:
    m, X = build_graded_model(params["components"], params["level"])
    _guard(m.ambient)
    return m, X


# --------------------------------------------------------------------------
# case generation


def _scenario_models(sc: Scenario) -> list[dict]:
    if sc.model is None:
        return []
    return [{"level": sc.model.level, "components": dict(sc.model.components), "label": "scenario"}]


def check_literals(sc: Scenario) -> Scenario:
    """Build every literal once so that bad ones surface as schema errors, all at once."""
    problems = []
    X = None
    if sc.model is not None:
        try:
            _, X = build_graded_model(dict(sc.model.components), sc.model.level)
        except (FilterError, GroupError, ValueError) as exc:
            problems.append(("model", str(exc)))
    for k, f in enumerate(sc.functions):
        try:
            FnOnGroup.from_literal(FinAbGroup(f.group), f.values)
        except (GroupError, ValueError) as exc:
            problems.append((f"functions.{k}", str(exc)))
    if X is not None:
        for k, g in enumerate(sc.germs):
            try:
                germ_from_literal(X, g.model_dump(mode="json"))
            except (FilterError, GroupError, ValueError) as exc:
                problems.append((f"germs.{k}", str(exc)))
        if sc.schwartz:
            try:
                SchwartzFunction.from_literal(X, [t.model_dump() for t in sc.schwartz])
            except (FilterError, GroupError, ValueError) as exc:
                problems.append(("schwartz", str(exc)))
    if problems:
        raise ScenarioError(problems)
    return sc


def _generated_models(sc: Scenario, suite: str, count: int, levels=(1, 2), **kw) -> list[dict]:
    out = []
    for k in range(count):
        level = levels[k % len(levels)]
        rng = model_seed(sc.seed, "models", suite, k)
        m, _ = random_graded_model(rng, level, **kw)
        out.append({"level": level, "components": m.to_dict()["components"], "label": f"gen{k}"})
    return out


def _standard_models() -> list[dict]:
    return [{"level": lvl, "components": c, "label": f"std{k}"} for k, (lvl, c) in enumerate(STANDARD_MODELS)]


def build_cases(sc: Scenario, suite: str) -> list[tuple[str, str, dict]]:
    z = sc.sizes
    cases: list[tuple[str, str, dict]] = []
    add = lambda name, params: cases.append((suite, name, params))
    if suite == "level0":
        for A in all_groups(z.level0_max_order):
            o = list(A.orders)
            add(f"inversion{o}", {"orders": o, "random": z.level0_random})
            add(f"plancherel{o}", {"orders": o, "random": z.level0_random})
            add(f"modulation{o}", {"orders": o})
        add("functoriality[Z2->Z4]", {"worked": True})
        for k in range(z.homs):
            add(f"functoriality#{k}", {"kind": ("injective", "surjective", "neither")[k % 3]})
        for k in range(z.pairs):
            add(f"composition#{k}", {})
        for k, f in enumerate(sc.functions):
            add(f"function#{k}", {"function": f.model_dump(mode="json")})
    elif suite == "category":
        models = _scenario_models(sc) + _standard_models() + _generated_models(sc, suite, z.category_models, max_order=256)
        for m in models:
            add(f"strong[{m['label']}]", m)
            add(f"strong-dual[{m['label']}]", m)
            add(f"equivalence[{m['label']}]", m)
        if sc.corrupt:
            level1 = next((m for m in models if m["level"] == 1), _standard_models()[0])
            add(f"corrupted[{level1['label']}]", level1)
        for k in range(z.category_pairs):
            add(f"quasi-strong#{k}", {"level": 1 + k % 2})
            add(f"pullback#{k}", {"level": 1 + k % 2})
    elif suite == "smooth":
        models = _scenario_models(sc) + _standard_models() + _generated_models(sc, suite, z.smooth_models, max_order=96)
        for m in models:
            for check in ("tau-injective", "invariants", "inversion", "plancherel", "theorem", "translation"):
                add(f"{check}[{m['label']}]", dict(m, random=z.smooth_random))
        for k, g in enumerate(sc.germs):
            add(f"germ#{k}", dict(_scenario_models(sc)[0], germ=g.model_dump(mode="json")))
    elif suite == "poisson":
        models = _scenario_models(sc) + _standard_models() + _generated_models(sc, suite, z.poisson_models, max_order=96)
        for m in models:
            model, _ = build_graded_model(m["components"], m["level"])
            for cut in all_cuts(model):
                lab = f"{m['label']}|cut={list(cut)}"
                add(f"poisson[{lab}]", dict(m, cut=list(cut), functions=z.poisson_functions))
                add(f"refinement[{lab}]", dict(m, cut=list(cut)))
        if sc.schwartz:
            add("schwartz[scenario]", dict(_scenario_models(sc)[0], cut=sc.model.cut, terms=[t.model_dump(mode="json") for t in sc.schwartz]))
        if sc.bounds is not None and sc.model is not None:
            add("admissibility[bounds]", {"level": sc.model.level, "bounds": sc.bounds.model_dump(mode="json"), "z": sc.model.cut or [0] * sc.model.level})
    return cases


# --------------------------------------------------------------------------
# case execution


def _ok(b: bool, **detail) -> dict:
    return {"status": PASS if b else FAIL, "detail": detail}


def _level0(name: str, p: dict, rng) -> dict:
    kind = name.split("[")[0].split("#")[0]
    if kind in ("inversion", "plancherel", "modulation"):
        A = FinAbGroup(p["orders"])
        _guard(A)
        if kind == "inversion":
            fs = delta_basis(A) + [FnOnGroup.random(A, rng) for _ in range(p["random"])]
            ok = all(inversion_batch(fs, "F")) and all(inversion_batch(fs, "F_prime"))
            return _ok(ok, functions=len(fs))
        if kind == "plancherel":
            ok = all(plancherel_holds(FnOnGroup.random(A, rng), FnOnGroup.random(A, rng)) for _ in range(max(1, p["random"])))
            return _ok(ok, pairs=max(1, p["random"]))
        elems = A.element_array
        a = [int(v) for v in elems[int(rng.integers(len(elems)))]]
        return _ok(modulation_holds(a, FnOnGroup.random(A, rng)), shift=a)
    if kind == "functoriality":
        if p.get("worked"):
            phi = GroupHom(FinAbGroup([2]), FinAbGroup([4]), [[2]])
        else:
            phi = random_hom_of_kind(rng, p["kind"], 24)
        _guard(phi.source)
        _guard(phi.target)
        f = FnOnGroup.random(phi.target, rng)
        return _ok(functoriality_holds(phi, f), source=list(phi.source.orders), target=list(phi.target.orders),
                   matrix=[list(r) for r in phi.matrix], injective=phi.is_injective(), surjective=phi.is_surjective())
    if kind == "composition":
        phi, psi = random_composable(rng, 24)
        f = FnOnGroup.random(phi.source, rng)
        comp = psi @ phi
        push = pushforward(comp, f) == pushforward(psi, pushforward(phi, f))
        shr = shriek(comp, f) == shriek(psi, shriek(phi, f))
        ko = lambda h: kernel_subgroup(h).order
        co = lambda h: cokernel(h)[0].order
        card = co(comp) * ko(phi) * ko(psi) == ko(comp) * co(phi) * co(psi)
        return _ok(push and shr and card, pushforward=push, shriek=shr, cardinality=card,
                   groups=[list(phi.source.orders), list(phi.target.orders), list(psi.target.orders)])
    if kind == "function":
        spec = p["function"]
        A = FinAbGroup(spec["group"])
        _guard(A)
        f = FnOnGroup.from_literal(A, spec["values"])
        ok = all(inversion_batch([f], "F")) and plancherel_holds(f, FnOnGroup.random(A, rng))
        return _ok(ok)
    raise KeyError(name)


def _category(name: str, p: dict, rng) -> dict:
    kind = name.split("[")[0].split("#")[0]
    if kind in ("strong", "strong-dual", "equivalence", "corrupted"):
        m, X = _model(p)
        if kind == "strong":
            r = strong_object_check(X)
            return {"status": PASS if r else FAIL, "detail": r.detail}
        if kind == "strong-dual":
            r1 = strong_object_check(dual_object(X))
            ok = bool(r1)
            if X.level == 1:
                ok = ok and bool(strong_object_check(dual_provider(WindowProvider.of(X))))
            return _ok(ok, **r1.detail)
        if kind == "equivalence":
            F = Chain.of(X)
            G = Chain(m.ambient, lambda i: X.step(i + 5), X.lo - 5, X.hi - 5)
            res = filtration_equivalence_check(F, G)
            return _ok(res is Equivalence.EQUIVALENT, result=res.value)
        # corrupted provider: the check is expected to reject it
        r = strong_object_check(corrupted_provider(X))
        return {"status": PASS if r else FAIL, "detail": dict(r.detail, fixture="corrupted provider")}
    if kind == "quasi-strong":
        lvl = p["level"]
        ms = [random_graded_model(rng, lvl, max_order=128) for _ in range(3)]
        phi = random_morphism(rng, lvl, ms[0], ms[1])
        psi = random_morphism(rng, lvl, ms[1], ms[2])
        a, b = quasi_strong_check(phi), quasi_strong_check(psi)
        c = quasi_strong_check(psi.compose(phi))
        return _ok(not (a and b) or bool(c), phi=bool(a), psi=bool(b), composite=bool(c))
    if kind == "pullback":
        phi, psi = random_cokernel_instance(rng, p["level"], max_order=128)
        r = pullback_cokernel_check(phi, psi)
        return {"status": PASS if r else FAIL, "detail": r.detail}
    raise KeyError(name)


def _smooth(name: str, p: dict, rng) -> dict:
    kind = name.split("[")[0].split("#")[0]
    m, X = _model(p)
    if X.is_zero():
        return {"status": UNKNOWN, "detail": {"reason": "zero object"}}
    n = p.get("random", 3)
    if kind == "tau-injective":
        return _ok(tau_injective_on_windows(X))
    if kind == "invariants":
        dims = sorted({invariant_dimension(X, (i, j)) for i in range(X.lo, X.hi + 1) for j in range(i, X.hi + 1) if X.section(i, j).group.order > 1} | {invariant_dimension(X)})
        one = one_A(X)
        ok = dims == [1] and all(tau(one, tuple(int(v) for v in a)) == 1 for a in m.ambient.element_array)
        return _ok(ok, dimensions=dims)
    if kind == "inversion":
        ok = True
        for which, (flavor, _) in TRANSFORM_FLAVOR.items():
            for _ in range(n):
                ok = ok and inversion_holds_n(SmoothGerm.random(flavor, X, rng), which)
        return _ok(ok)
    if kind == "plancherel":
        ok = True
        for _ in range(n):
            ok = ok and plancherel_holds_n(SmoothGerm.random("E", X, rng), SmoothGerm.random("E_prime", X, rng))
            ok = ok and plancherel_holds_n(SmoothGerm.random("E_tilde", X, rng), SmoothGerm.random("E_tilde_prime", X, rng))
        return _ok(ok)
    if kind == "theorem":
        Y = dual_object(X)
        chis = Y.top.elements_array()
        ok = True
        for _ in range(n):
            f = SmoothGerm.random("E_prime", X, rng)
            chi = tuple(int(v) for v in chis[int(rng.integers(len(chis)))])
            ok = ok and theorem_functions_check(f, chi)
        return _ok(ok)
    if kind == "translation":
        elems = X.top.elements_array()
        ok = True
        for _ in range(n):
            a = tuple(int(v) for v in elems[int(rng.integers(len(elems)))])
            ok = ok and tau_translation_equivariant(SmoothGerm.random("E", X, rng), a)
        return _ok(ok)
    if kind == "germ":
        g = germ_from_literal(X, p["germ"])
        which = next(w for w, (src, _) in TRANSFORM_FLAVOR.items() if src == g.flavor)
        return _ok(inversion_holds_n(g, which), transform=which)
    raise KeyError(name)


def _poisson(name: str, p: dict, rng) -> dict:
    kind = name.split("[")[0]
    if kind == "admissibility":
        b = p["bounds"]
        seq = LazyStructure(p["level"], b.get("discrete_below"), b.get("cocompact_above"))
        t = admissibility_check(tuple(p["z"]), seq)
        return {"status": {Tri.TRUE: PASS, Tri.FALSE: FAIL, Tri.UNKNOWN: UNKNOWN}[t], "detail": {"admissible": t.value}}
    m, X = _model(p)
    seq = standard_splitting(m, p["cut"])
    if kind == "poisson":
        bad = []
        for k in range(p["functions"]):
            s = random_schwartz(X, rng)
            r = poisson_eval(s, seq)
            lhs, rhs = poisson_bruteforce(s, seq)
            if not (r.equal and r.lhs == lhs and r.rhs == rhs):
                bad.append({"function": s.to_literal(), "lhs": r.lhs.to_text(), "rhs": r.rhs.to_text()})
        return _ok(not bad, functions=p["functions"], failures=bad[:1])
    if kind == "refinement":
        zs = lex_window(X)
        pairs = 0
        for z in zs:
            F = total_filtration(X, z)
            for z2 in zs:
                if z2 <= z and total_filtration(X, z2) <= F:
                    a, b = cardinality_identity(seq, z, z2)
                    s = random_schwartz(X, rng, 1, levels=[z])
                    same = indicator_fourier(s, seq).values() == indicator_fourier(refinement_expand(s, z2), seq).values()
                    pairs += 1
                    if a != b or not same:
                        return _ok(False, z=list(z), z2=list(z2), index=str(a), ratio=str(b))
        return _ok(True, pairs=pairs)
    if kind == "schwartz":
        s = SchwartzFunction.from_literal(X, p["terms"])
        r = poisson_eval(s, seq)
        lhs, rhs = poisson_bruteforce(s, seq)
        return _ok(r.equal and r.lhs == lhs and r.rhs == rhs, **r.to_json())
    raise KeyError(name)


RUNNERS: dict[str, Callable] = {"level0": _level0, "category": _category, "smooth": _smooth, "poisson": _poisson}


def run_case(task: tuple[int, str, str, dict]) -> dict:
    seed, suite, name, params = task
    rng = model_seed(seed, suite, name)
    try:
        res = RUNNERS[suite](name, params, rng)
    except CapExceeded as exc:
        res = {"status": UNKNOWN, "detail": {"reason": str(exc)}}
    except Exception as exc:  # reported as a failing case, never swallowed silently
        res = {"status": FAIL, "detail": {"error": f"{type(exc).__name__}: {exc}"}}
    return {"id": name, "status": res["status"], "detail": _jsonable(res.get("detail", {}))}


def _jsonable(obj):
    if isinstance(obj, dict):
        return {str(k): _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, (bool, int, str)) or obj is None:
        return obj
    if isinstance(obj, Fraction):
        return str(obj)
    if hasattr(obj, "to_text"):
        return obj.to_text()
    if hasattr(obj, "value"):
        return _jsonable(obj.value)
    return str(obj)


# --------------------------------------------------------------------------
# reports


@dataclass
class Report:
    scenario: str
    seed: int
    suites: dict = field(default_factory=dict)
    counterexamples: list = field(default_factory=list)
    truncated: bool = False
    version: str = __version__

    @property
    def failures(self) -> int:
        return sum(s["fail"] for s in self.suites.values())

    def to_dict(self) -> dict:
        return {
            "tool": "adelharm",
            "version": self.version,
            "scenario": self.scenario,
            "seed": self.seed,
            "truncated": self.truncated,
            "summary": {name: {k: s[k] for k in (PASS, FAIL, UNKNOWN)} for name, s in self.suites.items()},
            "suites": self.suites,
            "counterexamples": self.counterexamples,
        }


def run_suite(sc: Scenario, suite: str | None = None, seed: int | None = None, workers: int = 1) -> Report:
    suite = suite or sc.suite or "all"
    if suite not in SUITES:
        raise ValueError(f"unknown suite {suite!r}; valid suites are {', '.join(SUITES)}")
    seed = sc.seed if seed is None else seed
    sc = sc.model_copy(update={"seed": seed})
    names = RUN_SUITES if suite == "all" else (suite,)
    tasks = []
    for name in names:
        for s, cid, params in build_cases(sc, name):
            if sc.only is None or cid in sc.only:
                tasks.append((seed, s, cid, params))
    report = Report(sc.name, seed)
    limit = sc.sizes.max_cases
    if limit is not None and len(tasks) > limit:
        tasks = tasks[:limit]
        report.truncated = True
    if workers > 1 and len(tasks) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(run_case, tasks, chunksize=1))
    else:
        results = [run_case(t) for t in tasks]
    for name in names:
        report.suites[name] = {PASS: 0, FAIL: 0, UNKNOWN: 0, "cases": []}
    for (s_seed, s, cid, params), res in zip(tasks, results):
        entry = report.suites[s]
        entry[res["status"]] += 1
        entry["cases"].append(res)
        if res["status"] == FAIL:
            report.counterexamples.append({"suite": s, "case": cid, "detail": res["detail"], "scenario": counterexample_scenario(sc, s, cid)})
    return report


def counterexample_scenario(sc: Scenario, suite: str, case_id: str) -> dict:
    """A scenario that replays exactly one case."""
    data = sc.model_dump(mode="json", exclude_defaults=True)
    data.update({"seed": sc.seed, "suite": suite, "only": [case_id]})
    data.get("sizes", {}).pop("max_cases", None)
    return data


def emit_report(r: Report, fmt: str = "json") -> bytes:
    if fmt == "json":
        return (json.dumps(r.to_dict(), indent=2, sort_keys=False) + "\n").encode()
    if fmt in ("md", "markdown"):
        return _markdown(r).encode()
    raise ValueError(f"unknown format {fmt!r}; expected json or md")


def _markdown(r: Report) -> str:
    d = r.to_dict()
    lines = [f"# adelharm report: {d['scenario']}", "", f"- version: {d['version']}", f"- seed: {d['seed']}"]
    if d["truncated"]:
        lines.append("- **truncated**: case limit reached, report is partial")
    lines += ["", "| suite | pass | fail | unknown |", "|---|---|---|---|"]
    for name, s in d["summary"].items():
        lines.append(f"| {name} | {s[PASS]} | {s[FAIL]} | {s[UNKNOWN]} |")
    for name, s in d["suites"].items():
        bad = [c for c in s["cases"] if c["status"] != PASS]
        if bad:
            lines += ["", f"## {name}", ""]
            for c in bad:
                lines.append(f"- `{c['id']}`: {c['status']} {json.dumps(c['detail'], sort_keys=True)}")
    if d["counterexamples"]:
        lines += ["", "## Counterexamples", ""]
        for c in d["counterexamples"]:
            lines += [f"### {c['suite']} / {c['case']}", "", "```json", json.dumps(c["scenario"], indent=2), "```", ""]
    return "\n".join(lines).rstrip() + "\n"


def load_counterexample(obj: dict) -> Scenario:
    return scenario_from_dict(obj)
