"""Scenario records, the per-kind evaluators and the scenario-file runner.

A scenario file is a flat list of records, each introduced by a
``[scenario]`` header and followed by ``key = value`` lines::

    # comment
    [scenario]
    id = order-six
    kind = equiv
    note = Pic^2 of an order-6 torsor
    order = 6
    source = 1
    target_multiple = 2
    expect.equivalent = false

Keys prefixed ``expect.`` are golden values; ``id``, ``kind`` and ``note``
are metadata; everything else is a parameter of the kind.  Comparisons are
exact on the canonical text form of each value.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Callable

from . import chow, grr, kernels, torsor, weights
from .chow import DEFAULT_TABLE, IntersectionTable, format_number
from .errors import FMCalcError


class ScenarioError(FMCalcError):
    """Malformed scenario file or parameters (a usage error)."""


KEY_RE = re.compile(r"^[a-z_][a-z0-9_]*(?:\.[a-z_][a-z0-9_]*)?$")
META_KEYS = ("id", "kind", "note")


@dataclass
class Scenario:
    kind: str
    params: dict[str, str]
    expected: dict[str, str] = field(default_factory=dict)
    id: str = ""
    note: str = ""
    line: int = 0


@dataclass
class Report:
    id: str
    kind: str
    inputs: dict[str, str]
    outputs: dict[str, object]
    expected: dict[str, str] = field(default_factory=dict)
    failures: list[tuple[str, str, str]] = field(default_factory=list)
    warnings: list[str] = field(default_factory=list)
    note: str = ""

    @property
    def passed(self) -> bool:
        return not self.failures

    def to_dict(self) -> dict:
        return {
            "id": self.id,
            "kind": self.kind,
            "inputs": dict(sorted(self.inputs.items())),
            "outputs": {k: json_value(v) for k, v in sorted(self.outputs.items())},
            "expected": dict(sorted(self.expected.items())),
            "passed": self.passed,
            "failures": [
                {"key": k, "expected": e, "got": g} for k, e, g in self.failures
            ],
            "warnings": list(self.warnings),
            "note": self.note,
        }


def format_value(v) -> str:
    if isinstance(v, bool):
        return "true" if v else "false"
    if v is None:
        return "none"
    if isinstance(v, (int, Fraction)):
        return format_number(v)
    return str(v)


def json_value(v):
    if v is None or isinstance(v, (bool, int, str)):
        return v
    if isinstance(v, Fraction):
        return int(v) if v.denominator == 1 else format_number(v)
    return str(v)


def normalize_expected(text: str) -> str:
    t = text.strip()
    if t.lower() in ("true", "false", "none"):
        return t.lower()
    if re.fullmatch(r"-?\d+(?:/-?\d+)?", t):
        return format_number(Fraction(t))
    return t


# ---------------------------------------------------------------- parameters


class Params:
    """Typed access to a kind's string parameters."""

    def __init__(self, raw: dict[str, str]):
        self.raw = raw

    def has(self, key: str) -> bool:
        return key in self.raw

    def integer(self, key: str, default: int | None = None) -> int:
        if key not in self.raw:
            if default is None:
                raise ScenarioError(f"missing required parameter: {key}")
            return default
        try:
            return int(self.raw[key])
        except ValueError:
            raise ScenarioError(f"parameter {key} must be an integer, got {self.raw[key]!r}")

    def flag(self, key: str, default: bool = False) -> bool:
        if key not in self.raw:
            return default
        v = self.raw[key].strip().lower()
        if v in ("true", "yes", "1"):
            return True
        if v in ("false", "no", "0"):
            return False
        raise ScenarioError(f"parameter {key} must be a boolean, got {self.raw[key]!r}")

    def text(self, key: str, default: str | None = None) -> str:
        if key not in self.raw:
            if default is None:
                raise ScenarioError(f"missing required parameter: {key}")
            return default
        return self.raw[key]


# ---------------------------------------------------------------- evaluators


def _aut(p: Params, n: int) -> torsor.AutModel:
    if p.has("aut_list"):
        try:
            units = [int(x) for x in p.text("aut_list").split(",") if x.strip()]
        except ValueError:
            raise ScenarioError(f"aut_list must be comma-separated integers: {p.text('aut_list')!r}")
        return torsor.AutModel.from_list(n, units)
    name = p.text("aut", "pm1")
    if name not in torsor.PRESETS:
        raise ScenarioError(f"unknown aut preset: {name} (choose from {', '.join(torsor.PRESETS)})")
    return torsor.PRESETS[name](n)


def eval_equiv(p: Params, table: IntersectionTable) -> dict:
    G = torsor.TorsorGroup(p.integer("order"))
    source = G.cls(p.integer("source"))
    if p.has("target") == p.has("target_multiple"):
        raise ScenarioError("give exactly one of target, target_multiple")
    if p.has("target"):
        target = G.cls(p.integer("target"))
    else:
        target = torsor.pic_class(source, p.integer("target_multiple"))
    decision = torsor.derived_equivalent(source, target, _aut(p, G.order_n))
    return {
        "equivalent": decision.equivalent,
        "witness_multiplier": decision.multiplier,
        "witness_a": decision.a,
        "target_value": target.value,
        "source_order": torsor.element_order(source),
        "target_order": torsor.element_order(target),
        "witness_valid": torsor.check_witness(source, target, decision) if decision.equivalent else None,
    }


def eval_pic(p: Params, table: IntersectionTable) -> dict:
    C = grr.GerbeyCurve(p.text("curve", "C"))
    d = p.integer("d")
    k = kernels.universal_pic_kernel(C, d)
    tag = kernels.inverse_moduli(C, d, table) if d > 0 else kernels.dual_route_moduli(C, d, table)
    det = kernels.determinant_data(tag.rank, tag.degree, tag.weight, tag.base_curve)
    out = {
        "c1": str(k.c1),
        "kernel_weight": k.weight,
        "moduli": tag.label(),
        "rank": tag.rank,
        "degree": tag.degree,
        "weight": tag.weight,
        "det_degree": det.degree,
        "det_weight": det.weight,
    }
    if tag.note:
        out["signed_form"] = tag.note
    return out


def eval_pushforward(p: Params, table: IntersectionTable) -> dict:
    C = grr.GerbeyCurve(p.text("curve", "C"))
    d = p.integer("d")
    k = kernels.universal_pic_kernel(C, d)
    rank, deg = grr.pushforward_invariants(k.c1, d, table)
    ch = grr.line_bundle_character(k.c1, table)
    td = grr.todd_class([k.source, k.target], table)
    return {
        "rank": rank,
        "degree": deg,
        "c1_squared": grr.c1_squared(k.c1, table),
        "chi": grr.euler_char(1, chow.fiber_restrict(k.c1, 0, table)),
        "todd_trivial": ch.total() * td == ch.total(),
    }


def eval_compose(p: Params, table: IntersectionTable) -> dict:
    C = grr.GerbeyCurve(p.text("curve", "C"))
    k1 = kernels.universal_pic_kernel(C, p.integer("d"))
    k2 = kernels.universal_pic_kernel(k1.target, p.integer("f"))
    k = kernels.convolve(k1, k2, table)
    return {
        "rank": k.rank,
        "degree": k.degree,
        "weight": k.weight,
        "shift": k.shift,
        "c1_cubed": kernels.c1_cubed(k1, k2, table),
        "chi_crosscheck": k.chi_crosscheck,
        "moduli": kernels.composition_moduli(k1, k2, table).label(),
    }


def eval_chow(p: Params, table: IntersectionTable) -> dict:
    out: dict[str, object] = {}
    if p.has("monomial"):
        space = chow.ProductSpace.of_size(p.integer("space", 3))
        gens = [chow.parse_gen(t) for t in p.text("monomial").replace(" ", "").split("*")]
        nf = chow.rewrite_normal_form(gens, space, table)
        out["normal_form"] = "0" if nf is None else str(chow.ChowElement(space, {nf[1]: nf[0]}, table))
        forms = chow.all_normal_forms(gens, space, table)
        out["confluent"] = len(forms) == 1
    if p.has("expr"):
        space = chow.ProductSpace.of_size(p.integer("space", 2))
        e = chow.parse_element(p.text("expr"), space, table) ** p.integer("power", 1)
        out["value"] = str(e)
        out["degree"] = chow.degree(e)
    if p.has("d"):
        d = p.integer("d")
        if p.has("f"):
            S = chow.ProductSpace.of_size(3)
            D = chow.DivisorClass.universal(S, d, 0, 1) + chow.DivisorClass.universal(S, p.integer("f"), 1, 2)
            out["c1_cubed"] = chow.power_degree(D, table)
            out["top_character"] = grr.line_bundle_character(D, table).higher.part(3).degree()
        else:
            S = chow.ProductSpace.of_size(2)
            D = chow.DivisorClass.universal(S, d)
            out["c1_squared"] = chow.power_degree(D, table)
            out["fiber_degree_0"] = chow.fiber_restrict(D, 0, table)
            out["fiber_degree_1"] = chow.fiber_restrict(D, 1, table)
    elif p.has("f"):
        raise ScenarioError("parameter f needs d")
    if not out:
        raise ScenarioError("chow needs one of: d, expr, monomial")
    return out


def eval_rr(p: Params, table: IntersectionTable) -> dict:
    g, e = p.integer("genus"), p.integer("degree")
    out: dict[str, object] = {"chi": grr.euler_char(g, e)}
    if g == 1:
        out["h0"] = grr.gerbey_rr_h0(g, e, p.flag("trivial"))
    return out


def _family(p: Params) -> kernels.FMKernel:
    C = grr.GerbeyCurve(p.text("curve", "C"))
    k = kernels.family_kernel(C, p.integer("d"), p.integer("weight", 1))
    if p.has("target_genus"):
        g = p.integer("target_genus")
        k = kernels.with_target(k, grr.GerbeyCurve(k.target.id, genus=g))
    return k


def eval_simple_check(p: Params, table: IntersectionTable) -> dict:
    k = _family(p)
    same, distinct = kernels.hom_profile(k, True), kernels.hom_profile(k, False)
    left, right = kernels.left_adjoint_kernel(k), kernels.right_adjoint_kernel(k)
    return {
        "strongly_simple": kernels.strongly_simple(k),
        "equivalent": kernels.is_equivalence(k),
        "hom0_same": same[0],
        "hom1_same": same[1],
        "hom_distinct_total": sum(distinct.dims.values()),
        "dual_strongly_simple": kernels.strongly_simple(kernels.dual_kernel(k)),
        "left_adjoint_shift": left.shift,
        "right_adjoint_shift": right.shift,
        "adjoints_agree": left == right,
    }


def _pair(pair) -> str:
    curve, alpha = pair
    return f"({curve}, {'unspecified' if alpha is None else alpha})"


def eval_shadow(p: Params, table: IntersectionTable) -> dict:
    m = p.integer("alpha_order", 1)
    alpha = weights.BrauerClass(m, p.integer("alpha_value", 1 if m > 1 else 0))
    k = _family(p)
    k = kernels.with_source(k, grr.GerbeyCurve(k.source.id, brauer=alpha))
    shadow = kernels.twisted_shadow(k)
    fiber = weights.WeightedObject(1, k.moduli_degree, k.weight, k.source.id)
    twisted = weights.section_restrict(fiber, alpha)
    back = weights.section_lift(twisted, k.weight, alpha)
    return {
        "valid": shadow.valid,
        "source_pair": _pair(shadow.source),
        "target_pair": _pair(shadow.target),
        "fiber_twist": twisted.twist,
        "lift_roundtrip": back == fiber,
    }


@dataclass(frozen=True)
class Kind:
    required: frozenset[str]
    optional: frozenset[str]
    evaluate: Callable[[Params, IntersectionTable], dict]

    @property
    def allowed(self) -> frozenset[str]:
        return self.required | self.optional


def _kind(req, opt, fn) -> Kind:
    return Kind(frozenset(req), frozenset(opt), fn)


KINDS: dict[str, Kind] = {
    "equiv": _kind({"order", "source"}, {"target", "target_multiple", "aut", "aut_list"}, eval_equiv),
    "pic": _kind({"d"}, {"curve"}, eval_pic),
    "pushforward": _kind({"d"}, {"curve"}, eval_pushforward),
    "compose": _kind({"d", "f"}, {"curve"}, eval_compose),
    "chow": _kind(set(), {"d", "f", "expr", "space", "power", "monomial"}, eval_chow),
    "rr": _kind({"genus", "degree"}, {"trivial"}, eval_rr),
    "simple-check": _kind({"d"}, {"curve", "weight", "target_genus"}, eval_simple_check),
    "shadow": _kind({"d"}, {"curve", "weight", "target_genus", "alpha_order", "alpha_value"}, eval_shadow),
}


def check_params(kind: str, params: dict[str, str]) -> Kind:
    if kind not in KINDS:
        raise ScenarioError(f"unknown scenario kind: {kind}")
    entry = KINDS[kind]
    for key in sorted(params):
        if key not in entry.allowed:
            raise ScenarioError(f"unknown key for kind {kind}: {key}")
    missing = sorted(entry.required - set(params))
    if missing:
        raise ScenarioError(f"missing required key for kind {kind}: {missing[0]}")
    return entry


def evaluate(kind: str, params: dict[str, str], table: IntersectionTable = DEFAULT_TABLE) -> dict:
    """Run one kind on string parameters; usage problems raise :class:`ScenarioError`."""
    entry = check_params(kind, params)
    return entry.evaluate(Params(dict(params)), table)


def run_scenario(sc: Scenario, table: IntersectionTable = DEFAULT_TABLE) -> Report:
    check_params(sc.kind, sc.params)
    report = Report(sc.id, sc.kind, dict(sc.params), {}, dict(sc.expected), note=sc.note)
    try:
        report.outputs = evaluate(sc.kind, sc.params, table)
    except ScenarioError:
        raise
    except FMCalcError as exc:
        report.outputs = {"error": type(exc).__name__}
        if "error" not in sc.expected:
            report.failures.append(("error", "none", f"{type(exc).__name__}: {exc}"))
    for key, want in sorted(sc.expected.items()):
        if key not in report.outputs:
            if key != "error" or "error" in report.outputs:
                report.warnings.append(f"expected key {key} is not produced by kind {sc.kind}")
                continue
            report.failures.append((key, normalize_expected(want), "none"))
            continue
        got = format_value(report.outputs[key])
        if normalize_expected(want) != got:
            report.failures.append((key, normalize_expected(want), got))
    return report


# ---------------------------------------------------------------- files


def parse_scenarios(text: str, origin: str = "<string>") -> list[Scenario]:
    records: list[tuple[int, dict[str, str]]] = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if line == "[scenario]":
            records.append((lineno, {}))
            continue
        if line.startswith("["):
            raise ScenarioError(f"{origin}:{lineno}: unknown section header {line}")
        if not records:
            raise ScenarioError(f"{origin}:{lineno}: key before the first [scenario] header")
        if "=" not in line:
            raise ScenarioError(f"{origin}:{lineno}: expected key = value, got {line!r}")
        key, value = (s.strip() for s in line.split("=", 1))
        if not KEY_RE.match(key) or (key.count(".") and not key.startswith("expect.")):
            raise ScenarioError(f"{origin}:{lineno}: malformed key {key!r}")
        fields = records[-1][1]
        if key in fields:
            raise ScenarioError(f"{origin}:{lineno}: duplicate key {key}")
        fields[key] = value

    scenarios = []
    for n, (lineno, fields) in enumerate(records, 1):
        if "kind" not in fields:
            raise ScenarioError(f"{origin}:{lineno}: scenario has no kind")
        params = {k: v for k, v in fields.items() if k not in META_KEYS and not k.startswith("expect.")}
        expected = {k[len("expect."):]: v for k, v in fields.items() if k.startswith("expect.")}
        sc = Scenario(fields["kind"], params, expected, fields.get("id", f"scenario-{n}"),
                      fields.get("note", ""), lineno)
        try:
            check_params(sc.kind, sc.params)
        except ScenarioError as exc:
            raise ScenarioError(f"{origin}:{lineno}: {exc}") from None
        scenarios.append(sc)
    return scenarios


def run_scenario_file(path: str | Path, table: IntersectionTable = DEFAULT_TABLE) -> list[Report]:
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as exc:
        raise ScenarioError(f"cannot read {path}: {exc.strerror}") from None
    return [run_scenario(sc, table) for sc in parse_scenarios(text, str(path))]


def report_to_scenario(report: Report) -> str:
    """Scenario block that re-asserts every output of ``report``."""
    lines = ["[scenario]", f"id = {report.id}", f"kind = {report.kind}"]
    if report.note:
        lines.append(f"note = {report.note}")
    lines += [f"{k} = {v}" for k, v in sorted(report.inputs.items())]
    lines += [f"expect.{k} = {format_value(v)}" for k, v in sorted(report.outputs.items())]
    return "\n".join(lines) + "\n"


def corpus_dir() -> Path:
    return Path(__file__).parent / "corpus"


def summarize(reports: list[Report]) -> dict:
    passed = sum(r.passed for r in reports)
    return {"scenarios": len(reports), "passed": passed, "failed": len(reports) - passed}


__all__ = [
    "KINDS",
    "Report",
    "Scenario",
    "ScenarioError",
    "evaluate",
    "parse_scenarios",
    "report_to_scenario",
    "run_scenario",
    "run_scenario_file",
]
