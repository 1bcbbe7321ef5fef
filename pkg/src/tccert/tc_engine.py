"""Certified bounds on topological complexity (reduced convention, TC(point) = 0).

A certificate is an ordered list of inference steps:

* ``DIM_UPPER``: TC(X) <= 2 dim X.
* ``ZD_PRODUCT_LOWER``: a nonzero product of k zero-divisors gives TC(X) >= k.
* ``WEIGHTED_LOWER``: zero-divisors 1(x)u - u(x)1 of atoroidal degree-2 classes
  have TC-weight 2 and weights add under products, so a nonzero product
  prod ubar_i^{a_i} * prod zbar gives TC(X) >= 2 sum a_i + #z.
* ``THM_MAIN`` / ``THM_SPECIAL``: the two closed-form certificates
  TC(X) = 2 dim X, each with its characteristic gate.
* ``USER_ASSERTION``, ``ASPHERICAL_FROM_2ASPHERICAL``, ``ATOROIDAL_PROMOTION``:
  bookkeeping that turns asserted hypotheses into atoroidal classes.

Every witness product is re-evaluated on a recording wrapper of the ring so
that the certificate carries exactly the structure constants a replay needs.
"""

from __future__ import annotations

import itertools
import json
import math
from dataclasses import dataclass, field as dc_field
from typing import Sequence

from .builders import Space
from .errors import UnknownProductError
from .field_linalg import FieldSpec, binomial_in_field
from .ring import (
    ASSERTED,
    PLAIN,
    PROMOTED,
    PULLBACK,
    AlgebraElement,
    GradedAlgebra,
    MarkedClass,
    bidegree_component,
    power,
    tensor,
    zero_divisor,
)

SCHEMA = "tccert.certificate/1"

DIM_UPPER = "DIM_UPPER"
ZD_PRODUCT_LOWER = "ZD_PRODUCT_LOWER"
WEIGHTED_LOWER = "WEIGHTED_LOWER"
ATOROIDAL_PROMOTION = "ATOROIDAL_PROMOTION"
ASPHERICAL_FROM_2ASPHERICAL = "ASPHERICAL_FROM_2ASPHERICAL"
USER_ASSERTION = "USER_ASSERTION"
THM_MAIN = "THM_MAIN"
THM_SPECIAL = "THM_SPECIAL"
LOWER_RULES = (ZD_PRODUCT_LOWER, WEIGHTED_LOWER, THM_MAIN, THM_SPECIAL)

EXHAUSTIVE_GENERATORS = 8
NODE_BUDGET = 20000
MAX_VECTORS = 5000
MAX_SUBSETS = 2000


@dataclass
class Step:
    id: int
    rule: str
    inputs: list
    outputs: dict
    witnesses: list = dc_field(default_factory=list)

    def to_dict(self) -> dict:
        d = {"id": self.id, "rule": self.rule, "inputs": list(self.inputs), "outputs": self.outputs}
        if self.witnesses:
            d["witnesses"] = self.witnesses
        return d


@dataclass(frozen=True)
class Refusal:
    subject: str
    reason: str

    def to_dict(self) -> dict:
        return {"subject": self.subject, "reason": self.reason}


class Ledger:
    """Accumulates steps for one certificate; assertion steps are shared."""

    def __init__(self):
        self.steps: list[Step] = []
        self.refusals: list[Refusal] = []
        self._assertions: dict = {}

    def add(self, rule: str, inputs: Sequence[int], outputs: dict, witnesses=()) -> Step:
        step = Step(len(self.steps), rule, sorted(set(inputs)), outputs, list(witnesses))
        self.steps.append(step)
        return step

    def assertion(self, scope: str, assertion: str, note: str, subject: str | None = None) -> Step:
        key = (scope, assertion, subject)
        if key not in self._assertions:
            out = {"space": scope, "assertion": assertion, "note": note}
            if subject is not None:
                out["class"] = subject
            self._assertions[key] = self.add(USER_ASSERTION, [], out)
        return self._assertions[key]

    def refuse(self, subject: str, reason: str) -> Refusal:
        r = Refusal(subject, reason)
        self.refusals.append(r)
        return r


@dataclass
class ResolvedClass:
    name: str
    element: AlgebraElement
    atoroidal: bool
    support: int | None  # id of the step establishing atoroidality


# -- scalar and element serialisation ---------------------------------------

def _s(c) -> str:
    return str(c)


def _coords(x: AlgebraElement) -> list:
    return [[k, _s(c)] for k, c in x.items()]


def _pair_coords(x: AlgebraElement) -> list:
    T = x.algebra
    return [[*T.pairs[k], _s(c)] for k, c in x.items()]


# -- upper bound ---------------------------------------------------------------

def upper_bound_dimension(space: Space, ledger: Ledger | None = None) -> Step:
    ledger = ledger or Ledger()
    return ledger.add(DIM_UPPER, [], {"dimension": space.dimension, "upper": 2 * space.dimension})


# -- atoroidality ------------------------------------------------------------

def promote_atoroidal(space: Space, class_name: str, field: FieldSpec, ledger: Ledger | None = None,
                      scope: str | None = None):
    """ATOROIDAL_PROMOTION step for a degree-2 class, or a Refusal naming what is missing."""
    ledger = ledger or Ledger()
    scope = scope or space.name
    subject = f"{scope}: {class_name}"
    mc = space.ring(field).marked[class_name]
    if mc.element.degree != 2:
        return ledger.refuse(subject, "only degree-2 classes can be promoted")
    a = space.assertions
    inputs = []
    if class_name in getattr(a, "aspherical_class_names", ()):
        inputs.append(ledger.assertion(scope, "aspherical_class", a.note("aspherical_class"), class_name).id)
    elif a.two_aspherical:
        flag = "aspherical_space" if a.aspherical_space else "two_aspherical"
        src = ledger.assertion(scope, flag, a.note(flag))
        step = ledger.add(ASPHERICAL_FROM_2ASPHERICAL, [src.id], {"space": scope, "class": class_name})
        inputs.append(step.id)
    else:
        return ledger.refuse(subject, "missing hypothesis two_aspherical: class not known to be aspherical")
    if not a.pi1_no_Z2:
        return ledger.refuse(subject, "missing hypothesis pi1_no_Z2: pi_1 may contain Z^2")
    inputs.append(ledger.assertion(scope, "pi1_no_Z2", a.note("pi1_no_Z2")).id)
    if field.characteristic:
        if not a.pi1_torsion_free:
            return ledger.refuse(subject, "missing hypothesis pi1_torsion_free "
                                          f"(required in characteristic {field.characteristic})")
        inputs.append(ledger.assertion(scope, "pi1_torsion_free", a.note("pi1_torsion_free")).id)
    return ledger.add(ATOROIDAL_PROMOTION, inputs, {
        "space": scope, "class": class_name, "mode": "hypotheses",
        "characteristic": field.characteristic, "tag": PROMOTED,
    })


def resolve_classes(space: Space, field: FieldSpec, ledger: Ledger, scope: str | None = None) -> list:
    """Marked classes of ``space.ring(field)`` with their atoroidality settled."""
    scope = scope or space.name
    R = space.ring(field)
    out = []
    pulled = {}
    if space.kind == "product":
        for i, fac in enumerate(space.factors):
            sub = resolve_classes(fac, field, ledger, scope=f"{scope} / factor {i + 1} ({fac.name})")
            pulled[i] = {rc.name: rc for rc in sub}
        links = space.pullbacks(field)
    else:
        links = {}
    for name in sorted(R.marked):
        mc = R.marked[name]
        if name in links:
            i, fname = links[name]
            frc = pulled[i][fname]
            if frc.atoroidal:
                st = ledger.add(ATOROIDAL_PROMOTION, [frc.support], {
                    "space": scope, "class": name, "mode": "pullback", "factor": i + 1,
                    "factor_class": fname, "tag": PULLBACK,
                })
                out.append(ResolvedClass(name, mc.element, True, st.id))
            else:
                out.append(ResolvedClass(name, mc.element, False, None))
            continue
        if mc.tag == ASSERTED:
            st = ledger.assertion(scope, "atoroidal_class", space.assertions.note("atoroidal_classes"), name)
            out.append(ResolvedClass(name, mc.element, True, st.id))
            continue
        res = promote_atoroidal(space, name, field, ledger, scope)
        if isinstance(res, Step):
            out.append(ResolvedClass(name, mc.element, True, res.id))
        else:
            out.append(ResolvedClass(name, mc.element, False, None))
    return out


# -- product search ----------------------------------------------------------

def _generators(A: GradedAlgebra) -> list:
    return list(range(1, A.size))


def _try_mul(x: AlgebraElement, y: AlgebraElement):
    try:
        return x * y, False
    except UnknownProductError:
        return None, True


def _greedy_extend(P: AlgebraElement, gen_zds: list, budget: int, stats: dict):
    chosen = []
    while len(chosen) < budget:
        for g, zg in gen_zds:
            Q, unknown = _try_mul(P, zg)
            if unknown:
                stats["unknown_skipped"] += 1
                continue
            if not Q.is_zero():
                P = Q
                chosen.append(g)
                break
        else:
            break
    if len(chosen) == budget and budget:
        stats["cap_hit"] = True
    return P, chosen


def zd_product_lower_bound(space: Space, field: FieldSpec, depth: int | None = None,
                           ledger: Ledger | None = None) -> Step:
    """Longest nonzero product of basis zero-divisors 1(x)x - x(x)1 found within ``depth``."""
    ledger = ledger or Ledger()
    A = space.ring(field)
    AA = A.self_tensor
    depth = 2 * space.dimension if depth is None else depth
    gens = _generators(A)
    gen_zds = [(g, zero_divisor(A.basis_element(g), AA)) for g in gens]
    stats = {"unknown_skipped": 0, "cap_hit": False}
    best = (0, [], AA.unit)
    if len(gens) <= EXHAUSTIVE_GENERATORS:
        mode = "exhaustive"
        nodes = 0
        stack = [(AA.unit, 0, [])]
        while stack:
            P, start, seq = stack.pop()
            if len(seq) > best[0]:
                best = (len(seq), seq, P)
            if len(seq) >= depth:
                if depth:
                    stats["cap_hit"] = True
                continue
            children = []
            for idx in range(start, len(gen_zds)):
                nodes += 1
                if nodes > NODE_BUDGET:
                    stats["cap_hit"] = True
                    break
                Q, unknown = _try_mul(P, gen_zds[idx][1])
                if unknown:
                    stats["unknown_skipped"] += 1
                    continue
                if not Q.is_zero():
                    children.append((Q, idx, seq + [gen_zds[idx][0]]))
            stack.extend(reversed(children))
            if best[0] >= depth or nodes > NODE_BUDGET:
                break
    else:
        mode = "greedy"
        P, chosen = _greedy_extend(AA.unit, gen_zds, depth, stats)
        best = (len(chosen), chosen, P)
    length, seq, _ = best
    witness = {"ring": "AxA", "factors": [{"zd": {"basis": g}, "power": 1} for g in seq], "expect": "nonzero"}
    return ledger.add(ZD_PRODUCT_LOWER, [], {
        "lower": length, "search": mode, "depth": depth, "cap_hit": stats["cap_hit"],
        "unknown_skipped": stats["unknown_skipped"],
    }, [witness])


def _exponent_vectors(m: int, total: int):
    """Vectors of m non-negative ints summing to total, lexicographically descending."""
    if m == 0:
        if total == 0:
            yield ()
        return
    for first in range(total, -1, -1):
        for rest in _exponent_vectors(m - 1, total - first):
            yield (first,) + rest


def weighted_lower_bound(space: Space, field: FieldSpec, classes: Sequence[ResolvedClass] | None = None,
                         depth: int | None = None, ledger: Ledger | None = None) -> Step | None:
    """Best 2*sum(a) + #z over nonzero products of atoroidal zero-divisors, greedily extended."""
    ledger = ledger or Ledger()
    if classes is None:
        classes = resolve_classes(space, field, ledger)
    U = [rc for rc in classes if rc.atoroidal and rc.element.degree == 2]
    if not U:
        ledger.refuse("weighted route", "no atoroidal degree-2 classes")
        return None
    A = space.ring(field)
    AA = A.self_tensor
    depth = 2 * space.dimension if depth is None else depth
    upper = 2 * space.dimension
    ubars = [zero_divisor(rc.element, AA) for rc in U]
    gen_zds = [(g, zero_divisor(A.basis_element(g), AA)) for g in _generators(A)]
    stats = {"unknown_skipped": 0, "cap_hit": False, "vectors": 0}
    pow_cache = {}

    def ubar_power(i, a):
        key = (i, a)
        if key not in pow_cache:
            pow_cache[key] = AA.unit if a == 0 else ubar_power(i, a - 1) * ubars[i]
        return pow_cache[key]

    best = None
    for s in range(min(space.dimension, depth), 0, -1):
        if best is not None and 2 * s + (depth - s) <= best[0]:
            break
        for vec in _exponent_vectors(len(U), s):
            stats["vectors"] += 1
            if stats["vectors"] > MAX_VECTORS:
                stats["cap_hit"] = True
                break
            try:
                P = AA.unit
                for i, a in enumerate(vec):
                    if a:
                        P = P * ubar_power(i, a)
                        if P.is_zero():
                            break
            except UnknownProductError:
                stats["unknown_skipped"] += 1
                continue
            if P.is_zero():
                continue
            P, ext = _greedy_extend(P, gen_zds, depth - s, stats)
            bound = 2 * s + len(ext)
            if best is None or bound > best[0]:
                best = (bound, vec, ext)
            if best[0] >= upper:
                break
        if stats["cap_hit"] or (best is not None and best[0] >= upper):
            break
    if best is None:
        ledger.refuse("weighted route", "every product of atoroidal zero-divisors vanishes or needs UNKNOWN constants")
        return None
    bound, vec, ext = best
    factors = [{"zd": {"class": U[i].name}, "power": a} for i, a in enumerate(vec) if a]
    factors += [{"zd": {"basis": g}, "power": 1} for g in ext]
    inputs = [U[i].support for i, a in enumerate(vec) if a]
    return ledger.add(WEIGHTED_LOWER, inputs, {
        "lower": bound, "rule": "wgt-rule (generic)",
        "exponents": {U[i].name: a for i, a in enumerate(vec) if a},
        "extension": len(ext), "depth": depth, "cap_hit": stats["cap_hit"],
        "unknown_skipped": stats["unknown_skipped"],
    }, [{"ring": "AxA", "factors": factors, "expect": "nonzero"}])


# -- named theorems --------------------------------------------------------

def _class_product(elems: Sequence[AlgebraElement]) -> AlgebraElement:
    out = elems[0].algebra.unit
    for e in elems:
        out = out * e
    return out


def _theorem_special(space, field, U, ledger):
    n = space.dimension // 2
    p = field.characteristic
    if p == 2:
        ledger.refuse(THM_SPECIAL, "characteristic(F) = 2 (hypothesis requires characteristic != 2)")
        return None
    if len(U) < n:
        ledger.refuse(THM_SPECIAL, f"needs {n} atoroidal degree-2 classes, have {len(U)}")
        return None
    AA = space.ring(field).self_tensor
    for count, combo in enumerate(itertools.combinations(U, n)):
        if count >= MAX_SUBSETS:
            break
        try:
            if any(not (rc.element * rc.element).is_zero() for rc in combo):
                continue
            if _class_product([rc.element for rc in combo]).is_zero():
                continue
            if _class_product([power(zero_divisor(rc.element, AA), 2) for rc in combo]).is_zero():
                continue
        except UnknownProductError:
            continue
        names = [rc.name for rc in combo]
        witnesses = [{"ring": "A", "factors": [{"class": nm, "power": 2}], "expect": "zero"} for nm in names]
        witnesses.append({"ring": "A", "factors": [{"class": nm, "power": 1} for nm in names], "expect": "nonzero"})
        witnesses.append({"ring": "AxA", "factors": [{"zd": {"class": nm}, "power": 2} for nm in names],
                          "expect": "nonzero"})
        return ledger.add(THM_SPECIAL, [rc.support for rc in combo], {
            "n": n, "classes": names, "lower": 4 * n, "characteristic": p,
        }, witnesses)
    ledger.refuse(THM_SPECIAL, f"no {n} atoroidal classes with u_j^2 = 0 and nonzero product u_1...u_n")
    return None


def _theorem_main(space, field, U, ledger):
    n = space.dimension // 2
    p = field.characteristic
    if 0 < p <= 2 * n:
        ledger.refuse(THM_MAIN, f"characteristic {p} <= 2n = {2 * n} (hypothesis requires 0 or > 2n)")
        return None
    AA = space.ring(field).self_tensor
    for rc in U:
        try:
            un = power(rc.element, n)
            if un.is_zero():
                continue
            full = power(zero_divisor(rc.element, AA), 2 * n)
            if full.is_zero():
                continue
            expected = AA.pure(un, un).scale((-1) ** n * math.comb(2 * n, n))
            component_ok = bidegree_component(full, 2 * n, 2 * n) == bidegree_component(expected, 2 * n, 2 * n)
        except UnknownProductError:
            continue
        witnesses = [
            {"ring": "A", "factors": [{"class": rc.name, "power": n}], "expect": "nonzero"},
            {"ring": "AxA", "factors": [{"zd": {"class": rc.name}, "power": 2 * n}], "expect": "nonzero"},
        ]
        return ledger.add(THM_MAIN, [rc.support], {
            "n": n, "class": rc.name, "lower": 4 * n, "characteristic": p,
            "binomial": _s(binomial_in_field(2 * n, n, field)), "component_check": component_ok,
        }, witnesses)
    ledger.refuse(THM_MAIN, f"no atoroidal class u with u^{n} != 0")
    return None


def _theorems(space, field, U, ledger):
    d = space.dimension
    if d == 0 or d % 2:
        for rule in (THM_SPECIAL, THM_MAIN):
            ledger.refuse(rule, f"dimension {d} is not of the form 2n with n >= 1")
        return []
    if not U:
        for rule in (THM_SPECIAL, THM_MAIN):
            ledger.refuse(rule, "no atoroidal degree-2 classes")
        return []
    return [s for s in (_theorem_special(space, field, U, ledger), _theorem_main(space, field, U, ledger)) if s]


# -- witness tracing -----------------------------------------------------------

class _TracingAlgebra(GradedAlgebra):
    """Delegates every product to ``base`` and records what was read."""

    def __init__(self, base: GradedAlgebra):
        self.base = base
        self.reads = {}
        super().__init__(base.field, base.degrees, check=False)

    def _is_lazy(self):
        return True

    def label(self, i):
        return self.base.label(i)

    def basis_product(self, i, j):
        if i == 0 or j == 0 or self.degrees[i] + self.degrees[j] > self.top:
            return super().basis_product(i, j)
        try:
            out = self.base.basis_product(i, j)
        except UnknownProductError:
            self.reads[(i, j)] = None
            raise
        self.reads[(i, j)] = dict(out)
        return out


def evaluate_witness(A: GradedAlgebra, AA, classes: dict, witness: dict) -> AlgebraElement:
    """Multiply out a witness description left to right in A or A (x) A."""
    # One factor at a time, so the constants read are exactly those a replay reads.
    if witness["ring"] == "A":
        out = A.unit
        for fac in witness["factors"]:
            x = A.element(classes[fac["class"]])
            for _ in range(fac["power"]):
                out = out * x
        return out
    out = AA.unit
    for fac in witness["factors"]:
        src = fac["zd"]
        x = A.element(classes[src["class"]]) if "class" in src else A.basis_element(src["basis"])
        z = zero_divisor(x, AA)
        for _ in range(fac["power"]):
            out = out * z
    return out


# -- certificate -------------------------------------------------------------------

@dataclass
class Certificate:
    space_name: str
    space_id: str
    space_kind: str
    field: FieldSpec
    dimension: int
    steps: list
    refusals: list
    lower: int
    upper: int
    route: str
    ring_degrees: tuple
    ring_products: list
    classes: dict

    @property
    def exact(self) -> bool:
        return self.lower == self.upper

    def to_dict(self) -> dict:
        return {
            "schema": SCHEMA,
            "space": {"name": self.space_name, "id": self.space_id, "kind": self.space_kind,
                      "dimension": self.dimension},
            "field": {"characteristic": self.field.characteristic},
            "ring": {"degrees": list(self.ring_degrees), "products": self.ring_products},
            "classes": self.classes,
            "steps": [s.to_dict() for s in self.steps],
            "refusals": [r.to_dict() for r in self.refusals],
            "lower": self.lower,
            "upper": self.upper,
            "exact": self.exact,
            "route": self.route,
        }

    def dumps(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True, indent=2, ensure_ascii=False) + "\n"


def certify(space: Space, field: FieldSpec, depth: int | None = None) -> Certificate:
    ledger = Ledger()
    up = upper_bound_dimension(space, ledger)
    classes = resolve_classes(space, field, ledger)
    zd = zd_product_lower_bound(space, field, depth, ledger)
    wt = weighted_lower_bound(space, field, classes, depth, ledger)
    U = [rc for rc in classes if rc.atoroidal and rc.element.degree == 2]
    thms = _theorems(space, field, U, ledger)

    lowers = [s for s in ledger.steps if s.rule in LOWER_RULES]
    lower = max(s.outputs["lower"] for s in lowers)
    upper = up.outputs["upper"]
    route = next((s.rule for s in thms if s.outputs["lower"] == lower), None)
    if route is None:
        route = WEIGHTED_LOWER if wt is not None and wt.outputs["lower"] == lower else ZD_PRODUCT_LOWER

    # Re-evaluate every witness on a recording copy of the ring.
    A = space.ring(field)
    tracer = _TracingAlgebra(A)
    TT = tensor(tracer, tracer)
    coords = {rc.name: rc.element.as_dict() for rc in classes}
    for step in ledger.steps:
        for w in step.witnesses:
            value = evaluate_witness(tracer, TT, coords, w)
            if (w["expect"] == "zero") != value.is_zero():
                raise AssertionError(f"witness of step {step.id} does not replay")
            w["value"] = _pair_coords(value) if w["ring"] == "AxA" else _coords(value)
    products = [[i, j, sorted([k, _s(c)] for k, c in v.items())]
                for (i, j), v in sorted(tracer.reads.items()) if v is not None]
    class_table = {rc.name: {"degree": 2, "coordinates": _coords(rc.element), "atoroidal": rc.atoroidal,
                             "support": rc.support} for rc in classes}
    return Certificate(space.name, space.space_id, space.kind, field, space.dimension, ledger.steps,
                       ledger.refusals, lower, upper, route, A.degrees, products, class_table)
