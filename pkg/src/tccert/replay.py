"""Independent replay of a certificate.

Works only from the JSON document: the ring is rebuilt from the recorded
degrees and structure constants, tensor products are multiplied with the
Koszul sign directly, and every bound is recomputed.  Nothing from the
engine is imported, so a bug there cannot vouch for itself.
"""

from __future__ import annotations

import math
from fractions import Fraction

PROMOTING_RULES = ("ATOROIDAL_PROMOTION", "USER_ASSERTION")


class ReplayFailure(Exception):
    pass


class _Scalars:
    def __init__(self, p: int):
        self.p = p

    def parse(self, s):
        if self.p == 0:
            return Fraction(s)
        v = Fraction(s)
        return (v.numerator * pow(v.denominator, -1, self.p)) % self.p

    def norm(self, x):
        return x if self.p == 0 else x % self.p

    def text(self, x) -> str:
        return str(self.norm(x))


class _Ring:
    """A graded ring from a (partial) multiplication table."""

    def __init__(self, cert: dict):
        self.k = _Scalars(cert["field"]["characteristic"])
        self.deg = list(cert["ring"]["degrees"])
        self.top = max(self.deg)
        self.table = {}
        for i, j, vec in cert["ring"]["products"]:
            self.table[(i, j)] = {k: self.k.parse(c) for k, c in vec}

    def basis_mul(self, i, j) -> dict:
        if i == 0:
            return {j: 1}
        if j == 0:
            return {i: 1}
        if self.deg[i] + self.deg[j] > self.top:
            return {}
        try:
            return self.table[(i, j)]
        except KeyError:
            raise ReplayFailure(f"certificate lacks the structure constant for basis pair ({i}, {j})") from None

    def mul(self, x: dict, y: dict) -> dict:
        out = {}
        for i, a in x.items():
            for j, b in y.items():
                for k, c in self.basis_mul(i, j).items():
                    out[k] = self.k.norm(out.get(k, 0) + a * b * c)
        return {k: v for k, v in out.items() if v}

    def pair_mul(self, x: dict, y: dict) -> dict:
        """Product in A (x) A; keys are (i, j) pairs."""
        out = {}
        for (i, j), a in x.items():
            for (i2, j2), b in y.items():
                left = self.basis_mul(i, i2)
                if not left:
                    continue
                right = self.basis_mul(j, j2)
                sign = -1 if (self.deg[j] * self.deg[i2]) % 2 else 1
                for k, c in left.items():
                    for m, d in right.items():
                        out[(k, m)] = self.k.norm(out.get((k, m), 0) + sign * a * b * c * d)
        return {key: v for key, v in out.items() if v}

    def zd(self, x: dict) -> dict:
        out = {}
        for k, c in x.items():
            out[(0, k)] = self.k.norm(out.get((0, k), 0) + c)
            out[(k, 0)] = self.k.norm(out.get((k, 0), 0) - c)
        return {key: v for key, v in out.items() if v}


def _check(cond, msg):
    if not cond:
        raise ReplayFailure(msg)


def _evaluate(R: _Ring, classes: dict, w: dict) -> dict:
    if w["ring"] == "A":
        out = {0: 1}
        for fac in w["factors"]:
            x = classes[fac["class"]]
            for _ in range(fac["power"]):
                out = R.mul(out, x)
        return out
    out = {(0, 0): 1}
    for fac in w["factors"]:
        src = fac["zd"]
        x = classes[src["class"]] if "class" in src else {src["basis"]: 1}
        z = R.zd(x)
        for _ in range(fac["power"]):
            out = R.pair_mul(out, z)
    return out


def _check_witness(R: _Ring, classes: dict, w: dict, where: str):
    value = _evaluate(R, classes, w)
    if w["ring"] == "A":
        stored = {k: R.k.parse(c) for k, c in w.get("value", [])}
    else:
        stored = {(i, j): R.k.parse(c) for i, j, c in w.get("value", [])}
    stored = {k: R.k.norm(v) for k, v in stored.items() if R.k.norm(v)}
    _check(value == stored, f"{where}: recorded witness value does not match the recomputed product")
    if w["expect"] == "zero":
        _check(not value, f"{where}: product expected to vanish is nonzero")
    else:
        _check(bool(value), f"{where}: witness product is zero")
    return value


def replay(cert: dict) -> dict:
    """Re-verify ``cert``; returns a summary or raises ReplayFailure."""
    _check(cert.get("schema") == "tccert.certificate/1", "unknown certificate schema")
    R = _Ring(cert)
    p = R.k.p
    dim = cert["space"]["dimension"]
    classes = {}
    for name, c in cert["classes"].items():
        vec = {k: R.k.norm(R.k.parse(v)) for k, v in c["coordinates"]}
        _check(all(R.deg[k] == 2 for k in vec), f"class {name} is not of degree 2")
        _check(bool(vec), f"class {name} is zero")
        classes[name] = vec

    steps = cert["steps"]
    by_id = {}
    atoroidal = {}  # (space, class) -> step id
    lowers, uppers = [], []
    for pos, s in enumerate(steps):
        sid, rule, out = s["id"], s["rule"], s["outputs"]
        where = f"step {sid} ({rule})"
        _check(sid == pos, f"{where}: step ids must be 0, 1, 2, ...")
        for i in s["inputs"]:
            _check(isinstance(i, int) and 0 <= i < sid, f"{where}: input {i} is not an earlier step")
        ins = [by_id[i] for i in s["inputs"]]

        if rule == "USER_ASSERTION":
            _check(out.get("assertion"), f"{where}: assertion name missing")
            if out["assertion"] == "atoroidal_class":
                atoroidal[(out["space"], out["class"])] = sid
        elif rule == "ASPHERICAL_FROM_2ASPHERICAL":
            _check(any(x["rule"] == "USER_ASSERTION" and x["outputs"]["assertion"] in ("two_aspherical", "aspherical_space")
                       and x["outputs"]["space"] == out["space"] for x in ins),
                   f"{where}: needs an earlier 2-asphericity assertion for the same space")
        elif rule == "ATOROIDAL_PROMOTION":
            if out["mode"] == "hypotheses":
                got = {x["outputs"].get("assertion") for x in ins if x["rule"] == "USER_ASSERTION"
                       and x["outputs"]["space"] == out["space"]}
                asph = any(x["rule"] == "ASPHERICAL_FROM_2ASPHERICAL" and x["outputs"]["class"] == out["class"]
                           and x["outputs"]["space"] == out["space"] for x in ins)
                asph = asph or any(x["rule"] == "USER_ASSERTION" and x["outputs"].get("assertion") == "aspherical_class"
                                   and x["outputs"].get("class") == out["class"] for x in ins)
                _check(asph, f"{where}: class not shown aspherical")
                _check("pi1_no_Z2" in got, f"{where}: pi1_no_Z2 not asserted")
                _check(out["characteristic"] == p, f"{where}: promoted for a different field")
                if p:
                    _check("pi1_torsion_free" in got, f"{where}: torsion-freeness needed in characteristic {p}")
            elif out["mode"] == "pullback":
                _check(len(ins) == 1 and ins[0]["rule"] in PROMOTING_RULES
                       and ins[0]["outputs"].get("class") == out["factor_class"],
                       f"{where}: pullback must cite the factor class being atoroidal")
                _check(ins[0]["rule"] != "USER_ASSERTION" or ins[0]["outputs"]["assertion"] == "atoroidal_class",
                       f"{where}: cited assertion is not atoroidality")
            else:
                raise ReplayFailure(f"{where}: unknown promotion mode {out['mode']!r}")
            atoroidal[(out["space"], out["class"])] = sid
        elif rule == "DIM_UPPER":
            _check(out["dimension"] == dim and out["upper"] == 2 * dim, f"{where}: upper bound is not 2 dim")
            uppers.append(out["upper"])
        elif rule in ("ZD_PRODUCT_LOWER", "WEIGHTED_LOWER", "THM_MAIN", "THM_SPECIAL"):
            lowers.append(_check_lower(R, classes, s, ins, atoroidal, cert, where, dim, p))
        else:
            raise ReplayFailure(f"{where}: unknown rule")
        by_id[sid] = s

    _check(uppers, "no upper-bound step")
    lower, upper = max(lowers, default=0), min(uppers)
    _check(cert["lower"] == lower, f"claimed lower bound {cert['lower']} but steps give {lower}")
    _check(cert["upper"] == upper, f"claimed upper bound {cert['upper']} but steps give {upper}")
    _check(lower <= upper, f"lower bound {lower} exceeds upper bound {upper}")
    _check(cert["exact"] == (lower == upper), "exact flag inconsistent with the bounds")
    return {"lower": lower, "upper": upper, "exact": lower == upper, "steps": len(steps)}


def _top_classes_atoroidal(names, ins, atoroidal, cert, where):
    top = cert["space"]["name"]
    for nm in names:
        sid = atoroidal.get((top, nm))
        _check(sid is not None, f"{where}: class {nm} was never established atoroidal")
        _check(any(x["id"] == sid for x in ins), f"{where}: does not cite the atoroidality of {nm}")


def _check_lower(R, classes, s, ins, atoroidal, cert, where, dim, p) -> int:
    rule, out, ws = s["rule"], s["outputs"], s.get("witnesses", [])
    _check(ws, f"{where}: no witness")
    for w in ws:
        _check_witness(R, classes, w, where)
    if rule == "ZD_PRODUCT_LOWER":
        (w,) = ws
        _check(w["ring"] == "AxA" and all("basis" in f["zd"] for f in w["factors"]), f"{where}: bad witness shape")
        bound = sum(f["power"] for f in w["factors"])
    elif rule == "WEIGHTED_LOWER":
        (w,) = ws
        weight = 0
        used = []
        for f in w["factors"]:
            if "class" in f["zd"]:
                used.append(f["zd"]["class"])
                weight += 2 * f["power"]
            else:
                weight += f["power"]
        _top_classes_atoroidal(used, ins, atoroidal, cert, where)
        bound = weight
    elif rule == "THM_SPECIAL":
        n = out["n"]
        names = out["classes"]
        _check(p != 2, f"{where}: characteristic 2 is excluded")
        _check(2 * n == dim and len(set(names)) == n, f"{where}: needs n = dim/2 distinct classes")
        _top_classes_atoroidal(names, ins, atoroidal, cert, where)
        squares = [w for w in ws if w["ring"] == "A" and w["expect"] == "zero"]
        _check(sorted(w["factors"][0]["class"] for w in squares) == sorted(names)
               and all(w["factors"][0]["power"] == 2 for w in squares), f"{where}: u_j^2 = 0 not shown for all j")
        prod = [w for w in ws if w["ring"] == "A" and w["expect"] == "nonzero"]
        _check(len(prod) == 1 and sorted(f["class"] for f in prod[0]["factors"]) == sorted(names)
               and all(f["power"] == 1 for f in prod[0]["factors"]), f"{where}: product of the classes not shown")
        zz = [w for w in ws if w["ring"] == "AxA"]
        _check(len(zz) == 1 and sorted(f["zd"].get("class") for f in zz[0]["factors"]) == sorted(names)
               and all(f["power"] == 2 for f in zz[0]["factors"]), f"{where}: squared zero-divisor product missing")
        bound = 4 * n
    else:  # THM_MAIN
        n = out["n"]
        nm = out["class"]
        _check(p == 0 or p > 2 * n, f"{where}: characteristic {p} <= 2n")
        _check(2 * n == dim, f"{where}: dimension is not 2n")
        _top_classes_atoroidal([nm], ins, atoroidal, cert, where)
        kinds = sorted((w["ring"], w["factors"][0]["power"]) for w in ws
                       if len(w["factors"]) == 1 and w["expect"] == "nonzero"
                       and (w["factors"][0].get("class") or w["factors"][0].get("zd", {}).get("class")) == nm)
        _check(kinds == [("A", n), ("AxA", 2 * n)], f"{where}: needs u^n != 0 and ubar^(2n) != 0")
        # cross-check the middle bidegree against the binomial formula
        un = _evaluate(R, classes, {"ring": "A", "factors": [{"class": nm, "power": n}]})
        full = _evaluate(R, classes, {"ring": "AxA", "factors": [{"zd": {"class": nm}, "power": 2 * n}]})
        mid = {(i, j): c for (i, j), c in full.items() if R.deg[i] == 2 * n and R.deg[j] == 2 * n}
        coef = (-1) ** n * math.comb(2 * n, n)
        expected = {}
        for i, a in un.items():
            for j, b in un.items():
                v = R.k.norm(coef * a * b)
                if v:
                    expected[(i, j)] = v
        _check(mid == expected, f"{where}: middle bidegree of ubar^(2n) disagrees with (-1)^n C(2n,n) u^n(x)u^n")
        bound = 4 * n
    _check(out["lower"] == bound, f"{where}: claims {out['lower']} but the witness gives {bound}")
    return bound
