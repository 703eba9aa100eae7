"""Potential bases over list lengths: binomial C(n,d), Stirling S(n+1,d+1) and their products.

Annotations are dense coefficient vectors over a finite, downward-closed prefix of a basis.
The constant function is never part of a basis; constant potential lives in the turnstile.
Coefficients are usually Fractions but may be any values supporting +, - and scalar *,
which lets constraint generation reuse the shift and delta maps symbolically.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property, lru_cache
from math import comb, factorial
from typing import Any, Iterable, Sequence, Union

from .ast import ListV, PairV, SimpleType, TBase, TList, TPair, Value

KINDS = ("binomial", "stirling", "mixed")

Index = Union[int, tuple[int, int]]


@dataclass(frozen=True)
class BasisConfig:
    """Which basis to use and how much of it.

    `poly_degree` bounds k in C(n,k) (binomial, mixed); `exp_degree` bounds b in S(n+1,b+1)
    (stirling, mixed).  Degrees irrelevant to the kind are ignored.
    """

    kind: str
    poly_degree: int = 1
    exp_degree: int = 1
    demotion: bool = False

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"unknown basis kind {self.kind!r}; expected one of {', '.join(KINDS)}")
        if self.kind in ("binomial", "mixed") and self.poly_degree < 1:
            raise ValueError("poly_degree must be at least 1")
        if self.kind in ("stirling", "mixed") and self.exp_degree < 1:
            raise ValueError("exp_degree must be at least 1")
        if self.demotion and self.kind != "mixed":
            raise ValueError("demotion is only available for the mixed basis")

    @cached_property
    def indices(self) -> tuple[Index, ...]:
        """Basis indices in growth order (mixed: b-major, then k)."""
        if self.kind == "binomial":
            return tuple(range(1, self.poly_degree + 1))
        if self.kind == "stirling":
            return tuple(range(1, self.exp_degree + 1))
        return tuple(
            (b, k) for b in range(self.exp_degree + 1) for k in range(self.poly_degree + 1) if (b, k) != (0, 0)
        )

    @cached_property
    def position(self) -> dict[Index, int]:
        return {idx: i for i, idx in enumerate(self.indices)}

    @property
    def dim(self) -> int:
        return len(self.indices)

    def describe(self) -> str:
        if self.kind == "binomial":
            return f"binomial K={self.poly_degree}"
        if self.kind == "stirling":
            return f"stirling B={self.exp_degree}"
        return f"mixed B={self.exp_degree} K={self.poly_degree}" + (" demotion" if self.demotion else "")

    def to_json(self) -> dict:
        out: dict[str, Any] = {"kind": self.kind}
        if self.kind != "stirling":
            out["poly_degree"] = self.poly_degree
        if self.kind != "binomial":
            out["exp_degree"] = self.exp_degree
        if self.kind == "mixed":
            out["demotion"] = self.demotion
        return out

    @classmethod
    def from_json(cls, d: dict) -> "BasisConfig":
        return cls(d["kind"], d.get("poly_degree", 1), d.get("exp_degree", 1), d.get("demotion", False))


# ---------------------------------------------------------------- combinatorics


_STIRLING_ROWS: list[tuple[int, ...]] = [(1,)]


def _stirling_row(n: int) -> tuple[int, ...]:
    rows = _STIRLING_ROWS
    while len(rows) <= n:
        prev = rows[-1]
        m = len(rows)
        rows.append((0,) + tuple(k * (prev[k] if k < m else 0) + prev[k - 1] for k in range(1, m + 1)))
    return rows[n]


def stirling2(n: int, k: int) -> int:
    """Stirling number of the second kind: partitions of an n-set into k nonempty blocks."""
    if n < 0 or k < 0:
        raise ValueError("stirling2 needs natural arguments")
    if k > n:
        return 0
    return _stirling_row(n)[k]


def basis_value(cfg: BasisConfig, idx: Index, n: int) -> int:
    if idx not in cfg.position:
        raise ValueError(f"index {idx} is not in the {cfg.describe()} basis")
    if cfg.kind == "binomial":
        return comb(n, idx)
    if cfg.kind == "stirling":
        return stirling2(n + 1, idx + 1)
    b, k = idx
    return comb(n, k) * stirling2(n + 1, b + 1)


# ---------------------------------------------------------------- annotations


@dataclass(frozen=True)
class Annotation:
    cfg: BasisConfig
    coeffs: tuple

    def __post_init__(self):
        if len(self.coeffs) != self.cfg.dim:
            raise ValueError(f"annotation has {len(self.coeffs)} coefficients, {self.cfg.describe()} needs {self.cfg.dim}")

    @classmethod
    def zero(cls, cfg: BasisConfig) -> "Annotation":
        return cls(cfg, (Fraction(0),) * cfg.dim)

    @classmethod
    def of(cls, cfg: BasisConfig, values: Iterable) -> "Annotation":
        return cls(cfg, tuple(Fraction(v) for v in values))

    @classmethod
    def from_map(cls, cfg: BasisConfig, m: dict) -> "Annotation":
        unknown = set(m) - set(cfg.indices)
        if unknown:
            raise ValueError(f"indices {sorted(unknown)} are not in the {cfg.describe()} basis")
        return cls(cfg, tuple(Fraction(m.get(i, 0)) for i in cfg.indices))

    def __getitem__(self, idx: Index):
        pos = self.cfg.position.get(idx)
        return Fraction(0) if pos is None else self.coeffs[pos]

    def __add__(self, other: "Annotation") -> "Annotation":
        return add(self, other)

    def items(self):
        return zip(self.cfg.indices, self.coeffs)

    def map(self, fn) -> "Annotation":
        return Annotation(self.cfg, tuple(fn(c) for c in self.coeffs))

    def __str__(self) -> str:
        return "{" + ",".join(_fmt(c) for c in self.coeffs) + "}"

    def to_json(self) -> dict:
        coeffs = []
        for idx, v in self.items():
            entry = {"b": idx[0], "k": idx[1]} if self.cfg.kind == "mixed" else {"d": idx}
            entry["v"] = str(v)
            coeffs.append(entry)
        return {"basis": self.cfg.kind, "coeffs": coeffs}

    @classmethod
    def from_json(cls, cfg: BasisConfig, d: dict) -> "Annotation":
        if d.get("basis") != cfg.kind:
            raise ValueError(f"annotation basis {d.get('basis')!r} does not match {cfg.kind!r}")
        m = {((c["b"], c["k"]) if cfg.kind == "mixed" else c["d"]): Fraction(c["v"]) for c in d["coeffs"]}
        return cls.from_map(cfg, m)


def _fmt(c) -> str:
    return str(c) if not isinstance(c, Fraction) or c.denominator != 1 else str(c.numerator)


def add(p: Annotation, q: Annotation) -> Annotation:
    if p.cfg != q.cfg:
        raise ValueError("cannot add annotations over different bases")
    return Annotation(p.cfg, tuple(a + b for a, b in zip(p.coeffs, q.coeffs)))


@lru_cache(maxsize=None)
def shift_matrix(cfg: BasisConfig) -> tuple[tuple[int, ...], ...]:
    """Row i gives the shifted coefficient at indices[i] as a combination of the original ones."""
    pos = cfg.position
    rows = []
    for idx in cfg.indices:
        row = [0] * cfg.dim

        def put(j: Index, w: int) -> None:
            if j in pos:
                row[pos[j]] += w

        if cfg.kind == "binomial":
            put(idx, 1)
            put(idx + 1, 1)
        elif cfg.kind == "stirling":
            put(idx, idx + 1)
            put(idx + 1, 1)
        else:
            b, k = idx
            put((b, k), b + 1)
            put((b, k + 1), b + 1)
            put((b + 1, k), 1)
            put((b + 1, k + 1), 1)
        rows.append(tuple(row))
    return tuple(rows)


@lru_cache(maxsize=None)
def delta_vector(cfg: BasisConfig) -> tuple[int, ...]:
    """Weights of the constant released when a list of length n+1 loses its head: the value at n=1."""
    return tuple(basis_value(cfg, idx, 1) for idx in cfg.indices)


def _combine(weights: Sequence[int], coeffs: Sequence):
    total: Any = 0
    for w, c in zip(weights, coeffs):
        if w:
            total = total + (c if w == 1 else w * c)
    return total if not isinstance(total, int) else Fraction(total)


def shift(p: Annotation) -> Annotation:
    return Annotation(p.cfg, tuple(_combine(row, p.coeffs) for row in shift_matrix(p.cfg)))


def delta(p: Annotation):
    return _combine(delta_vector(p.cfg), p.coeffs)


def phi(n: int, p: Annotation) -> Fraction:
    return sum((c * basis_value(p.cfg, idx, n) for idx, c in p.items()), Fraction(0))


def in_domain(p: Annotation) -> bool:
    cfg = p.cfg
    if not cfg.demotion:
        return all(c >= 0 for c in p.coeffs)
    for (b, k), c in p.items():
        if b >= 1 and c < 0:
            return False
        if b == 0 and c + p[(1, 0)] < 0:
            return False
    return True


def domain_generators(cfg: BasisConfig) -> list[Annotation]:
    """Extreme rays of the cone of admissible annotations."""
    unit = lambda idx: Annotation.from_map(cfg, {idx: 1})  # noqa: E731
    if not cfg.demotion:
        return [unit(i) for i in cfg.indices]
    gens = [unit(i) for i in cfg.indices if i != (1, 0)]
    m = {(1, 0): 1}
    m.update({(0, k): -1 for k in range(1, cfg.poly_degree + 1)})
    gens.append(Annotation.from_map(cfg, m))
    return gens


def demote(p: Annotation, s) -> Annotation:
    """Move s units of S(n+1,2) potential into one unit of every C(n,k)."""
    cfg = p.cfg
    if not cfg.demotion:
        raise ValueError("demotion is not enabled for this basis")
    s = Fraction(s)
    if s < 0:
        raise ValueError("demotion amount must be nonnegative")
    m = dict(p.items())
    m[(1, 0)] -= s
    for k in range(1, cfg.poly_degree + 1):
        m[(0, k)] += s
    out = Annotation.from_map(cfg, m)
    if not in_domain(out):
        raise ValueError(f"demoting {s} from {p} leaves the admissible domain")
    return out


# ---------------------------------------------------------------- annotated types


@dataclass(frozen=True)
class ABase:
    t: TBase

    def __str__(self) -> str:
        return str(self.t)


@dataclass(frozen=True)
class AList:
    elem: "AnnotatedType"
    ann: Annotation

    def __str__(self) -> str:
        return f"L^{self.ann}({self.elem})"


@dataclass(frozen=True)
class APair:
    left: "AnnotatedType"
    right: "AnnotatedType"

    def __str__(self) -> str:
        left = f"({self.left})" if isinstance(self.left, APair) else str(self.left)
        return f"{left} × {self.right}"


AnnotatedType = Union[ABase, AList, APair]


def erase(t: AnnotatedType) -> SimpleType:
    if isinstance(t, ABase):
        return t.t
    if isinstance(t, AList):
        return TList(erase(t.elem))
    return TPair(erase(t.left), erase(t.right))


def annotate(t: SimpleType, make) -> AnnotatedType:
    """Annotate every list in `t`, calling `make()` once per list occurrence, outermost first."""
    if isinstance(t, TList):
        ann = make()
        return AList(annotate(t.elem, make), ann)
    if isinstance(t, TPair):
        return APair(annotate(t.left, make), annotate(t.right, make))
    return ABase(t)


def annotations(t: AnnotatedType) -> list[Annotation]:
    if isinstance(t, AList):
        return [t.ann] + annotations(t.elem)
    if isinstance(t, APair):
        return annotations(t.left) + annotations(t.right)
    return []


def map_annotations(t: AnnotatedType, fn) -> AnnotatedType:
    if isinstance(t, AList):
        return AList(map_annotations(t.elem, fn), fn(t.ann))
    if isinstance(t, APair):
        return APair(map_annotations(t.left, fn), map_annotations(t.right, fn))
    return t


def carries_potential(t: AnnotatedType) -> bool:
    if isinstance(t, AList):
        return any(t.ann.coeffs) or carries_potential(t.elem)
    if isinstance(t, APair):
        return carries_potential(t.left) or carries_potential(t.right)
    return False


def value_potential(v: Value, t: AnnotatedType) -> Fraction:
    """Potential stored in `v` at type `t`, unrolling one list cell at a time."""
    if not carries_potential(t):
        return Fraction(0)
    if isinstance(t, APair):
        if not isinstance(v, PairV):
            raise ValueError(f"value {v} does not match {t}")
        return value_potential(v.left, t.left) + value_potential(v.right, t.right)
    if not isinstance(v, ListV):
        raise ValueError(f"value {v} does not match {t}")
    total = Fraction(0)
    p = t.ann
    for item in v.items:
        total += delta(p) + value_potential(item, t.elem)
        p = shift(p)
    return total


def type_to_json(t: AnnotatedType) -> dict:
    if isinstance(t, ABase):
        return {"kind": "base", "name": t.t.name}
    if isinstance(t, AList):
        return {"kind": "list", "ann": t.ann.to_json(), "elem": type_to_json(t.elem)}
    return {"kind": "pair", "left": type_to_json(t.left), "right": type_to_json(t.right)}


def type_from_json(cfg: BasisConfig, d: dict) -> AnnotatedType:
    if d["kind"] == "base":
        return ABase(TBase(d["name"]))
    if d["kind"] == "list":
        return AList(type_from_json(cfg, d["elem"]), Annotation.from_json(cfg, d["ann"]))
    return APair(type_from_json(cfg, d["left"]), type_from_json(cfg, d["right"]))


# ---------------------------------------------------------------- closed forms


def _falling_poly(k: int) -> list[Fraction]:
    """Coefficients (ascending powers of n) of C(n,k) as a polynomial."""
    poly = [Fraction(1)]
    for i in range(k):
        nxt = [Fraction(0)] * (len(poly) + 1)
        for d, c in enumerate(poly):
            nxt[d + 1] += c
            nxt[d] -= i * c
        poly = nxt
    return [c / factorial(k) for c in poly]


def _stirling_exp(b: int) -> dict[int, Fraction]:
    """S(n+1,b+1) as a combination of base^n terms."""
    return {i + 1: Fraction((-1) ** (b - i) * comb(b, i), factorial(b)) for i in range(b + 1)}


@lru_cache(maxsize=None)
def basis_terms(cfg: BasisConfig, idx: Index) -> tuple[tuple[tuple[int, int], Fraction], ...]:
    """Basis function as ((base, degree), coeff) terms meaning coeff·n^degree·base^n."""
    if cfg.kind == "binomial":
        k, exps = idx, {1: Fraction(1)}
    elif cfg.kind == "stirling":
        k, exps = 0, _stirling_exp(idx)
    else:
        b, k = idx
        exps = _stirling_exp(b)
    out: dict[tuple[int, int], Fraction] = {}
    for d, pc in enumerate(_falling_poly(k)):
        for base, ec in exps.items():
            if pc and ec:
                out[(base, d)] = out.get((base, d), Fraction(0)) + pc * ec
    return tuple(sorted((key, c) for key, c in out.items() if c))


@dataclass(frozen=True)
class ClosedForm:
    """Sum of coeff·var^degree·base^var terms plus a constant."""

    terms: dict = field(default_factory=dict)  # (var, base, degree) -> Fraction
    const: Fraction = Fraction(0)

    def evaluate(self, env: Union[int, dict[str, int]]) -> Fraction:
        total = self.const
        for (var, base, deg), c in self.terms.items():
            n = env if isinstance(env, int) else env[var]
            total += c * n**deg * base**n
        return total

    @property
    def variables(self) -> list[str]:
        seen: list[str] = []
        for var, _, _ in self.terms:
            if var not in seen:
                seen.append(var)
        return seen

    def __add__(self, other: "ClosedForm") -> "ClosedForm":
        terms = dict(self.terms)
        for key, c in other.terms.items():
            terms[key] = terms.get(key, Fraction(0)) + c
        return ClosedForm({k: c for k, c in terms.items() if c}, self.const + other.const)

    def __str__(self) -> str:
        order = {v: i for i, v in enumerate(self.variables)}
        keys = sorted(self.terms, key=lambda t: (order[t[0]], -t[1], -t[2]))
        parts = [(self.terms[k], _monomial(*k)) for k in keys]
        if self.const:
            parts.append((self.const, ""))
        if not parts:
            return "0"
        out = []
        for i, (c, mono) in enumerate(parts):
            mag = abs(c)
            if not mono:
                body = _fmt(mag)
            elif mag == 1:
                body = mono
            else:
                body = (_fmt(mag) if mag.denominator == 1 else f"({mag})") + "·" + mono
            sign = "−" if c < 0 else "+"
            out.append((f"{sign}" if sign == "−" else "") + body if i == 0 else f" {sign} {body}")
        return "".join(out)


def _monomial(var: str, base: int, deg: int) -> str:
    parts = []
    if deg:
        parts.append(var if deg == 1 else f"{var}^{deg}")
    if base != 1:
        parts.append(f"{base}^{var}")
    return "·".join(parts)


def closed_form(p: Annotation, q=Fraction(0), var: str = "n") -> ClosedForm:
    """Closed form of q + phi(var, p)."""
    terms: dict = {}
    const = Fraction(q)
    for idx, c in p.items():
        if not c:
            continue
        for (base, deg), t in basis_terms(p.cfg, idx):
            if base == 1 and deg == 0:
                const += c * t
            else:
                key = (var, base, deg)
                terms[key] = terms.get(key, Fraction(0)) + c * t
    return ClosedForm({k: v for k, v in terms.items() if v}, const)
