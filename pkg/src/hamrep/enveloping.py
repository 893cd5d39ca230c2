"""Universal enveloping algebra in PBW normal form.

Monomials are ordered in the fixed basis order of the parent algebra.  Internally
a monomial is a nondecreasing tuple of generator indices ("sorted word"); the
public ``terms`` mapping uses exponent vectors.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable

from . import kernels
from .kernels import RewriteLimit  # noqa: F401  (re-export)
from .liealg import LieAlgebraSpec, builtin_algebra, canonical_family


MAX_REWRITES = 10**6


def _exps_to_word(e) -> tuple:
    w = []
    for i, k in enumerate(e):
        w.extend([i] * k)
    return tuple(w)


def _word_to_exps(w, dim) -> tuple:
    e = [0] * dim
    for i in w:
        e[i] += 1
    return tuple(e)


class EnvElement:
    """Finite combination of PBW monomials with Fraction coefficients."""

    __slots__ = ("alg", "_w")

    def __init__(self, alg: LieAlgebraSpec, words: dict | None = None):
        self.alg = alg
        self._w = {w: Fraction(c) for w, c in (words or {}).items() if c != 0}

    # construction
    @classmethod
    def from_terms(cls, alg, terms: dict) -> "EnvElement":
        out = {}
        for e, c in terms.items():
            if len(e) != alg.dim:
                raise ValueError("exponent vector length must equal dim")
            w = _exps_to_word(e)
            out[w] = out.get(w, 0) + Fraction(c)
        return cls(alg, out)

    @classmethod
    def scalar(cls, alg, c=1) -> "EnvElement":
        return cls(alg, {(): Fraction(c)})

    @classmethod
    def gen(cls, alg, label) -> "EnvElement":
        return cls(alg, {(alg.idx(label),): Fraction(1)})

    @property
    def terms(self) -> dict:
        return {_word_to_exps(w, self.alg.dim): c for w, c in self._w.items()}

    @property
    def words(self) -> dict:
        return dict(self._w)

    def degree(self) -> int:
        return max((len(w) for w in self._w), default=0)

    def is_zero(self) -> bool:
        return not self._w

    def scalar_part(self) -> Fraction:
        return self._w.get((), Fraction(0))

    # arithmetic
    def _coerce(self, other):
        if isinstance(other, EnvElement):
            if other.alg is not self.alg:
                raise ValueError("elements live over different algebras")
            return other
        return EnvElement.scalar(self.alg, other)

    def __add__(self, other):
        other = self._coerce(other)
        out = dict(self._w)
        for w, c in other._w.items():
            out[w] = out.get(w, 0) + c
        return EnvElement(self.alg, out)

    __radd__ = __add__

    def __neg__(self):
        return EnvElement(self.alg, {w: -c for w, c in self._w.items()})

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __mul__(self, other):
        if isinstance(other, EnvElement):
            return env_multiply(self.alg, self, other)
        c = Fraction(other)
        return EnvElement(self.alg, {w: c * v for w, v in self._w.items()})

    def __rmul__(self, other):
        c = Fraction(other)
        return EnvElement(self.alg, {w: c * v for w, v in self._w.items()})

    def __pow__(self, k: int):
        out = EnvElement.scalar(self.alg, 1)
        for _ in range(k):
            out = out * self
        return out

    def __eq__(self, other):
        if not isinstance(other, EnvElement):
            if self.is_zero() and other == 0:
                return True
            other = self._coerce(other)
        return self._w == other._w

    def __hash__(self):
        return hash(frozenset(self._w.items()))

    def __repr__(self):
        return f"EnvElement({format_element(self)})"


def format_element(e: EnvElement) -> str:
    if e.is_zero():
        return "0"
    lab = e.alg.basis
    parts = []
    for w in sorted(e._w, key=lambda w: (len(w), w)):
        c = e._w[w]
        mono = []
        i = 0
        while i < len(w):
            j = i
            while j < len(w) and w[j] == w[i]:
                j += 1
            k = j - i
            mono.append(lab[w[i]] + (f"^{k}" if k > 1 else ""))
            i = j
        m = "*".join(mono)
        if not m:
            parts.append(str(c))
        elif c == 1:
            parts.append(m)
        elif c == -1:
            parts.append("-" + m)
        else:
            parts.append(f"{c}*{m}")
    return " + ".join(parts).replace("+ -", "- ")


# ---------------------------------------------------------------- rewriting

_ENGINES: dict = {}


def _engine(alg: LieAlgebraSpec):
    eng = _ENGINES.get(id(alg))
    if eng is None or eng[0] is not alg:
        tab = {}
        for (a, b), terms in alg.brackets.items():
            if a > b:
                tab[(a, b)] = tuple(sorted(terms.items()))
        eng = (alg, kernels.make_rewriter(alg.dim, tab, MAX_REWRITES))
        _ENGINES[id(alg)] = eng
    return eng[1]


def env_multiply(alg: LieAlgebraSpec, a: EnvElement, b: EnvElement) -> EnvElement:
    """PBW-normal-ordered product a*b."""
    rw = _engine(alg)
    out: dict = {}
    for wa, ca in a._w.items():
        for wb, cb in b._w.items():
            for w, c in rw.multiply(wa, wb).items():
                out[w] = out.get(w, 0) + ca * cb * c
    return EnvElement(alg, out)


def commutator(alg, a: EnvElement, b: EnvElement) -> EnvElement:
    return env_multiply(alg, a, b) - env_multiply(alg, b, a)


@dataclass
class CentralityReport:
    ok: bool
    generator: str | None = None
    residual: EnvElement | None = None

    def __bool__(self):
        return self.ok


def is_central(alg: LieAlgebraSpec, e: EnvElement) -> CentralityReport:
    for a, lab in enumerate(alg.basis):
        x = EnvElement.gen(alg, a)
        r = commutator(alg, x, e)
        if not r.is_zero():
            return CentralityReport(False, lab, r)
    return CentralityReport(True)


# ---------------------------------------------------------------- Casimir catalog

CATALOG = {
    "QuantumHamilton": (3, 5),
    "Hamilton": (3, 2),
    "Galilei": (3, 3),
    "GalileiConjugate": (3, 3),
    "WeylHeisenberg": (None, 1),
}


def _g(alg, lab):
    return EnvElement.gen(alg, lab)


def _prod(alg, *labels) -> EnvElement:
    out = EnvElement.scalar(alg, 1)
    for lab in labels:
        out = out * _g(alg, lab)
    return out


def _pairs(n):
    return [(i, j) for i in range(1, n + 1) for j in range(i + 1, n + 1)]


def qha_b(alg, i, j, c_sign: int = -1, d4_sign: int = -1, d6_sign: int = -1) -> EnvElement:
    """B_ij = C J_ij + D_ij, C on the left.

    C = -A M + c_sign (T^2 - I R),
    D_ij = A D1 + M D2 + R D3 + d4_sign I D4 + T (D5 + d6_sign D6).
    The defaults are the only choice (up to overall scale) for which B_ij
    commutes with every non-rotation generator; the other signs are kept so
    the alternatives can be checked.
    """
    p = lambda *ls: _prod(alg, *ls)
    C = -p("A", "M") + c_sign * (p("T", "T") - p("I", "R"))
    Gi, Gj, Fi, Fj = f"G_{i}", f"G_{j}", f"F_{i}", f"F_{j}"
    Pi, Pj, Qi, Qj = f"P_{i}", f"P_{j}", f"Q_{i}", f"Q_{j}"
    d1 = p(Gj, Pi) - p(Gi, Pj)
    d2 = p(Fj, Qi) - p(Fi, Qj)
    d3 = p(Pi, Qj) - p(Pj, Qi)
    d4 = p(Fi, Gj) - p(Fj, Gi)
    d5 = p(Fi, Pj) - p(Fj, Pi)
    d6 = p(Gi, Qj) - p(Gj, Qi)
    D = p("A") * d1 + p("M") * d2 + p("R") * d3 + d4_sign * p("I") * d4 + p("T") * (d5 + d6_sign * d6)
    return C * _g(alg, f"J_{i}{j}") + D


def ha_b(alg, i, j) -> EnvElement:
    p = lambda *ls: _prod(alg, *ls)
    return p("R", f"J_{i}{j}") + p(f"F_{j}", f"G_{i}") - p(f"F_{i}", f"G_{j}")


def ga_b(alg, i, j, sign: int = 1) -> EnvElement:
    """M J_ij - G_j P_i + sign * G_i P_j (the quoted form repeats G_j P_i)."""
    p = lambda *ls: _prod(alg, *ls)
    return p("M", f"J_{i}{j}") - p(f"G_{j}", f"P_{i}") + sign * p(f"G_{i}", f"P_{j}")


def gac_b(alg, i, j, sign: int = 1) -> EnvElement:
    """A J_ij - F_j Q_i + sign * F_i Q_j."""
    p = lambda *ls: _prod(alg, *ls)
    return p("A", f"J_{i}{j}") - p(f"F_{j}", f"Q_{i}") + sign * p(f"F_{i}", f"Q_{j}")


def _sum_bb(alg, n, bfun) -> EnvElement:
    out = EnvElement(alg)
    for i, j in _pairs(n):
        b = bfun(alg, i, j)
        out = out + b * b
    return out


# sign choices for the two Galilei spin invariants; fixed by centrality (see tests)
GA_B_SIGN = 1
GAC_B_SIGN = 1


def casimir_element(family: str, n: int, k: int, alg: LieAlgebraSpec | None = None) -> EnvElement:
    """Cataloged Casimir polynomial k (1-based) of family(n)."""
    fam = canonical_family(family)
    if fam not in CATALOG:
        raise KeyError(f"no Casimir catalog for {fam}")
    need_n, kmax = CATALOG[fam]
    if need_n is not None and n != need_n:
        raise KeyError(f"Casimir catalog for {fam} only covers n={need_n}")
    if not 1 <= k <= kmax:
        raise KeyError(f"unknown Casimir index {k} for {fam}")
    alg = alg or builtin_algebra(fam, n)
    p = lambda *ls: _prod(alg, *ls)
    if fam == "WeylHeisenberg":
        return p("I")
    if fam == "QuantumHamilton":
        if k <= 3:
            return p("IMA"[k - 1])
        if k == 4:
            return p("T", "T") - p("I", "R")
        return _sum_bb(alg, n, qha_b)
    if fam == "Hamilton":
        return p("R") if k == 1 else _sum_bb(alg, n, ha_b)
    if fam == "Galilei":
        if k == 1:
            return p("M")
        if k == 2:
            return 2 * p("M", "E") - sum((p(f"P_{i}", f"P_{i}") for i in range(1, n + 1)), EnvElement(alg))
        return _sum_bb(alg, n, lambda a, i, j: ga_b(a, i, j, GA_B_SIGN))
    # GalileiConjugate
    if k == 1:
        return p("A")
    if k == 2:
        return 2 * p("A", "E") - sum((p(f"Q_{i}", f"Q_{i}") for i in range(1, n + 1)), EnvElement(alg))
    return _sum_bb(alg, n, lambda a, i, j: gac_b(a, i, j, GAC_B_SIGN))


def catalog_entries() -> list:
    """All (family, n, k) triples in the Casimir catalog (H(n) for n=1..4)."""
    out = []
    for fam, (need_n, kmax) in CATALOG.items():
        ns = [need_n] if need_n is not None else [1, 2, 3, 4]
        for n in ns:
            out += [(fam, n, k) for k in range(1, kmax + 1)]
    return out
