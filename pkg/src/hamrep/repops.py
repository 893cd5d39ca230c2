"""Quadratic-phase operators and first-order differential operators.

Functions live on y = (x, tt) with x in R^n and tt a scalar ("time" slot);
operators that ignore tt simply keep the tt-fields at zero.  Both carriers
use the augmented vector yh = (x, tt, 1):

    QuadPhaseOperator:  (U psi)(y) = exp(i yh^T S yh) psi(A yh)
    DiffOp:             d = yh^T S yh + (L yh) . grad_y

A is affine (last row e_last), S symmetric, L has a zero last row.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.linalg import expm

TOL = 1e-12


class ClosureError(RuntimeError):
    pass


class UnsupportedGeneratorShape(ValueError):
    pass


def _sym(S):
    return 0.5 * (S + S.T)


def _blank(n, dtype=float):
    return np.zeros((n + 2, n + 2), dtype=dtype)


@dataclass(frozen=True, eq=False)
class QuadPhaseOperator:
    A: np.ndarray
    S: np.ndarray

    def __post_init__(self):
        A = np.asarray(self.A, dtype=float)
        S = _sym(np.asarray(self.S, dtype=float))
        N = A.shape[0]
        n = N - 2
        if A.shape != (N, N) or S.shape != (N, N) or n < 0:
            raise ValueError("bad operator shape")
        if np.abs(A[-1] - np.eye(N)[-1]).max() > TOL:
            raise ClosureError("argument map is not affine")
        if np.abs(A[n, :n]).max(initial=0) > TOL or abs(A[n, n] - 1) > TOL:
            raise ClosureError("time slot must map to tt + tau")
        rinv = A[:n, :n]
        if n and np.abs(rinv.T @ rinv - np.eye(n)).max() > 1e-9:
            raise ClosureError("spatial part of the argument map is not orthogonal")
        Sxx = S[:n, :n]
        if n and np.abs(Sxx - Sxx[0, 0] * np.eye(n)).max() > 1e-9:
            raise ClosureError("x-x phase block outside the c5*|x|^2 family")
        object.__setattr__(self, "A", A)
        object.__setattr__(self, "S", S)

    # named views of the phase coefficients
    @property
    def n(self) -> int:
        return self.A.shape[0] - 2

    @property
    def rot(self):
        n = self.n
        return self.A[:n, :n].T.copy()

    @property
    def shift_a(self):
        return self.A[: self.n, -1].copy()

    @property
    def shift_b(self):
        return self.A[: self.n, self.n].copy()

    @property
    def tau(self) -> float:
        return float(self.A[self.n, -1])

    @property
    def phase(self) -> dict:
        n, S = self.n, self.S
        return {
            "c0": float(S[-1, -1]),
            "c1": 2 * S[:n, -1],
            "c2": float(2 * S[n, -1]),
            "c3": float(S[n, n]),
            "c4": 2 * S[:n, n],
            "c5": float(S[0, 0]) if n else 0.0,
        }

    @property
    def c0(self) -> float:
        return float(self.S[-1, -1])

    @classmethod
    def identity(cls, n: int) -> "QuadPhaseOperator":
        return cls(np.eye(n + 2), _blank(n))

    @classmethod
    def build(cls, n, rot=None, shift_a=None, shift_b=None, tau=0.0,
              c0=0.0, c1=None, c2=0.0, c3=0.0, c4=None, c5=0.0) -> "QuadPhaseOperator":
        A = np.eye(n + 2)
        if rot is not None:
            A[:n, :n] = np.asarray(rot, dtype=float).T
        if shift_a is not None:
            A[:n, -1] = shift_a
        if shift_b is not None:
            A[:n, n] = shift_b
        A[n, -1] = tau
        S = _blank(n)
        S[:n, :n] = c5 * np.eye(n)
        if c1 is not None:
            S[:n, -1] = S[-1, :n] = 0.5 * np.asarray(c1, dtype=float)
        if c4 is not None:
            S[:n, n] = S[n, :n] = 0.5 * np.asarray(c4, dtype=float)
        S[n, -1] = S[-1, n] = 0.5 * c2
        S[n, n] = c3
        S[-1, -1] = c0
        return cls(A, S)

    def is_space_only(self, tol=TOL) -> bool:
        n = self.n
        return (abs(self.tau) <= tol and np.abs(self.shift_b).max(initial=0) <= tol
                and np.abs(self.S[n]).max() <= tol)

    def with_c0(self, c0) -> "QuadPhaseOperator":
        S = self.S.copy()
        S[-1, -1] = c0
        return QuadPhaseOperator(self.A, S)

    def phase_at(self, y) -> float:
        yh = np.append(np.asarray(y, dtype=float), 1.0)
        return float(yh @ self.S @ yh)

    def arg_at(self, y) -> np.ndarray:
        yh = np.append(np.asarray(y, dtype=float), 1.0)
        return (self.A @ yh)[:-1]

    def to_json(self) -> dict:
        ph = self.phase
        return {"n": self.n, "rot": self.rot.tolist(), "shift_a": self.shift_a.tolist(),
                "shift_b": self.shift_b.tolist(), "tau": self.tau,
                "phase": {k: (v.tolist() if isinstance(v, np.ndarray) else v) for k, v in ph.items()}}

    @classmethod
    def from_json(cls, d) -> "QuadPhaseOperator":
        ph = d.get("phase", {})
        return cls.build(int(d["n"]), rot=d.get("rot"), shift_a=d.get("shift_a"), shift_b=d.get("shift_b"),
                         tau=d.get("tau", 0.0), **{k: ph[k] for k in ph})

    def __repr__(self):
        return f"QuadPhaseOperator(n={self.n}, tau={self.tau:.6g}, c0={self.c0:.6g})"


class SpaceOnlyOperator(QuadPhaseOperator):
    """QuadPhaseOperator that never touches the time slot."""

    def __post_init__(self):
        super().__post_init__()
        if not self.is_space_only(1e-9):
            raise ClosureError("space-only operator has time-slot terms")

    @classmethod
    def coerce(cls, u: QuadPhaseOperator) -> "SpaceOnlyOperator":
        return cls(u.A, u.S)


def _check_n(u1, u2):
    if u1.n != u2.n:
        raise ValueError(f"dimension mismatch {u1.n} vs {u2.n}")


def _same_kind(u1, u2):
    return SpaceOnlyOperator if isinstance(u1, SpaceOnlyOperator) and isinstance(u2, SpaceOnlyOperator) else QuadPhaseOperator


def compose(u1: QuadPhaseOperator, u2: QuadPhaseOperator) -> QuadPhaseOperator:
    """(u1 o u2) psi = u1(u2 psi)."""
    _check_n(u1, u2)
    A = u2.A @ u1.A
    S = u1.S + u1.A.T @ u2.S @ u1.A
    return _same_kind(u1, u2)(A, S)


def invert(u: QuadPhaseOperator) -> QuadPhaseOperator:
    Ai = np.linalg.inv(u.A)
    return type(u)(Ai, -Ai.T @ u.S @ Ai)


def op_distance(u1: QuadPhaseOperator, u2: QuadPhaseOperator) -> float:
    _check_n(u1, u2)
    return float(max(np.abs(u1.A - u2.A).max(), np.abs(u1.S - u2.S).max()))


def apply_to_samples(u: QuadPhaseOperator, f, grid) -> np.ndarray:
    """(u f)(y) at each grid point y = (x_1..x_n, tt); f takes (x, tt)."""
    grid = np.atleast_2d(np.asarray(grid, dtype=float))
    if grid.size == 0:
        raise ValueError("empty grid")
    n = u.n
    if grid.shape[1] == n:
        grid = np.hstack([grid, np.zeros((grid.shape[0], 1))])
    out = np.empty(grid.shape[0], dtype=complex)
    for k, y in enumerate(grid):
        z = u.arg_at(y)
        out[k] = np.exp(1j * u.phase_at(y)) * f(z[:n], z[n])
    return out


# ---------------------------------------------------------------- DiffOp

@dataclass(frozen=True, eq=False)
class DiffOp:
    S: np.ndarray  # complex symmetric multiplier matrix
    L: np.ndarray  # complex, zero last row: vector field L yh

    def __post_init__(self):
        S = _sym(np.asarray(self.S, dtype=complex))
        L = np.asarray(self.L, dtype=complex)
        if L.shape != S.shape or np.abs(L[-1]).max() > TOL:
            raise ClosureError("vector field must have a zero last row")
        object.__setattr__(self, "S", S)
        object.__setattr__(self, "L", L)

    @property
    def n(self):
        return self.S.shape[0] - 2

    @classmethod
    def zero(cls, n):
        return cls(_blank(n, complex), _blank(n, complex))

    @classmethod
    def mult(cls, n, c0=0.0, c1=None, c2=0.0, c3=0.0, c4=None, c5=0.0) -> "DiffOp":
        """Multiplication by c0 + c1.x + c2 tt + c3 tt^2 + (c4.x) tt + c5 |x|^2."""
        S = _blank(n, complex)
        S[:n, :n] = c5 * np.eye(n)
        if c1 is not None:
            S[:n, -1] = S[-1, :n] = 0.5 * np.asarray(c1)
        if c4 is not None:
            S[:n, n] = S[n, :n] = 0.5 * np.asarray(c4)
        S[n, -1] = S[-1, n] = 0.5 * c2
        S[n, n] = c3
        S[-1, -1] = c0
        return cls(S, _blank(n, complex))

    @classmethod
    def field(cls, n, rows: dict) -> "DiffOp":
        """Vector field: rows[k] is the augmented coefficient row of d/dy_k (k = n is tt)."""
        L = _blank(n, complex)
        for k, row in rows.items():
            L[k] = row
        return cls(_blank(n, complex), L)

    # named views in the spirit of the coefficient-record layout
    @property
    def mult_coeffs(self) -> dict:
        n, S = self.n, self.S
        return {"c0": S[-1, -1], "c1": 2 * S[:n, -1], "c2": 2 * S[n, -1], "c3": S[n, n], "c4": 2 * S[:n, n],
                "c5": S[0, 0] if n else 0.0}

    @property
    def dx_const(self):
        return self.L[: self.n, -1]

    @property
    def dx_linear_t(self):
        return self.L[: self.n, self.n]

    @property
    def dx_linear_x(self):
        return self.L[: self.n, : self.n]

    @property
    def dt(self):
        return self.L[self.n, -1]

    def __add__(self, o):
        return DiffOp(self.S + o.S, self.L + o.L)

    def __sub__(self, o):
        return DiffOp(self.S - o.S, self.L - o.L)

    def __neg__(self):
        return DiffOp(-self.S, -self.L)

    def __mul__(self, c):
        return DiffOp(c * self.S, c * self.L)

    __rmul__ = __mul__

    def is_scalar(self, tol=1e-12):
        S0 = self.S.copy()
        S0[-1, -1] = 0
        return np.abs(S0).max() <= tol and np.abs(self.L).max() <= tol

    def scalar(self) -> complex:
        return complex(self.S[-1, -1])

    def apply(self, f, grad, y) -> complex:
        """Evaluate (d f)(y) given f(y) and its gradient, both callables on y."""
        yh = np.append(np.asarray(y, dtype=float), 1.0)
        return yh @ self.S @ yh * f(y) + (self.L @ yh)[:-1] @ grad(y)

    def __repr__(self):
        return f"DiffOp(n={self.n})"


def diff_distance(d1: DiffOp, d2: DiffOp) -> float:
    return float(max(np.abs(d1.S - d2.S).max(), np.abs(d1.L - d2.L).max()))


def diff_commutator(d1: DiffOp, d2: DiffOp) -> DiffOp:
    """[d1, d2] = d1 d2 - d2 d1, closed in the first-order family."""
    if d1.n != d2.n:
        raise ValueError("dimension mismatch")
    L1, L2, S1, S2 = d1.L, d2.L, d1.S, d2.S
    S = L1.T @ S2 + S2 @ L1 - L2.T @ S1 - S1 @ L2
    L = L2 @ L1 - L1 @ L2
    if np.abs(L[-1]).max() > 1e-12:
        raise ClosureError("commutator left the first-order family")
    return DiffOp(S, L)


def conjugate(u: QuadPhaseOperator, d: DiffOp) -> DiffOp:
    """u d u^-1 as a DiffOp."""
    A = u.A
    Ai = np.linalg.inv(A)
    Lp = Ai @ d.L @ A
    S = A.T @ d.S @ A - 1j * (Lp.T @ u.S + u.S @ Lp)
    return DiffOp(S, Lp)


def exponentiate(d: DiffOp, tol: float = 1e-12) -> QuadPhaseOperator:
    """exp(i d) for a hermitian-shaped first-order d.

    i d = i yh^T S yh + (K yh).grad with K = i L; needs S and K real.  The
    argument map is the time-1 flow e^K and the phase is the path integral
    of the multiplier, taken from one block matrix exponential.
    """
    K = 1j * d.L
    if np.abs(K.imag).max() > tol or np.abs(d.S.imag).max() > tol:
        raise UnsupportedGeneratorShape("generator is not hermitian-shaped (non-unitary flow)")
    K = K.real
    S = d.S.real
    N = K.shape[0]
    big = np.zeros((2 * N, 2 * N))
    big[:N, :N] = -K.T
    big[:N, N:] = S
    big[N:, N:] = K
    E = expm(big)
    A = E[N:, N:]
    phase = E[N:, N:].T @ E[:N, N:]
    A[-1] = np.eye(N)[-1]
    try:
        return QuadPhaseOperator(A, _sym(phase))
    except ClosureError as exc:
        raise UnsupportedGeneratorShape(str(exc)) from exc


# ---------------------------------------------------------------- polynomial operators

class WeylOp:
    """Polynomial differential operator with matrix coefficients.

    terms[(xexp, dexp)] = coefficient matrix (d x d), monomials normal
    ordered as x^xexp d^dexp over nvars variables.  Matrix coefficients carry
    the finite-dimensional (spin) factor, which commutes with x and d.
    """

    __slots__ = ("nvars", "dim", "terms")

    def __init__(self, nvars: int, dim: int, terms: dict | None = None):
        self.nvars = nvars
        self.dim = dim
        self.terms = terms or {}

    def _zero_key(self):
        z = (0,) * self.nvars
        return (z, z)

    @classmethod
    def scalar(cls, nvars, dim, c) -> "WeylOp":
        z = (0,) * nvars
        return cls(nvars, dim, {(z, z): c * np.eye(dim, dtype=complex)})

    @classmethod
    def matrix(cls, nvars, M) -> "WeylOp":
        M = np.asarray(M, dtype=complex)
        z = (0,) * nvars
        return cls(nvars, M.shape[0], {(z, z): M})

    @classmethod
    def from_diffop(cls, d: DiffOp, slots, nvars, dim) -> "WeylOp":
        """Embed a DiffOp whose variables (x_1..x_n, tt) sit at positions slots."""
        out: dict = {}
        eye = np.eye(dim, dtype=complex)
        m = len(slots)
        z = [0] * nvars

        def key(xs=(), ds=()):
            xe, de = list(z), list(z)
            for s in xs:
                xe[s] += 1
            for s in ds:
                de[s] += 1
            return (tuple(xe), tuple(de))

        def add(k, c):
            if c != 0:
                out[k] = out.get(k, 0) + c * eye

        S, L = d.S, d.L
        # multiplier yh^T S yh; index m is the constant slot
        for a in range(m + 1):
            for b in range(m + 1):
                xs = tuple(slots[i] for i in (a, b) if i < m)
                add(key(xs), S[a, b])
        for k in range(m):
            for a in range(m + 1):
                xs = (slots[a],) if a < m else ()
                add(key(xs, (slots[k],)), L[k, a])
        return cls(nvars, dim, out)

    def __add__(self, o):
        out = dict(self.terms)
        for k, v in o.terms.items():
            out[k] = out[k] + v if k in out else v
        return WeylOp(self.nvars, self.dim, out)

    def __mul__(self, o):
        if not isinstance(o, WeylOp):
            return WeylOp(self.nvars, self.dim, {k: o * v for k, v in self.terms.items()})
        return weyl_multiply(self, o)

    def __rmul__(self, c):
        return WeylOp(self.nvars, self.dim, {k: c * v for k, v in self.terms.items()})

    def prune(self, tol=0.0) -> "WeylOp":
        return WeylOp(self.nvars, self.dim, {k: v for k, v in self.terms.items() if np.abs(v).max() > tol})

    def scalar_split(self):
        """(c, residual): c from the constant term's trace, residual = largest non-scalar part."""
        zk = self._zero_key()
        c0 = self.terms.get(zk, np.zeros((self.dim, self.dim), dtype=complex))
        c = np.trace(c0) / self.dim
        resid = np.abs(c0 - c * np.eye(self.dim)).max()
        for k, v in self.terms.items():
            if k != zk:
                resid = max(resid, np.abs(v).max())
        return complex(c), float(resid)


def weyl_multiply(a: WeylOp, b: WeylOp) -> WeylOp:
    from . import kernels

    out: dict = {}
    cache: dict = {}
    nv = a.nvars
    for ka, Ma in a.terms.items():
        for kb, Mb in b.terms.items():
            key = (ka, kb)
            prod = cache.get(key)
            if prod is None:
                prod = kernels.weyl_normal({ka: 1}, {kb: 1}, nv)
                cache[key] = prod
            M = Ma @ Mb
            for k, c in prod.items():
                if k in out:
                    out[k] = out[k] + c * M
                else:
                    out[k] = c * M
    return WeylOp(nv, a.dim, out)
