"""Group elements of QHa(n) and its subgroups, the (2n+6)-dim matrix
realization, 2-cocycle of the central triple, and the SU(2) cover.

Parameter roles: R rotation, v velocity, f force, r power, q position,
t time, p momentum, eps energy, and the central iota, s, u.  The matrix
realization is the reference implementation everything else is checked
against.
"""
from __future__ import annotations

from dataclasses import dataclass, fields, replace
from math import factorial

import numpy as np

from .liealg import builtin_algebra

TOL_BUILD = 1e-12

_VEC = ("v", "f", "q", "p")
_SCAL = ("r", "t", "eps", "iota", "s", "u")


class InvalidElement(ValueError):
    pass


def _vec(x, n):
    a = np.asarray(x, dtype=float).reshape(-1)
    if a.shape != (n,):
        raise InvalidElement(f"expected an {n}-vector, got shape {a.shape}")
    return a


@dataclass(frozen=True, eq=False)
class GroupParams:
    R: np.ndarray
    v: np.ndarray
    f: np.ndarray
    r: float
    q: np.ndarray
    t: float
    p: np.ndarray
    eps: float
    iota: float
    s: float
    u: float

    def __post_init__(self):
        R = np.atleast_2d(np.asarray(self.R, dtype=float))
        n = R.shape[0]
        if R.shape != (n, n):
            raise InvalidElement("R must be square")
        if n and np.abs(R.T @ R - np.eye(n)).max() > TOL_BUILD:
            raise InvalidElement("R is not orthogonal")
        if n and np.linalg.det(R) <= 0:
            raise InvalidElement("det R must be positive")
        object.__setattr__(self, "R", R)
        for k in _VEC:
            object.__setattr__(self, k, _vec(getattr(self, k), n))
        for k in _SCAL:
            object.__setattr__(self, k, float(getattr(self, k)))

    @property
    def n(self) -> int:
        return self.R.shape[0]

    @classmethod
    def identity(cls, n: int) -> "GroupParams":
        z = np.zeros(n)
        return cls(np.eye(n), z, z, 0.0, z, 0.0, z, 0.0, 0.0, 0.0, 0.0)

    @classmethod
    def make(cls, n: int, **kw) -> "GroupParams":
        """Identity with selected fields overridden."""
        base = cls.identity(n)
        return replace(base, **kw)

    def central_zeroed(self) -> "GroupParams":
        return replace(self, iota=0.0, s=0.0, u=0.0)

    def as_vector(self) -> np.ndarray:
        parts = [self.R.ravel()]
        for k in ("v", "f", "r", "q", "t", "p", "eps", "iota", "s", "u"):
            parts.append(np.atleast_1d(getattr(self, k)))
        return np.concatenate(parts)

    def to_json(self) -> dict:
        d = {"n": self.n, "R": self.R.ravel().tolist()}
        for k in ("v", "f", "r", "q", "t", "p", "eps", "iota", "s", "u"):
            val = getattr(self, k)
            d[k] = val.tolist() if isinstance(val, np.ndarray) else val
        return d

    @classmethod
    def from_json(cls, d: dict) -> "GroupParams":
        n = int(d["n"])
        R = np.asarray(d.get("R", np.eye(n).ravel()), dtype=float).reshape(n, n)
        kw = {k: d.get(k, np.zeros(n) if k in _VEC else 0.0) for k in _VEC + _SCAL}
        return cls(R=R, **kw)

    def __repr__(self):
        bits = [f"n={self.n}"]
        if np.abs(self.R - np.eye(self.n)).max() > 0:
            bits.append("R=...")
        for k in ("v", "f", "r", "q", "t", "p", "eps", "iota", "s", "u"):
            val = getattr(self, k)
            if np.any(np.asarray(val) != 0):
                bits.append(f"{k}={np.round(val, 6).tolist() if isinstance(val, np.ndarray) else round(val, 6)}")
        return f"GroupParams({', '.join(bits)})"


@dataclass(frozen=True, eq=False)
class CoverParams:
    """Element of the cover: the rotation is an SU(2) matrix (n = 3)."""

    Rbar: np.ndarray
    rest: GroupParams  # its R equals su2_project(Rbar)

    @classmethod
    def make(cls, Rbar, **kw) -> "CoverParams":
        Rbar = check_su2(Rbar)
        g = GroupParams.make(3, R=su2_project(Rbar), **kw)
        return cls(Rbar, g)

    @classmethod
    def lift(cls, Rbar, g: GroupParams) -> "CoverParams":
        Rbar = check_su2(Rbar)
        if g.n != 3 or np.abs(su2_project(Rbar) - g.R).max() > 1e-10:
            raise InvalidElement("Rbar does not cover R")
        return cls(Rbar, g)

    @property
    def n(self):
        return 3

    def project(self) -> GroupParams:
        return self.rest

    def negate(self) -> "CoverParams":
        return CoverParams(-self.Rbar, self.rest)


def as_params(g) -> GroupParams:
    return g.project() if isinstance(g, CoverParams) else g


# ---------------------------------------------------------------- group law

def _product(a: GroupParams, b: GroupParams) -> GroupParams:
    if a.n != b.n:
        raise InvalidElement("dimension mismatch")
    Ra = a.R
    Rv, Rf, Rq, Rp = Ra @ b.v, Ra @ b.f, Ra @ b.q, Ra @ b.p
    t = b.t
    iota = b.iota + a.iota + 0.5 * (
        (a.eps + a.q @ a.f - a.p @ a.v - a.r * a.t) * t
        - b.eps * a.t
        - (a.p - a.t * a.f) @ Rq
        + (a.q - a.t * a.v) @ Rp
    )
    return GroupParams(
        R=Ra @ b.R,
        v=a.v + Rv,
        f=a.f + Rf,
        r=a.r + b.r + a.v @ Rf - a.f @ Rv,
        q=a.q + Rq + a.v * t,
        t=a.t + t,
        p=a.p + Rp + a.f * t,
        eps=a.eps + b.eps + a.v @ Rp - a.f @ Rq + a.r * t,
        iota=iota,
        s=b.s + a.s + a.v @ Rq + 0.5 * t * (a.v @ a.v),
        u=b.u + a.u + a.f @ Rp + 0.5 * t * (a.f @ a.f),
    )


def product(a, b):
    """Closed-form group product a*b (GroupParams or CoverParams)."""
    if isinstance(a, CoverParams) or isinstance(b, CoverParams):
        if not (isinstance(a, CoverParams) and isinstance(b, CoverParams)):
            raise InvalidElement("cannot mix cover and plain elements")
        return CoverParams(a.Rbar @ b.Rbar, _product(a.rest, b.rest))
    return _product(a, b)


def _inverse(a: GroupParams) -> GroupParams:
    Ri = a.R.T
    v, f, q, p, t = a.v, a.f, a.q, a.p, a.t
    return GroupParams(
        R=Ri,
        v=-Ri @ v,
        f=-Ri @ f,
        r=-a.r,
        q=-Ri @ q + t * (Ri @ v),
        t=-t,
        p=-Ri @ p + t * (Ri @ f),
        eps=-a.eps + v @ p - f @ q + a.r * t,
        iota=-a.iota,
        s=-a.s + v @ q - 0.5 * t * (v @ v),
        u=-a.u + f @ p - 0.5 * t * (f @ f),
    )


def inverse(a):
    if isinstance(a, CoverParams):
        return CoverParams(a.Rbar.conj().T, _inverse(a.rest))
    return _inverse(a)


def max_dev(a: GroupParams, b: GroupParams) -> float:
    return float(np.abs(a.as_vector() - b.as_vector()).max())


# ---------------------------------------------------------------- matrices

def matrix_size(n: int) -> int:
    return 2 * n + 6


def to_matrix(a: GroupParams) -> np.ndarray:
    a = as_params(a)
    n = a.n
    N = matrix_size(n)
    R, v, f, q, p, t = a.R, a.v, a.f, a.q, a.p, a.t
    M = np.zeros((N, N))
    M[0:n, 0:n] = R
    M[0:n, 2 * n + 1] = f
    M[0:n, N - 1] = p
    M[n:2 * n, n:2 * n] = R
    M[n:2 * n, 2 * n + 1] = v
    M[n:2 * n, N - 1] = q
    i = 2 * n
    M[i, 0:n] = v @ R
    M[i, n:2 * n] = -f @ R
    M[i, i] = 1
    M[i, 2 * n + 1] = a.r
    M[i, N - 1] = a.eps
    i = 2 * n + 1
    M[i, i] = 1
    M[i, N - 1] = t
    i = 2 * n + 2
    M[i, n:2 * n] = v @ R
    M[i, 2 * n + 1] = 0.5 * (v @ v)
    M[i, i] = 1
    M[i, N - 1] = a.s
    i = 2 * n + 3
    M[i, 0:n] = f @ R
    M[i, 2 * n + 1] = 0.5 * (f @ f)
    M[i, i] = 1
    M[i, N - 1] = a.u
    i = 2 * n + 4
    # energy-like entry; the rotation does not enter (with R inside, the
    # matrices are not closed under multiplication)
    eps_t = a.eps - a.r * t + q @ f - p @ v
    M[i, 0:n] = (q - t * v) @ R
    M[i, n:2 * n] = -(p - t * f) @ R
    M[i, 2 * n] = -t
    M[i, 2 * n + 1] = eps_t
    M[i, i] = 1
    M[i, N - 1] = 2 * a.iota
    M[N - 1, N - 1] = 1
    return M


def from_matrix(M: np.ndarray) -> GroupParams:
    M = np.asarray(M, dtype=float)
    N = M.shape[0]
    n = (N - 6) // 2
    return GroupParams(
        R=M[0:n, 0:n],
        f=M[0:n, 2 * n + 1],
        p=M[0:n, N - 1],
        v=M[n:2 * n, 2 * n + 1],
        q=M[n:2 * n, N - 1],
        r=M[2 * n, 2 * n + 1],
        eps=M[2 * n, N - 1],
        t=M[2 * n + 1, N - 1],
        s=M[2 * n + 2, N - 1],
        u=M[2 * n + 3, N - 1],
        iota=M[2 * n + 4, N - 1] / 2,
    )


# derivative directions at the identity, per generator kind; R is 2 d/dr
_DIRECTION = {"G": ("v", 1), "F": ("f", 1), "R": ("r", 2), "Q": ("p", 1), "P": ("q", 1),
              "T": ("eps", 1), "E": ("t", 1), "M": ("s", 1), "A": ("u", 1), "I": ("iota", 1)}


def _raw_matrix(n, R, kw):
    # to_matrix without the orthogonality check, for derivative extraction
    g = object.__new__(GroupParams)
    vals = dict(R=R, v=np.zeros(n), f=np.zeros(n), q=np.zeros(n), p=np.zeros(n),
                r=0.0, t=0.0, eps=0.0, iota=0.0, s=0.0, u=0.0)
    vals.update(kw)
    for k, val in vals.items():
        object.__setattr__(g, k, val)
    return to_matrix(g)


def matrix_log_generators(n: int) -> dict:
    """Integer generator matrices, label -> (2n+6)x(2n+6) int array.

    Entries are polynomial of degree <= 2 along each single direction, so the
    symmetric difference with unit step is exact.
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    labels = builtin_algebra("QuantumHamilton", n).basis
    out = {}
    I = np.eye(n)
    for lab in labels:
        kind = lab[0]
        if kind == "J":
            i, j = (int(c) - 1 for c in lab[2:].split(",")) if "," in lab else (int(lab[2]) - 1, int(lab[3]) - 1)
            L = np.zeros((n, n))
            L[i, j], L[j, i] = 1.0, -1.0
            D = (_raw_matrix(n, I + L, {}) - _raw_matrix(n, I - L, {})) / 2
        else:
            key, scale = _DIRECTION[kind]
            if key in _VEC:
                e = np.zeros(n)
                e[int(lab.split("_")[1]) - 1] = 1.0
                plus, minus = {key: e * scale}, {key: -e * scale}
            else:
                plus, minus = {key: float(scale)}, {key: -float(scale)}
            D = (_raw_matrix(n, I, plus) - _raw_matrix(n, I, minus)) / 2
        Di = np.rint(D).astype(np.int64)
        assert np.abs(D - Di).max() == 0
        out[lab] = Di
    return out


def generator_commutator_defect(n: int) -> int:
    """Max |[X_a, X_b] - sum_k c^k_ab X_k| entry over all pairs, in exact integers."""
    alg = builtin_algebra("QuantumHamilton", n)
    gens = matrix_log_generators(n)
    mats = [gens[lab] for lab in alg.basis]
    worst = 0
    for a in range(alg.dim):
        for b in range(a + 1, alg.dim):
            lhs = mats[a] @ mats[b] - mats[b] @ mats[a]
            rhs = np.zeros_like(lhs)
            for k, c in alg.bracket_basis(a, b).items():
                if c.denominator != 1:
                    raise ValueError("non-integer structure constant")
                rhs = rhs + int(c) * mats[k]
            worst = max(worst, int(np.abs(lhs - rhs).max()))
    return worst


# ---------------------------------------------------------------- factorization

def factorize(a: GroupParams):
    """Gamma = Upsilon(q,t,p,eps,iota) A(s,u) Upsilon~(v,f,r) R, as embedded elements."""
    a = as_params(a)
    n = a.n
    mk = GroupParams.make
    heis = mk(n, q=a.q, t=a.t, p=a.p, eps=a.eps, iota=a.iota)
    cent = mk(n, s=a.s, u=a.u)
    ham = mk(n, v=a.v, f=a.f, r=a.r)
    rot = mk(n, R=a.R)
    return heis, cent, ham, rot


def reassemble(parts) -> GroupParams:
    out = parts[0]
    for x in parts[1:]:
        out = product(out, x)
    return out


def cocycle(x1: GroupParams, x2: GroupParams) -> np.ndarray:
    """Central part (iota, s, u) of x1*x2 for central-free x1, x2."""
    for x in (x1, x2):
        if x.iota or x.s or x.u:
            raise InvalidElement("cocycle inputs must have zero central components")
    g = product(x1, x2)
    return np.array([g.iota, g.s, g.u])


def cocycle_defect(x1, x2, x3) -> float:
    """Max deviation in a(x1,x2) + a(x12,x3) = a(x2,x3) + a(x1,x23)."""
    x12 = product(x1, x2).central_zeroed()
    x23 = product(x2, x3).central_zeroed()
    lhs = cocycle(x1, x2) + cocycle(x12, x3)
    rhs = cocycle(x2, x3) + cocycle(x1, x23)
    return float(np.abs(lhs - rhs).max())


# ---------------------------------------------------------------- sampling

def _quaternion(rng) -> np.ndarray:
    q = rng.normal(size=4)
    return q / np.linalg.norm(q)


def random_su2(rng) -> np.ndarray:
    w, x, y, z = _quaternion(rng)
    return np.array([[w - 1j * z, -y - 1j * x], [y - 1j * x, w + 1j * z]])


def random_rotation(rng, n: int) -> np.ndarray:
    if n == 1:
        return np.eye(1)
    if n == 3:
        return su2_project(random_su2(rng))
    # QR of a Gaussian matrix with sign fix, then force det +1
    Q, Rm = np.linalg.qr(rng.normal(size=(n, n)))
    Q = Q * np.sign(np.diag(Rm))
    if np.linalg.det(Q) < 0:
        Q[:, 0] = -Q[:, 0]
    return Q


def random_element(rng, n: int, central: bool = True) -> GroupParams:
    U = lambda size=None: rng.uniform(-2, 2, size)
    R = random_rotation(rng, n)
    g = GroupParams(R, U(n), U(n), U(), U(n), U(), U(n), U(), U(), U(), U())
    return g if central else g.central_zeroed()


def random_cover_element(rng) -> CoverParams:
    Rbar = random_su2(rng)
    g = random_element(rng, 3)
    return CoverParams(Rbar, replace(g, R=su2_project(Rbar)))


# ---------------------------------------------------------------- SU(2)

PAULI = np.array([[[0, 1], [1, 0]], [[0, -1j], [1j, 0]], [[1, 0], [0, -1]]], dtype=complex)


def check_su2(U) -> np.ndarray:
    U = np.asarray(U, dtype=complex)
    if U.shape != (2, 2):
        raise InvalidElement("SU(2) element must be 2x2")
    if np.abs(U.conj().T @ U - np.eye(2)).max() > TOL_BUILD:
        raise InvalidElement("not unitary")
    if abs(np.linalg.det(U) - 1) > TOL_BUILD:
        raise InvalidElement("det != 1")
    return U


def su2_project(U) -> np.ndarray:
    """R with U sigma_j U^dag = sum_i R_ij sigma_i."""
    U = check_su2(U)
    Ud = U.conj().T
    R = np.empty((3, 3))
    for j in range(3):
        X = U @ PAULI[j] @ Ud
        for i in range(3):
            R[i, j] = 0.5 * np.trace(PAULI[i] @ X).real
    return R


def su2_exp(axis, angle) -> np.ndarray:
    """exp(-i angle/2 n.sigma): covers the right-handed rotation by angle about axis."""
    axis = np.asarray(axis, dtype=float)
    axis = axis / np.linalg.norm(axis)
    ns = np.einsum("i,ijk->jk", axis, PAULI)
    return np.cos(angle / 2) * np.eye(2) - 1j * np.sin(angle / 2) * ns


def spin_generator(i: int, j: int) -> np.ndarray:
    """Lift of the so(3) basis element L_ij = e_i e_j^T - e_j e_i^T to su(2) (1-based)."""
    eps = {(1, 2): 3, (2, 3): 1, (3, 1): 2, (2, 1): -3, (3, 2): -1, (1, 3): -2}
    k = eps[(i, j)]
    return 0.5j * np.sign(k) * PAULI[abs(k) - 1]


def _half(j) -> int:
    tj = 2 * j
    if abs(tj - round(tj)) > 1e-12 or tj < 0:
        raise ValueError(f"invalid spin j={j}")
    return int(round(tj))


def _poly_pow(c, k):
    out = np.array([1.0 + 0j])
    for _ in range(k):
        out = np.convolve(out, c)
    return out


def wigner_d(j, U) -> np.ndarray:
    """Spin-j matrix of U as the 2j-th symmetric power, basis m = j..-j.

    Basis vectors z1^(j+m) z2^(j-m) / sqrt((j+m)!(j-m)!), acted on by
    f(z) -> f(U^T z), so j = 1/2 returns U itself.
    """
    tj = _half(j)
    U = np.asarray(U, dtype=complex)
    d = tj + 1
    D = np.zeros((d, d), dtype=complex)
    # (U^T z)_1 = U11 z1 + U21 z2, (U^T z)_2 = U12 z1 + U22 z2; polys in z2 power
    c1 = np.array([U[0, 0], U[1, 0]])
    c2 = np.array([U[0, 1], U[1, 1]])
    norm = [np.sqrt(factorial(tj - k) * factorial(k)) for k in range(d)]
    for col in range(d):
        a = tj - col  # power of z1 in the source monomial, (j+m)
        poly = np.convolve(_poly_pow(c1, a), _poly_pow(c2, col))
        # poly[k] is the coefficient of z1^(tj-k) z2^k -> row k
        D[:, col] = poly * np.array(norm) / norm[col]
    return D


def sym_power_gen(j, X) -> np.ndarray:
    """Derivative of wigner_d(j, .) at the identity along X in sl(2), exact."""
    tj = _half(j)
    X = np.asarray(X, dtype=complex)
    d = tj + 1
    out = np.zeros((d, d), dtype=complex)
    for k in range(d):
        a, b = tj - k, k
        out[k, k] = X[0, 0] * a + X[1, 1] * b
        if k + 1 < d:
            out[k + 1, k] = X[1, 0] * np.sqrt(a * (b + 1))
        if k > 0:
            out[k - 1, k] = X[0, 1] * np.sqrt(b * (a + 1))
    return out


def spin_matrices(j) -> dict:
    """Hermitian S_ij with D(exp(theta lift(L_ij))) = exp(-i theta S_ij)."""
    return {(a, b): 1j * sym_power_gen(j, spin_generator(a, b)) for (a, b) in ((1, 2), (1, 3), (2, 3))}
