"""Pin^c/Spin^c elements, the twisted adjoint, and Spin/Spin^c lifts.

The twisted adjoint rho(g)(v) = (-1)^{|g|} g v g^{-1} lands in the orthogonal
group. Element validation is by certificate: constructors accept an explicit
factorization into unit vectors and a unit phase, or a raw homogeneous
multivector whose unit condition g * star(g) = 1 is checked (exactly for
rational data, within tolerance for numeric data).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np
import scipy.linalg

from .clifford import CliffordAlgebra, Multivector, ccl, ccl_interleaved
from .linalg import default_tol, is_unitary, realify
from .scalars import GaussianRational, MultiPoly

EVEN, ODD = 0, 1


class PinElement:
    """Validated element of Pin^c: homogeneous parity and unit norm."""

    __slots__ = ("value", "parity", "factors", "phase", "meta")

    def __init__(self, value: Multivector, *, factors=None, phase=None,
                 tol: float | None = None, meta=None):
        parity = value.parity()
        if parity is None:
            raise ValueError("Pin element must have homogeneous parity")
        unit = value * value.star()
        if value.exact:
            if unit != value.algebra.scalar(1):
                raise ValueError("Pin element must satisfy g * star(g) = 1")
        else:
            if tol is None:
                tol = default_tol()
            if unit.max_diff(value.algebra.scalar(1).to_numeric()) > max(tol, 1e-9) * 100:
                raise ValueError("Pin element must satisfy g * star(g) = 1 within tolerance")
        self.value = value
        self.parity = parity
        self.factors = factors
        self.phase = phase
        self.meta = meta or {}

    @classmethod
    def _trusted(cls, value: Multivector, parity: int, factors=None, phase=None,
                 meta=None) -> "PinElement":
        # products and conjugates of validated elements stay in the group
        self = object.__new__(cls)
        self.value = value
        self.parity = parity
        self.factors = factors
        self.phase = phase
        self.meta = meta or {}
        return self

    @staticmethod
    def identity(algebra: CliffordAlgebra) -> "PinElement":
        return PinElement(algebra.scalar(1), factors=(), phase=GaussianRational.ONE)

    @staticmethod
    def from_factors(algebra: CliffordAlgebra, vectors, phase=1,
                     tol: float | None = None) -> "PinElement":
        """Product of unit grade-1 vectors times a unit complex scalar."""
        value = algebra.scalar(phase)
        kept = []
        for vec in vectors:
            v = vec if isinstance(vec, Multivector) else algebra.vector(vec)
            if v.terms and v.grades() != {1}:
                raise ValueError("certificate factors must be grade-1")
            nsq = v * v
            if v.exact:
                # unit vectors live in the real span of the generators
                if not v.is_real() or nsq != algebra.scalar(1):
                    raise ValueError("certificate factor is not a real unit vector")
            else:
                if tol is None:
                    tol = default_tol()
                if not v.is_real(100 * tol) or abs(nsq.scalar_part() - 1) > 100 * tol:
                    raise ValueError(
                        "certificate factor is not a real unit vector within tolerance")
            kept.append(v)
            value = value * v
        return PinElement(value, factors=tuple(kept), phase=phase, tol=tol)

    @property
    def algebra(self) -> CliffordAlgebra:
        return self.value.algebra

    @property
    def is_even(self) -> bool:
        return self.parity == EVEN

    def inverse_value(self) -> Multivector:
        return self.value.star()

    def bar(self) -> "PinElement":
        return PinElement._trusted(self.value.bar(), self.parity)

    def __mul__(self, other: "PinElement") -> "PinElement":
        factors = None
        if self.factors is not None and other.factors is not None:
            factors = self.factors + other.factors
        return PinElement._trusted(self.value * other.value,
                                   (self.parity + other.parity) & 1, factors=factors)

    def __repr__(self):
        return f"PinElement({self.value})"


@dataclass
class OrthogonalAction:
    """Image of a Pin element under the twisted adjoint representation."""

    exact: bool
    rows: tuple  # tuple of row tuples; Fraction entries when exact, float otherwise

    @property
    def dim(self) -> int:
        return len(self.rows)

    def as_numpy(self) -> np.ndarray:
        return np.array([[float(x) for x in row] for row in self.rows])

    def column(self, j: int):
        return tuple(row[j] for row in self.rows)

    def __matmul__(self, other: "OrthogonalAction") -> "OrthogonalAction":
        if self.exact and other.exact:
            n = self.dim
            rows = tuple(
                tuple(sum(self.rows[i][k] * other.rows[k][j] for k in range(n))
                      for j in range(n))
                for i in range(n)
            )
            return OrthogonalAction(True, rows)
        M = self.as_numpy() @ other.as_numpy()
        return OrthogonalAction(False, tuple(tuple(row) for row in M))

    def transpose(self) -> "OrthogonalAction":
        n = self.dim
        return OrthogonalAction(self.exact,
                                tuple(tuple(self.rows[j][i] for j in range(n))
                                      for i in range(n)))

    def is_orthogonal(self, tol: float = 0.0) -> bool:
        prod = self.transpose() @ self
        n = self.dim
        if self.exact:
            ident = Fraction(1)
            return all(prod.rows[i][j] == (ident if i == j else 0)
                       for i in range(n) for j in range(n))
        return float(np.max(np.abs(prod.as_numpy() - np.eye(n)))) <= tol

    def conjugated_by_signature(self, p: int, q: int) -> "OrthogonalAction":
        """D M D where D negates the sign-representation coordinates."""
        n = self.dim
        if p + q != n:
            raise ValueError("signature does not match dimension")

        def sgn(i):
            return 1 if i < p else -1

        rows = tuple(
            tuple(self.rows[i][j] * (sgn(i) * sgn(j)) for j in range(n))
            for i in range(n)
        )
        return OrthogonalAction(self.exact, rows)

    def __eq__(self, other):
        if not isinstance(other, OrthogonalAction):
            return NotImplemented
        return self.rows == other.rows


def twisted_adjoint(g: PinElement, tol: float | None = None) -> OrthogonalAction:
    """Matrix of rho(g): column k is (-1)^{|g|} g e_k g^{-1} in the generator basis."""
    alg = g.algebra
    ginv = g.inverse_value()
    sign = -1 if g.parity == ODD else 1
    exact = g.value.exact
    if tol is None:
        tol = default_tol()
    cols = []
    for k in range(alg.dim):
        w = g.value * alg.generator(k + 1) * ginv
        if sign < 0:
            w = -w
        col = []
        for i in range(alg.dim):
            c = w.coeff(1 << i)
            if exact:
                if not c.is_real:
                    raise ValueError("twisted adjoint has non-real entries; invalid Pin element")
                col.append(c.re)
            else:
                if abs(c.imag) > 100 * tol:
                    raise ValueError("twisted adjoint has non-real entries; invalid Pin element")
                col.append(c.real)
        residue = w - alg.vector(col)
        if exact:
            if residue:
                raise ValueError("twisted adjoint does not preserve grade 1; invalid Pin element")
        elif residue.max_abs() > 100 * tol:
            raise ValueError("twisted adjoint does not preserve grade 1; invalid Pin element")
        cols.append(col)
    rows = tuple(tuple(cols[j][i] for j in range(alg.dim)) for i in range(alg.dim))
    return OrthogonalAction(exact, rows)


def check_rho_real_equivariance(g: PinElement, rho: OrthogonalAction | None = None) -> bool:
    """Does rho(conj g) equal conj(rho(g))? (Real homomorphism property.)

    Conjugation on the orthogonal side negates the sign-representation
    coordinates of the signature. Pass a precomputed ``rho`` to reuse it.
    """
    alg = g.algebra
    lhs = twisted_adjoint(g.bar())
    if rho is None:
        rho = twisted_adjoint(g)
    if alg.convention == "interleaved":
        # sign generators sit at the even positions
        n = alg.dim

        def sgn(i):
            return -1 if i % 2 == 1 else 1

        rows = tuple(
            tuple(rho.rows[i][j] * (sgn(i) * sgn(j)) for j in range(n))
            for i in range(n)
        )
        rhs = OrthogonalAction(rho.exact, rows)
    else:
        rhs = rho.conjugated_by_signature(alg.p, alg.q)
    if lhs.exact and rhs.exact:
        return lhs == rhs
    return float(np.max(np.abs(lhs.as_numpy() - rhs.as_numpy()))) <= default_tol()


def is_fixed_spinc(g: PinElement, tol: float | None = None) -> bool:
    """Membership of the C2-fixed subgroup: all coefficients real."""
    if tol is None:
        tol = default_tol()
    return g.value.is_real(tol)


# -- Spin lift of special orthogonal matrices ---------------------------------------


def _reflect_inplace(A: np.ndarray, u: np.ndarray):
    A -= 2.0 * np.outer(u, u @ A)


def householder_factors(R: np.ndarray, tol: float) -> list[np.ndarray]:
    """Factor R in SO(n) as refl(u_1) ... refl(u_m) with an even number of terms.

    Columns are fixed one by one; a nearly-fixed column is skipped, and a
    column with nonnegative e_j component uses the two-reflection route
    through the stabilized midpoint (a + e_j)/|a + e_j|.
    """
    n = R.shape[0]
    A = np.array(R, dtype=float, copy=True)
    factors: list[np.ndarray] = []
    for j in range(n):
        a = A[:, j].copy()
        e = np.zeros(n)
        e[j] = 1.0
        if float(np.linalg.norm(a - e)) < 1e-13:
            continue
        if a[j] >= 0.0:
            h = a + e
            h /= np.linalg.norm(h)
            _reflect_inplace(A, h)
            _reflect_inplace(A, e)
            factors.append(h)
            factors.append(e)
        else:
            u = a - e
            u /= np.linalg.norm(u)
            _reflect_inplace(A, u)
            factors.append(u)
    if float(np.max(np.abs(A - np.eye(n)))) > max(1e-11, 10 * tol):
        raise ValueError("reflection factorization failed to converge")
    if len(factors) % 2:
        raise ValueError("odd reflection count; determinant is not +1")
    return factors


def _lex_leading_mask(mv: Multivector, floor: float) -> int | None:
    """Smallest blade (lexicographic on index words) with magnitude above floor."""
    alg = mv.algebra
    best = None
    best_key = None
    for mask, c in mv.terms.items():
        if abs(complex(c)) <= floor:
            continue
        key = tuple(i for i in range(alg.dim) if mask & (1 << i))
        if best_key is None or key < best_key:
            best_key = key
            best = mask
    return best


def _normalize_sign(mv: Multivector, tol: float) -> tuple[Multivector, int]:
    lead = _lex_leading_mask(mv, tol)
    if lead is None:
        return mv, 1
    c = complex(mv.terms[lead])
    if c.real < -tol or (abs(c.real) <= tol and c.imag < 0):
        return -mv, -1
    return mv, 1


def spin_lift(R, tol: float | None = None, algebra: CliffordAlgebra | None = None) -> PinElement:
    """Even Pin element g with twisted_adjoint(g) = R, for R in SO(n).

    The branch sign is fixed so the lexicographically smallest blade with
    magnitude above tolerance has positive real part (ties broken by positive
    imaginary part). Matrices with determinant -1 are rejected.
    """
    if tol is None:
        tol = default_tol()
    A = np.asarray(R, dtype=float)
    if A.ndim != 2 or A.shape[0] != A.shape[1]:
        raise ValueError("non-square input")
    n = A.shape[0]
    if float(np.max(np.abs(A.T @ A - np.eye(n)))) > tol:
        raise ValueError("input is not orthogonal within tolerance")
    if np.linalg.det(A) < 0:
        raise ValueError("determinant -1: odd Pin lift not handled by this operation")
    if algebra is None:
        algebra = ccl(n, 0)
    elif algebra.dim != n:
        raise ValueError("algebra dimension does not match the matrix")
    factors = householder_factors(A, tol)
    value = algebra.scalar(1 + 0j)
    vecs = []
    for u in factors:
        v = algebra.vector([complex(x) for x in u])
        vecs.append(v)
        value = value * v
    value, flip = _normalize_sign(value, tol)
    phase = complex(flip)
    if vecs and flip < 0:
        vecs[0] = -vecs[0]
    return PinElement(value, factors=tuple(vecs), phase=phase, tol=tol,
                      meta={"reflections": len(factors)})


def rho_residual(g: PinElement, R) -> float:
    """Max-norm residual between twisted_adjoint(g) and a target matrix."""
    return float(np.max(np.abs(twisted_adjoint(g).as_numpy() - np.asarray(R, dtype=float))))


def unit_residual(g: PinElement) -> float:
    unit = g.value * g.value.star()
    one = g.algebra.scalar(1)
    if g.value.exact:
        return 0.0 if unit == one else 1.0
    return unit.max_diff(one.to_numeric())


# -- the Spin^c lift of unitary matrices ---------------------------------------------


def _random_unitary(n: int, rng) -> np.ndarray:
    Z = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
    Q, Rm = np.linalg.qr(Z)
    d = np.diag(Rm)
    return Q * (d / np.abs(d))


def phi_lift(U, tol: float | None = None, rng=None) -> PinElement:
    """Canonical Spin^c(n,n) lift of a unitary matrix, in the interleaved basis.

    For U = V diag(exp(i theta_j)) V* the element is the product of the plane
    rotors cos(theta_j/2) - sin(theta_j/2) e_{2j-1} e_{2j}, conjugated by the
    spin lift of realify(V), times the central phase exp(i sum(theta_j)/2)
    whose square is det(U). Angles use the principal branch (-pi, pi]; the
    result does not depend on the eigendecomposition. Pass ``rng`` to
    randomize the decomposition (used to exercise canonicity).
    """
    if tol is None:
        tol = default_tol()
    A = np.asarray(U, dtype=complex)
    if A.ndim != 2 or A.shape[0] != A.shape[1]:
        raise ValueError("non-square input")
    if not is_unitary(A, tol):
        raise ValueError("input is not unitary within tolerance")
    n = A.shape[0]
    algebra = ccl_interleaved(n)
    if rng is not None:
        Q = _random_unitary(n, rng)
        T, Z = scipy.linalg.schur(Q.conj().T @ A @ Q, output="complex")
        V = Q @ Z
    else:
        T, V = scipy.linalg.schur(A, output="complex")
    d = np.diag(T)
    if float(np.max(np.abs(T - np.diag(d)))) > max(100 * tol, 1e-8):
        raise ValueError("spectral decomposition failed; input too far from unitary")
    thetas = np.angle(d)
    thetas[thetas <= -math.pi + 1e-300] = math.pi
    near_branch = bool(np.any(np.abs(np.abs(thetas) - math.pi) < 1e-6))

    rotor = algebra.scalar(1 + 0j)
    rotor_factors = []
    for j, theta in enumerate(thetas):
        c = math.cos(theta / 2.0)
        s = math.sin(theta / 2.0)
        if abs(s) < 1e-300 and c > 0:
            continue
        coeffs = [0j] * (2 * n)
        coeffs[2 * j] = complex(c)
        coeffs[2 * j + 1] = complex(s)
        v1 = algebra.vector(coeffs)
        v2 = algebra.generator(2 * j + 1).to_numeric()
        rotor_factors.extend([v1, v2])
        rotor = rotor * v1 * v2

    L = spin_lift(realify(V, tol), tol, algebra=algebra)
    phase = complex(np.exp(1j * float(np.sum(thetas)) / 2.0))
    value = (L.value * rotor * L.value.star()).scale(phase)
    factors = None
    if L.factors is not None:
        reversed_L = tuple(reversed(L.factors))
        factors = L.factors + tuple(rotor_factors) + reversed_L
    return PinElement(
        value,
        factors=factors,
        phase=phase,
        tol=tol,
        meta={
            "thetas": [float(t) for t in thetas],
            "near_branch_cut": near_branch,
            "phase": phase,
        },
    )


def check_phi_real(U, tol: float | None = None) -> bool:
    """Does phi(conj U) equal the Real conjugate of phi(U)?"""
    if tol is None:
        tol = default_tol()
    a = phi_lift(np.conj(np.asarray(U, dtype=complex)), tol)
    b = phi_lift(U, tol)
    return a.value.max_diff(b.value.bar()) <= max(tol, 1e-9)


# -- polynomial model of the i_V action ----------------------------------------------


def iv_model_action(g: PinElement, x: Multivector, f: MultiPoly):
    """(g, v (x) f) -> (g*v, f o rho(g)^{-1}) on the polynomial model of L^2(V)."""
    alg = g.algebra
    if x.algebra is not alg:
        raise ValueError("signature mismatch")
    if f.nvars != alg.dim:
        raise ValueError("variable-count mismatch")
    if not g.value.exact:
        raise ValueError("polynomial action requires exact rational Pin elements")
    rho = twisted_adjoint(g)
    rho_inv = rho.transpose()  # orthogonal inverse
    substituted = f.compose_linear([list(row) for row in rho_inv.rows])
    return g.value * x, substituted
