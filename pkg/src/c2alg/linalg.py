"""Matrix kernels: realification, symmetric-unitary square roots, fixed-point retraction.

Eigenvalue-based routines work in double precision with a default tolerance of
1e-9, overridable per call or through the ``C2ALG_TOL`` environment variable.
The Real-vector-space splitting works exactly on Gaussian-rational data.
"""

from __future__ import annotations

import math
import os
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .scalars import GaussianRational, rational_from_string


def default_tol() -> float:
    return float(os.environ.get("C2ALG_TOL", "1e-9"))


def _as_matrix(M) -> np.ndarray:
    A = np.asarray(M, dtype=complex)
    if A.ndim != 2:
        raise ValueError("expected a matrix")
    if not np.all(np.isfinite(A)):
        raise ValueError("matrix entries must be finite")
    return A


def is_unitary(M, tol: float | None = None) -> bool:
    """True iff the max-norm of M*M - I is within tol. Rejects non-square input."""
    A = _as_matrix(M)
    if A.shape[0] != A.shape[1]:
        raise ValueError("non-square input")
    if tol is None:
        tol = default_tol()
    n = A.shape[0]
    return float(np.max(np.abs(A.conj().T @ A - np.eye(n)))) <= tol


def realify(U, tol: float | None = None) -> np.ndarray:
    """Realification U(n) -> SO(2n) in the interleaved basis.

    Coordinate 2j-1 carries the real part and 2j the imaginary part of the
    j-th complex coordinate, so each entry u = a+bi becomes the 2x2 block
    [[a, -b], [b, a]].
    """
    A = _as_matrix(U)
    if tol is None:
        tol = default_tol()
    if not is_unitary(A, tol):
        raise ValueError("input is not unitary within tolerance")
    n = A.shape[0]
    R = np.zeros((2 * n, 2 * n))
    R[0::2, 0::2] = A.real
    R[0::2, 1::2] = -A.imag
    R[1::2, 0::2] = A.imag
    R[1::2, 1::2] = A.real
    return R


def _principal_half_angle(theta: float) -> float:
    """Half of theta with theta normalized to (-pi, pi]; -pi maps to pi."""
    if theta <= -math.pi + 1e-300:
        theta = math.pi
    return theta / 2.0


@dataclass
class SymmetricSqrt:
    """Result of a symmetric-unitary square root."""

    matrix: np.ndarray
    thetas: np.ndarray
    orthogonal: np.ndarray
    near_branch_cut: bool
    residuals: dict = field(default_factory=dict)


def symmetric_unitary_factor(U, tol: float | None = None):
    """Factor a symmetric unitary as U = O diag(exp(i theta)) O^T, O real orthogonal.

    Computed by simultaneously diagonalizing the commuting real symmetric
    matrices Re U and Im U; eigenvalue clusters of Re U are merged below a
    tolerance before diagonalizing Im U on each cluster.
    """
    A = _as_matrix(U)
    if tol is None:
        tol = default_tol()
    n = A.shape[0]
    if A.shape[0] != A.shape[1]:
        raise ValueError("non-square input")
    if not is_unitary(A, tol):
        raise ValueError("input is not unitary within tolerance")
    if float(np.max(np.abs(A - A.T))) > tol:
        raise ValueError("input is not symmetric within tolerance")
    X = np.ascontiguousarray(A.real)
    Y = np.ascontiguousarray(A.imag)
    X = (X + X.T) / 2
    Y = (Y + Y.T) / 2
    vals, O = np.linalg.eigh(X)
    cluster_tol = max(tol, 1e-12) * max(1.0, n)
    start = 0
    while start < n:
        stop = start + 1
        while stop < n and vals[stop] - vals[stop - 1] <= cluster_tol:
            stop += 1
        if stop - start > 1:
            Qc = O[:, start:stop]
            sub = Qc.T @ Y @ Qc
            sub = (sub + sub.T) / 2
            _, W = np.linalg.eigh(sub)
            O[:, start:stop] = Qc @ W
        start = stop
    x = np.einsum("ji,jk,ki->i", O, X, O)
    y = np.einsum("ji,jk,ki->i", O, Y, O)
    mods = np.hypot(x, y)
    if float(np.max(np.abs(mods - 1.0))) > max(10 * tol, 1e-8):
        raise ValueError("simultaneous diagonalization failed; input too far from symmetric unitary")
    thetas = np.arctan2(y, x)
    thetas[thetas <= -math.pi + 1e-300] = math.pi
    return O, thetas


def symmetric_unitary_sqrt(U, tol: float | None = None) -> SymmetricSqrt:
    """Principal symmetric square root S of a symmetric unitary U.

    S^2 = U, S^T = S, S unitary; eigenvalue branch exp(i theta/2) with theta
    in (-pi, pi], so the eigenvalue -1 maps to i. Eigenvalues near the branch
    cut are flagged in the result metadata.
    """
    if tol is None:
        tol = default_tol()
    O, thetas = symmetric_unitary_factor(U, tol)
    half = np.array([_principal_half_angle(t) for t in thetas])
    S = (O * np.exp(1j * half)) @ O.T
    A = _as_matrix(U)
    residuals = {
        "square": float(np.max(np.abs(S @ S - A))),
        "symmetry": float(np.max(np.abs(S - S.T))),
        "unitarity": float(np.max(np.abs(S.conj().T @ S - np.eye(A.shape[0])))),
    }
    near = bool(np.any(np.abs(np.abs(thetas) - math.pi) < 1e-6))
    return SymmetricSqrt(S, thetas, O, near, residuals)


# -- exact splitting of Real vector spaces ------------------------------------------


def _gr(value) -> GaussianRational:
    return GaussianRational.from_value(value)


def _apply_involution(C, v):
    """Conjugate-linear map v -> C * conj(v) on GaussianRational vectors."""
    n = len(v)
    out = []
    for row in C:
        acc = GaussianRational.ZERO
        for c, x in zip(row, v):
            acc = acc + c * x.conjugate()
        out.append(acc)
    return out


def _check_involution(C):
    n = len(C)
    if any(len(row) != n for row in C):
        raise ValueError("involution matrix must be square")
    # C * conj(C) = I  <=>  the conjugate-linear map squares to the identity
    for j in range(n):
        basis = [GaussianRational.ONE if i == j else GaussianRational.ZERO for i in range(n)]
        twice = _apply_involution(C, _apply_involution(C, basis))
        for i, entry in enumerate(twice):
            expected = GaussianRational.ONE if i == j else GaussianRational.ZERO
            if entry != expected:
                raise ValueError("involution axiom violated: the map does not square to the identity")


def complexify_split(v, involution):
    """Split v = v1 (x) 1 + v2 (x) i with v1, v2 fixed by the involution.

    ``involution`` is the matrix C of a conjugate-linear involution
    x -> C conj(x); the computation is exact on Gaussian-rational data and
    ``v1 + i*v2`` reassembles v.
    """
    vec = [_gr(x) for x in v]
    C = [[_gr(x) for x in row] for row in involution]
    if len(C) != len(vec):
        raise ValueError("dimension mismatch between vector and involution")
    _check_involution(C)
    cv = _apply_involution(C, vec)
    half = Fraction(1, 2)
    minus_half_i = GaussianRational(0, Fraction(-1, 2))
    v1 = [(x + y) * half for x, y in zip(vec, cv)]
    v2 = [(x - y) * minus_half_i for x, y in zip(vec, cv)]
    return v1, v2


def complexify_reassemble(v1, v2):
    i = GaussianRational.I
    return [_gr(a) + i * _gr(b) for a, b in zip(v1, v2)]


# -- fixed-point retraction ----------------------------------------------------------


@dataclass
class Retraction:
    """Conjugation-fixed representative of a conjugation-fixed orbit."""

    frame: np.ndarray
    fiber: np.ndarray
    sqrt: SymmetricSqrt
    residuals: dict


def fixed_point_retraction(x, y, tol: float | None = None) -> Retraction:
    """Move (x, y) to a conjugation-fixed representative of its orbit.

    ``x`` is an N x n isometry (a unitary frame: x*x = I) acted on the right,
    ``y`` an n-vector (or n x k block) acted on the left. The orbit class
    [x, y] must be conjugation-fixed: conj(x) = x U* for some U in U(n). That
    U is necessarily symmetric; with S its symmetric square root, the
    representative (x S*, S y) has real entries and lies in the same orbit.
    """
    if tol is None:
        tol = default_tol()
    X = _as_matrix(x)
    Y = np.asarray(y, dtype=complex)
    n = X.shape[1]
    if Y.shape[0] != n:
        raise ValueError("fiber dimension does not match the frame")
    if float(np.max(np.abs(X.conj().T @ X - np.eye(n)))) > tol:
        raise ValueError("frame columns are not orthonormal within tolerance")
    Ustar = X.conj().T @ X.conj()
    fixed_res = float(np.max(np.abs(X.conj() - X @ Ustar)))
    if fixed_res > max(100 * tol, 1e-7):
        raise ValueError(f"orbit is not conjugation-fixed (residual {fixed_res:.3e})")
    U = Ustar.conj().T
    sqrt = symmetric_unitary_sqrt(U, tol)
    S = sqrt.matrix
    frame = X @ S.conj().T
    fiber = S @ Y
    residuals = {
        "fixed_orbit": fixed_res,
        "frame_imag": float(np.max(np.abs(frame.imag))),
        "fiber_imag": float(np.max(np.abs(fiber.imag))) if fiber.size else 0.0,
        "orbit_frame": float(np.max(np.abs(frame @ S - X))),
        "orbit_fiber": float(np.max(np.abs(S.conj().T @ fiber - Y))) if fiber.size else 0.0,
    }
    return Retraction(frame, fiber, sqrt, residuals)


# -- JSON matrix format ---------------------------------------------------------------


def _entry_to_float(value) -> float:
    if isinstance(value, str):
        return float(rational_from_string(value))
    if isinstance(value, (int, float)):
        return float(value)
    raise ValueError(f"bad matrix entry component: {value!r}")


def matrix_from_json(obj) -> np.ndarray:
    """Parse {"rows": n, "cols": m, "entries": [[[re, im], ...], ...]}.

    Entry components may be floats or exact "p/q" strings.
    """
    try:
        rows = int(obj["rows"])
        cols = int(obj["cols"])
        entries = obj["entries"]
    except (KeyError, TypeError, ValueError) as exc:
        raise ValueError("matrix JSON must have rows, cols, entries") from exc
    if len(entries) != rows:
        raise ValueError("entry row count does not match rows")
    M = np.zeros((rows, cols), dtype=complex)
    for i, row in enumerate(entries):
        if len(row) != cols:
            raise ValueError("entry column count does not match cols")
        for j, pair in enumerate(row):
            if not isinstance(pair, (list, tuple)) or len(pair) != 2:
                raise ValueError("each entry must be a [re, im] pair")
            M[i, j] = complex(_entry_to_float(pair[0]), _entry_to_float(pair[1]))
    return M


def matrix_to_json(M) -> dict:
    A = _as_matrix(M)
    return {
        "rows": int(A.shape[0]),
        "cols": int(A.shape[1]),
        "entries": [[[float(z.real), float(z.imag)] for z in row] for row in A],
    }
