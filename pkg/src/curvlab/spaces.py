"""Inner-product spaces carrying complex and quaternionic structure.

Everything lives in R^m with the standard dot product and the standard
orthonormal basis, so structures and isometries are plain dense matrices.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import (
    CommutationError,
    DimensionMismatchError,
    DimensionNotMultipleOf4Error,
    NotAntiInvolutionError,
    NotOrthogonalError,
    NotSquareError,
    OddDimensionError,
)

DEFAULT_TOL = 1e-10
LINE_EQ_TOL = 1e-8


def _freeze(arr) -> np.ndarray:
    out = np.array(arr, dtype=float)
    out.setflags(write=False)
    return out


@dataclass(frozen=True, eq=False)
class ComplexStructure:
    """Orthogonal anti-involution: J @ J = -I and J.T @ J = I."""

    matrix: np.ndarray

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]

    def apply(self, v: np.ndarray) -> np.ndarray:
        return self.matrix @ v


def validate_complex_structure(matrix, tol: float = DEFAULT_TOL) -> ComplexStructure:
    """Validate the anti-involution and orthogonality residuals of ``matrix``."""
    mat = np.asarray(matrix, dtype=float)
    if mat.ndim != 2 or mat.shape[0] != mat.shape[1]:
        raise NotSquareError(f"expected a square matrix, got shape {mat.shape}")
    m = mat.shape[0]
    if m % 2:
        raise OddDimensionError(f"complex structures need even dimension, got m={m}")
    eye = np.eye(m)
    orth = float(np.max(np.abs(mat.T @ mat - eye)))
    if orth > tol:
        raise NotOrthogonalError(f"max |J.T@J - I| = {orth:.3e} exceeds tol {tol:.1e}")
    anti = float(np.max(np.abs(mat @ mat + eye)))
    if anti > tol:
        raise NotAntiInvolutionError(f"max |J@J + I| = {anti:.3e} exceeds tol {tol:.1e}")
    return ComplexStructure(_freeze(mat))


def standard_complex_structure(m: int) -> ComplexStructure:
    """Block-diagonal structure with 2x2 blocks [[0, -1], [1, 0]]."""
    if m < 2 or m % 2:
        raise OddDimensionError(f"need even m >= 2, got m={m}")
    block = np.array([[0.0, -1.0], [1.0, 0.0]])
    return ComplexStructure(_freeze(np.kron(np.eye(m // 2), block)))


# Left multiplication by i, j, k on R^4 identified with the quaternions.
_QUAT_I = np.array([[0, -1, 0, 0], [1, 0, 0, 0], [0, 0, 0, -1], [0, 0, 1, 0]])
_QUAT_J = np.array([[0, 0, -1, 0], [0, 0, 0, 1], [1, 0, 0, 0], [0, -1, 0, 0]])
_QUAT_K = np.array([[0, 0, 0, -1], [0, 0, -1, 0], [0, 1, 0, 0], [1, 0, 0, 0]])


@dataclass(frozen=True, eq=False)
class QuaternionTriple:
    """Anticommuting structures j1, j2 together with j3 = j1 @ j2."""

    j1: ComplexStructure
    j2: ComplexStructure
    j3: ComplexStructure

    @property
    def dim(self) -> int:
        return self.j1.dim


def build_quaternion_triple(m: int) -> QuaternionTriple:
    """Replicate the 4x4 quaternion blocks along the diagonal of an m x m space.

    The blocks are integer matrices, so the multiplication table and the
    anticommutation relations hold exactly.
    """
    if m <= 0 or m % 4:
        raise DimensionNotMultipleOf4Error(f"quaternionic structure needs m = 4n, got m={m}")
    reps = np.eye(m // 4, dtype=int)
    mats = [np.kron(reps, block) for block in (_QUAT_I, _QUAT_J, _QUAT_K)]
    assert (mats[0] @ mats[1] == mats[2]).all()
    for a in range(3):
        assert (mats[a] @ mats[a] == -np.eye(m, dtype=int)).all()
        for b in range(a + 1, 3):
            assert (mats[a] @ mats[b] + mats[b] @ mats[a] == 0).all()
    j1, j2, j3 = (ComplexStructure(_freeze(mat)) for mat in mats)
    return QuaternionTriple(j1, j2, j3)


@dataclass(frozen=True, eq=False)
class ComplexIsometry:
    """Orthogonal matrix commuting with an attached complex structure."""

    matrix: np.ndarray

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]

    def apply(self, v: np.ndarray) -> np.ndarray:
        return self.matrix @ v


def validate_complex_isometry(
    matrix,
    j_domain: ComplexStructure,
    j_target: ComplexStructure | None = None,
    tol: float = DEFAULT_TOL,
) -> ComplexIsometry:
    """Check orthogonality and the intertwining relation theta @ J1 = J2 @ theta."""
    mat = np.asarray(matrix, dtype=float)
    if mat.ndim != 2 or mat.shape[0] != mat.shape[1]:
        raise NotSquareError(f"expected a square matrix, got shape {mat.shape}")
    if mat.shape[0] != j_domain.dim:
        raise DimensionMismatchError(
            f"isometry is {mat.shape[0]}-dimensional, structure is {j_domain.dim}-dimensional"
        )
    orth = float(np.max(np.abs(mat.T @ mat - np.eye(mat.shape[0]))))
    if orth > tol:
        raise NotOrthogonalError(f"max |theta.T@theta - I| = {orth:.3e} exceeds tol {tol:.1e}")
    target = j_domain if j_target is None else j_target
    comm = float(np.max(np.abs(mat @ j_domain.matrix - target.matrix @ mat)))
    if comm > tol:
        raise CommutationError(f"max |theta@J1 - J2@theta| = {comm:.3e} exceeds tol {tol:.1e}")
    return ComplexIsometry(_freeze(mat))


def theta_map(triple: QuaternionTriple) -> ComplexIsometry:
    """The isometry (I + j2)/sqrt(2).

    It commutes with j2, squares to j2, and swaps the roles of j1 and j3 up to
    sign: theta @ j1 = -j3 @ theta and theta @ j3 = j1 @ theta.
    """
    m = triple.dim
    return ComplexIsometry(_freeze((np.eye(m) + triple.j2.matrix) / np.sqrt(2.0)))


@dataclass(frozen=True, eq=False)
class ComplexLine:
    """J-invariant 2-plane Span{x, Jx}, stored with a canonical unit representative.

    Lines compare equal through their orthogonal projectors, never through the
    representative: any unit vector in the plane spans the same line.
    """

    representative: np.ndarray
    structure: ComplexStructure
    projector: np.ndarray

    @property
    def dim(self) -> int:
        return self.representative.shape[0]

    def same_line(self, other: "ComplexLine", tol: float = LINE_EQ_TOL) -> bool:
        if self.projector.shape != other.projector.shape:
            return False
        return float(np.max(np.abs(self.projector - other.projector))) <= tol


def complex_line(vector, structure: ComplexStructure, tol: float = DEFAULT_TOL) -> ComplexLine:
    """Build the line through ``vector``, normalizing and sign-canonicalizing it."""
    x = np.asarray(vector, dtype=float)
    if x.shape != (structure.dim,):
        raise DimensionMismatchError(
            f"vector of shape {x.shape} does not match dimension {structure.dim}"
        )
    nrm = float(np.linalg.norm(x))
    if nrm < 1e-12:
        raise ValueError("cannot span a complex line with a (near-)zero vector")
    x = x / nrm
    # Deterministic tie-break: first coordinate of visible size is made positive.
    lead = int(np.argmax(np.abs(x) > 1e-9))
    if x[lead] < 0:
        x = -x
    jx = structure.apply(x)
    projector = np.outer(x, x) + np.outer(jx, jx)
    return ComplexLine(_freeze(x), structure, _freeze(projector))


def spanning_lines(structure: ComplexStructure) -> list[ComplexLine]:
    """Complex lines through e_i, (e_i + e_j)/sqrt2 and (e_i + J e_j)/sqrt2, deduplicated.

    Any operator- or scalar-valued map that is quadratic in the line
    representative and vanishes on this set vanishes on every complex line:
    the e_i values pin the diagonal coefficients and the e_i + e_j values
    polarize the mixed ones.  Candidates that degenerate to the zero vector
    (possible when J e_j = -e_i) are skipped.
    """
    m = structure.dim
    eye = np.eye(m)
    candidates = [eye[i] for i in range(m)]
    for i in range(m):
        for j in range(i + 1, m):
            candidates.append(eye[i] + eye[j])
            mixed = eye[i] + structure.matrix[:, j]
            if np.linalg.norm(mixed) > 1e-8:
                candidates.append(mixed)
    lines: list[ComplexLine] = []
    for vec in candidates:
        line = complex_line(vec, structure)
        if not any(line.same_line(kept) for kept in lines):
            lines.append(line)
    return lines


def random_unit_vector(m: int, rng: np.random.Generator) -> np.ndarray:
    """Normalized standard normal sample; rejection-free."""
    v = rng.standard_normal(m)
    return v / np.linalg.norm(v)


def random_orthogonal(m: int, rng: np.random.Generator) -> np.ndarray:
    """Haar-ish orthogonal matrix from a QR factorization with fixed sign convention."""
    q, r = np.linalg.qr(rng.standard_normal((m, m)))
    return q * np.sign(np.diag(r))
