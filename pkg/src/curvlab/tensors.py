"""Dense rank-4 curvature tensors.

Storage, symmetry validation/projection, the canonical constant-curvature
builders, orthogonal pullbacks, and an orthonormal basis of the full solution
space of the curvature symmetries.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Sequence

import numpy as np

from .errors import DimensionMismatchError, NotOrthogonalError, SymmetryViolationError
from .spaces import DEFAULT_TOL, ComplexIsometry, ComplexStructure, _freeze, validate_complex_structure

RANK_TOL = 1e-8


@dataclass(frozen=True, eq=False)
class AlgebraicCurvatureTensor:
    """Rank-4 array with the antisymmetry, pair-swap and first-Bianchi symmetries."""

    entries: np.ndarray

    @property
    def dim(self) -> int:
        return self.entries.shape[0]

    def evaluate(self, x, y, z, w) -> float:
        return float(np.einsum("ijkl,i,j,k,l->", self.entries, x, y, z, w, optimize=True))

    def norm(self) -> float:
        return float(np.linalg.norm(self.entries))

    def max_abs(self) -> float:
        return float(np.max(np.abs(self.entries)))

    def __add__(self, other: "AlgebraicCurvatureTensor") -> "AlgebraicCurvatureTensor":
        return AlgebraicCurvatureTensor(_freeze(self.entries + other.entries))

    def __sub__(self, other: "AlgebraicCurvatureTensor") -> "AlgebraicCurvatureTensor":
        return AlgebraicCurvatureTensor(_freeze(self.entries - other.entries))

    def __neg__(self) -> "AlgebraicCurvatureTensor":
        return AlgebraicCurvatureTensor(_freeze(-self.entries))

    def __mul__(self, scalar: float) -> "AlgebraicCurvatureTensor":
        return AlgebraicCurvatureTensor(_freeze(self.entries * float(scalar)))

    __rmul__ = __mul__


@dataclass(frozen=True, eq=False)
class ComplexModel:
    """Bundle of a complex structure and a curvature tensor on the same space."""

    structure: ComplexStructure
    tensor: AlgebraicCurvatureTensor

    def __post_init__(self):
        if self.structure.dim != self.tensor.dim:
            raise DimensionMismatchError(
                f"structure is {self.structure.dim}-dimensional, "
                f"tensor is {self.tensor.dim}-dimensional"
            )

    @property
    def dim(self) -> int:
        return self.structure.dim


def symmetry_residuals(entries: np.ndarray) -> dict[str, tuple[float, tuple[int, int, int, int]]]:
    """Max violation and worst quadruple for each of the three symmetry families."""
    a = entries
    defects = {
        "antisymmetry": a + a.transpose(1, 0, 2, 3),
        "pair_swap": a - a.transpose(2, 3, 0, 1),
        "bianchi": a + a.transpose(1, 2, 0, 3) + a.transpose(2, 0, 1, 3),
    }
    out = {}
    for name, d in defects.items():
        flat = int(np.argmax(np.abs(d)))
        idx = np.unravel_index(flat, d.shape)
        out[name] = (float(np.max(np.abs(d))), tuple(int(v) for v in idx))
    return out


def validate_or_project(raw, mode: str = "strict", tol: float = DEFAULT_TOL) -> AlgebraicCurvatureTensor:
    """Accept a rank-4 array as a curvature tensor, or project it onto the space of them.

    In strict mode the three symmetry families must hold within ``tol``
    (relative to 1 + the largest entry); otherwise the orthogonal projection
    onto the solution space of the symmetries is returned, which is idempotent
    and the identity on already-valid input.
    """
    arr = np.asarray(raw, dtype=float)
    if arr.ndim != 4 or len(set(arr.shape)) != 1:
        raise DimensionMismatchError(f"expected an m^4 array, got shape {arr.shape}")
    if mode == "strict":
        scale = 1.0 + float(np.max(np.abs(arr))) if arr.size else 1.0
        residuals = symmetry_residuals(arr)
        name = max(residuals, key=lambda k: residuals[k][0])
        worst, quadruple = residuals[name]
        if worst > tol * scale:
            raise SymmetryViolationError(
                f"{name} violated at quadruple {quadruple}: residual {worst:.3e}",
                quadruple=quadruple,
                residual=worst,
            )
        return AlgebraicCurvatureTensor(_freeze(arr))
    if mode == "project":
        return curvature_space_basis(arr.shape[0]).project(arr)
    raise ValueError(f"unknown mode {mode!r}, expected 'strict' or 'project'")


def build_A0(m: int) -> AlgebraicCurvatureTensor:
    """Constant sectional curvature +1 tensor: <x,w><y,z> - <x,z><y,w>."""
    if m < 2:
        raise DimensionMismatchError(f"need m >= 2, got m={m}")
    eye = np.eye(m)
    entries = np.einsum("il,jk->ijkl", eye, eye) - np.einsum("ik,jl->ijkl", eye, eye)
    return AlgebraicCurvatureTensor(_freeze(entries))


def build_APhi(phi) -> AlgebraicCurvatureTensor:
    """Curvature tensor <x,Pw><y,Pz> - <x,Pz><y,Pw> - 2<x,Py><z,Pw> of a structure P.

    Quadratic in P, so P and -P give the same tensor.
    """
    if isinstance(phi, ComplexStructure):
        p = phi.matrix
    else:
        p = validate_complex_structure(phi).matrix
    entries = (
        np.einsum("il,jk->ijkl", p, p)
        - np.einsum("ik,jl->ijkl", p, p)
        - 2.0 * np.einsum("ij,kl->ijkl", p, p)
    )
    return AlgebraicCurvatureTensor(_freeze(entries))


def tensor_inner_product(a: AlgebraicCurvatureTensor, b: AlgebraicCurvatureTensor) -> float:
    """Full contraction over all index quadruples; basis independent."""
    if a.dim != b.dim:
        raise DimensionMismatchError(f"dimensions differ: {a.dim} vs {b.dim}")
    return float(np.dot(a.entries.ravel(), b.entries.ravel()))


def pullback(theta, tensor: AlgebraicCurvatureTensor, tol: float = DEFAULT_TOL) -> AlgebraicCurvatureTensor:
    """(theta*A)(x,y,z,w) = A(theta x, theta y, theta z, theta w) for orthogonal theta."""
    mat = theta.matrix if isinstance(theta, ComplexIsometry) else np.asarray(theta, dtype=float)
    if mat.shape != (tensor.dim, tensor.dim):
        raise DimensionMismatchError(
            f"map of shape {mat.shape} cannot pull back a {tensor.dim}-dimensional tensor"
        )
    orth = float(np.max(np.abs(mat.T @ mat - np.eye(tensor.dim))))
    if orth > tol:
        raise NotOrthogonalError(f"max |theta.T@theta - I| = {orth:.3e} exceeds tol {tol:.1e}")
    entries = np.einsum("abcd,ai,bj,ck,dl->ijkl", tensor.entries, mat, mat, mat, mat, optimize=True)
    return AlgebraicCurvatureTensor(_freeze(entries))


def curvature_space_dim(m: int) -> int:
    """Dimension m^2 (m^2 - 1) / 12 of the space of curvature tensors."""
    return m * m * (m * m - 1) // 12


@dataclass(frozen=True, eq=False)
class CurvatureBasis:
    """Orthonormal basis (as flattened rows) of the space of curvature tensors."""

    dim: int
    matrix: np.ndarray  # shape (count, m**4), orthonormal rows

    @property
    def count(self) -> int:
        return self.matrix.shape[0]

    @property
    def tensors(self) -> np.ndarray:
        m = self.dim
        return self.matrix.reshape(self.count, m, m, m, m)

    def coordinates(self, tensor: AlgebraicCurvatureTensor) -> np.ndarray:
        if tensor.dim != self.dim:
            raise DimensionMismatchError(f"dimensions differ: {tensor.dim} vs {self.dim}")
        return self.matrix @ tensor.entries.ravel()

    def from_coordinates(self, coords) -> AlgebraicCurvatureTensor:
        coords = np.asarray(coords, dtype=float)
        if coords.shape != (self.count,):
            raise DimensionMismatchError(f"expected {self.count} coordinates, got {coords.shape}")
        m = self.dim
        return AlgebraicCurvatureTensor(_freeze((self.matrix.T @ coords).reshape(m, m, m, m)))

    def project(self, raw) -> AlgebraicCurvatureTensor:
        arr = np.asarray(raw, dtype=float)
        coords = self.matrix @ arr.ravel()
        return self.from_coordinates(coords)


@lru_cache(maxsize=None)
def curvature_space_basis(m: int) -> CurvatureBasis:
    """Solve the symmetry constraints over the m^4 unknowns and return their nullspace.

    The three families (first-pair antisymmetry, pair swap, first Bianchi) are
    stacked as one linear system whose nullspace is computed by SVD; the count
    is checked against m^2 (m^2 - 1) / 12.
    """
    m4 = m**4
    idx = np.arange(m4).reshape(m, m, m, m)
    rows = np.arange(m4)
    constraints = np.zeros((3 * m4, m4))
    constraints[rows, rows] += 1.0
    constraints[rows, idx.transpose(1, 0, 2, 3).ravel()] += 1.0
    constraints[m4 + rows, rows] += 1.0
    constraints[m4 + rows, idx.transpose(2, 3, 0, 1).ravel()] -= 1.0
    constraints[2 * m4 + rows, rows] += 1.0
    constraints[2 * m4 + rows, idx.transpose(1, 2, 0, 3).ravel()] += 1.0
    constraints[2 * m4 + rows, idx.transpose(2, 0, 1, 3).ravel()] += 1.0
    _, svals, vh = np.linalg.svd(constraints, full_matrices=False)
    rank = int(np.sum(svals > RANK_TOL * svals[0]))
    basis = vh[rank:]
    if basis.shape[0] != curvature_space_dim(m):
        raise RuntimeError(
            f"nullspace rank {basis.shape[0]} does not match the expected "
            f"dimension {curvature_space_dim(m)} at m={m}"
        )
    return CurvatureBasis(m, _freeze(basis))


def random_curvature_tensor(
    m: int,
    seed: int,
    generator_mix: Sequence[AlgebraicCurvatureTensor] | None = None,
) -> AlgebraicCurvatureTensor:
    """Reproducible random curvature tensor.

    By default the coordinates in the full symmetry-constraint basis are drawn
    from a seeded standard normal; with ``generator_mix`` the output is a
    random linear combination of the supplied generator tensors instead.
    """
    rng = np.random.default_rng(seed)
    if generator_mix is not None:
        generators = list(generator_mix)
        coeffs = rng.standard_normal(len(generators))
        entries = np.zeros((m,) * 4)
        for c, gen in zip(coeffs, generators):
            if gen.dim != m:
                raise DimensionMismatchError(f"generator dimension {gen.dim} differs from m={m}")
            entries = entries + c * gen.entries
        return AlgebraicCurvatureTensor(_freeze(entries))
    basis = curvature_space_basis(m)
    return basis.from_coordinates(rng.standard_normal(basis.count))
