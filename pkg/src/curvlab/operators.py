"""Operator- and scalar-valued contractions of a curvature tensor.

Jacobi and complex Jacobi operators, curvature operators on planes, the Ricci
and star-Ricci contractions, holomorphic sectional curvature, and spectrum
reporting with merged multiplicities.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DimensionMismatchError, LineStructureMismatchError
from .spaces import ComplexLine, ComplexStructure, spanning_lines
from .tensors import AlgebraicCurvatureTensor

SPECTRUM_MERGE_TOL = 1e-8

SYMMETRIC_KINDS = frozenset({"jacobi", "complex_jacobi", "ricci", "star_ricci"})
ANTISYMMETRIC_KINDS = frozenset({"curvature_op", "complex_curvature_op"})


@dataclass(frozen=True, eq=False)
class OperatorMatrix:
    """m x m matrix of a curvature-derived operator, tagged by its kind."""

    matrix: np.ndarray
    kind: str

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]


@dataclass(frozen=True, eq=False)
class ScalarReport:
    """Scalar curvature, star-scalar curvature, and Q on the spanning lines."""

    tau: float
    tau_star: float
    q_values: tuple[tuple[ComplexLine, float], ...]


def _as_vector(x, m: int) -> np.ndarray:
    v = np.asarray(x, dtype=float)
    if v.shape != (m,):
        raise DimensionMismatchError(f"vector of shape {v.shape} does not match dimension {m}")
    return v


def _check_line(line: ComplexLine, structure: ComplexStructure) -> None:
    if line.structure.matrix.shape != structure.matrix.shape or (
        float(np.max(np.abs(line.structure.matrix - structure.matrix))) > 1e-12
    ):
        raise LineStructureMismatchError("line was built for a different complex structure")


def jacobi_matrix(tensor: AlgebraicCurvatureTensor, x) -> np.ndarray:
    """Raw matrix M[a, b] = A(e_b, x, x, e_a); symmetric and annihilates x."""
    v = _as_vector(x, tensor.dim)
    return np.einsum("bija,i,j->ab", tensor.entries, v, v, optimize=True)


def jacobi(tensor: AlgebraicCurvatureTensor, x) -> OperatorMatrix:
    return OperatorMatrix(jacobi_matrix(tensor, x), "jacobi")


def complex_jacobi(
    tensor: AlgebraicCurvatureTensor, structure: ComplexStructure, line: ComplexLine
) -> OperatorMatrix:
    """Sum of the Jacobi operators at a unit representative x and at Jx.

    Independent of which unit vector of the line is used as representative.
    """
    if tensor.dim != structure.dim:
        raise DimensionMismatchError(f"dimensions differ: {tensor.dim} vs {structure.dim}")
    _check_line(line, structure)
    x = line.representative
    mat = jacobi_matrix(tensor, x) + jacobi_matrix(tensor, structure.apply(x))
    return OperatorMatrix(mat, "complex_jacobi")


def curvature_operator_matrix(tensor: AlgebraicCurvatureTensor, x, y) -> np.ndarray:
    """Raw matrix M with <M z, w> = A(x, y, z, w); antisymmetric."""
    vx = _as_vector(x, tensor.dim)
    vy = _as_vector(y, tensor.dim)
    return np.einsum("ijba,i,j->ab", tensor.entries, vx, vy, optimize=True)


def curvature_operator(tensor: AlgebraicCurvatureTensor, x, y) -> OperatorMatrix:
    return OperatorMatrix(curvature_operator_matrix(tensor, x, y), "curvature_op")


def complex_curvature_operator(
    tensor: AlgebraicCurvatureTensor, structure: ComplexStructure, line: ComplexLine
) -> OperatorMatrix:
    """Curvature operator of the pair (x, Jx) for the line's representative x.

    Rotating the representative inside the line leaves the operator unchanged
    because x' wedge Jx' = x wedge Jx.
    """
    if tensor.dim != structure.dim:
        raise DimensionMismatchError(f"dimensions differ: {tensor.dim} vs {structure.dim}")
    _check_line(line, structure)
    x = line.representative
    mat = curvature_operator_matrix(tensor, x, structure.apply(x))
    return OperatorMatrix(mat, "complex_curvature_op")


def ricci(tensor: AlgebraicCurvatureTensor) -> OperatorMatrix:
    """rho[a, b] = sum_i A(e_i, e_a, e_b, e_i); always symmetric."""
    return OperatorMatrix(np.einsum("iabi->ab", tensor.entries), "ricci")


def star_ricci(tensor: AlgebraicCurvatureTensor, structure: ComplexStructure) -> OperatorMatrix:
    """rho*[a, b] = sum_i A(e_a, J e_i, J e_b, e_i).

    Symmetry is measured, never enforced: it holds on compatible models but
    fails in general.
    """
    if tensor.dim != structure.dim:
        raise DimensionMismatchError(f"dimensions differ: {tensor.dim} vs {structure.dim}")
    j = structure.matrix
    mat = np.einsum("apqi,pi,qb->ab", tensor.entries, j, j, optimize=True)
    return OperatorMatrix(mat, "star_ricci")


def scalars(tensor: AlgebraicCurvatureTensor, structure: ComplexStructure) -> ScalarReport:
    """Traces of the Ricci contractions plus Q on every spanning line."""
    tau = float(np.trace(ricci(tensor).matrix))
    tau_star = float(np.trace(star_ricci(tensor, structure).matrix))
    q_values = tuple(
        (line, holomorphic_sectional_curvature(tensor, structure, line))
        for line in spanning_lines(structure)
    )
    return ScalarReport(tau, tau_star, q_values)


def q_quartic(tensor: AlgebraicCurvatureTensor, structure: ComplexStructure, v) -> float:
    """Quartic form A(v, Jv, Jv, v) at a not-necessarily-unit vector."""
    x = _as_vector(v, tensor.dim)
    jx = structure.apply(x)
    return float(np.einsum("ijkl,i,j,k,l->", tensor.entries, x, jx, jx, x, optimize=True))


def holomorphic_sectional_curvature(
    tensor: AlgebraicCurvatureTensor, structure: ComplexStructure, line: ComplexLine
) -> float:
    """Q of the line, evaluated at its unit representative."""
    _check_line(line, structure)
    return q_quartic(tensor, structure, line.representative)


def lambda_tensor(tensor: AlgebraicCurvatureTensor, structure: ComplexStructure, x, y) -> float:
    """A(x, y, y, x) - A(x, y, Jy, Jx)."""
    vx = _as_vector(x, tensor.dim)
    vy = _as_vector(y, tensor.dim)
    jx = structure.apply(vx)
    jy = structure.apply(vy)
    a = tensor.entries
    first = np.einsum("ijkl,i,j,k,l->", a, vx, vy, vy, vx, optimize=True)
    second = np.einsum("ijkl,i,j,k,l->", a, vx, vy, jy, jx, optimize=True)
    return float(first - second)


def merged_spectrum(op, tol: float = SPECTRUM_MERGE_TOL) -> tuple[tuple[float, int], ...]:
    """Eigenvalues of a symmetric operator, ascending, with multiplicities merged.

    Groups are formed greedily: a new eigenvalue starts a group when it sits
    more than ``tol`` above the running group mean.
    """
    mat = op.matrix if isinstance(op, OperatorMatrix) else np.asarray(op, dtype=float)
    vals = np.linalg.eigvalsh(0.5 * (mat + mat.T))
    groups: list[list[float]] = []
    for v in vals:
        if groups and abs(v - np.mean(groups[-1])) <= tol:
            groups[-1].append(float(v))
        else:
            groups.append([float(v)])
    return tuple((float(np.mean(g)), len(g)) for g in groups)
