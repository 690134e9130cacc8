"""
Chord-matrix form of the algebraic criterion.

For a triple a < b < c the matrix

    | H(b,c)  H(a,c)  H(a,b) |
    |   a       b       c    |
    |   1       1       1    |

is singular exactly when the three chords are consistent. Its null space is
then spanned by ((b-c)/(c-a), 1, (a-b)/(c-a)).
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple, Optional

import numpy as np

from sampling.plans import SamplingPlan, gen_triples
from scalars.core import Mode, QRootTwo, Scalar, Tolerance, magnitude, mode_of, one

from .algebraic import Bivariate
from .verdicts import CriterionReport, SampleLedger, Verdict

Row = tuple[Scalar, Scalar, Scalar]


@dataclass(frozen=True)
class ChordMatrix:
    entries: tuple[Row, Row, Row]
    triple: tuple[Scalar, Scalar, Scalar]

    @property
    def mode(self) -> Mode:
        return mode_of(self.triple[0])

    @property
    def scale(self) -> float:
        """Largest entry magnitude."""
        return max(magnitude(entry) for row in self.entries for entry in row)

    def apply(self, vector: Row) -> Row:
        x, y, z = vector
        return tuple(row[0] * x + row[1] * y + row[2] * z for row in self.entries)


class MatrixDiagnostics(NamedTuple):
    det: Scalar
    rank: int
    nullspace_basis: Optional[Row]


def chord_matrix(H: Bivariate, a: Scalar, b: Scalar, c: Scalar) -> ChordMatrix:
    if not a < b < c:
        raise ValueError(f"triple ({a!r}, {b!r}, {c!r}) is not strictly increasing")
    unit = one(mode_of(a))
    entries = ((H(b, c), H(a, c), H(a, b)), (a, b, c), (unit, unit, unit))
    return ChordMatrix(entries, (a, b, c))


def determinant(entries: tuple[Row, Row, Row]) -> Scalar:
    """Cofactor expansion along the first row."""
    (m00, m01, m02), (m10, m11, m12), (m20, m21, m22) = entries
    return (
        m00 * (m11 * m22 - m12 * m21)
        - m01 * (m10 * m22 - m12 * m20)
        + m02 * (m10 * m21 - m11 * m20)
    )


def exact_rank(entries: tuple[Row, ...]) -> int:
    """Rank by Gaussian elimination over Q(sqrt 2)."""
    rows = [list(row) for row in entries]
    rank = 0
    for column in range(len(rows[0])):
        pivot = next((r for r in range(rank, len(rows)) if rows[r][column]), None)
        if pivot is None:
            continue
        rows[rank], rows[pivot] = rows[pivot], rows[rank]
        for r in range(rank + 1, len(rows)):
            factor = rows[r][column] / rows[rank][column]
            if factor:
                rows[r] = [x - factor * y for x, y in zip(rows[r], rows[rank])]
        rank += 1
    return rank


def canonical_vector(a: Scalar, b: Scalar, c: Scalar) -> Row:
    width = c - a
    return (b - c) / width, one(mode_of(a)), (a - b) / width


def matrix_diagnostics(
    M: ChordMatrix, tol: Tolerance = Tolerance()
) -> MatrixDiagnostics:
    """
    Determinant, rank and, for rank 2, a null-space vector with middle
    component 1.

    Float ranks count singular values above ``tol`` scaled by the largest
    entry; exact ranks come from elimination.
    """
    det = determinant(M.entries)
    if M.mode is Mode.EXACT:
        rank = exact_rank(M.entries)
    else:
        matrix = np.array(M.entries, dtype=float)
        threshold = (tol.abs_tol + tol.rel_tol) * max(M.scale, 1.0)
        rank = int(np.linalg.matrix_rank(matrix, tol=threshold))
    basis = None
    if rank == 2:
        # rows (a, b, c) and (1, 1, 1) are independent, their cross product
        # spans the null space
        (_, (a, b, c), _) = M.entries
        cross = (b - c, c - a, a - b)
        basis = tuple(component / cross[1] for component in cross)
    return MatrixDiagnostics(det, rank, basis)


def determinant_passes(M: ChordMatrix, det: Scalar, tol: Tolerance) -> bool:
    if isinstance(det, QRootTwo):
        return not det
    return abs(det) <= (tol.abs_tol + tol.rel_tol) * M.scale**3


def run_matrix(
    H: Bivariate, plan: SamplingPlan, tol: Tolerance = Tolerance()
) -> CriterionReport:
    ledger = SampleLedger("matrix", tol, plan.mode)
    certificate_misses = []
    ranks: dict[int, int] = {}

    for triple in gen_triples(plan):

        def check(triple=triple):
            M = chord_matrix(H, *triple)
            det, rank, _ = matrix_diagnostics(M, tol)
            ranks[rank] = ranks.get(rank, 0) + 1
            passed = determinant_passes(M, det, tol)
            if passed:
                image = M.apply(canonical_vector(*triple))
                bound = (tol.abs_tol + tol.rel_tol) * M.scale
                if max(magnitude(x) for x in image) > bound:
                    certificate_misses.append(triple)
            ledger.record(triple, det, passed, note=f"rank {rank}")

        ledger.attempt(triple, check)

    report = ledger.report(details={"ranks": {str(k): ranks[k] for k in sorted(ranks)}})
    if certificate_misses and report.verdict is Verdict.ACCEPT:
        report.verdict = Verdict.INCONCLUSIVE
        report.witness = certificate_misses[0]
    if certificate_misses:
        report.notes.append(
            f"null vector certificate missed on {len(certificate_misses)} triples"
        )
    return report
