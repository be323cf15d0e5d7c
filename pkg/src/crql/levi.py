"""Levi forms of the group frame and of rigid-hypersurface frames.

The bracket [Z_j, Z_kbar] is reduced modulo the horizontal span and reported
as a coefficient matrix C against a fixed real transverse field (X_0 for the
group, d/du for rigid graphs).  C itself is skew-Hermitian; i*C is the
Hermitian matrix whose exact signature is reported when codim H = 1.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .exact import ExactScalar, I
from .heisenberg import EnvOp, complex_frame
from .polyop import PolyOp, RealPolynomial, dw_exponent, dwbar_exponent, rigid_frame


@dataclass
class LeviReport:
    frame_id: str
    n: int
    transverse: str
    entries: list[list[ExactScalar]]          # C: [Z_j, Z_kbar] = C[j][k] * transverse
    hermitian: list[list[ExactScalar]] = field(default=None)  # i*C
    nonvanishing: bool = field(default=False)
    signature: tuple[int, int] | None = None  # (positive, negative) of i*C

    def __post_init__(self):
        n = self.n
        self.hermitian = [[I * self.entries[j][k] for k in range(n)] for j in range(n)]
        for j in range(n):
            for k in range(n):
                if self.hermitian[j][k] != self.hermitian[k][j].conj():
                    raise ValueError("i*C is not Hermitian; transverse convention violated")
        self.nonvanishing = any(c for row in self.entries for c in row)
        self.signature = hermitian_signature(self.hermitian)

    def to_json(self) -> dict:
        return {
            "frame": self.frame_id,
            "n": self.n,
            "transverse": self.transverse,
            "entries": [[c.to_json() for c in row] for row in self.entries],
            "hermitian": [[c.to_json() for c in row] for row in self.hermitian],
            "nonvanishing": self.nonvanishing,
            "signature": list(self.signature),
        }


def hermitian_signature(h: list[list[ExactScalar]]) -> tuple[int, int]:
    """Exact signature (pos, neg) of a Hermitian ExactScalar matrix.

    Recursive pivoting: a nonzero real diagonal entry contributes its sign and
    a rank-one Schur complement; a zero diagonal with a nonzero off-diagonal
    pair contributes (+1, -1) via the hyperbolic 2x2 block.
    """
    m = [row[:] for row in h]
    size = len(m)
    pos = neg = 0
    live = list(range(size))
    while live:
        pivot = next((i for i in live if m[i][i]), None)
        if pivot is not None:
            d = m[pivot][pivot]
            if not d.is_real():
                raise ValueError("Hermitian matrix has non-real diagonal")
            if d.real_sign() > 0:
                pos += 1
            else:
                neg += 1
            rest = [i for i in live if i != pivot]
            dinv = d.inverse()
            for a in rest:
                for b in rest:
                    m[a][b] = m[a][b] - m[a][pivot] * dinv * m[pivot][b]
            live = rest
            continue
        off = next(
            ((a, b) for ai, a in enumerate(live) for b in live[ai + 1:] if m[a][b]),
            None,
        )
        if off is None:
            break  # remaining block is zero
        a, b = off
        pos += 1
        neg += 1
        # Schur complement of the 2x2 block [[0, h],[conj(h), 0]]
        hval = m[a][b]
        hinv = hval.inverse()
        hbarinv = hval.conj().inverse()
        rest = [i for i in live if i not in (a, b)]
        for r in rest:
            for c in rest:
                m[r][c] = (
                    m[r][c]
                    - m[r][a] * hbarinv * m[b][c]
                    - m[r][b] * hinv * m[a][c]
                )
        live = rest
    return (pos, neg)


def levi_heisenberg(n: int) -> LeviReport:
    """Group frame: [Z_j, Z_kbar] = -2i delta_{jk} X_0, point-independent."""
    frame = complex_frame(n)
    x0_mono = (0,) * (2 * n) + (1,)
    entries = []
    for j in range(1, n + 1):
        row = []
        for k in range(1, n + 1):
            br = frame["Z"][j].commutator(frame["Zbar"][k])
            for mono in br.terms:
                if mono != x0_mono:
                    raise ValueError("group Levi bracket not proportional to X_0")
            row.append(br.terms.get(x0_mono, ExactScalar()))
        entries.append(row)
    return LeviReport(f"heisenberg(n={n})", n, "X0", entries)


def levi_rigid(F: RealPolynomial, point: list[ExactScalar], frame_id: str | None = None) -> LeviReport:
    """Rigid frame from F at a rational point; transverse field d/du = d/dw + d/dwbar."""
    n = F.nz
    if len(point) != n:
        raise ValueError("point dimension mismatch")
    frame = rigid_frame(F)
    bars = [None] + [frame[j].conj() for j in range(1, n + 1)]
    dw, dwb = dw_exponent(n), dwbar_exponent(n)
    zero_d = tuple([0] * (2 * n + 2))
    entries = []
    for j in range(1, n + 1):
        row = []
        for k in range(1, n + 1):
            br = frame[j].commutator(bars[k])
            for (_, dexp) in br.terms:
                if dexp not in (dw, dwb):
                    raise ValueError("rigid Levi bracket leaves the transverse line")
            cw = br.evaluate_coefficient(dw, point)
            cwb = br.evaluate_coefficient(dwb, point)
            if cw != cwb:
                raise ValueError("bracket not proportional to the real field d/du")
            row.append(cw)
        entries.append(row)
    name = frame_id or f"rigid(n={n})"
    return LeviReport(name, n, "du", entries)
