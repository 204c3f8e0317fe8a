"""Exact linear algebra over Z, Q, GF(p) and Z/m.

Everything here is exact: integer lattices are handled with gcd row
operations (Hermite-style echelon forms and Smith normal form), fields by
ordinary elimination (bitmask rows over GF(2), Fractions over Q), and Z/m
by lifting to Z together with modulus relations.

Vectors are sparse dicts {coordinate: value} with no stored zeros.
Matrices are sparse coordinate maps.  The module also provides the graded
quotient machinery used by the homology computations: invariants
(free rank plus torsion divisor chain, split by parity) and explicit
presentations of quotient modules with per-generator annihilator moduli.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd
import random

from .domains import CoefficientDomain

# ---------------------------------------------------------------------------
# sparse vector helpers


def vec_addmul(dst: dict, src: dict, c, domain: CoefficientDomain) -> None:
    """dst += c * src in place, dropping zeros."""
    if domain.is_zero(c):
        return
    for k, v in src.items():
        nv = domain.add(dst.get(k, domain.zero), domain.mul(c, v))
        if domain.is_zero(nv):
            dst.pop(k, None)
        else:
            dst[k] = nv


def vec_scale(v: dict, c, domain: CoefficientDomain) -> dict:
    if domain.is_zero(c):
        return {}
    out = {}
    for k, val in v.items():
        nv = domain.mul(c, val)
        if not domain.is_zero(nv):
            out[k] = nv
    return out


def vec_sub(u: dict, v: dict, domain: CoefficientDomain) -> dict:
    out = dict(u)
    vec_addmul(out, v, domain.neg(domain.one), domain)
    return out


def vec_is_zero(v: dict) -> bool:
    return not v


def _ivec_addmul(dst: dict, src: dict, c: int) -> None:
    """Integer-specialised dst += c*src."""
    if c == 0:
        return
    for k, v in src.items():
        nv = dst.get(k, 0) + c * v
        if nv:
            dst[k] = nv
        else:
            dst.pop(k, None)


# ---------------------------------------------------------------------------
# invariants


def _invariant_chain(elementary: list[int]) -> tuple[int, ...]:
    """Combine elementary divisors (>1) into an invariant factor chain."""
    primes: dict[int, list[int]] = {}
    for d in elementary:
        if d <= 1:
            continue
        x, p = d, 2
        while p * p <= x:
            if x % p == 0:
                e = 0
                while x % p == 0:
                    x //= p
                    e += 1
                primes.setdefault(p, []).append(e)
            p += 1
        if x > 1:
            primes.setdefault(x, []).append(1)
    if not primes:
        return ()
    depth = max(len(v) for v in primes.values())
    chain = [1] * depth
    for p, exps in primes.items():
        exps = sorted(exps)
        pad = depth - len(exps)
        for i, e in enumerate(exps):
            chain[pad + i] *= p ** e
    return tuple(chain)


@dataclass(frozen=True)
class ModuleInvariants:
    """Free rank plus torsion divisor chain (each entry divides the next)."""

    free_rank: int = 0
    torsion: tuple[int, ...] = ()

    @property
    def is_zero(self) -> bool:
        return self.free_rank == 0 and not self.torsion

    def __str__(self) -> str:
        parts = []
        if self.free_rank:
            parts.append(f"free^{self.free_rank}" if self.free_rank > 1 else "free")
        parts.extend(f"Z/{d}" for d in self.torsion)
        return " + ".join(parts) if parts else "0"


@dataclass(frozen=True)
class GradedInvariants:
    """Module invariants split into even and odd parts."""

    even: ModuleInvariants = ModuleInvariants()
    odd: ModuleInvariants = ModuleInvariants()

    @property
    def is_zero(self) -> bool:
        return self.even.is_zero and self.odd.is_zero

    def parity_flip(self) -> "GradedInvariants":
        return GradedInvariants(even=self.odd, odd=self.even)

    def __str__(self) -> str:
        return f"even: {self.even}, odd: {self.odd}"


def direct_sum_invariants(parts) -> GradedInvariants:
    """Invariants of a direct sum, renormalising the torsion chains."""
    even_free = sum(p.even.free_rank for p in parts)
    odd_free = sum(p.odd.free_rank for p in parts)
    even_tor = [d for p in parts for d in p.even.torsion]
    odd_tor = [d for p in parts for d in p.odd.torsion]
    return GradedInvariants(
        even=ModuleInvariants(even_free, _invariant_chain(even_tor)),
        odd=ModuleInvariants(odd_free, _invariant_chain(odd_tor)),
    )


# ---------------------------------------------------------------------------
# sparse matrices


@dataclass
class ExactMatrix:
    """Sparse exact matrix over a coefficient domain."""

    nrows: int
    ncols: int
    domain: CoefficientDomain
    entries: dict = field(default_factory=dict)  # (row, col) -> value

    @staticmethod
    def from_dense(rows, domain: CoefficientDomain) -> "ExactMatrix":
        nrows = len(rows)
        ncols = len(rows[0]) if rows else 0
        m = ExactMatrix(nrows, ncols, domain)
        for i, row in enumerate(rows):
            for j, v in enumerate(row):
                v = domain.reduce(v)
                if not domain.is_zero(v):
                    m.entries[(i, j)] = v
        return m

    @staticmethod
    def from_columns(cols, nrows: int, domain: CoefficientDomain) -> "ExactMatrix":
        m = ExactMatrix(nrows, len(cols), domain)
        for j, col in enumerate(cols):
            for i, v in col.items():
                if not domain.is_zero(v):
                    m.entries[(i, j)] = v
        return m

    def row_dicts(self) -> list[dict]:
        rows = [dict() for _ in range(self.nrows)]
        for (i, j), v in self.entries.items():
            rows[i][j] = v
        return rows

    def col_dicts(self) -> list[dict]:
        cols = [dict() for _ in range(self.ncols)]
        for (i, j), v in self.entries.items():
            cols[j][i] = v
        return cols

    def transpose(self) -> "ExactMatrix":
        t = ExactMatrix(self.ncols, self.nrows, self.domain)
        t.entries = {(j, i): v for (i, j), v in self.entries.items()}
        return t

    def matmul(self, other: "ExactMatrix") -> "ExactMatrix":
        if self.ncols != other.nrows:
            raise ValueError("shape mismatch")
        dom = self.domain
        out = ExactMatrix(self.nrows, other.ncols, dom)
        other_rows = other.row_dicts()
        acc: dict = {}
        for (i, k), v in self.entries.items():
            for j, w in other_rows[k].items():
                key = (i, j)
                nv = dom.add(acc.get(key, dom.zero), dom.mul(v, w))
                acc[key] = nv
        out.entries = {k: v for k, v in acc.items() if not dom.is_zero(v)}
        return out

    @property
    def is_zero(self) -> bool:
        return not self.entries


# ---------------------------------------------------------------------------
# integer echelon (Hermite-style, incremental)


def _extgcd(a: int, b: int) -> tuple[int, int, int]:
    """Return (g, s, t) with s*a + t*b = g = gcd(a, b), g > 0."""
    old_r, r = a, b
    old_s, s = 1, 0
    old_t, t = 0, 1
    while r:
        q = old_r // r
        old_r, r = r, old_r - q * r
        old_s, s = s, old_s - q * s
        old_t, t = t, old_t - q * t
    if old_r < 0:
        old_r, old_s, old_t = -old_r, -old_s, -old_t
    return old_r, old_s, old_t


class IntEchelon:
    """Echelon basis of an integer lattice, maintained by unimodular row ops.

    Rows are sparse int dicts; the pivot of a row is its minimal column.
    Columns at or beyond ``aug_offset`` are bookkeeping columns: they ride
    along in row operations but never serve as pivots for membership of
    "real" vectors (a row whose real part is empty has its pivot in the
    augmented region, which is how kernels are read off).
    """

    def __init__(self, aug_offset: int | None = None):
        self.rows: dict[int, dict] = {}  # pivot col -> row
        self.aug_offset = aug_offset

    def _pivot(self, row: dict) -> int:
        return min(row)

    def add_row(self, row: dict) -> None:
        row = {k: v for k, v in row.items() if v}
        while row:
            pc = self._pivot(row)
            if pc not in self.rows:
                if row[pc] < 0:
                    row = {k: -v for k, v in row.items()}
                self.rows[pc] = row
                return
            r = self.rows[pc]
            a, b = r[pc], row[pc]
            if b % a == 0:
                _ivec_addmul(row, r, -(b // a))
            else:
                g, s, t = _extgcd(a, b)
                new_pivot: dict = {}
                _ivec_addmul(new_pivot, r, s)
                _ivec_addmul(new_pivot, row, t)
                new_row: dict = {}
                _ivec_addmul(new_row, r, -(b // g))
                _ivec_addmul(new_row, row, a // g)
                self.rows[pc] = new_pivot
                row = new_row

    @property
    def rank(self) -> int:
        if self.aug_offset is None:
            return len(self.rows)
        return sum(1 for pc in self.rows if pc < self.aug_offset)

    def real_pivots(self) -> list[int]:
        pivots = [pc for pc in self.rows if self.aug_offset is None or pc < self.aug_offset]
        return sorted(pivots)

    def aug_rows(self) -> list[dict]:
        """Rows whose real part vanished, truncated to the augmented columns."""
        assert self.aug_offset is not None
        out = []
        for pc in sorted(self.rows):
            if pc >= self.aug_offset:
                out.append({k - self.aug_offset: v for k, v in self.rows[pc].items()})
        return out

    def reduce(self, row: dict) -> dict:
        """Single left-to-right reduction pass; empty result iff row is in the lattice."""
        row = {k: v for k, v in row.items() if v}
        for pc in sorted(self.rows):
            if pc in row:
                r = self.rows[pc]
                q = row[pc] // r[pc]
                if q:
                    _ivec_addmul(row, r, -q)
        return row

    def contains(self, row: dict) -> bool:
        return not self.reduce(row)

    def coords(self, row: dict) -> dict | None:
        """Express row as an integer combination of the echelon rows.

        Returns {pivot_col: coefficient} or None if the row is outside.
        """
        row = {k: v for k, v in row.items() if v}
        coeffs: dict[int, int] = {}
        for pc in sorted(self.rows):
            if pc in row:
                r = self.rows[pc]
                if row[pc] % r[pc]:
                    return None
                q = row[pc] // r[pc]
                coeffs[pc] = q
                _ivec_addmul(row, r, -q)
        return coeffs if not row else None

    def coords_rational(self, row: dict) -> dict | None:
        """Like coords but over Q (fractional coefficients allowed)."""
        work = {k: Fraction(v) for k, v in row.items() if v}
        coeffs: dict[int, Fraction] = {}
        for pc in sorted(self.rows):
            if pc in work:
                r = self.rows[pc]
                q = work[pc] / r[pc]
                coeffs[pc] = q
                for k, v in r.items():
                    nv = work.get(k, Fraction(0)) - q * v
                    if nv:
                        work[k] = nv
                    else:
                        work.pop(k, None)
        return coeffs if not work else None


# ---------------------------------------------------------------------------
# field echelon


class FieldEchelon:
    """Row echelon over a field; pivot entries normalised to 1."""

    def __init__(self, domain: CoefficientDomain, aug_offset: int | None = None):
        self.domain = domain
        self.rows: dict[int, dict] = {}
        self.aug_offset = aug_offset

    def add_row(self, row: dict) -> None:
        dom = self.domain
        row = {k: v for k, v in row.items() if not dom.is_zero(v)}
        while row:
            pc = min(row)
            if pc not in self.rows:
                inv = dom.invert(row[pc])
                self.rows[pc] = vec_scale(row, inv, dom)
                return
            vec_addmul(row, self.rows[pc], dom.neg(row[pc]), dom)

    @property
    def rank(self) -> int:
        if self.aug_offset is None:
            return len(self.rows)
        return sum(1 for pc in self.rows if pc < self.aug_offset)

    def real_pivots(self) -> list[int]:
        return sorted(pc for pc in self.rows if self.aug_offset is None or pc < self.aug_offset)

    def aug_rows(self) -> list[dict]:
        assert self.aug_offset is not None
        out = []
        for pc in sorted(self.rows):
            if pc >= self.aug_offset:
                out.append({k - self.aug_offset: v for k, v in self.rows[pc].items()})
        return out

    def reduce(self, row: dict) -> dict:
        dom = self.domain
        row = {k: v for k, v in row.items() if not dom.is_zero(v)}
        for pc in sorted(self.rows):
            if pc in row:
                vec_addmul(row, self.rows[pc], dom.neg(row[pc]), dom)
        return row

    def contains(self, row: dict) -> bool:
        return not self.reduce(row)

    def coords(self, row: dict) -> dict | None:
        dom = self.domain
        row = {k: v for k, v in row.items() if not dom.is_zero(v)}
        coeffs = {}
        for pc in sorted(self.rows):
            if pc in row:
                coeffs[pc] = row[pc]
                vec_addmul(row, self.rows[pc], dom.neg(row[pc]), dom)
        return coeffs if not row else None


class Gf2Echelon:
    """GF(2) echelon with rows packed into int bitmasks (fast xor reduction)."""

    def __init__(self, aug_offset: int | None = None):
        self.rows: dict[int, int] = {}  # pivot bit -> mask
        self.aug_offset = aug_offset

    @staticmethod
    def pack(row: dict) -> int:
        mask = 0
        for k, v in row.items():
            if v % 2:
                mask |= 1 << k
        return mask

    @staticmethod
    def unpack(mask: int) -> dict:
        out = {}
        i = 0
        while mask:
            low = mask & -mask
            out[low.bit_length() - 1] = 1
            mask ^= low
            i += 1
        return out

    def add_row(self, row) -> None:
        mask = row if isinstance(row, int) else self.pack(row)
        while mask:
            pb = (mask & -mask).bit_length() - 1
            if pb not in self.rows:
                self.rows[pb] = mask
                return
            mask ^= self.rows[pb]

    @property
    def rank(self) -> int:
        if self.aug_offset is None:
            return len(self.rows)
        return sum(1 for pb in self.rows if pb < self.aug_offset)

    def real_pivots(self) -> list[int]:
        return sorted(pb for pb in self.rows if self.aug_offset is None or pb < self.aug_offset)

    def aug_rows(self) -> list[dict]:
        assert self.aug_offset is not None
        out = []
        for pb in sorted(self.rows):
            if pb >= self.aug_offset:
                out.append({k - self.aug_offset: 1 for k in self.unpack(self.rows[pb])})
        return out

    def reduce_mask(self, mask: int) -> int:
        out = 0
        while mask:
            low = mask & -mask
            pb = low.bit_length() - 1
            if pb in self.rows:
                mask ^= self.rows[pb]
            else:
                out |= low
                mask ^= low
        return out

    def reduce(self, row: dict) -> dict:
        return self.unpack(self.reduce_mask(self.pack(row)))

    def contains(self, row) -> bool:
        mask = row if isinstance(row, int) else self.pack(row)
        return self.reduce_mask(mask) == 0

    def coords(self, row: dict) -> dict | None:
        mask = self.pack(row)
        coeffs = {}
        while mask:
            pb = (mask & -mask).bit_length() - 1
            if pb not in self.rows:
                return None
            coeffs[pb] = 1
            mask ^= self.rows[pb]
        return coeffs


def make_echelon(domain: CoefficientDomain, aug_offset: int | None = None):
    """Echelon builder for span/membership work in the given domain.

    Z and Z/m use the integer lattice echelon (Z/m callers add modulus rows
    themselves); GF(2) gets the bitmask specialisation.
    """
    if domain.kind == "GF" and domain.modulus == 2:
        return Gf2Echelon(aug_offset)
    if domain.is_field:
        return FieldEchelon(domain, aug_offset)
    return IntEchelon(aug_offset)


# ---------------------------------------------------------------------------
# rational helper: clear denominators row-wise


def _scale_row_to_int(row: dict) -> dict:
    denom = 1
    for v in row.values():
        if isinstance(v, Fraction):
            denom = denom * v.denominator // gcd(denom, v.denominator)
    out = {}
    for k, v in row.items():
        iv = int(v * denom) if isinstance(v, Fraction) else v * denom
        if iv:
            out[k] = iv
    return out


def _int_rows(rows, domain: CoefficientDomain) -> list[dict]:
    """Lift rows to integer dicts (clearing denominators over Q)."""
    if domain.kind == "Q":
        return [_scale_row_to_int(r) for r in rows]
    return [{k: int(v) for k, v in r.items() if v} for r in rows]


# ---------------------------------------------------------------------------
# Smith normal form


def _int_snf_dense(mat: list[list[int]]) -> list[int]:
    """Textbook SNF on a small dense integer matrix; returns nonzero diagonal."""
    mat = [row[:] for row in mat]
    nr = len(mat)
    nc = len(mat[0]) if nr else 0
    divisors = []
    t = 0
    while True:
        # find nonzero entry of minimal absolute value in the active block
        best = None
        for i in range(t, nr):
            for j in range(t, nc):
                v = mat[i][j]
                if v and (best is None or abs(v) < abs(best[2])):
                    best = (i, j, v)
        if best is None:
            break
        bi, bj, _ = best
        mat[t], mat[bi] = mat[bi], mat[t]
        for row in mat:
            row[t], row[bj] = row[bj], row[t]
        while True:
            # clear column t
            again = False
            for i in range(t + 1, nr):
                if mat[i][t]:
                    q = mat[i][t] // mat[t][t]
                    for j in range(t, nc):
                        mat[i][j] -= q * mat[t][j]
                    if mat[i][t]:
                        mat[t], mat[i] = mat[i], mat[t]
                        again = True
            if again:
                continue
            # clear row t
            again = False
            for j in range(t + 1, nc):
                if mat[t][j]:
                    q = mat[t][j] // mat[t][t]
                    for i in range(t, nr):
                        mat[i][j] -= q * mat[i][t]
                    if mat[t][j]:
                        for i in range(t, nr):
                            mat[i][t], mat[i][j] = mat[i][j], mat[i][t]
                        again = True
            if again:
                continue
            # enforce divisibility of the remaining block by the pivot
            piv = mat[t][t]
            offender = None
            for i in range(t + 1, nr):
                for j in range(t + 1, nc):
                    if mat[i][j] % piv:
                        offender = i
                        break
                if offender is not None:
                    break
            if offender is None:
                break
            for j in range(t, nc):
                mat[t][j] += mat[offender][j]
        divisors.append(abs(mat[t][t]))
        t += 1
        if t >= nr or t >= nc:
            # remaining block is a line; finish by gcd sweep
            rest = []
            for i in range(t, nr):
                for j in range(t, nc):
                    if mat[i][j]:
                        rest.append(mat[i][j])
            if rest:
                g = 0
                for v in rest:
                    g = gcd(g, v)
                divisors.append(g)
            break
    return divisors


class _SparseSnf:
    """Sparse SNF engine with optional tracking of the row transform.

    Row operations (tracked) act on ambient coordinates; column operations
    mix relations and are not tracked.  ``U`` holds the accumulated row
    transform, ``Uinv`` its inverse stored by columns, so that for the
    input matrix A one has (U A) column-equivalent to the diagonal, and
    the i-th diagonal entry lives on row ``pivot_rows[i]`` of U.
    """

    def __init__(self, rows: list[dict], track: bool = False):
        self.rows = [dict(r) for r in rows]
        self.nr = len(rows)
        self.cols: dict[int, set] = {}
        for i, r in enumerate(self.rows):
            for j in r:
                self.cols.setdefault(j, set()).add(i)
        self.track = track
        if track:
            self.U = [{i: 1} for i in range(self.nr)]
            self.Uinv_cols = [{i: 1} for i in range(self.nr)]
        self.active_rows = set(range(self.nr))
        self.active_cols = set(self.cols)
        self.pivot_rows: list[int] = []
        self.divisors: list[int] = []

    # row ops keep cols index consistent and mirror into U / Uinv

    def _row_addmul(self, i: int, k: int, c: int) -> None:
        if c == 0:
            return
        row_i, row_k = self.rows[i], self.rows[k]
        for j, v in row_k.items():
            nv = row_i.get(j, 0) + c * v
            if nv:
                if j not in row_i:
                    self.cols.setdefault(j, set()).add(i)
                row_i[j] = nv
            else:
                if j in row_i:
                    del row_i[j]
                    self.cols[j].discard(i)
        if self.track:
            _ivec_addmul(self.U[i], self.U[k], c)
            _ivec_addmul(self.Uinv_cols[k], self.Uinv_cols[i], -c)

    def _row_negate(self, i: int) -> None:
        self.rows[i] = {j: -v for j, v in self.rows[i].items()}
        if self.track:
            self.U[i] = {j: -v for j, v in self.U[i].items()}
            self.Uinv_cols[i] = {j: -v for j, v in self.Uinv_cols[i].items()}

    def _col_addmul(self, j: int, k: int, c: int) -> None:
        # col_j += c * col_k
        if c == 0:
            return
        for i in list(self.cols.get(k, ())):
            v = self.rows[i][k]
            nv = self.rows[i].get(j, 0) + c * v
            if nv:
                if j not in self.rows[i]:
                    self.cols.setdefault(j, set()).add(i)
                self.rows[i][j] = nv
            else:
                if j in self.rows[i]:
                    del self.rows[i][j]
                    self.cols[j].discard(i)

    def _find_pivot(self):
        best = None
        for i in self.active_rows:
            for j, v in self.rows[i].items():
                if j in self.active_cols:
                    a = abs(v)
                    if best is None or a < best[0]:
                        best = (a, i, j)
                        if a == 1:
                            return best
        return best

    def run(self) -> None:
        while True:
            best = self._find_pivot()
            if best is None:
                break
            _, pr, pc = best
            while True:
                # column phase: clear pc below/above the pivot row
                changed = True
                while changed:
                    changed = False
                    for i in list(self.cols.get(pc, ())):
                        if i == pr or i not in self.active_rows:
                            continue
                        piv = self.rows[pr][pc]
                        q = self.rows[i][pc] // piv
                        self._row_addmul(i, pr, -q)
                        if pc in self.rows[i]:
                            # remainder smaller than the pivot: make it the pivot
                            pr = i
                            changed = True
                            break
                # row phase: clear the pivot row via column ops
                row_changed = False
                for j in list(self.rows[pr]):
                    if j == pc or j not in self.active_cols:
                        continue
                    piv = self.rows[pr][pc]
                    q = self.rows[pr][j] // piv
                    self._col_addmul(j, pc, -q)
                    if j in self.rows[pr]:
                        pc = j
                        row_changed = True
                        break
                if row_changed:
                    continue
                # divisibility: pivot must divide every remaining active entry
                piv = self.rows[pr][pc]
                offender = None
                for i in self.active_rows:
                    if i == pr:
                        continue
                    for j, v in self.rows[i].items():
                        if j in self.active_cols and v % piv:
                            offender = i
                            break
                    if offender is not None:
                        break
                if offender is None:
                    break
                self._row_addmul(pr, offender, 1)
            if self.rows[pr][pc] < 0:
                self._row_negate(pr)
            self.divisors.append(self.rows[pr][pc])
            self.pivot_rows.append(pr)
            self.active_rows.discard(pr)
            self.active_cols.discard(pc)


def _int_snf_sparse(rows: list[dict]) -> list[int]:
    eng = _SparseSnf(rows, track=False)
    eng.run()
    return eng.divisors


def int_snf(rows: list[dict], nrows: int | None = None, ncols: int | None = None) -> tuple[int, ...]:
    """Invariant factors (nonzero diagonal of the Smith form) of an integer matrix."""
    nnz_rows = [r for r in rows if r]
    if not nnz_rows:
        return ()
    if nrows is None:
        nrows = len(rows)
    if ncols is None:
        ncols = max(max(r) for r in nnz_rows) + 1
    if nrows <= 64 and ncols <= 64:
        dense = [[0] * ncols for _ in range(len(rows))]
        for i, r in enumerate(rows):
            for j, v in r.items():
                dense[i][j] = v
        ds = _int_snf_dense(dense) if dense else []
    else:
        ds = _int_snf_sparse(rows)
    ds = sorted(d for d in ds if d)
    # the sparse path guarantees the divisor chain; normalise anyway
    return _normalise_chain(ds)


def _normalise_chain(ds: list[int]) -> tuple[int, ...]:
    ds = [abs(d) for d in ds if d]
    changed = True
    while changed:
        changed = False
        for i in range(len(ds) - 1):
            a, b = ds[i], ds[i + 1]
            if b % a:
                g = gcd(a, b)
                ds[i], ds[i + 1] = g, a * b // g
                changed = True
        ds.sort()
    return tuple(ds)


def smith_normal_form(M: ExactMatrix) -> tuple[int, ...]:
    """Invariant factors of M.

    Over Z these are the nonzero Smith diagonal entries.  Over Z/m the
    matrix is lifted to Z with modulus relations adjoined and factors
    equal to m (zero mod m) are dropped.  Over a field the answer is a
    run of 1s of length rank(M).
    """
    dom = M.domain
    if dom.kind == "Z":
        return int_snf(M.row_dicts(), M.nrows, M.ncols)
    if dom.kind == "Zmod":
        # lift to Z, adjoin m*identity relations, drop factors that are 0 mod m
        m = dom.modulus
        cols = [dict() for _ in range(M.ncols)]
        for (i, j), v in M.entries.items():
            cols[j][i] = int(v)
        for i in range(M.nrows):
            cols.append({i: m})
        ds = int_snf(cols, len(cols), M.nrows)
        return tuple(d for d in ds if d % m)
    return (1,) * matrix_rank(M) if not M.is_zero else ()


# ---------------------------------------------------------------------------
# rank / kernel


def matrix_rank(M: ExactMatrix) -> int:
    dom = M.domain
    rows = M.row_dicts()
    if dom.kind == "GF" and dom.modulus == 2:
        ech = Gf2Echelon()
        for r in rows:
            ech.add_row(r)
        return ech.rank
    if dom.kind == "GF":
        ech = FieldEchelon(dom)
        for r in rows:
            ech.add_row(r)
        return ech.rank
    # Z, Q (scaled), Z/m ranks are lattice ranks of the integer lift
    ech = IntEchelon()
    for r in _int_rows(rows, dom):
        ech.add_row(r)
    return ech.rank


def kernel_basis(M: ExactMatrix) -> list[dict]:
    """Basis (Z, Q, GF(p)) or generating set (Z/m) of {x : M x = 0}.

    Over Z the basis spans the full kernel lattice (it is saturated by
    construction).  Over Z/m generators are returned mod m.
    """
    dom = M.domain
    cols = M.col_dicts()
    aug = M.nrows
    if dom.kind in ("Z", "Q"):
        ech = IntEchelon(aug_offset=aug)
        if dom.kind == "Q":
            # scale rows (equations) to integers; this preserves the kernel
            scaled_rows = _int_rows(M.row_dicts(), dom)
            cols = [dict() for _ in range(M.ncols)]
            for i, r in enumerate(scaled_rows):
                for j, v in r.items():
                    cols[j][i] = v
        for j, col in enumerate(cols):
            row = dict(col)
            row[aug + j] = 1
            ech.add_row(row)
        kernel = ech.aug_rows()
        if dom.kind == "Q":
            return [{k: Fraction(v) for k, v in r.items()} for r in kernel]
        return kernel
    if dom.kind == "GF" and dom.modulus == 2:
        ech = Gf2Echelon(aug_offset=aug)
        for j, col in enumerate(cols):
            row = dict(col)
            row[aug + j] = 1
            ech.add_row(row)
        return ech.aug_rows()
    if dom.kind == "GF":
        ech = FieldEchelon(dom, aug_offset=aug)
        for j, col in enumerate(cols):
            row = dict(col)
            row[aug + j] = 1
            ech.add_row(row)
        return ech.aug_rows()
    # Z/m: lift, adjoin modulus columns, take x-parts of the integer kernel
    m = dom.modulus
    ech = IntEchelon(aug_offset=aug)
    ncols = M.ncols
    lifted = [{k: int(v) for k, v in c.items()} for c in cols]
    for i in range(M.nrows):
        lifted.append({i: m})
    for j, col in enumerate(lifted):
        row = dict(col)
        row[aug + j] = 1
        ech.add_row(row)
    out = []
    seen = set()
    for r in ech.aug_rows():
        x = {k: v % m for k, v in r.items() if k < ncols and v % m}
        key = tuple(sorted(x.items()))
        if x and key not in seen:
            seen.add(key)
            out.append(x)
    return out


def solve_in_span(vectors: list[dict], target: dict, domain: CoefficientDomain) -> dict | None:
    """Coefficients expressing target as a combination of the given vectors.

    Returns {vector index: coefficient} or None.  Over Z the combination
    is required to be integral.
    """
    if domain.kind == "Zmod":
        m = domain.modulus
        vecs = [{k: int(v) for k, v in vec.items()} for vec in vectors]
        ncoords = 0
        for vec in vecs + [target]:
            if vec:
                ncoords = max(ncoords, max(vec) + 1)
        extra = [{i: m} for i in range(ncoords)]
        combo = _solve_int([*vecs, *extra], {k: int(v) for k, v in target.items()})
        if combo is None:
            return None
        return {i: v % m for i, v in combo.items() if i < len(vectors) and v % m}
    if domain.kind == "Z":
        return _solve_int(vectors, target)
    if domain.kind == "Q":
        ints = _int_rows(vectors, domain)
        scales = []
        for vec, ivec in zip(vectors, ints):
            k = next(iter(ivec), None)
            scales.append(Fraction(ivec[k], 1) / vec[k] if k is not None else Fraction(1))
        combo = _solve_int_rational(ints, _scale_row_to_int(target), target)
        if combo is None:
            return None
        return {i: c * scales[i] for i, c in combo.items() if c}
    # fields
    if domain.modulus == 2:
        aug = _max_coord([*vectors, target]) + 1
        ech = Gf2Echelon(aug_offset=aug)
        for j, vec in enumerate(vectors):
            row = dict(vec)
            row[aug + j] = 1
            ech.add_row(row)
        mask = ech.reduce_mask(Gf2Echelon.pack(target))
        if mask >> aug << aug != mask:
            return None
        return {k - aug: 1 for k in Gf2Echelon.unpack(mask)}
    aug = _max_coord([*vectors, target]) + 1
    ech = FieldEchelon(domain, aug_offset=aug)
    for j, vec in enumerate(vectors):
        row = dict(vec)
        row[aug + j] = 1
        ech.add_row(row)
    rem = ech.reduce(dict(target))
    if any(k < aug for k in rem):
        return None
    return {k - aug: domain.neg(v) for k, v in rem.items()}


def _max_coord(vecs) -> int:
    mx = -1
    for v in vecs:
        if v:
            mx = max(mx, max(v))
    return mx


def _solve_int(vectors: list[dict], target: dict) -> dict | None:
    aug = _max_coord([*vectors, target]) + 1
    ech = IntEchelon(aug_offset=aug)
    for j, vec in enumerate(vectors):
        row = {k: int(v) for k, v in vec.items()}
        row[aug + j] = 1
        ech.add_row(row)
    work = {k: int(v) for k, v in target.items() if v}
    for pc in ech.real_pivots():
        if pc in work:
            r = ech.rows[pc]
            if work[pc] % r[pc]:
                return None
            q = work[pc] // r[pc]
            _ivec_addmul(work, r, -q)
    if any(k < aug for k in work):
        return None
    return {k - aug: -v for k, v in work.items()}


def _solve_int_rational(vectors: list[dict], target_int: dict, target_orig: dict) -> dict | None:
    """Rational solve against integer vectors; coefficients are Fractions."""
    aug = _max_coord([*vectors, target_int]) + 1
    ech = IntEchelon(aug_offset=aug)
    for j, vec in enumerate(vectors):
        row = dict(vec)
        row[aug + j] = 1
        ech.add_row(row)
    work = {k: Fraction(v) for k, v in target_orig.items() if v}
    for pc in ech.real_pivots():
        if pc in work:
            r = ech.rows[pc]
            q = work[pc] / r[pc]
            for k, v in r.items():
                nv = work.get(k, Fraction(0)) - q * v
                if nv:
                    work[k] = nv
                else:
                    work.pop(k, None)
    if any(k < aug for k in work):
        return None
    return {k - aug: -v for k, v in work.items()}


# ---------------------------------------------------------------------------
# graded quotients


class RelationOutsideSpanError(ValueError):
    """A relation vector was not contained in the span of the generators."""


def _split_by_parity(ambient_rank: int, parities) -> tuple[list[int], list[int]]:
    if parities is None:
        return list(range(ambient_rank)), []
    ev = [i for i in range(ambient_rank) if parities[i] % 2 == 0]
    od = [i for i in range(ambient_rank) if parities[i] % 2 == 1]
    return ev, od


def _localise(vec: dict, index_map: dict[int, int], parity_name: str) -> dict:
    out = {}
    for k, v in vec.items():
        if k not in index_map:
            raise ValueError(f"vector is not parity homogeneous: stray coordinate {k} ({parity_name})")
        out[index_map[k]] = v
    return out


def _block_invariants(coords: list[int], gens: list[dict], rels: list[dict],
                      domain: CoefficientDomain, ambient_moduli) -> ModuleInvariants:
    index_map = {c: i for i, c in enumerate(coords)}
    gens_l = [_localise(g, index_map, "generators") for g in gens]
    rels_l = [_localise(r, index_map, "relations") for r in rels]
    if domain.is_field:
        ech = make_echelon(domain)
        for g in gens_l:
            ech.add_row(g)
        r_gens = ech.rank
        for r in rels_l:
            if not ech.contains(r):
                raise RelationOutsideSpanError("relation outside generator span")
        rech = make_echelon(domain)
        if domain.kind == "Q":
            rels_l = _int_rows(rels_l, domain)
            rech = IntEchelon()
        for r in rels_l:
            rech.add_row(r)
        return ModuleInvariants(free_rank=r_gens - rech.rank)
    # integer-like: Z with optional moduli, or Z/m (moduli default to m)
    moduli_rows = []
    if domain.kind == "Zmod":
        default = domain.modulus
        for c in coords:
            mu = ambient_moduli[c] if ambient_moduli is not None else default
            if mu:
                moduli_rows.append({index_map[c]: int(mu)})
    elif ambient_moduli is not None:
        for c in coords:
            mu = ambient_moduli[c]
            if mu:
                moduli_rows.append({index_map[c]: int(mu)})
    gens_i = [{k: int(v) for k, v in g.items()} for g in gens_l]
    rels_i = [{k: int(v) for k, v in r.items()} for r in rels_l]
    L1 = IntEchelon()
    for g in gens_i:
        L1.add_row(g)
    for mrow in moduli_rows:
        L1.add_row(mrow)
    pivot_order = {pc: i for i, pc in enumerate(sorted(L1.rows))}
    r1 = len(L1.rows)
    rel_coords = []
    for r in rels_i + moduli_rows:
        coeffs = L1.coords(r)
        if coeffs is None:
            raise RelationOutsideSpanError("relation outside generator span")
        rel_coords.append({pivot_order[pc]: q for pc, q in coeffs.items() if q})
    ds = int_snf(rel_coords, len(rel_coords), r1) if rel_coords else ()
    free = r1 - len(ds)
    torsion = tuple(d for d in ds if d > 1)
    return ModuleInvariants(free_rank=free, torsion=torsion)


def quotient_invariants(ambient_rank: int, generators, relations, parities,
                        domain: CoefficientDomain, ambient_moduli=None) -> GradedInvariants:
    """Invariants of span(generators)/span(relations), graded by parity.

    Vectors must be parity homogeneous.  Over Z an optional per-coordinate
    annihilator array (0 = free) describes torsion in the ambient module;
    over Z/m every coordinate is implicitly m-torsion.  Raises
    RelationOutsideSpanError if a relation is not in the generator span.
    """
    ev, od = _split_by_parity(ambient_rank, parities)
    ev_set, od_set = set(ev), set(od)

    def block(vecs, keep):
        return [v for v in vecs if v and next(iter(v)) in keep]

    for v in list(generators) + list(relations):
        if v and not (set(v) <= ev_set or set(v) <= od_set):
            raise ValueError("vector is not parity homogeneous")
    even = _block_invariants(ev, block(generators, ev_set), block(relations, ev_set),
                             domain, ambient_moduli)
    odd = _block_invariants(od, block(generators, od_set), block(relations, od_set),
                            domain, ambient_moduli)
    return GradedInvariants(even=even, odd=odd)


# ---------------------------------------------------------------------------
# quotient presentations (diagonalised, with explicit generators)


@dataclass
class PresentedGenerator:
    parity: int
    modulus: int  # 0 = free; k > 0 means k * generator = 0
    rep: dict     # ambient representative


class _FieldBlock:
    def __init__(self, coords: list[int], rels_local: list[dict], domain: CoefficientDomain):
        self.coords = coords
        self.domain = domain
        self.ech = make_echelon(domain)
        for r in rels_local:
            self.ech.add_row(r)
        pivots = set(self.ech.real_pivots())
        self.free_local = [i for i in range(len(coords)) if i not in pivots]
        self.slot = {loc: t for t, loc in enumerate(self.free_local)}

    def generators(self) -> list[tuple[int, dict]]:
        # modulus 0 here also covers Z/m field-free... only used for true fields
        return [(0, {self.coords[loc]: self.domain.one}) for loc in self.free_local]

    def reduce(self, vec_local: dict) -> dict:
        rem = self.ech.reduce(vec_local)
        out = {}
        for k, v in rem.items():
            out[self.slot[k]] = self.domain.reduce(v) if not isinstance(v, Fraction) else v
        return out


class _IntBlock:
    def __init__(self, coords: list[int], rels_local: list[dict], domain: CoefficientDomain,
                 moduli_local: list[int]):
        self.coords = coords
        self.domain = domain
        n = len(coords)
        lat = IntEchelon()
        for r in rels_local:
            lat.add_row({k: int(v) for k, v in r.items()})
        for i, mu in enumerate(moduli_local):
            if mu:
                lat.add_row({i: int(mu)})
        basis = [lat.rows[pc] for pc in sorted(lat.rows)]
        # relations as columns of an n-row matrix; row ops are tracked
        eng = _SparseSnf([dict() for _ in range(n)], track=True)
        # fill the engine matrix: column j = basis[j]
        for j, b in enumerate(basis):
            for i, v in b.items():
                eng.rows[i][j] = v
                eng.cols.setdefault(j, set()).add(i)
        eng.active_cols = set(eng.cols)
        eng.run()
        self.div_by_row = {}
        for d, ri in zip(eng.divisors, eng.pivot_rows):
            self.div_by_row[ri] = d
        self.gen_rows: list[int] = []
        self.moduli: list[int] = []
        for d, ri in zip(eng.divisors, eng.pivot_rows):
            if d != 1:
                self.gen_rows.append(ri)
                self.moduli.append(d)
        for ri in range(n):
            if ri not in self.div_by_row:
                self.gen_rows.append(ri)
                self.moduli.append(0)
        self.U = eng.U
        self.Uinv_cols = eng.Uinv_cols
        self.slot = {ri: t for t, ri in enumerate(self.gen_rows)}

    def generators(self) -> list[tuple[int, dict]]:
        out = []
        for ri, mu in zip(self.gen_rows, self.moduli):
            rep = {self.coords[i]: v for i, v in self.Uinv_cols[ri].items()}
            out.append((mu, rep))
        return out

    def reduce(self, vec_local: dict) -> dict:
        out = {}
        for t, ri in enumerate(self.gen_rows):
            urow = self.U[ri]
            acc = 0
            if len(urow) < len(vec_local):
                for k, c in urow.items():
                    v = vec_local.get(k)
                    if v:
                        acc += c * int(v)
            else:
                for k, v in vec_local.items():
                    c = urow.get(k)
                    if c:
                        acc += c * int(v)
            mu = self.moduli[t]
            if mu:
                acc %= mu
            if acc:
                out[t] = acc
        return out


class GradedPresentation:
    """Presentation of ambient/span(relations) with independent generators.

    Each generator carries a parity, an annihilator modulus (0 = free) and
    an ambient representative; ``reduce`` maps an ambient vector to its
    canonical coordinates over the generators.
    """

    def __init__(self, ambient_rank: int, relations, parities, domain: CoefficientDomain,
                 ambient_moduli=None):
        self.domain = domain
        self.ambient_rank = ambient_rank
        ev, od = _split_by_parity(ambient_rank, parities)
        ev_map = {c: i for i, c in enumerate(ev)}
        od_map = {c: i for i, c in enumerate(od)}
        ev_rels, od_rels = [], []
        for r in relations:
            if not r:
                continue
            if next(iter(r)) in ev_map:
                ev_rels.append(_localise(r, ev_map, "even"))
            else:
                od_rels.append(_localise(r, od_map, "odd"))
        if domain.is_field:
            self._blocks = [(_FieldBlock(ev, ev_rels, domain), 0),
                            (_FieldBlock(od, od_rels, domain), 1)]
        else:
            default_mu = domain.modulus if domain.kind == "Zmod" else 0
            if ambient_moduli is None:
                mu_all = [default_mu] * ambient_rank
            else:
                mu_all = [int(m) if m else default_mu for m in ambient_moduli]
            ev_mu = [mu_all[c] for c in ev]
            od_mu = [mu_all[c] for c in od]
            self._blocks = [(_IntBlock(ev, ev_rels, domain, ev_mu), 0),
                            (_IntBlock(od, od_rels, domain, od_mu), 1)]
        self._ev_map, self._od_map = ev_map, od_map
        self.generators: list[PresentedGenerator] = []
        self._offsets = []
        for blk, par in self._blocks:
            self._offsets.append(len(self.generators))
            for mu, rep in blk.generators():
                self.generators.append(PresentedGenerator(parity=par, modulus=mu, rep=rep))

    @property
    def rank(self) -> int:
        return len(self.generators)

    def moduli(self) -> list[int]:
        return [g.modulus for g in self.generators]

    def parities(self) -> list[int]:
        return [g.parity for g in self.generators]

    def reduce(self, vec: dict) -> dict:
        """Canonical coordinates of an ambient vector's class."""
        if not vec:
            return {}
        ev_part = {}
        od_part = {}
        for k, v in vec.items():
            if k in self._ev_map:
                ev_part[self._ev_map[k]] = v
            else:
                od_part[self._od_map[k]] = v
        out = {}
        for (blk, par), off, part in zip(self._blocks, self._offsets, (ev_part, od_part)):
            if part:
                for t, v in blk.reduce(part).items():
                    out[off + t] = v
        return out

    def invariants(self) -> GradedInvariants:
        ev_free = od_free = 0
        ev_tor, od_tor = [], []
        for g in self.generators:
            if g.modulus == 0:
                if g.parity == 0:
                    ev_free += 1
                else:
                    od_free += 1
            elif g.modulus > 1:
                (ev_tor if g.parity == 0 else od_tor).append(g.modulus)
        return GradedInvariants(
            even=ModuleInvariants(ev_free, _invariant_chain(ev_tor)),
            odd=ModuleInvariants(od_free, _invariant_chain(od_tor)),
        )


def present_quotient(ambient_rank: int, relations, parities, domain: CoefficientDomain,
                     ambient_moduli=None) -> GradedPresentation:
    return GradedPresentation(ambient_rank, relations, parities, domain, ambient_moduli)


# ---------------------------------------------------------------------------
# test support


def random_unimodular(n: int, rng: random.Random, ops: int = 12) -> list[list[int]]:
    """Product of elementary integer matrices; determinant +-1 by construction."""
    mat = [[1 if i == j else 0 for j in range(n)] for i in range(n)]
    for _ in range(ops):
        kind = rng.randrange(3)
        i, j = rng.randrange(n), rng.randrange(n)
        if kind == 0 and i != j:
            c = rng.choice([-2, -1, 1, 2])
            for k in range(n):
                mat[i][k] += c * mat[j][k]
        elif kind == 1:
            mat[i], mat[j] = mat[j], mat[i]
        else:
            for k in range(n):
                mat[i][k] = -mat[i][k]
    return mat
