"""Linear algebra over the valuation ring of a discretely valued field.

Provides exact echelon (Hermite) and Smith forms with respect to the
uniformizer valuation, lattices and canonical homothety-class
representatives, finitely generated matrix modules in End(K^N), and the
saturation routine that computes the span of a representation image.

Pivot rule (frozen): minimal valuation first, lowest insertion index on
ties; pivot entries are normalized to powers of the uniformizer and
entries above pivots are reduced to canonical residues, which makes the
echelon basis unique per module.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field

from .errors import (InternalInvariantViolation, NonIntegralInput,
                     NotFullRank, Singular)
from .fields import (INF, FieldSpec, LaurentRational, RationalAtP,
                     unit_sample_set)
from .schur import SchurModule, rho

# ---------------------------------------------------------------------------
# generic exact matrix helpers
# ---------------------------------------------------------------------------


def identity_matrix(spec: FieldSpec, m: int):
    one, zero = spec.one(), spec.zero()
    return tuple(tuple(one if i == j else zero for j in range(m))
                 for i in range(m))


def mat_mul(A, B):
    m, inner, cols = len(A), len(B), len(B[0])
    out = []
    for i in range(m):
        row = []
        Ai = A[i]
        for j in range(cols):
            acc = Ai[0] * B[0][j]
            for k in range(1, inner):
                acc = acc + Ai[k] * B[k][j]
            row.append(acc)
        out.append(tuple(row))
    return tuple(out)


def mat_vec(A, v):
    out = []
    for row in A:
        acc = row[0] * v[0]
        for k in range(1, len(v)):
            acc = acc + row[k] * v[k]
        out.append(acc)
    return tuple(out)


def transpose(A):
    return tuple(tuple(A[i][j] for i in range(len(A))) for j in range(len(A[0])))


def mat_inv(spec: FieldSpec, A):
    """Exact inverse by Gauss-Jordan elimination; raises Singular."""
    m = len(A)
    work = [list(row) + [spec.one() if i == j else spec.zero()
                         for j in range(m)] for i, row in enumerate(A)]
    for col in range(m):
        piv = None
        best = INF
        for r in range(col, m):
            v = spec.val(work[r][col])
            if v < best:
                best, piv = v, r
        if piv is None or best == INF:
            raise Singular("matrix is singular")
        work[col], work[piv] = work[piv], work[col]
        inv = spec.one() / work[col][col]
        work[col] = [x * inv for x in work[col]]
        for r in range(m):
            if r != col and not spec.is_zero(work[r][col]):
                c = work[r][col]
                work[r] = [x - c * y for x, y in zip(work[r], work[col])]
    return tuple(tuple(row[m:]) for row in work)


def is_integral_matrix(spec: FieldSpec, X) -> bool:
    return all(spec.val(x) >= 0 for row in X for x in row)


def vectorize(mat):
    out = []
    for row in mat:
        out.extend(row)
    return tuple(out)


def unvectorize(vec, N: int):
    return tuple(tuple(vec[i * N: (i + 1) * N]) for i in range(N))


def _canonical_mod(spec: FieldSpec, x, k: int):
    """Canonical representative of x modulo (uniformizer^k * R)."""
    v = spec.val(x)
    if v == INF or v >= k:
        return spec.zero()
    if v >= 0:
        return spec.mod_uniformizer_power(x, k)
    pi = spec.uniformizer()
    shift = pi ** (-int(v))
    return spec.mod_uniformizer_power(x * shift, k - int(v)) / shift


# ---------------------------------------------------------------------------
# exact echelon over the valuation ring
# ---------------------------------------------------------------------------

class ExactEchelon:
    """Incremental echelon basis of an R-module spanned by inserted vectors.

    Maintains one pivot row per pivot coordinate; insert() returns True
    iff the vector enlarged the module.
    """

    def __init__(self, spec: FieldSpec, m: int):
        self.spec = spec
        self.m = m
        self.pivots: dict[int, tuple[int, list]] = {}  # col -> (val, row)

    @property
    def rank(self) -> int:
        return len(self.pivots)

    def _reduce_forward(self, v):
        """Reduce v against pivot rows; returns (col, val, row) or None."""
        spec = self.spec
        pi = spec.uniformizer()
        v = list(v)
        queue = [v]
        changed = False
        while queue:
            v = queue.pop()
            col = 0
            while col < self.m:
                x = v[col]
                if spec.is_zero(x):
                    col += 1
                    continue
                xv = int(spec.val(x))
                hit = self.pivots.get(col)
                if hit is None:
                    factor = (pi ** xv) / x
                    row = [factor * y for y in v]
                    self.pivots[col] = (xv, row)
                    changed = True
                    break
                pval, prow = hit
                if xv >= pval:
                    c = x / prow[col]
                    for i in range(col, self.m):
                        if not spec.is_zero(prow[i]):
                            v[i] = v[i] - c * prow[i]
                    col += 1
                    continue
                # the new vector has a sharper pivot: swap and re-insert
                factor = (pi ** xv) / x
                row = [factor * y for y in v]
                self.pivots[col] = (xv, row)
                queue.append(prow)
                changed = True
                break
        return changed

    def insert(self, v) -> bool:
        """Add v to the module; True iff the span strictly grew."""
        return self._reduce_forward(v)

    def member(self, v) -> bool:
        """Exact membership of v in the current span (non-mutating)."""
        spec = self.spec
        v = list(v)
        for col in sorted(self.pivots):
            x = v[col]
            if spec.is_zero(x):
                continue
            pval, prow = self.pivots[col]
            if spec.val(x) < pval:
                return False
            c = x / prow[col]
            for i in range(col, self.m):
                if not spec.is_zero(prow[i]):
                    v[i] = v[i] - c * prow[i]
        return all(spec.is_zero(x) for x in v)

    def canonical_rows(self):
        """Pivot-normalized rows with entries above pivots reduced."""
        spec = self.spec
        cols = sorted(self.pivots)
        rows = {c: list(self.pivots[c][1]) for c in cols}
        vals = {c: self.pivots[c][0] for c in cols}
        for c in cols:
            for c2 in cols:
                if c2 <= c:
                    continue
                row, row2 = rows[c], rows[c2]
                x = row[c2]
                if spec.is_zero(x):
                    continue
                rep = _canonical_mod(spec, x, vals[c2])
                coef = (x - rep) / row2[c2]
                for i in range(c2, self.m):
                    if not spec.is_zero(row2[i]):
                        row[i] = row[i] - coef * row2[i]
        return tuple(tuple(rows[c]) for c in cols), tuple(vals[c] for c in cols)


def smith_divisors(vectors, spec: FieldSpec):
    """Sorted elementary-divisor valuations of the R-span of the vectors."""
    rows = [list(v) for v in vectors
            if any(not spec.is_zero(x) for x in v)]
    if not rows:
        return ()
    m = len(rows[0])
    active_rows = list(range(len(rows)))
    active_cols = list(range(m))
    divisors = []
    while active_rows and active_cols:
        best = INF
        br = bc = None
        for r in active_rows:
            row = rows[r]
            for c in active_cols:
                v = spec.val(row[c])
                if v < best:
                    best, br, bc = v, r, c
        if best == INF:
            break
        divisors.append(int(best))
        pivot_entry = rows[br][bc]
        # clear the pivot column (rows keep integral coefficients since
        # the pivot has globally minimal valuation)
        for r in active_rows:
            if r == br:
                continue
            x = rows[r][bc]
            if spec.is_zero(x):
                continue
            coef = x / pivot_entry
            rows[r] = [a - coef * b for a, b in zip(rows[r], rows[br])]
        active_rows.remove(br)
        active_cols.remove(bc)
    return tuple(sorted(divisors))


@dataclass(frozen=True)
class HNFResult:
    rows: tuple
    pivot_vals: tuple
    divisors: tuple


def hnf_dvr(vectors, spec: FieldSpec) -> HNFResult:
    """Canonical echelon basis plus elementary-divisor valuations.

    The echelon rows span the same R-module as the input vectors; the
    divisors come from an independent Smith pass (pivot valuations of the
    echelon form are *not* elementary divisors in general).
    """
    vectors = [tuple(v) for v in vectors]
    if not vectors:
        return HNFResult((), (), ())
    ech = ExactEchelon(spec, len(vectors[0]))
    for v in vectors:
        ech.insert(v)
    rows, pivot_vals = ech.canonical_rows()
    return HNFResult(rows, pivot_vals, smith_divisors(rows, spec))


# ---------------------------------------------------------------------------
# lattices and homothety classes
# ---------------------------------------------------------------------------

class Lattice:
    """Full-rank R-submodule of K^m, stored by a canonical echelon basis."""

    __slots__ = ("spec", "vectors", "m")

    def __init__(self, spec: FieldSpec, vectors):
        self.spec = spec
        self.vectors = vectors
        self.m = len(vectors[0]) if vectors else 0

    @classmethod
    def from_vectors(cls, spec: FieldSpec, vectors) -> "Lattice":
        vectors = [tuple(v) for v in vectors]
        if not vectors:
            raise Singular("a lattice needs at least one basis vector")
        m = len(vectors[0])
        result = hnf_dvr(vectors, spec)
        if len(result.rows) != m:
            raise Singular("lattice basis does not have full rank")
        return cls(spec, result.rows)

    def basis_matrix(self):
        """Matrix whose columns are the basis vectors."""
        return transpose(self.vectors)

    def member(self, v) -> bool:
        ech = ExactEchelon(self.spec, self.m)
        for w in self.vectors:
            ech.insert(w)
        return ech.member(v)

    def scaled(self, k: int) -> "Lattice":
        pi = self.spec.uniformizer() ** k
        return Lattice(self.spec,
                       tuple(tuple(pi * x for x in v) for v in self.vectors))

    def key(self):
        return tuple(tuple(self.spec.to_str(x) for x in v)
                     for v in self.vectors)

    def __repr__(self):
        return f"Lattice(m={self.m})"


def standard_lattice(spec: FieldSpec, m: int) -> Lattice:
    return Lattice(spec, identity_matrix(spec, m))


def lattice_sum(L1: Lattice, L2: Lattice) -> Lattice:
    return Lattice.from_vectors(L1.spec, L1.vectors + L2.vectors)


def lattice_dual(L: Lattice) -> Lattice:
    """{x : <x, L> in R}; basis rows of the inverse of the basis matrix."""
    inv = mat_inv(L.spec, L.basis_matrix())
    return Lattice.from_vectors(L.spec, inv)


def lattice_intersection(L1: Lattice, L2: Lattice) -> Lattice:
    return lattice_dual(lattice_sum(lattice_dual(L1), lattice_dual(L2)))


def relative_divisors(L1: Lattice, L2: Lattice):
    """Valuations of the elementary divisors of L2 relative to L1."""
    binv = mat_inv(L1.spec, L1.basis_matrix())
    coords = [mat_vec(binv, v) for v in L2.vectors]
    return smith_divisors(coords, L1.spec)


class LatticeClass:
    """Homothety class of a lattice, held by a canonical representative.

    The representative is the echelon basis scaled so the minimal
    elementary divisor (relative to the standard lattice) is 0.
    """

    __slots__ = ("rep", "_key")

    def __init__(self, lattice: Lattice):
        divs = smith_divisors(lattice.vectors, lattice.spec)
        shift = -divs[0]
        self.rep = lattice.scaled(shift) if shift else lattice
        if shift:
            # rescaling shifts pivot normalization; re-canonicalize
            self.rep = Lattice.from_vectors(lattice.spec, self.rep.vectors)
        self._key = self.rep.key()

    def key(self):
        return self._key

    def __eq__(self, other):
        return isinstance(other, LatticeClass) and other._key == self._key

    def __hash__(self):
        return hash(self._key)

    def __repr__(self):
        return f"LatticeClass({self._key!r})"


def class_distance(c1: LatticeClass, c2: LatticeClass) -> int:
    """max - min of the relative elementary-divisor valuations."""
    divs = relative_divisors(c1.rep, c2.rep)
    return int(divs[-1] - divs[0])


# ---------------------------------------------------------------------------
# finitely generated matrix modules in End(K^N)
# ---------------------------------------------------------------------------

@dataclass
class MatrixModule:
    """R-submodule of N x N matrices, in canonical echelon form."""

    spec: FieldSpec
    N: int
    basis: tuple            # tuple of N x N matrices over the field
    divisors: tuple         # sorted elementary-divisor valuations
    certificate: dict = field(default_factory=dict)

    @property
    def rank(self) -> int:
        return len(self.basis)

    def _echelon(self) -> ExactEchelon:
        ech = ExactEchelon(self.spec, self.N * self.N)
        for b in self.basis:
            ech.insert(vectorize(b))
        return ech

    def summary(self) -> dict:
        return {"rank": self.rank, "divisors": list(self.divisors),
                "N": self.N, "certificate": dict(self.certificate)}


def module_from_matrices(spec: FieldSpec, mats, certificate=None) -> MatrixModule:
    mats = [tuple(tuple(row) for row in m) for m in mats]
    if not mats:
        raise Singular("need at least one matrix")
    N = len(mats[0])
    result = hnf_dvr([vectorize(m) for m in mats], spec)
    basis = tuple(unvectorize(r, N) for r in result.rows)
    return MatrixModule(spec, N, basis, result.divisors,
                        certificate or {})


def full_rank(M: MatrixModule) -> bool:
    return M.rank == M.N * M.N


def congruence_level(M: MatrixModule) -> int:
    """Minimal r with (uniformizer^r * full End) contained in M."""
    if not full_rank(M):
        raise NotFullRank(f"rank {M.rank} < {M.N * M.N}")
    return int(max(M.divisors)) if M.divisors else 0


def membership(M: MatrixModule, X) -> bool:
    """Exact membership of the matrix X in the R-span of M's basis."""
    ech = M._echelon()
    return ech.member(vectorize(tuple(tuple(row) for row in X)))


def module_add_and_saturate(M: MatrixModule, gens) -> MatrixModule:
    """Smallest canonical module containing M and gens, closed under
    left and right multiplication by every gen."""
    spec = M.spec
    gens = [tuple(tuple(row) for row in g) for g in gens]
    for g in gens:
        if not is_integral_matrix(spec, g):
            raise NonIntegralInput("generator has an entry with val < 0")
    N = M.N
    ech = ExactEchelon(spec, N * N)
    frontier = []
    for b in list(M.basis) + gens:
        if ech.insert(vectorize(b)):
            frontier.append(b)
    while frontier:
        new = []
        for b in frontier:
            for g in gens:
                for cand in (mat_mul(g, b), mat_mul(b, g)):
                    if ech.insert(vectorize(cand)):
                        new.append(cand)
        frontier = new
    rows, _ = ech.canonical_rows()
    basis = tuple(unvectorize(r, N) for r in rows)
    return MatrixModule(spec, N, basis, smith_divisors(rows, spec),
                        dict(M.certificate))


# ---------------------------------------------------------------------------
# standard generator sets
# ---------------------------------------------------------------------------

def group_generator_matrices(spec: FieldSpec, n: int, level: int):
    """Transpositions, elementary transvections, and unit diagonals."""
    one, zero = spec.one(), spec.zero()
    gens = []
    for i in range(n):
        for j in range(i + 1, n):
            perm = [[one if (r == c and r not in (i, j))
                     or (r, c) in ((i, j), (j, i)) else zero
                     for c in range(n)] for r in range(n)]
            gens.append(tuple(tuple(r) for r in perm))
    for i in range(n):
        for j in range(n):
            if i != j:
                tv = [[one if r == c else zero for c in range(n)]
                      for r in range(n)]
                tv[i][j] = one
                gens.append(tuple(tuple(r) for r in tv))
    for u in unit_sample_set(spec, level):
        for pos in range(n):
            dg = [[one if r == c else zero for c in range(n)]
                  for r in range(n)]
            dg[pos][pos] = u
            gens.append(tuple(tuple(r) for r in dg))
    return gens


def uniformizer_diagonal_matrices(spec: FieldSpec, n: int):
    """diag(1, ..., pi, ..., 1) for each position."""
    one, zero, pi = spec.one(), spec.zero(), spec.uniformizer()
    out = []
    for pos in range(n):
        dg = [[one if r == c else zero for c in range(n)] for r in range(n)]
        dg[pos][pos] = pi
        out.append(tuple(tuple(r) for r in dg))
    return out


def saturation_alphabet(spec: FieldSpec, n: int, level: int):
    """Generator matrices whose span closure is the order: the group
    generators together with uniformizer diagonals (the latter reach the
    non-invertible-over-R part of the integral image)."""
    return group_generator_matrices(spec, n, level) + \
        uniformizer_diagonal_matrices(spec, n)


def _random_unit(spec: FieldSpec, rng: random.Random):
    if isinstance(spec, RationalAtP):
        while True:
            u = rng.randrange(1, spec.p ** 3)
            if u % spec.p:
                return spec.from_int(u)
    fq = spec.residue_field
    c0 = rng.randrange(1, fq.q)
    coeffs = [c0] + [rng.randrange(fq.q) for _ in range(2)]
    return LaurentRational.make(fq, 0, tuple(coeffs), (1,))


def _random_word_matrix(spec: FieldSpec, n: int, alphabet, rng: random.Random):
    length = rng.randint(2, 5)
    word = identity_matrix(spec, n)
    for _ in range(length):
        word = mat_mul(word, alphabet[rng.randrange(len(alphabet))])
    # mix in a random unit diagonal
    one, zero = spec.one(), spec.zero()
    dg = [[one if r == c else zero for c in range(n)] for r in range(n)]
    for i in range(n):
        dg[i][i] = _random_unit(spec, rng)
    return mat_mul(word, tuple(tuple(r) for r in dg))


# ---------------------------------------------------------------------------
# fast integer lane for the p-adic backend
# ---------------------------------------------------------------------------

def _int_val(x: int, p: int) -> int:
    if x == 0:
        return -1  # sentinel: treated as +inf by callers
    v = 0
    while x % p == 0:
        x //= p
        v += 1
    return v


class _IntEchelon:
    """Echelon basis over Z localized at p, at fixed working precision.

    All rows live in Z/p^prec with pivot entries normalized to exactly
    p^k, so candidate reduction never multiplies by stored units and
    entry sizes stay bounded.  Once the module has full rank with pivot
    valuations summing to S, the modulus tightens to p^(2S+1): since
    p^S * Z^m lies inside the row span, reduction modulo p^(2S+1) never
    moves a vector out of the span, and every reduction artifact sits
    at scale at least p^(S+1), strictly below the span's top elementary
    divisor.  A successive-approximation argument then shows the
    computed span equals the exact one, provided `precision_ok` holds:
    prec - S of true precision survived every pre-full-rank
    elimination, so valuations read off stored entries were exact.

    Zero tests made before full rank are provisional either way; the
    caller re-checks those candidates afterwards (`insert` under the
    tightened modulus is exact), and retries everything at higher
    precision when `precision_ok` fails.
    """

    def __init__(self, m: int, p: int, prec: int = 128):
        self.m = m
        self.p = p
        self.prec = prec
        self.cap = p ** prec
        self.pivots: dict[int, tuple[int, int, list]] = {}  # col->(val,unit,row)
        self.modulus = None  # p^(2S+1) once full rank
        self._val_sum = 0
        self._fullrank_val_sum = None

    @property
    def rank(self):
        return len(self.pivots)

    def precision_ok(self, margin: int = 8) -> bool:
        """True when pre-full-rank eliminations kept enough precision."""
        if self._fullrank_val_sum is None:
            return False
        return self.prec >= 2 * self._fullrank_val_sum + margin

    def _maybe_tighten_modulus(self):
        if self.rank < self.m:
            return
        if self._fullrank_val_sum is None:
            self._fullrank_val_sum = self._val_sum
        exponent = min(2 * self._val_sum + 1, self.prec)
        mod = self.p ** exponent
        if self.modulus is None or mod < self.modulus:
            self.modulus = mod
            for col, (val, unit, row) in list(self.pivots.items()):
                reduced = [x % self.modulus for x in row]
                reduced[col] = row[col]  # keep the exact pivot entry
                self.pivots[col] = (val, unit, reduced)

    def _normalize(self, v, col, xv, mod):
        """Scale v by the inverse of its pivot unit: pivot entry p^xv."""
        unit = (v[col] // (self.p ** xv)) % mod
        w = pow(unit, -1, mod)
        row = [(a * w) % mod for a in v]
        row[col] = self.p ** xv
        return row

    def insert(self, v) -> bool:
        p = self.p
        mod = self.modulus or self.cap
        queue = [[x % mod for x in v]]
        changed = False
        while queue:
            v = queue.pop()
            col = 0
            while col < self.m:
                x = v[col]
                if x == 0:
                    col += 1
                    continue
                xv = _int_val(x, p)
                hit = self.pivots.get(col)
                if hit is None:
                    self.pivots[col] = (xv, 1, self._normalize(v, col, xv, mod))
                    self._val_sum += xv
                    changed = True
                    break
                pval, _, prow = hit
                if xv >= pval:
                    coef = x // (p ** pval)
                    v = [(a - coef * b) % mod for a, b in zip(v, prow)]
                    v[col] = 0
                    col += 1
                    continue
                self.pivots[col] = (xv, 1, self._normalize(v, col, xv, mod))
                self._val_sum += xv - pval
                queue.append(prow)
                changed = True
                break
        if changed:
            self._maybe_tighten_modulus()
        return changed

    def member(self, v) -> bool:
        p = self.p
        mod = self.modulus or self.cap
        v = [x % mod for x in v]
        for col in sorted(self.pivots):
            x = v[col]
            if x == 0:
                continue
            pval, _, prow = self.pivots[col]
            if _int_val(x, p) < pval:
                return False
            coef = x // (p ** pval)
            v = [(a - coef * b) % mod for a, b in zip(v, prow)]
            v[col] = 0
        return all(x == 0 for x in v)

    def canonical_int_rows(self):
        """Canonical rows: pivot entries exactly p^k, reduced above pivots.

        Only valid once the module has full rank (so reductions modulo the
        modulus stay inside the module)."""
        if self.rank < self.m:
            raise NotFullRank("integer canonical form needs full rank")
        self._maybe_tighten_modulus()
        p = self.p
        mod = self.modulus or self.cap
        rows = {col: list(row) for col, (_, _, row) in self.pivots.items()}
        cols = sorted(rows)
        for c in cols:
            for c2 in cols:
                if c2 <= c:
                    continue
                val2 = self.pivots[c2][0]
                x = rows[c][c2]
                rep = x % (p ** val2)
                coef = (x - rep) // (p ** val2)
                if coef:
                    rows[c] = [(a - coef * b) % mod
                               for a, b in zip(rows[c], rows[c2])]
                    rows[c][c] = p ** self.pivots[c][0]
                    rows[c][c2] = rep
        return tuple(tuple(rows[c]) for c in cols)


def _int_smith_divisors(rows, p: int):
    """Elementary-divisor valuations of the span of integer rows over Z_(p)."""
    work = [list(r) for r in rows if any(r)]
    if not work:
        return ()
    active_rows = list(range(len(work)))
    active_cols = list(range(len(work[0])))
    divisors = []
    while active_rows and active_cols:
        best, br, bc = None, None, None
        for r in active_rows:
            row = work[r]
            for c in active_cols:
                if row[c] == 0:
                    continue
                v = _int_val(row[c], p)
                if best is None or v < best:
                    best, br, bc = v, r, c
        if best is None:
            break
        divisors.append(best)
        punit = work[br][bc] // (p ** best)
        for r in active_rows:
            if r == br:
                continue
            x = work[r][bc]
            if x == 0:
                continue
            coef = x // (p ** best)
            work[r] = [punit * a - coef * b for a, b in zip(work[r], work[br])]
        active_rows.remove(br)
        active_cols.remove(bc)
    return tuple(sorted(divisors))


# ---------------------------------------------------------------------------
# the order of a representation image
# ---------------------------------------------------------------------------

def _residue_closure_is_full(spec: FieldSpec, residue_mats, N: int) -> bool:
    """True iff the ring closure of the residue images spans all N x N
    matrices over the residue field.  (If so, the exact module is the
    full End lattice by Nakayama's lemma.)"""
    from . import _kernels

    fq = spec.residue_field
    return _kernels.residue_ring_closure_rank(fq, residue_mats, N) == N * N


def _full_end_module(spec: FieldSpec, N: int, certificate) -> MatrixModule:
    basis = []
    zero, one = spec.zero(), spec.one()
    for i in range(N):
        for j in range(N):
            m = [[zero] * N for _ in range(N)]
            m[i][j] = one
            basis.append(tuple(tuple(r) for r in m))
    return MatrixModule(spec, N, tuple(basis), (0,) * (N * N), certificate)


def _saturate_padic(spec, images, N, trials, rng, alphabet, module, level):
    # The working precision certifies itself (_IntEchelon.precision_ok);
    # retries are deterministic because the rng stream just continues.
    prec = 128
    while True:
        result = _saturate_padic_at(spec, images, N, trials, rng, alphabet,
                                    module, level, prec)
        if result is not None:
            return result
        prec *= 4
        if prec > 4096:
            raise InternalInvariantViolation(
                "p-adic saturation could not certify its precision")


def _saturate_padic_at(spec, images, N, trials, rng, alphabet, module, level,
                       prec):
    p = spec.p
    # exact integer representations of the images
    int_mats = [[[int(x) for x in row] for row in im] for im in images]
    ident = [[1 if i == j else 0 for j in range(N)] for i in range(N)]
    ech = _IntEchelon(N * N, p, prec=prec)

    def vec(mat):
        out = []
        for row in mat:
            out.extend(row)
        return out

    def unvec_int(v):
        mod = ech.modulus or ech.cap
        return [[x % mod for x in v[i * N:(i + 1) * N]] for i in range(N)]

    def reduce_mat(mat):
        mod = ech.modulus or ech.cap
        return [[x % mod for x in row] for row in mat]

    def int_mat_mul(A, B):
        n = len(A)
        mod = ech.modulus or ech.cap
        out = []
        for i in range(n):
            Ai = A[i]
            row = []
            for j in range(n):
                acc = 0
                for k in range(n):
                    a = Ai[k]
                    if a:
                        acc += a * B[k][j]
                row.append(acc % mod)
            out.append(row)
        return out

    # Zero tests before full rank are provisional (see _IntEchelon), so
    # every vector judged dependent then is kept and re-checked once the
    # tightened modulus makes insert exact.
    deferred = []

    def feed(v):
        if ech.insert(v):
            return True
        if ech.modulus is None:
            deferred.append(v)
        return False

    frontier = []
    for mat in [ident] + int_mats:
        if feed(vec(mat)):
            frontier.append(reduce_mat(mat))
    while frontier:
        new = []
        for b in frontier:
            for g in int_mats:
                for cand in (int_mat_mul(g, b), int_mat_mul(b, g)):
                    if feed(vec(cand)):
                        new.append(reduce_mat(cand))
        frontier = new

    if ech.rank == N * N:
        frontier = [unvec_int(v) for v in deferred if ech.insert(v)]
        deferred = []
        while frontier:
            new = []
            for b in frontier:
                for g in int_mats:
                    for cand in (int_mat_mul(g, b), int_mat_mul(b, g)):
                        if ech.insert(vec(cand)):
                            new.append(reduce_mat(cand))
            frontier = new

    # randomized enlargement certificate
    passed = 0
    restarts = 0
    while passed < trials:
        word = _random_word_matrix(spec, module.n, alphabet, rng)
        image = rho(module, word, spec)
        cand = [[int(x) % ech.cap for x in row] for row in image]
        if ech.insert(vec(cand)):
            restarts += 1
            passed = 0
            frontier = [reduce_mat(cand)]
            while frontier:
                new = []
                for b in frontier:
                    for g in int_mats:
                        for prod in (int_mat_mul(g, b), int_mat_mul(b, g)):
                            if ech.insert(vec(prod)):
                                new.append(reduce_mat(prod))
                frontier = new
        else:
            passed += 1

    if ech.rank < N * N:
        raise InternalInvariantViolation(
            "p-adic saturation did not reach full rank")
    if not ech.precision_ok():
        return None
    rows = ech.canonical_int_rows()
    divisors = _int_smith_divisors(rows, p)
    basis = tuple(unvectorize(tuple(spec.from_int(x) for x in row), N)
                  for row in rows)
    certificate = {"level": level, "trials": trials, "trials_passed": passed,
                   "restarts": restarts, "exact": True,
                   "label": "exact", "method": "saturation"}
    return MatrixModule(spec, N, basis, divisors, certificate)


def _saturate_generic(spec, images, N, trials, rng, alphabet, module, level):
    ech = ExactEchelon(spec, N * N)
    mats = [identity_matrix(spec, N)] + list(images)
    frontier = []
    for mat in mats:
        if ech.insert(vectorize(mat)):
            frontier.append(mat)
    while frontier:
        new = []
        for b in frontier:
            for g in images:
                for cand in (mat_mul(g, b), mat_mul(b, g)):
                    if ech.insert(vectorize(cand)):
                        new.append(cand)
        frontier = new
    passed = 0
    restarts = 0
    while passed < trials:
        word = _random_word_matrix(spec, module.n, alphabet, rng)
        image = rho(module, word, spec)
        if ech.insert(vectorize(image)):
            restarts += 1
            passed = 0
            frontier = [image]
            while frontier:
                new = []
                for b in frontier:
                    for g in images:
                        for cand in (mat_mul(g, b), mat_mul(b, g)):
                            if ech.insert(vectorize(cand)):
                                new.append(cand)
                frontier = new
        else:
            passed += 1
    rows, _ = ech.canonical_rows()
    divisors = smith_divisors(rows, spec)
    basis = tuple(unvectorize(r, N) for r in rows)
    exact = isinstance(spec, RationalAtP)
    label = "exact" if exact else f"certified at level={level}, trials={trials}"
    certificate = {"level": level, "trials": trials, "trials_passed": passed,
                   "restarts": restarts, "exact": exact, "label": label,
                   "method": "saturation"}
    return MatrixModule(spec, N, basis, divisors, certificate)


def compute_order(module: SchurModule, spec: FieldSpec, level: int = 1,
                  trials: int = 64, rng_seed: int = 0) -> MatrixModule:
    """R-span of the integral representation image, by saturation.

    Seeds with the images of transpositions, transvections, unit
    diagonals (from unit_sample_set at the given level), and uniformizer
    diagonals, closes the span under products, and then runs `trials`
    randomized enlargement tests with random generator words; any
    enlargement is absorbed and the count restarts.
    """
    N = module.N
    if N == 0:
        raise Singular("the module is zero (shape has more rows than n)")
    alphabet = saturation_alphabet(spec, module.n, level)
    images = [rho(module, g, spec) for g in alphabet]
    for im in images:
        if not is_integral_matrix(spec, im):
            raise NonIntegralInput("generator image has an entry with val < 0")
    rng = random.Random(rng_seed)

    residue_mats = [tuple(tuple(spec.reduce(x) for x in row) for row in im)
                    for im in images]
    if _residue_closure_is_full(spec, residue_mats, N):
        certificate = {"level": level, "trials": trials,
                       "trials_passed": trials, "restarts": 0,
                       "exact": True, "label": "exact",
                       "method": "residue-full"}
        return _full_end_module(spec, N, certificate)

    if isinstance(spec, RationalAtP):
        return _saturate_padic(spec, images, N, trials, rng, alphabet,
                               module, level)
    return _saturate_generic(spec, images, N, trials, rng, alphabet,
                             module, level)
