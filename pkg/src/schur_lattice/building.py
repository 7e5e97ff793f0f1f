"""Fixed-point geometry in the lattice-class building.

Implements the two independent fixed-point engines (exponent-matrix
polytrope enumeration and lattice-class BFS), graduated-order detection,
residue invariant-subspace search, convexity checking, and the residue
irreducibility test.

Conventions (uniform across the package): vectors are coordinate columns
and matrices act by left multiplication; the diagonal lattice attached
to an integer vector u is the span of uniformizer^{u_i} * e_i.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

import numpy as np

from . import _kernels
from .dvr import (ExactEchelon, Lattice, LatticeClass, MatrixModule,
                  class_distance, congruence_level, full_rank,
                  lattice_intersection, lattice_sum, mat_inv, mat_mul,
                  mat_vec, membership, relative_divisors, standard_lattice)
from .errors import (CapExceeded, InternalInvariantViolation, NegativeCycle,
                     NotFullRank, SchurLatticeError, Singular)
from .fields import GF, INF, FieldSpec
from .schur import SchurModule, residue_rep

DEFAULT_SUBSPACE_CAP = 2 ** 16
DEFAULT_ENUM_CAP = 10 ** 6


# ---------------------------------------------------------------------------
# domain types
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class ResidueRep:
    """Residue-field representation data: generator images over k.

    Generator images must be invertible (this is a group representation;
    the BFS engine works with algebra bases instead and bypasses this
    type).
    """

    fq: GF
    N: int
    generators: tuple

    def __post_init__(self):
        for g in self.generators:
            if _kernels.gf_rank(self.fq, np.asarray(g, dtype=np.int64)) != self.N:
                raise Singular("residue generator image is not invertible")


@dataclass(frozen=True)
class FixSet:
    """A computed fixed-point set of lattice classes."""

    classes: tuple            # LatticeClass, sorted by canonical key
    bounded: bool
    method: str               # "polytrope" | "bfs"
    u_vectors: tuple | None   # normalized integer vectors (polytrope only)
    capped: bool = False      # True when an unbounded set was enumerated
    radius: int | None = None  # enumeration radius actually used

    def keys(self):
        return tuple(c.key() for c in self.classes)


# ---------------------------------------------------------------------------
# exponent-matrix profiles
# ---------------------------------------------------------------------------

def entry_profile(H: MatrixModule, allow_degenerate: bool = False):
    """Entry-wise minimum valuation profile of the module's basis.

    Positions where every basis matrix vanishes get +inf; those only
    occur for non-full-rank modules and require allow_degenerate.
    """
    spec, N = H.spec, H.N
    prof = [[INF] * N for _ in range(N)]
    for mat in H.basis:
        for i in range(N):
            for j in range(N):
                v = spec.val(mat[i][j])
                if v < prof[i][j]:
                    prof[i][j] = v
    if not allow_degenerate:
        for row in prof:
            for x in row:
                if x == INF:
                    raise NotFullRank(
                        "profile has empty positions; module is degenerate")
    return tuple(tuple(int(x) if x != INF else INF for x in row)
                 for row in prof)


def min_plus_closure(M):
    """All-pairs (min, +) closure of an exponent matrix.

    Requires zero diagonal; raises NegativeCycle when the closure drives
    a diagonal entry negative (no order can have such a profile).
    Entries may be +inf (absent constraint).
    """
    N = len(M)
    for i in range(N):
        if M[i][i] != 0:
            raise SchurLatticeError("exponent matrix must have zero diagonal")
    closed, neg = _kernels.minplus_closure_matrix(M)
    if neg:
        raise NegativeCycle("min-plus closure has a negative diagonal")
    return tuple(tuple(x if x == INF else int(x) for x in row)
                 for row in closed)


def detect_graduated(H: MatrixModule):
    """Exponent matrix M with H = {X : val(X_ij) >= m_ij}, or None.

    Computes the entry-wise minimum profile, verifies zero diagonal and
    triangle closure, then decides exact equality by mutual membership
    of generating sets.
    """
    if not full_rank(H):
        raise NotFullRank("graduated detection needs a full-rank module")
    M = entry_profile(H)
    N = H.N
    for i in range(N):
        if M[i][i] != 0:
            return None
    closed, neg = _kernels.minplus_closure_matrix(M)
    if neg or any(closed[i][j] != M[i][j] for i in range(N) for j in range(N)):
        return None
    # H is inside the profile lattice by construction; check the reverse:
    # every generator uniformizer^{m_ij} E_ij of the profile lattice
    # must lie in H.
    spec = H.spec
    pi = spec.uniformizer()
    zero = spec.zero()
    for i in range(N):
        for j in range(N):
            gen = [[zero] * N for _ in range(N)]
            gen[i][j] = pi ** M[i][j]
            if not membership(H, gen):
                return None
    return M


# ---------------------------------------------------------------------------
# polytrope fixed points
# ---------------------------------------------------------------------------

def _polytrope_bounded(M) -> bool:
    """Boundedness of {u : u_i - u_j <= m_ij} modulo the diagonal.

    For a closed exponent matrix this is exact: every difference
    u_i - u_j lies in [-m_ji, m_ij], so the polytrope is bounded iff
    every entry is finite.
    """
    N = len(M)
    return all(M[i][j] != INF for i in range(N) for j in range(N))


def diagonal_lattice(spec: FieldSpec, u) -> Lattice:
    """Span of uniformizer^{u_i} * e_i."""
    pi = spec.uniformizer()
    zero = spec.zero()
    vectors = []
    for i, ui in enumerate(u):
        v = [zero] * len(u)
        v[i] = pi ** int(ui)
        vectors.append(tuple(v))
    return Lattice.from_vectors(spec, vectors)


def fix_polytrope(M, spec: FieldSpec | None = None, unbounded_radius: int = 2,
                  enumeration_cap: int = DEFAULT_ENUM_CAP) -> FixSet:
    """Integer points of {u : u_i - u_j <= m_ij}, normalized to min 0.

    Requires a closed exponent matrix.  The diagonal lattice of each
    point is invariant under the graduated order with profile M.  When
    the polytrope is unbounded (some entry of the closed matrix is
    infinite, leaving a difference unconstrained in one direction),
    enumeration is capped at ``unbounded_radius`` and the boundedness
    flag is False.
    """
    N = len(M)
    bounded = _polytrope_bounded(M)
    if bounded:
        finite = [M[i][j] for i in range(N) for j in range(N)
                  if i != j and M[i][j] != INF]
        radius = max(finite) if finite else 0
    else:
        radius = unbounded_radius
    if (radius + 1) ** N > enumeration_cap:
        raise CapExceeded(
            f"polytrope enumeration ({radius + 1}^{N}) exceeds the cap")
    points = []
    for u in itertools.product(range(radius + 1), repeat=N):
        if min(u) != 0:
            continue
        ok = True
        for i in range(N):
            for j in range(N):
                mij = M[i][j]
                if mij != INF and u[i] - u[j] > mij:
                    ok = False
                    break
            if not ok:
                break
        if ok:
            points.append(u)
    points.sort()
    classes = ()
    if spec is not None:
        classes = tuple(LatticeClass(diagonal_lattice(spec, u))
                        for u in points)
    return FixSet(classes=classes, bounded=bounded, method="polytrope",
                  u_vectors=tuple(points), capped=not bounded,
                  radius=radius)


# ---------------------------------------------------------------------------
# invariant subspaces over the residue field
# ---------------------------------------------------------------------------

def _proper_invariant_subspaces(fq: GF, mats, N: int, cap: int):
    """All proper nonzero subspaces of k^N invariant under every matrix.

    Fast path: if the matrices generate the full matrix algebra, there
    are none (Burnside) and no enumeration is needed.  Otherwise lines
    are spun to their invariant closures and the resulting set is closed
    under sums; the cap guards the q^N line enumeration.
    """
    if _kernels.residue_ring_closure_rank(fq, mats, N) == N * N:
        return []
    q = fq.q
    if q ** N > cap:
        raise CapExceeded(f"residue subspace search: {q}^{N} exceeds {cap}")
    dims, sigs = _kernels.line_spin_profile(fq, mats, N)
    found: dict[bytes, np.ndarray] = {}
    for code in np.nonzero((dims > 0) & (dims < N))[0]:
        dim = int(dims[code])
        rows = _kernels.unpack_gf_rows(sigs[code], dim, q, N)
        found.setdefault(rows.tobytes() + bytes([dim]), rows)
    # close under sums
    changed = True
    while changed:
        changed = False
        items = list(found.values())
        for a, b in itertools.combinations(items, 2):
            rows, _ = _kernels.gf_rref(fq, np.vstack([a, b]))
            dim = rows.shape[0]
            if 0 < dim < N:
                key = rows.tobytes() + bytes([dim])
                if key not in found:
                    found[key] = rows
                    changed = True
    out = sorted(found.values(),
                 key=lambda r: (r.shape[0], r.reshape(-1).tolist()))
    return out


def invariant_subspaces(rep: ResidueRep, cap: int = DEFAULT_SUBSPACE_CAP):
    """Proper nonzero subspaces invariant under all generator images,
    as canonical row-echelon bases sorted by (dimension, rows)."""
    return _proper_invariant_subspaces(rep.fq, rep.generators, rep.N, cap)


# ---------------------------------------------------------------------------
# exact invariance and the BFS fixed-point engine
# ---------------------------------------------------------------------------

def is_invariant(H: MatrixModule, L: Lattice) -> bool:
    """True iff h.v lies in L for every basis matrix h and basis vector v."""
    ech = ExactEchelon(L.spec, L.m)
    for w in L.vectors:
        ech.insert(w)
    for h in H.basis:
        for v in L.vectors:
            if not ech.member(mat_vec(h, v)):
                return False
    return True


def _reduced_conjugated_basis(H: MatrixModule, L: Lattice):
    """Reductions mod the uniformizer of B^-1 h B over the L-basis B.

    Integrality of every conjugate is exactly H-invariance of L; a
    non-integral entry here means the BFS walked to a non-fixed class,
    which is a bug."""
    spec = H.spec
    B = L.basis_matrix()
    Binv = mat_inv(spec, B)
    mats = []
    for h in H.basis:
        conj = mat_mul(Binv, mat_mul(h, B))
        for row in conj:
            for x in row:
                if spec.val(x) < 0:
                    raise InternalInvariantViolation(
                        "BFS reached a class that is not H-invariant")
        mats.append(tuple(tuple(spec.reduce(x) for x in row) for row in conj))
    return mats


def fix_bfs(H: MatrixModule, module: SchurModule, spec: FieldSpec,
            radius_cap: int | None = None,
            subspace_cap: int = DEFAULT_SUBSPACE_CAP) -> FixSet:
    """Exhaustive BFS over H-fixed lattice classes from the standard one.

    At each fixed class, neighbors are preimages of the invariant
    subspaces of the residue action of H on L/(uniformizer)L, computed by
    conjugating the H-basis into the L-basis and reducing; every such
    preimage is H-invariant by construction.  The fixed set lies in the
    ball of radius congruence_level(H) around the standard class.
    """
    if not full_rank(H):
        raise NotFullRank("fix_bfs needs a full-rank order")
    level = congruence_level(H)
    if radius_cap is None:
        radius_cap = level
    if radius_cap < level:
        raise SchurLatticeError(
            f"radius_cap {radius_cap} < congruence level {level}")
    N = H.N
    fq = spec.residue_field
    pi = spec.uniformizer()
    c0 = LatticeClass(standard_lattice(spec, N))
    visited = {c0.key(): c0}
    queue = [c0]
    while queue:
        cls = queue.pop(0)
        L = cls.rep
        mats = _reduced_conjugated_basis(H, L)
        B = L.basis_matrix()
        for rows in _proper_invariant_subspaces(fq, mats, N, subspace_cap):
            vectors = [tuple(pi * x for x in v) for v in L.vectors]
            for w in rows:
                lifted = tuple(spec.lift(int(c)) for c in w)
                vectors.append(mat_vec(B, lifted))
            neighbor = LatticeClass(Lattice.from_vectors(spec, vectors))
            key = neighbor.key()
            if key in visited:
                continue
            dist = class_distance(c0, neighbor)
            if dist > level:
                raise InternalInvariantViolation(
                    f"fixed class at distance {dist} > congruence level "
                    f"{level}")
            if not is_invariant(H, neighbor.rep):
                raise InternalInvariantViolation(
                    "BFS produced a non-invariant neighbor")
            visited[key] = neighbor
            queue.append(neighbor)
    classes = tuple(sorted(visited.values(), key=lambda c: c.key()))
    return FixSet(classes=classes, bounded=True, method="bfs",
                  u_vectors=None)


# ---------------------------------------------------------------------------
# convexity and residue irreducibility
# ---------------------------------------------------------------------------

def convexity_check(S: FixSet) -> bool:
    """Closure of the class set under sums and intersections of
    representatives, at every relative scaling within the elementary-
    divisor range of each pair."""
    if not S.classes:
        return True
    keys = set(S.keys())
    reps = [c.rep for c in S.classes]
    for a, b in itertools.combinations_with_replacement(range(len(reps)), 2):
        La, Lb = reps[a], reps[b]
        divs = relative_divisors(La, Lb)
        lo, hi = int(divs[0]), int(divs[-1])
        for s in range(-hi - 1, -lo + 2):
            Lb_s = Lb.scaled(s)
            total = lattice_sum(La, Lb_s)
            meet = lattice_intersection(La, Lb_s)
            if LatticeClass(total).key() not in keys:
                return False
            if LatticeClass(meet).key() not in keys:
                return False
    return True


def spans_end_residue(H: MatrixModule) -> bool:
    """True iff the mod-uniformizer reductions of H's basis span the full
    matrix algebra over the residue field (absolute irreducibility of the
    residue representation)."""
    if not full_rank(H):
        raise NotFullRank("residue span test needs a full-rank module")
    spec, N = H.spec, H.N
    rows = [[spec.reduce(x) for row in mat for x in row] for mat in H.basis]
    return _kernels.gf_rank(spec.residue_field, np.asarray(rows)) == N * N


def residue_generator_rep(module: SchurModule, spec: FieldSpec) -> ResidueRep:
    """Group-generator residue representation: images of transpositions,
    transvections, and a primitive-unit diagonal over the residue field."""
    fq = spec.residue_field
    n = module.n
    gens = []
    for i in range(n):
        for j in range(i + 1, n):
            perm = [[1 if (r == c and r not in (i, j))
                     or (r, c) in ((i, j), (j, i)) else 0
                     for c in range(n)] for r in range(n)]
            gens.append(tuple(tuple(r) for r in perm))
    for i in range(n):
        for j in range(n):
            if i != j:
                tv = [[1 if r == c else 0 for c in range(n)]
                      for r in range(n)]
                tv[i][j] = 1
                gens.append(tuple(tuple(r) for r in tv))
    c = fq.generator()
    if c != 1:
        for pos in range(n):
            dg = [[1 if r == c2 else 0 for c2 in range(n)] for r in range(n)]
            dg[pos][pos] = c
            gens.append(tuple(tuple(r) for r in dg))
    images = tuple(residue_rep(module, g, spec) for g in gens)
    return ResidueRep(fq, module.N, images)
