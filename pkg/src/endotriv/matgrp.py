"""Enumerated matrix groups over GF(q) and the classical subgroup toolbox.

A MatrixGroup holds the full element table of a finite group of invertible
n x n matrices over GF(q) (q <= 256), keyed by the canonical byte string of
the entry array.  Central quotients (PGL, PSL, G/Z) use the same machinery:
every element is stored as the lexicographically least scalar multiple over
the quotient kernel, and all products are re-canonicalized, so a quotient
behaves exactly like a plain group.

Scans (normalizer, centralizer, conjugation maps) are batched through the
kernels in `backend`; everything here is read-only after construction.
"""

from __future__ import annotations

import os
from dataclasses import dataclass

import numpy as np

from . import backend
from .abst import AbelianStructure, from_cyclic_orders
from .errors import CapExceeded, DomainError
from .gf import FieldSpec, factorize

DEFAULT_CAP = 2_000_000


def enumeration_cap(override: int | None = None) -> int:
    if override is not None:
        return int(override)
    env = os.environ.get("ENDOTRIV_CAP")
    return int(env) if env else DEFAULT_CAP


def identity_matrix(n: int) -> np.ndarray:
    return np.eye(n, dtype=np.uint8)


def matrix(entries) -> np.ndarray:
    m = np.asarray(entries, dtype=np.uint8)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise DomainError("matrix entries must form a square array")
    return m


def permutation_matrix(perm, n: int | None = None) -> np.ndarray:
    """Matrix sending basis vector e_j to e_perm[j]."""
    n = n or len(perm)
    m = np.zeros((n, n), dtype=np.uint8)
    for j, i in enumerate(perm):
        m[i, j] = 1
    return m


def block_embed(n: int, blocks: list[tuple[int, np.ndarray]]) -> np.ndarray:
    """Identity with the given (offset, matrix) blocks written on the diagonal."""
    m = identity_matrix(n)
    for off, b in blocks:
        k = b.shape[0]
        m[off:off + k, off:off + k] = b
    return m


class MatrixGroup:
    """A fully enumerated matrix group, optionally modulo central scalars."""

    def __init__(self, field: FieldSpec, n: int, elements: np.ndarray,
                 index: dict, inv: np.ndarray, gen_idx: list[int],
                 scalars: np.ndarray | None = None, name: str = "G"):
        self.field = field
        self.n = n
        self.elements = elements
        self._index = index
        self.inv = inv
        self.gen_idx = list(gen_idx)
        self.scalars = scalars  # quotient kernel as sorted field values, or None
        self.name = name
        self._conj_maps: dict[int, np.ndarray] = {}
        self._dets = None
        self._cayley: np.ndarray | None = None

    # -- construction --------------------------------------------------------

    @classmethod
    def generate(cls, field: FieldSpec, gens, cap: int | None = None,
                 scalars=None, name: str = "G") -> "MatrixGroup":
        """Breadth-first closure of the generators (deterministic order)."""
        if field.q > 256:
            raise DomainError(f"enumeration supports q <= 256, got q={field.q}")
        cap = enumeration_cap(cap)
        gens = [matrix(g) for g in gens]
        if not gens:
            raise DomainError("need at least one generator")
        n = gens[0].shape[0]
        if any(g.shape[0] != n for g in gens):
            raise DomainError("generators of mixed dimension")
        gd = backend.det_many(np.stack(gens), field)
        if np.any(gd == 0):
            raise DomainError("singular generator")

        scal = None
        if scalars is not None:
            scal = np.array(sorted(int(s) for s in scalars), dtype=np.uint8)
            if scal[0] != 1:
                raise DomainError("quotient kernel must contain 1")

        def canon(batch):
            return batch if scal is None else backend.canon_min(batch, scal, field)

        ident = identity_matrix(n)[None]
        blocks = [ident]
        index = {ident[0].tobytes(): 0}
        count = 1
        gmats = canon(np.stack(gens))
        frontier = ident
        while frontier.shape[0]:
            new_rows = []
            for gi in range(gmats.shape[0]):
                prods = canon(backend.mm_one(frontier, gmats[gi], field))
                flat = prods.reshape(prods.shape[0], -1)
                for r in range(flat.shape[0]):
                    key = flat[r].tobytes()
                    if key not in index:
                        index[key] = count
                        count += 1
                        new_rows.append(prods[r])
                        if count > cap:
                            raise CapExceeded(
                                f"closure of {name} exceeds cap {cap}",
                                needed=count, cap=cap)
            if not new_rows:
                break
            frontier = np.stack(new_rows)
            blocks.append(frontier)
        elements = np.concatenate(blocks, axis=0)
        invs, ok = backend.inverse_many(elements, field)
        if not np.all(ok):
            raise DomainError("non-invertible element reached in closure")
        invs = canon(invs)
        inv_idx = np.empty(count, dtype=np.int64)
        flat = invs.reshape(count, -1)
        for i in range(count):
            inv_idx[i] = index[flat[i].tobytes()]
        grp = cls(field, n, elements, index, inv_idx, [], scalars=scal, name=name)
        grp.gen_idx = [grp.index_of(gmats[i]) for i in range(gmats.shape[0])]
        return grp

    def central_quotient(self, scalar_values, name: str | None = None) -> "MatrixGroup":
        """Quotient by the central subgroup of scalar matrices with the given values."""
        if self.scalars is not None:
            raise DomainError("group is already a central quotient")
        scal = np.array(sorted(int(s) for s in scalar_values), dtype=np.uint8)
        if scal[0] != 1:
            raise DomainError("quotient kernel must contain 1")
        for s in scal:
            smat = backend.scale_many(identity_matrix(self.n)[None], int(s), self.field)[0]
            if smat.tobytes() not in self._index:
                raise DomainError(f"scalar {int(s)} I is not an element of {self.name}")
        reps = backend.canon_min(self.elements, scal, self.field)
        flat = reps.reshape(reps.shape[0], -1)
        index: dict = {}
        keep = []
        for i in range(flat.shape[0]):
            key = flat[i].tobytes()
            if key not in index:
                index[key] = len(keep)
                keep.append(i)
        elements = reps[np.array(keep, dtype=np.int64)]
        grp = MatrixGroup(self.field, self.n, elements, index, None, [],
                          scalars=scal, name=name or f"{self.name}/Z{len(scal)}")
        invs = backend.canon_min(
            backend.inverse_many(elements, self.field)[0], scal, self.field)
        inv_idx = np.empty(elements.shape[0], dtype=np.int64)
        iflat = invs.reshape(elements.shape[0], -1)
        for i in range(elements.shape[0]):
            inv_idx[i] = index[iflat[i].tobytes()]
        grp.inv = inv_idx
        grp.gen_idx = [grp.index_of(grp.canon_one(self.elements[g]))
                       for g in self.gen_idx]
        return grp

    # -- canonical form and lookup -------------------------------------------

    def canon(self, batch: np.ndarray) -> np.ndarray:
        if self.scalars is None:
            return batch
        return backend.canon_min(batch, self.scalars, self.field)

    def canon_one(self, mat: np.ndarray) -> np.ndarray:
        return self.canon(mat[None])[0]

    @property
    def order(self) -> int:
        return self.elements.shape[0]

    @property
    def identity_idx(self) -> int:
        return 0

    def index_of(self, mat: np.ndarray) -> int:
        key = self.canon_one(np.ascontiguousarray(mat, dtype=np.uint8)).tobytes()
        if key not in self._index:
            raise KeyError("matrix is not an element of this group")
        return self._index[key]

    def contains_matrix(self, mat) -> bool:
        key = self.canon_one(np.ascontiguousarray(mat, dtype=np.uint8)).tobytes()
        return key in self._index

    def lookup_batch(self, batch: np.ndarray) -> np.ndarray:
        """Indices of already-canonical matrices (KeyError if any is missing)."""
        flat = batch.reshape(batch.shape[0], -1)
        out = np.empty(batch.shape[0], dtype=np.int64)
        idx = self._index
        for i in range(flat.shape[0]):
            out[i] = idx[flat[i].tobytes()]
        return out

    # -- index-level arithmetic ------------------------------------------------

    CAYLEY_LIMIT = 1024

    def cayley(self) -> np.ndarray | None:
        """Full multiplication table for small groups (index-level ops then
        run off one array instead of per-call kernel launches)."""
        if self._cayley is None and self.order <= self.CAYLEY_LIMIT:
            n = self.order
            left = np.repeat(np.arange(n), n)
            right = np.tile(np.arange(n), n)
            prods = self.canon(backend.mm_pairs(self.elements[left],
                                                self.elements[right], self.field))
            self._cayley = self.lookup_batch(prods).reshape(n, n)
        return self._cayley

    def mul_idx(self, i: int, j: int) -> int:
        if self._cayley is not None or self.order <= self.CAYLEY_LIMIT:
            table = self.cayley()
            if table is not None:
                return int(table[i, j])
        prod = self.canon(backend.mm_one(self.elements[i][None],
                                         self.elements[j], self.field))
        return self._index[prod[0].tobytes()]

    def inv_idx(self, i: int) -> int:
        return int(self.inv[i])

    def conj_idx(self, g: int, x: int) -> int:
        """Index of g x g^-1."""
        return self.mul_idx(self.mul_idx(g, x), self.inv_idx(g))

    def right_mul_batch(self, idxs: np.ndarray, j: int) -> np.ndarray:
        if self.order <= self.CAYLEY_LIMIT:
            table = self.cayley()
            if table is not None:
                return table[np.asarray(idxs, dtype=np.int64), j]
        prods = self.canon(backend.mm_one(self.elements[idxs],
                                          self.elements[j], self.field))
        return self.lookup_batch(prods)

    def sandwich_all(self, h: int) -> np.ndarray:
        """Indices of g h g^-1 for every g in enumeration order."""
        if self.order <= self.CAYLEY_LIMIT:
            table = self.cayley()
            if table is not None:
                gh = table[:, h]
                return table[gh, self.inv]
        gh = backend.mm_one(self.elements, self.elements[h], self.field)
        r = self.canon(backend.mm_pairs(gh, self.elements[self.inv], self.field))
        return self.lookup_batch(r)

    def conj_map(self, g: int) -> np.ndarray:
        """Permutation array x -> g x g^-1 over all element indices."""
        if g not in self._conj_maps:
            ge = self.elements[g]
            gi = self.elements[self.inv_idx(g)]
            right = backend.mm_one(self.elements, gi, self.field)  # x @ g^-1
            full = self.canon(_left_mul(ge, right, self.field))    # g x g^-1
            self._conj_maps[g] = self.lookup_batch(full)
        return self._conj_maps[g]

    def power_idx(self, i: int, e: int) -> int:
        if e < 0:
            return self.power_idx(self.inv_idx(i), -e)
        acc = self.identity_idx
        base = i
        while e:
            if e & 1:
                acc = self.mul_idx(acc, base)
            base = self.mul_idx(base, base)
            e >>= 1
        return acc

    def order_of(self, i: int) -> int:
        k, j = 1, i
        while j != self.identity_idx:
            j = self.mul_idx(j, i)
            k += 1
        return k

    def elements_satisfying_power(self, e: int) -> np.ndarray:
        """Boolean mask of x with x^e == identity, computed batched."""
        n = self.order
        acc = np.repeat(identity_matrix(self.n)[None], n, axis=0)
        base = self.elements
        first = True
        ee = e
        while ee:
            if ee & 1:
                acc = base.copy() if first else self.canon(
                    backend.mm_pairs(acc, base, self.field))
                first = False
            ee >>= 1
            if ee:
                base = self.canon(backend.mm_pairs(base, base, self.field))
        ident = self.canon_one(identity_matrix(self.n))
        return np.all(acc.reshape(n, -1) == ident.reshape(-1), axis=1)

    def dets(self) -> np.ndarray:
        if self._dets is None:
            if self.scalars is not None:
                raise DomainError("determinants are not defined on a central quotient")
            self._dets = backend.det_many(self.elements, self.field)
        return self._dets

    def as_subgroup(self) -> "Subgroup":
        return Subgroup(self, np.arange(self.order, dtype=np.int64),
                        gen_idx=tuple(self.gen_idx), _checked=True)

    def subgroup_of_matrices(self, mats) -> "Subgroup":
        idxs = sorted({self.index_of(m) for m in mats})
        return Subgroup(self, np.array(idxs, dtype=np.int64))

    def __repr__(self):
        return f"<{self.name}: order {self.order} over GF({self.field.q})>"


def closure(field: FieldSpec, gens, cap: int | None = None,
            scalars=None, name: str = "G") -> MatrixGroup:
    """Breadth-first closure of generator matrices into an enumerated group."""
    return MatrixGroup.generate(field, gens, cap=cap, scalars=scalars, name=name)


def _left_mul(a: np.ndarray, batch: np.ndarray, field) -> np.ndarray:
    """a @ batch[i] for every i."""
    tiled = np.repeat(a[None], batch.shape[0], axis=0)
    return backend.mm_pairs(tiled, batch, field)


# ---------------------------------------------------------------------------

class Subgroup:
    """A subgroup of an enumerated group, held as a sorted index set."""

    def __init__(self, parent: MatrixGroup, idx: np.ndarray,
                 gen_idx: tuple[int, ...] | None = None, _checked: bool = False):
        self.parent = parent
        self.idx = np.sort(np.asarray(idx, dtype=np.int64))
        self.members = frozenset(int(i) for i in self.idx)
        if parent.identity_idx not in self.members:
            raise DomainError("subgroup must contain the identity")
        if parent.order % len(self.members) != 0:
            raise DomainError(
                f"Lagrange violation: {len(self.members)} does not divide {parent.order}")
        self._gen_idx = tuple(gen_idx) if gen_idx is not None else None
        self._checked = _checked

    @property
    def order(self) -> int:
        return len(self.members)

    def __contains__(self, i: int) -> bool:
        return int(i) in self.members

    def __eq__(self, other):
        return (isinstance(other, Subgroup) and other.parent is self.parent
                and other.members == self.members)

    def __hash__(self):
        return hash((id(self.parent), self.members))

    def __le__(self, other: "Subgroup") -> bool:
        return self.members <= other.members

    @property
    def gen_idx(self) -> tuple[int, ...]:
        if self._gen_idx is None:
            self._gen_idx = find_generators(self.parent, self.idx)
        return self._gen_idx

    def key(self) -> tuple[int, ...]:
        """Deterministic identity: the sorted element indices."""
        return tuple(int(i) for i in self.idx)

    def is_abelian(self) -> bool:
        gens = self.gen_idx
        G = self.parent
        for a in gens:
            for b in gens:
                if G.mul_idx(a, b) != G.mul_idx(b, a):
                    return False
        return True

    def element_orders(self) -> list[int]:
        return [self.parent.order_of(int(i)) for i in self.idx]

    def abelian_type(self) -> AbelianStructure:
        if not self.is_abelian():
            raise DomainError("abelian_type on a nonabelian subgroup")
        return _abelian_type_from_orders(self.element_orders())

    def __repr__(self):
        return f"<subgroup of {self.parent.name}: order {self.order}>"


def _abelian_type_from_orders(orders) -> AbelianStructure:
    """Isomorphism type of a finite abelian group from its element orders.

    For each prime p, s_i = log_p #{x : x^(p^i) = 1} determines the p-part
    partition: the number of cyclic factors of order >= p^i is s_i - s_{i-1}.
    """
    m = len(orders)
    typ: list[int] = []
    for p in factorize(m):
        s = [0]
        i = 1
        while True:
            c = sum(1 for o in orders if (p ** i) % o == 0)
            e = 0
            while c % p == 0:
                c //= p
                e += 1
            s.append(e)
            if s[-1] == s[-2]:
                s.pop()
                break
            i += 1
        n_ge = [s[j] - s[j - 1] for j in range(1, len(s))]
        for j in range(1, len(n_ge) + 1):
            exact = n_ge[j - 1] - (n_ge[j] if j < len(n_ge) else 0)
            typ.extend([p ** j] * exact)
    return from_cyclic_orders(typ)


# ---------------------------------------------------------------------------
# subgroup algebra

def find_generators(G: MatrixGroup, idx: np.ndarray) -> tuple[int, ...]:
    """Greedy small generating set for the subgroup with the given indices."""
    target = frozenset(int(i) for i in idx)
    if target == {G.identity_idx}:
        return ()
    gens: list[int] = []
    have = frozenset([G.identity_idx])
    for i in idx:
        i = int(i)
        if i not in have:
            gens.append(i)
            have = _closure_indices(G, gens)
            if have == target:
                return tuple(gens)
    if have != target:
        raise DomainError("index set is not closed (not a subgroup)")
    return tuple(gens)


def _closure_indices(G: MatrixGroup, gen_idx) -> frozenset[int]:
    seen = {G.identity_idx}
    frontier = [G.identity_idx]
    while frontier:
        arr = np.array(frontier, dtype=np.int64)
        frontier = []
        for g in gen_idx:
            prods = G.right_mul_batch(arr, int(g))
            for v in prods:
                v = int(v)
                if v not in seen:
                    seen.add(v)
                    frontier.append(v)
    return frozenset(seen)


def subgroup_closure(G: MatrixGroup, gen_idx, name: str = "") -> Subgroup:
    idxs = _closure_indices(G, [int(g) for g in gen_idx])
    return Subgroup(G, np.array(sorted(idxs), dtype=np.int64),
                    gen_idx=tuple(int(g) for g in gen_idx if g != G.identity_idx))


def trivial_subgroup(G: MatrixGroup) -> Subgroup:
    return Subgroup(G, np.array([G.identity_idx], dtype=np.int64), gen_idx=())


def normalizer(G: MatrixGroup, H: Subgroup, within: Subgroup | None = None) -> Subgroup:
    """Full-scan normalizer {g : g H g^-1 = H}; exact, O(|G| * #gens(H)).

    With `within`, the scan is restricted to that subgroup's elements
    (the normalizer of H inside `within`).
    """
    if H.parent is not G:
        raise DomainError("subgroup does not live in the given group")
    mask = np.ones(G.order, dtype=bool)
    for h in (H.gen_idx or (G.identity_idx,)):
        conj = G.sandwich_all(int(h))
        mask &= np.isin(conj, H.idx)
    if within is not None:
        keep = np.zeros(G.order, dtype=bool)
        keep[within.idx] = True
        mask &= keep
    return Subgroup(G, np.nonzero(mask)[0])


def centralizer(G: MatrixGroup, H: Subgroup) -> Subgroup:
    if H.parent is not G:
        raise DomainError("subgroup does not live in the given group")
    mask = np.ones(G.order, dtype=bool)
    for h in (H.gen_idx or (G.identity_idx,)):
        conj = G.sandwich_all(int(h))
        mask &= conj == int(h)
    return Subgroup(G, np.nonzero(mask)[0])


def center(G: MatrixGroup) -> Subgroup:
    return centralizer(G, G.as_subgroup())


def intersection(H1: Subgroup, H2: Subgroup) -> Subgroup:
    if H1.parent is not H2.parent:
        raise DomainError("intersection across different parents")
    common = H1.members & H2.members
    return Subgroup(H1.parent, np.array(sorted(common), dtype=np.int64))


def join(H1: Subgroup, H2: Subgroup) -> Subgroup:
    return subgroup_closure(H1.parent, tuple(H1.gen_idx) + tuple(H2.gen_idx))


def conjugate_subgroup(G: MatrixGroup, H: Subgroup, g: int) -> Subgroup:
    cmap = G.conj_map(int(g))
    return Subgroup(G, cmap[H.idx])


def normal_closure(H: Subgroup, seed_idx) -> Subgroup:
    """Smallest subgroup of H containing the seeds and normal in H."""
    G = H.parent
    gens = sorted({int(s) for s in seed_idx} - {G.identity_idx})
    if not gens:
        return trivial_subgroup(G)
    while True:
        S = subgroup_closure(G, gens)
        new = []
        for h in H.gen_idx:
            for x in gens:
                c = G.conj_idx(int(h), int(x))
                if c not in S.members:
                    new.append(c)
        if not new:
            return S
        gens.extend(sorted(set(new)))


def commutator_subgroup(H: Subgroup) -> Subgroup:
    """[H, H]: normal closure in H of the generator commutators."""
    G = H.parent
    gens = H.gen_idx
    seeds = set()
    for a in gens:
        for b in gens:
            ia, ib = G.inv_idx(int(a)), G.inv_idx(int(b))
            c = G.mul_idx(G.mul_idx(int(a), int(b)), G.mul_idx(ia, ib))
            seeds.add(c)
    return normal_closure(H, seeds)


def is_normal(H: Subgroup, K: Subgroup) -> bool:
    """K normal in H (both subgroups of the same parent, K <= H)."""
    if not K.members <= H.members:
        return False
    G = H.parent
    return all(G.conj_idx(int(h), int(k)) in K.members
               for h in (H.gen_idx or ()) for k in (K.gen_idx or ()))


def quotient_structure(H: Subgroup, K: Subgroup) -> AbelianStructure:
    """Invariant-factor type of the abelian quotient H/K."""
    G = H.parent
    if not K.members <= H.members:
        raise DomainError("K is not contained in H")
    if not is_normal(H, K):
        raise DomainError("K is not normal in H")
    for a in H.gen_idx:
        for b in H.gen_idx:
            ia, ib = G.inv_idx(int(a)), G.inv_idx(int(b))
            c = G.mul_idx(G.mul_idx(int(a), int(b)), G.mul_idx(ia, ib))
            if c not in K.members:
                raise DomainError("H/K is not abelian")
    # enumerate cosets by BFS over generator translates
    reps = [G.identity_idx]

    def coset_of(x: int) -> int | None:
        for ridx, r in enumerate(reps):
            if G.mul_idx(G.inv_idx(r), x) in K.members:
                return ridx
        return None

    frontier = [G.identity_idx]
    while frontier:
        nxt = []
        for r in frontier:
            for h in H.gen_idx:
                c = G.mul_idx(r, int(h))
                if coset_of(c) is None:
                    reps.append(c)
                    nxt.append(c)
        frontier = nxt
    m = H.order // K.order
    if len(reps) != m:
        raise DomainError("coset enumeration mismatch")  # pragma: no cover
    orders = []
    for r in reps:
        k, x = 1, r
        while x not in K.members:
            x = G.mul_idx(x, r)
            k += 1
        orders.append(k)
    return _abelian_type_from_orders(orders)


def subgroup_conjugacy_classes(G: MatrixGroup, subs: list[Subgroup]) -> list[list[Subgroup]]:
    """Partition subgroups under conjugation; deterministic representatives.

    Classes are returned sorted by their representative (the least element
    index set in enumeration order), each class listing the input subgroups
    it contains, representative first.
    """
    pending = {s.key(): s for s in subs}
    classes = []
    gen_maps = [G.conj_map(g) for g in G.gen_idx]
    while pending:
        start_key = min(pending)
        start = pending.pop(start_key)
        orbit_seen = {start_key}
        in_class = [start]
        frontier = [np.array(start_key, dtype=np.int64)]
        while frontier:
            nxt = []
            for arr in frontier:
                for cmap in gen_maps:
                    img = np.sort(cmap[arr])
                    key = tuple(int(i) for i in img)
                    if key not in orbit_seen:
                        orbit_seen.add(key)
                        nxt.append(img)
                        if key in pending:
                            in_class.append(pending.pop(key))
            frontier = nxt
        in_class.sort(key=lambda s: s.key())
        classes.append(in_class)
    classes.sort(key=lambda c: c[0].key())
    return classes


# ---------------------------------------------------------------------------
# elementary abelian subgroups

@dataclass
class ElementaryAbelian:
    subgroup: Subgroup
    rank: int
    maximal: bool


def order_p_elements(T: Subgroup, p: int) -> list[int]:
    """Elements of order exactly p in T (p prime)."""
    G = T.parent
    mask = G.elements_satisfying_power(p)
    return [int(i) for i in T.idx if mask[i] and int(i) != G.identity_idx]


def elementary_abelian_subgroups(T: Subgroup | MatrixGroup, p: int,
                                 element_cap: int = 30000) -> list[ElementaryAbelian]:
    """All elementary abelian p-subgroups of T, flagged maximal-in-T.

    Exhaustive join construction from the order-p elements; intended for
    groups where those number at most a few thousand.
    """
    if isinstance(T, MatrixGroup):
        T = T.as_subgroup()
    G = T.parent
    pts = order_p_elements(T, p)
    if len(pts) > element_cap:
        raise CapExceeded(
            f"{len(pts)} order-{p} elements exceed the enumeration budget",
            needed=len(pts), cap=element_cap)
    out: list[ElementaryAbelian] = []
    if not pts:
        out.append(ElementaryAbelian(trivial_subgroup(G), 0, True))
        return out
    out.append(ElementaryAbelian(trivial_subgroup(G), 0, False))
    # rank 1
    level: dict[frozenset, tuple[int, ...]] = {}
    for x in pts:
        s = _cyclic_set(G, x, p)
        if s not in level:
            level[s] = (x,)
    rank = 1
    pts_set = set(pts)
    while level:
        nxt: dict[frozenset, tuple[int, ...]] = {}
        for members, gens in level.items():
            extended = False
            for x in pts:
                if x in members:
                    continue
                if all(G.mul_idx(x, g) == G.mul_idx(g, x) for g in gens):
                    new_members = _join_ea(G, members, x, p)
                    extended = True
                    if new_members not in nxt:
                        nxt[new_members] = gens + (x,)
            sub = Subgroup(G, np.array(sorted(members), dtype=np.int64), gen_idx=gens)
            out.append(ElementaryAbelian(sub, rank, not extended))
        level = nxt
        rank += 1
    return out


def _cyclic_set(G: MatrixGroup, x: int, p: int) -> frozenset:
    s = {G.identity_idx}
    y = x
    for _ in range(p - 1):
        s.add(y)
        y = G.mul_idx(y, x)
    return frozenset(s)


def _join_ea(G: MatrixGroup, members: frozenset, x: int, p: int) -> frozenset:
    new = set(members)
    xp = G.identity_idx
    for _ in range(p - 1):
        xp = G.mul_idx(xp, x)
        for m in members:
            new.add(G.mul_idx(m, xp))
    return frozenset(new)


def p_rank(T: Subgroup | MatrixGroup, p: int) -> int:
    eas = elementary_abelian_subgroups(T, p)
    return max(e.rank for e in eas)


# ---------------------------------------------------------------------------
# full subgroup lattice of a small group (used by the chain engine)

def all_subgroups(S: Subgroup, count_cap: int = 200_000) -> list[Subgroup]:
    """Every subgroup of S, via iterated joins of cyclic subgroups."""
    G = S.parent
    cyclics: dict[frozenset, tuple[int, ...]] = {frozenset([G.identity_idx]): ()}
    for i in S.idx:
        i = int(i)
        if i == G.identity_idx:
            continue
        s = {G.identity_idx}
        y = i
        while y != G.identity_idx:
            s.add(y)
            y = G.mul_idx(y, i)
        cyclics.setdefault(frozenset(s), (i,))
    subs: dict[frozenset, tuple[int, ...]] = dict(cyclics)
    frontier = list(cyclics.items())
    while frontier:
        nxt = []
        for members, gens in frontier:
            for cmem, cgens in cyclics.items():
                if cmem <= members:
                    continue
                jidx = _closure_indices(G, gens + cgens)
                if jidx not in subs:
                    subs[jidx] = gens + cgens
                    nxt.append((jidx, gens + cgens))
                    if len(subs) > count_cap:
                        raise CapExceeded("subgroup lattice too large",
                                          needed=len(subs), cap=count_cap)
        frontier = nxt
    out = [Subgroup(G, np.array(sorted(m), dtype=np.int64), gen_idx=g)
           for m, g in subs.items()]
    out.sort(key=lambda s: (s.order, s.key()))
    return out


def sylow_subgroup_of(G: MatrixGroup, p: int) -> Subgroup:
    """A Sylow p-subgroup found by normalizer ascent.

    Any p-subgroup P below full order has a p-element in N_G(P) \\ P whose
    join with P is again a p-group, so each step grows the order by at
    least p; at most log_p |G| normalizer scans."""
    from .gf import p_part
    target = p_part(G.order, p)
    pmask = G.elements_satisfying_power(target)
    P = trivial_subgroup(G)
    while P.order < target:
        N = normalizer(G, P) if P.order > 1 else G.as_subgroup()
        grown = False
        for i in N.idx:
            i = int(i)
            if pmask[i] and i not in P.members:
                cand = subgroup_closure(G, tuple(P.gen_idx) + (i,))
                if p_part(cand.order, p) == cand.order:
                    P = cand
                    grown = True
                    break
        if not grown:
            raise DomainError("Sylow ascent stalled")  # pragma: no cover
    return P


def sylow_check(G: MatrixGroup, S: Subgroup, p: int) -> bool:
    """S is a Sylow p-subgroup of G."""
    from .gf import p_part
    return p_part(G.order, p) == S.order and _is_p_group(S, p)


def _is_p_group(S: Subgroup, p: int) -> bool:
    o = S.order
    while o % p == 0:
        o //= p
    return o == 1
