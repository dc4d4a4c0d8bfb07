"""Iterated normalizer-commutator chains and machine-checkable certificates.

For a Sylow p-subgroup S of G and a nontrivial Q <= S, the chain is

    level 1:  [N_G(Q), N_G(Q)]
    level i:  < N_G(Q) /\\ level_{i-1}(R) : 1 != R <= S >

computed simultaneously for every nontrivial R <= S.  Reaching N_G(Q)
certifies that the trivial module is the only indecomposable with trivial
Sylow restriction; the chain engine only reports the group theory.

Two implementations are kept deliberately separate: the fast engine caches
normalizers by conjugacy class (N(gRg^-1) = g N(R) g^-1) and uses the
identity < U_R (N /\\ A_R) > = < N /\\ U_R A_R >; the naive engine rescans
every subgroup from definitions.  The test suite diffs them.

Certificates package the hypotheses of the one-dimensionality criterion
(a subgroup H containing N_G(S), generator witnesses, and per-condition
evidence) so a verdict of PASS means every clause was machine-checked.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import backend, liea
from . import matgrp as mg
from .errors import CapExceeded, DomainError
from .gf import field_spec, p_part, p_val  # noqa: F401 (p_val used by builders)

S_ORDER_CAP = 256


# ---------------------------------------------------------------------------
# chain engine

@dataclass
class RhoChain:
    base: mg.Subgroup
    normalizer: mg.Subgroup
    chain: list[mg.Subgroup]
    stabilized_at: int | None
    reached_normalizer: bool

    def orders(self) -> list[int]:
        return [c.order for c in self.chain]

    def to_json(self) -> dict:
        return {
            "base_order": self.base.order,
            "normalizer_order": self.normalizer.order,
            "chain_orders": self.orders(),
            "stabilized_at": self.stabilized_at,
            "reached_normalizer": self.reached_normalizer,
        }


def _generated_subgroup(G: mg.MatrixGroup, seed) -> mg.Subgroup:
    gens: list[int] = []
    have = frozenset([G.identity_idx])
    for x in sorted(seed):
        if x not in have:
            gens.append(int(x))
            have = mg._closure_indices(G, gens)
    return mg.Subgroup(G, np.array(sorted(have), dtype=np.int64),
                       gen_idx=tuple(gens))


def nontrivial_subgroups(G: mg.MatrixGroup, S: mg.Subgroup) -> list[mg.Subgroup]:
    if S.order > S_ORDER_CAP:
        raise CapExceeded(
            f"|S| = {S.order} exceeds the subgroup-lattice cap {S_ORDER_CAP}",
            needed=S.order, cap=S_ORDER_CAP)
    return [T for T in mg.all_subgroups(S) if T.order > 1]


def rho_chain(G: mg.MatrixGroup, S: mg.Subgroup, Q: mg.Subgroup,
              max_i: int = 4, subgroups: list[mg.Subgroup] | None = None) -> RhoChain:
    """Exact chain for Q up to level max_i (fast engine)."""
    if Q.order <= 1:
        raise DomainError("Q must be a nontrivial subgroup of S")
    if not Q.members <= S.members:
        raise DomainError("Q must be contained in S")
    subs = subgroups if subgroups is not None else nontrivial_subgroups(G, S)
    keys = [T.key() for T in subs]
    if Q.key() not in keys:
        subs = subs + [Q]
        keys.append(Q.key())

    # conjugacy classes with transport witnesses
    assigned: dict[tuple, tuple[tuple, int]] = {}  # key -> (rep key, witness g)
    key_set = set(keys)
    for T in subs:
        tk = T.key()
        if tk in assigned:
            continue
        assigned[tk] = (tk, G.identity_idx)
        frontier = [(np.array(tk, dtype=np.int64), G.identity_idx)]
        seen = {tk}
        while frontier:
            nxt = []
            for arr, wit in frontier:
                for g in G.gen_idx:
                    img = np.sort(G.conj_map(g)[arr])
                    ik = tuple(int(i) for i in img)
                    if ik in seen:
                        continue
                    seen.add(ik)
                    w2 = G.mul_idx(int(g), wit)
                    nxt.append((img, w2))
                    if ik in key_set and ik not in assigned:
                        assigned[ik] = (tk, w2)
            frontier = nxt

    norm_members: dict[tuple, frozenset] = {}
    level: dict[tuple, frozenset] = {}
    rep_norm: dict[tuple, mg.Subgroup] = {}
    rep_rho1: dict[tuple, mg.Subgroup] = {}
    for T in subs:
        tk = T.key()
        rk, wit = assigned[tk]
        if rk not in rep_norm:
            R = next(s for s in subs if s.key() == rk)
            N = mg.normalizer(G, R)
            rep_norm[rk] = N
            rep_rho1[rk] = mg.commutator_subgroup(N)
        if wit == G.identity_idx:
            norm_members[tk] = rep_norm[rk].members
            level[tk] = rep_rho1[rk].members
        else:
            cmap = G.conj_map(wit)
            norm_members[tk] = frozenset(int(i) for i in cmap[rep_norm[rk].idx])
            level[tk] = frozenset(int(i) for i in cmap[rep_rho1[rk].idx])

    qk = Q.key()
    NQ = mg.Subgroup(G, np.array(sorted(norm_members[qk]), dtype=np.int64))
    chain_sets = [level[qk]]
    stabilized = None
    for i in range(2, max_i + 1):
        pool = frozenset().union(*level.values())
        nxt: dict[tuple, frozenset] = {}
        for T in subs:
            tk = T.key()
            seed = norm_members[tk] & pool
            if seed == level[tk]:
                nxt[tk] = level[tk]  # already a subgroup: no growth
            else:
                nxt[tk] = _generated_subgroup(G, seed).members
        fixpoint = all(nxt[k] == level[k] for k in nxt)
        level = nxt
        chain_sets.append(level[qk])
        if stabilized is None and chain_sets[-1] == chain_sets[-2]:
            stabilized = i - 1
        if fixpoint:
            break

    chain = []
    prev: frozenset = frozenset([G.identity_idx])
    for cs in chain_sets:
        assert prev <= cs, "chain monotonicity violated"
        assert cs <= NQ.members, "chain escaped the normalizer"
        prev = cs
        chain.append(mg.Subgroup(G, np.array(sorted(cs), dtype=np.int64)))
    return RhoChain(Q, NQ, chain, stabilized, chain_sets[-1] == NQ.members)


# -- the deliberately naive twin ---------------------------------------------

def _naive_conj(G, g, x):
    return G.mul_idx(G.mul_idx(g, x), G.inv_idx(g))


def _naive_closure(G, seed):
    elems = set(seed) | {G.identity_idx}
    frontier = list(elems)
    gens = sorted(set(seed))
    while frontier:
        nxt = []
        for x in frontier:
            for g in gens:
                y = G.mul_idx(x, g)
                if y not in elems:
                    elems.add(y)
                    nxt.append(y)
        frontier = nxt
    return frozenset(elems)


def _naive_normalizer(G, members):
    out = set()
    gens = mg.find_generators(G, np.array(sorted(members), dtype=np.int64))
    for g in range(G.order):
        if all(_naive_conj(G, g, x) in members for x in gens):
            out.add(g)
    return frozenset(out)


def _naive_commutator(G, members):
    members = sorted(members)
    if len(members) <= 300:
        seeds = {G.mul_idx(G.mul_idx(a, b),
                           G.mul_idx(G.inv_idx(a), G.inv_idx(b)))
                 for a in members for b in members}
    else:
        gens = mg.find_generators(G, np.array(members, dtype=np.int64))
        seeds = {G.mul_idx(G.mul_idx(a, b),
                           G.mul_idx(G.inv_idx(a), G.inv_idx(b)))
                 for a in gens for b in gens}
        # normal closure under the subgroup, scanned directly
        while True:
            closed = _naive_closure(G, seeds)
            extra = {_naive_conj(G, h, x)
                     for h in gens for x in closed
                     if _naive_conj(G, h, x) not in closed}
            if not extra:
                return closed
            seeds |= extra
    return _naive_closure(G, seeds)


def rho_chain_naive(G: mg.MatrixGroup, S: mg.Subgroup, Q: mg.Subgroup,
                    max_i: int = 4) -> RhoChain:
    """Definition-chasing reimplementation used as the agreement oracle."""
    if Q.order <= 1:
        raise DomainError("Q must be a nontrivial subgroup of S")
    subs = [T for T in mg.all_subgroups(S) if T.order > 1]
    if Q.key() not in [T.key() for T in subs]:
        subs.append(Q)
    norms = {T.key(): _naive_normalizer(G, T.members) for T in subs}
    level = {T.key(): _naive_commutator(G, norms[T.key()]) for T in subs}
    qk = Q.key()
    chain_sets = [level[qk]]
    for _ in range(2, max_i + 1):
        nxt = {}
        for T in subs:
            tk = T.key()
            pieces = set()
            for R in subs:
                pieces |= (norms[tk] & level[R.key()])
            nxt[tk] = _naive_closure(G, pieces)
        if all(nxt[T.key()] == level[T.key()] for T in subs):
            level = nxt
            chain_sets.append(level[qk])
            break
        level = nxt
        chain_sets.append(level[qk])
    NQ = mg.Subgroup(G, np.array(sorted(norms[qk]), dtype=np.int64))
    stabilized = None
    for i in range(1, len(chain_sets)):
        if chain_sets[i] == chain_sets[i - 1]:
            stabilized = i
            break
    chain = [mg.Subgroup(G, np.array(sorted(cs), dtype=np.int64))
             for cs in chain_sets]
    return RhoChain(Q, NQ, chain, stabilized, chain_sets[-1] == NQ.members)


# ---------------------------------------------------------------------------
# evidence and certificates

@dataclass
class TrivialityEvidence:
    """Why every indecomposable module of `group` with trivial Sylow
    restriction has dimension one; only the checkable sufficient
    conditions are accepted."""

    kind: str  # normal-p-subgroup | self-normalizing-sylow | block-split | unproved
    witness_gens: list[np.ndarray] | None = None   # for normal-p-subgroup
    sylow_gens: list[np.ndarray] | None = None     # for self-normalizing-sylow
    split: liea.BlockSplit | None = None           # for block-split
    blocks: tuple[int, ...] | None = None
    det_order: int | None = None


@dataclass
class GeneratorWitness:
    label: str
    element: np.ndarray
    mode: str  # "B1" (in [H,H]S) or "B2" (via auxiliary subgroup)
    aux_group: mg.MatrixGroup | None = None
    aux_evidence: TrivialityEvidence | None = None


@dataclass
class SylowContainment:
    """Why H contains the normalizer of the Sylow subgroup."""

    kind: str  # whole-group | ambient-scan | diagonal-characters | isotypic-blocks
    ambient: mg.MatrixGroup | None = None           # for ambient-scan
    q_subgroup: mg.MatrixGroup | None = None        # for diagonal-characters (pre-quotient)
    sylow: mg.MatrixGroup | None = None             # pre-quotient Sylow as its own group
    monomial_det_order: int | None = None
    blocks: tuple[int, ...] | None = None           # for isotypic-blocks
    levi_det_order: int | None = None


@dataclass
class MethodCertificate:
    description: str
    p: int
    n: int
    q: int
    ambient_order: int                      # order of the (possibly virtual) ambient G or G/Z
    H: mg.MatrixGroup                       # subgroup containing N(S), possibly a central quotient
    sylow_in_H: mg.Subgroup                 # image of the Sylow subgroup inside H
    containment: SylowContainment
    H_evidence: TrivialityEvidence
    witnesses: list[GeneratorWitness] = field(default_factory=list)


@dataclass
class ClauseResult:
    clause: str
    ok: bool
    detail: str


@dataclass
class CertificateReport:
    verdict: str  # PASS | FAIL | INCOMPLETE | SKIPPED
    clauses: list[ClauseResult]
    failed_clause: str | None = None
    description: str = ""

    def to_json(self) -> dict:
        return {
            "verdict": self.verdict,
            "description": self.description,
            "failed_clause": self.failed_clause,
            "clauses": [{"clause": c.clause, "ok": c.ok, "detail": c.detail}
                        for c in self.clauses],
        }


def _common_order(A: mg.MatrixGroup, B: mg.MatrixGroup) -> int:
    """Order of the intersection via canonical element keys."""
    if A.field is not B.field and A.field != B.field:
        raise DomainError("intersection across different fields")
    za = None if A.scalars is None else tuple(int(s) for s in A.scalars)
    zb = None if B.scalars is None else tuple(int(s) for s in B.scalars)
    if za != zb:
        raise DomainError("intersection across different central quotients")
    small, big = (A, B) if A.order <= B.order else (B, A)
    flat = small.elements.reshape(small.order, -1)
    return sum(1 for i in range(small.order) if flat[i].tobytes() in big._index)


def _member(mat: np.ndarray, G: mg.MatrixGroup) -> bool:
    return G.contains_matrix(mat)


def _check_triviality(K: mg.MatrixGroup, p: int, ev: TrivialityEvidence,
                      clauses: list[ClauseResult], tag: str) -> bool:
    if ev.kind == "normal-p-subgroup":
        try:
            idxs = sorted({K.index_of(m) for m in ev.witness_gens})
        except KeyError:
            clauses.append(ClauseResult(tag, False, "witness not inside the group"))
            return False
        W = mg.subgroup_closure(K, idxs)
        ok = W.order > 1 and p_part(W.order, p) == W.order
        if ok:
            full = K.as_subgroup()
            ok = mg.is_normal(full, W)
        clauses.append(ClauseResult(
            tag, ok, f"normal p-subgroup of order {W.order}" if ok
            else "witness subgroup not a nontrivial normal p-subgroup"))
        return ok
    if ev.kind == "self-normalizing-sylow":
        try:
            idxs = sorted({K.index_of(m) for m in ev.sylow_gens})
        except KeyError:
            clauses.append(ClauseResult(tag, False, "Sylow witness not inside the group"))
            return False
        S = mg.subgroup_closure(K, idxs)
        ok = mg.sylow_check(K, S, p) and mg.normalizer(K, S).order == S.order
        clauses.append(ClauseResult(
            tag, ok, "self-normalizing Sylow subgroup" if ok
            else "witness is not a self-normalizing Sylow subgroup"))
        return ok
    if ev.kind == "block-split":
        sp = ev.split
        if sp is None or K.scalars is not None:
            clauses.append(ClauseResult(tag, False, "block-split needs a plain block group"))
            return False
        n = K.n
        ok = sum(sp.blocks) == n and liea.levi_order(list(sp.blocks), K.field.q,
                                                     ev.det_order) == K.order
        if ok:
            ok = _blocks_respected(K, sp.blocks)
        if ok:
            ok = sp.valid() and set(sp.part_a) | set(sp.part_b) == set(range(len(sp.blocks))) \
                and not (set(sp.part_a) & set(sp.part_b))
        clauses.append(ClauseResult(
            tag, ok,
            f"block split {sp.part_a}|{sp.part_b}, factor orders "
            f"{sp.order_a},{sp.order_b} both divisible by {sp.p}" if ok
            else "block-split hypotheses fail"))
        return ok
    clauses.append(ClauseResult(tag, False, f"evidence kind {ev.kind!r} is not checkable"))
    return False


def _blocks_respected(K: mg.MatrixGroup, blocks) -> bool:
    n = K.n
    mask = np.zeros((n, n), dtype=bool)
    off = 0
    for b in blocks:
        mask[off:off + b, off:off + b] = True
        off += b
    return all(not np.any(K.elements[g][~mask]) for g in K.gen_idx)


def _check_containment(cert: MethodCertificate,
                       clauses: list[ClauseResult]) -> bool | None:
    """True/False result, or None for not-checkable (INCOMPLETE)."""
    c = cert.containment
    H = cert.H
    if c.kind == "whole-group":
        ok = H.order == cert.ambient_order
        clauses.append(ClauseResult("(S)", ok, "H is the whole group" if ok
                                    else "H claimed to be the whole group but is not"))
        return ok
    if c.kind == "ambient-scan":
        G = c.ambient
        try:
            sidx = sorted({G.index_of(cert.H.elements[i])
                           for i in cert.sylow_in_H.idx})
        except KeyError:
            clauses.append(ClauseResult("(S)", False, "Sylow not inside ambient"))
            return False
        S = mg.Subgroup(G, np.array(sidx, dtype=np.int64))
        N = mg.normalizer(G, S)
        ok = all(_member(G.elements[i], H) for i in N.idx)
        clauses.append(ClauseResult("(S)", ok,
                                    f"N(S) of order {N.order} scanned in ambient" if ok
                                    else "ambient N(S) escapes H"))
        return ok
    if c.kind == "diagonal-characters":
        return _check_diagonal_characters(cert, clauses)
    if c.kind == "isotypic-blocks":
        return _check_isotypic_blocks(cert, clauses)
    clauses.append(ClauseResult("(S)", False, f"unknown containment kind {c.kind!r}"))
    return None


def _check_diagonal_characters(cert, clauses) -> bool:
    """N(S) <= H because Q is characteristic in S, Q is diagonal with
    pairwise distinct coordinate characters (so N(Q) is monomial), and H
    is the full monomial subgroup with the right determinant image."""
    c = cert.containment
    Qg, Sg = c.q_subgroup, c.sylow
    F = Qg.field
    n, q, p = cert.n, cert.q, cert.p
    # S is a p-group of full Sylow order in the ambient (by order formula)
    amb_sylow = p_part(liea.group_order(n, q, c.monomial_det_order), p)
    if not (Sg.order == amb_sylow and p_part(Sg.order, p) == Sg.order):
        clauses.append(ClauseResult("(S)", False, "S has wrong order"))
        return False
    dvals = F.subgroup_values(c.monomial_det_order)
    if not all(int(x) in dvals for x in backend.det_many(Sg.elements, F)):
        clauses.append(ClauseResult("(S)", False, "S violates the determinant condition"))
        return False
    # the kernel scalars must sit inside Q (so quotient normalizers correspond)
    if cert.H.scalars is not None:
        for s in cert.H.scalars:
            smat = backend.scale_many(mg.identity_matrix(n)[None], int(s), F)[0]
            if not Qg.contains_matrix(smat):
                clauses.append(ClauseResult("(S)", False,
                                            "quotient kernel not inside Q"))
                return False
    # sylow_in_H must be exactly the image of S in H
    image = {cert.H.index_of(Sg.elements[i]) for i in range(Sg.order)}
    if image != cert.sylow_in_H.members:
        clauses.append(ClauseResult("(S)", False,
                                    "declared Sylow image mismatches S"))
        return False
    # Q <= S
    try:
        q_in_s = sorted({Sg.index_of(Qg.elements[i]) for i in range(Qg.order)})
    except KeyError:
        clauses.append(ClauseResult("(S)", False, "Q is not contained in S"))
        return False
    Qs = mg.Subgroup(Sg, np.array(q_in_s, dtype=np.int64))
    # Q characteristic in S: unique abelian subgroup of its type and order
    qtype = Qs.abelian_type()
    same = [T for T in mg.all_subgroups(Sg.as_subgroup())
            if T.order == Qs.order and T.is_abelian() and T.abelian_type() == qtype]
    if len(same) != 1 or same[0].members != Qs.members:
        clauses.append(ClauseResult(
            "(S)", False,
            f"Q is not the unique abelian subgroup of type {qtype} in S "
            f"({len(same)} found)"))
        return False
    # Q diagonal with pairwise distinct coordinate characters
    qmats = [Qg.elements[i] for i in Qg.gen_idx]
    if any(np.any(m[~np.eye(n, dtype=bool)]) for m in qmats):
        clauses.append(ClauseResult("(S)", False, "Q is not diagonal"))
        return False
    for i in range(n):
        for j in range(i + 1, n):
            if all(m[i, i] == m[j, j] for m in qmats):
                clauses.append(ClauseResult(
                    "(S)", False, f"coordinate characters {i},{j} of Q coincide"))
                return False
    # H is the monomial group with determinants in the given subgroup
    H = cert.H
    expect = liea.monomial_order(n, q, c.monomial_det_order)
    if H.scalars is not None:
        expect //= len(H.scalars)
    if H.order != expect:
        clauses.append(ClauseResult("(S)", False, "H is not the full monomial subgroup"))
        return False
    if not all(liea.is_monomial_matrix(H.elements[g]) for g in H.gen_idx):
        clauses.append(ClauseResult("(S)", False, "H has a non-monomial generator"))
        return False
    # S must be monomial too (it lands in H)
    if not all(liea.is_monomial_matrix(Sg.elements[i]) for i in range(Sg.order)):
        clauses.append(ClauseResult("(S)", False, "S is not monomial"))
        return False
    clauses.append(ClauseResult(
        "(S)", True,
        "Q characteristic in S; N(Q) is monomial by the distinct-character "
        "eigenline argument; H is the full monomial subgroup"))
    return True


def _spin_irreducible(F, gens, off: int, dim: int) -> bool:
    """The coordinate block [off, off+dim) is an irreducible module for the
    group generated by `gens` (which must preserve the block)."""
    if dim == 1:
        return True
    q = F.q
    # iterate one vector per projective line: first nonzero coordinate = 1
    def lines():
        for lead in range(dim):
            tail = dim - lead - 1
            for v in range(q ** tail):
                vec = [0] * lead + [1]
                vv = v
                for _ in range(tail):
                    vec.append(vv % q)
                    vv //= q
                yield vec

    mats = [g[off:off + dim, off:off + dim] for g in gens]
    for vec in lines():
        basis = [list(vec)]
        frontier = [list(vec)]
        while frontier:
            nxt = []
            for w in frontier:
                for m in mats:
                    img = [0] * dim
                    for i in range(dim):
                        acc = 0
                        for k in range(dim):
                            acc = F.add_el(acc, F.mul_el(int(m[i, k]), w[k]))
                        img[i] = acc
                    red = _reduce_against(F, basis, img)
                    if red is not None:
                        basis.append(red)
                        nxt.append(red)
            frontier = nxt
            if len(basis) == dim:
                break
        if len(basis) != dim:
            return False
    return True


def _reduce_against(F, basis, vec):
    """Gaussian reduction of vec against a row-reduced basis; returns the
    normalized new row or None if dependent.  Keeps `basis` row-reduced."""
    v = list(vec)
    for row in basis:
        lead = next((i for i, c in enumerate(row) if c), None)
        if lead is not None and v[lead]:
            f = F.mul_el(v[lead], F.inv_el(row[lead]))
            for i in range(len(v)):
                v[i] = F.add_el(v[i], F.neg_el(F.mul_el(f, row[i])))
    lead = next((i for i, c in enumerate(v) if c), None)
    if lead is None:
        return None
    inv = F.inv_el(v[lead])
    return [F.mul_el(inv, c) for c in v]


def _check_isotypic_blocks(cert, clauses) -> bool:
    """N(S) <= H because S preserves the coordinate blocks, acts irreducibly
    on each, the blocks have pairwise distinct dimensions (hence are
    pairwise non-isomorphic S-modules), and H is the full block group."""
    c = cert.containment
    Sg = c.sylow
    F = Sg.field
    n, q, p = cert.n, cert.q, cert.p
    blocks = list(c.blocks)
    if sum(blocks) != n or len(set(blocks)) != len(blocks):
        clauses.append(ClauseResult("(S)", False,
                                    "blocks must partition n with distinct sizes"))
        return False
    amb_sylow = p_part(liea.group_order(n, q, c.levi_det_order), p)
    if not (Sg.order == amb_sylow and p_part(Sg.order, p) == Sg.order):
        clauses.append(ClauseResult("(S)", False, "S has wrong order"))
        return False
    dvals = F.subgroup_values(c.levi_det_order)
    if not all(int(x) in dvals for x in backend.det_many(Sg.elements, F)):
        clauses.append(ClauseResult("(S)", False, "S violates the determinant condition"))
        return False
    smats = [Sg.elements[i] for i in Sg.gen_idx]
    if not _blocks_respected(Sg, blocks):
        clauses.append(ClauseResult("(S)", False, "S does not preserve the blocks"))
        return False
    off = 0
    for b in blocks:
        if not _spin_irreducible(F, smats, off, b):
            clauses.append(ClauseResult(
                "(S)", False, f"block at {off} of size {b} is reducible under S"))
            return False
        off += b
    H = cert.H
    if H.scalars is not None:
        clauses.append(ClauseResult("(S)", False,
                                    "isotypic-blocks applies to plain groups"))
        return False
    if H.order != liea.levi_order(blocks, q, c.levi_det_order) or \
            not _blocks_respected(H, blocks):
        clauses.append(ClauseResult("(S)", False, "H is not the full block group"))
        return False
    try:
        image = {H.index_of(Sg.elements[i]) for i in range(Sg.order)}
    except KeyError:
        clauses.append(ClauseResult("(S)", False, "S is not contained in H"))
        return False
    if image != cert.sylow_in_H.members:
        clauses.append(ClauseResult("(S)", False,
                                    "declared Sylow image mismatches S"))
        return False
    clauses.append(ClauseResult(
        "(S)", True,
        "S acts irreducibly on blocks of pairwise distinct dimension; any "
        "normalizing element preserves each block, so N(S) <= H"))
    return True


def check_certificate(cert: MethodCertificate) -> CertificateReport:
    """Verify every clause; FAIL carries the first violated clause name."""
    clauses: list[ClauseResult] = []
    H = cert.H

    gen_idx = []
    ok = True
    for w in cert.witnesses:
        try:
            gen_idx.append(H.index_of(w.element))
        except KeyError:
            ok = False
            clauses.append(ClauseResult("(gen)", False,
                                        f"witness {w.label} is not in H"))
            break
    if ok:
        gen_idx.extend(int(i) for i in cert.sylow_in_H.gen_idx)
        generated = mg.subgroup_closure(H, sorted(set(gen_idx)))
        ok = generated.order == H.order
        clauses.append(ClauseResult(
            "(gen)", ok,
            "witnesses and S generate H" if ok else
            f"witnesses generate order {generated.order} != |H| = {H.order}"))
    if not ok:
        return CertificateReport("FAIL", clauses, "(gen)", cert.description)

    contain_ok = _check_containment(cert, clauses)
    if contain_ok is None:
        return CertificateReport("INCOMPLETE", clauses, None, cert.description)
    if not contain_ok:
        return CertificateReport("FAIL", clauses, "(S)", cert.description)

    if cert.H_evidence.kind == "unproved":
        clauses.append(ClauseResult("(A)", False, "condition (A) left unproved"))
        return CertificateReport("INCOMPLETE", clauses, None, cert.description)
    if not _check_triviality(H, cert.p, cert.H_evidence, clauses, "(A)"):
        return CertificateReport("FAIL", clauses, "(A)", cert.description)

    comm = mg.commutator_subgroup(H.as_subgroup())
    b1_group = mg.join(comm, cert.sylow_in_H)
    for w in cert.witnesses:
        widx = H.index_of(w.element)
        if w.mode == "B1":
            ok = widx in b1_group.members
            clauses.append(ClauseResult(
                f"(B1)[{w.label}]", ok,
                "in [H,H]S" if ok else "not in [H,H]S"))
            if not ok:
                return CertificateReport("FAIL", clauses, "(B1)", cert.description)
            continue
        if w.mode != "B2":
            clauses.append(ClauseResult(f"(B?)[{w.label}]", False,
                                        f"unknown witness mode {w.mode!r}"))
            return CertificateReport("FAIL", clauses, "(B?)", cert.description)
        K = w.aux_group
        if w.aux_evidence is None or w.aux_evidence.kind == "unproved":
            clauses.append(ClauseResult(f"(2)(a)[{w.label}]", False,
                                        "auxiliary condition (A) left unproved"))
            return CertificateReport("INCOMPLETE", clauses, None, cert.description)
        if not _check_triviality(K, cert.p, w.aux_evidence, clauses,
                                 f"(2)(a)[{w.label}]"):
            return CertificateReport("FAIL", clauses, "(2)(a)", cert.description)
        inter = _common_order(K, H)
        ok = inter % cert.p == 0
        clauses.append(ClauseResult(
            f"(2)(b)[{w.label}]", ok,
            f"|H_i /\\ H| = {inter}" + ("" if ok else f" not divisible by {cert.p}")))
        if not ok:
            return CertificateReport("FAIL", clauses, "(2)(b)", cert.description)
        kcomm = mg.commutator_subgroup(K.as_subgroup())
        try:
            ok = K.index_of(w.element) in kcomm.members
        except KeyError:
            ok = False
        clauses.append(ClauseResult(
            f"(2)(c)[{w.label}]", ok,
            "witness lies in [H_i,H_i]" if ok else "witness not in [H_i,H_i]"))
        if not ok:
            return CertificateReport("FAIL", clauses, "(2)(c)", cert.description)
    return CertificateReport("PASS", clauses, None, cert.description)


# ---------------------------------------------------------------------------
# certificate builders for the proof families

def build_central_scalar_certificate(n: int, q: int, p: int,
                                     cap: int | None = None) -> MethodCertificate:
    """Whole-group certificate for SL(n,q) when p divides gcd(n, q-1):
    the scalar of order p is a central normal p-subgroup and the group is
    perfect, so every generator is a commutator-subgroup element."""
    if (q - 1) % p or n % p:
        raise DomainError("needs p | q-1 and p | n (central scalar of order p)")
    params = liea.compute_params(n, q, p)
    G = liea.enumerate_group(n, q, 1, cap=cap)
    F = field_spec(q)
    zeta = F.element_of_order(p)
    zmat = backend.scale_many(mg.identity_matrix(n)[None], zeta, F)[0]
    S = liea.sylow_in(G, params, cap=cap)
    witnesses = [GeneratorWitness(f"g{i}", G.elements[g], "B1")
                 for i, g in enumerate(G.gen_idx)]
    return MethodCertificate(
        description=f"block-count p^s, e=1 instance: SL({n},{q}) at p={p}",
        p=p, n=n, q=q, ambient_order=G.order,
        H=G, sylow_in_H=S,
        containment=SylowContainment(kind="whole-group"),
        H_evidence=TrivialityEvidence(kind="normal-p-subgroup",
                                      witness_gens=[zmat]),
        witnesses=witnesses)


def build_torus_quotient_certificate(n: int, q: int, p: int,
                                     z_order: int | None = None,
                                     cap: int | None = None) -> MethodCertificate:
    """Certificate for SL(n,q)/Z with p | q-1, p | n and Z a central
    p-subgroup: H is the image of the monomial subgroup (the torus-Sylow
    normalizer), generated by its commutator subgroup together with the
    corner rotation, whose witness subgroup is the scaled-torus block group."""
    if n % p or (q - 1) % p:
        raise DomainError("needs p | n and p | q-1")
    if n < 3:
        raise DomainError("needs n >= 3")
    if n == p == 3 and (q - 1) % 9:
        raise DomainError(
            "for n = p = 3 the scaled-torus witness is scalar unless 9 | q-1")
    F = field_spec(q)
    t = p_val(q - 1, p)
    zc = liea.scalar_center_order(n, q, 1)
    z_order = z_order if z_order is not None else p_part(zc, p)
    if z_order <= 1 or p_part(z_order, p) != z_order or zc % z_order != 0:
        raise DomainError("Z must be a nontrivial central p-subgroup")
    zvals = sorted(F.subgroup_values(z_order))
    params = liea.compute_params(n, q, p, 1, z_order)

    Hg = liea.monomial_group(n, q, 1, cap=cap)
    _, Sg = liea.build_sylow(params, cap=cap)
    zeta = F.element_of_order(p ** t)
    qgens = []
    for i in range(n - 1):
        m = mg.identity_matrix(n)
        m[i, i] = zeta
        m[i + 1, i + 1] = F.inv_el(zeta)
        qgens.append(m)
    Qg = mg.MatrixGroup.generate(F, qgens, cap=cap, name="torus p-part")

    Hbar = Hg.central_quotient(zvals, name=f"N(Q)/Z{z_order}")
    s_image = sorted({Hbar.index_of(Sg.elements[i]) for i in range(Sg.order)})
    Sbar = mg.Subgroup(Hbar, np.array(s_image, dtype=np.int64))

    nm = liea.named_matrices("torus-corner", n, q, p=p)
    X = nm["X-corner"]
    Y = nm["Y-scaled-torus"]
    blocks = [2, 1] if n == 3 else [2, 1, n - 3]
    L = liea.levi(blocks, q, 1, cap=cap, name="corner block group")
    Lbar = L.central_quotient(zvals, name="corner block group /Z")

    comm = mg.commutator_subgroup(Hbar.as_subgroup())
    witnesses = [GeneratorWitness(f"c{i}", Hbar.elements[g], "B1")
                 for i, g in enumerate(comm.gen_idx)]
    witnesses.append(GeneratorWitness(
        "corner-rotation", X, "B2", aux_group=Lbar,
        aux_evidence=TrivialityEvidence(kind="normal-p-subgroup",
                                        witness_gens=[Y])))
    return MethodCertificate(
        description=f"torus-quotient instance: SL({n},{q})/Z{z_order} at p={p}",
        p=p, n=n, q=q,
        ambient_order=liea.order_sl(n, q) // z_order,
        H=Hbar, sylow_in_H=Sbar,
        containment=SylowContainment(
            kind="diagonal-characters", q_subgroup=Qg, sylow=Sg,
            monomial_det_order=1),
        H_evidence=TrivialityEvidence(kind="normal-p-subgroup",
                                      witness_gens=[Qg.elements[g] for g in Qg.gen_idx]),
        witnesses=witnesses)


def build_block_count_certificate(q: int, p: int, a: int = 1, s: int = 1,
                                  b: int = 1, cap: int | None = None) -> MethodCertificate:
    """Certificate for SL(n,q) with n = (a p^s + b) e, 1 <= a < p,
    1 <= b < p^s: H is the two-block group holding the Sylow subgroup,
    generated by its commutator subgroup and one connecting torus element
    whose witness subgroup is a balanced two-block group."""
    e = liea.multiplicative_order_mod(q, p)
    if not (1 <= a < p and 1 <= b < p ** s):
        raise DomainError("needs 1 <= a < p and 1 <= b < p^s")
    r = a * p ** s + b
    n = r * e
    params = liea.compute_params(n, q, p, 1, 1)
    F = field_spec(q)
    big, small = a * p ** s * e, b * e
    # the Sylow builder lays blocks out in increasing width
    blocks = [small, big]
    N = liea.levi(blocks, q, 1, cap=cap, name="two-block group")
    _, Sg = liea.build_sylow(params, cap=cap)
    s_image = sorted({N.index_of(Sg.elements[i]) for i in range(Sg.order)})
    Sn = mg.Subgroup(N, np.array(s_image, dtype=np.int64))

    w = F.primitive
    sigma = mg.identity_matrix(n)
    sigma[0, 0] = w
    sigma[small, small] = F.inv_el(w)

    half = n // 2
    H1 = liea.levi([half, n - half], q, 1, cap=cap, name="balanced block group")
    split = liea.levi_split([half, n - half], q, 1, p)
    if split is None:
        raise DomainError("balanced block split unavailable")

    comm = mg.commutator_subgroup(N.as_subgroup())
    witnesses = [GeneratorWitness(f"c{i}", N.elements[g], "B1")
                 for i, g in enumerate(comm.gen_idx)]
    witnesses.append(GeneratorWitness(
        "connector-torus", sigma, "B2", aux_group=H1,
        aux_evidence=TrivialityEvidence(kind="block-split", split=split,
                                        det_order=1)))
    return MethodCertificate(
        description=f"block-count a*p^s+b instance: SL({n},{q}) at p={p}",
        p=p, n=n, q=q, ambient_order=liea.order_sl(n, q),
        H=N, sylow_in_H=Sn,
        containment=SylowContainment(kind="isotypic-blocks", sylow=Sg,
                                     blocks=tuple(blocks), levi_det_order=1),
        H_evidence=TrivialityEvidence(
            kind="normal-p-subgroup",
            witness_gens=[_big_block_scalar(F, n, small, big, p)]),
        witnesses=witnesses)


def _big_block_scalar(F, n, small, big, p):
    """Central element of the two-block group: an order-p scalar on the big
    block, compensated on the small block to keep determinant one."""
    zeta = F.element_of_order(p)
    m = mg.identity_matrix(n)
    det_big = F.pow_el(zeta, big)
    comp = F.pow_el(F.inv_el(det_big), 1)
    # distribute the compensation as a scalar on the small block if possible
    root = _scalar_root(F, comp, small)
    if root is None:
        raise DomainError("no determinant-one central witness")  # pragma: no cover
    for i in range(small):
        m[i, i] = root
    for i in range(small, small + big):
        m[i, i] = zeta
    return m


def _scalar_root(F, value, k):
    """Some c with c^k == value, or None."""
    if k == 0:
        return 1 if value == 1 else None
    for c in range(1, F.q):
        if F.pow_el(c, k) == value:
            return c
    return None


# ---------------------------------------------------------------------------
# replay运行 of the proof families

_FAMILY_DEFAULTS = {
    "rp-case": [(3, 19, 3)],
    "sleps": [(3, 4, 3), (6, 2, 3)],
    "sl62": [(6, 2, 3)],
    "composite-i": [(6, 4, 3)],
    "composite-ii": [(15, 11, 5)],
    "composite-iii": [(4, 4, 3)],
}


def replay_proof_certificates(family: str, n: int | None = None,
                              q: int | None = None, p: int | None = None,
                              cap: int | None = None) -> list[dict]:
    """Reconstruct and check the stored proof-witness families.

    Out-of-cap instances are reported SKIPPED (never silently passed);
    invalid parameter combinations are reported INVALID with the reason.
    """
    if family not in _FAMILY_DEFAULTS:
        raise DomainError(f"unknown certificate family {family!r}; "
                          f"choose from {sorted(_FAMILY_DEFAULTS)}")
    instances = [(n, q, p)] if n and q and p else _FAMILY_DEFAULTS[family]
    out = []
    for (ni, qi, pi) in instances:
        entry = {"family": family, "n": ni, "q": qi, "p": pi}
        try:
            if family == "sl62" or (family == "sleps" and (ni, qi, pi) == (6, 2, 3)):
                order = liea.order_sl(ni, qi)
                capv = mg.enumeration_cap(cap)
                raise CapExceeded(
                    f"SL({ni},{qi}) has order {order}, beyond the desk-scale cap {capv}",
                    needed=order, cap=capv)
            if family == "sleps":
                cert = build_central_scalar_certificate(ni, qi, pi, cap=cap)
            elif family == "rp-case":
                cert = build_torus_quotient_certificate(ni, qi, pi, cap=cap)
            elif family == "composite-iii":
                cert = build_block_count_certificate(qi, pi, cap=cap)
            else:
                # composite-i / composite-ii have no desk-scale instances:
                # the smallest required block groups already exceed the cap
                needed = liea.levi_order([ni // 2, ni - ni // 2], qi, 1)
                raise CapExceeded(
                    f"smallest required block group has order {needed}",
                    needed=needed, cap=mg.enumeration_cap(cap))
            report = check_certificate(cert)
            entry["verdict"] = report.verdict
            entry["description"] = report.description
            entry["failed_clause"] = report.failed_clause
            entry["clauses"] = [c.clause for c in report.clauses if not c.ok] or "all-ok"
        except CapExceeded as exc:
            entry["verdict"] = "SKIPPED"
            entry["reason"] = str(exc)
        except DomainError as exc:
            entry["verdict"] = "INVALID"
            entry["reason"] = str(exc)
        out.append(entry)
    return out
