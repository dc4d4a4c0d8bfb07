"""Parameter arithmetic and explicit constructions for linear groups
SL(n,q) <= G <= GL(n,q) in coprime characteristic p.

Everything dispatches off the tuple (n, q, p, e, t, d, r, f, |Det G|, |Z|):
e is the multiplicative order of q mod p, q^e - 1 = p^t * d with p not
dividing d, and n = r*e + f with 0 <= f < e.

The constructions (Sylow p-subgroups as products of wreath towers over
Singer blocks, block-diagonal subgroups, torus normalizers) return
generator matrices at the GL level; determinant conditions are imposed by
filtering the closed group, which is exact because a Sylow subgroup of a
normal subgroup is the intersection with a Sylow subgroup of the parent.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass

import numpy as np

from . import matgrp as mg
from .errors import CapExceeded, DomainError, GroupSpecError
from .gf import (FieldSpec, factorize, field_spec, is_prime, p_part, p_val,
                 prime_power_split)


# ---------------------------------------------------------------------------
# order formulas

def order_gl(n: int, q: int) -> int:
    o = q ** (n * (n - 1) // 2)
    for i in range(1, n + 1):
        o *= q ** i - 1
    return o


def order_sl(n: int, q: int) -> int:
    return order_gl(n, q) // (q - 1)


def group_order(n: int, q: int, det_order: int) -> int:
    return order_sl(n, q) * det_order


def multiplicative_order_mod(q: int, p: int) -> int:
    e, acc = 1, q % p
    while acc != 1:
        acc = (acc * q) % p
        e += 1
        if e > p:
            raise DomainError(f"{q} is not invertible mod {p}")  # pragma: no cover
    return e


def scalar_center_order(n: int, q: int, det_order: int) -> int:
    """Order of the scalar subgroup {a : a^n in Det(G)} of F_q^x."""
    if (q - 1) % det_order != 0:
        raise DomainError(f"det order {det_order} does not divide q-1={q - 1}")
    m = (q - 1) // det_order
    return det_order * math.gcd(n, m)


def det_quotient_order(n: int, q: int, det_order: int, z_order: int) -> int:
    """|Det(G)/Det(Z)| for Z the cyclic scalar subgroup of order z."""
    dz = z_order // math.gcd(n, z_order)
    if det_order % dz != 0:
        raise DomainError("Det(Z) is not contained in Det(G)")  # pragma: no cover
    return det_order // dz


# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class LieParams:
    n: int
    q: int
    p: int
    e: int
    t: int
    d: int
    r: int
    f: int
    det_order: int
    z_order: int

    @property
    def sylow_trivial(self) -> bool:
        return self.n < self.e

    @property
    def p_rank(self) -> int:
        """p-rank of G; for e = 1 the rank depends on p | |Det(G)|."""
        if self.e > 1:
            return self.r
        return self.n if self.det_order % self.p == 0 else self.n - 1

    @property
    def sylow_cyclic(self) -> bool:
        """Sylow p-subgroup of G itself (not of G/Z) cyclic."""
        if self.sylow_trivial:
            return False
        if self.p == 2:
            return self.n == 1
        return self.p_rank <= 1

    @property
    def sylow_abelian(self) -> bool:
        return self.n < self.p * self.e

    @property
    def field(self) -> FieldSpec:
        return field_spec(self.q)

    def sylow_order(self) -> int:
        return p_part(group_order(self.n, self.q, self.det_order), self.p)

    def quotient_order(self) -> int:
        return group_order(self.n, self.q, self.det_order) // self.z_order

    def quotient_sylow_order(self) -> int:
        return self.sylow_order() // p_part(self.z_order, self.p)

    def z_contains_center_p_part(self) -> bool:
        zc = scalar_center_order(self.n, self.q, self.det_order)
        return p_val(self.z_order, self.p) == p_val(zc, self.p)

    def to_json(self) -> dict:
        return {
            "n": self.n, "q": self.q, "p": self.p, "e": self.e, "t": self.t,
            "d": self.d, "r": self.r, "f": self.f,
            "det_order": self.det_order, "z_order": self.z_order,
            "sylow_trivial": self.sylow_trivial,
            "sylow_cyclic": self.sylow_cyclic,
            "sylow_abelian": self.sylow_abelian,
            "p_rank": self.p_rank,
            "scalar_center_order": scalar_center_order(self.n, self.q, self.det_order),
        }


def compute_params(n: int, q: int, p: int, det_order: int = 1,
                   z_order: int = 1) -> LieParams:
    if n < 1:
        raise DomainError(f"dimension n={n} must be positive")
    prime_power_split(q)  # validates q
    if not is_prime(p):
        raise DomainError(f"{p} is not prime")
    if q % p == 0:
        raise DomainError(f"characteristic p={p} divides q={q}")
    if det_order < 1 or (q - 1) % det_order != 0:
        raise DomainError(f"det order {det_order} must divide q-1={q - 1}")
    zc = scalar_center_order(n, q, det_order)
    if z_order < 1 or zc % z_order != 0:
        raise DomainError(
            f"|Z|={z_order} must divide the scalar center order {zc}")
    e = multiplicative_order_mod(q, p)
    t = p_val(q ** e - 1, p)
    d = (q ** e - 1) // p ** t
    r, f = divmod(n, e)
    return LieParams(n, q, p, e, t, d, r, f, det_order, z_order)


# ---------------------------------------------------------------------------
# generators of the standard groups

def sl_generators(n: int, q: int) -> list[np.ndarray]:
    F = field_spec(q)
    if n == 1:
        return [mg.identity_matrix(1)]
    w = F.primitive
    gens = []
    for i in range(n - 1):
        up = mg.identity_matrix(n)
        up[i, i + 1] = 1
        lo = mg.identity_matrix(n)
        lo[i + 1, i] = 1
        gens += [up, lo]
    tv = mg.identity_matrix(n)
    tv[0, 1] = w
    gens.append(tv)
    tor = mg.identity_matrix(n)
    tor[0, 0] = w
    tor[1, 1] = F.inv_el(w)
    gens.append(tor)
    return gens


def group_generators(n: int, q: int, det_order: int = 1) -> list[np.ndarray]:
    """Generators of the group with determinant image of the given order."""
    F = field_spec(q)
    gens = sl_generators(n, q)
    if det_order > 1:
        dgen = mg.identity_matrix(n)
        dgen[0, 0] = F.pow_el(F.primitive, (q - 1) // det_order)
        gens.append(dgen)
    return gens


def enumerate_group(n: int, q: int, det_order: int = 1, cap: int | None = None,
                    name: str | None = None) -> mg.MatrixGroup:
    expected = group_order(n, q, det_order)
    cap_val = mg.enumeration_cap(cap)
    if expected > cap_val:
        raise CapExceeded(
            f"group of order {expected} exceeds cap {cap_val}",
            needed=expected, cap=cap_val)
    F = field_spec(q)
    G = mg.MatrixGroup.generate(F, group_generators(n, q, det_order), cap=cap,
                                name=name or _default_name(n, q, det_order))
    if G.order != expected:
        raise DomainError(
            f"closure order {G.order} != expected {expected}")  # pragma: no cover
    return G


def enumerate_quotient(n: int, q: int, det_order: int = 1, z_order: int = 1,
                       cap: int | None = None, name: str | None = None) -> mg.MatrixGroup:
    zc = scalar_center_order(n, q, det_order)
    if zc % z_order != 0:
        raise DomainError(f"|Z|={z_order} invalid for this group")
    G = enumerate_group(n, q, det_order, cap=cap, name=name)
    if z_order == 1:
        return G
    F = field_spec(q)
    return G.central_quotient(sorted(F.subgroup_values(z_order)),
                              name=name or f"{_default_name(n, q, det_order)}/Z{z_order}")


def _default_name(n, q, det_order):
    if det_order == q - 1:
        return f"GL({n},{q})"
    if det_order == 1:
        return f"SL({n},{q})"
    return f"SL({n},{q}):{det_order}"


# ---------------------------------------------------------------------------
# extension-field blocks: the regular embedding of GF(q^e) into e x e
# matrices over GF(q), its Singer generator, and the Frobenius element

def _px_trim(a):
    while a and a[-1] == 0:
        a.pop()
    return a


def _px_mul(F: FieldSpec, a, b):
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    for i, ai in enumerate(a):
        if ai:
            for j, bj in enumerate(b):
                out[i + j] = F.add_el(out[i + j], F.mul_el(ai, bj))
    return _px_trim(out)


def _px_rem(F: FieldSpec, a, mod):
    a = list(a)
    dm = len(mod) - 1
    lead_inv = F.inv_el(mod[-1])
    while len(a) - 1 >= dm and a:
        if a[-1] == 0:
            a.pop()
            continue
        c = F.mul_el(a[-1], lead_inv)
        shift = len(a) - 1 - dm
        for i, mi in enumerate(mod):
            a[shift + i] = F.add_el(a[shift + i], F.neg_el(F.mul_el(c, mi)))
        _px_trim(a)
    return a


def _px_powmod(F, a, e, mod):
    result = [1]
    base = _px_rem(F, list(a), mod)
    while e:
        if e & 1:
            result = _px_rem(F, _px_mul(F, result, base), mod)
        base = _px_rem(F, _px_mul(F, base, base), mod)
        e >>= 1
    return result


def _px_sub(F, a, b):
    n = max(len(a), len(b))
    out = [F.add_el(a[i] if i < len(a) else 0,
                    F.neg_el(b[i] if i < len(b) else 0)) for i in range(n)]
    return _px_trim(out)


def _px_gcd(F, a, b):
    a, b = list(a), list(b)
    while b:
        a = _px_rem(F, a, b)
        a, b = b, a
    return a


def _ext_irreducible(F: FieldSpec, mod) -> bool:
    k = len(mod) - 1
    if k == 1:
        return True
    if mod[0] == 0:
        return False
    x = [0, 1]
    if _px_sub(F, _px_powmod(F, x, F.q ** k, mod), x):
        return False
    for dprime in factorize(k):
        g = _px_gcd(F, _px_sub(F, _px_powmod(F, x, F.q ** (k // dprime), mod), x), mod)
        if len(g) - 1 >= 1:
            return False
    return True


def _ext_modulus(F: FieldSpec, e: int):
    for low in range(F.q ** e):
        coeffs, v = [], low
        for _ in range(e):
            coeffs.append(v % F.q)
            v //= F.q
        mod = coeffs + [1]
        if _ext_irreducible(F, mod):
            return mod
    raise DomainError("no irreducible modulus found")  # pragma: no cover


def singer_block(q: int, e: int) -> tuple[np.ndarray, np.ndarray]:
    """(w, g): the regular-embedding image of a generator of GF(q^e)^x and
    the Frobenius element with g w g^-1 = w^q, both as e x e matrices."""
    F = field_spec(q)
    if e == 1:
        w = np.array([[F.primitive]], dtype=np.uint8)
        return w, mg.identity_matrix(1)
    mod = _ext_modulus(F, e)
    ext_order = q ** e - 1
    fac = factorize(ext_order)
    gen = None
    for v in range(1, q ** e):
        coeffs, vv = [], v
        for _ in range(e):
            coeffs.append(vv % q)
            vv //= q
        poly = _px_trim(list(coeffs))
        if all(_px_powmod(F, poly, ext_order // rp, mod) != [1] for rp in fac):
            gen = poly
            break
    if gen is None:
        raise DomainError("no multiplicative generator found")  # pragma: no cover

    def as_column(poly):
        col = list(poly) + [0] * e
        return col[:e]

    w = np.zeros((e, e), dtype=np.uint8)
    frob = np.zeros((e, e), dtype=np.uint8)
    for j in range(e):
        yj = [0] * j + [1]
        col = as_column(_px_rem(F, _px_mul(F, gen, yj), mod))
        for i in range(e):
            w[i, j] = col[i]
        colf = as_column(_px_powmod(F, yj, q, mod))
        for i in range(e):
            frob[i, j] = colf[i]
    return w, frob


def sylow_normalizer_block(e: int, q: int, p: int | None = None,
                           cap: int | None = None) -> mg.MatrixGroup:
    """The normalizer of the cyclic Sylow block inside GL(e,q): the group
    generated by the Singer element w and the Frobenius g, of order e(q^e-1)."""
    if e == 1:
        if p is not None and (q - 1) % p != 0:
            raise DomainError("for e=1 the block requires p | q-1")
        w, _ = singer_block(q, 1)
        N = mg.MatrixGroup.generate(field_spec(q), [w], cap=cap,
                                    name=f"N-block(1,{q})")
        return N
    w, g = singer_block(q, e)
    N = mg.MatrixGroup.generate(field_spec(q), [w, g], cap=cap,
                                name=f"N-block({e},{q})")
    if N.order != e * (q ** e - 1):
        raise DomainError("Singer normalizer has unexpected order")  # pragma: no cover
    return N


# ---------------------------------------------------------------------------
# Sylow p-subgroup construction

@dataclass
class SylowPresentation:
    generators: list[np.ndarray]
    claimed_order: int
    shape: str


def _chunk_cycle_perm(n: int, off: int, chunk: int, count: int) -> np.ndarray:
    """Permutation matrix cycling `count` consecutive chunks of width `chunk`."""
    perm = list(range(n))
    for c in range(count):
        for j in range(chunk):
            src = off + c * chunk + j
            dst = off + ((c + 1) % count) * chunk + j
            perm[src] = dst
    return mg.permutation_matrix(perm, n)


def _gl_sylow_generators(n: int, q: int, p: int, e: int, t: int) -> tuple[list[np.ndarray], str]:
    F = field_spec(q)
    gens: list[np.ndarray] = []
    shape_terms: list[str] = []

    if p > 2:
        r = n // e
        w, _ = singer_block(q, e)
        wp = _matrix_power(F, w, (q ** e - 1) // p ** t)
        digits = _base_digits(r, p)
        off = 0
        for i, a_i in enumerate(digits):
            width = e * p ** i
            for _ in range(a_i):
                gens.append(mg.block_embed(n, [(off, wp)]))
                for level in range(1, i + 1):
                    gens.append(_chunk_cycle_perm(n, off, e * p ** (level - 1), p))
                off += width
            if a_i:
                tower = f"C_{p ** t}" if i == 0 else f"C_{p ** t} wr C_{p}^(wr {i})"
                shape_terms.append(f"({tower})^{a_i}" if a_i > 1 else tower)
        return gens, " x ".join(shape_terms) if shape_terms else "1"

    # p == 2, q odd
    if q % 4 == 1:
        zeta = F.element_of_order(2 ** t)
        digits = _base_digits(n, 2)
        off = 0
        for i, a_i in enumerate(digits):
            width = 2 ** i
            for _ in range(a_i):
                base = np.array([[zeta]], dtype=np.uint8)
                gens.append(mg.block_embed(n, [(off, base)]))
                for level in range(1, i + 1):
                    gens.append(_chunk_cycle_perm(n, off, 2 ** (level - 1), 2))
                off += width
            if a_i:
                tower = f"C_{2 ** t}" if i == 0 else f"C_{2 ** t} wr C_2^(wr {i})"
                shape_terms.append(tower)
        return gens, " x ".join(shape_terms) if shape_terms else "1"

    # q = 3 mod 4: semidihedral blocks over coordinate pairs, sized by the
    # 2-part of q+1 (the 2-part of q^2-1 is 2^(t2+1))
    t2 = p_val(q + 1, 2)
    u, leftover = divmod(n, 2)
    w2, g2 = singer_block(q, 2)
    w2p = _matrix_power(F, w2, (q * q - 1) // 2 ** (t2 + 1))
    digits = _base_digits(u, 2)
    off = 0
    for i, a_i in enumerate(digits):
        width = 2 * 2 ** i
        for _ in range(a_i):
            gens.append(mg.block_embed(n, [(off, w2p)]))
            gens.append(mg.block_embed(n, [(off, g2)]))
            for level in range(1, i + 1):
                gens.append(_chunk_cycle_perm(n, off, 2 * 2 ** (level - 1), 2))
            off += width
        if a_i:
            tower = f"SD_{2 ** (t2 + 2)}" if i == 0 else f"SD_{2 ** (t2 + 2)} wr C_2^(wr {i})"
            shape_terms.append(tower)
    if leftover:
        minus1 = np.array([[F.neg_el(1)]], dtype=np.uint8)
        gens.append(mg.block_embed(n, [(n - 1, minus1)]))
        shape_terms.append("C_2")
    return gens, " x ".join(shape_terms) if shape_terms else "1"


def _matrix_power(F: FieldSpec, m: np.ndarray, e: int) -> np.ndarray:
    from . import backend
    acc = mg.identity_matrix(m.shape[0])
    base = m.copy()
    while e:
        if e & 1:
            acc = backend.mm_one(acc[None], base, F)[0]
        base = backend.mm_one(base[None], base, F)[0]
        e >>= 1
    return acc


def _base_digits(r: int, p: int) -> list[int]:
    out = []
    while r:
        out.append(r % p)
        r //= p
    return out


def build_sylow(params: LieParams, cap: int | None = None) -> tuple[SylowPresentation, mg.MatrixGroup]:
    """A Sylow p-subgroup of G, as (presentation, enumerated group).

    Built at the GL level from Singer-block generators and chunk-cycling
    permutation matrices, then intersected with the determinant condition.
    """
    n, q, p = params.n, params.q, params.p
    if params.sylow_trivial:
        raise DomainError(f"p={p} does not divide the group order (n < e)")
    F = params.field
    gl_gens, shape = _gl_sylow_generators(n, q, p, params.e, params.t)
    gl_order = p_part(order_gl(n, q), p)
    cap_val = mg.enumeration_cap(cap)
    if gl_order > cap_val:
        raise CapExceeded(f"Sylow of order {gl_order} exceeds cap {cap_val}",
                          needed=gl_order, cap=cap_val)
    S_gl = mg.MatrixGroup.generate(F, gl_gens, cap=cap, name=f"Syl_{p}(GL({n},{q}))")
    if S_gl.order != gl_order:
        raise DomainError(
            f"Sylow construction: closed order {S_gl.order} != {gl_order}")
    claimed = params.sylow_order()
    if params.det_order == q - 1:
        return SylowPresentation(gl_gens, claimed, shape), S_gl
    dvals = F.subgroup_values(params.det_order)
    dets = S_gl.dets()
    keep = np.array([i for i in range(S_gl.order) if int(dets[i]) in dvals],
                    dtype=np.int64)
    sub = mg.Subgroup(S_gl, keep)
    gen_idx = mg.find_generators(S_gl, sub.idx)
    gens = [S_gl.elements[i] for i in gen_idx] or [mg.identity_matrix(n)]
    S = mg.MatrixGroup.generate(F, gens, cap=cap,
                                name=f"Syl_{p}({_default_name(n, q, params.det_order)})")
    if S.order != claimed:
        raise DomainError(
            f"det-filtered Sylow order {S.order} != claimed {claimed}")
    return SylowPresentation(gens, claimed, shape + " ^ det"), S


def sylow_in(G: mg.MatrixGroup, params: LieParams, cap: int | None = None) -> mg.Subgroup:
    """Image of the constructed Sylow inside an enumerated G (or G/Z)."""
    _, S = build_sylow(params, cap=cap)
    idxs = sorted({G.index_of(S.elements[i]) for i in range(S.order)})
    return mg.Subgroup(G, np.array(idxs, dtype=np.int64))


# ---------------------------------------------------------------------------
# block-diagonal (Levi) subgroups

def levi_order(blocks, q: int, det_order: int) -> int:
    o = 1
    for b in blocks:
        o *= order_gl(b, q)
    return o * det_order // (q - 1)


def levi_generators(blocks, q: int, det_order: int = 1) -> list[np.ndarray]:
    n = sum(blocks)
    F = field_spec(q)
    w = F.primitive
    gens: list[np.ndarray] = []
    offs = []
    off = 0
    for b in blocks:
        offs.append(off)
        for gmat in (sl_generators(b, q) if b > 1 else []):
            gens.append(mg.block_embed(n, [(off, gmat)]))
        off += b
    for i in range(len(blocks) - 1):
        tor = mg.identity_matrix(n)
        tor[offs[i], offs[i]] = w
        tor[offs[i + 1], offs[i + 1]] = F.inv_el(w)
        gens.append(tor)
    if det_order > 1:
        dg = mg.identity_matrix(n)
        dg[0, 0] = F.pow_el(w, (q - 1) // det_order)
        gens.append(dg)
    if not gens:
        gens.append(mg.identity_matrix(n))
    return gens


def levi(blocks, q: int, det_order: int = 1, cap: int | None = None,
         name: str | None = None) -> mg.MatrixGroup:
    """Block-diagonal subgroup of GL(n,q) with the given determinant image."""
    blocks = list(blocks)
    if any(b < 1 for b in blocks):
        raise DomainError("block sizes must be positive")
    expected = levi_order(blocks, q, det_order)
    cap_val = mg.enumeration_cap(cap)
    if expected > cap_val:
        raise CapExceeded(f"block group of order {expected} exceeds cap {cap_val}",
                          needed=expected, cap=cap_val)
    L = mg.MatrixGroup.generate(
        field_spec(q), levi_generators(blocks, q, det_order), cap=cap,
        name=name or f"L{tuple(blocks)}:{det_order} over GF({q})")
    if L.order != expected:
        raise DomainError(
            f"block group order {L.order} != expected {expected}")  # pragma: no cover
    return L


@dataclass
class BlockSplit:
    """Witness that a block group splits for the direct-factor argument:
    two index sets A, B covering the blocks, with p dividing the order of
    the intersection of each factor with the determinant-constrained group."""

    blocks: tuple[int, ...]
    part_a: tuple[int, ...]
    part_b: tuple[int, ...]
    order_a: int
    order_b: int
    p: int

    def valid(self) -> bool:
        return self.order_a % self.p == 0 and self.order_b % self.p == 0


def levi_split(blocks, q: int, det_order: int, p: int) -> BlockSplit | None:
    """A two-factor split certifying the one-dimensionality criterion.

    Hypotheses: if p | q-1 at least two blocks exceed 1; otherwise at least
    two blocks are >= e.  Returns None when they fail.
    """
    e = multiplicative_order_mod(q, p)
    need = (lambda b: b > 1) if e == 1 else (lambda b: b >= e)
    hits = [i for i, b in enumerate(blocks) if need(b)]
    if len(hits) < 2:
        return None
    a = (hits[0],)
    b = tuple(i for i in range(len(blocks)) if i != hits[0])
    d = det_order

    def factor_order(part):
        o = 1
        for i in part:
            o *= order_gl(blocks[i], q)
        return o * d // (q - 1)

    return BlockSplit(tuple(blocks), a, b, factor_order(a), factor_order(b), p)


def levi_normalizer_equal_blocks(s: int, r: int, q: int,
                                 cap: int | None = None) -> mg.MatrixGroup:
    """N(L) for L the determinant-one subgroup of r equal s x s blocks:
    the block group extended by block permutations, inside SL(sr, q).

    Built directly from generators (block-group generators plus adjacent
    block swaps with a sign fix when s is odd), so the ambient SL is never
    enumerated.  Order |GL(s,q)|^r * r! / (q-1).
    """
    if r < 2 or s < 1:
        raise DomainError("need r >= 2 equal blocks")
    n = s * r
    F = field_spec(q)
    expected = levi_order([s] * r, q, 1) * math.factorial(r)
    cap_val = mg.enumeration_cap(cap)
    if expected > cap_val:
        raise CapExceeded(f"block normalizer of order {expected} exceeds cap",
                          needed=expected, cap=cap_val)
    gens = levi_generators([s] * r, q, det_order=1)
    for i in range(r - 1):
        perm = list(range(n))
        for j in range(s):
            perm[i * s + j] = (i + 1) * s + j
            perm[(i + 1) * s + j] = i * s + j
        mat = mg.permutation_matrix(perm, n)
        if s % 2 == 1:
            # block swap has determinant (-1)^s; flip one column's sign
            col = i * s
            for row in range(n):
                mat[row, col] = F.mul_el(F.neg_el(1), mat[row, col])
        gens.append(mat)
    N = mg.MatrixGroup.generate(F, gens, cap=cap,
                                name=f"N(L({s}^{r})) in SL({n},{q})")
    if N.order != expected:
        raise DomainError("block normalizer order mismatch")  # pragma: no cover
    return N


# ---------------------------------------------------------------------------
# torus-normalizer (monomial) groups

def monomial_order(n: int, q: int, det_order: int) -> int:
    return (q - 1) ** (n - 1) * det_order * math.factorial(n)


def monomial_group(n: int, q: int, det_order: int = 1, cap: int | None = None) -> mg.MatrixGroup:
    """Monomial matrices with determinant in the chosen subgroup."""
    F = field_spec(q)
    gens = levi_generators([1] * n, q, det_order)
    for i in range(n - 1):
        swap = mg.identity_matrix(n)
        swap[i, i] = 0
        swap[i + 1, i + 1] = 0
        swap[i, i + 1] = 1
        swap[i + 1, i] = F.neg_el(1)  # determinant 1
        gens.append(swap)
    M = mg.MatrixGroup.generate(F, gens, cap=cap,
                                name=f"monomial({n},{q}):{det_order}")
    if M.order != monomial_order(n, q, det_order):
        raise DomainError("monomial group order mismatch")  # pragma: no cover
    return M


def is_monomial_matrix(m: np.ndarray) -> bool:
    return all(int(np.count_nonzero(m[i])) == 1 for i in range(m.shape[0])) and \
        all(int(np.count_nonzero(m[:, j])) == 1 for j in range(m.shape[1]))


# ---------------------------------------------------------------------------
# named generator matrices from the explicit constructions

def named_matrices(case: str, n: int, q: int, p: int | None = None,
                   m: int | None = None) -> dict[str, np.ndarray]:
    """The exact matrices used by the explicit arguments, keyed by tag."""
    F = field_spec(q)
    neg1 = F.neg_el(1)
    out: dict[str, np.ndarray] = {}
    if case == "block-swap":
        if m is None or 2 * m > n:
            raise DomainError("block-swap requires m with 2m <= n")
        mat = np.zeros((n, n), dtype=np.uint8)
        for i in range(m):
            mat[i, m + i] = 1
            mat[m + i, i] = neg1
        for i in range(2 * m, n):
            mat[i, i] = 1
        out["sigma-swap"] = mat
        c = F.element_of_order(p_part(q - 1, 2)) if q % 2 else 1
        tau = mg.identity_matrix(n)
        tau[0, 0] = c
        tau[m, m] = F.inv_el(c) if c else 1
        out["tau-torus"] = tau
    elif case == "torus-corner":
        if p is None or (q - 1) % p != 0:
            raise DomainError("torus-corner requires p | q-1")
        u = np.array([[0, 1], [neg1, 0]], dtype=np.uint8)
        out["X-corner"] = mg.block_embed(n, [(0, u)])
        zeta = F.element_of_order(p_part(q - 1, p))
        y = mg.identity_matrix(n)
        y[0, 0] = zeta
        y[1, 1] = zeta
        y[2, 2] = F.pow_el(zeta, -2)
        out["Y-scaled-torus"] = y
    elif case == "char3-sylow":
        if n != 3 or (q - 1) % 3 != 0:
            raise DomainError("char3-sylow needs n=3 and 3 | q-1")
        zeta = F.element_of_order(p_part(q - 1, 3))
        for i in range(3):
            x = mg.identity_matrix(3)
            x[i, i] = zeta
            out[f"X{i + 1}-zeta"] = x
        out["Y-cycle"] = np.array([[0, 1, 0], [0, 0, 1], [1, 0, 0]], dtype=np.uint8)
    elif case == "char2-n3":
        u = F.element_of_order(3) if (q - 1) % 3 == 0 else None
        if u is not None:
            out["X-cube"] = np.diag(np.array([u, F.mul_el(u, u), 1], dtype=np.uint8))
            out["Y-cube"] = np.diag(np.array([1, F.mul_el(u, u), u], dtype=np.uint8))
        out["A-invol"] = np.diag(np.array([neg1, neg1, 1], dtype=np.uint8))
        out["B-invol"] = np.diag(np.array([1, neg1, neg1], dtype=np.uint8))
    elif case == "char2-n2":
        zeta = F.element_of_order(p_part(q - 1, 2))
        out["swap2"] = np.array([[0, 1], [1, 0]], dtype=np.uint8)
        out["zeta1"] = np.diag(np.array([zeta, 1], dtype=np.uint8))
        out["zeta2"] = np.diag(np.array([1, zeta], dtype=np.uint8))
    else:
        raise DomainError(f"unknown named-matrix case {case!r}")
    return out


# ---------------------------------------------------------------------------
# group spec strings

_GROUP_RE = re.compile(
    r"^(GL|SL|PGL|PSL)\(\s*(\d+)\s*,\s*(\d+)\s*\)(?::(\d+))?$")


@dataclass(frozen=True)
class GroupSpec:
    family: str
    n: int
    q: int
    det_order: int
    z_order: int

    @property
    def name(self) -> str:
        base = _default_name(self.n, self.q, self.det_order)
        if self.z_order > 1:
            return {"PGL": f"PGL({self.n},{self.q})",
                    "PSL": f"PSL({self.n},{self.q})"}.get(self.family,
                                                          f"{base}/Z{self.z_order}")
        return base


def parse_group_spec(text: str) -> GroupSpec:
    m = _GROUP_RE.match(text.strip())
    if not m:
        raise GroupSpecError(f"malformed group spec: {text!r}")
    fam, n, q, d = m.group(1), int(m.group(2)), int(m.group(3)), m.group(4)
    try:
        prime_power_split(q)
    except DomainError as exc:
        raise GroupSpecError(str(exc)) from exc
    if n < 1:
        raise GroupSpecError("dimension must be >= 1")
    if d is not None:
        if fam != "SL":
            raise GroupSpecError("determinant suffix only applies to SL(n,q):d")
        d = int(d)
        if d < 1 or (q - 1) % d != 0:
            raise GroupSpecError(f"det order {d} must divide q-1={q - 1}")
        return GroupSpec("SLd", n, q, d, 1)
    if fam == "GL":
        return GroupSpec(fam, n, q, q - 1, 1)
    if fam == "SL":
        return GroupSpec(fam, n, q, 1, 1)
    if fam == "PGL":
        return GroupSpec(fam, n, q, q - 1, q - 1)
    return GroupSpec("PSL", n, q, 1, math.gcd(n, q - 1))


def enumerate_spec(spec: GroupSpec, cap: int | None = None) -> mg.MatrixGroup:
    return enumerate_quotient(spec.n, spec.q, spec.det_order, spec.z_order,
                              cap=cap, name=spec.name)
