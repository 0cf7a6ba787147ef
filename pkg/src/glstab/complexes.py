"""General-position chain complexes and their signed unordered quotients.

A degree-k generator is an ordered k-tuple of column vectors in F_p^n,
stored as a tuple of int tuples; the degree-0 module is Z on the empty
tuple, so the bottom differential is the augmentation sending every vector
to 1.  The unordered quotient replaces generators by sorted representatives;
orbits fixed by an odd permutation (repeated columns, only possible for
gp_type <= 1) become tagged Z/2 generators rather than being dropped.
"""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field
from itertools import combinations, permutations

from .errors import CapExceeded, NotFound
from .exact import DEFAULT_CAPS, ExactMatrix, ResourceCaps
from .field import all_vectors, rank_mod_p
from .gl import act_on_columns

Generator = tuple  # ordered tuple of column vectors


# ---------------------------------------------------------------------------
# permutations: right action with left-to-right composition


def perm_sign(sigma) -> int:
    inv = 0
    k = len(sigma)
    for a in range(k):
        for b in range(a + 1, k):
            if sigma[a] > sigma[b]:
                inv += 1
    return -1 if inv % 2 else 1


def perm_inverse(sigma):
    out = [0] * len(sigma)
    for i, v in enumerate(sigma):
        out[v] = i
    return tuple(out)


def perm_compose(s, t):
    """Apply s, then t (so the generator right action composes on the right)."""
    return tuple(t[s[i]] for i in range(len(s)))


def all_permutations(k):
    return [tuple(s) for s in permutations(range(k))]


def adjacent_transposition(i, k):
    """Swap positions i and i+1 (0-based) in S_k."""
    s = list(range(k))
    s[i], s[i + 1] = s[i + 1], s[i]
    return tuple(s)


def apply_permutation(gen: Generator, sigma):
    """Signed right action: gen.sigma = sign(sigma) * (columns permuted by
    sigma^{-1}).  Returns (sign, permuted generator)."""
    inv = perm_inverse(sigma)
    return perm_sign(sigma), tuple(gen[inv[j]] for j in range(len(gen)))


def permute_columns(gen: Generator, sigma):
    """The unsigned column permutation underlying the signed action."""
    inv = perm_inverse(sigma)
    return tuple(gen[inv[j]] for j in range(len(gen)))


# ---------------------------------------------------------------------------
# general position


def is_general_position(columns, gp_type: int, p: int) -> bool:
    """Every subset of min(gp_type, k) columns is linearly independent."""
    if not columns:
        return True
    n = len(columns[0])
    s = min(gp_type, len(columns))
    if s == 0:
        return True
    for sub in combinations(columns, s):
        if rank_mod_p(sub, n, p) != s:
            return False
    return True


def _extends_gp(prefix, v, gp_type: int, n: int, p: int) -> bool:
    """Does appending v keep the tuple in general position?  Only subsets
    containing v need checking; the prefix is assumed already valid."""
    k = len(prefix) + 1
    s = min(gp_type, k)
    if s == 0:
        return True
    if s == 1:
        return any(v)
    if not any(v):
        return False
    for sub in combinations(prefix, s - 1):
        if rank_mod_p(sub + (v,), n, p) != s:
            return False
    return True


# ---------------------------------------------------------------------------
# complexes


@dataclass
class ChainComplex:
    """Bases and integer differentials of A^(i)_* or its unordered quotient.

    bases[k] lists the degree-k generators in canonical (lexicographic)
    order; differentials[k] maps degree k to degree k-1 for 1 <= k <= k_max.
    torsion[k][j] marks a Z/2 generator of the quotient complex; entries of
    differential columns landing on torsion rows are understood mod 2.
    """

    n: int
    p: int
    gp_type: int
    k_max: int
    bases: list
    differentials: dict
    torsion: list
    ordered: bool = True
    index: list = dc_field(default_factory=list)

    def __post_init__(self):
        if not self.index:
            self.index = [{g: i for i, g in enumerate(b)} for b in self.bases]

    def rank(self, k: int) -> int:
        return len(self.bases[k]) if 0 <= k <= self.k_max else 0

    def basis(self, k: int):
        return self.bases[k]

    def differential(self, k: int) -> ExactMatrix:
        """The map degree k -> degree k-1 (zero outside 1..k_max)."""
        if k in self.differentials:
            return self.differentials[k]
        rows = self.rank(k - 1)
        cols = self.rank(k)
        return ExactMatrix.zero(rows, cols)

    def has_torsion(self, k: int) -> bool:
        return any(self.torsion[k]) if 0 <= k <= self.k_max else False

    def describe(self) -> str:
        kind = "ordered" if self.ordered else "unordered"
        ranks = ", ".join(str(self.rank(k)) for k in range(self.k_max + 1))
        return (f"{kind} gp-complex n={self.n} p={self.p} type={self.gp_type} "
                f"k_max={self.k_max} ranks=[{ranks}]")


def boundary_chain(gen: Generator):
    """Alternating face expansion of one generator, as {face: coefficient}."""
    out = {}
    for j in range(len(gen)):
        face = gen[:j] + gen[j + 1:]
        sign = 1 if j % 2 == 0 else -1
        out[face] = out.get(face, 0) + sign
        if not out[face]:
            del out[face]
    return out


def boundary_of_chain(chain: dict):
    out = {}
    for gen, coef in chain.items():
        for face, s in boundary_chain(gen).items():
            v = out.get(face, 0) + coef * s
            if v:
                out[face] = v
            else:
                del out[face]
    return out


def build_complex(n: int, p: int, gp_type: int, k_max: int,
                  caps: ResourceCaps | None = None) -> ChainComplex:
    """A^(gp_type)_* through degree k_max, bases in lexicographic order."""
    caps = caps or DEFAULT_CAPS
    if not 0 <= gp_type:
        raise ValueError("gp_type must be >= 0")
    bases = [((),)]
    for k in range(1, k_max + 1):
        prev = bases[k - 1]
        vectors = list(all_vectors(n, p))
        new = []
        for g in prev:
            for v in vectors:
                if _extends_gp(g, v, gp_type, n, p):
                    new.append(g + (v,))
            if len(new) > caps.max_basis:
                raise CapExceeded(
                    f"A^({gp_type})_{k} for n={n}, p={p} exceeds basis cap",
                    degree=k, reached=len(new), partial_ranks=[len(b) for b in bases])
        bases.append(tuple(new))
    index = [{g: i for i, g in enumerate(b)} for b in bases]
    diffs = {}
    for k in range(1, k_max + 1):
        rows_idx = index[k - 1]
        ents = {}
        for col, g in enumerate(bases[k]):
            for face, s in boundary_chain(g).items():
                ents[(rows_idx[face], col)] = s
        diffs[k] = ExactMatrix(len(bases[k - 1]), len(bases[k]), ents)
    torsion = [tuple(False for _ in b) for b in bases]
    return ChainComplex(n=n, p=p, gp_type=gp_type, k_max=k_max, bases=bases,
                        differentials=diffs, torsion=torsion, ordered=True,
                        index=index)


# ---------------------------------------------------------------------------
# unordered quotient


def canonical_rep(gen: Generator):
    """Sorted representative and the sign of the sorting permutation.

    With repeated columns the sign is ambiguous; +1 is returned and the
    generator is a Z/2 class where signs do not matter.
    """
    order = sorted(range(len(gen)), key=lambda j: gen[j])
    rep = tuple(gen[j] for j in order)
    if len(set(gen)) != len(gen):
        return rep, 1
    inv = 0
    for a in range(len(order)):
        for b in range(a + 1, len(order)):
            if order[a] > order[b]:
                inv += 1
    return rep, (-1 if inv % 2 else 1)


def has_repeated_column(gen: Generator) -> bool:
    return len(set(gen)) != len(gen)


def project_chain(chain: dict, quotient: "ChainComplex", k: int):
    """Push an ordered chain into quotient coordinates {row index: coeff};
    coefficients on torsion rows are reduced mod 2."""
    idx = quotient.index[k]
    tors = quotient.torsion[k]
    out = {}
    for gen, coef in chain.items():
        rep, sign = canonical_rep(gen)
        i = idx[rep]
        v = out.get(i, 0) + sign * coef
        if v:
            out[i] = v
        else:
            out.pop(i, None)
    for i in list(out):
        if tors[i]:
            out[i] %= 2
            if not out[i]:
                del out[i]
    return out


def unordered_quotient(c: ChainComplex) -> ChainComplex:
    """The signed S_k-coinvariants of an ordered complex.

    Basis: lexicographically sorted orbit representatives.  An orbit whose
    stabilizer contains an odd permutation (a repeated column) contributes a
    tagged Z/2 generator; the quotient differential is computed on canonical
    representatives and is independent of that choice because the face maps
    intertwine the signed actions.
    """
    if not c.ordered:
        raise ValueError("input must be an ordered complex")
    bases = []
    torsion = []
    for k in range(c.k_max + 1):
        reps = sorted({canonical_rep(g)[0] for g in c.bases[k]})
        bases.append(tuple(reps))
        torsion.append(tuple(has_repeated_column(g) for g in reps))
    quotient = ChainComplex(n=c.n, p=c.p, gp_type=c.gp_type, k_max=c.k_max,
                            bases=bases, differentials={}, torsion=torsion,
                            ordered=False)
    for k in range(1, c.k_max + 1):
        ents = {}
        src_tors = torsion[k]
        for col, rep in enumerate(bases[k]):
            column = project_chain(boundary_chain(rep), quotient, k - 1)
            if src_tors[col]:
                # an order-2 class has an order-<=2 image: no free part
                for r in column:
                    if not quotient.torsion[k - 1][r]:
                        raise AssertionError(
                            "torsion generator mapped onto a free generator")
            for r, v in column.items():
                ents[(r, col)] = v
        quotient.differentials[k] = ExactMatrix(len(bases[k - 1]), len(bases[k]), ents)
    return quotient


# ---------------------------------------------------------------------------
# well-formedness checks


def check_dd_zero(c: ChainComplex) -> bool:
    """d . d = 0, exactly; entries landing on torsion rows are checked mod 2."""
    for k in range(2, c.k_max + 1):
        prod = c.differential(k - 1).mul(c.differential(k))
        if c.ordered or not any(c.torsion[k - 2]):
            if not prod.is_zero():
                return False
        else:
            tors = c.torsion[k - 2]
            for (r, _col), v in prod.entries.items():
                if tors[r]:
                    if v % 2:
                        return False
                elif v:
                    return False
    return True


def check_equivariance(c: ChainComplex, quotient: ChainComplex) -> bool:
    """The signed action commutes with the differential through the quotient:
    projecting d(g . tau) agrees with projecting d(g) for every generator and
    every adjacent transposition tau (which generate S_k, so all sigma)."""
    for k in range(1, c.k_max + 1):
        for g in c.bases[k]:
            base = project_chain(boundary_chain(g), quotient, k - 1)
            for i in range(k - 1):
                tau = adjacent_transposition(i, k)
                sign, gt = apply_permutation(g, tau)
                moved = project_chain(
                    {f: sign * s for f, s in boundary_chain(gt).items()},
                    quotient, k - 1)
                if moved != base:
                    return False
    return True


def check_filtration(coarse: ChainComplex, fine: ChainComplex) -> bool:
    """fine = A^(i+1): its basis embeds in A^(i) and the differential is the
    restriction."""
    for k in range(min(coarse.k_max, fine.k_max) + 1):
        big = set(coarse.index[k])
        for g in fine.bases[k]:
            if g not in big:
                return False
    for k in range(1, min(coarse.k_max, fine.k_max) + 1):
        dc = coarse.differential(k)
        df = fine.differential(k)
        rows = [coarse.index[k - 1][g] for g in fine.bases[k - 1]]
        cols = [coarse.index[k][g] for g in fine.bases[k]]
        if dc.submatrix(rows, cols) != df:
            return False
    return True


def check_group_action(c: ChainComplex, group, sample=None) -> bool:
    """Left G-action commutes with d and with the right signed action."""
    p = c.p
    gens = group.generating_set()
    for k in range(1, c.k_max + 1):
        basis = c.bases[k] if sample is None else c.bases[k][:sample]
        for g in basis:
            for h in gens:
                hg = act_on_columns(h, g, p)
                if hg not in c.index[k]:
                    return False
                left = boundary_of_chain({hg: 1})
                right = {act_on_columns(h, f, p): s
                         for f, s in boundary_chain(g).items()}
                if left != right:
                    return False
                for i in range(k - 1):
                    tau = adjacent_transposition(i, k)
                    s1, a = apply_permutation(hg, tau)
                    s2, b = apply_permutation(g, tau)
                    if (s1, a) != (s2, act_on_columns(h, b, p)):
                        return False
    return True


# ---------------------------------------------------------------------------
# acyclicity cone


def cone_vector(cycle: dict, c: ChainComplex):
    """A vector a-tilde such that prepending it to every summand of the cycle
    stays in general position, searched in lexicographic order, plus the cone
    chain it produces.  Prepending is a chain contraction on cycles, so the
    cone's boundary reproduces the cycle exactly (verified here).
    """
    if not cycle:
        first = next(iter(all_vectors(c.n, c.p)))
        return first, {}
    k = len(next(iter(cycle)))
    if k >= c.k_max:
        raise ValueError("cone lands beyond the built truncation")
    blocked = {}
    for a in all_vectors(c.n, c.p):
        ok = True
        for gen in cycle:
            if not is_general_position((a,) + gen, c.gp_type, c.p):
                blocked[a] = gen
                ok = False
                break
        if ok:
            cone = {(a,) + gen: coef for gen, coef in cycle.items()}
            bd = boundary_of_chain(cone)
            if bd != cycle:
                raise AssertionError("cone identity failed: input was not a cycle?")
            return a, cone
    raise NotFound(
        f"no cone vector over F_{c.p}^{c.n} for a {len(cycle)}-term cycle "
        "(field too small)", witness=blocked)
