"""GL_n(F_p) and friends: enumeration, orbits, stabilizers, abelianizations.

Group elements are n x n matrices stored as tuples of row tuples of ints
mod p, so they hash and compare cheaply.  Groups are materialized as explicit
element lists behind a hard order cap; subgroups are element lists plus the
same machinery.
"""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field
from itertools import product
from math import gcd

from .errors import ActionClosureError, CapExceeded, NotAUnit
from .exact import DEFAULT_CAPS, HomologyResult, ResourceCaps
from .field import inv_mod, require_prime

Mat = tuple  # tuple of row tuples


def mat_identity(n: int) -> Mat:
    return tuple(tuple(1 if i == j else 0 for j in range(n)) for i in range(n))


def mat_mul(a: Mat, b: Mat, p: int) -> Mat:
    bt = tuple(zip(*b))
    return tuple(
        tuple(sum(x * y for x, y in zip(row, col)) % p for col in bt)
        for row in a
    )


def mat_vec(a: Mat, v, p: int):
    return tuple(sum(x * y for x, y in zip(row, v)) % p for row in a)


def mat_det(a: Mat, p: int) -> int:
    n = len(a)
    m = [list(r) for r in a]
    det = 1
    for k in range(n):
        piv = None
        for r in range(k, n):
            if m[r][k] % p:
                piv = r
                break
        if piv is None:
            return 0
        if piv != k:
            m[k], m[piv] = m[piv], m[k]
            det = -det
        det = (det * m[k][k]) % p
        inv = inv_mod(m[k][k], p)
        for r in range(k + 1, n):
            if m[r][k]:
                f = (m[r][k] * inv) % p
                m[r] = [(x - f * y) % p for x, y in zip(m[r], m[k])]
    return det % p


def mat_inv(a: Mat, p: int) -> Mat:
    n = len(a)
    m = [list(r) + [1 if i == j else 0 for j in range(n)] for i, r in enumerate(a)]
    for k in range(n):
        piv = None
        for r in range(k, n):
            if m[r][k] % p:
                piv = r
                break
        if piv is None:
            raise ValueError("singular matrix")
        m[k], m[piv] = m[piv], m[k]
        inv = inv_mod(m[k][k], p)
        m[k] = [(inv * x) % p for x in m[k]]
        for r in range(n):
            if r != k and m[r][k]:
                f = m[r][k]
                m[r] = [(x - f * y) % p for x, y in zip(m[r], m[k])]
    return tuple(tuple(row[n:]) for row in m)


def act_on_columns(g: Mat, cols, p: int):
    """Left multiplication on an ordered tuple of column vectors."""
    return tuple(mat_vec(g, c, p) for c in cols)


def primitive_root(p: int) -> int:
    require_prime(p)
    if p == 2:
        return 1
    order = p - 1
    primes = set()
    m = order
    d = 2
    while d * d <= m:
        if m % d == 0:
            primes.add(d)
            while m % d == 0:
                m //= d
        d += 1
    if m > 1:
        primes.add(m)
    for g in range(2, p):
        if all(pow(g, order // q, p) != 1 for q in primes):
            return g
    raise AssertionError("no primitive root found")


def gl_order(n: int, p: int) -> int:
    order = 1
    for i in range(n):
        order *= p**n - p**i
    return order


class Group:
    """A finite matrix group over F_p as an explicit element list."""

    def __init__(self, n: int, p: int, elements, generators=None, name: str = ""):
        self.n = n
        self.p = p
        self.elements = tuple(elements)
        self.index = {g: i for i, g in enumerate(self.elements)}
        if len(self.index) != len(self.elements):
            raise ValueError("duplicate elements")
        self.name = name or f"matgroup({n},{p},order={len(self.elements)})"
        self._generators = tuple(generators) if generators else None
        self._inv_cache: dict = {}

    @property
    def order(self) -> int:
        return len(self.elements)

    @property
    def identity(self) -> Mat:
        return mat_identity(self.n)

    def mult(self, a: Mat, b: Mat) -> Mat:
        return mat_mul(a, b, self.p)

    def inv(self, a: Mat) -> Mat:
        r = self._inv_cache.get(a)
        if r is None:
            r = mat_inv(a, self.p)
            self._inv_cache[a] = r
        return r

    def __contains__(self, g) -> bool:
        return g in self.index

    def __len__(self) -> int:
        return self.order

    def __repr__(self):
        return f"Group({self.name})"

    def generating_set(self):
        """A small generating set, found greedily if none was recorded."""
        if self._generators is None:
            gens: list = []
            have = {self.identity}
            for g in self.elements:
                if g in have:
                    continue
                gens.append(g)
                have = closure(gens, self.p)
                if len(have) == self.order:
                    break
            self._generators = tuple(gens)
        return self._generators

    def conjugate(self, g: Mat, h: Mat) -> Mat:
        """h g h^-1"""
        return self.mult(self.mult(h, g), self.inv(h))


def closure(generators, p: int, cap: int | None = None) -> set:
    """Multiplicative closure of a set of matrices mod p."""
    if not generators:
        return set()
    n = len(generators[0])
    els = {mat_identity(n)}
    els.update(generators)
    frontier = list(els)
    while frontier:
        new = []
        for a in frontier:
            for g in generators:
                c = mat_mul(a, g, p)
                if c not in els:
                    els.add(c)
                    new.append(c)
                    if cap is not None and len(els) > cap:
                        raise CapExceeded("group closure exceeded cap",
                                          reached=len(els), cap=cap)
        frontier = new
    return els


def gl_generators(n: int, p: int):
    """Standard generators: n-cycle permutation, diag(g,1,..,1), transvection."""
    require_prime(p)
    gens = []
    if n == 1:
        if p > 2:
            gens.append(((primitive_root(p),),))
        return gens
    cycle = tuple(tuple(1 if j == (i + 1) % n else 0 for j in range(n)) for i in range(n))
    gens.append(cycle)
    if p > 2:
        g = primitive_root(p)
        gens.append(tuple(tuple(g if i == j == 0 else (1 if i == j else 0)
                                for j in range(n)) for i in range(n)))
    transvection = tuple(tuple(1 if i == j or (i, j) == (0, 1) else 0
                               for j in range(n)) for i in range(n))
    gens.append(transvection)
    return gens


_GL_CACHE: dict = {}


def enumerate_group(n: int, p: int, caps: ResourceCaps | None = None) -> Group:
    """GL_n(F_p) as an explicit Group; the element count is verified against
    the product formula."""
    caps = caps or DEFAULT_CAPS
    key = (n, p)
    if key in _GL_CACHE:
        return _GL_CACHE[key]
    expected = gl_order(n, p)
    caps.check_group(expected, group=f"GL_{n}(F_{p})")
    gens = gl_generators(n, p)
    els = closure(gens, p, cap=expected) if gens else {mat_identity(n)}
    if len(els) != expected:
        raise AssertionError(
            f"GL_{n}(F_{p}) closure produced {len(els)} elements, expected {expected}")
    group = Group(n, p, sorted(els), generators=gens, name=f"GL_{n}(F_{p})")
    _GL_CACHE[key] = group
    return group


gl_group = enumerate_group


def diagonal_d(i: int, a: int, n: int, p: int) -> Mat:
    """D_i(a): the diagonal matrix with a in slot i (1-based) and 1 elsewhere."""
    require_prime(p)
    if a % p == 0:
        raise NotAUnit(f"D_{i}({a}) needs a unit entry mod {p}")
    if not 1 <= i <= n:
        raise ValueError(f"slot {i} out of range 1..{n}")
    return tuple(tuple((a % p) if (r == c == i - 1) else (1 if r == c else 0)
                       for c in range(n)) for r in range(n))


# ---------------------------------------------------------------------------
# orbits


@dataclass
class Orbit:
    rep: object
    stabilizer: list
    size: int
    sign_twist: bool = False


@dataclass
class OrbitDecomposition:
    orbits: list
    basis_size: int

    def __post_init__(self):
        total = sum(o.size for o in self.orbits)
        if total != self.basis_size:
            raise AssertionError(f"orbit sizes sum to {total}, basis has {self.basis_size}")


def orbit_decompose(basis, group: Group, act, signed_act=None) -> OrbitDecomposition:
    """Partition a basis under a group action.

    act(g, b) -> b' is the plain action; signed_act(g, b) -> (b', sign)
    additionally reports the orientation sign, and any stabilizer element
    returning sign -1 marks the orbit as sign-twisted.
    """
    basis = list(basis)
    basis_set = set(basis)
    seen = set()
    orbits = []
    for b in basis:
        if b in seen:
            continue
        stab = []
        members = set()
        twist = False
        for g in group.elements:
            if signed_act is not None:
                img, sign = signed_act(g, b)
            else:
                img, sign = act(g, b), 1
            if img not in basis_set:
                raise ActionClosureError(f"action sends {b} outside the basis (to {img})")
            members.add(img)
            if img == b:
                stab.append(g)
                if sign == -1:
                    twist = True
        if group.order != len(members) * len(stab):
            raise AssertionError("orbit-stabilizer identity violated")
        seen |= members
        orbits.append(Orbit(rep=b, stabilizer=stab, size=len(members), sign_twist=twist))
    return OrbitDecomposition(orbits=orbits, basis_size=len(basis))


# ---------------------------------------------------------------------------
# stabilizers and affine subgroups


def stabilizer_of_e1(n: int, p: int, caps: ResourceCaps | None = None) -> Group:
    """Stabilizer of the column vector e_1 inside GL_n(F_p)."""
    g = enumerate_group(n, p, caps)
    e1 = tuple(1 if i == 0 else 0 for i in range(n))
    els = [m for m in g.elements if mat_vec(m, e1, p) == e1]
    return Group(n, p, els, name=f"Stab_GL_{n}(F_{p})(e1)")


def affine_group(nb: int, mb: int, p: int, caps: ResourceCaps | None = None) -> Group:
    """Block group: identity (nb x nb) top-left, arbitrary top-right,
    invertible (mb x mb) bottom-right, zero bottom-left."""
    caps = caps or DEFAULT_CAPS
    size = nb + mb
    glm = enumerate_group(mb, p, caps) if mb else None
    order = (p ** (nb * mb)) * (glm.order if glm else 1)
    caps.check_group(order, group=f"Aff_{nb},{mb}(F_{p})")
    els = []
    blocks = list(product(range(p), repeat=nb * mb))
    bottom = glm.elements if glm else [()]
    for top in blocks:
        for h in bottom:
            rows = []
            for i in range(nb):
                rows.append(tuple(1 if j == i else 0 for j in range(nb))
                            + tuple(top[i * mb:(i + 1) * mb]))
            for i in range(mb):
                rows.append((0,) * nb + tuple(h[i]))
            els.append(tuple(rows))
    return Group(size, p, sorted(els), name=f"Aff_{nb},{mb}(F_{p})")


def is_affine(subgroup: Group, nb: int, mb: int) -> bool:
    """Does the subgroup equal Aff_{nb,mb} elementwise?"""
    if subgroup.n != nb + mb:
        return False
    aff = affine_group(nb, mb, subgroup.p)
    return set(subgroup.elements) == set(aff.elements)


# ---------------------------------------------------------------------------
# abelianization (H_1 without bar resolutions)


def abelian_invariants(elements, mult, identity) -> HomologyResult:
    """Invariant factors of a finite abelian group given by a multiplication
    law, recovered from its order statistics."""
    order = len(elements)
    if order == 1:
        return HomologyResult(0)
    el_orders = {}
    for x in elements:
        k = 1
        y = x
        while y != identity:
            y = mult(y, x)
            k += 1
        el_orders[x] = k
    n = order
    primes = []
    d = 2
    while d * d <= n:
        if n % d == 0:
            primes.append(d)
            while n % d == 0:
                n //= d
        d += 1
    if n > 1:
        primes.append(n)
    partitions = {}
    for q in primes:
        # the q-part partition lambda is recovered from the counts
        # N_j = #{x : ord(x) divides q^j} = q^{sum_i min(lam_i, j)}
        max_e = 0
        for x in elements:
            o = el_orders[x]
            e = 0
            while o % q == 0:
                o //= q
                e += 1
            max_e = max(max_e, e)
        lam = []
        logs = []
        for j in range(max_e + 1):
            qj = q**j
            nj = sum(1 for x in elements if qj % el_orders[x] == 0)
            lg = 0
            m = nj
            while m > 1:
                assert m % q == 0, "order statistics inconsistent with abelian group"
                m //= q
                lg += 1
            logs.append(lg)
        for j in range(1, max_e + 1):
            # logs[j] - logs[j-1] = #{i : lam_i >= j}
            cnt = logs[j] - logs[j - 1]
            while len(lam) < cnt:
                lam.append(0)
            for i in range(cnt):
                lam[i] += 1
        partitions[q] = sorted(lam, reverse=True)
    height = max(len(v) for v in partitions.values())
    factors = []
    for i in range(height):
        f = 1
        for q, lam in partitions.items():
            if i < len(lam):
                f *= q ** lam[i]
        factors.append(f)
    factors = sorted(factors)
    return HomologyResult(0, tuple(f for f in factors if f >= 2))


@dataclass
class Abelianization:
    """G^{ab} = G/[G,G] with an explicit coset labelling."""

    group: Group
    commutator: frozenset
    labels: dict           # element -> coset label (int)
    coset_reps: list       # label -> representative element
    structure: HomologyResult = dc_field(init=False)

    def __post_init__(self):
        mult = self.coset_mult
        labels = list(range(len(self.coset_reps)))
        self.structure = abelian_invariants(labels, mult, self.label_of(self.group.identity))

    def label_of(self, g: Mat) -> int:
        return self.labels[g]

    def coset_mult(self, a: int, b: int) -> int:
        return self.labels[self.group.mult(self.coset_reps[a], self.coset_reps[b])]


def abelianization(group: Group) -> Abelianization:
    """Compute G/[G,G].  The commutator subgroup is the closure of generator
    commutators, extended by conjugation until normal; since every generator
    used is itself a commutator, the result equals [G,G] exactly."""
    p = group.p
    gens = list(group.generating_set())
    if not gens:
        gens = [group.identity]
    comms = []
    for a in gens:
        for b in gens:
            c = group.mult(group.mult(a, b), group.inv(group.mult(b, a)))
            comms.append(c)
    k = closure(comms, p) if comms else {group.identity}
    while True:
        extra = []
        for s in gens:
            s_inv = group.inv(s)
            for x in list(k):
                conj = group.mult(group.mult(s, x), s_inv)
                if conj not in k:
                    extra.append(conj)
        if not extra:
            break
        comms.extend(extra)
        k = closure(comms, p)
    labels = {}
    reps = []
    for g in group.elements:
        if g in labels:
            continue
        label = len(reps)
        reps.append(g)
        for x in k:
            labels[group.mult(g, x)] = label
    return Abelianization(group=group, commutator=frozenset(k), labels=labels, coset_reps=reps)


def h1_of_group(group: Group) -> HomologyResult:
    """H_1(G; Z) = G^{ab} via the commutator subgroup."""
    return abelianization(group).structure


@dataclass
class InducedH1:
    """ker/coker of H_1(H) -> H_1(G) for a subgroup inclusion."""

    kernel: HomologyResult
    cokernel: HomologyResult
    source: HomologyResult
    target: HomologyResult


def h1_induced(sub: Group, amb: Group, embed=None) -> InducedH1:
    """The map on abelianizations induced by an inclusion (or an embedding
    function sub element -> amb element)."""
    embed = embed or (lambda g: g)
    ab_h = abelianization(sub)
    ab_g = abelianization(amb)
    img_labels = {ab_g.label_of(embed(h)) for h in sub.elements}
    ker_labels = [ab_h.label_of(h) for h in sub.elements
                  if ab_g.label_of(embed(h)) == ab_g.label_of(amb.identity)]
    ker_set = sorted(set(ker_labels))
    kernel = abelian_invariants(ker_set, ab_h.coset_mult, ab_h.label_of(sub.identity))
    # cokernel: quotient of G^{ab} by the image subgroup
    img = sorted(img_labels)
    img_set = set(img)
    coker_label = {}
    coker_reps = []
    for lab in range(len(ab_g.coset_reps)):
        if lab in coker_label:
            continue
        cid = len(coker_reps)
        coker_reps.append(lab)
        for i in img:
            coker_label[ab_g.coset_mult(lab, i)] = cid
    def cmult(a, b):
        return coker_label[ab_g.coset_mult(coker_reps[a], coker_reps[b])]
    cokernel = abelian_invariants(list(range(len(coker_reps))), cmult,
                                  coker_label[ab_g.label_of(amb.identity)])
    return InducedH1(kernel=kernel, cokernel=cokernel,
                     source=ab_h.structure, target=ab_g.structure)


def embed_gl(g: Mat, n_target: int) -> Mat:
    """Standard embedding: pad with an identity block at the bottom right."""
    n = len(g)
    rows = [tuple(row) + (0,) * (n_target - n) for row in g]
    for i in range(n, n_target):
        rows.append(tuple(1 if j == i else 0 for j in range(n_target)))
    return tuple(rows)
