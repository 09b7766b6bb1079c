"""
Grassmann subalgebras inside regular algebras, the direct system they form, the Types I-IV
classification of finitely generated subalgebras and the variety-equivalence check for envelopes.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations
from typing import Dict, List, Sequence, Tuple
import logging

from .algebra import (
    Element,
    GradedAlgebra,
    GradedMap,
    Structure,
    generated_subalgebra,
    identity_map,
    is_commutative,
    is_graded_homomorphism,
    is_injective,
    map_compose,
    multiply,
    require_homogeneous,
)
from .errors import (
    BadParams,
    GroupMismatch,
    IndependenceFailure,
    InvariantViolation,
    NotBetaCommutative,
    NoWitness,
    PreconditionViolated,
    TooLarge,
)
from .grassmann import (
    MAX_MATERIALIZED,
    EnvelopeSpec,
    blade_indices,
    blade_parity,
    envelope,
    materialize,
    truncation_bound,
)
from .groups import EVEN, ODD, Z2, format_element
from .identities import satisfies_grassmann_identities
from .linalg import SpanBasis
from .radical import jacobson_radical
from .regularity import GRASSMANN_TABLE, extract_partial_bicharacter, find_witness, regularity_index
from .steps import aggregate_step, step

logger = logging.getLogger(__name__)

# highest identity degree the variety check certifies
MAX_IDENTITY_DEGREE = 5


def _require_grassmann_bicharacter(algebra: GradedAlgebra) -> None:
    if not algebra.group.is_z2():
        raise PreconditionViolated(f"{algebra.name} is {algebra.group}-graded; a Z2-grading is required")
    try:
        determined = extract_partial_bicharacter(algebra)
    except NotBetaCommutative as exc:
        raise PreconditionViolated(f"{algebra.name} is not beta-commutative: {exc}") from exc
    for pair, value in determined.items():
        if GRASSMANN_TABLE[pair] != value:
            g, h = pair
            raise PreconditionViolated(
                f"beta({format_element(g)}, {format_element(h)}) = {value} in {algebra.name}, "
                f"the Grassmann bicharacter has {GRASSMANN_TABLE[pair]}"
            )


def _monomial_label(mask: int, prefix: str = "a") -> str:
    if not mask:
        return "1"
    return "".join(f"{prefix}{i}" for i in blade_indices(mask))


# ---------------------------------------------------------------------------------------------------------------
# F_n and the direct system


@dataclass(frozen=True)
class GrassmannWitness:
    ambient: GradedAlgebra
    n: int
    generators: Tuple[Element, ...]
    monomials: Tuple[Element, ...]
    f_n: GradedAlgebra
    inclusion: GradedMap
    nu: GradedMap

    def to_dict(self) -> Dict[str, object]:
        return {
            "n": self.n,
            "generators": [str(g) for g in self.generators],
            "dim": self.f_n.dim,
            "nu_isomorphism": True,
            "inclusion_injective": True,
        }


def build_F_n(algebra: GradedAlgebra, n: int) -> GrassmannWitness:
    """
    The subalgebra F_n spanned by the monomials in n odd generators with a nonzero product.

    The generators are the lexicographically first witness of the all-odd tuple of length n. The
    2^n increasing monomials are indexed by bit masks exactly like the basis of ``materialize(n)``,
    so nu sends monomial S to e_S.
    """
    if n < 0:
        raise BadParams(f"n must be >= 0, got {n}")
    if n > MAX_MATERIALIZED:
        raise TooLarge("n", n, MAX_MATERIALIZED)
    _require_grassmann_bicharacter(algebra)
    witness = find_witness(algebra, [ODD] * n)
    if witness is None:
        raise NoWitness([ODD] * n)
    generators = tuple(algebra.basis_element(i) for i in witness)
    size = 1 << n

    monomials: List[Element] = [algebra.one()]
    for mask in range(1, size):
        top = mask.bit_length() - 1
        monomials.append(multiply(monomials[mask ^ (1 << top)], generators[top]))
    span = SpanBasis()
    for m in monomials:
        span.add(m.coeffs)
    if span.rank != size:
        raise IndependenceFailure(span.rank, size)

    structure: Structure = {}
    for a in range(size):
        for b in range(size):
            prod = multiply(monomials[a], monomials[b])
            if not prod:
                continue
            coords = span.coordinates(prod.coeffs)
            if coords is None:
                raise InvariantViolation(f"F_{n} is not closed under multiplication at ({a}, {b})")
            structure[(a, b)] = coords
    for mask, m in enumerate(monomials):
        if not m.is_homogeneous((blade_parity(mask),)):
            raise InvariantViolation(f"monomial {_monomial_label(mask)} is not of parity {blade_parity(mask)}")
    f_n = GradedAlgebra(
        group=Z2,
        basis_labels=tuple(_monomial_label(mask) for mask in range(size)),
        grades=tuple((blade_parity(mask),) for mask in range(size)),
        structure=structure,
        unit={0: 1},
        name=f"F{n}({algebra.name})",
    )
    e_n = materialize(n)
    inclusion = GradedMap(f_n, algebra, tuple(monomials), name=f"incl_{n}")
    nu = GradedMap(f_n, e_n, tuple(e_n.basis()), name=f"nu_{n}")

    with aggregate_step(f"verify F_{n} of {algebra.name}"):
        with step(f"nu_{n} is a graded homomorphism"):
            verdict = is_graded_homomorphism(nu)
            if not verdict.holds:
                raise InvariantViolation(f"nu_{n} fails at {verdict.witness}: {verdict.reason}")
        with step(f"nu_{n} is bijective"):
            if f_n.dim != e_n.dim or not is_injective(nu):
                raise InvariantViolation(f"nu_{n} is not bijective")
        with step(f"inclusion into {algebra.name} is an injective graded homomorphism"):
            verdict = is_graded_homomorphism(inclusion)
            if not verdict.holds:
                raise InvariantViolation(f"the inclusion fails at {verdict.witness}: {verdict.reason}")
            if not is_injective(inclusion):
                raise InvariantViolation("the inclusion is not injective")
    logger.debug("built F_%d in %s with generators %s", n, algebra.name, [str(g) for g in generators])
    return GrassmannWitness(algebra, n, generators, tuple(monomials), f_n, inclusion, nu)


@dataclass
class DirectSystemChain:
    stages: List[GrassmannWitness]
    maps: Dict[Tuple[int, int], GradedMap] = field(default_factory=dict)
    checked_triples: int = 0

    @property
    def n_max(self) -> int:
        return len(self.stages)

    def stage(self, n: int) -> GrassmannWitness:
        return self.stages[n - 1]

    def phi(self, m: int, n: int) -> GradedMap:
        """phi_m^n: F_n -> F_m for n <= m."""
        return self.maps[(n, m)]

    def to_dict(self) -> Dict[str, object]:
        return {
            "n_max": self.n_max,
            "stages": [s.to_dict() for s in self.stages],
            "maps_verified": len(self.maps),
            "composition_triples_verified": self.checked_triples,
        }


def build_chain(algebra: GradedAlgebra, n_max: int) -> DirectSystemChain:
    """
    F_1, ..., F_{n_max} with the maps phi_m^n sending a_{i1,n}...a_{ik,n} to a_{i1,m}...a_{ik,m}.

    Every map and every composition law phi_m^n phi_n^p = phi_m^p is checked; all failures are
    collected before raising.
    """
    if n_max < 1:
        raise BadParams(f"n_max must be >= 1, got {n_max}")
    stages = [build_F_n(algebra, n) for n in range(1, n_max + 1)]
    chain = DirectSystemChain(stages)
    for n in range(1, n_max + 1):
        for m in range(n, n_max + 1):
            source = chain.stage(n).f_n
            target = chain.stage(m).f_n
            images = tuple(target.basis_element(mask) for mask in range(source.dim))
            chain.maps[(n, m)] = GradedMap(source, target, images, name=f"phi_{m}^{n}")

    with aggregate_step(f"verify the direct system of {algebra.name} up to {n_max}"):
        for (n, m), phi in chain.maps.items():
            with step(f"phi_{m}^{n} is an injective graded homomorphism"):
                verdict = is_graded_homomorphism(phi)
                if not verdict.holds:
                    raise InvariantViolation(f"phi_{m}^{n} fails at {verdict.witness}: {verdict.reason}")
                if not is_injective(phi):
                    raise InvariantViolation(f"phi_{m}^{n} is not injective")
            if n == m:
                with step(f"phi_{n}^{n} is the identity"):
                    if phi != identity_map(chain.stage(n).f_n):
                        raise InvariantViolation(f"phi_{n}^{n} is not the identity")
        for p in range(1, n_max + 1):
            for n in range(p, n_max + 1):
                for m in range(n, n_max + 1):
                    with step(f"phi_{m}^{n} phi_{n}^{p} = phi_{m}^{p}"):
                        composed = map_compose(chain.phi(m, n), chain.phi(n, p))
                        if composed.matrix() != chain.phi(m, p).matrix():
                            raise InvariantViolation(f"composition law fails for (p, n, m) = ({p}, {n}, {m})")
                    chain.checked_triples += 1
    return chain


def embed_grassmann(algebra: GradedAlgebra, n: int) -> GradedMap:
    """The injective graded homomorphism E_n -> A, the inclusion of F_n after the inverse of nu."""
    if n == 0:
        k = materialize(0)
        return GradedMap(k, algebra, (algebra.one(),), name="embed_0")
    witness = build_F_n(algebra, n)
    e_n = witness.nu.target
    embedding = GradedMap(e_n, algebra, witness.monomials, name=f"embed_{n}")
    with aggregate_step(f"verify the embedding of E_{n} into {algebra.name}"):
        with step("embedding is a graded homomorphism"):
            verdict = is_graded_homomorphism(embedding)
            if not verdict.holds:
                raise InvariantViolation(f"embedding fails at {verdict.witness}: {verdict.reason}")
        with step("embedding is injective"):
            if not is_injective(embedding):
                raise InvariantViolation("embedding is not injective")
    return embedding


# ---------------------------------------------------------------------------------------------------------------
# classification


@dataclass
class TypeReport:
    type_tag: str
    n: int
    q: int
    l: int
    r: int
    leftover_dim: int
    t_blocks: int
    witnesses: Dict[str, List[str]]
    C_generators: List[str]
    C_basis: List[str]
    odd_monomials: List[Tuple[Tuple[int, ...], str]]
    removed: List[str]

    def to_dict(self) -> Dict[str, object]:
        return {
            "type": self.type_tag,
            "n": self.n,
            "q": self.q,
            "l": self.l,
            "r": self.r,
            "leftover_dim": self.leftover_dim,
            "t_blocks": self.t_blocks,
            "witnesses": self.witnesses,
            "C_generators": self.C_generators,
            "C_basis": self.C_basis,
            "odd_monomials": [{"generators": list(ix), "value": v} for ix, v in self.odd_monomials],
            "removed": self.removed,
        }


def reduce_generators(algebra: GradedAlgebra, generators: Sequence[Element]) -> Tuple[List[Element], List[Element]]:
    """Drop, in order, every generator lying in the subalgebra generated by the remaining ones."""
    kept = list(generators)
    removed: List[Element] = []
    i = 0
    while i < len(kept):
        others = kept[:i] + kept[i + 1 :]
        if generated_subalgebra(algebra, others).contains(kept[i]):
            logger.info("generator %s lies in the subalgebra generated by the others; removed", kept[i])
            removed.append(kept.pop(i))
        else:
            i += 1
    return kept, removed


def _nonzero_odd_products(odd: Sequence[Element]) -> List[Tuple[Tuple[int, ...], Element]]:
    """Every increasing-index product of odd generators that is nonzero, grown from nonzero prefixes."""
    found: List[Tuple[Tuple[int, ...], Element]] = []
    frontier: List[Tuple[Tuple[int, ...], Element]] = [((i,), g) for i, g in enumerate(odd)]
    while frontier:
        found.extend(frontier)
        nxt: List[Tuple[Tuple[int, ...], Element]] = []
        for indices, value in frontier:
            for j in range(indices[-1] + 1, len(odd)):
                extended = multiply(value, odd[j])
                if extended:
                    nxt.append((indices + (j,), extended))
        frontier = nxt
    return found


def classify_subalgebra(algebra: GradedAlgebra, generators: Sequence[Element]) -> TypeReport:
    """
    Type of the subalgebra generated by homogeneous elements of a Z2-algebra with the Grassmann bicharacter.

    Generators are reduced first. With q even and n - q odd generators, l is the longest nonzero
    increasing product of odd generators. Type I: q = n. Type II: l = n - q. Type III: the odd
    generators outside one longest product annihilate each other. Type IV: pairs (u, v) with
    a_u a_v outside the current span are split off greedily as E_2^+ blocks.
    """
    require_homogeneous(generators)
    _require_grassmann_bicharacter(algebra)
    kept, removed = reduce_generators(algebra, generators)
    evens = [g for g in kept if g.degree() == EVEN]
    odd = [g for g in kept if g.degree() == ODD]
    n, q = len(kept), len(evens)
    c_space = generated_subalgebra(algebra, evens)
    monomials = _nonzero_odd_products(odd)

    def report(type_tag: str, l: int, witnesses: Dict[str, List[str]], **counts: int) -> TypeReport:
        return TypeReport(
            type_tag=type_tag,
            n=n,
            q=q,
            l=l,
            r=counts.get("r", 0),
            leftover_dim=counts.get("leftover_dim", 0),
            t_blocks=counts.get("t_blocks", 0),
            witnesses=witnesses,
            C_generators=[str(g) for g in evens],
            C_basis=[str(b) for b in c_space.basis()],
            odd_monomials=[(tuple(i + 1 for i in ix), str(v)) for ix, v in monomials],
            removed=[str(g) for g in removed],
        )

    if not odd:
        return report("I", 0, {})
    l = max(len(ix) for ix, _ in monomials)
    chosen = next(ix for ix, _ in monomials if len(ix) == l)
    remaining = [i for i in range(len(odd)) if i not in chosen]
    witnesses: Dict[str, List[str]] = {"E_l": [str(odd[i]) for i in chosen]}
    if l == len(odd):
        return report("II", l, witnesses)
    if l == 1:
        return report("III", 1, {"E_1": [str(odd[0])], "T": [str(g) for g in odd[1:]]}, t_blocks=len(odd) - 1)

    pairs_alive = [(u, v) for u, v in combinations(remaining, 2) if multiply(odd[u], odd[v])]
    if not pairs_alive:
        witnesses["T"] = [str(odd[i]) for i in remaining]
        return report("III", l, witnesses, t_blocks=len(remaining))

    span = generated_subalgebra(algebra, [odd[i] for i in chosen]).span_basis()
    used: List[int] = []
    blocks = 0
    for u, v in pairs_alive:
        if u in used or v in used:
            continue
        uv = multiply(odd[u], odd[v])
        if span.contains(uv.coeffs):
            continue
        for e in (odd[u], odd[v], uv):
            span.add(e.coeffs)
        used.extend((u, v))
        blocks += 1
        witnesses[f"E2+_{blocks}"] = [str(odd[u]), str(odd[v])]
    leftover = [i for i in remaining if i not in used]
    witnesses["D"] = [str(odd[i]) for i in leftover]
    leftover_dim = len(odd) - l - 2 * blocks
    if leftover_dim != len(leftover):
        raise InvariantViolation(f"leftover count {len(leftover)} differs from (n - q) - l - 2r = {leftover_dim}")
    return report("IV", l, witnesses, r=blocks, leftover_dim=leftover_dim)


# ---------------------------------------------------------------------------------------------------------------
# variety equivalence


@dataclass
class VarietyVerdict:
    algebra: str
    commutative: bool
    odd_escapes_radical: bool
    envelope_truncation: int
    envelope_satisfies_generators: bool
    envelope_k_regular_up_to: int
    c_regular_up_to: int
    c_regularity_bound: int

    @property
    def equivalent(self) -> bool:
        return self.commutative and self.odd_escapes_radical

    @property
    def envelope_side(self) -> bool:
        return self.envelope_satisfies_generators and self.envelope_k_regular_up_to == self.envelope_truncation

    @property
    def regular_surrogate(self) -> bool:
        return self.commutative and self.c_regular_up_to == self.c_regularity_bound

    @property
    def surrogates_agree(self) -> bool:
        return self.equivalent == self.envelope_side == self.regular_surrogate

    def to_dict(self) -> Dict[str, object]:
        return {
            "algebra": self.algebra,
            "commutative": self.commutative,
            "odd_escapes_radical": self.odd_escapes_radical,
            "envelope_truncation": self.envelope_truncation,
            "envelope_satisfies_generators": self.envelope_satisfies_generators,
            "envelope_k_regular_up_to": self.envelope_k_regular_up_to,
            "c_regularity": f"regular (certified up to {self.c_regularity_bound})"
            if self.c_regular_up_to == self.c_regularity_bound
            else f"not {self.c_regular_up_to + 1}-regular",
            "equivalent": self.equivalent,
            "surrogates_agree": self.surrogates_agree,
        }


def variety_equivalence_check(c: GradedAlgebra) -> VarietyVerdict:
    """
    Desk-scale comparison of: C commutative with odd part outside J(C); the envelope E_N(C) satisfying
    the Grassmann identities and being N-regular; C commutative and regular up to dim C + 1.
    N is the truncation bound for identities of degree MAX_IDENTITY_DEGREE.

    Radicals whose odd part has nilpotency index above the truncation can make the envelope side
    look regular while the other two say no.
    """
    if not c.group.is_z2():
        raise GroupMismatch(f"variety checks need a Z2-graded algebra, got {c.group}")
    commutative = is_commutative(c).commutative
    radical = jacobson_radical(c)
    escapes = c.component_dims()[ODD] > radical.component_dim(ODD)
    n = truncation_bound(MAX_IDENTITY_DEGREE, c)
    env = envelope(EnvelopeSpec(c, n))
    generators_hold = satisfies_grassmann_identities(env).holds
    env_regular = regularity_index(env, n)
    bound = c.dim + 1
    verdict = VarietyVerdict(
        algebra=c.name,
        commutative=commutative,
        odd_escapes_radical=escapes,
        envelope_truncation=n,
        envelope_satisfies_generators=generators_hold,
        envelope_k_regular_up_to=env_regular,
        c_regular_up_to=regularity_index(c, bound),
        c_regularity_bound=bound,
    )
    if not verdict.surrogates_agree:
        logger.warning("variety surrogates disagree for %s: %s", c.name, verdict.to_dict())
    return verdict

