"""Diagonal arguments: Cantor on finite sets, Lawvere on finite rgraphs."""

from __future__ import annotations

import itertools
import random
from collections.abc import Callable, Hashable, Iterable, Sequence
from dataclasses import dataclass, field
from typing import Any

from .core import (
    BudgetExceeded,
    RGraph,
    RGraphMorphism,
    ShapeError,
    compose,
    get_budget,
    hom,
    identity,
    k2_graph,
    morphism_problems,
    sample_hom,
    swap_k2,
)
from .reports import CheckReport, Verdict
from .topos import ExponentialBundle, exponential, global_element, global_elements, pair

DEFAULT_CANTOR_BOUND = 4


@dataclass(frozen=True)
class FinFunction:
    """A total function between finite sets of hashable labels."""

    domain: tuple
    codomain: tuple
    pairs: tuple

    def __post_init__(self) -> None:
        keys = [x for x, _ in self.pairs]
        if len(set(keys)) != len(keys):
            raise ValueError("FinFunction: an argument is assigned twice")
        if set(keys) != set(self.domain):
            missing = [x for x in self.domain if x not in set(keys)]
            raise ValueError(f"FinFunction: not total, missing {missing!r}")
        cod = set(self.codomain)
        bad = [y for _, y in self.pairs if y not in cod]
        if bad:
            raise ValueError(f"FinFunction: values {bad!r} outside the codomain")

    @classmethod
    def from_map(cls, domain: Iterable, codomain: Iterable, mapping: dict) -> FinFunction:
        domain = tuple(domain)
        return cls(domain, tuple(codomain), tuple((x, mapping[x]) for x in domain if x in mapping))

    def __call__(self, x: Hashable) -> Any:
        for k, y in self.pairs:
            if k == x:
                return y
        raise KeyError(x)

    def image(self) -> set:
        return {y for _, y in self.pairs}


def chi(domain: Sequence, subset: Iterable) -> FinFunction:
    """Characteristic function of ``subset`` as a map into {0, 1}."""
    sub = set(subset)
    return FinFunction(tuple(domain), (0, 1), tuple((x, 1 if x in sub else 0) for x in domain))


def power_set_functions(domain: Sequence) -> list[FinFunction]:
    """All of 2^S, ordered by bitmask with domain[0] as the low bit."""
    n = len(domain)
    return [chi(domain, [domain[i] for i in range(n) if mask >> i & 1]) for mask in range(1 << n)]


@dataclass(frozen=True)
class Comparison:
    at: Any
    image_value: Any
    missed_value: Any

    @property
    def differs(self) -> bool:
        return self.image_value != self.missed_value


@dataclass
class DiagonalReport:
    """The missed point of a diagonal construction and the coordinate-wise
    comparisons that show it is missed.  ``replay`` recomputes them."""

    input: Any
    missed_point: Any
    transcript: list[Comparison]
    hypothesis_holds: bool = True
    note: str = ""
    details: dict[str, Any] = field(default_factory=dict)
    evaluate: Callable[[Any], tuple[Any, Any]] | None = field(default=None, repr=False)

    @property
    def verified(self) -> bool:
        return (
            self.hypothesis_holds
            and self.missed_point is not None
            and all(c.differs for c in self.transcript)
        )

    def replay(self) -> bool:
        if self.evaluate is None:
            return self.verified
        for c in self.transcript:
            if self.evaluate(c.at) != (c.image_value, c.missed_value):
                return False
        return self.verified


def _check_power_family(f: FinFunction) -> None:
    s = set(f.domain)
    for x, fx in f.pairs:
        if not isinstance(fx, FinFunction):
            raise ValueError(f"f({x!r}) is not a function on S")
        if set(fx.domain) != s:
            raise ValueError(f"f({x!r}) is not defined on exactly S")
        if not fx.image() <= {0, 1}:
            raise ValueError(f"f({x!r}) is not 0/1-valued")


def cantor_diagonal_set(f: FinFunction) -> frozenset:
    """{x in S : f(x)(x) = 0} for f: S -> 2^S."""
    _check_power_family(f)
    return frozenset(x for x, fx in f.pairs if fx(x) == 0)


def cantor_diagonal(f: FinFunction) -> DiagonalReport:
    """Diagonal set of f together with a check that its characteristic
    function is outside the image of f."""
    a = cantor_diagonal_set(f)
    missed = chi(f.domain, a)

    def evaluate(x):
        return f(x)(x), missed(x)

    transcript = [Comparison(x, *evaluate(x)) for x in f.domain]
    report = DiagonalReport(f, missed, transcript, evaluate=evaluate)
    report.details["diagonal_set"] = sorted(a, key=f.domain.index)
    report.details["in_image"] = missed in f.image()
    return report


def cantor_exhaustive_check(n: int, bound: int = DEFAULT_CANTOR_BOUND) -> CheckReport:
    """Every f: S -> 2^S with |S| = n; none is onto and each misses its diagonal.

    Subsets are bitmasks; surjectivity is decided by image size alone, which
    is independent of the diagonal construction.
    """
    if n < 0 or n > bound:
        raise BudgetExceeded(f"cantor size {n}", n, bound)
    report = CheckReport(f"cantor n={n}")
    size = 1 << n
    surjections = 0
    diagonal_misses = 0
    for f in itertools.product(range(size), repeat=n):
        report.checked += 1
        if len(set(f)) == size:
            surjections += 1
            report.fail(function=list(f), problem="surjective")
        diag = 0
        for x in range(n):
            if not f[x] >> x & 1:
                diag |= 1 << x
        witnessed = all((diag >> x & 1) != (f[x] >> x & 1) for x in range(n))
        if witnessed and diag not in f:
            diagonal_misses += 1
        else:
            report.fail(function=list(f), problem="diagonal set is hit")
    report.details.update(
        {
            "size": n,
            "functions_checked": report.checked,
            "expected_functions": size**n,
            "surjections": surjections,
            "diagonal_misses": diagonal_misses,
        }
    )
    return report


@dataclass
class Step2Witness:
    domain: tuple
    image: list[FinFunction]
    injective: bool
    surjective: bool
    witness: FinFunction
    witness_set: frozenset
    witness_set_in_domain: bool
    explanation: str

    def to_dict(self) -> dict[str, Any]:
        return {
            "domain": list(self.domain),
            "image_size": len(self.image),
            "codomain_size": 2 ** len(self.domain),
            "injective": self.injective,
            "surjective": self.surjective,
            "witness": {str(x): y for x, y in self.witness.pairs},
            "witness_set": sorted(self.witness_set, key=self.domain.index),
            "witness_set_in_domain": self.witness_set_in_domain,
            "explanation": self.explanation,
        }


def cantor_step2_witness(domain: Sequence) -> Step2Witness:
    """F(x) = chi_{x} on a finite set of opaque labels.

    F is injective but not onto: the witness g has defining set
    {x : g(x) = 1}, which is not itself a member of the domain, so
    F cannot be applied to it.  Onto-ness would need every subset of S
    to be an element of S.
    """
    s = tuple(domain)
    image = [chi(s, [x]) for x in s]
    everything = power_set_functions(s)
    hit = set(image)
    missing = [g for g in everything if g not in hit]
    witness = missing[0]
    wset = frozenset(x for x, y in witness.pairs if y == 1)
    in_domain = any(wset == x for x in s)
    return Step2Witness(
        domain=s,
        image=image,
        injective=len(hit) == len(s),
        surjective=not missing,
        witness=witness,
        witness_set=wset,
        witness_set_in_domain=in_domain,
        explanation=(
            f"F(x) = chi_{{x}} reaches {len(hit)} of {len(everything)} characteristic functions; "
            f"the set {{x : g(x) = 1}} = {sorted(map(str, wset))} is not an element of S, "
            "so surjectivity would require S to contain all of its subsets"
        ),
    )


# rgraph side


def fixed_global_elements(g: RGraphMorphism) -> list[RGraphMorphism]:
    """Global elements b of B with g o b = b."""
    if g.domain != g.codomain:
        raise ShapeError("fixed_global_elements needs an endomorphism")
    return [b for _, b in global_elements(g.domain) if compose(g, b) == b]


def is_onto_for_global_elements(f: RGraphMorphism) -> Verdict:
    """Point-surjectivity; the witness is the first missed 1 -> B when false."""
    hit = set(f.vmap)
    b = f.codomain
    for i, v in enumerate(b.vertices):
        if i not in hit:
            return Verdict(False, global_element(b, v))
    return Verdict(True, None)


def lawvere_missed_point(
    f: RGraphMorphism, g: RGraphMorphism, bundle: ExponentialBundle
) -> DiagonalReport:
    """Given F: A -> B^A and an endomorphism g of B, build
    q = g o eval o <F, id_A> and certify that the point of B^A naming q is
    not F of any point of A, provided g moves every point."""
    a, b = bundle.power, bundle.base
    if f.domain != a or f.codomain != bundle.object:
        raise ShapeError("lawvere: F must be A -> B^A for the given bundle")
    if g.domain != b or g.codomain != b:
        raise ShapeError("lawvere: g must be an endomorphism of B")

    fixed = fixed_global_elements(g)
    if fixed:
        return DiagonalReport(
            input=f,
            missed_point=None,
            transcript=[],
            hypothesis_holds=False,
            note="g has fixed points; no claim made",
            details={"fixed_points": [b.vertices[p.vmap[0]] for p in fixed]},
        )

    diag = pair(f, identity(a), bundle.product)
    q = compose(g, compose(bundle.eval, diag))
    name = bundle.name_of(q)
    missed = global_element(bundle.object, bundle.object.vertices[name])

    def evaluate(i):
        phi = bundle.morphism_at(f.vmap[i])
        return phi.vmap[i], q.vmap[i]

    transcript = [Comparison(i, *evaluate(i)) for i in range(a.n_vertices)]
    report = DiagonalReport(f, missed, transcript, evaluate=evaluate)
    report.details.update(
        {
            "q_vertex_map": q.vertex_map,
            "q_valid": not morphism_problems(q),
            "missed_vertex": bundle.object.vertices[name],
            "image": sorted({bundle.object.vertices[i] for i in f.vmap}),
            "missed_in_image": name in set(f.vmap),
        }
    )
    if name in set(f.vmap):
        report.note = "named point lies in the image"
        report.hypothesis_holds = False
    return report


def lawvere_sweep(
    a: RGraph,
    sample: int | None = None,
    seed: int | None = None,
    budget: int | None = None,
) -> tuple[ExponentialBundle, list[tuple[RGraphMorphism, DiagonalReport]], bool]:
    """Run the missed-point construction with g = swap over F: A -> K2^A.

    Exhaustive unless the hom-set is over budget and ``sample`` is given;
    the returned flag says whether sampling was used.
    """
    limit = get_budget(budget)
    bundle = exponential(k2_graph(), a, limit)
    swap = swap_k2()
    try:
        fs = list(hom(a, bundle.object, limit))
        sampled = False
    except BudgetExceeded:
        if sample is None:
            raise
        fs = sample_hom(a, bundle.object, sample, random.Random(seed))
        sampled = True
    return bundle, [(f, lawvere_missed_point(f, swap, bundle)) for f in fs], sampled


def no_point_surjection_theorem(
    a: RGraph,
    sample: int | None = None,
    seed: int | None = None,
    budget: int | None = None,
) -> CheckReport:
    """No F: A -> K2^A is onto for global elements.

    Two routes must agree for every F: the constructive missed point from
    the swap of K2, and a direct scan of the image.
    """
    bundle, results, sampled = lawvere_sweep(a, sample, seed, budget)
    report = CheckReport(f"no-surjection {a.name}", exhaustive=not sampled)
    points = bundle.object.n_vertices
    report.details["certificate"] = {
        "points_of_exponential": points,
        "two_to_vertices": 2**a.n_vertices,
        "vertices_of_A": a.n_vertices,
        "holds": points == 2**a.n_vertices and points > a.n_vertices,
    }
    if not report.details["certificate"]["holds"]:
        report.fail(problem="counting certificate fails")
    agree = 0
    for f, rep in results:
        report.checked += 1
        onto = is_onto_for_global_elements(f)
        ok = (not onto.holds) == rep.verified and rep.replay()
        if ok and rep.missed_point is not None and rep.missed_point.vmap[0] in set(f.vmap):
            ok = False
        if ok:
            agree += 1
        else:
            report.fail(F=f.vertex_map, problem="constructive and direct checks disagree")
        if onto.holds:
            report.fail(F=f.vertex_map, problem="F is onto for global elements")
    report.details.update(
        {
            "A": a.name,
            "exponential": bundle.object.name,
            "morphisms_checked": report.checked,
            "agreements": agree,
            "sampled": sampled,
        }
    )
    return report
