"""Divisor classes in the x/f/h bases and the degree of top products.

The degree of ``D_1 ··· D_n`` is computed by intersecting the weight-1 top
cycle with one divisor at a time.  A divisor with X-coefficients ``c(S)`` is
the piecewise linear function taking value ``c(S)`` on the ray of ``S``;
intersecting a balanced k-cycle ``w`` with it gives the (k-1)-cycle

    w'(τ) = Σ_{σ ⊃ τ} w(σ) c(σ∖τ) - φ_τ(Σ_{σ ⊃ τ} w(σ) u_{σ∖τ})

where ``φ_τ`` is the linear extension of the function from the rays of τ.
After n steps only the origin is left and its weight is the degree.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Mapping, Sequence

from .errors import HypothesisViolated, InputError, InternalConsistencyError
from .fan import Fan, WeightedCycle, build_fan, check_balancing
from .ground import Chain, GroundSet, bits, subsets_of, transversal_count

BASES = ("X", "F", "H")


def _clean(value) -> Fraction | int:
    value = Fraction(value)
    return value.numerator if value.denominator == 1 else value


class Divisor:
    """A degree-one class: rational coefficients on nonempty colored sets in one basis."""

    __slots__ = ("ground", "basis", "coeffs", "_key")

    def __init__(self, ground: GroundSet, basis: str, coeffs: Mapping[int, object] = ()):
        if basis not in BASES:
            raise InputError(f"unknown basis {basis!r}; expected one of {BASES}")
        clean = {}
        for s, v in dict(coeffs).items():
            if s == 0:
                if v:
                    raise InputError("the empty set carries no divisor coefficient")
                continue
            if not ground.is_colored(s) or s & ~ground.full_mask:
                raise InputError(f"coefficient on a set that is not colored: {s}")
            v = _clean(v)
            if v:
                clean[s] = v
        self.ground = ground
        self.basis = basis
        self.coeffs: dict[int, Fraction | int] = clean
        self._key = None

    @classmethod
    def x(cls, ground: GroundSet, mask: int) -> "Divisor":
        return cls(ground, "X", {mask: 1})

    @classmethod
    def f(cls, ground: GroundSet, mask: int) -> "Divisor":
        return cls(ground, "F", {mask: 1})

    @classmethod
    def h(cls, ground: GroundSet, mask: int) -> "Divisor":
        return cls(ground, "H", {mask: 1})

    @property
    def key(self) -> tuple:
        if self._key is None:
            self._key = (self.basis, tuple(sorted(self.coeffs.items())))
        return self._key

    def __eq__(self, other: object) -> bool:
        return isinstance(other, Divisor) and self.ground == other.ground and self.key == other.key

    def __hash__(self) -> int:
        return hash(self.key)

    def __repr__(self) -> str:
        terms = " + ".join(f"{v}·{self.basis.lower()}{self.ground.format(s)}" for s, v in sorted(self.coeffs.items()))
        return f"Divisor({terms or '0'})"

    def coefficient(self, mask: int) -> Fraction | int:
        return self.coeffs.get(mask, 0)

    def _combine(self, other: "Divisor", sign: int) -> "Divisor":
        if self.ground != other.ground:
            raise InputError("divisors live on different ground sets")
        if other.basis != self.basis:
            other = convert(other, self.basis)
        out = dict(self.coeffs)
        for s, v in other.coeffs.items():
            out[s] = out.get(s, 0) + sign * v
        return Divisor(self.ground, self.basis, out)

    def __add__(self, other: "Divisor") -> "Divisor":
        return self._combine(other, 1)

    def __sub__(self, other: "Divisor") -> "Divisor":
        return self._combine(other, -1)

    def __mul__(self, scalar) -> "Divisor":
        return Divisor(self.ground, self.basis, {s: v * scalar for s, v in self.coeffs.items()})

    __rmul__ = __mul__


def _x_to_f(g: GroundSet, c: Mapping[int, object]) -> dict[int, object]:
    # Möbius inversion of c(Z) = Σ_{∅≠T⊆Z} b_T
    out = {}
    for t in g.nonempty_sets:
        total = 0
        for u in subsets_of(t):
            if u and u in c:
                total += c[u] if (t.bit_count() - u.bit_count()) % 2 == 0 else -c[u]
        out[t] = total
    return out


def _f_to_x(g: GroundSet, b: Mapping[int, object]) -> dict[int, object]:
    out = {}
    for z in g.nonempty_sets:
        out[z] = sum(b[t] for t in subsets_of(z) if t and t in b)
    return out


def _superset_alternating(g: GroundSet, coeffs: Mapping[int, object]) -> dict[int, object]:
    # F→H and H→F share the same shape: out_T = (-1)^{|T|+1} Σ_{S⊇T} in_S
    out = {}
    for t in g.nonempty_sets:
        total = sum(coeffs[s] for s in g.supersets(t) if s in coeffs)
        out[t] = total if t.bit_count() % 2 == 1 else -total
    return out


def convert(divisor: Divisor, target: str) -> Divisor:
    """The same class expressed in another basis."""
    if target not in BASES:
        raise InputError(f"unknown basis {target!r}")
    g, coeffs, basis = divisor.ground, divisor.coeffs, divisor.basis
    if basis == target:
        return divisor
    # route everything through F, the middle of X ↔ F ↔ H
    if basis == "X":
        coeffs = _x_to_f(g, coeffs)
    elif basis == "H":
        coeffs = _superset_alternating(g, coeffs)
    if target == "X":
        coeffs = _f_to_x(g, coeffs)
    elif target == "H":
        coeffs = _superset_alternating(g, coeffs)
    return Divisor(g, target, coeffs)


def restrict_to_boolean(divisor: Divisor, top: int) -> dict[int, Fraction | int]:
    """Minkowski coefficients a^T_S = Σ_{S' : S'∩T = S} a_{S'} for nonempty S ⊆ T."""
    g = divisor.ground
    if not g.is_maximal(top):
        raise InputError(f"{g.format(top)} is not a maximal colored set")
    a = convert(divisor, "H").coeffs
    out: dict[int, Fraction | int] = {s: 0 for s in subsets_of(top) if s}
    for s, v in a.items():
        meet = s & top
        if meet:
            out[meet] += v
    return out


def sum_of_h(ground: GroundSet) -> Divisor:
    return Divisor(ground, "H", {s: 1 for s in ground.nonempty_sets})


class DegreeEngine:
    """Iterated divisor intersection on a certified fan."""

    def __init__(self, fan: Fan, check: bool = True):
        uni, bal = fan.certify()
        if not uni.ok:
            raise HypothesisViolated(f"fan is not unimodular (cone {uni.witness})")
        if not bal.ok:
            raise HypothesisViolated(f"top cycle is not balanced (face {bal.witness})")
        self.fan = fan
        self.ground = fan.ground
        self.check = check
        g = self.ground
        self._bits = {s: tuple(bits(s)) for s in g.colored_sets}
        self._block_bits = [tuple(bits(bm)) for bm in g.block_masks]
        self._x_coeffs: dict[tuple, dict[int, object]] = {}
        self.sign = 1
        chain = fan.maximal_cones[0]
        value = self.degree([Divisor.x(g, s) for s in chain])
        if value not in (1, -1):
            raise InternalConsistencyError(f"chain monomial has degree {value}, expected ±1")
        self.sign = int(value)

    def _phi_on_span(self, tau: Chain, vec: dict[int, object], c: Mapping[int, object]):
        """Evaluate the linear extension of c on span(τ) at the lifted vector ``vec``.

        ``vec`` holds coefficients of the e_j before taking the quotient by
        the block sums.  Writing the vector as Σ λ_l ē_{S_l} forces, in each
        block met by the top of τ, a constant value on the other labels of
        that block; the excess on the chosen label must be constant on each
        layer S_l ∖ S_{l-1}.  Anything else is outside the span.
        """
        top = tau[-1] if tau else 0
        value_at: dict[int, object] = {}
        for i, block in enumerate(self._block_bits):
            chosen = next((k for k in block if top >> k & 1), None)
            others = [vec.get(k, 0) for k in block if k != chosen]
            if any(x != others[0] for x in others):
                raise InternalConsistencyError(f"coface sum leaves span of cone {tau}")
            if chosen is not None:
                value_at[chosen] = vec.get(chosen, 0) - others[0]
        result = 0
        prev = 0
        layer_values = []
        for s in tau:
            layer = [value_at[k] for k in self._bits[s & ~prev]]
            if any(x != layer[0] for x in layer):
                raise InternalConsistencyError(f"coface sum leaves span of cone {tau}")
            layer_values.append(layer[0])
            prev = s
        for idx, s in enumerate(tau):
            nxt = layer_values[idx + 1] if idx + 1 < len(tau) else 0
            lam = layer_values[idx] - nxt
            if lam:
                result += lam * c.get(s, 0)
        return result

    def intersect(self, cycle: WeightedCycle, divisor: Divisor) -> WeightedCycle:
        if divisor.ground != self.ground:
            raise InputError("divisor and fan use different ground sets")
        c = self._x_coeffs.get(divisor.key)
        if c is None:
            c = self._x_coeffs[divisor.key] = convert(divisor, "X").coeffs
        if self.check:
            verdict = check_balancing(self.fan, cycle)
            if not verdict.ok:
                raise InternalConsistencyError(f"cycle of dimension {cycle.dim} unbalanced at {verdict.witness}")
        values: dict[Chain, object] = {}
        vectors: dict[Chain, dict[int, object]] = {}
        facets = self.fan.facets
        for sigma, w in cycle.weights.items():
            if not w:
                continue
            for tau, removed in facets[sigma]:
                cv = c.get(removed)
                if cv:
                    values[tau] = values.get(tau, 0) + w * cv
                vec = vectors.get(tau)
                if vec is None:
                    vec = vectors[tau] = {}
                for k in self._bits[removed]:
                    vec[k] = vec.get(k, 0) + w
        out = {}
        for tau, vec in vectors.items():
            weight = values.get(tau, 0) - self._phi_on_span(tau, vec, c)
            if weight:
                out[tau] = weight
        return WeightedCycle(cycle.dim - 1, out)

    def degree(self, divisors: Sequence[Divisor], cache: dict | None = None) -> Fraction:
        """Degree of the product; ``cache`` (optional) stores cycles of shared prefixes."""
        n = self.ground.n
        if len(divisors) != n:
            raise InputError(f"need exactly {n} divisors, got {len(divisors)}")
        cycle = None
        start = 0
        if cache is not None:
            for m in range(n - 1, 0, -1):
                key = tuple(d.key for d in divisors[:m])
                if key in cache:
                    cycle, start = cache[key], m
                    break
        if cycle is None:
            cycle = self.fan.top_cycle()
        for m in range(start, n):
            cycle = self.intersect(cycle, divisors[m])
            if cache is not None and m + 1 < n:
                cache[tuple(d.key for d in divisors[: m + 1])] = cycle
        return Fraction(cycle.weights.get((), 0)) * self.sign


def engine_for(fan: Fan, check: bool = True) -> DegreeEngine:
    attr = "_engine_checked" if check else "_engine_unchecked"
    engine = fan.__dict__.get(attr)
    if engine is None:
        engine = DegreeEngine(fan, check)
        fan.__dict__[attr] = engine
    return engine


def degree_product(fan: Fan, divisors: Sequence[Divisor], check: bool = True, cache: dict | None = None) -> Fraction:
    return engine_for(fan, check).degree(divisors, cache)


def h_monomial(ground: GroundSet, sets: Iterable[int]) -> list[Divisor]:
    return [Divisor.h(ground, s) for s in sets]


def verify_theorem_A(ground: GroundSet, sets: Sequence[int], fan: Fan | None = None, cache: dict | None = None) -> dict:
    fan = fan if fan is not None else build_fan(ground)
    deg = degree_product(fan, h_monomial(ground, sets), cache=cache)
    count = transversal_count(ground, sets)
    return {"degree": deg, "transversal_count": count, "equal": deg == count}
