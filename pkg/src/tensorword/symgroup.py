"""Permutations, permutation groups and characters.

Permutations are stored 0-based (``image[i] = sigma(i)``) and printed in
1-based cycle notation. ``compose(s, t)`` applies ``t`` first:
``compose(s, t)(i) == s(t(i))``.
"""
from __future__ import annotations

import cmath
import json
import math
import re
from collections import deque
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .config import CHAR_TOL, ORDER_CAP
from .errors import CapExceededError, DimensionError, SpecError


@dataclass(frozen=True)
class Permutation:
    image: tuple

    def __post_init__(self):
        image = tuple(int(x) for x in self.image)
        if sorted(image) != list(range(len(image))) or not image:
            raise ValueError(f"not a permutation of 0..{len(image) - 1}: {image}")
        object.__setattr__(self, "image", image)

    @classmethod
    def identity(cls, degree: int) -> Permutation:
        return cls(tuple(range(degree)))

    @classmethod
    def from_images(cls, images) -> Permutation:
        """From 1-based images ``[sigma(1), ..., sigma(m)]``."""
        return cls(tuple(int(x) - 1 for x in images))

    @classmethod
    def from_cycles(cls, degree: int, cycles) -> Permutation:
        """From 1-based cycles, e.g. ``from_cycles(3, [(1, 2, 3)])``."""
        image = list(range(degree))
        seen = set()
        for cyc in cycles:
            pts = [int(p) - 1 for p in cyc]
            if any(not 0 <= p < degree for p in pts):
                raise ValueError(f"cycle {tuple(cyc)} has points outside 1..{degree}")
            if seen.intersection(pts) or len(set(pts)) != len(pts):
                raise ValueError(f"cycles are not disjoint: {cycles}")
            seen.update(pts)
            for a, b in zip(pts, pts[1:] + pts[:1]):
                image[a] = b
        return cls(tuple(image))

    @property
    def degree(self) -> int:
        return len(self.image)

    def __call__(self, i: int) -> int:
        return self.image[i]

    def is_identity(self) -> bool:
        return all(i == x for i, x in enumerate(self.image))

    def cycles(self) -> list:
        """Nontrivial cycles, 1-based."""
        seen, out = set(), []
        for start in range(self.degree):
            if start in seen or self.image[start] == start:
                continue
            cyc, i = [], start
            while i not in seen:
                seen.add(i)
                cyc.append(i + 1)
                i = self.image[i]
            out.append(tuple(cyc))
        return out

    def __str__(self):
        cyc = self.cycles()
        return "".join("(" + " ".join(map(str, c)) + ")" for c in cyc) or "()"

    def __repr__(self):
        return f"Permutation({self})"


def _same_degree(s, t):
    if s.degree != t.degree:
        raise DimensionError(f"degree mismatch: {s.degree} vs {t.degree}")


def compose(s: Permutation, t: Permutation) -> Permutation:
    _same_degree(s, t)
    return Permutation(tuple(s.image[j] for j in t.image))


def inverse(s: Permutation) -> Permutation:
    inv = [0] * s.degree
    for i, j in enumerate(s.image):
        inv[j] = i
    return Permutation(tuple(inv))


def sign(s: Permutation) -> int:
    # a cycle of length L is L - 1 transpositions
    transpositions = sum(len(c) - 1 for c in s.cycles())
    return -1 if transpositions % 2 else 1


@dataclass(frozen=True, eq=False)
class PermutationGroup:
    """A finite group of permutations with identity first.

    ``generators`` are kept for cheap class-function checks; an empty tuple
    means "use every element".
    """

    degree: int
    elements: tuple
    generators: tuple = ()
    name: str = ""
    _index: dict = field(default=None, repr=False, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "_index", {g: i for i, g in enumerate(self.elements)})

    @property
    def order(self) -> int:
        return len(self.elements)

    def index(self, g: Permutation) -> int:
        try:
            return self._index[g]
        except KeyError:
            raise ValueError(f"{g} is not in group {self.name or '<anonymous>'}") from None

    def __contains__(self, g):
        return g in self._index

    def __iter__(self):
        return iter(self.elements)

    def __len__(self):
        return len(self.elements)

    def images(self) -> np.ndarray:
        """``(order, degree)`` array of 0-based images."""
        return np.array([g.image for g in self.elements], dtype=np.intp).reshape(self.order, self.degree)


def generate_group(degree: int, generators, order_cap: int = ORDER_CAP, name: str = "") -> PermutationGroup:
    """Closure of ``generators`` by breadth-first right multiplication from the identity."""
    gens = tuple(generators)
    for g in gens:
        if g.degree != degree:
            raise DimensionError(f"generator {g} has degree {g.degree}, expected {degree}")
    e = Permutation.identity(degree)
    elements, seen = [e], {e}
    queue = deque([e])
    while queue:
        g = queue.popleft()
        for s in gens:
            h = compose(g, s)
            if h not in seen:
                if len(elements) >= order_cap:
                    raise CapExceededError(f"group order exceeds cap {order_cap}")
                seen.add(h)
                elements.append(h)
                queue.append(h)
    return PermutationGroup(degree, tuple(elements), gens, name)


def _long_cycle(m):
    return Permutation.from_cycles(m, [tuple(range(1, m + 1))]) if m > 1 else Permutation.identity(m)


def builtin_group(spec: str, order_cap: int = ORDER_CAP) -> PermutationGroup:
    """``sym:m``, ``alt:m``, ``cyclic:m`` or ``trivial:m``."""
    match = re.fullmatch(r"\s*(sym|alt|cyclic|trivial)\s*:\s*(\d+)\s*", spec)
    if not match:
        raise SpecError(f"unknown builtin group spec {spec!r}")
    kind, m = match.group(1), int(match.group(2))
    if m < 1:
        raise SpecError("group degree must be >= 1")
    expected = {"sym": math.factorial(m), "alt": max(1, math.factorial(m) // 2),
                "cyclic": m, "trivial": 1}[kind]
    if expected > order_cap:
        raise CapExceededError(f"{spec} has order {expected} > cap {order_cap}")
    if kind == "trivial" or m == 1:
        gens = []
    elif kind == "sym":
        gens = [Permutation.from_cycles(m, [(1, 2)]), _long_cycle(m)]
    elif kind == "alt":
        gens = [Permutation.from_cycles(m, [(1, 2, i)]) for i in range(3, m + 1)]
    else:
        gens = [_long_cycle(m)]
    return generate_group(m, gens, order_cap, name=f"{kind}:{m}")


def parse_group(spec: str, order_cap: int = ORDER_CAP) -> PermutationGroup:
    """Builtin spec or ``gens:(a b c),(d e)`` with the degree set by the largest point.

    A degree can be forced with a ``@m`` suffix: ``gens:(1 2)@4``.
    """
    spec = spec.strip()
    if not spec.startswith("gens:"):
        return builtin_group(spec, order_cap)
    body, _, deg = spec[5:].partition("@")
    cycles = re.findall(r"\(([^()]*)\)", body)
    if re.sub(r"\([^()]*\)|[\s,]", "", body):
        raise SpecError(f"malformed generator list {body!r}")
    try:
        parsed = [tuple(int(p) for p in c.split()) for c in cycles]
    except ValueError:
        raise SpecError(f"cycle points must be integers: {body!r}") from None
    points = [p for c in parsed for p in c]
    degree = int(deg) if deg else max(points, default=1)
    try:
        gens = [Permutation.from_cycles(degree, [c]) for c in parsed if len(c) > 1]
    except ValueError as exc:
        raise SpecError(str(exc)) from None
    return generate_group(degree, gens, order_cap, name=spec)


# -- characters ---------------------------------------------------------

@dataclass(frozen=True, eq=False)
class Character:
    """Complex values indexed like ``group.elements``."""

    group: PermutationGroup
    values: np.ndarray
    irreducible: bool = True
    name: str = ""

    def __post_init__(self):
        vals = np.array(self.values, dtype=np.complex128).reshape(-1)
        if vals.shape[0] != self.group.order:
            raise DimensionError(f"{vals.shape[0]} character values for a group of order {self.group.order}")
        vals.flags.writeable = False
        object.__setattr__(self, "values", vals)

    @property
    def degree(self) -> complex:
        return self.values[0]

    def __call__(self, g: Permutation) -> complex:
        return self.values[self.group.index(g)]


def builtin_character(group: PermutationGroup, spec: str) -> Character:
    """``trivial``, ``sign`` or ``omega:j`` (cyclic groups only)."""
    spec = spec.strip()
    if spec == "trivial":
        return Character(group, np.ones(group.order), True, "trivial")
    if spec == "sign":
        return Character(group, [sign(g) for g in group], True, "sign")
    match = re.fullmatch(r"omega\s*:\s*(-?\d+)", spec)
    if match:
        j = int(match.group(1))
        m = group.degree
        if not _is_standard_cyclic(group):
            raise SpecError(f"omega:{j} needs the group cyclic:{m}, got {group.name or 'another group'}")
        # g = c^p where c = (1 2 ... m) sends point 0 to p
        vals = [cmath.exp(2j * cmath.pi * j * g.image[0] / m) for g in group]
        return Character(group, vals, True, f"omega:{j}")
    raise SpecError(f"unknown builtin character {spec!r}")


def _is_standard_cyclic(group):
    m = group.degree
    if group.order != m:
        return False
    return all(g.image == tuple((i + g.image[0]) % m for i in range(m)) for g in group)


def load_character_table(group: PermutationGroup, path, irreducible: bool = True) -> Character:
    """Read ``{"values": [[re, im], ...]}`` in canonical element order."""
    with open(Path(path)) as fh:
        obj = json.load(fh)
    try:
        vals = [complex(re_, im) for re_, im in obj["values"]]
    except (KeyError, TypeError, ValueError) as exc:
        raise SpecError(f"malformed character table {path}: {exc}") from exc
    return Character(group, vals, irreducible, f"table:{path}")


def parse_character(group: PermutationGroup, spec: str, irreducible: bool = True) -> Character:
    spec = spec.strip()
    if spec.startswith("table:"):
        return load_character_table(group, spec[6:], irreducible)
    return builtin_character(group, spec)


def character_inner_product(chi1: Character, chi2: Character, group: PermutationGroup | None = None) -> complex:
    group = group or chi1.group
    if chi1.group is not group or chi2.group is not group:
        if not (chi1.group.elements == group.elements == chi2.group.elements):
            raise DimensionError("characters live on different groups")
    return complex(np.sum(chi1.values * np.conj(chi2.values)) / group.order)


@dataclass
class CharacterValidation:
    checks: dict  # name -> (passed, detail)

    @property
    def ok(self) -> bool:
        return all(passed for passed, _ in self.checks.values())


def validate_character(chi: Character, group: PermutationGroup | None = None,
                       tol: float = CHAR_TOL, irreducible: bool | None = None) -> CharacterValidation:
    """Class-function, integral-degree and (optionally) irreducibility checks."""
    group = group or chi.group
    if irreducible is None:
        irreducible = chi.irreducible
    checks = {}

    # invariance under conjugation by a generating set implies invariance under G
    conjugators = group.generators or group.elements
    worst = 0.0
    for tau in conjugators:
        tau_inv = inverse(tau)
        for g in group:
            h = compose(compose(tau, g), tau_inv)
            worst = max(worst, abs(chi(h) - chi(g)))
    checks["class_function"] = (worst <= tol, f"max |chi(t s t^-1) - chi(s)| = {worst:.3e}")

    deg = chi.degree
    integral = abs(deg.imag) <= tol and abs(deg.real - round(deg.real)) <= tol and round(deg.real) >= 1
    checks["degree"] = (integral, f"chi(e) = {deg}")

    if irreducible:
        norm = character_inner_product(chi, chi, group)
        checks["irreducible"] = (abs(norm - 1) <= tol, f"<chi, chi> = {norm}")
    return CharacterValidation(checks)
