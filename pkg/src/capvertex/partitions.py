"""Partitions, Maya diagrams, l-cores and l-quotients.

Box convention: a box (a, b) has a = index of the part (1-based) and
b = position inside that part.  With this convention

    arm(a, b)     = #{a' > a : parts[a'] >= b}
    leg(a, b)     = parts[a] - b
    content(a, b) = a - b
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Callable, Iterable, Iterator, NamedTuple, Sequence

from .exactalg import ONE, ZERO, FieldElem, monomial, var


class PartitionError(ValueError):
    pass


class Partition(tuple):
    """Weakly decreasing tuple of positive integers."""

    def __new__(cls, parts: Iterable[int] = ()):
        parts = tuple(int(p) for p in parts)
        while parts and parts[-1] == 0:
            parts = parts[:-1]
        if any(p <= 0 for p in parts):
            raise PartitionError(f"parts must be positive: {parts}")
        if any(parts[i] < parts[i + 1] for i in range(len(parts) - 1)):
            raise PartitionError(f"parts must be weakly decreasing: {parts}")
        return super().__new__(cls, parts)

    @property
    def size(self) -> int:
        return sum(self)

    def boxes(self) -> Iterator[tuple[int, int]]:
        for a, part in enumerate(self, start=1):
            for b in range(1, part + 1):
                yield (a, b)

    def __str__(self):
        return ",".join(str(p) for p in self)

    def __repr__(self):
        return f"Partition({tuple(self)!r})"


EMPTY = Partition()


def parse_partition(text: str) -> Partition:
    text = text.strip()
    if text in ("", "0", "()", "-"):
        return EMPTY
    try:
        parts = [int(x) for x in text.replace(" ", "").split(",") if x != ""]
    except ValueError:
        raise PartitionError(f"cannot parse partition {text!r}") from None
    return Partition(parts)


class BoxStats(NamedTuple):
    arm: int
    leg: int
    hook: int
    content: int


def box_stats(lam: Partition, box: tuple[int, int]) -> BoxStats:
    a, b = box
    if not (1 <= a <= len(lam) and 1 <= b <= lam[a - 1]):
        raise PartitionError(f"box {box} is not in {tuple(lam)}")
    arm = sum(1 for part in lam[a:] if part >= b)
    leg = lam[a - 1] - b
    return BoxStats(arm, leg, arm + leg + 1, a - b)


def transpose(lam: Sequence[int]) -> Partition:
    if not lam:
        return EMPTY
    return Partition(sum(1 for p in lam if p >= j) for j in range(1, lam[0] + 1))


def dominance_leq(lam: Partition, mu: Partition, l: int | None = None) -> bool:
    """lam <= mu in dominance order; with l, also require equal l-cores."""
    if sum(lam) != sum(mu):
        raise PartitionError(f"sizes differ: {tuple(lam)} vs {tuple(mu)}")
    if l is not None and core(lam, l) != core(mu, l):
        return False
    s = t = 0
    for k in range(max(len(lam), len(mu))):
        s += lam[k] if k < len(lam) else 0
        t += mu[k] if k < len(mu) else 0
        if s > t:
            return False
    return True


@lru_cache(maxsize=None)
def partitions(n: int, max_part: int | None = None) -> tuple[Partition, ...]:
    """All partitions of n in descending lexicographic order."""
    if max_part is None:
        max_part = n
    if n == 0:
        return (EMPTY,)
    out = []
    for first in range(min(n, max_part), 0, -1):
        for rest in partitions(n - first, first):
            out.append(Partition((first,) + tuple(rest)))
    return tuple(out)


# ----------------------------------------------------------- Maya diagrams


@dataclass(frozen=True)
class MayaDiagram:
    """m : Z -> {1, -1} (1 = black bead), stored relative to a vacuum.

    The vacuum v_c is black exactly on k < c and has charge -c, so a
    diagram of charge c is stored as its set of deviations from v_{-c}.
    """

    charge: int
    deviations: frozenset

    def __call__(self, k: int) -> int:
        base = 1 if k < -self.charge else -1
        return -base if k in self.deviations else base

    def window(self) -> tuple[int, int]:
        """(lo, hi) such that m is black below lo and white from hi on."""
        pts = list(self.deviations) + [-self.charge]
        return min(pts), max(pts) + 1

    def black_beads(self, lo: int) -> list[int]:
        """Black positions >= lo, descending."""
        _, hi = self.window()
        return [k for k in range(hi - 1, lo - 1, -1) if self(k) == 1]

    def shifted(self) -> MayaDiagram:
        """The charge-zero diagram k -> m(k - charge)."""
        return MayaDiagram(0, frozenset(d + self.charge for d in self.deviations))

    @classmethod
    def from_function(cls, f: Callable[[int], int], lo: int, hi: int) -> MayaDiagram:
        """Diagram equal to f on [lo, hi), black below lo, white from hi."""
        charge = sum(1 for k in range(lo, min(hi, 0)) if f(k) == -1)
        charge -= sum(1 for k in range(max(lo, 0), hi) if f(k) == 1)
        if lo > 0:
            charge -= lo
        if hi < 0:
            charge += -hi
        devs = set()
        for k in range(min(lo, -charge), max(hi, -charge)):
            val = f(k) if lo <= k < hi else (1 if k < lo else -1)
            base = 1 if k < -charge else -1
            if val != base:
                devs.add(k)
        return cls(charge, frozenset(devs))


def vacuum(c: int) -> MayaDiagram:
    """v_c: black on k < c (charge -c)."""
    return MayaDiagram(-c, frozenset())


def compute_charge(m: MayaDiagram) -> int:
    lo, hi = m.window()
    lo, hi = min(lo, 0), max(hi, 0)
    white_neg = sum(1 for k in range(lo, 0) if m(k) == -1)
    black_pos = sum(1 for k in range(0, hi) if m(k) == 1)
    return white_neg - black_pos


def content_counts(lam: Partition) -> dict[int, int]:
    counts: dict[int, int] = {}
    for a, b in lam.boxes():
        counts[a - b] = counts.get(a - b, 0) + 1
    return counts


def maya_diagram(lam: Partition) -> MayaDiagram:
    """Charge-zero Maya diagram of lam, from the content-count rule."""
    lam = Partition(lam)
    c = content_counts(lam)
    first = lam[0] if lam else 0
    lo, hi = -first - 1, len(lam) + 1

    def m(i: int) -> int:
        diff = c.get(i, 0) - c.get(i + 1, 0)
        if i < 0:
            if diff == 0:
                return 1
            if diff == -1:
                return -1
        else:
            if diff == 1:
                return 1
            if diff == 0:
                return -1
        raise PartitionError(f"content counts of {tuple(lam)} are not a partition's")

    return MayaDiagram.from_function(m, lo, hi)


def partition_from_maya(m: MayaDiagram) -> Partition:
    if m.charge != 0:
        raise PartitionError(f"Maya diagram has charge {m.charge}; shift it to charge 0 first")
    lo, _ = m.window()
    lo = min(lo, 0)
    # descending black beads b_1 > b_2 > ... ; column j has length b_j + j
    beads = m.black_beads(lo - 1)
    cols = [b + j for j, b in enumerate(beads, start=1)]
    return transpose([c for c in cols if c > 0])


# ------------------------------------------------------- cores / quotients


@dataclass(frozen=True)
class CoreQuotient:
    l: int
    core: Partition
    quotient: tuple[Partition, ...]

    def __str__(self):
        return f"core={self.core} quot=({';'.join(str(q) for q in self.quotient)})"


def _runner(m: MayaDiagram, i: int, l: int) -> MayaDiagram:
    lo, hi = m.window()
    klo = (lo - i) // l - 1
    khi = (hi - i) // l + 2
    return MayaDiagram.from_function(lambda k: m(i + k * l), klo, khi)


def _assemble(runners: Sequence[MayaDiagram], l: int) -> MayaDiagram:
    lo = min(r.window()[0] for r in runners)
    hi = max(r.window()[1] for r in runners)
    return MayaDiagram.from_function(lambda k: runners[k % l](k // l), lo * l, hi * l + l)


def core_quotient(lam: Partition, l: int) -> CoreQuotient:
    if l < 1:
        raise PartitionError("l must be >= 1")
    lam = Partition(lam)
    m = maya_diagram(lam)
    runners = [_runner(m, i, l) for i in range(l)]
    quot = tuple(partition_from_maya(r.shifted()) for r in runners)
    core_m = _assemble([vacuum(-r.charge) for r in runners], l)
    return CoreQuotient(l, partition_from_maya(core_m), quot)


def runner_charges(kappa: Partition, l: int) -> tuple[int, ...]:
    m = maya_diagram(Partition(kappa))
    return tuple(_runner(m, i, l).charge for i in range(l))


def from_core_quotient(kappa: Partition, quotient: Sequence[Partition], l: int) -> Partition:
    if len(quotient) != l:
        raise PartitionError(f"quotient must have {l} components")
    kappa = Partition(kappa)
    if not is_core(kappa, l):
        raise PartitionError(f"{tuple(kappa)} is not a {l}-core")
    charges = runner_charges(kappa, l)
    runners = []
    for c, q in zip(charges, quotient):
        mt = maya_diagram(Partition(q))
        # runner m with m(k) = mt(k + c)
        runners.append(MayaDiagram(c, frozenset(d - c for d in mt.deviations)))
    return partition_from_maya(_assemble(runners, l))


@lru_cache(maxsize=None)
def _core_cached(lam: Partition, l: int) -> Partition:
    return core_quotient(lam, l).core


def core(lam: Partition, l: int) -> Partition:
    return _core_cached(Partition(lam), l)


def quotient(lam: Partition, l: int) -> tuple[Partition, ...]:
    return core_quotient(Partition(lam), l).quotient


def is_core(lam: Partition, l: int) -> bool:
    return all(box_stats(lam, bx).hook % l != 0 for bx in lam.boxes())


def core_to_root(kappa: Partition, l: int) -> tuple[int, ...]:
    """Coefficients of sum_{boxes} alpha_{(a-b) mod l} in alpha_1..alpha_{l-1}."""
    kappa = Partition(kappa)
    if not is_core(kappa, l):
        raise PartitionError(f"{tuple(kappa)} is not a {l}-core")
    n = [0] * l
    for a, b in kappa.boxes():
        n[(a - b) % l] += 1
    return tuple(n[i] - n[0] for i in range(1, l))


@lru_cache(maxsize=None)
def enumerate_partitions(n: int, l: int, kappa: Partition = EMPTY) -> tuple[Partition, ...]:
    """Partitions of n with l-core kappa, in descending lexicographic order."""
    kappa = Partition(kappa)
    return tuple(lam for lam in partitions(n) if core(lam, l) == kappa)


def block(l: int, kappa: Partition, d: int) -> tuple[Partition, ...]:
    """Partitions with l-core kappa and l-weight d (size |kappa| + l d)."""
    return enumerate_partitions(Partition(kappa).size + l * d, l, Partition(kappa))


def weight(lam: Partition, l: int) -> int:
    return (Partition(lam).size - core(lam, l).size) // l


# ------------------------------------------------------------ fixed points


def fixed_points(v: Sequence[int], w: Sequence[int], l: int) -> list[tuple[Partition, ...]]:
    """Tuples (lam^(i,j)), j < w_i, whose residue counts add up to v.

    A box (a, b) of lam^(i,j) has residue (a - b + i) mod l.
    """
    if len(v) != l or len(w) != l:
        raise PartitionError("v and w must have length l")
    slots = [i for i in range(l) for _ in range(w[i])]
    total = sum(v)
    target = tuple(v)
    out = []

    def residues(lam, shift):
        r = [0] * l
        for a, b in lam.boxes():
            r[(a - b + shift) % l] += 1
        return r

    def rec(k, remaining, acc, counts):
        if k == len(slots):
            if remaining == 0 and tuple(counts) == target:
                out.append(tuple(acc))
            return
        for size in range(remaining, -1, -1):
            for lam in partitions(size):
                r = residues(lam, slots[k])
                new = [x + y for x, y in zip(counts, r)]
                if all(x <= y for x, y in zip(new, target)):
                    rec(k + 1, remaining - size, acc + [lam], new)

    rec(0, total, [], [0] * l)
    return out


def taut_character(lam: Partition, m: int, l: int) -> FieldElem:
    """sum over boxes (a, b) with a - b = m mod l of t1^(1-b) t2^(1-a)."""
    acc = ZERO
    for a, b in Partition(lam).boxes():
        if (a - b - m) % l == 0:
            acc = acc + monomial((1 - b, 1 - a, 0, 0, 0))
    return acc


def classical_descendant(lam: Partition, m: int, l: int) -> FieldElem:
    """prod over boxes (a, b) with a - b = m mod l of (1 + u t1^(1-b) t2^(1-a))."""
    u = var("u")
    acc = ONE
    for a, b in Partition(lam).boxes():
        if (a - b - m) % l == 0:
            acc = acc * (1 + u * monomial((1 - b, 1 - a, 0, 0, 0)))
    return acc


def evaluation_product(lam: Partition, m: int, l: int) -> FieldElem:
    """prod over boxes (a, b) with a - b = m mod l of (1 + u t1^(b-1) t2^(a-1))."""
    u = var("u")
    acc = ONE
    for a, b in Partition(lam).boxes():
        if (a - b - m) % l == 0:
            acc = acc * (1 + u * monomial((b - 1, a - 1, 0, 0, 0)))
    return acc
