"""Exact GF(2) algebra over wire variables.

Anf is a multilinear polynomial stored as a set of monomials (each a
frozenset of flat wire indices). The module also holds the closed-form
output law of the layered network and the per-block recurrences for the
intermediate values A_l(k), Z_l(k), which serve as an independent oracle
for the simulator backends.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

from .circuit import QubitRef, mqg_roles

Monomial = frozenset


class Anf:
    """Polynomial over GF(2): XOR of AND-monomials, canonical by set identity.

    The empty monomial is the constant 1; the empty polynomial is 0.
    """

    __slots__ = ("monomials",)

    def __init__(self, monomials=()):
        self.monomials = frozenset(frozenset(m) for m in monomials)

    @classmethod
    def zero(cls) -> "Anf":
        return cls()

    @classmethod
    def one(cls) -> "Anf":
        return cls([frozenset()])

    @classmethod
    def var(cls, v: int) -> "Anf":
        return cls([frozenset([v])])

    def __xor__(self, other: "Anf") -> "Anf":
        return Anf(self.monomials ^ other.monomials)

    def __and__(self, other: "Anf") -> "Anf":
        acc: set[frozenset] = set()
        for p in self.monomials:
            for q in other.monomials:
                m = p | q
                if m in acc:
                    acc.remove(m)
                else:
                    acc.add(m)
        return Anf(acc)

    def __eq__(self, other) -> bool:
        return isinstance(other, Anf) and self.monomials == other.monomials

    def __hash__(self) -> int:
        return hash(self.monomials)

    def __bool__(self) -> bool:
        return bool(self.monomials)

    def variables(self) -> frozenset:
        return frozenset().union(*self.monomials) if self.monomials else frozenset()

    def evaluate(self, assignment) -> int:
        """XOR over monomials of AND over variables; assignment must be total."""
        acc = 0
        try:
            for m in self.monomials:
                acc ^= all(assignment[v] for v in m)
        except (KeyError, IndexError) as e:
            raise ValueError(f"assignment missing variable {e}") from e
        return int(acc)

    def to_text(self, names=None) -> str:
        """Render as e.g. ``A0 B1 C1 + A2``; 0 and 1 literals."""
        if not self.monomials:
            return "0"
        name = (lambda v: names[v]) if names is not None else str
        keyed = sorted(
            (tuple(sorted(m)) for m in self.monomials), key=lambda t: (-len(t), t)
        )
        parts = [" ".join(name(v) for v in m) if m else "1" for m in keyed]
        return " + ".join(parts)

    def __repr__(self) -> str:
        return f"Anf({self.to_text()})"


def wire_names(n: int) -> list[str]:
    return [ref.label for ref in mqg_roles(n)]


@lru_cache(maxsize=None)
def _flat(n: int) -> dict[QubitRef, int]:
    return {ref: i for i, ref in enumerate(mqg_roles(n))}


def variable(n: int, ref: QubitRef) -> Anf:
    """ANF variable for one wire of the n-network, by flat index."""
    return Anf.var(_flat(n)[ref])


def _check_indices(n: int, l: int, k: int):
    if n < 1:
        raise ValueError(f"need n >= 1, got {n}")
    if not 0 <= l <= 2**n:
        raise ValueError(f"row index l={l} outside 0..{2**n}")
    if not 0 <= k <= 2**n:
        raise ValueError(f"stage index k={k} outside 0..{2**n}")


@lru_cache(maxsize=None)
def block_A(n: int, l: int, k: int) -> Anf:
    """Wire value on a_l at the end of block stage k, as an ANF."""
    _check_indices(n, l, k)
    if l == 0:
        return variable(n, QubitRef("A", 0))
    if k == 0:
        return variable(n, QubitRef("A", l))
    bc = variable(n, QubitRef("B", l)) & variable(n, QubitRef("C", l))
    return (bc & block_Z(n, l - 1, k)) ^ block_A(n, l, k - 1)


@lru_cache(maxsize=None)
def block_Z(n: int, l: int, k: int) -> Anf:
    """Wire value on a_l at the midpoint of block stage k, as an ANF."""
    _check_indices(n, l, k)
    if l == 0:
        return variable(n, QubitRef("A", 0))
    if k == 0:
        raise ValueError(f"Z_{l}(0) is undefined (stage k must be >= 1 for l >= 1)")
    b = variable(n, QubitRef("B", l))
    if k == 1:
        a_prev = variable(n, QubitRef("A", l - 1))
        c = variable(n, QubitRef("C", l))
        d = variable(n, QubitRef("D", l))
        return (b & ((a_prev & c) ^ d)) ^ variable(n, QubitRef("A", l))
    bc = b & variable(n, QubitRef("C", l))
    return (bc & block_A(n, l - 1, k - 1)) ^ block_Z(n, l, k - 1)


def block_D_final(n: int, l: int) -> Anf:
    """d_l at the final stage boundary: restored to its input value."""
    if not 1 <= l <= 2**n:
        raise ValueError(f"row index l={l} outside 1..{2**n}")
    return variable(n, QubitRef("D", l))


def control_product(n: int) -> Anf:
    """A0 B1 C1 ... B_{2^n} C_{2^n} as a single monomial."""
    p = variable(n, QubitRef("A", 0))
    for l in range(1, 2**n + 1):
        p = p & variable(n, QubitRef("B", l)) & variable(n, QubitRef("C", l))
    return p


def closed_form_outputs(n: int) -> dict[QubitRef, Anf]:
    """Output law of the network: only a_{2^n} changes, by the control product."""
    m = 2**n
    out = {ref: variable(n, ref) for ref in mqg_roles(n)}
    out[QubitRef("A", m)] = control_product(n) ^ variable(n, QubitRef("A", m))
    return out


@dataclass(frozen=True)
class IdentityCheck:
    name: str
    holds: bool
    lhs: str
    rhs: str


@dataclass(frozen=True)
class AppendixReport:
    n: int
    checks: tuple[IdentityCheck, ...]

    @property
    def ok(self) -> bool:
        return all(c.holds for c in self.checks)

    def failures(self) -> list[IdentityCheck]:
        return [c for c in self.checks if not c.holds]


def verify_appendix(n: int) -> AppendixReport:
    """Check the stage-boundary identities and the doubling step symbolically.

    Covers: the closed form of A_{2^n}(2^n); restoration A_l(2^n) = A_l for
    l < 2^n; the final Z_l(2^n) forms; D restoration via
    B_l AND D_l = A_l(2^n) XOR Z_l(2^n); and the doubling identity
    A_l(k) = [prod_{p<2^j} B_{l-p} C_{l-p}] A_{l-2^j}(k-2^(j-1)) XOR A_l(k-2^j)
    for every power 2^j fitting inside (l, k).
    """
    m = 2**n
    names = wire_names(n)
    checks: list[IdentityCheck] = []

    def add(name: str, lhs: Anf, rhs: Anf):
        checks.append(
            IdentityCheck(name, lhs == rhs, lhs.to_text(names), rhs.to_text(names))
        )

    def v(role: str, l: int) -> Anf:
        return variable(n, QubitRef(role, l))

    add(f"A_{m}({m}) closed form", block_A(n, m, m), control_product(n) ^ v("A", m))
    for l in range(1, m):
        add(f"A_{l}({m}) restored", block_A(n, l, m), v("A", l))
    for l in range(1, m):
        add(f"Z_{l}({m}) final form", block_Z(n, l, m), (v("B", l) & v("D", l)) ^ v("A", l))
    add(
        f"Z_{m}({m}) final form",
        block_Z(n, m, m),
        control_product(n) ^ (v("B", m) & v("D", m)) ^ v("A", m),
    )
    for l in range(1, m + 1):
        add(
            f"B_{l} D_{l}({m}) relation",
            block_A(n, l, m) ^ block_Z(n, l, m),
            v("B", l) & v("D", l),
        )

    j = 1
    while 2**j <= m:
        step = 2**j
        for l in range(step, m + 1):
            bc = Anf.one()
            for p in range(step):
                bc = bc & v("B", l - p) & v("C", l - p)
            for k in range(step, m + 1):
                add(
                    f"doubling j={j} l={l} k={k}",
                    block_A(n, l, k),
                    (bc & block_A(n, l - step, k - step // 2)) ^ block_A(n, l, k - step),
                )
        j += 1

    return AppendixReport(n, tuple(checks))
