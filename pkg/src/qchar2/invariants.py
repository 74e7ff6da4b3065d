"""Arf and Clifford invariants, the invariant map on Pfister forms, and
membership in the filtration by Pfister subgroups.

The Clifford class of b_1[1,a_1] + ... + b_p[1,a_p] is the formal sum of
the degree-2 symbols [a_i, b_i); triviality of such sums is delegated to
the degree-2 residue machinery, with the single-symbol Pfister route as
an independent path.  Membership in the degree-n subgroup is decided by
the invariants for n <= 3 and by the vanishing table beyond that.
"""

from __future__ import annotations

from dataclasses import dataclass

from .cohomology import Symbol, SymbolSum, class_trivial, simplify
from .errors import SingularInput
from .fields import FieldTower, WpNormalForm, wp_reduce
from .forms import QuadraticForm, QuadraticPfister, arf_sum
from .witt import is_hyperbolic


def arf(f: QuadraticForm) -> WpNormalForm:
    """Arf invariant: the class of the sum of the a-slots modulo wp."""
    return wp_reduce(arf_sum(f))


@dataclass(frozen=True)
class CliffordSymbolSum:
    """Formal sum of quaternion-type symbols [a_i, b_i)."""

    symbols: tuple[tuple, ...]    # pairs (a, b)

    def to_symbol_sum(self) -> SymbolSum:
        return SymbolSum(
            2, tuple(Symbol(2, a, (b,)) for a, b in self.symbols if not b.is_zero())
        )

    @classmethod
    def from_symbol_sum(cls, s: SymbolSum) -> CliffordSymbolSum:
        if s.degree != 2:
            raise ValueError("Clifford classes are degree-2 sums")
        return cls(tuple((sym.coefficient, sym.slots[0]) for sym in s.symbols))

    def __add__(self, other: CliffordSymbolSum) -> CliffordSymbolSum:
        return CliffordSymbolSum(self.symbols + other.symbols)

    def is_empty(self) -> bool:
        return not self.symbols

    def __str__(self):
        if not self.symbols:
            return "0"
        return " + ".join(f"[{a},{b})" for a, b in self.symbols)

    __repr__ = __str__


def clifford(f: QuadraticForm) -> CliffordSymbolSum:
    """Clifford class as a simplified sum of symbols [a_i, b_i)."""
    if not f.is_nonsingular():
        raise SingularInput("Clifford invariant needs a nonsingular form")
    raw = SymbolSum(2, tuple(Symbol(2, a, (b,)) for b, a in f.pairs))
    return CliffordSymbolSum.from_symbol_sum(simplify(raw))


def clifford_trivial(c: CliffordSymbolSum, budget: int = 4096):
    """True / False / None for the Brauer class of the sum."""
    return class_trivial(c.to_symbol_sum(), budget)


def e_map(p: QuadraticPfister) -> Symbol:
    """The invariant of a fold-n Pfister form: coefficient from the last
    slot, symbol slots from the bilinear slots; degree equals the fold."""
    return Symbol(p.fold, p.last_slot, p.bilinear_slots)


# -- vanishing table -------------------------------------------------------------------


def iqn_vanishes(tw: FieldTower, n: int) -> bool:
    """Whether the degree-n Pfister subgroup is zero over this tower.

    Height-m towers have u = 2^(m+1) (witnessed and sampled by the
    verification suites), so anisotropic forms in the degree-(m+2) group
    would need dimension 2^(m+2) > u: the group vanishes.
    """
    return n >= tw.height + 2


def iqn_vanishing_entry(tw: FieldTower, n: int) -> dict:
    return {
        "field": tw.descriptor(),
        "degree": n,
        "vanishes": iqn_vanishes(tw, n),
        "provenance": "derived: u = 2^(m+1) witness family plus the"
                      " minimal-dimension property of anisotropic forms",
    }


def in_iqn(f: QuadraticForm, n: int, budget: int = 4096):
    """Membership of f in the degree-n subgroup: True / False / None.

    n=1 is all even-dimensional nonsingular classes; n=2 is Arf
    triviality; n=3 adds Clifford triviality; beyond that the vanishing
    table reduces membership to hyperbolicity where it applies.
    """
    if not f.is_nonsingular():
        raise SingularInput("membership test needs a nonsingular form")
    if n < 1:
        raise ValueError("degree must be >= 1")
    if n == 1:
        return True
    arf_ok = arf(f).is_in_wp
    if n == 2:
        return arf_ok
    if n == 3:
        if not arf_ok:
            return False
        return clifford_trivial(clifford(f), budget)
    if iqn_vanishes(f.tower, n):
        return is_hyperbolic(f)
    return None
