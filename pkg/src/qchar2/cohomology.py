"""Symbol sums over the dt_i/t_i basis: rewriting, residues, triviality.

A degree-n symbol a d(b_1)/b_1 ^ ... ^ d(b_{n-1})/b_{n-1} is stored as a
coefficient plus a slot tuple; a class of the degree-n group is a formal
sum of symbols.  Classes never get a coset normal form: equality of
classes is always asked as `class_trivial(difference)`.

Triviality is decided by a residue recursion.  At each Laurent level a
tame sum splits into an unramified part (all slots units) and a ramified
part (one dt/t factor, degree drops by one), both living one level down;
the class is trivial iff both parts are.  At the perfect base field every
degree >= 2 class is trivial and degree-1 classes are Artin-Schreier
membership.  Wild sums (irreducible negative-valuation coefficients)
return Undecided (None), except that a single symbol can also be decided
through the hyperbolicity of its Pfister form, which is an independent
route used by the cross-check tests.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import UndecidableClass, UndecidableInstance, WildSymbol, ZeroInput
from .fields import (
    FieldElement,
    FieldTower,
    exact_tail_reduce,
    strip_even_power,
    wp_reduce,
)
from .forms import QuadraticPfister


@dataclass(frozen=True)
class Symbol:
    """a d(b_1)/b_1 ^ ... ^ d(b_{n-1})/b_{n-1}; degree n, n-1 slots."""

    degree: int
    coefficient: FieldElement
    slots: tuple[FieldElement, ...] = ()

    def __post_init__(self):
        if self.degree != len(self.slots) + 1:
            raise ValueError(f"degree {self.degree} needs {self.degree - 1} slots")
        for b in self.slots:
            if b.is_zero():
                raise ZeroInput("zero slot in a symbol")

    def is_zero(self) -> bool:
        return self.coefficient.is_zero()

    def __str__(self):
        from .parsing import format_symbol_sum

        return format_symbol_sum(SymbolSum(self.degree, (self,)))

    __repr__ = __str__


@dataclass(frozen=True)
class SymbolSum:
    degree: int
    symbols: tuple[Symbol, ...] = ()

    def __post_init__(self):
        for s in self.symbols:
            if s.degree != self.degree:
                raise ValueError("mixed degrees in a symbol sum")

    def __add__(self, other):
        if isinstance(other, Symbol):
            other = SymbolSum(other.degree, (other,))
        if self.degree != other.degree:
            raise ValueError("adding symbol sums of different degrees")
        return SymbolSum(self.degree, self.symbols + other.symbols)

    def is_empty(self) -> bool:
        return not self.symbols

    def __str__(self):
        from .parsing import format_symbol_sum

        return format_symbol_sum(self)

    __repr__ = __str__


def symbol(coefficient: FieldElement, *slots: FieldElement) -> Symbol:
    return Symbol(len(slots) + 1, coefficient, tuple(slots))


def zero_sum(degree: int) -> SymbolSum:
    return SymbolSum(degree, ())


@dataclass(frozen=True)
class DifferentialForm:
    """sum_J c_J dt_{j_1} ^ ... ^ dt_{j_d} over the 2-basis; degree d."""

    degree: int
    entries: tuple[tuple[tuple[int, ...], FieldElement], ...]  # sorted index sets

    @classmethod
    def from_dict(cls, degree: int, coords: dict):
        items = tuple(
            (tuple(sorted(key)), value)
            for key, value in sorted(coords.items(), key=lambda kv: tuple(sorted(kv[0])))
            if not value.is_zero()
        )
        return cls(degree, items)

    def coords(self) -> dict:
        return {frozenset(k): v for k, v in self.entries}

    def is_zero(self) -> bool:
        return not self.entries


# -- normalization -------------------------------------------------------------------


def _slot_normal(b: FieldElement) -> FieldElement:
    # strip even t-powers at the slot's own level while the representation
    # keeps collapsing; exact, and d(b s^2)/(b s^2) = d(b)/b
    cur = b
    while cur.level > 0:
        nxt = strip_even_power(cur, cur.level)
        if nxt == cur:
            break
        cur = nxt
    return cur


def _normalize_symbol(s: Symbol) -> Symbol | None:
    r = wp_reduce(s.coefficient)
    if r.is_in_wp:
        return None
    coeff = r.reduced
    slots = []
    for b in s.slots:
        nb = _slot_normal(b)
        if nb.is_square():
            return None           # square slot kills d(b)/b
        slots.append(nb)
    for i in range(len(slots)):
        for j in range(i + 1, len(slots)):
            if (slots[i] * slots[j]).is_square():
                return None       # equal slots modulo squares: wedge vanishes
    slots.sort(key=str)
    return Symbol(s.degree, coeff, tuple(slots))


def simplify(s: SymbolSum) -> SymbolSum:
    """Canonical cleanup: reduced coefficients, square-free sorted slots,
    doubled symbols cancelled, equal-slot symbols merged, one slot-merge
    pass for equal coefficients."""
    by_slots: dict = {}
    for sym in s.symbols:
        n = _normalize_symbol(sym)
        if n is None:
            continue
        by_slots[n.slots] = by_slots.get(n.slots, s_zero(sym)) + n.coefficient
    out = []
    for slots, coeff in sorted(by_slots.items(), key=lambda kv: [str(b) for b in kv[0]]):
        r = wp_reduce(coeff)
        if not r.is_in_wp:
            out.append(Symbol(s.degree, r.reduced, slots))
    # slot-merge: {a; b, R} + {a; b', R} = {a; b b', R}
    changed = True
    while changed and len(out) > 1:
        changed = False
        for i in range(len(out)):
            for j in range(i + 1, len(out)):
                merged = _merge_slotwise(out[i], out[j])
                if merged is not None:
                    rest = [x for k, x in enumerate(out) if k not in (i, j)]
                    if merged.count:
                        rest.extend(merged.symbols)
                    out = rest
                    changed = True
                    break
            if changed:
                break
    return SymbolSum(s.degree, tuple(out))


def s_zero(sym: Symbol) -> FieldElement:
    return sym.coefficient.tower.zero()


@dataclass(frozen=True)
class _Merged:
    count: int
    symbols: tuple


def _merge_slotwise(x: Symbol, y: Symbol) -> _Merged | None:
    if x.coefficient != y.coefficient or x.degree < 2:
        return None
    from collections import Counter

    cx, cy = Counter(x.slots), Counter(y.slots)
    only_x = list((cx - cy).elements())
    only_y = list((cy - cx).elements())
    if len(only_x) != 1 or len(only_y) != 1:
        return None
    rest = list((cx & cy).elements())
    merged = _normalize_symbol(
        Symbol(x.degree, x.coefficient, tuple(rest + [only_x[0] * only_y[0]]))
    )
    if merged is None:
        return _Merged(0, ())
    return _Merged(1, (merged,))


# -- differential expansion -----------------------------------------------------------


def to_differential(s: SymbolSum) -> DifferentialForm:
    """Expand through logarithmic-derivative coordinates; degree drops by 1."""
    if not s.symbols:
        return DifferentialForm(s.degree - 1, ())
    tw = s.symbols[0].coefficient.tower
    m = tw.height
    coords: dict = {}
    for sym in s.symbols:
        if sym.is_zero():
            continue
        rows = [b.dlog_coords() for b in sym.slots]

        def expand(j, used, acc):
            if acc.is_zero():
                return
            if j == len(rows):
                key = frozenset(used)
                total = coords.get(key, tw.zero()) + sym.coefficient * acc
                if total.is_zero():
                    coords.pop(key, None)
                else:
                    coords[key] = total
                return
            for i in range(m):
                if i + 1 in used:
                    continue
                c = rows[j][i]
                if not c.is_zero():
                    expand(j + 1, used + (i + 1,), acc * c)

        expand(0, (), tw.one())
    return DifferentialForm.from_dict(s.degree - 1, coords)


def basis_rewrite(w: DifferentialForm, tw: FieldTower) -> SymbolSum:
    """One symbol per nonzero coordinate: coefficient c_J * prod t_j and
    slots (t_j); expands back to w exactly."""
    out = []
    for key, c in w.entries:
        coeff = c
        slots = []
        for j in key:
            tj = tw.gen(j)
            coeff = coeff * tj
            slots.append(tj)
        out.append(Symbol(w.degree + 1, coeff, tuple(slots)))
    return SymbolSum(w.degree + 1, tuple(out))


# -- residue reduction ----------------------------------------------------------------


def symbol_residue(s: SymbolSum, level: int) -> tuple[SymbolSum, SymbolSum]:
    """(unramified part, ramified part), both one level down.

    Tameness required: coefficients reduce to nonnegative valuation, every
    slot is a unit or t * unit modulo squares.  A slot t*u contributes its
    dt/t factor to the ramified side (degree drops by one) and du/u to the
    unramified side; coefficients are residued, their positive-valuation
    tails being Artin-Schreier trivial by the series solution.
    """
    unram = []
    ram = []
    for sym in s.symbols:
        a, wild = exact_tail_reduce(sym.coefficient, level)
        if wild:
            raise WildSymbol(f"coefficient {sym.coefficient} is wild at level {level}")
        a0 = a.residue(level)
        decomp = []
        for b in sym.slots:
            nb = strip_even_power(b, level)
            v = nb.valuation(level) if nb.level == level else 0
            if v == 0:
                decomp.append((False, nb))
            else:
                decomp.append((True, nb / nb.tower.monomial(level, 1)))
        if a0.is_zero():
            continue
        for choice in _expansions(decomp):
            t_count = sum(1 for kind in choice if kind == "t")
            if t_count > 1:
                continue
            units = [u for kind, (_, u) in zip(choice, decomp) if kind == "u"]
            if any(u.is_one() for u in units):
                continue          # a d(1)/1 factor kills the term
            res_slots = tuple(u.residue(level) for u in units)
            if any(r.is_zero() for r in res_slots):
                raise WildSymbol("unit slot with vanishing residue")
            if t_count == 1:
                ram.append(Symbol(sym.degree - 1, a0, res_slots))
            else:
                unram.append(Symbol(sym.degree, a0, res_slots))
    return (
        simplify(SymbolSum(s.degree, tuple(unram))),
        simplify(SymbolSum(s.degree - 1, tuple(ram))),
    )


def _expansions(decomp):
    # per slot: "u" always possible; "t" additionally when the slot carries
    # an odd t-power
    choices = [()]
    for has_t, _u in decomp:
        new = []
        for c in choices:
            new.append(c + ("u",))
            if has_t:
                new.append(c + ("t",))
        choices = new
    return choices


# -- triviality ------------------------------------------------------------------------


def class_trivial(s: SymbolSum, budget: int = 4096):
    """True / False / None(undecided) for the class of s.

    Residue recursion on tame sums; single wild symbols fall back to the
    Pfister route (a symbol is trivial iff its Pfister form is hyperbolic,
    by the minimal-dimension property of anisotropic Pfister forms).
    """
    s = simplify(s)
    if not s.symbols:
        return True
    tw = s.symbols[0].coefficient.tower
    if s.degree == 1:
        total = tw.zero()
        for sym in s.symbols:
            total = total + sym.coefficient
        return wp_reduce(total).is_in_wp
    level = 0
    for sym in s.symbols:
        level = max(level, sym.coefficient.level, *(b.level for b in sym.slots), 0)
    if level == 0:
        return True   # perfect base field: no nonzero differentials
    try:
        unram, ram = symbol_residue(s, level)
    except WildSymbol:
        return _single_symbol_route(s)
    r_unram = class_trivial(unram, budget)
    r_ram = class_trivial(ram, budget)
    if r_unram is False or r_ram is False:
        return False
    if r_unram is True and r_ram is True:
        return True
    return None


def _single_symbol_route(s: SymbolSum):
    from .witt import is_hyperbolic

    if len(s.symbols) != 1:
        return None
    try:
        return is_hyperbolic(symbol_to_pfister(s.symbols[0]).expand())
    except UndecidableInstance:
        return None


def symbol_to_pfister(sym: Symbol) -> QuadraticPfister:
    """Invert the cohomological-invariant map slotwise."""
    return QuadraticPfister(sym.slots, sym.coefficient)


def classes_equal(a: SymbolSum, b: SymbolSum, budget: int = 4096):
    return class_trivial(a + b, budget)


# -- symbol length ----------------------------------------------------------------------


@dataclass(frozen=True)
class LengthResult:
    value: int
    exact: bool
    expression: SymbolSum | None = None


def symbol_pool(tw: FieldTower, budget: int) -> list[FieldElement]:
    """Monomials t_1^e1 ... t_m^em * u with |e_i| <= 2 and base-field u,
    grown geometrically with the budget."""
    exps = [0, 1, -1, 2, -2] if budget >= 64 else [0, 1]
    units = list(range(1, min(tw.order, 2 + budget // 512 + 1)))
    pool = []
    seen = set()

    def mono(es, u):
        x = tw.base_element(u)
        for lv, e in enumerate(es, start=1):
            if e:
                x = x * tw.monomial(lv, e)
        return x

    def rec(lv, es):
        if lv > tw.height:
            for u in units:
                x = mono(es, u)
                if x not in seen:
                    seen.add(x)
                    pool.append(x)
            return
        for e in exps:
            rec(lv + 1, es + [e])

    rec(1, [])
    if budget >= 2048:
        extra = []
        for i, x in enumerate(pool[: min(len(pool), 12)]):
            for y in pool[i + 1 : min(len(pool), 12)]:
                z = x + y
                if not z.is_zero() and z not in seen:
                    seen.add(z)
                    extra.append(z)
        pool.extend(extra)
    return pool


def symbol_length(s: SymbolSum, budget: int = 4096, extra_pool=()) -> LengthResult:
    """Exact symbol length when certifiable (0, 1, or the basis-coordinate
    count when nothing shorter exists in the searched pool); otherwise an
    upper bound flagged inexact."""
    verdict = class_trivial(s, budget)
    if verdict is None:
        raise UndecidableClass("cannot certify triviality of the input class")
    if verdict:
        return LengthResult(0, True, zero_sum(s.degree))
    simple = simplify(s)
    tw = simple.symbols[0].coefficient.tower
    canonical = basis_rewrite(to_differential(simple), tw)
    bound = max(1, len(simplify(canonical).symbols))
    if len(simple.symbols) == 1:
        return LengthResult(1, True, simple)
    if bound <= 1:
        return LengthResult(1, True, simplify(canonical))
    # bounded verified search for a single-symbol expression
    pool = list(extra_pool) + symbol_pool(tw, budget)
    tried = 0
    slots_needed = s.degree - 1
    for cand in _symbol_candidates(pool, slots_needed, s.degree):
        tried += 1
        if tried > budget:
            break
        if class_trivial(simple + cand, budget) is True:
            return LengthResult(1, True, SymbolSum(s.degree, (cand,)))
    best = simplify(canonical)
    return LengthResult(min(bound, len(best.symbols)) or bound, False, best)


def _symbol_candidates(pool, slots_needed, degree):
    nonzero = [x for x in pool if not x.is_zero()]

    def rec(chosen, start):
        if len(chosen) == slots_needed:
            for a in pool:
                if not a.is_zero():
                    yield Symbol(degree, a, tuple(chosen))
            return
        for i in range(start, len(nonzero)):
            yield from rec(chosen + [nonzero[i]], i + 1)

    yield from rec([], 0)
