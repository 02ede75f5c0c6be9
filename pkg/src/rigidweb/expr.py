"""Admissible expressions over variables X1..Xs with sum and intersection.

Concrete syntax (``&`` binds tighter than ``+``)::

    expr  := term ("+" term)*
    term  := atom ("&" atom)*
    atom  := VAR | "(" expr ")"
    VAR   := "X" [1-9][0-9]*

Every AST built through this module is canonical: same-operator children are
flattened, children are sorted (variables first by index, then sums, then
intersections, each compared structurally), and no internal node has a single
child.  Canonical trees therefore alternate operators level by level, and two
texts that differ only by associativity/commutativity parse to equal ASTs.
"""

from __future__ import annotations

from collections import Counter
from itertools import product
from typing import Iterable, Sequence

from rigidweb.errors import BudgetExceeded, ExprSyntaxError, VariableOutOfRange
from rigidweb.linalg import Subspace, SubspaceSystem, intersect, subspace_sum

__all__ = [
    "Expr",
    "Var",
    "Sum",
    "Meet",
    "parse",
    "to_text",
    "canonicalize",
    "is_independent_pair",
    "evaluate",
    "enumerate_multilinear",
    "DEFAULT_ENUMERATION_BUDGET",
]

DEFAULT_ENUMERATION_BUDGET = 9


class Expr:
    __slots__ = ("key", "_hash")

    def __eq__(self, other):
        return isinstance(other, Expr) and self.key == other.key

    def __lt__(self, other):
        return self.key < other.key

    def __hash__(self):
        return self._hash

    def __repr__(self):
        return f"Expr({to_text(self)!r})"

    def __str__(self):
        return to_text(self)

    def __add__(self, other):
        return Sum.of(self, other)

    def __and__(self, other):
        return Meet.of(self, other)

    @property
    def variables(self) -> tuple[int, ...]:
        """Sorted variable multiset."""
        return tuple(sorted(_leaves(self)))

    @property
    def var_set(self) -> frozenset:
        return frozenset(_leaves(self))

    @property
    def depth(self) -> int:
        if isinstance(self, Var):
            return 0
        return 1 + max(c.depth for c in self.children)

    def is_multilinear(self) -> bool:
        v = self.variables
        return len(v) == len(set(v))

    def subexpressions(self):
        """Every node of the tree, this one included (pre-order)."""
        yield self
        if isinstance(self, Node):
            for c in self.children:
                yield from c.subexpressions()


class Var(Expr):
    __slots__ = ("index",)

    def __init__(self, index: int):
        if not isinstance(index, int) or index < 1:
            raise ValueError(f"variable index must be a positive integer, got {index!r}")
        self.index = index
        self.key = (0, index)
        self._hash = hash(self.key)


class Node(Expr):
    """Internal node; build through ``Sum.of`` / ``Meet.of`` for canonical form."""

    __slots__ = ("children",)
    op = ""
    rank = 0

    def __init__(self, children: Sequence[Expr]):
        if len(children) < 2:
            raise ValueError("internal nodes need at least two children")
        self.children = tuple(children)
        self.key = (1, self.rank, tuple(c.key for c in self.children))
        self._hash = hash(self.key)

    @classmethod
    def of(cls, *args: Expr) -> Expr:
        flat = []
        for a in args:
            if isinstance(a, cls):
                flat.extend(a.children)
            else:
                flat.append(a)
        if not flat:
            raise ValueError("empty expression")
        if len(flat) == 1:
            return flat[0]
        return cls(sorted(flat))


class Sum(Node):
    __slots__ = ()
    op = "+"
    rank = 0


class Meet(Node):
    __slots__ = ()
    op = "&"
    rank = 1


def _leaves(e: Expr):
    stack = [e]
    while stack:
        x = stack.pop()
        if isinstance(x, Var):
            yield x.index
        else:
            stack.extend(x.children)


def canonicalize(e: Expr) -> Expr:
    if isinstance(e, Var):
        return e
    return type(e).of(*(canonicalize(c) for c in e.children))


def to_text(e: Expr) -> str:
    if isinstance(e, Var):
        return f"X{e.index}"
    if isinstance(e, Sum):
        return " + ".join(to_text(c) for c in e.children)
    parts = []
    for c in e.children:
        t = to_text(c)
        parts.append(f"({t})" if isinstance(c, Sum) else t)
    return " & ".join(parts)


# ---------------------------------------------------------------------------
# parsing


class _Parser:
    def __init__(self, text: str, s: int | None):
        self.text = text
        self.pos = 0
        self.s = s

    def error(self, msg):
        raise ExprSyntaxError(msg, self.text, self.pos)

    def skip(self):
        while self.pos < len(self.text) and self.text[self.pos].isspace():
            self.pos += 1

    def peek(self):
        self.skip()
        return self.text[self.pos] if self.pos < len(self.text) else ""

    def parse(self) -> Expr:
        if not self.text.strip():
            self.error("empty expression")
        e = self.expr()
        if self.peek():
            self.error(f"unexpected {self.peek()!r}")
        return e

    def expr(self):
        terms = [self.term()]
        while self.peek() == "+":
            self.pos += 1
            terms.append(self.term())
        return Sum.of(*terms)

    def term(self):
        atoms = [self.atom()]
        while self.peek() == "&":
            self.pos += 1
            atoms.append(self.atom())
        return Meet.of(*atoms)

    def atom(self):
        ch = self.peek()
        if ch == "(":
            self.pos += 1
            e = self.expr()
            if self.peek() != ")":
                self.error("expected ')'")
            self.pos += 1
            return e
        if ch == "X":
            start = self.pos
            self.pos += 1
            digits_at = self.pos
            while self.pos < len(self.text) and self.text[self.pos].isdigit():
                self.pos += 1
            digits = self.text[digits_at:self.pos]
            if not digits:
                self.error("expected variable index after 'X'")
            if digits[0] == "0":
                self.pos = digits_at
                self.error("variable index must start with a nonzero digit")
            idx = int(digits)
            if self.s is not None and idx > self.s:
                raise VariableOutOfRange(
                    f"variable X{idx} at position {start} exceeds the bound s={self.s}"
                )
            return Var(idx)
        if not ch:
            self.error("unexpected end of input")
        self.error(f"unexpected {ch!r}")


def parse(text: str, s: int | None = None) -> Expr:
    """Parse expression text into a canonical AST; ``s`` bounds variable indices."""
    return _Parser(text, s).parse()


# ---------------------------------------------------------------------------
# semantics


def is_independent_pair(p: Expr, q: Expr) -> bool:
    counts = Counter(_leaves(p))
    counts.update(_leaves(q))
    return all(c <= 1 for c in counts.values())


def evaluate(e: Expr, system: SubspaceSystem, cache: dict | None = None) -> Subspace:
    """Evaluate on a system (X_i -> i-th member, 1-based)."""
    if cache is not None and e in cache:
        return cache[e]
    if isinstance(e, Var):
        if e.index > len(system):
            raise VariableOutOfRange(
                f"variable X{e.index} used on a system with {len(system)} members"
            )
        out = system[e.index - 1]
    else:
        vals = [evaluate(c, system, cache) for c in e.children]
        out = subspace_sum(*vals) if isinstance(e, Sum) else intersect(*vals)
    if cache is not None:
        cache[e] = out
    return out


def relabel(e: Expr, mapping) -> Expr:
    """Rename variables by ``mapping[old] -> new`` (1-based), re-canonicalized."""
    if isinstance(e, Var):
        return Var(mapping[e.index])
    return type(e).of(*(relabel(c, mapping) for c in e.children))


# ---------------------------------------------------------------------------
# enumeration


def set_partitions(items: Sequence):
    """All set partitions of ``items`` (blocks keep the input order)."""
    items = list(items)
    if not items:
        yield []
        return
    first, rest = items[0], items[1:]
    for part in set_partitions(rest):
        yield [[first]] + part
        for i in range(len(part)):
            yield part[:i] + [[first] + part[i]] + part[i + 1:]


def _rooted(vars_: tuple, cls, memo) -> list:
    """Canonical multilinear expressions on exactly ``vars_`` with root ``cls``."""
    key = (vars_, cls)
    if key in memo:
        return memo[key]
    other = Meet if cls is Sum else Sum
    out = []
    for part in set_partitions(vars_):
        if len(part) < 2:
            continue
        choices = []
        for block in part:
            if len(block) == 1:
                choices.append([Var(block[0])])
            else:
                choices.append(_rooted(tuple(block), other, memo))
        for combo in product(*choices):
            out.append(cls(sorted(combo)))
    memo[key] = out
    return out


def enumerate_multilinear(var_set: Iterable[int], budget: int = DEFAULT_ENUMERATION_BUDGET) -> list:
    """All canonical expressions using each variable of ``var_set`` exactly once, sorted."""
    vars_ = tuple(sorted(set(var_set)))
    if not vars_:
        raise ValueError("need at least one variable")
    if len(vars_) > budget:
        raise BudgetExceeded(
            f"enumerating expressions on {len(vars_)} variables exceeds the budget of {budget}"
        )
    if len(vars_) == 1:
        return [Var(vars_[0])]
    memo: dict = {}
    out = _rooted(vars_, Sum, memo) + _rooted(vars_, Meet, memo)
    out.sort()
    return out


def count_multilinear(k: int) -> int:
    """Number of canonical multilinear expressions on ``k`` variables, by recurrence."""
    from math import comb

    if k < 1:
        raise ValueError("need at least one variable")
    # g[m]: expressions on m labelled variables with a fixed root operator (g[1] = 1)
    g = [0, 1]
    for m in range(2, k + 1):
        # a[j]: weighted set partitions of j items, block of size b weighted g[b]
        a = [1] + [0] * m
        for j in range(1, m):
            a[j] = sum(comb(j - 1, b - 1) * g[b] * a[j - b] for b in range(1, j + 1))
        # partitions of m items with at least two blocks
        g.append(sum(comb(m - 1, b - 1) * g[b] * a[m - b] for b in range(1, m)))
    return 1 if k == 1 else 2 * g[k]
