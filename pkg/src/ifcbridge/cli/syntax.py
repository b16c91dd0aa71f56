"""Parenthesised prefix syntax for both calculi, with named variables.

Terms are read into S-expressions first and then resolved against a scope of
names, innermost last, producing De Bruijn indices. Printing invents names
that are unique in scope, so parsing a printed term gives back the same AST.
"""

from __future__ import annotations

import re
from collections.abc import Iterator, Sequence
from dataclasses import dataclass, field
from typing import Any

from .. import cg, fg
from ..cg import syntax as cg_syntax
from ..fg import syntax as fg_syntax
from ..lattice import Label, Lattice, lattice_load
from ..state import Store
from ..types import BOOL, LABEL, LIO, UNIT, Fun, LabeledT, LabelT, Prod, Ref, Sum, TMeta, Type, UnitT


class ParseError(Exception):
    def __init__(self, line: int, col: int, expected: str) -> None:
        super().__init__(f"{line}:{col}: expected {expected}")
        self.line, self.col, self.expected = line, col, expected


# reading S-expressions

@dataclass(frozen=True)
class Atom:
    text: str
    line: int
    col: int


@dataclass(frozen=True)
class SList:
    items: tuple[Any, ...]
    line: int
    col: int


_TOKEN = re.compile(r"\s+|;[^\n]*|\(|\)|[^\s();]+")


def _tokens(text: str) -> Iterator[tuple[str, int, int]]:
    line, line_start = 1, 0
    for m in _TOKEN.finditer(text):
        tok = m.group()
        col = m.start() - line_start + 1
        if tok[0].isspace() or tok[0] == ";":
            newlines = tok.count("\n")
            if newlines:
                line += newlines
                line_start = m.start() + tok.rindex("\n") + 1
            continue
        yield tok, line, col


def read_all(text: str) -> list[Any]:
    stack: list[tuple[list, int, int]] = []
    top: list[Any] = []
    last = (1, 1)
    for tok, line, col in _tokens(text):
        last = (line, col)
        if tok == "(":
            stack.append(([], line, col))
        elif tok == ")":
            if not stack:
                raise ParseError(line, col, "an expression, not ')'")
            items, l0, c0 = stack.pop()
            node = SList(tuple(items), l0, c0)
            (stack[-1][0] if stack else top).append(node)
        else:
            (stack[-1][0] if stack else top).append(Atom(tok, line, col))
    if stack:
        _, l0, c0 = stack[-1]
        raise ParseError(last[0], last[1], f"')' closing the list opened at {l0}:{c0}")
    return top


def read_one(text: str) -> Any:
    forms = read_all(text)
    if len(forms) != 1:
        line, col = (forms[1].line, forms[1].col) if len(forms) > 1 else (1, 1)
        raise ParseError(line, col, "exactly one expression")
    return forms[0]


def _head(s: Any) -> str | None:
    if isinstance(s, SList) and s.items and isinstance(s.items[0], Atom):
        return s.items[0].text
    return None


def _arity(s: SList, n: int, shape: str) -> tuple[Any, ...]:
    if len(s.items) != n + 1:
        raise ParseError(s.line, s.col, shape)
    return s.items[1:]


def _name(s: Any, what: str = "a variable name") -> str:
    if not isinstance(s, Atom) or s.text in KEYWORDS or not _IDENT.fullmatch(s.text):
        raise ParseError(s.line, s.col, what)
    return s.text


_IDENT = re.compile(r"[A-Za-z_][A-Za-z0-9_'\-]*")

KEYWORDS = frozenset({
    "lam", "app", "let", "seq", "pair", "fst", "snd", "inl", "inr", "case", "if", "true", "false",
    "unit", "getlabel", "labelof", "leq?", "taint", "ref-I", "ref-S", "!", ":=", "labelofref",
    "wken", "return", "bind", "do", "<-", "unlabel", "tolabeled", ":", "label", "bool",
})


# types

def parse_type(s: Any, calculus: str) -> Type:
    if isinstance(s, Atom):
        match s.text:
            case "unit":
                return UNIT
            case "label":
                return LABEL
            case "bool":
                return BOOL
        raise ParseError(s.line, s.col, "a type")
    head = _head(s)
    binary = {"->": Fun, "+": Sum, "*": Prod}
    if head in binary:
        a, b = _arity(s, 2, f"({head} type type)")
        return binary[head](parse_type(a, calculus), parse_type(b, calculus))
    if head in ("ref-I", "ref-S"):
        (a,) = _arity(s, 1, f"({head} type)")
        return Ref(head[-1], parse_type(a, calculus))
    if head in ("lio", "labeled") and calculus == "cg":
        (a,) = _arity(s, 1, f"({head} type)")
        inner = parse_type(a, calculus)
        return LIO(inner) if head == "lio" else LabeledT(inner)
    raise ParseError(s.line, s.col, "a type")


def print_type(t: Type) -> str:
    match t:
        case UnitT():
            return "unit"
        case LabelT():
            return "label"
        case Sum(UnitT(), UnitT()):
            return "bool"
        case Fun(a, b):
            return f"(-> {print_type(a)} {print_type(b)})"
        case Sum(a, b):
            return f"(+ {print_type(a)} {print_type(b)})"
        case Prod(a, b):
            return f"(* {print_type(a)} {print_type(b)})"
        case Ref(k, c):
            return f"(ref-{k} {print_type(c)})"
        case LIO(c):
            return f"(lio {print_type(c)})"
        case LabeledT(c):
            return f"(labeled {print_type(c)})"
        case TMeta():
            return "_"
    raise TypeError(t)


# terms

class _Resolver:
    """Turns S-expressions into De Bruijn terms of one calculus."""

    def __init__(self, calculus: str, lattice: Lattice) -> None:
        self.calc = calculus
        self.m = fg if calculus == "fg" else cg
        self.lat = lattice

    def var_or_label(self, a: Atom, scope: Sequence[str]):
        for i, name in enumerate(reversed(scope)):
            if name == a.text and name != "_":
                return self.m.Var(i)
        if a.text in self.lat:
            return self.m.LabelLit(self.lat[a.text])
        raise ParseError(a.line, a.col, f"a bound variable or label (unknown name {a.text!r})")

    def summand(self, s: SList, scope, ctor):
        # (inl e) or (inl e : T)
        items = s.items[1:]
        if len(items) == 1:
            return ctor(None, self.expr(items[0], scope))
        if len(items) == 3 and isinstance(items[1], Atom) and items[1].text == ":":
            return ctor(parse_type(items[2], self.calc), self.expr(items[0], scope))
        raise ParseError(s.line, s.col, f"({_head(s)} expr) or ({_head(s)} expr : type)")

    def expr(self, s: Any, scope: Sequence[str]):
        m = self.m
        if isinstance(s, Atom):
            match s.text:
                case "unit" | "()":
                    return m.Unit()
                case "true":
                    return m.TRUE
                case "false":
                    return m.FALSE
                case "getlabel":
                    return m.GetLabel()
            return self.var_or_label(s, scope)
        if not s.items:
            return m.Unit()
        head = _head(s)
        if head is None:
            raise ParseError(s.line, s.col, "a keyword after '('")
        common = self.common(head, s, scope)
        if common is not None:
            return common
        special = self.fg_form(head, s, scope) if self.calc == "fg" else self.cg_form(head, s, scope)
        if special is not None:
            return special
        raise ParseError(s.items[0].line, s.items[0].col, f"a {self.calc.upper()} form (got {head!r})")

    def common(self, head: str, s: SList, scope):
        m, ex = self.m, self.expr
        match head:
            case "lam":
                items = s.items[1:]
                if len(items) == 4 and isinstance(items[1], Atom) and items[1].text == ":":
                    x = _name(items[0])
                    return m.Lam(parse_type(items[2], self.calc), ex(items[3], [*scope, x]), x)
                if len(items) == 2:
                    x = _name(items[0])
                    return m.Lam(None, ex(items[1], [*scope, x]), x)
                raise ParseError(s.line, s.col, "(lam x : type expr)")
            case "app":
                if len(s.items) < 3:
                    raise ParseError(s.line, s.col, "(app fn arg ...)")
                out = ex(s.items[1], scope)
                for arg in s.items[2:]:
                    out = m.App(out, ex(arg, scope))
                return out
            case "pair":
                a, b = _arity(s, 2, "(pair expr expr)")
                return m.Pair(ex(a, scope), ex(b, scope))
            case "fst" | "snd":
                (a,) = _arity(s, 1, f"({head} expr)")
                return (m.Fst if head == "fst" else m.Snd)(ex(a, scope))
            case "inl":
                return self.summand(s, scope, m.Inl)
            case "inr":
                return self.summand(s, scope, m.Inr)
            case "case":
                sc, x, e1, y, e2 = _arity(s, 5, "(case expr x expr y expr)")
                xn, yn = _name(x), _name(y)
                return m.Case(ex(sc, scope), ex(e1, [*scope, xn]), ex(e2, [*scope, yn]), xn, yn)
            case "if":
                c, a, b = _arity(s, 3, "(if expr expr expr)")
                return m.Case(ex(c, scope), ex(a, [*scope, "_"]), ex(b, [*scope, "_"]), "_", "_")
            case "leq?":
                a, b = _arity(s, 2, "(leq? expr expr)")
                return m.LabelLeq(ex(a, scope), ex(b, scope))
            case "wken":
                names, body = _arity(s, 2, "(wken (x ...) expr)")
                if not isinstance(names, SList):
                    raise ParseError(names.line, names.col, "a list of variables to drop")
                drop = set()
                for a in names.items:
                    var = self.var_or_label(a, scope) if isinstance(a, Atom) else None
                    if not isinstance(var, m.Var):
                        raise ParseError(a.line, a.col, "a bound variable")
                    drop.add(var.index)
                n = len(scope)
                inner = [x for i, x in enumerate(scope) if (n - 1 - i) not in drop]
                return m.Wken(frozenset(drop), ex(body, inner))
            case "labelof":
                (a,) = _arity(s, 1, "(labelof expr)")
                return m.LabelOf(ex(a, scope))
            case "ref-I" | "ref-S":
                (a,) = _arity(s, 1, f"({head} expr)")
                return m.New(head[-1], ex(a, scope))
            case "!":
                (a,) = _arity(s, 1, "(! expr)")
                return m.Read(ex(a, scope))
            case ":=":
                a, b = _arity(s, 2, "(:= expr expr)")
                return m.Write(ex(a, scope), ex(b, scope))
            case "labelofref":
                (a,) = _arity(s, 1, "(labelofref expr)")
                return m.LabelOfRef(ex(a, scope))
        return None

    def fg_form(self, head: str, s: SList, scope):
        ex = self.expr
        match head:
            case "let":
                x, e1, e2 = _arity(s, 3, "(let x expr expr)")
                xn = _name(x)
                return fg.App(fg.Lam(None, ex(e2, [*scope, xn]), xn), ex(e1, scope))
            case "seq":
                if len(s.items) < 3:
                    raise ParseError(s.line, s.col, "(seq expr expr ...)")
                return self._fg_seq(list(s.items[1:]), scope)
            case "taint":
                a, b = _arity(s, 2, "(taint expr expr)")
                return fg.Taint(ex(a, scope), ex(b, scope))
        return None

    def _fg_seq(self, items: list, scope):
        if len(items) == 1:
            return self.expr(items[0], scope)
        first = self.expr(items[0], scope)
        return fg.App(fg.Lam(None, self._fg_seq(items[1:], [*scope, "_"]), "_"), first)

    def cg_form(self, head: str, s: SList, scope):
        ex = self.expr
        match head:
            case "return":
                (a,) = _arity(s, 1, "(return expr)")
                return cg.Return(ex(a, scope))
            case "bind":
                e1, x, e2 = _arity(s, 3, "(bind expr x expr)")
                xn = _name(x)
                return cg.Bind(ex(e1, scope), ex(e2, [*scope, xn]), xn)
            case "do":
                if len(s.items) < 2:
                    raise ParseError(s.line, s.col, "(do step ... expr)")
                return self._do(list(s.items[1:]), scope)
            case "unlabel":
                (a,) = _arity(s, 1, "(unlabel expr)")
                return cg.Unlabel(ex(a, scope))
            case "tolabeled":
                (a,) = _arity(s, 1, "(tolabeled expr)")
                return cg.ToLabeled(ex(a, scope))
            case "taint":
                (a,) = _arity(s, 1, "(taint expr)")
                return cg.Taint(ex(a, scope))
        return None

    def _do(self, items: list, scope):
        first, rest = items[0], items[1:]
        if not rest:
            if _head(first) == "<-":
                raise ParseError(first.line, first.col, "a final expression after the last binding")
            return self.expr(first, scope)
        if _head(first) == "<-":
            x, e = _arity(first, 2, "(<- x expr)")
            xn = _name(x)
            return cg.Bind(self.expr(e, scope), self._do(rest, [*scope, xn]), xn)
        return cg.Bind(self.expr(first, scope), self._do(rest, [*scope, "_"]), "_")


# printing

def free_vars(calculus: str, e, *, with_drops: bool = False) -> set[int]:
    """Free indices of ``e``; ``with_drops`` also counts variables a wken names."""
    m = fg if calculus == "fg" else cg
    fv = lambda x: free_vars(calculus, x, with_drops=with_drops)  # noqa: E731
    match e:
        case m.Var(i):
            return {i}
        case m.Lam(_, body):
            return _down(fv(body), 1)
        case m.Case(sc, a, b):
            return fv(sc) | _down(fv(a), 1) | _down(fv(b), 1)
        case m.Wken(drop, inner):
            kept = set(_kept_indices(drop, fv(inner)))
            return kept | set(drop) if with_drops else kept
    if calculus == "cg" and isinstance(e, cg.Bind):
        return fv(e.first) | _down(fv(e.then), 1)
    out: set[int] = set()
    for child in _children(calculus, e):
        out |= fv(child)
    return out


def _children(calculus: str, e) -> list:
    return (fg_syntax if calculus == "fg" else cg_syntax).children(e)


def _down(vs: set[int], k: int) -> set[int]:
    return {v - k for v in vs if v >= k}


def _kept_indices(drop: frozenset[int], inner: set[int]) -> list[int]:
    """Outer index for each inner index of a weakened environment."""
    out, j, i = [], 0, 0
    wanted = sorted(inner)
    for target in wanted:
        while True:
            if i not in drop:
                if j == target:
                    out.append(i)
                    j += 1
                    i += 1
                    break
                j += 1
            i += 1
    return out


class _Printer:
    def __init__(self, calculus: str, reserved: set[str]) -> None:
        self.calc = calculus
        self.m = fg if calculus == "fg" else cg
        self.reserved = reserved

    def fresh(self, hint: str, scope: Sequence[str], used: bool) -> str:
        if hint == "_" and not used:
            return "_"
        base = hint if hint and hint != "_" and _IDENT.fullmatch(hint) else "x"
        base = base.rstrip("0123456789") or "x"
        taken = set(scope) | self.reserved | KEYWORDS
        if base not in taken:
            return base
        n = 1
        while f"{base}{n}" in taken:
            n += 1
        return f"{base}{n}"

    def binder(self, hint: str, body, scope) -> str:
        return self.fresh(hint, scope, 0 in free_vars(self.calc, body, with_drops=True))

    def expr(self, e, scope: list[str]) -> str:
        m, p = self.m, self.expr
        match e:
            case m.Var(i):
                if i >= len(scope):
                    raise ValueError(f"free variable #{i} has no name")
                return scope[len(scope) - 1 - i]
            case m.Unit():
                return "unit"
            case m.LabelLit(lab):
                return lab.name
            case m.GetLabel():
                return "getlabel"
            case m.Inl(UnitT(), m.Unit()):
                return "true"
            case m.Inr(UnitT(), m.Unit()):
                return "false"
            case m.Lam(ann, body, name) if not (self.calc == "fg" and ann is None):
                x = self.binder(name, body, scope)
                if ann is None:
                    return f"(lam {x} {p(body, [*scope, x])})"
                return f"(lam {x} : {print_type(ann)} {p(body, [*scope, x])})"
            case m.App(m.Lam(None, body, "_"), bound) if self.calc == "fg" and 0 not in free_vars("fg", body, with_drops=True):
                return f"(seq {p(bound, scope)} {p(body, [*scope, '_'])})"
            case m.App(m.Lam(None, body, name), bound) if self.calc == "fg":
                x = self.binder(name, body, scope)
                return f"(let {x} {p(bound, scope)} {p(body, [*scope, x])})"
            case m.App(f, a):
                return f"(app {p(f, scope)} {p(a, scope)})"
            case m.Pair(a, b):
                return f"(pair {p(a, scope)} {p(b, scope)})"
            case m.Fst(a):
                return f"(fst {p(a, scope)})"
            case m.Snd(a):
                return f"(snd {p(a, scope)})"
            case m.Inl(other, a) | m.Inr(other, a):
                head = "inl" if isinstance(e, m.Inl) else "inr"
                if other is None:
                    return f"({head} {p(a, scope)})"
                return f"({head} {p(a, scope)} : {print_type(other)})"
            case m.Case(sc, a, b, "_", "_") if not ({0} & (free_vars(self.calc, a, with_drops=True)
                                                                      | free_vars(self.calc, b, with_drops=True))):
                return f"(if {p(sc, scope)} {p(a, [*scope, '_'])} {p(b, [*scope, '_'])})"
            case m.Case(sc, a, b, xn, yn):
                x = self.binder(xn, a, scope)
                y = self.binder(yn, b, scope)
                return f"(case {p(sc, scope)} {x} {p(a, [*scope, x])} {y} {p(b, [*scope, y])})"
            case m.LabelLeq(a, b):
                return f"(leq? {p(a, scope)} {p(b, scope)})"
            case m.Wken(drop, inner):
                n = len(scope)
                if any(i >= n for i in drop):
                    raise ValueError("wken drops a variable with no name")
                names = " ".join(scope[n - 1 - i] for i in sorted(drop))
                kept = [x for i, x in enumerate(scope) if (n - 1 - i) not in drop]
                return f"(wken ({names}) {p(inner, kept)})"
            case m.LabelOf(a):
                return f"(labelof {p(a, scope)})"
            case m.New(kind, a):
                return f"(ref-{kind} {p(a, scope)})"
            case m.Read(a):
                return f"(! {p(a, scope)})"
            case m.Write(a, b):
                return f"(:= {p(a, scope)} {p(b, scope)})"
            case m.LabelOfRef(a):
                return f"(labelofref {p(a, scope)})"
        if self.calc == "fg":
            match e:
                case fg.Taint(a, b):
                    return f"(taint {p(a, scope)} {p(b, scope)})"
        else:
            match e:
                case cg.Taint(a):
                    return f"(taint {p(a, scope)})"
                case cg.Return(a):
                    return f"(return {p(a, scope)})"
                case cg.Bind(a, b, name):
                    x = self.binder(name, b, scope)
                    return f"(bind {p(a, scope)} {x} {p(b, [*scope, x])})"
                case cg.Unlabel(a):
                    return f"(unlabel {p(a, scope)})"
                case cg.ToLabeled(a):
                    return f"(tolabeled {p(a, scope)})"
        raise TypeError(f"cannot print {e!r}")


def _reserved(lattice: Lattice | None, e=None) -> set[str]:
    return {p.name for p in lattice.points} if lattice is not None else set()


def _labels_in(calculus: str, e) -> set[str]:
    m = fg if calculus == "fg" else cg
    out: set[str] = set()

    def walk(x):
        if isinstance(x, m.LabelLit):
            out.add(x.label.name)
            for p in x.label.lattice.points:
                out.add(p.name)
        for c in _children(calculus, x):
            walk(c)

    walk(e)
    return out


def print_expr(calculus: str, e, scope: Sequence[str] = (), lattice: Lattice | None = None) -> str:
    """Print ``e`` with free variables named by ``scope`` (innermost last)."""
    reserved = _reserved(lattice) | _labels_in(calculus, e)
    return _Printer(calculus, reserved).expr(e, list(scope))


def parse_expr(text: str | Any, calculus: str, lattice: Lattice | None = None,
               scope: Sequence[str] = ()):
    """Parse one term; ``scope`` names its free variables, innermost last."""
    lattice = lattice or lattice_load("two-point")
    sexp = read_one(text) if isinstance(text, str) else text
    return _Resolver(calculus, lattice).expr(sexp, list(scope))


# program files

@dataclass
class SourceProgram:
    calculus: str
    lattice: Lattice
    lattice_ref: str
    pc: Label
    inputs: list[tuple[str, Type, Any]] = field(default_factory=list)
    store: Store = field(default_factory=Store)
    heap: tuple = ()
    main: Any = None

    @property
    def names(self) -> list[str]:
        return [n for n, _, _ in self.inputs]

    @property
    def ctx(self) -> tuple[Type, ...]:
        return tuple(t for _, t, _ in reversed(self.inputs))

    @property
    def env(self) -> tuple:
        return tuple(v for _, _, v in reversed(self.inputs))


def _label(s: Any, lattice: Lattice) -> Label:
    if isinstance(s, Atom) and s.text in lattice:
        return lattice[s.text]
    raise ParseError(s.line, s.col, "a label of the lattice")


def _int(s: Any) -> int:
    if isinstance(s, Atom) and s.text.isdigit():
        return int(s.text)
    raise ParseError(s.line, s.col, "an address")


class _Values:
    def __init__(self, calculus: str, lattice: Lattice) -> None:
        self.calc = calculus
        self.lat = lattice
        self.terms = _Resolver(calculus, lattice)

    def fg_value(self, s: Any) -> fg.Value:
        if _head(s) != "^":
            raise ParseError(s.line, s.col, "a labeled value (^ raw label)")
        raw, lab = _arity(s, 2, "(^ raw label)")
        return fg.Value(self.fg_raw(raw), _label(lab, self.lat))

    def _bool(self, b: bool, payload):
        return payload

    def fg_raw(self, s: Any) -> fg.Raw:
        bottom = self.lat.bottom or self.lat.points[0]
        if isinstance(s, Atom):
            match s.text:
                case "unit" | "()":
                    return fg.UnitR()
                case "true":
                    return fg.InlR(UNIT, fg.Value(fg.UnitR(), bottom))
                case "false":
                    return fg.InrR(UNIT, fg.Value(fg.UnitR(), bottom))
            return fg.LabelR(_label(s, self.lat))
        head = _head(s)
        match head:
            case "inl" | "inr":
                ctor = fg.InlR if head == "inl" else fg.InrR
                other, v = self._summand(s)
                return ctor(other, self.fg_value(v))
            case "pair":
                a, b = _arity(s, 2, "(pair value value)")
                return fg.PairR(self.fg_value(a), self.fg_value(b))
            case "addr-I":
                lab, n = _arity(s, 2, "(addr-I label n)")
                return fg.RefI(_label(lab, self.lat), _int(n))
            case "addr-S":
                (n,) = _arity(s, 1, "(addr-S n)")
                return fg.RefS(_int(n))
            case "lam":
                lam = self.terms.expr(s, [])
                return fg.Clo(lam.ann, lam.body, (), lam.name)
        raise ParseError(s.line, s.col, "an FG raw value")

    def _summand(self, s: SList):
        items = s.items[1:]
        if len(items) == 1:
            return None, items[0]
        if len(items) == 3 and isinstance(items[1], Atom) and items[1].text == ":":
            return parse_type(items[2], self.calc), items[0]
        raise ParseError(s.line, s.col, f"({_head(s)} value) or ({_head(s)} value : type)")

    def cg_value(self, s: Any) -> cg.Value:
        if isinstance(s, Atom):
            match s.text:
                case "unit" | "()":
                    return cg.UnitV()
                case "true":
                    return cg.InlV(UNIT, cg.UnitV())
                case "false":
                    return cg.InrV(UNIT, cg.UnitV())
            return cg.LabelV(_label(s, self.lat))
        head = _head(s)
        match head:
            case "inl" | "inr":
                ctor = cg.InlV if head == "inl" else cg.InrV
                other, v = self._summand(s)
                return ctor(other, self.cg_value(v))
            case "pair":
                a, b = _arity(s, 2, "(pair value value)")
                return cg.PairV(self.cg_value(a), self.cg_value(b))
            case "labeled":
                lab, v = _arity(s, 2, "(labeled label value)")
                return cg.LabeledV(_label(lab, self.lat), self.cg_value(v))
            case "addr-I":
                lab, n = _arity(s, 2, "(addr-I label n)")
                return cg.RefIV(_label(lab, self.lat), _int(n))
            case "addr-S":
                (n,) = _arity(s, 1, "(addr-S n)")
                return cg.RefSV(_int(n))
            case "lam":
                lam = self.terms.expr(s, [])
                return cg.FunClo(lam.ann, lam.body, (), lam.name)
            case "thunk":
                (body,) = _arity(s, 1, "(thunk expr)")
                t = self.terms.expr(body, [])
                if not isinstance(t, cg.Thunk):
                    raise ParseError(body.line, body.col, "a monadic expression")
                return cg.ThunkClo(t, ())
        raise ParseError(s.line, s.col, "a CG value")

    def value(self, s: Any):
        return self.fg_value(s) if self.calc == "fg" else self.cg_value(s)


def parse_program(text: str, calculus: str, lattice: Lattice | None = None) -> SourceProgram:
    """Parse a program file: optional ``(lattice ..)``, ``(pc ..)``, ``(input name type value)``,
    ``(store (label v ...) ...)``, ``(heap v ...)`` forms, then ``(main expr)``."""
    forms = read_all(text)
    lat_ref = "two-point"
    for f in forms:
        if _head(f) == "lattice":
            (ref,) = _arity(f, 1, "(lattice name-or-path)")
            if not isinstance(ref, Atom):
                raise ParseError(ref.line, ref.col, "a lattice name or path")
            lat_ref = ref.text.strip('"')
    if lattice is None:
        try:
            lattice = lattice_load(lat_ref)
        except Exception as exc:
            raise ParseError(1, 1, f"a loadable lattice ({exc})") from exc
    prog = SourceProgram(calculus, lattice, lat_ref, lattice.bottom or lattice.points[0])
    vals = _Values(calculus, lattice)
    mem: dict[Label, list] = {}
    for f in forms:
        head = _head(f)
        match head:
            case "lattice":
                pass
            case "pc":
                (lab,) = _arity(f, 1, "(pc label)")
                prog.pc = _label(lab, lattice)
            case "input":
                name, ty, v = _arity(f, 3, "(input name type value)")
                prog.inputs.append((_name(name), parse_type(ty, calculus), vals.value(v)))
            case "store":
                for m in f.items[1:]:
                    if not isinstance(m, SList) or not m.items:
                        raise ParseError(m.line, m.col, "(label value ...)")
                    lab = _label(m.items[0], lattice)
                    conv = vals.fg_raw if calculus == "fg" else vals.cg_value
                    mem.setdefault(lab, []).extend(conv(x) for x in m.items[1:])
            case "heap":
                cells = tuple(vals.value(x) for x in f.items[1:])
                if calculus == "cg" and not all(isinstance(c, cg.LabeledV) for c in cells):
                    raise ParseError(f.line, f.col, "heap cells of the form (labeled label value)")
                prog.heap = cells
            case "main":
                (e,) = _arity(f, 1, "(main expr)")
                prog.main = parse_expr(e, calculus, lattice, prog.names)
            case _:
                line, col = (f.line, f.col)
                raise ParseError(line, col, "one of lattice, pc, input, store, heap, main")
    if prog.main is None:
        raise ParseError(1, 1, "a (main expr) form")
    prog.store = Store.of(mem)
    return prog


def print_value(calculus: str, v, lattice: Lattice | None = None) -> str:
    """Literal syntax for an input value; closures must have empty environments."""
    if calculus == "fg":
        return f"(^ {_print_fg_raw(v.raw, lattice)} {v.label.name})"
    return _print_cg_value(v, lattice)


def _print_fg_raw(r: fg.Raw, lattice) -> str:
    match r:
        case fg.UnitR():
            return "unit"
        case fg.LabelR(lab):
            return lab.name
        case fg.InlR(other, v) | fg.InrR(other, v):
            head = "inl" if isinstance(r, fg.InlR) else "inr"
            ann = "" if other is None else f" : {print_type(other)}"
            return f"({head} {print_value('fg', v)}{ann})"
        case fg.PairR(a, b):
            return f"(pair {print_value('fg', a)} {print_value('fg', b)})"
        case fg.RefI(mem, n):
            return f"(addr-I {mem.name} {n})"
        case fg.RefS(n):
            return f"(addr-S {n})"
        case fg.Clo(ann, body, env, name):
            if env:
                raise ValueError("closure literals must have an empty environment")
            return print_expr("fg", fg.Lam(ann, body, name), (), lattice)
    raise TypeError(r)


def _print_cg_value(v: cg.Value, lattice) -> str:
    match v:
        case cg.UnitV():
            return "unit"
        case cg.LabelV(lab):
            return lab.name
        case cg.InlV(UnitT(), cg.UnitV()):
            return "true"
        case cg.InrV(UnitT(), cg.UnitV()):
            return "false"
        case cg.InlV(other, w) | cg.InrV(other, w):
            head = "inl" if isinstance(v, cg.InlV) else "inr"
            ann = "" if other is None else f" : {print_type(other)}"
            return f"({head} {_print_cg_value(w, lattice)}{ann})"
        case cg.PairV(a, b):
            return f"(pair {_print_cg_value(a, lattice)} {_print_cg_value(b, lattice)})"
        case cg.LabeledV(lab, w):
            return f"(labeled {lab.name} {_print_cg_value(w, lattice)})"
        case cg.RefIV(mem, n):
            return f"(addr-I {mem.name} {n})"
        case cg.RefSV(n):
            return f"(addr-S {n})"
        case cg.FunClo(ann, body, env, name):
            if env:
                raise ValueError("closure literals must have an empty environment")
            return print_expr("cg", cg.Lam(ann, body, name), (), lattice)
        case cg.ThunkClo(t, env):
            if env:
                raise ValueError("thunk literals must have an empty environment")
            return f"(thunk {print_expr('cg', t, (), lattice)})"
    raise TypeError(v)


def print_program(prog: SourceProgram) -> str:
    calc, lat = prog.calculus, prog.lattice
    lines = [f"(lattice {prog.lattice_ref})", f"(pc {prog.pc.name})"]
    for name, t, v in prog.inputs:
        lines.append(f"(input {name} {print_type(t)} {print_value(calc, v, lat)})")
    if prog.store.items:
        mems = []
        for lab, cells in prog.store:
            if calc == "fg":
                shown = " ".join(_print_fg_raw(r, lat) for r in cells)
            else:
                shown = " ".join(_print_cg_value(x, lat) for x in cells)
            mems.append(f"({lab.name} {shown})")
        lines.append(f"(store {' '.join(mems)})")
    if prog.heap:
        lines.append(f"(heap {' '.join(print_value(calc, v, lat) for v in prog.heap)})")
    lines.append(f"(main {print_expr(calc, prog.main, prog.names, lat)})")
    return "\n".join(lines) + "\n"
