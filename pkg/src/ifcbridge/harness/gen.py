"""Random generation of well-typed programs for both calculi."""

from __future__ import annotations

import random
from collections.abc import Callable, Sequence

from .. import cg, fg
from ..lattice import Label, Lattice
from ..types import BOOL, LABEL, LIO, UNIT, Fun, LabeledT, LabelT, Prod, Ref, Sum, Type, UnitT
from .config import DEFAULT_WEIGHTS


class Uninhabitable(Exception):
    pass


def _split(rng: random.Random, budget: int, parts: int) -> list[int]:
    """Divide ``budget`` nodes among ``parts`` children."""
    if parts <= 0:
        return []
    cuts = sorted(rng.randint(0, max(budget, 0)) for _ in range(parts - 1))
    bounds = [0, *cuts, max(budget, 0)]
    return [bounds[i + 1] - bounds[i] for i in range(parts)]


def _pick(rng: random.Random, options: list[tuple[str, float]]) -> str:
    total = sum(w for _, w in options)
    x = rng.random() * total
    for name, w in options:
        x -= w
        if x < 0:
            return name
    return options[-1][0]


class _Base:
    def __init__(self, lattice: Lattice, rng: random.Random, weights: dict[str, float] | None = None,
                 fs_ratio: float = 0.5, type_depth: int = 2) -> None:
        self.lat = lattice
        self.rng = rng
        self.w = dict(DEFAULT_WEIGHTS)
        if weights:
            self.w.update(weights)
        self.fs_ratio = fs_ratio
        self.type_depth = type_depth

    def kind(self) -> str:
        return "S" if self.rng.random() < self.fs_ratio else "I"

    def label(self) -> Label:
        return self.rng.choice(self.lat.points)

    def canonical_label(self) -> Label:
        return self.lat.bottom or self.lat.points[0]


class FGGen(_Base):
    """Type-directed generator for fine-grained expressions."""

    def gen_type(self, depth: int | None = None) -> Type:
        depth = self.type_depth if depth is None else depth
        r = self.rng.random()
        if depth <= 0 or r < 0.45:
            return self.rng.choice([UNIT, LABEL, BOOL, BOOL])
        sub = depth - 1
        choice = self.rng.choice(["prod", "sum", "fun", "ref", "ref"])
        if choice == "prod":
            return Prod(self.gen_type(sub), self.gen_type(sub))
        if choice == "sum":
            return Sum(self.gen_type(sub), self.gen_type(sub))
        if choice == "fun":
            return Fun(self.gen_type(sub), self.gen_type(sub))
        return Ref(self.kind(), self.gen_type(sub))

    def canon(self, t: Type) -> fg.Expr:
        match t:
            case UnitT():
                return fg.Unit()
            case LabelT():
                return fg.LabelLit(self.canonical_label())
            case Sum(a, b):
                return fg.Inl(b, self.canon(a))
            case Prod(a, b):
                return fg.Pair(self.canon(a), self.canon(b))
            case Fun(a, b):
                return fg.Lam(a, self.canon(b))
            case Ref(k, c):
                return fg.New(k, self.canon(c))
        raise Uninhabitable(str(t))

    def gen(self, ctx: Sequence[Type], t: Type, size: int) -> fg.Expr:
        """Expression of type ``t``; a non-positive size gives the canonical inhabitant."""
        ctx = tuple(ctx)
        if size <= 0:
            return self.canon(t)
        return self.sub(ctx, t, size)

    def sub(self, ctx: tuple[Type, ...], t: Type, size: int) -> fg.Expr:
        rng, w = self.rng, self.w
        vars_ = [i for i, s in enumerate(ctx) if s == t]
        if size <= 0:
            # leaves prefer the variables in scope so inputs influence the result
            if vars_ and rng.random() < 0.7:
                return fg.Var(rng.choice(vars_))
            return self.canon(t)
        opts: list[tuple[str, float]] = [("intro", w["intro"])]
        if vars_:
            opts.append(("var", w["var"] * (2 if size <= 2 else 1)))
        elims = self.eliminators(ctx, t)
        if elims and size >= 2:
            opts.append(("elim", w["var"]))
        if size >= 2:
            opts += [("app", w["app"]), ("taint", w["taint"]), ("read", w["read"]),
                     ("let", w["let"]), ("proj", w["proj"]), ("seq", w["seq"])]
            if any(isinstance(s, Sum) for s in ctx):
                opts.append(("case", w["case"] * 1.5))
            else:
                opts.append(("case", w["case"] * 0.5))
            if ctx:
                opts.append(("wken", w["wken"]))
            if t == UNIT:
                opts.append(("write", w["write"]))
            if t == LABEL or t == BOOL:
                opts.append(("label", w["label"]))
        choice = _pick(rng, opts)
        body = size - 1
        match choice:
            case "var":
                return fg.Var(rng.choice(vars_))
            case "elim":
                return rng.choice(elims)(body)
            case "intro":
                return self.intro(ctx, t, body)
            case "app":
                fun_vars = [s for s in ctx if isinstance(s, Fun) and s.res == t]
                arg_t = rng.choice(fun_vars).arg if fun_vars and rng.random() < 0.7 else self.gen_type(1)
                s1, s2 = _split(rng, body, 2)
                return fg.App(self.sub(ctx, Fun(arg_t, t), s1), self.sub(ctx, arg_t, s2))
            case "case":
                sums = [s for s in ctx if isinstance(s, Sum)]
                st = rng.choice(sums) if sums and rng.random() < 0.8 else Sum(self.gen_type(1), self.gen_type(1))
                s0, s1, s2 = _split(rng, body, 3)
                return fg.Case(self.sub(ctx, st, s0),
                               self.sub((st.left,) + ctx, t, s1),
                               self.sub((st.right,) + ctx, t, s2))
            case "let":
                bt = Ref(self.kind(), self.gen_type(1)) if rng.random() < 0.5 else self.gen_type(1)
                s1, s2 = _split(rng, body, 2)
                return fg.App(fg.Lam(bt, self.sub((bt,) + ctx, t, s2)), self.sub(ctx, bt, s1))
            case "seq":
                s1, s2 = _split(rng, body, 2)
                first = self.effect(ctx, max(s1, 1))
                return fg.App(fg.Lam(UNIT, self.sub((UNIT,) + ctx, t, s2), "_"), first)
            case "proj":
                other = self.gen_type(1)
                if rng.random() < 0.5:
                    return fg.Fst(self.sub(ctx, Prod(t, other), body))
                return fg.Snd(self.sub(ctx, Prod(other, t), body))
            case "taint":
                s1, s2 = _split(rng, body, 2)
                return fg.Taint(self.sub(ctx, LABEL, s1), self.sub(ctx, t, s2))
            case "read":
                refs = [s for s in ctx if isinstance(s, Ref) and s.content == t]
                rt = rng.choice(refs) if refs and rng.random() < 0.8 else Ref(self.kind(), t)
                return fg.Read(self.sub(ctx, rt, body))
            case "write":
                return self.effect(ctx, body + 1)
            case "label":
                return self.label_form(ctx, t, body)
            case "wken":
                drop = frozenset({rng.randrange(len(ctx))})
                inner = tuple(s for i, s in enumerate(ctx) if i not in drop)
                return fg.Wken(drop, self.sub(inner, t, body))
        raise AssertionError(choice)

    def eliminators(self, ctx: tuple[Type, ...], t: Type) -> list[Callable[[int], fg.Expr]]:
        """Ways to reach ``t`` by taking apart a variable in scope."""
        out: list[Callable[[int], fg.Expr]] = []
        for i, s in enumerate(ctx):
            match s:
                case Prod(a, b):
                    if a == t:
                        out.append(lambda n, i=i: fg.Fst(fg.Var(i)))
                    if b == t:
                        out.append(lambda n, i=i: fg.Snd(fg.Var(i)))
                case Fun(a, b) if b == t:
                    out.append(lambda n, i=i, a=a: fg.App(fg.Var(i), self.sub(ctx, a, n)))
                case Ref(_, c) if c == t:
                    out.append(lambda n, i=i: fg.Read(fg.Var(i)))
                case Sum(a, b):
                    def case(n, i=i, a=a, b=b):
                        s1, s2 = _split(self.rng, n, 2)
                        return fg.Case(fg.Var(i), self.sub((a,) + ctx, t, s1), self.sub((b,) + ctx, t, s2))
                    out.append(case)
        return out

    def effect(self, ctx: tuple[Type, ...], size: int) -> fg.Expr:
        refs = [s for s in ctx if isinstance(s, Ref)]
        rt = self.rng.choice(refs) if refs and self.rng.random() < 0.85 else Ref(self.kind(), self.gen_type(1))
        s1, s2 = _split(self.rng, size - 1, 2)
        return fg.Write(self.sub(ctx, rt, s1), self.sub(ctx, rt.content, s2))

    def label_form(self, ctx: tuple[Type, ...], t: Type, size: int) -> fg.Expr:
        rng = self.rng
        if t == BOOL:
            s1, s2 = _split(rng, size, 2)
            return fg.LabelLeq(self.sub(ctx, LABEL, s1), self.sub(ctx, LABEL, s2))
        r = rng.random()
        if r < 0.45:
            src = rng.choice(ctx) if ctx and rng.random() < 0.7 else self.gen_type(1)
            return fg.LabelOf(self.sub(ctx, src, size))
        if r < 0.7:
            return fg.GetLabel()
        refs = [s for s in ctx if isinstance(s, Ref)]
        rt = rng.choice(refs) if refs else Ref(self.kind(), self.gen_type(1))
        return fg.LabelOfRef(self.sub(ctx, rt, size))

    def intro(self, ctx: tuple[Type, ...], t: Type, size: int) -> fg.Expr:
        rng = self.rng
        match t:
            case UnitT():
                return fg.Unit()
            case LabelT():
                return fg.LabelLit(self.label()) if rng.random() < 0.7 else fg.GetLabel()
            case Sum(a, b):
                if rng.random() < 0.5:
                    return fg.Inl(b, self.sub(ctx, a, size))
                return fg.Inr(a, self.sub(ctx, b, size))
            case Prod(a, b):
                s1, s2 = _split(rng, size, 2)
                return fg.Pair(self.sub(ctx, a, s1), self.sub(ctx, b, s2))
            case Fun(a, b):
                return fg.Lam(a, self.sub((a,) + ctx, b, size))
            case Ref(k, c):
                return fg.New(k, self.sub(ctx, c, size))
        raise Uninhabitable(str(t))


class CGGen(_Base):
    """Generator for coarse-grained expressions; monadic generation always succeeds."""

    def gen_type(self, depth: int | None = None) -> Type:
        depth = self.type_depth if depth is None else depth
        r = self.rng.random()
        if depth <= 0 or r < 0.4:
            return self.rng.choice([UNIT, LABEL, BOOL, BOOL])
        sub = depth - 1
        choice = self.rng.choice(["labeled", "labeled", "prod", "sum", "fun", "ref", "ref"])
        if choice == "labeled":
            return LabeledT(self.gen_type(sub))
        if choice == "prod":
            return Prod(self.gen_type(sub), self.gen_type(sub))
        if choice == "sum":
            return Sum(self.gen_type(sub), self.gen_type(sub))
        if choice == "fun":
            return Fun(self.gen_type(sub), LIO(self.gen_type(sub)))
        return Ref(self.kind(), self.gen_type(sub))

    # canonical inhabitants

    def canon_p(self, ctx: tuple[Type, ...], t: Type) -> cg.Expr | None:
        match t:
            case UnitT():
                return cg.Unit()
            case LabelT():
                return cg.LabelLit(self.canonical_label())
            case LIO(s):
                return self.canon_m(ctx, s)
            case Sum(a, b):
                inner = self.canon_p(ctx, a)
                if inner is not None:
                    return cg.Inl(b, inner)
                inner = self.canon_p(ctx, b)
                return None if inner is None else cg.Inr(a, inner)
            case Prod(a, b):
                x, y = self.canon_p(ctx, a), self.canon_p(ctx, b)
                return None if x is None or y is None else cg.Pair(x, y)
            case Fun(a, b):
                body = self.canon_p((a,) + ctx, b)
                return None if body is None else cg.Lam(a, body)
        for i, s in enumerate(ctx):
            if s == t:
                return cg.Var(i)
        return None

    def canon_m(self, ctx: tuple[Type, ...], t: Type) -> cg.Expr:
        pure = self.canon_p(ctx, t)
        if pure is not None:
            return cg.Return(pure)
        match t:
            case LabeledT(s):
                return cg.ToLabeled(self.canon_m(ctx, s))
            case Ref(k, s):
                return cg.Bind(cg.ToLabeled(self.canon_m(ctx, s)), cg.New(k, cg.Var(0)))
            case Prod(a, b):
                return cg.Bind(self.canon_m(ctx, a),
                               cg.Bind(self.canon_m((a,) + ctx, b), cg.Return(cg.Pair(cg.Var(1), cg.Var(0)))))
            case Sum(a, b):
                return cg.Bind(self.canon_m(ctx, a), cg.Return(cg.Inl(b, cg.Var(0))))
        raise Uninhabitable(str(t))

    # pure layer

    def gen_p(self, ctx: Sequence[Type], t: Type, size: int) -> cg.Expr | None:
        ctx = tuple(ctx)
        if isinstance(t, LIO):
            return self.gen_m(ctx, t.res, size)
        rng, w = self.rng, self.w
        vars_ = [i for i, s in enumerate(ctx) if s == t]
        if size <= 0:
            if vars_ and rng.random() < 0.7:
                return cg.Var(rng.choice(vars_))
            return self.canon_p(ctx, t)
        opts: list[tuple[str, float]] = [("intro", w["intro"])]
        if vars_:
            opts.append(("var", w["var"] * 3))
        if size >= 2:
            opts += [("app", w["app"] * 0.5), ("proj", w["proj"]), ("case", w["case"] * 0.7)]
            if ctx:
                opts.append(("wken", w["wken"]))
            if t == BOOL:
                opts.append(("label", w["label"]))
        e = self._pure_choice(_pick(rng, opts), ctx, t, size - 1, vars_)
        return e if e is not None else self.canon_p(ctx, t)

    def _pure_choice(self, choice: str, ctx, t, body: int, vars_) -> cg.Expr | None:
        rng = self.rng
        match choice:
            case "var":
                return cg.Var(rng.choice(vars_))
            case "intro":
                match t:
                    case UnitT():
                        return cg.Unit()
                    case LabelT():
                        return cg.LabelLit(self.label())
                    case Sum(a, b):
                        if rng.random() < 0.5:
                            inner = self.gen_p(ctx, a, body)
                            return None if inner is None else cg.Inl(b, inner)
                        inner = self.gen_p(ctx, b, body)
                        return None if inner is None else cg.Inr(a, inner)
                    case Prod(a, b):
                        s1, s2 = _split(rng, body, 2)
                        x, y = self.gen_p(ctx, a, s1), self.gen_p(ctx, b, s2)
                        return None if x is None or y is None else cg.Pair(x, y)
                    case Fun(a, b):
                        inner = self.gen_p((a,) + ctx, b, body)
                        return None if inner is None else cg.Lam(a, inner)
                return None
            case "app":
                arg_t = self.gen_type(1)
                s1, s2 = _split(rng, body, 2)
                f = self.gen_p(ctx, Fun(arg_t, t), s1)
                a = self.gen_p(ctx, arg_t, s2)
                return None if f is None or a is None else cg.App(f, a)
            case "proj":
                other = self.gen_type(1)
                if rng.random() < 0.5:
                    inner = self.gen_p(ctx, Prod(t, other), body)
                    return None if inner is None else cg.Fst(inner)
                inner = self.gen_p(ctx, Prod(other, t), body)
                return None if inner is None else cg.Snd(inner)
            case "case":
                sums = [s for s in ctx if isinstance(s, Sum)]
                st = rng.choice(sums) if sums else BOOL
                s0, s1, s2 = _split(rng, body, 3)
                sc = self.gen_p(ctx, st, s0)
                left = self.gen_p((st.left,) + ctx, t, s1)
                right = self.gen_p((st.right,) + ctx, t, s2)
                if sc is None or left is None or right is None:
                    return None
                return cg.Case(sc, left, right)
            case "wken":
                drop = frozenset({rng.randrange(len(ctx))})
                inner_ctx = tuple(s for i, s in enumerate(ctx) if i not in drop)
                inner = self.gen_p(inner_ctx, t, body)
                return None if inner is None else cg.Wken(drop, inner)
            case "label":
                s1, s2 = _split(rng, body, 2)
                return cg.LabelLeq(self.gen_p(ctx, LABEL, s1), self.gen_p(ctx, LABEL, s2))
        return None

    # monadic layer

    def with_value(self, ctx: tuple[Type, ...], t: Type, size: int,
                   k: Callable[[tuple[Type, ...], cg.Expr], cg.Expr]) -> cg.Expr:
        """Obtain an expression of type ``t`` and hand it to ``k``; if no pure
        expression exists, compute one monadically and bind it first."""
        s1, s2 = _split(self.rng, size, 2)
        direct = [i for i, s in enumerate(ctx) if s == t]
        if direct and self.rng.random() < 0.75:
            return k(ctx, cg.Var(self.rng.choice(direct)))
        pure = self.gen_p(ctx, t, s1) if not isinstance(t, (LabeledT, Ref)) else None
        if pure is not None:
            return k(ctx, pure)
        return cg.Bind(self.gen_m(ctx, t, s1), k((t,) + ctx, cg.Var(0)))

    def gen_m(self, ctx: Sequence[Type], t: Type, size: int) -> cg.Expr:
        ctx = tuple(ctx)
        rng, w = self.rng, self.w
        if size <= 0:
            vars_ = [i for i, s in enumerate(ctx) if s == t]
            if vars_ and rng.random() < 0.7:
                return cg.Return(cg.Var(rng.choice(vars_)))
            return self.canon_m(ctx, t)
        body = size - 1
        opts: list[tuple[str, float]] = [("return", w["return"]), ("bind", w["bind"] * 1.5),
                                         ("unlabel", w["unlabel"]), ("read", w["read"]),
                                         ("seq", w["seq"])]
        if size >= 3:
            opts += [("case", w["case"]), ("taint", w["taint"] * 0.7)]
        if any(s == LIO(t) for s in ctx):
            opts.append(("var", w["var"]))
        match t:
            case LabeledT():
                opts.append(("tolabeled", w["tolabeled"] * 3))
            case LabelT():
                opts.append(("label", w["label"] * 2))
            case UnitT():
                opts += [("write", w["write"] * 3), ("taint", w["taint"])]
            case Ref():
                opts.append(("new", w["new"] * 3))
        choice = _pick(rng, opts)
        match choice:
            case "var":
                return cg.Var(rng.choice([i for i, s in enumerate(ctx) if s == LIO(t)]))
            case "return":
                e = self.gen_p(ctx, t, body)
                return cg.Return(e) if e is not None else self.canon_m(ctx, t)
            case "bind":
                bt = self.bind_type(ctx)
                s1, s2 = _split(rng, body, 2)
                return cg.Bind(self.gen_m(ctx, bt, s1), self.gen_m((bt,) + ctx, t, s2))
            case "seq":
                s1, s2 = _split(rng, body, 2)
                first = self.effect(ctx, max(s1, 1))
                return cg.Bind(first, self.gen_m((UNIT,) + ctx, t, s2), "_")
            case "unlabel":
                return self.with_value(ctx, LabeledT(t), body, lambda c, e: cg.Unlabel(e))
            case "tolabeled":
                return cg.ToLabeled(self.gen_m(ctx, t.content, body))
            case "label":
                r = rng.random()
                if r < 0.4:
                    lt = LabeledT(rng.choice([s.content for s in ctx if isinstance(s, LabeledT)] or [self.gen_type(1)]))
                    return self.with_value(ctx, lt, body, lambda c, e: cg.LabelOf(e))
                if r < 0.7:
                    return cg.GetLabel()
                rt = rng.choice([s for s in ctx if isinstance(s, Ref)] or [Ref(self.kind(), self.gen_type(1))])
                return self.with_value(ctx, rt, body, lambda c, e: cg.LabelOfRef(e))
            case "write":
                return self.effect(ctx, body + 1)
            case "taint":
                if t == UNIT:
                    return cg.Taint(self.gen_p(ctx, LABEL, body))
                s1, s2 = _split(rng, body, 2)
                return cg.Bind(cg.Taint(self.gen_p(ctx, LABEL, s1)), self.gen_m((UNIT,) + ctx, t, s2), "_")
            case "new":
                return self.with_value(ctx, LabeledT(t.content), body, lambda c, e: cg.New(t.kind, e))
            case "read":
                refs = [s for s in ctx if isinstance(s, Ref) and s.content == t]
                rt = rng.choice(refs) if refs and rng.random() < 0.8 else Ref(self.kind(), t)
                return self.with_value(ctx, rt, body, lambda c, e: cg.Read(e))
            case "case":
                sums = [s for s in ctx if isinstance(s, Sum)]
                st = rng.choice(sums) if sums else BOOL
                s0, s1, s2 = _split(rng, body, 3)

                def branches(c: tuple[Type, ...], scrut: cg.Expr) -> cg.Expr:
                    return cg.Case(scrut, self.gen_m((st.left,) + c, t, s1),
                                   self.gen_m((st.right,) + c, t, s2))

                if st == BOOL and not sums and rng.random() < 0.6:
                    # branch on a label test over something observable
                    scrut = cg.LabelLeq(self.gen_p(ctx, LABEL, s0), self.gen_p(ctx, LABEL, 0))
                    return branches(ctx, scrut)
                return self.with_value(ctx, st, s0, branches)
        raise AssertionError(choice)

    def bind_type(self, ctx: tuple[Type, ...]) -> Type:
        rng = self.rng
        r = rng.random()
        labeled = [s.content for s in ctx if isinstance(s, LabeledT)]
        if r < 0.3 and labeled:
            return rng.choice(labeled)
        if r < 0.55:
            return Ref(self.kind(), self.gen_type(1))
        return self.gen_type(1)

    def effect(self, ctx: tuple[Type, ...], size: int) -> cg.Expr:
        rng = self.rng
        refs = [s for s in ctx if isinstance(s, Ref)]
        rt = rng.choice(refs) if refs and rng.random() < 0.85 else Ref(self.kind(), self.gen_type(1))
        s1, s2 = _split(rng, size - 1, 2)

        def with_ref(c: tuple[Type, ...], ref: cg.Expr) -> cg.Expr:
            depth = len(c) - len(ctx)
            return self.with_value(
                c, LabeledT(rt.content), s2,
                lambda c2, val: cg.Write(cg.shift(ref, len(c2) - len(c)) if len(c2) > len(c) else ref, val),
            )

        return self.with_value(ctx, rt, s1, with_ref)


def gen_typed(calculus: str, ctx: Sequence[Type], t: Type, size: int, rng: random.Random,
              lattice: Lattice, **kw) -> fg.Expr | cg.Expr:
    """Generate an expression of type ``t`` under ``ctx``. Size 0 yields the canonical inhabitant."""
    if calculus == "fg":
        return FGGen(lattice, rng, **kw).gen(ctx, t, size)
    gen = CGGen(lattice, rng, **kw)
    if size <= 0:
        e = gen.canon_m(tuple(ctx), t.res) if isinstance(t, LIO) else gen.canon_p(tuple(ctx), t)
        if e is None:
            raise Uninhabitable(str(t))
        return e
    if isinstance(t, LIO):
        return gen.gen_m(tuple(ctx), t.res, size)
    e = gen.gen_p(ctx, t, size)
    if e is None:
        raise Uninhabitable(str(t))
    return e
