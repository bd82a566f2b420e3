"""Big-step operational semantics, forward and backward.

Evaluation follows the judgement <q, sigma> |- e v v.  Both directions are
run on one explicit work/continuation stack, so recursion depth in the object
language costs heap, not interpreter stack; only pattern-local helpers
(instantiate, match) recurse, bounded by the pattern or value depth.

Fuel counts function applications (in either direction).  A result other
than OUT_OF_FUEL obtained at fuel F is identical at every larger fuel.
"""
from __future__ import annotations

from typing import Optional, Union

from .syntax import (
    Def, ECase, ELeaf, ELet, ERLet, Expr, LCtor, LDup, LeftExpr, LVar,
    Program, leaves, lvars,
)
from .values import Value, dupeq_value

DEFAULT_FUEL = 10_000

Subst = dict[str, Value]


class _Outcome:
    __slots__ = ("name",)

    def __init__(self, name: str):
        self.name = name

    def __repr__(self) -> str:
        return self.name


NO_MATCH = _Outcome("NO_MATCH")
OUT_OF_FUEL = _Outcome("OUT_OF_FUEL")

EvalResult = Union[Value, _Outcome]


class RfunRuntimeError(Exception):
    """Faults, as opposed to the normal NO_MATCH / OUT_OF_FUEL outcomes."""


class UnknownFunction(RfunRuntimeError):
    pass


class SubstitutionError(RfunRuntimeError):
    """A substitution domain mismatch; unreachable after static checks."""


class FirstMatchViolation(RfunRuntimeError):
    """A case produced (or, backward, consumed) a value that the symmetric
    first-match policy assigns to an earlier branch."""


class BackwardAmbiguity(RfunRuntimeError):
    """Two distinct preimages found; unreachable for statically accepted,
    first-match-respecting programs."""


# ---------------------------------------------------------------------------
# Patterns: instantiation and matching
# ---------------------------------------------------------------------------

def instantiate(subst: Subst, l: LeftExpr) -> Optional[Value]:
    """The value v with <q, subst> |- l v v, or None when the |_._| operator
    is applied outside its domain.

    The substitution must bind exactly the variables of l.
    """
    names = lvars(l)
    if len(set(names)) != len(names):
        raise SubstitutionError(f"non-linear left expression {names}")
    if set(names) != set(subst):
        missing = set(names) - set(subst)
        extra = set(subst) - set(names)
        if missing:
            raise SubstitutionError(f"unbound variable(s) {sorted(missing)}")
        raise SubstitutionError(f"leftover variable(s) {sorted(extra)}")
    return _build(subst, l)


def _build(subst: Subst, l: LeftExpr) -> Optional[Value]:
    match l:
        case LVar(name):
            return subst[name]
        case LCtor(ctor, args):
            out = []
            for a in args:
                v = _build(subst, a)
                if v is None:
                    return None
                out.append(v)
            return Value(ctor, tuple(out))
        case LDup(arg):
            v = _build(subst, arg)
            return None if v is None else dupeq_value(v)
    raise AssertionError


def match_pattern(v: Value, l: LeftExpr) -> Optional[Subst]:
    """The unique subst with instantiate(subst, l) = v, or None.

    |_l_| matches v by first applying the (self-inverse) duplication/equality
    operator to v and then matching l against the result.
    """
    out: Subst = {}
    if _match(v, l, out):
        return out
    return None


def _match(v: Value, l: LeftExpr, out: Subst) -> bool:
    match l:
        case LVar(name):
            if name in out:
                raise SubstitutionError(f"non-linear pattern variable {name!r}")
            out[name] = v
            return True
        case LCtor(ctor, args):
            if v.ctor != ctor or len(v.args) != len(args):
                return False
            return all(_match(c, a, out) for c, a in zip(v.args, args))
        case LDup(arg):
            w = dupeq_value(v)
            return False if w is None else _match(w, arg, out)
    raise AssertionError


def _split(subst: Subst, l: LeftExpr) -> tuple[Subst, Subst]:
    """Split subst into the bindings used by l and the rest."""
    names = set(lvars(l))
    used: Subst = {}
    rest: Subst = {}
    for k, v in subst.items():
        (used if k in names else rest)[k] = v
    missing = names - set(used)
    if missing:
        raise SubstitutionError(f"unbound variable(s) {sorted(missing)}")
    return used, rest


def _merge(a: Subst, b: Subst) -> Subst:
    overlap = set(a) & set(b)
    if overlap:
        raise SubstitutionError(f"substitution domains overlap on {sorted(overlap)}")
    out = dict(a)
    out.update(b)
    return out


# ---------------------------------------------------------------------------
# The machine
# ---------------------------------------------------------------------------

# Work items (pushed on one stack; "K_" frames consume the result register):
#   ("EVAL", e, subst)            evaluate e, leaving a Value
#   ("UNEVAL", e, v)              run e backward from v, leaving a Subst
#   ("APPLY", fname)              forward-apply to the register Value
#   ("UNAPPLY", fname)            backward-apply to the register Value
#   ("K_LET", bound, rest, body)
#   ("K_RLET", bound, rest, body)
#   ("K_CASE", early_leaves)
#   ("K_UNBODY", l_pattern, l_call_arg, fname, mode)
#   ("K_UNCALL", l_bind, rest)
#   ("K_UNCASE", scrutinee, early_patterns, pattern)
#   ("K_PROJ", param)             project a Subst back to the parameter value


def _def_for(prog: Program, fname: str) -> Def:
    d = prog.lookup(fname)
    if d is None:
        raise UnknownFunction(f"no definition for {fname!r}")
    return d


def _run(prog: Program, work: list, fuel: int) -> EvalResult:
    reg: Union[Value, Subst, _Outcome, None] = None
    while work:
        frame = work.pop()
        tag = frame[0]

        if tag == "EVAL":
            _, e, subst = frame
            match e:
                case ELeaf(left):
                    v = instantiate(subst, left)
                    reg = NO_MATCH if v is None else v
                case ELet(bound, fname, arg, body):
                    used, rest = _split(subst, arg)
                    v_in = instantiate(used, arg)
                    if v_in is None:
                        reg = NO_MATCH
                        continue
                    work.append(("K_LET", bound, rest, body))
                    work.append(("APPLY", fname))
                    reg = v_in
                case ERLet(bound, fname, arg, body):
                    # rlet bound = f arg: the bound side holds f's *output*;
                    # run f backward to recover the argument bindings.
                    used, rest = _split(subst, bound)
                    v_in = instantiate(used, bound)
                    if v_in is None:
                        reg = NO_MATCH
                        continue
                    work.append(("K_RLET", arg, rest, body))
                    work.append(("UNAPPLY", fname))
                    reg = v_in
                case ECase(scrut, branches):
                    used, rest = _split(subst, scrut)
                    v0 = instantiate(used, scrut)
                    if v0 is None:
                        reg = NO_MATCH
                        continue
                    chosen = None
                    for j, (pat, body) in enumerate(branches):
                        sigma = match_pattern(v0, pat)
                        if sigma is not None:
                            chosen = (j, sigma, body)
                            break
                    if chosen is None:
                        reg = NO_MATCH
                        continue
                    j, sigma, body = chosen
                    early = [l for _, b in branches[:j] for l in leaves(b)]
                    if early:
                        work.append(("K_CASE", early))
                    work.append(("EVAL", body, _merge(sigma, rest)))

        elif tag == "APPLY":
            if reg is NO_MATCH:
                continue
            if fuel <= 0:
                return OUT_OF_FUEL
            fuel -= 1
            d = _def_for(prog, frame[1])
            work.append(("EVAL", d.body, {d.param: reg}))

        elif tag == "UNAPPLY":
            if reg is NO_MATCH:
                continue
            if fuel <= 0:
                return OUT_OF_FUEL
            fuel -= 1
            d = _def_for(prog, frame[1])
            work.append(("K_PROJ", d.param))
            work.append(("UNEVAL", d.body, reg))

        elif tag == "K_LET":
            if reg is NO_MATCH:
                continue
            _, bound, rest, body = frame
            sigma = match_pattern(reg, bound)
            reg = NO_MATCH if sigma is None else reg
            if sigma is not None:
                work.append(("EVAL", body, _merge(sigma, rest)))

        elif tag == "K_RLET":
            if reg is NO_MATCH:
                continue
            _, arg, rest, body = frame
            sigma = match_pattern(reg, arg)
            reg = NO_MATCH if sigma is None else reg
            if sigma is not None:
                work.append(("EVAL", body, _merge(sigma, rest)))

        elif tag == "K_CASE":
            if reg is NO_MATCH:
                continue
            for l in frame[1]:
                if match_pattern(reg, l) is not None:
                    raise FirstMatchViolation(
                        "case result matches a leaf of an earlier branch: "
                        f"{_describe(reg)} vs pattern at {l.pos}")

        elif tag == "UNEVAL":
            _, e, v = frame
            match e:
                case ELeaf(left):
                    sigma = match_pattern(v, left)
                    reg = NO_MATCH if sigma is None else sigma
                case ELet(bound, fname, arg, body):
                    work.append(("K_UNBODY", bound, arg, fname, "UNAPPLY"))
                    work.append(("UNEVAL", body, v))
                case ERLet(bound, fname, arg, body):
                    work.append(("K_UNBODY", arg, bound, fname, "APPLY"))
                    work.append(("UNEVAL", body, v))
                case ECase(scrut, branches):
                    chosen = None
                    for j, (pat, body) in enumerate(branches):
                        if any(match_pattern(v, l) is not None for l in leaves(body)):
                            chosen = (j, pat, body)
                            break
                    if chosen is None:
                        reg = NO_MATCH
                        continue
                    j, pat, body = chosen
                    early = [(p, leaves(b)) for p, b in branches[:j]]
                    work.append(("K_UNCASE", scrut, early, pat, v))
                    work.append(("UNEVAL", body, v))

        elif tag == "K_UNBODY":
            # After inverting a let/rlet body: rebuild the callee result from
            # the binder pattern, then run the call in the opposite direction.
            if reg is NO_MATCH:
                continue
            _, bound, call_arg, fname, mode = frame
            sigma_out, rest = _split(reg, bound)
            w = instantiate(sigma_out, bound)
            if w is None:
                reg = NO_MATCH
                continue
            work.append(("K_UNCALL", call_arg, rest))
            work.append((mode, fname))
            reg = w

        elif tag == "K_UNCALL":
            if reg is NO_MATCH:
                continue
            _, l_bind, rest = frame
            sigma = match_pattern(reg, l_bind)
            reg = NO_MATCH if sigma is None else _merge(sigma, rest)

        elif tag == "K_UNCASE":
            if reg is NO_MATCH:
                continue
            _, scrut, early, pat, v_out = frame
            sigma_pat, rest = _split(reg, pat)
            v_scrut = instantiate(sigma_pat, pat)
            if v_scrut is None:
                reg = NO_MATCH
                continue
            for p, early_leaves in early:
                if match_pattern(v_scrut, p) is not None:
                    if any(match_pattern(v_out, l) is not None for l in early_leaves):
                        # Committed-choice scanning makes this unreachable, but
                        # it is the exact two-preimage condition; keep it named.
                        raise BackwardAmbiguity(
                            f"two backward derivations for {_describe(v_out)}")
                    raise FirstMatchViolation(
                        "backward case input matches an earlier branch pattern: "
                        f"{_describe(v_scrut)} vs pattern at {p.pos}")
            sigma_l = match_pattern(v_scrut, scrut)
            reg = NO_MATCH if sigma_l is None else _merge(sigma_l, rest)

        elif tag == "K_PROJ":
            if reg is NO_MATCH:
                continue
            param = frame[1]
            if set(reg) != {param}:
                raise SubstitutionError(
                    f"backward run recovered bindings {sorted(reg)}, expected [{param!r}]")
            reg = reg[param]

        else:  # pragma: no cover
            raise AssertionError(tag)

    assert reg is not None
    return reg


def _describe(v) -> str:
    from .values import render_value
    return render_value(v) if isinstance(v, Value) else repr(v)


# ---------------------------------------------------------------------------
# Public entry points
# ---------------------------------------------------------------------------

def eval_expr(prog: Program, subst: Subst, e: Expr, fuel: int = DEFAULT_FUEL) -> EvalResult:
    """Evaluate e under subst; Value, NO_MATCH or OUT_OF_FUEL."""
    return _run(prog, [("EVAL", e, dict(subst))], fuel)


def apply_forward(prog: Program, fname: str, v: Value, fuel: int = DEFAULT_FUEL) -> EvalResult:
    d = _def_for(prog, fname)
    return _run(prog, [("EVAL", d.body, {d.param: v})], fuel)


def apply_backward(prog: Program, fname: str, v: Value, fuel: int = DEFAULT_FUEL) -> EvalResult:
    """The u with apply_forward(prog, fname, u) = v, via a direct inverse
    interpreter: leaves are matched against v under the symmetric first-match
    policy, lets and rlets swap direction, cases run inside out."""
    d = _def_for(prog, fname)
    return _run(prog, [("K_PROJ", d.param), ("UNEVAL", d.body, v)], fuel)
