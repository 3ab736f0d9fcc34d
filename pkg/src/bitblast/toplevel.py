"""Theorem-file format: `defun` definitions, `def-gl-thm` /
`def-gl-param-thm` forms, and the four directives
(`set-preferred-def`, `allow-concrete-exec`, `gl-bdd-mode`,
`gl-aig-mode`), processed in file order.

Bindings accept the quasiquote idiom ``((x ,(g-int 0 1 33)))`` as well
as plain quoted shape forms.
"""

from dataclasses import dataclass

from .errors import FileFormatError
from .lang import base_env, free_vars, parse_defun, parse_term
from .prover import ParamTheoremSpec, TheoremSpec
from .reader import read_values_with_pos
from .symobj import g_int, parse_shape
from .values import (
    NIL,
    QUASIQUOTE,
    QUOTE,
    T,
    UNQUOTE,
    Cons,
    Symbol,
    is_integer,
    list_elements,
    print_value,
)


@dataclass
class DefunEvent:
    name: str
    formals: list
    body: object
    line: int


@dataclass
class DirectiveEvent:
    kind: str  # preferred-def | concrete-exec | bdd-mode | aig-mode
    payload: object
    line: int


@dataclass
class TheoremEvent:
    spec: object  # TheoremSpec | ParamTheoremSpec
    line: int


def _form_error(msg, line):
    return FileFormatError("%d: %s" % (line, msg))


# -- binding resolution -------------------------------------------------------

_GINT = Symbol("g-int")


def _eval_binding_builder(v, line):
    """Evaluate an unquoted expression inside a bindings form."""
    if isinstance(v, Cons) and v.car is _GINT:
        args, tail = list_elements(v.cdr)
        if tail is not NIL or len(args) != 3 or not all(is_integer(a) for a in args):
            raise _form_error("g-int wants three integer arguments: %s"
                              % print_value(v), line)
        return g_int(args[0], args[1], args[2])
    if isinstance(v, Cons) or (isinstance(v, Symbol) and v is not NIL
                               and v is not T):
        raise _form_error("cannot evaluate binding expression %s"
                          % print_value(v), line)
    return v


def _resolve_bindings_value(v, line, in_quasi=False):
    """Strip quote/quasiquote sugar and resolve unquoted builder calls,
    leaving a tree of values (with shape specs spliced in)."""
    if isinstance(v, Cons):
        if v.car is QUASIQUOTE and isinstance(v.cdr, Cons) and v.cdr.cdr is NIL:
            return _resolve_bindings_value(v.cdr.car, line, True)
        if v.car is QUOTE and isinstance(v.cdr, Cons) and v.cdr.cdr is NIL:
            return _resolve_bindings_value(v.cdr.car, line, in_quasi)
        if v.car is UNQUOTE and isinstance(v.cdr, Cons) and v.cdr.cdr is NIL:
            if not in_quasi:
                raise _form_error("comma outside backquote in bindings", line)
            return _eval_binding_builder(v.cdr.car, line)
        return Cons(_resolve_bindings_value(v.car, line, in_quasi),
                    _resolve_bindings_value(v.cdr, line, in_quasi))
    return v


def parse_bindings(v, line):
    """((var shape) ...) -> ordered dict var name -> ShapeSpec."""
    resolved = _resolve_bindings_value(v, line)
    entries, tail = list_elements(resolved)
    if tail is not NIL:
        raise _form_error("malformed bindings: %s" % print_value(v), line)
    out = {}
    for entry in entries:
        if not (isinstance(entry, Cons) and isinstance(entry.car, Symbol)
                and isinstance(entry.cdr, Cons) and entry.cdr.cdr is NIL):
            raise _form_error("binding entries look like (var shape)", line)
        name = entry.car.name
        if name in out:
            raise _form_error("duplicate binding for %s" % name, line)
        out[name] = parse_shape(entry.cdr.car)
    return out


def _parse_case_assignment(v, line):
    entries, tail = list_elements(v)
    if tail is not NIL:
        raise _form_error("malformed case assignment", line)
    out = {}
    for entry in entries:
        pair, ptail = list_elements(entry)
        if ptail is not NIL or len(pair) != 2 or not isinstance(pair[0], Symbol):
            raise _form_error("case assignments look like ((var value) ...)",
                              line)
        out[pair[0].name] = pair[1]
    return out


def parse_param_bindings(v, line):
    resolved = _resolve_bindings_value(v, line)
    entries, tail = list_elements(resolved)
    if tail is not NIL or not entries:
        raise _form_error("malformed :param-bindings", line)
    out = []
    case_vars = None
    for entry in entries:
        parts, ptail = list_elements(entry)
        if ptail is not NIL or len(parts) != 2:
            raise _form_error(
                ":param-bindings entries look like ((assignment) (bindings))",
                line)
        assignment = _parse_case_assignment(parts[0], line)
        if case_vars is None:
            case_vars = set(assignment)
        elif set(assignment) != case_vars:
            raise _form_error("every case must bind the same case variables",
                              line)
        bindings = {}
        subentries, stail = list_elements(parts[1])
        if stail is not NIL:
            raise _form_error("malformed case bindings", line)
        for sub in subentries:
            if not (isinstance(sub, Cons) and isinstance(sub.car, Symbol)
                    and isinstance(sub.cdr, Cons) and sub.cdr.cdr is NIL):
                raise _form_error("binding entries look like (var shape)", line)
            bindings[sub.car.name] = parse_shape(sub.cdr.car)
        out.append((assignment, bindings))
    return out


# -- keyword plumbing ---------------------------------------------------------

def _keyword_args(items, line):
    if len(items) % 2 != 0:
        raise _form_error("keyword arguments come in pairs", line)
    out = {}
    for i in range(0, len(items), 2):
        kw = items[i]
        if not isinstance(kw, Symbol) or not kw.name.startswith(":"):
            raise _form_error("expected a keyword, got %s" % print_value(kw),
                              line)
        if kw.name in out:
            raise _form_error("duplicate keyword %s" % kw.name, line)
        out[kw.name] = items[i + 1]
    return out


def _parse_symbol_list(v, line, what):
    if isinstance(v, Cons) and v.car is QUOTE and isinstance(v.cdr, Cons):
        v = v.cdr.car
    items, tail = list_elements(v)
    if tail is not NIL or not all(isinstance(s, Symbol) for s in items):
        raise _form_error("%s wants a list of function names" % what, line)
    return frozenset(s.name for s in items)


def _common_options(kwargs, line):
    opts = {}
    if ":mode" in kwargs:
        mode = kwargs.pop(":mode")
        if not isinstance(mode, Symbol) or mode.name not in ("bdd", "aig"):
            raise _form_error(":mode is bdd or aig", line)
        opts["mode"] = mode.name
    if ":do-not-expand" in kwargs:
        opts["do_not_expand"] = _parse_symbol_list(
            kwargs.pop(":do-not-expand"), line, ":do-not-expand")
    if ":counterexamples" in kwargs:
        n = kwargs.pop(":counterexamples")
        if not is_integer(n) or n < 1:
            raise _form_error(":counterexamples wants a positive count", line)
        opts["counterexample_count"] = n
    if ":seed" in kwargs:
        n = kwargs.pop(":seed")
        if not is_integer(n):
            raise _form_error(":seed wants an integer", line)
        opts["seed"] = n
    if ":test-side-goals" in kwargs:
        opts["coverage_only"] = kwargs.pop(":test-side-goals") is not NIL
    kwargs.pop(":rule-classes", None)  # accepted and ignored
    return opts


def _parse_def_gl_thm(items, line):
    if not items or not isinstance(items[0], Symbol):
        raise _form_error("def-gl-thm wants a name", line)
    name = items[0].name
    kwargs = _keyword_args(items[1:], line)
    if ":concl" not in kwargs:
        raise _form_error("def-gl-thm %s needs :concl" % name, line)
    if ":g-bindings" not in kwargs:
        raise _form_error("def-gl-thm %s needs :g-bindings" % name, line)
    hyp = parse_term(kwargs.pop(":hyp", T))
    concl = parse_term(kwargs.pop(":concl"))
    bindings = parse_bindings(kwargs.pop(":g-bindings"), line)
    opts = _common_options(kwargs, line)
    if kwargs:
        raise _form_error("unknown keywords %s in def-gl-thm %s"
                          % (", ".join(sorted(kwargs)), name), line)
    missing = (free_vars(hyp) | free_vars(concl)) - set(bindings)
    if missing:
        raise _form_error("def-gl-thm %s has no binding for %s"
                          % (name, ", ".join(sorted(missing))), line)
    return TheoremSpec(name=name, hyp=hyp, concl=concl, g_bindings=bindings,
                       **opts)


def _parse_def_gl_param_thm(items, line):
    if not items or not isinstance(items[0], Symbol):
        raise _form_error("def-gl-param-thm wants a name", line)
    name = items[0].name
    kwargs = _keyword_args(items[1:], line)
    for required in (":concl", ":param-bindings", ":param-hyp",
                     ":cov-bindings"):
        if required not in kwargs:
            raise _form_error("def-gl-param-thm %s needs %s" % (name, required),
                              line)
    hyp = parse_term(kwargs.pop(":hyp", T))
    concl = parse_term(kwargs.pop(":concl"))
    param_bindings = parse_param_bindings(kwargs.pop(":param-bindings"), line)
    param_hyp = parse_term(kwargs.pop(":param-hyp"))
    cov_bindings = parse_bindings(kwargs.pop(":cov-bindings"), line)
    opts = _common_options(kwargs, line)
    if kwargs:
        raise _form_error("unknown keywords %s in def-gl-param-thm %s"
                          % (", ".join(sorted(kwargs)), name), line)
    needed = free_vars(hyp) | free_vars(concl)
    case_vars = set(param_bindings[0][0])
    for assignment, bindings in param_bindings:
        missing = needed - set(bindings)
        if missing:
            raise _form_error(
                "def-gl-param-thm %s: case %s has no binding for %s"
                % (name, sorted(assignment), ", ".join(sorted(missing))), line)
    missing = needed - set(cov_bindings)
    if missing:
        raise _form_error("def-gl-param-thm %s: :cov-bindings misses %s"
                          % (name, ", ".join(sorted(missing))), line)
    stray = free_vars(param_hyp) - case_vars - needed - set(cov_bindings)
    if stray:
        raise _form_error("def-gl-param-thm %s: :param-hyp mentions %s"
                          % (name, ", ".join(sorted(stray))), line)
    return ParamTheoremSpec(name=name, hyp=hyp, concl=concl,
                            param_bindings=param_bindings,
                            param_hyp=param_hyp, cov_bindings=cov_bindings,
                            **opts)


# -- events -------------------------------------------------------------------

def parse_events(text):
    """All top-level events in file order; validates definitions and
    theorem well-formedness as it goes."""
    events = []
    defs = base_env()
    for form, line, _col in read_values_with_pos(text):
        if not isinstance(form, Cons) or not isinstance(form.car, Symbol):
            raise _form_error("unknown top-level form: %s" % print_value(form),
                              line)
        head = form.car.name
        items, tail = list_elements(form.cdr)
        if tail is not NIL:
            raise _form_error("malformed %s form" % head, line)
        if head == "defun":
            name, formals, body = parse_defun(items)
            try:
                defs.define(name, formals, body)  # surfaces duplicates now
            except FileFormatError as e:
                raise _form_error(str(e), line) from None
            events.append(DefunEvent(name, formals, body, line))
        elif head == "def-gl-thm":
            events.append(TheoremEvent(_parse_def_gl_thm(items, line), line))
        elif head == "def-gl-param-thm":
            events.append(TheoremEvent(_parse_def_gl_param_thm(items, line),
                                       line))
        elif head == "set-preferred-def":
            if len(items) != 2 or not isinstance(items[0], Symbol):
                raise _form_error(
                    "set-preferred-def wants a name and a replacement term",
                    line)
            events.append(DirectiveEvent(
                "preferred-def", (items[0].name, parse_term(items[1])), line))
        elif head == "allow-concrete-exec":
            names = []
            for s in items:
                if not isinstance(s, Symbol):
                    raise _form_error(
                        "allow-concrete-exec wants function names", line)
                names.append(s.name)
            events.append(DirectiveEvent("concrete-exec", frozenset(names),
                                         line))
        elif head == "gl-bdd-mode":
            events.append(DirectiveEvent("bdd-mode", None, line))
        elif head == "gl-aig-mode":
            events.append(DirectiveEvent("aig-mode", None, line))
        else:
            raise _form_error("unknown top-level form %s" % head, line)
    return events


def parse_file(text):
    """(definitions, theorem specs, directives), in file order."""
    events = parse_events(text)
    defs = base_env()
    theorems = []
    directives = []
    for ev in events:
        if isinstance(ev, DefunEvent):
            defs.define(ev.name, ev.formals, ev.body)
        elif isinstance(ev, TheoremEvent):
            theorems.append(ev.spec)
        else:
            directives.append(ev)
    return defs, theorems, directives
