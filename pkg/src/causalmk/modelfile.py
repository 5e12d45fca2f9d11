"""The ``.ck`` model file format: line-oriented, diff-friendly fixtures.

Layout::

    # comment
    worlds: w0 w1 w2 w3
    relation: w0->w1 w0->w2 w0->w3      # omit or leave empty for no edges
    nearby: hamming<=1                  # context spaces only; or explicit pairs

    [exogenous U1]
    range: 0 1                          # all worlds; range@w0: ... to override

    [endogenous q]
    range: 0 1
    eq: dia(p=1 & r=1)                  # formula equation, all worlds
    eq@w1: false                        # per-world override
    const@w2: 0                         # constant equation
    table@w0: a@w0 b@w0                 # table equation: parents, then rows
    row: 0 0 = 0
    row: 0 1 = 1
    row: 1 0 = 1
    row: 1 1 = 1

    [context t]
    U1: w0=0 w1=0 w2=1 w3=1

    [query packing]
    kind: cause
    world: w0
    candidate: p@w3=1
    event: q=1
    definition: modified

Unknown keys are rejected.  Formula strings use the package's formula grammar.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from . import formulas
from .errors import CausalError, ModelFileError
from .model import (Context, Equation, FormulaEquation, Model, TableEquation,
                    build_model, constant, signature)
from .sufficiency import ContextSpace, hamming_pairs, make_context_space

_QUERY_KEYS = {
    "kind", "world", "formula", "event", "candidate", "atom", "definition",
    "max", "variable", "value", "modality", "scope", "context",
    "models", "instances", "seed",
}

QUERY_KINDS = {
    "sat", "eval", "cause", "causes", "part", "possibility", "certainty",
    "modalcause", "suffcause", "axioms",
}


@dataclass
class ModelDocument:
    model: Model
    contexts: dict[str, Context]
    queries: dict[str, dict[str, str]] = field(default_factory=dict)
    nearby: str | None = None
    filename: str = "<model>"

    def context(self, name: str) -> Context:
        if name not in self.contexts:
            known = ", ".join(self.contexts) or "none"
            raise ModelFileError(f"unknown context {name!r} (known: {known})", self.filename)
        return self.contexts[name]

    def context_space(self, reflexive: bool = True) -> ContextSpace:
        """Read the document as a context space for sufficiency queries."""
        contexts = list(self.contexts.items())
        if self.nearby is None or not self.nearby.strip():
            nearby = ()
        elif self.nearby.replace(" ", "").startswith("hamming<="):
            k = int(self.nearby.replace(" ", "")[len("hamming<="):])
            nearby = hamming_pairs(contexts, k)
        else:
            nearby = tuple(_parse_edge(tok, self.filename, 0) for tok in self.nearby.split())
        return make_context_space(self.model, contexts, nearby, reflexive=reflexive)


def _parse_edge(token: str, filename: str, line: int) -> tuple[str, str]:
    if "->" not in token:
        raise ModelFileError(f"expected an edge like a->b, got {token!r}", filename, line)
    a, b = token.split("->", 1)
    if not a or not b:
        raise ModelFileError(f"expected an edge like a->b, got {token!r}", filename, line)
    return a, b


def _parse_ints(text: str, filename: str, line: int) -> tuple[int, ...]:
    try:
        return tuple(int(tok) for tok in text.split())
    except ValueError:
        raise ModelFileError(f"expected integers, got {text!r}", filename, line) from None


class _VarSection:
    def __init__(self, name, exogenous, line):
        self.name = name
        self.exogenous = exogenous
        self.line = line
        self.default_range = None
        self.world_ranges = {}
        self.default_eq = None          # ("formula", text) | ("const", value)
        self.world_eqs = {}             # world -> same shapes | ("table", parents, rows)
        self.open_table = None


def parse_model_text(text: str, filename: str = "<model>") -> ModelDocument:
    worlds: tuple[str, ...] | None = None
    relation_text = ""
    nearby_text: str | None = None
    var_sections: dict[str, _VarSection] = {}
    context_sections: dict[str, dict[str, str]] = {}
    query_sections: dict[str, dict[str, str]] = {}
    section = None  # ("var", _VarSection) | ("context", name) | ("query", name)

    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if line.startswith("["):
            if not line.endswith("]"):
                raise ModelFileError("unterminated section header", filename, lineno)
            parts = line[1:-1].split()
            if len(parts) != 2:
                raise ModelFileError(
                    "section headers look like [exogenous NAME], [endogenous NAME], "
                    "[context NAME], or [query NAME]", filename, lineno)
            kind, name = parts
            if kind in ("exogenous", "endogenous"):
                if name in var_sections:
                    raise ModelFileError(f"duplicate variable {name}", filename, lineno)
                sec = _VarSection(name, kind == "exogenous", lineno)
                var_sections[name] = sec
                section = ("var", sec)
            elif kind == "context":
                if name in context_sections:
                    raise ModelFileError(f"duplicate context {name}", filename, lineno)
                context_sections[name] = {}
                section = ("context", name)
            elif kind == "query":
                if name in query_sections:
                    raise ModelFileError(f"duplicate query {name}", filename, lineno)
                query_sections[name] = {}
                section = ("query", name)
            else:
                raise ModelFileError(f"unknown section kind {kind!r}", filename, lineno)
            continue

        if ":" not in line:
            raise ModelFileError(f"expected 'key: value', got {line!r}", filename, lineno)
        key, value = (part.strip() for part in line.split(":", 1))

        if section is None:
            if key == "worlds":
                worlds = tuple(value.split())
            elif key == "relation":
                relation_text = value
            elif key == "nearby":
                nearby_text = value
            else:
                raise ModelFileError(f"unknown top-level key {key!r}", filename, lineno)
            continue

        where, target = section
        if where == "var":
            _var_line(target, key, value, filename, lineno)
        elif where == "context":
            context_sections[target][key] = value
        else:
            if key not in _QUERY_KEYS:
                raise ModelFileError(f"unknown query key {key!r}", filename, lineno)
            query_sections[target][key] = value

    if worlds is None or not worlds:
        raise ModelFileError("missing 'worlds:' line", filename, 0)
    relation = [_parse_edge(tok, filename, 0) for tok in relation_text.split()]

    return _assemble(worlds, relation, nearby_text, var_sections, context_sections,
                     query_sections, filename)


def _var_line(sec: _VarSection, key: str, value: str, filename: str, lineno: int) -> None:
    base, _, world = key.partition("@")
    if base == "range":
        values = _parse_ints(value, filename, lineno)
        if world:
            sec.world_ranges[world] = values
        else:
            sec.default_range = values
        return
    if sec.exogenous:
        raise ModelFileError(
            f"exogenous variables only take 'range', not {key!r}", filename, lineno)
    if base == "eq":
        payload = ("formula", value, lineno)
    elif base == "const":
        payload = ("const", _parse_ints(value, filename, lineno), lineno)
    elif base == "table":
        parents = [tok for tok in value.split()]
        payload = ("table", parents, [], lineno)
        if not world:
            raise ModelFileError("tables are per-world; use table@WORLD:", filename, lineno)
        sec.open_table = payload
    elif base == "row":
        if sec.open_table is None:
            raise ModelFileError("row outside a table", filename, lineno)
        sec.open_table[2].append((value, lineno))
        return
    else:
        raise ModelFileError(f"unknown variable key {key!r}", filename, lineno)
    if world:
        if world in sec.world_eqs:
            raise ModelFileError(
                f"duplicate equation for {sec.name}@{world}", filename, lineno)
        sec.world_eqs[world] = payload
    else:
        if sec.default_eq is not None:
            raise ModelFileError(f"duplicate default equation for {sec.name}",
                                 filename, lineno)
        sec.default_eq = payload


def _build_equation(payload, var: str, world: str, filename: str) -> Equation:
    kind = payload[0]
    if kind == "formula":
        _, text, lineno = payload
        try:
            return FormulaEquation(formulas.parse_event(text))
        except CausalError as exc:
            raise ModelFileError(f"bad equation for {var}@{world}: {exc}",
                                 filename, lineno) from exc
    if kind == "const":
        _, values, lineno = payload
        if len(values) != 1:
            raise ModelFileError(f"const takes one value, got {values}", filename, lineno)
        return constant(values[0])
    _, parent_tokens, rows, lineno = payload
    parents = []
    for tok in parent_tokens:
        if "@" not in tok:
            raise ModelFileError(
                f"table parents are world-indexed like p@w0, got {tok!r}", filename, lineno)
        v, w = tok.split("@", 1)
        parents.append((v, w))
    table = {}
    for row_text, row_line in rows:
        if "=" not in row_text:
            raise ModelFileError("rows look like 'row: v1 v2 = out'", filename, row_line)
        lhs, rhs = row_text.rsplit("=", 1)
        key = _parse_ints(lhs, filename, row_line)
        out = _parse_ints(rhs, filename, row_line)
        if len(key) != len(parents) or len(out) != 1:
            raise ModelFileError("row arity does not match the parent list",
                                 filename, row_line)
        table[key] = out[0]
    return TableEquation(tuple(parents), table)


def _assemble(worlds, relation, nearby_text, var_sections, context_sections,
              query_sections, filename) -> ModelDocument:
    exogenous = [v for v, s in var_sections.items() if s.exogenous]
    endogenous = [v for v, s in var_sections.items() if not s.exogenous]
    ranges = {}
    for var, sec in var_sections.items():
        for w in worlds:
            values = sec.world_ranges.get(w, sec.default_range)
            if values is None:
                raise ModelFileError(f"no range for {var}@{w}", filename, sec.line)
            ranges[(var, w)] = values

    equations = {}
    for var, sec in var_sections.items():
        if sec.exogenous:
            continue
        for w in worlds:
            payload = sec.world_eqs.get(w, sec.default_eq)
            if payload is None:
                raise ModelFileError(f"no equation for {var}@{w}", filename, sec.line)
            equations[(var, w)] = _build_equation(payload, var, w, filename)

    try:
        model = build_model(signature(exogenous, endogenous, ranges),
                            worlds, relation, equations)
    except CausalError as exc:
        raise ModelFileError(str(exc), filename, 0) from exc

    contexts = {}
    for name, lines in context_sections.items():
        values = {}
        for var, text in lines.items():
            if var not in var_sections or not var_sections[var].exogenous:
                raise ModelFileError(
                    f"context {name} sets {var!r}, which is not exogenous", filename, 0)
            for tok in text.split():
                if "=" not in tok:
                    raise ModelFileError(
                        f"context entries look like w0=1, got {tok!r}", filename, 0)
                w, v = tok.split("=", 1)
                values[(var, w)] = int(v)
        contexts[name] = Context(values)

    for name, spec in query_sections.items():
        kind = spec.get("kind")
        if kind not in QUERY_KINDS:
            raise ModelFileError(
                f"query {name} has unknown kind {kind!r}", filename, 0)

    return ModelDocument(model, contexts, query_sections, nearby_text, filename)


def load_model_file(path) -> ModelDocument:
    with open(path, "r", encoding="utf-8") as handle:
        return parse_model_text(handle.read(), filename=str(path))
