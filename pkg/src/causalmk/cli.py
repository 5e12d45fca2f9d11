"""Command-line front end.

Subcommands: sat, eval, cause, causes, part, possibility, certainty,
modalcause, suffcause, axioms, corpus.  Exit codes: 0 the query was answered
(whatever the verdict), 1 usage or formula-parse error, 2 model error,
3 search budget exceeded.
"""

from __future__ import annotations

import argparse
import json
import random
import shutil
import sys
from importlib import resources
from pathlib import Path

from . import axioms as axioms_mod
from . import causes as causes_mod
from . import formulas
from .errors import (CausalError, FormulaSyntaxError, ModelFileError,
                     SearchBudgetExceeded)
from .modelfile import ModelDocument, load_model_file
from .semantics import Setting, satisfies, valid_in_model
from .sufficiency import is_sufficient_cause

USAGE_ERROR, MODEL_ERROR, BUDGET_ERROR = 1, 2, 3


class _UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):  # argparse would exit(2); usage errors are exit 1
        raise _UsageError(message)


def _build_parser() -> _Parser:
    parser = _Parser(prog="causalmk", description=__doc__.splitlines()[0])
    parser.add_argument("--json", action="store_true", help="emit a machine-readable record")
    parser.add_argument("--budget", type=int, default=None,
                        help="cap on intervened evaluations during cause search")
    parser.add_argument("--seed", type=int, default=0, help="seed for generated models")
    sub = parser.add_subparsers(dest="command", required=True)

    def model_cmd(name, help_text, *, context=True, world=True, query=True):
        p = sub.add_parser(name, help=help_text)
        p.add_argument("file", help="model file (.ck)")
        if context:
            p.add_argument("--context", help="context name from the model file")
        if world:
            p.add_argument("--world", help="evaluation world")
        if query:
            p.add_argument("--query", help="named query in the file supplying defaults")
        return p

    p = model_cmd("sat", "check one formula at one world")
    p.add_argument("--formula", help="formula text")
    p.add_argument("--all-worlds", action="store_true", help="require truth at every world")

    model_cmd("eval", "print the valuation determined by a context")

    p = model_cmd("cause", "decide whether a conjunction is an actual cause")
    p.add_argument("--candidate", help="conjunction of world-indexed atoms, e.g. 'p@w3=1'")
    p.add_argument("--event", help="event text")
    p.add_argument("--def", dest="definition", choices=causes_mod.DEFINITIONS)

    p = model_cmd("causes", "enumerate all causes up to a size bound")
    p.add_argument("--event")
    p.add_argument("--def", dest="definition", choices=causes_mod.DEFINITIONS)
    p.add_argument("--max", dest="max_conjuncts", type=int)

    p = model_cmd("part", "is an atom a conjunct of some cause?")
    p.add_argument("--atom", help="one world-indexed atom, e.g. 'p1@w1=1'")
    p.add_argument("--event")
    p.add_argument("--def", dest="definition", choices=causes_mod.DEFINITIONS)
    p.add_argument("--max", dest="max_conjuncts", type=int, default=None)

    for name, help_text in (("possibility", "is the possibility of X=x a cause?"),
                            ("certainty", "is the certainty of X=x a cause?")):
        p = model_cmd(name, help_text)
        p.add_argument("--variable")
        p.add_argument("--value", type=int)
        p.add_argument("--event")

    p = model_cmd("modalcause", "cause at some/every successor world")
    p.add_argument("--modality", choices=("box", "dia"))
    p.add_argument("--candidate")
    p.add_argument("--event")
    p.add_argument("--def", dest="definition", choices=causes_mod.DEFINITIONS)

    p = model_cmd("suffcause", "sufficient causality over a context space", world=False)
    p.add_argument("--candidate", help="conjunction of plain atoms, e.g. 'A=1 & B=1'")
    p.add_argument("--event")
    p.add_argument("--scope", choices=("global", "local"), default=None)
    p.add_argument("--def", dest="definition", choices=causes_mod.DEFINITIONS)

    p = sub.add_parser("axioms", help="fuzz the axiom schemes on generated models")
    p.add_argument("--models", type=int, default=100)
    p.add_argument("--instances", type=int, default=20)
    p.add_argument("--no-mutation-check", action="store_true")

    p = sub.add_parser("corpus", help="list the bundled example models")
    p.add_argument("--export", metavar="DIR", help="copy the bundled models into DIR")

    return parser


# ---------------------------------------------------------------------------
# Helpers
# ---------------------------------------------------------------------------

def _load(args) -> ModelDocument:
    path = Path(args.file)
    if not path.exists():
        raise ModelFileError("no such file", str(path))
    return load_model_file(path)


_QUERY_ARGS = {
    "world": ("world", str),
    "formula": ("formula", str),
    "event": ("event", str),
    "candidate": ("candidate", str),
    "atom": ("atom", str),
    "definition": ("definition", str),
    "max": ("max_conjuncts", int),
    "variable": ("variable", str),
    "value": ("value", int),
    "modality": ("modality", str),
    "scope": ("scope", str),
    "context": ("context", str),
}


def _apply_query(args, doc: ModelDocument) -> None:
    name = getattr(args, "query", None)
    if not name:
        return
    if name not in doc.queries:
        raise _UsageError(f"no query named {name!r} in {doc.filename}")
    spec = doc.queries[name]
    kind = spec.get("kind")
    if kind != args.command:
        raise _UsageError(f"query {name!r} has kind {kind!r}, not {args.command!r}")
    for key, value in spec.items():
        if key == "kind":
            continue
        dest, convert = _QUERY_ARGS[key]
        if getattr(args, dest, None) is None:
            setattr(args, dest, convert(value))


def _require(args, *names) -> None:
    for name in names:
        if getattr(args, name, None) is None:
            flag = "--" + {"definition": "def", "max_conjuncts": "max"}.get(name, name)
            raise _UsageError(f"missing {flag}")


def _setting(doc: ModelDocument, args) -> Setting:
    _require(args, "context")
    return Setting(doc.model, doc.context(args.context))


def _budget(args) -> causes_mod.Budget | None:
    if args.budget is None:
        return None
    return causes_mod.Budget(max_evaluations=args.budget)


def _conj_record(conj) -> dict:
    return {
        "text": formulas.format_conjunction(conj),
        "atoms": [[v, w, x] for ((v, w), x) in conj],
    }


def _witness_record(witness) -> dict | None:
    if witness is None:
        return None
    record = {
        "contingency": {f"{v}@{w}": x for ((v, w), x) in witness.contingency},
        "alternative": list(witness.alternative),
    }
    if witness.restored is not None:
        record["restored"] = {f"{v}@{w}": x for ((v, w), x) in witness.restored}
    return record


def _verdict_record(verdict) -> dict:
    return {
        "holds": verdict.holds,
        "definition": verdict.definition,
        "candidate": _conj_record(verdict.candidate),
        "ac1": verdict.ac1,
        "ac2": verdict.ac2,
        "ac3": verdict.ac3,
        "witness": _witness_record(verdict.witness),
        "ac3_violator": _conj_record(verdict.ac3_violator) if verdict.ac3_violator else None,
        "failure": verdict.failure,
        "searched": verdict.searched,
    }


def _emit(args, record: dict, human: str) -> None:
    if args.json:
        print(json.dumps(record, sort_keys=True))
    else:
        print(human)


def _describe_verdict(verdict) -> str:
    mark = {True: "HOLDS", False: "does NOT hold", None: "is INCONCLUSIVE"}[verdict.holds]
    lines = [f"cause({formulas.format_conjunction(verdict.candidate)}; "
             f"{verdict.definition}) {mark}"]
    for clause, value in (("AC1", verdict.ac1), ("AC2", verdict.ac2), ("AC3", verdict.ac3)):
        state = {True: "pass", False: "FAIL", None: "not checked"}[value]
        lines.append(f"  {clause}: {state}")
    if verdict.witness is not None:
        alt = ", ".join(
            f"{v}@{w} := {x}" for ((v, w), _), x in
            zip(verdict.candidate, verdict.witness.alternative))
        cont = ", ".join(f"{v}@{w} := {x}" for ((v, w), x) in verdict.witness.contingency)
        lines.append(f"  witness: [{alt}] with contingency [{cont or 'empty'}]")
    if verdict.ac3_violator:
        lines.append(f"  smaller cause: {formulas.format_conjunction(verdict.ac3_violator)}")
    if verdict.failure:
        lines.append(f"  {verdict.failure}")
    return "\n".join(lines)


# ---------------------------------------------------------------------------
# Subcommand bodies
# ---------------------------------------------------------------------------

def _cmd_sat(args) -> None:
    doc = _load(args)
    _apply_query(args, doc)
    _require(args, "formula")
    setting = _setting(doc, args)
    formula = formulas.parse(args.formula)
    if args.all_worlds:
        holds = valid_in_model(setting, formula)
        where = "all worlds"
    else:
        _require(args, "world")
        holds = satisfies(setting, args.world, formula)
        where = args.world
    _emit(args, {"kind": "sat", "formula": formulas.format_formula(formula),
                 "world": None if args.all_worlds else args.world, "holds": holds},
          f"{formulas.format_formula(formula)} at {where}: {str(holds).lower()}")


def _cmd_eval(args) -> None:
    doc = _load(args)
    _apply_query(args, doc)
    setting = _setting(doc, args)
    worlds = [args.world] if args.world else list(doc.model.worlds)
    values = {f"{v}@{w}": x for (v, w), x in sorted(setting.valuation.values.items())
              if w in worlds}
    lines = []
    for w in worlds:
        row = " ".join(f"{v}={setting.valuation[(v, w)]}"
                       for v in sorted(doc.model.signature.endogenous))
        true = ", ".join(sorted(setting.valuation.trueset(w))) or "-"
        lines.append(f"{w}: {row}   true: {{{true}}}")
    _emit(args, {"kind": "eval", "valuation": values}, "\n".join(lines))


def _cmd_cause(args) -> None:
    doc = _load(args)
    _apply_query(args, doc)
    _require(args, "candidate", "event", "definition", "world")
    setting = _setting(doc, args)
    candidate = formulas.parse_conjunction(args.candidate)
    event = formulas.parse_event(args.event)
    verdict = causes_mod.is_cause(setting, args.world, candidate, event,
                                  args.definition, _budget(args))
    record = {"kind": "cause", "world": args.world,
              "event": formulas.format_formula(event)}
    record.update(_verdict_record(verdict))
    _emit(args, record, f"{args.event} at {args.world}: " + _describe_verdict(verdict))


def _cmd_causes(args) -> None:
    doc = _load(args)
    _apply_query(args, doc)
    _require(args, "event", "definition", "max_conjuncts", "world")
    setting = _setting(doc, args)
    event = formulas.parse_event(args.event)
    found = causes_mod.find_causes(setting, args.world, event, args.definition,
                                   args.max_conjuncts, _budget(args))
    human = [f"causes of {args.event} at {args.world} ({args.definition}, "
             f"up to {args.max_conjuncts} conjuncts): {len(found)}"]
    human += [f"  {formulas.format_conjunction(c)}" for c in found]
    _emit(args, {"kind": "causes", "world": args.world,
                 "event": formulas.format_formula(event),
                 "definition": args.definition, "max_conjuncts": args.max_conjuncts,
                 "causes": [_conj_record(c) for c in found]},
          "\n".join(human))


def _cmd_part(args) -> None:
    doc = _load(args)
    _apply_query(args, doc)
    _require(args, "atom", "event", "definition", "world")
    setting = _setting(doc, args)
    (atom,) = formulas.parse_conjunction(args.atom)
    event = formulas.parse_event(args.event)
    max_conjuncts = args.max_conjuncts
    holds = causes_mod.part_of_cause(setting, args.world, atom, event,
                                     args.definition, max_conjuncts, _budget(args))
    bound = max_conjuncts if max_conjuncts is not None else "exhaustive"
    _emit(args, {"kind": "part", "world": args.world, "atom": args.atom,
                 "definition": args.definition, "max_conjuncts": max_conjuncts,
                 "holds": holds},
          f"{args.atom} is part of a cause of {args.event} at {args.world} "
          f"({args.definition}, candidate size: {bound}): {str(holds).lower()}")


def _cmd_possibility(args) -> None:
    _cmd_poss_cert(args, causes_mod.possibility_is_cause, "possibility")


def _cmd_certainty(args) -> None:
    _cmd_poss_cert(args, causes_mod.certainty_is_cause, "certainty")


def _cmd_poss_cert(args, op, kind) -> None:
    doc = _load(args)
    _apply_query(args, doc)
    _require(args, "variable", "value", "event", "world")
    setting = _setting(doc, args)
    event = formulas.parse_event(args.event)
    holds = op(setting, args.world, args.variable, args.value, event, _budget(args))
    _emit(args, {"kind": kind, "world": args.world, "variable": args.variable,
                 "value": args.value, "event": formulas.format_formula(event),
                 "holds": holds},
          f"the {kind} of {args.variable}={args.value} causes {args.event} "
          f"at {args.world}: {str(holds).lower()}")


def _cmd_modalcause(args) -> None:
    doc = _load(args)
    _apply_query(args, doc)
    _require(args, "modality", "candidate", "event", "definition", "world")
    setting = _setting(doc, args)
    candidate = formulas.parse_conjunction(args.candidate)
    event = formulas.parse_event(args.event)
    holds = causes_mod.modal_cause_check(setting, args.world, args.modality, candidate,
                                         event, args.definition, _budget(args))
    _emit(args, {"kind": "modalcause", "world": args.world, "modality": args.modality,
                 "candidate": args.candidate, "event": formulas.format_formula(event),
                 "definition": args.definition, "holds": holds},
          f"{args.modality}-cause({args.candidate}; {args.definition}) of {args.event} "
          f"at {args.world}: {str(holds).lower()}")


def _cmd_suffcause(args) -> None:
    doc = _load(args)
    _apply_query(args, doc)
    _require(args, "candidate", "event", "context")
    scope = args.scope or "global"
    definition = args.definition or "updated"
    space = doc.context_space()
    conjunction = formulas.parse_local_conjunction(args.candidate)
    event = formulas.parse_event(args.event)
    verdict = is_sufficient_cause(space, args.context, conjunction, event,
                                  scope, definition, _budget(args))
    state = {True: "pass", False: "FAIL", None: "-"}
    clauses = ", ".join(
        f"{name}={state[value]}"
        for name, value in (("SC1", verdict.sc1), ("SC2", verdict.sc2),
                            ("SC3", verdict.sc3), ("minimal", verdict.minimal)))
    _emit(args, {"kind": "suffcause", "context": args.context, "scope": scope,
                 "definition": definition, "candidate": args.candidate,
                 "event": formulas.format_formula(event), "holds": verdict.holds,
                 "sc1": verdict.sc1, "sc2": verdict.sc2, "sc3": verdict.sc3,
                 "minimal": verdict.minimal, "failure": verdict.failure},
          f"{args.candidate} is a sufficient cause of {args.event} in {args.context} "
          f"({scope}, {definition}): {str(verdict.holds).lower()}\n  {clauses}"
          + (f"\n  {verdict.failure}" if verdict.failure else ""))


def _cmd_axioms(args) -> None:
    report = axioms_mod.run_suite(args.models, args.instances, seed=args.seed,
                                  mutation_check=not args.no_mutation_check)
    lines = [f"checked {report.models} generated models x {report.instances_per_scheme} "
             f"instances per scheme"]
    for scheme in axioms_mod.SchemeId:
        bad = [c for c in report.counterexamples if c.scheme is scheme]
        state = f"FAIL ({len(bad)} counterexamples)" if bad else "pass"
        lines.append(f"  {scheme.value}: {state}")
        for c in bad[:3]:
            lines.append(f"    at {c.world}: {c.instance}")
    if not args.no_mutation_check:
        state = "detected" if report.mutation_counterexamples else "NOT DETECTED"
        lines.append(f"  mutation check (world-local pseudo-G): {state} "
                     f"({report.mutation_counterexamples} models)")
    _emit(args, {"kind": "axioms", "models": report.models,
                 "instances": report.instances_per_scheme,
                 "counterexamples": [
                     {"scheme": c.scheme.value, "world": c.world, "instance": c.instance}
                     for c in report.counterexamples],
                 "mutation_counterexamples": report.mutation_counterexamples,
                 "passed": report.passed},
          "\n".join(lines))


def corpus() -> list[Path]:
    """Paths of the bundled example model files."""
    root = resources.files("causalmk") / "corpus"
    return sorted((Path(str(entry)) for entry in root.iterdir()
                   if entry.name.endswith(".ck")), key=lambda p: p.name)


def _cmd_corpus(args) -> None:
    files = corpus()
    if args.export:
        target = Path(args.export)
        target.mkdir(parents=True, exist_ok=True)
        for path in files:
            shutil.copy(path, target / path.name)
    _emit(args, {"kind": "corpus",
                 "files": [{"name": p.name, "path": str(p)} for p in files]},
          "\n".join(f"{p.name}\t{p}" for p in files))


_COMMANDS = {
    "sat": _cmd_sat,
    "eval": _cmd_eval,
    "cause": _cmd_cause,
    "causes": _cmd_causes,
    "part": _cmd_part,
    "possibility": _cmd_possibility,
    "certainty": _cmd_certainty,
    "modalcause": _cmd_modalcause,
    "suffcause": _cmd_suffcause,
    "axioms": _cmd_axioms,
    "corpus": _cmd_corpus,
}


def run(argv) -> int:
    """Execute one invocation; returns the exit code."""
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
        random.seed(args.seed)
        _COMMANDS[args.command](args)
        return 0
    except _UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return USAGE_ERROR
    except FormulaSyntaxError as exc:
        print(f"formula error: {exc}", file=sys.stderr)
        return USAGE_ERROR
    except SearchBudgetExceeded as exc:
        print(f"budget exceeded: {exc}", file=sys.stderr)
        return BUDGET_ERROR
    except CausalError as exc:
        print(f"model error: {exc}", file=sys.stderr)
        return MODEL_ERROR


def main() -> None:
    sys.exit(run(sys.argv[1:]))


if __name__ == "__main__":
    main()
