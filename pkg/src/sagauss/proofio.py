"""JSON-lines proof files: a header object, then one object per line."""

from __future__ import annotations

import json
from typing import Iterable, List, TextIO

from .kernel import (
    Axiom,
    Hypothesis,
    LinComb,
    MultCompl,
    MultVar,
    Proof,
    ProofLine,
)
from .poly import VarId, as_rational, format_poly, format_rational, parse_poly

FORMAT = "saj1"


class ProofFormatError(ValueError):
    def __init__(self, lineno: int, reason: str):
        super().__init__(f"proof file line {lineno}: {reason}")
        self.lineno = lineno
        self.reason = reason


def header_object(proof: Proof) -> dict:
    return {
        "format": FORMAT,
        "field": proof.modulus,
        "mode": proof.mode,
        "hypotheses": [format_poly(h) for h in proof.hypotheses],
    }


def line_object(line: ProofLine) -> dict:
    obj = {"id": line.id}
    j = line.just
    if isinstance(j, Axiom):
        obj.update(kind="axiom", axiom=j.kind, var=j.var.name)
    elif isinstance(j, Hypothesis):
        obj.update(kind="hyp", index=j.index)
    elif isinstance(j, LinComb):
        obj.update(kind="lincomb", p1=j.p1, a=format_rational(j.a), p2=j.p2, b=format_rational(j.b))
    elif isinstance(j, MultVar):
        obj.update(kind="mult_var", p1=j.p1, var=j.var.name)
    elif isinstance(j, MultCompl):
        obj.update(kind="mult_compl", p1=j.p1, var=j.var.name)
    else:
        raise TypeError(f"unknown justification {j!r}")
    obj["poly"] = format_poly(line.poly)
    return obj


def dump_lines(proof: Proof) -> Iterable[str]:
    yield json.dumps(header_object(proof), separators=(",", ":"))
    for line in proof.lines:
        yield json.dumps(line_object(line), separators=(",", ":"))


def dumps(proof: Proof) -> str:
    return "\n".join(dump_lines(proof)) + "\n"


def dump(proof: Proof, fh: TextIO) -> None:
    for text in dump_lines(proof):
        fh.write(text)
        fh.write("\n")


def _field(obj: dict, key: str, lineno: int):
    if key not in obj:
        raise ProofFormatError(lineno, f"missing field {key!r}")
    return obj[key]


def _int(obj: dict, key: str, lineno: int) -> int:
    v = _field(obj, key, lineno)
    if not isinstance(v, int) or isinstance(v, bool):
        raise ProofFormatError(lineno, f"field {key!r} must be an integer")
    return v


def _parse_line(obj: dict, lineno: int) -> ProofLine:
    kind = _field(obj, "kind", lineno)
    try:
        if kind == "axiom":
            just = Axiom(_field(obj, "axiom", lineno), VarId.parse(_field(obj, "var", lineno)))
        elif kind == "hyp":
            just = Hypothesis(_int(obj, "index", lineno))
        elif kind == "lincomb":
            just = LinComb(
                _int(obj, "p1", lineno),
                as_rational(str(_field(obj, "a", lineno))),
                _int(obj, "p2", lineno),
                as_rational(str(_field(obj, "b", lineno))),
            )
        elif kind == "mult_var":
            just = MultVar(_int(obj, "p1", lineno), VarId.parse(_field(obj, "var", lineno)))
        elif kind == "mult_compl":
            just = MultCompl(_int(obj, "p1", lineno), VarId.parse(_field(obj, "var", lineno)))
        else:
            raise ProofFormatError(lineno, f"unknown kind {kind!r}")
        poly = parse_poly(_field(obj, "poly", lineno))
    except ProofFormatError:
        raise
    except (ValueError, TypeError, ZeroDivisionError) as exc:
        raise ProofFormatError(lineno, str(exc)) from None
    return ProofLine(_int(obj, "id", lineno), poly, just)


def loads(text: str) -> Proof:
    header = None
    lines: List[ProofLine] = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        if not raw.strip():
            continue
        try:
            obj = json.loads(raw)
        except json.JSONDecodeError as exc:
            raise ProofFormatError(lineno, f"bad JSON: {exc.msg}") from None
        if not isinstance(obj, dict):
            raise ProofFormatError(lineno, "expected a JSON object")
        if header is None:
            if obj.get("format") != FORMAT:
                raise ProofFormatError(lineno, f"expected a {FORMAT} header")
            header = obj
            continue
        lines.append(_parse_line(obj, lineno))
    if header is None:
        raise ProofFormatError(1, "empty proof file")
    try:
        hyps = [parse_poly(h) for h in header.get("hypotheses", [])]
    except ValueError as exc:
        raise ProofFormatError(1, f"bad hypothesis: {exc}") from None
    p = header.get("field")
    if not isinstance(p, int) or isinstance(p, bool):
        raise ProofFormatError(1, "header field must be an integer")
    mode = header.get("mode")
    if mode not in ("f2", "fp"):
        raise ProofFormatError(1, f"unknown mode {mode!r}")
    return Proof(hyps, lines, None, p, mode)


def load(fh: TextIO) -> Proof:
    return loads(fh.read())
