"""Line-oriented problem files.

Grammar (``#`` starts a comment, statements end with ``;``)::

    ring     { field Q; vars x1 x2; relations x1*x2; }
    algebra  { vars Y1 Y2; relations x2*Y1 - x1*Y2, x2*Y1; }
    morphism { precision 12; Y1 = <poly>; verify Y1 = <poly>; }
    options  { seed 42; max_subset 3; }
    minprimes{ x1 | x2 }
    coeffext { vars U1; relations U1^2 - 2; }

Relations lists are comma separated; repeated ``relations`` statements
append.  Only the rationals are supported as coefficient field.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .desing import DesingProblem, MorphismApprox
from .errors import PolyParseError
from .localring import LocalRingSpec, minimal_primes
from .orders import ALGEBRA, BASE, COEFF, VarTable, mixed_order
from .poly import format_poly, parse_poly


@dataclass
class ProblemFile:
    base_vars: tuple
    j_texts: tuple
    y_vars: tuple
    i_texts: tuple
    precision: int
    jet_texts: dict
    verify_texts: dict = field(default_factory=dict)
    seed: int = 42
    max_subset: int = 3
    minprime_texts: tuple = ()
    u_vars: tuple = ()
    jbar_texts: tuple = ()

    def table(self):
        pairs = [(n, BASE) for n in self.base_vars]
        pairs += [(n, COEFF) for n in self.u_vars]
        pairs += [(n, ALGEBRA) for n in self.y_vars]
        return VarTable.make(*pairs)

    def build(self):
        """Ring, relation list and morphism data ready for the pipeline."""
        table = self.table()
        j_gens = [parse_poly(table, t) for t in self.j_texts]
        primes = None
        if self.minprime_texts:
            primes = tuple(tuple(parse_poly(table, t) for t in group)
                           for group in self.minprime_texts)
        ring = LocalRingSpec(table, j_gens, primes)
        if primes is not None:
            ring.validate_primes()
        relations = tuple(parse_poly(table, t) for t in self.i_texts)
        jets = {nm: ring.jet(parse_poly(table, t), self.precision)
                for nm, t in self.jet_texts.items()}
        verify = {}
        if self.verify_texts:
            vprec = max(self.precision,
                        max(parse_poly(table, t).total_degree() + 1
                            for t in self.verify_texts.values()))
            verify = {nm: ring.jet(parse_poly(table, t), vprec)
                      for nm, t in self.verify_texts.items()}
        morphism = MorphismApprox(self.precision, jets, verify)
        return DesingProblem(ring, relations, morphism,
                             seed=self.seed, max_subset=self.max_subset)


class _Stream:
    def __init__(self, text):
        self.tokens = _tokenize_problem(text)
        self.pos = 0

    def peek(self):
        return self.tokens[self.pos]

    def next(self):
        tok = self.tokens[self.pos]
        self.pos += 1
        return tok

    def expect(self, kind, what=None):
        tok = self.next()
        if tok[0] != kind:
            raise PolyParseError(f"expected {what or kind}, got {tok[1]!r}",
                                 tok[2], tok[3])
        return tok


def _tokenize_problem(text):
    # reuse the polynomial tokenizer plus the structural symbols
    out = []
    line, col = 1, 1
    i, n = 0, len(text)
    structural = "{};=|,"
    while i < n:
        ch = text[i]
        if ch == "\n":
            line += 1
            col = 1
            i += 1
            continue
        if ch.isspace():
            i += 1
            col += 1
            continue
        if ch == "#":
            while i < n and text[i] != "\n":
                i += 1
            continue
        if ch in structural:
            out.append((ch, ch, line, col))
            i += 1
            col += 1
            continue
        if ch in "+-*^()/":
            out.append(("op", ch, line, col))
            i += 1
            col += 1
            continue
        if ch.isdigit():
            j = i
            while j < n and text[j].isdigit():
                j += 1
            out.append(("int", text[i:j], line, col))
            col += j - i
            i = j
            continue
        if ch.isalpha() or ch == "_":
            j = i
            while j < n and (text[j].isalnum() or text[j] == "_"):
                j += 1
            out.append(("ident", text[i:j], line, col))
            col += j - i
            i = j
            continue
        raise PolyParseError(f"unexpected character {ch!r}", line, col)
    out.append(("end", "", line, col))
    return out


def _collect_poly_text(stream, stop_kinds):
    parts = []
    while stream.peek()[0] not in stop_kinds:
        kind, val, line, col = stream.next()
        if kind == "end":
            raise PolyParseError("unterminated statement", line, col)
        parts.append(val)
    if not parts:
        kind, val, line, col = stream.peek()
        raise PolyParseError("expected a polynomial", line, col)
    return " ".join(parts)


def parse_problem(text):
    """Parse and validate a problem file."""
    stream = _Stream(text)
    sections = {}
    while stream.peek()[0] != "end":
        kind, name, line, col = stream.expect("ident", "section name")
        if name not in ("ring", "algebra", "morphism", "options",
                        "minprimes", "coeffext"):
            raise PolyParseError(f"unknown section {name!r}", line, col)
        if name in sections:
            raise PolyParseError(f"duplicate section {name!r}", line, col)
        stream.expect("{")
        sections[name] = (line, col, _section_body(stream, name))
    if "ring" not in sections:
        raise PolyParseError("missing ring section", 1, 1)
    if "algebra" not in sections:
        raise PolyParseError("missing algebra section", 1, 1)
    if "morphism" not in sections:
        raise PolyParseError("missing morphism section", 1, 1)
    pf = _assemble(sections)
    _validate(pf, sections)
    return pf


def _section_body(stream, name):
    body = {"vars": [], "relations": [], "assign": [], "verify": [],
            "scalars": {}, "groups": []}
    if name == "minprimes":
        group = []
        while True:
            kind, val, line, col = stream.peek()
            if kind == "}":
                stream.next()
                if group:
                    body["groups"].append(tuple(group))
                return body
            if kind == "|":
                stream.next()
                body["groups"].append(tuple(group))
                group = []
                continue
            group.append(_collect_poly_text(stream, ("|", ",", "}")))
            if stream.peek()[0] == ",":
                stream.next()
    while True:
        kind, val, line, col = stream.peek()
        if kind == "}":
            stream.next()
            return body
        stream.expect("ident", "statement keyword")
        if val == "vars":
            while stream.peek()[0] == "ident":
                body["vars"].append(stream.next()[1])
            stream.expect(";")
        elif val == "relations":
            while True:
                body["relations"].append(
                    _collect_poly_text(stream, (",", ";")))
                if stream.peek()[0] == ",":
                    stream.next()
                    continue
                break
            stream.expect(";")
        elif val in ("field",):
            kind2, val2, line2, col2 = stream.expect("ident", "field name")
            if val2 != "Q":
                raise PolyParseError(
                    "only the rational field Q is supported", line2, col2)
            body["scalars"]["field"] = val2
            stream.expect(";")
        elif val in ("precision", "seed", "max_subset"):
            kind2, val2, line2, col2 = stream.expect("int")
            body["scalars"][val] = int(val2)
            stream.expect(";")
        elif val == "verify":
            kind2, name2, line2, col2 = stream.expect("ident", "variable")
            stream.expect("=")
            body["verify"].append(
                (name2, _collect_poly_text(stream, (";",)), line2, col2))
            stream.expect(";")
        else:
            # `Y1 = poly;` morphism assignment
            name2, line2, col2 = val, line, col
            stream.expect("=")
            body["assign"].append(
                (name2, _collect_poly_text(stream, (";",)), line2, col2))
            stream.expect(";")


def _assemble(sections):
    ring_body = sections["ring"][2]
    algebra_body = sections["algebra"][2]
    morph_body = sections["morphism"][2]
    options = sections.get("options", (0, 0, {"scalars": {}}))[2]["scalars"]
    minprimes_body = sections.get("minprimes")
    coeff_body = sections.get("coeffext")
    pf = ProblemFile(
        base_vars=tuple(ring_body["vars"]),
        j_texts=tuple(ring_body["relations"]),
        y_vars=tuple(algebra_body["vars"]),
        i_texts=tuple(algebra_body["relations"]),
        precision=morph_body["scalars"].get("precision", 0),
        jet_texts={nm: txt for nm, txt, _, _ in morph_body["assign"]},
        verify_texts={nm: txt for nm, txt, _, _ in morph_body["verify"]},
        seed=options.get("seed", 42),
        max_subset=options.get("max_subset", 3),
        minprime_texts=tuple(minprimes_body[2]["groups"])
        if minprimes_body else (),
        u_vars=tuple(coeff_body[2]["vars"]) if coeff_body else (),
        jbar_texts=tuple(coeff_body[2]["relations"]) if coeff_body else (),
    )
    return pf


def _validate(pf, sections):
    morph = sections["morphism"]
    if pf.precision < 1:
        raise PolyParseError("morphism precision must be at least 1",
                             morph[0], morph[1])
    if len(set(pf.base_vars)) != len(pf.base_vars) or not pf.base_vars:
        raise PolyParseError("ring vars must be nonempty and distinct",
                             sections["ring"][0], sections["ring"][1])
    table = pf.table()
    for t in pf.j_texts + pf.i_texts + pf.jbar_texts:
        parse_poly(table, t)
    for group in pf.minprime_texts:
        for t in group:
            parse_poly(table, t)
    declared = set(pf.y_vars)
    for nm, txt, line, col in morph[2]["assign"]:
        if nm not in declared:
            raise PolyParseError(f"jet for undeclared variable {nm!r}",
                                 line, col)
        p = parse_poly(table, txt)
        if p.total_degree() >= pf.precision:
            raise PolyParseError(
                f"jet for {nm!r} has degree {p.total_degree()} >= precision "
                f"{pf.precision}", line, col)
    for nm, txt, line, col in morph[2]["verify"]:
        if nm not in declared:
            raise PolyParseError(f"verify jet for undeclared variable {nm!r}",
                                 line, col)
        parse_poly(table, txt)
    missing = declared - set(pf.jet_texts)
    if missing:
        raise PolyParseError(
            "morphism section is missing jets for: " + ", ".join(sorted(missing)),
            morph[0], morph[1])
    return pf


def print_problem(pf):
    """Canonical text for a ProblemFile; parse(print(pf)) round-trips."""
    table = pf.table()
    order = mixed_order(table)

    def fmt(text):
        return format_poly(parse_poly(table, text), order)

    lines = ["ring {", f"  field Q;", "  vars " + " ".join(pf.base_vars) + ";"]
    if pf.j_texts:
        lines.append("  relations " + ", ".join(fmt(t) for t in pf.j_texts) + ";")
    lines.append("}")
    lines.append("algebra {")
    lines.append("  vars " + " ".join(pf.y_vars) + ";")
    if pf.i_texts:
        lines.append("  relations " + ", ".join(fmt(t) for t in pf.i_texts) + ";")
    lines.append("}")
    lines.append("morphism {")
    lines.append(f"  precision {pf.precision};")
    for nm in pf.y_vars:
        if nm in pf.jet_texts:
            lines.append(f"  {nm} = " + fmt(pf.jet_texts[nm]) + ";")
    for nm in pf.y_vars:
        if nm in pf.verify_texts:
            lines.append(f"  verify {nm} = " + fmt(pf.verify_texts[nm]) + ";")
    lines.append("}")
    lines.append("options {")
    lines.append(f"  seed {pf.seed};")
    lines.append(f"  max_subset {pf.max_subset};")
    lines.append("}")
    if pf.minprime_texts:
        groups = " | ".join(", ".join(fmt(t) for t in group)
                            for group in pf.minprime_texts)
        lines.append("minprimes { " + groups + " }")
    if pf.u_vars:
        lines.append("coeffext {")
        lines.append("  vars " + " ".join(pf.u_vars) + ";")
        if pf.jbar_texts:
            lines.append("  relations "
                         + ", ".join(fmt(t) for t in pf.jbar_texts) + ";")
        lines.append("}")
    return "\n".join(lines) + "\n"
