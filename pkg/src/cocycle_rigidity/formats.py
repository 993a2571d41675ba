"""Group specs, cocycle rule files and result documents.

Documents are JSON with a fixed key order.  Group elements are written by
their canonical geodesic word (``e`` for the identity, generator names
joined by ``.``), elements of the target group by their oracle label, and
window patterns as symbol strings in canonical site order.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass, field
from pathlib import Path

from .cocycle import LocalCocycle, TableRule, WeightedSiteSum, positive_generators
from .errors import CompletenessError, DocumentError, GroupSpecError, LabelError
from .geometry import CayleyExplorer
from .groups import Cyclic, DirectProduct, FreeGroup, Group, Lattice, Symmetric
from .shift import Alphabet, Configuration, enumerate_patterns

COCYCLE_FORMAT = "cocycle-rule"
RESULT_FORMAT = "rigidity-result"
VERSION = 1

_ATOM = re.compile(r"Z\^(\d+)|F\((\d+)\)|C\((\d+)\)|S\((\d+)\)")


def parse_group(spec: str) -> Group:
    """Parse ``atom ( " x " atom )*`` with atoms ``Z^d``, ``F(k)``, ``C(n)``, ``S(n)``."""
    factors = []
    pos = 0
    while True:
        m = _ATOM.match(spec, pos)
        if not m:
            if spec[pos : pos + 1].isalpha():
                raise GroupSpecError(f"unsupported group atom in {spec!r}", pos)
            raise GroupSpecError(f"expected a group atom in {spec!r}", pos)
        d, k, n, s = m.groups()
        try:
            if d is not None:
                factors.append(Lattice(int(d)))
            elif k is not None:
                factors.append(FreeGroup(int(k)))
            elif n is not None:
                factors.append(Cyclic(int(n)))
            else:
                factors.append(Symmetric(int(s)))
        except ValueError as exc:
            raise GroupSpecError(f"{exc} in {spec!r}", pos) from None
        pos = m.end()
        if pos == len(spec):
            break
        if not spec.startswith(" x ", pos):
            raise GroupSpecError(f"expected ' x ' between factors in {spec!r}", pos)
        pos += 3
    return factors[0] if len(factors) == 1 else DirectProduct(factors)


def _dumps(doc: dict) -> str:
    return json.dumps(doc, indent=2, ensure_ascii=False) + "\n"


def _check_header(doc, kind: str) -> None:
    if not isinstance(doc, dict) or doc.get("format") != kind:
        raise DocumentError(f"not a {kind} document")
    if doc.get("version") != VERSION:
        raise DocumentError(f"unsupported {kind} version {doc.get('version')!r} (expected {VERSION})")


def _alphabet_doc(alphabet: Alphabet) -> dict:
    return {"symbols": list(alphabet.symbols), "zero": alphabet.symbols[alphabet.zero_index]}


def _alphabet_from(doc) -> Alphabet:
    try:
        symbols = doc["symbols"]
        zero = doc["zero"]
        return Alphabet.of(symbols, zero)
    except (KeyError, TypeError, ValueError) as exc:
        raise DocumentError(f"bad alphabet block: {exc}") from None


def _h_label(H: Group, text):
    if not isinstance(text, str):
        raise LabelError(f"target label must be a string, got {text!r}")
    return H.parse_label(text)


# -- cocycles ---------------------------------------------------------------------


def cocycle_to_doc(c: LocalCocycle) -> dict:
    E, G, H, A = c.explorer, c.group, c.target, c.alphabet
    rules = {}
    for p in c.positive:
        rule = c.rules[p]
        name = G.generator_names[p]
        if isinstance(rule, WeightedSiteSum):
            rules[name] = {
                "form": "weighted-site-sum",
                "weights": {E.word_label(site): H.label(w) for site, w in zip(c.window, rule.weights)},
            }
        else:
            table = {}
            for pat in enumerate_patterns(A, c.window):
                table[pat.text(A)] = H.label(rule(pat.values))
            rules[name] = {"table": table}
    return {
        "format": COCYCLE_FORMAT,
        "version": VERSION,
        "group": G.spec,
        "target": H.spec,
        "alphabet": _alphabet_doc(A),
        "window": c.L,
        "generators": [G.generator_names[p] for p in c.positive],
        "rules": rules,
    }


def dumps_cocycle(c: LocalCocycle) -> str:
    return _dumps(cocycle_to_doc(c))


def cocycle_from_doc(doc: dict, max_radius: int | None = None) -> LocalCocycle:
    _check_header(doc, COCYCLE_FORMAT)
    try:
        G = parse_group(doc["group"])
        H = parse_group(doc["target"])
        A = _alphabet_from(doc["alphabet"])
        L = doc["window"]
        names = doc["generators"]
        rule_docs = doc["rules"]
    except KeyError as exc:
        raise DocumentError(f"cocycle document is missing {exc}") from None
    if not isinstance(L, int) or L < 0:
        raise DocumentError("window must be a non-negative integer")
    E = CayleyExplorer(G, max_radius)
    positive = [G.generator_index(n) for n in names]
    expected = positive_generators(G)
    covered = {G.generators[p] for p in positive} | {G.inv(G.generators[p]) for p in positive}
    if len(set(positive)) != len(positive) or covered != set(G.generators) or len(positive) != len(expected):
        raise DocumentError("generators must name exactly one of each {s, s^-1} pair")
    if set(rule_docs) != set(names):
        raise DocumentError("rules must be given for exactly the declared generators")
    window = tuple(E.ball(L))
    site_of = {E.word_label(s): s for s in window}
    rules = {}
    for name, p in zip(names, positive):
        rd = rule_docs[name]
        if "table" in rd:
            raw = rd["table"]
            table = {}
            for pat in enumerate_patterns(A, window):
                key = pat.text(A)
                if key not in raw:
                    raise CompletenessError(name, key)
                table[pat.values] = _h_label(H, raw[key])
            if len(raw) != len(table):
                extra = sorted(set(raw) - {pat.text(A) for pat in enumerate_patterns(A, window)})
                raise DocumentError(f"rule table for {name!r} has unknown patterns {extra[:3]}")
            rules[p] = TableRule(table)
        elif rd.get("form") == "weighted-site-sum":
            weights = rd.get("weights", {})
            unknown = set(weights) - set(site_of)
            if unknown:
                raise LabelError(f"weights name sites outside B({L}): {sorted(unknown)}")
            w = [_h_label(H, weights[E.word_label(s)]) if E.word_label(s) in weights else H.identity for s in window]
            rules[p] = WeightedSiteSum(H, w, len(A))
        else:
            raise DocumentError(f"rule for {name!r} needs a 'table' or form 'weighted-site-sum'")
    return LocalCocycle(E, H, A, L, rules, positive)


def loads_cocycle(text: str, max_radius: int | None = None) -> LocalCocycle:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise DocumentError(f"invalid JSON: {exc}") from None
    return cocycle_from_doc(doc, max_radius)


def load_cocycle(path, max_radius: int | None = None) -> LocalCocycle:
    return loads_cocycle(Path(path).read_text(encoding="utf-8"), max_radius)


def save_cocycle(c: LocalCocycle, path) -> None:
    Path(path).write_text(dumps_cocycle(c), encoding="utf-8")


# -- results ----------------------------------------------------------------------


def configuration_doc(E: CayleyExplorer, x: Configuration) -> dict:
    A = x.alphabet
    sites = sorted(x.support, key=E.order_key)
    return {
        "default": A.symbols[x.default],
        "sites": {E.word_label(g): A.symbols[x(g)] for g in sites},
    }


def configuration_from_doc(E: CayleyExplorer, A: Alphabet, doc: dict) -> Configuration:
    return Configuration(
        A,
        {E.parse_word(w): A.index(s) for w, s in doc["sites"].items()},
        A.index(doc["default"]),
    )


def witness_doc(c: LocalCocycle, w) -> dict:
    E, H = c.explorer, c.target
    out = {"kind": w.kind, "x": configuration_doc(E, w.x)}
    details = {}
    for key, value in w.details.items():
        if key in ("g1", "g2", "g", "from", "to"):
            details[key] = E.word_label(value)
        elif key in ("b1", "b2", "bx", "by", "left", "right"):
            details[key] = H.label(value)
        elif key == "y":
            details[key] = configuration_doc(E, value)
        elif key in ("r", "R_max", "avoiding_path"):
            details[key] = value
    out["details"] = details
    return out


def report_doc(c: LocalCocycle, result) -> dict:
    E, G, H = c.explorer, c.group, c.target
    opts = result.options
    ver = result.verification
    return {
        "seed": opts.seed,
        "samples": opts.samples,
        "phi_homomorphism": {
            "radius": result.phi_report.r,
            "checked": result.phi_report.checked,
            "failures": [
                {"g": E.word_label(g), "h": E.word_label(h), "left": H.label(a), "right": H.label(b)}
                for g, h, a, b in result.phi_report.failures
            ],
        },
        "independence": {
            "checked": result.independence.checked,
            "failures": [witness_doc(c, w) for w in result.independence.witnesses],
        },
        "locality": {
            "checked": result.locality.checked,
            "failures": [witness_doc(c, w) for w in result.locality.witnesses],
        },
        "cohomology": {
            "radius": min(opts.r_cohomology, opts.r_phi),
            "checked": ver.checked,
            "exhaustive": ver.exhaustive,
            "failures": [cohomology_failure_doc(c, f) for f in ver.failures],
        },
        "obstruction": None if result.obstruction is None else witness_doc(c, result.obstruction),
    }


def cohomology_failure_doc(c: LocalCocycle, f) -> dict:
    E, H, A = c.explorer, c.target, c.alphabet
    sites = sorted(f.window, key=E.order_key)
    return {
        "g": E.word_label(f.g),
        "window": "".join(A.symbols[f.window[s]] for s in sites),
        "left": H.label(f.left),
        "right": H.label(f.right),
    }


@dataclass
class ResultDocument:
    """Serialized form of a rigidity run; all fields are plain strings and ints."""

    group: str
    target: str
    alphabet: dict
    window: int
    N: dict
    phi: dict
    b_sites: list
    b_complete: bool
    b_entries: dict
    report: dict = field(default_factory=dict)

    def to_doc(self) -> dict:
        return {
            "format": RESULT_FORMAT,
            "version": VERSION,
            "group": self.group,
            "target": self.target,
            "alphabet": self.alphabet,
            "window": self.window,
            "N": self.N,
            "phi": self.phi,
            "b": {
                "radius": 3 * self.window,
                "sites": self.b_sites,
                "complete": self.b_complete,
                "entries": self.b_entries,
            },
            "report": self.report,
        }

    def dumps(self) -> str:
        return _dumps(self.to_doc())

    @classmethod
    def from_doc(cls, doc: dict) -> "ResultDocument":
        _check_header(doc, RESULT_FORMAT)
        try:
            b = doc["b"]
            return cls(
                group=doc["group"],
                target=doc["target"],
                alphabet=doc["alphabet"],
                window=doc["window"],
                N=doc["N"],
                phi=doc["phi"],
                b_sites=b["sites"],
                b_complete=b["complete"],
                b_entries=b["entries"],
                report=doc.get("report", {}),
            )
        except (KeyError, TypeError) as exc:
            raise DocumentError(f"result document is missing {exc}") from None

    @classmethod
    def loads(cls, text: str) -> "ResultDocument":
        try:
            return cls.from_doc(json.loads(text))
        except json.JSONDecodeError as exc:
            raise DocumentError(f"invalid JSON: {exc}") from None

    # -- conversion to live tables --------------------------------------------------

    def tables(self, c: LocalCocycle):
        """phi table and transfer table over ``c``'s groups.

        An incomplete b-table keeps ``c`` so missing entries are computed on
        demand; stored entries are used exactly as written.
        """
        from .rigidity import TransferTable

        E, H, A = c.explorer, c.target, c.alphabet
        if self.group != c.group.spec or self.target != c.target.spec or self.window != c.L:
            raise DocumentError("result document does not match the rule file")
        if _alphabet_from(self.alphabet) != A:
            raise DocumentError("result document alphabet does not match the rule file")
        phi = {E.parse_word(w): _h_label(H, v) for w, v in self.phi.items()}
        sites = tuple(E.ball(3 * c.L))
        if [E.word_label(s) for s in sites] != list(self.b_sites):
            raise DocumentError("b-table sites are not the canonical B(3L) order")
        entries = {}
        for key, v in self.b_entries.items():
            values = A.decode(key)
            if len(values) != len(sites):
                raise DocumentError(f"b-table pattern {key!r} has the wrong length")
            entries[values] = _h_label(H, v)
        return phi, TransferTable(c, sites, entries, complete=self.b_complete)


def result_document(c: LocalCocycle, result) -> ResultDocument:
    E, H, A = c.explorer, c.target, c.alphabet
    phi = {E.word_label(g): H.label(v) for g, v in sorted(result.phi_table.items(), key=lambda kv: E.order_key(kv[0]))}
    table = result.b_table
    entries = {A.encode(k): H.label(table.entries[k]) for k in sorted(table.entries)}
    return ResultDocument(
        group=c.group.spec,
        target=c.target.spec,
        alphabet=_alphabet_doc(A),
        window=c.L,
        N={str(r): n for r, n in sorted(result.N_values.items())},
        phi=phi,
        b_sites=[E.word_label(s) for s in table.sites],
        b_complete=table.complete,
        b_entries=entries,
        report=report_doc(c, result),
    )


def save_result(c: LocalCocycle, result, path) -> None:
    Path(path).write_text(result_document(c, result).dumps(), encoding="utf-8")


def load_result(path) -> ResultDocument:
    return ResultDocument.loads(Path(path).read_text(encoding="utf-8"))
