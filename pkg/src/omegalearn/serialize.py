"""Text format for acceptors, tree automata and counterexample words.

Word acceptors::

    kind: dfw|nfw|dbw|nbw
    alphabet: a b c
    states: 3
    initial: 0
    accepting: 0 2
    transition: 0 a 1

Tree automata::

    kind: tree
    directions: 2
    states: 2
    initial: 0
    edge: 0 1 a 1

Comment lines start with '#'.  Keys must appear in the order above;
anything else is a parse error that names the offending line.
Counterexamples serialize as ``ce: a b ; b a`` (prefix before ';').
"""

from __future__ import annotations

from typing import Union

from .automata import (
    Alphabet,
    BuchiAcceptor,
    FinAcceptor,
    ParseError,
    TreeAutomaton,
    UPWord,
)

Automaton = Union[FinAcceptor, BuchiAcceptor, TreeAutomaton]

_WORD_KINDS = {"dfw": False, "nfw": False, "dbw": True, "nbw": True}


def dump(obj: Automaton) -> str:
    if isinstance(obj, TreeAutomaton):
        return _dump_tree(obj)
    if isinstance(obj, FinAcceptor):
        kind = "dfw" if obj.deterministic else "nfw"
    elif isinstance(obj, BuchiAcceptor):
        kind = "dbw" if obj.deterministic else "nbw"
    else:
        raise TypeError(f"cannot serialize {type(obj).__name__}")
    lines = [
        f"kind: {kind}",
        f"alphabet: {' '.join(obj.alphabet.symbols)}",
        f"states: {obj.n_states}",
        f"initial: {obj.initial}",
        "accepting:" + "".join(f" {q}" for q in sorted(obj.accepting)),
    ]
    for src, sym, dst in obj.transitions:
        lines.append(f"transition: {src} {obj.alphabet.symbols[sym]} {dst}")
    return "\n".join(lines) + "\n"


def _dump_tree(tree: TreeAutomaton) -> str:
    lines = [
        "kind: tree",
        f"directions: {tree.arity}",
        f"states: {tree.n_states}",
        f"initial: {tree.initial}",
    ]
    for q in range(tree.n_states):
        for i in range(1, tree.arity + 1):
            sym = tree.alphabet.symbols[tree.edge_label(q, i)]
            lines.append(f"edge: {q} {i} {sym} {tree.child(q, i)}")
    return "\n".join(lines) + "\n"


class _Lines:
    def __init__(self, text: str):
        self.items = [
            (no, line.strip())
            for no, line in enumerate(text.splitlines(), start=1)
            if line.strip() and not line.strip().startswith("#")
        ]
        self.pos = 0

    def peek_key(self) -> str:
        if self.pos >= len(self.items):
            return ""
        line = self.items[self.pos][1]
        return line.split(":", 1)[0].strip() if ":" in line else ""

    def take(self, key: str) -> tuple[int, str]:
        if self.pos >= len(self.items):
            raise ParseError(f"line {self.last_line_no() + 1}: expected '{key}:'")
        no, line = self.items[self.pos]
        if ":" not in line:
            raise ParseError(f"line {no}: expected '{key}:' but found {line!r}")
        found, rest = line.split(":", 1)
        if found.strip() != key:
            raise ParseError(f"line {no}: expected '{key}:' but found '{found.strip()}:'")
        self.pos += 1
        return no, rest.strip()

    def last_line_no(self) -> int:
        if not self.items:
            return 0
        return self.items[min(self.pos, len(self.items) - 1)][0]

    def done(self) -> bool:
        return self.pos >= len(self.items)


def _int_field(no: int, text: str, what: str) -> int:
    try:
        return int(text)
    except ValueError:
        raise ParseError(f"line {no}: {what} must be an integer, got {text!r}") from None


def load(text: str) -> Automaton:
    lines = _Lines(text)
    no, kind = lines.take("kind")
    if kind == "tree":
        return _load_tree(lines)
    if kind not in _WORD_KINDS:
        raise ParseError(f"line {no}: unknown kind {kind!r}")
    return _load_word(lines, kind)


def _load_word(lines: _Lines, kind: str) -> Union[FinAcceptor, BuchiAcceptor]:
    no, tokens = lines.take("alphabet")
    try:
        alphabet = Alphabet(tuple(tokens.split()))
    except ValueError as exc:
        raise ParseError(f"line {no}: {exc}") from None
    no, text = lines.take("states")
    n_states = _int_field(no, text, "states")
    no, text = lines.take("initial")
    initial = _int_field(no, text, "initial")
    no, text = lines.take("accepting")
    accepting = frozenset(_int_field(no, tok, "accepting state") for tok in text.split())
    transitions = []
    deterministic = kind in ("dfw", "dbw")
    seen: set[tuple[int, int]] = set()
    while not lines.done():
        key = lines.peek_key()
        if key != "transition":
            no = lines.items[lines.pos][0]
            raise ParseError(f"line {no}: unknown key {key!r}")
        no, rest = lines.take("transition")
        parts = rest.split()
        if len(parts) != 3:
            raise ParseError(f"line {no}: transition needs 'src symbol dst'")
        src = _int_field(no, parts[0], "transition source")
        dst = _int_field(no, parts[2], "transition target")
        try:
            sym = alphabet.index(parts[1])
        except ValueError as exc:
            raise ParseError(f"line {no}: {exc}") from None
        if deterministic:
            if (src, sym) in seen:
                raise ParseError(
                    f"line {no}: duplicate transition from state {src} on "
                    f"{parts[1]!r} in a deterministic acceptor"
                )
            seen.add((src, sym))
        transitions.append((src, sym, dst))
    cls = BuchiAcceptor if kind in ("dbw", "nbw") else FinAcceptor
    try:
        return cls(alphabet, n_states, initial, accepting, tuple(transitions))
    except ValueError as exc:
        raise ParseError(f"line {lines.last_line_no()}: {exc}") from None


def _load_tree(lines: _Lines) -> TreeAutomaton:
    no, text = lines.take("directions")
    arity = _int_field(no, text, "directions")
    no, text = lines.take("states")
    n_states = _int_field(no, text, "states")
    no, text = lines.take("initial")
    initial = _int_field(no, text, "initial")
    tokens: list[str] = []
    edges: dict[tuple[int, int], tuple[str, int]] = {}
    while not lines.done():
        key = lines.peek_key()
        if key != "edge":
            no = lines.items[lines.pos][0]
            raise ParseError(f"line {no}: unknown key {key!r}")
        no, rest = lines.take("edge")
        parts = rest.split()
        if len(parts) != 4:
            raise ParseError(f"line {no}: edge needs 'src dir symbol dst'")
        src = _int_field(no, parts[0], "edge source")
        direction = _int_field(no, parts[1], "edge direction")
        dst = _int_field(no, parts[3], "edge target")
        if not 1 <= direction <= arity:
            raise ParseError(f"line {no}: direction {direction} outside 1..{arity}")
        if (src, direction) in edges:
            raise ParseError(f"line {no}: duplicate edge for state {src} direction {direction}")
        if parts[2] not in tokens:
            tokens.append(parts[2])
        edges[(src, direction)] = (parts[2], dst)
    try:
        alphabet = Alphabet(tuple(tokens))
    except ValueError as exc:
        raise ParseError(f"line {lines.last_line_no()}: {exc}") from None
    next_rows = []
    label_rows = []
    for q in range(n_states):
        next_row = []
        label_row = []
        for i in range(1, arity + 1):
            if (q, i) not in edges:
                raise ParseError(
                    f"line {lines.last_line_no()}: missing edge for state {q} direction {i}"
                )
            tok, dst = edges[(q, i)]
            next_row.append(dst)
            label_row.append(alphabet.index(tok))
        next_rows.append(tuple(next_row))
        label_rows.append(tuple(label_row))
    try:
        return TreeAutomaton(alphabet, arity, n_states, initial, tuple(next_rows), tuple(label_rows))
    except ValueError as exc:
        raise ParseError(f"line {lines.last_line_no()}: {exc}") from None


def format_counterexample(w: UPWord, alphabet: Alphabet) -> str:
    return f"ce: {w.format(alphabet)}"


def parse_counterexample(text: str, alphabet: Alphabet) -> UPWord:
    """Parse 'ce: u ; v' (the 'ce:' key is optional); u may be empty."""
    body = text.strip()
    if body.startswith("ce:"):
        body = body[len("ce:"):]
    if ";" not in body:
        raise ParseError("counterexample needs a ';' between prefix and period")
    u_text, v_text = body.split(";", 1)
    try:
        return UPWord(alphabet.word(u_text), alphabet.word(v_text))
    except ValueError as exc:
        raise ParseError(str(exc)) from None
