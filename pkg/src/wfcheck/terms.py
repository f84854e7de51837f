"""Message terms: atoms, variables, concatenation and symmetric encryption.

Terms are immutable trees. Concatenation is n-ary and kept flattened, so
associativity never has to be handled equationally. Unification is
first-order and purely syntactic (perfect encryption): renamed copies of
role atoms act as kind-restricted parameters that may match any concrete
atom of the same kind, while ordinary variables match arbitrary terms.

The printer and parser round-trip bit-exactly. Display syntax: atoms as
identifiers (optionally ``name_copy^session``), variables with a leading
``?``, concatenation with ``.``, encryption as ``{body}key`` and the
empty message as the single character ``ε``.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, replace
from typing import Callable, Iterable, Mapping, Optional, Union


class Message:
    """Base class for every term node."""

    __slots__ = ()


class Atom(Message):
    """Base class for atomic names (identities, nonces, keys)."""

    __slots__ = ()


@dataclass(frozen=True)
class Identity(Atom):
    name: str
    copy: Optional[int] = None

    def __str__(self):
        return format_message(self)


@dataclass(frozen=True)
class Nonce(Atom):
    name: str
    owner: str
    session: Optional[str] = None
    copy: Optional[int] = None

    def __str__(self):
        return format_message(self)


@dataclass(frozen=True)
class SymKey(Atom):
    name: str
    session: Optional[str] = None
    copy: Optional[int] = None

    def __str__(self):
        return format_message(self)


@dataclass(frozen=True)
class Variable(Message):
    """An unknown component of a received message."""

    name: str
    copy: Optional[int] = None

    def __str__(self):
        return format_message(self)


@dataclass(frozen=True)
class Concat(Message):
    """Flattened, order-preserving concatenation of two or more parts."""

    parts: tuple[Message, ...]

    def __post_init__(self):
        if len(self.parts) < 2:
            raise ValueError("concatenation needs at least two parts")
        if any(isinstance(p, Concat) for p in self.parts):
            raise ValueError("concatenation must be flattened")

    def __str__(self):
        return format_message(self)


@dataclass(frozen=True)
class Enc(Message):
    """Encryption of a body under an atomic symmetric key."""

    body: Message
    key: Message

    def __str__(self):
        return format_message(self)


class _Empty(Message):
    __slots__ = ()

    def __repr__(self):
        return "EMPTY"

    def __str__(self):
        return "ε"


#: The vanished message produced by deriving away every component.
EMPTY = _Empty()

Target = Union[Atom, Variable]


def concat(parts: Iterable[Message]) -> Message:
    """Build a flattened concatenation, absorbing empty components."""
    flat: list[Message] = []
    for p in parts:
        if p is EMPTY:
            continue
        if isinstance(p, Concat):
            flat.extend(p.parts)
        else:
            flat.append(p)
    if not flat:
        return EMPTY
    if len(flat) == 1:
        return flat[0]
    return Concat(tuple(flat))


def enc(body: Message, key: Message) -> Enc:
    return Enc(body, key)


def atoms_of(m: Message) -> frozenset[Atom]:
    """All atoms occurring anywhere in ``m``, including key positions."""
    out: set[Atom] = set()

    def walk(t: Message):
        if isinstance(t, Atom):
            out.add(t)
        elif isinstance(t, Concat):
            for p in t.parts:
                walk(p)
        elif isinstance(t, Enc):
            walk(t.body)
            walk(t.key)

    walk(m)
    return frozenset(out)


def vars_of(m: Message) -> frozenset[Variable]:
    """All variables occurring in ``m``."""
    out: set[Variable] = set()

    def walk(t: Message):
        if isinstance(t, Variable):
            out.add(t)
        elif isinstance(t, Concat):
            for p in t.parts:
                walk(p)
        elif isinstance(t, Enc):
            walk(t.body)
            walk(t.key)

    walk(m)
    return frozenset(out)


def ordered_atoms(m: Message) -> tuple[Atom, ...]:
    """Atoms in first-occurrence order (used for deterministic reports)."""
    seen: list[Atom] = []

    def walk(t: Message):
        if isinstance(t, Atom):
            if t not in seen:
                seen.append(t)
        elif isinstance(t, Concat):
            for p in t.parts:
                walk(p)
        elif isinstance(t, Enc):
            walk(t.body)
            walk(t.key)

    walk(m)
    return tuple(seen)


def ordered_vars(m: Message) -> tuple[Variable, ...]:
    seen: list[Variable] = []

    def walk(t: Message):
        if isinstance(t, Variable):
            if t not in seen:
                seen.append(t)
        elif isinstance(t, Concat):
            for p in t.parts:
                walk(p)
        elif isinstance(t, Enc):
            walk(t.body)
            walk(t.key)

    walk(m)
    return tuple(seen)


def is_param(a: Message) -> bool:
    """Renamed copies of role atoms behave as kind-restricted parameters."""
    return isinstance(a, Atom) and a.copy is not None


def erase_copies(m: Message) -> Message:
    """Drop every rename index, recovering the source shape of a pattern."""
    if isinstance(m, (Atom, Variable)):
        return replace(m, copy=None) if m.copy is not None else m
    if isinstance(m, Concat):
        return concat(erase_copies(p) for p in m.parts)
    if isinstance(m, Enc):
        return Enc(erase_copies(m.body), erase_copies(m.key))
    return m


def strip_sessions(m: Message) -> Message:
    """Drop session tags (used to compare role payloads against narrations)."""
    if isinstance(m, (Nonce, SymKey)):
        return replace(m, session=None) if m.session is not None else m
    if isinstance(m, Concat):
        return concat(strip_sessions(p) for p in m.parts)
    if isinstance(m, Enc):
        return Enc(strip_sessions(m.body), strip_sessions(m.key))
    return m


def rename_apart(m: Message, tag: int) -> Message:
    """Stamp every atom and variable with the rename index ``tag``.

    Callers are responsible for issuing distinct tags; terms renamed with
    different tags share no variables or parameters.
    """
    if isinstance(m, (Atom, Variable)):
        return replace(m, copy=tag)
    if isinstance(m, Concat):
        return concat(rename_apart(p, tag) for p in m.parts)
    if isinstance(m, Enc):
        return Enc(rename_apart(m.body, tag), rename_apart(m.key, tag))
    return m


def canonical_form(m: Message) -> str:
    """A display form invariant under renaming of variables and parameters.

    Rename indices are erased and variables are numbered by first
    occurrence, so two patterns are duplicates exactly when their
    canonical forms coincide.
    """
    mapping: dict[Variable, Variable] = {}

    def walk(t: Message) -> Message:
        if isinstance(t, Variable):
            if t not in mapping:
                mapping[t] = Variable("V", len(mapping))
            return mapping[t]
        if isinstance(t, Atom):
            return replace(t, copy=None) if t.copy is not None else t
        if isinstance(t, Concat):
            return concat(walk(p) for p in t.parts)
        if isinstance(t, Enc):
            return Enc(walk(t.body), walk(t.key))
        return t

    return format_message(walk(m))


# ---------------------------------------------------------------------------
# Substitutions

Substitution = Mapping[Union[Variable, Atom], Message]


def apply(sigma: Substitution, m: Message) -> Message:
    """Homomorphic replacement of variables and parameters; flattening kept."""
    if not sigma:
        return m
    if isinstance(m, (Variable, Atom)):
        return sigma.get(m, m)
    if isinstance(m, Concat):
        return concat(apply(sigma, p) for p in m.parts)
    if isinstance(m, Enc):
        return Enc(apply(sigma, m.body), apply(sigma, m.key))
    return m


def _kind_matches(param: Atom, other: Atom) -> bool:
    return type(param) is type(other)


def unify(left: Message, right: Message) -> Optional[dict]:
    """Most general syntactic unifier of two terms, or None.

    Variables bind to arbitrary terms (with occurs check); parameters bind
    to atoms of the same kind only. When both sides are variables or both
    are parameters, the left one is bound, so unifying a renamed pattern
    against a sent role message orients bindings pattern-to-message.
    """
    sol: dict = {}
    stack: list[tuple[Message, Message]] = [(left, right)]

    def bind(key, value) -> None:
        one = {key: value}
        for k in list(sol):
            sol[k] = apply(one, sol[k])
        sol[key] = value

    while stack:
        s, t = stack.pop()
        s = apply(sol, s)
        t = apply(sol, t)
        if s == t:
            continue
        if isinstance(s, Variable) or isinstance(t, Variable):
            var, term = (s, t) if isinstance(s, Variable) else (t, s)
            if var in vars_of(term):
                return None
            bind(var, term)
        elif isinstance(s, Atom) and isinstance(t, Atom):
            if is_param(s) and _kind_matches(s, t):
                bind(s, t)
            elif is_param(t) and _kind_matches(t, s):
                bind(t, s)
            else:
                return None
        elif isinstance(s, Concat) and isinstance(t, Concat):
            if len(s.parts) != len(t.parts):
                return None
            stack.extend(zip(s.parts, t.parts))
        elif isinstance(s, Enc) and isinstance(t, Enc):
            stack.append((s.key, t.key))
            stack.append((s.body, t.body))
        else:
            return None
    return sol


# ---------------------------------------------------------------------------
# Printer

_NAME_RE = re.compile(r"^[A-Za-z][A-Za-z0-9]*$")


def _format_atomish(name: str, copy: Optional[int], session: Optional[str]) -> str:
    out = name
    if copy is not None:
        out += f"_{copy}"
    if session is not None:
        out += f"^{session}"
    return out


def format_message(m: Message) -> str:
    if m is EMPTY:
        return "ε"
    if isinstance(m, Identity):
        return _format_atomish(m.name, m.copy, None)
    if isinstance(m, (Nonce, SymKey)):
        return _format_atomish(m.name, m.copy, m.session)
    if isinstance(m, Variable):
        return "?" + _format_atomish(m.name, m.copy, None)
    if isinstance(m, Concat):
        return ".".join(format_message(p) for p in m.parts)
    if isinstance(m, Enc):
        return "{" + format_message(m.body) + "}" + format_message(m.key)
    raise TypeError(f"not a message: {m!r}")


def format_substitution(sigma: Substitution) -> str:
    items = sorted((format_message(k), format_message(v)) for k, v in sigma.items())
    return "{" + ", ".join(f"{k} -> {v}" for k, v in items) + "}"


# ---------------------------------------------------------------------------
# Tokenizer and parser (shared with the narration DSL)

_TOKEN_RE = re.compile(
    r"(?P<ws>\s+)"
    r"|(?P<comment>#[^\n]*)"
    r"|(?P<arrow>->)"
    r"|(?P<num>\d+)"
    r"|(?P<name>[A-Za-z][A-Za-z0-9_^]*)"
    r"|(?P<eps>ε)"
    r"|(?P<punct>[{}.:?])"
)


@dataclass(frozen=True)
class Token:
    kind: str
    text: str
    line: int
    column: int


def tokenize(text: str) -> list[Token]:
    from .errors import ParseError

    tokens: list[Token] = []
    line, col = 1, 1
    pos = 0
    while pos < len(text):
        match = _TOKEN_RE.match(text, pos)
        if match is None:
            raise ParseError(f"unexpected character {text[pos]!r}", line, col)
        kind = match.lastgroup
        chunk = match.group()
        if kind not in ("ws", "comment"):
            tok_kind = chunk if kind == "punct" else kind
            tokens.append(Token(tok_kind, chunk, line, col))
        newlines = chunk.count("\n")
        if newlines:
            line += newlines
            col = len(chunk) - chunk.rfind("\n")
        else:
            col += len(chunk)
        pos = match.end()
    return tokens


class TokenStream:
    def __init__(self, tokens: list[Token], text_end_line: int = 1):
        self.tokens = tokens
        self.pos = 0
        self.end_line = tokens[-1].line if tokens else text_end_line

    def peek(self) -> Optional[Token]:
        return self.tokens[self.pos] if self.pos < len(self.tokens) else None

    def next(self) -> Token:
        from .errors import ParseError

        tok = self.peek()
        if tok is None:
            raise ParseError("unexpected end of input", self.end_line)
        self.pos += 1
        return tok

    def expect(self, kind: str) -> Token:
        from .errors import ParseError

        tok = self.next()
        if tok.kind != kind:
            raise ParseError(f"expected {kind!r}, found {tok.text!r}", tok.line, tok.column)
        return tok


def split_atom_name(text: str) -> tuple[str, Optional[int], Optional[str]]:
    """Split a printed identifier into (base, copy index, session tag)."""
    session = None
    if "^" in text:
        text, session = text.split("^", 1)
    copy = None
    if "_" in text:
        text, idx = text.rsplit("_", 1)
        copy = int(idx)
    return text, copy, session


AtomResolver = Callable[[str, Token], Atom]


def parse_message_tokens(stream: TokenStream, resolve: AtomResolver) -> Message:
    """Parse ``term ('.' term)*`` where term is an atom, variable or {msg}key."""
    from .errors import ParseError

    def parse_term() -> Message:
        tok = stream.next()
        if tok.kind == "{":
            body = parse_message_tokens(stream, resolve)
            stream.expect("}")
            key_tok = stream.expect("name")
            return Enc(body, resolve(key_tok.text, key_tok))
        if tok.kind == "?":
            name_tok = stream.expect("name")
            base, copy, session = split_atom_name(name_tok.text)
            if session is not None:
                raise ParseError("variables carry no session tag", name_tok.line, name_tok.column)
            return Variable(base, copy)
        if tok.kind == "eps":
            return EMPTY
        if tok.kind == "name":
            return resolve(tok.text, tok)
        raise ParseError(f"expected a message term, found {tok.text!r}", tok.line, tok.column)

    parts = [parse_term()]
    while True:
        tok = stream.peek()
        if tok is not None and tok.kind == ".":
            stream.next()
            parts.append(parse_term())
        else:
            break
    return concat(parts)


def parse_message(text: str, resolve: AtomResolver) -> Message:
    """Parse a standalone message; ``resolve`` maps identifier text to atoms."""
    from .errors import ParseError

    stream = TokenStream(tokenize(text))
    msg = parse_message_tokens(stream, resolve)
    trailing = stream.peek()
    if trailing is not None:
        raise ParseError(f"trailing input {trailing.text!r}", trailing.line, trailing.column)
    return msg
