"""The verification context: principals, level assignment, key ownership.

Loaded from a line-oriented text file:

    principals A, B, S, I
    key kas shared(A,S)
    key kab fresh(A) level {A,B,S}
    nonce Nb fresh(B) level public
    challenge auth verifier=B claimant=A step=5 challenge=Nb
    intruder knows Na, kxy          # optional

``shared(X,Y)`` implies level {X,Y} and owners {X,Y}. ``fresh(P)`` marks a
value generated per session by P. ``level public`` means bottom. The
principal universe must contain the intruder identity ``I``. Identities
need no declaration beyond the principals line: they are always public.
"""

from __future__ import annotations

import hashlib
import re
from dataclasses import dataclass, field
from typing import Optional, Union

from .errors import NotAKey, ParseError, UnknownAtom
from .lattice import BOTTOM, Lattice, PrincipalId, SecurityLevel
from .terms import Atom, Identity, Nonce, SymKey, Variable


@dataclass(frozen=True)
class KeyDecl:
    name: str
    level: SecurityLevel
    owners: frozenset[str]
    fresh_by: Optional[str] = None


@dataclass(frozen=True)
class NonceDecl:
    name: str
    level: SecurityLevel
    fresh_by: Optional[str] = None


@dataclass(frozen=True)
class AuthChallenge:
    """Who authenticates whom, at which narration step, on which atom."""

    verifier: str
    claimant: str
    step: int
    challenge: str


INTRUDER_NAME = "I"


@dataclass(frozen=True)
class VerificationContext:
    principals: tuple[str, ...]
    keys: dict[str, KeyDecl]
    nonces: dict[str, NonceDecl]
    challenge: Optional[AuthChallenge] = None
    intruder_knows: tuple[str, ...] = ()
    digest: str = ""
    lattice: Lattice = field(init=False)

    def __post_init__(self):
        if INTRUDER_NAME not in self.principals:
            raise ParseError(f"the principal universe must include the intruder {INTRUDER_NAME!r}")
        object.__setattr__(self, "lattice", Lattice.over(*self.principals))

    # -- atom construction -------------------------------------------------

    def is_principal(self, name: str) -> bool:
        return name in self.principals

    def resolve_atom(self, name: str) -> Atom:
        """Map a declared base name to its atom; raises UnknownAtom otherwise."""
        if name in self.principals:
            return Identity(name)
        if name in self.keys:
            return SymKey(name)
        if name in self.nonces:
            return Nonce(name, owner=self.nonces[name].fresh_by or "")
        raise UnknownAtom(f"atom {name!r} is not declared in the context")

    def intruder_knowledge(self) -> tuple[Atom, ...]:
        identities = tuple(Identity(p) for p in self.principals)
        extra = tuple(self.resolve_atom(n) for n in self.intruder_knows)
        return identities + extra

    # -- level assignment ---------------------------------------------------

    def level_of(self, target: Union[Atom, Variable]) -> SecurityLevel:
        """Declared level; identities and variables are public by default.

        Session tags and rename indices are ignored: every copy of a
        declared atom matches its declaration.
        """
        if isinstance(target, Variable):
            return BOTTOM
        if isinstance(target, Identity):
            return BOTTOM
        if isinstance(target, SymKey):
            decl = self.keys.get(target.name)
            if decl is None:
                raise UnknownAtom(f"key {target.name!r} has no declared level")
            return decl.level
        if isinstance(target, Nonce):
            decl = self.nonces.get(target.name)
            if decl is None:
                raise UnknownAtom(f"nonce {target.name!r} has no declared level")
            return decl.level
        raise UnknownAtom(f"no level rule for {target!r}")

    def reverse_key(self, k: Atom) -> Atom:
        """The decryption key for ``k``; symmetric keys are self-inverse."""
        if not isinstance(k, SymKey):
            raise NotAKey(f"{k} is not a key atom")
        if k.name not in self.keys:
            raise UnknownAtom(f"key {k.name!r} is not declared")
        return k

    def knows_key(self, agent: Union[PrincipalId, str], k: Atom) -> bool:
        if not isinstance(k, SymKey):
            raise NotAKey(f"{k} is not a key atom")
        decl = self.keys.get(k.name)
        if decl is None:
            raise UnknownAtom(f"key {k.name!r} is not declared")
        name = agent.name if isinstance(agent, PrincipalId) else agent
        return name in decl.owners

    def fresh_owner(self, a: Atom) -> Optional[str]:
        """The generating principal for session-fresh atoms, else None."""
        if isinstance(a, SymKey):
            decl = self.keys.get(a.name)
            return decl.fresh_by if decl else None
        if isinstance(a, Nonce):
            decl = self.nonces.get(a.name)
            return decl.fresh_by if decl else None
        return None


# ---------------------------------------------------------------------------
# Context file parser

_LEVEL_RE = re.compile(r"^\{\s*([A-Za-z][A-Za-z0-9]*(?:\s*,\s*[A-Za-z][A-Za-z0-9]*)*)\s*\}$")
_NAME_LIST_RE = re.compile(r"[A-Za-z][A-Za-z0-9]*")
_KEY_RE = re.compile(
    r"^key\s+(?P<name>[A-Za-z][A-Za-z0-9]*)\s+"
    r"(?:shared\(\s*(?P<o1>[A-Za-z][A-Za-z0-9]*)\s*,\s*(?P<o2>[A-Za-z][A-Za-z0-9]*)\s*\)"
    r"|fresh\(\s*(?P<gen>[A-Za-z][A-Za-z0-9]*)\s*\)\s+level\s+(?P<level>public|\{[^}]*\}))$"
)
_NONCE_RE = re.compile(
    r"^nonce\s+(?P<name>[A-Za-z][A-Za-z0-9]*)"
    r"(?:\s+fresh\(\s*(?P<gen>[A-Za-z][A-Za-z0-9]*)\s*\))?"
    r"\s+level\s+(?P<level>public|\{[^}]*\})$"
)
_CHALLENGE_RE = re.compile(
    r"^challenge\s+auth\s+verifier=(?P<verifier>[A-Za-z][A-Za-z0-9]*)\s+"
    r"claimant=(?P<claimant>[A-Za-z][A-Za-z0-9]*)\s+step=(?P<step>\d+)\s+"
    r"challenge=(?P<challenge>[A-Za-z][A-Za-z0-9]*)$"
)


def _parse_level(text: str, principals: tuple[str, ...], lineno: int) -> SecurityLevel:
    if text == "public":
        return BOTTOM
    match = _LEVEL_RE.match(text)
    if match is None:
        raise ParseError(f"malformed level {text!r}", lineno)
    names = [n.strip() for n in match.group(1).split(",")]
    for n in names:
        if n not in principals:
            raise ParseError(f"level names undeclared principal {n!r}", lineno)
    return SecurityLevel.of(*names)


def parse_context(text: str) -> VerificationContext:
    principals: tuple[str, ...] = ()
    keys: dict[str, KeyDecl] = {}
    nonces: dict[str, NonceDecl] = {}
    challenge: Optional[AuthChallenge] = None
    intruder_knows: tuple[str, ...] = ()

    def check_principal(name: str, lineno: int) -> str:
        if name not in principals:
            raise ParseError(f"undeclared principal {name!r}", lineno)
        return name

    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if line.startswith("principals"):
            if principals:
                raise ParseError("duplicate principals line", lineno)
            names = _NAME_LIST_RE.findall(line[len("principals"):])
            if not names:
                raise ParseError("principals line declares nobody", lineno)
            if len(set(names)) != len(names):
                raise ParseError("duplicate principal name", lineno)
            principals = tuple(names)
            continue
        if not principals:
            raise ParseError("principals must be declared first", lineno)
        if line.startswith("key"):
            match = _KEY_RE.match(line)
            if match is None:
                raise ParseError(f"malformed key declaration: {line!r}", lineno)
            name = match.group("name")
            if name in keys or name in nonces or name in principals:
                raise ParseError(f"duplicate declaration of {name!r}", lineno)
            if match.group("o1"):
                o1 = check_principal(match.group("o1"), lineno)
                o2 = check_principal(match.group("o2"), lineno)
                keys[name] = KeyDecl(name, SecurityLevel.of(o1, o2), frozenset({o1, o2}))
            else:
                gen = check_principal(match.group("gen"), lineno)
                level = _parse_level(match.group("level"), principals, lineno)
                # a fresh key is possessed by the parties authorized to learn it
                owners = frozenset(principals) if level.is_bottom \
                    else frozenset(p.name for p in level.members())
                keys[name] = KeyDecl(name, level, owners, fresh_by=gen)
            continue
        if line.startswith("nonce"):
            match = _NONCE_RE.match(line)
            if match is None:
                raise ParseError(f"malformed nonce declaration: {line!r}", lineno)
            name = match.group("name")
            if name in keys or name in nonces or name in principals:
                raise ParseError(f"duplicate declaration of {name!r}", lineno)
            gen = match.group("gen")
            if gen is not None:
                gen = check_principal(gen, lineno)
            level = _parse_level(match.group("level"), principals, lineno)
            nonces[name] = NonceDecl(name, level, fresh_by=gen)
            continue
        if line.startswith("challenge"):
            match = _CHALLENGE_RE.match(line)
            if match is None:
                raise ParseError(f"malformed challenge declaration: {line!r}", lineno)
            if challenge is not None:
                raise ParseError("duplicate challenge declaration", lineno)
            challenge = AuthChallenge(
                verifier=check_principal(match.group("verifier"), lineno),
                claimant=check_principal(match.group("claimant"), lineno),
                step=int(match.group("step")),
                challenge=match.group("challenge"),
            )
            continue
        if line.startswith("intruder knows"):
            names = _NAME_LIST_RE.findall(line[len("intruder knows"):])
            intruder_knows = intruder_knows + tuple(names)
            continue
        raise ParseError(f"unrecognized declaration: {line!r}", lineno)

    if not principals:
        raise ParseError("context declares no principals")
    if challenge is not None and challenge.challenge not in nonces and challenge.challenge not in keys:
        raise ParseError(f"challenge atom {challenge.challenge!r} is not declared")
    for name in intruder_knows:
        if name not in keys and name not in nonces and name not in principals:
            raise ParseError(f"intruder knowledge names undeclared atom {name!r}")

    digest = hashlib.sha256(text.encode("utf-8")).hexdigest()
    return VerificationContext(
        principals=principals,
        keys=keys,
        nonces=nonces,
        challenge=challenge,
        intruder_knows=intruder_knows,
        digest=digest,
    )


def load_context(path) -> VerificationContext:
    with open(path, "r", encoding="utf-8") as fh:
        return parse_context(fh.read())
