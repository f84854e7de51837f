"""Bound computations and the secrecy / authentication decisions.

For every send step the analyzer compares two statically computable
levels. The upper bound is the derivative evaluation of the target over
the messages received earlier in the role. The lower bound scans every
encryption pattern the protocol can generate, keeps the ones unifiable
with the sent message, instantiates each with its most general unifier and
takes the meet of the derivative evaluations: this is where an identity
smuggled in through a variable would surface.

A protocol is accepted for secrecy when, for every target of every send,
the lower bound dominates the meet of the declared level with the upper
bound on the receives. Failing the comparison yields *no decision*: the
criterion is sufficient, not necessary.

Authentication additionally requires the claimant's identity to be present
in the derivative evaluation of the challenge within the verifier's
received message, strictly above the public level.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Sequence

from .context import AuthChallenge, VerificationContext
from .errors import AtomAbsent, ChallengeAtomAbsent, ChallengeNotReceived, NoSource
from .lattice import PrincipalId, SecurityLevel
from .protocol import (
    Direction,
    EncryptionPatternSet,
    GeneralizedRole,
    Narration,
    encryption_patterns,
    extract_roles,
    generated_messages,
)
from .safefun import Variant, f_prime, occurs_anywhere
from .terms import (
    Enc,
    Message,
    Substitution,
    Target,
    Variable,
    apply,
    format_message,
    format_substitution,
    ordered_atoms,
    ordered_vars,
    unify,
)


@dataclass(frozen=True)
class CandidateSource:
    """A generated pattern unifiable with a sent message, with its unifier."""

    index: int
    pattern: Message
    mgu: Substitution

    def instantiated(self) -> Message:
        return apply(self.mgu, self.pattern)

    def describe(self) -> str:
        return f"{format_message(self.pattern)} via {format_substitution(self.mgu)}"


@dataclass(frozen=True)
class StepCheck:
    """One bound comparison for one target of one send step."""

    role: str
    step: str
    target: str
    target_is_variable: bool
    received_bound: SecurityLevel
    declared: SecurityLevel
    lower_bound: SecurityLevel
    sources: tuple[str, ...]
    from_patterns: bool
    passed: bool


@dataclass(frozen=True)
class AuthCheck:
    verifier: str
    claimant: str
    challenge: str
    step: int
    message: str
    level: SecurityLevel
    claimant_present: bool
    above_bottom: bool
    passed: bool


def candidate_sources(
    r_plus: Message, patterns: EncryptionPatternSet
) -> list[CandidateSource]:
    """Patterns unifiable with the sent message, in declaration order."""
    out: list[CandidateSource] = []
    for i, pattern in enumerate(patterns):
        sigma = unify(pattern, r_plus)
        if sigma is not None:
            out.append(CandidateSource(index=i, pattern=pattern, mgu=sigma))
    return out


def lower_bound(
    variant: Variant,
    target: Target,
    r_plus: Message,
    patterns: EncryptionPatternSet,
    ctx: VerificationContext,
) -> SecurityLevel:
    """Meet of the derivative evaluations over all candidate sources.

    Unencrypted sends have no pattern sources; the target is evaluated on
    the sent message directly. For a variable target, a source whose
    unifier pins the variable to a concrete term does not carry it as an
    unknown and is skipped; a source renaming it to another variable is
    evaluated on that variable.
    """
    if not occurs_anywhere(target, r_plus):
        raise AtomAbsent(
            f"{format_message(target)} does not occur in {format_message(r_plus)}"
        )
    if not isinstance(r_plus, Enc):
        return f_prime(variant, target, r_plus, ctx)
    sources = candidate_sources(r_plus, patterns)
    if not sources:
        raise NoSource(
            f"encrypted send {format_message(r_plus)} unifies with no generated pattern"
        )
    levels: list[SecurityLevel] = []
    for source in sources:
        eval_target = target
        if isinstance(target, Variable) and target in source.mgu:
            image = source.mgu[target]
            if not isinstance(image, Variable):
                continue
            eval_target = image
        levels.append(f_prime(variant, eval_target, source.instantiated(), ctx))
    return ctx.lattice.meet_all(levels)


def sources_for_target(
    target: Target, r_plus: Message, patterns: EncryptionPatternSet
) -> list[CandidateSource]:
    """The candidate sources that actually carry the target (report detail)."""
    if not isinstance(r_plus, Enc):
        return []
    kept = []
    for source in candidate_sources(r_plus, patterns):
        if isinstance(target, Variable) and target in source.mgu \
                and not isinstance(source.mgu[target], Variable):
            continue
        kept.append(source)
    return kept


def check_step(
    role: GeneralizedRole,
    position: int,
    ctx: VerificationContext,
    variant: Variant,
    patterns: EncryptionPatternSet,
) -> list[StepCheck]:
    """Bound comparisons for every atom and every variable of a send payload."""
    step = role.steps[position]
    if step.direction is not Direction.SEND:
        raise ValueError(f"step {step.step_id} of {role.label} is not a send")
    received = role.received_before(position)
    r_plus = step.payload
    checks: list[StepCheck] = []
    targets: list[Target] = list(ordered_atoms(r_plus)) + list(ordered_vars(r_plus))
    for target in targets:
        received_bound = ctx.lattice.meet_all(
            f_prime(variant, target, m, ctx) for m in received
        )
        declared = ctx.lattice.canon(ctx.level_of(target))
        lower = lower_bound(variant, target, r_plus, patterns, ctx)
        required = ctx.lattice.meet(declared, received_bound)
        checks.append(
            StepCheck(
                role=role.label,
                step=step.step_id,
                target=format_message(target),
                target_is_variable=isinstance(target, Variable),
                received_bound=received_bound,
                declared=declared,
                lower_bound=lower,
                sources=tuple(
                    s.describe() for s in sources_for_target(target, r_plus, patterns)
                ),
                from_patterns=isinstance(r_plus, Enc),
                passed=ctx.lattice.leq(required, lower),
            )
        )
    return checks


def check_secrecy(
    roles: Sequence[GeneralizedRole],
    patterns: EncryptionPatternSet,
    ctx: VerificationContext,
    variant: Variant,
) -> tuple[bool, list[StepCheck]]:
    """Every send step of every role must respect the bound ordering.

    Each send is checked once, as the final step of its prefix role, with
    the receives accumulated before it.
    """
    checks: list[StepCheck] = []
    for role in roles:
        if role.steps and role.final.direction is Direction.SEND:
            checks.extend(check_step(role, len(role.steps) - 1, ctx, variant, patterns))
    return all(c.passed for c in checks), checks


def challenge_check(
    roles: Sequence[GeneralizedRole],
    ctx: VerificationContext,
    variant: Variant,
    challenge: AuthChallenge,
) -> AuthCheck:
    """The witness clause: the claimant must appear in the challenge's level."""
    verifier_roles = [r for r in roles if r.owner == PrincipalId(challenge.verifier)]
    if not verifier_roles:
        raise ChallengeNotReceived(
            f"verifier {challenge.verifier} plays no role in the protocol"
        )
    full = max(verifier_roles, key=lambda r: len(r.steps))
    step = next(
        (s for s in full.steps if s.narration_index == challenge.step), None
    )
    if step is None or step.direction is not Direction.RECEIVE:
        raise ChallengeNotReceived(
            f"step {challenge.step} is not a receive of verifier {challenge.verifier}"
        )
    target = next(
        (a for a in ordered_atoms(step.payload) if a.name == challenge.challenge),
        None,
    )
    if target is None:
        raise ChallengeAtomAbsent(
            f"challenge atom {challenge.challenge!r} does not occur in "
            f"{format_message(step.payload)}"
        )
    level = f_prime(variant, target, step.payload, ctx)
    claimant = PrincipalId(challenge.claimant)
    present = claimant in ctx.lattice.canon(level)
    above = ctx.lattice.above_bottom(level)
    return AuthCheck(
        verifier=challenge.verifier,
        claimant=challenge.claimant,
        challenge=format_message(target),
        step=challenge.step,
        message=format_message(step.payload),
        level=ctx.lattice.canon(level),
        claimant_present=present,
        above_bottom=above,
        passed=present and above,
    )


def check_authentication(
    roles: Sequence[GeneralizedRole],
    patterns: EncryptionPatternSet,
    ctx: VerificationContext,
    variant: Variant,
    challenge: Optional[AuthChallenge] = None,
) -> tuple[bool, AuthCheck, bool, list[StepCheck]]:
    """Secrecy first, then the witness clause; correct only if both hold.

    Returns (overall, auth check, secrecy verdict, step checks).
    """
    challenge = challenge or ctx.challenge
    if challenge is None:
        raise ChallengeNotReceived("no authentication challenge is declared")
    secrecy_ok, checks = check_secrecy(roles, patterns, ctx, variant)
    auth = challenge_check(roles, ctx, variant, challenge)
    return secrecy_ok and auth.passed, auth, secrecy_ok, checks


def bound_ordering_check(
    variant: Variant,
    target: Target,
    r_plus: Message,
    patterns: EncryptionPatternSet,
    ctx: VerificationContext,
) -> bool:
    """The upper bound dominates the lower bound on every sent message."""
    lower = lower_bound(variant, target, r_plus, patterns, ctx)
    upper = f_prime(variant, target, r_plus, ctx)
    return ctx.lattice.leq(lower, upper)


def analyze_narration(narration: Narration, ctx: VerificationContext):
    """Convenience: the roles and the pattern set of a parsed narration."""
    roles = extract_roles(narration, ctx)
    patterns = encryption_patterns(generated_messages(roles))
    return roles, patterns
