"""Static protocol analyzer based on the two bounds of witness functions."""

from .context import AuthChallenge, VerificationContext, load_context, parse_context
from .deduction import derives, saturate
from .errors import (
    AnalysisError,
    AtomAbsent,
    ChallengeAtomAbsent,
    ChallengeNotReceived,
    DepthExceeded,
    NoSource,
    NotAKey,
    ParseError,
    UndeclaredAtom,
    UnknownAtom,
)
from .lattice import BOTTOM, TOP, Lattice, PrincipalId, SecurityLevel
from .protocol import (
    Direction,
    EncryptionPatternSet,
    GeneralizedRole,
    Narration,
    NarrationStep,
    RoleStep,
    encryption_patterns,
    extract_roles,
    generated_messages,
    load_narration,
    parse_narration,
)
from .report import AnalysisReport, analyze, render, render_json, render_text, report_from_json
from .safefun import (
    Selection,
    Variant,
    derive,
    derive_vars,
    eval_f,
    f_prime,
    protective_key,
    psi,
    select,
)
from .terms import (
    EMPTY,
    Atom,
    Concat,
    Enc,
    Identity,
    Message,
    Nonce,
    SymKey,
    Variable,
    apply,
    atoms_of,
    canonical_form,
    concat,
    enc,
    erase_copies,
    format_message,
    format_substitution,
    parse_message,
    rename_apart,
    strip_sessions,
    unify,
    vars_of,
)
from .witness import (
    AuthCheck,
    CandidateSource,
    StepCheck,
    analyze_narration,
    bound_ordering_check,
    candidate_sources,
    challenge_check,
    check_authentication,
    check_secrecy,
    check_step,
    lower_bound,
)

__version__ = "0.1.0"
