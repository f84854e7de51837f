"""The two bounds, computed step by step for the modified Woo-Lam.

On a receive we ask: which identities are *confirmed* around the atom?
That is the upper bound: evaluate the atom in the derived message (all
unverified variables removed). On a send we ask: which identities *could*
anyone have smuggled into this shape through a variable? That is the
lower bound: unify the sent message with every generated encryption
pattern, instantiate, evaluate, and take the meet.

A protocol is accepted when, for every atom of every send, the lower
bound dominates the declared level met with the received upper bound:
nothing gets less secret by traveling through the protocol.
"""

import pathlib

from wfcheck import (
    SymKey,
    Variable,
    analyze_narration,
    candidate_sources,
    f_prime,
    format_message,
    load_context,
    load_narration,
    lower_bound,
)
from wfcheck.safefun import Variant

corpus = pathlib.Path(__file__).resolve().parent.parent / "corpus"
ctx = load_context(corpus / "woolam_modified.ctx")
narr = load_narration(corpus / "woolam_modified.proto", ctx)
roles, patterns = analyze_narration(narr, ctx)

MAX = Variant.MAX
kab_i = SymKey("kab", session="i")
initiator = roles[1]   # the initiator's full role
server = roles[5]      # the server's role

print("== the initiator's session key ==")
received = initiator.steps[1].payload
sent = initiator.steps[2].payload
print(f"received {format_message(received)}  ->  F'({format_message(kab_i)}) =",
      f_prime(MAX, kab_i, received, ctx))
print(f"sent     {format_message(sent)}")
for src in candidate_sources(sent, patterns):
    print("   candidate source:", src.describe())
print("   lower bound =", lower_bound(MAX, kab_i, sent, patterns, ctx))
print("   declared    =", ctx.level_of(kab_i))
print()

print("== the server's unknowns ==")
recv, send = server.steps[0].payload, server.steps[1].payload
for var in (Variable("U"), Variable("V")):
    name = format_message(var)
    print(f"target {name}:")
    print("   upper bound on", format_message(recv), "=", f_prime(MAX, var, recv, ctx))
    print("   sources of", format_message(send), "carrying it:")
    for src in candidate_sources(send, patterns):
        image = src.mgu.get(var, var)
        carried = isinstance(image, Variable)
        marker = "  " if carried else "  (pinned, skipped)"
        print("     ", src.describe(), marker)
    print("   lower bound =", lower_bound(MAX, var, send, patterns, ctx))
