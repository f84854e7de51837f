"""From a narration to generalized roles and encryption patterns.

Role extraction projects the protocol onto each participant, routes the
messages through the intruder-controlled network, and replaces whatever a
participant cannot verify in a received message by a variable. The
encryption-rooted payloads of all roles, renamed apart, form the pattern
set that the lower bound later searches for candidate sources.
"""

import pathlib

from wfcheck import (
    encryption_patterns,
    extract_roles,
    format_message,
    generated_messages,
    load_context,
    load_narration,
)

corpus = pathlib.Path(__file__).resolve().parent.parent / "corpus"
ctx = load_context(corpus / "woolam_modified.ctx")
narr = load_narration(corpus / "woolam_modified.proto", ctx)

print(f"narration {narr.name}:")
for step in narr.steps:
    print("  ", step)
print()

roles = extract_roles(narr, ctx)
print("generalized roles (one per send, plus the full view of the last receiver):")
for role in roles:
    print(f"  {role.label}:")
    for line in role.describe():
        print("    ", line)
print()

msgs = generated_messages(roles)
print("generated messages (renamed apart, duplicates kept):")
for m in msgs:
    print("  ", format_message(m))
print()

patterns = encryption_patterns(msgs)
print("encryption patterns (deduplicated candidate-source universe):")
for i, p in enumerate(patterns, 1):
    print(f"   P{i}: {format_message(p)}")
