"""The bounded intruder closure.

The network attacker unpairs and decrypts for free whenever it holds the
key, and may build new pairs and encryptions for a bounded number of
rounds. The static analysis never uses this oracle; it exists to sanity
check that the evaluation function cannot be driven down by intruder
computation (unless the intruder legitimately holds an enabling key).
"""

from wfcheck import Enc, Identity, Nonce, SymKey, concat, derives, format_message, parse_context, saturate

ctx = parse_context(
    "principals A, B, S, I\n"
    "key kas shared(A,S)\n"
    "key kbs shared(B,S)\n"
    "nonce Nb fresh(B) level public\n"
)

A = Identity("A")
nb = Nonce("Nb", owner="B")
kas, kbs = SymKey("kas"), SymKey("kbs")

print("holding the ciphertext and the key releases the body:")
print("  ", derives([Enc(nb, kbs), kbs], nb, 1, ctx))

print("without the key, perfect encryption holds at any depth:")
print("  ", derives([Enc(nb, kbs)], nb, 3, ctx))

print("unpairing is free:")
print("  ", derives([concat([A, nb])], nb, 0, ctx))

closure = saturate([A, kas], 1, ctx)
print(f"one construction round over [A, kas] yields {len(closure)} terms, e.g.:")
for m in sorted(map(format_message, closure))[:6]:
    print("  ", m)
