"""Parity obstruction on the blown-up square of a K3 surface.

Run with ``python3 demos/k3_parity.py``.
"""

from fractions import Fraction

from kahler_obstruct.config import LEHMER
from kahler_obstruct.galois import is_irreducible, poly_str
from kahler_obstruct.quadforms import admissible_signatures, gram_qc, parity_contradiction, signature
from kahler_obstruct.rewrite import evaluate, x4_model


def main():
    print("Lehmer polynomial:", poly_str(LEHMER, "x"), "irreducible:", is_irreducible(LEHMER))
    t = len(LEHMER) - 1
    model = x4_model(t)
    lam = evaluate(model, 2, ("t1", "t1")).coefficient(("t1", "t1"))
    print(f"\nc^2 t1 t1 = {lam}  (times <t1, t1>)")
    print("c^3 t1 =", evaluate(model, 3, ("t1",)))

    adm = admissible_signatures(t)
    print("\nthe Neron-Severi part is negative definite, so lambda <= 0 for every c")
    for label, c in (("lambda < 0", {"u": Fraction(1), "y3": Fraction(2)}), ("lambda = 0", {})):
        full = {n: Fraction(0) for n in model.coefficient_names()}
        full.update(c)
        sig = signature(gram_qc(model, full, model.alpha_basis))
        v = parity_contradiction(sig, adm)
        print(f"{label}: signature ({sig.p}, {sig.q}, r0={sig.r0}) -> {v.kind}")

if __name__ == "__main__":
    main()
