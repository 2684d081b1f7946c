"""Walk through the signature argument on the blown-up Kummer square.

Run with ``python3 demos/kummer_obstruction.py``.
"""

from fractions import Fraction

from kahler_obstruct.exterior import ExteriorAlgebra
from kahler_obstruct.quadforms import admissible_signatures, gram_qc, parity_contradiction, signature
from kahler_obstruct.rewrite import evaluate, x2_model


def main():
    model = x2_model(2)
    value = evaluate(model, 2, ("A", "A"))
    print("C^2 * alpha^2 =", value)
    print("C^3 * alpha   =", evaluate(model, 3, ("A",)))

    c = {name: Fraction(0) for name in model.coefficient_names()}
    c.update({"a1": Fraction(5), "b1": Fraction(1, 2), "u": Fraction(1), "v": Fraction(-2)})
    form = gram_qc(model, c, model.alpha_basis)
    print("\nGram of q_c on the wedge part for a sample c:")
    for row in form.to_text():
        print("  ", row)
    wedge = ExteriorAlgebra(4).pairing_matrix(2)
    print("proportional to the wedge pairing with scalar", form.is_scalar_multiple_of(type(form)(wedge)))

    sig = signature(form)
    verdict = parity_contradiction(sig, admissible_signatures(6))
    print(f"\nsignature {sig.pair()}; admissible {admissible_signatures(6).sorted_pairs()}")
    print("verdict:", verdict.kind, "-", verdict.reason)


if __name__ == "__main__":
    main()
