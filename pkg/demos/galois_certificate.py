"""Certify the Galois group and root facts used for the torus automorphism.

Run with ``python3 demos/galois_certificate.py``.
"""

import json

from kahler_obstruct.galois import (
    certify_symmetric_group,
    distinct_pair_products,
    pair_orbit_decision,
    no_real_roots,
    poly_str,
)


def main():
    for f, bound in (([1, -1, 0, 0, 1], 100), ([1, 0, 0, 0, 1], 10000)):
        cert = certify_symmetric_group(f, bound)
        print(poly_str(f, "x"), "->", cert.verdict)
        print(json.dumps(cert.to_dict(), indent=2))
    f = [1, -1, 0, 0, 1]
    print("\nno real roots:", no_real_roots(f))
    print("pairwise root products distinct:", distinct_pair_products(f, 50))
    rep = pair_orbit_decision(2, True)
    print("orbits on root pairs:", rep.to_dict())


if __name__ == "__main__":
    main()
