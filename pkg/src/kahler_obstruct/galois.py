"""Certificates for the Galois-theoretic hypotheses on a characteristic polynomial.

Polynomials are integer coefficient lists, constant term first.

* :func:`certify_symmetric_group` collects Dedekind cycle types at good
  primes and applies the classical criterion: a transitive subgroup of
  ``S_N`` containing a transposition and an ``(N-1)``-cycle is ``S_N``.
* :func:`no_real_roots` decides real-rootedness exactly with Sturm chains.
* :func:`distinct_pair_products` separates the pairwise root products with
  certified inclusion disks around high-precision root approximations.
* :func:`pair_orbit_decision` is the combinatorial half of the
  "no Hodge class in wedge^2" argument: the Galois group acts on the
  eigenvalue products of ``wedge^2 psi``, any rational sub-Hodge structure
  corresponds to a Galois-stable subset of them (the Galois group of the
  splitting field of a factor is a quotient of that of ``f``, so stability
  under ``Gal(f)`` is the right notion), and a single orbit leaves no
  proper stable subset.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import comb, lcm
from typing import Sequence

import mpmath
import sympy

from ._exact import sqrt_upper
from .exterior import char_poly, companion_matrix, wedge_power_map

__all__ = [
    "InputError",
    "RamifiedPrimeError",
    "UndecidedError",
    "CycleTypeObservation",
    "GroupCertificate",
    "ProductOrbitReport",
    "dedekind_cycle_type",
    "certify_symmetric_group",
    "is_squarefree",
    "is_irreducible",
    "no_real_roots",
    "real_root_count",
    "distinct_pair_products",
    "pair_orbit_decision",
    "poly_str",
]


class InputError(ValueError):
    pass


class RamifiedPrimeError(ValueError):
    """The reduction mod p is not squarefree (or p divides the leading coefficient)."""


class UndecidedError(RuntimeError):
    """Interval separation failed up to the precision cap without a proven collision."""


def _trim(f: Sequence[int]) -> list:
    f = list(f)
    while f and f[-1] == 0:
        f.pop()
    return f


def _check_poly(f) -> list[int]:
    try:
        coeffs = [int(c) for c in f]
    except (TypeError, ValueError) as exc:
        raise InputError(f"polynomial coefficients must be integers: {f!r}") from exc
    coeffs = _trim(coeffs)
    if not coeffs:
        raise InputError("zero polynomial")
    return coeffs


def poly_str(f: Sequence[int], var: str = "x") -> str:
    parts = []
    for k in range(len(f) - 1, -1, -1):
        c = f[k]
        if not c:
            continue
        mono = "" if k == 0 else (var if k == 1 else f"{var}^{k}")
        if mono and abs(c) == 1:
            term = mono
        elif mono:
            term = f"{abs(c)}*{mono}"
        else:
            term = str(abs(c))
        parts.append(("- " if c < 0 else "+ ") + term)
    text = " ".join(parts) or "0"
    return text[2:] if text.startswith("+ ") else "-" + text[2:]


# --------------------------------------------------------------------------
# polynomials over F_p (constant first, trimmed)


def _pmod(f, p):
    return _trim([c % p for c in f])


def _psub(a, b, p):
    n = max(len(a), len(b))
    return _trim([((a[i] if i < len(a) else 0) - (b[i] if i < len(b) else 0)) % p for i in range(n)])


def _pmul(a, b, p):
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] = (out[i + j] + x * y) % p
    return _trim(out)


def _pdivmod(a, b, p):
    a = list(a)
    inv = pow(b[-1], -1, p)
    q = [0] * max(len(a) - len(b) + 1, 1)
    while len(a) >= len(b) and a:
        shift = len(a) - len(b)
        c = a[-1] * inv % p
        q[shift] = c
        for i, y in enumerate(b):
            a[i + shift] = (a[i + shift] - c * y) % p
        a = _trim(a)
    return _trim(q), a


def _pgcd(a, b, p):
    while b:
        a, b = b, _pdivmod(a, b, p)[1]
    if a:
        inv = pow(a[-1], -1, p)
        a = [c * inv % p for c in a]
    return a


def _ppowmod(base, e, mod, p):
    result = [1]
    base = _pdivmod(base, mod, p)[1]
    while e:
        if e & 1:
            result = _pdivmod(_pmul(result, base, p), mod, p)[1]
        base = _pdivmod(_pmul(base, base, p), mod, p)[1]
        e >>= 1
    return result


def _deriv(f):
    return [i * f[i] for i in range(1, len(f))]


@dataclass(frozen=True)
class CycleTypeObservation:
    prime: int
    degrees: tuple[int, ...]

    def to_dict(self):
        return {"prime": self.prime, "degrees": list(self.degrees)}


def dedekind_cycle_type(f: Sequence[int], p: int) -> CycleTypeObservation:
    """Factor degrees of ``f mod p`` by distinct-degree factorization."""
    f = _check_poly(f)
    if not sympy.isprime(p):
        raise InputError(f"{p} is not prime")
    if f[-1] % p == 0:
        raise RamifiedPrimeError(f"{p} divides the leading coefficient")
    g = _pmod(f, p)
    if len(_pgcd(g, _pmod(_deriv(g), p), p)) > 1:
        raise RamifiedPrimeError(f"reduction mod {p} is not squarefree")
    g = [c * pow(g[-1], -1, p) % p for c in g]
    degrees = []
    x = [0, 1]
    h = x
    i = 0
    while len(g) - 1 >= 2 * (i + 1):
        i += 1
        h = _ppowmod(h, p, g, p)
        d = _pgcd(g, _psub(h, x, p), p)
        k = len(d) - 1
        if k:
            degrees.extend([i] * (k // i))
            g = _pdivmod(g, d, p)[0]
            h = _pdivmod(h, g, p)[1] if len(g) > 1 else []
    if len(g) > 1:
        degrees.append(len(g) - 1)
    return CycleTypeObservation(p, tuple(sorted(degrees)))


# --------------------------------------------------------------------------
# over Q


def _qdivmod(a, b):
    a = [Fraction(c) for c in a]
    q = [Fraction(0)] * max(len(a) - len(b) + 1, 1)
    while len(a) >= len(b) and a:
        shift = len(a) - len(b)
        c = a[-1] / b[-1]
        q[shift] = c
        for i, y in enumerate(b):
            a[i + shift] -= c * y
        a = _trim(a)
    return _trim(q), a


def _qgcd(a, b):
    a, b = [Fraction(c) for c in a], [Fraction(c) for c in b]
    while b:
        a, b = b, _qdivmod(a, b)[1]
    return [c / a[-1] for c in a] if a else a


def is_squarefree(f: Sequence[int]) -> bool:
    f = _check_poly(f)
    return len(_qgcd(f, _deriv(f))) <= 1


def is_irreducible(f: Sequence[int]) -> bool:
    """Irreducibility over Q, by exact factorization."""
    f = _check_poly(f)
    if len(f) <= 2:
        return True
    x = sympy.Symbol("x")
    _, factors = sympy.factor_list(sympy.Poly(list(reversed(f)), x))
    return len(factors) == 1 and factors[0][1] == 1


def _is_transposition_type(degrees) -> bool:
    # one 2-cycle plus odd cycles: its lcm(odd parts)-th power is a transposition
    return degrees.count(2) == 1 and all(d == 2 or d % 2 for d in degrees)


def _subset_sums(degrees) -> set[int]:
    sums = {0}
    for d in degrees:
        sums |= {s + d for s in sums}
    return sums


@dataclass
class GroupCertificate:
    polynomial: tuple[int, ...]
    prime_bound: int
    transitivity: dict | None = None
    long_cycle: CycleTypeObservation | None = None
    transposition: CycleTypeObservation | None = None
    observed_primes: int = 0
    skipped_primes: tuple[int, ...] = ()
    verdict: str = "not-certified"
    notes: list[str] = field(default_factory=list)

    @property
    def degree(self) -> int:
        return len(self.polynomial) - 1

    @property
    def certified(self) -> bool:
        return self.verdict == "certified"

    def to_dict(self) -> dict:
        return {
            "polynomial": list(self.polynomial),
            "degree": self.degree,
            "group": f"S{self.degree}",
            "prime_bound": self.prime_bound,
            "transitivity": self.transitivity,
            "long_cycle": self.long_cycle.to_dict() if self.long_cycle else None,
            "transposition": self.transposition.to_dict() if self.transposition else None,
            "observed_primes": self.observed_primes,
            "skipped_primes": list(self.skipped_primes),
            "verdict": self.verdict,
            "notes": list(self.notes),
        }


def certify_symmetric_group(f: Sequence[int], prime_bound: int = 1000) -> GroupCertificate:
    """Try to certify ``Gal(f) = S_N`` from cycle types at primes <= ``prime_bound``.

    ``certified`` is a proof. ``not-certified`` only means the scan found
    no complete witness set; ``refuted`` means f is reducible over Q.
    Witnesses are the smallest primes exhibiting each pattern.
    """
    f = _check_poly(f)
    N = len(f) - 1
    if N < 1:
        raise InputError("constant polynomial")
    if not is_squarefree(f):
        raise InputError("polynomial is not squarefree over Q")
    cert = GroupCertificate(tuple(f), prime_bound)
    long_type = tuple(sorted((1, N - 1))) if N > 1 else (1,)
    possible = set(range(1, N))  # degrees of a hypothetical proper rational factor
    skipped = []
    for p in sympy.primerange(2, prime_bound + 1):
        try:
            obs = dedekind_cycle_type(f, p)
        except RamifiedPrimeError:
            skipped.append(p)
            continue
        cert.observed_primes += 1
        if cert.transitivity is None:
            if obs.degrees == (N,):
                cert.transitivity = {"kind": "irreducible-mod-p", "prime": p}
            else:
                possible &= _subset_sums(obs.degrees)
                if not possible:
                    cert.transitivity = {"kind": "degree-patterns", "up_to_prime": p}
        if cert.long_cycle is None and obs.degrees == long_type:
            cert.long_cycle = obs
        if cert.transposition is None and _is_transposition_type(list(obs.degrees)):
            cert.transposition = obs
        if cert.transitivity and cert.long_cycle and cert.transposition:
            break
    cert.skipped_primes = tuple(skipped)
    if N == 1:
        cert.verdict = "certified"
        return cert
    if cert.transitivity is None:
        if is_irreducible(f):
            cert.transitivity = {"kind": "rational-factorization"}
        else:
            cert.verdict = "refuted"
            cert.notes.append("reducible over Q")
            return cert
    if cert.transposition is None:
        cert.notes.append("no transposition pattern observed")
    if cert.long_cycle is None:
        cert.notes.append(f"no {N - 1}-cycle pattern observed")
    if cert.transposition and cert.long_cycle:
        cert.verdict = "certified"
    return cert


# --------------------------------------------------------------------------
# real roots


def _qeval(f, x: Fraction) -> Fraction:
    acc = Fraction(0)
    for c in reversed(f):
        acc = acc * x + c
    return acc


def _sturm_chain(f):
    chain = [[Fraction(c) for c in f], [Fraction(c) for c in _deriv(f)]]
    while chain[-1] and len(chain[-1]) > 1:
        r = _qdivmod(chain[-2], chain[-1])[1]
        if not r:
            break
        chain.append([-c for c in r])
    return [p for p in chain if p]


def _sign_changes(values) -> int:
    signs = [v > 0 for v in values if v != 0]
    return sum(1 for a, b in zip(signs, signs[1:]) if a != b)


def _at_infinity(chain, sign: int):
    out = []
    for p in chain:
        deg = len(p) - 1
        s = 1 if p[-1] > 0 else -1
        out.append(s * (sign ** deg))
    return out


def real_root_count(f: Sequence[int], lo: Fraction | None = None, hi: Fraction | None = None) -> int:
    """Number of distinct real roots in ``(lo, hi]`` (None = infinite end)."""
    f = _check_poly(f)
    if len(f) == 1:
        return 0
    chain = _sturm_chain(f)
    v_lo = _sign_changes(_at_infinity(chain, -1) if lo is None else [_qeval(p, Fraction(lo)) for p in chain])
    v_hi = _sign_changes(_at_infinity(chain, 1) if hi is None else [_qeval(p, Fraction(hi)) for p in chain])
    return v_lo - v_hi


def no_real_roots(f: Sequence[int]) -> bool:
    return real_root_count(f) == 0


# --------------------------------------------------------------------------
# pairwise root products


def _cmul(a, b):
    return (a[0] * b[0] - a[1] * b[1], a[0] * b[1] + a[1] * b[0])


def _cabs2(a) -> Fraction:
    return a[0] * a[0] + a[1] * a[1]


def _ceval(f, z):
    acc = (Fraction(0), Fraction(0))
    for c in reversed(f):
        acc = _cmul(acc, z)
        acc = (acc[0] + c, acc[1])
    return acc


def _to_fraction(x) -> Fraction:
    sign, man, exp, _ = mpmath.mpf(x)._mpf_
    value = Fraction(man) * Fraction(2) ** exp
    return -value if sign else value


def _isolating_disks(f, digits: int):
    """Exact centres and radii of pairwise disjoint root disks, or None."""
    N = len(f) - 1
    with mpmath.workdps(digits + 10):
        try:
            roots = mpmath.polyroots(list(reversed(f)), maxsteps=200 + 20 * digits,
                                     extraprec=2 * digits)
        except mpmath.NoConvergence:
            return None
        centres = [(_to_fraction(mpmath.re(r)), _to_fraction(mpmath.im(r))) for r in roots]
    df = _deriv(f)
    disks = []
    for z in centres:
        fz, dfz = _ceval(f, z), _ceval(df, z)
        d2 = _cabs2(dfz)
        if d2 == 0:
            return None
        disks.append((z, N * sqrt_upper(_cabs2(fz) / d2)))
    for i in range(N):
        for j in range(i + 1, N):
            (zi, ri), (zj, rj) = disks[i], disks[j]
            diff = (zi[0] - zj[0], zi[1] - zj[1])
            if _cabs2(diff) <= (ri + rj) ** 2:
                return None
    return disks


def _products_separated(disks) -> bool:
    prods = []
    for i in range(len(disks)):
        for j in range(i + 1, len(disks)):
            (zi, ri), (zj, rj) = disks[i], disks[j]
            err = sqrt_upper(_cabs2(zi)) * rj + sqrt_upper(_cabs2(zj)) * ri + ri * rj
            prods.append((_cmul(zi, zj), err))
    for a in range(len(prods)):
        for b in range(a + 1, len(prods)):
            (pa, ea), (pb, eb) = prods[a], prods[b]
            if _cabs2((pa[0] - pb[0], pa[1] - pb[1])) <= (ea + eb) ** 2:
                return False
    return True


def distinct_pair_products(f: Sequence[int], digits: int = 50, cap: int = 800) -> bool:
    """Whether the products ``lambda_i lambda_j`` (i < j) of the roots are pairwise distinct.

    Certified disks are widened by precision doubling from ``digits`` up to
    ``cap``. When the first attempt fails, an exact collision check (a
    repeated root of ``charpoly(wedge^2 companion(f))``, monic f only) can
    prove ``False``; if neither route decides, :class:`UndecidedError`.
    """
    f = _check_poly(f)
    if not is_squarefree(f):
        raise InputError("polynomial is not squarefree over Q")
    N = len(f) - 1
    if N <= 2:
        return True
    prec = digits
    collision_checked = False
    while True:
        disks = _isolating_disks(f, prec)
        if disks is not None and _products_separated(disks):
            return True
        if not collision_checked and f[-1] == 1:
            # an exact repeated product is never separable; detect it before escalating
            collision_checked = True
            if _products_collide(f):
                return False
        if prec >= cap:
            break
        prec = min(2 * prec, cap)
    raise UndecidedError(f"pairwise products not separated at {cap} digits")


def _products_collide(f) -> bool:
    """Exact test: ``charpoly(wedge^2 companion(f))`` has a repeated root."""
    g = char_poly(wedge_power_map(companion_matrix(f), 2))
    return not is_squarefree(g)


# --------------------------------------------------------------------------
# orbit decision


@dataclass(frozen=True)
class ProductOrbitReport:
    n: int
    pairs: tuple[tuple[int, int], ...]
    orbits: tuple[tuple[tuple[int, int], ...], ...]
    s20_nonempty: bool
    verdict: str

    @property
    def single_orbit(self) -> bool:
        return len(self.orbits) == 1

    @property
    def no_hodge_classes(self) -> bool:
        return self.verdict == "no Hodge classes"

    def to_dict(self) -> dict:
        return {
            "n": self.n,
            "pair_count": len(self.pairs),
            "orbit_sizes": [len(o) for o in self.orbits],
            "s20_nonempty": self.s20_nonempty,
            "verdict": self.verdict,
        }


def _default_generators(N: int):
    transposition = [1, 0] + list(range(2, N))
    cycle = [(i + 1) % N for i in range(N)]
    return [transposition, cycle]


def pair_orbit_decision(n: int, s20_nonempty: bool, generators=None) -> ProductOrbitReport:
    """Orbits of ``S_{2n}`` (given by generators) on unordered pairs of root labels.

    The verdict is ``no Hodge classes`` exactly when there is one orbit and
    the (2,0) part is known to be nonempty: a Galois-stable proper subset
    avoiding a nonempty orbit piece must be empty.
    """
    if n < 2:
        raise InputError("n must be at least 2")
    N = 2 * n
    gens = generators if generators is not None else _default_generators(N)
    pairs = [(i, j) for i in range(N) for j in range(i + 1, N)]
    assert len(pairs) == comb(N, 2) == n * (2 * n - 1)
    seen: set = set()
    orbits = []
    for start in pairs:
        if start in seen:
            continue
        orbit = {start}
        frontier = [start]
        while frontier:
            a, b = frontier.pop()
            for g in gens:
                img = tuple(sorted((g[a], g[b])))
                if img not in orbit:
                    orbit.add(img)
                    frontier.append(img)
        seen |= orbit
        orbits.append(tuple(sorted(orbit)))
    one = len(orbits) == 1
    verdict = "no Hodge classes" if one and s20_nonempty else "inconclusive"
    labelled = tuple((i + 1, j + 1) for i, j in pairs)
    labelled_orbits = tuple(tuple((i + 1, j + 1) for i, j in o) for o in orbits)
    return ProductOrbitReport(n, labelled, labelled_orbits, s20_nonempty, verdict)


def lcm_of_odd_parts(degrees: Sequence[int]) -> int:
    """Exponent turning a ``{2} + odd`` cycle type into a transposition."""
    return lcm(*[d for d in degrees if d % 2] or [1])
