#!/usr/bin/env python3
"""Writes the number-field fixtures in data/fields/.

Imaginary quadratic fields are derived from the defining polynomial alone
(reduced binary quadratic forms give the class group). The single quartic
field is entered by hand; its class group generators were found and are
certified by the test suite.
"""

import json
import math
import sys
from fractions import Fraction
from pathlib import Path


def squarefree_part(n):
    # returns (f, m) with n = f^2 m, m squarefree
    f, m, d = 1, n, 2
    while d * d <= abs(m):
        while m % (d * d) == 0:
            m //= d * d
            f *= d
        d += 1
    return f, m


def fundamental(D0):
    f, m = squarefree_part(D0)
    if m % 4 == 1:
        return f, m
    # D_K = 4m, so D0 = (f/2)^2 * 4m
    assert f % 2 == 0, D0
    return f // 2, 4 * m


def reduced_forms(D):
    out = []
    a = 1
    while 3 * a * a <= -D:
        for b in range(-a + 1, a + 1):
            num = b * b - D
            if num % (4 * a):
                continue
            c = num // (4 * a)
            if c < a or (a == c and b < 0):
                continue
            if math.gcd(math.gcd(a, abs(b)), c) != 1:
                continue
            out.append((a, b, c))
        a += 1
    return out


def rat(x):
    x = Fraction(x)
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


def quadratic(b, c):
    """Field data for x^2 + b x + c (ascending [c, b, 1])."""
    D0 = b * b - 4 * c
    f, DK = fundamental(D0)
    # sqrt(DK) = (2x + b)/f ; omega = (DK + sqrt(DK))/2
    omega = [Fraction(DK, 2) + Fraction(b, 2 * f), Fraction(1, f)]
    sqrtD = [Fraction(b, f), Fraction(2, f)]
    forms = reduced_forms(DK)
    h = len(forms)
    gens = []
    inv = []
    if h == 2:
        a, bb, _ = next(F for F in forms if F[0] > 1)
        # ideal (a, (-bb + sqrt(DK))/2)
        elem = [Fraction(-bb, 2) + sqrtD[0] / 2, sqrtD[1] / 2]
        gens.append({"p": a, "element": [rat(v) for v in elem]})
        inv = [2]
    elif h > 2:
        sys.exit(f"class number {h} for disc {DK}: add composition support")
    if DK == -4:
        tors, order = [v / 2 for v in sqrtD], 4
    elif DK == -3:
        tors, order = [Fraction(1, 2) + sqrtD[0] / 2, sqrtD[1] / 2], 6
    else:
        tors, order = [Fraction(-1), Fraction(0)], 2
    return {
        "defining_poly": [c, b, 1],
        "integral_basis": [["1", "0"], [rat(v) for v in omega]],
        "disc": DK,
        "class_group": {"invariants": inv, "generators": gens},
        "units": {"torsion": {"generator": [rat(v) for v in tors], "order": order}, "fundamental": []},
    }


QUARTIC = {
    # x^4 + 4x^2 + 25 generates Q(sqrt 6, sqrt -14); sqrt 6 = +-(x - x^3)/5
    "defining_poly": [25, 0, 4, 0, 1],
    "integral_basis": [["1"], ["0", "1"], ["0", "0", "1"], ["0", "1/5", "0", "-1/5"]],
    "disc": 112896,
    "class_group": {
        "invariants": [2, 4],
        "generators": [
            {"p": 2, "element": ["0", "-4/5", "1", "-1/5"]},
            {"p": 3, "element": ["0", "1", "2"]},
        ],
    },
    "units": {
        "torsion": {"generator": ["-1"], "order": 2},
        "fundamental": [["5", "2/5", "0", "-2/5"]],
    },
}


def weil_quadratics():
    seen = set()
    for p in (3, 5, 7):
        amax = math.isqrt(4 * p)
        for a in range(-amax, amax + 1):
            if a == 0 or math.gcd(a, p) != 1:
                continue
            seen.add((-a, p))  # x^2 - a x + p
    return sorted(seen)


def main():
    out = Path(sys.argv[1] if len(sys.argv) > 1 else Path(__file__).resolve().parent.parent / "data" / "fields")
    out.mkdir(parents=True, exist_ok=True)
    records = [quadratic(b, c) for b, c in weil_quadratics()]
    records.append(QUARTIC)
    for r in records:
        name = "poly_" + "_".join(str(c) for c in r["defining_poly"]) + ".json"
        (out / name).write_text(json.dumps(r, indent=1) + "\n")
    print(f"wrote {len(records)} records to {out}")


if __name__ == "__main__":
    main()
