"""Regenerate the bundled fixture JSON files from their factored forms."""

import json
import math
from pathlib import Path

from framefactor.laurent import LaurentPoly as L
from framefactor.lpmatrix import LPMatrix

OUT = Path(__file__).resolve().parents[1] / "src" / "framefactor" / "fixtures"
z = L([1.0], lo=1)
zi = L([1.0], lo=-1)
one = L([1.0])
s2, s3, s6, s10 = math.sqrt(2), math.sqrt(3), math.sqrt(6), math.sqrt(10)


def P(*c):
    """Polynomial in z from ascending coefficients."""
    return L(list(c))


def bank(name, note, a, theta, nb, M, hp, expect):
    return {
        "name": name,
        "note": note,
        "bank": {
            "dilation": M, "a": a.to_json(), "theta": theta.to_json(), "nb": nb,
            "highpass": [{"b": b.to_json(), "eps": e} for b, e in hp],
        },
        "expect": expect,
    }


def main():
    OUT.mkdir(parents=True, exist_ok=True)
    fx = []

    fx.append(bank("haar", "Haar filter, Theta = 1, single high-pass (z - 1)/2",
                   (1 + z) / 2, one, 1, 2, [((z - 1) / 2, 1)],
                   {"s_plus": 1, "s_minus": 0, "case": 1, "sublabel": "i", "vmo": [1]}))

    a = z ** -2 * (z + 1) * P(1, -1, 1) * P(9, -5, 9) / 26
    b1 = z ** -2 * (z - 1) * P(63, 28, 100, 28, 63) / 52
    b2 = z ** -2 * (z - 1) * P(9, 4, 9) * P(3645, 0, -1034, 0, 3645) * (s2 / 97344)
    b3 = z ** -2 * (z - 1) * P(9, 4, 9) * P(3645, 0, 9782, 0, 3645) * (s2 / 97344)
    fx.append(bank("ex3.1", "dilation 2, Theta = 1, nb = 1, signature (2, 1)", a, one, 1, 2,
                   [(b1, 1), (b2, 1), (b3, -1)],
                   {"s_plus": 2, "s_minus": 1, "case": 6, "sublabel": "iv", "vmo": [1, 1, 1], "sm": 0.7693}))

    a = 0.5 + 0.375 * (z + zi) - 0.125 * (z ** 3 + zi ** 3)
    th = (z + zi) / 2
    b1 = z ** -3 * (z - 1) ** 2 * P(-8, -16, -23, -14, -4, 2, 1) / 32
    b2 = -(z ** -3) * (z - 1) ** 2 * P(9, 2, 4, 2, 1) / 32
    fx.append(bank("ex3.2", "dilation 2, Theta = (z + 1/z)/2, nb = 2, signature (1, 1)", a, th, 2, 2,
                   [(b1, 1), (b2, -1)],
                   {"s_plus": 1, "s_minus": 1, "case": 5, "sublabel": "iii", "vmo": [2, 2], "sm": 1.0,
                    "max_vm": 2}))

    a = -(z ** -2) * (z + 1) ** 3 * P(1, -4, 1) / 16
    b1 = -(z ** -2) * (z - 1) * P(-1, 0, 16, 16, -271, 16) * (s2 / 512)
    b2 = z ** -2 * (z - 1) * P(-1, 0, 16, 16, 241, 16) * (s2 / 512)
    fx.append(bank("ex3.3", "dilation 2, Theta = 1, nb = 1, signature (1, 1)", a, one, 1, 2,
                   [(b1, 1), (b2, -1)],
                   {"s_plus": 1, "s_minus": 1, "case": 5, "sublabel": "iii", "vmo": [1, 1], "sm": 1.4408}))

    a = z ** -4 * (z + 1) ** 4 * P(1, -6, 14, -6, 1) / 64
    b1 = z ** -2 * (z - 1) ** 2 * P(2 - s3, 0, 0, 0, 2 + s3) * (s2 / 16)
    b2 = z ** -4 * (z - 1) ** 2 * P(1, 0, 11, 8, 11, 0, 1) / 64
    fx.append(bank("ex3.4", "dilation 2, Theta = 1, nb = 2, signature (1, 1)", a, one, 2, 2,
                   [(b1, 1), (b2, -1)],
                   {"s_plus": 1, "s_minus": 1, "case": 5, "sublabel": "iii", "vmo": [2, 2], "sm": 1.6297}))

    a = z ** -2 * (z + 1) ** 2 * P(1, -(4 + s6), 1) * ((2 - s6) / 8)
    c = s10 / 40
    b1 = z ** -2 * (z - 1) * P(-s6 - 1, 2 * s6 - 1, 2 * s6 - 3, s6 - 3) * c
    b2 = z ** -2 * (z - 1) * P(s6 - 4, s6 - 2, s6 - 4, s6 - 2) * c
    b3 = z ** -2 * (z - 1) ** 2 * P(4 - s6, 6 - 2 * s6, 2 - s6) * c
    fx.append(bank("ex3.5", "dilation 2, Theta = 1, nb = 1, signature (2, 1)", a, one, 1, 2,
                   [(b1, 1), (b2, 1), (b3, -1)],
                   {"s_plus": 2, "s_minus": 1, "case": 6, "sublabel": "iv", "vmo": [1, 1, 2], "sm": 0.9382,
                    "max_vm": 1}))

    a = -(z ** -3) * P(1, 1, 1) ** 2 * P(2, -7, 2) / 27
    b1 = (z - 1) ** 2 * (z + 1) * (s6 / 6)
    b2 = (z - 1) ** 3 * (s6 / 18)
    b3 = z ** -3 * (z - 1) ** 4 * P(2, 5, 2) / 27
    fx.append(bank("ex6.1", "dilation 3, Theta = 1, nb = 2, signature (2, 1)", a, one, 2, 3,
                   [(b1, 1), (b2, 1), (b3, -1)],
                   {"s_plus": 2, "s_minus": 1, "vmo": [2, 3, 4]}))

    for f in fx:
        (OUT / f"{f['name']}.json").write_text(json.dumps(f, indent=1) + "\n")

    A = LPMatrix([[zi * (z - 1) ** 2, (z - 1) * (z + 1)],
                  [(zi - 1) * (zi + 1), -(zi * (z - 1) ** 2)]])
    E = LPMatrix([[zi * P(-1, 1, 4, -2), z * 2 * (2 - z)], [z ** -2 * P(-1, -1, 0, 2), 2 * z]])
    F = LPMatrix([[one, P(0, -1, 2)], [-one, P(1, 1, -2)]])
    mat = {"name": "ex4.1", "note": "2 x 2 Hermitian matrix with Smith form diag(z - 1, z - 1)",
           "matrix": A.to_json(), "smith_E": E.to_json(), "smith_F": F.to_json(),
           "expect": {"divisors": [[1, 1], [1, 1]], "m_plus": 1, "m_minus": 1}}
    (OUT / "ex4.1.json").write_text(json.dumps(mat, indent=1) + "\n")


if __name__ == "__main__":
    main()
