#!/usr/bin/env python3
"""Regenerate the newform records under fixtures/.

Everything is computed from first principles with exact rational arithmetic:

  49a1      point counts on y^2 + xy = x^3 - x^2 - 2x - 1
  1.12.a.a  q * prod (1 - q^n)^24
  11.3.*    S_3(Gamma0(11), chi) is one-dimensional for every odd chi mod 11,
            so its newform is E_1^chi * f_11a, normalized (f_11a from point
            counts on y^2 + y = x^3 - x^2 - 10x - 20).

The order-10 orbit is written in the power basis of a root of
x^4 + 5x^3 + 15x^2 + 15x + 5, which generates Q(zeta_5).
"""

import json
import sys
from fractions import Fraction
from pathlib import Path

BOUND = 250
OUT = Path(__file__).resolve().parent.parent / "fixtures"


def primes_upto(n):
    sieve = [True] * (n + 1)
    sieve[0:2] = [False, False]
    for i in range(2, int(n ** 0.5) + 1):
        if sieve[i]:
            sieve[i * i :: i] = [False] * len(sieve[i * i :: i])
    return [i for i, v in enumerate(sieve) if v]


def factorize(n):
    out, p = {}, 2
    while p * p <= n:
        while n % p == 0:
            out[p] = out.get(p, 0) + 1
            n //= p
        p += 1
    if n > 1:
        out[n] = out.get(n, 0) + 1
    return out


def count_points(ainv, p):
    a1, a2, a3, a4, a6 = ainv
    total = 1
    for x in range(p):
        for y in range(p):
            if (y * y + a1 * x * y + a3 * y - (x ** 3 + a2 * x * x + a4 * x + a6)) % p == 0:
                total += 1
    return total


# ---------------------------------------------------------------- Q(zeta_5)
# Elements are 4-tuples of Fractions in the basis 1, z, z^2, z^3 with
# z^4 = -(1 + z + z^2 + z^3).


def cz(*c):
    v = [Fraction(0)] * 4
    for i, x in enumerate(c):
        v[i] = Fraction(x)
    return tuple(v)


ZERO, ONE = cz(), cz(1)


def zadd(a, b):
    return tuple(x + y for x, y in zip(a, b))


def zsub(a, b):
    return tuple(x - y for x, y in zip(a, b))


def zscale(a, s):
    return tuple(x * s for x in a)


def zmul(a, b):
    prod = [Fraction(0)] * 7
    for i in range(4):
        for j in range(4):
            prod[i + j] += a[i] * b[j]
    for d in range(6, 3, -1):
        c = prod[d]
        prod[d] = Fraction(0)
        for t in range(1, 5):
            prod[d - t] -= c
    return tuple(prod[:4])


def zpow(a, e):
    r = ONE
    for _ in range(e):
        r = zmul(r, a)
    return r


def solve(matrix, rhs):
    """Gauss-Jordan over Q; matrix is square list of lists."""
    n = len(matrix)
    m = [list(row) + [rhs[i]] for i, row in enumerate(matrix)]
    for col in range(n):
        piv = next(r for r in range(col, n) if m[r][col] != 0)
        m[col], m[piv] = m[piv], m[col]
        inv = 1 / m[col][col]
        m[col] = [x * inv for x in m[col]]
        for r in range(n):
            if r != col and m[r][col] != 0:
                f = m[r][col]
                m[r] = [x - f * y for x, y in zip(m[r], m[col])]
    return [m[i][n] for i in range(n)]


def zinv(a):
    # columns: a * z^j
    cols = [zmul(a, cz(*([0] * j + [1]))) for j in range(4)]
    matrix = [[cols[j][i] for j in range(4)] for i in range(4)]
    return tuple(solve(matrix, [1, 0, 0, 0]))


# ---------------------------------------------------------------- records


def int_json(n):
    n = int(n)
    return n if abs(n) < 2 ** 53 else str(n)


def element(coords):
    coords = [Fraction(c) for c in coords]
    den = 1
    for c in coords:
        den = den * c.denominator // __import__("math").gcd(den, c.denominator)
    return {"num": [int_json(c * den) for c in coords], "den": int_json(den)}


def record(label, level, weight, char, field_poly, an, complete_for):
    return {
        "label": label,
        "level": level,
        "weight": weight,
        "char": char,
        "field_poly": field_poly,
        "an": an,
        "complete_gallery_for": complete_for,
    }


def trivial_char():
    return {"modulus": 1, "conductor": 1, "components": [], "values": {}}


def hecke_extend(ap, level, weight, chi, one, mul, sub, scale, bound):
    """Fill a_n for n <= bound from prime values via the Hecke recursion."""
    a = {1: one}
    for p in primes_upto(bound):
        a[p] = ap[p]
        prev, cur, pk = one, ap[p], p
        while pk * p <= bound:
            if level % p == 0:
                nxt = mul(cur, ap[p])
            else:
                nxt = sub(mul(ap[p], cur), scale(mul(chi(p), prev), p ** (weight - 1)))
            pk *= p
            prev, cur = cur, nxt
            a[pk] = cur
    for n in range(2, bound + 1):
        if n in a:
            continue
        fac = factorize(n)
        val = one
        for p, e in fac.items():
            val = mul(val, a[p ** e])
        a[n] = val
    return [a[n] for n in range(1, bound + 1)]


def elliptic_an(ainv, level, bound):
    ap = {}
    for p in primes_upto(bound):
        if level % p == 0:
            continue
        ap[p] = p + 1 - count_points(ainv, p)
    return ap


def make_49a1():
    ap = elliptic_an([1, -1, 0, -2, -1], 49, BOUND)
    ap[7] = 0  # additive reduction
    an = hecke_extend(ap, 49, 2, lambda p: 1, 1, lambda x, y: x * y,
                      lambda x, y: x - y, lambda x, s: x * s, BOUND)
    assert an[:9] == [1, 1, 0, -1, 0, 0, 0, -3, -3], an[:9]
    assert an[10] == 4
    return record("49a1", 49, 2, trivial_char(), [0, 1],
                  [element([c]) for c in an], 49)


def make_delta():
    series = [0] * (BOUND + 1)
    series[0] = 1
    for n in range(1, BOUND + 1):
        for _ in range(24):
            for i in range(BOUND, n - 1, -1):
                series[i] -= series[i - n]
    tau = [series[n - 1] for n in range(1, BOUND + 1)]
    assert tau[:4] == [1, -24, 252, -1472]
    return record("1.12.a.a", 1, 12, trivial_char(), [0, 1],
                  [element([t]) for t in tau], 1)


def weight3_level11():
    ap11 = elliptic_an([0, -1, 1, -10, -20], 11, BOUND)
    ap11[11] = 1  # split multiplicative
    f11 = hecke_extend(ap11, 11, 2, lambda p: 1, 1, lambda x, y: x * y,
                       lambda x, y: x - y, lambda x, s: x * s, BOUND)
    assert f11[:5] == [1, -2, -1, 2, 1]

    # chi(2) generates the character group mod 11 (2 is a primitive root).
    dlog = {}
    g = 1
    for e in range(10):
        dlog[g] = e
        g = g * 2 % 11

    zeta10 = zscale(zpow(cz(0, 1), 3), -1)  # -z^3 has order 10

    def char_order10(n):
        n %= 11
        return ZERO if n == 0 else zpow(zeta10, dlog[n])

    def char_quadratic(n):
        n %= 11
        if n == 0:
            return ZERO
        return ONE if dlog[n] % 2 == 0 else zscale(ONE, -1)

    forms = {}
    for name, chi in (("order10", char_order10), ("quadratic", char_quadratic)):
        assert zmul(chi(10), ONE) == zscale(ONE, -1)  # odd
        b1 = ZERO
        for a in range(1, 11):
            b1 = zadd(b1, zscale(chi(a), Fraction(a, 11)))
        c0 = zscale(b1, Fraction(-1, 2))
        eis = [c0]
        for n in range(1, BOUND + 1):
            s = ZERO
            for d in range(1, n + 1):
                if n % d == 0:
                    s = zadd(s, chi(d))
            eis.append(s)
        prod = [ZERO] * (BOUND + 1)
        for i in range(1, BOUND + 1):
            for j in range(0, BOUND + 1 - i):
                if f11[i - 1]:
                    prod[i + j] = zadd(prod[i + j], zscale(eis[j], f11[i - 1]))
        inv = zinv(prod[1])
        an = [zmul(prod[n], inv) for n in range(1, BOUND + 1)]
        # eigenform sanity: multiplicativity and the prime-square relation
        for m in range(2, 16):
            for n in range(2, BOUND // m + 1):
                if __import__("math").gcd(m, n) == 1:
                    assert an[m * n - 1] == zmul(an[m - 1], an[n - 1])
        for p in primes_upto(15):
            if p != 11:
                rhs = zsub(zmul(an[p - 1], an[p - 1]), zscale(chi(p), p * p))
                assert an[p * p - 1] == rhs, (name, p)
        forms[name] = (an, chi)
    return forms


def alpha_basis_converter():
    # alpha = z^3 - z^2 + z - 1 is a root of x^4 + 5x^3 + 15x^2 + 15x + 5
    alpha = cz(-1, 1, -1, 1)
    poly = [5, 15, 15, 5, 1]
    acc = ZERO
    for i, c in enumerate(poly):
        acc = zadd(acc, zscale(zpow(alpha, i), c))
    assert acc == ZERO
    powers = [zpow(alpha, i) for i in range(4)]
    matrix = [[powers[j][i] for j in range(4)] for i in range(4)]
    return lambda v: solve(matrix, list(v))


def make_level11():
    forms = weight3_level11()
    to_alpha = alpha_basis_converter()
    primes = [p for p in primes_upto(BOUND) if p != 11]

    an, chi = forms["order10"]
    values = {str(p): element(to_alpha(chi(p))) for p in primes}
    char = {"modulus": 11, "conductor": 11,
            "components": [{"q": 11, "e": 1, "order": 10}], "values": values}
    order10 = record("11.3.d.a", 11, 3, char, [5, 15, 15, 5, 1],
                     [element(to_alpha(a)) for a in an], 11)

    an, chi = forms["quadratic"]
    for a in an:
        assert all(c == 0 for c in a[1:])
    values = {str(p): element([chi(p)[0]]) for p in primes}
    char = {"modulus": 11, "conductor": 11,
            "components": [{"q": 11, "e": 1, "order": 2}], "values": values}
    quadratic = record("11.3.b.a", 11, 3, char, [0, 1],
                       [element([a[0]]) for a in an], 11)
    assert quadratic["an"][1]["num"] == [0]  # CM by Q(sqrt(-11)): 2 is inert
    return order10, quadratic


def dump(path, obj):
    path.write_text(json.dumps(obj, indent=1) + "\n")


def main():
    OUT.mkdir(exist_ok=True)
    f49 = make_49a1()
    delta = make_delta()
    order10, quadratic = make_level11()
    dump(OUT / "49a1.json", f49)
    dump(OUT / "delta.json", delta)
    dump(OUT / "11.3.d.a.json", order10)
    dump(OUT / "11.3.b.a.json", quadratic)
    dump(OUT / "gallery49.json", {"complete_for_level": 49, "forms": [f49]})
    dump(OUT / "gallery1.json", {"complete_for_level": 1, "forms": [delta]})
    dump(OUT / "gallery11.json",
         {"complete_for_level": 11, "forms": [quadratic, order10]})
    return 0


if __name__ == "__main__":
    sys.exit(main())
