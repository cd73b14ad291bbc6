#!/usr/bin/env python
"""Regenerate src/recur2code/data/conway.txt by searching for Conway polynomials.

Candidates of degree n are walked in Conway order; the first one that is
primitive and compatible with every subfield polynomial wins.  Only practical
for the small fields this package targets.

    python scripts/gen_conway.py > src/recur2code/data/conway.txt
"""
import itertools
import sys


def prime_factors(n):
    out, d = [], 2
    while d * d <= n:
        if n % d == 0:
            out.append(d)
            while n % d == 0:
                n //= d
        d += 1
    if n > 1:
        out.append(n)
    return out


def is_prime(n):
    return n >= 2 and prime_factors(n) == [n]


def polymod(a, f, p):
    a = list(a)
    n = len(f) - 1
    for i in range(len(a) - 1, n - 1, -1):
        c = a[i] % p
        if c:
            for j in range(n + 1):
                a[i - n + j] = (a[i - n + j] - c * f[j]) % p
    return [c % p for c in a[:n]] + [0] * max(0, n - len(a))


def mulmod(a, b, f, p):
    prod = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                prod[i + j] += x * y
    return polymod(prod, f, p)


def powmod(base, e, f, p):
    n = len(f) - 1
    result = [1] + [0] * (n - 1)
    while e:
        if e & 1:
            result = mulmod(result, base, f, p)
        base = mulmod(base, base, f, p)
        e >>= 1
    return result


def evaluate(g, x, f, p):
    # g has F_p coefficients, x is a polynomial residue mod f
    n = len(f) - 1
    acc = [0] * n
    for c in reversed(g):
        acc = mulmod(acc, x, f, p)
        acc[0] = (acc[0] + c) % p
    return acc


def is_primitive(f, p):
    n = len(f) - 1
    order = p**n - 1
    x = [0, 1] + [0] * (n - 2) if n > 1 else [(-f[0]) % p]
    one = [1] + [0] * (n - 1)
    if powmod(x, order, f, p) != one:
        return False
    return all(powmod(x, order // l, f, p) != one for l in prime_factors(order))


def candidates(p, n):
    # Conway order: x^n + sum (-1)^(n-i) c_i x^i, lexicographic in (c_{n-1},...,c_0)
    for digits in itertools.product(range(p), repeat=n):
        coeffs = [0] * (n + 1)
        coeffs[n] = 1
        for pos, c in enumerate(digits):
            i = n - 1 - pos
            coeffs[i] = (c if (n - i) % 2 == 0 else -c) % p
        if coeffs[0] == 0:
            continue
        yield coeffs


def conway(p, n, known):
    order = p**n - 1
    for f in candidates(p, n):
        if not is_primitive(f, p):
            continue
        x = [0, 1] + [0] * (n - 2) if n > 1 else [(-f[0]) % p]
        ok = True
        for m in range(1, n):
            if n % m:
                continue
            y = powmod(x, order // (p**m - 1), f, p)
            if any(evaluate(known[p, m], y, f, p)):
                ok = False
                break
        if ok:
            return f
    raise RuntimeError(f"no Conway polynomial found for {(p, n)}")


LIMIT = 2**20


def main(bound=2**20):
    known = {}
    print("# Conway polynomials: p k c0 c1 ... ck (constant term first)")
    for p in range(2, bound + 1):
        if not is_prime(p):
            continue
        if p > 200:
            break
        n = 1
        while p**n <= bound:
            # keep the brute-force search tractable
            if p**n > LIMIT and n > 1:
                break
            known[p, n] = conway(p, n, known)
            print(p, n, *known[p, n])
            sys.stdout.flush()
            n += 1


if __name__ == "__main__":
    main()
