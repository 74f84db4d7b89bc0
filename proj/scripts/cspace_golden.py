#!/usr/bin/env python3
"""Closed-form reference table for classical flag manifolds (B, C, D).

Independent of the C++ root enumeration: dimensions come from counting
formulas, verdicts from the integer predicates directly.
"""
import json
import sys


def dimension(fam, r, i):
    if fam == "B":
        return i * (2 * r + 1 - i) - i * (i + 1) // 2
    if fam == "C":
        return 2 * i * (r - i) + i * (i + 1) // 2
    if i >= r - 1:
        return r * (r - 1) // 2
    return i * (2 * r - i) - i * (i + 1) // 2


def compare(lhs, r):
    if lhs < 4 * r:
        return "positive"
    if lhs == 4 * r:
        return "nonneg_boundary"
    return "fails"


def qb(fam, r, i):
    if fam == "B" and r >= 3 and 1 < i < r:
        return compare(5 * i + 1, r)
    if fam == "C" and 1 < i < r:
        return compare(5 * i - 3, r)
    if fam == "D" and 1 < i < r - 1:
        return compare(5 * i + 3, r)
    return None


def mu(fam, r, i):
    if fam == "B":
        if r == 2:
            return 3 if i == 1 else 4
        return 2 * r - i
    if fam == "C":
        return 2 * r - i + 1
    return 2 * r - i - 1


def nu(fam, r, i):
    if fam == "B":
        return 2 if r >= 3 else None
    if fam == "C":
        return 4 if i == r else 2
    return 2


def hermitian(fam, r, i):
    if fam == "B":
        return i in (1, r)
    if fam == "C":
        return i in (1, r)
    return i in (1, r - 1, r)


def ricperp(fam, r, i):
    if fam == "C" and r == 3 and i == 3:
        return "special_C3a3"
    m, v = mu(fam, r, i), nu(fam, r, i)
    if v is not None and v < m:
        return "nu_lt_mu"
    if hermitian(fam, r, i) and m > 2:
        return "hermitian_symmetric_bound"
    if qb(fam, r, i) == "positive":
        return "qb_positive"
    raise ValueError((fam, r, i))


def main():
    r_max = int(sys.argv[1]) if len(sys.argv) > 1 else 10
    rows = []
    for fam, r0 in (("B", 2), ("C", 3), ("D", 4)):
        for r in range(r0, r_max + 1):
            for i in range(1, r + 1):
                rows.append({
                    "family": fam,
                    "rank": r,
                    "node": i,
                    "dimension": dimension(fam, r, i),
                    "qb": qb(fam, r, i),
                    "mu": mu(fam, r, i),
                    "nu": nu(fam, r, i),
                    "reason": ricperp(fam, r, i),
                })
    json.dump(rows, sys.stdout, indent=1)
    sys.stdout.write("\n")


if __name__ == "__main__":
    main()
