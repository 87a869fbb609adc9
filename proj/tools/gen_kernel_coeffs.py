#!/usr/bin/env python3
"""Chebyshev tables for the ring-kernel shape function T(m) = ((2-m)K(m) - 2E(m))/m^2.

Below m = M_SPLIT, T and its first two derivatives are expanded directly in m.
Above it, with m1 = 1 - m, T = A(m1) - log(m1) B(m1) where A and B are analytic
at m1 = 0; A, B and their derivatives in m1 are expanded instead.

Each expansion is truncated where the Chebyshev tail falls below CUT and then
rewritten as an ordinary polynomial in the scaled variable x in [-1, 1], which
is well conditioned here and costs one FMA per term under Horner.

Writes include/axisym/kernel_coeffs.inc.  Run from the repository root.
"""
import sys
import mpmath as mp

mp.mp.dps = 60
M_SPLIT = mp.mpf("0.6")
NODES = 64
CUT = mp.mpf("2e-17")


def t_direct(m):
    if m < mp.mpf("1e-6"):
        # power series; c_n = ((2n-1)!!/(2n)!!)^2, d_n = 4n c_n/(2n-1) - c_{n-1}
        c = [mp.mpf(1)]
        for n in range(1, 40):
            c.append(c[-1] * (mp.mpf(2 * n - 1) / (2 * n)) ** 2)
        s = mp.mpf(0)
        for n in range(2, 38):
            s += (4 * n * c[n] / (2 * n - 1) - c[n - 1]) * m ** (n - 2)
        return mp.pi / 2 * s
    return ((2 - m) * mp.ellipk(m) - 2 * mp.ellipe(m)) / m**2


def ab(m1):
    m = 1 - m1
    if m1 == 0:
        qk, qe = mp.mpf(1) / 2, mp.mpf(0)
        pk, pe = mp.log(4), mp.mpf(1)
    else:
        lk, le = mp.ellipk(m1), mp.ellipe(m1)
        qk, qe = lk / mp.pi, (lk - le) / mp.pi
        pk = mp.ellipk(m) + mp.log(m1) * qk
        pe = mp.ellipe(m) + mp.log(m1) * qe
    return ((1 + m1) * pk - 2 * pe) / m**2, ((1 + m1) * qk - 2 * qe) / m**2


def a_fn(x):
    return ab(x)[0]


def b_fn(x):
    return ab(x)[1]


def cheb(f, a, b):
    n = NODES
    xs = [mp.cos(mp.pi * (k + mp.mpf(1) / 2) / n) for k in range(n)]
    fs = [f(a + (b - a) * (x + 1) / 2) for x in xs]
    c = []
    for j in range(n):
        s = mp.fsum(fs[k] * mp.cos(mp.pi * j * (k + mp.mpf(1) / 2) / n) for k in range(n))
        c.append(2 * s / n)
    c[0] /= 2
    scale = max(abs(v) for v in fs)
    deg = next(j for j in range(n) if all(abs(v) < CUT * scale for v in c[j:]))
    return to_monomial(c[:deg])


def to_monomial(c):
    n = len(c)
    basis = [[mp.mpf(1)], [mp.mpf(0), mp.mpf(1)]]
    for k in range(2, n):
        a = [mp.mpf(0)] + [2 * v for v in basis[k - 1]]
        b = basis[k - 2] + [mp.mpf(0)] * (len(a) - len(basis[k - 2]))
        basis.append([x - y for x, y in zip(a, b)])
    mono = [mp.mpf(0)] * n
    for k in range(n):
        for j, v in enumerate(basis[k]):
            mono[j] += c[k] * v
    return mono


def deriv(f, k):
    return lambda x: mp.diff(f, x, k)


def main():
    out = sys.argv[1] if len(sys.argv) > 1 else "include/axisym/kernel_coeffs.inc"
    tiny = mp.mpf("1e-40")
    lo = [("kT0", t_direct), ("kT1", deriv(t_direct, 1)), ("kT2", deriv(t_direct, 2))]
    hi = [("kA0", a_fn), ("kA1", deriv(a_fn, 1)), ("kA2", deriv(a_fn, 2)),
          ("kB0", b_fn), ("kB1", deriv(b_fn, 1)), ("kB2", deriv(b_fn, 2))]
    lines = ["// generated by tools/gen_kernel_coeffs.py, do not edit", ""]
    lines.append(f"inline constexpr double kSplit = {mp.nstr(M_SPLIT, 17)};")
    for name, f, a, b in [(n, f, tiny, M_SPLIT) for n, f in lo] + [(n, f, mp.mpf(0), 1 - M_SPLIT) for n, f in hi]:
        # derivatives at the left end are taken one-sided by mp.diff near 0; shift off the endpoint
        c = cheb(f, a if a > 0 else mp.mpf("1e-30"), b)
        lines.append(f"inline constexpr double {name}[{len(c)}] = {{")
        for v in c:
            lines.append(f"    {mp.nstr(v, 20, min_fixed=1, max_fixed=0)},")
        lines.append("};")
        print(name, len(c), file=sys.stderr)
    with open(out, "w") as fh:
        fh.write("\n".join(lines) + "\n")


if __name__ == "__main__":
    main()
