"""Small scalar solvers shared by the loci and kinematics modules."""
import math

INVPHI = (math.sqrt(5) - 1) / 2


def golden_section(f, lo, hi, tol=1e-12, maximize=False, max_iter=200):
    """Minimise (or maximise) a unimodal ``f`` on ``[lo, hi]``; returns ``(x, f(x))``."""
    sign = -1.0 if maximize else 1.0
    g = lambda x: sign * f(x)
    a, b = lo, hi
    c = b - INVPHI * (b - a)
    d = a + INVPHI * (b - a)
    fc, fd = g(c), g(d)
    for _ in range(max_iter):
        if b - a <= tol:
            break
        if fc < fd:
            b, d, fd = d, c, fc
            c = b - INVPHI * (b - a)
            fc = g(c)
        else:
            a, c, fc = c, d, fd
            d = a + INVPHI * (b - a)
            fd = g(d)
    x = (a + b) / 2
    return x, f(x)


def bisect_sign(pred, lo, hi, tol=1e-12, max_iter=200):
    """Boundary between ``pred(lo)`` and ``not pred(lo)`` on ``[lo, hi]``."""
    p_lo = pred(lo)
    for _ in range(max_iter):
        if hi - lo <= tol:
            break
        mid = 0.5 * (lo + hi)
        if pred(mid) == p_lo:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)
