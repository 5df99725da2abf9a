"""Formal group laws attached to a p-adic dynamical system.

Two independent constructions are implemented and cross-checked.

``group_from_log`` builds F(x, y) = E(L(x) + L(y)) where L is the logarithm
and E its compositional inverse, but never forms a two-variable composition:
writing A_j = E^(j)(L(x)), the chain rule gives A_0 = x and
A_{j+1} = A_j' / L'(x), so F = sum_j A_j(x) L(y)^j / j! costs one univariate
multiplication per Taylor order.

``lubin_tate_lift`` solves f(F(x,y)) = F(f(x), f(y)) degree by degree with
F = x + y mod degree 2; for f congruent to x^p mod p with f'(0) of
valuation 1 the solution is integral and unique, which is what makes it an
independent oracle for the first construction.

``frobenius_multiplier`` recovers the scalar pi with v(pi) = 1 whose
bracket endomorphism exp(pi * L) reduces to x^p mod p, one base-p digit at
a time: the digit at p^k first influences the mod-p coefficients at degree
p^(k+1), so testing the congruence below min(M, p^(k+1)+1) pins it.
"""

from .errors import (
    AmbiguousAtPrecision,
    IntegralityFailure,
    NoCandidate,
    NonUniqueLift,
    PrecisionExhausted,
)
from .padic import INF, PadicNum
from .series import PSeries
from .dynamics import Logarithm


class FormalGroupLaw:
    """Two-variable group law with certification flags.

    Certificates are computed, not assumed: ``certify`` runs the identity,
    commutativity and (at a smaller truncation) associativity checks and
    records the truncation degree each was verified at.
    """

    __slots__ = ("F", "construction", "certificates")

    def __init__(self, F: PSeries, construction: str):
        self.F = F
        self.construction = construction
        self.certificates = {}

    def min_coeff_valuation(self):
        """Least certified valuation floor over all coefficients."""
        return self.F.min_val_floor()

    def check_identity(self) -> bool:
        p = self.F.prime
        x = PSeries.identity(p, self.F.x_prec, self.F.coeff_prec)
        ok = self.F.set_var_zero(1).equal_to_precision(x) and self.F.set_var_zero(
            0
        ).equal_to_precision(x)
        self.certificates["identity"] = {"ok": ok, "degree": self.F.x_prec}
        return ok

    def check_commutative(self) -> bool:
        ok = self.F.swap_vars(0, 1).equal_to_precision(self.F)
        self.certificates["commutative"] = {"ok": ok, "degree": self.F.x_prec}
        return ok

    def check_associative(self, m2: int) -> bool:
        """F(F(x,y),z) = F(x,F(y,z)) in the 3-variable ring below degree m2."""
        p = self.F.prime
        N = self.F.coeff_prec
        F2 = self.F.truncate(m2)
        fxy = _embed2to3(F2, (0, 1), m2)
        fyz = _embed2to3(F2, (1, 2), m2)
        z3 = PSeries.variable(p, 3, 2, m2, N)
        x3 = PSeries.variable(p, 3, 0, m2, N)
        lhs = F2.compose((fxy, z3))
        rhs = F2.compose((x3, fyz))
        ok = lhs.equal_to_precision(rhs)
        self.certificates["associative"] = {"ok": ok, "degree": m2}
        return ok

    def certify(self, m2: int) -> bool:
        return self.check_identity() and self.check_commutative() and self.check_associative(m2)


def _embed2to3(F: PSeries, positions, m2: int) -> PSeries:
    out = {}
    for (a, b), c in F.coeffs.items():
        e = [0, 0, 0]
        e[positions[0]] = a
        e[positions[1]] = b
        out[tuple(e)] = c
    return PSeries(F.prime, 3, m2, out, F.coeff_prec)


class Bracket:
    """An endomorphism exp(a * L) with derivative a at the origin."""

    __slots__ = ("a", "series")

    def __init__(self, a: PadicNum, series: PSeries):
        self.a = a
        self.series = series


def exp_from_log(logf: Logarithm) -> PSeries:
    """Compositional inverse of the logarithm (cached by callers)."""
    return logf.series.reversion()


def group_from_log(logf: Logarithm, x_prec=None) -> FormalGroupLaw:
    """F(x,y) = E(L(x) + L(y)) via Taylor orders A_j = E^(j)(L(x)).

    Raises IntegralityFailure when a coefficient certifies negative
    valuation; a merely unresolved coefficient raises with certified=False.
    """
    L = logf.series
    p = L.prime
    M = L.x_prec if x_prec is None else min(x_prec, L.x_prec)
    N = L.coeff_prec
    L = L.truncate(M)
    dlog = L.derivative()
    inv_dlog = dlog.inverse()
    # Taylor orders in x: A_0 = x, A_{j+1} = A_j' / L'
    acc: dict = {}
    A = PSeries.identity(p, M, N)
    Ly_pow = PSeries(p, 1, M, {(0,): PadicNum.one(p, N)}, N)  # L(y)^j
    factorial = 1
    for j in range(0, M):
        if j > 0:
            factorial *= j
        for (a,), ca in A.coeffs.items():
            for (b,), cb in Ly_pow.coeffs.items():
                if a + b >= M or (b == 0 and j > 0):
                    continue
                c = (ca * cb).div_int(factorial)
                key = (a, b)
                prev = acc.get(key)
                acc[key] = c if prev is None else prev + c
        if j + 1 >= M:
            break
        A = A.derivative() * inv_dlog
        if not A.coeffs:
            break
        Ly_pow = Ly_pow * L
        if not Ly_pow.coeffs:
            break
    F = PSeries(p, 2, M, acc, N)
    _raise_if_not_integral(F, "group law from logarithm")
    return FormalGroupLaw(F, "from-log")


def _raise_if_not_integral(F: PSeries, what: str):
    for e, c in F.coeffs.items():
        if c.val_floor() < 0:
            raise IntegralityFailure(
                f"{what}: coefficient at {e} has valuation floor {c.val_floor()}",
                exponents=e,
                certified=c.v != INF,
            )


def lubin_tate_lift(f: PSeries, x_prec: int) -> FormalGroupLaw:
    """Unique integral F with f(F(x,y)) = F(f(x), f(y)) and F = x+y mod deg 2.

    Solved degree by degree; the degree-d correction is the degree-d defect
    divided by f'(0)^d - f'(0), a scalar of valuation exactly 1 when
    v(f'(0)) = 1.  Non-integral corrections mean the preconditions fail and
    raise NonUniqueLift (certified) or PrecisionExhausted (unresolved).
    """
    p = f.prime
    D = x_prec
    N = f.coeff_prec
    c = f.linear_coeff()
    f = f.truncate(D)
    one = PadicNum.one(p, N)
    F = PSeries(p, 2, D, {(1, 0): one, (0, 1): one}, N)
    # univariate powers of f, reused for F(f(x), f(y)) at every stage
    fpow = [PSeries(p, 1, D, {(0,): one}, N), f]
    for _ in range(2, D):
        fpow.append(fpow[-1] * f)
    cpow = c
    for d in range(2, D):
        cpow = cpow * c  # c^d
        lhs = _compose_f_after(f, F, d + 1)
        rhs = _compose_pair(F, fpow, d + 1)
        defect = lhs - rhs
        denom = cpow - c
        corr = {}
        for (a, b), coeff in defect.coeffs.items():
            if a + b != d or coeff.is_zero_like():
                continue
            delta = coeff / denom
            if delta.val_floor() < 0:
                msg = f"no integral lift: degree-{d} correction at {(a, b)} has valuation {delta.val_floor()}"
                if delta.v != INF:
                    raise NonUniqueLift(msg)
                raise PrecisionExhausted(msg)
            corr[(a, b)] = delta
        if corr:
            F = F + PSeries(p, 2, D, corr, N)
    _raise_if_not_integral(F, "group law lift")
    return FormalGroupLaw(F, "lubin-tate-lift")


def _compose_f_after(f: PSeries, F: PSeries, trunc: int) -> PSeries:
    """f(F(x,y)) truncated to total degree < trunc."""
    return f.truncate(trunc).compose(F.truncate(trunc))


def _compose_pair(F: PSeries, fpow, trunc: int) -> PSeries:
    """F(f(x), f(y)) from cached univariate powers of f."""
    p = F.prime
    N = F.coeff_prec
    rows: dict = {}
    for (a, b), c in F.coeffs.items():
        if a + b >= trunc:
            continue
        rows.setdefault(b, {}).setdefault(a, []).append(c)
    acc: dict = {}
    for b, row in rows.items():
        if b >= len(fpow):
            continue
        fy = fpow[b].truncate(trunc)
        inner: dict = {}
        for a, cs in row.items():
            if a >= len(fpow):
                continue
            fx = fpow[a].truncate(trunc)
            for (i,), ci in fx.coeffs.items():
                t = ci * cs[0]
                prev = inner.get(i)
                inner[i] = t if prev is None else prev + t
        for i, ci in inner.items():
            if ci.is_zero_like() and ci.is_exact_zero():
                continue
            for (j,), cj in fy.coeffs.items():
                if i + j >= trunc:
                    continue
                t = ci * cj
                key = (i, j)
                prev = acc.get(key)
                acc[key] = t if prev is None else prev + t
    return PSeries(p, 2, trunc, acc, N)


def bracket(logf: Logarithm, a: PadicNum, exp_series: PSeries = None) -> Bracket:
    """The endomorphism [a] = E(a * L(x)) with derivative a."""
    if exp_series is None:
        exp_series = exp_from_log(logf)
    series = exp_series.compose(logf.series.scalar_mul(a))
    return Bracket(a, series)


def _is_xp_mod_p(series: PSeries, D: int) -> bool:
    p = series.prime
    red = series.truncate(D).reduce_mod_p()
    for (i,), c in red.coeffs.items():
        if c.is_zero_like():
            continue
        if i != p or c.u % p != 1:
            return False
    return not red.c((p,)).is_zero_like() if D > p else True


def frobenius_multiplier(logf: Logarithm, f: PSeries, exp_series: PSeries = None):
    """Recover the unique pi with v(pi) = 1 and [pi] = x^p mod p.

    Returns (pi, bracket_series) where pi carries only the digits the
    truncation window could pin (the digit at p^k needs degree p^(k+1)+1
    to be visible mod p) and the bracket is taken at the zero-filled
    candidate, which is a genuine endomorphism at full working precision.
    Raises NoCandidate when no digit passes and AmbiguousAtPrecision when
    several do.
    """
    p = f.prime
    M = f.x_prec
    N = f.coeff_prec
    if exp_series is None:
        exp_series = exp_from_log(logf)
    L = logf.series

    def candidate_bracket(unit_digits: int, D: int) -> PSeries:
        pi = PadicNum(p, 1, unit_digits, N)
        arg = L.truncate(D).scalar_mul(pi)
        return exp_series.truncate(D).compose(arg)

    unit = 0
    ndigits = 0
    k = 0
    while True:
        D = p ** (k + 1) + 1
        if D > M:
            break
        winners = []
        lo = 1 if k == 0 else 0
        for d in range(lo, p):
            cand = unit + d * p**k
            if cand == 0:
                continue
            if _is_xp_mod_p(candidate_bracket(cand, D), D):
                winners.append(d)
        if not winners:
            raise NoCandidate(
                f"no digit at p^{k} satisfies the Frobenius congruence below degree {D}"
            )
        if len(winners) > 1:
            raise AmbiguousAtPrecision(
                f"digits {winners} all satisfy the congruence below degree {D}; raise M"
            )
        unit += winners[0] * p**k
        ndigits += 1
        k += 1
    if ndigits == 0:
        raise NoCandidate("truncation order is too small to pin any digit; raise M")
    series = candidate_bracket(unit, M)
    if not _is_xp_mod_p(series, M):
        raise NoCandidate("recovered scalar fails the congruence at full truncation")
    _raise_if_not_integral(series, "Frobenius bracket")
    pi_report = PadicNum(p, 1, unit, 1 + ndigits)
    pi_full = PadicNum(p, 1, unit, N)
    if not series.c((1,)).congruent(pi_full):
        raise NoCandidate("bracket derivative does not match the recovered scalar")
    return pi_report, Bracket(pi_full, series)
