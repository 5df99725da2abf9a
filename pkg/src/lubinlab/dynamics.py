"""Dynamics of a commuting pair (f, u) on the p-adic open unit disk.

f is a noninvertible integral series with f'(0) of valuation one and p
roots in the open disk; u is an invertible series of infinite order
commuting with f.  The central object is the logarithm of f: the unique
series L with L'(0) = 1 and L(f(x)) = f'(0) L(x).  Every series commuting
with f shares the same logarithm, and conjugation by it linearizes the
whole centralizer, which is what makes Z_p-iterates of u computable.

Two constructions of the logarithm are provided.  The functional-equation
recurrence is the workhorse (deterministic per-coefficient precision
ledger); the normalized-iterate limit f^n / f'(0)^n is retained purely as
an independent cross-check oracle, with its certified precision taken from
the ultrametric Cauchy estimate on the last observed increments.
"""

from fractions import Fraction

from .errors import (
    DomainError,
    NoStabilization,
    NotInvertible,
    PrecisionExhausted,
    TorsionDetected,
    TruncationInconclusive,
)
from .padic import INF, PadicNum, is_root_of_unity, padic_pow, reduce_terms
from .series import PSeries
from .polygon import iterate


class CommutingPair:
    """A certified pair: f noninvertible, u invertible, f∘u = u∘f.

    Construction re-derives and checks the hypotheses; failures raise
    (ValueError for structural problems, TorsionDetected for torsion u).
    """

    __slots__ = ("f", "u", "gamma", "fprime0", "commute_degree")

    def __init__(self, f: PSeries, u: PSeries, check: bool = True):
        self.f = f
        self.u = u
        self.fprime0 = f.linear_coeff()
        self.gamma = u.linear_coeff()
        self.commute_degree = None
        if not check:
            return
        if f.min_val_floor() < 0 or u.min_val_floor() < 0:
            raise ValueError("pair must be integral to precision")
        if not f.s0 or not u.s0:
            raise ValueError("pair must have zero constant terms")
        if self.fprime0.val_floor() != 1:
            raise ValueError("f'(0) must have valuation exactly 1")
        if self.gamma.is_zero_like() or self.gamma.v != 0:
            raise NotInvertible("u'(0) must be a unit")
        wdeg = f.reduce_mod_p().weierstrass_degree()
        if wdeg != f.prime:
            raise ValueError(
                f"first unit coefficient of f sits at {wdeg}, expected p={f.prime}"
            )
        ok, first_bad, certified = check_commute(f, u)
        if not ok:
            raise ValueError(f"pair does not commute (first defect at degree {first_bad})")
        self.commute_degree = certified


def check_commute(f: PSeries, u: PSeries):
    """Compare f∘u with u∘f coefficient-wise at the working precision.

    Returns (ok, first_defect_degree, max_degree_certified).
    """
    fu = f.compose(u)
    uf = u.compose(f)
    M = min(fu.x_prec, uf.x_prec)
    first_bad = None
    for i in range(1, M):
        if not fu.c((i,)).congruent(uf.c((i,))):
            first_bad = i
            break
    if first_bad is None:
        return True, None, M - 1
    return False, first_bad, first_bad - 1


class Logarithm:
    """The logarithm of f with construction metadata.

    ``series`` has linear coefficient 1 and satisfies series∘f = f'(0)·series
    to precision.  ``stabilization`` (limit method only) records, per
    iteration, the least valuation of the increment between consecutive
    normalized iterates.
    """

    __slots__ = ("series", "method", "fprime0", "stabilization")

    def __init__(self, series, method, fprime0, stabilization=None):
        self.series = series
        self.method = method
        self.fprime0 = fprime0
        self.stabilization = stabilization


def logarithm_recurrence(f: PSeries) -> Logarithm:
    """Solve L(f(x)) = f'(0) L(x) degree by degree with L'(0) = 1.

    Degree n costs one division by f'(0)^n - f'(0); with v(f'(0)) = 1 that
    denominator has valuation exactly 1, and the per-coefficient ledger of
    the scalars records the cumulative loss.
    """
    p = f.prime
    M = f.x_prec
    c = f.linear_coeff()
    if c.is_zero_like():
        raise NotInvertible("f'(0) is zero to precision")
    if c.v == 0:
        torsion, _ = is_root_of_unity(c)
        if torsion:
            raise DomainError("f'(0) must not be a root of unity")
    fpow = [None, f]
    for k in range(2, M):
        fpow.append(fpow[-1] * f)
    coeffs = {(1,): PadicNum.one(p, f.coeff_prec)}
    cpow = c
    for n in range(2, M):
        cpow = cpow * c  # c^n
        terms = [(INF, 0, INF)]
        for k in range(1, n):
            ak = coeffs.get((k,))
            if ak is None:
                continue
            fk = fpow[k].c((n,))
            prod = ak * fk
            terms.append((prod.v, prod.u, prod.N))
        s = reduce_terms(p, terms)
        denom = cpow - c
        if denom.is_zero_like():
            raise PrecisionExhausted(f"recurrence denominator vanishes at degree {n}")
        an = -s / denom
        if not an.is_exact_zero():
            coeffs[(n,)] = an
    series = PSeries(p, 1, M, coeffs, f.coeff_prec)
    return Logarithm(series, "recurrence", c)


def logarithm_limit(f: PSeries, n_max: int = None) -> Logarithm:
    """Limit of the normalized iterates f^n / f'(0)^n.

    Runs until consecutive normalized iterates are indistinguishable at
    their stored precision or n_max is reached.  Each returned coefficient
    is capped at the valuation of its last observed increment (Cauchy
    estimate), so downstream comparisons happen at certified digits only.
    """
    p = f.prime
    M = f.x_prec
    c = f.linear_coeff()
    if n_max is None:
        n_max = 2 * _ceil_log(M, p) + 4
    ident = PSeries.identity(p, M, f.coeff_prec)
    if n_max == 0:
        return Logarithm(ident, "iterate-limit", c, stabilization=[])
    prev = ident
    prev_norm = ident
    evidence = []
    last_incr = None
    fn = ident
    for n in range(1, n_max + 1):
        fn = f.compose(fn)
        cn = c**n
        norm = PSeries(
            p, 1, M, {e: coeff / cn for e, coeff in fn.coeffs.items()}, f.coeff_prec
        )
        diff = norm - prev_norm
        floors = [x.val_floor() for x in diff.coeffs.values()]
        incr = min(floors) if floors else INF
        evidence.append((n, incr))
        stable = all(x.is_zero_like() for x in diff.coeffs.values())
        prev_norm, prev = norm, fn
        last_incr = diff
        if stable:
            return Logarithm(norm, "iterate-limit", c, stabilization=evidence)
    if len(evidence) >= 2 and evidence[-1][1] <= evidence[0][1]:
        raise NoStabilization(f"no stabilization after {n_max} iterates")
    capped = {}
    for e, coeff in prev_norm.coeffs.items():
        d = last_incr.c(e)
        cap = d.val_floor()
        if cap == INF:
            capped[e] = coeff
        elif cap <= 0:
            raise NoStabilization(
                f"coefficient {e} certifies no digits after {n_max} iterates"
            )
        else:
            capped[e] = coeff.cap_prec(cap)
    series = PSeries(p, 1, M, capped, f.coeff_prec)
    return Logarithm(series, "iterate-limit", c, stabilization=evidence)


def _ceil_log(M: int, p: int) -> int:
    k, q = 0, 1
    while q < M:
        q *= p
        k += 1
    return k


def dlog_integrality(logf: Logarithm) -> bool:
    """True iff every coefficient of log' certifies valuation >= 0."""
    d = logf.series.derivative()
    return all(c.val_floor() >= 0 for c in d.coeffs.values())


def normalize_u(pair: CommutingPair):
    """Replace u by the minimal iterate with u'(0) = 1 mod p (mod 4 if p=2).

    Returns (normalized_pair, e) with e the iterate taken: the order of
    u'(0) in (Z/p)^x, doubled when p = 2 and u'(0) = 3 mod 4.  After this,
    v_p((1-u'(0))^m) = v_p(1-u'(0)) + v_p(m) for all m, which is exactly
    what the Z_p-iteration needs.  Raises TorsionDetected when u'(0) is a
    root of unity to precision; the flag on the exception records whether
    the matching iterate of u is itself the identity to precision.
    """
    p = pair.f.prime
    gamma = pair.gamma
    torsion, order = is_root_of_unity(gamma)
    if torsion:
        ue = iterate(pair.u, order)
        ident = PSeries.identity(p, pair.u.x_prec, pair.u.coeff_prec)
        is_id = ue.equal_to_precision(ident)
        raise TorsionDetected(
            f"u'(0) is a root of unity of order {order} to precision "
            f"O({p}^{gamma.N})",
            identity_to_precision=is_id,
        )
    if p == 2:
        e = 2 if gamma.u % 4 == 3 else 1
    else:
        e = 1
        acc = gamma.u % p
        while acc != 1:
            acc = acc * (gamma.u % p) % p
            e += 1
    if e == 1:
        return pair, 1
    ue = iterate(pair.u, e)
    new = CommutingPair(pair.f, ue, check=False)
    new.commute_degree = pair.commute_degree
    return new, e


def zp_iterate(pair: CommutingPair, logf: Logarithm, a, exp_series: PSeries = None) -> PSeries:
    """The Z_p-iterate of u with derivative u'(0)^a: rev(L)(u'(0)^a · L(x)).

    a may be an integer or a scalar in Z_p; for p-adic a the pair must be
    normalized so that u'(0) is a 1-unit.
    """
    gamma_a = padic_pow(pair.gamma, a)
    if exp_series is None:
        exp_series = logf.series.reversion()
    return exp_series.compose(logf.series.scalar_mul(gamma_a))


def ramification_index(omega: PSeries, n_max: int):
    """Estimate sequence for the absolute ramification index of an invertible
    mod-p series with derivative 1.

    Returns (estimates, stabilized): estimates[n] = (p-1)·i(n)/p^(n+1) as an
    exact rational, where i(n) is the x-adic valuation of the p^n-th iterate
    minus the identity; stabilized reports whether the last two agree.
    """
    p = omega.prime
    if omega.nvars != 1:
        raise ValueError("ramification index is univariate")
    gamma = omega.linear_coeff()
    if gamma.is_zero_like() or gamma.v != 0:
        raise NotInvertible("series must be invertible")
    if not gamma.congruent(PadicNum.one(p, 1), 1):
        raise DomainError("derivative at 0 must be 1 mod p")
    ident = PSeries.identity(p, omega.x_prec, omega.coeff_prec)
    if omega.equal_to_precision(ident):
        raise DomainError("series is the identity below the truncation order")
    estimates = []
    current = omega  # omega^(p^n)
    for n in range(0, n_max + 1):
        diff = current - ident
        support = [e[0] for e, c in diff.coeffs.items() if not c.is_zero_like()]
        if not support:
            raise TruncationInconclusive(
                f"iterate p^{n} is the identity below degree {omega.x_prec}"
            )
        i_n = min(support)
        estimates.append(Fraction((p - 1) * i_n, p ** (n + 1)))
        if n < n_max:
            nxt = current
            for _ in range(p - 1):
                nxt = current.compose(nxt)
            current = nxt
    stabilized = len(estimates) >= 2 and estimates[-1] == estimates[-2]
    return estimates, stabilized
