"""Truncated power series over p-adic scalars in one to three variables.

A series keeps the coefficients of all monomials of total degree < x_prec
in a dict keyed by exponent tuples.  An absent key is an exact zero; a
coefficient that merely vanished to its working precision stays stored, so
the truncation-honesty machinery downstream (Newton polygons) can see the
difference.  ``coeff_prec`` is the ambient p-adic precision used when
coercing plain integers or rationals into coefficients.

Substitution (``compose``) is defined for substituted series without
constant term; on such inputs truncation commutes with composition, so no
x-adic accuracy is lost beyond min(x_prec).
"""

from fractions import Fraction

from .errors import (
    ConstantTermError,
    NotInvertible,
    PrecisionExhausted,
    PrimeMismatch,
)
from .padic import INF, PadicNum, reduce_terms


def _deg(exps) -> int:
    return sum(exps)


class PSeries:
    """Dense truncated power series over PadicNum coefficients."""

    __slots__ = ("prime", "nvars", "x_prec", "coeffs", "coeff_prec")

    def __init__(self, prime, nvars, x_prec, coeffs, coeff_prec):
        if not 1 <= nvars <= 3:
            raise ValueError("1 to 3 variables supported")
        self.prime = prime
        self.nvars = nvars
        self.x_prec = x_prec
        self.coeff_prec = coeff_prec
        clean = {}
        for exps, c in coeffs.items():
            if len(exps) != nvars:
                raise ValueError("exponent tuple arity mismatch")
            if _deg(exps) >= x_prec:
                continue
            if isinstance(c, PadicNum):
                if c.p != prime:
                    raise PrimeMismatch("coefficient prime differs from series prime")
            else:
                c = PadicNum.from_fraction(Fraction(c), prime, coeff_prec)
            if not c.is_exact_zero():
                clean[exps] = c
        self.coeffs = clean

    # -- constructors ----------------------------------------------------

    @classmethod
    def zero(cls, p, nvars, M, N):
        return cls(p, nvars, M, {}, N)

    @classmethod
    def identity(cls, p, M, N):
        """The series x in one variable."""
        return cls(p, 1, M, {(1,): PadicNum.one(p, N)}, N)

    @classmethod
    def variable(cls, p, nvars, index, M, N):
        e = tuple(1 if i == index else 0 for i in range(nvars))
        return cls(p, nvars, M, {e: PadicNum.one(p, N)}, N)

    @classmethod
    def from_univariate_coeffs(cls, p, coeffs, M, N, shift=1):
        """Series sum_i coeffs[i] * x^(shift+i) from ints/Fractions."""
        d = {}
        for i, c in enumerate(coeffs):
            if _deg((shift + i,)) < M:
                d[(shift + i,)] = PadicNum.from_fraction(Fraction(c), p, N)
        return cls(p, 1, M, d, N)

    # -- basic access ------------------------------------------------------

    def c(self, exps) -> PadicNum:
        """Coefficient at an exponent tuple (exact zero when absent)."""
        if isinstance(exps, int):
            exps = (exps,)
        return self.coeffs.get(exps, PadicNum.exact_zero(self.prime))

    @property
    def s0(self) -> bool:
        """True when the constant term is exactly zero."""
        zero = (0,) * self.nvars
        return zero not in self.coeffs

    def linear_coeff(self) -> PadicNum:
        return self.c((1,) + (0,) * (self.nvars - 1))

    def support(self):
        return sorted(self.coeffs)

    def min_val_floor(self):
        """Least certified valuation lower bound over stored coefficients."""
        floors = [c.val_floor() for c in self.coeffs.values()]
        return min(floors) if floors else INF

    def __repr__(self):
        items = ", ".join(
            f"{exps}:{c!r}" for exps, c in sorted(self.coeffs.items())[:6]
        )
        more = "..." if len(self.coeffs) > 6 else ""
        return f"PSeries(p={self.prime}, M={self.x_prec}, {{{items}{more}}})"

    # -- compatibility ------------------------------------------------------

    def _align(self, other) -> "PSeries":
        if not isinstance(other, PSeries):
            raise TypeError("expected PSeries")
        if other.prime != self.prime:
            raise PrimeMismatch("mixed primes in series operation")
        if other.nvars != self.nvars:
            raise ValueError("mixed variable counts")
        return other

    # -- ring operations -----------------------------------------------------

    def __neg__(self):
        return PSeries(
            self.prime,
            self.nvars,
            self.x_prec,
            {e: -c for e, c in self.coeffs.items()},
            self.coeff_prec,
        )

    def __add__(self, other):
        other = self._align(other)
        M = min(self.x_prec, other.x_prec)
        out = {}
        for e in self.coeffs.keys() | other.coeffs.keys():
            if _deg(e) < M:
                out[e] = self.c(e) + other.c(e)
        return PSeries(self.prime, self.nvars, M, out, min(self.coeff_prec, other.coeff_prec))

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        other = self._align(other)
        M = min(self.x_prec, other.x_prec)
        p = self.prime
        acc: dict = {}
        a_items = list(self.coeffs.items())
        b_items = list(other.coeffs.items())
        if len(a_items) > len(b_items):
            a_items, b_items = b_items, a_items
        for ea, ca in a_items:
            da = _deg(ea)
            va, ua, na = ca.v, ca.u, ca.N
            for eb, cb in b_items:
                if da + _deg(eb) >= M:
                    continue
                e = tuple(x + y for x, y in zip(ea, eb))
                if cb.v == INF or va == INF:
                    triple = (INF, 0, ca.val_floor() + cb.val_floor())
                else:
                    rel = min(na - va, cb.N - cb.v)
                    triple = (va + cb.v, ua * cb.u, va + cb.v + rel)
                acc.setdefault(e, []).append(triple)
        out = {e: reduce_terms(p, terms) for e, terms in acc.items()}
        return PSeries(p, self.nvars, M, out, min(self.coeff_prec, other.coeff_prec))

    def scalar_mul(self, s) -> "PSeries":
        if not isinstance(s, PadicNum):
            s = PadicNum.from_fraction(Fraction(s), self.prime, self.coeff_prec)
        return PSeries(
            self.prime,
            self.nvars,
            self.x_prec,
            {e: c * s for e, c in self.coeffs.items()},
            self.coeff_prec,
        )

    def scalar_div_int(self, k: int) -> "PSeries":
        return PSeries(
            self.prime,
            self.nvars,
            self.x_prec,
            {e: c.div_int(k) for e, c in self.coeffs.items()},
            self.coeff_prec,
        )

    def derivative(self, var: int = 0) -> "PSeries":
        """Formal derivative in one variable; truncation order drops by 1."""
        out = {}
        for e, c in self.coeffs.items():
            k = e[var]
            if k == 0:
                continue
            e2 = tuple(x - 1 if i == var else x for i, x in enumerate(e))
            out[e2] = c * k
        return PSeries(self.prime, self.nvars, self.x_prec - 1, out, self.coeff_prec)

    def truncate(self, M: int) -> "PSeries":
        if M >= self.x_prec:
            return self
        return PSeries(
            self.prime,
            self.nvars,
            M,
            {e: c for e, c in self.coeffs.items() if _deg(e) < M},
            self.coeff_prec,
        )

    def cap_coeff_prec(self, N) -> "PSeries":
        return PSeries(
            self.prime,
            self.nvars,
            self.x_prec,
            {e: c.cap_prec(N) for e, c in self.coeffs.items()},
            min(self.coeff_prec, N),
        )

    def __pow__(self, k: int) -> "PSeries":
        if k < 0:
            raise ValueError("negative series power")
        out = PSeries(
            self.prime,
            self.nvars,
            self.x_prec,
            {(0,) * self.nvars: PadicNum.one(self.prime, self.coeff_prec)},
            self.coeff_prec,
        )
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base if k > 1 else base
            k >>= 1
        return out

    # -- composition ------------------------------------------------------------

    def compose(self, args) -> "PSeries":
        """Substitute one series per variable; substituted series need g(0)=0."""
        if isinstance(args, PSeries):
            args = (args,)
        if len(args) != self.nvars:
            raise ValueError("arity mismatch in composition")
        nv = args[0].nvars
        p = self.prime
        for h in args:
            if h.prime != p:
                raise PrimeMismatch("mixed primes in composition")
            if h.nvars != nv:
                raise ValueError("substituted series must share a variable count")
            const = h.c((0,) * nv)
            if not const.is_exact_zero():
                raise ConstantTermError("substituted series has a constant term")
        M = min([self.x_prec] + [h.x_prec for h in args])
        if self.nvars == 1:
            return _compose_1var(self, args[0], M)
        if self.nvars == 2:
            return _compose_2var(self, args[0], args[1], M)
        raise ValueError("composition with a 3-variable outer series is not supported")

    def reversion(self) -> "PSeries":
        """Compositional inverse h with h(g(x)) = x = g(h(x)) to truncation.

        Solved degree by degree from rev(g(x)) = x against the powers of g;
        each step divides by g'(0)^n, so a non-unit linear coefficient costs
        n*v(g'(0)) digits at degree n (recorded by the scalars themselves).
        """
        if self.nvars != 1:
            raise ValueError("reversion is univariate")
        if not self.s0:
            raise ConstantTermError("reversion requires zero constant term")
        a1 = self.linear_coeff()
        if a1.is_zero_like():
            raise NotInvertible("linear coefficient is zero to precision")
        M = self.x_prec
        p = self.prime
        pows = [None, self]
        for k in range(2, M):
            pows.append(pows[-1] * self)
        rev = {(1,): PadicNum.one(p, self.coeff_prec) / a1}
        a1pow = a1
        for n in range(2, M):
            a1pow = a1pow * a1
            s = [(INF, 0, INF)]
            for k in range(1, n):
                t = rev.get((k,))
                if t is None:
                    continue
                f = pows[k].c((n,))
                prod = t * f
                s.append((prod.v, prod.u, prod.N))
            total = reduce_terms(p, s)
            if not total.is_exact_zero():
                rev[(n,)] = -total / a1pow
        return PSeries(p, 1, M, rev, self.coeff_prec)

    def inverse(self) -> "PSeries":
        """Multiplicative inverse of a series with unit constant term."""
        if self.nvars != 1:
            raise ValueError("series inverse is univariate")
        a0 = self.c((0,))
        if a0.is_zero_like() or a0.v != 0:
            raise NotInvertible("constant term is not a unit")
        M = self.x_prec
        p = self.prime
        inv = {(0,): PadicNum.one(p, self.coeff_prec) / a0}
        for n in range(1, M):
            s = [(INF, 0, INF)]
            for k in range(1, n + 1):
                ak = self.coeffs.get((k,))
                bk = inv.get((n - k,))
                if ak is None or bk is None:
                    continue
                prod = ak * bk
                s.append((prod.v, prod.u, prod.N))
            total = reduce_terms(p, s)
            if not total.is_exact_zero():
                inv[(n,)] = -total / a0
        return PSeries(p, 1, M, inv, self.coeff_prec)

    # -- reduction and shape mod p -------------------------------------------

    def reduce_mod_p(self) -> "PSeries":
        """Image in F_p[[x]]: every coefficient reduced modulo p (precision 1)."""
        p = self.prime
        out = {}
        for e, c in self.coeffs.items():
            if c.val_floor() < 1 and c.v == INF:
                raise PrecisionExhausted("coefficient unresolved modulo p")
            if c.v == 0:
                out[e] = PadicNum(p, 0, c.u % p, 1)
        return PSeries(p, self.nvars, self.x_prec, out, 1)

    def weierstrass_degree(self):
        """Least index with a unit coefficient, or None below the truncation."""
        if self.nvars != 1:
            raise ValueError("weierstrass degree is univariate")
        best = None
        for (i,), c in self.coeffs.items():
            if c.v == 0 and (best is None or i < best):
                best = i
        return best

    def mod_p_form(self):
        """Write a nonzero mod-p series as a(x^(p^h)) with h maximal.

        Returns (a, h, invertible) where invertible reports a'(0) != 0.
        """
        if self.nvars != 1:
            raise ValueError("mod-p form is univariate")
        exps = [e for (e,), c in self.coeffs.items() if not c.is_zero_like()]
        if not exps:
            raise ValueError("zero series has no mod-p form")
        if 0 in exps:
            raise ValueError("mod-p form requires zero constant term")
        p = self.prime
        h = 0
        while all(e % p ** (h + 1) == 0 for e in exps):
            h += 1
        q = p**h
        a = PSeries(
            p,
            1,
            (self.x_prec - 1) // q + 1,
            {(e // q,): c for (e,), c in self.coeffs.items()},
            self.coeff_prec,
        )
        invertible = not a.c((1,)).is_zero_like()
        return a, h, invertible

    # -- variable plumbing ------------------------------------------------------

    def embed(self, nvars: int, index: int) -> "PSeries":
        """View a univariate series as a series in variable `index` of nvars."""
        if self.nvars != 1:
            raise ValueError("embed expects a univariate series")
        out = {}
        for (e,), c in self.coeffs.items():
            key = tuple(e if i == index else 0 for i in range(nvars))
            out[key] = c
        return PSeries(self.prime, nvars, self.x_prec, out, self.coeff_prec)

    def set_var_zero(self, index: int) -> "PSeries":
        """Substitute 0 for one variable, dropping it from the ring."""
        out = {}
        for e, c in self.coeffs.items():
            if e[index] != 0:
                continue
            key = tuple(x for i, x in enumerate(e) if i != index)
            out[key] = c
        return PSeries(self.prime, self.nvars - 1, self.x_prec, out, self.coeff_prec)

    def swap_vars(self, i: int, j: int) -> "PSeries":
        out = {}
        for e, c in self.coeffs.items():
            le = list(e)
            le[i], le[j] = le[j], le[i]
            out[tuple(le)] = c
        return PSeries(self.prime, self.nvars, self.x_prec, out, self.coeff_prec)

    def equal_to_precision(self, other, prec=None) -> bool:
        """Coefficient-wise congruence at the lesser declared precision."""
        other = self._align(other)
        M = min(self.x_prec, other.x_prec)
        for e in self.coeffs.keys() | other.coeffs.keys():
            if _deg(e) >= M:
                continue
            if not self.c(e).congruent(other.c(e), prec):
                return False
        return True

    # -- serialization ------------------------------------------------------------

    def to_json(self) -> dict:
        entries = []
        for e, c in sorted(self.coeffs.items()):
            if c.is_zero_like():
                continue
            frac = c.as_fraction()
            s = str(frac.numerator) if frac.denominator == 1 else str(frac)
            entries.append([list(e), s])
        return {"p": self.prime, "M": self.x_prec, "N": self.coeff_prec, "coeffs": entries}

    @classmethod
    def from_json(cls, obj: dict) -> "PSeries":
        p = int(obj["p"])
        M = int(obj["M"])
        N = int(obj["N"])
        coeffs = {}
        nvars = 1
        for exps, s in obj["coeffs"]:
            exps = tuple(int(e) for e in exps)
            nvars = max(nvars, len(exps))
            coeffs[exps] = PadicNum.from_fraction(Fraction(s), p, N)
        return cls(p, nvars, M, coeffs, N)


def _compose_1var(g: PSeries, h: PSeries, M: int) -> PSeries:
    """Horner evaluation of a univariate g at h (no constant in h)."""
    p = g.prime
    N = min(g.coeff_prec, h.coeff_prec)
    h = h.truncate(M)
    top = max((e for (e,) in g.coeffs), default=0)
    top = min(top, M - 1)
    zero_e = (0,) * h.nvars
    acc = PSeries.zero(p, h.nvars, M, N)
    wrote = False
    for i in range(top, 0, -1):
        if wrote:
            acc = acc * h
        ci = g.coeffs.get((i,))
        if ci is not None:
            acc = acc + PSeries(p, h.nvars, M, {zero_e: ci}, N)
            wrote = True
    if not wrote:
        return PSeries.zero(p, h.nvars, M, N)
    res = acc * h
    c0 = g.coeffs.get((0,))
    if c0 is not None:
        res = res + PSeries(p, h.nvars, M, {zero_e: c0}, N)
    return res


def _compose_2var(g: PSeries, h1: PSeries, h2: PSeries, M: int) -> PSeries:
    """Evaluate a 2-variable g at (h1, h2) by Horner along the second variable."""
    p = g.prime
    N = min(g.coeff_prec, h1.coeff_prec, h2.coeff_prec)
    h1 = h1.truncate(M)
    h2 = h2.truncate(M)
    rows: dict = {}
    for (a, b), c in g.coeffs.items():
        rows.setdefault(b, {})[(a,)] = c
    if not rows:
        return PSeries.zero(p, h1.nvars, M, N)
    top = max(rows)
    acc = None
    for b in range(top, -1, -1):
        if acc is not None:
            acc = acc * h2
        row = rows.get(b)
        if row is not None:
            row_series = PSeries(p, 1, M, row, N)
            val = _compose_1var(row_series, h1, M)
            acc = val if acc is None else acc + val
    return acc if acc is not None else PSeries.zero(p, h1.nvars, M, N)
