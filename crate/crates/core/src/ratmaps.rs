//! Exact rational maps `P^1 → P^1` over `ℚ(√-2)`.
//!
//! Everything is one-variable: points at infinity are handled through the
//! local degree rather than homogeneous coordinates. Rational maps over `ℚ`
//! are the special case where every coefficient has zero `√-2` part.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use thiserror::Error;

use crate::scalar::{fmt_rat, frac, rat, BigInt, BigRat};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RatmapError {
    #[error("degenerate: the map is constant")]
    Degenerate,
    #[error("zero denominator")]
    ZeroDenominator,
    #[error("singular Möbius transformation")]
    SingularMobius,
    #[error("derivation inconsistency: {0}")]
    DerivationInconsistency(String),
}

/// `u + v·√-2`.
#[derive(Debug, Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct QuadExtScalar {
    pub u: BigRat,
    pub v: BigRat,
}

impl QuadExtScalar {
    pub fn new(u: BigRat, v: BigRat) -> Self {
        Self { u, v }
    }

    pub fn rational(u: BigRat) -> Self {
        Self::new(u, BigRat::zero())
    }

    pub fn int(n: i64) -> Self {
        Self::rational(rat(n))
    }

    pub fn sqrt_minus_two() -> Self {
        Self::new(BigRat::zero(), BigRat::one())
    }

    pub fn is_zero(&self) -> bool {
        self.u.is_zero() && self.v.is_zero()
    }

    pub fn is_rational(&self) -> bool {
        self.v.is_zero()
    }

    pub fn conj(&self) -> Self {
        Self::new(self.u.clone(), -&self.v)
    }

    /// `u² + 2v²`.
    pub fn norm(&self) -> BigRat {
        &self.u * &self.u + rat(2) * &self.v * &self.v
    }

    /// Panics on zero.
    pub fn inv(&self) -> Self {
        let n = self.norm();
        assert!(!n.is_zero(), "inverse of zero in ℚ(√-2)");
        Self::new(&self.u / &n, -&self.v / &n)
    }

    /// A square root inside `ℚ(√-2)`, if one exists.
    pub fn sqrt(&self) -> Option<Self> {
        if self.v.is_zero() {
            if !self.u.is_negative() {
                return rat_sqrt(&self.u).map(Self::rational);
            }
            let y = rat_sqrt(&(-&self.u / rat(2)))?;
            return Some(Self::new(BigRat::zero(), y));
        }
        // (x + y√-2)² = x² - 2y² + 2xy√-2, and x² + 2y² = sqrt(norm).
        let n = rat_sqrt(&self.norm())?;
        let x = rat_sqrt(&((&self.u + &n) / rat(2)))?;
        let y = rat_sqrt(&((&n - &self.u) / rat(4)))?;
        let y = if (rat(2) * &x * &y) == self.v { y } else { -y };
        let root = Self::new(x, y);
        (&root * &root == *self).then_some(root)
    }
}

fn rat_sqrt(q: &BigRat) -> Option<BigRat> {
    if q.is_negative() {
        return None;
    }
    let (n, d) = (q.numer().sqrt(), q.denom().sqrt());
    (&n * &n == *q.numer() && &d * &d == *q.denom()).then(|| BigRat::new(n, d))
}

impl fmt::Display for QuadExtScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.u.is_zero(), self.v.is_zero()) {
            (_, true) => write!(f, "{}", fmt_rat(&self.u)),
            (true, false) => write!(f, "{}·√-2", fmt_rat(&self.v)),
            (false, false) => {
                let sign = if self.v.is_negative() { "-" } else { "+" };
                write!(
                    f,
                    "{} {sign} {}·√-2",
                    fmt_rat(&self.u),
                    fmt_rat(&self.v.abs())
                )
            }
        }
    }
}

impl Add for &QuadExtScalar {
    type Output = QuadExtScalar;
    fn add(self, o: &QuadExtScalar) -> QuadExtScalar {
        QuadExtScalar::new(&self.u + &o.u, &self.v + &o.v)
    }
}

impl Sub for &QuadExtScalar {
    type Output = QuadExtScalar;
    fn sub(self, o: &QuadExtScalar) -> QuadExtScalar {
        QuadExtScalar::new(&self.u - &o.u, &self.v - &o.v)
    }
}

impl Mul for &QuadExtScalar {
    type Output = QuadExtScalar;
    fn mul(self, o: &QuadExtScalar) -> QuadExtScalar {
        QuadExtScalar::new(
            &self.u * &o.u - rat(2) * &self.v * &o.v,
            &self.u * &o.v + &self.v * &o.u,
        )
    }
}

impl Div for &QuadExtScalar {
    type Output = QuadExtScalar;
    #[allow(clippy::suspicious_arithmetic_impl)]
    fn div(self, o: &QuadExtScalar) -> QuadExtScalar {
        self * &o.inv()
    }
}

impl Neg for &QuadExtScalar {
    type Output = QuadExtScalar;
    fn neg(self) -> QuadExtScalar {
        QuadExtScalar::new(-&self.u, -&self.v)
    }
}

macro_rules! forward_owned {
    ($t:ty; $($tr:ident $m:ident),*) => {$(
        impl $tr<$t> for $t {
            type Output = $t;
            fn $m(self, o: $t) -> $t { (&self).$m(&o) }
        }
        impl $tr<&$t> for $t {
            type Output = $t;
            fn $m(self, o: &$t) -> $t { (&self).$m(o) }
        }
    )*};
}

forward_owned!(QuadExtScalar; Add add, Sub sub, Mul mul, Div div);

/// Dense polynomial in `t`, lowest degree first, no trailing zeros.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Poly {
    c: Vec<QuadExtScalar>,
}

impl Poly {
    pub fn new(mut c: Vec<QuadExtScalar>) -> Self {
        while c.last().is_some_and(QuadExtScalar::is_zero) {
            c.pop();
        }
        Self { c }
    }

    /// From integer coefficients, lowest degree first.
    pub fn from_ints(c: &[i64]) -> Self {
        Self::new(c.iter().map(|&x| QuadExtScalar::int(x)).collect())
    }

    pub fn constant(k: QuadExtScalar) -> Self {
        Self::new(vec![k])
    }

    pub fn one() -> Self {
        Self::constant(QuadExtScalar::int(1))
    }

    /// `t - r`.
    pub fn linear_root(r: &QuadExtScalar) -> Self {
        Self::new(vec![-r, QuadExtScalar::int(1)])
    }

    pub fn coeffs(&self) -> &[QuadExtScalar] {
        &self.c
    }

    pub fn coeff(&self, i: usize) -> QuadExtScalar {
        self.c.get(i).cloned().unwrap_or_default()
    }

    pub fn is_zero(&self) -> bool {
        self.c.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        self.c.len().checked_sub(1)
    }

    fn deg0(&self) -> usize {
        self.degree().unwrap_or(0)
    }

    pub fn lead(&self) -> Option<&QuadExtScalar> {
        self.c.last()
    }

    pub fn is_rational(&self) -> bool {
        self.c.iter().all(QuadExtScalar::is_rational)
    }

    pub fn conj(&self) -> Self {
        Self::new(self.c.iter().map(QuadExtScalar::conj).collect())
    }

    pub fn scale(&self, k: &QuadExtScalar) -> Self {
        Self::new(self.c.iter().map(|x| x * k).collect())
    }

    pub fn monic(&self) -> Self {
        match self.lead() {
            Some(l) => self.scale(&l.inv()),
            None => Self::default(),
        }
    }

    pub fn eval(&self, x: &QuadExtScalar) -> QuadExtScalar {
        self.c
            .iter()
            .rev()
            .fold(QuadExtScalar::default(), |acc, k| &(&acc * x) + k)
    }

    pub fn derivative(&self) -> Self {
        Self::new(
            self.c
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, k)| k * &QuadExtScalar::int(i as i64))
                .collect(),
        )
    }

    pub fn pow(&self, e: u32) -> Self {
        (0..e).fold(Self::one(), |acc, _| &acc * self)
    }

    /// `t^n · p(1/t)`, requires `n >= deg p`.
    pub fn reversed(&self, n: usize) -> Self {
        assert!(self.degree().is_none_or(|d| d <= n));
        let mut c = self.c.clone();
        c.resize(n + 1, QuadExtScalar::default());
        c.reverse();
        Self::new(c)
    }

    /// Panics on a zero divisor.
    pub fn divrem(&self, d: &Self) -> (Self, Self) {
        let dd = d.degree().expect("division by the zero polynomial");
        let inv = d.lead().unwrap().inv();
        let mut r = self.c.clone();
        let mut q = vec![QuadExtScalar::default(); self.c.len().saturating_sub(dd)];
        for k in (dd..r.len()).rev() {
            let factor = &r[k] * &inv;
            if factor.is_zero() {
                continue;
            }
            for (j, dc) in d.c.iter().enumerate() {
                let idx = k - dd + j;
                r[idx] = &r[idx] - &(&factor * dc);
            }
            q[k - dd] = factor;
        }
        r.truncate(dd);
        (Self::new(q), Self::new(r))
    }

    pub fn div_exact(&self, d: &Self) -> Self {
        let (q, r) = self.divrem(d);
        debug_assert!(r.is_zero(), "inexact polynomial division");
        q
    }

    /// Monic gcd; `gcd(0, 0) = 0`.
    pub fn gcd(&self, other: &Self) -> Self {
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let r = a.divrem(&b).1;
            a = b;
            b = r;
        }
        a.monic()
    }

    /// Multiplicity of `r` as a root.
    pub fn order_at(&self, r: &QuadExtScalar) -> u32 {
        if self.is_zero() {
            return u32::MAX;
        }
        let lin = Self::linear_root(r);
        let mut p = self.clone();
        let mut k = 0;
        loop {
            let (q, rem) = p.divrem(&lin);
            if !rem.is_zero() {
                return k;
            }
            p = q;
            k += 1;
        }
    }

    /// Yun's algorithm: monic square-free factors with their multiplicities.
    pub fn square_free_decomposition(&self) -> Vec<(Poly, u32)> {
        let mut out = Vec::new();
        if self.deg0() == 0 {
            return out;
        }
        let f = self.monic();
        let fp = f.derivative();
        let a0 = f.gcd(&fp);
        let mut b = f.div_exact(&a0);
        let mut d = &fp.div_exact(&a0) - &b.derivative();
        let mut i = 1;
        while b.deg0() > 0 {
            let a = b.gcd(&d);
            b = b.div_exact(&a);
            let c = d.div_exact(&a);
            d = &c - &b.derivative();
            if a.deg0() > 0 {
                out.push((a, i));
            }
            i += 1;
        }
        out
    }

    /// For a rational polynomial: the primitive integer multiple with positive leading coefficient.
    pub fn primitive_integer(&self) -> Option<Vec<BigInt>> {
        if !self.is_rational() || self.is_zero() {
            return None;
        }
        let l = self
            .c
            .iter()
            .fold(BigInt::one(), |acc, k| acc.lcm(k.u.denom()));
        let ints: Vec<BigInt> = self
            .c
            .iter()
            .map(|k| (&k.u * BigRat::from_integer(l.clone())).to_integer())
            .collect();
        let mut g = ints.iter().fold(BigInt::zero(), |acc, x| acc.gcd(x));
        if ints.last().unwrap().is_negative() {
            g = -g;
        }
        Some(ints.into_iter().map(|x| x / &g).collect())
    }

    /// Roots in `ℚ(√-2)` with multiplicity; factors that do not split are kept aside.
    pub fn roots(&self) -> Roots {
        let mut out = Roots::default();
        for (s, m) in self.square_free_decomposition() {
            let mut rest = s.clone();
            for r in rational_roots(&s) {
                let r = QuadExtScalar::rational(r);
                rest = rest.div_exact(&Poly::linear_root(&r));
                out.roots.push((r, m));
            }
            match rest.deg0() {
                0 => {}
                1 => out.roots.push((&(-&rest.c[0]) / &rest.c[1], m)),
                2 => match quadratic_roots(&rest) {
                    Some([x, y]) => {
                        out.roots.push((x, m));
                        out.roots.push((y, m));
                    }
                    None => out.unresolved.push((rest, m)),
                },
                _ => out.unresolved.push((rest, m)),
            }
        }
        out.roots.sort();
        out
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Roots {
    pub roots: Vec<(QuadExtScalar, u32)>,
    /// Square-free factors without roots found in `ℚ(√-2)`, with multiplicity.
    pub unresolved: Vec<(Poly, u32)>,
}

impl Roots {
    pub fn unresolved_degree(&self) -> u32 {
        self.unresolved
            .iter()
            .map(|(p, m)| p.deg0() as u32 * m)
            .sum()
    }
}

fn quadratic_roots(p: &Poly) -> Option<[QuadExtScalar; 2]> {
    let (c, b, a) = (&p.c[0], &p.c[1], &p.c[2]);
    let disc = b * b - &(&QuadExtScalar::int(4) * &(a * c));
    let s = disc.sqrt()?;
    let two_a = &QuadExtScalar::int(2) * a;
    let mut r = [(&(-b) + &s) / two_a.clone(), (&(-b) - &s) / two_a];
    r.sort();
    Some(r)
}

/// Candidate search by the rational root theorem on `s·s̄`, which has rational
/// coefficients and the same rational roots as `s`.
fn rational_roots(s: &Poly) -> Vec<BigRat> {
    let q = if s.is_rational() {
        s.clone()
    } else {
        s * &s.conj()
    };
    let Some(mut ints) = q.primitive_integer() else {
        return Vec::new();
    };
    let mut found = BTreeSet::new();
    if ints[0].is_zero() {
        found.insert(BigRat::zero());
        let k = ints.iter().position(|x| !x.is_zero()).unwrap();
        ints.drain(..k);
    }
    if ints.len() > 1 {
        if let (Some(ps), Some(qs)) = (divisors(&ints[0]), divisors(ints.last().unwrap())) {
            for p in &ps {
                for d in &qs {
                    for cand in [
                        BigRat::new(p.clone(), d.clone()),
                        BigRat::new(-p, d.clone()),
                    ] {
                        if !found.contains(&cand) && eval_int_poly(&ints, &cand).is_zero() {
                            found.insert(cand);
                        }
                    }
                }
            }
        }
    }
    found
        .into_iter()
        .filter(|r| s.eval(&QuadExtScalar::rational(r.clone())).is_zero())
        .collect()
}

fn eval_int_poly(c: &[BigInt], x: &BigRat) -> BigRat {
    c.iter().rev().fold(BigRat::zero(), |acc, k| {
        acc * x + BigRat::from_integer(k.clone())
    })
}

const TRIAL_DIVISION_BOUND: u128 = 1 << 22;

/// Positive divisors via trial division; `None` when `n` is too large to factor.
/// A cofactor left after the trial bound is treated as prime, so a few
/// divisors may be missed for huge inputs; the roots they would yield then
/// stay unresolved rather than being reported wrongly.
fn divisors(n: &BigInt) -> Option<Vec<BigInt>> {
    let mut m = n.abs().to_u128()?;
    if m == 0 {
        return None;
    }
    let mut primes: Vec<(u128, u32)> = Vec::new();
    let mut p = 2u128;
    while p * p <= m && p <= TRIAL_DIVISION_BOUND {
        let mut e = 0;
        while m % p == 0 {
            m /= p;
            e += 1;
        }
        if e > 0 {
            primes.push((p, e));
        }
        p += if p == 2 { 1 } else { 2 };
    }
    if m > 1 {
        primes.push((m, 1));
    }
    let mut divs = vec![BigInt::one()];
    for (p, e) in primes {
        let mut next = Vec::with_capacity(divs.len() * (e as usize + 1));
        for d in &divs {
            let mut pk = d.clone();
            for _ in 0..=e {
                next.push(pk.clone());
                pk *= BigInt::from(p);
            }
        }
        divs = next;
    }
    Some(divs)
}

impl Add for &Poly {
    type Output = Poly;
    fn add(self, o: &Poly) -> Poly {
        let n = self.c.len().max(o.c.len());
        Poly::new((0..n).map(|i| &self.coeff(i) + &o.coeff(i)).collect())
    }
}

impl Sub for &Poly {
    type Output = Poly;
    fn sub(self, o: &Poly) -> Poly {
        self + &o.scale(&QuadExtScalar::int(-1))
    }
}

impl Mul for &Poly {
    type Output = Poly;
    fn mul(self, o: &Poly) -> Poly {
        if self.is_zero() || o.is_zero() {
            return Poly::default();
        }
        let mut c = vec![QuadExtScalar::default(); self.c.len() + o.c.len() - 1];
        for (i, x) in self.c.iter().enumerate() {
            for (j, y) in o.c.iter().enumerate() {
                c[i + j] = &c[i + j] + &(x * y);
            }
        }
        Poly::new(c)
    }
}

forward_owned!(Poly; Add add, Sub sub, Mul mul);

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, k) in self
            .c
            .iter()
            .enumerate()
            .rev()
            .filter(|(_, k)| !k.is_zero())
        {
            let (neg, mag) = if k.is_rational() && k.u.is_negative() {
                (true, -k)
            } else {
                (false, k.clone())
            };
            if first {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { "-" } else { "+" })?;
            }
            first = false;
            let coeff = if mag.is_rational() {
                fmt_rat(&mag.u)
            } else {
                format!("({mag})")
            };
            match (i, mag == QuadExtScalar::int(1)) {
                (0, _) => write!(f, "{coeff}")?,
                (_, true) => {}
                _ => write!(f, "{coeff}")?,
            }
            match i {
                0 => {}
                1 => write!(f, "t")?,
                _ => write!(f, "t^{i}")?,
            }
        }
        Ok(())
    }
}

/// A point of `P^1(ℚ(√-2))`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum PPoint {
    Finite(QuadExtScalar),
    Infinity,
}

impl PPoint {
    pub fn int(n: i64) -> Self {
        Self::Finite(QuadExtScalar::int(n))
    }
}

impl fmt::Display for PPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Finite(x) => write!(f, "{x}"),
            Self::Infinity => write!(f, "∞"),
        }
    }
}

/// `num/den` in lowest terms; scaling is kept as given.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RatFn {
    num: Poly,
    den: Poly,
}

impl RatFn {
    pub fn new(num: Poly, den: Poly) -> Result<Self, RatmapError> {
        if den.is_zero() {
            return Err(RatmapError::ZeroDenominator);
        }
        if num.is_zero() {
            return Ok(Self {
                num,
                den: Poly::one(),
            });
        }
        let g = num.gcd(&den);
        Ok(Self {
            num: num.div_exact(&g),
            den: den.div_exact(&g),
        })
    }

    pub fn polynomial(p: Poly) -> Self {
        Self {
            num: p,
            den: Poly::one(),
        }
    }

    pub fn num(&self) -> &Poly {
        &self.num
    }

    pub fn den(&self) -> &Poly {
        &self.den
    }

    pub fn degree(&self) -> usize {
        self.num.deg0().max(self.den.deg0())
    }

    pub fn eval(&self, p: &PPoint) -> PPoint {
        match p {
            PPoint::Finite(x) => {
                let d = self.den.eval(x);
                if d.is_zero() {
                    PPoint::Infinity
                } else {
                    PPoint::Finite(&self.num.eval(x) / &d)
                }
            }
            PPoint::Infinity => {
                let (dn, dd) = (self.num.degree(), self.den.deg0());
                match dn {
                    None => PPoint::int(0),
                    Some(dn) if dn > dd => PPoint::Infinity,
                    Some(dn) if dn < dd => PPoint::int(0),
                    _ => PPoint::Finite(self.num.lead().unwrap() / self.den.lead().unwrap()),
                }
            }
        }
    }

    /// `N'D - ND'`.
    pub fn derivative_numerator(&self) -> Poly {
        &(&self.num.derivative() * &self.den) - &(&self.num * &self.den.derivative())
    }

    /// The numerator of `f - w` (or the denominator for `w = ∞`), as a form of degree `deg f`.
    fn fiber_poly(&self, target: &PPoint) -> Poly {
        match target {
            PPoint::Finite(w) => &self.num - &self.den.scale(w),
            PPoint::Infinity => self.den.clone(),
        }
    }

    /// Multiplicity of `point` in the fiber over `target` (0 if not in it).
    pub fn fiber_multiplicity(&self, target: &PPoint, point: &PPoint) -> u32 {
        let p = self.fiber_poly(target);
        match point {
            PPoint::Finite(x) => p.order_at(x),
            PPoint::Infinity => (self.degree() - p.deg0()) as u32,
        }
    }
}

impl fmt::Display for RatFn {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den == Poly::one() {
            write!(f, "{}", self.num)
        } else {
            write!(f, "({}) / ({})", self.num, self.den)
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct RamificationDivisor {
    pub points: BTreeMap<PPoint, u32>,
    /// Mass carried by ramification points outside `ℚ(√-2)`.
    pub unresolved: u32,
}

impl RamificationDivisor {
    pub fn total(&self) -> u32 {
        self.points.values().sum::<u32>() + self.unresolved
    }
}

impl fmt::Display for RamificationDivisor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .points
            .iter()
            .map(|(p, m)| format!("{p}: {m}"))
            .collect();
        write!(f, "{{{}}}", parts.join(", "))?;
        if self.unresolved > 0 {
            write!(f, " + {} unresolved", self.unresolved)?;
        }
        Ok(())
    }
}

/// Ramification `e_p - 1` at every point; finite points from `N'D - ND'`,
/// infinity from the local degree in `1/t`.
pub fn ramification_divisor(f: &RatFn) -> Result<RamificationDivisor, RatmapError> {
    let n = f.degree();
    if n == 0 {
        return Err(RatmapError::Degenerate);
    }
    let w = f.derivative_numerator();
    let roots = w.roots();
    let unresolved = roots.unresolved_degree();
    let mut out = RamificationDivisor {
        points: roots
            .roots
            .into_iter()
            .map(|(r, m)| (PPoint::Finite(r), m))
            .collect(),
        unresolved,
    };
    let target = f.eval(&PPoint::Infinity);
    let e = f.fiber_multiplicity(&target, &PPoint::Infinity);
    if e > 1 {
        out.points.insert(PPoint::Infinity, e - 1);
    }
    Ok(out)
}

/// The constant `c` with `f(t)·f(1/t) = c`, if the product is constant.
pub fn check_inversion_symmetry(f: &RatFn) -> Option<QuadExtScalar> {
    let n = f.degree();
    let lhs = &f.num * &f.num.reversed(n);
    let rhs = &f.den * &f.den.reversed(n);
    if lhs.is_zero() {
        return Some(QuadExtScalar::default());
    }
    if lhs.degree() != rhs.degree() {
        return None;
    }
    let c = lhs.lead().unwrap() / rhs.lead().unwrap();
    (lhs == rhs.scale(&c)).then_some(c)
}

/// `t ↦ (at + b)/(ct + d)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Mobius {
    pub a: QuadExtScalar,
    pub b: QuadExtScalar,
    pub c: QuadExtScalar,
    pub d: QuadExtScalar,
}

impl Mobius {
    pub fn new(
        a: QuadExtScalar,
        b: QuadExtScalar,
        c: QuadExtScalar,
        d: QuadExtScalar,
    ) -> Result<Self, RatmapError> {
        if (&(&a * &d) - &(&b * &c)).is_zero() {
            return Err(RatmapError::SingularMobius);
        }
        Ok(Self { a, b, c, d })
    }

    pub fn from_ints(a: i64, b: i64, c: i64, d: i64) -> Result<Self, RatmapError> {
        Self::new(
            QuadExtScalar::int(a),
            QuadExtScalar::int(b),
            QuadExtScalar::int(c),
            QuadExtScalar::int(d),
        )
    }

    pub fn inverse(&self) -> Self {
        Self {
            a: self.d.clone(),
            b: -&self.b,
            c: -&self.c,
            d: self.a.clone(),
        }
    }

    pub fn apply(&self, p: &PPoint) -> PPoint {
        match p {
            PPoint::Finite(z) => {
                let den = &(&self.c * z) + &self.d;
                if den.is_zero() {
                    PPoint::Infinity
                } else {
                    PPoint::Finite(&(&(&self.a * z) + &self.b) / &den)
                }
            }
            PPoint::Infinity if self.c.is_zero() => PPoint::Infinity,
            PPoint::Infinity => PPoint::Finite(&self.a / &self.c),
        }
    }
}

/// `f ∘ m`.
pub fn compose_mobius(f: &RatFn, m: &Mobius) -> RatFn {
    let n = f.degree();
    let top = Poly::new(vec![m.b.clone(), m.a.clone()]);
    let bottom = Poly::new(vec![m.d.clone(), m.c.clone()]);
    let homogenize = |p: &Poly| {
        p.coeffs()
            .iter()
            .enumerate()
            .fold(Poly::default(), |acc, (i, k)| {
                let term = &top.pow(i as u32) * &bottom.pow((n - i) as u32);
                &acc + &term.scale(k)
            })
    };
    RatFn::new(homogenize(&f.num), homogenize(&f.den))
        .expect("Möbius change of variable keeps the denominator nonzero")
}

/// `true` iff `f` has degree 4 and, for each `(target, point, index)`, the
/// fiber over `target` contains `point` with multiplicity at least `index`.
pub fn verify_four_one_profile(f: &RatFn, expectations: &[(PPoint, PPoint, u32)]) -> bool {
    f.degree() == 4
        && expectations
            .iter()
            .all(|(target, point, index)| f.fiber_multiplicity(target, point) >= *index)
}

/// `2t^3(t-2)/(2t-1)`, the degree-4 cover with three triple points over `0, 1, ∞`.
pub fn triple_point_cover() -> RatFn {
    RatFn::new(
        Poly::from_ints(&[0, 0, 0, -4, 2]),
        Poly::from_ints(&[-1, 2]),
    )
    .expect("nonzero denominator")
}

/// `t^4/(t - r)`.
pub fn tail_cover(r: &QuadExtScalar) -> RatFn {
    RatFn::new(
        Poly::new(
            vec![QuadExtScalar::default(); 4]
                .into_iter()
                .chain([QuadExtScalar::int(1)])
                .collect(),
        ),
        Poly::linear_root(r),
    )
    .expect("nonzero denominator")
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TailCoverParameters {
    /// Primitive integer form of the condition on `r`, lowest degree first.
    pub relation: Vec<BigInt>,
    /// The root where `4r/3 = 1` and the residual ramification point collides with `q = 1`.
    pub degenerate_root: (BigRat, u32),
    /// Primitive integer form of the residual quadratic, lowest degree first.
    pub residual: Vec<BigInt>,
    pub roots: [QuadExtScalar; 2],
}

/// The `r` for which `t^4/(t - r)` has its residual simple ramification point
/// `4r/3` in the same fiber as `1`.
///
/// `f(4r/3) = 256r^3/27` and `f(1) = 1/(1-r)`; clearing denominators gives
/// the quartic in `r` derived below.
pub fn tail_cover_parameters() -> Result<TailCoverParameters, RatmapError> {
    let inconsistent = |s: &str| RatmapError::DerivationInconsistency(s.into());
    let x = Poly::from_ints(&[0, 1]);
    let ramification_point = x.scale(&QuadExtScalar::rational(frac(4, 3)));
    // f(4x/3) = A/B and f(1) = 1/(1 - x).
    let a = ramification_point.pow(4);
    let b = &ramification_point - &x;
    let one_minus_x = Poly::from_ints(&[1, -1]);
    let cross = &(&a * &one_minus_x) - &b;
    let (relation, rem) = cross.divrem(&x);
    if !rem.is_zero() {
        return Err(inconsistent(
            "cross-multiplied condition not divisible by x",
        ));
    }
    let relation_ints = relation
        .primitive_integer()
        .ok_or_else(|| inconsistent("non-rational relation"))?;

    let factors = relation.square_free_decomposition();
    let (double, single): (Vec<_>, Vec<_>) = factors.into_iter().partition(|(_, m)| *m == 2);
    let [(double, 2)] = double.as_slice() else {
        return Err(inconsistent("expected exactly one double factor"));
    };
    let [(residual, 1)] = single.as_slice() else {
        return Err(inconsistent("expected exactly one simple factor"));
    };
    let degenerate = match double.roots().roots.as_slice() {
        [(r, 1)] if r.is_rational() => r.u.clone(),
        _ => {
            return Err(inconsistent(
                "double factor is not a rational linear factor",
            ))
        }
    };
    if degenerate != frac(3, 4) {
        return Err(inconsistent("degenerate root differs from 3/4"));
    }
    let roots = match quadratic_roots(residual) {
        Some(r) => r,
        None => {
            return Err(inconsistent(
                "residual quadratic does not split over ℚ(√-2)",
            ))
        }
    };
    for r in &roots {
        if !satisfies_tail_relation(r) || r.is_rational() {
            return Err(inconsistent("root fails 256r^3(1-r) = 27"));
        }
        let f = tail_cover(r);
        let f_one = f.eval(&PPoint::int(1));
        let q = PPoint::Finite(&QuadExtScalar::rational(frac(4, 3)) * r);
        if f.eval(&q) != f_one {
            return Err(inconsistent("ramification point not in the fiber of 1"));
        }
    }
    Ok(TailCoverParameters {
        relation: relation_ints,
        degenerate_root: (degenerate, 2),
        residual: residual
            .primitive_integer()
            .ok_or_else(|| inconsistent("non-rational residual"))?,
        roots,
    })
}

/// `256r^3(1-r) = 27`.
pub fn satisfies_tail_relation(r: &QuadExtScalar) -> bool {
    let cube = r * &(r * r);
    let lhs = &(&QuadExtScalar::int(256) * &cube) * &(&QuadExtScalar::int(1) - r);
    lhs == QuadExtScalar::int(27)
}

/// `(1 ± √-2)/4`, as the values appear in print.
pub fn printed_tail_parameters() -> [QuadExtScalar; 2] {
    [
        QuadExtScalar::new(frac(1, 4), frac(-1, 4)),
        QuadExtScalar::new(frac(1, 4), frac(1, 4)),
    ]
}

/// The printed claim is `f(1/t) = 1/f(t)`, i.e. product 1.
pub const PRINTED_INVERSION_CONSTANT: i64 = 1;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RatmapsReport {
    pub triple_cover: RatFn,
    pub derivative_numerator: Poly,
    pub ramification: RamificationDivisor,
    pub inversion_constant: Option<QuadExtScalar>,
    pub inversion_discrepancy: bool,
    pub tail: TailCoverParameters,
    pub printed_roots_satisfy_relation: [bool; 2],
    pub sign_discrepancy: bool,
    pub tail_profiles_hold: bool,
}

impl RatmapsReport {
    pub fn derived_checks_pass(&self) -> bool {
        self.derivative_numerator == Poly::from_ints(&[0, 0, 12, -24, 12])
            && self.ramification.points
                == BTreeMap::from([
                    (PPoint::int(0), 2),
                    (PPoint::int(1), 2),
                    (PPoint::Infinity, 2),
                ])
            && self.inversion_constant == Some(QuadExtScalar::int(4))
            && self.tail.roots.iter().all(satisfies_tail_relation)
            && self.tail_profiles_hold
    }
}

/// Expectations for `t^4/(t - r)`: `4·0` over 0, `3·∞ + r` over ∞, `1 + 2·(4r/3)` over `f(1)`.
pub fn tail_profile(r: &QuadExtScalar) -> Vec<(PPoint, PPoint, u32)> {
    let f = tail_cover(r);
    let over_one = f.eval(&PPoint::int(1));
    let y = PPoint::Finite(&QuadExtScalar::rational(frac(4, 3)) * r);
    vec![
        (PPoint::int(0), PPoint::int(0), 4),
        (PPoint::Infinity, PPoint::Infinity, 3),
        (PPoint::Infinity, PPoint::Finite(r.clone()), 1),
        (over_one.clone(), PPoint::int(1), 1),
        (over_one, y, 2),
    ]
}

pub fn ratmaps_report() -> Result<RatmapsReport, RatmapError> {
    let triple_cover = triple_point_cover();
    let derivative_numerator = triple_cover.derivative_numerator();
    let ramification = ramification_divisor(&triple_cover)?;
    let inversion_constant = check_inversion_symmetry(&triple_cover);
    let tail = tail_cover_parameters()?;
    let printed = printed_tail_parameters();
    let printed_ok = [
        satisfies_tail_relation(&printed[0]),
        satisfies_tail_relation(&printed[1]),
    ];
    let tail_profiles_hold = tail
        .roots
        .iter()
        .all(|r| verify_four_one_profile(&tail_cover(r), &tail_profile(r)));
    Ok(RatmapsReport {
        inversion_discrepancy: inversion_constant
            != Some(QuadExtScalar::int(PRINTED_INVERSION_CONSTANT)),
        sign_discrepancy: printed_ok.iter().any(|ok| !ok),
        triple_cover,
        derivative_numerator,
        ramification,
        inversion_constant,
        tail,
        printed_roots_satisfy_relation: printed_ok,
        tail_profiles_hold,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn q(u: (i64, i64), v: (i64, i64)) -> QuadExtScalar {
        QuadExtScalar::new(frac(u.0, u.1), frac(v.0, v.1))
    }

    fn r_prime() -> QuadExtScalar {
        q((-1, 4), (1, 4))
    }

    fn divisor(points: &[(PPoint, u32)]) -> BTreeMap<PPoint, u32> {
        points.iter().cloned().collect()
    }

    #[test]
    fn triple_point_cover_ramification() {
        let f = triple_point_cover();
        assert_eq!(
            f.derivative_numerator(),
            Poly::from_ints(&[0, 0, 12, -24, 12])
        );
        let r = ramification_divisor(&f).unwrap();
        assert_eq!(
            r.points,
            divisor(&[
                (PPoint::int(0), 2),
                (PPoint::int(1), 2),
                (PPoint::Infinity, 2)
            ])
        );
        assert_eq!(r.total(), 6);
        assert_eq!(r.to_string(), "{0: 2, 1: 2, ∞: 2}");
    }

    #[test]
    fn cube_map() {
        let f = RatFn::polynomial(Poly::from_ints(&[0, 0, 0, 1]));
        let r = ramification_divisor(&f).unwrap();
        assert_eq!(
            r.points,
            divisor(&[(PPoint::int(0), 2), (PPoint::Infinity, 2)])
        );
    }

    #[test]
    fn tail_cover_ramification() {
        let rp = r_prime();
        let f = tail_cover(&rp);
        let expected = &Poly::from_ints(&[0, 0, 0, 1])
            * &Poly::new(vec![&QuadExtScalar::int(-4) * &rp, QuadExtScalar::int(3)]);
        assert_eq!(f.derivative_numerator(), expected);
        let y = &QuadExtScalar::rational(frac(4, 3)) * &rp;
        assert_eq!(
            ramification_divisor(&f).unwrap().points,
            divisor(&[
                (PPoint::int(0), 3),
                (PPoint::Infinity, 2),
                (PPoint::Finite(y), 1)
            ])
        );
    }

    #[test]
    fn constant_map_is_degenerate() {
        let f = RatFn::polynomial(Poly::from_ints(&[5]));
        assert_eq!(ramification_divisor(&f), Err(RatmapError::Degenerate));
        let same = RatFn::new(Poly::from_ints(&[2, 2]), Poly::from_ints(&[1, 1])).unwrap();
        assert_eq!(same.degree(), 0);
        assert!(ramification_divisor(&same).is_err());
    }

    #[test]
    fn inversion_symmetry() {
        assert_eq!(
            check_inversion_symmetry(&triple_point_cover()),
            Some(QuadExtScalar::int(4))
        );
        let cube = RatFn::polynomial(Poly::from_ints(&[0, 0, 0, 1]));
        assert_eq!(check_inversion_symmetry(&cube), Some(QuadExtScalar::int(1)));
        let sq = RatFn::polynomial(Poly::from_ints(&[1, 0, 1]));
        assert_eq!(check_inversion_symmetry(&sq), None);
    }

    #[test]
    fn inversion_swaps_triple_fibers() {
        // w ↦ 4/w conjugates t ↦ 1/t, exchanging the fibers over 0 and ∞.
        let f = triple_point_cover();
        let inv = Mobius::from_ints(0, 1, 1, 0).unwrap();
        let g = compose_mobius(&f, &inv);
        for t in [2i64, 3, -5, 7] {
            let lhs = g.eval(&PPoint::int(t));
            let rhs = Mobius::from_ints(0, 4, 1, 0)
                .unwrap()
                .apply(&f.eval(&PPoint::int(t)));
            assert_eq!(lhs, rhs);
        }
    }

    #[test]
    fn tail_parameters() {
        let t = tail_cover_parameters().unwrap();
        assert_eq!(t.relation, [27, 0, 0, -256, 256].map(BigInt::from));
        assert_eq!(t.residual, [3, 8, 16].map(BigInt::from));
        assert_eq!(t.degenerate_root, (frac(3, 4), 2));
        assert_eq!(t.roots, [q((-1, 4), (-1, 4)), q((-1, 4), (1, 4))]);
        for r in &t.roots {
            assert!(satisfies_tail_relation(r));
        }
        assert!(!satisfies_tail_relation(&printed_tail_parameters()[0]));
        assert!(!satisfies_tail_relation(&printed_tail_parameters()[1]));
    }

    #[test]
    fn four_one_profiles() {
        for r in tail_cover_parameters().unwrap().roots {
            assert!(verify_four_one_profile(&tail_cover(&r), &tail_profile(&r)));
        }
        let f = triple_point_cover();
        assert!(verify_four_one_profile(
            &f,
            &[
                (PPoint::int(0), PPoint::int(0), 3),
                (PPoint::int(0), PPoint::int(2), 1)
            ]
        ));
        assert!(!verify_four_one_profile(
            &f,
            &[(PPoint::int(0), PPoint::int(0), 4)]
        ));
        let t4 = RatFn::polynomial(Poly::from_ints(&[0, 0, 0, 0, 1]));
        assert!(verify_four_one_profile(
            &t4,
            &[
                (PPoint::int(0), PPoint::int(0), 4),
                (PPoint::Infinity, PPoint::Infinity, 4)
            ]
        ));
        let cube = RatFn::polynomial(Poly::from_ints(&[0, 0, 0, 1]));
        assert!(!verify_four_one_profile(&cube, &[]));
    }

    #[test]
    fn report_flags_printed_values() {
        let rep = ratmaps_report().unwrap();
        assert!(rep.derived_checks_pass());
        assert!(rep.inversion_discrepancy);
        assert!(rep.sign_discrepancy);
        assert_eq!(rep.printed_roots_satisfy_relation, [false, false]);
    }

    #[test]
    fn yun_decomposition() {
        // (t-1)^3 (t+2)^2 t
        let p = &(&Poly::from_ints(&[-1, 1]).pow(3) * &Poly::from_ints(&[2, 1]).pow(2))
            * &Poly::from_ints(&[0, 1]);
        let sf = p.square_free_decomposition();
        assert_eq!(
            sf,
            vec![
                (Poly::from_ints(&[0, 1]), 1),
                (Poly::from_ints(&[2, 1]), 2),
                (Poly::from_ints(&[-1, 1]), 3)
            ]
        );
    }

    #[test]
    fn irreducible_factor_stays_unresolved() {
        // t^3 - 2 has no root in ℚ(√-2).
        let r = Poly::from_ints(&[-2, 0, 0, 1]).roots();
        assert!(r.roots.is_empty());
        assert_eq!(r.unresolved_degree(), 3);
        // t^2 + 1 neither.
        assert_eq!(Poly::from_ints(&[1, 0, 1]).roots().unresolved_degree(), 2);
        // t^2 + 2 splits.
        assert_eq!(Poly::from_ints(&[2, 0, 1]).roots().roots.len(), 2);
    }

    #[test]
    fn quad_ext_sqrt() {
        let r = r_prime();
        assert_eq!((&r * &r).sqrt().map(|s| s == r || s == -&r), Some(true));
        assert_eq!(QuadExtScalar::int(-8).sqrt(), Some(q((0, 1), (2, 1))));
        assert_eq!(QuadExtScalar::int(3).sqrt(), None);
    }

    #[test]
    fn poly_display() {
        assert_eq!(
            Poly::from_ints(&[0, 0, 12, -24, 12]).to_string(),
            "12t^4 - 24t^3 + 12t^2"
        );
        assert_eq!(Poly::from_ints(&[-1, 1]).to_string(), "t - 1");
        assert_eq!(triple_point_cover().to_string(), "(2t^4 - 4t^3) / (2t - 1)");
    }

    fn random_mobius(rng: &mut ChaCha8Rng) -> Mobius {
        loop {
            let c: [i64; 4] = std::array::from_fn(|_| rng.gen_range(-4..=4));
            if let Ok(m) = Mobius::from_ints(c[0], c[1], c[2], c[3]) {
                return m;
            }
        }
    }

    #[test]
    fn ramification_transforms_under_mobius() {
        let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
        let maps = [
            triple_point_cover(),
            tail_cover(&r_prime()),
            RatFn::polynomial(Poly::from_ints(&[0, 0, 0, 1])),
            RatFn::new(Poly::from_ints(&[0, 0, 1]), Poly::from_ints(&[-1, 1])).unwrap(),
        ];
        for k in 0..20 {
            let f = &maps[k % maps.len()];
            let m = random_mobius(&mut rng);
            let g = compose_mobius(f, &m);
            let base = ramification_divisor(f).unwrap();
            let moved = ramification_divisor(&g).unwrap();
            let inv = m.inverse();
            let expected: BTreeMap<PPoint, u32> = base
                .points
                .iter()
                .map(|(p, e)| (inv.apply(p), *e))
                .collect();
            assert_eq!(moved.points, expected, "map {f} under {m:?}");
            assert_eq!(moved.unresolved, 0);
        }
    }

    fn arb_ratfn() -> impl Strategy<Value = RatFn> {
        (
            proptest::collection::vec(-6i64..=6, 1..6),
            proptest::collection::vec(-6i64..=6, 1..6),
        )
            .prop_filter_map("nonconstant", |(n, d)| {
                let f = RatFn::new(Poly::from_ints(&n), Poly::from_ints(&d)).ok()?;
                (f.degree() > 0).then_some(f)
            })
    }

    proptest! {
        #[test]
        fn riemann_hurwitz_mass(f in arb_ratfn()) {
            let r = ramification_divisor(&f).unwrap();
            prop_assert_eq!(r.total() as usize, 2 * f.degree() - 2);
        }

        #[test]
        fn norm_is_multiplicative(a in proptest::array::uniform4(-50i64..50)) {
            let x = QuadExtScalar::new(rat(a[0]), rat(a[1]));
            let y = QuadExtScalar::new(rat(a[2]), rat(a[3]));
            prop_assert_eq!((&x * &y).norm(), x.norm() * y.norm());
            prop_assert_eq!(x.conj().conj(), x.clone());
            if !y.is_zero() {
                prop_assert_eq!(&(&x / &y) * &y, x);
            }
        }
    }
}
