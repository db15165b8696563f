//! Brute-force torsion counts on elliptic curves over small prime fields.
//!
//! A finite-field count of solutions to `nX = T` equals the geometric count
//! only when the whole of `E[n]` is rational, so every counting entry point
//! checks that `(ℤ/n)² ⊂ E(F_p)` first.

use std::collections::HashSet;

use num_integer::Integer;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OracleError {
    #[error("invalid point {0:?}: not on the curve")]
    InvalidPoint(ECPoint),
    #[error("invalid curve: {0}")]
    InvalidCurve(String),
    #[error("search exhausted: no curve with full {n}-torsion over F_p for p <= {p_max}")]
    SearchExhausted { n: u64, p_max: u64 },
    #[error("unsupported torsion order {0} (expected 2, 3 or 4)")]
    UnsupportedOrder(u64),
    #[error("E[{0}] is not fully rational on this curve")]
    NoFullTorsion(u64),
    #[error("no solutions over this field: target is not an {0}-th multiple")]
    NoSolutions(u64),
}

/// `y² = x³ + ax + b` over `F_p`, `p > 3` prime, nonsingular.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct WeierstrassCurve {
    p: u64,
    a: u64,
    b: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ECPoint {
    Infinity,
    Affine { x: u64, y: u64 },
}

impl ECPoint {
    pub fn affine(x: u64, y: u64) -> Self {
        ECPoint::Affine { x, y }
    }
}

pub fn is_prime(n: u64) -> bool {
    n >= 2 && (2..).take_while(|k| k * k <= n).all(|k| !n.is_multiple_of(k))
}

impl WeierstrassCurve {
    pub fn new(p: u64, a: u64, b: u64) -> Result<Self, OracleError> {
        if p <= 3 || !is_prime(p) {
            return Err(OracleError::InvalidCurve(format!("{p} is not a prime > 3")));
        }
        let curve = Self {
            p,
            a: a % p,
            b: b % p,
        };
        let disc = (4 * curve.pow(curve.a, 3) + 27 * curve.mul(curve.b, curve.b)) % p;
        if disc == 0 {
            return Err(OracleError::InvalidCurve(format!(
                "y^2 = x^3 + {a}x + {b} is singular mod {p}"
            )));
        }
        Ok(curve)
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn a(&self) -> u64 {
        self.a
    }

    pub fn b(&self) -> u64 {
        self.b
    }

    fn mul(&self, x: u64, y: u64) -> u64 {
        x * y % self.p
    }

    fn pow(&self, mut base: u64, mut e: u64) -> u64 {
        let mut acc = 1;
        base %= self.p;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        acc
    }

    fn inv(&self, x: u64) -> u64 {
        debug_assert!(!x.is_multiple_of(self.p));
        self.pow(x, self.p - 2)
    }

    fn sub(&self, x: u64, y: u64) -> u64 {
        (x + self.p - y % self.p) % self.p
    }

    fn rhs(&self, x: u64) -> u64 {
        (self.pow(x, 3) + self.mul(self.a, x) + self.b) % self.p
    }

    pub fn contains(&self, pt: &ECPoint) -> bool {
        match *pt {
            ECPoint::Infinity => true,
            ECPoint::Affine { x, y } => x < self.p && y < self.p && self.mul(y, y) == self.rhs(x),
        }
    }

    pub fn neg(&self, pt: &ECPoint) -> ECPoint {
        match *pt {
            ECPoint::Infinity => ECPoint::Infinity,
            ECPoint::Affine { x, y } => ECPoint::Affine {
                x,
                y: (self.p - y) % self.p,
            },
        }
    }

    /// Chord–tangent addition on points already known to lie on the curve.
    pub fn add(&self, lhs: &ECPoint, rhs: &ECPoint) -> ECPoint {
        let (x1, y1, x2, y2) = match (*lhs, *rhs) {
            (ECPoint::Infinity, q) => return q,
            (pt, ECPoint::Infinity) => return pt,
            (ECPoint::Affine { x: x1, y: y1 }, ECPoint::Affine { x: x2, y: y2 }) => {
                (x1, y1, x2, y2)
            }
        };
        let slope = if x1 == x2 {
            if (y1 + y2) % self.p == 0 {
                return ECPoint::Infinity;
            }
            let num = (3 * self.mul(x1, x1) + self.a) % self.p;
            self.mul(num, self.inv(2 * y1 % self.p))
        } else {
            self.mul(self.sub(y2, y1), self.inv(self.sub(x2, x1)))
        };
        let x3 = self.sub(self.sub(self.mul(slope, slope), x1), x2);
        let y3 = self.sub(self.mul(slope, self.sub(x1, x3)), y1);
        ECPoint::Affine { x: x3, y: y3 }
    }

    pub fn scalar_multiply(&self, k: u64, pt: &ECPoint) -> ECPoint {
        let mut acc = ECPoint::Infinity;
        let mut base = *pt;
        let mut k = k;
        while k > 0 {
            if k & 1 == 1 {
                acc = self.add(&acc, &base);
            }
            base = self.add(&base, &base);
            k >>= 1;
        }
        acc
    }

    /// All rational points, infinity first, then affine points by `(x, y)`.
    pub fn points(&self) -> Vec<ECPoint> {
        let mut roots: Vec<Vec<u64>> = vec![Vec::new(); self.p as usize];
        for y in 0..self.p {
            roots[self.mul(y, y) as usize].push(y);
        }
        let mut pts = vec![ECPoint::Infinity];
        for x in 0..self.p {
            for &y in &roots[self.rhs(x) as usize] {
                pts.push(ECPoint::Affine { x, y });
            }
        }
        pts
    }

    pub fn order_of(&self, pt: &ECPoint) -> u64 {
        let mut k = 1;
        let mut acc = *pt;
        while acc != ECPoint::Infinity {
            acc = self.add(&acc, pt);
            k += 1;
        }
        k
    }

    /// Rational points killed by `n`.
    pub fn torsion(&self, n: u64) -> Vec<ECPoint> {
        self.points()
            .into_iter()
            .filter(|pt| self.scalar_multiply(n, pt) == ECPoint::Infinity)
            .collect()
    }

    pub fn has_full_torsion(&self, n: u64) -> bool {
        self.torsion(n).len() as u64 == n * n
    }

    /// Invariant factors `[n1, n2]` (`n1 | n2`) of `E(F_p)`, or `[n2]` if cyclic.
    pub fn group_structure(&self) -> GroupStructure {
        let pts = self.points();
        let order = pts.len() as u64;
        let exponent = pts.iter().fold(1, |acc, pt| acc.lcm(&self.order_of(pt)));
        let invariants = if exponent == order {
            vec![order]
        } else {
            vec![order / exponent, exponent]
        };
        GroupStructure { order, invariants }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GroupStructure {
    pub order: u64,
    pub invariants: Vec<u64>,
}

impl GroupStructure {
    pub fn contains_full_torsion(&self, n: u64) -> bool {
        self.invariants.len() == 2 && self.invariants[0].is_multiple_of(n)
    }
}

/// `P + Q`, rejecting points that are not on the curve.
pub fn group_law(
    lhs: &ECPoint,
    rhs: &ECPoint,
    curve: &WeierstrassCurve,
) -> Result<ECPoint, OracleError> {
    for pt in [lhs, rhs] {
        if !curve.contains(pt) {
            return Err(OracleError::InvalidPoint(*pt));
        }
    }
    Ok(curve.add(lhs, rhs))
}

fn check_order(n: u64) -> Result<(), OracleError> {
    if (2..=4).contains(&n) {
        Ok(())
    } else {
        Err(OracleError::UnsupportedOrder(n))
    }
}

/// Every curve `y² = x³ + ax + b` over `F_p`, `p <= p_max`, `p ≡ 1 (mod n)`,
/// whose group contains `(ℤ/n)²`, in order of `(p, a, b)`.
pub fn full_torsion_curves(
    n: u64,
    p_max: u64,
) -> Result<impl Iterator<Item = (WeierstrassCurve, GroupStructure)>, OracleError> {
    check_order(n)?;
    Ok((5..=p_max)
        .filter(move |&p| is_prime(p) && p % n == 1)
        .flat_map(move |p| (0..p).flat_map(move |a| (0..p).map(move |b| (p, a, b))))
        .filter_map(|(p, a, b)| WeierstrassCurve::new(p, a, b).ok())
        .filter(move |c| {
            let count = c.points().len() as u64;
            count.is_multiple_of(n * n) && c.has_full_torsion(n)
        })
        .map(|c| {
            let s = c.group_structure();
            (c, s)
        }))
}

/// The first curve from [`full_torsion_curves`].
pub fn find_full_torsion_curve(
    n: u64,
    p_max: u64,
) -> Result<(WeierstrassCurve, GroupStructure), OracleError> {
    if p_max < 7 {
        return Err(OracleError::SearchExhausted { n, p_max });
    }
    full_torsion_curves(n, p_max)?
        .next()
        .ok_or(OracleError::SearchExhausted { n, p_max })
}

/// Rational solutions of `nX = target`.
pub fn torsion_solutions(
    curve: &WeierstrassCurve,
    n: u64,
    target: &ECPoint,
) -> Result<Vec<ECPoint>, OracleError> {
    check_order(n)?;
    if !curve.contains(target) {
        return Err(OracleError::InvalidPoint(*target));
    }
    if !curve.has_full_torsion(n) {
        return Err(OracleError::NoFullTorsion(n));
    }
    let sols: Vec<ECPoint> = curve
        .points()
        .into_iter()
        .filter(|x| curve.scalar_multiply(n, x) == *target)
        .collect();
    if sols.is_empty() {
        return Err(OracleError::NoSolutions(n));
    }
    Ok(sols)
}

/// Number of `X` with `nX = target`, not counting the excluded points.
pub fn count_torsion_solutions(
    curve: &WeierstrassCurve,
    n: u64,
    target: &ECPoint,
    exclusions: &[ECPoint],
) -> Result<usize, OracleError> {
    let excluded: HashSet<&ECPoint> = exclusions.iter().collect();
    Ok(torsion_solutions(curve, n, target)?
        .iter()
        .filter(|x| !excluded.contains(x))
        .count())
}

/// Number of `X` with `3X = P + 2Q`.
pub fn count_affine_combination(
    curve: &WeierstrassCurve,
    p: &ECPoint,
    q: &ECPoint,
) -> Result<usize, OracleError> {
    let two_q = group_law(q, q, curve)?;
    let target = group_law(p, &two_q, curve)?;
    count_torsion_solutions(curve, 3, &target, &[])
}

/// Up to `count` points spread over `E(F_p)`, skipping infinity, starting at `offset`.
pub fn sample_points(curve: &WeierstrassCurve, count: usize, offset: usize) -> Vec<ECPoint> {
    let pts: Vec<ECPoint> = curve.points().into_iter().skip(1).collect();
    if pts.is_empty() {
        return Vec::new();
    }
    let stride = (pts.len() / count.max(1)).max(1);
    (0..count.min(pts.len()))
        .map(|i| pts[(offset + i * stride) % pts.len()])
        .collect()
}
