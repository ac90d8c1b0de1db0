//! Exact real quadratic surds `a + b√d`.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::Rat;

/// `a + b·√d` with rational `a`, `b` and `d >= 0`.
///
/// Values with different `d` compare exactly as well; `b` is zero whenever
/// `d` is, and perfect squares are folded into `a`.
#[derive(Clone, Debug)]
pub struct QuadAlg {
    a: Rat,
    b: Rat,
    d: Rat,
}

fn sign(x: &Rat) -> i32 {
    if x.is_positive() {
        1
    } else if x.is_negative() {
        -1
    } else {
        0
    }
}

/// Exact square root of a non-negative rational, if it is one.
fn rational_sqrt(x: &Rat) -> Option<Rat> {
    let (n, d) = (x.numer(), x.denom());
    let (rn, rd) = (n.sqrt(), d.sqrt());
    (&rn * &rn == *n && &rd * &rd == *d).then(|| Rat::new(rn, rd))
}

/// Sign of `a + b√d`.
fn sign2(a: &Rat, b: &Rat, d: &Rat) -> i32 {
    let (sa, sb) = (sign(a), if d.is_zero() { 0 } else { sign(b) });
    if sb == 0 {
        return sa;
    }
    if sa == 0 || sa == sb {
        return sb;
    }
    // opposite signs: compare a^2 with b^2 d
    let m = sign(&(a * a - b * b * d));
    if sa > 0 {
        m
    } else {
        -m
    }
}

/// Sign of `a + b√d1 + c√d2`.
fn sign3(a: &Rat, b: &Rat, d1: &Rat, c: &Rat, d2: &Rat) -> i32 {
    let s1 = sign2(a, b, d1);
    let s2 = if d2.is_zero() { 0 } else { sign(c) };
    if s2 == 0 {
        return s1;
    }
    if s1 == 0 || s1 == s2 {
        return s2;
    }
    // |a + b√d1|^2 - c^2 d2 = (a^2 + b^2 d1 - c^2 d2) + 2ab√d1
    let m = sign2(&(a * a + b * b * d1 - c * c * d2), &(Rat::from_integer(2.into()) * a * b), d1);
    if s1 > 0 {
        m
    } else {
        -m
    }
}

impl QuadAlg {
    /// # Panics
    /// If `d` is negative.
    pub fn new(a: Rat, b: Rat, d: Rat) -> Self {
        assert!(!d.is_negative(), "negative radicand");
        if b.is_zero() || d.is_zero() {
            return QuadAlg::rational(a);
        }
        if let Some(r) = rational_sqrt(&d) {
            return QuadAlg::rational(a + b * r);
        }
        QuadAlg { a, b, d }
    }

    pub fn rational(a: Rat) -> Self {
        QuadAlg { a, b: Rat::zero(), d: Rat::zero() }
    }

    pub fn parts(&self) -> (&Rat, &Rat, &Rat) {
        (&self.a, &self.b, &self.d)
    }

    pub fn as_rational(&self) -> Option<&Rat> {
        self.b.is_zero().then_some(&self.a)
    }

    pub fn signum(&self) -> i32 {
        sign2(&self.a, &self.b, &self.d)
    }

    pub fn cmp_rat(&self, r: &Rat) -> Ordering {
        sign2(&(&self.a - r), &self.b, &self.d).cmp(&0)
    }

    pub fn to_f64(&self) -> f64 {
        self.a.to_f64().unwrap_or(f64::NAN) + self.b.to_f64().unwrap_or(f64::NAN) * self.d.to_f64().unwrap_or(f64::NAN).sqrt()
    }

    /// Rational bounds `lo <= self <= hi` with `hi - lo` shrinking like `2^-k`.
    pub fn bounds(&self, k: u32) -> (Rat, Rat) {
        if self.b.is_zero() {
            return (self.a.clone(), self.a.clone());
        }
        // |b|√d = √e with e = p / q, and √e = √(p q) / q
        let e = &self.b * &self.b * &self.d;
        let (p, q) = (e.numer(), e.denom());
        let big: BigInt = p * q * (BigInt::one() << (2 * k));
        let s = big.sqrt();
        let scale = q * (BigInt::one() << k);
        let lo = Rat::new(s.clone(), scale.clone());
        let hi = Rat::new(s + 1, scale);
        if self.b.is_positive() {
            (&self.a + lo, &self.a + hi)
        } else {
            (&self.a - hi, &self.a - lo)
        }
    }

    /// The real roots of `A t^2 + B t + C`, or `None` if it vanishes
    /// identically.
    pub fn roots(qa: &Rat, qb: &Rat, qc: &Rat) -> Option<Vec<QuadAlg>> {
        if qa.is_zero() {
            if qb.is_zero() {
                return if qc.is_zero() { None } else { Some(Vec::new()) };
            }
            return Some(vec![QuadAlg::rational(-qc / qb)]);
        }
        let four = Rat::from_integer(4.into());
        let disc = qb * qb - four * qa * qc;
        if disc.is_negative() {
            return Some(Vec::new());
        }
        let two_a = Rat::from_integer(2.into()) * qa;
        let mid = -qb / &two_a;
        let half = Rat::one() / &two_a;
        let mut out = vec![QuadAlg::new(mid.clone(), -half.clone(), disc.clone()), QuadAlg::new(mid, half, disc)];
        out.sort();
        out.dedup();
        Some(out)
    }
}

/// A rational strictly between `lo < hi`.
pub fn rational_between(lo: &QuadAlg, hi: &QuadAlg) -> Rat {
    debug_assert!(lo < hi);
    for k in 0.. {
        let (_, up) = lo.bounds(k);
        let (down, _) = hi.bounds(k);
        if up < down {
            return (up + down) / Rat::from_integer(2.into());
        }
    }
    unreachable!()
}

impl PartialEq for QuadAlg {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl Eq for QuadAlg {}

impl PartialOrd for QuadAlg {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for QuadAlg {
    fn cmp(&self, other: &Self) -> Ordering {
        let da = &self.a - &other.a;
        let s = if self.d == other.d {
            sign2(&da, &(&self.b - &other.b), &self.d)
        } else {
            sign3(&da, &self.b, &self.d, &-&other.b, &other.d)
        };
        s.cmp(&0)
    }
}

impl From<Rat> for QuadAlg {
    fn from(a: Rat) -> Self {
        QuadAlg::rational(a)
    }
}

impl fmt::Display for QuadAlg {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.b.is_zero() {
            write!(f, "{}", self.a)
        } else {
            write!(f, "{} + ({})·√({})", self.a, self.b, self.d)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(n: i64, d: i64) -> Rat {
        Rat::new(n.into(), d.into())
    }

    #[test]
    fn folding_and_signs() {
        assert_eq!(QuadAlg::new(r(1, 1), r(1, 1), r(4, 9)).as_rational(), Some(&r(5, 3)));
        assert_eq!(QuadAlg::new(r(1, 1), r(-1, 1), r(2, 1)).signum(), -1);
        assert_eq!(QuadAlg::new(r(3, 2), r(-1, 1), r(2, 1)).signum(), 1);
        assert_eq!(QuadAlg::new(r(7, 5), r(-1, 1), r(2, 1)).signum(), -1);
    }

    #[test]
    fn mixed_radicands() {
        // √2 + √3 vs √10: 5 + 2√6 < 10 since 2√6 < 5
        let s2 = QuadAlg::new(r(0, 1), r(1, 1), r(2, 1));
        let s10 = QuadAlg::new(r(0, 1), r(1, 1), r(10, 1));
        let s3_plus = QuadAlg::new(r(0, 1), r(1, 1), r(3, 1));
        assert!(s2 < s3_plus && s3_plus < s10);
        assert!(QuadAlg::new(r(1, 1), r(1, 1), r(3, 1)) > QuadAlg::new(r(0, 1), r(1, 1), r(7, 1)));
        assert!(QuadAlg::new(r(1, 1), r(-1, 1), r(3, 1)) < QuadAlg::new(r(0, 1), r(-1, 1), r(1, 2)));
    }

    #[test]
    fn roots_and_between() {
        let roots = QuadAlg::roots(&r(1, 1), &r(0, 1), &r(-2, 1)).unwrap();
        assert_eq!(roots.len(), 2);
        let mid = rational_between(&roots[0], &roots[1]);
        assert!(roots[0].cmp_rat(&mid).is_lt() && roots[1].cmp_rat(&mid).is_gt());
        let (lo, hi) = roots[1].bounds(20);
        assert!(roots[1].cmp_rat(&lo).is_ge() && roots[1].cmp_rat(&hi).is_le());
        assert!(hi - lo < r(1, 1 << 19));
        assert_eq!(QuadAlg::roots(&r(0, 1), &r(0, 1), &r(0, 1)), None);
        assert_eq!(QuadAlg::roots(&r(0, 1), &r(0, 1), &r(1, 1)), Some(vec![]));
        assert_eq!(QuadAlg::roots(&r(1, 1), &r(2, 1), &r(1, 1)), Some(vec![QuadAlg::rational(r(-1, 1))]));
    }
}
