// SPDX-License-Identifier: Apache-2.0

//! Double-double arithmetic for the alternating sums in the operator builders.
//!
//! A value is the unevaluated sum `hi + lo` with `|lo| ≤ ulp(hi)/2`, giving
//! about 32 significant digits. Products use Dekker splitting, so results do
//! not depend on hardware FMA.

use std::ops::{Add, Mul, Neg, Sub};

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub(crate) struct Dd {
    hi: f64,
    lo: f64,
}

const SPLITTER: f64 = 134_217_729.0; // 2^27 + 1

fn two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    let bb = s - a;
    (s, (a - (s - bb)) + (b - bb))
}

fn quick_two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    (s, b - (s - a))
}

fn split(a: f64) -> (f64, f64) {
    let t = SPLITTER * a;
    let hi = t - (t - a);
    (hi, a - hi)
}

fn two_prod(a: f64, b: f64) -> (f64, f64) {
    let p = a * b;
    let (ah, al) = split(a);
    let (bh, bl) = split(b);
    (p, ((ah * bh - p) + ah * bl + al * bh) + al * bl)
}

impl Dd {
    pub(crate) const ZERO: Dd = Dd { hi: 0.0, lo: 0.0 };
    pub(crate) const ONE: Dd = Dd { hi: 1.0, lo: 0.0 };

    pub(crate) fn from_f64(x: f64) -> Dd {
        Dd { hi: x, lo: 0.0 }
    }

    pub(crate) fn to_f64(self) -> f64 {
        self.hi + self.lo
    }

    pub(crate) fn recip(self) -> Dd {
        let q1 = 1.0 / self.hi;
        let r = Dd::ONE - self * q1;
        let q2 = r.hi / self.hi;
        let r = r - self * q2;
        let q3 = r.hi / self.hi;
        let (s, e) = quick_two_sum(q1, q2);
        Dd { hi: s, lo: e } + q3
    }

    pub(crate) fn sqrt(self) -> Dd {
        if self.hi <= 0.0 {
            return Dd::ZERO;
        }
        let q = self.hi.sqrt();
        let (p, e) = two_prod(q, q);
        let r = (self - Dd { hi: p, lo: e }).hi;
        let (s, c) = quick_two_sum(q, r / (2.0 * q));
        Dd { hi: s, lo: c }
    }

    /// `1 − x²` without cancellation in the leading part.
    pub(crate) fn one_minus_square(x: f64) -> Dd {
        Dd::ONE - Dd::from_f64(x) * x
    }

    pub(crate) fn powers(self, count: usize) -> Vec<Dd> {
        let mut out = Vec::with_capacity(count);
        let mut acc = Dd::ONE;
        for _ in 0..count {
            out.push(acc);
            acc = acc * self;
        }
        out
    }
}

impl Add for Dd {
    type Output = Dd;
    fn add(self, other: Dd) -> Dd {
        let (s, e) = two_sum(self.hi, other.hi);
        let (t, f) = two_sum(self.lo, other.lo);
        let (s, e) = quick_two_sum(s, e + t);
        let (hi, lo) = quick_two_sum(s, e + f);
        Dd { hi, lo }
    }
}

impl Add<f64> for Dd {
    type Output = Dd;
    fn add(self, other: f64) -> Dd {
        let (s, e) = two_sum(self.hi, other);
        let (hi, lo) = quick_two_sum(s, e + self.lo);
        Dd { hi, lo }
    }
}

impl Neg for Dd {
    type Output = Dd;
    fn neg(self) -> Dd {
        Dd { hi: -self.hi, lo: -self.lo }
    }
}

impl Sub for Dd {
    type Output = Dd;
    fn sub(self, other: Dd) -> Dd {
        self + (-other)
    }
}

impl Mul for Dd {
    type Output = Dd;
    fn mul(self, other: Dd) -> Dd {
        let (p, e) = two_prod(self.hi, other.hi);
        let (hi, lo) = quick_two_sum(p, e + (self.hi * other.lo + self.lo * other.hi));
        Dd { hi, lo }
    }
}

impl Mul<f64> for Dd {
    type Output = Dd;
    fn mul(self, other: f64) -> Dd {
        let (p, e) = two_prod(self.hi, other);
        let (hi, lo) = quick_two_sum(p, e + self.lo * other);
        Dd { hi, lo }
    }
}

/// Largest `n` whose factorial ratios are tabulated directly.
const DIRECT_MAX: usize = 150;

/// `√n!`, `1/√n!` and `1/n!` in double-double. Larger arguments fall back to
/// double-precision logarithms.
pub(crate) struct DdFactorials {
    sqrt: Vec<Dd>,
    inv_sqrt: Vec<Dd>,
    inv: Vec<Dd>,
    fallback: Option<super::Factorials>,
}

impl DdFactorials {
    pub(crate) fn new(max: usize) -> Self {
        if max > DIRECT_MAX {
            return DdFactorials { sqrt: vec![], inv_sqrt: vec![], inv: vec![], fallback: Some(super::Factorials::new(max)) };
        }
        let mut fact = Vec::with_capacity(max + 1);
        let mut acc = Dd::ONE;
        fact.push(acc);
        for n in 1..=max {
            acc = acc * n as f64;
            fact.push(acc);
        }
        let sqrt: Vec<Dd> = fact.iter().map(|f| f.sqrt()).collect();
        DdFactorials {
            inv_sqrt: sqrt.iter().map(|s| s.recip()).collect(),
            inv: fact.iter().map(|f| f.recip()).collect(),
            sqrt,
            fallback: None,
        }
    }

    /// `√(Π a!) / √(Π b!) / Π c!`.
    pub(crate) fn ratio(&self, sqrt_num: &[usize], sqrt_den: &[usize], den: &[usize]) -> Dd {
        if let Some(f) = &self.fallback {
            return Dd::from_f64(f.ratio(sqrt_num, sqrt_den, den));
        }
        let mut acc = Dd::ONE;
        for &n in sqrt_num {
            acc = acc * self.sqrt[n];
        }
        for &n in sqrt_den {
            acc = acc * self.inv_sqrt[n];
        }
        for &n in den {
            acc = acc * self.inv[n];
        }
        acc
    }
}
