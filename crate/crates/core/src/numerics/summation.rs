//! Double-double accumulation for long sums.
//!
//! Reductions in this crate always run in a fixed order, so with the same
//! inputs the results are bit-identical regardless of thread count.

use super::Complex;

/// Error-free transformation: `a + b = s + e` exactly.
#[inline]
pub fn two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    let bb = s - a;
    let e = (a - (s - bb)) + (b - bb);
    (s, e)
}

#[inline]
fn quick_two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    (s, b - (s - a))
}

/// Unevaluated sum `hi + lo` with `|lo| <= ulp(hi)/2`, roughly 106 bits.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct DoubleDouble {
    pub hi: f64,
    pub lo: f64,
}

impl DoubleDouble {
    pub fn new(x: f64) -> Self {
        DoubleDouble { hi: x, lo: 0.0 }
    }

    #[inline]
    pub fn add_f64(self, b: f64) -> Self {
        let (s, e) = two_sum(self.hi, b);
        let (hi, lo) = quick_two_sum(s, e + self.lo);
        DoubleDouble { hi, lo }
    }

    #[inline]
    pub fn add(self, other: DoubleDouble) -> Self {
        let (s, e) = two_sum(self.hi, other.hi);
        let (t, f) = two_sum(self.lo, other.lo);
        let (s, e) = quick_two_sum(s, e + t);
        let (hi, lo) = quick_two_sum(s, e + f);
        DoubleDouble { hi, lo }
    }

    pub fn value(self) -> f64 {
        self.hi + self.lo
    }
}

/// Real accumulator; compensated when `extended`.
#[derive(Debug, Clone, Copy)]
pub struct RealSum {
    acc: DoubleDouble,
    extended: bool,
}

impl RealSum {
    pub fn new(extended: bool) -> Self {
        RealSum {
            acc: DoubleDouble::default(),
            extended,
        }
    }

    #[inline]
    pub fn add(&mut self, x: f64) {
        if self.extended {
            self.acc = self.acc.add_f64(x);
        } else {
            self.acc.hi += x;
        }
    }

    pub fn value(&self) -> f64 {
        self.acc.value()
    }

    pub fn sum<I: IntoIterator<Item = f64>>(items: I, extended: bool) -> f64 {
        let mut s = RealSum::new(extended);
        for x in items {
            s.add(x);
        }
        s.value()
    }
}

/// Complex accumulator; compensated when `extended`.
#[derive(Debug, Clone, Copy)]
pub struct ComplexSum {
    re: RealSum,
    im: RealSum,
}

impl ComplexSum {
    pub fn new(extended: bool) -> Self {
        ComplexSum {
            re: RealSum::new(extended),
            im: RealSum::new(extended),
        }
    }

    #[inline]
    pub fn add(&mut self, z: Complex) {
        self.re.add(z.re);
        self.im.add(z.im);
    }

    pub fn value(&self) -> Complex {
        Complex::new(self.re.value(), self.im.value())
    }

    pub fn sum<I: IntoIterator<Item = Complex>>(items: I, extended: bool) -> Complex {
        let mut s = ComplexSum::new(extended);
        for z in items {
            s.add(z);
        }
        s.value()
    }
}
