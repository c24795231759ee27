//! Arbitrary-precision reference values shared by the integration tests.
#![allow(dead_code)]

use astro_float::{expr, BigFloat, Consts, RoundingMode};

const P: usize = 320;
const RM: RoundingMode = RoundingMode::ToEven;

pub struct Hp {
    cc: Consts,
}

impl Hp {
    pub fn new() -> Self {
        Hp {
            cc: Consts::new().expect("astro-float constants"),
        }
    }

    fn big(x: f64) -> BigFloat {
        BigFloat::from_f64(x, P)
    }

    fn to_f64(x: &BigFloat) -> f64 {
        x.to_string()
            .parse()
            .expect("BigFloat renders as a float literal")
    }

    /// φ(v) from its defining trigonometric polynomial.
    pub fn phi(&mut self, v: f64) -> f64 {
        let v = Self::big(v);
        let tv = v.mul(&Self::big(2.0), P, RM);
        let c = tv.cos(P, RM, &mut self.cc);
        let s = tv.sin(P, RM, &mut self.cc);
        let v2 = v.mul(&v, P, RM);
        let r = expr!(
            -9 - 2 * v2 - v2 * v2
                + (9 - 16 * v2 + 3 * v2 * v2) * c
                + v * (18 - 8 * v2 + v2 * v2) * s,
            (P, RM, &mut self.cc)
        );
        Self::to_f64(&r)
    }

    /// φ(v)/vⁿ.
    pub fn phi_ratio(&mut self, v: f64, n: i32) -> f64 {
        self.phi(v) / v.powi(n)
    }

    /// Δ(v) from its defining expression.
    pub fn delta(&mut self, v: f64) -> f64 {
        let v = Self::big(v);
        let s = v.sin(P, RM, &mut self.cc);
        let c = v.cos(P, RM, &mut self.cc);
        let tv = v.mul(&Self::big(2.0), P, RM);
        let s2 = tv.sin(P, RM, &mut self.cc);
        let v2 = v.mul(&v, P, RM);
        let r = expr!(
            (3 - 2 * v2 + v2 * v2) * s * s - v * (3 - v2) * s2 + 3 * v2 * c * c,
            (P, RM, &mut self.cc)
        );
        Self::to_f64(&r)
    }

    /// Si(x) by its Maclaurin series, summed at 320 bits.
    pub fn sine_integral(&mut self, x: f64) -> f64 {
        let x = Self::big(x);
        let x2 = x.mul(&x, P, RM);
        let mut term = x.clone();
        let mut sum = x.clone();
        let mut k = 0u64;
        loop {
            k += 1;
            let d = Self::big(((2 * k) * (2 * k + 1)) as f64);
            term = term.mul(&x2, P, RM).div(&d, P, RM).neg();
            let add = term.div(&Self::big((2 * k + 1) as f64), P, RM);
            sum = sum.add(&add, P, RM);
            if k > 20 && add.exponent().unwrap_or(i32::MIN) < sum.exponent().unwrap_or(0) - 200 {
                break;
            }
        }
        Self::to_f64(&sum)
    }

    /// 1/(e^{ω/T} − 1) − 1/(e^{ω/T′} − 1).
    pub fn thermal_weight(&mut self, omega: f64, t: f64, tp: f64) -> f64 {
        let one = Self::big(1.0);
        let n = |this: &mut Self, temp: f64| {
            let e = Self::big(omega)
                .div(&Self::big(temp), P, RM)
                .exp(P, RM, &mut this.cc);
            one.div(&e.sub(&one, P, RM), P, RM)
        };
        let a = n(self, t);
        let b = n(self, tp);
        Self::to_f64(&a.sub(&b, P, RM))
    }
}

/// Euler–Mascheroni constant to 40 digits.
pub const EULER_GAMMA_40: f64 = 0.577_215_664_901_532_860_606_512_090_082_402_431_04;

/// Composite Simpson rule on `n` (even) panels, refined once and
/// Richardson-extrapolated.
pub fn simpson_richardson<F: FnMut(f64) -> f64>(mut f: F, a: f64, b: f64, n: usize) -> f64 {
    let mut simpson = |m: usize| {
        let h = (b - a) / m as f64;
        let mut s = f(a) + f(b);
        for i in 1..m {
            s += if i % 2 == 1 { 4.0 } else { 2.0 } * f(a + h * i as f64);
        }
        s * h / 3.0
    };
    let coarse = simpson(n);
    let fine = simpson(2 * n);
    fine + (fine - coarse) / 15.0
}

/// Relative difference, with 0 for two zeros.
pub fn rel(a: f64, b: f64) -> f64 {
    if a == b {
        0.0
    } else {
        (a - b).abs() / a.abs().max(b.abs())
    }
}
