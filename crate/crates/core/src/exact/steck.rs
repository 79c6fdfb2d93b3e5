//! Rectangle probabilities `P(a_i <= U_{i:n} <= b_i for all i)` for uniform
//! order statistics as the determinant of an upper Hessenberg matrix with
//! entries `m[i,j] = C(j, j-i+1) (b_i - a_j)_+^(j-i+1)`.
//!
//! The expansion alternates in sign and cancels roughly `n` bits, so the
//! recursion runs in binary fixed point with `n + GUARD_BITS` fractional
//! bits. The inputs are converted exactly, binomials are exact integers and
//! every product truncates below the last fractional bit.

use num_bigint::BigInt;
use num_traits::One;

use super::fixed::Fixed;
use super::hessenberg::{leading_minor_recursion, HessenbergSource};
use crate::{GofError, Result};

/// Fractional bits carried beyond the sample size.
const GUARD_BITS: u32 = 128;

/// Lower and upper bounds for the order statistics `U_{1:n} <= ... <= U_{n:n}`.
#[derive(Debug, Clone, PartialEq)]
pub struct RectangleBounds {
    a: Vec<f64>,
    b: Vec<f64>,
}

impl RectangleBounds {
    /// Bounds are clipped to `[0, 1]`; after clipping each vector must be
    /// nondecreasing.
    pub fn new(a: Vec<f64>, b: Vec<f64>) -> Result<Self> {
        if a.len() != b.len() {
            return Err(GofError::Input(format!(
                "lower bounds have length {}, upper bounds {}",
                a.len(),
                b.len()
            )));
        }
        if a.is_empty() {
            return Err(GofError::Input("bounds must cover at least one order statistic".into()));
        }
        if let Some(v) = a.iter().chain(b.iter()).find(|v| v.is_nan()) {
            return Err(GofError::Input(format!("bound {v} is not a number")));
        }
        let clip = |v: Vec<f64>| -> Vec<f64> { v.into_iter().map(|x| x.clamp(0.0, 1.0)).collect() };
        let a = clip(a);
        let b = clip(b);
        for (name, v) in [("lower", &a), ("upper", &b)] {
            if let Some(i) = v.windows(2).position(|w| w[1] < w[0]) {
                return Err(GofError::Input(format!(
                    "{name} bounds decrease at position {}: {} > {}",
                    i + 2,
                    v[i],
                    v[i + 1]
                )));
            }
        }
        Ok(RectangleBounds { a, b })
    }

    pub fn n(&self) -> usize {
        self.a.len()
    }

    pub fn lower(&self) -> &[f64] {
        &self.a
    }

    pub fn upper(&self) -> &[f64] {
        &self.b
    }
}

struct SteckSource {
    a: Vec<Fixed>,
    b: Vec<Fixed>,
    one: Fixed,
    zero: Fixed,
    /// Binomial row `C(j, 0..=j)` for the last requested column.
    binomials: Vec<BigInt>,
}

impl SteckSource {
    fn new(bounds: &RectangleBounds, frac_bits: u32) -> Self {
        let convert = |v: &[f64]| v.iter().map(|&x| Fixed::from_f64(x, frac_bits)).collect();
        SteckSource {
            a: convert(&bounds.a),
            b: convert(&bounds.b),
            one: Fixed::one(frac_bits),
            zero: Fixed::zero(frac_bits),
            binomials: vec![BigInt::one()],
        }
    }
}

impl HessenbergSource<Fixed> for SteckSource {
    fn order(&self) -> usize {
        self.a.len()
    }

    fn column(&mut self, j: usize) -> Vec<Fixed> {
        while self.binomials.len() < j + 1 {
            let prev = &self.binomials;
            let mut next = Vec::with_capacity(prev.len() + 1);
            next.push(BigInt::one());
            for w in prev.windows(2) {
                next.push(&w[0] + &w[1]);
            }
            next.push(BigInt::one());
            self.binomials = next;
        }
        let a_j = &self.a[j - 1];
        (1..=j)
            .map(|i| {
                let gap = self.b[i - 1].sub(a_j);
                if !gap.is_positive() {
                    return self.zero.clone();
                }
                let power = j - i + 1;
                gap.powu(power as u32).mul_int(&self.binomials[power])
            })
            .collect()
    }

    fn subdiagonal(&mut self, _j: usize) -> Fixed {
        // Exponent zero: the entry is C(j, 0) * gap^0 = 1 whatever the sign of the gap.
        self.one.clone()
    }
}

pub(crate) fn steck_with_precision(bounds: &RectangleBounds, frac_bits: u32) -> f64 {
    if bounds.a.iter().zip(&bounds.b).any(|(a, b)| a > b) {
        return 0.0;
    }
    let mut source = SteckSource::new(bounds, frac_bits);
    let one = source.one.clone();
    let det = leading_minor_recursion(&mut source, one);
    det.to_f64().clamp(0.0, 1.0)
}

pub(crate) fn default_frac_bits(n: usize) -> u32 {
    n as u32 + GUARD_BITS
}

/// `P(a_i <= U_{i:n} <= b_i, i = 1..n)`.
pub fn steck_rectangle(bounds: &RectangleBounds) -> f64 {
    steck_with_precision(bounds, default_frac_bits(bounds.n()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    /// Oracle: `n!` times the volume of the ordered boxes, integrated one
    /// coordinate at a time from the top order statistic down. Each nested
    /// integrand is a polynomial between the breakpoints `a_i`, `b_i`, so an
    /// 8-point Gauss-Legendre rule per piece is exact for `n <= 4`.
    fn simplex_oracle(a: &[f64], b: &[f64]) -> f64 {
        fn nested(a: &[f64], b: &[f64], k: usize, upper: f64) -> f64 {
            // Integral over u_k in [a_k, min(b_k, upper)] of nested(k-1, u_k).
            let lo = a[k];
            let hi = b[k].min(upper);
            if hi <= lo {
                return 0.0;
            }
            if k == 0 {
                return hi - lo;
            }
            // Breakpoints where the inner integrand changes form.
            let mut cuts: Vec<f64> = a[..k].iter().chain(b[..k].iter()).copied().filter(|&c| c > lo && c < hi).collect();
            cuts.push(lo);
            cuts.push(hi);
            cuts.sort_by(|x, y| x.partial_cmp(y).unwrap());
            cuts.dedup();
            let (nodes, weights) = gauss_legendre_8();
            let mut total = 0.0;
            for w in cuts.windows(2) {
                let (l, h) = (w[0], w[1]);
                let mid = 0.5 * (l + h);
                let half = 0.5 * (h - l);
                for (x, wt) in nodes.iter().zip(weights.iter()) {
                    total += wt * half * nested(a, b, k - 1, mid + half * x);
                }
            }
            total
        }
        let n = a.len();
        let factorial: f64 = (1..=n).map(|k| k as f64).product();
        factorial * nested(a, b, n - 1, 1.0)
    }

    fn gauss_legendre_8() -> ([f64; 8], [f64; 8]) {
        let x = [
            -0.960_289_856_497_536_3,
            -0.796_666_477_413_626_7,
            -0.525_532_409_916_329,
            -0.183_434_642_495_649_8,
            0.183_434_642_495_649_8,
            0.525_532_409_916_329,
            0.796_666_477_413_626_7,
            0.960_289_856_497_536_3,
        ];
        let w = [
            0.101_228_536_290_376_26,
            0.222_381_034_453_374_47,
            0.313_706_645_877_887_3,
            0.362_683_783_378_362,
            0.362_683_783_378_362,
            0.313_706_645_877_887_3,
            0.222_381_034_453_374_47,
            0.101_228_536_290_376_26,
        ];
        (x, w)
    }

    #[test]
    fn trivial_rectangles() {
        let one = RectangleBounds::new(vec![0.2], vec![0.7]).unwrap();
        assert!((steck_rectangle(&one) - 0.5).abs() < 1e-15);
        let full = RectangleBounds::new(vec![0.0, 0.0], vec![1.0, 1.0]).unwrap();
        assert!((steck_rectangle(&full) - 1.0).abs() < 1e-15);
        let full = RectangleBounds::new(vec![0.0; 40], vec![1.0; 40]).unwrap();
        assert!((steck_rectangle(&full) - 1.0).abs() < 1e-15);
    }

    #[test]
    fn validation() {
        assert!(matches!(RectangleBounds::new(vec![0.1], vec![0.2, 0.3]), Err(GofError::Input(_))));
        assert!(RectangleBounds::new(vec![0.3, 0.1], vec![1.0, 1.0]).is_err());
        let clipped = RectangleBounds::new(vec![-0.5, 0.2], vec![0.9, 1.7]).unwrap();
        assert_eq!(clipped.lower(), &[0.0, 0.2]);
        assert_eq!(clipped.upper(), &[0.9, 1.0]);
        let empty = RectangleBounds::new(vec![0.5, 0.6], vec![0.4, 1.0]).unwrap();
        assert_eq!(steck_rectangle(&empty), 0.0);
    }

    #[test]
    fn two_statistics_closed_form() {
        // P(U_{1:2} <= 0.5 <= U_{2:2}) = 2 * 0.5 * 0.5
        let r = RectangleBounds::new(vec![0.0, 0.5], vec![0.5, 1.0]).unwrap();
        assert!((steck_rectangle(&r) - 0.5).abs() < 1e-15);
    }

    #[test]
    fn matches_simplex_integration() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for n in 1..=4 {
            for _ in 0..100 {
                let mut a: Vec<f64> = (0..n).map(|_| rng.random_range(0.0..0.8)).collect();
                let mut b: Vec<f64> = (0..n).map(|_| rng.random_range(0.2..1.0)).collect();
                a.sort_by(|x, y| x.partial_cmp(y).unwrap());
                b.sort_by(|x, y| x.partial_cmp(y).unwrap());
                let r = RectangleBounds::new(a.clone(), b.clone()).unwrap();
                let got = steck_rectangle(&r);
                let want = if a.iter().zip(&b).any(|(x, y)| x > y) { 0.0 } else { simplex_oracle(&a, &b) };
                assert!((got - want).abs() < 1e-10, "n={n} a={a:?} b={b:?}: {got} vs {want}");
            }
        }
    }

    #[test]
    fn precision_is_sufficient() {
        // Bands of the shape used by the one-sided weighted test.
        for &(n, y, w) in &[(100usize, 1.29, 0.0242), (300, 1.30, 0.0242)] {
            let nf = n as f64;
            let a: Vec<f64> = (1..=n).map(|i| (w / y * i as f64 / nf).max(i as f64 / nf - y / nf.sqrt())).collect();
            let b: Vec<f64> = (1..=n).map(|i| 1.0 - w / y * (1.0 - i as f64 / nf)).collect();
            let r = RectangleBounds::new(a, b).unwrap();
            let base = steck_rectangle(&r);
            let wide = steck_with_precision(&r, 3 * n as u32 + 256);
            assert!((base - wide).abs() < 1e-14, "n={n}: {base} vs {wide}");
            assert!(base > 0.5 && base < 1.0);
        }
    }
}
