//! Binary fixed-point numbers on top of `BigInt`, used where an alternating
//! determinant expansion cancels far more digits than `f64` carries.

use num_bigint::{BigInt, Sign};
use num_traits::{One, Signed, ToPrimitive, Zero};

/// `raw * 2^-frac_bits`. Operands of one computation share `frac_bits`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub(crate) struct Fixed {
    raw: BigInt,
    frac_bits: u32,
}

impl Fixed {
    pub fn zero(frac_bits: u32) -> Self {
        Fixed {
            raw: BigInt::zero(),
            frac_bits,
        }
    }

    pub fn one(frac_bits: u32) -> Self {
        Fixed {
            raw: BigInt::one() << frac_bits,
            frac_bits,
        }
    }

    /// Exact conversion up to truncation below `2^-frac_bits`.
    pub fn from_f64(x: f64, frac_bits: u32) -> Self {
        assert!(x.is_finite(), "fixed-point conversion of non-finite value");
        if x == 0.0 {
            return Fixed::zero(frac_bits);
        }
        let bits = x.to_bits();
        let exponent = ((bits >> 52) & 0x7ff) as i64;
        let fraction = bits & ((1u64 << 52) - 1);
        let (mantissa, exp2) = if exponent == 0 {
            (fraction, -1074)
        } else {
            (fraction | (1u64 << 52), exponent - 1075)
        };
        let mut raw = BigInt::from(mantissa);
        let shift = exp2 + frac_bits as i64;
        if shift >= 0 {
            raw <<= shift as usize;
        } else {
            raw >>= (-shift) as usize;
        }
        if x < 0.0 {
            raw = -raw;
        }
        Fixed { raw, frac_bits }
    }

    pub fn to_f64(&self) -> f64 {
        let bits = self.raw.bits();
        let (mantissa, extra) = if bits > 64 {
            let extra = bits - 64;
            (&self.raw >> extra as usize, extra as i64)
        } else {
            (self.raw.clone(), 0)
        };
        let m = mantissa.to_f64().unwrap_or(0.0);
        libm::scalbn(m, (extra - self.frac_bits as i64) as i32)
    }

    pub fn is_zero(&self) -> bool {
        self.raw.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.raw.sign() == Sign::Plus && self.raw == (BigInt::one() << self.frac_bits)
    }

    pub fn is_positive(&self) -> bool {
        self.raw.is_positive()
    }

    pub fn add(&self, other: &Fixed) -> Fixed {
        Fixed {
            raw: &self.raw + &other.raw,
            frac_bits: self.frac_bits,
        }
    }

    pub fn sub(&self, other: &Fixed) -> Fixed {
        Fixed {
            raw: &self.raw - &other.raw,
            frac_bits: self.frac_bits,
        }
    }

    pub fn mul(&self, other: &Fixed) -> Fixed {
        Fixed {
            raw: (&self.raw * &other.raw) >> self.frac_bits as usize,
            frac_bits: self.frac_bits,
        }
    }

    /// Multiply by an integer, exactly.
    pub fn mul_int(&self, k: &BigInt) -> Fixed {
        Fixed {
            raw: &self.raw * k,
            frac_bits: self.frac_bits,
        }
    }

    /// `self^e` by binary powering.
    pub fn powu(&self, mut e: u32) -> Fixed {
        let mut result = Fixed::one(self.frac_bits);
        let mut base = self.clone();
        while e > 0 {
            if e & 1 == 1 {
                result = result.mul(&base);
                if result.is_zero() {
                    break;
                }
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        result
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn conversions_round_trip() {
        for &x in &[0.0, 1.0, -1.0, 0.1, 1e-30, 3.75, 123456.789, -2.5e-7] {
            let f = Fixed::from_f64(x, 200);
            assert_eq!(f.to_f64(), x, "{x}");
        }
        // Truncation below the last fractional bit.
        assert!(Fixed::from_f64(1e-30, 64).is_zero());
    }

    #[test]
    fn arithmetic() {
        let p = 128;
        let a = Fixed::from_f64(0.75, p);
        let b = Fixed::from_f64(-0.5, p);
        assert_eq!(a.add(&b).to_f64(), 0.25);
        assert_eq!(a.sub(&b).to_f64(), 1.25);
        assert_eq!(a.mul(&b).to_f64(), -0.375);
        assert_eq!(a.powu(3).to_f64(), 0.421875);
        assert_eq!(a.powu(0).to_f64(), 1.0);
        assert_eq!(a.mul_int(&BigInt::from(12)).to_f64(), 9.0);
        assert!(Fixed::one(p).is_one());
        assert!(!a.is_one());
    }

    #[test]
    fn wide_values_convert() {
        let p = 1500;
        let big = Fixed::one(p).mul_int(&(BigInt::one() << 900usize));
        assert_eq!(big.to_f64(), 2f64.powi(900));
    }
}
