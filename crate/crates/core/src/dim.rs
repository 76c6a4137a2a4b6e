//! Exact integer dimensions in scaled points, plus the math-unit (mu) type.
//!
//! All arithmetic is integer arithmetic; scaling by a rational truncates
//! toward zero, matching TeX's `\divide`/`xn_over_d` behaviour. One point is
//! 65536 scaled points and one pica is 12 points.

use std::fmt;
use std::ops::{Add, AddAssign, Neg, Sub, SubAssign};

/// Scaled points per printer's point.
pub const SP_PER_PT: i64 = 65536;

/// A length in scaled points (1/65536 pt), always exact.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Dim(pub i64);

impl Dim {
    pub const ZERO: Dim = Dim(0);

    pub fn from_sp(sp: i64) -> Dim {
        Dim(sp)
    }

    pub fn from_pt(pt: i64) -> Dim {
        Dim(pt.checked_mul(SP_PER_PT).expect("dimension overflow"))
    }

    pub fn from_pc(pc: i64) -> Dim {
        Dim::from_pt(pc.checked_mul(12).expect("dimension overflow"))
    }

    /// Parses a decimal point value like `4.3055` into scaled points.
    /// The fractional part is rounded to the nearest scaled point, the way
    /// TeX's `round_decimals` resolves written constants.
    pub fn from_pt_decimal(int_part: i64, frac_num: i64, frac_den: i64) -> Dim {
        assert!(frac_den > 0 && frac_num >= 0 && frac_num < frac_den);
        let whole = int_part.checked_mul(SP_PER_PT).expect("dimension overflow");
        let frac = (frac_num * SP_PER_PT + frac_den / 2) / frac_den;
        Dim(if int_part < 0 { whole - frac } else { whole + frac })
    }

    pub fn sp(self) -> i64 {
        self.0
    }

    /// Scales by `num/den`, truncating toward zero.
    pub fn scale_frac(self, num: i64, den: i64) -> Dim {
        assert!(den != 0, "zero denominator");
        let prod = (self.0 as i128)
            .checked_mul(num as i128)
            .expect("dimension overflow");
        let q = prod / den as i128;
        Dim(i64::try_from(q).expect("dimension overflow"))
    }

    /// Multiplies by a small integer, checked.
    pub fn scale_int(self, n: i64) -> Dim {
        Dim(self.0.checked_mul(n).expect("dimension overflow"))
    }

    /// Integer division truncating toward zero (TeX `\divide`).
    pub fn divide(self, n: i64) -> Dim {
        assert!(n != 0, "zero divisor");
        Dim(self.0 / n)
    }

    pub fn min(self, other: Dim) -> Dim {
        Dim(self.0.min(other.0))
    }

    pub fn max(self, other: Dim) -> Dim {
        Dim(self.0.max(other.0))
    }

    pub fn abs(self) -> Dim {
        Dim(self.0.abs())
    }

    pub fn is_zero(self) -> bool {
        self.0 == 0
    }

    /// Whole points, truncated toward zero.
    pub fn to_pt_trunc(self) -> i64 {
        self.0 / SP_PER_PT
    }
}

impl Add for Dim {
    type Output = Dim;
    fn add(self, rhs: Dim) -> Dim {
        Dim(self.0.checked_add(rhs.0).expect("dimension overflow"))
    }
}

impl Sub for Dim {
    type Output = Dim;
    fn sub(self, rhs: Dim) -> Dim {
        Dim(self.0.checked_sub(rhs.0).expect("dimension overflow"))
    }
}

impl AddAssign for Dim {
    fn add_assign(&mut self, rhs: Dim) {
        *self = *self + rhs;
    }
}

impl SubAssign for Dim {
    fn sub_assign(&mut self, rhs: Dim) {
        *self = *self - rhs;
    }
}

impl Neg for Dim {
    type Output = Dim;
    fn neg(self) -> Dim {
        Dim(-self.0)
    }
}

impl fmt::Display for Dim {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}sp", self.0)
    }
}

/// A math-unit length in 1/65536 mu. Eighteen mu make one em of the
/// current style's font, so conversion to scaled points needs a quad.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Mu(pub i64);

impl Mu {
    pub const ZERO: Mu = Mu(0);

    pub fn from_units(mu: i64) -> Mu {
        Mu(mu.checked_mul(65536).expect("mu overflow"))
    }

    /// `num/den` mu, truncated toward zero in scaled-mu units.
    pub fn from_frac(num: i64, den: i64) -> Mu {
        assert!(den != 0);
        Mu((num as i128 * 65536 / den as i128) as i64)
    }

    /// Thousandths of a mu (`from_milli(450)` is 0.45mu), truncated.
    pub fn from_milli(milli: i64) -> Mu {
        Mu::from_frac(milli, 1000)
    }

    /// Scales by a written decimal factor the way TeX scans `.1\thinmuskip`:
    /// the factor is first rounded to a 16-bit fraction, then the product is
    /// truncated.
    pub fn scale_decimal(self, int_part: i64, frac_num: i64, frac_den: i64) -> Mu {
        assert!(frac_den > 0);
        let fixed = int_part * 65536 + (frac_num * 65536 + frac_den / 2) / frac_den;
        Mu((self.0 as i128 * fixed as i128 / 65536) as i64)
    }

    pub fn scale_int(self, n: i64) -> Mu {
        Mu(self.0.checked_mul(n).expect("mu overflow"))
    }

    pub fn units_trunc(self) -> i64 {
        self.0 / 65536
    }
}

impl Add for Mu {
    type Output = Mu;
    fn add(self, rhs: Mu) -> Mu {
        Mu(self.0.checked_add(rhs.0).expect("mu overflow"))
    }
}

impl Neg for Mu {
    type Output = Mu;
    fn neg(self) -> Mu {
        Mu(-self.0)
    }
}

impl fmt::Display for Mu {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}msu", self.0)
    }
}

/// Converts a mu value to a dimension given the quad of the current style:
/// `mu * quad / 18`, truncated toward zero.
pub fn mu_to_dim(mu: Mu, quad: Dim) -> Dim {
    let prod = mu.0 as i128 * quad.0 as i128;
    Dim((prod / (18 * 65536)) as i64)
}

/// The `\dimentomu@` pipeline: take whole hundredths of a point (truncated),
/// multiply by 18 and integer-divide by 1000. The original assumes a 10pt
/// quad; this is kept bit-for-bit for the accent ledger.
pub fn dim_to_mu_units(d: Dim) -> i64 {
    let hundredths = (d.0 as i128 * 100) / SP_PER_PT as i128;
    (hundredths * 18 / 1000) as i64
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn mu_conversion_examples() {
        let quad10 = Dim::from_pt(10);
        // 18mu at a 10pt quad is exactly one em.
        assert_eq!(mu_to_dim(Mu::from_units(18), quad10), Dim::from_pt(10));
        assert_eq!(mu_to_dim(Mu::ZERO, quad10), Dim::ZERO);
        // floor(1.5/18 * 10 * 65536) = 54613
        assert_eq!(mu_to_dim(Mu::from_frac(3, 2), quad10), Dim(54613));
    }

    #[test]
    fn dim_to_mu_examples() {
        assert_eq!(dim_to_mu_units(Dim::from_pt(10)), 18);
        assert_eq!(dim_to_mu_units(Dim::ZERO), 0);
        // floor(250 * 18 / 1000) = 4
        assert_eq!(dim_to_mu_units(Dim::from_pt_decimal(2, 5, 10)), 4);
    }

    #[test]
    fn pica_and_point() {
        assert_eq!(Dim::from_pc(1), Dim::from_pt(12));
        assert_eq!(Dim::from_pc(2) + Dim::from_pt(6), Dim(30 * 65536));
    }

    #[test]
    fn scale_truncates_toward_zero() {
        assert_eq!(Dim(10).scale_frac(1, 3), Dim(3));
        assert_eq!(Dim(-10).scale_frac(1, 3), Dim(-3));
        assert_eq!(Dim(7).divide(2), Dim(3));
        assert_eq!(Dim(-7).divide(2), Dim(-3));
    }

    #[test]
    fn decimal_factor_matches_tex_rounding() {
        // .1 scans to 6554/65536, so .1 of thinmuskip (3mu) is 19662 scaled mu.
        let thin = Mu::from_units(3);
        assert_eq!(thin.scale_decimal(0, 1, 10), Mu(19662));
    }
}
