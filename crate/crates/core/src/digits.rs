//! Base-`k` codecs for natural numbers and for `S_k`, the nonnegative
//! `k`-adic rationals.
//!
//! Words are stored most-significant symbol first, exactly as they are
//! written. Digit symbols are `0..k`; the radix point is the symbol `k`
//! (see [`radix`]).

use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use num_bigint::BigUint;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// A word over a digit alphabet, most significant symbol first.
pub type Word = Vec<u8>;

/// The radix symbol of the base-`k` alphabet.
pub const fn radix(k: u32) -> u8 {
    k as u8
}

fn check_base(k: u32) -> Result<()> {
    if !(2..=64).contains(&k) {
        return Err(Error::InvalidArgument("base must lie in 2..=64"));
    }
    Ok(())
}

/// `(n)_k`; zero encodes as the empty word.
pub fn encode_nat(mut n: u64, k: u32) -> Word {
    let mut out = Vec::new();
    while n > 0 {
        out.push((n % k as u64) as u8);
        n /= k as u64;
    }
    out.reverse();
    out
}

pub fn encode_nat_big(n: &BigUint, k: u32) -> Word {
    if n.is_zero() {
        return Vec::new();
    }
    n.to_radix_be(k).into_iter().collect()
}

/// `[w]_k` for a word without leading zeros.
pub fn decode_nat(w: &[u8], k: u32) -> Result<u64> {
    check_base(k)?;
    if w.first() == Some(&0) {
        return Err(Error::LeadingZero);
    }
    let mut n: u64 = 0;
    for &d in w {
        if d as u32 >= k {
            return Err(Error::InvalidDigit {
                digit: d as u32,
                base: k,
            });
        }
        n = n
            .checked_mul(k as u64)
            .and_then(|n| n.checked_add(d as u64))
            .ok_or(Error::InvalidArgument("value exceeds 64 bits"))?;
    }
    Ok(n)
}

pub fn decode_nat_big(w: &[u8], k: u32) -> Result<BigUint> {
    if w.first() == Some(&0) {
        return Err(Error::LeadingZero);
    }
    digits_value(w, k)
}

/// Positional value of a digit word, ignoring leading zeros.
pub fn digits_value(w: &[u8], k: u32) -> Result<BigUint> {
    let mut n = BigUint::zero();
    for &d in w {
        if d as u32 >= k {
            return Err(Error::InvalidDigit {
                digit: d as u32,
                base: k,
            });
        }
        n = n * k + d as u32;
    }
    Ok(n)
}

/// A nonnegative `p`-adic rational `numerator / p^exponent` in lowest terms.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SpRational {
    base: u32,
    numerator: BigUint,
    exponent: u32,
}

impl SpRational {
    pub fn new(base: u32, numerator: BigUint, exponent: u32) -> Result<Self> {
        check_base(base)?;
        let mut x = SpRational {
            base,
            numerator,
            exponent,
        };
        x.normalize();
        Ok(x)
    }

    pub fn from_nat(base: u32, n: u64) -> Result<Self> {
        Self::new(base, BigUint::from(n), 0)
    }

    pub fn zero(base: u32) -> Result<Self> {
        Self::new(base, BigUint::zero(), 0)
    }

    fn normalize(&mut self) {
        if self.numerator.is_zero() {
            self.exponent = 0;
            return;
        }
        let k = BigUint::from(self.base);
        while self.exponent > 0 {
            let (q, r) = self.numerator.div_rem(&k);
            if !r.is_zero() {
                break;
            }
            self.numerator = q;
            self.exponent -= 1;
        }
    }

    /// Converts an exact rational; fails outside `S_k`.
    pub fn from_ratio(base: u32, x: &BigRational) -> Result<Self> {
        check_base(base)?;
        if x < &BigRational::zero() {
            return Err(Error::NotInSp(base));
        }
        let mut den = x.denom().to_biguint().ok_or(Error::NotInSp(base))?;
        let num = x.numer().to_biguint().ok_or(Error::NotInSp(base))?;
        let k = BigUint::from(base);
        let mut e = 0u32;
        let mut scale = BigUint::one();
        // den must divide some power of k.
        while !den.is_one() {
            let g = den.gcd(&k);
            if g.is_one() {
                return Err(Error::NotInSp(base));
            }
            den /= &g;
            scale *= &k / &g;
            e += 1;
        }
        Self::new(base, num * scale, e)
    }

    pub fn to_ratio(&self) -> BigRational {
        let den = BigUint::from(self.base).pow(self.exponent);
        BigRational::new(self.numerator.clone().into(), den.into())
    }

    pub fn base(&self) -> u32 {
        self.base
    }

    pub fn numerator(&self) -> &BigUint {
        &self.numerator
    }

    pub fn exponent(&self) -> u32 {
        self.exponent
    }

    pub fn is_zero(&self) -> bool {
        self.numerator.is_zero()
    }
}

/// A word over `{0..k-1} ∪ {radix}`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct RadixWord {
    base: u32,
    symbols: Word,
}

impl RadixWord {
    pub fn new(base: u32, symbols: Word) -> Result<Self> {
        check_base(base)?;
        if let Some(&s) = symbols.iter().find(|&&s| s as u32 > base) {
            return Err(Error::InvalidDigit {
                digit: s as u32,
                base,
            });
        }
        Ok(RadixWord { base, symbols })
    }

    /// Parses the text form, using `.` for the radix point.
    pub fn parse(text: &str, base: u32) -> Result<Self> {
        check_base(base)?;
        let mut symbols = Vec::with_capacity(text.len());
        for c in text.chars() {
            if c == '.' || c == '•' {
                symbols.push(radix(base));
                continue;
            }
            let d = c
                .to_digit(36)
                .ok_or(Error::InvalidExpansion("unknown character"))?;
            if d >= base {
                return Err(Error::InvalidDigit { digit: d, base });
            }
            symbols.push(d as u8);
        }
        Ok(RadixWord { base, symbols })
    }

    pub fn base(&self) -> u32 {
        self.base
    }

    pub fn symbols(&self) -> &[u8] {
        &self.symbols
    }

    pub fn into_symbols(self) -> Word {
        self.symbols
    }

    /// Membership in the language of valid expansions.
    pub fn validate(&self) -> Result<()> {
        validate_expansion(&self.symbols, self.base)
    }

    pub fn is_valid(&self) -> bool {
        self.validate().is_ok()
    }

    /// Splits a valid word into its integer and fractional digit strings.
    pub fn split(&self) -> Result<(&[u8], &[u8])> {
        self.validate()?;
        let r = radix(self.base);
        let at = self
            .symbols
            .iter()
            .position(|&s| s == r)
            .expect("validated");
        Ok((&self.symbols[..at], &self.symbols[at + 1..]))
    }
}

impl fmt::Display for RadixWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let r = radix(self.base);
        for &s in &self.symbols {
            if s == r {
                f.write_str(".")?;
            } else {
                let c = char::from_digit(s as u32, 36).unwrap_or('?');
                write!(f, "{}", c)?;
            }
        }
        Ok(())
    }
}

/// Checks the valid-expansion conditions: nonempty, no zero at either end,
/// exactly one radix point.
pub fn validate_expansion(symbols: &[u8], k: u32) -> Result<()> {
    let r = radix(k);
    if symbols.is_empty() {
        return Err(Error::InvalidExpansion("empty word"));
    }
    if symbols[0] == 0 {
        return Err(Error::InvalidExpansion("leading zero"));
    }
    if symbols[symbols.len() - 1] == 0 {
        return Err(Error::InvalidExpansion("trailing zero"));
    }
    match symbols.iter().filter(|&&s| s == r).count() {
        0 => Err(Error::InvalidExpansion("missing radix point")),
        1 => Ok(()),
        _ => Err(Error::InvalidExpansion("more than one radix point")),
    }
}

/// The minimal valid expansion of `x`.
pub fn encode_sp(x: &SpRational) -> RadixWord {
    let k = x.base;
    let kk = BigUint::from(k);
    let den = kk.pow(x.exponent);
    let (int, mut frac) = x.numerator.div_rem(&den);
    let mut symbols = encode_nat_big(&int, k);
    symbols.push(radix(k));
    // Fractional digits: exactly `exponent` of them, the last nonzero by minimality.
    let mut scale = den;
    for _ in 0..x.exponent {
        scale /= &kk;
        let (d, r) = frac.div_rem(&scale);
        symbols.push(d.to_u8().expect("digit"));
        frac = r;
    }
    RadixWord { base: k, symbols }
}

/// `[u]_k` of a valid expansion.
pub fn decode_sp(w: &RadixWord) -> Result<SpRational> {
    let (int, frac) = w.split()?;
    let k = w.base;
    let int_val = digits_value(int, k)?;
    let frac_val = digits_value(frac, k)?;
    let den = BigUint::from(k).pow(frac.len() as u32);
    SpRational::new(k, int_val * &den + frac_val, frac.len() as u32)
}

/// Exact value of any word with at most one radix point, by positional
/// arithmetic; leading and trailing zeros are allowed.
pub fn positional_value(symbols: &[u8], k: u32) -> Result<BigRational> {
    let r = radix(k);
    let (int, frac) = match symbols.iter().position(|&s| s == r) {
        Some(i) => (&symbols[..i], &symbols[i + 1..]),
        None => (symbols, &symbols[symbols.len()..]),
    };
    if frac.contains(&r) {
        return Err(Error::InvalidExpansion("more than one radix point"));
    }
    let int_val = digits_value(int, k)?;
    let frac_val = digits_value(frac, k)?;
    let den = BigUint::from(k).pow(frac.len() as u32);
    Ok(BigRational::new(
        (int_val * &den + frac_val).into(),
        den.into(),
    ))
}

pub fn word_to_string(symbols: &[u8], k: u32) -> String {
    alloc::format!(
        "{}",
        RadixWord {
            base: k,
            symbols: symbols.to_vec()
        }
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::string::ToString;
    use alloc::vec;

    #[test]
    fn binary_thirteen() {
        assert_eq!(encode_nat(13, 2), vec![1, 1, 0, 1]);
        assert_eq!(decode_nat(&[1, 1, 0, 1], 2), Ok(13));
        assert_eq!(encode_nat(5, 3), vec![1, 2]);
        assert_eq!(decode_nat(&[1, 2], 3), Ok(5));
    }

    #[test]
    fn zero_is_empty_word() {
        assert!(encode_nat(0, 7).is_empty());
        assert_eq!(decode_nat(&[], 7), Ok(0));
    }

    #[test]
    fn decode_nat_errors() {
        assert_eq!(decode_nat(&[0, 1], 2), Err(Error::LeadingZero));
        assert_eq!(
            decode_nat(&[1, 2], 2),
            Err(Error::InvalidDigit { digit: 2, base: 2 })
        );
    }

    #[test]
    fn sp_examples() {
        let zero = SpRational::zero(2).unwrap();
        assert_eq!(encode_sp(&zero).to_string(), ".");
        let x = SpRational::new(2, BigUint::from(13u32), 2).unwrap();
        assert_eq!(encode_sp(&x).to_string(), "11.01");
        let quarter = decode_sp(&RadixWord::parse(".01", 2).unwrap()).unwrap();
        assert_eq!(quarter, SpRational::new(2, BigUint::from(1u32), 2).unwrap());
        assert_eq!(
            decode_sp(&RadixWord::parse(".", 3).unwrap()).unwrap(),
            SpRational::zero(3).unwrap()
        );
    }

    #[test]
    fn invalid_expansions() {
        for bad in ["", "01.", "1.10", "11", "1.1.", "0."] {
            let w = RadixWord::parse(bad, 2).unwrap();
            assert!(decode_sp(&w).is_err(), "{:?} accepted", bad);
        }
        // Valid by the language even though a shorter word has the same value
        // is impossible here: validity forbids padding at both ends.
        assert!(RadixWord::parse("10.", 2).unwrap().is_valid());
    }

    #[test]
    fn normalization_is_minimal() {
        let x = SpRational::new(2, BigUint::from(12u32), 3).unwrap();
        assert_eq!(x.numerator(), &BigUint::from(3u32));
        assert_eq!(x.exponent(), 1);
        let r = BigRational::new(3.into(), 6.into());
        assert!(SpRational::from_ratio(2, &r).is_ok());
        assert_eq!(
            SpRational::from_ratio(3, &r),
            SpRational::new(3, BigUint::from(3u32), 0).and(Err(Error::NotInSp(3)))
        );
        // 1/2 is in S_6 (= 3/6)
        let half = BigRational::new(1.into(), 2.into());
        assert_eq!(SpRational::from_ratio(6, &half).unwrap().to_ratio(), half);
    }
}
