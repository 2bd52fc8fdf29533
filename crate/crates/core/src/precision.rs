//! Arbitrary-precision scalars, precision contexts and the decimal
//! serialization used by caches and reports.
//!
//! MPFR floats carry a 30-bit exponent, so magnitudes such as `e^{±10^6}`
//! are representable without any rescaling tricks.

use std::fmt;

use rug::{Assign, Complex, Float};
use serde::{Deserialize, Serialize};

use crate::error::{GwwError, Result};

pub type APReal = Float;
pub type APComplex = Complex;

pub const DEFAULT_GUARD_BITS: u32 = 64;
pub const DEFAULT_MAX_DOUBLINGS: u32 = 4;
pub const MIN_BITS: u32 = 64;
pub const MAX_BITS: u32 = 1 << 20;

/// Agreement digits reported when two values are bit-identical.
pub const EXACT_AGREEMENT: u32 = 100_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PrecisionContext {
    pub bits: u32,
    pub guard_bits: u32,
    pub target_digits: u32,
    pub max_doublings: u32,
}

impl PrecisionContext {
    /// Context with the default guard and a target of `bits / 4` digits.
    pub fn new(bits: u32) -> Result<Self> {
        let ctx = PrecisionContext {
            bits,
            guard_bits: DEFAULT_GUARD_BITS,
            target_digits: bits / 4,
            max_doublings: DEFAULT_MAX_DOUBLINGS,
        };
        ctx.validate()?;
        Ok(ctx)
    }

    pub fn with_target_digits(mut self, digits: u32) -> Result<Self> {
        self.target_digits = digits;
        self.validate()?;
        Ok(self)
    }

    pub fn with_guard_bits(mut self, guard: u32) -> Self {
        self.guard_bits = guard;
        self
    }

    pub fn with_max_doublings(mut self, doublings: u32) -> Self {
        self.max_doublings = doublings;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if self.bits < MIN_BITS || self.bits > MAX_BITS {
            return Err(GwwError::InvalidPrecision(format!(
                "bits = {} outside [{MIN_BITS}, {MAX_BITS}]",
                self.bits
            )));
        }
        if u64::from(self.bits) < 4 * u64::from(self.target_digits) {
            return Err(GwwError::InvalidPrecision(format!(
                "bits = {} cannot carry {} decimal digits",
                self.bits, self.target_digits
            )));
        }
        Ok(())
    }

    /// Mantissa size used for intermediate sums.
    pub fn working_bits(&self) -> u32 {
        self.bits + self.guard_bits
    }

    /// The same context at twice the mantissa size (target unchanged).
    pub fn doubled(&self) -> Self {
        PrecisionContext {
            bits: self.bits.saturating_mul(2).min(MAX_BITS),
            ..*self
        }
    }

    /// Context at `bits` with every other policy inherited.
    pub fn at_bits(&self, bits: u32) -> Self {
        PrecisionContext { bits, ..*self }
    }

    pub fn real<T>(&self, v: T) -> APReal
    where
        APReal: Assign<T>,
    {
        Float::with_val(self.bits, v)
    }

    pub fn complex<T>(&self, v: T) -> APComplex
    where
        APComplex: Assign<T>,
    {
        Complex::with_val(self.bits, v)
    }

    pub fn pi(&self) -> APReal {
        Float::with_val(self.bits, rug::float::Constant::Pi)
    }

    /// `2^{-bits}`, one unit in the last place relative to 1.
    pub fn epsilon(&self) -> APReal {
        Float::with_val(self.bits, 1u32) >> self.bits
    }

    /// `2^{-bits + slack}`, the relative tolerance form used by every check.
    pub fn tolerance(&self, slack: i32) -> APReal {
        let e = slack - self.bits as i32;
        let one = Float::with_val(self.bits, 1u32);
        if e >= 0 {
            one << e as u32
        } else {
            one >> (-e) as u32
        }
    }
}

impl fmt::Display for PrecisionContext {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} bits (+{} guard, target {} digits)",
            self.bits, self.guard_bits, self.target_digits
        )
    }
}

/// `log10 |x|` as an `f64`, safe for magnitudes far outside the `f64` range.
pub fn log10_abs(x: &APReal) -> f64 {
    if x.is_zero() {
        return f64::NEG_INFINITY;
    }
    let a = Float::with_val(64, x.abs_ref());
    Float::with_val(64, a.log10_ref()).to_f64()
}

/// `log10 |z|` for complex input.
pub fn log10_abs_c(z: &APComplex) -> f64 {
    log10_abs(&abs_c(z))
}

/// `|z|` at the precision of `z`.
pub fn abs_c(z: &APComplex) -> APReal {
    Float::with_val(z.prec().0, z.abs_ref())
}

/// Number of leading decimal digits on which `a` and `b` agree, measured
/// relative to the larger modulus.
pub fn agreeing_digits(a: &APComplex, b: &APComplex) -> u32 {
    let diff = Complex::with_val(64, a - b);
    if diff.real().is_zero() && diff.imag().is_zero() {
        return EXACT_AGREEMENT;
    }
    let d = Float::with_val(64, diff.abs_ref());
    let sa = Float::with_val(64, a.abs_ref());
    let sb = Float::with_val(64, b.abs_ref());
    let scale = if sa > sb { sa } else { sb };
    if scale.is_zero() {
        return 0;
    }
    let digits = log10_abs(&scale) - log10_abs(&d);
    if digits.is_finite() && digits > 0.0 {
        (digits.floor() as u32).min(EXACT_AGREEMENT)
    } else {
        0
    }
}

/// Values that can be compared between two precision runs.
pub trait Agreement {
    fn agreement_digits(&self, other: &Self) -> u32;
}

impl Agreement for APComplex {
    fn agreement_digits(&self, other: &Self) -> u32 {
        agreeing_digits(self, other)
    }
}

impl Agreement for APReal {
    fn agreement_digits(&self, other: &Self) -> u32 {
        let a = Complex::with_val(self.prec(), self);
        let b = Complex::with_val(other.prec(), other);
        agreeing_digits(&a, &b)
    }
}

impl<T: Agreement> Agreement for Vec<T> {
    fn agreement_digits(&self, other: &Self) -> u32 {
        if self.len() != other.len() {
            return 0;
        }
        self.iter()
            .zip(other)
            .map(|(a, b)| a.agreement_digits(b))
            .min()
            .unwrap_or(EXACT_AGREEMENT)
    }
}

/// Result of a precision-escalated computation.
#[derive(Clone, Debug)]
pub struct Escalated<T> {
    pub value: T,
    pub achieved_digits: u32,
    pub bits_used: u32,
}

/// Runs `computation` at `ctx.bits` and `2·ctx.bits`, doubling until the two
/// runs agree to `target_digits + 5` digits.
pub fn with_precision<T, F>(ctx: &PrecisionContext, computation: F) -> Result<Escalated<T>>
where
    T: Agreement,
    F: Fn(&PrecisionContext) -> Result<T>,
{
    ctx.validate()?;
    let needed = ctx.target_digits + 5;
    let mut low_ctx = *ctx;
    let mut low = computation(&low_ctx)?;
    let mut best = 0;
    for doubling in 0..=ctx.max_doublings {
        let high_ctx = low_ctx.doubled();
        let high = computation(&high_ctx)?;
        let agree = low.agreement_digits(&high);
        best = best.max(agree);
        if agree >= needed {
            return Ok(Escalated {
                value: high,
                achieved_digits: agree.min(ctx.target_digits),
                bits_used: high_ctx.bits,
            });
        }
        if doubling == ctx.max_doublings || high_ctx.bits == MAX_BITS {
            break;
        }
        low_ctx = high_ctx;
        low = high;
    }
    Err(GwwError::PrecisionEscalation {
        doublings: ctx.max_doublings,
        best_digits: best,
        needed,
    })
}

/// Decimal form of a real scalar tagged with its precision:
/// `{"p": bits, "v": "<d.ddd>e<exp>"}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DecimalReal {
    pub p: u32,
    pub v: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DecimalComplex {
    pub re: DecimalReal,
    pub im: DecimalReal,
}

/// Shortest decimal string, in scientific notation, that reads back to `x`
/// at its own precision.
pub fn to_decimal_string(x: &APReal) -> String {
    let sign = if x.is_sign_negative() { "-" } else { "" };
    if x.is_nan() {
        return "nan".to_string();
    }
    if x.is_infinite() {
        return format!("{sign}inf");
    }
    if x.is_zero() {
        return format!("{sign}0");
    }
    // Round-tripping is monotone in the digit count, so bisect for the least.
    let reads_back = |n: usize| {
        let (neg, d, e) = x.to_sign_string_exp(10, Some(n));
        let text = format!("{}0.{d}e{}", if neg { "-" } else { "" }, e.unwrap_or(0));
        Float::parse(&text)
            .map(|v| Float::with_val(x.prec(), v) == *x)
            .unwrap_or(false)
    };
    let (_, full, _) = x.to_sign_string_exp(10, None);
    let (mut lo, mut hi) = (1, full.len());
    while lo < hi {
        let mid = (lo + hi) / 2;
        if reads_back(mid) {
            hi = mid;
        } else {
            lo = mid + 1;
        }
    }
    let (_, mut digits, exp) = x.to_sign_string_exp(10, Some(lo));
    while digits.len() > 1 && digits.ends_with('0') {
        digits.pop();
    }
    // `0.d₁d₂… × 10^exp` becomes `d₁.d₂… × 10^(exp-1)`.
    let exp = i64::from(exp.unwrap_or(0)) - 1;
    let (head, tail) = digits.split_at(1);
    if tail.is_empty() {
        format!("{sign}{head}e{exp}")
    } else {
        format!("{sign}{head}.{tail}e{exp}")
    }
}

/// Parses a string written by [`to_decimal_string`] (or any decimal float)
/// at `parse_bits`, then widens or rounds to `bits`.
pub fn from_decimal_string(s: &str, parse_bits: u32, bits: u32) -> Result<APReal> {
    let t = s.trim();
    let value = match t {
        "nan" => Float::with_val(parse_bits, rug::float::Special::Nan),
        "+inf" | "inf" => Float::with_val(parse_bits, rug::float::Special::Infinity),
        "-inf" => Float::with_val(parse_bits, rug::float::Special::NegInfinity),
        _ => {
            let parsed = Float::parse(t).map_err(|e| GwwError::Parse(format!("`{t}`: {e}")))?;
            Float::with_val(parse_bits, parsed)
        }
    };
    let mut out = value;
    out.set_prec(bits);
    Ok(out)
}

impl DecimalReal {
    pub fn encode(x: &APReal) -> Self {
        DecimalReal {
            p: x.prec(),
            v: to_decimal_string(x),
        }
    }

    /// Value at its tagged precision.
    pub fn decode(&self) -> Result<APReal> {
        from_decimal_string(&self.v, self.p, self.p)
    }

    /// Value widened (exactly) or rounded to `bits`.
    pub fn decode_at(&self, bits: u32) -> Result<APReal> {
        from_decimal_string(&self.v, self.p, bits)
    }
}

impl DecimalComplex {
    pub fn encode(z: &APComplex) -> Self {
        DecimalComplex {
            re: DecimalReal::encode(z.real()),
            im: DecimalReal::encode(z.imag()),
        }
    }

    pub fn decode(&self) -> Result<APComplex> {
        Ok(Complex::with_val(
            (self.re.p, self.im.p),
            (self.re.decode()?, self.im.decode()?),
        ))
    }

    pub fn decode_at(&self, bits: u32) -> Result<APComplex> {
        Ok(Complex::with_val(
            bits,
            (self.re.decode_at(bits)?, self.im.decode_at(bits)?),
        ))
    }
}
