//! The prime field used for exact template arithmetic.

use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};
use std::sync::OnceLock;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, ToPrimitive};

use super::field::{Field, FieldTag};
use super::AlgebraError;

/// Field modulus. Fits in 39 bits, so products fit comfortably in `u128`.
pub const MODULUS: u64 = 332_251_314_113;

/// Canonical representative in `[0, MODULUS)`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Fp(u64);

impl Fp {
    pub const ZERO: Fp = Fp(0);
    pub const ONE: Fp = Fp(1);

    pub fn new(v: u64) -> Fp {
        Fp(v % MODULUS)
    }

    pub fn from_i64(v: i64) -> Fp {
        Fp(v.rem_euclid(MODULUS as i64) as u64)
    }

    pub fn from_i128(v: i128) -> Fp {
        Fp(v.rem_euclid(MODULUS as i128) as u64)
    }

    pub fn from_bigint(v: &BigInt) -> Fp {
        let r = v.mod_floor(&BigInt::from(MODULUS));
        Fp(r.to_u64().expect("reduced residue fits in u64"))
    }

    #[inline]
    pub fn value(self) -> u64 {
        self.0
    }

    #[inline]
    pub fn is_zero(self) -> bool {
        self.0 == 0
    }

    /// Multiplicative inverse by the extended Euclidean algorithm.
    pub fn inverse(self) -> Result<Fp, AlgebraError> {
        if self.0 == 0 {
            return Err(AlgebraError::ZeroInverse);
        }
        let (mut r0, mut r1) = (MODULUS as i128, self.0 as i128);
        let (mut t0, mut t1) = (0i128, 1i128);
        while r1 != 0 {
            let q = r0 / r1;
            (r0, r1) = (r1, r0 - q * r1);
            (t0, t1) = (t1, t0 - q * t1);
        }
        debug_assert_eq!(r0, 1);
        Ok(Fp::from_i128(t0))
    }

    pub fn pow(self, mut e: u64) -> Fp {
        let mut base = self;
        let mut acc = Fp::ONE;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc * base;
            }
            base = base * base;
            e >>= 1;
        }
        acc
    }

    /// Symmetric representative in `(-p/2, p/2]`, handy when reading back small integers.
    pub fn to_signed(self) -> i64 {
        if self.0 > MODULUS / 2 {
            self.0 as i64 - MODULUS as i64
        } else {
            self.0 as i64
        }
    }
}

impl Add for Fp {
    type Output = Fp;
    #[inline]
    fn add(self, rhs: Fp) -> Fp {
        let s = self.0 + rhs.0;
        Fp(if s >= MODULUS { s - MODULUS } else { s })
    }
}

impl Sub for Fp {
    type Output = Fp;
    #[inline]
    fn sub(self, rhs: Fp) -> Fp {
        if self.0 >= rhs.0 {
            Fp(self.0 - rhs.0)
        } else {
            Fp(self.0 + MODULUS - rhs.0)
        }
    }
}

impl Mul for Fp {
    type Output = Fp;
    #[inline]
    fn mul(self, rhs: Fp) -> Fp {
        Fp(((self.0 as u128 * rhs.0 as u128) % MODULUS as u128) as u64)
    }
}

impl Neg for Fp {
    type Output = Fp;
    #[inline]
    fn neg(self) -> Fp {
        if self.0 == 0 {
            self
        } else {
            Fp(MODULUS - self.0)
        }
    }
}

impl AddAssign for Fp {
    fn add_assign(&mut self, rhs: Fp) {
        *self = *self + rhs;
    }
}

impl SubAssign for Fp {
    fn sub_assign(&mut self, rhs: Fp) {
        *self = *self - rhs;
    }
}

impl fmt::Display for Fp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl fmt::Debug for Fp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

fn pow_mod(mut b: u64, mut e: u64, m: u64) -> u64 {
    let mut acc = 1 % m;
    b %= m;
    while e > 0 {
        if e & 1 == 1 {
            acc = mul_mod(acc, b, m);
        }
        b = mul_mod(b, b, m);
        e >>= 1;
    }
    acc
}

/// Deterministic Miller-Rabin; the witness set is exact for all 64-bit inputs.
pub fn is_prime_u64(n: u64) -> bool {
    const WITNESSES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];
    if n < 2 {
        return false;
    }
    for &w in &WITNESSES {
        if n.is_multiple_of(w) {
            return n == w;
        }
    }
    let s = (n - 1).trailing_zeros();
    let d = (n - 1) >> s;
    'witness: for &a in &WITNESSES {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

static MODULUS_IS_PRIME: OnceLock<bool> = OnceLock::new();

/// Coefficient field `Z_p` for `p = MODULUS`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct PrimeField;

impl PrimeField {
    pub fn new() -> PrimeField {
        let ok = *MODULUS_IS_PRIME.get_or_init(|| is_prime_u64(MODULUS));
        assert!(ok, "field modulus {MODULUS} is not prime");
        PrimeField
    }
}

impl Default for PrimeField {
    fn default() -> Self {
        PrimeField::new()
    }
}

impl Field for PrimeField {
    type Elem = Fp;

    fn zero(&self) -> Fp {
        Fp::ZERO
    }

    fn one(&self) -> Fp {
        Fp::ONE
    }

    fn from_i64(&self, v: i64) -> Fp {
        Fp::from_i64(v)
    }

    fn is_zero(&self, a: &Fp) -> bool {
        a.is_zero()
    }

    fn add(&self, a: &Fp, b: &Fp) -> Fp {
        *a + *b
    }

    fn sub(&self, a: &Fp, b: &Fp) -> Fp {
        *a - *b
    }

    fn mul(&self, a: &Fp, b: &Fp) -> Fp {
        *a * *b
    }

    fn neg(&self, a: &Fp) -> Fp {
        -*a
    }

    fn inv(&self, a: &Fp) -> Result<Fp, AlgebraError> {
        a.inverse()
    }

    fn equal(&self, a: &Fp, b: &Fp) -> bool {
        a == b
    }

    fn fingerprint(&self, a: &Fp) -> Option<u64> {
        Some(a.0)
    }

    /// Any integer, reduced modulo p.
    fn from_decimal(&self, s: &str) -> Result<Fp, AlgebraError> {
        let v: BigInt = s
            .parse()
            .map_err(|_| AlgebraError::Parse(format!("not an integer: {s:?}")))?;
        Ok(Fp::from_bigint(&v))
    }

    fn tag(&self) -> FieldTag {
        FieldTag::Prime { modulus: MODULUS }
    }

    fn format(&self, a: &Fp) -> String {
        a.0.to_string()
    }

    fn parse(&self, s: &str) -> Result<Fp, AlgebraError> {
        let v: BigInt = s
            .parse()
            .map_err(|_| AlgebraError::Parse(format!("not an integer: {s:?}")))?;
        if v.is_negative() || v >= BigInt::from(MODULUS) {
            return Err(AlgebraError::Parse(format!(
                "residue {s} outside [0, {MODULUS})"
            )));
        }
        Ok(Fp::from_bigint(&v))
    }
}
