//! Exact scalar arithmetic over the rationals and prime fields, plus the
//! integer combinatorics (binomials and their GCDs) used elsewhere.

use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum FieldError {
    NotPrime(u64),
    Parse(String),
}

impl fmt::Display for FieldError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FieldError::NotPrime(p) => write!(f, "{p} is not a prime"),
            FieldError::Parse(s) => write!(f, "invalid field spec `{s}` (expected `q` or `fp:P`)"),
        }
    }
}

impl core::error::Error for FieldError {}

/// Runtime description of a coefficient field: characteristic 0 means the
/// rationals, otherwise the prime field of that order.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FieldSpec {
    characteristic: u64,
}

impl FieldSpec {
    pub const RATIONALS: FieldSpec = FieldSpec { characteristic: 0 };

    pub fn prime(p: u64) -> Result<Self, FieldError> {
        if is_prime(p) {
            Ok(FieldSpec { characteristic: p })
        } else {
            Err(FieldError::NotPrime(p))
        }
    }

    pub fn characteristic(&self) -> u64 {
        self.characteristic
    }

    pub fn is_rationals(&self) -> bool {
        self.characteristic == 0
    }
}

impl fmt::Display for FieldSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.characteristic == 0 {
            f.write_str("q")
        } else {
            write!(f, "fp:{}", self.characteristic)
        }
    }
}

impl FromStr for FieldSpec {
    type Err = FieldError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let t = s.trim();
        if t.eq_ignore_ascii_case("q") {
            return Ok(FieldSpec::RATIONALS);
        }
        let p = t
            .strip_prefix("fp:")
            .and_then(|rest| rest.parse::<u64>().ok())
            .ok_or_else(|| FieldError::Parse(s.to_string()))?;
        FieldSpec::prime(p)
    }
}

/// A field together with the arithmetic of its elements.
///
/// The field value is a context object: elements carry no modulus of their
/// own and every operation goes through `&self`.
#[allow(clippy::wrong_self_convention)]
pub trait Field: Clone + fmt::Debug + PartialEq + Send + Sync + 'static {
    type Elem: Clone + PartialEq + Eq + fmt::Debug + Send + Sync + 'static;

    fn spec(&self) -> FieldSpec;
    fn zero(&self) -> Self::Elem;
    fn one(&self) -> Self::Elem;
    fn is_zero(&self, a: &Self::Elem) -> bool;
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn sub(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn neg(&self, a: &Self::Elem) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    /// `None` exactly for zero.
    fn inv(&self, a: &Self::Elem) -> Option<Self::Elem>;
    fn from_bigint(&self, v: &BigInt) -> Self::Elem;
    /// Image of `num/den`; `None` when `den` vanishes in the field.
    fn from_ratio(&self, num: &BigInt, den: &BigInt) -> Option<Self::Elem>;
    /// Canonical numerator and positive denominator (residues print with denominator 1).
    fn to_ratio(&self, a: &Self::Elem) -> (BigInt, BigInt);

    fn characteristic(&self) -> u64 {
        self.spec().characteristic()
    }

    fn is_one(&self, a: &Self::Elem) -> bool {
        *a == self.one()
    }

    fn from_i64(&self, v: i64) -> Self::Elem {
        self.from_bigint(&BigInt::from(v))
    }

    fn div(&self, a: &Self::Elem, b: &Self::Elem) -> Option<Self::Elem> {
        self.inv(b).map(|bi| self.mul(a, &bi))
    }

    fn add_assign(&self, a: &mut Self::Elem, b: &Self::Elem) {
        *a = self.add(a, b);
    }

    /// `a -= b * c`, the elimination kernel.
    fn sub_mul_assign(&self, a: &mut Self::Elem, b: &Self::Elem, c: &Self::Elem) {
        let t = self.mul(b, c);
        *a = self.sub(a, &t);
    }

    fn pow(&self, a: &Self::Elem, mut e: u64) -> Self::Elem {
        let mut base = a.clone();
        let mut acc = self.one();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            base = self.mul(&base, &base);
            e >>= 1;
        }
        acc
    }

    fn fmt_elem(&self, a: &Self::Elem) -> String {
        let (num, den) = self.to_ratio(a);
        if den.is_one() {
            num.to_string()
        } else {
            alloc::format!("{num}/{den}")
        }
    }
}

/// The rationals with arbitrary-precision numerators and denominators.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct Rationals;

impl Field for Rationals {
    type Elem = BigRational;

    fn spec(&self) -> FieldSpec {
        FieldSpec::RATIONALS
    }
    fn zero(&self) -> BigRational {
        BigRational::zero()
    }
    fn one(&self) -> BigRational {
        BigRational::one()
    }
    fn is_zero(&self, a: &BigRational) -> bool {
        a.is_zero()
    }
    fn is_one(&self, a: &BigRational) -> bool {
        a.is_one()
    }
    fn add(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a + b
    }
    fn sub(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a - b
    }
    fn neg(&self, a: &BigRational) -> BigRational {
        -a
    }
    fn mul(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a * b
    }
    fn inv(&self, a: &BigRational) -> Option<BigRational> {
        if a.is_zero() {
            None
        } else {
            Some(a.recip())
        }
    }
    fn from_bigint(&self, v: &BigInt) -> BigRational {
        BigRational::from_integer(v.clone())
    }
    fn from_ratio(&self, num: &BigInt, den: &BigInt) -> Option<BigRational> {
        if den.is_zero() {
            None
        } else {
            Some(BigRational::new(num.clone(), den.clone()))
        }
    }
    fn to_ratio(&self, a: &BigRational) -> (BigInt, BigInt) {
        (a.numer().clone(), a.denom().clone())
    }
    fn add_assign(&self, a: &mut BigRational, b: &BigRational) {
        *a += b;
    }
    fn sub_mul_assign(&self, a: &mut BigRational, b: &BigRational, c: &BigRational) {
        *a -= b * c;
    }
}

/// The prime field of order `p`; residues live in `[0, p)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct PrimeField {
    p: u64,
}

impl PrimeField {
    pub fn new(p: u64) -> Result<Self, FieldError> {
        if is_prime(p) {
            Ok(PrimeField { p })
        } else {
            Err(FieldError::NotPrime(p))
        }
    }

    pub fn modulus(&self) -> u64 {
        self.p
    }

    pub fn from_u64(&self, v: u64) -> u64 {
        v % self.p
    }

    fn reduce_bigint(&self, v: &BigInt) -> u64 {
        let r = v.mod_floor(&BigInt::from(self.p));
        r.to_u64().expect("residue fits in a word")
    }
}

impl Field for PrimeField {
    type Elem = u64;

    fn spec(&self) -> FieldSpec {
        FieldSpec { characteristic: self.p }
    }
    fn zero(&self) -> u64 {
        0
    }
    fn one(&self) -> u64 {
        1
    }
    fn is_zero(&self, a: &u64) -> bool {
        *a == 0
    }
    fn add(&self, a: &u64, b: &u64) -> u64 {
        ((*a as u128 + *b as u128) % self.p as u128) as u64
    }
    fn sub(&self, a: &u64, b: &u64) -> u64 {
        if a >= b {
            a - b
        } else {
            ((*a as u128 + self.p as u128) - *b as u128) as u64
        }
    }
    fn neg(&self, a: &u64) -> u64 {
        if *a == 0 {
            0
        } else {
            self.p - a
        }
    }
    fn mul(&self, a: &u64, b: &u64) -> u64 {
        ((*a as u128 * *b as u128) % self.p as u128) as u64
    }
    fn inv(&self, a: &u64) -> Option<u64> {
        if *a == 0 {
            return None;
        }
        // Fermat: a^(p-2)
        Some(self.pow(a, self.p - 2))
    }
    fn from_bigint(&self, v: &BigInt) -> u64 {
        self.reduce_bigint(v)
    }
    fn from_ratio(&self, num: &BigInt, den: &BigInt) -> Option<u64> {
        let d = self.reduce_bigint(den);
        self.inv(&d).map(|di| self.mul(&self.reduce_bigint(num), &di))
    }
    fn to_ratio(&self, a: &u64) -> (BigInt, BigInt) {
        (BigInt::from(*a), BigInt::one())
    }
    fn from_i64(&self, v: i64) -> u64 {
        let m = (v as i128).rem_euclid(self.p as i128);
        m as u64
    }
}

fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

fn pow_mod(mut a: u64, mut e: u64, m: u64) -> u64 {
    let mut acc = 1 % m;
    a %= m;
    while e > 0 {
        if e & 1 == 1 {
            acc = mul_mod(acc, a, m);
        }
        a = mul_mod(a, a, m);
        e >>= 1;
    }
    acc
}

/// Deterministic Miller-Rabin for 64-bit inputs.
pub fn is_prime(n: u64) -> bool {
    const WITNESSES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];
    if n < 2 {
        return false;
    }
    for &w in &WITNESSES {
        if n.is_multiple_of(w) {
            return n == w;
        }
    }
    let mut d = n - 1;
    let mut s = 0;
    while d.is_multiple_of(2) {
        d /= 2;
        s += 1;
    }
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

/// `C(a, b)`, zero when `b > a`.
pub fn binom(a: u64, b: u64) -> BigUint {
    if b > a {
        return BigUint::zero();
    }
    let b = b.min(a - b);
    let mut acc = BigUint::one();
    for i in 0..b {
        acc *= a - i;
        acc /= i + 1;
    }
    acc
}

/// GCD over `r = 1..=m` of `C(n - m + r, r)` where `m = floor(n/2) + 1`.
///
/// The `r = 1` term is `n - m + 1`, so only its prime factors can divide
/// the GCD. By Kummer's theorem `v_p(C(a + r, r))` is the number of carries
/// when adding `a` and `r` in base `p`; the GCD is the product of
/// `p^(min_r carries)`.
pub fn gcd_binomials(n: u64) -> BigUint {
    assert!(n >= 1, "gcd_binomials needs n >= 1");
    let m = n / 2 + 1;
    let base = n - m;
    let mut g = BigUint::one();
    for p in prime_factors(base + 1) {
        let mut least = u32::MAX;
        for r in 1..=m {
            least = least.min(carries(base, r, p));
            if least == 0 {
                break;
            }
        }
        g *= BigUint::from(p).pow(least);
    }
    g
}

fn prime_factors(mut k: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= k {
        if k.is_multiple_of(d) {
            out.push(d);
            while k.is_multiple_of(d) {
                k /= d;
            }
        }
        d += 1;
    }
    if k > 1 {
        out.push(k);
    }
    out
}

/// Carries when adding `a` and `b` in base `p`.
fn carries(mut a: u64, mut b: u64, p: u64) -> u32 {
    let mut carry = 0;
    let mut count = 0;
    while a > 0 || b > 0 || carry > 0 {
        let s = a % p + b % p + carry;
        carry = u64::from(s >= p);
        count += carry as u32;
        a /= p;
        b /= p;
    }
    count
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec::Vec;
    use num_traits::Signed;
    use proptest::prelude::*;

    fn pascal(rows: usize) -> Vec<Vec<BigUint>> {
        let mut t: Vec<Vec<BigUint>> = Vec::new();
        for k in 0..rows {
            let mut row = alloc::vec![BigUint::one(); k + 1];
            for r in 1..k {
                row[r] = &t[k - 1][r - 1] + &t[k - 1][r];
            }
            t.push(row);
        }
        t
    }

    #[test]
    fn binom_examples() {
        assert_eq!(binom(4, 3), BigUint::from(4u32));
        assert_eq!(binom(3, 0), BigUint::one());
        assert_eq!(binom(3, 5), BigUint::zero());
        let t = pascal(41);
        assert_eq!(t[40][20], BigUint::from(137846528820u64));
        assert_eq!(binom(40, 20), t[40][20]);
    }

    #[test]
    fn binom_matches_pascal_rule() {
        for k in 1..=60u64 {
            for r in 1..k {
                assert_eq!(binom(k, r), binom(k - 1, r) + binom(k - 1, r - 1));
            }
        }
    }

    #[test]
    fn gcd_binomials_examples() {
        assert_eq!(gcd_binomials(1), BigUint::one());
        assert_eq!(gcd_binomials(4), BigUint::one());
        assert_eq!(gcd_binomials(5), BigUint::one());
        // direct enumeration of the binomials
        for n in 1..=150u64 {
            let m = n / 2 + 1;
            let g = (1..=m).fold(BigUint::zero(), |g, r| g.gcd(&binom(n - m + r, r)));
            assert_eq!(gcd_binomials(n), g, "n = {n}");
        }
    }

    #[test]
    fn kummer_carries() {
        for p in [2u64, 3, 5, 7] {
            for a in 0..40u64 {
                for b in 0..40u64 {
                    let mut c = binom(a + b, b);
                    let mut v = 0;
                    while (&c % p).is_zero() {
                        c /= p;
                        v += 1;
                    }
                    assert_eq!(carries(a, b, p), v, "a = {a}, b = {b}, p = {p}");
                }
            }
        }
        assert_eq!(prime_factors(360), [2, 3, 5]);
        assert_eq!(prime_factors(1), Vec::<u64>::new());
    }

    #[test]
    fn spec_parsing() {
        assert_eq!("q".parse::<FieldSpec>().unwrap(), FieldSpec::RATIONALS);
        assert_eq!("fp:3".parse::<FieldSpec>().unwrap().characteristic(), 3);
        assert_eq!("fp:4".parse::<FieldSpec>(), Err(FieldError::NotPrime(4)));
        assert!("fp:".parse::<FieldSpec>().is_err());
        assert!("r".parse::<FieldSpec>().is_err());
        assert_eq!(FieldSpec::prime(7).unwrap().to_string(), "fp:7");
    }

    #[test]
    fn primality() {
        let small: Vec<u64> = (0..60).filter(|&k| is_prime(k)).collect();
        assert_eq!(small, [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59]);
        assert!(is_prime(18446744073709551557));
        assert!(!is_prime(3215031751)); // strong pseudoprime to bases 2, 3, 5, 7
        assert!(!is_prime(1 << 61));
    }

    #[test]
    fn prime_field_basics() {
        let f = PrimeField::new(7).unwrap();
        assert_eq!(f.from_i64(-1), 6);
        assert_eq!(f.inv(&3), Some(5));
        assert_eq!(f.inv(&0), None);
        assert_eq!(f.from_ratio(&BigInt::from(1), &BigInt::from(2)), Some(4));
        assert_eq!(f.from_ratio(&BigInt::from(1), &BigInt::from(14)), None);
        let big = PrimeField::new(18446744073709551557).unwrap();
        let a = big.from_i64(-2);
        assert_eq!(big.add(&a, &a), big.from_i64(-4));
        assert_eq!(big.mul(&a, &big.inv(&a).unwrap()), 1);
    }

    fn rat(n: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    proptest! {
        #[test]
        fn rational_axioms(a in (-50i64..50, 1i64..20), b in (-50i64..50, 1i64..20), c in (-50i64..50, 1i64..20)) {
            let q = Rationals;
            let (a, b, c) = (rat(a.0, a.1), rat(b.0, b.1), rat(c.0, c.1));
            prop_assert_eq!(q.mul(&q.mul(&a, &b), &c), q.mul(&a, &q.mul(&b, &c)));
            prop_assert_eq!(q.mul(&a, &q.add(&b, &c)), q.add(&q.mul(&a, &b), &q.mul(&a, &c)));
            if !q.is_zero(&a) {
                prop_assert!(q.is_one(&q.mul(&a, &q.inv(&a).unwrap())));
            }
            // canonical form: equality agrees with cross-multiplication
            let (an, ad) = q.to_ratio(&a);
            let (bn, bd) = q.to_ratio(&b);
            prop_assert_eq!(a == b, &an * &bd == &bn * &ad);
            prop_assert!(ad.is_positive());
        }

        #[test]
        fn prime_field_axioms(p in prop::sample::select(alloc::vec![2u64, 3, 5, 7, 65521, 4294967291]),
                              a in any::<i64>(), b in any::<i64>(), c in any::<i64>()) {
            let f = PrimeField::new(p).unwrap();
            let (a, b, c) = (f.from_i64(a), f.from_i64(b), f.from_i64(c));
            prop_assert!(a < p && b < p && c < p);
            prop_assert_eq!(f.mul(&f.mul(&a, &b), &c), f.mul(&a, &f.mul(&b, &c)));
            prop_assert_eq!(f.mul(&a, &f.add(&b, &c)), f.add(&f.mul(&a, &b), &f.mul(&a, &c)));
            prop_assert_eq!(f.add(&f.sub(&a, &b), &b), a);
            if a != 0 {
                prop_assert_eq!(f.mul(&a, &f.inv(&a).unwrap()), 1);
            }
        }
    }
}
