//! Exact arithmetic in the rational group ring `Q[Z_n]`.
//!
//! An element is a coefficient vector over the powers `zeta^0, ..., zeta^{n-1}`
//! of a primitive `n`-th root of unity, stored as integer numerators over one
//! positive common denominator. Arithmetic happens modulo `x^n - 1`, so raw
//! vectors are not unique: two elements are equal as complex numbers exactly
//! when their remainders modulo the cyclotomic polynomial `Phi_n` agree.
//! [`GroupRingElement::canonical`] computes that remainder, and `PartialEq`
//! compares canonical forms.

use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, Mutex, OnceLock};

use num_bigint::BigInt;
use num_complex::Complex64;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::{Error, Result};

pub type Rat = BigRational;

/// `num/den` with the sign on the numerator, `"0/1"` for zero.
pub fn format_rat(r: &Rat) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

/// Integer polynomial, constant term first.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntPoly {
    coeffs: Vec<i64>,
}

impl IntPoly {
    pub fn coeffs(&self) -> &[i64] {
        &self.coeffs
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn is_monic(&self) -> bool {
        self.coeffs.last() == Some(&1)
    }
}

impl fmt::Display for IntPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (k, &c) in self.coeffs.iter().enumerate().rev() {
            if c == 0 {
                continue;
            }
            let sign = if c < 0 { "-" } else { "+" };
            if first {
                if c < 0 {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {sign} ")?;
            }
            first = false;
            let a = c.abs();
            match k {
                0 => write!(f, "{a}")?,
                _ => {
                    if a != 1 {
                        write!(f, "{a}*")?;
                    }
                    if k == 1 {
                        write!(f, "x")?
                    } else {
                        write!(f, "x^{k}")?
                    }
                }
            }
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

pub fn euler_phi(n: usize) -> usize {
    let (mut m, mut out) = (n, n);
    let mut d = 2;
    while d * d <= m {
        if m % d == 0 {
            while m % d == 0 {
                m /= d;
            }
            out -= out / d;
        }
        d += 1;
    }
    if m > 1 {
        out -= out / m;
    }
    out
}

fn mobius(mut n: usize) -> i32 {
    let mut sign = 1;
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            n /= d;
            if n.is_multiple_of(d) {
                return 0;
            }
            sign = -sign;
        }
        d += 1;
    }
    if n > 1 {
        sign = -sign;
    }
    sign
}

/// The `n`-th cyclotomic polynomial, memoised.
///
/// Built from `x^n - 1 = prod_{d | n} Phi_d` in its Moebius-inverted form
/// `Phi_n = prod_{d | n} (1 - x^d)^{mu(n/d)}` (for `n > 1`), evaluated as a
/// power series truncated past degree `phi(n)`; each factor and each exact
/// division by a factor is a single linear pass.
pub fn cyclotomic_poly(n: usize) -> Arc<IntPoly> {
    assert!(n >= 1, "cyclotomic polynomial of order 0");
    static CACHE: OnceLock<Mutex<HashMap<usize, Arc<IntPoly>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(Default::default);
    if let Some(p) = cache.lock().unwrap().get(&n) {
        return Arc::clone(p);
    }
    let poly = Arc::new(compute_cyclotomic(n));
    cache.lock().unwrap().insert(n, Arc::clone(&poly));
    poly
}

fn compute_cyclotomic(n: usize) -> IntPoly {
    if n == 1 {
        return IntPoly {
            coeffs: vec![-1, 1],
        };
    }
    let deg = euler_phi(n);
    let mut s = vec![0i128; deg + 1];
    s[0] = 1;
    let divisors: Vec<usize> = (1..=n).filter(|d| n.is_multiple_of(*d)).collect();
    // multiply first so intermediate series stay polynomial-sized
    for &d in &divisors {
        if mobius(n / d) == 1 {
            for i in (d..=deg).rev() {
                s[i] -= s[i - d];
            }
        }
    }
    for &d in &divisors {
        if mobius(n / d) == -1 {
            for i in d..=deg {
                s[i] += s[i - d];
            }
        }
    }
    let coeffs = s
        .into_iter()
        .map(|c| i64::try_from(c).expect("cyclotomic coefficient overflows i64"))
        .collect();
    IntPoly { coeffs }
}

/// Element of `Q[Z_n]`: `sum_m num[m] / den * zeta^m`.
#[derive(Clone, Debug)]
pub struct GroupRingElement {
    num: Vec<BigInt>,
    den: BigInt,
}

impl GroupRingElement {
    pub fn zero(n: usize) -> Self {
        assert!(n >= 1, "group ring of order 0");
        GroupRingElement {
            num: vec![BigInt::zero(); n],
            den: BigInt::one(),
        }
    }

    pub fn one(n: usize) -> Self {
        Self::unit(n, 0)
    }

    /// `zeta^m`, exponent taken mod `n`.
    pub fn unit(n: usize, m: i64) -> Self {
        let mut e = Self::zero(n);
        e.num[m.rem_euclid(n as i64) as usize] = BigInt::one();
        e
    }

    pub fn constant(n: usize, value: &Rat) -> Self {
        let mut e = Self::zero(n);
        e.num[0] = value.numer().clone();
        e.den = value.denom().clone();
        e
    }

    /// Integer-coefficient element from raw multiplicity counts.
    pub fn from_counts(counts: &[i64]) -> Self {
        GroupRingElement {
            num: counts.iter().map(|&c| BigInt::from(c)).collect(),
            den: BigInt::one(),
        }
    }

    pub fn from_parts(num: Vec<BigInt>, den: BigInt) -> Result<Self> {
        if num.is_empty() {
            return Err(Error::OrderMismatch(0, 0));
        }
        if den.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let mut e = GroupRingElement { num, den };
        e.normalize();
        Ok(e)
    }

    pub fn n(&self) -> usize {
        self.num.len()
    }

    pub fn numerators(&self) -> &[BigInt] {
        &self.num
    }

    pub fn denominator(&self) -> &BigInt {
        &self.den
    }

    /// Raw coefficient of `zeta^m` (not canonical).
    pub fn coeff(&self, m: usize) -> Rat {
        Rat::new(self.num[m].clone(), self.den.clone())
    }

    /// True when `d * self` has integer coefficients.
    pub fn scaled_is_integral(&self, d: &BigInt) -> bool {
        (d % &self.den).is_zero() || self.num.iter().all(|c| (c * d % &self.den).is_zero())
    }

    fn normalize(&mut self) {
        if self.den.is_negative() {
            self.den = -&self.den;
            for c in &mut self.num {
                *c = -&*c;
            }
        }
        if self.den.is_one() {
            return;
        }
        let mut g = self.den.clone();
        for c in &self.num {
            if g.is_one() {
                break;
            }
            if !c.is_zero() {
                g = g.gcd(c);
            }
        }
        if !g.is_one() {
            self.den /= &g;
            for c in &mut self.num {
                *c /= &g;
            }
        }
    }

    fn check(&self, other: &Self) -> Result<()> {
        if self.n() == other.n() {
            Ok(())
        } else {
            Err(Error::OrderMismatch(self.n(), other.n()))
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        let mut out = self.clone();
        out.add_shifted(other, 0)?;
        Ok(out)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        GroupRingElement {
            num: self.num.iter().map(|c| -c).collect(),
            den: self.den.clone(),
        }
    }

    /// In-place `self += other * zeta^k`.
    pub fn add_shifted(&mut self, other: &Self, k: i64) -> Result<()> {
        self.check(other)?;
        let n = self.n();
        let k = k.rem_euclid(n as i64) as usize;
        if self.den == other.den {
            for (m, c) in other.num.iter().enumerate() {
                if !c.is_zero() {
                    self.num[(m + k) % n] += c;
                }
            }
        } else {
            let l = self.den.lcm(&other.den);
            let fs = &l / &self.den;
            let fo = &l / &other.den;
            if !fs.is_one() {
                for c in &mut self.num {
                    *c *= &fs;
                }
            }
            for (m, c) in other.num.iter().enumerate() {
                if !c.is_zero() {
                    self.num[(m + k) % n] += c * &fo;
                }
            }
            self.den = l;
        }
        self.normalize();
        Ok(())
    }

    /// `self * zeta^k`.
    pub fn shift(&self, k: i64) -> Self {
        let n = self.n();
        let k = k.rem_euclid(n as i64) as usize;
        let mut num = vec![BigInt::zero(); n];
        for (m, c) in self.num.iter().enumerate() {
            num[(m + k) % n] = c.clone();
        }
        GroupRingElement {
            num,
            den: self.den.clone(),
        }
    }

    pub fn scale(&self, s: &Rat) -> Self {
        let mut out = GroupRingElement {
            num: self.num.iter().map(|c| c * s.numer()).collect(),
            den: &self.den * s.denom(),
        };
        out.normalize();
        out
    }

    /// Cyclic convolution.
    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        let num = convolve(&self.num, &other.num);
        let mut out = GroupRingElement {
            num,
            den: &self.den * &other.den,
        };
        out.normalize();
        Ok(out)
    }

    /// Remainder modulo `Phi_n`, as `phi(n)` rational coefficients
    /// (constant term first). Equal complex values have equal forms.
    pub fn canonical(&self) -> Vec<Rat> {
        reduce_mod_cyclotomic(&self.num)
            .into_iter()
            .map(|c| Rat::new(c, self.den.clone()))
            .collect()
    }

    pub fn is_zero(&self) -> bool {
        reduce_mod_cyclotomic(&self.num).iter().all(Zero::is_zero)
    }

    /// The exact value when the canonical form is a constant.
    pub fn to_rational(&self) -> Result<Rat> {
        let red = reduce_mod_cyclotomic(&self.num);
        if red.iter().skip(1).all(Zero::is_zero) {
            Ok(Rat::new(red[0].clone(), self.den.clone()))
        } else {
            Err(Error::NonRational(self.to_string()))
        }
    }

    /// Complex value under `zeta -> exp(2 pi i / n)`. Diagnostic only.
    pub fn embed(&self) -> Complex64 {
        let n = self.n() as f64;
        let den = self.den.to_f64().unwrap_or(f64::INFINITY);
        self.num
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(m, c)| {
                let w = c.to_f64().unwrap_or(f64::NAN) / den;
                Complex64::from_polar(w, std::f64::consts::TAU * m as f64 / n)
            })
            .sum()
    }
}

impl PartialEq for GroupRingElement {
    fn eq(&self, other: &Self) -> bool {
        if self.n() != other.n() {
            return false;
        }
        let diff: Vec<BigInt> = self
            .num
            .iter()
            .zip(&other.num)
            .map(|(a, b)| a * &other.den - b * &self.den)
            .collect();
        reduce_mod_cyclotomic(&diff).iter().all(Zero::is_zero)
    }
}

impl Eq for GroupRingElement {}

impl fmt::Display for GroupRingElement {
    /// Canonical form as a polynomial in `z`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let terms: Vec<String> = self
            .canonical()
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(k, c)| match k {
                0 => format!("{c}"),
                1 => format!("({c})*z"),
                _ => format!("({c})*z^{k}"),
            })
            .collect();
        if terms.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", terms.join(" + "))
        }
    }
}

fn to_i128_vec(v: &[BigInt]) -> Option<Vec<i128>> {
    v.iter().map(|c| c.to_i128()).collect()
}

fn convolve(a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
    let n = a.len();
    if let (Some(x), Some(y)) = (to_i128_vec(a), to_i128_vec(b)) {
        let max = |v: &[i128]| v.iter().map(|c| c.unsigned_abs()).max().unwrap_or(0);
        let bound = max(&x)
            .checked_mul(max(&y))
            .and_then(|m| m.checked_mul(n as u128));
        if bound.is_some_and(|b| b < (1u128 << 126)) {
            let mut out = vec![0i128; n];
            for (i, &u) in x.iter().enumerate() {
                if u == 0 {
                    continue;
                }
                for (j, &v) in y.iter().enumerate() {
                    let k = if i + j >= n { i + j - n } else { i + j };
                    out[k] += u * v;
                }
            }
            return out.into_iter().map(BigInt::from).collect();
        }
    }
    let mut out = vec![BigInt::zero(); n];
    for (i, u) in a.iter().enumerate() {
        if u.is_zero() {
            continue;
        }
        for (j, v) in b.iter().enumerate() {
            if !v.is_zero() {
                out[(i + j) % n] += u * v;
            }
        }
    }
    out
}

/// Remainder of `sum num[m] x^m` modulo `Phi_n`, length `phi(n)`.
fn reduce_mod_cyclotomic(num: &[BigInt]) -> Vec<BigInt> {
    let phi = cyclotomic_poly(num.len());
    let deg = phi.degree();
    if let Some(fast) = to_i128_vec(num).and_then(|v| reduce_i128(v, phi.coeffs())) {
        return fast.into_iter().take(deg).map(BigInt::from).collect();
    }
    let mut rem = num.to_vec();
    for top in (deg..rem.len()).rev() {
        if rem[top].is_zero() {
            continue;
        }
        let c = std::mem::take(&mut rem[top]);
        for (i, &pc) in phi.coeffs()[..deg].iter().enumerate() {
            if pc != 0 {
                rem[top - deg + i] -= &c * pc;
            }
        }
    }
    rem.truncate(deg);
    rem
}

fn reduce_i128(mut rem: Vec<i128>, phi: &[i64]) -> Option<Vec<i128>> {
    let deg = phi.len() - 1;
    for top in (deg..rem.len()).rev() {
        let c = rem[top];
        if c == 0 {
            continue;
        }
        rem[top] = 0;
        for (i, &pc) in phi[..deg].iter().enumerate() {
            if pc != 0 {
                let slot = &mut rem[top - deg + i];
                *slot = slot.checked_sub(c.checked_mul(pc as i128)?)?;
            }
        }
    }
    rem.truncate(deg);
    Some(rem)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn rat(n: i64, d: i64) -> Rat {
        Rat::new(n.into(), d.into())
    }

    fn z(n: usize, m: i64) -> GroupRingElement {
        GroupRingElement::unit(n, m)
    }

    #[test]
    fn units() {
        assert_eq!(z(4, 0).to_rational().unwrap(), rat(1, 1));
        assert_eq!(z(4, 2).canonical(), vec![rat(-1, 1), rat(0, 1)]);
        assert_eq!(z(4, 5), z(4, 1));
        assert_eq!(z(4, -1), z(4, 3));
    }

    #[test]
    fn add_and_scale() {
        assert!(z(4, 1).add(&z(4, 3)).unwrap().is_zero());
        let fifth = z(5, 0).scale(&rat(1, 5));
        assert_eq!(fifth.to_rational().unwrap(), rat(1, 5));
        assert_eq!(z(4, 0).add(&z(6, 0)), Err(Error::OrderMismatch(4, 6)));
    }

    #[test]
    fn multiply() {
        assert_eq!(z(4, 1).mul(&z(4, 3)).unwrap(), GroupRingElement::one(4));
        let a = z(4, 0).add(&z(4, 1)).unwrap();
        let b = z(4, 0).sub(&z(4, 1)).unwrap();
        assert_eq!(a.mul(&b).unwrap().to_rational().unwrap(), rat(2, 1));
        assert!(z(4, 1).mul(&z(3, 1)).is_err());
    }

    #[test]
    fn cyclotomic_polynomials() {
        assert_eq!(cyclotomic_poly(1).coeffs(), &[-1, 1]);
        assert_eq!(cyclotomic_poly(2).coeffs(), &[1, 1]);
        assert_eq!(cyclotomic_poly(4).coeffs(), &[1, 0, 1]);
        assert_eq!(cyclotomic_poly(12).coeffs(), &[1, 0, -1, 0, 1]);
        assert_eq!(cyclotomic_poly(12).to_string(), "x^4 - x^2 + 1");
        // first order with a coefficient outside {-1, 0, 1}
        assert!(cyclotomic_poly(105).coeffs().contains(&-2));
    }

    /// x^n - 1 = prod_{d | n} Phi_d, checked by naive polynomial products.
    #[test]
    fn cyclotomic_divisor_product() {
        for n in [1usize, 6, 8, 12, 15, 16, 18, 30, 36, 48, 60] {
            let mut prod = vec![1i64];
            for d in (1..=n).filter(|d| n % d == 0) {
                let f = cyclotomic_poly(d);
                assert!(f.is_monic());
                assert_eq!(f.degree(), euler_phi(d));
                let mut next = vec![0i64; prod.len() + f.degree()];
                for (i, a) in prod.iter().enumerate() {
                    for (j, b) in f.coeffs().iter().enumerate() {
                        next[i + j] += a * b;
                    }
                }
                prod = next;
            }
            let mut expect = vec![0i64; n + 1];
            expect[0] = -1;
            expect[n] = 1;
            assert_eq!(prod, expect, "n={n}");
        }
    }

    #[test]
    fn canonical_forms() {
        assert!(GroupRingElement::zero(4)
            .canonical()
            .iter()
            .all(Zero::is_zero));
        let orbit = GroupRingElement::from_counts(&[1, 1, 1, 1]);
        assert!(orbit.is_zero());
        assert_eq!(z(4, 2).to_rational().unwrap(), rat(-1, 1));
        assert!(matches!(z(4, 1).to_rational(), Err(Error::NonRational(_))));
    }

    #[test]
    fn embedding() {
        let i = z(4, 1).embed();
        assert!((i.re).abs() < 1e-12 && (i.im - 1.0).abs() < 1e-12);
        let c = GroupRingElement::constant(4, &rat(2, 5)).embed();
        assert!((c.re - 0.4).abs() < 1e-12 && c.im.abs() < 1e-12);
    }

    #[test]
    fn bigint_paths_agree_with_fast_paths() {
        let big: BigInt = BigInt::from(1u8) << 100usize;
        let a = GroupRingElement::from_parts(
            vec![big.clone(), BigInt::from(3), BigInt::zero()],
            7.into(),
        )
        .unwrap();
        let b = GroupRingElement::from_parts(
            vec![big.clone(), BigInt::from(-1), big.clone()],
            1.into(),
        )
        .unwrap();
        let prod = a.mul(&b).unwrap();
        // (B + 3z)(B - z + B z^2) / 7 with z^3 = 1
        let e = |k: i64, c: BigInt| GroupRingElement::unit(3, k).scale(&Rat::new(c, 7.into()));
        let expect = e(0, &big * &big + 3 * &big)
            .add(&e(1, -&big + 3 * &big))
            .unwrap()
            .add(&e(2, &big * &big - 3))
            .unwrap();
        assert_eq!(prod, expect);
    }

    fn random_element(rng: &mut ChaCha8Rng, n: usize) -> GroupRingElement {
        let num = (0..n)
            .map(|_| BigInt::from(rng.random_range(-9i64..=9)))
            .collect();
        GroupRingElement::from_parts(num, rng.random_range(1i64..=6).into()).unwrap()
    }

    #[test]
    fn ring_laws_on_canonical_forms() {
        let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
        for n in [2usize, 4, 6, 12, 16] {
            for _ in 0..25 {
                let (a, b, c) = (
                    random_element(&mut rng, n),
                    random_element(&mut rng, n),
                    random_element(&mut rng, n),
                );
                let ab = a.mul(&b).unwrap();
                assert_eq!(ab, b.mul(&a).unwrap());
                assert_eq!(ab.mul(&c).unwrap(), a.mul(&b.mul(&c).unwrap()).unwrap());
                assert_eq!(
                    a.mul(&b.add(&c).unwrap()).unwrap(),
                    ab.add(&a.mul(&c).unwrap()).unwrap()
                );
                assert_eq!(a.add(&b).unwrap(), b.add(&a).unwrap());
                let via_canon = GroupRingElement::from_parts(
                    a.canonical()
                        .iter()
                        .map(|r| r * Rat::from_integer(a.denominator().clone()))
                        .map(|r| r.to_integer())
                        .chain(std::iter::repeat(BigInt::zero()))
                        .take(n)
                        .collect(),
                    a.denominator().clone(),
                )
                .unwrap();
                assert!((a.embed() - via_canon.embed()).norm() < 1e-6);
            }
        }
    }

    #[test]
    fn rational_round_trip() {
        for (p, q) in [(0, 1), (2, 5), (-7, 3), (13, 1)] {
            for n in [1usize, 4, 12] {
                let r = rat(p, q);
                assert_eq!(GroupRingElement::constant(n, &r).to_rational().unwrap(), r);
                assert_eq!(GroupRingElement::one(n).scale(&r).to_rational().unwrap(), r);
            }
        }
    }

    #[test]
    fn rat_format() {
        assert_eq!(format_rat(&rat(8, 1)), "8/1");
        assert_eq!(format_rat(&rat(-6, 13)), "-6/13");
        assert_eq!(format_rat(&rat(0, 5)), "0/1");
    }
}
