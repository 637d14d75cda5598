//! Finite fields `F_q`, `q = p^r`, `p` an odd prime.
//!
//! A [`FieldCtx`] is fully tabulated at construction: elements are numbered
//! by their position in the canonical order (coefficient tuples
//! `(c_0, ..., c_{r-1})` compared lexicographically, so `c_0` is the most
//! significant digit), and arithmetic runs through exponent, discrete-log and
//! Zech-log tables. Construction is deterministic: the modulus is the
//! lexicographically smallest monic irreducible of degree `r` and the
//! generator is the first element of order `q - 1` in canonical order.

use std::fmt;

use crate::{Error, Result};

/// Default upper bound on `q`. Group-ring products are `O(q^2)`.
pub const DEFAULT_Q_CAP: u64 = 1 << 16;

/// Construction is refused above this size regardless of the configured cap.
const HARD_Q_LIMIT: u64 = 1 << 24;

const NONE: u32 = u32::MAX;

/// An element of some [`FieldCtx`], stored as its position in canonical order.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FieldElement(u32);

impl FieldElement {
    pub const ZERO: FieldElement = FieldElement(0);

    pub fn index(self) -> u32 {
        self.0
    }

    pub fn is_zero(self) -> bool {
        self.0 == 0
    }
}

impl fmt::Display for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "#{}", self.0)
    }
}

#[derive(Clone, PartialEq, Eq)]
pub struct FieldCtx {
    p: u32,
    r: u32,
    q: u32,
    /// `c_0, ..., c_{r-1}, 1`
    modulus: Vec<u32>,
    gen: FieldElement,
    /// `exp[k]` is the index of `gen^k`, `0 <= k < q - 1`.
    exp: Vec<u32>,
    /// `log[i]` is the discrete log of element `i`; `NONE` at zero.
    log: Vec<u32>,
    /// `zech[k] = log(1 + gen^k)`, `NONE` where `1 + gen^k = 0`.
    zech: Vec<u32>,
}

impl fmt::Debug for FieldCtx {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FieldCtx")
            .field("p", &self.p)
            .field("r", &self.r)
            .field("q", &self.q)
            .field("modulus", &self.modulus)
            .field("gen", &self.gen)
            .finish()
    }
}

/// Builds `F_{p^r}` under the default size cap.
pub fn make_field(p: u64, r: u32) -> Result<FieldCtx> {
    FieldCtx::with_cap(p, r, DEFAULT_Q_CAP)
}

impl FieldCtx {
    pub fn new(p: u64, r: u32) -> Result<Self> {
        make_field(p, r)
    }

    pub fn with_cap(p: u64, r: u32, cap: u64) -> Result<Self> {
        if p.is_multiple_of(2) {
            return Err(Error::InvalidField(format!(
                "characteristic {p} is even; only odd characteristic is supported"
            )));
        }
        if !is_prime(p) {
            return Err(Error::InvalidField(format!("{p} is not prime")));
        }
        if r < 1 {
            return Err(Error::InvalidField("degree r must be at least 1".into()));
        }
        let q = p
            .checked_pow(r)
            .filter(|&q| q <= cap.min(HARD_Q_LIMIT))
            .ok_or_else(|| {
                Error::InvalidField(format!(
                    "q = {p}^{r} exceeds the cap {}",
                    cap.min(HARD_Q_LIMIT)
                ))
            })?;
        let (p, q) = (p as u32, q as u32);

        let modulus = smallest_irreducible(p, r);
        let arith = PolyArith {
            p,
            r: r as usize,
            modulus: &modulus,
        };
        let n = q - 1;
        let gen = find_generator(&arith, q, n);

        let mut exp = Vec::with_capacity(n as usize);
        let mut log = vec![NONE; q as usize];
        let mut cur = arith.one();
        let gen_poly = arith.decode(gen);
        for k in 0..n {
            let idx = arith.encode(&cur);
            debug_assert_eq!(log[idx as usize], NONE, "generator order below q - 1");
            exp.push(idx);
            log[idx as usize] = k;
            cur = arith.mul(&cur, &gen_poly);
        }

        let mut zech = Vec::with_capacity(n as usize);
        for k in 0..n {
            let mut v = arith.decode(exp[k as usize]);
            v[0] = (v[0] + 1) % p;
            let idx = arith.encode(&v);
            zech.push(if idx == 0 { NONE } else { log[idx as usize] });
        }

        Ok(FieldCtx {
            p,
            r,
            q,
            modulus,
            gen: FieldElement(gen),
            exp,
            log,
            zech,
        })
    }

    pub fn p(&self) -> u64 {
        self.p as u64
    }

    pub fn r(&self) -> u32 {
        self.r
    }

    pub fn q(&self) -> u64 {
        self.q as u64
    }

    /// Order of the multiplicative group, `q - 1`.
    pub fn order(&self) -> usize {
        (self.q - 1) as usize
    }

    pub fn is_prime_field(&self) -> bool {
        self.r == 1
    }

    /// Monic modulus, constant term first (`c_0, ..., c_{r-1}, 1`).
    pub fn modulus(&self) -> &[u32] {
        &self.modulus
    }

    pub fn generator(&self) -> FieldElement {
        self.gen
    }

    pub fn contains(&self, x: FieldElement) -> bool {
        x.0 < self.q
    }

    /// All `q` elements in canonical order, starting at zero.
    pub fn elements(&self) -> impl Iterator<Item = FieldElement> + '_ {
        (0..self.q).map(FieldElement)
    }

    pub fn nonzero_elements(&self) -> impl Iterator<Item = FieldElement> + '_ {
        (1..self.q).map(FieldElement)
    }

    pub fn element(&self, index: u32) -> Result<FieldElement> {
        if index < self.q {
            Ok(FieldElement(index))
        } else {
            Err(Error::ForeignElement)
        }
    }

    pub fn zero(&self) -> FieldElement {
        FieldElement::ZERO
    }

    pub fn one(&self) -> FieldElement {
        FieldElement(self.exp[0])
    }

    pub fn minus_one(&self) -> FieldElement {
        FieldElement(self.exp[self.order() / 2])
    }

    /// Embeds an integer via `Z -> F_p -> F_q`.
    pub fn from_int(&self, v: i64) -> FieldElement {
        let c = v.rem_euclid(self.p as i64) as u32;
        FieldElement(c * self.p.pow(self.r - 1))
    }

    /// Element with the given polynomial coefficients (constant term first).
    /// Entries are reduced mod `p`; missing high coefficients are zero.
    pub fn from_coeffs(&self, coeffs: &[i64]) -> Result<FieldElement> {
        if coeffs.len() > self.r as usize {
            return Err(Error::InvalidField(format!(
                "{} coefficients given for a degree-{} extension",
                coeffs.len(),
                self.r
            )));
        }
        let mut idx = 0u32;
        for i in 0..self.r as usize {
            let c = coeffs
                .get(i)
                .copied()
                .unwrap_or(0)
                .rem_euclid(self.p as i64) as u32;
            idx = idx * self.p + c;
        }
        Ok(FieldElement(idx))
    }

    /// Polynomial coefficients of `x`, constant term first.
    pub fn coeffs(&self, x: FieldElement) -> Vec<u32> {
        index_to_coeffs(x.0, self.p, self.r)
    }

    /// Integer label for prime-field elements, `"c0,c1,..."` otherwise.
    pub fn format_element(&self, x: FieldElement) -> String {
        if self.r == 1 {
            x.0.to_string()
        } else {
            self.coeffs(x)
                .iter()
                .map(|c| c.to_string())
                .collect::<Vec<_>>()
                .join(",")
        }
    }

    /// Discrete logarithm to the base [`generator`](Self::generator).
    pub fn dlog(&self, x: FieldElement) -> Result<u32> {
        match self.log.get(x.0 as usize) {
            Some(&NONE) => Err(Error::LogOfZero),
            Some(&k) => Ok(k),
            None => Err(Error::ForeignElement),
        }
    }

    /// `gen^k`.
    pub fn exp(&self, k: u64) -> FieldElement {
        FieldElement(self.exp[(k % self.order() as u64) as usize])
    }

    #[inline]
    pub(crate) fn log_opt(&self, x: FieldElement) -> Option<u32> {
        let k = self.log[x.0 as usize];
        (k != NONE).then_some(k)
    }

    /// `log(1 + gen^k)`, or `None` where `1 + gen^k = 0`.
    #[inline]
    pub(crate) fn zech(&self, k: u32) -> Option<u32> {
        let z = self.zech[k as usize];
        (z != NONE).then_some(z)
    }

    #[inline]
    pub fn add(&self, x: FieldElement, y: FieldElement) -> FieldElement {
        if x.0 == 0 {
            return y;
        }
        if y.0 == 0 {
            return x;
        }
        let n = self.q - 1;
        let (lx, ly) = (self.log[x.0 as usize], self.log[y.0 as usize]);
        let d = (ly + n - lx) % n;
        match self.zech(d) {
            None => FieldElement::ZERO,
            Some(z) => FieldElement(self.exp[((lx + z) % n) as usize]),
        }
    }

    #[inline]
    pub fn neg(&self, x: FieldElement) -> FieldElement {
        if x.0 == 0 {
            return x;
        }
        let n = self.q - 1;
        FieldElement(self.exp[((self.log[x.0 as usize] + n / 2) % n) as usize])
    }

    #[inline]
    pub fn sub(&self, x: FieldElement, y: FieldElement) -> FieldElement {
        self.add(x, self.neg(y))
    }

    #[inline]
    pub fn mul(&self, x: FieldElement, y: FieldElement) -> FieldElement {
        if x.0 == 0 || y.0 == 0 {
            return FieldElement::ZERO;
        }
        let n = self.q - 1;
        FieldElement(self.exp[((self.log[x.0 as usize] + self.log[y.0 as usize]) % n) as usize])
    }

    #[inline]
    pub fn square(&self, x: FieldElement) -> FieldElement {
        self.mul(x, x)
    }

    pub fn inv(&self, x: FieldElement) -> Result<FieldElement> {
        if x.0 == 0 {
            return Err(Error::DivisionByZero);
        }
        let n = self.q - 1;
        Ok(FieldElement(
            self.exp[((n - self.log[x.0 as usize]) % n) as usize],
        ))
    }

    pub fn div(&self, x: FieldElement, y: FieldElement) -> Result<FieldElement> {
        Ok(self.mul(x, self.inv(y)?))
    }

    /// Square-and-multiply; `pow(x, 0) = 1` for every `x`, including zero.
    pub fn pow(&self, x: FieldElement, mut e: u64) -> FieldElement {
        let mut base = x;
        let mut acc = self.one();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.square(base);
            e >>= 1;
        }
        acc
    }

    /// Nonzero square test.
    pub fn is_square(&self, x: FieldElement) -> bool {
        self.log_opt(x).is_some_and(|k| k % 2 == 0)
    }
}

pub(crate) fn index_to_coeffs(mut idx: u32, p: u32, r: u32) -> Vec<u32> {
    let mut c = vec![0u32; r as usize];
    for slot in c.iter_mut().rev() {
        *slot = idx % p;
        idx /= p;
    }
    c
}

/// Deterministic trial-division primality test.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n.is_multiple_of(2) {
        return n == 2;
    }
    let mut d = 3u64;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 2;
    }
    true
}

/// `Some((p, r))` when `q = p^r` with `p` an odd prime.
pub fn odd_prime_power(q: u64) -> Option<(u64, u32)> {
    if q < 3 || q.is_multiple_of(2) {
        return None;
    }
    let p = (3..=q).step_by(2).find(|d| q.is_multiple_of(*d))?;
    let (mut m, mut r) = (q, 0u32);
    while m % p == 0 {
        m /= p;
        r += 1;
    }
    (m == 1).then_some((p, r))
}

/// Odd prime powers `3 <= q <= max` in increasing order.
pub fn odd_prime_powers(max: u64) -> Vec<u64> {
    (3..=max)
        .filter(|&q| odd_prime_power(q).is_some())
        .collect()
}

fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            out.push(d);
            while n.is_multiple_of(d) {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

/// Polynomial arithmetic modulo a monic modulus, used only while building
/// the tables. Residues are coefficient vectors of length `r`.
struct PolyArith<'a> {
    p: u32,
    r: usize,
    modulus: &'a [u32],
}

impl PolyArith<'_> {
    fn one(&self) -> Vec<u32> {
        let mut v = vec![0; self.r];
        v[0] = 1;
        v
    }

    fn encode(&self, v: &[u32]) -> u32 {
        v.iter().fold(0, |acc, &c| acc * self.p + c)
    }

    fn decode(&self, idx: u32) -> Vec<u32> {
        index_to_coeffs(idx, self.p, self.r as u32)
    }

    fn mul(&self, a: &[u32], b: &[u32]) -> Vec<u32> {
        let p = self.p as u64;
        let mut prod = vec![0u64; 2 * self.r - 1];
        for (i, &x) in a.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (j, &y) in b.iter().enumerate() {
                prod[i + j] = (prod[i + j] + x as u64 * y as u64) % p;
            }
        }
        // x^r = -(c_0 + ... + c_{r-1} x^{r-1})
        for top in (self.r..prod.len()).rev() {
            let c = prod[top];
            if c == 0 {
                continue;
            }
            prod[top] = 0;
            for (i, &m) in self.modulus[..self.r].iter().enumerate() {
                let slot = top - self.r + i;
                prod[slot] = (prod[slot] + (p - c) * m as u64) % p;
            }
        }
        prod[..self.r].iter().map(|&c| c as u32).collect()
    }

    fn pow(&self, a: &[u32], mut e: u64) -> Vec<u32> {
        let mut base = a.to_vec();
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
}

fn find_generator(arith: &PolyArith<'_>, q: u32, n: u32) -> u32 {
    let factors = prime_factors(n as u64);
    let one = arith.one();
    (1..q)
        .find(|&idx| {
            let x = arith.decode(idx);
            factors.iter().all(|&l| arith.pow(&x, n as u64 / l) != one)
        })
        .expect("the multiplicative group of a finite field is cyclic")
}

/// Remainder of `f` modulo monic `g` over `F_p`; both constant term first.
fn poly_rem(f: &[u32], g: &[u32], p: u32) -> Vec<u32> {
    let p = p as u64;
    let mut rem: Vec<u64> = f.iter().map(|&c| c as u64).collect();
    let dg = g.len() - 1;
    for top in (dg..rem.len()).rev() {
        let c = rem[top];
        if c == 0 {
            continue;
        }
        for (i, &gc) in g.iter().enumerate() {
            let slot = top - dg + i;
            rem[slot] = (rem[slot] + (p - c) * gc as u64) % p;
        }
    }
    rem.truncate(dg);
    rem.into_iter().map(|c| c as u32).collect()
}

fn is_irreducible(f: &[u32], p: u32) -> bool {
    let r = f.len() - 1;
    for d in 1..=r / 2 {
        for idx in 0..(p as u64).pow(d as u32) {
            let mut g = index_to_coeffs(idx as u32, p, d as u32);
            g.push(1);
            if poly_rem(f, &g, p).iter().all(|&c| c == 0) {
                return false;
            }
        }
    }
    true
}

/// Lexicographically smallest monic irreducible of degree `r`, as
/// `c_0, ..., c_{r-1}, 1`. For `r = 1` this is `x`.
fn smallest_irreducible(p: u32, r: u32) -> Vec<u32> {
    (0..p.pow(r))
        .map(|idx| {
            let mut f = index_to_coeffs(idx, p, r);
            f.push(1);
            f
        })
        .find(|f| is_irreducible(f, p))
        .expect("irreducible polynomials exist in every degree")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn f5_generator_and_logs() {
        let f = make_field(5, 1).unwrap();
        assert_eq!(f.q(), 5);
        assert_eq!(f.generator(), f.from_int(2));
        assert_eq!(f.dlog(f.from_int(4)).unwrap(), 2);
        assert_eq!(f.dlog(f.one()).unwrap(), 0);
        assert_eq!(f.dlog(f.zero()), Err(Error::LogOfZero));
    }

    #[test]
    fn f5_dlog_of_generator_is_one() {
        let f = make_field(5, 1).unwrap();
        assert_eq!(f.dlog(f.generator()).unwrap(), 1);
    }

    #[test]
    fn rejects_bad_parameters() {
        for (p, r) in [(4, 1), (2, 3), (9, 1), (15, 2), (1, 1)] {
            assert!(
                matches!(make_field(p, r), Err(Error::InvalidField(_))),
                "({p},{r})"
            );
        }
        assert!(matches!(make_field(5, 0), Err(Error::InvalidField(_))));
        assert!(matches!(make_field(3, 11), Err(Error::InvalidField(_))));
        assert!(FieldCtx::with_cap(3, 11, 1 << 18).is_ok());
    }

    #[test]
    fn prime_field_arithmetic() {
        let f = make_field(5, 1).unwrap();
        assert_eq!(f.inv(f.from_int(3)).unwrap(), f.from_int(2));
        assert_eq!(f.neg(f.from_int(1)), f.from_int(4));
        assert_eq!(f.inv(f.zero()), Err(Error::DivisionByZero));
        assert_eq!(f.add(f.from_int(3), f.from_int(4)), f.from_int(2));
        assert_eq!(f.sub(f.from_int(1), f.from_int(3)), f.from_int(3));
        assert_eq!(f.pow(f.from_int(2), 5), f.from_int(2));
        assert_eq!(f.pow(f.zero(), 0), f.one());
        assert_eq!(f.from_int(-1), f.minus_one());
    }

    #[test]
    fn f9_modulus_is_t2_plus_1() {
        let f = make_field(3, 2).unwrap();
        assert_eq!(f.modulus(), &[1, 0, 1]);
        let t = f.from_coeffs(&[0, 1]).unwrap();
        assert_eq!(f.mul(t, t), f.minus_one());
    }

    #[test]
    fn element_order_is_lexicographic_from_zero() {
        let f5 = make_field(5, 1).unwrap();
        let labels: Vec<_> = f5.elements().map(|x| f5.format_element(x)).collect();
        assert_eq!(labels, ["0", "1", "2", "3", "4"]);

        let f9 = make_field(3, 2).unwrap();
        let tuples: Vec<_> = f9.elements().map(|x| f9.coeffs(x)).collect();
        assert_eq!(tuples.len(), 9);
        assert_eq!(tuples[0], [0, 0]);
        let mut sorted = tuples.clone();
        sorted.sort();
        assert_eq!(tuples, sorted);
    }

    #[test]
    fn construction_is_deterministic() {
        let a = make_field(5, 2).unwrap();
        let b = make_field(5, 2).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn generator_completeness_and_log_homomorphism() {
        for q in odd_prime_powers(121) {
            let (p, r) = odd_prime_power(q).unwrap();
            let f = make_field(p, r).unwrap();
            let n = f.order() as u64;
            let mut seen: Vec<_> = (0..n).map(|k| f.exp(k)).collect();
            seen.sort();
            seen.dedup();
            assert_eq!(seen, f.nonzero_elements().collect::<Vec<_>>(), "q={q}");
            assert_eq!(f.minus_one(), f.exp(n / 2));
            assert_eq!(f.add(f.minus_one(), f.one()), f.zero());
            for x in f.nonzero_elements().step_by(7) {
                for y in f.nonzero_elements().step_by(5) {
                    let lhs = f.dlog(f.mul(x, y)).unwrap() as u64;
                    let rhs = (f.dlog(x).unwrap() + f.dlog(y).unwrap()) as u64 % n;
                    assert_eq!(lhs, rhs);
                }
            }
        }
    }

    #[test]
    fn zech_addition_matches_coefficient_addition() {
        for (p, r) in [(3, 3), (5, 2), (7, 2)] {
            let f = make_field(p, r).unwrap();
            for x in f.elements() {
                for y in f.elements() {
                    let (cx, cy) = (f.coeffs(x), f.coeffs(y));
                    let sum: Vec<i64> = cx.iter().zip(&cy).map(|(a, b)| (a + b) as i64).collect();
                    assert_eq!(f.add(x, y), f.from_coeffs(&sum).unwrap());
                }
            }
        }
    }

    #[test]
    fn modulus_is_irreducible() {
        for (p, r) in [(3, 2), (3, 3), (3, 4), (5, 2), (7, 2), (3, 5)] {
            let f = make_field(p, r).unwrap();
            assert!(is_irreducible(f.modulus(), p as u32));
        }
        assert!(!is_irreducible(&[2, 0, 1], 3)); // x^2 + 2 = (x+1)(x+2)
    }

    #[test]
    fn prime_power_helpers() {
        assert_eq!(odd_prime_power(27), Some((3, 3)));
        assert_eq!(odd_prime_power(45), None);
        assert_eq!(odd_prime_power(8), None);
        assert_eq!(odd_prime_powers(13), [3, 5, 7, 9, 11, 13]);
    }
}
